//! Report serialization: CSV, JSON and SVG renderings of score matrices,
//! dependency sets and preservation reports.
//!
//! Every rendering is a pure function of its inputs (plus an explicit
//! timestamp string), so identical runs produce byte-identical files.
//! JSON schemas carry a `schema_version` field; the layouts are
//! documented in the repository README.

use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::compare::{FdKey, PreservationReport};
use crate::error::{Error, Result};
use crate::fd::FDSet;
use crate::qscore::{histogram, QMatrix, QScore, HISTOGRAM_LABELS};
use crate::ratio::decimal6;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Serialize)]
struct QScoreView {
    numerator: i64,
    denominator: i64,
    decimal: String,
}

impl From<&QScore> for QScoreView {
    fn from(q: &QScore) -> Self {
        QScoreView {
            numerator: *q.value.numer(),
            denominator: *q.value.denom(),
            decimal: q.decimal(),
        }
    }
}

fn render_fd_key(key: &FdKey) -> String {
    format!("{} -> {}", key.0.join(","), key.1)
}

fn json_string(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

// ── Score matrix ──────────────────────────────────────────────────────

/// CSV with one row per ordered column pair:
/// `a,b,q_numerator,q_denominator,q_decimal,class,card_a,card_b,pair_count`.
pub fn qmatrix_csv(matrix: &QMatrix) -> String {
    let mut out = String::from("a,b,q_numerator,q_denominator,q_decimal,class,card_a,card_b,pair_count\n");
    for e in &matrix.entries {
        let q = &e.score;
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            csv_field(matrix.name_of(e.a)),
            csv_field(matrix.name_of(e.b)),
            q.value.numer(),
            q.value.denom(),
            q.decimal(),
            q.class(),
            q.card_a,
            q.card_b,
            q.pair_count
        ));
    }
    out
}

#[derive(Serialize)]
struct QMatrixJson<'a> {
    schema_version: &'static str,
    kind: &'static str,
    dataset: &'a str,
    columns: Vec<&'a str>,
    entries: Vec<QEntryJson<'a>>,
}

#[derive(Serialize)]
struct QEntryJson<'a> {
    a: &'a str,
    b: &'a str,
    q: QScoreView,
    class: crate::qscore::DependencyClass,
    card_a: usize,
    card_b: usize,
    pair_count: usize,
}

pub fn qmatrix_json(matrix: &QMatrix) -> String {
    let view = QMatrixJson {
        schema_version: SCHEMA_VERSION,
        kind: "qmatrix",
        dataset: &matrix.dataset,
        columns: matrix.columns.iter().map(|&c| matrix.name_of(c)).collect(),
        entries: matrix
            .entries
            .iter()
            .map(|e| QEntryJson {
                a: matrix.name_of(e.a),
                b: matrix.name_of(e.b),
                q: (&e.score).into(),
                class: e.score.class(),
                card_a: e.score.card_a,
                card_b: e.score.card_b,
                pair_count: e.score.pair_count,
            })
            .collect(),
    };
    json_string(&view)
}

/// Histogram of the matrix scores over the fixed bins, as `bin,count` CSV.
pub fn histogram_csv(matrix: &QMatrix) -> String {
    let counts = histogram(matrix);
    let mut out = String::from("bin,count\n");
    for (label, count) in HISTOGRAM_LABELS.iter().zip(counts.iter()) {
        out.push_str(&format!("{},{}\n", csv_field(label), count));
    }
    out
}

// ── Dependency sets ───────────────────────────────────────────────────

/// Plain-text rendering: one sorted `"A,B -> C"` line per dependency.
pub fn fdset_text(set: &FDSet) -> String {
    let mut out = String::new();
    for line in set.render_lines() {
        out.push_str(&line);
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct FdSetJson<'a> {
    schema_version: &'static str,
    kind: &'static str,
    dataset: &'a str,
    max_lhs: usize,
    columns: &'a [String],
    fds: Vec<FdJson<'a>>,
    /// Distinct key left sides among the dependencies, sorted.
    minimal_keys: Vec<&'a [String]>,
}

#[derive(Serialize)]
struct FdJson<'a> {
    lhs: &'a [String],
    rhs: &'a str,
    key_lhs: bool,
}

pub fn fdset_json(set: &FDSet) -> String {
    let mut minimal_keys: Vec<&[String]> = set
        .fds
        .iter()
        .filter(|fd| fd.key_lhs)
        .map(|fd| fd.lhs.as_slice())
        .collect();
    minimal_keys.sort();
    minimal_keys.dedup();
    let view = FdSetJson {
        schema_version: SCHEMA_VERSION,
        kind: "fdset",
        dataset: &set.dataset,
        max_lhs: set.max_lhs,
        columns: &set.columns,
        fds: set
            .fds
            .iter()
            .map(|fd| FdJson { lhs: &fd.lhs, rhs: &fd.rhs, key_lhs: fd.key_lhs })
            .collect(),
        minimal_keys,
    };
    json_string(&view)
}

// ── Preservation report ───────────────────────────────────────────────

#[derive(Serialize)]
struct ReportJson<'a> {
    schema_version: &'static str,
    kind: &'static str,
    generated_at: &'a str,
    real_dataset: &'a str,
    synthetic_dataset: &'a str,
    real_rows: usize,
    synthetic_rows: usize,
    mode: crate::compare::CompareMode,
    epsilon: String,
    max_lhs: usize,
    columns: &'a [String],
    ld_preserved_percent: String,
    ld_pairs_total: usize,
    ld_pairs_preserved: usize,
    venn: VennJson,
    verdicts: Vec<VerdictJson<'a>>,
    scatter: Vec<ScatterJson<'a>>,
}

#[derive(Serialize)]
struct VennJson {
    real_only: usize,
    shared: usize,
    synthetic_only: usize,
    real_only_fds: Vec<String>,
    shared_fds: Vec<String>,
    synthetic_only_fds: Vec<String>,
}

#[derive(Serialize)]
struct VerdictJson<'a> {
    a: &'a str,
    b: &'a str,
    q_real: QScoreView,
    q_synth: QScoreView,
    class_real: crate::qscore::DependencyClass,
    class_synth: crate::qscore::DependencyClass,
    status: crate::compare::VerdictStatus,
    violations: Vec<[&'a str; 2]>,
}

#[derive(Serialize)]
struct ScatterJson<'a> {
    a: &'a str,
    b: &'a str,
    q_real: String,
    q_synth: String,
}

pub fn report_json(report: &PreservationReport, generated_at: &str) -> String {
    let view = ReportJson {
        schema_version: SCHEMA_VERSION,
        kind: "preservation_report",
        generated_at,
        real_dataset: &report.real_dataset,
        synthetic_dataset: &report.synthetic_dataset,
        real_rows: report.real_rows,
        synthetic_rows: report.synthetic_rows,
        mode: report.mode,
        epsilon: decimal6(report.epsilon),
        max_lhs: report.max_lhs,
        columns: &report.columns,
        ld_preserved_percent: report.ld_preserved_display(),
        ld_pairs_total: report.ld_pairs_total,
        ld_pairs_preserved: report.ld_pairs_preserved,
        venn: VennJson {
            real_only: report.venn.real_only.len(),
            shared: report.venn.shared.len(),
            synthetic_only: report.venn.synthetic_only.len(),
            real_only_fds: report.venn.real_only.iter().map(render_fd_key).collect(),
            shared_fds: report.venn.shared.iter().map(render_fd_key).collect(),
            synthetic_only_fds: report.venn.synthetic_only.iter().map(render_fd_key).collect(),
        },
        verdicts: report
            .verdicts
            .iter()
            .map(|v| VerdictJson {
                a: &v.a,
                b: &v.b,
                q_real: (&v.q_real).into(),
                q_synth: (&v.q_synth).into(),
                class_real: v.class_real,
                class_synth: v.class_synth,
                status: v.status,
                violations: v
                    .violations
                    .iter()
                    .map(|(x, y)| [x.as_str(), y.as_str()])
                    .collect(),
            })
            .collect(),
        scatter: report
            .scatter
            .iter()
            .map(|p| ScatterJson {
                a: &p.a,
                b: &p.b,
                q_real: p.q_real.decimal(),
                q_synth: p.q_synth.decimal(),
            })
            .collect(),
    };
    json_string(&view)
}

/// Scatter-and-verdict CSV with one row per ordered pair:
/// `a,b,q_real,q_synth,class_real,class_synth,status`.
pub fn report_csv(report: &PreservationReport) -> String {
    let mut out = String::from("a,b,q_real,q_synth,class_real,class_synth,status\n");
    for v in &report.verdicts {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            csv_field(&v.a),
            csv_field(&v.b),
            v.q_real.decimal(),
            v.q_synth.decimal(),
            v.class_real,
            v.class_synth,
            v.status
        ));
    }
    out
}

// ── SVG ───────────────────────────────────────────────────────────────

const SVG_SIZE: f64 = 800.0;
const SVG_MARGIN: f64 = 70.0;

fn px(v: f64) -> String {
    format!("{v:.2}")
}

/// Unit-axes scatter plot of real vs synthetic scores with the diagonal.
pub fn scatter_svg(report: &PreservationReport) -> String {
    let inner = SVG_SIZE - 2.0 * SVG_MARGIN;
    let x = |q: f64| SVG_MARGIN + q * inner;
    let y = |q: f64| SVG_SIZE - SVG_MARGIN - q * inner;

    let mut s = String::new();
    s.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{0}\" viewBox=\"0 0 {0} {0}\">\n",
        SVG_SIZE as u32
    ));
    s.push_str("  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    s.push_str(&format!(
        "  <text x=\"{}\" y=\"30\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"18\">{} vs {}</text>\n",
        px(SVG_SIZE / 2.0),
        xml_escape(&report.real_dataset),
        xml_escape(&report.synthetic_dataset)
    ));

    // Axes with ticks every 0.2.
    s.push_str(&format!(
        "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
        px(x(0.0)), px(y(0.0)), px(x(1.0)), px(y(0.0))
    ));
    s.push_str(&format!(
        "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
        px(x(0.0)), px(y(0.0)), px(x(0.0)), px(y(1.0))
    ));
    for i in 0..=5 {
        let q = i as f64 / 5.0;
        let label = format!("{:.1}", q);
        s.push_str(&format!(
            "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
            px(x(q)), px(y(0.0)), px(x(q)), px(y(0.0) + 6.0)
        ));
        s.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">{}</text>\n",
            px(x(q)), px(y(0.0) + 22.0), label
        ));
        s.push_str(&format!(
            "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
            px(x(0.0) - 6.0), px(y(q)), px(x(0.0)), px(y(q))
        ));
        s.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">{}</text>\n",
            px(x(0.0) - 10.0), px(y(q) + 4.0), label
        ));
    }
    s.push_str(&format!(
        "  <text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">Q (real)</text>\n",
        px(SVG_SIZE / 2.0), px(SVG_SIZE - 20.0)
    ));
    s.push_str(&format!(
        "  <text x=\"20\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" transform=\"rotate(-90 20 {})\">Q (synthetic)</text>\n",
        px(SVG_SIZE / 2.0), px(SVG_SIZE / 2.0)
    ));

    // Diagonal: preserved pairs sit on it.
    s.push_str(&format!(
        "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"gray\" stroke-dasharray=\"6,4\"/>\n",
        px(x(0.0)), px(y(0.0)), px(x(1.0)), px(y(1.0))
    ));

    for p in &report.scatter {
        let qr: f64 = *p.q_real.value.numer() as f64 / *p.q_real.value.denom() as f64;
        let qs: f64 = *p.q_synth.value.numer() as f64 / *p.q_synth.value.denom() as f64;
        s.push_str(&format!(
            "  <circle cx=\"{}\" cy=\"{}\" r=\"5\" fill=\"steelblue\" fill-opacity=\"0.6\"><title>{} / {}</title></circle>\n",
            px(x(qr)),
            px(y(qs)),
            xml_escape(&p.a),
            xml_escape(&p.b)
        ));
    }
    s.push_str("</svg>\n");
    s
}

/// Two-circle Venn diagram of the mined dependency sets with counts.
pub fn venn_svg(report: &PreservationReport) -> String {
    let (real_only, shared, synth_only) = report.venn.counts();
    let mut s = String::new();
    s.push_str(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"400\" viewBox=\"0 0 800 400\">\n",
    );
    s.push_str("  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    s.push_str(&format!(
        "  <text x=\"400\" y=\"36\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"18\">Functional dependencies: {} vs {}</text>\n",
        xml_escape(&report.real_dataset),
        xml_escape(&report.synthetic_dataset)
    ));
    s.push_str("  <circle cx=\"320\" cy=\"220\" r=\"130\" fill=\"coral\" fill-opacity=\"0.5\" stroke=\"black\"/>\n");
    s.push_str("  <circle cx=\"480\" cy=\"220\" r=\"130\" fill=\"mediumseagreen\" fill-opacity=\"0.5\" stroke=\"black\"/>\n");
    s.push_str(&format!(
        "  <text x=\"250\" y=\"226\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"24\">{real_only}</text>\n"
    ));
    s.push_str(&format!(
        "  <text x=\"400\" y=\"226\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"24\">{shared}</text>\n"
    ));
    s.push_str(&format!(
        "  <text x=\"550\" y=\"226\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"24\">{synth_only}</text>\n"
    ));
    s.push_str("  <text x=\"250\" y=\"380\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">real</text>\n");
    s.push_str("  <text x=\"550\" y=\"380\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">synthetic</text>\n");
    s.push_str("</svg>\n");
    s
}

// ── Output selection and writing ──────────────────────────────────────

/// Output families selectable on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
    Svg,
}

impl ReportFormat {
    pub fn parse(s: &str) -> Option<ReportFormat> {
        match s {
            "json" => Some(ReportFormat::Json),
            "csv" => Some(ReportFormat::Csv),
            "svg" => Some(ReportFormat::Svg),
            _ => None,
        }
    }
}

/// Named file contents for a preservation report in the chosen formats.
pub fn render_report(
    report: &PreservationReport,
    formats: &[ReportFormat],
    generated_at: &str,
) -> Vec<(String, Vec<u8>)> {
    let mut files = Vec::new();
    if formats.contains(&ReportFormat::Json) {
        files.push(("report.json".to_string(), report_json(report, generated_at).into_bytes()));
    }
    if formats.contains(&ReportFormat::Csv) {
        files.push(("scatter.csv".to_string(), report_csv(report).into_bytes()));
    }
    if formats.contains(&ReportFormat::Svg) {
        files.push(("scatter.svg".to_string(), scatter_svg(report).into_bytes()));
        files.push(("venn.svg".to_string(), venn_svg(report).into_bytes()));
    }
    files
}

/// Named file contents for a profile run in the chosen formats.
pub fn render_profile(
    matrix: &QMatrix,
    fds: &FDSet,
    formats: &[ReportFormat],
) -> Vec<(String, Vec<u8>)> {
    let mut files = Vec::new();
    if formats.contains(&ReportFormat::Json) {
        files.push(("qmatrix.json".to_string(), qmatrix_json(matrix).into_bytes()));
        files.push(("fds.json".to_string(), fdset_json(fds).into_bytes()));
    }
    if formats.contains(&ReportFormat::Csv) {
        files.push(("qmatrix.csv".to_string(), qmatrix_csv(matrix).into_bytes()));
        files.push(("fds.txt".to_string(), fdset_text(fds).into_bytes()));
        files.push(("histogram.csv".to_string(), histogram_csv(matrix).into_bytes()));
    }
    files
}

/// Writes files into `dir`, creating it if needed. Each file is written
/// to a temporary sibling and renamed into place, so a failed run leaves
/// no partial report behind.
pub fn write_files(dir: &Path, files: &[(String, Vec<u8>)]) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir.display().to_string(), e))?;
    let mut written = Vec::new();
    for (name, bytes) in files {
        let target = dir.join(name);
        let tmp = dir.join(format!(".{name}.tmp"));
        std::fs::write(&tmp, bytes).map_err(|e| Error::io(tmp.display().to_string(), e))?;
        std::fs::rename(&tmp, &target)
            .map_err(|e| Error::io(target.display().to_string(), e))?;
        written.push(target);
    }
    Ok(written)
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
