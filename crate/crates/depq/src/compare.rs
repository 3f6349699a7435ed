//! Dependency preservation between a real and a synthetic table:
//! per-pair verdicts, the preservation percentage, Venn counts over the
//! mined functional dependencies, and score scatter points.
//!
//! Two preservation readings are provided. `Exclusion` (the default)
//! asks whether the value combinations excluded in the real data are
//! still excluded in the synthetic data, with a guard for collapsed
//! categories; it can report 100% even when the scores of real and
//! synthetic differ, since the synthetic table may merely add further
//! exclusions. `QEpsilon` instead asks for the scores themselves to be
//! close. The report always records which mode produced its numbers.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fd::{discover_fds, FDSet};
use crate::qscore::{exclusion_set, q_score, DependencyClass, QScore};
use crate::ratio::{decimal, rat, Rat};
use crate::table::{ColumnData, ColumnSelection, Table};

/// How preservation of a logical pair is judged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CompareMode {
    Exclusion,
    QEpsilon,
}

impl std::fmt::Display for CompareMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CompareMode::Exclusion => write!(f, "exclusion"),
            CompareMode::QEpsilon => write!(f, "qscore"),
        }
    }
}

/// Verdict for one ordered column pair.
///
/// In `Exclusion` mode the status follows the witnesses exactly:
/// `Violated` iff some real-excluded combination co-occurs in the
/// synthetic table, otherwise `Collapsed` iff a real category of either
/// column is absent from the synthetic table, otherwise `Preserved`.
/// In `QEpsilon` mode `Preserved` means the scores agree within epsilon
/// and the synthetic pair is still logical; a failing pair is `Violated`
/// (its `violations` list may then be empty) unless the failure is a
/// missing category, which stays `Collapsed`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictStatus {
    Preserved,
    Violated,
    Collapsed,
    NotApplicable,
}

impl std::fmt::Display for VerdictStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            VerdictStatus::Preserved => write!(f, "preserved"),
            VerdictStatus::Violated => write!(f, "violated"),
            VerdictStatus::Collapsed => write!(f, "collapsed"),
            VerdictStatus::NotApplicable => write!(f, "not_applicable"),
        }
    }
}

/// Scores, classes and status for one ordered pair of shared columns.
#[derive(Debug, Clone)]
pub struct PairVerdict {
    pub a: String,
    pub b: String,
    pub q_real: QScore,
    pub q_synth: QScore,
    pub class_real: DependencyClass,
    pub class_synth: DependencyClass,
    pub status: VerdictStatus,
    /// Real-excluded value pairs observed co-occurring in the synthetic
    /// table, sorted.
    pub violations: Vec<(String, String)>,
}

/// Canonical form of a mined dependency: sorted left-side names, right name.
pub type FdKey = (Vec<String>, String);

/// Set algebra over two mined dependency sets.
#[derive(Debug, Clone)]
pub struct VennCounts {
    pub real_only: Vec<FdKey>,
    pub shared: Vec<FdKey>,
    pub synthetic_only: Vec<FdKey>,
}

impl VennCounts {
    pub fn counts(&self) -> (usize, usize, usize) {
        (self.real_only.len(), self.shared.len(), self.synthetic_only.len())
    }
}

/// One scatter point: the pair's score in both tables.
#[derive(Debug, Clone)]
pub struct ScatterPoint {
    pub a: String,
    pub b: String,
    pub q_real: QScore,
    pub q_synth: QScore,
}

/// Full comparison outcome for a real/synthetic table pair.
#[derive(Debug, Clone)]
pub struct PreservationReport {
    pub real_dataset: String,
    pub synthetic_dataset: String,
    pub real_rows: usize,
    pub synthetic_rows: usize,
    pub mode: CompareMode,
    pub epsilon: Rat,
    pub max_lhs: usize,
    /// Analyzed column names, in real-table order.
    pub columns: Vec<String>,
    pub verdicts: Vec<PairVerdict>,
    pub venn: VennCounts,
    pub scatter: Vec<ScatterPoint>,
    /// Number of real logical pairs.
    pub ld_pairs_total: usize,
    /// Real logical pairs judged preserved under the configured mode.
    pub ld_pairs_preserved: usize,
}

impl PreservationReport {
    /// Preservation percentage over real logical pairs; `None` when the
    /// real table has no logical pairs.
    pub fn ld_preserved_percent(&self) -> Option<Rat> {
        if self.ld_pairs_total == 0 {
            None
        } else {
            Some(rat(self.ld_pairs_preserved as i64 * 100, self.ld_pairs_total as i64))
        }
    }

    /// Percentage rendered with one decimal place, or `"n/a"`.
    pub fn ld_preserved_display(&self) -> String {
        match self.ld_preserved_percent() {
            Some(p) => decimal(p, 1),
            None => "n/a".to_string(),
        }
    }

    /// The one-line summary printed by the command-line front end.
    pub fn summary_line(&self) -> String {
        let (_, shared, _) = self.venn.counts();
        let real_total = self.venn.real_only.len() + shared;
        format!(
            "LD preserved: {}% ({} of {} pairs); FD shared: {}/{}",
            self.ld_preserved_display(),
            self.ld_pairs_preserved,
            self.ld_pairs_total,
            shared,
            real_total
        )
    }
}

/// Comparison configuration.
#[derive(Debug, Clone)]
pub struct CompareConfig {
    pub mode: CompareMode,
    /// Maximum score distance for `QEpsilon` preservation.
    pub epsilon: Rat,
    /// Left-side bound for the mined dependency sets.
    pub max_lhs: usize,
}

impl Default for CompareConfig {
    fn default() -> Self {
        CompareConfig {
            mode: CompareMode::Exclusion,
            epsilon: rat(1, 20),
            max_lhs: 3,
        }
    }
}

/// Intersection and differences of two mined dependency sets, by
/// canonical (left names, right name) identity.
pub fn venn_fd(real: &FDSet, synth: &FDSet) -> Result<VennCounts> {
    if real.max_lhs != synth.max_lhs {
        return Err(Error::ConfigMismatch(format!(
            "dependency sets mined with different max_lhs: {} vs {}",
            real.max_lhs, synth.max_lhs
        )));
    }
    let real_cols: BTreeSet<&String> = real.columns.iter().collect();
    let synth_cols: BTreeSet<&String> = synth.columns.iter().collect();
    if real_cols != synth_cols {
        return Err(Error::ConfigMismatch(format!(
            "dependency sets mined over different columns: [{}] vs [{}]",
            real.columns.join(", "),
            synth.columns.join(", ")
        )));
    }

    let real_keys = real.name_keys();
    let synth_keys = synth.name_keys();
    Ok(VennCounts {
        real_only: real_keys.difference(&synth_keys).cloned().collect(),
        shared: real_keys.intersection(&synth_keys).cloned().collect(),
        synthetic_only: synth_keys.difference(&real_keys).cloned().collect(),
    })
}

/// Category strings a categorical column actually takes (its dictionary).
fn categories(table: &Table, col: usize) -> BTreeSet<String> {
    match &table.column(col).data {
        ColumnData::Categorical { dictionary, .. } => dictionary.iter().cloned().collect(),
        ColumnData::Continuous { .. } => BTreeSet::new(),
    }
}

/// The analyzed columns: categorical column names must coincide between
/// the two tables (order may differ). Returns (name, real index, synth
/// index) in real-table order.
fn shared_schema(real: &Table, synth: &Table) -> Result<Vec<(String, usize, usize)>> {
    let real_cats = real.categorical_columns();
    let synth_cats = synth.categorical_columns();
    let real_names: BTreeSet<&str> =
        real_cats.iter().map(|&i| real.column(i).name.as_str()).collect();
    let synth_names: BTreeSet<&str> =
        synth_cats.iter().map(|&i| synth.column(i).name.as_str()).collect();
    if real_names != synth_names {
        let only_real: Vec<&str> = real_names.difference(&synth_names).copied().collect();
        let only_synth: Vec<&str> = synth_names.difference(&real_names).copied().collect();
        let mut parts = Vec::new();
        if !only_real.is_empty() {
            parts.push(format!("only in real: {}", only_real.join(", ")));
        }
        if !only_synth.is_empty() {
            parts.push(format!("only in synthetic: {}", only_synth.join(", ")));
        }
        return Err(Error::SchemaMismatch(parts.join("; ")));
    }
    Ok(real_cats
        .iter()
        .map(|&i| {
            let name = real.column(i).name.clone();
            let j = synth.column_index(&name).expect("name sets checked equal");
            (name, i, j)
        })
        .collect())
}

/// Compares every ordered pair of the shared categorical columns and
/// assembles the full report: verdicts, preservation percentage, Venn
/// counts of the mined dependencies, and scatter points.
pub fn ld_preservation(
    real: &Table,
    synth: &Table,
    config: &CompareConfig,
) -> Result<PreservationReport> {
    let schema = shared_schema(real, synth)?;
    if schema.len() < 2 {
        return Err(Error::TooFewColumns { needed: 2, got: schema.len() });
    }

    let mut verdicts = Vec::new();
    let mut scatter = Vec::new();
    for (name_a, ri, si) in &schema {
        for (name_b, rj, sj) in &schema {
            if ri == rj {
                continue;
            }
            let q_real = q_score(real, &ColumnSelection::single(*ri), &ColumnSelection::single(*rj))?;
            let q_synth =
                q_score(synth, &ColumnSelection::single(*si), &ColumnSelection::single(*sj))?;
            let class_real = q_real.class();
            let class_synth = q_synth.class();

            let violations = if class_real == DependencyClass::Logical {
                let real_excluded = exclusion_set(
                    real,
                    &ColumnSelection::single(*ri),
                    &ColumnSelection::single(*rj),
                )?;
                let synth_rel = synth.relation(
                    &ColumnSelection::single(*si),
                    &ColumnSelection::single(*sj),
                )?;
                let synth_pairs: BTreeSet<(Vec<String>, Vec<String>)> = synth_rel
                    .pairs
                    .iter()
                    .map(|(ta, tb)| {
                        (
                            synth.decode_tuple(&synth_rel.a, ta),
                            synth.decode_tuple(&synth_rel.b, tb),
                        )
                    })
                    .collect();
                real_excluded
                    .excluded
                    .iter()
                    .filter(|p| synth_pairs.contains(*p))
                    .map(|(a, b)| (a[0].clone(), b[0].clone()))
                    .collect()
            } else {
                Vec::new()
            };

            let collapsed = !categories(real, *ri).is_subset(&categories(synth, *si))
                || !categories(real, *rj).is_subset(&categories(synth, *sj));

            let status = if class_real != DependencyClass::Logical {
                VerdictStatus::NotApplicable
            } else {
                match config.mode {
                    CompareMode::Exclusion => {
                        if !violations.is_empty() {
                            VerdictStatus::Violated
                        } else if collapsed {
                            VerdictStatus::Collapsed
                        } else {
                            VerdictStatus::Preserved
                        }
                    }
                    CompareMode::QEpsilon => {
                        let diff = if q_real.value >= q_synth.value {
                            q_real.value - q_synth.value
                        } else {
                            q_synth.value - q_real.value
                        };
                        if diff <= config.epsilon && class_synth == DependencyClass::Logical {
                            VerdictStatus::Preserved
                        } else if !violations.is_empty() {
                            VerdictStatus::Violated
                        } else if collapsed {
                            VerdictStatus::Collapsed
                        } else {
                            VerdictStatus::Violated
                        }
                    }
                }
            };

            scatter.push(ScatterPoint {
                a: name_a.clone(),
                b: name_b.clone(),
                q_real: q_real.clone(),
                q_synth: q_synth.clone(),
            });
            verdicts.push(PairVerdict {
                a: name_a.clone(),
                b: name_b.clone(),
                q_real,
                q_synth,
                class_real,
                class_synth,
                status,
                violations,
            });
        }
    }

    let real_fds = discover_fds(real, &schema.iter().map(|(_, i, _)| *i).collect::<Vec<_>>(), config.max_lhs)?;
    let synth_fds =
        discover_fds(synth, &schema.iter().map(|(_, _, j)| *j).collect::<Vec<_>>(), config.max_lhs)?;
    let venn = venn_fd(&real_fds, &synth_fds)?;

    let ld_pairs_total = verdicts
        .iter()
        .filter(|v| v.class_real == DependencyClass::Logical)
        .count();
    let ld_pairs_preserved = verdicts
        .iter()
        .filter(|v| v.status == VerdictStatus::Preserved)
        .count();

    Ok(PreservationReport {
        real_dataset: real.name.clone(),
        synthetic_dataset: synth.name.clone(),
        real_rows: real.n_rows(),
        synthetic_rows: synth.n_rows(),
        mode: config.mode,
        epsilon: config.epsilon,
        max_lhs: config.max_lhs,
        columns: schema.into_iter().map(|(n, _, _)| n).collect(),
        verdicts,
        venn,
        scatter,
        ld_pairs_total,
        ld_pairs_preserved,
    })
}

/// Score pairs for every ordered pair of categorical columns present in
/// both tables (intersection by name, real-table order).
pub fn scatter_points(real: &Table, synth: &Table) -> Result<Vec<ScatterPoint>> {
    let real_cats = real.categorical_columns();
    let shared: Vec<(String, usize, usize)> = real_cats
        .iter()
        .filter_map(|&i| {
            let name = &real.column(i).name;
            synth
                .column_index(name)
                .filter(|&j| synth.column(j).kind() == crate::table::ColumnKind::Categorical)
                .map(|j| (name.clone(), i, j))
        })
        .collect();
    if shared.len() < 2 {
        return Err(Error::SchemaMismatch(format!(
            "need at least 2 shared categorical columns, found {}",
            shared.len()
        )));
    }
    let mut points = Vec::new();
    for (name_a, ri, si) in &shared {
        for (name_b, rj, sj) in &shared {
            if ri == rj {
                continue;
            }
            points.push(ScatterPoint {
                a: name_a.clone(),
                b: name_b.clone(),
                q_real: q_score(real, &ColumnSelection::single(*ri), &ColumnSelection::single(*rj))?,
                q_synth: q_score(
                    synth,
                    &ColumnSelection::single(*si),
                    &ColumnSelection::single(*sj),
                )?,
            });
        }
    }
    Ok(points)
}
