//! The dependency score for pairs of column selections, the all-pairs
//! matrix, classification, and exclusion sets.
//!
//! For selections `a` and `b` over a table, let `A` and `B` be the sets of
//! value tuples each selection takes and `P` the number of distinct
//! co-occurring tuple pairs. The score is
//!
//! ```text
//! Q(a, b) = (P - |A|) / (|A| * (|B| - 1))   if |A| >= 1 and |B| > 1
//! Q(a, b) = 0                               otherwise
//! ```
//!
//! A score of exactly 0 means `b` is functionally determined by `a`;
//! exactly 1 means every combination occurs (no dependency); anything in
//! between means some combinations are excluded — a logical dependency.
//! Scores are exact rationals so the boundaries are decided without any
//! epsilon; [`q_score_by_summation`] recomputes the same value along the
//! per-value route and exists as a cross-check.

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ratio::{decimal6, rat, Rat};
use crate::table::{ColumnSelection, Table};

/// An exact dependency score with the counts it was built from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QScore {
    pub value: Rat,
    pub card_a: usize,
    pub card_b: usize,
    pub pair_count: usize,
}

impl QScore {
    /// Six-place decimal rendering of the value.
    pub fn decimal(&self) -> String {
        decimal6(self.value)
    }

    pub fn class(&self) -> DependencyClass {
        classify(self)
    }
}

/// The three dependency regimes, decided by exact comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DependencyClass {
    Functional,
    Logical,
    Independent,
}

impl std::fmt::Display for DependencyClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DependencyClass::Functional => write!(f, "functional"),
            DependencyClass::Logical => write!(f, "logical"),
            DependencyClass::Independent => write!(f, "independent"),
        }
    }
}

/// Exact classification: 0 is functional, 1 is independent, anything
/// strictly between is logical.
pub fn classify(q: &QScore) -> DependencyClass {
    if q.value.is_zero() {
        DependencyClass::Functional
    } else if q.value.is_one() {
        DependencyClass::Independent
    } else {
        DependencyClass::Logical
    }
}

/// One scored ordered column pair of a [`QMatrix`].
#[derive(Debug, Clone)]
pub struct QEntry {
    /// Table column index of the first selection.
    pub a: usize,
    /// Table column index of the second selection.
    pub b: usize,
    pub score: QScore,
}

/// Scores for every ordered pair of the analyzed columns.
#[derive(Debug, Clone)]
pub struct QMatrix {
    pub dataset: String,
    /// Analyzed table column indices, in analysis order.
    pub columns: Vec<usize>,
    /// Names of all table columns, so entries resolve without the table.
    pub names: Vec<String>,
    /// Exactly `k^2 - k` entries, row-major in `columns` order.
    pub entries: Vec<QEntry>,
}

impl QMatrix {
    /// Entry for an ordered pair of table column indices.
    pub fn entry(&self, a: usize, b: usize) -> Option<&QEntry> {
        self.entries.iter().find(|e| e.a == a && e.b == b)
    }

    pub fn name_of(&self, column: usize) -> &str {
        &self.names[column]
    }
}

/// The value combinations of two selections that never co-occur: the
/// witnesses of a logical dependency. Tuples are category strings so
/// sets from different tables are directly comparable.
#[derive(Debug, Clone)]
pub struct ExclusionSet {
    pub a: ColumnSelection,
    pub b: ColumnSelection,
    pub excluded: BTreeSet<(Vec<String>, Vec<String>)>,
    pub card_a: usize,
    pub card_b: usize,
    pub pair_count: usize,
}

fn score_from_counts(card_a: usize, card_b: usize, pair_count: usize) -> QScore {
    let value = if card_a >= 1 && card_b > 1 {
        rat(
            (pair_count - card_a) as i64,
            (card_a * (card_b - 1)) as i64,
        )
    } else {
        Rat::zero()
    };
    QScore { value, card_a, card_b, pair_count }
}

/// Scores one ordered pair of selections.
pub fn q_score(table: &Table, a: &ColumnSelection, b: &ColumnSelection) -> Result<QScore> {
    let rel = table.relation(a, b)?;
    Ok(score_from_counts(rel.card_a(), rel.card_b(), rel.pair_count()))
}

/// Same value as [`q_score`], computed along the per-value route: for each
/// left tuple `a` count the right tuples it co-occurs with, normalize each
/// count to `[0, 1]`, and average. Requires more than one right value.
pub fn q_score_by_summation(
    table: &Table,
    a: &ColumnSelection,
    b: &ColumnSelection,
) -> Result<QScore> {
    let rel = table.relation(a, b)?;
    let card_a = rel.card_a();
    let card_b = rel.card_b();
    if card_b <= 1 {
        return Err(Error::InvalidArgument(format!(
            "summation form needs more than one right value, got {card_b}"
        )));
    }

    // Pairs are sorted by (left, right); runs of equal left tuples give the
    // co-occurrence counts directly.
    let mut total = Rat::zero();
    let mut run_key: Option<&crate::table::Tuple> = None;
    let mut run_len: usize = 0;
    let flush = |len: usize, total: &mut Rat| {
        if len > 0 {
            *total += rat((len - 1) as i64, (card_b - 1) as i64);
        }
    };
    for (left, _) in &rel.pairs {
        if run_key != Some(left) {
            flush(run_len, &mut total);
            run_key = Some(left);
            run_len = 0;
        }
        run_len += 1;
    }
    flush(run_len, &mut total);

    let value = total / rat(card_a as i64, 1);
    Ok(QScore {
        value,
        card_a,
        card_b,
        pair_count: rel.pair_count(),
    })
}

/// Scores every ordered pair of the given categorical columns. Entries are
/// row-major in the order of `columns`; self-pairs are excluded, giving
/// exactly `k^2 - k` entries.
pub fn q_matrix(table: &Table, columns: &[usize]) -> Result<QMatrix> {
    if columns.len() < 2 {
        return Err(Error::TooFewColumns { needed: 2, got: columns.len() });
    }
    let mut seen = BTreeSet::new();
    for &c in columns {
        if !seen.insert(c) {
            return Err(Error::InvalidSelection(format!(
                "column index {c} listed twice"
            )));
        }
    }

    // Scores of (i, j) and (j, i) come from the same relation with the
    // sides swapped, so each unordered pair is scanned once.
    let mut upper: Vec<Vec<QScore>> = Vec::with_capacity(columns.len());
    for (pos_i, &i) in columns.iter().enumerate() {
        let mut row = Vec::new();
        for &j in &columns[pos_i + 1..] {
            let rel = table.relation(&ColumnSelection::single(i), &ColumnSelection::single(j))?;
            row.push(score_from_counts(rel.card_a(), rel.card_b(), rel.pair_count()));
        }
        upper.push(row);
    }
    let score_for = |pos_i: usize, pos_j: usize| -> QScore {
        if pos_i < pos_j {
            upper[pos_i][pos_j - pos_i - 1].clone()
        } else {
            let fwd = &upper[pos_j][pos_i - pos_j - 1];
            score_from_counts(fwd.card_b, fwd.card_a, fwd.pair_count)
        }
    };

    let mut entries = Vec::with_capacity(columns.len() * columns.len() - columns.len());
    for (pos_i, &i) in columns.iter().enumerate() {
        for (pos_j, &j) in columns.iter().enumerate() {
            if pos_i == pos_j {
                continue;
            }
            entries.push(QEntry { a: i, b: j, score: score_for(pos_i, pos_j) });
        }
    }
    Ok(QMatrix {
        dataset: table.name.clone(),
        columns: columns.to_vec(),
        names: table.columns().iter().map(|c| c.name.clone()).collect(),
        entries,
    })
}

/// The exact complement of the observed pair relation within `A x B`.
pub fn exclusion_set(
    table: &Table,
    a: &ColumnSelection,
    b: &ColumnSelection,
) -> Result<ExclusionSet> {
    let rel = table.relation(a, b)?;
    let mut excluded = BTreeSet::new();
    for ta in &rel.set_a.tuples {
        for tb in &rel.set_b.tuples {
            if !rel.pairs.contains(&(ta.clone(), tb.clone())) {
                excluded.insert((table.decode_tuple(a, ta), table.decode_tuple(b, tb)));
            }
        }
    }
    Ok(ExclusionSet {
        a: a.clone(),
        b: b.clone(),
        excluded,
        card_a: rel.card_a(),
        card_b: rel.card_b(),
        pair_count: rel.pair_count(),
    })
}

/// Fixed score histogram bins: exact 0, ten intervals of width 0.1 (the
/// last open at 1), and exact 1.
pub const HISTOGRAM_LABELS: [&str; 12] = [
    "[0]",
    "(0,0.1]",
    "(0.1,0.2]",
    "(0.2,0.3]",
    "(0.3,0.4]",
    "(0.4,0.5]",
    "(0.5,0.6]",
    "(0.6,0.7]",
    "(0.7,0.8]",
    "(0.8,0.9]",
    "(0.9,1)",
    "[1]",
];

/// Index into [`HISTOGRAM_LABELS`] for a score, decided exactly.
pub fn histogram_bin(value: Rat) -> usize {
    if value.is_zero() {
        return 0;
    }
    if value.is_one() {
        return 11;
    }
    for i in 1..=9 {
        if value <= rat(i, 10) {
            return i as usize;
        }
    }
    10
}

/// Counts matrix entries per histogram bin.
pub fn histogram(matrix: &QMatrix) -> [usize; 12] {
    let mut counts = [0usize; 12];
    for e in &matrix.entries {
        counts[histogram_bin(e.score.value)] += 1;
    }
    counts
}
