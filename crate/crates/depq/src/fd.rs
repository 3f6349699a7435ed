//! Minimal functional dependency discovery over categorical columns.
//!
//! The checker works on stripped partitions: rows grouped by equal value
//! tuples on an attribute set, with singleton groups removed. `X -> r`
//! holds iff adding `r` to `X` does not split any group, i.e. the
//! unstripped class counts of `X` and `X ∪ {r}` are equal.
//!
//! Discovery walks the attribute lattice level by level up to `max_lhs`.
//! A candidate left side is skipped when a smaller recorded left side
//! already determines the same right side (that keeps the output minimal),
//! and an attribute set that contains both sides of a recorded dependency
//! is never used as a left side at all, since anything it determines is
//! already determined by a proper subset.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::table::{ColumnKind, Table};

/// Rows grouped by equal value tuples on `attrs`; singleton groups are
/// stripped. Classes and the rows inside them are kept sorted so two
/// partitions compare structurally.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrippedPartition {
    /// Sorted attribute (column index) set.
    pub attrs: Vec<usize>,
    /// Disjoint row-index classes, each of size >= 2, sorted by first row.
    pub classes: Vec<Vec<usize>>,
    n_rows: usize,
    table_name: String,
}

impl StrippedPartition {
    /// Class count including the stripped singletons.
    pub fn n_classes_unstripped(&self) -> usize {
        self.n_rows - self.classes.iter().map(|c| c.len() - 1).sum::<usize>()
    }

    /// True when every row is alone in its class: the attribute set is a
    /// key of the table.
    pub fn is_key(&self) -> bool {
        self.classes.is_empty()
    }
}

fn validate_attrs(table: &Table, attrs: &[usize]) -> Result<Vec<usize>> {
    if attrs.is_empty() {
        return Err(Error::InvalidSelection("attribute set is empty".into()));
    }
    let mut sorted = attrs.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    for &i in &sorted {
        if i >= table.n_columns() {
            return Err(Error::InvalidSelection(format!(
                "column index {i} out of range (table has {})",
                table.n_columns()
            )));
        }
        if table.column(i).kind() != ColumnKind::Categorical {
            return Err(Error::ContinuousColumn(table.column(i).name.clone()));
        }
    }
    Ok(sorted)
}

/// Groups rows by their value tuple on `attrs` and strips singletons.
pub fn partition(table: &Table, attrs: &[usize]) -> Result<StrippedPartition> {
    let attrs = validate_attrs(table, attrs)?;
    let mut groups: BTreeMap<Vec<u32>, Vec<usize>> = BTreeMap::new();
    let sel = crate::table::ColumnSelection::new(attrs.clone())?;
    for row in 0..table.n_rows() {
        groups.entry(table.row_tuple(&sel, row)).or_default().push(row);
    }
    let mut classes: Vec<Vec<usize>> = groups
        .into_values()
        .filter(|rows| rows.len() >= 2)
        .collect();
    classes.sort_by_key(|c| c[0]);
    Ok(StrippedPartition {
        attrs,
        classes,
        n_rows: table.n_rows(),
        table_name: table.name.clone(),
    })
}

/// Product of two partitions over the same table: rows are together in
/// the result iff they are together in both inputs. Equals
/// `partition(table, attrs(p) ∪ attrs(q))`.
pub fn refine(p: &StrippedPartition, q: &StrippedPartition) -> Result<StrippedPartition> {
    if p.table_name != q.table_name || p.n_rows != q.n_rows {
        return Err(Error::MismatchedTable {
            left: format!("{} ({} rows)", p.table_name, p.n_rows),
            right: format!("{} ({} rows)", q.table_name, q.n_rows),
        });
    }

    // Probe-table product on the stripped representation: a row outside
    // every class of `p` is a singleton there and stays one.
    let mut owner: Vec<Option<usize>> = vec![None; p.n_rows];
    for (ci, class) in p.classes.iter().enumerate() {
        for &row in class {
            owner[row] = Some(ci);
        }
    }
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); p.classes.len()];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for class in &q.classes {
        let mut touched: Vec<usize> = Vec::new();
        for &row in class {
            if let Some(ci) = owner[row] {
                if buckets[ci].is_empty() {
                    touched.push(ci);
                }
                buckets[ci].push(row);
            }
        }
        for ci in touched {
            let rows = std::mem::take(&mut buckets[ci]);
            if rows.len() >= 2 {
                classes.push(rows);
            }
        }
    }
    for class in &mut classes {
        class.sort_unstable();
    }
    classes.sort_by_key(|c| c[0]);

    let mut attrs: Vec<usize> = p.attrs.iter().chain(q.attrs.iter()).copied().collect();
    attrs.sort_unstable();
    attrs.dedup();
    Ok(StrippedPartition {
        attrs,
        classes,
        n_rows: p.n_rows,
        table_name: p.table_name.clone(),
    })
}

/// Whether `lhs -> rhs` holds on the table, checked via partitions.
pub fn fd_holds(table: &Table, lhs: &[usize], rhs: usize) -> Result<bool> {
    let lhs_sorted = validate_attrs(table, lhs)?;
    if lhs_sorted.binary_search(&rhs).is_ok() {
        return Err(Error::InvalidArgument(format!(
            "right side {rhs} is part of the left side"
        )));
    }
    let p_lhs = partition(table, &lhs_sorted)?;
    let mut union = lhs_sorted;
    union.push(rhs);
    let p_union = partition(table, &union)?;
    Ok(p_lhs.n_classes_unstripped() == p_union.n_classes_unstripped())
}

/// A non-trivial functional dependency: the left-side columns (sorted
/// names) determine the single right-side column.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct FunctionalDependency {
    pub lhs: Vec<String>,
    pub rhs: String,
    /// The left side is a key of the table: it determines every column.
    /// Keys inflate dependency counts, so they are flagged but kept.
    pub key_lhs: bool,
}

impl FunctionalDependency {
    /// Canonical rendering: `"A,B -> C"` with sorted left-side names.
    pub fn render(&self) -> String {
        format!("{} -> {}", self.lhs.join(","), self.rhs)
    }

    /// Name-based identity used for cross-dataset comparison.
    pub fn name_key(&self) -> (Vec<String>, String) {
        (self.lhs.clone(), self.rhs.clone())
    }
}

/// All minimal, non-trivial dependencies found on a table.
#[derive(Debug, Clone)]
pub struct FDSet {
    pub dataset: String,
    pub max_lhs: usize,
    /// Names of the analyzed columns, in analysis order.
    pub columns: Vec<String>,
    /// Canonically ordered dependencies.
    pub fds: Vec<FunctionalDependency>,
}

impl FDSet {
    /// Sorted `"A,B -> C"` lines, one per dependency.
    pub fn render_lines(&self) -> Vec<String> {
        self.fds.iter().map(FunctionalDependency::render).collect()
    }

    /// Name-keyed set for Venn comparison.
    pub fn name_keys(&self) -> std::collections::BTreeSet<(Vec<String>, String)> {
        self.fds.iter().map(FunctionalDependency::name_key).collect()
    }
}

/// True when `sub` is a (non-strict) subset of `sup`; both sorted.
fn is_subset(sub: &[usize], sup: &[usize]) -> bool {
    let mut it = sup.iter();
    sub.iter().all(|x| it.any(|y| y == x))
}

/// Discovers exactly the minimal, non-trivial dependencies with left sides
/// of at most `max_lhs` columns, by level-wise lattice search.
pub fn discover_fds(table: &Table, columns: &[usize], max_lhs: usize) -> Result<FDSet> {
    if columns.len() < 2 {
        return Err(Error::TooFewColumns { needed: 2, got: columns.len() });
    }
    if max_lhs < 1 {
        return Err(Error::InvalidArgument("max_lhs must be at least 1".into()));
    }
    let mut cols = columns.to_vec();
    cols.sort_unstable();
    cols.dedup();
    if cols.len() != columns.len() {
        return Err(Error::InvalidSelection("duplicate column in analysis list".into()));
    }

    let mut singletons: BTreeMap<usize, StrippedPartition> = BTreeMap::new();
    for &c in &cols {
        singletons.insert(c, partition(table, &[c])?);
    }

    // Recorded dependencies per right side; left sides are sorted index sets.
    let mut found_by_rhs: BTreeMap<usize, Vec<Vec<usize>>> = BTreeMap::new();
    let mut found: Vec<(Vec<usize>, usize, bool)> = Vec::new();

    // A left side is "reduced" unless it contains both sides of a recorded
    // dependency, in which case everything it determines is already
    // determined by a proper subset and nothing minimal can come from it.
    let contains_recorded_fd = |attrs: &[usize], found: &BTreeMap<usize, Vec<Vec<usize>>>| {
        found.iter().any(|(&rhs, lhss)| {
            attrs.binary_search(&rhs).is_ok()
                && lhss.iter().any(|lhs| is_subset(lhs, attrs))
        })
    };

    let mut current: BTreeMap<Vec<usize>, StrippedPartition> =
        singletons.iter().map(|(&c, p)| (vec![c], p.clone())).collect();

    for level in 1..=max_lhs {
        let mut next: BTreeMap<Vec<usize>, StrippedPartition> = BTreeMap::new();
        for (attrs, part) in &current {
            if contains_recorded_fd(attrs, &found_by_rhs) {
                continue;
            }
            let lhs_is_key = part.is_key();
            for &rhs in &cols {
                if attrs.binary_search(&rhs).is_ok() {
                    continue;
                }
                // Minimality: a smaller recorded lhs for this rhs makes
                // every superset non-minimal.
                if found_by_rhs
                    .get(&rhs)
                    .is_some_and(|lhss| lhss.iter().any(|lhs| is_subset(lhs, attrs)))
                {
                    continue;
                }
                let mut union = attrs.clone();
                union.push(rhs);
                union.sort_unstable();
                if !next.contains_key(&union) {
                    let refined = refine(part, &singletons[&rhs])?;
                    next.insert(union.clone(), refined);
                }
                let holds = part.n_classes_unstripped() == next[&union].n_classes_unstripped();
                if holds {
                    found_by_rhs.entry(rhs).or_default().push(attrs.clone());
                    found.push((attrs.clone(), rhs, lhs_is_key));
                }
            }
        }
        if level < max_lhs {
            current = next;
        }
    }

    let mut fds: Vec<FunctionalDependency> = found
        .into_iter()
        .map(|(lhs, rhs, key_lhs)| {
            let mut lhs_names: Vec<String> =
                lhs.iter().map(|&i| table.column(i).name.clone()).collect();
            lhs_names.sort_unstable();
            FunctionalDependency {
                lhs: lhs_names,
                rhs: table.column(rhs).name.clone(),
                key_lhs,
            }
        })
        .collect();
    fds.sort();

    Ok(FDSet {
        dataset: table.name.clone(),
        max_lhs,
        columns: columns.iter().map(|&i| table.column(i).name.clone()).collect(),
        fds,
    })
}
