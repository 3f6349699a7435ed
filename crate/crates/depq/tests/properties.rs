//! Property suite: structural invariants of relations, scores, mined
//! dependencies and preservation verdicts on randomized tables.
//!
//! The independent oracles here (pairwise dependency check, brute-force
//! minimal-dependency enumeration) deliberately avoid the partition
//! machinery they verify.

use std::collections::BTreeSet;

use proptest::prelude::*;

use depq::baselines::{generate, BaselineMethod, BaselineSpec};
use depq::compare::{ld_preservation, venn_fd, CompareConfig, CompareMode, VerdictStatus};
use depq::fd::{discover_fds, fd_holds, partition, refine};
use depq::qscore::{exclusion_set, q_matrix, q_score, q_score_by_summation, DependencyClass};
use depq::ratio::rat;
use depq::rng::SplitMix64;
use depq::table::{Column, ColumnSelection, Table};

// ── Helpers ───────────────────────────────────────────────────────────

/// Cell grid to table: code 4 is a missing cell, everything else "v{c}".
fn build_table(name: &str, grid: &[Vec<u8>]) -> Table {
    let columns = grid
        .iter()
        .enumerate()
        .map(|(j, col)| {
            let cells: Vec<Option<String>> = col
                .iter()
                .map(|&c| if c == 4 { None } else { Some(format!("v{c}")) })
                .collect();
            Column::categorical_from_cells(&format!("c{j}"), &cells)
        })
        .collect();
    Table::new(name, columns).unwrap()
}

/// Column-major grids: m columns of n cells each, codes 0..=4.
fn grid_strategy(max_rows: usize, max_cols: usize) -> impl Strategy<Value = Vec<Vec<u8>>> {
    (1..=max_cols, 0..=max_rows).prop_flat_map(|(m, n)| {
        proptest::collection::vec(proptest::collection::vec(0u8..=4, n), m)
    })
}

fn permuted(table: &Table, seed: u64) -> Table {
    let n = table.n_rows();
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = SplitMix64::new(seed);
    for i in (1..n).rev() {
        order.swap(i, rng.next_below(i as u64 + 1) as usize);
    }
    rebuild_with_rows(table, &order)
}

fn with_duplicated_row(table: &Table, row: usize) -> Table {
    let mut order: Vec<usize> = (0..table.n_rows()).collect();
    order.push(row);
    rebuild_with_rows(table, &order)
}

fn rebuild_with_rows(table: &Table, rows: &[usize]) -> Table {
    let columns = table
        .columns()
        .iter()
        .map(|col| match &col.data {
            depq::table::ColumnData::Categorical { codes, dictionary } => {
                let na = col.na_code();
                let cells: Vec<Option<&str>> = rows
                    .iter()
                    .map(|&r| {
                        let code = codes[r];
                        if Some(code) == na {
                            None
                        } else {
                            Some(dictionary[code as usize].as_str())
                        }
                    })
                    .collect();
                Column::categorical_from_cells(&col.name, &cells)
            }
            depq::table::ColumnData::Continuous { values } => {
                Column::continuous(&col.name, rows.iter().map(|&r| values[r]).collect())
            }
        })
        .collect();
    Table::new(&table.name, columns).unwrap()
}

/// Bijective renaming that reverses the lexicographic order of the
/// categories; missing cells stay missing.
fn relabeled(table: &Table) -> Table {
    let columns = table
        .columns()
        .iter()
        .map(|col| match &col.data {
            depq::table::ColumnData::Categorical { codes, .. } => {
                let na = col.na_code();
                let cells: Vec<Option<String>> = codes
                    .iter()
                    .map(|&code| {
                        if Some(code) == na {
                            None
                        } else {
                            Some(format!("z{}", 9 - code))
                        }
                    })
                    .collect();
                Column::categorical_from_cells(&col.name, &cells)
            }
            other => Column { name: col.name.clone(), data: other.clone() },
        })
        .collect();
    Table::new(&table.name, columns).unwrap()
}

/// The pairwise definition of a functional dependency, row pair by
/// row pair.
fn fd_holds_pairwise(t: &Table, lhs: &[usize], rhs: usize) -> bool {
    let sel = ColumnSelection::new(lhs.to_vec()).unwrap();
    let rsel = ColumnSelection::single(rhs);
    for i1 in 0..t.n_rows() {
        for i2 in 0..t.n_rows() {
            if t.row_tuple(&sel, i1) == t.row_tuple(&sel, i2)
                && t.row_tuple(&rsel, i1) != t.row_tuple(&rsel, i2)
            {
                return false;
            }
        }
    }
    true
}

fn subsets_of_size(items: &[usize], size: usize) -> Vec<Vec<usize>> {
    if size == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        for mut rest in subsets_of_size(&items[i + 1..], size - 1) {
            rest.insert(0, x);
            out.push(rest);
        }
    }
    out
}

/// Brute-force enumeration of all minimal dependencies with left sides of
/// at most `max_lhs` columns, via the pairwise check only.
fn brute_force_minimal_fds(
    t: &Table,
    columns: &[usize],
    max_lhs: usize,
) -> BTreeSet<(Vec<String>, String)> {
    let mut valid: BTreeSet<(Vec<usize>, usize)> = BTreeSet::new();
    for size in 1..=max_lhs {
        for lhs in subsets_of_size(columns, size) {
            for &rhs in columns {
                if lhs.contains(&rhs) {
                    continue;
                }
                if fd_holds_pairwise(t, &lhs, rhs) {
                    valid.insert((lhs.clone(), rhs));
                }
            }
        }
    }
    valid
        .iter()
        .filter(|(lhs, rhs)| {
            // Minimal: no valid proper subset with the same right side.
            !(1..lhs.len()).any(|size| {
                subsets_of_size(lhs, size)
                    .into_iter()
                    .any(|sub| valid.contains(&(sub, *rhs)))
            })
        })
        .map(|(lhs, rhs)| {
            let mut names: Vec<String> =
                lhs.iter().map(|&i| t.column(i).name.clone()).collect();
            names.sort();
            (names, t.column(*rhs).name.clone())
        })
        .collect()
}

fn all_columns(t: &Table) -> Vec<usize> {
    (0..t.n_columns()).collect()
}

// ── Relation invariants ───────────────────────────────────────────────

proptest! {
    #[test]
    fn relation_is_stable_under_row_permutation_and_duplication(
        grid in grid_strategy(40, 4),
        seed in any::<u64>(),
    ) {
        let t = build_table("rand", &grid);
        prop_assume!(t.n_columns() >= 2 && t.n_rows() >= 1);
        let a = ColumnSelection::single(0);
        let b = ColumnSelection::single(1);
        let base = t.relation(&a, &b).unwrap();

        let shuffled = permuted(&t, seed);
        let rel = shuffled.relation(&a, &b).unwrap();
        prop_assert_eq!(&rel.pairs, &base.pairs);

        let dup = with_duplicated_row(&t, (seed as usize) % t.n_rows());
        let rel = dup.relation(&a, &b).unwrap();
        prop_assert_eq!(&rel.pairs, &base.pairs);
    }

    #[test]
    fn relation_transposes(grid in grid_strategy(40, 4)) {
        let t = build_table("rand", &grid);
        prop_assume!(t.n_columns() >= 2);
        let a = ColumnSelection::single(0);
        let b = ColumnSelection::single(1);
        let fwd = t.relation(&a, &b).unwrap();
        let back = t.relation(&b, &a).unwrap();
        let transposed: BTreeSet<_> =
            fwd.pairs.iter().map(|(x, y)| (y.clone(), x.clone())).collect();
        prop_assert_eq!(&back.pairs, &transposed);
        prop_assert_eq!(fwd.card_a(), back.card_b());
        prop_assert_eq!(fwd.card_b(), back.card_a());
    }

    #[test]
    fn relabeling_preserves_relation_cardinalities(grid in grid_strategy(40, 4)) {
        let t = build_table("rand", &grid);
        prop_assume!(t.n_columns() >= 2);
        let a = ColumnSelection::single(0);
        let b = ColumnSelection::single(1);
        let base = t.relation(&a, &b).unwrap();
        let renamed = relabeled(&t).relation(&a, &b).unwrap();
        prop_assert_eq!(base.card_a(), renamed.card_a());
        prop_assert_eq!(base.card_b(), renamed.card_b());
        prop_assert_eq!(base.pair_count(), renamed.pair_count());
    }
}

// ── Score invariants ──────────────────────────────────────────────────

proptest! {
    #[test]
    fn scores_are_bounded_and_match_the_summation_route(grid in grid_strategy(60, 6)) {
        let t = build_table("rand", &grid);
        prop_assume!(t.n_columns() >= 2);
        for i in 0..t.n_columns() {
            for j in 0..t.n_columns() {
                if i == j { continue; }
                let a = ColumnSelection::single(i);
                let b = ColumnSelection::single(j);
                let q = q_score(&t, &a, &b).unwrap();
                prop_assert!(q.value >= rat(0, 1) && q.value <= rat(1, 1));
                if q.card_b > 1 {
                    let summed = q_score_by_summation(&t, &a, &b).unwrap();
                    prop_assert_eq!(q.value, summed.value);
                }
            }
        }
    }

    #[test]
    fn score_zero_iff_fd_and_one_iff_no_exclusions(grid in grid_strategy(50, 5)) {
        let t = build_table("rand", &grid);
        prop_assume!(t.n_columns() >= 2);
        for i in 0..t.n_columns() {
            for j in 0..t.n_columns() {
                if i == j { continue; }
                let a = ColumnSelection::single(i);
                let b = ColumnSelection::single(j);
                let q = q_score(&t, &a, &b).unwrap();
                // Functional boundary, including the single-right-value case.
                prop_assert_eq!(q.value == rat(0, 1), fd_holds(&t, &[i], j).unwrap());
                prop_assert_eq!(fd_holds(&t, &[i], j).unwrap(), fd_holds_pairwise(&t, &[i], j));
                // Independence boundary.
                let ex = exclusion_set(&t, &a, &b).unwrap();
                prop_assert_eq!(ex.excluded.len() + q.pair_count, q.card_a * q.card_b);
                if q.card_b > 1 {
                    prop_assert_eq!(q.value == rat(1, 1), ex.excluded.is_empty());
                }
            }
        }
    }

    #[test]
    fn scores_survive_permutation_duplication_relabeling(
        grid in grid_strategy(40, 4),
        seed in any::<u64>(),
    ) {
        let t = build_table("rand", &grid);
        prop_assume!(t.n_columns() >= 2 && t.n_rows() >= 1);
        let a = ColumnSelection::single(0);
        let b = ColumnSelection::single(1);
        let base = q_score(&t, &a, &b).unwrap().value;
        prop_assert_eq!(q_score(&permuted(&t, seed), &a, &b).unwrap().value, base);
        let dup = with_duplicated_row(&t, (seed as usize) % t.n_rows());
        prop_assert_eq!(q_score(&dup, &a, &b).unwrap().value, base);
        prop_assert_eq!(q_score(&relabeled(&t), &a, &b).unwrap().value, base);
    }

    #[test]
    fn matrix_size_is_exact(grid in grid_strategy(30, 6)) {
        let t = build_table("rand", &grid);
        prop_assume!(t.n_columns() >= 2);
        let cols = all_columns(&t);
        let m = q_matrix(&t, &cols).unwrap();
        prop_assert_eq!(m.entries.len(), cols.len() * cols.len() - cols.len());
    }
}

// ── Dependency-mining invariants ──────────────────────────────────────

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn partition_route_equals_pairwise_route(grid in grid_strategy(60, 6)) {
        let t = build_table("rand", &grid);
        prop_assume!(t.n_columns() >= 2);
        let cols = all_columns(&t);
        for size in 1..=2usize.min(cols.len() - 1) {
            for lhs in subsets_of_size(&cols, size) {
                for &rhs in &cols {
                    if lhs.contains(&rhs) { continue; }
                    prop_assert_eq!(
                        fd_holds(&t, &lhs, rhs).unwrap(),
                        fd_holds_pairwise(&t, &lhs, rhs)
                    );
                }
            }
        }
    }

    #[test]
    fn discovery_equals_brute_force(grid in grid_strategy(30, 5)) {
        let t = build_table("rand", &grid);
        prop_assume!(t.n_columns() >= 2);
        let cols = all_columns(&t);
        let mined = discover_fds(&t, &cols, 2).unwrap();
        prop_assert_eq!(mined.name_keys(), brute_force_minimal_fds(&t, &cols, 2));
    }

    #[test]
    fn emitted_multi_column_lhs_is_minimal(grid in grid_strategy(30, 5)) {
        let t = build_table("rand", &grid);
        prop_assume!(t.n_columns() >= 2);
        let cols = all_columns(&t);
        let mined = discover_fds(&t, &cols, 3).unwrap();
        for fd in &mined.fds {
            if fd.lhs.len() < 2 { continue; }
            let lhs_idx: Vec<usize> =
                fd.lhs.iter().map(|n| t.column_index(n).unwrap()).collect();
            let rhs_idx = t.column_index(&fd.rhs).unwrap();
            for size in 1..lhs_idx.len() {
                for sub in subsets_of_size(&lhs_idx, size) {
                    prop_assert!(
                        !fd_holds(&t, &sub, rhs_idx).unwrap(),
                        "subset {sub:?} already determines {}", fd.rhs
                    );
                }
            }
        }
    }

    #[test]
    fn augmentation_is_sound(grid in grid_strategy(40, 5)) {
        let t = build_table("rand", &grid);
        prop_assume!(t.n_columns() >= 3);
        let cols = all_columns(&t);
        for &rhs in &cols {
            for lhs in subsets_of_size(&cols, 1) {
                if lhs.contains(&rhs) { continue; }
                if fd_holds(&t, &lhs, rhs).unwrap() {
                    for &extra in &cols {
                        if extra == rhs || lhs.contains(&extra) { continue; }
                        let mut bigger = lhs.clone();
                        bigger.push(extra);
                        prop_assert!(fd_holds(&t, &bigger, rhs).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn refine_equals_direct_partition(grid in grid_strategy(50, 5)) {
        let t = build_table("rand", &grid);
        prop_assume!(t.n_columns() >= 2);
        let p = partition(&t, &[0]).unwrap();
        let q = partition(&t, &[1]).unwrap();
        prop_assert_eq!(refine(&p, &q).unwrap(), partition(&t, &[0, 1]).unwrap());
    }
}

// ── Preservation invariants ───────────────────────────────────────────

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bootstrap_sample_never_violates(grid in grid_strategy(30, 4), seed in any::<u64>()) {
        let t = build_table("real", &grid);
        prop_assume!(t.n_columns() >= 2 && t.n_rows() >= 1);
        let spec = BaselineSpec::new(BaselineMethod::BootstrapRows, seed, t.n_rows());
        let synth = generate(&t, &spec).unwrap();
        let report = ld_preservation(&t, &synth, &CompareConfig::default()).unwrap();
        prop_assert!(report
            .verdicts
            .iter()
            .all(|v| v.status != VerdictStatus::Violated));
    }

    #[test]
    fn exclusion_verdicts_follow_their_witnesses(grid in grid_strategy(25, 4), seed in any::<u64>()) {
        let real = build_table("real", &grid);
        prop_assume!(real.n_columns() >= 2 && real.n_rows() >= 1);
        // Perturbed synthetic data exercises all verdict kinds.
        let mut spec = BaselineSpec::new(BaselineMethod::NoisySwap, seed, real.n_rows());
        spec.swap_fraction = 0.5;
        let synth = generate(&real, &spec).unwrap();
        let report = ld_preservation(&real, &synth, &CompareConfig::default()).unwrap();
        for v in &report.verdicts {
            prop_assert_eq!(
                v.status == VerdictStatus::NotApplicable,
                v.class_real != DependencyClass::Logical
            );
            if v.class_real == DependencyClass::Logical {
                prop_assert_eq!(v.status == VerdictStatus::Violated, !v.violations.is_empty());
            } else {
                prop_assert!(v.violations.is_empty());
            }
        }
    }

    #[test]
    fn identity_comparison_is_fully_preserved(grid in grid_strategy(30, 4)) {
        let real = build_table("real", &grid);
        prop_assume!(real.n_columns() >= 2);
        let synth = build_table("synth", &grid);
        let report = ld_preservation(&real, &synth, &CompareConfig::default()).unwrap();
        prop_assert_eq!(report.ld_pairs_preserved, report.ld_pairs_total);
        let fd_count = report.venn.shared.len();
        prop_assert_eq!(report.venn.counts(), (0, fd_count, 0));
    }

    #[test]
    fn qepsilon_with_unit_epsilon_means_both_logical(grid in grid_strategy(25, 3), seed in any::<u64>()) {
        let real = build_table("real", &grid);
        prop_assume!(real.n_columns() >= 2 && real.n_rows() >= 1);
        let mut spec = BaselineSpec::new(BaselineMethod::NoisySwap, seed, real.n_rows());
        spec.swap_fraction = 0.3;
        let synth = generate(&real, &spec).unwrap();
        let config = CompareConfig {
            mode: CompareMode::QEpsilon,
            epsilon: rat(1, 1),
            max_lhs: 1,
        };
        let report = ld_preservation(&real, &synth, &config).unwrap();
        for v in &report.verdicts {
            if v.class_real != DependencyClass::Logical { continue; }
            prop_assert_eq!(
                v.status == VerdictStatus::Preserved,
                v.class_synth == DependencyClass::Logical
            );
        }
    }

    #[test]
    fn venn_is_symmetric(grid in grid_strategy(25, 4), seed in any::<u64>()) {
        let real = build_table("x", &grid);
        prop_assume!(real.n_columns() >= 2 && real.n_rows() >= 1);
        let mut spec = BaselineSpec::new(BaselineMethod::NoisySwap, seed, real.n_rows());
        spec.swap_fraction = 0.4;
        let synth = generate(&real, &spec).unwrap();
        let cols = all_columns(&real);
        let fds_a = discover_fds(&real, &cols, 2).unwrap();
        let fds_b = discover_fds(&synth, &cols, 2).unwrap();
        let ab = venn_fd(&fds_a, &fds_b).unwrap();
        let ba = venn_fd(&fds_b, &fds_a).unwrap();
        prop_assert_eq!(ab.real_only, ba.synthetic_only);
        prop_assert_eq!(ab.synthetic_only, ba.real_only);
        prop_assert_eq!(ab.shared, ba.shared);
    }

    #[test]
    fn preservation_percent_survives_permutation_and_relabeling(
        grid in grid_strategy(25, 3),
        seed in any::<u64>(),
    ) {
        let real = build_table("real", &grid);
        prop_assume!(real.n_columns() >= 2 && real.n_rows() >= 1);
        let mut spec = BaselineSpec::new(BaselineMethod::NoisySwap, seed, real.n_rows());
        spec.swap_fraction = 0.3;
        let synth = generate(&real, &spec).unwrap();
        let base = ld_preservation(&real, &synth, &CompareConfig::default()).unwrap();

        let report = ld_preservation(
            &permuted(&real, seed ^ 1),
            &permuted(&synth, seed ^ 2),
            &CompareConfig::default(),
        )
        .unwrap();
        prop_assert_eq!(report.ld_preserved_percent(), base.ld_preserved_percent());

        // The same renaming applied to both tables.
        let report = ld_preservation(&relabeled(&real), &relabeled(&synth), &CompareConfig::default())
            .unwrap();
        prop_assert_eq!(report.ld_preserved_percent(), base.ld_preserved_percent());
    }
}
