//! Deterministic synthetic-data baselines.
//!
//! These stand in for learned generators and give the comparison pipeline
//! known-answer inputs: `BootstrapRows` keeps every inter-column
//! relationship (its rows are real rows), `IndependentColumns` keeps the
//! marginals but destroys the joint structure, and `NoisySwap`
//! interpolates by swapping a fraction of cells within columns.
//!
//! All randomness comes from [`SplitMix64`](crate::rng::SplitMix64),
//! seeded from the spec, so identical inputs produce byte-identical
//! output on every platform. Draw order is part of the contract:
//! bootstrap draws one source row per output row; independent sampling
//! draws column by column in table order, one source row per output
//! cell; the swap phase draws (row, column, partner row) triples.

use crate::error::{Error, Result};
use crate::rng::SplitMix64;
use crate::table::{Column, ColumnData, Table};

/// The three baseline synthesizers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaselineMethod {
    /// Sample whole rows with replacement.
    BootstrapRows,
    /// Sample each column independently with replacement.
    IndependentColumns,
    /// Bootstrap rows, then swap one cell between row pairs for a
    /// fraction of the rows.
    NoisySwap,
}

impl BaselineMethod {
    pub fn slug(&self) -> &'static str {
        match self {
            BaselineMethod::BootstrapRows => "bootstrap",
            BaselineMethod::IndependentColumns => "independent",
            BaselineMethod::NoisySwap => "noisy-swap",
        }
    }
}

/// Generation parameters.
#[derive(Debug, Clone)]
pub struct BaselineSpec {
    pub method: BaselineMethod,
    pub seed: u64,
    pub n_rows: usize,
    /// Fraction of rows subjected to a swap (`NoisySwap` only).
    pub swap_fraction: f64,
}

impl BaselineSpec {
    pub fn new(method: BaselineMethod, seed: u64, n_rows: usize) -> Self {
        BaselineSpec { method, seed, n_rows, swap_fraction: 0.0 }
    }
}

/// Generates a synthetic table from `real` according to `spec`.
pub fn generate(real: &Table, spec: &BaselineSpec) -> Result<Table> {
    if real.n_rows() == 0 {
        return Err(Error::EmptyInput(format!(
            "'{}' has no rows to sample from",
            real.name
        )));
    }
    if spec.n_rows == 0 {
        return Err(Error::InvalidArgument("n_rows must be at least 1".into()));
    }
    if !(0.0..=1.0).contains(&spec.swap_fraction) {
        return Err(Error::InvalidArgument(format!(
            "swap_fraction must be within [0, 1], got {}",
            spec.swap_fraction
        )));
    }

    let n_real = real.n_rows() as u64;
    let n_out = spec.n_rows;
    let m = real.n_columns();
    let mut rng = SplitMix64::new(spec.seed);

    // Per-column source row indices for every output cell.
    let mut sources: Vec<Vec<usize>> = match spec.method {
        BaselineMethod::BootstrapRows | BaselineMethod::NoisySwap => {
            let rows: Vec<usize> =
                (0..n_out).map(|_| rng.next_below(n_real) as usize).collect();
            vec![rows; m]
        }
        BaselineMethod::IndependentColumns => (0..m)
            .map(|_| (0..n_out).map(|_| rng.next_below(n_real) as usize).collect())
            .collect(),
    };

    if spec.method == BaselineMethod::NoisySwap && m > 0 {
        let swaps = (spec.swap_fraction * n_out as f64).ceil() as usize;
        for _ in 0..swaps {
            let r1 = rng.next_below(n_out as u64) as usize;
            let col = rng.next_below(m as u64) as usize;
            let r2 = rng.next_below(n_out as u64) as usize;
            sources[col].swap(r1, r2);
        }
    }

    let columns: Vec<Column> = real
        .columns()
        .iter()
        .enumerate()
        .map(|(j, col)| match &col.data {
            ColumnData::Categorical { codes, dictionary } => {
                let na = col.na_code();
                let cells: Vec<Option<&str>> = sources[j]
                    .iter()
                    .map(|&src| {
                        let code = codes[src];
                        if Some(code) == na {
                            None
                        } else {
                            Some(dictionary[code as usize].as_str())
                        }
                    })
                    .collect();
                Column::categorical_from_cells(&col.name, &cells)
            }
            ColumnData::Continuous { values } => {
                Column::continuous(&col.name, sources[j].iter().map(|&src| values[src]).collect())
            }
        })
        .collect();

    let name = format!("{}_{}", real.name, spec.method.slug());
    Table::new(&name, columns)
}
