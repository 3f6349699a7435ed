//! depq quantifies inter-attribute dependencies in tabular data.
//!
//! Two attributes are *functionally* dependent when every value of one
//! determines the value of the other, and *logically* dependent when some
//! value combinations never occur. The crate scores every ordered column
//! pair with an exact rational in `[0, 1]` (0 = functional, 1 = fully
//! independent, in between = logical), mines the minimal functional
//! dependencies, and measures how well a synthetic dataset preserves the
//! dependencies of the real dataset it imitates.
//!
//! ```
//! use depq::table::{LoadOptions, Table, ColumnSelection};
//! use depq::qscore::q_score;
//!
//! let csv = "City,Country\nKiel,DE\nGent,BE\nKiel,DE\n";
//! let table = Table::load_csv_reader(csv.as_bytes(), "demo", &LoadOptions::default())
//!     .unwrap()
//!     .infer_kinds(20, 0.99);
//! let q = q_score(&table, &ColumnSelection::single(0), &ColumnSelection::single(1)).unwrap();
//! assert!(q.value.numer() == &0); // City determines Country here
//! ```

pub mod baselines;
pub mod compare;
pub mod error;
pub mod fd;
pub mod qscore;
pub mod ratio;
pub mod report;
pub mod rng;
pub mod table;

pub use error::{Error, Result};
