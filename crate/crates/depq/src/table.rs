//! Tabular data model: CSV loading, dictionary encoding, kind inference,
//! discretization, and the co-occurrence relation between column selections.
//!
//! A [`Table`] is immutable once built; every transforming operation
//! returns a new table. Categorical cells are stored as integer codes into
//! a per-column dictionary that is always sorted lexicographically, which
//! makes every downstream report independent of row order, platform and
//! hash-map iteration order.
//!
//! Missing cells are not dropped: they map to the reserved sentinel
//! category [`NA_SENTINEL`], which participates in relations like any
//! other value. Dropping rows would change the counting semantics that
//! the dependency scores are built on.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Read;
use std::path::Path;

use crate::error::{Error, Result};

/// Reserved category for missing cells. Present in a dictionary iff the
/// column actually has missing values. An input cell that literally spells
/// this sentinel is merged with genuine missing values.
pub const NA_SENTINEL: &str = "\u{27E8}NA\u{27E9}"; // ⟨NA⟩

/// Whether a column holds dictionary-encoded categories or raw numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColumnKind {
    Categorical,
    Continuous,
}

#[derive(Debug, Clone)]
pub enum ColumnData {
    /// Per-row codes into `dictionary`, which is sorted and duplicate-free.
    Categorical { codes: Vec<u32>, dictionary: Vec<String> },
    /// Raw numeric values; `None` is a missing cell.
    Continuous { values: Vec<Option<f64>> },
}

/// A single named column.
#[derive(Debug, Clone)]
pub struct Column {
    pub name: String,
    pub data: ColumnData,
}

impl Column {
    /// Builds a categorical column from raw cells (`None` = missing),
    /// constructing the sorted dictionary and the code vector.
    pub fn categorical_from_cells<S: AsRef<str>>(name: &str, cells: &[Option<S>]) -> Column {
        let mut distinct: BTreeSet<&str> = BTreeSet::new();
        let mut has_na = false;
        for cell in cells {
            match cell {
                Some(v) => {
                    let v = v.as_ref();
                    if v == NA_SENTINEL {
                        has_na = true;
                    } else {
                        distinct.insert(v);
                    }
                }
                None => has_na = true,
            }
        }
        let mut dictionary: Vec<String> = distinct.iter().map(|s| s.to_string()).collect();
        if has_na {
            dictionary.push(NA_SENTINEL.to_string());
            dictionary.sort();
        }
        let index: BTreeMap<&str, u32> = dictionary
            .iter()
            .enumerate()
            .map(|(i, v)| (v.as_str(), i as u32))
            .collect();
        let na_code = index.get(NA_SENTINEL).copied();
        let codes = cells
            .iter()
            .map(|cell| match cell {
                Some(v) => *index.get(v.as_ref()).unwrap_or(&na_code.unwrap_or(0)),
                None => na_code.expect("sentinel present when missing cells occur"),
            })
            .collect();
        Column {
            name: name.to_string(),
            data: ColumnData::Categorical { codes, dictionary },
        }
    }

    /// Builds a continuous column (`None` = missing).
    pub fn continuous(name: &str, values: Vec<Option<f64>>) -> Column {
        Column {
            name: name.to_string(),
            data: ColumnData::Continuous { values },
        }
    }

    pub fn kind(&self) -> ColumnKind {
        match self.data {
            ColumnData::Categorical { .. } => ColumnKind::Categorical,
            ColumnData::Continuous { .. } => ColumnKind::Continuous,
        }
    }

    pub fn len(&self) -> usize {
        match &self.data {
            ColumnData::Categorical { codes, .. } => codes.len(),
            ColumnData::Continuous { values } => values.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Code of the NA sentinel, if this column has missing values.
    pub fn na_code(&self) -> Option<u32> {
        match &self.data {
            ColumnData::Categorical { dictionary, .. } => dictionary
                .binary_search_by(|v| v.as_str().cmp(NA_SENTINEL))
                .ok()
                .map(|i| i as u32),
            ColumnData::Continuous { .. } => None,
        }
    }

    /// Distinct category count excluding the NA sentinel. Zero for
    /// continuous columns.
    pub fn distinct_non_na(&self) -> usize {
        match &self.data {
            ColumnData::Categorical { dictionary, .. } => {
                dictionary.len() - usize::from(self.na_code().is_some())
            }
            ColumnData::Continuous { .. } => 0,
        }
    }

    /// Cell rendered for CSV output. Missing cells (either kind) render as
    /// the empty string, which is one of the default NA tokens and so
    /// round-trips through a reload.
    pub fn cell_text(&self, row: usize) -> String {
        match &self.data {
            ColumnData::Categorical { codes, dictionary } => {
                let v = &dictionary[codes[row] as usize];
                if v == NA_SENTINEL {
                    String::new()
                } else {
                    v.clone()
                }
            }
            ColumnData::Continuous { values } => match values[row] {
                Some(v) => format!("{v}"),
                None => String::new(),
            },
        }
    }
}

/// An immutable, dictionary-encoded dataset.
#[derive(Debug, Clone)]
pub struct Table {
    pub name: String,
    n_rows: usize,
    columns: Vec<Column>,
}

/// Ordered, duplicate-free tuple of column indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnSelection {
    indices: Vec<usize>,
}

impl ColumnSelection {
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::InvalidSelection("selection is empty".into()));
        }
        let mut seen = BTreeSet::new();
        for &i in &indices {
            if !seen.insert(i) {
                return Err(Error::InvalidSelection(format!(
                    "column index {i} appears twice in one selection"
                )));
            }
        }
        Ok(ColumnSelection { indices })
    }

    pub fn single(index: usize) -> Self {
        ColumnSelection { indices: vec![index] }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// A value tuple for a selection: one dictionary code per selected column.
pub type Tuple = Vec<u32>;

/// Distinct value tuples a selection takes over the rows of a table.
#[derive(Debug, Clone)]
pub struct TupleSet {
    pub tuples: BTreeSet<Tuple>,
}

impl TupleSet {
    pub fn cardinality(&self) -> usize {
        self.tuples.len()
    }
}

/// The distinct co-occurring tuple pairs of two selections, together with
/// the tuple sets of each side.
#[derive(Debug, Clone)]
pub struct PairRelation {
    pub a: ColumnSelection,
    pub b: ColumnSelection,
    pub set_a: TupleSet,
    pub set_b: TupleSet,
    pub pairs: BTreeSet<(Tuple, Tuple)>,
}

impl PairRelation {
    pub fn card_a(&self) -> usize {
        self.set_a.cardinality()
    }

    pub fn card_b(&self) -> usize {
        self.set_b.cardinality()
    }

    pub fn pair_count(&self) -> usize {
        self.pairs.len()
    }
}

/// CSV loading options.
#[derive(Debug, Clone)]
pub struct LoadOptions {
    pub delimiter: u8,
    pub has_header: bool,
    /// Cell values treated as missing (exact match).
    pub na_tokens: Vec<String>,
    /// Accept a file with zero data rows (a warning is logged).
    pub allow_empty: bool,
}

impl Default for LoadOptions {
    fn default() -> Self {
        LoadOptions {
            delimiter: b',',
            has_header: true,
            na_tokens: vec!["".into(), "NA".into(), "NaN".into(), "null".into()],
            allow_empty: false,
        }
    }
}

impl Table {
    /// Builds a table from columns, validating the structural invariants.
    pub fn new(name: &str, columns: Vec<Column>) -> Result<Table> {
        let n_rows = columns.first().map_or(0, Column::len);
        for c in &columns {
            if c.len() != n_rows {
                return Err(Error::InvalidArgument(format!(
                    "column '{}' has {} values, expected {}",
                    c.name,
                    c.len(),
                    n_rows
                )));
            }
        }
        let mut names = BTreeSet::new();
        for c in &columns {
            if !names.insert(c.name.as_str()) {
                return Err(Error::InvalidArgument(format!(
                    "duplicate column name '{}'",
                    c.name
                )));
            }
        }
        Ok(Table {
            name: name.to_string(),
            n_rows,
            columns,
        })
    }

    /// Loads a CSV file. All columns come out string-typed (categorical
    /// over the raw strings); run [`Table::infer_kinds`] afterwards to
    /// detect continuous columns.
    pub fn load_csv(path: impl AsRef<Path>, options: &LoadOptions) -> Result<Table> {
        let path = path.as_ref();
        let file = std::fs::File::open(path)
            .map_err(|e| Error::io(path.display().to_string(), e))?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "dataset".to_string());
        Table::load_csv_reader(file, &name, options)
    }

    /// Loads CSV from any reader; `name` becomes the dataset name.
    pub fn load_csv_reader(reader: impl Read, name: &str, options: &LoadOptions) -> Result<Table> {
        let mut rdr = csv::ReaderBuilder::new()
            .delimiter(options.delimiter)
            .has_headers(options.has_header)
            .flexible(false)
            .from_reader(reader);

        let headers: Vec<String> = if options.has_header {
            rdr.headers()
                .map_err(|e| csv_error_to_parse(e, 0))?
                .iter()
                .map(|h| h.to_string())
                .collect()
        } else {
            Vec::new()
        };

        let mut cells: Vec<Vec<Option<String>>> = headers.iter().map(|_| Vec::new()).collect();
        let mut n_rows: u64 = 0;
        for record in rdr.records() {
            let record = record.map_err(|e| csv_error_to_parse(e, n_rows + 1))?;
            n_rows += 1;
            if cells.is_empty() {
                // Headerless file: width fixed by the first record.
                cells = (0..record.len()).map(|_| Vec::new()).collect();
            }
            if record.len() != cells.len() {
                return Err(Error::Parse {
                    row: n_rows,
                    message: format!(
                        "expected {} fields, found {}",
                        cells.len(),
                        record.len()
                    ),
                });
            }
            for (j, field) in record.iter().enumerate() {
                let cell = if options.na_tokens.iter().any(|t| t == field) {
                    None
                } else {
                    Some(field.to_string())
                };
                cells[j].push(cell);
            }
        }

        if n_rows == 0 {
            if !options.allow_empty {
                return Err(Error::EmptyInput(format!(
                    "'{name}' has no data rows"
                )));
            }
            log::warn!("'{name}' has no data rows");
        }

        let names: Vec<String> = if options.has_header {
            headers
        } else {
            (1..=cells.len()).map(|i| format!("col{i}")).collect()
        };
        let mut name_set = BTreeSet::new();
        for n in &names {
            if !name_set.insert(n.as_str()) {
                return Err(Error::Parse {
                    row: 0,
                    message: format!("duplicate column name '{n}' in header"),
                });
            }
        }

        let columns = names
            .iter()
            .zip(cells.iter())
            .map(|(n, c)| Column::categorical_from_cells(n, c))
            .collect();
        Table::new(name, columns)
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_columns(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn column(&self, index: usize) -> &Column {
        &self.columns[index]
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    /// Indices of all categorical columns, in table order.
    pub fn categorical_columns(&self) -> Vec<usize> {
        self.columns
            .iter()
            .enumerate()
            .filter(|(_, c)| c.kind() == ColumnKind::Categorical)
            .map(|(i, _)| i)
            .collect()
    }

    /// Re-types columns: a column becomes continuous iff at least
    /// `numeric_fraction` of its non-missing cells parse as numbers and it
    /// has more than `cardinality_threshold` distinct non-missing values.
    /// Everything else stays categorical. Cells of a continuous column
    /// that fail to parse are treated as missing.
    pub fn infer_kinds(&self, cardinality_threshold: usize, numeric_fraction: f64) -> Table {
        let columns = self
            .columns
            .iter()
            .map(|col| match &col.data {
                ColumnData::Continuous { .. } => col.clone(),
                ColumnData::Categorical { codes, dictionary } => {
                    let na = col.na_code();
                    let parsed: Vec<Option<f64>> = dictionary
                        .iter()
                        .map(|v| v.trim().parse::<f64>().ok())
                        .collect();
                    let mut non_na = 0usize;
                    let mut numeric = 0usize;
                    for &code in codes {
                        if Some(code) == na {
                            continue;
                        }
                        non_na += 1;
                        if parsed[code as usize].is_some() {
                            numeric += 1;
                        }
                    }
                    let fraction_ok =
                        non_na > 0 && numeric as f64 >= numeric_fraction * non_na as f64;
                    if fraction_ok && col.distinct_non_na() > cardinality_threshold {
                        let values = codes
                            .iter()
                            .map(|&code| {
                                if Some(code) == na {
                                    None
                                } else {
                                    parsed[code as usize]
                                }
                            })
                            .collect();
                        Column::continuous(&col.name, values)
                    } else {
                        col.clone()
                    }
                }
            })
            .collect();
        Table {
            name: self.name.clone(),
            n_rows: self.n_rows,
            columns,
        }
    }

    /// Replaces a continuous column with equal-width bins over
    /// `[min, max]`. Bin labels are `[lo,hi)` with the last bin closed;
    /// missing cells stay missing. A constant column yields a single
    /// category and a warning.
    pub fn discretize(&self, column: usize, n_bins: usize) -> Result<Table> {
        if column >= self.columns.len() {
            return Err(Error::InvalidSelection(format!(
                "column index {column} out of range (table has {})",
                self.columns.len()
            )));
        }
        if n_bins < 2 {
            return Err(Error::InvalidArgument(format!(
                "n_bins must be at least 2, got {n_bins}"
            )));
        }
        let col = &self.columns[column];
        let values = match &col.data {
            ColumnData::Continuous { values } => values,
            ColumnData::Categorical { .. } => {
                return Err(Error::InvalidArgument(format!(
                    "column '{}' is categorical; only continuous columns can be discretized",
                    col.name
                )));
            }
        };

        let present: Vec<f64> = values.iter().flatten().copied().collect();
        let cells: Vec<Option<String>> = if present.is_empty() {
            log::warn!("column '{}' has no numeric values; all cells stay missing", col.name);
            values.iter().map(|_| None).collect()
        } else {
            let min = present.iter().copied().fold(f64::INFINITY, f64::min);
            let max = present.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            if min == max {
                log::warn!(
                    "column '{}' has degenerate range [{min},{max}]; producing a single category",
                    col.name
                );
                let label = format!("[{min},{max}]");
                values
                    .iter()
                    .map(|v| v.map(|_| label.clone()))
                    .collect()
            } else {
                let width = (max - min) / n_bins as f64;
                let labels: Vec<String> = (0..n_bins)
                    .map(|i| {
                        let lo = min + i as f64 * width;
                        if i + 1 == n_bins {
                            format!("[{lo},{max}]")
                        } else {
                            format!("[{lo},{})", min + (i + 1) as f64 * width)
                        }
                    })
                    .collect();
                values
                    .iter()
                    .map(|v| {
                        v.map(|x| {
                            let bin = (((x - min) / width) as usize).min(n_bins - 1);
                            labels[bin].clone()
                        })
                    })
                    .collect()
            }
        };

        let mut columns = self.columns.clone();
        columns[column] = Column::categorical_from_cells(&col.name, &cells);
        Ok(Table {
            name: self.name.clone(),
            n_rows: self.n_rows,
            columns,
        })
    }

    fn validate_selection(&self, sel: &ColumnSelection) -> Result<()> {
        for &i in sel.indices() {
            if i >= self.columns.len() {
                return Err(Error::InvalidSelection(format!(
                    "column index {i} out of range (table has {})",
                    self.columns.len()
                )));
            }
            if self.columns[i].kind() != ColumnKind::Categorical {
                return Err(Error::ContinuousColumn(self.columns[i].name.clone()));
            }
        }
        Ok(())
    }

    /// The value tuple of `sel` at a row.
    pub fn row_tuple(&self, sel: &ColumnSelection, row: usize) -> Tuple {
        sel.indices()
            .iter()
            .map(|&i| match &self.columns[i].data {
                ColumnData::Categorical { codes, .. } => codes[row],
                ColumnData::Continuous { .. } => unreachable!("selection validated categorical"),
            })
            .collect()
    }

    /// Renders a tuple back into the category strings it encodes.
    pub fn decode_tuple(&self, sel: &ColumnSelection, tuple: &Tuple) -> Vec<String> {
        sel.indices()
            .iter()
            .zip(tuple.iter())
            .map(|(&i, &code)| match &self.columns[i].data {
                ColumnData::Categorical { dictionary, .. } => dictionary[code as usize].clone(),
                ColumnData::Continuous { .. } => unreachable!("selection validated categorical"),
            })
            .collect()
    }

    /// The exact set of distinct co-occurring tuple pairs of two
    /// selections over all rows, with the tuple set of each side. The NA
    /// sentinel participates as an ordinary category.
    pub fn relation(&self, a: &ColumnSelection, b: &ColumnSelection) -> Result<PairRelation> {
        self.validate_selection(a)?;
        self.validate_selection(b)?;
        if a.len() == 1 && b.len() == 1 && a.indices() == b.indices() {
            return Err(Error::InvalidSelection(format!(
                "self-pair: both selections are column {}",
                a.indices()[0]
            )));
        }

        let mut tuples_a = BTreeSet::new();
        let mut tuples_b = BTreeSet::new();
        let mut pairs = BTreeSet::new();
        for row in 0..self.n_rows {
            let ta = self.row_tuple(a, row);
            let tb = self.row_tuple(b, row);
            tuples_a.insert(ta.clone());
            tuples_b.insert(tb.clone());
            pairs.insert((ta, tb));
        }
        Ok(PairRelation {
            a: a.clone(),
            b: b.clone(),
            set_a: TupleSet { tuples: tuples_a },
            set_b: TupleSet { tuples: tuples_b },
            pairs,
        })
    }

    /// Projection onto the named columns, in the given order.
    pub fn with_columns(&self, names: &[String]) -> Result<Table> {
        let columns = names
            .iter()
            .map(|n| {
                self.column_index(n)
                    .map(|i| self.columns[i].clone())
                    .ok_or_else(|| {
                        Error::InvalidSelection(format!("no column named '{n}'"))
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        Table::new(&self.name, columns)
    }

    /// Writes the table as CSV with its current schema. Missing cells
    /// serialize as empty strings.
    pub fn write_csv(&self, out: &mut impl std::io::Write) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(out);
        wtr.write_record(self.columns.iter().map(|c| c.name.as_str()))
            .map_err(|e| write_error(&self.name, e))?;
        for row in 0..self.n_rows {
            wtr.write_record(self.columns.iter().map(|c| c.cell_text(row)))
                .map_err(|e| write_error(&self.name, e))?;
        }
        wtr.flush().map_err(|e| Error::io(self.name.clone(), e))?;
        Ok(())
    }

    /// CSV bytes of the table; convenience over [`Table::write_csv`].
    pub fn to_csv_bytes(&self) -> Result<Vec<u8>> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(buf)
    }
}

fn write_error(name: &str, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(name, io),
        other => Error::Parse {
            row: 0,
            message: format!("csv write failed: {other:?}"),
        },
    }
}

fn csv_error_to_parse(e: csv::Error, row: u64) -> Error {
    match e.kind() {
        csv::ErrorKind::UnequalLengths { expected_len, len, .. } => Error::Parse {
            row,
            message: format!("expected {expected_len} fields, found {len}"),
        },
        _ => Error::Parse {
            row,
            message: e.to_string(),
        },
    }
}
