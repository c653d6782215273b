//! Frequency rectangles and their extension to frequency squares.
//!
//! A frequency square of order `n` with class multiplicities
//! `lambda_1..lambda_k` (summing to `n`) has class `i` exactly
//! `lambda_i` times in every row and column. A partial frequency
//! rectangle of type `(t; mu_1..mu_k)` bounds class `i` by `mu_i` per
//! row and column, `t = sum(mu)`. Extension to a full square is decided
//! by a witness extension satisfying the four counting conditions
//! B1-B4, and constructed by splitting classes into per-copy labels,
//! shuffling them into the appended columns, filling the leftover gaps
//! with fresh labels, and completing the resulting band row by row.

use std::fmt;

use thiserror::Error;

use crate::cells::CellSet;
use crate::engines::flow::{feasible_flow, BoundedFlowNetwork};
use crate::format::{grid_line, parse_grid_lines, ParseError};
use crate::gapfill::{gap_fill, GapInstance};
use crate::report::ConditionReport;
use crate::shuffle::{shuffle, ShuffleInstance};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FreqError {
    #[error("a partition needs at least one part")]
    EmptyPartition,
    #[error("partition has {got} parts, expected {expected}")]
    ClassCountMismatch { expected: usize, got: usize },
    #[error("class {class} allows {mu} per line but the target multiplicity is {lambda}")]
    MuExceedsLambda {
        class: usize,
        mu: usize,
        lambda: usize,
    },
    #[error("target multiplicities sum to {total}, expected the order {n}")]
    LambdaTotalMismatch { total: usize, n: usize },
    #[error("class {class} out of range 1..={classes}")]
    ClassOutOfRange { class: usize, classes: usize },
    #[error("class {class} occurs {count} times in row {row}, allowed {max}")]
    TooManyInRow {
        row: usize,
        class: usize,
        count: usize,
        max: usize,
    },
    #[error("class {class} occurs {count} times in column {col}, allowed {max}")]
    TooManyInColumn {
        col: usize,
        class: usize,
        count: usize,
        max: usize,
    },
    #[error("class {class} occurs {count} times in row {row}, expected exactly {expected}")]
    RowCountNotExact {
        row: usize,
        class: usize,
        count: usize,
        expected: usize,
    },
    #[error("rectangle of shape {rows} x {cols} does not fit in order {n}")]
    ShapeTooLarge { rows: usize, cols: usize, n: usize },
    #[error("grid row {row} has {got} cells, expected {expected}")]
    RaggedGrid {
        row: usize,
        got: usize,
        expected: usize,
    },
}

/// A list of nonnegative class multiplicities.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self, FreqError> {
        if parts.is_empty() {
            return Err(FreqError::EmptyPartition);
        }
        Ok(Partition { parts })
    }

    pub fn total(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    /// Always false: construction requires at least one part.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn part(&self, i: usize) -> usize {
        self.parts[i]
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Offsets of each class in the split-label numbering.
    pub fn prefix_sums(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.parts.len());
        let mut acc = 0;
        for &p in &self.parts {
            out.push(acc);
            acc += p;
        }
        out
    }
}

/// An `r x s` grid of optional 0-based class indices in which class `i`
/// occurs at most `mu_i` times in each row and each column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencyRectangle {
    rows: usize,
    cols: usize,
    mu: Partition,
    grid: Vec<Option<usize>>,
}

impl FrequencyRectangle {
    pub fn new(
        rows: usize,
        cols: usize,
        mu: Partition,
        grid: Vec<Vec<Option<usize>>>,
    ) -> Result<Self, FreqError> {
        let k = mu.len();
        if grid.len() != rows {
            return Err(FreqError::RaggedGrid {
                row: 0,
                got: grid.len(),
                expected: rows,
            });
        }
        for (r, row) in grid.iter().enumerate() {
            if row.len() != cols {
                return Err(FreqError::RaggedGrid {
                    row: r + 1,
                    got: row.len(),
                    expected: cols,
                });
            }
        }
        let flat: Vec<Option<usize>> = grid.into_iter().flatten().collect();
        for cls in flat.iter().flatten() {
            if *cls >= k {
                return Err(FreqError::ClassOutOfRange {
                    class: cls + 1,
                    classes: k,
                });
            }
        }
        let rect = FrequencyRectangle {
            rows,
            cols,
            mu,
            grid: flat,
        };
        for r in 0..rows {
            for cls in 0..k {
                let count = rect.row_class_count(r, cls);
                if count > rect.mu.part(cls) {
                    return Err(FreqError::TooManyInRow {
                        row: r + 1,
                        class: cls + 1,
                        count,
                        max: rect.mu.part(cls),
                    });
                }
            }
        }
        for c in 0..cols {
            for cls in 0..k {
                let count = rect.col_class_count(c, cls);
                if count > rect.mu.part(cls) {
                    return Err(FreqError::TooManyInColumn {
                        col: c + 1,
                        class: cls + 1,
                        count,
                        max: rect.mu.part(cls),
                    });
                }
            }
        }
        Ok(rect)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn classes(&self) -> usize {
        self.mu.len()
    }

    pub fn mu(&self) -> &Partition {
        &self.mu
    }

    /// The instance symbol budget `t = sum(mu)`.
    pub fn t(&self) -> usize {
        self.mu.total()
    }

    pub fn get(&self, row: usize, col: usize) -> Option<usize> {
        self.grid[row * self.cols + col]
    }

    pub fn entry_count(&self) -> usize {
        self.grid.iter().filter(|c| c.is_some()).count()
    }

    pub fn row_entry_count(&self, row: usize) -> usize {
        (0..self.cols).filter(|&c| self.get(row, c).is_some()).count()
    }

    pub fn col_entry_count(&self, col: usize) -> usize {
        (0..self.rows).filter(|&r| self.get(r, col).is_some()).count()
    }

    pub fn row_class_count(&self, row: usize, cls: usize) -> usize {
        (0..self.cols).filter(|&c| self.get(row, c) == Some(cls)).count()
    }

    pub fn col_class_count(&self, col: usize, cls: usize) -> usize {
        (0..self.rows).filter(|&r| self.get(r, col) == Some(cls)).count()
    }

    pub fn class_occurrences(&self, cls: usize) -> usize {
        self.grid.iter().filter(|&&c| c == Some(cls)).count()
    }

    pub fn to_grid(&self) -> Vec<Vec<Option<usize>>> {
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c)).collect())
            .collect()
    }

    pub fn extends(&self, other: &FrequencyRectangle) -> bool {
        if self.rows < other.rows || self.cols < other.cols {
            return false;
        }
        (0..other.rows).all(|r| {
            (0..other.cols).all(|c| other.get(r, c).is_none() || self.get(r, c) == other.get(r, c))
        })
    }
}

impl fmt::Display for FrequencyRectangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {} {}", self.rows, self.cols, self.classes())?;
        let mu_line: Vec<String> = self.mu.parts().iter().map(|p| p.to_string()).collect();
        writeln!(f, "{}", mu_line.join(" "))?;
        for row in self.to_grid() {
            writeln!(f, "{}", grid_line(&row))?;
        }
        Ok(())
    }
}

/// A full order-`n` square with class `i` exactly `lambda_i` times in
/// every row and column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencySquare {
    lambda: Partition,
    grid: Vec<usize>,
}

impl FrequencySquare {
    pub fn new(lambda: Partition, grid: Vec<Vec<usize>>) -> Result<Self, FreqError> {
        let n = lambda.total();
        if grid.len() != n {
            return Err(FreqError::RaggedGrid {
                row: 0,
                got: grid.len(),
                expected: n,
            });
        }
        for (r, row) in grid.iter().enumerate() {
            if row.len() != n {
                return Err(FreqError::RaggedGrid {
                    row: r + 1,
                    got: row.len(),
                    expected: n,
                });
            }
        }
        let flat: Vec<usize> = grid.into_iter().flatten().collect();
        for &cls in &flat {
            if cls >= lambda.len() {
                return Err(FreqError::ClassOutOfRange {
                    class: cls + 1,
                    classes: lambda.len(),
                });
            }
        }
        let sq = FrequencySquare { lambda, grid: flat };
        let n = sq.order();
        for r in 0..n {
            for cls in 0..sq.lambda.len() {
                let count = (0..n).filter(|&c| sq.get(r, c) == cls).count();
                if count != sq.lambda.part(cls) {
                    return Err(FreqError::RowCountNotExact {
                        row: r + 1,
                        class: cls + 1,
                        count,
                        expected: sq.lambda.part(cls),
                    });
                }
            }
        }
        for c in 0..n {
            for cls in 0..sq.lambda.len() {
                let count = (0..n).filter(|&r| sq.get(r, c) == cls).count();
                if count != sq.lambda.part(cls) {
                    return Err(FreqError::TooManyInColumn {
                        col: c + 1,
                        class: cls + 1,
                        count,
                        max: sq.lambda.part(cls),
                    });
                }
            }
        }
        Ok(sq)
    }

    pub fn order(&self) -> usize {
        self.lambda.total()
    }

    pub fn lambda(&self) -> &Partition {
        &self.lambda
    }

    pub fn get(&self, row: usize, col: usize) -> usize {
        self.grid[row * self.order() + col]
    }

    /// Views the square as a full frequency rectangle of type
    /// `(n; lambda)`.
    pub fn as_rectangle(&self) -> FrequencyRectangle {
        let n = self.order();
        FrequencyRectangle {
            rows: n,
            cols: n,
            mu: self.lambda.clone(),
            grid: self.grid.iter().map(|&c| Some(c)).collect(),
        }
    }
}

impl fmt::Display for FrequencySquare {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.order();
        writeln!(f, "{} {} {}", n, n, self.lambda.len())?;
        for r in 0..n {
            let row: Vec<Option<usize>> = (0..n).map(|c| Some(self.get(r, c))).collect();
            writeln!(f, "{}", grid_line(&row))?;
        }
        Ok(())
    }
}

fn validate_partitions(
    r: &FrequencyRectangle,
    lambda: &Partition,
    n: usize,
) -> Result<(), FreqError> {
    if lambda.len() != r.classes() {
        return Err(FreqError::ClassCountMismatch {
            expected: r.classes(),
            got: lambda.len(),
        });
    }
    if lambda.total() != n {
        return Err(FreqError::LambdaTotalMismatch {
            total: lambda.total(),
            n,
        });
    }
    for cls in 0..lambda.len() {
        if r.mu().part(cls) > lambda.part(cls) {
            return Err(FreqError::MuExceedsLambda {
                class: cls + 1,
                mu: r.mu().part(cls),
                lambda: lambda.part(cls),
            });
        }
    }
    if r.rows() > n || r.cols() > n {
        return Err(FreqError::ShapeTooLarge {
            rows: r.rows(),
            cols: r.cols(),
            n,
        });
    }
    Ok(())
}

/// The shared entry bound
/// `(r*s*t + (n-r)*(n-s)*(n-t)) / n = n^2 - n(r+s+t) + rs + rt + st`.
pub(crate) fn entry_bound(r: usize, s: usize, t: usize, n: usize) -> i64 {
    let (r, s, t, n) = (r as i64, s as i64, t as i64, n as i64);
    n * n - n * (r + s + t) + r * s + r * t + s * t
}

/// Checks conditions B1-B4 for extending `rp` to an `F(n; lambda)`
/// square: rows at least `s+t-n` entries, columns at least `r+t-n`,
/// class `i` at least `mu_i (r+s-n)` occurrences, and the shared entry
/// bound.
pub fn check_freq_conditions(
    rp: &FrequencyRectangle,
    lambda: &Partition,
    n: usize,
) -> Result<ConditionReport, FreqError> {
    validate_partitions(rp, lambda, n)?;
    let (r, s, t) = (rp.rows(), rp.cols(), rp.t());
    let mut report = ConditionReport::new();

    let row_bound = s as i64 + t as i64 - n as i64;
    let (row_margin, row_arg) = (0..r)
        .map(|i| (rp.row_entry_count(i) as i64 - row_bound, i))
        .min()
        .expect("at least one row");
    report.push("B1", row_margin, Some(format!("row {}", row_arg + 1)));

    let col_bound = r as i64 + t as i64 - n as i64;
    let (col_margin, col_arg) = (0..s)
        .map(|j| (rp.col_entry_count(j) as i64 - col_bound, j))
        .min()
        .expect("at least one column");
    report.push("B2", col_margin, Some(format!("column {}", col_arg + 1)));

    let (cls_margin, cls_arg) = (0..rp.classes())
        .map(|cls| {
            let bound = rp.mu().part(cls) as i64 * (r as i64 + s as i64 - n as i64);
            (rp.class_occurrences(cls) as i64 - bound, cls)
        })
        .min()
        .expect("at least one class");
    report.push("B3", cls_margin, Some(format!("class {}", cls_arg + 1)));

    let bound = entry_bound(r, s, t, n);
    report.push("B4", bound - rp.entry_count() as i64, None);
    Ok(report)
}

struct FreqWitnessSearch {
    rows: usize,
    cols: usize,
    k: usize,
    mu: Vec<usize>,
    grid: Vec<Option<usize>>,
    row_cls: Vec<Vec<usize>>,
    col_cls: Vec<Vec<usize>>,
    row_need: Vec<i64>,
    col_need: Vec<i64>,
    cls_need: Vec<i64>,
    total_row_need: i64,
    total_col_need: i64,
    total_cls_need: i64,
    row_free: Vec<i64>,
    col_free: Vec<i64>,
    entries: i64,
    max_entries: i64,
    empties: Vec<(usize, usize)>,
}

impl FreqWitnessSearch {
    fn place(&mut self, r: usize, c: usize, cls: usize) {
        self.grid[r * self.cols + c] = Some(cls);
        self.row_cls[r][cls] += 1;
        self.col_cls[c][cls] += 1;
        self.entries += 1;
        if self.row_need[r] > 0 {
            self.total_row_need -= 1;
        }
        self.row_need[r] -= 1;
        if self.col_need[c] > 0 {
            self.total_col_need -= 1;
        }
        self.col_need[c] -= 1;
        if self.cls_need[cls] > 0 {
            self.total_cls_need -= 1;
        }
        self.cls_need[cls] -= 1;
    }

    fn unplace(&mut self, r: usize, c: usize, cls: usize) {
        self.grid[r * self.cols + c] = None;
        self.row_cls[r][cls] -= 1;
        self.col_cls[c][cls] -= 1;
        self.entries -= 1;
        self.row_need[r] += 1;
        if self.row_need[r] > 0 {
            self.total_row_need += 1;
        }
        self.col_need[c] += 1;
        if self.col_need[c] > 0 {
            self.total_col_need += 1;
        }
        self.cls_need[cls] += 1;
        if self.cls_need[cls] > 0 {
            self.total_cls_need += 1;
        }
    }

    fn satisfied(&self) -> bool {
        self.total_row_need == 0 && self.total_col_need == 0 && self.total_cls_need == 0
    }

    fn prune(&self) -> bool {
        let worst = self
            .total_row_need
            .max(self.total_col_need)
            .max(self.total_cls_need);
        if self.entries + worst > self.max_entries {
            return true;
        }
        (0..self.rows).any(|r| self.row_need[r] > self.row_free[r])
            || (0..self.cols).any(|c| self.col_need[c] > self.col_free[c])
    }

    fn dfs(&mut self, idx: usize) -> bool {
        if self.satisfied() {
            return true;
        }
        if idx == self.empties.len() || self.prune() {
            return false;
        }
        let (r, c) = self.empties[idx];
        self.row_free[r] -= 1;
        self.col_free[c] -= 1;
        for cls in 0..self.k {
            if self.row_cls[r][cls] < self.mu[cls]
                && self.col_cls[c][cls] < self.mu[cls]
                && self.entries < self.max_entries
            {
                self.place(r, c, cls);
                if self.dfs(idx + 1) {
                    return true;
                }
                self.unplace(r, c, cls);
            }
        }
        let found = self.dfs(idx + 1);
        if !found {
            self.row_free[r] += 1;
            self.col_free[c] += 1;
        }
        found
    }
}

/// Searches for an extension of `r` (same shape, same per-line class
/// bounds) satisfying B1-B4. Depth-first over empty cells in row-major
/// order, class indices ascending, pruning against the entry bound.
pub fn find_freq_witness(
    r: &FrequencyRectangle,
    lambda: &Partition,
    n: usize,
) -> Result<Option<FrequencyRectangle>, FreqError> {
    validate_partitions(r, lambda, n)?;
    let (rows, cols, t, k) = (r.rows(), r.cols(), r.t(), r.classes());
    let row_bound = cols as i64 + t as i64 - n as i64;
    let col_bound = rows as i64 + t as i64 - n as i64;
    let row_need: Vec<i64> = (0..rows)
        .map(|i| row_bound - r.row_entry_count(i) as i64)
        .collect();
    let col_need: Vec<i64> = (0..cols)
        .map(|j| col_bound - r.col_entry_count(j) as i64)
        .collect();
    let cls_need: Vec<i64> = (0..k)
        .map(|cls| {
            r.mu().part(cls) as i64 * (rows as i64 + cols as i64 - n as i64)
                - r.class_occurrences(cls) as i64
        })
        .collect();
    let empties: Vec<(usize, usize)> = (0..rows)
        .flat_map(|i| (0..cols).map(move |j| (i, j)))
        .filter(|&(i, j)| r.get(i, j).is_none())
        .collect();
    let mut search = FreqWitnessSearch {
        rows,
        cols,
        k,
        mu: r.mu().parts().to_vec(),
        grid: (0..rows * cols)
            .map(|idx| r.get(idx / cols, idx % cols))
            .collect(),
        row_cls: (0..rows)
            .map(|i| (0..k).map(|cls| r.row_class_count(i, cls)).collect())
            .collect(),
        col_cls: (0..cols)
            .map(|j| (0..k).map(|cls| r.col_class_count(j, cls)).collect())
            .collect(),
        total_row_need: row_need.iter().filter(|&&d| d > 0).sum(),
        total_col_need: col_need.iter().filter(|&&d| d > 0).sum(),
        total_cls_need: cls_need.iter().filter(|&&d| d > 0).sum(),
        row_need,
        col_need,
        cls_need,
        row_free: (0..rows)
            .map(|i| (cols - r.row_entry_count(i)) as i64)
            .collect(),
        col_free: (0..cols)
            .map(|j| (rows - r.col_entry_count(j)) as i64)
            .collect(),
        entries: r.entry_count() as i64,
        max_entries: entry_bound(rows, cols, t, n),
        empties,
    };
    if search.entries > search.max_entries {
        return Ok(None);
    }
    if !search.dfs(0) {
        return Ok(None);
    }
    let grid = (0..rows)
        .map(|i| (0..cols).map(|j| search.grid[i * cols + j]).collect())
        .collect();
    Ok(Some(
        FrequencyRectangle::new(rows, cols, r.mu().clone(), grid)
            .expect("witness extension respects the instance bounds"),
    ))
}

// Splits region-A classes into per-copy labels, scanning row-major and
// cycling the copy index modulo mu. Returns label ids
// `prefix(cls) + copy`.
fn split_relabel(
    region: &[Vec<Option<usize>>],
    mu: &Partition,
) -> Vec<Vec<Option<usize>>> {
    let prefix = mu.prefix_sums();
    let mut seen = vec![0usize; mu.len()];
    region
        .iter()
        .map(|row| {
            row.iter()
                .map(|cell| {
                    cell.map(|cls| {
                        let j = seen[cls];
                        seen[cls] += 1;
                        prefix[cls] + j % mu.part(cls)
                    })
                })
                .collect()
        })
        .collect()
}

// Maps split labels back to their classes.
fn merge_labels(region: &[Vec<Option<usize>>], mu: &Partition) -> Vec<Vec<Option<usize>>> {
    let prefix = mu.prefix_sums();
    let class_of = |label: usize| {
        (0..mu.len())
            .rfind(|&cls| prefix[cls] <= label)
            .expect("label lies in some class range")
    };
    region
        .iter()
        .map(|row| row.iter().map(|cell| cell.map(class_of)).collect())
        .collect()
}

/// Completes a full `r x n` band (class `i` exactly `lambda_i` per row,
/// at most `lambda_i` per column) to an `F(n; lambda)` square, one row
/// at a time via a feasible flow from column slots to classes.
pub fn complete_freq_band(
    band: &[Vec<usize>],
    lambda: &Partition,
) -> Result<FrequencySquare, FreqError> {
    let n = lambda.total();
    let k = lambda.len();
    let rows = band.len();
    if rows > n {
        return Err(FreqError::ShapeTooLarge {
            rows,
            cols: n,
            n,
        });
    }
    for (r, row) in band.iter().enumerate() {
        if row.len() != n {
            return Err(FreqError::RaggedGrid {
                row: r + 1,
                got: row.len(),
                expected: n,
            });
        }
        for cls in 0..k {
            let count = row.iter().filter(|&&x| x == cls).count();
            if count != lambda.part(cls) {
                return Err(FreqError::RowCountNotExact {
                    row: r + 1,
                    class: cls + 1,
                    count,
                    expected: lambda.part(cls),
                });
            }
        }
    }
    let mut col_cnt = vec![vec![0usize; k]; n];
    for row in band {
        for (c, &cls) in row.iter().enumerate() {
            if cls >= k {
                return Err(FreqError::ClassOutOfRange {
                    class: cls + 1,
                    classes: k,
                });
            }
            col_cnt[c][cls] += 1;
            if col_cnt[c][cls] > lambda.part(cls) {
                return Err(FreqError::TooManyInColumn {
                    col: c + 1,
                    class: cls + 1,
                    count: col_cnt[c][cls],
                    max: lambda.part(cls),
                });
            }
        }
    }

    let mut full: Vec<Vec<usize>> = band.to_vec();
    for _ in rows..n {
        // nodes: source, n column slots, k classes, sink
        let source = 0;
        let sink = 1 + n + k;
        let mut net = BoundedFlowNetwork::new(n + k + 2, source, sink)
            .expect("well-formed row network");
        let mut slot_arcs = vec![Vec::new(); n];
        for c in 0..n {
            net.add_arc(source, 1 + c, 1, 1).expect("slot arc");
            for cls in 0..k {
                if col_cnt[c][cls] < lambda.part(cls) {
                    let arc = net
                        .add_arc(1 + c, 1 + n + cls, 0, 1)
                        .expect("choice arc");
                    slot_arcs[c].push((arc, cls));
                }
            }
        }
        for cls in 0..k {
            net.add_arc(1 + n + cls, sink, lambda.part(cls), lambda.part(cls))
                .expect("class quota arc");
        }
        let flow = feasible_flow(&net)
            .expect("a valid band always extends by one row");
        let mut row = vec![usize::MAX; n];
        for c in 0..n {
            for &(arc, cls) in &slot_arcs[c] {
                if flow[arc] == 1 {
                    row[c] = cls;
                    col_cnt[c][cls] += 1;
                }
            }
        }
        debug_assert!(row.iter().all(|&cls| cls != usize::MAX));
        full.push(row);
    }
    FrequencySquare::new(lambda.clone(), full)
}

/// Extends `r` to an `F(n; lambda)` square, or returns `None` when no
/// extension exists.
///
/// The witness search runs at the declared instance type first. A
/// declared bound `mu_i < lambda_i` can rule out every witness even
/// though a completion exists (the completion's corner may need class
/// `i` more than `mu_i` times per line), so on failure the search is
/// retried with the bounds raised to `lambda`: any completion's corner
/// is a full witness at that type, which makes the retry an exact
/// decision.
pub fn complete_frequency(
    r: &FrequencyRectangle,
    lambda: &Partition,
    n: usize,
) -> Result<Option<FrequencySquare>, FreqError> {
    validate_partitions(r, lambda, n)?;
    if let Some(sq) = complete_with_type(r, lambda, n)? {
        return Ok(Some(sq));
    }
    if r.mu().parts() != lambda.parts() {
        let widened = FrequencyRectangle::new(r.rows(), r.cols(), lambda.clone(), r.to_grid())
            .expect("lambda bounds dominate the declared bounds");
        if let Some(sq) = complete_with_type(&widened, lambda, n)? {
            return Ok(Some(sq));
        }
    }
    Ok(None)
}

fn complete_with_type(
    r: &FrequencyRectangle,
    lambda: &Partition,
    n: usize,
) -> Result<Option<FrequencySquare>, FreqError> {
    let Some(witness) = find_freq_witness(r, lambda, n)? else {
        return Ok(None);
    };
    let (rows, cols, t, k) = (witness.rows(), witness.cols(), witness.t(), witness.classes());

    // region A: per-row class deficits, left-justified, classes ascending
    let width = n - cols;
    let mut region: Vec<Vec<Option<usize>>> = Vec::with_capacity(rows);
    for i in 0..rows {
        let mut row = Vec::with_capacity(width);
        for cls in 0..k {
            let deficit = witness.mu().part(cls) - witness.row_class_count(i, cls);
            row.extend(std::iter::repeat_n(Some(cls), deficit));
        }
        assert!(row.len() <= width, "row deficits fit the appended columns");
        row.resize(width, None);
        region.push(row);
    }

    // split copies apart, shuffle them into columns, then merge back
    let labeled = split_relabel(&region, witness.mu());
    let quota = (rows + t).saturating_sub(n);
    let shuffled = if width > 0 {
        let inst = ShuffleInstance::new(rows, width, quota, labeled)
            .expect("witness conditions are the shuffle hypothesis");
        shuffle(&inst)
    } else {
        labeled
    };
    let region = merge_labels(&shuffled, witness.mu());

    // assemble the r x n band over classes, leaving gaps empty
    let mut band: Vec<Vec<Option<usize>>> = (0..rows)
        .map(|i| {
            (0..cols)
                .map(|j| witness.get(i, j))
                .chain(region[i].iter().copied())
                .collect()
        })
        .collect();

    // fill the n-t gaps per row with placeholder labels, then hand the
    // placeholders out to classes still below lambda
    let gaps: CellSet = (0..rows)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| band[i][j].is_none())
        .collect();
    let gap_count = n - t;
    let inst = GapInstance::new(rows, n, gaps, gap_count)
        .expect("band lines have at most n - t gaps each");
    let fill = gap_fill(&inst, k);
    let mut class_of_z = Vec::with_capacity(gap_count);
    for cls in 0..k {
        for _ in 0..lambda.part(cls) - witness.mu().part(cls) {
            class_of_z.push(cls);
        }
    }
    debug_assert_eq!(class_of_z.len(), gap_count);
    for ((i, j), z) in fill {
        band[i][j] = Some(class_of_z[z - k]);
    }
    let band: Vec<Vec<usize>> = band
        .into_iter()
        .map(|row| row.into_iter().map(|c| c.expect("band is full")).collect())
        .collect();

    let square = complete_freq_band(&band, lambda)?;
    debug_assert!(square.as_rectangle().extends(&FrequencyRectangle {
        rows: r.rows(),
        cols: r.cols(),
        mu: lambda.clone(),
        grid: (0..r.rows() * r.cols())
            .map(|idx| r.get(idx / r.cols(), idx % r.cols()))
            .collect(),
    }));
    Ok(Some(square))
}

/// Parses the frequency text format: `r s k`, the `k` instance bounds
/// `mu`, the `k` target multiplicities `lambda`, then the grid.
pub fn parse_freq(text: &str) -> Result<(FrequencyRectangle, Partition), ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty());
    let (lineno, header) = lines.next().ok_or(ParseError::MissingHeader)?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 3 {
        return Err(ParseError::FieldCount {
            line: lineno,
            expected: 3,
            found: fields.len(),
        });
    }
    let parse_num = |lineno: usize, tok: &str| -> Result<usize, ParseError> {
        tok.parse::<usize>().map_err(|_| ParseError::Syntax {
            line: lineno,
            token: tok.to_string(),
        })
    };
    let rows = parse_num(lineno, fields[0])?;
    let cols = parse_num(lineno, fields[1])?;
    let k = parse_num(lineno, fields[2])?;
    let mut read_parts = |expected: usize| -> Result<Vec<usize>, ParseError> {
        let (lineno, line) = lines.next().ok_or(ParseError::MissingRows {
            expected: rows + 2,
            found: 0,
        })?;
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != expected {
            return Err(ParseError::FieldCount {
                line: lineno,
                expected,
                found: toks.len(),
            });
        }
        toks.iter().map(|t| parse_num(lineno, t)).collect()
    };
    let mu = Partition::new(read_parts(k)?).map_err(|e| ParseError::Instance(e.to_string()))?;
    let lambda = Partition::new(read_parts(k)?).map_err(|e| ParseError::Instance(e.to_string()))?;
    let grid = parse_grid_lines(&mut lines, rows, cols)?;
    let rect = FrequencyRectangle::new(rows, cols, mu, grid)
        .map_err(|e| ParseError::Instance(e.to_string()))?;
    Ok((rect, lambda))
}

/// Canonical text form of a frequency instance plus its target.
pub fn serialize_freq(r: &FrequencyRectangle, lambda: &Partition) -> String {
    let mut out = format!("{} {} {}\n", r.rows(), r.cols(), r.classes());
    let join = |p: &Partition| {
        p.parts()
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    out.push_str(&join(r.mu()));
    out.push('\n');
    out.push_str(&join(lambda));
    out.push('\n');
    for row in r.to_grid() {
        out.push_str(&grid_line(&row));
        out.push('\n');
    }
    out
}
