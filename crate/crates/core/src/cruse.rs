//! Completion of partial latin rectangles to latin squares of a
//! prescribed order.
//!
//! An `(r, s, t)` rectangle completes to order `n` exactly when it
//! extends, on the same `t` symbols, to a witness satisfying the four
//! counting conditions A1-A4. The constructive direction appends
//! `n - s` columns, places each row's absent original symbols there,
//! shuffles them into column-latin position, fills the remaining gaps
//! with the `n - t` new symbols, and finishes the resulting `r x n`
//! latin rectangle row by row through distinct-representative systems.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::cells::CellSet;
use crate::engines::sdr::{sdr, SetFamily};
use crate::frequency::entry_bound;
use crate::gapfill::{gap_fill, GapInstance};
use crate::rect::{LatinSquare, PartialLatinRectangle};
use crate::report::ConditionReport;
use crate::shuffle::{shuffle, ShuffleInstance};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CruseError {
    #[error("type ({rows}, {cols}, {symbols}) does not fit in order {n}")]
    ShapeTooLarge {
        rows: usize,
        cols: usize,
        symbols: usize,
        n: usize,
    },
    #[error("rectangle fails condition {condition} for order {n}")]
    NotAWitness { condition: String, n: usize },
    #[error("expected a full r x n rectangle over n symbols")]
    NotLatinRectangle,
    #[error("expected a partial latin square (rows = cols = symbols)")]
    NotSquare,
}

fn ensure_fits(p: &PartialLatinRectangle, n: usize) -> Result<(), CruseError> {
    if p.rows() > n || p.cols() > n || p.symbols() > n {
        return Err(CruseError::ShapeTooLarge {
            rows: p.rows(),
            cols: p.cols(),
            symbols: p.symbols(),
            n,
        });
    }
    Ok(())
}

/// Evaluates the four completion conditions for order `n`: every row at
/// least `s+t-n` entries (A1), every column at least `r+t-n` (A2),
/// every symbol at least `r+s-n` occurrences (A3), and at most
/// `(rst + (n-r)(n-s)(n-t))/n` entries in total (A4).
pub fn check_conditions(p: &PartialLatinRectangle, n: usize) -> ConditionReport {
    assert!(ensure_fits(p, n).is_ok(), "shape must fit the target order");
    let (r, s, t) = p.shape();
    let mut report = ConditionReport::new();

    let row_bound = s as i64 + t as i64 - n as i64;
    let (m, arg) = (0..r)
        .map(|i| (p.row_entry_count(i) as i64 - row_bound, i))
        .min()
        .expect("at least one row");
    report.push("A1", m, Some(format!("row {}", arg + 1)));

    let col_bound = r as i64 + t as i64 - n as i64;
    let (m, arg) = (0..s)
        .map(|j| (p.col_entry_count(j) as i64 - col_bound, j))
        .min()
        .expect("at least one column");
    report.push("A2", m, Some(format!("column {}", arg + 1)));

    let sym_bound = r as i64 + s as i64 - n as i64;
    let (m, arg) = (0..t)
        .map(|x| (p.occurrences(x) as i64 - sym_bound, x))
        .min()
        .expect("at least one symbol");
    report.push("A3", m, Some(format!("symbol {}", arg + 1)));

    let bound = entry_bound(r, s, t, n);
    report.push("A4", bound - p.entry_count() as i64, None);
    report
}

struct WitnessSearch {
    rows: usize,
    cols: usize,
    syms: usize,
    grid: Vec<Option<usize>>,
    row_mask: Vec<u64>,
    col_mask: Vec<u64>,
    row_need: Vec<i64>,
    col_need: Vec<i64>,
    sym_need: Vec<i64>,
    total_row_need: i64,
    total_col_need: i64,
    total_sym_need: i64,
    row_free: Vec<i64>,
    col_free: Vec<i64>,
    entries: i64,
    max_entries: i64,
    empties: Vec<(usize, usize)>,
}

impl WitnessSearch {
    fn new(p: &PartialLatinRectangle, n: usize) -> Self {
        let (rows, cols, syms) = p.shape();
        let row_bound = cols as i64 + syms as i64 - n as i64;
        let col_bound = rows as i64 + syms as i64 - n as i64;
        let sym_bound = rows as i64 + cols as i64 - n as i64;
        let row_need: Vec<i64> = (0..rows)
            .map(|i| row_bound - p.row_entry_count(i) as i64)
            .collect();
        let col_need: Vec<i64> = (0..cols)
            .map(|j| col_bound - p.col_entry_count(j) as i64)
            .collect();
        let sym_need: Vec<i64> = (0..syms)
            .map(|x| sym_bound - p.occurrences(x) as i64)
            .collect();
        let mut row_mask = vec![0u64; rows];
        let mut col_mask = vec![0u64; cols];
        for e in p.entries() {
            row_mask[e.row] |= 1 << e.symbol;
            col_mask[e.col] |= 1 << e.symbol;
        }
        WitnessSearch {
            rows,
            cols,
            syms,
            grid: (0..rows * cols)
                .map(|idx| p.get(idx / cols, idx % cols))
                .collect(),
            row_mask,
            col_mask,
            total_row_need: row_need.iter().filter(|&&d| d > 0).sum(),
            total_col_need: col_need.iter().filter(|&&d| d > 0).sum(),
            total_sym_need: sym_need.iter().filter(|&&d| d > 0).sum(),
            row_need,
            col_need,
            sym_need,
            row_free: (0..rows)
                .map(|i| (cols - p.row_entry_count(i)) as i64)
                .collect(),
            col_free: (0..cols)
                .map(|j| (rows - p.col_entry_count(j)) as i64)
                .collect(),
            entries: p.entry_count() as i64,
            max_entries: entry_bound(rows, cols, syms, n),
            empties: (0..rows)
                .flat_map(|i| (0..cols).map(move |j| (i, j)))
                .filter(|&(i, j)| p.get(i, j).is_none())
                .collect(),
        }
    }

    fn place(&mut self, r: usize, c: usize, sym: usize) {
        self.grid[r * self.cols + c] = Some(sym);
        self.row_mask[r] |= 1 << sym;
        self.col_mask[c] |= 1 << sym;
        self.entries += 1;
        if self.row_need[r] > 0 {
            self.total_row_need -= 1;
        }
        self.row_need[r] -= 1;
        if self.col_need[c] > 0 {
            self.total_col_need -= 1;
        }
        self.col_need[c] -= 1;
        if self.sym_need[sym] > 0 {
            self.total_sym_need -= 1;
        }
        self.sym_need[sym] -= 1;
    }

    fn unplace(&mut self, r: usize, c: usize, sym: usize) {
        self.grid[r * self.cols + c] = None;
        self.row_mask[r] &= !(1 << sym);
        self.col_mask[c] &= !(1 << sym);
        self.entries -= 1;
        self.row_need[r] += 1;
        if self.row_need[r] > 0 {
            self.total_row_need += 1;
        }
        self.col_need[c] += 1;
        if self.col_need[c] > 0 {
            self.total_col_need += 1;
        }
        self.sym_need[sym] += 1;
        if self.sym_need[sym] > 0 {
            self.total_sym_need += 1;
        }
    }

    fn satisfied(&self) -> bool {
        self.total_row_need == 0 && self.total_col_need == 0 && self.total_sym_need == 0
    }

    fn prune(&self) -> bool {
        let worst = self
            .total_row_need
            .max(self.total_col_need)
            .max(self.total_sym_need);
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
        if self.entries < self.max_entries {
            for sym in 0..self.syms {
                let bit = 1u64 << sym;
                if self.row_mask[r] & bit == 0 && self.col_mask[c] & bit == 0 {
                    self.place(r, c, sym);
                    if self.dfs(idx + 1) {
                        return true;
                    }
                    self.unplace(r, c, sym);
                }
            }
        }
        let found = self.dfs(idx + 1);
        if !found {
            self.row_free[r] += 1;
            self.col_free[c] += 1;
        }
        found
    }

    fn into_rectangle(self, syms: usize) -> PartialLatinRectangle {
        let grid = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.grid[i * self.cols + j]).collect())
            .collect();
        PartialLatinRectangle::from_rows(syms, grid).expect("search preserves validity")
    }
}

/// Searches for an extension of `r` on the same shape and symbols
/// satisfying A1-A4 for order `n`. Depth-first over empty cells in
/// row-major order, symbols ascending, pruning when the entry bound
/// would be exceeded or a line deficit outgrows its free cells.
pub fn find_witness(r: &PartialLatinRectangle, n: usize) -> Option<PartialLatinRectangle> {
    assert!(ensure_fits(r, n).is_ok(), "shape must fit the target order");
    let mut search = WitnessSearch::new(r, n);
    if search.entries > search.max_entries {
        return None;
    }
    search.dfs(0).then(|| search.into_rectangle(r.symbols()))
}

/// Extends a witness to a full `r x n` latin rectangle: each row's
/// absent original symbols go into the appended columns, get shuffled
/// column-latin with per-column quota `r+t-n`, and the leftover gaps
/// take the `n - t` new symbols.
pub fn extend_to_latin_rows(
    p: &PartialLatinRectangle,
    n: usize,
) -> Result<PartialLatinRectangle, CruseError> {
    ensure_fits(p, n)?;
    let report = check_conditions(p, n);
    if let Some(fail) = report.failures().next() {
        return Err(CruseError::NotAWitness {
            condition: fail.id.clone(),
            n,
        });
    }
    let (r, s, t) = p.shape();
    let width = n - s;
    let mut region: Vec<Vec<Option<usize>>> = Vec::with_capacity(r);
    for i in 0..r {
        let present: BTreeSet<usize> = (0..s).filter_map(|j| p.get(i, j)).collect();
        let mut row: Vec<Option<usize>> =
            (0..t).filter(|x| !present.contains(x)).map(Some).collect();
        assert!(row.len() <= width, "A1 bounds the row deficit");
        row.resize(width, None);
        region.push(row);
    }
    let quota = (r + t).saturating_sub(n);
    let shuffled = if width > 0 {
        let inst = ShuffleInstance::new(r, width, quota, region)
            .expect("A3 and A4 are the shuffle hypothesis");
        shuffle(&inst)
    } else {
        region
    };
    let mut band: Vec<Vec<Option<usize>>> = (0..r)
        .map(|i| {
            (0..s)
                .map(|j| p.get(i, j))
                .chain(shuffled[i].iter().copied())
                .collect()
        })
        .collect();
    let gaps: CellSet = (0..r)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| band[i][j].is_none())
        .collect();
    let inst = GapInstance::new(r, n, gaps, n - t)
        .expect("A2 and the quota keep every line within n - t gaps");
    for ((i, j), sym) in gap_fill(&inst, t) {
        band[i][j] = Some(sym);
    }
    let out = PartialLatinRectangle::from_rows(n, band).expect("filled band is latin");
    debug_assert!(out.is_full());
    Ok(out)
}

/// Completes a full `r x n` latin rectangle to an order-`n` square, one
/// row at a time: each appended row is a system of distinct
/// representatives over the columns' missing-symbol sets.
pub fn complete_rectangle(rect: &PartialLatinRectangle) -> Result<LatinSquare, CruseError> {
    let (r, s, t) = rect.shape();
    if s != t || !rect.is_full() || r > s {
        return Err(CruseError::NotLatinRectangle);
    }
    let n = s;
    let mut grid = rect.to_grid();
    for _ in r..n {
        let missing: Vec<Vec<usize>> = (0..n)
            .map(|j| {
                let used: BTreeSet<usize> = grid.iter().filter_map(|row| row[j]).collect();
                (0..n).filter(|x| !used.contains(x)).collect()
            })
            .collect();
        let family = SetFamily::new(n, missing).expect("missing symbols lie in range");
        let reps = sdr(&family).expect("latin rectangle columns satisfy Hall's condition");
        grid.push(reps.into_iter().map(Some).collect());
    }
    let flat: Vec<usize> = grid.into_iter().flatten().map(|c| c.unwrap()).collect();
    Ok(LatinSquare::new(n, flat).expect("row-by-row completion is latin"))
}

/// Completes `r` to a latin square of order `n` with `r` in the
/// upper-left corner, or returns `None` when no completion exists.
pub fn complete(r: &PartialLatinRectangle, n: usize) -> Option<LatinSquare> {
    let witness = find_witness(r, n)?;
    let band = extend_to_latin_rows(&witness, n).expect("witness satisfies A1-A4");
    let square = complete_rectangle(&band).expect("band is a full latin rectangle");
    debug_assert!(square.as_rect().extends(r));
    Some(square)
}

/// The orders `m..=n_max` into which the partial latin square `p`
/// embeds.
pub fn embeddable_orders(
    p: &PartialLatinRectangle,
    n_max: usize,
) -> Result<BTreeSet<usize>, CruseError> {
    let (r, s, t) = p.shape();
    if r != s || s != t {
        return Err(CruseError::NotSquare);
    }
    Ok((r..=n_max).filter(|&n| complete(p, n).is_some()).collect())
}

/// Witness form of the order `n -> n + k` corollary: an extension of
/// the order-`n` partial square in which every row, column, and symbol
/// is represented at least `n - k` times and at least `k(n-k)` cells
/// stay empty. Equivalent to `find_witness(p, n + k)`.
pub fn embeds_at_7heck(
    p: &PartialLatinRectangle,
    k: usize,
) -> Result<Option<PartialLatinRectangle>, CruseError> {
    let (r, s, t) = p.shape();
    if r != s || s != t {
        return Err(CruseError::NotSquare);
    }
    Ok(find_witness(p, r + k))
}
