//! Row-wise rearrangement of a partially filled array so that every
//! column reaches a prescribed fill level while staying column-latin.
//!
//! Given an `a x b` array with at least `b*c` filled cells in which no
//! symbol occurs more than `b` times and every row holds distinct
//! symbols, the entries of each row can be permuted among the row's
//! cells so that each column has at least `c` entries and no symbol
//! twice. The construction runs in four steps: pad rows to full width
//! with fresh placeholders, peel off one duplicate-free column at a
//! time (forcing in every symbol whose remaining count equals the
//! remaining width), drop the placeholders, and balance column sizes by
//! transferring entries between column pairs.

use thiserror::Error;

use crate::engines::sdr::{sdr_with_necessary, SdrError, SetFamily};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShuffleError {
    #[error("row {row} has {len} cells, expected {cols}")]
    RaggedGrid { row: usize, len: usize, cols: usize },
    #[error("{filled} filled cells, but quota {quota} columns x {min} requires {required}")]
    NotEnoughFilled {
        filled: usize,
        quota: usize,
        min: usize,
        required: usize,
    },
    #[error("symbol {symbol} occurs {count} times, more than the {max} allowed")]
    SymbolTooFrequent {
        symbol: usize,
        count: usize,
        max: usize,
    },
    #[error("symbol {symbol} occurs twice in row {row}")]
    DuplicateInRow { row: usize, symbol: usize },
    #[error("symbol {symbol} occurs twice in column {col}")]
    ColumnNotLatin { col: usize, symbol: usize },
    #[error("column extraction failed; instance violates the counting hypothesis")]
    ExtractionFailed(#[from] SdrError),
}

/// A validated instance: `rows x cols` cells, at least `cols * min_per_col`
/// of them filled, no symbol more than `cols` times, rows duplicate-free.
#[derive(Debug, Clone)]
pub struct ShuffleInstance {
    rows: usize,
    cols: usize,
    min_per_col: usize,
    grid: Vec<Vec<Option<usize>>>,
}

impl ShuffleInstance {
    pub fn new(
        rows: usize,
        cols: usize,
        min_per_col: usize,
        grid: Vec<Vec<Option<usize>>>,
    ) -> Result<Self, ShuffleError> {
        assert_eq!(grid.len(), rows, "grid must have `rows` rows");
        for (r, row) in grid.iter().enumerate() {
            if row.len() != cols {
                return Err(ShuffleError::RaggedGrid {
                    row: r,
                    len: row.len(),
                    cols,
                });
            }
        }
        let filled = grid.iter().flatten().filter(|c| c.is_some()).count();
        if filled < cols * min_per_col {
            return Err(ShuffleError::NotEnoughFilled {
                filled,
                quota: cols,
                min: min_per_col,
                required: cols * min_per_col,
            });
        }
        let mut counts = std::collections::BTreeMap::new();
        for (r, row) in grid.iter().enumerate() {
            let mut seen = std::collections::BTreeSet::new();
            for &cell in row {
                if let Some(sym) = cell {
                    if !seen.insert(sym) {
                        return Err(ShuffleError::DuplicateInRow { row: r, symbol: sym });
                    }
                    *counts.entry(sym).or_insert(0usize) += 1;
                }
            }
        }
        if let Some((&symbol, &count)) = counts.iter().find(|&(_, &c)| c > cols) {
            return Err(ShuffleError::SymbolTooFrequent {
                symbol,
                count,
                max: cols,
            });
        }
        Ok(ShuffleInstance {
            rows,
            cols,
            min_per_col,
            grid,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn min_per_col(&self) -> usize {
        self.min_per_col
    }

    pub fn grid(&self) -> &[Vec<Option<usize>>] {
        &self.grid
    }

    // Rows over i64 symbols with placeholders from the negative range,
    // one placeholder per originally empty cell.
    fn padded_rows(&self) -> Vec<Vec<i64>> {
        let mut next_placeholder = -1i64;
        self.grid
            .iter()
            .map(|row| {
                row.iter()
                    .map(|cell| match cell {
                        Some(sym) => *sym as i64,
                        None => {
                            let p = next_placeholder;
                            next_placeholder -= 1;
                            p
                        }
                    })
                    .collect()
            })
            .collect()
    }
}

// One column from full rows: a system of distinct representatives that
// contains every symbol whose count equals the current width.
fn extract_one(rows: &[Vec<i64>]) -> Result<Vec<i64>, SdrError> {
    let width = rows.first().map_or(0, |r| r.len());
    let mut symbols: Vec<i64> = rows.iter().flatten().copied().collect();
    symbols.sort_unstable();
    symbols.dedup();
    let index_of = |s: i64| symbols.binary_search(&s).unwrap();
    let mut counts = vec![0usize; symbols.len()];
    for row in rows {
        for &s in row {
            counts[index_of(s)] += 1;
        }
    }
    let necessary: Vec<usize> = (0..symbols.len()).filter(|&i| counts[i] == width).collect();
    let family = SetFamily::new(
        symbols.len(),
        rows.iter()
            .map(|row| row.iter().map(|&s| index_of(s)).collect())
            .collect(),
    )?;
    let reps = sdr_with_necessary(&family, &necessary)?;
    Ok(reps.into_iter().map(|i| symbols[i]).collect())
}

/// The first extracted column of the padded instance: one chosen cell
/// per row, pairwise-distinct symbols, every necessary symbol included.
/// `None` marks rows whose chosen cell is a placeholder.
pub fn extract_column(inst: &ShuffleInstance) -> Result<Vec<Option<usize>>, ShuffleError> {
    if inst.cols == 0 {
        return Ok(Vec::new());
    }
    let rows = inst.padded_rows();
    let col = extract_one(&rows)?;
    Ok(col
        .into_iter()
        .map(|s| (s >= 0).then_some(s as usize))
        .collect())
}

fn column_count(col: &[Option<usize>]) -> usize {
    col.iter().filter(|c| c.is_some()).count()
}

// Balances one (larger, smaller) column pair by transfers and swap
// chains until the counts differ by at most one. Rows swapped once stay
// locked for the rest of the pair. Returns the number of row swaps.
fn balance_pair(cols: &mut [Vec<Option<usize>>], hi: usize, lo: usize) -> usize {
    let a = cols[0].len();
    let mut locked = vec![false; a];
    let mut swaps = 0usize;
    let mut transfers = 0usize;
    while column_count(&cols[hi]) > column_count(&cols[lo]) + 1 {
        transfers += 1;
        assert!(transfers <= 2 * a + 2, "pair balancing failed to progress");
        let i0 = (0..a)
            .find(|&r| !locked[r] && cols[hi][r].is_some() && cols[lo][r].is_none())
            .expect("a transferable entry exists while counts differ by two");
        cols[lo][i0] = cols[hi][i0].take();
        // resolve duplicates introduced by the transfer, swapping each
        // offending row between the two columns
        let mut pc = lo;
        let mut pr = i0;
        loop {
            let ps = cols[pc][pr].expect("chain tracks a filled cell");
            let Some(j) = (0..a).find(|&r| r != pr && cols[pc][r] == Some(ps)) else {
                break;
            };
            assert!(!locked[j], "swap chain revisited a locked row");
            let tmp = cols[hi][j];
            cols[hi][j] = cols[lo][j];
            cols[lo][j] = tmp;
            locked[j] = true;
            swaps += 1;
            assert!(swaps <= a, "more swaps than rows in one pair");
            let dup_hi = cols[hi][j].is_some()
                && (0..a).any(|r| r != j && cols[hi][r] == cols[hi][j]);
            let dup_lo = cols[lo][j].is_some()
                && (0..a).any(|r| r != j && cols[lo][r] == cols[lo][j]);
            match (dup_hi, dup_lo) {
                (false, false) => break,
                (true, false) => {
                    pc = hi;
                    pr = j;
                }
                (false, true) => {
                    pc = lo;
                    pr = j;
                }
                (true, true) => unreachable!("both columns duplicated at once"),
            }
        }
    }
    swaps
}

/// Balances all columns of a column-latin grid to counts within one of
/// each other, moving entries only within their rows.
pub fn balance_columns(
    grid: &[Vec<Option<usize>>],
) -> Result<Vec<Vec<Option<usize>>>, ShuffleError> {
    let a = grid.len();
    let b = grid.first().map_or(0, |r| r.len());
    for (r, row) in grid.iter().enumerate() {
        if row.len() != b {
            return Err(ShuffleError::RaggedGrid {
                row: r,
                len: row.len(),
                cols: b,
            });
        }
    }
    // column-major working copy
    let mut cols: Vec<Vec<Option<usize>>> = (0..b)
        .map(|c| (0..a).map(|r| grid[r][c]).collect())
        .collect();
    for (c, col) in cols.iter().enumerate() {
        let mut seen = std::collections::BTreeSet::new();
        for cell in col.iter().flatten() {
            if !seen.insert(*cell) {
                return Err(ShuffleError::ColumnNotLatin {
                    col: c,
                    symbol: *cell,
                });
            }
        }
    }
    if b > 0 {
        let mut rounds = 0usize;
        loop {
            rounds += 1;
            assert!(rounds <= a * a * b + b + 1, "balancing failed to converge");
            let hi = (0..b).max_by_key(|&c| column_count(&cols[c])).unwrap();
            let lo = (0..b).min_by_key(|&c| column_count(&cols[c])).unwrap();
            if column_count(&cols[hi]) <= column_count(&cols[lo]) + 1 {
                break;
            }
            balance_pair(&mut cols, hi, lo);
        }
    }
    Ok((0..a)
        .map(|r| (0..b).map(|c| cols[c][r]).collect())
        .collect())
}

/// Rearranges each row of the instance so that every column has at
/// least `min_per_col` entries and no symbol occurs twice in a column.
/// Row contents are preserved as multisets.
pub fn shuffle(inst: &ShuffleInstance) -> Vec<Vec<Option<usize>>> {
    let (a, b) = (inst.rows, inst.cols);
    if b == 0 {
        return vec![Vec::new(); a];
    }
    let mut rows = inst.padded_rows();
    let mut columns: Vec<Vec<i64>> = Vec::with_capacity(b);
    for _ in 0..b {
        let col = extract_one(&rows).expect("the counting hypothesis holds for valid instances");
        for (r, &sym) in col.iter().enumerate() {
            let pos = rows[r]
                .iter()
                .position(|&s| s == sym)
                .expect("chosen symbol lies in its row");
            rows[r].swap_remove(pos);
        }
        columns.push(col);
    }
    let grid: Vec<Vec<Option<usize>>> = (0..a)
        .map(|r| {
            (0..b)
                .map(|c| {
                    let s = columns[c][r];
                    (s >= 0).then_some(s as usize)
                })
                .collect()
        })
        .collect();
    let balanced = balance_columns(&grid).expect("extracted columns are column-latin");
    // order columns by fill, largest first
    let mut order: Vec<usize> = (0..b).collect();
    order.sort_by_key(|&c| std::cmp::Reverse(balanced.iter().filter(|row| row[c].is_some()).count()));
    (0..a)
        .map(|r| order.iter().map(|&c| balanced[r][c]).collect())
        .collect()
}
