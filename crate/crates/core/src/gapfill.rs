//! Proper filling of a prescribed cell set with `k` fresh symbols, no
//! symbol twice in any row or column.
//!
//! The (0,1) incidence matrix of a cell set with at most `k` cells per
//! line splits into `k` sub-permutation matrices; labeling part `p`
//! with symbol `offset + p` yields the fill.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::cells::CellSet;
use crate::engines::konig::{konig_decompose, Axis};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GapError {
    #[error("{axis:?} {index} holds {count} target cells, more than k = {k}")]
    TooManyCells {
        axis: Axis,
        index: usize,
        count: usize,
        k: usize,
    },
    #[error("cell ({row}, {col}) outside the {rows} x {cols} grid")]
    CellOutOfBounds {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
}

/// A validated fill target: cells within a `rows x cols` grid, at most
/// `k` per row and per column.
#[derive(Debug, Clone)]
pub struct GapInstance {
    rows: usize,
    cols: usize,
    cells: CellSet,
    k: usize,
}

impl GapInstance {
    pub fn new(rows: usize, cols: usize, cells: CellSet, k: usize) -> Result<Self, GapError> {
        for (r, c) in cells.iter() {
            if r >= rows || c >= cols {
                return Err(GapError::CellOutOfBounds {
                    row: r,
                    col: c,
                    rows,
                    cols,
                });
            }
        }
        for r in 0..rows {
            let count = cells.row_count(r);
            if count > k {
                return Err(GapError::TooManyCells {
                    axis: Axis::Row,
                    index: r,
                    count,
                    k,
                });
            }
        }
        for c in 0..cols {
            let count = cells.col_count(c);
            if count > k {
                return Err(GapError::TooManyCells {
                    axis: Axis::Col,
                    index: c,
                    count,
                    k,
                });
            }
        }
        Ok(GapInstance {
            rows,
            cols,
            cells,
            k,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn cells(&self) -> &CellSet {
        &self.cells
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

/// Assigns to every target cell a 0-based symbol in
/// `offset..offset + k` with no symbol repeated in a row or column.
/// Always succeeds on a validated instance.
pub fn gap_fill(inst: &GapInstance, symbol_offset: usize) -> BTreeMap<(usize, usize), usize> {
    let mut matrix = vec![vec![0usize; inst.cols]; inst.rows];
    for (r, c) in inst.cells.iter() {
        matrix[r][c] = 1;
    }
    let parts = konig_decompose(&matrix, inst.k)
        .expect("instance line counts are within k by construction");
    let mut out = BTreeMap::new();
    for (p, part) in parts.iter().enumerate() {
        for &(r, c) in part {
            out.insert((r, c), symbol_offset + p);
        }
    }
    debug_assert_eq!(out.len(), inst.cells.len());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    // Direct post-condition checker.
    fn check_fill(
        inst: &GapInstance,
        offset: usize,
        fill: &BTreeMap<(usize, usize), usize>,
    ) {
        assert_eq!(fill.len(), inst.cells().len());
        for ((r, c), &sym) in fill {
            assert!(inst.cells().contains(*r, *c));
            assert!((offset..offset + inst.k()).contains(&sym));
        }
        for r in 0..inst.rows() {
            let mut seen = std::collections::BTreeSet::new();
            for c in 0..inst.cols() {
                if let Some(&sym) = fill.get(&(r, c)) {
                    assert!(seen.insert(sym), "row {r} repeats {sym}");
                }
            }
        }
        for c in 0..inst.cols() {
            let mut seen = std::collections::BTreeSet::new();
            for r in 0..inst.rows() {
                if let Some(&sym) = fill.get(&(r, c)) {
                    assert!(seen.insert(sym), "col {c} repeats {sym}");
                }
            }
        }
    }

    #[test]
    fn full_2x2_with_two_symbols_is_a_latin_square() {
        let cells: CellSet = (0..2).flat_map(|r| (0..2).map(move |c| (r, c))).collect();
        let inst = GapInstance::new(2, 2, cells, 2).unwrap();
        let fill = gap_fill(&inst, 0);
        check_fill(&inst, 0, &fill);
        // two cells per line and two symbols force a latin square
        assert_ne!(fill[&(0, 0)], fill[&(0, 1)]);
        assert_ne!(fill[&(0, 0)], fill[&(1, 0)]);
        assert_eq!(fill[&(0, 0)], fill[&(1, 1)]);
    }

    #[test]
    fn worked_6x7_band_gaps_fill_with_two_new_symbols() {
        let band = crate::samples::worked_6_7_band();
        let mut cells = CellSet::new();
        for r in 0..6 {
            for c in 0..7 {
                if band.get(r, c).is_none() {
                    cells.insert(r, c);
                }
            }
        }
        assert_eq!(cells.len(), 12);
        let inst = GapInstance::new(6, 7, cells, 2).unwrap();
        // offset 5 labels the gaps with 0-based symbols 5 and 6
        let fill = gap_fill(&inst, 5);
        check_fill(&inst, 5, &fill);
        // the filled band is a 6x7 latin rectangle over 7 symbols
        let mut grid = band.to_grid();
        for ((r, c), sym) in &fill {
            grid[*r][*c] = Some(*sym);
        }
        let full = crate::rect::PartialLatinRectangle::from_rows(7, grid).unwrap();
        assert!(full.is_full());
    }

    #[test]
    fn line_bound_violations_rejected() {
        let cells: CellSet = [(0, 0), (0, 1), (0, 2)].into_iter().collect();
        let err = GapInstance::new(2, 3, cells, 2).unwrap_err();
        assert!(matches!(
            err,
            GapError::TooManyCells {
                axis: Axis::Row,
                index: 0,
                count: 3,
                k: 2
            }
        ));
        let cells: CellSet = [(0, 5)].into_iter().collect();
        assert!(matches!(
            GapInstance::new(2, 3, cells, 2),
            Err(GapError::CellOutOfBounds { .. })
        ));
    }

    #[test]
    fn empty_cell_set_fills_trivially() {
        let inst = GapInstance::new(3, 3, CellSet::new(), 0).unwrap();
        assert!(gap_fill(&inst, 4).is_empty());
    }

    #[test]
    fn random_cell_sets_fill_within_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(808);
        for _ in 0..500 {
            let rows = rng.random_range(1..=8);
            let cols = rng.random_range(1..=8);
            let k = rng.random_range(1..=5);
            let mut cells = CellSet::new();
            for _ in 0..(rows * cols) {
                let r = rng.random_range(0..rows);
                let c = rng.random_range(0..cols);
                if cells.row_count(r) < k && cells.col_count(c) < k {
                    cells.insert(r, c);
                }
            }
            let offset = rng.random_range(0..10);
            let inst = GapInstance::new(rows, cols, cells, k).unwrap();
            let fill = gap_fill(&inst, offset);
            check_fill(&inst, offset, &fill);
        }
    }
}
