//! Sets of (row, column) positions inside a rectangular array.

use std::collections::BTreeSet;

/// A duplicate-free set of 0-based (row, col) positions. Bounds are
/// checked by the consumers that pair a `CellSet` with a grid.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CellSet {
    cells: BTreeSet<(usize, usize)>,
}

impl CellSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, row: usize, col: usize) -> bool {
        self.cells.insert((row, col))
    }

    pub fn contains(&self, row: usize, col: usize) -> bool {
        self.cells.contains(&(row, col))
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Positions in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.cells.iter().copied()
    }

    /// Number of cells lying in the given row.
    pub fn row_count(&self, row: usize) -> usize {
        self.cells.range((row, 0)..(row + 1, 0)).count()
    }

    /// Number of cells lying in the given column.
    pub fn col_count(&self, col: usize) -> usize {
        self.cells.iter().filter(|&&(_, c)| c == col).count()
    }

    /// True iff all positions fit in a `rows x cols` grid.
    pub fn fits(&self, rows: usize, cols: usize) -> bool {
        self.cells.iter().all(|&(r, c)| r < rows && c < cols)
    }
}

impl FromIterator<(usize, usize)> for CellSet {
    fn from_iter<I: IntoIterator<Item = (usize, usize)>>(iter: I) -> Self {
        CellSet {
            cells: iter.into_iter().collect(),
        }
    }
}

impl IntoIterator for CellSet {
    type Item = (usize, usize);
    type IntoIter = std::collections::btree_set::IntoIter<(usize, usize)>;

    fn into_iter(self) -> Self::IntoIter {
        self.cells.into_iter()
    }
}
