//! Partial latin rectangles and latin squares.
//!
//! Symbols are stored 0-based internally; all text/JSON I/O and error
//! messages use the 1-based convention.

use std::fmt;

use thiserror::Error;

/// A single filled cell, as a (row, column, symbol) triple. All indices
/// are 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Entry {
    pub row: usize,
    pub col: usize,
    pub symbol: usize,
}

/// Errors raised when a grid fails the latin property or declares an
/// impossible shape. Row/column/symbol numbers in messages are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("shape ({rows}, {cols}, {symbols}) must have all components >= 1")]
    InvalidShape {
        rows: usize,
        cols: usize,
        symbols: usize,
    },
    #[error("grid has {got} rows, expected {expected}")]
    RowCountMismatch { expected: usize, got: usize },
    #[error("row {row} has {got} cells, expected {expected}")]
    RowLengthMismatch {
        row: usize,
        expected: usize,
        got: usize,
    },
    #[error("symbol {symbol} occurs twice in row {row}")]
    DuplicateInRow { row: usize, symbol: usize },
    #[error("symbol {symbol} occurs twice in column {col}")]
    DuplicateInColumn { col: usize, symbol: usize },
    #[error("symbol {symbol} out of range 1..={max}")]
    SymbolOutOfRange { symbol: usize, max: usize },
    #[error("array is not a full latin square of order {order}")]
    NotLatinSquare { order: usize },
}

/// An `r x s` array over symbols `0..t`, each cell empty or holding one
/// symbol, with no symbol repeated in a row or column. The triple
/// `(r, s, t)` is called the type of the rectangle.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PartialLatinRectangle {
    rows: usize,
    cols: usize,
    symbols: usize,
    grid: Vec<Option<usize>>,
}

impl PartialLatinRectangle {
    /// Validates and wraps a row-major grid of optional 0-based symbols.
    pub fn new(
        rows: usize,
        cols: usize,
        symbols: usize,
        grid: Vec<Option<usize>>,
    ) -> Result<Self, ValidationError> {
        if rows == 0 || cols == 0 || symbols == 0 {
            return Err(ValidationError::InvalidShape {
                rows,
                cols,
                symbols,
            });
        }
        if grid.len() != rows * cols {
            return Err(ValidationError::RowCountMismatch {
                expected: rows,
                got: grid.len() / cols.max(1),
            });
        }
        let rect = PartialLatinRectangle {
            rows,
            cols,
            symbols,
            grid,
        };
        rect.check()?;
        Ok(rect)
    }

    /// Validates a grid given as rows of optional 0-based symbols.
    pub fn from_rows(
        symbols: usize,
        rows: Vec<Vec<Option<usize>>>,
    ) -> Result<Self, ValidationError> {
        let r = rows.len();
        if r == 0 {
            return Err(ValidationError::InvalidShape {
                rows: 0,
                cols: 0,
                symbols,
            });
        }
        let s = rows[0].len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != s {
                return Err(ValidationError::RowLengthMismatch {
                    row: i + 1,
                    expected: s,
                    got: row.len(),
                });
            }
        }
        let grid = rows.into_iter().flatten().collect();
        Self::new(r, s, symbols, grid)
    }

    /// An all-empty rectangle of the given type.
    pub fn empty(rows: usize, cols: usize, symbols: usize) -> Result<Self, ValidationError> {
        Self::new(rows, cols, symbols, vec![None; rows * cols])
    }

    fn check(&self) -> Result<(), ValidationError> {
        for (idx, &cell) in self.grid.iter().enumerate() {
            if let Some(sym) = cell {
                if sym >= self.symbols {
                    return Err(ValidationError::SymbolOutOfRange {
                        symbol: sym + 1,
                        max: self.symbols,
                    });
                }
                let (r, c) = (idx / self.cols, idx % self.cols);
                for c2 in c + 1..self.cols {
                    if self.get(r, c2) == Some(sym) {
                        return Err(ValidationError::DuplicateInRow {
                            row: r + 1,
                            symbol: sym + 1,
                        });
                    }
                }
                for r2 in r + 1..self.rows {
                    if self.get(r2, c) == Some(sym) {
                        return Err(ValidationError::DuplicateInColumn {
                            col: c + 1,
                            symbol: sym + 1,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// The declared symbol count `t`; symbols range over `0..t`.
    pub fn symbols(&self) -> usize {
        self.symbols
    }

    /// The type triple `(r, s, t)`.
    pub fn shape(&self) -> (usize, usize, usize) {
        (self.rows, self.cols, self.symbols)
    }

    pub fn get(&self, row: usize, col: usize) -> Option<usize> {
        self.grid[row * self.cols + col]
    }

    /// Iterates over the filled cells in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = Entry> + '_ {
        self.grid.iter().enumerate().filter_map(move |(idx, &c)| {
            c.map(|symbol| Entry {
                row: idx / self.cols,
                col: idx % self.cols,
                symbol,
            })
        })
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

    /// Number of times `symbol` (0-based) occurs in the grid.
    pub fn occurrences(&self, symbol: usize) -> usize {
        self.grid.iter().filter(|&&c| c == Some(symbol)).count()
    }

    /// Maximum possible number of entries for this type:
    /// `min(r*s, r*t, s*t)`.
    pub fn max_entries(&self) -> usize {
        (self.rows * self.cols)
            .min(self.rows * self.symbols)
            .min(self.cols * self.symbols)
    }

    /// True iff the rectangle holds the maximum possible number of
    /// entries for its type.
    pub fn is_saturated(&self) -> bool {
        self.entry_count() == self.max_entries()
    }

    pub fn is_full(&self) -> bool {
        self.grid.iter().all(|c| c.is_some())
    }

    /// True iff every filled cell of `other` is filled identically here.
    /// Shapes must agree except that `self` may have more rows, columns,
    /// or symbols.
    pub fn extends(&self, other: &PartialLatinRectangle) -> bool {
        if self.rows < other.rows || self.cols < other.cols || self.symbols < other.symbols {
            return false;
        }
        other
            .entries()
            .all(|e| self.get(e.row, e.col) == Some(e.symbol))
    }

    /// A copy with one more entry, revalidated.
    pub fn with_entry(
        &self,
        row: usize,
        col: usize,
        symbol: usize,
    ) -> Result<Self, ValidationError> {
        let mut grid = self.grid.clone();
        grid[row * self.cols + col] = Some(symbol);
        Self::new(self.rows, self.cols, self.symbols, grid)
    }

    /// A copy of the grid as rows of optional symbols.
    pub fn to_grid(&self) -> Vec<Vec<Option<usize>>> {
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c)).collect())
            .collect()
    }

    /// Reinterprets the same grid under a larger type. Fails only if a
    /// component shrinks below the current shape.
    pub fn widen(
        &self,
        rows: usize,
        cols: usize,
        symbols: usize,
    ) -> Result<Self, ValidationError> {
        if rows < self.rows || cols < self.cols || symbols < self.symbols {
            return Err(ValidationError::InvalidShape {
                rows,
                cols,
                symbols,
            });
        }
        let mut grid = vec![None; rows * cols];
        for e in self.entries() {
            grid[e.row * cols + e.col] = Some(e.symbol);
        }
        Self::new(rows, cols, symbols, grid)
    }
}

impl fmt::Display for PartialLatinRectangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::format::serialize_rect(self))
    }
}

/// An order-`n` array in which every symbol `0..n` occurs exactly once
/// in each row and each column.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatinSquare {
    order: usize,
    grid: Vec<usize>,
}

impl LatinSquare {
    /// Validates a row-major grid of 0-based symbols.
    pub fn new(order: usize, grid: Vec<usize>) -> Result<Self, ValidationError> {
        if order == 0 {
            return Err(ValidationError::InvalidShape {
                rows: 0,
                cols: 0,
                symbols: 0,
            });
        }
        if grid.len() != order * order {
            return Err(ValidationError::NotLatinSquare { order });
        }
        let sq = LatinSquare { order, grid };
        if !sq.is_valid() {
            return Err(ValidationError::NotLatinSquare { order });
        }
        Ok(sq)
    }

    pub fn from_rows(rows: Vec<Vec<usize>>) -> Result<Self, ValidationError> {
        let order = rows.len();
        if rows.iter().any(|r| r.len() != order) {
            return Err(ValidationError::NotLatinSquare { order });
        }
        Self::new(order, rows.into_iter().flatten().collect())
    }

    /// The cyclic square `L[r][c] = (r + c) mod n`.
    pub fn cyclic(order: usize) -> Self {
        let grid = (0..order)
            .flat_map(|r| (0..order).map(move |c| (r + c) % order))
            .collect();
        LatinSquare { order, grid }
    }

    fn is_valid(&self) -> bool {
        let n = self.order;
        let mut seen = vec![false; n];
        for r in 0..n {
            seen.fill(false);
            for c in 0..n {
                let v = self.grid[r * n + c];
                if v >= n || seen[v] {
                    return false;
                }
                seen[v] = true;
            }
        }
        for c in 0..n {
            seen.fill(false);
            for r in 0..n {
                let v = self.grid[r * n + c];
                if seen[v] {
                    return false;
                }
                seen[v] = true;
            }
        }
        true
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, row: usize, col: usize) -> usize {
        self.grid[row * self.order + col]
    }

    /// Views the square as a saturated partial latin rectangle of type
    /// `(n, n, n)`.
    pub fn as_rect(&self) -> PartialLatinRectangle {
        PartialLatinRectangle {
            rows: self.order,
            cols: self.order,
            symbols: self.order,
            grid: self.grid.iter().map(|&v| Some(v)).collect(),
        }
    }

    /// Converts a full `(n, n, n)` rectangle into a latin square.
    pub fn try_from_rect(rect: &PartialLatinRectangle) -> Result<Self, ValidationError> {
        let (r, s, t) = rect.shape();
        if r != s || s != t || !rect.is_full() {
            return Err(ValidationError::NotLatinSquare { order: r });
        }
        let grid = rect.grid.iter().map(|c| c.unwrap()).collect();
        Self::new(r, grid)
    }
}

impl fmt::Display for LatinSquare {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_rect())
    }
}
