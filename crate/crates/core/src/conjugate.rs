//! Conjugation: permuting the (row, column, symbol) roles of a
//! rectangle's entry triples.

use crate::rect::PartialLatinRectangle;

/// The three roles of an entry triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    Row = 0,
    Col = 1,
    Sym = 2,
}

/// A bijection of the role set. `dest[i]` is the position that the
/// coordinate currently in position `i` moves to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RolePermutation {
    dest: [usize; 3],
}

impl RolePermutation {
    pub fn identity() -> Self {
        RolePermutation { dest: [0, 1, 2] }
    }

    /// The transposition exchanging two roles.
    pub fn transposition(a: Role, b: Role) -> Self {
        let mut dest = [0, 1, 2];
        dest.swap(a as usize, b as usize);
        RolePermutation { dest }
    }

    /// Builds a permutation from an explicit destination array; fails if
    /// it is not a bijection.
    pub fn new(dest: [usize; 3]) -> Option<Self> {
        let mut seen = [false; 3];
        for &d in &dest {
            if d > 2 || seen[d] {
                return None;
            }
            seen[d] = true;
        }
        Some(RolePermutation { dest })
    }

    pub fn inverse(&self) -> Self {
        let mut dest = [0; 3];
        for i in 0..3 {
            dest[self.dest[i]] = i;
        }
        RolePermutation { dest }
    }

    /// Applies the permutation to a (row, col, sym) triple.
    pub fn apply(&self, triple: [usize; 3]) -> [usize; 3] {
        let mut out = [0; 3];
        for i in 0..3 {
            out[self.dest[i]] = triple[i];
        }
        out
    }
}

/// The conjugate rectangle: every entry triple is permuted by `sigma`,
/// and the type `(r, s, t)` is permuted accordingly. Conjugates of
/// valid rectangles are always valid, because the latin property is
/// symmetric in the three roles.
pub fn conjugate(p: &PartialLatinRectangle, sigma: &RolePermutation) -> PartialLatinRectangle {
    let dims = sigma.apply([p.rows(), p.cols(), p.symbols()]);
    let mut grid = vec![None; dims[0] * dims[1]];
    for e in p.entries() {
        let t = sigma.apply([e.row, e.col, e.symbol]);
        grid[t[0] * dims[1] + t[1]] = Some(t[2]);
    }
    PartialLatinRectangle::new(dims[0], dims[1], dims[2], grid)
        .expect("conjugate of a valid rectangle is valid")
}
