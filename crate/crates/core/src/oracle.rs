//! Independent brute-force ground truth: plain backtracking deciders
//! and enumerators used to certify the constructive pipelines. These
//! share no search machinery with the main algorithms and walk cells in
//! column-major order, the opposite of the witness searches.

use crate::frequency::{FrequencyRectangle, FrequencySquare, Partition};
use crate::gapfill::{gap_fill, GapInstance};
use crate::rect::{LatinSquare, PartialLatinRectangle};

/// True iff some latin square of order `n` restricts to `r` in its
/// upper-left corner. Empty cells of `r` may receive any of the `n`
/// symbols.
pub fn brute_complete(r: &PartialLatinRectangle, n: usize) -> bool {
    assert!(
        r.rows() <= n && r.cols() <= n && r.symbols() <= n,
        "rectangle must fit in the target order"
    );
    let mut state = BruteState::new(r, n);
    state.fill(0, &mut |_| false)
}

/// Number of distinct order-`n` completions; exhaustive, so keep the
/// instances tiny.
pub fn brute_complete_count(r: &PartialLatinRectangle, n: usize) -> u64 {
    assert!(r.rows() <= n && r.cols() <= n && r.symbols() <= n);
    let mut state = BruteState::new(r, n);
    let mut count = 0u64;
    state.fill(0, &mut |_| {
        count += 1;
        true
    });
    count
}

struct BruteState {
    n: usize,
    grid: Vec<Option<usize>>,
    fixed: Vec<bool>,
    row_used: Vec<u64>,
    col_used: Vec<u64>,
}

impl BruteState {
    fn new(r: &PartialLatinRectangle, n: usize) -> Self {
        let mut grid = vec![None; n * n];
        let mut fixed = vec![false; n * n];
        let mut row_used = vec![0u64; n];
        let mut col_used = vec![0u64; n];
        for e in r.entries() {
            grid[e.row * n + e.col] = Some(e.symbol);
            fixed[e.row * n + e.col] = true;
            row_used[e.row] |= 1 << e.symbol;
            col_used[e.col] |= 1 << e.symbol;
        }
        BruteState {
            n,
            grid,
            fixed,
            row_used,
            col_used,
        }
    }

    // Walks cells top-to-bottom within each column, columns left to
    // right. `on_solution` runs per completion; returning false stops
    // the search, and `fill` reports whether it was stopped.
    fn fill(&mut self, pos: usize, on_solution: &mut impl FnMut(&[Option<usize>]) -> bool) -> bool {
        if pos == self.n * self.n {
            return !on_solution(&self.grid);
        }
        let (col, row) = (pos / self.n, pos % self.n);
        let idx = row * self.n + col;
        if self.fixed[idx] {
            return self.fill(pos + 1, on_solution);
        }
        for sym in 0..self.n {
            let bit = 1u64 << sym;
            if self.row_used[row] & bit == 0 && self.col_used[col] & bit == 0 {
                self.row_used[row] |= bit;
                self.col_used[col] |= bit;
                self.grid[idx] = Some(sym);
                let stopped = self.fill(pos + 1, on_solution);
                self.grid[idx] = None;
                self.row_used[row] &= !bit;
                self.col_used[col] &= !bit;
                if stopped {
                    return true;
                }
            }
        }
        false
    }
}

/// True iff `r` extends to an `n x n` frequency square in which class
/// `i` occurs exactly `lambda[i]` times in every row and column.
pub fn brute_freq_complete(r: &FrequencyRectangle, lambda: &Partition, n: usize) -> bool {
    assert_eq!(lambda.total(), n, "lambda must partition n");
    assert!(r.rows() <= n && r.cols() <= n);
    assert_eq!(r.classes(), lambda.len());
    let k = lambda.len();
    let mut grid: Vec<Option<usize>> = vec![None; n * n];
    let mut fixed = vec![false; n * n];
    let mut row_cnt = vec![vec![0usize; k]; n];
    let mut col_cnt = vec![vec![0usize; k]; n];
    for rr in 0..r.rows() {
        for cc in 0..r.cols() {
            if let Some(cls) = r.get(rr, cc) {
                grid[rr * n + cc] = Some(cls);
                fixed[rr * n + cc] = true;
                row_cnt[rr][cls] += 1;
                col_cnt[cc][cls] += 1;
            }
        }
    }
    if (0..n).any(|i| {
        (0..k).any(|cls| row_cnt[i][cls] > lambda.part(cls) || col_cnt[i][cls] > lambda.part(cls))
    }) {
        return false;
    }
    fn rec(
        pos: usize,
        n: usize,
        lambda: &[usize],
        grid: &mut [Option<usize>],
        fixed: &[bool],
        row_cnt: &mut [Vec<usize>],
        col_cnt: &mut [Vec<usize>],
    ) -> bool {
        if pos == n * n {
            return true;
        }
        let (col, row) = (pos / n, pos % n);
        let idx = row * n + col;
        if fixed[idx] {
            return rec(pos + 1, n, lambda, grid, fixed, row_cnt, col_cnt);
        }
        for cls in 0..lambda.len() {
            if row_cnt[row][cls] < lambda[cls] && col_cnt[col][cls] < lambda[cls] {
                row_cnt[row][cls] += 1;
                col_cnt[col][cls] += 1;
                grid[idx] = Some(cls);
                if rec(pos + 1, n, lambda, grid, fixed, row_cnt, col_cnt) {
                    return true;
                }
                grid[idx] = None;
                row_cnt[row][cls] -= 1;
                col_cnt[col][cls] -= 1;
            }
        }
        false
    }
    rec(
        0,
        n,
        lambda.parts(),
        &mut grid,
        &fixed,
        &mut row_cnt,
        &mut col_cnt,
    )
}

/// Lazily yields all latin squares of order `n` in lexicographic
/// (row-major) order; with `reduced`, the first row and column are
/// pinned to `0..n`.
pub fn enumerate_latin_squares(n: usize, reduced: bool) -> LatinSquares {
    let mut fixed_grid = vec![None; n * n];
    if reduced {
        for i in 0..n {
            fixed_grid[i] = Some(i);
            fixed_grid[i * n] = Some(i);
        }
    }
    let free: Vec<usize> = (0..n * n).filter(|i| fixed_grid[*i].is_none()).collect();
    let mut row_used = vec![0u64; n];
    let mut col_used = vec![0u64; n];
    for (idx, cell) in fixed_grid.iter().enumerate() {
        if let Some(sym) = cell {
            row_used[idx / n] |= 1 << sym;
            col_used[idx % n] |= 1 << sym;
        }
    }
    LatinSquares {
        n,
        grid: fixed_grid,
        free,
        row_used,
        col_used,
        depth: 0,
        next_symbol: vec![0; n * n + 1],
        exhausted: n == 0,
        fixed_only_pending: true,
    }
}

/// Backtracking enumeration state; see [`enumerate_latin_squares`].
pub struct LatinSquares {
    n: usize,
    grid: Vec<Option<usize>>,
    free: Vec<usize>,
    row_used: Vec<u64>,
    col_used: Vec<u64>,
    depth: usize,
    next_symbol: Vec<usize>,
    exhausted: bool,
    fixed_only_pending: bool,
}

impl LatinSquares {
    fn unplace(&mut self, depth: usize) {
        let idx = self.free[depth];
        let sym = self.grid[idx].take().expect("cell was placed");
        self.row_used[idx / self.n] &= !(1 << sym);
        self.col_used[idx % self.n] &= !(1 << sym);
        self.next_symbol[depth] = sym + 1;
    }
}

impl Iterator for LatinSquares {
    type Item = LatinSquare;

    fn next(&mut self) -> Option<LatinSquare> {
        if self.exhausted {
            return None;
        }
        if self.free.is_empty() {
            // the fixed cells already form the unique square
            self.exhausted = true;
            if !self.fixed_only_pending {
                return None;
            }
            let grid: Vec<usize> = self.grid.iter().map(|c| c.unwrap()).collect();
            return LatinSquare::new(self.n, grid).ok();
        }
        // resume by undoing the most recent placement
        if self.depth == self.free.len() {
            self.depth -= 1;
            self.unplace(self.depth);
        }
        loop {
            let idx = self.free[self.depth];
            let (row, col) = (idx / self.n, idx % self.n);
            let mut placed = false;
            for sym in self.next_symbol[self.depth]..self.n {
                let bit = 1u64 << sym;
                if self.row_used[row] & bit == 0 && self.col_used[col] & bit == 0 {
                    self.row_used[row] |= bit;
                    self.col_used[col] |= bit;
                    self.grid[idx] = Some(sym);
                    self.depth += 1;
                    self.next_symbol[self.depth] = 0;
                    placed = true;
                    break;
                }
            }
            if placed {
                if self.depth == self.free.len() {
                    let grid: Vec<usize> = self.grid.iter().map(|c| c.unwrap()).collect();
                    return Some(
                        LatinSquare::new(self.n, grid).expect("enumerated square is valid"),
                    );
                }
                continue;
            }
            // exhausted this cell: backtrack
            self.next_symbol[self.depth] = 0;
            if self.depth == 0 {
                self.exhausted = true;
                return None;
            }
            self.depth -= 1;
            self.unplace(self.depth);
        }
    }
}

/// Splits every class of a frequency square into per-copy symbols,
/// producing a latin square that collapses back to the input. Class `i`
/// with multiplicity `m` occupies the split symbols
/// `prefix(i)..prefix(i) + m`.
pub fn laminate(f: &FrequencySquare) -> LatinSquare {
    let n = f.order();
    let lambda = f.lambda();
    let mut grid = vec![0usize; n * n];
    let mut offset = 0;
    for cls in 0..lambda.len() {
        let cells: crate::cells::CellSet = (0..n)
            .flat_map(|r| (0..n).map(move |c| (r, c)))
            .filter(|&(r, c)| f.get(r, c) == cls)
            .collect();
        let inst = GapInstance::new(n, n, cells, lambda.part(cls))
            .expect("class cells occur lambda_i times per line");
        for ((r, c), sym) in gap_fill(&inst, offset) {
            grid[r * n + c] = sym;
        }
        offset += lambda.part(cls);
    }
    LatinSquare::new(n, grid).expect("split labels form a latin square")
}

/// Merges split symbols back into their classes; inverse of
/// [`laminate`].
pub fn collapse(sq: &LatinSquare, lambda: &Partition) -> FrequencySquare {
    let n = sq.order();
    assert_eq!(lambda.total(), n);
    let class_of: Vec<usize> = lambda
        .parts()
        .iter()
        .enumerate()
        .flat_map(|(i, &m)| std::iter::repeat_n(i, m))
        .collect();
    let grid: Vec<Vec<usize>> = (0..n)
        .map(|r| (0..n).map(|c| class_of[sq.get(r, c)]).collect())
        .collect();
    FrequencySquare::new(lambda.clone(), grid).expect("collapsing a laminate yields an F-square")
}

/// Uniform-ish random latin square by backtracking with shuffled symbol
/// order; test support.
#[cfg(test)]
pub(crate) fn random_square(rng: &mut rand_chacha::ChaCha8Rng, n: usize) -> LatinSquare {
    use rand::prelude::*;
    fn rec(
        n: usize,
        grid: &mut Vec<usize>,
        pos: usize,
        row_used: &mut [u64],
        col_used: &mut [u64],
        order: &[Vec<usize>],
    ) -> bool {
        if pos == n * n {
            return true;
        }
        let (r, c) = (pos / n, pos % n);
        for &sym in &order[pos] {
            let bit = 1u64 << sym;
            if row_used[r] & bit == 0 && col_used[c] & bit == 0 {
                row_used[r] |= bit;
                col_used[c] |= bit;
                grid.push(sym);
                if rec(n, grid, pos + 1, row_used, col_used, order) {
                    return true;
                }
                grid.pop();
                row_used[r] &= !bit;
                col_used[c] &= !bit;
            }
        }
        false
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let order: Vec<Vec<usize>> = (0..n * n)
        .map(|_| {
            perm.shuffle(rng);
            perm.clone()
        })
        .collect();
    let mut grid = Vec::with_capacity(n * n);
    let ok = rec(n, &mut grid, 0, &mut vec![0; n], &mut vec![0; n], &order);
    assert!(ok, "every order completes");
    LatinSquare::new(n, grid).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn empty_1x1_completes_to_order_1() {
        let r = PartialLatinRectangle::empty(1, 1, 1).unwrap();
        assert!(brute_complete(&r, 1));
        assert_eq!(brute_complete_count(&r, 1), 1);
    }

    #[test]
    fn example_square_completes_at_8_not_7() {
        let a = samples::embeds_at_8();
        assert!(!brute_complete(&a, 7));
        assert!(brute_complete(&a, 8));
    }

    #[test]
    fn adding_entries_never_helps() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..150 {
            let rows = rng.random_range(1..=3);
            let cols = rng.random_range(1..=3);
            let syms = rng.random_range(1..=3);
            let n = rng.random_range(rows.max(cols).max(syms)..=4);
            let mut rect = PartialLatinRectangle::empty(rows, cols, syms).unwrap();
            for _ in 0..(rows * cols) {
                let r = rng.random_range(0..rows);
                let c = rng.random_range(0..cols);
                let s = rng.random_range(0..syms);
                if rect.get(r, c).is_none() {
                    if let Ok(next) = rect.with_entry(r, c, s) {
                        if brute_complete(&next, n) {
                            assert!(brute_complete(&rect, n));
                        }
                        rect = next;
                    }
                }
            }
        }
    }

    #[test]
    fn paper_frequency_examples_complete() {
        let mu = Partition::new(vec![2, 2, 0]).unwrap();
        let r = FrequencyRectangle::new(3, 4, mu, samples::freq_3_4_grid()).unwrap();
        let lambda = Partition::new(vec![2, 2, 1]).unwrap();
        assert!(brute_freq_complete(&r, &lambda, 5));

        let mu = Partition::new(vec![2, 2]).unwrap();
        let r = FrequencyRectangle::new(3, 4, mu, samples::freq_3_4_grid()).unwrap();
        let lambda = Partition::new(vec![2, 3]).unwrap();
        assert!(brute_freq_complete(&r, &lambda, 5));
    }

    #[test]
    fn forbidden_class_cannot_complete() {
        let mu = Partition::new(vec![1, 0]).unwrap();
        let r = FrequencyRectangle::new(1, 1, mu, vec![vec![Some(0)]]).unwrap();
        let lambda = Partition::new(vec![0, 1]).unwrap();
        assert!(!brute_freq_complete(&r, &lambda, 1));
    }

    #[test]
    fn enumeration_counts() {
        let reduced: Vec<u64> = (1..=4)
            .map(|n| enumerate_latin_squares(n, true).count() as u64)
            .collect();
        assert_eq!(reduced, vec![1, 1, 1, 4]);
        let full: Vec<u64> = (1..=4)
            .map(|n| enumerate_latin_squares(n, false).count() as u64)
            .collect();
        assert_eq!(full, vec![1, 2, 12, 576]);
        // full = reduced * n! * (n-1)!
        assert_eq!(576, 4 * 24 * 6);
    }

    #[test]
    fn enumeration_is_lexicographic_and_valid() {
        let squares: Vec<LatinSquare> = enumerate_latin_squares(3, false).collect();
        assert_eq!(squares.len(), 12);
        let keys: Vec<Vec<usize>> = squares
            .iter()
            .map(|s| {
                (0..3)
                    .flat_map(|r| (0..3).map(move |c| s.get(r, c)))
                    .collect()
            })
            .collect();
        let mut sorted = keys.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(keys.len(), sorted.len(), "no repeats");
        let mut resorted = keys.clone();
        resorted.sort();
        assert_eq!(keys, resorted, "ascending order");
        assert_eq!(squares[0], LatinSquare::cyclic(3));
    }

    #[test]
    fn laminate_collapse_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(606);
        for n in 2..=5usize {
            for _ in 0..20 {
                let mut parts = Vec::new();
                let mut left = n;
                while left > 0 {
                    let p = rng.random_range(1..=left);
                    parts.push(p);
                    left -= p;
                }
                let lambda = Partition::new(parts).unwrap();
                let sq = random_square(&mut rng, n);
                let f = collapse(&sq, &lambda);
                let lam = laminate(&f);
                assert_eq!(collapse(&lam, &lambda), f);
            }
        }
    }

    #[test]
    fn laminate_single_class() {
        let lambda = Partition::new(vec![3]).unwrap();
        let f = FrequencySquare::new(lambda, vec![vec![0; 3]; 3]).unwrap();
        let sq = laminate(&f);
        assert_eq!(sq.order(), 3);
    }

    #[test]
    fn laminate_all_unit_classes_is_a_relabeling() {
        let lambda = Partition::new(vec![1, 1, 1]).unwrap();
        let sq = LatinSquare::cyclic(3);
        let f = collapse(&sq, &lambda);
        assert_eq!(laminate(&f), sq);
    }
}
