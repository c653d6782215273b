//! Partial k-plexes and quasi-embeddings.
//!
//! A partial k-plex of order `m` in a latin square is a set of `m`
//! cells hitting every row, every column, and every symbol at most `k`
//! times. Deleting a partial k-plex of order `k(n-k)` from an order-`n`
//! square leaves a complement that embeds in order `n + k`, which
//! places the square in the larger one with at most `k(n-k)`
//! disagreements.

use crate::cells::CellSet;
use crate::cruse;
use crate::oracle::enumerate_latin_squares;
use crate::rect::{LatinSquare, PartialLatinRectangle};

/// One scan result: whether some partial `k`-plex of order
/// `m = k(n-k)` exists in the indexed square.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlexReport {
    pub square_index: usize,
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub found: bool,
    pub cells: Option<CellSet>,
}

/// True iff the cells hit every row, column, and symbol at most `k`
/// times.
pub fn is_partial_kplex(l: &LatinSquare, cells: &CellSet, k: usize) -> bool {
    let n = l.order();
    if !cells.fits(n, n) {
        return false;
    }
    let mut row = vec![0usize; n];
    let mut col = vec![0usize; n];
    let mut sym = vec![0usize; n];
    for (r, c) in cells.iter() {
        row[r] += 1;
        col[c] += 1;
        sym[l.get(r, c)] += 1;
        if row[r] > k || col[c] > k || sym[l.get(r, c)] > k {
            return false;
        }
    }
    true
}

/// Finds a partial k-plex of exactly `m` cells, scanning cells in
/// row-major order and preferring inclusion. Returns `None` when no
/// such set exists.
pub fn find_partial_kplex(l: &LatinSquare, k: usize, m: usize) -> Option<CellSet> {
    let n = l.order();
    if m > n * n || k == 0 && m > 0 {
        return None;
    }
    struct Search<'a> {
        l: &'a LatinSquare,
        n: usize,
        k: usize,
        m: usize,
        row: Vec<usize>,
        col: Vec<usize>,
        sym: Vec<usize>,
        chosen: Vec<(usize, usize)>,
    }
    impl Search<'_> {
        fn rec(&mut self, idx: usize) -> bool {
            if self.chosen.len() == self.m {
                return true;
            }
            let total = self.n * self.n;
            if idx == total || self.chosen.len() + (total - idx) < self.m {
                return false;
            }
            let (r, c) = (idx / self.n, idx % self.n);
            let s = self.l.get(r, c);
            if self.row[r] < self.k && self.col[c] < self.k && self.sym[s] < self.k {
                self.row[r] += 1;
                self.col[c] += 1;
                self.sym[s] += 1;
                self.chosen.push((r, c));
                if self.rec(idx + 1) {
                    return true;
                }
                self.chosen.pop();
                self.row[r] -= 1;
                self.col[c] -= 1;
                self.sym[s] -= 1;
            }
            self.rec(idx + 1)
        }
    }
    let mut search = Search {
        l,
        n,
        k,
        m,
        row: vec![0; n],
        col: vec![0; n],
        sym: vec![0; n],
        chosen: Vec::new(),
    };
    search
        .rec(0)
        .then(|| search.chosen.into_iter().collect())
}

/// Embeds `l` into a latin square of order `n + k` that agrees with `l`
/// on all but at most `k(n-k)` cells: a partial k-plex of that order is
/// deleted and the complement completed. Returns `None` exactly when
/// `l` has no partial k-plex of order `k(n-k)`.
pub fn quasi_embed(l: &LatinSquare, k: usize) -> Option<LatinSquare> {
    let n = l.order();
    assert!(k >= 1 && k <= n, "k must lie in 1..=n");
    let m = k * (n - k);
    let plex = find_partial_kplex(l, k, m)?;
    let mut grid = l.as_rect().to_grid();
    for (r, c) in plex.iter() {
        grid[r][c] = None;
    }
    let complement =
        PartialLatinRectangle::from_rows(n, grid).expect("deleting cells keeps the square latin");
    let embedded = cruse::complete(&complement, n + k)
        .expect("the complement of a k(n-k) partial k-plex always embeds");
    debug_assert!(embedded.as_rect().extends(&complement));
    Some(embedded)
}

/// Runs the `k(n-k)` existence question over every reduced latin square
/// of order `n` and every `k` in `k_set`. Row, column, and symbol
/// permutations map partial k-plexes to partial k-plexes, so reduced
/// squares decide the question for all squares.
pub fn conjecture_scan(n: usize, k_set: &[usize]) -> Vec<PlexReport> {
    let mut out = Vec::new();
    for (square_index, square) in enumerate_latin_squares(n, true).enumerate() {
        for &k in k_set {
            out.push(scan_one(&square, square_index, k));
        }
    }
    out
}

/// The scan step for one (square, k) pair.
pub fn scan_one(square: &LatinSquare, square_index: usize, k: usize) -> PlexReport {
    let n = square.order();
    let m = k * (n - k);
    let cells = find_partial_kplex(square, k, m);
    PlexReport {
        square_index,
        n,
        k,
        m,
        found: cells.is_some(),
        cells,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn empty_set_and_full_square_are_plexes() {
        let sq = LatinSquare::cyclic(4);
        assert!(is_partial_kplex(&sq, &CellSet::new(), 1));
        let all: CellSet = (0..4).flat_map(|r| (0..4).map(move |c| (r, c))).collect();
        assert!(is_partial_kplex(&sq, &all, 4));
        assert!(!is_partial_kplex(&sq, &all, 3));
    }

    #[test]
    fn transversal_is_a_one_plex() {
        // the diagonal of the cyclic order-3 square carries distinct
        // symbols
        let sq = LatinSquare::cyclic(3);
        let diag: CellSet = (0..3).map(|i| (i, i)).collect();
        assert!(is_partial_kplex(&sq, &diag, 1));
    }

    // Subset-enumeration ground truth for existence of an m-cell
    // partial k-plex.
    fn brute_exists(l: &LatinSquare, k: usize, m: usize) -> bool {
        let n = l.order();
        let cells: Vec<(usize, usize)> = (0..n)
            .flat_map(|r| (0..n).map(move |c| (r, c)))
            .collect();
        fn rec(
            l: &LatinSquare,
            cells: &[(usize, usize)],
            idx: usize,
            left: usize,
            row: &mut [usize],
            col: &mut [usize],
            sym: &mut [usize],
            k: usize,
        ) -> bool {
            if left == 0 {
                return true;
            }
            if idx == cells.len() || cells.len() - idx < left {
                return false;
            }
            let (r, c) = cells[idx];
            let s = l.get(r, c);
            if row[r] < k && col[c] < k && sym[s] < k {
                row[r] += 1;
                col[c] += 1;
                sym[s] += 1;
                if rec(l, cells, idx + 1, left - 1, row, col, sym, k) {
                    return true;
                }
                row[r] -= 1;
                col[c] -= 1;
                sym[s] -= 1;
            }
            rec(l, cells, idx + 1, left, row, col, sym, k)
        }
        rec(
            l,
            &cells,
            0,
            m,
            &mut vec![0; n],
            &mut vec![0; n],
            &mut vec![0; n],
            k,
        )
    }

    #[test]
    fn cyclic_3_has_a_transversal() {
        let sq = LatinSquare::cyclic(3);
        let cells = find_partial_kplex(&sq, 1, 3).unwrap();
        assert!(is_partial_kplex(&sq, &cells, 1));
        assert_eq!(cells.len(), 3);
        assert!(brute_exists(&sq, 1, 3));
    }

    #[test]
    fn any_cells_form_an_n_minus_1_plex() {
        for n in 2..=5 {
            let sq = LatinSquare::cyclic(n);
            let cells = find_partial_kplex(&sq, n - 1, n - 1).unwrap();
            assert!(is_partial_kplex(&sq, &cells, n - 1));
        }
    }

    #[test]
    fn agreement_with_subset_enumeration_up_to_order_4() {
        for n in 1..=4usize {
            for square in oracle::enumerate_latin_squares(n, true) {
                for k in 1..=n {
                    for m in 0..=n * n {
                        let ours = find_partial_kplex(&square, k, m);
                        let truth = brute_exists(&square, k, m);
                        assert_eq!(ours.is_some(), truth, "n={n} k={k} m={m}");
                        if let Some(cells) = ours {
                            assert_eq!(cells.len(), m);
                            assert!(is_partial_kplex(&square, &cells, k));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn found_plex_certifies_the_embedding_witness() {
        let sq = LatinSquare::cyclic(4);
        for k in 1..=3usize {
            let m = k * (4 - k);
            if let Some(plex) = find_partial_kplex(&sq, k, m) {
                let mut grid = sq.as_rect().to_grid();
                for (r, c) in plex.iter() {
                    grid[r][c] = None;
                }
                let complement = PartialLatinRectangle::from_rows(4, grid).unwrap();
                assert!(cruse::embeds_at_7heck(&complement, k).unwrap().is_some());
            }
        }
    }

    #[test]
    fn quasi_embed_bounds_hold() {
        let sq = LatinSquare::cyclic(4);
        for k in 1..=4usize {
            let embedded = quasi_embed(&sq, k).unwrap();
            assert_eq!(embedded.order(), 4 + k);
            let agree = (0..4)
                .flat_map(|r| (0..4).map(move |c| (r, c)))
                .filter(|&(r, c)| embedded.get(r, c) == sq.get(r, c))
                .count();
            assert!(agree >= 16 - k * (4 - k), "k={k}: {agree} agreements");
        }
        // k = n deletes nothing, so the embedding agrees everywhere
        let embedded = quasi_embed(&sq, 4).unwrap();
        for r in 0..4 {
            for c in 0..4 {
                assert_eq!(embedded.get(r, c), sq.get(r, c));
            }
        }
    }

    #[test]
    fn plex_existence_is_permutation_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(2718);
        for _ in 0..30 {
            let n = rng.random_range(2..=5);
            let sq = oracle::random_square(&mut rng, n);
            // apply random row/column/symbol relabelings
            let mut rows: Vec<usize> = (0..n).collect();
            let mut cols: Vec<usize> = (0..n).collect();
            let mut syms: Vec<usize> = (0..n).collect();
            rows.shuffle(&mut rng);
            cols.shuffle(&mut rng);
            syms.shuffle(&mut rng);
            let image_grid: Vec<Vec<usize>> = (0..n)
                .map(|r| (0..n).map(|c| syms[sq.get(rows[r], cols[c])]).collect())
                .collect();
            let image = LatinSquare::from_rows(image_grid).unwrap();
            for k in 1..=n {
                let m = k * (n - k);
                assert_eq!(
                    find_partial_kplex(&sq, k, m).is_some(),
                    find_partial_kplex(&image, k, m).is_some()
                );
            }
        }
    }

    #[test]
    fn scan_order_3_finds_everything() {
        let reports = conjecture_scan(3, &[1, 2, 3]);
        assert_eq!(reports.len(), 3); // one reduced square, three k values
        for rep in &reports {
            assert!(rep.found, "k = {}", rep.k);
            assert_eq!(rep.m, rep.k * (3 - rep.k));
            let cells = rep.cells.as_ref().unwrap();
            assert_eq!(cells.len(), rep.m);
        }
    }
}
