//! Shared helpers for the integration suites: instance enumerators,
//! seeded generators, and independent post-condition checkers.
//!
//! Each integration test binary compiles its own copy, so not every
//! helper is live in every binary.
#![allow(dead_code)]

use plr_core::frequency::Partition;
use plr_core::rect::{LatinSquare, PartialLatinRectangle};
use plr_core::shuffle::ShuffleInstance;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

/// Every valid partial latin rectangle of the given type.
pub fn all_rects(rows: usize, cols: usize, syms: usize) -> Vec<PartialLatinRectangle> {
    let cells = rows * cols;
    let base = syms + 1;
    let mut out = Vec::new();
    for code in 0..base.pow(cells as u32) {
        let mut v = code;
        let grid: Vec<Vec<Option<usize>>> = (0..rows)
            .map(|_| {
                (0..cols)
                    .map(|_| {
                        let d = v % base;
                        v /= base;
                        (d > 0).then(|| d - 1)
                    })
                    .collect()
            })
            .collect();
        if let Ok(r) = PartialLatinRectangle::from_rows(syms, grid) {
            out.push(r);
        }
    }
    out
}

/// All ordered compositions of `n` into positive parts.
pub fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 1..=n {
        for rest in compositions(n - first) {
            let mut c = vec![first];
            c.extend(rest);
            out.push(c);
        }
    }
    out
}

/// Random latin square by backtracking with shuffled symbol order.
pub fn random_square(rng: &mut ChaCha8Rng, n: usize) -> LatinSquare {
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
    assert!(rec(n, &mut grid, 0, &mut vec![0; n], &mut vec![0; n], &order));
    LatinSquare::new(n, grid).unwrap()
}

/// Random valid shuffle instance within the given dimension caps.
pub fn random_shuffle_instance(
    rng: &mut ChaCha8Rng,
    max_rows: usize,
    max_cols: usize,
) -> ShuffleInstance {
    loop {
        let a = rng.random_range(1..=max_rows);
        let b = rng.random_range(1..=max_cols);
        let universe = rng.random_range(1..=(2 * b + 2));
        let mut counts = vec![0usize; universe];
        let mut grid = Vec::with_capacity(a);
        for _ in 0..a {
            let mut row = vec![None; b];
            let mut in_row = vec![false; universe];
            for cell in row.iter_mut() {
                if rng.random_bool(0.7) {
                    let sym = rng.random_range(0..universe);
                    if !in_row[sym] && counts[sym] < b {
                        in_row[sym] = true;
                        counts[sym] += 1;
                        *cell = Some(sym);
                    }
                }
            }
            grid.push(row);
        }
        let filled: usize = counts.iter().sum();
        let c = rng.random_range(0..=(filled / b));
        if let Ok(inst) = ShuffleInstance::new(a, b, c, grid) {
            return inst;
        }
    }
}

/// Checks the three shuffle post-conditions; panics with context on any
/// violation.
pub fn check_shuffled(inst: &ShuffleInstance, out: &[Vec<Option<usize>>]) {
    assert_eq!(out.len(), inst.rows());
    for (r, row) in out.iter().enumerate() {
        assert_eq!(row.len(), inst.cols());
        let mut before: Vec<usize> = inst.grid()[r].iter().flatten().copied().collect();
        let mut after: Vec<usize> = row.iter().flatten().copied().collect();
        before.sort_unstable();
        after.sort_unstable();
        assert_eq!(before, after, "row {r} content changed");
    }
    for c in 0..inst.cols() {
        let mut seen = std::collections::BTreeSet::new();
        let mut count = 0;
        for row in out {
            if let Some(sym) = row[c] {
                assert!(seen.insert(sym), "column {c} repeats symbol {sym}");
                count += 1;
            }
        }
        assert!(
            count >= inst.min_per_col(),
            "column {c} has {count} < {}",
            inst.min_per_col()
        );
    }
}

/// Backtracking saturation oracle: true iff the `rr x ss` grid over
/// `tt` symbols, extending `p` in its corner, can reach
/// `min(rr*ss, rr*tt, ss*tt)` entries. Independent of the witness and
/// flow machinery.
pub fn brute_saturate(p: &PartialLatinRectangle, rr: usize, ss: usize, tt: usize) -> bool {
    let target = (rr * ss).min(rr * tt).min(ss * tt);
    let mut grid = vec![None; rr * ss];
    for e in p.entries() {
        grid[e.row * ss + e.col] = Some(e.symbol);
    }
    let mut row_used = vec![0u64; rr];
    let mut col_used = vec![0u64; ss];
    let mut count = 0;
    for r in 0..rr {
        for c in 0..ss {
            if let Some(s) = grid[r * ss + c] {
                row_used[r] |= 1 << s;
                col_used[c] |= 1 << s;
                count += 1;
            }
        }
    }
    fn rec(
        pos: usize,
        dims: (usize, usize, usize),
        grid: &mut [Option<usize>],
        row_used: &mut [u64],
        col_used: &mut [u64],
        count: usize,
        target: usize,
    ) -> bool {
        let (rr, ss, tt) = dims;
        if count == target {
            return true;
        }
        if pos == rr * ss || count + (rr * ss - pos) < target {
            return false;
        }
        if grid[pos].is_some() {
            return rec(pos + 1, dims, grid, row_used, col_used, count, target);
        }
        let (r, c) = (pos / ss, pos % ss);
        for s in 0..tt {
            let bit = 1u64 << s;
            if row_used[r] & bit == 0 && col_used[c] & bit == 0 {
                row_used[r] |= bit;
                col_used[c] |= bit;
                grid[pos] = Some(s);
                if rec(pos + 1, dims, grid, row_used, col_used, count + 1, target) {
                    return true;
                }
                grid[pos] = None;
                row_used[r] &= !bit;
                col_used[c] &= !bit;
            }
        }
        rec(pos + 1, dims, grid, row_used, col_used, count, target)
    }
    rec(
        0,
        (rr, ss, tt),
        &mut grid,
        &mut row_used,
        &mut col_used,
        count,
        target,
    )
}

/// All `mu` vectors with `0 <= mu_i <= lambda_i`.
pub fn all_mu_choices(lambda: &Partition) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let k = lambda.len();
    let mut mu = vec![0usize; k];
    loop {
        out.push(mu.clone());
        let mut advanced = false;
        for i in (0..k).rev() {
            mu[i] += 1;
            if mu[i] <= lambda.part(i) {
                advanced = true;
                break;
            }
            mu[i] = 0;
        }
        if !advanced {
            break;
        }
    }
    out
}
