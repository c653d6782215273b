//! Extension of a partial latin rectangle to a saturated rectangle of a
//! prescribed larger type `(R, S, T)` with `R, S <= T`.
//!
//! Feasibility is decided through a witness of type `(R, s, t)` meeting
//! the row/column conditions C1-C2 together with a system of
//! representatives over the row deficit sets, bounded by C3a-C3d. The
//! representatives populate the appended columns, the shuffle step makes
//! them column-latin with quota `R+t-T`, and the remaining gaps take the
//! `T-t` new symbols. Targets whose largest component is not in symbol
//! position are handled on a conjugate and mapped back.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::cells::CellSet;
use crate::conjugate::{conjugate, Role, RolePermutation};
use crate::engines::flow::{feasible_flow, BoundedFlowNetwork};
use crate::gapfill::{gap_fill, GapInstance};
use crate::rect::PartialLatinRectangle;
use crate::report::ConditionReport;
use crate::shuffle::{shuffle, ShuffleInstance};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SatError {
    #[error("target ({rows}, {cols}, {symbols}) does not dominate the instance type")]
    TargetNotDominating {
        rows: usize,
        cols: usize,
        symbols: usize,
    },
    #[error("target ({rows}, {cols}, {symbols}) needs rows, cols <= symbols")]
    TargetUnbalanced {
        rows: usize,
        cols: usize,
        symbols: usize,
    },
    #[error("rectangle shape does not match the target: {reason}")]
    ShapeMismatch { reason: String },
    #[error("representative assignment is malformed: {reason}")]
    BadAssignment { reason: String },
    #[error("shrink target must satisfy R <= r, S <= s, T >= t on a sorted saturated input")]
    ShrinkPrecondition,
}

/// A target type `(R, S, T)` with `R <= T` and `S <= T`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SaturationTarget {
    rows: usize,
    cols: usize,
    symbols: usize,
}

impl SaturationTarget {
    pub fn new(rows: usize, cols: usize, symbols: usize) -> Result<Self, SatError> {
        if rows > symbols || cols > symbols {
            return Err(SatError::TargetUnbalanced {
                rows,
                cols,
                symbols,
            });
        }
        Ok(SaturationTarget {
            rows,
            cols,
            symbols,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn symbols(&self) -> usize {
        self.symbols
    }

    fn dominates(&self, p: &PartialLatinRectangle) -> bool {
        p.rows() <= self.rows && p.cols() <= self.cols && p.symbols() <= self.symbols
    }
}

/// The deficit sets `A_j`: the original symbols absent from each row.
pub fn row_deficit_sets(p: &PartialLatinRectangle) -> Vec<BTreeSet<usize>> {
    (0..p.rows())
        .map(|i| {
            let present: BTreeSet<usize> = (0..p.cols()).filter_map(|j| p.get(i, j)).collect();
            (0..p.symbols()).filter(|x| !present.contains(x)).collect()
        })
        .collect()
}

/// A system of representatives over the row deficit sets: row `j`
/// receives the distinct symbols `chosen[j]`, `g[j] = chosen[j].len()`,
/// and `f[i]` counts the rows represented by symbol `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FgAssignment {
    f: Vec<usize>,
    g: Vec<usize>,
    chosen: Vec<Vec<usize>>,
}

impl FgAssignment {
    pub fn new(chosen: Vec<Vec<usize>>, symbols: usize) -> Result<Self, SatError> {
        let mut f = vec![0usize; symbols];
        let mut g = Vec::with_capacity(chosen.len());
        for (j, row) in chosen.iter().enumerate() {
            let distinct: BTreeSet<usize> = row.iter().copied().collect();
            if distinct.len() != row.len() {
                return Err(SatError::BadAssignment {
                    reason: format!("row {} repeats a representative", j + 1),
                });
            }
            for &x in row {
                if x >= symbols {
                    return Err(SatError::BadAssignment {
                        reason: format!("symbol {} out of range", x + 1),
                    });
                }
                f[x] += 1;
            }
            g.push(row.len());
        }
        let mut chosen = chosen;
        for row in &mut chosen {
            row.sort_unstable();
        }
        Ok(FgAssignment { f, g, chosen })
    }

    pub fn f(&self) -> &[usize] {
        &self.f
    }

    pub fn g(&self) -> &[usize] {
        &self.g
    }

    pub fn chosen(&self) -> &[Vec<usize>] {
        &self.chosen
    }

    pub fn total(&self) -> usize {
        self.g.iter().sum()
    }
}

/// Searches for a representative system satisfying C3a-C3d against the
/// target, via a feasible flow: an aggregation arc carries the global
/// lower bound `(S-s)(R+t-T)`, row arcs carry
/// `[max(0, S-T+|A_j|), min(S-s, |A_j|)]`, unit arcs pick distinct
/// symbols inside each deficit set, and symbol arcs are capped at
/// `S-s`.
pub fn find_fg(p: &PartialLatinRectangle, target: &SaturationTarget) -> Option<FgAssignment> {
    let (rows, cols, syms) = p.shape();
    assert_eq!(rows, target.rows, "witness must already have R rows");
    assert!(cols <= target.cols && syms <= target.symbols);
    let slack = target.cols - cols; // S - s
    let sets = row_deficit_sets(p);
    let mut lowers = Vec::with_capacity(rows);
    let mut uppers = Vec::with_capacity(rows);
    for set in &sets {
        let lower = (target.cols + set.len()).saturating_sub(target.symbols);
        let upper = slack.min(set.len());
        if lower > upper {
            return None;
        }
        lowers.push(lower);
        uppers.push(upper);
    }
    let global_lower = if rows + syms > target.symbols {
        slack * (rows + syms - target.symbols)
    } else {
        0
    };
    let capacity: usize = uppers.iter().sum();
    if global_lower > capacity {
        return None;
    }
    // nodes: source, aggregator, R rows, t symbols, sink
    let source = 0;
    let agg = 1;
    let row_node = |j: usize| 2 + j;
    let sym_node = |i: usize| 2 + rows + i;
    let sink = 2 + rows + syms;
    let mut net = BoundedFlowNetwork::new(sink + 1, source, sink).expect("well-formed");
    net.add_arc(source, agg, global_lower, capacity).ok()?;
    for j in 0..rows {
        net.add_arc(agg, row_node(j), lowers[j], uppers[j]).ok()?;
    }
    let mut pick_arcs: Vec<(usize, usize, usize)> = Vec::new(); // (arc, row, symbol)
    for (j, set) in sets.iter().enumerate() {
        for &i in set {
            let arc = net.add_arc(row_node(j), sym_node(i), 0, 1).ok()?;
            pick_arcs.push((arc, j, i));
        }
    }
    for i in 0..syms {
        net.add_arc(sym_node(i), sink, 0, slack).ok()?;
    }
    let flow = feasible_flow(&net).ok()?;
    let mut chosen = vec![Vec::new(); rows];
    for &(arc, j, i) in &pick_arcs {
        if flow[arc] == 1 {
            chosen[j].push(i);
        }
    }
    Some(FgAssignment::new(chosen, syms).expect("flow yields distinct in-range picks"))
}

/// Margins for C1, C2, and C3a-C3d of the given witness and
/// representative assignment.
pub fn check_sat_conditions(
    p: &PartialLatinRectangle,
    target: &SaturationTarget,
    fg: &FgAssignment,
) -> Result<ConditionReport, SatError> {
    let (rows, cols, syms) = p.shape();
    if rows != target.rows || cols > target.cols || syms > target.symbols {
        return Err(SatError::ShapeMismatch {
            reason: format!(
                "witness type ({rows}, {cols}, {syms}) against target ({}, {}, {})",
                target.rows, target.cols, target.symbols
            ),
        });
    }
    if fg.g().len() != rows || fg.f().len() != syms {
        return Err(SatError::BadAssignment {
            reason: "assignment dimensions do not match the witness".into(),
        });
    }
    let sets = row_deficit_sets(p);
    for (j, row) in fg.chosen().iter().enumerate() {
        if !row.iter().all(|x| sets[j].contains(x)) {
            return Err(SatError::BadAssignment {
                reason: format!("row {} picks a symbol outside its deficit set", j + 1),
            });
        }
    }
    let (cap_r, cap_s, cap_t) = (target.rows as i64, target.cols as i64, target.symbols as i64);
    let (s, t) = (cols as i64, syms as i64);
    let slack = cap_s - s;
    let mut report = ConditionReport::new();

    let (m, arg) = (0..rows)
        .map(|i| (p.row_entry_count(i) as i64 - (s + t - cap_t), i))
        .min()
        .expect("at least one row");
    report.push("C1", m, Some(format!("row {}", arg + 1)));

    let (m, arg) = (0..cols)
        .map(|j| (p.col_entry_count(j) as i64 - (cap_r + t - cap_t), j))
        .min()
        .expect("at least one column");
    report.push("C2", m, Some(format!("column {}", arg + 1)));

    let (m, arg) = (0..syms)
        .map(|i| (slack - fg.f()[i] as i64, i))
        .min()
        .expect("at least one symbol");
    report.push("C3a", m, Some(format!("symbol {}", arg + 1)));

    let (m, arg) = (0..rows)
        .map(|j| (slack - fg.g()[j] as i64, j))
        .min()
        .expect("at least one row");
    report.push("C3b", m, Some(format!("row {}", arg + 1)));

    let (m, arg) = (0..rows)
        .map(|j| {
            (
                fg.g()[j] as i64 - (cap_s - cap_t + sets[j].len() as i64),
                j,
            )
        })
        .min()
        .expect("at least one row");
    report.push("C3c", m, Some(format!("row {}", arg + 1)));

    let needed = slack * (cap_r + t - cap_t);
    report.push("C3d", fg.total() as i64 - needed, None);
    Ok(report)
}

struct SatSearch {
    rows: usize,
    cols: usize,
    syms: usize,
    target: SaturationTarget,
    grid: Vec<Option<usize>>,
    row_mask: Vec<u64>,
    col_mask: Vec<u64>,
    row_need: Vec<i64>,
    col_need: Vec<i64>,
    total_row_need: i64,
    total_col_need: i64,
    row_free: Vec<i64>,
    col_free: Vec<i64>,
    rows_with: Vec<usize>,
    empties: Vec<(usize, usize)>,
    result_fg: Option<FgAssignment>,
}

impl SatSearch {
    fn place(&mut self, r: usize, c: usize, sym: usize) {
        self.grid[r * self.cols + c] = Some(sym);
        self.row_mask[r] |= 1 << sym;
        self.col_mask[c] |= 1 << sym;
        self.rows_with[sym] += 1;
        if self.row_need[r] > 0 {
            self.total_row_need -= 1;
        }
        self.row_need[r] -= 1;
        if self.col_need[c] > 0 {
            self.total_col_need -= 1;
        }
        self.col_need[c] -= 1;
    }

    fn unplace(&mut self, r: usize, c: usize, sym: usize) {
        self.grid[r * self.cols + c] = None;
        self.row_mask[r] &= !(1 << sym);
        self.col_mask[c] &= !(1 << sym);
        self.rows_with[sym] -= 1;
        self.row_need[r] += 1;
        if self.row_need[r] > 0 {
            self.total_row_need += 1;
        }
        self.col_need[c] += 1;
        if self.col_need[c] > 0 {
            self.total_col_need += 1;
        }
    }

    fn current_rect(&self) -> PartialLatinRectangle {
        let grid = (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self.grid[i * self.cols + j])
                    .collect()
            })
            .collect();
        PartialLatinRectangle::from_rows(self.syms, grid).expect("search preserves validity")
    }

    fn prune(&self) -> bool {
        if (0..self.rows).any(|r| self.row_need[r] > self.row_free[r])
            || (0..self.cols).any(|c| self.col_need[c] > self.col_free[c])
        {
            return true;
        }
        // placements only shrink the deficit sets, so the achievable
        // representative total only decreases from here
        let slack = self.target.cols - self.cols;
        let global_lower = if self.rows + self.syms > self.target.symbols {
            slack * (self.rows + self.syms - self.target.symbols)
        } else {
            0
        };
        if global_lower > 0 {
            let available: usize = (0..self.syms)
                .map(|i| slack.min(self.rows - self.rows_with[i]))
                .sum();
            if available < global_lower {
                return true;
            }
        }
        false
    }

    fn dfs(&mut self, idx: usize) -> bool {
        if self.total_row_need == 0 && self.total_col_need == 0 {
            if let Some(fg) = find_fg(&self.current_rect(), &self.target) {
                self.result_fg = Some(fg);
                return true;
            }
        }
        if idx == self.empties.len() || self.prune() {
            return false;
        }
        let (r, c) = self.empties[idx];
        self.row_free[r] -= 1;
        self.col_free[c] -= 1;
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
        let found = self.dfs(idx + 1);
        if !found {
            self.row_free[r] += 1;
            self.col_free[c] += 1;
        }
        found
    }
}

/// Witness search over extensions of type `(R, s, t)`: depth-first over
/// empty cells including the appended rows, symbols ascending, stopping
/// at the first state meeting C1, C2 and a feasible representative
/// system.
pub fn find_sat_witness(
    p0: &PartialLatinRectangle,
    target: &SaturationTarget,
) -> Option<(PartialLatinRectangle, FgAssignment)> {
    let padded = p0
        .widen(target.rows, p0.cols(), p0.symbols())
        .expect("target dominates the instance");
    let (rows, cols, syms) = padded.shape();
    let row_bound = cols as i64 + syms as i64 - target.symbols as i64;
    let col_bound = rows as i64 + syms as i64 - target.symbols as i64;
    let row_need: Vec<i64> = (0..rows)
        .map(|i| row_bound - padded.row_entry_count(i) as i64)
        .collect();
    let col_need: Vec<i64> = (0..cols)
        .map(|j| col_bound - padded.col_entry_count(j) as i64)
        .collect();
    let mut row_mask = vec![0u64; rows];
    let mut col_mask = vec![0u64; cols];
    let mut rows_with = vec![0usize; syms];
    for e in padded.entries() {
        row_mask[e.row] |= 1 << e.symbol;
        col_mask[e.col] |= 1 << e.symbol;
        rows_with[e.symbol] += 1;
    }
    let mut search = SatSearch {
        rows,
        cols,
        syms,
        target: *target,
        grid: (0..rows * cols)
            .map(|idx| padded.get(idx / cols, idx % cols))
            .collect(),
        row_mask,
        col_mask,
        total_row_need: row_need.iter().filter(|&&d| d > 0).sum(),
        total_col_need: col_need.iter().filter(|&&d| d > 0).sum(),
        row_need,
        col_need,
        row_free: (0..rows)
            .map(|i| (cols - padded.row_entry_count(i)) as i64)
            .collect(),
        col_free: (0..cols)
            .map(|j| (rows - padded.col_entry_count(j)) as i64)
            .collect(),
        rows_with,
        empties: (0..rows)
            .flat_map(|i| (0..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| padded.get(i, j).is_none())
            .collect(),
        result_fg: None,
    };
    if !search.dfs(0) {
        return None;
    }
    let fg = search.result_fg.take().expect("set on success");
    Some((search.current_rect(), fg))
}

/// Extends `p0` to a saturated rectangle of the target type, or returns
/// `None` when no witness exists. Requires the target to dominate the
/// instance type componentwise.
pub fn saturate(
    p0: &PartialLatinRectangle,
    target: &SaturationTarget,
) -> Result<Option<PartialLatinRectangle>, SatError> {
    if !target.dominates(p0) {
        return Err(SatError::TargetNotDominating {
            rows: target.rows,
            cols: target.cols,
            symbols: target.symbols,
        });
    }
    // R = S = T asks for a latin square: the completion pipeline decides
    // it over the original shape, which is far smaller
    if target.rows == target.cols && target.cols == target.symbols {
        return Ok(crate::cruse::complete(p0, target.rows).map(|sq| sq.as_rect()));
    }
    let Some((witness, fg)) = find_sat_witness(p0, target) else {
        return Ok(None);
    };
    let (rows, cols, syms) = witness.shape();
    let (cap_s, cap_t) = (target.cols, target.symbols);
    let width = cap_s - cols;
    let region: Vec<Vec<Option<usize>>> = fg
        .chosen()
        .iter()
        .map(|picks| {
            let mut row: Vec<Option<usize>> = picks.iter().copied().map(Some).collect();
            row.resize(width, None);
            row
        })
        .collect();
    let quota = (rows + syms).saturating_sub(cap_t);
    let shuffled = if width > 0 {
        let inst = ShuffleInstance::new(rows, width, quota, region)
            .expect("C3a, C3b, C3d are the shuffle hypothesis");
        shuffle(&inst)
    } else {
        region
    };
    let mut band: Vec<Vec<Option<usize>>> = (0..rows)
        .map(|i| {
            (0..cols)
                .map(|j| witness.get(i, j))
                .chain(shuffled[i].iter().copied())
                .collect()
        })
        .collect();
    let gaps: CellSet = (0..rows)
        .flat_map(|i| (0..cap_s).map(move |j| (i, j)))
        .filter(|&(i, j)| band[i][j].is_none())
        .collect();
    let inst = GapInstance::new(rows, cap_s, gaps, cap_t - syms)
        .expect("C1, C2, C3c keep every line within T - t gaps");
    for ((i, j), sym) in gap_fill(&inst, syms) {
        band[i][j] = Some(sym);
    }
    let out = PartialLatinRectangle::from_rows(cap_t, band).expect("filled band is latin");
    debug_assert!(out.is_saturated());
    debug_assert!(out.extends(p0));
    Ok(Some(out))
}

/// Like [`saturate`], but accepts any dominating target: when the
/// largest component is not in symbol position, the instance is
/// conjugated so that it is, saturated there, and mapped back.
pub fn saturate_any(
    p0: &PartialLatinRectangle,
    rows: usize,
    cols: usize,
    symbols: usize,
) -> Result<Option<PartialLatinRectangle>, SatError> {
    if p0.rows() > rows || p0.cols() > cols || p0.symbols() > symbols {
        return Err(SatError::TargetNotDominating {
            rows,
            cols,
            symbols,
        });
    }
    if let Ok(target) = SaturationTarget::new(rows, cols, symbols) {
        return saturate(p0, &target);
    }
    let dims = [rows, cols, symbols];
    let max_pos = (0..3).max_by_key(|&i| dims[i]).expect("three components");
    let role = [Role::Row, Role::Col, Role::Sym][max_pos];
    let sigma = RolePermutation::transposition(role, Role::Sym);
    let image_dims = sigma.apply(dims);
    let target = SaturationTarget::new(image_dims[0], image_dims[1], image_dims[2])
        .expect("largest component moved to symbol position");
    let image = conjugate(p0, &sigma);
    Ok(saturate(&image, &target)?.map(|sat| conjugate(&sat, &sigma.inverse())))
}

/// All types within `caps` (componentwise) admitting a saturated
/// extension of `p`.
pub fn saturable_types(
    p: &PartialLatinRectangle,
    caps: (usize, usize, usize),
) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for rows in p.rows()..=caps.0 {
        for cols in p.cols()..=caps.1 {
            for symbols in p.symbols()..=caps.2 {
                if saturate_any(p, rows, cols, symbols)
                    .expect("dominating target")
                    .is_some()
                {
                    out.push((rows, cols, symbols));
                }
            }
        }
    }
    out
}

/// Shrinks a saturated rectangle with `r <= s <= t` to the top-left
/// `R x S` corner over `T >= t` symbols; the result is saturated again.
pub fn monotone_shrink(
    z: &PartialLatinRectangle,
    rows: usize,
    cols: usize,
    symbols: usize,
) -> Result<PartialLatinRectangle, SatError> {
    let (r, s, t) = z.shape();
    if !(r <= s && s <= t) || !z.is_saturated() {
        return Err(SatError::ShrinkPrecondition);
    }
    if rows > r || cols > s || symbols < t || rows == 0 || cols == 0 {
        return Err(SatError::ShrinkPrecondition);
    }
    let grid: Vec<Vec<Option<usize>>> = (0..rows)
        .map(|i| (0..cols).map(|j| z.get(i, j)).collect())
        .collect();
    let out = PartialLatinRectangle::from_rows(symbols, grid).expect("subarray stays latin");
    debug_assert!(out.is_saturated());
    Ok(out)
}
