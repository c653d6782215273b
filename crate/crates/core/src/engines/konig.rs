//! König decomposition: a nonnegative integer matrix whose row and
//! column sums are at most `k` splits into `k` sub-permutation
//! (0,1)-matrices.

use thiserror::Error;

use super::bigraph::{maximum_matching, Bigraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Row,
    Col,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KonigError {
    #[error("{axis:?} {index} has sum {sum}, exceeding k = {k}")]
    BoundExceeded {
        axis: Axis,
        index: usize,
        sum: usize,
        k: usize,
    },
    #[error("matrix rows have unequal lengths")]
    RaggedMatrix,
}

/// Splits `matrix` into `k` parts, each returned as the sorted list of
/// its 1-positions; every part has at most one 1 per row and per
/// column, and the parts sum to the input.
///
/// Each round extracts a perfect matching from the matrix padded with
/// dummy multiplicities up to a `k'`-regular bipartite multigraph. A
/// line whose remaining sum equals the remaining round count carries no
/// dummy edges, so the matching is forced to cover it with a real cell,
/// which is what keeps every round's remainder within bounds.
pub fn konig_decompose(
    matrix: &[Vec<usize>],
    k: usize,
) -> Result<Vec<Vec<(usize, usize)>>, KonigError> {
    let nr = matrix.len();
    let nc = matrix.first().map_or(0, |r| r.len());
    if matrix.iter().any(|r| r.len() != nc) {
        return Err(KonigError::RaggedMatrix);
    }
    for (i, row) in matrix.iter().enumerate() {
        let sum: usize = row.iter().sum();
        if sum > k {
            return Err(KonigError::BoundExceeded {
                axis: Axis::Row,
                index: i,
                sum,
                k,
            });
        }
    }
    for j in 0..nc {
        let sum: usize = matrix.iter().map(|r| r[j]).sum();
        if sum > k {
            return Err(KonigError::BoundExceeded {
                axis: Axis::Col,
                index: j,
                sum,
                k,
            });
        }
    }

    let n = nr.max(nc);
    if n == 0 || k == 0 {
        return Ok(vec![Vec::new(); k]);
    }
    let mut real = vec![vec![0usize; n]; n];
    for (i, row) in matrix.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            real[i][j] = v;
        }
    }
    // dummy multiplicities raising every line's degree to exactly k
    let mut row_def: Vec<usize> = (0..n)
        .map(|i| k - real[i].iter().sum::<usize>())
        .collect();
    let mut col_def: Vec<usize> = (0..n)
        .map(|j| k - (0..n).map(|i| real[i][j]).sum::<usize>())
        .collect();
    let mut dummy = vec![vec![0usize; n]; n];
    {
        let (mut i, mut j) = (0, 0);
        while i < n && j < n {
            if row_def[i] == 0 {
                i += 1;
                continue;
            }
            if col_def[j] == 0 {
                j += 1;
                continue;
            }
            let d = row_def[i].min(col_def[j]);
            dummy[i][j] += d;
            row_def[i] -= d;
            col_def[j] -= d;
        }
        debug_assert!(row_def.iter().all(|&d| d == 0));
        debug_assert!(col_def.iter().all(|&d| d == 0));
    }

    let mut parts = Vec::with_capacity(k);
    for _round in 0..k {
        let mut g = Bigraph::new(n, n);
        for i in 0..n {
            for j in 0..n {
                if real[i][j] > 0 || dummy[i][j] > 0 {
                    g.add_edge(i, j);
                }
            }
        }
        let matching = maximum_matching(&g);
        assert_eq!(
            matching.len(),
            n,
            "regular bipartite multigraph always has a perfect matching"
        );
        let mut part = Vec::new();
        for (i, j) in matching {
            if real[i][j] > 0 {
                real[i][j] -= 1;
                if i < nr && j < nc {
                    part.push((i, j));
                }
            } else {
                dummy[i][j] -= 1;
            }
        }
        part.sort_unstable();
        parts.push(part);
    }
    debug_assert!(real.iter().all(|r| r.iter().all(|&v| v == 0)));
    Ok(parts)
}
