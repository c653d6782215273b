//! Systems of distinct representatives over set families, including the
//! strengthening that forces every "necessary" element into the chosen
//! system.

use thiserror::Error;

use super::bigraph::{maximum_matching, Bigraph};

/// An ordered family of finite sets over the universe `0..universe`.
#[derive(Debug, Clone)]
pub struct SetFamily {
    universe: usize,
    sets: Vec<Vec<usize>>,
}

impl SetFamily {
    /// Sets are sorted and deduplicated; elements must lie in the
    /// universe.
    pub fn new(universe: usize, sets: Vec<Vec<usize>>) -> Result<Self, SdrError> {
        let mut cleaned = Vec::with_capacity(sets.len());
        for set in sets {
            let mut s = set;
            s.sort_unstable();
            s.dedup();
            if s.last().is_some_and(|&x| x >= universe) {
                return Err(SdrError::ElementOutOfRange {
                    element: *s.last().unwrap(),
                    universe,
                });
            }
            cleaned.push(s);
        }
        Ok(SetFamily {
            universe,
            sets: cleaned,
        })
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn set(&self, i: usize) -> &[usize] {
        &self.sets[i]
    }
}

/// A subfamily whose union is too small: the indexed sets jointly
/// contain fewer than `indices.len()` distinct elements.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("Hall violation: {} sets cover only {union_size} elements", indices.len())]
pub struct HallViolation {
    pub indices: Vec<usize>,
    pub union_size: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SdrError {
    #[error(transparent)]
    Hall(#[from] HallViolation),
    #[error("element {element} outside universe 0..{universe}")]
    ElementOutOfRange { element: usize, universe: usize },
    #[error("necessary element {element} cannot be brought into the system")]
    AugmentationFailed { element: usize },
}

/// Picks one element from each set, all pairwise distinct, or returns a
/// witnessing subfamily that violates Hall's condition.
pub fn sdr(family: &SetFamily) -> Result<Vec<usize>, HallViolation> {
    let mut g = Bigraph::new(family.len(), family.universe());
    for i in 0..family.len() {
        for &x in family.set(i) {
            g.add_edge(i, x);
        }
    }
    let matching = maximum_matching(&g);
    if matching.len() == family.len() {
        let mut reps = vec![0; family.len()];
        for (i, x) in matching {
            reps[i] = x;
        }
        return Ok(reps);
    }
    // Build the violator from an unmatched set: alternate via chosen
    // elements; every element seen from the reached sets is matched, and
    // its partner set joins the subfamily.
    let mut rep_of: Vec<Option<usize>> = vec![None; family.len()];
    let mut set_of: Vec<Option<usize>> = vec![None; family.universe()];
    for &(i, x) in &matching {
        rep_of[i] = Some(x);
        set_of[x] = Some(i);
    }
    let start = (0..family.len())
        .find(|&i| rep_of[i].is_none())
        .expect("some set is unmatched");
    let mut in_z = vec![false; family.len()];
    let mut seen_elem = vec![false; family.universe()];
    let mut union_size = 0;
    let mut queue = vec![start];
    in_z[start] = true;
    while let Some(i) = queue.pop() {
        for &x in family.set(i) {
            if !seen_elem[x] {
                seen_elem[x] = true;
                union_size += 1;
                let j = set_of[x].expect("maximality: all reachable elements are matched");
                if !in_z[j] {
                    in_z[j] = true;
                    queue.push(j);
                }
            }
        }
    }
    let indices: Vec<usize> = (0..family.len()).filter(|&i| in_z[i]).collect();
    debug_assert!(union_size < indices.len());
    Err(HallViolation {
        indices,
        union_size,
    })
}

/// An SDR that contains every element listed in `necessary`.
///
/// Starting from any SDR, an excluded necessary element `x0` is brought
/// in along a chain `x0 < x1 < ... < xk` where each `x_{i+1}` is the
/// chosen representative of a set containing `x_i` and `xk` is not
/// necessary; reassigning along the chain swaps `xk` out for `x0`. The
/// chain search is breadth-first, so the first (shortest) chain ending
/// in a non-necessary element is used. Failure to find such a chain
/// means the caller's counting hypothesis does not hold.
pub fn sdr_with_necessary(
    family: &SetFamily,
    necessary: &[usize],
) -> Result<Vec<usize>, SdrError> {
    let mut reps = sdr(family)?;
    let mut is_necessary = vec![false; family.universe()];
    for &x in necessary {
        is_necessary[x] = true;
    }
    // sets containing each element
    let mut sets_with: Vec<Vec<usize>> = vec![Vec::new(); family.universe()];
    for i in 0..family.len() {
        for &x in family.set(i) {
            sets_with[x].push(i);
        }
    }
    loop {
        let mut chosen = vec![false; family.universe()];
        let mut set_of_rep: Vec<Option<usize>> = vec![None; family.universe()];
        for (i, &x) in reps.iter().enumerate() {
            chosen[x] = true;
            set_of_rep[x] = Some(i);
        }
        let Some(&x0) = necessary.iter().find(|&&x| !chosen[x]) else {
            return Ok(reps);
        };
        // BFS over elements: x -> representative of any set containing x
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; family.universe()]; // (prev elem, via set)
        let mut visited = vec![false; family.universe()];
        visited[x0] = true;
        let mut queue = std::collections::VecDeque::from([x0]);
        let mut terminal = None;
        'bfs: while let Some(x) = queue.pop_front() {
            for &j in &sets_with[x] {
                let y = reps[j];
                if y != x && !visited[y] {
                    visited[y] = true;
                    parent[y] = Some((x, j));
                    if !is_necessary[y] {
                        terminal = Some(y);
                        break 'bfs;
                    }
                    queue.push_back(y);
                }
            }
        }
        let Some(mut y) = terminal else {
            return Err(SdrError::AugmentationFailed { element: x0 });
        };
        // Reassign along the chain: each link (x, j) installs x as the
        // representative of set j, displacing the previous terminal.
        while let Some((x, j)) = parent[y] {
            reps[j] = x;
            y = x;
        }
    }
}
