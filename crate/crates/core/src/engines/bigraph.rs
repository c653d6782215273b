//! Bipartite graphs with maximum matching and a minimum vertex cover
//! certificate.

/// A bipartite graph on `left x right` vertex sets. Adjacency lists are
/// kept sorted and duplicate-free so the augmenting search is
/// reproducible.
#[derive(Debug, Clone)]
pub struct Bigraph {
    left: usize,
    right: usize,
    adj: Vec<Vec<usize>>,
}

impl Bigraph {
    pub fn new(left: usize, right: usize) -> Self {
        Bigraph {
            left,
            right,
            adj: vec![Vec::new(); left],
        }
    }

    /// Adds an edge; out-of-range endpoints panic, duplicates are
    /// ignored.
    pub fn add_edge(&mut self, l: usize, r: usize) {
        assert!(l < self.left && r < self.right, "edge out of range");
        let list = &mut self.adj[l];
        if let Err(pos) = list.binary_search(&r) {
            list.insert(pos, r);
        }
    }

    pub fn left_count(&self) -> usize {
        self.left
    }

    pub fn right_count(&self) -> usize {
        self.right
    }

    pub fn neighbors(&self, l: usize) -> &[usize] {
        &self.adj[l]
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.len()).sum()
    }
}

fn try_augment(
    g: &Bigraph,
    l: usize,
    match_of_right: &mut [Option<usize>],
    visited: &mut [bool],
) -> bool {
    for &r in g.neighbors(l) {
        if visited[r] {
            continue;
        }
        visited[r] = true;
        if match_of_right[r].is_none()
            || try_augment(g, match_of_right[r].unwrap(), match_of_right, visited)
        {
            match_of_right[r] = Some(l);
            return true;
        }
    }
    false
}

/// Maximum matching by augmenting paths, scanning left vertices and
/// neighbor lists in ascending order. Returns vertex-disjoint edges
/// sorted by left endpoint.
pub fn maximum_matching(g: &Bigraph) -> Vec<(usize, usize)> {
    let mut match_of_right = vec![None; g.right_count()];
    let mut visited = vec![false; g.right_count()];
    for l in 0..g.left_count() {
        visited.fill(false);
        try_augment(g, l, &mut match_of_right, &mut visited);
    }
    let mut edges: Vec<(usize, usize)> = match_of_right
        .iter()
        .enumerate()
        .filter_map(|(r, &l)| l.map(|l| (l, r)))
        .collect();
    edges.sort_unstable();
    edges
}

/// Minimum vertex cover derived from a maximum matching via König's
/// theorem: alternate from the unmatched left vertices, then take the
/// unreached left side and the reached right side.
pub fn minimum_vertex_cover(g: &Bigraph, matching: &[(usize, usize)]) -> (Vec<usize>, Vec<usize>) {
    let mut match_of_left = vec![None; g.left_count()];
    let mut match_of_right = vec![None; g.right_count()];
    for &(l, r) in matching {
        match_of_left[l] = Some(r);
        match_of_right[r] = Some(l);
    }
    let mut seen_l = vec![false; g.left_count()];
    let mut seen_r = vec![false; g.right_count()];
    let mut queue: Vec<usize> = (0..g.left_count())
        .filter(|&l| match_of_left[l].is_none())
        .collect();
    for &l in &queue {
        seen_l[l] = true;
    }
    while let Some(l) = queue.pop() {
        for &r in g.neighbors(l) {
            if !seen_r[r] {
                seen_r[r] = true;
                if let Some(l2) = match_of_right[r] {
                    if !seen_l[l2] {
                        seen_l[l2] = true;
                        queue.push(l2);
                    }
                }
            }
        }
    }
    let cover_left = (0..g.left_count()).filter(|&l| !seen_l[l]).collect();
    let cover_right = (0..g.right_count()).filter(|&r| seen_r[r]).collect();
    (cover_left, cover_right)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    // Exhaustive maximum matching size by trying all edge subsets that
    // form matchings; independent of the augmenting-path code.
    fn brute_max_matching(edges: &[(usize, usize)]) -> usize {
        fn rec(edges: &[(usize, usize)], used_l: u64, used_r: u64, idx: usize) -> usize {
            if idx == edges.len() {
                return 0;
            }
            let mut best = rec(edges, used_l, used_r, idx + 1);
            let (l, r) = edges[idx];
            if used_l & (1 << l) == 0 && used_r & (1 << r) == 0 {
                best = best.max(1 + rec(edges, used_l | 1 << l, used_r | 1 << r, idx + 1));
            }
            best
        }
        rec(edges, 0, 0, 0)
    }

    #[test]
    fn empty_graph_has_empty_matching() {
        let g = Bigraph::new(3, 3);
        assert!(maximum_matching(&g).is_empty());
    }

    #[test]
    fn complete_3x3_has_perfect_matching() {
        let mut g = Bigraph::new(3, 3);
        for l in 0..3 {
            for r in 0..3 {
                g.add_edge(l, r);
            }
        }
        let m = maximum_matching(&g);
        assert_eq!(m.len(), 3);
        // deterministic: repeated runs agree
        assert_eq!(m, maximum_matching(&g));
    }

    #[test]
    fn random_graphs_match_brute_force_and_cover() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let left = rng.random_range(1..=6);
            let right = rng.random_range(1..=6);
            let mut g = Bigraph::new(left, right);
            let mut edges = Vec::new();
            for l in 0..left {
                for r in 0..right {
                    if rng.random_bool(0.4) {
                        g.add_edge(l, r);
                        edges.push((l, r));
                    }
                }
            }
            let m = maximum_matching(&g);
            assert_eq!(m.len(), brute_max_matching(&edges));
            // matched edges are pairwise disjoint
            let mut ls: Vec<_> = m.iter().map(|e| e.0).collect();
            let mut rs: Vec<_> = m.iter().map(|e| e.1).collect();
            ls.dedup();
            rs.sort_unstable();
            rs.dedup();
            assert_eq!(ls.len(), m.len());
            assert_eq!(rs.len(), m.len());

            // Koenig duality: |cover| == |matching| and every edge covered
            let (cl, cr) = minimum_vertex_cover(&g, &m);
            assert_eq!(cl.len() + cr.len(), m.len());
            for (l, r) in edges {
                assert!(cl.contains(&l) || cr.contains(&r));
            }
        }
    }
}
