//! Integral feasible flows on networks with arc lower bounds, via the
//! excess-node reduction to plain max-flow.

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundedArc {
    pub from: usize,
    pub to: usize,
    pub lower: usize,
    pub upper: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FlowError {
    #[error("arc ({from}, {to}) has lower bound {lower} above upper bound {upper}")]
    BadBounds {
        from: usize,
        to: usize,
        lower: usize,
        upper: usize,
    },
    #[error("node {node} out of range 0..{nodes}")]
    NodeOutOfRange { node: usize, nodes: usize },
    #[error("source and sink must be distinct nodes")]
    SourceIsSink,
}

/// Certificate that no feasible flow exists: a node set whose inbound
/// lower bounds exceed its outbound capacity.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("no feasible flow; violating cut of {} nodes", cut.len())]
pub struct Infeasible {
    pub cut: Vec<usize>,
}

/// A directed network with per-arc `[lower, upper]` bounds. A feasible
/// flow conserves at every node except `source` and `sink`.
#[derive(Debug, Clone)]
pub struct BoundedFlowNetwork {
    nodes: usize,
    source: usize,
    sink: usize,
    arcs: Vec<BoundedArc>,
}

impl BoundedFlowNetwork {
    pub fn new(nodes: usize, source: usize, sink: usize) -> Result<Self, FlowError> {
        if source >= nodes {
            return Err(FlowError::NodeOutOfRange {
                node: source,
                nodes,
            });
        }
        if sink >= nodes {
            return Err(FlowError::NodeOutOfRange { node: sink, nodes });
        }
        if source == sink {
            return Err(FlowError::SourceIsSink);
        }
        Ok(BoundedFlowNetwork {
            nodes,
            source,
            sink,
            arcs: Vec::new(),
        })
    }

    /// Adds an arc and returns its index. Rejects `lower > upper`.
    pub fn add_arc(
        &mut self,
        from: usize,
        to: usize,
        lower: usize,
        upper: usize,
    ) -> Result<usize, FlowError> {
        if from >= self.nodes {
            return Err(FlowError::NodeOutOfRange {
                node: from,
                nodes: self.nodes,
            });
        }
        if to >= self.nodes {
            return Err(FlowError::NodeOutOfRange {
                node: to,
                nodes: self.nodes,
            });
        }
        if lower > upper {
            return Err(FlowError::BadBounds {
                from,
                to,
                lower,
                upper,
            });
        }
        self.arcs.push(BoundedArc {
            from,
            to,
            lower,
            upper,
        });
        Ok(self.arcs.len() - 1)
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn arcs(&self) -> &[BoundedArc] {
        &self.arcs
    }
}

// Plain max-flow (shortest augmenting paths) on an adjacency structure
// with paired reverse edges.
struct MaxFlow {
    head: Vec<Vec<usize>>,     // node -> edge ids
    to: Vec<usize>,            // edge id -> head vertex
    cap: Vec<usize>,           // residual capacity
}

impl MaxFlow {
    fn new(nodes: usize) -> Self {
        MaxFlow {
            head: vec![Vec::new(); nodes],
            to: Vec::new(),
            cap: Vec::new(),
        }
    }

    fn add_edge(&mut self, from: usize, to: usize, cap: usize) -> usize {
        let id = self.to.len();
        self.head[from].push(id);
        self.to.push(to);
        self.cap.push(cap);
        self.head[to].push(id + 1);
        self.to.push(from);
        self.cap.push(0);
        id
    }

    fn run(&mut self, source: usize, sink: usize) -> usize {
        let mut total = 0;
        loop {
            let mut parent_edge: Vec<Option<usize>> = vec![None; self.head.len()];
            let mut queue = std::collections::VecDeque::from([source]);
            'bfs: while let Some(u) = queue.pop_front() {
                for &e in &self.head[u] {
                    let v = self.to[e];
                    if self.cap[e] > 0 && parent_edge[v].is_none() && v != source {
                        parent_edge[v] = Some(e);
                        if v == sink {
                            break 'bfs;
                        }
                        queue.push_back(v);
                    }
                }
            }
            let Some(_) = parent_edge[sink] else {
                return total;
            };
            let mut bottleneck = usize::MAX;
            let mut v = sink;
            while v != source {
                let e = parent_edge[v].unwrap();
                bottleneck = bottleneck.min(self.cap[e]);
                v = self.to[e ^ 1];
            }
            let mut v = sink;
            while v != source {
                let e = parent_edge[v].unwrap();
                self.cap[e] -= bottleneck;
                self.cap[e ^ 1] += bottleneck;
                v = self.to[e ^ 1];
            }
            total += bottleneck;
        }
    }

    fn reachable(&self, source: usize) -> Vec<bool> {
        let mut seen = vec![false; self.head.len()];
        seen[source] = true;
        let mut queue = std::collections::VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for &e in &self.head[u] {
                let v = self.to[e];
                if self.cap[e] > 0 && !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen
    }
}

/// Finds an integral flow meeting every arc's bounds, or an `Infeasible`
/// cut certificate.
pub fn feasible_flow(net: &BoundedFlowNetwork) -> Result<Vec<usize>, Infeasible> {
    let n = net.nodes;
    let super_source = n;
    let super_sink = n + 1;
    let mut mf = MaxFlow::new(n + 2);
    let mut excess = vec![0i64; n];
    let mut arc_edge = Vec::with_capacity(net.arcs.len());
    let total_upper: usize = net.arcs.iter().map(|a| a.upper).sum();
    for a in &net.arcs {
        arc_edge.push(mf.add_edge(a.from, a.to, a.upper - a.lower));
        excess[a.to] += a.lower as i64;
        excess[a.from] -= a.lower as i64;
    }
    // uncap the source/sink pair in both directions so only
    // conservation at inner nodes binds
    mf.add_edge(net.sink, net.source, total_upper + 1);
    mf.add_edge(net.source, net.sink, total_upper + 1);
    let mut demand = 0usize;
    for (v, &e) in excess.iter().enumerate() {
        if e > 0 {
            mf.add_edge(super_source, v, e as usize);
            demand += e as usize;
        } else if e < 0 {
            mf.add_edge(v, super_sink, (-e) as usize);
        }
    }
    let pushed = mf.run(super_source, super_sink);
    if pushed == demand {
        let flow = net
            .arcs
            .iter()
            .zip(&arc_edge)
            .map(|(a, &e)| a.lower + (a.upper - a.lower - mf.cap[e]))
            .collect();
        Ok(flow)
    } else {
        let seen = mf.reachable(super_source);
        let cut = (0..n).filter(|&v| seen[v]).collect();
        Err(Infeasible { cut })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_tight_arc() {
        let mut net = BoundedFlowNetwork::new(2, 0, 1).unwrap();
        net.add_arc(0, 1, 1, 1).unwrap();
        assert_eq!(feasible_flow(&net).unwrap(), vec![1]);
    }

    #[test]
    fn inverted_bounds_rejected_at_construction() {
        let mut net = BoundedFlowNetwork::new(2, 0, 1).unwrap();
        assert_eq!(
            net.add_arc(0, 1, 2, 1),
            Err(FlowError::BadBounds {
                from: 0,
                to: 1,
                lower: 2,
                upper: 1
            })
        );
    }

    #[test]
    fn forced_path_through_middle_node() {
        // source -> a with lower 2, a -> sink with upper 1: infeasible
        let mut net = BoundedFlowNetwork::new(3, 0, 2).unwrap();
        net.add_arc(0, 1, 2, 2).unwrap();
        net.add_arc(1, 2, 0, 1).unwrap();
        let err = feasible_flow(&net).unwrap_err();
        assert!(!err.cut.is_empty());
        // raising the outgoing capacity repairs it
        let mut net = BoundedFlowNetwork::new(3, 0, 2).unwrap();
        net.add_arc(0, 1, 2, 2).unwrap();
        net.add_arc(1, 2, 0, 2).unwrap();
        assert_eq!(feasible_flow(&net).unwrap(), vec![2, 2]);
    }

    // Exhaustive assignment search over all arc values within bounds,
    // checking conservation at inner nodes directly.
    fn brute_feasible(nodes: usize, source: usize, sink: usize, arcs: &[BoundedArc]) -> bool {
        fn rec(
            arcs: &[BoundedArc],
            idx: usize,
            balance: &mut [i64],
            source: usize,
            sink: usize,
        ) -> bool {
            if idx == arcs.len() {
                return balance
                    .iter()
                    .enumerate()
                    .all(|(v, &b)| v == source || v == sink || b == 0);
            }
            let a = arcs[idx];
            for value in a.lower..=a.upper {
                balance[a.from] -= value as i64;
                balance[a.to] += value as i64;
                if rec(arcs, idx + 1, balance, source, sink) {
                    balance[a.from] += value as i64;
                    balance[a.to] -= value as i64;
                    return true;
                }
                balance[a.from] += value as i64;
                balance[a.to] -= value as i64;
            }
            false
        }
        let mut balance = vec![0i64; nodes];
        rec(arcs, 0, &mut balance, source, sink)
    }

    #[test]
    fn random_networks_agree_with_exhaustive_search() {
        let mut rng = ChaCha8Rng::seed_from_u64(4040);
        let mut feasible_seen = 0;
        let mut infeasible_seen = 0;
        for _ in 0..400 {
            let nodes = rng.random_range(2..=5);
            let source = 0;
            let sink = nodes - 1;
            let mut net = BoundedFlowNetwork::new(nodes, source, sink).unwrap();
            let arc_count = rng.random_range(1..=8);
            for _ in 0..arc_count {
                let from = rng.random_range(0..nodes);
                let to = rng.random_range(0..nodes);
                if from == to {
                    continue;
                }
                let lower = rng.random_range(0..=2);
                let upper = rng.random_range(lower..=2);
                net.add_arc(from, to, lower, upper).unwrap();
            }
            let expect = brute_feasible(nodes, source, sink, net.arcs());
            match feasible_flow(&net) {
                Ok(flow) => {
                    assert!(expect, "arcs {:?}", net.arcs());
                    // verify bounds and conservation of the returned flow
                    let mut balance = vec![0i64; nodes];
                    for (a, &f) in net.arcs().iter().zip(&flow) {
                        assert!(a.lower <= f && f <= a.upper);
                        balance[a.from] -= f as i64;
                        balance[a.to] += f as i64;
                    }
                    for (v, &b) in balance.iter().enumerate() {
                        assert!(v == source || v == sink || b == 0);
                    }
                    feasible_seen += 1;
                }
                Err(_) => {
                    assert!(!expect, "arcs {:?}", net.arcs());
                    infeasible_seen += 1;
                }
            }
        }
        assert!(feasible_seen > 50 && infeasible_seen > 50);
    }
}
