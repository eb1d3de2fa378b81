//! Min-cost flow by successive shortest augmenting paths with Johnson
//! potentials. Capacities are integral, so every augmentation moves whole
//! units and the resulting flow is integral.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::scalar::Scalar;

#[derive(Debug, Clone)]
struct Edge<T> {
    to: usize,
    rev: usize,
    cap: usize,
    cost: T,
}

/// Handle to a forward edge, used to read its flow back.
#[derive(Debug, Clone, Copy)]
pub(crate) struct EdgeRef {
    from: usize,
    index: usize,
}

#[derive(Debug)]
pub(crate) struct FlowNetwork<T> {
    graph: Vec<Vec<Edge<T>>>,
    initial_cap: Vec<Vec<usize>>,
}

struct Frontier<T> {
    dist: T,
    node: usize,
}

impl<T: Scalar> PartialEq for Frontier<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<T: Scalar> Eq for Frontier<T> {}

impl<T: Scalar> PartialOrd for Frontier<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Scalar> Ord for Frontier<T> {
    // Reversed for a min-heap; node index breaks distance ties.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .partial_cmp(&self.dist)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl<T: Scalar> FlowNetwork<T> {
    pub fn new(nodes: usize) -> Self {
        FlowNetwork {
            graph: (0..nodes).map(|_| Vec::new()).collect(),
            initial_cap: (0..nodes).map(|_| Vec::new()).collect(),
        }
    }

    /// Adds `from -> to` with capacity `cap` and non-negative unit `cost`.
    pub fn add_edge(&mut self, from: usize, to: usize, cap: usize, cost: T) -> EdgeRef {
        let fwd = self.graph[from].len();
        let bwd = self.graph[to].len() + usize::from(from == to);
        self.graph[from].push(Edge {
            to,
            rev: bwd,
            cap,
            cost,
        });
        self.initial_cap[from].push(cap);
        self.graph[to].push(Edge {
            to: from,
            rev: fwd,
            cap: 0,
            cost: -cost,
        });
        self.initial_cap[to].push(0);
        EdgeRef { from, index: fwd }
    }

    pub fn flow(&self, e: EdgeRef) -> usize {
        self.initial_cap[e.from][e.index] - self.graph[e.from][e.index].cap
    }

    /// Pushes up to `limit` units from `source` to `sink` at minimum cost.
    /// Returns the amount actually pushed.
    pub fn run(&mut self, source: usize, sink: usize, limit: usize, zero_tol: T) -> usize {
        let n = self.graph.len();
        let inf = T::infinity();
        let mut potential = vec![T::zero(); n];
        let mut dist = vec![inf; n];
        let mut prev: Vec<Option<(usize, usize)>> = vec![None; n];
        let mut done = vec![false; n];
        let mut heap = BinaryHeap::new();
        let mut pushed = 0;

        while pushed < limit {
            dist.iter_mut().for_each(|d| *d = inf);
            prev.iter_mut().for_each(|p| *p = None);
            done.iter_mut().for_each(|d| *d = false);
            dist[source] = T::zero();
            heap.push(Frontier {
                dist: T::zero(),
                node: source,
            });

            while let Some(Frontier { dist: du, node: u }) = heap.pop() {
                if done[u] {
                    continue;
                }
                done[u] = true;
                for (idx, e) in self.graph[u].iter().enumerate() {
                    if e.cap == 0 || done[e.to] {
                        continue;
                    }
                    // Round-off can leave reduced costs a hair below zero.
                    let mut reduced = e.cost + potential[u] - potential[e.to];
                    if reduced < T::zero() {
                        debug_assert!(
                            reduced > -zero_tol * (T::one() + e.cost.abs()) * T::lit(1e3)
                        );
                        reduced = T::zero();
                    }
                    let cand = du + reduced;
                    if cand < dist[e.to] {
                        dist[e.to] = cand;
                        prev[e.to] = Some((u, idx));
                        heap.push(Frontier {
                            dist: cand,
                            node: e.to,
                        });
                    }
                }
            }

            if !done[sink] {
                break;
            }
            for v in 0..n {
                if done[v] {
                    potential[v] += dist[v];
                }
            }

            let mut amount = limit - pushed;
            let mut v = sink;
            while let Some((u, idx)) = prev[v] {
                amount = amount.min(self.graph[u][idx].cap);
                v = u;
            }
            let mut v = sink;
            while let Some((u, idx)) = prev[v] {
                let rev = self.graph[u][idx].rev;
                self.graph[u][idx].cap -= amount;
                self.graph[v][rev].cap += amount;
                v = u;
            }
            pushed += amount;
        }
        pushed
    }
}
