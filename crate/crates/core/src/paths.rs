//! Weighted shortest paths (Dijkstra) and source-set/sink minimum cuts
//! (Dinic max-flow on the undirected network with a contracted super-source).

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::network::Network;
use crate::weights::ArcWeighting;

/// Arc ids of a minimum-weight path from node 1 to node n, in path order.
pub fn shortest_path(network: &Network, weighting: &ArcWeighting) -> Result<Vec<usize>> {
    assert_eq!(weighting.len(), network.arc_count());
    let n = network.node_count();
    let adj = network.incidence();
    let mut dist: Vec<Option<BigUint>> = vec![None; n + 1];
    let mut via: Vec<Option<usize>> = vec![None; n + 1];
    let mut done = vec![false; n + 1];
    let mut heap = BinaryHeap::new();
    dist[1] = Some(BigUint::zero());
    heap.push(Reverse((BigUint::zero(), 1usize)));
    while let Some(Reverse((d, x))) = heap.pop() {
        if done[x] {
            continue;
        }
        done[x] = true;
        if x == n {
            break;
        }
        for &k in &adj[x] {
            let arc = &network.arcs()[k];
            let y = arc.other(x);
            if done[y] {
                continue;
            }
            let cand = &d + weighting.weight(arc.id);
            if dist[y].as_ref().is_none_or(|cur| cand < *cur) {
                dist[y] = Some(cand.clone());
                via[y] = Some(k);
                heap.push(Reverse((cand, y)));
            }
        }
    }
    if !done[n] {
        return Err(Error::Unreachable { sink: n });
    }
    let mut path = Vec::new();
    let mut x = n;
    while x != 1 {
        let k = via[x].expect("settled nodes have a predecessor");
        path.push(network.arcs()[k].id);
        x = network.arcs()[k].other(x);
    }
    path.reverse();
    Ok(path)
}

/// A minimum cut together with the source side it bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinCut {
    /// Cut arc ids, ascending.
    pub arcs: Vec<usize>,
    /// `source_side[v]` for node ids `1..=n`; index 0 unused.
    pub source_side: Vec<bool>,
    pub weight: BigUint,
}

/// Arc ids of a minimum-weight arc set separating every node of
/// `separated_sources` from node n.
pub fn min_cut(
    network: &Network,
    weighting: &ArcWeighting,
    separated_sources: &[usize],
) -> Result<Vec<usize>> {
    Ok(min_cut_partition(network, weighting, separated_sources)?.arcs)
}

/// Like [`min_cut`], also returning the source side. The side is the set of
/// nodes reachable from the sources in the final residual graph, i.e. the
/// smallest source side among all minimum cuts.
pub fn min_cut_partition(
    network: &Network,
    weighting: &ArcWeighting,
    separated_sources: &[usize],
) -> Result<MinCut> {
    assert_eq!(weighting.len(), network.arc_count());
    let n = network.node_count();
    assert!(
        !separated_sources.is_empty(),
        "separated source set must be nonempty"
    );
    assert!(
        separated_sources.iter().all(|&s| s >= 1 && s < n),
        "separated sources must be node ids below the sink"
    );
    let super_source = n + 1;
    let mut flow = FlowGraph::new(n + 2);
    for arc in network.arcs() {
        flow.add_undirected(arc.u, arc.v, weighting.weight(arc.id).clone());
    }
    let infinite = weighting.total() + 1u32;
    for &s in separated_sources {
        flow.add_directed(super_source, s, infinite.clone());
    }
    let value = flow.max_flow(super_source, n);
    let reach = flow.residual_reach(super_source);
    let source_side: Vec<bool> = (0..=n).map(|v| v > 0 && reach[v]).collect();
    let arcs = network
        .arcs()
        .iter()
        .filter(|a| source_side[a.u] != source_side[a.v])
        .map(|a| a.id)
        .collect();
    Ok(MinCut {
        arcs,
        source_side,
        weight: value,
    })
}

struct Edge {
    to: usize,
    residual: BigUint,
    rev: usize,
}

struct FlowGraph {
    graph: Vec<Vec<Edge>>,
}

impl FlowGraph {
    fn new(nodes: usize) -> Self {
        FlowGraph {
            graph: (0..nodes).map(|_| Vec::new()).collect(),
        }
    }

    fn add_pair(&mut self, from: usize, to: usize, forward: BigUint, backward: BigUint) {
        let rev_from = self.graph[to].len();
        let rev_to = self.graph[from].len();
        self.graph[from].push(Edge {
            to,
            residual: forward,
            rev: rev_from,
        });
        self.graph[to].push(Edge {
            to: from,
            residual: backward,
            rev: rev_to,
        });
    }

    fn add_undirected(&mut self, u: usize, v: usize, cap: BigUint) {
        self.add_pair(u, v, cap.clone(), cap);
    }

    fn add_directed(&mut self, u: usize, v: usize, cap: BigUint) {
        self.add_pair(u, v, cap, BigUint::zero());
    }

    fn levels(&self, s: usize) -> Vec<Option<usize>> {
        let mut level = vec![None; self.graph.len()];
        level[s] = Some(0);
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            let next = level[u].map(|l| l + 1);
            for e in &self.graph[u] {
                if !e.residual.is_zero() && level[e.to].is_none() {
                    level[e.to] = next;
                    queue.push_back(e.to);
                }
            }
        }
        level
    }

    fn augment(
        &mut self,
        u: usize,
        t: usize,
        limit: &BigUint,
        level: &[Option<usize>],
        cursor: &mut [usize],
    ) -> BigUint {
        if u == t {
            return limit.clone();
        }
        while cursor[u] < self.graph[u].len() {
            let i = cursor[u];
            let (to, ok) = {
                let e = &self.graph[u][i];
                let ok = !e.residual.is_zero()
                    && level[e.to].is_some()
                    && level[e.to] == level[u].map(|l| l + 1);
                (e.to, ok)
            };
            if ok {
                let cap = (&self.graph[u][i].residual).min(limit).clone();
                let pushed = self.augment(to, t, &cap, level, cursor);
                if !pushed.is_zero() {
                    let rev = self.graph[u][i].rev;
                    self.graph[u][i].residual -= &pushed;
                    self.graph[to][rev].residual += &pushed;
                    return pushed;
                }
            }
            cursor[u] += 1;
        }
        BigUint::zero()
    }

    fn max_flow(&mut self, s: usize, t: usize) -> BigUint {
        let mut total = BigUint::zero();
        let unbounded: BigUint = self
            .graph
            .iter()
            .flatten()
            .fold(BigUint::zero(), |acc, e| acc + &e.residual)
            + 1u32;
        loop {
            let level = self.levels(s);
            if level[t].is_none() {
                return total;
            }
            let mut cursor = vec![0; self.graph.len()];
            loop {
                let pushed = self.augment(s, t, &unbounded, &level, &mut cursor);
                if pushed.is_zero() {
                    break;
                }
                total += pushed;
            }
        }
    }

    fn residual_reach(&self, s: usize) -> Vec<bool> {
        self.levels(s).iter().map(Option::is_some).collect()
    }
}
