//! Splitting a network into a chain of stages along the shortest MCs.
//!
//! A shortest path `P*` is fixed first. Then, walking `P*`, each step looks
//! for a minimum cut between the source side grown so far and node n that
//! contains exactly the current `P*` arc. Accepted cuts are nested, so the
//! arcs strictly between two consecutive cuts form a region. Cut arcs are then
//! handed to one neighbouring region (the smaller one) and empty regions are
//! dropped. Stage boundaries are the nodes shared between the arcs already
//! processed and the arcs still to come.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::network::Network;
use crate::paths::{min_cut_partition, shortest_path};
use crate::weights::{hop_weights, ArcWeighting};

/// Boundaries are stored as word-sized bit rows.
pub const MAX_BOUNDARY: usize = 64;

/// One of the shortest MCs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShortestMc {
    /// The `P*` arc this cut was built around.
    pub path_arc: usize,
    /// Cut arc ids, ascending.
    pub arcs: Vec<usize>,
    /// The seed set `S` the cut separates from node n.
    pub seeds: Vec<usize>,
    /// Nodes that joined the source side with this cut.
    pub source_region: Vec<usize>,
    /// Nodes on the sink side.
    pub target_side: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Stage {
    /// 1-based position in the chain.
    pub index: usize,
    pub arc_ids: Vec<usize>,
    /// `G_i(S)`, ascending node ids.
    pub source_nodes: Vec<usize>,
    /// `G_i(T)`, ascending node ids.
    pub target_nodes: Vec<usize>,
    /// Nodes touched by the stage's arcs plus both boundaries, ascending.
    pub node_ids: Vec<usize>,
}

impl Stage {
    pub fn width(&self) -> usize {
        self.arc_ids.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub shortest_path_arcs: Vec<usize>,
    pub cuts: Vec<ShortestMc>,
    /// Arcs strictly between consecutive cuts, before self-adjustment.
    pub regions: Vec<Vec<usize>>,
    /// Final stages. Empty until [`self_adjust`] runs; boundaries are filled
    /// by [`stage_sources_targets`].
    pub stages: Vec<Stage>,
}

impl Decomposition {
    pub fn largest_stage_width(&self) -> usize {
        self.stages.iter().map(Stage::width).max().unwrap_or(0)
    }
}

/// Runs the whole pipeline: shortest MCs, self-adjustment, boundaries.
pub fn decompose(network: &Network) -> Result<Decomposition> {
    let raw = find_shortest_mcs(network)?;
    let adjusted = self_adjust(network, raw);
    stage_sources_targets(network, adjusted)
}

fn nodes_where(mask: &[bool]) -> Vec<usize> {
    (1..mask.len()).filter(|&v| mask[v]).collect()
}

/// Finds the shortest MCs and the raw regions between them.
pub fn find_shortest_mcs(network: &Network) -> Result<Decomposition> {
    let n = network.node_count();
    let sink = network.sink();
    let path = shortest_path(network, &hop_weights(network))?;

    let mut inside = vec![false; n + 1];
    let mut seeds = vec![network.source()];
    let mut cuts = Vec::new();
    let mut sides: Vec<Vec<bool>> = Vec::new();

    for &path_arc in &path {
        let mut contracted = inside.clone();
        for &s in &seeds {
            contracted[s] = true;
        }
        if contracted[sink] {
            break;
        }
        let arc = network.arc(path_arc);
        if contracted[arc.u] && contracted[arc.v] {
            continue;
        }
        let weights: Vec<BigUint> = network
            .arcs()
            .iter()
            .map(|a| {
                if a.id == path_arc {
                    BigUint::zero()
                } else {
                    BigUint::one()
                }
            })
            .collect();
        let sources = nodes_where(&contracted);
        let cut = min_cut_partition(network, &ArcWeighting::new(weights), &sources)?;
        let on_path: Vec<usize> = cut
            .arcs
            .iter()
            .copied()
            .filter(|id| path.contains(id))
            .collect();
        if on_path != [path_arc] {
            continue;
        }
        let next_seeds: BTreeSet<usize> = cut
            .arcs
            .iter()
            .map(|&id| {
                let a = network.arc(id);
                if cut.source_side[a.u] {
                    a.v
                } else {
                    a.u
                }
            })
            .collect();
        cuts.push(ShortestMc {
            path_arc,
            arcs: cut.arcs.clone(),
            seeds: seeds.clone(),
            source_region: (1..=n)
                .filter(|&v| cut.source_side[v] && !inside[v])
                .collect(),
            target_side: (1..=n).filter(|&v| !cut.source_side[v]).collect(),
        });
        inside = cut.source_side.clone();
        sides.push(cut.source_side);
        seeds = next_seeds.into_iter().collect();
    }

    let in_cut: BTreeSet<usize> = cuts.iter().flat_map(|c| c.arcs.iter().copied()).collect();
    let mut regions = vec![Vec::new(); cuts.len() + 1];
    for a in network.arcs() {
        if in_cut.contains(&a.id) {
            continue;
        }
        let region = sides
            .iter()
            .position(|side| side[a.u] && side[a.v])
            .unwrap_or(cuts.len());
        regions[region].push(a.id);
    }

    Ok(Decomposition {
        shortest_path_arcs: path,
        cuts,
        regions,
        stages: Vec::new(),
    })
}

/// Assigns every cut's arcs to one of its two neighbouring regions and drops
/// empty stages.
///
/// A cut goes to whichever side currently holds fewer arcs. On a tie it goes
/// to the side nearer either end of the chain, and failing that, to the
/// earlier side.
pub fn self_adjust(_network: &Network, mut d: Decomposition) -> Decomposition {
    let count = d.regions.len();
    let mut sets = d.regions.clone();
    let end_distance = |j: usize| j.min(count - 1 - j);
    for (i, cut) in d.cuts.iter().enumerate() {
        let (left, right) = (i, i + 1);
        let target = match sets[left].len().cmp(&sets[right].len()) {
            std::cmp::Ordering::Less => left,
            std::cmp::Ordering::Greater => right,
            std::cmp::Ordering::Equal if end_distance(right) < end_distance(left) => right,
            std::cmp::Ordering::Equal => left,
        };
        sets[target].extend(cut.arcs.iter().copied());
    }
    d.stages = sets
        .into_iter()
        .filter(|s| !s.is_empty())
        .enumerate()
        .map(|(i, mut arcs)| {
            arcs.sort_unstable();
            Stage {
                index: i + 1,
                arc_ids: arcs,
                source_nodes: Vec::new(),
                target_nodes: Vec::new(),
                node_ids: Vec::new(),
            }
        })
        .collect();
    d
}

/// Fills in every stage's source and target node lists.
///
/// The boundary after stage `i` holds each node touched both by some arc of
/// stages `1..=i` and by some arc of a later stage. Node 1 counts as touched
/// before the first stage and node n as touched after the last, so
/// `S_1 = {1}` and `T_η = {n}`.
pub fn stage_sources_targets(network: &Network, mut d: Decomposition) -> Result<Decomposition> {
    let n = network.node_count();
    let eta = d.stages.len();
    let touched: Vec<BTreeSet<usize>> = d
        .stages
        .iter()
        .map(|s| {
            s.arc_ids
                .iter()
                .flat_map(|&id| {
                    let a = network.arc(id);
                    [a.u, a.v]
                })
                .collect()
        })
        .collect();

    let mut boundaries: Vec<Vec<usize>> = Vec::with_capacity(eta + 1);
    boundaries.push(vec![network.source()]);
    for cut_after in 1..eta {
        let before: BTreeSet<usize> = touched[..cut_after]
            .iter()
            .flatten()
            .copied()
            .chain([network.source()])
            .collect();
        let after: BTreeSet<usize> = touched[cut_after..]
            .iter()
            .flatten()
            .copied()
            .chain([n])
            .collect();
        boundaries.push(before.intersection(&after).copied().collect());
    }
    boundaries.push(vec![n]);

    for (i, stage) in d.stages.iter_mut().enumerate() {
        stage.source_nodes = boundaries[i].clone();
        stage.target_nodes = boundaries[i + 1].clone();
        for side in [&stage.source_nodes, &stage.target_nodes] {
            if side.len() > MAX_BOUNDARY {
                return Err(Error::BoundaryTooWide {
                    stage: stage.index,
                    size: side.len(),
                    cap: MAX_BOUNDARY,
                });
            }
        }
        let nodes: BTreeSet<usize> = touched[i]
            .iter()
            .chain(&stage.source_nodes)
            .chain(&stage.target_nodes)
            .copied()
            .collect();
        stage.node_ids = nodes.into_iter().collect();
    }
    Ok(d)
}

fn list(items: &[usize], prefix: &str) -> String {
    let parts: Vec<String> = items.iter().map(|x| format!("{prefix}{x}")).collect();
    format!("{{{}}}", parts.join(", "))
}

impl fmt::Display for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        writeln!(out, "shortest path: {}", list(&self.shortest_path_arcs, "a"))?;
        writeln!(out, "cuts: {}", self.cuts.len())?;
        for (i, c) in self.cuts.iter().enumerate() {
            writeln!(
                out,
                "  C{} = {}  path arc a{}  S = {}  source region = {}  target side = {}",
                i + 1,
                list(&c.arcs, "a"),
                c.path_arc,
                list(&c.seeds, ""),
                list(&c.source_region, ""),
                list(&c.target_side, ""),
            )?;
        }
        writeln!(out, "stages: {}", self.stages.len())?;
        for s in &self.stages {
            writeln!(
                out,
                "  G{}: arcs = {}  sources = {}  targets = {}  nodes = {}",
                s.index,
                list(&s.arc_ids, "a"),
                list(&s.source_nodes, ""),
                list(&s.target_nodes, ""),
                list(&s.node_ids, ""),
            )?;
        }
        f.write_str(&out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::fixtures::{bridge, series};

    #[test]
    fn bridge_cuts() {
        let d = find_shortest_mcs(&bridge(0.9)).unwrap();
        assert_eq!(d.shortest_path_arcs, vec![2, 6]);
        assert_eq!(d.cuts.len(), 2);
        assert_eq!(d.cuts[0].arcs, vec![1, 2]);
        assert_eq!(d.cuts[0].seeds, vec![1]);
        assert_eq!(d.cuts[0].source_region, vec![1]);
        assert_eq!(d.cuts[0].target_side, vec![2, 3, 4, 5]);
        assert_eq!(d.cuts[1].arcs, vec![6, 7]);
        assert_eq!(d.cuts[1].seeds, vec![2, 3]);
        assert_eq!(d.cuts[1].source_region, vec![2, 3, 4]);
        assert_eq!(d.cuts[1].target_side, vec![5]);
        assert_eq!(d.regions, vec![vec![], vec![3, 4, 5], vec![]]);
    }

    #[test]
    fn bridge_stages() {
        let d = decompose(&bridge(0.9)).unwrap();
        let arcs: Vec<_> = d.stages.iter().map(|s| s.arc_ids.clone()).collect();
        assert_eq!(arcs, vec![vec![1, 2], vec![3, 4, 5], vec![6, 7]]);
        let sources: Vec<_> = d.stages.iter().map(|s| s.source_nodes.clone()).collect();
        let targets: Vec<_> = d.stages.iter().map(|s| s.target_nodes.clone()).collect();
        assert_eq!(sources, vec![vec![1], vec![2, 3], vec![3, 4]]);
        assert_eq!(targets, vec![vec![2, 3], vec![3, 4], vec![5]]);
        assert_eq!(d.stages[1].node_ids, vec![2, 3, 4]);
        assert_eq!(d.largest_stage_width(), 3);
    }

    #[test]
    fn single_arc() {
        let net = series(1, 0.5);
        let raw = find_shortest_mcs(&net).unwrap();
        assert_eq!(raw.shortest_path_arcs, vec![1]);
        assert_eq!(raw.cuts.len(), 1);
        assert_eq!(raw.cuts[0].arcs, vec![1]);
        assert_eq!(raw.regions.len(), 2);
        let d = stage_sources_targets(&net, self_adjust(&net, raw)).unwrap();
        assert_eq!(d.stages.len(), 1);
        assert_eq!(d.stages[0].source_nodes, vec![1]);
        assert_eq!(d.stages[0].target_nodes, vec![2]);
    }

    #[test]
    fn series_of_two() {
        let net = series(2, 0.5);
        let raw = find_shortest_mcs(&net).unwrap();
        let cut_arcs: Vec<_> = raw.cuts.iter().map(|c| c.arcs.clone()).collect();
        assert_eq!(cut_arcs, vec![vec![1], vec![2]]);
        let d = decompose(&net).unwrap();
        let arcs: Vec<_> = d.stages.iter().map(|s| s.arc_ids.clone()).collect();
        assert_eq!(arcs, vec![vec![1], vec![2]]);
        assert_eq!(d.stages[0].target_nodes, vec![2]);
        assert_eq!(d.stages[1].source_nodes, vec![2]);
        assert_eq!(d.stages[1].target_nodes, vec![3]);
    }

    #[test]
    fn explain_lists_cuts_and_stages() {
        let text = decompose(&bridge(0.9)).unwrap().to_string();
        assert!(text.contains("C1 = {a1, a2}"), "{text}");
        assert!(text.contains("G2: arcs = {a3, a4, a5}  sources = {2, 3}  targets = {3, 4}"));
    }
}
