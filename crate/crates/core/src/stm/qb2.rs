//! QB-II: stage tabulation along the decomposition, then a left-to-right fold.
//!
//! A source-target matrix only says which source nodes reach which target
//! nodes inside one stage. Folding rows of such matrices misses paths that
//! leave a stage backwards, e.g. two target nodes joined only through an
//! earlier stage. To stay exact, stage vectors here are keyed by the full
//! partition they induce on `S_i ∪ T_i` (the matrix is one block of it), and
//! the accumulator is a partition of the current boundary with node 1's class
//! marked. Aggregation and zero-discarding work exactly as with matrices.

use indexmap::IndexMap;
use serde::Serialize;

use super::set::{convolve_sets_counted, WeightedStmSet};
use super::stage::{tabulate_stage_with, LocalStage, MainBat};
use crate::budget::{Deadline, Ticker};
use crate::connectivity::UnionFind;
use crate::counters::{Counters, Outcome};
use crate::decomposition::{decompose, Decomposition};
use crate::error::Result;
use crate::network::Network;

/// Boundary labels. Stage keys cover `sources ++ targets` and use restricted
/// growth from 0. Accumulator states cover the current boundary, with 0
/// reserved for the class containing node 1.
type Labels = Vec<u8>;

const ROOT: u8 = 0;

/// Mass bookkeeping for one stage tabulation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageTable {
    pub stage: usize,
    pub vectors: u64,
    pub keys: usize,
    pub mass: f64,
    pub discarded_mass: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Qb2Trace {
    pub decomposition: Decomposition,
    pub stage_tables: Vec<StageTable>,
    /// Accumulator sizes after folding in stages `2..=η`.
    pub fold_sizes: Vec<usize>,
    pub outcome: Outcome,
}

pub fn reliability_qb2(network: &Network) -> Result<f64> {
    Ok(reliability_qb2_with(network, Deadline::none())?.reliability)
}

pub fn reliability_qb2_with(network: &Network, deadline: Deadline) -> Result<Outcome> {
    Ok(qb2_trace_with(network, deadline)?.outcome)
}

pub fn qb2_trace(network: &Network) -> Result<Qb2Trace> {
    qb2_trace_with(network, Deadline::none())
}

pub fn qb2_trace_with(network: &Network, deadline: Deadline) -> Result<Qb2Trace> {
    let decomposition = decompose(network)?;
    let main = MainBat::for_stages(&decomposition.stages)?;
    let mut ticker = Ticker::new(deadline);
    let mut counters = Counters::default();
    let mut stage_tables = Vec::with_capacity(decomposition.stages.len());
    let mut fold_sizes = Vec::new();

    let mut acc: IndexMap<Labels, f64> = IndexMap::from([(vec![ROOT], 1.0)]);
    for (i, stage) in decomposition.stages.iter().enumerate() {
        let local = LocalStage::new(network, stage);
        let (table, keys) = tabulate_partitions(&local, &main, stage.width(), &mut ticker, &mut counters)?;
        counters.stms_per_stage.push(keys.len());
        stage_tables.push(StageTable {
            stage: stage.index,
            ..table
        });

        let (s, t) = (local.sources.len(), local.targets.len());
        let mut uf = UnionFind::new(s + t + 1);
        let mut next: IndexMap<Labels, f64> = IndexMap::new();
        for (state, &pa) in &acc {
            for (key, &pb) in &keys {
                ticker.tick()?;
                if i > 0 {
                    counters.convolution_products += 1;
                }
                if let Some(out) = step(&mut uf, state, key, s, t) {
                    if i > 0 {
                        counters.multiplications += 1;
                        counters.summations += 1;
                    }
                    *next.entry(out).or_insert(0.0) += pa * pb;
                }
            }
        }
        acc = next;
        if i > 0 {
            counters.stms_per_stage.push(acc.len());
            fold_sizes.push(acc.len());
        }
    }

    // The last boundary is {n}, so every surviving state has n in node 1's class.
    let reliability = acc.values().sum();
    counters.accepted = acc.len() as u64;
    Ok(Qb2Trace {
        decomposition,
        stage_tables,
        fold_sizes,
        outcome: Outcome {
            reliability,
            counters,
        },
    })
}

/// Partition keys of every stage vector, aggregated, dropping those whose
/// source-target block is empty.
fn tabulate_partitions(
    local: &LocalStage,
    main: &MainBat,
    width: usize,
    ticker: &mut Ticker,
    counters: &mut Counters,
) -> Result<(StageTable, IndexMap<Labels, f64>)> {
    let boundary: Vec<usize> = local.sources.iter().chain(&local.targets).copied().collect();
    let s = local.sources.len();
    let mut uf = UnionFind::new(local.nodes);
    let mut keys: IndexMap<Labels, f64> = IndexMap::new();
    let mut table = StageTable {
        stage: 0,
        vectors: 0,
        keys: 0,
        mass: 0.0,
        discarded_mass: 0.0,
    };
    let mut reps = Vec::with_capacity(boundary.len());
    for mask in main.sub_bat(width) {
        ticker.tick()?;
        table.vectors += 1;
        counters.connectivity_checks += 1;
        local.components(&mut uf, mask);
        let p = local.probability(mask);
        reps.clear();
        reps.extend(boundary.iter().map(|&v| uf.find(v)));
        let linked = reps[..s].iter().any(|r| reps[s..].contains(r));
        if !linked {
            table.discarded_mass += p;
            continue;
        }
        counters.multiplications += width.saturating_sub(1) as u64;
        counters.summations += 1;
        *keys.entry(canonical(&reps, 0)).or_insert(0.0) += p;
    }
    table.keys = keys.len();
    table.mass = keys.values().sum();
    Ok((table, keys))
}

/// Restricted-growth labels for `reps`, starting at `first`.
fn canonical(reps: &[usize], first: u8) -> Labels {
    let mut seen: Vec<usize> = Vec::with_capacity(reps.len());
    reps.iter()
        .map(|r| match seen.iter().position(|x| x == r) {
            Some(k) => first + k as u8,
            None => {
                seen.push(*r);
                first + (seen.len() - 1) as u8
            }
        })
        .collect()
}

/// Joins an accumulator state over the `s` source nodes with a stage key over
/// `sources ++ targets` and projects onto the `t` targets. `None` when node 1
/// reaches no target.
fn step(uf: &mut UnionFind, state: &[u8], key: &[u8], s: usize, t: usize) -> Option<Labels> {
    debug_assert_eq!(state.len(), s);
    debug_assert_eq!(key.len(), s + t);
    uf.reset();
    let root = s + t;
    let mut first = [usize::MAX; 256];
    for (pos, &l) in key.iter().enumerate() {
        let f = &mut first[l as usize];
        if *f == usize::MAX {
            *f = pos;
        } else {
            uf.union(pos, *f);
        }
    }
    let mut acc_first = [usize::MAX; 256];
    for (pos, &l) in state.iter().enumerate() {
        if l == ROOT {
            uf.union(pos, root);
            continue;
        }
        let f = &mut acc_first[l as usize];
        if *f == usize::MAX {
            *f = pos;
        } else {
            uf.union(pos, *f);
        }
    }
    let root_rep = uf.find(root);
    let reps: Vec<usize> = (s..s + t).map(|pos| uf.find(pos)).collect();
    if !reps.contains(&root_rep) {
        return None;
    }
    let others: Vec<usize> = reps.iter().copied().filter(|&r| r != root_rep).collect();
    let other_labels = canonical(&others, ROOT + 1);
    let mut k = 0;
    Some(
        reps.iter()
            .map(|&r| {
                if r == root_rep {
                    ROOT
                } else {
                    k += 1;
                    other_labels[k - 1]
                }
            })
            .collect(),
    )
}

/// The literal row fold over source-target matrices: tabulate each stage and
/// convolve left to right. Exact only when no path has to step back into an
/// earlier stage; [`reliability_qb2`] does not have that restriction.
pub fn reliability_row_fold(network: &Network) -> Result<Outcome> {
    let d = decompose(network)?;
    let main = MainBat::for_stages(&d.stages)?;
    let mut counters = Counters::default();
    let mut acc: Option<WeightedStmSet> = None;
    for stage in &d.stages {
        let set = tabulate_stage_with(network, stage, &main, Deadline::none())?;
        counters.stms_per_stage.push(set.len());
        acc = Some(match acc {
            None => set,
            Some(prev) => {
                let folded = convolve_sets_counted(&prev, &set, &mut counters)?;
                counters.stms_per_stage.push(folded.len());
                folded
            }
        });
    }
    Ok(Outcome {
        reliability: acc.map_or(0.0, |a| a.mass()),
        counters,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bat::reliability_oracle;
    use crate::network::fixtures::{bridge, series};

    #[test]
    fn bridge_network() {
        let trace = qb2_trace(&bridge(0.9)).unwrap();
        assert!((trace.outcome.reliability - 0.9781803).abs() < 1e-12);
        assert_eq!(trace.outcome.counters.stms_per_stage, vec![3, 5, 3, 3, 1]);
        assert_eq!(trace.outcome.counters.total_stms(), 15);
        assert_eq!(trace.fold_sizes, vec![3, 1]);
        for t in &trace.stage_tables {
            assert!((t.mass + t.discarded_mass - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn series_is_a_power() {
        for k in 1..6 {
            let r = reliability_qb2(&series(k, 0.9)).unwrap();
            assert!((r - 0.9f64.powi(k as i32)).abs() < 1e-12);
        }
    }

    #[test]
    fn canonical_labels() {
        assert_eq!(canonical(&[7, 3, 7, 9], 0), vec![0, 1, 0, 2]);
        assert_eq!(canonical(&[4, 4], 1), vec![1, 1]);
    }

    #[test]
    fn step_tracks_node_one() {
        // Sources {x, y}: x holds node 1. Key joins y with the single target.
        let mut uf = UnionFind::new(4);
        assert_eq!(step(&mut uf, &[0, 1], &[0, 1, 1], 2, 1), None);
        assert_eq!(step(&mut uf, &[0, 0], &[0, 1, 1], 2, 1), Some(vec![0]));
        assert_eq!(step(&mut uf, &[0, 1], &[0, 0, 0], 2, 1), Some(vec![0]));
    }

    #[test]
    fn row_fold_matches_on_bridge() {
        let out = reliability_row_fold(&bridge(0.9)).unwrap();
        assert!((out.reliability - reliability_oracle(&bridge(0.9)).unwrap()).abs() < 1e-12);
        assert_eq!(out.counters.stms_per_stage, vec![3, 5, 3, 3, 1]);
    }

    #[test]
    fn row_fold_misses_paths_that_step_back() {
        // 1-3, 3-2 (stage 2), 2-5 (stage 3), 5-4 and 4-6 (stage 2) reaches
        // node 6 without any stage-3 arc into it.
        let ends = [(5, 6), (1, 4), (4, 6), (1, 3), (2, 3), (2, 5), (4, 5), (2, 6)];
        let arcs: Vec<_> = ends.iter().map(|&(u, v)| (u, v, 0.5)).collect();
        let net = Network::new(6, &arcs).unwrap();
        let oracle = reliability_oracle(&net).unwrap();
        let rows = reliability_row_fold(&net).unwrap().reliability;
        assert!(oracle - rows > 1e-3, "{oracle} vs {rows}");
        assert!((reliability_qb2(&net).unwrap() - oracle).abs() < 1e-12);
    }
}
