use super::matrix::SourceTargetMatrix;
use super::set::WeightedStmSet;
use crate::budget::{Deadline, Ticker};
use crate::connectivity::UnionFind;
use crate::decomposition::Stage;
use crate::error::{Error, Result};
use crate::network::Network;
use crate::vector::{ArcStateVector, MAX_WIDTH};

/// The BAT table of the widest stage. Narrower stages read its first `2^k`
/// rows truncated to `k` columns, which in BAT order is every `k`-tuple once.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MainBat {
    width: usize,
}

impl MainBat {
    pub fn new(width: usize) -> Result<Self> {
        if width > MAX_WIDTH {
            return Err(Error::WidthCapExceeded {
                what: "main BAT",
                width,
                cap: MAX_WIDTH,
            });
        }
        Ok(MainBat { width })
    }

    /// Sized for the widest of `stages`.
    pub fn for_stages(stages: &[Stage]) -> Result<Self> {
        Self::new(stages.iter().map(Stage::width).max().unwrap_or(0))
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Row masks of the sub-BAT of width `k`, in BAT order.
    pub fn sub_bat(&self, k: usize) -> std::ops::Range<u64> {
        assert!(k <= self.width, "sub-BAT wider than the main BAT");
        0..1u64 << k
    }
}

/// A stage rewritten over local node indices `0..node_ids.len()`.
#[derive(Debug, Clone)]
pub(crate) struct LocalStage {
    pub nodes: usize,
    /// `(u, v, p)` per stage arc, in stage arc order.
    pub arcs: Vec<(usize, usize, f64)>,
    pub sources: Vec<usize>,
    pub targets: Vec<usize>,
}

impl LocalStage {
    pub fn new(network: &Network, stage: &Stage) -> Self {
        let local = |v: usize| {
            stage
                .node_ids
                .binary_search(&v)
                .expect("stage node lists cover their arcs and boundaries")
        };
        LocalStage {
            nodes: stage.node_ids.len(),
            arcs: stage
                .arc_ids
                .iter()
                .map(|&id| {
                    let a = network.arc(id);
                    (local(a.u), local(a.v), a.p)
                })
                .collect(),
            sources: stage.source_nodes.iter().map(|&v| local(v)).collect(),
            targets: stage.target_nodes.iter().map(|&v| local(v)).collect(),
        }
    }

    pub fn components(&self, uf: &mut UnionFind, mask: u64) {
        uf.reset();
        for (k, &(u, v, _)) in self.arcs.iter().enumerate() {
            if mask >> k & 1 == 1 {
                uf.union(u, v);
            }
        }
    }

    pub fn probability(&self, mask: u64) -> f64 {
        self.arcs
            .iter()
            .enumerate()
            .map(|(k, &(_, _, p))| if mask >> k & 1 == 1 { p } else { 1.0 - p })
            .product()
    }

    pub fn matrix(&self, uf: &mut UnionFind) -> SourceTargetMatrix {
        let mut m = SourceTargetMatrix::zeros(self.sources.len(), self.targets.len());
        for (a, &s) in self.sources.iter().enumerate() {
            let rs = uf.find(s);
            for (b, &t) in self.targets.iter().enumerate() {
                if uf.find(t) == rs {
                    m.set(a, b, true);
                }
            }
        }
        m
    }
}

/// Source-target matrix of stage vector `x` (coordinates follow
/// `stage.arc_ids`). A node on both boundaries is connected to itself.
pub fn stm_from_vector(
    network: &Network,
    stage: &Stage,
    x: &ArcStateVector,
) -> SourceTargetMatrix {
    assert_eq!(x.width(), stage.width(), "vector width must equal |E_i|");
    let local = LocalStage::new(network, stage);
    let mut uf = UnionFind::new(local.nodes);
    local.components(&mut uf, x.bat_index());
    local.matrix(&mut uf)
}

/// Aggregated source-target matrices of every vector of `stage`.
pub fn tabulate_stage(
    network: &Network,
    stage: &Stage,
    main_bat: &MainBat,
) -> Result<WeightedStmSet> {
    tabulate_stage_with(network, stage, main_bat, Deadline::none())
}

pub fn tabulate_stage_with(
    network: &Network,
    stage: &Stage,
    main_bat: &MainBat,
    deadline: Deadline,
) -> Result<WeightedStmSet> {
    let local = LocalStage::new(network, stage);
    let mut uf = UnionFind::new(local.nodes);
    let mut ticker = Ticker::new(deadline);
    let mut set = WeightedStmSet::new();
    for mask in main_bat.sub_bat(stage.width()) {
        ticker.tick()?;
        local.components(&mut uf, mask);
        set.insert(local.matrix(&mut uf), local.probability(mask));
    }
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sub_bats_are_prefixes() {
        let main = MainBat::new(4).unwrap();
        assert_eq!(main.sub_bat(2).collect::<Vec<_>>(), vec![0, 1, 2, 3]);
        assert_eq!(main.sub_bat(4).count(), 16);
        assert!(MainBat::new(MAX_WIDTH + 1).is_err());
    }
}
