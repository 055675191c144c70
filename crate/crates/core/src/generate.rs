//! Parametrised network families for benchmarks and cross-checks.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::network::Network;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// `k` arcs in a path.
    Series,
    /// `k` square cells between two rails; source and sink at opposite corners.
    Ladder,
    /// `rows × k` lattice; source and sink at opposite corners.
    Grid,
    /// `k` five-node bridge blocks glued sink to source.
    BridgeChain,
    /// `k` nodes on a random spanning tree plus random extra arcs.
    Random,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::Series,
        Family::Ladder,
        Family::Grid,
        Family::BridgeChain,
        Family::Random,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Series => "series",
            Family::Ladder => "ladder",
            Family::Grid => "grid",
            Family::BridgeChain => "bridge-chain",
            Family::Random => "random",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Generator(format!("unknown family `{s}`")))
    }
}

pub const DEFAULT_GRID_ROWS: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeneratorSpec {
    pub family: Family,
    pub k: usize,
    /// Only used by [`Family::Grid`].
    pub rows: usize,
    pub p: f64,
    /// With a seed, each arc gets `p` jittered by up to ±0.1.
    pub seed: Option<u64>,
}

impl GeneratorSpec {
    pub fn new(family: Family, k: usize, p: f64) -> Self {
        GeneratorSpec {
            family,
            k,
            rows: DEFAULT_GRID_ROWS,
            p,
            seed: None,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn with_rows(mut self, rows: usize) -> Self {
        self.rows = rows;
        self
    }

    pub fn generate(&self) -> Result<Network> {
        if self.k == 0 {
            return Err(Error::Generator("k must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.p) {
            return Err(Error::Generator(format!("p = {} is not in [0, 1]", self.p)));
        }
        let (n, ends) = match self.family {
            Family::Series => (self.k + 1, (1..=self.k).map(|i| (i, i + 1)).collect()),
            Family::Ladder => ladder(self.k),
            Family::Grid => grid(self.rows, self.k)?,
            Family::BridgeChain => bridge_chain(self.k),
            Family::Random => {
                if self.k < 2 {
                    return Err(Error::Generator("random needs k >= 2 nodes".into()));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed.unwrap_or(0));
                let max = self.k * (self.k - 1) / 2;
                let m = rng.gen_range(self.k - 1..=max.min(3 * self.k));
                (self.k, random_topology(&mut rng, self.k, m))
            }
        };
        let ps = self.probabilities(ends.len());
        let arcs: Vec<_> = ends.iter().zip(ps).map(|(&(u, v), p)| (u, v, p)).collect();
        Ok(Network::new(n, &arcs)?)
    }

    fn probabilities(&self, m: usize) -> Vec<f64> {
        match self.seed {
            None => vec![self.p; m],
            Some(seed) => {
                // Separate stream from the topology draw.
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
                (0..m)
                    .map(|_| {
                        let p = (self.p + rng.gen_range(-0.1..=0.1)).clamp(0.01, 0.99);
                        (p * 1e4).round() / 1e4
                    })
                    .collect()
            }
        }
    }
}

fn ladder(k: usize) -> (usize, Vec<(usize, usize)>) {
    let top = |j: usize| 2 * j + 1;
    let bottom = |j: usize| 2 * j + 2;
    let mut ends = Vec::with_capacity(3 * k + 1);
    for j in 0..=k {
        ends.push((top(j), bottom(j)));
        if j < k {
            ends.push((top(j), top(j + 1)));
            ends.push((bottom(j), bottom(j + 1)));
        }
    }
    (2 * k + 2, ends)
}

fn grid(rows: usize, cols: usize) -> Result<(usize, Vec<(usize, usize)>)> {
    if rows == 0 || rows * cols < 2 {
        return Err(Error::Generator(format!(
            "a {rows} x {cols} grid has fewer than two nodes"
        )));
    }
    let id = |r: usize, c: usize| c * rows + r + 1;
    let mut ends = Vec::new();
    for c in 0..cols {
        for r in 0..rows {
            if r + 1 < rows {
                ends.push((id(r, c), id(r + 1, c)));
            }
            if c + 1 < cols {
                ends.push((id(r, c), id(r, c + 1)));
            }
        }
    }
    Ok((rows * cols, ends))
}

const BRIDGE: [(usize, usize); 7] = [(1, 2), (1, 3), (2, 3), (2, 4), (3, 4), (3, 5), (4, 5)];

fn bridge_chain(k: usize) -> (usize, Vec<(usize, usize)>) {
    let ends = (0..k)
        .flat_map(|b| BRIDGE.iter().map(move |&(u, v)| (u + 4 * b, v + 4 * b)))
        .collect();
    (4 * k + 1, ends)
}

/// A random spanning tree on `n` nodes plus `m - (n - 1)` extra arcs, in
/// random arc order.
fn random_topology<R: Rng>(rng: &mut R, n: usize, m: usize) -> Vec<(usize, usize)> {
    let max = n * (n - 1) / 2;
    let m = m.clamp(n - 1, max);
    let mut order: Vec<usize> = (1..=n).collect();
    order.shuffle(rng);
    let mut used = vec![vec![false; n + 1]; n + 1];
    let mut ends = Vec::with_capacity(m);
    for i in 1..n {
        let u = order[i];
        let v = order[rng.gen_range(0..i)];
        used[u][v] = true;
        used[v][u] = true;
        ends.push((u.min(v), u.max(v)));
    }
    let mut spare: Vec<(usize, usize)> = (1..=n)
        .flat_map(|u| (u + 1..=n).map(move |v| (u, v)))
        .filter(|&(u, v)| !used[u][v])
        .collect();
    spare.shuffle(rng);
    ends.extend(spare.into_iter().take(m - (n - 1)));
    ends.shuffle(rng);
    ends
}

/// A connected network with `n` nodes, `m` arcs (clamped to what fits) and
/// arc probabilities drawn from `[0.05, 0.95]`.
pub fn random_network<R: Rng>(rng: &mut R, n: usize, m: usize) -> Network {
    assert!(n >= 2);
    let ends = random_topology(rng, n, m);
    let arcs: Vec<_> = ends
        .into_iter()
        .map(|(u, v)| (u, v, rng.gen_range(0.05..=0.95)))
        .collect();
    Network::new(n, &arcs).expect("spanning tree keeps the network valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::fixtures::bridge;

    #[test]
    fn bridge_chain_one_is_the_bridge() {
        let net = GeneratorSpec::new(Family::BridgeChain, 1, 0.9).generate().unwrap();
        assert_eq!(net, bridge(0.9));
        let three = GeneratorSpec::new(Family::BridgeChain, 3, 0.9).generate().unwrap();
        assert_eq!((three.node_count(), three.arc_count()), (13, 21));
    }

    #[test]
    fn family_sizes() {
        let s = GeneratorSpec::new(Family::Series, 3, 0.9).generate().unwrap();
        assert_eq!((s.node_count(), s.arc_count()), (4, 3));
        let l = GeneratorSpec::new(Family::Ladder, 2, 0.9).generate().unwrap();
        assert_eq!((l.node_count(), l.arc_count()), (6, 7));
        let g = GeneratorSpec::new(Family::Grid, 4, 0.9).generate().unwrap();
        assert_eq!((g.node_count(), g.arc_count()), (12, 17));
    }

    #[test]
    fn seeded_output_is_deterministic() {
        let spec = GeneratorSpec::new(Family::Random, 7, 0.8).with_seed(42);
        let a = spec.generate().unwrap();
        assert_eq!(a.to_file_string(), spec.generate().unwrap().to_file_string());
        assert!(a.arcs().iter().all(|arc| (0.69..=0.91).contains(&arc.p)));
        let other = GeneratorSpec::new(Family::Random, 7, 0.8).with_seed(43);
        assert_ne!(a, other.generate().unwrap());
    }

    #[test]
    fn invalid_specs() {
        assert!(GeneratorSpec::new(Family::Series, 0, 0.9).generate().is_err());
        assert!(GeneratorSpec::new(Family::Series, 2, 1.5).generate().is_err());
        assert!(GeneratorSpec::new(Family::Grid, 1, 0.9).with_rows(1).generate().is_err());
        assert!("mesh".parse::<Family>().is_err());
        assert_eq!("bridge-chain".parse::<Family>().unwrap(), Family::BridgeChain);
    }

    #[test]
    fn random_networks_have_requested_size() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let n = rng.gen_range(4..=8);
            let m = rng.gen_range(5..=14);
            let net = random_network(&mut rng, n, m);
            assert_eq!(net.node_count(), n);
            assert_eq!(net.arc_count(), m.clamp(n - 1, n * (n - 1) / 2));
        }
    }
}
