//! Network data model and the line-oriented network file format.
//!
//! ```text
//! # comment
//! nodes 5
//! arc 1 2 0.9
//! arc 1 3 0.9
//! ```
//!
//! Arc `i` is the `i`-th `arc` line. Node 1 is the source and node `n` the sink.

use std::collections::HashMap;
use std::fmt::{self, Write as _};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::NetworkError;

/// An undirected arc with its functioning probability. `id` is 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Arc {
    pub id: usize,
    pub u: usize,
    pub v: usize,
    pub p: f64,
}

impl Arc {
    pub fn other(&self, node: usize) -> usize {
        if node == self.u {
            self.v
        } else {
            self.u
        }
    }

    pub fn touches(&self, node: usize) -> bool {
        self.u == node || self.v == node
    }
}

/// A validated binary-state network. Immutable once built.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Network {
    node_count: usize,
    arcs: Vec<Arc>,
}

impl Network {
    /// Builds a network from `(u, v, p)` triples in arc order.
    pub fn new(node_count: usize, arcs: &[(usize, usize, f64)]) -> Result<Self, NetworkError> {
        if node_count < 2 {
            return Err(NetworkError::TooFewNodes(node_count));
        }
        let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
        let mut built = Vec::with_capacity(arcs.len());
        for (idx, &(u, v, p)) in arcs.iter().enumerate() {
            let id = idx + 1;
            for node in [u, v] {
                if node == 0 || node > node_count {
                    return Err(NetworkError::NodeOutOfRange {
                        arc: id,
                        node,
                        node_count,
                    });
                }
            }
            if u == v {
                return Err(NetworkError::Loop { arc: id, node: u });
            }
            if !(0.0..=1.0).contains(&p) {
                return Err(NetworkError::ProbabilityOutOfRange { arc: id, p });
            }
            let key = (u.min(v), u.max(v));
            if let Some(&first) = seen.get(&key) {
                return Err(NetworkError::ParallelArc {
                    arc: id,
                    first,
                    u,
                    v,
                });
            }
            seen.insert(key, id);
            built.push(Arc { id, u, v, p });
        }
        let net = Network {
            node_count,
            arcs: built,
        };
        if let Some(node) = net.first_unreachable_node() {
            return Err(NetworkError::Disconnected { node });
        }
        Ok(net)
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    /// Arc by 1-based id.
    pub fn arc(&self, id: usize) -> &Arc {
        &self.arcs[id - 1]
    }

    pub fn source(&self) -> usize {
        1
    }

    pub fn sink(&self) -> usize {
        self.node_count
    }

    /// Incidence lists indexed by node id (index 0 unused), holding 0-based arc indices.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.node_count + 1];
        for (k, a) in self.arcs.iter().enumerate() {
            adj[a.u].push(k);
            adj[a.v].push(k);
        }
        adj
    }

    fn first_unreachable_node(&self) -> Option<usize> {
        let adj = self.incidence();
        let mut seen = vec![false; self.node_count + 1];
        let mut stack = vec![1];
        seen[1] = true;
        while let Some(x) = stack.pop() {
            for &k in &adj[x] {
                let y = self.arcs[k].other(x);
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        (1..=self.node_count).find(|&v| !seen[v])
    }

    /// Returns a copy with probabilities replaced, keeping the topology.
    pub fn with_probabilities(&self, ps: &[f64]) -> Result<Self, NetworkError> {
        assert_eq!(ps.len(), self.arcs.len(), "one probability per arc");
        let triples: Vec<_> = self
            .arcs
            .iter()
            .zip(ps)
            .map(|(a, &p)| (a.u, a.v, p))
            .collect();
        Network::new(self.node_count, &triples)
    }

    /// Canonical file text. Probabilities use the shortest round-trip decimal form.
    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        writeln!(out, "nodes {}", self.node_count).unwrap();
        for a in &self.arcs {
            writeln!(out, "arc {} {} {}", a.u, a.v, a.p).unwrap();
        }
        out
    }

    /// SHA-256 of the canonical file text, hex encoded.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.to_file_string().as_bytes()))
    }
}

impl fmt::Display for Network {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_file_string())
    }
}

/// Parses the network file format.
pub fn parse_network(text: &str) -> Result<Network, NetworkError> {
    let mut node_count: Option<usize> = None;
    let mut arcs = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let syntax = |message: String| NetworkError::Syntax {
            line: line_no,
            message,
        };
        let mut fields = line.split_whitespace();
        let keyword = fields.next().unwrap_or_default();
        let rest: Vec<&str> = fields.collect();
        match keyword {
            "nodes" => {
                if node_count.is_some() {
                    return Err(syntax("`nodes` declared more than once".into()));
                }
                if !arcs.is_empty() {
                    return Err(syntax("`nodes` must precede every `arc`".into()));
                }
                if rest.len() != 1 {
                    return Err(syntax(format!("expected `nodes <n>`, got `{line}`")));
                }
                let n = rest[0]
                    .parse::<usize>()
                    .map_err(|e| syntax(format!("bad node count `{}`: {e}", rest[0])))?;
                node_count = Some(n);
            }
            "arc" => {
                if node_count.is_none() {
                    return Err(syntax("`arc` before `nodes`".into()));
                }
                if rest.len() != 3 {
                    return Err(syntax(format!("expected `arc <u> <v> <p>`, got `{line}`")));
                }
                let u = rest[0]
                    .parse::<usize>()
                    .map_err(|e| syntax(format!("bad node `{}`: {e}", rest[0])))?;
                let v = rest[1]
                    .parse::<usize>()
                    .map_err(|e| syntax(format!("bad node `{}`: {e}", rest[1])))?;
                let p = rest[2]
                    .parse::<f64>()
                    .map_err(|e| syntax(format!("bad probability `{}`: {e}", rest[2])))?;
                arcs.push((u, v, p));
            }
            other => return Err(syntax(format!("unknown keyword `{other}`"))),
        }
    }
    let n = node_count.ok_or(NetworkError::MissingNodes)?;
    Network::new(n, &arcs)
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::Network;

    /// Five-node bridge: arcs 1-2, 1-3, 2-3, 2-4, 3-4, 3-5, 4-5.
    pub const BRIDGE_TOPOLOGY: [(usize, usize); 7] =
        [(1, 2), (1, 3), (2, 3), (2, 4), (3, 4), (3, 5), (4, 5)];

    pub fn bridge(p: f64) -> Network {
        let arcs: Vec<_> = BRIDGE_TOPOLOGY.iter().map(|&(u, v)| (u, v, p)).collect();
        Network::new(5, &arcs).unwrap()
    }

    pub fn series(k: usize, p: f64) -> Network {
        let arcs: Vec<_> = (1..=k).map(|i| (i, i + 1, p)).collect();
        Network::new(k + 1, &arcs).unwrap()
    }
}
