//! Quick BAT: enumeration bounded by the first connected vector `X_FC`, the
//! last disconnected vector `X_LD`, and connected super vectors.
//!
//! The traversal is a depth-first walk over prefixes `(x_1, ..., x_k)`. A
//! prefix stands for all its completions. A prefix is accepted as soon as it
//! is connected with every later arc failed; every completion is then
//! connected and only the prefix factors enter the probability. A prefix is
//! dropped when it is disconnected with every later arc working, or when all
//! of its completions fall before `X_FC` or after `X_LD` in BAT order.
//! Vectors after `X_LD` are all connected and are added in closed form.

use std::fmt;

use crate::bat::mask_probability;
use crate::budget::{Deadline, Ticker};
use crate::connectivity::ArcProbe;
use crate::counters::{Counters, Outcome};
use crate::error::{Error, Result};
use crate::network::Network;
use crate::paths::{min_cut, shortest_path};
use crate::vector::{low_mask, ArcStateVector, MAX_WIDTH};
use crate::weights::ld_weights;

/// A prefix `X_s` over arcs `a_1..a_k`, standing for its `2^(m-k)` completions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SuperVector {
    bits: u64,
    len: u8,
}

impl SuperVector {
    pub fn from_states(states: &[u8]) -> Self {
        assert!(states.len() <= MAX_WIDTH, "super vector too long");
        let bits = states
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &s)| acc | ((s as u64 & 1) << i));
        SuperVector {
            bits,
            len: states.len() as u8,
        }
    }

    fn from_mask(bits: u64, len: usize) -> Self {
        SuperVector {
            bits,
            len: len as u8,
        }
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn prefix_mask(&self) -> u64 {
        self.bits
    }

    /// Whether the full vector `x` is one of this prefix's completions.
    pub fn covers(&self, x: &ArcStateVector) -> bool {
        x.bat_index() & low_mask(self.len()) == self.bits
    }
}

impl fmt::Display for SuperVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let states: Vec<String> = (0..self.len())
            .map(|i| (self.bits >> i & 1).to_string())
            .collect();
        write!(f, "({})", states.join(", "))
    }
}

fn check_width(network: &Network) -> Result<usize> {
    let m = network.arc_count();
    if m > MAX_WIDTH {
        return Err(Error::WidthCapExceeded {
            what: "quick BAT",
            width: m,
            cap: MAX_WIDTH,
        });
    }
    Ok(m)
}

/// The connected vector with the smallest BAT index.
///
/// Minimal connected vectors are path indicators, and with `W(a_i) = 2^i` a
/// path's weight orders exactly like its BAT index, so the lightest path is
/// the answer.
pub fn first_connected(network: &Network) -> Result<ArcStateVector> {
    let m = check_width(network)?;
    let mut x = ArcStateVector::zeros(m)?;
    for id in shortest_path(network, &ld_weights(network))? {
        x.set(id, true);
    }
    Ok(x)
}

/// The disconnected vector with the largest BAT index: the complement of the
/// minimum cut under `W(a_i) = 2^i`.
pub fn last_disconnected(network: &Network) -> Result<ArcStateVector> {
    let m = check_width(network)?;
    let mut x = ArcStateVector::ones(m)?;
    for id in min_cut(network, &ld_weights(network), &[network.source()])? {
        x.set(id, false);
    }
    Ok(x)
}

/// Product of the first `k` arc factors only.
pub fn super_vector_probability(network: &Network, s: &SuperVector) -> f64 {
    assert!(s.len() <= network.arc_count());
    mask_probability(network, s.bits, s.len())
}

/// Connectivity with the prefix's working arcs only; arcs past the prefix fail.
pub fn super_vector_connected(network: &Network, s: &SuperVector) -> bool {
    assert!(s.len() <= network.arc_count());
    ArcProbe::new(network).connected(s.bits)
}

/// `Pr(X > ld)` in BAT order. Every such vector is connected.
fn tail_mass(ps: &[f64], ld: u64) -> f64 {
    let mut along = 1.0;
    let mut total = 0.0;
    for j in (0..ps.len()).rev() {
        if ld >> j & 1 == 1 {
            along *= ps[j];
        } else {
            total += along * ps[j];
            along *= 1.0 - ps[j];
        }
    }
    total
}

/// `Pr(H ≤ bound)` where `H` encodes the states of arcs `ps[0..]` with the
/// first arc least significant.
fn mass_at_most(ps: &[f64], bound: u64) -> f64 {
    let r = ps.len();
    if r < 64 && bound >= low_mask(r) {
        return 1.0;
    }
    let mut along = 1.0;
    let mut total = 0.0;
    for j in (0..r).rev() {
        if bound >> j & 1 == 1 {
            total += along * (1.0 - ps[j]);
            along *= ps[j];
        } else {
            along *= 1.0 - ps[j];
        }
    }
    total + along
}

/// Everything the traversal decided, for inspection and tests.
#[derive(Debug, Clone)]
pub struct QuickBatTrace {
    pub first_connected: ArcStateVector,
    pub last_disconnected: ArcStateVector,
    /// Accepted connected super vectors, in visiting order.
    pub accepted: Vec<SuperVector>,
    /// Probability of all vectors after `X_LD`.
    pub tail_mass: f64,
    pub outcome: Outcome,
}

pub fn reliability_quick_bat(network: &Network) -> Result<f64> {
    Ok(reliability_quick_bat_with(network, Deadline::none())?.reliability)
}

pub fn reliability_quick_bat_with(network: &Network, deadline: Deadline) -> Result<Outcome> {
    Ok(run(network, deadline, false)?.outcome)
}

/// Runs the traversal and keeps every accepted super vector.
pub fn quick_bat_trace(network: &Network) -> Result<QuickBatTrace> {
    run(network, Deadline::none(), true)
}

struct Walk<'a> {
    ps: Vec<f64>,
    m: usize,
    full: u64,
    fc: u64,
    ld: u64,
    probe: ArcProbe,
    ticker: Ticker,
    counters: Counters,
    sum: f64,
    trace: Option<&'a mut Vec<SuperVector>>,
}

impl Walk<'_> {
    /// Expands a prefix of length `k` that is known to be neither connected
    /// with all later arcs failed nor disconnected with all later arcs working.
    fn expand(&mut self, prefix: u64, k: usize, prob: f64) -> Result<()> {
        debug_assert!(k < self.m);
        let later = self.full & !low_mask(k + 1);
        for bit in [0u64, 1] {
            let child = prefix | bit << k;
            let lowest = child;
            let highest = child | later;
            if highest < self.fc || lowest > self.ld {
                continue;
            }
            self.ticker.tick()?;
            let p = self.ps[k];
            let child_prob = prob * if bit == 1 { p } else { 1.0 - p };
            self.counters.multiplications += 1;
            // A working arc keeps the parent's optimistic result (true) and a
            // failed arc keeps its pessimistic one (false), so each child
            // needs one probe. On the last arc both tests coincide with the
            // inherited one and no probe is needed. Every probe then tests a
            // distinct vector, so there are at most 2^m of them.
            let (pessimistic, optimistic) = if later == 0 {
                (bit == 1, bit == 1)
            } else if bit == 1 {
                self.counters.connectivity_checks += 1;
                (self.probe.connected(child), true)
            } else {
                self.counters.connectivity_checks += 1;
                (false, self.probe.connected(highest))
            };
            if pessimistic {
                let bound = (self.ld - child) >> (k + 1);
                let within = mass_at_most(&self.ps[k + 1..], bound);
                self.counters.multiplications += (self.m - k) as u64;
                self.counters.accepted += 1;
                self.counters.summations += 1;
                self.sum += child_prob * within;
                if let Some(t) = self.trace.as_deref_mut() {
                    t.push(SuperVector::from_mask(child, k + 1));
                }
            } else if optimistic {
                self.expand(child, k + 1, child_prob)?;
            }
        }
        Ok(())
    }
}

fn run(network: &Network, deadline: Deadline, keep_trace: bool) -> Result<QuickBatTrace> {
    let m = check_width(network)?;
    let fc = first_connected(network)?;
    let ld = last_disconnected(network)?;
    let ps: Vec<f64> = network.arcs().iter().map(|a| a.p).collect();
    let tail = tail_mass(&ps, ld.bat_index());
    let mut accepted = Vec::new();
    let mut walk = Walk {
        ps,
        m,
        full: low_mask(m),
        fc: fc.bat_index(),
        ld: ld.bat_index(),
        probe: ArcProbe::new(network),
        ticker: Ticker::new(deadline),
        counters: Counters::default(),
        sum: 0.0,
        trace: keep_trace.then_some(&mut accepted),
    };
    walk.counters.multiplications += m as u64;
    // The empty prefix is always mixed: no arcs disconnect, all arcs connect.
    walk.expand(0, 0, 1.0)?;
    let mut counters = walk.counters;
    let reliability = walk.sum + tail;
    counters.summations += 1;
    Ok(QuickBatTrace {
        first_connected: fc,
        last_disconnected: ld,
        accepted,
        tail_mass: tail,
        outcome: Outcome {
            reliability,
            counters,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bat::{is_connected, reliability_oracle};
    use crate::network::fixtures::{bridge, series};
    use crate::vector::enumerate_vectors;

    fn v(states: &[u8]) -> ArcStateVector {
        ArcStateVector::from_states(states).unwrap()
    }

    #[test]
    fn landmarks_on_bridge() {
        let net = bridge(0.9);
        assert_eq!(first_connected(&net).unwrap(), v(&[0, 1, 0, 0, 0, 1, 0]));
        let ld = last_disconnected(&net).unwrap();
        assert_eq!(ld, v(&[0, 0, 1, 1, 1, 1, 1]));
        let after = enumerate_vectors(7, Some(ld)).unwrap().skip(1).count();
        assert_eq!(after, 3);
    }

    #[test]
    fn landmarks_on_small_networks() {
        let single = series(1, 0.5);
        assert_eq!(first_connected(&single).unwrap(), v(&[1]));
        assert_eq!(last_disconnected(&single).unwrap(), v(&[0]));
        let two = series(2, 0.5);
        assert_eq!(first_connected(&two).unwrap(), v(&[1, 1]));
        assert_eq!(last_disconnected(&two).unwrap(), v(&[0, 1]));
    }

    #[test]
    fn first_connected_on_a_triangle() {
        // a1 = 1-2, a2 = 2-3, a3 = 1-3. The two-arc path (1,1,0) has BAT index 3
        // and precedes the direct arc (0,0,1) at index 4.
        let tri = Network::new(3, &[(1, 2, 0.5), (2, 3, 0.5), (1, 3, 0.5)]).unwrap();
        let fc = first_connected(&tri).unwrap();
        assert_eq!(fc, v(&[1, 1, 0]));
        for x in enumerate_vectors(3, None).unwrap().take_while(|x| *x != fc) {
            assert!(!is_connected(&tri, &x));
        }
    }

    #[test]
    fn super_vector_examples() {
        let five = Network::new(
            6,
            &[(1, 2, 0.8), (2, 3, 0.8), (3, 4, 0.8), (4, 5, 0.8), (5, 6, 0.8)],
        )
        .unwrap();
        let s = SuperVector::from_states(&[0, 1, 0, 1, 1]);
        assert!((super_vector_probability(&five, &s) - 0.02048).abs() < 1e-15);
        let empty = SuperVector::from_states(&[]);
        assert_eq!(super_vector_probability(&five, &empty), 1.0);
        let net = bridge(0.9);
        assert!((super_vector_probability(&net, &SuperVector::from_states(&[1])) - 0.9).abs() < 1e-15);

        assert!(super_vector_connected(&net, &SuperVector::from_states(&[1, 0, 1, 0, 0, 1])));
        assert!(!super_vector_connected(&net, &SuperVector::from_states(&[1, 1])));
        assert!(super_vector_connected(&net, &SuperVector::from_states(&[0, 1, 0, 0, 0, 1])));
    }

    #[test]
    fn closed_form_masses() {
        let ps = [0.3, 0.6, 0.8];
        let pr = |x: u64| -> f64 {
            (0..3)
                .map(|j| if x >> j & 1 == 1 { ps[j] } else { 1.0 - ps[j] })
                .product()
        };
        for bound in 0..8u64 {
            let brute: f64 = (0..=bound).map(pr).sum();
            assert!((mass_at_most(&ps, bound) - brute).abs() < 1e-15);
            let above: f64 = (bound + 1..8).map(pr).sum();
            assert!((tail_mass(&ps, bound) - above).abs() < 1e-15);
        }
        assert_eq!(mass_at_most(&[], 0), 1.0);
    }

    #[test]
    fn reliability_examples() {
        let r = reliability_quick_bat(&bridge(0.9)).unwrap();
        assert!((r - reliability_oracle(&bridge(0.9)).unwrap()).abs() < 1e-12);
        let single = Network::new(2, &[(1, 2, 0.7)]).unwrap();
        let out = reliability_quick_bat_with(&single, Deadline::none()).unwrap();
        assert!((out.reliability - 0.7).abs() < 1e-15);
        assert_eq!(out.counters.connectivity_checks, 0);
    }

    #[test]
    fn trace_covers_connected_vectors_once() {
        let net = bridge(0.9);
        let trace = quick_bat_trace(&net).unwrap();
        let ld = trace.last_disconnected;
        for x in enumerate_vectors(7, None).unwrap() {
            if x.is_after(&ld) {
                assert!(is_connected(&net, &x));
                continue;
            }
            let covers = trace.accepted.iter().filter(|s| s.covers(&x)).count();
            assert_eq!(covers, usize::from(is_connected(&net, &x)), "{x}");
        }
        assert!(trace.outcome.counters.connectivity_checks <= 128);
    }
}
