use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::network::Network;

/// One non-negative exact integer weight per arc, in arc order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArcWeighting {
    weights: Vec<BigUint>,
}

impl ArcWeighting {
    pub fn new(weights: Vec<BigUint>) -> Self {
        ArcWeighting { weights }
    }

    pub fn from_u64(weights: &[u64]) -> Self {
        ArcWeighting {
            weights: weights.iter().map(|&w| BigUint::from(w)).collect(),
        }
    }

    /// Every arc weighs 1: hop counts and arc-count cuts.
    pub fn unit(network: &Network) -> Self {
        ArcWeighting {
            weights: vec![BigUint::one(); network.arc_count()],
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Weight of the arc with 1-based id.
    pub fn weight(&self, arc_id: usize) -> &BigUint {
        &self.weights[arc_id - 1]
    }

    pub fn as_slice(&self) -> &[BigUint] {
        &self.weights
    }

    pub fn total(&self) -> BigUint {
        self.weights.iter().fold(BigUint::zero(), |acc, w| acc + w)
    }
}

/// `W(a_i) = 2^(m-i)`: earlier arcs are heavier.
pub fn fc_weights(network: &Network) -> ArcWeighting {
    let m = network.arc_count();
    ArcWeighting {
        weights: (1..=m).map(|i| BigUint::one() << (m - i)).collect(),
    }
}

/// `W(a_i) = 2^i`: later arcs are heavier, matching the significance of `a_i`
/// in the BAT counting order.
pub fn ld_weights(network: &Network) -> ArcWeighting {
    let m = network.arc_count();
    ArcWeighting {
        weights: (1..=m).map(|i| BigUint::one() << i).collect(),
    }
}

/// Hop count first, FC order as the tie-break: `W(a_i) = 2^m + 2^(m-i)`.
///
/// Any path with fewer arcs is strictly lighter, and among equal-length paths
/// the distinct low parts make the optimum unique.
pub fn hop_weights(network: &Network) -> ArcWeighting {
    let m = network.arc_count();
    let base = BigUint::one() << m;
    ArcWeighting {
        weights: (1..=m)
            .map(|i| &base + (BigUint::one() << (m - i)))
            .collect(),
    }
}
