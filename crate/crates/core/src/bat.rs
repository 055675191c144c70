//! Connectivity of state vectors, vector probabilities, the brute-force
//! oracle and the plain BAT backend.

use rayon::prelude::*;

use crate::budget::{Deadline, Ticker};
use crate::connectivity::ArcProbe;
use crate::counters::{Counters, Outcome};
use crate::error::{Error, Result};
use crate::network::Network;
use crate::vector::{ArcStateVector, MAX_WIDTH};

/// Default limit on `m` for exhaustive enumeration.
pub const DEFAULT_ORACLE_CAP: usize = 30;

/// Environment variable overriding [`DEFAULT_ORACLE_CAP`].
pub const ORACLE_CAP_ENV: &str = "RELENGINE_ORACLE_CAP";

/// Oracle cap from `RELENGINE_ORACLE_CAP`, falling back to the default when
/// unset or unparsable. Never above [`MAX_WIDTH`].
pub fn oracle_cap_from_env() -> usize {
    std::env::var(ORACLE_CAP_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .unwrap_or(DEFAULT_ORACLE_CAP)
        .min(MAX_WIDTH)
}

/// Whether node 1 reaches node n through functioning arcs of `x`.
pub fn is_connected(network: &Network, x: &ArcStateVector) -> bool {
    assert_eq!(x.width(), network.arc_count(), "vector width must equal m");
    ArcProbe::new(network).connected(x.bat_index())
}

/// `Π p_i` over functioning arcs times `Π (1 - p_i)` over failed ones.
pub fn vector_probability(network: &Network, x: &ArcStateVector) -> f64 {
    assert_eq!(x.width(), network.arc_count(), "vector width must equal m");
    mask_probability(network, x.bat_index(), x.width())
}

/// Probability of the first `width` arc states encoded in `mask`.
pub(crate) fn mask_probability(network: &Network, mask: u64, width: usize) -> f64 {
    network.arcs()[..width]
        .iter()
        .enumerate()
        .map(|(k, a)| if mask >> k & 1 == 1 { a.p } else { 1.0 - a.p })
        .product()
}

fn check_cap(network: &Network, cap: usize, what: &'static str) -> Result<()> {
    let m = network.arc_count();
    let cap = cap.min(MAX_WIDTH);
    if m > cap {
        return Err(Error::WidthCapExceeded {
            what,
            width: m,
            cap,
        });
    }
    Ok(())
}

/// Exact reliability by summing every connected vector, with the default cap.
pub fn reliability_oracle(network: &Network) -> Result<f64> {
    Ok(reliability_oracle_with(network, DEFAULT_ORACLE_CAP, Deadline::none())?.reliability)
}

const ORACLE_CHUNK_BITS: usize = 14;

/// Brute-force oracle. The index range `[0, 2^m)` is split into fixed chunks
/// evaluated in parallel; partial sums are added in chunk order so the result
/// does not depend on scheduling.
pub fn reliability_oracle_with(network: &Network, cap: usize, deadline: Deadline) -> Result<Outcome> {
    check_cap(network, cap, "oracle")?;
    let m = network.arc_count();
    let total: u64 = 1 << m;
    let chunk_bits = ORACLE_CHUNK_BITS.min(m);
    let chunk: u64 = 1 << chunk_bits;
    let chunks = total / chunk;
    let partials: Vec<(f64, u64)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut probe = ArcProbe::new(network);
            let mut ticker = Ticker::new(deadline);
            let mut sum = 0.0;
            let mut connected = 0u64;
            for mask in c * chunk..(c + 1) * chunk {
                ticker.tick()?;
                if probe.connected(mask) {
                    sum += mask_probability(network, mask, m);
                    connected += 1;
                }
            }
            Ok((sum, connected))
        })
        .collect::<Result<_>>()?;
    let reliability = partials.iter().map(|p| p.0).sum();
    let accepted: u64 = partials.iter().map(|p| p.1).sum();
    Ok(Outcome {
        reliability,
        counters: Counters {
            connectivity_checks: total,
            accepted,
            multiplications: accepted * m.saturating_sub(1) as u64,
            summations: accepted,
            ..Counters::default()
        },
    })
}

/// Plain BAT: walks every vector with the first-zero-flip rule, testing each
/// for connectivity and summing the probabilities of connected ones.
pub fn reliability_bat(network: &Network) -> Result<f64> {
    Ok(reliability_bat_with(network, MAX_WIDTH, Deadline::none())?.reliability)
}

pub fn reliability_bat_with(network: &Network, cap: usize, deadline: Deadline) -> Result<Outcome> {
    check_cap(network, cap, "BAT")?;
    let m = network.arc_count();
    let mut probe = ArcProbe::new(network);
    let mut ticker = Ticker::new(deadline);
    let mut counters = Counters::default();
    let mut reliability = 0.0;
    let mut visit = |x: u64, counters: &mut Counters| {
        counters.connectivity_checks += 1;
        if probe.connected(x) {
            reliability += mask_probability(network, x, m);
            counters.accepted += 1;
            counters.multiplications += m.saturating_sub(1) as u64;
            counters.summations += 1;
        }
    };

    // The pseudocode walks coordinates with a cursor `i`: the first zero it
    // meets becomes one and the cursor rewinds; ones on the way become zeros.
    let mut x = 0u64;
    let mut i = 0usize;
    visit(x, &mut counters);
    loop {
        if x >> i & 1 == 0 {
            x |= 1 << i;
            i = 0;
            ticker.tick()?;
            visit(x, &mut counters);
            continue;
        }
        if i + 1 >= m {
            break;
        }
        x &= !(1 << i);
        i += 1;
    }
    Ok(Outcome {
        reliability,
        counters,
    })
}
