use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;

use crate::bat::{reliability_bat_with, reliability_oracle_with, DEFAULT_ORACLE_CAP};
use crate::budget::Deadline;
use crate::counters::{Counters, Outcome};
use crate::error::{Error, Result};
use crate::network::Network;
use crate::quick_bat::reliability_quick_bat_with;
use crate::stm::reliability_qb2_with;
use crate::vector::MAX_WIDTH;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Oracle,
    Bat,
    Qbat,
    Qb2,
}

impl Backend {
    pub const ALL: [Backend; 4] = [Backend::Oracle, Backend::Bat, Backend::Qbat, Backend::Qb2];

    pub fn name(self) -> &'static str {
        match self {
            Backend::Oracle => "oracle",
            Backend::Bat => "bat",
            Backend::Qbat => "qbat",
            Backend::Qb2 => "qb2",
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Backend {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Backend::ALL
            .into_iter()
            .find(|b| b.name() == s)
            .ok_or_else(|| format!("unknown backend `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    /// Largest `m` the oracle will enumerate.
    pub oracle_cap: usize,
    pub deadline: Deadline,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            oracle_cap: DEFAULT_ORACLE_CAP,
            deadline: Deadline::none(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunResult {
    pub reliability: f64,
    pub backend: Backend,
    /// Seconds.
    pub wall_time: f64,
    pub counters: Counters,
    pub network_digest: String,
}

pub fn run(network: &Network, backend: Backend, options: RunOptions) -> Result<RunResult> {
    let start = Instant::now();
    let Outcome {
        reliability,
        counters,
    } = match backend {
        Backend::Oracle => reliability_oracle_with(network, options.oracle_cap, options.deadline)?,
        Backend::Bat => reliability_bat_with(network, MAX_WIDTH, options.deadline)?,
        Backend::Qbat => reliability_quick_bat_with(network, options.deadline)?,
        Backend::Qb2 => reliability_qb2_with(network, options.deadline)?,
    };
    Ok(RunResult {
        reliability,
        backend,
        wall_time: start.elapsed().as_secs_f64(),
        counters,
        network_digest: network.digest(),
    })
}

/// Whether `err` means the instance was too large rather than invalid.
pub fn is_cap_error(err: &Error) -> bool {
    matches!(
        err,
        Error::WidthCapExceeded { .. } | Error::BoundaryTooWide { .. }
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::fixtures::{bridge, series};

    #[test]
    fn every_backend_agrees_on_the_bridge() {
        let net = bridge(0.9);
        for b in Backend::ALL {
            let r = run(&net, b, RunOptions::default()).unwrap();
            assert!((r.reliability - 0.9781803).abs() < 1e-12, "{b}");
            assert_eq!(r.backend, b);
            assert_eq!(r.network_digest, net.digest());
        }
    }

    #[test]
    fn oracle_cap_is_honoured() {
        let options = RunOptions {
            oracle_cap: 4,
            ..RunOptions::default()
        };
        let err = run(&series(5, 0.9), Backend::Oracle, options).unwrap_err();
        assert!(is_cap_error(&err));
        assert!(run(&series(5, 0.9), Backend::Qb2, options).is_ok());
    }

    #[test]
    fn backend_names_round_trip() {
        for b in Backend::ALL {
            assert_eq!(b.name().parse::<Backend>().unwrap(), b);
        }
        assert!("bdd".parse::<Backend>().is_err());
    }
}
