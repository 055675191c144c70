use std::time::{Duration, Instant};

use crate::error::{Error, Result};

/// Optional wall-clock limit polled by the enumerating backends.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Deadline(Option<Instant>);

impl Deadline {
    pub fn none() -> Self {
        Deadline(None)
    }

    pub fn after(budget: Duration) -> Self {
        Deadline(Instant::now().checked_add(budget))
    }

    pub fn at(instant: Instant) -> Self {
        Deadline(Some(instant))
    }

    pub fn is_unbounded(&self) -> bool {
        self.0.is_none()
    }

    pub fn check(&self) -> Result<()> {
        match self.0 {
            Some(t) if Instant::now() >= t => Err(Error::Timeout),
            _ => Ok(()),
        }
    }
}

/// Polls a deadline every `GRANULE` ticks.
pub(crate) struct Ticker {
    deadline: Deadline,
    count: u32,
}

impl Ticker {
    const GRANULE: u32 = 256;

    pub(crate) fn new(deadline: Deadline) -> Self {
        Ticker { deadline, count: 0 }
    }

    #[inline]
    pub(crate) fn tick(&mut self) -> Result<()> {
        if self.deadline.is_unbounded() {
            return Ok(());
        }
        self.count += 1;
        if self.count >= Self::GRANULE {
            self.count = 0;
            self.deadline.check()?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expired_deadline_trips_within_one_granule() {
        let mut t = Ticker::new(Deadline::at(Instant::now()));
        let mut ticks = 0;
        while t.tick().is_ok() {
            ticks += 1;
        }
        assert!(ticks < Ticker::GRANULE);
        assert!(Ticker::new(Deadline::none()).tick().is_ok());
    }
}
