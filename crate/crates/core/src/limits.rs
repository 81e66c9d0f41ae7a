use crate::error::{Error, Result};

/// Default number of candidate evaluations a single enumeration may spend.
pub const DEFAULT_CANDIDATE_BUDGET: u64 = 1 << 24;

/// Largest cube dimension any oracle in this crate answers.
pub const MAX_DIM: usize = 8;

/// Resource caps threaded through every exhaustive search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Candidate maps (or oracle queries, for pruned searches) per enumeration.
    pub candidates: u64,
    /// Largest ground set materialized by constructions.
    pub ground: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            candidates: DEFAULT_CANDIDATE_BUDGET,
            ground: 1 << 12,
        }
    }
}

impl Limits {
    pub fn with_candidates(candidates: u64) -> Self {
        Limits {
            candidates,
            ..Limits::default()
        }
    }

    pub(crate) fn counter(&self, what: &'static str) -> Counter {
        Counter {
            used: 0,
            limit: self.candidates,
            what,
            dim: None,
        }
    }

    pub(crate) fn check_ground(&self, size: u128, what: &str) -> Result<()> {
        if size > self.ground as u128 {
            return Err(Error::ResourceLimit {
                what: format!("{what}: ground size {size}"),
                budget: self.ground as u64,
                dim: None,
            });
        }
        Ok(())
    }
}

#[derive(Debug)]
pub(crate) struct Counter {
    used: u64,
    limit: u64,
    what: &'static str,
    dim: Option<usize>,
}

impl Counter {
    pub(crate) fn at_dim(mut self, dim: usize) -> Self {
        self.dim = Some(dim);
        self
    }

    #[inline]
    pub(crate) fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.limit {
            return Err(Error::ResourceLimit {
                what: self.what.to_string(),
                budget: self.limit,
                dim: self.dim,
            });
        }
        Ok(())
    }

    /// Add the queries spent by a sub-search to this counter.
    pub(crate) fn absorb(&mut self, other: &Counter) -> Result<()> {
        self.used += other.used;
        if self.used > self.limit {
            return Err(Error::ResourceLimit {
                what: self.what.to_string(),
                budget: self.limit,
                dim: other.dim.or(self.dim),
            });
        }
        Ok(())
    }

    pub(crate) fn used(&self) -> u64 {
        self.used
    }
}
