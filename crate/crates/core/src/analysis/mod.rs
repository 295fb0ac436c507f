//! Closed-form failure probabilities and weight-enumerator bounds.

mod block;
mod bounds;
mod system;
mod wef;

pub use block::{berlekamp_bound_pb, singleton_bound_pb, union_bound_pb, UnionBound};
pub use bounds::{concat_bounds, lrfc_bounds, prefix_loss_prob};
pub use system::{
    overhead_pmf, receiver_failure, smallest_delta, system_failure, FailureModel, SystemModel,
};
pub use wef::{
    concat_avg_wef, hamming_cowef, lrfc_avg_cowef, lrfc_avg_wef, spc_cowef, BlockCowef,
    WeightSpectrum,
};

use statrs::function::factorial::ln_binomial;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("erasure probability {0} outside [0, 1]")]
    InvalidProbability(String),
    #[error("{0}")]
    InvalidParameters(String),
    #[error("code family {0} has no MDS bound")]
    NotMds(&'static str),
    #[error("weight enumerator expansion produced {0}")]
    Internal(String),
}

/// Lower and upper bound on a probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundPair {
    pub lower: f64,
    pub upper: f64,
}

impl BoundPair {
    pub fn scaled(self, factor: f64) -> BoundPair {
        BoundPair {
            lower: self.lower * factor,
            upper: self.upper * factor,
        }
    }

    pub fn contains(&self, p: f64) -> bool {
        self.lower <= p && p <= self.upper
    }
}

/// Memoryless erasure channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelModel {
    eps: f64,
}

impl ChannelModel {
    pub fn new(eps: f64) -> Result<Self, AnalysisError> {
        if !(0.0..=1.0).contains(&eps) {
            return Err(AnalysisError::InvalidProbability(eps.to_string()));
        }
        Ok(ChannelModel { eps })
    }

    /// Erasure probability ε.
    pub fn eps(&self) -> f64 {
        self.eps
    }
}

/// C(n, i) p^i (1−p)^{n−i}, built in the log domain.
pub(crate) fn binomial_pmf(n: u64, i: u64, p: f64) -> f64 {
    if i > n {
        return 0.0;
    }
    if p <= 0.0 {
        return if i == 0 { 1.0 } else { 0.0 };
    }
    if p >= 1.0 {
        return if i == n { 1.0 } else { 0.0 };
    }
    (ln_binomial(n, i) + i as f64 * p.ln() + (n - i) as f64 * (-p).ln_1p()).exp()
}

/// Σ_{i ∈ range} C(n, i) p^i (1−p)^{n−i}. All terms are positive, so the
/// requested tail is summed directly and never formed as 1 − (other tail).
pub(crate) fn binomial_sum(n: u64, range: std::ops::RangeInclusive<u64>, p: f64) -> f64 {
    let (lo, hi) = (*range.start(), (*range.end()).min(n));
    if lo > hi {
        return 0.0;
    }
    // Smallest terms first.
    let mut terms: Vec<f64> = (lo..=hi).map(|i| binomial_pmf(n, i, p)).collect();
    terms.sort_by(f64::total_cmp);
    terms.iter().sum::<f64>().min(1.0)
}
