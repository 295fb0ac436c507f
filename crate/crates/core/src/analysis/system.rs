//! One transmitter, N independent receivers.
//!
//! The transmitter sends k + Δ symbols; a receiver that collects m of them
//! fails if m < k, or if m ≥ k and decoding with overhead m − k fails.

use crate::codes::CodeSpec;

use super::{binomial_pmf, concat_bounds, lrfc_bounds, AnalysisError, ChannelModel};

/// Which decoding-failure law is substituted for P_f.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FailureModel {
    /// Plain LRFC upper bound q^{−δ}/(q−1).
    Lrfc,
    /// Concatenated scheme, upper bound.
    ConcatUpper,
    /// Concatenated scheme, lower bound.
    ConcatLower,
    /// Decoding never fails once k symbols are in.
    Ideal,
}

#[derive(Debug, Clone)]
pub struct SystemModel {
    /// N, the number of receivers.
    pub receivers: u64,
    /// Δ, symbols sent beyond k.
    pub delta_tx: u32,
    pub spec: CodeSpec,
    pub channel: ChannelModel,
}

/// S(Δ, m): probability that a receiver collects exactly m of the k + Δ
/// transmitted symbols.
pub fn overhead_pmf(delta_tx: u32, m: usize, k: usize, ch: ChannelModel) -> f64 {
    binomial_pmf((k + delta_tx as usize) as u64, m as u64, 1.0 - ch.eps())
}

fn decoding_failure(
    spec: &CodeSpec,
    delta: u32,
    ch: ChannelModel,
    model: FailureModel,
) -> Result<f64, AnalysisError> {
    Ok(match model {
        FailureModel::Lrfc => lrfc_bounds(spec.field().order(), delta).upper,
        FailureModel::ConcatUpper => concat_bounds(spec, delta, ch)?.upper,
        FailureModel::ConcatLower => concat_bounds(spec, delta, ch)?.lower,
        FailureModel::Ideal => 0.0,
    })
}

/// P_e: failure probability of a single receiver.
pub fn receiver_failure(
    spec: &CodeSpec,
    delta_tx: u32,
    ch: ChannelModel,
    model: FailureModel,
) -> Result<f64, AnalysisError> {
    let k = spec.k();
    let total = k + delta_tx as usize;
    let mut shortfall = 0.0;
    let mut decode = 0.0;
    for m in 0..=total {
        let s = overhead_pmf(delta_tx, m, k, ch);
        if m < k {
            shortfall += s;
        } else {
            decode += s * decoding_failure(spec, (m - k) as u32, ch, model)?;
        }
    }
    Ok((shortfall + decode).min(1.0))
}

/// P_E = 1 − (1 − P_e)^N, evaluated as −expm1(N·log1p(−P_e)).
pub fn system_failure(sys: &SystemModel, model: FailureModel) -> Result<f64, AnalysisError> {
    if sys.receivers == 0 {
        return Err(AnalysisError::InvalidParameters("N must be at least 1".into()));
    }
    let pe = receiver_failure(&sys.spec, sys.delta_tx, sys.channel, model)?;
    Ok(-(sys.receivers as f64 * (-pe).ln_1p()).exp_m1())
}

/// Smallest Δ ≤ `max_delta` with P_E ≤ `target`, if any.
pub fn smallest_delta(
    spec: &CodeSpec,
    receivers: u64,
    ch: ChannelModel,
    model: FailureModel,
    target: f64,
    max_delta: u32,
) -> Result<Option<u32>, AnalysisError> {
    for delta_tx in 0..=max_delta {
        let sys = SystemModel {
            receivers,
            delta_tx,
            spec: spec.clone(),
            channel: ch,
        };
        if system_failure(&sys, model)? <= target {
            return Ok(Some(delta_tx));
        }
    }
    Ok(None)
}
