//! Monte Carlo estimation of decoding-failure and block-error rates.
//!
//! Every trial draws from its own random stream, keyed by the master seed
//! and the trial index, so results do not depend on the number of workers
//! or on the order in which trials run.

use std::time::{Duration, Instant};

use rand::distr::{Bernoulli, Distribution};
use rand::RngCore;
use rayon::prelude::*;
use thiserror::Error;

use crate::analysis::{BoundPair, ChannelModel};
use crate::codes::{lrfc_column, lrfc_columns, CodeSpec, Family};
use crate::decoder::{
    decode_ge, decode_ge_counted, decode_hybrid, decode_hybrid_counted, DecodeError,
    DecodeOutcome, DecodeReport, ReceivedSet,
};
use crate::galois::Gf;
use crate::linalg::{rank, Gf2Basis, MatrixGF};
use crate::rng::StreamKey;

/// z-score of a two-sided 95% interval.
pub const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("invalid plan: {0}")]
    InvalidPlan(String),
    #[error(transparent)]
    Decode(#[from] DecodeError),
    #[error("decoder returned a wrong source block in trial {0}")]
    WrongDecode(u64),
    #[error("worker pool: {0}")]
    Pool(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DecoderChoice {
    Ge,
    Hybrid,
}

/// Which overhead a trial fixes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Overhead {
    /// The receiver decodes from exactly m = k + δ collected symbols.
    Receiver(u32),
    /// The transmitter sends k + Δ symbols; the receiver keeps what arrives.
    Transmission(u32),
}

#[derive(Debug, Clone)]
pub struct TrialPlan {
    pub spec: CodeSpec,
    pub channel: ChannelModel,
    pub overhead: Overhead,
    pub trials: u64,
    pub seed: u64,
    pub decoder: DecoderChoice,
    /// Worker threads; 0 uses the global pool.
    pub workers: usize,
    /// Sum field-operation counts over all decodes.
    pub count_ops: bool,
}

impl TrialPlan {
    pub fn new(spec: CodeSpec, channel: ChannelModel, overhead: Overhead, trials: u64, seed: u64) -> Self {
        TrialPlan {
            spec,
            channel,
            overhead,
            trials,
            seed,
            decoder: DecoderChoice::Ge,
            workers: 0,
            count_ops: false,
        }
    }

    pub fn with_decoder(mut self, decoder: DecoderChoice) -> Self {
        self.decoder = decoder;
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn with_op_counting(mut self, on: bool) -> Self {
        self.count_ops = on;
        self
    }

    pub fn validate(&self) -> Result<(), SimError> {
        if self.trials == 0 {
            return Err(SimError::InvalidPlan("trials must be at least 1".into()));
        }
        if self.decoder == DecoderChoice::Hybrid && !matches!(self.spec.family(), Family::Grs { .. }) {
            return Err(SimError::InvalidPlan(format!(
                "hybrid decoding needs a GRS code, got {}",
                self.spec.family().name()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub trials: u64,
    pub failures: u64,
    pub p_hat: f64,
    pub ci95: (f64, f64),
    pub wall_time: Duration,
    pub field_ops: Option<u64>,
}

impl SimResult {
    fn new(trials: u64, failures: u64, wall_time: Duration, field_ops: Option<u64>) -> Self {
        SimResult {
            trials,
            failures,
            p_hat: failures as f64 / trials as f64,
            ci95: wilson_interval(failures, trials, Z95),
            wall_time,
            field_ops,
        }
    }

    /// Wilson score interval at an arbitrary z.
    pub fn wilson(&self, z: f64) -> (f64, f64) {
        wilson_interval(self.failures, self.trials, z)
    }

    /// Whether the z-level interval meets the band [lower, upper].
    pub fn overlaps(&self, band: BoundPair, z: f64) -> bool {
        let (lo, hi) = self.wilson(z);
        lo <= band.upper && hi >= band.lower
    }
}

/// Wilson score interval for `failures` out of `trials`.
pub fn wilson_interval(failures: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = failures as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0).min(p), (centre + half).min(1.0).max(p))
}

fn erasure_law(ch: ChannelModel) -> Bernoulli {
    Bernoulli::new(ch.eps()).expect("channel probability validated")
}

fn random_source(spec: &CodeSpec, rng: &mut impl RngCore) -> Vec<Gf> {
    let mask = spec.field().mask();
    let mut bytes = vec![0u8; spec.k()];
    rng.fill_bytes(&mut bytes);
    bytes.into_iter().map(|b| Gf(b & mask)).collect()
}

fn decode(r: &ReceivedSet, plan: &TrialPlan, ops: &mut u64) -> Result<DecodeReport, DecodeError> {
    let rep = match (plan.decoder, plan.count_ops) {
        (DecoderChoice::Ge, false) => decode_ge(r),
        (DecoderChoice::Ge, true) => decode_ge_counted(r),
        (DecoderChoice::Hybrid, false) => decode_hybrid(r),
        (DecoderChoice::Hybrid, true) => decode_hybrid_counted(r),
    }?;
    *ops += rep.field_ops.unwrap_or(0);
    Ok(rep)
}

/// Runs one trial; `true` means the receiver decoded.
fn run_trial(plan: &TrialPlan, key: &StreamKey, t: u64, ops: &mut u64) -> Result<bool, SimError> {
    let spec = &plan.spec;
    let (n, k) = (spec.n(), spec.k());
    let field = spec.field();
    let erased = erasure_law(plan.channel);
    let mut rng = key.stream(t);

    let (mds, lrfc): (Vec<usize>, Vec<usize>) = match plan.overhead {
        Overhead::Receiver(delta) => {
            let m = k + delta as usize;
            let mut mds: Vec<usize> = (1..=n).filter(|_| !erased.sample(&mut rng)).collect();
            mds.truncate(m);
            let top_up = m - mds.len();
            (mds, (n + 1..=n + top_up).collect())
        }
        Overhead::Transmission(delta) => {
            let sent = k + delta as usize;
            let got: Vec<usize> = (1..=sent).filter(|_| !erased.sample(&mut rng)).collect();
            let split = got.partition_point(|&j| j <= n);
            let (a, b) = got.split_at(split);
            (a.to_vec(), b.to_vec())
        }
    };
    if mds.len() + lrfc.len() < k {
        return Ok(false);
    }

    let lrfc_seed = rng.next_u64();
    let u = random_source(spec, &mut rng);
    let lrfc_key = StreamKey::new(lrfc_seed);
    let block = spec.generator().vec_mul(&u).expect("generator has k rows");
    let values = mds
        .iter()
        .map(|&j| block[j - 1])
        .chain(lrfc.iter().map(|&j| field.dot(&u, &lrfc_column(field, k, &lrfc_key, j))))
        .collect();
    let received = ReceivedSet::new(spec, mds, lrfc, values, lrfc_seed)?;
    match decode(&received, plan, ops)?.outcome {
        DecodeOutcome::Success { u: got } if got == u => Ok(true),
        DecodeOutcome::Success { .. } => Err(SimError::WrongDecode(t)),
        DecodeOutcome::Failure { .. } => Ok(false),
    }
}

/// Counts failures of `trial` over indices 0..trials on `workers` threads.
fn count_failures<F>(workers: usize, trials: u64, trial: F) -> Result<(u64, u64), SimError>
where
    F: Fn(u64, &mut u64) -> Result<bool, SimError> + Sync,
{
    const CHUNK: u64 = 1 << 12;
    let chunks = trials.div_ceil(CHUNK);
    let job = || {
        (0..chunks)
            .into_par_iter()
            .map(|c| -> Result<(u64, u64), SimError> {
                let (mut fails, mut ops) = (0, 0);
                for t in c * CHUNK..((c + 1) * CHUNK).min(trials) {
                    fails += u64::from(!trial(t, &mut ops)?);
                }
                Ok((fails, ops))
            })
            .try_reduce(|| (0, 0), |a, b| Ok((a.0 + b.0, a.1 + b.1)))
    };
    in_pool(workers, job)?
}

/// Runs `job` on a dedicated pool of `workers` threads, or on the global
/// pool when `workers` is 0.
fn in_pool<T: Send>(workers: usize, job: impl FnOnce() -> T + Send) -> Result<T, SimError> {
    if workers == 0 {
        return Ok(job());
    }
    Ok(rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| SimError::Pool(e.to_string()))?
        .install(job))
}

/// One trial of `plan` (index `trial_index`); `true` on successful decoding.
pub fn pf_trial(plan: &TrialPlan, trial_index: u64) -> Result<bool, SimError> {
    plan.validate()?;
    run_trial(plan, &StreamKey::new(plan.seed), trial_index, &mut 0)
}

fn estimate(plan: &TrialPlan) -> Result<SimResult, SimError> {
    plan.validate()?;
    let start = Instant::now();
    let key = StreamKey::new(plan.seed);
    let (failures, ops) = count_failures(plan.workers, plan.trials, |t, ops| run_trial(plan, &key, t, ops))?;
    Ok(SimResult::new(
        plan.trials,
        failures,
        start.elapsed(),
        plan.count_ops.then_some(ops),
    ))
}

/// P_f(δ, ε) from a receiver-overhead plan.
pub fn estimate_pf(plan: &TrialPlan) -> Result<SimResult, SimError> {
    if !matches!(plan.overhead, Overhead::Receiver(_)) {
        return Err(SimError::InvalidPlan("estimate_pf needs a receiver overhead δ".into()));
    }
    estimate(plan)
}

/// P_e(Δ, ε), the single-receiver failure rate for a transmission overhead.
pub fn estimate_pe(plan: &TrialPlan) -> Result<SimResult, SimError> {
    if !matches!(plan.overhead, Overhead::Transmission(_)) {
        return Err(SimError::InvalidPlan("estimate_pe needs a transmission overhead Δ".into()));
    }
    estimate(plan)
}

/// Parameters of a fixed-length ensemble experiment.
#[derive(Debug, Clone)]
pub struct FiniteRatePlan {
    pub spec: CodeSpec,
    /// Total length l ≥ n.
    pub length: usize,
    pub channel: ChannelModel,
    pub realizations: u64,
    pub trials_per: u64,
    pub seed: u64,
    pub workers: usize,
}

/// Block-error rate of [G′ | G″] over random k × (l − n) fountain parts
/// G″, averaged over realizations. A block error is rank < k among the
/// surviving columns.
pub fn estimate_finite_rate_pb(plan: &FiniteRatePlan) -> Result<SimResult, SimError> {
    finite_rate(plan, true)
}

fn finite_rate(plan: &FiniteRatePlan, packed_gf2: bool) -> Result<SimResult, SimError> {
    let spec = &plan.spec;
    let (n, k, l) = (spec.n(), spec.k(), plan.length);
    if l < n {
        return Err(SimError::InvalidPlan(format!("length {l} below block length {n}")));
    }
    if plan.realizations == 0 || plan.trials_per == 0 {
        return Err(SimError::InvalidPlan("need at least one realization and one trial".into()));
    }
    let start = Instant::now();
    let key = StreamKey::new(plan.seed);
    let g_key = StreamKey::new(key.child_seed(0));
    let t_key = StreamKey::new(key.child_seed(1));
    let erased = erasure_law(plan.channel);
    let binary = packed_gf2 && spec.field().order() == 2 && k <= 64;

    let realization = |r: u64| -> u64 {
        let g2 = lrfc_columns(spec.field(), k, l - n, g_key.child_seed(r), n + 1);
        let full = MatrixGF::from_fn(spec.field(), k, l, |row, c| {
            if c < n {
                spec.generator().get(row, c)
            } else {
                g2.get(row, c - n)
            }
        });
        let packed: Vec<u64> = (0..l)
            .map(|c| (0..k).fold(0u64, |acc, row| acc | (u64::from(full.get(row, c).0) << row)))
            .collect();
        let mut failures = 0;
        let mut basis = Gf2Basis::new();
        for t in 0..plan.trials_per {
            let mut rng = t_key.stream(r * plan.trials_per + t);
            let kept: Vec<usize> = (0..l).filter(|_| !erased.sample(&mut rng)).collect();
            let ok = if kept.len() < k {
                false
            } else if binary {
                basis.clear();
                kept.iter().any(|&c| basis.insert(packed[c]) && basis.rank() == k)
            } else {
                rank(full.select_columns(&kept)) == k
            };
            failures += u64::from(!ok);
        }
        failures
    };

    let failures = in_pool(plan.workers, || {
        (0..plan.realizations).into_par_iter().map(realization).sum::<u64>()
    })?;
    Ok(SimResult::new(
        plan.realizations * plan.trials_per,
        failures,
        start.elapsed(),
        None,
    ))
}
