//! Maximum-likelihood erasure decoding.
//!
//! The receiver holds m symbols with 1-based indices J. Stacking the
//! matching columns of G as rows gives the m × k system G̃ᵀ·uᵀ = yᵀ, which
//! is solvable iff rank(G̃ᵀ) = k. [`decode_ge`] solves it by plain Gaussian
//! elimination and serves as the reference. [`decode_hybrid`] exploits the
//! Vandermonde rows contributed by a GRS prefix: with m′ received GRS
//! symbols and m″ LRFC symbols,
//!
//! ```text
//!   G̃ᵀ = | V  A |   m′ rows        M·G̃ᵀ = | I  A′ |      A′ = V⁻¹A
//!        | B  C |   m″ rows               | B  C  |
//! ```
//!
//! where V is the m′ × m′ Vandermonde block on the received nodes. Adding
//! B-multiples of the top rows zeroes B and leaves C′ = C − B·A′, so only
//! the (k − m′)-column block C′ needs Gaussian elimination; the first m′
//! unknowns then follow by back-substitution.

use thiserror::Error;

use crate::codes::{lrfc_column, CodeSpec, EncodedStream};
use crate::galois::Gf;
use crate::linalg::{
    ge_solve_counted, LinalgError, MatrixGF, SolveOutcome, VandermondeFactors, VandermondeSpec,
};
use crate::ops::OpCounter;
use crate::rng::StreamKey;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecodeError {
    #[error("malformed received set: {0}")]
    Malformed(String),
    #[error("hybrid decoding needs a GRS code, got family {0}")]
    UnsupportedFamily(&'static str),
    #[error("received values are inconsistent with every source block")]
    Inconsistent,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Symbols available at the receiver.
#[derive(Debug, Clone)]
pub struct ReceivedSet<'a> {
    spec: &'a CodeSpec,
    mds_indices: Vec<usize>,
    lrfc_indices: Vec<usize>,
    values: Vec<Gf>,
    lrfc_seed: u64,
}

impl<'a> ReceivedSet<'a> {
    /// `values` lists the block-code symbols first, then the LRFC symbols,
    /// each in the order of its index list.
    pub fn new(
        spec: &'a CodeSpec,
        mds_indices: Vec<usize>,
        lrfc_indices: Vec<usize>,
        values: Vec<Gf>,
        lrfc_seed: u64,
    ) -> Result<Self, DecodeError> {
        let n = spec.n();
        let increasing = |v: &[usize]| v.windows(2).all(|w| w[0] < w[1]);
        if !increasing(&mds_indices) || !increasing(&lrfc_indices) {
            return Err(DecodeError::Malformed(
                "indices must be strictly increasing within each part".into(),
            ));
        }
        if let Some(&j) = mds_indices.iter().find(|&&j| j == 0 || j > n) {
            return Err(DecodeError::Malformed(format!(
                "block-code index {j} outside 1..={n}"
            )));
        }
        if let Some(&j) = lrfc_indices.iter().find(|&&j| j <= n) {
            return Err(DecodeError::Malformed(format!(
                "LRFC index {j} must exceed n={n}"
            )));
        }
        let m = mds_indices.len() + lrfc_indices.len();
        if values.len() != m {
            return Err(DecodeError::Malformed(format!(
                "{} values for {m} indices",
                values.len()
            )));
        }
        if m == 0 {
            return Err(DecodeError::Malformed("no symbols received".into()));
        }
        let order = spec.field().order();
        if let Some(v) = values.iter().find(|v| u32::from(v.0) >= order) {
            return Err(DecodeError::Malformed(format!(
                "value {} is not in GF({order})",
                v.0
            )));
        }
        Ok(ReceivedSet {
            spec,
            mds_indices,
            lrfc_indices,
            values,
            lrfc_seed,
        })
    }

    /// Picks the symbols at `indices` (any order, no repeats) from a stream.
    pub fn from_stream(
        stream: &'a EncodedStream,
        indices: impl IntoIterator<Item = usize>,
    ) -> Result<Self, DecodeError> {
        let mut idx: Vec<usize> = indices.into_iter().collect();
        idx.sort_unstable();
        if idx.first() == Some(&0) {
            return Err(DecodeError::Malformed("symbol indices are 1-based".into()));
        }
        let split = idx.partition_point(|&j| j <= stream.spec().n());
        let values = idx.iter().map(|&j| stream.symbol(j)).collect();
        let lrfc = idx.split_off(split);
        Self::new(stream.spec(), idx, lrfc, values, stream.seed())
    }

    pub fn spec(&self) -> &'a CodeSpec {
        self.spec
    }

    pub fn mds_indices(&self) -> &[usize] {
        &self.mds_indices
    }

    pub fn lrfc_indices(&self) -> &[usize] {
        &self.lrfc_indices
    }

    pub fn values(&self) -> &[Gf] {
        &self.values
    }

    pub fn lrfc_seed(&self) -> u64 {
        self.lrfc_seed
    }

    /// m, the number of received symbols.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// m′, the number of received block-code symbols.
    pub fn mds_count(&self) -> usize {
        self.mds_indices.len()
    }

    /// The m × k matrix G̃ᵀ, one row per received symbol.
    pub fn system_matrix(&self) -> MatrixGF {
        let spec = self.spec;
        let k = spec.k();
        let key = StreamKey::new(self.lrfc_seed);
        let mut out = MatrixGF::zeros(spec.field(), self.len(), k);
        let g = spec.generator();
        for (r, &j) in self.mds_indices.iter().enumerate() {
            for (c, v) in out.row_mut(r).iter_mut().enumerate() {
                *v = g.get(c, j - 1);
            }
        }
        let off = self.mds_count();
        for (r, &j) in self.lrfc_indices.iter().enumerate() {
            out.row_mut(off + r)
                .copy_from_slice(&lrfc_column(spec.field(), k, &key, j));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecodeOutcome {
    Success { u: Vec<Gf> },
    /// k − rank(G̃ᵀ) > 0.
    Failure { rank_deficit: usize },
}

impl DecodeOutcome {
    pub fn is_success(&self) -> bool {
        matches!(self, DecodeOutcome::Success { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DecodePath {
    /// m′ ≥ k: Vandermonde solve on k block-code symbols.
    MdsOnly,
    /// 0 < m′ < k: Vandermonde reduction plus elimination on C′.
    Hybrid,
    /// Plain Gaussian elimination on the whole system.
    GeOnly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeReport {
    pub outcome: DecodeOutcome,
    pub path: DecodePath,
    /// Field operations spent, when counting was requested.
    pub field_ops: Option<u64>,
}

/// Plain Gaussian elimination on G̃ᵀ.
pub fn decode_ge(r: &ReceivedSet) -> Result<DecodeReport, DecodeError> {
    run(r, OpCounter::disabled(), ge)
}

/// [`decode_ge`] with field-operation counting.
pub fn decode_ge_counted(r: &ReceivedSet) -> Result<DecodeReport, DecodeError> {
    run(r, OpCounter::enabled(), ge)
}

/// Vandermonde-assisted decoding for GRS-prefixed codes. Same outcome as
/// [`decode_ge`] on every input.
pub fn decode_hybrid(r: &ReceivedSet) -> Result<DecodeReport, DecodeError> {
    run(r, OpCounter::disabled(), hybrid)
}

/// [`decode_hybrid`] with field-operation counting.
pub fn decode_hybrid_counted(r: &ReceivedSet) -> Result<DecodeReport, DecodeError> {
    run(r, OpCounter::enabled(), hybrid)
}

type Decoder = fn(&ReceivedSet, &mut OpCounter) -> Result<(DecodeOutcome, DecodePath), DecodeError>;

fn run(r: &ReceivedSet, mut ops: OpCounter, f: Decoder) -> Result<DecodeReport, DecodeError> {
    let (outcome, path) = f(r, &mut ops)?;
    Ok(DecodeReport {
        outcome,
        path,
        field_ops: ops.count(),
    })
}

fn from_solve(
    res: Result<SolveOutcome, LinalgError>,
    unknowns: usize,
) -> Result<Result<Vec<Gf>, usize>, DecodeError> {
    match res {
        Ok(SolveOutcome::Solved { solution, .. }) => Ok(Ok(solution)),
        Ok(SolveOutcome::RankDeficient { rank }) => Ok(Err(unknowns - rank)),
        Err(LinalgError::Inconsistent) => Err(DecodeError::Inconsistent),
        Err(e) => Err(e.into()),
    }
}

fn ge(r: &ReceivedSet, ops: &mut OpCounter) -> Result<(DecodeOutcome, DecodePath), DecodeError> {
    let k = r.spec.k();
    let outcome = match from_solve(ge_solve_counted(r.system_matrix(), r.values.clone(), ops), k)? {
        Ok(u) => DecodeOutcome::Success { u },
        Err(rank_deficit) => DecodeOutcome::Failure { rank_deficit },
    };
    Ok((outcome, DecodePath::GeOnly))
}

fn hybrid(r: &ReceivedSet, ops: &mut OpCounter) -> Result<(DecodeOutcome, DecodePath), DecodeError> {
    let spec = r.spec;
    let betas = spec
        .betas()
        .ok_or_else(|| DecodeError::UnsupportedFamily(spec.family().name()))?;
    let field = spec.field();
    let k = spec.k();
    let mp = r.mds_count();
    if mp == 0 {
        return ge(r, ops);
    }

    let used = mp.min(k);
    let nodes: Vec<Gf> = r.mds_indices[..used].iter().map(|&j| betas[j - 1]).collect();
    let vs = VandermondeSpec::new(field, nodes)?;
    let factors = VandermondeFactors::new_counted(&vs, ops);
    let nodes = vs.nodes();
    let mut y_top = r.values[..used].to_vec();
    factors.solve_in_place(&mut y_top, ops);

    if mp >= k {
        // Any k GRS symbols determine u; the remaining ones are only checked.
        let u = y_top;
        let key = StreamKey::new(r.lrfc_seed);
        let g = spec.generator();
        let extra_mds = r.mds_indices[k..].iter().map(|&j| g.column(j - 1));
        let extra_lrfc = r.lrfc_indices.iter().map(|&j| lrfc_column(field, k, &key, j));
        for (row, &y) in extra_mds.chain(extra_lrfc).zip(&r.values[k..]) {
            ops.add(2 * k as u64);
            if field.dot(&row, &u) != y {
                return Err(DecodeError::Inconsistent);
            }
        }
        return Ok((DecodeOutcome::Success { u }, DecodePath::MdsOnly));
    }

    // A′ = V⁻¹·A, column by column; column c of A holds β^{m′+c}.
    let s = k - mp;
    let mut a_prime = MatrixGF::zeros(field, mp, s);
    let mut power: Vec<Gf> = nodes.iter().map(|&b| field.pow(b, mp as u64)).collect();
    let mut col = vec![Gf::ZERO; mp];
    for c in 0..s {
        col.copy_from_slice(&power);
        factors.solve_in_place(&mut col, ops);
        for (h, &v) in col.iter().enumerate() {
            a_prime.set(h, c, v);
        }
        for (p, &b) in power.iter_mut().zip(nodes) {
            *p = field.mul(*p, b);
        }
    }

    // C′ = C − B·A′ and y″ = y_bot − B·y′.
    let key = StreamKey::new(r.lrfc_seed);
    let mpp = r.lrfc_indices.len();
    let mut c_prime = MatrixGF::zeros(field, mpp, s);
    let mut rhs = r.values[mp..].to_vec();
    for (row, &j) in r.lrfc_indices.iter().enumerate() {
        let g = lrfc_column(field, k, &key, j);
        let (b, c) = g.split_at(mp);
        let out = c_prime.row_mut(row);
        out.copy_from_slice(c);
        for (h, &bh) in b.iter().enumerate() {
            if bh.is_zero() {
                continue;
            }
            field.axpy(out, bh, a_prime.row(h));
            rhs[row] -= field.mul(bh, y_top[h]);
            ops.add(2 * s as u64 + 2);
        }
    }

    let u_bot = match from_solve(ge_solve_counted(c_prime, rhs, ops), s)? {
        Ok(u) => u,
        Err(rank_deficit) => return Ok((DecodeOutcome::Failure { rank_deficit }, DecodePath::Hybrid)),
    };

    // u_top = y′ − A′·u_bot.
    let mut u = y_top;
    for (h, uh) in u.iter_mut().enumerate() {
        let row = a_prime.row(h);
        for (&a, &x) in row.iter().zip(&u_bot) {
            if !x.is_zero() {
                *uh -= field.mul(a, x);
                ops.add(2);
            }
        }
    }
    u.extend(u_bot);
    Ok((DecodeOutcome::Success { u }, DecodePath::Hybrid))
}
