//! Block-error bounds for fixed-length use over the erasure channel.

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::{binomial_pmf, binomial_sum, ChannelModel, WeightSpectrum};

/// Block error probability of an (l, k) MDS code: more than l − k erasures.
pub fn singleton_bound_pb(l: usize, k: usize, ch: ChannelModel) -> f64 {
    assert!(k <= l, "need k <= l");
    binomial_sum(l as u64, (l - k + 1) as u64..=l as u64, ch.eps())
}

/// Singleton term plus Σ_{e=1}^{l−k} C(l,e) ε^e (1−ε)^{l−e} 2^{−(l−k−e)}.
pub fn berlekamp_bound_pb(l: usize, k: usize, ch: ChannelModel) -> f64 {
    let tail: f64 = (1..=l - k)
        .map(|e| binomial_pmf(l as u64, e as u64, ch.eps()) * 2f64.powi(-((l - k - e) as i32)))
        .sum();
    (singleton_bound_pb(l, k, ch) + tail).min(1.0)
}

/// Union bound on the ensemble-average block error probability.
///
/// For each erasure count e ≤ l − k the conditional term
/// min{1, Σ_{w=1}^{e} C(e,w)·A_w/C(l,w)} does not depend on ε; it is
/// computed once in exact arithmetic, and only the outer binomial mixture
/// is evaluated per channel.
#[derive(Debug, Clone)]
pub struct UnionBound {
    l: usize,
    k: usize,
    /// Conditional error bound for e = 0..=l−k.
    conditional: Vec<f64>,
}

impl UnionBound {
    pub fn new(spec: &WeightSpectrum) -> Self {
        let (l, k) = (spec.l(), spec.k());
        assert!(k <= l, "spectrum dimension exceeds its length");
        let ratios: Vec<BigRational> = spec
            .coeffs()
            .iter()
            .enumerate()
            .map(|(w, a)| a / BigRational::from_integer(binomial(BigInt::from(l), BigInt::from(w))))
            .collect();
        let one = BigRational::one();
        let mut conditional = vec![0.0; l - k + 1];
        for e in 1..=l - k {
            let mut sum = BigRational::zero();
            for (w, r) in ratios.iter().enumerate().take(e + 1).skip(1) {
                if !r.is_zero() {
                    sum += r * BigRational::from_integer(binomial(BigInt::from(e), BigInt::from(w)));
                }
            }
            if sum >= one {
                // The sum only grows with e.
                conditional[e..].fill(1.0);
                break;
            }
            conditional[e] = sum.to_f64().unwrap_or(1.0);
        }
        UnionBound { l, k, conditional }
    }

    /// min{1, Σ_w C(e,w)·A_w/C(l,w)} for e erasures (e ≤ l − k).
    pub fn conditional(&self, e: usize) -> f64 {
        self.conditional[e]
    }

    pub fn eval(&self, ch: ChannelModel) -> f64 {
        let l = self.l as u64;
        let mut terms: Vec<f64> = (1..=self.l - self.k)
            .map(|e| binomial_pmf(l, e as u64, ch.eps()) * self.conditional[e])
            .collect();
        terms.sort_by(f64::total_cmp);
        (singleton_bound_pb(self.l, self.k, ch) + terms.iter().sum::<f64>()).min(1.0)
    }
}

/// Union bound for a single channel; see [`UnionBound`] for grids.
pub fn union_bound_pb(spec: &WeightSpectrum, ch: ChannelModel) -> f64 {
    UnionBound::new(spec).eval(ch)
}
