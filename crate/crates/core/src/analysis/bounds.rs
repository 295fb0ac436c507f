use crate::codes::{CodeSpec, Family};

use super::{binomial_sum, AnalysisError, BoundPair, ChannelModel};

/// Decoding-failure bounds of an LRFC over GF(q) with receiver overhead δ:
/// q^{−δ−1} ≤ P_f ≤ q^{−δ}/(q−1).
pub fn lrfc_bounds(q: u32, delta: u32) -> BoundPair {
    let q = f64::from(q);
    let lower = q.powf(-(f64::from(delta) + 1.0));
    let upper = (q.powf(-f64::from(delta)) / (q - 1.0)).min(1.0);
    BoundPair { lower, upper }
}

/// P(ε): probability that fewer than k of the n block-code symbols survive
/// the channel, i.e. more than n − k are erased.
pub fn prefix_loss_prob(n: usize, k: usize, ch: ChannelModel) -> f64 {
    assert!(k >= 1, "k must be positive");
    if n < k {
        return 1.0;
    }
    binomial_sum(n as u64, (n - k + 1) as u64..=n as u64, ch.eps())
}

/// Bounds of the concatenated scheme: the LRFC bounds scaled by P(ε).
/// A pure LRFC (n = 0) has P(ε) = 1.
pub fn concat_bounds(spec: &CodeSpec, delta: u32, ch: ChannelModel) -> Result<BoundPair, AnalysisError> {
    match spec.family() {
        Family::Grs { .. } | Family::Spc | Family::None => {}
        other => return Err(AnalysisError::NotMds(other.name())),
    }
    let p = prefix_loss_prob(spec.n(), spec.k(), ch);
    Ok(lrfc_bounds(spec.field().order(), delta).scaled(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::build_field;

    fn ch(eps: f64) -> ChannelModel {
        ChannelModel::new(eps).unwrap()
    }

    /// Σ_{i<k} C(n,i)(1−ε)^i ε^{n−i} with binomial coefficients from
    /// Pascal's triangle and plain products.
    fn direct_p(n: usize, k: usize, eps: f64) -> f64 {
        let mut row = vec![1.0f64];
        for _ in 0..n {
            let mut next = vec![1.0; row.len() + 1];
            for i in 1..row.len() {
                next[i] = row[i - 1] + row[i];
            }
            row = next;
        }
        (0..k).map(|i| row[i] * (1.0 - eps).powi(i as i32) * eps.powi((n - i) as i32)).sum()
    }

    #[test]
    fn lrfc_bound_values() {
        assert_eq!(lrfc_bounds(2, 0), BoundPair { lower: 0.5, upper: 1.0 });
        let b = lrfc_bounds(16, 2);
        assert!((b.lower - 1.0 / 4096.0).abs() < 1e-18);
        assert!((b.upper - 1.0 / (256.0 * 15.0)).abs() < 1e-18);
        assert!((b.lower - 2.44e-4).abs() < 1e-6 && (b.upper - 2.60e-4).abs() < 1e-6);
    }

    #[test]
    fn prefix_loss_boundaries() {
        assert_eq!(prefix_loss_prob(15, 10, ch(0.0)), 0.0);
        assert_eq!(prefix_loss_prob(15, 10, ch(1.0)), 1.0);
        assert!((prefix_loss_prob(3, 2, ch(0.5)) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn prefix_loss_matches_direct_sum() {
        for (n, k, eps) in [(15, 10, 0.05), (11, 10, 0.01), (11, 10, 0.1), (15, 10, 0.1), (40, 30, 0.2)] {
            let got = prefix_loss_prob(n, k, ch(eps));
            let want = direct_p(n, k, eps);
            assert!((got / want - 1.0).abs() < 1e-12, "{n} {k} {eps}: {got} vs {want}");
        }
        assert!((prefix_loss_prob(15, 10, ch(0.05)) - 5.2806e-5).abs() < 1e-8);
        assert!((prefix_loss_prob(11, 10, ch(0.01)) - 5.1797e-3).abs() < 1e-7);
    }

    #[test]
    fn prefix_loss_stays_accurate_in_the_far_tail() {
        // Leading term C(15,6)·ε⁶ dominates for tiny ε.
        let eps = 1e-6;
        let got = prefix_loss_prob(15, 10, ch(eps));
        assert!((got / (5005.0 * eps.powi(6)) - 1.0).abs() < 1e-4);
    }

    #[test]
    fn concat_scales_lrfc_bounds() {
        let spec = CodeSpec::grs(build_field(4).unwrap(), 15, 10).unwrap();
        for delta in 0..5 {
            assert_eq!(concat_bounds(&spec, delta, ch(1.0)).unwrap(), lrfc_bounds(16, delta));
            let c = concat_bounds(&spec, delta, ch(0.05)).unwrap();
            let l = lrfc_bounds(16, delta);
            let p = prefix_loss_prob(15, 10, ch(0.05));
            assert!((c.upper / l.upper - p).abs() < 1e-18 && (c.lower / l.lower - p).abs() < 1e-18);
        }
        let up = concat_bounds(&spec, 0, ch(0.05)).unwrap().upper;
        assert!(up / (1.0 / 15.0) < 1e-4);
        assert!(concat_bounds(&CodeSpec::hamming(3).unwrap(), 0, ch(0.1)).is_err());
        let lrfc = CodeSpec::lrfc(build_field(1).unwrap(), 10).unwrap();
        assert_eq!(concat_bounds(&lrfc, 3, ch(0.2)).unwrap(), lrfc_bounds(2, 3));
    }
}
