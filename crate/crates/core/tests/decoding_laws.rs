use concat_fountain::analysis::{concat_bounds, lrfc_bounds, ChannelModel};
use concat_fountain::codes::{encode_stream, CodeSpec, SourceBlock};
use concat_fountain::decoder::{
    decode_ge, decode_ge_counted, decode_hybrid, decode_hybrid_counted, DecodePath, ReceivedSet,
};
use concat_fountain::galois::{build_field, Gf};
use concat_fountain::rng::StreamKey;
use concat_fountain::sim::{estimate_pe, estimate_pf, DecoderChoice, Overhead, TrialPlan};
use rand::seq::index::sample;
use rand::Rng;

fn ch(eps: f64) -> ChannelModel {
    ChannelModel::new(eps).unwrap()
}

/// P[rank < s] for a uniform (s + δ) × s matrix over GF(q):
/// 1 − Π_{i=δ+1}^{s+δ} (1 − q^{−i}).
fn rank_deficient_prob(q: f64, s: u32, delta: u32) -> f64 {
    1.0 - (delta + 1..=s + delta).map(|i| 1.0 - q.powi(-(i as i32))).product::<f64>()
}

/// Failure rate over `trials` decodes with m′ block symbols and k − m′ + δ
/// fountain symbols.
fn failure_rate(spec: &CodeSpec, mp: usize, delta: usize, trials: u64, hybrid: bool) -> f64 {
    let (n, k) = (spec.n(), spec.k());
    let q = spec.field().order();
    let mut rng = StreamKey::new(77).stream(mp as u64);
    let mut failures = 0u64;
    for t in 0..trials {
        let u: Vec<Gf> = (0..k).map(|_| Gf(rng.random_range(0..q) as u8)).collect();
        let s = encode_stream(&SourceBlock::new(spec, u).unwrap(), spec.clone(), t);
        let mut idx: Vec<usize> = sample(&mut rng, n, mp).into_iter().map(|j| j + 1).collect();
        idx.extend(n + 1..=n + k - mp + delta);
        let r = ReceivedSet::from_stream(&s, idx).unwrap();
        let rep = if hybrid { decode_hybrid(&r) } else { decode_ge(&r) }.unwrap();
        failures += u64::from(!rep.outcome.is_success());
    }
    failures as f64 / trials as f64
}

fn assert_near(p: f64, want: f64, trials: u64, z: f64) {
    let sigma = (want * (1.0 - want) / trials as f64).sqrt();
    assert!((p - want).abs() <= z * sigma, "{p} vs {want} (σ={sigma})");
}

#[test]
fn failure_given_partial_prefix_follows_the_random_matrix_law() {
    // With m′ < k block symbols the residual system on k − m′ unknowns is a
    // uniform matrix with δ excess rows.
    let grs = CodeSpec::grs(build_field(4).unwrap(), 15, 10).unwrap();
    for (mp, delta) in [(7, 0), (7, 1), (3, 0)] {
        let trials = 60_000;
        let p = failure_rate(&grs, mp, delta, trials, true);
        assert_near(p, rank_deficient_prob(16.0, (10 - mp) as u32, delta as u32), trials, 4.0);
    }
    let spc = CodeSpec::spc(10).unwrap();
    for (mp, delta) in [(9, 0), (9, 2), (5, 1)] {
        let trials = 40_000;
        let p = failure_rate(&spc, mp, delta, trials, false);
        assert_near(p, rank_deficient_prob(2.0, (10 - mp) as u32, delta as u32), trials, 4.0);
    }
}

#[test]
fn full_prefix_never_fails() {
    let grs = CodeSpec::grs(build_field(4).unwrap(), 15, 10).unwrap();
    assert_eq!(failure_rate(&grs, 10, 0, 2_000, true), 0.0);
    assert_eq!(failure_rate(&grs, 12, 0, 2_000, true), 0.0);
    assert_eq!(failure_rate(&CodeSpec::spc(10).unwrap(), 10, 0, 2_000, false), 0.0);
}

#[test]
fn hybrid_spends_fewer_operations_than_elimination_for_large_k() {
    let field = build_field(8).unwrap();
    let mut rng = StreamKey::new(3).stream(0);
    for k in [32usize, 64] {
        let spec = CodeSpec::grs(field, 255, k).unwrap();
        for mp in [k / 4, k / 2, 3 * k / 4, k] {
            let u: Vec<Gf> = (0..k).map(|_| Gf(rng.random())).collect();
            let s = encode_stream(&SourceBlock::new(&spec, u).unwrap(), spec.clone(), k as u64);
            let mut idx: Vec<usize> = sample(&mut rng, 255, mp).into_iter().map(|j| j + 1).collect();
            idx.extend(256..256 + k - mp + 2);
            let r = ReceivedSet::from_stream(&s, idx).unwrap();
            let h = decode_hybrid_counted(&r).unwrap();
            let g = decode_ge_counted(&r).unwrap();
            assert_eq!(h.outcome, g.outcome);
            let (ho, go) = (h.field_ops.unwrap(), g.field_ops.unwrap());
            assert!(ho < go, "k={k} m′={mp}: hybrid {ho} vs GE {go}");
            let want = if mp >= k { DecodePath::MdsOnly } else { DecodePath::Hybrid };
            assert_eq!(h.path, want);
        }
    }
}

#[test]
fn simulated_failure_counts_match_across_decoders() {
    let spec = CodeSpec::grs(build_field(8).unwrap(), 30, 20).unwrap();
    for (eps, d) in [(0.4, 0), (0.5, 1), (1.0, 0)] {
        let plan = TrialPlan::new(spec.clone(), ch(eps), Overhead::Receiver(d), 20_000, 8);
        let ge = estimate_pf(&plan).unwrap();
        let hy = estimate_pf(&plan.clone().with_decoder(DecoderChoice::Hybrid)).unwrap();
        assert_eq!(ge.failures, hy.failures);
    }
}

#[test]
fn pure_lrfc_over_gf16_sits_in_its_band() {
    let spec = CodeSpec::lrfc(build_field(4).unwrap(), 20).unwrap();
    let plan = TrialPlan::new(spec, ch(0.3), Overhead::Receiver(1), 1_000_000, 4);
    let r = estimate_pf(&plan).unwrap();
    let band = lrfc_bounds(16, 1);
    assert!(r.overlaps(band, 3.0), "{:?} vs {band:?}", r.wilson(3.0));
    assert_near(r.p_hat, rank_deficient_prob(16.0, 20, 1), r.trials, 4.0);
}

#[test]
fn erasing_everything_reduces_to_the_plain_fountain() {
    let spec = CodeSpec::grs(build_field(4).unwrap(), 15, 10).unwrap();
    for d in 0..3 {
        let plan = TrialPlan::new(spec.clone(), ch(1.0), Overhead::Receiver(d), 200_000, 12);
        let r = estimate_pf(&plan).unwrap();
        let (b, plain) = (concat_bounds(&spec, d, ch(1.0)).unwrap(), lrfc_bounds(16, d));
        assert!((b.upper / plain.upper - 1.0).abs() < 1e-12);
        assert!(r.overlaps(lrfc_bounds(16, d), 3.0), "δ={d}: {:?}", r.wilson(3.0));
    }
}

fn choose(n: usize, r: usize) -> f64 {
    (0..r).map(|i| (n - i) as f64 / (i + 1) as f64).product()
}

/// Exact single-receiver failure rate when k + Δ symbols are sent: m
/// arrive, m′ of them from the block prefix (hypergeometric given m), and
/// the residual system is uniform with m − k excess rows.
fn exact_transmission_failure(n: usize, k: usize, q: f64, dtx: usize, eps: f64) -> f64 {
    let total = k + dtx;
    let n = n.min(total);
    let mut p = 0.0;
    for m in 0..=total {
        let pm = choose(total, m) * (1.0 - eps).powi(m as i32) * eps.powi((total - m) as i32);
        if m < k {
            p += pm;
            continue;
        }
        for mp in m.saturating_sub(total - n)..=m.min(n).min(k - 1) {
            let h = choose(n, mp) * choose(total - n, m - mp) / choose(total, m);
            p += pm * h * rank_deficient_prob(q, (k - mp) as u32, (m - k) as u32);
        }
    }
    p
}

#[test]
fn single_receiver_rate_matches_the_exact_transmission_law() {
    let spc = CodeSpec::spc(10).unwrap();
    let grs = CodeSpec::grs(build_field(4).unwrap(), 15, 10).unwrap();
    for (spec, q, eps, dtx) in [(&spc, 2.0, 0.1, 3), (&spc, 2.0, 0.1, 6), (&spc, 2.0, 0.2, 8), (&grs, 16.0, 0.2, 4)] {
        let plan = TrialPlan::new(spec.clone(), ch(eps), Overhead::Transmission(dtx), 400_000, 2);
        let r = estimate_pe(&plan).unwrap();
        let want = exact_transmission_failure(spec.n(), spec.k(), q, dtx as usize, eps);
        assert_near(r.p_hat, want, r.trials, 4.0);
    }
}

