//! Acceptance suite: one PASS/FAIL line per criterion. Arguments filter
//! criteria by id substring. Exits non-zero if any criterion fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use concat_fountain::analysis::{
    berlekamp_bound_pb, concat_avg_wef, concat_bounds, hamming_cowef, lrfc_bounds, prefix_loss_prob,
    singleton_bound_pb, smallest_delta, union_bound_pb, BoundPair, ChannelModel, FailureModel, UnionBound,
};
use concat_fountain::codes::{encode_stream, hamming_generator, CodeSpec, SourceBlock};
use concat_fountain::decoder::{
    decode_ge, decode_hybrid, decode_hybrid_counted, DecodeOutcome, DecodePath, ReceivedSet,
};
use concat_fountain::galois::{build_field, Gf};
use concat_fountain::linalg::{vandermonde_inverse, VandermondeFactors, VandermondeSpec};
use concat_fountain::rng::StreamKey;
use concat_fountain::sim::{estimate_finite_rate_pb, estimate_pf, FiniteRatePlan, Overhead, SimResult, TrialPlan};
use rand::seq::index::sample;
use rand::Rng;

const SIGMA3: f64 = 3.0;

fn ch(eps: f64) -> ChannelModel {
    ChannelModel::new(eps).unwrap()
}

/// Σ_{e=n−k+1}^{n} C(n,e) ε^e (1−ε)^{n−e} with Pascal-triangle coefficients.
fn direct_tail(n: usize, k: usize, eps: f64) -> f64 {
    let mut row = vec![1.0f64];
    for _ in 0..n {
        let mut next = vec![1.0; row.len() + 1];
        for i in 1..row.len() {
            next[i] = row[i - 1] + row[i];
        }
        row = next;
    }
    (n - k + 1..=n)
        .map(|e| row[e] * eps.powi(e as i32) * (1.0 - eps).powi((n - e) as i32))
        .sum()
}

fn sim_line(delta: u32, r: &SimResult, band: BoundPair) -> String {
    let (lo, hi) = r.wilson(SIGMA3);
    format!(
        "δ={delta}: {}/{} p̂={:.3e} 3σ[{:.3e},{:.3e}] band[{:.3e},{:.3e}]",
        r.failures, r.trials, r.p_hat, lo, hi, band.lower, band.upper
    )
}

/// Runs `plan` at every δ and checks the 3σ interval against the concatenated band.
fn band_sweep(spec: &CodeSpec, eps: f64, deltas: &[u32], trials: u64, seed: u64) -> (bool, Vec<String>) {
    let mut ok = true;
    let mut lines = Vec::new();
    for &d in deltas {
        let plan = TrialPlan::new(spec.clone(), ch(eps), Overhead::Receiver(d), trials, seed + u64::from(d));
        let r = estimate_pf(&plan).unwrap();
        let band = concat_bounds(spec, d, ch(eps)).unwrap();
        let inside = r.overlaps(band, SIGMA3);
        ok &= inside;
        lines.push(format!("{}{}", sim_line(d, &r, band), if inside { "" } else { " OUTSIDE" }));
    }
    (ok, lines)
}

fn c1_grs_ratio() -> (bool, Vec<String>) {
    let spec = CodeSpec::grs(build_field(4).unwrap(), 15, 10).unwrap();
    let p = prefix_loss_prob(15, 10, ch(0.05));
    let oracle = direct_tail(15, 10, 0.05);
    let mut ok = (p / oracle - 1.0).abs() < 1e-12;
    let mut lines = vec![format!("P(0.05) = {p:.6e} (direct sum {oracle:.6e})")];
    for d in 0..=8 {
        let c = concat_bounds(&spec, d, ch(0.05)).unwrap();
        let l = lrfc_bounds(16, d);
        ok &= (c.upper / l.upper / p - 1.0).abs() < 1e-12 && (c.lower / l.lower / p - 1.0).abs() < 1e-12;
    }
    ok &= p < 1e-4;
    lines.push(format!("concat/lrfc = P(0.05) for both sides at δ=0..8; reduction {:.2} decades", -p.log10()));
    let start = Instant::now();
    let (mc_ok, mc) = band_sweep(&spec, 0.05, &[0], 100_000_000, 11);
    lines.extend(mc);
    lines.push(format!("Monte Carlo {:.0} s", start.elapsed().as_secs_f64()));
    (ok && mc_ok, lines)
}

fn c2_spc_ratio() -> (bool, Vec<String>) {
    let spec = CodeSpec::spc(10).unwrap();
    let p = prefix_loss_prob(11, 10, ch(0.01));
    let oracle = direct_tail(11, 10, 0.01);
    let mut ok = (p / oracle - 1.0).abs() < 1e-12 && p < 1e-2;
    for d in 0..=6 {
        let c = concat_bounds(&spec, d, ch(0.01)).unwrap();
        ok &= (c.upper / lrfc_bounds(2, d).upper / p - 1.0).abs() < 1e-12;
    }
    let mut lines = vec![format!("P(0.01) = {p:.6e} (direct sum {oracle:.6e}), {:.2} decades", -p.log10())];
    let start = Instant::now();
    let (mc_ok, mc) = band_sweep(&spec, 0.01, &(0..=6).collect::<Vec<_>>(), 10_000_000, 21);
    lines.extend(mc);
    lines.push(format!("Monte Carlo {:.0} s", start.elapsed().as_secs_f64()));
    (ok && mc_ok, lines)
}

fn c3_figure_match() -> (bool, Vec<String>) {
    let start = Instant::now();
    let spc = CodeSpec::spc(10).unwrap();
    let grs = CodeSpec::grs(build_field(4).unwrap(), 15, 10).unwrap();
    let (a, mut lines) = band_sweep(&spc, 0.1, &(0..=8).collect::<Vec<_>>(), 1_000_000, 31);
    lines.iter_mut().for_each(|l| l.insert_str(0, "SPC "));
    let (b, more) = band_sweep(&grs, 0.1, &(0..=4).collect::<Vec<_>>(), 10_000_000, 41);
    lines.extend(more.into_iter().map(|l| format!("GRS {l}")));
    let secs = start.elapsed().as_secs_f64();
    lines.push(format!("{secs:.0} s"));
    (a && b && secs < 1800.0, lines)
}

fn c4_system() -> (bool, Vec<String>) {
    let start = Instant::now();
    let spc = CodeSpec::spc(10).unwrap();
    let lrfc = CodeSpec::lrfc(build_field(1).unwrap(), 10).unwrap();
    let find = |s: &CodeSpec, m| smallest_delta(s, 10_000, ch(0.01), m, 1e-4, 100).unwrap();
    let s = find(&spc, FailureModel::ConcatUpper);
    let l = find(&lrfc, FailureModel::ConcatUpper);
    let l_lower = find(&lrfc, FailureModel::ConcatLower);
    let secs = start.elapsed().as_secs_f64();
    let ok = s == Some(20) && l.is_some_and(|d| d.abs_diff(27) <= 1) && secs < 1.0;
    (
        ok,
        vec![format!(
            "SPC Δ*={s:?}, GF(2) LRFC Δ*={l:?} (lower-bound model {l_lower:?}), {:.1} ms",
            secs * 1e3
        )],
    )
}

fn random_source(rng: &mut impl Rng, q: u32, k: usize) -> Vec<Gf> {
    (0..k).map(|_| Gf(rng.random_range(0..q) as u8)).collect()
}

fn c5_decoder_equivalence() -> (bool, Vec<String>) {
    let mut rng = StreamKey::new(5).stream(0);
    let fields = [(1u32, 1usize, 1usize), (4, 15, 15), (8, 20, 40)];
    let (mut instances, mut mismatches, mut wrong) = (0u64, 0u64, 0u64);
    let mut paths = [0u64; 3];
    let mut strata: BTreeSet<(u32, &str)> = BTreeSet::new();
    for i in 0..15_000u64 {
        let (m, kmax, nmax) = fields[(i % 3) as usize];
        let field = build_field(m).unwrap();
        let q = field.order();
        let k = rng.random_range(1..=kmax);
        let n = rng.random_range(k..=nmax);
        let spec = CodeSpec::grs(field, n, k).unwrap();
        let delta = rng.random_range(0..=4usize);
        let total = k + delta;
        let mp = rng.random_range(0..=total.min(n));
        let mut idx: Vec<usize> = sample(&mut rng, n, mp).into_iter().map(|j| j + 1).collect();
        idx.extend(sample(&mut rng, 64, total - mp).into_iter().map(|j| n + 1 + j));
        let u = random_source(&mut rng, q, k);
        let stream = encode_stream(&SourceBlock::new(&spec, u.clone()).unwrap(), spec.clone(), i);
        let r = ReceivedSet::from_stream(&stream, idx).unwrap();
        let h = decode_hybrid(&r).unwrap();
        let g = decode_ge(&r).unwrap();
        instances += 1;
        mismatches += u64::from(h.outcome != g.outcome);
        if let DecodeOutcome::Success { u: got } = &h.outcome {
            wrong += u64::from(*got != u);
        }
        paths[match h.path {
            DecodePath::GeOnly => 0,
            DecodePath::Hybrid => 1,
            DecodePath::MdsOnly => 2,
        }] += 1;
        let stratum = match mp {
            0 => "m′=0",
            _ if mp < k => "0<m′<k",
            _ if mp == k => "m′=k",
            _ => "m′>k",
        };
        strata.insert((q, stratum));
    }
    // GF(2) only admits GRS(1,1), so 0 < m′ < k and m′ > k cannot occur there.
    let mut ok = mismatches == 0 && wrong == 0 && paths.iter().all(|&c| c > 0) && strata.len() == 10;
    let mut lines = vec![format!(
        "{instances} instances over GF(2), GF(16), GF(256): {mismatches} mismatches, {wrong} wrong decodes; \
         paths GE/HYBRID/MDS_ONLY = {paths:?}; {} (q, m′) strata",
        strata.len()
    )];

    // MDS_ONLY op counts at k and 2k over GF(256).
    for k in [16, 32, 64] {
        let (a, b) = (mds_only_ops(k, &mut rng), mds_only_ops(2 * k, &mut rng));
        let ratio = b / a;
        let fine = (3.4..=4.6).contains(&ratio);
        ok &= fine;
        lines.push(format!("ops(k={k}) = {a:.0}, ops(2k) = {b:.0}, ratio {ratio:.3}"));
    }
    (ok, lines)
}

/// Mean field operations of an MDS_ONLY decode from k of GRS(255, k) over GF(256).
fn mds_only_ops(k: usize, rng: &mut impl Rng) -> f64 {
    let spec = CodeSpec::grs(build_field(8).unwrap(), 255, k).unwrap();
    let reps = 8;
    let mut sum = 0u64;
    for rep in 0..reps {
        let u = random_source(rng, 256, k);
        let s = encode_stream(&SourceBlock::new(&spec, u).unwrap(), spec.clone(), rep);
        let idx: Vec<usize> = sample(rng, 255, k).into_iter().map(|j| j + 1).collect();
        let report = decode_hybrid_counted(&ReceivedSet::from_stream(&s, idx).unwrap()).unwrap();
        assert_eq!(report.path, DecodePath::MdsOnly);
        sum += report.field_ops.unwrap();
    }
    sum as f64 / reps as f64
}

fn vandermonde_ok(field: &'static concat_fountain::galois::FieldCtx, xs: Vec<Gf>) -> bool {
    let spec = VandermondeSpec::new(field, xs).unwrap();
    let f = VandermondeFactors::new(&spec);
    let inv = f.u_inv().mul(f.l_inv()).unwrap();
    spec.matrix().mul(&inv).unwrap().is_identity() && inv == vandermonde_inverse(&spec)
}

fn c6_vandermonde() -> (bool, Vec<String>) {
    let gf16 = build_field(4).unwrap();
    let (mut subsets, mut bad) = (0u64, 0u64);
    for mask in 1u32..(1 << 15) {
        if mask.count_ones() > 4 {
            continue;
        }
        let xs: Vec<Gf> = (0..15).filter(|b| mask >> b & 1 == 1).map(|b| Gf(b as u8 + 1)).collect();
        subsets += 1;
        bad += u64::from(!vandermonde_ok(gf16, xs));
    }
    let gf256 = build_field(8).unwrap();
    let mut rng = StreamKey::new(6).stream(0);
    let (mut random, mut bad_random) = (0u64, 0u64);
    for gamma in 1..=64usize {
        for _ in 0..5 {
            let xs: Vec<Gf> = sample(&mut rng, 255, gamma).into_iter().map(|j| Gf(j as u8 + 1)).collect();
            random += 1;
            bad_random += u64::from(!vandermonde_ok(gf256, xs));
        }
    }
    (
        bad == 0 && bad_random == 0 && subsets == 1940,
        vec![format!(
            "GF(16) exhaustive: {subsets} subsets, {bad} failures; GF(256) γ=1..64: {random} random node sets, {bad_random} failures"
        )],
    )
}

/// Codeword weight distribution of a binary generator by enumeration.
fn brute_weights(g: &concat_fountain::linalg::MatrixGF) -> Vec<u64> {
    let (k, n) = (g.rows(), g.cols());
    let mut out = vec![0u64; n + 1];
    for msg in 0u32..(1 << k) {
        let w = (0..n)
            .filter(|&c| (0..k).fold(0u8, |acc, r| acc ^ ((msg >> r) as u8 & 1 & g.get(r, c).value())) == 1)
            .count();
        out[w] += 1;
    }
    out
}

fn c7_spectrum() -> (bool, Vec<String>) {
    let want: Vec<u64> = vec![1, 0, 0, 7, 7, 0, 0, 1];
    let brute = brute_weights(&hamming_generator(3).unwrap());
    let c3 = hamming_cowef(3).unwrap();
    let marginal: Vec<u64> = c3.spectrum().iter().map(|a| a.try_into().unwrap()).collect();
    let mut ok = brute == want && marginal == want;
    let mut lines = vec![format!("(7,4) marginal {marginal:?}, enumeration {brute:?}")];

    let mut conserved = 0;
    let mut total = 0;
    for (t, ls) in [(3u32, vec![7usize, 8, 10, 14, 28]), (4, vec![15, 20, 30])] {
        let c = hamming_cowef(t).unwrap();
        for l in ls {
            total += 1;
            conserved += usize::from(concat_avg_wef(&c, l).unwrap().is_conserved());
        }
    }
    let start = Instant::now();
    let c6 = hamming_cowef(6).unwrap();
    for l in [63, 114, 228] {
        total += 1;
        let s = concat_avg_wef(&c6, l).unwrap();
        conserved += usize::from(s.is_conserved() && s.coeff_decimal(0) == "1");
    }
    let secs = start.elapsed().as_secs_f64();
    ok &= conserved == total && secs < 60.0;
    lines.push(format!(
        "Σ_w A_w = q^k for {conserved}/{total} spectra incl. (63,57) at l=63,114,228; t=6 builds in {secs:.2} s"
    ));
    (ok, lines)
}

fn c8_tightness() -> (bool, Vec<String>) {
    let start = Instant::now();
    let spec = CodeSpec::hamming(6).unwrap();
    let c6 = hamming_cowef(6).unwrap();
    let mut ok = true;
    let mut lines = Vec::new();
    for (rate, l, grid) in [("0.8", 71usize, [0.03, 0.05, 0.08, 0.1]), ("0.5", 114, [0.32, 0.35, 0.38, 0.4])] {
        let ub = UnionBound::new(&concat_avg_wef(&c6, l).unwrap());
        for eps in grid {
            let bound = ub.eval(ch(eps));
            let plan = FiniteRatePlan {
                spec: spec.clone(),
                length: l,
                channel: ch(eps),
                realizations: 1000,
                trials_per: 1000,
                seed: (l as u64) << 8 | (eps * 100.0) as u64,
                workers: 0,
            };
            let r = estimate_finite_rate_pb(&plan).unwrap();
            let (lo, _) = r.wilson(SIGMA3);
            let in_range = (1e-4..=1e-1).contains(&bound);
            let below = lo <= bound;
            let close = r.p_hat * 3.0 >= bound;
            ok &= in_range && below && close;
            lines.push(format!(
                "r={rate} l={l} ε={eps}: p̂={:.3e} ({} / {}) UB={bound:.3e} ratio {:.2}{}",
                r.p_hat,
                r.failures,
                r.trials,
                bound / r.p_hat,
                if in_range && below && close { "" } else { " FAIL" }
            ));
        }
    }
    // Hamming alone sits between Singleton and Berlekamp; at r=1/2 the bound meets Berlekamp.
    let alone = UnionBound::new(&concat_avg_wef(&c6, 63).unwrap());
    let half = UnionBound::new(&concat_avg_wef(&c6, 114).unwrap());
    let mut order = true;
    for eps in [0.01, 0.02, 0.03, 0.05] {
        let u = alone.eval(ch(eps));
        order &= singleton_bound_pb(63, 57, ch(eps)) <= u && u <= berlekamp_bound_pb(63, 57, ch(eps));
    }
    let mut gap: f64 = 0.0;
    for eps in [0.32, 0.35, 0.38, 0.4] {
        gap = gap.max((half.eval(ch(eps)) / berlekamp_bound_pb(114, 57, ch(eps)) - 1.0).abs());
    }
    ok &= order && gap < 0.05;
    lines.push(format!(
        "l=63: Singleton ≤ UB ≤ Berlekamp {order}; l=114: max |UB/Berlekamp − 1| = {gap:.2e}; {:.0} s",
        start.elapsed().as_secs_f64()
    ));
    (ok, lines)
}

/// Rank of binary column vectors packed into u8 masks.
fn gf2_rank(mut cols: Vec<u8>) -> usize {
    let mut rank = 0;
    for bit in 0..8 {
        let Some(p) = (rank..cols.len()).find(|&i| cols[i] >> bit & 1 == 1) else {
            continue;
        };
        cols.swap(rank, p);
        for i in 0..cols.len() {
            if i != rank && cols[i] >> bit & 1 == 1 {
                cols[i] ^= cols[rank];
            }
        }
        rank += 1;
    }
    rank
}

fn c9_small_exact() -> (bool, Vec<String>) {
    let g = hamming_generator(3).unwrap();
    let cols: Vec<u8> = (0..7)
        .map(|c| (0..4).fold(0u8, |acc, r| acc | (g.get(r, c).value() << r)))
        .collect();
    let spec = CodeSpec::hamming(3).unwrap();
    let s = concat_avg_wef(&hamming_cowef(3).unwrap(), 7).unwrap();
    let mut ok = true;
    let mut lines = Vec::new();
    for eps in [0.05f64, 0.1, 0.2] {
        let exact: f64 = (0u32..128)
            .filter(|mask| gf2_rank((0..7).filter(|c| mask >> c & 1 == 0).map(|c| cols[c]).collect()) < 4)
            .map(|mask| {
                let e = mask.count_ones() as i32;
                eps.powi(e) * (1.0 - eps).powi(7 - e)
            })
            .sum();
        let plan = FiniteRatePlan {
            spec: spec.clone(),
            length: 7,
            channel: ch(eps),
            realizations: 1000,
            trials_per: 1000,
            seed: 9,
            workers: 0,
        };
        let r = estimate_finite_rate_pb(&plan).unwrap();
        let sigma = (exact * (1.0 - exact) / r.trials as f64).sqrt();
        let ub = union_bound_pb(&s, ch(eps));
        let fine = (r.p_hat - exact).abs() <= SIGMA3 * sigma && exact <= ub;
        ok &= fine;
        lines.push(format!(
            "ε={eps}: exact {exact:.5e}, MC {:.5e} ({:+.2}σ), UB {ub:.5e}",
            r.p_hat,
            (r.p_hat - exact) / sigma
        ));
    }
    (ok, lines)
}

type Criterion = fn() -> (bool, Vec<String>);

fn main() -> ExitCode {
    let criteria: [(&str, &str, Criterion); 9] = [
        ("c1-grs-ratio", "GRS(15,10)/GF(16) ε=0.05 reduction and δ=0 simulation", c1_grs_ratio),
        ("c2-spc-ratio", "SPC(11,10)/GF(2) ε=0.01 reduction and δ=0..6 simulation", c2_spc_ratio),
        ("c3-figure-match", "ε=0.1 simulated P_f inside the bounds", c3_figure_match),
        ("c4-system", "smallest transmission overhead for N=10^4, ε=0.01", c4_system),
        ("c5-decoder", "hybrid ≡ GE decoding and MDS_ONLY op scaling", c5_decoder_equivalence),
        ("c6-vandermonde", "Vandermonde LU inverse", c6_vandermonde),
        ("c7-spectrum", "Hamming C-OWEF and spectrum conservation", c7_spectrum),
        ("c8-tightness", "(63,57)+LRFC union bound tightness", c8_tightness),
        ("c9-small-exact", "(7,4) exhaustive ML vs simulation and union bound", c9_small_exact),
    ];
    let filters: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (id, title, run) in criteria {
        if !filters.is_empty() && !filters.iter().any(|f| id.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let (ok, lines) = run();
        println!(
            "{} [{id}] {title} ({:.1} s)",
            if ok { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
        for l in lines {
            println!("    {l}");
        }
        failed += usize::from(!ok);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criterion(s) failed");
        ExitCode::FAILURE
    }
}
