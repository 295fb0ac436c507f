//! One function per subcommand. Each reads all of its parameters, rejects
//! leftovers, and only then computes.

use std::fs;

use concat_fountain::analysis::{
    berlekamp_bound_pb, concat_avg_wef, concat_bounds, hamming_cowef, lrfc_avg_wef, lrfc_bounds,
    receiver_failure, singleton_bound_pb, smallest_delta, spc_cowef, system_failure, BlockCowef,
    BoundPair, ChannelModel, FailureModel, SystemModel, UnionBound, WeightSpectrum,
};
use concat_fountain::codes::{encode_stream, parse_field, parse_symbols, CodeSpec, Family, SourceBlock};
use concat_fountain::galois::Gf;
use concat_fountain::decoder::{decode_ge, decode_hybrid, DecodeOutcome, ReceivedSet};
use concat_fountain::sim::{
    estimate_finite_rate_pb, estimate_pe, estimate_pf, DecoderChoice, FiniteRatePlan, Overhead, SimResult,
    TrialPlan,
};

use crate::params::Params;
use crate::Failure;

/// Rows produced by one run.
#[derive(Debug, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub meta: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&'static str]) -> Self {
        Table {
            header: header.to_vec(),
            ..Default::default()
        }
    }
}

pub fn run(command: &str, p: &mut Params, workers: usize) -> Result<Table, Failure> {
    match command {
        "bounds" => bounds(p),
        "simulate" => simulate(p, workers),
        "system" => system(p),
        "spectrum" => spectrum(p),
        "finite-rate" => finite_rate(p, workers),
        "encode" => encode(p),
        "decode" => decode(p),
        other => Err(Failure::usage(format!("unknown command {other}"))),
    }
}

fn num(x: f64) -> String {
    format!("{x:e}")
}

fn scheme(spec: &CodeSpec) -> &'static str {
    match spec.family() {
        Family::None => "lrfc",
        f => f.name(),
    }
}

fn channel(eps: f64) -> Result<ChannelModel, Failure> {
    ChannelModel::new(eps).map_err(Failure::usage)
}

fn channels(eps: &[f64]) -> Result<Vec<ChannelModel>, Failure> {
    eps.iter().map(|&e| channel(e)).collect()
}

/// CodeSpec from `family`, `q`, `n`, `k`, `hamming-t` and `betas`.
fn code_spec(p: &mut Params) -> Result<CodeSpec, Failure> {
    let t: Option<u32> = p.opt("hamming-t")?;
    let family = match (p.opt_str("family"), t) {
        (Some(f), _) => f,
        (None, Some(_)) => {
            p.set("family", "hamming");
            "hamming".to_string()
        }
        (None, None) => return Err(Failure::usage("missing --family")),
    };
    let q: u32 = match family.as_str() {
        "spc" | "hamming" => p.or("q", 2)?,
        _ => p.require("q")?,
    };
    let field = parse_field(&q.to_string()).map_err(Failure::usage)?;
    let n: Option<usize> = p.opt("n")?;
    let k: Option<usize> = p.opt("k")?;
    let betas = p
        .opt_str("betas")
        .map(|s| parse_symbols(field, &s))
        .transpose()
        .map_err(Failure::usage)?;
    CodeSpec::from_parts(field, &family, n, k, t, betas).map_err(Failure::usage)
}

fn decoder_choice(p: &mut Params, spec: &CodeSpec) -> Result<DecoderChoice, Failure> {
    let default = if spec.betas().is_some() { "hybrid" } else { "ge" };
    match p.str_or("decoder", default).as_str() {
        "ge" => Ok(DecoderChoice::Ge),
        "hybrid" if spec.betas().is_some() => Ok(DecoderChoice::Hybrid),
        "hybrid" => Err(Failure::usage(format!(
            "--decoder hybrid needs a GRS code, got {}",
            scheme(spec)
        ))),
        other => Err(Failure::usage(format!("--decoder: expected ge or hybrid, got {other:?}"))),
    }
}

/// Total lengths from `length` or `rate` (l = round(k/r)); defaults to `fallback`.
fn lengths(p: &mut Params, k: usize, fallback: Option<usize>) -> Result<Vec<usize>, Failure> {
    if p.has("length") && p.has("rate") {
        return Err(Failure::usage("give --length or --rate, not both"));
    }
    if let Some(ls) = p.opt_range("length")? {
        return Ok(ls.into_iter().map(|l| l as usize).collect());
    }
    if let Some(rates) = p.opt_floats("rate")? {
        return rates
            .into_iter()
            .map(|r| {
                if r > 0.0 && r <= 1.0 {
                    Ok((k as f64 / r).round() as usize)
                } else {
                    Err(Failure::usage(format!("--rate {r} outside (0, 1]")))
                }
            })
            .collect();
    }
    fallback
        .map(|l| vec![l])
        .ok_or_else(|| Failure::usage("missing --length or --rate"))
}

fn bounds(p: &mut Params) -> Result<Table, Failure> {
    let which = p.str_or("scheme", "concat");
    let (concat, lrfc) = match which.as_str() {
        "concat" => (true, false),
        "lrfc" => (false, true),
        "both" => (true, true),
        other => return Err(Failure::usage(format!("--scheme: expected concat, lrfc or both, got {other:?}"))),
    };
    let spec = code_spec(p)?;
    let chans = channels(&p.floats("eps")?)?;
    let deltas = p.range_or("delta", "0..8")?;
    p.finish()?;

    let q = spec.field().order();
    let mut t = Table::new(&["bound", "family", "q", "n", "k", "eps", "delta", "lower", "upper"]);
    for ch in &chans {
        for &d in &deltas {
            let mut push = |name: &str, b: BoundPair| {
                t.rows.push(vec![
                    name.into(),
                    scheme(&spec).into(),
                    q.to_string(),
                    spec.n().to_string(),
                    spec.k().to_string(),
                    ch.eps().to_string(),
                    d.to_string(),
                    num(b.lower),
                    num(b.upper),
                ]);
            };
            if concat {
                push("concat", concat_bounds(&spec, d, *ch).map_err(Failure::usage)?);
            }
            if lrfc {
                push("lrfc", lrfc_bounds(q, d));
            }
        }
    }
    Ok(t)
}

fn sim_row(spec: &CodeSpec, eps: f64, delta: u32, r: &SimResult, mode: &str, band: Option<BoundPair>) -> Vec<String> {
    let (lo, hi) = r.ci95;
    let (bl, bu) = band.map_or((String::new(), String::new()), |b| (num(b.lower), num(b.upper)));
    vec![
        scheme(spec).into(),
        spec.field().order().to_string(),
        spec.n().to_string(),
        spec.k().to_string(),
        eps.to_string(),
        delta.to_string(),
        r.trials.to_string(),
        r.failures.to_string(),
        num(r.p_hat),
        num(lo),
        num(hi),
        mode.into(),
        bl,
        bu,
    ]
}

fn simulate(p: &mut Params, workers: usize) -> Result<Table, Failure> {
    let spec = code_spec(p)?;
    let chans = channels(&p.floats("eps")?)?;
    let receiver = p.opt_range("delta")?;
    let transmission = p.opt_range("delta-tx")?;
    let (deltas, tx) = match (receiver, transmission) {
        (Some(d), None) => (d, false),
        (None, Some(d)) => (d, true),
        (None, None) => return Err(Failure::usage("missing --delta or --delta-tx")),
        (Some(_), Some(_)) => return Err(Failure::usage("give --delta or --delta-tx, not both")),
    };
    let trials = p.count_or("trials", 1_000_000)?;
    if trials == 0 {
        return Err(Failure::usage("--trials must be at least 1"));
    }
    let seed: u64 = p.or("seed", 1)?;
    let decoder = decoder_choice(p, &spec)?;
    p.finish()?;

    let mut t = Table::new(&[
        "scheme", "q", "n", "k", "eps", "delta", "trials", "failures", "p_hat", "ci_lo", "ci_hi", "mode", "lower",
        "upper",
    ]);
    for ch in &chans {
        for &d in &deltas {
            let overhead = if tx { Overhead::Transmission(d) } else { Overhead::Receiver(d) };
            let plan = TrialPlan::new(spec.clone(), *ch, overhead, trials, seed)
                .with_decoder(decoder)
                .with_workers(workers);
            let (r, band, mode) = if tx {
                let r = estimate_pe(&plan).map_err(Failure::runtime)?;
                let side = |m| receiver_failure(&spec, d, *ch, m).ok();
                let band = side(FailureModel::ConcatLower)
                    .zip(side(FailureModel::ConcatUpper))
                    .map(|(lower, upper)| BoundPair { lower, upper });
                (r, band, "transmission")
            } else {
                let r = estimate_pf(&plan).map_err(Failure::runtime)?;
                (r, concat_bounds(&spec, d, *ch).ok(), "receiver")
            };
            t.rows.push(sim_row(&spec, ch.eps(), d, &r, mode, band));
        }
    }
    Ok(t)
}

fn system(p: &mut Params) -> Result<Table, Failure> {
    let spec = code_spec(p)?;
    let receivers = p.count_or("N", 10_000)?;
    if receivers == 0 {
        return Err(Failure::usage("--N must be at least 1"));
    }
    let ch = channel(p.require("eps")?)?;
    let target: f64 = p.or("target", 1e-4)?;
    let deltas = p.range_or("delta-tx", "0..60")?;
    let model_name = p.str_or("model", "upper");
    let model = match model_name.as_str() {
        "upper" => FailureModel::ConcatUpper,
        "lower" => FailureModel::ConcatLower,
        "ideal" => FailureModel::Ideal,
        "lrfc" => FailureModel::Lrfc,
        other => {
            return Err(Failure::usage(format!(
                "--model: expected upper, lower, ideal or lrfc, got {other:?}"
            )))
        }
    };
    p.finish()?;

    let max = deltas.iter().copied().max().unwrap_or(0);
    let mut t = Table::new(&["scheme", "q", "n", "k", "N", "eps", "model", "delta_tx", "p_e", "p_E"]);
    for &d in &deltas {
        let sys = SystemModel {
            receivers,
            delta_tx: d,
            spec: spec.clone(),
            channel: ch,
        };
        let pe = receiver_failure(&spec, d, ch, model).map_err(Failure::usage)?;
        let pn = system_failure(&sys, model).map_err(Failure::usage)?;
        t.rows.push(vec![
            scheme(&spec).into(),
            spec.field().order().to_string(),
            spec.n().to_string(),
            spec.k().to_string(),
            receivers.to_string(),
            ch.eps().to_string(),
            model_name.clone(),
            d.to_string(),
            num(pe),
            num(pn),
        ]);
    }
    let star = smallest_delta(&spec, receivers, ch, model, target, max).map_err(Failure::usage)?;
    t.meta.push(match star {
        Some(d) => format!("delta_star={d}"),
        None => format!("delta_star=none (P_E > {target} for all delta_tx <= {max})"),
    });
    Ok(t)
}

/// Block C-OWEF for the spectrum and finite-rate commands.
fn block_cowef(spec: &CodeSpec) -> Result<BlockCowef, Failure> {
    match spec.family() {
        Family::Hamming { t } => hamming_cowef(*t).map_err(Failure::usage),
        Family::Spc => Ok(spc_cowef(spec.k())),
        Family::None => Ok(BlockCowef::empty(spec.k(), spec.field().order())),
        Family::Grs { .. } => Err(Failure::usage(
            "weight enumerators are available for hamming, spc and lrfc only",
        )),
    }
}

fn spectrum_rows(t: &mut Table, code: &str, s: &WeightSpectrum) {
    let approx = s.to_f64();
    for (w, a) in approx.iter().enumerate() {
        let log = if *a > 0.0 { format!("{:.6}", a.log10()) } else { String::new() };
        t.rows.push(vec![
            code.into(),
            s.l().to_string(),
            s.k().to_string(),
            w.to_string(),
            s.coeff_decimal(w),
            log,
        ]);
    }
}

fn spectrum(p: &mut Params) -> Result<Table, Failure> {
    let spec = code_spec(p)?;
    let block = block_cowef(&spec)?;
    let fallback = (spec.n() > 0).then_some(spec.n());
    let ls = lengths(p, spec.k(), fallback)?;
    let ensemble = p.bool_or("ensemble", false)?;
    p.finish()?;

    let mut t = Table::new(&["code", "l", "k", "w", "A_w", "log10_A_w"]);
    for l in ls {
        let s = concat_avg_wef(&block, l).map_err(Failure::usage)?;
        if !s.is_conserved() {
            return Err(Failure::runtime(format!("spectrum at l={l} does not sum to q^k")));
        }
        spectrum_rows(&mut t, "concat", &s);
        if ensemble {
            spectrum_rows(&mut t, "lrfc", &lrfc_avg_wef(spec.k(), l, spec.field().order()));
        }
    }
    Ok(t)
}

fn finite_rate(p: &mut Params, workers: usize) -> Result<Table, Failure> {
    let spec = code_spec(p)?;
    let block = block_cowef(&spec)?;
    let fallback = (spec.n() > 0).then_some(spec.n());
    let ls = lengths(p, spec.k(), fallback)?;
    let chans = channels(&p.floats("eps")?)?;
    let realizations = p.count_or("realizations", 1000)?;
    let trials = p.count_or("trials", 1000)?;
    let seed: u64 = p.or("seed", 1)?;
    p.finish()?;

    let mut t = Table::new(&[
        "l", "k", "rate", "eps", "union_bound", "berlekamp", "singleton", "trials", "failures", "p_hat", "ci_lo",
        "ci_hi",
    ]);
    let k = spec.k();
    for l in ls {
        let ub = UnionBound::new(&concat_avg_wef(&block, l).map_err(Failure::usage)?);
        for ch in &chans {
            let mut row = vec![
                l.to_string(),
                k.to_string(),
                format!("{:.6}", k as f64 / l as f64),
                ch.eps().to_string(),
                num(ub.eval(*ch)),
                num(berlekamp_bound_pb(l, k, *ch)),
                num(singleton_bound_pb(l, k, *ch)),
            ];
            if realizations > 0 && trials > 0 {
                let plan = FiniteRatePlan {
                    spec: spec.clone(),
                    length: l,
                    channel: *ch,
                    realizations,
                    trials_per: trials,
                    seed,
                    workers,
                };
                let r = estimate_finite_rate_pb(&plan).map_err(Failure::runtime)?;
                row.extend([
                    r.trials.to_string(),
                    r.failures.to_string(),
                    num(r.p_hat),
                    num(r.ci95.0),
                    num(r.ci95.1),
                ]);
            } else {
                row.extend(std::iter::repeat_n(String::new(), 5));
            }
            t.rows.push(row);
        }
    }
    Ok(t)
}

fn encode(p: &mut Params) -> Result<Table, Failure> {
    let spec = code_spec(p)?;
    let source = p
        .opt_str("source")
        .ok_or_else(|| Failure::usage("missing --source"))?;
    let u = parse_symbols(spec.field(), &source)
        .and_then(|v| SourceBlock::new(&spec, v))
        .map_err(Failure::usage)?;
    let count = p.count_or("count", (spec.n() + spec.k()) as u64)?;
    let seed: u64 = p.or("seed", 1)?;
    p.finish()?;

    let mut t = Table::new(&["index", "value"]);
    let stream = encode_stream(&u, spec, seed);
    for (j, v) in stream.take(count as usize).enumerate() {
        t.rows.push(vec![(j + 1).to_string(), v.value().to_string()]);
    }
    Ok(t)
}

/// `index,value` lines; blank, `#` and header lines are skipped.
fn read_symbols(text: &str) -> Result<Vec<(usize, u32)>, Failure> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line == "index,value" {
            continue;
        }
        let bad = || Failure::usage(format!("input line {}: expected index,value, got {line:?}", i + 1));
        let (a, b) = line.split_once(',').ok_or_else(bad)?;
        out.push((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?));
    }
    Ok(out)
}

fn decode(p: &mut Params) -> Result<Table, Failure> {
    let spec = code_spec(p)?;
    let input = p
        .opt_str("input")
        .ok_or_else(|| Failure::usage("missing --input"))?;
    let seed: u64 = p.or("seed", 1)?;
    let decoder = decoder_choice(p, &spec)?;
    p.finish()?;

    let text = fs::read_to_string(&input).map_err(|e| Failure::runtime(format!("reading {input}: {e}")))?;
    let mut symbols = read_symbols(&text)?;
    symbols.sort_unstable();
    symbols.dedup();
    if symbols.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(Failure::usage("input repeats an index with different values"));
    }
    let order = spec.field().order();
    if let Some((j, v)) = symbols.iter().find(|(_, v)| *v >= order) {
        return Err(Failure::usage(format!("symbol {j}: value {v} is not in GF({order})")));
    }
    let split = symbols.partition_point(|&(j, _)| j <= spec.n());
    let idx: Vec<usize> = symbols.iter().map(|&(j, _)| j).collect();
    let values: Vec<Gf> = symbols.iter().map(|&(_, v)| Gf(v as u8)).collect();
    let received = ReceivedSet::new(&spec, idx[..split].to_vec(), idx[split..].to_vec(), values, seed)
        .map_err(Failure::usage)?;
    let report = match decoder {
        DecoderChoice::Ge => decode_ge(&received),
        DecoderChoice::Hybrid => decode_hybrid(&received),
    }
    .map_err(Failure::runtime)?;
    let u = match report.outcome {
        DecodeOutcome::Success { u } => u,
        DecodeOutcome::Failure { rank_deficit } => {
            return Err(Failure::runtime(format!(
                "decoding failed: rank deficit {rank_deficit} with {} symbols",
                received.len()
            )))
        }
    };
    let mut t = Table::new(&["index", "value"]);
    for (i, v) in u.iter().enumerate() {
        t.rows.push(vec![(i + 1).to_string(), v.value().to_string()]);
    }
    Ok(t)
}
