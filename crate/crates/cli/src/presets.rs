//! Named parameter bundles. A preset may expand to
//! several runs, one per curve.

use std::collections::BTreeMap;

use crate::Failure;

pub const NAMES: [&str; 7] = [
    "fig-gf2",
    "fig-gf16",
    "fig-gf16-sim",
    "fig-gf2-sim",
    "fig-system",
    "fig-spectrum",
    "fig-hamming-pb",
];

const SPC: &[(&str, &str)] = &[("family", "spc"), ("q", "2"), ("n", "11"), ("k", "10")];
const GRS: &[(&str, &str)] = &[("family", "grs"), ("q", "16"), ("n", "15"), ("k", "10")];
const LRFC2: &[(&str, &str)] = &[("family", "lrfc"), ("q", "2"), ("k", "10")];
const LRFC16: &[(&str, &str)] = &[("family", "lrfc"), ("q", "16"), ("k", "10")];

const HAMMING_PB_EPS: &str =
    "0.01,0.02,0.03,0.05,0.08,0.1,0.15,0.2,0.25,0.3,0.32,0.35,0.38,0.4,0.45,0.5";

fn run(parts: &[&[(&str, &str)]]) -> BTreeMap<String, String> {
    parts
        .iter()
        .flat_map(|p| p.iter())
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

/// The command a preset belongs to and its runs.
pub fn expand(name: &str) -> Result<(&'static str, Vec<BTreeMap<String, String>>), Failure> {
    let system = &[("N", "10000"), ("eps", "0.01"), ("target", "1e-4"), ("delta-tx", "0..40")][..];
    Ok(match name {
        "fig-gf2" => (
            "bounds",
            vec![run(&[SPC, &[("scheme", "both"), ("eps", "0.01,0.05,0.1,0.2"), ("delta", "0..10")]])],
        ),
        "fig-gf16" => (
            "bounds",
            vec![run(&[GRS, &[("scheme", "both"), ("eps", "0.01,0.05,0.1,0.2"), ("delta", "0..6")]])],
        ),
        "fig-gf16-sim" => (
            "simulate",
            vec![run(&[
                GRS,
                &[("eps", "0.1"), ("delta", "0..4"), ("trials", "1000000"), ("seed", "1"), ("decoder", "hybrid")],
            ])],
        ),
        "fig-gf2-sim" => (
            "simulate",
            vec![run(&[SPC, &[("eps", "0.1"), ("delta", "0..8"), ("trials", "1000000"), ("seed", "1")]])],
        ),
        "fig-system" => (
            "system",
            vec![
                run(&[LRFC2, system, &[("model", "upper")]]),
                run(&[LRFC16, system, &[("model", "upper")]]),
                run(&[SPC, system, &[("model", "upper")]]),
                run(&[GRS, system, &[("model", "upper")]]),
                run(&[GRS, system, &[("model", "ideal")]]),
            ],
        ),
        "fig-spectrum" => (
            "spectrum",
            vec![run(&[&[("hamming-t", "6"), ("length", "63,114,228"), ("ensemble", "true")]])],
        ),
        "fig-hamming-pb" => (
            "finite-rate",
            vec![run(&[&[
                ("hamming-t", "6"),
                ("length", "63,71,114"),
                ("eps", HAMMING_PB_EPS),
                ("realizations", "1000"),
                ("trials", "1000"),
                ("seed", "1"),
            ]])],
        ),
        other => {
            return Err(Failure::usage(format!(
                "unknown preset {other:?}; expected one of {}",
                NAMES.join(", ")
            )))
        }
    })
}
