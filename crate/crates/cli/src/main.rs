//! `cfountain`: bounds, simulations, spectra and a file-level encoder and
//! decoder for the MDS + LRFC concatenation. Output is CSV.

mod commands;
mod params;
mod presets;

use std::collections::BTreeMap;
use std::fmt::Display;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use concat_fountain::kv::parse_kv;

use commands::Table;
use params::Params;

/// Exit status 2 for bad input, 3 for failures while running.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Runtime(anyhow::Error),
}

impl Failure {
    pub fn usage(msg: impl Display) -> Self {
        Failure::Usage(msg.to_string())
    }

    pub fn runtime(msg: impl Display) -> Self {
        Failure::Runtime(anyhow::anyhow!("{msg}"))
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Runtime(e)
    }
}

macro_rules! param_args {
    ($(#[$meta:meta])* $name:ident { $($field:ident = $key:literal : $help:literal),* $(,)? }) => {
        $(#[$meta])*
        #[derive(Args, Debug, Default, Clone)]
        struct $name {
            $(#[arg(long = $key, value_name = "VALUE", help = $help)] $field: Option<String>,)*
        }

        impl $name {
            fn pairs(&self) -> Vec<(&'static str, Option<&str>)> {
                vec![$(($key, self.$field.as_deref())),*]
            }
        }
    };
}

param_args!(CodeArgs {
    family = "family": "Block code: grs, spc, hamming or lrfc (no block code)",
    q = "q": "Field order 2, 4, 8, 16 or 256",
    n = "n": "Block length",
    k = "k": "Source block length",
    hamming_t = "hamming-t": "Hamming parameter t; implies --family hamming",
    betas = "betas": "GRS evaluation points, comma-separated field elements",
});

param_args!(BoundsArgs {
    scheme = "scheme": "concat, lrfc or both",
    eps = "eps": "Erasure probabilities, comma-separated",
    delta = "delta": "Receiver overheads, e.g. 0..8 [default: 0..8]",
});

param_args!(SimulateArgs {
    eps = "eps": "Erasure probabilities, comma-separated",
    delta = "delta": "Receiver overheads δ, e.g. 0..4",
    delta_tx = "delta-tx": "Transmission overheads Δ instead of --delta",
    trials = "trials": "Trials per point [default: 1000000]",
    seed = "seed": "Master seed [default: 1]",
    decoder = "decoder": "ge or hybrid [default: hybrid for GRS, else ge]",
});

param_args!(SystemArgs {
    receivers = "N": "Number of receivers [default: 10000]",
    eps = "eps": "Erasure probability",
    target = "target": "Target P_E for the smallest Δ [default: 1e-4]",
    delta_tx = "delta-tx": "Transmission overheads [default: 0..60]",
    model = "model": "Failure law: upper, lower, ideal or lrfc [default: upper]",
});

param_args!(SpectrumArgs {
    rate = "rate": "Code rates, comma-separated; l = round(k/r)",
    length = "length": "Total lengths l instead of --rate",
    ensemble = "ensemble": "Also emit the random-code ensemble at each l [default: false]",
});

param_args!(FiniteRateArgs {
    rate = "rate": "Code rates, comma-separated; l = round(k/r)",
    length = "length": "Total lengths l instead of --rate",
    eps = "eps": "Erasure probabilities, comma-separated",
    realizations = "realizations": "Random fountain parts; 0 skips simulation [default: 1000]",
    trials = "trials": "Erasure patterns per realization [default: 1000]",
    seed = "seed": "Master seed [default: 1]",
});

param_args!(EncodeArgs {
    source = "source": "k source symbols, comma-separated",
    count = "count": "Symbols to emit [default: n + k]",
    seed = "seed": "Seed of the fountain columns [default: 1]",
});

param_args!(DecodeArgs {
    input = "input": "CSV of received index,value pairs",
    seed = "seed": "Seed used when encoding [default: 1]",
    decoder = "decoder": "ge or hybrid [default: hybrid for GRS, else ge]",
});

#[derive(Args, Debug, Clone)]
struct Common {
    /// Flat key=value file; flags override its keys
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Figure parameter bundle (see README)
    #[arg(long, value_name = "NAME")]
    preset: Option<String>,
    /// CSV destination [default: stdout]
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,
    /// Worker threads for simulations; 0 uses all cores. Results do not depend on it
    #[arg(long, default_value_t = 0)]
    workers: usize,
}

#[derive(Parser, Debug)]
#[command(name = "cfountain", version, about = "MDS + random fountain code concatenation: bounds, simulation, spectra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decoding-failure bounds over a δ grid
    Bounds {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        code: CodeArgs,
        #[command(flatten)]
        args: BoundsArgs,
    },
    /// Monte Carlo decoding-failure rates
    Simulate {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        code: CodeArgs,
        #[command(flatten)]
        args: SimulateArgs,
    },
    /// Multicast failure probability and the smallest sufficient Δ
    System {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        code: CodeArgs,
        #[command(flatten)]
        args: SystemArgs,
    },
    /// Exact average weight spectrum of the fixed-length concatenation
    Spectrum {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        code: CodeArgs,
        #[command(flatten)]
        args: SpectrumArgs,
    },
    /// Block-error bounds and ensemble simulation at fixed length
    FiniteRate {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        code: CodeArgs,
        #[command(flatten)]
        args: FiniteRateArgs,
    },
    /// Emit encoded symbols as index,value rows
    Encode {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        code: CodeArgs,
        #[command(flatten)]
        args: EncodeArgs,
    },
    /// Recover the source block from index,value rows
    Decode {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        code: CodeArgs,
        #[command(flatten)]
        args: DecodeArgs,
    },
}

impl Command {
    fn parts(&self) -> (&'static str, &Common, Vec<(&'static str, Option<&str>)>) {
        let join = |a: Vec<_>, b: Vec<_>| a.into_iter().chain(b).collect();
        match self {
            Command::Bounds { common, code, args } => ("bounds", common, join(code.pairs(), args.pairs())),
            Command::Simulate { common, code, args } => ("simulate", common, join(code.pairs(), args.pairs())),
            Command::System { common, code, args } => ("system", common, join(code.pairs(), args.pairs())),
            Command::Spectrum { common, code, args } => ("spectrum", common, join(code.pairs(), args.pairs())),
            Command::FiniteRate { common, code, args } => {
                ("finite-rate", common, join(code.pairs(), args.pairs()))
            }
            Command::Encode { common, code, args } => ("encode", common, join(code.pairs(), args.pairs())),
            Command::Decode { common, code, args } => ("decode", common, join(code.pairs(), args.pairs())),
        }
    }
}

/// Preset runs, each overlaid with the config file and then the flags.
fn resolve(
    name: &str,
    common: &Common,
    flags: &[(&'static str, Option<&str>)],
) -> Result<Vec<Params>, Failure> {
    let mut runs = vec![BTreeMap::new()];
    if let Some(preset) = &common.preset {
        let (owner, preset_runs) = presets::expand(preset)?;
        if owner != name {
            return Err(Failure::usage(format!("preset {preset} belongs to the {owner} command")));
        }
        runs = preset_runs;
    }
    let file = match &common.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::usage(format!("config {}: {e}", path.display())))?;
            parse_kv(&text).map_err(|e| Failure::usage(format!("config {}: {e}", path.display())))?
        }
        None => BTreeMap::new(),
    };
    Ok(runs
        .into_iter()
        .map(|mut map| {
            map.extend(file.clone());
            for (k, v) in flags {
                if let Some(v) = v {
                    map.insert(k.to_string(), v.to_string());
                }
            }
            Params::new(map)
        })
        .collect())
}

fn render(name: &str, runs: &[(Params, Table)]) -> String {
    let mut out = String::new();
    for (p, t) in runs {
        out.push_str(&format!("# {}\n", p.command_line(name)));
        for m in &t.meta {
            out.push_str(&format!("# {m}\n"));
        }
    }
    if let Some((_, first)) = runs.first() {
        out.push_str(&first.header.join(","));
        out.push('\n');
    }
    for (_, t) in runs {
        for row in &t.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
    }
    out
}

fn execute(cli: Cli) -> Result<(), Failure> {
    let (name, common, flags) = cli.command.parts();
    let mut runs = Vec::new();
    for mut p in resolve(name, common, &flags)? {
        let table = commands::run(name, &mut p, common.workers)?;
        runs.push((p, table));
    }
    let csv = render(name, &runs);
    match &common.output {
        Some(path) => {
            fs::write(path, csv).with_context(|| format!("writing {}", path.display()))?;
            for (_, t) in &runs {
                for m in &t.meta {
                    println!("{m}");
                }
            }
        }
        None => io::stdout().write_all(csv.as_bytes()).context("writing to stdout")?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            eprintln!("{}", text.lines().next().unwrap_or("invalid arguments"));
            return ExitCode::from(2);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}
