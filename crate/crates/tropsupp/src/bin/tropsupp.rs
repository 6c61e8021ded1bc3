//! Command line front end.
//!
//! Exit codes: 0 success, 1 a checked property failed, 2 unreadable or malformed
//! input, 3 inconsistent input, 4 a cap was exceeded.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use tropsupp::complex::ConeComplex;
use tropsupp::error::{Error, Result};
use tropsupp::groebner::charts::{chart_fan, verify_flatness_conditions};
use tropsupp::groebner::flatlimit::{flat_limit, verify_model};
use tropsupp::groebner::module::Module;
use tropsupp::groebner::strat::{groebner_stratification, sample_disagreements};
use tropsupp::io::json::{complex_from_json, complex_to_json, parse_str, to_string, vecs_value};
use tropsupp::io::pl::support_to_json;
use tropsupp::io::poset::{poset_dot, poset_to_json};
use tropsupp::io::svg::slice_svg;
use tropsupp::io::text::read_module;
use tropsupp::supp::enumerate::enumerate_strata;

#[derive(Parser)]
#[command(name = "tropsupp", version, about = "Tropical supports of module quotients on toric varieties")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Common refinement of two fans with the same support.
    Refine {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        fan: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Stratify a fan by the initial submodules of a module.
    Support {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        fan: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the height-one slice (rank at most 3).
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Compare this many sampled directions against a direct computation.
        #[arg(long, default_value_t = 0)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Flatness conditions of a chart module for a model of its coordinate cone.
    Flatness {
        #[arg(long = "in")]
        input: PathBuf,
        /// The chart's coordinate cone; checked against the module's ring when given.
        #[arg(long)]
        fan: Option<PathBuf>,
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Flat limit of a family over the first `base` polynomial variables.
    Flatlimit {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        fan: PathBuf,
        #[arg(long, default_value_t = 1)]
        base: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Run the flatness checks for the produced model on every chart.
        #[arg(long)]
        verify: bool,
    },
    /// Types of tropical supports with at most `max-corners` marked corners.
    SuppEnum {
        #[arg(long)]
        fan: PathBuf,
        #[arg(long, default_value_t = 2)]
        max_corners: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn write(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Semantic(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_fan(path: &Path) -> Result<ConeComplex> {
    complex_from_json(&parse_str(&read(path)?)?)
}

fn read_module_file(path: &Path) -> Result<Module> {
    read_module(&read(path)?)
}

/// Runs one job and returns its exit code.
fn run(cmd: Cmd) -> Result<u8> {
    match cmd {
        Cmd::Refine { input, fan, out } => {
            let r = read_fan(&input)?.common_refinement(&read_fan(&fan)?)?;
            write(out.as_deref(), &to_string(&complex_to_json(&r)))?;
            Ok(0)
        }
        Cmd::Support { input, fan, out, svg, samples, seed } => {
            let m = read_module_file(&input)?;
            let t = groebner_stratification(&m, &read_fan(&fan)?)?;
            let mut doc = support_to_json(&t);
            let mut code = 0;
            if samples > 0 {
                let bad = sample_disagreements(&m, &t, seed, samples)?;
                code = u8::from(!bad.is_empty());
                doc["sample_check"] = json!({ "samples": samples, "seed": seed, "disagreements": vecs_value(&bad) });
            }
            if let Some(p) = svg {
                write(Some(&p), &slice_svg(&t.pl)?)?;
            }
            write(out.as_deref(), &to_string(&doc))?;
            Ok(code)
        }
        Cmd::Flatness { input, fan, model, out } => {
            let m = read_module_file(&input)?;
            if let Some(f) = fan {
                let f = read_fan(&f)?;
                if f.rank != m.ring.nvars() || !f.same_support(&chart_fan(&m.ring)) {
                    return Err(Error::Semantic("the fan is not the coordinate cone of the module's ring".into()));
                }
            }
            let report = verify_flatness_conditions(&m, &read_fan(&model)?)?;
            let doc = serde_json::to_value(&report).expect("plain report");
            write(out.as_deref(), &to_string(&doc))?;
            Ok(u8::from(!report.all_true()))
        }
        Cmd::Flatlimit { input, fan, base, out, svg, verify } => {
            let m = read_module_file(&input)?;
            let fan = read_fan(&fan)?;
            let lim = flat_limit(&m, &fan, base)?;
            let mut doc = json!({
                "support": support_to_json(&lim.support),
                "model": complex_to_json(&lim.model),
                "ambient": complex_to_json(&lim.ambient),
            });
            let mut code = 0;
            if verify {
                let reports = verify_model(&m, &fan, base, &lim.model)?;
                code = u8::from(!reports.iter().all(|r| r.all_true()));
                doc["reports"] = serde_json::to_value(&reports).expect("plain reports");
            }
            if let Some(p) = svg {
                write(Some(&p), &slice_svg(&lim.support.pl)?)?;
            }
            write(out.as_deref(), &to_string(&doc))?;
            Ok(code)
        }
        Cmd::SuppEnum { fan, max_corners, out, dot } => {
            let theta = read_fan(&fan)?;
            let p = enumerate_strata(&theta, max_corners)?;
            if let Some(d) = dot {
                write(Some(&d), &poset_dot(&p))?;
            }
            write(out.as_deref(), &to_string(&poset_to_json(&theta, &p)))?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(t) = std::env::var("TROPSUPP_THREADS") {
        match t.parse::<usize>() {
            Ok(n) => tropsupp::par::configure_threads(n),
            Err(_) => {
                eprintln!("TROPSUPP_THREADS must be a number, not `{t}`");
                return ExitCode::from(2);
            }
        }
    }
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("tropsupp: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
