//! Command-line front end. Exit codes: 0 success, 1 input error, 2 failed
//! mathematical cross-check.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::autaction::residual_action_dims;
use crate::bar::{compare_oracle, DEFAULT_GUARD};
use crate::complex::ComplexSpec;
use crate::manifold::{Builtin, ManifoldData};
use crate::series::{check_density_coincidence, euler_series_lhs, euler_series_rhs};
use crate::stability::{config_betti, verify_ranges};
use crate::{weights_up_to, Error};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_CHECK: i32 = 2;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Pretty,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "confhom", version, about = "Rational homology of configuration spaces and spaces of 0-cycles")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Pretty, global = true)]
    pub format: Format,

    /// Worker threads for independent slices
    #[arg(long, default_value_t = 1, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    pub jobs: u32,
}

#[derive(Debug, Args)]
pub struct ManifoldArg {
    /// `builtin:<name>[:<param>]` or `file:<path>`
    #[arg(long)]
    pub manifold: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Betti table of unordered configuration spaces
    Betti {
        #[command(flatten)]
        manifold: ManifoldArg,
        #[arg(long, default_value_t = 4)]
        n_max: u32,
        /// Defaults to 2·d·n_max
        #[arg(long)]
        i_max: Option<u32>,
    },
    /// Cone vanishing and stability ranges
    Stability {
        #[command(flatten)]
        manifold: ManifoldArg,
        #[arg(long, default_value_t = 5)]
        n_max: u32,
    },
    /// Homological densities and their coincidences
    Density {
        #[command(flatten)]
        manifold: ManifoldArg,
        /// Comma-separated m:k pairs
        #[arg(long, default_value = "1:2,2:1")]
        pairs: String,
        /// Maximum t-degree
        #[arg(long, default_value_t = 30)]
        trunc: u32,
    },
    /// Euler characteristic generating functions
    Euler {
        #[command(flatten)]
        manifold: ManifoldArg,
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[arg(long, default_value_t = 2)]
        k: u32,
        /// Maximum total s-degree
        #[arg(long, default_value_t = 8)]
        trunc: u32,
    },
    /// Koszul homology against the bar construction
    Oracle {
        #[command(flatten)]
        manifold: ManifoldArg,
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[arg(long, default_value_t = 2)]
        k: u32,
        /// Largest total weight
        #[arg(long, default_value_t = 4)]
        max_weight: u32,
        /// Refuse bar complexes above this total weight
        #[arg(long, default_value_t = DEFAULT_GUARD)]
        guard: u32,
    },
    /// Residual action dimensions
    Autaction {
        #[command(flatten)]
        manifold: ManifoldArg,
    },
    /// Validate a manifold description
    Validate {
        #[command(flatten)]
        manifold: ManifoldArg,
    },
}

pub fn parse_manifold(src: &str) -> Result<ManifoldData, Error> {
    if let Some(rest) = src.strip_prefix("builtin:") {
        rest.parse::<Builtin>()?.build()
    } else if let Some(path) = src.strip_prefix("file:") {
        ManifoldData::load(&PathBuf::from(path))
    } else {
        Err(Error::Parse(format!("manifold source `{src}` must start with builtin: or file:")))
    }
}

fn parse_pairs(s: &str) -> Result<Vec<(u32, u32)>, Error> {
    s.split(',')
        .map(|p| {
            let (m, k) = p
                .trim()
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("pair `{p}` is not of the form m:k")))?;
            let num = |x: &str| {
                x.trim().parse::<u32>().map_err(|_| Error::Parse(format!("`{x}` is not a natural number")))
            };
            Ok((num(m)?, num(k)?))
        })
        .collect()
}

enum Outcome {
    Ok,
    CheckFailed,
}

/// Runs the CLI on `args` (including the program name), writing to `out`
/// and `err`, and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.jobs as usize).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: cannot start {} workers: {e}", cli.jobs);
            return EXIT_INPUT;
        }
    };
    let mut buf = Vec::new();
    let result = pool.install(|| execute(&cli, &mut buf));
    let _ = out.write_all(&buf);
    match result {
        Ok(Outcome::Ok) => EXIT_OK,
        Ok(Outcome::CheckFailed) => EXIT_CHECK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}

fn execute(cli: &Cli, out: &mut Vec<u8>) -> Result<Outcome, Error> {
    let csv = cli.format == Format::Csv;
    match &cli.command {
        Command::Betti { manifold, n_max, i_max } => {
            let man = parse_manifold(&manifold.manifold)?;
            let i_max = i_max.unwrap_or(2 * man.dim() * n_max);
            let table = config_betti(&man, *n_max, i_max)?;
            if csv {
                write!(out, "{}", table.to_csv())?;
            } else {
                writeln!(out, "H^i(C_n({})) for n <= {n_max}, i <= {i_max}", man.name())?;
                write!(out, "{}", table.to_pretty())?;
            }
            Ok(Outcome::Ok)
        }
        Command::Stability { manifold, n_max } => {
            let man = parse_manifold(&manifold.manifold)?;
            let report = verify_ranges(&man, *n_max)?;
            if csv {
                writeln!(out, "n,i,cone_dim")?;
                for row in &report.cone {
                    for (i, d) in &row.dims {
                        writeln!(out, "{},{i},{d}", row.n)?;
                    }
                }
            } else {
                write!(out, "{}", report.table.to_pretty())?;
                writeln!(out, "cone homology:")?;
                for row in &report.cone {
                    let span = match (row.min_nonzero(), row.max_nonzero()) {
                        (Some(lo), Some(hi)) => format!("nonzero for {lo} <= i <= {hi}"),
                        _ => "zero".to_string(),
                    };
                    writeln!(out, "  n={}: {span}", row.n)?;
                }
                for note in &report.notes {
                    writeln!(out, "note: {note}")?;
                }
            }
            for v in &report.violations {
                writeln!(out, "violation: {v}")?;
            }
            if report.ok() {
                writeln!(out, "stability ranges verified for n <= {n_max}")?;
                Ok(Outcome::Ok)
            } else {
                Ok(Outcome::CheckFailed)
            }
        }
        Command::Density { manifold, pairs, trunc } => {
            let man = parse_manifold(&manifold.manifold)?;
            let pairs = parse_pairs(pairs)?;
            let report = check_density_coincidence(&man, &pairs, *trunc)?;
            for ((m, k), s) in &report.series {
                if csv {
                    writeln!(out, "# m={m},k={k}")?;
                    write!(out, "{}", s.to_csv())?;
                } else {
                    writeln!(out, "(m,k)=({m},{k}): {s}")?;
                }
            }
            writeln!(out, "{}", report.verdict())?;
            Ok(Outcome::Ok)
        }
        Command::Euler { manifold, m, k, trunc } => {
            let man = parse_manifold(&manifold.manifold)?;
            let spec = ComplexSpec::new(man, *m, *k)?;
            let lhs = euler_series_lhs(&spec, *trunc);
            let rhs = euler_series_rhs(&spec, *trunc);
            if csv {
                writeln!(out, "# lhs")?;
                write!(out, "{}", lhs.to_csv())?;
                writeln!(out, "# rhs")?;
                write!(out, "{}", rhs.to_csv())?;
            } else {
                writeln!(out, "lhs: {lhs}")?;
                writeln!(out, "rhs: {rhs}")?;
            }
            if lhs == rhs {
                writeln!(out, "identity holds to s^{trunc}")?;
                Ok(Outcome::Ok)
            } else {
                let diff = lhs.sub(&rhs);
                writeln!(out, "identity fails: lhs - rhs = {diff}")?;
                Ok(Outcome::CheckFailed)
            }
        }
        Command::Oracle { manifold, m, k, max_weight, guard } => {
            let man = parse_manifold(&manifold.manifold)?;
            let spec = ComplexSpec::new(man, *m, *k)?;
            let weights = weights_up_to(*m as usize, *max_weight);
            let reports = {
                use rayon::prelude::*;
                weights
                    .par_iter()
                    .map(|w| compare_oracle(&spec, w, *guard))
                    .collect::<Result<Vec<_>, _>>()?
            };
            if csv {
                writeln!(out, "weight,homdeg,koszul,bar")?;
            }
            let mut all = true;
            for r in &reports {
                all &= r.equal();
                let w = r.weight.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
                if csv {
                    let degs: std::collections::BTreeSet<u32> =
                        r.koszul.keys().chain(r.bar.keys()).copied().collect();
                    for j in degs {
                        let kz = r.koszul.get(&j).copied().unwrap_or(0);
                        let br = r.bar.get(&j).copied().unwrap_or(0);
                        writeln!(out, "{w},{j},{kz},{br}")?;
                    }
                } else {
                    let verdict = if r.equal() { "equal" } else { "MISMATCH" };
                    writeln!(out, "w=({w}): koszul {:?} bar {:?} {verdict}", r.koszul, r.bar)?;
                }
            }
            if all {
                writeln!(out, "oracle agrees on {} weights", reports.len())?;
                Ok(Outcome::Ok)
            } else {
                writeln!(out, "oracle mismatch")?;
                Ok(Outcome::CheckFailed)
            }
        }
        Command::Autaction { manifold } => {
            let man = parse_manifold(&manifold.manifold)?;
            if man.orientable() && man.dim() % 2 == 1 {
                writeln!(
                    out,
                    "{} is odd-dimensional and orientable: the automorphisms act trivially on H^*(C_n)",
                    man.name()
                )?;
                return Ok(Outcome::Ok);
            }
            let report = residual_action_dims(&man)?;
            if csv {
                write!(out, "{}", report.to_csv())?;
            } else {
                for (q, d) in &report.per_degree {
                    writeln!(out, "Hom(H_{q}, (S^2/im D)_{}): {d}", q + 1)?;
                }
            }
            writeln!(out, "total: {}", report.total)?;
            Ok(Outcome::Ok)
        }
        Command::Validate { manifold } => {
            let man = parse_manifold(&manifold.manifold)?;
            man.validate()?;
            writeln!(
                out,
                "ok: {} (dim {}, {})",
                man.name(),
                man.dim(),
                if man.orientable() { "orientable" } else { "nonorientable" }
            )?;
            Ok(Outcome::Ok)
        }
    }
}
