//! `drinfeld`: batch reports on Drinfeld modules over F_q[T].
//!
//! Exit codes: 0 success, 1 a mathematical check failed, 2 usage error.

mod commands;
mod config;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use drinfeld_core::deform::LevelKind;
use serde_json::Value;

use commands::{Failure, ModuleArgs};
use config::{Format, SessionConfig};

#[derive(Parser)]
#[command(
    name = "drinfeld",
    version,
    about = "Drinfeld modules over F_q[T]: torsion, quotients, level structures, point counts, deformations"
)]
struct Cli {
    /// File with `key = value` lines (q, field, degree, max_ext_degree, max_candidates, format, seed).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Size of the constant field, e.g. 4 or 2^2.
    #[arg(long, global = true)]
    q: Option<String>,
    /// Coefficient field over F_p for prime q, e.g. "p=2 deg=2 mod=[1,1,1]".
    #[arg(long, global = true)]
    field: Option<String>,
    /// Degree of the coefficient field over F_q.
    #[arg(long, global = true)]
    degree: Option<usize>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, global = true)]
    max_ext_degree: Option<usize>,
    #[arg(long, global = true)]
    max_candidates: Option<u64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ModuleOpts {
    /// gamma(T) as a field element: an integer or a coefficient list.
    #[arg(long, default_value = "0")]
    gamma: String,
    /// Coefficients [a_1, .., a_r] of phi_T beyond the constant term.
    #[arg(long = "a")]
    a: String,
}

impl ModuleOpts {
    fn args(&self) -> ModuleArgs<'_> {
        ModuleArgs {
            gamma: &self.gamma,
            coeffs: &self.a,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// E[n] over its splitting field with the A/n-module structure.
    Torsion {
        #[command(flatten)]
        module: ModuleOpts,
        #[arg(long)]
        ideal: String,
    },
    /// Quotient by a finite subgroup given by its reduced points and local order.
    Quotient {
        #[command(flatten)]
        module: ModuleOpts,
        /// Degree over K of the field holding the kernel points.
        #[arg(long, default_value_t = 1)]
        ext: usize,
        #[arg(long)]
        kernel_points: String,
        /// e for a local part of order q^e.
        #[arg(long, default_value_t = 0)]
        mult: usize,
    },
    /// Rank, height at the characteristic, ordinary/supersingular and j.
    Classify {
        #[command(flatten)]
        module: ModuleOpts,
    },
    /// Counts (and with --list, listings) of level structures.
    Levels {
        #[command(flatten)]
        module: ModuleOpts,
        #[arg(long)]
        ideal: String,
        /// gamma0, gamma1 or full.
        #[arg(long, default_value = "gamma0")]
        kind: String,
        #[arg(long)]
        list: bool,
    },
    /// Points of Y0(n) over F_(q^(2m)) and the special-point bound for a given genus.
    Ihara {
        #[arg(long)]
        p: String,
        #[arg(long)]
        n: String,
        #[arg(long, allow_negative_numbers = true)]
        genus: Option<i64>,
        #[arg(long, default_value_t = 1)]
        closure_multiplier: usize,
        /// Include the point list.
        #[arg(long)]
        verbose: bool,
        /// Search for a triple where Gamma1 structures leave the transpose graph.
        #[arg(long)]
        gamma1_demo: bool,
    },
    /// Lift counts over k[eps]: `module`, or a level kind at the characteristic.
    DeformCheck {
        #[command(flatten)]
        module: ModuleOpts,
        #[arg(long, default_value = "gamma0")]
        kind: String,
    },
}

fn session(cli: &Cli) -> Result<SessionConfig, String> {
    let mut cfg = match &cli.config {
        Some(path) => SessionConfig::load(path)?,
        None => SessionConfig::default(),
    };
    if let Some(q) = &cli.q {
        cfg.set("q", q)?;
    }
    if let Some(f) = &cli.field {
        cfg.field = Some(f.clone());
    }
    if let Some(d) = cli.degree {
        cfg.degree = d;
    }
    if let Some(f) = cli.format {
        cfg.format = f;
    }
    if let Some(m) = cli.max_ext_degree {
        cfg.max_ext_degree = m;
    }
    if let Some(m) = cli.max_candidates {
        cfg.max_candidates = m;
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: &Cli, cfg: &SessionConfig) -> commands::Outcome {
    match &cli.command {
        Command::Torsion { module, ideal } => commands::torsion(cfg, &module.args(), ideal),
        Command::Quotient {
            module,
            ext,
            kernel_points,
            mult,
        } => commands::quotient(cfg, &module.args(), *ext, kernel_points, *mult),
        Command::Classify { module } => commands::classify(cfg, &module.args()),
        Command::Levels {
            module,
            ideal,
            kind,
            list,
        } => {
            let kind = LevelKind::parse(kind)
                .ok_or_else(|| Failure::Usage(format!("unknown kind `{kind}` (gamma0, gamma1, full)")))?;
            commands::levels(cfg, &module.args(), ideal, kind, *list)
        }
        Command::Ihara {
            p,
            n,
            genus,
            closure_multiplier,
            verbose,
            gamma1_demo,
        } => commands::ihara(cfg, p, n, *genus, *closure_multiplier, *verbose, *gamma1_demo),
        Command::DeformCheck { module, kind } => commands::deform_check(cfg, &module.args(), kind),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn render(v: &Value, format: Format) -> String {
    let Value::Object(map) = v else {
        return v.to_string();
    };
    match format {
        Format::Json => serde_json::to_string_pretty(v).expect("values serialize"),
        Format::Text => map
            .iter()
            .map(|(k, v)| format!("{k}: {}", scalar(v)))
            .collect::<Vec<_>>()
            .join("\n"),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(map.keys()).expect("in-memory write");
            w.write_record(map.values().map(scalar)).expect("in-memory write");
            let bytes = w.into_inner().expect("in-memory write");
            String::from_utf8(bytes).expect("utf-8 input").trim_end().to_string()
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return ExitCode::from(if usage { 2 } else { 0 });
        }
    };
    let cfg = match session(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match run(&cli, &cfg) {
        Ok((report, pass)) => {
            let text = render(&report, cfg.format);
            match &cli.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, text + "\n") {
                        eprintln!("error: {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => {
                    let _ = writeln!(std::io::stdout(), "{text}");
                }
            }
            if pass {
                ExitCode::SUCCESS
            } else {
                eprintln!("error: a reported check failed");
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Invariant(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
