//! `hyperosc`: command-line front end for the core crate.
//!
//! Exit codes: 0 ok, 1 domain error, 2 usage error, 3 internal failure.
//! Run configuration comes from flags, then `HYPEROSC_*` environment
//! variables, then defaults.

mod render;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hyperosc_core::census::CensusGrid;
use hyperosc_core::cover::{validate_cover, CoverInvariants};
use hyperosc_core::curves::{enumerate_exceptional, negative_curve_catalog};
use hyperosc_core::nef::{linear_system_dims, moduli_dimension, verify_minimizer_claim, z_divisor, NefMode, Reading};
use hyperosc_core::verify::{run_all, VerifyOptions};
use hyperosc_core::{
    census, construction_kit, decompose_type, generate_nef_types, generate_non_nef_types, lambda_class, nef_check,
    parse, CharPConfig, DivisorClass, Error, LambdaSpec, NefOptions, QuotientClass, Vec4,
};
use render::{Output, Table};
use serde::Serialize;
use serde_json::json;

#[derive(Debug, Parser)]
#[command(
    name = "hyperosc",
    version,
    about = "Divisor-class calculus for hyperelliptic covers of an elliptic curve"
)]
struct Cli {
    /// Odd prime characteristic; omit for characteristic 0.
    #[arg(long, global = true, env = "HYPEROSC_CHAR_P")]
    char_p: Option<i64>,

    /// Radius of the brute-force search box around μ.
    #[arg(long, global = true, env = "HYPEROSC_SEARCH_RADIUS", default_value_t = 3,
          value_parser = clap::value_parser!(i64).range(2..))]
    search_radius: i64,

    /// Reading of the third closed nef condition.
    #[arg(long, global = true, env = "HYPEROSC_READING", value_enum, default_value_t = ReadingArg::Factored)]
    reading: ReadingArg,

    #[arg(long, global = true, env = "HYPEROSC_OUTPUT", value_enum, default_value_t = Output::Json)]
    output: Output,

    /// Seed for randomized sweeps.
    #[arg(long, global = true, env = "HYPEROSC_SEED", default_value_t = 0x5eed)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ReadingArg {
    Factored,
    Literal,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Closed,
    Brute,
    Both,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Intersection number of two classes on the blow-up (or the quotient with --quotient).
    Intersect {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
        #[arg(long)]
        quotient: bool,
    },
    /// Arithmetic genus of a class.
    Genus {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long)]
        quotient: bool,
    },
    /// The class Λ(n, d, ρ, γ).
    Lambda {
        n: i64,
        d: i64,
        rho: i64,
        #[arg(value_parser = parse_vec4)]
        gamma: Vec4,
    },
    /// Split γ = (2d-1)μ + 2ε.
    Decompose {
        #[arg(value_parser = parse_vec4)]
        gamma: Vec4,
        d: i64,
    },
    /// Decide nefness of Λ(n, d, 1, γ).
    Nef {
        n: i64,
        d: i64,
        #[arg(value_parser = parse_vec4)]
        gamma: Vec4,
        #[arg(long, value_enum, default_value_t = ModeArg::Both)]
        mode: ModeArg,
    },
    /// Check that the minimal pairing is attained at μ, ♮μ or a ♭μ.
    Minimizer {
        n: i64,
        d: i64,
        #[arg(value_parser = parse_vec4)]
        gamma: Vec4,
    },
    /// The divisor Z~ of exceptional curves orthogonal to Λ.
    Zdiv {
        n: i64,
        d: i64,
        #[arg(value_parser = parse_vec4)]
        gamma: Vec4,
    },
    /// Dimensions of |Λ|, |Λ - C~o| and of the moduli space.
    Dims {
        n: i64,
        d: i64,
        #[arg(value_parser = parse_vec4)]
        gamma: Vec4,
    },
    /// Check the numerical constraints on a cover (n, d, g, g~, ρ, m, γ).
    Cover {
        n: i64,
        d: i64,
        g: i64,
        g_tilde: i64,
        rho: i64,
        m: i64,
        #[arg(value_parser = parse_vec4)]
        gamma: Vec4,
    },
    /// Exceptional curves with α^(2) up to a bound.
    Exceptional {
        #[arg(long)]
        max_sq: i64,
    },
    /// The (-2)-curves of the quotient.
    Catalog,
    /// Nef types for fixed (d, k, μ).
    FamilyNef {
        d: i64,
        k: usize,
        #[arg(value_parser = parse_vec4)]
        mu: Vec4,
    },
    /// Non-nef types for fixed (d, μ).
    FamilyNonnef {
        d: i64,
        #[arg(value_parser = parse_vec4)]
        mu: Vec4,
        #[arg(long)]
        bound: i64,
    },
    /// Divisors spanning the moduli space for ε = (0, d-1, d-1, d-1).
    Kit {
        d: i64,
        #[arg(value_parser = parse_vec4)]
        mu: Vec4,
    },
    /// Census over a grid of (n, d, γ).
    Census {
        #[arg(long, default_value_t = 1)]
        n_min: i64,
        #[arg(long)]
        n_max: i64,
        #[arg(long, default_value_t = 1)]
        d_min: i64,
        #[arg(long)]
        d_max: i64,
        #[arg(long)]
        gamma_max: i64,
        /// Worker threads; the output does not depend on it.
        #[arg(long, env = "HYPEROSC_WORKERS", default_value_t = 4)]
        workers: usize,
    },
    /// Run the numbered self-check suite.
    VerifyPaper,
}

fn parse_vec4(s: &str) -> Result<Vec4, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(format!("expected four comma-separated integers, got {s:?}"));
    }
    let mut v = [0i64; 4];
    for (slot, p) in v.iter_mut().zip(&parts) {
        *slot = p.parse().map_err(|e| format!("{p:?}: {e}"))?;
    }
    Ok(v)
}

/// Failure of a subcommand, mapped onto an exit code.
enum Failure {
    Usage(String),
    Domain(Error),
    /// A report was produced but it records violations.
    Reported,
    /// The self-check suite failed.
    Suite,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

struct Ctx {
    cfg: CharPConfig,
    nef: NefOptions,
    verify: VerifyOptions,
    output: Output,
}

fn expr(text: &str) -> Result<DivisorClass, Failure> {
    parse(text).map_err(|e| Failure::Usage(format!("cannot parse {text:?}: {e}")))
}

fn emit<T: Serialize>(ctx: &Ctx, value: &T) -> Result<(), Failure> {
    render::print(ctx.output, value, None).map_err(Failure::Usage)
}

fn emit_table<T: Serialize>(ctx: &Ctx, value: &T, table: Table) -> Result<(), Failure> {
    render::print(ctx.output, value, Some(table)).map_err(Failure::Usage)
}

fn run(cli: Cli) -> Result<(), Failure> {
    let cfg = CharPConfig::new(cli.char_p).map_err(|e| Failure::Usage(e.to_string()))?;
    let reading = match cli.reading {
        ReadingArg::Factored => Reading::Factored,
        ReadingArg::Literal => Reading::Literal,
    };
    let ctx = Ctx {
        cfg,
        nef: NefOptions {
            mode: NefMode::Both,
            reading,
            radius: cli.search_radius,
            cfg,
        },
        verify: VerifyOptions {
            seed: cli.seed,
            reading,
            radius: cli.search_radius,
        },
        output: cli.output,
    };
    match cli.command {
        Command::Intersect { a, b, quotient } => {
            let (a, b) = (expr(&a)?, expr(&b)?);
            let value = if quotient {
                QuotientClass::from_pullback(a.clone()).dot(&QuotientClass::from_pullback(b.clone()))?
            } else {
                a.dot(&b)
            };
            emit(
                &ctx,
                &json!({ "a": a, "b": b, "quotient": quotient, "intersection": value.to_string() }),
            )
        }
        Command::Genus { expr: text, quotient } => {
            let d = expr(&text)?;
            let genus = if quotient {
                QuotientClass::from_pullback(d.clone()).genus()?
            } else {
                d.arithmetic_genus()
            };
            emit(
                &ctx,
                &json!({ "class": d, "quotient": quotient, "genus": genus.to_string() }),
            )
        }
        Command::Lambda { n, d, rho, gamma } => {
            let spec = LambdaSpec { n, d, rho, gamma };
            let l = lambda_class(&spec, &ctx.cfg)?;
            let k = QuotientClass::canonical();
            emit(
                &ctx,
                &json!({
                    "spec": spec,
                    "pullback": l.pullback,
                    "self_intersection": l.self_intersection()?.to_string(),
                    "canonical_degree": l.dot(&k)?.to_string(),
                    "genus": l.genus()?.to_string(),
                }),
            )
        }
        Command::Decompose { gamma, d } => emit(&ctx, &decompose_type(&gamma, d)?),
        Command::Nef { n, d, gamma, mode } => {
            let mode = match mode {
                ModeArg::Closed => NefMode::Closed,
                ModeArg::Brute => NefMode::Brute,
                ModeArg::Both => NefMode::Both,
            };
            emit(
                &ctx,
                &nef_check(&LambdaSpec::new(n, d, gamma), &ctx.nef.with_mode(mode))?,
            )
        }
        Command::Minimizer { n, d, gamma } => emit(
            &ctx,
            &verify_minimizer_claim(&LambdaSpec::new(n, d, gamma), ctx.nef.radius, &ctx.cfg)?,
        ),
        Command::Zdiv { n, d, gamma } => {
            let r = z_divisor(&LambdaSpec::new(n, d, gamma), ctx.nef.radius, &ctx.cfg)?;
            let pullback = r.pullback();
            emit(&ctx, &json!({ "report": r, "pullback": pullback }))
        }
        Command::Dims { n, d, gamma } => {
            let spec = LambdaSpec::new(n, d, gamma);
            let dims = linear_system_dims(&spec, &ctx.nef)?;
            let moduli = moduli_dimension(&spec, &ctx.nef)?;
            emit(
                &ctx,
                &json!({
                    "dim_lambda": dims.dim_lambda,
                    "dim_lambda_minus_co": dims.dim_lambda_minus_co,
                    "moduli_dimension": moduli,
                }),
            )
        }
        Command::Cover {
            n,
            d,
            g,
            g_tilde,
            rho,
            m,
            gamma,
        } => {
            let inv = CoverInvariants {
                n,
                d,
                g,
                g_tilde,
                rho,
                m,
                gamma,
            };
            let report = validate_cover(&inv, &ctx.cfg)?;
            emit(&ctx, &report)?;
            if report.all_pass() {
                Ok(())
            } else {
                Err(Failure::Reported)
            }
        }
        Command::Exceptional { max_sq } => {
            let rows: Vec<_> = enumerate_exceptional(max_sq, &ctx.cfg)
                .into_iter()
                .map(|e| json!({ "alpha": e.alpha, "a": e.a, "k": e.k, "pullback": e.pullback() }))
                .collect();
            emit_table(&ctx, &rows, Table::Exceptional)
        }
        Command::Catalog => emit_table(&ctx, &negative_curve_catalog(&ctx.cfg), Table::Catalog),
        Command::FamilyNef { d, k, mu } => emit_table(&ctx, &generate_nef_types(d, k, &mu, &ctx.cfg)?, Table::Family),
        Command::FamilyNonnef { d, mu, bound } => {
            emit_table(&ctx, &generate_non_nef_types(d, &mu, bound, &ctx.cfg)?, Table::Family)
        }
        Command::Kit { d, mu } => emit(&ctx, &construction_kit(d, &mu)?),
        Command::Census {
            n_min,
            n_max,
            d_min,
            d_max,
            gamma_max,
            workers,
        } => {
            let grid = CensusGrid {
                n: n_min..=n_max,
                d: d_min..=d_max,
                gamma_max,
            };
            let records = census(&grid, &ctx.nef, workers)?;
            emit_table(&ctx, &records, Table::Census)
        }
        Command::VerifyPaper => {
            let outcomes = run_all(&ctx.verify);
            match ctx.output {
                Output::Json => emit(&ctx, &outcomes)?,
                _ => {
                    for o in &outcomes {
                        println!("{}", o.line());
                    }
                }
            }
            if outcomes.iter().all(|o| o.pass) {
                Ok(())
            } else {
                Err(Failure::Suite)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error[{}]: {e}", e.constraint_id());
            ExitCode::from(if e.is_internal() { 3 } else { 1 })
        }
        Err(Failure::Reported) => ExitCode::from(1),
        Err(Failure::Suite) => {
            eprintln!("error: self-check suite failed");
            ExitCode::from(3)
        }
    }
}
