//! Command-line frontend. Every subcommand is a thin adapter over the
//! library: parse flags, call in, format the result.
//!
//! Exit codes: 0 success/verified, 1 counterexample or property violation
//! found, 2 usage or input error.

use std::io::BufRead;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use spinpq_core::{
    deficiency_delta_formula, deficiency_profile, deficient_indices, is_u_small_oracle,
    omega_table, pencil_profile, spin_norm, u_large_witness, verify_all_properties,
    verify_lemma_down, verify_prop_boundary, verify_theorem, GroupShape, KWeight, SweepGrid,
    SweepOptions, VerificationReport,
};

#[derive(Parser)]
#[command(
    name = "spinpq",
    version,
    about = "Exact K-type combinatorics for Sp(p,q): omega tables, spin norms, \
             u-small hull membership, deficiency analysis, verification sweeps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the omega table of a shape, or a single element of it
    Omega {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
        /// Print only the element with this index
        #[arg(long)]
        index: Option<usize>,
        #[arg(long, value_enum, default_value_t = TextFormat::Table)]
        format: TextFormat,
    },
    /// Squared spin norm of a weight with all attaining indices
    Spin {
        /// Weight literal `a1,...,ap|b1,...,bq`; omit to read literals from stdin
        #[arg(long)]
        weight: Option<String>,
        /// Also list the squared k-value of the residual at every index
        #[arg(long)]
        all: bool,
        #[arg(long, value_enum, default_value_t = TextFormat::Json)]
        format: TextFormat,
        /// Add the square root, to six decimals
        #[arg(long)]
        sqrt: bool,
    },
    /// u-small hull membership with the first witnessing split
    Usmall {
        #[arg(long)]
        weight: Option<String>,
        /// Also evaluate the literal pairing criterion and check agreement
        #[arg(long)]
        oracle: bool,
    },
    /// Hull flag and squared spin norm along the pencil mu, mu+beta, ...
    Pencil {
        #[arg(long)]
        weight: Option<String>,
        /// Number of beta steps to tabulate
        #[arg(long)]
        steps: u64,
        #[arg(long, value_enum, default_value_t = PencilFormat::Json)]
        format: PencilFormat,
    },
    /// Deficient indices of a weight, with their profiles
    Deficient {
        #[arg(long)]
        weight: Option<String>,
    },
    /// Exhaustive verification sweeps
    Verify {
        #[command(subcommand)]
        suite: VerifySuite,
    },
}

#[derive(Subcommand)]
enum VerifySuite {
    /// Spin norm strictly increases along pencils beyond the u-small hull
    Theorem(VerifyArgs),
    /// Every supporting property suite that applies to the shape
    Properties(VerifyArgs),
    /// Deficient indices of boundary weights never attain the spin norm
    Boundary(VerifyArgs),
    /// Boundary descent witnesses exist and are dominated
    LemmaDown(VerifyArgs),
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    p: usize,
    #[arg(long)]
    q: usize,
    /// Largest coordinate in the sweep grid (default 2q+2)
    #[arg(long)]
    cap: Option<i64>,
    /// Worker pool size (default: one per core)
    #[arg(long)]
    jobs: Option<usize>,
    /// Checkpoint file, written after every batch
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Resume from the checkpoint file
    #[arg(long)]
    resume: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TextFormat {
    Json,
    Table,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PencilFormat {
    Json,
    Csv,
}

fn main() {
    let cli = Cli::parse();
    std::process::exit(run(cli));
}

fn run(cli: Cli) -> i32 {
    match cli.command {
        Command::Omega { p, q, index, format } => cmd_omega(p, q, index, format),
        Command::Spin {
            weight,
            all,
            format,
            sqrt,
        } => cmd_spin(weight, all, format, sqrt),
        Command::Usmall { weight, oracle } => cmd_usmall(weight, oracle),
        Command::Pencil {
            weight,
            steps,
            format,
        } => cmd_pencil(weight, steps, format),
        Command::Deficient { weight } => cmd_deficient(weight),
        Command::Verify { suite } => cmd_verify(suite),
    }
}

fn fail_usage(msg: impl std::fmt::Display) -> i32 {
    eprintln!("error: {msg}");
    2
}

fn envelope(shape: GroupShape, weight: Option<&KWeight>, result: Value) -> Value {
    json!({
        "p": shape.p(),
        "q": shape.q(),
        "weight": weight.map(|w| w.to_string()),
        "result": result,
        "version": env!("CARGO_PKG_VERSION"),
    })
}

/// Runs a per-weight command on the `--weight` literal, or on every literal
/// read from stdin (one per line, `#` comments skipped). Stdin mode emits
/// one JSON object per line.
fn for_each_weight(
    weight: Option<String>,
    mut body: impl FnMut(&KWeight) -> Result<(), String>,
) -> i32 {
    let mut run_one = |literal: &str| {
        literal
            .parse::<KWeight>()
            .map_err(|e| e.to_string())
            .and_then(|w| body(&w))
    };
    match weight {
        Some(literal) => match run_one(&literal) {
            Ok(()) => 0,
            Err(e) => fail_usage(e),
        },
        None => {
            let stdin = std::io::stdin();
            for line in stdin.lock().lines() {
                let line = match line {
                    Ok(l) => l,
                    Err(e) => return fail_usage(e),
                };
                let trimmed = line.trim();
                if trimmed.is_empty() || trimmed.starts_with('#') {
                    continue;
                }
                if let Err(e) = run_one(trimmed) {
                    return fail_usage(e);
                }
            }
            0
        }
    }
}

fn join(xs: &[i64]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn cmd_omega(p: usize, q: usize, index: Option<usize>, format: TextFormat) -> i32 {
    let shape = match GroupShape::new(p, q) {
        Ok(s) => s,
        Err(e) => return fail_usage(e),
    };
    let table = omega_table(shape);
    let line = |e: &spinpq_core::OmegaElement| {
        format!("{}: {} | {}", e.index(), join(e.head()), join(e.tail()))
    };
    let element_json =
        |e: &spinpq_core::OmegaElement| json!({"index": e.index(), "head": e.head(), "tail": e.tail()});
    match index {
        Some(i) => {
            let elem = match table.get(i) {
                Ok(e) => e,
                Err(e) => return fail_usage(e),
            };
            match format {
                TextFormat::Table => println!("{}", line(elem)),
                TextFormat::Json => println!(
                    "{}",
                    envelope(shape, None, json!({"element": element_json(elem)}))
                ),
            }
        }
        None => match format {
            TextFormat::Table => {
                for elem in table.iter() {
                    println!("{}", line(elem));
                }
            }
            TextFormat::Json => {
                let elements: Vec<Value> = table.iter().map(element_json).collect();
                println!(
                    "{}",
                    envelope(shape, None, json!({"count": table.len(), "elements": elements}))
                );
            }
        },
    }
    0
}

fn sqrt_string(sq: u64) -> String {
    format!("{:.6}", (sq as f64).sqrt())
}

fn cmd_spin(weight: Option<String>, all: bool, format: TextFormat, sqrt: bool) -> i32 {
    for_each_weight(weight, |mu| {
        let result = spin_norm(mu);
        match format {
            TextFormat::Json => {
                let mut body = json!({
                    "spin_norm_sq": result.spin_norm_sq,
                    "argmin_indices": result.argmin_indices,
                    "first_argmin": result.first_argmin,
                });
                if sqrt {
                    body["spin_norm"] = Value::String(sqrt_string(result.spin_norm_sq));
                }
                if all {
                    let table = omega_table(mu.shape());
                    let values: Vec<u64> = table
                        .iter()
                        .map(|e| mu.vector().subtract(e.vector()).k_value_sq())
                        .collect();
                    body["k_values"] = json!(values);
                }
                println!("{}", envelope(mu.shape(), Some(mu), body));
            }
            TextFormat::Table => {
                print!("spin_norm_sq: {}", result.spin_norm_sq);
                if sqrt {
                    print!(" (sqrt {})", sqrt_string(result.spin_norm_sq));
                }
                println!();
                println!("argmin: {}", join_usize(&result.argmin_indices));
                if all {
                    let table = omega_table(mu.shape());
                    for e in table.iter() {
                        println!("{}: {}", e.index(), mu.vector().subtract(e.vector()).k_value_sq());
                    }
                }
            }
        }
        Ok(())
    })
}

fn join_usize(xs: &[usize]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn cmd_usmall(weight: Option<String>, oracle: bool) -> i32 {
    let mut disagreement = false;
    let code = for_each_weight(weight, |mu| {
        let witness = u_large_witness(mu);
        let u_small = witness.is_none();
        let mut body = json!({
            "u_small": u_small,
            "witness": witness.map(|w| json!({"f": w.f, "g": w.g, "lhs": w.lhs, "rhs": w.rhs})),
        });
        if oracle {
            let oracle_small = is_u_small_oracle(mu);
            let agrees = oracle_small == u_small;
            body["oracle_u_small"] = json!(oracle_small);
            body["oracle_agrees"] = json!(agrees);
            if !agrees {
                eprintln!(
                    "oracle disagreement on {mu}: prefix route u_small={u_small}, pairing route u_small={oracle_small}"
                );
                disagreement = true;
            }
        }
        println!("{}", envelope(mu.shape(), Some(mu), body));
        Ok(())
    });
    if code != 0 {
        code
    } else if disagreement {
        1
    } else {
        0
    }
}

fn cmd_pencil(weight: Option<String>, steps: u64, format: PencilFormat) -> i32 {
    for_each_weight(weight, |mu| {
        let rows = pencil_profile(mu, steps).map_err(|e| e.to_string())?;
        match format {
            PencilFormat::Json => {
                let rows: Vec<Value> = rows
                    .iter()
                    .map(|r| json!({"m": r.m, "u_small": r.u_small, "spin_norm_sq": r.spin_norm_sq}))
                    .collect();
                println!("{}", envelope(mu.shape(), Some(mu), json!({"rows": rows})));
            }
            PencilFormat::Csv => {
                println!("m,u_small,spin_norm_sq");
                for r in rows {
                    println!("{},{},{}", r.m, r.u_small, r.spin_norm_sq);
                }
            }
        }
        Ok(())
    })
}

fn cmd_deficient(weight: Option<String>) -> i32 {
    for_each_weight(weight, |mu| {
        let indices = deficient_indices(mu);
        let profiles: Vec<Value> = indices
            .iter()
            .map(|&ell| {
                let p = deficiency_profile(mu, ell).expect("index from the same table");
                let delta = deficiency_delta_formula(&p, mu.shape());
                json!({
                    "index": p.index,
                    "residual": p.residual.to_string(),
                    "head_ge": p.head_ge,
                    "head_gt": p.head_gt,
                    "tail_ge": p.tail_ge,
                    "tail_gt": p.tail_gt,
                    "k_value_sq": p.k_value_sq,
                    "k_value_sq_shifted": p.k_value_sq_shifted,
                    "delta_formula": delta,
                })
            })
            .collect();
        println!(
            "{}",
            envelope(
                mu.shape(),
                Some(mu),
                json!({"deficient_indices": indices, "profiles": profiles})
            )
        );
        Ok(())
    })
}

fn print_report(report: &VerificationReport) {
    println!("grid: {}", report.grid);
    for claim in &report.claims_checked {
        let hits = report
            .counterexamples
            .iter()
            .filter(|c| &c.claim == claim)
            .count();
        if hits == 0 {
            println!("claim {claim}: ok");
        } else {
            println!("claim {claim}: {hits} counterexamples");
        }
    }
    if let Some(token) = &report.checkpoint {
        println!(
            "interrupted: {} weights scanned, resume token {token} [{:.2?}]",
            report.weights_scanned, report.wall_time
        );
    } else if report.verified() {
        println!(
            "verified: {} weights scanned, 0 counterexamples [{:.2?}]",
            report.weights_scanned, report.wall_time
        );
    } else {
        println!(
            "FAILED: {} weights scanned, {} counterexamples [{:.2?}]",
            report.weights_scanned,
            report.counterexamples.len(),
            report.wall_time
        );
        for c in &report.counterexamples {
            println!("  {c}");
        }
    }
}

type SweepRunner = fn(&SweepGrid, &SweepOptions) -> spinpq_core::Result<VerificationReport>;

fn cmd_verify(suite: VerifySuite) -> i32 {
    let (args, runner): (&VerifyArgs, SweepRunner) = match &suite {
        VerifySuite::Theorem(a) => (a, verify_theorem),
        VerifySuite::Properties(a) => (a, verify_all_properties),
        VerifySuite::Boundary(a) => (a, verify_prop_boundary),
        VerifySuite::LemmaDown(a) => (a, verify_lemma_down),
    };
    let shape = match GroupShape::new(args.p, args.q) {
        Ok(s) => s,
        Err(e) => return fail_usage(e),
    };
    if args.cap.is_some_and(|cap| cap < 1) {
        return fail_usage("cap must be at least 1");
    }
    let grid = match args.cap {
        Some(cap) => SweepGrid::with_cap(shape, cap),
        None => SweepGrid::new(shape),
    };
    let opts = SweepOptions {
        jobs: args.jobs,
        checkpoint: args.checkpoint.clone(),
        resume: args.resume,
        stream: true,
        max_weights: None,
    };
    match runner(&grid, &opts) {
        Ok(report) => {
            print_report(&report);
            if report.verified() {
                0
            } else {
                1
            }
        }
        Err(e) => fail_usage(e),
    }
}
