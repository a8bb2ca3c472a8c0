use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use num_rational::BigRational;
use serde_json::{json, Value};

use symh_core::bounds::{verify, Theorem};
use symh_core::characters::{an_character_value, CharacterEvaluator};
use symh_core::exact::{self, ExactJson};
use symh_core::harmonic::{self, globalness_certificate, ValueReport, BRUTE_FORCE_MAX_N};
use symh_core::lock::{ConstantsLock, LockStatus, LOCK_FILE};
use symh_core::mixing;
use symh_core::{ClassFunction, CycleType, Group, MixingProfile, Partition, DEFAULT_SEED};

mod output;

use output::{Format, Output, Table};

#[derive(Parser)]
#[command(name = "symh", version, about = "Exact harmonic analysis on S_n and A_n")]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Seed for sampled sweeps.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Character values and tables.
    #[command(subcommand)]
    Char(CharCommand),
    /// `‖χ_λ‖_q` on S_n.
    Norm {
        #[arg(long)]
        lambda: Partition,
        #[arg(long)]
        q: f64,
        /// Report the exact q-th power (even q only).
        #[arg(long)]
        exact: bool,
    },
    /// Kronecker coefficient g(λ, μ, ν).
    Kronecker {
        #[arg(long)]
        l: Partition,
        #[arg(long)]
        m: Partition,
        #[arg(long)]
        nu: Partition,
    },
    /// Globalness certificate for χ_λ.
    Global {
        #[arg(long)]
        lambda: Partition,
        /// Also check coset restrictions by brute force (n <= 8).
        #[arg(long)]
        brute: bool,
    },
    /// Exact checks and constant fits for the character bounds.
    Verify {
        #[arg(long, default_value = "all")]
        theorem: Theorem,
        #[arg(long, default_value_t = 10)]
        n_max: usize,
        /// Also write the JSON report to PATH.
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
        /// Rewrite locked constants instead of comparing them.
        #[arg(long)]
        update_locks: bool,
        #[arg(long, default_value = LOCK_FILE)]
        lock: PathBuf,
    },
    /// Random-walk mixing profiles.
    Mix(MixArgs),
}

#[derive(Subcommand)]
enum CharCommand {
    /// χ_λ on one cycle type.
    Eval {
        #[arg(long)]
        lambda: Partition,
        #[arg(long = "type")]
        cycle_type: CycleType,
        #[arg(long, default_value = "S")]
        group: Group,
    },
    /// Full character table of S_n.
    Table {
        #[arg(long)]
        n: usize,
    },
}

#[derive(clap::Args)]
#[command(args_conflicts_with_subcommands = true)]
struct MixArgs {
    #[command(subcommand)]
    command: Option<MixCommand>,
    #[command(flatten)]
    profile: ProfileArgs,
}

#[derive(clap::Args)]
struct ProfileArgs {
    #[arg(long, default_value = "A")]
    group: Group,
    #[arg(long)]
    n: Option<usize>,
    /// Step class; the walk is its normalized indicator.
    #[arg(long)]
    class: Option<CycleType>,
    #[arg(long, default_value_t = 8)]
    steps: usize,
    /// Kept for compatibility; JSON is the default format.
    #[arg(long)]
    json: bool,
    /// Also report the mixing time to this accuracy in L1 and L2.
    #[arg(long)]
    eps: Option<f64>,
}

#[derive(Subcommand)]
enum MixCommand {
    /// The few-fixed-points walk that needs more than ℓ steps.
    LowerBound {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        ell: usize,
    },
    /// ⟨f ∗ g, h⟩ - 1 for normal sets given as `;`-separated cycle types.
    Product {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        c: String,
        #[arg(long, default_value = "A")]
        group: Group,
        /// Cross-check by definitional convolution (n <= 8).
        #[arg(long)]
        direct: bool,
    },
    /// Diagonal sum of the fixed-points-plus-long-cycle class.
    NonMixer {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = mixing::NON_MIXER_KAPPA)]
        kappa: f64,
    },
    /// Distance of f₁ ∗ ⋯ ∗ f_ℓ from uniform, one `--class` per step.
    Multi {
        #[arg(long, default_value = "A")]
        group: Group,
        #[arg(long, required = true)]
        class: Vec<CycleType>,
    },
    /// Two-step return values over the family 1^m (n-m) on A_n.
    TwoStep {
        #[arg(long)]
        n: usize,
    },
}

/// A command's result and whether its hard checks passed.
struct Run {
    output: Output,
    ok: bool,
}

impl Run {
    fn ok(output: Output) -> Self {
        Run { output, ok: true }
    }
}

fn value_report(op: &str, inputs: Value, exact: Option<&BigRational>, float: f64, witness: Value) -> Output {
    let report = ValueReport { op: op.into(), inputs, exact: exact.map(ExactJson::from), float, witness };
    let exact_cell = exact.map(exact::format_rational).unwrap_or_default();
    Output::new(serde_json::to_value(&report).unwrap()).table(Table::new(
        "value",
        &["op", "exact", "float"],
        vec![vec![op.to_string(), exact_cell, float.to_string()]],
    ))
}

fn char_command(cmd: CharCommand) -> Result<Run> {
    match cmd {
        CharCommand::Eval { lambda, cycle_type, group } => {
            let v = match group {
                Group::Symmetric => CharacterEvaluator::global().mn_value(&lambda, &cycle_type)?,
                Group::Alternating => an_character_value(&lambda, &cycle_type)?,
            };
            let q = BigRational::from_integer(v);
            let inputs = json!({ "lambda": lambda, "type": cycle_type, "group": group });
            Ok(Run::ok(value_report("char.eval", inputs, Some(&q), exact::rational_to_f64(&q), Value::Null)))
        }
        CharCommand::Table { n } => {
            let table = CharacterEvaluator::global().character_table(n)?;
            let cells = table.to_cells();
            let (header, rows) = cells.split_first().expect("table has a header");
            let header: Vec<&str> = header.iter().map(String::as_str).collect();
            Ok(Run::ok(
                Output::new(serde_json::to_value(table.to_json())?).table(Table::new("characters", &header, rows.to_vec())),
            ))
        }
    }
}

fn verify_command(theorem: Theorem, n_max: usize, json_path: Option<PathBuf>, update: bool, lock_path: PathBuf) -> Result<Run> {
    let start = Instant::now();
    let reports = verify(theorem, n_max)?;
    let mut lock = ConstantsLock::load(&lock_path)?;
    let checks = lock.compare(&reports);
    let drift = checks.iter().any(|c| c.is_drift());
    if update {
        lock.update(&reports);
        lock.save(&lock_path).with_context(|| format!("writing {}", lock_path.display()))?;
    }
    let hard_ok = reports.iter().all(|r| r.passed());
    let ok = hard_ok && (update || !drift);
    for r in &reports {
        eprintln!(
            "{} {} instances={} failures={} constants={}",
            if r.passed() { "PASS" } else { "FAIL" },
            r.theorem,
            r.instances,
            r.failure_count,
            r.constants.len()
        );
    }
    for c in checks.iter().filter(|c| !matches!(c.status, LockStatus::Match)) {
        match c.status {
            LockStatus::Drift { locked, relative } => {
                eprintln!("DRIFT {} current={} locked={locked} relative={relative:.3e}", c.id, c.current)
            }
            _ => eprintln!("UNLOCKED {} current={}", c.id, c.current),
        }
    }
    eprintln!("elapsed {:.2}s", start.elapsed().as_secs_f64());

    let doc = json!({
        "theorem": theorem.id(),
        "n_max": n_max,
        "passed": ok,
        "reports": reports,
        "locks": checks,
    });
    if let Some(path) = json_path {
        std::fs::write(&path, serde_json::to_string_pretty(&doc)? + "\n")
            .with_context(|| format!("writing {}", path.display()))?;
    }

    let summary = reports
        .iter()
        .map(|r| {
            vec![
                r.theorem.clone(),
                r.hard.to_string(),
                r.instances.to_string(),
                r.failure_count.to_string(),
                r.passed().to_string(),
            ]
        })
        .collect();
    let constants = reports
        .iter()
        .flat_map(|r| &r.constants)
        .map(|c| {
            vec![
                c.id.clone(),
                serde_json::to_value(c.kind).unwrap().as_str().unwrap_or_default().to_string(),
                c.value.map(|v| format!("{v:?}")).unwrap_or_default(),
            ]
        })
        .collect();
    let locks = checks
        .iter()
        .map(|c| {
            let (status, locked) = match c.status {
                LockStatus::Match => ("match", String::new()),
                LockStatus::Drift { locked, .. } => ("drift", format!("{locked:?}")),
                LockStatus::Missing => ("missing", String::new()),
            };
            vec![c.id.clone(), format!("{:?}", c.current), status.to_string(), locked]
        })
        .collect();
    let output = Output::new(doc)
        .table(Table::new("reports", &["theorem", "hard", "instances", "failures", "passed"], summary))
        .table(Table::new("constants", &["id", "kind", "value"], constants))
        .table(Table::new("locks", &["id", "current", "status", "locked"], locks));
    Ok(Run { output, ok })
}

fn parse_set(text: &str) -> Result<Vec<CycleType>> {
    text.split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<CycleType>().with_context(|| format!("cycle type {s:?}")))
        .collect()
}

fn mix_command(args: MixArgs) -> Result<Run> {
    let Some(cmd) = args.command else {
        return mix_profile(args.profile);
    };
    match cmd {
        MixCommand::LowerBound { n, ell } => {
            let r = mixing::lower_bound_report(n, ell)?;
            let row = vec![
                r.class.to_string(),
                r.density.clone(),
                r.distance_ell.to_string(),
                r.distance_next.to_string(),
            ];
            let ok = r.density_matches;
            let out = Output::new(serde_json::to_value(&r)?).table(Table::new(
                "lower_bound",
                &["class", "density", "distance_ell", "distance_next"],
                vec![row],
            ));
            Ok(Run { output: out, ok })
        }
        MixCommand::Product { a, b, c, group, direct } => {
            let (a, b, c) = (parse_set(&a)?, parse_set(&b)?, parse_set(&c)?);
            let r = mixing::product_mixing(&a, &b, &c, group)?;
            let mut doc = serde_json::to_value(&r)?;
            let mut ok = true;
            if direct {
                let d = mixing::product_mixing_direct(&a, &b, &c, group)?;
                ok = d == r.exact;
                doc["direct"] = json!(exact::format_rational(&d));
                doc["direct_matches"] = json!(ok);
            }
            let rows = r
                .terms
                .iter()
                .map(|t| vec![t.lambda.to_string(), t.level.to_string(), t.value.clone()])
                .collect();
            let out = Output::new(doc).table(Table::new("terms", &["lambda", "level", "value"], rows));
            Ok(Run { output: out, ok })
        }
        MixCommand::NonMixer { n, kappa } => {
            let r = mixing::non_mixer_report(n, kappa)?;
            let rows = r
                .mixing
                .terms
                .iter()
                .map(|t| vec![t.lambda.to_string(), t.level.to_string(), t.value.clone()])
                .collect();
            let ok = r.low_level_nonnegative;
            let out = Output::new(serde_json::to_value(&r)?).table(Table::new("terms", &["lambda", "level", "value"], rows));
            Ok(Run { output: out, ok })
        }
        MixCommand::Multi { group, class } => {
            let fs = class
                .iter()
                .map(|c| ClassFunction::normalized_class_indicator(c, group))
                .collect::<symh_core::Result<Vec<_>>>()?;
            let r = mixing::multi_convolution_distance(&fs)?;
            let rows = vec![vec![r.ell.to_string(), r.distance_sq.clone(), r.distance.to_string()]];
            Ok(Run::ok(
                Output::new(serde_json::to_value(&r)?).table(Table::new("distance", &["ell", "distance_sq", "distance"], rows)),
            ))
        }
        MixCommand::TwoStep { n } => {
            let r = mixing::two_step_trend(n)?;
            let rows = r
                .points
                .iter()
                .map(|p| {
                    vec![
                        p.class.to_string(),
                        p.density.to_string(),
                        p.two_step.return_value.clone(),
                        p.two_step.distance.to_string(),
                        p.c_squared_form.to_string(),
                        p.c_norm_form.to_string(),
                    ]
                })
                .collect();
            Ok(Run::ok(Output::new(serde_json::to_value(&r)?).table(Table::new(
                "two_step",
                &["class", "density", "return", "distance", "c_squared_form", "c_norm_form"],
                rows,
            ))))
        }
    }
}

fn mix_profile(p: ProfileArgs) -> Result<Run> {
    let class = p.class.context("mix needs --class (or a subcommand)")?;
    if let Some(n) = p.n {
        anyhow::ensure!(class.n() == n, "class {class} is not a cycle type of size {n}");
    }
    let f = ClassFunction::normalized_class_indicator(&class, p.group)?;
    let profile = MixingProfile::new(&f, p.steps)?;
    let mut doc = serde_json::to_value(&profile)?;
    if let Some(eps) = p.eps {
        doc["mixing_time"] = json!({
            "eps": eps,
            "L1": mixing::mixing_time(&f, eps, 1)?,
            "L2": mixing::mixing_time(&f, eps, 2)?,
        });
    }
    let rows = profile
        .steps
        .iter()
        .map(|s| vec![s.ell.to_string(), s.distance_sq.clone(), s.distance.to_string()])
        .collect();
    Ok(Run::ok(Output::new(doc).table(Table::new("steps", &["ell", "distance_sq", "distance"], rows))))
}

fn run(cli: Cli) -> Result<Run> {
    match cli.command {
        Command::Char(cmd) => char_command(cmd),
        Command::Norm { lambda, q, exact: want_exact } => {
            let inputs = json!({ "lambda": lambda, "q": q });
            if want_exact {
                anyhow::ensure!(q.fract() == 0.0 && q > 0.0 && q <= u32::MAX as f64, "--exact needs an even integer q");
                let v = harmonic::q_norm_exact(&lambda, q as u32)?;
                let float = (exact::ln_abs_rational(&v) / q).exp();
                Ok(Run::ok(value_report("norm", inputs, Some(&v), float, json!({ "power": q }))))
            } else {
                let v = harmonic::q_norm(&lambda, q)?;
                Ok(Run::ok(value_report("norm", inputs, None, v, Value::Null)))
            }
        }
        Command::Kronecker { l, m, nu } => {
            let g = harmonic::kronecker(&l, &m, &nu)?;
            let q = exact::biguint_to_rational(&g);
            let inputs = json!({ "lambda": l, "mu": m, "nu": nu });
            Ok(Run::ok(value_report("kronecker", inputs, Some(&q), exact::rational_to_f64(&q), Value::Null)))
        }
        Command::Global { lambda, brute } => {
            let cap = if brute { BRUTE_FORCE_MAX_N } else { 0 };
            let cert = globalness_certificate(&lambda, cap, cli.seed)?;
            let rows = cert
                .levels
                .iter()
                .map(|l| vec![l.m.to_string(), l.sum_c.clone(), l.bound.clone(), l.holds.to_string()])
                .collect();
            let ok = cert.pass;
            let out = Output::new(serde_json::to_value(&cert)?).table(Table::new("levels", &["m", "sum_c", "bound", "holds"], rows));
            Ok(Run { output: out, ok })
        }
        Command::Verify { theorem, n_max, json, update_locks, lock } => verify_command(theorem, n_max, json, update_locks, lock),
        Command::Mix(args) => mix_command(args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let cache = std::env::var_os("SYMH_CACHE_DIR").map(PathBuf::from);
    if let Some(dir) = &cache {
        if let Err(e) = CharacterEvaluator::global().load_cache(dir) {
            eprintln!("warning: ignoring cache in {}: {e}", dir.display());
        }
    }
    let (format, path) = (cli.format, cli.output.clone());
    let result = run(cli).and_then(|r| {
        r.output.write(format, path.as_deref())?;
        Ok(r.ok)
    });
    if let Some(dir) = &cache {
        if let Err(e) = CharacterEvaluator::global().save_cache(dir) {
            eprintln!("warning: could not save cache to {}: {e}", dir.display());
        }
    }
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
