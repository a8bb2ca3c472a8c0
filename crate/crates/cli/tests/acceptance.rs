//! One PASS/FAIL line per acceptance criterion. Exits nonzero if any fails.

#[path = "../../core/tests/support/mod.rs"]
mod support;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use symh_core::bounds::fits::{fit_main_bound, MainFitConfig};
use symh_core::bounds::{verify, BoundReport, Extremum, Theorem};
use symh_core::characters::CharacterEvaluator;
use symh_core::harmonic::{convolve_direct, kronecker, q_norm_exact};
use symh_core::lock::{ConstantsLock, LockStatus, LOCK_FILE, LOCK_TOLERANCE};
use symh_core::mixing::{
    direct_l2_distance_sq, non_mixer_report, product_mixing, spectral_l2_distance_sq, two_step_return, NON_MIXER_KAPPA,
};
use symh_core::partitions::partitions_of;
use symh_core::{ClassFunction, ClassSpace, CycleType, Group, Partition, DEFAULT_SEED};

const TABLE_BUDGET: Duration = Duration::from_secs(60);
const VERIFY_10_BUDGET: Duration = Duration::from_secs(5 * 60);
const VERIFY_20_BUDGET: Duration = Duration::from_secs(2 * 60 * 60);
const RANDOM_WALKS_PER_SIZE: usize = 25;
const PRODUCT_TRIPLES_PER_SIZE: usize = 6;

type Outcome = Result<String, String>;

fn ensure(ok: bool, why: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(why())
    }
}

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn report_passed(theorem: Theorem, n_max: usize) -> Result<Vec<BoundReport>, String> {
    let reports = verify(theorem, n_max).map_err(|e| e.to_string())?;
    for r in &reports {
        if let Some(f) = r.failures.first() {
            return Err(format!("{}: {} failures, first {} at {}", r.theorem, r.failure_count, f.detail, f.instance));
        }
    }
    Ok(reports)
}

fn instances(reports: &[BoundReport]) -> u64 {
    reports.iter().map(|r| r.instances).sum()
}

fn character_engine() -> Outcome {
    let start = Instant::now();
    let eval = CharacterEvaluator::global();
    for n in 1..=10 {
        let t = eval.character_table(n).map_err(|e| e.to_string())?;
        ensure(t.row_orthogonality_defect().is_none(), || format!("row orthogonality fails at n={n}"))?;
        ensure(t.column_orthogonality_defect().is_none(), || format!("column orthogonality fails at n={n}"))?;
    }
    let elapsed = start.elapsed();
    let mut compared = 0;
    for n in 1..=8 {
        let space = ClassSpace::get(Group::Symmetric, n).unwrap();
        for t in space.types() {
            if n >= 2 {
                let std = Partition::new(vec![n - 1, 1]).unwrap();
                ensure(eval.mn_value(&std, t).unwrap() == support::standard_character(t), || {
                    format!("(n-1,1) differs from fix-1 at {t}")
                })?;
            }
        }
        for (lambda, values) in support::gram_schmidt_characters(n) {
            for (t, v) in space.types().iter().zip(&values) {
                let got = eval.mn_value(&lambda, t).unwrap();
                ensure(&got == v, || format!("chi_{lambda}({t}) = {got}, oracle {v}"))?;
                compared += 1;
            }
        }
    }
    ensure(elapsed < TABLE_BUDGET, || format!("tables took {elapsed:?}"))?;
    Ok(format!("tables n<=10 orthogonal in {:.2}s; {compared} values match the oracle", elapsed.as_secs_f64()))
}

fn dimension_lemmas() -> Outcome {
    let r = report_passed(Theorem::Dims, 30)?;
    Ok(format!("{} exact instances, n<=30 and growth at n in {{200,400,600}}", instances(&r)))
}

fn branching_chain() -> Outcome {
    let r = report_passed(Theorem::Branching, 20)?;
    Ok(format!("{} exact instances, n<=20, all-pairs cosets n<=7", instances(&r)))
}

fn long_cycle_identity() -> Outcome {
    let r = report_passed(Theorem::MnLong, 25)?;
    Ok(format!("{} exact instances, n<=25", instances(&r)))
}

fn short_cycle_recursion() -> Outcome {
    let r = report_passed(Theorem::ProbRecursion, 20)?;
    Ok(format!("{} exact instances, r<=500, brute force r<=9", instances(&r)))
}

fn norm_facts() -> Outcome {
    let mut count = 0;
    for n in 1..=20 {
        for l in partitions_of(n) {
            let v = q_norm_exact(&l, 2).map_err(|e| e.to_string())?;
            ensure(v.is_one(), || format!("||chi_{l}||_2^2 = {v}"))?;
            count += 1;
        }
    }
    for (q, expected, from) in [(4u32, 4, 8usize), (6, 41, 12)] {
        for n in from..=20 {
            let l = Partition::new(vec![n - 1, 1]).unwrap();
            let v = q_norm_exact(&l, q).unwrap();
            let oracle = support::rencontres_moment(n, q);
            ensure(v == oracle && v == BigRational::from_integer(expected.into()), || {
                format!("n={n} q={q}: engine {v}, rencontres {oracle}, expected {expected}")
            })?;
        }
    }
    for n in 1..=7 {
        let ps: Vec<Partition> = partitions_of(n).collect();
        let trivial = Partition::row(n);
        for l in &ps {
            let two = BigRational::from_integer(BigInt::from(kronecker(l, l, &trivial).unwrap()));
            let four: BigInt = ps.iter().map(|nu| BigInt::from(kronecker(l, l, nu).unwrap().pow(2))).sum();
            ensure(q_norm_exact(l, 2).unwrap() == two, || format!("q=2 Kronecker mismatch at {l}"))?;
            ensure(q_norm_exact(l, 4).unwrap() == BigRational::from_integer(four), || {
                format!("q=4 Kronecker mismatch at {l}")
            })?;
        }
    }
    Ok(format!("{count} unit 2-norms; moments 4 and 41 match rencontres; Kronecker n<=7"))
}

fn constant_fits() -> Outcome {
    let config = MainFitConfig::new(20, 3, &[4, 6]);
    let report = fit_main_bound(&config).map_err(|e| e.to_string())?;
    ensure(report.passed(), || format!("{} hard failures", report.failure_count))?;
    let overall = |kind: Extremum| {
        report
            .constants
            .iter()
            .find(|c| c.kind == kind && c.id.ends_with(&config.tag()) && c.id.starts_with("main-norm."))
            .and_then(|c| c.value)
    };
    let (big, small) = (overall(Extremum::Min), overall(Extremum::Max));
    let (Some(big), Some(small)) = (big, small) else {
        return Err("fit produced no C or no c".into());
    };
    ensure(big.is_finite() && small.is_finite() && big >= small && small > 0.0, || {
        format!("C = {big}, c = {small}")
    })?;
    let lock = ConstantsLock::load(&root().join(LOCK_FILE)).map_err(|e| e.to_string())?;
    let checks = lock.compare(std::slice::from_ref(&report));
    for c in &checks {
        match c.status {
            LockStatus::Match => {}
            LockStatus::Missing => return Err(format!("{} is not locked", c.id)),
            LockStatus::Drift { locked, relative } => {
                return Err(format!("{} drifted: {} vs locked {locked} (relative {relative:.2e})", c.id, c.current))
            }
        }
    }
    Ok(format!("C = {big:.6}, c = {small:.6}; {} constants within {LOCK_TOLERANCE:e} of the lock", checks.len()))
}

fn random_set(space: &ClassSpace, rng: &mut ChaCha8Rng) -> Vec<CycleType> {
    loop {
        let set: Vec<CycleType> = space.types().iter().filter(|_| rng.gen_bool(0.4)).cloned().collect();
        if !set.is_empty() {
            return set;
        }
    }
}

fn mixing_engine() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let mut walks = 0;
    for group in [Group::Symmetric, Group::Alternating] {
        for n in 2..=8 {
            for _ in 0..RANDOM_WALKS_PER_SIZE {
                let f = support::random_walk(group, n, &mut rng);
                for ell in 1..=4 {
                    let s = spectral_l2_distance_sq(&f, ell).map_err(|e| e.to_string())?;
                    let d = direct_l2_distance_sq(&f, ell).map_err(|e| e.to_string())?;
                    ensure(s == d, || format!("{group}{n} ell={ell}: spectral {s}, direct {d}"))?;
                }
                let ff = convolve_direct(&f, &f).unwrap();
                let at_one = &ff.values()[f.space().identity_index()];
                ensure(at_one == &f.l2_norm_sq(), || format!("{group}{n}: f*f(1) = {at_one}"))?;
                two_step_return(&f).map_err(|e| e.to_string())?;
                walks += 1;
            }
        }
    }
    let mut triples = 0;
    for group in [Group::Symmetric, Group::Alternating] {
        for n in 2..=6 {
            let pairs = support::PairCounts::new(group, n);
            let space = ClassSpace::get(group, n).unwrap();
            for _ in 0..PRODUCT_TRIPLES_PER_SIZE {
                let (a, b, c) = (random_set(&space, &mut rng), random_set(&space, &mut rng), random_set(&space, &mut rng));
                let spectral = product_mixing(&a, &b, &c, group).map_err(|e| e.to_string())?.exact;
                let ind = |s: &[CycleType]| ClassFunction::normalized_set_indicator(s, group).unwrap();
                let brute = pairs.triple_expectation(&ind(&a), &ind(&b), &ind(&c)) - BigRational::one();
                ensure(spectral == brute, || format!("{group}{n}: spectral {spectral}, pairs {brute}"))?;
                triples += 1;
            }
        }
    }
    Ok(format!("{walks} walks x 4 steps, f*f(1) = ||f||_2^2, {triples} product triples"))
}

fn non_mixer() -> Outcome {
    let mut terms = 0;
    for n in 8..=16 {
        let r = non_mixer_report(n, NON_MIXER_KAPPA).map_err(|e| format!("n={n}: {e}"))?;
        ensure(r.low_level_terms > 0, || format!("n={n}: no terms of level <= n^(1/3)"))?;
        ensure(r.low_level_nonnegative, || {
            let bad = r.mixing.terms.iter().find(|t| t.level.pow(3) <= n && t.sign < 0).unwrap();
            format!("n={n}: term {} = {} is negative", bad.lambda, bad.value)
        })?;
        terms += r.low_level_terms;
    }
    ensure(terms > 0, || "no terms checked".into())?;
    Ok(format!("n = 8..16 with kappa = {NON_MIXER_KAPPA}: {terms} low-level terms, all >= 0"))
}

fn run_verify(n_max: usize, budget: Duration) -> Result<f64, String> {
    let lock = root().join(LOCK_FILE);
    let out = std::env::temp_dir().join(format!("symh-acceptance-{}-{n_max}.json", std::process::id()));
    let start = Instant::now();
    let status = Command::new(env!("CARGO_BIN_EXE_symh"))
        .args(["verify", "--theorem", "all", "--n-max", &n_max.to_string()])
        .arg("--lock")
        .arg(&lock)
        .arg("--output")
        .arg(&out)
        .output()
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let _ = std::fs::remove_file(&out);
    ensure(status.status.success(), || {
        let stderr = String::from_utf8_lossy(&status.stderr);
        let bad: Vec<&str> = stderr.lines().filter(|l| !l.starts_with("PASS")).take(4).collect();
        format!("n-max {n_max} exited {:?}: {}", status.status.code(), bad.join(" | "))
    })?;
    ensure(elapsed < budget, || format!("n-max {n_max} took {elapsed:?}"))?;
    Ok(elapsed.as_secs_f64())
}

fn end_to_end() -> Outcome {
    let ten = run_verify(10, VERIFY_10_BUDGET)?;
    let twenty = run_verify(20, VERIFY_20_BUDGET)?;
    Ok(format!("n-max 10 in {ten:.1}s, n-max 20 in {twenty:.1}s"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("character engine", character_engine),
        ("dimension lemmas", dimension_lemmas),
        ("branching and globalness chain", branching_chain),
        ("long-cycle character identity", long_cycle_identity),
        ("short-cycle recursion", short_cycle_recursion),
        ("norm facts", norm_facts),
        ("constant fits locked", constant_fits),
        ("mixing engine", mixing_engine),
        ("non-mixer construction", non_mixer),
        ("end-to-end budget", end_to_end),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} ({secs:.1}s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({secs:.1}s): {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
