//! Constant-free statements, checked exactly. A failure here is a defect in
//! the implementation, never a property of small `n`.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::json;

use super::formulas;
use super::{BoundReport, Extremum, Fit};
use crate::characters::{long_cycle_shape, long_cycle_witnesses, mn_value};
use crate::error::{Error, Result};
use crate::exact::{self, binomial, e_enclosure, factorial, guarded_cmp, Guarded, LOG_GUARD};
use crate::harmonic::{coset_restriction_norm_bruteforce, coset_sweep, restriction_norms, sample_tuple_pairs};
use crate::partitions::{partitions_of, partitions_of_level, Partition};
use crate::perm::all_permutations;

pub const DIM_SWEEP_MAX_N: usize = 30;
/// Sizes at which the dimension growth bound is checked.
pub const GROWTH_SIZES: [usize; 3] = [200, 400, 600];
pub const GROWTH_MAX_LEVEL: usize = 5;
pub const BRANCHING_MAX_N: usize = 20;
pub const LONG_CYCLE_MAX_N: usize = 25;
pub const NO_SHORT_CYCLES_MAX_R: usize = 500;
pub const NO_SHORT_CYCLES_BRUTE_MAX_R: usize = 9;

fn cap(what: &'static str, value: usize, cap: usize) -> Result<()> {
    if value > cap {
        return Err(Error::CapExceeded { what, value, cap });
    }
    Ok(())
}

struct DimOutcome {
    lambda: Partition,
    level: usize,
    dim: BigUint,
    tilde_dim: BigUint,
    lower: bool,
    upper: bool,
    sqrt_factorial: bool,
}

fn dim_outcome(lambda: Partition) -> DimOutcome {
    let n = lambda.n();
    let d = lambda.level().unwrap();
    let dim = lambda.dimension();
    let tilde_dim = lambda.tilde().unwrap().dimension();
    let lower = dim >= binomial(n.saturating_sub(d), d) * &tilde_dim;
    let upper = dim <= binomial(n, d) * &tilde_dim;
    // dim <= n^d / sqrt(d!)  <=>  dim^2 d! <= n^{2d}
    let sqrt_factorial = &dim * &dim * factorial(d) <= num_traits::pow(BigUint::from(n), 2 * d);
    DimOutcome { lambda, level: d, dim, tilde_dim, lower, upper, sqrt_factorial }
}

/// Both-sided dimension bounds through the tilde partition, and the
/// `n^d / sqrt(d!)` bound, for every `λ ⊢ n <= n_max`; then the growth bound
/// at [`GROWTH_SIZES`].
pub fn dim_bounds_check(n_max: usize) -> Result<BoundReport> {
    cap("n_max", n_max, DIM_SWEEP_MAX_N)?;
    let mut report = BoundReport::new("dims", true);
    report.range("n", [1, n_max]);
    let outcomes: Vec<DimOutcome> = (1..=n_max)
        .into_par_iter()
        .flat_map_iter(|n| partitions_of(n).map(dim_outcome).collect::<Vec<_>>())
        .collect();
    for o in &outcomes {
        let witness = || json!({ "lambda": o.lambda, "level": o.level, "dim": o.dim.to_string(), "tilde_dim": o.tilde_dim.to_string() });
        report.check(o.lower, witness, || "dim < binom(n-d, d) dim(tilde)".into());
        report.check(o.upper, witness, || "dim > binom(n, d) dim(tilde)".into());
        report.check(o.sqrt_factorial, witness, || "dim^2 d! > n^{2d}".into());
    }
    report.absorb(dimension_growth_check(&GROWTH_SIZES, GROWTH_MAX_LEVEL)?);
    Ok(report)
}

/// Decides `dim >= (n/(ed))^d` exactly: a guarded float comparison first,
/// then `dim (ed)^d` against `n^d` with a rational enclosure of `e`.
fn growth_holds(n: usize, d: usize, dim: &BigUint) -> bool {
    match guarded_cmp(exact::ln_biguint(dim), formulas::ln_dimension_growth(n, d), LOG_GUARD) {
        Guarded::Decided(ord) => ord == Ordering::Greater,
        Guarded::Undecided => {
            let (lo, _) = e_enclosure();
            let lhs = exact::biguint_to_rational(dim)
                * exact::pow_rational(&(lo * BigRational::from_integer(BigInt::from(d))), d as u32);
            lhs >= BigRational::from_integer(num_traits::pow(BigInt::from(n), d))
        }
    }
}

/// `dim(χ) >= (n/(ed))^d` for every level-`d` character, `1 <= d <= d_max`,
/// at each size in `sizes`. Also reports the smallest `K` with
/// `dim >= (n/(Kd))^d` on the sweep.
pub fn dimension_growth_check(sizes: &[usize], d_max: usize) -> Result<BoundReport> {
    let mut report = BoundReport::new("dims.growth", true);
    report.range("n", sizes).range("d", [1, d_max]);
    let mut fit = Fit::new("dims.growth.K", Extremum::Min);
    let mut key = 0u64;
    for &n in sizes {
        for d in 1..=d_max {
            let rows: Vec<(Partition, BigUint, bool)> = partitions_of_level(n, d)
                .into_par_iter()
                .map(|lam| {
                    let dim = lam.dimension();
                    let ok = growth_holds(n, d, &dim);
                    (lam, dim, ok)
                })
                .collect();
            for (lam, dim, ok) in rows {
                let witness = || json!({ "n": n, "d": d, "lambda": lam });
                report.check(ok, witness, || format!("dim {dim} < (n/(ed))^d"));
                let k = n as f64 / (d as f64 * (exact::ln_biguint(&dim) / d as f64).exp());
                fit.offer(k, key, witness);
                key += 1;
            }
        }
        if GROWTH_MAX_LEVEL.min(d_max) > n / 200 {
            report.note(format!("n={n}: levels above n/200 = {} swept beyond the stated hypothesis", n / 200));
        }
    }
    report.push_constant(fit);
    Ok(report)
}

/// The branching chain `Σ c_μ² <= (Σ c_μ)²` and `Σ c_μ <= 2^m dim(λ̃)` for all
/// `λ ⊢ n <= n_max` and all `m`; all-pairs coset norms for `n <= coset_n_max`;
/// and the sampled coset check at `n = sampled_n` when given.
pub fn branching_check(n_max: usize, coset_n_max: usize, sampled_n: Option<usize>) -> Result<BoundReport> {
    cap("n_max", n_max, BRANCHING_MAX_N)?;
    cap("coset_n_max", coset_n_max, crate::harmonic::COSET_SWEEP_MAX_N)?;
    let mut report = BoundReport::new("branching", true);
    report.range("n", [1, n_max]).range("coset_n", [1, coset_n_max]);
    let lambdas: Vec<Partition> = (1..=n_max).flat_map(partitions_of).collect();
    let chains: Vec<(Partition, BigUint, Vec<crate::harmonic::RestrictionNorm>)> = lambdas
        .into_par_iter()
        .map(|lam| {
            let tilde = lam.tilde().unwrap().dimension();
            let norms = restriction_norms(&lam, lam.n());
            (lam, tilde, norms)
        })
        .collect();
    for (lam, tilde, norms) in &chains {
        for norm in norms {
            let m = norm.m;
            let witness = || json!({ "lambda": lam, "m": m, "sum_c": norm.sum.to_string() });
            let bound = (BigUint::one() << m) * tilde;
            report.check(norm.sum <= bound, witness, || format!("sum c = {} > 2^m dim(tilde) = {bound}", norm.sum));
            report.check(norm.squared <= &norm.sum * &norm.sum, witness, || "sum c^2 > (sum c)^2".into());
        }
    }

    let coset_lambdas: Vec<Partition> = (1..=coset_n_max).flat_map(partitions_of).collect();
    let sweeps: Vec<(Partition, Vec<crate::harmonic::CosetLevel>)> = coset_lambdas
        .into_iter()
        .map(|lam| coset_sweep(&lam).map(|s| (lam, s)))
        .collect::<Result<_>>()?;
    for (lam, levels) in &sweeps {
        for level in levels {
            report.check(
                level.passes(),
                || json!({ "lambda": lam, "m": level.m, "pairs": level.pairs }),
                || {
                    format!(
                        "coset chain broken: {} off-diagonal, {} diagonal mismatches, chain {}",
                        level.off_diagonal_violations, level.diagonal_mismatches, level.chain_holds
                    )
                },
            );
        }
    }

    if let Some(n) = sampled_n {
        cap("sampled_n", n, crate::harmonic::BRUTE_FORCE_MAX_N)?;
        report.range("sampled_n", n);
        sampled_coset_check(&mut report, n)?;
        report.note(format!(
            "coset norms for I != J are checked over all pairs up to n={coset_n_max} and over a seeded sample at n={n}; beyond that the certificate relies on the reduction to I = J"
        ));
    }
    Ok(report)
}

fn sampled_coset_check(report: &mut BoundReport, n: usize) -> Result<()> {
    let lambdas: Vec<Partition> = partitions_of(n).collect();
    let rows: Vec<(Partition, usize, bool, usize)> = lambdas
        .par_iter()
        .flat_map_iter(|lam| {
            restriction_norms(lam, n - 1).into_iter().map(move |norm| {
                let m = norm.m;
                let pairs = sample_tuple_pairs(n, m, crate::DEFAULT_SEED);
                let diag = BigRational::from_integer(BigInt::from(norm.squared.clone()));
                let outer = BigRational::from_integer(BigInt::from(&norm.sum * &norm.sum));
                let mut ok = true;
                for (i, j) in &pairs {
                    let c = coset_restriction_norm_bruteforce(lam, i, j).unwrap();
                    ok &= c.squared <= diag && c.squared <= outer;
                }
                (lam.clone(), m, ok, pairs.len())
            })
        })
        .collect();
    for (lam, m, ok, pairs) in rows {
        report.check(ok, || json!({ "lambda": lam, "m": m, "pairs": pairs }), || "sampled coset norm above the I = I norm".into());
    }
    Ok(())
}

/// `χ_λ(σ) = dim(μ)` on every class with `ℓ` fixed points and all other
/// cycles longer than `d = n - λ1`, whenever `ℓ >= d + λ2`.
pub fn mn_long_check(n_max: usize) -> Result<BoundReport> {
    cap("n_max", n_max, LONG_CYCLE_MAX_N)?;
    let mut report = BoundReport::new("mn-long", true);
    report.range("n", [1, n_max]);
    let lambdas: Vec<Partition> = (1..=n_max).flat_map(partitions_of).collect();
    let rows: Vec<(Partition, usize, String, bool)> = lambdas
        .par_iter()
        .flat_map_iter(|lam| {
            let n = lam.n();
            let d = n - lam.first();
            let start = d + lam.part(1);
            let mut out = Vec::new();
            for ell in start..=n {
                let mu = long_cycle_shape(lam, ell).unwrap();
                let dim = BigInt::from(mu.dimension());
                for ct in long_cycle_witnesses(n, d, ell) {
                    let ok = mn_value(lam, &ct).unwrap() == dim;
                    out.push((lam.clone(), ell, ct.to_string(), ok));
                }
            }
            out
        })
        .collect();
    for (lam, ell, ct, ok) in rows {
        report.check(ok, || json!({ "lambda": lam, "ell": ell, "type": ct }), || "χ(σ) differs from dim(μ)".into());
    }
    Ok(report)
}

/// `R Pr[F_{r,d}]` for `r = d+1..=r_max`, with `R = r_max!`, from the
/// cycle-peeling recursion `r P_r = 1 + Σ_{s=d+1}^{r-d-1} P_s`. Every entry
/// is an integer because `r!` divides `R`, so no rational is ever reduced.
fn scaled_table(d: usize, r_max: usize, scale: &BigUint) -> Vec<BigUint> {
    let mut out: Vec<BigUint> = Vec::with_capacity(r_max.saturating_sub(d));
    // prefix[k] = R Σ_{s=d+1}^{d+k} P_s
    let mut prefix = vec![BigUint::zero()];
    for r in d + 1..=r_max {
        let upto = (r - d - 1).saturating_sub(d);
        let x = (scale + &prefix[upto]) / r as u64;
        let next = prefix.last().unwrap() + &x;
        prefix.push(next);
        out.push(x);
    }
    out
}

/// `Pr[F_{r,d}]` for `r = d+1..=r_max`.
pub fn no_short_cycles_table(d: usize, r_max: usize) -> Result<Vec<BigRational>> {
    if d == 0 {
        return Err(Error::Precondition("need d >= 1".into()));
    }
    let scale = factorial(r_max);
    let den = BigInt::from(scale.clone());
    Ok(scaled_table(d, r_max, &scale)
        .into_iter()
        .map(|x| BigRational::new(BigInt::from(x), den.clone()))
        .collect())
}

/// Probability that a uniform permutation of `S_r` has no cycle of length `<= d`.
pub fn no_short_cycles_prob(r: usize, d: usize) -> Result<BigRational> {
    if r <= d {
        return Err(Error::Precondition(format!("need r > d, got r={r}, d={d}")));
    }
    Ok(no_short_cycles_table(d, r)?.pop().unwrap())
}

/// The same probabilities from enumerating `S_r`: entry `d` of the result
/// counts permutations whose shortest cycle is longer than `d`.
pub fn no_short_cycles_bruteforce(r: usize) -> Vec<BigRational> {
    let mut by_min = vec![0u64; r + 2];
    for p in all_permutations(r) {
        let shortest = p.cycle_lengths().into_iter().min().unwrap_or(r + 1);
        by_min[shortest] += 1;
    }
    let total = BigInt::from(factorial(r));
    (0..=r)
        .map(|d| {
            let count: u64 = by_min[d + 1..].iter().sum();
            BigRational::new(BigInt::from(count), total.clone())
        })
        .collect()
}

/// `Pr[F_{r,d}] >= 1/(10d)` for all `1 <= d < r <= r_max`, and agreement
/// with enumeration for `r <= brute_max`.
pub fn no_short_cycles_check(r_max: usize, brute_max: usize) -> Result<BoundReport> {
    cap("r_max", r_max, NO_SHORT_CYCLES_MAX_R)?;
    cap("brute_max", brute_max, NO_SHORT_CYCLES_BRUTE_MAX_R)?;
    let mut report = BoundReport::new("prob-recursion", true);
    report.range("r", [2, r_max]).range("brute_r", [2, brute_max]);
    let scale = factorial(r_max);
    let tables: Vec<Vec<BigUint>> = (1..r_max).into_par_iter().map(|d| scaled_table(d, r_max, &scale)).collect();
    let mut fit = Fit::new("prob-recursion.min_d_times_p", Extremum::Max);
    for (di, row) in tables.iter().enumerate() {
        let d = di + 1;
        let mut row_min: Option<(usize, &BigUint)> = None;
        for (k, x) in row.iter().enumerate() {
            let r = d + 1 + k;
            // P >= 1/(10d)  <=>  10 d R P >= R
            report.check(x * (10 * d as u64) >= scale, || json!({ "r": r, "d": d }), || {
                format!("P = {x}/{r_max}! < 1/(10d)")
            });
            if row_min.is_none_or(|(_, m)| x < m) {
                row_min = Some((r, x));
            }
        }
        if let Some((r, x)) = row_min {
            let value = BigRational::new(BigInt::from(x * d as u64), BigInt::from(scale.clone()));
            fit.offer_exact(value, (d * 1000 + r) as u64, || json!({ "r": r, "d": d }));
        }
    }
    for r in 2..=brute_max.min(r_max) {
        let brute = no_short_cycles_bruteforce(r);
        for d in 1..r {
            let rec = BigRational::new(BigInt::from(tables[d - 1][r - d - 1].clone()), BigInt::from(scale.clone()));
            report.check(rec == brute[d], || json!({ "r": r, "d": d }), || {
                format!("recursion {} vs enumeration {}", exact::format_rational(&rec), exact::format_rational(&brute[d]))
            });
        }
    }
    report.push_constant(fit);
    Ok(report)
}
