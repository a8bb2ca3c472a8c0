//! Spectral mixing analysis of normal random walks on `S_n` and `A_n`.
//!
//! A walk is a class function `f` with `‖f‖₁ = 1`, the density of its step
//! distribution with respect to the uniform measure. Distances are computed
//! from Fourier coefficients raised to integer powers, in exact arithmetic:
//! `‖f^{∗ℓ} - 1‖₂² = Σ_{χ≠1} f̂(χ)^{2ℓ} / χ(1)^{2ℓ-2}`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::formulas::cycle_alpha;
use crate::classes::{ClassFunction, ClassFunctionJson, CycleType, Group};
use crate::error::{Error, Result};
use crate::exact::{self, factorial, floor_root, format_rational};
use crate::harmonic::{convolve_direct, split_weight, FourierExpansion};
use crate::partitions::Partition;

/// Largest number of steps any profile or mixing time examines.
pub const MAX_STEPS: usize = 64;
/// Largest `n` for spectral computations.
pub const SPECTRAL_MAX_N: usize = 20;
/// Scale `κ` of the non-mixer class `t = ⌈κ n^{1/3} + 1⌉` at desk sizes.
pub const NON_MIXER_KAPPA: f64 = 2.0;
/// `κ` of the asymptotic construction; it exceeds `n` below `n ≈ 1300`.
pub const NON_MIXER_KAPPA_ASYMPTOTIC: f64 = 10.0;

fn require_normalized(f: &ClassFunction) -> Result<()> {
    if !f.is_normalized() {
        return Err(Error::Unnormalized(format_rational(&f.l1_norm())));
    }
    if f.n() > SPECTRAL_MAX_N {
        return Err(Error::CapExceeded { what: "n", value: f.n(), cap: SPECTRAL_MAX_N });
    }
    Ok(())
}

fn int(x: &BigInt) -> BigRational {
    BigRational::from_integer(x.clone())
}

/// `‖f₁ ∗ ⋯ ∗ f_ℓ - 1‖₂²` from the expansions, trivial term included so the
/// identity is exact even when `E[f_i] != 1`.
fn product_distance_sq(expansions: &[&FourierExpansion]) -> BigRational {
    let first = expansions[0];
    let k = expansions.len() as u32;
    let trivial = first.irreps().trivial_index();
    first
        .irreps()
        .irreps()
        .par_iter()
        .enumerate()
        .map(|(i, r)| {
            let mut prod = BigRational::one();
            for e in expansions {
                prod *= &e.coefficients()[i];
            }
            if i == trivial {
                let diff = prod - BigRational::one();
                return &diff * &diff;
            }
            if prod.is_zero() {
                return BigRational::zero();
            }
            let dim = int(&r.dim);
            let denom = exact::pow_rational(&dim, 2 * k - 2);
            split_weight(r.split, 2 * k, 2 * k - 2) * &prod * &prod / denom
        })
        .reduce(BigRational::zero, |a, b| a + b)
}

/// Exact `‖f^{∗ℓ} - 1‖₂²`.
pub fn spectral_l2_distance_sq(f: &ClassFunction, ell: usize) -> Result<BigRational> {
    require_normalized(f)?;
    if ell == 0 {
        return Err(Error::InvalidArgument("need ell >= 1".into()));
    }
    let e = FourierExpansion::of(f)?;
    Ok(product_distance_sq(&vec![&e; ell]))
}

pub fn spectral_l2_distance(f: &ClassFunction, ell: usize) -> Result<f64> {
    Ok(exact::rational_to_f64(&spectral_l2_distance_sq(f, ell)?).sqrt())
}

/// `‖f^{∗ℓ} - 1‖₂²` by iterated definitional convolution, for `n <= 8`.
pub fn direct_l2_distance_sq(f: &ClassFunction, ell: usize) -> Result<BigRational> {
    if ell == 0 {
        return Err(Error::InvalidArgument("need ell >= 1".into()));
    }
    let mut g = f.clone();
    for _ in 1..ell {
        g = convolve_direct(&g, f)?;
    }
    let one = ClassFunction::one(f.group(), f.n())?;
    Ok(g.sub(&one)?.l2_norm_sq())
}

#[derive(Debug, Clone, Serialize)]
pub struct MixingStep {
    pub ell: usize,
    /// Exact `‖f^{∗ℓ} - 1‖₂²` as `p/q`.
    pub distance_sq: String,
    pub distance: f64,
}

/// `‖f^{∗ℓ} - 1‖₂` for `ℓ = 1..=L`.
#[derive(Debug, Clone, Serialize)]
pub struct MixingProfile {
    pub group: Group,
    pub n: usize,
    pub convention: &'static str,
    pub walk: ClassFunctionJson,
    pub steps: Vec<MixingStep>,
    #[serde(skip)]
    exact: Vec<BigRational>,
}

impl MixingProfile {
    pub fn new(f: &ClassFunction, steps: usize) -> Result<Self> {
        require_normalized(f)?;
        if steps == 0 || steps > MAX_STEPS {
            return Err(Error::CapExceeded { what: "steps", value: steps, cap: MAX_STEPS });
        }
        let e = FourierExpansion::of(f)?;
        let exact: Vec<BigRational> = (1..=steps).map(|ell| product_distance_sq(&vec![&e; ell])).collect();
        let steps = exact
            .iter()
            .enumerate()
            .map(|(i, d)| MixingStep {
                ell: i + 1,
                distance_sq: format_rational(d),
                distance: exact::rational_to_f64(d).sqrt(),
            })
            .collect();
        Ok(MixingProfile { group: f.group(), n: f.n(), convention: "L2", walk: f.to_json(), steps, exact })
    }

    /// Exact squared distances, indexed by `ℓ - 1`.
    pub fn distances_sq(&self) -> &[BigRational] {
        &self.exact
    }
}

/// Outcome of a mixing-time search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MixingTime {
    Steps(usize),
    /// No `ℓ <= cap` reached the target.
    CapExceeded(usize),
}

/// Minimal `ℓ <= MAX_STEPS` with `‖f^{∗ℓ} - 1‖_p < ε`, for `p ∈ {1, 2}`.
///
/// `p = 2` is spectral; `p = 1` reconstructs `f^{∗ℓ}` from its coefficients
/// and sums `|f^{∗ℓ} - 1|` exactly.
pub fn mixing_time(f: &ClassFunction, eps: f64, p: u32) -> Result<MixingTime> {
    require_normalized(f)?;
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument(format!("eps must be positive, got {eps}")));
    }
    let eps_q = exact::rational_from_f64(eps).ok_or_else(|| Error::InvalidArgument("eps".into()))?;
    let e = FourierExpansion::of(f)?;
    let one = ClassFunction::one(f.group(), f.n())?;
    let mut power = e.clone();
    for ell in 1..=MAX_STEPS {
        if ell > 1 {
            power = power.convolve(&e)?;
        }
        let below = match p {
            2 => product_distance_sq(&vec![&e; ell]) < &eps_q * &eps_q,
            1 => power.inverse().sub(&one)?.l1_norm() < eps_q,
            _ => return Err(Error::InvalidArgument(format!("p must be 1 or 2, got {p}"))),
        };
        if below {
            return Ok(MixingTime::Steps(ell));
        }
    }
    Ok(MixingTime::CapExceeded(MAX_STEPS))
}

/// `‖f₁ ∗ ⋯ ∗ f_ℓ - 1‖₂` with the exponents `α_i` solving
/// `‖f_i‖₂ = n^{α_i n^{α_i}}`.
#[derive(Debug, Clone, Serialize)]
pub struct MultiConvolution {
    pub ell: usize,
    pub distance_sq: String,
    pub distance: f64,
    /// `None` when `‖f_i‖₂ >= n^n`, beyond every `α < 1`.
    pub alphas: Vec<Option<f64>>,
    pub alpha_sum: Option<f64>,
    /// `Σ α_i <= ℓ - 1`.
    pub budget_holds: Option<bool>,
}

pub fn multi_convolution_distance(fs: &[ClassFunction]) -> Result<MultiConvolution> {
    let first = fs.first().ok_or(Error::EmptySet)?;
    for f in fs {
        first.check_same_space(f)?;
        require_normalized(f)?;
    }
    let expansions: Vec<FourierExpansion> = fs.iter().map(FourierExpansion::of).collect::<Result<_>>()?;
    let refs: Vec<&FourierExpansion> = expansions.iter().collect();
    let d = product_distance_sq(&refs);
    let n = first.n();
    let ln_n = (n as f64).ln();
    let alphas: Vec<Option<f64>> = fs
        .iter()
        .map(|f| {
            let ln_norm = 0.5 * exact::ln_abs_rational(&f.l2_norm_sq());
            if ln_norm <= 0.0 {
                Some(0.0)
            } else {
                cycle_alpha(n, ln_norm / ln_n, 1.0)
            }
        })
        .collect();
    let alpha_sum = alphas.iter().copied().sum::<Option<f64>>();
    let ell = fs.len();
    Ok(MultiConvolution {
        ell,
        distance_sq: format_rational(&d),
        distance: exact::rational_to_f64(&d).sqrt(),
        alphas,
        alpha_sum,
        budget_holds: alpha_sum.map(|s| s <= (ell - 1) as f64),
    })
}

/// `f ∗ f(1)` and `‖f ∗ f - 1‖₂` for a symmetric walk.
#[derive(Debug, Clone, Serialize)]
pub struct TwoStep {
    pub return_value: String,
    pub return_float: f64,
    pub distance_sq: String,
    pub distance: f64,
}

/// # Panics
///
/// If `f ∗ f(1)` differs from `‖f‖₂²`, which would mean the Fourier engine
/// is wrong: class functions are symmetric, so the identity always applies.
pub fn two_step_return(f: &ClassFunction) -> Result<TwoStep> {
    require_normalized(f)?;
    let e = FourierExpansion::of(f)?;
    let ff = e.convolve(&e)?.inverse();
    let ret = ff.values()[f.space().identity_index()].clone();
    assert_eq!(ret, f.l2_norm_sq(), "f*f(1) differs from ‖f‖₂²");
    let d = product_distance_sq(&[&e, &e]);
    Ok(TwoStep {
        return_float: exact::rational_to_f64(&ret),
        return_value: format_rational(&ret),
        distance_sq: format_rational(&d),
        distance: exact::rational_to_f64(&d).sqrt(),
    })
}

/// The class `1^m (n-m)` in `A_n` with `m = ⌊n^{1-1/ℓ}⌋`, moved to `m + 1`
/// when the long cycle would be odd.
pub fn lower_bound_walk(n: usize, ell: usize) -> Result<CycleType> {
    if ell < 2 {
        return Err(Error::InvalidArgument(format!("need ell >= 2, got {ell}")));
    }
    // m^ℓ <= n^{ℓ-1}
    let m = floor_root(&num_traits::pow(num_bigint::BigUint::from(n), ell - 1), ell as u32);
    let mut m: usize = m.try_into().expect("m <= n");
    if (n - m) % 2 == 0 {
        m += 1;
    }
    if m + 3 > n {
        return Err(Error::Degenerate(format!("m = {m} leaves no long cycle in S_{n}")));
    }
    let mut parts = vec![n - m];
    parts.extend(std::iter::repeat(1).take(m));
    Ok(CycleType::from_lengths(parts))
}

/// The lower-bound walk with its distances after `ℓ` and `ℓ + 1` steps.
#[derive(Debug, Clone, Serialize)]
pub struct LowerBoundWalk {
    pub n: usize,
    pub ell: usize,
    pub class: CycleType,
    pub fixed_points: usize,
    /// `2 / (m! (n-m))`, checked against the class size.
    pub density: String,
    pub density_matches: bool,
    pub distance_ell: f64,
    pub distance_next: f64,
    pub non_increasing: bool,
}

pub fn lower_bound_report(n: usize, ell: usize) -> Result<LowerBoundWalk> {
    let ct = lower_bound_walk(n, ell)?;
    let m = ct.fixed_points();
    let formula = BigRational::new(BigInt::from(2u8), BigInt::from(factorial(m) * (n - m)));
    let density = ct.density(Group::Alternating);
    let f = ClassFunction::normalized_class_indicator(&ct, Group::Alternating)?;
    let e = FourierExpansion::of(&f)?;
    let a = product_distance_sq(&vec![&e; ell]);
    let b = product_distance_sq(&vec![&e; ell + 1]);
    Ok(LowerBoundWalk {
        n,
        ell,
        class: ct,
        fixed_points: m,
        density: format_rational(&density),
        density_matches: density == formula,
        distance_ell: exact::rational_to_f64(&a).sqrt(),
        distance_next: exact::rational_to_f64(&b).sqrt(),
        non_increasing: b <= a,
    })
}

/// One nontrivial term `w f̂ ĝ ĥ / χ(1)` of `⟨f ∗ g, h⟩ - 1`.
#[derive(Debug, Clone, Serialize)]
pub struct ProductTerm {
    pub lambda: Partition,
    pub level: usize,
    pub value: String,
    pub sign: i8,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProductMixing {
    pub group: Group,
    pub n: usize,
    /// Exact `⟨f ∗ g, h⟩ - 1`.
    pub lhs: String,
    pub lhs_float: f64,
    pub terms: Vec<ProductTerm>,
    #[serde(skip)]
    pub exact: BigRational,
}

/// `⟨f ∗ g, h⟩ - 1 = Σ_{χ≠1} f̂(χ) ĝ(χ) ĥ(χ) / χ(1)` for the normalized
/// indicators of the normal sets `a`, `b`, `c`.
pub fn product_mixing(a: &[CycleType], b: &[CycleType], c: &[CycleType], group: Group) -> Result<ProductMixing> {
    let fs = [a, b, c]
        .iter()
        .map(|set| ClassFunction::normalized_set_indicator(set, group))
        .collect::<Result<Vec<_>>>()?;
    fs[0].check_same_space(&fs[1])?;
    fs[0].check_same_space(&fs[2])?;
    if fs[0].n() > SPECTRAL_MAX_N {
        return Err(Error::CapExceeded { what: "n", value: fs[0].n(), cap: SPECTRAL_MAX_N });
    }
    let es = fs.iter().map(FourierExpansion::of).collect::<Result<Vec<_>>>()?;
    let irreps = es[0].irreps().clone();
    let trivial = irreps.trivial_index();
    let mut terms = Vec::new();
    let mut total = BigRational::zero();
    for (i, r) in irreps.irreps().iter().enumerate() {
        if i == trivial {
            continue;
        }
        let v = split_weight(r.split, 3, 1) * &es[0].coefficients()[i] * &es[1].coefficients()[i]
            * &es[2].coefficients()[i]
            / int(&r.dim);
        total += &v;
        terms.push(ProductTerm {
            lambda: r.lambda.clone(),
            level: r.lambda.level()?,
            sign: if v.is_positive() { 1 } else if v.is_negative() { -1 } else { 0 },
            value: format_rational(&v),
        });
    }
    Ok(ProductMixing {
        group,
        n: fs[0].n(),
        lhs: format_rational(&total),
        lhs_float: exact::rational_to_f64(&total),
        terms,
        exact: total,
    })
}

/// `⟨f ∗ g, h⟩ - 1` by definitional convolution, for `n <= 8`.
pub fn product_mixing_direct(a: &[CycleType], b: &[CycleType], c: &[CycleType], group: Group) -> Result<BigRational> {
    let f = ClassFunction::normalized_set_indicator(a, group)?;
    let g = ClassFunction::normalized_set_indicator(b, group)?;
    let h = ClassFunction::normalized_set_indicator(c, group)?;
    Ok(convolve_direct(&f, &g)?.inner(&h)? - BigRational::one())
}

/// The class `1^t (n-t)` with `t = ⌈κ n^{1/3} + 1⌉`, moved to `t + 1` when
/// the long cycle would be odd.
pub fn non_mixer_witness(n: usize, kappa: f64) -> Result<CycleType> {
    let mut t = (kappa * (n as f64).cbrt() + 1.0).ceil() as usize;
    if t < n && (n - t) % 2 == 0 {
        t += 1;
    }
    if t + 3 > n {
        return Err(Error::Degenerate(format!("t = {t} leaves no long cycle in S_{n}")));
    }
    let mut parts = vec![n - t];
    parts.extend(std::iter::repeat(1).take(t));
    Ok(CycleType::from_lengths(parts))
}

/// Diagonal sum `Σ f̂(χ)³ / χ(1)` of the non-mixer class on `A_n`, with the
/// sign of every term of level `<= n^{1/3}`.
#[derive(Debug, Clone, Serialize)]
pub struct NonMixer {
    pub n: usize,
    pub kappa: f64,
    pub class: CycleType,
    pub mixing: ProductMixing,
    pub low_level_terms: usize,
    pub low_level_nonnegative: bool,
}

pub fn non_mixer_report(n: usize, kappa: f64) -> Result<NonMixer> {
    let ct = non_mixer_witness(n, kappa)?;
    let set = std::slice::from_ref(&ct);
    let mixing = product_mixing(set, set, set, Group::Alternating)?;
    // level <= n^{1/3}  <=>  level^3 <= n
    let low: Vec<&ProductTerm> = mixing.terms.iter().filter(|t| t.level.pow(3) <= n).collect();
    Ok(NonMixer {
        n,
        kappa,
        class: ct,
        low_level_terms: low.len(),
        low_level_nonnegative: low.iter().all(|t| t.sign >= 0),
        mixing,
    })
}

/// One member of the `1^m (n-m)` family with its two-step data.
#[derive(Debug, Clone, Serialize)]
pub struct TwoStepPoint {
    pub class: CycleType,
    pub density: f64,
    pub two_step: TwoStep,
    /// `ln(f ∗ f(1)) / (√n ln n)` and the same with `‖f‖₂` in place of `f ∗ f(1)`.
    pub c_squared_form: f64,
    pub c_norm_form: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TwoStepTrend {
    pub n: usize,
    pub points: Vec<TwoStepPoint>,
    /// Two-step distance non-increasing as density grows.
    pub monotone: bool,
}

/// Two-step return values and distances over all even classes `1^m (n-m)`
/// of `A_n`, ordered by increasing density.
pub fn two_step_trend(n: usize) -> Result<TwoStepTrend> {
    let scale = (n as f64).sqrt() * (n as f64).ln();
    let mut points = Vec::new();
    for m in 0..n.saturating_sub(2) {
        if (n - m) % 2 == 0 {
            continue;
        }
        let mut parts = vec![n - m];
        parts.extend(std::iter::repeat(1).take(m));
        let ct = CycleType::from_lengths(parts);
        let f = ClassFunction::normalized_class_indicator(&ct, Group::Alternating)?;
        let two_step = two_step_return(&f)?;
        let ln_ret = two_step.return_float.ln();
        points.push(TwoStepPoint {
            density: exact::rational_to_f64(&ct.density(Group::Alternating)),
            c_squared_form: ln_ret / scale,
            c_norm_form: 0.5 * ln_ret / scale,
            class: ct,
            two_step,
        });
    }
    points.sort_by(|a, b| a.density.total_cmp(&b.density));
    let monotone = points.windows(2).all(|w| w[1].two_step.distance <= w[0].two_step.distance);
    Ok(TwoStepTrend { n, points, monotone })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;

    fn ct(s: &str) -> CycleType {
        s.parse().unwrap()
    }

    #[test]
    fn uniform_and_delta() {
        for g in [Group::Symmetric, Group::Alternating] {
            let one = ClassFunction::one(g, 6).unwrap();
            for ell in 1..4 {
                assert!(spectral_l2_distance_sq(&one, ell).unwrap().is_zero());
            }
            assert_eq!(mixing_time(&one, 0.1, 2).unwrap(), MixingTime::Steps(1));
            assert_eq!(mixing_time(&one, 0.1, 1).unwrap(), MixingTime::Steps(1));
            let delta = ClassFunction::delta_identity(g, 6).unwrap();
            let order = BigRational::from_integer(BigInt::from(g.order(6)));
            for ell in 1..4 {
                assert_eq!(spectral_l2_distance_sq(&delta, ell).unwrap(), &order - BigRational::one());
            }
        }
    }

    #[test]
    fn unnormalized_rejected() {
        let f = ClassFunction::constant(Group::Symmetric, 5, ratio(2, 1)).unwrap();
        assert!(matches!(spectral_l2_distance_sq(&f, 1), Err(Error::Unnormalized(_))));
    }

    #[test]
    fn eight_cycles_match_direct() {
        let f = ClassFunction::normalized_class_indicator(&ct("8"), Group::Symmetric).unwrap();
        assert_eq!(spectral_l2_distance_sq(&f, 2).unwrap(), direct_l2_distance_sq(&f, 2).unwrap());
    }

    #[test]
    fn lower_bound_walk_examples() {
        assert_eq!(lower_bound_walk(9, 2).unwrap(), ct("5,1,1,1,1"));
        let r = lower_bound_report(12, 3).unwrap();
        assert!(r.density_matches && r.class.is_even());
        assert!(lower_bound_walk(4, 40).is_err());
        assert!(lower_bound_walk(9, 1).is_err());
    }

    #[test]
    fn two_step_examples() {
        let one = ClassFunction::one(Group::Alternating, 7).unwrap();
        let t = two_step_return(&one).unwrap();
        assert_eq!((t.return_value.as_str(), t.distance_sq.as_str()), ("1", "0"));
        let c = ct("5,1,1");
        let f = ClassFunction::normalized_class_indicator(&c, Group::Alternating).unwrap();
        let t = two_step_return(&f).unwrap();
        assert_eq!(t.return_value, format_rational(&c.density(Group::Alternating).recip()));
        let delta = ClassFunction::delta_identity(Group::Alternating, 6).unwrap();
        assert_eq!(two_step_return(&delta).unwrap().return_value, "360");
    }

    #[test]
    fn product_mixing_trivial_cases() {
        let all: Vec<CycleType> = crate::classes::ClassSpace::get(Group::Alternating, 7).unwrap().types().to_vec();
        let a = [ct("3,1,1,1,1")];
        assert!(product_mixing(&a, &a, &all, Group::Alternating).unwrap().exact.is_zero());
        let id = [CycleType::identity(6)];
        let r = product_mixing(&id, &id, &id, Group::Alternating).unwrap();
        assert_eq!(r.lhs, "359");
        assert!(matches!(product_mixing(&[], &a, &a, Group::Alternating), Err(Error::EmptySet)));
    }

    #[test]
    fn product_of_twelve() {
        let a = [ct("9,1,1,1")];
        let r = product_mixing(&a, &a, &a, Group::Alternating).unwrap();
        let level_one = r.terms.iter().find(|t| t.level == 1).unwrap();
        assert_eq!(level_one.sign, 1);
    }

    #[test]
    fn non_mixer_small() {
        assert_eq!(non_mixer_witness(8, NON_MIXER_KAPPA).unwrap(), ct("3,1,1,1,1,1"));
        assert!(non_mixer_witness(20, NON_MIXER_KAPPA_ASYMPTOTIC).is_err());
        let r = non_mixer_report(10, NON_MIXER_KAPPA).unwrap();
        assert!(r.low_level_nonnegative && r.low_level_terms > 0);
    }

    #[test]
    fn multi_convolution_unit() {
        let f = ClassFunction::normalized_class_indicator(&ct("3,3,1"), Group::Alternating).unwrap();
        let one = ClassFunction::one(Group::Alternating, 7).unwrap();
        let with = multi_convolution_distance(&[f.clone(), one, f.clone()]).unwrap();
        let without = multi_convolution_distance(&[f.clone(), f.clone()]).unwrap();
        assert_eq!(with.distance_sq, "0");
        assert_eq!(with.alphas[1], Some(0.0));
        let two = spectral_l2_distance_sq(&f, 2).unwrap();
        assert_eq!(without.distance_sq, format_rational(&two));
    }
}
