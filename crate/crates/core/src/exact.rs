//! Exact and guarded numerics shared across modules.

use std::cmp::Ordering;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Relative guard band for float comparisons of exact quantities.
pub const LOG_GUARD: f64 = 1e-9;

pub fn factorial(n: usize) -> BigUint {
    (2..=n as u64).fold(BigUint::one(), |acc, k| acc * k)
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= (n - i) as u64;
        acc /= (i + 1) as u64;
    }
    acc
}

/// Natural logarithm of a positive big integer; `-inf` for zero.
pub fn ln_biguint(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 64 {
        return (x.to_u64().unwrap() as f64).ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().unwrap() as f64;
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural logarithm of `|x|`.
pub fn ln_abs_bigint(x: &BigInt) -> f64 {
    ln_biguint(x.magnitude())
}

/// Natural logarithm of `|q|`.
pub fn ln_abs_rational(q: &BigRational) -> f64 {
    if q.is_zero() {
        return f64::NEG_INFINITY;
    }
    ln_biguint(q.numer().magnitude()) - ln_biguint(q.denom().magnitude())
}

/// Float rendering of an exact rational that stays finite for very large
/// numerators and denominators whenever the value itself is representable.
pub fn rational_to_f64(q: &BigRational) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    let v = ln_abs_rational(q).exp();
    if q.is_negative() {
        -v
    } else {
        v
    }
}

pub fn bigint_to_f64(x: &BigInt) -> f64 {
    if let Some(v) = x.to_i64() {
        return v as f64;
    }
    let v = ln_abs_bigint(x).exp();
    if x.sign() == Sign::Minus {
        -v
    } else {
        v
    }
}

/// Exact rational value of a finite float.
pub fn rational_from_f64(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}

pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> BigRational {
    BigRational::new(num.into(), den.into())
}

pub fn biguint_to_rational(x: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(x.clone()))
}

pub fn pow_rational(q: &BigRational, k: u32) -> BigRational {
    num_traits::pow(q.clone(), k as usize)
}

/// Rational enclosure `lo < e < hi` with width below `2^-270`.
pub fn e_enclosure() -> &'static (BigRational, BigRational) {
    static E: OnceLock<(BigRational, BigRational)> = OnceLock::new();
    E.get_or_init(|| {
        const TERMS: usize = 60;
        let mut sum = BigRational::zero();
        let mut fact = BigUint::one();
        for k in 0..=TERMS {
            if k > 0 {
                fact *= k as u64;
            }
            sum += BigRational::new(BigInt::one(), BigInt::from(fact.clone()));
        }
        // tail after TERMS is below 2/(TERMS+1)!
        let next = fact * (TERMS as u64 + 1);
        let tail = BigRational::new(BigInt::from(2u8), BigInt::from(next));
        let hi = &sum + tail;
        (sum, hi)
    })
}

/// Outcome of a guarded comparison between two float-evaluated quantities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Guarded {
    Decided(Ordering),
    /// The two sides agree to within the guard band.
    Undecided,
}

/// Compares `lhs` and `rhs` (typically logarithms) with a relative guard band.
pub fn guarded_cmp(lhs: f64, rhs: f64, guard: f64) -> Guarded {
    let scale = lhs.abs().max(rhs.abs()).max(1.0);
    if (lhs - rhs).abs() <= guard * scale {
        Guarded::Undecided
    } else if lhs < rhs {
        Guarded::Decided(Ordering::Less)
    } else {
        Guarded::Decided(Ordering::Greater)
    }
}

/// Largest `m` with `m^k <= x`.
pub fn floor_root(x: &BigUint, k: u32) -> BigUint {
    if k == 1 || x.is_zero() {
        return x.clone();
    }
    let mut lo = BigUint::zero();
    let mut hi = BigUint::one() << (x.bits() / k as u64 + 1);
    // invariant: lo^k <= x < hi^k
    while &hi - &lo > BigUint::one() {
        let mid: BigUint = (&lo + &hi) >> 1;
        if num_traits::pow(mid.clone(), k as usize) <= *x {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Neumaier-compensated summation.
#[derive(Debug, Default, Clone, Copy)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::default();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Decimal string pair used by every JSON output.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct ExactJson {
    pub num: String,
    pub den: String,
}

impl From<&BigRational> for ExactJson {
    fn from(q: &BigRational) -> Self {
        ExactJson {
            num: q.numer().to_string(),
            den: q.denom().to_string(),
        }
    }
}

impl ExactJson {
    pub fn to_rational(&self) -> Option<BigRational> {
        let num: BigInt = self.num.parse().ok()?;
        let den: BigInt = self.den.parse().ok()?;
        if den.is_zero() {
            return None;
        }
        Some(BigRational::new(num, den))
    }
}

/// Serializes any `Display` value (big integers in particular) as a string.
pub fn as_decimal<T: std::fmt::Display, S: serde::Serializer>(
    value: &T,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(value)
}

/// Renders an exact rational as `p` or `p/q`.
pub fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}
