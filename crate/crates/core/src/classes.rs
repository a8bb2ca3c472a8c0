//! Cycle types, class sizes and class functions on `S_n` and `A_n`.
//!
//! Functions on `A_n` live on the `S_n`-invariant subspace: they are indexed
//! by even `S_n` cycle types and take equal values on both halves of a split
//! class. Densities on `A_n` are relative to `n!/2`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{self, biguint_to_rational, factorial, CompensatedSum, ExactJson};
use crate::partitions::{partitions_of, Partition};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Group {
    #[serde(rename = "S")]
    Symmetric,
    #[serde(rename = "A")]
    Alternating,
}

impl Group {
    pub fn order(self, n: usize) -> BigUint {
        let f = factorial(n);
        match self {
            Group::Symmetric => f,
            Group::Alternating if n >= 2 => f / 2u8,
            Group::Alternating => f,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Group::Symmetric => "S",
            Group::Alternating => "A",
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Group {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "S" | "s" | "sym" => Ok(Group::Symmetric),
            "A" | "a" | "alt" => Ok(Group::Alternating),
            _ => Err(Error::InvalidArgument(format!("unknown group {s:?}, expected S or A"))),
        }
    }
}

/// A conjugacy class of `S_n`, identified by its multiset of cycle lengths.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycleType {
    partition: Partition,
    multiplicities: Vec<usize>,
}

impl CycleType {
    pub fn new(partition: Partition) -> Self {
        let multiplicities = partition.multiplicities();
        CycleType { partition, multiplicities }
    }

    /// Cycle lengths in any order; fixed points must be listed as 1s.
    pub fn from_lengths(lengths: Vec<usize>) -> Self {
        Self::new(Partition::from_unsorted(lengths))
    }

    pub fn identity(n: usize) -> Self {
        Self::new(Partition::column(n))
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn n(&self) -> usize {
        self.partition.n()
    }

    /// `f_i`, the number of cycles of length `i`.
    pub fn multiplicity(&self, i: usize) -> usize {
        self.multiplicities.get(i).copied().unwrap_or(0)
    }

    pub fn fixed_points(&self) -> usize {
        self.multiplicity(1)
    }

    pub fn cycle_count(&self) -> usize {
        self.partition.len()
    }

    pub fn parity(&self) -> Parity {
        let moved: usize = self.partition.parts().iter().map(|&l| l - 1).sum();
        if moved % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn is_even(&self) -> bool {
        self.parity() == Parity::Even
    }

    pub fn sign(&self) -> i32 {
        if self.is_even() {
            1
        } else {
            -1
        }
    }

    /// `∏ i^{f_i} f_i!`.
    pub fn centralizer_order(&self) -> BigUint {
        let mut z = BigUint::one();
        for (i, &f) in self.multiplicities.iter().enumerate().skip(1) {
            if f > 0 {
                z *= num_traits::pow(BigUint::from(i), f) * factorial(f);
            }
        }
        z
    }

    pub fn class_size(&self) -> BigUint {
        factorial(self.n()) / self.centralizer_order()
    }

    /// Fraction of `group` lying in this class; zero for odd classes in `A_n`.
    pub fn density(&self, group: Group) -> BigRational {
        let size = biguint_to_rational(&self.class_size());
        match group {
            Group::Symmetric => size / biguint_to_rational(&factorial(self.n())),
            Group::Alternating if !self.is_even() => BigRational::zero(),
            Group::Alternating => size / biguint_to_rational(&Group::Alternating.order(self.n())),
        }
    }

    /// Whether the class splits into two `A_n`-classes.
    pub fn splits_in_an(&self) -> bool {
        let parts = self.partition.parts();
        self.n() >= 2
            && parts.iter().all(|&p| p % 2 == 1)
            && parts.windows(2).all(|w| w[0] != w[1])
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.partition.fmt(f)
    }
}

impl FromStr for CycleType {
    type Err = Error;

    /// Accepts lengths in any order, e.g. `1,1,1,9`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Self::new(Partition::empty()));
        }
        let lengths = s
            .split(',')
            .map(|t| match t.trim().parse::<usize>() {
                Ok(0) | Err(_) => Err(Error::InvalidPartition(format!("bad cycle length {t:?}"))),
                Ok(v) => Ok(v),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_lengths(lengths))
    }
}

impl Serialize for CycleType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.partition.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycleType {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Partition::deserialize(d).map(CycleType::new)
    }
}

/// Even cycle types with odd, pairwise distinct parts.
pub fn an_split_classes(n: usize) -> Result<Vec<CycleType>> {
    if n < 2 {
        return Err(Error::Precondition(format!("A_n split classes need n >= 2, got {n}")));
    }
    Ok(partitions_of(n).map(CycleType::new).filter(CycleType::splits_in_an).collect())
}

/// The cycle types of one group and size, in canonical order, with sizes.
#[derive(Debug)]
pub struct ClassSpace {
    group: Group,
    n: usize,
    types: Vec<CycleType>,
    sizes: Vec<BigUint>,
    densities: Vec<BigRational>,
    index: HashMap<Partition, usize>,
}

impl ClassSpace {
    /// Shared, cached instance for `(group, n)`.
    pub fn get(group: Group, n: usize) -> Result<Arc<ClassSpace>> {
        static CACHE: OnceLock<Mutex<HashMap<(Group, usize), Arc<ClassSpace>>>> = OnceLock::new();
        if group == Group::Alternating && n < 2 {
            return Err(Error::Precondition(format!("A_n class functions need n >= 2, got {n}")));
        }
        let cache = CACHE.get_or_init(Default::default);
        if let Some(s) = cache.lock().unwrap().get(&(group, n)) {
            return Ok(s.clone());
        }
        let space = Arc::new(Self::build(group, n));
        let mut guard = cache.lock().unwrap();
        Ok(guard.entry((group, n)).or_insert(space).clone())
    }

    fn build(group: Group, n: usize) -> ClassSpace {
        let types: Vec<CycleType> = partitions_of(n)
            .map(CycleType::new)
            .filter(|ct| group == Group::Symmetric || ct.is_even())
            .collect();
        let sizes: Vec<BigUint> = types.iter().map(CycleType::class_size).collect();
        let order = biguint_to_rational(&group.order(n));
        let densities = sizes.iter().map(|s| biguint_to_rational(s) / &order).collect();
        let index = types.iter().enumerate().map(|(i, t)| (t.partition().clone(), i)).collect();
        ClassSpace { group, n, types, sizes, densities, index }
    }

    pub fn group(&self) -> Group {
        self.group
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn types(&self) -> &[CycleType] {
        &self.types
    }

    pub fn sizes(&self) -> &[BigUint] {
        &self.sizes
    }

    pub fn densities(&self) -> &[BigRational] {
        &self.densities
    }

    pub fn len(&self) -> usize {
        self.types.len()
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty()
    }

    pub fn index_of(&self, ct: &CycleType) -> Option<usize> {
        self.index.get(ct.partition()).copied()
    }

    pub fn identity_index(&self) -> usize {
        self.index[&Partition::column(self.n)]
    }

    pub fn order(&self) -> BigUint {
        self.group.order(self.n)
    }

    fn locate(&self, ct: &CycleType) -> Result<usize> {
        if ct.n() != self.n {
            return Err(Error::SizeMismatch { left: ct.n(), right: self.n });
        }
        self.index_of(ct).ok_or_else(|| Error::OddClass(ct.to_string()))
    }
}

/// An exact rational-valued class function.
#[derive(Debug, Clone)]
pub struct ClassFunction {
    space: Arc<ClassSpace>,
    values: Vec<BigRational>,
}

impl PartialEq for ClassFunction {
    fn eq(&self, other: &Self) -> bool {
        self.space.group == other.space.group
            && self.space.n == other.space.n
            && self.values == other.values
    }
}

impl ClassFunction {
    /// Values in the canonical order of `space`.
    pub fn from_vec(space: Arc<ClassSpace>, values: Vec<BigRational>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::SizeMismatch { left: values.len(), right: space.len() });
        }
        Ok(ClassFunction { space, values })
    }

    /// Builds from explicit `(type, value)` entries; absent types are zero.
    pub fn from_values(
        group: Group,
        n: usize,
        entries: impl IntoIterator<Item = (CycleType, BigRational)>,
    ) -> Result<Self> {
        let space = ClassSpace::get(group, n)?;
        let mut values = vec![BigRational::zero(); space.len()];
        for (ct, v) in entries {
            let i = space.locate(&ct)?;
            values[i] = v;
        }
        Ok(ClassFunction { space, values })
    }

    pub fn constant(group: Group, n: usize, c: BigRational) -> Result<Self> {
        let space = ClassSpace::get(group, n)?;
        let values = vec![c; space.len()];
        Ok(ClassFunction { space, values })
    }

    pub fn one(group: Group, n: usize) -> Result<Self> {
        Self::constant(group, n, BigRational::one())
    }

    /// `|G|` at the identity and zero elsewhere, the unit for convolution.
    pub fn delta_identity(group: Group, n: usize) -> Result<Self> {
        Self::normalized_class_indicator(&CycleType::identity(n), group)
    }

    /// `1_C / μ(C)` for the class `C` of `ct`.
    pub fn normalized_class_indicator(ct: &CycleType, group: Group) -> Result<Self> {
        Self::normalized_set_indicator(std::slice::from_ref(ct), group)
    }

    /// `1_A / μ(A)` for the normal set `A` that is the union of the classes.
    pub fn normalized_set_indicator(types: &[CycleType], group: Group) -> Result<Self> {
        let n = types.first().ok_or(Error::EmptySet)?.n();
        let space = ClassSpace::get(group, n)?;
        let mut support = vec![false; space.len()];
        for ct in types {
            support[space.locate(ct)?] = true;
        }
        let mass: BigRational = support
            .iter()
            .zip(&space.densities)
            .filter(|(s, _)| **s)
            .map(|(_, d)| d.clone())
            .sum();
        let value = mass.recip();
        let values = support
            .iter()
            .map(|&s| if s { value.clone() } else { BigRational::zero() })
            .collect();
        Ok(ClassFunction { space, values })
    }

    pub fn space(&self) -> &Arc<ClassSpace> {
        &self.space
    }

    pub fn group(&self) -> Group {
        self.space.group
    }

    pub fn n(&self) -> usize {
        self.space.n
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    pub fn value(&self, ct: &CycleType) -> Result<&BigRational> {
        Ok(&self.values[self.space.locate(ct)?])
    }

    pub fn into_values(self) -> Vec<BigRational> {
        self.values
    }

    pub(crate) fn check_same_space(&self, other: &ClassFunction) -> Result<()> {
        if self.space.group != other.space.group {
            return Err(Error::TagMismatch);
        }
        if self.space.n != other.space.n {
            return Err(Error::SizeMismatch { left: self.space.n, right: other.space.n });
        }
        Ok(())
    }

    fn weighted_sum(&self, f: impl Fn(&BigRational) -> BigRational) -> BigRational {
        self.values.iter().zip(&self.space.densities).map(|(v, d)| f(v) * d).sum()
    }

    /// `E[f]`.
    pub fn mean(&self) -> BigRational {
        self.weighted_sum(|v| v.clone())
    }

    pub fn l1_norm(&self) -> BigRational {
        self.weighted_sum(|v| v.abs())
    }

    /// `‖f‖₂²`.
    pub fn l2_norm_sq(&self) -> BigRational {
        self.weighted_sum(|v| v * v)
    }

    pub fn l2_norm(&self) -> f64 {
        exact::rational_to_f64(&self.l2_norm_sq()).sqrt()
    }

    /// `‖f‖_p^p` for even integer `p`.
    pub fn lp_norm_power_exact(&self, p: u32) -> Result<BigRational> {
        if p == 0 || p % 2 == 1 {
            return Err(Error::InvalidArgument(format!("exact L^p needs even p, got {p}")));
        }
        Ok(self.weighted_sum(|v| exact::pow_rational(v, p)))
    }

    /// `‖f‖_p`, exact up to the final root for `p ∈ {1, 2}` and even `p`.
    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::InvalidArgument(format!("L^p norm needs p >= 1, got {p}")));
        }
        if p == 1.0 {
            return Ok(exact::rational_to_f64(&self.l1_norm()));
        }
        if p.fract() == 0.0 && p <= 64.0 && (p as u32) % 2 == 0 {
            let power = self.lp_norm_power_exact(p as u32)?;
            return Ok((exact::ln_abs_rational(&power) / p).exp());
        }
        // Work in logs so huge values stay finite, then rescale.
        let logs: Vec<f64> = self
            .values
            .iter()
            .zip(&self.space.densities)
            .filter(|(v, _)| !v.is_zero())
            .map(|(v, d)| exact::ln_abs_rational(d) + p * exact::ln_abs_rational(v))
            .collect();
        if logs.is_empty() {
            return Ok(0.0);
        }
        let top = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let sum: CompensatedSum = logs.iter().map(|l| (l - top).exp()).collect();
        Ok(((top + sum.value().ln()) / p).exp())
    }

    /// `⟨f, g⟩ = E[f g]`; every function here is real.
    pub fn inner(&self, other: &ClassFunction) -> Result<BigRational> {
        self.check_same_space(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .zip(&self.space.densities)
            .map(|((a, b), d)| a * b * d)
            .sum())
    }

    pub fn sub(&self, other: &ClassFunction) -> Result<ClassFunction> {
        self.check_same_space(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect();
        Ok(ClassFunction { space: self.space.clone(), values })
    }

    pub fn scale(&self, c: &BigRational) -> ClassFunction {
        let values = self.values.iter().map(|v| v * c).collect();
        ClassFunction { space: self.space.clone(), values }
    }

    /// `‖f‖₁ = 1`, the normalization required of walk densities.
    pub fn is_normalized(&self) -> bool {
        self.l1_norm().is_one()
    }

    pub fn to_json(&self) -> ClassFunctionJson {
        ClassFunctionJson {
            group: self.space.group,
            n: self.space.n,
            values: self
                .space
                .types
                .iter()
                .zip(&self.values)
                .map(|(t, v)| {
                    let e = ExactJson::from(v);
                    ClassValueJson { cycle_type: t.to_string(), num: e.num, den: e.den }
                })
                .collect(),
        }
    }

    pub fn from_json(json: &ClassFunctionJson) -> Result<Self> {
        let entries = json
            .values
            .iter()
            .map(|e| {
                let ct: CycleType = e.cycle_type.parse()?;
                let num: BigInt = e.num.parse().map_err(|_| Error::InvalidArgument(e.num.clone()))?;
                let den: BigInt = e.den.parse().map_err(|_| Error::InvalidArgument(e.den.clone()))?;
                if den.is_zero() {
                    return Err(Error::InvalidArgument("zero denominator".into()));
                }
                Ok((ct, BigRational::new(num, den)))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_values(json.group, json.n, entries)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassValueJson {
    #[serde(rename = "type")]
    pub cycle_type: String,
    pub num: String,
    pub den: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassFunctionJson {
    pub group: Group,
    pub n: usize,
    pub values: Vec<ClassValueJson>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;

    fn ct(s: &str) -> CycleType {
        s.parse().unwrap()
    }

    #[test]
    fn class_sizes() {
        assert_eq!(CycleType::identity(6).class_size(), BigUint::one());
        assert_eq!(ct("4").class_size(), BigUint::from(6u8));
        assert_eq!(ct("2,1,1").class_size(), BigUint::from(6u8));
        for n in 0..=30 {
            let total: BigUint = partitions_of(n).map(|p| CycleType::new(p).class_size()).sum();
            assert_eq!(total, factorial(n));
        }
        for n in 2..=30 {
            let even: BigUint = partitions_of(n)
                .map(CycleType::new)
                .filter(CycleType::is_even)
                .map(|c| c.class_size())
                .sum();
            assert_eq!(even, factorial(n) / 2u8);
        }
    }

    #[test]
    fn parity() {
        assert_eq!(CycleType::identity(5).parity(), Parity::Even);
        assert_eq!(ct("2,1,1,1").parity(), Parity::Odd);
        assert_eq!(ct("3,1,1").parity(), Parity::Even);
        assert_eq!(ct("1,1,1,9").partition().parts(), &[9, 1, 1, 1]);
    }

    #[test]
    fn split_classes() {
        assert_eq!(an_split_classes(3).unwrap(), vec![ct("3")]);
        assert_eq!(an_split_classes(4).unwrap(), vec![ct("3,1")]);
        assert_eq!(an_split_classes(5).unwrap(), vec![ct("5")]);
        assert!(an_split_classes(1).is_err());
    }

    #[test]
    fn indicators() {
        let n = 6;
        let f = ClassFunction::delta_identity(Group::Symmetric, n).unwrap();
        assert_eq!(f.value(&CycleType::identity(n)).unwrap(), &ratio(720, 1));
        assert!(f.is_normalized());
        let g = ClassFunction::normalized_class_indicator(&ct("6"), Group::Symmetric).unwrap();
        assert_eq!(g.value(&ct("6")).unwrap(), &ratio(6, 1));
        for space in [Group::Symmetric, Group::Alternating] {
            for t in ClassSpace::get(space, 7).unwrap().types() {
                let h = ClassFunction::normalized_class_indicator(t, space).unwrap();
                assert!(h.is_normalized());
                assert!((t.density(space) * h.l2_norm_sq()).is_one());
            }
        }
        assert!(matches!(
            ClassFunction::normalized_class_indicator(&ct("2,1,1"), Group::Alternating),
            Err(Error::OddClass(_))
        ));
    }

    #[test]
    fn norms() {
        let one = ClassFunction::one(Group::Symmetric, 5).unwrap();
        for p in [1.0, 1.5, 2.0, 3.0, 4.0] {
            assert!((one.lp_norm(p).unwrap() - 1.0).abs() < 1e-12);
        }
        let g = ClassFunction::normalized_class_indicator(&ct("5"), Group::Symmetric).unwrap();
        // density 1/5
        assert!((g.lp_norm(2.0).unwrap() - 5f64.sqrt()).abs() < 1e-12);
        assert!((g.lp_norm(3.0).unwrap() - 25f64.powf(1.0 / 3.0)).abs() < 1e-12);
        assert!(one.lp_norm(0.5).is_err());
    }

    #[test]
    fn json_round_trip() {
        let g = ClassFunction::normalized_class_indicator(&ct("3,1,1"), Group::Alternating).unwrap();
        let text = serde_json::to_string(&g.to_json()).unwrap();
        assert!(text.starts_with("{\"group\":\"A\",\"n\":5,"));
        let back: ClassFunctionJson = serde_json::from_str(&text).unwrap();
        assert_eq!(ClassFunction::from_json(&back).unwrap(), g);
    }
}
