//! Norms of characters, Fourier expansions of class functions, convolution,
//! Kronecker coefficients and globalness certificates.
//!
//! On `A_n` the irreducible characters are indexed by one representative of
//! each pair `{λ, λ'}`. A self-conjugate `λ` stands for its two split
//! characters at once: the stored coefficient is the aggregate
//! `⟨f, χ_λ^R⟩`, and each half carries half of it with half the dimension.
//! This is exact for the `S_n`-invariant functions admitted by [`ClassFunction`].

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::characters::{branching_chain, CharacterEvaluator};
use crate::classes::{ClassFunction, ClassSpace, Group};
use crate::error::{Error, Result};
use crate::exact::{self, factorial, ExactJson};
use crate::partitions::Partition;
use crate::perm::{all_permutations, Perm};

/// Largest `n` for value-space oracles that enumerate the group.
pub const BRUTE_FORCE_MAX_N: usize = 8;
/// Largest `n` for the all-pairs coset sweep.
pub const COSET_SWEEP_MAX_N: usize = 7;
/// Pairs `(I, J)` examined per `m` by the sampled coset check.
pub const COSET_SAMPLE: usize = 200;

/// One irreducible character of `S_n`, or one representative on `A_n`.
#[derive(Debug, Clone)]
pub struct Irrep {
    pub lambda: Partition,
    pub dim: BigInt,
    /// Self-conjugate on `A_n`: the entry stands for two split characters.
    pub split: bool,
    /// Values on the classes of the owning [`ClassSpace`].
    pub values: Vec<BigInt>,
}

/// The irreducible characters of one group, on its class space.
#[derive(Debug)]
pub struct IrrepSet {
    space: Arc<ClassSpace>,
    irreps: Vec<Irrep>,
    index: HashMap<Partition, usize>,
}

impl IrrepSet {
    pub fn get(group: Group, n: usize) -> Result<Arc<IrrepSet>> {
        static CACHE: OnceLock<Mutex<HashMap<(Group, usize), Arc<IrrepSet>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(s) = cache.lock().unwrap().get(&(group, n)) {
            return Ok(s.clone());
        }
        let set = Arc::new(Self::build(group, n)?);
        Ok(cache.lock().unwrap().entry((group, n)).or_insert(set).clone())
    }

    fn build(group: Group, n: usize) -> Result<Self> {
        let space = ClassSpace::get(group, n)?;
        let table = CharacterEvaluator::global().character_table(n)?;
        let columns: Vec<usize> = space
            .types()
            .iter()
            .map(|t| table.classes().index_of(t).expect("even class is an S_n class"))
            .collect();
        let id = space.identity_index();
        let mut irreps = Vec::new();
        for (row, lambda) in table.partitions().iter().enumerate() {
            let conj = lambda.conjugate();
            if group == Group::Alternating && *lambda < conj {
                continue;
            }
            let values: Vec<BigInt> = columns.iter().map(|&c| table.value(row, c).clone()).collect();
            irreps.push(Irrep {
                lambda: lambda.clone(),
                dim: values[id].clone(),
                split: group == Group::Alternating && *lambda == conj,
                values,
            });
        }
        let index = irreps.iter().enumerate().map(|(i, r)| (r.lambda.clone(), i)).collect();
        Ok(IrrepSet { space, irreps, index })
    }

    pub fn space(&self) -> &Arc<ClassSpace> {
        &self.space
    }

    pub fn irreps(&self) -> &[Irrep] {
        &self.irreps
    }

    /// Index of `λ`, accepting either member of a conjugate pair on `A_n`.
    pub fn index_of(&self, lambda: &Partition) -> Option<usize> {
        self.index
            .get(lambda)
            .or_else(|| match self.space.group() {
                Group::Alternating => self.index.get(&lambda.conjugate()),
                Group::Symmetric => None,
            })
            .copied()
    }

    pub fn trivial_index(&self) -> usize {
        self.index[&Partition::row(self.space.n())]
    }
}

/// Weight of a term `∏_{i<k} f̂_i(χ) / χ(1)^e` when written with aggregate
/// coefficients and full dimensions: `2^{1-k+e}` for a split pair.
pub fn split_weight(split: bool, k: u32, e: u32) -> BigRational {
    if !split {
        return BigRational::one();
    }
    let exp = 1 + e as i64 - k as i64;
    let two = BigInt::from(2u8);
    if exp >= 0 {
        BigRational::from_integer(num_traits::pow(two, exp as usize))
    } else {
        BigRational::new(BigInt::one(), num_traits::pow(two, (-exp) as usize))
    }
}

/// Fourier coefficients of a class function over the irreducible characters.
#[derive(Debug, Clone)]
pub struct FourierExpansion {
    irreps: Arc<IrrepSet>,
    coefficients: Vec<BigRational>,
}

impl FourierExpansion {
    pub fn of(f: &ClassFunction) -> Result<Self> {
        let irreps = IrrepSet::get(f.group(), f.n())?;
        let weighted: Vec<BigRational> =
            f.values().iter().zip(f.space().densities()).map(|(v, d)| v * d).collect();
        let coefficients = irreps
            .irreps
            .par_iter()
            .map(|r| dot(&weighted, &r.values))
            .collect();
        Ok(FourierExpansion { irreps, coefficients })
    }

    pub fn group(&self) -> Group {
        self.irreps.space.group()
    }

    pub fn n(&self) -> usize {
        self.irreps.space.n()
    }

    pub fn irreps(&self) -> &Arc<IrrepSet> {
        &self.irreps
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coefficients
    }

    /// `f̂(χ_λ)`; on `A_n` the aggregate for a self-conjugate `λ`.
    pub fn coefficient(&self, lambda: &Partition) -> Option<&BigRational> {
        self.irreps.index_of(lambda).map(|i| &self.coefficients[i])
    }

    /// `Σ_χ f̂(χ)²` over the actual irreducible characters.
    pub fn parseval_sum(&self) -> BigRational {
        self.irreps
            .irreps
            .iter()
            .zip(&self.coefficients)
            .map(|(r, c)| split_weight(r.split, 2, 0) * c * c)
            .sum()
    }

    /// `Σ_χ f̂(χ) χ` as a class function.
    pub fn inverse(&self) -> ClassFunction {
        let k = self.irreps.space.len();
        let half = BigRational::new(BigInt::one(), BigInt::from(2u8));
        let mut values = vec![BigRational::zero(); k];
        for (r, c) in self.irreps.irreps.iter().zip(&self.coefficients) {
            if c.is_zero() {
                continue;
            }
            let c = if r.split { c * &half } else { c.clone() };
            for (v, chi) in values.iter_mut().zip(&r.values) {
                *v += &c * chi;
            }
        }
        ClassFunction::from_vec(self.irreps.space.clone(), values).expect("length matches")
    }

    /// `(f ∗ g)^ = f̂ ĝ / χ(1)` coefficientwise.
    pub fn convolve(&self, other: &FourierExpansion) -> Result<FourierExpansion> {
        if !Arc::ptr_eq(&self.irreps, &other.irreps) {
            return Err(Error::TagMismatch);
        }
        let coefficients = self
            .irreps
            .irreps
            .iter()
            .zip(self.coefficients.iter().zip(&other.coefficients))
            .map(|(r, (a, b))| a * b / BigRational::from_integer(r.dim.clone()))
            .collect();
        Ok(FourierExpansion { irreps: self.irreps.clone(), coefficients })
    }
}

fn dot(weighted: &[BigRational], chi: &[BigInt]) -> BigRational {
    weighted
        .iter()
        .zip(chi)
        .filter(|(_, c)| !c.is_zero())
        .map(|(w, c)| w * BigRational::from_integer(c.clone()))
        .sum()
}

/// `χ_λ` as a class function; on `A_n` the restriction `χ_λ^R`.
pub fn character_function(lambda: &Partition, group: Group) -> Result<ClassFunction> {
    let space = ClassSpace::get(group, lambda.n())?;
    let eval = CharacterEvaluator::global();
    let values = space
        .types()
        .par_iter()
        .map(|t| eval.mn_value(lambda, t).map(BigRational::from_integer))
        .collect::<Result<Vec<_>>>()?;
    ClassFunction::from_vec(space, values)
}

/// `f̂(χ_λ) = ⟨f, χ_λ⟩`, computed from character values without a table.
pub fn fourier_coefficient(f: &ClassFunction, lambda: &Partition) -> Result<BigRational> {
    if lambda.n() != f.n() {
        return Err(Error::SizeMismatch { left: lambda.n(), right: f.n() });
    }
    let eval = CharacterEvaluator::global();
    let terms = f
        .space()
        .types()
        .par_iter()
        .zip(f.values().par_iter().zip(f.space().densities().par_iter()))
        .filter(|(_, (v, _))| !v.is_zero())
        .map(|(t, (v, d))| Ok(v * d * BigRational::from_integer(eval.mn_value(lambda, t)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(terms.into_iter().sum())
}

/// Spectral convolution `E_σ[f(σ⁻¹) g(στ)]`.
pub fn convolve(f: &ClassFunction, g: &ClassFunction) -> Result<ClassFunction> {
    f.check_same_space(g)?;
    Ok(FourierExpansion::of(f)?.convolve(&FourierExpansion::of(g)?)?.inverse())
}

/// For each class representative `τ_t`, the counts
/// `#{σ ∈ G : σ ∈ a, στ_t ∈ b}`, enabling definitional convolutions.
#[derive(Debug)]
pub struct ConvolutionStructure {
    space: Arc<ClassSpace>,
    counts: Vec<Vec<Vec<u64>>>,
}

impl ConvolutionStructure {
    pub fn get(group: Group, n: usize) -> Result<Arc<ConvolutionStructure>> {
        static CACHE: OnceLock<Mutex<HashMap<(Group, usize), Arc<ConvolutionStructure>>>> =
            OnceLock::new();
        if n > BRUTE_FORCE_MAX_N {
            return Err(Error::CapExceeded { what: "brute-force n", value: n, cap: BRUTE_FORCE_MAX_N });
        }
        let cache = CACHE.get_or_init(Default::default);
        if let Some(s) = cache.lock().unwrap().get(&(group, n)) {
            return Ok(s.clone());
        }
        let space = ClassSpace::get(group, n)?;
        let perms: Vec<Perm> = all_permutations(n)
            .into_iter()
            .filter(|p| group == Group::Symmetric || p.is_even())
            .collect();
        let class_of =
            |p: &Perm| space.index_of(&p.cycle_type()).expect("element lies in the group");
        let elem_class: Vec<usize> = perms.iter().map(class_of).collect();
        let k = space.len();
        let counts = space
            .types()
            .par_iter()
            .map(|t| {
                let tau = Perm::with_cycle_type(t);
                let mut m = vec![vec![0u64; k]; k];
                for (s, &a) in perms.iter().zip(&elem_class) {
                    m[a][class_of(&s.compose(&tau))] += 1;
                }
                m
            })
            .collect();
        let built = Arc::new(ConvolutionStructure { space, counts });
        Ok(cache.lock().unwrap().entry((group, n)).or_insert(built).clone())
    }

    /// `(f ∗ g)(τ) = E_σ[f(σ⁻¹) g(στ)]` by the defining sum.
    pub fn convolve(&self, f: &ClassFunction, g: &ClassFunction) -> Result<ClassFunction> {
        f.check_same_space(g)?;
        if f.group() != self.space.group() || f.n() != self.space.n() {
            return Err(Error::TagMismatch);
        }
        let order = BigRational::from_integer(BigInt::from(self.space.order()));
        let values = self
            .counts
            .iter()
            .map(|m| {
                let mut acc = BigRational::zero();
                for (a, row) in m.iter().enumerate() {
                    for (b, &c) in row.iter().enumerate() {
                        if c > 0 {
                            acc += &f.values()[a] * &g.values()[b] * BigRational::from_integer(c.into());
                        }
                    }
                }
                acc / &order
            })
            .collect();
        ClassFunction::from_vec(self.space.clone(), values)
    }
}

/// Definitional convolution for `n <= 8`.
pub fn convolve_direct(f: &ClassFunction, g: &ClassFunction) -> Result<ClassFunction> {
    ConvolutionStructure::get(f.group(), f.n())?.convolve(f, g)
}

/// `Σ_ct |C| χ_λ(ct)^q` over `S_n`, divided by `n!` at the end.
fn power_moment(lambda: &Partition, q: u32) -> Result<BigRational> {
    let space = ClassSpace::get(Group::Symmetric, lambda.n())?;
    let eval = CharacterEvaluator::global();
    let terms = space
        .types()
        .par_iter()
        .zip(space.sizes().par_iter())
        .map(|(t, size)| {
            let chi = eval.mn_value(lambda, t)?;
            Ok(num_traits::pow(chi, q as usize) * BigInt::from(size.clone()))
        })
        .collect::<Result<Vec<BigInt>>>()?;
    let total: BigInt = terms.into_iter().sum();
    Ok(BigRational::new(total, BigInt::from(factorial(lambda.n()))))
}

/// `‖χ_λ‖_q^q` on `S_n` for even integer `q`.
pub fn q_norm_exact(lambda: &Partition, q: u32) -> Result<BigRational> {
    if q == 0 || q % 2 == 1 {
        return Err(Error::InvalidArgument(format!("exact norms need even q, got {q}")));
    }
    power_moment(lambda, q)
}

/// `‖χ_λ‖_q` on `S_n`.
pub fn q_norm(lambda: &Partition, q: f64) -> Result<f64> {
    if q.is_nan() || q < 1.0 {
        return Err(Error::InvalidArgument(format!("q must be >= 1, got {q}")));
    }
    if q.fract() == 0.0 && (q as u32) % 2 == 0 && q <= 64.0 {
        let p = q_norm_exact(lambda, q as u32)?;
        return Ok((exact::ln_abs_rational(&p) / q).exp());
    }
    character_function(lambda, Group::Symmetric)?.lp_norm(q)
}

/// `g(λ, μ, ν) = E[χ_λ χ_μ χ_ν]`.
///
/// # Panics
///
/// If the sum is not a nonnegative integer, which would mean the character
/// engine is wrong.
pub fn kronecker(lambda: &Partition, mu: &Partition, nu: &Partition) -> Result<BigUint> {
    let n = lambda.n();
    for p in [mu, nu] {
        if p.n() != n {
            return Err(Error::SizeMismatch { left: n, right: p.n() });
        }
    }
    let space = ClassSpace::get(Group::Symmetric, n)?;
    let eval = CharacterEvaluator::global();
    let fast = space
        .types()
        .iter()
        .zip(space.sizes())
        .try_fold(0i128, |acc, (t, size)| {
            let a = eval.mn_value_i128(lambda, t)?;
            let b = eval.mn_value_i128(mu, t)?;
            let c = eval.mn_value_i128(nu, t)?;
            let s = size.to_i128()?;
            acc.checked_add(a.checked_mul(b)?.checked_mul(c)?.checked_mul(s)?)
        });
    let total = match fast {
        Some(v) => BigInt::from(v),
        None => {
            let mut total = BigInt::zero();
            for (t, size) in space.types().iter().zip(space.sizes()) {
                total += eval.mn_value(lambda, t)? * eval.mn_value(mu, t)? * eval.mn_value(nu, t)?
                    * BigInt::from(size.clone());
            }
            total
        }
    };
    let order = BigInt::from(factorial(n));
    let (g, rem) = total.div_rem(&order);
    assert!(
        rem.is_zero() && !g.is_negative(),
        "kronecker({lambda}; {mu}; {nu}) = {total}/{order} is not a nonnegative integer"
    );
    Ok(g.to_biguint().unwrap())
}

/// `‖χ_λ|_{S_{n-m}}‖₂`, with its exact square `Σ c_μ²`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RestrictionNorm {
    pub m: usize,
    #[serde(serialize_with = "exact::as_decimal")]
    pub sum: BigUint,
    #[serde(serialize_with = "exact::as_decimal")]
    pub squared: BigUint,
    pub value: f64,
}

pub fn restriction_norm(lambda: &Partition, m: usize) -> Result<RestrictionNorm> {
    if m >= lambda.n().max(1) {
        return Err(Error::Precondition(format!("need m < n, got m={m}, n={}", lambda.n())));
    }
    Ok(restriction_norms(lambda, m).pop().unwrap())
}

/// Restriction norms for every `m` in `0..=m_max`.
pub fn restriction_norms(lambda: &Partition, m_max: usize) -> Vec<RestrictionNorm> {
    branching_chain(lambda, m_max)
        .into_iter()
        .enumerate()
        .map(|(m, level)| {
            let sum: BigUint = level.iter().map(|(_, c)| c.clone()).sum();
            let squared: BigUint = level.iter().map(|(_, c)| c * c).sum();
            let value = (0.5 * exact::ln_biguint(&squared)).exp();
            RestrictionNorm { m, sum, squared, value }
        })
        .collect()
}

/// `‖χ_{I→J}‖₂` on the coset `{σ : σ(I_k) = J_k}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CosetNorm {
    #[serde(skip)]
    pub squared: BigRational,
    pub value: f64,
}

fn validate_tuples(n: usize, i: &[usize], j: &[usize]) -> Result<()> {
    if i.len() != j.len() {
        return Err(Error::MalformedTuples(format!("lengths {} and {} differ", i.len(), j.len())));
    }
    for t in [i, j] {
        if t.iter().any(|&x| x == 0 || x > n) {
            return Err(Error::MalformedTuples(format!("{t:?} leaves 1..={n}")));
        }
        let mut s = t.to_vec();
        s.sort_unstable();
        if s.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::MalformedTuples(format!("{t:?} repeats a coordinate")));
        }
    }
    Ok(())
}

/// Coset norm by enumerating the coset, with 1-based tuples and `n <= 8`.
pub fn coset_restriction_norm_bruteforce(lambda: &Partition, i: &[usize], j: &[usize]) -> Result<CosetNorm> {
    let n = lambda.n();
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::CapExceeded { what: "brute-force n", value: n, cap: BRUTE_FORCE_MAX_N });
    }
    validate_tuples(n, i, j)?;
    let table = CharacterEvaluator::global().character_table(n)?;
    let row = table.row_of(lambda).ok_or_else(|| Error::InvalidPartition(lambda.to_string()))?;
    let classes = table.classes();
    let m = i.len();
    let domain: Vec<usize> = (0..n).filter(|x| !i.contains(&(x + 1))).collect();
    let codomain: Vec<usize> = (0..n).filter(|x| !j.contains(&(x + 1))).collect();
    let mut image = vec![0usize; n];
    for (a, b) in i.iter().zip(j) {
        image[a - 1] = b - 1;
    }
    let mut total = BigInt::zero();
    for rest in all_permutations(n - m) {
        for (k, &x) in domain.iter().enumerate() {
            image[x] = codomain[rest.apply(k)];
        }
        let ct = Perm(image.clone()).cycle_type();
        let chi = &row[classes.index_of(&ct).unwrap()];
        total += chi * chi;
    }
    let squared = BigRational::new(total, BigInt::from(factorial(n - m)));
    let value = exact::rational_to_f64(&squared).sqrt();
    Ok(CosetNorm { squared, value })
}

/// Exact outcome of comparing every coset pair at one `m`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CosetLevel {
    pub m: usize,
    pub pairs: u64,
    /// `max_{I,J} Σ_{σ ∈ U_{I→J}} χ(σ)²`.
    pub max_sum: u64,
    /// `Σ_{σ ∈ U_{I→I}} χ(σ)²`, which is independent of `I`.
    pub diagonal_sum: u64,
    pub sum_c_sq: u64,
    pub sum_c: u64,
    /// Pairs with `‖χ_{I→J}‖ > ‖χ_{I→I}‖`.
    pub off_diagonal_violations: u64,
    /// Diagonals not equal to `(n-m)! Σ c²`.
    pub diagonal_mismatches: u64,
    /// `‖χ_{I→I}‖ <= Σ c_μ`.
    pub chain_holds: bool,
}

impl CosetLevel {
    pub fn passes(&self) -> bool {
        self.off_diagonal_violations == 0 && self.diagonal_mismatches == 0 && self.chain_holds
    }
}

/// Class index of `τ_t ∘ π_p⁻¹` for all lex ranks `p, t`.
fn coset_class_grid(n: usize) -> Arc<(Vec<u8>, Arc<ClassSpace>)> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<(Vec<u8>, Arc<ClassSpace>)>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(g) = cache.lock().unwrap().get(&n) {
        return g.clone();
    }
    let space = ClassSpace::get(Group::Symmetric, n).unwrap();
    let perms = all_permutations(n);
    let inverses: Vec<Perm> = perms.iter().map(Perm::inverse).collect();
    // cycle types keyed by their multiplicity vector packed in base n+1
    let key = |mults: &[usize]| mults.iter().fold(0usize, |k, &f| k * (n + 1) + f);
    let lookup: HashMap<usize, u8> = space
        .types()
        .iter()
        .enumerate()
        .map(|(i, t)| (key(&(1..=n).map(|l| t.multiplicity(l)).collect::<Vec<_>>()), i as u8))
        .collect();
    let grid: Vec<u8> = inverses
        .par_iter()
        .flat_map_iter(|pinv| {
            let lookup = &lookup;
            perms.iter().map(move |tau| {
                let mut img = [0usize; COSET_SWEEP_MAX_N];
                for (i, &j) in pinv.0.iter().enumerate() {
                    img[i] = tau.0[j];
                }
                let mut seen = [false; COSET_SWEEP_MAX_N];
                let mut mults = [0usize; COSET_SWEEP_MAX_N];
                for start in 0..n {
                    let mut len = 0;
                    let mut i = start;
                    while !seen[i] {
                        seen[i] = true;
                        i = img[i];
                        len += 1;
                    }
                    if len > 0 {
                        mults[len - 1] += 1;
                    }
                }
                lookup[&key(&mults[..n])]
            })
        })
        .collect();
    let built = Arc::new((grid, space));
    cache.lock().unwrap().entry(n).or_insert(built).clone()
}

/// Compares `‖χ_{I→J}‖₂` over every pair of ordered tuples, for `n <= 7`.
///
/// Permutations are ranked lexicographically, so those with a fixed
/// length-`m` prefix `J` form a block of `(n-m)!` consecutive ranks. With
/// `π_I` the first permutation of the block for `I`, `τ ↦ τ π_I⁻¹` maps the
/// block of `J` onto the coset `U_{I→J}`; a pass over all `τ` therefore fills
/// every `J` for one `I`.
pub fn coset_sweep(lambda: &Partition) -> Result<Vec<CosetLevel>> {
    let n = lambda.n();
    if n > COSET_SWEEP_MAX_N {
        return Err(Error::CapExceeded { what: "coset sweep n", value: n, cap: COSET_SWEEP_MAX_N });
    }
    let table = CharacterEvaluator::global().character_table(n)?;
    let row = table.row_of(lambda).ok_or_else(|| Error::InvalidPartition(lambda.to_string()))?;
    let grid = coset_class_grid(n);
    let (grid, space) = (&grid.0, &grid.1);
    let chi_sq: Vec<u64> = space
        .types()
        .iter()
        .map(|t| {
            let v = row[table.classes().index_of(t).unwrap()].to_i64().unwrap();
            (v * v) as u64
        })
        .collect();
    let total = factorial(n).to_usize().unwrap();
    let norms = restriction_norms(lambda, n.saturating_sub(1));
    let mut out = Vec::new();
    for (m, norm) in norms.iter().enumerate() {
        let block = factorial(n - m).to_usize().unwrap();
        let blocks = total / block;
        let sum_c = norm.sum.to_u64().unwrap();
        let sum_c_sq = norm.squared.to_u64().unwrap();
        let expected_diag = sum_c_sq * block as u64;
        let per_i: Vec<(u64, u64, u64, bool)> = (0..blocks)
            .into_par_iter()
            .map(|b| {
                let base = b * block * total;
                let acc: Vec<u64> = grid[base..base + total]
                    .chunks_exact(block)
                    .map(|c| c.iter().map(|&k| chi_sq[k as usize]).sum())
                    .collect();
                let diag = acc[b];
                let over = acc.iter().filter(|&&a| a > diag).count() as u64;
                let max = *acc.iter().max().unwrap();
                (max, diag, over, diag == expected_diag)
            })
            .collect();
        let max_sum = per_i.iter().map(|x| x.0).max().unwrap_or(0);
        let diagonal_sum = per_i.first().map(|x| x.1).unwrap_or(0);
        let off_diagonal_violations = per_i.iter().map(|x| x.2).sum();
        let diagonal_mismatches = per_i.iter().filter(|x| !x.3).count() as u64;
        // ‖χ_{I→I}‖² = diag/(n-m)! <= (Σ c)²
        let chain_holds = per_i.iter().all(|x| x.1 <= sum_c * sum_c * block as u64);
        out.push(CosetLevel {
            m,
            pairs: (blocks as u64) * (blocks as u64),
            max_sum,
            diagonal_sum,
            sum_c_sq,
            sum_c,
            off_diagonal_violations,
            diagonal_mismatches,
            chain_holds,
        });
    }
    Ok(out)
}

/// Per-`m` data of a globalness certificate.
#[derive(Debug, Clone, Serialize)]
pub struct GlobalLevel {
    pub m: usize,
    /// `B(m) = Σ_μ c_μ`.
    pub sum_c: String,
    pub sum_c_sq: String,
    /// `2^m · dim(λ̃)`.
    pub bound: String,
    pub holds: bool,
    /// Largest `‖χ_{I→J}‖₂` found by the coset check, when it ran.
    pub brute_max: Option<f64>,
    pub brute_pairs: usize,
    pub brute_holds: Option<bool>,
}

/// Certificate that `χ_λ` is `(2, dim(λ̃))`-global, with the fitted constant
/// of the `(2, (Cd/n)^d χ(1))` form.
#[derive(Debug, Clone, Serialize)]
pub struct GlobalnessCertificate {
    pub lambda: Partition,
    pub level: usize,
    pub dimension: String,
    pub tilde_dimension: String,
    pub levels: Vec<GlobalLevel>,
    /// Smallest `C` with `(Cd/n)^d χ(1) >= B(m)/2^m` for all `m`; 0 when `d = 0`.
    pub fitted_c: f64,
    pub fitted_c_witness_m: usize,
    pub pass: bool,
}

fn injections(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|t: Vec<usize>| {
                let free: Vec<usize> = (1..=n).filter(|x| !t.contains(x)).collect();
                free.into_iter().map(move |x| {
                    let mut u = t.clone();
                    u.push(x);
                    u
                })
            })
            .collect();
    }
    out
}

/// Sampled `(I, J)` pairs for one `m`: all pairs when there are at most
/// [`COSET_SAMPLE`], otherwise `I = J` plus a seeded sample.
pub fn sample_tuple_pairs(n: usize, m: usize, seed: u64) -> Vec<(Vec<usize>, Vec<usize>)> {
    let tuples = injections(n, m);
    let k = tuples.len();
    let total = k * k;
    if total <= COSET_SAMPLE {
        return tuples.iter().flat_map(|i| tuples.iter().map(move |j| (i.clone(), j.clone()))).collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((n as u64) << 32) ^ m as u64);
    let mut out = vec![(tuples[0].clone(), tuples[0].clone())];
    for idx in sample(&mut rng, total, COSET_SAMPLE - 1).into_iter() {
        out.push((tuples[idx / k].clone(), tuples[idx % k].clone()));
    }
    out
}

pub fn globalness_certificate(lambda: &Partition, n_cap: usize, seed: u64) -> Result<GlobalnessCertificate> {
    let n = lambda.n();
    let d = lambda.level()?;
    let dim = lambda.dimension();
    let tilde_dim = lambda.tilde()?.dimension();
    let brute = n <= n_cap.min(BRUTE_FORCE_MAX_N);
    let mut levels = Vec::new();
    let mut fitted_c = 0.0f64;
    let mut witness_m = 0;
    let ln_dim = exact::ln_biguint(&dim);
    for norm in restriction_norms(lambda, n - 1) {
        let m = norm.m;
        let bound = (BigUint::one() << m) * &tilde_dim;
        let holds = norm.sum <= bound;
        let (brute_max, brute_pairs, brute_holds) = if brute {
            let pairs = sample_tuple_pairs(n, m, seed);
            let b_sq = BigRational::from_integer(BigInt::from(&norm.sum * &norm.sum));
            let mut max = 0.0f64;
            let mut ok = true;
            for (i, j) in &pairs {
                let c = coset_restriction_norm_bruteforce(lambda, i, j)?;
                ok &= c.squared <= b_sq;
                max = max.max(c.value);
            }
            (Some(max), pairs.len(), Some(ok))
        } else {
            (None, 0, None)
        };
        if d > 0 {
            // C >= (n/d) (B / (2^m χ(1)))^{1/d}
            let ln_ratio = exact::ln_biguint(&norm.sum) - m as f64 * std::f64::consts::LN_2 - ln_dim;
            let c = (n as f64 / d as f64) * (ln_ratio / d as f64).exp();
            if c > fitted_c {
                fitted_c = c;
                witness_m = m;
            }
        }
        levels.push(GlobalLevel {
            m,
            sum_c: norm.sum.to_string(),
            sum_c_sq: norm.squared.to_string(),
            bound: bound.to_string(),
            holds,
            brute_max,
            brute_pairs,
            brute_holds,
        });
    }
    let pass = levels.iter().all(|l| l.holds && l.brute_holds != Some(false));
    Ok(GlobalnessCertificate {
        lambda: lambda.clone(),
        level: d,
        dimension: dim.to_string(),
        tilde_dimension: tilde_dim.to_string(),
        levels,
        fitted_c,
        fitted_c_witness_m: witness_m,
        pass,
    })
}

/// Generic JSON record for single-value reports.
#[derive(Debug, Clone, Serialize)]
pub struct ValueReport {
    pub op: String,
    pub inputs: serde_json::Value,
    pub exact: Option<ExactJson>,
    pub float: f64,
    pub witness: serde_json::Value,
}
