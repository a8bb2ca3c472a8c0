//! Independent oracles shared by the integration and acceptance tests.
//! Nothing here calls the Murnaghan–Nakayama engine.
#![allow(dead_code)]

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use symh_core::exact::{binomial, factorial};
use symh_core::partitions::partitions_of;
use symh_core::perm::all_permutations;
use symh_core::{ClassFunction, ClassSpace, CycleType, Group, Partition};

/// Number of ways to place the cycles of `ct` into rows of lengths `lambda`,
/// i.e. the fixed points of `ct` on row-tabloids of shape `lambda`.
pub fn young_permutation_character(lambda: &Partition, ct: &CycleType) -> BigInt {
    fn go(cycles: &[usize], room: &mut Vec<usize>, memo: &mut HashMap<(usize, Vec<usize>), BigInt>) -> BigInt {
        let Some((&c, rest)) = cycles.split_first() else {
            return BigInt::one();
        };
        let key = (cycles.len(), room.clone());
        if let Some(v) = memo.get(&key) {
            return v.clone();
        }
        let mut total = BigInt::zero();
        for i in 0..room.len() {
            if room[i] >= c {
                room[i] -= c;
                total += go(rest, room, memo);
                room[i] += c;
            }
        }
        memo.insert(key, total.clone());
        total
    }
    go(ct.partition().parts(), &mut lambda.parts().to_vec(), &mut HashMap::new())
}

fn inner(space: &ClassSpace, a: &[BigRational], b: &[BigRational]) -> BigRational {
    let total: BigRational = space
        .sizes()
        .iter()
        .zip(a.iter().zip(b))
        .map(|(s, (x, y))| BigRational::from_integer(BigInt::from(s.clone())) * x * y)
        .sum();
    total / BigRational::from_integer(BigInt::from(space.order()))
}

/// Irreducible characters of `S_n` by Gram–Schmidt on Young permutation
/// characters, taken in decreasing lexicographic order so every `χ_μ`
/// appearing in `π_λ - χ_λ` is already known.
pub fn gram_schmidt_characters(n: usize) -> Vec<(Partition, Vec<BigInt>)> {
    let space = ClassSpace::get(Group::Symmetric, n).unwrap();
    let mut lambdas: Vec<Partition> = partitions_of(n).collect();
    lambdas.sort_by(|a, b| b.parts().cmp(a.parts()));
    let mut found: Vec<(Partition, Vec<BigRational>)> = Vec::new();
    for lambda in lambdas {
        let mut v: Vec<BigRational> = space
            .types()
            .iter()
            .map(|t| BigRational::from_integer(young_permutation_character(&lambda, t)))
            .collect();
        for (_, chi) in &found {
            let c = inner(&space, &v, chi);
            for (x, y) in v.iter_mut().zip(chi) {
                *x -= &c * y;
            }
        }
        assert!(inner(&space, &v, &v).is_one(), "residual of {lambda} is not irreducible");
        found.push((lambda, v));
    }
    found
        .into_iter()
        .map(|(l, v)| {
            let ints = v.into_iter().map(|x| {
                assert!(x.is_integer());
                x.to_integer()
            });
            (l, ints.collect())
        })
        .collect()
}

/// `χ_{(n-1,1)} = fix - 1`.
pub fn standard_character(ct: &CycleType) -> BigInt {
    BigInt::from(ct.fixed_points()) - 1
}

fn derangements(n: usize) -> BigUint {
    let (mut a, mut b) = (BigUint::one(), BigUint::zero());
    if n == 0 {
        return a;
    }
    for k in 2..=n {
        let next = (k - 1) * (&a + &b);
        a = b;
        b = next;
    }
    b
}

/// `E[(fix - 1)^q]` over `S_n` from the rencontres numbers
/// `#{σ : fix(σ) = k} = C(n, k) · !(n - k)`.
pub fn rencontres_moment(n: usize, q: u32) -> BigRational {
    let total: BigInt = (0..=n)
        .map(|k| {
            let count = BigInt::from(binomial(n, k) * derangements(n - k));
            count * num_traits::pow(BigInt::from(k as i64 - 1), q as usize)
        })
        .sum();
    BigRational::new(total, BigInt::from(factorial(n)))
}

/// A seeded random walk: nonnegative integer weights on the classes,
/// normalized to `‖f‖₁ = 1`.
pub fn random_walk(group: Group, n: usize, rng: &mut ChaCha8Rng) -> ClassFunction {
    let space = ClassSpace::get(group, n).unwrap();
    loop {
        let weights: Vec<BigRational> = (0..space.len())
            .map(|_| {
                let w: i64 = if rng.gen_bool(0.3) { 0 } else { rng.gen_range(1..=9) };
                BigRational::from_integer(BigInt::from(w))
            })
            .collect();
        if weights.iter().all(Zero::is_zero) {
            continue;
        }
        let f = ClassFunction::from_vec(space.clone(), weights).unwrap();
        let l1 = f.l1_norm();
        return f.scale(&l1.recip());
    }
}

/// Class triple counts `#{(σ, τ) : σ ∈ C_i, τ ∈ C_j, στ ∈ C_k}`, found by
/// enumerating every pair of group elements.
pub struct PairCounts {
    group: Group,
    n: usize,
    order: u64,
    counts: Vec<Vec<Vec<u64>>>,
}

impl PairCounts {
    pub fn new(group: Group, n: usize) -> Self {
        let space = ClassSpace::get(group, n).unwrap();
        let perms: Vec<_> = all_permutations(n)
            .into_iter()
            .filter(|p| group == Group::Symmetric || p.is_even())
            .collect();
        let idx: Vec<usize> = perms.iter().map(|p| space.index_of(&p.cycle_type()).unwrap()).collect();
        let k = space.len();
        let mut counts = vec![vec![vec![0u64; k]; k]; k];
        for (a, p) in perms.iter().enumerate() {
            for (b, q) in perms.iter().enumerate() {
                let c = space.index_of(&p.compose(q).cycle_type()).unwrap();
                counts[idx[a]][idx[b]][c] += 1;
            }
        }
        PairCounts { group, n, order: perms.len() as u64, counts }
    }

    /// `E_{σ,τ}[f(σ) g(τ) h(στ)]`.
    pub fn triple_expectation(&self, f: &ClassFunction, g: &ClassFunction, h: &ClassFunction) -> BigRational {
        for x in [f, g, h] {
            assert_eq!((x.group(), x.n()), (self.group, self.n));
        }
        let mut total = BigRational::zero();
        for (i, fi) in f.values().iter().enumerate() {
            for (j, gj) in g.values().iter().enumerate() {
                for (k, hk) in h.values().iter().enumerate() {
                    let c = self.counts[i][j][k];
                    if c > 0 {
                        total += fi * gj * hk * BigRational::from_integer(BigInt::from(c));
                    }
                }
            }
        }
        let m = BigInt::from(self.order);
        total / BigRational::from_integer(&m * &m)
    }
}
