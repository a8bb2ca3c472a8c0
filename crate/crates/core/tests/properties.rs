mod support;

use num_bigint::BigUint;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use symh_core::characters::branching_multiplicities;
use symh_core::harmonic::{convolve, kronecker};
use symh_core::mixing::{spectral_l2_distance_sq, MixingProfile};
use symh_core::partitions::partitions_of;
use symh_core::{ClassFunction, FourierExpansion, Group, Partition};

fn group() -> impl Strategy<Value = Group> {
    prop_oneof![Just(Group::Symmetric), Just(Group::Alternating)]
}

fn walk(group: Group, n: usize, seed: u64) -> ClassFunction {
    support::random_walk(group, n, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn partition(n: usize, pick: usize) -> Partition {
    let ps: Vec<Partition> = partitions_of(n).collect();
    ps[pick % ps.len()].clone()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn parseval(g in group(), n in 2usize..=9, seed in any::<u64>()) {
        let f = walk(g, n, seed);
        prop_assert_eq!(FourierExpansion::of(&f).unwrap().parseval_sum(), f.l2_norm_sq());
    }

    #[test]
    fn convolution_commutes_and_associates(g in group(), n in 2usize..=6, s in any::<[u64; 3]>()) {
        let (a, b, c) = (walk(g, n, s[0]), walk(g, n, s[1]), walk(g, n, s[2]));
        prop_assert_eq!(convolve(&a, &b).unwrap(), convolve(&b, &a).unwrap());
        let left = convolve(&convolve(&a, &b).unwrap(), &c).unwrap();
        let right = convolve(&a, &convolve(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn distances_never_increase(g in group(), n in 3usize..=10, seed in any::<u64>()) {
        let f = walk(g, n, seed);
        let p = MixingProfile::new(&f, 6).unwrap();
        for w in p.distances_sq().windows(2) {
            prop_assert!(w[1] <= w[0]);
        }
        prop_assert_eq!(&p.distances_sq()[1], &spectral_l2_distance_sq(&f, 2).unwrap());
    }

    #[test]
    fn branching_sum_within_tilde_budget(n in 2usize..=16, pick in any::<usize>(), m in 0usize..=6) {
        let lambda = partition(n, pick);
        let m = m.min(n);
        let sum: BigUint = branching_multiplicities(&lambda, m).unwrap().into_iter().map(|(_, c)| c).sum();
        let tilde = lambda.tilde().unwrap().dimension();
        prop_assert!(sum <= (BigUint::from(1u8) << m) * tilde);
    }

    #[test]
    fn kronecker_symmetries(n in 1usize..=9, picks in any::<[usize; 3]>()) {
        let (a, b, c) = (partition(n, picks[0]), partition(n, picks[1]), partition(n, picks[2]));
        let g = kronecker(&a, &b, &c).unwrap();
        prop_assert_eq!(&g, &kronecker(&b, &c, &a).unwrap());
        prop_assert_eq!(&g, &kronecker(&a.conjugate(), &b.conjugate(), &c).unwrap());
        let dims = [a.dimension(), b.dimension(), c.dimension()];
        prop_assert!(dims.iter().all(|d| &g <= d));
    }
}
