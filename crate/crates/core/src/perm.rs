//! Small explicit permutations, used by brute-force oracles.

use crate::classes::CycleType;

/// A permutation of `0..n` in one-line notation: `i ↦ self.0[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Perm(pub Vec<usize>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n).collect())
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&j| self.0[j]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.n()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Perm(inv)
    }

    pub fn cycle_lengths(&self) -> Vec<usize> {
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for start in 0..self.n() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.0[i];
                len += 1;
            }
            out.push(len);
        }
        out
    }

    pub fn cycle_type(&self) -> CycleType {
        CycleType::from_lengths(self.cycle_lengths())
    }

    pub fn is_even(&self) -> bool {
        self.cycle_lengths().iter().map(|l| l - 1).sum::<usize>() % 2 == 0
    }

    pub fn fixed_points(&self) -> usize {
        self.0.iter().enumerate().filter(|(i, &j)| *i == j).count()
    }

    /// A permutation with the given cycle type, cycles laid out consecutively.
    pub fn with_cycle_type(ct: &CycleType) -> Perm {
        let mut img = vec![0; ct.n()];
        let mut start = 0;
        for &len in ct.partition().parts() {
            for k in 0..len {
                img[start + k] = start + (k + 1) % len;
            }
            start += len;
        }
        Perm(img)
    }
}

/// Every permutation of `0..n`, in lexicographic order.
pub fn all_permutations(n: usize) -> Vec<Perm> {
    let mut cur: Vec<usize> = (0..n).collect();
    let mut out = vec![Perm(cur.clone())];
    loop {
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(Perm(cur.clone()));
    }
}
