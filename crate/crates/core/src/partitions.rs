//! Integer partitions and Young-diagram combinatorics.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::factorial;

/// A weakly decreasing sequence of positive integers.
///
/// The derived ordering is lexicographic on the parts. Reports list partitions
/// in *canonical* order, which is the reverse of that: `(n)` comes first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition {
    parts: Vec<usize>,
    n: usize,
}

impl Partition {
    /// Validates that `parts` is weakly decreasing and positive.
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.iter().any(|&p| p == 0) {
            return Err(Error::InvalidPartition(format!("{parts:?} has a zero part")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!("{parts:?} is not weakly decreasing")));
        }
        Ok(Self::new_unchecked(parts))
    }

    /// Sorts the parts and drops zeros.
    pub fn from_unsorted(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self::new_unchecked(parts)
    }

    pub(crate) fn new_unchecked(parts: Vec<usize>) -> Self {
        let n = parts.iter().sum();
        Partition { parts, n }
    }

    pub fn empty() -> Self {
        Partition::default()
    }

    /// The one-row partition `(n)`.
    pub fn row(n: usize) -> Self {
        if n == 0 {
            Self::empty()
        } else {
            Self::new_unchecked(vec![n])
        }
    }

    /// The one-column partition `(1^n)`.
    pub fn column(n: usize) -> Self {
        Self::new_unchecked(vec![1; n])
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of rows.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn first(&self) -> usize {
        self.parts.first().copied().unwrap_or(0)
    }

    /// Part `i` (0-based), zero past the end.
    pub fn part(&self, i: usize) -> usize {
        self.parts.get(i).copied().unwrap_or(0)
    }

    pub fn conjugate(&self) -> Partition {
        let cols = self.first();
        let mut out = Vec::with_capacity(cols);
        for j in 0..cols {
            out.push(self.parts.iter().take_while(|&&p| p > j).count());
        }
        Self::new_unchecked(out)
    }

    pub fn is_self_conjugate(&self) -> bool {
        *self == self.conjugate()
    }

    /// `min(n - λ1, n - λ'1)`.
    pub fn level(&self) -> Result<usize> {
        if self.is_empty() {
            return Err(Error::EmptyPartition);
        }
        Ok((self.n - self.first()).min(self.n - self.len()))
    }

    /// Whether the level is attained by the first row (rather than only by
    /// the first column).
    pub fn level_from_row(&self) -> Result<bool> {
        let d = self.level()?;
        Ok(self.first() == self.n - d)
    }

    /// The partition of the level left after deleting the long first row, or
    /// the long first column when only the column attains the level.
    pub fn tilde(&self) -> Result<Partition> {
        if self.level_from_row()? {
            Ok(Self::new_unchecked(self.parts[1..].to_vec()))
        } else {
            let parts = self.parts.iter().map(|&p| p - 1).filter(|&p| p > 0).collect();
            Ok(Self::new_unchecked(parts))
        }
    }

    /// Hook length of cell `(i, j)`, 0-based.
    pub fn hook(&self, i: usize, j: usize, conj: &Partition) -> usize {
        self.parts[i] - j + conj.parts[j] - i - 1
    }

    /// Number of standard Young tableaux, by the hook-length formula.
    pub fn dimension(&self) -> BigUint {
        let conj = self.conjugate();
        let mut hooks = BigUint::one();
        let mut chunk: u64 = 1;
        for (i, &row) in self.parts.iter().enumerate() {
            for j in 0..row {
                let h = self.hook(i, j, &conj) as u64;
                match chunk.checked_mul(h) {
                    Some(c) => chunk = c,
                    None => {
                        hooks *= chunk;
                        chunk = h;
                    }
                }
            }
        }
        hooks *= chunk;
        factorial(self.n) / hooks
    }

    /// Row indices whose last cell is a removable corner.
    pub fn removable_rows(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&i| self.part(i) > self.part(i + 1))
    }

    /// The partition obtained by removing the last cell of row `row`.
    pub fn remove_corner(&self, row: usize) -> Partition {
        let mut parts = self.parts.clone();
        parts[row] -= 1;
        if parts[row] == 0 {
            parts.pop();
        }
        Self::new_unchecked(parts)
    }

    /// Ordering used by all reports: reverse lexicographic.
    pub fn canonical_cmp(&self, other: &Partition) -> Ordering {
        other.parts.cmp(&self.parts)
    }

    /// Multiplicity vector `f_i` for `i = 1..=n` (index 0 unused).
    pub fn multiplicities(&self) -> Vec<usize> {
        let mut f = vec![0; self.n + 1];
        for &p in &self.parts {
            f[p] += 1;
        }
        f
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for p in &self.parts {
            if !first {
                f.write_str(",")?;
            }
            first = false;
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Self::empty());
        }
        let parts = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidPartition(format!("bad part {t:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(parts)
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Iterator over the partitions of `n` in canonical order.
#[derive(Debug, Clone)]
pub struct Partitions {
    next: Option<Vec<usize>>,
}

impl Iterator for Partitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        let current = self.next.take()?;
        self.next = successor(&current);
        Some(Partition::new_unchecked(current))
    }
}

/// Next partition in descending lexicographic order.
fn successor(parts: &[usize]) -> Option<Vec<usize>> {
    let pos = parts.iter().rposition(|&p| p > 1)?;
    let ones = parts.len() - pos - 1;
    let k = parts[pos] - 1;
    let mut out = parts[..pos].to_vec();
    out.push(k);
    let mut remaining = ones + 1;
    while remaining > 0 {
        let take = remaining.min(k);
        out.push(take);
        remaining -= take;
    }
    Some(out)
}

pub fn partitions_of(n: usize) -> Partitions {
    Partitions {
        next: Some(if n == 0 { Vec::new() } else { vec![n] }),
    }
}

/// The partition function `p(n)`, via Euler's pentagonal recurrence.
pub fn partition_count(n: usize) -> BigUint {
    let mut p = vec![BigUint::one()];
    for m in 1..=n {
        let mut plus = BigUint::default();
        let mut minus = BigUint::default();
        for k in 1.. {
            let g1 = k * (3 * k - 1) / 2;
            if g1 > m {
                break;
            }
            let sign_plus = k % 2 == 1;
            let mut add = |g: usize| {
                if g <= m {
                    if sign_plus {
                        plus += &p[m - g];
                    } else {
                        minus += &p[m - g];
                    }
                }
            };
            add(g1);
            add(k * (3 * k + 1) / 2);
        }
        p.push(plus - minus);
    }
    p.swap_remove(n)
}

/// All `λ ⊢ n` with `level(λ) <= d`, in canonical order.
///
/// Built by gluing each `μ ⊢ k`, `k <= d`, under a first row of length `n-k`
/// and adding conjugates, so it never touches the full `p(n)` enumeration.
pub fn partitions_of_level_at_most(n: usize, d: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    for k in 0..=d.min(n) {
        for mu in partitions_of(k) {
            if mu.first() > n - k {
                continue;
            }
            let mut parts = Vec::with_capacity(mu.len() + 1);
            if n > k {
                parts.push(n - k);
            }
            parts.extend_from_slice(mu.parts());
            let lam = Partition::new_unchecked(parts);
            out.push(lam.conjugate());
            out.push(lam);
        }
    }
    out.sort_by(|a, b| a.canonical_cmp(b));
    out.dedup();
    out
}

/// All `λ ⊢ n` of level exactly `d`, in canonical order.
pub fn partitions_of_level(n: usize, d: usize) -> Vec<Partition> {
    partitions_of_level_at_most(n, d)
        .into_iter()
        .filter(|p| p.level().map(|l| l == d).unwrap_or(false))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    /// Counts standard fillings directly, removing corners recursively.
    fn syt_count(lam: &Partition) -> u64 {
        if lam.is_empty() {
            return 1;
        }
        lam.removable_rows().map(|r| syt_count(&lam.remove_corner(r))).sum()
    }

    #[test]
    fn conjugates() {
        assert_eq!(p("5").conjugate(), p("1,1,1,1,1"));
        assert_eq!(p("3,1").conjugate(), p("2,1,1"));
        assert_eq!(p("2,1").conjugate(), p("2,1"));
        assert_eq!(Partition::empty().conjugate(), Partition::empty());
    }

    #[test]
    fn levels_and_tilde() {
        assert_eq!(p("7").level().unwrap(), 0);
        assert_eq!(p("6,1").level().unwrap(), 1);
        assert_eq!(p("1,1,1,1").level().unwrap(), 0);
        assert!(Partition::empty().level().is_err());
        assert_eq!(p("6,1").tilde().unwrap(), p("1"));
        assert_eq!(p("3,2,1").tilde().unwrap(), p("2,1"));
        assert_eq!(p("4").tilde().unwrap(), Partition::empty());
        assert_eq!(p("2,1,1,1").tilde().unwrap(), p("1"));
    }

    #[test]
    fn dimensions() {
        assert_eq!(p("9").dimension(), BigUint::from(1u8));
        assert_eq!(p("9,1").dimension(), BigUint::from(9u8));
        assert_eq!(p("2,1").dimension(), BigUint::from(2u8));
        for n in 0..=8 {
            for lam in partitions_of(n) {
                assert_eq!(lam.dimension(), BigUint::from(syt_count(&lam)), "{lam}");
            }
        }
    }

    #[test]
    fn enumeration_counts_and_order() {
        assert_eq!(partitions_of(0).collect::<Vec<_>>(), vec![Partition::empty()]);
        assert_eq!(partitions_of(5).count(), 7);
        assert_eq!(partitions_of(10).count(), 42);
        for n in 0..=25 {
            assert_eq!(BigUint::from(partitions_of(n).count()), partition_count(n));
        }
        let v: Vec<_> = partitions_of(12).collect();
        assert!(v.windows(2).all(|w| w[0].canonical_cmp(&w[1]) == Ordering::Less));
        assert_eq!(v.first().unwrap(), &p("12"));
        assert_eq!(v.last().unwrap(), &Partition::column(12));
    }

    #[test]
    fn low_level_enumeration_matches_filter() {
        assert_eq!(
            partitions_of_level_at_most(10, 1),
            vec![p("10"), p("9,1"), p("2,1,1,1,1,1,1,1,1"), Partition::column(10)]
        );
        for n in 1..=14 {
            for d in 0..n {
                let filtered: Vec<_> =
                    partitions_of(n).filter(|l| l.level().unwrap() <= d).collect();
                assert_eq!(partitions_of_level_at_most(n, d), filtered, "n={n} d={d}");
            }
        }
        // p(0) + p(1) + p(2) row gluings, doubled by conjugation
        assert_eq!(partitions_of_level_at_most(200, 2).len(), 2 * (1 + 1 + 2));
    }

    #[test]
    fn text_round_trip() {
        assert_eq!(p("5,3,1").to_string(), "5,3,1");
        assert_eq!("".parse::<Partition>().unwrap(), Partition::empty());
        assert!("1,3".parse::<Partition>().is_err());
        assert!("2,0".parse::<Partition>().is_err());
        assert!("a".parse::<Partition>().is_err());
        let json = serde_json::to_string(&p("4,2")).unwrap();
        assert_eq!(json, "\"4,2\"");
        assert_eq!(serde_json::from_str::<Partition>(&json).unwrap(), p("4,2"));
    }
}
