//! Exact character values of `S_n` by the Murnaghan–Nakayama rule, and
//! restriction multiplicities by Young's branching rule.

use std::collections::HashMap;
use std::fs;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, OnceLock};

use dashmap::DashMap;
use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::classes::{ClassSpace, CycleType, Group};
use crate::error::{Error, Result};
use crate::partitions::{partitions_of, Partition};

/// Default bound on memo entries before the cache is reset.
pub const DEFAULT_MEMO_CAP: usize = 1 << 24;
/// Default largest `n` for which full character tables are built.
pub const DEFAULT_TABLE_CAP: usize = 20;
/// Above this size values may overflow `i128`, so the memo is bypassed.
const FAST_PATH_MAX_N: usize = 50;

const CACHE_MAGIC: &[u8; 6] = b"SYMHMN";
const CACHE_VERSION: u32 = 1;
const CACHE_FILE: &str = "mn-memo-v1.bin";

/// All rim hooks of length `len`: the remaining shape and the hook's height.
pub fn rim_hooks(shape: &Partition, len: usize) -> Vec<(Partition, usize)> {
    let parts: Vec<usize> = shape.parts().to_vec();
    rim_hooks_raw(&parts, len)
        .into_iter()
        .map(|(p, h)| (Partition::new_unchecked(p), h))
        .collect()
}

/// Removes an `len`-hook by moving one bead of the beta set `len` places down.
fn rim_hooks_raw<T>(shape: &[T], len: usize) -> Vec<(Vec<T>, usize)>
where
    T: Copy + Into<usize> + TryFrom<usize>,
{
    let rows = shape.len();
    let beta: Vec<usize> = shape.iter().enumerate().map(|(i, &p)| p.into() + rows - 1 - i).collect();
    let mut out = Vec::new();
    for (i, &b) in beta.iter().enumerate() {
        if b < len {
            continue;
        }
        let target = b - len;
        if beta.contains(&target) {
            continue;
        }
        // beads strictly between target and b sit at indices i+1..pos
        let height = beta[i + 1..].iter().take_while(|&&x| x > target).count();
        let mut next = beta.clone();
        next.remove(i);
        next.insert(i + height, target);
        let parts: Vec<T> = next
            .iter()
            .enumerate()
            .map(|(j, &x)| x - (rows - 1 - j))
            .filter(|&p| p > 0)
            .map(|p| T::try_from(p).ok().expect("part fits"))
            .collect();
        out.push((parts, height));
    }
    out
}

fn sign_of_cycles(cycles: &[u8]) -> i128 {
    let moved: usize = cycles.iter().map(|&c| c as usize - 1).sum();
    if moved % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Memoized Murnaghan–Nakayama evaluator, safe to share between threads.
///
/// Memo keys are the shape followed by a `0` separator and the remaining
/// cycle lengths in decreasing order, so any two orderings of the same
/// remainder share an entry. Top-level calls are not stored.
pub struct CharacterEvaluator {
    memo: DashMap<Box<[u8]>, i128>,
    memo_cap: usize,
    table_cap: usize,
    tables: Mutex<HashMap<usize, Arc<CharacterTable>>>,
}

impl Default for CharacterEvaluator {
    fn default() -> Self {
        Self::with_caps(DEFAULT_MEMO_CAP, DEFAULT_TABLE_CAP)
    }
}

impl std::fmt::Debug for CharacterEvaluator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CharacterEvaluator")
            .field("memo_entries", &self.memo.len())
            .field("memo_cap", &self.memo_cap)
            .field("table_cap", &self.table_cap)
            .finish()
    }
}

impl CharacterEvaluator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_caps(memo_cap: usize, table_cap: usize) -> Self {
        CharacterEvaluator {
            memo: DashMap::new(),
            memo_cap: memo_cap.max(1),
            table_cap,
            tables: Mutex::new(HashMap::new()),
        }
    }

    /// Process-wide evaluator used by the free functions in this crate.
    pub fn global() -> &'static CharacterEvaluator {
        static GLOBAL: OnceLock<CharacterEvaluator> = OnceLock::new();
        GLOBAL.get_or_init(CharacterEvaluator::default)
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    pub fn table_cap(&self) -> usize {
        self.table_cap
    }

    pub fn clear(&self) {
        self.memo.clear();
    }

    /// `χ_λ` at the class of `ct`.
    pub fn mn_value(&self, lambda: &Partition, ct: &CycleType) -> Result<BigInt> {
        let n = lambda.n();
        if n != ct.n() {
            return Err(Error::SizeMismatch { left: n, right: ct.n() });
        }
        if n <= FAST_PATH_MAX_N {
            let shape: Vec<u8> = lambda.parts().iter().map(|&p| p as u8).collect();
            let cycles: Vec<u8> = ct.partition().parts().iter().map(|&c| c as u8).collect();
            if let Some(v) = self.eval(&shape, &cycles, 0) {
                return Ok(BigInt::from(v));
            }
        }
        Ok(eval_big(lambda.parts(), ct.partition().parts(), true))
    }

    /// `χ_λ(ct)` as a machine integer; only valid when `n <= 50`.
    pub(crate) fn mn_value_i128(&self, lambda: &Partition, ct: &CycleType) -> Option<i128> {
        if lambda.n() != ct.n() || lambda.n() > FAST_PATH_MAX_N {
            return None;
        }
        let shape: Vec<u8> = lambda.parts().iter().map(|&p| p as u8).collect();
        let cycles: Vec<u8> = ct.partition().parts().iter().map(|&c| c as u8).collect();
        self.eval(&shape, &cycles, 0)
    }

    fn eval(&self, shape: &[u8], cycles: &[u8], depth: usize) -> Option<i128> {
        if cycles.is_empty() {
            return Some(1);
        }
        if shape.len() == 1 {
            return Some(1);
        }
        if shape[0] == 1 {
            return Some(sign_of_cycles(cycles));
        }
        let key = (depth > 0).then(|| {
            let mut k = Vec::with_capacity(shape.len() + 1 + cycles.len());
            k.extend_from_slice(shape);
            k.push(0);
            k.extend_from_slice(cycles);
            k.into_boxed_slice()
        });
        if let Some(k) = &key {
            if let Some(v) = self.memo.get(k) {
                return Some(*v);
            }
        }
        let value = if cycles[0] == 1 {
            let parts = shape.iter().map(|&p| p as usize).collect();
            Partition::new_unchecked(parts).dimension().to_i128()?
        } else {
            let mut total: i128 = 0;
            for (child, height) in rim_hooks_raw(shape, cycles[0] as usize) {
                let v = self.eval(&child, &cycles[1..], depth + 1)?;
                total = if height % 2 == 0 { total.checked_add(v)? } else { total.checked_sub(v)? };
            }
            total
        };
        if let Some(k) = key {
            if self.memo.len() >= self.memo_cap {
                self.memo.clear();
            }
            self.memo.insert(k, value);
        }
        Some(value)
    }

    /// Full table for `S_n`, cached per `n`.
    pub fn character_table(&self, n: usize) -> Result<Arc<CharacterTable>> {
        if n > self.table_cap {
            return Err(Error::CapExceeded { what: "character table n", value: n, cap: self.table_cap });
        }
        if let Some(t) = self.tables.lock().unwrap().get(&n) {
            return Ok(t.clone());
        }
        let table = Arc::new(CharacterTable::build(self, n)?);
        let mut guard = self.tables.lock().unwrap();
        Ok(guard.entry(n).or_insert(table).clone())
    }

    /// Writes the memo to `dir` in the versioned binary format.
    pub fn save_cache(&self, dir: &Path) -> Result<PathBuf> {
        fs::create_dir_all(dir)?;
        let path = dir.join(CACHE_FILE);
        let tmp = dir.join(format!("{CACHE_FILE}.tmp"));
        let mut entries: Vec<(Box<[u8]>, i128)> =
            self.memo.iter().map(|e| (e.key().clone(), *e.value())).collect();
        entries.sort();
        {
            let mut w = BufWriter::new(fs::File::create(&tmp)?);
            w.write_all(CACHE_MAGIC)?;
            w.write_all(&CACHE_VERSION.to_le_bytes())?;
            w.write_all(&(entries.len() as u64).to_le_bytes())?;
            for (k, v) in &entries {
                w.write_all(&(k.len() as u16).to_le_bytes())?;
                w.write_all(k)?;
                w.write_all(&v.to_le_bytes())?;
            }
            w.flush()?;
        }
        fs::rename(&tmp, &path)?;
        Ok(path)
    }

    /// Loads a memo written by [`save_cache`](Self::save_cache). A missing
    /// file, a foreign file, or a stale version stamp loads nothing.
    pub fn load_cache(&self, dir: &Path) -> Result<usize> {
        let path = dir.join(CACHE_FILE);
        let Ok(file) = fs::File::open(&path) else {
            return Ok(0);
        };
        let mut r = BufReader::new(file);
        let mut magic = [0u8; 6];
        let mut word = [0u8; 4];
        if r.read_exact(&mut magic).is_err() || &magic != CACHE_MAGIC {
            return Ok(0);
        }
        r.read_exact(&mut word)?;
        if u32::from_le_bytes(word) != CACHE_VERSION {
            return Ok(0);
        }
        let mut count = [0u8; 8];
        r.read_exact(&mut count)?;
        let count = u64::from_le_bytes(count) as usize;
        let mut loaded = 0;
        for _ in 0..count {
            let mut len = [0u8; 2];
            r.read_exact(&mut len)?;
            let mut key = vec![0u8; u16::from_le_bytes(len) as usize];
            r.read_exact(&mut key)?;
            let mut val = [0u8; 16];
            r.read_exact(&mut val)?;
            if self.memo.len() >= self.memo_cap {
                break;
            }
            self.memo.insert(key.into_boxed_slice(), i128::from_le_bytes(val));
            loaded += 1;
        }
        Ok(loaded)
    }
}

/// Plain big-integer recursion. With `shortcuts` off this is the reference
/// path: nothing but rim-hook removal down to the empty shape.
fn eval_big(shape: &[usize], cycles: &[usize], shortcuts: bool) -> BigInt {
    if cycles.is_empty() {
        return BigInt::from(1);
    }
    if shortcuts {
        if shape.len() == 1 {
            return BigInt::from(1);
        }
        if shape[0] == 1 {
            let moved: usize = cycles.iter().map(|c| c - 1).sum();
            return BigInt::from(if moved % 2 == 0 { 1 } else { -1 });
        }
        if cycles[0] == 1 {
            return BigInt::from(Partition::new_unchecked(shape.to_vec()).dimension());
        }
    }
    let mut total = BigInt::zero();
    for (child, height) in rim_hooks_raw(shape, cycles[0]) {
        let v = eval_big(&child, &cycles[1..], shortcuts);
        if height % 2 == 0 {
            total += v;
        } else {
            total -= v;
        }
    }
    total
}

/// `χ_λ(ct)` with the process-wide evaluator.
pub fn mn_value(lambda: &Partition, ct: &CycleType) -> Result<BigInt> {
    CharacterEvaluator::global().mn_value(lambda, ct)
}

/// Reference recursion with no memo and no shortcuts.
pub fn mn_value_unmemoized(lambda: &Partition, ct: &CycleType) -> Result<BigInt> {
    if lambda.n() != ct.n() {
        return Err(Error::SizeMismatch { left: lambda.n(), right: ct.n() });
    }
    Ok(eval_big(lambda.parts(), ct.partition().parts(), false))
}

/// The shape `μ = (ℓ - d, λ2, λ3, ...)` with `d = n - λ1`.
pub fn long_cycle_shape(lambda: &Partition, ell: usize) -> Result<Partition> {
    let n = lambda.n();
    if lambda.is_empty() {
        return Err(Error::EmptyPartition);
    }
    let d = n - lambda.first();
    if ell > n || ell < d + lambda.part(1) {
        return Err(Error::Precondition(format!(
            "need d + λ2 <= ℓ <= n, got ℓ={ell}, d={d}, λ2={} for {lambda}",
            lambda.part(1)
        )));
    }
    let mut parts = lambda.parts().to_vec();
    parts[0] = ell - d;
    Ok(Partition::from_unsorted(parts))
}

/// Value of `χ_λ` on any class with `ℓ` fixed points whose other cycles are
/// all longer than `d = n - λ1`: the dimension of [`long_cycle_shape`].
pub fn mn_long_cycle_value(lambda: &Partition, ell: usize) -> Result<BigUint> {
    Ok(long_cycle_shape(lambda, ell)?.dimension())
}

/// Classes with exactly `ell` fixed points and every other cycle longer
/// than `d`, in canonical order.
pub fn long_cycle_witnesses(n: usize, d: usize, ell: usize) -> Vec<CycleType> {
    if ell > n {
        return Vec::new();
    }
    partitions_of(n - ell)
        .filter(|p| p.parts().iter().all(|&c| c > d.max(1)))
        .map(|p| {
            let mut parts = p.parts().to_vec();
            parts.extend(std::iter::repeat(1).take(ell));
            CycleType::new(Partition::new_unchecked(parts))
        })
        .collect()
}

/// `χ_λ^{R}` on `A_n`: the restriction, irreducible when `λ ≠ λ'`.
pub fn an_character_value(lambda: &Partition, ct: &CycleType) -> Result<BigInt> {
    if lambda.is_self_conjugate() {
        return Err(Error::SelfConjugate(lambda.to_string()));
    }
    if !ct.is_even() {
        return Err(Error::OddClass(ct.to_string()));
    }
    mn_value(lambda, ct)
}

/// Multiplicities `c_μ` of `χ_μ` in the restriction of `χ_λ` to `S_{n-m}`,
/// in canonical order of `μ`.
pub fn branching_multiplicities(lambda: &Partition, m: usize) -> Result<Vec<(Partition, BigUint)>> {
    if m > lambda.n() {
        return Err(Error::Precondition(format!("m = {m} exceeds n = {}", lambda.n())));
    }
    Ok(branching_chain(lambda, m).pop().unwrap())
}

/// Branching multiplicities for every `m` in `0..=m_max` in one pass.
pub fn branching_chain(lambda: &Partition, m_max: usize) -> Vec<Vec<(Partition, BigUint)>> {
    let mut level: HashMap<Partition, BigUint> = HashMap::from([(lambda.clone(), BigUint::from(1u8))]);
    let mut out = Vec::with_capacity(m_max + 1);
    let sorted = |map: &HashMap<Partition, BigUint>| {
        let mut v: Vec<_> = map.iter().map(|(p, c)| (p.clone(), c.clone())).collect();
        v.sort_by(|a, b| a.0.canonical_cmp(&b.0));
        v
    };
    out.push(sorted(&level));
    for _ in 0..m_max.min(lambda.n()) {
        let mut next: HashMap<Partition, BigUint> = HashMap::new();
        for (shape, count) in &level {
            for row in shape.removable_rows() {
                *next.entry(shape.remove_corner(row)).or_default() += count;
            }
        }
        level = next;
        out.push(sorted(&level));
    }
    out
}

/// Character table of `S_n`: rows are partitions and columns cycle types,
/// both in canonical order.
#[derive(Debug)]
pub struct CharacterTable {
    n: usize,
    partitions: Vec<Partition>,
    space: Arc<ClassSpace>,
    values: Vec<Vec<BigInt>>,
    row_index: HashMap<Partition, usize>,
}

impl CharacterTable {
    fn build(eval: &CharacterEvaluator, n: usize) -> Result<Self> {
        let partitions: Vec<Partition> = partitions_of(n).collect();
        let space = ClassSpace::get(Group::Symmetric, n)?;
        let values = partitions
            .par_iter()
            .map(|lam| space.types().iter().map(|ct| eval.mn_value(lam, ct)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let row_index = partitions.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        Ok(CharacterTable { n, partitions, space, values, row_index })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    pub fn classes(&self) -> &Arc<ClassSpace> {
        &self.space
    }

    pub fn row_index(&self, lambda: &Partition) -> Option<usize> {
        self.row_index.get(lambda).copied()
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.values[i]
    }

    pub fn row_of(&self, lambda: &Partition) -> Option<&[BigInt]> {
        self.row_index(lambda).map(|i| self.row(i))
    }

    pub fn value(&self, row: usize, col: usize) -> &BigInt {
        &self.values[row][col]
    }

    /// First pair `(λ, μ)` violating `Σ |C| χ_λ χ_μ = n! δ`, if any.
    pub fn row_orthogonality_defect(&self) -> Option<(usize, usize)> {
        let order = BigInt::from(crate::exact::factorial(self.n));
        let sizes: Vec<BigInt> = self.space.sizes().iter().cloned().map(BigInt::from).collect();
        let k = self.partitions.len();
        (0..k)
            .into_par_iter()
            .flat_map_iter(|a| (a..k).map(move |b| (a, b)))
            .find_first(|&(a, b)| {
                let s: BigInt = (0..sizes.len()).map(|c| &sizes[c] * &self.values[a][c] * &self.values[b][c]).sum();
                s != if a == b { order.clone() } else { BigInt::zero() }
            })
    }

    /// First pair of classes violating `Σ_λ χ_λ(a) χ_λ(b) = z_a δ`, if any.
    pub fn column_orthogonality_defect(&self) -> Option<(usize, usize)> {
        let k = self.space.len();
        let z: Vec<BigInt> = self.space.types().iter().map(|t| BigInt::from(t.centralizer_order())).collect();
        (0..k)
            .into_par_iter()
            .flat_map_iter(|a| (a..k).map(move |b| (a, b)))
            .find_first(|&(a, b)| {
                let s: BigInt = self.values.iter().map(|row| &row[a] * &row[b]).sum();
                s != if a == b { z[a].clone() } else { BigInt::zero() }
            })
    }

    /// Header row followed by one row per partition, as text cells.
    pub fn to_cells(&self) -> Vec<Vec<String>> {
        let mut header = vec!["lambda".to_string()];
        header.extend(self.space.types().iter().map(|t| t.to_string()));
        let mut out = vec![header];
        for (p, row) in self.partitions.iter().zip(&self.values) {
            let mut cells = vec![p.to_string()];
            cells.extend(row.iter().map(|v| v.to_string()));
            out.push(cells);
        }
        out
    }

    pub fn to_json(&self) -> CharacterTableJson {
        CharacterTableJson {
            n: self.n,
            partitions: self.partitions.iter().map(|p| p.to_string()).collect(),
            classes: self.space.types().iter().map(|t| t.to_string()).collect(),
            values: self.values.iter().map(|r| r.iter().map(|v| v.to_string()).collect()).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CharacterTableJson {
    pub n: usize,
    pub partitions: Vec<String>,
    pub classes: Vec<String>,
    pub values: Vec<Vec<String>>,
}
