//! Bound formulas, exact verifiers for the constant-free statements, and
//! constant-fitting sweeps for the asymptotic ones.
//!
//! Every sweep produces a [`BoundReport`]. Hard reports count failures of
//! statements that must hold exactly; soft reports only carry fitted
//! constants, since an existential constant cannot be refuted at small `n`.

use std::collections::BTreeMap;

use num_rational::BigRational;
use serde::Serialize;
use serde_json::Value;

use crate::exact::ExactJson;

pub mod fits;
pub mod formulas;
pub mod hard;
pub mod harness;

pub use fits::{
    fit_main_bound, fourier_coeff_bound_check, kronecker_bounds_check, ratio_bound_check,
    ratio_lower_construction, MainFitConfig,
};
pub use formulas::main_bound_rhs;
pub use hard::{
    branching_check, dim_bounds_check, dimension_growth_check, mn_long_check, no_short_cycles_check,
    no_short_cycles_prob, no_short_cycles_table,
};
pub use harness::{verify, Theorem};

/// Failures kept verbatim in a report; the rest are only counted.
const MAX_RECORDED_FAILURES: usize = 32;

/// Direction of a fitted constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Extremum {
    /// Smallest feasible upper-bound constant `C`: the maximum over instances.
    Min,
    /// Largest feasible lower-bound constant `c`: the minimum over instances.
    Max,
}

/// Running extremum with a witness. Ties go to the smaller sweep key, so the
/// merge is associative and commutative and sweeps stay deterministic.
#[derive(Debug, Clone)]
pub struct Fit {
    id: String,
    kind: Extremum,
    best: Option<Candidate>,
}

#[derive(Debug, Clone)]
struct Candidate {
    value: f64,
    key: u64,
    exact: Option<BigRational>,
    witness: Value,
}

impl Fit {
    pub fn new(id: impl Into<String>, kind: Extremum) -> Self {
        Fit { id: id.into(), kind, best: None }
    }

    fn beats(&self, value: f64, key: u64) -> bool {
        match &self.best {
            None => true,
            Some(b) => {
                let better = match self.kind {
                    Extremum::Min => value > b.value,
                    Extremum::Max => value < b.value,
                };
                better || (value == b.value && key < b.key)
            }
        }
    }

    /// Offers the per-instance constant `value`; `witness` is built lazily.
    pub fn offer(&mut self, value: f64, key: u64, witness: impl FnOnce() -> Value) {
        if value.is_finite() && self.beats(value, key) {
            self.best = Some(Candidate { value, key, exact: None, witness: witness() });
        }
    }

    /// Same as [`Fit::offer`] for constants known exactly.
    pub fn offer_exact(&mut self, value: BigRational, key: u64, witness: impl FnOnce() -> Value) {
        let v = crate::exact::rational_to_f64(&value);
        let better = match &self.best {
            None => true,
            Some(b) => match (&b.exact, self.kind) {
                (Some(e), Extremum::Min) => value > *e || (value == *e && key < b.key),
                (Some(e), Extremum::Max) => value < *e || (value == *e && key < b.key),
                (None, _) => self.beats(v, key),
            },
        };
        if better {
            self.best = Some(Candidate { value: v, key, exact: Some(value), witness: witness() });
        }
    }

    pub fn merge(mut self, other: Fit) -> Fit {
        if let Some(c) = other.best {
            match c.exact.clone() {
                Some(e) if self.best.as_ref().is_some_and(|b| b.exact.is_some()) => {
                    self.offer_exact(e, c.key, || c.witness)
                }
                _ => {
                    if self.beats(c.value, c.key) {
                        self.best = Some(c);
                    }
                }
            }
        }
        self
    }

    pub fn value(&self) -> Option<f64> {
        self.best.as_ref().map(|b| b.value)
    }

    pub fn finish(self) -> FittedConstant {
        let (value, exact, witness) = match self.best {
            Some(b) => (Some(b.value), b.exact.as_ref().map(ExactJson::from), b.witness),
            None => (None, None, Value::Null),
        };
        FittedConstant { id: self.id, kind: self.kind, value, exact, witness }
    }
}

/// An extremal constant of one sweep. `value` is `None` when no swept
/// instance constrained it.
#[derive(Debug, Clone, Serialize)]
pub struct FittedConstant {
    pub id: String,
    pub kind: Extremum,
    pub value: Option<f64>,
    pub exact: Option<ExactJson>,
    pub witness: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct Failure {
    pub instance: Value,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub theorem: String,
    /// Whether the statement is constant-free, so failures are defects.
    pub hard: bool,
    pub ranges: BTreeMap<String, Value>,
    pub instances: u64,
    pub failure_count: u64,
    pub failures: Vec<Failure>,
    pub constants: Vec<FittedConstant>,
    pub notes: Vec<String>,
}

impl BoundReport {
    pub fn new(theorem: impl Into<String>, hard: bool) -> Self {
        BoundReport {
            theorem: theorem.into(),
            hard,
            ranges: BTreeMap::new(),
            instances: 0,
            failure_count: 0,
            failures: Vec::new(),
            constants: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn range(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.ranges.insert(key.to_string(), serde_json::to_value(value).unwrap_or(Value::Null));
        self
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    /// Records one checked instance.
    pub fn check(&mut self, ok: bool, instance: impl FnOnce() -> Value, detail: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok {
            self.fail(instance(), detail());
        }
    }

    pub fn fail(&mut self, instance: Value, detail: String) {
        self.failure_count += 1;
        if self.failures.len() < MAX_RECORDED_FAILURES {
            self.failures.push(Failure { instance, detail });
        }
    }

    pub fn push_constant(&mut self, fit: Fit) {
        self.constants.push(fit.finish());
    }

    pub fn constant(&self, id: &str) -> Option<&FittedConstant> {
        self.constants.iter().find(|c| c.id == id)
    }

    /// True when no hard instance failed.
    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }

    /// Folds a sub-sweep into this report.
    pub fn absorb(&mut self, other: BoundReport) {
        self.instances += other.instances;
        self.failure_count += other.failure_count;
        for f in other.failures {
            if self.failures.len() < MAX_RECORDED_FAILURES {
                self.failures.push(f);
            }
        }
        for (k, v) in other.ranges {
            self.ranges.entry(k).or_insert(v);
        }
        self.constants.extend(other.constants);
        self.notes.extend(other.notes);
    }
}
