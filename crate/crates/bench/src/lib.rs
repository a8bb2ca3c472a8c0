//! Shared inputs for the criterion benchmarks.

use symh_core::{ClassFunction, CycleType, Group, Partition};

pub fn partition(s: &str) -> Partition {
    s.parse().expect("valid partition")
}

/// Normalized indicator of the cycle type `s` on `A_n`.
pub fn alternating_walk(s: &str) -> ClassFunction {
    let ct: CycleType = s.parse().expect("valid cycle type");
    ClassFunction::normalized_class_indicator(&ct, Group::Alternating).expect("even class")
}
