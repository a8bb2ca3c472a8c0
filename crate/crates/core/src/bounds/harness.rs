//! Theorem selection and the sweep schedule behind `verify`.

use std::fmt;
use std::str::FromStr;

use super::fits::{self, MainFitConfig};
use super::hard;
use super::BoundReport;
use crate::error::{Error, Result};

/// Which family of statements `verify` sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Theorem {
    Dims,
    Branching,
    MnLong,
    ProbRecursion,
    MainNorm,
    Ratio,
    Fourier,
    Kronecker,
    All,
}

impl Theorem {
    pub const EACH: [Theorem; 8] = [
        Theorem::Dims,
        Theorem::Branching,
        Theorem::MnLong,
        Theorem::ProbRecursion,
        Theorem::MainNorm,
        Theorem::Ratio,
        Theorem::Fourier,
        Theorem::Kronecker,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Theorem::Dims => "dims",
            Theorem::Branching => "branching",
            Theorem::MnLong => "mn-long",
            Theorem::ProbRecursion => "prob-recursion",
            Theorem::MainNorm => "main-norm",
            Theorem::Ratio => "ratio",
            Theorem::Fourier => "fourier",
            Theorem::Kronecker => "kronecker",
            Theorem::All => "all",
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Theorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Theorem::EACH
            .into_iter()
            .chain([Theorem::All])
            .find(|t| t.id() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown theorem {s:?}")))
    }
}

/// `α` values for the character-ratio sweeps.
pub const RATIO_ALPHAS: [f64; 3] = [0.25, 0.5, 0.75];
/// Multipliers `g` in `M = g ‖f‖₂/‖f‖₁`.
pub const FOURIER_M_GRID: [f64; 3] = [1.0, 2.0, 16.0];
/// `ε` requested by the few-cycles lower construction.
pub const LOWER_EPS: f64 = 0.25;
/// Sweep behind the regression-locked norm constants.
pub const LOCKED_MAIN_FIT: (usize, usize, [u32; 2]) = (20, 3, [4, 6]);
/// Smallest `n` at which the per-`n` sweeps start.
const SWEEP_MIN_N: usize = 4;

/// Runs the sweeps for `theorem` with every size capped by `n_max`.
///
/// Each sweep clamps `n_max` to its own cap, so large values are safe.
pub fn verify(theorem: Theorem, n_max: usize) -> Result<Vec<BoundReport>> {
    if n_max < 1 {
        return Err(Error::InvalidArgument("n_max must be >= 1".into()));
    }
    if theorem == Theorem::All {
        let mut out = Vec::new();
        for t in Theorem::EACH {
            out.extend(verify(t, n_max)?);
        }
        return Ok(out);
    }
    let k = n_max;
    let reports = match theorem {
        Theorem::Dims => vec![hard::dim_bounds_check(k.min(hard::DIM_SWEEP_MAX_N))?],
        Theorem::Branching => vec![hard::branching_check(
            k.min(hard::BRANCHING_MAX_N),
            k.min(crate::harmonic::COSET_SWEEP_MAX_N),
            (k >= crate::harmonic::BRUTE_FORCE_MAX_N).then_some(crate::harmonic::BRUTE_FORCE_MAX_N),
        )?],
        Theorem::MnLong => vec![hard::mn_long_check(k.min(hard::LONG_CYCLE_MAX_N))?],
        Theorem::ProbRecursion => {
            vec![hard::no_short_cycles_check(hard::NO_SHORT_CYCLES_MAX_R, hard::NO_SHORT_CYCLES_BRUTE_MAX_R)?]
        }
        Theorem::MainNorm => {
            let (locked_n, locked_d, locked_q) = LOCKED_MAIN_FIT;
            let mut out = vec![fits::fit_main_bound(&MainFitConfig::new(k.min(locked_n), locked_d, &locked_q))?];
            if k > locked_n {
                let wide = MainFitConfig::new(k.min(fits::MAIN_FIT_MAX_N), fits::MAIN_FIT_MAX_LEVEL, &fits::MAIN_FIT_QS);
                out.push(fits::fit_main_bound(&wide)?);
            }
            out
        }
        Theorem::Ratio => {
            let mut out = Vec::new();
            for n in SWEEP_MIN_N..=k.min(crate::characters::DEFAULT_TABLE_CAP) {
                out.push(fits::ratio_bound_check(n, &RATIO_ALPHAS)?);
            }
            for n in SWEEP_MIN_N..=k.min(fits::RATIO_MAX_N) {
                for alpha in RATIO_ALPHAS {
                    out.push(fits::ratio_lower_construction(n, alpha, LOWER_EPS)?);
                }
            }
            out
        }
        Theorem::Fourier => (SWEEP_MIN_N..=k.min(fits::FOURIER_MAX_N))
            .map(|n| fits::fourier_coeff_bound_check(n, &FOURIER_M_GRID))
            .collect::<Result<_>>()?,
        Theorem::Kronecker => (SWEEP_MIN_N..=k.min(fits::KRONECKER_MAX_N))
            .map(|n| fits::kronecker_bounds_check(n, fits::KRONECKER_MAX_LEVEL))
            .collect::<Result<_>>()?,
        Theorem::All => unreachable!(),
    };
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theorem_ids_round_trip() {
        for t in Theorem::EACH.into_iter().chain([Theorem::All]) {
            assert_eq!(t.id().parse::<Theorem>().unwrap(), t);
        }
        assert!("nope".parse::<Theorem>().is_err());
    }

    #[test]
    fn small_verify_passes() {
        for t in [Theorem::Dims, Theorem::MnLong, Theorem::Kronecker, Theorem::Ratio] {
            for r in verify(t, 7).unwrap() {
                assert!(r.passed(), "{} {:?}", r.theorem, r.failures);
            }
        }
    }
}
