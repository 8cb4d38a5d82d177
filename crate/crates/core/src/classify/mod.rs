//! Freeness, nearly-freeness and maximizing verdicts from `(d, mdr, τ)`,
//! the trichotomy for curves with a point of high multiplicity, and the
//! global flex bound.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("mdr {r} out of range for degree {d}")]
    OutOfRange { d: u32, r: u32 },
    #[error("tau {tau} exceeds the bound {bound} for degree {d} and mdr {r}")]
    Inconsistent { d: u32, r: u32, tau: u64, bound: u64 },
    #[error("no case of the trichotomy applies to (e={e}, m={m}, r={r})")]
    NoCase { e: u32, m: u32, r: u32 },
}

fn binom2(n: i64) -> i64 {
    if n < 2 {
        0
    } else {
        n * (n - 1) / 2
    }
}

/// `(d−1)² − r(d−r−1)`, valid as a bound for `2r < d`.
pub fn dpw_free_value(d: u32, r: u32) -> i64 {
    let (d, r) = (d as i64, r as i64);
    (d - 1) * (d - 1) - r * (d - r - 1)
}

/// Upper bound on the global Tjurina number of a reduced curve of degree
/// `d` with `mdr = r`. For `r ≥ d/2` the bound drops by `C(2r−d+2, 2)`.
pub fn dpw_bound(d: u32, r: u32) -> Result<u64, ClassifyError> {
    if d == 0 || r > d - 1 {
        return Err(ClassifyError::OutOfRange { d, r });
    }
    let a = dpw_free_value(d, r);
    let v = if 2 * r < d {
        a
    } else {
        a - binom2(2 * r as i64 - d as i64 + 2)
    };
    Ok(v as u64)
}

/// Which bound was compared against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    /// `(d−1)² − r(d−r−1)`, for `2r < d`.
    Free,
    /// The reduced bound, for `2r ≥ d`.
    Reduced,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    Free { exponents: (u32, u32) },
    NearlyFree { exponents: (u32, u32) },
    Other,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Free { exponents: (a, b) } => write!(f, "Free({a},{b})"),
            Verdict::NearlyFree { exponents: (a, b) } => write!(f, "NearlyFree({a},{b})"),
            Verdict::Other => write!(f, "Other"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub degree: u32,
    pub mdr: u32,
    pub tau: u64,
    pub verdict: Verdict,
    /// Maximizing: free, only simple singularities, and `τ = 3m(m−1)+1`
    /// (`d = 2m`) or `3m²+1` (`d = 2m+1`).
    pub maximizing: bool,
    pub bound: u64,
    pub bound_kind: BoundKind,
    /// Which rule fired.
    pub rule: String,
}

/// `τ` of a maximizing curve of degree `d`.
pub fn maximizing_tau(d: u32) -> Option<u64> {
    if d < 2 {
        return None;
    }
    let m = (d / 2) as u64;
    Some(if d % 2 == 0 { 3 * m * (m - 1) + 1 } else { 3 * m * m + 1 })
}

/// Verdict from the degree, `mdr` and `τ`. `ade` attests that every
/// singular point was verified to be simple; without it a curve is never
/// called maximizing.
pub fn classify_curve(d: u32, r: u32, tau: u64, ade: bool) -> Result<Classification, ClassifyError> {
    let bound = dpw_bound(d, r)?;
    let bound_kind = if 2 * r < d { BoundKind::Free } else { BoundKind::Reduced };
    if tau > bound {
        return Err(ClassifyError::Inconsistent { d, r, tau, bound });
    }
    let free_value = dpw_free_value(d, r);
    let (verdict, rule) = if 2 * r < d && tau == bound {
        (
            Verdict::Free {
                exponents: (r, d - 1 - r),
            },
            format!("tau = (d-1)^2 - r(d-r-1) = {bound}"),
        )
    } else if 2 * r <= d && tau as i64 == free_value - 1 {
        (
            Verdict::NearlyFree { exponents: (r, d - r) },
            format!("tau = (d-1)^2 - r(d-r-1) - 1 = {}", free_value - 1),
        )
    } else {
        (Verdict::Other, format!("tau = {tau} below the bound {bound}"))
    };
    let maximizing = ade && matches!(verdict, Verdict::Free { .. }) && Some(tau) == maximizing_tau(d);
    Ok(Classification {
        degree: d,
        mdr: r,
        tau,
        verdict,
        maximizing,
        bound,
        bound_kind,
        rule,
    })
}

/// Cases for a curve made of `m` lines through `p` and a residual curve of
/// degree `e` through `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Trichotomy {
    /// `r = e`.
    CaseA,
    /// `r = m − 1` and the curve is free with exponents `(m−1, e)`.
    CaseBFree,
    /// `m ≤ r ≤ e − 1`.
    CaseC,
}

pub fn trichotomy_check(d: u32, e: u32, m: u32, r: u32, free: bool) -> Result<Trichotomy, ClassifyError> {
    if r == e {
        return Ok(Trichotomy::CaseA);
    }
    if m >= 1 && r == m - 1 && free && d == e + m {
        return Ok(Trichotomy::CaseBFree);
    }
    if m <= r && r + 1 <= e {
        return Ok(Trichotomy::CaseC);
    }
    Err(ClassifyError::NoCase { e, m, r })
}

/// `3d(d−2) − Σ 3k(k−1) n_k`, the maximal number of flexes counted with
/// order for a curve with `n_k` points of multiplicity `k`.
pub fn flex_bound(d: u32, histogram: &BTreeMap<u32, u32>) -> i64 {
    let d = d as i64;
    let sing: i64 = histogram.iter().map(|(&k, &n)| 3 * k as i64 * (k as i64 - 1) * n as i64).sum();
    3 * d * (d - 2) - sing
}
