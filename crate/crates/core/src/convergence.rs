//! Result types, stopping rules and per-shift bookkeeping shared by all four
//! shifted methods.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::error_estimate::LagEstimate;
use crate::lanczos::LanczosCoefficients;
use crate::linalg::C64;

/// Default estimator lag.
pub const DEFAULT_LAG: usize = 5;
/// Default relative tolerance.
pub const DEFAULT_RTOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Lanczos,
    Cocg,
    Cocr,
    Minres,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Lanczos, Method::Cocg, Method::Cocr, Method::Minres];

    pub fn name(&self) -> &'static str {
        match self {
            Method::Lanczos => "lanczos",
            Method::Cocg => "cocg",
            Method::Cocr => "cocr",
            Method::Minres => "minres",
        }
    }

    /// COCG and COCR are formulated for real symmetric matrices only.
    pub fn requires_real_symmetric(&self) -> bool {
        matches!(self, Method::Cocg | Method::Cocr)
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "lanczos" => Ok(Method::Lanczos),
            "cocg" => Ok(Method::Cocg),
            "cocr" => Ok(Method::Cocr),
            "minres" => Ok(Method::Minres),
            other => Err(Error::InvalidParameter(format!("unknown method '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShiftStatus {
    Active,
    /// Stopping rule satisfied.
    Converged,
    /// The Krylov space was exhausted; the value is exact up to rounding.
    Exact,
    /// Zero pivot in the shifted Lanczos or MINRES recurrence.
    Breakdown,
    /// `pi_k = 0` in COCG/COCR; the last value is reported.
    PiZero,
    /// A seed bilinear form vanished in COCG/COCR, or the seed converged
    /// before this shift did.
    SeedBreakdown,
    Overflow,
    MaxIterations,
}

impl ShiftStatus {
    pub fn name(&self) -> &'static str {
        match self {
            ShiftStatus::Active => "active",
            ShiftStatus::Converged => "converged",
            ShiftStatus::Exact => "exact",
            ShiftStatus::Breakdown => "breakdown",
            ShiftStatus::PiZero => "pi_zero",
            ShiftStatus::SeedBreakdown => "seed_breakdown",
            ShiftStatus::Overflow => "overflow",
            ShiftStatus::MaxIterations => "max_iterations",
        }
    }

    pub fn is_success(&self) -> bool {
        matches!(self, ShiftStatus::Converged | ShiftStatus::Exact)
    }

    /// Numerical failure (as opposed to running out of iterations).
    pub fn is_failure(&self) -> bool {
        matches!(
            self,
            ShiftStatus::Breakdown
                | ShiftStatus::PiZero
                | ShiftStatus::SeedBreakdown
                | ShiftStatus::Overflow
        )
    }
}

impl std::fmt::Display for ShiftStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for ShiftStatus {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "active" => ShiftStatus::Active,
            "converged" => ShiftStatus::Converged,
            "exact" => ShiftStatus::Exact,
            "breakdown" => ShiftStatus::Breakdown,
            "pi_zero" => ShiftStatus::PiZero,
            "seed_breakdown" => ShiftStatus::SeedBreakdown,
            "overflow" => ShiftStatus::Overflow,
            "max_iterations" => ShiftStatus::MaxIterations,
            other => return Err(Error::InvalidParameter(format!("unknown status '{other}'"))),
        })
    }
}

/// When a shift stops iterating.
#[derive(Debug, Clone, PartialEq)]
pub enum StoppingRule {
    /// Freeze once `nu_{k,d} <= rtol * |value_k|`.
    Estimate { rtol: f64 },
    /// Freeze once `|value_k - reference| <= rtol * |reference|`; one
    /// reference per shift.
    TrueError { rtol: f64, reference: Vec<C64> },
    /// Run until `max_iter` or an exact/failed state.
    Never,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOptions {
    pub stopping: StoppingRule,
    pub max_iter: usize,
    /// Estimator lag `d >= 1`.
    pub lag: usize,
    /// Keep one [`IterationRecord`] per shift and iteration.
    pub history: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            stopping: StoppingRule::Estimate { rtol: DEFAULT_RTOL },
            max_iter: 10_000,
            lag: DEFAULT_LAG,
            history: false,
        }
    }
}

impl SolveOptions {
    pub fn validate(&self, shifts: usize) -> Result<()> {
        if shifts == 0 {
            return Err(Error::EmptyShifts);
        }
        if self.lag == 0 {
            return Err(Error::InvalidParameter("estimator lag must be >= 1".into()));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidParameter("max_iter must be >= 1".into()));
        }
        match &self.stopping {
            StoppingRule::Estimate { rtol } if rtol.is_nan() || *rtol <= 0.0 => {
                Err(Error::InvalidParameter("rtol must be positive".into()))
            }
            StoppingRule::TrueError { rtol, reference } => {
                if rtol.is_nan() || *rtol <= 0.0 {
                    return Err(Error::InvalidParameter("rtol must be positive".into()));
                }
                if reference.len() != shifts {
                    return Err(Error::DimensionMismatch {
                        expected: shifts,
                        actual: reference.len(),
                    });
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

/// One row of convergence history.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct IterationRecord {
    pub k: usize,
    pub value: C64,
    pub mu: Option<f64>,
    pub nu: Option<f64>,
    pub rel_err: Option<f64>,
    /// `delta_k` (Lanczos), `pi_k` (COCG/COCR) or `r_kk` (MINRES).
    pub pivot: Option<C64>,
    /// `e_1^T (zI - T_k)^{-1} e_k` (Lanczos only).
    pub corner: Option<C64>,
    /// `e_1^T (zI - T_{k+d})^{-1} e_{k+1}` (Lanczos only).
    pub bridge: Option<C64>,
    /// `||r_0|| |f_{k+1}|` (MINRES only).
    pub residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShiftOutcome {
    pub z: C64,
    pub value: C64,
    pub iterations: usize,
    pub status: ShiftStatus,
    pub history: Vec<IterationRecord>,
}

/// Seed-system scalars of a COCG/COCR run: `alpha_{k-1}`, `beta_{k-1}`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SeedRecurrence {
    pub seed: C64,
    pub alpha: Vec<C64>,
    pub beta: Vec<C64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadFormResult {
    pub method: Method,
    pub shifts: Vec<ShiftOutcome>,
    /// Iterations performed by the shared vector recurrence.
    pub iterations: usize,
    /// Jacobi matrix coefficients (Lanczos and MINRES).
    pub lanczos: Option<LanczosCoefficients>,
    pub seed: Option<SeedRecurrence>,
}

impl QuadFormResult {
    pub fn values(&self) -> Vec<C64> {
        self.shifts.iter().map(|s| s.value).collect()
    }

    /// Iteration at which the last shift stopped.
    pub fn max_shift_iterations(&self) -> usize {
        self.shifts.iter().map(|s| s.iterations).max().unwrap_or(0)
    }

    pub fn all_converged(&self) -> bool {
        self.shifts.iter().all(|s| s.status.is_success())
    }
}

/// Per-shift bookkeeping: value, status, history and the stopping decision.
#[derive(Debug, Clone)]
pub(crate) struct ShiftTracker {
    z: C64,
    value: C64,
    iterations: usize,
    status: ShiftStatus,
    estimate_rtol: Option<f64>,
    reference: Option<(f64, C64)>,
    history: Option<Vec<IterationRecord>>,
}

impl ShiftTracker {
    pub(crate) fn new(z: C64, index: usize, options: &SolveOptions) -> Self {
        let (estimate_rtol, reference) = match &options.stopping {
            StoppingRule::Estimate { rtol } => (Some(*rtol), None),
            StoppingRule::TrueError { rtol, reference } => (None, Some((*rtol, reference[index]))),
            StoppingRule::Never => (None, None),
        };
        ShiftTracker {
            z,
            value: C64::new(0.0, 0.0),
            iterations: 0,
            status: ShiftStatus::Active,
            estimate_rtol,
            reference,
            history: options.history.then(Vec::new),
        }
    }

    pub(crate) fn is_active(&self) -> bool {
        self.status == ShiftStatus::Active
    }

    /// Records the value of iteration `k`. Returns `true` when the true-error
    /// rule fires or the value is non-finite.
    pub(crate) fn observe(&mut self, k: usize, value: C64, mut record: IterationRecord) -> bool {
        if !(value.re.is_finite() && value.im.is_finite()) {
            self.status = ShiftStatus::Overflow;
            return true;
        }
        self.value = value;
        self.iterations = k;
        let rel_err = self.reference.map(|(_, r)| (value - r).norm() / r.norm());
        if let Some(h) = self.history.as_mut() {
            record.k = k;
            record.value = value;
            record.rel_err = rel_err;
            debug_assert_eq!(h.len() + 1, k);
            h.push(record);
        }
        if let (Some((rtol, _)), Some(err)) = (self.reference, rel_err) {
            if err <= rtol {
                self.status = ShiftStatus::Converged;
                return true;
            }
        }
        false
    }

    /// Applies a lagged estimate. Returns `true` when the estimate rule fires.
    pub(crate) fn lagged(&mut self, est: &LagEstimate) -> bool {
        if let Some(h) = self.history.as_mut() {
            if let Some(rec) = h.get_mut(est.k - 1) {
                rec.nu = est.nu;
                rec.mu = est.mu;
                if est.corner.is_some() {
                    rec.corner = est.corner;
                }
                rec.bridge = est.bridge;
            }
        }
        if self.status != ShiftStatus::Active {
            return false;
        }
        if let (Some(rtol), Some(nu)) = (self.estimate_rtol, est.nu) {
            if nu <= rtol * est.value.norm() {
                self.status = ShiftStatus::Converged;
                return true;
            }
        }
        false
    }

    pub(crate) fn set_status(&mut self, status: ShiftStatus) {
        self.status = status;
    }

    pub(crate) fn finish(mut self, max_status: ShiftStatus) -> ShiftOutcome {
        if self.status == ShiftStatus::Active {
            self.status = max_status;
        }
        ShiftOutcome {
            z: self.z,
            value: self.value,
            iterations: self.iterations,
            status: self.status,
            history: self.history.unwrap_or_default(),
        }
    }
}
