//! Shifted Lanczos method for quadratic forms `v^H (z_i I - A)^{-1} v`.
//!
//! One Lanczos stream drives every shift. Each shift carries an O(1) cell
//! `(c_k, delta_k, pi_k, L_k)` with
//!
//! ```text
//! t_k       = beta_k^2 pi_k
//! delta_k+1 = z - alpha_k+1 - t_k
//! pi_k+1    = 1 / delta_k+1
//! c_k+1     = c_k t_k pi_k
//! L_k+1     = L_k + c_k+1 pi_k+1
//! ```
//!
//! starting from `c_1 = v^H v`, `delta_1 = z - alpha_1`, `L_1 = c_1 / delta_1`,
//! so that `L_k = (v^H v) e_1^T (zI - T_{k,k})^{-1} e_1`. `beta_k^2` is formed
//! once per iteration; the per-shift update then costs 3 additions,
//! 4 multiplications and 1 division.
//!
//! If `z` lies outside `[lambda_min, lambda_max]` no pivot `delta_k` can
//! vanish, so the recurrence never breaks down for non-real shifts.

use crate::convergence::{
    IterationRecord, Method, QuadFormResult, ShiftStatus, ShiftTracker, SolveOptions, StoppingRule,
};
use crate::error::{Error, Result};
use crate::error_estimate::EstimatorState;
use crate::lanczos::{Lanczos, StepOutcome};
use crate::linalg::{SparseHermitianMatrix, C64};
use crate::opcount::KernelScalar;

/// Absolute pivot guard. Tiny pivots legitimately occur near convergence, so
/// this only catches true division hazards.
pub const TOL_DELTA: f64 = 1e-290;

/// Per-shift recurrence cell.
#[derive(Debug, Clone, Copy)]
pub struct ShiftState<S: KernelScalar = C64> {
    z: S,
    c: S,
    delta: S,
    pi: S,
    value: S,
    status: ShiftStatus,
    k: usize,
}

impl<S: KernelScalar> ShiftState<S> {
    /// `c_1 = vnorm2`, `delta_1 = z - alpha_1`, `pi_1 = 1/delta_1`,
    /// `L_1 = c_1 pi_1`. A zero pivot yields `Breakdown` with `L_1` undefined
    /// (reported as NaN).
    pub fn init(z: C64, vnorm2: f64, alpha1: f64) -> Self {
        let zs = S::from_c64(z);
        let c = S::from_real(vnorm2);
        let delta = zs - S::from_real(alpha1);
        let nan = S::from_c64(C64::new(f64::NAN, f64::NAN));
        if delta.to_c64().norm() <= TOL_DELTA {
            return ShiftState {
                z: zs,
                c,
                delta,
                pi: nan,
                value: nan,
                status: ShiftStatus::Breakdown,
                k: 1,
            };
        }
        let pi = S::from_real(1.0) / delta;
        let value = c * pi;
        let mut st = ShiftState {
            z: zs,
            c,
            delta,
            pi,
            value,
            status: ShiftStatus::Active,
            k: 1,
        };
        st.check_finite();
        st
    }

    /// Advances from `k` to `k + 1` given `alpha_{k+1}` and the
    /// shift-independent `beta_k^2`. On a zero pivot the state becomes
    /// `Breakdown` and keeps `L_k`.
    #[inline]
    pub fn update(&mut self, alpha_next: S, beta_sq: S) {
        if self.status != ShiftStatus::Active {
            return;
        }
        let t = beta_sq * self.pi;
        let delta = self.z - alpha_next - t;
        if delta.to_c64().norm() <= TOL_DELTA {
            self.status = ShiftStatus::Breakdown;
            return;
        }
        let pi = S::from_real(1.0) / delta;
        self.c = self.c * t * self.pi;
        self.value = self.value + self.c * pi;
        self.delta = delta;
        self.pi = pi;
        self.k += 1;
        self.check_finite();
    }

    fn check_finite(&mut self) {
        let ok = [self.c, self.delta, self.pi, self.value].iter().all(|x| {
            let x = x.to_c64();
            x.re.is_finite() && x.im.is_finite()
        });
        if !ok {
            self.status = ShiftStatus::Overflow;
        }
    }

    pub fn z(&self) -> C64 {
        self.z.to_c64()
    }

    /// `L_k`.
    pub fn value(&self) -> C64 {
        self.value.to_c64()
    }

    /// `delta_k`.
    pub fn delta(&self) -> C64 {
        self.delta.to_c64()
    }

    /// `pi_k`.
    pub fn pi(&self) -> C64 {
        self.pi.to_c64()
    }

    /// `c_k`.
    pub fn c(&self) -> C64 {
        self.c.to_c64()
    }

    pub fn status(&self) -> ShiftStatus {
        self.status
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

/// Approximates `v^H (z_i I - A)^{-1} v` for every shift with one Lanczos
/// stream. Each shift freezes independently under `options.stopping`; the
/// run ends when every shift is frozen, the Krylov space is exhausted, or
/// `options.max_iter` Lanczos vectors have been built.
pub fn run_quadratic_forms(
    a: &SparseHermitianMatrix,
    v: &[C64],
    shifts: &[C64],
    options: &SolveOptions,
) -> Result<QuadFormResult> {
    options.validate(shifts.len())?;
    let mut lanczos = Lanczos::new(a, v)?;
    let vnorm2 = lanczos.vnorm2();
    let alpha1 = lanczos.coefficients().alpha[0];

    let mut states: Vec<ShiftState> = Vec::with_capacity(shifts.len());
    let mut trackers: Vec<ShiftTracker> = Vec::with_capacity(shifts.len());
    let mut estimators: Vec<EstimatorState> = Vec::with_capacity(shifts.len());
    for (i, &z) in shifts.iter().enumerate() {
        let st = ShiftState::<C64>::init(z, vnorm2, alpha1);
        let mut tr = ShiftTracker::new(z, i, options);
        let mut est = EstimatorState::new(options.lag, z, vnorm2);
        if st.status() == ShiftStatus::Active {
            let record = IterationRecord {
                pivot: Some(st.delta()),
                ..Default::default()
            };
            tr.observe(1, st.value(), record);
            if let Some(e) = est.push(alpha1, 0.0, st.delta(), st.value()) {
                tr.lagged(&e);
            }
        } else {
            tr.set_status(st.status());
        }
        states.push(st);
        trackers.push(tr);
        estimators.push(est);
    }

    let mut k = 1;
    while k < options.max_iter && trackers.iter().any(ShiftTracker::is_active) {
        match lanczos.step()? {
            StepOutcome::Continue { beta, alpha } => {
                k += 1;
                let beta_sq = C64::new(beta * beta, 0.0);
                let alpha_c = C64::new(alpha, 0.0);
                for ((st, tr), est) in states.iter_mut().zip(&mut trackers).zip(&mut estimators) {
                    if !tr.is_active() {
                        continue;
                    }
                    st.update(alpha_c, beta_sq);
                    if st.status() != ShiftStatus::Active {
                        tr.set_status(st.status());
                        continue;
                    }
                    let record = IterationRecord {
                        pivot: Some(st.delta()),
                        ..Default::default()
                    };
                    if tr.observe(k, st.value(), record) {
                        continue;
                    }
                    if let Some(e) = est.push(alpha, beta, st.delta(), st.value()) {
                        tr.lagged(&e);
                    }
                }
            }
            StepOutcome::InvariantSubspace { .. } => {
                for (tr, est) in trackers.iter_mut().zip(&mut estimators) {
                    if !tr.is_active() {
                        continue;
                    }
                    tr.set_status(ShiftStatus::Exact);
                    for e in est.finalize_invariant() {
                        tr.lagged(&e);
                    }
                }
                break;
            }
        }
    }

    Ok(QuadFormResult {
        method: Method::Lanczos,
        shifts: trackers
            .into_iter()
            .map(|t| t.finish(ShiftStatus::MaxIterations))
            .collect(),
        iterations: k,
        lanczos: Some(lanczos.into_coefficients()),
        seed: None,
    })
}

/// `p^T (z_i I - A)^{-1} q` for real symmetric `A` and real `p`, `q`, through
/// `(1/4) [s^T R s - t^T R t]` with `s = p + q`, `t = p - q`. A zero `s` or `t`
/// contributes zero.
pub fn bilinear_form(
    a: &SparseHermitianMatrix,
    p: &[C64],
    q: &[C64],
    shifts: &[C64],
    options: &SolveOptions,
) -> Result<Vec<C64>> {
    if !a.is_real_symmetric() {
        return Err(Error::NotRealSymmetric);
    }
    if p.iter().chain(q).any(|x| x.im != 0.0) {
        return Err(Error::NotReal);
    }
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch {
            expected: p.len(),
            actual: q.len(),
        });
    }
    if matches!(options.stopping, StoppingRule::TrueError { .. }) {
        return Err(Error::InvalidParameter(
            "true-error stopping needs per-vector references; use run_quadratic_forms".into(),
        ));
    }
    let s: Vec<C64> = p.iter().zip(q).map(|(x, y)| x + y).collect();
    let t: Vec<C64> = p.iter().zip(q).map(|(x, y)| x - y).collect();
    let form = |w: &[C64]| -> Result<Vec<C64>> {
        if w.iter().all(|x| *x == C64::new(0.0, 0.0)) {
            options.validate(shifts.len())?;
            return Ok(vec![C64::new(0.0, 0.0); shifts.len()]);
        }
        Ok(run_quadratic_forms(a, w, shifts, options)?.values())
    };
    let ls = form(&s)?;
    let lt = form(&t)?;
    Ok(ls.iter().zip(&lt).map(|(x, y)| (x - y) * 0.25).collect())
}
