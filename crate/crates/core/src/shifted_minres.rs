//! Shifted MINRES for quadratic forms.
//!
//! The Lanczos stream `(alpha_k, beta_k, q_k)` is shared by every shift. Each
//! shift QR-factorizes its own `(k+1) x k` tridiagonal with complex Givens
//! rotations and accumulates `M_k = v^H x_k` through the scalar images
//! `p_k = v^H p_k` of the MINRES direction vectors, starting from `x_0 = 0`.
//!
//! The rotations act on the tridiagonal with `+beta` off-diagonals. That
//! matrix is `D (zI - T) D` with `D = diag(1, -1, 1, ...)`, so the basis
//! scalars enter as `(-1)^{k-1} v^H q_k`.

use crate::convergence::{
    IterationRecord, Method, QuadFormResult, ShiftStatus, ShiftTracker, SolveOptions,
};
use crate::error::{Error, Result};
use crate::error_estimate::DifferenceEstimator;
use crate::lanczos::{Lanczos, StepOutcome};
use crate::linalg::{dotc, SparseHermitianMatrix, C64};

/// Absolute guard on `r_kk`.
pub const TOL_R: f64 = 1e-290;

/// `G = [c s; -conj(s) conj(c)]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GivensRotation {
    pub c: C64,
    pub s: C64,
}

impl GivensRotation {
    pub const IDENTITY: GivensRotation = GivensRotation {
        c: C64::new(1.0, 0.0),
        s: C64::new(0.0, 0.0),
    };

    /// `[x; y] -> [c x + s y; -conj(s) x + conj(c) y]`.
    pub fn apply(&self, x: C64, y: C64) -> (C64, C64) {
        (
            self.c * x + self.s * y,
            -self.s.conj() * x + self.c.conj() * y,
        )
    }

    /// `|c|^2 + |s|^2 - 1`.
    pub fn unitarity_defect(&self) -> f64 {
        self.c.norm_sqr() + self.s.norm_sqr() - 1.0
    }
}

/// Rotation with `c a + s b = r` and `-conj(s) a + conj(c) b = 0`. `c` is
/// real and nonnegative, and `r` carries the phase of `a` (or `r = |b|` when
/// `a = 0`).
pub fn givens(a: C64, b: C64) -> Result<(GivensRotation, C64)> {
    let na = a.norm();
    let nb = b.norm();
    if na == 0.0 && nb == 0.0 {
        return Err(Error::InvalidParameter(
            "givens: both inputs are zero".into(),
        ));
    }
    if na == 0.0 {
        return Ok((
            GivensRotation {
                c: C64::new(0.0, 0.0),
                s: b.conj() / nb,
            },
            C64::new(nb, 0.0),
        ));
    }
    let rho = na.hypot(nb);
    let phase = a / na;
    Ok((
        GivensRotation {
            c: C64::new(na / rho, 0.0),
            s: phase * b.conj() / rho,
        },
        phase * rho,
    ))
}

/// Per-shift MINRES state.
#[derive(Debug, Clone, Copy)]
pub struct MinresShiftState {
    z: C64,
    r0: f64,
    /// `G_{k-1}`, `G_{k-2}`.
    g1: GivensRotation,
    g2: GivensRotation,
    /// `p_{k-1}`, `p_{k-2}`.
    p1: C64,
    p2: C64,
    /// `f_k`.
    f: C64,
    value: C64,
    r_col: [C64; 3],
    status: ShiftStatus,
}

impl MinresShiftState {
    /// `r0 = ||v||`.
    pub fn new(z: C64, r0: f64) -> Self {
        let zero = C64::new(0.0, 0.0);
        MinresShiftState {
            z,
            r0,
            g1: GivensRotation::IDENTITY,
            g2: GivensRotation::IDENTITY,
            p1: zero,
            p2: zero,
            f: C64::new(1.0, 0.0),
            value: zero,
            r_col: [zero; 3],
            status: ShiftStatus::Active,
        }
    }

    /// Column `k`: `alpha_k`, `beta_{k-1}` (zero for `k = 1`), `beta_k` and
    /// `q = (-1)^{k-1} v^H q_k`.
    pub fn update(&mut self, alpha: f64, beta_prev: f64, beta: f64, q: C64) {
        if self.status != ShiftStatus::Active {
            return;
        }
        let zero = C64::new(0.0, 0.0);
        let (r_km2, x) = self.g2.apply(zero, C64::new(beta_prev, 0.0));
        let (r_km1, a) = self.g1.apply(x, self.z - alpha);
        let (g, r_kk) = match givens(a, C64::new(beta, 0.0)) {
            Ok(v) => v,
            Err(_) => {
                self.status = ShiftStatus::Breakdown;
                return;
            }
        };
        if r_kk.norm() <= TOL_R {
            self.status = ShiftStatus::Breakdown;
            return;
        }
        let p = (q - r_km2 * self.p2 - r_km1 * self.p1) / r_kk;
        self.value += self.r0 * g.c * self.f * p;
        self.f = -g.s.conj() * self.f;
        self.g2 = self.g1;
        self.g1 = g;
        self.p2 = self.p1;
        self.p1 = p;
        self.r_col = [r_km2, r_km1, r_kk];
        let ok = [self.value, self.f, p]
            .iter()
            .all(|x| x.re.is_finite() && x.im.is_finite());
        if !ok {
            self.status = ShiftStatus::Overflow;
        }
    }

    pub fn z(&self) -> C64 {
        self.z
    }

    /// `M_k`.
    pub fn value(&self) -> C64 {
        self.value
    }

    /// `f_{k+1}` after `k` updates.
    pub fn residual_phase(&self) -> C64 {
        self.f
    }

    /// `||r_0|| |f_{k+1}|`.
    pub fn residual_norm(&self) -> f64 {
        self.r0 * self.f.norm()
    }

    /// Most recent rotation `G_k`.
    pub fn rotation(&self) -> GivensRotation {
        self.g1
    }

    /// `(r_{k-2,k}, r_{k-1,k}, r_{k,k})`.
    pub fn r_column(&self) -> [C64; 3] {
        self.r_col
    }

    pub fn status(&self) -> ShiftStatus {
        self.status
    }
}

/// Approximates `v^H (z_i I - A)^{-1} v` for every shift with shifted MINRES.
pub fn minres_run(
    a: &SparseHermitianMatrix,
    v: &[C64],
    shifts: &[C64],
    options: &SolveOptions,
) -> Result<QuadFormResult> {
    options.validate(shifts.len())?;
    let mut lanczos = Lanczos::new(a, v)?;
    let r0 = lanczos.vnorm2().sqrt();

    let mut states: Vec<MinresShiftState> = shifts
        .iter()
        .map(|&z| MinresShiftState::new(z, r0))
        .collect();
    let mut trackers: Vec<ShiftTracker> = shifts
        .iter()
        .enumerate()
        .map(|(i, &z)| ShiftTracker::new(z, i, options))
        .collect();
    let mut estimators: Vec<DifferenceEstimator> = shifts
        .iter()
        .map(|_| DifferenceEstimator::new(options.lag))
        .collect();

    let mut alpha = lanczos.coefficients().alpha[0];
    let mut beta_prev = 0.0;
    let mut q = dotc(v, lanczos.basis_vector());
    let mut k = 0;
    while k < options.max_iter && trackers.iter().any(ShiftTracker::is_active) {
        k += 1;
        let (beta, next_alpha) = match lanczos.step()? {
            StepOutcome::Continue { beta, alpha } => (beta, Some(alpha)),
            StepOutcome::InvariantSubspace { .. } => (0.0, None),
        };
        let q_signed = if k % 2 == 1 { q } else { -q };
        for ((st, tr), est) in states.iter_mut().zip(&mut trackers).zip(&mut estimators) {
            if !tr.is_active() {
                continue;
            }
            st.update(alpha, beta_prev, beta, q_signed);
            if st.status() != ShiftStatus::Active {
                tr.set_status(st.status());
                continue;
            }
            let record = IterationRecord {
                pivot: Some(st.r_column()[2]),
                residual: Some(st.residual_norm()),
                ..Default::default()
            };
            if tr.observe(k, st.value(), record) {
                continue;
            }
            if let Some(e) = est.push(k, st.value()) {
                tr.lagged(&e);
            }
        }
        match next_alpha {
            Some(a_next) => {
                alpha = a_next;
                beta_prev = beta;
                q = dotc(v, lanczos.basis_vector());
            }
            None => {
                for (tr, est) in trackers.iter_mut().zip(&mut estimators) {
                    if tr.is_active() {
                        tr.set_status(ShiftStatus::Exact);
                        for e in est.finalize_stationary() {
                            tr.lagged(&e);
                        }
                    }
                }
                break;
            }
        }
    }

    Ok(QuadFormResult {
        method: Method::Minres,
        shifts: trackers
            .into_iter()
            .map(|t| t.finish(ShiftStatus::MaxIterations))
            .collect(),
        iterations: k,
        lanczos: Some(lanczos.into_coefficients()),
        seed: None,
    })
}
