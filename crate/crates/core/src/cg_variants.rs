//! Shifted COCG and COCR adapted to quadratic forms.
//!
//! Both methods iterate a single seed system `(z_s I - A) x = v` with
//! unconjugated bilinear forms and recover every other shift through
//! collinear residuals `r_k^{(i)} = r_k / pi_k^{(i)}`. Applying `v^H` to the
//! shifted iterates and search directions turns the vector updates into
//! scalar ones, so each shift only carries a handful of complex numbers.
//!
//! These recurrences require a real symmetric `A`.

use crate::convergence::{
    IterationRecord, Method, QuadFormResult, SeedRecurrence, ShiftStatus, ShiftTracker,
    SolveOptions,
};
use crate::error::{Error, Result};
use crate::error_estimate::DifferenceEstimator;
use crate::linalg::{all_finite, axpy_in_place, dotc, dotu, norm, SparseHermitianMatrix, C64};
use crate::opcount::KernelScalar;

/// Absolute guard on `pi_k^{(i)}` and on the seed denominators.
pub const TOL_PI: f64 = 1e-290;

/// Seed residual level, relative to `||v||`, treated as an exhausted Krylov
/// space.
const SEED_EXHAUSTED_RTOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SeedChoice {
    /// The shift with the largest `|Im z|`.
    LargestImaginary,
    /// `shifts[i]`.
    Index(usize),
    /// Any complex seed, not necessarily in the shift set.
    Value(C64),
}

impl SeedChoice {
    pub fn resolve(&self, shifts: &[C64]) -> Result<C64> {
        match *self {
            SeedChoice::LargestImaginary => shifts
                .iter()
                .copied()
                .fold(None, |best: Option<C64>, z| match best {
                    Some(b) if b.im.abs() >= z.im.abs() => Some(b),
                    _ => Some(z),
                })
                .ok_or(Error::EmptyShifts),
            SeedChoice::Index(i) => shifts.get(i).copied().ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "seed index {i} out of range ({} shifts)",
                    shifts.len()
                ))
            }),
            SeedChoice::Value(z) => Ok(z),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeededShiftedRunConfig {
    pub seed: SeedChoice,
    pub options: SolveOptions,
}

impl Default for SeededShiftedRunConfig {
    fn default() -> Self {
        SeededShiftedRunConfig {
            seed: SeedChoice::LargestImaginary,
            options: SolveOptions::default(),
        }
    }
}

/// Per-shift scalars for COCG/COCR.
#[derive(Debug, Clone, Copy)]
pub struct CollinearShiftScalars<S: KernelScalar = C64> {
    z: S,
    /// `pi_k`
    pi: S,
    /// `pi_{k-1}`
    pi_prev: S,
    /// `v^H p_k^{(i)}` (COCG) or `v^H p_{k-1}^{(i)}` (COCR).
    p: S,
    /// `G_k` or `R_k`.
    acc: S,
    status: ShiftStatus,
}

impl<S: KernelScalar> CollinearShiftScalars<S> {
    /// `pi_0 = pi_{-1} = 1`, accumulator zero. `p0` is `v^H r_0` for COCG and
    /// `0` for COCR.
    pub fn new(z: C64, p0: C64) -> Self {
        let one = S::from_real(1.0);
        CollinearShiftScalars {
            z: S::from_c64(z),
            pi: one,
            pi_prev: one,
            p: S::from_c64(p0),
            acc: S::from_real(0.0),
            status: ShiftStatus::Active,
        }
    }

    pub fn value(&self) -> C64 {
        self.acc.to_c64()
    }

    pub fn pi(&self) -> C64 {
        self.pi.to_c64()
    }

    pub fn pi_prev(&self) -> C64 {
        self.pi_prev.to_c64()
    }

    pub fn status(&self) -> ShiftStatus {
        self.status
    }

    fn pi_vanishes(pi: S) -> bool {
        pi.to_c64().norm() <= TOL_PI
    }

    fn check_finite(&mut self) {
        let ok = [self.pi, self.p, self.acc].iter().all(|x| {
            let x = x.to_c64();
            x.re.is_finite() && x.im.is_finite()
        });
        if !ok {
            self.status = ShiftStatus::Overflow;
        }
    }

    /// One COCG shift step from `k-1` to `k`.
    ///
    /// Inputs are the seed scalars `alpha_{k-1}`, `beta_{k-2}`, `alpha_{k-2}`,
    /// `beta_{k-1}`, `r_k = v^H r_k` and the seed shift. The ratio
    /// `beta_{k-2}/alpha_{k-2}` is formed per shift: 6 additions,
    /// 9 multiplications, 3 divisions.
    #[allow(clippy::too_many_arguments)]
    pub fn cocg_update(
        &mut self,
        alpha: S,
        beta_prev2: S,
        alpha_prev: S,
        beta: S,
        r_k: S,
        seed: S,
    ) {
        if self.status != ShiftStatus::Active {
            return;
        }
        let one = S::from_real(1.0);
        let gamma = beta_prev2 / alpha_prev * alpha;
        let pi_new = (one + alpha * (self.z - seed) + gamma) * self.pi - gamma * self.pi_prev;
        if Self::pi_vanishes(pi_new) {
            self.status = ShiftStatus::PiZero;
            return;
        }
        let ratio = self.pi / pi_new;
        let alpha_i = ratio * alpha;
        self.acc = self.acc + alpha_i * self.p;
        let beta_i = ratio * ratio * beta;
        self.p = r_k / pi_new + beta_i * self.p;
        self.pi_prev = self.pi;
        self.pi = pi_new;
        self.check_finite();
    }

    /// One COCR shift step from `k-1` to `k`.
    ///
    /// Inputs are the shift-independent `gamma = (beta_{k-2}/alpha_{k-2})
    /// alpha_{k-1}`, `alpha_{k-1}`, `beta_{k-2}`, `r_{k-1} = v^H r_{k-1}` and
    /// the seed shift: 6 additions, 8 multiplications, 3 divisions.
    pub fn cocr_update(&mut self, gamma: S, alpha: S, beta_prev2: S, r_prev: S, seed: S) {
        if self.status != ShiftStatus::Active {
            return;
        }
        let one = S::from_real(1.0);
        let pi_new = (one + gamma + alpha * (self.z - seed)) * self.pi - gamma * self.pi_prev;
        if Self::pi_vanishes(pi_new) {
            self.status = ShiftStatus::PiZero;
            return;
        }
        let back = self.pi_prev / self.pi;
        let beta_i = back * back * beta_prev2;
        let alpha_i = self.pi / pi_new * alpha;
        self.p = r_prev / self.pi + beta_i * self.p;
        self.acc = self.acc + alpha_i * self.p;
        self.pi_prev = self.pi;
        self.pi = pi_new;
        self.check_finite();
    }
}

fn validate(
    a: &SparseHermitianMatrix,
    v: &[C64],
    shifts: &[C64],
    config: &SeededShiftedRunConfig,
) -> Result<C64> {
    config.options.validate(shifts.len())?;
    if !a.is_real_symmetric() {
        return Err(Error::NotRealSymmetric);
    }
    if v.len() != a.n() {
        return Err(Error::DimensionMismatch {
            expected: a.n(),
            actual: v.len(),
        });
    }
    if !all_finite(v) {
        return Err(Error::NonFinite("initial vector"));
    }
    if norm(v) == 0.0 {
        return Err(Error::ZeroVector);
    }
    config.seed.resolve(shifts)
}

struct ShiftBook {
    cells: Vec<CollinearShiftScalars>,
    trackers: Vec<ShiftTracker>,
    estimators: Vec<DifferenceEstimator>,
}

impl ShiftBook {
    fn new(shifts: &[C64], p0: C64, options: &SolveOptions) -> Self {
        ShiftBook {
            cells: shifts
                .iter()
                .map(|&z| CollinearShiftScalars::new(z, p0))
                .collect(),
            trackers: shifts
                .iter()
                .enumerate()
                .map(|(i, &z)| ShiftTracker::new(z, i, options))
                .collect(),
            estimators: shifts
                .iter()
                .map(|_| DifferenceEstimator::new(options.lag))
                .collect(),
        }
    }

    fn any_active(&self) -> bool {
        self.trackers.iter().any(ShiftTracker::is_active)
    }

    /// Records iteration `k` for every shift still active after its update.
    fn record(&mut self, k: usize) {
        for ((cell, tr), est) in self
            .cells
            .iter()
            .zip(&mut self.trackers)
            .zip(&mut self.estimators)
        {
            if !tr.is_active() {
                continue;
            }
            if cell.status() != ShiftStatus::Active {
                tr.set_status(cell.status());
                continue;
            }
            let record = IterationRecord {
                pivot: Some(cell.pi()),
                ..Default::default()
            };
            if tr.observe(k, cell.value(), record) {
                continue;
            }
            if let Some(e) = est.push(k, cell.value()) {
                tr.lagged(&e);
            }
        }
    }

    /// Seed residual `r_k` became negligible: shifts whose own residual
    /// `r_k / pi_k` is negligible too are exact, the rest would need a new
    /// seed.
    fn seed_exhausted(&mut self, r_norm: f64, v_norm: f64) {
        for ((cell, tr), est) in self
            .cells
            .iter()
            .zip(&mut self.trackers)
            .zip(&mut self.estimators)
        {
            if !tr.is_active() {
                continue;
            }
            if r_norm / cell.pi().norm() <= SEED_EXHAUSTED_RTOL * v_norm {
                tr.set_status(ShiftStatus::Exact);
                for e in est.finalize_stationary() {
                    tr.lagged(&e);
                }
            } else {
                tr.set_status(ShiftStatus::SeedBreakdown);
            }
        }
    }

    fn seed_breakdown(&mut self) {
        for tr in self.trackers.iter_mut().filter(|t| t.is_active()) {
            tr.set_status(ShiftStatus::SeedBreakdown);
        }
    }

    fn finish(self, method: Method, iterations: usize, seed: SeedRecurrence) -> QuadFormResult {
        QuadFormResult {
            method,
            shifts: self
                .trackers
                .into_iter()
                .map(|t| t.finish(ShiftStatus::MaxIterations))
                .collect(),
            iterations,
            lanczos: None,
            seed: Some(seed),
        }
    }
}

/// Shifted COCG for `v^H (z_i I - A)^{-1} v`, returning `G_k^{(i)}`.
pub fn cocg_run(
    a: &SparseHermitianMatrix,
    v: &[C64],
    shifts: &[C64],
    config: &SeededShiftedRunConfig,
) -> Result<QuadFormResult> {
    let seed = validate(a, v, shifts, config)?;
    let options = &config.options;
    let n = a.n();
    let v_norm = norm(v);

    let mut r = v.to_vec();
    let mut p = r.clone();
    let mut w = vec![C64::new(0.0, 0.0); n];
    let mut rr = dotu(&r, &r);
    let mut alpha_prev = C64::new(1.0, 0.0);
    let mut beta_prev2 = C64::new(0.0, 0.0);

    let mut book = ShiftBook::new(shifts, dotc(v, &r), options);
    let mut rec = SeedRecurrence {
        seed,
        ..Default::default()
    };

    let mut k = 0;
    while k < options.max_iter && book.any_active() {
        a.shifted_matvec_into(seed, &p, &mut w);
        let pw = dotu(&p, &w);
        if pw.norm() <= TOL_PI || rr.norm() <= TOL_PI {
            book.seed_breakdown();
            break;
        }
        let alpha = rr / pw;
        axpy_in_place(-alpha, &w, &mut r);
        let rr_new = dotu(&r, &r);
        let beta = rr_new / rr;
        let r_k = dotc(v, &r);
        for (pi, ri) in p.iter_mut().zip(&r) {
            *pi = ri + beta * *pi;
        }
        if !(alpha.re.is_finite()
            && alpha.im.is_finite()
            && beta.re.is_finite()
            && beta.im.is_finite())
        {
            return Err(Error::NonFinite("COCG seed recurrence"));
        }
        k += 1;
        for cell in book.cells.iter_mut() {
            cell.cocg_update(alpha, beta_prev2, alpha_prev, beta, r_k, seed);
        }
        book.record(k);
        rec.alpha.push(alpha);
        rec.beta.push(beta);
        alpha_prev = alpha;
        beta_prev2 = beta;
        rr = rr_new;

        let r_norm = norm(&r);
        if r_norm <= SEED_EXHAUSTED_RTOL * v_norm {
            book.seed_exhausted(r_norm, v_norm);
            break;
        }
    }
    Ok(book.finish(Method::Cocg, k, rec))
}

/// Shifted COCR for `v^H (z_i I - A)^{-1} v`, returning `R_k^{(i)}`.
pub fn cocr_run(
    a: &SparseHermitianMatrix,
    v: &[C64],
    shifts: &[C64],
    config: &SeededShiftedRunConfig,
) -> Result<QuadFormResult> {
    let seed = validate(a, v, shifts, config)?;
    let options = &config.options;
    let n = a.n();
    let v_norm = norm(v);

    let mut r = v.to_vec();
    let mut w = vec![C64::new(0.0, 0.0); n];
    a.shifted_matvec_into(seed, &r, &mut w);
    let mut rw = dotu(&r, &w);
    let mut q = w.clone();
    let mut r_scalar = dotc(v, &r);
    let mut alpha_prev = C64::new(1.0, 0.0);
    let mut beta_prev2 = C64::new(0.0, 0.0);

    let mut book = ShiftBook::new(shifts, C64::new(0.0, 0.0), options);
    let mut rec = SeedRecurrence {
        seed,
        ..Default::default()
    };

    let mut k = 0;
    while k < options.max_iter && book.any_active() {
        let qq = dotu(&q, &q);
        if qq.norm() <= TOL_PI || rw.norm() <= TOL_PI {
            book.seed_breakdown();
            break;
        }
        let alpha = rw / qq;
        let gamma = beta_prev2 / alpha_prev * alpha;
        k += 1;
        for cell in book.cells.iter_mut() {
            cell.cocr_update(gamma, alpha, beta_prev2, r_scalar, seed);
        }
        book.record(k);

        axpy_in_place(-alpha, &q, &mut r);
        r_scalar = dotc(v, &r);
        a.shifted_matvec_into(seed, &r, &mut w);
        let rw_new = dotu(&r, &w);
        let beta = rw_new / rw;
        for (qi, wi) in q.iter_mut().zip(&w) {
            *qi = wi + beta * *qi;
        }
        if !(alpha.re.is_finite()
            && alpha.im.is_finite()
            && beta.re.is_finite()
            && beta.im.is_finite())
        {
            return Err(Error::NonFinite("COCR seed recurrence"));
        }
        rec.alpha.push(alpha);
        rec.beta.push(beta);
        alpha_prev = alpha;
        beta_prev2 = beta;
        rw = rw_new;

        let r_norm = norm(&r);
        if r_norm <= SEED_EXHAUSTED_RTOL * v_norm {
            book.seed_exhausted(r_norm, v_norm);
            break;
        }
    }
    Ok(book.finish(Method::Cocr, k, rec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convergence::StoppingRule;
    use crate::linalg::c64;

    fn re(v: &[f64]) -> Vec<C64> {
        v.iter().map(|&x| c64(x, 0.0)).collect()
    }

    fn config(seed: SeedChoice, max_iter: usize) -> SeededShiftedRunConfig {
        SeededShiftedRunConfig {
            seed,
            options: SolveOptions {
                stopping: StoppingRule::Never,
                max_iter,
                lag: 1,
                history: true,
            },
        }
    }

    #[test]
    fn seed_choice() {
        let shifts = [c64(1.0, 0.1), c64(0.0, -2.0), c64(3.0, 1.0)];
        assert_eq!(
            SeedChoice::LargestImaginary.resolve(&shifts).unwrap(),
            shifts[1]
        );
        assert_eq!(SeedChoice::Index(2).resolve(&shifts).unwrap(), shifts[2]);
        assert!(SeedChoice::Index(3).resolve(&shifts).is_err());
        assert_eq!(
            SeedChoice::Value(c64(0.0, 0.0)).resolve(&shifts).unwrap(),
            c64(0.0, 0.0)
        );
    }

    #[test]
    fn diag_two_cocg_and_cocr() {
        let a = SparseHermitianMatrix::diagonal(&[1.0, 2.0]);
        let s = 1.0 / 2f64.sqrt();
        let v = re(&[s, s]);
        let cfg = config(SeedChoice::Value(c64(0.0, 0.0)), 2);
        for run in [cocg_run, cocr_run] {
            let res = run(&a, &v, &[c64(3.0, 0.0)], &cfg).unwrap();
            let out = &res.shifts[0];
            assert!(out.history.len() <= 2);
            assert!(
                (out.value - c64(0.75, 0.0)).norm() < 1e-14,
                "{:?}",
                out.value
            );
        }
    }

    #[test]
    fn shift_equal_to_seed_keeps_pi_at_one() {
        let diag: Vec<f64> = (1..=12).map(|j| j as f64 * 0.5).collect();
        let a = SparseHermitianMatrix::diagonal(&diag);
        let v = re(&[1.0; 12]);
        let z = c64(0.5, 1.0);
        let res = cocg_run(&a, &v, &[z], &config(SeedChoice::Index(0), 8)).unwrap();
        for rec in &res.shifts[0].history {
            assert!((rec.pivot.unwrap() - c64(1.0, 0.0)).norm() < 1e-13);
        }
    }

    #[test]
    fn rejects_complex_hermitian() {
        let i = c64(0.0, 1.0);
        let zero = c64(0.0, 0.0);
        let h = SparseHermitianMatrix::from_dense(&[vec![zero, i], vec![-i, zero]]).unwrap();
        let cfg = SeededShiftedRunConfig::default();
        assert!(matches!(
            cocg_run(&h, &re(&[1.0, 0.0]), &[i], &cfg),
            Err(Error::NotRealSymmetric)
        ));
        assert!(matches!(
            cocr_run(&h, &re(&[1.0, 0.0]), &[i], &cfg),
            Err(Error::NotRealSymmetric)
        ));
    }

    #[test]
    fn cocr_first_step_ignores_previous_direction() {
        // beta_{-1} = 0: R_1 = alpha_0^{(i)} v^H r_0 regardless of p_{-1}.
        let mut cell = CollinearShiftScalars::<C64>::new(c64(2.0, 1.0), c64(123.0, 0.0));
        let alpha = c64(0.4, 0.0);
        cell.cocr_update(
            c64(0.0, 0.0),
            alpha,
            c64(0.0, 0.0),
            c64(1.0, 0.0),
            c64(0.0, 0.0),
        );
        let pi1 = c64(1.0, 0.0) + alpha * c64(2.0, 1.0);
        assert!((cell.value() - alpha / pi1).norm() < 1e-15);
    }

    #[test]
    fn seed_breakdown_is_reported() {
        // v^T (z_s I - A) v = 0 for z_s = 0, A = diag(1, -1), v = (1, 1).
        let a = SparseHermitianMatrix::diagonal(&[1.0, -1.0]);
        let v = re(&[1.0, 1.0]);
        let res = cocg_run(
            &a,
            &v,
            &[c64(0.0, 1.0)],
            &config(SeedChoice::Value(c64(0.0, 0.0)), 5),
        )
        .unwrap();
        assert_eq!(res.shifts[0].status, ShiftStatus::SeedBreakdown);
        let res = cocr_run(
            &a,
            &v,
            &[c64(0.0, 1.0)],
            &config(SeedChoice::Value(c64(0.0, 0.0)), 5),
        )
        .unwrap();
        assert_eq!(res.shifts[0].status, ShiftStatus::SeedBreakdown);
    }
}
