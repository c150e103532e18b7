//! Hermitian Lanczos iteration without reorthogonalization.
//!
//! Only the two most recent basis vectors are kept. The coefficient stream
//! `(alpha_k, beta_k)` defines the Jacobi matrix `T_{k,k}` that the shifted
//! solvers and the error estimators consume.

use crate::error::{Error, Result};
use crate::linalg::{all_finite, axpy_real_in_place, dotc, norm, SparseHermitianMatrix, C64};

/// Relative happy-breakdown threshold; `beta_k <= HAPPY_REL_TOL * ||A||_F`
/// ends the iteration.
pub const HAPPY_REL_TOL: f64 = 1e-14;

/// Diagonal (`alpha`) and off-diagonal (`beta`) entries of the Jacobi matrix.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LanczosCoefficients {
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
}

impl LanczosCoefficients {
    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    /// Leading `k x k` section.
    pub fn truncated(&self, k: usize) -> LanczosCoefficients {
        LanczosCoefficients {
            alpha: self.alpha[..k].to_vec(),
            beta: self.beta[..k.saturating_sub(1).min(self.beta.len())].to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepOutcome {
    /// A new basis vector was produced: `beta_k` and `alpha_{k+1}`.
    Continue { beta: f64, alpha: f64 },
    /// `beta_k` fell below the happy-breakdown threshold at iteration `k`.
    InvariantSubspace { k: usize },
}

#[derive(Debug, Clone)]
pub struct Lanczos<'a> {
    a: &'a SparseHermitianMatrix,
    k: usize,
    v_prev: Vec<C64>,
    v_curr: Vec<C64>,
    u: Vec<C64>,
    coeffs: LanczosCoefficients,
    vnorm2: f64,
    tol_happy: f64,
    exhausted: bool,
}

impl<'a> Lanczos<'a> {
    /// `v_1 = v/||v||`, `u = A v_1`, `alpha_1 = re(u^H v_1)`.
    pub fn new(a: &'a SparseHermitianMatrix, v: &[C64]) -> Result<Self> {
        if !a.is_hermitian() {
            let check = a.hermitian_check(crate::linalg::DEFAULT_TOL_HERM);
            return Err(Error::NotHermitian {
                max_asymmetry: check.max_asymmetry,
            });
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
        let vnorm = norm(v);
        if vnorm == 0.0 {
            return Err(Error::ZeroVector);
        }
        let v_curr: Vec<C64> = v.iter().map(|x| x / vnorm).collect();
        let mut u = vec![C64::new(0.0, 0.0); a.n()];
        a.matvec_into(&v_curr, &mut u);
        let alpha = dotc(&u, &v_curr).re;
        if !alpha.is_finite() {
            return Err(Error::NonFinite("Lanczos alpha"));
        }
        Ok(Lanczos {
            a,
            k: 1,
            v_prev: vec![C64::new(0.0, 0.0); a.n()],
            v_curr,
            u,
            coeffs: LanczosCoefficients {
                alpha: vec![alpha],
                beta: Vec::new(),
            },
            vnorm2: vnorm * vnorm,
            tol_happy: HAPPY_REL_TOL * a.frobenius_norm(),
            exhausted: false,
        })
    }

    /// Advances from `k` to `k + 1`, or reports an invariant subspace.
    pub fn step(&mut self) -> Result<StepOutcome> {
        if self.exhausted {
            return Ok(StepOutcome::InvariantSubspace { k: self.k });
        }
        let alpha = *self.coeffs.alpha.last().expect("alpha_1 set at init");
        axpy_real_in_place(-alpha, &self.v_curr, &mut self.u);
        let beta = norm(&self.u);
        if !beta.is_finite() {
            return Err(Error::NonFinite("Lanczos vector"));
        }
        if beta <= self.tol_happy {
            self.exhausted = true;
            return Ok(StepOutcome::InvariantSubspace { k: self.k });
        }
        // v_prev <- v_{k+1} = u / beta, then swap so v_curr = v_{k+1}.
        let inv = 1.0 / beta;
        for (p, ui) in self.v_prev.iter_mut().zip(&self.u) {
            *p = ui * inv;
        }
        std::mem::swap(&mut self.v_prev, &mut self.v_curr);
        self.a.matvec_into(&self.v_curr, &mut self.u);
        axpy_real_in_place(-beta, &self.v_prev, &mut self.u);
        let alpha_next = dotc(&self.u, &self.v_curr).re;
        if !alpha_next.is_finite() {
            return Err(Error::NonFinite("Lanczos alpha"));
        }
        self.coeffs.beta.push(beta);
        self.coeffs.alpha.push(alpha_next);
        self.k += 1;
        Ok(StepOutcome::Continue {
            beta,
            alpha: alpha_next,
        })
    }

    /// Index of the newest basis vector.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn coefficients(&self) -> &LanczosCoefficients {
        &self.coeffs
    }

    pub fn into_coefficients(self) -> LanczosCoefficients {
        self.coeffs
    }

    /// `v^H v` of the starting vector.
    pub fn vnorm2(&self) -> f64 {
        self.vnorm2
    }

    /// Current basis vector `v_k`.
    pub fn basis_vector(&self) -> &[C64] {
        &self.v_curr
    }

    /// Previous basis vector `v_{k-1}` (zero for `k = 1`).
    pub fn previous_basis_vector(&self) -> &[C64] {
        &self.v_prev
    }

    pub fn tol_happy(&self) -> f64 {
        self.tol_happy
    }

    pub fn is_exhausted(&self) -> bool {
        self.exhausted
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c64;

    fn re(v: &[f64]) -> Vec<C64> {
        v.iter().map(|&x| c64(x, 0.0)).collect()
    }

    #[test]
    fn diag_two_example() {
        let a = SparseHermitianMatrix::diagonal(&[1.0, 2.0]);
        let s = 1.0 / 2f64.sqrt();
        let mut l = Lanczos::new(&a, &re(&[s, s])).unwrap();
        assert!((l.coefficients().alpha[0] - 1.5).abs() < 1e-15);
        assert!((l.vnorm2() - 1.0).abs() < 1e-15);
        match l.step().unwrap() {
            StepOutcome::Continue { beta, alpha } => {
                assert!((beta - 0.5).abs() < 1e-15);
                assert!((alpha - 1.5).abs() < 1e-15);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(l.step().unwrap(), StepOutcome::InvariantSubspace { k: 2 });
        // Stays exhausted.
        assert_eq!(l.step().unwrap(), StepOutcome::InvariantSubspace { k: 2 });
    }

    #[test]
    fn identity_is_invariant_at_first_step() {
        let a = SparseHermitianMatrix::identity(3);
        let mut l = Lanczos::new(&a, &[c64(0.3, 0.1), c64(-1.0, 0.2), c64(0.0, 0.7)]).unwrap();
        assert!((l.coefficients().alpha[0] - 1.0).abs() < 1e-15);
        assert_eq!(l.step().unwrap(), StepOutcome::InvariantSubspace { k: 1 });
    }

    #[test]
    fn eigenvector_start() {
        let a = SparseHermitianMatrix::diagonal(&[1.0, 2.0, 3.0]);
        let mut l = Lanczos::new(&a, &re(&[1.0, 0.0, 0.0])).unwrap();
        assert_eq!(l.step().unwrap(), StepOutcome::InvariantSubspace { k: 1 });
    }

    #[test]
    fn zero_diagonal_alpha() {
        let z = c64(0.0, 0.0);
        let i = c64(0.0, 1.0);
        let a = SparseHermitianMatrix::from_dense(&[vec![z, i], vec![-i, z]]).unwrap();
        let l = Lanczos::new(&a, &re(&[1.0, 0.0])).unwrap();
        assert_eq!(l.coefficients().alpha[0], 0.0);
    }

    #[test]
    fn init_errors() {
        let a = SparseHermitianMatrix::identity(2);
        assert!(matches!(
            Lanczos::new(&a, &re(&[0.0, 0.0])),
            Err(Error::ZeroVector)
        ));
        assert!(matches!(
            Lanczos::new(&a, &re(&[1.0])),
            Err(Error::DimensionMismatch { .. })
        ));
        let z = c64(0.0, 0.0);
        let i = c64(0.0, 1.0);
        let sym = SparseHermitianMatrix::from_dense(&[vec![z, i], vec![i, z]]).unwrap();
        assert!(matches!(
            Lanczos::new(&sym, &re(&[1.0, 0.0])),
            Err(Error::NotHermitian { .. })
        ));
    }
}
