//! Shifted Krylov methods for resolvent quadratic forms `v^H (z I - A)^{-1} v`
//! over many shifts `z` at once.

pub mod cg_variants;
pub mod convergence;
pub mod error;
pub mod error_estimate;
pub mod harness;
pub mod lanczos;
pub mod linalg;
pub mod mmio;
pub mod opcount;
pub mod oracle;
pub mod shifted_lanczos;
pub mod shifted_minres;

pub use cg_variants::{cocg_run, cocr_run, SeedChoice, SeededShiftedRunConfig};
pub use convergence::{
    IterationRecord, Method, QuadFormResult, ShiftOutcome, ShiftStatus, SolveOptions, StoppingRule,
};
pub use error::{Error, Result};
pub use lanczos::{Lanczos, LanczosCoefficients};
pub use linalg::{SparseHermitianMatrix, C64};
pub use shifted_lanczos::{bilinear_form, run_quadratic_forms};
pub use shifted_minres::{givens, minres_run, GivensRotation};
