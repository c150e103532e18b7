//! Experiment engine: loads the problem, computes references, runs each
//! method and collects the results.

use std::time::Instant;

use super::config::{ExperimentConfig, ReferenceMode};
use super::shifts::resolve_shifts;
use crate::cg_variants::{cocg_run, cocr_run, SeedChoice, SeededShiftedRunConfig};
use crate::convergence::{Method, QuadFormResult, SolveOptions, StoppingRule};
use crate::error::{Error, Result};
use crate::linalg::{SparseHermitianMatrix, C64};
use crate::mmio::read_matrix_market;
use crate::oracle::{
    condition_number, spectral_quadform, DenseHermitianMatrix, SpectralDecomposition,
    TridiagonalReduction,
};
use crate::shifted_lanczos::run_quadratic_forms;
use crate::shifted_minres::minres_run;

#[derive(Debug, Clone)]
pub struct Problem {
    pub matrix: SparseHermitianMatrix,
    pub vector: Vec<C64>,
    pub shifts: Vec<C64>,
}

/// Reference values plus, for the spectral mode, the extreme eigenvalues and
/// `kappa(z_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Reference {
    pub values: Vec<C64>,
    pub spectrum: Option<(f64, f64)>,
    pub condition_numbers: Option<Vec<f64>>,
}

pub fn compute_reference(
    a: &SparseHermitianMatrix,
    v: &[C64],
    shifts: &[C64],
    mode: ReferenceMode,
) -> Result<Option<Reference>> {
    match mode {
        ReferenceMode::None => Ok(None),
        ReferenceMode::Dense => {
            let dense = DenseHermitianMatrix::from_sparse(a)?;
            let red = TridiagonalReduction::new(&dense, v)?;
            let values = shifts
                .iter()
                .map(|&z| red.quadform(z))
                .collect::<Result<Vec<_>>>()?;
            Ok(Some(Reference {
                values,
                spectrum: None,
                condition_numbers: None,
            }))
        }
        ReferenceMode::Spectral => {
            let dense = DenseHermitianMatrix::from_sparse(a)?;
            let measure = SpectralDecomposition::compute(&dense)?.measure(v)?;
            let values = shifts
                .iter()
                .map(|&z| spectral_quadform(&measure, z))
                .collect::<Result<Vec<_>>>()?;
            Ok(Some(Reference {
                values,
                spectrum: Some((measure.lambda_min(), measure.lambda_max())),
                condition_numbers: Some(
                    shifts
                        .iter()
                        .map(|&z| condition_number(&measure.eigenvalues, z))
                        .collect(),
                ),
            }))
        }
    }
}

#[derive(Debug, Clone)]
pub struct MethodReport {
    pub method: Method,
    /// Why the method did not run.
    pub skipped: Option<String>,
    pub result: Option<QuadFormResult>,
    /// Iteration at which the last shift stopped.
    pub iterations: usize,
    pub wall_time_s: f64,
    /// Largest final relative error over shifts, when a reference exists.
    pub max_rel_err: Option<f64>,
}

impl MethodReport {
    pub fn converged(&self) -> bool {
        self.result
            .as_ref()
            .is_some_and(QuadFormResult::all_converged)
    }

    /// Every shift ended in a numerical failure.
    pub fn all_failed(&self) -> bool {
        self.result
            .as_ref()
            .is_some_and(|r| r.shifts.iter().all(|s| s.status.is_failure()))
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub config: ExperimentConfig,
    pub n: usize,
    pub nnz: usize,
    pub shifts: Vec<C64>,
    pub reference: Option<Reference>,
    pub methods: Vec<MethodReport>,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn method(&self, m: Method) -> Option<&MethodReport> {
        self.methods.iter().find(|r| r.method == m)
    }

    /// Every method that ran failed on every shift.
    pub fn all_failed(&self) -> bool {
        let ran: Vec<&MethodReport> = self.methods.iter().filter(|m| m.result.is_some()).collect();
        !ran.is_empty() && ran.iter().all(|m| m.all_failed())
    }
}

pub fn solve_options(config: &ExperimentConfig, reference: Option<&Reference>) -> SolveOptions {
    let stopping = match reference {
        Some(r) => StoppingRule::TrueError {
            rtol: config.rtol,
            reference: r.values.clone(),
        },
        None => StoppingRule::Estimate { rtol: config.rtol },
    };
    SolveOptions {
        stopping,
        max_iter: config.max_iter,
        lag: config.lag,
        history: config.history,
    }
}

pub fn run_method(
    method: Method,
    a: &SparseHermitianMatrix,
    v: &[C64],
    shifts: &[C64],
    options: &SolveOptions,
    seed_shift: Option<usize>,
) -> Result<QuadFormResult> {
    let seeded = || SeededShiftedRunConfig {
        seed: seed_shift.map_or(SeedChoice::LargestImaginary, SeedChoice::Index),
        options: options.clone(),
    };
    match method {
        Method::Lanczos => run_quadratic_forms(a, v, shifts, options),
        Method::Cocg => cocg_run(a, v, shifts, &seeded()),
        Method::Cocr => cocr_run(a, v, shifts, &seeded()),
        Method::Minres => minres_run(a, v, shifts, options),
    }
}

/// Runs every configured method on an in-memory problem.
pub fn run_problem(problem: &Problem, config: &ExperimentConfig) -> Result<Report> {
    config.validate()?;
    let a = &problem.matrix;
    if problem.shifts.is_empty() {
        return Err(Error::EmptyShifts);
    }
    let mut warnings = Vec::new();
    let applicable: Vec<Method> = config
        .methods
        .iter()
        .copied()
        .filter(|m| {
            let ok = !m.requires_real_symmetric() || a.is_real_symmetric();
            if !ok {
                warnings.push(format!("{m}: skipped, matrix is not real symmetric"));
            }
            ok
        })
        .collect();
    if applicable.is_empty() {
        return Err(Error::InvalidParameter(
            "no configured method applies to this matrix".into(),
        ));
    }
    let reference = compute_reference(a, &problem.vector, &problem.shifts, config.reference)?;
    let options = solve_options(config, reference.as_ref());

    let mut methods = Vec::new();
    for &m in &config.methods {
        if !applicable.contains(&m) {
            methods.push(MethodReport {
                method: m,
                skipped: Some("matrix is not real symmetric".into()),
                result: None,
                iterations: 0,
                wall_time_s: 0.0,
                max_rel_err: None,
            });
            continue;
        }
        let start = Instant::now();
        let result = run_method(
            m,
            a,
            &problem.vector,
            &problem.shifts,
            &options,
            config.seed_shift,
        )?;
        let wall_time_s = start.elapsed().as_secs_f64();
        let max_rel_err = reference.as_ref().map(|r| {
            result
                .shifts
                .iter()
                .zip(&r.values)
                .map(|(s, x)| (s.value - x).norm() / x.norm())
                .fold(0.0, f64::max)
        });
        methods.push(MethodReport {
            method: m,
            skipped: None,
            iterations: result.max_shift_iterations(),
            result: Some(result),
            wall_time_s,
            max_rel_err,
        });
    }
    Ok(Report {
        config: config.clone(),
        n: a.n(),
        nnz: a.nnz(),
        shifts: problem.shifts.clone(),
        reference,
        methods,
        warnings,
    })
}

/// Loads the matrix named in the configuration and runs the experiment.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Report> {
    config.validate()?;
    let path = config
        .matrix
        .as_ref()
        .ok_or_else(|| Error::InvalidParameter("no matrix file given".into()))?;
    let matrix = read_matrix_market(path)?;
    let vector = config.vector.build(matrix.n())?;
    let shifts = resolve_shifts(&config.shifts, Some(&matrix))?;
    run_problem(
        &Problem {
            matrix,
            vector,
            shifts,
        },
        config,
    )
}
