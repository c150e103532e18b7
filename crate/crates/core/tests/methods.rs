mod common;

use rand::Rng;

use common::{random_hermitian, random_vector, rel_err, rng};
use resolvent_quad::cg_variants::{cocg_run, cocr_run, SeedChoice, SeededShiftedRunConfig};
use resolvent_quad::convergence::{Method, ShiftStatus, SolveOptions, StoppingRule};
use resolvent_quad::harness::experiment::run_method;
use resolvent_quad::harness::generate_unit_circle_shifts;
use resolvent_quad::oracle::{dense_resolvent_quadform, DenseHermitianMatrix};
use resolvent_quad::{minres_run, run_quadratic_forms, C64};

fn options(n: usize, history: bool) -> SolveOptions {
    SolveOptions {
        max_iter: 20 * n,
        history,
        ..Default::default()
    }
}

#[test]
fn all_methods_agree_on_real_symmetric_problems() {
    let mut r = rng(11);
    let shifts = generate_unit_circle_shifts(8).unwrap();
    for _ in 0..10 {
        let n = r.gen_range(30..=120);
        let a = random_hermitian(&mut r, n, true, 6);
        let v = random_vector(&mut r, n, false);
        let base = run_quadratic_forms(&a, &v, &shifts, &options(n, false)).unwrap();
        assert!(base.all_converged());
        for m in [Method::Cocg, Method::Cocr, Method::Minres] {
            let res = run_method(m, &a, &v, &shifts, &options(n, false), None).unwrap();
            for (s, b) in res.shifts.iter().zip(&base.shifts) {
                assert!(s.status.is_success(), "{m} {}", s.status);
                assert!(
                    rel_err(s.value, b.value) < 1e-8,
                    "{m} {:e}",
                    rel_err(s.value, b.value)
                );
            }
        }
    }
}

#[test]
fn cocg_with_complex_vector_matches_oracle() {
    let mut r = rng(12);
    let shifts = generate_unit_circle_shifts(16).unwrap();
    for _ in 0..5 {
        let n = r.gen_range(30..=100);
        let a = random_hermitian(&mut r, n, true, 6);
        let v = random_vector(&mut r, n, true);
        let dense = DenseHermitianMatrix::from_sparse(&a).unwrap();
        let res = cocg_run(
            &a,
            &v,
            &shifts,
            &SeededShiftedRunConfig {
                options: options(n, false),
                ..Default::default()
            },
        )
        .unwrap();
        for s in &res.shifts {
            let x = dense_resolvent_quadform(&dense, &v, s.z).unwrap();
            assert!(rel_err(s.value, x) < 1e-8);
        }
    }
}

#[test]
fn minres_handles_complex_hermitian() {
    let mut r = rng(13);
    let shifts = generate_unit_circle_shifts(16).unwrap();
    let n = 80;
    let a = random_hermitian(&mut r, n, false, 6);
    let v = random_vector(&mut r, n, true);
    let dense = DenseHermitianMatrix::from_sparse(&a).unwrap();
    let res = minres_run(&a, &v, &shifts, &options(n, true)).unwrap();
    for s in &res.shifts {
        assert!(s.status.is_success());
        let x = dense_resolvent_quadform(&dense, &v, s.z).unwrap();
        assert!(rel_err(s.value, x) < 1e-8);
        let res_norms: Vec<f64> = s.history.iter().filter_map(|h| h.residual).collect();
        assert!(res_norms.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12)));
    }
}

/// `pi_k` of every shift follows from the seed scalars alone.
#[test]
fn pi_recomputed_from_seed_recurrence() {
    let mut r = rng(14);
    let n = 60;
    let a = random_hermitian(&mut r, n, true, 6);
    let v = random_vector(&mut r, n, true);
    let shifts = generate_unit_circle_shifts(8).unwrap();
    let config = SeededShiftedRunConfig {
        seed: SeedChoice::Index(2),
        options: SolveOptions {
            stopping: StoppingRule::Never,
            max_iter: 40,
            lag: 5,
            history: true,
        },
    };
    for res in [
        cocg_run(&a, &v, &shifts, &config).unwrap(),
        cocr_run(&a, &v, &shifts, &config).unwrap(),
    ] {
        let seed = res.seed.as_ref().unwrap();
        let one = C64::new(1.0, 0.0);
        for s in &res.shifts {
            let (mut pi_prev, mut pi) = (one, one);
            for (k, h) in s.history.iter().enumerate() {
                let alpha = seed.alpha[k];
                let gamma = if k == 0 {
                    C64::new(0.0, 0.0)
                } else {
                    seed.beta[k - 1] / seed.alpha[k - 1] * alpha
                };
                let shift = alpha * (s.z - seed.seed);
                let diag = match res.method {
                    Method::Cocg => one + shift + gamma,
                    _ => one + gamma + shift,
                };
                let next = diag * pi - gamma * pi_prev;
                pi_prev = pi;
                pi = next;
                let stored = h.pivot.unwrap();
                assert_eq!(
                    (stored.re.to_bits(), stored.im.to_bits()),
                    (pi.re.to_bits(), pi.im.to_bits()),
                    "{} k={}",
                    res.method,
                    k + 1
                );
            }
        }
        let seed_shift = &res.shifts[2];
        assert!(seed_shift
            .history
            .iter()
            .all(|h| (h.pivot.unwrap() - one).norm() < 1e-12));
    }
}

#[test]
fn seed_choice_does_not_change_values() {
    let mut r = rng(15);
    let n = 50;
    let a = random_hermitian(&mut r, n, true, 6);
    let v = random_vector(&mut r, n, false);
    let shifts = generate_unit_circle_shifts(6).unwrap();
    let run = |seed| {
        cocr_run(
            &a,
            &v,
            &shifts,
            &SeededShiftedRunConfig {
                seed,
                options: options(n, false),
            },
        )
        .unwrap()
    };
    let x = run(SeedChoice::LargestImaginary);
    let y = run(SeedChoice::Index(0));
    for (p, q) in x.shifts.iter().zip(&y.shifts) {
        assert!(rel_err(p.value, q.value) < 1e-8);
    }
}

#[test]
fn lanczos_real_shift_inside_spectrum_is_not_a_breakdown_generically() {
    let mut r = rng(16);
    let n = 40;
    let a = random_hermitian(&mut r, n, true, 6);
    let v = random_vector(&mut r, n, false);
    let res = run_quadratic_forms(&a, &v, &[C64::new(0.01, 0.0)], &options(n, false)).unwrap();
    assert_ne!(res.shifts[0].status, ShiftStatus::Breakdown);
}
