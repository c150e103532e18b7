mod common;

use proptest::prelude::*;
use rand::Rng;

use common::{random_hermitian, random_vector, rel_err, rng};
use resolvent_quad::oracle::{
    dense_resolvent_quadform, shifted_determinant_sequence, spectral_quadform, thomas_pivots,
    tridiag_resolvent_entry, DenseHermitianMatrix, SpectralDecomposition, TridiagonalReduction,
};
use resolvent_quad::C64;

#[test]
fn three_references_agree() {
    let mut r = rng(21);
    for trial in 0..8 {
        let n = r.gen_range(10..=150);
        let a = random_hermitian(&mut r, n, trial % 2 == 0, 6);
        let v = random_vector(&mut r, n, true);
        let dense = DenseHermitianMatrix::from_sparse(&a).unwrap();
        let eig = SpectralDecomposition::compute(&dense).unwrap();
        assert!(eig.max_residual(&dense) < 1e-12 * n as f64);
        let measure = eig.measure(&v).unwrap();
        let total: f64 = measure.weights.iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
        let red = TridiagonalReduction::new(&dense, &v).unwrap();
        for z in [
            C64::new(0.3, 0.5),
            C64::new(-2.0, 0.0),
            C64::new(0.0, -1e-3),
        ] {
            let lu = dense_resolvent_quadform(&dense, &v, z).unwrap();
            assert!(rel_err(spectral_quadform(&measure, z).unwrap(), lu) < 1e-10);
            assert!(rel_err(red.quadform(z).unwrap(), lu) < 1e-10);
        }
    }
}

fn jacobi() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (1usize..12).prop_flat_map(|k| {
        (
            prop::collection::vec(-2.0f64..2.0, k),
            prop::collection::vec(0.1f64..1.5, k.saturating_sub(1)),
        )
    })
}

proptest! {
    #[test]
    fn pivots_are_determinant_ratios((alpha, beta) in jacobi(), re in -3.0f64..3.0, im in 0.05f64..2.0) {
        let z = C64::new(re, im);
        let k = alpha.len();
        let piv = thomas_pivots(&alpha, &beta, z).unwrap();
        let det = shifted_determinant_sequence(&alpha, &beta, z, k).unwrap();
        let mut prev = C64::new(1.0, 0.0);
        for (p, d) in piv.iter().zip(&det) {
            prop_assert!(rel_err(*p, d / prev) < 1e-10);
            prev = *d;
        }
    }

    #[test]
    fn resolvent_entries_are_symmetric((alpha, beta) in jacobi(), im in 0.05f64..2.0) {
        let z = C64::new(0.1, im);
        let k = alpha.len();
        let a = tridiag_resolvent_entry(&alpha, &beta, z, 1, k).unwrap();
        let b = tridiag_resolvent_entry(&alpha, &beta, z, k, 1).unwrap();
        prop_assert!(rel_err(a, b) < 1e-12);
    }
}
