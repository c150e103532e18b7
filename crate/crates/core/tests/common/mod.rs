#![allow(dead_code)]

use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use resolvent_quad::harness::generate_unit_circle_shifts;
use resolvent_quad::oracle::DenseHermitianMatrix;
use resolvent_quad::{SparseHermitianMatrix, C64};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Sparse Hermitian matrix with about `per_row` off-diagonal entries per row,
/// scaled so the largest absolute row sum is 1 (hence `||A||_2 <= 1`).
pub fn random_hermitian(
    rng: &mut ChaCha8Rng,
    n: usize,
    real: bool,
    per_row: usize,
) -> SparseHermitianMatrix {
    let mut t = Vec::new();
    for i in 0..n {
        t.push((i, i, C64::new(rng.gen_range(-1.0..1.0), 0.0)));
        for _ in 0..per_row / 2 {
            let j = rng.gen_range(0..n);
            if j == i {
                continue;
            }
            let im = if real { 0.0 } else { rng.gen_range(-1.0..1.0) };
            let x = C64::new(rng.gen_range(-1.0..1.0), im);
            t.push((i, j, x));
            t.push((j, i, x.conj()));
        }
    }
    let a = SparseHermitianMatrix::from_triplets(n, &t).unwrap();
    let mut row_sum = vec![0.0f64; n];
    for (i, r) in row_sum.iter_mut().enumerate() {
        for p in a.row_ptr()[i]..a.row_ptr()[i + 1] {
            *r += a.values()[p].norm();
        }
    }
    let s = row_sum.iter().copied().fold(0.0, f64::max);
    let scaled: Vec<C64> = a.values().iter().map(|v| v / s).collect();
    SparseHermitianMatrix::from_csr(n, a.row_ptr().to_vec(), a.col_idx().to_vec(), scaled).unwrap()
}

pub fn random_vector(rng: &mut ChaCha8Rng, n: usize, complex: bool) -> Vec<C64> {
    (0..n)
        .map(|_| {
            let im = if complex {
                rng.gen_range(-1.0..1.0)
            } else {
                0.0
            };
            C64::new(rng.gen_range(-1.0..1.0), im)
        })
        .collect()
}

pub struct Case {
    pub a: SparseHermitianMatrix,
    pub dense: DenseHermitianMatrix,
    pub v: Vec<C64>,
    pub shifts: Vec<C64>,
}

/// 50 random problems, `n` in 20..=200, alternating real symmetric and
/// complex Hermitian matrices, complex starting vectors, 16 unit-circle
/// shifts.
pub fn oracle_cases() -> Vec<Case> {
    let mut r = rng(20_240_611);
    let shifts = generate_unit_circle_shifts(16).unwrap();
    (0..50)
        .map(|c| {
            let n = r.gen_range(20..=200);
            let a = random_hermitian(&mut r, n, c % 2 == 0, 8);
            let dense = DenseHermitianMatrix::from_sparse(&a).unwrap();
            let v = random_vector(&mut r, n, true);
            Case {
                a,
                dense,
                v,
                shifts: shifts.clone(),
            }
        })
        .collect()
}

pub fn rel_err(x: C64, reference: C64) -> f64 {
    (x - reference).norm() / reference.norm()
}

/// `$MHD1280B_PATH`, else `data/mhd1280b.mtx[.gz]` at the workspace root.
pub fn mhd1280b_path() -> Option<PathBuf> {
    if let Some(p) = std::env::var_os("MHD1280B_PATH") {
        let p = PathBuf::from(p);
        return p.exists().then_some(p);
    }
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data");
    ["mhd1280b.mtx", "mhd1280b.mtx.gz"]
        .iter()
        .map(|f| root.join(f))
        .find(|p| p.exists())
}
