//! Brute-force reference values: dense shifted solves, spectral expansions,
//! tridiagonal resolvent entries and determinant recursions.
//!
//! Nothing here is used by the solvers themselves.

use nalgebra::{DMatrix, DVector, SymmetricEigen, SymmetricTridiagonal};

use crate::error::{Error, Result};
use crate::linalg::{norm, SparseHermitianMatrix, C64, DEFAULT_TOL_HERM};

/// Largest dimension accepted by the dense oracles.
pub const ORACLE_MAX_N: usize = 2000;

/// Dense Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseHermitianMatrix {
    m: DMatrix<C64>,
}

impl DenseHermitianMatrix {
    /// Row-major entries; rejected unless Hermitian within `tol_herm`
    /// relative to the largest entry.
    pub fn from_rows(rows: &[Vec<C64>], tol_herm: f64) -> Result<Self> {
        let n = rows.len();
        check_size(n)?;
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    actual: row.len(),
                });
            }
        }
        let m = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
        let scale = m.iter().fold(0.0f64, |acc, x| acc.max(x.norm()));
        let mut asym = 0.0f64;
        for i in 0..n {
            for j in i..n {
                asym = asym.max((m[(i, j)] - m[(j, i)].conj()).norm());
            }
        }
        if asym > tol_herm * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::NotHermitian {
                max_asymmetry: asym,
            });
        }
        Ok(DenseHermitianMatrix { m })
    }

    pub fn from_sparse(a: &SparseHermitianMatrix) -> Result<Self> {
        let n = a.n();
        check_size(n)?;
        if !a.is_hermitian() {
            let c = a.hermitian_check(DEFAULT_TOL_HERM);
            return Err(Error::NotHermitian {
                max_asymmetry: c.max_asymmetry,
            });
        }
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            for p in a.row_ptr()[i]..a.row_ptr()[i + 1] {
                m[(i, a.col_idx()[p])] += a.values()[p];
            }
        }
        Ok(DenseHermitianMatrix { m })
    }

    pub fn n(&self) -> usize {
        self.m.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.m[(i, j)]
    }

    pub fn as_matrix(&self) -> &DMatrix<C64> {
        &self.m
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.m.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn matvec(&self, x: &[C64]) -> Result<Vec<C64>> {
        check_vec(self.n(), x)?;
        Ok((&self.m * DVector::from_column_slice(x))
            .as_slice()
            .to_vec())
    }
}

fn check_size(n: usize) -> Result<()> {
    if n > ORACLE_MAX_N {
        return Err(Error::TooLarge {
            n,
            max: ORACLE_MAX_N,
        });
    }
    Ok(())
}

fn check_vec(n: usize, v: &[C64]) -> Result<()> {
    if v.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: v.len(),
        });
    }
    Ok(())
}

/// Solves `m x = b` in place by Gaussian elimination with partial pivoting.
/// `m` is row-major `n x n`. A pivot below `tol` is reported as singular.
fn lu_solve_in_place(n: usize, m: &mut [C64], b: &mut [C64], tol: f64) -> Result<()> {
    for k in 0..n {
        let (p, pmax) = (k..n)
            .map(|i| (i, m[i * n + k].norm()))
            .fold(
                (k, -1.0),
                |best, cur| if cur.1 > best.1 { cur } else { best },
            );
        if pmax <= tol {
            return Err(Error::Singular { row: k });
        }
        if p != k {
            for j in 0..n {
                m.swap(k * n + j, p * n + j);
            }
            b.swap(k, p);
        }
        let (head, tail) = m.split_at_mut((k + 1) * n);
        let pivot_row = &head[k * n..];
        let inv = C64::new(1.0, 0.0) / pivot_row[k];
        for (off, row) in tail.chunks_exact_mut(n).enumerate() {
            let l = row[k] * inv;
            if l == C64::new(0.0, 0.0) {
                continue;
            }
            row[k] = C64::new(0.0, 0.0);
            for j in k + 1..n {
                row[j] -= l * pivot_row[j];
            }
            b[k + 1 + off] -= l * b[k];
        }
    }
    for k in (0..n).rev() {
        let mut s = b[k];
        for j in k + 1..n {
            s -= m[k * n + j] * b[j];
        }
        b[k] = s / m[k * n + k];
    }
    Ok(())
}

/// `v^H (zI - A)^{-1} v` by LU with partial pivoting on `zI - A`.
pub fn dense_resolvent_quadform(a: &DenseHermitianMatrix, v: &[C64], z: C64) -> Result<C64> {
    let n = a.n();
    check_vec(n, v)?;
    let mut m = vec![C64::new(0.0, 0.0); n * n];
    let mut scale = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let e = if i == j {
                z - a.m[(i, j)]
            } else {
                -a.m[(i, j)]
            };
            scale = scale.max(e.norm());
            m[i * n + j] = e;
        }
    }
    let mut x = v.to_vec();
    lu_solve_in_place(n, &mut m, &mut x, n as f64 * f64::EPSILON * scale)?;
    Ok(v.iter().zip(&x).map(|(vi, xi)| vi.conj() * xi).sum())
}

/// Householder reduction `A = Q T Q^H` with `w = Q^H v` kept, so that each
/// shift costs one pivoted tridiagonal solve.
#[derive(Debug, Clone)]
pub struct TridiagonalReduction {
    diag: Vec<f64>,
    off: Vec<f64>,
    w: Vec<C64>,
    scale: f64,
}

impl TridiagonalReduction {
    pub fn new(a: &DenseHermitianMatrix, v: &[C64]) -> Result<Self> {
        let n = a.n();
        check_vec(n, v)?;
        let scale = a.frobenius_norm();
        let tri = SymmetricTridiagonal::new(a.m.clone());
        let (q, diag, off) = tri.unpack();
        let w = q.adjoint() * DVector::from_column_slice(v);
        Ok(TridiagonalReduction {
            diag: diag.as_slice().to_vec(),
            off: off.as_slice().to_vec(),
            w: w.as_slice().to_vec(),
            scale,
        })
    }

    /// `v^H (zI - A)^{-1} v`.
    pub fn quadform(&self, z: C64) -> Result<C64> {
        let n = self.diag.len();
        let lower: Vec<C64> = self.off.iter().map(|&b| C64::new(-b, 0.0)).collect();
        let d: Vec<C64> = self.diag.iter().map(|&a| z - a).collect();
        let tol = n as f64 * f64::EPSILON * (self.scale + z.norm());
        let x = tridiagonal_pivoted_solve(&lower, &d, &lower, &self.w, tol)?;
        Ok(self.w.iter().zip(&x).map(|(wi, xi)| wi.conj() * xi).sum())
    }
}

/// General tridiagonal solve with partial pivoting (one extra superdiagonal
/// of fill).
fn tridiagonal_pivoted_solve(
    sub: &[C64],
    diag: &[C64],
    sup: &[C64],
    b: &[C64],
    tol: f64,
) -> Result<Vec<C64>> {
    let n = diag.len();
    let zero = C64::new(0.0, 0.0);
    let mut d = diag.to_vec();
    let mut du = sup.to_vec();
    du.push(zero);
    let mut du2 = vec![zero; n];
    let mut dl = sub.to_vec();
    let mut x = b.to_vec();
    for k in 0..n.saturating_sub(1) {
        if d[k].norm() >= dl[k].norm() {
            if d[k].norm() <= tol {
                return Err(Error::Singular { row: k });
            }
            let l = dl[k] / d[k];
            dl[k] = l;
            d[k + 1] -= l * du[k];
            x[k + 1] = x[k + 1] - l * x[k];
        } else {
            let l = d[k] / dl[k];
            d[k] = dl[k];
            dl[k] = l;
            let tmp = du[k];
            du[k] = d[k + 1];
            d[k + 1] = tmp - l * d[k + 1];
            if k + 1 < n - 1 {
                du2[k] = du[k + 1];
                du[k + 1] = -l * du[k + 1];
            }
            x.swap(k, k + 1);
            x[k + 1] = x[k + 1] - l * x[k];
        }
    }
    if d[n - 1].norm() <= tol {
        return Err(Error::Singular { row: n - 1 });
    }
    for k in (0..n).rev() {
        let mut s = x[k];
        if k + 1 < n {
            s -= du[k] * x[k + 1];
        }
        if k + 2 < n {
            s -= du2[k] * x[k + 2];
        }
        x[k] = s / d[k];
    }
    Ok(x)
}

/// Eigenvalues in ascending order with orthonormal eigenvectors.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    /// Column `j` is the eigenvector of `eigenvalues[j]`.
    pub eigenvectors: DMatrix<C64>,
}

impl SpectralDecomposition {
    pub fn compute(a: &DenseHermitianMatrix) -> Result<Self> {
        let eig = SymmetricEigen::new(a.m.clone());
        let mut order: Vec<usize> = (0..a.n()).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
        let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let eigenvectors = DMatrix::from_fn(a.n(), a.n(), |r, c| eig.eigenvectors[(r, order[c])]);
        if eigenvalues.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("eigenvalues"));
        }
        Ok(SpectralDecomposition {
            eigenvalues,
            eigenvectors,
        })
    }

    /// `max_j ||A u_j - lambda_j u_j||`.
    pub fn max_residual(&self, a: &DenseHermitianMatrix) -> f64 {
        let au = &a.m * &self.eigenvectors;
        (0..self.eigenvalues.len())
            .map(|j| {
                (au.column(j) - self.eigenvectors.column(j) * C64::new(self.eigenvalues[j], 0.0))
                    .norm()
            })
            .fold(0.0, f64::max)
    }

    /// Weights `|v^H u_j|^2 / ||v||^2`.
    pub fn measure(&self, v: &[C64]) -> Result<SpectralMeasure> {
        check_vec(self.eigenvalues.len(), v)?;
        let vnorm2 = norm(v).powi(2);
        if vnorm2 == 0.0 {
            return Err(Error::ZeroVector);
        }
        let proj = self.eigenvectors.adjoint() * DVector::from_column_slice(v);
        Ok(SpectralMeasure {
            eigenvalues: self.eigenvalues.clone(),
            weights: proj.iter().map(|p| p.norm_sqr() / vnorm2).collect(),
            vnorm2,
        })
    }
}

/// Discrete spectral measure of `(A, v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralMeasure {
    pub eigenvalues: Vec<f64>,
    pub weights: Vec<f64>,
    pub vnorm2: f64,
}

impl SpectralMeasure {
    pub fn lambda_min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn lambda_max(&self) -> f64 {
        *self.eigenvalues.last().expect("nonempty spectrum")
    }
}

/// `vnorm2 * sum_j w_j / (z - lambda_j)`.
pub fn spectral_quadform(measure: &SpectralMeasure, z: C64) -> Result<C64> {
    let mut acc = C64::new(0.0, 0.0);
    for (&lam, &w) in measure.eigenvalues.iter().zip(&measure.weights) {
        let d = z - lam;
        if d == C64::new(0.0, 0.0) {
            return Err(Error::ShiftOnEigenvalue { eigenvalue: lam });
        }
        acc += w / d;
    }
    Ok(acc * measure.vnorm2)
}

/// `kappa(z) = max_j |z - lambda_j| / min_j |z - lambda_j|`.
pub fn condition_number(eigenvalues: &[f64], z: C64) -> f64 {
    let (lo, hi) = eigenvalues
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), &l| {
            let d = (z - l).norm();
            (lo.min(d), hi.max(d))
        });
    hi / lo
}

fn check_jacobi(alpha: &[f64], beta: &[f64]) -> Result<usize> {
    let k = alpha.len();
    if k == 0 {
        return Err(Error::InvalidParameter("empty tridiagonal".into()));
    }
    if beta.len() + 1 < k {
        return Err(Error::DimensionMismatch {
            expected: k - 1,
            actual: beta.len(),
        });
    }
    Ok(k)
}

/// Thomas pivots `delta_1 .. delta_k` of `zI - T_{k,k}` without pivoting.
pub fn thomas_pivots(alpha: &[f64], beta: &[f64], z: C64) -> Result<Vec<C64>> {
    let k = check_jacobi(alpha, beta)?;
    let mut pivots = Vec::with_capacity(k);
    for i in 0..k {
        let d = if i == 0 {
            z - alpha[0]
        } else {
            z - alpha[i] - beta[i - 1] * beta[i - 1] / pivots[i - 1]
        };
        if d == C64::new(0.0, 0.0) {
            return Err(Error::Singular { row: i });
        }
        pivots.push(d);
    }
    Ok(pivots)
}

/// Entry `(i, j)` (1-based) of `(zI - T_{k,k})^{-1}` with `k = alpha.len()`,
/// from a Thomas solve of `(zI - T) y = e_j`.
pub fn tridiag_resolvent_entry(
    alpha: &[f64],
    beta: &[f64],
    z: C64,
    i: usize,
    j: usize,
) -> Result<C64> {
    let k = check_jacobi(alpha, beta)?;
    if i == 0 || j == 0 || i > k || j > k {
        return Err(Error::InvalidParameter(format!(
            "entry ({i}, {j}) outside a {k}x{k} matrix"
        )));
    }
    let delta = thomas_pivots(alpha, beta, z)?;
    // Forward elimination with sub-diagonal -beta.
    let mut y = vec![C64::new(0.0, 0.0); k];
    y[j - 1] = C64::new(1.0, 0.0);
    for r in 1..k {
        y[r] = y[r] + beta[r - 1] * y[r - 1] / delta[r - 1];
    }
    y[k - 1] /= delta[k - 1];
    for r in (0..k - 1).rev() {
        y[r] = (y[r] + beta[r] * y[r + 1]) / delta[r];
    }
    Ok(y[i - 1])
}

/// `|T_1^<| .. |T_k^<|` for `T_j^< = zI - T_{j,j}` by
/// `|T_{j+1}^<| = (z - alpha_{j+1}) |T_j^<| - beta_j^2 |T_{j-1}^<|`.
pub fn shifted_determinant_sequence(
    alpha: &[f64],
    beta: &[f64],
    z: C64,
    k: usize,
) -> Result<Vec<C64>> {
    let avail = check_jacobi(alpha, beta)?;
    if k > avail {
        return Err(Error::DimensionMismatch {
            expected: k,
            actual: avail,
        });
    }
    let mut dets: Vec<C64> = Vec::with_capacity(k);
    let mut prev2 = C64::new(1.0, 0.0);
    for j in 0..k {
        let d = if j == 0 {
            z - alpha[0]
        } else {
            (z - alpha[j]) * dets[j - 1] - beta[j - 1] * beta[j - 1] * prev2
        };
        if j > 0 {
            prev2 = dets[j - 1];
        }
        dets.push(d);
    }
    Ok(dets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c64;

    fn diag2() -> DenseHermitianMatrix {
        DenseHermitianMatrix::from_sparse(&SparseHermitianMatrix::diagonal(&[1.0, 2.0])).unwrap()
    }

    fn half() -> Vec<C64> {
        let s = 1.0 / 2f64.sqrt();
        vec![c64(s, 0.0), c64(s, 0.0)]
    }

    #[test]
    fn dense_diag_two() {
        let q = dense_resolvent_quadform(&diag2(), &half(), c64(3.0, 0.0)).unwrap();
        assert!((q - c64(0.75, 0.0)).norm() < 1e-15);
        assert!(matches!(
            dense_resolvent_quadform(&diag2(), &half(), c64(2.0, 0.0)),
            Err(Error::Singular { .. })
        ));
    }

    #[test]
    fn reduction_matches_lu() {
        let i = c64(0.0, 1.0);
        let rows = vec![
            vec![c64(2.0, 0.0), c64(1.0, 0.0) + i, c64(0.0, 0.0)],
            vec![c64(1.0, 0.0) - i, c64(-1.0, 0.0), c64(0.5, 0.0)],
            vec![c64(0.0, 0.0), c64(0.5, 0.0), c64(0.25, 0.0)],
        ];
        let a = DenseHermitianMatrix::from_rows(&rows, 1e-12).unwrap();
        let v = vec![c64(1.0, 0.0), c64(0.0, -1.0), c64(0.3, 0.3)];
        let red = TridiagonalReduction::new(&a, &v).unwrap();
        for z in [c64(0.1, 0.5), c64(-3.0, 1e-3), c64(5.0, -2.0)] {
            let x = dense_resolvent_quadform(&a, &v, z).unwrap();
            let y = red.quadform(z).unwrap();
            assert!((x - y).norm() <= 1e-13 * x.norm());
        }
    }

    #[test]
    fn rejects_non_hermitian_rows() {
        let rows = vec![
            vec![c64(1.0, 0.0), c64(2.0, 0.0)],
            vec![c64(3.0, 0.0), c64(1.0, 0.0)],
        ];
        assert!(DenseHermitianMatrix::from_rows(&rows, 1e-12).is_err());
    }

    #[test]
    fn spectral_examples() {
        let a = DenseHermitianMatrix::from_rows(&[vec![c64(4.0, 0.0)]], 1e-12).unwrap();
        let m = SpectralDecomposition::compute(&a)
            .unwrap()
            .measure(&[c64(0.0, 2.0)])
            .unwrap();
        let z = c64(1.0, 1.0);
        assert!((spectral_quadform(&m, z).unwrap() - 4.0 / (z - 4.0)).norm() < 1e-15);
        assert!(matches!(
            spectral_quadform(&m, c64(4.0, 0.0)),
            Err(Error::ShiftOnEigenvalue { .. })
        ));

        let m = SpectralDecomposition::compute(&diag2())
            .unwrap()
            .measure(&half())
            .unwrap();
        assert!((m.weights.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        assert!((spectral_quadform(&m, c64(3.0, 0.0)).unwrap() - c64(0.75, 0.0)).norm() < 1e-14);
        assert!((condition_number(&m.eigenvalues, c64(3.0, 0.0)) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn tridiagonal_entries() {
        let z = c64(0.5, 0.7);
        let e = tridiag_resolvent_entry(&[1.3], &[], z, 1, 1).unwrap();
        assert!((e - 1.0 / (z - 1.3)).norm() < 1e-15);

        let (a1, a2, b1) = (0.4, -1.2, 0.9);
        let closed = (z - a2) / ((z - a1) * (z - a2) - b1 * b1);
        let e = tridiag_resolvent_entry(&[a1, a2], &[b1], z, 1, 1).unwrap();
        assert!((e - closed).norm() < 1e-15);
        // Symmetric, not Hermitian, in the complex case.
        let e12 = tridiag_resolvent_entry(&[a1, a2], &[b1], z, 1, 2).unwrap();
        let e21 = tridiag_resolvent_entry(&[a1, a2], &[b1], z, 2, 1).unwrap();
        assert!((e12 - e21).norm() < 1e-15);
        assert!((e12 - b1 / ((z - a1) * (z - a2) - b1 * b1)).norm() < 1e-15);
        assert!(tridiag_resolvent_entry(&[a1, a2], &[b1], z, 3, 1).is_err());
    }

    #[test]
    fn determinant_examples() {
        let dets = shifted_determinant_sequence(&[1.5, 1.5], &[0.5], c64(3.0, 0.0), 2).unwrap();
        assert!((dets[0] - c64(1.5, 0.0)).norm() < 1e-15);
        assert!((dets[1] - c64(2.0, 0.0)).norm() < 1e-15);
        assert!((dets[1] / dets[0] - c64(4.0 / 3.0, 0.0)).norm() < 1e-15);

        // delta_1 = 0 gives |T_1| = 0 without error.
        let dets = shifted_determinant_sequence(&[1.5, 1.5], &[0.5], c64(1.5, 0.0), 2).unwrap();
        assert_eq!(dets[0], c64(0.0, 0.0));
    }

    #[test]
    fn pivoted_tridiagonal_handles_zero_leading_entry() {
        let zero = c64(0.0, 0.0);
        let one = c64(1.0, 0.0);
        // [[0, 1], [1, 0]] x = (2, 3) -> x = (3, 2)
        let x = tridiagonal_pivoted_solve(
            &[one],
            &[zero, zero],
            &[one],
            &[c64(2.0, 0.0), c64(3.0, 0.0)],
            1e-300,
        )
        .unwrap();
        assert!((x[0] - c64(3.0, 0.0)).norm() < 1e-15 && (x[1] - c64(2.0, 0.0)).norm() < 1e-15);
    }
}
