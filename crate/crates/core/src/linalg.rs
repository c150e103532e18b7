//! Complex vector kernels and the CSR container for sparse Hermitian matrices.
//!
//! Every solver in the crate works on `&[C64]` slices and a shared, immutable
//! [`SparseHermitianMatrix`]. Hermitian matrices are stored with both
//! triangles expanded so that `matvec` is a plain row-major CSR product.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Double-precision complex scalar.
pub type C64 = Complex64;

/// Default Hermitian tolerance, relative to the largest entry magnitude.
pub const DEFAULT_TOL_HERM: f64 = 1e-12;

#[inline]
pub(crate) fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn check_len(expected: usize, actual: usize) -> Result<()> {
    if expected != actual {
        return Err(Error::DimensionMismatch { expected, actual });
    }
    Ok(())
}

/// `x^H y`, conjugate-linear in `x`.
pub fn dot(x: &[C64], y: &[C64]) -> Result<C64> {
    check_len(x.len(), y.len())?;
    Ok(dotc(x, y))
}

/// `x^T y` without conjugation, the bilinear form used by the COCG/COCR seed
/// recurrences.
pub fn dot_unconjugated(x: &[C64], y: &[C64]) -> Result<C64> {
    check_len(x.len(), y.len())?;
    Ok(dotu(x, y))
}

/// Euclidean norm `sqrt(re(x^H x))`.
pub fn norm(x: &[C64]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

/// Returns `a x + y`.
pub fn axpy(a: C64, x: &[C64], y: &[C64]) -> Result<Vec<C64>> {
    check_len(x.len(), y.len())?;
    Ok(x.iter().zip(y).map(|(xi, yi)| a * xi + yi).collect())
}

/// Returns `a x`.
pub fn scale(a: C64, x: &[C64]) -> Vec<C64> {
    x.iter().map(|xi| a * xi).collect()
}

#[inline]
pub(crate) fn dotc(x: &[C64], y: &[C64]) -> C64 {
    debug_assert_eq!(x.len(), y.len());
    x.iter()
        .zip(y)
        .fold(C64::new(0.0, 0.0), |acc, (a, b)| acc + a.conj() * b)
}

#[inline]
pub(crate) fn dotu(x: &[C64], y: &[C64]) -> C64 {
    debug_assert_eq!(x.len(), y.len());
    x.iter()
        .zip(y)
        .fold(C64::new(0.0, 0.0), |acc, (a, b)| acc + a * b)
}

/// `y += a x`
#[inline]
pub(crate) fn axpy_in_place(a: C64, x: &[C64], y: &mut [C64]) {
    debug_assert_eq!(x.len(), y.len());
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

/// `y += a x` for real `a`.
#[inline]
pub(crate) fn axpy_real_in_place(a: f64, x: &[C64], y: &mut [C64]) {
    debug_assert_eq!(x.len(), y.len());
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += xi * a;
    }
}

pub(crate) fn all_finite(x: &[C64]) -> bool {
    x.iter().all(|v| v.re.is_finite() && v.im.is_finite())
}

/// Outcome of a Hermitian structure check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermitianCheck {
    pub hermitian: bool,
    /// `max |A_ij - conj(A_ji)|` over all stored pairs.
    pub max_asymmetry: f64,
    /// `max |A_ij|`.
    pub max_entry: f64,
}

/// Complex matrix in compressed sparse row form, with both triangles stored.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseHermitianMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<C64>,
    is_real: bool,
    hermitian_verified: bool,
    frobenius: f64,
}

impl SparseHermitianMatrix {
    /// Builds a matrix from raw CSR arrays, validating the structure and
    /// running [`hermitian_check`](Self::hermitian_check) with
    /// [`DEFAULT_TOL_HERM`].
    pub fn from_csr(
        n: usize,
        row_ptr: Vec<usize>,
        col_idx: Vec<usize>,
        values: Vec<C64>,
    ) -> Result<Self> {
        if row_ptr.len() != n + 1 {
            return Err(Error::InvalidStructure(format!(
                "row_ptr has length {}, expected {}",
                row_ptr.len(),
                n + 1
            )));
        }
        if row_ptr[0] != 0 {
            return Err(Error::InvalidStructure("row_ptr[0] != 0".into()));
        }
        if col_idx.len() != values.len() || row_ptr[n] != col_idx.len() {
            return Err(Error::InvalidStructure(format!(
                "row_ptr[n] = {} but {} column indices and {} values",
                row_ptr[n],
                col_idx.len(),
                values.len()
            )));
        }
        for row in 0..n {
            let (lo, hi) = (row_ptr[row], row_ptr[row + 1]);
            if lo > hi {
                return Err(Error::InvalidStructure(format!(
                    "row_ptr decreases at row {row}"
                )));
            }
            let cols = &col_idx[lo..hi];
            for (pos, &c) in cols.iter().enumerate() {
                if c >= n {
                    return Err(Error::InvalidStructure(format!(
                        "column index {c} out of range in row {row}"
                    )));
                }
                if pos > 0 && cols[pos - 1] >= c {
                    return Err(Error::InvalidStructure(format!(
                        "column indices not strictly increasing in row {row}"
                    )));
                }
            }
        }
        if !all_finite(&values) {
            return Err(Error::NonFinite("matrix values"));
        }
        let is_real = values.iter().all(|v| v.im == 0.0);
        let frobenius = values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        let mut m = SparseHermitianMatrix {
            n,
            row_ptr,
            col_idx,
            values,
            is_real,
            hermitian_verified: false,
            frobenius,
        };
        m.verify_hermitian(DEFAULT_TOL_HERM);
        Ok(m)
    }

    /// Builds a matrix from `(row, col, value)` triplets (0-based).
    /// Duplicate entries are summed.
    pub fn from_triplets(n: usize, triplets: &[(usize, usize, C64)]) -> Result<Self> {
        let mut entries: Vec<(usize, usize, C64)> = Vec::with_capacity(triplets.len());
        for &(i, j, v) in triplets {
            if i >= n || j >= n {
                return Err(Error::InvalidStructure(format!(
                    "entry ({i}, {j}) out of range for n = {n}"
                )));
            }
            entries.push((i, j, v));
        }
        entries.sort_by_key(|e| (e.0, e.1));
        let mut row_ptr = vec![0usize; n + 1];
        let mut col_idx = Vec::with_capacity(entries.len());
        let mut values: Vec<C64> = Vec::with_capacity(entries.len());
        let mut last: Option<(usize, usize)> = None;
        for (i, j, v) in entries {
            if last == Some((i, j)) {
                *values.last_mut().expect("duplicate follows an entry") += v;
                continue;
            }
            row_ptr[i + 1] += 1;
            col_idx.push(j);
            values.push(v);
            last = Some((i, j));
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        Self::from_csr(n, row_ptr, col_idx, values)
    }

    /// Dense row-major input, zeros dropped. Convenient for small tests.
    pub fn from_dense(rows: &[Vec<C64>]) -> Result<Self> {
        let n = rows.len();
        let mut triplets = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            check_len(n, row.len())?;
            for (j, &v) in row.iter().enumerate() {
                if v != C64::new(0.0, 0.0) {
                    triplets.push((i, j, v));
                }
            }
        }
        Self::from_triplets(n, &triplets)
    }

    /// Real diagonal matrix.
    pub fn diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let triplets: Vec<_> = diag
            .iter()
            .enumerate()
            .map(|(i, &d)| (i, i, c64(d, 0.0)))
            .collect();
        Self::from_triplets(n, &triplets).expect("diagonal matrix is structurally valid")
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![1.0; n])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row_ptr(&self) -> &[usize] {
        &self.row_ptr
    }

    pub fn col_idx(&self) -> &[usize] {
        &self.col_idx
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    /// All imaginary parts are exactly zero.
    pub fn is_real(&self) -> bool {
        self.is_real
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian_verified
    }

    /// Real and Hermitian, i.e. real symmetric.
    pub fn is_real_symmetric(&self) -> bool {
        self.is_real && self.hermitian_verified
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.frobenius
    }

    /// Entry `(i, j)`, zero when not stored.
    pub fn get(&self, i: usize, j: usize) -> C64 {
        let (lo, hi) = (self.row_ptr[i], self.row_ptr[i + 1]);
        match self.col_idx[lo..hi].binary_search(&j) {
            Ok(pos) => self.values[lo + pos],
            Err(_) => C64::new(0.0, 0.0),
        }
    }

    /// Pure predicate: compares every stored entry against the conjugate of
    /// its mirror, relative to the largest entry magnitude.
    pub fn hermitian_check(&self, tol_herm: f64) -> HermitianCheck {
        let max_entry = self.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let mut max_asymmetry: f64 = 0.0;
        for i in 0..self.n {
            for pos in self.row_ptr[i]..self.row_ptr[i + 1] {
                let j = self.col_idx[pos];
                let diff = (self.values[pos] - self.get(j, i).conj()).norm();
                max_asymmetry = max_asymmetry.max(diff);
            }
        }
        HermitianCheck {
            hermitian: max_asymmetry <= tol_herm * max_entry,
            max_asymmetry,
            max_entry,
        }
    }

    /// Re-runs the Hermitian check with `tol_herm` and updates the cached flag.
    pub fn verify_hermitian(&mut self, tol_herm: f64) -> HermitianCheck {
        let check = self.hermitian_check(tol_herm);
        self.hermitian_verified = check.hermitian;
        check
    }

    /// `y = A x`.
    pub fn matvec(&self, x: &[C64]) -> Result<Vec<C64>> {
        check_len(self.n, x.len())?;
        let mut y = vec![C64::new(0.0, 0.0); self.n];
        self.matvec_into(x, &mut y);
        Ok(y)
    }

    /// `y = A x` into a caller-owned buffer. Each output entry is accumulated
    /// in ascending column order.
    pub(crate) fn matvec_into(&self, x: &[C64], y: &mut [C64]) {
        debug_assert_eq!(x.len(), self.n);
        debug_assert_eq!(y.len(), self.n);
        for (i, yi) in y.iter_mut().enumerate() {
            let (lo, hi) = (self.row_ptr[i], self.row_ptr[i + 1]);
            let mut acc = C64::new(0.0, 0.0);
            for pos in lo..hi {
                acc += self.values[pos] * x[self.col_idx[pos]];
            }
            *yi = acc;
        }
    }

    /// `y = (shift I - A) x`.
    pub(crate) fn shifted_matvec_into(&self, shift: C64, x: &[C64], y: &mut [C64]) {
        self.matvec_into(x, y);
        for (yi, xi) in y.iter_mut().zip(x) {
            *yi = shift * xi - *yi;
        }
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut d = DenseMatrix::zeros(self.n);
        for i in 0..self.n {
            for pos in self.row_ptr[i]..self.row_ptr[i + 1] {
                d[(i, self.col_idx[pos])] = self.values[pos];
            }
        }
        d
    }
}

/// Square dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<C64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        DenseMatrix {
            n,
            data: vec![C64::new(0.0, 0.0); n * n],
        }
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let n = rows.len();
        let mut d = Self::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            check_len(n, row.len())?;
            d.data[i * n..(i + 1) * n].copy_from_slice(row);
        }
        Ok(d)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn matvec(&self, x: &[C64]) -> Result<Vec<C64>> {
        check_len(self.n, x.len())?;
        Ok((0..self.n).map(|i| dotu(self.row(i), x)).collect())
    }

    pub fn matmul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        check_len(self.n, other.n)?;
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        Ok(out)
    }
}

impl std::ops::Index<(usize, usize)> for DenseMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.n + j]
    }
}
