//! Dense complex matrices and the bipartite reshuffling maps.
//!
//! Everything here works on small matrices (side ≤ ~64) held in row-major
//! order. Matrices are values: every operation returns a fresh matrix.
//! Decompositions are delegated to `nalgebra`.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Max-entry Hermiticity tolerance.
pub const TOL_HERM: f64 = 1e-9;
/// Tolerance on the minimum eigenvalue of a positive semi-definite matrix.
pub const TOL_PSD: f64 = 1e-9;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Dense complex matrix in row-major order.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMat {
    /// Builds a matrix from row-major entries, rejecting NaN/Inf.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {}x{} matrix",
                data.len(),
                rows,
                cols
            )));
        }
        if let Some(idx) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite(idx));
        }
        Ok(Self { rows, cols, data })
    }

    /// Real-valued convenience constructor. Panics on a length mismatch.
    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count does not match shape");
        Self {
            rows,
            cols,
            data: data.iter().map(|&x| C64::new(x, 0.0)).collect(),
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(d, 0.0);
        }
        m
    }

    /// Outer product |u⟩⟨v|.
    pub fn outer(u: &[C64], v: &[C64]) -> Self {
        let mut m = Self::zeros(u.len(), v.len());
        for (i, ui) in u.iter().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                m[(i, j)] = ui * vj.conj();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)];
            }
        }
        m
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_c(&self, s: C64) -> Self {
        self.map(|z| z * s)
    }

    fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Tr(self · other) without forming the product.
    pub fn trace_product(&self, other: &CMat) -> C64 {
        assert_eq!(self.cols, other.rows);
        assert_eq!(self.rows, other.cols);
        let mut acc = ZERO;
        for i in 0..self.rows {
            for k in 0..self.cols {
                acc += self[(i, k)] * other[(k, i)];
            }
        }
        acc
    }

    /// Largest |h_ij − conj(h_ji)|.
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst = 0.0_f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Operator 2-norm (largest singular value).
    pub fn spectral_norm(&self) -> f64 {
        singular_values(self).first().copied().unwrap_or(0.0)
    }

    /// Matrix–vector product.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    pub(crate) fn to_nalgebra(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }
}

impl Index<(usize, usize)> for CMat {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &CMat {
    type Output = CMat;

    fn mul(self, rhs: &CMat) -> CMat {
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ");
        let mut out = CMat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl Add for &CMat {
    type Output = CMat;

    fn add(self, rhs: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CMat {
    type Output = CMat;

    fn sub(self, rhs: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Debug for CMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:>9.5}{:+.5}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Local dimensions of a bipartite system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BipartiteDims {
    da: usize,
    db: usize,
}

impl BipartiteDims {
    pub const QUBITS: BipartiteDims = BipartiteDims { da: 2, db: 2 };

    pub fn new(da: usize, db: usize) -> Result<Self> {
        if da < 2 || db < 2 {
            return Err(Error::UnsupportedDims {
                da,
                db,
                reason: "each subsystem needs dimension at least 2",
            });
        }
        Ok(Self { da, db })
    }

    pub fn da(&self) -> usize {
        self.da
    }

    pub fn db(&self) -> usize {
        self.db
    }

    pub fn total(&self) -> usize {
        self.da * self.db
    }

    pub fn is_qubits(&self) -> bool {
        self.da == 2 && self.db == 2
    }

    /// 2×2 and 2×3 (either order): PPT and reduction are exact here.
    pub fn ppt_is_exact(&self) -> bool {
        matches!((self.da, self.db), (2, 2) | (2, 3) | (3, 2))
    }

    pub fn dim(&self, side: Subsystem) -> usize {
        match side {
            Subsystem::A => self.da,
            Subsystem::B => self.db,
        }
    }

    pub(crate) fn check_square(&self, m: &CMat) -> Result<()> {
        if m.rows() != self.total() || m.cols() != self.total() {
            return Err(Error::DimensionMismatch(format!(
                "expected {n}x{n} for dims {}x{}, got {}x{}",
                self.da,
                self.db,
                m.rows(),
                m.cols(),
                n = self.total()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for BipartiteDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.da, self.db)
    }
}

/// Which tensor factor an operation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Subsystem {
    A,
    B,
}

/// Kronecker product: (a⊗b)[i·rb+k, j·cb+l] = a[i,j]·b[k,l].
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let (rb, cb) = (b.rows(), b.cols());
    let mut out = CMat::zeros(a.rows() * rb, a.cols() * cb);
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let aij = a[(i, j)];
            if aij == ZERO {
                continue;
            }
            for k in 0..rb {
                for l in 0..cb {
                    out[(i * rb + k, j * cb + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Spectrum of a Hermitian matrix, eigenvalues ascending, eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMat,
}

impl HermitianEigen {
    /// Column `k` as a vector.
    pub fn vector(&self, k: usize) -> Vec<C64> {
        (0..self.vectors.rows()).map(|i| self.vectors[(i, k)]).collect()
    }

    /// U f(Λ) U†.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> CMat {
        let n = self.values.len();
        let mut out = CMat::zeros(n, n);
        for (k, &lam) in self.values.iter().enumerate() {
            let w = f(lam);
            if w == 0.0 {
                continue;
            }
            for i in 0..n {
                let uik = self.vectors[(i, k)] * w;
                for j in 0..n {
                    out[(i, j)] += uik * self.vectors[(j, k)].conj();
                }
            }
        }
        out
    }
}

/// Eigendecomposition of a Hermitian matrix.
pub fn eig_hermitian(h: &CMat) -> Result<HermitianEigen> {
    eig_hermitian_tol(h, TOL_HERM)
}

pub fn eig_hermitian_tol(h: &CMat, tol_herm: f64) -> Result<HermitianEigen> {
    let deviation = h.hermitian_deviation();
    if deviation > tol_herm {
        return Err(Error::NotHermitian { deviation });
    }
    let n = h.rows();
    // Symmetrize so the solver sees an exactly Hermitian input.
    let mut sym = h.to_nalgebra();
    for i in 0..n {
        sym[(i, i)] = C64::new(sym[(i, i)].re, 0.0);
        for j in i + 1..n {
            let avg = (sym[(i, j)] + sym[(j, i)].conj()) * 0.5;
            sym[(i, j)] = avg;
            sym[(j, i)] = avg.conj();
        }
    }
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = CMat::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        for i in 0..n {
            vectors[(i, col)] = eig.eigenvectors[(i, k)];
        }
    }
    Ok(HermitianEigen { values, vectors })
}

/// Eigenvalues only, ascending.
pub fn eigvals_hermitian(h: &CMat) -> Result<Vec<f64>> {
    Ok(eig_hermitian(h)?.values)
}

/// Singular values, descending; `min(rows, cols)` of them.
pub fn singular_values(m: &CMat) -> Vec<f64> {
    if m.rows() == 0 || m.cols() == 0 {
        return Vec::new();
    }
    let svd = m.to_nalgebra().svd(false, false);
    let mut s: Vec<f64> = svd.singular_values.iter().map(|&x| x.max(0.0)).collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Thin SVD: `m = U diag(s) V†` with `s` descending.
pub(crate) fn svd(m: &CMat) -> (CMat, Vec<f64>, CMat) {
    let svd = m.to_nalgebra().svd(true, true);
    let u = svd.u.expect("requested U");
    let v_t = svd.v_t.expect("requested V†");
    let k = svd.singular_values.len();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let mut uu = CMat::zeros(m.rows(), k);
    let mut vv = CMat::zeros(m.cols(), k);
    let mut s = Vec::with_capacity(k);
    for (col, &idx) in order.iter().enumerate() {
        s.push(svd.singular_values[idx]);
        for i in 0..m.rows() {
            uu[(i, col)] = u[(i, idx)];
        }
        for j in 0..m.cols() {
            vv[(j, col)] = v_t[(idx, j)].conj();
        }
    }
    (uu, s, vv)
}

/// Sum of singular values.
pub fn trace_norm(m: &CMat) -> f64 {
    singular_values(m).iter().sum()
}

/// Principal square root of a positive semi-definite matrix.
///
/// Eigenvalues in `[-TOL_PSD, 0)` are clamped to zero, as are positive
/// eigenvalues at the round-off level of the largest one.
pub fn sqrt_psd(h: &CMat) -> Result<CMat> {
    let eig = eig_hermitian(h)?;
    let min = eig.values.first().copied().unwrap_or(0.0);
    if min < -TOL_PSD {
        return Err(Error::NotPsd { min_eigenvalue: min });
    }
    let top = eig.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let floor = 64.0 * f64::EPSILON * eig.values.len() as f64 * top;
    Ok(eig.reconstruct_with(|lam| if lam <= floor { 0.0 } else { lam.sqrt() }))
}

/// Partial transpose on one factor.
pub fn partial_transpose(rho: &CMat, dims: BipartiteDims, side: Subsystem) -> Result<CMat> {
    dims.check_square(rho)?;
    let (da, db) = (dims.da(), dims.db());
    let mut out = CMat::zeros(rho.rows(), rho.cols());
    for i in 0..da {
        for mu in 0..db {
            for j in 0..da {
                for nu in 0..db {
                    let (src_r, src_c) = match side {
                        Subsystem::A => (j * db + mu, i * db + nu),
                        Subsystem::B => (i * db + nu, j * db + mu),
                    };
                    out[(i * db + mu, j * db + nu)] = rho[(src_r, src_c)];
                }
            }
        }
    }
    Ok(out)
}

/// Partial trace keeping one factor.
pub fn partial_trace(rho: &CMat, dims: BipartiteDims, keep: Subsystem) -> Result<CMat> {
    dims.check_square(rho)?;
    let (da, db) = (dims.da(), dims.db());
    let out = match keep {
        Subsystem::A => {
            let mut out = CMat::zeros(da, da);
            for i in 0..da {
                for j in 0..da {
                    out[(i, j)] = (0..db).map(|k| rho[(i * db + k, j * db + k)]).sum();
                }
            }
            out
        }
        Subsystem::B => {
            let mut out = CMat::zeros(db, db);
            for k in 0..db {
                for l in 0..db {
                    out[(k, l)] = (0..da).map(|i| rho[(i * db + k, i * db + l)]).sum();
                }
            }
            out
        }
    };
    Ok(out)
}

/// Realignment: R[(i·dA + j), (k·dB + l)] = ρ[(i·dB + k), (j·dB + l)].
///
/// Output is dA² × dB². For a product ρA⊗ρB the result is the rank-one
/// vec(ρA) vec(ρB)ᵀ.
pub fn realign(rho: &CMat, dims: BipartiteDims) -> Result<CMat> {
    dims.check_square(rho)?;
    let (da, db) = (dims.da(), dims.db());
    let mut out = CMat::zeros(da * da, db * db);
    for i in 0..da {
        for j in 0..da {
            for k in 0..db {
                for l in 0..db {
                    out[(i * da + j, k * db + l)] = rho[(i * db + k, j * db + l)];
                }
            }
        }
    }
    Ok(out)
}
