//! Dense complex linear algebra for registers of at most five qubits.
//!
//! Register convention, shared by every module in the crate: qubits are
//! listed in register order and the first listed qubit is the most
//! significant bit of the computational-basis index. For a register
//! `1,2,3,4,5` the basis state `|q1 q2 q3 q4 q5⟩` sits at index
//! `16*q1 + 8*q2 + 4*q3 + 2*q4 + q5`. [`QMatrix::kron`] follows the same
//! rule: the left operand indexes the more significant block.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
use thiserror::Error;

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Largest accepted `max |a - a†|` entry for matrices treated as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-9;

/// Eigenvalues at or above `-PSD_TOL` are clamped to zero by [`psd_sqrt`].
pub const PSD_TOL: f64 = 1e-9;

const JACOBI_OFF_TOL: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QmatError {
    #[error("{op}: dimension mismatch ({left_rows}x{left_cols} vs {right_rows}x{right_cols})")]
    DimensionMismatch {
        op: &'static str,
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },
    #[error("{op}: matrix must be square, got {rows}x{cols}")]
    NotSquare {
        op: &'static str,
        rows: usize,
        cols: usize,
    },
    #[error("matrix must have at least one row and one column")]
    Empty,
    #[error("expected {expected} entries, got {got}")]
    EntryCount { expected: usize, got: usize },
    #[error("entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },
    #[error("matrix is not Hermitian: max |a - a†| = {defect:e}")]
    NotHermitian { defect: f64 },
    #[error("matrix is not positive semidefinite: eigenvalue {value:e}")]
    NegativeEigenvalue { value: f64 },
    #[error("subsystem index {index} out of range for {count} subsystems")]
    SubsystemOutOfRange { index: usize, count: usize },
    #[error("subsystem dimensions multiply to {product}, matrix dimension is {dim}")]
    SubsystemDims { product: usize, dim: usize },
    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off:e})")]
    NoConvergence { sweeps: usize, off: f64 },
}

/// Dense complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl QMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self, QmatError> {
        if rows == 0 || cols == 0 {
            return Err(QmatError::Empty);
        }
        if data.len() != rows * cols {
            return Err(QmatError::EntryCount {
                expected: rows * cols,
                got: data.len(),
            });
        }
        if let Some(pos) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(QmatError::NonFinite {
                row: pos / cols,
                col: pos % cols,
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from real row slices. Panics on ragged input; intended
    /// for literal constants.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let ncols = rows[0].len();
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        let data = rows
            .iter()
            .flat_map(|r| r.iter().map(|&x| C64::new(x, 0.0)))
            .collect();
        Self::new(rows.len(), ncols, data).expect("finite literal matrix")
    }

    /// Builds a matrix from complex row slices. Panics on ragged input.
    pub fn from_rows(rows: &[&[C64]]) -> Self {
        let ncols = rows[0].len();
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        let data = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Self::new(rows.len(), ncols, data).expect("finite literal matrix")
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0);
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

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(d, 0.0);
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn matmul(&self, other: &QMatrix) -> Result<QMatrix, QmatError> {
        if self.cols != other.rows {
            return Err(self.mismatch("matmul", other));
        }
        let mut out = QMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let b_row = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, &b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Kronecker product `self ⊗ other`; `self` selects the outer block.
    pub fn kron(&self, other: &QMatrix) -> QMatrix {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut data = vec![ZERO; rows * cols];
        for ar in 0..self.rows {
            for ac in 0..self.cols {
                let a = self.data[ar * self.cols + ac];
                if a == ZERO {
                    continue;
                }
                for br in 0..other.rows {
                    let row = ar * other.rows + br;
                    for bc in 0..other.cols {
                        data[row * cols + ac * other.cols + bc] = a * other.data[br * other.cols + bc];
                    }
                }
            }
        }
        QMatrix { rows, cols, data }
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> QMatrix {
        let mut out = QMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out[(c, r)] = self[(r, c)].conj();
            }
        }
        out
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> QMatrix {
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, factor: C64) -> QMatrix {
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * factor).collect(),
        }
    }

    pub fn scale_real(&self, factor: f64) -> QMatrix {
        self.scale(C64::new(factor, 0.0))
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn try_add(&self, other: &QMatrix) -> Result<QMatrix, QmatError> {
        if self.dims() != other.dims() {
            return Err(self.mismatch("add", other));
        }
        Ok(QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn try_sub(&self, other: &QMatrix) -> Result<QMatrix, QmatError> {
        if self.dims() != other.dims() {
            return Err(self.mismatch("sub", other));
        }
        Ok(QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    /// Largest entrywise modulus of `self - other`; infinite on shape mismatch.
    pub fn max_abs_diff(&self, other: &QMatrix) -> f64 {
        if self.dims() != other.dims() {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `max |a - a†|` over all entries. Square matrices only.
    pub fn hermiticity_defect(&self) -> f64 {
        debug_assert!(self.is_square());
        let n = self.rows;
        let mut worst: f64 = 0.0;
        for r in 0..n {
            for c in r..n {
                worst = worst.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        worst
    }

    /// `(a + a†) / 2`.
    pub fn symmetrized(&self) -> QMatrix {
        let n = self.rows;
        let mut out = self.clone();
        for r in 0..n {
            out[(r, r)] = C64::new(self[(r, r)].re, 0.0);
            for c in (r + 1)..n {
                let avg = (self[(r, c)] + self[(c, r)].conj()) * 0.5;
                out[(r, c)] = avg;
                out[(c, r)] = avg.conj();
            }
        }
        out
    }

    /// `U · self · U†`.
    pub fn conjugate_by(&self, u: &QMatrix) -> Result<QMatrix, QmatError> {
        u.matmul(self)?.matmul(&u.dagger())
    }

    fn mismatch(&self, op: &'static str, other: &QMatrix) -> QmatError {
        QmatError::DimensionMismatch {
            op,
            left_rows: self.rows,
            left_cols: self.cols,
            right_rows: other.rows,
            right_cols: other.cols,
        }
    }
}

impl Index<(usize, usize)> for QMatrix {
    type Output = C64;

    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for QMatrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

// Operator forms panic on shape mismatch; the `try_*` / `matmul` methods are
// the fallible entry points.
impl Add for &QMatrix {
    type Output = QMatrix;

    fn add(self, rhs: &QMatrix) -> QMatrix {
        self.try_add(rhs).expect("matrix add")
    }
}

impl Sub for &QMatrix {
    type Output = QMatrix;

    fn sub(self, rhs: &QMatrix) -> QMatrix {
        self.try_sub(rhs).expect("matrix sub")
    }
}

impl Mul for &QMatrix {
    type Output = QMatrix;

    fn mul(self, rhs: &QMatrix) -> QMatrix {
        self.matmul(rhs).expect("matrix product")
    }
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let z = self[(r, c)];
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Column vector of complex amplitudes.
#[derive(Clone, Debug, PartialEq)]
pub struct QVector {
    data: Vec<C64>,
}

impl QVector {
    pub fn new(data: Vec<C64>) -> Self {
        assert!(!data.is_empty());
        Self { data }
    }

    /// Computational basis vector `|index⟩` in dimension `dim`.
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim);
        let mut data = vec![ZERO; dim];
        data[index] = ONE;
        Self { data }
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.data
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        assert!(n > 0.0, "cannot normalize the zero vector");
        Self {
            data: self.data.iter().map(|z| z / n).collect(),
        }
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            data: self.data.iter().map(|&z| z * factor).collect(),
        }
    }

    pub fn add(&self, other: &QVector) -> Self {
        assert_eq!(self.dim(), other.dim());
        Self {
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &QVector) -> C64 {
        assert_eq!(self.dim(), other.dim());
        self.data.iter().zip(&other.data).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn kron(&self, other: &QVector) -> Self {
        let data = self
            .data
            .iter()
            .flat_map(|&a| other.data.iter().map(move |&b| a * b))
            .collect();
        Self { data }
    }

    /// Column matrix `|self⟩`.
    pub fn to_column(&self) -> QMatrix {
        QMatrix {
            rows: self.dim(),
            cols: 1,
            data: self.data.clone(),
        }
    }

    /// `|self⟩⟨self|`.
    pub fn projector(&self) -> QMatrix {
        self.outer(self)
    }

    /// `|self⟩⟨other|`.
    pub fn outer(&self, other: &QVector) -> QMatrix {
        let n = self.dim();
        let m = other.dim();
        let mut out = QMatrix::zeros(n, m);
        for r in 0..n {
            for c in 0..m {
                out[(r, c)] = self.data[r] * other.data[c].conj();
            }
        }
        out
    }

    pub fn apply(m: &QMatrix, v: &QVector) -> Self {
        assert_eq!(m.cols(), v.dim());
        let data = (0..m.rows())
            .map(|r| (0..m.cols()).map(|c| m[(r, c)] * v.data[c]).sum())
            .collect();
        Self { data }
    }
}

/// Traces out the subsystems listed in `traced` from `rho`.
///
/// `dims` gives the dimension of every subsystem in register order. The
/// reduced operator keeps the remaining subsystems in their original order.
/// Tracing out every subsystem yields the 1x1 matrix holding `tr(rho)`.
pub fn partial_trace(rho: &QMatrix, dims: &[usize], traced: &[usize]) -> Result<QMatrix, QmatError> {
    if !rho.is_square() {
        return Err(QmatError::NotSquare {
            op: "partial_trace",
            rows: rho.rows,
            cols: rho.cols,
        });
    }
    let product: usize = dims.iter().product();
    if product != rho.rows || dims.is_empty() {
        return Err(QmatError::SubsystemDims {
            product,
            dim: rho.rows,
        });
    }
    let mut is_traced = vec![false; dims.len()];
    for &t in traced {
        if t >= dims.len() {
            return Err(QmatError::SubsystemOutOfRange {
                index: t,
                count: dims.len(),
            });
        }
        is_traced[t] = true;
    }

    // Row-major strides of the full register.
    let mut strides = vec![1usize; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * dims[i + 1];
    }
    let kept: Vec<usize> = (0..dims.len()).filter(|&i| !is_traced[i]).collect();
    let gone: Vec<usize> = (0..dims.len()).filter(|&i| is_traced[i]).collect();
    let kept_dim: usize = kept.iter().map(|&i| dims[i]).product();
    let gone_dim: usize = gone.iter().map(|&i| dims[i]).product();

    // Offset in the full index contributed by a multi-index over `subs`.
    let offsets = |subs: &[usize], total: usize| -> Vec<usize> {
        (0..total)
            .map(|mut flat| {
                let mut off = 0;
                for &s in subs.iter().rev() {
                    off += (flat % dims[s]) * strides[s];
                    flat /= dims[s];
                }
                off
            })
            .collect()
    };
    let kept_off = offsets(&kept, kept_dim);
    let gone_off = offsets(&gone, gone_dim);

    let mut out = QMatrix::zeros(kept_dim, kept_dim);
    for (r, &ro) in kept_off.iter().enumerate() {
        for (c, &co) in kept_off.iter().enumerate() {
            out[(r, c)] = gone_off.iter().map(|&g| rho[(ro + g, co + g)]).sum();
        }
    }
    Ok(out)
}

fn require_hermitian(a: &QMatrix, op: &'static str) -> Result<QMatrix, QmatError> {
    if !a.is_square() {
        return Err(QmatError::NotSquare {
            op,
            rows: a.rows,
            cols: a.cols,
        });
    }
    let defect = a.hermiticity_defect();
    if defect > HERMITIAN_TOL {
        return Err(QmatError::NotHermitian { defect });
    }
    Ok(a.symmetrized())
}

/// Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
///
/// Returns eigenvalues in descending order together with the matching
/// orthonormal eigenvectors stored as columns.
pub fn herm_eigh(a: &QMatrix) -> Result<(Vec<f64>, QMatrix), QmatError> {
    let mut m = require_hermitian(a, "herm_eigh")?;
    let n = m.rows;
    let mut v = QMatrix::identity(n);
    let tol = JACOBI_OFF_TOL * m.frobenius_norm().max(1.0);

    let off_norm = |m: &QMatrix| -> f64 {
        let mut s = 0.0;
        for r in 0..n {
            for c in 0..n {
                if r != c {
                    s += m[(r, c)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    while off_norm(&m) >= tol {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(QmatError::NoConvergence {
                sweeps,
                off: off_norm(&m),
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                let g = apq.norm();
                if g < f64::MIN_POSITIVE {
                    continue;
                }
                let phase = apq / g;
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;

                // Real rotation annihilating g after the phase is removed.
                let theta = (aqq - app) / (2.0 * g);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                // J acts on columns p, q: J = diag(1, conj(phase)) · [[c, s], [-s, c]].
                let jpp = C64::new(c, 0.0);
                let jpq = C64::new(s, 0.0);
                let jqp = phase.conj() * (-s);
                let jqq = phase.conj() * c;

                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = mkp * jpp + mkq * jqp;
                    m[(k, q)] = mkp * jpq + mkq * jqq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = jpp.conj() * mpk + jqp.conj() * mqk;
                    m[(q, k)] = jpq.conj() * mpk + jqq.conj() * mqk;
                }
                m[(p, q)] = ZERO;
                m[(q, p)] = ZERO;
                m[(p, p)] = C64::new(m[(p, p)].re, 0.0);
                m[(q, q)] = C64::new(m[(q, q)].re, 0.0);

                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * jpp + vkq * jqp;
                    v[(k, q)] = vkp * jpq + vkq * jqq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| m[(y, y)].re.total_cmp(&m[(x, x)].re));
    let values = order.iter().map(|&i| m[(i, i)].re).collect();
    let mut vectors = QMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        for r in 0..n {
            vectors[(r, dst)] = v[(r, src)];
        }
    }
    Ok((values, vectors))
}

/// Real eigenvalues of a Hermitian matrix, descending.
pub fn herm_eigvals(a: &QMatrix) -> Result<Vec<f64>, QmatError> {
    herm_eigh(a).map(|(vals, _)| vals)
}

/// Positive-semidefinite square root. Eigenvalues in `[-PSD_TOL, 0)` are
/// clamped to zero.
pub fn psd_sqrt(a: &QMatrix) -> Result<QMatrix, QmatError> {
    psd_sqrt_with_floor(a, 0.0)
}

/// As [`psd_sqrt`], additionally zeroing eigenvalues at or below `floor`.
/// Used where rounding noise on a rank-deficient operator must not be
/// promoted to `sqrt(noise)`.
pub fn psd_sqrt_with_floor(a: &QMatrix, floor: f64) -> Result<QMatrix, QmatError> {
    let (vals, vecs) = herm_eigh(a)?;
    if let Some(&worst) = vals.last() {
        if worst < -PSD_TOL {
            return Err(QmatError::NegativeEigenvalue { value: worst });
        }
    }
    let n = vals.len();
    let mut out = QMatrix::zeros(n, n);
    for (i, &lam) in vals.iter().enumerate() {
        if lam <= floor || lam <= 0.0 {
            continue;
        }
        let root = lam.sqrt();
        for r in 0..n {
            let vr = vecs[(r, i)] * root;
            for c in 0..n {
                out[(r, c)] += vr * vecs[(c, i)].conj();
            }
        }
    }
    Ok(out)
}
