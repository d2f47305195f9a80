//! Dense complex-matrix kernel.
//!
//! Everything downstream (states, entropies, witnesses, the projection
//! solver) reduces to a handful of operations on small dense Hermitian
//! matrices: tensor products, partial traces, eigendecompositions, matrix
//! logarithms, Frobenius inner products, and the Euclidean projection onto
//! the probability simplex. This module implements exactly those, with no
//! quantum semantics attached.
//!
//! The eigensolver is a cyclic Jacobi iteration specialised to complex
//! Hermitian matrices. At the sizes that occur here (at most 81 x 81) it is
//! unconditionally stable, needs no pivoting or balancing, and produces an
//! orthonormal eigenbasis to near machine precision. Convergence is declared
//! when the off-diagonal Frobenius norm drops below a small multiple of the
//! matrix norm; see [`NumericPolicy`].

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssignOps, Zero};
use thiserror::Error;

/// Floating-point scalar the whole crate is generic over.
///
/// `f32` and `f64` both satisfy the bounds; the crate-root aliases pick
/// `f64`, which is what the stated tolerances are calibrated for.
pub trait Scalar:
    Float
    + FloatConst
    + NumAssignOps
    + FromPrimitive
    + Sum<Self>
    + fmt::Debug
    + fmt::Display
    + fmt::LowerExp
    + Send
    + Sync
    + 'static
{
}

impl<T> Scalar for T where
    T: Float
        + FloatConst
        + NumAssignOps
        + FromPrimitive
        + Sum<T>
        + fmt::Debug
        + fmt::Display
        + fmt::LowerExp
        + Send
        + Sync
        + 'static
{
}

/// Converts an `f64` literal into the working scalar type.
pub fn real<R: Scalar>(x: f64) -> R {
    R::from_f64(x).expect("f64 literal must be representable in the scalar type")
}

/// Builds a complex number from `f64` literals.
pub fn cplx<R: Scalar>(re: f64, im: f64) -> Complex<R> {
    Complex::new(real(re), real(im))
}

/// Which logarithm a quantity is expressed in: base 2 (bits) or base e (nats).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LogBase {
    Bits,
    Nats,
}

impl LogBase {
    /// Logarithm of `x` in this base.
    pub fn log<R: Scalar>(self, x: R) -> R {
        match self {
            LogBase::Bits => x.log2(),
            LogBase::Nats => x.ln(),
        }
    }

    /// Inverse of [`LogBase::log`].
    pub fn exp<R: Scalar>(self, x: R) -> R {
        match self {
            LogBase::Bits => x.exp2(),
            LogBase::Nats => x.exp(),
        }
    }

    /// Converts a value measured in nats into this base.
    pub fn from_nats<R: Scalar>(self, nats: R) -> R {
        match self {
            LogBase::Bits => nats / R::LN_2(),
            LogBase::Nats => nats,
        }
    }

    /// Converts a value measured in this base into nats.
    pub fn to_nats<R: Scalar>(self, value: R) -> R {
        match self {
            LogBase::Bits => value * R::LN_2(),
            LogBase::Nats => value,
        }
    }
}

impl fmt::Display for LogBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogBase::Bits => write!(f, "bits"),
            LogBase::Nats => write!(f, "nats"),
        }
    }
}

/// Tensor factor of a bipartite space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// All tolerances used by the numerical kernel, in one place.
///
/// The defaults are calibrated for `f64`; for wider-epsilon scalars each
/// tolerance is floored at `100 * epsilon` so the same code remains usable
/// with `f32`.
#[derive(Clone, Debug)]
pub struct NumericPolicy<R> {
    /// Relative Frobenius tolerance for Hermiticity checks (default 1e-10).
    pub hermiticity_tol: R,
    /// Eigensolver stops once the off-diagonal Frobenius norm is below this
    /// multiple of the matrix norm (default 1e-12).
    pub eig_convergence: R,
    /// Sweep budget for the Jacobi eigensolver (default 100).
    pub eig_max_sweeps: usize,
    /// Eigenvalues at or below this are treated as rank deficiency by the
    /// matrix logarithm (default 1e-12).
    pub rank_epsilon: R,
    /// Density-matrix eigenvalues may undershoot zero by this much
    /// (default 1e-10).
    pub psd_tol: R,
    /// Allowed deviation of a density-matrix trace from one (default 1e-10).
    pub trace_tol: R,
    /// Slack on the conditional-entropy sign for set membership
    /// (default 1e-10).
    pub membership_tol: R,
    /// Largest imaginary part tolerated where a real number is expected
    /// (default 1e-10).
    pub imag_tol: R,
    /// An operator counts as a witness when its smallest eigenvalue is below
    /// the negation of this (default 1e-10).
    pub negativity_tol: R,
    /// Decomposition coefficients smaller than this in magnitude are pruned
    /// (default 1e-12).
    pub prune_tol: R,
}

impl<R: Scalar> NumericPolicy<R> {
    fn floored(stated: f64) -> R {
        real::<R>(stated).max(R::epsilon() * real(100.0))
    }
}

impl<R: Scalar> Default for NumericPolicy<R> {
    fn default() -> Self {
        NumericPolicy {
            hermiticity_tol: Self::floored(1e-10),
            eig_convergence: Self::floored(1e-12),
            eig_max_sweeps: 100,
            rank_epsilon: Self::floored(1e-12),
            psd_tol: Self::floored(1e-10),
            trace_tol: Self::floored(1e-10),
            membership_tol: Self::floored(1e-10),
            imag_tol: Self::floored(1e-10),
            negativity_tol: Self::floored(1e-10),
            prune_tol: Self::floored(1e-12),
        }
    }
}

/// Errors from the matrix kernel.
#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("DimensionMismatch: {0}")]
    DimensionMismatch(String),
    #[error("NotHermitian: Hermiticity defect {defect:.3e} exceeds tolerance {tolerance:.3e}")]
    NotHermitian { defect: f64, tolerance: f64 },
    #[error("NoConvergence: off-diagonal norm {off_norm:.3e} after {sweeps} Jacobi sweeps")]
    NoConvergence { off_norm: f64, sweeps: usize },
    #[error("RankDeficient: smallest eigenvalue {min_eigenvalue:.3e} is at or below the rank floor")]
    RankDeficient { min_eigenvalue: f64 },
}

fn diag_f64<R: Scalar>(x: R) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Dense row-major complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix<R> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<R>>,
}

impl<R: Scalar> ComplexMatrix<R> {
    /// Zero matrix of the given shape.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            data: vec![Complex::zero(); rows * cols],
        }
    }

    /// Identity matrix of size `n`.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::new(R::one(), R::zero());
        }
        m
    }

    /// Matrix with entries supplied by `f(row, col)`.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex<R>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        ComplexMatrix { rows, cols, data }
    }

    /// Matrix from a row-major entry list; `entries.len()` must equal
    /// `rows * cols`.
    pub fn from_entries(rows: usize, cols: usize, entries: Vec<Complex<R>>) -> Self {
        assert_eq!(
            entries.len(),
            rows * cols,
            "entry list length {} does not match shape {}x{}",
            entries.len(),
            rows,
            cols
        );
        ComplexMatrix {
            rows,
            cols,
            data: entries,
        }
    }

    /// Diagonal matrix with the given real diagonal.
    pub fn diagonal(diag: &[R]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex::new(d, R::zero());
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

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        ComplexMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    /// Sum of diagonal entries.
    pub fn trace(&self) -> Complex<R> {
        assert!(self.is_square(), "trace requires a square matrix");
        let mut t = Complex::zero();
        for i in 0..self.rows {
            t = t + self[(i, i)];
        }
        t
    }

    /// Frobenius norm, `sqrt(sum |m_ij|^2)`.
    pub fn frobenius_norm(&self) -> R {
        self.data
            .iter()
            .map(|z| z.norm_sqr())
            .fold(R::zero(), |acc, x| acc + x)
            .sqrt()
    }

    /// Frobenius norm of `M - M^dagger`; zero exactly for Hermitian matrices.
    pub fn hermiticity_defect(&self) -> R {
        assert!(self.is_square(), "Hermiticity is defined for square matrices");
        let mut sum = R::zero();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let d = self[(i, j)] - self[(j, i)].conj();
                sum = sum + d.norm_sqr();
            }
        }
        sum.sqrt()
    }

    /// Entrywise scaling by a complex factor.
    pub fn scaled(&self, z: Complex<R>) -> Self {
        self.map(|e| e * z)
    }

    /// Entrywise scaling by a real factor.
    pub fn scaled_re(&self, r: R) -> Self {
        self.map(|e| e.scale(r))
    }

    /// `self + t * other`, used for line searches and finite differences.
    pub fn add_scaled(&self, other: &Self, t: R) -> Self {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "add_scaled requires equal shapes"
        );
        ComplexMatrix::from_fn(self.rows, self.cols, |i, j| {
            self[(i, j)] + other[(i, j)].scale(t)
        })
    }

    /// Largest entrywise absolute difference to `other`.
    pub fn max_abs_diff(&self, other: &Self) -> R {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "max_abs_diff requires equal shapes"
        );
        let mut m = R::zero();
        for (a, b) in self.data.iter().zip(other.data.iter()) {
            m = m.max((*a - *b).norm());
        }
        m
    }

    /// Entrywise map.
    pub fn map(&self, f: impl Fn(Complex<R>) -> Complex<R>) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    /// Copy of column `j`.
    pub fn column(&self, j: usize) -> Vec<Complex<R>> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// Row-major entry slice.
    pub fn entries(&self) -> &[Complex<R>] {
        &self.data
    }
}

impl<R: Scalar> Index<(usize, usize)> for ComplexMatrix<R> {
    type Output = Complex<R>;

    fn index(&self, (i, j): (usize, usize)) -> &Complex<R> {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<R: Scalar> IndexMut<(usize, usize)> for ComplexMatrix<R> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<R> {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<R: Scalar> Add for &ComplexMatrix<R> {
    type Output = ComplexMatrix<R>;

    fn add(self, rhs: &ComplexMatrix<R>) -> ComplexMatrix<R> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in +");
        ComplexMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)] + rhs[(i, j)])
    }
}

impl<R: Scalar> Sub for &ComplexMatrix<R> {
    type Output = ComplexMatrix<R>;

    fn sub(self, rhs: &ComplexMatrix<R>) -> ComplexMatrix<R> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in -");
        ComplexMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)] - rhs[(i, j)])
    }
}

impl<R: Scalar> Mul for &ComplexMatrix<R> {
    type Output = ComplexMatrix<R>;

    fn mul(self, rhs: &ComplexMatrix<R>) -> ComplexMatrix<R> {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in *");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self[(i, k)];
                if aik == Complex::zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] = out[(i, j)] + aik * rhs[(k, j)];
                }
            }
        }
        out
    }
}

/// Hermitian part `(M + M^dagger) / 2`.
///
/// The output satisfies `h[(i, j)] == h[(j, i)].conj()` exactly, because each
/// pair is produced from the same floating-point sum.
pub fn hermitize<R: Scalar>(m: &ComplexMatrix<R>) -> ComplexMatrix<R> {
    assert!(m.is_square(), "hermitize requires a square matrix");
    let half = real::<R>(0.5);
    ComplexMatrix::from_fn(m.rows(), m.cols(), |i, j| {
        (m[(i, j)] + m[(j, i)].conj()).scale(half)
    })
}

/// Kronecker (tensor) product `a (x) b`.
pub fn tensor_product<R: Scalar>(a: &ComplexMatrix<R>, b: &ComplexMatrix<R>) -> ComplexMatrix<R> {
    let (ra, ca) = (a.rows(), a.cols());
    let (rb, cb) = (b.rows(), b.cols());
    ComplexMatrix::from_fn(ra * rb, ca * cb, |i, j| {
        a[(i / rb, j / cb)] * b[(i % rb, j % cb)]
    })
}

/// Partial trace of a bipartite operator over one tensor factor.
///
/// `m` is indexed as `row = i * dB + j` for basis vectors `|i>_A (x) |j>_B`
/// with `dims = (dA, dB)`.
pub fn partial_trace<R: Scalar>(
    m: &ComplexMatrix<R>,
    dims: (usize, usize),
    traced: Subsystem,
) -> Result<ComplexMatrix<R>, LinalgError> {
    let (da, db) = dims;
    if da == 0 || db == 0 {
        return Err(LinalgError::DimensionMismatch(
            "subsystem dimensions must be positive".into(),
        ));
    }
    if !m.is_square() || m.rows() != da * db {
        return Err(LinalgError::DimensionMismatch(format!(
            "matrix is {}x{} but dims ({}, {}) require {}x{}",
            m.rows(),
            m.cols(),
            da,
            db,
            da * db,
            da * db
        )));
    }
    match traced {
        // (Tr_A m)[j, l] = sum_i m[i dB + j, i dB + l]
        Subsystem::A => Ok(ComplexMatrix::from_fn(db, db, |j, l| {
            let mut s = Complex::zero();
            for i in 0..da {
                s = s + m[(i * db + j, i * db + l)];
            }
            s
        })),
        // (Tr_B m)[i, k] = sum_j m[i dB + j, k dB + j]
        Subsystem::B => Ok(ComplexMatrix::from_fn(da, da, |i, k| {
            let mut s = Complex::zero();
            for j in 0..db {
                s = s + m[(i * db + j, k * db + j)];
            }
            s
        })),
    }
}

/// Frobenius inner product `Tr(a^dagger b)`.
///
/// Real (up to roundoff) whenever both arguments are Hermitian.
pub fn frobenius_inner<R: Scalar>(
    a: &ComplexMatrix<R>,
    b: &ComplexMatrix<R>,
) -> Result<Complex<R>, LinalgError> {
    if (a.rows(), a.cols()) != (b.rows(), b.cols()) {
        return Err(LinalgError::DimensionMismatch(format!(
            "inner product of {}x{} with {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    let mut s = Complex::zero();
    for (x, y) in a.entries().iter().zip(b.entries().iter()) {
        s = s + x.conj() * *y;
    }
    Ok(s)
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Eigenvalues are real and sorted in descending order; `eigenvectors`
/// holds the matching orthonormal eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct EigenDecomposition<R> {
    eigenvalues: Vec<R>,
    eigenvectors: ComplexMatrix<R>,
}

impl<R: Scalar> EigenDecomposition<R> {
    pub fn eigenvalues(&self) -> &[R] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &ComplexMatrix<R> {
        &self.eigenvectors
    }

    pub fn min_eigenvalue(&self) -> R {
        // Sorted descending, so the last entry is the smallest.
        *self.eigenvalues.last().expect("eigendecomposition is never empty")
    }

    /// Rebuilds `V diag(f(lambda)) V^dagger`.
    pub fn apply(&self, f: impl Fn(R) -> R) -> ComplexMatrix<R> {
        let mapped: Vec<R> = self.eigenvalues.iter().map(|&lam| f(lam)).collect();
        assemble_spectral(&self.eigenvectors, &mapped)
    }

    /// Rebuilds the original matrix `V diag(lambda) V^dagger`.
    pub fn reconstruct(&self) -> ComplexMatrix<R> {
        self.apply(|x| x)
    }

    /// Consumes the decomposition, yielding `(eigenvalues, eigenvectors)`.
    pub fn into_parts(self) -> (Vec<R>, ComplexMatrix<R>) {
        (self.eigenvalues, self.eigenvectors)
    }
}

/// Assembles `V diag(values) V^dagger` from orthonormal columns `V` and a
/// replacement spectrum (zero entries contribute nothing and are skipped).
pub fn assemble_spectral<R: Scalar>(
    vectors: &ComplexMatrix<R>,
    values: &[R],
) -> ComplexMatrix<R> {
    let n = vectors.rows();
    assert_eq!(
        vectors.cols(),
        values.len(),
        "one value per eigenvector column"
    );
    let mut out = ComplexMatrix::zeros(n, n);
    for (k, &lam) in values.iter().enumerate() {
        if lam == R::zero() {
            continue;
        }
        for i in 0..n {
            let vik = vectors[(i, k)];
            for j in 0..n {
                out[(i, j)] = out[(i, j)] + (vik * vectors[(j, k)].conj()).scale(lam);
            }
        }
    }
    out
}

fn off_diagonal_norm<R: Scalar>(m: &ComplexMatrix<R>) -> R {
    let mut sum = R::zero();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if i != j {
                sum = sum + m[(i, j)].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// Applies one Jacobi rotation annihilating the `(p, q)` entry of `a`,
/// accumulating the rotation into `v`.
fn jacobi_rotate<R: Scalar>(a: &mut ComplexMatrix<R>, v: &mut ComplexMatrix<R>, p: usize, q: usize) {
    let apq = a[(p, q)];
    let babs = apq.norm();
    if babs == R::zero() {
        return;
    }
    let one = R::one();
    let two = one + one;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // The rotation angle solves tan(2t) = 2|a_pq| / (a_qq - a_pp); the root
    // with |t| <= 1 keeps the iteration stable.
    let theta = (aqq - app) / (two * babs);
    let t = if theta >= R::zero() {
        one / (theta + (theta * theta + one).sqrt())
    } else {
        one / (theta - (theta * theta + one).sqrt())
    };
    let c = one / (t * t + one).sqrt();
    let s = t * c;
    let w = apq.unscale(babs); // phase of the pivot entry, |w| = 1
    let ws = w.scale(s);
    let wcs = w.conj().scale(s);

    let n = a.rows();
    // A <- A B with B the identity outside the (p, q) block,
    // B[p][p] = B[q][q] = c, B[p][q] = s w, B[q][p] = -s conj(w).
    for i in 0..n {
        let aip = a[(i, p)];
        let aiq = a[(i, q)];
        a[(i, p)] = aip.scale(c) - aiq * wcs;
        a[(i, q)] = aip * ws + aiq.scale(c);
    }
    // A <- B^dagger A.
    for j in 0..n {
        let apj = a[(p, j)];
        let aqj = a[(q, j)];
        a[(p, j)] = apj.scale(c) - aqj * ws;
        a[(q, j)] = apj * wcs + aqj.scale(c);
    }
    // The pivot is zero and the diagonal real in exact arithmetic; enforce
    // both so roundoff cannot accumulate over sweeps.
    a[(p, q)] = Complex::zero();
    a[(q, p)] = Complex::zero();
    a[(p, p)] = Complex::new(a[(p, p)].re, R::zero());
    a[(q, q)] = Complex::new(a[(q, q)].re, R::zero());
    // V <- V B.
    for i in 0..n {
        let vip = v[(i, p)];
        let viq = v[(i, q)];
        v[(i, p)] = vip.scale(c) - viq * wcs;
        v[(i, q)] = vip * ws + viq.scale(c);
    }
}

/// Eigendecomposition of a complex Hermitian matrix with the default policy.
pub fn hermitian_eig<R: Scalar>(
    m: &ComplexMatrix<R>,
) -> Result<EigenDecomposition<R>, LinalgError> {
    hermitian_eig_with(m, &NumericPolicy::default())
}

/// Eigendecomposition of a complex Hermitian matrix (cyclic Jacobi).
pub fn hermitian_eig_with<R: Scalar>(
    m: &ComplexMatrix<R>,
    policy: &NumericPolicy<R>,
) -> Result<EigenDecomposition<R>, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::DimensionMismatch(format!(
            "eigendecomposition of a {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    let defect = m.hermiticity_defect();
    let scale = m.frobenius_norm().max(R::one());
    let tolerance = policy.hermiticity_tol * scale;
    if defect > tolerance {
        return Err(LinalgError::NotHermitian {
            defect: diag_f64(defect),
            tolerance: diag_f64(tolerance),
        });
    }

    let n = m.rows();
    let mut a = hermitize(m); // exact symmetrisation before iterating
    let mut v = ComplexMatrix::identity(n);
    let threshold = policy.eig_convergence * a.frobenius_norm();

    let mut sweeps = 0;
    let mut off = off_diagonal_norm(&a);
    while off > threshold {
        if sweeps == policy.eig_max_sweeps {
            return Err(LinalgError::NoConvergence {
                off_norm: diag_f64(off),
                sweeps,
            });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                jacobi_rotate(&mut a, &mut v, p, q);
            }
        }
        sweeps += 1;
        off = off_diagonal_norm(&a);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[(j, j)]
            .re
            .partial_cmp(&a[(i, i)].re)
            .expect("eigenvalues of a Hermitian matrix are finite")
    });
    let eigenvalues: Vec<R> = order.iter().map(|&k| a[(k, k)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// Matrix logarithm of a full-rank positive matrix, on its spectrum, with the
/// default policy.
pub fn matrix_log<R: Scalar>(
    m: &ComplexMatrix<R>,
    base: LogBase,
) -> Result<ComplexMatrix<R>, LinalgError> {
    matrix_log_with(m, base, &NumericPolicy::default())
}

/// Matrix logarithm `V diag(log lambda) V^dagger`.
///
/// Fails with [`LinalgError::RankDeficient`] when any eigenvalue is at or
/// below `policy.rank_epsilon`, since the logarithm diverges there.
pub fn matrix_log_with<R: Scalar>(
    m: &ComplexMatrix<R>,
    base: LogBase,
    policy: &NumericPolicy<R>,
) -> Result<ComplexMatrix<R>, LinalgError> {
    let eig = hermitian_eig_with(m, policy)?;
    let min = eig.min_eigenvalue();
    if min <= policy.rank_epsilon {
        return Err(LinalgError::RankDeficient {
            min_eigenvalue: diag_f64(min),
        });
    }
    Ok(hermitize(&eig.apply(|lam| base.log(lam))))
}

/// Applies a real function to the spectrum of a Hermitian matrix.
pub fn spectral_map<R: Scalar>(
    m: &ComplexMatrix<R>,
    f: impl Fn(R) -> R,
) -> Result<ComplexMatrix<R>, LinalgError> {
    Ok(hermitize(&hermitian_eig(m)?.apply(f)))
}

/// Euclidean projection of a real vector onto the probability simplex
/// (entries non-negative, summing to one).
///
/// Standard sort-and-threshold construction: with the entries sorted in
/// descending order, find the largest `k` such that
/// `u_k - (sum_{i<=k} u_i - 1) / k > 0`; that prefix determines the shift
/// `tau`, and the projection is `max(x - tau, 0)` entrywise.
pub fn simplex_project<R: Scalar>(values: &[R]) -> Vec<R> {
    if values.is_empty() {
        return Vec::new();
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).expect("simplex projection requires finite values"));
    let mut cumulative = R::zero();
    let mut tau = R::zero();
    for (i, &u) in sorted.iter().enumerate() {
        cumulative += u;
        let candidate = (cumulative - R::one()) / real((i + 1) as f64);
        if u - candidate > R::zero() {
            tau = candidate;
        }
    }
    values.iter().map(|&x| (x - tau).max(R::zero())).collect()
}
