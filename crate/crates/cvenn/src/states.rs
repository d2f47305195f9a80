//! Validated density matrices, standard bipartite state families, and seeded
//! random sampling.
//!
//! A [`DensityMatrix`] is constructed only through validation (Hermitian,
//! positive semidefinite within tolerance, unit trace) and caches its
//! eigenvalue spectrum, which the entropy functionals reuse.

use num_complex::Complex;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::entropy::{self, Conditioning};
use crate::linalg::{
    hermitian_eig_with, partial_trace, real, ComplexMatrix, LinalgError, LogBase, NumericPolicy,
    Scalar, Subsystem,
};

/// Errors from state construction and sampling.
#[derive(Debug, Error)]
pub enum StateError {
    #[error("DimensionMismatch: {0}")]
    DimensionMismatch(String),
    #[error("NotHermitian: Hermiticity defect {defect:.3e} exceeds tolerance {tolerance:.3e}")]
    NotHermitian { defect: f64, tolerance: f64 },
    #[error("NotPositive: most negative eigenvalue {min_eigenvalue:.3e}")]
    NotPositive { min_eigenvalue: f64 },
    #[error("TraceNotOne: trace deviates from one by {deviation:.3e}")]
    TraceNotOne { deviation: f64 },
    #[error("ParameterOutOfRange: {name} = {value} lies outside [{min}, {max}]")]
    ParameterOutOfRange {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },
    #[error("SamplingBudgetExhausted: no admissible sample within {attempts} attempts")]
    SamplingBudgetExhausted { attempts: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

fn diag_f64<R: Scalar>(x: R) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// A validated bipartite density matrix with its eigenvalue spectrum cached.
#[derive(Clone, Debug)]
pub struct DensityMatrix<R> {
    matrix: ComplexMatrix<R>,
    dims: (usize, usize),
    spectrum: Vec<R>,
}

impl<R: Scalar> DensityMatrix<R> {
    /// Validates `matrix` as a density matrix on a `dims.0 (x) dims.1` space.
    pub fn new(matrix: ComplexMatrix<R>, dims: (usize, usize)) -> Result<Self, StateError> {
        Self::new_with(matrix, dims, &NumericPolicy::default())
    }

    /// Validation with an explicit numeric policy.
    pub fn new_with(
        matrix: ComplexMatrix<R>,
        dims: (usize, usize),
        policy: &NumericPolicy<R>,
    ) -> Result<Self, StateError> {
        let (da, db) = dims;
        if da == 0 || db == 0 {
            return Err(StateError::DimensionMismatch(
                "subsystem dimensions must be positive".into(),
            ));
        }
        if !matrix.is_square() || matrix.rows() != da * db {
            return Err(StateError::DimensionMismatch(format!(
                "matrix is {}x{} but dims ({}, {}) require {}x{}",
                matrix.rows(),
                matrix.cols(),
                da,
                db,
                da * db,
                da * db
            )));
        }
        let defect = matrix.hermiticity_defect();
        let tolerance = policy.hermiticity_tol * matrix.frobenius_norm().max(R::one());
        if defect > tolerance {
            return Err(StateError::NotHermitian {
                defect: diag_f64(defect),
                tolerance: diag_f64(tolerance),
            });
        }
        let trace = matrix.trace();
        let deviation = (trace - Complex::new(R::one(), R::zero())).norm();
        if deviation > policy.trace_tol {
            return Err(StateError::TraceNotOne {
                deviation: diag_f64(deviation),
            });
        }
        let eig = hermitian_eig_with(&matrix, policy)?;
        let min = eig.min_eigenvalue();
        if min < -policy.psd_tol {
            return Err(StateError::NotPositive {
                min_eigenvalue: diag_f64(min),
            });
        }
        Ok(DensityMatrix {
            matrix,
            dims,
            spectrum: eig.eigenvalues().to_vec(),
        })
    }

    pub fn matrix(&self) -> &ComplexMatrix<R> {
        &self.matrix
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    pub fn dim_a(&self) -> usize {
        self.dims.0
    }

    pub fn dim_b(&self) -> usize {
        self.dims.1
    }

    pub fn total_dim(&self) -> usize {
        self.dims.0 * self.dims.1
    }

    /// Eigenvalues in descending order, cached at validation time.
    pub fn spectrum(&self) -> &[R] {
        &self.spectrum
    }

    /// Reduced matrix of the kept subsystem (the other one is traced out).
    pub fn marginal(&self, keep: Subsystem) -> ComplexMatrix<R> {
        let traced = match keep {
            Subsystem::A => Subsystem::B,
            Subsystem::B => Subsystem::A,
        };
        partial_trace(&self.matrix, self.dims, traced)
            .expect("dims were checked at construction")
    }

    /// Reduced state of the kept subsystem, as a single-party density matrix.
    pub fn marginal_state(&self, keep: Subsystem) -> DensityMatrix<R> {
        let m = self.marginal(keep);
        let d = m.rows();
        DensityMatrix::new(m, (d, 1)).expect("a marginal of a valid state is a valid state")
    }
}

/// Convex mixture `(1 - t) a + t b`.
pub fn mix<R: Scalar>(
    a: &DensityMatrix<R>,
    b: &DensityMatrix<R>,
    t: R,
) -> Result<DensityMatrix<R>, StateError> {
    if a.dims() != b.dims() {
        return Err(StateError::DimensionMismatch(format!(
            "mixing states with dims {:?} and {:?}",
            a.dims(),
            b.dims()
        )));
    }
    let m = a.matrix().scaled_re(R::one() - t).add_scaled(b.matrix(), t);
    DensityMatrix::new(m, a.dims())
}

fn max_entangled_matrix<R: Scalar>(d: usize) -> ComplexMatrix<R> {
    let amp = R::one() / real(d as f64);
    ComplexMatrix::from_fn(d * d, d * d, |r, s| {
        let (i, j) = (r / d, r % d);
        let (k, l) = (s / d, s % d);
        if i == j && k == l {
            Complex::new(amp, R::zero())
        } else {
            Complex::zero()
        }
    })
}

/// Werner state `p |phi+><phi+| + (1 - p) I/4` on two qubits.
pub fn werner<R: Scalar>(p: R) -> Result<DensityMatrix<R>, StateError> {
    if p < R::zero() || p > R::one() {
        return Err(StateError::ParameterOutOfRange {
            name: "p",
            value: diag_f64(p),
            min: 0.0,
            max: 1.0,
        });
    }
    let uniform = (R::one() - p) / real(4.0);
    let m = ComplexMatrix::identity(4)
        .scaled_re(uniform)
        .add_scaled(&max_entangled_matrix(2), p);
    DensityMatrix::new(m, (2, 2))
}

/// Isotropic state `alpha |phi+><phi+| + (1 - alpha) I/d^2` on two qudits.
///
/// `alpha` ranges over `[-1/(d^2 - 1), 1]`; below that the operator stops
/// being positive semidefinite.
pub fn isotropic<R: Scalar>(alpha: R, d: usize) -> Result<DensityMatrix<R>, StateError> {
    if d < 2 {
        return Err(StateError::ParameterOutOfRange {
            name: "d",
            value: d as f64,
            min: 2.0,
            max: f64::INFINITY,
        });
    }
    let lo = -(R::one() / real((d * d - 1) as f64));
    if alpha < lo || alpha > R::one() {
        return Err(StateError::ParameterOutOfRange {
            name: "alpha",
            value: diag_f64(alpha),
            min: diag_f64(lo),
            max: 1.0,
        });
    }
    let uniform = (R::one() - alpha) / real((d * d) as f64);
    let m = ComplexMatrix::identity(d * d)
        .scaled_re(uniform)
        .add_scaled(&max_entangled_matrix(d), alpha);
    DensityMatrix::new(m, (d, d))
}

/// Maximally entangled state `|phi+><phi+|` with `|phi+> = sum_i |ii> / sqrt(d)`.
pub fn max_entangled<R: Scalar>(d: usize) -> DensityMatrix<R> {
    assert!(d >= 2, "a maximally entangled state needs local dimension >= 2");
    DensityMatrix::new(max_entangled_matrix(d), (d, d))
        .expect("the maximally entangled projector is a valid state")
}

/// Maximally mixed state `I / (dA dB)`.
pub fn maximally_mixed<R: Scalar>(dims: (usize, usize)) -> DensityMatrix<R> {
    let n = dims.0 * dims.1;
    assert!(n >= 1, "state space must be non-trivial");
    let m = ComplexMatrix::identity(n).scaled_re(R::one() / real(n as f64));
    DensityMatrix::new(m, dims).expect("the maximally mixed state is a valid state")
}

fn ginibre_density<R: Scalar>(rng: &mut ChaCha12Rng, dims: (usize, usize)) -> DensityMatrix<R> {
    let n = dims.0 * dims.1;
    let g: ComplexMatrix<R> = ComplexMatrix::from_fn(n, n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex::new(real(re), real(im))
    });
    let gg = &g * &g.adjoint();
    let m = gg.scaled_re(R::one() / gg.trace().re);
    DensityMatrix::new(m, dims).expect("a normalised Ginibre product is a valid state")
}

/// Random density matrix from the Hilbert-Schmidt (Ginibre) ensemble.
///
/// Fully determined by `seed`; the same seed always yields the same state.
pub fn random_density<R: Scalar>(dims: (usize, usize), seed: u64) -> DensityMatrix<R> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    ginibre_density(&mut rng, dims)
}

/// Budget of candidate draws for [`random_cvenn`].
pub const CVENN_SAMPLING_BUDGET: usize = 100_000;

/// Random state with non-negative conditional entropy, by rejection sampling
/// from the Hilbert-Schmidt ensemble.
pub fn random_cvenn<R: Scalar>(
    dims: (usize, usize),
    seed: u64,
) -> Result<DensityMatrix<R>, StateError> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    for _ in 0..CVENN_SAMPLING_BUDGET {
        let candidate = ginibre_density(&mut rng, dims);
        // The sign of the conditional entropy does not depend on the
        // logarithm base; nats is the internal convention.
        if entropy::conditional_entropy(&candidate, Conditioning::AGivenB, LogBase::Nats)
            >= R::zero()
        {
            return Ok(candidate);
        }
    }
    Err(StateError::SamplingBudgetExhausted {
        attempts: CVENN_SAMPLING_BUDGET,
    })
}

/// The one-parameter families the scanner understands.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    Werner,
    Isotropic,
}

/// A member of a one-parameter state family.
#[derive(Clone, Copy, Debug)]
pub struct StateFamily<R> {
    kind: FamilyKind,
    parameter: R,
    d: usize,
}

impl<R: Scalar> StateFamily<R> {
    pub fn new(kind: FamilyKind, parameter: R, d: usize) -> Result<Self, StateError> {
        match kind {
            FamilyKind::Werner => {
                if d != 2 {
                    return Err(StateError::DimensionMismatch(
                        "the Werner family is defined on two qubits (d = 2)".into(),
                    ));
                }
            }
            FamilyKind::Isotropic => {
                if d < 2 {
                    return Err(StateError::ParameterOutOfRange {
                        name: "d",
                        value: d as f64,
                        min: 2.0,
                        max: f64::INFINITY,
                    });
                }
            }
        }
        let (lo, hi) = Self::parameter_range(kind, d);
        if parameter < lo || parameter > hi {
            return Err(StateError::ParameterOutOfRange {
                name: "parameter",
                value: diag_f64(parameter),
                min: diag_f64(lo),
                max: diag_f64(hi),
            });
        }
        Ok(StateFamily { kind, parameter, d })
    }

    /// Valid parameter interval of the family (inclusive).
    pub fn parameter_range(kind: FamilyKind, d: usize) -> (R, R) {
        match kind {
            FamilyKind::Werner => (R::zero(), R::one()),
            FamilyKind::Isotropic => (-(R::one() / real((d * d - 1) as f64)), R::one()),
        }
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn parameter(&self) -> R {
        self.parameter
    }

    pub fn local_dim(&self) -> usize {
        self.d
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.d, self.d)
    }

    /// Builds the state this family member describes.
    pub fn realize(&self) -> DensityMatrix<R> {
        match self.kind {
            FamilyKind::Werner => werner(self.parameter),
            FamilyKind::Isotropic => isotropic(self.parameter, self.d),
        }
        .expect("parameters were validated at construction")
    }
}
