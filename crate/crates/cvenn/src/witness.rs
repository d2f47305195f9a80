//! Witness operators that certify negative conditional entropy.
//!
//! Two constructions are provided. The logarithmic witness of a full-rank
//! state `rho` is `W = -log rho + I (x) log rho_B`; its expectation on `rho`
//! equals `S(A|B)(rho)` exactly, so a negative expectation certifies the
//! state. The geometric witness is built from a target state and its closest
//! member of the non-negative-conditional-entropy set; its expectation on the
//! target equals minus their Frobenius distance, and it vanishes on the
//! closest member (the supporting-hyperplane normalisation).

use thiserror::Error;

use crate::linalg::{
    frobenius_inner, hermitian_eig_with, hermitize, matrix_log, real, tensor_product,
    ComplexMatrix, LinalgError, LogBase, NumericPolicy, Scalar, Subsystem,
};
use crate::states::DensityMatrix;

/// Errors from witness construction and evaluation.
#[derive(Debug, Error)]
pub enum WitnessError {
    #[error("DimensionMismatch: {0}")]
    DimensionMismatch(String),
    #[error("DegenerateSeparation: states coincide within {separation:.3e}; no witness direction exists")]
    DegenerateSeparation { separation: f64 },
    #[error("NotRescalable: only logarithmic witnesses carry a base; dimensionless operators cannot be rescaled")]
    NotRescalable,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// What kind of operator a [`HermitianOperator`] is.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OperatorKind {
    /// Built from matrix logarithms; carries the base its entries are in.
    Logarithmic(LogBase),
    /// Unit-free (e.g. the geometric witness or a measured observable).
    Dimensionless,
}

/// A validated Hermitian operator on a bipartite (or single-party) space.
#[derive(Clone, Debug)]
pub struct HermitianOperator<R> {
    matrix: ComplexMatrix<R>,
    dims: (usize, usize),
    kind: OperatorKind,
    min_eigenvalue: R,
}

impl<R: Scalar> HermitianOperator<R> {
    /// Validates Hermiticity and records the minimum eigenvalue.
    pub fn new(
        matrix: ComplexMatrix<R>,
        dims: (usize, usize),
        kind: OperatorKind,
    ) -> Result<Self, WitnessError> {
        if dims.0 == 0 || dims.1 == 0 {
            return Err(WitnessError::DimensionMismatch(
                "subsystem dimensions must be positive".into(),
            ));
        }
        if !matrix.is_square() || matrix.rows() != dims.0 * dims.1 {
            return Err(WitnessError::DimensionMismatch(format!(
                "matrix is {}x{} but dims ({}, {}) require {}x{}",
                matrix.rows(),
                matrix.cols(),
                dims.0,
                dims.1,
                dims.0 * dims.1,
                dims.0 * dims.1
            )));
        }
        let policy = NumericPolicy::<R>::default();
        let eig = hermitian_eig_with(&matrix, &policy)?;
        let min_eigenvalue = eig.min_eigenvalue();
        Ok(HermitianOperator {
            matrix,
            dims,
            kind,
            min_eigenvalue,
        })
    }

    pub fn matrix(&self) -> &ComplexMatrix<R> {
        &self.matrix
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    /// Smallest eigenvalue, recorded at construction.
    pub fn min_eigenvalue(&self) -> R {
        self.min_eigenvalue
    }

    /// A proper witness must fail to be positive semidefinite: it needs a
    /// negative eigenvalue to be able to flag any state at all.
    pub fn is_witness(&self) -> bool {
        let policy = NumericPolicy::<R>::default();
        self.min_eigenvalue < -policy.negativity_tol
    }
}

/// Logarithmic witness `W = -log rho + I (x) log rho_B` of a full-rank state.
///
/// `Tr(W rho) = S(A|B)(rho)` in the chosen base. Rank-deficient states have
/// no matrix logarithm; they are rejected with a `RankDeficient` error.
pub fn log_witness<R: Scalar>(
    rho: &DensityMatrix<R>,
    base: LogBase,
) -> Result<HermitianOperator<R>, WitnessError> {
    let log_joint = matrix_log(rho.matrix(), base)?;
    let rho_b = rho.marginal(Subsystem::B);
    let log_b = matrix_log(&rho_b, base)?;
    let lifted = tensor_product(&ComplexMatrix::identity(rho.dim_a()), &log_b);
    let w = hermitize(&(&lifted - &log_joint));
    HermitianOperator::new(w, rho.dims(), OperatorKind::Logarithmic(base))
}

/// Geometric witness from a target state and its closest member `sigma_c` of
/// the non-negative-conditional-entropy set:
/// `W = [Tr(sigma_c rho_s - sigma_c^2) I + sigma_c - rho_s] / ||sigma_c - rho_s||_F`.
pub fn geometric_witness<R: Scalar>(
    rho_s: &DensityMatrix<R>,
    sigma_c: &DensityMatrix<R>,
) -> Result<HermitianOperator<R>, WitnessError> {
    if rho_s.dims() != sigma_c.dims() {
        return Err(WitnessError::DimensionMismatch(format!(
            "target has dims {:?} but closest state has dims {:?}",
            rho_s.dims(),
            sigma_c.dims()
        )));
    }
    let diff = sigma_c.matrix() - rho_s.matrix();
    let separation = diff.frobenius_norm();
    if separation <= real(1e-12) {
        return Err(WitnessError::DegenerateSeparation {
            separation: separation.to_f64().unwrap_or(f64::NAN),
        });
    }
    let overlap = frobenius_inner(sigma_c.matrix(), rho_s.matrix())?.re;
    let purity = frobenius_inner(sigma_c.matrix(), sigma_c.matrix())?.re;
    let shifted = ComplexMatrix::identity(rho_s.total_dim())
        .scaled_re(overlap - purity)
        .add_scaled(&diff, R::one());
    let w = hermitize(&shifted.scaled_re(R::one() / separation));
    HermitianOperator::new(w, rho_s.dims(), OperatorKind::Dimensionless)
}

/// Expectation value `Tr(W rho)`, guaranteed real for Hermitian inputs.
pub fn eval_witness<R: Scalar>(
    witness: &HermitianOperator<R>,
    rho: &DensityMatrix<R>,
) -> Result<R, WitnessError> {
    if witness.dims() != rho.dims() {
        return Err(WitnessError::DimensionMismatch(format!(
            "witness has dims {:?} but state has dims {:?}",
            witness.dims(),
            rho.dims()
        )));
    }
    let policy = NumericPolicy::<R>::default();
    let val = frobenius_inner(witness.matrix(), rho.matrix())?;
    assert!(
        val.im.abs() <= policy.imag_tol,
        "expectation of a Hermitian operator must be real; got imaginary part {:?}",
        val.im.to_f64()
    );
    Ok(val.re)
}

/// Re-expresses a logarithmic witness in another base (an exact overall
/// rescaling by `ln 2`). Dimensionless operators carry no base.
pub fn rescale_base<R: Scalar>(
    witness: &HermitianOperator<R>,
    to: LogBase,
) -> Result<HermitianOperator<R>, WitnessError> {
    let from = match witness.kind() {
        OperatorKind::Logarithmic(base) => base,
        OperatorKind::Dimensionless => return Err(WitnessError::NotRescalable),
    };
    let factor = match (from, to) {
        (LogBase::Bits, LogBase::Bits) | (LogBase::Nats, LogBase::Nats) => R::one(),
        (LogBase::Nats, LogBase::Bits) => R::one() / R::LN_2(),
        (LogBase::Bits, LogBase::Nats) => R::LN_2(),
    };
    Ok(HermitianOperator {
        matrix: witness.matrix().scaled_re(factor),
        dims: witness.dims(),
        kind: OperatorKind::Logarithmic(to),
        // The factor is positive, so the eigenvalue order is preserved.
        min_eigenvalue: witness.min_eigenvalue() * factor,
    })
}
