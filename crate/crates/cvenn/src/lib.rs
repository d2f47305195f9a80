//! Detection and quantification of bipartite quantum states whose conditional
//! von Neumann entropy is negative.
//!
//! States with non-negative conditional entropy form a convex, compact set
//! (here called the CVENN set). Everything outside it is entangled and useful
//! for a family of operational tasks; this crate provides the tools to detect
//! that resource and to quantify what it buys:
//!
//! * [`linalg`] — a small dense complex-matrix kernel: Hermitian
//!   eigendecomposition, tensor products, partial traces, matrix logarithms,
//!   and the probability-simplex projection. No quantum semantics live here.
//! * [`states`] — validated density matrices, the Werner and isotropic
//!   families, maximally entangled states, and seeded random sampling.
//! * [`entropy`] — von Neumann, conditional, and relative entropy, plus the
//!   CVENN membership test.
//! * [`witness`] — the logarithmic witness `W = -log rho + I (x) log rho_B`
//!   and the geometric witness built from a closest-CVENN state.
//! * [`projection`] — the closest-CVENN solver (penalty method with projected
//!   gradient descent) and the entropy gradient it needs.
//! * [`decompose`] — witness decompositions into Pauli, generalized
//!   Gell-Mann, and polarization-projector bases.
//! * [`tasks`] — operational consequences: dense-coding capacity, state
//!   merging cost, conditional uncertainty bounds, distributed
//!   private-randomness rate bounds, and the hashing bound on distillable
//!   entanglement.
//! * [`scan`] — one-parameter family sweeps used to tabulate witness and
//!   entropy values.
//!
//! All numerical code is generic over the floating-point type through the
//! [`Scalar`] trait; the `*64` aliases below fix `f64`, which is what the
//! command-line tool and the test suite use.

pub mod decompose;
pub mod entropy;
pub mod linalg;
pub mod projection;
pub mod scan;
pub mod states;
pub mod tasks;
pub mod witness;

pub use entropy::{Conditioning, EntropyReport};
pub use linalg::{
    ComplexMatrix, EigenDecomposition, LinalgError, LogBase, NumericPolicy, Scalar, Subsystem,
};
pub use states::{DensityMatrix, FamilyKind, StateFamily};
pub use witness::{HermitianOperator, OperatorKind};

/// Double-precision matrix, the working type of the CLI and tests.
pub type Matrix64 = ComplexMatrix<f64>;
/// Single-precision matrix.
pub type Matrix32 = ComplexMatrix<f32>;
/// Double-precision density matrix.
pub type State64 = DensityMatrix<f64>;
/// Single-precision density matrix.
pub type State32 = DensityMatrix<f32>;
/// Double-precision Hermitian operator (witnesses, observables, gradients).
pub type Operator64 = HermitianOperator<f64>;
/// Single-precision Hermitian operator.
pub type Operator32 = HermitianOperator<f32>;
