//! Decomposition of bipartite Hermitian operators into tensor products of
//! local observables: Pauli (qubits), generalized Gell-Mann (qudits), and
//! photonic polarization projectors (qubit pairs).
//!
//! Each decomposition returns labeled terms whose weighted sum reconstructs
//! the operator, turning an abstract witness into a recipe of local
//! measurements.

use num_complex::Complex;
use num_traits::Zero;
use thiserror::Error;

use crate::linalg::{
    cplx, frobenius_inner, real, tensor_product, ComplexMatrix, LinalgError, NumericPolicy, Scalar,
};
use crate::witness::HermitianOperator;

/// Errors from basis decompositions.
#[derive(Debug, Error)]
pub enum DecomposeError {
    #[error("DimensionMismatch: {0}")]
    DimensionMismatch(String),
    #[error("PatternMismatch: operator is not in the polarization-measurable pattern; residual {residual:.3e}")]
    PatternMismatch { residual: f64 },
    #[error("UnknownLabel: no basis element is labeled \"{0}\"")]
    UnknownLabel(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Which local operator basis a decomposition uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisKind {
    /// `I, X, Y, Z` on each qubit.
    Pauli,
    /// Identity plus the `d^2 - 1` generalized Gell-Mann generators.
    GellMann,
    /// Polarization projectors `H, V, D, F, R, L`.
    Polarization,
}

/// One weighted product term `coefficient * (A (x) B)`.
#[derive(Clone, Debug)]
pub struct DecompositionTerm<R> {
    pub coefficient: R,
    pub label_a: String,
    pub label_b: String,
}

/// A labeled local-observable expansion of a bipartite operator.
#[derive(Clone, Debug)]
pub struct BasisDecomposition<R> {
    pub basis_kind: BasisKind,
    pub dims: (usize, usize),
    pub terms: Vec<DecompositionTerm<R>>,
}

/// The Pauli basis with conventional labels.
pub fn pauli_basis<R: Scalar>() -> Vec<(String, ComplexMatrix<R>)> {
    let i = ComplexMatrix::identity(2);
    let x = ComplexMatrix::from_entries(
        2,
        2,
        vec![Complex::zero(), cplx(1.0, 0.0), cplx(1.0, 0.0), Complex::zero()],
    );
    let y = ComplexMatrix::from_entries(
        2,
        2,
        vec![Complex::zero(), cplx(0.0, -1.0), cplx(0.0, 1.0), Complex::zero()],
    );
    let z = ComplexMatrix::diagonal(&[R::one(), -R::one()]);
    vec![
        ("I".to_string(), i),
        ("X".to_string(), x),
        ("Y".to_string(), y),
        ("Z".to_string(), z),
    ]
}

/// The generalized Gell-Mann generators for local dimension `d`, in the
/// conventional order: for each `k`, the symmetric and antisymmetric pair for
/// every `j < k`, then the diagonal generator of level `k`. For `d = 3` this
/// reproduces the standard eight matrices; all satisfy
/// `Tr(g_i g_j) = 2 delta_ij`.
pub fn gell_mann_generators<R: Scalar>(d: usize) -> Vec<(String, ComplexMatrix<R>)> {
    assert!(d >= 2, "generators need local dimension >= 2");
    let mut out = Vec::with_capacity(d * d - 1);
    let mut index = 0usize;
    for k in 1..d {
        for j in 0..k {
            let mut sym = ComplexMatrix::zeros(d, d);
            sym[(j, k)] = cplx(1.0, 0.0);
            sym[(k, j)] = cplx(1.0, 0.0);
            index += 1;
            out.push((format!("L{index}"), sym));

            let mut anti = ComplexMatrix::zeros(d, d);
            anti[(j, k)] = cplx(0.0, -1.0);
            anti[(k, j)] = cplx(0.0, 1.0);
            index += 1;
            out.push((format!("L{index}"), anti));
        }
        let norm = real::<R>(2.0 / (k as f64 * (k + 1) as f64)).sqrt();
        let mut diag = ComplexMatrix::zeros(d, d);
        for m in 0..k {
            diag[(m, m)] = Complex::new(norm, R::zero());
        }
        diag[(k, k)] = Complex::new(-norm * real(k as f64), R::zero());
        index += 1;
        out.push((format!("L{index}"), diag));
    }
    out
}

/// Polarization basis vectors: horizontal/vertical, diagonal/antidiagonal,
/// right/left circular.
fn polarization_projectors<R: Scalar>() -> Vec<(String, ComplexMatrix<R>)> {
    let h = vec![cplx::<R>(1.0, 0.0), cplx(0.0, 0.0)];
    let v = vec![cplx::<R>(0.0, 0.0), cplx(1.0, 0.0)];
    let inv_sqrt2 = 1.0 / 2.0f64.sqrt();
    let d = vec![cplx::<R>(inv_sqrt2, 0.0), cplx(inv_sqrt2, 0.0)];
    let f = vec![cplx::<R>(inv_sqrt2, 0.0), cplx(-inv_sqrt2, 0.0)];
    let r = vec![cplx::<R>(inv_sqrt2, 0.0), cplx(0.0, -inv_sqrt2)];
    let l = vec![cplx::<R>(inv_sqrt2, 0.0), cplx(0.0, inv_sqrt2)];
    [("H", h), ("V", v), ("D", d), ("F", f), ("R", r), ("L", l)]
        .into_iter()
        .map(|(label, ket)| {
            let proj = ComplexMatrix::from_fn(2, 2, |i, j| ket[i] * ket[j].conj());
            (label.to_string(), proj)
        })
        .collect()
}

fn require_dims<R: Scalar>(
    operator: &HermitianOperator<R>,
    want: (usize, usize),
    basis: &str,
) -> Result<(), DecomposeError> {
    if operator.dims() != want {
        return Err(DecomposeError::DimensionMismatch(format!(
            "{basis} decomposition needs dims {:?}, operator has {:?}",
            want,
            operator.dims()
        )));
    }
    Ok(())
}

fn product_coefficient<R: Scalar>(
    w: &ComplexMatrix<R>,
    ga: &ComplexMatrix<R>,
    gb: &ComplexMatrix<R>,
    normalization: R,
) -> Result<R, DecomposeError> {
    let product = tensor_product(ga, gb);
    let inner = frobenius_inner(&product, w)?;
    debug_assert!(
        inner.im.abs() <= real(1e-10),
        "expansion coefficients of Hermitian operators are real"
    );
    Ok(inner.re / normalization)
}

/// Expands a two-qubit operator in the Pauli product basis
/// `W = sum c_ij sigma_i (x) sigma_j` with `c_ij = Tr(W sigma_i (x) sigma_j)/4`.
pub fn pauli_decompose<R: Scalar>(
    operator: &HermitianOperator<R>,
) -> Result<BasisDecomposition<R>, DecomposeError> {
    require_dims(operator, (2, 2), "Pauli")?;
    let policy = NumericPolicy::<R>::default();
    let basis = pauli_basis::<R>();
    let mut terms = Vec::new();
    for (la, ga) in &basis {
        for (lb, gb) in &basis {
            let c = product_coefficient(operator.matrix(), ga, gb, real(4.0))?;
            if c.abs() >= policy.prune_tol {
                terms.push(DecompositionTerm {
                    coefficient: c,
                    label_a: la.clone(),
                    label_b: lb.clone(),
                });
            }
        }
    }
    Ok(BasisDecomposition {
        basis_kind: BasisKind::Pauli,
        dims: (2, 2),
        terms,
    })
}

/// Expands a two-qudit operator over identity plus Gell-Mann generators.
/// Normalization follows from `Tr(I^2) = d` and `Tr(g^2) = 2`.
pub fn gellmann_decompose<R: Scalar>(
    operator: &HermitianOperator<R>,
) -> Result<BasisDecomposition<R>, DecomposeError> {
    let (da, db) = operator.dims();
    if da != db {
        return Err(DecomposeError::DimensionMismatch(format!(
            "Gell-Mann decomposition needs equal local dimensions, got ({da}, {db})"
        )));
    }
    let d = da;
    let policy = NumericPolicy::<R>::default();
    let mut basis: Vec<(String, ComplexMatrix<R>, R)> =
        vec![("I".to_string(), ComplexMatrix::identity(d), real(d as f64))];
    for (label, g) in gell_mann_generators::<R>(d) {
        basis.push((label, g, real(2.0)));
    }
    let mut terms = Vec::new();
    for (la, ga, na) in &basis {
        for (lb, gb, nb) in &basis {
            let c = product_coefficient(operator.matrix(), ga, gb, *na * *nb)?;
            if c.abs() >= policy.prune_tol {
                terms.push(DecompositionTerm {
                    coefficient: c,
                    label_a: la.clone(),
                    label_b: lb.clone(),
                });
            }
        }
    }
    Ok(BasisDecomposition {
        basis_kind: BasisKind::GellMann,
        dims: (d, d),
        terms,
    })
}

/// Expands a two-qubit operator of the form
/// `a (HH + VV) + b (HV + VH) + c (DD + FF - RR - LL)`
/// into polarization projector products, the directly measurable form for
/// photon pairs. Operators outside that pattern are rejected.
pub fn polarization_decompose<R: Scalar>(
    operator: &HermitianOperator<R>,
) -> Result<BasisDecomposition<R>, DecomposeError> {
    require_dims(operator, (2, 2), "polarization")?;
    let policy = NumericPolicy::<R>::default();
    let m = operator.matrix();
    let half = real::<R>(0.5);
    let a = (m[(0, 0)].re + m[(3, 3)].re) * half;
    let b = (m[(1, 1)].re + m[(2, 2)].re) * half;
    let c = (m[(0, 3)].re + m[(3, 0)].re) * half;

    let mut terms = Vec::new();
    for (coefficient, label) in [
        (a, ("H", "H")),
        (a, ("V", "V")),
        (b, ("H", "V")),
        (b, ("V", "H")),
        (c, ("D", "D")),
        (c, ("F", "F")),
        (-c, ("R", "R")),
        (-c, ("L", "L")),
    ] {
        if coefficient.abs() >= policy.prune_tol {
            terms.push(DecompositionTerm {
                coefficient,
                label_a: label.0.to_string(),
                label_b: label.1.to_string(),
            });
        }
    }
    let decomposition = BasisDecomposition {
        basis_kind: BasisKind::Polarization,
        dims: (2, 2),
        terms,
    };
    let residual = decomposition.reconstruct()?.max_abs_diff(m);
    if residual > policy.hermiticity_tol * m.frobenius_norm().max(R::one()) {
        return Err(DecomposeError::PatternMismatch {
            residual: residual.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(decomposition)
}

fn lookup<R: Scalar>(
    table: &[(String, ComplexMatrix<R>)],
    label: &str,
) -> Result<ComplexMatrix<R>, DecomposeError> {
    table
        .iter()
        .find(|(l, _)| l == label)
        .map(|(_, g)| g.clone())
        .ok_or_else(|| DecomposeError::UnknownLabel(label.to_string()))
}

impl<R: Scalar> BasisDecomposition<R> {
    /// Sums the labeled terms back into a matrix.
    pub fn reconstruct(&self) -> Result<ComplexMatrix<R>, DecomposeError> {
        let table: Vec<(String, ComplexMatrix<R>)> = match self.basis_kind {
            BasisKind::Pauli => pauli_basis::<R>(),
            BasisKind::GellMann => {
                let d = self.dims.0;
                let mut t = vec![("I".to_string(), ComplexMatrix::identity(d))];
                t.extend(gell_mann_generators::<R>(d));
                t
            }
            BasisKind::Polarization => polarization_projectors::<R>(),
        };
        let n = self.dims.0 * self.dims.1;
        let mut out = ComplexMatrix::zeros(n, n);
        for term in &self.terms {
            let ga = lookup(&table, &term.label_a)?;
            let gb = lookup(&table, &term.label_b)?;
            out = out.add_scaled(&tensor_product(&ga, &gb), term.coefficient);
        }
        Ok(out)
    }

    /// Human-readable listing, one term per line, four decimals.
    pub fn to_text(&self) -> String {
        let mut lines = Vec::with_capacity(self.terms.len());
        for term in &self.terms {
            lines.push(format!(
                "{:+.4}  {} (x) {}",
                term.coefficient.to_f64().unwrap_or(f64::NAN),
                term.label_a,
                term.label_b
            ));
        }
        lines.join("\n")
    }
}
