//! Von Neumann, conditional, and relative entropy, and membership in the set
//! of states with non-negative conditional entropy.
//!
//! The set of bipartite states whose conditional entropy `S(A|B)` is
//! non-negative is convex and compact; states outside it are the detection
//! targets of the witness machinery. Membership tests here use a small
//! tolerance band so that boundary states are classified as members.

use thiserror::Error;

use crate::linalg::{
    frobenius_inner, hermitian_eig, matrix_log, LinalgError, LogBase, NumericPolicy, Scalar,
    Subsystem,
};
use crate::states::DensityMatrix;

/// Errors from entropy functionals.
#[derive(Debug, Error)]
pub enum EntropyError {
    #[error("RankDeficient: second argument has minimum eigenvalue {min_eigenvalue:.3e}; the relative entropy diverges")]
    RankDeficient { min_eigenvalue: f64 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Which subsystem is conditioned on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Conditioning {
    /// `S(A|B) = S(AB) - S(B)`.
    AGivenB,
    /// `S(B|A) = S(AB) - S(A)`.
    BGivenA,
}

/// Shannon-type entropy of a non-negative spectrum; zero eigenvalues
/// contribute nothing and small negative ones (validation noise) are clamped.
pub fn entropy_of_spectrum<R: Scalar>(spectrum: &[R], base: LogBase) -> R {
    let mut total = R::zero();
    for &lam in spectrum {
        if lam > R::zero() {
            total -= lam * base.log(lam);
        }
    }
    total.max(R::zero())
}

/// Von Neumann entropy `S(rho) = -Tr rho log rho`.
pub fn von_neumann<R: Scalar>(rho: &DensityMatrix<R>, base: LogBase) -> R {
    entropy_of_spectrum(rho.spectrum(), base)
}

fn marginal_entropy<R: Scalar>(rho: &DensityMatrix<R>, keep: Subsystem, base: LogBase) -> R {
    let marg = rho.marginal(keep);
    let eig = hermitian_eig(&marg).expect("a marginal of a valid state is Hermitian");
    entropy_of_spectrum(eig.eigenvalues(), base)
}

/// Conditional entropy `S(AB) - S(marginal)`; negative values signal
/// entanglement usable as a resource.
pub fn conditional_entropy<R: Scalar>(
    rho: &DensityMatrix<R>,
    which: Conditioning,
    base: LogBase,
) -> R {
    let s_joint = von_neumann(rho, base);
    let keep = match which {
        Conditioning::AGivenB => Subsystem::B,
        Conditioning::BGivenA => Subsystem::A,
    };
    s_joint - marginal_entropy(rho, keep, base)
}

/// Relative entropy `S(sigma || rho) = Tr sigma log sigma - Tr sigma log rho`.
///
/// Requires `rho` to be full rank; otherwise the quantity diverges on the
/// kernel and [`EntropyError::RankDeficient`] is returned.
pub fn relative_entropy<R: Scalar>(
    sigma: &DensityMatrix<R>,
    rho: &DensityMatrix<R>,
    base: LogBase,
) -> Result<R, EntropyError> {
    let policy = NumericPolicy::<R>::default();
    let min = *rho
        .spectrum()
        .last()
        .expect("a density matrix has at least one eigenvalue");
    if min <= policy.rank_epsilon {
        return Err(EntropyError::RankDeficient {
            min_eigenvalue: min.to_f64().unwrap_or(f64::NAN),
        });
    }
    let log_rho = matrix_log(rho.matrix(), base)?;
    let mut tr_sigma_log_sigma = R::zero();
    for &lam in sigma.spectrum() {
        if lam > R::zero() {
            tr_sigma_log_sigma += lam * base.log(lam);
        }
    }
    let cross = frobenius_inner(sigma.matrix(), &log_rho)?.re;
    Ok((tr_sigma_log_sigma - cross).max(R::zero()))
}

/// Whether `rho` has non-negative conditional entropy `S(A|B)`, within the
/// default membership tolerance.
pub fn is_cvenn<R: Scalar>(rho: &DensityMatrix<R>, base: LogBase) -> bool {
    let policy = NumericPolicy::<R>::default();
    conditional_entropy(rho, Conditioning::AGivenB, base) >= -policy.membership_tol
}

/// All entropies of a bipartite state in one pass.
#[derive(Clone, Copy, Debug)]
pub struct EntropyReport<R> {
    pub base: LogBase,
    pub s_joint: R,
    pub s_a: R,
    pub s_b: R,
    pub s_a_given_b: R,
    pub s_b_given_a: R,
    pub in_cvenn: bool,
}

/// Computes the joint, marginal, and conditional entropies of `rho`.
pub fn entropy_report<R: Scalar>(rho: &DensityMatrix<R>, base: LogBase) -> EntropyReport<R> {
    let policy = NumericPolicy::<R>::default();
    let s_joint = von_neumann(rho, base);
    let s_a = marginal_entropy(rho, Subsystem::A, base);
    let s_b = marginal_entropy(rho, Subsystem::B, base);
    let s_a_given_b = s_joint - s_b;
    EntropyReport {
        base,
        s_joint,
        s_a,
        s_b,
        s_a_given_b,
        s_b_given_a: s_joint - s_a,
        in_cvenn: s_a_given_b >= -policy.membership_tol,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{
        isotropic, max_entangled, maximally_mixed, random_density, werner, DensityMatrix,
    };

    #[test]
    fn pure_states_have_zero_entropy() {
        let phi = max_entangled::<f64>(2);
        assert!(von_neumann(&phi, LogBase::Bits).abs() < 1e-12);
        assert!(von_neumann(&phi, LogBase::Nats).abs() < 1e-12);
    }

    #[test]
    fn maximally_mixed_entropy_is_log_dimension() {
        let rho = maximally_mixed::<f64>((2, 2));
        assert!((von_neumann(&rho, LogBase::Bits) - 2.0).abs() < 1e-12);
        let tau = maximally_mixed::<f64>((3, 3));
        assert!((von_neumann(&tau, LogBase::Bits) - 2.0 * 3.0f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn werner_entropy_matches_closed_form() {
        // Spectrum {(1+3p)/4, (1-p)/4 x3}; at p = 0.99 the Shannon sum is
        // 0.9925 ln(1/0.9925) + 3 * 0.0025 ln(1/0.0025) = 0.05240779 nats.
        let rho = werner::<f64>(0.99).unwrap();
        assert!((von_neumann(&rho, LogBase::Nats) - 0.05240779).abs() < 1e-7);
    }

    #[test]
    fn conditional_entropy_of_max_entangled_is_minus_log_d() {
        for d in 2..=3 {
            let phi = max_entangled::<f64>(d);
            let s = conditional_entropy(&phi, Conditioning::AGivenB, LogBase::Bits);
            assert!((s + (d as f64).log2()).abs() < 1e-12, "d = {d}: S(A|B) = {s}");
        }
    }

    #[test]
    fn conditional_entropy_of_werner_state_matches_closed_form() {
        // S(A|B) = S(AB) - ln 2 at p = 0.99: 0.05240779 - 0.69314718.
        let rho = werner::<f64>(0.99).unwrap();
        let s = conditional_entropy(&rho, Conditioning::AGivenB, LogBase::Nats);
        assert!((s - (-0.64073939)).abs() < 1e-8, "S(A|B) = {s}");
        // Both conditionings agree: the marginals are I/2 each.
        let t = conditional_entropy(&rho, Conditioning::BGivenA, LogBase::Nats);
        assert!((s - t).abs() < 1e-12);
    }

    #[test]
    fn conditional_entropy_of_isotropic_state_matches_closed_form() {
        // d = 3, alpha = 0.8: S(AB) = 1.20852507 bits, S(B) = log2 3.
        let rho = isotropic::<f64>(0.8, 3).unwrap();
        let s = conditional_entropy(&rho, Conditioning::AGivenB, LogBase::Bits);
        assert!((s - (-0.37643773)).abs() < 1e-7, "S(A|B) = {s}");
    }

    #[test]
    fn base_conversion_scales_by_ln_two() {
        let rho = werner::<f64>(0.9).unwrap();
        let nats = conditional_entropy(&rho, Conditioning::AGivenB, LogBase::Nats);
        let bits = conditional_entropy(&rho, Conditioning::AGivenB, LogBase::Bits);
        assert!((nats - bits * std::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn relative_entropy_of_state_with_itself_is_zero() {
        let rho = werner::<f64>(0.6).unwrap();
        let s = relative_entropy(&rho, &rho, LogBase::Nats).unwrap();
        assert!(s.abs() < 1e-10, "S(rho||rho) = {s}");
    }

    #[test]
    fn relative_entropy_is_positive_for_distinct_states() {
        let sigma = maximally_mixed::<f64>((2, 2));
        let rho = werner::<f64>(0.99).unwrap();
        let s = relative_entropy(&sigma, &rho, LogBase::Nats).unwrap();
        assert!(s > 0.1, "S(I/4 || Werner(0.99)) = {s}");
    }

    #[test]
    fn relative_entropy_rejects_singular_second_argument() {
        let sigma = maximally_mixed::<f64>((2, 2));
        let rho = werner::<f64>(1.0).unwrap();
        let err = relative_entropy(&sigma, &rho, LogBase::Nats).unwrap_err();
        assert!(matches!(err, EntropyError::RankDeficient { .. }));
    }

    #[test]
    fn relative_entropy_data_processing_spot_check() {
        // Tracing out a subsystem cannot increase the relative entropy.
        for seed in 0..10 {
            let sigma = random_density::<f64>((2, 2), seed);
            let rho = werner::<f64>(0.5).unwrap();
            let joint = relative_entropy(&sigma, &rho, LogBase::Nats).unwrap();
            let sb = sigma.marginal_state(Subsystem::B);
            let rb = rho.marginal_state(Subsystem::B);
            let reduced = relative_entropy(&sb, &rb, LogBase::Nats).unwrap();
            assert!(
                reduced <= joint + 1e-9,
                "seed {seed}: marginal {reduced} > joint {joint}"
            );
        }
    }

    #[test]
    fn membership_examples() {
        // Product pure state: S(A|B) = 0, a member (boundary).
        let m = crate::linalg::ComplexMatrix::<f64>::diagonal(&[1.0, 0.0, 0.0, 0.0]);
        let product = DensityMatrix::new(m, (2, 2)).unwrap();
        assert!(is_cvenn(&product, LogBase::Bits));
        assert!(!is_cvenn(&werner::<f64>(0.99).unwrap(), LogBase::Bits));
        assert!(is_cvenn(&werner::<f64>(0.7476).unwrap(), LogBase::Bits));
        assert!(is_cvenn(&maximally_mixed::<f64>((2, 2)), LogBase::Nats));
    }

    #[test]
    fn report_is_internally_consistent() {
        for seed in 0..20 {
            let rho = random_density::<f64>((2, 3), seed);
            let rep = entropy_report(&rho, LogBase::Bits);
            assert_eq!(rep.s_a_given_b, rep.s_joint - rep.s_b);
            assert_eq!(rep.s_b_given_a, rep.s_joint - rep.s_a);
            assert_eq!(rep.in_cvenn, is_cvenn(&rho, LogBase::Bits));
            assert_eq!(
                rep.s_joint,
                von_neumann(&rho, LogBase::Bits),
                "seed {seed}"
            );
        }
    }

    #[test]
    fn report_base_conversion_is_uniform() {
        let rho = werner::<f64>(0.97).unwrap();
        let bits = entropy_report(&rho, LogBase::Bits);
        let nats = entropy_report(&rho, LogBase::Nats);
        let ln2 = std::f64::consts::LN_2;
        assert!((nats.s_joint - bits.s_joint * ln2).abs() < 1e-12);
        assert!((nats.s_a - bits.s_a * ln2).abs() < 1e-12);
        assert!((nats.s_b - bits.s_b * ln2).abs() < 1e-12);
        assert!((nats.s_a_given_b - bits.s_a_given_b * ln2).abs() < 1e-12);
        assert!((nats.s_b_given_a - bits.s_b_given_a * ln2).abs() < 1e-12);
        assert_eq!(nats.in_cvenn, bits.in_cvenn);
    }

    #[test]
    fn rank_deficient_states_have_well_defined_entropy() {
        let rho = werner::<f64>(1.0).unwrap();
        // The numerically computed top eigenvalue may sit a few ulps below 1.
        assert!(von_neumann(&rho, LogBase::Bits).abs() < 1e-12);
        let s = conditional_entropy(&rho, Conditioning::AGivenB, LogBase::Bits);
        assert!((s + 1.0).abs() < 1e-12);
    }
}
