//! Operational consequences of negative conditional entropy: state-merging
//! cost, superdense-coding capacity, uncertainty bounds with quantum memory,
//! distributed-randomness rate bounds, and the hashing bound for one-way
//! entanglement distillation.
//!
//! Every "advantage" predicate in this module is the same statement
//! `S(A|B) < 0` dressed for a different task, and all of them are computed
//! from the identical conditional-entropy call so they can never disagree.

use thiserror::Error;

use crate::entropy::{self, Conditioning, EntropyReport};
use crate::linalg::{hermitian_eig, LinalgError, LogBase, NumericPolicy, Scalar};
use crate::states::DensityMatrix;
use crate::witness::HermitianOperator;

/// Errors from task analytics.
#[derive(Debug, Error)]
pub enum TaskError {
    #[error("UnequalDims: superdense coding needs dA = dB, got ({da}, {db})")]
    UnequalDims { da: usize, db: usize },
    #[error("DegenerateObservable: smallest eigenvalue gap {gap:.3e}; eigenbases are not unique")]
    DegenerateObservable { gap: f64 },
    #[error("DimensionMismatch: {0}")]
    DimensionMismatch(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// The tasks this module reports on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TaskKind {
    StateMerging,
    SuperdenseCoding,
    Uncertainty,
    Randomness,
    Distillation,
}

impl std::fmt::Display for TaskKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            TaskKind::StateMerging => "state_merging",
            TaskKind::SuperdenseCoding => "superdense_coding",
            TaskKind::Uncertainty => "uncertainty",
            TaskKind::Randomness => "randomness",
            TaskKind::Distillation => "distillation",
        };
        f.write_str(name)
    }
}

/// Unit attached to a reported value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Unit {
    Bits,
    Nats,
    Qubits,
    Ebits,
    Dimensionless,
}

impl Unit {
    fn suffix(self) -> &'static str {
        match self {
            Unit::Bits => " bits",
            Unit::Nats => " nats",
            Unit::Qubits => " qubits",
            Unit::Ebits => " ebits",
            Unit::Dimensionless => "",
        }
    }
}

/// A labeled result bundle for one task evaluation.
#[derive(Clone, Debug)]
pub struct TaskReport<R> {
    pub task: TaskKind,
    /// Echo of the inputs (dims, base, direction, ...).
    pub inputs: Vec<(&'static str, String)>,
    /// Named numeric results with units.
    pub values: Vec<(&'static str, R, Unit)>,
    /// Named boolean findings.
    pub flags: Vec<(&'static str, bool)>,
}

impl<R: Scalar> TaskReport<R> {
    pub fn value(&self, key: &str) -> Option<R> {
        self.values
            .iter()
            .find(|(name, _, _)| *name == key)
            .map(|&(_, v, _)| v)
    }

    pub fn flag(&self, key: &str) -> Option<bool> {
        self.flags
            .iter()
            .find(|(name, _)| *name == key)
            .map(|&(_, v)| v)
    }

    /// Human-readable report: one `key: value` line per entry, four decimals.
    pub fn to_text(&self) -> String {
        let mut lines = vec![format!("task: {}", self.task)];
        for (key, value) in &self.inputs {
            lines.push(format!("{key}: {value}"));
        }
        for (key, value, unit) in &self.values {
            lines.push(format!(
                "{key}: {:.4}{}",
                value.to_f64().unwrap_or(f64::NAN),
                unit.suffix()
            ));
        }
        for (key, value) in &self.flags {
            lines.push(format!("{key}: {value}"));
        }
        lines.join("\n")
    }
}

fn dims_string(dims: (usize, usize)) -> String {
    format!("{}x{}", dims.0, dims.1)
}

fn advantage_threshold<R: Scalar>() -> R {
    NumericPolicy::<R>::default().membership_tol
}

/// Direction of the state-merging protocol.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MergeDirection {
    /// A merges their share with B's: cost `S(A|B)`.
    AToB,
    /// B merges their share with A's: cost `S(B|A)`.
    BToA,
}

impl std::fmt::Display for MergeDirection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            MergeDirection::AToB => "a_to_b",
            MergeDirection::BToA => "b_to_a",
        })
    }
}

/// Optimal quantum-communication cost of state merging: the conditional
/// entropy. Positive values are qubits that must be sent; negative values
/// mean the merge is free and that much entanglement is gained for later use.
pub fn merging_cost<R: Scalar>(
    rho: &DensityMatrix<R>,
    direction: MergeDirection,
    base: LogBase,
) -> R {
    let which = match direction {
        MergeDirection::AToB => Conditioning::AGivenB,
        MergeDirection::BToA => Conditioning::BGivenA,
    };
    entropy::conditional_entropy(rho, which, base)
}

/// [`merging_cost`] wrapped in a report with the sign semantics spelled out.
pub fn merging_report<R: Scalar>(
    rho: &DensityMatrix<R>,
    direction: MergeDirection,
    base: LogBase,
) -> TaskReport<R> {
    let cost = merging_cost(rho, direction, base);
    let tol = advantage_threshold::<R>();
    let unit = match base {
        LogBase::Bits => Unit::Qubits,
        LogBase::Nats => Unit::Nats,
    };
    TaskReport {
        task: TaskKind::StateMerging,
        inputs: vec![
            ("dims", dims_string(rho.dims())),
            ("direction", direction.to_string()),
            ("base", base.to_string()),
        ],
        values: vec![("merging_cost", cost, unit)],
        flags: vec![
            ("needs_communication", cost > tol),
            ("yields_entanglement", cost < -tol),
        ],
    }
}

/// Superdense-coding capacity
/// `C = max(log2 d, log2 d + S(rho_B) - S(rho_AB))` in bits; the capacity
/// beats the classical limit exactly when `S(A|B) < 0`.
pub fn sdc_capacity<R: Scalar>(rho: &DensityMatrix<R>) -> Result<TaskReport<R>, TaskError> {
    let (da, db) = rho.dims();
    if da != db {
        return Err(TaskError::UnequalDims { da, db });
    }
    let report: EntropyReport<R> = entropy::entropy_report(rho, LogBase::Bits);
    let classical = LogBase::Bits.log(crate::linalg::real::<R>(da as f64));
    let s_a_given_b = report.s_a_given_b;
    let capacity = classical + (-s_a_given_b).max(R::zero());
    Ok(TaskReport {
        task: TaskKind::SuperdenseCoding,
        inputs: vec![("dims", dims_string(rho.dims())), ("base", "bits".into())],
        values: vec![
            ("capacity", capacity, Unit::Bits),
            ("classical_limit", classical, Unit::Bits),
            ("cond_entropy", s_a_given_b, Unit::Bits),
        ],
        flags: vec![("advantage", s_a_given_b < -advantage_threshold::<R>())],
    })
}

/// A pair of non-degenerate observables on subsystem A, with the maximum
/// squared overlap `c = max_ij |<x_i|y_j>|^2` between their eigenbases.
#[derive(Clone, Debug)]
pub struct UncertaintySetting<R> {
    obs_x: HermitianOperator<R>,
    obs_y: HermitianOperator<R>,
    c: R,
}

impl<R: Scalar> UncertaintySetting<R> {
    /// Computes the eigenbases and their maximal squared overlap. Degenerate
    /// spectra leave the eigenbasis ambiguous and are rejected.
    pub fn new(
        obs_x: HermitianOperator<R>,
        obs_y: HermitianOperator<R>,
    ) -> Result<Self, TaskError> {
        let d = obs_x.matrix().rows();
        if obs_y.matrix().rows() != d {
            return Err(TaskError::DimensionMismatch(format!(
                "observables act on dimensions {d} and {}",
                obs_y.matrix().rows()
            )));
        }
        let eig_x = hermitian_eig(obs_x.matrix())?;
        let eig_y = hermitian_eig(obs_y.matrix())?;
        for eig in [&eig_x, &eig_y] {
            let vals = eig.eigenvalues();
            let scale = vals[0].abs().max(vals[d - 1].abs()).max(R::one());
            let mut gap = R::infinity();
            for w in vals.windows(2) {
                gap = gap.min(w[0] - w[1]);
            }
            if gap <= crate::linalg::real::<R>(1e-8) * scale {
                return Err(TaskError::DegenerateObservable {
                    gap: gap.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        let vx = eig_x.eigenvectors();
        let vy = eig_y.eigenvectors();
        let mut c = R::zero();
        for i in 0..d {
            for j in 0..d {
                let mut overlap = num_complex::Complex::new(R::zero(), R::zero());
                for k in 0..d {
                    overlap += vx[(k, i)].conj() * vy[(k, j)];
                }
                c = c.max(overlap.norm_sqr());
            }
        }
        Ok(UncertaintySetting { obs_x, obs_y, c })
    }

    pub fn obs_x(&self) -> &HermitianOperator<R> {
        &self.obs_x
    }

    pub fn obs_y(&self) -> &HermitianOperator<R> {
        &self.obs_y
    }

    /// `c = max_ij |<x_i|y_j>|^2`, in `[1/d, 1]`.
    pub fn max_overlap(&self) -> R {
        self.c
    }

    pub fn local_dim(&self) -> usize {
        self.obs_x.matrix().rows()
    }
}

fn require_subsystem_a<R: Scalar>(
    setting: &UncertaintySetting<R>,
    rho: &DensityMatrix<R>,
) -> Result<(), TaskError> {
    if setting.local_dim() != rho.dim_a() {
        return Err(TaskError::DimensionMismatch(format!(
            "observables act on dimension {} but subsystem A has dimension {}",
            setting.local_dim(),
            rho.dim_a()
        )));
    }
    Ok(())
}

/// Entropic uncertainty bound with quantum memory, in bits:
/// `H(X|B) + H(Y|B) >= log2(1/c) + S(A|B)`. Also reports the memoryless
/// bound `log2(1/c)`; memory helps exactly when `S(A|B) < 0`.
pub fn uncertainty_bound<R: Scalar>(
    setting: &UncertaintySetting<R>,
    rho: &DensityMatrix<R>,
) -> Result<TaskReport<R>, TaskError> {
    require_subsystem_a(setting, rho)?;
    let s = entropy::conditional_entropy(rho, Conditioning::AGivenB, LogBase::Bits);
    let memoryless = -LogBase::Bits.log(setting.max_overlap());
    Ok(TaskReport {
        task: TaskKind::Uncertainty,
        inputs: vec![("dims", dims_string(rho.dims())), ("base", "bits".into())],
        values: vec![
            ("max_overlap", setting.max_overlap(), Unit::Dimensionless),
            ("memoryless_bound", memoryless, Unit::Bits),
            ("memory_bound", memoryless + s, Unit::Bits),
        ],
        flags: vec![("memory_advantage", s < -advantage_threshold::<R>())],
    })
}

/// Where a state sits in the uncertainty-with-memory phase diagram.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MemoryRegion {
    /// `S(A|B) >= 0`: memory does not beat the memoryless bound.
    NoAdvantage,
    /// `S(A|B) <= log c`: the bound collapses to zero or below; the
    /// memory-holder can predict both observables with certainty.
    FullCertainty,
    /// In between: a strict advantage that stops short of full certainty.
    AdvantageWithUncertainty,
}

/// Classifies `rho` for the given observable pair (boundaries inclusive
/// within the membership tolerance).
pub fn memory_region<R: Scalar>(
    setting: &UncertaintySetting<R>,
    rho: &DensityMatrix<R>,
) -> Result<MemoryRegion, TaskError> {
    require_subsystem_a(setting, rho)?;
    let tol = advantage_threshold::<R>();
    let s = entropy::conditional_entropy(rho, Conditioning::AGivenB, LogBase::Bits);
    if s >= -tol {
        return Ok(MemoryRegion::NoAdvantage);
    }
    if s <= LogBase::Bits.log(setting.max_overlap()) + tol {
        return Ok(MemoryRegion::FullCertainty);
    }
    Ok(MemoryRegion::AdvantageWithUncertainty)
}

/// Upper bounds on distributed private-randomness rates:
/// `R_A <= log2|A| - S(A|B)`, `R_B <= log2|B| - S(B|A)`, and the global
/// `R_G = log2|AB| - S(AB)`, all in bits. A party's bound exceeds its local
/// dimension exactly when the matching conditional entropy is negative.
pub fn randomness_rates<R: Scalar>(rho: &DensityMatrix<R>) -> TaskReport<R> {
    let report = entropy::entropy_report(rho, LogBase::Bits);
    let log_a = LogBase::Bits.log(crate::linalg::real::<R>(rho.dim_a() as f64));
    let log_b = LogBase::Bits.log(crate::linalg::real::<R>(rho.dim_b() as f64));
    let tol = advantage_threshold::<R>();
    TaskReport {
        task: TaskKind::Randomness,
        inputs: vec![("dims", dims_string(rho.dims())), ("base", "bits".into())],
        values: vec![
            ("rate_a_bound", log_a - report.s_a_given_b, Unit::Bits),
            ("rate_b_bound", log_b - report.s_b_given_a, Unit::Bits),
            ("rate_global", log_a + log_b - report.s_joint, Unit::Bits),
        ],
        flags: vec![
            ("beyond_local_a", report.s_a_given_b < -tol),
            ("beyond_local_b", report.s_b_given_a < -tol),
        ],
    }
}

/// Hashing lower bound on one-way distillable entanglement:
/// `D(rho) >= max(0, -S(A|B))` ebits; positive exactly outside the
/// non-negative-conditional-entropy set.
pub fn hashing_bound<R: Scalar>(rho: &DensityMatrix<R>) -> TaskReport<R> {
    let s = entropy::conditional_entropy(rho, Conditioning::AGivenB, LogBase::Bits);
    TaskReport {
        task: TaskKind::Distillation,
        inputs: vec![("dims", dims_string(rho.dims())), ("base", "bits".into())],
        values: vec![("distillation_bound", (-s).max(R::zero()), Unit::Ebits)],
        flags: vec![("positive", s < -advantage_threshold::<R>())],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decompose::pauli_basis;
    use crate::linalg::{assemble_spectral, cplx, hermitize, real, ComplexMatrix};
    use crate::states::{isotropic, max_entangled, maximally_mixed, random_density, werner};
    use crate::witness::OperatorKind;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn observable(m: ComplexMatrix<f64>) -> HermitianOperator<f64> {
        let d = m.rows();
        HermitianOperator::new(m, (d, 1), OperatorKind::Dimensionless).unwrap()
    }

    fn mub_setting() -> UncertaintySetting<f64> {
        let basis = pauli_basis::<f64>();
        UncertaintySetting::new(observable(basis[3].1.clone()), observable(basis[1].1.clone()))
            .unwrap()
    }

    #[test]
    fn merging_cost_examples() {
        let rho = werner::<f64>(0.99).unwrap();
        let cost = merging_cost(&rho, MergeDirection::AToB, LogBase::Nats);
        assert!((cost - (-0.64073939)).abs() < 1e-7);

        let product = DensityMatrix::new(
            ComplexMatrix::<f64>::diagonal(&[1.0, 0.0, 0.0, 0.0]),
            (2, 2),
        )
        .unwrap();
        for dir in [MergeDirection::AToB, MergeDirection::BToA] {
            for base in [LogBase::Bits, LogBase::Nats] {
                assert!(merging_cost(&product, dir, base).abs() < 1e-12);
            }
        }

        let uniform = maximally_mixed::<f64>((2, 2));
        assert!((merging_cost(&uniform, MergeDirection::AToB, LogBase::Bits) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn merging_direction_uses_the_matching_marginal() {
        let rho = random_density::<f64>((2, 3), 11);
        let ab = merging_cost(&rho, MergeDirection::AToB, LogBase::Bits);
        let ba = merging_cost(&rho, MergeDirection::BToA, LogBase::Bits);
        assert!(
            (ab - entropy::conditional_entropy(&rho, Conditioning::AGivenB, LogBase::Bits)).abs()
                < 1e-14
        );
        assert!(
            (ba - entropy::conditional_entropy(&rho, Conditioning::BGivenA, LogBase::Bits)).abs()
                < 1e-14
        );
        assert!((ab - ba).abs() > 1e-6, "asymmetric state should differ");
    }

    #[test]
    fn merging_report_sign_semantics() {
        let gain = merging_report(&max_entangled::<f64>(2), MergeDirection::AToB, LogBase::Bits);
        assert_eq!(gain.flag("yields_entanglement"), Some(true));
        assert_eq!(gain.flag("needs_communication"), Some(false));
        let pay = merging_report(
            &maximally_mixed::<f64>((2, 2)),
            MergeDirection::AToB,
            LogBase::Bits,
        );
        assert_eq!(pay.flag("yields_entanglement"), Some(false));
        assert_eq!(pay.flag("needs_communication"), Some(true));
        assert!(pay.to_text().contains("merging_cost: 1.0000 qubits"));
    }

    #[test]
    fn sdc_capacity_examples() {
        let phi = sdc_capacity(&max_entangled::<f64>(2)).unwrap();
        assert!((phi.value("capacity").unwrap() - 2.0).abs() < 1e-9);
        assert_eq!(phi.flag("advantage"), Some(true));

        let uniform = sdc_capacity(&maximally_mixed::<f64>((2, 2))).unwrap();
        assert!((uniform.value("capacity").unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(uniform.flag("advantage"), Some(false));

        let werner_report = sdc_capacity(&werner::<f64>(0.99).unwrap()).unwrap();
        assert!((werner_report.value("capacity").unwrap() - 1.9243915).abs() < 1e-6);
        assert_eq!(werner_report.flag("advantage"), Some(true));
    }

    #[test]
    fn sdc_capacity_never_drops_below_the_classical_limit() {
        for seed in 0..20 {
            let rho = random_density::<f64>((3, 3), seed);
            let report = sdc_capacity(&rho).unwrap();
            let capacity = report.value("capacity").unwrap();
            let classical = report.value("classical_limit").unwrap();
            assert!(capacity >= classical - 1e-12, "seed {seed}");
        }
    }

    #[test]
    fn sdc_rejects_unequal_dims() {
        let rho = random_density::<f64>((2, 3), 0);
        assert!(matches!(
            sdc_capacity(&rho).unwrap_err(),
            TaskError::UnequalDims { da: 2, db: 3 }
        ));
    }

    #[test]
    fn mub_overlap_is_one_half() {
        let setting = mub_setting();
        assert!((setting.max_overlap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn uncertainty_bound_examples() {
        let setting = mub_setting();

        let phi = uncertainty_bound(&setting, &max_entangled::<f64>(2)).unwrap();
        assert!((phi.value("memoryless_bound").unwrap() - 1.0).abs() < 1e-9);
        assert!(phi.value("memory_bound").unwrap().abs() < 1e-9);
        assert_eq!(phi.flag("memory_advantage"), Some(true));

        let uniform =
            uncertainty_bound(&setting, &maximally_mixed::<f64>((2, 2))).unwrap();
        assert!((uniform.value("memory_bound").unwrap() - 2.0).abs() < 1e-9);
        assert_eq!(uniform.flag("memory_advantage"), Some(false));

        let werner_bound =
            uncertainty_bound(&setting, &werner::<f64>(0.9).unwrap()).unwrap();
        assert!((werner_bound.value("memory_bound").unwrap() - 0.5031837).abs() < 1e-6);
    }

    #[test]
    fn memory_regions_partition_the_examples() {
        let setting = mub_setting();
        assert_eq!(
            memory_region(&setting, &max_entangled::<f64>(2)).unwrap(),
            MemoryRegion::FullCertainty
        );
        assert_eq!(
            memory_region(&setting, &maximally_mixed::<f64>((2, 2))).unwrap(),
            MemoryRegion::NoAdvantage
        );
        assert_eq!(
            memory_region(&setting, &werner::<f64>(0.9).unwrap()).unwrap(),
            MemoryRegion::AdvantageWithUncertainty
        );
        // A boundary member of the set gives no advantage.
        assert_eq!(
            memory_region(&setting, &werner::<f64>(0.7476).unwrap()).unwrap(),
            MemoryRegion::NoAdvantage
        );
    }

    #[test]
    fn memory_region_is_consistent_with_the_bound() {
        let setting = mub_setting();
        for k in 0..=20 {
            let p = k as f64 / 20.0;
            let rho = werner::<f64>(p).unwrap();
            let region = memory_region(&setting, &rho).unwrap();
            let bound = uncertainty_bound(&setting, &rho)
                .unwrap()
                .value("memory_bound")
                .unwrap();
            assert_eq!(
                region == MemoryRegion::FullCertainty,
                bound <= 1e-10,
                "p = {p}: region {region:?} with bound {bound}"
            );
        }
    }

    #[test]
    fn degenerate_observables_are_rejected() {
        let id = ComplexMatrix::<f64>::identity(2);
        let z = pauli_basis::<f64>()[3].1.clone();
        let err = UncertaintySetting::new(observable(id), observable(z)).unwrap_err();
        assert!(matches!(err, TaskError::DegenerateObservable { .. }));
    }

    #[test]
    fn observable_dimension_mismatches_are_rejected() {
        let z3 = ComplexMatrix::<f64>::diagonal(&[1.0, 0.0, -1.0]);
        let z2 = pauli_basis::<f64>()[3].1.clone();
        assert!(matches!(
            UncertaintySetting::new(observable(z3.clone()), observable(z2)).unwrap_err(),
            TaskError::DimensionMismatch(_)
        ));
        let setting3 = UncertaintySetting::new(
            observable(z3),
            observable(ComplexMatrix::<f64>::diagonal(&[0.9, 0.1, -1.1])),
        )
        .unwrap();
        assert!(matches!(
            uncertainty_bound(&setting3, &maximally_mixed::<f64>((2, 2)))
                .unwrap_err(),
            TaskError::DimensionMismatch(_)
        ));
    }

    #[test]
    fn overlap_is_invariant_under_joint_unitaries() {
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        let base_x = ComplexMatrix::<f64>::diagonal(&[1.3, 0.2, -0.9]);
        let base_y = {
            let raw = ComplexMatrix::<f64>::from_fn(3, 3, |_, _| {
                cplx(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            });
            hermitize(&raw)
        };
        let reference =
            UncertaintySetting::new(observable(base_x.clone()), observable(base_y.clone()))
                .unwrap()
                .max_overlap();
        for trial in 0..50 {
            // A Haar-ish unitary: eigenvectors of a random Hermitian matrix.
            let raw = ComplexMatrix::<f64>::from_fn(3, 3, |_, _| {
                cplx(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            });
            let u = hermitian_eig(&hermitize(&raw)).unwrap().into_parts().1;
            let rotate = |m: &ComplexMatrix<f64>| &(&u * m) * &u.adjoint();
            let setting =
                UncertaintySetting::new(observable(rotate(&base_x)), observable(rotate(&base_y)))
                    .unwrap();
            assert!(
                (setting.max_overlap() - reference).abs() < 1e-10,
                "trial {trial}: {} vs {reference}",
                setting.max_overlap()
            );
        }
    }

    #[test]
    fn overlap_respects_its_range() {
        let mut rng = ChaCha12Rng::seed_from_u64(17);
        for trial in 0..20 {
            let d = 2 + (trial % 3);
            let mk = |rng: &mut ChaCha12Rng| {
                let raw = ComplexMatrix::<f64>::from_fn(d, d, |_, _| {
                    cplx(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
                });
                hermitize(&raw)
            };
            let setting = match UncertaintySetting::new(
                observable(mk(&mut rng)),
                observable(mk(&mut rng)),
            ) {
                Ok(s) => s,
                Err(TaskError::DegenerateObservable { .. }) => continue,
                Err(e) => panic!("unexpected error: {e}"),
            };
            let c = setting.max_overlap();
            assert!(
                c >= 1.0 / d as f64 - 1e-10 && c <= 1.0 + 1e-10,
                "trial {trial}: c = {c} for d = {d}"
            );
        }
    }

    #[test]
    fn mutually_unbiased_bases_minimize_the_overlap() {
        // For the eigenbases of Z and X every squared overlap is exactly 1/2,
        // the smallest possible value at d = 2.
        let setting = mub_setting();
        let eig_x = hermitian_eig(setting.obs_x().matrix()).unwrap();
        let eig_y = hermitian_eig(setting.obs_y().matrix()).unwrap();
        let vx = eig_x.eigenvectors();
        let vy = eig_y.eigenvectors();
        for i in 0..2 {
            for j in 0..2 {
                let mut overlap = cplx::<f64>(0.0, 0.0);
                for k in 0..2 {
                    overlap += vx[(k, i)].conj() * vy[(k, j)];
                }
                assert!((overlap.norm_sqr() - 0.5).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn randomness_rate_examples() {
        let phi = randomness_rates(&max_entangled::<f64>(2));
        assert!((phi.value("rate_a_bound").unwrap() - 2.0).abs() < 1e-9);
        assert!((phi.value("rate_b_bound").unwrap() - 2.0).abs() < 1e-9);
        assert!((phi.value("rate_global").unwrap() - 2.0).abs() < 1e-9);
        assert_eq!(phi.flag("beyond_local_a"), Some(true));

        let uniform = randomness_rates(&maximally_mixed::<f64>((2, 2)));
        for key in ["rate_a_bound", "rate_b_bound", "rate_global"] {
            assert!(uniform.value(key).unwrap().abs() < 1e-12, "{key}");
        }
        assert_eq!(uniform.flag("beyond_local_a"), Some(false));

        let wern = randomness_rates(&werner::<f64>(0.99).unwrap());
        assert!((wern.value("rate_a_bound").unwrap() - 1.9243915).abs() < 1e-6);
    }

    #[test]
    fn hashing_bound_examples() {
        let phi = hashing_bound(&max_entangled::<f64>(2));
        assert!((phi.value("distillation_bound").unwrap() - 1.0).abs() < 1e-9);
        assert_eq!(phi.flag("positive"), Some(true));

        let member = hashing_bound(&werner::<f64>(0.5).unwrap());
        assert_eq!(member.value("distillation_bound").unwrap(), 0.0);
        assert_eq!(member.flag("positive"), Some(false));

        let iso = hashing_bound(&isotropic::<f64>(0.8, 3).unwrap());
        assert!((iso.value("distillation_bound").unwrap() - 0.37643773).abs() < 1e-7);
        assert_eq!(iso.flag("positive"), Some(true));
    }

    #[test]
    fn advantage_predicates_agree_across_tasks() {
        for seed in 0..30 {
            let rho = random_density::<f64>((2, 2), seed);
            let sdc = sdc_capacity(&rho).unwrap().flag("advantage").unwrap();
            let rand_a = randomness_rates(&rho).flag("beyond_local_a").unwrap();
            let hash = hashing_bound(&rho).flag("positive").unwrap();
            let outside = !entropy::is_cvenn(&rho, LogBase::Bits);
            assert_eq!(sdc, rand_a, "seed {seed}");
            assert_eq!(sdc, hash, "seed {seed}");
            assert_eq!(sdc, outside, "seed {seed}");
        }
    }

    #[test]
    fn report_lookup_and_text_rendering() {
        let report = sdc_capacity(&werner::<f64>(0.99).unwrap()).unwrap();
        assert!(report.value("capacity").is_some());
        assert!(report.value("missing").is_none());
        assert!(report.flag("missing").is_none());
        let text = report.to_text();
        assert!(text.starts_with("task: superdense_coding"), "got:\n{text}");
        assert!(text.contains("dims: 2x2"));
        assert!(text.contains("capacity: 1.9244 bits"), "got:\n{text}");
        assert!(text.contains("advantage: true"));
    }

    #[test]
    fn spectra_assemble_consistently_for_observables() {
        // Guard the eigenvector convention the overlap computation relies on:
        // columns are eigenvectors matching the sorted eigenvalues.
        let z = pauli_basis::<f64>()[3].1.clone();
        let eig = hermitian_eig(&z).unwrap();
        let rebuilt = assemble_spectral(eig.eigenvectors(), eig.eigenvalues());
        assert!(rebuilt.max_abs_diff(&z) < 1e-12);
        assert!((eig.eigenvalues()[0] - 1.0).abs() < 1e-12);
        assert!((eig.eigenvalues()[1] + 1.0).abs() < 1e-12);
        let _ = real::<f64>(1.0);
    }
}
