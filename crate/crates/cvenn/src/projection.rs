//! Frobenius projection onto the set of states with non-negative conditional
//! entropy: a quadratic-penalty projected-gradient solver, the
//! conditional-entropy gradient it descends, and a boundary bisection helper.
//!
//! The solver minimises `F(sigma) = 1/2 ||sigma - rho_s||_F^2 +
//! mu * max(0, -S(A|B)(sigma))^2` over density matrices. Each step moves
//! against the gradient and re-projects onto the density-matrix cone
//! (eigenvalue projection onto the probability simplex); `mu` grows
//! geometrically until the constraint violation is inside tolerance, and a
//! final bisection along the line to the maximally mixed state pins the
//! result onto the constraint boundary. Conditional entropy is always
//! handled in nats inside the solver so gradients and objective agree; the
//! set itself does not depend on the logarithm base.

use thiserror::Error;

use crate::entropy::{self, entropy_of_spectrum, Conditioning};
use crate::linalg::{
    assemble_spectral, frobenius_inner, hermitian_eig, hermitize, matrix_log, partial_trace, real,
    simplex_project, tensor_product, ComplexMatrix, LinalgError, LogBase, NumericPolicy, Scalar,
    Subsystem,
};
use crate::states::{maximally_mixed, mix, DensityMatrix, StateError};
use crate::witness::{HermitianOperator, OperatorKind, WitnessError};

/// Errors from the projection machinery.
#[derive(Debug, Error)]
pub enum ProjectionError {
    #[error("AnchorNotFeasible: anchor state has conditional entropy {entropy:.3e} < 0")]
    AnchorNotFeasible { entropy: f64 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Witness(#[from] WitnessError),
}

/// Tuning knobs of [`project_to_cvenn`].
#[derive(Clone, Copy, Debug)]
pub struct SolverConfig<R> {
    /// Initial penalty weight `mu`.
    pub penalty_initial: R,
    /// Multiplicative growth of `mu` per outer round.
    pub penalty_growth: R,
    /// Number of penalty rounds.
    pub max_outer: usize,
    /// Gradient steps per round.
    pub max_inner: usize,
    /// Inner loop stops when a step moves the iterate less than this.
    pub step_tolerance: R,
    /// Acceptable residual constraint violation, in nats.
    pub violation_tolerance: R,
}

impl<R: Scalar> Default for SolverConfig<R> {
    fn default() -> Self {
        // Stated tolerances are floored at 100 ulps so the defaults remain
        // meaningful for f32.
        let floor = R::epsilon() * real(100.0);
        SolverConfig {
            penalty_initial: R::one(),
            penalty_growth: real(10.0),
            max_outer: 8,
            max_inner: 2000,
            step_tolerance: real::<R>(1e-9).max(floor),
            violation_tolerance: real::<R>(1e-8).max(floor),
        }
    }
}

/// Outcome of [`project_to_cvenn`].
#[derive(Clone, Debug)]
pub struct ProjectionResult<R> {
    /// The projected state (feasible within `violation`).
    pub sigma_c: DensityMatrix<R>,
    /// Frobenius distance from the input to `sigma_c`.
    pub distance: R,
    /// `max(0, -S(A|B)(sigma_c))` in nats.
    pub violation: R,
    /// Total accepted gradient steps.
    pub iterations: usize,
    /// Whether the penalty loop met the violation tolerance in budget.
    pub converged: bool,
}

/// Gradient of `sigma -> S(A|B)(sigma)` in nats:
/// `grad = -log sigma + I (x) log sigma_B` (the logarithmic witness of
/// `sigma`). Requires a full-rank state.
pub fn cond_entropy_gradient<R: Scalar>(
    sigma: &DensityMatrix<R>,
) -> Result<HermitianOperator<R>, ProjectionError> {
    let log_joint = matrix_log(sigma.matrix(), LogBase::Nats)?;
    let log_b = matrix_log(&sigma.marginal(Subsystem::B), LogBase::Nats)?;
    let lifted = tensor_product(&ComplexMatrix::identity(sigma.dim_a()), &log_b);
    let grad = hermitize(&(&lifted - &log_joint));
    Ok(HermitianOperator::new(
        grad,
        sigma.dims(),
        OperatorKind::Logarithmic(LogBase::Nats),
    )?)
}

fn cond_entropy_nats<R: Scalar>(rho: &DensityMatrix<R>) -> R {
    entropy::conditional_entropy(rho, Conditioning::AGivenB, LogBase::Nats)
}

/// Finds the point where the segment from `rho_s` to a feasible `anchor`
/// crosses the constraint boundary: the smallest `t` with
/// `|S(A|B)((1-t) rho_s + t anchor)| <= tol`. A feasible `rho_s` is returned
/// unchanged.
pub fn bisect_to_boundary<R: Scalar>(
    rho_s: &DensityMatrix<R>,
    anchor: &DensityMatrix<R>,
    tol: R,
) -> Result<DensityMatrix<R>, ProjectionError> {
    let s_anchor = cond_entropy_nats(anchor);
    if s_anchor < R::zero() {
        return Err(ProjectionError::AnchorNotFeasible {
            entropy: s_anchor.to_f64().unwrap_or(f64::NAN),
        });
    }
    if cond_entropy_nats(rho_s) >= R::zero() {
        return Ok(rho_s.clone());
    }
    // S(A|B) is concave along the segment and negative at t = 0, so sign
    // bisection converges to the first crossing.
    let mut lo = R::zero();
    let mut hi = R::one();
    let mut feasible = anchor.clone();
    for _ in 0..256 {
        let t = (lo + hi) * real(0.5);
        let candidate = mix(rho_s, anchor, t)?;
        let s = cond_entropy_nats(&candidate);
        if s.abs() <= tol {
            return Ok(candidate);
        }
        if s >= R::zero() {
            hi = t;
            feasible = candidate;
        } else {
            lo = t;
        }
    }
    Ok(feasible)
}

/// An iterate of the solver: the matrix together with the eigensystem it was
/// assembled from, so entropy and gradient evaluations reuse it.
struct Iterate<R> {
    matrix: ComplexMatrix<R>,
    vecs: ComplexMatrix<R>,
    lam: Vec<R>,
}

fn reproject<R: Scalar>(m: &ComplexMatrix<R>) -> Result<Iterate<R>, ProjectionError> {
    let eig = hermitian_eig(&hermitize(m))?;
    let (vals, vecs) = eig.into_parts();
    let lam = simplex_project(&vals);
    let matrix = hermitize(&assemble_spectral(&vecs, &lam));
    Ok(Iterate { matrix, vecs, lam })
}

struct Workspace<'a, R: Scalar> {
    rho_s: &'a ComplexMatrix<R>,
    dims: (usize, usize),
    /// Eigenvalue floor used when evaluating logarithms near the cone edge.
    floor: R,
}

impl<R: Scalar> Workspace<'_, R> {
    /// Floors the spectrum away from zero and renormalises, so entropies and
    /// logarithms are finite even on the boundary of the cone.
    fn floored(&self, lam: &[R]) -> Vec<R> {
        let mut out: Vec<R> = lam.iter().map(|&l| l.max(self.floor)).collect();
        let sum: R = out.iter().copied().sum();
        for l in &mut out {
            *l /= sum;
        }
        out
    }

    fn cond_entropy(&self, it: &Iterate<R>) -> Result<R, ProjectionError> {
        let lf = self.floored(&it.lam);
        let s_joint = entropy_of_spectrum(&lf, LogBase::Nats);
        let sigma_f = assemble_spectral(&it.vecs, &lf);
        let marg_b = partial_trace(&sigma_f, self.dims, Subsystem::A)?;
        let eig_b = hermitian_eig(&marg_b)?;
        let s_b = entropy_of_spectrum(eig_b.eigenvalues(), LogBase::Nats);
        Ok(s_joint - s_b)
    }

    /// Penalty objective; also returns the conditional entropy it saw.
    fn objective(&self, it: &Iterate<R>, mu: R) -> Result<(R, R), ProjectionError> {
        let diff = &it.matrix - self.rho_s;
        let dist = diff.frobenius_norm();
        let s = self.cond_entropy(it)?;
        let gap = (-s).max(R::zero());
        Ok((real::<R>(0.5) * dist * dist + mu * gap * gap, s))
    }

    /// Gradient of the penalty objective at `it`.
    fn gradient(&self, it: &Iterate<R>, mu: R, s: R) -> Result<ComplexMatrix<R>, ProjectionError> {
        let mut grad = &it.matrix - self.rho_s;
        if s < R::zero() {
            let lf = self.floored(&it.lam);
            let log_lam: Vec<R> = lf.iter().map(|&l| l.ln()).collect();
            let log_joint = assemble_spectral(&it.vecs, &log_lam);
            let sigma_f = assemble_spectral(&it.vecs, &lf);
            let marg_b = partial_trace(&sigma_f, self.dims, Subsystem::A)?;
            let eig_b = hermitian_eig(&marg_b)?;
            let log_b = eig_b.apply(|l| l.max(self.floor).ln());
            let lifted = tensor_product(&ComplexMatrix::identity(self.dims.0), &log_b);
            let grad_s = hermitize(&(&lifted - &log_joint));
            // d/dsigma [mu (max(0, -s))^2] = 2 mu s * grad_s when s < 0.
            grad = grad.add_scaled(&grad_s, real::<R>(2.0) * mu * s);
        }
        Ok(hermitize(&grad))
    }
}

/// Projects `rho_s` onto the non-negative-conditional-entropy set in
/// Frobenius norm. Feasible inputs are returned as-is with distance zero.
pub fn project_to_cvenn<R: Scalar>(
    rho_s: &DensityMatrix<R>,
    config: &SolverConfig<R>,
) -> Result<ProjectionResult<R>, ProjectionError> {
    let policy = NumericPolicy::<R>::default();
    let s0 = cond_entropy_nats(rho_s);
    if s0 >= -policy.membership_tol {
        return Ok(ProjectionResult {
            sigma_c: rho_s.clone(),
            distance: R::zero(),
            violation: (-s0).max(R::zero()),
            iterations: 0,
            converged: true,
        });
    }

    let dims = rho_s.dims();
    let anchor = maximally_mixed::<R>(dims);
    // Warm start on the boundary: the straight-line crossing is already an
    // excellent approximation for highly symmetric targets.
    let bisect_tol = config.violation_tolerance.min(real(1e-10)).max(R::epsilon());
    let warm = bisect_to_boundary(rho_s, &anchor, bisect_tol)?;

    let ws = Workspace {
        rho_s: rho_s.matrix(),
        dims,
        floor: policy.rank_epsilon,
    };
    let mut it = reproject(warm.matrix())?;
    let mut mu = config.penalty_initial;
    let mut eta = R::one();
    let eta_max = real::<R>(1e3);
    let eta_min = real::<R>(1e-18);
    let mut iterations = 0usize;
    let mut converged = false;

    'outer: for _round in 0..config.max_outer {
        for _step in 0..config.max_inner {
            let (f, s) = ws.objective(&it, mu)?;
            let grad = ws.gradient(&it, mu, s)?;

            // Backtracking line search over the projected step.
            let mut advance: Option<(Iterate<R>, R, R)> = None;
            let mut trial = eta;
            while trial > eta_min {
                let stepped = it.matrix.add_scaled(&grad, -trial);
                let cand = reproject(&stepped)?;
                let (f_cand, _) = ws.objective(&cand, mu)?;
                let descent = frobenius_inner(&grad, &(&it.matrix - &cand.matrix))?.re;
                if f_cand <= f - real::<R>(1e-4) * descent {
                    let step_norm = (&cand.matrix - &it.matrix).frobenius_norm();
                    advance = Some((cand, step_norm, trial));
                    break;
                }
                trial = trial * real(0.5);
            }

            match advance {
                None => break, // line search exhausted: stationary for this mu
                Some((next, step_norm, used)) => {
                    it = next;
                    iterations += 1;
                    eta = (used + used).min(eta_max);
                    if step_norm <= config.step_tolerance {
                        break;
                    }
                }
            }
        }
        let s_now = ws.cond_entropy(&it)?;
        if (-s_now).max(R::zero()) <= config.violation_tolerance {
            converged = true;
            break 'outer;
        }
        mu = mu * config.penalty_growth;
    }

    let mut sigma_c = DensityMatrix::new_with(it.matrix, dims, &policy)?;
    if cond_entropy_nats(&sigma_c) < R::zero() {
        // Pin the result onto the feasible side of the boundary.
        let polish_tol = real::<R>(1e-12).max(R::epsilon() * real(10.0));
        sigma_c = bisect_to_boundary(&sigma_c, &anchor, polish_tol)?;
    }
    let violation = (-cond_entropy_nats(&sigma_c)).max(R::zero());
    let distance = (sigma_c.matrix() - rho_s.matrix()).frobenius_norm();
    Ok(ProjectionResult {
        sigma_c,
        distance,
        violation,
        iterations,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{isotropic, max_entangled, random_density, werner};
    use crate::witness::{eval_witness, geometric_witness, log_witness};

    /// Overlap with the maximally entangled projector, mapped to the Werner
    /// line parameter: p = (4 <phi|rho|phi> - 1) / 3.
    fn werner_parameter(rho: &DensityMatrix<f64>) -> f64 {
        let phi = max_entangled::<f64>(2);
        let overlap = frobenius_inner(phi.matrix(), rho.matrix()).unwrap().re;
        (4.0 * overlap - 1.0) / 3.0
    }

    #[test]
    fn gradient_of_maximally_mixed_is_uniform() {
        // At I/n the gradient is ln(dA) * I: -log(I/n) + I (x) log(I/dB).
        let grad = cond_entropy_gradient(&maximally_mixed::<f64>((2, 2))).unwrap();
        let want = ComplexMatrix::<f64>::identity(4).scaled_re(2.0f64.ln());
        assert!(grad.matrix().max_abs_diff(&want) < 1e-10);

        let grad = cond_entropy_gradient(&maximally_mixed::<f64>((3, 3))).unwrap();
        let want = ComplexMatrix::<f64>::identity(9).scaled_re(3.0f64.ln());
        assert!(grad.matrix().max_abs_diff(&want) < 1e-10);
    }

    #[test]
    fn gradient_trace_identity() {
        // Tr(grad * sigma) telescopes back to S(A|B)(sigma).
        for seed in 0..10 {
            let sigma = random_density::<f64>((2, 2), seed);
            let grad = cond_entropy_gradient(&sigma).unwrap();
            let overlap = frobenius_inner(grad.matrix(), sigma.matrix()).unwrap().re;
            let s = cond_entropy_nats(&sigma);
            assert!((overlap - s).abs() < 1e-9, "seed {seed}: {overlap} vs {s}");
        }
    }

    #[test]
    fn gradient_agrees_with_log_witness() {
        let sigma = werner::<f64>(0.6).unwrap();
        let grad = cond_entropy_gradient(&sigma).unwrap();
        let w = log_witness(&sigma, LogBase::Nats).unwrap();
        assert!(grad.matrix().max_abs_diff(w.matrix()) < 1e-12);
    }

    #[test]
    fn gradient_matches_central_finite_differences() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(7);
        for seed in 0..5 {
            let sigma = random_density::<f64>((2, 2), 100 + seed);
            let grad = cond_entropy_gradient(&sigma).unwrap();
            // Random traceless Hermitian direction.
            let raw = ComplexMatrix::<f64>::from_fn(4, 4, |_, _| {
                num_complex::Complex::new(
                    rng.random_range(-1.0..1.0),
                    rng.random_range(-1.0..1.0),
                )
            });
            let mut dir = hermitize(&raw);
            let shift = dir.trace().re / 4.0;
            for k in 0..4 {
                dir[(k, k)] -= num_complex::Complex::new(shift, 0.0);
            }
            let h = 1e-5;
            let plus =
                DensityMatrix::new(sigma.matrix().add_scaled(&dir, h), (2, 2)).unwrap();
            let minus =
                DensityMatrix::new(sigma.matrix().add_scaled(&dir, -h), (2, 2)).unwrap();
            let fd = (cond_entropy_nats(&plus) - cond_entropy_nats(&minus)) / (2.0 * h);
            let analytic = frobenius_inner(grad.matrix(), &dir).unwrap().re;
            let scale = analytic.abs().max(1e-6);
            assert!(
                (fd - analytic).abs() / scale < 1e-4,
                "seed {seed}: directional derivative {analytic} vs finite difference {fd}"
            );
        }
    }

    #[test]
    fn bisect_returns_feasible_input_unchanged() {
        let rho = werner::<f64>(0.5).unwrap();
        let anchor = maximally_mixed::<f64>((2, 2));
        let out = bisect_to_boundary(&rho, &anchor, 1e-10).unwrap();
        assert_eq!(out.matrix().max_abs_diff(rho.matrix()), 0.0);
    }

    #[test]
    fn bisect_rejects_infeasible_anchor() {
        let rho = max_entangled::<f64>(2);
        let anchor = werner::<f64>(0.99).unwrap();
        let err = bisect_to_boundary(&rho, &anchor, 1e-10).unwrap_err();
        assert!(matches!(err, ProjectionError::AnchorNotFeasible { .. }));
    }

    #[test]
    fn bisect_from_max_entangled_lands_on_tabulated_boundary_point() {
        let rho = max_entangled::<f64>(2);
        let anchor = maximally_mixed::<f64>((2, 2));
        let boundary = bisect_to_boundary(&rho, &anchor, 1e-10).unwrap();
        assert!(cond_entropy_nats(&boundary).abs() <= 1e-10);
        let p = werner_parameter(&boundary);
        assert!((p - 0.7476).abs() < 1e-3, "boundary parameter {p}");
        let m = boundary.matrix();
        assert!((m[(0, 0)].re - 0.4369).abs() < 1e-3);
        assert!((m[(1, 1)].re - 0.0631).abs() < 1e-3);
        assert!((m[(0, 3)].re - 0.3738).abs() < 1e-3);
    }

    #[test]
    fn isotropic_boundary_matches_grid_scan_oracle() {
        // Bisection from alpha = 0.99 toward I/9 stays inside the isotropic
        // family, so the boundary it finds is the family's own zero crossing.
        let rho = isotropic::<f64>(0.99, 3).unwrap();
        let anchor = maximally_mixed::<f64>((3, 3));
        let boundary = bisect_to_boundary(&rho, &anchor, 1e-10).unwrap();
        let phi = max_entangled::<f64>(3);
        let overlap = frobenius_inner(phi.matrix(), boundary.matrix()).unwrap().re;
        let alpha_hat = (9.0 * overlap - 1.0) / 8.0;

        // Independent dense scan over the parameter: bracket the sign change.
        let (lo, hi) = (0.70f64, 0.73f64);
        let steps = 300usize;
        let mut bracket = None;
        let mut prev = cond_entropy_nats(&isotropic::<f64>(lo, 3).unwrap());
        for k in 1..=steps {
            let a = lo + (hi - lo) * k as f64 / steps as f64;
            let s = cond_entropy_nats(&isotropic::<f64>(a, 3).unwrap());
            if prev > 0.0 && s <= 0.0 {
                bracket = Some((lo + (hi - lo) * (k - 1) as f64 / steps as f64, a));
                break;
            }
            prev = s;
        }
        let (blo, bhi) = bracket.expect("the scan must find the sign change");
        assert!(
            alpha_hat >= blo - 1e-4 && alpha_hat <= bhi + 1e-4,
            "alpha {alpha_hat} outside scan bracket [{blo}, {bhi}]"
        );
    }

    #[test]
    fn projection_of_feasible_state_is_identity() {
        let rho = werner::<f64>(0.3).unwrap();
        let out = project_to_cvenn(&rho, &SolverConfig::default()).unwrap();
        assert!(out.converged);
        assert_eq!(out.iterations, 0);
        assert_eq!(out.distance, 0.0);
        assert_eq!(out.violation, 0.0);
        assert_eq!(out.sigma_c.matrix().max_abs_diff(rho.matrix()), 0.0);
    }

    #[test]
    fn projection_of_max_entangled_reaches_tabulated_closest_state() {
        let rho = max_entangled::<f64>(2);
        let out = project_to_cvenn(&rho, &SolverConfig::default()).unwrap();
        assert!(out.converged, "solver failed to converge: {out:?}");
        assert!(out.violation <= 1e-8);
        let m = out.sigma_c.matrix();
        for &(i, j, want) in &[
            (0usize, 0usize, 0.4369),
            (1, 1, 0.0631),
            (2, 2, 0.0631),
            (3, 3, 0.4369),
            (0, 3, 0.3738),
            (3, 0, 0.3738),
        ] {
            assert!(
                (m[(i, j)].re - want).abs() < 1e-3,
                "entry ({i}, {j}) = {} != {want}",
                m[(i, j)].re
            );
        }
        let p = werner_parameter(&out.sigma_c);
        assert!((p - 0.7476).abs() < 1e-3, "Werner parameter {p}");
        assert!((out.distance - 0.2186).abs() < 1e-3, "distance {}", out.distance);

        // The geometric witness built from this projection is tangent at
        // sigma_c and reaches -distance on the target.
        let w = geometric_witness(&rho, &out.sigma_c).unwrap();
        let on_sigma = eval_witness(&w, &out.sigma_c).unwrap();
        assert!(on_sigma.abs() < 1e-9, "tangency broken: {on_sigma}");
        let on_target = eval_witness(&w, &rho).unwrap();
        assert!((on_target + out.distance).abs() < 1e-9);
    }

    #[test]
    fn projection_of_werner_state_stays_on_the_werner_line() {
        // Twirling is a Frobenius contraction that fixes Werner states and
        // preserves the constraint set, so the projection of a Werner state
        // is the Werner boundary point.
        let rho = werner::<f64>(0.99).unwrap();
        let out = project_to_cvenn(&rho, &SolverConfig::default()).unwrap();
        assert!(out.converged);
        let p = werner_parameter(&out.sigma_c);
        assert!((p - 0.7476).abs() < 1e-3, "Werner parameter {p}");
        // Distance (0.99 - p*) sqrt(3)/2 = 0.2099.
        assert!((out.distance - 0.2099).abs() < 1e-3, "distance {}", out.distance);
        let off_line = out.sigma_c.matrix()[(0, 1)].norm() + out.sigma_c.matrix()[(1, 2)].norm();
        assert!(off_line < 1e-5, "projection drifted off the Werner line");
    }

    #[test]
    fn projection_respects_iteration_budgets() {
        let rho = max_entangled::<f64>(2);
        let config = SolverConfig {
            max_outer: 1,
            max_inner: 3,
            ..SolverConfig::default()
        };
        let out = project_to_cvenn(&rho, &config).unwrap();
        assert!(out.iterations <= 3);
        // The polish step still leaves the result essentially feasible.
        assert!(out.violation <= 1e-8);
    }
}
