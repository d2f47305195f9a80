//! Parameter scans along one-parameter state families: evaluate a fixed
//! witness and the conditional entropy on a uniform grid, so detection
//! thresholds and membership boundaries can be located side by side.

use thiserror::Error;

use crate::entropy::{self, Conditioning};
use crate::linalg::{real, LogBase, Scalar};
use crate::states::{FamilyKind, StateError, StateFamily};
use crate::witness::{eval_witness, HermitianOperator, WitnessError};

/// Errors from a family scan.
#[derive(Debug, Error)]
pub enum ScanError {
    #[error("InvalidGrid: a scan needs at least 2 points, got {points}")]
    InvalidGrid { points: usize },
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Witness(#[from] WitnessError),
}

/// One grid point of a scan.
#[derive(Clone, Copy, Debug)]
pub struct ScanRow<R> {
    /// Family parameter at this grid point.
    pub param: R,
    /// Expectation value of the witness on the family member.
    pub witness_value: R,
    /// Conditional entropy `S(A|B)` of the family member, in `base`.
    pub cond_entropy: R,
}

/// Evaluates `witness` and `S(A|B)` across the family's full parameter range
/// on a uniform, endpoint-inclusive grid of `points` values (the last point
/// is the exact upper endpoint). Rows come back in increasing parameter
/// order.
pub fn scan_family<R: Scalar>(
    kind: FamilyKind,
    d: usize,
    witness: &HermitianOperator<R>,
    points: usize,
    base: LogBase,
) -> Result<Vec<ScanRow<R>>, ScanError> {
    if points < 2 {
        return Err(ScanError::InvalidGrid { points });
    }
    let (lo, hi) = StateFamily::<R>::parameter_range(kind, d);
    let step = (hi - lo) / real::<R>((points - 1) as f64);
    let mut rows = Vec::with_capacity(points);
    for k in 0..points {
        let param = if k == points - 1 {
            hi
        } else {
            lo + real::<R>(k as f64) * step
        };
        let rho = StateFamily::new(kind, param, d)?.realize();
        let witness_value = eval_witness(witness, &rho)?;
        let cond_entropy = entropy::conditional_entropy(&rho, Conditioning::AGivenB, base);
        rows.push(ScanRow {
            param,
            witness_value,
            cond_entropy,
        });
    }
    Ok(rows)
}

/// Brackets `[param_i, param_{i+1}]` on which `field` changes strict sign
/// between consecutive rows (zero counts as neither sign).
pub fn sign_change_brackets<R: Scalar>(
    rows: &[ScanRow<R>],
    field: impl Fn(&ScanRow<R>) -> R,
) -> Vec<(R, R)> {
    let mut brackets = Vec::new();
    for pair in rows.windows(2) {
        let a = field(&pair[0]);
        let b = field(&pair[1]);
        if (a < R::zero() && b > R::zero()) || (a > R::zero() && b < R::zero()) {
            brackets.push((pair[0].param, pair[1].param));
        }
    }
    brackets
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{isotropic, werner};
    use crate::witness::log_witness;

    fn werner_witness() -> HermitianOperator<f64> {
        log_witness(&werner::<f64>(0.99).unwrap(), LogBase::Bits).unwrap()
    }

    #[test]
    fn grid_covers_the_range_inclusively() {
        let witness = werner_witness();
        let rows = scan_family(FamilyKind::Werner, 2, &witness, 3, LogBase::Bits).unwrap();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[0].param, 0.0);
        assert!((rows[1].param - 0.5).abs() < 1e-15);
        assert_eq!(rows[2].param, 1.0);
        for pair in rows.windows(2) {
            assert!(pair[1].param > pair[0].param);
        }
    }

    #[test]
    fn isotropic_grid_hits_exact_endpoints() {
        let witness =
            log_witness(&isotropic::<f64>(0.8, 3).unwrap(), LogBase::Bits).unwrap();
        let rows = scan_family(FamilyKind::Isotropic, 3, &witness, 201, LogBase::Bits).unwrap();
        assert_eq!(rows.len(), 201);
        assert_eq!(rows[0].param, -1.0 / 8.0);
        assert_eq!(rows[200].param, 1.0);
    }

    #[test]
    fn rows_match_direct_evaluation() {
        let witness = werner_witness();
        let rows = scan_family(FamilyKind::Werner, 2, &witness, 5, LogBase::Nats).unwrap();
        for row in &rows {
            let rho = werner::<f64>(row.param).unwrap();
            let direct = eval_witness(&witness, &rho).unwrap();
            assert!((row.witness_value - direct).abs() < 1e-14);
            let s = entropy::conditional_entropy(&rho, Conditioning::AGivenB, LogBase::Nats);
            assert!((row.cond_entropy - s).abs() < 1e-14);
        }
    }

    #[test]
    fn rank_deficient_endpoint_is_still_scannable() {
        // p = 1 is a pure state; its entropies are finite even though the
        // logarithmic witness construction would reject it as an input.
        let witness = werner_witness();
        let rows = scan_family(FamilyKind::Werner, 2, &witness, 3, LogBase::Bits).unwrap();
        let last = rows.last().unwrap();
        assert_eq!(last.param, 1.0);
        assert!((last.cond_entropy - (-1.0)).abs() < 1e-10);
    }

    #[test]
    fn too_few_points_is_an_error() {
        let witness = werner_witness();
        for points in [0, 1] {
            let err =
                scan_family(FamilyKind::Werner, 2, &witness, points, LogBase::Bits).unwrap_err();
            assert!(matches!(err, ScanError::InvalidGrid { .. }), "{points}");
            assert!(err.to_string().starts_with("InvalidGrid"));
        }
    }

    #[test]
    fn witness_dimension_mismatch_propagates() {
        let witness_d3 =
            log_witness(&isotropic::<f64>(0.8, 3).unwrap(), LogBase::Bits).unwrap();
        let err =
            scan_family(FamilyKind::Werner, 2, &witness_d3, 11, LogBase::Bits).unwrap_err();
        assert!(matches!(err, ScanError::Witness(_)));
        assert!(err.to_string().starts_with("DimensionMismatch"));
    }

    #[test]
    fn werner_family_on_wrong_dimension_propagates() {
        let witness =
            log_witness(&isotropic::<f64>(0.8, 3).unwrap(), LogBase::Bits).unwrap();
        let err = scan_family(FamilyKind::Werner, 3, &witness, 11, LogBase::Bits).unwrap_err();
        assert!(matches!(err, ScanError::State(_)));
    }

    #[test]
    fn sign_changes_are_bracketed() {
        let witness = werner_witness();
        let rows = scan_family(FamilyKind::Werner, 2, &witness, 201, LogBase::Bits).unwrap();
        let entropy_brackets = sign_change_brackets(&rows, |r| r.cond_entropy);
        assert_eq!(entropy_brackets.len(), 1);
        let (lo, hi) = entropy_brackets[0];
        assert!(lo < 0.7476 && 0.7476 < hi, "bracket ({lo}, {hi})");
        assert!(hi - lo < 0.0051);

        let witness_brackets = sign_change_brackets(&rows, |r| r.witness_value);
        assert_eq!(witness_brackets.len(), 1);
        let (wlo, whi) = witness_brackets[0];
        assert!(0.80 < wlo && whi < 0.90, "bracket ({wlo}, {whi})");
    }
}
