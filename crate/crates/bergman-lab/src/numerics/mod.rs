//! Singularity-aware numerical integration and controlled series summation.
//!
//! All operations here are pure functions of their inputs and are safe to
//! call concurrently. Reals are `f64` throughout; requested tolerances are
//! floored at [`TOL_FLOOR`] = 1e-13 (all downstream targets are >= 1e-10).

mod halfdisc;
mod quad;

pub use halfdisc::{integrate_half_disc, integrate_half_disc_outside, Disc};
pub use quad::{
    integrate_interval, integrate_interval_complex, integrate_log_domain,
    integrate_unit_interval, LogQuadratureResult,
};

use num_complex::Complex64;

use crate::error::{LabError, Result};

/// Hard floor for quadrature tolerances; see module docs.
pub const TOL_FLOOR: f64 = 1e-13;

/// Outcome of a quadrature call.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureResult {
    /// The estimate of the integral.
    pub value: f64,
    /// Estimated absolute error of `value`.
    pub abs_error_estimate: f64,
    /// Number of integrand evaluations consumed.
    pub evaluations: usize,
}

/// Stopping rule for infinite-series summation.
#[derive(Debug, Clone, Copy)]
pub struct TruncationPolicy {
    /// Never sum more than this many terms.
    pub max_terms: usize,
    /// A term counts as "small" when its modulus is below this.
    pub tail_tol: f64,
    /// Stop after this many successive small terms.
    pub consecutive_small: usize,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy {
            max_terms: 600,
            tail_tol: 1e-13,
            consecutive_small: 3,
        }
    }
}

impl TruncationPolicy {
    pub fn validate(&self) -> Result<()> {
        if self.max_terms < 1 {
            return Err(LabError::InvalidInput("max_terms must be >= 1".into()));
        }
        if self.consecutive_small < 1 {
            return Err(LabError::InvalidInput(
                "consecutive_small must be >= 1".into(),
            ));
        }
        if !(self.tail_tol > 0.0) {
            return Err(LabError::InvalidInput("tail_tol must be > 0".into()));
        }
        Ok(())
    }
}

/// Sums `term(0) + term(1) + ...` until `policy.consecutive_small` successive
/// terms fall below `policy.tail_tol` in modulus, or `max_terms` is reached.
///
/// Returns the partial sum and the number of terms evaluated. Errs with
/// `NonConvergence` when the budget runs out while the last term is still
/// at or above `tail_tol`.
pub fn sum_series<F>(term: F, policy: &TruncationPolicy) -> Result<(Complex64, usize)>
where
    F: Fn(usize) -> Complex64,
{
    policy.validate()?;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut small = 0usize;
    let mut last_norm = f64::INFINITY;
    for m in 0..policy.max_terms {
        let t = term(m);
        sum += t;
        last_norm = t.norm();
        if last_norm < policy.tail_tol {
            small += 1;
            if small >= policy.consecutive_small {
                return Ok((sum, m + 1));
            }
        } else {
            small = 0;
        }
    }
    if last_norm < policy.tail_tol {
        Ok((sum, policy.max_terms))
    } else {
        Err(LabError::NonConvergence(format!(
            "series still above tail_tol={} after {} terms (last |term| = {:.3e})",
            policy.tail_tol, policy.max_terms, last_norm
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn policy(max_terms: usize, tail_tol: f64) -> TruncationPolicy {
        TruncationPolicy {
            max_terms,
            tail_tol,
            consecutive_small: 3,
        }
    }

    #[test]
    fn geometric_kernel_series_at_half() {
        // sum (m+1) 0.5^m / pi = (1/pi) (1-0.5)^{-2} = 4/pi
        let (v, _) = sum_series(
            |m| Complex64::new((m as f64 + 1.0) * 0.5f64.powi(m as i32) / PI, 0.0),
            &policy(500, 1e-14),
        )
        .unwrap();
        assert!((v.re - 4.0 / PI).abs() < 1e-12, "got {}", v.re);
        assert!(v.im.abs() < 1e-15);
    }

    #[test]
    fn zero_terms_stop_after_consecutive_small() {
        let pol = policy(500, 1e-14);
        let (v, used) = sum_series(|_| Complex64::new(0.0, 0.0), &pol).unwrap();
        assert_eq!(v, Complex64::new(0.0, 0.0));
        assert_eq!(used, pol.consecutive_small);
    }

    #[test]
    fn two_factor_geometric_series_matches_direct_summation() {
        // term(m) = (2m+2)(0.3)^m(0.2)^m/(2pi); closed form (1/pi)(1-0.06)^{-2}.
        let term = |m: usize| {
            Complex64::new(
                (2.0 * m as f64 + 2.0) * 0.3f64.powi(m as i32) * 0.2f64.powi(m as i32) / (2.0 * PI),
                0.0,
            )
        };
        let (v, _) = sum_series(term, &policy(500, 1e-15)).unwrap();
        let closed = (1.0 / PI) * (1.0 - 0.06f64).powi(-2);
        // oracle: direct 10^4-term summation
        let direct: f64 = (0..10_000).map(|m| term(m).re).sum();
        assert!((v.re - closed).abs() < 1e-13);
        assert!((v.re - direct).abs() < 1e-13);
    }

    #[test]
    fn nonconvergence_when_terms_do_not_decay() {
        let err = sum_series(|_| Complex64::new(1.0, 0.0), &policy(50, 1e-10)).unwrap_err();
        assert!(matches!(err, LabError::NonConvergence(_)));
    }

    #[test]
    fn policy_validation() {
        let bad = TruncationPolicy {
            max_terms: 0,
            tail_tol: 1e-10,
            consecutive_small: 1,
        };
        assert!(sum_series(|_| Complex64::new(0.0, 0.0), &bad).is_err());
    }
}
