//! Weight families on the disc and the half-plane, their derivatives and
//! sign structure, and the Cayley transform connecting the two domains.

pub mod cayley;
mod derivatives;
mod halfplane;
mod holo;

pub use derivatives::{central_difference, DerivTable};
pub use halfplane::{remark_f, zeta_power_f, HalfPlaneF, HalfPlaneWeight};
pub use holo::HoloWeight;

use std::sync::Arc;

use crate::error::{LabError, Result};
use crate::numerics::integrate_unit_interval;

/// Inner margin of the derivative band: derivatives are evaluated on
/// `[DELTA, 1-DELTA]` (exact behavior at `r = 1` is analytically zero for
/// the families that need it, and floating point underflows there anyway).
pub const DELTA: f64 = 1e-3;

const DEFAULT_DERIVATIVE_ORDER: usize = 6;

/// The weight family tags. `Power` is `(1-r^2)^t`; `Dostanic` is
/// `(1-r^2)^A exp(-B (1-r^2)^{-alpha})`, flat to infinite order at `r = 1`.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightFamily {
    Power { t: f64 },
    Dostanic { a: f64, b: f64, alpha: f64 },
    Custom,
}

/// A radial weight `lambda(r)` on `[0,1]`, viewed as `lambda(|z|)` on the disc.
#[derive(Clone)]
pub struct RadialWeight {
    family: WeightFamily,
    custom_eval: Option<Arc<dyn Fn(f64) -> f64 + Send + Sync>>,
    derivative_order_supported: usize,
}

impl std::fmt::Debug for RadialWeight {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RadialWeight")
            .field("family", &self.family)
            .field(
                "derivative_order_supported",
                &self.derivative_order_supported,
            )
            .finish()
    }
}

impl RadialWeight {
    /// `(1-r^2)^t` for `t > -1`.
    pub fn make_power(t: f64) -> Result<Self> {
        if !(t > -1.0) || !t.is_finite() {
            return Err(LabError::InvalidInput(format!(
                "power weight requires t > -1, got {t}"
            )));
        }
        let w = RadialWeight {
            family: WeightFamily::Power { t },
            custom_eval: None,
            derivative_order_supported: DEFAULT_DERIVATIVE_ORDER,
        };
        w.check_invariants()?;
        Ok(w)
    }

    /// `(1-r^2)^A exp(-B (1-r^2)^{-alpha})` for `A >= 0, B > 0, alpha > 0`.
    pub fn make_dostanic(a: f64, b: f64, alpha: f64) -> Result<Self> {
        if !(a >= 0.0 && b > 0.0 && alpha > 0.0) {
            return Err(LabError::InvalidInput(format!(
                "dostanic weight requires A >= 0, B > 0, alpha > 0, got A={a}, B={b}, alpha={alpha}"
            )));
        }
        let w = RadialWeight {
            family: WeightFamily::Dostanic { a, b, alpha },
            custom_eval: None,
            derivative_order_supported: DEFAULT_DERIVATIVE_ORDER,
        };
        w.check_invariants()?;
        Ok(w)
    }

    /// A custom evaluator; derivatives fall back to finite differences.
    pub fn make_custom<F>(eval: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let w = RadialWeight {
            family: WeightFamily::Custom,
            custom_eval: Some(Arc::new(eval)),
            derivative_order_supported: DEFAULT_DERIVATIVE_ORDER,
        };
        w.check_invariants()?;
        Ok(w)
    }

    /// Raises the supported derivative order above the default of 6.
    pub fn with_derivative_order(mut self, n: usize) -> Self {
        self.derivative_order_supported = n;
        self
    }

    fn check_invariants(&self) -> Result<()> {
        // Non-negativity on a 10^3-point sample of [0,1).
        for i in 0..1000 {
            let r = i as f64 / 1000.0;
            let v = self.eval(r);
            if !(v >= 0.0) {
                return Err(LabError::InvalidInput(format!(
                    "weight negative or NaN at r={r}: {v}"
                )));
            }
        }
        match self.family {
            WeightFamily::Power { t } => {
                // int r (1-r^2)^t dr = 1/(2(t+1)), finite and positive for t > -1
                let m = 0.5 / (t + 1.0);
                if !(m > 0.0 && m.is_finite()) {
                    return Err(LabError::InvalidInput(format!(
                        "power weight t={t} is not integrable"
                    )));
                }
            }
            WeightFamily::Dostanic { .. } | WeightFamily::Custom => {
                let q = integrate_unit_interval(|r| r * self.eval(r), 1e-6).map_err(|e| {
                    LabError::InvalidInput(format!("weight mass check failed: {e}"))
                })?;
                if !(q.value > 0.0 && q.value.is_finite()) {
                    return Err(LabError::InvalidInput(format!(
                        "weight mass must lie in (0, inf), got {}",
                        q.value
                    )));
                }
            }
        }
        if let WeightFamily::Dostanic { .. } = self.family {
            if self.eval(1.0) != 0.0 {
                return Err(LabError::InvalidInput(
                    "dostanic weight must vanish at r=1".into(),
                ));
            }
            // positivity on [0,1) is implied by the closed form; spot-check center
            if !(self.eval(0.0) > 0.0) {
                return Err(LabError::InvalidInput(
                    "dostanic weight must be positive at r=0".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn family(&self) -> &WeightFamily {
        &self.family
    }

    pub fn derivative_order_supported(&self) -> usize {
        self.derivative_order_supported
    }

    /// Stable identifier used in tables, reports and CSV output.
    pub fn id(&self) -> String {
        match &self.family {
            WeightFamily::Power { t } => format!("power:t={t}"),
            WeightFamily::Dostanic { a, b, alpha } => {
                format!("dostanic:A={a},B={b},alpha={alpha}")
            }
            WeightFamily::Custom => "custom".to_string(),
        }
    }

    /// `lambda(r)`.
    pub fn eval(&self, r: f64) -> f64 {
        match &self.family {
            WeightFamily::Power { t } => {
                let u = 1.0 - r * r;
                if u <= 0.0 {
                    if *t > 0.0 {
                        0.0
                    } else if *t == 0.0 {
                        1.0
                    } else {
                        f64::INFINITY
                    }
                } else {
                    u.powf(*t)
                }
            }
            WeightFamily::Dostanic { a, b, alpha } => {
                let u = 1.0 - r * r;
                if u <= 0.0 {
                    0.0
                } else {
                    u.powf(*a) * (-b * u.powf(-alpha)).exp()
                }
            }
            WeightFamily::Custom => (self.custom_eval.as_ref().expect("custom eval"))(r),
        }
    }

    /// `ln lambda` as a function of `u = 1 - r^2 in (0,1]`; `-inf` where the
    /// weight vanishes. Closed form for the named families.
    pub fn log_eval_u(&self, u: f64) -> f64 {
        if u <= 0.0 {
            return f64::NEG_INFINITY;
        }
        match &self.family {
            WeightFamily::Power { t } => t * u.ln(),
            WeightFamily::Dostanic { a, b, alpha } => a * u.ln() - b * u.powf(-alpha),
            WeightFamily::Custom => {
                let v = (self.custom_eval.as_ref().expect("custom eval"))((1.0 - u).max(0.0).sqrt());
                if v > 0.0 {
                    v.ln()
                } else {
                    f64::NEG_INFINITY
                }
            }
        }
    }

    /// `ln lambda(r)`.
    pub fn log_eval_r(&self, r: f64) -> f64 {
        self.log_eval_u(1.0 - r * r)
    }

    /// The pointwise power `lambda^k`, staying inside the family when possible.
    pub fn pow(&self, k: u32) -> Result<RadialWeight> {
        if k == 0 {
            return Err(LabError::InvalidInput("weight power must be >= 1".into()));
        }
        let kf = k as f64;
        match &self.family {
            WeightFamily::Power { t } => RadialWeight::make_power(t * kf),
            WeightFamily::Dostanic { a, b, alpha } => {
                RadialWeight::make_dostanic(a * kf, b * kf, *alpha)
            }
            WeightFamily::Custom => {
                let f = self.custom_eval.as_ref().expect("custom eval").clone();
                RadialWeight::make_custom(move |r| f(r).powi(k as i32))
            }
        }
    }

    /// Derivative table for the named families; `None` for custom weights.
    pub fn deriv_table(&self, n: usize) -> Option<DerivTable> {
        match &self.family {
            WeightFamily::Power { t } => Some(DerivTable::build(*t, 0.0, 1.0, n)),
            WeightFamily::Dostanic { a, b, alpha } => Some(DerivTable::build(*a, *b, *alpha, n)),
            WeightFamily::Custom => None,
        }
    }

    /// `lambda^{(n)}(r)` without domain checks; exact for the named families,
    /// finite differences for custom weights.
    pub(crate) fn derivative_unchecked(&self, table: Option<&DerivTable>, n: usize, r: f64) -> f64 {
        if n == 0 {
            return self.eval(r);
        }
        match table {
            Some(t) => t.eval(self.eval(r), r),
            None => match self.deriv_table(n) {
                Some(t) => t.eval(self.eval(r), r),
                None => {
                    let f = self.custom_eval.as_ref().expect("custom eval").clone();
                    central_difference(&move |x| f(x), n, r)
                }
            },
        }
    }

    /// `d^n/dr^n lambda(r)` for `n <= derivative_order_supported` and
    /// `r in [1e-3, 1-1e-3]`.
    pub fn derivative(&self, n: usize, r: f64) -> Result<f64> {
        if n > self.derivative_order_supported {
            return Err(LabError::InvalidInput(format!(
                "derivative order {n} exceeds supported {}",
                self.derivative_order_supported
            )));
        }
        if n > 0 && !(DELTA..=1.0 - DELTA).contains(&r) {
            return Err(LabError::InvalidInput(format!(
                "derivative radius must lie in [{DELTA}, {}], got {r}",
                1.0 - DELTA
            )));
        }
        if n == 0 && !(0.0..=1.0).contains(&r) {
            return Err(LabError::InvalidInput(format!("radius out of [0,1]: {r}")));
        }
        Ok(self.derivative_unchecked(None, n, r))
    }

    /// `psi_n(r) = (-1)^n lambda^{(n)}(r)`.
    pub fn psi(&self, n: usize, r: f64) -> Result<f64> {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        Ok(sign * self.derivative(n, r)?)
    }

    /// Scans 10^3 grid points for the onset `a_n` past which
    /// `psi_n = (-1)^n lambda^{(n)}` stays non-negative (within
    /// `1e-12 * max|psi_n|`). Returns `a_n = 0` when the sign condition
    /// holds on the whole grid.
    pub fn sign_onset(&self, n: usize) -> Result<SignOnsetReport> {
        if n > self.derivative_order_supported {
            return Err(LabError::InvalidInput(format!(
                "derivative order {n} exceeds supported {}",
                self.derivative_order_supported
            )));
        }
        const GRID: usize = 1000;
        let table = self.deriv_table(n);
        let top = 1.0 - DELTA;
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let psi: Vec<f64> = (0..=GRID)
            .map(|i| {
                let r = top * i as f64 / GRID as f64;
                sign * self.derivative_unchecked(table.as_ref(), n, r)
            })
            .collect();
        let scale = psi.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let tol = 1e-12 * scale;
        let last_bad = psi.iter().rposition(|&v| v < -tol);
        match last_bad {
            None => Ok(SignOnsetReport {
                n,
                a_n: 0.0,
                certified_grid: GRID + 1,
            }),
            Some(i) if i == GRID => Err(LabError::NotFound { order: n }),
            Some(i) => Ok(SignOnsetReport {
                n,
                a_n: top * i as f64 / GRID as f64,
                certified_grid: GRID - i,
            }),
        }
    }
}

/// Where `(-1)^n lambda^{(n)}` turns (and stays) non-negative.
#[derive(Debug, Clone, Copy)]
pub struct SignOnsetReport {
    pub n: usize,
    /// Smallest grid point past which the sign condition holds; 0 when it
    /// holds everywhere.
    pub a_n: f64,
    /// Number of grid points on which the condition was verified.
    pub certified_grid: usize,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_weight_values() {
        let w = RadialWeight::make_power(0.0).unwrap();
        assert_eq!(w.eval(0.3), 1.0);
        let w = RadialWeight::make_power(1.0).unwrap();
        assert!((w.eval(0.5) - 0.75).abs() < 1e-15);
        // t = -0.5 is integrable: int r (1-r^2)^{-1/2} dr = 1
        let w = RadialWeight::make_power(-0.5).unwrap();
        assert!(w.eval(0.5) > 0.0);
        assert!(RadialWeight::make_power(-1.0).is_err());
        assert!(RadialWeight::make_power(-1.5).is_err());
    }

    #[test]
    fn dostanic_values() {
        let w = RadialWeight::make_dostanic(0.0, 1.0, 1.0).unwrap();
        assert!((w.eval(0.0) - (-1.0f64).exp()).abs() < 1e-16);
        // flatness: value at 1 - 1e-4 underflows to zero
        assert_eq!(w.eval(1.0 - 1e-4), 0.0);
        assert_eq!(w.eval(1.0), 0.0);
        // (2,3,0.5) at r=0.6: (0.64)^2 exp(-3/0.8)
        let w = RadialWeight::make_dostanic(2.0, 3.0, 0.5).unwrap();
        let expected = 0.4096 * (-3.75f64).exp();
        assert!((w.eval(0.6) - expected).abs() < 1e-15 * expected);
        assert!(RadialWeight::make_dostanic(-0.1, 1.0, 1.0).is_err());
        assert!(RadialWeight::make_dostanic(0.0, 0.0, 1.0).is_err());
        assert!(RadialWeight::make_dostanic(0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn derivative_dispatch() {
        let w = RadialWeight::make_power(1.0).unwrap();
        assert!((w.derivative(1, 0.5).unwrap() + 1.0).abs() < 1e-14);
        assert_eq!(w.derivative(0, 0.5).unwrap(), 0.75);

        let d = RadialWeight::make_dostanic(0.0, 1.0, 1.0).unwrap();
        let u: f64 = 0.75;
        let expected = (-2.0 * 0.5 / (u * u)) * (-1.0 / u).exp();
        assert!((d.derivative(1, 0.5).unwrap() - expected).abs() < 1e-15);

        assert!(d.derivative(7, 0.5).is_err());
        assert!(d.derivative(1, 0.99999).is_err());
    }

    #[test]
    fn custom_weight_finite_differences() {
        let w = RadialWeight::make_custom(|r| 1.0 - r * r).unwrap();
        let d = w.derivative(1, 0.5).unwrap();
        assert!((d + 1.0).abs() < 1e-6, "got {d}");
    }

    #[test]
    fn sign_onsets() {
        let d = RadialWeight::make_dostanic(0.0, 1.0, 1.0).unwrap();
        // -lambda' = 2r v^2 lambda >= 0 everywhere
        let s1 = d.sign_onset(1).unwrap();
        assert_eq!(s1.a_n, 0.0);
        let p = RadialWeight::make_power(1.0).unwrap();
        assert_eq!(p.sign_onset(1).unwrap().a_n, 0.0);
        // psi_2 is negative near 0, positive near 1
        let s2 = d.sign_onset(2).unwrap();
        assert!(s2.a_n > 0.0 && s2.a_n < 1.0, "a_2 = {}", s2.a_n);
        // independent dense sign-scan oracle: the certificate is grid-level,
        // so scan densely from one grid cell past the onset
        let s3 = d.sign_onset(3).unwrap();
        assert!(s3.a_n > 0.0 && s3.a_n < 1.0, "a_3 = {}", s3.a_n);
        let table = d.deriv_table(3).unwrap();
        let start = s3.a_n + (1.0 - DELTA) / 1000.0;
        for i in 0..2000 {
            let r = start + (1.0 - DELTA - start) * (i as f64 + 0.5) / 2000.0;
            let psi = -d.derivative_unchecked(Some(&table), 3, r);
            assert!(psi >= -1e-10, "psi_3({r}) = {psi}");
        }
        // and psi_3 is genuinely negative somewhere before the onset
        let mut has_negative = false;
        for i in 1..1000 {
            let r = s3.a_n * i as f64 / 1000.0;
            if -d.derivative_unchecked(Some(&table), 3, r) < -1e-9 {
                has_negative = true;
                break;
            }
        }
        assert!(has_negative, "onset should be forced by a sign change");
        // power weight with constant second derivative sign fails condition 3
        let p1 = RadialWeight::make_power(1.0).unwrap();
        assert!(matches!(
            p1.sign_onset(2),
            Err(LabError::NotFound { order: 2 })
        ));
    }

    #[test]
    fn pow_stays_in_family() {
        let d = RadialWeight::make_dostanic(0.5, 1.0, 1.0).unwrap();
        let d3 = d.pow(3).unwrap();
        assert_eq!(
            d3.family(),
            &WeightFamily::Dostanic {
                a: 1.5,
                b: 3.0,
                alpha: 1.0
            }
        );
        let p = RadialWeight::make_power(-0.5).unwrap();
        assert!(p.pow(3).is_err()); // t*k = -1.5 not integrable
    }

    #[test]
    fn nonnegativity_sampled() {
        for w in [
            RadialWeight::make_power(2.0).unwrap(),
            RadialWeight::make_dostanic(1.0, 2.0, 0.5).unwrap(),
        ] {
            for i in 0..1000 {
                assert!(w.eval(i as f64 / 1000.0) >= 0.0);
            }
        }
        assert!(RadialWeight::make_custom(|r| 0.5 - r).is_err());
    }
}
