//! Weights of the form `omega = |g|^2` for holomorphic non-vanishing `g`.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{LabError, Result};

/// `omega(z) = |g(z)|^2` with `g` holomorphic and non-vanishing on the disc.
///
/// Non-vanishing is checked on a 50x50 polar grid of `{|z| <= 1 - 1e-3}` at
/// construction. When `g` is a polynomial its coefficients can be attached,
/// which lets the Gram-kernel builder use exact monomial moments.
#[derive(Clone)]
pub struct HoloWeight {
    g: Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>,
    poly: Option<Vec<Complex64>>,
}

impl std::fmt::Debug for HoloWeight {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HoloWeight").field("poly", &self.poly).finish()
    }
}

fn check_nonvanishing(g: &dyn Fn(Complex64) -> Complex64) -> Result<()> {
    for i in 0..50 {
        let r = i as f64 / 49.0 * (1.0 - 1e-3);
        for j in 0..50 {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / 50.0;
            let z = Complex64::from_polar(r, theta);
            let v = g(z);
            if !(v.norm() > 1e-300) || !v.is_finite() {
                return Err(LabError::InvalidInput(format!(
                    "g vanishes (or is not finite) near z = {z}: |g| = {}",
                    v.norm()
                )));
            }
        }
    }
    Ok(())
}

impl HoloWeight {
    pub fn new<F>(g: F) -> Result<Self>
    where
        F: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    {
        check_nonvanishing(&g)?;
        Ok(HoloWeight {
            g: Arc::new(g),
            poly: None,
        })
    }

    /// `g` given by polynomial coefficients, lowest degree first.
    pub fn from_polynomial(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(LabError::InvalidInput("empty polynomial".into()));
        }
        let c = coeffs.clone();
        let g = move |z: Complex64| {
            let mut acc = Complex64::new(0.0, 0.0);
            for &a in c.iter().rev() {
                acc = acc * z + a;
            }
            acc
        };
        check_nonvanishing(&g)?;
        Ok(HoloWeight {
            g: Arc::new(g),
            poly: Some(coeffs),
        })
    }

    /// The trivial weight `g = 1`, `omega = 1`.
    pub fn one() -> Self {
        HoloWeight::from_polynomial(vec![Complex64::new(1.0, 0.0)]).expect("constant 1")
    }

    /// `g(z) = z - c` for `|c| > 1` (so that `g` has no zero on the disc).
    pub fn linear_shift(c: f64) -> Result<Self> {
        if c.abs() <= 1.0 {
            return Err(LabError::InvalidInput(format!(
                "linear shift requires |c| > 1 so g has no zero on the disc, got {c}"
            )));
        }
        HoloWeight::from_polynomial(vec![Complex64::new(-c, 0.0), Complex64::new(1.0, 0.0)])
    }

    pub fn g(&self, z: Complex64) -> Complex64 {
        (self.g)(z)
    }

    /// `omega(z) = |g(z)|^2`.
    pub fn weight(&self, z: Complex64) -> f64 {
        self.g(z).norm_sqr()
    }

    /// Polynomial coefficients of `g`, when known.
    pub fn poly(&self) -> Option<&[Complex64]> {
        self.poly.as_deref()
    }

    /// Coefficients of `g^k` (requires polynomial `g`).
    pub fn poly_pow(&self, k: u32) -> Result<Vec<Complex64>> {
        let base = self.poly.as_ref().ok_or_else(|| {
            LabError::InvalidInput("g is not represented as a polynomial".into())
        })?;
        let mut acc = vec![Complex64::new(1.0, 0.0)];
        for _ in 0..k {
            let mut next = vec![Complex64::new(0.0, 0.0); acc.len() + base.len() - 1];
            for (i, &a) in acc.iter().enumerate() {
                for (j, &b) in base.iter().enumerate() {
                    next[i + j] += a * b;
                }
            }
            acc = next;
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z_minus_two_is_admissible() {
        let g = HoloWeight::linear_shift(2.0).unwrap();
        let z = Complex64::new(0.3, 0.1);
        assert!((g.weight(z) - (z - 2.0).norm_sqr()).abs() < 1e-15);
    }

    #[test]
    fn vanishing_g_rejected() {
        // g(z) = z vanishes at the grid origin
        assert!(HoloWeight::new(|z| z).is_err());
        // linear shifts with a zero inside the disc are rejected up front
        assert!(HoloWeight::linear_shift(0.5).is_err());
        assert!(HoloWeight::linear_shift(-1.0).is_err());
    }

    #[test]
    fn exp_weight() {
        let g = HoloWeight::new(|z: Complex64| z.exp()).unwrap();
        let z = Complex64::new(0.2, -0.4);
        assert!((g.weight(z) - (2.0 * z.re).exp()).abs() < 1e-14);
    }

    #[test]
    fn polynomial_powers() {
        let g = HoloWeight::linear_shift(2.0).unwrap();
        let p2 = g.poly_pow(2).unwrap();
        // (z-2)^2 = 4 - 4z + z^2
        assert!((p2[0].re - 4.0).abs() < 1e-15);
        assert!((p2[1].re + 4.0).abs() < 1e-15);
        assert!((p2[2].re - 1.0).abs() < 1e-15);
    }
}
