//! The Cayley transform `phi(zeta) = (i - zeta)/(i + zeta)` from the upper
//! half-plane onto the disc, its inverse `psi`, their derivatives, and the
//! transport of half-plane weights to disc weights.

use num_complex::Complex64;

use crate::error::{LabError, Result};

use super::{HalfPlaneF, HoloWeight};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `phi(zeta) = (i - zeta)/(i + zeta)`, mapping `Im zeta > 0` into the disc.
pub fn cayley(zeta: Complex64) -> Result<Complex64> {
    if !(zeta.im > 0.0) {
        return Err(LabError::InvalidInput(format!(
            "cayley requires Im zeta > 0, got {zeta}"
        )));
    }
    Ok(cayley_boundary(zeta))
}

/// Boundary-evaluation mode of [`cayley`]: accepts `Im zeta >= 0`
/// (real `zeta` maps to the unit circle, e.g. `phi(0) = 1`).
pub fn cayley_boundary(zeta: Complex64) -> Complex64 {
    (I - zeta) / (I + zeta)
}

/// `phi'(zeta) = -2i/(i + zeta)^2`.
pub fn cayley_deriv(zeta: Complex64) -> Complex64 {
    let d = I + zeta;
    -2.0 * I / (d * d)
}

/// `psi(z) = i (1 - z)/(1 + z)`, the inverse of `phi`, mapping the disc
/// onto the upper half-plane.
pub fn inverse_cayley(z: Complex64) -> Result<Complex64> {
    if !(z.norm() < 1.0) {
        return Err(LabError::InvalidInput(format!(
            "inverse cayley requires |z| < 1, got {z}"
        )));
    }
    Ok(I * (1.0 - z) / (1.0 + z))
}

/// `psi'(z) = -2i/(1 + z)^2`.
pub fn inverse_cayley_deriv(z: Complex64) -> Complex64 {
    let d = 1.0 + z;
    -2.0 * I / (d * d)
}

/// Transports a holomorphic non-vanishing `F` on the half-plane to the disc
/// weight `omega(z) = |(F o psi)(z) psi'(z)|^2`, returned as the
/// holomorphic-modulus weight with `g = (F o psi) psi'`.
///
/// The evaluator lives on the open disc; the boundary point `z = 1` pulls
/// back to `zeta = 0` and `z = -1` to infinity, so neither is evaluable.
pub fn transport_weight(f: &HalfPlaneF) -> Result<HoloWeight> {
    let fc = f.closure();
    HoloWeight::new(move |z: Complex64| {
        let zeta = I * (1.0 - z) / (1.0 + z);
        fc(zeta) * inverse_cayley_deriv(z)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::{remark_f, zeta_power_f};

    #[test]
    fn special_values() {
        assert!(cayley(I).unwrap().norm() < 1e-15); // phi(i) = 0
        let b = cayley_boundary(Complex64::new(0.0, 0.0));
        assert!((b - 1.0).norm() < 1e-15); // phi(0) = 1 (boundary mode)
        assert!(cayley(Complex64::new(0.0, 0.0)).is_err()); // strict mode rejects it
        let z0 = inverse_cayley(Complex64::new(0.0, 0.0)).unwrap();
        assert!((z0 - I).norm() < 1e-15); // psi(0) = i
        // phi'(i) = i/2
        assert!((cayley_deriv(I) - Complex64::new(0.0, 0.5)).norm() < 1e-15);
    }

    #[test]
    fn round_trips() {
        // 10^3 quasi-random interior points
        for k in 0..1000 {
            let t = k as f64 / 1000.0;
            let r = 0.999 * (0.5 + 0.5 * (12.9898 * t).sin().abs());
            let th = std::f64::consts::TAU * (78.233 * t).fract();
            let z = Complex64::from_polar(r.min(0.995), th);
            let zeta = inverse_cayley(z).unwrap();
            assert!(zeta.im > 0.0, "psi must land in the half-plane");
            let back = cayley(zeta).unwrap();
            assert!((back - z).norm() < 1e-12, "z={z} roundtrip {back}");

            let w = cayley(zeta).unwrap();
            let fwd = inverse_cayley(w).unwrap();
            assert!((fwd - zeta).norm() < 1e-12 * zeta.norm().max(1.0));
        }
    }

    #[test]
    fn remark_transport_closed_form() {
        // omega(z) = |z-1|^{4/3} for the p0 = 5 family
        let f = remark_f(5.0).unwrap();
        let w = transport_weight(&f).unwrap();
        // at z = 0: |0-1|^{4/3} = 1
        assert!((w.weight(Complex64::new(0.0, 0.0)) - 1.0).abs() < 1e-12);
        // at z = 1/2: 2^{-4/3}
        let v = w.weight(Complex64::new(0.5, 0.0));
        assert!(
            (v - 0.5f64.powf(4.0 / 3.0)).abs() < 1e-10,
            "got {v}, want {}",
            0.5f64.powf(4.0 / 3.0)
        );
    }

    #[test]
    fn zeta_pow_transport_unbounded_at_minus_one() {
        // omega(z) = 4 |1-z|^{4/3} |1+z|^{-16/3} blows up along z -> -1
        let f = zeta_power_f(5.0).unwrap();
        let w = transport_weight(&f).unwrap();
        let mut prev = 0.0;
        for j in 1..=6 {
            let z = Complex64::new(-1.0 + 10f64.powi(-j), 0.0);
            let v = w.weight(z);
            assert!(v > prev * 10.0, "expected growth, got {prev} -> {v}");
            prev = v;
        }
        // closed-form cross-check at an interior point
        let z = Complex64::new(0.3, -0.2);
        let closed =
            4.0 * (1.0 - z).norm().powf(4.0 / 3.0) * (1.0 + z).norm().powf(-16.0 / 3.0);
        assert!((w.weight(z) - closed).abs() < 1e-12 * closed);
    }
}
