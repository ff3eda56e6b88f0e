//! Bergman kernels on the disc and the upper half-plane.
//!
//! For a radial weight the kernel has the orthonormal-series form
//! `B_mu(z,w) = sum_n z^n wbar^n / (2 pi Phi(n))`; for the unweighted disc
//! this sums to the closed form `1/(pi (1 - z wbar)^2)`. The half-plane
//! kernel is obtained through the Cayley transform:
//! `P_1(zeta,nu) = phi'(zeta) B_1(phi(zeta), phi(nu)) conj(phi'(nu))`.
//!
//! The Gram-matrix kernel in [`gram`] is the finite-rank reproducing kernel
//! of `span{1, z, ..., z^N}` in `L^2(omega)` for a possibly non-radial
//! weight; it backs the factorization identity
//! `g(z) B_omega(z,w) conj(g(w)) = B_1(z,w)` for `omega = |g|^2` with
//! finite-rank evidence. (That identity presumes `{e_n/g}` is a complete
//! basis, which holds for the non-vanishing `g` used here; completeness
//! itself is assumed, not certified.)

mod gram;

pub use gram::{build_gram_kernel, GramKernel, GramWeight};

use std::sync::Mutex;

use num_complex::Complex64;

use crate::error::{LabError, Result};
use crate::moments::phi_log;
use crate::numerics::{integrate_interval_complex, TruncationPolicy};
use crate::weights::cayley::{cayley, cayley_deriv};
use crate::weights::{HoloWeight, RadialWeight};

/// Radius past which series kernels refuse to evaluate: convergence
/// degrades near the boundary and the identity checks only need interior
/// points.
pub const RADIUS_LIMIT: f64 = 0.95;

const MOMENT_TOL: f64 = 1e-12;

/// A truncated kernel evaluation together with its tail bound.
#[derive(Debug, Clone, Copy)]
pub struct KernelEvaluation {
    pub value: Complex64,
    pub terms_used: usize,
    /// Geometric tail estimate from the last term and the observed ratio.
    pub tail_bound: f64,
}

/// The unweighted disc kernel `B_1(z,w) = 1/(pi (1 - z wbar)^2)`.
pub fn disc_kernel(z: Complex64, w: Complex64) -> Result<Complex64> {
    let zw = z * w.conj();
    if zw.norm() >= 1.0 {
        return Err(LabError::InvalidInput(format!(
            "disc kernel requires |z wbar| < 1, got {}",
            zw.norm()
        )));
    }
    let d = Complex64::new(1.0, 0.0) - zw;
    Ok(1.0 / (std::f64::consts::PI * d * d))
}

/// Series evaluator for the weighted kernel of one radial weight, with the
/// log-moments `ln Phi(n)` cached as the series is extended.
pub struct RadialKernel {
    weight: RadialWeight,
    log_moments: Mutex<Vec<f64>>,
}

impl RadialKernel {
    pub fn new(weight: RadialWeight) -> Self {
        RadialKernel {
            weight,
            log_moments: Mutex::new(Vec::new()),
        }
    }

    pub fn weight(&self) -> &RadialWeight {
        &self.weight
    }

    /// `ln Phi(n)`, cached.
    pub fn log_moment(&self, n: usize) -> Result<f64> {
        {
            let cache = self.log_moments.lock().unwrap();
            if n < cache.len() {
                return Ok(cache[n]);
            }
        }
        // compute outside the lock, fill any gap
        let mut cache = self.log_moments.lock().unwrap();
        while cache.len() <= n {
            let k = cache.len();
            let v = phi_log(&self.weight, k as f64, MOMENT_TOL)?;
            cache.push(v);
        }
        Ok(cache[n])
    }

    /// `B_mu(z,w)` by truncated series with a reported tail bound.
    pub fn eval(&self, z: Complex64, w: Complex64, policy: &TruncationPolicy) -> Result<KernelEvaluation> {
        if z.norm() > RADIUS_LIMIT || w.norm() > RADIUS_LIMIT {
            return Err(LabError::InvalidInput(format!(
                "kernel evaluation limited to |z|,|w| <= {RADIUS_LIMIT}"
            )));
        }
        self.eval_unrestricted(z, w, policy)
    }

    /// Series evaluation without the per-argument radius guard; used by the
    /// projection integral where only the product `|z wbar|` matters and
    /// the integration variable runs to the boundary.
    fn eval_unrestricted(
        &self,
        z: Complex64,
        w: Complex64,
        policy: &TruncationPolicy,
    ) -> Result<KernelEvaluation> {
        policy.validate()?;
        let zw = z * w.conj();
        if zw.norm() >= 1.0 {
            return Err(LabError::InvalidInput(format!(
                "kernel series requires |z wbar| < 1, got {}",
                zw.norm()
            )));
        }
        let q = zw.norm();
        let two_pi = 2.0 * std::f64::consts::PI;
        let mut sum = Complex64::new(0.0, 0.0);
        let mut pow = Complex64::new(1.0, 0.0);
        let mut small = 0usize;
        let mut prev_norm = f64::INFINITY;
        let mut ratio_cap: f64 = q; // geometric ratio |z wbar|, sharpened by data
        for n in 0..policy.max_terms {
            let term = pow * (-two_pi.ln() - self.log_moment(n)?).exp();
            sum += term;
            let tn = term.norm();
            if prev_norm.is_finite() && prev_norm > 0.0 {
                ratio_cap = ratio_cap.max((tn / prev_norm).min(0.999));
            }
            prev_norm = tn;
            if tn < policy.tail_tol {
                small += 1;
                if small >= policy.consecutive_small {
                    let tail = tn * ratio_cap / (1.0 - ratio_cap);
                    return Ok(KernelEvaluation {
                        value: sum,
                        terms_used: n + 1,
                        tail_bound: tail,
                    });
                }
            } else {
                small = 0;
            }
            pow *= zw;
        }
        Err(LabError::NonConvergence(format!(
            "kernel series not below tail_tol={} after {} terms",
            policy.tail_tol, policy.max_terms
        )))
    }

    /// Numerical Bergman projection `(B_mu f)(z) = int B_mu(z,w) f(w) mu(w) dA(w)`
    /// by trapezoidal angular integration and adaptive radial quadrature.
    pub fn project_numeric<F>(
        &self,
        f: F,
        z: Complex64,
        policy: &TruncationPolicy,
    ) -> Result<Complex64>
    where
        F: Fn(Complex64) -> Complex64,
    {
        const M: usize = 256;
        let failure = std::cell::RefCell::new(None);
        let radial = |rho: f64| -> Complex64 {
            if rho <= 0.0 || rho >= 1.0 {
                return Complex64::new(0.0, 0.0);
            }
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..M {
                let theta = 2.0 * std::f64::consts::PI * j as f64 / M as f64;
                let w = Complex64::from_polar(rho, theta);
                match self.eval_unrestricted(z, w, policy) {
                    Ok(k) => acc += k.value * f(w),
                    Err(e) => {
                        if failure.borrow().is_none() {
                            *failure.borrow_mut() = Some(e);
                        }
                        return Complex64::new(0.0, 0.0);
                    }
                }
            }
            acc * (2.0 * std::f64::consts::PI / M as f64) * rho * self.weight.eval(rho)
        };
        let (value, _err, _evals) =
            integrate_interval_complex(radial, 0.0, 1.0, 1e-9, &[0.25, 0.5, 0.75, 0.9])?;
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        Ok(value)
    }
}

/// The ordinary Bergman kernel of the upper half-plane through the Cayley
/// transform: `P_1(zeta,nu) = phi'(zeta) B_1(phi(zeta),phi(nu)) conj(phi'(nu))`.
pub fn halfplane_kernel(zeta: Complex64, nu: Complex64) -> Result<Complex64> {
    let pz = cayley(zeta)?;
    let pn = cayley(nu)?;
    Ok(cayley_deriv(zeta) * disc_kernel(pz, pn)? * cayley_deriv(nu).conj())
}

/// A finite combination `sum c_{ab} z^a zbar^b`.
#[derive(Debug, Clone, Default)]
pub struct MonomialPoly {
    pub terms: Vec<(Complex64, u32, u32)>,
}

impl MonomialPoly {
    pub fn monomial(a: u32, b: u32) -> Self {
        MonomialPoly {
            terms: vec![(Complex64::new(1.0, 0.0), a, b)],
        }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let zb = z.conj();
        self.terms
            .iter()
            .map(|&(c, a, b)| c * z.powu(a) * zb.powu(b))
            .sum()
    }

    /// The unweighted projection `B_1` applied termwise:
    /// `z^a zbar^b -> ((a-b+1)/(a+1)) z^{a-b}` for `a >= b`, else 0.
    pub fn project_unweighted(&self) -> MonomialPoly {
        let mut terms = Vec::new();
        for &(c, a, b) in &self.terms {
            if a >= b {
                let coef = (a - b + 1) as f64 / (a + 1) as f64;
                terms.push((c * coef, a - b, 0));
            }
        }
        MonomialPoly { terms }
    }

    /// Multiplies by a holomorphic polynomial (coefficients lowest-first).
    pub fn mul_poly(&self, poly: &[Complex64]) -> MonomialPoly {
        let mut terms = Vec::new();
        for &(c, a, b) in &self.terms {
            for (j, &h) in poly.iter().enumerate() {
                if h.norm() > 0.0 {
                    terms.push((c * h, a + j as u32, b));
                }
            }
        }
        MonomialPoly { terms }
    }
}

/// Checks the operator identity `g (B_omega f) = B_1(f g)` for
/// `omega = |g|^2` with polynomial `g`, using the Gram kernel of degree `n`
/// for the left side and exact monomial integrals for the right. Returns
/// the maximum absolute defect over the sample points.
pub fn operator_relation_check(
    g: &HoloWeight,
    f: &MonomialPoly,
    sample_points: &[Complex64],
    n: usize,
) -> Result<f64> {
    let h = g
        .poly()
        .ok_or_else(|| LabError::InvalidInput("operator check requires polynomial g".into()))?
        .to_vec();
    let gk = build_gram_kernel(GramWeight::PolyModulus(&h), n, 1e-10)?;
    // b_i = <f, z^i>_omega via exact monomial moments
    let b: Vec<Complex64> = (0..=n)
        .map(|i| {
            let mut acc = Complex64::new(0.0, 0.0);
            for &(c, a, bb) in &f.terms {
                for (cc, &hc) in h.iter().enumerate() {
                    for (dd, &hd) in h.iter().enumerate() {
                        let za = a + cc as u32;
                        let zb = i as u32 + bb + dd as u32;
                        if za == zb {
                            acc += c * hc * hd.conj() * std::f64::consts::PI
                                / (za as f64 + 1.0);
                        }
                    }
                }
            }
            acc
        })
        .collect();
    let coeffs = gk.solve(&b)?;
    let rhs = f.mul_poly(&h).project_unweighted();
    let mut worst = 0.0f64;
    for &z in sample_points {
        let mut bw = Complex64::new(0.0, 0.0);
        let mut zp = Complex64::new(1.0, 0.0);
        for c in &coeffs {
            bw += c * zp;
            zp *= z;
        }
        let lhs = g.g(z) * bw;
        let defect = (lhs - rhs.eval(z)).norm();
        worst = worst.max(defect);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::sum_series;

    fn policy() -> TruncationPolicy {
        TruncationPolicy {
            max_terms: 600,
            tail_tol: 1e-13,
            consecutive_small: 3,
        }
    }

    #[test]
    fn closed_form_values() {
        let k = disc_kernel(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)).unwrap();
        assert!((k.re - 1.0 / std::f64::consts::PI).abs() < 1e-15);
        // kernel against the center point is constant 1/pi
        let k = disc_kernel(Complex64::new(0.5, 0.0), Complex64::new(0.0, 0.0)).unwrap();
        assert!((k.re - 1.0 / std::f64::consts::PI).abs() < 1e-15);
        let k = disc_kernel(Complex64::new(0.6, 0.0), Complex64::new(0.6, 0.0)).unwrap();
        assert!((k.re - 1.0 / (std::f64::consts::PI * 0.4096)).abs() < 1e-13);
        assert!(disc_kernel(Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn series_matches_closed_form_for_constant_weight() {
        let rk = RadialKernel::new(RadialWeight::make_power(0.0).unwrap());
        let z = Complex64::new(0.3, 0.0);
        let w = Complex64::new(0.4, 0.0);
        let ev = rk.eval(z, w, &policy()).unwrap();
        let exact = disc_kernel(z, w).unwrap();
        assert!((ev.value - exact).norm() < 1e-10);
        assert!(ev.terms_used <= 200);
    }

    #[test]
    fn center_value_is_reciprocal_first_moment() {
        // wt = Power(1): 1/(2 pi Phi(0)) = 2/pi
        let rk = RadialKernel::new(RadialWeight::make_power(1.0).unwrap());
        let ev = rk
            .eval(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), &policy())
            .unwrap();
        assert!((ev.value.re - 2.0 / std::f64::consts::PI).abs() < 1e-11);
    }

    #[test]
    fn dostanic_kernel_stable_under_budget_doubling() {
        let rk = RadialKernel::new(RadialWeight::make_dostanic(0.0, 1.0, 1.0).unwrap());
        let z = Complex64::new(0.5, 0.0);
        let a = rk.eval(z, z, &policy()).unwrap();
        let mut big = policy();
        big.max_terms *= 2;
        big.tail_tol *= 0.1;
        let b = rk.eval(z, z, &big).unwrap();
        assert!(a.value.re > 0.0);
        assert!(a.value.im.abs() < 1e-12);
        assert!((a.value - b.value).norm() < 1e-8);
    }

    #[test]
    fn kernel_refuses_outside_radius_limit() {
        let rk = RadialKernel::new(RadialWeight::make_power(0.0).unwrap());
        assert!(rk
            .eval(Complex64::new(0.97, 0.0), Complex64::new(0.1, 0.0), &policy())
            .is_err());
    }

    #[test]
    fn halfplane_kernel_at_i() {
        // P_1(i,i) = phi'(i) (1/pi) conj(phi'(i)) = 1/(4 pi)
        let i = Complex64::new(0.0, 1.0);
        let k = halfplane_kernel(i, i).unwrap();
        assert!((k.re - 0.25 / std::f64::consts::PI).abs() < 1e-14);
        assert!(k.im.abs() < 1e-16);
    }

    #[test]
    fn halfplane_kernel_hermitian_at_random_pairs() {
        let mut state = 0x243f6a8885a308d3u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..100 {
            let zeta = Complex64::new(4.0 * next() - 2.0, 2.0 * next() + 0.05);
            let nu = Complex64::new(4.0 * next() - 2.0, 2.0 * next() + 0.05);
            let a = halfplane_kernel(zeta, nu).unwrap();
            let b = halfplane_kernel(nu, zeta).unwrap();
            assert!(
                (a - b.conj()).norm() <= 1e-10 * a.norm().max(1e-3),
                "hermitian defect at ({zeta}, {nu})"
            );
        }
    }

    #[test]
    fn geometric_series_oracle_for_closed_form() {
        // B_1(z,w) with Phi(n) = 1/(2n+2): sum (n+1) (z wbar)^n / pi
        let z = Complex64::new(0.35, 0.1);
        let w = Complex64::new(0.2, -0.3);
        let zw = z * w.conj();
        let (series, _) = sum_series(
            |n| zw.powu(n as u32) * ((n + 1) as f64) / std::f64::consts::PI,
            &policy(),
        )
        .unwrap();
        assert!((series - disc_kernel(z, w).unwrap()).norm() < 1e-12);
    }

    #[test]
    fn projection_of_monomials() {
        let rk = RadialKernel::new(RadialWeight::make_power(0.0).unwrap());
        let z = Complex64::new(0.4, 0.0);
        // f = z^2 zbar: projects to (2/3) z
        let v = rk
            .project_numeric(|w| w * w * w.conj(), z, &policy())
            .unwrap();
        let expected = 2.0 / 3.0 * 0.4;
        assert!((v.re - expected).abs() < 1e-6, "{v} vs {expected}");
        assert!(v.im.abs() < 1e-8);
        // constants are reproduced
        let v = rk
            .project_numeric(|_| Complex64::new(1.0, 0.0), z, &policy())
            .unwrap();
        assert!((v - 1.0).norm() < 1e-7);
        // pure antiholomorphic input projects to 0
        let v = rk
            .project_numeric(|w| w.conj() * w.conj(), z, &policy())
            .unwrap();
        assert!(v.norm() < 1e-6);
    }

    #[test]
    fn operator_relation_trivial_cases() {
        // g = 1 reduces to B_1 f = B_1 f
        let g = HoloWeight::one();
        let f = MonomialPoly::monomial(1, 1);
        let pts = [Complex64::new(0.3, 0.1), Complex64::new(-0.2, 0.4)];
        let d = operator_relation_check(&g, &f, &pts, 12).unwrap();
        assert!(d < 1e-10, "defect {d}");
        // holomorphic f: both sides equal g f exactly
        let g = HoloWeight::linear_shift(2.0).unwrap();
        let f = MonomialPoly::monomial(3, 0);
        let d = operator_relation_check(&g, &f, &pts, 12).unwrap();
        assert!(d < 1e-10, "defect {d}");
    }

    #[test]
    fn operator_relation_mixed_monomial() {
        let g = HoloWeight::linear_shift(2.0).unwrap();
        let f = MonomialPoly::monomial(1, 1); // z zbar
        let pts: Vec<Complex64> = (0..8)
            .map(|i| Complex64::from_polar(0.5, i as f64))
            .collect();
        let d = operator_relation_check(&g, &f, &pts, 16).unwrap();
        assert!(d < 1e-3, "defect {d}");
        // refinement: the defect should drop when the rank grows
        let d24 = operator_relation_check(&g, &f, &pts, 24).unwrap();
        assert!(d24 <= d * 0.9 + 1e-12, "no refinement: {d} -> {d24}");
    }
}
