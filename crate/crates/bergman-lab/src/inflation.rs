//! Hartogs domains `Omega = {(z,w) : z in D, |w|^2 < mu(z)}` in C^2 and the
//! inflation kernel series
//!
//! `B_Omega[(z,w),(t,s)] = (1/2pi) sum_m (2m+2) w^m K_m(z,t) sbar^m`,
//!
//! where `K_m` is the weighted Bergman kernel for `mu^{m+1}` on the disc.
//! At `w = s = 0` only the `m = 0` term survives, giving the slice identity
//! `pi B_Omega[(z,0),(t,0)] = B_mu(z,t)`; projecting a function of `z` alone
//! collapses the same way: `B_Omega F(z,0) = B_mu f(z)` for `F(z,w) = f(z)`
//! (carrying the mean-value step in `s` through the slice identity leaves
//! constant 1). For `mu = |g|^2` the series factorizes as
//! `B_omega(z,t) B_1(w/g(z), s/g(t))`.

use std::sync::{Arc, Mutex};

use num_complex::Complex64;

use crate::error::{LabError, Result};
use crate::kernels::{disc_kernel, build_gram_kernel, GramWeight, KernelEvaluation, RadialKernel};
use crate::numerics::TruncationPolicy;
use crate::projector::project_monomial;
use crate::weights::{HoloWeight, RadialWeight};

/// The base weight of a Hartogs domain.
#[derive(Clone)]
pub enum DomainWeight {
    Radial(RadialWeight),
    Holo(HoloWeight),
}

impl DomainWeight {
    pub fn eval(&self, z: Complex64) -> f64 {
        match self {
            DomainWeight::Radial(w) => w.eval(z.norm()),
            DomainWeight::Holo(g) => g.weight(z),
        }
    }
}

/// `Omega = {(z,w) in C^2 : |z| < 1, |w|^2 < mu(z)}`.
pub struct HartogsDomain {
    mu: DomainWeight,
}

pub fn make_domain(mu: DomainWeight) -> HartogsDomain {
    HartogsDomain { mu }
}

/// The domain over `mu(z) = |z-1|^{4/(p0-2)}` (bounded, Reinhardt in `w`,
/// non-smooth at `z = 1`).
pub fn bounded_transport_domain(p0: f64) -> Result<HartogsDomain> {
    if !(p0 > 2.0) {
        return Err(LabError::InvalidInput(format!("need p0 > 2, got {p0}")));
    }
    let e = 2.0 / (p0 - 2.0);
    let g = HoloWeight::new(move |z: Complex64| (z - 1.0).powf(e))?;
    Ok(make_domain(DomainWeight::Holo(g)))
}

impl HartogsDomain {
    pub fn mu(&self) -> &DomainWeight {
        &self.mu
    }

    pub fn mu_eval(&self, z: Complex64) -> f64 {
        self.mu.eval(z)
    }

    /// Strict membership `(z,w) in Omega`.
    pub fn contains(&self, z: Complex64, w: Complex64) -> bool {
        z.norm() < 1.0 && w.norm_sqr() < self.mu.eval(z)
    }

    fn radial_base(&self) -> Result<&RadialWeight> {
        match &self.mu {
            DomainWeight::Radial(w) => Ok(w),
            DomainWeight::Holo(_) => Err(LabError::InvalidInput(
                "inflation series requires a radial base weight".into(),
            )),
        }
    }
}

/// The inflation series for one radial-base domain, with the per-`m`
/// kernels (weights `mu^{m+1}`) cached.
pub struct InflationSeries {
    base: RadialWeight,
    kernels: Mutex<Vec<Arc<RadialKernel>>>,
    policy: TruncationPolicy,
}

impl InflationSeries {
    pub fn new(domain: &HartogsDomain, policy: TruncationPolicy) -> Result<Self> {
        policy.validate()?;
        Ok(InflationSeries {
            base: domain.radial_base()?.clone(),
            kernels: Mutex::new(Vec::new()),
            policy,
        })
    }

    /// The weighted kernel `K_m` for `mu^{m+1}`.
    pub fn kernel_m(&self, m: usize) -> Result<Arc<RadialKernel>> {
        let mut cache = self.kernels.lock().unwrap();
        while cache.len() <= m {
            let k = cache.len();
            let w = self.base.pow(k as u32 + 1)?;
            cache.push(Arc::new(RadialKernel::new(w)));
        }
        Ok(cache[m].clone())
    }

    /// `B_Omega[(z,w),(t,s)]` with a combined tail bound. The outer series
    /// stops once `(2m+2)|w sbar|^m K_m(rho,rho) / 2pi` (with
    /// `rho = max(|z|,|t|)`, which dominates `|K_m(z,t)|`) stays below the
    /// policy's tail tolerance.
    pub fn eval(
        &self,
        z: Complex64,
        w: Complex64,
        t: Complex64,
        s: Complex64,
    ) -> Result<KernelEvaluation> {
        let two_pi = 2.0 * std::f64::consts::PI;
        let ws = w * s.conj();
        let q = ws.norm();
        let rho = z.norm().max(t.norm());
        let mut sum = Complex64::new(0.0, 0.0);
        let mut tail = 0.0f64;
        let mut terms_used = 0usize;
        let mut small = 0usize;
        let mut pow = Complex64::new(1.0, 0.0);
        let mut prev_bound = f64::INFINITY;
        let mut bound_ratio = q.min(0.5);
        for m in 0..self.policy.max_terms {
            let kernel = self.kernel_m(m)?;
            let factor = (2.0 * m as f64 + 2.0) / two_pi;
            let diag = kernel.eval(Complex64::new(rho, 0.0), Complex64::new(rho, 0.0), &self.policy)?;
            let bound = factor * pow.norm() * diag.value.re.abs();
            let ev = kernel.eval(z, t, &self.policy)?;
            sum += ev.value * pow * factor;
            tail += factor * pow.norm() * ev.tail_bound;
            terms_used += 1;
            if prev_bound.is_finite() && prev_bound > 0.0 {
                bound_ratio = bound_ratio.max((bound / prev_bound).min(0.995));
            }
            prev_bound = bound;
            if bound < self.policy.tail_tol {
                small += 1;
                if small >= self.policy.consecutive_small {
                    tail += bound * bound_ratio / (1.0 - bound_ratio);
                    return Ok(KernelEvaluation {
                        value: sum,
                        terms_used,
                        tail_bound: tail,
                    });
                }
            } else {
                small = 0;
            }
            pow *= ws;
        }
        Err(LabError::NonConvergence(format!(
            "inflation series outer terms still above {} after {} terms (|w sbar| = {q})",
            self.policy.tail_tol, self.policy.max_terms
        )))
    }
}

/// `B_Omega[(z,w),(t,s)]` for a radial-base domain; both points must lie
/// inside `Omega`.
pub fn hartogs_kernel(
    domain: &HartogsDomain,
    zw: (Complex64, Complex64),
    ts: (Complex64, Complex64),
    policy: &TruncationPolicy,
) -> Result<KernelEvaluation> {
    if !domain.contains(zw.0, zw.1) || !domain.contains(ts.0, ts.1) {
        return Err(LabError::InvalidInput(
            "kernel arguments must lie inside the Hartogs domain".into(),
        ));
    }
    let series = InflationSeries::new(domain, *policy)?;
    series.eval(zw.0, zw.1, ts.0, ts.1)
}

/// Defect and error budget of an identity check.
#[derive(Debug, Clone, Copy)]
pub struct DefectReport {
    pub defect: f64,
    /// Sum of the reported truncation tails of both sides.
    pub budget: f64,
}

/// `|pi B_Omega[(z,0),(t,0)] - B_mu(z,t)|` with the combined tail budget.
pub fn slice_identity_defect_detailed(
    domain: &HartogsDomain,
    z: Complex64,
    t: Complex64,
    policy: &TruncationPolicy,
) -> Result<DefectReport> {
    let series = InflationSeries::new(domain, *policy)?;
    let zero = Complex64::new(0.0, 0.0);
    let lhs = series.eval(z, zero, t, zero)?;
    let base = RadialKernel::new(domain.radial_base()?.clone());
    let rhs = base.eval(z, t, policy)?;
    Ok(DefectReport {
        defect: (lhs.value * std::f64::consts::PI - rhs.value).norm(),
        budget: std::f64::consts::PI * lhs.tail_bound + rhs.tail_bound + 1e-9,
    })
}

/// See [`slice_identity_defect_detailed`].
pub fn slice_identity_defect(
    domain: &HartogsDomain,
    z: Complex64,
    t: Complex64,
    policy: &TruncationPolicy,
) -> Result<f64> {
    Ok(slice_identity_defect_detailed(domain, z, t, policy)?.defect)
}

/// `|B_Omega F(z,0) - B_mu f(z)|` for `F(z,w) = f(z) = z^a zbar^b`: the left
/// side integrates the slice kernel against `f mu` over the disc (the
/// mean-value step in `s` collapses the `w`-series), the right side is the
/// exact monomial projection.
pub fn lifted_projection_defect(
    domain: &HartogsDomain,
    a: u32,
    b: u32,
    z: Complex64,
    policy: &TruncationPolicy,
) -> Result<f64> {
    let base = domain.radial_base()?.clone();
    let kernel = RadialKernel::new(base.clone());
    let lhs = kernel.project_numeric(
        |t| t.powu(a) * t.conj().powu(b),
        z,
        policy,
    )?;
    let (coef, degree) = project_monomial(&base, a, b)?;
    let rhs = if coef == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        z.powu(degree as u32) * coef
    };
    Ok((lhs - rhs).norm())
}

/// Defect of the factorized form `B_Omega[(z,w),(t,s)] =
/// B_omega(z,t) B_1(w/g(z), s/g(t))` for `omega = |g|^2` with polynomial
/// `g`. The left side uses Gram kernels for `|g|^{2(m+1)}` up to `m = 8`
/// and the analytic form `K_m = B_1/(g^{m+1} conj(g)^{m+1})` beyond; the
/// right side uses `B_omega = B_1/(g conj(g))`.
pub fn factorized_hartogs_defect(
    g: &HoloWeight,
    zw: (Complex64, Complex64),
    ts: (Complex64, Complex64),
    n: usize,
) -> Result<f64> {
    const GRAM_TERMS: usize = 9; // m = 0..8
    let (z, w) = zw;
    let (t, s) = ts;
    let gz = g.g(z);
    let gt = g.g(t);
    if (w / gz).norm() >= 0.95 || (s / gt).norm() >= 0.95 {
        return Err(LabError::InvalidInput(
            "factorization check requires |w/g(z)|, |s/g(t)| < 0.95".into(),
        ));
    }
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut lhs = Complex64::new(0.0, 0.0);
    let ws = w * s.conj();
    let mut pow = Complex64::new(1.0, 0.0);
    for m in 0..GRAM_TERMS {
        let h = g.poly_pow(m as u32 + 1)?;
        let gk = build_gram_kernel(GramWeight::PolyModulus(&h), n, 1e-10)?;
        lhs += gk.eval(z, t) * pow * ((2.0 * m as f64 + 2.0) / two_pi);
        pow *= ws;
    }
    // analytic remainder: sum_{m>=M} (2m+2) q^m = 2 q^M ((M+1) - M q)/(1-q)^2
    let q = ws / (gz * gt.conj());
    let m = GRAM_TERMS as f64;
    let one = Complex64::new(1.0, 0.0);
    let remainder_sum =
        2.0 * q.powu(GRAM_TERMS as u32) * ((m + 1.0) - m * q) / ((one - q) * (one - q));
    lhs += disc_kernel(z, t)? / (gz * gt.conj()) * remainder_sum / two_pi;
    let rhs = disc_kernel(z, t)? / (gz * gt.conj()) * disc_kernel(w / gz, s / gt)?;
    Ok((lhs - rhs).norm())
}
