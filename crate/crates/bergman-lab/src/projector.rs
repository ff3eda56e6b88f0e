//! Monomial projection arithmetic and the blow-up ratio experiments.
//!
//! The weighted Bergman projection acts on monomials by
//! `B_lambda(z^a zbar^b) = (Phi(a)/Phi(a-b)) z^{a-b}` for `a >= b` (and
//! annihilates them for `a < b`), and weighted p-norms of monomials reduce
//! to moments: `||z^a zbar^b||_{p,lambda}^p = 2 pi Phi(p(a+b)/2)`. The ratio
//!
//! `R_k(m) = (Phi(km)/Phi((k-1)m))^p  Phi((p/2)(k-1)m) / Phi((p/2)(k+1)m)`
//!
//! is therefore computable entirely from four moment values; it stays
//! bounded for weights whose projection is L^p-regular and blows up along
//! `m` for Dostanic-type weights when `p != 2`. All ratio arithmetic runs
//! in the log domain: `Phi(km)` underflows doubles long before the ratios
//! become interesting.

use rayon::prelude::*;

use crate::error::{LabError, Result};
use crate::moments::phi_log;
use crate::weights::RadialWeight;

const TOL: f64 = 1e-12;

/// `B_lambda(z^a zbar^b)` as `(coefficient, degree)`: the projection is
/// `coefficient * z^degree`, with coefficient 0 when `a < b`.
pub fn project_monomial(w: &RadialWeight, a: u32, b: u32) -> Result<(f64, i64)> {
    let degree = a as i64 - b as i64;
    if a < b {
        return Ok((0.0, degree));
    }
    if b == 0 {
        // holomorphic input is fixed by the projection
        return Ok((1.0, degree));
    }
    let num = phi_log(w, a as f64, TOL)?;
    let den = phi_log(w, (a - b) as f64, TOL)?;
    Ok(((num - den).exp(), degree))
}

/// `||z^a zbar^b||_{p,lambda}^p = 2 pi Phi(p(a+b)/2)`.
pub fn lp_norm_monomial(w: &RadialWeight, a: u32, b: u32, p: f64) -> Result<f64> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(LabError::InvalidInput(format!(
            "need p in (1, inf), got {p}"
        )));
    }
    let x = 0.5 * p * (a + b) as f64;
    Ok(2.0 * std::f64::consts::PI * phi_log(w, x, TOL)?.exp())
}

/// Smallest integer strictly greater than `(2+p)/(2-p)` for `p in (1,2)`;
/// with this `k` the exponent ordering
/// `(p/2)(k-1)m < (p/2)(k+1)m < (k-1)m < km` holds for all `m >= 1`.
pub fn min_k(p: f64) -> Result<usize> {
    if !(p > 1.0 && p < 2.0) {
        return Err(LabError::InvalidInput(format!(
            "min_k requires p in (1,2), got {p}"
        )));
    }
    let q = (2.0 + p) / (2.0 - p);
    // snap to the exact integer when q is one up to rounding
    let r = q.round();
    let q = if (q - r).abs() < 1e-9 * r.abs().max(1.0) {
        r
    } else {
        q
    };
    Ok(q.floor() as usize + 1)
}

/// `ln R_k(m)` from four log-moments.
pub fn log_ratio(w: &RadialWeight, p: f64, k: usize, m: usize) -> Result<f64> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(LabError::InvalidInput(format!(
            "need p in (1, inf), got {p}"
        )));
    }
    if k < 1 || m < 1 {
        return Err(LabError::InvalidInput(format!(
            "need k >= 1 and m >= 1, got k={k}, m={m}"
        )));
    }
    let (kf, mf) = (k as f64, m as f64);
    let l_km = phi_log(w, kf * mf, TOL)?;
    let l_k1m = phi_log(w, (kf - 1.0) * mf, TOL)?;
    let l_lo = phi_log(w, 0.5 * p * (kf - 1.0) * mf, TOL)?;
    let l_hi = phi_log(w, 0.5 * p * (kf + 1.0) * mf, TOL)?;
    Ok(p * (l_km - l_k1m) + l_lo - l_hi)
}

/// `R_k(m)`, positive and finite.
pub fn ratio(w: &RadialWeight, p: f64, k: usize, m: usize) -> Result<f64> {
    Ok(log_ratio(w, p, k, m)?.exp())
}

#[derive(Debug, Clone, Copy)]
pub struct RatioPoint {
    pub m: usize,
    pub r: f64,
    pub log_r: f64,
}

/// A sweep of `R_k(m)` over an `m` grid for one weight and exponent.
#[derive(Debug, Clone)]
pub struct RatioSeries {
    pub weight_id: String,
    pub p: f64,
    pub k: usize,
    pub points: Vec<RatioPoint>,
    /// Per-point failures (the sweep continues past them).
    pub failures: Vec<(usize, String)>,
}

/// Pointwise [`ratio`] over the grid; deterministic ordering, per-point
/// errors recorded without aborting the sweep.
pub fn ratio_sweep(w: &RadialWeight, p: f64, k: usize, m_grid: &[usize]) -> RatioSeries {
    let results: Vec<(usize, Result<f64>)> = m_grid
        .par_iter()
        .map(|&m| (m, log_ratio(w, p, k, m)))
        .collect();
    let mut points = Vec::new();
    let mut failures = Vec::new();
    for (m, res) in results {
        match res {
            Ok(log_r) => points.push(RatioPoint {
                m,
                r: log_r.exp(),
                log_r,
            }),
            Err(e) => failures.push((m, e.to_string())),
        }
    }
    RatioSeries {
        weight_id: w.id(),
        p,
        k,
        points,
        failures,
    }
}

/// The default dyadic grid `{1, 2, 4, ..., m_max}`.
pub fn dyadic_grid(m_max: usize) -> Vec<usize> {
    let mut grid = Vec::new();
    let mut m = 1usize;
    while m <= m_max {
        grid.push(m);
        m *= 2;
    }
    grid
}
