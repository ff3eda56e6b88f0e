//! The moment function `Phi(x) = int_0^1 r^{2x+1} lambda(r) dr`, its
//! integration-by-parts ladder `Phi_n`, the truncated moments `Phi~_n`, and
//! the `Theta_n`/`theta_n` functions, all evaluated in the log domain where
//! the values span hundreds of orders of magnitude.
//!
//! Under `u = 1 - r^2` the moment function becomes
//! `Phi(x) = (1/2) int_0^1 (1-u)^x lambda~(u) du`, which turns the
//! infinite-order flatness of Dostanic-type weights at `r = 1` into flatness
//! at `u = 0` and exposes the interior peak that dominates for large `x`.

use rayon::prelude::*;
use statrs::function::gamma::ln_gamma;

use crate::error::{LabError, Result};
use crate::numerics::{integrate_interval, integrate_log_domain, integrate_unit_interval};
use crate::weights::{DerivTable, RadialWeight};

/// Internal quadrature tolerance for operations that do not take one.
const DEFAULT_TOL: f64 = 1e-12;

/// `ln Phi(x)`; relative accuracy of `Phi` is ~1e-12 at the scales used here.
pub fn phi_log(w: &RadialWeight, x: f64, tol: f64) -> Result<f64> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(LabError::InvalidInput(format!("need x >= 0, got {x}")));
    }
    let log_f = |u: f64| {
        if u <= 0.0 || u >= 1.0 {
            f64::NEG_INFINITY
        } else {
            x * (1.0 - u).ln() + w.log_eval_u(u)
        }
    };
    let lq = integrate_log_domain(log_f, 0.0, 1.0, tol)?;
    if lq.log_value == f64::NEG_INFINITY {
        return Err(LabError::NonConvergence(
            "moment integrand vanished identically".into(),
        ));
    }
    Ok(lq.log_value + 0.5f64.ln())
}

/// `Phi(x) = int_0^1 r^{2x+1} lambda(r) dr`, strictly positive.
pub fn phi(w: &RadialWeight, x: f64, tol: f64) -> Result<f64> {
    Ok(phi_log(w, x, tol)?.exp())
}

/// Closed-form oracle for power weights: `Phi(x) = (1/2) B(x+1, t+1)`.
///
/// Exact up to the accuracy of the log-gamma function; used by tests and by
/// the CSV tooling as an independent cross-check of the quadrature path.
pub fn phi_beta_oracle(t: f64, x: f64) -> f64 {
    0.5 * (ln_gamma(x + 1.0) + ln_gamma(t + 1.0) - ln_gamma(x + t + 2.0)).exp()
}

/// Cached moment evaluations for one weight.
#[derive(Debug, Clone)]
pub struct MomentTable {
    pub weight_id: String,
    pub entries: Vec<MomentEntry>,
}

#[derive(Debug, Clone, Copy)]
pub struct MomentEntry {
    pub x: f64,
    /// `Phi(x)`; 0.0 when the value underflows (see `log_value`).
    pub value: f64,
    /// `ln Phi(x)`, always meaningful.
    pub log_value: f64,
    /// Estimated absolute error of `value`.
    pub abs_error: f64,
}

/// Evaluates `Phi` on a grid, in parallel; entry order follows `xs`.
pub fn build_table(w: &RadialWeight, xs: &[f64], tol: f64) -> Result<MomentTable> {
    let entries: Result<Vec<MomentEntry>> = xs
        .par_iter()
        .map(|&x| {
            let lv = phi_log(w, x, tol)?;
            let value = lv.exp();
            Ok(MomentEntry {
                x,
                value,
                log_value: lv,
                abs_error: tol.max(1e-12) * value,
            })
        })
        .collect();
    Ok(MomentTable {
        weight_id: w.id(),
        entries: entries?,
    })
}

/// The integration-by-parts ladder at order `n`:
/// `psi_n = (-1)^n lambda^{(n)}`, `Phi_n(x) = int_0^1 r^{2x+1+n} psi_n`,
/// `Phi~_n(x) = int_{a_n}^1 r^{2x+1+n} psi_n`, and
/// `theta_n(x) = sum_{j=2}^{n+1} ln(2x+j) - ln Phi~_n(x)`.
pub struct MomentLadder {
    weight: RadialWeight,
    n: usize,
    a_n: f64,
    table: Option<DerivTable>,
}

impl MomentLadder {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn a_n(&self) -> f64 {
        self.a_n
    }

    pub fn weight(&self) -> &RadialWeight {
        &self.weight
    }

    /// `psi_n(r)`, exact for the named families.
    pub fn psi(&self, r: f64) -> f64 {
        let sign = if self.n % 2 == 0 { 1.0 } else { -1.0 };
        sign * self
            .weight
            .derivative_unchecked(self.table.as_ref(), self.n, r)
    }

    fn log_abs_integrand(&self, x: f64, r: f64) -> f64 {
        if r <= 0.0 || r >= 1.0 {
            return f64::NEG_INFINITY;
        }
        let t = match &self.table {
            Some(t) => t.factor(r).abs(),
            None => {
                let lam = self.weight.eval(r);
                if lam > 0.0 {
                    (self.psi(r) / lam).abs()
                } else {
                    return f64::NEG_INFINITY;
                }
            }
        };
        if t == 0.0 {
            return f64::NEG_INFINITY;
        }
        (2.0 * x + 1.0 + self.n as f64) * r.ln() + self.weight.log_eval_r(r) + t.ln()
    }

    /// `Phi_n(x)` over the full interval (signed integrand); intended for
    /// moderate `x` where the value does not underflow.
    pub fn phi_n(&self, x: f64) -> Result<f64> {
        let e = 2.0 * x + 1.0 + self.n as f64;
        let f = |r: f64| r.powf(e) * self.psi(r);
        let rough = integrate_unit_interval(f, 1e-3)?;
        let tol = (1e-10 * rough.value.abs()).max(1e-13);
        Ok(integrate_interval(f, 0.0, 1.0, tol, &[self.a_n, 0.25, 0.5, 0.75])?.value)
    }

    /// `Phi~_n(x)`, the truncated moment (non-negative integrand).
    pub fn phi_n_tilde(&self, x: f64) -> Result<f64> {
        Ok(self.log_phi_n_tilde(x)?.exp())
    }

    /// `ln Phi~_n(x)`, evaluated peak-shifted.
    pub fn log_phi_n_tilde(&self, x: f64) -> Result<f64> {
        if self.a_n >= 1.0 {
            return Err(LabError::InvalidInput("empty truncation interval".into()));
        }
        let lq = integrate_log_domain(
            |r| self.log_abs_integrand(x, r),
            self.a_n,
            1.0,
            DEFAULT_TOL,
        )?;
        if lq.log_value == f64::NEG_INFINITY {
            return Err(LabError::NonConvergence(
                "truncated moment integrand vanished identically".into(),
            ));
        }
        Ok(lq.log_value)
    }

    /// `theta_n(x) = -ln Theta_n(x)` with
    /// `Theta_n(x) = Phi~_n(x) prod_{j=2}^{n+1} (2x+j)^{-1}`.
    pub fn theta(&self, x: f64) -> Result<f64> {
        let mut acc = -self.log_phi_n_tilde(x)?;
        for j in 2..=(self.n + 1) {
            acc += (2.0 * x + j as f64).ln();
        }
        Ok(acc)
    }
}

/// Builds the ladder; requires the sign onset `a_n` to exist and the
/// truncated integrand to be non-trivial.
pub fn build_ladder(w: &RadialWeight, n: usize) -> Result<MomentLadder> {
    let onset = w.sign_onset(n)?;
    let table = w.deriv_table(n);
    let ladder = MomentLadder {
        weight: w.clone(),
        n,
        a_n: onset.a_n,
        table,
    };
    // reject identically-zero psi_n (e.g. constant weight at n >= 1)
    if n >= 1 {
        let mut scale = 0.0f64;
        for i in 1..200 {
            scale = scale.max(ladder.psi(i as f64 / 200.0).abs());
        }
        if scale == 0.0 {
            return Err(LabError::InvalidInput(format!(
                "psi_{n} vanishes identically; ladder undefined"
            )));
        }
    }
    Ok(ladder)
}

/// `|Phi_n(x)/Phi~_n(x) - 1|`; zero exactly when `a_n = 0`.
///
/// The head integral over `(0, a_n)` is assembled from constant-sign pieces,
/// each evaluated in the log domain, so the ratio stays accurate when both
/// moments are exponentially small.
pub fn check_tail_ratio(l: &MomentLadder, x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(LabError::InvalidInput(format!("need x >= 0, got {x}")));
    }
    if l.a_n == 0.0 {
        return Ok(0.0);
    }
    // locate sign changes of psi_n on (0, a_n)
    const SCAN: usize = 400;
    let mut cuts = vec![0.0];
    let mut prev_r = l.a_n / SCAN as f64 * 0.5;
    let mut prev_s = l.psi(prev_r).signum();
    for i in 1..SCAN {
        let r = l.a_n * (i as f64 + 0.5) / SCAN as f64;
        let s = l.psi(r).signum();
        if s != prev_s && s != 0.0 && prev_s != 0.0 {
            // bisect the flip
            let (mut lo, mut hi) = (prev_r, r);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if l.psi(mid).signum() == prev_s {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            cuts.push(0.5 * (lo + hi));
        }
        prev_r = r;
        prev_s = s;
    }
    cuts.push(l.a_n);

    // signed sum of log-domain pieces, shifted by the largest piece
    let mut logs = Vec::new();
    let mut signs = Vec::new();
    for wnd in cuts.windows(2) {
        let (a, b) = (wnd[0], wnd[1]);
        if b - a < 1e-14 {
            continue;
        }
        let mid_sign = l.psi(0.5 * (a + b)).signum();
        if mid_sign == 0.0 {
            continue;
        }
        let lq = integrate_log_domain(|r| l.log_abs_integrand(x, r), a, b, DEFAULT_TOL)?;
        if lq.log_value > f64::NEG_INFINITY {
            logs.push(lq.log_value);
            signs.push(mid_sign);
        }
    }
    let log_den = l.log_phi_n_tilde(x)?;
    if logs.is_empty() {
        return Ok(0.0);
    }
    let m = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let head: f64 = logs
        .iter()
        .zip(&signs)
        .map(|(lg, s)| s * (lg - m).exp())
        .sum();
    Ok((head.abs().ln() + m - log_den).exp())
}

/// Maximum log-convexity defect of `Phi` over adjacent grid triples:
/// `ln Phi(mid) - [t ln Phi(lo) + (1-t) ln Phi(hi)]` with
/// `t = (hi-mid)/(hi-lo)`. Non-positive (within ~1e-9) certifies
/// log-convexity on the grid; Hoelder weights make the test exact for
/// non-uniform (e.g. geometric) grids as well.
pub fn log_convexity_defect(w: &RadialWeight, xs: &[f64]) -> Result<f64> {
    if xs.len() < 3 {
        return Err(LabError::InvalidInput("need at least 3 grid points".into()));
    }
    if xs.windows(2).any(|p| p[1] <= p[0]) || xs[0] < 0.0 {
        return Err(LabError::InvalidInput(
            "grid must be strictly increasing and non-negative".into(),
        ));
    }
    let logs: Result<Vec<f64>> = xs.iter().map(|&x| phi_log(w, x, DEFAULT_TOL)).collect();
    let logs = logs?;
    let mut worst = f64::NEG_INFINITY;
    for i in 0..logs.len() - 2 {
        let (lo, mid, hi) = (xs[i], xs[i + 1], xs[i + 2]);
        let t = (hi - mid) / (hi - lo);
        let defect = logs[i + 1] - (t * logs[i] + (1.0 - t) * logs[i + 2]);
        worst = worst.max(defect);
    }
    Ok(worst)
}

/// `-x^2 theta_n''(x)` by second-order central differences with step 0.5.
///
/// Valid once `x/(2x+1+n) >= 1/(2 sqrt 2)`, i.e. the squares in the
/// second-derivative expansion have passed 1/8.
pub fn theta_second_derivative_estimate(l: &MomentLadder, x: f64) -> Result<f64> {
    let n = l.n() as f64;
    if !(x / (2.0 * x + 1.0 + n) >= 0.5 / std::f64::consts::SQRT_2) {
        return Err(LabError::InvalidInput(format!(
            "x = {x} too small for the curvature estimate at n = {}",
            l.n()
        )));
    }
    let h = 0.5;
    let tm = l.theta(x - h)?;
    let t0 = l.theta(x)?;
    let tp = l.theta(x + h)?;
    let second = (tp - 2.0 * t0 + tm) / (h * h);
    Ok(-x * x * second)
}
