//! Gram-matrix reproducing kernels: the finite-rank kernel of
//! `span{1, z, ..., z^N}` in `L^2(mu)` for a possibly non-radial disc
//! weight, via a Cholesky factorization with pivot-failure reporting.

use num_complex::Complex64;

use crate::error::{LabError, Result};

/// How the Gram entries are obtained.
pub enum GramWeight<'a> {
    /// `mu = |h|^2` for a polynomial `h` (coefficients lowest-first):
    /// entries assemble exactly from monomial moments `int z^a zbar^b dA`,
    /// which vanish unless `a = b` and equal `pi/(a+1)` otherwise.
    PolyModulus(&'a [Complex64]),
    /// General evaluator; entries by 2-D quadrature (trapezoidal in the
    /// angle, composite Gauss-Kronrod in the radius).
    Evaluator(&'a (dyn Fn(Complex64) -> f64 + Sync)),
}

/// The reproducing kernel `K_N(z,w) = v(w)^* G^{-1} v(z)` of the monomial
/// span of degree `N` under `<.,.>_mu`, where `G_{jk} = <z^j, z^k>_mu`.
pub struct GramKernel {
    degree: usize,
    gram: Vec<Vec<Complex64>>,
    chol: Vec<Vec<Complex64>>,
    condition_estimate: f64,
    entry_error: f64,
}

const COND_LIMIT: f64 = 1e12;

/// Builds the Gram kernel of degree `n` (matrix size `(n+1) x (n+1)`).
///
/// Errs with `IllConditioned` when a Cholesky pivot fails or the condition
/// estimate exceeds 1e12, and with `NonConvergence` when the quadrature
/// cannot certify the requested entry tolerance.
pub fn build_gram_kernel(weight: GramWeight<'_>, n: usize, tol: f64) -> Result<GramKernel> {
    if n > 40 {
        return Err(LabError::InvalidInput(format!(
            "gram degree limited to 40, got {n}"
        )));
    }
    let (gram, entry_error) = match weight {
        GramWeight::PolyModulus(h) => (gram_from_poly(h, n), 0.0),
        GramWeight::Evaluator(f) => gram_from_evaluator(f, n, tol)?,
    };
    let (chol, condition_estimate) = cholesky(&gram)?;
    if condition_estimate > COND_LIMIT {
        return Err(LabError::IllConditioned {
            cond: condition_estimate,
        });
    }
    Ok(GramKernel {
        degree: n,
        gram,
        chol,
        condition_estimate,
        entry_error,
    })
}

fn gram_from_poly(h: &[Complex64], n: usize) -> Vec<Vec<Complex64>> {
    let mut g = vec![vec![Complex64::new(0.0, 0.0); n + 1]; n + 1];
    for (row, grow) in g.iter_mut().enumerate() {
        for (col, entry) in grow.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for (c, &hc) in h.iter().enumerate() {
                for (d, &hd) in h.iter().enumerate() {
                    let a = row + c;
                    let b = col + d;
                    if a == b {
                        acc += hc * hd.conj() * std::f64::consts::PI / (a as f64 + 1.0);
                    }
                }
            }
            *entry = acc;
        }
    }
    g
}

// Composite G7K15 radial nodes paired with one trapezoidal angular pass per
// node; returns (gram, entry error estimate from panel-count halving).
fn gram_from_evaluator(
    f: &(dyn Fn(Complex64) -> f64 + Sync),
    n: usize,
    tol: f64,
) -> Result<(Vec<Vec<Complex64>>, f64)> {
    let coarse = gram_quadrature(f, n, 8);
    let fine = gram_quadrature(f, n, 16);
    let mut err = 0.0f64;
    for j in 0..=n {
        for k in 0..=n {
            err = err.max((fine[j][k] - coarse[j][k]).norm());
        }
    }
    if err > tol.max(1e-13) * 10.0 {
        return Err(LabError::NonConvergence(format!(
            "gram entries not converged: panel-halving difference {err:.3e} > tol {tol:.3e}"
        )));
    }
    Ok((fine, err))
}

fn gram_quadrature(f: &(dyn Fn(Complex64) -> f64 + Sync), n: usize, panels: usize) -> Vec<Vec<Complex64>> {
    // 15-point Kronrod nodes and weights on [0,1] per panel
    const XGK: [f64; 8] = [
        0.991455371120813,
        0.949107912342759,
        0.864864423359769,
        0.741531185599394,
        0.586087235467691,
        0.405845151377397,
        0.207784955007898,
        0.0,
    ];
    const WGK: [f64; 8] = [
        0.022935322010529,
        0.063092092629979,
        0.104790010322250,
        0.140653259715525,
        0.169004726639267,
        0.190350578064785,
        0.204432940075298,
        0.209482141084728,
    ];
    const M: usize = 256;
    let mut g = vec![vec![Complex64::new(0.0, 0.0); n + 1]; n + 1];
    let mut nodes: Vec<(f64, f64)> = Vec::with_capacity(panels * 15);
    for p in 0..panels {
        let a = p as f64 / panels as f64;
        let half = 0.5 / panels as f64;
        let c = a + half;
        for j in 0..8 {
            let w = WGK[j] * half;
            if j == 7 {
                nodes.push((c, w));
            } else {
                nodes.push((c - half * XGK[j], w));
                nodes.push((c + half * XGK[j], w));
            }
        }
    }
    for (rho, wt) in nodes {
        // angular Fourier coefficients C_q(rho), q = 0..n (C_{-q} = conj C_q)
        let mut cq = vec![Complex64::new(0.0, 0.0); n + 1];
        for m in 0..M {
            let theta = 2.0 * std::f64::consts::PI * m as f64 / M as f64;
            let v = f(Complex64::from_polar(rho, theta));
            for (q, c) in cq.iter_mut().enumerate() {
                let phase = Complex64::from_polar(1.0, q as f64 * theta);
                *c += phase * v;
            }
        }
        let norm = 2.0 * std::f64::consts::PI / M as f64;
        for c in cq.iter_mut() {
            *c *= norm;
        }
        for j in 0..=n {
            for k in 0..=n {
                let q = j as i64 - k as i64;
                let c = if q >= 0 {
                    cq[q as usize]
                } else {
                    cq[(-q) as usize].conj()
                };
                g[j][k] += c * (wt * rho.powi((j + k + 1) as i32));
            }
        }
    }
    g
}

/// Cholesky factorization `G = L L^*` with pivot-failure detection; returns
/// `(L, condition estimate)` where the estimate is `(max L_jj / min L_jj)^2`.
fn cholesky(g: &[Vec<Complex64>]) -> Result<(Vec<Vec<Complex64>>, f64)> {
    let n = g.len();
    let mut l = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    let mut dmin = f64::INFINITY;
    let mut dmax = 0.0f64;
    for j in 0..n {
        let mut d = g[j][j].re;
        for k in 0..j {
            d -= l[j][k].norm_sqr();
        }
        if !(d > 0.0) || !d.is_finite() {
            return Err(LabError::IllConditioned { cond: f64::INFINITY });
        }
        let dj = d.sqrt();
        l[j][j] = Complex64::new(dj, 0.0);
        dmin = dmin.min(dj);
        dmax = dmax.max(dj);
        for i in (j + 1)..n {
            let mut s = g[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k].conj();
            }
            l[i][j] = s / dj;
        }
    }
    Ok((l, (dmax / dmin).powi(2)))
}

impl GramKernel {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn condition_estimate(&self) -> f64 {
        self.condition_estimate
    }

    /// Achieved entry tolerance (0 for the exact polynomial path).
    pub fn entry_error(&self) -> f64 {
        self.entry_error
    }

    pub fn gram_entry(&self, j: usize, k: usize) -> Complex64 {
        self.gram[j][k]
    }

    /// Solves `G x = rhs` using the Cholesky factors.
    pub fn solve(&self, rhs: &[Complex64]) -> Result<Vec<Complex64>> {
        let n = self.gram.len();
        if rhs.len() != n {
            return Err(LabError::InvalidInput(format!(
                "rhs length {} != {}",
                rhs.len(),
                n
            )));
        }
        // L y = rhs
        let mut y = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..n {
            let mut s = rhs[i];
            for k in 0..i {
                s -= self.chol[i][k] * y[k];
            }
            y[i] = s / self.chol[i][i];
        }
        // L^* x = y
        let mut x = vec![Complex64::new(0.0, 0.0); n];
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in (i + 1)..n {
                s -= self.chol[k][i].conj() * x[k];
            }
            x[i] = s / self.chol[i][i];
        }
        Ok(x)
    }

    /// `K_N(z,w) = v(w)^* G^{-1} v(z)` with `v` the monomial vector.
    pub fn eval(&self, z: Complex64, w: Complex64) -> Complex64 {
        let n = self.gram.len();
        let vz: Vec<Complex64> = (0..n).map(|k| z.powu(k as u32)).collect();
        let x = self.solve(&vz).expect("factorized");
        let mut acc = Complex64::new(0.0, 0.0);
        let mut wp = Complex64::new(1.0, 0.0);
        for xi in x {
            acc += wp.conj() * xi;
            wp *= w;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::disc_kernel;
    use crate::moments::phi;
    use crate::weights::{HoloWeight, RadialWeight};
    use std::f64::consts::PI;

    #[test]
    fn unweighted_gram_is_diagonal() {
        let one = [Complex64::new(1.0, 0.0)];
        let gk = build_gram_kernel(GramWeight::PolyModulus(&one), 5, 1e-12).unwrap();
        for j in 0..=5 {
            for k in 0..=5 {
                let want = if j == k { PI / (j as f64 + 1.0) } else { 0.0 };
                assert!((gk.gram_entry(j, k).re - want).abs() < 1e-14);
                assert!(gk.gram_entry(j, k).im.abs() < 1e-14);
            }
        }
        // K_5(0,0) = 1/pi
        let v = gk.eval(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        assert!((v.re - 1.0 / PI).abs() < 1e-14);
    }

    #[test]
    fn factorization_identity_for_linear_shift() {
        // K_12(z,w) ~ B_1(z,w)/(g(z) conj(g(w))) for omega = |z-2|^2
        let g = HoloWeight::linear_shift(2.0).unwrap();
        let h = g.poly().unwrap();
        let gk = build_gram_kernel(GramWeight::PolyModulus(h), 12, 1e-12).unwrap();
        let z = Complex64::new(0.3, 0.0);
        let w = Complex64::new(0.0, 0.2);
        let approx = gk.eval(z, w);
        let exact = disc_kernel(z, w).unwrap() / (g.g(z) * g.g(w).conj());
        assert!(
            (approx - exact).norm() < 1e-4,
            "K_12 {approx} vs {exact}"
        );
    }

    #[test]
    fn evaluator_gram_matches_radial_moments() {
        // Power(1) as a 2-D evaluator: diagonal 2 pi Phi(n)
        let w = RadialWeight::make_power(1.0).unwrap();
        let f = move |z: Complex64| {
            let u = 1.0 - z.norm_sqr();
            u.max(0.0)
        };
        let gk = build_gram_kernel(GramWeight::Evaluator(&f), 8, 1e-8).unwrap();
        for n in 0..=8 {
            let want = 2.0 * PI * phi(&w, n as f64, 1e-12).unwrap();
            let got = gk.gram_entry(n, n).re;
            assert!(
                (got - want).abs() < 1e-8,
                "diagonal {n}: {got} vs {want}"
            );
        }
        // off-diagonal must vanish for radial weights
        assert!(gk.gram_entry(3, 1).norm() < 1e-10);
    }

    #[test]
    fn hermitian_and_positive() {
        let g = HoloWeight::linear_shift(2.0).unwrap();
        let gk =
            build_gram_kernel(GramWeight::PolyModulus(g.poly().unwrap()), 10, 1e-12).unwrap();
        for j in 0..=10 {
            for k in 0..=10 {
                let d = (gk.gram_entry(j, k) - gk.gram_entry(k, j).conj()).norm();
                assert!(d < 1e-12);
            }
        }
        assert!(gk.condition_estimate() < 1e6);
        // diagonal positivity of the kernel
        for r in [0.0, 0.3, 0.6] {
            let z = Complex64::new(r, 0.1);
            assert!(gk.eval(z, z).re > 0.0);
        }
    }

    #[test]
    fn exp_weight_evaluator_path() {
        // omega = |e^z|^2 = e^{2 Re z}
        let f = |z: Complex64| (2.0 * z.re).exp();
        let gk = build_gram_kernel(GramWeight::Evaluator(&f), 6, 1e-7).unwrap();
        // Hermitian within tolerance
        for j in 0..=6 {
            for k in 0..=6 {
                assert!((gk.gram_entry(j, k) - gk.gram_entry(k, j).conj()).norm() < 1e-9);
            }
        }
        assert!(gk.entry_error() < 1e-8);
    }

    #[test]
    fn factorization_identity_for_exp_weight() {
        // g = e^z through the evaluator path: |g K_N conj(g) - B_1| shrinks
        // as N grows on |z|,|w| <= 0.5
        let g = HoloWeight::new(|z: Complex64| z.exp()).unwrap();
        let f = |z: Complex64| (2.0 * z.re).exp();
        let defect_at = |n: usize| -> f64 {
            let gk = build_gram_kernel(GramWeight::Evaluator(&f), n, 1e-7).unwrap();
            let mut worst = 0.0f64;
            for i in -2..=2i32 {
                for j in -2..=2i32 {
                    let z = Complex64::new(0.2 * i as f64, 0.15 * j as f64);
                    let w = Complex64::new(0.1 * j as f64, 0.2 * i as f64);
                    let lhs = g.g(z) * gk.eval(z, w) * g.g(w).conj();
                    worst = worst
                        .max((lhs - crate::kernels::disc_kernel(z, w).unwrap()).norm());
                }
            }
            worst
        };
        let d12 = defect_at(12);
        let d24 = defect_at(24);
        assert!(d24 <= 0.5 * d12, "no refinement: {d12} -> {d24}");
        assert!(d24 <= 1e-3, "absolute defect {d24}");
    }
}
