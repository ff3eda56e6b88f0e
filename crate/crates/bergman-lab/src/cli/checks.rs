//! The kernel-check and inflate-check batteries.

use std::time::Instant;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::inflation::{
    factorized_hartogs_defect, hartogs_kernel, lifted_projection_defect, make_domain,
    slice_identity_defect_detailed, DomainWeight, HartogsDomain,
};
use crate::kernels::{
    build_gram_kernel, disc_kernel, halfplane_kernel, GramWeight, RadialKernel,
};
use crate::numerics::TruncationPolicy;
use crate::weights::cayley::{inverse_cayley, inverse_cayley_deriv};
use crate::weights::{HoloWeight, RadialWeight};

use super::output::{CheckResult, RunReport};

fn sample_disc(rng: &mut ChaCha8Rng, radius: f64) -> Complex64 {
    let r = radius * rng.gen::<f64>().sqrt();
    let theta = 2.0 * std::f64::consts::PI * rng.gen::<f64>();
    Complex64::from_polar(r, theta)
}

/// Runs the kernel identity battery and appends its checks to the report.
pub fn kernel_checks(report: &mut RunReport, seed: u64) -> Result<()> {
    let policy = TruncationPolicy::default();

    // series kernel vs closed form on |z|,|w| <= 0.8
    let t0 = Instant::now();
    let rk = RadialKernel::new(RadialWeight::make_power(0.0)?);
    let mut worst = 0.0f64;
    for iz in 0..5 {
        for jz in 0..4 {
            for iw in 0..5 {
                for jw in 0..4 {
                    let z = Complex64::from_polar(
                        0.2 * iz as f64,
                        std::f64::consts::FRAC_PI_2 * jz as f64 + 0.3,
                    );
                    let w = Complex64::from_polar(
                        0.2 * iw as f64,
                        std::f64::consts::FRAC_PI_2 * jw as f64 + 0.7,
                    );
                    let s = rk.eval(z, w, &policy)?.value;
                    let c = disc_kernel(z, w)?;
                    worst = worst.max((s - c).norm());
                }
            }
        }
    }
    report.push(CheckResult::timed(
        "b1_series_vs_closed_form",
        t0,
        worst,
        1e-10,
    ));

    // both half-plane transformation formulas at seeded random pairs
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let z = sample_disc(&mut rng, 0.9);
        let w = sample_disc(&mut rng, 0.9);
        let zeta = inverse_cayley(z)?;
        let nu = inverse_cayley(w)?;
        let p1 = halfplane_kernel(zeta, nu)?;
        let recovered = inverse_cayley_deriv(z) * p1 * inverse_cayley_deriv(w).conj();
        worst = worst.max((recovered - disc_kernel(z, w)?).norm());
    }
    report.push(CheckResult::timed(
        "halfplane_transformation_roundtrip",
        t0,
        worst,
        1e-10,
    ));

    // hermitian symmetry across evaluators
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let dostanic = RadialKernel::new(RadialWeight::make_dostanic(0.0, 1.0, 1.0)?);
    let power1 = RadialKernel::new(RadialWeight::make_power(1.0)?);
    let mut worst = 0.0f64;
    let mut min_diag = f64::INFINITY;
    for _ in 0..30 {
        let z = sample_disc(&mut rng, 0.85);
        let w = sample_disc(&mut rng, 0.85);
        let d = (disc_kernel(z, w)? - disc_kernel(w, z)?.conj()).norm();
        worst = worst.max(d);
        for k in [&dostanic, &power1] {
            let a = k.eval(z, w, &policy)?.value;
            let b = k.eval(w, z, &policy)?.value;
            worst = worst.max((a - b.conj()).norm());
            min_diag = min_diag.min(k.eval(z, z, &policy)?.value.re);
        }
        min_diag = min_diag.min(disc_kernel(z, z)?.re);
    }
    report.push(CheckResult::timed("hermitian_symmetry", t0, worst, 1e-10));
    report.push(CheckResult::timed(
        "diagonal_positivity",
        t0,
        (-min_diag).max(0.0),
        0.0,
    ));

    // reproducing property: B_mu reproduces monomials
    let t0 = Instant::now();
    let mut worst = 0.0f64;
    for n in 0u32..=5 {
        for &z in &[Complex64::new(0.4, 0.0), Complex64::new(0.1, 0.45)] {
            let got = power1.project_numeric(|w| w.powu(n), z, &policy)?;
            worst = worst.max((got - z.powu(n)).norm());
        }
    }
    report.push(CheckResult::timed("reproducing_property", t0, worst, 1e-6));

    // factorization (3.3) evidence for g = z-2
    let t0 = Instant::now();
    let g = HoloWeight::linear_shift(2.0)?;
    let defect_at = |n: usize| -> Result<f64> {
        let gk = build_gram_kernel(GramWeight::PolyModulus(g.poly().unwrap()), n, 1e-10)?;
        let mut worst = 0.0f64;
        for iz in -2..=2 {
            for iw in -2..=2 {
                let z = Complex64::new(0.25 * iz as f64, 0.1);
                let w = Complex64::new(0.05, 0.25 * iw as f64);
                let lhs = g.g(z) * gk.eval(z, w) * g.g(w).conj();
                worst = worst.max((lhs - disc_kernel(z, w)?).norm());
            }
        }
        Ok(worst)
    };
    let d12 = defect_at(12)?;
    let d24 = defect_at(24)?;
    report.push(CheckResult::timed("factorization_absolute", t0, d24, 1e-3));
    report.push(CheckResult::timed(
        "factorization_refinement",
        t0,
        if d12 > 0.0 { d24 / d12 } else { 0.0 },
        0.5,
    ));
    Ok(())
}

/// Runs the inflation identity battery for one domain.
pub fn inflate_checks(
    report: &mut RunReport,
    domain: &HartogsDomain,
    points: &[Complex64],
    policy: &TruncationPolicy,
    seed: u64,
) -> Result<()> {
    // bidisc oracle (independent of the requested mu)
    let t0 = Instant::now();
    let bidisc = make_domain(DomainWeight::Radial(RadialWeight::make_power(0.0)?));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let z = sample_disc(&mut rng, 0.7);
        let w = sample_disc(&mut rng, 0.7);
        let t = sample_disc(&mut rng, 0.7);
        let s = sample_disc(&mut rng, 0.7);
        let ev = hartogs_kernel(&bidisc, (z, w), (t, s), policy)?;
        let exact = disc_kernel(z, t)? * disc_kernel(w, s)?;
        worst = worst.max((ev.value - exact).norm());
    }
    report.push(CheckResult::timed("bidisc_product_kernel", t0, worst, 1e-9));

    // slice identity at the requested points (consecutive pairs)
    let t0 = Instant::now();
    let mut worst_ratio = 0.0f64;
    for pair in points.chunks(2) {
        let z = pair[0];
        let t = *pair.get(1).unwrap_or(&Complex64::new(0.1, 0.0));
        let rep = slice_identity_defect_detailed(domain, z, t, policy)?;
        worst_ratio = worst_ratio.max(rep.defect / rep.budget);
    }
    report.push(CheckResult::timed(
        "slice_identity_within_tail_budget",
        t0,
        worst_ratio,
        1.0,
    ));

    // lifted projection for f = 1, z^2 zbar, z^4 zbar^2
    let t0 = Instant::now();
    let z0 = points[0];
    let d = lifted_projection_defect(domain, 0, 0, z0, policy)?;
    report.push(CheckResult::timed("lifted_projection_constant", t0, d, 1e-8));
    let t0 = Instant::now();
    let d = lifted_projection_defect(domain, 2, 1, z0, policy)?;
    report.push(CheckResult::timed("lifted_projection_z2zb", t0, d, 1e-5));
    let t0 = Instant::now();
    let d = lifted_projection_defect(domain, 4, 2, z0, policy)?;
    report.push(CheckResult::timed("lifted_projection_z4zb2", t0, d, 1e-5));

    // hermitian symmetry and diagonal positivity of B_Omega
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xb1d);
    let mut worst = 0.0f64;
    let mut min_diag = f64::INFINITY;
    for _ in 0..6 {
        let z = sample_disc(&mut rng, 0.5);
        let t = sample_disc(&mut rng, 0.5);
        let wr = 0.5 * domain.mu_eval(z).sqrt();
        let sr = 0.5 * domain.mu_eval(t).sqrt();
        let w = Complex64::new(wr, 0.0);
        let s = Complex64::new(0.0, sr);
        let a = hartogs_kernel(domain, (z, w), (t, s), policy)?.value;
        let b = hartogs_kernel(domain, (t, s), (z, w), policy)?.value;
        worst = worst.max((a - b.conj()).norm());
        min_diag = min_diag.min(hartogs_kernel(domain, (z, w), (z, w), policy)?.value.re);
    }
    report.push(CheckResult::timed("hartogs_hermitian_symmetry", t0, worst, 1e-9));
    report.push(CheckResult::timed(
        "hartogs_diagonal_positivity",
        t0,
        (-min_diag).max(0.0),
        0.0,
    ));

    // factorized form for g = z-2 (finite-rank evidence)
    let t0 = Instant::now();
    let g = HoloWeight::linear_shift(2.0)?;
    let zw = (Complex64::new(0.3, 0.1), Complex64::new(0.3, 0.0));
    let ts = (Complex64::new(0.35, -0.05), Complex64::new(0.3, 0.0));
    let d16 = factorized_hartogs_defect(&g, zw, ts, 16)?;
    let d24 = factorized_hartogs_defect(&g, zw, ts, 24)?;
    report.push(CheckResult::timed("factorized_hartogs_absolute", t0, d16, 1e-3));
    report.push(CheckResult::timed(
        "factorized_hartogs_refinement",
        t0,
        if d16 > 0.0 { d24 / d16 } else { 0.0 },
        0.5,
    ));
    Ok(())
}
