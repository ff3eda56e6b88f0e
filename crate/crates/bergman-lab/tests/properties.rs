//! Property tests for the module invariants.

use num_complex::Complex64;
use proptest::prelude::*;

use bergman_lab::kernels::disc_kernel;
use bergman_lab::moments::phi_log;
use bergman_lab::numerics::{
    integrate_half_disc, integrate_unit_interval, sum_series, Disc, TruncationPolicy,
};
use bergman_lab::projector::log_ratio;
use bergman_lab::weights::cayley::{cayley, inverse_cayley};
use bergman_lab::weights::RadialWeight;

fn eval_poly(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    /// Linearity: integrate(a f + b g) = a integrate(f) + b integrate(g)
    /// within 10 tol on random polynomial pairs.
    #[test]
    fn quadrature_linearity(
        f in prop::collection::vec(-3.0f64..3.0, 1..6),
        g in prop::collection::vec(-3.0f64..3.0, 1..6),
        a in -2.0f64..2.0,
        b in -2.0f64..2.0,
    ) {
        let tol = 1e-11;
        let fi = integrate_unit_interval(|x| eval_poly(&f, x), tol).unwrap().value;
        let gi = integrate_unit_interval(|x| eval_poly(&g, x), tol).unwrap().value;
        let combined = integrate_unit_interval(
            |x| a * eval_poly(&f, x) + b * eval_poly(&g, x),
            tol,
        )
        .unwrap()
        .value;
        prop_assert!((combined - (a * fi + b * gi)).abs() <= 10.0 * tol);
    }

    /// Half-disc radial symmetry: for f depending only on |zeta|,
    /// the integral over D(0,R) equals pi int_0^R f(r) r dr.
    #[test]
    fn half_disc_radial_reduction(a in -1.5f64..2.0, radius in 0.5f64..2.0) {
        let d = Disc { x0: 0.0, radius };
        let q = integrate_half_disc(|z| z.norm().powf(a), &d, 1e-8).unwrap();
        let exact = std::f64::consts::PI * radius.powf(a + 2.0) / (a + 2.0);
        prop_assert!(
            (q.value - exact).abs() <= 1e-6 * exact.abs().max(1.0),
            "a={a} R={radius}: {} vs {exact}", q.value
        );
    }

    /// Cayley round trips on random interior points.
    #[test]
    fn cayley_round_trip(r in 0.0f64..0.995, theta in 0.0f64..std::f64::consts::TAU) {
        let z = Complex64::from_polar(r, theta);
        let zeta = inverse_cayley(z).unwrap();
        prop_assert!(zeta.im > 0.0);
        let back = cayley(zeta).unwrap();
        prop_assert!((back - z).norm() <= 1e-12);
    }

    /// Phi is strictly decreasing in x.
    #[test]
    fn phi_monotone(x in 0.0f64..60.0, gap in 0.25f64..10.0) {
        let w = RadialWeight::make_dostanic(0.0, 1.0, 1.0).unwrap();
        let a = phi_log(&w, x, 1e-12).unwrap();
        let b = phi_log(&w, x + gap, 1e-12).unwrap();
        prop_assert!(b < a);
    }

    /// Geometric kernel series against the closed form.
    #[test]
    fn geometric_series_closed_form(q in 0.0f64..0.9) {
        let policy = TruncationPolicy { max_terms: 2000, tail_tol: 1e-14, consecutive_small: 3 };
        let (v, _) = sum_series(
            |m| Complex64::new((m as f64 + 1.0) * q.powi(m as i32), 0.0),
            &policy,
        )
        .unwrap();
        let closed = (1.0 - q).powi(-2);
        prop_assert!((v.re - closed).abs() <= 1e-10 * closed);
    }

    /// Hermitian symmetry of the closed-form kernel at random pairs.
    #[test]
    fn kernel_hermitian(
        rz in 0.0f64..0.9, tz in 0.0f64..std::f64::consts::TAU,
        rw in 0.0f64..0.9, tw in 0.0f64..std::f64::consts::TAU,
    ) {
        let z = Complex64::from_polar(rz, tz);
        let w = Complex64::from_polar(rw, tw);
        let a = disc_kernel(z, w).unwrap();
        let b = disc_kernel(w, z).unwrap();
        prop_assert!((a - b.conj()).norm() <= 1e-12 * a.norm().max(1.0));
    }

    /// Scale invariance of the blow-up ratio: R is unchanged when the
    /// weight is multiplied by a positive constant.
    #[test]
    fn ratio_scale_invariance(scale in 0.1f64..10.0, m in 1usize..40) {
        let base = RadialWeight::make_dostanic(0.0, 1.0, 1.0).unwrap();
        let scaled = RadialWeight::make_custom(move |r| {
            let u = 1.0 - r * r;
            if u <= 0.0 { 0.0 } else { scale * (-1.0 / u).exp() }
        })
        .unwrap();
        let a = log_ratio(&base, 1.5, 8, m).unwrap();
        let b = log_ratio(&scaled, 1.5, 8, m).unwrap();
        prop_assert!((a - b).abs() <= 1e-10 * a.abs().max(1.0), "m={m}: {a} vs {b}");
    }
}
