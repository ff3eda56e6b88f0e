//! Weighted Bergman kernels: the radial series against the closed form,
//! finite-rank Gram kernels for non-radial weights, and the |g|^2
//! factorization identities between kernels and between projections.
//!
//! ```bash
//! cargo run --release -p bergman-lab --example kernel_identities
//! ```

use num_complex::Complex64;

use bergman_lab::kernels::{
    build_gram_kernel, disc_kernel, operator_relation_check, GramWeight, MonomialPoly,
    RadialKernel,
};
use bergman_lab::numerics::TruncationPolicy;
use bergman_lab::weights::{HoloWeight, RadialWeight};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let policy = TruncationPolicy::default();

    let z = Complex64::new(0.3, 0.1);
    let w = Complex64::new(0.4, -0.2);
    let series = RadialKernel::new(RadialWeight::make_power(0.0)?).eval(z, w, &policy)?;
    println!(
        "unweighted kernel at ({z:.2},{w:.2}): series {:.12} ({} terms, tail <= {:.1e})",
        series.value, series.terms_used, series.tail_bound
    );
    println!("                         closed form {:.12}", disc_kernel(z, w)?);

    let flat = RadialKernel::new(RadialWeight::make_dostanic(0.0, 1.0, 1.0)?);
    let diag = flat.eval(Complex64::new(0.5, 0.0), Complex64::new(0.5, 0.0), &policy)?;
    println!(
        "\nflat-weight kernel on the diagonal B(0.5,0.5) = {:.6} ({} terms)",
        diag.value.re, diag.terms_used
    );

    println!("\nfactorization g(z) B_omega(z,w) conj(g(w)) = B_1(z,w) for g = z-2:");
    let g = HoloWeight::linear_shift(2.0)?;
    for n in [8usize, 16, 24] {
        let gk = build_gram_kernel(GramWeight::PolyModulus(g.poly().unwrap()), n, 1e-10)?;
        let lhs = g.g(z) * gk.eval(z, w) * g.g(w).conj();
        println!(
            "  rank N = {n:>2}: defect {:.3e}",
            (lhs - disc_kernel(z, w)?).norm()
        );
    }

    println!("\noperator relation g (B_omega f) = B_1(f g) for f = z zbar:");
    let f = MonomialPoly::monomial(1, 1);
    let pts: Vec<Complex64> = (0..6)
        .map(|j| Complex64::from_polar(0.45, 1.0 + j as f64))
        .collect();
    for n in [12usize, 20] {
        println!(
            "  rank N = {n:>2}: max defect {:.3e}",
            operator_relation_check(&g, &f, &pts, n)?
        );
    }

    println!("\nprojection of monomials under the flat weight:");
    let (coef, degree) = bergman_lab::projector::project_monomial(
        &RadialWeight::make_dostanic(0.0, 1.0, 1.0)?,
        16,
        2,
    )?;
    println!("  B(z^16 zbar^2) = {coef:.6e} z^{degree}");
    Ok(())
}
