//! Hartogs domains `{|w|^2 < mu(z)}` in C^2 and the inflation kernel
//! series: the bidisc product formula, the slice identity
//! `pi B_Omega[(z,0),(t,0)] = B_mu(z,t)`, the lifted projection identity,
//! and the factorized kernel for modulus-squared weights.
//!
//! ```bash
//! cargo run --release -p bergman-lab --example hartogs_inflation
//! ```

use num_complex::Complex64;

use bergman_lab::inflation::{
    bounded_transport_domain, factorized_hartogs_defect, hartogs_kernel,
    lifted_projection_defect, make_domain, slice_identity_defect_detailed, DomainWeight,
};
use bergman_lab::kernels::disc_kernel;
use bergman_lab::numerics::TruncationPolicy;
use bergman_lab::weights::{HoloWeight, RadialWeight};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let policy = TruncationPolicy {
        max_terms: 400,
        tail_tol: 1e-12,
        consecutive_small: 3,
    };
    let c = Complex64::new;

    // the bidisc: mu = 1 makes the kernel the product of two disc kernels
    let bidisc = make_domain(DomainWeight::Radial(RadialWeight::make_power(0.0)?));
    let (z, w, t, s) = (c(0.3, 0.0), c(0.4, 0.1), c(0.2, -0.1), c(0.3, 0.2));
    let ev = hartogs_kernel(&bidisc, (z, w), (t, s), &policy)?;
    let product = disc_kernel(z, t)? * disc_kernel(w, s)?;
    println!("bidisc kernel: series {:.10}", ev.value);
    println!("       product of disc kernels {product:.10}");

    // domains over the flat weight and over |z-1|^{4/3}
    let flat_domain = make_domain(DomainWeight::Radial(RadialWeight::make_dostanic(
        0.0, 1.0, 1.0,
    )?));
    println!(
        "\nmembership in the flat-weight domain: (0, 0.6) -> {}, (0, 0.61) -> {}",
        flat_domain.contains(c(0.0, 0.0), c(0.6, 0.0)),
        flat_domain.contains(c(0.0, 0.0), c(0.61, 0.0)),
    );
    let bounded = bounded_transport_domain(5.0)?;
    println!(
        "membership over |z-1|^{{4/3}}: (0.9, 0.2) -> {}, (0.9, 0.25) -> {}",
        bounded.contains(c(0.9, 0.0), c(0.2, 0.0)),
        bounded.contains(c(0.9, 0.0), c(0.25, 0.0)),
    );

    println!("\nslice identity pi B_Omega[(z,0),(t,0)] = B_mu(z,t):");
    for (dom, name) in [
        (&bidisc, "mu = 1"),
        (&flat_domain, "mu = exp(-1/(1-r^2))"),
    ] {
        let rep = slice_identity_defect_detailed(dom, c(0.3, 0.0), c(0.1, 0.05), &policy)?;
        println!(
            "  {name:<22} defect {:.3e} (tail budget {:.3e})",
            rep.defect, rep.budget
        );
    }

    println!("\nlifted projection B_Omega F(z,0) = B_mu f(z) for f = z^4 zbar^2:");
    let d = lifted_projection_defect(&flat_domain, 4, 2, c(0.3, 0.0), &policy)?;
    println!("  defect {d:.3e}");

    println!("\nfactorized kernel for omega = |z-2|^2:");
    let g = HoloWeight::linear_shift(2.0)?;
    for n in [16usize, 24] {
        let d = factorized_hartogs_defect(&g, (c(0.3, 0.1), c(0.3, 0.0)), (c(0.35, -0.05), c(0.3, 0.0)), n)?;
        println!("  rank N = {n:>2}: defect {d:.3e}");
    }
    Ok(())
}
