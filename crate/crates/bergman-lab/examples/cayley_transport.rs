//! The Cayley transform between the upper half-plane and the disc, the
//! kernel transformation formulas, and the transport of half-plane weights
//! to disc weights: one family transports to the bounded |z-1|^{4/3},
//! another to a weight blowing up at z = -1.
//!
//! ```bash
//! cargo run --release -p bergman-lab --example cayley_transport
//! ```

use num_complex::Complex64;

use bergman_lab::kernels::{disc_kernel, halfplane_kernel};
use bergman_lab::weights::cayley::{cayley, inverse_cayley, inverse_cayley_deriv, transport_weight};
use bergman_lab::weights::{remark_f, zeta_power_f};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let i = Complex64::new(0.0, 1.0);
    println!("phi(i) = {}", cayley(i)?);
    println!("psi(0) = {}", inverse_cayley(Complex64::new(0.0, 0.0))?);
    println!("P_1(i,i) = {} (= 1/(4 pi))", halfplane_kernel(i, i)?);

    println!("\nkernel transformation round trip at a few pairs:");
    for (z, w) in [
        (Complex64::new(0.3, 0.2), Complex64::new(-0.1, 0.4)),
        (Complex64::new(-0.6, 0.1), Complex64::new(0.2, -0.5)),
    ] {
        let recovered = inverse_cayley_deriv(z)
            * halfplane_kernel(inverse_cayley(z)?, inverse_cayley(w)?)?
            * inverse_cayley_deriv(w).conj();
        let direct = disc_kernel(z, w)?;
        println!(
            "  B_1({z:.2},{w:.2}): defect {:.3e}",
            (recovered - direct).norm()
        );
    }

    println!("\nbounded transport: omega(z) = |z-1|^{{4/3}}");
    let bounded = transport_weight(&remark_f(5.0)?)?;
    for re in [0.0, 0.5, -0.5] {
        let z = Complex64::new(re, 0.2);
        println!(
            "  omega({z:.2}) = {:.10}   closed form {:.10}",
            bounded.weight(z),
            (z - 1.0).norm().powf(4.0 / 3.0)
        );
    }

    println!("\nunbounded transport from F(zeta) = zeta^{{2/3}} (blows up at z = -1):");
    let unbounded = transport_weight(&zeta_power_f(5.0)?)?;
    for j in 1..=5 {
        let z = Complex64::new(-1.0 + 10f64.powi(-j), 0.0);
        println!("  omega(-1 + 1e-{j}) = {:.4e}", unbounded.weight(z));
    }
    Ok(())
}
