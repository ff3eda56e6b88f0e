//! Moment functions of radial weights: closed-form checks, decay
//! asymptotics, the integration-by-parts ladder, and log-convexity.
//!
//! ```bash
//! cargo run --release -p bergman-lab --example moment_asymptotics
//! ```

use bergman_lab::moments::{
    build_ladder, log_convexity_defect, phi, phi_beta_oracle, phi_log,
    theta_second_derivative_estimate,
};
use bergman_lab::weights::RadialWeight;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let power1 = RadialWeight::make_power(1.0)?;
    let dostanic = RadialWeight::make_dostanic(0.0, 1.0, 1.0)?;

    println!("Phi(x) for (1-r^2)^1 against the Beta closed form:");
    println!("{:>6} {:>22} {:>22}", "x", "quadrature", "beta oracle");
    for x in [0.0, 2.0, 10.0, 35.0] {
        println!(
            "{x:>6} {:>22.15e} {:>22.15e}",
            phi(&power1, x, 1e-12)?,
            phi_beta_oracle(1.0, x)
        );
    }

    println!("\nlog Phi(x) decay for the flat weight exp(-1/(1-r^2)):");
    println!("{:>8} {:>16} {:>16}", "x", "log Phi", "-2 sqrt(x)");
    for x in [16.0, 64.0, 256.0, 1024.0, 4096.0] {
        println!(
            "{x:>8} {:>16.6} {:>16.6}",
            phi_log(&dostanic, x, 1e-12)?,
            -2.0 * x.sqrt()
        );
    }

    println!("\nladder identity Phi(x) (2x+2)...(2x+1+n) = Phi_n(x) at n = 3:");
    let ladder = build_ladder(&dostanic, 3)?;
    println!("  sign onset a_3 = {:.4}", ladder.a_n());
    for x in [5.0, 10.0, 20.0] {
        let mut lhs = phi(&dostanic, x, 1e-12)?;
        for j in 2..=4 {
            lhs *= 2.0 * x + j as f64;
        }
        let rhs = ladder.phi_n(x)?;
        println!(
            "  x = {x:>4}: {lhs:>18.12e} vs {rhs:>18.12e}  (rel defect {:.2e})",
            ((lhs - rhs) / rhs).abs()
        );
    }

    let xs: Vec<f64> = (0..=50).map(f64::from).collect();
    println!(
        "\nlog-convexity defect of Phi on 0..50 (non-positive certifies): {:.3e}",
        log_convexity_defect(&dostanic, &xs)?
    );

    println!("\ncurvature estimate -x^2 theta_n''(x) (expected >= n/2):");
    for n in [2usize, 4] {
        let l = build_ladder(&dostanic, n)?;
        let v = theta_second_derivative_estimate(&l, 200.0)?;
        println!("  n = {n}: {v:.4}  (threshold {})", n as f64 / 2.0);
    }
    Ok(())
}
