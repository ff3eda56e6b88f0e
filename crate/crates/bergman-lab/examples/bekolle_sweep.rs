//! Bekolle-Bonami A_p^+ sweeps on the upper half-plane for the weights
//! |F|^{2-p} built from F(zeta) = zeta^{2/(p0-2)}: the quantity stays
//! uniformly bounded inside the boundedness window and diverges on
//! origin-centered discs outside it.
//!
//! ```bash
//! cargo run --release -p bergman-lab --example bekolle_sweep
//! ```

use bergman_lab::bekolle::{ap_quantity, ap_sweep, case_classifier, ApValue, DiscFamily};
use bergman_lab::numerics::Disc;
use bergman_lab::weights::zeta_power_f;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let family = zeta_power_f(5.0)?;

    println!("p = 3 (inside the window (5/4, 5)): |F|^{{2-p}} = |zeta|^{{-2/3}}");
    let mu = family.ap_weight(3.0);
    let d01 = Disc { x0: 0.0, radius: 1.0 };
    let q = ap_quantity(&mu, 3.0, &d01, 1e-7)?;
    println!(
        "  D(0,1): quantity = {:?}   (closed form 216/196 = {:.10})",
        q,
        216.0 / 196.0
    );

    let report = ap_sweep(&mu, 3.0, &DiscFamily { depth: 6 }, 1e-5)?;
    println!(
        "  sweep over {} discs: supremum = {:?} at {:?}",
        report.per_disc.len(),
        report.supremum,
        report.argmax
    );
    println!("  sample rows (x0, R, case, quantity):");
    for row in report.per_disc.iter().step_by(53).take(6) {
        println!(
            "    {:>10.4} {:>10.4} {:?} {:?}",
            row.disc.x0, row.disc.radius, row.case, row.value
        );
    }

    println!("\np = 5 (the boundary exponent): |F|^{{2-p}} = |zeta|^{{-2}}");
    let mu5 = family.ap_weight(5.0);
    for (x0, radius) in [(0.0, 1.0), (0.5, 1.0), (8.0, 1.0)] {
        let d = Disc { x0, radius };
        let v = ap_quantity(&mu5, 5.0, &d, 1e-6)?;
        println!(
            "  D({x0},{radius}) [{:?}]: {}",
            case_classifier(&d),
            match v {
                ApValue::Finite(q) => format!("finite, quantity {q:.4}"),
                ApValue::Divergent => "divergent".into(),
            }
        );
    }
    Ok(())
}
