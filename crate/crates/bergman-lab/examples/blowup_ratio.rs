//! The projection blow-up experiment: the ratio
//! `R_k(m) = ||B(z^{km} zbar^m)||_p^p / ||z^{km} zbar^m||_p^p`
//! diverges along m for the flat weight at p != 2 but stays bounded for
//! power weights and at p = 2.
//!
//! ```bash
//! cargo run --release -p bergman-lab --example blowup_ratio
//! ```

use bergman_lab::projector::{min_k, ratio, ratio_sweep};
use bergman_lab::weights::RadialWeight;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dostanic = RadialWeight::make_dostanic(0.0, 1.0, 1.0)?;
    let power3 = RadialWeight::make_power(3.0)?;

    let p = 1.5;
    let k = min_k(p)?;
    println!("p = {p}, smallest admissible k = {k}\n");

    let grid: Vec<usize> = (0..=14).map(|j| 1usize << j).collect();
    let flat = ratio_sweep(&dostanic, p, k, &grid);
    let tame = ratio_sweep(&power3, p, k, &grid);

    println!(
        "{:>8} {:>18} {:>14}",
        "m", "R (flat weight)", "R (power t=3)"
    );
    for (a, b) in flat.points.iter().zip(&tame.points) {
        println!("{:>8} {:>18.6} {:>14.6}", a.m, a.r, b.r);
    }
    println!(
        "\nflat weight: R(2^14)/R(16) = {:.1}; power weight spread = {:.4}",
        flat.points.last().unwrap().r / flat.points[4].r,
        tame.points.iter().map(|p| p.r).fold(0.0, f64::max)
            / tame.points.iter().map(|p| p.r).fold(f64::INFINITY, f64::min)
    );

    println!("\nat p = 2 every ratio obeys the Hoelder bound R <= 1:");
    for (w, name) in [(&dostanic, "flat"), (&power3, "power t=3")] {
        let worst = (1..=5)
            .flat_map(|k| (1..=8).map(move |m| (k, m)))
            .map(|(k, m)| ratio(w, 2.0, k, m).unwrap())
            .fold(0.0, f64::max);
        println!("  {name:<10} max R = {worst:.9}");
    }
    Ok(())
}
