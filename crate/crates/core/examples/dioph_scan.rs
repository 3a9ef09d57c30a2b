//! Small-divisor scan for an irrational rotation against a contraction.

use std::f64::consts::PI;

use germlin::small_divisors::{diophantine_scan, ScanMode};
use germlin::toroidal::DeckLinearData;
use num_complex::Complex64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let lam = Complex64::from_polar(1.0, 2.0 * PI * 2f64.sqrt());
    let decks = DeckLinearData::new(vec![vec![lam]], vec![vec![Complex64::new(0.5, 0.0)]])?;
    let rep = diophantine_scan(&decks, 30, ScanMode::Vertical)?;
    println!("{} points, min divisor {:e}", rep.points, rep.min_divisor);
    println!("D = {:?}, tau = {:?}, passed = {}", rep.d, rep.tau, rep.passed());

    let resonant = DeckLinearData::new(
        vec![vec![Complex64::new(0.6, 0.8)]],
        vec![vec![Complex64::new(0.6, -0.8)]],
    )?;
    let rep = diophantine_scan(&resonant, 6, ScanMode::Vertical)?;
    if let Some(w) = rep.resonances.first() {
        println!("resonance: {w:?}");
    }
    Ok(())
}
