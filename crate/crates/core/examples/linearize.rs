//! Recover a hidden conjugacy from generated commuting decks.

use germlin::linearizer::{conjugacy_residual, full_linearize, generate_commuting_decks, GeneratorSpec};
use germlin::small_divisors::{diophantine_scan, Direction, ScanMode};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = generate_commuting_decks(7, &GeneratorSpec::new(1, 1, 1, 5))?;
    let rep = diophantine_scan(&g.pert.decks, 7, ScanMode::Full)?;
    let res = full_linearize(&g.pert, &rep, Direction::Forward)?;
    let residual = conjugacy_residual(&g.pert, &res.phi, ScanMode::Full)?;
    println!("residual per degree: {residual:?}");
    println!("matches hidden phi: {}", Some(&res.phi) == g.phi0.as_ref());
    for (i, s) in res.phi.iter().enumerate() {
        println!("phi[{i}]: {} terms", s.len());
    }
    Ok(())
}
