//! Majorant certificate for a small vertical perturbation.

use germlin::linearizer::{
    certify_domination, eta_sequence, fit_constants, generate_commuting_decks, majorant_functional_solve,
    vertical_linearize, DominationLadder, GeneratorSpec, PhiShape,
};
use germlin::series::GridSpec;
use germlin::small_divisors::{diophantine_scan, Direction, ScanMode};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut spec = GeneratorSpec::new(1, 1, 1, 6);
    spec.amplitude = (1, 1000);
    spec.shape = PhiShape::Vertical;
    let g = generate_commuting_decks(5, &spec)?;
    let rep = diophantine_scan(&g.pert.decks, 8, ScanMode::Vertical)?;
    let res = vertical_linearize(&g.pert, &rep, Direction::Forward)?;

    let ladder = DominationLadder::new(0.5, 0.2);
    let th = ladder.theta1;
    let grid = GridSpec::uniform(1, &[(-th).exp(), 1.0, th.exp()], 1, ladder.r1, ladder.angles);
    let consts = fit_constants(&g.pert, &rep, ScanMode::Vertical, &grid, ladder.kappa)?;
    let eta = eta_sequence(consts.c1, ladder.eps1, consts.tau, consts.nu, 40)?;
    println!("eta grows super-geometrically: {}", eta.growth_holds());

    let cert = majorant_functional_solve(ScanMode::Vertical, &consts, 6)?;
    println!("A = {:?}", cert.a);
    let dom = certify_domination(&res.phi, &g.pert.decks, &cert, &ladder)?;
    println!("domination: pass = {}, first failure = {:?}", dom.pass, dom.first_failure);
    Ok(())
}
