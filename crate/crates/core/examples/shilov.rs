//! Shilov-boundary constants for diagonal and Jordan fields.

use germlin::hopf::{jordan_deform, shilov_constant, Factor, Fields, PieceGeometry};
use germlin::{Coeff, ExactComplex};
use num_complex::Complex64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let piece = PieceGeometry {
        factors: vec![
            Factor::Annulus { inner: 0.88, outer: 1.12 },
            Factor::Disc { radius: 1.5 },
        ],
    };
    println!("diagonal: C = {}", shilov_constant(&piece, &Fields::Diagonal)?);
    println!("jordan:   C = {}", shilov_constant(&piece, &Fields::Jordan(Complex64::new(0.5, 0.0)))?);

    let m = vec![
        vec![ExactComplex::from_ratio(1, 2), ExactComplex::one()],
        vec![ExactComplex::zero(), ExactComplex::from_ratio(1, 2)],
    ];
    for t in [1, 0] {
        let d = jordan_deform(&m, &ExactComplex::from_i64(t));
        println!("t = {t}: superdiagonal {:?}", d[0][1].re_im_strings());
    }
    Ok(())
}
