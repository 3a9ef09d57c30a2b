//! Sparse Laurent-Taylor arithmetic with exact coefficients.

use germlin::series::{cauchy_bound_check, GridSpec};
use germlin::{Coeff, ExactComplex, Series, Trunc};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let trunc = Trunc::new(3, 4);
    let h = Series::<ExactComplex>::h_coord(1, 1, trunc, 0)?;
    let v = Series::v_coord(1, 1, trunc, 0);
    let half = Series::constant(1, 1, trunc, ExactComplex::from_ratio(1, 2));

    // (h + 1/2 v)^2, truncated at |P| <= 3 and deg Q <= 4
    let f = h.add(&half.mul(&v)?)?;
    let sq = f.mul(&f)?;
    for (k, c) in sq.terms() {
        let (re, im) = c.re_im_strings();
        println!("h^{:?} v^{:?}: {re} + {im}i", k.p, k.q);
    }

    let grid = GridSpec::uniform(1, &[1.0], 1, 0.5, 32);
    let rep = cauchy_bound_check(&sq, &grid, 1e-9)?;
    println!("sup = {:.6}, worst Cauchy ratio = {:.6}", rep.sup_norm, rep.worst_ratio);
    Ok(())
}
