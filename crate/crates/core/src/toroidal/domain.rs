use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{realify, shear_to_standard, solve_real, Result, ToroidalError, ToroidalSpec};

/// `Omega_{eps,R}` parameters plus the radius table `R -> r(R)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainSpec {
    pub epsilon: f64,
    pub rcap: f64,
    /// Pairs `(R, r(R))` sorted by increasing `R`.
    pub r_table: Vec<(f64, f64)>,
}

impl DomainSpec {
    pub fn new(epsilon: f64, rcap: f64, r_table: Vec<(f64, f64)>) -> Result<Self> {
        let d = DomainSpec { epsilon, rcap, r_table };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0) || !(self.rcap > 0.0) {
            return Err(ToroidalError::Domain("epsilon and R must be positive".into()));
        }
        if self.r_table.iter().any(|&(big, r)| !(big > 0.0) || !(r > 0.0)) {
            return Err(ToroidalError::Domain("r table entries must be positive".into()));
        }
        for w in self.r_table.windows(2) {
            if w[1].0 <= w[0].0 || w[1].1 > w[0].1 {
                return Err(ToroidalError::Domain("r table must be increasing in R and nonincreasing in r".into()));
            }
        }
        Ok(())
    }

    /// `r(R)` read from the table (first entry with key at least `big_r`).
    pub fn r_of(&self, big_r: f64) -> Option<f64> {
        self.r_table.iter().find(|(k, _)| *k >= big_r).map(|&(_, r)| r)
    }
}

/// Real coordinates `w` of a point of `(C^*)^N` in the standard basis, with
/// the angular coordinates `w_1..w_N` reduced into `[0, 1)`.
pub fn standard_real_coords(point: &[Complex64], spec: &ToroidalSpec) -> Result<Vec<f64>> {
    let basis = shear_to_standard(spec)?;
    let nn = spec.big_n();
    if point.len() != nn {
        return Err(ToroidalError::Dimensions(format!("point needs {nn} coordinates")));
    }
    if point.iter().any(|z| z.norm() == 0.0) {
        return Err(ToroidalError::Argument("point coordinates must be nonzero".into()));
    }
    // frak z = log(z) / (2 pi i) = (arg z - i ln|z|) / (2 pi)
    let frak: Vec<Complex64> = point
        .iter()
        .map(|z| Complex64::new(z.arg(), -z.norm().ln()) / (2.0 * PI))
        .collect();
    let rhs: Vec<f64> = frak.iter().map(|z| z.re).chain(frak.iter().map(|z| z.im)).collect();
    let mat = realify(&basis.gamma_std);
    let mut w = solve_real(&mat, &rhs).ok_or(ToroidalError::Dependent)?;
    for x in w.iter_mut().take(nn) {
        *x = x.rem_euclid(1.0);
        if *x >= 1.0 {
            *x = 0.0;
        }
    }
    Ok(w)
}

/// Membership in `Omega_{eps,R}`.
pub fn domain_membership(point: &[Complex64], spec: &ToroidalSpec, dom: &DomainSpec) -> Result<bool> {
    dom.validate()?;
    let w = standard_real_coords(point, spec)?;
    let (nn, q) = (spec.big_n(), spec.q);
    let eps = dom.epsilon;
    let slab_ok = w[nn..nn + q].iter().all(|&x| x > -eps && x < 1.0 + eps);
    let box_ok = w[nn + q..].iter().all(|&x| x > -dom.rcap && x < dom.rcap);
    Ok(slab_ok && box_ok)
}

/// Point of `(C^*)^N` with real standard coordinates `w`.
pub fn point_from_coords(w: &[f64], spec: &ToroidalSpec) -> Result<Vec<Complex64>> {
    let basis = shear_to_standard(spec)?;
    let nn = spec.big_n();
    let mut frak = vec![Complex64::new(0.0, 0.0); nn];
    for (wk, col) in w.iter().zip(&basis.gamma_std) {
        for (f, g) in frak.iter_mut().zip(col) {
            *f += g * wk;
        }
    }
    Ok(frak
        .iter()
        .map(|z| (Complex64::new(0.0, 2.0 * PI) * z).exp())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toroidal::tests::sample_torus;

    #[test]
    fn origin_is_inside() {
        let s = sample_torus(0.3, 0.7);
        let dom = DomainSpec::new(0.1, 2.0, vec![(2.0, 0.5)]).unwrap();
        let one = vec![Complex64::new(1.0, 0.0); 2];
        assert!(domain_membership(&one, &s, &dom).unwrap());
    }

    #[test]
    fn outside_slab() {
        let s = sample_torus(0.3, 0.7);
        let dom = DomainSpec::new(0.1, 2.0, vec![]).unwrap();
        let p = point_from_coords(&[0.2, 0.4, 1.2, 0.0], &s).unwrap();
        assert!(!domain_membership(&p, &s, &dom).unwrap());
        let p = point_from_coords(&[0.2, 0.4, 1.05, 0.0], &s).unwrap();
        assert!(domain_membership(&p, &s, &dom).unwrap());
    }

    #[test]
    fn coordinates_round_trip() {
        let s = sample_torus(0.3, 0.7);
        let w = [0.25, 0.5, 0.75, -1.5];
        let p = point_from_coords(&w, &s).unwrap();
        let back = standard_real_coords(&p, &s).unwrap();
        for (a, b) in w.iter().zip(&back) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn table_validation() {
        assert!(DomainSpec::new(0.1, 1.0, vec![(1.0, 0.5), (2.0, 0.6)]).is_err());
        let d = DomainSpec::new(0.1, 1.0, vec![(1.0, 0.5), (2.0, 0.25)]).unwrap();
        assert_eq!(d.r_of(1.5), Some(0.25));
        assert!(DomainSpec::new(0.0, 1.0, vec![]).is_err());
    }
}
