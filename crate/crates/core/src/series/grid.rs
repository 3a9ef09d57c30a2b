use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Result, Series, SeriesError};
use crate::scalar::Coeff;

/// Sample points on a product of circles.
///
/// Each `h_i` is sampled on every radius in `h_radii[i]` times `h_angles`
/// equally spaced angles; each `v_j` on the single circle `|v_j| =
/// v_radii[j]` with `v_angles` angles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub h_radii: Vec<Vec<f64>>,
    pub v_radii: Vec<f64>,
    pub h_angles: usize,
    pub v_angles: usize,
}

impl GridSpec {
    pub fn uniform(n_h: usize, h_radii: &[f64], n_v: usize, v_radius: f64, angles: usize) -> Self {
        GridSpec {
            h_radii: vec![h_radii.to_vec(); n_h],
            v_radii: vec![v_radius; n_v],
            h_angles: angles,
            v_angles: angles,
        }
    }

    pub fn validate(&self, n_h: usize, n_v: usize) -> Result<()> {
        if self.h_radii.len() != n_h || self.v_radii.len() != n_v {
            return Err(SeriesError::InvalidGrid(format!(
                "grid has {} h and {} v coordinates, series has {n_h} and {n_v}",
                self.h_radii.len(),
                self.v_radii.len()
            )));
        }
        if self.h_radii.iter().any(|r| r.is_empty()) {
            return Err(SeriesError::InvalidGrid("empty radius list".into()));
        }
        let bad_radius = self
            .h_radii
            .iter()
            .flatten()
            .chain(&self.v_radii)
            .any(|&r| !(r > 0.0 && r.is_finite()));
        if bad_radius {
            return Err(SeriesError::InvalidGrid("radii must be positive".into()));
        }
        if (n_h > 0 && self.h_angles < 4) || (n_v > 0 && self.v_angles < 4) {
            return Err(SeriesError::InvalidGrid("at least 4 angular samples required".into()));
        }
        Ok(())
    }

    fn h_points(&self) -> Vec<Vec<Complex64>> {
        let per_coord: Vec<Vec<Complex64>> = self
            .h_radii
            .iter()
            .map(|radii| {
                radii
                    .iter()
                    .flat_map(|&r| circle(r, self.h_angles))
                    .collect()
            })
            .collect();
        cartesian(&per_coord)
    }

    fn v_points(&self) -> Vec<Vec<Complex64>> {
        let per_coord: Vec<Vec<Complex64>> = self
            .v_radii
            .iter()
            .map(|&r| circle(r, self.v_angles))
            .collect();
        cartesian(&per_coord)
    }
}

fn circle(r: f64, k: usize) -> Vec<Complex64> {
    (0..k)
        .map(|a| Complex64::from_polar(r, 2.0 * PI * a as f64 / k as f64))
        .collect()
}

fn cartesian(sets: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let mut out = vec![Vec::new()];
    for set in sets {
        let mut next = Vec::with_capacity(out.len() * set.len());
        for prefix in &out {
            for z in set {
                let mut p = prefix.clone();
                p.push(*z);
                next.push(p);
            }
        }
        out = next;
    }
    out
}

fn pow_prod<'a>(z: &[Complex64], e: impl Iterator<Item = &'a i64>) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    for (zi, &ei) in z.iter().zip(e) {
        if ei != 0 {
            acc *= zi.powi(ei as i32);
        }
    }
    acc
}

/// Q-slices `f_Q(h)` as float data.
fn slices<C: Coeff>(f: &Series<C>) -> BTreeMap<Vec<u32>, Vec<(Vec<i64>, Complex64)>> {
    let mut out: BTreeMap<Vec<u32>, Vec<(Vec<i64>, Complex64)>> = BTreeMap::new();
    for (k, c) in f.terms() {
        out.entry(k.q.clone())
            .or_default()
            .push((k.p.iter().map(|&x| x as i64).collect(), c.to_c64()));
    }
    out
}

/// Per h-sample values of every Q-slice.
fn slice_values(sl: &BTreeMap<Vec<u32>, Vec<(Vec<i64>, Complex64)>>, h: &[Complex64]) -> Vec<Complex64> {
    sl.values()
        .map(|terms| terms.iter().map(|(p, c)| c * pow_prod(h, p.iter())).sum::<Complex64>())
        .collect()
}

/// `v^Q` for every v-sample (rows) and every slice (columns).
fn v_table(sl: &BTreeMap<Vec<u32>, Vec<(Vec<i64>, Complex64)>>, vpts: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let qs: Vec<Vec<i64>> = sl.keys().map(|q| q.iter().map(|&x| x as i64).collect()).collect();
    vpts.iter()
        .map(|v| qs.iter().map(|q| pow_prod(v, q.iter())).collect())
        .collect()
}

fn sup_over_v(vals: &[Complex64], vtab: &[Vec<Complex64>]) -> f64 {
    vtab.iter()
        .map(|row| {
            vals.iter()
                .zip(row)
                .map(|(c, m)| c * m)
                .sum::<Complex64>()
                .norm()
        })
        .fold(0.0, f64::max)
}

/// Largest `|f|` over the grid samples.
pub fn grid_sup_norm<C: Coeff>(f: &Series<C>, grid: &GridSpec) -> Result<f64> {
    grid.validate(f.n_h(), f.n_v())?;
    if f.is_zero() {
        return Ok(0.0);
    }
    let sl = slices(f);
    let vtab = v_table(&sl, &grid.v_points());
    let hpts = grid.h_points();
    Ok(hpts
        .par_iter()
        .map(|h| sup_over_v(&slice_values(&sl, h), &vtab))
        .reduce(|| 0.0, f64::max))
}

/// Largest component sup norm of a vector series.
pub fn grid_sup_norm_vec<C: Coeff>(f: &[Series<C>], grid: &GridSpec) -> Result<f64> {
    let mut m: f64 = 0.0;
    for s in f {
        m = m.max(grid_sup_norm(s, grid)?);
    }
    Ok(m)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CauchyReport {
    pub pass: bool,
    pub sup_norm: f64,
    /// Largest `sup_h |f_Q| r^Q / sup |f|` over the stored slices.
    pub worst_ratio: f64,
    pub worst_q: Option<Vec<u32>>,
    pub slices_checked: usize,
}

/// Checks `sup_h |f_Q| <= sup |f| / r^Q * (1 + slack)` for every Q-slice.
pub fn cauchy_bound_check<C: Coeff>(f: &Series<C>, grid: &GridSpec, slack: f64) -> Result<CauchyReport> {
    grid.validate(f.n_h(), f.n_v())?;
    let sl = slices(f);
    if sl.is_empty() {
        return Ok(CauchyReport {
            pass: true,
            sup_norm: 0.0,
            worst_ratio: 0.0,
            worst_q: None,
            slices_checked: 0,
        });
    }
    let vtab = v_table(&sl, &grid.v_points());
    let hpts = grid.h_points();
    let per_h: Vec<(f64, Vec<f64>)> = hpts
        .par_iter()
        .map(|h| {
            let vals = slice_values(&sl, h);
            let sup = sup_over_v(&vals, &vtab);
            (sup, vals.iter().map(|c| c.norm()).collect())
        })
        .collect();
    let sup = per_h.iter().map(|(s, _)| *s).fold(0.0, f64::max);
    let mut worst = 0.0;
    let mut worst_q = None;
    for (idx, q) in sl.keys().enumerate() {
        let coeff_sup = per_h.iter().map(|(_, v)| v[idx]).fold(0.0, f64::max);
        let rq: f64 = grid
            .v_radii
            .iter()
            .zip(q)
            .map(|(r, &e)| r.powi(e as i32))
            .product();
        let ratio = if sup > 0.0 { coeff_sup * rq / sup } else if coeff_sup > 0.0 { f64::INFINITY } else { 0.0 };
        if ratio > worst || worst_q.is_none() {
            worst = ratio;
            worst_q = Some(q.clone());
        }
    }
    Ok(CauchyReport {
        pass: worst <= 1.0 + slack,
        sup_norm: sup,
        worst_ratio: worst,
        worst_q,
        slices_checked: sl.len(),
    })
}
