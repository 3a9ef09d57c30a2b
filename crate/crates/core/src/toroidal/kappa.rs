use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{relative_rank_margin, Result, ToroidalError, LINALG_TOL};

/// Default number of verification grid points.
pub const KAPPA_GRID: usize = 1000;

/// Real polytope `{sum s_j S_j + sum r_h R_h : s_j in [-eps, 1+eps], r_h in [-R, R]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Slab {
    pub s_dirs: Vec<Vec<f64>>,
    pub r_dirs: Vec<Vec<f64>>,
}

impl Slab {
    /// Standard box in `R^dim` with the first `q` axes as slab directions.
    pub fn standard(dim: usize, q: usize) -> Self {
        let e = |k: usize| (0..dim).map(|i| if i == k { 1.0 } else { 0.0 }).collect::<Vec<f64>>();
        Slab {
            s_dirs: (0..q).map(e).collect(),
            r_dirs: (q..dim).map(e).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.s_dirs.first().or(self.r_dirs.first()).map_or(0, Vec::len)
    }

    fn dirs(&self) -> impl Iterator<Item = &Vec<f64>> {
        self.s_dirs.iter().chain(&self.r_dirs)
    }

    pub fn check(&self) -> Result<()> {
        let dim = self.dim();
        let count = self.s_dirs.len() + self.r_dirs.len();
        if dim == 0 || count != dim || self.dirs().any(|d| d.len() != dim) {
            return Err(ToroidalError::Dimensions("slab needs dim directions of length dim".into()));
        }
        let m = DMatrix::from_fn(dim, dim, |r, c| self.dirs().nth(c).unwrap()[r]);
        if relative_rank_margin(&m) <= LINALG_TOL {
            return Err(ToroidalError::DegenerateSlab);
        }
        Ok(())
    }

    /// Point with slab coordinates `s` and box coordinates `r`.
    pub fn point(&self, s: &[f64], r: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        for (c, d) in s.iter().zip(&self.s_dirs).chain(r.iter().zip(&self.r_dirs)) {
            for (o, x) in out.iter_mut().zip(d) {
                *o += c * x;
            }
        }
        out
    }

    /// Vertices of the slab polytope.
    pub fn vertices(&self, eps: f64, rcap: f64) -> Vec<Vec<f64>> {
        let (q, m) = (self.s_dirs.len(), self.r_dirs.len());
        (0..1usize << (q + m))
            .map(|mask| {
                let bit = |k: usize| mask >> k & 1 == 1;
                let s: Vec<f64> = (0..q).map(|j| if bit(j) { 1.0 + eps } else { -eps }).collect();
                let r: Vec<f64> = (0..m).map(|h| if bit(q + h) { rcap } else { -rcap }).collect();
                self.point(&s, &r)
            })
            .collect()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Kappa0Estimate {
    /// `Q = Q1 + Q2` with `Q1` in the slab span and `Q2` in the box span.
    pub q_point: Vec<f64>,
    pub q_slab: Vec<f64>,
    pub q_box: Vec<f64>,
    pub s: Vec<f64>,
    pub r: Vec<f64>,
    pub kappa0: f64,
    pub grid_size: usize,
}

/// Evenly spaced closed grid with at least `grid_points` points on the
/// polytope `P_{eps', R}`, as (s, r) coordinates.
pub fn slab_grid(slab: &Slab, eps: f64, rcap: f64, grid_points: usize) -> Vec<(Vec<f64>, Vec<f64>)> {
    let (q, m) = (slab.s_dirs.len(), slab.r_dirs.len());
    let dim = q + m;
    let mut k = 2usize;
    while k.pow(dim as u32) < grid_points {
        k += 1;
    }
    let axis = |lo: f64, hi: f64| -> Vec<f64> { (0..k).map(|t| lo + (hi - lo) * t as f64 / (k - 1) as f64).collect() };
    let s_axis = axis(-eps, 1.0 + eps);
    let r_axis = axis(-rcap, rcap);
    let mut out = Vec::with_capacity(k.pow(dim as u32));
    let mut idx = vec![0usize; dim];
    loop {
        let s = (0..q).map(|j| s_axis[idx[j]]).collect();
        let r = (0..m).map(|h| r_axis[idx[q + h]]).collect();
        out.push((s, r));
        let mut c = dim;
        loop {
            if c == 0 {
                return out;
            }
            c -= 1;
            idx[c] += 1;
            if idx[c] < k {
                break;
            }
            idx[c] = 0;
        }
    }
}

/// Point `Q` of `P_{eps,R}` and the largest grid-certified `kappa0` with
/// `(Q' - Q).P <= -kappa0 (eps - eps') |P|_1` for `Q'` on a grid of `P_{eps',R}`.
pub fn kappa0_estimate(
    slab: &Slab,
    eps: f64,
    eps_prime: f64,
    p: &[i64],
    rcap: f64,
    grid_points: usize,
) -> Result<Kappa0Estimate> {
    slab.check()?;
    if p.len() != slab.dim() {
        return Err(ToroidalError::Dimensions(format!("P needs {} entries", slab.dim())));
    }
    if p.iter().all(|&x| x == 0) {
        return Err(ToroidalError::Argument("P must be nonzero".into()));
    }
    if !(eps_prime >= 0.0) || eps_prime > eps || !(rcap > 0.0) {
        return Err(ToroidalError::Argument("need eps >= eps' >= 0 and R > 0".into()));
    }
    let pf: Vec<f64> = p.iter().map(|&x| x as f64).collect();
    let p1: f64 = pf.iter().map(|x| x.abs()).sum();
    let s: Vec<f64> = slab
        .s_dirs
        .iter()
        .map(|d| if dot(d, &pf) >= 0.0 { 1.0 + eps } else { -eps })
        .collect();
    let r: Vec<f64> = slab
        .r_dirs
        .iter()
        .map(|d| if dot(d, &pf) >= 0.0 { rcap } else { -rcap })
        .collect();
    let q_slab = slab.point(&s, &vec![0.0; r.len()]);
    let q_box = slab.point(&vec![0.0; s.len()], &r);
    let q_point: Vec<f64> = q_slab.iter().zip(&q_box).map(|(a, b)| a + b).collect();
    let grid = slab_grid(slab, eps_prime, rcap, grid_points);
    let margin = eps - eps_prime;
    let mut kappa0 = 0.0;
    if margin > 0.0 {
        let qp = dot(&q_point, &pf);
        let gaps: Vec<f64> = grid
            .iter()
            .map(|(s2, r2)| dot(&slab.point(s2, r2), &pf) - qp)
            .collect();
        kappa0 = gaps.iter().map(|g| -g / (margin * p1)).fold(f64::INFINITY, f64::min).max(0.0);
        while kappa0 > 0.0 && gaps.iter().any(|g| *g > -kappa0 * margin * p1) {
            kappa0 = if kappa0 < f64::MIN_POSITIVE { 0.0 } else { kappa0 * (1.0 - 1e-12) };
        }
    }
    Ok(Kappa0Estimate {
        q_point,
        q_slab,
        q_box,
        s,
        r,
        kappa0,
        grid_size: grid.len(),
    })
}
