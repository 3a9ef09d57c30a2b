use serde::{Deserialize, Serialize};

use super::{DiophantineReport, Result, SmallDivisorError};
use crate::scalar::Coeff;
use crate::series::{grid_sup_norm_vec, GridSpec, Series, SeriesVec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub pass: bool,
    /// Smallest `C1` with `|G| <= max_i |F_i| (C1 / delta^(tau+nu) + C1 / rho^(tau+nu))`.
    pub c1: f64,
    pub sup_g: f64,
    pub sup_f: f64,
    pub factor: f64,
    pub tau: f64,
    pub nu: f64,
    pub delta: f64,
    pub rho: f64,
}

/// Fits the constant of the solution estimate from sampled sup norms: `F`
/// on `before`, `G` on the shrunken grid `after`. `nu` defaults to
/// `n_h + d + 1`.
#[allow(clippy::too_many_arguments)]
pub fn bound_verify<C: Coeff>(
    g: &[Series<C>],
    f: &[SeriesVec<C>],
    report: &DiophantineReport,
    before: &GridSpec,
    after: &GridSpec,
    delta: f64,
    rho: f64,
    nu: Option<f64>,
) -> Result<BoundReport> {
    if !(delta > 0.0) || !(rho > 0.0) {
        return Err(SmallDivisorError::Argument("delta and rho must be positive".into()));
    }
    let tau = report.tau.unwrap_or(1.0);
    let nu = nu.unwrap_or_else(|| {
        g.first()
            .map_or(1.0, |s| (s.n_h() + s.n_v() + 1) as f64)
    });
    let sup_g = grid_sup_norm_vec(g, after)?;
    let mut sup_f: f64 = 0.0;
    for fi in f {
        sup_f = sup_f.max(grid_sup_norm_vec(fi, before)?);
    }
    let factor = delta.powf(-(tau + nu)) + rho.powf(-(tau + nu));
    let c1 = if sup_g == 0.0 {
        0.0
    } else if sup_f == 0.0 {
        f64::INFINITY
    } else {
        sup_g / (sup_f * factor)
    };
    Ok(BoundReport {
        pass: c1.is_finite(),
        c1,
        sup_g,
        sup_f,
        factor,
        tau,
        nu,
        delta,
        rho,
    })
}
