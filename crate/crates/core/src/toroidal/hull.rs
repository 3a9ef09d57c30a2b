use minilp::{ComparisonOp, OptimizationDirection, Problem};

use super::{shear_to_standard, DomainSpec, Result, Slab, ToroidalError, ToroidalSpec};

/// Default bisection depth for `eta`.
pub const ETA_DEPTH: u32 = 30;

const HULL_TOL: f64 = 1e-9;

/// Whether `x` lies in the convex hull of `points`, decided by a linear
/// program minimizing the l1 residual of `x - sum lambda_k p_k`.
pub fn hull_contains(points: &[Vec<f64>], x: &[f64]) -> bool {
    if points.is_empty() {
        return false;
    }
    let scale = points
        .iter()
        .flatten()
        .chain(x)
        .fold(1.0f64, |m, v| m.max(v.abs()));
    let mut lp = Problem::new(OptimizationDirection::Minimize);
    let lambdas: Vec<_> = points.iter().map(|_| lp.add_var(0.0, (0.0, f64::INFINITY))).collect();
    lp.add_constraint(lambdas.iter().map(|&l| (l, 1.0)), ComparisonOp::Eq, 1.0);
    for (c, xc) in x.iter().enumerate() {
        let up = lp.add_var(1.0, (0.0, f64::INFINITY));
        let down = lp.add_var(1.0, (0.0, f64::INFINITY));
        let mut expr: Vec<_> = lambdas
            .iter()
            .zip(points)
            .map(|(&l, p)| (l, p[c] / scale))
            .collect();
        expr.push((up, 1.0));
        expr.push((down, -1.0));
        lp.add_constraint(expr, ComparisonOp::Eq, xc / scale);
    }
    match lp.solve() {
        Ok(sol) => sol.objective() <= HULL_TOL,
        Err(_) => false,
    }
}

fn shifted(points: &[Vec<f64>], t: &[f64], k: f64) -> Vec<Vec<f64>> {
    points
        .iter()
        .map(|p| p.iter().zip(t).map(|(a, b)| a + k * b).collect())
        .collect()
}

/// Largest `eta` in `[0, eps]` on a bisection grid such that the `+-1`
/// translates of the `eps + eta` slab lie in the convex hull of the union of
/// the `0, +-1, +-2` translates of the `eps` slab.
pub fn eta_for_slab(slab: &Slab, translates: &[Vec<f64>], eps: f64, rcap: f64, depth: u32) -> Result<f64> {
    slab.check().map_err(|_| ToroidalError::DegenerateHull)?;
    if !(eps > 0.0) || !(rcap > 0.0) {
        return Err(ToroidalError::Argument("eps and R must be positive".into()));
    }
    if translates.iter().any(|t| t.len() != slab.dim()) {
        return Err(ToroidalError::Dimensions("translate length differs from slab dimension".into()));
    }
    let base = slab.vertices(eps, rcap);
    let mut cloud = base.clone();
    for t in translates {
        for k in [-2.0, -1.0, 1.0, 2.0] {
            cloud.extend(shifted(&base, t, k));
        }
    }
    let fits = |eta: f64| {
        let grown = slab.vertices(eps + eta, rcap);
        translates.iter().all(|t| {
            [-1.0, 1.0]
                .iter()
                .all(|&k| shifted(&grown, t, k).iter().all(|x| hull_contains(&cloud, x)))
        })
    };
    if fits(eps) {
        return Ok(eps);
    }
    let (mut lo, mut hi) = (0.0, eps);
    for _ in 0..depth {
        let mid = 0.5 * (lo + hi);
        if fits(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// `eta` for the deck translates of a toroidal group.
pub fn convex_extension_eta(spec: &ToroidalSpec, dom: &DomainSpec) -> Result<f64> {
    dom.validate()?;
    let basis = shear_to_standard(spec)?;
    let slab = basis.slab();
    let translates = slab.s_dirs.clone();
    eta_for_slab(&slab, &translates, dom.epsilon, dom.rcap, ETA_DEPTH)
}
