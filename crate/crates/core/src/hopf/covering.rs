use std::collections::VecDeque;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{HopfError, Result};

/// Pieces `U_i^j`, `i = 1..=3`: `|z_j|` within `delta` of `r_i^j` and every
/// other `|z_k| < r_4^j + delta / 2`. `r_1` and `r_4 = r_1 / |alpha_j|` are
/// exact; `r_2`, `r_3` interpolate geometrically.
#[derive(Debug, Clone, PartialEq)]
pub struct NestedCoveringSpec {
    pub alpha_abs: Vec<BigRational>,
    pub r1: Vec<BigRational>,
    pub r4: Vec<BigRational>,
    pub r2: Vec<f64>,
    pub r3: Vec<f64>,
    pub delta: f64,
    /// `1 / |alpha_j|`.
    pub expansion: Vec<f64>,
    /// Log-annuli of the three pieces cover the fundamental annulus in every
    /// coordinate and the outer radii agree up to `delta / 2`.
    pub covers: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NestedCoveringDoc {
    pub alpha_abs: Vec<String>,
    pub delta: f64,
    /// `[r1, r2, r3, r4]` per coordinate, `r1` and `r4` exact.
    pub radii: Vec<[String; 4]>,
    pub expansion: Vec<f64>,
    pub covers: bool,
}

fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

impl NestedCoveringSpec {
    pub fn n(&self) -> usize {
        self.r1.len()
    }

    pub fn radius(&self, i: usize, j: usize) -> f64 {
        match i {
            1 => to_f64(&self.r1[j]),
            2 => self.r2[j],
            3 => self.r3[j],
            4 => to_f64(&self.r4[j]),
            _ => panic!("piece index {i} out of range"),
        }
    }

    /// Whether `z` lies in `U_i^j` (one-based `i`, zero-based `j`).
    pub fn contains(&self, i: usize, j: usize, z: &[f64]) -> bool {
        let r = self.radius(i, j);
        let outer = self.radius(4, j) + self.delta / 2.0;
        (z[j] - r).abs() < self.delta && z.iter().enumerate().all(|(k, m)| k == j || *m < outer)
    }

    pub fn to_doc(&self) -> NestedCoveringDoc {
        NestedCoveringDoc {
            alpha_abs: self.alpha_abs.iter().map(|x| x.to_string()).collect(),
            delta: self.delta,
            radii: (0..self.n())
                .map(|j| {
                    [
                        self.r1[j].to_string(),
                        format!("{}", self.r2[j]),
                        format!("{}", self.r3[j]),
                        self.r4[j].to_string(),
                    ]
                })
                .collect(),
            expansion: self.expansion.clone(),
            covers: self.covers,
        }
    }
}

/// Base radii `r_1^j = outer |alpha_j|`, so every piece family shares the
/// outer radius.
pub fn uniform_base_radii(alpha_abs: &[BigRational], outer: &BigRational) -> Vec<BigRational> {
    alpha_abs.iter().map(|a| a * outer).collect()
}

fn in_arc(x: f64, (a, b): (f64, f64), period: f64) -> bool {
    if b - a >= period {
        return true;
    }
    let t = (x - a).rem_euclid(period);
    t > 0.0 && t < b - a
}

pub fn build_covering(alpha_abs: &[BigRational], delta: f64, r1: &[BigRational]) -> Result<NestedCoveringSpec> {
    let n = alpha_abs.len();
    if n == 0 || r1.len() != n {
        return Err(HopfError::Invalid("need one base radius per coordinate".into()));
    }
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(HopfError::Invalid("delta must be positive".into()));
    }
    let one = BigRational::one();
    if alpha_abs.iter().any(|a| !a.is_positive() || *a >= one) {
        return Err(HopfError::Invalid("need 0 < |alpha_j| < 1".into()));
    }
    if r1.iter().any(|r| to_f64(r) <= delta) {
        return Err(HopfError::Invalid("delta too large: every radius must exceed delta".into()));
    }
    let r4: Vec<BigRational> = r1.iter().zip(alpha_abs).map(|(r, a)| r / a).collect();
    let mut r2 = Vec::with_capacity(n);
    let mut r3 = Vec::with_capacity(n);
    let mut expansion = Vec::with_capacity(n);
    let mut arcs_cover = true;
    for j in 0..n {
        let base = to_f64(&r1[j]);
        let rho = 1.0 / to_f64(&alpha_abs[j]);
        let radii = [base, base * rho.powf(1.0 / 3.0), base * rho.powf(2.0 / 3.0)];
        r2.push(radii[1]);
        r3.push(radii[2]);
        expansion.push(rho);
        if radii.iter().any(|r| (r + delta) / (r - delta) >= rho) {
            return Err(HopfError::Invalid(format!(
                "|alpha_{}| too close to 1 for delta = {delta}: pieces do not inject",
                j + 1
            )));
        }
        let period = rho.ln();
        let arcs: Vec<(f64, f64)> = radii.iter().map(|r| ((r - delta).ln(), (r + delta).ln())).collect();
        let nudge = 1e-12 * period;
        let triple = arcs.iter().any(|(a, _)| arcs.iter().all(|arc| in_arc(a + nudge, *arc, period)));
        if triple {
            return Err(HopfError::Invalid(format!("the three pieces over coordinate {} overlap", j + 1)));
        }
        if !arcs.iter().all(|(_, b)| arcs.iter().any(|arc| in_arc(*b, *arc, period))) {
            arcs_cover = false;
        }
    }
    let outer: Vec<f64> = r4.iter().map(to_f64).collect();
    let lo = outer.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = outer.iter().copied().fold(0.0, f64::max);
    Ok(NestedCoveringSpec {
        alpha_abs: alpha_abs.to_vec(),
        r1: r1.to_vec(),
        r4,
        r2,
        r3,
        delta,
        expansion,
        covers: arcs_cover && hi <= lo + delta / 2.0,
    })
}

/// Exact rational from a decimal string, for covering inputs.
pub fn rational(s: &str) -> Result<BigRational> {
    crate::scalar::parse_exact(s).map_err(|e| HopfError::Parse(e.0))
}

pub fn rational_from_ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoveringCheck {
    pub samples: usize,
    pub uncovered: usize,
    pub triple_overlaps: usize,
}

impl CoveringCheck {
    pub fn pass(&self) -> bool {
        self.uncovered == 0 && self.triple_overlaps == 0
    }
}

/// Samples points of `C^n \ {0}` (only moduli matter) and checks that each
/// has a translate `alpha^k z` in some piece, and that no point has
/// translates in all three pieces over the same coordinate.
pub fn covering_monte_carlo(cov: &NestedCoveringSpec, samples: usize, seed: u64) -> CoveringCheck {
    let n = cov.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = (0..n).map(|j| cov.radius(4, j)).fold(0.0, f64::max);
    let alpha: Vec<f64> = cov.alpha_abs.iter().map(to_f64).collect();
    let mut uncovered = 0;
    let mut triple = 0;
    for _ in 0..samples {
        let mut z: Vec<f64> = (0..n).map(|_| scale * rng.gen_range(-6.0f64..6.0).exp()).collect();
        if n > 1 && rng.gen_bool(0.1) {
            let k = rng.gen_range(0..n);
            z[k] = 0.0;
        }
        let mut hit = false;
        for j in 0..n {
            if z[j] == 0.0 {
                continue;
            }
            let step = (1.0 / alpha[j]).ln();
            let lo = ((z[j] / (cov.radius(3, j) + cov.delta)).ln() / step).floor() as i64 - 1;
            let hi = ((z[j] / (cov.radius(1, j) - cov.delta)).ln() / step).ceil() as i64 + 1;
            let mut seen = [false; 3];
            for k in lo..=hi {
                let w: Vec<f64> = z.iter().zip(&alpha).map(|(x, a)| x * a.powi(k as i32)).collect();
                for (i, s) in seen.iter_mut().enumerate() {
                    if cov.contains(i + 1, j, &w) {
                        *s = true;
                    }
                }
            }
            hit |= seen.iter().any(|s| *s);
            if seen.iter().all(|s| *s) {
                triple += 1;
            }
        }
        if !hit {
            uncovered += 1;
        }
    }
    CoveringCheck {
        samples,
        uncovered,
        triple_overlaps: triple,
    }
}

pub const CHAIN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransitionEdge {
    pub from: usize,
    pub to: usize,
    pub value: Complex64,
}

/// Pieces and constant transition values; `l_ji = 1 / l_ij` on every edge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransitionGraph {
    pub nodes: Vec<String>,
    pub edges: Vec<TransitionEdge>,
}

impl TransitionGraph {
    pub fn new(nodes: Vec<String>) -> Self {
        TransitionGraph { nodes, edges: Vec::new() }
    }

    /// Adds `a -> b` with value `l` and `b -> a` with `1 / l`.
    pub fn connect(&mut self, a: usize, b: usize, l: Complex64) {
        self.edges.push(TransitionEdge { from: a, to: b, value: l });
        self.edges.push(TransitionEdge {
            from: b,
            to: a,
            value: 1.0 / l,
        });
    }

    pub fn validate(&self) -> Result<()> {
        for e in &self.edges {
            if e.from >= self.nodes.len() || e.to >= self.nodes.len() {
                return Err(HopfError::Invalid("edge endpoint out of range".into()));
            }
            let back = self.edges.iter().find(|f| f.from == e.to && f.to == e.from);
            match back {
                Some(f) if (f.value * e.value - 1.0).norm() <= 1e-12 => {}
                _ => return Err(HopfError::Invalid(format!("edge {}->{} lacks its inverse", e.from, e.to))),
            }
        }
        Ok(())
    }
}

/// Complete graph on the pieces `U_i^j` with `l_31^j = beta` and every other
/// transition equal to 1.
pub fn hopf_transition_graph(n: usize, beta: Complex64) -> TransitionGraph {
    let idx = |i: usize, j: usize| j * 3 + (i - 1);
    let nodes = (0..n)
        .flat_map(|j| (1..=3).map(move |i| format!("U{i}^{}", j + 1)))
        .collect();
    let mut g = TransitionGraph::new(nodes);
    for a in 0..3 * n {
        for b in a + 1..3 * n {
            let (ja, jb) = (a / 3, b / 3);
            if ja == jb && a == idx(1, ja) && b == idx(3, ja) {
                g.connect(b, a, beta);
            } else {
                g.connect(a, b, Complex64::new(1.0, 0.0));
            }
        }
    }
    g
}

/// Graph for the non-primary covering `U_i^{j,k}`, `k = 1, 2`, with
/// `l_31^{j,k1,k2} = c d^(k2 - k1)` from `U_1^{j,k1}` to `U_3^{j,k2}`.
pub fn zhou_transition_graph(n: usize, c: Complex64, d: Complex64) -> TransitionGraph {
    let idx = |i: usize, j: usize, k: usize| (j * 3 + (i - 1)) * 2 + (k - 1);
    let mut nodes = Vec::new();
    for j in 0..n {
        for i in 1..=3 {
            for k in 1..=2 {
                nodes.push(format!("U{i}^{},{k}", j + 1));
            }
        }
    }
    let total = nodes.len();
    let mut g = TransitionGraph::new(nodes);
    let mut special = std::collections::BTreeMap::new();
    for j in 0..n {
        for k1 in 1..=2 {
            for k2 in 1..=2 {
                let v = c * d.powi(k2 as i32 - k1 as i32);
                special.insert((idx(3, j, k2), idx(1, j, k1)), v);
            }
        }
    }
    for a in 0..total {
        for b in a + 1..total {
            if let Some(v) = special.get(&(b, a)) {
                g.connect(b, a, *v);
            } else if let Some(v) = special.get(&(a, b)) {
                g.connect(a, b, *v);
            } else {
                g.connect(a, b, Complex64::new(1.0, 0.0));
            }
        }
    }
    g
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Chain {
    pub start: usize,
    /// `N_0 = start, N_1, ..., N_A`.
    pub nodes: Vec<usize>,
}

/// Shortest chain from every node: steps with `|l| <= 1` followed by one
/// step with `|l| < 1`.
pub fn transition_chain_search(graph: &TransitionGraph) -> Vec<Option<Chain>> {
    let n = graph.nodes.len();
    let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for e in &graph.edges {
        adj[e.from].push((e.to, e.value.norm()));
    }
    for a in &mut adj {
        a.sort_by_key(|x| x.0);
    }
    (0..n)
        .map(|start| {
            let mut prev = vec![usize::MAX; n];
            let mut seen = vec![false; n];
            seen[start] = true;
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                if let Some(&(w, _)) = adj[u].iter().find(|(_, m)| *m < 1.0 - CHAIN_TOL) {
                    let mut path = vec![w, u];
                    let mut x = u;
                    while x != start {
                        x = prev[x];
                        path.push(x);
                    }
                    path.reverse();
                    return Some(Chain { start, nodes: path });
                }
                for &(w, m) in &adj[u] {
                    if m <= 1.0 + CHAIN_TOL && !seen[w] {
                        seen[w] = true;
                        prev[w] = u;
                        queue.push_back(w);
                    }
                }
            }
            None
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        rational_from_ratio(n, d)
    }

    #[test]
    fn half_contraction_radii() {
        let c = build_covering(&[q(1, 2), q(1, 2)], 0.21, &[q(1, 1), q(1, 1)]).unwrap();
        assert_eq!(c.r4[0], q(2, 1));
        assert!((c.r2[0] - 2f64.powf(1.0 / 3.0)).abs() < 1e-15);
        assert!((c.r3[0] - 2f64.powf(2.0 / 3.0)).abs() < 1e-15);
        assert!(c.covers);
        assert!(covering_monte_carlo(&c, 2000, 1).pass());
    }

    #[test]
    fn zero_and_large_delta_rejected() {
        assert!(build_covering(&[q(1, 2), q(1, 2)], 0.0, &[q(1, 1), q(1, 1)]).is_err());
        assert!(build_covering(&[q(1, 2), q(1, 2)], 0.5, &[q(1, 1), q(1, 1)]).is_err());
        assert!(build_covering(&[q(9, 10), q(9, 10)], 0.1, &[q(1, 1), q(1, 1)]).is_err());
    }

    #[test]
    fn thin_pieces_leave_gaps() {
        let c = build_covering(&[q(1, 2), q(1, 2)], 0.05, &[q(1, 1), q(1, 1)]).unwrap();
        assert!(!c.covers);
        assert!(covering_monte_carlo(&c, 2000, 2).uncovered > 0);
    }

    #[test]
    fn chains() {
        let g = hopf_transition_graph(2, Complex64::new(0.5, 0.1));
        g.validate().unwrap();
        assert!(transition_chain_search(&g).iter().all(Option::is_some));
        let g = hopf_transition_graph(2, Complex64::from_polar(1.0, 0.3));
        assert!(transition_chain_search(&g).iter().all(Option::is_none));
        let g = hopf_transition_graph(1, Complex64::new(3.0, 0.0));
        let chains = transition_chain_search(&g);
        assert_eq!(chains[0].as_ref().unwrap().nodes, vec![0, 2]);
        let g = zhou_transition_graph(2, Complex64::new(0.5, 0.0), Complex64::from_polar(1.0, 1.0));
        g.validate().unwrap();
        assert!(transition_chain_search(&g).iter().all(Option::is_some));
    }

    #[test]
    fn arcs_on_circle() {
        assert!(in_arc(0.5, (0.0, 1.0), 3.0));
        assert!(in_arc(2.9 + 3.0, (2.5, 3.5), 3.0));
        assert!(in_arc(0.2, (2.5, 3.5), 3.0));
        assert!(!in_arc(1.0, (0.0, 1.0), 3.0));
    }
}
