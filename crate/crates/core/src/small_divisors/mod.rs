//! Small divisors of the cohomological equations: Diophantine scans and
//! explicit solutions of `L_i(G) = F_i`.

mod bound;
mod scan;

pub use bound::{bound_verify, BoundReport};
pub use scan::{diophantine_scan, laurent_exponents, taylor_exponents, DiophantineReport, DivisorWitness, RESONANCE_TOL};

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::scalar::Coeff;
use crate::series::{monomial_value, ExponentKey, Series, SeriesError, SeriesVec};
use crate::toroidal::DeckLinearData;

#[derive(Debug, thiserror::Error)]
pub enum SmallDivisorError {
    #[error("resonance at P={p:?}, Q={q:?}, target {target}, deck {l}")]
    Resonance {
        p: Vec<i32>,
        q: Vec<u32>,
        target: Target,
        l: usize,
    },
    #[error("cochain family is not compatible (residual {0:e})")]
    Incompatible(f64),
    #[error("invalid dimensions: {0}")]
    Dimensions(String),
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("report does not apply: {0}")]
    Report(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

pub type Result<T> = std::result::Result<T, SmallDivisorError>;

/// Component whose eigenvalue is subtracted in a divisor: `H(i)` uses
/// `lambda_{l,i}`, `V(j)` uses `mu_{l,j}` (zero-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "index", rename_all = "lowercase")]
pub enum Target {
    H(usize),
    V(usize),
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::H(i) => write!(f, "h{}", i + 1),
            Target::V(j) => write!(f, "v{}", j + 1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScanMode {
    Vertical,
    Full,
}

impl ScanMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ScanMode::Vertical => "vertical",
            ScanMode::Full => "full",
        }
    }

    /// Targets of the components of a cochain: `d` vertical ones, or the
    /// `n_h` horizontal ones followed by the vertical ones.
    pub fn targets(self, n_h: usize, d: usize) -> Vec<Target> {
        let v = (0..d).map(Target::V);
        match self {
            ScanMode::Vertical => v.collect(),
            ScanMode::Full => (0..n_h).map(Target::H).chain(v).collect(),
        }
    }
}

impl FromStr for ScanMode {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "vertical" => Ok(ScanMode::Vertical),
            "full" => Ok(ScanMode::Full),
            other => Err(format!("unknown mode `{other}` (expected vertical or full)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Inverse,
}

impl FromStr for Direction {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "forward" => Ok(Direction::Forward),
            "inverse" => Ok(Direction::Inverse),
            other => Err(format!("unknown direction `{other}`")),
        }
    }
}

/// Decks with every eigenvalue inverted (the linear parts of `tau_i^{-1}`).
pub fn inverted<C: Coeff>(decks: &DeckLinearData<C>) -> DeckLinearData<C> {
    let inv = |m: &Vec<Vec<C>>| m.iter().map(|r| r.iter().map(Coeff::inv).collect()).collect();
    DeckLinearData {
        lambda: inv(&decks.lambda),
        mu: inv(&decks.mu),
    }
}

fn oriented<C: Coeff>(decks: &DeckLinearData<C>, dir: Direction) -> std::borrow::Cow<'_, DeckLinearData<C>> {
    match dir {
        Direction::Forward => std::borrow::Cow::Borrowed(decks),
        Direction::Inverse => std::borrow::Cow::Owned(inverted(decks)),
    }
}

fn check_indices<C: Coeff>(decks: &DeckLinearData<C>, key: &ExponentKey, target: Target, l: usize) -> Result<()> {
    if l >= decks.q() {
        return Err(SmallDivisorError::Argument(format!("deck index {l} out of range")));
    }
    if key.p.len() != decks.n_h() || key.q.len() != decks.d() {
        return Err(SmallDivisorError::Dimensions("exponent lengths differ from eigenvalue counts".into()));
    }
    let ok = match target {
        Target::H(i) => i < decks.n_h(),
        Target::V(j) => j < decks.d(),
    };
    if !ok {
        return Err(SmallDivisorError::Argument(format!("target {target} out of range")));
    }
    Ok(())
}

/// The multiplier `lambda_l^P mu_l^Q - e` of `L_l` on `h^P v^Q` in
/// component `target` (unchecked indices).
pub(crate) fn multiplier<C: Coeff>(decks: &DeckLinearData<C>, key: &ExponentKey, target: Target, l: usize) -> C {
    let e = match target {
        Target::H(i) => &decks.lambda[l][i],
        Target::V(j) => &decks.mu[l][j],
    };
    monomial_value(&decks.lambda[l], &decks.mu[l], key) - e.clone()
}

/// Complex divisor `lambda_l^P mu_l^Q - e` (or its inverse-operator
/// counterpart).
pub fn divisor_value<C: Coeff>(
    decks: &DeckLinearData<C>,
    p: &[i32],
    q: &[u32],
    target: Target,
    l: usize,
    dir: Direction,
) -> Result<C> {
    let key = ExponentKey::new(p.to_vec(), q.to_vec());
    check_indices(decks, &key, target, l)?;
    Ok(multiplier(&oriented(decks, dir), &key, target, l))
}

/// `|lambda_l^P mu_l^Q - e|` for `|Q| > 1`.
pub fn divisor<C: Coeff>(decks: &DeckLinearData<C>, p: &[i32], q: &[u32], target: Target, l: usize) -> Result<f64> {
    if q.iter().sum::<u32>() < 2 {
        return Err(SmallDivisorError::Argument("divisors are defined for |Q| > 1".into()));
    }
    Ok(divisor_value(decks, p, q, target, l, Direction::Forward)?.abs_f64())
}

/// Deck index with the largest divisor modulus; ties go to the smallest index.
pub(crate) fn best_deck<C: Coeff>(decks: &DeckLinearData<C>, key: &ExponentKey, target: Target) -> (usize, C, f64) {
    let mut best: Option<(usize, C, f64)> = None;
    for l in 0..decks.q() {
        let m = multiplier(decks, key, target, l);
        let a = m.abs_f64();
        let better = match &best {
            None => true,
            Some((_, _, b)) => a > *b,
        };
        if better {
            best = Some((l, m, a));
        }
    }
    best.expect("at least one deck")
}

/// Family `F_1, ..., F_q` of right-hand sides.
#[derive(Debug, Clone, PartialEq)]
pub struct CochainSystem<C: Coeff> {
    pub f: Vec<SeriesVec<C>>,
    pub mode: ScanMode,
    pub direction: Direction,
    pub decks: DeckLinearData<C>,
}

impl<C: Coeff> CochainSystem<C> {
    pub fn new(f: Vec<SeriesVec<C>>, mode: ScanMode, direction: Direction, decks: DeckLinearData<C>) -> Result<Self> {
        let sys = CochainSystem { f, mode, direction, decks };
        sys.check()?;
        Ok(sys)
    }

    pub fn components(&self) -> usize {
        self.mode.targets(self.decks.n_h(), self.decks.d()).len()
    }

    fn check(&self) -> Result<()> {
        if self.f.len() != self.decks.q() {
            return Err(SmallDivisorError::Dimensions(format!("need {} cochains", self.decks.q())));
        }
        let comps = self.components();
        for fi in &self.f {
            check_cochain(fi, comps, &self.decks)?;
        }
        Ok(())
    }
}

fn check_cochain<C: Coeff>(f: &[Series<C>], comps: usize, decks: &DeckLinearData<C>) -> Result<()> {
    if f.len() != comps {
        return Err(SmallDivisorError::Dimensions(format!("cochain needs {comps} components")));
    }
    for s in f {
        if s.n_h() != decks.n_h() || s.n_v() != decks.d() {
            return Err(SmallDivisorError::Dimensions("series variables differ from eigenvalue counts".into()));
        }
        if let Some(o) = s.v_order() {
            if o < 2 {
                return Err(SmallDivisorError::Series(SeriesError::VOrder(o)));
            }
        }
    }
    Ok(())
}

/// `L_i(G)` (or `L_{-i}(G)`), componentwise.
pub fn apply_operator<C: Coeff>(
    decks: &DeckLinearData<C>,
    i: usize,
    g: &[Series<C>],
    mode: ScanMode,
    dir: Direction,
) -> Result<SeriesVec<C>> {
    let targets = mode.targets(decks.n_h(), decks.d());
    if g.len() != targets.len() || i >= decks.q() {
        return Err(SmallDivisorError::Dimensions("operator input does not match the decks".into()));
    }
    let decks = oriented(decks, dir);
    Ok(g.iter()
        .zip(&targets)
        .map(|(s, &t)| {
            let mut out = Series::zero(s.n_h(), s.n_v(), s.trunc());
            for (k, c) in s.terms() {
                let m = multiplier(&decks, k, t, i);
                out.accumulate(k.clone(), c.mul_ref(&m));
            }
            out.cleanup();
            out
        })
        .collect())
}

/// Largest coefficient modulus of `L_i(F_j) - L_j(F_i)` over all pairs.
pub fn compatibility_residual<C: Coeff>(sys: &CochainSystem<C>) -> Result<f64> {
    Ok(compatibility_defect(sys)?.0)
}

/// Residual modulus, whether it vanishes, and the scale of the data.
fn compatibility_defect<C: Coeff>(sys: &CochainSystem<C>) -> Result<(f64, bool, f64)> {
    sys.check()?;
    let q = sys.decks.q();
    let applied: Vec<Vec<SeriesVec<C>>> = (0..q)
        .map(|i| {
            (0..q)
                .map(|j| apply_operator(&sys.decks, i, &sys.f[j], sys.mode, sys.direction))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let mut worst: f64 = 0.0;
    let mut zero = true;
    let mut scale: f64 = 0.0;
    for i in 0..q {
        for j in 0..q {
            for s in &applied[i][j] {
                scale = scale.max(s.max_abs());
            }
        }
    }
    for i in 0..q {
        for j in i + 1..q {
            for (a, b) in applied[i][j].iter().zip(&applied[j][i]) {
                let mut diff = a.clone();
                for (k, c) in b.terms() {
                    diff.accumulate(k.clone(), -c.clone());
                }
                if !diff.is_zero() {
                    zero = false;
                }
                worst = worst.max(diff.max_abs());
            }
        }
    }
    Ok((worst, zero, scale))
}

const FLOAT_COMPAT_TOL: f64 = 1e-12;

fn require_compatible<C: Coeff>(sys: &CochainSystem<C>) -> Result<()> {
    let (worst, zero, scale) = compatibility_defect(sys)?;
    let ok = match C::MODE {
        crate::scalar::Mode::Exact => zero,
        crate::scalar::Mode::Float => worst <= FLOAT_COMPAT_TOL * scale.max(1.0),
    };
    if ok {
        Ok(())
    } else {
        Err(SmallDivisorError::Incompatible(worst))
    }
}

fn is_resonant<C: Coeff>(m: &C, modulus: f64) -> bool {
    match C::MODE {
        crate::scalar::Mode::Exact => m.is_zero(),
        crate::scalar::Mode::Float => modulus <= RESONANCE_TOL,
    }
}

/// Unique formal solution `G` of `L_i(G) = F_i` for all `i`, dividing at each
/// key by the divisor of the maximizing deck.
pub fn solve_family<C: Coeff>(sys: &CochainSystem<C>, report: &DiophantineReport) -> Result<SeriesVec<C>> {
    if sys.mode == ScanMode::Full && report.mode == ScanMode::Vertical {
        return Err(SmallDivisorError::Report("a vertical scan cannot certify a full system".into()));
    }
    require_compatible(sys)?;
    let max_p = sys.f.iter().flatten().map(Series::max_p_abs).max().unwrap_or(0);
    let max_q = sys.f.iter().flatten().map(Series::max_q_deg).max().unwrap_or(0);
    let targets = sys.mode.targets(sys.decks.n_h(), sys.decks.d());
    if let Some(w) = report.resonances.iter().find(|w| {
        w.p.iter().map(|x| x.unsigned_abs()).sum::<u32>() <= max_p
            && w.q.iter().sum::<u32>() <= max_q
            && targets.contains(&w.target)
    }) {
        return Err(SmallDivisorError::Resonance {
            p: w.p.clone(),
            q: w.q.clone(),
            target: w.target,
            l: w.l,
        });
    }
    let decks = oriented(&sys.decks, sys.direction);
    let mut out = Vec::with_capacity(targets.len());
    for (c, &t) in targets.iter().enumerate() {
        let keys: BTreeSet<&ExponentKey> = sys.f.iter().flat_map(|fi| fi[c].terms().map(|(k, _)| k)).collect();
        let proto = &sys.f[0][c];
        let mut g = Series::zero(proto.n_h(), proto.n_v(), proto.trunc());
        for key in keys {
            let (l, m, a) = best_deck(&decks, key, t);
            if is_resonant(&m, a) {
                return Err(SmallDivisorError::Resonance {
                    p: key.p.clone(),
                    q: key.q.clone(),
                    target: t,
                    l,
                });
            }
            if let Some(fc) = sys.f[l][c].coeff(key) {
                g.add_term(key.clone(), fc.mul_ref(&m.inv()))?;
            }
        }
        g.cleanup();
        out.push(g);
    }
    Ok(out)
}

/// Solution of the single equation `L_i(G) = F_i` (or `L_{-i}`).
pub fn solve_single<C: Coeff>(
    i: usize,
    f_i: &[Series<C>],
    decks: &DeckLinearData<C>,
    mode: ScanMode,
    dir: Direction,
) -> Result<SeriesVec<C>> {
    if i >= decks.q() {
        return Err(SmallDivisorError::Argument(format!("deck index {i} out of range")));
    }
    let targets = mode.targets(decks.n_h(), decks.d());
    check_cochain(f_i, targets.len(), decks)?;
    let decks = oriented(decks, dir);
    let mut out = Vec::with_capacity(targets.len());
    for (s, &t) in f_i.iter().zip(&targets) {
        let mut g = Series::zero(s.n_h(), s.n_v(), s.trunc());
        for (k, c) in s.terms() {
            let m = multiplier(&decks, k, t, i);
            if is_resonant(&m, m.abs_f64()) {
                return Err(SmallDivisorError::Resonance {
                    p: k.p.clone(),
                    q: k.q.clone(),
                    target: t,
                    l: i,
                });
            }
            g.add_term(k.clone(), c.mul_ref(&m.inv()))?;
        }
        g.cleanup();
        out.push(g);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ExactComplex;
    use crate::series::Trunc;

    type E = ExactComplex;

    fn r(n: i64, d: i64) -> E {
        E::from_ratio(n, d)
    }

    pub(crate) fn decks_q2() -> DeckLinearData<E> {
        DeckLinearData::new(
            vec![vec![E::from_parts(r(3, 5), r(4, 5))], vec![r(2, 1)]],
            vec![vec![r(1, 2)], vec![r(1, 3)]],
        )
        .unwrap()
    }

    fn scan_for(decks: &DeckLinearData<E>, mode: ScanMode) -> DiophantineReport {
        diophantine_scan(decks, 6, mode).unwrap()
    }

    #[test]
    fn divisor_by_hand() {
        let decks = DeckLinearData::new(vec![vec![r(1, 1)]], vec![vec![r(1, 2)]]).unwrap();
        assert_eq!(divisor(&decks, &[0], &[2], Target::V(0), 0).unwrap(), 0.25);
        assert!(divisor(&decks, &[0], &[1], Target::V(0), 0).is_err());
        assert!(divisor(&decks, &[0], &[2], Target::V(1), 0).is_err());
        assert!(divisor(&decks, &[0], &[2], Target::V(0), 1).is_err());
        let res = DeckLinearData::new(vec![vec![r(1, 1)]], vec![vec![r(1, 1)]]).unwrap();
        assert_eq!(divisor(&res, &[3], &[2], Target::V(0), 0).unwrap(), 0.0);
    }

    fn random_series(seed: u64, trunc: Trunc) -> Series<E> {
        let mut s = Series::zero(1, 1, trunc);
        let mut x = seed;
        for p in -2..=2 {
            for q in 2..=4u32 {
                x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let n = (x >> 33) as i64 % 7 - 3;
                s.add_term(ExponentKey::new(vec![p], vec![q]), r(n, 1 + (x >> 50) as i64 % 4)).unwrap();
            }
        }
        s
    }

    #[test]
    fn coboundary_family_recovers_generator() {
        let decks = decks_q2();
        let t = Trunc::new(2, 4);
        for mode in [ScanMode::Vertical, ScanMode::Full] {
            let comps = mode.targets(1, 1).len();
            let h: Vec<Series<E>> = (0..comps).map(|c| random_series(17 + c as u64, t)).collect();
            for dir in [Direction::Forward, Direction::Inverse] {
                let f: Vec<SeriesVec<E>> = (0..2).map(|i| apply_operator(&decks, i, &h, mode, dir).unwrap()).collect();
                let sys = CochainSystem::new(f.clone(), mode, dir, decks.clone()).unwrap();
                assert_eq!(compatibility_residual(&sys).unwrap(), 0.0);
                let g = solve_family(&sys, &scan_for(&decks, ScanMode::Full)).unwrap();
                assert_eq!(g, h);
                for (i, fi) in f.iter().enumerate() {
                    assert_eq!(&apply_operator(&decks, i, &g, mode, dir).unwrap(), fi);
                    assert_eq!(solve_single(i, fi, &decks, mode, dir).unwrap(), h);
                }
            }
        }
    }

    #[test]
    fn incompatible_family_rejected() {
        let decks = decks_q2();
        let t = Trunc::new(2, 4);
        let f = vec![vec![random_series(1, t)], vec![random_series(2, t)]];
        let sys = CochainSystem::new(f.clone(), ScanMode::Vertical, Direction::Forward, decks.clone()).unwrap();
        let res = compatibility_residual(&sys).unwrap();
        assert!(res > 0.0);
        let l01 = apply_operator(&decks, 0, &f[1], ScanMode::Vertical, Direction::Forward).unwrap();
        let l10 = apply_operator(&decks, 1, &f[0], ScanMode::Vertical, Direction::Forward).unwrap();
        let oracle = l01[0].sub(&l10[0]).unwrap().max_abs();
        assert_eq!(res, oracle);
        assert!(matches!(
            solve_family(&sys, &scan_for(&decks, ScanMode::Vertical)),
            Err(SmallDivisorError::Incompatible(_))
        ));
    }

    #[test]
    fn resonant_key_rejected() {
        let decks = DeckLinearData::new(vec![vec![r(1, 1)]], vec![vec![r(1, 1)]]).unwrap();
        let t = Trunc::new(1, 3);
        let f = vec![Series::monomial(1, 1, t, vec![1], vec![2], r(1, 1)).unwrap()];
        assert!(matches!(
            solve_single(0, &f, &decks, ScanMode::Vertical, Direction::Forward),
            Err(SmallDivisorError::Resonance { .. })
        ));
    }
}
