//! Hopf manifolds: eigenvalue-group membership, vanishing criteria for flat
//! line bundles, nested Stein coverings, transition chains and Shilov
//! constants.

mod covering;
mod shilov;

pub use covering::{
    build_covering, covering_monte_carlo, hopf_transition_graph, rational, rational_from_ratio, transition_chain_search,
    uniform_base_radii, zhou_transition_graph, Chain, CoveringCheck, NestedCoveringDoc, NestedCoveringSpec, TransitionEdge,
    TransitionGraph, CHAIN_TOL,
};
pub use shilov::{jordan_deform, shilov_constant, Factor, Fields, PieceGeometry};

use serde::{Deserialize, Serialize};

use crate::scalar::{Coeff, DecimalComplex};

/// Relative tolerance for equality of products of eigenvalues.
pub const HOPF_TOL: f64 = 1e-12;

#[derive(Debug, thiserror::Error)]
pub enum HopfError {
    #[error("invalid Hopf data: {0}")]
    Invalid(String),
    #[error("variant does not apply: {0}")]
    Mismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, HopfError>;

#[derive(Debug, Clone, PartialEq)]
pub struct Torsion<C> {
    pub m: u32,
    pub a: C,
}

/// Contraction `diag(alpha)` (plus ones over the diagonal where
/// `jordan_overdiag[i]` is set), optionally with a finite-order scalar
/// generator for non-primary quotients.
#[derive(Debug, Clone, PartialEq)]
pub struct HopfSpec<C> {
    pub alpha: Vec<C>,
    pub jordan_overdiag: Vec<bool>,
    pub torsion: Option<Torsion<C>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlatBundle<C> {
    pub beta: C,
    pub d_char: Option<C>,
}

impl<C: Coeff> HopfSpec<C> {
    pub fn diagonal(alpha: Vec<C>) -> Result<Self> {
        let n = alpha.len();
        let s = HopfSpec {
            alpha,
            jordan_overdiag: vec![false; n.saturating_sub(1)],
            torsion: None,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_jordan(&self) -> bool {
        self.jordan_overdiag.iter().any(|b| *b)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        if n < 2 {
            return Err(HopfError::Invalid("dimension must be at least 2".into()));
        }
        let mods: Vec<f64> = self.alpha.iter().map(Coeff::abs_f64).collect();
        if mods.iter().any(|m| !(*m > 0.0 && *m < 1.0)) {
            return Err(HopfError::Invalid("eigenvalues must satisfy 0 < |alpha| < 1".into()));
        }
        if mods.windows(2).any(|w| w[0] > w[1] * (1.0 + HOPF_TOL)) {
            return Err(HopfError::Invalid("eigenvalues must be ordered by modulus".into()));
        }
        if !self.jordan_overdiag.is_empty() && self.jordan_overdiag.len() != n - 1 {
            return Err(HopfError::Invalid(format!("need {} over-diagonal flags", n - 1)));
        }
        for (i, on) in self.jordan_overdiag.iter().enumerate() {
            if *on && !self.alpha[i].approx_eq(&self.alpha[i + 1], HOPF_TOL) {
                return Err(HopfError::Invalid("a Jordan block needs equal eigenvalues".into()));
            }
        }
        if let Some(t) = &self.torsion {
            if t.m == 0 || !t.a.pow_int(t.m as i64).approx_eq(&C::one(), HOPF_TOL) {
                return Err(HopfError::Invalid("torsion generator must satisfy a^m = 1".into()));
            }
        }
        Ok(())
    }
}

impl<C: Coeff> FlatBundle<C> {
    pub fn new(beta: C) -> Result<Self> {
        if beta.is_zero() {
            return Err(HopfError::Invalid("beta must be nonzero".into()));
        }
        Ok(FlatBundle { beta, d_char: None })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TorsionDoc {
    pub m: u32,
    pub a: DecimalComplex,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HopfSpecDoc {
    pub alpha: Vec<DecimalComplex>,
    #[serde(default)]
    pub jordan_overdiag: Vec<bool>,
    #[serde(default)]
    pub torsion: Option<TorsionDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlatBundleDoc {
    pub beta: DecimalComplex,
    #[serde(default)]
    pub d_char: Option<DecimalComplex>,
}

fn parse<C: Coeff>(d: &DecimalComplex) -> Result<C> {
    d.parse::<C>().map_err(|e| HopfError::Parse(e.0))
}

impl HopfSpecDoc {
    pub fn parse<C: Coeff>(&self) -> Result<HopfSpec<C>> {
        let alpha = self.alpha.iter().map(parse).collect::<Result<Vec<C>>>()?;
        let jordan_overdiag = if self.jordan_overdiag.is_empty() {
            vec![false; alpha.len().saturating_sub(1)]
        } else {
            self.jordan_overdiag.clone()
        };
        let torsion = match &self.torsion {
            Some(t) => Some(Torsion { m: t.m, a: parse(&t.a)? }),
            None => None,
        };
        let s = HopfSpec {
            alpha,
            jordan_overdiag,
            torsion,
        };
        s.validate()?;
        Ok(s)
    }
}

impl FlatBundleDoc {
    pub fn parse<C: Coeff>(&self) -> Result<FlatBundle<C>> {
        let mut b = FlatBundle::new(parse(&self.beta)?)?;
        if let Some(d) = &self.d_char {
            b.d_char = Some(parse(d)?);
        }
        Ok(b)
    }
}

/// `prod alpha_i^v_i`.
pub fn alpha_power<C: Coeff>(alpha: &[C], v: &[i64]) -> C {
    alpha
        .iter()
        .zip(v)
        .filter(|(_, e)| **e != 0)
        .fold(C::one(), |acc, (a, e)| acc.mul_ref(&a.pow_int(*e)))
}

/// Depth-first enumeration of `v` with `|v|_1 = total`, coordinates in
/// `lo..` (`lo` is `-total` or 0), lexicographic order, pruned by the
/// reachable range of `sum v_i ln|alpha_i|` around `target_log`. Stops at
/// the first `v` accepted by `hit`.
fn search_shell(
    logs: &[f64],
    total: i64,
    signed: bool,
    target_log: f64,
    hit: &mut dyn FnMut(&[i64]) -> bool,
) -> Option<Vec<i64>> {
    fn rec(
        logs: &[f64],
        tail_max: &[f64],
        i: usize,
        left: i64,
        signed: bool,
        acc: f64,
        target: f64,
        v: &mut Vec<i64>,
        hit: &mut dyn FnMut(&[i64]) -> bool,
    ) -> bool {
        let slack = 1e-9 * (1.0 + target.abs());
        if (target - acc).abs() > left as f64 * tail_max[i] + slack {
            return false;
        }
        if i + 1 == logs.len() {
            let opts: &[i64] = if left == 0 {
                &[0]
            } else if signed {
                &[-left, left]
            } else {
                &[left]
            };
            for &x in opts {
                v.push(x);
                let done = hit(v);
                v.pop();
                if done {
                    return true;
                }
            }
            return false;
        }
        let lo = if signed { -left } else { 0 };
        for x in lo..=left {
            v.push(x);
            let done = rec(
                logs,
                tail_max,
                i + 1,
                left - x.abs(),
                signed,
                acc + x as f64 * logs[i],
                target,
                v,
                hit,
            );
            v.pop();
            if done {
                return true;
            }
        }
        false
    }
    if logs.is_empty() {
        return None;
    }
    let mut tail_max = vec![0.0f64; logs.len() + 1];
    for i in (0..logs.len()).rev() {
        tail_max[i] = tail_max[i + 1].max(logs[i].abs());
    }
    let mut v = Vec::with_capacity(logs.len());
    let mut found = None;
    let mut wrapped = |w: &[i64]| {
        if hit(w) {
            found = Some(w.to_vec());
            true
        } else {
            false
        }
    };
    rec(logs, &tail_max, 0, total, signed, 0.0, target_log, &mut v, &mut wrapped);
    found
}

/// Exponent domain of a membership search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExponentDomain {
    Integers,
    Naturals,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Membership {
    pub member: bool,
    /// Smallest witness by `(|v|_1, lexicographic)`.
    pub witness: Option<Vec<i64>>,
    pub bound: u32,
}

/// Smallest `v` (by `|v|_1`, then lexicographic) with `|v|_1 <= bound` and
/// `alpha^v = target`.
pub fn find_exponent<C: Coeff>(
    target: &C,
    alpha: &[C],
    bound: u32,
    domain: ExponentDomain,
    extra: &dyn Fn(&[i64]) -> bool,
) -> Option<Vec<i64>> {
    let logs: Vec<f64> = alpha.iter().map(|a| a.abs_f64().ln()).collect();
    let t = target.abs_f64().ln();
    let signed = domain == ExponentDomain::Integers;
    (0..=bound as i64).find_map(|s| {
        search_shell(&logs, s, signed, t, &mut |v| {
            extra(v) && alpha_power(alpha, v).approx_eq(target, HOPF_TOL)
        })
    })
}

/// Whether `beta^m_power` lies in the group generated by `alpha`, up to
/// `|v|_1 <= bound`.
pub fn delta_membership<C: Coeff>(beta: &C, spec: &HopfSpec<C>, m_power: i64, bound: u32) -> Membership {
    member_of(&beta.pow_int(m_power), &spec.alpha, bound)
}

pub fn member_of<C: Coeff>(target: &C, alpha: &[C], bound: u32) -> Membership {
    let witness = find_exponent(target, alpha, bound, ExponentDomain::Integers, &|_| true);
    Membership {
        member: witness.is_some(),
        witness,
        bound,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HopfKind {
    Diagonal,
    Classical,
    Generic,
    Undetermined,
}

/// `prod alpha^lhs = prod alpha^rhs` with disjoint supports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Relation {
    pub lhs: Vec<u32>,
    pub rhs: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub kind: HopfKind,
    pub relation: Option<Relation>,
    pub bound: u32,
    pub reason: String,
}

/// Smallest nontrivial multiplicative relation with each side of total
/// degree at most `bound`.
pub fn find_relation<C: Coeff>(alpha: &[C], bound: u32) -> Option<Relation> {
    let logs: Vec<f64> = alpha.iter().map(|a| a.abs_f64().ln()).collect();
    let b = bound as i64;
    (1..=2 * b).find_map(|s| {
        search_shell(&logs, s, true, 0.0, &mut |v| {
            let pos: i64 = v.iter().filter(|x| **x > 0).sum();
            let neg: i64 = -v.iter().filter(|x| **x < 0).sum::<i64>();
            let canonical = v.iter().find(|x| **x != 0).is_some_and(|x| *x > 0);
            if !canonical || pos > b || neg > b {
                return false;
            }
            let up: Vec<i64> = v.iter().map(|x| (*x).max(0)).collect();
            let down: Vec<i64> = v.iter().map(|x| (-*x).max(0)).collect();
            alpha_power(alpha, &up).approx_eq(&alpha_power(alpha, &down), HOPF_TOL)
        })
        .map(|v| Relation {
            lhs: v.iter().map(|x| (*x).max(0) as u32).collect(),
            rhs: v.iter().map(|x| (-*x).max(0) as u32).collect(),
        })
    })
}

pub fn classify_hopf<C: Coeff>(spec: &HopfSpec<C>, exp_bound: u32) -> Classification {
    let out = |kind, relation, reason: &str| Classification {
        kind,
        relation,
        bound: exp_bound,
        reason: reason.to_string(),
    };
    if spec.is_jordan() {
        return out(HopfKind::Undetermined, None, "contraction has a nontrivial Jordan block");
    }
    if spec.alpha.iter().all(|a| a.approx_eq(&spec.alpha[0], HOPF_TOL)) {
        return out(HopfKind::Classical, None, "all eigenvalues equal");
    }
    if let Some(r) = find_relation(&spec.alpha, exp_bound) {
        return out(HopfKind::Diagonal, Some(r), "multiplicative relation found");
    }
    let mods: Vec<f64> = spec.alpha.iter().map(Coeff::abs_f64).collect();
    if mods.windows(2).any(|w| w[1] <= w[0] * (1.0 + HOPF_TOL)) {
        return out(HopfKind::Undetermined, None, "moduli are not strictly increasing");
    }
    out(HopfKind::Generic, None, "generic up to bound")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    MallGeneric,
    Classical,
    Zhou1,
    Zhou2,
}

impl std::str::FromStr for Variant {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "mall_generic" => Ok(Variant::MallGeneric),
            "classical" => Ok(Variant::Classical),
            "zhou1" => Ok(Variant::Zhou1),
            "zhou2" => Ok(Variant::Zhou2),
            _ => Err(format!("unknown variant {s:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VanishingVerdict {
    pub variant: Variant,
    pub criterion_holds: bool,
    pub h0_vanishes: bool,
    pub h1_vanishes: bool,
    pub reason: String,
    pub witness: Option<Vec<i64>>,
    pub bound: u32,
}

/// Evaluates the arithmetic vanishing criterion of `variant`; a failing
/// criterion makes no claim about the cohomology.
pub fn vanishing_predicate<C: Coeff>(
    bundle: &FlatBundle<C>,
    spec: &HopfSpec<C>,
    variant: Variant,
    bound: u32,
) -> Result<VanishingVerdict> {
    let class = classify_hopf(spec, bound);
    let need = |ok: bool, what: &str| {
        if ok {
            Ok(())
        } else {
            Err(HopfError::Mismatch(what.to_string()))
        }
    };
    let torsion = || {
        let t = spec
            .torsion
            .as_ref()
            .ok_or_else(|| HopfError::Mismatch("variant needs a torsion generator".into()))?;
        let d = bundle
            .d_char
            .clone()
            .ok_or_else(|| HopfError::Mismatch("variant needs the character value d".into()))?;
        Ok::<_, HopfError>((t.a.clone(), d))
    };
    let witness = match variant {
        Variant::MallGeneric => {
            need(class.kind == HopfKind::Generic, "spec is not generic up to the bound")?;
            member_of(&bundle.beta, &spec.alpha, bound).witness
        }
        Variant::Classical => {
            need(class.kind == HopfKind::Classical, "spec is not classical")?;
            member_of(&bundle.beta, &spec.alpha[..1], bound).witness
        }
        Variant::Zhou1 => {
            need(class.kind == HopfKind::Classical, "spec is not classical")?;
            let (a, d) = torsion()?;
            let mu = &spec.alpha[0];
            (0..=bound as i64)
                .find(|r| mu.pow_int(*r).approx_eq(&bundle.beta, HOPF_TOL) && a.pow_int(*r).approx_eq(&d, HOPF_TOL))
                .map(|r| vec![r])
        }
        Variant::Zhou2 => {
            need(class.kind == HopfKind::Generic, "spec is not generic up to the bound")?;
            let (a, d) = torsion()?;
            let cone = |v: &[i64]| {
                let all_pos = v.iter().all(|x| *x >= 1);
                let nonneg_with_zero = v.iter().all(|x| *x >= 0) && v.contains(&0);
                (all_pos || nonneg_with_zero) && a.pow_int(v.iter().sum()).approx_eq(&d, HOPF_TOL)
            };
            find_exponent(&bundle.beta, &spec.alpha, bound, ExponentDomain::Integers, &cone)
        }
    };
    let holds = witness.is_none();
    Ok(VanishingVerdict {
        variant,
        criterion_holds: holds,
        h0_vanishes: holds,
        h1_vanishes: holds,
        reason: if holds {
            format!("criterion holds up to bound {bound}")
        } else {
            "criterion fails".into()
        },
        witness,
        bound,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckItem {
    pub condition: String,
    pub pass: bool,
    pub witness: Option<Vec<i64>>,
    pub bound: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checklist {
    pub pass: bool,
    pub items: Vec<CheckItem>,
}

/// Arithmetic hypotheses for linearizing a neighborhood of a Hopf manifold
/// with normal bundle `beta`, scanned for `m = 1..=n_v`.
pub fn hopf_precheck<C: Coeff>(bundle: &FlatBundle<C>, spec: &HopfSpec<C>, n_v: u32, bound: u32) -> Checklist {
    let mut items = Vec::new();
    let class = classify_hopf(spec, bound);
    items.push(CheckItem {
        condition: "alpha generic".into(),
        pass: class.kind == HopfKind::Generic,
        witness: class
            .relation
            .map(|r| r.lhs.iter().zip(&r.rhs).map(|(a, b)| *a as i64 - *b as i64).collect()),
        bound,
    });
    items.push(CheckItem {
        condition: "|beta| != 1".into(),
        pass: (bundle.beta.abs_f64() - 1.0).abs() > HOPF_TOL,
        witness: None,
        bound,
    });
    let mut not_member = |condition: String, target: C| {
        let m = member_of(&target, &spec.alpha, bound);
        items.push(CheckItem {
            condition,
            pass: !m.member,
            witness: m.witness,
            bound,
        });
    };
    let beta = &bundle.beta;
    for m in 1..=n_v as i64 {
        not_member(format!("beta^{m} not in Delta"), beta.pow_int(m));
    }
    for (i, a) in spec.alpha.iter().enumerate() {
        not_member(format!("beta*alpha_{} not in Delta", i + 1), beta.mul_ref(a));
        not_member(format!("beta/alpha_{} not in Delta", i + 1), beta.mul_ref(&a.inv()));
    }
    for m in 1..=n_v as i64 {
        for (i, a) in spec.alpha.iter().enumerate() {
            not_member(format!("beta^-{m}*alpha_{} not in Delta", i + 1), beta.pow_int(-m).mul_ref(a));
        }
    }
    Checklist {
        pass: items.iter().all(|c| c.pass),
        items,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonomialCount {
    pub count: usize,
    pub bound: u32,
    pub first: Option<Vec<i64>>,
}

/// Counts monomial sections `z^v`, `v` in `N^n` with `|v|_1 <= bound`,
/// i.e. solutions of `alpha^v = beta`.
pub fn h0_monomial_oracle<C: Coeff>(bundle: &FlatBundle<C>, spec: &HopfSpec<C>, bound: u32) -> Result<MonomialCount> {
    if spec.is_jordan() {
        return Err(HopfError::Mismatch("monomial sections need a diagonal contraction".into()));
    }
    let n = spec.n();
    let mut count = 0;
    let mut first = None;
    let mut v = vec![0i64; n];
    fn rec<C: Coeff>(
        i: usize,
        left: i64,
        v: &mut Vec<i64>,
        alpha: &[C],
        beta: &C,
        count: &mut usize,
        first: &mut Option<Vec<i64>>,
    ) {
        if i == v.len() {
            if alpha_power(alpha, v).approx_eq(beta, HOPF_TOL) {
                *count += 1;
                if first.is_none() {
                    *first = Some(v.clone());
                }
            }
            return;
        }
        for x in 0..=left {
            v[i] = x;
            rec(i + 1, left - x, v, alpha, beta, count, first);
        }
        v[i] = 0;
    }
    rec(0, bound as i64, &mut v, &spec.alpha, &bundle.beta, &mut count, &mut first);
    Ok(MonomialCount { count, bound, first })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ExactComplex;
    use num_complex::Complex64;

    type E = ExactComplex;

    fn r(n: i64, d: i64) -> E {
        E::from_ratio(n, d)
    }

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn classification_examples() {
        let s = HopfSpec::diagonal(vec![r(1, 2), r(1, 2), r(1, 2)]).unwrap();
        assert_eq!(classify_hopf(&s, 3).kind, HopfKind::Classical);
        let s = HopfSpec::diagonal(vec![r(1, 4), r(1, 2)]).unwrap();
        let k = classify_hopf(&s, 2);
        assert_eq!(k.kind, HopfKind::Diagonal);
        assert_eq!(k.relation, Some(Relation { lhs: vec![1, 0], rhs: vec![0, 2] }));
        let s = HopfSpec::diagonal(vec![c(0.3), c(0.53)]).unwrap();
        assert_eq!(classify_hopf(&s, 12).kind, HopfKind::Generic);
    }

    #[test]
    fn membership_examples() {
        let s = HopfSpec::diagonal(vec![c(0.3), c(0.5)]).unwrap();
        assert_eq!(delta_membership(&c(0.3), &s, 1, 4).witness, Some(vec![1, 0]));
        assert_eq!(delta_membership(&c(0.15), &s, 1, 4).witness, Some(vec![1, 1]));
        assert!(!delta_membership(&c(0.2), &s, 1, 12).member);
        assert_eq!(delta_membership(&c(1.0), &s, 1, 0).witness, Some(vec![0, 0]));
        let s = HopfSpec::diagonal(vec![r(3, 10), r(1, 2)]).unwrap();
        assert_eq!(delta_membership(&r(10, 3), &s, 2, 4).witness, Some(vec![-2, 0]));
    }

    #[test]
    fn vanishing_examples() {
        let s = HopfSpec::diagonal(vec![c(0.3), c(0.53)]).unwrap();
        let b = FlatBundle::new(Complex64::from_polar(1.7, 0.4)).unwrap();
        let v = vanishing_predicate(&b, &s, Variant::MallGeneric, 10).unwrap();
        assert!(v.h0_vanishes && v.h1_vanishes);
        let b = FlatBundle::new(c(0.3 * 0.53)).unwrap();
        let v = vanishing_predicate(&b, &s, Variant::MallGeneric, 10).unwrap();
        assert!(!v.criterion_holds);
        assert!(vanishing_predicate(&b, &s, Variant::Classical, 10).is_err());
    }

    #[test]
    fn zhou_first_variant() {
        let a = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 5.0);
        let mu = c(0.4);
        let spec = HopfSpec {
            alpha: vec![mu; 3],
            jordan_overdiag: vec![false; 2],
            torsion: Some(Torsion { m: 5, a }),
        };
        spec.validate().unwrap();
        let b = FlatBundle {
            beta: mu.powi(3),
            d_char: Some(a.powi(3)),
        };
        let v = vanishing_predicate(&b, &spec, Variant::Zhou1, 10).unwrap();
        assert_eq!(v.witness, Some(vec![3]));
        let b = FlatBundle {
            beta: mu.powi(3),
            d_char: Some(a.powi(2)),
        };
        assert!(vanishing_predicate(&b, &spec, Variant::Zhou1, 10).unwrap().criterion_holds);
    }

    #[test]
    fn precheck_examples() {
        let s = HopfSpec::diagonal(vec![c(0.3), c(0.53)]).unwrap();
        let b = FlatBundle::new(Complex64::from_polar(2.3, 1.1)).unwrap();
        assert!(hopf_precheck(&b, &s, 4, 8).pass);
        let b = FlatBundle::new(c(0.53 / 0.3)).unwrap();
        let cl = hopf_precheck(&b, &s, 4, 8);
        assert!(!cl.pass);
        let item = cl.items.iter().find(|i| i.condition == "beta*alpha_1 not in Delta").unwrap();
        assert_eq!(item.witness, Some(vec![0, 1]));
    }

    #[test]
    fn monomial_oracle() {
        let s = HopfSpec::diagonal(vec![r(1, 3), r(1, 2)]).unwrap();
        let b = FlatBundle::new(r(1, 9)).unwrap();
        assert_eq!(h0_monomial_oracle(&b, &s, 4).unwrap().first, Some(vec![2, 0]));
        let b = FlatBundle::new(E::one()).unwrap();
        assert_eq!(h0_monomial_oracle(&b, &s, 4).unwrap().count, 1);
        let b = FlatBundle::new(r(1, 5)).unwrap();
        assert_eq!(h0_monomial_oracle(&b, &s, 6).unwrap().count, 0);
    }
}
