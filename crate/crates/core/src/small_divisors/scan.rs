use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{best_deck, Result, ScanMode, SmallDivisorError, Target};
use crate::scalar::{Coeff, Mode};
use crate::series::ExponentKey;
use crate::toroidal::DeckLinearData;

/// Float divisors at or below this modulus count as resonances.
pub const RESONANCE_TOL: f64 = 1e-12;

const TAU_LADDER: std::ops::RangeInclusive<u32> = 1..=10;
const D_SHRINK: f64 = 1.0 - 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DivisorWitness {
    #[serde(rename = "P")]
    pub p: Vec<i32>,
    #[serde(rename = "Q")]
    pub q: Vec<u32>,
    pub target: Target,
    pub l: usize,
    pub divisor: f64,
}

impl DivisorWitness {
    pub fn size(&self) -> u32 {
        self.p.iter().map(|x| x.unsigned_abs()).sum::<u32>() + self.q.iter().sum::<u32>()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiophantineReport {
    pub mode: ScanMode,
    #[serde(rename = "N")]
    pub scan_bound: u32,
    pub points: usize,
    pub min_divisor: f64,
    pub argmin: Option<DivisorWitness>,
    #[serde(rename = "D")]
    pub d: Option<f64>,
    pub tau: Option<f64>,
    pub resonances: Vec<DivisorWitness>,
    pub violations: Vec<DivisorWitness>,
}

impl DiophantineReport {
    pub fn passed(&self) -> bool {
        self.resonances.is_empty() && self.violations.is_empty() && self.d.is_some()
    }

    /// `divisor > D / size^tau` for the fitted constants.
    pub fn bound_holds(&self, divisor: f64, size: u32) -> bool {
        match (self.d, self.tau) {
            (Some(d), Some(t)) => divisor * (size as f64).powf(t) > d,
            _ => false,
        }
    }
}

/// All `P` in `Z^n` with `|P|_1 <= max_abs`, in lexicographic order.
pub fn laurent_exponents(n: usize, max_abs: u32) -> Vec<Vec<i32>> {
    fn rec(n: usize, budget: i32, prefix: &mut Vec<i32>, out: &mut Vec<Vec<i32>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for x in -budget..=budget {
            prefix.push(x);
            rec(n - 1, budget - x.abs(), prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, max_abs as i32, &mut Vec::new(), &mut out);
    out
}

/// All `Q` in `N^d` with `|Q| = deg`, in lexicographic order.
pub fn taylor_exponents(d: usize, deg: u32) -> Vec<Vec<u32>> {
    fn rec(d: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if d == 1 {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for x in 0..=left {
            prefix.push(x);
            rec(d - 1, left - x, prefix, out);
            prefix.pop();
        }
    }
    if d == 0 {
        return if deg == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    rec(d, deg, &mut Vec::new(), &mut out);
    out
}

fn resonant<C: Coeff>(m: &C, modulus: f64) -> bool {
    match C::MODE {
        Mode::Exact => m.is_zero(),
        Mode::Float => modulus <= RESONANCE_TOL,
    }
}

/// Scans every `(P, Q)` with `|P| + |Q| <= N` and `|Q| > 1`, recording the
/// max-over-decks divisor per target, and fits `(D, tau)`.
pub fn diophantine_scan<C: Coeff>(decks: &DeckLinearData<C>, n: u32, mode: ScanMode) -> Result<DiophantineReport> {
    if n < 2 {
        return Err(SmallDivisorError::Argument("scan bound must be at least 2".into()));
    }
    let targets = mode.targets(decks.n_h(), decks.d());
    let keys: Vec<ExponentKey> = (2..=n)
        .flat_map(|qd| {
            let ps = laurent_exponents(decks.n_h(), n - qd);
            taylor_exponents(decks.d(), qd)
                .into_iter()
                .flat_map(move |q| ps.clone().into_iter().map(move |p| ExponentKey::new(p, q.clone())))
        })
        .collect();
    let per_key: Vec<Vec<(DivisorWitness, bool)>> = keys
        .par_iter()
        .map(|key| {
            targets
                .iter()
                .map(|&t| {
                    let (l, m, a) = best_deck(decks, key, t);
                    let w = DivisorWitness {
                        p: key.p.clone(),
                        q: key.q.clone(),
                        target: t,
                        l,
                        divisor: a,
                    };
                    (w, resonant(&m, a))
                })
                .collect()
        })
        .collect();
    let all: Vec<(DivisorWitness, bool)> = per_key.into_iter().flatten().collect();
    let mut argmin: Option<&DivisorWitness> = None;
    for (w, _) in &all {
        if argmin.is_none_or(|b| w.divisor < b.divisor) {
            argmin = Some(w);
        }
    }
    let resonances: Vec<DivisorWitness> = all.iter().filter(|(_, r)| *r).map(|(w, _)| w.clone()).collect();
    let min_divisor = argmin.map_or(f64::INFINITY, |w| w.divisor);
    let mut report = DiophantineReport {
        mode,
        scan_bound: n,
        points: all.len(),
        min_divisor,
        argmin: argmin.cloned(),
        d: None,
        tau: None,
        resonances,
        violations: Vec::new(),
    };
    if !report.resonances.is_empty() || all.is_empty() {
        return Ok(report);
    }
    let tau = fit_tau(&all, n);
    let d = all
        .iter()
        .map(|(w, _)| w.divisor * (w.size() as f64).powf(tau))
        .fold(f64::INFINITY, f64::min)
        * D_SHRINK;
    report.d = Some(d);
    report.tau = Some(tau);
    report.violations = all
        .iter()
        .filter(|(w, _)| !report.bound_holds(w.divisor, w.size()))
        .map(|(w, _)| w.clone())
        .collect();
    Ok(report)
}

/// Least-squares slope of the log lower envelope, rounded up to the ladder.
fn fit_tau(all: &[(DivisorWitness, bool)], n: u32) -> f64 {
    let mut env = vec![f64::INFINITY; n as usize + 1];
    for (w, _) in all {
        let s = w.size() as usize;
        env[s] = env[s].min(w.divisor);
    }
    let pts: Vec<(f64, f64)> = env
        .iter()
        .enumerate()
        .filter(|(_, v)| v.is_finite() && **v > 0.0)
        .map(|(s, v)| ((s as f64).ln(), v.ln()))
        .collect();
    let slope = if pts.len() < 2 {
        0.0
    } else {
        let k = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        if sxx > 0.0 {
            sxy / sxx
        } else {
            0.0
        }
    };
    let want = -slope;
    TAU_LADDER
        .map(f64::from)
        .find(|&t| t >= want)
        .unwrap_or(*TAU_LADDER.end() as f64)
}
