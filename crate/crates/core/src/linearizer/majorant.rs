use serde::{Deserialize, Serialize};

use super::{DeckPerturbation, LinearizerError, Result};
use crate::scalar::Coeff;
use crate::series::{grid_sup_norm_vec, GridSpec, Series};
use crate::small_divisors::{bound_verify, solve_family, CochainSystem, DiophantineReport, Direction, ScanMode};
use crate::toroidal::DeckLinearData;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MajorantConstants {
    pub c1: f64,
    pub eta_margin: f64,
    pub tau: f64,
    pub nu: f64,
    pub r_prime: f64,
    pub c: f64,
    pub c_prime: f64,
    pub c_second: f64,
    /// Denominator `M` of the horizontal majorant.
    pub m_den: f64,
    pub n_h: usize,
    pub d: usize,
    pub q: usize,
}

impl MajorantConstants {
    pub fn new(n_h: usize, d: usize, q: usize) -> Self {
        MajorantConstants {
            c1: 1.0,
            eta_margin: 0.25,
            tau: 1.0,
            nu: (n_h + d + 1) as f64,
            r_prime: 1.0,
            c: 1.0,
            c_prime: 1.0,
            c_second: 1.0,
            m_den: 1.0,
            n_h,
            d,
            q,
        }
    }

    fn validate(&self) -> Result<()> {
        let pos = [self.c1, self.eta_margin, self.c, self.c_prime, self.c_second, self.m_den];
        if pos.iter().any(|x| !(*x > 0.0 && x.is_finite())) {
            return Err(LinearizerError::Argument("majorant constants must be positive".into()));
        }
        if !(self.tau >= 0.0) || !(self.nu >= 0.0) || !(self.r_prime >= 0.0) {
            return Err(LinearizerError::Argument("tau, nu and R' must be nonnegative".into()));
        }
        if self.d == 0 || self.q == 0 {
            return Err(LinearizerError::Dimensions("d and q must be positive".into()));
        }
        Ok(())
    }
}

/// `eta_m` in the log domain for `m = 1..=M`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EtaSequence {
    pub log_eta: Vec<f64>,
    /// `ln D` for the smallest `D` with `eta_m <= D^m` over the computed range.
    pub log_d: f64,
}

impl EtaSequence {
    pub fn log(&self, m: usize) -> f64 {
        self.log_eta[m - 1]
    }

    pub fn eta(&self, m: usize) -> f64 {
        self.log(m).exp()
    }

    pub fn d_growth(&self) -> f64 {
        self.log_d.exp()
    }

    pub fn growth_holds(&self) -> bool {
        self.log_eta
            .iter()
            .enumerate()
            .all(|(k, l)| *l <= (k + 1) as f64 * self.log_d)
    }
}

/// `eta_1 = 1`, `eta_m = C1 eta^-(tau+nu) 2^(m(tau+nu)) max prod eta_{m_i}`
/// over `m_1 + ... + m_p + s = m` with `1 <= m_i < m`.
pub fn eta_sequence(c1: f64, eta_margin: f64, tau: f64, nu: f64, m_max: usize) -> Result<EtaSequence> {
    if !(c1 > 0.0) || !(eta_margin > 0.0) || !(tau + nu >= 0.0) || m_max == 0 {
        return Err(LinearizerError::Argument("eta sequence needs C1, eta > 0 and M >= 1".into()));
    }
    let e = tau + nu;
    let log_k = c1.ln() - e * eta_margin.ln();
    let mut log_eta = vec![0.0];
    // best[s]: largest log-product of parts already allowed with sum <= s
    let mut best = vec![0.0f64; m_max + 1];
    for m in 2..=m_max {
        let part = m - 1;
        let val = log_eta[part - 1];
        for s in part..=m_max {
            let cand = best[s - part] + val;
            if cand > best[s] {
                best[s] = cand;
            }
        }
        log_eta.push(log_k + m as f64 * e * std::f64::consts::LN_2 + best[m]);
    }
    let log_d = log_eta
        .iter()
        .enumerate()
        .map(|(k, l)| l / (k + 1) as f64)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(EtaSequence { log_eta, log_d })
}

type Poly = Vec<f64>;

fn p_mul(a: &[f64], b: &[f64]) -> Poly {
    let n = a.len();
    let mut out = vec![0.0; n];
    for (i, x) in a.iter().enumerate() {
        if *x == 0.0 {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n - i) {
            out[i + j] += x * y;
        }
    }
    out
}

fn p_axpy(acc: &mut [f64], k: f64, x: &[f64]) {
    for (a, b) in acc.iter_mut().zip(x) {
        *a += k * b;
    }
}

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `sum_{k >= from} weight(k) x^k` for `x` without constant term.
fn power_sum(x: &[f64], from: usize, weight: impl Fn(usize) -> f64) -> Poly {
    let n = x.len();
    let mut acc = vec![0.0; n];
    let mut pw = x.to_vec();
    for k in 1..n {
        if k >= from {
            p_axpy(&mut acc, weight(k), &pw);
        }
        pw = p_mul(&pw, x);
        if pw.iter().all(|c| *c == 0.0) {
            break;
        }
    }
    acc
}

/// `G(t, U) = sum_{|Q| >= 2} R'^|Q| (t + U)^|Q|`.
fn g_of(u: &[f64], c: &MajorantConstants) -> Poly {
    let mut base = u.to_vec();
    if base.len() > 1 {
        base[1] += 1.0;
    }
    power_sum(&base, 2, |k| binom(k + c.d - 1, c.d - 1) * c.r_prime.powi(k as i32))
}

/// `(1 - x)^-N - 1`.
fn h_of(x: &[f64], n: usize) -> Poly {
    if n == 0 {
        return vec![0.0; x.len()];
    }
    power_sum(x, 1, |k| binom(n + k - 1, k))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MajorantCert {
    pub mode: ScanMode,
    pub constants: MajorantConstants,
    pub eta: EtaSequence,
    /// Coefficients `A_0..=A_M`.
    pub a: Vec<f64>,
    /// Coefficients of every `B^{+-e_i}` (they solve the same equation).
    pub b: Vec<f64>,
    /// Whether the majorant solution is identically zero.
    pub trivial: bool,
}

impl MajorantCert {
    pub fn m_max(&self) -> usize {
        self.a.len() - 1
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

fn nonnegative(v: &[f64]) -> Result<()> {
    match v.iter().enumerate().find(|(_, x)| **x < 0.0 || x.is_nan()) {
        Some((degree, value)) => Err(LinearizerError::NegativeCoefficient { degree, value: *value }),
        None => Ok(()),
    }
}

/// Solves the majorant functional equations degree by degree up to `M`.
pub fn majorant_functional_solve(mode: ScanMode, c: &MajorantConstants, m_max: usize) -> Result<MajorantCert> {
    c.validate()?;
    if m_max < 2 {
        return Err(LinearizerError::Argument("M must be at least 2".into()));
    }
    let eta = eta_sequence(c.c1, c.eta_margin, c.tau, c.nu, m_max)?;
    let len = m_max + 1;
    let mut a = vec![0.0; len];
    let mut b = vec![0.0; len];
    match mode {
        ScanMode::Vertical => {
            let k = c.c / c.c_second.powf(c.nu);
            let lin = |a: &[f64], b: &[f64]| {
                let mut s = a.to_vec();
                p_axpy(&mut s, 2.0 * c.q as f64, b);
                s
            };
            let rhs = |u: &[f64], a: &[f64], b: &[f64]| {
                let g = g_of(u, c);
                let x: Poly = g.iter().map(|v| v * c.c_prime / c.c_second).collect();
                let mut out = g;
                p_axpy(&mut out, k, &p_mul(&lin(a, b), &h_of(&x, c.n_h)));
                out
            };
            for m in 2..len {
                let (ra, rb) = (rhs(&a, &a, &b), rhs(&b, &a, &b));
                a[m] = ra[m];
                b[m] = rb[m];
            }
            nonnegative(&a)?;
            nonnegative(&b)?;
        }
        ScanMode::Full => {
            for m in 2..len {
                let g = g_of(&a, c);
                let x: Poly = a.iter().map(|v| v / c.m_den).collect();
                let h = power_sum(&x, 2, |k| binom(k + c.n_h.max(1) - 1, c.n_h.max(1) - 1));
                a[m] = p_mul(&g, &h)[m];
            }
            nonnegative(&a)?;
            b.clear();
        }
    }
    let trivial = a.iter().all(|x| *x == 0.0);
    Ok(MajorantCert {
        mode,
        constants: c.clone(),
        eta,
        a,
        b,
        trivial,
    })
}

/// Sampling ladder for the shrinking domains: `r_m = r_1 exp(-sum_{k<m}
/// 2^-k)`, `eps_m = eps_1 (1 - (eta / kappa) sum_{k<m} 2^-k)`, and the h
/// log-radius half-width shrinks with `eps_m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominationLadder {
    pub r1: f64,
    pub eps1: f64,
    pub theta1: f64,
    pub kappa: f64,
    pub angles: usize,
}

impl DominationLadder {
    pub fn new(r1: f64, eps1: f64) -> Self {
        DominationLadder {
            r1,
            eps1,
            theta1: 0.1,
            kappa: 1.0,
            angles: 12,
        }
    }

    fn geometric(m: usize) -> f64 {
        (1..m).map(|k| 0.5f64.powi(k as i32)).sum()
    }

    pub fn r(&self, m: usize) -> f64 {
        self.r1 * (-Self::geometric(m)).exp()
    }

    pub fn eps(&self, m: usize, eta_margin: f64) -> f64 {
        self.eps1 * (1.0 - eta_margin / self.kappa * Self::geometric(m))
    }

    /// Grid covering the translates of level `m` by `hat tau_i^k`,
    /// `|k| <= reach`.
    pub fn grid<C: Coeff>(&self, m: usize, eta_margin: f64, decks: &DeckLinearData<C>, reach: i32) -> GridSpec {
        let theta = self.theta1 * self.eps(m, eta_margin) / self.eps1;
        let (nh, d) = (decks.n_h(), decks.d());
        let h_radii = (0..nh)
            .map(|i| {
                let mut rs = Vec::new();
                for l in 0..decks.q() {
                    let lam = decks.lambda[l][i].abs_f64();
                    for k in -reach..=reach {
                        for base in [(-theta).exp(), 1.0, theta.exp()] {
                            rs.push(base * lam.powi(k));
                        }
                    }
                }
                rs.sort_by(f64::total_cmp);
                rs.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * b.abs());
                rs
            })
            .collect();
        let v_radii = (0..d)
            .map(|j| {
                let stretch = (0..decks.q())
                    .map(|l| {
                        let mu = decks.mu[l][j].abs_f64();
                        mu.max(1.0 / mu).powi(reach)
                    })
                    .fold(1.0, f64::max);
                self.r(m) * stretch
            })
            .collect();
        GridSpec {
            h_radii,
            v_radii,
            h_angles: self.angles,
            v_angles: self.angles,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeCheck {
    pub degree: usize,
    pub sup: f64,
    pub log_bound: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominationReport {
    pub pass: bool,
    pub first_failure: Option<usize>,
    pub a_checks: Vec<DegreeCheck>,
    pub b_checks: Vec<DegreeCheck>,
}

fn check_degree(degree: usize, sup: f64, coeff: f64, log_eta: f64) -> DegreeCheck {
    let log_bound = if coeff > 0.0 { coeff.ln() + log_eta } else { f64::NEG_INFINITY };
    let pass = sup == 0.0 || sup.ln() <= log_bound + 1e-12;
    DegreeCheck {
        degree,
        sup,
        log_bound,
        pass,
    }
}

/// Checks `sup |[phi]_m| <= A_m eta_m` on the level-`m` grid with the
/// `hat tau_i^{+-1}` translates, and `<= B_m eta_m` with `+-2` when the
/// certificate carries `B`.
pub fn certify_domination<C: Coeff>(
    phi: &[Series<C>],
    decks: &DeckLinearData<C>,
    cert: &MajorantCert,
    ladder: &DominationLadder,
) -> Result<DominationReport> {
    let top = phi.iter().map(Series::max_q_deg).max().unwrap_or(0) as usize;
    let top = top.min(cert.m_max());
    let eta_margin = cert.constants.eta_margin;
    let mut a_checks = Vec::new();
    let mut b_checks = Vec::new();
    for m in 2..=top {
        let part: Vec<Series<C>> = phi.iter().map(|s| s.homogeneous_part(m as u32)).collect();
        let sup = grid_sup_norm_vec(&part, &ladder.grid(m, eta_margin, decks, 1))?;
        a_checks.push(check_degree(m, sup, cert.a[m], cert.eta.log(m)));
        if !cert.b.is_empty() {
            let sup = grid_sup_norm_vec(&part, &ladder.grid(m, eta_margin, decks, 2))?;
            b_checks.push(check_degree(m, sup, cert.b[m], cert.eta.log(m)));
        }
    }
    let first_failure = a_checks
        .iter()
        .chain(&b_checks)
        .filter(|c| !c.pass)
        .map(|c| c.degree)
        .min();
    Ok(DominationReport {
        pass: first_failure.is_none(),
        first_failure,
        a_checks,
        b_checks,
    })
}

/// Constants fitted to a deck system: `C1` from the degree-2 solution
/// (floored at 1), `tau` from the scan, `R'` from the coefficients of the
/// perturbation and `eta = kappa / 4`.
pub fn fit_constants<C: Coeff>(
    pert: &DeckPerturbation<C>,
    report: &DiophantineReport,
    mode: ScanMode,
    grid: &GridSpec,
    kappa: f64,
) -> Result<MajorantConstants> {
    let (nh, d, q) = (pert.decks.n_h(), pert.decks.d(), pert.decks.q());
    let mut c = MajorantConstants::new(nh, d, q);
    let skip = if mode == ScanMode::Vertical { nh } else { 0 };
    let f: Vec<Vec<Series<C>>> = pert
        .tau_star
        .iter()
        .map(|t| t[skip..].iter().map(|s| s.homogeneous_part(2)).collect())
        .collect();
    let sys = CochainSystem::new(f.clone(), mode, Direction::Forward, pert.decks.clone())?;
    let g = solve_family(&sys, report)?;
    let shrunk = GridSpec {
        v_radii: grid.v_radii.iter().map(|r| r * 0.5f64.exp().recip()).collect(),
        ..grid.clone()
    };
    let b = bound_verify(&g, &f, report, grid, &shrunk, 0.5, 0.5, None)?;
    c.c1 = if b.c1.is_finite() { b.c1.max(1.0) } else { 1.0 };
    c.tau = report.tau.unwrap_or(1.0);
    let mut r: f64 = 0.0;
    for s in pert.tau_star.iter().flatten() {
        let mut per_q = std::collections::BTreeMap::new();
        for (k, v) in s.terms() {
            *per_q.entry(k.q.clone()).or_insert(0.0) += v.abs_f64();
        }
        for (qv, sum) in per_q {
            let deg: u32 = qv.iter().sum();
            r = r.max(sum.powf(1.0 / deg as f64));
        }
    }
    c.r_prime = r;
    c.eta_margin = kappa / 4.0;
    Ok(c)
}
