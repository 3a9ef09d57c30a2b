use serde::{Deserialize, Serialize};

use super::{DeckMap, DeckPerturbation, LinearizerError, Result};
use crate::scalar::Coeff;
use crate::series::{substitute_shift, Series, SeriesDoc, SeriesVec};
use crate::small_divisors::{solve_family, CochainSystem, DiophantineReport, Direction, ScanMode};

#[derive(Debug, Clone, PartialEq)]
pub struct LinearizationResult<C: Coeff> {
    pub mode: ScanMode,
    pub direction: Direction,
    pub n_v: u32,
    /// `phi` for the full problem (`n_h + d` components) or `phi^v`
    /// (`d` components).
    pub phi: SeriesVec<C>,
    /// Largest coefficient of the conjugacy defect at each v-degree.
    pub residual_per_degree: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearizationDoc {
    pub mode: ScanMode,
    pub direction: Direction,
    #[serde(rename = "N_v")]
    pub n_v: u32,
    pub residual_per_degree: Vec<f64>,
    pub phi: Vec<SeriesDoc>,
}

impl<C: Coeff> LinearizationResult<C> {
    pub fn max_residual(&self) -> f64 {
        self.residual_per_degree.iter().copied().fold(0.0, f64::max)
    }

    pub fn to_doc(&self) -> LinearizationDoc {
        LinearizationDoc {
            mode: self.mode,
            direction: self.direction,
            n_v: self.n_v,
            residual_per_degree: self.residual_per_degree.clone(),
            phi: self.phi.iter().map(Series::to_doc).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("serializable")
    }
}

fn oriented<C: Coeff>(pert: &DeckPerturbation<C>, dir: Direction) -> Result<DeckPerturbation<C>> {
    match dir {
        Direction::Forward => Ok(pert.clone()),
        Direction::Inverse => pert.inverse(),
    }
}

fn zeros<C: Coeff>(proto: &Series<C>, k: usize) -> SeriesVec<C> {
    (0..k).map(|_| Series::zero(proto.n_h(), proto.n_v(), proto.trunc())).collect()
}

/// Solves `Phi o hat tau_i = tau_i o Phi` with `Phi = Id + phi` degree by
/// degree; the inverse direction works with the inverse decks.
pub fn full_linearize<C: Coeff>(
    pert: &DeckPerturbation<C>,
    report: &DiophantineReport,
    dir: Direction,
) -> Result<LinearizationResult<C>> {
    let n_v = pert.trunc().n_v;
    let (nh, d) = (pert.decks.n_h(), pert.decks.d());
    let work = oriented(pert, dir)?;
    let trunc = pert.trunc();
    let mut phi = zeros(&pert.tau_star[0][0], nh + d);
    for m in 2..=n_v {
        let (ph, pv) = phi.split_at(nh);
        let rhs = work
            .tau_star
            .iter()
            .map(|ti| {
                ti.iter()
                    .map(|c| Ok(substitute_shift(c, ph, pv, m)?.homogeneous_part(m).with_trunc(trunc)?))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let sys = CochainSystem::new(rhs, ScanMode::Full, dir, pert.decks.clone())?;
        let g = solve_family(&sys, report)?;
        phi = phi.iter().zip(&g).map(|(a, b)| a.add(b)).collect::<std::result::Result<_, _>>()?;
    }
    let residual_per_degree = conjugacy_residual(pert, &phi, ScanMode::Full)?;
    Ok(LinearizationResult {
        mode: ScanMode::Full,
        direction: dir,
        n_v,
        phi,
        residual_per_degree,
    })
}

/// Solves for `phi^v` such that `Id + (0, phi^v)` conjugates each deck to
/// one whose vertical part is linear.
pub fn vertical_linearize<C: Coeff>(
    pert: &DeckPerturbation<C>,
    report: &DiophantineReport,
    dir: Direction,
) -> Result<LinearizationResult<C>> {
    let n_v = pert.trunc().n_v;
    let nh = pert.decks.n_h();
    let d = pert.decks.d();
    let work = oriented(pert, dir)?;
    let proto = &pert.tau_star[0][0];
    let zh = zeros(proto, nh);
    let zv = zeros(proto, d);
    let mut phi = zeros(proto, d);
    for m in 2..=n_v {
        let mut rhs = Vec::with_capacity(work.decks.q());
        for i in 0..work.decks.q() {
            let ti = &work.tau_star[i];
            let (t, mu) = (&work.decks.lambda[i], &work.decks.mu[i]);
            let delta = ti[..nh]
                .iter()
                .zip(t)
                .map(|(c, ti)| Ok(substitute_shift(c, &zh, &phi, m)?.scale(&ti.inv())))
                .collect::<Result<Vec<_>>>()?;
            let mut fi = Vec::with_capacity(d);
            for j in 0..d {
                let first = substitute_shift(&ti[nh + j], &zh, &phi, m)?;
                let scaled = phi[j].scale_vars(t, mu);
                let second = substitute_shift(&scaled, &delta, &zv, m)?.sub(&scaled)?;
                fi.push(first.sub(&second)?.homogeneous_part(m).with_trunc(pert.trunc())?);
            }
            rhs.push(fi);
        }
        let sys = CochainSystem::new(rhs, ScanMode::Vertical, dir, pert.decks.clone())?;
        let g = solve_family(&sys, report)?;
        phi = phi.iter().zip(&g).map(|(a, b)| a.add(b)).collect::<std::result::Result<_, _>>()?;
    }
    let residual_per_degree = conjugacy_residual(pert, &phi, ScanMode::Vertical)?;
    Ok(LinearizationResult {
        mode: ScanMode::Vertical,
        direction: dir,
        n_v,
        phi,
        residual_per_degree,
    })
}

/// Per-degree defect of `Phi o sigma_i - tau_i o Phi`, recomputed by
/// composing maps. In full mode `sigma_i` is the linear deck; in vertical
/// mode it is `(T_i h + tau*^h_i(h, v + phi^v), M_i v)`.
pub fn conjugacy_residual<C: Coeff>(pert: &DeckPerturbation<C>, phi: &[Series<C>], mode: ScanMode) -> Result<Vec<f64>> {
    let n_v = pert.trunc().n_v;
    let (nh, d) = (pert.decks.n_h(), pert.decks.d());
    let proto = &pert.tau_star[0][0];
    let full_phi: SeriesVec<C> = match mode {
        ScanMode::Full if phi.len() == nh + d => phi.to_vec(),
        ScanMode::Vertical if phi.len() == d => zeros(proto, nh).into_iter().chain(phi.iter().cloned()).collect(),
        _ => return Err(LinearizerError::Dimensions("phi does not match the mode".into())),
    };
    let conj = DeckMap::near_identity(full_phi)?;
    let mut out = vec![0.0f64; n_v as usize + 1];
    for i in 0..pert.decks.q() {
        let sigma = match mode {
            ScanMode::Full => pert.linear_deck(i),
            ScanMode::Vertical => {
                let zh = zeros(proto, nh);
                let h_part = pert.tau_star[i][..nh]
                    .iter()
                    .map(|c| Ok(substitute_shift(c, &zh, phi, n_v)?))
                    .collect::<Result<Vec<_>>>()?;
                DeckMap {
                    t: pert.decks.lambda[i].clone(),
                    m: pert.decks.mu[i].clone(),
                    pert: h_part.into_iter().chain(zeros(proto, d)).collect(),
                }
            }
        };
        let lhs = conj.compose(&sigma, n_v)?;
        let rhs = pert.deck(i).compose(&conj, n_v)?;
        for (o, x) in out.iter_mut().zip(lhs.pert_difference(&rhs, n_v)?) {
            *o = o.max(x);
        }
    }
    Ok(out)
}
