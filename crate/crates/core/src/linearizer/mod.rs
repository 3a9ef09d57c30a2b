//! Order-by-order linearization of commuting deck systems and majorant
//! certificates for the resulting series.

mod majorant;
mod solve;

pub use majorant::{
    certify_domination, eta_sequence, fit_constants, majorant_functional_solve, DominationLadder, DominationReport,
    EtaSequence, MajorantCert, MajorantConstants,
};
pub use solve::{conjugacy_residual, full_linearize, vertical_linearize, LinearizationResult};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::scalar::{Coeff, ExactComplex};
use crate::series::{substitute_shift, ExponentKey, Series, SeriesDoc, SeriesError, SeriesVec, Trunc};
use crate::small_divisors::SmallDivisorError;
use crate::toroidal::{DeckLinearData, DeckLinearDoc, ToroidalError};

#[derive(Debug, thiserror::Error)]
pub enum LinearizerError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    SmallDivisor(#[from] SmallDivisorError),
    #[error(transparent)]
    Toroidal(#[from] ToroidalError),
    #[error("invalid dimensions: {0}")]
    Dimensions(String),
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("majorant coefficient {value:e} at degree {degree} is negative")]
    NegativeCoefficient { degree: usize, value: f64 },
}

pub type Result<T> = std::result::Result<T, LinearizerError>;

/// Laurent budget `(N_v + 1)(max|P| + 1)` for iterations up to degree `n_v`.
pub fn laurent_budget(n_v: u32, max_p: u32) -> u32 {
    (n_v + 1) * (max_p + 1)
}

/// A map `(h, v) -> (t h, m v) + pert(h, v)` with `pert` of v-order at least
/// 2; `pert` holds the `n_h` horizontal components followed by the `d`
/// vertical ones.
#[derive(Debug, Clone, PartialEq)]
pub struct DeckMap<C: Coeff> {
    pub t: Vec<C>,
    pub m: Vec<C>,
    pub pert: SeriesVec<C>,
}

impl<C: Coeff> DeckMap<C> {
    pub fn linear(t: Vec<C>, m: Vec<C>, trunc: Trunc) -> Self {
        let (nh, d) = (t.len(), m.len());
        let pert = (0..nh + d).map(|_| Series::zero(nh, d, trunc)).collect();
        DeckMap { t, m, pert }
    }

    pub fn identity(n_h: usize, d: usize, trunc: Trunc) -> Self {
        DeckMap::linear(vec![C::one(); n_h], vec![C::one(); d], trunc)
    }

    /// `Id + phi`.
    pub fn near_identity(phi: SeriesVec<C>) -> Result<Self> {
        let first = phi.first().ok_or_else(|| LinearizerError::Dimensions("empty map".into()))?;
        let (nh, d) = (first.n_h(), first.n_v());
        if phi.len() != nh + d {
            return Err(LinearizerError::Dimensions(format!("map needs {} components", nh + d)));
        }
        Ok(DeckMap {
            t: vec![C::one(); nh],
            m: vec![C::one(); d],
            pert: phi,
        })
    }

    pub fn n_h(&self) -> usize {
        self.t.len()
    }

    pub fn d(&self) -> usize {
        self.m.len()
    }

    fn eigen(&self, k: usize) -> &C {
        if k < self.n_h() {
            &self.t[k]
        } else {
            &self.m[k - self.n_h()]
        }
    }

    /// Componentwise product of the linear part with a vector series.
    fn lin_apply(&self, b: &[Series<C>], invert: bool) -> SeriesVec<C> {
        b.iter()
            .enumerate()
            .map(|(k, s)| {
                let e = self.eigen(k);
                s.scale(&if invert { e.inv() } else { e.clone() })
            })
            .collect()
    }

    /// `a(t h + shift_h, m v + shift_v)` for a scalar series `a`.
    fn eval_after(&self, a: &Series<C>, shift: &[Series<C>], n_v: u32) -> Result<Series<C>> {
        let scaled = a.scale_vars(&self.t, &self.m);
        let pre = self.lin_apply(shift, true);
        let (sh, sv) = pre.split_at(self.n_h());
        Ok(substitute_shift(&scaled, sh, sv, n_v)?)
    }

    /// `self o g`.
    pub fn compose(&self, g: &DeckMap<C>, n_v: u32) -> Result<DeckMap<C>> {
        if self.n_h() != g.n_h() || self.d() != g.d() {
            return Err(LinearizerError::Dimensions("composed maps differ in dimension".into()));
        }
        let outer = self.lin_apply(&g.pert, false);
        let pert = self
            .pert
            .iter()
            .zip(&outer)
            .map(|(a, o)| Ok(g.eval_after(a, &g.pert, n_v)?.add(o)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(DeckMap {
            t: self.t.iter().zip(&g.t).map(|(a, b)| a.mul_ref(b)).collect(),
            m: self.m.iter().zip(&g.m).map(|(a, b)| a.mul_ref(b)).collect(),
            pert,
        })
    }

    /// Inverse through v-degree `n_v`, from the fixed point
    /// `b = -L^{-1} a(L^{-1} y + b)`.
    pub fn inverse(&self, n_v: u32) -> Result<DeckMap<C>> {
        let inv_lin = DeckMap::linear(
            self.t.iter().map(Coeff::inv).collect(),
            self.m.iter().map(Coeff::inv).collect(),
            self.pert[0].trunc(),
        );
        let mut b: SeriesVec<C> = inv_lin.pert.clone();
        for _ in 0..n_v {
            let next = self
                .pert
                .iter()
                .map(|a| inv_lin.eval_after(a, &b, n_v))
                .collect::<Result<Vec<_>>>()?;
            b = inv_lin.lin_apply(&next, false).iter().map(Series::neg).collect();
        }
        Ok(DeckMap {
            t: inv_lin.t,
            m: inv_lin.m,
            pert: b,
        })
    }

    /// Largest coefficient modulus of `self.pert - other.pert`, per v-degree.
    pub fn pert_difference(&self, other: &DeckMap<C>, n_v: u32) -> Result<Vec<f64>> {
        let mut out = vec![0.0; n_v as usize + 1];
        for (a, b) in self.pert.iter().zip(&other.pert) {
            let diff = a.sub(b)?;
            for (k, c) in diff.terms() {
                let deg = k.q_deg() as usize;
                if deg < out.len() {
                    out[deg] = f64::max(out[deg], c.abs_f64());
                }
            }
        }
        Ok(out)
    }

    pub fn to_float(&self) -> DeckMap<num_complex::Complex64> {
        DeckMap {
            t: self.t.iter().map(Coeff::to_c64).collect(),
            m: self.m.iter().map(Coeff::to_c64).collect(),
            pert: self.pert.iter().map(Series::to_float).collect(),
        }
    }
}

/// `q` commuting deck transformations given as linear parts plus
/// perturbations `tau*_i` of v-order at least 2.
#[derive(Debug, Clone, PartialEq)]
pub struct DeckPerturbation<C: Coeff> {
    pub decks: DeckLinearData<C>,
    pub tau_star: Vec<SeriesVec<C>>,
}

impl<C: Coeff> DeckPerturbation<C> {
    pub fn new(decks: DeckLinearData<C>, tau_star: Vec<SeriesVec<C>>) -> Result<Self> {
        let p = DeckPerturbation { decks, tau_star };
        p.check()?;
        Ok(p)
    }

    fn check(&self) -> Result<()> {
        let (q, nh, d) = (self.decks.q(), self.decks.n_h(), self.decks.d());
        if self.tau_star.len() != q {
            return Err(LinearizerError::Dimensions(format!("need {q} perturbations")));
        }
        for s in self.tau_star.iter().flatten() {
            if s.n_h() != nh || s.n_v() != d {
                return Err(LinearizerError::Dimensions("perturbation variables differ from eigenvalues".into()));
            }
            if let Some(o) = s.v_order() {
                if o < 2 {
                    return Err(SeriesError::VOrder(o).into());
                }
            }
        }
        if self.tau_star.iter().any(|t| t.len() != nh + d) {
            return Err(LinearizerError::Dimensions(format!("perturbations need {} components", nh + d)));
        }
        Ok(())
    }

    pub fn trunc(&self) -> Trunc {
        self.tau_star[0][0].trunc()
    }

    pub fn deck(&self, i: usize) -> DeckMap<C> {
        DeckMap {
            t: self.decks.lambda[i].clone(),
            m: self.decks.mu[i].clone(),
            pert: self.tau_star[i].clone(),
        }
    }

    pub fn linear_deck(&self, i: usize) -> DeckMap<C> {
        DeckMap::linear(self.decks.lambda[i].clone(), self.decks.mu[i].clone(), self.trunc())
    }

    /// Perturbations of the inverse decks (`tau*_{i,-}`).
    pub fn inverse(&self) -> Result<DeckPerturbation<C>> {
        let n_v = self.trunc().n_v;
        let maps = (0..self.decks.q())
            .map(|i| self.deck(i).inverse(n_v))
            .collect::<Result<Vec<_>>>()?;
        Ok(DeckPerturbation {
            decks: crate::small_divisors::inverted(&self.decks),
            tau_star: maps.into_iter().map(|m| m.pert).collect(),
        })
    }

    pub fn to_float(&self) -> DeckPerturbation<num_complex::Complex64> {
        DeckPerturbation {
            decks: self.decks.to_float(),
            tau_star: self
                .tau_star
                .iter()
                .map(|v| v.iter().map(Series::to_float).collect())
                .collect(),
        }
    }
}

/// JSON form of a deck system: eigenvalues plus `tau*_i` component by
/// component.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DeckPerturbationDoc {
    #[serde(flatten)]
    pub decks: DeckLinearDoc,
    pub tau_star: Vec<Vec<SeriesDoc>>,
}

impl<C: Coeff> DeckPerturbation<C> {
    pub fn to_doc(&self) -> DeckPerturbationDoc {
        DeckPerturbationDoc {
            decks: self.decks.to_doc(),
            tau_star: self
                .tau_star
                .iter()
                .map(|v| v.iter().map(Series::to_doc).collect())
                .collect(),
        }
    }

    pub fn from_doc(doc: &DeckPerturbationDoc) -> Result<Self> {
        let decks = DeckLinearData::from_doc(&doc.decks)?;
        let tau_star = doc
            .tau_star
            .iter()
            .map(|v| v.iter().map(Series::from_doc).collect::<std::result::Result<Vec<_>, _>>())
            .collect::<std::result::Result<Vec<_>, _>>()?;
        DeckPerturbation::new(decks, tau_star)
    }
}

/// Largest coefficient of `tau_i o tau_j - tau_j o tau_i` over all pairs.
pub fn check_commutation<C: Coeff>(pert: &DeckPerturbation<C>) -> Result<f64> {
    let n_v = pert.trunc().n_v;
    let q = pert.decks.q();
    let mut worst: f64 = 0.0;
    for i in 0..q {
        for j in i + 1..q {
            let ij = pert.deck(i).compose(&pert.deck(j), n_v)?;
            let ji = pert.deck(j).compose(&pert.deck(i), n_v)?;
            for x in ij.pert_difference(&ji, n_v)? {
                worst = worst.max(x);
            }
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    /// `tau_i = Phi0 o hat tau_i o Phi0^{-1}` with `Phi0` reported.
    Coboundary,
    /// Same construction with a denser hidden `Phi0`.
    Generic,
    /// `tau_i = hat tau_i`.
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PhiShape {
    Mixed,
    Vertical,
    Horizontal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub q: usize,
    pub n_h: usize,
    pub d: usize,
    pub n_v: u32,
    pub profile: Profile,
    pub shape: PhiShape,
    /// Coefficients of `phi0` are `amplitude * (a + b i) / c` with small
    /// integers `a, b, c`.
    pub amplitude: (i64, i64),
}

impl GeneratorSpec {
    pub fn new(q: usize, n_h: usize, d: usize, n_v: u32) -> Self {
        GeneratorSpec {
            q,
            n_h,
            d,
            n_v,
            profile: Profile::Coboundary,
            shape: PhiShape::Mixed,
            amplitude: (1, 1),
        }
    }
}

pub struct GeneratedDecks {
    pub pert: DeckPerturbation<ExactComplex>,
    /// Ground truth `phi0` (coboundary profile only).
    pub phi0: Option<SeriesVec<ExactComplex>>,
}

const UNITS: [(i64, i64, i64); 6] = [(3, 4, 5), (5, 12, 13), (8, 15, 17), (7, 24, 25), (20, 21, 29), (12, 35, 37)];
const PRIMES: [i64; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

fn unit(k: usize) -> ExactComplex {
    let (a, b, c) = UNITS[k % UNITS.len()];
    ExactComplex::from_parts(ExactComplex::from_ratio(a, c), ExactComplex::from_ratio(b, c))
}

/// Non-resonant rational eigenvalues: `lambda` on the unit circle (not
/// roots of unity), `mu` with moduli `1/p` for distinct primes `p`.
pub fn sample_linear_parts(rng: &mut ChaCha8Rng, q: usize, n_h: usize, d: usize) -> DeckLinearData<ExactComplex> {
    let lambda = (0..q)
        .map(|_| (0..n_h).map(|_| unit(rng.gen_range(0..UNITS.len()))).collect())
        .collect();
    let mu = (0..q)
        .map(|_| {
            (0..d)
                .map(|k| unit(rng.gen_range(0..UNITS.len())).mul_ref(&ExactComplex::from_ratio(1, PRIMES[k % PRIMES.len()])))
                .collect()
        })
        .collect();
    DeckLinearData::new(lambda, mu).expect("nonzero eigenvalues")
}

fn random_phi(rng: &mut ChaCha8Rng, spec: &GeneratorSpec, trunc: Trunc, density: f64) -> Result<SeriesVec<ExactComplex>> {
    let (nh, d) = (spec.n_h, spec.d);
    let max_deg = spec.n_v.min(3);
    let amp = ExactComplex::from_ratio(spec.amplitude.0, spec.amplitude.1);
    let ps = crate::small_divisors::laurent_exponents(nh, 1);
    let mut out = Vec::with_capacity(nh + d);
    for comp in 0..nh + d {
        let mut s = Series::zero(nh, d, trunc);
        let active = match spec.shape {
            PhiShape::Mixed => true,
            PhiShape::Vertical => comp >= nh,
            PhiShape::Horizontal => comp < nh,
        };
        if active {
            for deg in 2..=max_deg {
                for qv in crate::small_divisors::taylor_exponents(d, deg) {
                    for p in &ps {
                        if rng.gen::<f64>() >= density {
                            continue;
                        }
                        let (a, b, c) = (rng.gen_range(-3..=3), rng.gen_range(-3..=3), rng.gen_range(2..=6));
                        let coeff = ExactComplex::from_parts(ExactComplex::from_ratio(a, c), ExactComplex::from_ratio(b, c));
                        s.add_term(ExponentKey::new(p.clone(), qv.clone()), coeff.mul_ref(&amp))?;
                    }
                }
            }
            // keep every active component nonzero so recovery tests are meaningful
            if s.is_zero() {
                let mut qv = vec![0; d];
                qv[comp.saturating_sub(nh) % d] = 2;
                s.add_term(ExponentKey::new(vec![0; nh], qv), amp.clone())?;
            }
        }
        out.push(s);
    }
    Ok(out)
}

/// Commuting decks with known structure, deterministic in `seed`.
pub fn generate_commuting_decks(seed: u64, spec: &GeneratorSpec) -> Result<GeneratedDecks> {
    if spec.q == 0 || spec.n_h == 0 || spec.d == 0 {
        return Err(LinearizerError::Dimensions("q, n_h and d must be positive".into()));
    }
    if spec.n_v < 2 {
        return Err(LinearizerError::Argument("N_v must be at least 2 to carry phi0".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let decks = sample_linear_parts(&mut rng, spec.q, spec.n_h, spec.d);
    let trunc = Trunc::new(laurent_budget(spec.n_v, 1), spec.n_v);
    let lin = |i: usize| DeckMap::linear(decks.lambda[i].clone(), decks.mu[i].clone(), trunc);
    let (phi0, hidden) = match spec.profile {
        Profile::Linear => {
            let pert = DeckPerturbation::new(decks.clone(), (0..spec.q).map(|i| lin(i).pert).collect())?;
            return Ok(GeneratedDecks {
                pert,
                phi0: Some(DeckMap::<ExactComplex>::identity(spec.n_h, spec.d, trunc).pert),
            });
        }
        Profile::Coboundary => (random_phi(&mut rng, spec, trunc, 0.5)?, false),
        Profile::Generic => (random_phi(&mut rng, spec, trunc, 0.9)?, true),
    };
    let conj = DeckMap::near_identity(phi0.clone())?;
    let conj_inv = conj.inverse(spec.n_v)?;
    let tau_star = (0..spec.q)
        .map(|i| Ok(conj.compose(&lin(i), spec.n_v)?.compose(&conj_inv, spec.n_v)?.pert))
        .collect::<Result<Vec<_>>>()?;
    Ok(GeneratedDecks {
        pert: DeckPerturbation::new(decks, tau_star)?,
        phi0: if hidden { None } else { Some(phi0) },
    })
}
