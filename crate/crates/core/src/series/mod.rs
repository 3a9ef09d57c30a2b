//! Sparse formal series, Laurent in the horizontal block `h` and Taylor in
//! the vertical block `v`.

mod grid;
mod json;
mod ops;
mod subst;

pub use grid::{cauchy_bound_check, grid_sup_norm, grid_sup_norm_vec, CauchyReport, GridSpec};
pub use json::{vec_from_json, vec_to_json, SeriesDoc, TermRecord};
pub use ops::{add_vec, monomial_value, ring_op, sub_vec, RingOp};
pub use subst::substitute_shift;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::scalar::Coeff;

#[derive(Debug, thiserror::Error)]
pub enum SeriesError {
    #[error("dimension mismatch: expected (n_h, n_v) = {expected:?}, found {found:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("vector length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("multiplication needs a positive v-truncation bound")]
    ZeroTruncation,
    #[error("Laurent exponent {p:?} has |P| = {abs} above the budget N_h = {bound}")]
    LaurentOverflow { p: Vec<i32>, abs: u32, bound: u32 },
    #[error("substitution argument has v-order {0}, at least 2 is required")]
    VOrder(u32),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("coefficient mode mismatch: document is `{found}`, expected `{expected}`")]
    ModeMismatch { expected: String, found: String },
    #[error("malformed series document: {0}")]
    Malformed(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, SeriesError>;

/// A monomial `h^P v^Q`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExponentKey {
    pub p: Vec<i32>,
    pub q: Vec<u32>,
}

impl ExponentKey {
    pub fn new(p: Vec<i32>, q: Vec<u32>) -> Self {
        ExponentKey { p, q }
    }

    pub fn p_abs(&self) -> u32 {
        self.p.iter().map(|x| x.unsigned_abs()).sum()
    }

    pub fn q_deg(&self) -> u32 {
        self.q.iter().sum()
    }

    pub fn mul(&self, other: &ExponentKey) -> ExponentKey {
        ExponentKey {
            p: self.p.iter().zip(&other.p).map(|(a, b)| a + b).collect(),
            q: self.q.iter().zip(&other.q).map(|(a, b)| a + b).collect(),
        }
    }
}

/// Truncation bounds: `|P| <= n_h` and `|Q| <= n_v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trunc {
    pub n_h: u32,
    pub n_v: u32,
}

impl Trunc {
    pub fn new(n_h: u32, n_v: u32) -> Self {
        Trunc { n_h, n_v }
    }

    pub fn min(self, other: Trunc) -> Trunc {
        Trunc {
            n_h: self.n_h.min(other.n_h),
            n_v: self.n_v.min(other.n_v),
        }
    }

    /// Internal working bound: Laurent spread unlimited.
    pub(crate) fn open(n_v: u32) -> Trunc {
        Trunc { n_h: u32::MAX, n_v }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series<C> {
    n_h: usize,
    n_v: usize,
    trunc: Trunc,
    terms: BTreeMap<ExponentKey, C>,
}

/// Vector-valued series, one scalar series per component.
pub type SeriesVec<C> = Vec<Series<C>>;

impl<C: Coeff> Series<C> {
    pub fn zero(n_h: usize, n_v: usize, trunc: Trunc) -> Self {
        Series {
            n_h,
            n_v,
            trunc,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms<I>(n_h: usize, n_v: usize, trunc: Trunc, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (ExponentKey, C)>,
    {
        let mut s = Series::zero(n_h, n_v, trunc);
        for (k, c) in terms {
            s.add_term(k, c)?;
        }
        Ok(s)
    }

    pub fn monomial(n_h: usize, n_v: usize, trunc: Trunc, p: Vec<i32>, q: Vec<u32>, c: C) -> Result<Self> {
        Series::from_terms(n_h, n_v, trunc, [(ExponentKey::new(p, q), c)])
    }

    pub fn constant(n_h: usize, n_v: usize, trunc: Trunc, c: C) -> Self {
        let mut s = Series::zero(n_h, n_v, trunc);
        if !c.is_zero() {
            s.terms
                .insert(ExponentKey::new(vec![0; n_h], vec![0; n_v]), c);
        }
        s
    }

    /// The coordinate function `v_j`.
    pub fn v_coord(n_h: usize, n_v: usize, trunc: Trunc, j: usize) -> Self {
        let mut q = vec![0; n_v];
        q[j] = 1;
        let mut s = Series::zero(n_h, n_v, trunc);
        if trunc.n_v >= 1 {
            s.terms.insert(ExponentKey::new(vec![0; n_h], q), C::one());
        }
        s
    }

    /// The coordinate function `h_i`.
    pub fn h_coord(n_h: usize, n_v: usize, trunc: Trunc, i: usize) -> Result<Self> {
        let mut p = vec![0; n_h];
        p[i] = 1;
        Series::monomial(n_h, n_v, trunc, p, vec![0; n_v], C::one())
    }

    pub fn n_h(&self) -> usize {
        self.n_h
    }

    pub fn n_v(&self) -> usize {
        self.n_v
    }

    pub fn trunc(&self) -> Trunc {
        self.trunc
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentKey, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, key: &ExponentKey) -> Option<&C> {
        self.terms.get(key)
    }

    pub fn coeff_at(&self, p: &[i32], q: &[u32]) -> C {
        self.terms
            .get(&ExponentKey::new(p.to_vec(), q.to_vec()))
            .cloned()
            .unwrap_or_else(C::zero)
    }

    /// Adds `c h^P v^Q`. Terms with `|Q| > N_v` are dropped; `|P| > N_h` is
    /// an error.
    pub fn add_term(&mut self, key: ExponentKey, c: C) -> Result<()> {
        if key.p.len() != self.n_h || key.q.len() != self.n_v {
            return Err(SeriesError::DimensionMismatch {
                expected: (self.n_h, self.n_v),
                found: (key.p.len(), key.q.len()),
            });
        }
        if key.q_deg() > self.trunc.n_v || c.is_zero() {
            return Ok(());
        }
        let abs = key.p_abs();
        if abs > self.trunc.n_h {
            return Err(SeriesError::LaurentOverflow {
                p: key.p,
                abs,
                bound: self.trunc.n_h,
            });
        }
        self.accumulate(key, c);
        Ok(())
    }

    /// Unchecked accumulation for keys already known to fit.
    pub(crate) fn accumulate(&mut self, key: ExponentKey, c: C) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let s = e.get().add_ref(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    /// Same series under new bounds.
    pub fn with_trunc(&self, trunc: Trunc) -> Result<Self> {
        let mut s = Series::zero(self.n_h, self.n_v, trunc);
        for (k, c) in &self.terms {
            s.add_term(k.clone(), c.clone())?;
        }
        Ok(s)
    }

    /// Smallest `|Q|` among stored terms.
    pub fn v_order(&self) -> Option<u32> {
        self.terms.keys().map(ExponentKey::q_deg).min()
    }

    pub fn max_p_abs(&self) -> u32 {
        self.terms.keys().map(ExponentKey::p_abs).max().unwrap_or(0)
    }

    pub fn max_q_deg(&self) -> u32 {
        self.terms.keys().map(ExponentKey::q_deg).max().unwrap_or(0)
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.abs_f64()).fold(0.0, f64::max)
    }

    /// Drops float noise below the relative cleanup threshold.
    pub fn cleanup(&mut self) {
        let scale = self.max_abs();
        self.terms.retain(|_, c| !c.negligible(scale));
    }

    pub(crate) fn check_dims(&self, other: &Series<C>) -> Result<()> {
        if self.n_h != other.n_h || self.n_v != other.n_v {
            return Err(SeriesError::DimensionMismatch {
                expected: (self.n_h, self.n_v),
                found: (other.n_h, other.n_v),
            });
        }
        Ok(())
    }

    pub(crate) fn into_terms(self) -> BTreeMap<ExponentKey, C> {
        self.terms
    }

    pub(crate) fn from_map(n_h: usize, n_v: usize, trunc: Trunc, terms: BTreeMap<ExponentKey, C>) -> Self {
        Series { n_h, n_v, trunc, terms }
    }

    /// Converts coefficients into another field.
    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Series<D> {
        let mut terms = BTreeMap::new();
        for (k, c) in &self.terms {
            let d = f(c);
            if !d.is_zero() {
                terms.insert(k.clone(), d);
            }
        }
        let mut s = Series::from_map(self.n_h, self.n_v, self.trunc, terms);
        s.cleanup();
        s
    }

    /// Float image of this series.
    pub fn to_float(&self) -> Series<num_complex::Complex64> {
        self.map_coeffs(|c| c.to_c64())
    }
}

/// Zero vector series.
pub fn zero_vec<C: Coeff>(len: usize, n_h: usize, n_v: usize, trunc: Trunc) -> SeriesVec<C> {
    (0..len).map(|_| Series::zero(n_h, n_v, trunc)).collect()
}

/// Largest coefficient modulus across a vector series.
pub fn max_abs_vec<C: Coeff>(f: &[Series<C>]) -> f64 {
    f.iter().map(Series::max_abs).fold(0.0, f64::max)
}
