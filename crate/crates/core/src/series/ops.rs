use std::collections::BTreeMap;

use super::{ExponentKey, Result, Series, SeriesError};
use crate::scalar::Coeff;

/// Ring operation selector for [`ring_op`].
#[derive(Debug, Clone)]
pub enum RingOp<C> {
    Add,
    Mul,
    Scale(C),
}

/// `f + g`, `f * g` or `c * f` (for `Scale`, `g` is ignored).
pub fn ring_op<C: Coeff>(f: &Series<C>, g: &Series<C>, kind: RingOp<C>) -> Result<Series<C>> {
    match kind {
        RingOp::Add => f.add(g),
        RingOp::Mul => f.mul(g),
        RingOp::Scale(c) => Ok(f.scale(&c)),
    }
}

impl<C: Coeff> Series<C> {
    pub fn add(&self, other: &Series<C>) -> Result<Series<C>> {
        self.check_dims(other)?;
        let trunc = self.trunc.min(other.trunc);
        let mut out = self.with_trunc(trunc)?;
        for (k, c) in other.terms() {
            out.add_term(k.clone(), c.clone())?;
        }
        out.cleanup();
        Ok(out)
    }

    pub fn sub(&self, other: &Series<C>) -> Result<Series<C>> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Series<C> {
        let terms = self
            .terms()
            .map(|(k, c)| (k.clone(), -c.clone()))
            .collect();
        Series::from_map(self.n_h(), self.n_v(), self.trunc(), terms)
    }

    pub fn scale(&self, c: &C) -> Series<C> {
        if c.is_zero() {
            return Series::zero(self.n_h(), self.n_v(), self.trunc());
        }
        let terms = self
            .terms()
            .map(|(k, a)| (k.clone(), a.mul_ref(c)))
            .collect();
        let mut s = Series::from_map(self.n_h(), self.n_v(), self.trunc(), terms);
        s.cleanup();
        s
    }

    /// Product truncated at the tighter of the two bounds.
    pub fn mul(&self, other: &Series<C>) -> Result<Series<C>> {
        self.check_dims(other)?;
        let trunc = self.trunc.min(other.trunc);
        if trunc.n_v == 0 {
            return Err(SeriesError::ZeroTruncation);
        }
        let mut out = Series::zero(self.n_h(), self.n_v(), trunc);
        let mut by_deg: BTreeMap<u32, Vec<(&ExponentKey, &C)>> = BTreeMap::new();
        for (k, c) in other.terms() {
            by_deg.entry(k.q_deg()).or_default().push((k, c));
        }
        for (ka, ca) in self.terms() {
            let da = ka.q_deg();
            if da > trunc.n_v {
                continue;
            }
            for (_, group) in by_deg.range(..=trunc.n_v - da) {
                for (kb, cb) in group {
                    let key = ka.mul(kb);
                    let abs = key.p_abs();
                    if abs > trunc.n_h {
                        return Err(SeriesError::LaurentOverflow {
                            p: key.p,
                            abs,
                            bound: trunc.n_h,
                        });
                    }
                    out.accumulate(key, ca.mul_ref(cb));
                }
            }
        }
        out.cleanup();
        Ok(out)
    }

    /// `f^k` under this series' bounds.
    pub fn pow(&self, k: u32) -> Result<Series<C>> {
        let mut acc = Series::constant(self.n_h(), self.n_v(), self.trunc(), C::one());
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// `[f]_k`: the terms with `|Q| = k`.
    pub fn homogeneous_part(&self, k: u32) -> Series<C> {
        self.filter_deg(|d| d == k)
    }

    /// Terms with `lo <= |Q| <= hi`.
    pub fn degree_range(&self, lo: u32, hi: u32) -> Series<C> {
        self.filter_deg(|d| d >= lo && d <= hi)
    }

    fn filter_deg(&self, keep: impl Fn(u32) -> bool) -> Series<C> {
        let terms = self
            .terms()
            .filter(|(k, _)| keep(k.q_deg()))
            .map(|(k, c)| (k.clone(), c.clone()))
            .collect();
        Series::from_map(self.n_h(), self.n_v(), self.trunc(), terms)
    }

    /// Multiplies by `h_i^delta`.
    pub fn shift_h(&self, i: usize, delta: i32) -> Result<Series<C>> {
        let mut out = Series::zero(self.n_h(), self.n_v(), self.trunc());
        for (k, c) in self.terms() {
            let mut key = k.clone();
            key.p[i] += delta;
            out.add_term(key, c.clone())?;
        }
        Ok(out)
    }

    /// Multiplies by the monomial `h^P`.
    pub fn shift_p(&self, p: &[i32]) -> Result<Series<C>> {
        let mut out = Series::zero(self.n_h(), self.n_v(), self.trunc());
        for (k, c) in self.terms() {
            let mut key = k.clone();
            for (a, b) in key.p.iter_mut().zip(p) {
                *a += b;
            }
            out.add_term(key, c.clone())?;
        }
        Ok(out)
    }

    /// `f(diag(t) h, diag(m) v)`: each coefficient picks up `t^P m^Q`.
    pub fn scale_vars(&self, t: &[C], m: &[C]) -> Series<C> {
        let terms = self
            .terms()
            .map(|(k, c)| (k.clone(), c.mul_ref(&monomial_value(t, m, k))))
            .collect();
        let mut s = Series::from_map(self.n_h(), self.n_v(), self.trunc(), terms);
        s.cleanup();
        s
    }

    /// Coefficientwise conjugate with inverted Laurent signs; on the unit
    /// torus in `h` (with no `v` dependence) this is the pointwise
    /// conjugate.
    pub fn conj_reflect(&self) -> Series<C> {
        let terms = self
            .terms()
            .map(|(k, c)| {
                let key = ExponentKey::new(k.p.iter().map(|x| -x).collect(), k.q.clone());
                (key, c.conj())
            })
            .collect();
        Series::from_map(self.n_h(), self.n_v(), self.trunc(), terms)
    }
}

/// `t^P m^Q`.
pub fn monomial_value<C: Coeff>(t: &[C], m: &[C], key: &ExponentKey) -> C {
    let mut v = C::one();
    for (ti, &pi) in t.iter().zip(&key.p) {
        if pi != 0 {
            v = v.mul_ref(&ti.pow_int(pi as i64));
        }
    }
    for (mj, &qj) in m.iter().zip(&key.q) {
        if qj != 0 {
            v = v.mul_ref(&mj.pow_int(qj as i64));
        }
    }
    v
}

/// Componentwise vector helpers.
pub fn add_vec<C: Coeff>(a: &[Series<C>], b: &[Series<C>]) -> Result<Vec<Series<C>>> {
    check_len(a.len(), b.len())?;
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

pub fn sub_vec<C: Coeff>(a: &[Series<C>], b: &[Series<C>]) -> Result<Vec<Series<C>>> {
    check_len(a.len(), b.len())?;
    a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()
}

pub(crate) fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(SeriesError::LengthMismatch { expected, found });
    }
    Ok(())
}
