use std::collections::HashMap;

use super::ops::check_len;
use super::{Result, Series, SeriesError, Trunc};
use crate::scalar::Coeff;

/// Generalized binomial coefficient `binom(p, k)` for integer `p`.
pub(crate) fn binom_int(p: i64, k: u32) -> i128 {
    let mut b: i128 = 1;
    for t in 0..k as i64 {
        b = b * (p - t) as i128 / (t + 1) as i128;
    }
    b
}

/// `f(h + phi_h, v + phi_v)` truncated at v-degree `n_v`.
///
/// Powers `(h_i + phi_i)^p` with `p < 0` are expanded as
/// `h_i^p (1 + phi_i / h_i)^p`; the expansion is finite because every
/// argument has v-order at least 2. The result keeps `f`'s Laurent budget
/// and fails if a term outside it survives.
pub fn substitute_shift<C: Coeff>(
    f: &Series<C>,
    phi_h: &[Series<C>],
    phi_v: &[Series<C>],
    n_v: u32,
) -> Result<Series<C>> {
    let (nh, nv) = (f.n_h(), f.n_v());
    check_len(nh, phi_h.len())?;
    check_len(nv, phi_v.len())?;
    for s in phi_h.iter().chain(phi_v) {
        f.check_dims(s)?;
        if let Some(ord) = s.v_order() {
            if ord < 2 {
                return Err(SeriesError::VOrder(ord));
            }
        }
    }
    let work = Trunc::open(n_v);
    let one = Series::constant(nh, nv, work, C::one());

    // u_i = phi_i / h_i and its powers up to the last one that can matter.
    let kmax = n_v / 2;
    let mut u_pows: Vec<Vec<Series<C>>> = Vec::with_capacity(nh);
    for (i, phi) in phi_h.iter().enumerate() {
        let u = phi.with_trunc(work)?.shift_h(i, -1)?;
        let mut pows = vec![one.clone()];
        if !u.is_zero() {
            for k in 1..=kmax {
                let next = pows[k as usize - 1].mul(&u)?;
                if next.is_zero() {
                    break;
                }
                pows.push(next);
            }
        }
        u_pows.push(pows);
    }
    let mut w: Vec<Series<C>> = Vec::with_capacity(nv);
    for (j, psi) in phi_v.iter().enumerate() {
        w.push(Series::v_coord(nh, nv, work, j).add(&psi.with_trunc(work)?)?);
    }

    let mut h_cache: Vec<HashMap<i32, Series<C>>> = vec![HashMap::new(); nh];
    let mut v_cache: Vec<Vec<Series<C>>> = (0..nv).map(|_| vec![one.clone()]).collect();

    let mut out = Series::zero(nh, nv, Trunc::new(f.trunc().n_h, n_v));
    for (key, c) in f.terms() {
        if key.q_deg() > n_v {
            continue;
        }
        let mut prod = one.scale(c);
        for i in 0..nh {
            let p = key.p[i];
            if p == 0 || u_pows[i].len() == 1 {
                continue;
            }
            let factor = h_cache[i]
                .entry(p)
                .or_insert_with(|| binomial_sum(&u_pows[i], p, &one));
            prod = prod.mul(factor)?;
        }
        for j in 0..nv {
            let qj = key.q[j] as usize;
            while v_cache[j].len() <= qj {
                let next = v_cache[j].last().unwrap().mul(&w[j])?;
                v_cache[j].push(next);
            }
            prod = prod.mul(&v_cache[j][qj])?;
        }
        for (k, a) in prod.into_terms() {
            let mut kk = k;
            for (x, y) in kk.p.iter_mut().zip(&key.p) {
                *x += y;
            }
            out.add_term(kk, a)?;
        }
    }
    out.cleanup();
    Ok(out)
}

fn binomial_sum<C: Coeff>(pows: &[Series<C>], p: i32, one: &Series<C>) -> Series<C> {
    let mut acc = one.clone();
    for (k, u) in pows.iter().enumerate().skip(1) {
        let b = binom_int(p as i64, k as u32);
        if b == 0 {
            break;
        }
        acc = acc
            .add(&u.scale(&C::from_i64(b as i64)))
            .expect("same bounds");
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ExactComplex;
    use crate::series::ExponentKey;

    type S = Series<ExactComplex>;

    fn c(n: i64) -> ExactComplex {
        ExactComplex::from_i64(n)
    }

    #[test]
    fn binomials() {
        assert_eq!(binom_int(5, 2), 10);
        assert_eq!(binom_int(2, 3), 0);
        assert_eq!(binom_int(-1, 3), -1);
        assert_eq!(binom_int(-2, 2), 3);
    }

    #[test]
    fn identity_substitution() {
        let t = Trunc::new(3, 5);
        let f = S::from_terms(
            1,
            1,
            t,
            [
                (ExponentKey::new(vec![-2], vec![2]), c(3)),
                (ExponentKey::new(vec![1], vec![0]), c(-1)),
            ],
        )
        .unwrap();
        let z = S::zero(1, 1, t);
        let g = substitute_shift(&f, &[z.clone()], &[z], 5).unwrap();
        assert_eq!(g, f);
    }

    #[test]
    fn linear_target() {
        let t = Trunc::new(2, 5);
        let f = S::v_coord(1, 1, t, 0);
        let phi = S::monomial(1, 1, t, vec![0], vec![2], c(1)).unwrap();
        let g = substitute_shift(&f, &[S::zero(1, 1, t)], &[phi], 5).unwrap();
        assert_eq!(g.coeff_at(&[0], &[1]), c(1));
        assert_eq!(g.coeff_at(&[0], &[2]), c(1));
        assert_eq!(g.len(), 2);
    }

    #[test]
    fn negative_power_geometric_expansion() {
        let t = Trunc::new(2, 6);
        let f = S::monomial(1, 1, t, vec![-1], vec![2], c(1)).unwrap();
        let phi_h = S::monomial(1, 1, t, vec![1], vec![2], c(1)).unwrap();
        let g = substitute_shift(&f, &[phi_h], &[S::zero(1, 1, t)], 6).unwrap();
        assert_eq!(g.len(), 3);
        assert_eq!(g.coeff_at(&[-1], &[2]), c(1));
        assert_eq!(g.coeff_at(&[-1], &[4]), c(-1));
        assert_eq!(g.coeff_at(&[-1], &[6]), c(1));
    }

    #[test]
    fn rejects_low_order_argument() {
        let t = Trunc::new(2, 4);
        let f = S::v_coord(1, 1, t, 0);
        let bad = S::v_coord(1, 1, t, 0);
        let r = substitute_shift(&f, &[S::zero(1, 1, t)], &[bad], 4);
        assert!(matches!(r, Err(SeriesError::VOrder(1))));
    }

    #[test]
    fn laurent_budget_enforced() {
        let t = Trunc::new(1, 4);
        let f = S::monomial(1, 1, t, vec![1], vec![0], c(1)).unwrap();
        let phi_h = S::monomial(1, 1, Trunc::new(3, 4), vec![3], vec![2], c(1)).unwrap();
        let r = substitute_shift(&f, &[phi_h], &[S::zero(1, 1, t)], 4);
        assert!(matches!(r, Err(SeriesError::LaurentOverflow { .. })));
    }
}
