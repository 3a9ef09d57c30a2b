//! Period data of toroidal groups, standard coordinates, Reinhardt domains
//! and the geometric constants κ₀ and η.

mod domain;
mod hull;
mod kappa;

pub use domain::{domain_membership, point_from_coords, standard_real_coords, DomainSpec};
pub use hull::{convex_extension_eta, eta_for_slab, hull_contains, ETA_DEPTH};
pub use kappa::{kappa0_estimate, Kappa0Estimate, Slab, KAPPA_GRID};

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::scalar::{Coeff, DecimalComplex};

/// Absolute tolerance for real linear algebra on unit-normalized data.
pub const LINALG_TOL: f64 = 1e-9;

#[derive(Debug, thiserror::Error)]
pub enum ToroidalError {
    #[error("invalid dimensions: {0}")]
    Dimensions(String),
    #[error("the lattice columns are not linearly independent over the reals")]
    Dependent,
    #[error("slab directions are linearly dependent")]
    DegenerateSlab,
    #[error("convex hull is degenerate")]
    DegenerateHull,
    #[error("invalid domain: {0}")]
    Domain(String),
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("cannot parse matrix entry: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, ToroidalError>;

/// Lattice data of a toroidal group in toroidal coordinates.
///
/// With `N = n - a - b` and `m = N - q`, the lattice is spanned over the
/// reals by the columns of `[[I_m, R1, R2, R3], [0, I_q, P0, P1]]`. `R3` is
/// complex: its imaginary part is what makes the `2N` columns independent.
#[derive(Debug, Clone, PartialEq)]
pub struct ToroidalSpec {
    pub n: usize,
    pub a: usize,
    pub b: usize,
    pub q: usize,
    pub r1: Vec<Vec<f64>>,
    pub r2: Vec<Vec<f64>>,
    pub r3: Vec<Vec<Complex64>>,
    pub p0: Vec<Vec<Complex64>>,
    pub p1: Vec<Vec<Complex64>>,
}

/// JSON form of [`ToroidalSpec`] with decimal-string entries.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct ToroidalSpecDoc {
    pub n: usize,
    pub a: usize,
    pub b: usize,
    pub q: usize,
    pub R1: Vec<Vec<DecimalComplex>>,
    pub R2: Vec<Vec<DecimalComplex>>,
    pub R3: Vec<Vec<DecimalComplex>>,
    pub P0: Vec<Vec<DecimalComplex>>,
    pub P1: Vec<Vec<DecimalComplex>>,
}

fn parse_matrix(m: &[Vec<DecimalComplex>]) -> Result<Vec<Vec<Complex64>>> {
    m.iter()
        .map(|row| {
            row.iter()
                .map(|e| e.parse::<Complex64>().map_err(|e| ToroidalError::Parse(e.to_string())))
                .collect()
        })
        .collect()
}

fn real_part(m: Vec<Vec<Complex64>>, name: &str) -> Result<Vec<Vec<f64>>> {
    m.into_iter()
        .map(|row| {
            row.into_iter()
                .map(|z| {
                    if z.im != 0.0 {
                        Err(ToroidalError::Parse(format!("{name} must be real")))
                    } else {
                        Ok(z.re)
                    }
                })
                .collect()
        })
        .collect()
}

fn dec_matrix<T>(m: &[Vec<T>], f: impl Fn(&T) -> DecimalComplex) -> Vec<Vec<DecimalComplex>> {
    m.iter().map(|r| r.iter().map(&f).collect()).collect()
}

impl ToroidalSpecDoc {
    pub fn parse(&self) -> Result<ToroidalSpec> {
        let spec = ToroidalSpec {
            n: self.n,
            a: self.a,
            b: self.b,
            q: self.q,
            r1: real_part(parse_matrix(&self.R1)?, "R1")?,
            r2: real_part(parse_matrix(&self.R2)?, "R2")?,
            r3: parse_matrix(&self.R3)?,
            p0: parse_matrix(&self.P0)?,
            p1: parse_matrix(&self.P1)?,
        };
        spec.check_shapes()?;
        Ok(spec)
    }
}

impl ToroidalSpec {
    /// Complex dimension `N = n - a - b` of the toroidal factor.
    pub fn big_n(&self) -> usize {
        self.n - self.a - self.b
    }

    /// Number of rows `m = N - q` of the gluing blocks.
    pub fn m(&self) -> usize {
        self.big_n() - self.q
    }

    pub fn to_doc(&self) -> ToroidalSpecDoc {
        let real = |x: &f64| DecimalComplex::from_coeff(&Complex64::new(*x, 0.0));
        let cplx = |z: &Complex64| DecimalComplex::from_coeff(z);
        ToroidalSpecDoc {
            n: self.n,
            a: self.a,
            b: self.b,
            q: self.q,
            R1: dec_matrix(&self.r1, real),
            R2: dec_matrix(&self.r2, real),
            R3: dec_matrix(&self.r3, cplx),
            P0: dec_matrix(&self.p0, cplx),
            P1: dec_matrix(&self.p1, cplx),
        }
    }

    pub fn check_shapes(&self) -> Result<()> {
        if self.a + self.b > self.n || self.q < 1 || self.n - self.a - self.b < self.q {
            return Err(ToroidalError::Dimensions(format!(
                "need n - a - b >= q >= 1, got n={}, a={}, b={}, q={}",
                self.n, self.a, self.b, self.q
            )));
        }
        let (m, q) = (self.m(), self.q);
        let shape_ok = |rows: usize, cols: usize, lens: Vec<usize>| lens.len() == rows && lens.iter().all(|&l| l == cols);
        let checks = [
            ("R1", shape_ok(m, q, self.r1.iter().map(Vec::len).collect())),
            ("R2", shape_ok(m, q, self.r2.iter().map(Vec::len).collect())),
            ("R3", shape_ok(m, m, self.r3.iter().map(Vec::len).collect())),
            ("P0", shape_ok(q, q, self.p0.iter().map(Vec::len).collect())),
            ("P1", shape_ok(q, m, self.p1.iter().map(Vec::len).collect())),
        ];
        for (name, ok) in checks {
            if !ok {
                return Err(ToroidalError::Dimensions(format!("{name} has the wrong shape")));
            }
        }
        Ok(())
    }

    /// The `2N` lattice columns in toroidal coordinates.
    pub fn gamma(&self) -> Vec<Vec<Complex64>> {
        let (m, q, nn) = (self.m(), self.q, self.big_n());
        let mut cols = Vec::with_capacity(2 * nn);
        for k in 0..nn {
            let mut c = vec![Complex64::new(0.0, 0.0); nn];
            c[k] = Complex64::new(1.0, 0.0);
            if k >= m {
                let j = k - m;
                for (i, row) in self.r1.iter().enumerate() {
                    c[i] = Complex64::new(row[j], 0.0);
                }
            }
            cols.push(c);
        }
        for j in 0..q {
            let mut c: Vec<Complex64> = self.r2.iter().map(|row| Complex64::new(row[j], 0.0)).collect();
            c.extend(self.p0.iter().map(|row| row[j]));
            cols.push(c);
        }
        for j in 0..m {
            let mut c: Vec<Complex64> = self.r3.iter().map(|row| row[j]).collect();
            c.extend(self.p1.iter().map(|row| row[j]));
            cols.push(c);
        }
        cols
    }

    /// Applies the shear `[[I, -R1], [0, I]]` to a vector.
    pub fn shear(&self, v: &[Complex64]) -> Vec<Complex64> {
        let m = self.m();
        let mut out = v.to_vec();
        for (i, row) in self.r1.iter().enumerate() {
            for (j, r) in row.iter().enumerate() {
                out[i] -= v[m + j] * r;
            }
        }
        out
    }

    pub fn unshear(&self, v: &[Complex64]) -> Vec<Complex64> {
        let m = self.m();
        let mut out = v.to_vec();
        for (i, row) in self.r1.iter().enumerate() {
            for (j, r) in row.iter().enumerate() {
                out[i] += v[m + j] * r;
            }
        }
        out
    }
}

/// Real `2N x 2N` matrix whose columns are (Re, Im) of the given vectors.
pub(crate) fn realify(cols: &[Vec<Complex64>]) -> DMatrix<f64> {
    let nn = cols[0].len();
    DMatrix::from_fn(2 * nn, cols.len(), |r, c| {
        if r < nn {
            cols[c][r].re
        } else {
            cols[c][r - nn].im
        }
    })
}

/// Smallest singular value relative to the largest entry.
pub(crate) fn relative_rank_margin(m: &DMatrix<f64>) -> f64 {
    let scale = m.amax();
    if scale == 0.0 {
        return 0.0;
    }
    let svd = (m / scale).svd(false, false);
    svd.singular_values.min()
}

/// Lattice bases in toroidal and standard coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeBasis {
    pub gamma: Vec<Vec<Complex64>>,
    pub gamma_std: Vec<Vec<Complex64>>,
    pub gamma_prime: Vec<Vec<Complex64>>,
    pub q: usize,
}

impl LatticeBasis {
    pub fn big_n(&self) -> usize {
        self.gamma.len() / 2
    }

    /// `tau[i][j]`: entry `(i, j)` of `[gamma'_1, ..., gamma'_q]`.
    pub fn tau(&self) -> Vec<Vec<Complex64>> {
        (0..self.big_n())
            .map(|i| self.gamma_prime.iter().map(|col| col[i]).collect())
            .collect()
    }

    /// Imaginary parts of the non-angular standard columns.
    pub fn slab(&self) -> Slab {
        let nn = self.big_n();
        let im = |c: &Vec<Complex64>| c.iter().map(|z| z.im).collect::<Vec<f64>>();
        Slab {
            s_dirs: self.gamma_std[nn..nn + self.q].iter().map(im).collect(),
            r_dirs: self.gamma_std[nn + self.q..].iter().map(im).collect(),
        }
    }
}

/// Standard-coordinate lattice basis (`gamma_std = S gamma`).
pub fn shear_to_standard(spec: &ToroidalSpec) -> Result<LatticeBasis> {
    spec.check_shapes()?;
    let gamma = spec.gamma();
    if relative_rank_margin(&realify(&gamma)) <= LINALG_TOL {
        return Err(ToroidalError::Dependent);
    }
    let gamma_std: Vec<Vec<Complex64>> = gamma.iter().map(|c| spec.shear(c)).collect();
    let nn = spec.big_n();
    let gamma_prime = gamma_std[nn..nn + spec.q].to_vec();
    Ok(LatticeBasis {
        gamma,
        gamma_std,
        gamma_prime,
        q: spec.q,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Irrationality {
    Pass { height_bound: u32 },
    Witness { sigma: Vec<i64> },
}

/// Searches nonzero `sigma` with `|sigma|_inf <= height_bound` and
/// `sigma^t R` integral, in order of increasing height.
pub fn validate_irrationality(spec: &ToroidalSpec, height_bound: u32) -> Irrationality {
    let m = spec.m();
    let rows: Vec<Vec<f64>> = (0..m)
        .map(|i| spec.r1[i].iter().chain(&spec.r2[i]).copied().collect())
        .collect();
    let integral = |sigma: &[i64]| {
        (0..2 * spec.q).all(|c| {
            let s: f64 = sigma.iter().zip(&rows).map(|(&k, row)| k as f64 * row[c]).sum();
            (s - s.round()).abs() <= LINALG_TOL
        })
    };
    if m == 0 {
        return Irrationality::Pass { height_bound };
    }
    let hb = height_bound as i64;
    for h in 1..=hb {
        let mut found = None;
        for_each_box(m, h, &mut |sigma| {
            if found.is_some() {
                return;
            }
            let top = sigma.iter().map(|x| x.abs()).max().unwrap_or(0);
            let first = sigma.iter().find(|&&x| x != 0).copied().unwrap_or(0);
            if top == h && first > 0 && integral(sigma) {
                found = Some(sigma.to_vec());
            }
        });
        if let Some(sigma) = found {
            return Irrationality::Witness { sigma };
        }
    }
    Irrationality::Pass { height_bound }
}

fn for_each_box(m: usize, h: i64, f: &mut dyn FnMut(&[i64])) {
    let mut cur = vec![-h; m];
    loop {
        f(&cur);
        let mut k = m;
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            if cur[k] < h {
                cur[k] += 1;
                for x in cur.iter_mut().skip(k + 1) {
                    *x = -h;
                }
                break;
            }
        }
    }
}

/// Diagonal linear parts of the deck transformations: row `j` of `lambda`
/// and `mu` gives `T_j` and `M_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeckLinearData<C> {
    pub lambda: Vec<Vec<C>>,
    pub mu: Vec<Vec<C>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DeckLinearDoc {
    pub lambda: Vec<Vec<DecimalComplex>>,
    pub mu: Vec<Vec<DecimalComplex>>,
}

impl<C: Coeff> DeckLinearData<C> {
    pub fn new(lambda: Vec<Vec<C>>, mu: Vec<Vec<C>>) -> Result<Self> {
        if lambda.is_empty() || lambda.len() != mu.len() {
            return Err(ToroidalError::Dimensions("lambda and mu need the same positive row count".into()));
        }
        let nh = lambda[0].len();
        let d = mu[0].len();
        if lambda.iter().any(|r| r.len() != nh) || mu.iter().any(|r| r.len() != d) {
            return Err(ToroidalError::Dimensions("ragged eigenvalue matrix".into()));
        }
        if lambda.iter().chain(&mu).flatten().any(|z| z.is_zero()) {
            return Err(ToroidalError::Argument("eigenvalues must be nonzero".into()));
        }
        Ok(DeckLinearData { lambda, mu })
    }

    pub fn q(&self) -> usize {
        self.lambda.len()
    }

    pub fn n_h(&self) -> usize {
        self.lambda[0].len()
    }

    pub fn d(&self) -> usize {
        self.mu[0].len()
    }

    /// Deck `i` with every eigenvalue inverted.
    pub fn inverse_row(&self, i: usize) -> (Vec<C>, Vec<C>) {
        (
            self.lambda[i].iter().map(Coeff::inv).collect(),
            self.mu[i].iter().map(Coeff::inv).collect(),
        )
    }

    pub fn to_float(&self) -> DeckLinearData<Complex64> {
        let f = |m: &Vec<Vec<C>>| m.iter().map(|r| r.iter().map(Coeff::to_c64).collect()).collect();
        DeckLinearData {
            lambda: f(&self.lambda),
            mu: f(&self.mu),
        }
    }

    pub fn to_doc(&self) -> DeckLinearDoc {
        let f = |m: &Vec<Vec<C>>| m.iter().map(|r| r.iter().map(DecimalComplex::from_coeff).collect()).collect();
        DeckLinearDoc {
            lambda: f(&self.lambda),
            mu: f(&self.mu),
        }
    }

    pub fn from_doc(doc: &DeckLinearDoc) -> Result<Self> {
        let f = |m: &Vec<Vec<DecimalComplex>>| -> Result<Vec<Vec<C>>> {
            m.iter()
                .map(|r| {
                    r.iter()
                        .map(|e| e.parse::<C>().map_err(|e| ToroidalError::Parse(e.to_string())))
                        .collect()
                })
                .collect()
        };
        DeckLinearData::new(f(&doc.lambda)?, f(&doc.mu)?)
    }
}

impl DeckLinearData<Complex64> {
    /// Checks `lambda_{j,i} = exp(2 pi i tau_{i,j})` within `tol`.
    pub fn consistent_with(&self, basis: &LatticeBasis, tol: f64) -> bool {
        let tau = basis.tau();
        self.lambda.iter().enumerate().all(|(j, row)| {
            row.iter().enumerate().all(|(i, l)| {
                let expected = (Complex64::new(0.0, 2.0 * PI) * tau[i][j]).exp();
                (l - expected).norm() <= tol * expected.norm().max(1.0)
            })
        })
    }
}

/// `lambda_{j,i} = exp(2 pi sqrt(-1) tau_{i,j})` together with the given
/// normal eigenvalues.
pub fn deck_linear_parts(basis: &LatticeBasis, mu: Vec<Vec<Complex64>>) -> Result<DeckLinearData<Complex64>> {
    if mu.len() != basis.q {
        return Err(ToroidalError::Dimensions(format!("mu needs {} rows", basis.q)));
    }
    let tau = basis.tau();
    let lambda = (0..basis.q)
        .map(|j| {
            (0..basis.big_n())
                .map(|i| (Complex64::new(0.0, 2.0 * PI) * tau[i][j]).exp())
                .collect()
        })
        .collect();
    DeckLinearData::new(lambda, mu)
}

/// Solves the real system `M x = b` for square `M`.
pub(crate) fn solve_real(m: &DMatrix<f64>, b: &[f64]) -> Option<Vec<f64>> {
    let lu = m.clone().lu();
    lu.solve(&DVector::from_column_slice(b)).map(|x| x.iter().copied().collect())
}
