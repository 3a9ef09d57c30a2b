use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{HopfError, Result};
use crate::scalar::Coeff;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Factor {
    Annulus { inner: f64, outer: f64 },
    Disc { radius: f64 },
}

impl Factor {
    /// Radii of the Shilov boundary of this factor.
    pub fn shilov_radii(&self) -> Vec<f64> {
        match self {
            Factor::Annulus { inner, outer } => vec![*inner, *outer],
            Factor::Disc { radius } => vec![*radius],
        }
    }
}

/// A product domain, one factor per coordinate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PieceGeometry {
    pub factors: Vec<Factor>,
}

impl PieceGeometry {
    /// `U_i^j` of a nested covering: an annulus around `r_i^j` in coordinate
    /// `j`, discs of radius `r_4^j + delta / 2` elsewhere.
    pub fn covering_piece(cov: &super::NestedCoveringSpec, i: usize, j: usize) -> Self {
        let r = cov.radius(i, j);
        let outer = cov.radius(4, j) + cov.delta / 2.0;
        let factors = (0..cov.n())
            .map(|k| {
                if k == j {
                    Factor::Annulus {
                        inner: r - cov.delta,
                        outer: r + cov.delta,
                    }
                } else {
                    Factor::Disc { radius: outer }
                }
            })
            .collect();
        PieceGeometry { factors }
    }

    /// Every combination of Shilov radii; the distinguished tori of the
    /// product are their rotations.
    pub fn shilov_tori(&self) -> Vec<Vec<f64>> {
        let mut out = vec![Vec::new()];
        for f in &self.factors {
            out = out
                .into_iter()
                .flat_map(|p| {
                    f.shilov_radii().into_iter().map(move |r| {
                        let mut q = p.clone();
                        q.push(r);
                        q
                    })
                })
                .collect();
        }
        out
    }
}

/// Frame `Z_i = sum_j g_ij d/dz_j`: `z_i d/dz_i`, or
/// `alpha z_i d/dz_i + z_{i+1} d/dz_{i+1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "alpha", rename_all = "snake_case")]
pub enum Fields {
    Diagonal,
    Jordan(Complex64),
}

impl Fields {
    pub fn matrix(&self, z: &[Complex64]) -> Vec<Vec<Complex64>> {
        let n = z.len();
        let mut g = vec![vec![Complex64::new(0.0, 0.0); n]; n];
        for i in 0..n {
            match self {
                Fields::Diagonal => g[i][i] = z[i],
                Fields::Jordan(a) => {
                    g[i][i] = a * z[i];
                    if i + 1 < n {
                        g[i][i + 1] = z[i + 1];
                    }
                }
            }
        }
        g
    }
}

/// Inverse of an upper bidiagonal matrix by back substitution.
fn bidiagonal_inverse(g: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let n = g.len();
    let mut inv = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        inv[i][i] = 1.0 / g[i][i];
        for j in i + 1..n {
            inv[i][j] = -inv[i][j - 1] * g[j - 1][j] / g[j][j];
        }
    }
    inv
}

fn inf_norm(m: &[Vec<Complex64>]) -> f64 {
    m.iter().map(|r| r.iter().map(|x| x.norm()).sum()).fold(0.0, f64::max)
}

/// `sup ||g^-1||_inf` over the Shilov boundary of `piece`.
pub fn shilov_constant(piece: &PieceGeometry, fields: &Fields) -> Result<f64> {
    if piece.factors.is_empty() {
        return Err(HopfError::Invalid("piece has no factors".into()));
    }
    for f in &piece.factors {
        let ok = match f {
            Factor::Annulus { inner, outer } => *inner > 0.0 && outer >= inner,
            Factor::Disc { radius } => *radius > 0.0,
        };
        if !ok || f.shilov_radii().iter().any(|r| !r.is_finite()) {
            return Err(HopfError::Invalid("Shilov radii must be positive and finite".into()));
        }
    }
    if let Fields::Jordan(a) = fields {
        if a.norm() == 0.0 {
            return Err(HopfError::Invalid("Jordan fields need alpha != 0".into()));
        }
    }
    // |g^-1| depends only on the moduli
    let best = piece
        .shilov_tori()
        .iter()
        .map(|radii| {
            let z: Vec<Complex64> = radii.iter().map(|r| Complex64::new(*r, 0.0)).collect();
            inf_norm(&bidiagonal_inverse(&fields.matrix(&z)))
        })
        .fold(0.0, f64::max);
    Ok(best)
}

/// `S_t g S_t^-1` with `S_t = diag(t^(n-1), ..., 1)`: entry `(i, j)` gains
/// `t^(j-i)`. At `t = 0` only the diagonal survives.
pub fn jordan_deform<C: Coeff>(matrix: &[Vec<C>], t: &C) -> Vec<Vec<C>> {
    matrix
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, x)| {
                    if i == j {
                        x.clone()
                    } else if t.is_zero() {
                        C::zero()
                    } else {
                        x.clone() * t.pow_int(j as i64 - i as i64)
                    }
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ExactComplex;

    #[test]
    fn diagonal_closed_form() {
        let (r, delta, s) = (1.3, 0.2, 0.9);
        let piece = PieceGeometry {
            factors: vec![
                Factor::Annulus {
                    inner: r - delta,
                    outer: r + delta,
                },
                Factor::Disc { radius: s },
            ],
        };
        let c = shilov_constant(&piece, &Fields::Diagonal).unwrap();
        assert!((c - f64::max(1.0 / (r - delta), 1.0 / s)).abs() < 1e-12);
    }

    #[test]
    fn single_variable() {
        let piece = PieceGeometry {
            factors: vec![Factor::Disc { radius: 1.0 }],
        };
        assert_eq!(shilov_constant(&piece, &Fields::Diagonal).unwrap(), 1.0);
    }

    #[test]
    fn jordan_closed_form() {
        let piece = PieceGeometry {
            factors: vec![Factor::Disc { radius: 1.0 }; 3],
        };
        let c = shilov_constant(&piece, &Fields::Jordan(Complex64::new(0.5, 0.0))).unwrap();
        assert!((c - (2.0 + 4.0 + 8.0)).abs() < 1e-12);
    }

    #[test]
    fn zero_radius_rejected() {
        let piece = PieceGeometry {
            factors: vec![Factor::Disc { radius: 0.0 }, Factor::Disc { radius: 1.0 }],
        };
        assert!(shilov_constant(&piece, &Fields::Diagonal).is_err());
    }

    #[test]
    fn deform_two_by_two() {
        let a = ExactComplex::from_ratio(1, 3);
        let one = <ExactComplex as Coeff>::one();
        let zero = <ExactComplex as Coeff>::zero();
        let g = vec![vec![a.clone(), one.clone()], vec![zero.clone(), a.clone()]];
        let t = ExactComplex::from_ratio(5, 7);
        assert_eq!(jordan_deform(&g, &t), vec![vec![a.clone(), t.clone()], vec![zero.clone(), a.clone()]]);
        assert_eq!(jordan_deform(&g, &zero), vec![vec![a.clone(), zero.clone()], vec![zero, a]]);
    }
}
