//! Formal normal forms for neighborhoods of toroidal groups and Hopf
//! manifolds at truncated scale.
//!
//! * [`series`]: sparse Laurent/Taylor series with exact or float
//!   coefficients, composition and grid sup norms.
//! * [`toroidal`]: period data, standard coordinates, Reinhardt domains,
//!   the κ₀ distance constant and the convex-hull margin η.
//! * [`small_divisors`]: Diophantine scans and cohomological equation
//!   solvers.
//! * [`linearizer`]: order-by-order vertical and full linearization of
//!   commuting deck systems plus majorant certificates.
//! * [`hopf`]: eigenvalue-group membership, vanishing criteria, nested
//!   coverings, transition chains and Shilov constants.
//! * [`cli`]: configuration, pipelines and JSON reports behind the
//!   `germlin` binary.

pub mod cli;
pub mod hopf;
pub mod linearizer;
pub mod scalar;
pub mod series;
pub mod small_divisors;
pub mod toroidal;

pub use scalar::{Coeff, ExactComplex, Mode};
pub use series::{ExponentKey, Series, SeriesVec, Trunc};
