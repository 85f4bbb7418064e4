//! Exact computational algebra for rank-3 moduli relation families.
//!
//! The crate provides, in dependency order:
//!
//! - [`rat`], [`cyc`]: arbitrary-precision rationals and the cyclotomic
//!   field `Q(zeta_12)`;
//! - [`monomial`], [`poly`]: the weighted graded-revlex order and sparse
//!   multivariate polynomials;
//! - [`series`]: truncated one- and two-variable formal power series with
//!   exp/log/rational powers, plus the symmetric-function bridge;
//! - [`mumford`]: the relation families `zeta_m^{g,k}` and their duals,
//!   built by generating function and by recursion, with cross-checks;
//! - [`groebner`]: Buchberger bases, leading-term ideals, standard-monomial
//!   censuses and the lattice-count function;
//! - [`spectrum`]: the eigenvalue lattice, its root-of-unity action, and
//!   deformed eigenvalue modules;
//! - [`invariants`]: structure-theorem series, the blowup factor,
//!   elliptic-surface coefficients, framed Euler characteristics, and the
//!   two-variable Alexander product.

pub mod cyc;
pub mod error;
pub mod groebner;
pub mod invariants;
pub mod monomial;
pub mod mumford;
pub mod poly;
pub mod rat;
pub mod ring;
pub mod series;
pub mod spectrum;

pub use cyc::CycNum;
pub use error::{Error, Result};
pub use monomial::{monomial_compare, Monomial, PolyRing, Var};
pub use poly::Poly;
pub use rat::Rat;
pub use ring::Ring;
pub use series::{Series, Series2, SeriesVar};
