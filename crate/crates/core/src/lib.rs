//! Supersingular isogeny graphs 𝒢(p, ℓ) over F_{p^2}, built twice: from
//! elliptic curves and Vélu isogenies, and from right ideal classes of a
//! maximal order in the quaternion algebra ramified at p and ∞. Each side
//! checks the other.
//!
//! Modules:
//! - [`ff`]: prime fields, F_{p^2}, and extension towers.
//! - [`curve`]: short Weierstrass curves, group law, torsion, Vélu.
//! - [`ssgraph`]: supersingular j-invariants and the isogeny graph.
//! - [`quat`]: quaternion orders, ideal classes, theta series, Brandt matrices.
//! - [`latgen`]: lattice generation by vectors of prescribed norms.
//! - [`proto`]: the CGL hash and a toy SIDH exchange.

pub mod arith;
pub mod curve;
pub mod enumerate;
pub mod error;
pub mod ff;
pub mod intmat;
pub mod latgen;
pub mod proto;
pub mod quat;
pub mod ssgraph;

pub use error::{Error, Result};
