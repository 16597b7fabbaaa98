//! Numerical laboratory for Benjamini-Schramm convergence.
//!
//! The crate collects the computable pieces of the theory of local
//! convergence of spaces and its spectral consequences:
//!
//! * [`graphs`]: rooted graphs, graph injectivity radius, thin parts,
//!   rooted-ball statistics and mass transport.
//! * [`covers`]: Schreier and Cayley graphs, `SL2(Z/N)` quotients, fixed
//!   points of coset actions, girth, and finite covers of cell complexes.
//! * [`spectral`]: combinatorial Laplacians, spectral density functions,
//!   exact Betti numbers and limiting spectral measures.
//! * [`hyperbolic`]: Möbius geometry, pants and Fenchel-Nielsen gluing,
//!   short geodesics, hyperbolic heat kernels and thin cylinders.
//! * [`arithmetic`]: Mahler measures, bounded-measure censuses and torsion
//!   growth along cyclic covers.

pub mod arithmetic;
pub mod covers;
pub mod error;
pub mod graphs;
pub mod hyperbolic;
pub mod numeric;
pub mod spectral;

pub use error::{Error, Result};
