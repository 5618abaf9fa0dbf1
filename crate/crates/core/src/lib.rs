//! Construction, invariants and transformations of finite simplicial
//! complexes.
//!
//! The crate is organized bottom-up:
//!
//! * [`kernel`]: the [`Complex`] type, faces, stars, links and the
//!   combinatorial constructions (joins, products, connected sums, orbits).
//! * [`generators`]: standard triangulations (simplices, cross polytopes,
//!   cyclic polytopes, stacked spheres).
//! * [`invariants`]: Euler characteristic, h/g-vectors, integral homology via
//!   Smith normal form, orientability, edge-path presentations of the
//!   fundamental group.
//! * [`bistellar`]: bistellar moves, randomization, reduction by simulated
//!   annealing, isomorphism and bistellar equivalence.
//! * [`slicing`]: discrete normal surfaces cut out of 3-manifolds.
//! * [`blowup`]: resolution of ordinary double points of 4-pseudomanifolds.
//! * [`store`]: JSON persistence, the fixture library, export formats.

pub mod bistellar;
pub mod blowup;
pub mod error;
pub mod generators;
pub mod invariants;
pub mod kernel;
pub mod rng;
pub mod slicing;
pub mod store;

pub use error::{Error, Result};
pub use kernel::{Complex, Face, Label, StructuralFlags, Vertex};
