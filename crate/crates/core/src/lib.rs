//! Exact Harder-Narasimhan theory for decorated vector bundles on a finite,
//! fully computable model.
//!
//! Bundles are formal direct sums of semistable atoms `(degree, rank)`;
//! principal bundles are torus-split and recorded by an integer degree
//! vector in Cartan coordinates. On top of that model the crate provides
//!
//! * root systems of `GL`, `SL`, `Sp` and `SO` in diagonal matrix coordinates
//!   ([`rootsys`]), standard parabolics and dominant characters
//!   ([`parabolic`]);
//! * slope calculus, vertical degrees and semistability tests ([`bundle`]);
//! * plain and isotropic Harder-Narasimhan filtrations with brute-force
//!   oracles ([`hnfilt`]);
//! * kernel / coroot lattices, fundamental groups and topological types
//!   ([`lattice`]);
//! * canonical reductions in both the adjoint-filtration and the
//!   Levi-plus-character formulation, and HN types ([`canon`]);
//! * the stratification poset with exact convex-hull tests ([`strata`]).
//!
//! All arithmetic is exact. Enumeration-heavy oracles take an
//! [`Execution`] mode; with the `parallel` feature (default) the parallel
//! mode fans out over rayon, otherwise it runs sequentially.

pub mod bundle;
pub mod canon;
mod error;
pub mod exec;
pub mod hnfilt;
pub mod lattice;
pub mod linalg;
pub mod lp;
pub mod parabolic;
pub mod rootsys;
pub mod strata;

pub use error::{Error, Result};
pub use exec::Execution;

/// Exact rational used for slopes, types and Cartan coordinates.
pub type Q = num_rational::Rational64;

/// Renders a rational as `p` or `p/q`.
pub fn fmt_q(q: &Q) -> String {
    if *q.denom() == 1 {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}
