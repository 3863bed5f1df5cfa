//! Trace-coordinate dynamics for the one-holed torus.
//!
//! The polynomial `κ(x,y,z) = x² + y² + z² − xyz − 2` is preserved by a group
//! Γ of polynomial automorphisms of 3-space, isomorphic to
//! `PGL(2,Z) ⋉ (Z/2 ⊕ Z/2)`.  This crate implements the action of Γ on real
//! triples `(x,y,z)`:
//!
//! * [`char_space`] — the point type, κ, the associated bilinear form and the
//!   classification of level-set components;
//! * [`modular_group`] — the named generators of Γ, composition in semidirect
//!   normal form, the homology map into `GL(2,Z)` and its `S3` quotient;
//! * [`trace_calculus`] — trace polynomials `f_w` of free-group words, the
//!   numeric 2×2 matrix oracle, and the reducible locus at κ = 2;
//! * [`reduction`] — the sort-and-reflect normal-form algorithm and the
//!   wandering-domain membership test;
//! * [`hyperbolic`] — upper half-plane isometries and geometric verifiers
//!   (commutator traces, crossing axes, embedded quadrilaterals, right-angled
//!   hexagons);
//! * [`dynamics`] — orbit iteration, invariant-measure sampling on level sets
//!   and equidistribution statistics;
//! * [`render`] — deterministic SVG/PPM figure emission;
//! * [`verify`] — the runnable property suites behind the `verify` CLI
//!   subcommand.

pub mod char_space;
pub mod dynamics;
pub mod hyperbolic;
pub mod modular_group;
pub mod reduction;
pub mod render;
pub mod scalar;
pub mod stats;
pub mod trace_calculus;
pub mod verify;

pub use char_space::{Character, ComponentLabel};
pub use modular_group::{GammaElement, GeneratorId};
pub use scalar::{Mode, Scalar};
