//! Symbolic-numeric verification engine for the symmetry structure of
//! wave and Klein-Gordon equations on pp-wave spacetimes.
//!
//! The crate is organized in layers:
//!
//! * [`expr`]: canonical expression trees, parsing, calculus, numeric
//!   evaluation, and zero-equivalence testing.
//! * [`geometry`]: the pp-wave metric family and the tensor calculus on
//!   it (Christoffel symbols, Laplacian, Lie derivatives, Hessians).
//! * [`symmetry`]: conformal classification of vector fields, Noether
//!   symmetry conditions and currents for the Klein-Gordon Lagrangian,
//!   and structure-constant fitting for symmetry algebras.
//! * [`catalog`]: the cataloged metric classes with their claimed
//!   symmetries, potentials, and algebra tables, in both as-printed and
//!   corrected forms where those differ.
//! * [`verify`]: seeded samplers, tolerances, claim reports, and the
//!   suite runner that turns catalog entries into machine-checked
//!   verdicts.

pub mod catalog;
pub mod expr;
pub mod geometry;
pub mod symmetry;
pub mod verify;
