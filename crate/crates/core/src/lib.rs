//! Desk-scale numerical laboratory for a handful of open problems in
//! combinatorics and random matrix theory.
//!
//! The crate is organised by subject:
//!
//! * [`graph`]: graphs as bitset rows, circulant and Paley families, samplers,
//!   complements, localizations, strong products and exact small invariants.
//! * [`lp`] and [`theta`]: a dense simplex solver, the four circulant linear
//!   programs for the Lovász number, and a certified first-order SDP solver
//!   for general graphs.
//! * [`phase`]: the real phase-retrieval stability constant and the
//!   complement property.
//! * [`frames`]: mutually unbiased bases, equiangular tight frames, the Paley
//!   ETF, restricted-isometry sampling and a numerical SIC search.
//! * [`graphmatrix`]: graph matrices from shapes and their norm scaling.
//! * [`tensor`]: symmetric injective ℓp norms and Gaussian tensor series.
//! * [`lab`]: reproducible experiment configs and results behind the `lab`
//!   binary.

pub mod error;
pub mod frames;
pub mod graph;
pub mod graphmatrix;
pub mod lab;
pub mod linalg;
pub mod lp;
pub mod phase;
pub mod rng;
pub mod tensor;
pub mod theta;

pub use error::{Error, Result};
pub use graph::{CirculantSpec, Graph, GraphInvariants};
