//! Random motion on the Poincaré disk driven by random gyrotranslations.
//!
//! The crate is organized in layers:
//!
//! - [`disk`] — deterministic geometry: the hyperbolic metric, Busemann
//!   functions, bipolar coordinates, Apollonian circles.
//! - [`mobius`] — the abelian group of gyrotranslations fixing a pair of
//!   opposite boundary poles.
//! - [`walk`] — the stochastic layer: step laws, the one-arc walk, the
//!   alternating two-pencil walk, and a deterministic parallel ensemble
//!   runner.
//! - [`analysis`] — estimators and statistical checks for the walks'
//!   limit behavior: escape rates, CLT tails, oscillation, iterated-logarithm
//!   statistics.
//! - [`io`] / [`render`] — trajectory serialization (CSV/JSONL) and SVG
//!   point clouds.
//! - [`verify`] — the exact-identity self-test suite used by the CLI
//!   `verify` subcommand and the acceptance tests.
//!
//! With the default `parallel` feature, ensembles and replica sweeps run on
//! a rayon pool; outputs are deterministic functions of `(seed, config)`
//! regardless of scheduling. Disabling default features yields a fully
//! sequential build with the same outputs.

pub mod analysis;
pub mod disk;
pub mod error;
pub mod io;
pub mod mobius;
pub mod render;
pub mod verify;
pub mod walk;

pub use error::{Error, Result};
