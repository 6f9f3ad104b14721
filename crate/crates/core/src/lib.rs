//! Exact and certified-numerical tools for the flipped alpha-continued
//! fraction maps `T_alpha` on `[min(alpha, 1 - alpha), 1]`.
//!
//! The crate is organised bottom-up:
//!
//! * [`numerics`]: rationals, quadratic surds and adaptive interval reals.
//! * [`maps`]: the map family, its digits and orbits.
//! * [`cf`]: regular and semi-regular expansions, convergents, the `R`-action.
//! * [`matching`]: matching detection, matching windows and parameter scans.
//! * [`measure`]: invariant densities, the transfer operator and entropy.
//! * [`natext`]: the planar natural extension and point-cloud simulation.

pub mod cf;
pub mod error;
pub mod maps;
pub mod matching;
pub mod measure;
pub mod natext;
pub mod numerics;

pub use error::{Error, Result};
pub use maps::{Alpha, SignedDigit};
pub use numerics::{ExactReal, PrecisionPolicy, QuadraticSurd};
