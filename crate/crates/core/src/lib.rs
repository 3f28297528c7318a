//! Exact combinatorics and spectral data for q-deformed twisted orbit spaces.
//!
//! The crate is organised bottom-up:
//! [`exactmath`] (rationals, Laurent polynomials in `q`, group-algebra elements),
//! [`rootsys`] (Cartan data, Weyl groups, folding), [`twistdata`] (twisting data and
//! their Weyl-group combinatorics), [`charring`] (multiplicities and twining
//! characters), [`hc_integral`] (Harish-Chandra images, invariant integrals, cell
//! states) and [`lowrank_models`] (rank one and rank two operator models).
//! [`verify`] bundles the acceptance checks used by the CLI and the test-suite.

pub mod charring;
pub mod error;
pub mod exactmath;
pub mod hc_integral;
pub mod lowrank_models;
pub mod rootsys;
pub mod twistdata;
pub mod verify;

pub use charring::{MultTable, TwiningTable};
pub use error::{Error, Result};
pub use exactmath::{CharElement, Evaluated, LaurentPoly, PolarRational, Rat, Rational};
pub use hc_integral::{CellData, HCartanElement};
pub use lowrank_models::{Stratum, TruncatedOperator, VermaCase, VermaRecord};
pub use rootsys::{FoldedSystem, Involution, RootSystem, Weight, WeylElement};
pub use twistdata::{DatumFlags, SignCharacter, TwistingDatum, WeightFunction};
