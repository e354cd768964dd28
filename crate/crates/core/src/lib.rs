//! Free vibration and moving-load response of simply-supported skew decks.
//!
//! The deck is a straight beam whose supports are skewed by an angle α. Two
//! models are provided: an analytical model that couples vertical bending and
//! torsion through the skew support conditions, and a simplified model that
//! keeps bending only and represents skew by rotational end springs.
//!
//! Typical use:
//!
//! ```
//! use skewdyn::{eigen, presets};
//!
//! let deck = presets::example_2().deck;
//! let modes = eigen::find_modes(&deck, eigen::Model::Simplified, 3).unwrap();
//! assert!((modes[0].frequency_hz() - 5.88).abs() < 0.05);
//! ```
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod deck;
pub mod eigen;
pub mod error;
pub mod integrator;
pub mod loads;
pub mod output;
pub mod presets;
pub mod quadrature;
pub mod response;
pub mod roots;
pub mod studies;

pub use deck::{DeckProperties, DerivedConstants, RunSettings};
pub use eigen::{find_modes, EigenProblem, Mode, ModeSelection, Model};
pub use error::{Error, ErrorClass, Result};
pub use loads::{Axle, Convoy, Train};
