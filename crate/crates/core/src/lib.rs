//! Self-similar shock configurations of the two-dimensional isentropic Euler
//! system, together with numerical checks of the vorticity machinery used to
//! show that the pseudo-velocity of such solutions is not in H¹.
//!
//! The crate is organised bottom-up:
//!
//! * [`gas`] – γ-law equation of state and state primitives.
//! * [`jump`] – Rankine–Hugoniot relations, classification, entropy checks,
//!   downstream solves and shock polars.
//! * [`config`] – corner-state solvers, critical angles, configuration
//!   builders for the four reflection/diffraction problems and the
//!   admissible-structure validator.
//! * [`vortcalc`] – gradient reconstruction and vorticity on a shock.
//! * [`fields`] – grid fields, mollifiers, reflection extension and
//!   commutators.
//! * [`diagnostic`] – PDE residuals, renormalized weak identity, truncation
//!   study and the boundary functional on the curved shock.

pub mod config;
pub mod diagnostic;
pub mod error;
pub mod fields;
pub mod gas;
pub mod geom;
pub mod jump;
pub mod vortcalc;

pub use error::{Error, Result};
pub use gas::{ConstantState, GasParams, PointState};
pub use geom::Vec2;
