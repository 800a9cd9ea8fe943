//! Uniform corner states, critical angles and the geometry of the
//! self-similar reflection/diffraction configurations.

pub mod build;
pub mod corner;
pub mod export;
pub mod validate;

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gas::{check_density, ConstantState, GasParams};
use crate::geom::{unit, v2};

pub use corner::{solve_corner, CornerProblem, CornerRoots, CornerState, Side};

/// Number of uniform angles scanned before bisecting a critical angle.
pub const ANGLE_SCAN: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WedgeGeometry {
    pub theta_w1: f64,
    pub theta_w2: f64,
    pub symmetric: bool,
}

impl WedgeGeometry {
    pub fn new(theta_w1: f64, theta_w2: f64) -> Result<Self> {
        for t in [theta_w1, theta_w2] {
            if !(t > 0.0 && t < FRAC_PI_2) {
                return Err(Error::InvalidParameter(format!("half-wedge angle {t} outside (0, π/2)")));
            }
        }
        Ok(Self { theta_w1, theta_w2, symmetric: theta_w1 == theta_w2 })
    }

    pub fn symmetric(theta_w: f64) -> Result<Self> {
        Self::new(theta_w, theta_w)
    }
}

/// Critical angles of a configuration family, each with the side on which
/// the property (two corner roots, supersonic weak state) holds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalAngles {
    pub detachment: f64,
    pub roots_exist: Side,
    pub sonic: SonicAngle,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SonicAngle {
    pub angle: f64,
    /// False when the weak branch never changes type; `angle` is then the
    /// detachment angle.
    pub crossing: bool,
    /// Side of `angle` on which the weak state is supersonic at the corner.
    pub supersonic: Side,
}

/// Incident shock of the reflection problem: state (1) velocity `(u1, 0)`
/// and shock position `ξ₁ = xi1_0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IncidentShock {
    pub u1: f64,
    pub xi1_0: f64,
}

pub fn incident_shock_setup(rho0: f64, rho1: f64, params: &GasParams) -> Result<IncidentShock> {
    check_density(rho0)?;
    check_density(rho1)?;
    if !(rho1 > rho0) {
        return Err(Error::InvalidParameter(format!(
            "a compressive incident shock needs rho1 > rho0 (got rho0={rho0}, rho1={rho1})"
        )));
    }
    let dp = params.pressure(rho1) - params.pressure(rho0);
    let u1 = (dp * (rho1 - rho0) / (rho0 * rho1)).sqrt();
    Ok(IncidentShock { u1, xi1_0: rho1 * u1 / (rho1 - rho0) })
}

/// States (0), (1) of the reflection problem.
pub fn reflection_states(rho0: f64, rho1: f64, params: &GasParams) -> Result<(ConstantState, ConstantState, IncidentShock)> {
    let inc = incident_shock_setup(rho0, rho1, params)?;
    Ok((ConstantState::new(rho0, v2(0.0, 0.0))?, ConstantState::new(rho1, v2(inc.u1, 0.0))?, inc))
}

/// Corner problem at the reflection point `P₀ = (ξ₁⁰, ξ₁⁰ tan θ_w)`.
pub fn reflection_corner(state1: &ConstantState, xi1_0: f64, theta_w: f64) -> CornerProblem {
    let dir = unit(theta_w);
    CornerProblem::new(*state1, v2(xi1_0, xi1_0 * theta_w.tan()), dir, v2(-dir.y, dir.x))
}

/// Weak and strong states (2) at the reflection point, or `Detached`.
pub fn solve_state2(rho0: f64, rho1: f64, params: &GasParams, theta_w: f64) -> Result<CornerRoots> {
    if !(theta_w > 0.0 && theta_w < FRAC_PI_2) {
        return Err(Error::InvalidParameter(format!("wedge angle {theta_w} outside (0, π/2)")));
    }
    let (_, s1, inc) = reflection_states(rho0, rho1, params)?;
    solve_corner(&reflection_corner(&s1, inc.xi1_0, theta_w), params)
}

pub fn detachment_angle(rho0: f64, rho1: f64, params: &GasParams) -> Result<f64> {
    let (_, s1, inc) = reflection_states(rho0, rho1, params)?;
    let (t, side) =
        corner::detachment_of_family(|t| reflection_corner(&s1, inc.xi1_0, t), params, 0.0, FRAC_PI_2, ANGLE_SCAN)?;
    if side != Side::Above {
        return Err(Error::Numerical("reflection roots found below the transition angle".into()));
    }
    Ok(t)
}

/// Angle where the weak state (2) turns sonic at `P₀`.
pub fn sonic_angle(rho0: f64, rho1: f64, params: &GasParams) -> Result<SonicAngle> {
    let (_, s1, inc) = reflection_states(rho0, rho1, params)?;
    let td = detachment_angle(rho0, rho1, params)?;
    let lo = td + 1e-9;
    let hi = FRAC_PI_2 - 1e-6;
    let found = corner::sonic_of_family(|t| reflection_corner(&s1, inc.xi1_0, t), params, lo, hi, ANGLE_SCAN)?;
    Ok(match found {
        Some((angle, supersonic)) => SonicAngle { angle, crossing: true, supersonic },
        None => SonicAngle { angle: td, crossing: false, supersonic: Side::Above },
    })
}

pub fn critical_angles(rho0: f64, rho1: f64, params: &GasParams) -> Result<CriticalAngles> {
    Ok(CriticalAngles {
        detachment: detachment_angle(rho0, rho1, params)?,
        roots_exist: Side::Above,
        sonic: sonic_angle(rho0, rho1, params)?,
    })
}
