//! γ-law isentropic gas in scaled units: `p = ρ^γ/γ`, sound speed
//! `c = ρ^{(γ-1)/2}`, enthalpy `h = (ρ^{γ-1} - 1)/(γ - 1)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::Vec2;

/// Densities at or below this value are rejected.
pub const RHO_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GasParams {
    gamma: f64,
}

impl GasParams {
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma > 1.0) || !gamma.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "adiabatic exponent must satisfy gamma > 1, got {gamma}"
            )));
        }
        Ok(Self { gamma })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn pressure(&self, rho: f64) -> f64 {
        rho.powf(self.gamma) / self.gamma
    }

    pub fn sound_speed(&self, rho: f64) -> f64 {
        rho.powf(0.5 * (self.gamma - 1.0))
    }

    pub fn enthalpy(&self, rho: f64) -> f64 {
        (rho.powf(self.gamma - 1.0) - 1.0) / (self.gamma - 1.0)
    }

    pub fn internal_energy(&self, rho: f64) -> f64 {
        rho.powf(self.gamma - 1.0) / (self.gamma * (self.gamma - 1.0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Eos {
    pub p: f64,
    pub h: f64,
    pub c: f64,
    pub e: f64,
}

pub fn check_density(rho: f64) -> Result<()> {
    if rho > RHO_FLOOR && rho.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("density must be positive, got {rho}")))
    }
}

pub fn eos(rho: f64, params: &GasParams) -> Result<Eos> {
    check_density(rho)?;
    Ok(Eos {
        p: params.pressure(rho),
        h: params.enthalpy(rho),
        c: params.sound_speed(rho),
        e: params.internal_energy(rho),
    })
}

/// Uniform state: density and constant velocity `u`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstantState {
    pub rho: f64,
    pub u: Vec2,
}

impl ConstantState {
    pub fn new(rho: f64, u: Vec2) -> Result<Self> {
        check_density(rho)?;
        Ok(Self { rho, u })
    }

    /// Pseudo-velocity `u - ξ` of this state at `xi`.
    pub fn at(&self, xi: &Vec2) -> PointState {
        PointState { rho: self.rho, v: pseudo_velocity(self, xi) }
    }
}

/// Density and pseudo-velocity at a single point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointState {
    pub rho: f64,
    pub v: Vec2,
}

impl PointState {
    pub fn new(rho: f64, v: Vec2) -> Result<Self> {
        check_density(rho)?;
        Ok(Self { rho, v })
    }
}

pub fn pseudo_velocity(state: &ConstantState, xi: &Vec2) -> Vec2 {
    state.u - xi
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::v2;

    #[test]
    fn rejects_bad_parameters() {
        assert!(GasParams::new(1.0).is_err());
        assert!(GasParams::new(f64::NAN).is_err());
        let g = GasParams::new(1.4).unwrap();
        assert!(eos(0.0, &g).is_err());
        assert!(eos(1e-15, &g).is_err());
        assert!(ConstantState::new(-1.0, v2(0.0, 0.0)).is_err());
    }

    #[test]
    fn unit_density() {
        let g = GasParams::new(1.4).unwrap();
        let s = eos(1.0, &g).unwrap();
        assert_eq!(s.p, 1.0 / 1.4);
        assert_eq!(s.h, 0.0);
        assert_eq!(s.c, 1.0);
        assert!((s.e - 1.0 / (1.4 * 0.4)).abs() < 1e-15);
    }

    #[test]
    fn pseudo_velocity_examples() {
        let s = ConstantState::new(1.0, v2(0.0, 0.0)).unwrap();
        assert_eq!(pseudo_velocity(&s, &v2(1.0, 2.0)), v2(-1.0, -2.0));
        let s = ConstantState::new(1.0, v2(3.0, 1.0)).unwrap();
        assert_eq!(pseudo_velocity(&s, &v2(3.0, 1.0)), v2(0.0, 0.0));
    }
}
