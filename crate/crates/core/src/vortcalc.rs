//! Velocity gradients from `(∇ρ, ω)` and the vorticity on a curved shock.
//!
//! Vorticity is `ω = ∂₂v₁ − ∂₁v₂` throughout this module. Shock-point data
//! lives in an aligned frame: the origin is the shock point, `ξ₁` runs along
//! the shock tangent and the shock is locally the graph `ξ₂ = f_s(ξ₁)` with
//! `f_s′(0) = 0`, so `f_s″(0)` is the signed curvature.

use nalgebra::{Matrix2, Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gas::{GasParams, PointState};
use crate::geom::{cross, Vec2};
use crate::jump::{downstream_state, OrientedInterface};

/// Tolerance on the Rankine–Hugoniot relations required by the closed form.
pub const RH_POINT_TOL: f64 = 1e-10;

/// Rotation taking a unit tangent onto the `ξ₁` axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlignedFrame {
    pub origin: Vec2,
    pub tangent: Vec2,
}

impl AlignedFrame {
    pub fn new(origin: Vec2, tangent: Vec2) -> Result<Self> {
        let n = tangent.norm();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::Geometry("aligned frame needs a nonzero tangent".into()));
        }
        Ok(Self { origin, tangent: tangent / n })
    }

    pub fn vector_to_local(&self, w: &Vec2) -> Vec2 {
        Vec2::new(w.dot(&self.tangent), cross(&self.tangent, w))
    }

    pub fn vector_to_global(&self, w: &Vec2) -> Vec2 {
        let t = self.tangent;
        Vec2::new(t.x * w.x - t.y * w.y, t.y * w.x + t.x * w.y)
    }

    pub fn point_to_local(&self, p: &Vec2) -> Vec2 {
        self.vector_to_local(&(p - self.origin))
    }

    pub fn point_to_global(&self, p: &Vec2) -> Vec2 {
        self.origin + self.vector_to_global(p)
    }
}

/// Shock point in the aligned frame: `(rho, v)` from the Ω side, `(rho1,
/// v_minus)` from the upstream uniform state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShockPointData {
    pub rho: f64,
    pub v: Vec2,
    pub rho1: f64,
    pub v_minus: Vec2,
    pub p: f64,
    pub p1: f64,
    pub c: f64,
    pub fs2: f64,
}

impl ShockPointData {
    /// Data from aligned-frame velocities.
    pub fn new(rho: f64, v: Vec2, rho1: f64, v_minus: Vec2, fs2: f64, params: &GasParams) -> Result<Self> {
        let d = Self {
            rho,
            v,
            rho1,
            v_minus,
            p: params.pressure(rho),
            p1: params.pressure(rho1),
            c: params.sound_speed(rho),
            fs2,
        };
        d.check()?;
        Ok(d)
    }

    /// Data from global-frame states at a shock point with unit tangent
    /// `tangent` and signed curvature `curvature` (positive when the curve
    /// turns towards the left of `tangent`).
    pub fn from_global(
        omega_side: &PointState,
        upstream: &PointState,
        tangent: &Vec2,
        curvature: f64,
        params: &GasParams,
    ) -> Result<Self> {
        let fr = AlignedFrame::new(Vec2::zeros(), *tangent)?;
        Self::new(
            omega_side.rho,
            fr.vector_to_local(&omega_side.v),
            upstream.rho,
            fr.vector_to_local(&upstream.v),
            curvature,
            params,
        )
    }

    /// Data on the downstream side of a shock with normal `−e₂` hit by the
    /// aligned-frame upstream velocity `v_minus` (which needs `v_minus.y`
    /// below `−c₁`).
    pub fn from_upstream(rho1: f64, v_minus: Vec2, fs2: f64, params: &GasParams) -> Result<Self> {
        let up = PointState::new(rho1, v_minus)?;
        let iface = OrientedInterface::new(Vec2::zeros(), Vec2::new(0.0, -1.0))?;
        let dn = downstream_state(&up, &iface, params)?;
        Self::new(dn.rho, dn.v, rho1, v_minus, fs2, params)
    }

    fn check(&self) -> Result<()> {
        if !(self.rho > 0.0 && self.rho1 > 0.0) {
            return Err(Error::InvalidParameter("densities must be positive".into()));
        }
        if self.v.y == 0.0 {
            return Err(Error::Precondition("normal pseudo-velocity vanishes at the shock point".into()));
        }
        if self.c * self.c == self.v.y * self.v.y {
            return Err(Error::Precondition("normal pseudo-velocity equals the sound speed at the shock point".into()));
        }
        Ok(())
    }

    /// True when `|v| < c` on the Ω side.
    pub fn is_subsonic(&self) -> bool {
        self.v.norm() < self.c
    }

    /// Rankine–Hugoniot defects at the point: mass flux, tangential velocity,
    /// normal momentum.
    pub fn rh_defect(&self) -> [f64; 3] {
        let (v, w) = (self.v, self.v_minus);
        [
            self.rho * v.y - self.rho1 * w.y,
            v.x - w.x,
            self.rho * v.y * v.y + self.p - self.rho1 * w.y * w.y - self.p1,
        ]
    }
}

/// `∂vᵢ/∂ξⱼ` from the density gradient and vorticity of a smooth solution.
pub fn velocity_gradient_from_state(
    rho: f64,
    v: &Vec2,
    grad_rho: &Vec2,
    omega: f64,
    params: &GasParams,
) -> Result<Matrix2<f64>> {
    let q2 = v.norm_squared();
    if !(q2 > 0.0) {
        return Err(Error::Precondition("pseudo-velocity vanishes; gradient frame is singular".into()));
    }
    if !(rho > 0.0) {
        return Err(Error::InvalidParameter(format!("density {rho} must be positive")));
    }
    let c2 = params.sound_speed(rho).powi(2);
    let (v1, v2) = (v.x, v.y);
    let (rx, ry) = (grad_rho.x, grad_rho.y);
    let k = rho * q2;
    let a11 = -1.0 - (c2 + v2 * v2) / k * v1 * rx + (c2 - v2 * v2) / k * v2 * ry - v1 * v2 / q2 * omega;
    let a12 = -(c2 - v1 * v1) / k * v2 * rx - (c2 - v2 * v2) / k * v1 * ry + v1 * v1 / q2 * omega;
    let a21 = -(c2 - v1 * v1) / k * v2 * rx - (c2 - v2 * v2) / k * v1 * ry - v2 * v2 / q2 * omega;
    let a22 = -1.0 + (c2 - v1 * v1) / k * v1 * rx - (c2 + v1 * v1) / k * v2 * ry + v1 * v2 / q2 * omega;
    Ok(Matrix2::new(a11, a12, a21, a22))
}

/// Residuals of mass, both momentum components and the vorticity
/// definition for a gradient `g` at `(rho, v, grad_rho, omega)`.
pub fn gradient_residuals(
    rho: f64,
    v: &Vec2,
    grad_rho: &Vec2,
    omega: f64,
    g: &Matrix2<f64>,
    params: &GasParams,
) -> [f64; 4] {
    let c2 = params.sound_speed(rho).powi(2);
    [
        v.dot(grad_rho) + rho * (g[(0, 0)] + g[(1, 1)]) + 2.0 * rho,
        v.x * g[(0, 0)] + v.y * g[(0, 1)] + v.x + c2 / rho * grad_rho.x,
        v.x * g[(1, 0)] + v.y * g[(1, 1)] + v.y + c2 / rho * grad_rho.y,
        g[(1, 0)] - g[(0, 1)] + omega,
    ]
}

/// Linear system for `(∂₁ρ, ∂₂ρ, ω)` at a shock point.
pub fn shock_vorticity_system(d: &ShockPointData) -> (Matrix3<f64>, Vector3<f64>) {
    let (v1, v2) = (d.v.x, d.v.y);
    let (c2, rho) = (d.c * d.c, d.rho);
    let q2 = v1 * v1 + v2 * v2;
    let m = Matrix3::new(
        (c2 - 2.0 * v1 * v1 - v2 * v2) * v2,
        (c2 - v2 * v2) * v1,
        rho * v2 * v2,
        2.0 * (c2 - v1 * v1) * v1 * v2,
        -(c2 - v2 * v2) * (v2 * v2 - v1 * v1),
        2.0 * rho * v1 * v2 * v2,
        3.0 * v1 * v1 * v2 * v2 + v1 * v1 * c2 + v2.powi(4) - v2 * v2 * c2,
        -2.0 * (c2 - v2 * v2) * v1 * v2,
        -2.0 * rho * v2.powi(3),
    );
    let w1 = d.v_minus.x;
    let d1 = -q2 * (rho * v1 - d.rho1 * w1);
    let d2 = -q2 * (rho * v1 * v1 + d.p - d.rho1 * w1 * w1 - d.p1);
    (m, Vector3::new(d1 * d.fs2, d2 * d.fs2, 0.0))
}

/// Determinant of [`shock_vorticity_system`]: `ρ v₂² (c² − v₂²)² |v|⁴`.
pub fn system_determinant(d: &ShockPointData) -> f64 {
    let v2 = d.v.y;
    let q2 = d.v.norm_squared();
    d.rho * v2 * v2 * (d.c * d.c - v2 * v2).powi(2) * q2 * q2
}

/// `(∂₁ρ, ∂₂ρ, ω)` by a direct solve of the shock system.
pub fn solve_shock_system(d: &ShockPointData) -> Result<Vector3<f64>> {
    let (m, rhs) = shock_vorticity_system(d);
    m.lu().solve(&rhs).ok_or_else(|| Error::Numerical("shock vorticity system is singular".into()))
}

/// Vorticity on the shock from the Ω side,
/// `ω = v₁((ρ − ρ₁)v₂² − (p − p₁)) f_s″ / (ρ v₂²)`, which under the
/// Rankine–Hugoniot relations equals `−v₁ (ρ − ρ₁)² f_s″ / (ρ ρ₁)`.
pub fn shock_vorticity_closed_form(d: &ShockPointData) -> Result<f64> {
    let r = d.rh_defect();
    let scale = 1.0 + d.rho * d.v.y * d.v.y + d.p;
    if r.iter().any(|x| x.abs() > RH_POINT_TOL * scale) {
        return Err(Error::Precondition(format!(
            "the closed form holds only on the shock: Rankine–Hugoniot defects {r:?} exceed {RH_POINT_TOL:e}"
        )));
    }
    let v2 = d.v.y;
    Ok(d.v.x * ((d.rho - d.rho1) * v2 * v2 - (d.p - d.p1)) * d.fs2 / (d.rho * v2 * v2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::v2;


    fn gas() -> GasParams {
        GasParams::new(1.4).unwrap()
    }

    fn shock_point(fs2: f64) -> ShockPointData {
        let g = gas();
        let up = PointState { rho: 1.0, v: v2(0.3, -2.0) };
        let iface = OrientedInterface::new(Vec2::zeros(), v2(0.0, -1.0)).unwrap();
        let dn = downstream_state(&up, &iface, &g).unwrap();
        ShockPointData::new(dn.rho, dn.v, up.rho, up.v, fs2, &g).unwrap()
    }

    #[test]
    fn constant_state_gradient_is_minus_identity() {
        let g = velocity_gradient_from_state(1.3, &v2(0.4, -0.2), &Vec2::zeros(), 0.0, &gas()).unwrap();
        assert_eq!(g, -Matrix2::identity());
        assert!(velocity_gradient_from_state(1.0, &Vec2::zeros(), &Vec2::zeros(), 0.0, &gas()).is_err());
    }

    #[test]
    fn straight_shock_has_zero_rhs_and_vorticity() {
        let d = shock_point(0.0);
        assert_eq!(shock_vorticity_system(&d).1, Vector3::zeros());
        assert_eq!(shock_vorticity_closed_form(&d).unwrap(), 0.0);
    }

    #[test]
    fn closed_form_matches_direct_solve() {
        let d = shock_point(0.7);
        let w = shock_vorticity_closed_form(&d).unwrap();
        let s = solve_shock_system(&d).unwrap();
        assert!((w - s[2]).abs() <= 1e-10 * w.abs());
        let alt = -d.v.x * (d.rho - d.rho1).powi(2) * d.fs2 / (d.rho * d.rho1);
        assert!((w - alt).abs() <= 1e-12 * w.abs());
        let det = shock_vorticity_system(&d).0.determinant();
        assert!((det - system_determinant(&d)).abs() <= 1e-12 * det.abs());
    }

    #[test]
    fn closed_form_rejects_off_shock_data() {
        let mut d = shock_point(1.0);
        d.rho *= 1.01;
        assert!(shock_vorticity_closed_form(&d).is_err());
    }

    #[test]
    fn frame_round_trip() {
        let fr = AlignedFrame::new(v2(1.0, 2.0), v2(3.0, 4.0)).unwrap();
        let p = v2(-0.5, 0.25);
        assert!((fr.point_to_global(&fr.point_to_local(&p)) - p).norm() < 1e-15);
        assert!((fr.vector_to_local(&v2(0.6, 0.8)) - v2(1.0, 0.0)).norm() < 1e-15);
    }
}
