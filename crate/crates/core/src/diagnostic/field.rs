use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gas::{ConstantState, GasParams};
use crate::geom::Vec2;

/// Smooth density and pseudo-velocity with analytic derivatives.
///
/// `grad_v(ξ)[(i, j)] = ∂ⱼvᵢ` and `hess_v(ξ)[i][(a, b)] = ∂ₐ∂ᵦvᵢ`.
/// Vorticity here is `ω = ∂₁v₂ − ∂₂v₁`.
pub trait AnalyticField {
    fn rho(&self, xi: &Vec2) -> f64;
    fn grad_rho(&self, xi: &Vec2) -> Vec2;
    fn v(&self, xi: &Vec2) -> Vec2;
    fn grad_v(&self, xi: &Vec2) -> Matrix2<f64>;
    fn hess_v(&self, xi: &Vec2) -> [Matrix2<f64>; 2];

    fn omega(&self, xi: &Vec2) -> f64 {
        let g = self.grad_v(xi);
        g[(1, 0)] - g[(0, 1)]
    }

    fn grad_omega(&self, xi: &Vec2) -> Vec2 {
        let [h1, h2] = self.hess_v(xi);
        Vec2::new(h2[(0, 0)] - h1[(0, 1)], h2[(1, 0)] - h1[(1, 1)])
    }

    /// `X = ω/ρ`.
    fn ratio(&self, xi: &Vec2) -> f64 {
        self.omega(xi) / self.rho(xi)
    }

    fn grad_ratio(&self, xi: &Vec2) -> Vec2 {
        let (r, w) = (self.rho(xi), self.omega(xi));
        self.grad_omega(xi) / r - self.grad_rho(xi) * (w / (r * r))
    }
}

/// Uniform state `ρ ≡ ρ₀`, `v = u − ξ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstantField {
    pub state: ConstantState,
}

impl AnalyticField for ConstantField {
    fn rho(&self, _: &Vec2) -> f64 {
        self.state.rho
    }

    fn grad_rho(&self, _: &Vec2) -> Vec2 {
        Vec2::zeros()
    }

    fn v(&self, xi: &Vec2) -> Vec2 {
        self.state.u - xi
    }

    fn grad_v(&self, _: &Vec2) -> Matrix2<f64> {
        -Matrix2::identity()
    }

    fn hess_v(&self, _: &Vec2) -> [Matrix2<f64>; 2] {
        [Matrix2::zeros(), Matrix2::zeros()]
    }
}

/// `amp · sin(k·ξ + phase)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mode {
    pub amp: f64,
    pub k: Vec2,
    pub phase: f64,
}

impl Mode {
    pub fn new(amp: f64, k: Vec2, phase: f64) -> Self {
        Self { amp, k, phase }
    }

    fn value(&self, xi: &Vec2) -> f64 {
        self.amp * (self.k.dot(xi) + self.phase).sin()
    }

    fn grad(&self, xi: &Vec2) -> Vec2 {
        self.k * (self.amp * (self.k.dot(xi) + self.phase).cos())
    }

    fn hess(&self, xi: &Vec2) -> Matrix2<f64> {
        self.k * self.k.transpose() * (-self.amp * (self.k.dot(xi) + self.phase).sin())
    }
}

/// Manufactured field `ρ = ρ₀ + Σ modes`, `vᵢ = uᵢ − ξᵢ + Σ modes`. It solves
/// nothing in general; it exercises identities that hold for any smooth
/// field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrigField {
    pub rho0: f64,
    pub rho_modes: Vec<Mode>,
    pub u: Vec2,
    pub v_modes: [Vec<Mode>; 2],
}

impl TrigField {
    /// Rejects mode sets that could drive the density to zero.
    pub fn new(rho0: f64, rho_modes: Vec<Mode>, u: Vec2, v_modes: [Vec<Mode>; 2]) -> Result<Self> {
        let swing: f64 = rho_modes.iter().map(|m| m.amp.abs()).sum();
        if !(rho0 - swing > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "density base {rho0} does not exceed the total mode amplitude {swing}"
            )));
        }
        Ok(Self { rho0, rho_modes, u, v_modes })
    }
}

impl AnalyticField for TrigField {
    fn rho(&self, xi: &Vec2) -> f64 {
        self.rho0 + self.rho_modes.iter().map(|m| m.value(xi)).sum::<f64>()
    }

    fn grad_rho(&self, xi: &Vec2) -> Vec2 {
        self.rho_modes.iter().fold(Vec2::zeros(), |a, m| a + m.grad(xi))
    }

    fn v(&self, xi: &Vec2) -> Vec2 {
        let s = |i: usize| self.v_modes[i].iter().map(|m| m.value(xi)).sum::<f64>();
        self.u - xi + Vec2::new(s(0), s(1))
    }

    fn grad_v(&self, xi: &Vec2) -> Matrix2<f64> {
        let mut g = -Matrix2::identity();
        for i in 0..2 {
            for m in &self.v_modes[i] {
                let d = m.grad(xi);
                g[(i, 0)] += d.x;
                g[(i, 1)] += d.y;
            }
        }
        g
    }

    fn hess_v(&self, xi: &Vec2) -> [Matrix2<f64>; 2] {
        let h = |i: usize| self.v_modes[i].iter().fold(Matrix2::zeros(), |a, m| a + m.hess(xi));
        [h(0), h(1)]
    }
}

/// Residuals of the self-similar system and of the vorticity transport
/// equations at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PdeResiduals {
    /// `div(ρv) + 2ρ`.
    pub mass: f64,
    /// `(v·∇)v + v + ∇h(ρ)`.
    pub momentum: [f64; 2],
    /// `v·∇ω + (1 + div v) ω`.
    pub transport: f64,
    /// `v·∇X − X` with `X = ω/ρ`.
    pub ratio_transport: f64,
}

pub fn pde_residuals<F: AnalyticField + ?Sized>(field: &F, params: &GasParams, at: &Vec2) -> PdeResiduals {
    let (rho, grho, v, gv) = (field.rho(at), field.grad_rho(at), field.v(at), field.grad_v(at));
    let div = gv[(0, 0)] + gv[(1, 1)];
    let conv = gv * v;
    // ∇h = ρ^{γ−2} ∇ρ
    let gh = grho * rho.powf(params.gamma() - 2.0);
    let omega = field.omega(at);
    let x = omega / rho;
    PdeResiduals {
        mass: grho.dot(&v) + rho * div + 2.0 * rho,
        momentum: [conv.x + v.x + gh.x, conv.y + v.y + gh.y],
        transport: v.dot(&field.grad_omega(at)) + (1.0 + div) * omega,
        ratio_transport: v.dot(&field.grad_ratio(at)) - x,
    }
}
