use std::io::Write;

use serde::{Deserialize, Serialize};

use super::quad::gauss_legendre;
use crate::config::build::{Configuration, ShockModel};
use crate::config::validate::{shock_side_state, validate_default, Thresholds};
use crate::error::{Error, Result};
use crate::geom::Vec2;
use crate::vortcalc::{shock_vorticity_closed_form, ShockPointData};

/// Default number of line-quadrature nodes on the shock.
pub const SHOCK_NODES: usize = 64;

/// Data at one quadrature node of Γ₁int.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShockSample {
    pub t: f64,
    pub xi: Vec2,
    pub rho: f64,
    /// `v·ν` with `ν` the outer normal of Ω.
    pub v_normal: f64,
    /// Scaled signed curvature used in the closed form.
    pub curvature: f64,
    pub omega: f64,
    pub x: f64,
    /// Quadrature weight times `|dξ/dt|`.
    pub weight: f64,
    pub integrand: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContradictionReport {
    pub shock_model: ShockModel,
    pub curvature_scale: f64,
    pub nodes: usize,
    /// `∫_{Γ₁int} ρ X² (v·ν) dl`.
    pub value: f64,
    /// `−value`; positive when the functional is strictly negative.
    pub margin: f64,
    pub max_abs_x: f64,
    pub max_v_normal: f64,
    pub samples: Vec<ShockSample>,
}

impl ContradictionReport {
    pub fn write_json<W: Write>(&self, out: W) -> Result<()> {
        serde_json::to_writer_pretty(out, self)?;
        Ok(())
    }
}

/// `∫_{Γ₁int} ρ X² (v·ν) dl` with the Ω-side state from the uniform closure,
/// `X = ω/ρ` from the closed form on the shock, and the shock curvature
/// multiplied by `curvature_scale`. No structural validation is done.
pub fn shock_functional(cfg: &Configuration, curvature_scale: f64, nodes: usize) -> Result<ContradictionReport> {
    if nodes == 0 {
        return Err(Error::InvalidParameter("the shock quadrature needs at least one node".into()));
    }
    if !curvature_scale.is_finite() {
        return Err(Error::InvalidParameter(format!("curvature scale {curvature_scale} is not finite")));
    }
    let params = cfg.params();
    let (curve, upstream) = cfg.principal_shock()?;
    let mut samples = Vec::with_capacity(nodes);
    for (t, w) in gauss_legendre(nodes) {
        let (xi, state, nu) = shock_side_state(cfg, t)?;
        let tangent = curve.tangent(t);
        let kappa = curve.curvature(t) * curvature_scale;
        let d = ShockPointData::from_global(&state, &upstream.at(&xi), &tangent, kappa, &params)?;
        let omega = shock_vorticity_closed_form(&d)?;
        let x = omega / state.rho;
        let v_normal = state.v.dot(&nu);
        let weight = w * curve.d1(t).norm();
        samples.push(ShockSample {
            t,
            xi,
            rho: state.rho,
            v_normal,
            curvature: kappa,
            omega,
            x,
            weight,
            integrand: state.rho * x * x * v_normal,
        });
    }
    let value = samples.iter().map(|s| s.weight * s.integrand).sum::<f64>();
    Ok(ContradictionReport {
        shock_model: cfg.shock_model,
        curvature_scale,
        nodes,
        value,
        margin: -value,
        max_abs_x: samples.iter().fold(0.0, |a, s| a.max(s.x.abs())),
        max_v_normal: samples.iter().fold(f64::NEG_INFINITY, |a, s| a.max(s.v_normal)),
        samples,
    })
}

/// [`shock_functional`] on a configuration that passes the admissible
/// structure checks; refuses otherwise, naming the failed conditions.
pub fn contradiction_functional(cfg: &Configuration, th: &Thresholds) -> Result<ContradictionReport> {
    let report = validate_default(cfg, th);
    if !report.passed() {
        let list: Vec<String> = report.failures().iter().map(|c| format!("{} ({})", c.name, c.condition)).collect();
        return Err(Error::Precondition(format!(
            "the configuration is not an admissible structure: {}",
            list.join("; ")
        )));
    }
    shock_functional(cfg, 1.0, SHOCK_NODES)
}
