//! WebAssembly bindings for the demo page in `www/`. Every export returns a
//! JSON string; errors become JavaScript exceptions carrying the message.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use shockreg::config::build::{build_configuration, ConfigKind, ProblemData};
use shockreg::config::export::{angle_sweep, geometry_export, GeometryExport};
use shockreg::config::validate::{validate_default, Thresholds};
use shockreg::config::{critical_angles, reflection_states, WedgeGeometry};
use shockreg::diagnostic::shock_functional;
use shockreg::geom::v2;
use shockreg::jump::shock_polar;
use shockreg::{GasParams, Result};

#[derive(Serialize)]
struct PolarPoint {
    beta: f64,
    /// Downstream pseudo-velocity.
    v: [f64; 2],
    rho: f64,
    entropy_ok: bool,
}

#[derive(Serialize)]
struct PolarOut {
    upstream_v: [f64; 2],
    sound_speed: f64,
    /// Wall direction at the reflection point.
    wall: [f64; 2],
    points: Vec<PolarPoint>,
}

/// Shock polar of state (1) at the reflection point of a symmetric wedge.
pub fn polar_json(gamma: f64, rho0: f64, rho1: f64, theta_w_deg: f64, samples: usize) -> Result<String> {
    let params = GasParams::new(gamma)?;
    let (_, s1, inc) = reflection_states(rho0, rho1, &params)?;
    let t = theta_w_deg.to_radians();
    let p0 = v2(inc.xi1_0, inc.xi1_0 * t.tan());
    let up = s1.at(&p0);
    let points = shock_polar(&up, &params, samples)?
        .into_iter()
        .map(|e| PolarPoint { beta: e.beta, v: [e.state.v.x, e.state.v.y], rho: e.state.rho, entropy_ok: e.entropy_ok })
        .collect();
    let out = PolarOut {
        upstream_v: [up.v.x, up.v.y],
        sound_speed: params.sound_speed(up.rho),
        wall: [t.cos(), t.sin()],
        points,
    };
    Ok(serde_json::to_string(&out)?)
}

#[derive(Serialize)]
struct SweepOut {
    detachment_deg: f64,
    sonic_deg: f64,
    theta_deg: Vec<f64>,
    rho_weak: Vec<Option<f64>>,
    rho_strong: Vec<Option<f64>>,
    mach_weak: Vec<Option<f64>>,
}

/// Weak and strong corner densities over wedge angles in `(0°, 90°)`.
pub fn sweep_json(gamma: f64, rho0: f64, rho1: f64, samples: usize) -> Result<String> {
    let params = GasParams::new(gamma)?;
    let crit = critical_angles(rho0, rho1, &params)?;
    let n = samples.max(2);
    let grid: Vec<f64> = (0..n).map(|k| ((k as f64 + 0.5) * 90.0 / n as f64).to_radians()).collect();
    let rows = angle_sweep(rho0, rho1, &params, &grid)?;
    let out = SweepOut {
        detachment_deg: crit.detachment.to_degrees(),
        sonic_deg: crit.sonic.angle.to_degrees(),
        theta_deg: rows.iter().map(|r| r.theta_w.to_degrees()).collect(),
        rho_weak: rows.iter().map(|r| r.rho2_weak).collect(),
        rho_strong: rows.iter().map(|r| r.rho2_strong).collect(),
        mach_weak: rows.iter().map(|r| r.mach_at_p0).collect(),
    };
    Ok(serde_json::to_string(&out)?)
}

#[derive(Serialize)]
struct ConfigOut {
    geometry: GeometryExport,
    passed: bool,
    failed: Vec<String>,
    functional: Option<f64>,
}

/// Regular reflection off a wedge with half-angles `theta1`, `theta2`
/// (degrees): geometry, check outcome and the boundary functional.
pub fn reflection_json(gamma: f64, rho0: f64, rho1: f64, theta1_deg: f64, theta2_deg: f64) -> Result<String> {
    let params = GasParams::new(gamma)?;
    let wedge = WedgeGeometry::new(theta1_deg.to_radians(), theta2_deg.to_radians())?;
    let kind = if wedge.symmetric { ConfigKind::RegularReflectionSym } else { ConfigKind::RegularReflectionNonsym };
    let cfg = build_configuration(kind, &params, &ProblemData::Reflection { rho0, rho1, wedge })?;
    let report = validate_default(&cfg, &Thresholds::default());
    let functional = if report.passed() { shock_functional(&cfg, 1.0, 64).ok().map(|r| r.value) } else { None };
    let out = ConfigOut {
        geometry: geometry_export(&cfg),
        passed: report.passed(),
        failed: report.failures().iter().map(|c| c.condition.clone()).collect(),
        functional,
    };
    Ok(serde_json::to_string(&out)?)
}

fn js(r: Result<String>) -> std::result::Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e.to_string()))
}

#[wasm_bindgen]
pub fn polar(gamma: f64, rho0: f64, rho1: f64, theta_w_deg: f64, samples: usize) -> std::result::Result<String, JsValue> {
    js(polar_json(gamma, rho0, rho1, theta_w_deg, samples))
}

#[wasm_bindgen]
pub fn sweep(gamma: f64, rho0: f64, rho1: f64, samples: usize) -> std::result::Result<String, JsValue> {
    js(sweep_json(gamma, rho0, rho1, samples))
}

#[wasm_bindgen]
pub fn reflection(gamma: f64, rho0: f64, rho1: f64, theta1_deg: f64, theta2_deg: f64) -> std::result::Result<String, JsValue> {
    js(reflection_json(gamma, rho0, rho1, theta1_deg, theta2_deg))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exports_produce_json() {
        let p: serde_json::Value = serde_json::from_str(&polar_json(1.4, 1.0, 2.0, 55.0, 41).unwrap()).unwrap();
        assert_eq!(p["points"].as_array().unwrap().len(), 41);
        let s: serde_json::Value = serde_json::from_str(&sweep_json(1.4, 1.0, 2.0, 30).unwrap()).unwrap();
        assert!((s["detachment_deg"].as_f64().unwrap() - 48.958).abs() < 1e-2);
        let r: serde_json::Value = serde_json::from_str(&reflection_json(1.4, 1.0, 2.0, 60.0, 60.0).unwrap()).unwrap();
        assert_eq!(r["passed"], true);
        assert!(r["functional"].as_f64().unwrap() < 0.0);
        assert!(reflection_json(1.4, 1.0, 2.0, 30.0, 30.0).is_err());
    }
}
