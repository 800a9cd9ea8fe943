//! Admissible-structure checks of a built configuration.
//!
//! The interior solution in Ω is not computed. Checks that need the velocity
//! on Γint from the Ω side take it from a [`BoundaryState`] callback; the
//! default closure uses the Rankine–Hugoniot downstream state of the upstream
//! uniform state on shocks and the adjacent uniform state on sonic arcs.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::build::{Configuration, InteriorRole, SegmentRef};
use crate::error::{Error, Result};
use crate::gas::PointState;
use crate::geom::{cross, Vec2};
use crate::jump::{downstream_state, entropy_admissible, residual_norm, rh_residual, OrientedInterface};

/// Tolerances of the structural checks. `c_inv` is the lower bound for
/// `−v·ν` on Γ₁int; `sigma` the minimal distance between the wall corner and
/// Γint; `c0` the bound `|v| ≤ C₀`, `C₀⁻¹ ≤ ρ ≤ C₀` on sampled boundary data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub c_inv: f64,
    pub sigma: f64,
    pub c0: f64,
    pub samples: usize,
    pub tangent_tol: f64,
    pub curvature_tol: f64,
    pub tangential_tol: f64,
    pub sonic_tol: f64,
    pub rh_tol: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            c_inv: 1e-6,
            sigma: 1e-6,
            c0: 1e3,
            samples: 200,
            tangent_tol: 1e-8,
            curvature_tol: 1e-10,
            tangential_tol: 1e-10,
            sonic_tol: 1e-9,
            rh_tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// The condition in words.
    pub condition: String,
    pub passed: bool,
    /// Positive when satisfied, in the natural units of the check.
    pub margin: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn push(&mut self, name: &str, condition: &str, margin: f64, detail: String) {
        self.checks.push(Check {
            name: name.to_string(),
            condition: condition.to_string(),
            passed: margin > 0.0,
            margin,
            detail,
        });
    }
}

/// Ω-side state on interior curve `index` at `xi`, with `nu_out` the outer
/// unit normal of Ω there.
pub trait BoundaryState {
    fn omega_side(&self, cfg: &Configuration, index: usize, xi: &Vec2, nu_out: &Vec2) -> Result<PointState>;
}

impl<F> BoundaryState for F
where
    F: Fn(&Configuration, usize, &Vec2, &Vec2) -> Result<PointState>,
{
    fn omega_side(&self, cfg: &Configuration, index: usize, xi: &Vec2, nu_out: &Vec2) -> Result<PointState> {
        self(cfg, index, xi, nu_out)
    }
}

/// Default closure of the Ω-side data.
#[derive(Debug, Clone, Copy, Default)]
pub struct UniformClosure;

impl BoundaryState for UniformClosure {
    fn omega_side(&self, cfg: &Configuration, index: usize, xi: &Vec2, nu_out: &Vec2) -> Result<PointState> {
        let params = cfg.params();
        match cfg.gamma_int[index].role {
            InteriorRole::Shock { upstream } => {
                let up = cfg.states[upstream].state.at(xi);
                let iface = OrientedInterface::new(*xi, -nu_out)?;
                downstream_state(&up, &iface, &params)
            }
            InteriorRole::Sonic { state } => Ok(cfg.states[state].state.at(xi)),
        }
    }
}

/// Outer unit normal of Ω on a boundary segment at parameter `t` of the
/// segment's own parametrization.
pub fn outward_normal(cfg: &Configuration, seg: SegmentRef, t: f64) -> Result<Vec2> {
    let piece = cfg
        .boundary
        .iter()
        .find(|p| p.segment == seg)
        .ok_or_else(|| Error::Geometry(format!("segment {seg:?} is not on the boundary loop")))?;
    let left = cfg.segment(seg).normal(t);
    // counter-clockwise traversal: Ω lies to the left
    Ok(if piece.reversed { left } else { -left })
}

fn interior_params(n: usize) -> Vec<f64> {
    (1..n).map(|i| i as f64 / n as f64).collect()
}

fn closed_params(n: usize) -> Vec<f64> {
    (0..=n).map(|i| i as f64 / n as f64).collect()
}

/// Proper crossing of the segments `ab` and `cd`.
fn segments_cross(a: &Vec2, b: &Vec2, c: &Vec2, d: &Vec2) -> bool {
    let o = |p: &Vec2, q: &Vec2, r: &Vec2| cross(&(q - p), &(r - p));
    let (d1, d2, d3, d4) = (o(c, d, a), o(c, d, b), o(a, b, c), o(a, b, d));
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}

pub fn validate_admissible_structure(
    cfg: &Configuration,
    boundary: &dyn BoundaryState,
    th: &Thresholds,
) -> ValidationReport {
    let params = cfg.params();
    let mut rep = ValidationReport { checks: Vec::new() };

    // distinct neighbouring states
    let mut gap = f64::INFINITY;
    for (i, j) in &cfg.neighbors {
        let (a, b) = (&cfg.states[*i].state, &cfg.states[*j].state);
        gap = gap.min((a.rho - b.rho).abs() + (a.u - b.u).norm());
    }
    rep.push(
        "neighbor_states_differ",
        "uniform states sharing a boundary are not equal",
        gap,
        format!("{} neighbouring pairs", cfg.neighbors.len()),
    );

    // closed, simple, counter-clockwise boundary loop
    let curves = cfg.boundary_curves();
    let mut gap_max: f64 = 0.0;
    for k in 0..curves.len() {
        let e = curves[k].1.end();
        let s = curves[(k + 1) % curves.len()].1.start();
        gap_max = gap_max.max((e - s).norm());
    }
    let poly: Vec<Vec<Vec2>> = curves.iter().map(|(_, c)| c.sample(65)).collect();
    let mut crossings = 0usize;
    let segs: Vec<(usize, Vec2, Vec2)> = poly
        .iter()
        .enumerate()
        .flat_map(|(k, p)| p.windows(2).map(move |w| (k, w[0], w[1])))
        .collect();
    for i in 0..segs.len() {
        for j in (i + 2)..segs.len() {
            if i == 0 && j == segs.len() - 1 {
                continue;
            }
            if segments_cross(&segs[i].1, &segs[i].2, &segs[j].1, &segs[j].2) {
                crossings += 1;
            }
        }
    }
    let signed_area: f64 = segs.iter().map(|(_, a, b)| 0.5 * cross(a, b)).sum();
    rep.push(
        "boundary_closed_simple",
        "∂Ω is a closed, non-self-intersecting, counter-clockwise loop",
        if crossings == 0 && gap_max < 1e-9 && signed_area > 0.0 { signed_area } else { -1.0 },
        format!("max joint gap {gap_max:.2e}, {crossings} crossings, signed area {signed_area:.6}"),
    );

    // interior angles at the joints
    let mut ang_margin = f64::INFINITY;
    let mut angles = Vec::new();
    for k in 0..curves.len() {
        let a = curves[k].1.tangent(1.0);
        let b = curves[(k + 1) % curves.len()].1.tangent(0.0);
        let turn = cross(&a, &b).atan2(a.dot(&b));
        let interior = PI - turn;
        angles.push(interior);
        ang_margin = ang_margin.min(interior.min(2.0 * PI - interior));
    }
    rep.push(
        "corner_angles",
        "interior angles of Ω at boundary joints lie in (0, 2π)",
        ang_margin,
        format!("angles (deg): {:?}", angles.iter().map(|a| (a.to_degrees() * 1e3).round() / 1e3).collect::<Vec<_>>()),
    );

    // wall corner away from Γint
    if let Some(p0) = cfg.corner {
        let mut dist = f64::INFINITY;
        for ic in &cfg.gamma_int {
            for t in closed_params(th.samples) {
                dist = dist.min((ic.curve.point(t) - p0).norm());
            }
        }
        rep.push(
            "corner_separated",
            "the wall corner does not lie on the closure of Γint",
            dist - th.sigma,
            format!("distance {dist:.6e}"),
        );
    }

    // straight shocks between uniform regions
    let mut ent_margin = f64::INFINITY;
    let mut rh_max: f64 = 0.0;
    let mut ent_detail = String::new();
    for us in &cfg.uniform_shocks {
        let d = us.b - us.a;
        let mut n = Vec2::new(d.y, -d.x).normalize();
        let up = &cfg.states[us.upstream].state;
        let dn = &cfg.states[us.downstream].state;
        if (up.u - us.a).dot(&n) < 0.0 {
            n = -n;
        }
        for k in 0..20 {
            let xi = us.a + d * ((k as f64 + 0.5) / 20.0);
            let iface = match OrientedInterface::new(xi, n) {
                Ok(i) => i,
                Err(_) => continue,
            };
            let (m, p) = (up.at(&xi), dn.at(&xi));
            rh_max = rh_max.max(residual_norm(&rh_residual(&m, &p, &iface, &params)));
            match entropy_admissible(&m, &p, &iface, &params) {
                Ok(r) => ent_margin = ent_margin.min(r.min_margin()),
                Err(e) => {
                    ent_margin = f64::NEG_INFINITY;
                    ent_detail = format!("{}: {e}", us.name);
                }
            }
        }
    }
    if !cfg.uniform_shocks.is_empty() {
        let margin = if rh_max <= th.rh_tol { ent_margin } else { -rh_max };
        rep.push(
            "uniform_shocks_entropy",
            "straight shocks between uniform states satisfy Rankine–Hugoniot and the entropy inequalities",
            margin,
            format!("{} shocks, max R-H residual {rh_max:.2e} {ent_detail}", cfg.uniform_shocks.len()),
        );
    }

    // boundary data on Γint
    let mut shock_vn_max = f64::NEG_INFINITY;
    let mut other_vn_max = f64::NEG_INFINITY;
    let mut sonic_dev: f64 = 0.0;
    let mut subsonic_margin = f64::INFINITY;
    let mut bound_margin = f64::INFINITY;
    let mut data_error = None;
    let mut shock_data: Vec<(f64, PointState, Vec2)> = Vec::new();
    for (i, ic) in cfg.gamma_int.iter().enumerate() {
        for t in closed_params(th.samples) {
            let xi = ic.curve.point(t);
            let nu = match outward_normal(cfg, SegmentRef::Int(i), t) {
                Ok(n) => n,
                Err(e) => {
                    data_error = Some(e.to_string());
                    continue;
                }
            };
            let st = match boundary.omega_side(cfg, i, &xi, &nu) {
                Ok(s) => s,
                Err(e) => {
                    data_error = Some(format!("{} at t={t:.3}: {e}", ic.curve.name));
                    continue;
                }
            };
            let vn = st.v.dot(&nu);
            let c = params.sound_speed(st.rho);
            bound_margin = bound_margin
                .min(th.c0 - st.v.norm())
                .min(st.rho - 1.0 / th.c0)
                .min(th.c0 - st.rho);
            if i == 0 {
                shock_vn_max = shock_vn_max.max(vn);
                if t > 0.0 && t < 1.0 {
                    subsonic_margin = subsonic_margin.min(c - st.v.norm());
                }
                shock_data.push((t, st, xi));
            } else {
                other_vn_max = other_vn_max.max(vn);
                if matches!(ic.role, InteriorRole::Sonic { .. }) {
                    sonic_dev = sonic_dev.max((vn + c).abs());
                }
            }
        }
    }
    if let Some(e) = &data_error {
        rep.push("boundary_data", "Ω-side data is available on Γint", -1.0, e.clone());
    }
    rep.push(
        "shock_normal_velocity",
        "v·ν ≤ −C⁻¹ on Γ₁int",
        -th.c_inv - shock_vn_max,
        format!("max v·ν = {shock_vn_max:.6e}, C⁻¹ = {:.1e}", th.c_inv),
    );
    if cfg.gamma_int.len() > 1 {
        rep.push(
            "interior_normal_velocity",
            "v·ν ≤ 0 on the other interior curves",
            if other_vn_max <= 0.0 { -other_vn_max + f64::MIN_POSITIVE } else { -other_vn_max },
            format!("max v·ν = {other_vn_max:.6e}"),
        );
    }
    if cfg.gamma_int.iter().any(|c| matches!(c.role, InteriorRole::Sonic { .. })) {
        rep.push(
            "sonic_normal_velocity",
            "v·ν = −c on sonic arcs",
            th.sonic_tol - sonic_dev,
            format!("max |v·ν + c| = {sonic_dev:.3e}"),
        );
    }
    rep.push(
        "subsonic_on_shock",
        "|v| < c on Γ₁int from the Ω side",
        subsonic_margin,
        format!("min c − |v| = {subsonic_margin:.6e}"),
    );
    rep.push(
        "state_bounds",
        "|v| ≤ C₀ and C₀⁻¹ ≤ ρ ≤ C₀ on sampled boundary data",
        bound_margin,
        format!("C₀ = {}", th.c0),
    );

    // the distinguished shock
    let shock = &cfg.gamma_int[0];
    rep.push(
        "shock_borders_uniform_region",
        "Γ₁int is a shock bordering a single uniform region",
        if matches!(shock.role, InteriorRole::Shock { .. }) { 1.0 } else { -1.0 },
        format!("{:?}", shock.role),
    );
    // either end point may play the role of the distinguished end point
    let mut ends = Vec::new();
    for t_end in [0.0, 1.0] {
        let tau = shock.curve.tangent(t_end);
        let mut turn: f64 = 0.0;
        for t in closed_params(th.samples) {
            turn = turn.max(cross(&tau, &shock.curve.tangent(t)).abs());
        }
        let vt = shock_data.iter().find(|d| d.0 == t_end).map(|d| d.1.v.dot(&tau));
        ends.push((t_end, turn, vt));
    }
    let score = |e: &(f64, f64, Option<f64>)| {
        (e.1 - th.tangent_tol).min(e.2.map(|v| v.abs() - th.tangential_tol).unwrap_or(-1.0))
    };
    let end = *ends.iter().max_by(|a, b| score(a).total_cmp(&score(b))).expect("two end points");
    let label = if end.0 == 0.0 { "start" } else { "end" };
    rep.push(
        "shock_not_straight",
        "Γ₁int is not a straight segment: some tangent differs from ±τ at the chosen end point",
        end.1 - th.tangent_tol,
        format!("{label} point, max |τ(P₁) × τ(P*)| = {:.6e}", end.1),
    );
    rep.push(
        "endpoint_tangential_velocity",
        "v·τ ≠ 0 at the chosen end point of Γ₁int",
        end.2.map(|v| v.abs() - th.tangential_tol).unwrap_or(-1.0),
        format!("{label} point, v·τ = {:?}", end.2),
    );
    let mut best: f64 = 0.0;
    for t in interior_params(th.samples) {
        let k = shock.curve.curvature(t).abs();
        if let Some(d) = shock_data.iter().find(|d| d.0 == t) {
            let vt = d.1.v.dot(&shock.curve.tangent(t)).abs();
            if k > th.curvature_tol && vt > th.tangential_tol {
                best = best.max((k * vt).min(k).min(vt));
            }
        }
    }
    rep.push(
        "curvature_and_tangential_velocity",
        "some interior point of Γ₁int has nonzero curvature and nonzero v·τ",
        if best > 0.0 { best } else { -1.0 },
        format!("best min(|κ|, |v·τ|, |κ v·τ|) = {best:.6e}"),
    );
    rep
}

pub fn validate_default(cfg: &Configuration, th: &Thresholds) -> ValidationReport {
    validate_admissible_structure(cfg, &UniformClosure, th)
}

/// Ω-side data on Γ₁int at `t` under the default closure.
pub fn shock_side_state(cfg: &Configuration, t: f64) -> Result<(Vec2, PointState, Vec2)> {
    let xi = cfg.gamma_int[0].curve.point(t);
    let nu = outward_normal(cfg, SegmentRef::Int(0), t)?;
    let st = UniformClosure.omega_side(cfg, 0, &xi, &nu)?;
    Ok((xi, st, nu))
}

