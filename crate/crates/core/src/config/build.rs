//! Builders for the reflection, diffraction and four-shock configurations.
//!
//! Each builder solves the uniform states, places the named points, and
//! describes the boundary of the subsonic domain Ω as a counter-clockwise
//! loop of exterior (wall, symmetry) and interior (shock, sonic) curves.
//! Interior shocks whose shape is not determined by uniform states are
//! modelled by cubic Hermite arcs matching the required end tangents.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::corner::{solve_corner, CornerProblem, CornerRoots, CornerState};
use super::{incident_shock_setup, reflection_corner, WedgeGeometry};
use crate::diagnostic::quad::QuadPatch;
use crate::error::{Error, Result};
use crate::gas::{check_density, ConstantState, GasParams};
use crate::geom::{line_circle, line_line, rot90, unit, v2, CurveKind, CurveSegment, Vec2};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConfigKind {
    RegularReflectionSym,
    RegularReflectionNonsym,
    Prandtl,
    Lighthill,
    FourShock,
}

/// Input data of each problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ProblemData {
    /// Incident shock between state (0) at rest and state (1) hitting a
    /// wedge with half-angles `wedge`.
    Reflection { rho0: f64, rho1: f64, wedge: WedgeGeometry },
    /// Uniform supersonic flow `(u_inf, 0)` past a ramp of angle `theta_w`.
    Prandtl { rho_inf: f64, u_inf: f64, theta_w: f64 },
    /// Incident shock passing a corner where the wall turns down by
    /// `theta_w ∈ (0, π)`.
    Lighthill { rho0: f64, rho1: f64, theta_w: f64 },
    /// Symmetric four-shock Riemann data: state (1) at rest, states (2) = (4)
    /// of density `rho2`, shock angles `theta1`, `theta2` with the axis.
    FourShock { rho1: f64, rho2: f64, theta1: f64, theta2: f64 },
}

/// Model used for the curved part of Γ₁int.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ShockModel {
    /// Cubic Bézier arc (stored in Hermite form) whose inner control points
    /// sit at fraction `bulge ∈ (0, 1]` of the way from each end point to the
    /// intersection of the two end tangent lines. `2/3` is the parabola.
    Hermite { bulge: f64 },
    /// Hermite arc whose bulge maximizes `c − |v|` along the shock on the Ω
    /// side under the uniform closure.
    Fitted,
    /// Straight chord between the end points (violates the end tangencies;
    /// useful only to exercise the validator).
    Straight,
}

pub const DEFAULT_BULGE: f64 = 2.0 / 3.0;
const FIT_SCAN: usize = 40;
const FIT_SAMPLES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BuildOptions {
    pub shock_model: ShockModel,
}

impl Default for BuildOptions {
    fn default() -> Self {
        Self { shock_model: ShockModel::Fitted }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub label: String,
    pub state: ConstantState,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SonicCircle {
    pub label: String,
    pub center: Vec2,
    pub radius: f64,
}

/// What lies across an interior curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InteriorRole {
    /// Shock with the given upstream region.
    Shock { upstream: usize },
    /// Sonic arc on which Ω is continuous with the given region.
    Sonic { state: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InteriorCurve {
    pub curve: CurveSegment,
    pub role: InteriorRole,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SegmentRef {
    Ext(usize),
    Int(usize),
}

/// One piece of the counter-clockwise boundary loop of Ω.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoopPiece {
    pub segment: SegmentRef,
    pub reversed: bool,
}

/// Straight shock between two uniform regions, truncated to a segment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniformShock {
    pub name: String,
    pub a: Vec2,
    pub b: Vec2,
    pub upstream: usize,
    pub downstream: usize,
}

fn ushock(name: &str, a: Vec2, b: Vec2, upstream: usize, downstream: usize) -> UniformShock {
    UniformShock { name: name.to_string(), a, b, upstream, downstream }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CornerType {
    Supersonic,
    Subsonic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Configuration {
    pub kind: ConfigKind,
    pub gamma: f64,
    pub data: ProblemData,
    /// Uniform regions Λᵢ; equal states in separate regions are listed twice.
    pub states: Vec<Region>,
    /// Pairs of regions that share a boundary.
    pub neighbors: Vec<(usize, usize)>,
    pub points: BTreeMap<String, Vec2>,
    pub sonic_circles: Vec<SonicCircle>,
    pub gamma_ext: Vec<CurveSegment>,
    /// Interior curves; entry 0 is the distinguished shock Γ₁int.
    pub gamma_int: Vec<InteriorCurve>,
    pub boundary: Vec<LoopPiece>,
    /// Corner `𝒫₀` where two exterior segments meet, if any.
    pub corner: Option<Vec2>,
    /// Type of each corner state (reflection/interaction points).
    pub corner_types: Vec<(String, CornerType)>,
    /// Straight shocks separating uniform regions.
    pub uniform_shocks: Vec<UniformShock>,
    /// Model the curved shock was built with.
    pub shock_model: ShockModel,
}

impl Configuration {
    pub fn params(&self) -> GasParams {
        GasParams::new(self.gamma).expect("gamma validated at build time")
    }

    /// `(M, N₁, N₂)`: numbers of uniform regions, exterior and interior
    /// boundary segments.
    pub fn inventory(&self) -> (usize, usize, usize) {
        (self.states.len(), self.gamma_ext.len(), self.gamma_int.len())
    }

    pub fn point(&self, name: &str) -> Option<Vec2> {
        self.points.get(name).copied()
    }

    pub fn segment(&self, r: SegmentRef) -> &CurveSegment {
        match r {
            SegmentRef::Ext(i) => &self.gamma_ext[i],
            SegmentRef::Int(i) => &self.gamma_int[i].curve,
        }
    }

    /// The boundary loop as oriented curves.
    pub fn boundary_curves(&self) -> Vec<(SegmentRef, CurveSegment)> {
        self.boundary
            .iter()
            .map(|p| {
                let c = self.segment(p.segment);
                (p.segment, if p.reversed { c.reversed() } else { c.clone() })
            })
            .collect()
    }

    /// Curvilinear quadrilateral covering Ω.
    pub fn omega_patch(&self) -> Result<QuadPatch> {
        QuadPatch::from_loop(self.boundary_curves())
    }

    /// Distinguished shock Γ₁int and its upstream state.
    pub fn principal_shock(&self) -> Result<(&CurveSegment, ConstantState)> {
        let first = self.gamma_int.first().ok_or_else(|| Error::Geometry("no interior curves".into()))?;
        match first.role {
            InteriorRole::Shock { upstream } => Ok((&first.curve, self.states[upstream].state)),
            InteriorRole::Sonic { .. } => Err(Error::Geometry("first interior curve is not a shock".into())),
        }
    }

    /// Replace Γ₁int by its chord (for exercising the validator).
    pub fn with_straight_principal_shock(&self) -> Self {
        let mut out = self.clone();
        let c = &out.gamma_int[0].curve;
        out.gamma_int[0].curve = CurveSegment::line(&c.name, CurveKind::StraightShock, c.start(), c.end());
        out.shock_model = ShockModel::Straight;
        out
    }
}

/// Curved shock between two points with prescribed unit travel directions.
fn model_shock(name: &str, model: ShockModel, p0: Vec2, d0: Vec2, p1: Vec2, d1: Vec2) -> Result<CurveSegment> {
    match model {
        ShockModel::Straight => Ok(CurveSegment::line(name, CurveKind::StraightShock, p0, p1)),
        ShockModel::Fitted => model_shock(name, ShockModel::Hermite { bulge: DEFAULT_BULGE }, p0, d0, p1, d1),
        ShockModel::Hermite { bulge } => {
            if !(bulge > 0.0 && bulge <= 1.0) {
                return Err(Error::InvalidParameter(format!("Hermite bulge {bulge} outside (0, 1]")));
            }
            let (d0, d1) = (d0.normalize(), d1.normalize());
            // p0 + s d0 = p1 + t d1; a convex arc needs s > 0 and t < 0
            let (s, t) = line_line(&p0, &d0, &p1, &d1)
                .ok_or_else(|| Error::Geometry(format!("end tangents of {name} are parallel")))?;
            if !(s > 0.0 && t < 0.0) {
                return Err(Error::Geometry(format!(
                    "end tangent lines of {name} do not meet between its end points; no convex arc matches them"
                )));
            }
            let c = CurveSegment::hermite(name, p0, p1, d0 * (3.0 * bulge * s), d1 * (-3.0 * bulge * t));
            check_convex(&c)?;
            Ok(c)
        }
    }
}

/// Curvature-sign sanity check of a model shock.
fn check_convex(c: &CurveSegment) -> Result<()> {
    let ks: Vec<f64> = (1..200).map(|i| c.curvature(i as f64 / 200.0)).collect();
    let pos = ks.iter().all(|k| *k > 0.0);
    let neg = ks.iter().all(|k| *k < 0.0);
    if pos || neg {
        Ok(())
    } else {
        Err(Error::Geometry(format!("model shock {} changes curvature sign", c.name)))
    }
}

/// Arc of the circle between `a` and `b` passing on the side of `towards`.
fn arc_towards(name: &str, center: Vec2, radius: f64, a: &Vec2, b: &Vec2, towards: &Vec2) -> CurveSegment {
    let short = CurveSegment::arc_between(name, center, radius, a, b);
    let far = {
        let crate::geom::CurveShape::Arc { theta0, theta1, .. } = short.shape else { unreachable!() };
        let d = theta1 - theta0;
        CurveSegment::arc(name, center, radius, theta0, theta0 + d - 2.0 * PI * d.signum())
    };
    let dist = |c: &CurveSegment| (c.point(0.5) - towards).norm();
    if dist(&short) <= dist(&far) {
        short
    } else {
        far
    }
}

fn first_circle_hit(p: &Vec2, dir: &Vec2, center: &Vec2, radius: f64) -> Result<Vec2> {
    let ts: Vec<f64> = line_circle(p, dir, center, radius).into_iter().filter(|t| *t > 0.0).collect();
    let t = ts.first().ok_or_else(|| Error::Geometry("shock line misses the sonic circle".into()))?;
    Ok(p + dir * *t)
}

fn weak_root(p: &CornerProblem, params: &GasParams, what: &str) -> Result<CornerState> {
    match solve_corner(p, params)? {
        CornerRoots::Two { weak, .. } => Ok(weak),
        CornerRoots::Detached => Err(Error::Detached(format!(
            "{what}: the corner problem has no solution (angle on the detached side of the detachment angle)"
        ))),
    }
}

fn corner_type(s: &CornerState, params: &GasParams) -> CornerType {
    if s.mach_at_corner(params) > 1.0 {
        CornerType::Supersonic
    } else {
        CornerType::Subsonic
    }
}

/// Direction along the straight shock of a corner state pointing away from
/// the corner point into the flow region.
fn shock_outward(s: &CornerState, inward: &Vec2) -> Vec2 {
    let t = s.shock_dir();
    if t.dot(inward) >= 0.0 {
        t
    } else {
        -t
    }
}

fn mirror(p: &Vec2) -> Vec2 {
    v2(p.x, -p.y)
}

fn mirror_state(s: &ConstantState) -> ConstantState {
    ConstantState { rho: s.rho, u: mirror(&s.u) }
}

pub fn build_configuration(kind: ConfigKind, params: &GasParams, data: &ProblemData) -> Result<Configuration> {
    build_configuration_with(kind, params, data, &BuildOptions::default())
}

pub fn build_configuration_with(
    kind: ConfigKind,
    params: &GasParams,
    data: &ProblemData,
    opts: &BuildOptions,
) -> Result<Configuration> {
    if opts.shock_model == ShockModel::Fitted {
        return fitted(kind, params, data);
    }
    let model = opts.shock_model;
    match (kind, data) {
        (ConfigKind::RegularReflectionSym, ProblemData::Reflection { rho0, rho1, wedge }) => {
            if !wedge.symmetric {
                return Err(Error::InvalidParameter("symmetric reflection needs equal half-wedge angles".into()));
            }
            regular_sym(params, *rho0, *rho1, wedge.theta_w1, model, data)
        }
        (ConfigKind::RegularReflectionNonsym, ProblemData::Reflection { rho0, rho1, wedge }) => {
            regular_nonsym(params, *rho0, *rho1, wedge, model, data)
        }
        (ConfigKind::Prandtl, ProblemData::Prandtl { rho_inf, u_inf, theta_w }) => {
            prandtl(params, *rho_inf, *u_inf, *theta_w, model, data)
        }
        (ConfigKind::Lighthill, ProblemData::Lighthill { rho0, rho1, theta_w }) => {
            lighthill(params, *rho0, *rho1, *theta_w, model, data)
        }
        (ConfigKind::FourShock, ProblemData::FourShock { rho1, rho2, theta1, theta2 }) => {
            four_shock(params, *rho1, *rho2, *theta1, *theta2, model, data)
        }
        _ => Err(Error::InvalidParameter(format!("problem data does not match configuration kind {kind:?}"))),
    }
}

/// Smallest `c − |v|` on the Ω side of Γ₁int over interior samples.
pub fn shock_subsonic_margin(cfg: &Configuration) -> f64 {
    let params = cfg.params();
    let mut m = f64::INFINITY;
    for i in 1..FIT_SAMPLES {
        match super::validate::shock_side_state(cfg, i as f64 / FIT_SAMPLES as f64) {
            Ok((_, st, _)) => m = m.min(params.sound_speed(st.rho) - st.v.norm()),
            Err(_) => return f64::NEG_INFINITY,
        }
    }
    m
}

fn fitted(kind: ConfigKind, params: &GasParams, data: &ProblemData) -> Result<Configuration> {
    let eval = |b: f64| -> Option<(f64, Configuration)> {
        let opts = BuildOptions { shock_model: ShockModel::Hermite { bulge: b } };
        let c = build_configuration_with(kind, params, data, &opts).ok()?;
        Some((shock_subsonic_margin(&c), c))
    };
    let grid: Vec<f64> = (1..=FIT_SCAN).map(|k| k as f64 / FIT_SCAN as f64).collect();
    let mut best: Option<(f64, f64, Configuration)> = None;
    for b in &grid {
        if let Some((m, c)) = eval(*b) {
            if best.as_ref().map_or(true, |x| m > x.0) {
                best = Some((m, *b, c));
            }
        }
    }
    let Some((bm, bb0, mut bc)) = best else {
        // report the failure of the default arc
        let opts = BuildOptions { shock_model: ShockModel::Hermite { bulge: DEFAULT_BULGE } };
        return build_configuration_with(kind, params, data, &opts);
    };
    // refine on the neighbouring grid cells
    let h = 1.0 / FIT_SCAN as f64;
    let (mut lo, mut hi) = ((bb0 - h).max(1e-3), (bb0 + h).min(1.0));
    for _ in 0..30 {
        let (x1, x2) = (lo + (hi - lo) / 3.0, hi - (hi - lo) / 3.0);
        let f1 = eval(x1).map_or(f64::NEG_INFINITY, |x| x.0);
        let f2 = eval(x2).map_or(f64::NEG_INFINITY, |x| x.0);
        if f1 < f2 {
            lo = x1;
        } else {
            hi = x2;
        }
    }
    if let Some((m, c)) = eval(0.5 * (lo + hi)) {
        if m > bm {
            bc = c;
        }
    }
    Ok(bc)
}

/// Data of one reflecting wall of the reflection problem.
struct WallCorner {
    /// Reflection point, in the upper-half frame.
    p0: Vec2,
    weak: CornerState,
    ctype: CornerType,
    /// Start of the curved shock (sonic point, or `p0` when subsonic).
    shock_start: Vec2,
    /// Unit direction of the curved shock leaving `shock_start`.
    shock_dir: Vec2,
    /// Sonic point on the wall.
    wall_sonic: Option<Vec2>,
}

fn reflection_wall(params: &GasParams, s1: &ConstantState, xi1_0: f64, theta: f64) -> Result<WallCorner> {
    let prob = reflection_corner(s1, xi1_0, theta);
    let weak = weak_root(&prob, params, &format!("reflection at half-wedge angle {theta}"))?;
    let ctype = corner_type(&weak, params);
    let dir = shock_outward(&weak, &prob.inward);
    let c2 = params.sound_speed(weak.state.rho);
    let o2 = weak.state.u;
    if o2.dot(&prob.wall_dir) <= 0.0 || o2.dot(&prob.wall_dir) >= prob.point.dot(&prob.wall_dir) {
        return Err(Error::Geometry("the velocity of state (2) does not lie between the wedge vertex and P₀".into()));
    }
    let (shock_start, wall_sonic) = match ctype {
        CornerType::Supersonic => {
            let p1 = first_circle_hit(&prob.point, &dir, &o2, c2)?;
            (p1, Some(o2 + prob.wall_dir * c2))
        }
        CornerType::Subsonic => (prob.point, None),
    };
    Ok(WallCorner { p0: prob.point, weak, ctype, shock_start, shock_dir: dir, wall_sonic })
}

fn reflection_base(params: &GasParams, rho0: f64, rho1: f64) -> Result<(ConstantState, ConstantState, f64)> {
    let inc = incident_shock_setup(rho0, rho1, params)?;
    Ok((ConstantState::new(rho0, v2(0.0, 0.0))?, ConstantState::new(rho1, v2(inc.u1, 0.0))?, inc.xi1_0))
}

fn regular_sym(
    params: &GasParams,
    rho0: f64,
    rho1: f64,
    theta: f64,
    model: ShockModel,
    data: &ProblemData,
) -> Result<Configuration> {
    let (s0, s1, xi1_0) = reflection_base(params, rho0, rho1)?;
    let w = reflection_wall(params, &s1, xi1_0, theta)?;
    let a = w.shock_start;
    let full = model_shock("Γshock", model, a, w.shock_dir, mirror(&a), -mirror(&w.shock_dir))?;
    let mut shock = full.restrict(0.0, 0.5);
    let p2 = v2(shock.end().x, 0.0);
    if let crate::geom::CurveShape::Hermite { p1, .. } = &mut shock.shape {
        *p1 = p2;
    }
    if let crate::geom::CurveShape::Line { b, .. } = &mut shock.shape {
        *b = p2;
    }
    if p2.x >= 0.0 {
        return Err(Error::Geometry(format!("model shock meets the symmetry line at ξ₁={} ≥ 0", p2.x)));
    }
    let p3 = v2(0.0, 0.0);
    let mut points = BTreeMap::new();
    points.insert("P0".to_string(), w.p0);
    points.insert("P2".to_string(), p2);
    points.insert("P3".to_string(), p3);
    points.insert("O2".to_string(), w.weak.state.u);
    points.insert("𝒫0".to_string(), p3);
    let c2 = params.sound_speed(w.weak.state.rho);
    let states = vec![
        Region { label: "Λ0".into(), state: s0 },
        Region { label: "Λ1".into(), state: s1 },
        Region { label: "Λ2".into(), state: w.weak.state },
    ];
    let sym = CurveSegment::line("Γsym", CurveKind::SymmetryLine, p2, p3);
    let mut uniform_shocks = vec![ushock("S0", w.p0, w.p0 + v2(0.0, w.p0.norm()), 0, 1)];
    if w.ctype == CornerType::Supersonic {
        uniform_shocks.push(ushock("S1", w.p0, w.shock_start, 1, 2));
    }
    let (gamma_ext, gamma_int, boundary, circles) = match w.ctype {
        CornerType::Supersonic => {
            let p1 = w.shock_start;
            let p4 = w.wall_sonic.expect("supersonic corner has a wall sonic point");
            points.insert("P1".to_string(), p1);
            points.insert("P4".to_string(), p4);
            let wedge = CurveSegment::line("Γwedge", CurveKind::StraightWall, p3, p4);
            let sonic = arc_towards("Γsonic", w.weak.state.u, c2, &p4, &p1, &w.p0);
            (
                vec![sym, wedge],
                vec![
                    InteriorCurve { curve: shock, role: InteriorRole::Shock { upstream: 1 } },
                    InteriorCurve { curve: sonic, role: InteriorRole::Sonic { state: 2 } },
                ],
                vec![
                    LoopPiece { segment: SegmentRef::Ext(1), reversed: false },
                    LoopPiece { segment: SegmentRef::Int(1), reversed: false },
                    LoopPiece { segment: SegmentRef::Int(0), reversed: false },
                    LoopPiece { segment: SegmentRef::Ext(0), reversed: false },
                ],
                vec![SonicCircle { label: "∂B_c2(O2)".into(), center: w.weak.state.u, radius: c2 }],
            )
        }
        CornerType::Subsonic => {
            let wedge = CurveSegment::line("Γwedge", CurveKind::StraightWall, p3, w.p0);
            (
                vec![sym, wedge],
                vec![InteriorCurve { curve: shock, role: InteriorRole::Shock { upstream: 1 } }],
                vec![
                    LoopPiece { segment: SegmentRef::Ext(1), reversed: false },
                    LoopPiece { segment: SegmentRef::Int(0), reversed: false },
                    LoopPiece { segment: SegmentRef::Ext(0), reversed: false },
                ],
                Vec::new(),
            )
        }
    };
    Ok(Configuration {
        kind: ConfigKind::RegularReflectionSym,
        gamma: params.gamma(),
        data: *data,
        states,
        neighbors: vec![(0, 1), (1, 2)],
        points,
        sonic_circles: circles,
        gamma_ext,
        gamma_int,
        boundary,
        corner: Some(p3),
        corner_types: vec![("P0".into(), w.ctype)],
        uniform_shocks,
        shock_model: model,
    })
}

fn regular_nonsym(
    params: &GasParams,
    rho0: f64,
    rho1: f64,
    wedge: &WedgeGeometry,
    model: ShockModel,
    data: &ProblemData,
) -> Result<Configuration> {
    let (s0, s1, xi1_0) = reflection_base(params, rho0, rho1)?;
    let up = reflection_wall(params, &s1, xi1_0, wedge.theta_w1)?;
    let lo_frame = reflection_wall(params, &s1, xi1_0, wedge.theta_w2)?;
    // lower wall: mirror image of an upper-half computation
    let lo_state = mirror_state(&lo_frame.weak.state);
    let lo_start = mirror(&lo_frame.shock_start);
    let lo_dir = mirror(&lo_frame.shock_dir);
    let shock = model_shock("Γshock", model, up.shock_start, up.shock_dir, lo_start, -lo_dir)?;
    let p4 = v2(0.0, 0.0);
    let mut points = BTreeMap::new();
    points.insert("P0".to_string(), up.p0);
    points.insert("P1".to_string(), mirror(&lo_frame.p0));
    points.insert("P4".to_string(), p4);
    points.insert("O2".to_string(), up.weak.state.u);
    points.insert("O3".to_string(), lo_state.u);
    points.insert("𝒫0".to_string(), p4);
    let states = vec![
        Region { label: "Λ0 (upper)".into(), state: s0 },
        Region { label: "Λ0 (lower)".into(), state: s0 },
        Region { label: "Λ1".into(), state: s1 },
        Region { label: "Λ2".into(), state: up.weak.state },
        Region { label: "Λ3".into(), state: lo_state },
    ];
    let mut gamma_int = vec![InteriorCurve { curve: shock, role: InteriorRole::Shock { upstream: 2 } }];
    let mut circles = Vec::new();
    let corner_types = vec![("P0".to_string(), up.ctype), ("P1".to_string(), lo_frame.ctype)];
    let upper_end = up.wall_sonic.unwrap_or(up.p0);
    let lower_end = lo_frame.wall_sonic.map(|p| mirror(&p)).unwrap_or(mirror(&lo_frame.p0));
    let gamma_ext = vec![
        CurveSegment::line("Γw¹", CurveKind::StraightWall, p4, upper_end),
        CurveSegment::line("Γw²", CurveKind::StraightWall, p4, lower_end),
    ];
    let mut upper_arc = None;
    if let Some(p5) = up.wall_sonic {
        let p2 = up.shock_start;
        let c2 = params.sound_speed(up.weak.state.rho);
        points.insert("P2".to_string(), p2);
        points.insert("P5".to_string(), p5);
        let arc = arc_towards("Γsonic²", up.weak.state.u, c2, &p2, &p5, &up.p0);
        circles.push(SonicCircle { label: "∂B_c2(O2)".into(), center: up.weak.state.u, radius: c2 });
        gamma_int.push(InteriorCurve { curve: arc, role: InteriorRole::Sonic { state: 3 } });
        upper_arc = Some(gamma_int.len() - 1);
    }
    let mut lower_arc = None;
    if let Some(w6) = lo_frame.wall_sonic {
        let p6 = mirror(&w6);
        let p3 = lo_start;
        let c3 = params.sound_speed(lo_state.rho);
        points.insert("P3".to_string(), p3);
        points.insert("P6".to_string(), p6);
        let arc = arc_towards("Γsonic³", lo_state.u, c3, &p3, &p6, &mirror(&lo_frame.p0));
        circles.push(SonicCircle { label: "∂B_c3(O3)".into(), center: lo_state.u, radius: c3 });
        gamma_int.push(InteriorCurve { curve: arc, role: InteriorRole::Sonic { state: 4 } });
        lower_arc = Some(gamma_int.len() - 1);
    }
    let p1 = mirror(&lo_frame.p0);
    let mut uniform_shocks = vec![
        ushock("S0 (upper)", up.p0, up.p0 + v2(0.0, up.p0.norm()), 0, 2),
        ushock("S0 (lower)", p1, p1 - v2(0.0, p1.norm()), 1, 2),
    ];
    if up.ctype == CornerType::Supersonic {
        uniform_shocks.push(ushock("S1", up.p0, up.shock_start, 2, 3));
    }
    if lo_frame.ctype == CornerType::Supersonic {
        uniform_shocks.push(ushock("S2", p1, lo_start, 2, 4));
    }
    // P4 → upper wall → upper arc → shock → lower arc → lower wall → P4
    let mut boundary = vec![LoopPiece { segment: SegmentRef::Ext(0), reversed: false }];
    if let Some(i) = upper_arc {
        boundary.push(LoopPiece { segment: SegmentRef::Int(i), reversed: true });
    }
    boundary.push(LoopPiece { segment: SegmentRef::Int(0), reversed: false });
    if let Some(i) = lower_arc {
        boundary.push(LoopPiece { segment: SegmentRef::Int(i), reversed: false });
    }
    boundary.push(LoopPiece { segment: SegmentRef::Ext(1), reversed: true });
    Ok(Configuration {
        kind: ConfigKind::RegularReflectionNonsym,
        gamma: params.gamma(),
        data: *data,
        states,
        neighbors: vec![(0, 2), (1, 2), (2, 3), (2, 4)],
        points,
        sonic_circles: circles,
        gamma_ext,
        gamma_int,
        boundary,
        corner: Some(p4),
        corner_types,
        uniform_shocks,
        shock_model: model,
    })
}

/// Normal reflection of uniform flow off a wall through the origin: the
/// state with velocity along the wall whose shock is parallel to it.
/// Returns `(state, offset)` where the shock is `{ξ·n = offset}` with `n`
/// the unit wall normal into the flow.
pub fn normal_reflection(
    params: &GasParams,
    incoming: &ConstantState,
    wall_dir: &Vec2,
    inward: &Vec2,
) -> Result<(ConstantState, f64)> {
    let w = -incoming.u.dot(inward);
    if !(w > 0.0) {
        return Err(Error::Precondition("incoming flow must move towards the wall".into()));
    }
    let rho_inf = incoming.rho;
    let p_inf = params.pressure(rho_inf);
    // (p_N − p_∞)(ρ_N − ρ_∞) = ρ_∞ ρ_N w², increasing in ρ_N
    let f = |r: f64| (params.pressure(r) - p_inf) * (r - rho_inf) - rho_inf * r * w * w;
    let mut hi = 2.0 * rho_inf;
    while f(hi) <= 0.0 {
        hi *= 2.0;
        if hi > 1e8 * rho_inf {
            return Err(Error::Numerical("normal reflection density not bracketed".into()));
        }
    }
    let mut lo = rho_inf;
    while hi - lo > 1e-14 * hi {
        let m = 0.5 * (lo + hi);
        if f(m) > 0.0 {
            hi = m;
        } else {
            lo = m;
        }
    }
    let rho_n = 0.5 * (lo + hi);
    let d = rho_inf * w / (rho_n - rho_inf);
    let u_n = wall_dir * incoming.u.dot(wall_dir);
    Ok((ConstantState::new(rho_n, u_n)?, d))
}

fn prandtl(
    params: &GasParams,
    rho_inf: f64,
    u_inf: f64,
    theta: f64,
    model: ShockModel,
    data: &ProblemData,
) -> Result<Configuration> {
    check_density(rho_inf)?;
    if !(theta > 0.0 && theta < PI / 2.0) {
        return Err(Error::InvalidParameter(format!("ramp angle {theta} outside (0, π/2)")));
    }
    let c_inf = params.sound_speed(rho_inf);
    if !(u_inf > c_inf) {
        return Err(Error::InvalidParameter(format!(
            "incoming flow must be supersonic: u∞ = {u_inf} ≤ c∞ = {c_inf}"
        )));
    }
    let s_inf = ConstantState::new(rho_inf, v2(u_inf, 0.0))?;
    let e_w = unit(theta);
    let n_w = rot90(&e_w);
    let p1 = v2(0.0, 0.0);
    let prob = CornerProblem::new(s_inf, p1, e_w, n_w);
    let o = weak_root(&prob, params, &format!("Prandtl state (O) at ramp angle {theta}"))?;
    let (s_n, d) = normal_reflection(params, &s_inf, &e_w, &n_w)?;
    let c_o = params.sound_speed(o.state.rho);
    let c_n = params.sound_speed(s_n.rho);
    let ctype = corner_type(&o, params);
    let dir_o = shock_outward(&o, &n_w);
    let o_o = o.state.u;
    let o_n = s_n.u;
    if !(d < c_n) {
        return Err(Error::Geometry("the normal-reflection shock does not meet its sonic circle".into()));
    }
    let p3 = o_n + e_w * c_n;
    let p4 = o_n + e_w * (c_n * c_n - d * d).sqrt() + n_w * d;
    let mut points = BTreeMap::new();
    points.insert("P1".to_string(), p1);
    points.insert("P3".to_string(), p3);
    points.insert("P4".to_string(), p4);
    points.insert("O_O".to_string(), o_o);
    points.insert("O_N".to_string(), o_n);
    let states = vec![
        Region { label: "Λ∞".into(), state: s_inf },
        Region { label: "ΛO".into(), state: o.state },
        Region { label: "ΛN".into(), state: s_n },
    ];
    let mut circles = vec![SonicCircle { label: "∂B_cN(O_N)".into(), center: o_n, radius: c_n }];
    let sonic_n = arc_towards("Γsonic^N", o_n, c_n, &p3, &p4, &(o_n + e_w * (2.0 * c_n) + n_w * d));
    let (shock_end, end_dir) = match ctype {
        CornerType::Supersonic => (first_circle_hit(&p1, &dir_o, &o_o, c_o)?, -dir_o),
        CornerType::Subsonic => (p1, -dir_o),
    };
    let shock = model_shock("Γshock", model, p4, -e_w, shock_end, end_dir)?;
    let (gamma_ext, gamma_int, boundary) = match ctype {
        CornerType::Supersonic => {
            let p5 = shock_end;
            let p2 = o_o - e_w * c_o;
            if p2.dot(&e_w) <= 0.0 || p2.dot(&e_w) >= p3.dot(&e_w) {
                return Err(Error::Geometry("sonic points on the ramp are out of order".into()));
            }
            points.insert("P2".to_string(), p2);
            points.insert("P5".to_string(), p5);
            circles.insert(0, SonicCircle { label: "∂B_cO(O_O)".into(), center: o_o, radius: c_o });
            let sonic_o = arc_towards("Γsonic^O", o_o, c_o, &p5, &p2, &p1);
            (
                vec![CurveSegment::line("Γwedge", CurveKind::StraightWall, p2, p3)],
                vec![
                    InteriorCurve { curve: shock, role: InteriorRole::Shock { upstream: 0 } },
                    InteriorCurve { curve: sonic_n, role: InteriorRole::Sonic { state: 2 } },
                    InteriorCurve { curve: sonic_o, role: InteriorRole::Sonic { state: 1 } },
                ],
                vec![
                    LoopPiece { segment: SegmentRef::Ext(0), reversed: false },
                    LoopPiece { segment: SegmentRef::Int(1), reversed: false },
                    LoopPiece { segment: SegmentRef::Int(0), reversed: false },
                    LoopPiece { segment: SegmentRef::Int(2), reversed: false },
                ],
            )
        }
        CornerType::Subsonic => (
            vec![CurveSegment::line("Γwedge", CurveKind::StraightWall, p1, p3)],
            vec![
                InteriorCurve { curve: shock, role: InteriorRole::Shock { upstream: 0 } },
                InteriorCurve { curve: sonic_n, role: InteriorRole::Sonic { state: 2 } },
            ],
            vec![
                LoopPiece { segment: SegmentRef::Ext(0), reversed: false },
                LoopPiece { segment: SegmentRef::Int(1), reversed: false },
                LoopPiece { segment: SegmentRef::Int(0), reversed: false },
            ],
        ),
    };
    let n_index = if ctype == CornerType::Supersonic { 2 } else { 1 };
    let mut uniform_shocks = vec![ushock("S^N", p4, p4 + e_w * p4.norm(), 0, n_index)];
    if ctype == CornerType::Supersonic {
        uniform_shocks.push(ushock("S^O", p1, shock_end, 0, 1));
    }
    let (states, neighbors, gamma_int) = match ctype {
        CornerType::Supersonic => (states, vec![(0, 1), (0, 2)], gamma_int),
        CornerType::Subsonic => {
            // no region (O): state (N) moves to index 1
            let gi = gamma_int
                .into_iter()
                .map(|mut c| {
                    if let InteriorRole::Sonic { state } = &mut c.role {
                        *state = 1;
                    }
                    c
                })
                .collect();
            (vec![states[0].clone(), states[2].clone()], vec![(0, 1)], gi)
        }
    };
    Ok(Configuration {
        kind: ConfigKind::Prandtl,
        gamma: params.gamma(),
        data: *data,
        states,
        neighbors,
        points,
        sonic_circles: circles,
        gamma_ext,
        gamma_int,
        boundary,
        corner: None,
        corner_types: vec![("P1".into(), ctype)],
        uniform_shocks,
        shock_model: model,
    })
}

fn lighthill(
    params: &GasParams,
    rho0: f64,
    rho1: f64,
    theta: f64,
    model: ShockModel,
    data: &ProblemData,
) -> Result<Configuration> {
    if !(theta > 0.0 && theta < PI) {
        return Err(Error::InvalidParameter(format!("step-down angle {theta} outside (0, π)")));
    }
    let inc = incident_shock_setup(rho0, rho1, params)?;
    let c1 = params.sound_speed(rho1);
    if !(inc.xi1_0 > 0.0 && inc.xi1_0 < c1) {
        return Err(Error::InvalidParameter(format!(
            "diffraction requires 0 < ξ₁⁰ < c₁, got ξ₁⁰ = {} and c₁ = {c1}",
            inc.xi1_0
        )));
    }
    let s0 = ConstantState::new(rho0, v2(0.0, 0.0))?;
    let s1 = ConstantState::new(rho1, v2(inc.u1, 0.0))?;
    let o1 = s1.u;
    let p1 = v2(0.0, 0.0);
    let p3 = v2(inc.xi1_0, (c1 * c1 - (inc.xi1_0 - inc.u1).powi(2)).sqrt());
    let p4 = v2(inc.u1 - c1, 0.0);
    if p4.x >= 0.0 {
        return Err(Error::Geometry("the sonic circle of state (1) does not reach the upper wall".into()));
    }
    let w0 = unit(-theta);
    let gas_side = rot90(&w0);
    let p2 = w0 * p3.norm();
    let c0 = params.sound_speed(rho0);
    if p2.norm() <= c0 {
        return Err(Error::Geometry("diffracted shock foot lies inside the sonic circle of state (0)".into()));
    }
    let shock = model_shock("Γshock", model, p2, gas_side, p3, v2(0.0, 1.0))?;
    let sonic = arc_towards("Γsonic", o1, c1, &p3, &p4, &(o1 + v2(0.0, c1)));
    let mut points = BTreeMap::new();
    points.insert("P1".to_string(), p1);
    points.insert("P2".to_string(), p2);
    points.insert("P3".to_string(), p3);
    points.insert("P4".to_string(), p4);
    points.insert("O1".to_string(), o1);
    points.insert("𝒫0".to_string(), p1);
    Ok(Configuration {
        kind: ConfigKind::Lighthill,
        gamma: params.gamma(),
        data: *data,
        states: vec![Region { label: "Λ0".into(), state: s0 }, Region { label: "Λ1".into(), state: s1 }],
        neighbors: vec![(0, 1)],
        points,
        sonic_circles: vec![SonicCircle { label: "∂B_c1(O1)".into(), center: o1, radius: c1 }],
        gamma_ext: vec![
            CurveSegment::line("Γw¹", CurveKind::StraightWall, p1, p4),
            CurveSegment::line("Γw⁰", CurveKind::StraightWall, p1, p2),
        ],
        gamma_int: vec![
            InteriorCurve { curve: shock, role: InteriorRole::Shock { upstream: 0 } },
            InteriorCurve { curve: sonic, role: InteriorRole::Sonic { state: 1 } },
        ],
        boundary: vec![
            LoopPiece { segment: SegmentRef::Ext(0), reversed: true },
            LoopPiece { segment: SegmentRef::Ext(1), reversed: false },
            LoopPiece { segment: SegmentRef::Int(0), reversed: false },
            LoopPiece { segment: SegmentRef::Int(1), reversed: false },
        ],
        corner: Some(p1),
        corner_types: Vec::new(),
        uniform_shocks: vec![ushock("S1", p3, p3 + v2(0.0, p3.norm()), 0, 1)],
        shock_model: model,
    })
}

/// Planar-shock Riemann data of the symmetric four-shock problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FourShockData {
    pub state1: ConstantState,
    pub state2: ConstantState,
    pub state3: ConstantState,
    /// Unit normal of the shock S₁₂ pointing from (2) into (1).
    pub n12: Vec2,
    /// Offset of S₁₂: the line `ξ·n12 = s12`.
    pub s12: f64,
    pub n32: Vec2,
    pub s32: f64,
    /// Interaction points on the symmetry axis.
    pub p1: Vec2,
    pub p4: Vec2,
}

/// Speed jump `|[u·n]|` across a shock between densities `ra < rb`.
fn shock_speed_jump(params: &GasParams, ra: f64, rb: f64) -> f64 {
    ((params.pressure(rb) - params.pressure(ra)) * (rb - ra) / (ra * rb)).sqrt()
}

pub fn four_shock_data(params: &GasParams, rho1: f64, rho2: f64, theta1: f64, theta2: f64) -> Result<FourShockData> {
    check_density(rho1)?;
    check_density(rho2)?;
    if !(rho2 > rho1) {
        return Err(Error::InvalidParameter("the forward shock needs rho2 > rho1".into()));
    }
    for t in [theta1, theta2] {
        if !(t > 0.0 && t < PI / 2.0) {
            return Err(Error::InvalidParameter(format!("shock angle {t} outside (0, π/2)")));
        }
    }
    let n12 = v2(theta1.sin(), -theta1.cos());
    let n32 = v2(-theta2.sin(), -theta2.cos());
    let du12 = shock_speed_jump(params, rho1, rho2);
    let u2 = n12 * du12;
    // state (3) moves along the axis and is ahead of the backward shock
    let du32 = du12 * theta1.cos() / theta2.cos();
    let g = |r3: f64| shock_speed_jump(params, r3, rho2) - du32;
    let (mut lo, mut hi) = (rho2 * 1e-12, rho2);
    if g(lo) <= 0.0 {
        return Err(Error::Numerical("state (3) density not bracketed".into()));
    }
    while hi - lo > 1e-15 * rho2 {
        let m = 0.5 * (lo + hi);
        if g(m) > 0.0 {
            lo = m;
        } else {
            hi = m;
        }
    }
    let rho3 = 0.5 * (lo + hi);
    let u3 = u2 - n32 * du32;
    let u3 = v2(u3.x, 0.0);
    let s12 = rho2 * du12 / (rho2 - rho1);
    let s32 = u3.dot(&n32) + rho2 * du32 / (rho2 - rho3);
    let p1 = v2(s12 / theta1.sin(), 0.0);
    let p4 = v2(-s32 / theta2.sin(), 0.0);
    Ok(FourShockData {
        state1: ConstantState::new(rho1, v2(0.0, 0.0))?,
        state2: ConstantState::new(rho2, u2)?,
        state3: ConstantState::new(rho3, u3)?,
        n12,
        s12,
        n32,
        s32,
        p1,
        p4,
    })
}

/// Corner problems for states (6) at `P₁` and (5) at `P₄` (upper half).
pub fn four_shock_corners(fd: &FourShockData) -> (CornerProblem, CornerProblem) {
    let axis = v2(1.0, 0.0);
    let up = v2(0.0, 1.0);
    (CornerProblem::new(fd.state2, fd.p1, axis, up), CornerProblem::new(fd.state2, fd.p4, axis, up))
}

fn four_shock(
    params: &GasParams,
    rho1: f64,
    rho2: f64,
    theta1: f64,
    theta2: f64,
    model: ShockModel,
    data: &ProblemData,
) -> Result<Configuration> {
    let fd = four_shock_data(params, rho1, rho2, theta1, theta2)?;
    let (c6p, c5p) = four_shock_corners(&fd);
    let up = v2(0.0, 1.0);
    let s6 = weak_root(&c6p, params, &format!("four-shock state (6) at θ₁ = {theta1}"))?;
    let s5 = weak_root(&c5p, params, &format!("four-shock state (5) at θ₂ = {theta2}"))?;
    let t6 = corner_type(&s6, params);
    let t5 = corner_type(&s5, params);
    let d6 = shock_outward(&s6, &up);
    let d5 = shock_outward(&s5, &up);
    let (c6, c5) = (params.sound_speed(s6.state.rho), params.sound_speed(s5.state.rho));
    let (o6, o5) = (s6.state.u, s5.state.u);
    let mut points = BTreeMap::new();
    points.insert("P1".to_string(), fd.p1);
    points.insert("P4".to_string(), fd.p4);
    points.insert("O5".to_string(), o5);
    points.insert("O6".to_string(), o6);
    let right = match t6 {
        CornerType::Supersonic => first_circle_hit(&fd.p1, &d6, &o6, c6)?,
        CornerType::Subsonic => fd.p1,
    };
    let left = match t5 {
        CornerType::Supersonic => first_circle_hit(&fd.p4, &d5, &o5, c5)?,
        CornerType::Subsonic => fd.p4,
    };
    if right.x <= left.x {
        return Err(Error::Geometry("interaction regions overlap".into()));
    }
    let shock1 = model_shock("Γshock¹", model, right, d6, left, -d5)?;
    let shock2 = {
        let c = shock1.reversed();
        let shape = match c.shape {
            crate::geom::CurveShape::Hermite { p0, p1, m0, m1 } => crate::geom::CurveShape::Hermite {
                p0: mirror(&p0),
                p1: mirror(&p1),
                m0: mirror(&m0),
                m1: mirror(&m1),
            },
            crate::geom::CurveShape::Line { a, b } => crate::geom::CurveShape::Line { a: mirror(&a), b: mirror(&b) },
            other => other,
        };
        CurveSegment::new("Γshock²", c.kind, shape)
    };
    let mut states = vec![
        Region { label: "Λ1".into(), state: fd.state1 },
        Region { label: "Λ2".into(), state: fd.state2 },
        Region { label: "Λ3".into(), state: fd.state3 },
        Region { label: "Λ4".into(), state: mirror_state(&fd.state2) },
    ];
    let mut neighbors = vec![(0, 1), (1, 2), (2, 3), (3, 0)];
    let mut gamma_int = vec![
        InteriorCurve { curve: shock1, role: InteriorRole::Shock { upstream: 1 } },
        InteriorCurve { curve: shock2, role: InteriorRole::Shock { upstream: 3 } },
    ];
    let mut circles = Vec::new();
    let mut left_arc = None;
    if t5 == CornerType::Supersonic {
        states.push(Region { label: "Λ5".into(), state: s5.state });
        let k = states.len() - 1;
        neighbors.extend([(1, k), (3, k)]);
        points.insert("P3".to_string(), left);
        points.insert("P5".to_string(), mirror(&left));
        circles.push(SonicCircle { label: "∂B_c5(O5)".into(), center: o5, radius: c5 });
        let arc = arc_towards("Γsonic²", o5, c5, &left, &mirror(&left), &fd.p4);
        gamma_int.push(InteriorCurve { curve: arc, role: InteriorRole::Sonic { state: k } });
        left_arc = Some(gamma_int.len() - 1);
    }
    let mut right_arc = None;
    if t6 == CornerType::Supersonic {
        states.push(Region { label: "Λ6".into(), state: s6.state });
        let k = states.len() - 1;
        neighbors.extend([(1, k), (3, k)]);
        points.insert("P2".to_string(), right);
        points.insert("P6".to_string(), mirror(&right));
        circles.push(SonicCircle { label: "∂B_c6(O6)".into(), center: o6, radius: c6 });
        let arc = arc_towards("Γsonic¹", o6, c6, &mirror(&right), &right, &fd.p1);
        gamma_int.push(InteriorCurve { curve: arc, role: InteriorRole::Sonic { state: k } });
        right_arc = Some(gamma_int.len() - 1);
    }
    let reach = fd.p1.norm().max(fd.p4.norm());
    let d12 = v2(theta1.cos(), theta1.sin());
    let d32 = v2(-theta2.cos(), theta2.sin());
    let mut uniform_shocks = vec![
        ushock("S12", fd.p1, fd.p1 + d12 * reach, 0, 1),
        ushock("S14", fd.p1, fd.p1 + mirror(&d12) * reach, 0, 3),
        ushock("S32", fd.p4, fd.p4 + d32 * reach, 2, 1),
        ushock("S34", fd.p4, fd.p4 + mirror(&d32) * reach, 2, 3),
    ];
    if let Some(i) = right_arc {
        let k = match gamma_int[i].role {
            InteriorRole::Sonic { state } => state,
            InteriorRole::Shock { .. } => unreachable!(),
        };
        uniform_shocks.push(ushock("S26", fd.p1, right, 1, k));
        uniform_shocks.push(ushock("S46", fd.p1, mirror(&right), 3, k));
    }
    if let Some(i) = left_arc {
        let k = match gamma_int[i].role {
            InteriorRole::Sonic { state } => state,
            InteriorRole::Shock { .. } => unreachable!(),
        };
        uniform_shocks.push(ushock("S25", fd.p4, left, 1, k));
        uniform_shocks.push(ushock("S45", fd.p4, mirror(&left), 3, k));
    }
    // upper shock (right to left), left arc, lower shock (left to right), right arc
    let mut boundary = vec![LoopPiece { segment: SegmentRef::Int(0), reversed: false }];
    if let Some(i) = left_arc {
        boundary.push(LoopPiece { segment: SegmentRef::Int(i), reversed: false });
    }
    boundary.push(LoopPiece { segment: SegmentRef::Int(1), reversed: false });
    if let Some(i) = right_arc {
        boundary.push(LoopPiece { segment: SegmentRef::Int(i), reversed: false });
    }
    Ok(Configuration {
        kind: ConfigKind::FourShock,
        gamma: params.gamma(),
        data: *data,
        states,
        neighbors,
        points,
        sonic_circles: circles,
        gamma_ext: Vec::new(),
        gamma_int,
        boundary,
        corner: None,
        corner_types: vec![("P1".into(), t6), ("P4".into(), t5)],
        uniform_shocks,
        shock_model: model,
    })
}

