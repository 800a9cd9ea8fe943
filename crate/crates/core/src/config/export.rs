//! Geometry JSON and angle-sweep CSV.

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use super::build::{Configuration, InteriorRole};
use super::{reflection_states, solve_state2, CornerRoots};
use crate::error::{Error, Result};
use crate::gas::GasParams;
use crate::geom::CurveKind;

/// Samples per exported curve.
pub const POLYLINE_SAMPLES: usize = 256;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircleRecord {
    pub label: String,
    pub center: [f64; 2],
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveRecord {
    pub name: String,
    pub kind: CurveKind,
    /// `exterior`, `shock` or `sonic`.
    pub role: String,
    pub samples: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateRecord {
    pub label: String,
    pub rho: f64,
    pub u: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeometryExport {
    pub kind: String,
    pub gamma: f64,
    pub inventory: [usize; 3],
    pub states: Vec<StateRecord>,
    pub points: BTreeMap<String, [f64; 2]>,
    pub circles: Vec<CircleRecord>,
    pub curves: Vec<CurveRecord>,
}

pub fn geometry_export(cfg: &Configuration) -> GeometryExport {
    let arr = |p: &crate::geom::Vec2| [p.x, p.y];
    let sample = |c: &crate::geom::CurveSegment| c.sample(POLYLINE_SAMPLES).iter().map(arr).collect::<Vec<_>>();
    let mut curves: Vec<CurveRecord> = cfg
        .gamma_ext
        .iter()
        .map(|c| CurveRecord { name: c.name.clone(), kind: c.kind, role: "exterior".into(), samples: sample(c) })
        .collect();
    for ic in &cfg.gamma_int {
        let role = match ic.role {
            InteriorRole::Shock { .. } => "shock",
            InteriorRole::Sonic { .. } => "sonic",
        };
        curves.push(CurveRecord { name: ic.curve.name.clone(), kind: ic.curve.kind, role: role.into(), samples: sample(&ic.curve) });
    }
    let (m, n1, n2) = cfg.inventory();
    GeometryExport {
        kind: format!("{:?}", cfg.kind),
        gamma: cfg.gamma,
        inventory: [m, n1, n2],
        states: cfg
            .states
            .iter()
            .map(|r| StateRecord { label: r.label.clone(), rho: r.state.rho, u: arr(&r.state.u) })
            .collect(),
        points: cfg.points.iter().map(|(k, v)| (k.clone(), arr(v))).collect(),
        circles: cfg
            .sonic_circles
            .iter()
            .map(|c| CircleRecord { label: c.label.clone(), center: arr(&c.center), radius: c.radius })
            .collect(),
        curves,
    }
}

pub fn write_geometry_json<W: Write>(cfg: &Configuration, out: W) -> Result<()> {
    serde_json::to_writer_pretty(out, &geometry_export(cfg))?;
    Ok(())
}

/// One wedge angle of a reflection sweep; the densities are `None` when the
/// corner problem is detached.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub theta_w: f64,
    pub rho2_weak: Option<f64>,
    pub rho2_strong: Option<f64>,
    /// `|v₂(P₀)|/c₂` of the weak state.
    pub mach_at_p0: Option<f64>,
}

pub fn angle_sweep(rho0: f64, rho1: f64, params: &GasParams, angles: &[f64]) -> Result<Vec<SweepRow>> {
    reflection_states(rho0, rho1, params)?;
    angles
        .iter()
        .map(|&t| {
            Ok(match solve_state2(rho0, rho1, params, t)? {
                CornerRoots::Two { weak, strong } => SweepRow {
                    theta_w: t,
                    rho2_weak: Some(weak.state.rho),
                    rho2_strong: Some(strong.state.rho),
                    mach_at_p0: Some(weak.mach_at_corner(params)),
                },
                CornerRoots::Detached => SweepRow { theta_w: t, rho2_weak: None, rho2_strong: None, mach_at_p0: None },
            })
        })
        .collect()
}

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["theta_w_rad", "theta_w_deg", "rho2_weak", "rho2_strong", "mach_at_P0", "status"]).map_err(io)?;
    let opt = |x: Option<f64>| x.map(|v| format!("{v:.12e}")).unwrap_or_default();
    for r in rows {
        let status = match r.mach_at_p0 {
            None => "detached",
            Some(m) if m > 1.0 => "supersonic",
            Some(_) => "subsonic",
        };
        w.write_record([
            format!("{:.12e}", r.theta_w),
            format!("{:.9}", r.theta_w.to_degrees()),
            opt(r.rho2_weak),
            opt(r.rho2_strong),
            opt(r.mach_at_p0),
            status.to_string(),
        ])
        .map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::build::{build_configuration, ConfigKind, ProblemData};
    use crate::config::WedgeGeometry;

    #[test]
    fn geometry_has_full_polylines() {
        let g = GasParams::new(1.4).unwrap();
        let d = ProblemData::Reflection { rho0: 1.0, rho1: 2.0, wedge: WedgeGeometry::symmetric(1.0).unwrap() };
        let cfg = build_configuration(ConfigKind::RegularReflectionSym, &g, &d).unwrap();
        let ex = geometry_export(&cfg);
        assert_eq!(ex.curves.len(), cfg.gamma_ext.len() + cfg.gamma_int.len());
        assert!(ex.curves.iter().all(|c| c.samples.len() == POLYLINE_SAMPLES));
        assert!(ex.points.contains_key("P0"));
        let mut buf = Vec::new();
        write_geometry_json(&cfg, &mut buf).unwrap();
        let back: GeometryExport = serde_json::from_slice(&buf).unwrap();
        assert_eq!(back, ex);
    }

    #[test]
    fn sweep_marks_detached_rows() {
        let g = GasParams::new(1.4).unwrap();
        let rows = angle_sweep(1.0, 2.0, &g, &[0.3, 1.2]).unwrap();
        assert!(rows[0].rho2_weak.is_none());
        assert!(rows[1].rho2_weak.unwrap() < rows[1].rho2_strong.unwrap());
        let mut buf = Vec::new();
        write_sweep_csv(&rows, &mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert!(s.starts_with("theta_w_rad,"));
        assert!(s.contains("detached"));
    }
}
