//! Rankine–Hugoniot relations across an oriented discontinuity.
//!
//! The normal `ν` of an [`OrientedInterface`] points from the minus
//! (upstream) side to the plus side. "Left" arguments are minus-side states.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gas::{check_density, GasParams, PointState};
use crate::geom::{rot90, unit, Vec2};

/// Default absolute tolerance for [`classify`].
pub const CLASSIFY_TOL: f64 = 1e-9;

const BISECTION_WIDTH: f64 = 1e-13;
const MAX_BISECTIONS: usize = 400;
const NEWTON_POLISH: usize = 3;
const MAX_COMPRESSION: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrientedInterface {
    pub point: Vec2,
    pub normal: Vec2,
    pub tangent: Vec2,
}

impl OrientedInterface {
    /// Interface through `point` with normal along `normal` (normalized here).
    pub fn new(point: Vec2, normal: Vec2) -> Result<Self> {
        let n = normal.norm();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::InvalidParameter("interface normal must be non-zero".into()));
        }
        let normal = normal / n;
        Ok(Self { point, normal, tangent: rot90(&normal) })
    }

    /// Interface whose normal makes angle `beta` with the ξ₁ axis.
    pub fn from_angle(point: Vec2, beta: f64) -> Self {
        let normal = unit(beta);
        Self { point, normal, tangent: rot90(&normal) }
    }

    pub fn flipped(&self) -> Self {
        Self { point: self.point, normal: -self.normal, tangent: -self.tangent }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum JumpKind {
    Shock,
    VortexSheet,
    Continuous,
    Inadmissible,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JumpClassification {
    pub kind: JumpKind,
    /// `ρ⁻ v⁻·ν`.
    pub mass_flux: f64,
}

fn fluxes(s: &PointState, iface: &OrientedInterface, params: &GasParams) -> [f64; 3] {
    let vn = s.v.dot(&iface.normal);
    let vt = s.v.dot(&iface.tangent);
    let m = s.rho * vn;
    [m, m * vn + params.pressure(s.rho), m * vt]
}

/// Jumps `plus − minus` of mass flux, normal momentum flux and tangential
/// momentum flux.
pub fn rh_residual(left: &PointState, right: &PointState, iface: &OrientedInterface, params: &GasParams) -> [f64; 3] {
    let a = fluxes(left, iface, params);
    let b = fluxes(right, iface, params);
    [b[0] - a[0], b[1] - a[1], b[2] - a[2]]
}

pub fn residual_norm(r: &[f64; 3]) -> f64 {
    r.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

/// Compressive state behind a shock with the given upstream state.
///
/// Solves `m²/ρ + p(ρ) = m²/ρ⁻ + p(ρ⁻)` for the root `ρ⁺ > ρ⁻` with
/// `m = ρ⁻ v⁻·ν`; the tangential pseudo-velocity is carried over.
pub fn downstream_state(upstream: &PointState, iface: &OrientedInterface, params: &GasParams) -> Result<PointState> {
    check_density(upstream.rho)?;
    let rho_m = upstream.rho;
    let vn = upstream.v.dot(&iface.normal);
    let vt = upstream.v.dot(&iface.tangent);
    let c = params.sound_speed(rho_m);
    if !(vn >= c * (1.0 - 1e-12)) {
        return Err(Error::NoShock(format!(
            "upstream normal pseudo-speed {vn} does not exceed the sound speed {c}"
        )));
    }
    let m = rho_m * vn;
    let m2 = m * m;
    let phi0 = m2 / rho_m + params.pressure(rho_m);
    let f = |rho: f64| m2 / rho + params.pressure(rho) - phi0;
    let df = |rho: f64| -m2 / (rho * rho) + params.sound_speed(rho).powi(2);

    let gamma = params.gamma();
    let mach2 = (vn / c).powi(2);
    let mut hi = rho_m * (1.0 + (gamma + 1.0) / (gamma - 1.0)) * mach2.max(1.0);
    let mut doublings = 0;
    while f(hi) <= 0.0 {
        hi *= 2.0;
        doublings += 1;
        if hi > MAX_COMPRESSION * rho_m {
            return Err(Error::Numerical(format!(
                "no sign change of the Hugoniot function below {MAX_COMPRESSION}·ρ⁻ (ρ⁻={rho_m}, v·ν={vn})"
            )));
        }
    }
    if doublings > 0 {
        log::debug!("downstream_state: upper bracket doubled {doublings} times (ρ⁻={rho_m}, M²={mach2})");
    }

    let mut lo = rho_m;
    let mut iters = 0;
    while hi - lo > BISECTION_WIDTH.max(4.0 * f64::EPSILON * hi) {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        iters += 1;
        if iters > MAX_BISECTIONS {
            return Err(Error::Numerical(format!(
                "bisection did not reach width {BISECTION_WIDTH}: bracket [{lo}, {hi}]"
            )));
        }
    }
    let mut rho = 0.5 * (lo + hi);
    for _ in 0..NEWTON_POLISH {
        let d = df(rho);
        if d == 0.0 {
            break;
        }
        let next = rho - f(rho) / d;
        if next >= lo && next <= hi && f(next).abs() < f(rho).abs() {
            rho = next;
        } else {
            break;
        }
    }
    let vn_plus = m / rho;
    Ok(PointState { rho, v: iface.normal * vn_plus + iface.tangent * vt })
}

pub fn classify(
    left: &PointState,
    right: &PointState,
    iface: &OrientedInterface,
    params: &GasParams,
    tol: f64,
) -> JumpClassification {
    let vn_m = left.v.dot(&iface.normal);
    let vn_p = right.v.dot(&iface.normal);
    let mass_flux = left.rho * vn_m;
    let res = rh_residual(left, right, iface, params);
    let d_rho = (right.rho - left.rho).abs();
    let kind = if residual_norm(&res) > tol {
        JumpKind::Inadmissible
    } else if d_rho <= tol && (right.v - left.v).norm() <= tol {
        JumpKind::Continuous
    } else if vn_m.abs() <= tol && vn_p.abs() <= tol && d_rho <= tol {
        JumpKind::VortexSheet
    } else if vn_m * vn_p > 0.0 && d_rho > tol {
        JumpKind::Shock
    } else {
        JumpKind::Inadmissible
    };
    JumpClassification { kind, mass_flux }
}

/// Margins of the strict entropy inequalities, in the order
/// `v⁻·ν − v⁺·ν`, `v⁺·ν`, `ρ⁺ − ρ⁻`, `v⁻·ν − c⁻`, `c⁺ − v⁺·ν`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyReport {
    pub admissible: bool,
    pub margins: [f64; 5],
}

impl EntropyReport {
    pub const LABELS: [&'static str; 5] =
        ["vn_minus>vn_plus", "vn_plus>0", "rho_plus>rho_minus", "vn_minus>c_minus", "vn_plus<c_plus"];

    pub fn min_margin(&self) -> f64 {
        self.margins.iter().cloned().fold(f64::INFINITY, f64::min)
    }
}

/// Strict entropy inequalities for a pair that is a shock (or a
/// zero-strength jump, which is reported as not admissible).
pub fn entropy_admissible(
    left: &PointState,
    right: &PointState,
    iface: &OrientedInterface,
    params: &GasParams,
) -> Result<EntropyReport> {
    let cls = classify(left, right, iface, params, CLASSIFY_TOL);
    if matches!(cls.kind, JumpKind::VortexSheet | JumpKind::Inadmissible) {
        return Err(Error::Precondition(format!("entropy check requires a shock, got {:?}", cls.kind)));
    }
    let vn_m = left.v.dot(&iface.normal);
    let vn_p = right.v.dot(&iface.normal);
    let margins = [
        vn_m - vn_p,
        vn_p,
        right.rho - left.rho,
        vn_m - params.sound_speed(left.rho),
        params.sound_speed(right.rho) - vn_p,
    ];
    Ok(EntropyReport { admissible: margins.iter().all(|m| *m > 0.0), margins })
}

/// Jump `plus − minus` of the entropy flux `(½ρ|v|² + ρe + p) v·ν`.
pub fn entropy_flux_jump(left: &PointState, right: &PointState, iface: &OrientedInterface, params: &GasParams) -> f64 {
    let flux = |s: &PointState| {
        let energy = 0.5 * s.rho * s.v.norm_squared() + s.rho * params.internal_energy(s.rho) + params.pressure(s.rho);
        energy * s.v.dot(&iface.normal)
    };
    flux(right) - flux(left)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarEntry {
    /// Angle of the shock normal with the ξ₁ axis.
    pub beta: f64,
    pub state: PointState,
    pub entropy_ok: bool,
}

/// Downstream states for all shock normals with supersonic normal inflow.
///
/// The normal angle sweeps `[α − δ, α + δ]` where `α` is the direction of
/// the upstream pseudo-velocity and `cos δ = c⁻/|v⁻|`; the end points are
/// zero-strength and `β = α` gives the normal shock.
pub fn shock_polar(upstream: &PointState, params: &GasParams, n_samples: usize) -> Result<Vec<PolarEntry>> {
    check_density(upstream.rho)?;
    if n_samples < 2 {
        return Err(Error::InvalidParameter("a polar needs at least two samples".into()));
    }
    let q = upstream.v.norm();
    let c = params.sound_speed(upstream.rho);
    if !(q > c) {
        return Err(Error::NoShock(format!("no polar: upstream pseudo-speed {q} is not above the sound speed {c}")));
    }
    let alpha = upstream.v.y.atan2(upstream.v.x);
    let delta = (c / q).acos();
    let mut out = Vec::with_capacity(n_samples);
    for k in 0..n_samples {
        let beta = alpha - delta + 2.0 * delta * k as f64 / (n_samples - 1) as f64;
        if k == 0 || k + 1 == n_samples {
            // sonic end points: the jump has zero strength
            out.push(PolarEntry { beta, state: *upstream, entropy_ok: false });
            continue;
        }
        let iface = OrientedInterface::from_angle(Vec2::zeros(), beta);
        let state = downstream_state(upstream, &iface, params)?;
        let entropy_ok = entropy_admissible(upstream, &state, &iface, params).map(|r| r.admissible).unwrap_or(false);
        out.push(PolarEntry { beta, state, entropy_ok });
    }
    Ok(out)
}

/// Polar as CSV: `beta_rad, rho_plus, vnu_plus, vtau_plus, p_plus, entropy_ok`.
pub fn write_polar_csv<W: std::io::Write>(entries: &[PolarEntry], params: &GasParams, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(["beta_rad", "rho_plus", "vnu_plus", "vtau_plus", "p_plus", "entropy_ok"]).map_err(io)?;
    for e in entries {
        let iface = OrientedInterface::from_angle(Vec2::zeros(), e.beta);
        w.write_record([
            format!("{:.12e}", e.beta),
            format!("{:.12e}", e.state.rho),
            format!("{:.12e}", e.state.v.dot(&iface.normal)),
            format!("{:.12e}", e.state.v.dot(&iface.tangent)),
            format!("{:.12e}", params.pressure(e.state.rho)),
            e.entropy_ok.to_string(),
        ])
        .map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::v2;

    fn gas() -> GasParams {
        GasParams::new(1.4).unwrap()
    }

    fn normal_iface() -> OrientedInterface {
        OrientedInterface::from_angle(Vec2::zeros(), 0.0)
    }

    #[test]
    fn identical_states_have_no_jump() {
        let s = PointState::new(1.3, v2(0.4, -2.0)).unwrap();
        let i = OrientedInterface::new(v2(1.0, 1.0), v2(1.0, 2.0)).unwrap();
        assert_eq!(rh_residual(&s, &s, &i, &gas()), [0.0; 3]);
        assert_eq!(classify(&s, &s, &i, &gas(), CLASSIFY_TOL).kind, JumpKind::Continuous);
        assert_eq!(entropy_flux_jump(&s, &s, &i, &gas()), 0.0);
    }

    #[test]
    fn vortex_sheet() {
        let i = normal_iface();
        let a = PointState::new(1.0, v2(0.0, 5.0)).unwrap();
        let b = PointState::new(1.0, v2(0.0, -3.0)).unwrap();
        assert_eq!(rh_residual(&a, &b, &i, &gas()), [0.0; 3]);
        assert_eq!(classify(&a, &b, &i, &gas(), CLASSIFY_TOL).kind, JumpKind::VortexSheet);
        assert_eq!(entropy_flux_jump(&a, &b, &i, &gas()), 0.0);
        assert!(entropy_admissible(&a, &b, &i, &gas()).is_err());
    }

    #[test]
    fn subsonic_upstream_has_no_shock() {
        let s = PointState::new(1.0, v2(0.9, 0.0)).unwrap();
        assert!(matches!(downstream_state(&s, &normal_iface(), &gas()), Err(Error::NoShock(_))));
        assert!(matches!(shock_polar(&s, &gas(), 10), Err(Error::NoShock(_))));
    }

    #[test]
    fn round_trip_and_orientation() {
        let g = gas();
        let i = OrientedInterface::from_angle(v2(0.3, 0.1), 0.4);
        let up = PointState::new(1.2, i.normal * 2.5 + i.tangent * 0.7).unwrap();
        let down = downstream_state(&up, &i, &g).unwrap();
        assert!(residual_norm(&rh_residual(&up, &down, &i, &g)) < 1e-12);
        assert_eq!(classify(&up, &down, &i, &g, CLASSIFY_TOL).kind, JumpKind::Shock);
        let rep = entropy_admissible(&up, &down, &i, &g).unwrap();
        assert!(rep.admissible, "{rep:?}");
        let swapped = entropy_admissible(&down, &up, &i, &g).unwrap();
        assert!(!swapped.admissible);
        assert!(entropy_flux_jump(&up, &down, &i, &g) < 0.0);
    }

    #[test]
    fn sonic_inflow_is_zero_strength() {
        let g = gas();
        let up = PointState::new(1.0, v2(1.0, 0.0)).unwrap();
        let down = downstream_state(&up, &normal_iface(), &g).unwrap();
        assert!((down.rho - 1.0).abs() < 1e-6);
        let rep = entropy_admissible(&up, &down, &normal_iface(), &g).unwrap();
        assert!(!rep.admissible);
    }

    #[test]
    fn polar_endpoints_and_normal_shock() {
        let g = gas();
        let up = PointState::new(1.0, v2(2.0, 1.0)).unwrap();
        let polar = shock_polar(&up, &g, 101).unwrap();
        assert!((polar[0].state.rho - 1.0).abs() < 1e-6);
        assert!((polar[100].state.rho - 1.0).abs() < 1e-6);
        assert!(!polar[0].entropy_ok);
        assert!(polar[1..100].iter().all(|e| e.entropy_ok && e.state.rho > 1.0));
        let mid = &polar[50];
        let direct = downstream_state(&up, &OrientedInterface::new(Vec2::zeros(), up.v).unwrap(), &g).unwrap();
        assert!((mid.state.rho - direct.rho).abs() < 1e-12);
        let max = polar.iter().map(|e| e.state.rho).fold(0.0, f64::max);
        assert_eq!(max, mid.state.rho);
    }

    #[test]
    fn polar_csv_has_header() {
        let g = gas();
        let up = PointState::new(1.0, v2(2.0, 0.0)).unwrap();
        let polar = shock_polar(&up, &g, 5).unwrap();
        let mut buf = Vec::new();
        write_polar_csv(&polar, &g, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("beta_rad,rho_plus,vnu_plus,vtau_plus,p_plus,entropy_ok\n"));
        assert_eq!(text.lines().count(), 6);
    }
}
