//! Two-shock corner problem: a straight shock through a point on a wall
//! turns a given uniform state into one whose velocity is parallel to the
//! wall. Regular reflection, the Prandtl state (O) and the four-shock states
//! (5), (6) are all instances.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gas::{ConstantState, GasParams};
use crate::geom::{rot90, Vec2};
use crate::jump::{downstream_state, OrientedInterface};

const POLAR_SCAN: usize = 400;
const ANGLE_TOL: f64 = 1e-14;

/// Upstream uniform state meeting a wall (a line through the origin) at
/// `point`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CornerProblem {
    pub upstream: ConstantState,
    pub point: Vec2,
    /// Unit direction of the wall line.
    pub wall_dir: Vec2,
    /// Unit normal of the wall pointing into the flow region.
    pub inward: Vec2,
}

impl CornerProblem {
    pub fn new(upstream: ConstantState, point: Vec2, wall_dir: Vec2, inward: Vec2) -> Self {
        let wall_dir = wall_dir.normalize();
        let mut n = rot90(&wall_dir);
        if n.dot(&inward) < 0.0 {
            n = -n;
        }
        Self { upstream, point, wall_dir, inward: n }
    }
}

/// One root of the corner problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CornerState {
    pub state: ConstantState,
    /// Straight shock through the corner point; its normal points from the
    /// upstream side into the new state.
    pub shock: OrientedInterface,
}

impl CornerState {
    /// Pseudo-Mach number `|v|/c` of the new state at the corner point.
    pub fn mach_at_corner(&self, params: &GasParams) -> f64 {
        (self.state.u - self.shock.point).norm() / params.sound_speed(self.state.rho)
    }

    /// Direction of the shock line.
    pub fn shock_dir(&self) -> Vec2 {
        self.shock.tangent
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum CornerRoots {
    Two { weak: CornerState, strong: CornerState },
    Detached,
}

impl CornerRoots {
    pub fn weak(&self) -> Option<&CornerState> {
        match self {
            CornerRoots::Two { weak, .. } => Some(weak),
            CornerRoots::Detached => None,
        }
    }
}

struct Polar<'a> {
    p: &'a CornerProblem,
    params: &'a GasParams,
    alpha: f64,
    delta: f64,
}

impl Polar<'_> {
    /// Wall-normal velocity behind the shock with normal angle `beta`;
    /// `None` when the shock would face away from the wall.
    fn slip(&self, beta: f64) -> Option<(f64, CornerState)> {
        let iface = OrientedInterface::from_angle(self.p.point, beta);
        if iface.normal.dot(&self.p.inward) >= 0.0 {
            return None;
        }
        let up = self.p.upstream.at(&self.p.point);
        let down = downstream_state(&up, &iface, self.params).ok()?;
        let u = down.v + self.p.point;
        let st = CornerState { state: ConstantState { rho: down.rho, u }, shock: iface };
        Some((u.dot(&self.p.inward), st))
    }

    fn g(&self, beta: f64) -> f64 {
        self.slip(beta).map(|x| x.0).unwrap_or(f64::NEG_INFINITY)
    }
}

fn polar<'a>(p: &'a CornerProblem, params: &'a GasParams) -> Option<Polar<'a>> {
    let v = p.upstream.u - p.point;
    let q = v.norm();
    let c = params.sound_speed(p.upstream.rho);
    if !(q > c) {
        return None;
    }
    Some(Polar { p, params, alpha: v.y.atan2(v.x), delta: (c / q).acos() })
}

/// Maximum over the shock polar of the wall-normal velocity behind the
/// shock, with its normal angle. Roots exist iff the maximum is positive.
fn polar_max(pl: &Polar) -> (f64, f64) {
    let lo = pl.alpha - pl.delta;
    let w = 2.0 * pl.delta / POLAR_SCAN as f64;
    let mut best = (f64::NEG_INFINITY, pl.alpha);
    for k in 1..POLAR_SCAN {
        let b = lo + w * k as f64;
        let g = pl.g(b);
        if g > best.0 {
            best = (g, b);
        }
    }
    if !best.0.is_finite() {
        return best;
    }
    // golden-section refinement around the best sample
    let (mut a, mut b) = (best.1 - w, best.1 + w);
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let (mut f1, mut f2) = (pl.g(x1), pl.g(x2));
    while b - a > ANGLE_TOL {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = pl.g(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = pl.g(x1);
        }
    }
    let bm = 0.5 * (a + b);
    let gm = pl.g(bm);
    if gm > best.0 {
        (gm, bm)
    } else {
        best
    }
}

/// Largest wall-normal velocity reachable behind a straight shock through
/// the corner point; negative when the problem is detached.
pub fn slip_margin(p: &CornerProblem, params: &GasParams) -> f64 {
    match polar(p, params) {
        Some(pl) => polar_max(&pl).0.max(p.upstream.u.dot(&p.inward)),
        None => p.upstream.u.dot(&p.inward),
    }
}

fn bisect_root(pl: &Polar, mut neg: f64, mut pos: f64) -> f64 {
    while (pos - neg).abs() > ANGLE_TOL {
        let mid = 0.5 * (neg + pos);
        if pl.g(mid) > 0.0 {
            pos = mid;
        } else {
            neg = mid;
        }
    }
    0.5 * (neg + pos)
}

/// Both roots of the corner problem, or `Detached`.
pub fn solve_corner(p: &CornerProblem, params: &GasParams) -> Result<CornerRoots> {
    if p.upstream.u.dot(&p.inward) >= 0.0 {
        return Err(Error::Precondition("upstream velocity must point into the wall".into()));
    }
    let Some(pl) = polar(p, params) else {
        return Ok(CornerRoots::Detached);
    };
    let (gmax, bmax) = polar_max(&pl);
    if !(gmax > 0.0) {
        return Ok(CornerRoots::Detached);
    }
    let lo = pl.alpha - pl.delta;
    let w = 2.0 * pl.delta / POLAR_SCAN as f64;
    let k0 = ((bmax - lo) / w).floor() as i64;
    let mut left = None;
    for k in (1..=k0.min(POLAR_SCAN as i64 - 1)).rev() {
        let b = lo + w * k as f64;
        if b < bmax && pl.g(b) <= 0.0 {
            left = Some(b);
            break;
        }
    }
    let mut right = None;
    for k in (k0 + 1).max(1)..POLAR_SCAN as i64 {
        let b = lo + w * k as f64;
        if b > bmax && pl.g(b) <= 0.0 {
            right = Some(b);
            break;
        }
    }
    let left = left.unwrap_or(lo);
    let right = right.unwrap_or(lo + 2.0 * pl.delta);
    let b1 = bisect_root(&pl, left, bmax);
    let b2 = bisect_root(&pl, right, bmax);
    let s1 = pl.slip(b1).ok_or_else(|| Error::Numerical("lost the first corner root".into()))?.1;
    let s2 = pl.slip(b2).ok_or_else(|| Error::Numerical("lost the second corner root".into()))?.1;
    let (weak, strong) = if s1.state.rho <= s2.state.rho { (s1, s2) } else { (s2, s1) };
    Ok(CornerRoots::Two { weak, strong })
}

/// Where roots exist relative to a critical angle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Above,
    Below,
}

/// Detachment angle of a one-parameter family of corner problems on
/// `(lo, hi)`, with the side on which two roots exist.
pub fn detachment_of_family<F>(family: F, params: &GasParams, lo: f64, hi: f64, scan: usize) -> Result<(f64, Side)>
where
    F: Fn(f64) -> CornerProblem,
{
    let d = |t: f64| slip_margin(&family(t), params);
    let ts: Vec<f64> = (0..scan).map(|k| lo + (hi - lo) * (k as f64 + 0.5) / scan as f64).collect();
    let vals: Vec<f64> = ts.iter().map(|t| d(*t)).collect();
    let mut bracket = None;
    for k in 0..scan - 1 {
        if (vals[k] > 0.0) != (vals[k + 1] > 0.0) {
            if bracket.is_some() {
                return Err(Error::Numerical("more than one detachment transition in the scan".into()));
            }
            bracket = Some(k);
        }
    }
    let Some(k) = bracket else {
        let log: Vec<String> = ts.iter().zip(&vals).map(|(t, v)| format!("{t:.4}:{v:.3e}")).collect();
        return Err(Error::Numerical(format!("no detachment transition found; scan {}", log.join(" "))));
    };
    let side = if vals[k + 1] > 0.0 { Side::Above } else { Side::Below };
    let (mut a, mut b) = (ts[k], ts[k + 1]);
    let pos_at_b = vals[k + 1] > 0.0;
    while b - a > 1e-12 {
        let m = 0.5 * (a + b);
        if (d(m) > 0.0) == pos_at_b {
            b = m;
        } else {
            a = m;
        }
    }
    Ok((0.5 * (a + b), side))
}

/// Sonic transition `|v(P)| = c` of the weak root along a family, searched
/// on `(lo, hi)` which must lie inside the two-root region.
pub fn sonic_of_family<F>(family: F, params: &GasParams, lo: f64, hi: f64, scan: usize) -> Result<Option<(f64, Side)>>
where
    F: Fn(f64) -> CornerProblem,
{
    let s = |t: f64| -> Result<f64> {
        match solve_corner(&family(t), params)? {
            CornerRoots::Two { weak, .. } => Ok(weak.mach_at_corner(params) - 1.0),
            CornerRoots::Detached => Err(Error::Detached(format!("no corner state at angle {t}"))),
        }
    };
    let ts: Vec<f64> = (0..=scan).map(|k| lo + (hi - lo) * k as f64 / scan as f64).collect();
    let mut vals = Vec::with_capacity(ts.len());
    for t in &ts {
        vals.push(s(*t)?);
    }
    for k in 0..scan {
        if (vals[k] > 0.0) != (vals[k + 1] > 0.0) {
            let side = if vals[k + 1] > 0.0 { Side::Above } else { Side::Below };
            let (mut a, mut b) = (ts[k], ts[k + 1]);
            let pos_at_b = vals[k + 1] > 0.0;
            while b - a > 1e-12 {
                let m = 0.5 * (a + b);
                if (s(m)? > 0.0) == pos_at_b {
                    b = m;
                } else {
                    a = m;
                }
            }
            return Ok(Some((0.5 * (a + b), side)));
        }
    }
    Ok(None)
}
