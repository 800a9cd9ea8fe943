use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::GridField2D;
use crate::error::{Error, Result};
use crate::geom::Vec2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Parity {
    Odd,
    Even,
}

/// Straight wall `a → b` of Ω with its inner unit normal, and the wall
/// corner `𝒫₀` with the interior angle there when the wall ends at one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReflectionSpec {
    pub a: Vec2,
    pub b: Vec2,
    pub inward: Vec2,
    pub corner: Option<Vec2>,
    pub corner_angle: Option<f64>,
    /// Radius factor `L` of the excluded ball `B_{Lr}(𝒫₀)`.
    pub exclusion_factor: f64,
    /// Largest admissible extension depth.
    pub r1: f64,
}

/// Corner-ball factor for interior angle `theta`: zero up to π, and for a
/// reflex corner the larger of `|csc θ|` and `csc((2π − θ)/2)`. The second
/// term only matters above 4π/3, where the two reflected strips overlap
/// farther out than `|csc θ| r`.
pub fn exclusion_factor(theta: f64) -> f64 {
    if theta <= PI {
        0.0
    } else {
        let alpha = 2.0 * PI - theta;
        (1.0 / theta.sin().abs()).max(1.0 / (0.5 * alpha).sin())
    }
}

fn point_segment_distance(p: &Vec2, a: &Vec2, b: &Vec2) -> f64 {
    let d = b - a;
    let t = ((p - a).dot(&d) / d.norm_squared()).clamp(0.0, 1.0);
    (p - (a + d * t)).norm()
}

impl ReflectionSpec {
    /// `others` are the remaining straight walls; those not ending at the
    /// corner bound `r1` through `dist(𝒫₀, Γ) ≥ (L + 1) r1`.
    pub fn new(a: Vec2, b: Vec2, inward: Vec2, corner: Option<(Vec2, f64)>, others: &[(Vec2, Vec2)]) -> Result<Self> {
        let d = b - a;
        if !(d.norm() > 0.0) {
            return Err(Error::Geometry("reflecting segment has zero length".into()));
        }
        let t = d / d.norm();
        let mut n = Vec2::new(-t.y, t.x);
        if n.dot(&inward) < 0.0 {
            n = -n;
        }
        let (corner_pt, corner_angle) = match corner {
            Some((p, th)) => {
                if !(th > 0.0 && th < 2.0 * PI) {
                    return Err(Error::InvalidParameter(format!("corner angle {th} outside (0, 2π)")));
                }
                if (p - a).norm() > 1e-12 && (p - b).norm() > 1e-12 {
                    return Err(Error::Geometry("the corner must be an end point of the reflecting segment".into()));
                }
                (Some(p), Some(th))
            }
            None => (None, None),
        };
        let l = corner_angle.map(exclusion_factor).unwrap_or(0.0);
        let mut r1 = f64::INFINITY;
        if let Some(p) = corner_pt {
            for (oa, ob) in others {
                if (oa - p).norm() < 1e-12 || (ob - p).norm() < 1e-12 {
                    continue;
                }
                r1 = r1.min(point_segment_distance(&p, oa, ob) / (l + 1.0));
            }
        }
        Ok(Self { a, b, inward: n, corner: corner_pt, corner_angle, exclusion_factor: l, r1 })
    }
}

fn sample(f: &GridField2D, p: &Vec2) -> Option<f64> {
    let q = (p - f.origin) / f.h;
    let (fi, fj) = (q.x.floor(), q.y.floor());
    let (ri, rj) = (q.x.round(), q.y.round());
    if (q.x - ri).abs() < 1e-9 && (q.y - rj).abs() < 1e-9 {
        if ri < 0.0 || rj < 0.0 || ri as usize >= f.nx || rj as usize >= f.ny {
            return None;
        }
        let k = f.idx(ri as usize, rj as usize);
        return f.set[k].then(|| f.values[k]);
    }
    if fi < 0.0 || fj < 0.0 || fi as usize + 1 >= f.nx || fj as usize + 1 >= f.ny {
        return None;
    }
    let (i, j) = (fi as usize, fj as usize);
    let (sx, sy) = (q.x - fi, q.y - fj);
    let mut acc = 0.0;
    for (di, dj, w) in [(0, 0, (1.0 - sx) * (1.0 - sy)), (1, 0, sx * (1.0 - sy)), (0, 1, (1.0 - sx) * sy), (1, 1, sx * sy)] {
        let k = f.idx(i + di, j + dj);
        if !f.set[k] {
            return None;
        }
        acc += w * f.values[k];
    }
    Some(acc)
}

/// Extends `f` (set on the Ω side) to unset nodes at depth `(0, r)` behind
/// the wall by mirrored values with the given parity, leaving the closed
/// corner ball `B̄_{Lr}(𝒫₀)` unset. Mirror points off the grid are
/// interpolated bilinearly, so the extension is exact only for walls along
/// grid lines.
pub fn reflect_extend(f: &GridField2D, spec: &ReflectionSpec, parity: Parity, r: f64) -> Result<GridField2D> {
    if !(r > 0.0) {
        return Err(Error::InvalidParameter(format!("extension depth {r} must be positive")));
    }
    if r > spec.r1 {
        return Err(Error::Geometry(format!(
            "extension depth {r} exceeds the clearance {} that keeps the corner ball away from other walls",
            spec.r1
        )));
    }
    let sign = match parity {
        Parity::Odd => -1.0,
        Parity::Even => 1.0,
    };
    let d = spec.b - spec.a;
    let len2 = d.norm_squared();
    let ball = spec.exclusion_factor * r;
    let mut out = f.clone();
    for j in 0..f.ny {
        for i in 0..f.nx {
            let k = f.idx(i, j);
            if f.set[k] {
                continue;
            }
            let x = f.node(i, j);
            let s = (x - spec.a).dot(&spec.inward);
            if !(s < 0.0 && s > -r) {
                continue;
            }
            let t = (x - spec.a).dot(&d) / len2;
            if !(t > 0.0 && t < 1.0) {
                continue;
            }
            if let Some(p) = spec.corner {
                if (x - p).norm() <= ball {
                    continue;
                }
            }
            let mirror = x - spec.inward * (2.0 * s);
            if let Some(v) = sample(f, &mirror) {
                out.values[k] = sign * v;
                out.set[k] = true;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_for_convex_and_reflex_corners() {
        assert_eq!(exclusion_factor(PI / 2.0), 0.0);
        assert_eq!(exclusion_factor(PI), 0.0);
        assert!((exclusion_factor(1.25 * PI) - 2f64.sqrt()).abs() < 1e-12);
        assert!((exclusion_factor(1.75 * PI) - 1.0 / (PI / 8.0).sin()).abs() < 1e-12);
    }

    #[test]
    fn parities_mirror_values() {
        let h = 0.1;
        let f = GridField2D::from_fn_masked(Vec2::new(-1.0, -1.0), h, 21, 21, |p| {
            (p.y >= -1e-12).then(|| p.y + 0.5 * p.x)
        })
        .unwrap();
        let spec = ReflectionSpec::new(Vec2::new(-1.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0), None, &[]).unwrap();
        let odd = reflect_extend(&f, &spec, Parity::Odd, 0.35).unwrap();
        let even = reflect_extend(&f, &spec, Parity::Even, 0.35).unwrap();
        let (i, j, jm) = (13, 7, 13);
        assert!(odd.set[odd.idx(i, j)] && !odd.set[odd.idx(i, 5)]);
        assert!((odd.get(i, j) + f.get(i, jm)).abs() < 1e-12);
        assert!((even.get(i, j) - f.get(i, jm)).abs() < 1e-12);
    }

    #[test]
    fn depth_beyond_clearance_is_rejected() {
        let others = [(Vec2::new(0.0, 1.0), Vec2::new(1.0, 1.0))];
        let spec = ReflectionSpec::new(Vec2::zeros(), Vec2::new(2.0, 0.0), Vec2::new(0.0, 1.0), Some((Vec2::zeros(), 1.25 * PI)), &others)
            .unwrap();
        let f = GridField2D::unit_square(8, |_| 1.0).unwrap();
        assert!(reflect_extend(&f, &spec, Parity::Odd, spec.r1 * 1.01).is_err());
    }
}
