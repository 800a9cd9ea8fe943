//! Plane geometry: vectors, parametrized boundary curves and intersections.

use serde::{Deserialize, Serialize};

pub type Vec2 = nalgebra::Vector2<f64>;

pub fn v2(x: f64, y: f64) -> Vec2 {
    Vec2::new(x, y)
}

/// Counter-clockwise rotation by 90 degrees.
pub fn rot90(a: &Vec2) -> Vec2 {
    Vec2::new(-a.y, a.x)
}

pub fn cross(a: &Vec2, b: &Vec2) -> f64 {
    a.x * b.y - a.y * b.x
}

pub fn unit(angle: f64) -> Vec2 {
    Vec2::new(angle.cos(), angle.sin())
}

/// Mirror image of `p` across the line through `a` with unit direction `d`.
pub fn reflect_point(p: &Vec2, a: &Vec2, d: &Vec2) -> Vec2 {
    let r = p - a;
    let along = d * r.dot(d);
    a + along * 2.0 - r
}

/// Mirror image of a vector (no translation) across direction `d`.
pub fn reflect_vector(w: &Vec2, d: &Vec2) -> Vec2 {
    d * (2.0 * w.dot(d)) - w
}

/// Intersection of the lines `a + s da` and `b + t db`. Returns `(s, t)`.
pub fn line_line(a: &Vec2, da: &Vec2, b: &Vec2, db: &Vec2) -> Option<(f64, f64)> {
    let den = cross(da, db);
    if den.abs() < 1e-300 {
        return None;
    }
    let r = b - a;
    Some((cross(&r, db) / den, cross(&r, da) / den))
}

/// Parameters `t` (sorted) where the line `a + t d` meets the circle.
pub fn line_circle(a: &Vec2, d: &Vec2, center: &Vec2, radius: f64) -> Vec<f64> {
    let f = a - center;
    let qa = d.dot(d);
    let qb = 2.0 * f.dot(d);
    let qc = f.dot(&f) - radius * radius;
    let disc = qb * qb - 4.0 * qa * qc;
    if disc < 0.0 {
        return Vec::new();
    }
    let s = disc.sqrt();
    // stable quadratic roots
    let q = -0.5 * (qb + qb.signum() * s);
    let mut roots = if q == 0.0 {
        vec![0.0, 0.0]
    } else {
        vec![q / qa, qc / q]
    };
    roots.sort_by(|x, y| x.partial_cmp(y).unwrap());
    roots
}

/// Geometric role of a boundary curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CurveKind {
    StraightWall,
    StraightShock,
    SonicArc,
    CurvedShockModel,
    SymmetryLine,
}

/// Parametrization of a curve over `t ∈ [0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum CurveShape {
    Line { a: Vec2, b: Vec2 },
    /// Arc of a circle, angle varying linearly from `theta0` to `theta1`.
    Arc { center: Vec2, radius: f64, theta0: f64, theta1: f64 },
    /// Cubic Hermite curve with end points and end derivatives.
    Hermite { p0: Vec2, p1: Vec2, m0: Vec2, m1: Vec2 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveSegment {
    pub name: String,
    pub kind: CurveKind,
    pub shape: CurveShape,
}

impl CurveSegment {
    pub fn new(name: &str, kind: CurveKind, shape: CurveShape) -> Self {
        Self { name: name.to_string(), kind, shape }
    }

    pub fn line(name: &str, kind: CurveKind, a: Vec2, b: Vec2) -> Self {
        Self::new(name, kind, CurveShape::Line { a, b })
    }

    pub fn arc(name: &str, center: Vec2, radius: f64, theta0: f64, theta1: f64) -> Self {
        Self::new(name, CurveKind::SonicArc, CurveShape::Arc { center, radius, theta0, theta1 })
    }

    /// Short arc of the circle from `a` to `b` (both assumed on the circle).
    pub fn arc_between(name: &str, center: Vec2, radius: f64, a: &Vec2, b: &Vec2) -> Self {
        let t0 = (a.y - center.y).atan2(a.x - center.x);
        let mut t1 = (b.y - center.y).atan2(b.x - center.x);
        let mut d = t1 - t0;
        while d > std::f64::consts::PI {
            d -= 2.0 * std::f64::consts::PI;
        }
        while d < -std::f64::consts::PI {
            d += 2.0 * std::f64::consts::PI;
        }
        t1 = t0 + d;
        Self::arc(name, center, radius, t0, t1)
    }

    pub fn hermite(name: &str, p0: Vec2, p1: Vec2, m0: Vec2, m1: Vec2) -> Self {
        Self::new(name, CurveKind::CurvedShockModel, CurveShape::Hermite { p0, p1, m0, m1 })
    }

    pub fn point(&self, t: f64) -> Vec2 {
        match &self.shape {
            CurveShape::Line { a, b } => a + (b - a) * t,
            CurveShape::Arc { center, radius, theta0, theta1 } => {
                center + unit(theta0 + (theta1 - theta0) * t) * *radius
            }
            CurveShape::Hermite { p0, p1, m0, m1 } => {
                let t2 = t * t;
                let t3 = t2 * t;
                p0 * (2.0 * t3 - 3.0 * t2 + 1.0)
                    + m0 * (t3 - 2.0 * t2 + t)
                    + p1 * (-2.0 * t3 + 3.0 * t2)
                    + m1 * (t3 - t2)
            }
        }
    }

    pub fn d1(&self, t: f64) -> Vec2 {
        match &self.shape {
            CurveShape::Line { a, b } => b - a,
            CurveShape::Arc { radius, theta0, theta1, .. } => {
                let w = theta1 - theta0;
                rot90(&unit(theta0 + w * t)) * (radius * w)
            }
            CurveShape::Hermite { p0, p1, m0, m1 } => {
                let t2 = t * t;
                p0 * (6.0 * t2 - 6.0 * t)
                    + m0 * (3.0 * t2 - 4.0 * t + 1.0)
                    + p1 * (-6.0 * t2 + 6.0 * t)
                    + m1 * (3.0 * t2 - 2.0 * t)
            }
        }
    }

    pub fn d2(&self, t: f64) -> Vec2 {
        match &self.shape {
            CurveShape::Line { .. } => Vec2::zeros(),
            CurveShape::Arc { radius, theta0, theta1, .. } => {
                let w = theta1 - theta0;
                -unit(theta0 + w * t) * (radius * w * w)
            }
            CurveShape::Hermite { p0, p1, m0, m1 } => {
                p0 * (12.0 * t - 6.0) + m0 * (6.0 * t - 4.0) + p1 * (-12.0 * t + 6.0) + m1 * (6.0 * t - 2.0)
            }
        }
    }

    pub fn start(&self) -> Vec2 {
        self.point(0.0)
    }

    pub fn end(&self) -> Vec2 {
        self.point(1.0)
    }

    pub fn tangent(&self, t: f64) -> Vec2 {
        self.d1(t).normalize()
    }

    /// Left normal: the unit tangent rotated by +90 degrees.
    pub fn normal(&self, t: f64) -> Vec2 {
        rot90(&self.tangent(t))
    }

    /// Signed curvature, positive when the curve turns towards [`Self::normal`].
    pub fn curvature(&self, t: f64) -> f64 {
        let d1 = self.d1(t);
        cross(&d1, &self.d2(t)) / d1.norm().powi(3)
    }

    /// The same curve traversed backwards.
    pub fn reversed(&self) -> Self {
        let shape = match &self.shape {
            CurveShape::Line { a, b } => CurveShape::Line { a: *b, b: *a },
            CurveShape::Arc { center, radius, theta0, theta1 } => {
                CurveShape::Arc { center: *center, radius: *radius, theta0: *theta1, theta1: *theta0 }
            }
            CurveShape::Hermite { p0, p1, m0, m1 } => CurveShape::Hermite { p0: *p1, p1: *p0, m0: -m1, m1: -m0 },
        };
        Self { name: self.name.clone(), kind: self.kind, shape }
    }

    /// Restriction to `[ta, tb]`, reparametrized over `[0, 1]`.
    pub fn restrict(&self, ta: f64, tb: f64) -> Self {
        let shape = match &self.shape {
            CurveShape::Line { .. } => CurveShape::Line { a: self.point(ta), b: self.point(tb) },
            CurveShape::Arc { center, radius, theta0, theta1 } => {
                let w = theta1 - theta0;
                CurveShape::Arc {
                    center: *center,
                    radius: *radius,
                    theta0: theta0 + w * ta,
                    theta1: theta0 + w * tb,
                }
            }
            CurveShape::Hermite { .. } => CurveShape::Hermite {
                p0: self.point(ta),
                p1: self.point(tb),
                m0: self.d1(ta) * (tb - ta),
                m1: self.d1(tb) * (tb - ta),
            },
        };
        Self { name: self.name.clone(), kind: self.kind, shape }
    }

    /// Arc length by Gauss–Legendre quadrature.
    pub fn length(&self) -> f64 {
        let q = crate::diagnostic::quad::gauss_legendre(64);
        q.iter().map(|(t, w)| w * self.d1(*t).norm()).sum()
    }

    /// `n` equally spaced parameter samples including both ends.
    pub fn sample(&self, n: usize) -> Vec<Vec2> {
        (0..n).map(|i| self.point(i as f64 / (n - 1) as f64)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arc_curvature_is_inverse_radius() {
        let c = CurveSegment::arc("a", v2(1.0, 2.0), 0.5, 0.1, 1.3);
        for i in 0..5 {
            let t = i as f64 / 4.0;
            assert!((c.curvature(t) - 2.0).abs() < 1e-12);
            assert!(((c.point(t) - v2(1.0, 2.0)).norm() - 0.5).abs() < 1e-14);
        }
        assert!((c.reversed().curvature(0.3) + 2.0).abs() < 1e-12);
    }

    #[test]
    fn hermite_matches_end_data_and_restricts() {
        let h = CurveSegment::hermite("h", v2(0.0, 0.0), v2(1.0, 1.0), v2(2.0, 0.0), v2(0.0, 3.0));
        assert!((h.point(0.0) - v2(0.0, 0.0)).norm() < 1e-15);
        assert!((h.point(1.0) - v2(1.0, 1.0)).norm() < 1e-15);
        assert!((h.d1(0.0) - v2(2.0, 0.0)).norm() < 1e-14);
        assert!((h.d1(1.0) - v2(0.0, 3.0)).norm() < 1e-14);
        let r = h.restrict(0.25, 0.75);
        for i in 0..=10 {
            let s = i as f64 / 10.0;
            assert!((r.point(s) - h.point(0.25 + 0.5 * s)).norm() < 1e-14);
        }
        let b = h.reversed();
        assert!((b.point(0.3) - h.point(0.7)).norm() < 1e-14);
        assert!((b.curvature(0.3) + h.curvature(0.7)).abs() < 1e-12);
    }

    #[test]
    fn intersections() {
        let ts = line_circle(&v2(-2.0, 0.0), &v2(1.0, 0.0), &v2(0.0, 0.0), 1.0);
        assert_eq!(ts.len(), 2);
        assert!((ts[0] - 1.0).abs() < 1e-15 && (ts[1] - 3.0).abs() < 1e-15);
        let (s, t) = line_line(&v2(0.0, 0.0), &v2(1.0, 1.0), &v2(2.0, 0.0), &v2(0.0, 1.0)).unwrap();
        assert!((s - 2.0).abs() < 1e-15 && (t - 2.0).abs() < 1e-15);
        let m = reflect_point(&v2(1.0, 2.0), &v2(0.0, 0.0), &v2(1.0, 0.0));
        assert!((m - v2(1.0, -2.0)).norm() < 1e-15);
    }
}
