//! Gauss–Legendre rules and curvilinear quadrilateral patches.

use crate::config::build::SegmentRef;
use crate::error::{Error, Result};
use crate::geom::{cross, CurveSegment, Vec2};

/// Gauss–Legendre nodes and weights on `[0, 1]`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let q = gauss_quad::GaussLegendre::new(n.try_into().expect("order must be positive"));
    q.iter().map(|(x, w)| (0.5 * (x + 1.0), 0.5 * w)).collect()
}

/// Composite Gauss–Legendre rule on `[0, 1]` with the given breakpoints.
fn composite(breaks: &[f64], n: usize) -> Vec<(f64, f64)> {
    let base = gauss_legendre(n);
    let mut out = Vec::with_capacity(base.len() * (breaks.len() - 1));
    for w in breaks.windows(2) {
        let (a, b) = (w[0], w[1]);
        out.extend(base.iter().map(|(t, wt)| (a + (b - a) * t, (b - a) * wt)));
    }
    out
}

/// Boundary piece of a patch edge, labelled with the configuration segment
/// it came from (`None` for analytic patches).
#[derive(Debug, Clone)]
pub struct EdgePiece {
    pub tag: Option<SegmentRef>,
    pub curve: CurveSegment,
}

/// One side of the patch: a chain of curves sharing `[0, 1]` uniformly.
#[derive(Debug, Clone)]
pub struct PatchEdge {
    pub pieces: Vec<EdgePiece>,
}

impl PatchEdge {
    fn locate(&self, s: f64) -> (usize, f64) {
        let k = self.pieces.len();
        let x = (s * k as f64).clamp(0.0, k as f64);
        let j = (x.floor() as usize).min(k - 1);
        (j, x - j as f64)
    }

    pub fn point(&self, s: f64) -> Vec2 {
        let (j, t) = self.locate(s);
        self.pieces[j].curve.point(t)
    }

    pub fn d1(&self, s: f64) -> Vec2 {
        let (j, t) = self.locate(s);
        self.pieces[j].curve.d1(t) * self.pieces.len() as f64
    }

    fn breaks(&self) -> Vec<f64> {
        let k = self.pieces.len();
        (0..=k).map(|j| j as f64 / k as f64).collect()
    }
}

/// Curvilinear quadrilateral with a transfinite (Coons) interior map.
///
/// The edges are stored counter-clockwise: bottom `s: 0→1`, right
/// `t: 0→1`, top traversed from `(1,1)` to `(0,1)`, left from `(0,1)` to
/// `(0,0)`.
#[derive(Debug, Clone)]
pub struct QuadPatch {
    pub edges: [PatchEdge; 4],
}

const CLOSE_TOL: f64 = 1e-9;

impl QuadPatch {
    /// Patch from four curves given counter-clockwise and head to tail.
    pub fn new(curves: [CurveSegment; 4]) -> Result<Self> {
        let edges = curves.map(|c| PatchEdge { pieces: vec![EdgePiece { tag: None, curve: c }] });
        Self::from_edges(edges)
    }

    fn from_edges(edges: [PatchEdge; 4]) -> Result<Self> {
        for i in 0..4 {
            let a = edges[i].point(1.0);
            let b = edges[(i + 1) % 4].point(0.0);
            if (a - b).norm() > CLOSE_TOL * (1.0 + a.norm()) {
                return Err(Error::Geometry(format!("patch edges {i} and {} do not connect", (i + 1) % 4)));
            }
        }
        Ok(Self { edges })
    }

    /// Patch from a counter-clockwise loop of 3 or more curves. Adjacent
    /// exterior pieces are chained into one edge while more than four
    /// remain; the longest piece is split while fewer than four remain.
    pub fn from_loop(curves: Vec<(SegmentRef, CurveSegment)>) -> Result<Self> {
        if curves.len() < 2 {
            return Err(Error::Geometry("a patch needs at least two boundary curves".into()));
        }
        let mut groups: Vec<Vec<EdgePiece>> =
            curves.into_iter().map(|(tag, curve)| vec![EdgePiece { tag: Some(tag), curve }]).collect();
        // a reflex corner cannot be a patch corner: chain the edges meeting there
        loop {
            let n = groups.len();
            let reflex = (0..n).find(|&i| {
                let a = groups[i].last().unwrap().curve.tangent(1.0);
                let b = groups[(i + 1) % n][0].curve.tangent(0.0);
                cross(&a, &b) < -1e-12
            });
            match reflex {
                Some(i) if n > 2 => Self::chain(&mut groups, i),
                _ => break,
            }
        }
        let len = |g: &Vec<EdgePiece>| g.iter().map(|p| p.curve.length()).sum::<f64>();
        while groups.len() > 4 {
            let n = groups.len();
            let is_ext = |g: &Vec<EdgePiece>| g.iter().all(|p| matches!(p.tag, Some(SegmentRef::Ext(_))));
            let pick = (0..n).find(|&i| is_ext(&groups[i]) && is_ext(&groups[(i + 1) % n])).unwrap_or_else(|| {
                (0..n)
                    .min_by(|&i, &j| {
                        let a = len(&groups[i]) + len(&groups[(i + 1) % n]);
                        let b = len(&groups[j]) + len(&groups[(j + 1) % n]);
                        a.total_cmp(&b)
                    })
                    .unwrap()
            });
            Self::chain(&mut groups, pick);
        }
        while groups.len() < 4 {
            let i = (0..groups.len())
                .filter(|&i| groups[i].len() == 1)
                .max_by(|&i, &j| len(&groups[i]).total_cmp(&len(&groups[j])))
                .ok_or_else(|| Error::Geometry("no boundary curve left to split".into()))?;
            let p = groups.remove(i).remove(0);
            groups.insert(i, vec![EdgePiece { tag: p.tag, curve: p.curve.restrict(0.5, 1.0) }]);
            groups.insert(i, vec![EdgePiece { tag: p.tag, curve: p.curve.restrict(0.0, 0.5) }]);
        }
        let mut it = groups.into_iter().map(|pieces| PatchEdge { pieces });
        let edges = [it.next().unwrap(), it.next().unwrap(), it.next().unwrap(), it.next().unwrap()];
        Self::from_edges(edges)
    }

    /// Append group `i + 1` (cyclically) to group `i`.
    fn chain(groups: &mut Vec<Vec<EdgePiece>>, i: usize) {
        let next = (i + 1) % groups.len();
        let tail = groups[next].clone();
        groups[i].extend(tail);
        groups.remove(next);
    }

    fn corners(&self) -> [Vec2; 4] {
        [self.edges[0].point(0.0), self.edges[1].point(0.0), self.edges[2].point(0.0), self.edges[3].point(0.0)]
    }

    /// Coons map of the unit square onto the patch.
    pub fn map(&self, s: f64, t: f64) -> Vec2 {
        let [p00, p10, p11, p01] = self.corners();
        let bottom = self.edges[0].point(s);
        let right = self.edges[1].point(t);
        let top = self.edges[2].point(1.0 - s);
        let left = self.edges[3].point(1.0 - t);
        bottom * (1.0 - t) + top * t + left * (1.0 - s) + right * s
            - (p00 * ((1.0 - s) * (1.0 - t)) + p10 * (s * (1.0 - t)) + p01 * ((1.0 - s) * t) + p11 * (s * t))
    }

    /// Partial derivatives `(∂X/∂s, ∂X/∂t)` of the Coons map.
    pub fn jacobian(&self, s: f64, t: f64) -> (Vec2, Vec2) {
        let [p00, p10, p11, p01] = self.corners();
        let bottom = self.edges[0].point(s);
        let right = self.edges[1].point(t);
        let top = self.edges[2].point(1.0 - s);
        let left = self.edges[3].point(1.0 - t);
        let db = self.edges[0].d1(s);
        let dr = self.edges[1].d1(t);
        let dt = -self.edges[2].d1(1.0 - s);
        let dl = -self.edges[3].d1(1.0 - t);
        let xs = db * (1.0 - t) + dt * t - left + right
            - (-p00 * (1.0 - t) + p10 * (1.0 - t) - p01 * t + p11 * t);
        let xt = -bottom + top + dl * (1.0 - s) + dr * s - (-p00 * (1.0 - s) - p10 * s + p01 * (1.0 - s) + p11 * s);
        (xs, xt)
    }

    pub fn det(&self, s: f64, t: f64) -> f64 {
        let (xs, xt) = self.jacobian(s, t);
        cross(&xs, &xt)
    }

    fn rules(&self, n: usize) -> (Vec<(f64, f64)>, Vec<(f64, f64)>) {
        let merge = |a: Vec<f64>, b: Vec<f64>| {
            let mut v: Vec<f64> = a.into_iter().chain(b.into_iter().map(|x| 1.0 - x)).collect();
            v.sort_by(|x, y| x.total_cmp(y));
            v.dedup_by(|x, y| (*x - *y).abs() < 1e-14);
            v
        };
        let sb = merge(self.edges[0].breaks(), self.edges[2].breaks());
        let tb = merge(self.edges[1].breaks(), self.edges[3].breaks());
        (composite(&sb, n), composite(&tb, n))
    }

    /// Quadrature nodes `(point, weight)` of an `n × n` Gauss–Legendre
    /// tensor rule (per smooth cell). Fails if the Jacobian is not positive
    /// at some node.
    pub fn nodes(&self, n: usize) -> Result<Vec<(Vec2, f64)>> {
        let (rs, rt) = self.rules(n);
        let mut out = Vec::with_capacity(rs.len() * rt.len());
        for (s, ws) in &rs {
            for (t, wt) in &rt {
                let j = self.det(*s, *t);
                if !(j > 0.0) {
                    return Err(Error::Geometry(format!("patch Jacobian {j:.3e} ≤ 0 at (s,t)=({s:.4},{t:.4})")));
                }
                out.push((self.map(*s, *t), ws * wt * j));
            }
        }
        Ok(out)
    }

    pub fn integrate<F: Fn(&Vec2) -> f64>(&self, f: F, n: usize) -> Result<f64> {
        Ok(self.nodes(n)?.iter().map(|(x, w)| w * f(x)).sum())
    }

    pub fn area(&self) -> Result<f64> {
        self.integrate(|_| 1.0, 16)
    }

    /// Boundary pieces in counter-clockwise order.
    pub fn pieces(&self) -> impl Iterator<Item = &EdgePiece> {
        self.edges.iter().flat_map(|e| e.pieces.iter())
    }

    /// `∫ f(ξ, ν) dl` over one boundary curve traversed counter-clockwise,
    /// `ν` the outward unit normal.
    pub fn line_integral<F: Fn(&Vec2, &Vec2) -> f64>(curve: &CurveSegment, f: F, n: usize) -> f64 {
        gauss_legendre(n)
            .iter()
            .map(|(t, w)| {
                let d = curve.d1(*t);
                let nu = Vec2::new(d.y, -d.x) / d.norm();
                w * d.norm() * f(&curve.point(*t), &nu)
            })
            .sum()
    }

    /// Boundary integral over the pieces accepted by `select`.
    pub fn boundary_integral<F, S>(&self, f: F, select: S, n: usize) -> f64
    where
        F: Fn(&Vec2, &Vec2) -> f64,
        S: Fn(&EdgePiece) -> bool,
    {
        self.pieces().filter(|p| select(p)).map(|p| Self::line_integral(&p.curve, &f, n)).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{v2, CurveKind};

    fn unit_square() -> QuadPatch {
        let l = |a: Vec2, b: Vec2| CurveSegment::line("e", CurveKind::StraightWall, a, b);
        QuadPatch::new([
            l(v2(0.0, 0.0), v2(1.0, 0.0)),
            l(v2(1.0, 0.0), v2(1.0, 1.0)),
            l(v2(1.0, 1.0), v2(0.0, 1.0)),
            l(v2(0.0, 1.0), v2(0.0, 0.0)),
        ])
        .unwrap()
    }

    #[test]
    fn gauss_rule_integrates_polynomials() {
        let q = gauss_legendre(8);
        let s: f64 = q.iter().map(|(t, w)| w * t.powi(15)).sum();
        assert!((s - 1.0 / 16.0).abs() < 1e-15);
    }

    #[test]
    fn square_patch_is_identity() {
        let p = unit_square();
        let x = p.map(0.3, 0.7);
        assert!((x - v2(0.3, 0.7)).norm() < 1e-15);
        assert!((p.det(0.2, 0.9) - 1.0).abs() < 1e-14);
        assert!((p.area().unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn disk_patch_area_and_divergence() {
        let arc = |a: f64, b: f64| CurveSegment::arc("c", v2(0.0, 0.0), 1.0, a, b);
        let h = std::f64::consts::FRAC_PI_2;
        let p = QuadPatch::new([arc(0.0, h), arc(h, 2.0 * h), arc(2.0 * h, 3.0 * h), arc(3.0 * h, 4.0 * h)]).unwrap();
        assert!((p.area().unwrap() - std::f64::consts::PI).abs() < 1e-12);
        // ∮ ξ·ν dl = 2 |Ω|
        let flux: f64 = p.boundary_integral(|x, nu| x.dot(nu), |_| true, 32);
        assert!((flux - 2.0 * std::f64::consts::PI).abs() < 1e-12);
    }
}
