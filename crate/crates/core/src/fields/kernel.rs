use serde::{Deserialize, Serialize};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use super::GridField2D;
use crate::error::{Error, Result};
use crate::geom::Vec2;

/// Radial profile `g(t)` on `t = |x|/ε < 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum KernelProfile {
    /// `exp(−1/(1 − t²))`.
    Bump,
    /// `(1 − t²)^k`; only `C^{k−1}`.
    Polynomial(u32),
}

impl KernelProfile {
    fn g(&self, t: f64) -> f64 {
        if t >= 1.0 {
            return 0.0;
        }
        let s = 1.0 - t * t;
        match self {
            KernelProfile::Bump => (-1.0 / s).exp(),
            KernelProfile::Polynomial(k) => s.powi(*k as i32),
        }
    }

    fn dg(&self, t: f64) -> f64 {
        if t >= 1.0 {
            return 0.0;
        }
        let s = 1.0 - t * t;
        match self {
            KernelProfile::Bump => (-1.0 / s).exp() * (-2.0 * t / (s * s)),
            KernelProfile::Polynomial(k) => -2.0 * (*k as f64) * t * s.powi(*k as i32 - 1),
        }
    }
}

/// `η_ε(x) = N ε⁻² g(|x|/ε)` sampled on the `(2R+1)²` node stencil of a grid
/// with spacing `h`, with `N` chosen so that the discrete integral is one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MollifierKernel {
    pub epsilon: f64,
    pub h: f64,
    pub radius: usize,
    pub profile: KernelProfile,
    pub normalization: f64,
    /// Stencil entries `(di, dj, η_ε h², ∂₁η_ε h², ∂₂η_ε h²)`, restricted to
    /// offsets strictly inside the support.
    pub stencil: Vec<(isize, isize, f64, f64, f64)>,
}

pub fn make_mollifier(epsilon: f64, h: f64, profile: KernelProfile) -> Result<MollifierKernel> {
    if !(epsilon > 0.0) || !(h > 0.0) {
        return Err(Error::InvalidParameter(format!("kernel needs ε > 0 and h > 0 (got {epsilon}, {h})")));
    }
    if epsilon < h {
        return Err(Error::InvalidParameter(format!("kernel radius {epsilon} is below the grid spacing {h}")));
    }
    let r = (epsilon / h).ceil() as isize;
    let mut raw = Vec::new();
    for dj in -r..=r {
        for di in -r..=r {
            let z = Vec2::new(di as f64 * h, dj as f64 * h);
            let t = z.norm() / epsilon;
            if t < 1.0 {
                raw.push((di, dj, z, t));
            }
        }
    }
    let sum: f64 = raw.iter().map(|e| profile.g(e.3)).sum::<f64>() * h * h / (epsilon * epsilon);
    let nrm = 1.0 / sum;
    let scale = nrm * h * h / (epsilon * epsilon);
    let stencil = raw
        .iter()
        .map(|&(di, dj, z, t)| {
            let w = scale * profile.g(t);
            let (dx, dy) = if t > 0.0 {
                let d = scale * profile.dg(t) / (epsilon * z.norm());
                (d * z.x, d * z.y)
            } else {
                (0.0, 0.0)
            };
            (di, dj, w, dx, dy)
        })
        .collect();
    Ok(MollifierKernel { epsilon, h, radius: r as usize, profile, normalization: nrm, stencil })
}

impl MollifierKernel {
    pub fn eta(&self, z: &Vec2) -> f64 {
        self.normalization * self.profile.g(z.norm() / self.epsilon) / (self.epsilon * self.epsilon)
    }

    pub fn grad_eta(&self, z: &Vec2) -> Vec2 {
        let r = z.norm();
        if r == 0.0 || r >= self.epsilon {
            return Vec2::zeros();
        }
        let e = self.epsilon;
        z * (self.normalization * self.profile.dg(r / e) / (e * e * e * r))
    }

    /// Discrete `∫ η_ε`.
    pub fn mass(&self) -> f64 {
        self.stencil.iter().map(|s| s.2).sum()
    }

    /// Discrete first moment `∫ x η_ε`.
    pub fn first_moment(&self) -> Vec2 {
        let h = self.h;
        self.stencil.iter().fold(Vec2::zeros(), |a, s| a + Vec2::new(s.0 as f64 * h, s.1 as f64 * h) * s.2)
    }

    /// Constant `C` of the commutator bound
    /// `‖A_ε‖_{L¹(Ω′)} ≤ C ‖∇b‖_{L²} ‖u‖_{L²}` along `axis`, assembled from the
    /// kernel's moments; it is invariant under rescaling ε.
    pub fn commutator_constant(&self, axis: usize) -> f64 {
        let h = self.h;
        let (mut m1_grad, mut grad, mut m1) = (0.0, 0.0, 0.0);
        for s in &self.stencil {
            let r = Vec2::new(s.0 as f64 * h, s.1 as f64 * h).norm();
            let d = if axis == 0 { s.3 } else { s.4 }.abs();
            m1_grad += r * d;
            grad += d;
            m1 += r * s.2;
        }
        3.0 + m1_grad + m1 * grad
    }
}

/// Convolution with stencil weights `pick(entry)`; output nodes whose
/// stencil meets an unset or untrusted node are unset.
pub(crate) fn convolve<F>(f: &GridField2D, k: &MollifierKernel, pick: F) -> Result<GridField2D>
where
    F: Fn(&(isize, isize, f64, f64, f64)) -> f64 + Sync,
{
    if (k.h - f.h).abs() > 1e-12 * f.h {
        return Err(Error::InvalidParameter(format!("kernel spacing {} differs from grid spacing {}", k.h, f.h)));
    }
    let margin = f.valid_margin + k.radius;
    if 2 * margin >= f.nx.min(f.ny) {
        return Err(Error::Precondition(format!(
            "kernel radius ε = {} leaves no valid nodes on a {}×{} grid with margin {}",
            k.epsilon, f.nx, f.ny, f.valid_margin
        )));
    }
    let (nx, ny) = (f.nx, f.ny);
    let row = |j: usize| -> Vec<(f64, bool)> {
        (0..nx)
            .map(|i| {
                if i < margin || j < margin || i + margin >= nx || j + margin >= ny {
                    return (0.0, false);
                }
                let mut acc = 0.0;
                for e in &k.stencil {
                    let (si, sj) = ((i as isize - e.0) as usize, (j as isize - e.1) as usize);
                    let s = sj * nx + si;
                    if !f.set[s] {
                        return (0.0, false);
                    }
                    acc += f.values[s] * pick(e);
                }
                (acc, true)
            })
            .collect()
    };
    #[cfg(feature = "parallel")]
    let rows: Vec<Vec<(f64, bool)>> = (0..ny).into_par_iter().map(row).collect();
    #[cfg(not(feature = "parallel"))]
    let rows: Vec<Vec<(f64, bool)>> = (0..ny).map(row).collect();
    let mut out = f.clone();
    for (j, r) in rows.into_iter().enumerate() {
        for (i, (v, ok)) in r.into_iter().enumerate() {
            let idx = j * nx + i;
            out.values[idx] = v;
            out.set[idx] = ok;
        }
    }
    out.valid_margin = margin;
    Ok(out)
}

/// `f_ε = f * η_ε`.
pub fn mollify(f: &GridField2D, k: &MollifierKernel) -> Result<GridField2D> {
    convolve(f, k, |e| e.2)
}

/// `∂ᵢ f_ε = f * ∂ᵢη_ε`.
pub(crate) fn mollify_derivative(f: &GridField2D, k: &MollifierKernel, axis: usize) -> Result<GridField2D> {
    if axis > 1 {
        return Err(Error::InvalidParameter(format!("axis {axis} is not 0 or 1")));
    }
    convolve(f, k, move |e| if axis == 0 { e.3 } else { e.4 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{lp_norm, Norm};

    #[test]
    fn kernel_is_normalized_radial_and_compact() {
        let k = make_mollifier(0.1, 0.01, KernelProfile::Bump).unwrap();
        assert!((k.mass() - 1.0).abs() < 1e-12);
        assert!(k.first_moment().norm() < 1e-12);
        assert_eq!(k.eta(&Vec2::new(0.1, 0.0)), 0.0);
        assert_eq!(k.eta(&Vec2::new(0.08, 0.07)), 0.0);
        let d: f64 = k.stencil.iter().map(|s| s.3).sum();
        assert!(d.abs() < 1e-9);
    }

    #[test]
    fn gradient_matches_finite_difference() {
        let k = make_mollifier(1.0, 0.1, KernelProfile::Bump).unwrap();
        let z = Vec2::new(0.3, -0.4);
        let e = 1e-6;
        let fd = Vec2::new(
            (k.eta(&(z + Vec2::new(e, 0.0))) - k.eta(&(z - Vec2::new(e, 0.0)))) / (2.0 * e),
            (k.eta(&(z + Vec2::new(0.0, e))) - k.eta(&(z - Vec2::new(0.0, e)))) / (2.0 * e),
        );
        assert!((fd - k.grad_eta(&z)).norm() < 1e-8);
    }

    #[test]
    fn mollify_preserves_constants_and_linears() {
        let n = 64;
        let k = make_mollifier(1.0 / 8.0, 1.0 / n as f64, KernelProfile::Bump).unwrap();
        let c = GridField2D::unit_square(n, |_| 2.5).unwrap();
        let m = mollify(&c, &k).unwrap();
        let d = m.sub(&c).unwrap();
        assert!(lp_norm(&d, Norm::Inf, None).unwrap() < 1e-12);
        assert_eq!(m.valid_margin, k.radius);
        let l = GridField2D::unit_square(n, |p| 3.0 * p.x - 2.0 * p.y + 1.0).unwrap();
        let d = mollify(&l, &k).unwrap().sub(&l).unwrap();
        assert!(lp_norm(&d, Norm::Inf, None).unwrap() < 1e-10);
    }

    #[test]
    fn too_large_radius_is_rejected() {
        let k = make_mollifier(0.5, 1.0 / 16.0, KernelProfile::Bump).unwrap();
        let f = GridField2D::unit_square(16, |_| 1.0).unwrap();
        assert!(mollify(&f, &k).is_err());
    }
}
