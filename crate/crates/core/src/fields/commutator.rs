use std::io::Write;

use serde::{Deserialize, Serialize};

use super::kernel::{mollify, mollify_derivative};
use super::{lp_norm, GridField2D, MollifierKernel, Norm, Rect};
use crate::error::{Error, Result};

/// `A_ε[u, b] = ∂ᵢ(bu)_ε − u_ε ∂ᵢb_ε − b_ε ∂ᵢu_ε`, every derivative taken
/// through the sampled `∂ᵢη_ε`.
pub fn commutator(b: &GridField2D, u: &GridField2D, axis: usize, k: &MollifierKernel) -> Result<GridField2D> {
    let bu = b.mul(u)?;
    let d_bu = mollify_derivative(&bu, k, axis)?;
    let (b_e, u_e) = (mollify(b, k)?, mollify(u, k)?);
    let (db_e, du_e) = (mollify_derivative(b, k, axis)?, mollify_derivative(u, k, axis)?);
    d_bu.sub(&u_e.mul(&db_e)?)?.sub(&b_e.mul(&du_e)?)
}

/// The four terms
///
/// * `I₁ = ∂ᵢ(bu)_ε − b ∂ᵢu_ε`
/// * `I₂ = −(∂ᵢb) u_ε`
/// * `I₃ = u_ε ∂ᵢ(b − b_ε)`
/// * `I₄ = (b − b_ε) ∂ᵢu_ε`
///
/// whose sum is [`commutator`]. `∂ᵢb` is a central difference.
pub fn commutator_decomposition(
    b: &GridField2D,
    u: &GridField2D,
    axis: usize,
    k: &MollifierKernel,
) -> Result<[GridField2D; 4]> {
    let bu = b.mul(u)?;
    let d_bu = mollify_derivative(&bu, k, axis)?;
    let (b_e, u_e) = (mollify(b, k)?, mollify(u, k)?);
    let (db_e, du_e) = (mollify_derivative(b, k, axis)?, mollify_derivative(u, k, axis)?);
    let bx = b.central_diff(axis);
    let i1 = d_bu.sub(&b.mul(&du_e)?)?;
    let i2 = bx.mul(&u_e)?.map(|x| -x);
    let i3 = u_e.mul(&bx.sub(&db_e)?)?;
    let i4 = b.sub(&b_e)?.mul(&du_e)?;
    Ok([i1, i2, i3, i4])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub epsilon: f64,
    pub l1_norm: f64,
    /// Ratio to the previous row; `None` on the first.
    pub ratio_vs_previous: Option<f64>,
}

/// `‖A_ε‖_{L¹(sub)}` over an ε schedule. `fields(ε)` returns `(b, u)` on a
/// grid resolving ε and `kernel(ε, h)` the matching mollifier.
pub fn convergence_table<F, K>(schedule: &[f64], axis: usize, sub: &Rect, fields: F, kernel: K) -> Result<Vec<ConvergenceRow>>
where
    F: Fn(f64) -> Result<(GridField2D, GridField2D)>,
    K: Fn(f64, f64) -> Result<MollifierKernel>,
{
    if schedule.is_empty() {
        return Err(Error::InvalidParameter("empty ε schedule".into()));
    }
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(schedule.len());
    for &eps in schedule {
        let (b, u) = fields(eps)?;
        let k = kernel(eps, b.h)?;
        let a = commutator(&b, &u, axis, &k)?;
        let n = lp_norm(&a, Norm::L(1.0), Some(sub))?;
        let ratio = rows.last().map(|r| n / r.l1_norm);
        rows.push(ConvergenceRow { epsilon: eps, l1_norm: n, ratio_vs_previous: ratio });
    }
    Ok(rows)
}

pub fn write_convergence_csv<W: Write>(rows: &[ConvergenceRow], out: W) -> Result<()> {
    let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["epsilon", "l1_norm", "ratio_vs_previous"]).map_err(io)?;
    for r in rows {
        w.write_record([
            format!("{:.12e}", r.epsilon),
            format!("{:.12e}", r.l1_norm),
            r.ratio_vs_previous.map(|x| format!("{x:.12e}")).unwrap_or_default(),
        ])
        .map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{make_mollifier, KernelProfile};

    fn pair(n: usize) -> (GridField2D, GridField2D) {
        let b = GridField2D::unit_square(n, |p| (3.0 * p.x).sin() * (2.0 * p.y).cos() + p.x * p.y).unwrap();
        let u = GridField2D::unit_square(n, |p| (p.x - 0.3).powi(2) + (5.0 * p.y).sin()).unwrap();
        (b, u)
    }

    #[test]
    fn constant_factor_gives_zero() {
        let n = 64;
        let k = make_mollifier(0.125, 1.0 / n as f64, KernelProfile::Bump).unwrap();
        let (_, u) = pair(n);
        let b = GridField2D::unit_square(n, |_| 1.7).unwrap();
        for axis in 0..2 {
            let a = commutator(&b, &u, axis, &k).unwrap();
            assert!(lp_norm(&a, Norm::Inf, None).unwrap() < 1e-12);
            let a = commutator(&u, &b, axis, &k).unwrap();
            assert!(lp_norm(&a, Norm::Inf, None).unwrap() < 1e-12);
        }
    }

    #[test]
    fn decomposition_sums_to_commutator() {
        let n = 64;
        let k = make_mollifier(0.125, 1.0 / n as f64, KernelProfile::Bump).unwrap();
        let (b, u) = pair(n);
        let a = commutator(&b, &u, 1, &k).unwrap();
        let [i1, i2, i3, i4] = commutator_decomposition(&b, &u, 1, &k).unwrap();
        let s = i1.add(&i2).unwrap().add(&i3).unwrap().add(&i4).unwrap();
        let d = s.sub(&a).unwrap();
        assert!(lp_norm(&d, Norm::Inf, None).unwrap() < 1e-10);
    }
}
