use std::io::Write;

use serde::{Deserialize, Serialize};

use super::field::AnalyticField;
use super::quad::{gauss_legendre, EdgePiece, QuadPatch};
use super::renorm::{RenormPair, TruncatedQuadratic};
use crate::config::build::SegmentRef;
use crate::error::{Error, Result};
use crate::geom::Vec2;

/// Smooth test function `ζ` with its gradient.
pub trait TestFunction {
    fn value(&self, xi: &Vec2) -> f64;
    fn grad(&self, xi: &Vec2) -> Vec2;
}

/// `ζ ≡ 1`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Unit;

impl TestFunction for Unit {
    fn value(&self, _: &Vec2) -> f64 {
        1.0
    }

    fn grad(&self, _: &Vec2) -> Vec2 {
        Vec2::zeros()
    }
}

/// Test function from a value closure and a gradient closure.
pub struct FnTest<F, G>(pub F, pub G);

impl<F, G> TestFunction for FnTest<F, G>
where
    F: Fn(&Vec2) -> f64,
    G: Fn(&Vec2) -> Vec2,
{
    fn value(&self, xi: &Vec2) -> f64 {
        (self.0)(xi)
    }

    fn grad(&self, xi: &Vec2) -> Vec2 {
        (self.1)(xi)
    }
}

/// Terms of the renormalized weak identity on a patch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeakIdentityTerms {
    /// `∫ (ρ f(X) v·∇ζ + ρ g(X) ζ)`.
    pub volume: f64,
    /// `∫ (f′(X) ρ (v·∇X − X) + f(X)(div(ρv) + 2ρ)) ζ`; zero for solutions.
    pub correction: f64,
    /// `∮ ρ f(X)(v·ν) ζ` over interior curves.
    pub boundary_int: f64,
    /// The same over exterior segments and untagged edges.
    pub boundary_ext: f64,
}

impl WeakIdentityTerms {
    /// Divergence-theorem defect `volume + correction − boundary`, which
    /// vanishes up to quadrature error for every smooth field.
    pub fn defect(&self) -> f64 {
        self.volume + self.correction - self.boundary_int - self.boundary_ext
    }
}

fn is_interior(p: &EdgePiece) -> bool {
    matches!(p.tag, Some(SegmentRef::Int(_)))
}

/// Weak identity for `div(ρ f(X) v ζ)` on `patch`, with `order` Gauss nodes
/// per direction and per boundary piece.
pub fn weak_identity_residual<F, Z>(
    patch: &QuadPatch,
    field: &F,
    pair: &RenormPair,
    zeta: &Z,
    order: usize,
) -> Result<WeakIdentityTerms>
where
    F: AnalyticField + ?Sized,
    Z: TestFunction + ?Sized,
{
    if order == 0 {
        return Err(Error::InvalidParameter("quadrature order must be at least one".into()));
    }
    let (mut volume, mut correction) = (0.0, 0.0);
    for (xi, w) in patch.nodes(order)? {
        let (rho, v, grho, gv) = (field.rho(&xi), field.v(&xi), field.grad_rho(&xi), field.grad_v(&xi));
        let x = field.omega(&xi) / rho;
        let (f, fp, g) = (pair.f(x), pair.fprime(x), pair.g(x));
        let z = zeta.value(&xi);
        volume += w * (rho * f * v.dot(&zeta.grad(&xi)) + rho * g * z);
        let div_mass = grho.dot(&v) + rho * (gv[(0, 0)] + gv[(1, 1)]) + 2.0 * rho;
        correction += w * (fp * rho * (v.dot(&field.grad_ratio(&xi)) - x) + f * div_mass) * z;
    }
    let flux = |xi: &Vec2, nu: &Vec2| {
        let rho = field.rho(xi);
        rho * pair.f(field.omega(xi) / rho) * field.v(xi).dot(nu) * zeta.value(xi)
    };
    let boundary_int = patch.boundary_integral(flux, is_interior, order);
    let boundary_ext = patch.boundary_integral(flux, |p| !is_interior(p), order);
    Ok(WeakIdentityTerms { volume, correction, boundary_int, boundary_ext })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RefinementRow {
    pub order: usize,
    pub defect: f64,
    pub terms: WeakIdentityTerms,
}

/// Defect of [`weak_identity_residual`] over a schedule of node counts.
pub fn weak_identity_refinement<F, Z>(
    patch: &QuadPatch,
    field: &F,
    pair: &RenormPair,
    zeta: &Z,
    orders: &[usize],
) -> Result<Vec<RefinementRow>>
where
    F: AnalyticField + ?Sized,
    Z: TestFunction + ?Sized,
{
    orders
        .iter()
        .map(|&n| {
            let terms = weak_identity_residual(patch, field, pair, zeta, n)?;
            Ok(RefinementRow { order: n, defect: terms.defect(), terms })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationRow {
    pub m: f64,
    /// `∫_Ω ρ g_M(X)`.
    pub volume: f64,
    /// `∮_{Γint} ρ f_M(X)(v·ν)`.
    pub boundary: f64,
    /// `∮_{Γint} ρ X² (v·ν)`.
    pub boundary_quadratic: f64,
    /// `max |X|` over the volume nodes.
    pub sup_interior: f64,
    /// `max |X|` over the interior-curve nodes.
    pub sup_boundary: f64,
}

/// Volume and boundary terms of the truncated family `f_M` for each `M`.
/// Suprema are taken over the quadrature nodes, so the statements "volume
/// is zero for `M ≥ sup_interior`" and "boundary equals the quadratic value
/// for `M ≥ sup_boundary`" hold exactly for the computed sums.
pub fn truncation_limit_study<F>(field: &F, patch: &QuadPatch, m_schedule: &[f64], order: usize) -> Result<Vec<TruncationRow>>
where
    F: AnalyticField + ?Sized,
{
    let levels: Vec<TruncatedQuadratic> = m_schedule.iter().map(|&m| TruncatedQuadratic::new(m)).collect::<Result<_>>()?;
    let nodes = patch.nodes(order)?;
    let vol: Vec<(f64, f64, f64)> = nodes
        .iter()
        .map(|(xi, w)| {
            let rho = field.rho(xi);
            (rho, field.omega(xi) / rho, *w)
        })
        .collect();
    let sup_interior = vol.iter().fold(0.0f64, |a, s| a.max(s.1.abs()));
    let rule = gauss_legendre(order);
    let sup_boundary = patch
        .pieces()
        .filter(|p| is_interior(p))
        .flat_map(|p| rule.iter().map(move |(t, _)| p.curve.point(*t)))
        .fold(0.0f64, |a, xi| a.max(field.ratio(&xi).abs()));
    let bflux = |f: &dyn Fn(f64) -> f64| {
        patch.boundary_integral(
            |xi, nu| {
                let rho = field.rho(xi);
                rho * f(field.omega(xi) / rho) * field.v(xi).dot(nu)
            },
            is_interior,
            order,
        )
    };
    let boundary_quadratic = bflux(&|x| x * x);
    Ok(levels
        .iter()
        .map(|t| TruncationRow {
            m: t.m,
            volume: vol.iter().map(|(rho, x, w)| w * rho * t.g(*x)).sum(),
            boundary: bflux(&|x| t.f(x)),
            boundary_quadratic,
            sup_interior,
            sup_boundary,
        })
        .collect())
}

fn csv_io(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

pub fn write_refinement_csv<W: Write>(rows: &[RefinementRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["nodes_per_direction", "defect", "volume", "correction", "boundary_int", "boundary_ext"]).map_err(csv_io)?;
    for r in rows {
        let t = &r.terms;
        w.write_record([
            r.order.to_string(),
            format!("{:.12e}", r.defect),
            format!("{:.12e}", t.volume),
            format!("{:.12e}", t.correction),
            format!("{:.12e}", t.boundary_int),
            format!("{:.12e}", t.boundary_ext),
        ])
        .map_err(csv_io)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_truncation_csv<W: Write>(rows: &[TruncationRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["M", "volume_rho_gM", "boundary_rho_fM_vnu", "boundary_rho_X2_vnu", "sup_X_interior", "sup_X_boundary"])
        .map_err(csv_io)?;
    for r in rows {
        w.write_record([r.m, r.volume, r.boundary, r.boundary_quadratic, r.sup_interior, r.sup_boundary].map(|x| format!("{x:.12e}")))
            .map_err(csv_io)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostic::field::{ConstantField, Mode, TrigField};
    use crate::diagnostic::renorm::renorm_pair_truncated;
    use crate::gas::ConstantState;
    use crate::geom::{v2, CurveSegment};

    fn disk() -> QuadPatch {
        let arc = |a: f64, b: f64| CurveSegment::arc("c", v2(0.2, -0.1), 0.8, a, b);
        let h = std::f64::consts::FRAC_PI_2;
        QuadPatch::new([arc(0.0, h), arc(h, 2.0 * h), arc(2.0 * h, 3.0 * h), arc(3.0 * h, 4.0 * h)]).unwrap()
    }

    #[test]
    fn constant_state_identity_is_exactly_zero() {
        let f = ConstantField { state: ConstantState::new(1.3, v2(0.4, 0.2)).unwrap() };
        let t = weak_identity_residual(&disk(), &f, &renorm_pair_truncated(2.0).unwrap(), &Unit, 8).unwrap();
        assert_eq!(t.defect(), 0.0);
        assert_eq!(t.volume, 0.0);
    }

    #[test]
    fn defect_shrinks_under_refinement() {
        let f = TrigField::new(
            1.5,
            vec![Mode::new(0.2, v2(1.0, 0.5), 0.0)],
            v2(0.1, 0.0),
            [vec![Mode::new(0.3, v2(0.0, 1.5), 0.2)], vec![Mode::new(0.2, v2(1.1, 0.0), 0.0)]],
        )
        .unwrap();
        let rows = weak_identity_refinement(&disk(), &f, &RenormPair::quadratic(), &Unit, &[4, 8, 16]).unwrap();
        assert!(rows[2].defect.abs() < rows[0].defect.abs());
        assert!(rows[2].defect.abs() < 1e-10);
    }

    #[test]
    fn large_levels_remove_the_volume_term() {
        let f = TrigField::new(1.5, vec![], v2(0.0, 0.0), [vec![Mode::new(3.0, v2(0.0, 2.0), 0.0)], vec![]]).unwrap();
        let rows = truncation_limit_study(&f, &disk(), &[1.5, 10.0], 8).unwrap();
        assert!(rows[0].sup_interior > 1.5 && rows[0].volume != 0.0);
        assert_eq!(rows[1].volume, 0.0);
        assert_eq!(rows[1].boundary, rows[1].boundary_quadratic);
    }
}
