//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits with
//! a failure status if a criterion fails that is not listed in
//! `UNATTAINABLE`.

use std::f64::consts::{PI, TAU};
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use shockreg::config::build::{build_configuration, ConfigKind, Configuration, ProblemData};
use shockreg::config::validate::{validate_default, Thresholds};
use shockreg::config::{detachment_angle, incident_shock_setup, solve_state2, sonic_angle, CornerRoots, WedgeGeometry};
use shockreg::diagnostic::{
    contradiction_functional, renorm_pair_truncated, shock_functional, truncation_limit_study, weak_identity_refinement,
    ConstantField, Mode, RenormPair, TrigField, TruncatedQuadratic, Unit,
};
use shockreg::fields::{
    commutator, commutator_decomposition, convergence_table, lp_norm, make_mollifier, mollify, reflect_extend, GridField2D,
    KernelProfile, Norm, Parity, Rect, ReflectionSpec,
};
use shockreg::gas::ConstantState;
use shockreg::geom::v2;
use shockreg::jump::{downstream_state, entropy_admissible, residual_norm, rh_residual, OrientedInterface};
use shockreg::vortcalc::{
    gradient_residuals, shock_vorticity_closed_form, shock_vorticity_system, solve_shock_system, system_determinant,
    velocity_gradient_from_state, ShockPointData,
};
use shockreg::{GasParams, PointState, Vec2};

/// Criteria whose literal statement cannot hold; each has a corrected
/// companion line that must pass.
const UNATTAINABLE: [u32; 1] = [4];

const EOS_TOL: f64 = 1e-8;
const RH_TOL: f64 = 1e-10;
const TANGENTIAL_TOL: f64 = 1e-14;
const SCAN_TOL: f64 = 1e-8;
const SONIC_TOL: f64 = 1e-6;
const DET_TOL: f64 = 1e-10;
const OMEGA_TOL: f64 = 1e-10;
const GRADIENT_TOL: f64 = 1e-12;
const ANGLE_STEP: f64 = 1e-3;
const COMMUTATOR_ZERO_TOL: f64 = 1e-12;
const DECOMPOSITION_TOL: f64 = 1e-10;
const FINAL_TO_INITIAL: f64 = 0.1;
const WALL_TOL: f64 = 1e-12;
const DEFECT_TOL: f64 = 1e-10;
const HOMOGENEITY_TOL: f64 = 1e-10;

struct Line {
    id: String,
    /// `None` for informational lines.
    pass: Option<bool>,
    text: String,
}

fn line(id: impl ToString, pass: bool, text: String) -> Line {
    Line { id: id.to_string(), pass: Some(pass), text }
}

fn note(id: impl ToString, text: String) -> Line {
    Line { id: id.to_string(), pass: None, text }
}

fn air() -> GasParams {
    GasParams::new(1.4).unwrap()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn c1_eos() -> Vec<Line> {
    let mut r = rng(1);
    let (mut worst_c, mut worst_e) = (0.0f64, 0.0f64);
    for _ in 0..1000 {
        let gamma = r.random_range(1.01..3.0);
        let rho = r.random_range(0.05..20.0);
        let g = GasParams::new(gamma).unwrap();
        let c2 = g.sound_speed(rho).powi(2);
        worst_c = worst_c.max((c2 - ((gamma - 1.0) * g.enthalpy(rho) + 1.0)).abs() / c2);
        let d = 1e-5 * rho;
        let de = (g.internal_energy(rho + d) - g.internal_energy(rho - d)) / (2.0 * d);
        worst_e = worst_e.max((rho * rho * de - g.pressure(rho)).abs() / g.pressure(rho));
    }
    vec![line(
        1,
        worst_c <= EOS_TOL && worst_e <= EOS_TOL,
        format!("EOS identities over 1000 samples: c² vs (γ−1)h+1 {worst_c:.1e}, p vs ρ²e′ {worst_e:.1e} (tol {EOS_TOL:.0e})"),
    )]
}

fn scan_root(rho_m: f64, vn: f64, g: &GasParams) -> f64 {
    let m2 = (rho_m * vn).powi(2);
    let phi = |r: f64| m2 / r + g.pressure(r) - m2 / rho_m - g.pressure(rho_m);
    let (lo, hi, n) = (rho_m * (1.0 + 1e-9), 1e3 * rho_m, 200_000);
    let at = |k: usize| lo * (hi / lo).powf(k as f64 / n as f64);
    let k = (0..n).find(|&k| phi(at(k)) * phi(at(k + 1)) <= 0.0).expect("no sign change in the scan");
    let (mut a, mut b) = (at(k), at(k + 1));
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if phi(a) * phi(m) <= 0.0 {
            b = m
        } else {
            a = m
        }
    }
    0.5 * (a + b)
}

fn c2_jump() -> Vec<Line> {
    let mut r = rng(2);
    let (mut rh, mut tang, mut scan) = (0.0f64, 0.0f64, 0.0f64);
    let mut entropy_fail = 0;
    for k in 0..1000 {
        let g = GasParams::new(r.random_range(1.1..3.0)).unwrap();
        let rho = r.random_range(0.2..5.0);
        let iface = OrientedInterface::from_angle(Vec2::zeros(), r.random_range(-PI..PI));
        let vn = g.sound_speed(rho) * r.random_range(1.01..6.0);
        let vt = r.random_range(-3.0..3.0);
        let up = PointState { rho, v: iface.normal * vn + iface.tangent * vt };
        let dn = downstream_state(&up, &iface, &g).unwrap();
        let scale = rho * vn * vn + g.pressure(rho) + rho * vn * (1.0 + vt.abs());
        rh = rh.max(residual_norm(&rh_residual(&up, &dn, &iface, &g)) / scale);
        tang = tang.max((dn.v.dot(&iface.tangent) - up.v.dot(&iface.tangent)).abs() / (1.0 + vt.abs()));
        if !entropy_admissible(&up, &dn, &iface, &g).map(|e| e.admissible).unwrap_or(false) {
            entropy_fail += 1;
        }
        if k % 20 == 0 {
            scan = scan.max((scan_root(rho, vn, &g) - dn.rho).abs() / dn.rho);
        }
    }
    vec![line(
        2,
        rh <= RH_TOL && tang <= TANGENTIAL_TOL && entropy_fail == 0 && scan <= SCAN_TOL,
        format!(
            "1000 random shocks: relative R-H residual {rh:.1e} (tol {RH_TOL:.0e}), v·τ change {tang:.1e} (tol {TANGENTIAL_TOL:.0e}), \
             entropy failures {entropy_fail}, scan oracle gap {scan:.1e} on 50 (tol {SCAN_TOL:.0e})"
        ),
    )]
}

fn c3_sonic() -> Vec<Line> {
    let mut worst = 0.0f64;
    for (gamma, rho) in [(1.4, 1.0), (1.4, 0.3), (5.0 / 3.0, 2.5), (3.0, 1.7)] {
        let g = GasParams::new(gamma).unwrap();
        let iface = OrientedInterface::from_angle(Vec2::zeros(), 0.4);
        let up = PointState { rho, v: iface.normal * g.sound_speed(rho) + iface.tangent * 0.7 };
        let dn = downstream_state(&up, &iface, &g).unwrap();
        worst = worst.max((dn.rho - rho).abs() / rho);
    }
    vec![line(3, worst <= SONIC_TOL, format!("sonic inflow gives relative jump strength {worst:.1e} (tol {SONIC_TOL:.0e})"))]
}

/// Shock points built from random upstream data through the jump relations.
fn shock_samples(seed: u64, n: usize) -> Vec<ShockPointData> {
    let g = air();
    let mut r = rng(seed);
    (0..n)
        .map(|_| {
            let rho1 = r.random_range(0.5..3.0);
            let w = v2(r.random_range(-2.0..2.0), -g.sound_speed(rho1) * r.random_range(1.05..4.0));
            ShockPointData::from_upstream(rho1, w, r.random_range(-3.0..3.0), &g).unwrap()
        })
        .collect()
}

fn c4_determinant() -> Vec<Line> {
    let (mut literal, mut corrected, mut reported) = (0.0f64, 0.0f64, 0.0f64);
    for d in shock_samples(4, 10_000) {
        let (m, _) = shock_vorticity_system(&d);
        let det = m.determinant();
        let (v2, q2, c2) = (d.v.y, d.v.norm_squared(), d.c * d.c);
        let stated = d.rho * v2 * (c2 - v2 * v2).powi(2) * q2 * q2;
        let fixed = d.rho * v2 * v2 * (c2 - v2 * v2).powi(2) * q2 * q2;
        literal = literal.max((det - stated).abs() / det.abs());
        corrected = corrected.max((det - fixed).abs() / det.abs());
        reported = reported.max((system_determinant(&d) - fixed).abs() / fixed.abs());
    }
    vec![
        line(
            4,
            literal <= DET_TOL,
            format!("det vs ρv₂(c²−v₂²)²|v|⁴ over 10⁴ shock points: relative error {literal:.2e} (tol {DET_TOL:.0e})"),
        ),
        line(
            "4c",
            corrected <= DET_TOL && reported <= DET_TOL,
            format!("det vs ρv₂²(c²−v₂²)²|v|⁴: relative error {corrected:.1e}, library formula {reported:.1e} (tol {DET_TOL:.0e})"),
        ),
    ]
}

fn c5_closed_form() -> Vec<Line> {
    let (mut worst, mut literal) = (0.0f64, 0.0f64);
    for d in shock_samples(5, 10_000) {
        let direct = solve_shock_system(&d).unwrap()[2];
        let closed = shock_vorticity_closed_form(&d).unwrap();
        let scale = direct.abs().max(closed.abs()).max(1e-300);
        worst = worst.max((closed - direct).abs() / scale);
        let stated = d.v.x * ((d.rho - d.rho1) * d.v.y.powi(2) + (d.p - d.p1)) / (d.rho * d.v.y) * d.fs2;
        literal = literal.max((stated - direct).abs() / scale);
    }
    let g = air();
    let flat = ShockPointData::from_upstream(1.2, v2(0.8, -2.0), 0.0, &g).unwrap();
    let head_on = ShockPointData::from_upstream(1.2, v2(0.0, -2.0), 1.3, &g).unwrap();
    let zeros = shock_vorticity_closed_form(&flat).unwrap() == 0.0 && shock_vorticity_closed_form(&head_on).unwrap() == 0.0;
    vec![
        line(
            5,
            worst <= OMEGA_TOL && zeros,
            format!(
                "closed-form ω vs 3×3 solve over 10⁴ shock points: relative gap {worst:.1e} (tol {OMEGA_TOL:.0e}); \
                 ω = 0 for f″ = 0 and v₁ = 0: {zeros}"
            ),
        ),
        note(
            "5n",
            format!("the form v₁((ρ−ρ₁)v₂² + (p−p₁))f″/(ρv₂) differs from the solve by up to {literal:.1e} relative"),
        ),
    ]
}

fn c6_gradient() -> Vec<Line> {
    let g = air();
    let mut r = rng(6);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let rho = r.random_range(0.2..4.0);
        let v = v2(r.random_range(-3.0..3.0), r.random_range(-3.0..3.0));
        if v.norm() < 0.1 {
            continue;
        }
        let grho = v2(r.random_range(-2.0..2.0), r.random_range(-2.0..2.0));
        let omega = r.random_range(-3.0..3.0);
        let grad = velocity_gradient_from_state(rho, &v, &grho, omega, &g).unwrap();
        // residuals relative to the size of the terms they balance
        let scale = 1.0 + grad.abs().max() * (1.0 + v.norm()) + rho + grho.norm() * (1.0 + g.sound_speed(rho).powi(2) / rho);
        for res in gradient_residuals(rho, &v, &grho, omega, &grad, &g) {
            worst = worst.max(res.abs() / scale);
        }
    }
    vec![line(
        6,
        worst <= GRADIENT_TOL,
        format!("gradient reconstruction residuals over 10⁴ inputs: {worst:.1e} relative (tol {GRADIENT_TOL:.0e})"),
    )]
}

fn c7_angles() -> Vec<Line> {
    let g = air();
    let td = detachment_angle(1.0, 2.0, &g).unwrap();
    let ts = sonic_angle(1.0, 2.0, &g).unwrap();
    let above = match solve_state2(1.0, 2.0, &g, td + ANGLE_STEP).unwrap() {
        CornerRoots::Two { weak, strong } => weak.state.rho < strong.state.rho && weak.state.rho > 2.0,
        CornerRoots::Detached => false,
    };
    let below = matches!(solve_state2(1.0, 2.0, &g, td - ANGLE_STEP).unwrap(), CornerRoots::Detached);
    let excess = |t: f64| {
        let w = *solve_state2(1.0, 2.0, &g, t).unwrap().weak().unwrap();
        w.mach_at_corner(&g) - 1.0
    };
    let flips = ts.crossing && excess(ts.angle - ANGLE_STEP) * excess(ts.angle + ANGLE_STEP) < 0.0;
    vec![line(
        7,
        above && below && flips,
        format!(
            "θd = {:.6}°, θs = {:.6}°: roots at θd+1e−3 ordered {above}, none at θd−1e−3 {below}, sonic sign change {flips}",
            td.to_degrees(),
            ts.angle.to_degrees()
        ),
    )]
}

fn sym(t: f64) -> ProblemData {
    ProblemData::Reflection { rho0: 1.0, rho1: 2.0, wedge: WedgeGeometry::symmetric(t.to_radians()).unwrap() }
}

fn c8_inventories() -> Vec<Line> {
    let g = air();
    let th = Thresholds::default();
    let wedge = WedgeGeometry::new(60f64.to_radians(), 70f64.to_radians()).unwrap();
    let nonsym =
        build_configuration(ConfigKind::RegularReflectionNonsym, &g, &ProblemData::Reflection { rho0: 1.0, rho1: 2.0, wedge })
            .unwrap();
    let prandtl =
        build_configuration(ConfigKind::Prandtl, &g, &ProblemData::Prandtl { rho_inf: 1.0, u_inf: 3.0, theta_w: 20f64.to_radians() })
            .unwrap();
    let (rn, rp) = (validate_default(&nonsym, &th), validate_default(&prandtl, &th));
    let key_checks = ["shock_normal_velocity", "sonic_normal_velocity"]
        .iter()
        .all(|n| rn.get(n).is_some_and(|c| c.passed) && rp.get(n).is_some_and(|c| c.passed));
    let (_, n1, n2) = nonsym.inventory();
    let pass = (n1, n2) == (2, 3) && prandtl.inventory() == (3, 1, 3) && rn.passed() && rp.passed() && key_checks;
    vec![line(
        8,
        pass,
        format!(
            "non-symmetric N₁={n1}, N₂={n2}; Prandtl (M, N₁, N₂) = {:?}; all checks pass {} / {}",
            prandtl.inventory(),
            rn.passed(),
            rp.passed()
        ),
    )]
}

fn c9_lighthill() -> Vec<Line> {
    let g5 = GasParams::new(5.0).unwrap();
    let accepted = build_configuration(
        ConfigKind::Lighthill,
        &g5,
        &ProblemData::Lighthill { rho0: 1.0, rho1: 1.1, theta_w: 60f64.to_radians() },
    )
    .is_ok();
    let g = air();
    let inc = incident_shock_setup(1.0, 1.2, &g).unwrap();
    let violates = inc.xi1_0 >= g.sound_speed(1.2);
    let msg = build_configuration(ConfigKind::Lighthill, &g, &ProblemData::Lighthill { rho0: 1.0, rho1: 1.2, theta_w: 1.0 })
        .err()
        .map(|e| e.to_string())
        .unwrap_or_default();
    let quoted = msg.contains("0 < ξ₁⁰ < c₁");
    vec![line(9, accepted && violates && quoted, format!("γ=5 data accepted {accepted}; violation rejected with \"{msg}\""))]
}

fn modes(r: &mut ChaCha8Rng) -> Vec<(f64, f64, f64, f64)> {
    (0..3)
        .map(|_| (r.random_range(-1.0..1.0), r.random_range(-6.0..6.0), r.random_range(-6.0..6.0), r.random_range(0.0..TAU)))
        .collect()
}

fn eval(m: &[(f64, f64, f64, f64)], p: &Vec2) -> f64 {
    m.iter().map(|(a, kx, ky, ph)| a * (kx * p.x + ky * p.y + ph).sin()).sum()
}

fn c10_commutator() -> Vec<Line> {
    let schedule = [1.0 / 8.0, 1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0];
    let sub = Rect::new(0.25, 0.75, 0.25, 0.75);
    let grid = |eps: f64| (8.0 / eps).round() as usize;

    let u0 = GridField2D::unit_square(64, |p| (3.0 * p.x).sin() + p.y * p.y).unwrap();
    let b0 = GridField2D::unit_square(64, |_| 1.7).unwrap();
    let k0 = make_mollifier(1.0 / 8.0, u0.h, KernelProfile::Bump).unwrap();
    let zero = lp_norm(&commutator(&b0, &u0, 0, &k0).unwrap(), Norm::Inf, None).unwrap();

    let bf = |p: &Vec2| (3.0 * p.x).sin() * (2.0 * p.y).cos() + p.x * p.y;
    let uf = |p: &Vec2| (p.x - 0.3).powi(2) + (5.0 * p.y).sin();
    let rows = convergence_table(
        &schedule,
        0,
        &sub,
        |e| Ok((GridField2D::unit_square(grid(e), bf)?, GridField2D::unit_square(grid(e), uf)?)),
        |e, h| make_mollifier(e, h, KernelProfile::Bump),
    )
    .unwrap();
    let decreasing = rows.windows(2).all(|w| w[1].l1_norm < w[0].l1_norm);
    let final_ratio = rows.last().unwrap().l1_norm / rows[0].l1_norm;

    let (b1, u1) = (GridField2D::unit_square(96, bf).unwrap(), GridField2D::unit_square(96, uf).unwrap());
    let k1 = make_mollifier(1.0 / 12.0, b1.h, KernelProfile::Bump).unwrap();
    let a = commutator(&b1, &u1, 0, &k1).unwrap();
    let parts = commutator_decomposition(&b1, &u1, 0, &k1).unwrap();
    let sum = parts[1..].iter().fold(parts[0].clone(), |s, p| s.add(p).unwrap());
    let gap = lp_norm(&sum.sub(&a).unwrap(), Norm::Inf, Some(&sub)).unwrap();

    // ‖A_ε‖_{L¹(Ω′)} / (‖∂₁b‖_{L²} ‖u‖_{L²}) against C(η) of the kernel
    let mut r = rng(10);
    let pairs: Vec<_> = (0..50).map(|_| (modes(&mut r), modes(&mut r))).collect();
    let mut worst = 0.0f64;
    let mut bound = 0.0f64;
    for &eps in &schedule {
        let n = grid(eps);
        let h = 1.0 / n as f64;
        let k = make_mollifier(eps, h, KernelProfile::Bump).unwrap();
        bound = bound.max(k.commutator_constant(0));
        for (bm, um) in &pairs {
            let b = GridField2D::unit_square(n, |p| eval(bm, p)).unwrap();
            let u = GridField2D::unit_square(n, |p| eval(um, p)).unwrap();
            let bx = GridField2D::unit_square(n, |p| bm.iter().map(|(a, kx, ky, ph)| a * kx * (kx * p.x + ky * p.y + ph).cos()).sum())
                .unwrap();
            let num = lp_norm(&commutator(&b, &u, 0, &k).unwrap(), Norm::L(1.0), Some(&sub)).unwrap();
            let den = lp_norm(&bx, Norm::L(2.0), None).unwrap() * lp_norm(&u, Norm::L(2.0), None).unwrap();
            worst = worst.max(num / den);
        }
    }
    vec![line(
        10,
        zero <= COMMUTATOR_ZERO_TOL && decreasing && final_ratio <= FINAL_TO_INITIAL && gap <= DECOMPOSITION_TOL && worst <= bound,
        format!(
            "constant b gives {zero:.1e}; L¹ table {} decreasing {decreasing}, final/initial {final_ratio:.3}; decomposition gap {gap:.1e}; \
             empirical constant {worst:.3} ≤ C(η) = {bound:.3} over 50 pairs × 4 ε",
            rows.iter().map(|r| format!("{:.3e}", r.l1_norm)).collect::<Vec<_>>().join(", ")
        ),
    )]
}

fn c11_reflection() -> Vec<Line> {
    let theta = 1.25 * PI;
    let (h, n) = (1.0 / 128.0, 257);
    let inside = |p: &Vec2| p.y.atan2(p.x).rem_euclid(TAU) <= theta + 1e-12 || p.norm() < 1e-14;
    let f =
        GridField2D::from_fn_masked(v2(-1.0, -1.0), h, n, n, |p| inside(p).then(|| p.y * (1.0 + p.x * p.x) * (3.0 * p.x).cos())).unwrap();
    let others = [(v2(0.0, 0.0), v2(theta.cos(), theta.sin()))];
    let spec = ReflectionSpec::new(v2(0.0, 0.0), v2(1.0, 0.0), v2(0.0, 1.0), Some((v2(0.0, 0.0), theta)), &others).unwrap();
    let eps = 1.0 / 16.0;
    let m = mollify(&reflect_extend(&f, &spec, Parity::Odd, eps).unwrap(), &make_mollifier(eps, h, KernelProfile::Bump).unwrap())
        .unwrap();
    let row = 128;
    let (mut worst, mut count) = (0.0f64, 0);
    for i in 0..n {
        let p = m.node(i, row);
        if p.x > spec.exclusion_factor * eps && p.x < 1.0 && m.is_valid(i, row) {
            worst = worst.max(m.get(i, row).abs());
            count += 1;
        }
    }
    vec![line(
        11,
        worst <= WALL_TOL && count > 0,
        format!(
            "reflex corner 225°, L = {:.4}: max |mollified normal component| on {count} wall nodes beyond Lr = {worst:.1e} (tol {WALL_TOL:.0e})",
            spec.exclusion_factor
        ),
    )]
}

fn reference_config() -> Configuration {
    build_configuration(ConfigKind::RegularReflectionSym, &air(), &sym(60.0)).unwrap()
}

fn c12_identity(cfg: &Configuration) -> Vec<Line> {
    let patch = cfg.omega_patch().unwrap();
    let field = TrigField::new(
        2.0,
        vec![Mode::new(0.3, v2(1.3, 0.7), 0.2), Mode::new(0.1, v2(-0.4, 2.1), 1.0)],
        v2(0.4, 0.1),
        [vec![Mode::new(0.2, v2(0.9, -1.2), 0.3)], vec![Mode::new(0.15, v2(1.7, 0.8), -0.5)]],
    )
    .unwrap();
    let rows = weak_identity_refinement(&patch, &field, &RenormPair::quadratic(), &Unit, &[2, 4, 8, 16]).unwrap();
    let monotone = rows.windows(2).all(|w| w[1].defect.abs() < w[0].defect.abs());
    let last = rows.last().unwrap().defect.abs();
    let constant = ConstantField { state: ConstantState::new(1.3, v2(0.3, -0.2)).unwrap() };
    let zero = weak_identity_refinement(&patch, &constant, &renorm_pair_truncated(1.5).unwrap(), &Unit, &[4, 8]).unwrap();
    let exact = zero.iter().all(|r| r.defect == 0.0);
    vec![line(
        12,
        monotone && last <= DEFECT_TOL && exact,
        format!(
            "defects at 2, 4, 8, 16 nodes {} (monotone {monotone}, tol {DEFECT_TOL:.0e}); constant state exactly zero {exact}",
            rows.iter().map(|r| format!("{:.1e}", r.defect.abs())).collect::<Vec<_>>().join(", ")
        ),
    )]
}

fn c13_truncation(cfg: &Configuration) -> Vec<Line> {
    let patch = cfg.omega_patch().unwrap();
    let field = TrigField::new(2.0, vec![], v2(0.1, 0.0), [vec![Mode::new(2.0, v2(0.0, 2.0), 0.3)], vec![]]).unwrap();
    let levels = [1.05, 1.25, 1.5, 2.0, 3.0, 5.0, 10.0];
    let rows = truncation_limit_study(&field, &patch, &levels, 12).unwrap();
    let (si, sb) = (rows[0].sup_interior, rows[0].sup_boundary);
    let vol_ok = rows.iter().filter(|r| r.m >= si).all(|r| r.volume == 0.0);
    let saturated: Vec<f64> = rows.iter().filter(|r| r.m >= sb).map(|r| r.boundary).collect();
    let bnd_ok = saturated.windows(2).all(|w| w[0] == w[1]);
    let mixed = rows.iter().any(|r| r.m < si && r.volume != 0.0);
    let mut r = rng(13);
    let mut g_ok = true;
    for _ in 0..10_000 {
        let t = TruncatedQuadratic::new(r.random_range(1.01..10.0)).unwrap();
        let s: f64 = r.random_range(-50.0..50.0);
        g_ok &= t.g(s).abs() <= 2.0 * s * s;
    }
    vec![line(
        13,
        vol_ok && bnd_ok && !saturated.is_empty() && g_ok,
        format!(
            "sup|X| = {si:.4} inside, {sb:.4} on Γint; volume zero above it {vol_ok} (non-zero below {mixed}); \
             boundary constant over {} levels {bnd_ok}; |g_M| ≤ 2t² on 10⁴ samples {g_ok}",
            saturated.len()
        ),
    )]
}

fn c14_functional(cfg: &Configuration) -> Vec<Line> {
    let straight = shock_functional(&cfg.with_straight_principal_shock(), 1.0, 64).unwrap().value;
    let rep = contradiction_functional(cfg, &Thresholds::default()).unwrap();
    let lam = 2.5;
    let scaled = shock_functional(cfg, lam, 64).unwrap().value;
    let homog = (scaled / (lam * lam * rep.value) - 1.0).abs();
    vec![line(
        14,
        straight == 0.0 && rep.value < 0.0 && homog <= HOMOGENEITY_TOL,
        format!(
            "straight shock {:.1e}; curved shock {:.6e} with margin {:.3e}; λ = {lam} scaling error {homog:.1e} (tol {HOMOGENEITY_TOL:.0e})",
            straight.abs(),
            rep.value,
            rep.margin
        ),
    )]
}

fn run_cli(args: &[&str], out: &Path) -> bool {
    Command::new(env!("CARGO_BIN_EXE_shockreg"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .map(|o| o.status.success())
        .unwrap_or(false)
}

fn c15_determinism() -> Vec<Line> {
    let runs = [
        vec!["vorticity", "--seed", "7", "--samples", "200"],
        vec!["commutator", "--seed", "7", "--eps-schedule", "1/8,1/16"],
        vec!["identity", "--seed", "7"],
        vec!["reflect", "--theta-w", "55"],
        vec!["angles"],
    ];
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let mut ok = true;
    let mut files = 0;
    for args in &runs {
        ok &= run_cli(args, a.path()) && run_cli(args, b.path());
    }
    for entry in std::fs::read_dir(a.path()).unwrap() {
        let p = entry.unwrap().path();
        let other = b.path().join(p.file_name().unwrap());
        ok &= std::fs::read(&p).ok() == std::fs::read(&other).ok();
        files += 1;
    }
    vec![line(15, ok && files > 0, format!("{} subcommands run twice, {files} output files byte-identical {ok}", runs.len()))]
}

fn main() {
    let t0 = Instant::now();
    let cfg = reference_config();
    let mut lines = Vec::new();
    let suites: Vec<Box<dyn Fn() -> Vec<Line> + '_>> = vec![
        Box::new(c1_eos),
        Box::new(c2_jump),
        Box::new(c3_sonic),
        Box::new(c4_determinant),
        Box::new(c5_closed_form),
        Box::new(c6_gradient),
        Box::new(c7_angles),
        Box::new(c8_inventories),
        Box::new(c9_lighthill),
        Box::new(c10_commutator),
        Box::new(c11_reflection),
        Box::new(|| c12_identity(&cfg)),
        Box::new(|| c13_truncation(&cfg)),
        Box::new(|| c14_functional(&cfg)),
        Box::new(c15_determinism),
    ];
    for f in &suites {
        let t = Instant::now();
        for l in f() {
            let status = match l.pass {
                Some(true) => "PASS",
                Some(false) => "FAIL",
                None => "NOTE",
            };
            println!("{:<4} {status}  {}  [{:.2} s]", l.id, l.text, t.elapsed().as_secs_f64());
            lines.push(l);
        }
    }
    let failing = |l: &&Line| l.pass == Some(false);
    let unexpected: Vec<&str> = lines
        .iter()
        .filter(failing)
        .filter(|l| !l.id.parse::<u32>().is_ok_and(|n| UNATTAINABLE.contains(&n)))
        .map(|l| l.id.as_str())
        .collect();
    let failed = lines.iter().filter(failing).count();
    println!("{} lines, {failed} FAIL, {:.1} s", lines.len(), t0.elapsed().as_secs_f64());
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {}", unexpected.join(", "));
        std::process::exit(1);
    }
}
