use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use shockreg::config::build::{build_configuration, ConfigKind, Configuration, ProblemData};
use shockreg::config::export::{angle_sweep, write_geometry_json, write_sweep_csv};
use shockreg::config::validate::{validate_default, Thresholds, ValidationReport};
use shockreg::config::{critical_angles, reflection_states, WedgeGeometry};
use shockreg::diagnostic::{
    contradiction_functional, truncation_limit_study, weak_identity_refinement, write_refinement_csv, write_truncation_csv,
    FnTest, Mode, RenormPair, TrigField,
};
use shockreg::fields::{convergence_table, make_mollifier, write_convergence_csv, GridField2D, KernelProfile, Rect};
use shockreg::geom::v2;
use shockreg::jump::{shock_polar, write_polar_csv};
use shockreg::vortcalc::{shock_vorticity_closed_form, solve_shock_system, system_determinant, ShockPointData};
use shockreg::{GasParams, Vec2};

use crate::spec::{Command, Format, Kind, RunSpec};
use crate::{CliError, Outcome};

type Res<T> = Result<T, CliError>;

pub fn run(spec: &RunSpec) -> Res<Outcome> {
    fs::create_dir_all(&spec.out)?;
    let params = GasParams::new(spec.gamma)?;
    let mut out = Outcome::default();
    match spec.command {
        Command::Polar => polar(spec, &params, &mut out)?,
        Command::Reflect => reflect(spec, &params, &mut out)?,
        Command::Angles => angles(spec, &params, &mut out)?,
        Command::Vorticity => vorticity(spec, &params, &mut out)?,
        Command::Commutator => commutator(spec, &mut out)?,
        Command::Identity => identity(spec, &params, &mut out)?,
        Command::Contradict => contradict(spec, &params, &mut out)?,
    }
    Ok(out)
}

fn emit<F>(out: &mut Outcome, dir: &Path, name: &str, body: F) -> Res<()>
where
    F: FnOnce(&mut BufWriter<File>) -> Res<()>,
{
    let path: PathBuf = dir.join(name);
    let mut w = BufWriter::new(File::create(&path)?);
    body(&mut w)?;
    w.flush()?;
    out.files.push(path);
    Ok(())
}

fn emit_json<T: Serialize + ?Sized>(out: &mut Outcome, dir: &Path, name: &str, value: &T) -> Res<()> {
    emit(out, dir, name, |w| {
        serde_json::to_writer_pretty(&mut *w, value).map_err(shockreg::Error::from)?;
        writeln!(w)?;
        Ok(())
    })
}

/// Table in the requested format: `stem.csv` through `csv`, or `stem.json`.
fn emit_table<T, F>(spec: &RunSpec, out: &mut Outcome, stem: &str, rows: &[T], csv: F) -> Res<()>
where
    T: Serialize,
    F: FnOnce(&mut BufWriter<File>) -> shockreg::Result<()>,
{
    match spec.format {
        Format::Csv => emit(out, &spec.out, &format!("{stem}.csv"), |w| Ok(csv(w)?)),
        Format::Json => emit_json(out, &spec.out, &format!("{stem}.json"), rows),
    }
}

fn build(spec: &RunSpec, params: &GasParams) -> Res<Configuration> {
    let rad = f64::to_radians;
    let (kind, data) = match spec.kind {
        Kind::Regular => {
            let wedge = match (spec.theta_w1, spec.theta_w2) {
                (Some(a), Some(b)) => WedgeGeometry::new(rad(a), rad(b))?,
                _ => WedgeGeometry::symmetric(rad(spec.theta_w))?,
            };
            let kind = if wedge.symmetric { ConfigKind::RegularReflectionSym } else { ConfigKind::RegularReflectionNonsym };
            (kind, ProblemData::Reflection { rho0: spec.rho0, rho1: spec.rho1, wedge })
        }
        Kind::Prandtl => {
            (ConfigKind::Prandtl, ProblemData::Prandtl { rho_inf: spec.rho0, u_inf: spec.u_inf, theta_w: rad(spec.theta_w) })
        }
        Kind::Lighthill => {
            (ConfigKind::Lighthill, ProblemData::Lighthill { rho0: spec.rho0, rho1: spec.rho1, theta_w: rad(spec.theta_w) })
        }
        Kind::FourShock => (
            ConfigKind::FourShock,
            ProblemData::FourShock {
                rho1: spec.rho1,
                rho2: spec.rho2,
                theta1: rad(spec.theta_w1.unwrap_or(spec.theta_w)),
                theta2: rad(spec.theta_w2.unwrap_or(spec.theta_w)),
            },
        ),
    };
    let cfg = build_configuration(kind, params, &data)?;
    Ok(if spec.straight { cfg.with_straight_principal_shock() } else { cfg })
}

fn rejection(report: &ValidationReport) -> CliError {
    let list: Vec<String> = report.failures().iter().map(|c| format!("{}: {}", c.name, c.condition)).collect();
    CliError::Rejected(format!("the configuration is not an admissible structure; failed: {}", list.join("; ")))
}

fn polar(spec: &RunSpec, params: &GasParams, out: &mut Outcome) -> Res<()> {
    let (_, s1, inc) = reflection_states(spec.rho0, spec.rho1, params)?;
    let t = spec.theta_w.to_radians();
    let p0 = v2(inc.xi1_0, inc.xi1_0 * t.tan());
    let up = s1.at(&p0);
    let entries = shock_polar(&up, params, spec.samples.unwrap_or(181))?;
    out.summary.push(format!(
        "polar of state (1) at P0 = ({:.6}, {:.6}): |v| = {:.6}, c = {:.6}, {} samples",
        p0.x,
        p0.y,
        up.v.norm(),
        params.sound_speed(up.rho),
        entries.len()
    ));
    emit_table(spec, out, "polar", &entries, |w| write_polar_csv(&entries, params, w))
}

fn reflect(spec: &RunSpec, params: &GasParams, out: &mut Outcome) -> Res<()> {
    let cfg = build(spec, params)?;
    let report = validate_default(&cfg, &Thresholds::default());
    emit(out, &spec.out, "geometry.json", |w| {
        write_geometry_json(&cfg, &mut *w)?;
        writeln!(w)?;
        Ok(())
    })?;
    emit_json(out, &spec.out, "validation.json", &report)?;
    let (m, n1, n2) = cfg.inventory();
    out.summary.push(format!("{:?}: M = {m}, N1 = {n1}, N2 = {n2}", cfg.kind));
    out.summary.push(format!("{} of {} checks passed", report.checks.len() - report.failures().len(), report.checks.len()));
    if report.passed() {
        Ok(())
    } else {
        Err(rejection(&report))
    }
}

#[derive(Serialize)]
struct CriticalRecord {
    gamma: f64,
    rho0: f64,
    rho1: f64,
    detachment_rad: f64,
    detachment_deg: f64,
    sonic_rad: f64,
    sonic_deg: f64,
    sonic_crossing: bool,
}

fn angles(spec: &RunSpec, params: &GasParams, out: &mut Outcome) -> Res<()> {
    let crit = critical_angles(spec.rho0, spec.rho1, params)?;
    let n = spec.samples.unwrap_or(180);
    let grid: Vec<f64> = (0..n).map(|k| ((k as f64 + 0.5) * 90.0 / n as f64).to_radians()).collect();
    let rows = angle_sweep(spec.rho0, spec.rho1, params, &grid)?;
    let rec = CriticalRecord {
        gamma: spec.gamma,
        rho0: spec.rho0,
        rho1: spec.rho1,
        detachment_rad: crit.detachment,
        detachment_deg: crit.detachment.to_degrees(),
        sonic_rad: crit.sonic.angle,
        sonic_deg: crit.sonic.angle.to_degrees(),
        sonic_crossing: crit.sonic.crossing,
    };
    out.summary.push(format!(
        "detachment angle {:.6}°, sonic angle {:.6}°",
        rec.detachment_deg, rec.sonic_deg
    ));
    emit_json(out, &spec.out, "critical_angles.json", &rec)?;
    emit_table(spec, out, "angle_sweep", &rows, |w| write_sweep_csv(&rows, w))
}

#[derive(Serialize)]
struct VorticityRow {
    sample: usize,
    rho1: f64,
    w1: f64,
    w2: f64,
    fs2: f64,
    rho: f64,
    v1: f64,
    v2: f64,
    omega_closed: f64,
    omega_direct: f64,
    rel_diff: f64,
    det_numeric: f64,
    det_formula: f64,
}

fn vorticity(spec: &RunSpec, params: &GasParams, out: &mut Outcome) -> Res<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = spec.samples.unwrap_or(1000);
    let mut rows = Vec::with_capacity(n);
    while rows.len() < n {
        let rho1 = rng.random_range(0.5..3.0);
        let c1 = params.sound_speed(rho1);
        let w = v2(rng.random_range(-2.0..2.0), -c1 * rng.random_range(1.05..4.0));
        let fs2 = rng.random_range(-3.0..3.0);
        let d = ShockPointData::from_upstream(rho1, w, fs2, params)?;
        let closed = shock_vorticity_closed_form(&d)?;
        let direct = solve_shock_system(&d)?[2];
        let (m, _) = shockreg::vortcalc::shock_vorticity_system(&d);
        rows.push(VorticityRow {
            sample: rows.len(),
            rho1,
            w1: w.x,
            w2: w.y,
            fs2,
            rho: d.rho,
            v1: d.v.x,
            v2: d.v.y,
            omega_closed: closed,
            omega_direct: direct,
            rel_diff: (closed - direct).abs() / closed.abs().max(direct.abs()).max(f64::MIN_POSITIVE),
            det_numeric: m.determinant(),
            det_formula: system_determinant(&d),
        });
    }
    let worst = rows.iter().fold(0.0f64, |a, r| a.max(r.rel_diff));
    out.summary.push(format!("{n} shock points, largest relative gap closed form vs direct solve {worst:.3e}"));
    emit_table(spec, out, "vorticity", &rows, |w| {
        let mut c = csv::Writer::from_writer(w);
        for r in &rows {
            c.serialize(r).map_err(|e| shockreg::Error::Io(std::io::Error::other(e)))?;
        }
        c.flush()?;
        Ok(())
    })
}

fn random_modes(rng: &mut ChaCha8Rng, count: usize, amp: f64, kmax: f64) -> Vec<Mode> {
    (0..count)
        .map(|_| {
            Mode::new(
                rng.random_range(-amp..amp),
                v2(rng.random_range(-kmax..kmax), rng.random_range(-kmax..kmax)),
                rng.random_range(0.0..std::f64::consts::TAU),
            )
        })
        .collect()
}

fn sum_modes(modes: &[Mode], p: &Vec2) -> f64 {
    modes.iter().map(|m| m.amp * (m.k.dot(p) + m.phase).sin()).sum()
}

fn commutator(spec: &RunSpec, out: &mut Outcome) -> Res<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let bm = random_modes(&mut rng, 3, 1.0, 6.0);
    let um = random_modes(&mut rng, 3, 1.0, 6.0);
    let (bq, uq) = (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    let sub = Rect::new(0.25, 0.75, 0.25, 0.75);
    let grid_n = spec.grid_n as f64;
    let rows = convergence_table(
        &spec.eps_schedule,
        0,
        &sub,
        |eps| {
            let n = (grid_n / eps).round() as usize;
            let b = GridField2D::unit_square(n, |p| sum_modes(&bm, p) + bq * p.x * p.y)?;
            let u = GridField2D::unit_square(n, |p| sum_modes(&um, p) + uq * p.x * p.x)?;
            Ok((b, u))
        },
        |eps, h| make_mollifier(eps, h, KernelProfile::Bump),
    )?;
    if let (Some(a), Some(b)) = (rows.first(), rows.last()) {
        out.summary.push(format!("L1 norm of the commutator on [1/4,3/4]²: {:.4e} → {:.4e}", a.l1_norm, b.l1_norm));
    }
    emit_table(spec, out, "commutator", &rows, |w| write_convergence_csv(&rows, w))
}

/// Seeded manufactured field with vorticity of order one.
fn manufactured(spec: &RunSpec) -> Res<TrigField> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let rho_modes = random_modes(&mut rng, 2, 0.3, 1.5);
    let v_modes = [random_modes(&mut rng, 2, 2.0, 2.0), random_modes(&mut rng, 2, 2.0, 2.0)];
    let u = v2(rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5));
    Ok(TrigField::new(2.0, rho_modes, u, v_modes)?)
}

fn identity(spec: &RunSpec, params: &GasParams, out: &mut Outcome) -> Res<()> {
    let regular = RunSpec { kind: Kind::Regular, straight: false, ..spec.clone() };
    let cfg = build(&regular, params)?;
    let patch = cfg.omega_patch()?;
    let field = manufactured(spec)?;
    let zeta = FnTest(
        |p: &Vec2| (0.7 * p.x).cos() * (1.0 + p.y * p.y),
        |p: &Vec2| v2(-0.7 * (0.7 * p.x).sin() * (1.0 + p.y * p.y), 2.0 * p.y * (0.7 * p.x).cos()),
    );
    let orders = [2, 4, 8, 16, 32];
    let rows = weak_identity_refinement(&patch, &field, &RenormPair::quadratic(), &zeta, &orders)?;
    let trunc = truncation_limit_study(&field, &patch, &spec.m_schedule, 16)?;
    if let Some(r) = rows.last() {
        out.summary.push(format!("weak identity defect with {} nodes per direction: {:.3e}", r.order, r.defect));
    }
    emit_table(spec, out, "identity", &rows, |w| write_refinement_csv(&rows, w))?;
    emit_table(spec, out, "truncation", &trunc, |w| write_truncation_csv(&trunc, w))
}

fn contradict(spec: &RunSpec, params: &GasParams, out: &mut Outcome) -> Res<()> {
    let cfg = build(spec, params)?;
    let th = Thresholds::default();
    let report = match contradiction_functional(&cfg, &th) {
        Ok(r) => r,
        Err(shockreg::Error::Precondition(_)) => return Err(rejection(&validate_default(&cfg, &th))),
        Err(e) => return Err(e.into()),
    };
    out.summary.push(format!("boundary functional {:.6e}, margin {:.6e}", report.value, report.margin));
    emit(out, &spec.out, "contradiction.json", |w| {
        report.write_json(&mut *w)?;
        writeln!(w)?;
        Ok(())
    })
}
