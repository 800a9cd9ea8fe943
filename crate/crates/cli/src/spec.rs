//! Run specification: defaults, a flat `key = value` file and flag
//! overrides, merged in that order.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Polar,
    Reflect,
    Angles,
    Vorticity,
    Commutator,
    Identity,
    Contradict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Regular,
    Prandtl,
    Lighthill,
    FourShock,
}

impl FromStr for Kind {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "regular" | "reflection" => Ok(Kind::Regular),
            "prandtl" => Ok(Kind::Prandtl),
            "lighthill" => Ok(Kind::Lighthill),
            "four-shock" | "four_shock" | "riemann" => Ok(Kind::FourShock),
            _ => Err(CliError::Usage(format!(
                "unknown configuration kind `{s}`; expected regular, prandtl, lighthill or four-shock"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(CliError::Usage(format!("unknown output format `{s}`; expected csv or json"))),
        }
    }
}

/// Optional settings as they come from a file or from flags.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub kind: Option<Kind>,
    pub gamma: Option<f64>,
    pub rho0: Option<f64>,
    pub rho1: Option<f64>,
    pub rho2: Option<f64>,
    pub u_inf: Option<f64>,
    pub theta_w: Option<f64>,
    pub theta_w1: Option<f64>,
    pub theta_w2: Option<f64>,
    pub grid_n: Option<usize>,
    pub eps_schedule: Option<Vec<f64>>,
    pub m_schedule: Option<Vec<f64>>,
    pub samples: Option<usize>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub format: Option<Format>,
    pub straight: Option<bool>,
}

/// Fully resolved run. Angles are in degrees.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub command: Command,
    pub kind: Kind,
    pub gamma: f64,
    pub rho0: f64,
    pub rho1: f64,
    pub rho2: f64,
    pub u_inf: f64,
    pub theta_w: f64,
    pub theta_w1: Option<f64>,
    pub theta_w2: Option<f64>,
    pub grid_n: usize,
    pub eps_schedule: Vec<f64>,
    pub m_schedule: Vec<f64>,
    pub samples: Option<usize>,
    pub out: PathBuf,
    pub seed: u64,
    pub format: Format,
    pub straight: bool,
}

/// Number, allowing a fraction `a/b`.
pub fn parse_number(s: &str) -> Result<f64, CliError> {
    let s = s.trim();
    let bad = || CliError::Usage(format!("`{s}` is not a number"));
    match s.split_once('/') {
        Some((a, b)) => {
            let (a, b): (f64, f64) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
            Ok(a / b)
        }
        None => s.parse().map_err(|_| bad()),
    }
}

/// Comma-separated list of numbers.
pub fn parse_schedule(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',').filter(|t| !t.trim().is_empty()).map(parse_number).collect()
}

fn parse_bool(s: &str) -> Result<bool, CliError> {
    match s.trim() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(CliError::Usage(format!("`{s}` is not a boolean"))),
    }
}

fn parse_int<T: FromStr>(key: &str, s: &str) -> Result<T, CliError> {
    s.trim().parse().map_err(|_| CliError::Usage(format!("{key} must be a non-negative integer, got `{s}`")))
}

impl Overrides {
    /// Reads `key = value` lines; `#` starts a comment. Keys may use `-` or
    /// `_`.
    pub fn from_kv(text: &str) -> Result<Self, CliError> {
        let mut o = Overrides::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("line {} of the settings file has no `=`", n + 1)))?;
            let key = k.trim().replace('-', "_");
            let v = v.trim();
            match key.as_str() {
                "kind" => o.kind = Some(v.parse()?),
                "gamma" => o.gamma = Some(parse_number(v)?),
                "rho0" => o.rho0 = Some(parse_number(v)?),
                "rho1" => o.rho1 = Some(parse_number(v)?),
                "rho2" => o.rho2 = Some(parse_number(v)?),
                "u_inf" => o.u_inf = Some(parse_number(v)?),
                "theta_w" => o.theta_w = Some(parse_number(v)?),
                "theta_w1" => o.theta_w1 = Some(parse_number(v)?),
                "theta_w2" => o.theta_w2 = Some(parse_number(v)?),
                "grid_n" => o.grid_n = Some(parse_int(&key, v)?),
                "eps_schedule" => o.eps_schedule = Some(parse_schedule(v)?),
                "m_schedule" => o.m_schedule = Some(parse_schedule(v)?),
                "samples" => o.samples = Some(parse_int(&key, v)?),
                "out" => o.out = Some(PathBuf::from(v)),
                "seed" => o.seed = Some(parse_int(&key, v)?),
                "format" => o.format = Some(v.parse()?),
                "straight" => o.straight = Some(parse_bool(v)?),
                _ => {
                    return Err(CliError::Usage(format!("unknown setting `{}` on line {} of the settings file", k.trim(), n + 1)))
                }
            }
        }
        Ok(o)
    }

    /// Values set in `top` win over those in `self`.
    pub fn layered(self, top: Overrides) -> Overrides {
        Overrides {
            kind: top.kind.or(self.kind),
            gamma: top.gamma.or(self.gamma),
            rho0: top.rho0.or(self.rho0),
            rho1: top.rho1.or(self.rho1),
            rho2: top.rho2.or(self.rho2),
            u_inf: top.u_inf.or(self.u_inf),
            theta_w: top.theta_w.or(self.theta_w),
            theta_w1: top.theta_w1.or(self.theta_w1),
            theta_w2: top.theta_w2.or(self.theta_w2),
            grid_n: top.grid_n.or(self.grid_n),
            eps_schedule: top.eps_schedule.or(self.eps_schedule),
            m_schedule: top.m_schedule.or(self.m_schedule),
            samples: top.samples.or(self.samples),
            out: top.out.or(self.out),
            seed: top.seed.or(self.seed),
            format: top.format.or(self.format),
            straight: top.straight.or(self.straight),
        }
    }
}

impl RunSpec {
    /// Defaults completed by `o`, then checked.
    pub fn resolve(command: Command, o: Overrides) -> Result<Self, CliError> {
        let spec = RunSpec {
            command,
            kind: o.kind.unwrap_or(Kind::Regular),
            gamma: o.gamma.unwrap_or(1.4),
            rho0: o.rho0.unwrap_or(1.0),
            rho1: o.rho1.unwrap_or(2.0),
            rho2: o.rho2.unwrap_or(2.0),
            u_inf: o.u_inf.unwrap_or(3.0),
            theta_w: o.theta_w.unwrap_or(60.0),
            theta_w1: o.theta_w1,
            theta_w2: o.theta_w2,
            grid_n: o.grid_n.unwrap_or(8),
            eps_schedule: o.eps_schedule.unwrap_or_else(|| vec![1.0 / 8.0, 1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0]),
            m_schedule: o.m_schedule.unwrap_or_else(|| vec![1.1, 1.25, 1.5, 2.0, 4.0, 8.0]),
            samples: o.samples,
            out: o.out.unwrap_or_else(|| PathBuf::from("out")),
            seed: o.seed.unwrap_or(0),
            format: o.format.unwrap_or(Format::Csv),
            straight: o.straight.unwrap_or(false),
        };
        spec.check()?;
        Ok(spec)
    }

    fn check(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Usage(m));
        if !(self.gamma > 1.0) || !self.gamma.is_finite() {
            return bad(format!("the adiabatic exponent must exceed 1 (got {})", self.gamma));
        }
        for (name, r) in [("rho0", self.rho0), ("rho1", self.rho1), ("rho2", self.rho2)] {
            if !(r > 0.0) || !r.is_finite() {
                return bad(format!("density {name} must be positive (got {r})"));
            }
        }
        if !(self.u_inf > 0.0) {
            return bad(format!("the oncoming speed must be positive (got {})", self.u_inf));
        }
        let limit = if self.kind == Kind::Lighthill { 180.0 } else { 90.0 };
        for t in [Some(self.theta_w), self.theta_w1, self.theta_w2].into_iter().flatten() {
            if !(t > 0.0 && t < limit) {
                return bad(format!("angle {t}° must lie strictly between 0° and {limit}°"));
            }
        }
        if self.theta_w1.is_some() != self.theta_w2.is_some() {
            return bad("give both --theta-w1 and --theta-w2, or neither".into());
        }
        if self.grid_n < 2 {
            return bad(format!("grid-n must be at least 2 nodes per kernel radius (got {})", self.grid_n));
        }
        if self.eps_schedule.is_empty() || self.eps_schedule.iter().any(|&e| !(e > 0.0 && e <= 0.25)) {
            return bad("every kernel radius in the ε schedule must lie in (0, 1/4]".into());
        }
        if self.m_schedule.is_empty() || self.m_schedule.iter().any(|&m| !(m > 1.0) || !m.is_finite()) {
            return bad("every truncation level in the M schedule must be a finite number above 1".into());
        }
        if let Some(s) = self.samples {
            if s < 2 {
                return bad(format!("samples must be at least 2 (got {s})"));
            }
        }
        Ok(())
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Command::Polar => "polar",
            Command::Reflect => "reflect",
            Command::Angles => "angles",
            Command::Vorticity => "vorticity",
            Command::Commutator => "commutator",
            Command::Identity => "identity",
            Command::Contradict => "contradict",
        };
        f.write_str(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_then_flags() {
        let file = Overrides::from_kv("# comment\ngamma = 5\ntheta-w = 45  # deg\neps_schedule = 1/8, 1/16\n").unwrap();
        let flags = Overrides { theta_w: Some(50.0), ..Default::default() };
        let s = RunSpec::resolve(Command::Reflect, file.layered(flags)).unwrap();
        assert_eq!(s.gamma, 5.0);
        assert_eq!(s.theta_w, 50.0);
        assert_eq!(s.eps_schedule, vec![0.125, 0.0625]);
    }

    #[test]
    fn bad_inputs_are_rejected() {
        assert!(Overrides::from_kv("colour = red").is_err());
        assert!(Overrides::from_kv("gamma 1.4").is_err());
        let o = Overrides { gamma: Some(1.0), ..Default::default() };
        assert!(RunSpec::resolve(Command::Polar, o).is_err());
        let o = Overrides { m_schedule: Some(vec![0.5]), ..Default::default() };
        assert!(RunSpec::resolve(Command::Identity, o).is_err());
    }
}
