//! Uniform grid fields, mollification, reflection across straight walls and
//! the commutator `A_ε[u, b] = ∂ᵢ((bu)_ε − b_ε u_ε)`.
//!
//! A field stores values at nodes `origin + (i h, j h)`. Cells carry a set
//! flag and the field records a margin of boundary nodes it no longer trusts;
//! every operation grows the margin by the stencil it consumes, and norms
//! refuse to integrate over untrusted nodes.

mod commutator;
mod kernel;
mod reflect;

pub use commutator::{commutator, commutator_decomposition, convergence_table, write_convergence_csv, ConvergenceRow};
pub use kernel::{make_mollifier, mollify, KernelProfile, MollifierKernel};
pub use reflect::{exclusion_factor, reflect_extend, Parity, ReflectionSpec};

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::Vec2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridField2D {
    pub origin: Vec2,
    pub h: f64,
    pub nx: usize,
    pub ny: usize,
    pub values: Vec<f64>,
    pub set: Vec<bool>,
    pub valid_margin: usize,
}

/// Axis-aligned rectangle `[x0, x1] × [y0, y1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        Self { x0, x1, y0, y1 }
    }

    pub fn contains(&self, p: &Vec2) -> bool {
        p.x >= self.x0 && p.x <= self.x1 && p.y >= self.y0 && p.y <= self.y1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Norm {
    L(f64),
    Inf,
}

impl GridField2D {
    pub fn new(origin: Vec2, h: f64, nx: usize, ny: usize, values: Vec<f64>) -> Result<Self> {
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::InvalidParameter(format!("grid spacing {h} must be positive")));
        }
        if values.len() != nx * ny {
            return Err(Error::InvalidParameter(format!(
                "grid {nx}×{ny} needs {} values, got {}",
                nx * ny,
                values.len()
            )));
        }
        let set = vec![true; values.len()];
        Ok(Self { origin, h, nx, ny, values, set, valid_margin: 0 })
    }

    pub fn from_fn<F: Fn(&Vec2) -> f64>(origin: Vec2, h: f64, nx: usize, ny: usize, f: F) -> Result<Self> {
        Self::from_fn_masked(origin, h, nx, ny, |p| Some(f(p)))
    }

    /// Nodes where `f` returns `None` are left unset.
    pub fn from_fn_masked<F: Fn(&Vec2) -> Option<f64>>(origin: Vec2, h: f64, nx: usize, ny: usize, f: F) -> Result<Self> {
        let mut g = Self::new(origin, h, nx, ny, vec![0.0; nx * ny])?;
        for j in 0..ny {
            for i in 0..nx {
                let k = j * nx + i;
                match f(&g.node(i, j)) {
                    Some(v) => g.values[k] = v,
                    None => g.set[k] = false,
                }
            }
        }
        Ok(g)
    }

    /// Cell-centred `n × n` grid on the unit square.
    pub fn unit_square<F: Fn(&Vec2) -> f64>(n: usize, f: F) -> Result<Self> {
        let h = 1.0 / n as f64;
        Self::from_fn(Vec2::new(0.5 * h, 0.5 * h), h, n, n, f)
    }

    pub fn node(&self, i: usize, j: usize) -> Vec2 {
        self.origin + Vec2::new(i as f64 * self.h, j as f64 * self.h)
    }

    pub fn idx(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[self.idx(i, j)]
    }

    /// Set and inside the trusted margin.
    pub fn is_valid(&self, i: usize, j: usize) -> bool {
        let m = self.valid_margin;
        i >= m && j >= m && i + m < self.nx && j + m < self.ny && self.set[self.idx(i, j)]
    }

    pub fn same_grid(&self, o: &Self) -> bool {
        self.nx == o.nx && self.ny == o.ny && self.h == o.h && self.origin == o.origin
    }

    fn check_same(&self, o: &Self) -> Result<()> {
        if self.same_grid(o) {
            Ok(())
        } else {
            Err(Error::InvalidParameter("fields live on different grids".into()))
        }
    }

    /// Pointwise combination; the result is set where both inputs are.
    pub fn zip_with<F: Fn(f64, f64) -> f64>(&self, o: &Self, f: F) -> Result<Self> {
        self.check_same(o)?;
        let mut out = self.clone();
        for k in 0..self.values.len() {
            out.values[k] = f(self.values[k], o.values[k]);
            out.set[k] = self.set[k] && o.set[k];
        }
        out.valid_margin = self.valid_margin.max(o.valid_margin);
        Ok(out)
    }

    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v = f(*v));
        out
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.zip_with(o, |a, b| a + b)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.zip_with(o, |a, b| a - b)
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.zip_with(o, |a, b| a * b)
    }

    /// Central difference along `axis`; consumes one node of margin.
    pub fn central_diff(&self, axis: usize) -> Self {
        let mut out = self.clone();
        let (nx, ny) = (self.nx, self.ny);
        for j in 0..ny {
            for i in 0..nx {
                let k = self.idx(i, j);
                let nb = match axis {
                    0 if i > 0 && i + 1 < nx => Some((self.idx(i + 1, j), self.idx(i - 1, j))),
                    1 if j > 0 && j + 1 < ny => Some((self.idx(i, j + 1), self.idx(i, j - 1))),
                    _ => None,
                };
                match nb {
                    Some((p, m)) if self.set[p] && self.set[m] => {
                        out.values[k] = (self.values[p] - self.values[m]) / (2.0 * self.h);
                    }
                    _ => {
                        out.values[k] = 0.0;
                        out.set[k] = false;
                    }
                }
            }
        }
        out.valid_margin = self.valid_margin + 1;
        out
    }

    /// Grid shifted by whole nodes, filling vacated nodes as unset.
    pub fn shifted(&self, di: isize, dj: isize) -> Self {
        let mut out = self.clone();
        for j in 0..self.ny {
            for i in 0..self.nx {
                let (si, sj) = (i as isize - di, j as isize - dj);
                let k = self.idx(i, j);
                if si >= 0 && sj >= 0 && (si as usize) < self.nx && (sj as usize) < self.ny {
                    let s = self.idx(si as usize, sj as usize);
                    out.values[k] = self.values[s];
                    out.set[k] = self.set[s];
                } else {
                    out.values[k] = 0.0;
                    out.set[k] = false;
                }
            }
        }
        out.valid_margin = self.valid_margin + di.unsigned_abs().max(dj.unsigned_abs());
        out
    }

    /// Write `x,y,value,set` rows.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["x", "y", "value", "valid"]).map_err(io)?;
        for j in 0..self.ny {
            for i in 0..self.nx {
                let p = self.node(i, j);
                let valid = self.is_valid(i, j);
                let v = if valid { format!("{:.12e}", self.get(i, j)) } else { String::new() };
                w.write_record([format!("{:.12e}", p.x), format!("{:.12e}", p.y), v, valid.to_string()])
                    .map_err(io)?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

/// Discrete `L^p` norm over the nodes inside `sub` (midpoint rule with
/// weight `h²`); `None` integrates over every valid node.
pub fn lp_norm(f: &GridField2D, p: Norm, sub: Option<&Rect>) -> Result<f64> {
    let mut acc = 0.0;
    let mut count = 0usize;
    for j in 0..f.ny {
        for i in 0..f.nx {
            let inside = match sub {
                Some(r) => r.contains(&f.node(i, j)),
                None => f.is_valid(i, j),
            };
            if !inside {
                continue;
            }
            if !f.is_valid(i, j) {
                return Err(Error::Precondition(format!(
                    "norm subdomain reaches node ({i}, {j}) outside the valid region"
                )));
            }
            let a = f.get(i, j).abs();
            match p {
                Norm::Inf => acc = f64::max(acc, a),
                Norm::L(q) => acc += a.powf(q),
            }
            count += 1;
        }
    }
    if count == 0 {
        return Err(Error::InvalidParameter("norm over an empty subdomain".into()));
    }
    Ok(match p {
        Norm::Inf => acc,
        Norm::L(q) => (acc * f.h * f.h).powf(1.0 / q),
    })
}
