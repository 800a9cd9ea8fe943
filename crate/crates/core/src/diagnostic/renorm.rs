use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Renormalization triple `(f, f′, g)` with `g(s) = s f′(s) − 2 f(s)`.
#[derive(Clone)]
pub struct RenormPair {
    pub name: String,
    f: ScalarFn,
    fprime: ScalarFn,
    g: ScalarFn,
}

impl fmt::Debug for RenormPair {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        fm.debug_struct("RenormPair").field("name", &self.name).finish()
    }
}

impl RenormPair {
    /// Pair with `g` derived from `f` and `f′`.
    pub fn from_f<F, D>(name: &str, f: F, fprime: D) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let (f, fprime): (ScalarFn, ScalarFn) = (Arc::new(f), Arc::new(fprime));
        let (fc, dc) = (f.clone(), fprime.clone());
        Self { name: name.to_string(), f, fprime, g: Arc::new(move |s| s * dc(s) - 2.0 * fc(s)) }
    }

    /// Pair with an explicit `g`; the relation is not enforced here, see
    /// [`RenormPair::relation_residual`].
    pub fn with_g<F, D, G>(name: &str, f: F, fprime: D, g: G) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64) -> f64 + Send + Sync + 'static,
        G: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self { name: name.to_string(), f: Arc::new(f), fprime: Arc::new(fprime), g: Arc::new(g) }
    }

    /// `f(s) = s²`, for which `g ≡ 0`.
    pub fn quadratic() -> Self {
        Self::with_g("quadratic", |s| s * s, |s| 2.0 * s, |_| 0.0)
    }

    pub fn f(&self, s: f64) -> f64 {
        (self.f)(s)
    }

    pub fn fprime(&self, s: f64) -> f64 {
        (self.fprime)(s)
    }

    pub fn g(&self, s: f64) -> f64 {
        (self.g)(s)
    }

    /// `s f′(s) − 2 f(s) − g(s)`.
    pub fn relation_residual(&self, s: f64) -> f64 {
        s * self.fprime(s) - 2.0 * self.f(s) - self.g(s)
    }
}

/// Quadratic truncated to linear growth beyond `|t| = M`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncatedQuadratic {
    pub m: f64,
}

impl TruncatedQuadratic {
    pub fn new(m: f64) -> Result<Self> {
        if !(m > 1.0) || !m.is_finite() {
            return Err(Error::InvalidParameter(format!("truncation level M = {m} must be a finite number above 1")));
        }
        Ok(Self { m })
    }

    pub fn f(&self, t: f64) -> f64 {
        let (a, m) = (t.abs(), self.m);
        if a <= m {
            t * t
        } else {
            m * m + 2.0 * m * (a - m)
        }
    }

    /// `2 min(|t|, M) sign t`.
    pub fn fprime(&self, t: f64) -> f64 {
        2.0 * t.abs().min(self.m) * t.signum()
    }

    pub fn g(&self, t: f64) -> f64 {
        let (a, m) = (t.abs(), self.m);
        if a <= m {
            0.0
        } else {
            2.0 * (m * m - m * a)
        }
    }

    pub fn pair(&self) -> RenormPair {
        let (a, b, c) = (*self, *self, *self);
        RenormPair::with_g(&format!("truncated quadratic M={}", self.m), move |t| a.f(t), move |t| b.fprime(t), move |t| c.g(t))
    }
}

/// `(f_M, f_M′, g_M)` for a truncation level `M > 1`.
pub fn renorm_pair_truncated(m: f64) -> Result<RenormPair> {
    Ok(TruncatedQuadratic::new(m)?.pair())
}
