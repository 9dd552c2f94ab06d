//! Smooth radial cutoff on the open unit disc `D ⊂ ℝᵈ`.
//!
//! `A(u) = h(t)` with `t = (r_support − |u|)/(r_support − r_plateau)` clamped
//! to `[0,1]`, `h(t) = g(t)/(g(t) + g(1−t))` and `g(s) = exp(−1/s)` for
//! `s > 0`, `g(s) = 0` otherwise. `A` equals 1 on `|u| ≤ r_plateau`, vanishes
//! on `|u| ≥ r_support` and is `C^∞`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_R_PLATEAU: f64 = 0.3;
pub const DEFAULT_R_SUPPORT: f64 = 0.6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawBump")]
pub struct BumpProfile {
    dim: usize,
    r_plateau: f64,
    r_support: f64,
}

#[derive(Deserialize)]
struct RawBump {
    dim: usize,
    r_plateau: f64,
    r_support: f64,
}

impl TryFrom<RawBump> for BumpProfile {
    type Error = Error;

    fn try_from(r: RawBump) -> Result<Self> {
        Self::new(r.dim, r.r_plateau, r.r_support)
    }
}

impl BumpProfile {
    pub fn new(dim: usize, r_plateau: f64, r_support: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::BumpRadii("disc dimension must be positive".into()));
        }
        if !(r_plateau.is_finite() && r_support.is_finite()) {
            return Err(Error::BumpRadii("radii must be finite".into()));
        }
        if !(0.0 < r_plateau && r_plateau < r_support && r_support < 1.0) {
            return Err(Error::BumpRadii(format!(
                "need 0 < r_plateau < r_support < 1, got {r_plateau} and {r_support}"
            )));
        }
        Ok(Self {
            dim,
            r_plateau,
            r_support,
        })
    }

    pub fn with_defaults(dim: usize) -> Result<Self> {
        Self::new(dim, DEFAULT_R_PLATEAU, DEFAULT_R_SUPPORT)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn r_plateau(&self) -> f64 {
        self.r_plateau
    }

    pub fn r_support(&self) -> f64 {
        self.r_support
    }

    fn width(&self) -> f64 {
        self.r_support - self.r_plateau
    }

    fn check(&self, u: &[f64]) -> Result<f64> {
        if u.len() != self.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                got: u.len(),
            });
        }
        if u.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("disc coordinate"));
        }
        let r = norm(u);
        if r >= 1.0 {
            return Err(Error::OutsideDisc(r));
        }
        Ok(r)
    }

    /// Profile as a function of the radius; no domain checks.
    pub fn radial(&self, r: f64) -> f64 {
        smoothstep((self.r_support - r) / self.width())
    }

    /// `dA/dr`; no domain checks.
    pub fn radial_deriv(&self, r: f64) -> f64 {
        -smoothstep_deriv((self.r_support - r) / self.width()) / self.width()
    }

    pub fn eval(&self, u: &[f64]) -> Result<f64> {
        let r = self.check(u)?;
        Ok(self.radial(r))
    }

    pub fn grad(&self, u: &[f64]) -> Result<Vec<f64>> {
        let r = self.check(u)?;
        Ok(self.grad_at_radius(u, r))
    }

    fn grad_at_radius(&self, u: &[f64], r: f64) -> Vec<f64> {
        if r <= self.r_plateau || r >= self.r_support {
            return vec![0.0; u.len()];
        }
        let dr = self.radial_deriv(r);
        u.iter().map(|ui| dr * ui / r).collect()
    }

    /// `(A(u), Σᵢ |∂A/∂uᵢ|)`, the two weights that multiply `|W'|` and `|W|`
    /// in the sheared row of the Jacobian.
    pub fn row_weights(&self, u: &[f64]) -> Result<(f64, f64)> {
        let r = self.check(u)?;
        let g = self.grad_at_radius(u, r);
        Ok((self.radial(r), g.iter().map(|v| v.abs()).sum()))
    }
}

pub(crate) fn norm(u: &[f64]) -> f64 {
    u.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn g(s: f64) -> f64 {
    if s > 0.0 {
        (-1.0 / s).exp()
    } else {
        0.0
    }
}

/// `h(t)` on `[0,1]`, clamped outside.
pub fn smoothstep(t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    if t >= 1.0 {
        return 1.0;
    }
    let a = g(t);
    let b = g(1.0 - t);
    a / (a + b)
}

/// `h'(t)`; zero outside `(0,1)`.
pub fn smoothstep_deriv(t: f64) -> f64 {
    if t <= 0.0 || t >= 1.0 {
        return 0.0;
    }
    let s = 1.0 - t;
    let a = g(t);
    let b = g(s);
    let denom = a + b;
    if denom == 0.0 {
        return 0.0;
    }
    // g'(x) = g(x)/x²
    (a * b * (1.0 / (t * t) + 1.0 / (s * s))) / (denom * denom)
}

/// `A(u)`.
pub fn bump_eval(a: &BumpProfile, u: &[f64]) -> Result<f64> {
    a.eval(u)
}

/// `∇A(u)`.
pub fn bump_grad(a: &BumpProfile, u: &[f64]) -> Result<Vec<f64>> {
    a.grad(u)
}
