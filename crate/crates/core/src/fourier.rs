//! Finite trigonometric polynomials on `ℝ/ℤ`.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::circle::mul_mod1;
use crate::error::{Error, Result};

/// One harmonic `a·cos(2πmx) + b·sin(2πmx)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Harmonic {
    pub m: u64,
    pub a: f64,
    pub b: f64,
}

/// `F(x) = c0 + Σ a_m cos(2πmx) + b_m sin(2πmx)` with strictly increasing `m ≥ 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSeries")]
pub struct FourierSeries {
    c0: f64,
    harmonics: Vec<Harmonic>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSeries {
    #[serde(default)]
    c0: f64,
    #[serde(default)]
    harmonics: Vec<Harmonic>,
}

impl TryFrom<RawSeries> for FourierSeries {
    type Error = Error;

    fn try_from(r: RawSeries) -> Result<Self> {
        Self::new(r.c0, r.harmonics)
    }
}

impl FourierSeries {
    pub fn new(c0: f64, harmonics: Vec<Harmonic>) -> Result<Self> {
        if !c0.is_finite() {
            return Err(Error::InvalidSeries("constant term is not finite".into()));
        }
        for (i, h) in harmonics.iter().enumerate() {
            if h.m == 0 {
                return Err(Error::InvalidSeries(
                    "harmonic index 0; use the constant term".into(),
                ));
            }
            if !h.a.is_finite() || !h.b.is_finite() {
                return Err(Error::InvalidSeries(format!(
                    "harmonic {} has a non-finite coefficient",
                    h.m
                )));
            }
            if i > 0 && harmonics[i - 1].m >= h.m {
                return Err(Error::InvalidSeries(format!(
                    "harmonic indices must be strictly increasing ({} then {})",
                    harmonics[i - 1].m,
                    h.m
                )));
            }
            if h.m > (1u64 << 40) {
                return Err(Error::InvalidSeries(format!(
                    "harmonic {} exceeds the supported index range",
                    h.m
                )));
            }
        }
        Ok(Self { c0, harmonics })
    }

    pub fn zero() -> Self {
        Self {
            c0: 0.0,
            harmonics: Vec::new(),
        }
    }

    pub fn constant(c0: f64) -> Result<Self> {
        Self::new(c0, Vec::new())
    }

    /// `sin(2πx)`.
    pub fn sin() -> Self {
        Self {
            c0: 0.0,
            harmonics: vec![Harmonic {
                m: 1,
                a: 0.0,
                b: 1.0,
            }],
        }
    }

    pub fn c0(&self) -> f64 {
        self.c0
    }

    pub fn harmonics(&self) -> &[Harmonic] {
        &self.harmonics
    }

    /// The mean over `[0,1)` is `c0`.
    pub fn is_zero_mean(&self) -> bool {
        self.c0 == 0.0
    }

    pub fn is_identically_zero(&self) -> bool {
        self.c0 == 0.0 && self.harmonics.iter().all(|h| h.a == 0.0 && h.b == 0.0)
    }

    pub fn max_harmonic(&self) -> u64 {
        self.harmonics.last().map_or(0, |h| h.m)
    }

    /// `Σ (|a_m| + |b_m|)`, not counting the constant term.
    pub fn coeff_l1(&self) -> f64 {
        self.harmonics.iter().map(|h| h.a.abs() + h.b.abs()).sum()
    }

    /// `Σ (2πm)² (|a_m| + |b_m|)`, a bound on `|F''|`.
    pub fn second_derivative_bound(&self) -> f64 {
        self.harmonics
            .iter()
            .map(|h| (TAU * h.m as f64).powi(2) * (h.a.abs() + h.b.abs()))
            .sum()
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.c0
            + self
                .harmonics
                .iter()
                .map(|h| {
                    let (s, c) = (TAU * mul_mod1(h.m as f64, x)).sin_cos();
                    h.a * c + h.b * s
                })
                .sum::<f64>()
    }

    pub fn deriv(&self, x: f64) -> f64 {
        self.harmonics
            .iter()
            .map(|h| {
                let w = TAU * h.m as f64;
                let (s, c) = (TAU * mul_mod1(h.m as f64, x)).sin_cos();
                w * (h.b * c - h.a * s)
            })
            .sum()
    }

    /// The termwise derivative: harmonic `m` becomes `(2πm·b_m, −2πm·a_m)`.
    pub fn derivative(&self) -> FourierSeries {
        FourierSeries {
            c0: 0.0,
            harmonics: self
                .harmonics
                .iter()
                .map(|h| {
                    let w = TAU * h.m as f64;
                    Harmonic {
                        m: h.m,
                        a: w * h.b,
                        b: -w * h.a,
                    }
                })
                .collect(),
        }
    }

    /// `x ↦ F(x − shift)`.
    pub fn translated(&self, shift: f64) -> FourierSeries {
        FourierSeries {
            c0: self.c0,
            harmonics: self
                .harmonics
                .iter()
                .map(|h| {
                    let (s, c) = (TAU * mul_mod1(h.m as f64, shift)).sin_cos();
                    Harmonic {
                        m: h.m,
                        a: h.a * c - h.b * s,
                        b: h.b * c + h.a * s,
                    }
                })
                .collect(),
        }
    }

    pub fn scaled(&self, k: f64) -> FourierSeries {
        FourierSeries {
            c0: k * self.c0,
            harmonics: self
                .harmonics
                .iter()
                .map(|h| Harmonic {
                    m: h.m,
                    a: k * h.a,
                    b: k * h.b,
                })
                .collect(),
        }
    }
}

/// Evaluates `F(x)`.
pub fn fourier_eval(f: &FourierSeries, x: f64) -> f64 {
    f.eval(x)
}

/// Evaluates `F'(x)`.
pub fn fourier_deriv(f: &FourierSeries, x: f64) -> f64 {
    f.deriv(x)
}
