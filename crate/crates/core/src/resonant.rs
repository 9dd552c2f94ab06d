//! Heuristic `(F, α)` pairs whose Weyl-sum derivatives track a target `Ψ`.
//!
//! `α` is built from chosen partial quotients so that its convergent
//! denominators `q₁ < … < q_{J+1}` sit roughly geometrically between
//! [`FIRST_DENOMINATOR`] and `2·n_max`, followed by a tail of ones (so `α` is a
//! quadratic irrational). `F = Σ_j a_j sin(2π q_j x)` with
//! `a_j = min(1, Ψ(q_{j+1}) / (2π q_j q_{j+1}))`, rescaled if needed so that
//! `Σ a_j ≤ 1`. Harmonic `q_j` adds up coherently for `N ≲ q_{j+1}/2`, where
//! its contribution to `max |W'|` is of order `Ψ(q_{j+1})`.
//!
//! Nothing here proves a growth rate; finite scans only describe the tested
//! range.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::{FourierSeries, Harmonic};
use crate::psi::PsiSpec;
use crate::rotation::RotationNumber;

pub const FIRST_DENOMINATOR: f64 = 4.0;

/// Largest convergent denominator the design will place; keeps `q_j q_{j+1}`
/// well inside double precision.
pub const MAX_DESIGN_DENOMINATOR: u64 = 1 << 26;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResonantPair {
    pub fourier: FourierSeries,
    pub alpha: RotationNumber,
    /// `q₁, …, q_{J+1}`.
    pub denominators: Vec<u64>,
}

pub fn resonant_pair(psi: &PsiSpec, depth: usize, n_max: u64) -> Result<ResonantPair> {
    psi.validate()?;
    if depth == 0 {
        return Err(Error::Resonant("depth must be at least 1".into()));
    }
    if n_max < 4 {
        return Err(Error::Resonant(format!("n_max must be at least 4, got {n_max}")));
    }
    let top = 2.0 * n_max as f64;
    let ratio = (top / FIRST_DENOMINATOR).powf(1.0 / depth as f64);

    let mut quotients = Vec::with_capacity(depth + 1);
    let mut denominators = Vec::with_capacity(depth + 1);
    let (mut q_prev, mut q) = (0u64, 1u64);
    for k in 0..=depth {
        let target = FIRST_DENOMINATOR * ratio.powi(k as i32);
        let a = ((target - q_prev as f64) / q as f64).round().max(1.0) as u64;
        let next = a
            .checked_mul(q)
            .and_then(|v| v.checked_add(q_prev))
            .filter(|&v| v <= MAX_DESIGN_DENOMINATOR)
            .ok_or_else(|| {
                Error::Resonant(format!(
                    "depth {depth} with n_max {n_max} needs denominators beyond working precision"
                ))
            })?;
        quotients.push(a);
        denominators.push(next);
        (q_prev, q) = (q, next);
    }

    let alpha = RotationNumber::from_partial_quotients("resonant", &quotients, &[1])?;
    let computed: Vec<u64> = alpha.convergents().iter().map(|c| c.q).collect();
    if computed.len() < denominators.len() || computed[..denominators.len()] != denominators[..] {
        return Err(Error::Resonant(
            "rounded alpha lost the designed convergents; reduce depth or n_max".into(),
        ));
    }

    let mut coeffs = Vec::with_capacity(depth);
    for j in 0..depth {
        let (qj, qn) = (denominators[j] as f64, denominators[j + 1] as f64);
        coeffs.push((psi.eval(qn)? / (TAU * qj * qn)).min(1.0));
    }
    let total: f64 = coeffs.iter().sum();
    let safeguard = if total > 1.0 { 1.0 / total } else { 1.0 };
    let harmonics = denominators[..depth]
        .iter()
        .zip(&coeffs)
        .map(|(&m, &c)| Harmonic {
            m,
            a: 0.0,
            b: c * safeguard,
        })
        .collect();
    let fourier = FourierSeries::new(0.0, harmonics)?;
    Ok(ResonantPair {
        fourier,
        alpha,
        denominators,
    })
}
