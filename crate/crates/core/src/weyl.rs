//! Weyl sums `W(N,x,α) = Σ_{k<N} F(x + kα)` and their `x`-derivatives.
//!
//! Two independent evaluation routes: [`weyl_sum_direct`] adds the `N` terms,
//! [`weyl_sum_closed`] sums each harmonic as a geometric series. Grid scans
//! use the closed form with an exact root-of-unity table, so one scan costs
//! `O(grid · harmonics)` whatever `N` is.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circle::{mul_mod1, reduce_mod1, CircleValue};
use crate::error::{Error, Result};
use crate::fourier::FourierSeries;
use crate::rotation::RotationNumber;

/// Harmonics with `|1 − e^{2πimα}|` at or below this are summed term by term.
pub const RESONANCE_THRESHOLD: f64 = 1e-12;

/// Minimum grid size accepted for a scan: `4 · m_max`.
pub fn min_grid(f: &FourierSeries) -> usize {
    (4 * f.max_harmonic()).max(1) as usize
}

/// Default grid: `max(4096, 64 · m_max)`.
pub fn default_grid(f: &FourierSeries) -> usize {
    (64 * f.max_harmonic()).max(4096) as usize
}

pub fn check_grid(f: &FourierSeries, grid: usize) -> Result<()> {
    let min = min_grid(f);
    if grid < min {
        return Err(Error::Grid(format!(
            "{grid} points cannot resolve harmonic {} (need at least {min})",
            f.max_harmonic()
        )));
    }
    if grid > (1usize << 31) {
        return Err(Error::Grid(format!("{grid} points exceeds the 2^31 limit")));
    }
    Ok(())
}

pub fn weyl_sum_direct(f: &FourierSeries, alpha: f64, n: u64, x: f64) -> f64 {
    (0..n).map(|k| f.eval(x + mul_mod1(k as f64, alpha))).sum()
}

/// `W'(N,x,α) = Σ_{k<N} F'(x + kα)` by direct summation.
pub fn weyl_deriv_direct(f: &FourierSeries, alpha: f64, n: u64, x: f64) -> f64 {
    (0..n).map(|k| f.deriv(x + mul_mod1(k as f64, alpha))).sum()
}

pub fn weyl_sum_closed(f: &FourierSeries, alpha: f64, n: u64, x: f64) -> f64 {
    WeylCoefficients::new(f, alpha, n as i64).eval(x).0
}

/// `W'(N,x,α)` via the closed form.
pub fn weyl_deriv(f: &FourierSeries, alpha: f64, n: u64, x: f64) -> f64 {
    WeylCoefficients::new(f, alpha, n as i64).eval(x).1
}

/// `W(m,x,α)` for any integer `m`, extended by `W(−n, x) = −W(n, x − nα)` so
/// that the cocycle identity holds for all signs.
pub fn weyl_sum_signed(f: &FourierSeries, alpha: f64, m: i64, x: f64) -> f64 {
    WeylCoefficients::new(f, alpha, m).eval(x).0
}

/// `(W, W')` at `(m, x)` for any integer `m`.
pub fn weyl_pair_signed(f: &FourierSeries, alpha: f64, m: i64, x: f64) -> (f64, f64) {
    WeylCoefficients::new(f, alpha, m).eval(x)
}

/// Centered fractional part in `[−½, ½)`.
fn centered(x: f64) -> f64 {
    let r = reduce_mod1(x);
    if r >= 0.5 {
        r - 1.0
    } else {
        r
    }
}

/// `(n · b) mod 2` for integer-valued `n`, with an error-free product.
fn mul_mod2(n: f64, b: f64) -> f64 {
    let p = n * b;
    let e = n.mul_add(b, -p);
    let r = p - 2.0 * (p / 2.0).floor();
    let r = r + e;
    r - 2.0 * (r / 2.0).floor()
}

/// `Σ_{k<n} e^{2πikβ}` with `β ∈ [−½, ½)`.
fn geometric_sum(beta: f64, n: u64) -> Complex64 {
    if n == 0 {
        return Complex64::new(0.0, 0.0);
    }
    let half = (PI * beta).sin();
    if 2.0 * half.abs() <= RESONANCE_THRESHOLD {
        return (0..n)
            .map(|k| Complex64::from_polar(1.0, TAU * mul_mod1(k as f64, beta)))
            .sum();
    }
    // (z^n − 1)/(z − 1) = e^{iπ(n−1)β} · sin(πnβ)/sin(πβ)
    let nf = n as f64;
    let amp = (PI * mul_mod2(nf, beta)).sin() / half;
    Complex64::from_polar(amp, PI * mul_mod2(nf - 1.0, beta))
}

/// Per-harmonic complex coefficients of `W(m,·,α)` and `W'(m,·,α)`:
/// `W(x) = constant + Re Σ w_j e^{2πi m_j x}` and likewise for `W'`.
#[derive(Debug, Clone)]
pub struct WeylCoefficients {
    pub constant: f64,
    pub terms: Vec<WeylTerm>,
}

#[derive(Debug, Clone, Copy)]
pub struct WeylTerm {
    pub m: u64,
    pub w: Complex64,
    pub wp: Complex64,
}

impl WeylCoefficients {
    pub fn new(f: &FourierSeries, alpha: f64, m: i64) -> Self {
        let n = m.unsigned_abs();
        let sign = if m < 0 { -1.0 } else { 1.0 };
        let terms = f
            .harmonics()
            .iter()
            .map(|h| {
                let beta = centered(mul_mod1(h.m as f64, alpha));
                let mut s = geometric_sum(beta, n);
                if m < 0 {
                    // −Σ_{k<n} e^{2πim(x − nα + kα)}
                    s = -s * Complex64::from_polar(1.0, -TAU * mul_mod1(n as f64, beta));
                }
                let c = Complex64::new(h.a, -h.b);
                let w = c * s;
                let wp = w * Complex64::new(0.0, TAU * h.m as f64);
                WeylTerm { m: h.m, w, wp }
            })
            .collect();
        Self {
            constant: sign * n as f64 * f.c0(),
            terms,
        }
    }

    pub fn eval(&self, x: f64) -> (f64, f64) {
        let mut w = self.constant;
        let mut wp = 0.0;
        for t in &self.terms {
            let e = Complex64::from_polar(1.0, TAU * mul_mod1(t.m as f64, x));
            w += (t.w * e).re;
            wp += (t.wp * e).re;
        }
        (w, wp)
    }

    /// Evaluates at the grid point `j / grid.len()` with exact phases.
    pub fn eval_grid(&self, grid: &RootTable, j: usize) -> (f64, f64) {
        let g = grid.len() as u64;
        let mut w = self.constant;
        let mut wp = 0.0;
        for t in &self.terms {
            let idx = ((t.m % g) * j as u64) % g;
            let e = grid.roots[idx as usize];
            w += (t.w * e).re;
            wp += (t.wp * e).re;
        }
        (w, wp)
    }
}

/// `e^{2πik/G}` for `k < G`.
#[derive(Debug, Clone)]
pub struct RootTable {
    roots: Vec<Complex64>,
}

impl RootTable {
    pub fn new(size: usize) -> Self {
        let inv = 1.0 / size as f64;
        let roots = (0..size)
            .into_par_iter()
            .map(|k| Complex64::from_polar(1.0, TAU * (k as f64 * inv)))
            .collect();
        Self { roots }
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// `e^{2πik/G}`.
    #[inline]
    pub fn root(&self, k: usize) -> Complex64 {
        self.roots[k]
    }

    pub fn point(&self, j: usize) -> f64 {
        j as f64 / self.roots.len() as f64
    }
}

/// Extremes of `|W|` and `|W'|` over the grid `{j/G}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeylScanResult {
    pub n: i64,
    pub max_abs_w: f64,
    pub max_abs_wprime: f64,
    /// Grid point achieving `max_abs_wprime` (lowest index on ties).
    pub argmax_x: CircleValue,
    pub argmax_w_x: CircleValue,
    pub grid_size: usize,
}

/// Deterministic argmax: larger value wins, lower index on ties.
#[inline]
pub(crate) fn better(a: (f64, usize), b: (f64, usize)) -> (f64, usize) {
    if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
        b
    } else {
        a
    }
}

pub fn weyl_extrema(
    f: &FourierSeries,
    alpha: &RotationNumber,
    n: u64,
    grid_size: usize,
) -> Result<WeylScanResult> {
    check_grid(f, grid_size)?;
    let table = RootTable::new(grid_size);
    Ok(scan_with_table(f, alpha.value(), n as i64, &table))
}

pub fn scan_with_table(f: &FourierSeries, alpha: f64, m: i64, table: &RootTable) -> WeylScanResult {
    let coeffs = WeylCoefficients::new(f, alpha, m);
    let init = ((f64::NEG_INFINITY, usize::MAX), (f64::NEG_INFINITY, usize::MAX));
    let (best_w, best_wp) = (0..table.len())
        .into_par_iter()
        .map(|j| {
            let (w, wp) = coeffs.eval_grid(table, j);
            ((w.abs(), j), (wp.abs(), j))
        })
        .reduce(|| init, |a, b| (better(a.0, b.0), better(a.1, b.1)));
    WeylScanResult {
        n: m,
        max_abs_w: best_w.0,
        max_abs_wprime: best_wp.0,
        argmax_x: CircleValue::wrap(table.point(best_wp.1)),
        argmax_w_x: CircleValue::wrap(table.point(best_w.1)),
        grid_size: table.len(),
    }
}

/// Samples `(x_j, W, W')` on the grid `{j/G}`.
pub fn weyl_grid_values(
    f: &FourierSeries,
    alpha: &RotationNumber,
    n: u64,
    grid_size: usize,
) -> Result<Vec<(f64, f64, f64)>> {
    check_grid(f, grid_size)?;
    let table = RootTable::new(grid_size);
    let coeffs = WeylCoefficients::new(f, alpha.value(), n as i64);
    Ok((0..grid_size)
        .into_par_iter()
        .map(|j| {
            let (w, wp) = coeffs.eval_grid(&table, j);
            (table.point(j), w, wp)
        })
        .collect())
}

/// First grid index `j` where `W` vanishes or changes sign between `j/G` and
/// `(j+1)/G` (cyclically).
pub fn weyl_zero_bracket(
    f: &FourierSeries,
    alpha: &RotationNumber,
    n: u64,
    grid_size: usize,
) -> Result<Option<usize>> {
    let values = weyl_grid_values(f, alpha, n, grid_size)?;
    let g = values.len();
    Ok((0..g).find(|&j| values[j].1 * values[(j + 1) % g].1 <= 0.0))
}
