//! The skew product `f₁(φ₁, φ₂, u) = (φ₁ + α, φ₂ + A(u)·F(φ₁), u)` on the chart
//! `U = T² × D`, its iterates and Jacobians, and the two maps on `S¹ × S²`.
//!
//! Iterates use the closed form `f₁ᵐ = (φ₁ + mα, φ₂ + A(u)·W(m, φ₁, α), u)`.
//! For `m < 0` the Weyl sum is extended by `W(−n, x) = −W(n, x − nα)`, which
//! turns the same formula into the inverse iterate; this extension and the
//! resulting negative-`m` Jacobian are derived here, not quoted.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::bump::{norm, BumpProfile};
use crate::circle::{circle_dist, mul_mod1, CircleValue};
use crate::error::{Error, Result};
use crate::fourier::FourierSeries;
use crate::rotation::RotationNumber;
use crate::weyl::weyl_pair_signed;

/// Guard for [`MapConfig::jacobian_chain`].
pub const MAX_CHAIN_STEPS: u64 = 10_000;

/// Displacement at or below this counts as fixed.
pub const FIXED_POINT_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    #[default]
    Chart,
    Example1,
    Example2,
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "chart" => Ok(Variant::Chart),
            "example1" => Ok(Variant::Example1),
            "example2" => Ok(Variant::Example2),
            _ => Err(Error::Variant(format!("unknown variant '{s}'"))),
        }
    }
}

/// `(φ₁, φ₂, u)` with `|u| < 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChartPoint {
    pub phi1: CircleValue,
    pub phi2: CircleValue,
    pub u: Vec<f64>,
}

impl ChartPoint {
    pub fn new(phi1: f64, phi2: f64, u: Vec<f64>) -> Result<Self> {
        if u.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("disc coordinate"));
        }
        let r = norm(&u);
        if r >= 1.0 {
            return Err(Error::OutsideDisc(r));
        }
        Ok(Self {
            phi1: CircleValue::new(phi1)?,
            phi2: CircleValue::new(phi2)?,
            u,
        })
    }

    /// Largest coordinate discrepancy, angles measured on the circle.
    pub fn dist(&self, other: &ChartPoint) -> f64 {
        let mut d = self.phi1.dist(other.phi1).max(self.phi2.dist(other.phi2));
        for (a, b) in self.u.iter().zip(&other.u) {
            d = d.max((a - b).abs());
        }
        d
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "branch", rename_all = "lowercase")]
pub enum SpherePoint {
    /// `(λ, θ, z)` with `|z| < 1`.
    Chart {
        lambda: CircleValue,
        theta: CircleValue,
        z: f64,
    },
    /// `λ × {a₁}` (`sign = +1`, north) or `λ × {a₂}` (`sign = −1`).
    Pole { lambda: CircleValue, sign: i8 },
}

impl SpherePoint {
    pub fn chart(lambda: f64, theta: f64, z: f64) -> Result<Self> {
        if !z.is_finite() {
            return Err(Error::NonFinite("z"));
        }
        if z.abs() >= 1.0 {
            return Err(Error::OutsideDisc(z.abs()));
        }
        Ok(SpherePoint::Chart {
            lambda: CircleValue::new(lambda)?,
            theta: CircleValue::new(theta)?,
            z,
        })
    }

    pub fn pole(lambda: f64, sign: i8) -> Result<Self> {
        if sign != 1 && sign != -1 {
            return Err(Error::Variant(format!("pole sign must be ±1, got {sign}")));
        }
        Ok(SpherePoint::Pole {
            lambda: CircleValue::new(lambda)?,
            sign,
        })
    }

    /// `(λ, θ, z)` with `z = ±1` meaning a pole (θ is then ignored).
    pub fn from_coords(lambda: f64, theta: f64, z: f64) -> Result<Self> {
        if z == 1.0 || z == -1.0 {
            Self::pole(lambda, z as i8)
        } else {
            Self::chart(lambda, theta, z)
        }
    }

    pub fn lambda(&self) -> CircleValue {
        match *self {
            SpherePoint::Chart { lambda, .. } | SpherePoint::Pole { lambda, .. } => lambda,
        }
    }

    pub fn is_pole(&self) -> bool {
        matches!(self, SpherePoint::Pole { .. })
    }

    /// Largest coordinate discrepancy; infinite between different branches.
    pub fn dist(&self, other: &SpherePoint) -> f64 {
        match (self, other) {
            (
                SpherePoint::Chart { lambda, theta, z },
                SpherePoint::Chart {
                    lambda: l2,
                    theta: t2,
                    z: z2,
                },
            ) => lambda.dist(*l2).max(theta.dist(*t2)).max((z - z2).abs()),
            (SpherePoint::Pole { lambda, sign }, SpherePoint::Pole { lambda: l2, sign: s2 })
                if sign == s2 =>
            {
                lambda.dist(*l2)
            }
            _ => f64::INFINITY,
        }
    }
}

/// `F`, `α`, `A` and which realisation of the map is meant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapConfig {
    #[serde(rename = "F")]
    pub fourier: FourierSeries,
    pub alpha: RotationNumber,
    #[serde(rename = "A")]
    pub bump: BumpProfile,
    pub variant: Variant,
    /// Stands for `f⁻¹`: every iterate index is negated.
    #[serde(default)]
    pub reversed: bool,
}

impl MapConfig {
    pub fn new(
        fourier: FourierSeries,
        alpha: RotationNumber,
        bump: BumpProfile,
        variant: Variant,
    ) -> Result<Self> {
        if variant != Variant::Chart && bump.dim() != 1 {
            return Err(Error::Dimension {
                expected: 1,
                got: bump.dim(),
            });
        }
        Ok(Self {
            fourier,
            alpha,
            bump,
            variant,
            reversed: false,
        })
    }

    /// The map `f⁻¹`, sharing `F`, `α`, `A`.
    pub fn inverse(&self) -> MapConfig {
        MapConfig {
            reversed: !self.reversed,
            ..self.clone()
        }
    }

    pub fn dim(&self) -> usize {
        self.bump.dim()
    }

    pub fn alpha(&self) -> f64 {
        self.alpha.value()
    }

    fn signed(&self, m: i64) -> i64 {
        if self.reversed {
            -m
        } else {
            m
        }
    }

    fn check_point(&self, x: &ChartPoint) -> Result<()> {
        if x.u.len() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                got: x.u.len(),
            });
        }
        Ok(())
    }

    fn step_forward(&self, x: &ChartPoint) -> Result<ChartPoint> {
        let a = self.bump.eval(&x.u)?;
        Ok(ChartPoint {
            phi1: x.phi1.shift(self.alpha()),
            phi2: x.phi2.shift(a * self.fourier.eval(x.phi1.value())),
            u: x.u.clone(),
        })
    }

    fn step_backward(&self, x: &ChartPoint) -> Result<ChartPoint> {
        let a = self.bump.eval(&x.u)?;
        let back = x.phi1.shift(-self.alpha());
        Ok(ChartPoint {
            phi1: back,
            phi2: x.phi2.shift(-a * self.fourier.eval(back.value())),
            u: x.u.clone(),
        })
    }

    /// One application of the map.
    pub fn f1_apply(&self, x: &ChartPoint) -> Result<ChartPoint> {
        self.check_point(x)?;
        if self.reversed {
            self.step_backward(x)
        } else {
            self.step_forward(x)
        }
    }

    /// One application of the inverse map.
    pub fn f1_inverse(&self, x: &ChartPoint) -> Result<ChartPoint> {
        self.check_point(x)?;
        if self.reversed {
            self.step_forward(x)
        } else {
            self.step_backward(x)
        }
    }

    /// The `m`-th iterate via the Weyl-sum closed form.
    pub fn f1_iterate_closed(&self, m: i64, x: &ChartPoint) -> Result<ChartPoint> {
        self.check_point(x)?;
        let m = self.signed(m);
        let a = self.bump.eval(&x.u)?;
        let (w, _) = weyl_pair_signed(&self.fourier, self.alpha(), m, x.phi1.value());
        Ok(ChartPoint {
            phi1: x.phi1.shift(mul_mod1(m as f64, self.alpha())),
            phi2: x.phi2.shift(a * w),
            u: x.u.clone(),
        })
    }

    /// `d(f₁ᵐ)` at `x`, a `(d+2)×(d+2)` matrix that differs from the identity
    /// only in row 2: `(A·W', 1, ∂A/∂u₁·W, …, ∂A/∂u_d·W)`.
    pub fn jacobian_closed(&self, m: i64, x: &ChartPoint) -> Result<DMatrix<f64>> {
        self.check_point(x)?;
        let m = self.signed(m);
        let (w, wp) = weyl_pair_signed(&self.fourier, self.alpha(), m, x.phi1.value());
        self.sheared_identity(&x.u, w, wp)
    }

    fn sheared_identity(&self, u: &[f64], w: f64, wp: f64) -> Result<DMatrix<f64>> {
        let d = self.dim();
        let a = self.bump.eval(u)?;
        let grad = self.bump.grad(u)?;
        let mut j = DMatrix::<f64>::identity(d + 2, d + 2);
        j[(1, 0)] = a * wp;
        for (i, g) in grad.iter().enumerate() {
            j[(1, 2 + i)] = g * w;
        }
        Ok(j)
    }

    fn step_jacobian(&self, forward: bool, x: &ChartPoint) -> Result<DMatrix<f64>> {
        if forward {
            let p = x.phi1.value();
            self.sheared_identity(&x.u, self.fourier.eval(p), self.fourier.deriv(p))
        } else {
            let p = x.phi1.shift(-self.alpha()).value();
            self.sheared_identity(&x.u, -self.fourier.eval(p), -self.fourier.deriv(p))
        }
    }

    /// Chain-rule product of one-step Jacobians along the orbit of `x`.
    pub fn jacobian_chain(&self, m: i64, x: &ChartPoint) -> Result<DMatrix<f64>> {
        self.check_point(x)?;
        if m.unsigned_abs() > MAX_CHAIN_STEPS {
            return Err(Error::CostGuard(format!(
                "chain product of {} steps exceeds {MAX_CHAIN_STEPS}",
                m.unsigned_abs()
            )));
        }
        let forward = (m >= 0) != self.reversed;
        let d = self.dim();
        let mut acc = DMatrix::<f64>::identity(d + 2, d + 2);
        let mut y = x.clone();
        for _ in 0..m.unsigned_abs() {
            acc = self.step_jacobian(forward, &y)? * acc;
            y = if forward {
                self.step_forward(&y)?
            } else {
                self.step_backward(&y)?
            };
        }
        Ok(acc)
    }

    fn require_example(&self) -> Result<()> {
        match self.variant {
            Variant::Example1 | Variant::Example2 => Ok(()),
            Variant::Chart => Err(Error::Variant(
                "sphere maps need variant example1 or example2".into(),
            )),
        }
    }

    /// The `m`-th iterate of the selected map on `S¹ × S²`.
    pub fn example_apply(&self, m: i64, p: &SpherePoint) -> Result<SpherePoint> {
        self.require_example()?;
        let m = self.signed(m);
        let rot = mul_mod1(m as f64, self.alpha());
        Ok(match (self.variant, *p) {
            (Variant::Example1, SpherePoint::Pole { lambda, sign }) => SpherePoint::Pole {
                lambda: lambda.shift(rot),
                sign,
            },
            (_, SpherePoint::Pole { .. }) => *p,
            (Variant::Example1, SpherePoint::Chart { lambda, theta, z }) => {
                let a = self.bump.eval(&[z])?;
                let (w, _) = weyl_pair_signed(&self.fourier, self.alpha(), m, lambda.value());
                SpherePoint::Chart {
                    lambda: lambda.shift(rot),
                    theta: theta.shift(a * w),
                    z,
                }
            }
            (_, SpherePoint::Chart { lambda, theta, z }) => {
                let a = self.bump.eval(&[z])?;
                let (w, _) = weyl_pair_signed(&self.fourier, self.alpha(), m, theta.value());
                SpherePoint::Chart {
                    lambda: lambda.shift(a * w),
                    theta: theta.shift(rot),
                    z,
                }
            }
        })
    }

    /// Identifies a sphere chart point with the chart model: `(λ, θ, z)` is
    /// `(φ₁, φ₂, u)` for example 1 and `(φ₂, φ₁, u)` for example 2.
    pub fn sphere_to_chart(&self, p: &SpherePoint) -> Result<ChartPoint> {
        match (self.variant, *p) {
            (_, SpherePoint::Pole { .. }) => {
                Err(Error::Variant("poles lie outside the chart".into()))
            }
            (Variant::Example2, SpherePoint::Chart { lambda, theta, z }) => Ok(ChartPoint {
                phi1: theta,
                phi2: lambda,
                u: vec![z],
            }),
            (_, SpherePoint::Chart { lambda, theta, z }) => Ok(ChartPoint {
                phi1: lambda,
                phi2: theta,
                u: vec![z],
            }),
        }
    }

    /// Orbit rows `(m, point)` for `m = 0..=steps`. Chart-variant maps with
    /// `d = 1` read `(λ, θ, z)` as `(φ₁, φ₂, u)`.
    pub fn orbit(&self, start: &SpherePoint, steps: u64) -> Result<Vec<SpherePoint>> {
        let steps = i64::try_from(steps).map_err(|_| Error::CostGuard("steps".into()))?;
        match self.variant {
            Variant::Chart => {
                if self.dim() != 1 {
                    return Err(Error::Dimension {
                        expected: 1,
                        got: self.dim(),
                    });
                }
                let SpherePoint::Chart { lambda, theta, z } = *start else {
                    return Err(Error::Variant("the chart model has no poles".into()));
                };
                let x = ChartPoint {
                    phi1: lambda,
                    phi2: theta,
                    u: vec![z],
                };
                (0..=steps)
                    .map(|m| {
                        let y = self.f1_iterate_closed(m, &x)?;
                        Ok(SpherePoint::Chart {
                            lambda: y.phi1,
                            theta: y.phi2,
                            z: y.u[0],
                        })
                    })
                    .collect()
            }
            _ => (0..=steps).map(|m| self.example_apply(m, start)).collect(),
        }
    }
}

/// Result of [`fixed_point_scan`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedPointReport {
    pub fixed: Vec<SpherePoint>,
    pub scanned: usize,
    pub min_displacement: f64,
    pub min_displacement_at: Option<SpherePoint>,
    pub tolerance: f64,
}

/// Scans `λ_i = i/G`, `θ_j = j/G`, `z_k = −1 + (2k+1)/G` plus both poles over
/// every `λ_i`, reporting the points moved by at most [`FIXED_POINT_TOLERANCE`].
pub fn fixed_point_scan(cfg: &MapConfig, grid: usize) -> Result<FixedPointReport> {
    cfg.require_example()?;
    if grid == 0 {
        return Err(Error::Grid("sphere grid must be positive".into()));
    }
    let g = grid as f64;
    let mut points = Vec::with_capacity(grid * grid * grid + 2 * grid);
    for i in 0..grid {
        let lambda = i as f64 / g;
        points.push(SpherePoint::pole(lambda, 1)?);
        points.push(SpherePoint::pole(lambda, -1)?);
        for j in 0..grid {
            for k in 0..grid {
                points.push(SpherePoint::chart(
                    lambda,
                    j as f64 / g,
                    -1.0 + (2 * k + 1) as f64 / g,
                )?);
            }
        }
    }
    let mut fixed = Vec::new();
    let mut min_displacement = f64::INFINITY;
    let mut min_at = None;
    for p in &points {
        let d = cfg.example_apply(1, p)?.dist(p);
        if d <= FIXED_POINT_TOLERANCE {
            fixed.push(*p);
        }
        if d < min_displacement {
            min_displacement = d;
            min_at = Some(*p);
        }
    }
    Ok(FixedPointReport {
        fixed,
        scanned: points.len(),
        min_displacement,
        min_displacement_at: min_at,
        tolerance: FIXED_POINT_TOLERANCE,
    })
}

/// `f₁` applied once.
pub fn f1_apply(cfg: &MapConfig, x: &ChartPoint) -> Result<ChartPoint> {
    cfg.f1_apply(x)
}

pub fn f1_inverse(cfg: &MapConfig, x: &ChartPoint) -> Result<ChartPoint> {
    cfg.f1_inverse(x)
}

pub fn f1_iterate_closed(cfg: &MapConfig, m: i64, x: &ChartPoint) -> Result<ChartPoint> {
    cfg.f1_iterate_closed(m, x)
}

pub fn jacobian_closed(cfg: &MapConfig, m: i64, x: &ChartPoint) -> Result<DMatrix<f64>> {
    cfg.jacobian_closed(m, x)
}

pub fn jacobian_chain(cfg: &MapConfig, m: i64, x: &ChartPoint) -> Result<DMatrix<f64>> {
    cfg.jacobian_chain(m, x)
}

pub fn example_apply(cfg: &MapConfig, m: i64, p: &SpherePoint) -> Result<SpherePoint> {
    cfg.example_apply(m, p)
}

/// Circle distance of the rotation angle from zero, the least displacement any
/// point can have under a map that rotates one circle factor by `α`.
pub fn rotation_displacement(alpha: f64) -> f64 {
    circle_dist(alpha, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::Harmonic;
    use std::f64::consts::TAU;

    fn cfg(f: FourierSeries, alpha: f64, variant: Variant) -> MapConfig {
        MapConfig::new(
            f,
            RotationNumber::explicit(alpha).unwrap(),
            BumpProfile::with_defaults(1).unwrap(),
            variant,
        )
        .unwrap()
    }

    fn golden_cfg(variant: Variant) -> MapConfig {
        let f = FourierSeries::new(
            0.0,
            vec![
                Harmonic { m: 1, a: 0.2, b: 1.0 },
                Harmonic { m: 2, a: -0.3, b: 0.1 },
            ],
        )
        .unwrap();
        MapConfig::new(
            f,
            RotationNumber::named("golden").unwrap(),
            BumpProfile::with_defaults(1).unwrap(),
            variant,
        )
        .unwrap()
    }

    #[test]
    fn apply_on_plateau() {
        let c = cfg(FourierSeries::sin(), 0.25, Variant::Chart);
        let x = ChartPoint::new(0.1, 0.2, vec![0.0]).unwrap();
        let y = c.f1_apply(&x).unwrap();
        assert!((y.phi1.value() - 0.35).abs() < 1e-15);
        let expect = 0.2 + (0.2 * std::f64::consts::PI).sin() - 0.0;
        let expect = expect - expect.floor();
        assert!((y.phi2.value() - expect).abs() < 1e-15);
        assert!((y.phi2.value() - 0.787_785_252_292_473).abs() < 1e-12);
        assert_eq!(y.u, vec![0.0]);
    }

    #[test]
    fn outside_support_is_rotation() {
        let c = cfg(FourierSeries::sin(), 0.25, Variant::Chart);
        let x = ChartPoint::new(0.1, 0.2, vec![0.7]).unwrap();
        let y = c.f1_apply(&x).unwrap();
        assert_eq!(y.phi2.value(), 0.2);
        assert!((y.phi1.value() - 0.35).abs() < 1e-15);
        let z = c.f1_inverse(&x).unwrap();
        assert_eq!(z.phi2.value(), 0.2);
        assert!((z.phi1.value() - 0.85).abs() < 1e-15);
    }

    #[test]
    fn zero_series_rotates() {
        let c = cfg(FourierSeries::zero(), 0.3, Variant::Chart);
        let x = ChartPoint::new(0.5, 0.4, vec![0.1]).unwrap();
        let y = c.f1_apply(&x).unwrap();
        assert!((y.phi1.value() - 0.8).abs() < 1e-15);
        assert_eq!(y.phi2.value(), 0.4);
        let z = c.f1_inverse(&x).unwrap();
        assert!((z.phi1.value() - 0.2).abs() < 1e-15);
        assert_eq!(z.phi2.value(), 0.4);
        for m in [0, 1, 7, -3] {
            let j = c.jacobian_chain(m, &x).unwrap();
            assert_eq!(j, DMatrix::identity(3, 3));
        }
    }

    #[test]
    fn iterate_small_cases() {
        let c = golden_cfg(Variant::Chart);
        let x = ChartPoint::new(0.31, 0.77, vec![0.4]).unwrap();
        assert_eq!(c.f1_iterate_closed(0, &x).unwrap().dist(&x), 0.0);
        assert!(c.f1_iterate_closed(1, &x).unwrap().dist(&c.f1_apply(&x).unwrap()) < 1e-14);
        assert!(c.f1_iterate_closed(-1, &x).unwrap().dist(&c.f1_inverse(&x).unwrap()) < 1e-14);
        assert_eq!(c.jacobian_closed(0, &x).unwrap(), DMatrix::identity(3, 3));
    }

    #[test]
    fn two_step_chain_by_hand() {
        let c = golden_cfg(Variant::Chart);
        let x = ChartPoint::new(0.12, 0.5, vec![0.45]).unwrap();
        let y = c.f1_apply(&x).unwrap();
        let one = |p: &ChartPoint| {
            let a = c.bump.eval(&p.u).unwrap();
            let g = c.bump.grad(&p.u).unwrap()[0];
            let f = c.fourier.eval(p.phi1.value());
            let fp = c.fourier.deriv(p.phi1.value());
            DMatrix::from_row_slice(3, 3, &[1.0, 0.0, 0.0, a * fp, 1.0, g * f, 0.0, 0.0, 1.0])
        };
        let hand = one(&y) * one(&x);
        let closed = c.jacobian_closed(2, &x).unwrap();
        assert!((hand - closed).abs().max() <= 1e-10);
        let j1 = c.jacobian_chain(1, &x).unwrap();
        assert!((j1 - c.jacobian_closed(1, &x).unwrap()).abs().max() <= 1e-14);
    }

    #[test]
    fn chain_guard() {
        let c = golden_cfg(Variant::Chart);
        let x = ChartPoint::new(0.1, 0.1, vec![0.0]).unwrap();
        assert!(matches!(c.jacobian_chain(10_001, &x), Err(Error::CostGuard(_))));
    }

    #[test]
    fn determinant_is_one() {
        let c = golden_cfg(Variant::Chart);
        let x = ChartPoint::new(0.3, 0.9, vec![0.5]).unwrap();
        for m in [-200, -1, 0, 3, 1000] {
            let det = c.jacobian_closed(m, &x).unwrap().determinant();
            assert!((det - 1.0).abs() <= 1e-10, "m = {m}: {det}");
        }
    }

    #[test]
    fn reversed_map_swaps_directions() {
        let c = golden_cfg(Variant::Chart);
        let r = c.inverse();
        let x = ChartPoint::new(0.3, 0.9, vec![0.5]).unwrap();
        assert_eq!(r.f1_apply(&x).unwrap(), c.f1_inverse(&x).unwrap());
        assert_eq!(
            r.jacobian_closed(5, &x).unwrap(),
            c.jacobian_closed(-5, &x).unwrap()
        );
        assert_eq!(r.inverse(), c);
    }

    #[test]
    fn example2_poles_fixed_example1_poles_rotate() {
        let e2 = golden_cfg(Variant::Example2);
        let e1 = golden_cfg(Variant::Example1);
        let p = SpherePoint::pole(0.3, 1).unwrap();
        for m in [-5, 0, 1, 17, 1000] {
            assert_eq!(e2.example_apply(m, &p).unwrap(), p);
        }
        let q = e1.example_apply(1, &p).unwrap();
        let SpherePoint::Pole { lambda, sign } = q else {
            panic!("pole left its branch")
        };
        assert_eq!(sign, 1);
        assert!((lambda.value() - (0.3 + e1.alpha())).abs() < 1e-15);
    }

    #[test]
    fn example_maps_need_example_variant() {
        let c = golden_cfg(Variant::Chart);
        let p = SpherePoint::pole(0.0, -1).unwrap();
        assert!(matches!(c.example_apply(1, &p), Err(Error::Variant(_))));
        assert!(fixed_point_scan(&c, 4).is_err());
    }

    #[test]
    fn example_orbits_match_chart_model() {
        for variant in [Variant::Example1, Variant::Example2] {
            let e = golden_cfg(variant);
            let p = SpherePoint::chart(0.21, 0.64, -0.41).unwrap();
            let x = e.sphere_to_chart(&p).unwrap();
            for m in [-40, -1, 1, 2, 99] {
                let sp = e.example_apply(m, &p).unwrap();
                let cp = e.f1_iterate_closed(m, &x).unwrap();
                assert!(e.sphere_to_chart(&sp).unwrap().dist(&cp) <= 1e-10);
            }
        }
    }

    #[test]
    fn pole_locality_is_pure_rotation() {
        for variant in [Variant::Example1, Variant::Example2] {
            let e = golden_cfg(variant);
            let p = SpherePoint::chart(0.21, 0.64, 0.6).unwrap();
            let q = e.example_apply(1, &p).unwrap();
            let SpherePoint::Chart { lambda, theta, z } = q else {
                panic!()
            };
            let rot = CircleValue::new(e.alpha()).unwrap().value();
            let (l0, t0) = (0.21f64, 0.64f64);
            match variant {
                Variant::Example1 => {
                    assert_eq!(lambda, CircleValue::new(l0 + rot).unwrap());
                    assert_eq!(theta, CircleValue::new(t0).unwrap());
                }
                _ => {
                    assert_eq!(lambda, CircleValue::new(l0).unwrap());
                    assert_eq!(theta, CircleValue::new(t0 + rot).unwrap());
                }
            }
            assert_eq!(z, 0.6);
        }
    }

    #[test]
    fn fixed_points() {
        let e2 = golden_cfg(Variant::Example2);
        let r = fixed_point_scan(&e2, 8).unwrap();
        assert_eq!(r.fixed.len(), 16);
        assert!(r.fixed.iter().all(|p| p.is_pole()));
        let e1 = golden_cfg(Variant::Example1);
        let r = fixed_point_scan(&e1, 8).unwrap();
        assert!(r.fixed.is_empty());
        assert!(r.min_displacement >= rotation_displacement(e1.alpha()) - 1e-10);
        let z2 = cfg(FourierSeries::zero(), 0.3, Variant::Example2);
        let r = fixed_point_scan(&z2, 6).unwrap();
        assert!(r.fixed.iter().all(|p| p.is_pole()));
        assert_eq!(r.fixed.len(), 12);
    }

    #[test]
    fn sphere_point_validation() {
        assert!(SpherePoint::chart(0.1, 0.2, 1.0).is_err());
        assert!(SpherePoint::pole(0.1, 0).is_err());
        assert!(SpherePoint::from_coords(0.1, 0.5, -1.0).unwrap().is_pole());
        assert!(ChartPoint::new(0.0, 0.0, vec![1.0]).is_err());
    }

    #[test]
    fn sheared_row_entries() {
        let c = golden_cfg(Variant::Chart);
        let x = ChartPoint::new(0.05, 0.1, vec![0.0]).unwrap();
        let j = c.jacobian_closed(1, &x).unwrap();
        assert!((j[(1, 0)] - c.fourier.deriv(0.05)).abs() < 1e-12);
        assert_eq!(j[(1, 2)], 0.0);
        let single = cfg(FourierSeries::sin(), 0.25, Variant::Chart);
        let j = single.jacobian_closed(1, &ChartPoint::new(0.0, 0.0, vec![0.0]).unwrap()).unwrap();
        assert!((j[(1, 0)] - TAU).abs() < 1e-12);
    }
}
