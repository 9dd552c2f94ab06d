//! Flux of isotopies on `S¹ × S²` through the cycle `C = {λ₀} × S²`.
//!
//! The volume form is `ω = dλ ∧ dθ ∧ dz / 2` on `λ, θ ∈ [0,1)`, `z ∈ (−1,1)`,
//! so `ω(S¹ × S²) = 1`. The flux of a path `{g_t}` through `C` is the signed
//! `ω`-volume swept by `Φ(t, θ, z) = g_t(λ₀, θ, z)`, i.e. the integral of
//! `det ∂(λ,θ,z)/∂(t,θ,z) / 2` over `[0, t_end] × [0,1) × (−1,1)`. Poles have
//! measure zero and are skipped. Values are reported mod 1.

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use crate::circle::reduce_mod1;
use crate::diffeo::{MapConfig, Variant};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_3d, Axis};

pub const QUADRATURE_TOL: f64 = 1e-10;
const START_PANELS: usize = 8;
const MAX_PANELS: usize = 32;

/// Values within this distance below 1 are reported as 0.
pub const SNAP: f64 = 1e-12;

/// `λ₀` of the cycle; the swept volume does not depend on it.
pub const CYCLE_LAMBDA: f64 = 0.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FluxMethod {
    Analytic,
    Quadrature,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FluxReport {
    pub value_mod1: f64,
    pub method: FluxMethod,
    pub abs_error_estimate: f64,
    pub cycle: String,
    pub raw_value: f64,
    pub analytic_value: Option<f64>,
    pub flagged: bool,
    pub note: Option<String>,
}

pub fn mod1(x: f64) -> f64 {
    let r = reduce_mod1(x);
    if 1.0 - r <= SNAP {
        0.0
    } else {
        r
    }
}

/// Circle distance between two flux values.
pub fn flux_dist(a: f64, b: f64) -> f64 {
    let d = (mod1(a) - mod1(b)).abs();
    d.min(1.0 - d)
}

fn cycle_label() -> String {
    format!("C' = {{lambda = {CYCLE_LAMBDA}}} x (S^2 minus poles)")
}

fn z_axis(cfg: &MapConfig) -> Axis {
    let (p, s) = (cfg.bump.r_plateau(), cfg.bump.r_support());
    Axis::with_breaks(-1.0, 1.0, &[-s, -p, p, s])
}

fn swept(t_end: f64, z: Axis, jac: impl Fn(f64, f64, f64) -> Matrix3<f64> + Sync) -> Result<(f64, f64)> {
    let axes = [Axis::new(0.0, t_end), Axis::new(0.0, 1.0), z];
    let r = integrate_3d(&axes, START_PANELS, MAX_PANELS, QUADRATURE_TOL, |t, th, z| {
        0.5 * jac(t, th, z).determinant()
    })?;
    Ok((r.value, r.abs_error_estimate))
}

fn require(cfg: &MapConfig, v: Variant) -> Result<()> {
    if cfg.variant != v {
        return Err(Error::Variant(format!(
            "expected variant {v:?}, got {:?}",
            cfg.variant
        )));
    }
    Ok(())
}

/// Example 1 along `f_t = (λ + tα, θ + t·A(z)F(λ), z)` for `t ∈ [0, t_end]`.
pub fn flux_example1_path(cfg: &MapConfig, t_end: f64) -> Result<FluxReport> {
    require(cfg, Variant::Example1)?;
    if !t_end.is_finite() || t_end <= 0.0 {
        return Err(Error::NonFinite("t_end"));
    }
    let alpha = cfg.alpha();
    let f = cfg.fourier.eval(CYCLE_LAMBDA);
    let bump = cfg.bump;
    let (raw, err) = swept(t_end, z_axis(cfg), |t, _th, z| {
        let a = bump.radial(z.abs());
        let da = bump.radial_deriv(z.abs()) * z.signum();
        // rows: λ, θ, z; columns: t, θ, z
        Matrix3::new(alpha, 0.0, 0.0, a * f, 1.0, t * da * f, 0.0, 0.0, 1.0)
    })?;
    let analytic = t_end * alpha;
    Ok(FluxReport {
        value_mod1: mod1(raw),
        method: FluxMethod::Quadrature,
        abs_error_estimate: err,
        cycle: cycle_label(),
        raw_value: raw,
        analytic_value: Some(mod1(analytic)),
        flagged: cfg.alpha.is_degenerate(),
        note: cfg
            .alpha
            .is_degenerate()
            .then(|| "rotation number flagged degenerate".to_string()),
    })
}

pub fn flux_example1(cfg: &MapConfig) -> Result<FluxReport> {
    flux_example1_path(cfg, 1.0)
}

/// Example 2 along `f̃_t = (λ + t·A(z)F(θ), θ + tα, z)`. The swept volume is
/// `½∫∫ A(z)F(θ) dθ dz`; it vanishes when `F` has zero mean.
pub fn flux_example2(cfg: &MapConfig) -> Result<FluxReport> {
    require(cfg, Variant::Example2)?;
    let alpha = cfg.alpha();
    let bump = cfg.bump;
    let fourier = &cfg.fourier;
    let (raw, err) = swept(1.0, z_axis(cfg), |t, th, z| {
        let a = bump.radial(z.abs());
        let da = bump.radial_deriv(z.abs()) * z.signum();
        let (f, fp) = (fourier.eval(th), fourier.deriv(th));
        Matrix3::new(a * f, t * a * fp, t * da * f, alpha, 1.0, 0.0, 0.0, 0.0, 1.0)
    })?;
    let zero_mean = cfg.fourier.is_zero_mean();
    Ok(FluxReport {
        value_mod1: mod1(raw),
        method: FluxMethod::Quadrature,
        abs_error_estimate: err,
        cycle: cycle_label(),
        raw_value: raw,
        analytic_value: zero_mean.then_some(0.0),
        flagged: !zero_mean,
        note: (!zero_mean).then(|| {
            format!(
                "F has mean {}; the flux vanishes only when the mean of F over [0,1) is 0",
                cfg.fourier.c0()
            )
        }),
    })
}

/// The loop `γ_t = (λ + t, θ, z)` run for `t ∈ [0, t_end]`.
pub fn generator_loop_flux_path(t_end: f64) -> Result<FluxReport> {
    if !t_end.is_finite() || t_end <= 0.0 {
        return Err(Error::NonFinite("t_end"));
    }
    let (raw, err) = swept(t_end, Axis::new(-1.0, 1.0), |_, _, _| Matrix3::identity())?;
    Ok(FluxReport {
        value_mod1: mod1(raw),
        method: FluxMethod::Quadrature,
        abs_error_estimate: err,
        cycle: cycle_label(),
        raw_value: raw,
        analytic_value: Some(t_end),
        flagged: false,
        note: None,
    })
}

pub fn generator_loop_flux() -> Result<FluxReport> {
    generator_loop_flux_path(1.0)
}

/// `½∫ A(z) dz` from a 1-D rule: the example-2 flux for `F ≡ 1`.
pub fn half_bump_integral(cfg: &MapConfig) -> f64 {
    let z = z_axis(cfg);
    let r = crate::quadrature::Rule::composite(z.lo, z.hi, &z.breakpoints, 64);
    0.5 * r.integrate(|z| cfg.bump.radial(z.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bump::BumpProfile;
    use crate::fourier::{FourierSeries, Harmonic};
    use crate::rotation::RotationNumber;

    fn cfg(f: FourierSeries, alpha: RotationNumber, v: Variant) -> MapConfig {
        MapConfig::new(f, alpha, BumpProfile::with_defaults(1).unwrap(), v).unwrap()
    }

    fn mixed() -> FourierSeries {
        FourierSeries::new(
            0.0,
            vec![
                Harmonic { m: 1, a: 0.4, b: 1.0 },
                Harmonic { m: 5, a: -0.2, b: 0.3 },
            ],
        )
        .unwrap()
    }

    #[test]
    fn example1_quarter() {
        let c = cfg(mixed(), RotationNumber::explicit(0.25).unwrap(), Variant::Example1);
        let r = flux_example1(&c).unwrap();
        assert!((r.value_mod1 - 0.25).abs() < 1e-10);
        assert!(r.flagged);
    }

    #[test]
    fn example1_zero_alpha() {
        let c = cfg(mixed(), RotationNumber::explicit(0.0).unwrap(), Variant::Example1);
        let r = flux_example1(&c).unwrap();
        assert!(flux_dist(r.value_mod1, 0.0) < 1e-12);
    }

    #[test]
    fn example2_zero_mean() {
        let c = cfg(mixed(), RotationNumber::named("golden").unwrap(), Variant::Example2);
        let r = flux_example2(&c).unwrap();
        assert!(flux_dist(r.value_mod1, 0.0) < 1e-8);
        assert!(!r.flagged);
    }

    #[test]
    fn example2_constant_flagged() {
        let c = cfg(
            FourierSeries::constant(1.0).unwrap(),
            RotationNumber::named("golden").unwrap(),
            Variant::Example2,
        );
        let r = flux_example2(&c).unwrap();
        assert!(r.flagged);
        assert!((r.raw_value - half_bump_integral(&c)).abs() < 1e-9);
        assert!(r.value_mod1 > 0.1);
    }

    #[test]
    fn loop_and_half_loop() {
        let r = generator_loop_flux().unwrap();
        assert!((r.raw_value - 1.0).abs() < 1e-12);
        assert_eq!(r.value_mod1, 0.0);
        let h = generator_loop_flux_path(0.5).unwrap();
        assert!((h.raw_value - 0.5).abs() < 1e-12);
    }

    #[test]
    fn variant_checked() {
        let c = cfg(mixed(), RotationNumber::named("golden").unwrap(), Variant::Chart);
        assert!(flux_example1(&c).is_err());
        assert!(flux_example2(&c).is_err());
    }
}
