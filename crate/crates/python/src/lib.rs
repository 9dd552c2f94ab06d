//! Python bindings for `slowdiff-core`.
//!
//! Reports come back as plain dicts (via their JSON form); map values are
//! immutable wrappers.

use nalgebra::DMatrix;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;

use slowdiff_core as core;
use slowdiff_core::{ChartPoint, Harmonic};

fn err(e: core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<T: Serialize>(py: Python<'_>, v: &T) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(v).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

#[pyclass(frozen, from_py_object, module = "slowdiff")]
#[derive(Clone)]
struct FourierSeries(core::FourierSeries);

#[pymethods]
impl FourierSeries {
    /// `harmonics` is a list of `(m, a, b)` for `a cos 2πmx + b sin 2πmx`.
    #[new]
    #[pyo3(signature = (harmonics, c0 = 0.0))]
    fn new(harmonics: Vec<(u64, f64, f64)>, c0: f64) -> PyResult<Self> {
        let hs = harmonics.into_iter().map(|(m, a, b)| Harmonic { m, a, b }).collect();
        core::FourierSeries::new(c0, hs).map(Self).map_err(err)
    }

    #[staticmethod]
    fn sin() -> Self {
        Self(core::FourierSeries::sin())
    }

    #[staticmethod]
    fn zero() -> Self {
        Self(core::FourierSeries::zero())
    }

    fn __call__(&self, x: f64) -> f64 {
        self.0.eval(x)
    }

    fn deriv(&self, x: f64) -> f64 {
        self.0.deriv(x)
    }

    #[getter]
    fn c0(&self) -> f64 {
        self.0.c0()
    }

    #[getter]
    fn harmonics(&self) -> Vec<(u64, f64, f64)> {
        self.0.harmonics().iter().map(|h| (h.m, h.a, h.b)).collect()
    }

    fn __repr__(&self) -> String {
        format!("FourierSeries(c0={}, harmonics={:?})", self.0.c0(), self.harmonics())
    }
}

#[pyclass(frozen, from_py_object, module = "slowdiff")]
#[derive(Clone)]
struct RotationNumber(core::RotationNumber);

#[pymethods]
impl RotationNumber {
    #[new]
    fn new(alpha: f64) -> PyResult<Self> {
        core::RotationNumber::explicit(alpha).map(Self).map_err(err)
    }

    /// `golden`, `silver`, `bronze`, `sqrt2`, `sqrt3`, ...
    #[staticmethod]
    fn named(name: &str) -> PyResult<Self> {
        core::RotationNumber::named(name).map(Self).map_err(err)
    }

    #[staticmethod]
    fn liouville(base: u32, depth: u32) -> PyResult<Self> {
        core::RotationNumber::liouville(base, depth).map(Self).map_err(err)
    }

    #[getter]
    fn value(&self) -> f64 {
        self.0.value()
    }

    #[getter]
    fn partial_quotients(&self) -> Vec<u128> {
        self.0.partial_quotients().to_vec()
    }

    fn is_degenerate(&self) -> bool {
        self.0.is_degenerate()
    }

    fn __float__(&self) -> f64 {
        self.0.value()
    }

    fn __repr__(&self) -> String {
        format!("RotationNumber({})", self.0.value())
    }
}

#[pyclass(frozen, from_py_object, module = "slowdiff")]
#[derive(Clone)]
struct BumpProfile(core::BumpProfile);

#[pymethods]
impl BumpProfile {
    #[new]
    #[pyo3(signature = (dim = 1, r_plateau = None, r_support = None))]
    fn new(dim: usize, r_plateau: Option<f64>, r_support: Option<f64>) -> PyResult<Self> {
        let b = match (r_plateau, r_support) {
            (None, None) => core::BumpProfile::with_defaults(dim),
            (p, s) => {
                let d = core::BumpProfile::with_defaults(dim).map_err(err)?;
                core::BumpProfile::new(dim, p.unwrap_or(d.r_plateau()), s.unwrap_or(d.r_support()))
            }
        };
        b.map(Self).map_err(err)
    }

    fn __call__(&self, u: Vec<f64>) -> PyResult<f64> {
        self.0.eval(&u).map_err(err)
    }

    fn grad(&self, u: Vec<f64>) -> PyResult<Vec<f64>> {
        self.0.grad(&u).map_err(err)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }
}

#[pyclass(frozen, from_py_object, module = "slowdiff")]
#[derive(Clone)]
struct MapConfig(core::MapConfig);

#[pymethods]
impl MapConfig {
    /// `variant` is `chart`, `example1` or `example2`.
    #[new]
    #[pyo3(signature = (fourier, alpha, bump, variant = "chart"))]
    fn new(fourier: &FourierSeries, alpha: &RotationNumber, bump: &BumpProfile, variant: &str) -> PyResult<Self> {
        let v = variant.parse().map_err(err)?;
        core::MapConfig::new(fourier.0.clone(), alpha.0.clone(), bump.0.clone(), v)
            .map(Self)
            .map_err(err)
    }

    fn inverse(&self) -> Self {
        Self(self.0.inverse())
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    /// `fᵐ(φ₁, φ₂, u)` for any integer `m`.
    fn iterate(&self, m: i64, phi1: f64, phi2: f64, u: Vec<f64>) -> PyResult<(f64, f64, Vec<f64>)> {
        let p = ChartPoint::new(phi1, phi2, u).map_err(err)?;
        let q = self.0.f1_iterate_closed(m, &p).map_err(err)?;
        Ok((q.phi1.value(), q.phi2.value(), q.u))
    }

    /// Row-major Jacobian of `fᵐ`.
    fn jacobian(&self, m: i64, phi1: f64, phi2: f64, u: Vec<f64>) -> PyResult<Vec<Vec<f64>>> {
        let p = ChartPoint::new(phi1, phi2, u).map_err(err)?;
        let j = self.0.jacobian_closed(m, &p).map_err(err)?;
        Ok(j.row_iter().map(|r| r.iter().copied().collect()).collect())
    }

    /// `fᵐ` on `S¹ × S²`; `z = ±1` is a pole.
    #[pyo3(signature = (lam, theta, z, m = 1))]
    fn apply(&self, lam: f64, theta: f64, z: f64, m: i64) -> PyResult<(f64, Option<f64>, f64)> {
        let p = core::SpherePoint::from_coords(lam, theta, z).map_err(err)?;
        let q = self.0.example_apply(m, &p).map_err(err)?;
        Ok(match q {
            core::SpherePoint::Chart { lambda, theta, z } => (lambda.value(), Some(theta.value()), z),
            core::SpherePoint::Pole { lambda, sign } => (lambda.value(), None, f64::from(sign)),
        })
    }
}

fn pick_grid(cfg: &core::MapConfig, phi_grid: Option<usize>, u_grid: Option<usize>) -> core::GridSpec {
    let d = core::GridSpec::for_config(cfg);
    core::GridSpec { phi: phi_grid.unwrap_or(d.phi), u: u_grid.unwrap_or(d.u) }
}

/// `(W(n, x), W'(n, x))`; negative `n` uses the cocycle extension.
#[pyfunction]
fn weyl(f: &FourierSeries, alpha: f64, n: i64, x: f64) -> (f64, f64) {
    core::weyl::weyl_pair_signed(&f.0, alpha, n, x)
}

#[pyfunction]
#[pyo3(signature = (f, alpha, n, grid = None))]
fn weyl_extrema(py: Python<'_>, f: &FourierSeries, alpha: &RotationNumber, n: u64, grid: Option<usize>) -> PyResult<Py<PyAny>> {
    let g = grid.unwrap_or_else(|| core::weyl::default_grid(&f.0));
    let r = core::weyl::weyl_extrema(&f.0, &alpha.0, n, g).map_err(err)?;
    to_py(py, &r)
}

#[pyfunction]
#[pyo3(signature = (cfg, n, phi_grid = None, u_grid = None))]
fn gamma(cfg: &MapConfig, n: u64, phi_grid: Option<usize>, u_grid: Option<usize>) -> PyResult<f64> {
    let g = pick_grid(&cfg.0, phi_grid, u_grid);
    core::growth::gamma_n(&cfg.0, n, g).map(|r| r.gamma).map_err(err)
}

/// Growth series and report over a list of `n` or a schedule string.
#[pyfunction]
#[pyo3(signature = (cfg, schedule = "dyadic:4096", psi = "power:0.5", phi_grid = None, u_grid = None))]
fn growth(
    py: Python<'_>,
    cfg: &MapConfig,
    schedule: &str,
    psi: &str,
    phi_grid: Option<usize>,
    u_grid: Option<usize>,
) -> PyResult<Py<PyAny>> {
    let ns = core::growth::Schedule::parse(schedule).map_err(err)?;
    let psi = core::PsiSpec::parse_flag(psi).map_err(err)?;
    let g = pick_grid(&cfg.0, phi_grid, u_grid);
    let s = core::growth::gamma_series(&cfg.0, &ns, g, &psi).map_err(err)?;
    let report = s.report(cfg.0.alpha.is_degenerate());
    let out = serde_json::json!({ "entries": s.entries, "report": report });
    to_py(py, &out)
}

/// `variant` is `example1`, `example2` or `loop` (`cfg` is ignored for `loop`).
#[pyfunction]
#[pyo3(signature = (variant, cfg = None))]
fn flux(py: Python<'_>, variant: &str, cfg: Option<&MapConfig>) -> PyResult<Py<PyAny>> {
    let need = || cfg.map(|c| &c.0).ok_or_else(|| PyValueError::new_err("this variant needs a MapConfig"));
    let r = match variant {
        "example1" => core::flux::flux_example1(need()?),
        "example2" => core::flux::flux_example2(need()?),
        "loop" => core::flux::generator_loop_flux(),
        other => return Err(PyValueError::new_err(format!("unknown flux variant {other:?}"))),
    }
    .map_err(err)?;
    to_py(py, &r)
}

#[pyfunction]
#[pyo3(signature = (cfg, m = 100, samples = 1_000_000, bins = 16, seed = 0, broken = false))]
fn volume(py: Python<'_>, cfg: &MapConfig, m: i64, samples: u64, bins: u64, seed: u64, broken: bool) -> PyResult<Py<PyAny>> {
    let r = if broken {
        core::volume::broken_volume_test(&cfg.0, m, samples, bins, seed)
    } else {
        core::volume::volume_pushforward_test(&cfg.0, m, samples, bins, seed)
    }
    .map_err(err)?;
    to_py(py, &r)
}

/// Resonant `(F, α, denominators)` tuned to `psi`.
#[pyfunction]
#[pyo3(signature = (psi = "power:0.5", depth = 4, n_max = 131072))]
fn resonant_pair(psi: &str, depth: usize, n_max: u64) -> PyResult<(FourierSeries, RotationNumber, Vec<u64>)> {
    let psi = core::PsiSpec::parse_flag(psi).map_err(err)?;
    let r = core::resonant::resonant_pair(&psi, depth, n_max).map_err(err)?;
    Ok((FourierSeries(r.fourier), RotationNumber(r.alpha), r.denominators))
}

/// Max absolute row sum.
#[pyfunction]
fn norm(rows: Vec<Vec<f64>>) -> PyResult<f64> {
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != m) {
        return Err(PyValueError::new_err("ragged matrix"));
    }
    let q = DMatrix::from_fn(n, m, |i, j| rows[i][j]);
    core::growth::matrix_norm_maxrow(&q).map_err(err)
}

#[pymodule]
fn slowdiff(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<FourierSeries>()?;
    m.add_class::<RotationNumber>()?;
    m.add_class::<BumpProfile>()?;
    m.add_class::<MapConfig>()?;
    m.add_function(wrap_pyfunction!(weyl, m)?)?;
    m.add_function(wrap_pyfunction!(weyl_extrema, m)?)?;
    m.add_function(wrap_pyfunction!(gamma, m)?)?;
    m.add_function(wrap_pyfunction!(growth, m)?)?;
    m.add_function(wrap_pyfunction!(flux, m)?)?;
    m.add_function(wrap_pyfunction!(volume, m)?)?;
    m.add_function(wrap_pyfunction!(resonant_pair, m)?)?;
    m.add_function(wrap_pyfunction!(norm, m)?)?;
    Ok(())
}
