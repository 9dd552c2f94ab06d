//! The growth sequence `Γₙ = max(max_x ‖d_x fⁿ‖, max_x ‖d_x f⁻ⁿ‖)` with the
//! max-row-sum norm `‖Q‖ = maxᵢ Σⱼ |qᵢⱼ|`, and ratio reports against `Ψ`.
//!
//! The Jacobian of `f₁ᵐ` is the identity except for row 2, whose absolute row
//! sum is `1 + A(u)|W'(m,φ₁)| + S(u)|W(m,φ₁)|` with `S = Σᵢ |∂A/∂uᵢ|`. For a
//! fixed `φ₁` this is linear in `(A, S)` with non-negative weights, so its
//! maximum over the `u`-grid is attained on the upper convex hull of the
//! points `(A(u), S(u))`. The hull is built once; each `n` then costs one scan
//! of the `φ₁` grid times the (small) number of hull vertices.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bump::BumpProfile;
use crate::circle::CircleValue;
use crate::diffeo::{ChartPoint, MapConfig};
use crate::error::{Error, Result};
use crate::psi::PsiSpec;
use crate::weyl::{better, check_grid, default_grid, RootTable, WeylCoefficients};

/// Largest number of `u`-grid points accepted.
pub const MAX_U_POINTS: usize = 1 << 24;

/// `|slope|` of `log(Γₙ/Ψ(n))` against `log n` below which the tail counts as
/// tracking `Ψ`.
pub const SLOPE_THRESHOLD: f64 = 0.25;

/// Largest `sup/inf` of the tail ratios still reported as a band.
pub const BAND_WIDTH: f64 = 1e3;

pub const NORM_LABEL: &str = "max-row-sum";

/// Grid points per phase re-seed in the `Γₙ` kernel.
pub const CHUNK: usize = 1024;

pub fn matrix_norm_maxrow(q: &DMatrix<f64>) -> Result<f64> {
    if q.is_empty() {
        return Err(Error::EmptyMatrix);
    }
    if !q.is_square() {
        return Err(Error::Dimension {
            expected: q.nrows(),
            got: q.ncols(),
        });
    }
    Ok(q.row_iter()
        .map(|r| r.iter().map(|v| v.abs()).sum::<f64>())
        .fold(f64::NEG_INFINITY, f64::max))
}

/// Grid sizes: `phi` points `j/phi` on the circle and `u` cell centres per
/// disc axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub phi: usize,
    pub u: usize,
}

impl GridSpec {
    pub fn for_config(cfg: &MapConfig) -> Self {
        Self {
            phi: default_grid(&cfg.fourier),
            u: default_u_grid(cfg.dim()),
        }
    }

    pub fn validate(&self, cfg: &MapConfig) -> Result<()> {
        check_grid(&cfg.fourier, self.phi)?;
        if self.u == 0 {
            return Err(Error::Grid("u grid must be positive".into()));
        }
        let total = (self.u as f64).powi(cfg.dim() as i32);
        if total > MAX_U_POINTS as f64 {
            return Err(Error::CostGuard(format!(
                "u grid {}^{} exceeds {MAX_U_POINTS} points",
                self.u,
                cfg.dim()
            )));
        }
        Ok(())
    }
}

pub fn default_u_grid(dim: usize) -> usize {
    match dim {
        1 => 512,
        2 => 128,
        _ => 32,
    }
}

/// Cell centres `−1 + (2k+1)/G` of the product grid on `[−1,1]ᵈ` that lie in
/// the open disc, in lexicographic order.
pub fn u_grid_points(dim: usize, per_axis: usize) -> Vec<Vec<f64>> {
    let coord = |k: usize| -1.0 + (2 * k + 1) as f64 / per_axis as f64;
    let total = per_axis.pow(dim as u32);
    let mut out = Vec::new();
    for mut flat in 0..total {
        let mut u = vec![0.0; dim];
        for slot in u.iter_mut().rev() {
            *slot = coord(flat % per_axis);
            flat /= per_axis;
        }
        if u.iter().map(|v| v * v).sum::<f64>() < 1.0 {
            out.push(u);
        }
    }
    out
}

/// Upper-right convex hull of `(A(u), S(u))` over a set of disc points.
#[derive(Debug, Clone)]
pub struct RowWeightHull {
    /// `(A, S, index into the point list)`, `A` decreasing, `S` increasing.
    vertices: Vec<(f64, f64, usize)>,
}

impl RowWeightHull {
    pub fn new(bump: &BumpProfile, points: &[Vec<f64>]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Grid("no disc points".into()));
        }
        let mut w = points
            .iter()
            .enumerate()
            .map(|(i, u)| bump.row_weights(u).map(|(a, s)| (a, s, i)))
            .collect::<Result<Vec<_>>>()?;
        w.sort_by(|x, y| {
            y.0.total_cmp(&x.0)
                .then(y.1.total_cmp(&x.1))
                .then(x.2.cmp(&y.2))
        });
        let mut pareto: Vec<(f64, f64, usize)> = Vec::new();
        for p in w {
            if pareto.last().map_or(true, |l| p.1 > l.1) {
                pareto.push(p);
            }
        }
        let mut hull: Vec<(f64, f64, usize)> = Vec::new();
        for p in pareto {
            while hull.len() >= 2 {
                let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
                let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
                if cross > 0.0 {
                    break;
                }
                hull.pop();
            }
            hull.push(p);
        }
        Ok(Self { vertices: hull })
    }

    pub fn vertices(&self) -> &[(f64, f64, usize)] {
        &self.vertices
    }

    /// `max_v (A_v·|wp| + S_v·|w|)` and the vertex achieving it (first on ties).
    /// Along the hull this is unimodal in `v`, so a binary search suffices.
    #[inline]
    pub fn best(&self, w: f64, wp: f64) -> (f64, usize) {
        let (w, wp) = (w.abs(), wp.abs());
        let v = &self.vertices;
        let val = |k: usize| v[k].0 * wp + v[k].1 * w;
        let (mut lo, mut hi) = (0, v.len() - 1);
        while lo < hi {
            let mid = (lo + hi) / 2;
            if val(mid + 1) > val(mid) {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        (val(lo), lo)
    }

    /// Linear search over all vertices.
    pub fn best_linear(&self, w: f64, wp: f64) -> (f64, usize) {
        let (w, wp) = (w.abs(), wp.abs());
        let mut best = (f64::NEG_INFINITY, 0);
        for (k, v) in self.vertices.iter().enumerate() {
            let val = v.0 * wp + v.1 * w;
            if val > best.0 {
                best = (val, k);
            }
        }
        best
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaResult {
    pub n: u64,
    pub gamma: f64,
    /// Grid point achieving `gamma`; `phi2` is irrelevant and set to 0.
    pub argmax: ChartPoint,
    /// `+1` if the maximum came from `fⁿ`, `−1` from `f⁻ⁿ`.
    pub sign: i8,
}

/// Reusable state for repeated `Γₙ` evaluations on one grid.
pub struct GammaScanner<'a> {
    cfg: &'a MapConfig,
    grid: GridSpec,
    table: RootTable,
    points: Vec<Vec<f64>>,
    hull: RowWeightHull,
}

impl<'a> GammaScanner<'a> {
    pub fn new(cfg: &'a MapConfig, grid: GridSpec) -> Result<Self> {
        grid.validate(cfg)?;
        let points = u_grid_points(cfg.dim(), grid.u);
        Self::with_points(cfg, grid, points)
    }

    /// Restricts the `u`-side maximisation to the given disc points.
    pub fn with_points(cfg: &'a MapConfig, grid: GridSpec, points: Vec<Vec<f64>>) -> Result<Self> {
        check_grid(&cfg.fourier, grid.phi)?;
        let hull = RowWeightHull::new(&cfg.bump, &points)?;
        Ok(Self {
            cfg,
            grid,
            table: RootTable::new(grid.phi),
            points,
            hull,
        })
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    /// Best `(value, j·H + vertex)` for `m` and for `−m` in one pass. Phases
    /// `e^{2πi·q·j/G}` are advanced by multiplication and re-seeded from the
    /// exact table at the start of every chunk of [`CHUNK`] grid points.
    fn scan_pair(&self, m: i64) -> ((f64, usize), (f64, usize)) {
        let fwd = WeylCoefficients::new(&self.cfg.fourier, self.cfg.alpha(), m);
        let inv = WeylCoefficients::new(&self.cfg.fourier, self.cfg.alpha(), -m);
        let g = self.table.len();
        let steps: Vec<usize> = fwd.terms.iter().map(|t| (t.m % g as u64) as usize).collect();
        let h = self.hull.vertices.len();
        let none = (f64::NEG_INFINITY, usize::MAX);
        (0..g.div_ceil(CHUNK))
            .into_par_iter()
            .map(|c| {
                let j0 = c * CHUNK;
                let mut phase: Vec<Complex64> = steps
                    .iter()
                    .map(|&q| self.table.root(((q as u128 * j0 as u128) % g as u128) as usize))
                    .collect();
                let rot: Vec<Complex64> = steps.iter().map(|&q| self.table.root(q)).collect();
                let (mut bf, mut bi) = (none, none);
                for j in j0..(j0 + CHUNK).min(g) {
                    let (mut w1, mut p1) = (fwd.constant, 0.0);
                    let (mut w2, mut p2) = (inv.constant, 0.0);
                    for (k, e) in phase.iter_mut().enumerate() {
                        let (a, b) = (&fwd.terms[k], &inv.terms[k]);
                        w1 += (a.w * *e).re;
                        p1 += (a.wp * *e).re;
                        w2 += (b.w * *e).re;
                        p2 += (b.wp * *e).re;
                        *e *= rot[k];
                    }
                    let (v1, k1) = self.hull.best(w1, p1);
                    let (v2, k2) = self.hull.best(w2, p2);
                    bf = better(bf, (v1, j * h + k1));
                    bi = better(bi, (v2, j * h + k2));
                }
                (bf, bi)
            })
            .reduce(|| (none, none), |a, b| (better(a.0, b.0), better(a.1, b.1)))
    }

    pub fn gamma(&self, n: u64) -> Result<GammaResult> {
        if n == 0 {
            return Err(Error::Grid("Γₙ is defined for n ≥ 1".into()));
        }
        let n_signed = i64::try_from(n).map_err(|_| Error::CostGuard(format!("n = {n}")))?;
        let flip = if self.cfg.reversed { -1 } else { 1 };
        let (fwd, inv) = self.scan_pair(flip * n_signed);
        let (best, sign) = if inv.0 > fwd.0 { (inv, -1) } else { (fwd, 1) };
        let h = self.hull.vertices.len();
        let (j, k) = (best.1 / h, best.1 % h);
        let u = self.points[self.hull.vertices[k].2].clone();
        Ok(GammaResult {
            n,
            gamma: 1.0 + best.0.max(0.0),
            argmax: ChartPoint {
                phi1: CircleValue::wrap(self.table.point(j)),
                phi2: CircleValue::wrap(0.0),
                u,
            },
            sign,
        })
    }
}

pub fn gamma_n(cfg: &MapConfig, n: u64, grid: GridSpec) -> Result<GammaResult> {
    GammaScanner::new(cfg, grid)?.gamma(n)
}

/// Increasing list of `n` values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Schedule {
    List(Vec<u64>),
    Flag(String),
}

impl Default for Schedule {
    fn default() -> Self {
        Schedule::Flag(format!("dyadic:{}", 1u64 << 17))
    }
}

impl Schedule {
    /// `dyadic:<max>` gives `1, 2, 4, …` up to `max`; `list:<n1,n2,…>` is
    /// taken literally; a trailing `;refine:<s1,s2,…>` adds eight evenly spaced
    /// points in `[s/2, 2s]` around each marked scale.
    pub fn parse(s: &str) -> Result<Vec<u64>> {
        let (base, refine) = match s.split_once(";refine:") {
            Some((b, r)) => (b, Some(r)),
            None => (s, None),
        };
        let mut ns = if let Some(max) = base.strip_prefix("dyadic:") {
            let max: u64 = max
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("schedule: bad dyadic bound '{max}'")))?;
            if max == 0 {
                return Err(Error::Config("schedule: dyadic bound must be ≥ 1".into()));
            }
            (0..64).map(|k| 1u64 << k).take_while(|&n| n <= max).collect()
        } else if let Some(list) = base.strip_prefix("list:") {
            parse_list(list)?
        } else {
            return Err(Error::Config(format!(
                "schedule: expected dyadic:<max> or list:<n1,n2,…>, got '{s}'"
            )));
        };
        if let Some(r) = refine {
            for scale in parse_list(r)? {
                ns.extend(refine_around(scale, 8));
            }
            ns.sort_unstable();
            ns.dedup();
        }
        check_schedule(&ns)?;
        Ok(ns)
    }

    pub fn resolve(&self) -> Result<Vec<u64>> {
        match self {
            Schedule::List(v) => {
                check_schedule(v)?;
                Ok(v.clone())
            }
            Schedule::Flag(s) => Self::parse(s),
        }
    }
}

fn parse_list(s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| Error::Config(format!("schedule: bad entry '{t}'")))
        })
        .collect()
}

/// `points` evenly spaced values in `[s/2, 2s]`, rounded.
pub fn refine_around(scale: u64, points: usize) -> Vec<u64> {
    let lo = (scale / 2).max(1) as f64;
    let hi = scale.saturating_mul(2) as f64;
    (0..points)
        .map(|k| (lo + (hi - lo) * k as f64 / (points - 1).max(1) as f64).round() as u64)
        .collect()
}

fn check_schedule(ns: &[u64]) -> Result<()> {
    if ns.is_empty() {
        return Err(Error::Config("schedule is empty".into()));
    }
    if ns[0] == 0 {
        return Err(Error::Config("schedule entries must be ≥ 1".into()));
    }
    if ns.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Config("schedule must be strictly increasing".into()));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthEntry {
    pub n: u64,
    pub gamma: f64,
    pub ratio: f64,
    pub psi: f64,
    pub argmax: ChartPoint,
    pub sign: i8,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthSeries {
    pub entries: Vec<GrowthEntry>,
    pub grid: GridSpec,
    pub schedule: Vec<u64>,
    pub psi: PsiSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Bounded,
    SubPsi,
    Band,
    SuperPsi,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Bounded => "bounded",
            Verdict::SubPsi => "sub-psi",
            Verdict::Band => "band",
            Verdict::SuperPsi => "super-psi",
        }
    }
}

/// JSON summary of a [`GrowthSeries`]. Field order is the emitted key order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub norm: String,
    pub sup_ratio_tail: f64,
    pub inf_ratio_tail: f64,
    pub verdict: Verdict,
    pub tail_slope: Option<f64>,
    pub tail_len: usize,
    pub range: [u64; 2],
    pub scope: String,
    pub psi: String,
    pub grid: GridSpec,
    pub gamma_first: f64,
    pub gamma_last: f64,
    pub degenerate_alpha: bool,
}

impl GrowthSeries {
    /// Entries of the last half of the schedule (rounded up).
    pub fn tail(&self) -> &[GrowthEntry] {
        let len = self.entries.len();
        &self.entries[len / 2..]
    }

    /// Least-squares slope of `log ratio` against `log n` over the tail.
    pub fn tail_slope(&self) -> Option<f64> {
        let tail = self.tail();
        if tail.len() < 2 {
            return None;
        }
        let xs: Vec<f64> = tail.iter().map(|e| (e.n as f64).ln()).collect();
        let ys: Vec<f64> = tail.iter().map(|e| e.ratio.ln()).collect();
        let k = xs.len() as f64;
        let (mx, my) = (xs.iter().sum::<f64>() / k, ys.iter().sum::<f64>() / k);
        let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        (sxx > 0.0).then(|| sxy / sxx)
    }

    pub fn verdict(&self) -> Verdict {
        if self.entries.iter().all(|e| e.gamma == 1.0) {
            return Verdict::Bounded;
        }
        let tail = self.tail();
        let sup = tail.iter().map(|e| e.ratio).fold(f64::NEG_INFINITY, f64::max);
        let inf = tail.iter().map(|e| e.ratio).fold(f64::INFINITY, f64::min);
        let slope = self.tail_slope().unwrap_or(0.0);
        if slope < -SLOPE_THRESHOLD {
            Verdict::SubPsi
        } else if slope > SLOPE_THRESHOLD {
            Verdict::SuperPsi
        } else if sup / inf <= BAND_WIDTH {
            Verdict::Band
        } else if slope > 0.0 {
            Verdict::SuperPsi
        } else {
            Verdict::SubPsi
        }
    }

    pub fn report(&self, degenerate_alpha: bool) -> GrowthReport {
        let tail = self.tail();
        let first = self.entries.first().map_or(f64::NAN, |e| e.gamma);
        let last = self.entries.last().map_or(f64::NAN, |e| e.gamma);
        let lo = self.entries.first().map_or(0, |e| e.n);
        let hi = self.entries.last().map_or(0, |e| e.n);
        GrowthReport {
            norm: NORM_LABEL.into(),
            sup_ratio_tail: tail.iter().map(|e| e.ratio).fold(f64::NEG_INFINITY, f64::max),
            inf_ratio_tail: tail.iter().map(|e| e.ratio).fold(f64::INFINITY, f64::min),
            verdict: self.verdict(),
            tail_slope: self.tail_slope(),
            tail_len: tail.len(),
            range: [lo, hi],
            scope: format!("over tested range n = {lo}..{hi}"),
            psi: self.psi.label(),
            grid: self.grid,
            gamma_first: first,
            gamma_last: last,
            degenerate_alpha,
        }
    }
}

pub fn gamma_series(
    cfg: &MapConfig,
    schedule: &[u64],
    grid: GridSpec,
    psi: &PsiSpec,
) -> Result<GrowthSeries> {
    psi.validate()?;
    check_schedule(schedule)?;
    let scanner = GammaScanner::new(cfg, grid)?;
    let entries = schedule
        .iter()
        .map(|&n| {
            let g = scanner.gamma(n)?;
            let p = psi.eval(n as f64)?;
            Ok(GrowthEntry {
                n,
                gamma: g.gamma,
                ratio: g.gamma / p,
                psi: p,
                argmax: g.argmax,
                sign: g.sign,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GrowthSeries {
        entries,
        grid,
        schedule: schedule.to_vec(),
        psi: psi.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffeo::Variant;
    use crate::fourier::{FourierSeries, Harmonic};
    use crate::rotation::RotationNumber;

    fn map(f: FourierSeries, dim: usize) -> MapConfig {
        MapConfig::new(
            f,
            RotationNumber::named("golden").unwrap(),
            BumpProfile::with_defaults(dim).unwrap(),
            Variant::Chart,
        )
        .unwrap()
    }

    fn mixed() -> FourierSeries {
        FourierSeries::new(
            0.0,
            vec![
                Harmonic { m: 1, a: 0.1, b: 0.8 },
                Harmonic { m: 2, a: -0.2, b: 0.3 },
            ],
        )
        .unwrap()
    }

    // Dense (φ, u) scan through explicit Jacobian matrices.
    fn brute_gamma(cfg: &MapConfig, n: i64, phi: usize, u: usize) -> f64 {
        let pts = u_grid_points(cfg.dim(), u);
        let mut best: f64 = 1.0;
        for j in 0..phi {
            for p in &pts {
                let x = ChartPoint::new(j as f64 / phi as f64, 0.0, p.clone()).unwrap();
                for m in [n, -n] {
                    let q = cfg.jacobian_closed(m, &x).unwrap();
                    best = best.max(matrix_norm_maxrow(&q).unwrap());
                }
            }
        }
        best
    }

    #[test]
    fn maxrow_examples() {
        assert_eq!(matrix_norm_maxrow(&DMatrix::identity(4, 4)).unwrap(), 1.0);
        let q = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 2.0, 1.0]);
        assert_eq!(matrix_norm_maxrow(&q).unwrap(), 3.0);
        let q = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, -2.0, 1.0]);
        assert_eq!(matrix_norm_maxrow(&q).unwrap(), 3.0);
        assert!(matches!(
            matrix_norm_maxrow(&DMatrix::<f64>::zeros(0, 0)),
            Err(Error::EmptyMatrix)
        ));
    }

    #[test]
    fn u_grid_inside_disc() {
        let p = u_grid_points(2, 10);
        assert!(p.iter().all(|u| u[0] * u[0] + u[1] * u[1] < 1.0));
        assert_eq!(u_grid_points(1, 8).len(), 8);
    }

    #[test]
    fn hull_is_monotone_and_convex() {
        let b = BumpProfile::with_defaults(1).unwrap();
        let h = RowWeightHull::new(&b, &u_grid_points(1, 512)).unwrap();
        let v = h.vertices();
        assert!(v.len() >= 2);
        assert_eq!(v[0].0, 1.0);
        for w in v.windows(2) {
            assert!(w[1].0 < w[0].0 && w[1].1 > w[0].1);
        }
    }

    #[test]
    fn hull_matches_all_points() {
        let b = BumpProfile::with_defaults(2).unwrap();
        let pts = u_grid_points(2, 40);
        let h = RowWeightHull::new(&b, &pts).unwrap();
        for (w, wp) in [(1.0, 0.0), (0.0, 1.0), (0.3, 2.0), (5.0, 0.1)] {
            assert_eq!(h.best(w, wp), h.best_linear(w, wp));
            let all = pts
                .iter()
                .map(|u| {
                    let (a, s) = b.row_weights(u).unwrap();
                    a * wp + s * w
                })
                .fold(f64::NEG_INFINITY, f64::max);
            assert_eq!(h.best(w, wp).0, all);
        }
    }

    #[test]
    fn zero_series_gamma_is_one() {
        let c = map(FourierSeries::zero(), 1);
        let g = GridSpec::for_config(&c);
        for n in [1, 7, 1000] {
            assert_eq!(gamma_n(&c, n, g).unwrap().gamma, 1.0);
        }
    }

    #[test]
    fn matches_dense_jacobian_scan() {
        for dim in [1, 2] {
            let c = map(mixed(), dim);
            let grid = GridSpec { phi: 64, u: 24 };
            for n in [1u64, 3, 40] {
                let fast = gamma_n(&c, n, grid).unwrap().gamma;
                let slow = brute_gamma(&c, n as i64, 64, 24);
                assert!((fast - slow).abs() <= 1e-10 * slow, "{dim} {n}: {fast} {slow}");
            }
        }
    }

    #[test]
    fn gamma_one_refined_oracle() {
        let c = map(FourierSeries::sin(), 1);
        let g = GridSpec::for_config(&c);
        let coarse = gamma_n(&c, 1, g).unwrap().gamma;
        let fine = gamma_n(&c, 1, GridSpec { phi: 4 * g.phi, u: 4 * g.u }).unwrap().gamma;
        assert!((coarse - fine).abs() <= 1e-3 * fine);
    }

    #[test]
    fn reversed_is_exactly_symmetric() {
        let c = map(mixed(), 1);
        let g = GridSpec { phi: 4096, u: 256 };
        for n in [1, 5, 77, 1024] {
            assert_eq!(
                gamma_n(&c, n, g).unwrap().gamma,
                gamma_n(&c.inverse(), n, g).unwrap().gamma
            );
        }
    }

    #[test]
    fn outside_support_gives_one() {
        let c = map(mixed(), 1);
        let g = GridSpec { phi: 1024, u: 64 };
        let pts: Vec<Vec<f64>> = u_grid_points(1, 64)
            .into_iter()
            .filter(|u| u[0].abs() >= c.bump.r_support())
            .collect();
        let s = GammaScanner::with_points(&c, g, pts).unwrap();
        for n in [1, 10, 500] {
            assert_eq!(s.gamma(n).unwrap().gamma, 1.0);
        }
    }

    #[test]
    fn argmax_is_grid_point() {
        let c = map(mixed(), 1);
        let g = GridSpec { phi: 512, u: 64 };
        let r = gamma_n(&c, 9, g).unwrap();
        let j = r.argmax.phi1.value() * 512.0;
        assert_eq!(j, j.round());
        let (a, s) = c.bump.row_weights(&r.argmax.u).unwrap();
        let (w, wp) = crate::weyl::weyl_pair_signed(
            &c.fourier,
            c.alpha(),
            9 * r.sign as i64,
            r.argmax.phi1.value(),
        );
        assert!((1.0 + a * wp.abs() + s * w.abs() - r.gamma).abs() < 1e-10 * r.gamma);
    }

    #[test]
    fn schedules() {
        assert_eq!(Schedule::parse("dyadic:8").unwrap(), vec![1, 2, 4, 8]);
        assert_eq!(Schedule::parse("dyadic:10").unwrap(), vec![1, 2, 4, 8]);
        assert_eq!(Schedule::parse("list:3,5,9").unwrap(), vec![3, 5, 9]);
        assert!(Schedule::parse("list:5,3").is_err());
        assert!(Schedule::parse("fib:3").is_err());
        let r = Schedule::parse("dyadic:64;refine:20").unwrap();
        assert!(r.contains(&10) && r.contains(&40) && r.contains(&64));
        assert_eq!(Schedule::default().resolve().unwrap().len(), 18);
    }

    #[test]
    fn verdicts() {
        let psi = PsiSpec::default();
        let zero = map(FourierSeries::zero(), 1);
        let ns = Schedule::parse("dyadic:1024").unwrap();
        let s = gamma_series(&zero, &ns, GridSpec::for_config(&zero), &psi).unwrap();
        assert_eq!(s.verdict(), Verdict::Bounded);
        let gold = map(FourierSeries::sin(), 1);
        let s = gamma_series(&gold, &ns, GridSpec { phi: 4096, u: 128 }, &psi).unwrap();
        assert_eq!(s.verdict(), Verdict::SubPsi);
        let r = s.report(false);
        assert_eq!(r.range, [1, 1024]);
        assert!(r.sup_ratio_tail >= r.inf_ratio_tail);
        assert!(gamma_series(&gold, &ns, GridSpec { phi: 4096, u: 8 }, &PsiSpec::Power { beta: 1.0 })
            .is_err());
    }

    #[test]
    fn coarse_grid_rejected() {
        let c = map(mixed(), 1);
        assert!(gamma_n(&c, 1, GridSpec { phi: 4, u: 8 }).is_err());
        assert!(gamma_n(&c, 1, GridSpec { phi: 64, u: 0 }).is_err());
    }
}
