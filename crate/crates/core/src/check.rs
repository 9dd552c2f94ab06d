//! Invariant suite run by `slowdiff check`.
//!
//! Every check draws its random cases from a ChaCha stream seeded by the run
//! seed, so a report is reproducible.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bump::BumpProfile;
use crate::config::RunConfig;
use crate::diffeo::{fixed_point_scan, rotation_displacement, ChartPoint, MapConfig, Variant};
use crate::error::Result;
use crate::flux::{flux_dist, flux_example1, flux_example2, generator_loop_flux};
use crate::fourier::FourierSeries;
use crate::growth::{GammaScanner, GridSpec};
use crate::volume::{broken_volume_test, volume_pushforward_test};
use crate::weyl::{
    scan_with_table, weyl_deriv, weyl_deriv_direct, weyl_sum_closed, weyl_sum_direct,
    weyl_sum_signed, RootTable,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

struct Suite {
    rng: ChaCha8Rng,
    checks: Vec<CheckResult>,
}

impl Suite {
    fn record(&mut self, name: &str, r: Result<(bool, String)>) {
        let (passed, detail) = r.unwrap_or_else(|e| (false, format!("error: {e}")));
        self.checks.push(CheckResult {
            name: name.into(),
            passed,
            detail,
        });
    }

    fn point(&mut self, dim: usize) -> ChartPoint {
        loop {
            let u: Vec<f64> = (0..dim).map(|_| self.rng.random_range(-1.0..1.0)).collect();
            if let Ok(p) = ChartPoint::new(self.rng.random(), self.rng.random(), u) {
                return p;
            }
        }
    }
}

fn with_variant(map: &MapConfig, variant: Variant) -> Result<MapConfig> {
    let bump = BumpProfile::new(1, map.bump.r_plateau(), map.bump.r_support())?;
    MapConfig::new(map.fourier.clone(), map.alpha.clone(), bump, variant)
}

pub fn run_checks(cfg: &RunConfig) -> CheckReport {
    let mut s = Suite {
        rng: ChaCha8Rng::seed_from_u64(cfg.seed),
        checks: Vec::new(),
    };
    let map = &cfg.map;
    let f = &map.fourier;
    let alpha = map.alpha();
    let l1: f64 = f.c0().abs() + f.harmonics().iter().map(|h| h.a.abs() + h.b.abs()).sum::<f64>();

    s.record("convergents", Ok((map.alpha.convergents_valid(), format!(
        "{} convergents, degenerate = {}",
        map.alpha.convergents().len(),
        map.alpha.is_degenerate()
    ))));

    let cases: Vec<(u64, f64)> = (0..200)
        .map(|_| (s.rng.random_range(0..=10_000), s.rng.random()))
        .collect();
    let mut worst = 0.0f64;
    let mut ok = true;
    for &(n, x) in &cases {
        let tol = 1e-9 * (n as f64).max(1.0) * l1.max(1e-300);
        let e = (weyl_sum_closed(f, alpha, n, x) - weyl_sum_direct(f, alpha, n, x)).abs();
        let ed = (weyl_deriv(f, alpha, n, x) - weyl_deriv_direct(f, alpha, n, x)).abs();
        let tol_d = tol * std::f64::consts::TAU * f.max_harmonic().max(1) as f64;
        ok &= e <= tol && ed <= tol_d;
        worst = worst.max(e / tol);
    }
    s.record("weyl_closed_vs_direct", Ok((ok, format!("worst error / tolerance = {worst:.3e}"))));

    let mut worst = 0.0f64;
    for _ in 0..200 {
        let (n, m): (i64, i64) = (s.rng.random_range(0..=1000), s.rng.random_range(0..=1000));
        let x: f64 = s.rng.random();
        let lhs = weyl_sum_signed(f, alpha, n + m, x);
        let rhs = weyl_sum_signed(f, alpha, n, x)
            + weyl_sum_signed(f, alpha, m, x + crate::circle::mul_mod1(n as f64, alpha));
        worst = worst.max((lhs - rhs).abs());
    }
    s.record("weyl_cocycle", Ok((worst <= 1e-8, format!("max deviation {worst:.3e}"))));

    if f.is_zero_mean() {
        let table = RootTable::new(cfg.grids.phi_grid);
        let mut ok = true;
        let mut detail = "N = 1, 2, 4, …, 1024 within slack".to_string();
        for k in 0..=10 {
            let n = 1i64 << k;
            let r = scan_with_table(f, alpha, n, &table);
            let slack = std::f64::consts::TAU * f.max_harmonic() as f64 * n as f64 / table.len() as f64;
            if r.max_abs_w > r.max_abs_wprime + slack {
                ok = false;
                detail = format!("N = {n}: max|W| = {} > max|W'| = {}", r.max_abs_w, r.max_abs_wprime);
            }
        }
        s.record("weyl_w_below_wprime", Ok((ok, detail)));
    }

    let d = map.dim();
    let pts: Vec<ChartPoint> = (0..20).map(|_| s.point(d)).collect();
    let r = (|| {
        let mut worst = 0.0f64;
        for p in &pts {
            let mut y = p.clone();
            for m in 1..=200i64 {
                y = map.f1_apply(&y)?;
                if m % 50 == 0 {
                    worst = worst.max(map.f1_iterate_closed(m, p)?.dist(&y));
                }
            }
            let back = map.f1_inverse(&map.f1_apply(p)?)?;
            worst = worst.max(back.dist(p));
        }
        Ok((worst <= 1e-8, format!("max circle distance {worst:.3e}")))
    })();
    s.record("iterate_vs_composition", r);

    let ms: Vec<i64> = (0..20).map(|_| s.rng.random_range(-500..=500)).collect();
    let r = (|| {
        let mut worst_det = 0.0f64;
        let mut worst_group = 0.0f64;
        for (p, &m) in pts.iter().zip(&ms) {
            let det = map.jacobian_closed(m, p)?.determinant();
            worst_det = worst_det.max((det - 1.0).abs());
            let k = ms[(m.unsigned_abs() as usize) % ms.len()];
            let two = map.f1_iterate_closed(m, &map.f1_iterate_closed(k, p)?)?;
            worst_group = worst_group.max(two.dist(&map.f1_iterate_closed(m + k, p)?));
        }
        Ok((
            worst_det <= 1e-10 && worst_group <= 1e-8,
            format!("|det - 1| <= {worst_det:.3e}, group law deviation {worst_group:.3e}"),
        ))
    })();
    s.record("determinant_and_group_law", r);

    let r = (|| {
        let mut worst = 0.0f64;
        for (i, p) in pts.iter().enumerate() {
            let m = (i as i64 % 50) + 1;
            let m = if i % 2 == 0 { m } else { -m };
            let a = map.jacobian_closed(m, p)?;
            let b = map.jacobian_chain(m, p)?;
            for (x, y) in a.iter().zip(b.iter()) {
                worst = worst.max((x - y).abs() / x.abs().max(1.0));
            }
        }
        Ok((worst <= 1e-7, format!("max relative entry error {worst:.3e}")))
    })();
    s.record("jacobian_chain_vs_closed", r);

    let r = (|| {
        let grid = GridSpec {
            phi: cfg.grids.phi_grid,
            u: cfg.grids.u_grid,
        };
        let sc = GammaScanner::new(map, grid)?;
        let inv = map.inverse();
        let si = GammaScanner::new(&inv, grid)?;
        let mut ok = true;
        let mut detail = "gamma >= 1 and inverse-symmetric at n = 1, 2, 16, 128, 1024; zero series gives 1".to_string();
        for n in [1u64, 2, 16, 128, 1024] {
            let (a, b) = (sc.gamma(n)?.gamma, si.gamma(n)?.gamma);
            if a < 1.0 || a != b {
                ok = false;
                detail = format!("n = {n}: gamma {a}, inverse {b}");
            }
        }
        let zero = MapConfig::new(FourierSeries::zero(), map.alpha.clone(), map.bump, map.variant)?;
        let gz = GammaScanner::new(&zero, GridSpec { phi: 4096, u: grid.u })?.gamma(1000)?.gamma;
        if gz != 1.0 {
            ok = false;
            detail = format!("zero series gives gamma {gz}");
        }
        Ok((ok, detail))
    })();
    s.record("growth_sanity", r);

    if d == 1 || map.variant != Variant::Chart {
        let r = (|| {
            let e1 = with_variant(map, Variant::Example1)?;
            let e2 = with_variant(map, Variant::Example2)?;
            let a = flux_example1(&e1)?;
            let b = flux_example2(&e2)?;
            let l = generator_loop_flux()?;
            let ok1 = flux_dist(a.value_mod1, alpha) <= 1e-6;
            let ok2 = !f.is_zero_mean() || flux_dist(b.value_mod1, 0.0) <= 1e-8;
            let ok3 = (l.raw_value - 1.0).abs() <= 1e-8;
            Ok((
                ok1 && ok2 && ok3 && (f.is_zero_mean() != b.flagged),
                format!(
                    "example1 {} (alpha {alpha}), example2 {}, loop {}",
                    a.value_mod1, b.value_mod1, l.raw_value
                ),
            ))
        })();
        s.record("flux", r);

        let r = (|| {
            let e1 = with_variant(map, Variant::Example1)?;
            let e2 = with_variant(map, Variant::Example2)?;
            let g = cfg.grids.sphere_grid.min(16);
            let r1 = fixed_point_scan(&e1, g)?;
            let r2 = fixed_point_scan(&e2, g)?;
            let poles = r2.fixed.iter().filter(|p| p.is_pole()).count();
            let alpha_moves = rotation_displacement(alpha) > crate::diffeo::FIXED_POINT_TOLERANCE;
            let ok1 = !alpha_moves
                || (r1.fixed.is_empty()
                    && r1.min_displacement >= rotation_displacement(alpha) - 1e-10);
            Ok((
                ok1 && poles == 2 * g,
                format!(
                    "example1: {} fixed, min displacement {:.6}; example2: {poles} pole points fixed",
                    r1.fixed.len(),
                    r1.min_displacement
                ),
            ))
        })();
        s.record("fixed_points", r);
    }

    let r = (|| {
        let real = volume_pushforward_test(map, 100, 200_000, 8, cfg.seed)?;
        let broken = broken_volume_test(map, 100, 200_000, 8, cfg.seed)?;
        Ok((
            real.within_threshold && !broken.within_threshold,
            format!(
                "real map {:.2} sigma, broken fixture {:.2} sigma",
                real.max_bin_deviation_sigma, broken.max_bin_deviation_sigma
            ),
        ))
    })();
    s.record("volume", r);

    CheckReport {
        passed: s.checks.iter().all(|c| c.passed),
        checks: s.checks,
    }
}
