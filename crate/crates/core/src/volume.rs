//! Monte-Carlo check that a map preserves the chart volume `dφ₁ dφ₂ du`.
//!
//! Points are drawn uniformly in `T² × D`, pushed forward, and binned on a
//! product grid of `n_bins` cells per axis: `φ₁`, `φ₂`, and a third axis that is
//! uniform under the disc measure (`(u+1)/2` for `d = 1`, `|u|ᵈ` otherwise).
//! Each chunk of samples draws from its own ChaCha stream, so counts do not
//! depend on how chunks are scheduled.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bump::norm;
use crate::circle::CircleValue;
use crate::diffeo::{ChartPoint, MapConfig, SpherePoint, Variant};
use crate::error::{Error, Result};

pub const MIN_EXPECTED_PER_BIN: f64 = 20.0;
pub const SIGMA_THRESHOLD: f64 = 4.0;
const CHUNK: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VolumeTestReport {
    pub n_samples: u64,
    pub n_bins: u64,
    pub total_bins: u64,
    pub m: i64,
    pub seed: u64,
    pub expected_per_bin: f64,
    pub max_bin_deviation_sigma: f64,
    pub worst_bin: [u64; 3],
    pub threshold_sigma: f64,
    pub within_threshold: bool,
}

fn sample_point(rng: &mut ChaCha8Rng, dim: usize) -> ChartPoint {
    let phi1 = CircleValue::wrap(rng.random::<f64>());
    let phi2 = CircleValue::wrap(rng.random::<f64>());
    let u = if dim == 1 {
        loop {
            let v = 2.0 * rng.random::<f64>() - 1.0;
            if v > -1.0 {
                break vec![v];
            }
        }
    } else {
        loop {
            let g: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
            let n = norm(&g);
            if n == 0.0 {
                continue;
            }
            let r = rng.random::<f64>().powf(1.0 / dim as f64);
            let u: Vec<f64> = g.iter().map(|x| r * x / n).collect();
            if norm(&u) < 1.0 {
                break u;
            }
        }
    };
    ChartPoint { phi1, phi2, u }
}

fn bin_index(p: &ChartPoint, bins: usize) -> [usize; 3] {
    let d = p.u.len();
    let third = if d == 1 {
        0.5 * (p.u[0] + 1.0)
    } else {
        norm(&p.u).powi(d as i32)
    };
    let cell = |v: f64| ((v * bins as f64) as usize).min(bins - 1);
    [cell(p.phi1.value()), cell(p.phi2.value()), cell(third)]
}

/// Runs the binned test for an arbitrary map of the chart into itself.
pub fn volume_test_with<F>(
    dim: usize,
    map: F,
    m: i64,
    n_samples: u64,
    n_bins: u64,
    seed: u64,
) -> Result<VolumeTestReport>
where
    F: Fn(&ChartPoint) -> Result<ChartPoint> + Sync,
{
    if n_bins == 0 || dim == 0 {
        return Err(Error::Sampling("need at least one bin and d ≥ 1".into()));
    }
    let bins = usize::try_from(n_bins).map_err(|_| Error::Sampling("n_bins".into()))?;
    let total = bins
        .checked_pow(3)
        .ok_or_else(|| Error::Sampling(format!("{n_bins}^3 bins")))?;
    let expected = n_samples as f64 / total as f64;
    if expected < MIN_EXPECTED_PER_BIN {
        return Err(Error::Sampling(format!(
            "expected {expected:.3} samples per bin, need at least {MIN_EXPECTED_PER_BIN}"
        )));
    }
    let n = n_samples as usize;
    let chunks = n.div_ceil(CHUNK);
    let counts = (0..chunks)
        .into_par_iter()
        .map(|c| -> Result<Vec<u64>> {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let mut h = vec![0u64; total];
            for _ in 0..CHUNK.min(n - c * CHUNK) {
                let p = sample_point(&mut rng, dim);
                let q = map(&p)?;
                let [i, j, k] = bin_index(&q, bins);
                h[(i * bins + j) * bins + k] += 1;
            }
            Ok(h)
        })
        .try_reduce(
            || vec![0u64; total],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                Ok(a)
            },
        )?;
    let p = 1.0 / total as f64;
    let sigma = (n_samples as f64 * p * (1.0 - p)).sqrt();
    let mut worst = (f64::NEG_INFINITY, 0usize);
    for (idx, &c) in counts.iter().enumerate() {
        let dev = (c as f64 - expected).abs() / sigma;
        if dev > worst.0 {
            worst = (dev, idx);
        }
    }
    let (i, j, k) = (worst.1 / (bins * bins), (worst.1 / bins) % bins, worst.1 % bins);
    Ok(VolumeTestReport {
        n_samples,
        n_bins,
        total_bins: total as u64,
        m,
        seed,
        expected_per_bin: expected,
        max_bin_deviation_sigma: worst.0,
        worst_bin: [i as u64, j as u64, k as u64],
        threshold_sigma: SIGMA_THRESHOLD,
        within_threshold: worst.0 <= SIGMA_THRESHOLD,
    })
}

/// The `m`-th iterate of `cfg`. Example variants go through the sphere maps
/// with `(λ, θ, z) = (φ₁, φ₂, u)`.
pub fn volume_pushforward_test(
    cfg: &MapConfig,
    m: i64,
    n_samples: u64,
    n_bins: u64,
    seed: u64,
) -> Result<VolumeTestReport> {
    let map = |p: &ChartPoint| -> Result<ChartPoint> {
        match cfg.variant {
            Variant::Chart => cfg.f1_iterate_closed(m, p),
            _ => {
                let s = SpherePoint::Chart {
                    lambda: p.phi1,
                    theta: p.phi2,
                    z: p.u[0],
                };
                match cfg.example_apply(m, &s)? {
                    SpherePoint::Chart { lambda, theta, z } => Ok(ChartPoint {
                        phi1: lambda,
                        phi2: theta,
                        u: vec![z],
                    }),
                    SpherePoint::Pole { .. } => Err(Error::Variant("chart point mapped to a pole".into())),
                }
            }
        }
    };
    volume_test_with(cfg.dim(), map, m, n_samples, n_bins, seed)
}

/// Test fixture: the `m`-th iterate followed by `φ₂ ↦ 1.1·φ₂ (mod 1)`, which
/// has Jacobian determinant 1.1.
pub fn broken_volume_test(
    cfg: &MapConfig,
    m: i64,
    n_samples: u64,
    n_bins: u64,
    seed: u64,
) -> Result<VolumeTestReport> {
    let map = |p: &ChartPoint| -> Result<ChartPoint> {
        let mut q = cfg.f1_iterate_closed(m, p)?;
        q.phi2 = CircleValue::wrap(1.1 * q.phi2.value());
        Ok(q)
    };
    volume_test_with(cfg.dim(), map, m, n_samples, n_bins, seed)
}
