//! Composite Gauss–Legendre rules and a tensor-product integrator that doubles
//! the panel count until successive values agree.

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Nodes per panel.
pub const PANEL_ORDER: usize = 8;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[−1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

// P_n(x) and P_n'(x) by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// A 1-D rule: nodes and weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    /// `panels` equal panels on each segment between consecutive breakpoints
    /// of `[a, b]`; breakpoints outside `(a, b)` are ignored.
    pub fn composite(a: f64, b: f64, breakpoints: &[f64], panels: usize) -> Self {
        let (gx, gw) = gauss_legendre(PANEL_ORDER);
        let mut cuts = vec![a];
        let mut inner: Vec<f64> = breakpoints.iter().copied().filter(|&c| a < c && c < b).collect();
        inner.sort_by(f64::total_cmp);
        inner.dedup();
        cuts.extend(inner);
        cuts.push(b);
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for seg in cuts.windows(2) {
            let h = (seg[1] - seg[0]) / panels as f64;
            for p in 0..panels {
                let lo = seg[0] + p as f64 * h;
                for (x, w) in gx.iter().zip(&gw) {
                    nodes.push(lo + 0.5 * h * (x + 1.0));
                    weights.push(0.5 * h * w);
                }
            }
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// Integration box along one axis.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub breakpoints: Vec<f64>,
}

impl Axis {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self {
            lo,
            hi,
            breakpoints: Vec::new(),
        }
    }

    pub fn with_breaks(lo: f64, hi: f64, breakpoints: &[f64]) -> Self {
        Self {
            lo,
            hi,
            breakpoints: breakpoints.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub nodes_per_axis: [usize; 3],
}

/// Tensor-product rule over three axes. Starts from `PANEL_ORDER·start_panels`
/// nodes per segment and doubles until two successive values differ by at
/// most `tol` or `max_panels` is reached. Sums are taken in a fixed order.
pub fn integrate_3d(
    axes: &[Axis; 3],
    start_panels: usize,
    max_panels: usize,
    tol: f64,
    f: impl Fn(f64, f64, f64) -> f64 + Sync,
) -> Result<Integral> {
    if start_panels == 0 || max_panels < start_panels {
        return Err(Error::Grid("quadrature panel counts".into()));
    }
    let eval = |panels: usize| {
        let r: Vec<Rule> = axes
            .iter()
            .map(|a| Rule::composite(a.lo, a.hi, &a.breakpoints, panels))
            .collect();
        let v: f64 = r[0]
            .nodes
            .par_iter()
            .zip(&r[0].weights)
            .map(|(&x, &wx)| {
                let mut s = 0.0;
                for (&y, &wy) in r[1].nodes.iter().zip(&r[1].weights) {
                    let mut t = 0.0;
                    for (&z, &wz) in r[2].nodes.iter().zip(&r[2].weights) {
                        t += wz * f(x, y, z);
                    }
                    s += wy * t;
                }
                wx * s
            })
            .collect::<Vec<f64>>()
            .into_iter()
            .sum();
        (v, [r[0].len(), r[1].len(), r[2].len()])
    };
    let mut panels = start_panels;
    let (mut prev, _) = eval(panels);
    loop {
        panels *= 2;
        let (cur, sizes) = eval(panels);
        let err = (cur - prev).abs();
        if err <= tol || panels * 2 > max_panels {
            return Ok(Integral {
                value: cur,
                abs_error_estimate: err,
                nodes_per_axis: sizes,
            });
        }
        prev = cur;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nodes_and_weights() {
        let (x, w) = gauss_legendre(2);
        assert!((x[1] - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        assert!((w[0] - 1.0).abs() < 1e-15);
        let (x, w) = gauss_legendre(8);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        assert!(x.windows(2).all(|p| p[0] < p[1]));
        // exact for degree 15
        let i: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(14)).sum();
        assert!((i - 2.0 / 15.0).abs() < 1e-14);
    }

    #[test]
    fn composite_rule() {
        let r = Rule::composite(0.0, 1.0, &[0.3, 2.0], 4);
        assert_eq!(r.len(), 2 * 4 * PANEL_ORDER);
        let v = r.integrate(|x| (std::f64::consts::TAU * x).sin().powi(2));
        assert!((v - 0.5).abs() < 1e-13);
    }

    #[test]
    fn tensor_integral() {
        let axes = [Axis::new(0.0, 1.0), Axis::new(0.0, 2.0), Axis::new(-1.0, 1.0)];
        let r = integrate_3d(&axes, 1, 16, 1e-12, |x, y, z| x * y * y + z.exp()).unwrap();
        let exact = 8.0 / 3.0 + 2.0 * (1f64.exp() - (-1f64).exp());
        assert!((r.value - exact).abs() < 1e-12);
        assert!(r.abs_error_estimate <= 1e-12);
    }
}
