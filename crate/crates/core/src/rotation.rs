//! Rotation numbers and their continued-fraction convergents.
//!
//! The stored `alpha` is a binary float, hence an exact dyadic rational. Its
//! continued fraction is expanded exactly in integer arithmetic, so every
//! stored convergent is a true convergent of the stored value.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest convergent denominator kept; above this `q` is not exact in `f64`.
pub const MAX_DENOMINATOR: u64 = 1 << 53;

/// Rational `alpha` whose reduced denominator is at most this is degenerate:
/// its Weyl sums grow linearly from that scale on.
pub const DEGENERATE_DENOMINATOR: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Family {
    Explicit,
    QuadraticIrrational {
        name: String,
        preperiod: Vec<u64>,
        period: Vec<u64>,
    },
    Liouville {
        base: u32,
        depth: u32,
    },
}

/// How to build a rotation number.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlphaSpec {
    Explicit(f64),
    Named(String),
    Liouville { liouville: LiouvilleParams },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LiouvilleParams {
    pub base: u32,
    pub depth: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Convergent {
    pub p: u64,
    pub q: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RotationNumber {
    alpha: f64,
    family: Family,
    partial_quotients: Vec<u128>,
    convergents: Vec<Convergent>,
    /// The expansion of the stored value ended (it is `p/q` with `q` below
    /// [`MAX_DENOMINATOR`]).
    terminated: bool,
}

const NAMED: &[(&str, &[u64], &[u64])] = &[
    ("golden", &[], &[1]),
    ("silver", &[], &[2]),
    ("bronze", &[], &[3]),
    ("sqrt3", &[1], &[2]),
];

impl RotationNumber {
    pub fn explicit(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || !(0.0..1.0).contains(&alpha) {
            return Err(Error::Rotation(format!(
                "explicit alpha must lie in [0, 1), got {alpha}"
            )));
        }
        Self::from_value(alpha, Family::Explicit)
    }

    /// A named quadratic irrational: `golden`, `silver`, `bronze` or `sqrt3`.
    pub fn named(name: &str) -> Result<Self> {
        let (n, pre, per) = NAMED
            .iter()
            .find(|(n, _, _)| *n == name)
            .ok_or_else(|| {
                Error::Rotation(format!(
                    "unknown quadratic irrational '{name}' (known: golden, silver, bronze, sqrt3)"
                ))
            })?;
        let alpha = match *n {
            "golden" => (5f64.sqrt() - 1.0) / 2.0,
            "silver" => 2f64.sqrt() - 1.0,
            "bronze" => (13f64.sqrt() - 3.0) / 2.0,
            _ => 3f64.sqrt() - 1.0,
        };
        Self::from_value(
            alpha,
            Family::QuadraticIrrational {
                name: n.to_string(),
                preperiod: pre.to_vec(),
                period: per.to_vec(),
            },
        )
    }

    /// `[0; preperiod…, period, period, …]`, an eventually periodic and hence
    /// quadratic-irrational continued fraction.
    pub fn from_partial_quotients(name: &str, preperiod: &[u64], period: &[u64]) -> Result<Self> {
        if period.is_empty() || period.iter().chain(preperiod).any(|&a| a == 0) {
            return Err(Error::Rotation(
                "partial quotients must be positive and the period non-empty".into(),
            ));
        }
        // evaluate from the back with enough repetitions of the period that the
        // tail no longer affects the double-precision value
        let reps = 80 / period.len() + 2;
        let mut tail = 1.0f64;
        for _ in 0..reps {
            for &a in period.iter().rev() {
                tail = a as f64 + 1.0 / tail;
            }
        }
        for &a in preperiod.iter().rev() {
            tail = a as f64 + 1.0 / tail;
        }
        let alpha = 1.0 / tail;
        Self::from_value(
            alpha,
            Family::QuadraticIrrational {
                name: name.to_string(),
                preperiod: preperiod.to_vec(),
                period: period.to_vec(),
            },
        )
    }

    /// `Σ_{k=1..depth} base^{−k!}` rounded to `f64`.
    pub fn liouville(base: u32, depth: u32) -> Result<Self> {
        if base < 2 {
            return Err(Error::Rotation(format!("liouville base must be ≥ 2, got {base}")));
        }
        if depth < 1 {
            return Err(Error::Rotation("liouville depth must be ≥ 1".into()));
        }
        let mut fact = 1f64;
        let mut exps = Vec::with_capacity(depth as usize);
        for k in 1..=depth {
            fact *= k as f64;
            if fact * (base as f64).log2() > 1074.0 {
                return Err(Error::Rotation(format!(
                    "liouville depth {depth} underflows the exponent range for base {base}"
                )));
            }
            exps.push(fact);
        }
        let b = base as f64;
        let alpha = exps.iter().rev().map(|&e| b.powf(-e)).sum::<f64>();
        Self::from_value(alpha, Family::Liouville { base, depth })
    }

    pub fn from_spec(spec: &AlphaSpec) -> Result<Self> {
        match spec {
            AlphaSpec::Explicit(a) => Self::explicit(*a),
            AlphaSpec::Named(n) => Self::named(n),
            AlphaSpec::Liouville { liouville } => Self::liouville(liouville.base, liouville.depth),
        }
    }

    fn from_value(alpha: f64, family: Family) -> Result<Self> {
        let (partial_quotients, convergents, terminated) = dyadic_expansion(alpha)?;
        Ok(Self {
            alpha,
            family,
            partial_quotients,
            convergents,
            terminated,
        })
    }

    pub fn value(&self) -> f64 {
        self.alpha
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    /// `[a₁, a₂, …]` of the stored value (the leading `a₀ = 0` is omitted).
    pub fn partial_quotients(&self) -> &[u128] {
        &self.partial_quotients
    }

    /// Convergents `p_k/q_k` for `k ≥ 1`.
    pub fn convergents(&self) -> &[Convergent] {
        &self.convergents
    }

    /// Rational with a small denominator: flagged in every report.
    pub fn is_degenerate(&self) -> bool {
        self.alpha == 0.0
            || (self.terminated
                && self
                    .convergents
                    .last()
                    .is_some_and(|c| c.q <= DEGENERATE_DENOMINATOR))
    }

    /// `|q_k α − p_k| < 1/q_{k+1}` for every stored pair of consecutive
    /// convergents, and the denominators strictly increase. When the expansion
    /// terminates at `α = p_n/q_n`, the pair `(n−1, n)` holds with equality.
    pub fn convergents_valid(&self) -> bool {
        let last = self.convergents.len().saturating_sub(2);
        self.convergents.windows(2).enumerate().all(|(k, w)| {
            let err = (w[0].q as f64).mul_add(self.alpha, -(w[0].p as f64)).abs();
            let bound = 1.0 / w[1].q as f64;
            let holds = if self.terminated && k == last {
                err <= bound
            } else {
                err < bound
            };
            w[0].q < w[1].q && holds
        })
    }
}

/// Makes a rotation number from a family spec.
pub fn alpha_make(spec: &AlphaSpec) -> Result<RotationNumber> {
    RotationNumber::from_spec(spec)
}

type Expansion = (Vec<u128>, Vec<Convergent>, bool);

fn dyadic_expansion(alpha: f64) -> Result<Expansion> {
    if alpha == 0.0 {
        return Ok((Vec::new(), vec![Convergent { p: 0, q: 1 }], true));
    }
    let bits = alpha.to_bits();
    let exp_bits = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (mut mant, mut exp) = if exp_bits == 0 {
        (frac, -1074i64)
    } else {
        (frac | (1u64 << 52), exp_bits - 1075)
    };
    while mant & 1 == 0 && exp < 0 {
        mant >>= 1;
        exp += 1;
    }
    if exp >= 0 {
        return Err(Error::Rotation(format!("alpha {alpha} is not in (0,1)")));
    }
    if -exp > 126 {
        return Err(Error::Rotation(format!(
            "alpha {alpha} is too small for the exact expansion"
        )));
    }
    let mut num = mant as u128;
    let mut den = 1u128 << (-exp);
    // a₀ = 0 since 0 < alpha < 1
    (num, den) = (den, num);

    let (mut p_prev, mut q_prev) = (1u128, 0u128); // p_{-1}, q_{-1}
    let (mut p, mut q) = (0u128, 1u128); // p_0, q_0
    let mut quotients = Vec::new();
    let mut convergents = Vec::new();
    let mut terminated = false;
    while den != 0 {
        let a = num / den;
        let r = num - a * den;
        let next = a
            .checked_mul(q)
            .and_then(|v| v.checked_add(q_prev))
            .filter(|&v| v <= MAX_DENOMINATOR as u128);
        let Some(q_next) = next else { break };
        let p_next = a * p + p_prev;
        quotients.push(a);
        convergents.push(Convergent {
            p: p_next as u64,
            q: q_next as u64,
        });
        (p_prev, q_prev, p, q) = (p, q, p_next, q_next);
        (num, den) = (den, r);
        if den == 0 {
            terminated = true;
        }
    }
    Ok((quotients, convergents, terminated))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_convergents_are_fibonacci_ratios() {
        let g = RotationNumber::named("golden").unwrap();
        assert!((g.value() - 0.6180339887).abs() < 1e-10);
        assert!(g.convergents().len() >= 20);
        let mut fib = vec![1u64, 1];
        while fib.len() < 24 {
            let n = fib.len();
            fib.push(fib[n - 1] + fib[n - 2]);
        }
        for (k, c) in g.convergents().iter().take(20).enumerate() {
            assert_eq!((c.p, c.q), (fib[k], fib[k + 1]), "k = {k}");
        }
        assert!(g.partial_quotients()[..30].iter().all(|&a| a == 1));
        assert!(g.convergents_valid());
        assert!(!g.is_degenerate());
    }

    #[test]
    fn liouville_finite_sum() {
        let l = RotationNumber::liouville(2, 3).unwrap();
        assert_eq!(l.value(), 0.765625);
        // 49/64 is rational with a tiny denominator
        assert_eq!(l.convergents().last().unwrap(), &Convergent { p: 49, q: 64 });
        assert!(l.is_degenerate());
        assert!(l.convergents_valid());
        let deep = RotationNumber::liouville(2, 6).unwrap();
        assert!(deep.value() > 0.765625);
        assert!(RotationNumber::liouville(2, 7).is_err());
        assert!(RotationNumber::liouville(1, 3).is_err());
        assert!(RotationNumber::liouville(10, 0).is_err());
    }

    #[test]
    fn rational_alpha_is_flagged() {
        let r = RotationNumber::explicit(0.25).unwrap();
        assert!(r.is_degenerate());
        assert_eq!(r.convergents(), &[Convergent { p: 1, q: 4 }]);
        assert!(RotationNumber::explicit(0.0).unwrap().is_degenerate());
        assert!(RotationNumber::explicit(1.0).is_err());
        assert!(RotationNumber::explicit(-0.1).is_err());
        assert!(RotationNumber::explicit(f64::NAN).is_err());
    }

    #[test]
    fn named_values_and_periods() {
        for name in ["golden", "silver", "bronze", "sqrt3"] {
            let r = RotationNumber::named(name).unwrap();
            assert!(r.convergents().len() >= 15, "{name}");
            assert!(r.convergents_valid(), "{name}");
        }
        let s = RotationNumber::named("silver").unwrap();
        assert!(s.partial_quotients()[..15].iter().all(|&a| a == 2));
        let t = RotationNumber::named("sqrt3").unwrap();
        assert_eq!(&t.partial_quotients()[..5], &[1, 2, 1, 2, 1]);
        assert!(RotationNumber::named("platinum").is_err());
    }

    #[test]
    fn partial_quotient_construction_roundtrips() {
        let r = RotationNumber::from_partial_quotients("designed", &[4, 16, 16], &[1]).unwrap();
        assert_eq!(&r.partial_quotients()[..6], &[4, 16, 16, 1, 1, 1]);
        let g = RotationNumber::from_partial_quotients("g", &[], &[1]).unwrap();
        assert!((g.value() - RotationNumber::named("golden").unwrap().value()).abs() < 1e-15);
        assert!(RotationNumber::from_partial_quotients("bad", &[0], &[1]).is_err());
    }

    #[test]
    fn explicit_irrational_like_values_have_many_convergents() {
        let r = RotationNumber::explicit(std::f64::consts::PI - 3.0).unwrap();
        assert_eq!(r.convergents()[0].q, 7);
        assert_eq!(r.convergents()[1].q, 106);
        assert_eq!(r.convergents()[2].q, 113);
        assert!(r.convergents_valid());
    }
}
