//! Comparison functions `Ψ`: positive, increasing, unbounded and `o(x)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PsiSpec {
    /// `x^beta`, admissible for `0 < beta < 1`.
    Power { beta: f64 },
    /// `ln(1 + x)`.
    Log,
    /// `ln(1 + ln(1 + x))`.
    Loglog,
    /// Piecewise-linear through `(x, Ψ(x))` points.
    Table { points: Vec<(f64, f64)> },
}

impl Default for PsiSpec {
    fn default() -> Self {
        PsiSpec::Power { beta: 0.5 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Admissibility {
    pub admissible: bool,
    pub violated: Option<String>,
}

impl PsiSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            PsiSpec::Power { beta } => {
                if !beta.is_finite() || *beta <= 0.0 {
                    return Err(Error::Psi(format!(
                        "increasing/unbounded violated: power beta must be > 0, got {beta}"
                    )));
                }
                if *beta >= 1.0 {
                    return Err(Error::Psi(format!(
                        "o(x) violated: power beta must be < 1, got {beta}"
                    )));
                }
                Ok(())
            }
            PsiSpec::Log | PsiSpec::Loglog => Ok(()),
            PsiSpec::Table { points } => {
                if points.len() < 2 {
                    return Err(Error::Psi("table needs at least two points".into()));
                }
                if points.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
                    return Err(Error::Psi("table entries must be finite".into()));
                }
                if points.iter().any(|&(_, y)| y <= 0.0) {
                    return Err(Error::Psi("positive violated: table values must be > 0".into()));
                }
                for w in points.windows(2) {
                    if w[1].0 <= w[0].0 {
                        return Err(Error::Psi(
                            "increasing violated: table abscissae must strictly increase".into(),
                        ));
                    }
                    if w[1].1 <= w[0].1 {
                        return Err(Error::Psi(
                            "increasing violated: table values must strictly increase".into(),
                        ));
                    }
                }
                let tail = &points[points.len() / 2..];
                for w in tail.windows(2) {
                    if w[1].1 / w[1].0 >= w[0].1 / w[0].0 {
                        return Err(Error::Psi(
                            "o(x) violated: Ψ(x)/x must decrease on the table tail".into(),
                        ));
                    }
                }
                Ok(())
            }
        }
    }

    pub fn admissibility(&self) -> Admissibility {
        match self.validate() {
            Ok(()) => Admissibility {
                admissible: true,
                violated: None,
            },
            Err(e) => Admissibility {
                admissible: false,
                violated: Some(e.to_string()),
            },
        }
    }

    /// `Ψ(x)` for `x ≥ 1`. Does not re-validate; call [`PsiSpec::validate`] first.
    pub fn eval(&self, x: f64) -> Result<f64> {
        if !x.is_finite() || x < 1.0 {
            return Err(Error::Psi(format!("Ψ is evaluated for x ≥ 1, got {x}")));
        }
        Ok(match self {
            PsiSpec::Power { beta } => x.powf(*beta),
            PsiSpec::Log => x.ln_1p(),
            PsiSpec::Loglog => x.ln_1p().ln_1p(),
            PsiSpec::Table { points } => {
                let first = points[0];
                let last = points[points.len() - 1];
                if x < first.0 || x > last.0 {
                    return Err(Error::Psi(format!(
                        "x = {x} outside the table range [{}, {}]",
                        first.0, last.0
                    )));
                }
                let i = points.partition_point(|p| p.0 <= x).clamp(1, points.len() - 1);
                let (x0, y0) = points[i - 1];
                let (x1, y1) = points[i];
                y0 + (y1 - y0) * (x - x0) / (x1 - x0)
            }
        })
    }

    pub fn label(&self) -> String {
        match self {
            PsiSpec::Power { beta } => format!("power:{beta}"),
            PsiSpec::Log => "log".into(),
            PsiSpec::Loglog => "loglog".into(),
            PsiSpec::Table { points } => format!("table:{}", points.len()),
        }
    }

    /// Parses the command-line form `power:<beta>|log|loglog`.
    pub fn parse_flag(s: &str) -> Result<Self> {
        let spec = match s {
            "log" => PsiSpec::Log,
            "loglog" => PsiSpec::Loglog,
            _ => {
                let beta = s
                    .strip_prefix("power:")
                    .and_then(|b| b.parse::<f64>().ok())
                    .ok_or_else(|| Error::Psi(format!("cannot parse psi '{s}'")))?;
                PsiSpec::Power { beta }
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}

pub fn psi_eval(psi: &PsiSpec, x: f64) -> Result<f64> {
    psi.eval(x)
}

pub fn psi_validate(psi: &PsiSpec) -> Admissibility {
    psi.admissibility()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_half_at_four() {
        let p = PsiSpec::Power { beta: 0.5 };
        p.validate().unwrap();
        assert_eq!(p.eval(4.0).unwrap(), 2.0);
    }

    #[test]
    fn linear_power_is_rejected() {
        let err = PsiSpec::Power { beta: 1.0 }.validate().unwrap_err();
        assert!(err.to_string().contains("o(x)"), "{err}");
        assert!(!psi_validate(&PsiSpec::Power { beta: 1.5 }).admissible);
        assert!(PsiSpec::Power { beta: 0.0 }.validate().is_err());
    }

    #[test]
    fn decreasing_table_is_rejected() {
        let t = PsiSpec::Table {
            points: vec![(1.0, 3.0), (2.0, 2.0), (4.0, 1.0)],
        };
        let err = t.validate().unwrap_err();
        assert!(err.to_string().contains("increasing"), "{err}");
    }

    #[test]
    fn table_interpolates() {
        let t = PsiSpec::Table {
            points: vec![(1.0, 1.0), (4.0, 2.0), (16.0, 4.0), (64.0, 8.0)],
        };
        t.validate().unwrap();
        assert_eq!(t.eval(4.0).unwrap(), 2.0);
        assert_eq!(t.eval(10.0).unwrap(), 3.0);
        assert_eq!(t.eval(64.0).unwrap(), 8.0);
        assert!(t.eval(65.0).is_err());
        let linear_tail = PsiSpec::Table {
            points: vec![(1.0, 1.0), (2.0, 2.0), (3.0, 3.0), (4.0, 4.0)],
        };
        assert!(linear_tail.validate().is_err());
    }

    #[test]
    fn log_families() {
        assert!((PsiSpec::Log.eval(1.0).unwrap() - 2f64.ln()).abs() < 1e-15);
        assert!(PsiSpec::Loglog.eval(1e6).unwrap() > 2.0);
        assert!(PsiSpec::Log.eval(0.5).is_err());
    }

    #[test]
    fn flag_parsing() {
        assert_eq!(PsiSpec::parse_flag("log").unwrap(), PsiSpec::Log);
        assert_eq!(
            PsiSpec::parse_flag("power:0.25").unwrap(),
            PsiSpec::Power { beta: 0.25 }
        );
        assert!(PsiSpec::parse_flag("power:1").is_err());
        assert!(PsiSpec::parse_flag("cubic").is_err());
    }
}
