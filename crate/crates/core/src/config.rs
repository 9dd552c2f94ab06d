//! TOML run configuration.
//!
//! ```toml
//! seed = 0
//! output = "out"
//! schedule = "dyadic:131072"        # or "list:1,10,100" or [1, 10, 100]
//!
//! [map]
//! variant = "example1"              # chart | example1 | example2
//! dim = 1
//! F = "sin"                         # sin | zero | { c0 = 0.0, harmonics = [{ m = 1, a = 0.0, b = 1.0 }] }
//! alpha = "golden"                  # 0.25 | golden | silver | bronze | sqrt3 | { liouville = { base = 2, depth = 3 } }
//! A = { r_plateau = 0.3, r_support = 0.6 }
//! # resonant = { depth = 4, n_max = 131072 }   replaces F and alpha
//!
//! [psi]
//! kind = "power"
//! beta = 0.5
//!
//! [grids]
//! phi_grid = 4096
//! u_grid = 512
//! sphere_grid = 16
//! ```
//!
//! Absent fields take the defaults above; `phi_grid` defaults to
//! `max(4096, 64·m_max)` and `u_grid` depends on `dim`.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::bump::{BumpProfile, DEFAULT_R_PLATEAU, DEFAULT_R_SUPPORT};
use crate::diffeo::{MapConfig, Variant};
use crate::error::{Error, Result};
use crate::fourier::FourierSeries;
use crate::growth::{default_u_grid, GridSpec, Schedule};
use crate::psi::PsiSpec;
use crate::resonant::resonant_pair;
use crate::rotation::{AlphaSpec, RotationNumber};
use crate::weyl::default_grid;

pub const DEFAULT_SPHERE_GRID: usize = 16;
pub const DEFAULT_OUTPUT: &str = "out";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SeriesSpec {
    Named(String),
    Series(FourierSeries),
}

impl SeriesSpec {
    pub fn build(&self) -> Result<FourierSeries> {
        match self {
            SeriesSpec::Series(f) => Ok(f.clone()),
            SeriesSpec::Named(n) => match n.as_str() {
                "sin" => Ok(FourierSeries::sin()),
                "zero" => Ok(FourierSeries::zero()),
                _ => Err(Error::Config(format!("unknown series '{n}' (sin, zero or a table)"))),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BumpSection {
    #[serde(default = "default_plateau")]
    pub r_plateau: f64,
    #[serde(default = "default_support")]
    pub r_support: f64,
}

fn default_plateau() -> f64 {
    DEFAULT_R_PLATEAU
}

fn default_support() -> f64 {
    DEFAULT_R_SUPPORT
}

impl Default for BumpSection {
    fn default() -> Self {
        Self {
            r_plateau: DEFAULT_R_PLATEAU,
            r_support: DEFAULT_R_SUPPORT,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResonantSection {
    pub depth: usize,
    pub n_max: u64,
    /// Target used for the design; the run's `psi` when absent.
    pub psi: Option<PsiSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSection {
    #[serde(default)]
    pub variant: Variant,
    #[serde(default = "one")]
    pub dim: usize,
    #[serde(rename = "F")]
    pub f: Option<SeriesSpec>,
    pub alpha: Option<AlphaSpec>,
    #[serde(rename = "A", default)]
    pub a: BumpSection,
    pub resonant: Option<ResonantSection>,
}

fn one() -> usize {
    1
}

impl Default for MapSection {
    fn default() -> Self {
        Self {
            variant: Variant::Chart,
            dim: 1,
            f: None,
            alpha: None,
            a: BumpSection::default(),
            resonant: None,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridsSection {
    pub phi_grid: Option<usize>,
    pub u_grid: Option<usize>,
    pub sphere_grid: Option<usize>,
}

/// The file as written, before defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default)]
    pub map: MapSection,
    #[serde(default)]
    pub psi: PsiSpec,
    #[serde(default)]
    pub grids: GridsSection,
    #[serde(default)]
    pub schedule: Schedule,
    #[serde(default)]
    pub seed: u64,
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grids {
    pub phi_grid: usize,
    pub u_grid: usize,
    pub sphere_grid: usize,
}

impl Grids {
    pub fn growth(&self) -> GridSpec {
        GridSpec {
            phi: self.phi_grid,
            u: self.u_grid,
        }
    }
}

/// A fully resolved and validated configuration; serialises as the echo
/// written into run manifests.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub map: MapConfig,
    pub psi: PsiSpec,
    pub grids: Grids,
    pub schedule: Vec<u64>,
    pub seed: u64,
    pub output: PathBuf,
    /// Convergent denominators when `map.resonant` built the pair.
    pub resonant_denominators: Option<Vec<u64>>,
}

impl ConfigFile {
    pub fn resolve(&self) -> Result<RunConfig> {
        self.psi.validate()?;
        let m = &self.map;
        let bump = BumpProfile::new(m.dim, m.a.r_plateau, m.a.r_support)?;
        let (fourier, alpha, denominators) = match &m.resonant {
            Some(r) => {
                if m.f.is_some() || m.alpha.is_some() {
                    return Err(Error::Config(
                        "map.resonant replaces map.F and map.alpha; give one or the other".into(),
                    ));
                }
                let psi = r.psi.as_ref().unwrap_or(&self.psi);
                let pair = resonant_pair(psi, r.depth, r.n_max)?;
                (pair.fourier, pair.alpha, Some(pair.denominators))
            }
            None => {
                let f = match &m.f {
                    Some(s) => s.build()?,
                    None => FourierSeries::sin(),
                };
                let alpha = match &m.alpha {
                    Some(a) => RotationNumber::from_spec(a)?,
                    None => RotationNumber::named("golden")?,
                };
                (f, alpha, None)
            }
        };
        let map = MapConfig::new(fourier, alpha, bump, m.variant)?;
        let grids = Grids {
            phi_grid: self.grids.phi_grid.unwrap_or_else(|| default_grid(&map.fourier)),
            u_grid: self.grids.u_grid.unwrap_or_else(|| default_u_grid(m.dim)),
            sphere_grid: self.grids.sphere_grid.unwrap_or(DEFAULT_SPHERE_GRID),
        };
        grids.growth().validate(&map)?;
        if grids.sphere_grid == 0 {
            return Err(Error::Grid("sphere_grid must be positive".into()));
        }
        let schedule = self.schedule.resolve()?;
        Ok(RunConfig {
            map,
            psi: self.psi.clone(),
            grids,
            schedule,
            seed: self.seed,
            output: self
                .output
                .clone()
                .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT)),
            resonant_denominators: denominators,
        })
    }
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    let file: ConfigFile =
        toml::from_str(text).map_err(|e| Error::Config(format!("parse error: {e}")))?;
    file.resolve()
}

pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)?;
    parse_config(&text)
}

impl Default for RunConfig {
    fn default() -> Self {
        ConfigFile::default()
            .resolve()
            .expect("the default configuration is valid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_fills_defaults() {
        let c = parse_config("[map]\nvariant = \"example1\"\nF = \"sin\"\nalpha = \"golden\"\n").unwrap();
        assert_eq!(c.map.variant, Variant::Example1);
        assert_eq!(c.map.bump.r_plateau(), 0.3);
        assert_eq!(c.map.bump.r_support(), 0.6);
        assert_eq!(c.schedule.len(), 18);
        assert_eq!(*c.schedule.last().unwrap(), 1 << 17);
        assert_eq!(c.seed, 0);
        assert_eq!(c.grids.phi_grid, 4096);
    }

    #[test]
    fn psi_beta_one_rejected() {
        let e = parse_config("[psi]\nkind = \"power\"\nbeta = 1.0\n").unwrap_err();
        assert!(e.to_string().contains("o(x) violated"), "{e}");
    }

    #[test]
    fn bad_radii_rejected() {
        let e = parse_config("[map]\nA = { r_plateau = 0.6, r_support = 0.5 }\n").unwrap_err();
        assert!(e.to_string().contains("bump radii"), "{e}");
    }

    #[test]
    fn parse_error_has_position() {
        let e = parse_config("[map\nvariant = 3").unwrap_err();
        assert!(e.to_string().contains("line 1"), "{e}");
    }

    #[test]
    fn unknown_key_rejected() {
        assert!(parse_config("[map]\nvarient = \"chart\"\n").is_err());
    }

    #[test]
    fn table_series_and_liouville() {
        let c = parse_config(
            "schedule = [1, 3, 9]\n[map]\nF = { harmonics = [{ m = 2, a = 0.0, b = 0.5 }] }\nalpha = { liouville = { base = 2, depth = 3 } }\n",
        )
        .unwrap();
        assert_eq!(c.map.alpha(), 0.765625);
        assert!(c.map.alpha.is_degenerate());
        assert_eq!(c.schedule, vec![1, 3, 9]);
        assert!(parse_config("[map]\nF = { harmonics = [{ m = 2, a = 0.0, b = 0.5 }, { m = 1, a = 0.0, b = 0.5 }] }\n").is_err());
    }

    #[test]
    fn coarse_grid_rejected() {
        let e = parse_config("[grids]\nphi_grid = 2\n").unwrap_err();
        assert!(matches!(e, Error::Grid(_)), "{e}");
    }

    #[test]
    fn resonant_section() {
        let c = parse_config("[map]\nresonant = { depth = 2, n_max = 1024 }\n").unwrap();
        assert_eq!(c.resonant_denominators.unwrap().len(), 3);
        assert!(parse_config("[map]\nF = \"sin\"\nresonant = { depth = 2, n_max = 1024 }\n").is_err());
    }

    #[test]
    fn echo_round_trips() {
        let c = RunConfig::default();
        let s = serde_json::to_string(&c).unwrap();
        let back: RunConfig = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
    }
}
