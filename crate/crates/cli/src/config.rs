//! Run configuration: a versioned TOML schema with unknown keys rejected.
//! Numeric fields accept plain numbers or decimal strings, so configs can be
//! written and diffed without worrying about float formatting drift.

use fadingbc_core as core;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("failed to read config: {0}")]
    Io(#[from] std::io::Error),
    #[error("failed to parse config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("unsupported config version {0} (expected 1)")]
    Version(u32),
    #[error("invalid config: {0}")]
    Invalid(String),
    #[error("invalid model: {0}")]
    Model(String),
}

/// A float that deserializes from either a TOML number or a decimal string.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decimal(pub f64);

impl Serialize for Decimal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(self.0)
    }
}

impl<'de> Deserialize<'de> for Decimal {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Int(i64),
            Str(String),
        }
        let v = match Raw::deserialize(d)? {
            Raw::Num(x) => x,
            Raw::Int(i) => i as f64,
            Raw::Str(s) => s
                .trim()
                .parse::<f64>()
                .map_err(|e| serde::de::Error::custom(format!("bad decimal '{s}': {e}")))?,
        };
        Ok(Decimal(v))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub version: u32,
    pub distribution: DistributionSpec,
    pub csit: CsitSpec,
    pub power: Decimal,
    #[serde(default)]
    pub bounds: BoundsSpec,
    #[serde(default)]
    pub optimizer: OptimizerSpec,
    #[serde(default)]
    pub output: OutputSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistributionSpec {
    /// Inline atoms as `(g1, g2, p)` triples.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub atoms: Option<Vec<(Decimal, Decimal, Decimal)>>,
    /// Continuous family name; currently `rayleigh_independent`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean_gain1: Option<Decimal>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean_gain2: Option<Decimal>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levels_per_axis: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail_mass: Option<Decimal>,
    #[serde(default)]
    pub iid: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CsitSpec {
    /// `perfect`, `none`, `degradedness_bit`, or `table`.
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbol_count: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsSpec {
    /// `inner`, `outer`, or `both`.
    #[serde(default = "default_bound")]
    pub bound: String,
    /// `free`, `thm4`, or `thm4-monotone`.
    #[serde(default = "default_restriction")]
    pub restriction: String,
}

impl Default for BoundsSpec {
    fn default() -> Self {
        Self {
            bound: default_bound(),
            restriction: default_restriction(),
        }
    }
}

fn default_bound() -> String {
    "both".into()
}

fn default_restriction() -> String {
    "free".into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizerSpec {
    pub directions: usize,
    pub restarts: usize,
    pub grid_seed_levels: usize,
    pub step_tol: Decimal,
    pub max_iters: usize,
    pub seed: u64,
}

impl Default for OptimizerSpec {
    fn default() -> Self {
        let o = core::OptimizerOptions::default();
        Self {
            directions: o.directions,
            restarts: o.restarts,
            grid_seed_levels: o.grid_seed_levels,
            step_tol: Decimal(o.step_tol),
            max_iters: o.max_iters,
            seed: 20260810,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub dir: String,
    pub formats: Vec<String>,
    pub fixed_r0: Decimal,
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self {
            dir: "out".into(),
            formats: vec!["csv".into(), "json".into()],
            fixed_r0: Decimal(0.0),
        }
    }
}

/// Validated, core-typed view of a [`RunConfig`].
pub struct Model {
    pub dist: core::FadingDistribution,
    pub csit: core::CsitMap,
    pub partition: core::CsitPartition,
    pub power: f64,
    pub restriction: core::OuterRestriction,
    pub opts: core::OptimizerOptions,
}

pub fn parse_str(text: &str) -> Result<RunConfig, ConfigError> {
    let cfg: RunConfig = toml::from_str(text)?;
    if cfg.version != 1 {
        return Err(ConfigError::Version(cfg.version));
    }
    Ok(cfg)
}

pub fn parse_file(path: &std::path::Path) -> Result<RunConfig, ConfigError> {
    parse_str(&std::fs::read_to_string(path)?)
}

pub fn serialize(cfg: &RunConfig) -> String {
    toml::to_string_pretty(cfg).expect("config serializes")
}

impl RunConfig {
    /// Resolves the schema into core types, checking cross-field rules.
    pub fn build_model(&self) -> Result<Model, ConfigError> {
        let d = &self.distribution;
        let dist = match (&d.atoms, &d.family) {
            (Some(atoms), None) => {
                let triples: Vec<(f64, f64, f64)> =
                    atoms.iter().map(|(a, b, c)| (a.0, b.0, c.0)).collect();
                core::build_discrete(&triples).map_err(|e| ConfigError::Model(e.to_string()))?
            }
            (None, Some(name)) => {
                if name != "rayleigh_independent" {
                    return Err(ConfigError::Invalid(format!(
                        "unknown continuous family '{name}'"
                    )));
                }
                let need = |o: Option<Decimal>, what: &str| {
                    o.map(|v| v.0)
                        .ok_or_else(|| ConfigError::Invalid(format!("{what} required")))
                };
                let family = core::ContinuousFamily::RayleighIndependent {
                    mean_gain1: need(d.mean_gain1, "mean_gain1")?,
                    mean_gain2: need(d.mean_gain2, "mean_gain2")?,
                };
                let grid = core::QuantizerGrid {
                    levels_per_axis: d
                        .levels_per_axis
                        .ok_or_else(|| ConfigError::Invalid("levels_per_axis required".into()))?,
                    tail_mass: need(d.tail_mass, "tail_mass")?,
                };
                core::quantize_continuous(family, grid)
                    .map_err(|e| ConfigError::Model(e.to_string()))?
            }
            (Some(_), Some(_)) => {
                return Err(ConfigError::Invalid(
                    "distribution: give either atoms or a family, not both".into(),
                ))
            }
            (None, None) => {
                return Err(ConfigError::Invalid(
                    "distribution: atoms or family required".into(),
                ))
            }
        }
        .with_iid(d.iid);

        let csit = match self.csit.kind.as_str() {
            "perfect" => core::CsitMap::perfect(),
            "none" => core::CsitMap::none(),
            "degradedness_bit" => core::CsitMap::degradedness_bit(),
            "table" => {
                let table = self
                    .csit
                    .table
                    .clone()
                    .ok_or_else(|| ConfigError::Invalid("csit: table required".into()))?;
                let count = self
                    .csit
                    .symbol_count
                    .ok_or_else(|| ConfigError::Invalid("csit: symbol_count required".into()))?;
                core::CsitMap::table(table, count).map_err(|e| ConfigError::Model(e.to_string()))?
            }
            other => return Err(ConfigError::Invalid(format!("unknown csit kind '{other}'"))),
        };
        let partition =
            core::partition_by_csit(&dist, &csit).map_err(|e| ConfigError::Model(e.to_string()))?;

        if self.power.0.is_nan() || self.power.0 < 0.0 {
            return Err(ConfigError::Invalid("power must be nonnegative".into()));
        }
        let restriction = parse_restriction(&self.bounds.restriction)?;
        let o = &self.optimizer;
        if o.directions == 0 || o.restarts == 0 || o.grid_seed_levels == 0 || o.max_iters == 0 {
            return Err(ConfigError::Invalid(
                "optimizer settings must be positive".into(),
            ));
        }
        let opts = core::OptimizerOptions {
            directions: o.directions,
            restarts: o.restarts,
            grid_seed_levels: o.grid_seed_levels,
            step_tol: o.step_tol.0,
            max_iters: o.max_iters,
            rng_seed: o.seed,
        };
        Ok(Model {
            dist,
            csit,
            partition,
            power: self.power.0,
            restriction,
            opts,
        })
    }
}

pub fn parse_restriction(s: &str) -> Result<core::OuterRestriction, ConfigError> {
    match s {
        "free" => Ok(core::OuterRestriction::Free),
        "thm4" => Ok(core::OuterRestriction::PerGainClass),
        "thm4-monotone" => Ok(core::OuterRestriction::MonotoneNoCsit),
        other => Err(ConfigError::Invalid(format!(
            "unknown restriction '{other}' (free | thm4 | thm4-monotone)"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = r#"
version = 1
power = "1.0"

[distribution]
atoms = [["3", "1", "0.5"], ["1", "3", "0.5"]]
iid = true

[csit]
kind = "degradedness_bit"
"#;

    #[test]
    fn parses_and_builds() {
        let cfg = parse_str(EXAMPLE).unwrap();
        let model = cfg.build_model().unwrap();
        assert_eq!(model.dist.len(), 2);
        assert_eq!(model.partition.group_count(), 2);
        assert_eq!(model.power, 1.0);
        assert!(model.dist.is_iid());
    }

    #[test]
    fn round_trip() {
        let cfg = parse_str(EXAMPLE).unwrap();
        let text = serialize(&cfg);
        let again = parse_str(&text).unwrap();
        assert_eq!(cfg, again);
    }

    #[test]
    fn rejects_unknown_keys() {
        let bad = EXAMPLE.replace("iid = true", "iid = true\nbogus = 1");
        assert!(parse_str(&bad).is_err());
    }

    #[test]
    fn rejects_wrong_version() {
        let bad = EXAMPLE.replace("version = 1", "version = 2");
        assert!(matches!(parse_str(&bad), Err(ConfigError::Version(2))));
    }

    #[test]
    fn numbers_accepted_as_numbers_or_strings() {
        let numeric = EXAMPLE.replace("\"1.0\"", "1.0").replace(
            "[[\"3\", \"1\", \"0.5\"], [\"1\", \"3\", \"0.5\"]]",
            "[[3, 1, 0.5], [1, 3, 0.5]]",
        );
        let a = parse_str(EXAMPLE).unwrap();
        let b = parse_str(&numeric).unwrap();
        assert_eq!(a.power, b.power);
        assert_eq!(a.distribution.atoms, b.distribution.atoms);
    }

    #[test]
    fn continuous_family_builds() {
        let text = r#"
version = 1
power = 2.0

[distribution]
family = "rayleigh_independent"
mean_gain1 = "2.0"
mean_gain2 = "1.0"
levels_per_axis = 4
tail_mass = "0.001"

[csit]
kind = "none"
"#;
        let model = parse_str(text).unwrap().build_model().unwrap();
        assert_eq!(model.dist.len(), 16);
        assert_eq!(model.partition.group_count(), 1);
    }

    #[test]
    fn restriction_tokens() {
        assert_eq!(
            parse_restriction("thm4").unwrap(),
            fadingbc_core::OuterRestriction::PerGainClass
        );
        assert!(parse_restriction("nope").is_err());
    }
}
