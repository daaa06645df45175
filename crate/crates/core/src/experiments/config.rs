use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::homology::FieldSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    StrongLaw,
    SimplexLaw,
    VarianceScaling,
    Clt,
    Concentration,
    Coupling,
    DppConcentration,
    DualityAudit,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::StrongLaw => "strong_law",
            ExperimentKind::SimplexLaw => "simplex_law",
            ExperimentKind::VarianceScaling => "variance_scaling",
            ExperimentKind::Clt => "clt",
            ExperimentKind::Concentration => "concentration",
            ExperimentKind::Coupling => "coupling",
            ExperimentKind::DppConcentration => "dpp_concentration",
            ExperimentKind::DualityAudit => "duality_audit",
        }
    }

    /// Whether grid values are window side lengths l (otherwise sizes n).
    pub fn grid_is_side_length(self) -> bool {
        matches!(
            self,
            ExperimentKind::StrongLaw
                | ExperimentKind::SimplexLaw
                | ExperimentKind::DppConcentration
                | ExperimentKind::DualityAudit
        )
    }

    fn default_variants(self) -> Vec<Variant> {
        match self {
            ExperimentKind::VarianceScaling | ExperimentKind::Clt => vec![Variant::Poisson, Variant::Binomial],
            ExperimentKind::Concentration => vec![Variant::Binomial],
            ExperimentKind::Coupling => vec![Variant::Coupled],
            ExperimentKind::DppConcentration => vec![Variant::Ginibre, Variant::Poisson],
            _ => vec![Variant::Poisson],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Poisson,
    Binomial,
    Coupled,
    Ginibre,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Poisson => "poisson",
            Variant::Binomial => "binomial",
            Variant::Coupled => "coupled",
            Variant::Ginibre => "ginibre",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WindowShape {
    #[default]
    Cube,
    Ball,
}

/// Declarative description of one experiment, read from TOML.
///
/// ```toml
/// kind = "clt"
/// seed = 17
/// replications = 400
/// dim = 2
/// r = 1.0
/// k = [1]
/// grid = [400, 900]
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    /// Master seed; every replication seed is derived from it.
    pub seed: u64,
    pub replications: usize,
    pub dim: usize,
    pub r: f64,
    /// Side lengths l or sizes n, strictly increasing.
    pub grid: Vec<f64>,
    #[serde(default = "default_k")]
    pub k: Vec<usize>,
    #[serde(default)]
    pub field: FieldSpec,
    /// Highest simplex dimension built; defaults to max(k) + 1.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_cap: Option<usize>,
    /// Use r_n = (r/n)^{1/d} on a unit-volume support.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thermodynamic: Option<bool>,
    #[serde(default = "default_intensity")]
    pub intensity: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variants: Option<Vec<Variant>>,
    #[serde(default)]
    pub window: WindowShape,
    /// Tail thresholds ε·g^a for concentration-type experiments.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    /// Vacancy grid cells per unit r for the duality audit.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution: Option<f64>,
    /// Gaussian samples drawn when calibrating the normality bands.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub calibration_trials: Option<usize>,
    /// Cap on the Ginibre matrix order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_order: Option<usize>,
    #[serde(skip)]
    source: Option<String>,
}

fn default_k() -> Vec<usize> {
    vec![1]
}

fn default_intensity() -> f64 {
    1.0
}

impl ExperimentConfig {
    /// Minimal configuration with every optional field at its default.
    pub fn new(kind: ExperimentKind, seed: u64, replications: usize, dim: usize, r: f64, grid: Vec<f64>) -> Self {
        ExperimentConfig {
            kind,
            seed,
            replications,
            dim,
            r,
            grid,
            k: default_k(),
            field: FieldSpec::GF2,
            k_cap: None,
            thermodynamic: None,
            intensity: 1.0,
            variants: None,
            window: WindowShape::Cube,
            epsilon: None,
            a: None,
            resolution: None,
            calibration_trials: None,
            max_order: None,
            source: None,
        }
    }

    pub fn from_toml_str(src: &str) -> Result<Self> {
        let mut cfg: ExperimentConfig = toml::from_str(src).map_err(|e| Error::Config {
            line: e.span().map(|s| line_of_offset(src, s.start)),
            msg: e.message().to_string(),
        })?;
        cfg.source = Some(src.to_string());
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    /// The text the config was read from, or its canonical TOML form.
    pub fn source_text(&self) -> String {
        match &self.source {
            Some(s) => s.clone(),
            None => toml::to_string(self).expect("config serializes"),
        }
    }

    /// SHA-256 of the config bytes, hex encoded.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.source_text().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn short_hash(&self) -> String {
        self.hash()[..12].to_string()
    }

    pub fn variants(&self) -> Vec<Variant> {
        self.variants.clone().unwrap_or_else(|| self.kind.default_variants())
    }

    pub fn thermodynamic(&self) -> bool {
        self.thermodynamic.unwrap_or(matches!(
            self.kind,
            ExperimentKind::VarianceScaling | ExperimentKind::Concentration | ExperimentKind::Coupling
        ))
    }

    pub fn k_cap(&self) -> usize {
        self.k_cap.unwrap_or_else(|| self.k.iter().max().map_or(1, |m| m + 1))
    }

    /// Radius used at grid value `g`.
    pub fn radius_at(&self, g: f64) -> f64 {
        if self.thermodynamic() {
            (self.r / g).powf(1.0 / self.dim as f64)
        } else {
            self.r
        }
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon.unwrap_or(0.1)
    }

    pub fn a(&self) -> f64 {
        self.a.unwrap_or(1.0)
    }

    pub fn resolution(&self) -> f64 {
        self.resolution.unwrap_or(32.0)
    }

    pub fn validate(&self) -> Result<()> {
        let err = |key: &str, msg: String| Error::Config { line: self.line_of_key(key), msg };
        if self.replications < 2 {
            return Err(err("replications", format!("need at least 2 replications, got {}", self.replications)));
        }
        if self.dim == 0 {
            return Err(err("dim", "dimension must be positive".into()));
        }
        if !(self.r.is_finite() && self.r > 0.0) {
            return Err(err("r", format!("radius must be positive, got {}", self.r)));
        }
        if !(self.intensity.is_finite() && self.intensity > 0.0) {
            return Err(err("intensity", format!("intensity must be positive, got {}", self.intensity)));
        }
        if self.grid.is_empty() || self.grid.iter().any(|g| !(g.is_finite() && *g > 0.0)) {
            return Err(err("grid", "grid values must be positive".into()));
        }
        if self.grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(err("grid", "grid must be strictly increasing".into()));
        }
        if self.k.is_empty() {
            return Err(err("k", "k-list is empty".into()));
        }
        if let Some(&top) = self.k.iter().max() {
            if self.k_cap() < top + 1 {
                return Err(err("k_cap", format!("k_cap {} too small for β_{top}", self.k_cap())));
            }
        }
        let variants = self.variants();
        if variants.is_empty() {
            return Err(err("variants", "no variants selected".into()));
        }
        let allowed: &[Variant] = match self.kind {
            ExperimentKind::Coupling => &[Variant::Coupled],
            ExperimentKind::DppConcentration => &[Variant::Ginibre, Variant::Poisson],
            ExperimentKind::DualityAudit => &[Variant::Poisson],
            _ => &[Variant::Poisson, Variant::Binomial],
        };
        if let Some(v) = variants.iter().find(|v| !allowed.contains(v)) {
            return Err(err("variants", format!("variant {} not available for {}", v.name(), self.kind.name())));
        }
        let planar_only = matches!(self.kind, ExperimentKind::DppConcentration | ExperimentKind::DualityAudit);
        if planar_only && self.dim != 2 {
            return Err(err("dim", format!("{} requires dim = 2", self.kind.name())));
        }
        if self.kind == ExperimentKind::DppConcentration && self.k != [0] {
            return Err(err("k", "dpp_concentration studies β_0 only".into()));
        }
        if self.kind == ExperimentKind::Clt && self.thermodynamic() {
            return Err(err("thermodynamic", "clt uses a fixed radius on growing windows".into()));
        }
        if self.kind == ExperimentKind::DualityAudit && self.k != [1] {
            return Err(err("k", "duality_audit compares β_1 only".into()));
        }
        Ok(())
    }

    /// Line of `key = ...` in the source text, if any.
    fn line_of_key(&self, key: &str) -> Option<usize> {
        let src = self.source.as_ref()?;
        src.lines().position(|l| {
            let t = l.trim_start();
            t.strip_prefix(key).is_some_and(|rest| rest.trim_start().starts_with('='))
        })
        .map(|i| i + 1)
    }
}

fn line_of_offset(src: &str, offset: usize) -> usize {
    src[..offset.min(src.len())].matches('\n').count() + 1
}

#[cfg(test)]
mod tests {
    use super::*;

    const CLT: &str = "kind = \"clt\"\nseed = 17\nreplications = 400\ndim = 2\nr = 1.0\nk = [1]\ngrid = [400, 900]\n";

    #[test]
    fn parses_and_defaults() {
        let c = ExperimentConfig::from_toml_str(CLT).unwrap();
        assert_eq!(c.kind, ExperimentKind::Clt);
        assert_eq!(c.variants(), vec![Variant::Poisson, Variant::Binomial]);
        assert_eq!(c.k_cap(), 2);
        assert!(!c.thermodynamic());
        assert_eq!(c.hash().len(), 64);
        assert_eq!(c.radius_at(900.0), 1.0);
    }

    #[test]
    fn unknown_kind_reports_line() {
        let src = CLT.replace("\"clt\"", "\"clts\"");
        match ExperimentConfig::from_toml_str(&src) {
            Err(Error::Config { line: Some(1), .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_key_and_semantic_errors() {
        let src = format!("{CLT}bogus = 3\n");
        assert!(matches!(ExperimentConfig::from_toml_str(&src), Err(Error::Config { line: Some(8), .. })));
        let src = CLT.replace("replications = 400", "replications = 1");
        assert!(matches!(ExperimentConfig::from_toml_str(&src), Err(Error::Config { line: Some(3), .. })));
        let src = CLT.replace("[400, 900]", "[900, 400]");
        assert!(matches!(ExperimentConfig::from_toml_str(&src), Err(Error::Config { line: Some(7), .. })));
    }

    #[test]
    fn thermodynamic_radius() {
        let mut c = ExperimentConfig::new(ExperimentKind::VarianceScaling, 1, 10, 2, 1.0, vec![100.0]);
        assert!(c.thermodynamic());
        assert!((c.radius_at(100.0) - 0.1).abs() < 1e-15);
        c.thermodynamic = Some(false);
        assert_eq!(c.radius_at(100.0), 1.0);
    }

    #[test]
    fn hash_tracks_bytes() {
        let a = ExperimentConfig::from_toml_str(CLT).unwrap();
        let b = ExperimentConfig::from_toml_str(&format!("# comment\n{CLT}")).unwrap();
        assert_ne!(a.hash(), b.hash());
        assert_eq!(a.hash(), ExperimentConfig::from_toml_str(CLT).unwrap().hash());
    }
}
