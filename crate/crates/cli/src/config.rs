//! Experiment configuration read from JSON.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use teichmuller::mapspec::MapSpec;

use crate::CliError;

/// Tolerances asserted by the commands. Every value must be positive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Symplectic defect on interior modes.
    pub symplectic: f64,
    /// Entrywise gap between the lower blocks and the conjugated upper blocks.
    pub reality: f64,
    /// Relative symmetry defect of period points.
    pub symmetry: f64,
    /// Upper bound on the operator norm of a period point, below 1.
    pub contraction: f64,
    /// Largest pairwise relative deviation of pullback ratios.
    pub ratio_spread: f64,
    /// Symmetry defect of period-map tangent matrices.
    pub tangent_symmetry: f64,
    /// Relative error of quadrature norms against closed forms.
    pub quadrature: f64,
    /// Largest pairing between distinct monomial differentials.
    pub orthogonality: f64,
    /// Rank-one Siegel action against the disc action.
    pub siegel: f64,
    /// Upper bound for the quasisymmetry estimate.
    pub qs_max: f64,
    /// `M̂ − 1` for maps that are rotations.
    pub isometry: f64,
    /// Relative change of the measured constant when the step is halved.
    pub step_stability: f64,
    /// Relative error of the hyperbolic-metric invariance identity.
    pub metric_invariance: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            symplectic: 1e-6,
            reality: 1e-10,
            symmetry: 1e-6,
            contraction: 1.0 - 1e-10,
            ratio_spread: 0.02,
            tangent_symmetry: 1e-6,
            quadrature: 1e-6,
            orthogonality: 1e-10,
            siegel: 1e-12,
            qs_max: 1e3,
            isometry: 1e-12,
            step_stability: 0.01,
            metric_invariance: 1e-10,
        }
    }
}

impl Tolerances {
    fn entries(&self) -> [(&'static str, f64); 13] {
        [
            ("symplectic", self.symplectic),
            ("reality", self.reality),
            ("symmetry", self.symmetry),
            ("contraction", self.contraction),
            ("ratio_spread", self.ratio_spread),
            ("tangent_symmetry", self.tangent_symmetry),
            ("quadrature", self.quadrature),
            ("orthogonality", self.orthogonality),
            ("siegel", self.siegel),
            ("qs_max", self.qs_max),
            ("isometry", self.isometry),
            ("step_stability", self.step_stability),
            ("metric_invariance", self.metric_invariance),
        ]
    }
}

/// Where the circle map comes from: a path to a map-spec file, resolved
/// against the config file's directory, or the spec inline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MapSource {
    Path(PathBuf),
    Inline(MapSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    /// Truncation order.
    #[serde(rename = "N")]
    pub n: usize,
    /// Samples per circle; at least `4N`.
    #[serde(rename = "M")]
    pub m: usize,
    /// Finite-difference step of the pullback experiment.
    pub eps: f64,
    /// Add the half-step Richardson correction.
    pub richardson: bool,
    /// Interior-mode cutoff for symplectic identities; `N/4` when absent.
    pub core: usize,
    pub tolerances: Tolerances,
    pub out: Option<PathBuf>,
    pub map: Option<MapSource>,
    /// Modes `n` of the `cos(nx)` tangent vectors.
    pub modes: Vec<usize>,
    pub qs_nx: usize,
    pub qs_nt: usize,
    pub qs_t_max: f64,
    pub radial: usize,
    pub angular: usize,
    pub max_degree: usize,
    /// Random samples drawn by commands that use the seed.
    pub samples: usize,
}

/// Raw document: every key optional so defaults can depend on other keys.
#[derive(Debug, Default, Deserialize)]
struct RawConfig {
    #[serde(rename = "N")]
    n: Option<usize>,
    #[serde(rename = "M")]
    m: Option<usize>,
    eps: Option<f64>,
    richardson: Option<bool>,
    core: Option<usize>,
    tolerances: Option<Value>,
    out: Option<PathBuf>,
    map: Option<MapSource>,
    modes: Option<Vec<usize>>,
    qs_nx: Option<usize>,
    qs_nt: Option<usize>,
    qs_t_max: Option<f64>,
    radial: Option<usize>,
    angular: Option<usize>,
    max_degree: Option<usize>,
    samples: Option<usize>,
}

const KEYS: &[&str] = &[
    "N",
    "M",
    "eps",
    "richardson",
    "core",
    "tolerances",
    "out",
    "map",
    "modes",
    "qs_nx",
    "qs_nt",
    "qs_t_max",
    "radial",
    "angular",
    "max_degree",
    "samples",
];

impl Default for ExperimentConfig {
    fn default() -> Self {
        parse_config("{}", true).expect("empty config is valid")
    }
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

/// Parses and validates a config, filling defaults. With `strict`, unknown
/// keys (top level or under `tolerances`) are rejected; otherwise they are
/// returned as warnings by [`unknown_keys`] and ignored.
pub fn parse_config(text: &str, strict: bool) -> Result<ExperimentConfig, CliError> {
    let doc: Value = serde_json::from_str(text)
        .map_err(|e| invalid(format!("config is not valid JSON: {e}")))?;
    if !doc.is_object() {
        return Err(invalid("config must be a JSON object"));
    }
    let unknown = unknown_keys(&doc);
    if strict && !unknown.is_empty() {
        return Err(invalid(format!(
            "unknown config keys: {}",
            unknown.join(", ")
        )));
    }
    let raw: RawConfig = serde_json::from_value(doc).map_err(|e| invalid(e.to_string()))?;
    let tolerances = match raw.tolerances {
        Some(v) => {
            let mut merged =
                serde_json::to_value(Tolerances::default()).expect("tolerances serialize");
            let (Value::Object(base), Value::Object(given)) = (&mut merged, v) else {
                return Err(invalid("tolerances must be an object"));
            };
            for (k, v) in given {
                if base.contains_key(&k) {
                    base.insert(k, v);
                }
            }
            serde_json::from_value(merged).map_err(|e| invalid(format!("tolerances: {e}")))?
        }
        None => Tolerances::default(),
    };

    let n = raw.n.unwrap_or(64);
    let config = ExperimentConfig {
        n,
        m: raw.m.unwrap_or(4 * n),
        eps: raw.eps.unwrap_or(teichmuller::wp::DEFAULT_EPS),
        richardson: raw.richardson.unwrap_or(false),
        core: raw.core.unwrap_or(n / 4),
        tolerances,
        out: raw.out,
        map: raw.map,
        modes: raw.modes.unwrap_or_else(|| vec![2, 3, 4, 5]),
        qs_nx: raw.qs_nx.unwrap_or(256),
        qs_nt: raw.qs_nt.unwrap_or(64),
        qs_t_max: raw.qs_t_max.unwrap_or(PI),
        radial: raw
            .radial
            .unwrap_or(teichmuller::beltrami::DEFAULT_RADIAL_NODES),
        angular: raw
            .angular
            .unwrap_or(teichmuller::beltrami::DEFAULT_ANGULAR_NODES),
        max_degree: raw.max_degree.unwrap_or(6),
        samples: raw.samples.unwrap_or(1000),
    };
    config.validate()?;
    Ok(config)
}

/// Keys in `doc` that the config does not recognise, as dotted paths.
pub fn unknown_keys(doc: &Value) -> Vec<String> {
    let mut out = Vec::new();
    let Some(obj) = doc.as_object() else {
        return out;
    };
    for (k, v) in obj {
        if !KEYS.contains(&k.as_str()) {
            out.push(k.clone());
        } else if k == "tolerances" {
            let known: BTreeMap<_, _> = Tolerances::default().entries().into_iter().collect();
            if let Some(t) = v.as_object() {
                out.extend(
                    t.keys()
                        .filter(|t| !known.contains_key(t.as_str()))
                        .map(|t| format!("tolerances.{t}")),
                );
            }
        }
    }
    out
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.n == 0 {
            return Err(invalid("N must be positive"));
        }
        if self.m < 4 * self.n {
            return Err(invalid(format!(
                "M = {} is below 4N = {}",
                self.m,
                4 * self.n
            )));
        }
        if !(self.eps > 0.0 && self.eps.is_finite()) {
            return Err(invalid(format!("eps = {} must be positive", self.eps)));
        }
        if self.core == 0 || self.core > self.n {
            return Err(invalid(format!("core = {} must lie in 1..=N", self.core)));
        }
        for (name, tol) in self.tolerances.entries() {
            if !(tol > 0.0 && tol.is_finite()) {
                return Err(invalid(format!(
                    "tolerance {name} = {tol} must be positive"
                )));
            }
        }
        if self.modes.is_empty() || self.modes.iter().any(|&k| k < 2) {
            return Err(invalid("modes must be non-empty and at least 2"));
        }
        if self.qs_nx == 0 || self.qs_nt == 0 {
            return Err(invalid("quasisymmetry grid must be non-empty"));
        }
        if !(self.qs_t_max > 0.0 && self.qs_t_max <= PI) {
            return Err(invalid(format!(
                "qs_t_max = {} must lie in (0, π]",
                self.qs_t_max
            )));
        }
        if self.radial == 0 || self.angular == 0 {
            return Err(invalid("polar grid must be non-empty"));
        }
        if self.samples == 0 {
            return Err(invalid("samples must be positive"));
        }
        Ok(())
    }

    /// Loads the configured map, or the identity when none is given.
    pub fn load_map(&self, base: &Path) -> Result<MapSpec, CliError> {
        match &self.map {
            None => Ok(MapSpec::Identity),
            Some(MapSource::Inline(spec)) => Ok(spec.clone()),
            Some(MapSource::Path(p)) => {
                let path = base.join(p);
                let text = std::fs::read_to_string(&path).map_err(|e| {
                    invalid(format!("cannot read map spec {}: {e}", path.display()))
                })?;
                MapSpec::parse(&text)
                    .map_err(|e| invalid(format!("map spec {}: {e}", path.display())))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_object_gives_defaults() {
        let c = parse_config("{}", true).unwrap();
        assert_eq!((c.n, c.m, c.eps, c.core), (64, 256, 1e-3, 16));
        assert_eq!(c.modes, vec![2, 3, 4, 5]);
        assert_eq!(c.tolerances, Tolerances::default());
    }

    #[test]
    fn samples_default_follows_truncation() {
        let c = parse_config(r#"{"N":128}"#, true).unwrap();
        assert_eq!((c.m, c.core), (512, 32));
    }

    #[test]
    fn rejects_undersampling() {
        assert!(matches!(
            parse_config(r#"{"M":100,"N":64}"#, false),
            Err(CliError::Config(_))
        ));
    }

    #[test]
    fn unknown_keys_only_fail_in_strict_mode() {
        let text = r#"{"NN":32,"tolerances":{"symplectc":1e-3}}"#;
        assert!(parse_config(text, true).is_err());
        let c = parse_config(text, false).unwrap();
        assert_eq!(c.n, 64);
        let doc: Value = serde_json::from_str(text).unwrap();
        assert_eq!(
            unknown_keys(&doc),
            vec!["NN".to_string(), "tolerances.symplectc".to_string()]
        );
    }

    #[test]
    fn partial_tolerances_keep_other_defaults() {
        let c = parse_config(r#"{"tolerances":{"symplectic":1e-3}}"#, true).unwrap();
        assert_eq!(c.tolerances.symplectic, 1e-3);
        assert_eq!(c.tolerances.quadrature, 1e-6);
        assert!(parse_config(r#"{"tolerances":{"symplectic":-1}}"#, true).is_err());
    }

    #[test]
    fn map_may_be_inline_or_path() {
        let c = parse_config(r#"{"map":{"type":"rotation","theta":0.5}}"#, true).unwrap();
        assert_eq!(
            c.load_map(Path::new(".")).unwrap(),
            MapSpec::Rotation { theta: 0.5 }
        );
        let c = parse_config(r#"{"map":"maps/missing.json"}"#, true).unwrap();
        assert!(matches!(c.map, Some(MapSource::Path(_))));
        assert!(c.load_map(Path::new("/nonexistent")).is_err());
    }
}
