//! JSON scenario files.
//!
//! Parsing is strict: unknown keys are rejected and every physical quantity
//! is validated before a solver runs. Errors carry the JSON line and column
//! (syntax, unknown keys, wrong types) or the dotted field path (values).

use std::fmt;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::massive::{QuadratureSpec, TermVariant};
use crate::model::{Component, Geometry, QueryPoint, Region};
use crate::profile::Profile;
use crate::scenario::{BoundaryData, Scenario};

/// A real number or a `[re, im]` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Amplitude {
    Real(f64),
    Complex([f64; 2]),
}

impl Default for Amplitude {
    fn default() -> Self {
        Amplitude::Real(1.0)
    }
}

impl Amplitude {
    pub fn value(&self) -> Complex64 {
        match *self {
            Amplitude::Real(r) => Complex64::new(r, 0.0),
            Amplitude::Complex([re, im]) => Complex64::new(re, im),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProfileConfig {
    #[default]
    Zero,
    GaussianWindow {
        center: f64,
        width: f64,
        /// Defaults to six widths.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        radius: Option<f64>,
        #[serde(default)]
        amplitude: Amplitude,
    },
    DecayingExponential {
        rate: f64,
        #[serde(default)]
        amplitude: Amplitude,
    },
    SampledGrid {
        nodes: Vec<f64>,
        values: Vec<Amplitude>,
    },
    Sum {
        terms: Vec<ProfileConfig>,
    },
}

impl ProfileConfig {
    pub fn build(&self) -> crate::Result<Profile> {
        Ok(match self {
            ProfileConfig::Zero => Profile::Zero,
            ProfileConfig::GaussianWindow { center, width, radius, amplitude } => {
                Profile::gaussian_window(*center, *width, radius.unwrap_or(6.0 * width), amplitude.value())?
            }
            ProfileConfig::DecayingExponential { rate, amplitude } => Profile::exponential(*rate, amplitude.value())?,
            ProfileConfig::SampledGrid { nodes, values } => {
                let v: Vec<Complex64> = values.iter().map(Amplitude::value).collect();
                Profile::sampled(nodes.clone(), &v)?
            }
            ProfileConfig::Sum { terms } => Profile::Sum(terms.iter().map(ProfileConfig::build).collect::<crate::Result<_>>()?),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GeometryConfig {
    TwoHalfLines { horizon: f64 },
    TwoFiniteIntervals { length: f64, horizon: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct ComponentPair {
    #[serde(default)]
    pub psi1: ProfileConfig,
    #[serde(default)]
    pub psi2: ProfileConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct InitialConfig {
    #[serde(default)]
    pub left: ComponentPair,
    #[serde(default)]
    pub right: ComponentPair,
}

/// Outer boundary data: inflow rows drive the problem, outflow rows are
/// optional and only compared.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct BoundaryConfig {
    /// `Psi1(-L, t)`.
    #[serde(default)]
    pub left_psi1: ProfileConfig,
    /// `Psi2(L, t)`.
    #[serde(default)]
    pub right_psi2: ProfileConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub left_psi2: Option<ProfileConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub right_psi1: Option<ProfileConfig>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReferenceConfig {
    #[serde(default = "default_dx")]
    pub dx: f64,
}

fn default_dx() -> f64 {
    1.0 / 1024.0
}

impl Default for ReferenceConfig {
    fn default() -> Self {
        ReferenceConfig { dx: default_dx() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QueryConfig {
    /// `[lo, hi]` for the left region; defaults to `[-3, 0]` or `[-L, 0]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub left: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub right: Option<[f64; 2]>,
    /// Points per region, endpoints included.
    #[serde(default = "default_x_count")]
    pub x_count: usize,
    pub times: Vec<f64>,
}

fn default_x_count() -> usize {
    21
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// Relative paths resolve against the config file's directory.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub geometry: GeometryConfig,
    pub masses: [f64; 2],
    #[serde(default)]
    pub initial: InitialConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary: Option<BoundaryConfig>,
    #[serde(default)]
    pub quadrature: QuadratureSpec,
    #[serde(default)]
    pub reference: ReferenceConfig,
    pub query: QueryConfig,
    #[serde(default)]
    pub output: OutputConfig,
    /// Evaluate the corrected term lists instead of the printed ones.
    #[serde(default)]
    pub erratum_fixes: bool,
}

#[derive(Debug)]
pub enum ConfigError {
    Io { path: PathBuf, source: std::io::Error },
    Syntax { line: usize, column: usize, message: String },
    Invalid { field: String, message: String },
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Io { path, source } => write!(f, "cannot read {}: {source}", path.display()),
            ConfigError::Syntax { line, column, message } => write!(f, "line {line}, column {column}: {message}"),
            ConfigError::Invalid { field, message } => write!(f, "{field}: {message}"),
        }
    }
}

impl std::error::Error for ConfigError {}

fn invalid(field: &str, message: impl fmt::Display) -> ConfigError {
    ConfigError::Invalid { field: field.to_string(), message: message.to_string() }
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<ScenarioConfig, ConfigError> {
        let cfg: ScenarioConfig = serde_json::from_str(text).map_err(|e| ConfigError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<ScenarioConfig, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.to_path_buf(), source })?;
        ScenarioConfig::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn variant(&self) -> TermVariant {
        if self.erratum_fixes {
            TermVariant::Corrected
        } else {
            TermVariant::Printed
        }
    }

    /// Checks every value and builds the scenario once to surface model
    /// errors with a field path.
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.scenario()?;
        self.quadrature.validate().map_err(|e| invalid("quadrature", e))?;
        let dx = self.reference.dx;
        if !(dx > 0.0 && dx.is_finite()) {
            return Err(invalid("reference.dx", format!("must be positive, got {dx}")));
        }
        let horizon = self.horizon();
        if self.query.times.is_empty() {
            return Err(invalid("query.times", "needs at least one time"));
        }
        for (n, &t) in self.query.times.iter().enumerate() {
            if !(t >= 0.0 && t <= horizon) {
                return Err(invalid(&format!("query.times[{n}]"), format!("{t} is outside [0, {horizon}]")));
            }
            let r = t / dx;
            if (r - r.round()).abs() > 1e-9 * r.max(1.0) {
                return Err(invalid(&format!("query.times[{n}]"), format!("{t} is not a multiple of reference.dx = {dx}")));
            }
        }
        if self.query.x_count < 1 {
            return Err(invalid("query.x_count", "must be at least 1"));
        }
        for region in Region::BOTH {
            let [lo, hi] = self.x_range(region);
            let geometry = self.geometry();
            let (a, b) = geometry.region_bounds(region);
            if !(lo <= hi && lo >= a && hi <= b && lo.is_finite() && hi.is_finite()) {
                return Err(invalid(&format!("query.{}", region.name()), format!("[{lo}, {hi}] is not inside [{a}, {b}]")));
            }
        }
        Ok(())
    }

    fn horizon(&self) -> f64 {
        match self.geometry {
            GeometryConfig::TwoHalfLines { horizon } | GeometryConfig::TwoFiniteIntervals { horizon, .. } => horizon,
        }
    }

    fn geometry(&self) -> Geometry {
        // only called after scenario() validated the values
        match self.geometry {
            GeometryConfig::TwoHalfLines { horizon } => Geometry::half_lines(horizon),
            GeometryConfig::TwoFiniteIntervals { length, horizon } => Geometry::finite(length, horizon),
        }
        .expect("validated geometry")
    }

    pub fn scenario(&self) -> Result<Scenario, ConfigError> {
        let geometry = match self.geometry {
            GeometryConfig::TwoHalfLines { horizon } => Geometry::half_lines(horizon),
            GeometryConfig::TwoFiniteIntervals { length, horizon } => Geometry::finite(length, horizon),
        }
        .map_err(|e| invalid("geometry", e))?;
        for (n, m) in self.masses.iter().enumerate() {
            if !(*m >= 0.0 && m.is_finite()) {
                return Err(invalid(&format!("masses[{n}]"), format!("must be nonnegative, got {m}")));
            }
        }
        let build = |field: &str, p: &ProfileConfig| p.build().map_err(|e| invalid(field, e));
        let i = &self.initial;
        let initial = [
            [build("initial.left.psi1", &i.left.psi1)?, build("initial.left.psi2", &i.left.psi2)?],
            [build("initial.right.psi1", &i.right.psi1)?, build("initial.right.psi2", &i.right.psi2)?],
        ];
        let boundary = match (&self.boundary, geometry.is_finite()) {
            (Some(b), true) => {
                let opt = |field: &str, p: &Option<ProfileConfig>| {
                    p.as_ref().map(|p| build(field, p).map(std::sync::Arc::new)).transpose()
                };
                let mut data = BoundaryData::inflow(build("boundary.left_psi1", &b.left_psi1)?, build("boundary.right_psi2", &b.right_psi2)?);
                data.left_outflow = opt("boundary.left_psi2", &b.left_psi2)?;
                data.right_outflow = opt("boundary.right_psi1", &b.right_psi1)?;
                Some(data)
            }
            (None, true) => Some(BoundaryData::zero()),
            (Some(_), false) => return Err(invalid("boundary", "half-lines take no outer boundary data")),
            (None, false) => None,
        };
        Scenario::new(geometry, self.masses, initial, boundary).map_err(|e| invalid("initial", e))
    }

    pub fn x_range(&self, region: Region) -> [f64; 2] {
        let l = match self.geometry {
            GeometryConfig::TwoFiniteIntervals { length, .. } => length,
            GeometryConfig::TwoHalfLines { .. } => 3.0,
        };
        match region {
            Region::Left => self.query.left.unwrap_or([-l, 0.0]),
            Region::Right => self.query.right.unwrap_or([0.0, l]),
        }
    }

    /// Largest `|x|` on the query grid.
    pub fn x_extent(&self) -> f64 {
        Region::BOTH.iter().flat_map(|r| self.x_range(*r)).fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Evenly spaced positions of one region.
    pub fn xs(&self, region: Region) -> Vec<f64> {
        let [lo, hi] = self.x_range(region);
        let n = self.query.x_count;
        if n == 1 {
            return vec![lo];
        }
        (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
    }

    /// Every `(point, component)` pair of the query grid, time-major.
    pub fn query_points(&self) -> Vec<(QueryPoint, Component)> {
        let mut out = Vec::new();
        for &t in &self.query.times {
            for region in Region::BOTH {
                for comp in Component::BOTH {
                    for x in self.xs(region) {
                        out.push((QueryPoint::new(x, t, region), comp));
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"{
  "name": "sample",
  "geometry": {"kind": "two_finite_intervals", "length": 2.0, "horizon": 1.5},
  "masses": [1.0, 2.0],
  "initial": {
    "left": {"psi1": {"type": "gaussian_window", "center": -1.0, "width": 0.3}},
    "right": {"psi2": {"type": "decaying_exponential", "rate": 3.0, "amplitude": [0.0, 1.0]}}
  },
  "boundary": {"left_psi1": {"type": "zero"}, "right_psi1": {"type": "zero"}},
  "quadrature": {"tail_tolerance": 1e-4},
  "query": {"x_count": 5, "times": [0.5, 1.5]},
  "erratum_fixes": true
}"#;

    #[test]
    fn parses_and_builds() {
        let cfg = ScenarioConfig::from_json(SAMPLE).unwrap();
        assert_eq!(cfg.quadrature.tail_tolerance, 1e-4);
        assert_eq!(cfg.quadrature.nodes_per_panel, 16);
        assert_eq!(cfg.variant(), TermVariant::Corrected);
        let s = cfg.scenario().unwrap();
        assert_eq!(s.masses(), [1.0, 2.0]);
        assert!(s.boundary.as_ref().unwrap().right_outflow.is_some());
        assert_eq!(cfg.xs(Region::Left), vec![-2.0, -1.5, -1.0, -0.5, 0.0]);
        assert_eq!(cfg.query_points().len(), 2 * 2 * 2 * 5);
    }

    #[test]
    fn round_trip_preserves_fields() {
        let cfg = ScenarioConfig::from_json(SAMPLE).unwrap();
        let again = ScenarioConfig::from_json(&cfg.to_json()).unwrap();
        assert_eq!(cfg, again);
    }

    #[test]
    fn unknown_keys_report_position() {
        let text = SAMPLE.replace("\"masses\"", "\"mass\"");
        match ScenarioConfig::from_json(&text) {
            Err(ConfigError::Syntax { line, .. }) => assert!(line >= 1),
            other => panic!("unexpected {other:?}"),
        }
        let text = SAMPLE.replace("\"width\": 0.3", "\"width\": 0.3, \"sigma\": 1");
        assert!(matches!(ScenarioConfig::from_json(&text), Err(ConfigError::Syntax { .. })));
    }

    #[test]
    fn bad_values_name_the_field() {
        let field_of = |text: &str| match ScenarioConfig::from_json(text) {
            Err(ConfigError::Invalid { field, .. }) => field,
            other => panic!("unexpected {other:?}"),
        };
        assert_eq!(field_of(&SAMPLE.replace("[1.0, 2.0]", "[-1.0, 2.0]")), "masses[0]");
        assert_eq!(field_of(&SAMPLE.replace("\"width\": 0.3", "\"width\": -0.3")), "initial.left.psi1");
        assert_eq!(field_of(&SAMPLE.replace("[0.5, 1.5]", "[0.5, 2.0]")), "query.times[1]");
        assert_eq!(field_of(&SAMPLE.replace("[0.5, 1.5]", "[0.1]")), "query.times[0]");
    }
}
