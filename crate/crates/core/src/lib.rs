//! Solvers for the one-dimensional Dirac equation on two coupled half-lines
//! or finite intervals.
//!
//! * [`massless`]: exact transport solutions.
//! * [`massive`]: spectral integral representations evaluated by oscillatory
//!   quadrature, fed with interface traces from [`reference`].
//! * [`reference`]: characteristic-mesh solver used as ground truth.

pub mod config;
pub mod cubic;
pub mod error;
pub mod massive;
pub mod massless;
pub mod model;
pub mod profile;
pub mod quadrature;
pub mod reference;
pub mod scenario;
pub mod transform;

pub use config::{ConfigError, ScenarioConfig};
pub use error::{Error, Result};
pub use massless::{eval_massless, MasslessScenario};
pub use model::{Component, Geometry, GeometryKind, QueryPoint, Region, RegionParams};
pub use num_complex::Complex64;
pub use profile::Profile;
pub use reference::{solve_reference, ReferenceSolution, TraceKind, TraceTable};
pub use scenario::{BoundaryData, Scenario};
pub use massive::{
    eval_massive_finite, eval_massive_halfline, structural_dependency_check, MassiveEvaluator, QuadratureSpec, TermVariant,
};
