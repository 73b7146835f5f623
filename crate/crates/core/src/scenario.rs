//! Scenario files: surface data, sampling settings and tolerances in TOML.
//!
//! ```toml
//! name = "ex36"
//! a_expr = "sin(w)"
//! mu_expr = "1"
//! domain = [0.2, 0.8, -0.3, 0.3]   # u_min, u_max, v_min, v_max
//! w0 = [0.5, 0.0]                  # optional, defaults to the domain centre
//! p = [0.0, 0.0, 0.0, 0.0]         # optional
//! q = [0.0, 0.0, 0.0, 0.0]         # optional
//! thetas = [0.0, 3.141592653589793]
//! grid = [17, 17]
//! fd_step = 1e-3                   # optional
//! planar_domain = [0.0, 4.0, -1.0, 1.0]  # optional, rectangle for the planar scan
//! outputs = ["obj", "csv"]
//!
//! [tolerances]
//! pair = 1e-5
//! ```

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{HolomorphicFn, ParseError};
use crate::grid::Rect;
use crate::minkowski::RVec4;
use crate::quadrature::QuadratureOptions;
use crate::weierstrass::{SurfaceData, SurfaceError, DEFAULT_FD_STEP};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed scenario: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("{field}: {source}")]
    Expression { field: &'static str, source: ParseError },
    #[error("invalid scenario: {0}")]
    Invalid(String),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

/// Named numeric tolerances used by the check pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub monge_null: f64,
    /// Relative to `1 + λ²`.
    pub monge_conformal: f64,
    pub frame: f64,
    pub frame_zero: f64,
    /// Relative to `1 + |K|`.
    pub curvature: f64,
    pub curvature_sign: f64,
    pub path_independence: f64,
    pub weingarten: f64,
    pub pair: f64,
    pub jacobian: f64,
    pub quadrature: f64,
    pub regularity: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            monge_null: 1e-10,
            monge_conformal: 1e-8,
            frame: 1e-10,
            frame_zero: 1e-15,
            curvature: 1e-4,
            curvature_sign: 1e-12,
            path_independence: 1e-8,
            weingarten: 1e-4,
            pair: 1e-5,
            jacobian: 1e-12,
            quadrature: crate::quadrature::DEFAULT_TOLERANCE,
            regularity: crate::weierstrass::REGULARITY_EPS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputKind {
    Obj,
    Csv,
}

fn default_thetas() -> Vec<f64> {
    vec![0.0, std::f64::consts::PI]
}

fn default_grid() -> [usize; 2] {
    [17, 17]
}

fn default_outputs() -> Vec<OutputKind> {
    vec![OutputKind::Obj, OutputKind::Csv]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default)]
    pub name: Option<String>,
    pub a_expr: String,
    pub mu_expr: String,
    pub domain: [f64; 4],
    #[serde(default)]
    pub w0: Option<[f64; 2]>,
    #[serde(default, alias = "P")]
    pub p: [f64; 4],
    #[serde(default, alias = "Q")]
    pub q: [f64; 4],
    #[serde(default = "default_thetas")]
    pub thetas: Vec<f64>,
    #[serde(default = "default_grid")]
    pub grid: [usize; 2],
    #[serde(default)]
    pub fd_step: Option<f64>,
    #[serde(default)]
    pub planar_domain: Option<[f64; 4]>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default = "default_outputs")]
    pub outputs: Vec<OutputKind>,
}

fn rect_of(r: [f64; 4]) -> Rect {
    Rect::new(r[0], r[1], r[2], r[3])
}

impl ScenarioConfig {
    /// Parses and validates everything that does not need evaluation.
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let cfg: ScenarioConfig = toml::from_str(text)?;
        cfg.check()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| ConfigError::Io { path: path.display().to_string(), source })?;
        Self::from_toml(&text)
    }

    fn check(&self) -> Result<(), ConfigError> {
        let invalid = |m: String| Err(ConfigError::Invalid(m));
        self.a()?;
        self.mu()?;
        if !self.domain_rect().is_nondegenerate() {
            return invalid(format!("domain {:?} is degenerate", self.domain));
        }
        if let Some(r) = self.planar_domain {
            if !rect_of(r).is_nondegenerate() {
                return invalid(format!("planar_domain {r:?} is degenerate"));
            }
        }
        if self.grid[0] < 2 || self.grid[1] < 2 {
            return invalid(format!("grid must be at least 2x2, got {}x{}", self.grid[0], self.grid[1]));
        }
        if self.thetas.iter().any(|t| !t.is_finite()) {
            return invalid("thetas must be finite".into());
        }
        if let Some(h) = self.fd_step {
            if !(h > 0.0 && h.is_finite()) {
                return invalid(format!("fd_step must be positive, got {h}"));
            }
        }
        let finite = self.p.iter().chain(&self.q).chain(self.w0.iter().flatten()).all(|x| x.is_finite());
        if !finite {
            return invalid("p, q and w0 must be finite".into());
        }
        Ok(())
    }

    pub fn display_name(&self) -> &str {
        self.name.as_deref().unwrap_or("surface")
    }

    pub fn a(&self) -> Result<HolomorphicFn, ConfigError> {
        HolomorphicFn::parse(&self.a_expr).map_err(|source| ConfigError::Expression { field: "a_expr", source })
    }

    pub fn mu(&self) -> Result<HolomorphicFn, ConfigError> {
        HolomorphicFn::parse(&self.mu_expr).map_err(|source| ConfigError::Expression { field: "mu_expr", source })
    }

    pub fn domain_rect(&self) -> Rect {
        rect_of(self.domain)
    }

    /// Rectangle for the planar-point scan.
    pub fn planar_rect(&self) -> Rect {
        self.planar_domain.map(rect_of).unwrap_or_else(|| self.domain_rect())
    }

    pub fn fd_step(&self) -> f64 {
        self.fd_step.unwrap_or(DEFAULT_FD_STEP)
    }

    pub fn w0(&self) -> Complex64 {
        match self.w0 {
            Some([u, v]) => Complex64::new(u, v),
            None => self.domain_rect().centre(),
        }
    }

    /// Surface data without the regularity scan.
    pub fn surface_data(&self) -> Result<SurfaceData, ConfigError> {
        let quadrature = QuadratureOptions { tol: self.tolerances.quadrature, ..QuadratureOptions::default() };
        Ok(SurfaceData::new(
            self.a()?,
            self.mu()?,
            self.domain_rect(),
            self.w0(),
            RVec4(self.p),
            RVec4(self.q),
        )?
        .with_quadrature(quadrature))
    }
}

/// The bundled example scenarios.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExampleId {
    Ex36,
    Ex37,
    Ex38,
}

impl ExampleId {
    pub const ALL: [ExampleId; 3] = [ExampleId::Ex36, ExampleId::Ex37, ExampleId::Ex38];

    pub fn name(self) -> &'static str {
        match self {
            ExampleId::Ex36 => "ex36",
            ExampleId::Ex37 => "ex37",
            ExampleId::Ex38 => "ex38",
        }
    }

    pub fn source(self) -> &'static str {
        match self {
            ExampleId::Ex36 => include_str!("../fixtures/ex36.toml"),
            ExampleId::Ex37 => include_str!("../fixtures/ex37.toml"),
            ExampleId::Ex38 => include_str!("../fixtures/ex38.toml"),
        }
    }

    pub fn config(self) -> ScenarioConfig {
        ScenarioConfig::from_toml(self.source()).expect("bundled scenario is valid")
    }
}

impl fmt::Display for ExampleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown example '{0}' (expected one of ex36, ex37, ex38)")]
pub struct UnknownExample(pub String);

impl FromStr for ExampleId {
    type Err = UnknownExample;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ExampleId::ALL.into_iter().find(|e| e.name() == s).ok_or_else(|| UnknownExample(s.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_examples_parse_and_are_regular() {
        for id in ExampleId::ALL {
            let cfg = id.config();
            assert_eq!(cfg.display_name(), id.name());
            let sd = cfg.surface_data().unwrap();
            sd.validate().unwrap_or_else(|e| panic!("{id}: {e}"));
        }
    }

    #[test]
    fn example_ids_round_trip() {
        for id in ExampleId::ALL {
            assert_eq!(id.name().parse::<ExampleId>(), Ok(id));
        }
        assert!("ex39".parse::<ExampleId>().is_err());
    }

    #[test]
    fn defaults_apply() {
        let cfg = ScenarioConfig::from_toml("a_expr = \"w\"\nmu_expr = \"1\"\ndomain = [0, 1, 0, 2]\n").unwrap();
        assert_eq!(cfg.grid, [17, 17]);
        assert_eq!(cfg.w0(), Complex64::new(0.5, 1.0));
        assert_eq!(cfg.tolerances, Tolerances::default());
        assert_eq!(cfg.outputs, vec![OutputKind::Obj, OutputKind::Csv]);
        assert_eq!(cfg.planar_rect(), cfg.domain_rect());
    }

    #[test]
    fn uppercase_offsets_are_accepted() {
        let cfg = ScenarioConfig::from_toml("a_expr = \"w\"\nmu_expr = \"1\"\ndomain = [0, 1, 0, 1]\nP = [1, 2, 3, 4]\n").unwrap();
        assert_eq!(cfg.p, [1.0, 2.0, 3.0, 4.0]);
    }

    #[test]
    fn rejects_bad_scenarios() {
        let base = "mu_expr = \"1\"\ndomain = [0, 1, 0, 1]\n";
        let bad = [
            format!("a_expr = \"conj(w)\"\n{base}"),
            format!("a_expr = \"w +\"\n{base}"),
            "a_expr = \"w\"\nmu_expr = \"1\"\ndomain = [1, 1, 0, 1]\n".to_string(),
            format!("a_expr = \"w\"\n{base}grid = [1, 5]\n"),
            format!("a_expr = \"w\"\n{base}colour = 3\n"),
            format!("a_expr = \"w\"\n{base}[tolerances]\npiar = 1e-5\n"),
            format!("a_expr = \"w\"\n{base}fd_step = -1.0\n"),
        ];
        for text in bad {
            assert!(ScenarioConfig::from_toml(&text).is_err(), "{text}");
        }
    }

    #[test]
    fn base_point_outside_domain_is_a_surface_error() {
        let cfg = ScenarioConfig::from_toml("a_expr = \"w\"\nmu_expr = \"1\"\ndomain = [0, 1, 0, 1]\nw0 = [2, 0]\n").unwrap();
        assert!(matches!(cfg.surface_data(), Err(ConfigError::Surface(SurfaceError::BaseOutsideDomain { .. }))));
    }
}
