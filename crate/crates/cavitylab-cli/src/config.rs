//! Experiment configuration, stored as TOML.
//!
//! ```toml
//! geometry = "small-cavity"
//! formulation = "dirichlet-aprime"
//! theta = 1.2566370614359172
//! ppw = 10.0
//! tolerance = 1e-6
//! output_dir = "out"
//! workers = 1
//! k = { list = [100.0] }
//! ```
//!
//! `k` is one of `{ list = [...] }`, `{ range = [lo, hi] }` (integers,
//! inclusive), `{ grid = { start, stop, step } }`,
//! `{ quasimode_file = { path, k_min, k_max } }` or
//! `{ quasimodes = { n, parity, bc, k_min, k_max } }`.

use cavitylab::bound::OutlierRegion;
use cavitylab::geometry::{make_circle, make_ellipse, make_large_cavity, make_small_cavity, BoundaryCurve};
use cavitylab::bem::Formulation;
use cavitylab::quasimodes::{find_mode, read_quasimode_csv, BoundaryCondition, EllipseSpec, Parity};
use cavitylab::spectral::Rectangle;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::path::{Path, PathBuf};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{0}")]
    Syntax(#[from] toml::de::Error),
    #[error("`{field}`: {message}")]
    Invalid { field: &'static str, message: String },
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("quasimode source: {0}")]
    Quasimodes(#[from] cavitylab::error::Error),
}

fn bad(field: &'static str, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid { field, message: message.into() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Geometry {
    SmallCavity,
    LargeCavity,
    Ellipse,
    Circle,
}

impl Geometry {
    pub fn curve(self) -> BoundaryCurve {
        match self {
            Geometry::SmallCavity => make_small_cavity(),
            Geometry::LargeCavity => make_large_cavity(),
            Geometry::Ellipse => make_ellipse(1.0, 0.5).expect("fixed ellipse"),
            Geometry::Circle => make_circle(1.0).expect("fixed circle"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormulationName {
    DirichletAprime,
    NeumannB,
    NeumannBreg,
}

impl From<FormulationName> for Formulation {
    fn from(f: FormulationName) -> Self {
        match f {
            FormulationName::DirichletAprime => Formulation::DirichletAprime,
            FormulationName::NeumannB => Formulation::NeumannB,
            FormulationName::NeumannBreg => Formulation::NeumannBreg,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuasimodeFile {
    pub path: PathBuf,
    #[serde(default)]
    pub k_min: Option<f64>,
    #[serde(default)]
    pub k_max: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuasimodeFamily {
    #[serde(default)]
    pub n: usize,
    #[serde(default = "default_parity")]
    pub parity: String,
    #[serde(default = "default_bc")]
    pub bc: String,
    pub k_min: f64,
    pub k_max: f64,
}

fn default_parity() -> String {
    "even".into()
}

fn default_bc() -> String {
    "dirichlet".into()
}

impl QuasimodeFamily {
    pub fn parity(&self) -> Result<Parity, ConfigError> {
        self.parity.parse().map_err(|e: cavitylab::error::Error| bad("k.quasimodes.parity", e.to_string()))
    }

    pub fn bc(&self) -> Result<BoundaryCondition, ConfigError> {
        self.bc.parse().map_err(|e: cavitylab::error::Error| bad("k.quasimodes.bc", e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum KSource {
    List(Vec<f64>),
    Range([i64; 2]),
    Grid(Grid),
    QuasimodeFile(QuasimodeFile),
    Quasimodes(QuasimodeFamily),
}

impl Default for KSource {
    fn default() -> Self {
        KSource::List(Vec::new())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RectangleConfig {
    pub re: [f64; 2],
    pub im: [f64; 2],
}

impl Default for RectangleConfig {
    fn default() -> Self {
        let r = Rectangle::default();
        RectangleConfig { re: [r.re.0, r.re.1], im: [r.im.0, r.im.1] }
    }
}

impl RectangleConfig {
    pub fn rectangle(&self) -> Rectangle {
        Rectangle { re: (self.re[0], self.re[1]), im: (self.im[0], self.im[1]) }
    }
}

/// Parameters of the cluster-plus-outliers bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BoundConfig {
    pub epsilon: f64,
    pub l0: f64,
    pub l1: f64,
    /// Half-plane threshold; `l1` when absent.
    pub s_threshold: Option<f64>,
    /// Radius of the outlier region; `‖B‖₂` when absent.
    pub outlier_radius: Option<f64>,
    /// Run on this many random cluster matrices instead of the BEM systems.
    pub synthetic: Option<usize>,
    pub synthetic_size: usize,
}

impl Default for BoundConfig {
    fn default() -> Self {
        BoundConfig {
            epsilon: 1e-6,
            l0: 0.2,
            l1: 0.4,
            s_threshold: None,
            outlier_radius: None,
            synthetic: None,
            synthetic_size: 60,
        }
    }
}

impl BoundConfig {
    pub fn threshold(&self) -> f64 {
        self.s_threshold.unwrap_or(self.l1)
    }

    pub fn region(&self, norm2: f64) -> OutlierRegion {
        OutlierRegion::LeftOfThreshold { radius: self.outlier_radius.unwrap_or(norm2) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FieldConfig {
    pub x: [f64; 2],
    pub y: [f64; 2],
    pub nx: usize,
    pub ny: usize,
}

impl Default for FieldConfig {
    fn default() -> Self {
        FieldConfig { x: [-2.0, 2.0], y: [-1.5, 1.5], nx: 81, ny: 61 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuasimodeListConfig {
    pub a1: f64,
    pub a2: f64,
    pub n: usize,
    pub m: [usize; 2],
    pub parity: String,
    pub bc: String,
}

impl Default for QuasimodeListConfig {
    fn default() -> Self {
        QuasimodeListConfig { a1: 1.0, a2: 0.5, n: 0, m: [0, 20], parity: default_parity(), bc: default_bc() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_geometry")]
    pub geometry: Geometry,
    #[serde(default = "default_formulation")]
    pub formulation: FormulationName,
    #[serde(default)]
    pub k: KSource,
    #[serde(default = "default_theta")]
    pub theta: f64,
    #[serde(default = "default_ppw")]
    pub ppw: f64,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default)]
    pub rectangle: RectangleConfig,
    #[serde(default = "default_output")]
    pub output_dir: PathBuf,
    #[serde(default = "default_workers")]
    pub workers: usize,
    /// Replace every system matrix by the identity (pipeline checks).
    #[serde(default)]
    pub debug_identity: bool,
    #[serde(default = "default_refinements")]
    pub refinements: Vec<usize>,
    #[serde(default)]
    pub bound: BoundConfig,
    #[serde(default)]
    pub field: FieldConfig,
    #[serde(default)]
    pub quasimodes: QuasimodeListConfig,
}

fn default_geometry() -> Geometry {
    Geometry::SmallCavity
}
fn default_formulation() -> FormulationName {
    FormulationName::DirichletAprime
}
fn default_theta() -> f64 {
    4.0 * PI / 10.0
}
fn default_ppw() -> f64 {
    10.0
}
fn default_tolerance() -> f64 {
    1e-6
}
fn default_output() -> PathBuf {
    PathBuf::from("out")
}
fn default_workers() -> usize {
    1
}
fn default_refinements() -> Vec<usize> {
    vec![2, 3, 6]
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        toml::from_str("").expect("all fields have defaults")
    }
}

impl ExperimentConfig {
    /// Parses and validates.
    pub fn from_toml_str(text: &str) -> Result<Self, ConfigError> {
        let cfg: ExperimentConfig = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.into(), source })?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serialises")
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let finite = |field, v: f64| if v.is_finite() { Ok(()) } else { Err(bad(field, "must be finite")) };
        finite("theta", self.theta)?;
        if !(self.ppw >= 2.0 && self.ppw.is_finite()) {
            return Err(bad("ppw", format!("{} must be at least 2", self.ppw)));
        }
        if !(self.tolerance > 0.0 && self.tolerance <= 1.0) {
            return Err(bad("tolerance", format!("{} must lie in (0, 1]", self.tolerance)));
        }
        if self.workers == 0 || self.workers > 1024 {
            return Err(bad("workers", "must lie in 1..=1024"));
        }
        self.rectangle.rectangle().validate().map_err(|e| bad("rectangle", e.to_string()))?;
        if self.refinements.is_empty() || self.refinements.iter().any(|&f| f < 2 || f > 16) {
            return Err(bad("refinements", "need at least one factor, each in 2..=16"));
        }
        let b = &self.bound;
        if !(b.epsilon > 0.0 && b.epsilon <= 1.0) {
            return Err(bad("bound.epsilon", "must lie in (0, 1]"));
        }
        if !(b.l0 > 0.0 && b.l0 < b.l1 && b.l1.is_finite()) {
            return Err(bad("bound.l0", "need 0 < l0 < l1"));
        }
        if let Some(s) = b.s_threshold {
            if !(s > 0.0 && s.is_finite()) {
                return Err(bad("bound.s_threshold", "must be positive"));
            }
        }
        if let Some(r) = b.outlier_radius {
            if !(r > 0.0 && r.is_finite()) {
                return Err(bad("bound.outlier_radius", "must be positive"));
            }
        }
        if b.synthetic_size < 4 || b.synthetic_size > 2000 {
            return Err(bad("bound.synthetic_size", "must lie in 4..=2000"));
        }
        let f = &self.field;
        if !(f.x[0] < f.x[1] && f.y[0] < f.y[1]) || f.x.iter().chain(&f.y).any(|v| !v.is_finite()) {
            return Err(bad("field", "x and y must be finite increasing intervals"));
        }
        if f.nx < 1 || f.ny < 1 || f.nx.saturating_mul(f.ny) > 4_000_000 {
            return Err(bad("field", "grid must have between 1 and 4e6 points"));
        }
        let q = &self.quasimodes;
        EllipseSpec::new(q.a1, q.a2).map_err(|e| bad("quasimodes", e.to_string()))?;
        if q.m[0] >= q.m[1] {
            return Err(bad("quasimodes.m", "need m[0] < m[1]"));
        }
        q.parity.parse::<Parity>().map_err(|e| bad("quasimodes.parity", e.to_string()))?;
        q.bc.parse::<BoundaryCondition>().map_err(|e| bad("quasimodes.bc", e.to_string()))?;
        self.validate_k()
    }

    fn validate_k(&self) -> Result<(), ConfigError> {
        let positive = |v: f64| v > 0.0 && v.is_finite();
        match &self.k {
            KSource::List(ks) => {
                if let Some(k) = ks.iter().find(|&&k| !positive(k)) {
                    return Err(bad("k.list", format!("wavenumber {k} must be positive")));
                }
            }
            KSource::Range([lo, hi]) => {
                if *lo < 1 || hi < lo || hi - lo > 100_000 {
                    return Err(bad("k.range", "need 1 <= lo <= hi with at most 1e5 values"));
                }
            }
            KSource::Grid(g) => {
                if !(positive(g.start) && positive(g.step) && g.stop >= g.start && g.stop.is_finite()) {
                    return Err(bad("k.grid", "need start > 0, step > 0 and stop >= start"));
                }
                if (g.stop - g.start) / g.step > 1e6 {
                    return Err(bad("k.grid", "more than 1e6 grid points"));
                }
            }
            KSource::QuasimodeFile(f) => window("k.quasimode_file", f.k_min, f.k_max)?,
            KSource::Quasimodes(q) => {
                q.parity()?;
                q.bc()?;
                window("k.quasimodes", Some(q.k_min), Some(q.k_max))?;
                if q.k_max > 1e4 {
                    return Err(bad("k.quasimodes", "k_max above 1e4"));
                }
            }
        }
        Ok(())
    }

    /// Wavenumbers in increasing order, duplicates removed.
    pub fn wavenumbers(&self) -> Result<Vec<f64>, ConfigError> {
        let mut ks = match &self.k {
            KSource::List(ks) => ks.clone(),
            KSource::Range([lo, hi]) => (*lo..=*hi).map(|k| k as f64).collect(),
            KSource::Grid(g) => {
                let n = ((g.stop - g.start) / g.step + 1e-9).floor() as usize;
                (0..=n).map(|i| g.start + i as f64 * g.step).collect()
            }
            KSource::QuasimodeFile(f) => {
                let text = std::fs::read_to_string(&f.path)
                    .map_err(|source| ConfigError::Io { path: f.path.clone(), source })?;
                read_quasimode_csv(&text)?
                    .into_iter()
                    .map(|m| m.k)
                    .filter(|&k| f.k_min.map_or(true, |a| k > a) && f.k_max.map_or(true, |b| k < b))
                    .collect()
            }
            KSource::Quasimodes(q) => quasimode_family(q)?,
        };
        ks.sort_by(f64::total_cmp);
        ks.dedup();
        Ok(ks)
    }
}

fn window(field: &'static str, lo: Option<f64>, hi: Option<f64>) -> Result<(), ConfigError> {
    if let (Some(a), Some(b)) = (lo, hi) {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(bad(field, "need k_min < k_max"));
        }
    }
    Ok(())
}

/// `k_{m,n}` on the unit ellipse `(1, 0.5)` for all `m` with the frequency
/// strictly inside `(k_min, k_max)`.
fn quasimode_family(q: &QuasimodeFamily) -> Result<Vec<f64>, ConfigError> {
    let ellipse = EllipseSpec::new(1.0, 0.5)?;
    let (parity, bc) = (q.parity()?, q.bc()?);
    let mut out = Vec::new();
    for m in 0.. {
        let k = find_mode(m, q.n, parity, bc, &ellipse)?.k;
        if k >= q.k_max {
            break;
        }
        if k > q.k_min {
            out.push(k);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let c = ExperimentConfig::default();
        assert_eq!(c.ppw, 10.0);
        assert!((c.theta - 4.0 * PI / 10.0).abs() < 1e-15);
        assert_eq!(c.tolerance, 1e-6);
        assert!(c.wavenumbers().unwrap().is_empty());
    }

    #[test]
    fn unknown_field_is_rejected() {
        let e = ExperimentConfig::from_toml_str("ppw = 10.0\nwavenumber = 3\n").unwrap_err();
        assert!(e.to_string().contains("wavenumber"), "{e}");
    }

    #[test]
    fn k_sources() {
        let c = ExperimentConfig::from_toml_str("k = { range = [3, 5] }").unwrap();
        assert_eq!(c.wavenumbers().unwrap(), vec![3.0, 4.0, 5.0]);
        let c = ExperimentConfig::from_toml_str("k = { grid = { start = 1.0, stop = 1.1, step = 0.025 } }").unwrap();
        assert_eq!(c.wavenumbers().unwrap().len(), 5);
        let c = ExperimentConfig::from_toml_str("k = { list = [2.0, 1.0, 2.0] }").unwrap();
        assert_eq!(c.wavenumbers().unwrap(), vec![1.0, 2.0]);
        assert!(ExperimentConfig::from_toml_str("k = { list = [-1.0] }").is_err());
        assert!(ExperimentConfig::from_toml_str("k = { grid = { start = 1.0, stop = 2.0, step = 0.0 } }").is_err());
    }

    #[test]
    fn quasimode_family_window() {
        let c = ExperimentConfig::from_toml_str("k = { quasimodes = { k_min = 10.0, k_max = 30.0 } }").unwrap();
        let ks = c.wavenumbers().unwrap();
        assert!(!ks.is_empty());
        assert!(ks.iter().all(|&k| k > 10.0 && k < 30.0));
    }

    #[test]
    fn round_trip() {
        let mut c = ExperimentConfig::default();
        c.k = KSource::Grid(Grid { start: 10.0, stop: 11.0, step: 0.025 });
        c.theta = 0.1 + 0.2;
        c.bound.synthetic = Some(7);
        let back = ExperimentConfig::from_toml_str(&c.to_toml_string()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn validation_names_the_field() {
        for (text, field) in [
            ("ppw = 1.0", "ppw"),
            ("tolerance = 0.0", "tolerance"),
            ("workers = 0", "workers"),
            ("[bound]\nl0 = 0.5\nl1 = 0.4", "bound.l0"),
            ("[rectangle]\nre = [0.1, -0.1]\nim = [0.0, 1.0]", "rectangle"),
        ] {
            let e = ExperimentConfig::from_toml_str(text).unwrap_err();
            assert!(e.to_string().contains(field), "{text}: {e}");
        }
    }
}
