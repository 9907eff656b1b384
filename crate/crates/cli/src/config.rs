//! Scenario configuration: the `dynbc/1` JSON schema and its translation to
//! a discretised problem.

use std::path::Path;

use dynbc::discretize::{
    build_custom, build_interval_plate, build_network_wave, build_strongly_damped_interval, CaseTag, DiscreteProblem,
    Metadata, NetworkGraph, ProblemSpec,
};
use dynbc::matcore::{re, CMat, C64};
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const SCHEMA_VERSION: &str = "dynbc/1";
pub const N_MIN: usize = 4;
pub const N_MAX: usize = 2048;

/// Complex number as `[re, im]`.
pub type Complex = [f64; 2];
/// Dense matrix as a list of rows of `[re, im]` pairs.
pub type Matrix = Vec<Vec<Complex>>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    IntervalPlate,
    NetworkWave,
    StronglyDampedInterval,
    Custom,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::IntervalPlate => "interval_plate",
            Scenario::NetworkWave => "network_wave",
            Scenario::StronglyDampedInterval => "strongly_damped_interval",
            Scenario::Custom => "custom",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case")]
pub enum CheckName {
    Spectrum,
    Similarity,
    Evolve,
    Boundedness,
    Analyticity,
    Wentzell,
    DysonPhillips,
    StabilityCertificate,
    Cosine,
}

impl CheckName {
    pub fn name(self) -> &'static str {
        match self {
            CheckName::Spectrum => "spectrum",
            CheckName::Similarity => "similarity",
            CheckName::Evolve => "evolve",
            CheckName::Boundedness => "boundedness",
            CheckName::Analyticity => "analyticity",
            CheckName::Wentzell => "wentzell",
            CheckName::DysonPhillips => "dyson_phillips",
            CheckName::StabilityCertificate => "stability_certificate",
            CheckName::Cosine => "cosine",
        }
    }

    /// Position in the pipeline: assemble, spectrum, evolve, diagnostics.
    pub fn stage(self) -> u8 {
        match self {
            CheckName::Spectrum | CheckName::Similarity => 0,
            CheckName::Evolve | CheckName::Wentzell => 1,
            _ => 2,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct Parameters {
    /// Interior grid nodes (per edge for networks).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Strongly damped interval: damping coefficient.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Complex>,
    /// Strongly damped interval: boundary coefficients β₁..β₄.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<[Complex; 4]>,
    /// Network: number of vertices.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<usize>,
    /// Network: edges as `[from, to]` vertex pairs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<[usize; 2]>>,
    #[serde(default, rename = "M", skip_serializing_if = "Option::is_none")]
    pub m: Option<Matrix>,
    #[serde(default, rename = "N", skip_serializing_if = "Option::is_none")]
    pub n_matrix: Option<Matrix>,
    #[serde(default, rename = "P", skip_serializing_if = "Option::is_none")]
    pub p: Option<Matrix>,
    #[serde(default, rename = "Phi", skip_serializing_if = "Option::is_none")]
    pub phi: Option<Matrix>,
    /// Custom operator data.
    #[serde(default, rename = "A", skip_serializing_if = "Option::is_none")]
    pub a: Option<Matrix>,
    #[serde(default, rename = "C", skip_serializing_if = "Option::is_none")]
    pub c: Option<Matrix>,
    #[serde(default, rename = "L", skip_serializing_if = "Option::is_none")]
    pub l: Option<Matrix>,
    #[serde(default, rename = "B1", skip_serializing_if = "Option::is_none")]
    pub b1: Option<Matrix>,
    #[serde(default, rename = "B2", skip_serializing_if = "Option::is_none")]
    pub b2: Option<Matrix>,
    #[serde(default, rename = "B3", skip_serializing_if = "Option::is_none")]
    pub b3: Option<Matrix>,
    #[serde(default, rename = "B4", skip_serializing_if = "Option::is_none")]
    pub b4: Option<Matrix>,
    /// Structural case; required for `custom`, an override otherwise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case: Option<String>,
    /// Multiplies B₁ and B₂.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coupling_scale: Option<f64>,
    /// Physical initial position for `evolve`; defaults to sin(πx) + x² on
    /// grids and a constant vector otherwise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_u: Option<Vec<Complex>>,
    /// Physical initial velocity; defaults to zero.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_v: Option<Vec<Complex>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub similarity: f64,
    pub inverse_defect: f64,
    pub wentzell: f64,
    pub boundedness_slope: f64,
    pub boundedness_sup: f64,
    pub analyticity_threshold: f64,
    pub dyson_phillips: f64,
    pub cosine: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            similarity: 1e-7,
            inverse_defect: 1e-9,
            wentzell: 1e-4,
            boundedness_slope: 1e-3,
            boundedness_sup: 1e6,
            analyticity_threshold: 1e3,
            dyson_phillips: 1e-3,
            cosine: 1e-8,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields, default)]
pub struct RunSettings {
    /// Final time of `evolve`, `wentzell` and `dyson_phillips`.
    #[serde(rename = "T")]
    pub t: f64,
    pub steps: usize,
    pub k_max: usize,
    /// Horizon of the boundedness check.
    pub t_max: f64,
    pub omega: f64,
    pub thetas_deg: Vec<f64>,
    pub r_min: f64,
    pub r_max: f64,
    pub radii_per_decade: usize,
    /// Probe vectors for the stability certificate.
    pub probes: usize,
    /// `(t, s)` for the d'Alembert identity of the cosine family.
    pub cosine_times: [f64; 2],
    pub tolerances: Tolerances,
}

impl Default for RunSettings {
    fn default() -> Self {
        Self {
            t: 1.0,
            steps: 20,
            k_max: 12,
            t_max: 1e3,
            omega: 1.0,
            thetas_deg: vec![85.0, 88.0, 90.0],
            r_min: 1e-2,
            r_max: 1e6,
            radii_per_decade: 8,
            probes: 5,
            cosine_times: [0.5, 0.25],
            tolerances: Tolerances::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    /// Must be `"dynbc/1"`.
    pub schema: String,
    pub scenario: Scenario,
    #[serde(default)]
    pub parameters: Parameters,
    /// Assembly point of the reduced form; chosen automatically when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Complex>,
    pub checks: Vec<CheckName>,
    #[serde(default)]
    pub run: RunSettings,
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::ConfigInvalid(msg.into())
}

pub fn load(path: &Path) -> Result<ScenarioConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    parse(&text)
}

pub fn parse(text: &str) -> Result<ScenarioConfig, CliError> {
    let cfg: ScenarioConfig = serde_json::from_str(text).map_err(|e| invalid(e.to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn schema_json() -> serde_json::Value {
    serde_json::to_value(schemars::schema_for!(ScenarioConfig)).expect("schema serialises")
}

pub fn complex(z: Complex) -> C64 {
    C64::new(z[0], z[1])
}

pub fn matrix(name: &str, rows: &Matrix) -> Result<CMat, CliError> {
    let cols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != cols) {
        return Err(invalid(format!("matrix {name} has ragged rows")));
    }
    let data: Vec<C64> = rows.iter().flatten().map(|&z| complex(z)).collect();
    CMat::new(rows.len(), cols, data).map_err(|e| invalid(format!("matrix {name}: {e}")))
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.schema != SCHEMA_VERSION {
            return Err(invalid(format!("schema must be \"{SCHEMA_VERSION}\", got \"{}\"", self.schema)));
        }
        let p = &self.parameters;
        if self.scenario != Scenario::Custom {
            let n = p.n.ok_or_else(|| invalid(format!("scenario {} requires parameters.n", self.scenario.name())))?;
            if !(N_MIN..=N_MAX).contains(&n) {
                return Err(invalid(format!("n = {n} outside [{N_MIN}, {N_MAX}]")));
            }
        }
        let required: &[(&str, bool)] = match self.scenario {
            Scenario::NetworkWave => &[
                ("vertices", p.vertices.is_some()),
                ("edges", p.edges.is_some()),
                ("M", p.m.is_some()),
                ("N", p.n_matrix.is_some()),
            ],
            Scenario::Custom => &[
                ("A", p.a.is_some()),
                ("C", p.c.is_some()),
                ("L", p.l.is_some()),
                ("B1", p.b1.is_some()),
                ("B2", p.b2.is_some()),
                ("B3", p.b3.is_some()),
                ("B4", p.b4.is_some()),
                ("case", p.case.is_some()),
            ],
            _ => &[],
        };
        if let Some((name, _)) = required.iter().find(|(_, present)| !present) {
            return Err(invalid(format!("scenario {} requires parameters.{name}", self.scenario.name())));
        }
        if let Some(c) = &p.case {
            if CaseTag::parse(c).is_none() {
                return Err(invalid(format!("unknown case \"{c}\"")));
            }
        }
        if let Some(s) = p.coupling_scale {
            if !s.is_finite() {
                return Err(invalid("coupling_scale must be finite"));
            }
        }
        let r = &self.run;
        if !(r.t > 0.0 && r.t_max > 0.0 && r.steps >= 1 && r.r_min > 0.0 && r.r_max > r.r_min && r.radii_per_decade >= 1) {
            return Err(invalid("run: T, t_max, r_min must be positive, steps and radii_per_decade >= 1, r_max > r_min"));
        }
        if self.checks.is_empty() {
            return Err(invalid("checks must not be empty"));
        }
        let mut seen = std::collections::HashSet::new();
        if let Some(dup) = self.checks.iter().find(|c| !seen.insert(**c)) {
            return Err(invalid(format!("check {} requested twice", dup.name())));
        }
        Ok(())
    }

    /// Builds the discretised problem, including the case override and the
    /// coupling scale.
    pub fn problem(&self) -> Result<DiscreteProblem, CliError> {
        let p = &self.parameters;
        let n = p.n.unwrap_or(0);
        let built = match self.scenario {
            Scenario::IntervalPlate => build_interval_plate(n),
            Scenario::StronglyDampedInterval => {
                let alpha = complex(p.alpha.unwrap_or([1.0, 0.0]));
                let beta = p.beta.unwrap_or([[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [-1.0, 0.0]]).map(complex);
                build_strongly_damped_interval(alpha, beta, n)
            }
            Scenario::NetworkWave => {
                let v = p.vertices.unwrap_or(0);
                let edges: Vec<(usize, usize)> = p.edges.iter().flatten().map(|e| (e[0], e[1])).collect();
                let e = edges.len();
                let graph = NetworkGraph::uniform(v, edges, n).map_err(|e| invalid(e.to_string()))?;
                let m = matrix("M", p.m.as_ref().expect("validated"))?;
                let nn = matrix("N", p.n_matrix.as_ref().expect("validated"))?;
                let pp = match &p.p {
                    Some(x) => matrix("P", x)?,
                    None => CMat::zeros(v, v),
                };
                let phi = match &p.phi {
                    Some(x) => matrix("Phi", x)?,
                    None => CMat::from_fn(v, e, |_, _| re(1.0)),
                };
                build_network_wave(&graph, &m, &nn, &pp, &phi)
            }
            Scenario::Custom => {
                let get = |name: &str, x: &Option<Matrix>| matrix(name, x.as_ref().expect("validated"));
                let case = CaseTag::parse(p.case.as_deref().expect("validated")).expect("validated");
                build_custom(ProblemSpec {
                    a: get("A", &p.a)?,
                    c: get("C", &p.c)?,
                    l: get("L", &p.l)?,
                    b1: get("B1", &p.b1)?,
                    b2: get("B2", &p.b2)?,
                    b3: get("B3", &p.b3)?,
                    b4: get("B4", &p.b4)?,
                    case,
                    meta: Metadata { scenario: "custom".into(), ..Metadata::default() },
                })
            }
        };
        let mut problem = built.map_err(|e| invalid(e.to_string()))?;
        if let Some(c) = &p.case {
            problem = problem.with_case(CaseTag::parse(c).expect("validated"));
        }
        if let Some(s) = p.coupling_scale {
            problem = problem.with_coupling_scale(s);
        }
        Ok(problem)
    }

    /// Physical initial data `(u, u̇)` for the evolution checks.
    pub fn initial_state(&self, problem: &DiscreteProblem) -> Result<(Vec<C64>, Vec<C64>), CliError> {
        let n = problem.dim_x();
        let p = &self.parameters;
        let u: Vec<C64> = match (&p.initial_u, &problem.meta().coordinates) {
            (Some(u), _) => u.iter().map(|&z| complex(z)).collect(),
            (None, Some(x)) if x.len() == n => {
                x.iter().map(|x| re((std::f64::consts::PI * x).sin() + x * x)).collect()
            }
            _ => vec![re(1.0 / (n as f64).sqrt()); n],
        };
        let v: Vec<C64> = match &p.initial_v {
            Some(v) => v.iter().map(|&z| complex(z)).collect(),
            None => vec![re(0.0); n],
        };
        if u.len() != n || v.len() != n {
            return Err(invalid(format!("initial data needs {n} entries per component, got {} and {}", u.len(), v.len())));
        }
        Ok((u, v))
    }
}
