//! Parameter sweeps over the three worked scenarios (Pauli observables, three
//! damping/flip channels, three Pauli rotations) and their tabular output.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{
    channel_bounds, observable_bounds, unitary_bounds, variance_bounds, BoundName, BoundReport, ChannelBoundOptions,
    RenAggregation, DEFAULT_PERM_LIMIT,
};
use crate::error::{Error, Result};
use crate::matrix::{pauli_exp, pauli_x, pauli_y, pauli_z, Axis};
use crate::metric::MCFunction;
use crate::operators::{amplitude_damping, bit_flip, phase_damping, KrausChannel, Observable, UnitaryOperator};
use crate::state::equatorial_state;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scenario {
    Example1,
    Example2,
    Example3,
    Custom,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::Example1 => "example1",
            Scenario::Example2 => "example2",
            Scenario::Example3 => "example3",
            Scenario::Custom => "custom",
        }
    }
}

/// Which operator family a sweep evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// σx, σy, σz with skew and variance bounds.
    Observables,
    /// Amplitude damping, phase damping and bit flip channels.
    Channels,
    /// exp(iπσ/8) for the three Pauli axes.
    Unitaries,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum MetricSpec {
    Wyd { alpha: f64 },
    Fisher,
}

impl MetricSpec {
    pub fn build(self) -> Result<MCFunction> {
        match self {
            MetricSpec::Wyd { alpha } => MCFunction::wyd(alpha),
            MetricSpec::Fisher => Ok(MCFunction::fisher()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        let span = self.stop - self.start;
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|k| if k + 1 == self.steps { self.stop } else { self.start + span * k as f64 / last })
            .collect()
    }

    fn validate(&self, what: &str) -> Result<()> {
        if self.steps < 2 {
            return Err(Error::Config(format!("{what}: steps must be at least 2, got {}", self.steps)));
        }
        if !self.start.is_finite() || !self.stop.is_finite() {
            return Err(Error::Config(format!("{what}: grid bounds must be finite")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepAxis {
    Theta,
    Q,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RenMode {
    PerIndex,
    Pooled,
}

impl From<RenMode> for RenAggregation {
    fn from(m: RenMode) -> Self {
        match m {
            RenMode::PerIndex => RenAggregation::PerIndex,
            RenMode::Pooled => RenAggregation::Pooled,
        }
    }
}

/// A fully resolved sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSpec {
    pub scenario: Scenario,
    pub family: Family,
    pub metric: MetricSpec,
    pub theta_grid: Grid,
    pub q: f64,
    pub bloch_radius: f64,
    pub axis: SweepAxis,
    pub q_grid: Grid,
    pub theta: f64,
    pub perm_limit: u64,
    pub ren_aggregation: RenMode,
    pub format: OutputFormat,
    pub output_path: Option<String>,
}

pub const DEFAULT_THETA_STEPS: usize = 201;

impl SweepSpec {
    /// Defaults: θ ∈ [0, 2π] on 201 points, and each scenario's α, radius and q.
    pub fn defaults(scenario: Scenario) -> Self {
        let (family, alpha, radius) = match scenario {
            Scenario::Example1 | Scenario::Custom => (Family::Observables, 1.0 / 3.0, 3f64.sqrt() / 2.0),
            Scenario::Example2 => (Family::Channels, 1.0 / 3.0, 3f64.sqrt() / 2.0),
            Scenario::Example3 => (Family::Unitaries, 0.25, std::f64::consts::FRAC_1_SQRT_2),
        };
        Self {
            scenario,
            family,
            metric: MetricSpec::Wyd { alpha },
            theta_grid: Grid { start: 0.0, stop: TAU, steps: DEFAULT_THETA_STEPS },
            q: 0.5,
            bloch_radius: radius,
            axis: SweepAxis::Theta,
            q_grid: Grid { start: 0.0, stop: 0.99, steps: 100 },
            theta: 0.0,
            perm_limit: DEFAULT_PERM_LIMIT as u64,
            ren_aggregation: RenMode::PerIndex,
            format: OutputFormat::Csv,
            output_path: None,
        }
    }

    /// Applies a parsed config document on top of the scenario defaults.
    ///
    /// A `scenario` key in the document must agree with `scenario`.
    pub fn resolve(scenario: Scenario, cfg: &SweepConfig) -> Result<Self> {
        if let Some(s) = cfg.scenario {
            if s != scenario {
                return Err(Error::Config(format!("config is for {}, not {}", s.name(), scenario.name())));
            }
        }
        let mut spec = Self::defaults(scenario);
        spec.apply(cfg)?;
        spec.validate()?;
        Ok(spec)
    }

    fn apply(&mut self, cfg: &SweepConfig) -> Result<()> {
        if let Some(f) = cfg.family {
            if self.scenario != Scenario::Custom && f != self.family {
                return Err(Error::Config(format!(
                    "{} runs {:?}; family can only be chosen for custom",
                    self.scenario.name(),
                    self.family
                )));
            }
            self.family = f;
        }
        macro_rules! set {
            ($($field:ident => $target:ident),*) => {
                $(if let Some(v) = cfg.$field.clone() { self.$target = v; })*
            };
        }
        set!(metric => metric, theta_grid => theta_grid, q => q, bloch_radius => bloch_radius,
             axis => axis, q_grid => q_grid, theta => theta, perm_limit => perm_limit,
             ren_aggregation => ren_aggregation, format => format);
        if cfg.output_path.is_some() {
            self.output_path = cfg.output_path.clone();
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.theta_grid.validate("theta_grid")?;
        if let MetricSpec::Wyd { alpha } = self.metric {
            if !(alpha > 0.0 && alpha < 1.0) {
                return Err(Error::Config(format!("alpha must lie in (0, 1), got {alpha}")));
            }
        }
        if !(0.0..1.0).contains(&self.q) {
            return Err(Error::Config(format!("q must lie in [0, 1), got {}", self.q)));
        }
        if !(0.0..=1.0).contains(&self.bloch_radius) {
            return Err(Error::Config(format!("bloch_radius must lie in [0, 1], got {}", self.bloch_radius)));
        }
        if !self.theta.is_finite() {
            return Err(Error::Config("theta must be finite".into()));
        }
        if self.axis == SweepAxis::Q {
            if self.family != Family::Channels {
                return Err(Error::Config("q sweeps apply to the channel family only".into()));
            }
            self.q_grid.validate("q_grid")?;
            let (lo, hi) = (self.q_grid.start.min(self.q_grid.stop), self.q_grid.start.max(self.q_grid.stop));
            if lo < 0.0 || hi >= 1.0 {
                return Err(Error::Config("q_grid must stay inside [0, 1)".into()));
            }
        }
        Ok(())
    }
}

/// Structured config file contents; every field is optional.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub scenario: Option<Scenario>,
    pub family: Option<Family>,
    pub metric: Option<MetricSpec>,
    pub theta_grid: Option<Grid>,
    pub q: Option<f64>,
    pub bloch_radius: Option<f64>,
    pub axis: Option<SweepAxis>,
    pub q_grid: Option<Grid>,
    pub theta: Option<f64>,
    pub perm_limit: Option<u64>,
    pub ren_aggregation: Option<RenMode>,
    pub format: Option<OutputFormat>,
    pub output_path: Option<String>,
}

impl SweepConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }
}

/// One grid point of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub theta: f64,
    /// Present for channel sweeps.
    pub q: Option<f64>,
    pub sum: f64,
    /// Σ Δ²(A_i), present for observable sweeps.
    pub var_sum: Option<f64>,
    pub bounds: Vec<(BoundName, f64)>,
    /// Pointwise maximum of the family's own bounds, for channels and unitaries.
    pub max: Option<f64>,
    pub witnesses: Vec<(BoundName, String)>,
}

impl SweepRow {
    pub fn bound(&self, name: BoundName) -> Option<f64> {
        self.bounds.iter().find(|(n, _)| *n == name).map(|&(_, v)| v)
    }

    pub fn witness(&self, name: BoundName) -> Option<&str> {
        self.witnesses.iter().find(|(n, _)| *n == name).map(|(_, w)| w.as_str())
    }

    /// The left-hand side a bound is compared against: Σ Δ² for variance bounds, Σ I otherwise.
    pub fn lhs_for(&self, name: BoundName) -> f64 {
        match name {
            BoundName::VarThm1 | BoundName::VarRen => self.var_sum.unwrap_or(f64::NAN),
            _ => self.sum,
        }
    }

    /// Bounds exceeding their left-hand side by more than `tol`, or non-finite.
    pub fn violations(&self, tol: f64) -> Vec<(BoundName, f64)> {
        self.bounds.iter().filter(|&&(n, v)| v.is_nan() || v > self.lhs_for(n) + tol).copied().collect()
    }

    fn push_report(&mut self, report: &BoundReport) {
        for (&name, entry) in &report.bounds {
            self.bounds.push((name, entry.value));
            if let Some(w) = &entry.witness {
                self.witnesses.push((name, w.to_string()));
            }
        }
    }
}

pub fn pauli_observables() -> Vec<Observable> {
    [pauli_x(), pauli_y(), pauli_z()]
        .into_iter()
        .map(|m| Observable::new(m).expect("Pauli matrices are Hermitian"))
        .collect()
}

/// Amplitude damping, phase damping and bit flip at strength q.
pub fn damping_channels(q: f64) -> Result<Vec<KrausChannel>> {
    Ok(vec![amplitude_damping(q)?, phase_damping(q)?, bit_flip(q)?])
}

/// exp(iπσ_x/8), exp(iπσ_y/8), exp(iπσ_z/8).
pub fn pauli_rotations() -> Vec<UnitaryOperator> {
    [Axis::X, Axis::Y, Axis::Z]
        .into_iter()
        .map(|a| UnitaryOperator::new(pauli_exp(a, PI / 8.0)).expect("exact rotation"))
        .collect()
}

fn observables_row(spec: &SweepSpec, c: &MCFunction, theta: f64) -> Result<SweepRow> {
    let state = equatorial_state(spec.bloch_radius, theta)?;
    let obs = pauli_observables();
    let skew = observable_bounds(&state, &obs, c)?;
    let var = variance_bounds(&state, &obs)?;
    let mut row = SweepRow {
        theta,
        q: None,
        sum: skew.lhs_sum,
        var_sum: Some(var.lhs_sum),
        bounds: Vec::new(),
        max: None,
        witnesses: Vec::new(),
    };
    row.push_report(&skew);
    row.push_report(&var);
    Ok(row)
}

fn channels_row(spec: &SweepSpec, c: &MCFunction, theta: f64, q: f64) -> Result<SweepRow> {
    let state = equatorial_state(spec.bloch_radius, theta)?;
    let opts =
        ChannelBoundOptions { perm_limit: spec.perm_limit as u128, ren_aggregation: spec.ren_aggregation.into() };
    let report = channel_bounds(&state, &damping_channels(q)?, c, &opts)?;
    let mut row = SweepRow {
        theta,
        q: Some(q),
        sum: report.lhs_sum,
        var_sum: None,
        bounds: Vec::new(),
        max: report.max_of(&[BoundName::Lb1, BoundName::Lb2, BoundName::Lb3]),
        witnesses: Vec::new(),
    };
    row.push_report(&report);
    Ok(row)
}

fn unitaries_row(spec: &SweepSpec, c: &MCFunction, theta: f64) -> Result<SweepRow> {
    let state = equatorial_state(spec.bloch_radius, theta)?;
    let report = unitary_bounds(&state, &pauli_rotations(), c)?;
    let mut row = SweepRow {
        theta,
        q: None,
        sum: report.lhs_sum,
        var_sum: None,
        bounds: Vec::new(),
        max: report.max_of(&[BoundName::Lb1u, BoundName::Lb2u, BoundName::Lb3u]),
        witnesses: Vec::new(),
    };
    row.push_report(&report);
    Ok(row)
}

/// Evaluates every grid point; rows come back in grid order.
pub fn run(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let c = spec.metric.build()?;
    let points: Vec<(f64, f64)> = match spec.axis {
        SweepAxis::Theta => spec.theta_grid.points().into_iter().map(|t| (t, spec.q)).collect(),
        SweepAxis::Q => spec.q_grid.points().into_iter().map(|q| (spec.theta, q)).collect(),
    };
    points
        .par_iter()
        .map(|&(theta, q)| match spec.family {
            Family::Observables => observables_row(spec, &c, theta),
            Family::Channels => channels_row(spec, &c, theta, q),
            Family::Unitaries => unitaries_row(spec, &c, theta),
        })
        .collect()
}

fn run_checked(spec: &SweepSpec, expected: Scenario) -> Result<Vec<SweepRow>> {
    if spec.scenario != expected {
        return Err(Error::Config(format!("expected scenario {}, got {}", expected.name(), spec.scenario.name())));
    }
    run(spec)
}

/// Pauli observables, WYD α = 1/3 by default: THM1, REN_OBS, VAR_THM1, VAR_REN per θ.
pub fn run_example1(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    run_checked(spec, Scenario::Example1)
}

/// The three channels: LB1–LB3, REN_CH_1 and REN_CH_2, per θ or per q.
pub fn run_example2(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    run_checked(spec, Scenario::Example2)
}

/// The three Pauli rotations: Lb1–Lb3 per θ.
pub fn run_example3(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    run_checked(spec, Scenario::Example3)
}

// --- tabular output -------------------------------------------------------

/// 17 significant digits, which round-trips every f64.
pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn header(row: &SweepRow) -> Vec<String> {
    let mut h = vec!["theta".to_string()];
    if row.q.is_some() {
        h.push("q".into());
    }
    h.push("sum".into());
    if row.var_sum.is_some() {
        h.push("var_sum".into());
    }
    h.extend(row.bounds.iter().map(|(n, _)| n.column().to_string()));
    if row.max.is_some() {
        h.push("max".into());
    }
    h.extend(row.witnesses.iter().map(|(n, _)| format!("{}_witness", n.column())));
    h
}

fn record(row: &SweepRow) -> Vec<String> {
    let mut r = vec![format_f64(row.theta)];
    r.extend(row.q.map(format_f64));
    r.push(format_f64(row.sum));
    r.extend(row.var_sum.map(format_f64));
    r.extend(row.bounds.iter().map(|&(_, v)| format_f64(v)));
    r.extend(row.max.map(format_f64));
    r.extend(row.witnesses.iter().map(|(_, w)| w.clone()));
    r
}

pub fn to_csv(rows: &[SweepRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Config(e.to_string());
    if let Some(first) = rows.first() {
        w.write_record(header(first)).map_err(io)?;
    }
    for row in rows {
        w.write_record(record(row)).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Config(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Config(e.to_string()))
}

pub fn from_csv(text: &str) -> Result<Vec<SweepRow>> {
    let bad = |msg: String| Error::Config(msg);
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let head: Vec<String> = rdr.headers().map_err(|e| bad(e.to_string()))?.iter().map(String::from).collect();
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        let mut row = SweepRow {
            theta: f64::NAN,
            q: None,
            sum: f64::NAN,
            var_sum: None,
            bounds: Vec::new(),
            max: None,
            witnesses: Vec::new(),
        };
        for (name, field) in head.iter().zip(rec.iter()) {
            let num = || field.parse::<f64>().map_err(|e| bad(format!("column {name}: {e}")));
            match name.as_str() {
                "theta" => row.theta = num()?,
                "q" => row.q = Some(num()?),
                "sum" => row.sum = num()?,
                "var_sum" => row.var_sum = Some(num()?),
                "max" => row.max = Some(num()?),
                other => {
                    if let Some(b) = other.strip_suffix("_witness").and_then(BoundName::from_column) {
                        row.witnesses.push((b, field.to_string()));
                    } else if let Some(b) = BoundName::from_column(other) {
                        row.bounds.push((b, num()?));
                    } else {
                        return Err(bad(format!("unknown column {other}")));
                    }
                }
            }
        }
        rows.push(row);
    }
    Ok(rows)
}

pub fn to_json(rows: &[SweepRow]) -> Result<String> {
    let values: Vec<serde_json::Value> = rows
        .iter()
        .map(|row| {
            let mut obj = serde_json::Map::new();
            for (k, v) in header(row).into_iter().zip(record(row)) {
                let value = match v.parse::<f64>() {
                    Ok(x) if !k.ends_with("_witness") => serde_json::json!(x),
                    _ => serde_json::Value::String(v),
                };
                obj.insert(k, value);
            }
            serde_json::Value::Object(obj)
        })
        .collect();
    serde_json::to_string_pretty(&values).map_err(|e| Error::Config(e.to_string()))
}

pub fn render(rows: &[SweepRow], format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Csv => to_csv(rows),
        OutputFormat::Json => to_json(rows),
    }
}
