//! Randomized invariant checks over states, observables, channels and unitaries.
//!
//! Each trial draws its own ChaCha8 stream (seed, trial index), so a report is
//! reproducible from the seed alone and independent of thread scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{
    channel_bounds, observable_bounds, tightness_check, unitary_bounds, variance_bounds, BoundReport,
    ChannelBoundOptions, RenAggregation, DEFAULT_PERM_LIMIT, VALIDITY_TOL,
};
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::metric::MCFunction;
use crate::operators::{KrausChannel, Observable, UnitaryOperator};
use crate::random;
use crate::skew::{fisher_from_sld, sld, sld_residual, variance, wyd_direct, SkewEngine};
use crate::state::QuantumState;

pub const ORACLE_TOL: f64 = 1e-10;
pub const IDENTITY_TOL: f64 = 1e-9;
/// Gaps above this count as strictly positive.
pub const POSITIVE_GAP: f64 = 1e-12;
/// Minimum eigenvalue spacing for an instance to count as generic.
const GENERIC_SPACING: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FuzzSpec {
    pub trials: usize,
    pub dims: Vec<usize>,
    pub seed: u64,
    pub pure_only: bool,
    pub perm_limit: u64,
}

impl Default for FuzzSpec {
    fn default() -> Self {
        Self { trials: 1000, dims: vec![2, 3, 4], seed: 0, pure_only: false, perm_limit: DEFAULT_PERM_LIMIT as u64 }
    }
}

impl FuzzSpec {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.dims.is_empty() {
            return Err(Error::Config("dims must not be empty".into()));
        }
        if let Some(d) = self.dims.iter().find(|&&d| !(2..=6).contains(&d)) {
            return Err(Error::Config(format!("dimension {d} outside 2..=6")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FuzzViolation {
    pub trial: usize,
    pub check: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FuzzReport {
    pub seed: u64,
    pub trials: usize,
    pub checks: usize,
    pub generic_instances: usize,
    pub positive_gaps: usize,
    pub min_gap: f64,
    pub violations: Vec<FuzzViolation>,
}

impl FuzzReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    /// Share of generic instances whose THM1/REN_OBS gap is strictly positive.
    pub fn positive_gap_fraction(&self) -> f64 {
        if self.generic_instances == 0 {
            return 0.0;
        }
        self.positive_gaps as f64 / self.generic_instances as f64
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut out = format!(
            "# seed={} trials={} checks={} violations={} generic={} positive_gaps={}\n",
            self.seed,
            self.trials,
            self.checks,
            self.violations.len(),
            self.generic_instances,
            self.positive_gaps
        );
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["trial", "check", "detail"]).map_err(csv_err)?;
        for v in &self.violations {
            w.write_record([v.trial.to_string().as_str(), &v.check, &v.detail]).map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Config(e.to_string()))?;
        out.push_str(&String::from_utf8(bytes).expect("csv writes utf-8"));
        Ok(out)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Config(e.to_string()))
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Config(e.to_string())
}

#[derive(Default)]
struct TrialOutcome {
    checks: usize,
    generic: bool,
    gap: Option<f64>,
    violations: Vec<FuzzViolation>,
}

impl TrialOutcome {
    fn check(&mut self, trial: usize, name: &str, ok: bool, detail: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.violations.push(FuzzViolation { trial, check: name.into(), detail: detail() });
        }
    }

    fn fail(&mut self, trial: usize, name: &str, err: &Error) {
        self.checks += 1;
        self.violations.push(FuzzViolation { trial, check: name.into(), detail: err.to_string() });
    }

    fn bounds_valid(&mut self, trial: usize, name: &str, r: &Result<BoundReport>) {
        match r {
            Ok(r) => {
                let bad = r.violations(VALIDITY_TOL);
                self.check(trial, name, bad.is_empty(), || {
                    bad.iter().map(|(b, v)| format!("{b}={v:e} > lhs={:e}", r.lhs_sum)).collect::<Vec<_>>().join("; ")
                })
            }
            Err(e) => self.fail(trial, name, e),
        }
    }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

fn is_generic(state: &QuantumState, n_ops: usize) -> bool {
    let ev = state.eigenvalues();
    n_ops >= 3
        && ev.iter().all(|&l| l > GENERIC_SPACING)
        && ev.windows(2).all(|w| (w[0] - w[1]).abs() > GENERIC_SPACING)
}

fn run_trial(spec: &FuzzSpec, trial: usize) -> TrialOutcome {
    let mut rng = trial_rng(spec.seed, trial);
    let mut out = TrialOutcome::default();
    let d = spec.dims[rng.random_range(0..spec.dims.len())];
    let n_ops = rng.random_range(2..=4usize);
    let n_kraus = rng.random_range(2..=3usize);
    let state = if spec.pure_only {
        random::random_pure_state(&mut rng, d)
    } else {
        let rank = rng.random_range(1..=d);
        random::random_state(&mut rng, d, rank)
    };
    let metric = random::random_metric(&mut rng);
    let alpha = metric.alpha().unwrap_or_else(|| rng.random_range(0.05..0.95));
    let obs: Vec<Observable> = (0..n_ops).map(|_| random::random_observable(&mut rng, d)).collect();
    let x = random::random_operator(&mut rng, d);
    let y = random::random_operator(&mut rng, d);
    let channels: Vec<KrausChannel> = (0..n_ops).map(|_| random::random_channel(&mut rng, d, n_kraus)).collect();
    let unitaries: Vec<UnitaryOperator> = (0..n_ops).map(|_| random::haar_unitary(&mut rng, d)).collect();
    let mix = random::haar_unitary_matrix(&mut rng, n_kraus);
    let rot = random::haar_unitary_matrix(&mut rng, d);

    if let Err(e) = checks(
        spec,
        trial,
        &mut out,
        Instance {
            state: &state,
            metric: &metric,
            alpha,
            obs: &obs,
            x: &x,
            y: &y,
            channels: &channels,
            unitaries: &unitaries,
            mix: &mix,
            rot: &rot,
        },
    ) {
        out.fail(trial, "evaluation", &e);
    }
    out
}

struct Instance<'a> {
    state: &'a QuantumState,
    metric: &'a MCFunction,
    alpha: f64,
    obs: &'a [Observable],
    x: &'a ComplexMatrix,
    y: &'a ComplexMatrix,
    channels: &'a [KrausChannel],
    unitaries: &'a [UnitaryOperator],
    mix: &'a ComplexMatrix,
    rot: &'a ComplexMatrix,
}

fn checks(spec: &FuzzSpec, t: usize, out: &mut TrialOutcome, inst: Instance<'_>) -> Result<()> {
    let Instance { state, metric, alpha, obs, x, y, channels, unitaries, mix, rot } = inst;
    let engine = SkewEngine::new(state, metric)?;

    // nonnegativity
    for a in obs {
        let v = engine.observable(a)?.value();
        out.check(t, "nonnegative", v >= 0.0, || format!("I={v:e}"));
    }

    // WYD kernel route against the commutator trace
    let wyd = MCFunction::wyd(alpha)?;
    let wyd_engine = SkewEngine::new(state, &wyd)?;
    for op in obs.iter().map(Observable::matrix).chain([x]) {
        let k = wyd_engine.operator(op)?.value();
        let direct = wyd_direct(state, op, alpha)?.value();
        out.check(t, "wyd_oracle", close(k, direct, ORACLE_TOL), || {
            format!("alpha={alpha} kernel={k:e} direct={direct:e}")
        });
    }

    // Fisher kernel against ¼Tr(ρL²)
    let fisher = SkewEngine::new(state, &MCFunction::fisher())?;
    for a in obs {
        let l = sld(state, a)?;
        let res = sld_residual(state, a, &l)?;
        out.check(t, "sld_residual", res <= IDENTITY_TOL, || format!("residual={res:e}"));
        let k = fisher.observable(a)?.value();
        let via_l = fisher_from_sld(state, &l);
        out.check(t, "sld_oracle", close(k, via_l, ORACLE_TOL), || format!("kernel={k:e} sld={via_l:e}"));
    }

    // parallelogram identity
    let lhs = engine.operator(&(x + y))?.value() + engine.operator(&(x - y))?.value();
    let rhs = 2.0 * engine.operator(x)?.value() + 2.0 * engine.operator(y)?.value();
    out.check(t, "parallelogram", close(lhs, rhs, IDENTITY_TOL), || format!("{lhs:e} vs {rhs:e}"));

    // observable and variance bounds
    let obs_report = observable_bounds(state, obs, metric);
    out.bounds_valid(t, "validity_observables", &obs_report);
    let var_report = variance_bounds(state, obs);
    out.bounds_valid(t, "validity_variance", &var_report);
    for r in [&obs_report, &var_report].into_iter().flatten() {
        match tightness_check(r) {
            Ok(facts) => {
                out.checks += 1;
                if let Some(f) = facts.iter().find(|f| f.stronger == crate::bounds::BoundName::Thm1) {
                    out.gap = Some(f.gap);
                }
            }
            Err(e) => out.fail(t, "dominance", &e),
        }
    }
    if let Ok(r) = &obs_report {
        let s: f64 = obs.iter().map(|a| engine.observable(a).map(|v| v.value())).sum::<Result<f64>>()?;
        out.check(t, "lhs_sum", close(r.lhs_sum, s, IDENTITY_TOL), || format!("{:e} vs {s:e}", r.lhs_sum));
    }
    out.generic = is_generic(state, obs.len());

    // pure states: every metric collapses to the variance
    if spec.pure_only {
        for a in obs {
            let var = variance(state, a)?;
            let f = fisher.observable(a)?.value();
            let w = wyd_engine.observable(a)?.value();
            out.check(t, "pure_equivalence", close(f, var, ORACLE_TOL) && close(w, var, ORACLE_TOL), || {
                format!("fisher={f:e} wyd={w:e} var={var:e}")
            });
        }
    }

    // unitary covariance of the state/operator pair
    let u = UnitaryOperator::new(rot.clone())?;
    let rotated = QuantumState::new(&(rot * state.matrix()) * &rot.adjoint())?;
    let moved = &(rot * x) * &rot.adjoint();
    let before = engine.operator(x)?.value();
    let after = SkewEngine::new(&rotated, metric)?.operator(&moved)?.value();
    out.check(t, "unitary_covariance", close(before, after, IDENTITY_TOL), || format!("{before:e} vs {after:e}"));
    let as_unitary = engine.unitary(&u)?.value();
    let as_channel = engine.channel(&u.as_channel())?.value();
    out.check(t, "unitary_channel", close(as_unitary, as_channel, ORACLE_TOL), || {
        format!("{as_unitary:e} vs {as_channel:e}")
    });

    // Kraus representation freedom
    let remixed = channels[0].remix(mix)?;
    let v0 = engine.channel(&channels[0])?.value();
    let v1 = engine.channel(&remixed)?.value();
    out.check(t, "kraus_mixing", close(v0, v1, IDENTITY_TOL), || format!("{v0:e} vs {v1:e}"));

    // channel and unitary bounds
    for agg in [RenAggregation::PerIndex, RenAggregation::Pooled] {
        let opts = ChannelBoundOptions { perm_limit: spec.perm_limit as u128, ren_aggregation: agg };
        match channel_bounds(state, channels, metric, &opts) {
            // a budget overrun is a configuration limit, not a failed invariant
            Err(Error::PermutationBudgetExceeded { .. }) => {}
            r => out.bounds_valid(t, "validity_channels", &r),
        }
    }
    out.bounds_valid(t, "validity_unitaries", &unitary_bounds(state, unitaries, metric));

    Ok(())
}

/// Runs `spec.trials` independent trials and collects every failed check.
pub fn fuzz(spec: &FuzzSpec) -> Result<FuzzReport> {
    spec.validate()?;
    let outcomes: Vec<TrialOutcome> = (0..spec.trials).into_par_iter().map(|t| run_trial(spec, t)).collect();
    let mut report = FuzzReport {
        seed: spec.seed,
        trials: spec.trials,
        checks: 0,
        generic_instances: 0,
        positive_gaps: 0,
        min_gap: f64::INFINITY,
        violations: Vec::new(),
    };
    for o in outcomes {
        report.checks += o.checks;
        if let Some(g) = o.gap {
            report.min_gap = report.min_gap.min(g);
            if o.generic {
                report.generic_instances += 1;
                if g > POSITIVE_GAP {
                    report.positive_gaps += 1;
                }
            }
        }
        report.violations.extend(o.violations);
    }
    Ok(report)
}
