//! Sum-uncertainty lower bounds for observables, variances, channels and unitaries.
//!
//! Every bound is a norm inequality written in terms of a squared norm ‖a‖²:
//! the skew information I^c_ρ for observables/operators, Δ²_ρ for variances.
//! The formulas only ever see pairwise values ‖a_s ± a_t‖² and the total
//! ‖Σ a_s‖², collected in [`PairTerms`].

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::metric::MCFunction;
use crate::operators::{KrausChannel, Observable, UnitaryOperator};
use crate::skew::{variance_frobenius, SkewEngine};
use crate::state::QuantumState;

/// Slack allowed when checking bound ≤ sum.
pub const VALIDITY_TOL: f64 = 1e-9;
/// Slack allowed when checking the proven ordering THM1 ≥ REN_OBS.
pub const ORDERING_TOL: f64 = 1e-10;
/// Default cap on the number of permutation assignments searched.
pub const DEFAULT_PERM_LIMIT: u128 = 1_000_000;

/// A quadratic form on d×d matrices.
pub trait SquaredNorm {
    fn dim(&self) -> usize;
    fn squared_norm(&self, x: &ComplexMatrix) -> Result<f64>;
}

impl SquaredNorm for SkewEngine<'_> {
    fn dim(&self) -> usize {
        self.state().dim()
    }

    fn squared_norm(&self, x: &ComplexMatrix) -> Result<f64> {
        Ok(self.operator(x)?.value())
    }
}

/// Δ²_ρ(X) = ‖(X − ⟨X⟩)√ρ‖²_F.
pub struct VarianceForm<'a> {
    state: &'a QuantumState,
}

impl<'a> VarianceForm<'a> {
    pub fn new(state: &'a QuantumState) -> Self {
        Self { state }
    }
}

impl SquaredNorm for VarianceForm<'_> {
    fn dim(&self) -> usize {
        self.state.dim()
    }

    fn squared_norm(&self, x: &ComplexMatrix) -> Result<f64> {
        variance_frobenius(self.state, x)
    }
}

/// The sign pattern (−1)^x of the x ∈ {0, 1} maximization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BranchSelector(u8);

impl BranchSelector {
    pub const ZERO: Self = Self(0);
    pub const ONE: Self = Self(1);

    pub fn new(x: u8) -> Option<Self> {
        (x <= 1).then_some(Self(x))
    }

    pub fn x(self) -> u8 {
        self.0
    }
}

impl fmt::Display for BranchSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x={}", self.0)
    }
}

/// One permutation of the Kraus indices per channel; the first is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PermutationAssignment {
    perms: Vec<Vec<usize>>,
}

impl PermutationAssignment {
    /// Validates zero-based permutations.
    pub fn new(perms: Vec<Vec<usize>>) -> Option<Self> {
        let n = perms.first()?.len();
        let is_perm = |p: &Vec<usize>| {
            let mut seen = vec![false; n];
            p.len() == n && p.iter().all(|&i| i < n && !std::mem::replace(&mut seen[i], true))
        };
        let identity = perms[0].iter().enumerate().all(|(i, &p)| i == p);
        (identity && perms.iter().all(is_perm)).then_some(Self { perms })
    }

    pub fn perms(&self) -> &[Vec<usize>] {
        &self.perms
    }
}

impl fmt::Display for PermutationAssignment {
    /// One-based images, e.g. `1-2|2-1|1-2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.perms.iter().map(|p| p.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join("-")).collect();
        write!(f, "{}", parts.join("|"))
    }
}

/// What achieved a maximized bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Branch(BranchSelector),
    Permutations(PermutationAssignment),
    BranchAndPermutations(BranchSelector, PermutationAssignment),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Branch(b) => write!(f, "{b}"),
            Witness::Permutations(p) => write!(f, "{p}"),
            Witness::BranchAndPermutations(b, p) => write!(f, "{b};{p}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundName {
    Thm1,
    RenObs,
    VarThm1,
    VarRen,
    Lb1,
    Lb2,
    Lb3,
    RenCh1,
    RenCh2,
    Lb1u,
    Lb2u,
    Lb3u,
}

impl BoundName {
    pub const ALL: [BoundName; 12] = [
        BoundName::Thm1,
        BoundName::RenObs,
        BoundName::VarThm1,
        BoundName::VarRen,
        BoundName::Lb1,
        BoundName::Lb2,
        BoundName::Lb3,
        BoundName::RenCh1,
        BoundName::RenCh2,
        BoundName::Lb1u,
        BoundName::Lb2u,
        BoundName::Lb3u,
    ];

    /// Report label.
    pub fn label(self) -> &'static str {
        match self {
            BoundName::Thm1 => "THM1",
            BoundName::RenObs => "REN_OBS",
            BoundName::VarThm1 => "VAR_THM1",
            BoundName::VarRen => "VAR_REN",
            BoundName::Lb1 => "LB1",
            BoundName::Lb2 => "LB2",
            BoundName::Lb3 => "LB3",
            BoundName::RenCh1 => "REN_CH_1",
            BoundName::RenCh2 => "REN_CH_2",
            BoundName::Lb1u => "Lb1",
            BoundName::Lb2u => "Lb2",
            BoundName::Lb3u => "Lb3",
        }
    }

    /// CSV column name.
    pub fn column(self) -> &'static str {
        match self {
            BoundName::Thm1 => "thm1",
            BoundName::RenObs => "ren_obs",
            BoundName::VarThm1 => "var_thm1",
            BoundName::VarRen => "var_ren",
            BoundName::Lb1 => "lb1",
            BoundName::Lb2 => "lb2",
            BoundName::Lb3 => "lb3",
            BoundName::RenCh1 => "ren_ch1",
            BoundName::RenCh2 => "ren_ch2",
            BoundName::Lb1u => "lb1u",
            BoundName::Lb2u => "lb2u",
            BoundName::Lb3u => "lb3u",
        }
    }

    pub fn from_column(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|b| b.column() == s)
    }
}

impl fmt::Display for BoundName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundEntry {
    pub value: f64,
    pub witness: Option<Witness>,
    /// Per-branch values [x=0, x=1] for bounds maximized over x.
    pub branch_values: Option<[f64; 2]>,
}

/// Left-hand sum and the lower bounds evaluated against it.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BoundReport {
    pub lhs_sum: f64,
    pub bounds: BTreeMap<BoundName, BoundEntry>,
}

impl BoundReport {
    pub fn get(&self, name: BoundName) -> Option<&BoundEntry> {
        self.bounds.get(&name)
    }

    pub fn value(&self, name: BoundName) -> Option<f64> {
        self.get(name).map(|e| e.value)
    }

    fn require(&self, name: BoundName) -> Result<&BoundEntry> {
        self.get(name).ok_or_else(|| Error::MissingBound(name.label().into()))
    }

    /// Largest value among `names` that are present.
    pub fn max_of(&self, names: &[BoundName]) -> Option<f64> {
        names.iter().filter_map(|&n| self.value(n)).reduce(f64::max)
    }

    /// Bounds exceeding `lhs_sum + tol`.
    pub fn violations(&self, tol: f64) -> Vec<(BoundName, f64)> {
        self.bounds
            .iter()
            .filter(|(_, e)| e.value.is_nan() || e.value > self.lhs_sum + tol)
            .map(|(&n, e)| (n, e.value))
            .collect()
    }

    fn insert(&mut self, name: BoundName, value: f64, witness: Option<Witness>, branch_values: Option<[f64; 2]>) {
        self.bounds.insert(name, BoundEntry { value, witness, branch_values });
    }
}

/// Pairwise squared norms for a family a_1..a_N.
///
/// `plus[p]` and `minus[p]` hold ‖a_s + a_t‖² and ‖a_s − a_t‖² for the p-th pair
/// s < t in lexicographic order; `total` is ‖Σ a_s‖².
#[derive(Debug, Clone, PartialEq)]
pub struct PairTerms {
    pub n: usize,
    pub plus: Vec<f64>,
    pub minus: Vec<f64>,
    pub total: f64,
}

fn pair_count(n: usize) -> usize {
    n * (n - 1) / 2
}

fn sum_sqrt(v: &[f64]) -> f64 {
    v.iter().map(|x| x.max(0.0).sqrt()).sum()
}

impl PairTerms {
    pub fn from_form<F: SquaredNorm>(form: &F, ops: &[&ComplexMatrix]) -> Result<Self> {
        let n = ops.len();
        let d = form.dim();
        for op in ops {
            op.ensure_shape(d, d)?;
        }
        let mut plus = Vec::with_capacity(pair_count(n));
        let mut minus = Vec::with_capacity(pair_count(n));
        for s in 0..n {
            for t in (s + 1)..n {
                plus.push(form.squared_norm(&(ops[s] + ops[t]))?);
                minus.push(form.squared_norm(&(ops[s] - ops[t]))?);
            }
        }
        let sum = ops.iter().fold(ComplexMatrix::zeros(d, d), |acc, op| &acc + op);
        Ok(Self { n, plus, minus, total: form.squared_norm(&sum)? })
    }

    /// Pair values ‖a_s + (−1)^x a_t‖².
    fn signed(&self, x: u8) -> &[f64] {
        if x == 0 {
            &self.plus
        } else {
            &self.minus
        }
    }

    /// (1/(2N−2))·{(2/(N(N−1)))·[Σ √‖a_s+(−1)^x a_t‖²]² + Σ ‖a_s+(−1)^{x+1} a_t‖²}.
    pub fn thm1_branch(&self, x: BranchSelector) -> f64 {
        let n = self.n as f64;
        let root = sum_sqrt(self.signed(x.0));
        let plain: f64 = self.signed(1 - x.0).iter().sum();
        (2.0 / (n * (n - 1.0)) * root * root + plain) / (2.0 * n - 2.0)
    }

    /// (1/(N−2))·{Σ ‖a_s+a_t‖² − (1/(N−1)²)·[Σ ‖a_s+a_t‖]²}; needs N ≥ 3.
    pub fn lb1(&self) -> f64 {
        let n = self.n as f64;
        let plain: f64 = self.plus.iter().sum();
        let root = sum_sqrt(&self.plus);
        (plain - root * root / ((n - 1.0) * (n - 1.0))) / (n - 2.0)
    }

    /// (1/N)·{‖Σ a_s‖² + (2/(N(N−1)))·[Σ ‖a_s−a_t‖]²}.
    pub fn lb2(&self) -> f64 {
        let n = self.n as f64;
        let root = sum_sqrt(&self.minus);
        (self.total + 2.0 / (n * (n - 1.0)) * root * root) / n
    }

    /// (1/(2N−2))·{Σ ‖a_s+(−1)^x a_t‖² + (2/(N(N−1)))·[Σ ‖a_s+(−1)^{x+1} a_t‖]²}.
    pub fn lb3_branch(&self, x: BranchSelector) -> f64 {
        self.thm1_branch(BranchSelector(1 - x.0))
    }

    /// Sum of the squared norms, from the pair identity
    /// (2N−2)Σ‖a_s‖² = Σ‖a_s+a_t‖² + Σ‖a_s−a_t‖².
    pub fn lhs_from_pairs(&self) -> f64 {
        let s: f64 = self.plus.iter().chain(&self.minus).sum();
        s / (2.0 * self.n as f64 - 2.0)
    }
}

/// Picks the larger branch; ties go to x = 1.
fn best_branch(values: [f64; 2]) -> (f64, BranchSelector) {
    if values[0] > values[1] {
        (values[0], BranchSelector::ZERO)
    } else {
        (values[1], BranchSelector::ONE)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchBound {
    pub value: f64,
    pub branch: BranchSelector,
    pub branch_values: [f64; 2],
}

fn branch_bound(terms: &PairTerms, f: impl Fn(&PairTerms, BranchSelector) -> f64) -> BranchBound {
    let branch_values = [f(terms, BranchSelector::ZERO), f(terms, BranchSelector::ONE)];
    let (value, branch) = best_branch(branch_values);
    BranchBound { value, branch, branch_values }
}

fn observable_terms<F: SquaredNorm>(form: &F, obs: &[Observable]) -> Result<PairTerms> {
    if obs.len() < 2 {
        return Err(Error::TooFewObservables(obs.len()));
    }
    let mats: Vec<&ComplexMatrix> = obs.iter().map(Observable::matrix).collect();
    PairTerms::from_form(form, &mats)
}

/// Σ I^c_ρ(A_i) ≥ max_x (1/(2N−2)){...}, the x-maximized pair bound.
pub fn thm1_bound(state: &QuantumState, obs: &[Observable], c: &MCFunction) -> Result<BranchBound> {
    let engine = SkewEngine::new(state, c)?;
    Ok(branch_bound(&observable_terms(&engine, obs)?, PairTerms::thm1_branch))
}

/// (1/N)·I^c(Σ A_i) + (2/(N²(N−1)))·[Σ √I^c(A_i − A_j)]².
pub fn ren_obs_bound(state: &QuantumState, obs: &[Observable], c: &MCFunction) -> Result<f64> {
    let engine = SkewEngine::new(state, c)?;
    Ok(observable_terms(&engine, obs)?.lb2())
}

/// The pair bound with I^c replaced by the variance.
pub fn variance_thm1_bound(state: &QuantumState, obs: &[Observable]) -> Result<BranchBound> {
    let form = VarianceForm::new(state);
    Ok(branch_bound(&observable_terms(&form, obs)?, PairTerms::thm1_branch))
}

pub fn variance_ren_bound(state: &QuantumState, obs: &[Observable]) -> Result<f64> {
    let form = VarianceForm::new(state);
    Ok(observable_terms(&form, obs)?.lb2())
}

fn lhs_of<F: SquaredNorm>(form: &F, ops: &[&ComplexMatrix]) -> Result<f64> {
    ops.iter().map(|op| form.squared_norm(op)).sum()
}

/// THM1 and REN_OBS for observables, with lhs Σ I^c_ρ(A_i).
pub fn observable_bounds(state: &QuantumState, obs: &[Observable], c: &MCFunction) -> Result<BoundReport> {
    let engine = SkewEngine::new(state, c)?;
    observable_report(&engine, obs, BoundName::Thm1, BoundName::RenObs)
}

/// VAR_THM1 and VAR_REN, with lhs Σ Δ²_ρ(A_i).
pub fn variance_bounds(state: &QuantumState, obs: &[Observable]) -> Result<BoundReport> {
    observable_report(&VarianceForm::new(state), obs, BoundName::VarThm1, BoundName::VarRen)
}

fn observable_report<F: SquaredNorm>(
    form: &F,
    obs: &[Observable],
    thm: BoundName,
    ren: BoundName,
) -> Result<BoundReport> {
    let terms = observable_terms(form, obs)?;
    let mats: Vec<&ComplexMatrix> = obs.iter().map(Observable::matrix).collect();
    let mut report = BoundReport { lhs_sum: lhs_of(form, &mats)?, ..Default::default() };
    let b = branch_bound(&terms, PairTerms::thm1_branch);
    report.insert(thm, b.value, Some(Witness::Branch(b.branch)), Some(b.branch_values));
    report.insert(ren, terms.lb2(), None, None);
    Ok(report)
}

/// How REN_CH_1 and REN_CH_2 aggregate over the Kraus index i.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RenAggregation {
    /// Square roots taken per Kraus index and the bracket summed over i, as typeset.
    #[default]
    PerIndex,
    /// Kraus index summed inside each square root, the same aggregation as LB1/LB2.
    Pooled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChannelBoundOptions {
    pub perm_limit: u128,
    pub ren_aggregation: RenAggregation,
}

impl Default for ChannelBoundOptions {
    fn default() -> Self {
        Self { perm_limit: DEFAULT_PERM_LIMIT, ren_aggregation: RenAggregation::PerIndex }
    }
}

/// All permutations of 0..n in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        out.push(p.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else { break };
        let j = (i..n).rev().find(|&j| p[j] > p[i - 1]).expect("pivot exists");
        p.swap(i - 1, j);
        p[i..].reverse();
    }
    out
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).fold(1u128, |acc, k| acc.saturating_mul(k))
}

/// Number of assignments the channel search visits, (n!)^{N−1}.
pub fn assignment_count(n_kraus: usize, n_channels: usize) -> u128 {
    let f = factorial(n_kraus);
    (1..n_channels).fold(1u128, |acc, _| acc.saturating_mul(f))
}

/// Per-index values used by the channel search, precomputed once.
struct ChannelTables {
    n_ch: usize,
    n_kraus: usize,
    /// [pair][a * n + b] → I(K^s_a + K^t_b)
    plus: Vec<Vec<f64>>,
    minus: Vec<Vec<f64>>,
    /// mixed-radix index over (a_1, .., a_N) → I(Σ_s K^s_{a_s})
    sums: Vec<f64>,
}

impl ChannelTables {
    fn build(engine: &SkewEngine<'_>, kraus: &[Vec<ComplexMatrix>]) -> Result<Self> {
        let n_ch = kraus.len();
        let n = kraus[0].len();
        let d = engine.state().dim();
        let mut plus = Vec::new();
        let mut minus = Vec::new();
        for s in 0..n_ch {
            for t in (s + 1)..n_ch {
                let mut p = vec![0.0; n * n];
                let mut m = vec![0.0; n * n];
                for a in 0..n {
                    for b in 0..n {
                        p[a * n + b] = engine.operator(&(&kraus[s][a] + &kraus[t][b]))?.value();
                        m[a * n + b] = engine.operator(&(&kraus[s][a] - &kraus[t][b]))?.value();
                    }
                }
                plus.push(p);
                minus.push(m);
            }
        }
        let count = n.pow(n_ch as u32);
        let mut sums = Vec::with_capacity(count);
        for code in 0..count {
            let mut rest = code;
            let mut acc = ComplexMatrix::zeros(d, d);
            for ops in kraus.iter().rev() {
                acc = &acc + &ops[rest % n];
                rest /= n;
            }
            sums.push(engine.operator(&acc)?.value());
        }
        Ok(Self { n_ch, n_kraus: n, plus, minus, sums })
    }

    /// Pair terms for Kraus index i under `assign`, where assign[s] is channel s's permutation.
    fn terms_at(&self, assign: &[&Vec<usize>], i: usize) -> PairTerms {
        let n = self.n_kraus;
        let mut plus = Vec::with_capacity(self.plus.len());
        let mut minus = Vec::with_capacity(self.plus.len());
        let mut pair = 0;
        for s in 0..self.n_ch {
            for t in (s + 1)..self.n_ch {
                let idx = assign[s][i] * n + assign[t][i];
                plus.push(self.plus[pair][idx]);
                minus.push(self.minus[pair][idx]);
                pair += 1;
            }
        }
        let code = assign.iter().fold(0, |acc, p| acc * n + p[i]);
        PairTerms { n: self.n_ch, plus, minus, total: self.sums[code] }
    }
}

fn add_terms(acc: &mut PairTerms, other: &PairTerms) {
    for (a, b) in acc.plus.iter_mut().zip(&other.plus) {
        *a += b;
    }
    for (a, b) in acc.minus.iter_mut().zip(&other.minus) {
        *a += b;
    }
    acc.total += other.total;
}

/// Advances the odometer, last digit fastest; false once it wraps around.
fn advance(digits: &mut [usize], radix: usize) -> bool {
    for pos in (0..digits.len()).rev() {
        digits[pos] += 1;
        if digits[pos] < radix {
            return true;
        }
        digits[pos] = 0;
    }
    false
}

struct Best {
    value: f64,
    witness: Option<Witness>,
    branch_values: Option<[f64; 2]>,
}

impl Best {
    fn new() -> Self {
        Self { value: f64::NEG_INFINITY, witness: None, branch_values: None }
    }

    /// Keeps the first maximizer in visiting order, which is lexicographic.
    fn offer(&mut self, value: f64, witness: impl FnOnce() -> Witness, branch_values: Option<[f64; 2]>) {
        if value > self.value {
            self.value = value;
            self.witness = Some(witness());
            self.branch_values = branch_values;
        }
    }
}

/// LB1, LB2, LB3, REN_CH_1 and REN_CH_2, each maximized over all
/// permutation assignments with the first channel's permutation fixed to the identity.
///
/// Channels with fewer Kraus operators are padded with zero matrices. LB1 and
/// REN_CH_1 carry a 1/(N−2) factor and are omitted for N = 2.
pub fn channel_bounds(
    state: &QuantumState,
    channels: &[KrausChannel],
    c: &MCFunction,
    opts: &ChannelBoundOptions,
) -> Result<BoundReport> {
    let n_ch = channels.len();
    if n_ch < 2 {
        return Err(Error::TooFewChannels { needed: 2, got: n_ch });
    }
    let d = state.dim();
    for ch in channels {
        if ch.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: format!("{d}x{d} Kraus operators"),
                got: format!("{0}x{0}", ch.dim()),
            });
        }
    }
    let n = channels.iter().map(KrausChannel::len).max().unwrap_or(1);
    let needed = assignment_count(n, n_ch);
    if needed > opts.perm_limit {
        return Err(Error::PermutationBudgetExceeded { needed, limit: opts.perm_limit });
    }

    let engine = SkewEngine::new(state, c)?;
    let kraus: Vec<Vec<ComplexMatrix>> = channels.iter().map(|ch| ch.padded(n)).collect();
    let tables = ChannelTables::build(&engine, &kraus)?;

    let mut lhs = 0.0;
    for ops in &kraus {
        for k in ops {
            lhs += engine.operator(k)?.value();
        }
    }

    let perms = permutations(n);
    let identity = &perms[0];
    let with_lb1 = n_ch >= 3;
    let (mut lb1, mut lb2, mut lb3, mut ren1, mut ren2) =
        (Best::new(), Best::new(), Best::new(), Best::new(), Best::new());

    // odometer over the permutation indices of channels 2..N
    let mut digits = vec![0usize; n_ch - 1];
    loop {
        let mut assign: Vec<&Vec<usize>> = Vec::with_capacity(n_ch);
        assign.push(identity);
        assign.extend(digits.iter().map(|&k| &perms[k]));
        let witness = || PermutationAssignment { perms: assign.iter().map(|p| (*p).clone()).collect() };

        let per_index: Vec<PairTerms> = (0..n).map(|i| tables.terms_at(&assign, i)).collect();
        let mut pooled = per_index[0].clone();
        for t in &per_index[1..] {
            add_terms(&mut pooled, t);
        }

        if with_lb1 {
            lb1.offer(pooled.lb1(), || Witness::Permutations(witness()), None);
        }
        lb2.offer(pooled.lb2(), || Witness::Permutations(witness()), None);
        let b = branch_bound(&pooled, PairTerms::lb3_branch);
        lb3.offer(b.value, || Witness::BranchAndPermutations(b.branch, witness()), Some(b.branch_values));

        let (r1, r2) = match opts.ren_aggregation {
            RenAggregation::PerIndex => {
                (per_index.iter().map(PairTerms::lb1).sum::<f64>(), per_index.iter().map(PairTerms::lb2).sum::<f64>())
            }
            RenAggregation::Pooled => (pooled.lb1(), pooled.lb2()),
        };
        if with_lb1 {
            ren1.offer(r1, || Witness::Permutations(witness()), None);
        }
        ren2.offer(r2, || Witness::Permutations(witness()), None);

        if !advance(&mut digits, perms.len()) {
            break;
        }
    }

    let mut report = BoundReport { lhs_sum: lhs, ..Default::default() };
    let mut put = |name, best: Best| {
        report.insert(name, best.value, best.witness, best.branch_values);
    };
    if with_lb1 {
        put(BoundName::Lb1, lb1);
        put(BoundName::RenCh1, ren1);
    }
    put(BoundName::Lb2, lb2);
    put(BoundName::Lb3, lb3);
    put(BoundName::RenCh2, ren2);
    Ok(report)
}

/// Lb1, Lb2, Lb3 for unitaries, using sums and differences U_s ± U_t as general operators.
/// Lb1 is omitted for N = 2.
pub fn unitary_bounds(state: &QuantumState, unitaries: &[UnitaryOperator], c: &MCFunction) -> Result<BoundReport> {
    if unitaries.len() < 2 {
        return Err(Error::TooFewUnitaries { needed: 2, got: unitaries.len() });
    }
    let engine = SkewEngine::new(state, c)?;
    let mats: Vec<&ComplexMatrix> = unitaries.iter().map(UnitaryOperator::matrix).collect();
    let terms = PairTerms::from_form(&engine, &mats)?;
    let mut report = BoundReport { lhs_sum: lhs_of(&engine, &mats)?, ..Default::default() };
    if unitaries.len() >= 3 {
        report.insert(BoundName::Lb1u, terms.lb1(), None, None);
    }
    report.insert(BoundName::Lb2u, terms.lb2(), None, None);
    let b = branch_bound(&terms, PairTerms::lb3_branch);
    report.insert(BoundName::Lb3u, b.value, Some(Witness::Branch(b.branch)), Some(b.branch_values));
    Ok(report)
}

/// A checked ordering between a stronger and a weaker bound.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderingFact {
    pub stronger: BoundName,
    pub weaker: BoundName,
    /// stronger (x = 1 branch) − weaker
    pub gap: f64,
}

/// Checks THM1(x = 1) ≥ REN_OBS and VAR_THM1(x = 1) ≥ VAR_REN on whichever pairs the report holds.
pub fn tightness_check(report: &BoundReport) -> Result<Vec<OrderingFact>> {
    let mut facts = Vec::new();
    for (strong, weak) in [(BoundName::Thm1, BoundName::RenObs), (BoundName::VarThm1, BoundName::VarRen)] {
        if report.get(strong).is_none() && report.get(weak).is_none() {
            continue;
        }
        let s = report.require(strong)?;
        let w = report.require(weak)?;
        let x1 = s.branch_values.map_or(s.value, |b| b[1]);
        let gap = x1 - w.value;
        if gap < -ORDERING_TOL {
            return Err(Error::OrderingViolation {
                stronger: format!("{strong}(x=1)"),
                stronger_value: x1,
                weaker: weak.label().into(),
                weaker_value: w.value,
            });
        }
        facts.push(OrderingFact { stronger: strong, weaker: weak, gap });
    }
    if facts.is_empty() {
        return Err(Error::MissingBound("THM1/REN_OBS or VAR_THM1/VAR_REN".into()));
    }
    Ok(facts)
}
