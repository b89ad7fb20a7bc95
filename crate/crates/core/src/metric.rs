//! Morozova–Chentsov functions and the spectral kernel through which
//! c(L_ρ, R_ρ) acts on matrices written in the eigenbasis of ρ.
//!
//! With ρ = Σ λ_j |j⟩⟨j|, the commutator i[ρ, X] has entries i(λ_j − λ_k)X_jk,
//! and the superoperator c(L_ρ, R_ρ) multiplies entry (j, k) by c(λ_j, λ_k).
//! The metric-adjusted skew information therefore collapses to
//!
//! ```text
//! I^c_ρ(X) = Σ_jk w_jk |X_jk|²,   w_jk = (m(c)/2) · c(λ_j, λ_k) · (λ_j − λ_k)²
//! ```
//!
//! Singular states: the (λ_j − λ_k)² factor cancels the pole of c on the
//! diagonal, and pairs with λ_j = λ_k = 0 get weight zero for every c. That
//! limit convention is a choice; rank-deficient states and pure states rely on it.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::state::EigenDecomposition;

/// Below this both arguments of c are treated as zero.
pub const ZERO_EIGENVALUE: f64 = 1e-14;

type Generator = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Kind {
    Wyd(f64),
    Fisher,
    Custom { name: String, f: Generator },
}

/// A Morozova–Chentsov function c(x, y) = 1/(y·f(x/y)) together with m(c) = lim_{t→0} f(t).
#[derive(Clone)]
pub struct MCFunction {
    kind: Kind,
    m_c: f64,
}

impl fmt::Debug for MCFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            Kind::Wyd(a) => write!(f, "MCFunction::Wyd({a})"),
            Kind::Fisher => write!(f, "MCFunction::Fisher"),
            Kind::Custom { name, .. } => write!(f, "MCFunction::Custom({name}, m={})", self.m_c),
        }
    }
}

impl MCFunction {
    /// Wigner–Yanase–Dyson function c_α, α ∈ (0, 1).
    pub fn wyd(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::AlphaOutOfRange(alpha));
        }
        Ok(Self { kind: Kind::Wyd(alpha), m_c: alpha * (1.0 - alpha) })
    }

    /// Wigner–Yanase, α = 1/2.
    pub fn wigner_yanase() -> Self {
        Self::wyd(0.5).expect("1/2 is in range")
    }

    /// Fisher (SLD) function, f(t) = (1 + t)/2.
    pub fn fisher() -> Self {
        Self { kind: Kind::Fisher, m_c: 0.5 }
    }

    /// A caller-supplied generator f with its limit m = f(0⁺).
    ///
    /// Only the functional equation f(t) = t·f(1/t), positivity and the limit are
    /// checked numerically; operator monotonicity is the caller's responsibility.
    pub fn custom<F>(name: impl Into<String>, f: F, m: f64) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let violations = validate_custom_f(&f, m);
        if !violations.is_empty() {
            let msg: Vec<String> = violations.iter().map(ToString::to_string).collect();
            return Err(Error::InvalidCustomFunction(msg.join("; ")));
        }
        Ok(Self { kind: Kind::Custom { name: name.into(), f: Arc::new(f) }, m_c: m })
    }

    pub fn m_c(&self) -> f64 {
        self.m_c
    }

    /// α for the WYD family, `None` otherwise.
    pub fn alpha(&self) -> Option<f64> {
        match self.kind {
            Kind::Wyd(a) => Some(a),
            _ => None,
        }
    }

    pub fn is_fisher(&self) -> bool {
        matches!(self.kind, Kind::Fisher)
    }

    pub fn label(&self) -> String {
        match &self.kind {
            Kind::Wyd(a) => format!("wyd({a})"),
            Kind::Fisher => "fisher".into(),
            Kind::Custom { name, .. } => format!("custom({name})"),
        }
    }

    /// The operator-monotone generator f(t).
    pub fn generator(&self, t: f64) -> f64 {
        match &self.kind {
            Kind::Wyd(a) => wyd_generator(*a, t),
            Kind::Fisher => (1.0 + t) / 2.0,
            Kind::Custom { f, .. } => f(t),
        }
    }
}

/// f_α(t) = α(1−α)(1−t)² / ((1−t^α)(1−t^{1−α})), with f_α(1) = 1 and f_α(0) = α(1−α).
pub fn wyd_generator(alpha: f64, t: f64) -> f64 {
    if t == 0.0 {
        return alpha * (1.0 - alpha);
    }
    let ln_t = t.ln();
    if ln_t.abs() < 1e-300 {
        return 1.0;
    }
    // (1-t)² / ((1-t^α)(1-t^{1-α})) with expm1 for accuracy near t = 1
    let num = (t - 1.0) * (t - 1.0);
    let den = (alpha * ln_t).exp_m1() * ((1.0 - alpha) * ln_t).exp_m1();
    alpha * (1.0 - alpha) * num / den
}

/// Evaluates c(x, y) for x, y ≥ 0, not both zero.
pub fn c_value(c: &MCFunction, x: f64, y: f64) -> Result<f64> {
    if x < ZERO_EIGENVALUE && y < ZERO_EIGENVALUE {
        return Err(Error::DomainError { x, y });
    }
    let value = match &c.kind {
        Kind::Wyd(a) => wyd_c(*a, x, y),
        Kind::Fisher => 2.0 / (x + y),
        Kind::Custom { f, .. } => {
            let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
            let ratio = lo / hi;
            let f_ratio = if ratio == 0.0 { c.m_c } else { f(ratio) };
            1.0 / (hi * f_ratio)
        }
    };
    if !value.is_finite() || value <= 0.0 {
        return Err(Error::NonPositiveResult { x, y, value });
    }
    Ok(value)
}

/// c_α(x, y) = (x^α − y^α)(x^{1−α} − y^{1−α}) / (α(1−α)(x − y)²), c_α(x, x) = 1/x.
fn wyd_c(alpha: f64, x: f64, y: f64) -> f64 {
    let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
    if lo == 0.0 {
        return 1.0 / (alpha * (1.0 - alpha) * hi);
    }
    if lo == hi {
        return 1.0 / hi;
    }
    // lo^p − hi^p = hi^p · expm1(p·ln(1 + δ)), δ = (lo − hi)/hi ∈ (−1, 0)
    let delta = (lo - hi) / hi;
    let ln_r = delta.ln_1p();
    let u = (alpha * ln_r).exp_m1();
    let v = ((1.0 - alpha) * ln_r).exp_m1();
    u * v / (alpha * (1.0 - alpha) * hi * delta * delta)
}

/// Weights w_jk of the quadratic form I^c_ρ(X) = Σ w_jk |X̃_jk|² in the eigenbasis of ρ.
#[derive(Debug, Clone)]
pub struct SpectralKernel {
    dim: usize,
    weights: Vec<f64>,
}

impl SpectralKernel {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn weight(&self, j: usize, k: usize) -> f64 {
        self.weights[j * self.dim + k]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// True when every weight is zero, i.e. every skew value vanishes.
    pub fn is_zero(&self) -> bool {
        self.weights.iter().all(|&w| w == 0.0)
    }
}

/// Builds the spectral kernel of `c` for the given decomposition.
///
/// Only custom functions can fail, when c turns non-positive off the validation grid.
pub fn kernel(c: &MCFunction, eig: &EigenDecomposition) -> Result<SpectralKernel> {
    let lam = eig.eigenvalues();
    let d = lam.len();
    let mut weights = vec![0.0; d * d];
    for j in 0..d {
        for k in (j + 1)..d {
            let w = pair_weight(c, lam[j], lam[k])?;
            weights[j * d + k] = w;
            weights[k * d + j] = w;
        }
    }
    Ok(SpectralKernel { dim: d, weights })
}

fn pair_weight(c: &MCFunction, x: f64, y: f64) -> Result<f64> {
    if x == y || (x < ZERO_EIGENVALUE && y < ZERO_EIGENVALUE) {
        return Ok(0.0);
    }
    if let Kind::Wyd(a) = c.kind {
        if x == 0.0 || y == 0.0 {
            return Ok(0.5 * (x.powf(a) - y.powf(a)) * (x.powf(1.0 - a) - y.powf(1.0 - a)));
        }
    }
    let diff = x - y;
    Ok(0.5 * c.m_c * c_value(c, x, y)? * diff * diff)
}

/// A reason a custom generator was rejected.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    NonFinite { t: f64 },
    NonPositive { t: f64, value: f64 },
    FunctionalEquation { t: f64, f_t: f64, t_f_inv: f64 },
    NonPositiveLimit { m: f64 },
    LimitMismatch { m: f64, probed: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonFinite { t } => write!(f, "f({t}) is not finite"),
            Violation::NonPositive { t, value } => write!(f, "f({t}) = {value} is not positive"),
            Violation::FunctionalEquation { t, f_t, t_f_inv } => {
                write!(f, "f({t}) = {f_t} but t·f(1/t) = {t_f_inv}")
            }
            Violation::NonPositiveLimit { m } => write!(f, "m = {m} is not positive"),
            Violation::LimitMismatch { m, probed } => {
                write!(f, "m = {m} but f(t→0) ≈ {probed}")
            }
        }
    }
}

const FE_REL_TOL: f64 = 1e-8;
const LIMIT_REL_TOL: f64 = 1e-4;

/// Checks f(t) = t·f(1/t) and positivity on t = 2^k, k = −8..8, and m ≈ f(0⁺).
///
/// The limit is probed at t = 1e-8, 1e-16, ... and accepted when any probe lands
/// within relative 1e-4 of `m`; generators such as f_α approach their limit like
/// t^min(α, 1−α), too slowly for a single probe at 1e-8.
pub fn validate_custom_f(f: &dyn Fn(f64) -> f64, m: f64) -> Vec<Violation> {
    let mut out = Vec::new();
    for k in -8..=8 {
        let t = 2f64.powi(k);
        let f_t = f(t);
        let t_f_inv = t * f(1.0 / t);
        if !f_t.is_finite() || !t_f_inv.is_finite() {
            out.push(Violation::NonFinite { t });
            continue;
        }
        if f_t <= 0.0 {
            out.push(Violation::NonPositive { t, value: f_t });
        }
        let scale = f_t.abs().max(t_f_inv.abs()).max(f64::MIN_POSITIVE);
        if (f_t - t_f_inv).abs() > FE_REL_TOL * scale {
            out.push(Violation::FunctionalEquation { t, f_t, t_f_inv });
        }
    }
    if !m.is_finite() || m <= 0.0 {
        out.push(Violation::NonPositiveLimit { m });
        return out;
    }
    let mut closest = f64::NAN;
    let mut accepted = false;
    for exp in (8..=296).step_by(8) {
        let probed = f(10f64.powi(-exp));
        if !probed.is_finite() {
            continue;
        }
        if closest.is_nan() || (probed - m).abs() < (closest - m).abs() {
            closest = probed;
        }
        if (probed - m).abs() <= LIMIT_REL_TOL * m {
            accepted = true;
            break;
        }
    }
    if !accepted {
        out.push(Violation::LimitMismatch { m, probed: closest });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{ComplexMatrix, C64};

    fn diag_eig(l: &[f64]) -> EigenDecomposition {
        let d: Vec<C64> = l.iter().map(|&x| C64::new(x, 0.0)).collect();
        EigenDecomposition::hermitian(&ComplexMatrix::from_diagonal(&d))
    }

    #[test]
    fn m_constants() {
        assert!((MCFunction::wyd(1.0 / 3.0).unwrap().m_c() - 2.0 / 9.0).abs() < 1e-15);
        assert_eq!(MCFunction::fisher().m_c(), 0.5);
        assert!(matches!(MCFunction::wyd(0.0), Err(Error::AlphaOutOfRange(_))));
        assert!(matches!(MCFunction::wyd(1.0), Err(Error::AlphaOutOfRange(_))));
    }

    #[test]
    fn c_value_examples() {
        assert_eq!(c_value(&MCFunction::fisher(), 1.0, 1.0).unwrap(), 1.0);
        for a in [0.1, 0.25, 0.5, 0.9] {
            let c = MCFunction::wyd(a).unwrap();
            assert!((c_value(&c, 1.0, 1.0).unwrap() - 1.0).abs() < 1e-15);
        }
        // 4·(2−1)(2−1)/9
        let wy = MCFunction::wigner_yanase();
        assert!((c_value(&wy, 4.0, 1.0).unwrap() - 4.0 / 9.0).abs() < 1e-15);
        // same value via 1/(y·f(x/y))
        assert!((1.0 / wyd_generator(0.5, 4.0) - 4.0 / 9.0).abs() < 1e-14);
        assert!(matches!(c_value(&wy, 0.0, 1e-15), Err(Error::DomainError { .. })));
    }

    #[test]
    fn c_value_continuous_at_coincidence() {
        let c = MCFunction::wyd(0.3).unwrap();
        for x in [0.01, 0.3, 0.9] {
            let at = c_value(&c, x, x).unwrap();
            for eps in [1e-6, 1e-8] {
                let near = c_value(&c, x, x + eps).unwrap();
                assert!((near - at).abs() <= 10.0 * eps / (x * x), "x={x} eps={eps}");
            }
        }
    }

    #[test]
    fn kernel_examples() {
        let wy = MCFunction::wyd(0.37).unwrap();
        assert!(kernel(&wy, &diag_eig(&[0.5, 0.5])).unwrap().is_zero());
        assert!(kernel(&MCFunction::fisher(), &diag_eig(&[0.5, 0.5])).unwrap().is_zero());

        let k = kernel(&wy, &diag_eig(&[1.0, 0.0])).unwrap();
        assert_eq!(k.weight(0, 1), 0.5);
        assert_eq!(k.weight(1, 0), 0.5);
        assert_eq!(k.weight(0, 0), 0.0);

        let k = kernel(&MCFunction::fisher(), &diag_eig(&[1.0, 0.0])).unwrap();
        assert!((k.weight(0, 1) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn zero_zero_pairs_have_zero_weight() {
        for c in [MCFunction::fisher(), MCFunction::wyd(0.2).unwrap()] {
            let k = kernel(&c, &diag_eig(&[1.0, 0.0, 0.0])).unwrap();
            assert_eq!(k.weight(1, 2), 0.0);
            assert!(k.weight(0, 2) > 0.0);
        }
    }

    #[test]
    fn validate_known_generators() {
        assert!(validate_custom_f(&|t| (1.0 + t) / 2.0, 0.5).is_empty());
        assert!(validate_custom_f(&|t| wyd_generator(1.0 / 3.0, t), 2.0 / 9.0).is_empty());
        let bad = validate_custom_f(&|t| t * t, 1.0);
        assert!(bad.iter().any(|v| matches!(v,
            Violation::FunctionalEquation { t, f_t, t_f_inv }
                if *t == 2.0 && *f_t == 4.0 && (*t_f_inv - 0.5).abs() < 1e-15)));
        let wrong_m = validate_custom_f(&|t| (1.0 + t) / 2.0, 1.0);
        assert!(matches!(wrong_m.as_slice(), [Violation::LimitMismatch { .. }]));
        assert!(MCFunction::custom("square", |t| t * t, 1.0).is_err());
    }

    #[test]
    fn custom_fisher_matches_builtin_kernel() {
        let custom = MCFunction::custom("sld", |t| (1.0 + t) / 2.0, 0.5).unwrap();
        let eig = diag_eig(&[0.6, 0.3, 0.1, 0.0]);
        let a = kernel(&custom, &eig).unwrap();
        let b = kernel(&MCFunction::fisher(), &eig).unwrap();
        for (x, y) in a.weights().iter().zip(b.weights()) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn wyd_generator_limits() {
        assert_eq!(wyd_generator(0.3, 1.0), 1.0);
        assert!((wyd_generator(0.3, 1.0 + 1e-9) - 1.0).abs() < 1e-8);
        assert_eq!(wyd_generator(0.3, 0.0), 0.3 * 0.7);
    }
}
