//! Doubling weights in log-domain and their doubling certificates.
//!
//! A weight `ω` is evaluated only through `ln ω(1 - ε)` as a function of the
//! complement radius `ε = 1 - r`, and internally as a function of `ln ε`, so
//! that neither the blow-up of `ω` nor the underflow of `1 - r` near the unit
//! circle is ever materialised.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::logpos::LogPos;
use crate::scalar::Real;

/// Log-weight evaluator for user supplied weights: maps `ln ε` to `ln ω(1-ε)`.
pub type LogWeightFn<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

/// Shape of a weight. Catalog entries have closed forms in `L = -ln ε`.
#[derive(Clone)]
pub enum WeightKind<T> {
    /// `ω(r) = (1-r)^{-β}`, `β > 0`.
    Power { beta: T },
    /// `ω(r) = log(e/(1-r))`.
    Log,
    /// `ω(r) = exp(sqrt(log(e/(1-r))))`.
    ExpSqrtLog,
    /// Pointwise product of the listed weights.
    Product(Vec<WeightKind<T>>),
    Custom(LogWeightFn<T>),
}

impl<T: Real> WeightKind<T> {
    fn log_omega(&self, ln_eps: T) -> T {
        let big_l = -ln_eps;
        match self {
            WeightKind::Power { beta } => *beta * big_l,
            WeightKind::Log => big_l.ln_1p(),
            WeightKind::ExpSqrtLog => (T::one() + big_l).sqrt(),
            WeightKind::Product(parts) => {
                parts.iter().fold(T::zero(), |acc, p| acc + p.log_omega(ln_eps))
            }
            WeightKind::Custom(f) => f(ln_eps),
        }
    }

    fn spec(&self) -> String {
        match self {
            WeightKind::Power { beta } => format!("pow:beta={}", beta),
            WeightKind::Log => "log".to_string(),
            WeightKind::ExpSqrtLog => "exploglog".to_string(),
            WeightKind::Product(parts) => {
                let inner: Vec<String> = parts.iter().map(|p| p.spec()).collect();
                format!("prod:{}", inner.join(","))
            }
            WeightKind::Custom(_) => "custom".to_string(),
        }
    }
}

impl<T: Real> fmt::Debug for WeightKind<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec())
    }
}

/// A doubling weight `ω : [0,1) → (0,∞)`, non-decreasing and unbounded.
#[derive(Clone)]
pub struct Weight<T> {
    name: String,
    kind: WeightKind<T>,
    ln_eps_floor: T,
}

impl<T: Real> fmt::Debug for Weight<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Weight")
            .field("name", &self.name)
            .field("ln_eps_floor", &self.ln_eps_floor)
            .finish()
    }
}

impl<T: Real> Weight<T> {
    pub fn power(beta: T) -> Result<Self> {
        if !(beta > T::zero()) || !beta.is_finite() {
            return Err(Error::Argument(format!("power weight needs β > 0, got {beta}")));
        }
        Ok(Self::from_kind(WeightKind::Power { beta }))
    }

    pub fn log() -> Self {
        Self::from_kind(WeightKind::Log)
    }

    pub fn exp_sqrt_log() -> Self {
        Self::from_kind(WeightKind::ExpSqrtLog)
    }

    pub fn product(parts: Vec<Weight<T>>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::Argument("empty weight product".into()));
        }
        let floor = parts.iter().map(|w| w.ln_eps_floor).fold(T::neg_infinity(), T::max);
        let kinds = parts.into_iter().map(|w| w.kind).collect();
        let mut w = Self::from_kind(WeightKind::Product(kinds));
        w.ln_eps_floor = floor;
        Ok(w)
    }

    /// Weight given by an arbitrary `ln ε ↦ ln ω(1-ε)` map, trusted for
    /// `ln ε ≥ ln_eps_floor`.
    pub fn custom(name: &str, ln_eps_floor: T, f: LogWeightFn<T>) -> Self {
        Weight { name: name.to_string(), kind: WeightKind::Custom(f), ln_eps_floor }
    }

    fn from_kind(kind: WeightKind<T>) -> Self {
        Weight { name: kind.spec(), kind, ln_eps_floor: T::lit(T::DEFAULT_LN_EPS_FLOOR) }
    }

    /// The four weights the tooling ships with.
    pub fn catalog() -> Vec<Weight<T>> {
        ["pow:beta=1", "log", "exploglog", "prod:pow:0.5,log"]
            .iter()
            .map(|s| s.parse().expect("catalog spec"))
            .collect()
    }

    pub fn with_ln_eps_floor(mut self, ln_eps_floor: T) -> Self {
        self.ln_eps_floor = ln_eps_floor;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> &WeightKind<T> {
        &self.kind
    }

    /// Canonical DSL string; parses back to the same weight.
    pub fn spec(&self) -> String {
        self.kind.spec()
    }

    pub fn ln_eps_floor(&self) -> T {
        self.ln_eps_floor
    }

    /// Smallest complement radius at which the weight is trusted (may
    /// underflow to zero for the default floor).
    pub fn eps_floor(&self) -> T {
        self.ln_eps_floor.exp()
    }

    /// `ln ω(1-ε)` for `ε ∈ [eps_floor, 1]`.
    pub fn eval_log_weight(&self, eps: T) -> Result<T> {
        if !(eps > T::zero()) || eps > T::one() {
            return Err(Error::Domain { what: "complement radius ε", value: eps.as_f64() });
        }
        self.log_eval_ln(eps.ln())
    }

    /// `ln ω(1-ε)` from `ln ε`; errors outside `[ln_eps_floor, 0]`.
    pub fn log_eval_ln(&self, ln_eps: T) -> Result<T> {
        if ln_eps.is_nan() || ln_eps > T::zero() || ln_eps < self.ln_eps_floor {
            return Err(Error::Domain { what: "ln ε", value: ln_eps.as_f64() });
        }
        Ok(self.kind.log_omega(ln_eps))
    }

    pub fn log_eval(&self, eps: LogPos<T>) -> Result<T> {
        self.log_eval_ln(eps.ln())
    }

    /// Range-unchecked evaluation, for callers that already clamp.
    pub(crate) fn log_omega_unchecked(&self, ln_eps: T) -> T {
        self.kind.log_omega(ln_eps.min(T::zero()))
    }
}

impl<T: Real> FromStr for Weight<T> {
    type Err = Error;

    /// Parses the weight DSL: `pow:beta=1`, `pow:0.5`, `log`, `exploglog`,
    /// `prod:pow:0.5,log`. Case-insensitive.
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        if let Some(rest) = lower.strip_prefix("prod:") {
            let parts = rest
                .split(',')
                .map(|p| parse_simple::<T>(p.trim()).ok_or_else(|| Error::WeightSpec(s.to_string())))
                .collect::<Result<Vec<_>>>()?;
            return Weight::product(parts);
        }
        parse_simple(&lower).ok_or_else(|| Error::WeightSpec(s.to_string()))
    }
}

fn parse_simple<T: Real>(s: &str) -> Option<Weight<T>> {
    match s {
        "log" => Some(Weight::log()),
        "exploglog" => Some(Weight::exp_sqrt_log()),
        _ => {
            let rest = s.strip_prefix("pow:")?;
            let value = rest.strip_prefix("beta=").unwrap_or(rest);
            let beta: f64 = value.parse().ok()?;
            Weight::power(T::from_f64(beta)?).ok()
        }
    }
}

/// Constants `B`, `α = log₂ B` and `C = max{B ω(1/2)/ω(0), B²}` of a doubling
/// weight, checked on a probe grid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DoublingCertificate<T> {
    pub b: T,
    pub alpha: T,
    pub c: T,
    pub probe_count: usize,
}

const INFLATION: f64 = 1e-9;

/// Dyadic probes `ε = 2^{-i}`, `i = 0..=min(60, log₂(1/eps_floor) - 1)`.
pub fn default_probe_grid<T: Real>(w: &Weight<T>) -> Vec<T> {
    let octaves = (-w.ln_eps_floor() / T::LN_2()).floor().as_f64() - 1.0;
    let last = octaves.clamp(0.0, 60.0) as i32;
    (0..=last).map(|i| T::lit(2f64.powi(-i))).collect()
}

fn probe_log_ratios<T: Real>(w: &Weight<T>, probe_grid: &[T]) -> Result<Vec<T>> {
    if probe_grid.is_empty() {
        return Err(Error::Argument("empty probe grid".into()));
    }
    let two = T::lit(2.0);
    probe_grid
        .iter()
        .map(|&eps| {
            if !(eps > T::zero()) || eps > T::one() || eps.ln() - T::LN_2() < w.ln_eps_floor() {
                return Err(Error::Domain { what: "probe ε", value: eps.as_f64() });
            }
            let diff = w.eval_log_weight(eps / two)? - w.eval_log_weight(eps)?;
            if diff.is_nan() || diff.is_infinite() {
                return Err(Error::NotDoubling { eps: eps.as_f64(), ratio: f64::INFINITY });
            }
            if diff < -T::lit(1e-12) * (T::one() + diff.abs()) {
                return Err(Error::NotMonotone { eps: eps.as_f64() });
            }
            Ok(diff)
        })
        .collect()
}

/// Rejects grids on which the doubling ratio increases monotonically by
/// more than 1% across the last three decades of `ε`.
fn detect_divergence<T: Real>(probe_grid: &[T], diffs: &[T]) -> Result<()> {
    let mut order: Vec<usize> = (0..probe_grid.len()).collect();
    order.sort_by(|&a, &b| probe_grid[b].partial_cmp(&probe_grid[a]).unwrap());
    let last = *order.last().unwrap();
    let eps_last = probe_grid[last].as_f64();
    let mut picks = Vec::with_capacity(4);
    for decade in (0..=3).rev() {
        let target = eps_last * 10f64.powi(decade);
        let nearest = order
            .iter()
            .copied()
            .min_by(|&a, &b| {
                let da = (probe_grid[a].as_f64().ln() - target.ln()).abs();
                let db = (probe_grid[b].as_f64().ln() - target.ln()).abs();
                da.partial_cmp(&db).unwrap()
            })
            .unwrap();
        if (probe_grid[nearest].as_f64().ln() - target.ln()).abs() > std::f64::consts::LN_2 {
            // grid does not reach three decades; nothing to compare
            return Ok(());
        }
        picks.push(diffs[nearest].as_f64());
    }
    picks.dedup();
    if picks.len() < 4 {
        return Ok(());
    }
    let increasing = picks.windows(2).all(|p| p[1] > p[0]);
    if increasing && picks[3] > 1.01 * picks[0] {
        return Err(Error::NotDoubling { eps: eps_last, ratio: picks[3].exp() });
    }
    Ok(())
}

fn envelope_constant<T: Real>(w: &Weight<T>, b: T) -> Result<T> {
    let half_over_zero = (w.eval_log_weight(T::lit(0.5))? - w.eval_log_weight(T::one())?).exp();
    Ok((b * half_over_zero).max(b * b))
}

/// Certifies the doubling condition on `probe_grid` and derives `B`, `α`, `C`.
pub fn certify_doubling<T: Real>(w: &Weight<T>, probe_grid: &[T]) -> Result<DoublingCertificate<T>> {
    let diffs = probe_log_ratios(w, probe_grid)?;
    detect_divergence(probe_grid, &diffs)?;
    let max_diff = diffs.iter().copied().fold(T::neg_infinity(), T::max);
    if !(max_diff > T::zero()) {
        return Err(Error::NotUnbounded);
    }
    let b = max_diff.exp() * (T::one() + T::lit(INFLATION));
    Ok(DoublingCertificate {
        b,
        alpha: b.log2(),
        c: envelope_constant(w, b)?,
        probe_count: probe_grid.len(),
    })
}

/// Certificate for a caller-supplied `B`, verified on `probe_grid` without
/// inflation (up to rounding of the log-ratios).
pub fn certify_with_constant<T: Real>(
    w: &Weight<T>,
    b: T,
    probe_grid: &[T],
) -> Result<DoublingCertificate<T>> {
    if !(b > T::one()) {
        return Err(Error::Argument(format!("doubling constant must exceed 1, got {b}")));
    }
    let diffs = probe_log_ratios(w, probe_grid)?;
    let log_b = b.ln();
    let slack = T::lit(64.0) * T::epsilon() * (T::one() + log_b);
    for (&eps, &diff) in probe_grid.iter().zip(&diffs) {
        if diff > log_b + slack {
            return Err(Error::NotDoubling { eps: eps.as_f64(), ratio: diff.exp().as_f64() });
        }
    }
    Ok(DoublingCertificate {
        b,
        alpha: b.log2(),
        c: envelope_constant(w, b)?,
        probe_count: probe_grid.len(),
    })
}

/// Growth envelope `ω(t) ≤ C ((1-r)/(1-t))^α ω(r)` for `0 ≤ r ≤ t < 1`.
pub fn check_envelope<T: Real>(cert: &DoublingCertificate<T>, w: &Weight<T>, r: T, t: T) -> Result<bool> {
    if r > t {
        return Err(Error::Argument(format!("envelope needs r ≤ t, got r = {r}, t = {t}")));
    }
    check_envelope_eps(cert, w, T::one() - r, T::one() - t)
}

/// [`check_envelope`] in complement coordinates, `eps_t ≤ eps_r`.
pub fn check_envelope_eps<T: Real>(
    cert: &DoublingCertificate<T>,
    w: &Weight<T>,
    eps_r: T,
    eps_t: T,
) -> Result<bool> {
    if eps_t > eps_r {
        return Err(Error::Argument("envelope needs 1-t ≤ 1-r".into()));
    }
    let lhs = w.eval_log_weight(eps_t)?;
    let rhs = cert.c.ln() + cert.alpha * (eps_r / eps_t).ln() + w.eval_log_weight(eps_r)?;
    Ok(lhs <= rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pow1() -> Weight<f64> {
        Weight::power(1.0).unwrap()
    }

    #[test]
    fn eval_examples() {
        assert_eq!(pow1().eval_log_weight(1.0).unwrap(), 0.0);
        let v = pow1().eval_log_weight(1e-6).unwrap();
        assert!((v - 6.0 * 10f64.ln()).abs() < 1e-12);
        assert_eq!(Weight::<f64>::log().eval_log_weight(1.0).unwrap(), 0.0);
        assert!(pow1().eval_log_weight(0.0).is_err());
        assert!(pow1().eval_log_weight(1.5).is_err());
    }

    #[test]
    fn dsl_parsing() {
        for (s, expect) in [
            ("pow:beta=1", "pow:beta=1"),
            ("POW:0.5", "pow:beta=0.5"),
            ("Log", "log"),
            ("exploglog", "exploglog"),
            ("prod:pow:0.5,log", "prod:pow:beta=0.5,log"),
        ] {
            let w: Weight<f64> = s.parse().unwrap();
            assert_eq!(w.spec(), expect);
            let again: Weight<f64> = w.spec().parse().unwrap();
            assert_eq!(again.spec(), expect);
        }
        for bad in ["", "sqrt", "pow:beta=-1", "pow:x", "prod:", "prod:log,foo"] {
            assert!(bad.parse::<Weight<f64>>().is_err(), "{bad}");
        }
    }

    #[test]
    fn product_adds_logs() {
        let w: Weight<f64> = "prod:pow:0.5,log".parse().unwrap();
        let eps = 1e-4f64;
        let expect = 0.5 * (1.0 / eps).ln() + (1.0 + (1.0 / eps).ln()).ln();
        assert!((w.eval_log_weight(eps).unwrap() - expect).abs() < 1e-12);
    }

    #[test]
    fn certificate_examples() {
        let grid = default_probe_grid(&pow1());
        assert_eq!(grid.len(), 61);
        let cert = certify_doubling(&pow1(), &grid).unwrap();
        assert!((cert.b - 2.0 * (1.0 + 1e-9)).abs() < 1e-12);
        assert!((cert.alpha - 1.0).abs() < 1e-8);
        assert!((cert.c - 4.0).abs() < 1e-7);
        assert_eq!(cert.alpha, cert.b.log2());

        let half = Weight::power(0.5).unwrap();
        let cert = certify_doubling(&half, &default_probe_grid(&half)).unwrap();
        assert!((cert.b - 2f64.sqrt()).abs() < 1e-8);
        assert!((cert.alpha - 0.5).abs() < 1e-8);
        assert!((cert.c - 2.0).abs() < 1e-8);

        let log = Weight::<f64>::log();
        let cert = certify_doubling(&log, &default_probe_grid(&log)).unwrap();
        assert!((cert.b - (1.0 + 2f64.ln())).abs() < 1e-8);
        assert!(cert.c >= cert.b * cert.b);
    }

    #[test]
    fn log_weight_ratio_peaks_at_eps_one() {
        // brute-force scan of (1+log(2/ε))/(1+log(1/ε)) on a fine grid
        let best = (0..=2000)
            .map(|i| 10f64.powf(-(i as f64) / 100.0))
            .map(|eps| (1.0 + (2.0 / eps).ln()) / (1.0 + (1.0 / eps).ln()))
            .fold(0.0f64, f64::max);
        assert!((best - (1.0 + 2f64.ln())).abs() < 1e-15);
    }

    #[test]
    fn exact_constant_certificate() {
        let grid = default_probe_grid(&pow1());
        let cert = certify_with_constant(&pow1(), 2.0, &grid).unwrap();
        assert_eq!((cert.b, cert.alpha, cert.c), (2.0, 1.0, 4.0));
        assert!(certify_with_constant(&pow1(), 1.9, &grid).is_err());
    }

    #[test]
    fn rejects_non_doubling_and_flat_weights() {
        let fast = Weight::custom("exp(1/eps)", -60.0, Arc::new(|ln_eps: f64| (-ln_eps).exp()));
        let grid: Vec<f64> = (0..=60).map(|i| 2f64.powi(-i)).collect();
        match certify_doubling(&fast, &grid) {
            Err(Error::NotDoubling { eps, .. }) => assert_eq!(eps, 2f64.powi(-60)),
            other => panic!("expected NotDoubling, got {other:?}"),
        }
        let sq = Weight::custom("exp(log^2)", -60.0, Arc::new(|ln_eps: f64| ln_eps * ln_eps));
        assert!(matches!(certify_doubling(&sq, &grid), Err(Error::NotDoubling { .. })));
        let flat = Weight::custom("const", -60.0, Arc::new(|_| 0.0f64));
        assert!(matches!(certify_doubling(&flat, &grid), Err(Error::NotUnbounded)));
        let decreasing = Weight::custom("dec", -60.0, Arc::new(|ln_eps: f64| ln_eps));
        assert!(matches!(certify_doubling(&decreasing, &grid), Err(Error::NotMonotone { .. })));
    }

    #[test]
    fn envelope_examples() {
        let w = pow1();
        let cert = certify_with_constant(&w, 2.0, &default_probe_grid(&w)).unwrap();
        assert!(check_envelope(&cert, &w, 0.3, 0.3).unwrap());
        assert!(check_envelope(&cert, &w, 0.0, 0.9).unwrap());
        assert!(check_envelope(&cert, &w, 0.5, 0.99).unwrap());
        assert!(check_envelope(&cert, &w, 0.9, 0.5).is_err());
    }

    #[test]
    fn f32_weights_work() {
        let w: Weight<f32> = "pow:beta=1".parse().unwrap();
        let cert = certify_doubling(&w, &default_probe_grid(&w)).unwrap();
        assert!((cert.alpha - 1.0).abs() < 1e-5);
    }
}
