//! Radii `t_k`, exponents `n_k` and ratios `a_k` underlying the two products.
//!
//! Starting from `t₁ = 1/2`, each `t_{k+1}` solves `ω(t_{k+1}) = 2^γ ω(t_k)`.
//! Then `n_k = ⌊1/(1 - t_k)⌋` and `a_k = ω(1 - 1/n_{k+2}) / ω(1 - 1/n_k)`.

use std::fmt::Write as _;

use num_bigint::BigUint;
use serde::Serialize;

use crate::bigint::{self, ln_big, quantized_floor_exp};
use crate::error::{Error, Result};
use crate::hexfloat;
use crate::logpos::LogPos;
use crate::scalar::Real;
use crate::weight::{DoublingCertificate, Weight};

/// Largest γ the quarter-step ladder will try.
pub const GAMMA_CAP: f64 = 1.0e4;

/// Default number of constructed terms.
pub const DEFAULT_TERMS: usize = 24;

/// Default relative tolerance of the bisection for `1 - t_k`.
pub const BISECTION_REL_TOL: f64 = 1e-14;

const MIN_TERMS: usize = 5;

/// Both inequalities that make `γ` admissible:
/// `2^{γ-α} / C > 1` and
/// `(2γ + α + log₂C) / (2γ - α - log₂C) < 2^{-1/α} (2^{γ/α} / C^{1/α} - 1)`.
pub fn gamma_admissible<T: Real>(alpha: T, c: T, gamma: T) -> bool {
    let two = T::lit(2.0);
    let log2c = c.log2();
    if !(two.powf(gamma - alpha) / c > T::one()) {
        return false;
    }
    let denom = two * gamma - alpha - log2c;
    if !(denom > T::zero()) {
        return false;
    }
    let lhs = (two * gamma + alpha + log2c) / denom;
    let tau = ((gamma * T::LN_2() - c.ln()) / alpha).exp() - T::one();
    lhs < two.powf(-alpha.recip()) * tau
}

/// Smallest `γ = α + log₂ C + m/4`, `m ≥ 1`, satisfying [`gamma_admissible`].
pub fn select_gamma<T: Real>(cert: &DoublingCertificate<T>) -> Result<T> {
    let base = cert.alpha + cert.c.log2();
    let quarter = T::lit(0.25);
    let mut m = 1u32;
    loop {
        let gamma = base + T::from_u32(m).expect("ladder index") * quarter;
        if gamma.as_f64() > GAMMA_CAP {
            return Err(Error::GammaSearch { cap: GAMMA_CAP });
        }
        if gamma_admissible(cert.alpha, cert.c, gamma) {
            return Ok(gamma);
        }
        m += 1;
    }
}

/// Terms `t_k`, `n_k`, `a_k` (1-based) and the constants of the construction.
#[derive(Clone, Debug)]
pub struct Construction<T: Real> {
    weight: Weight<T>,
    cert: DoublingCertificate<T>,
    gamma: T,
    lambda: T,
    mu: T,
    d: T,
    tau: T,
    ln_eps: Vec<T>,
    n: Vec<BigUint>,
    ln_n: Vec<T>,
    log_a: Vec<T>,
    requested_terms: usize,
}

fn closed_forms<T: Real>(cert: &DoublingCertificate<T>, gamma: T) -> (T, T, T, T) {
    let two = T::lit(2.0);
    let (alpha, c) = (cert.alpha, cert.c);
    let lambda = two.powf(two * gamma - alpha) / c;
    let mu = two.powf(two * gamma + alpha) * c;
    let d = two.powf(-alpha.recip());
    let tau = two.powf(gamma / alpha) / c.powf(alpha.recip()) - T::one();
    (lambda, mu, d, tau)
}

/// Bisection on `x = ln ε` in `[lo, hi]` for the crossing of the
/// non-increasing `x ↦ ln ω(1 - e^x)` with `target`.
fn bisect_ln_eps<T: Real>(w: &Weight<T>, target: T, mut lo: T, mut hi: T, rel_tol: T) -> T {
    for _ in 0..400 {
        let mid = (lo + hi) * T::lit(0.5);
        if mid <= lo || mid >= hi || hi - lo <= rel_tol {
            break;
        }
        if w.log_omega_unchecked(mid) >= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo + hi) * T::lit(0.5)
}

/// Builds `K` terms (fewer, with a warning, if the weight's trusted range is
/// exhausted first).
pub fn build_sequence<T: Real>(
    w: &Weight<T>,
    cert: &DoublingCertificate<T>,
    gamma: T,
    terms: usize,
) -> Result<Construction<T>> {
    build_sequence_with_tol(w, cert, gamma, terms, T::lit(BISECTION_REL_TOL))
}

pub fn build_sequence_with_tol<T: Real>(
    w: &Weight<T>,
    cert: &DoublingCertificate<T>,
    gamma: T,
    terms: usize,
    rel_tol: T,
) -> Result<Construction<T>> {
    if terms < MIN_TERMS {
        return Err(Error::TooFewTerms { have: terms, need: MIN_TERMS });
    }
    if !(gamma > T::zero()) || !gamma.is_finite() {
        return Err(Error::Argument(format!("γ must be positive, got {gamma}")));
    }
    let floor = w.ln_eps_floor();
    let ln_half = -T::LN_2();
    let base = w.log_eval_ln(ln_half)?;
    let step = gamma * T::LN_2();
    let mut ln_eps = vec![ln_half];
    for k in 2..=terms {
        // Targets are taken from the closed form rather than the previous
        // root so that bisection error does not accumulate along k.
        let target = base + T::from_usize(k - 1).expect("index") * step;
        let hi = *ln_eps.last().expect("nonempty");
        if w.log_omega_unchecked(floor) < target {
            if k > MIN_TERMS {
                log::warn!(
                    "weight {} is trusted only down to ln ε = {}; truncating construction at K = {} (requested {})",
                    w.name(),
                    floor,
                    k - 1,
                    terms
                );
                break;
            }
            return Err(Error::Bracket { k });
        }
        ln_eps.push(bisect_ln_eps(w, target, floor, hi, rel_tol));
    }
    let n: Vec<BigUint> = ln_eps.iter().map(|&x| quantized_floor_exp((-x).as_f64(), T::QUANT_BITS)).collect();
    let ln_n: Vec<T> = n.iter().map(|n| T::lit(ln_big(n))).collect();
    let log_a = (0..ln_n.len().saturating_sub(2))
        .map(|i| w.log_omega_unchecked(-ln_n[i + 2]) - w.log_omega_unchecked(-ln_n[i]))
        .collect();
    let (lambda, mu, d, tau) = closed_forms(cert, gamma);
    Ok(Construction {
        weight: w.clone(),
        cert: *cert,
        gamma,
        lambda,
        mu,
        d,
        tau,
        ln_eps,
        n,
        ln_n,
        log_a,
        requested_terms: terms,
    })
}

impl<T: Real> Construction<T> {
    pub fn weight(&self) -> &Weight<T> {
        &self.weight
    }

    pub fn certificate(&self) -> &DoublingCertificate<T> {
        &self.cert
    }

    pub fn gamma(&self) -> T {
        self.gamma
    }

    pub fn lambda(&self) -> T {
        self.lambda
    }

    pub fn mu(&self) -> T {
        self.mu
    }

    pub fn d(&self) -> T {
        self.d
    }

    pub fn tau(&self) -> T {
        self.tau
    }

    /// Number of constructed terms `K`.
    pub fn len(&self) -> usize {
        self.n.len()
    }

    pub fn is_empty(&self) -> bool {
        self.n.is_empty()
    }

    /// Terms asked for; larger than [`len`](Self::len) after truncation.
    pub fn requested_terms(&self) -> usize {
        self.requested_terms
    }

    pub fn is_truncated(&self) -> bool {
        self.len() < self.requested_terms
    }

    fn slot(&self, k: usize, available: usize) -> Result<usize> {
        if k == 0 || k > available {
            return Err(Error::IndexOutOfRange { index: k, available });
        }
        Ok(k - 1)
    }

    /// Complement `1 - t_k`.
    pub fn eps(&self, k: usize) -> Result<LogPos<T>> {
        Ok(LogPos::from_ln(self.ln_eps[self.slot(k, self.len())?]))
    }

    pub fn n(&self, k: usize) -> Result<&BigUint> {
        Ok(&self.n[self.slot(k, self.len())?])
    }

    pub fn ln_n(&self, k: usize) -> Result<T> {
        Ok(self.ln_n[self.slot(k, self.len())?])
    }

    /// `log a_k`, defined for `k ≤ K - 2`.
    pub fn log_a(&self, k: usize) -> Result<T> {
        Ok(self.log_a[self.slot(k, self.log_a.len())?])
    }

    /// Number of defined ratios `a_k` (that is `K - 2`).
    pub fn ratio_count(&self) -> usize {
        self.log_a.len()
    }

    pub fn ns(&self) -> &[BigUint] {
        &self.n
    }

    pub fn log_as(&self) -> &[T] {
        &self.log_a
    }

    /// `ln(1/s_k) = log a_k / n_k`, the log-radius of the k-th zero circle.
    pub fn zero_ell(&self, k: usize) -> Result<LogPos<T>> {
        let log_a = self.log_a(k)?;
        Ok(LogPos::from_ln(log_a.ln() - self.ln_n(k)?))
    }

    /// Largest admissible covering parameter,
    /// `(1 - d) (log λ / log μ) / (1 + log μ / log λ)`.
    pub fn delta_bound(&self) -> T {
        delta_bound_from(self.lambda, self.mu, self.d)
    }
}

/// [`Construction::delta_bound`] from the raw constants.
pub fn delta_bound_from<T: Real>(lambda: T, mu: T, d: T) -> T {
    let ratio = lambda.ln() / mu.ln();
    (T::one() - d) * ratio / (T::one() + ratio.recip())
}

/// Outcome of one inequality check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Check {
    Pass,
    /// Fails by less than 1% of the bound; reported but not fatal.
    Marginal,
    Fail,
    NotApplicable,
}

impl Check {
    pub fn ok(self) -> bool {
        !matches!(self, Check::Fail)
    }

    fn from_bool(ok: bool) -> Self {
        if ok {
            Check::Pass
        } else {
            Check::Fail
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Check::Pass => "pass",
            Check::Marginal => "marginal",
            Check::Fail => "fail",
            Check::NotApplicable => "n/a",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationRow {
    pub k: usize,
    pub log_a: Option<f64>,
    /// `λ ≤ a_k`
    pub lower: Check,
    /// `a_k ≤ μ`
    pub upper: Check,
    /// `log a_{k+1} / log a_k < d n_{k+1}/n_k`
    pub chain: Check,
    pub chain_lhs: Option<f64>,
    pub chain_rhs: Option<f64>,
    /// `n_{k+1}/n_k`
    pub gap_ratio: Option<f64>,
    /// `n_{k+1}/n_k > τ - 1/n_k`
    pub gap: Check,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub gamma_ok: bool,
    pub lambda_gt_one: bool,
    pub tau_gt_one: bool,
    pub rows: Vec<ValidationRow>,
    pub passed: bool,
    pub marginal: usize,
}

impl ValidationReport {
    /// First `k` whose chain inequality fails.
    pub fn first_chain_failure(&self) -> Option<usize> {
        self.rows.iter().find(|r| r.chain == Check::Fail).map(|r| r.k)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,log_a,lower,upper,chain,chain_lhs,chain_rhs,gap_ratio,gap\n");
        let opt = |v: Option<f64>| v.map(|x| format!("{x:.17e}")).unwrap_or_else(|| "-".into());
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                r.k,
                opt(r.log_a),
                r.lower.as_str(),
                r.upper.as_str(),
                r.chain.as_str(),
                opt(r.chain_lhs),
                opt(r.chain_rhs),
                opt(r.gap_ratio),
                r.gap.as_str()
            );
        }
        out
    }
}

fn bound_check(ok: bool, rel_violation: f64) -> Check {
    if ok {
        Check::Pass
    } else if rel_violation <= 0.01 {
        Check::Marginal
    } else {
        Check::Fail
    }
}

/// Checks the two-sided bounds on `a_k`, the log-ratio chain and the gap
/// ratio `n_{k+1}/n_k` for every constructed `k`.
pub fn validate_sequence<T: Real>(c: &Construction<T>) -> ValidationReport {
    let ln_lambda = c.lambda.ln().as_f64();
    let ln_mu = c.mu.ln().as_f64();
    let d = c.d.as_f64();
    let tau = c.tau.as_f64();
    let mut rows = Vec::with_capacity(c.len());
    for k in 1..=c.len() {
        let log_a = c.log_a(k).ok().map(|v| v.as_f64());
        let (lower, upper) = match log_a {
            Some(la) => (
                bound_check(la >= ln_lambda, (ln_lambda - la).exp_m1()),
                bound_check(la <= ln_mu, (la - ln_mu).exp_m1()),
            ),
            None => (Check::NotApplicable, Check::NotApplicable),
        };
        let ln_gap = (k < c.len()).then(|| c.ln_n[k].as_f64() - c.ln_n[k - 1].as_f64());
        let (chain, chain_lhs, chain_rhs) = match (log_a, c.log_a(k + 1).ok(), ln_gap) {
            (Some(la), Some(next), Some(g)) => {
                let lhs = next.as_f64() / la;
                let rhs = d * g.exp();
                (Check::from_bool(lhs < rhs), Some(lhs), Some(rhs))
            }
            _ => (Check::NotApplicable, None, None),
        };
        let gap = match ln_gap {
            Some(g) => {
                let inv_n = (-c.ln_n[k - 1].as_f64()).exp();
                Check::from_bool(g.exp() > tau - inv_n)
            }
            None => Check::NotApplicable,
        };
        rows.push(ValidationRow {
            k,
            log_a,
            lower,
            upper,
            chain,
            chain_lhs,
            chain_rhs,
            gap_ratio: ln_gap.map(f64::exp),
            gap,
        });
    }
    let gamma_ok = gamma_admissible(c.cert.alpha, c.cert.c, c.gamma);
    let lambda_gt_one = c.lambda > T::one();
    let tau_gt_one = c.tau > T::one();
    let rows_ok = rows.iter().all(|r| r.lower.ok() && r.upper.ok() && r.chain.ok() && r.gap.ok());
    let marginal =
        rows.iter().filter(|r| r.lower == Check::Marginal || r.upper == Check::Marginal).count();
    ValidationReport {
        gamma_ok,
        lambda_gt_one,
        tau_gt_one,
        passed: rows_ok && lambda_gt_one && tau_gt_one,
        rows,
        marginal,
    }
}

const FORMAT_HEADER: &str = "maxprod-construction v1";

impl<T: Real> Construction<T> {
    /// Versioned text form. One record per `k`: `k`, `ε_k` (30 significant
    /// digits), `n_k` (see [`bigint::format_big`]), `log a_k` (hex float, `-` when undefined) and `ln ε_k`
    /// (hex float, authoritative on reload).
    pub fn to_text(&self) -> String {
        let hx = |v: T| hexfloat::format(v.as_f64());
        let mut out = String::new();
        let _ = writeln!(out, "{FORMAT_HEADER}");
        let _ = writeln!(out, "weight {}", self.weight.spec());
        let _ = writeln!(out, "ln_eps_floor {}", hx(self.weight.ln_eps_floor()));
        let _ = writeln!(out, "b {}", hx(self.cert.b));
        let _ = writeln!(out, "alpha {}", hx(self.cert.alpha));
        let _ = writeln!(out, "c {}", hx(self.cert.c));
        let _ = writeln!(out, "probe_count {}", self.cert.probe_count);
        let _ = writeln!(out, "gamma {}", hx(self.gamma));
        let _ = writeln!(out, "lambda {}", hx(self.lambda));
        let _ = writeln!(out, "mu {}", hx(self.mu));
        let _ = writeln!(out, "d {}", hx(self.d));
        let _ = writeln!(out, "tau {}", hx(self.tau));
        let _ = writeln!(out, "requested_terms {}", self.requested_terms);
        let _ = writeln!(out, "terms {}", self.len());
        let _ = writeln!(out, "# k eps n log_a ln_eps");
        for k in 1..=self.len() {
            let log_a = self.log_a(k).map(hx).unwrap_or_else(|_| "-".into());
            let _ = writeln!(
                out,
                "{} {} {} {} {}",
                k,
                LogPos::from_ln(self.ln_eps[k - 1]).to_sci(30),
                bigint::format_big(&self.n[k - 1]),
                log_a,
                hx(self.ln_eps[k - 1])
            );
        }
        out
    }

    /// Inverse of [`to_text`](Self::to_text). Only catalog weights round-trip.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
        let perr = |line: usize, msg: &str| Error::Parse { line, msg: msg.to_string() };
        match lines.next() {
            Some((_, FORMAT_HEADER)) => {}
            _ => return Err(perr(1, "missing format header")),
        }
        let mut field = |name: &str| -> Result<(usize, String)> {
            let (line, l) = lines.next().ok_or_else(|| perr(0, "truncated header"))?;
            let value = l
                .strip_prefix(name)
                .and_then(|v| v.strip_prefix(' '))
                .ok_or_else(|| perr(line, &format!("expected `{name}`")))?;
            Ok((line, value.to_string()))
        };
        let hex = |(line, v): (usize, String)| -> Result<T> {
            hexfloat::parse(&v)
                .and_then(T::from_f64)
                .ok_or_else(|| Error::Parse { line, msg: format!("bad hex float `{v}`") })
        };
        let count = |(line, v): (usize, String)| -> Result<usize> {
            v.parse().map_err(|_| Error::Parse { line, msg: format!("bad count `{v}`") })
        };
        let (_, spec) = field("weight")?;
        let floor = hex(field("ln_eps_floor")?)?;
        let weight = spec.parse::<Weight<T>>()?.with_ln_eps_floor(floor);
        let b = hex(field("b")?)?;
        let alpha = hex(field("alpha")?)?;
        let c = hex(field("c")?)?;
        let probe_count = count(field("probe_count")?)?;
        let gamma = hex(field("gamma")?)?;
        let lambda = hex(field("lambda")?)?;
        let mu = hex(field("mu")?)?;
        let d = hex(field("d")?)?;
        let tau = hex(field("tau")?)?;
        let requested_terms = count(field("requested_terms")?)?;
        let terms = count(field("terms")?)?;
        let mut ln_eps = Vec::with_capacity(terms);
        let mut n = Vec::with_capacity(terms);
        let mut log_a = Vec::new();
        for (line, l) in lines {
            if l.is_empty() || l.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = l.split_whitespace().collect();
            if cols.len() != 5 {
                return Err(perr(line, "expected 5 columns"));
            }
            if cols[0].parse::<usize>().ok() != Some(ln_eps.len() + 1) {
                return Err(perr(line, "records out of order"));
            }
            n.push(bigint::parse_big(cols[2]).ok_or_else(|| perr(line, "bad integer n_k"))?);
            if cols[3] != "-" {
                log_a.push(hex((line, cols[3].to_string()))?);
            }
            ln_eps.push(hex((line, cols[4].to_string()))?);
        }
        if ln_eps.len() != terms || log_a.len() != terms.saturating_sub(2) {
            return Err(perr(0, "record count does not match header"));
        }
        let ln_n = n.iter().map(|n| T::lit(ln_big(n))).collect();
        Ok(Construction {
            weight,
            cert: DoublingCertificate { b, alpha, c, probe_count },
            gamma,
            lambda,
            mu,
            d,
            tau,
            ln_eps,
            n,
            ln_n,
            log_a,
            requested_terms,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weight::{certify_doubling, certify_with_constant, default_probe_grid};

    fn pow1_exact() -> (Weight<f64>, DoublingCertificate<f64>) {
        let w = Weight::power(1.0).unwrap();
        let cert = certify_with_constant(&w, 2.0, &default_probe_grid(&w)).unwrap();
        (w, cert)
    }

    #[test]
    fn gamma_ladder_for_exact_pow1() {
        let (_, cert) = pow1_exact();
        // hand evaluation of both inequalities on 3 + m/4:
        // m = 5 (4.25): 11.5/5.5 = 2.091 > 0.5 (2^4.25/4 - 1) = 1.878  -> fails
        // m = 6 (4.5):  12/6 = 2 < 0.5 (2^4.5/4 - 1) = 2.328          -> passes
        assert_eq!(select_gamma(&cert).unwrap(), 4.5);
        assert!(gamma_admissible(1.0, 4.0, 5.0));
        assert!(gamma_admissible(1.0, 4.0, 4.75));
        assert!(!gamma_admissible(1.0, 4.0, 4.25));
        assert!(!gamma_admissible(1.0, 4.0, 1.0));
    }

    #[test]
    fn pow1_gamma5_closed_form() {
        let (w, cert) = pow1_exact();
        let c = build_sequence(&w, &cert, 5.0, 12).unwrap();
        for k in 1..=12 {
            assert_eq!(c.n(k).unwrap(), &(BigUint::from(2u8) << (5 * (k - 1))), "n_{k}");
        }
        for k in 1..=10 {
            assert!((c.log_a(k).unwrap() - 1024f64.ln()).abs() < 1e-12);
        }
        assert_eq!((c.lambda(), c.mu(), c.d(), c.tau()), (128.0, 8192.0, 0.5, 7.0));
        let v = validate_sequence(&c);
        assert!(v.passed);
        assert!((v.rows[0].chain_rhs.unwrap() - 16.0).abs() < 1e-9);
        assert!((c.delta_bound() - 49.0 / 520.0).abs() < 1e-15);
    }

    #[test]
    fn too_small_gamma_breaks_the_chain() {
        let (w, cert) = pow1_exact();
        let c = build_sequence(&w, &cert, 1.0, 10).unwrap();
        let v = validate_sequence(&c);
        assert!(!v.passed);
        assert!(!v.gamma_ok);
        assert_eq!(v.first_chain_failure(), Some(1));
    }

    #[test]
    fn rejects_short_and_bad_requests() {
        let (w, cert) = pow1_exact();
        assert!(matches!(build_sequence(&w, &cert, 5.0, 4), Err(Error::TooFewTerms { .. })));
        assert!(build_sequence(&w, &cert, -1.0, 8).is_err());
        let shallow = w.clone().with_ln_eps_floor(-10.0);
        assert!(matches!(build_sequence(&shallow, &cert, 5.0, 8), Err(Error::Bracket { k: 4 })));
    }

    #[test]
    fn truncates_when_floor_is_reached() {
        let w = Weight::<f64>::log();
        let cert = certify_doubling(&w, &default_probe_grid(&w)).unwrap();
        let gamma = select_gamma(&cert).unwrap();
        let c = build_sequence(&w, &cert, gamma, 20).unwrap();
        assert!(c.is_truncated());
        assert!(c.len() >= 5 && c.len() < 20);
        assert!(validate_sequence(&c).passed);
    }

    #[test]
    fn delta_bound_degenerate() {
        assert!((delta_bound_from(5.0f64, 5.0, 0.25) - 0.375).abs() < 1e-15);
    }

    #[test]
    fn text_round_trip_is_bit_exact() {
        let w: Weight<f64> = "prod:pow:0.5,log".parse().unwrap();
        let cert = certify_doubling(&w, &default_probe_grid(&w)).unwrap();
        let c = build_sequence(&w, &cert, select_gamma(&cert).unwrap(), 14).unwrap();
        let text = c.to_text();
        let back = Construction::<f64>::from_text(&text).unwrap();
        assert_eq!(back.to_text(), text);
        assert_eq!(back.ns(), c.ns());
        assert_eq!(back.gamma().to_bits(), c.gamma().to_bits());
        assert_eq!(back.mu().to_bits(), c.mu().to_bits());
        assert!(Construction::<f64>::from_text("garbage").is_err());
        let broken = text.replacen("gamma ", "gamma x", 1);
        assert!(Construction::<f64>::from_text(&broken).is_err());
    }
}
