//! Growth and value-distribution functionals of the products, and grid
//! verification of the comparability estimates.
//!
//! Comparability `A ≍ B` is rendered as a ratio report: the inf and sup of
//! `A/B` over a grid of radii, broken down by decade of `1 - r`, with the
//! requirement that the per-decade extremes stay positive, finite and drift
//! by less than a factor 2 from one decade to the next.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigUint;
use num_complex::Complex;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::bigint::ln_big;
use crate::construction::Construction;
use crate::error::{Error, Result};
use crate::intervals::{intervals, Interval};
use crate::logpos::{complement_from_ell, ell_from_complement, LogPos};
use crate::product::{DiscPoint, Product, RationalAngle};
use crate::quadrature::{
    adaptive_ladder, adaptive_means, prev_prime, sample_log_modulus, sample_log_value, CircleGrid,
    MeanEstimate, MeanMode, QuadratureOptions,
};
use crate::scalar::Real;
use crate::weight::Weight;

/// Truncation tolerance used by every functional.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Slack `1e-4 + log 2` allowed at each step of `N ≤ T ≤ log M_∞`.
pub const CHAIN_SLACK: f64 = 1e-4 + std::f64::consts::LN_2;

/// Largest accepted `max/min` of `n(s)(1-s)` over the zero circles.
pub const COUNTING_SPREAD_LIMIT: f64 = 10.0;

/// Initial grid order of the maximum-modulus search.
pub const MAX_MODULUS_BASE: u64 = 1024;

const MAX_MODULUS_CELLS: usize = 8;
const MAX_MODULUS_ROUNDS: usize = 8;
const MAX_MODULUS_IMPROVEMENT: f64 = 1e-9;
const CIRCLE_NUDGE: f64 = 1e-9;

/// A circle `|z| = r`, held by its log-radius `ℓ = -ln r`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Radius<T> {
    ell: LogPos<T>,
}

impl<T: Real> Radius<T> {
    pub fn from_ell(ell: LogPos<T>) -> Result<Self> {
        if ell.is_zero() || ell.is_infinite() || ell.ln().is_nan() {
            return Err(Error::Domain { what: "log-radius ℓ", value: ell.value().as_f64() });
        }
        Ok(Radius { ell })
    }

    /// From the complement `1 - r ∈ (0, 1)`.
    pub fn from_eps(eps: LogPos<T>) -> Result<Self> {
        if !(eps.ln() < T::zero()) || eps.is_zero() {
            return Err(Error::Domain { what: "complement radius ε", value: eps.value().as_f64() });
        }
        Self::from_ell(ell_from_complement(eps))
    }

    pub fn from_r(r: T) -> Result<Self> {
        if !(r > T::zero() && r < T::one()) {
            return Err(Error::Domain { what: "radius r", value: r.as_f64() });
        }
        Self::from_ell(LogPos::new(-r.ln()))
    }

    pub fn ell(&self) -> LogPos<T> {
        self.ell
    }

    pub fn eps(&self) -> LogPos<T> {
        complement_from_ell(self.ell)
    }

    /// `⌊log₁₀(1/(1-r))⌋`
    pub fn decade(&self) -> i64 {
        (-self.eps().ln().as_f64() / std::f64::consts::LN_10).floor() as i64
    }

    fn point(&self, angle: RationalAngle) -> DiscPoint<T> {
        DiscPoint::from_ell(self.ell, angle).expect("radius is inside the disc")
    }
}

/// Moves a radius lying exactly on a zero circle off it by a relative 1e-9.
fn off_circle<T: Real>(p: &Product<T>, ell: LogPos<T>) -> LogPos<T> {
    if p.factors().iter().any(|f| f.log_a > T::zero() && f.zero_ell() == ell) {
        ell * LogPos::from_ln(T::lit(CIRCLE_NUDGE).ln_1p())
    } else {
        ell
    }
}

fn tol<T: Real>() -> T {
    T::lit(DEFAULT_TOL)
}

/// Adaptive trapezoidal means of several functionals on `|z| = r`.
pub fn circle_means<T: Real>(
    p: &Product<T>,
    r: Radius<T>,
    modes: &[MeanMode<T>],
    opts: &QuadratureOptions,
) -> Result<MeanEstimate<T>> {
    circle_means_tol(p, r, modes, opts, tol())
}

fn circle_means_tol<T: Real>(
    p: &Product<T>,
    r: Radius<T>,
    modes: &[MeanMode<T>],
    opts: &QuadratureOptions,
    tol: T,
) -> Result<MeanEstimate<T>> {
    let ell = off_circle(p, r.ell);
    let trunc = p.truncation_index(ell, tol)?;
    adaptive_means(p, ell, trunc.used, modes, opts)
}

/// Circle mean of `log|f|`, `log⁺|f|`, or (as a logarithm) of `|f|^p`.
pub fn circle_mean<T: Real>(p: &Product<T>, r: Radius<T>, mode: MeanMode<T>) -> Result<T> {
    Ok(circle_means(p, r, &[mode], &QuadratureOptions::default())?.values[0])
}

/// `log M_p(r, f)` for `0 < p < ∞`.
pub fn log_mean_power<T: Real>(p: &Product<T>, r: Radius<T>, exponent: T) -> Result<T> {
    if !(exponent > T::zero()) || !exponent.is_finite() {
        return Err(Error::Argument(format!("mean exponent must be positive and finite, got {exponent}")));
    }
    Ok(circle_mean(p, r, MeanMode::LogPower(exponent))? / exponent)
}

/// `T(r, f)`, the circle mean of `log⁺|f|` (no pole term: `f` is analytic).
pub fn characteristic<T: Real>(p: &Product<T>, r: Radius<T>) -> Result<T> {
    circle_mean(p, r, MeanMode::LogPlus)
}

/// `log M_∞(r, f)`: maximum of `log|f|` over a grid of `1024` angles, then
/// repeated 8-fold refinement around the best 8 cells until the maximum
/// improves by less than `1e-9` (relative in `|f|`).
pub fn log_max_modulus<T: Real>(p: &Product<T>, r: Radius<T>) -> Result<T> {
    log_max_modulus_tol(p, r, tol())
}

fn log_max_modulus_tol<T: Real>(p: &Product<T>, r: Radius<T>, tol: T) -> Result<T> {
    let trunc = p.truncation_index(r.ell, tol)?;
    let grid = CircleGrid::new(MAX_MODULUS_BASE);
    let samples = sample_log_modulus(p, r.ell, trunc.used, &grid);
    let mut scored: Vec<(u64, T)> = samples.iter().enumerate().map(|(i, &v)| (i as u64, v)).collect();
    let mut best = scored.iter().map(|s| s.1).fold(T::neg_infinity(), T::max);
    let mut den = MAX_MODULUS_BASE;
    for _ in 0..MAX_MODULUS_ROUNDS {
        scored.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(std::cmp::Ordering::Equal).then(a.0.cmp(&b.0)));
        let fine = den * 8;
        let mut nums: Vec<u64> = scored
            .iter()
            .take(MAX_MODULUS_CELLS)
            .flat_map(|&(c, _)| (0..=16u64).map(move |t| (c * 8 + fine + t - 8) % fine))
            .collect();
        nums.sort_unstable();
        nums.dedup();
        scored = nums
            .into_iter()
            .map(|num| {
                let z = r.point(RationalAngle::new(num, fine).expect("num < den"));
                (num, p.log_modulus_truncated(&z, trunc.used))
            })
            .collect();
        let level_best = scored.iter().map(|s| s.1).fold(T::neg_infinity(), T::max);
        let improvement = (level_best - best).as_f64();
        best = best.max(level_best);
        den = fine;
        if !(improvement > MAX_MODULUS_IMPROVEMENT) {
            break;
        }
    }
    Ok(best)
}

/// `n(r, f, 0)`: zeros in `|z| ≤ r`, with multiplicity.
pub fn counting_function<T: Real>(p: &Product<T>, r: Radius<T>) -> BigUint {
    p.zeros_up_to_ell(r.ell).iter().fold(BigUint::zero(), |acc, z| acc + &z.n)
}

/// `N(r, f, 0) = Σ_{s_m ≤ r} n_m log(r/s_m)`, from the zero circles.
pub fn integrated_counting_zero<T: Real>(p: &Product<T>, r: Radius<T>) -> T {
    p.factors()
        .iter()
        .filter(|f| f.log_a > T::zero() && f.zero_ell() >= r.ell)
        .map(|f| f.log_a - f.n_ell(r.ell))
        .fold(T::zero(), |a, v| a + v)
}

/// `N(r, f, a)`. Exact for `a = 0`; otherwise by Jensen's formula,
/// `mean log|f - a| - log|f(0) - a|`. At `a = 1 = f(0)` the constant term
/// is replaced by the leading Taylor coefficient of `f - 1`,
/// `a_k - 1/a_k` for the smallest exponent `n_k`, so the zero of order
/// `n_k` at the origin contributes `n_k log r`.
pub fn integrated_counting<T: Real>(p: &Product<T>, r: Radius<T>, a: Complex<T>) -> Result<T> {
    let trunc = p.truncation_index(r.ell, tol())?;
    if a.is_zero() {
        return Ok(integrated_counting_zero(p, r));
    }
    let ell = off_circle(p, r.ell);
    let one = Complex::new(T::one(), T::zero());
    let at_one = a == one;
    let base = if at_one {
        let lead = p.factors().iter().find(|f| f.log_a > T::zero()).ok_or_else(|| {
            Error::Degenerate("f ≡ 1, so every point is a 1-point".into())
        })?;
        // ln(a - 1/a) = ln a + ln(1 - a^{-2})
        lead.log_a + (-(T::lit(-2.0) * lead.log_a).exp()).ln_1p()
    } else {
        (one - a).norm().ln()
    };
    let forty = T::lit(40.0);
    let log_abs_minus = move |s: Complex<T>| -> T {
        if at_one {
            if s.re > forty {
                return s.re;
            }
            let two = T::lit(2.0);
            let half_y = s.im * T::lit(0.5);
            let re = s.re.exp_m1() * s.im.cos() - two * half_y.sin() * half_y.sin();
            let im = s.re.exp() * s.im.sin();
            re.hypot(im).ln()
        } else {
            if s.re > forty + a.norm().ln() {
                return s.re;
            }
            (s.exp() - a).norm().ln()
        }
    };
    let estimate = adaptive_ladder(p, trunc.used, &[false], &QuadratureOptions::default(), |grid| {
        let values = sample_log_value(p, ell, trunc.used, grid);
        let q = T::from_usize(values.len()).expect("grid size");
        vec![values.into_iter().map(log_abs_minus).fold(T::zero(), |acc, v| acc + v) / q]
    })?;
    Ok(estimate.values[0] - base)
}

/// Grid for [`verify_theorem`]: decade radii `ℓ = 10^{-D - i/per_decade}`
/// for `D ∈ [first_decade, last_decade]`, every interval endpoint whose
/// decade is in that range, and (for the joint ratio) zero points of both
/// products on the circles in range.
#[derive(Clone, Debug, Serialize)]
pub struct GridSpec {
    pub first_decade: u32,
    pub last_decade: u32,
    pub per_decade: u32,
    /// Prime number of equispaced angles.
    pub angles: u64,
    /// Decades up to this one are burn-in: drift is checked only between
    /// later decades.
    pub drift_after: u32,
    pub include_endpoints: bool,
    pub include_zero_probes: bool,
    /// Truncation tolerance of every product evaluation.
    pub tol: f64,
}

impl GridSpec {
    /// Grid over decades `first..=last`, with the largest prime `≤ angles`.
    pub fn new(first_decade: u32, last_decade: u32, angles: u64) -> Result<Self> {
        if first_decade == 0 || last_decade < first_decade {
            return Err(Error::Argument(format!("bad decade range {first_decade}..={last_decade}")));
        }
        let angles = prev_prime(angles)
            .filter(|&q| q >= 3)
            .ok_or_else(|| Error::Argument(format!("need at least 3 angles, got {angles}")))?;
        Ok(GridSpec {
            first_decade,
            last_decade,
            per_decade: 8,
            angles,
            drift_after: 3,
            include_endpoints: true,
            include_zero_probes: true,
            tol: DEFAULT_TOL,
        })
    }

    /// `ℓ` bounds `(deepest, shallowest)` of the grid.
    fn ell_bounds<T: Real>(&self) -> (LogPos<T>, LogPos<T>) {
        let ln10 = T::LN_10();
        let deep = LogPos::from_ln(-T::from_u32(self.last_decade + 1).expect("decade") * ln10);
        let shallow = LogPos::from_ln(-T::from_u32(self.first_decade).expect("decade") * ln10);
        (deep, shallow)
    }

    fn in_range<T: Real>(&self, r: &Radius<T>) -> bool {
        let d = r.decade();
        d >= self.first_decade as i64 && d <= self.last_decade as i64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RadiusKind {
    Decade,
    /// Endpoint of `I_{2m+j}`; `inner` is `min I`.
    Endpoint { j: u8, m: usize, inner: bool },
}

#[derive(Clone, Copy, Debug)]
pub struct GridRadius<T> {
    pub radius: Radius<T>,
    pub kind: RadiusKind,
}

/// Radii of the verification grid, innermost first.
pub fn grid_radii<T: Real>(c: &Construction<T>, delta: T, spec: &GridSpec) -> Result<Vec<GridRadius<T>>> {
    let mut out = Vec::new();
    let ln10 = T::LN_10();
    for d in spec.first_decade..=spec.last_decade {
        for i in 0..spec.per_decade {
            let exponent = T::from_u32(d).expect("decade")
                + T::from_u32(i).expect("index") / T::from_u32(spec.per_decade).expect("count");
            let radius = Radius::from_ell(LogPos::from_ln(-exponent * ln10))?;
            out.push(GridRadius { radius, kind: RadiusKind::Decade });
        }
    }
    if spec.include_endpoints {
        for j in 0..2u8 {
            for iv in intervals(c, j, delta)? {
                for (ell, inner) in [(iv.ell_at_min, true), (iv.ell_at_max, false)] {
                    let radius = Radius::from_ell(ell)?;
                    if spec.in_range(&radius) {
                        out.push(GridRadius { radius, kind: RadiusKind::Endpoint { j, m: iv.m, inner } });
                    }
                }
            }
        }
    }
    out.sort_by(|a, b| b.radius.ell.partial_cmp(&a.radius.ell).expect("finite radii"));
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct DecadeStats {
    pub decade: i64,
    pub count: usize,
    pub inf: f64,
    pub sup: f64,
}

/// Extremes of a comparability ratio over a grid, overall and per decade.
#[derive(Clone, Debug, Serialize)]
pub struct RatioReport {
    pub name: String,
    pub inf: f64,
    pub sup: f64,
    pub per_decade: BTreeMap<i64, DecadeStats>,
    /// Only transitions between decades above this one are drift-checked.
    pub drift_after: i64,
    /// Largest decade-to-decade factor by which the inf or the sup moved.
    pub max_drift: f64,
    pub passed: bool,
    /// `"pass"` or `"fail"`.
    pub verdict: &'static str,
    pub failures: Vec<String>,
}

impl RatioReport {
    /// Builds a report from `(decade, ln ratio)` samples.
    pub fn from_log_samples(name: &str, samples: impl IntoIterator<Item = (i64, f64)>, drift_after: i64) -> Self {
        let mut buckets: BTreeMap<i64, (usize, f64, f64)> = BTreeMap::new();
        for (d, v) in samples {
            let e = buckets.entry(d).or_insert((0, f64::INFINITY, f64::NEG_INFINITY));
            e.0 += 1;
            e.1 = e.1.min(v);
            e.2 = e.2.max(v);
        }
        let mut failures = Vec::new();
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for (d, &(_, l, h)) in &buckets {
            lo = lo.min(l);
            hi = hi.max(h);
            if l.is_nan() || h.is_nan() {
                failures.push(format!("decade {d}: undefined ratio"));
            } else if l == f64::NEG_INFINITY {
                failures.push(format!("decade {d}: ratio reaches 0"));
            } else if h == f64::INFINITY {
                failures.push(format!("decade {d}: ratio is unbounded"));
            }
        }
        if buckets.is_empty() {
            failures.push("empty grid".into());
        }
        let mut max_drift = 0.0f64;
        let keys: Vec<i64> = buckets.keys().copied().collect();
        for pair in keys.windows(2) {
            let (d0, d1) = (pair[0], pair[1]);
            if d0 <= drift_after || d1 != d0 + 1 {
                continue;
            }
            let (a, b) = (buckets[&d0], buckets[&d1]);
            for (which, x, y) in [("inf", a.1, b.1), ("sup", a.2, b.2)] {
                let drift = (y - x).abs();
                let drift = if drift.is_nan() { f64::INFINITY } else { drift };
                max_drift = max_drift.max(drift);
                if !(drift < std::f64::consts::LN_2) {
                    failures.push(format!("{which} drifts by a factor {:.4} from decade {d0} to {d1}", drift.exp()));
                }
            }
        }
        RatioReport {
            name: name.to_string(),
            inf: lo.exp(),
            sup: hi.exp(),
            per_decade: buckets
                .into_iter()
                .map(|(decade, (count, l, h))| (decade, DecadeStats { decade, count, inf: l.exp(), sup: h.exp() }))
                .collect(),
            drift_after,
            max_drift: max_drift.exp(),
            passed: failures.is_empty(),
            verdict: verdict(failures.is_empty()),
            failures,
        }
    }
}

/// One evaluated grid sample of the joint ratio `(|f₀| + |f₁|)/ω`.
#[derive(Clone, Debug)]
pub struct JointSample<T> {
    pub eps: LogPos<T>,
    pub angle: RationalAngle,
    /// `ln((|f₀| + |f₁|)/ω)`
    pub log_ratio: T,
}

/// Per-radius, per-product values used by [`verify_theorem`].
#[derive(Clone, Debug, Serialize)]
pub struct RadiusValues {
    pub eps_ln: f64,
    pub decade: i64,
    pub kind: RadiusKind,
    pub log_omega: f64,
    /// Indexed by parity.
    pub log_mean: [f64; 2],
    pub characteristic: [f64; 2],
    /// `log M_p` for `p = 1/2, 1, 2`.
    pub log_mp: [[f64; 3]; 2],
    pub log_max_modulus: [f64; 2],
    pub counting_n: [f64; 2],
    /// Minimum of `log|f_j| - log ω` over the angle grid.
    pub min_log_modulus_excess: [f64; 2],
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainReport {
    pub checked: usize,
    pub violations: usize,
    /// Smallest `T + slack - N` seen.
    pub min_margin_lower: f64,
    /// Smallest `log M_∞ + slack - T` seen.
    pub min_margin_upper: f64,
    pub passed: bool,
}

#[derive(Clone, Debug)]
pub struct TheoremReport<T> {
    pub grid: GridSpec,
    pub radii: Vec<RadiusValues>,
    pub joint: RatioReport,
    pub joint_samples: Vec<JointSample<T>>,
    /// The joint ratio at zero points of either product (not part of
    /// `joint`, whose grid is radii × equispaced angles).
    pub zero_samples: Vec<JointSample<T>>,
    /// Smallest joint ratio at zero points of either product.
    pub joint_at_zeros: Option<f64>,
    /// `M_p/ω` for `(j, p)`, `p ∈ {1/2, 1, 2, ∞}`.
    pub means: Vec<(u8, &'static str, RatioReport)>,
    pub characteristic: Vec<RatioReport>,
    pub counting: Vec<RatioReport>,
    pub chain: ChainReport,
    /// `inf (log|f_j| - log ω)` over grid radii in `E_j`.
    pub min_modulus_on_e: [Option<f64>; 2],
    /// `sup (log M_∞(r, f_j) - log ω(r))` over the grid.
    pub max_modulus_excess: [f64; 2],
}

impl<T> TheoremReport<T> {
    pub fn passed(&self) -> bool {
        self.joint.passed
            && self.means.iter().all(|m| m.2.passed)
            && self.characteristic.iter().all(|r| r.passed)
            && self.counting.iter().all(|r| r.passed)
            && self.chain.passed
    }
}

pub fn verdict(passed: bool) -> &'static str {
    if passed {
        "pass"
    } else {
        "fail"
    }
}

pub const MEAN_LABELS: [&str; 4] = ["1/2", "1", "2", "inf"];

impl<T: Real> TheoremReport<T> {
    /// Joint ratio samples: `eps, theta_num, theta_den, value`, with
    /// `θ = 2π·theta_num/theta_den` and `value = (|f₀| + |f₁|)/ω`; zero-point probes come last.
    pub fn r1_csv(&self) -> String {
        let mut out = String::from("eps,theta_num,theta_den,value\n");
        for s in self.joint_samples.iter().chain(&self.zero_samples) {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                s.eps.to_sci(17),
                s.angle.num(),
                s.angle.den(),
                LogPos::from_ln(s.log_ratio).to_sci(17)
            );
        }
        out
    }

    /// One row per grid radius and product with every circle functional
    /// (natural logs; `T` and `N` as is).
    pub fn radii_csv(&self) -> String {
        let mut out = String::from(
            "ln_eps,decade,kind,j,log_omega,log_mean,T,log_M_half,log_M_1,log_M_2,log_M_inf,N,min_log_modulus_excess\n",
        );
        for v in &self.radii {
            let kind = match v.kind {
                RadiusKind::Decade => "decade".to_string(),
                RadiusKind::Endpoint { j, m, inner } => {
                    format!("{}_I{}", if inner { "min" } else { "max" }, 2 * m + j as usize)
                }
            };
            for j in 0..2 {
                let _ = writeln!(
                    out,
                    "{:.17e},{},{},{},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}",
                    v.eps_ln,
                    v.decade,
                    kind,
                    j,
                    v.log_omega,
                    v.log_mean[j],
                    v.characteristic[j],
                    v.log_mp[j][0],
                    v.log_mp[j][1],
                    v.log_mp[j][2],
                    v.log_max_modulus[j],
                    v.counting_n[j],
                    v.min_log_modulus_excess[j]
                );
            }
        }
        out
    }
}

fn ensure_depth<T: Real>(products: [&Product<T>; 2], deepest: LogPos<T>, tol: T) -> Result<()> {
    for p in products {
        p.truncation_index(deepest, tol)?;
    }
    Ok(())
}

/// Deepest decade whose radii both products can evaluate at `tol`, given
/// the depth error of a deeper request.
pub fn max_usable_decade(required_ln_eps: f64) -> i64 {
    (-required_ln_eps / std::f64::consts::LN_10).floor() as i64 - 1
}

/// Evaluates the joint ratio, the means `M_p`, `T` and `N(r, ·, 0)` against
/// `ω` on `spec`'s grid.
pub fn verify_theorem<T: Real>(
    c: &Construction<T>,
    f0: &Product<T>,
    f1: &Product<T>,
    w: &Weight<T>,
    delta: T,
    spec: &GridSpec,
) -> Result<TheoremReport<T>> {
    if !(spec.tol > 0.0 && spec.tol < 0.5) {
        return Err(Error::Argument(format!("truncation tolerance must lie in (0, 1/2), got {}", spec.tol)));
    }
    let tol = T::lit(spec.tol);
    let (deepest, _) = spec.ell_bounds::<T>();
    ensure_depth([f0, f1], deepest, tol)?;
    let radii = grid_radii(c, delta, spec)?;
    let products = [f0, f1];
    let ivs = [intervals(c, 0, delta)?, intervals(c, 1, delta)?];
    let angle_grid = CircleGrid::new(spec.angles);
    let opts = QuadratureOptions::default();
    let modes = [
        MeanMode::Log,
        MeanMode::LogPlus,
        MeanMode::LogPower(T::lit(0.5)),
        MeanMode::LogPower(T::one()),
        MeanMode::LogPower(T::lit(2.0)),
    ];

    type Evaluated<T> = (RadiusValues, Vec<T>);
    let evaluated: Vec<Evaluated<T>> = radii
        .par_iter()
        .map(|gr| -> Result<Evaluated<T>> {
            let r = gr.radius;
            let log_omega = w.log_eval(r.eps())?;
            let mut vals = RadiusValues {
                eps_ln: r.eps().ln().as_f64(),
                decade: r.decade(),
                kind: gr.kind,
                log_omega: log_omega.as_f64(),
                log_mean: [0.0; 2],
                characteristic: [0.0; 2],
                log_mp: [[0.0; 3]; 2],
                log_max_modulus: [0.0; 2],
                counting_n: [0.0; 2],
                min_log_modulus_excess: [0.0; 2],
            };
            let mut per_angle: [Vec<T>; 2] = [Vec::new(), Vec::new()];
            for (j, p) in products.iter().enumerate() {
                let est = circle_means_tol(p, r, &modes, &opts, tol)?;
                vals.log_mean[j] = est.values[0].as_f64();
                vals.characteristic[j] = est.values[1].as_f64();
                for (slot, (k, e)) in [(2usize, 0.5f64), (3, 1.0), (4, 2.0)].into_iter().enumerate() {
                    vals.log_mp[j][slot] = est.values[k].as_f64() / e;
                }
                vals.log_max_modulus[j] = log_max_modulus_tol(p, r, tol)?.as_f64();
                vals.counting_n[j] = integrated_counting_zero(p, r).as_f64();
                let used = p.truncation_index(r.ell, tol)?.used;
                per_angle[j] = sample_log_modulus(p, r.ell, used, &angle_grid);
                vals.min_log_modulus_excess[j] =
                    per_angle[j].iter().fold(f64::INFINITY, |m, &v| m.min(v.as_f64())) - vals.log_omega;
            }
            let joint: Vec<T> = per_angle[0]
                .iter()
                .zip(&per_angle[1])
                .map(|(&a, &b)| LogPos::from_ln(a).add(LogPos::from_ln(b)).ln() - log_omega)
                .collect();
            Ok((vals, joint))
        })
        .collect::<Result<Vec<_>>>()?;

    let q = spec.angles;
    let mut joint_samples = Vec::with_capacity(evaluated.len() * q as usize);
    for ((vals, joint), gr) in evaluated.iter().zip(&radii) {
        let eps = gr.radius.eps();
        debug_assert_eq!(vals.eps_ln, eps.ln().as_f64());
        for (i, &v) in joint.iter().enumerate() {
            let angle = RationalAngle::new(i as u64, q).expect("i < q");
            joint_samples.push(JointSample { eps, angle, log_ratio: v });
        }
    }

    // zero points of either product on circles inside the grid range
    let mut zero_samples = Vec::new();
    if spec.include_zero_probes {
        for p in products {
            for z in p.zero_circles() {
                let r = Radius::from_ell(z.ell)?;
                if !spec.in_range(&r) {
                    continue;
                }
                let point = z.zero_point(&BigUint::zero())?;
                let log_omega = w.log_eval(r.eps())?;
                let a = f0.log_modulus(&point, tol)?;
                let b = f1.log_modulus(&point, tol)?;
                let v = LogPos::from_ln(a).add(LogPos::from_ln(b)).ln() - log_omega;
                zero_samples.push(JointSample { eps: r.eps(), angle: point.angle().clone(), log_ratio: v });
            }
        }
    }
    let joint_at_zeros = zero_samples.iter().map(|s| s.log_ratio.as_f64().exp()).reduce(f64::min);

    let decade_of = |eps: LogPos<T>| (-eps.ln().as_f64() / std::f64::consts::LN_10).floor() as i64;
    let drift_after = spec.drift_after as i64;
    let joint = RatioReport::from_log_samples(
        "(|f0|+|f1|)/omega",
        joint_samples.iter().map(|s| (decade_of(s.eps), s.log_ratio.as_f64())),
        drift_after,
    );

    let vals: Vec<&RadiusValues> = evaluated.iter().map(|(v, _)| v).collect();
    let mut means = Vec::new();
    for j in 0..2u8 {
        for (slot, label) in MEAN_LABELS.iter().enumerate() {
            let samples = vals.iter().map(|v| {
                let lm = if slot < 3 { v.log_mp[j as usize][slot] } else { v.log_max_modulus[j as usize] };
                (v.decade, lm - v.log_omega)
            });
            means.push((j, *label, RatioReport::from_log_samples(&format!("M_{label}(r,f{j})/omega"), samples, drift_after)));
        }
    }
    let ratio_to_log_omega = |name: String, pick: &dyn Fn(&RadiusValues) -> f64| {
        RatioReport::from_log_samples(&name, vals.iter().map(|v| (v.decade, pick(v).ln() - v.log_omega.ln())), drift_after)
    };
    let characteristic = (0..2)
        .map(|j| ratio_to_log_omega(format!("T(r,f{j})/log omega"), &|v| v.characteristic[j]))
        .collect();
    let counting = (0..2)
        .map(|j| ratio_to_log_omega(format!("N(r,f{j},0)/log omega"), &|v| v.counting_n[j]))
        .collect();

    let mut chain = ChainReport {
        checked: 0,
        violations: 0,
        min_margin_lower: f64::INFINITY,
        min_margin_upper: f64::INFINITY,
        passed: true,
    };
    for v in &vals {
        for j in 0..2 {
            let lower = v.characteristic[j] + CHAIN_SLACK - v.counting_n[j];
            let upper = v.log_max_modulus[j].max(0.0) + CHAIN_SLACK - v.characteristic[j];
            chain.checked += 1;
            chain.min_margin_lower = chain.min_margin_lower.min(lower);
            chain.min_margin_upper = chain.min_margin_upper.min(upper);
            if !(lower >= 0.0 && upper >= 0.0) {
                chain.violations += 1;
            }
        }
    }
    chain.passed = chain.violations == 0;

    let in_e = |j: usize, ell: LogPos<T>| ivs[j].iter().any(|iv: &Interval<T>| iv.contains_ell(ell));
    let mut min_modulus_on_e = [None, None];
    let mut max_modulus_excess = [f64::NEG_INFINITY; 2];
    for (v, gr) in vals.iter().zip(&radii) {
        for j in 0..2 {
            max_modulus_excess[j] = max_modulus_excess[j].max(v.log_max_modulus[j] - v.log_omega);
            if in_e(j, gr.radius.ell) {
                let m = v.min_log_modulus_excess[j];
                min_modulus_on_e[j] = Some(min_modulus_on_e[j].map_or(m, |x: f64| x.min(m)));
            }
        }
    }

    Ok(TheoremReport {
        grid: spec.clone(),
        radii: vals.into_iter().cloned().collect(),
        joint,
        joint_samples,
        zero_samples,
        joint_at_zeros,
        means,
        characteristic,
        counting,
        chain,
        min_modulus_on_e,
        max_modulus_excess,
    })
}

/// `N(r, f_j, a) / log ω(r)` over the decade radii of `spec`, for a probe
/// value `a ≠ 0`.
pub fn a_point_report<T: Real>(
    p: &Product<T>,
    w: &Weight<T>,
    a: Complex<T>,
    spec: &GridSpec,
) -> Result<RatioReport> {
    let mut radii = Vec::new();
    let ln10 = T::LN_10();
    for d in spec.first_decade..=spec.last_decade {
        for i in 0..spec.per_decade {
            let exponent = T::from_u32(d).expect("decade")
                + T::from_u32(i).expect("index") / T::from_u32(spec.per_decade).expect("count");
            radii.push(Radius::from_ell(LogPos::from_ln(-exponent * ln10))?);
        }
    }
    let samples = radii
        .par_iter()
        .map(|&r| -> Result<(i64, f64)> {
            let n = integrated_counting(p, r, a)?;
            let lw = w.log_eval(r.eps())?;
            Ok((r.decade(), n.as_f64().ln() - lw.as_f64().ln()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RatioReport::from_log_samples(
        &format!("N(r,f{},{})/log omega", p.parity(), format_complex(a)),
        samples,
        spec.drift_after as i64,
    ))
}

pub fn format_complex<T: Real>(a: Complex<T>) -> String {
    match (a.re == T::zero(), a.im == T::zero()) {
        (_, true) => format!("{}", a.re),
        (true, false) => format!("{}i", a.im),
        _ => format!("{}{:+}i", a.re, a.im),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CountingRow {
    /// Construction index `k` of the zero circle.
    pub k: usize,
    /// `ln(1 - s_k)`
    pub eps_ln: f64,
    /// `n(s_k, f, 0)(1 - s_k)`
    pub value: f64,
    /// `n_k (1 - s_k)`
    pub single: f64,
    pub log_a: f64,
    /// `log a/2 ≤ n_k(1 - s_k) ≤ log a`, checked where `s_k > 1/4`.
    pub single_ok: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CountingBoundReport {
    pub parity: u8,
    pub rows: Vec<CountingRow>,
    pub min: f64,
    pub max: f64,
    pub spread: f64,
    pub passed: bool,
}

impl CountingBoundReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("j,k,ln_eps,n_cumulative_times_eps,n_k_times_eps,log_a,single_ok\n");
        for r in &self.rows {
            let ok = match r.single_ok {
                Some(true) => "pass",
                Some(false) => "fail",
                None => "-",
            };
            let _ = writeln!(
                out,
                "{},{},{:.17e},{:.17e},{:.17e},{:.17e},{}",
                self.parity, r.k, r.eps_ln, r.value, r.single, r.log_a, ok
            );
        }
        out
    }
}

/// Tabulates `n(s_k)(1 - s_k)` at every zero circle of `p`.
pub fn counting_bound_check<T: Real>(c: &Construction<T>, p: &Product<T>) -> Result<CountingBoundReport> {
    let mut cumulative = BigUint::zero();
    let mut rows = Vec::new();
    for z in p.zero_circles() {
        cumulative += &z.n;
        let ln_comp = z.eps().ln().as_f64();
        let log_a = c.log_a(z.index).map(|v| v.as_f64()).unwrap_or_else(|_| {
            let f = p.factors().iter().find(|f| f.n == z.n).expect("circle comes from a factor");
            f.log_a.as_f64()
        });
        let single = (ln_big(&z.n) + ln_comp).exp();
        let quarter = (-(0.25f64.ln())).ln();
        // n(1-s) and log a agree to a few ulps scaled by |ln(1-s)|
        let slack = 64.0 * f64::EPSILON * (1.0 - ln_comp) * log_a;
        rows.push(CountingRow {
            k: z.index,
            eps_ln: ln_comp,
            value: (ln_big(&cumulative) + ln_comp).exp(),
            single,
            log_a,
            single_ok: (z.ell.ln().as_f64() < quarter).then(|| single >= log_a / 2.0 - slack && single <= log_a + slack),
        });
    }
    let min = rows.iter().map(|r| r.value).fold(f64::INFINITY, f64::min);
    let max = rows.iter().map(|r| r.value).fold(f64::NEG_INFINITY, f64::max);
    let spread = max / min;
    let passed = !rows.is_empty()
        && min > 0.0
        && spread < COUNTING_SPREAD_LIMIT
        && rows.iter().all(|r| r.single_ok != Some(false));
    Ok(CountingBoundReport { parity: p.parity(), rows, min, max, spread, passed })
}

#[derive(Clone, Debug, Serialize)]
pub struct JensenRow {
    pub eps_ln: f64,
    pub mean_log: f64,
    pub n_exact: f64,
    pub error: f64,
    pub q: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct JensenReport {
    pub parity: u8,
    pub rows: Vec<JensenRow>,
    pub max_error: f64,
    pub passed: bool,
}

impl JensenReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("j,ln_eps,mean_log,N_exact,error,q\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{:.17e},{:.17e},{:.17e},{:.3e},{}",
                self.parity, r.eps_ln, r.mean_log, r.n_exact, r.error, r.q
            );
        }
        out
    }
}

/// Tolerance of the Jensen identity check.
pub const JENSEN_TOL: f64 = 1e-5;

/// `|mean log|f| - N(r, f, 0)|` at each radius (`f(0) = 1`).
pub fn jensen_check<T: Real>(p: &Product<T>, radii: &[Radius<T>]) -> Result<JensenReport> {
    let rows = radii
        .par_iter()
        .map(|&r| -> Result<JensenRow> {
            let est = circle_means(p, r, &[MeanMode::Log], &QuadratureOptions::default())?;
            let mean_log = est.values[0].as_f64();
            let n_exact = integrated_counting_zero(p, r).as_f64();
            Ok(JensenRow { eps_ln: r.eps().ln().as_f64(), mean_log, n_exact, error: (mean_log - n_exact).abs(), q: est.q })
        })
        .collect::<Result<Vec<_>>>()?;
    let max_error = rows.iter().map(|r| r.error).fold(0.0, f64::max);
    Ok(JensenReport { parity: p.parity(), passed: max_error < JENSEN_TOL, rows, max_error })
}

/// `count` radii, log-spaced in `ℓ` from `1` down to ten times the deepest
/// certified radius, each kept at least 1% (in `log a - nℓ`) off every zero
/// circle.
pub fn jensen_radii<T: Real>(p: &Product<T>, count: usize) -> Result<Vec<Radius<T>>> {
    if count == 0 {
        return Ok(Vec::new());
    }
    let deepest = p
        .min_certified_ell(tol())
        .map(|e| e.ln() + T::LN_10())
        .unwrap_or_else(|| T::lit(-30.0))
        .min(T::lit(-1.0));
    let step = if count > 1 { -deepest / T::from_usize(count - 1).expect("count") } else { T::zero() };
    let margin = T::lit(0.01);
    (0..count)
        .map(|i| {
            let mut ln_ell = -step * T::from_usize(i).expect("index");
            for _ in 0..100 {
                let ell = LogPos::from_ln(ln_ell);
                let near = p.factors().iter().any(|f| {
                    f.log_a > T::zero() && ((f.log_a - f.n_ell(ell)) / f.log_a).abs() < margin
                });
                if !near {
                    break;
                }
                ln_ell = ln_ell - margin;
            }
            Radius::from_ell(LogPos::from_ln(ln_ell))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(a: f64, n: u32) -> Product<f64> {
        Product::finite(vec![(a.ln(), BigUint::from(n))]).unwrap()
    }

    #[test]
    fn single_factor_means() {
        let (a, n) = (1024.0f64, 64u32);
        let p = single(a, n);
        let s = a.powf(-1.0 / n as f64);
        let inside = Radius::from_r(0.8 * s).unwrap();
        assert!(circle_mean(&p, inside, MeanMode::Log).unwrap().abs() < 1e-9);
        let r = 0.5 * (1.0 + s);
        let outside = Radius::from_r(r).unwrap();
        let expect = (a * r.powi(n as i32)).ln();
        assert!((circle_mean(&p, outside, MeanMode::Log).unwrap() - expect).abs() < 1e-7);
    }

    #[test]
    fn trivial_product_is_one() {
        let p = Product::<f64>::finite(vec![]).unwrap();
        let r = Radius::from_r(0.9).unwrap();
        assert_eq!(log_mean_power(&p, r, 3.0).unwrap(), 0.0);
        assert_eq!(characteristic(&p, r).unwrap(), 0.0);
        assert_eq!(log_max_modulus(&p, r).unwrap(), 0.0);
    }

    #[test]
    fn single_factor_maximum_on_positive_axis() {
        let (a, n) = (50.0f64, 7u32);
        let p = single(a, n);
        for r in [0.3f64, 0.7, 0.95] {
            let x = r.powi(n as i32);
            let expect = ((1.0 + a * x) / (1.0 + x / a)).ln();
            let got = log_max_modulus(&p, Radius::from_r(r).unwrap()).unwrap();
            assert!((got - expect).abs() < 1e-12, "{r}: {got} vs {expect}");
        }
    }

    #[test]
    fn counting_single_circle() {
        let p = single(1024.0, 64);
        let s_ell = p.zero_circles()[0].ell;
        let r = Radius::from_ell(s_ell).unwrap();
        assert_eq!(counting_function(&p, r), BigUint::from(64u8));
        let below = Radius::from_ell(s_ell * LogPos::new(1.5)).unwrap();
        assert_eq!(counting_function(&p, below), BigUint::zero());
        assert_eq!(integrated_counting_zero(&p, below), 0.0);
        let outer = Radius::from_r(0.95).unwrap();
        let expect = 64.0 * (0.95f64 / 1024f64.powf(-1.0 / 64.0)).ln();
        assert!((integrated_counting_zero(&p, outer) - expect).abs() < 1e-12);
    }

    #[test]
    fn a_points_of_a_single_factor() {
        // f = (1 + a z^n)/(1 + z^n/a) takes the value b at z^n = (b-1)/(a - b/a)
        let (a, n) = (4.0f64, 3u32);
        let p = single(a, n);
        for b in [Complex::new(-1.0, 0.0), Complex::new(0.0, 2.0), Complex::new(1.0, 0.0)] {
            let w = (b - 1.0) / (a - b / a);
            let radius = w.norm().powf(1.0 / n as f64);
            let r = 0.97f64;
            let expect = if b == Complex::new(1.0, 0.0) {
                // f - 1 vanishes to order n at 0 and nowhere else
                n as f64 * r.ln()
            } else if radius < r {
                n as f64 * (r / radius).ln()
            } else {
                0.0
            };
            let got = integrated_counting(&p, Radius::from_r(r).unwrap(), b).unwrap();
            assert!((got - expect).abs() < 1e-6, "{b}: {got} vs {expect}");
        }
    }

    #[test]
    fn ratio_report_drift_and_positivity() {
        let ok = RatioReport::from_log_samples("x", [(3, 0.0), (4, 0.5), (5, 0.9), (6, 1.3)], 3);
        assert!(ok.passed, "{:?}", ok.failures);
        let drift = RatioReport::from_log_samples("x", [(4, 0.0), (5, 1.0)], 3);
        assert!(!drift.passed);
        let early = RatioReport::from_log_samples("x", [(3, 0.0), (4, 1.0)], 3);
        assert!(early.passed);
        let zero = RatioReport::from_log_samples("x", [(3, f64::NEG_INFINITY)], 3);
        assert!(!zero.passed);
    }
}
