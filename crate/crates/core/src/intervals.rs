//! Maximality intervals `I_{2m+j}` and the covering of a tail of `[0, 1)`.
//!
//! Endpoints are kept as log-radii `ℓ = -ln r`: the interval of index
//! `2m+j` sits between the zero circles `ℓ = A = log a_{2m+j}/n_{2m+j}` and
//! `ℓ = B = log a_{2m+2+j}/n_{2m+2+j}` and is
//! `ℓ ∈ [δρA + (1-δρ)B, (1-δ)A + δB]` with `ρ = n_{2m+j}/n_{2m+1+j}`.

use std::fmt::Write as _;

use crate::construction::Construction;
use crate::error::{Error, Result};
use crate::logpos::{complement_from_ell, LogPos, SignedLog};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval<T> {
    pub m: usize,
    pub j: u8,
    /// `ℓ` at `min I` (the inner radius, larger `ℓ`).
    pub ell_at_min: LogPos<T>,
    /// `ℓ` at `max I`.
    pub ell_at_max: LogPos<T>,
}

impl<T: Real> Interval<T> {
    /// Construction index `2m + j`.
    pub fn index(&self) -> usize {
        2 * self.m + self.j as usize
    }

    /// `log(min I)`
    pub fn lo_log(&self) -> SignedLog<T> {
        SignedLog { negative: true, magnitude: self.ell_at_min }
    }

    /// `log(max I)`
    pub fn hi_log(&self) -> SignedLog<T> {
        SignedLog { negative: true, magnitude: self.ell_at_max }
    }

    /// `1 - min I`
    pub fn eps_at_min(&self) -> LogPos<T> {
        complement_from_ell(self.ell_at_min)
    }

    /// `1 - max I`
    pub fn eps_at_max(&self) -> LogPos<T> {
        complement_from_ell(self.ell_at_max)
    }

    /// Whether the radius with log-radius `ell` lies in the interval.
    pub fn contains_ell(&self, ell: LogPos<T>) -> bool {
        ell <= self.ell_at_min && ell >= self.ell_at_max
    }
}

/// `I_{2m+j}` for covering parameter `delta`.
pub fn interval<T: Real>(c: &Construction<T>, j: u8, m: usize, delta: T) -> Result<Interval<T>> {
    if j > 1 {
        return Err(Error::Argument(format!("parity must be 0 or 1, got {j}")));
    }
    if m == 0 {
        return Err(Error::IndexOutOfRange { index: 0, available: c.ratio_count() });
    }
    if !(delta > T::zero() && delta < T::one()) {
        return Err(Error::Argument(format!("δ must lie in (0, 1), got {delta}")));
    }
    let k = 2 * m + j as usize;
    let outer = c.zero_ell(k)?;
    let inner = c.zero_ell(k + 2)?;
    let rho = LogPos::from_ln(c.ln_n(k)? - c.ln_n(k + 1)?);
    let d = LogPos::new(delta);
    let one_minus = |x: LogPos<T>| LogPos::one().checked_sub(x).unwrap_or_else(LogPos::zero);
    let ell_at_min = (outer * one_minus(d)).add(inner * d);
    let ell_at_max = (outer * d * rho).add(inner * one_minus(d * rho));
    if !(outer > ell_at_min && ell_at_min > ell_at_max && ell_at_max > inner) {
        return Err(Error::Degenerate(format!(
            "I_{k} is not nested between its zero circles for δ = {delta}"
        )));
    }
    Ok(Interval { m, j, ell_at_min, ell_at_max })
}

/// All intervals of parity `j` the construction supports.
pub fn intervals<T: Real>(c: &Construction<T>, j: u8, delta: T) -> Result<Vec<Interval<T>>> {
    let count = (c.ratio_count().saturating_sub(2 + j as usize)) / 2;
    (1..=count).map(|m| interval(c, j, m, delta)).collect()
}

/// Largest `M` for which [`covering_check`] has every interval it needs.
pub fn max_cover_index<T: Real>(c: &Construction<T>) -> usize {
    c.len().saturating_sub(6) / 2
}

#[derive(Clone, Debug)]
pub struct CoverRow<T> {
    pub m: usize,
    pub even: Interval<T>,
    pub odd: Interval<T>,
    /// `log max I_{2m} - log min I_{2m+1}`
    pub margin1: SignedLog<T>,
    /// `log max I_{2m+1} - log min I_{2m+2}`
    pub margin2: SignedLog<T>,
}

impl<T: Real> CoverRow<T> {
    pub fn passed(&self) -> bool {
        self.margin1.is_nonnegative() && self.margin2.is_nonnegative()
    }
}

#[derive(Clone, Debug)]
pub struct CoverReport<T> {
    pub delta: T,
    pub rows: Vec<CoverRow<T>>,
    pub passed: bool,
    /// `(ℓ at min I₂, ℓ at max I_{2M+1})`: the range `E₀ ∪ E₁` is verified to cover.
    pub covered: Option<(LogPos<T>, LogPos<T>)>,
}

impl<T: Real> CoverReport<T> {
    pub fn first_failure(&self) -> Option<usize> {
        self.rows.iter().find(|r| !r.passed()).map(|r| r.m)
    }

    /// Columns `m, lo₀, hi₀, lo₁, hi₁, margin₁, margin₂` (log-radius).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("m,lo0,hi0,lo1,hi1,margin1,margin2\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.m,
                r.even.lo_log().to_sci(17),
                r.even.hi_log().to_sci(17),
                r.odd.lo_log().to_sci(17),
                r.odd.hi_log().to_sci(17),
                r.margin1.to_sci(17),
                r.margin2.to_sci(17)
            );
        }
        out
    }
}

/// Checks `min I_{2m+1} ≤ max I_{2m}` and `min I_{2m+2} ≤ max I_{2m+1}` for
/// `m = 1..=M`.
pub fn covering_check<T: Real>(c: &Construction<T>, delta: T, big_m: usize) -> Result<CoverReport<T>> {
    let available = max_cover_index(c);
    if big_m > available {
        return Err(Error::IndexOutOfRange { index: big_m, available });
    }
    let mut rows = Vec::with_capacity(big_m);
    for m in 1..=big_m {
        let even = interval(c, 0, m, delta)?;
        let odd = interval(c, 1, m, delta)?;
        let next = interval(c, 0, m + 1, delta)?;
        rows.push(CoverRow {
            m,
            even,
            odd,
            margin1: odd.ell_at_min.signed_sub(even.ell_at_max),
            margin2: next.ell_at_min.signed_sub(odd.ell_at_max),
        });
    }
    let passed = rows.iter().all(CoverRow::passed);
    let covered = match (rows.first(), rows.last()) {
        (Some(first), Some(last)) if passed => Some((first.even.ell_at_min, last.odd.ell_at_max)),
        _ => None,
    };
    Ok(CoverReport { delta, rows, passed, covered })
}

/// `m(E ∩ [r, 1_cov)) / (1_cov - r)` for `E` the union of `intervals`, where
/// `1_cov` is the largest endpoint and `r` has complement `eps_r`.
pub fn lower_density_estimate<T: Real>(intervals: &[Interval<T>], eps_r: LogPos<T>) -> Result<T> {
    let Some(eps_cov) = intervals.iter().map(Interval::eps_at_max).reduce(LogPos::min) else {
        return Ok(T::zero());
    };
    let Some(span) = eps_r.checked_sub(eps_cov).filter(|s| !s.is_zero()) else {
        return Err(Error::Domain { what: "radius beyond the covered range, ln(1-r)", value: eps_r.ln().as_f64() });
    };
    let measure = intervals.iter().fold(LogPos::zero(), |acc, iv| {
        let lo = iv.eps_at_max().max(eps_cov);
        let hi = iv.eps_at_min().min(eps_r);
        match hi.checked_sub(lo) {
            Some(len) => acc.add(len),
            None => acc,
        }
    });
    Ok(measure.ratio(span).min(T::one()))
}

#[derive(Clone, Copy, Debug)]
pub struct DensityRow<T> {
    pub m: usize,
    /// `1 - r` at the endpoint where the density is evaluated.
    pub eps: LogPos<T>,
    pub ratio: T,
}

/// Density of `E_j` tabulated at every interval endpoint but the last.
pub fn density_table<T: Real>(intervals: &[Interval<T>]) -> Result<Vec<DensityRow<T>>> {
    let mut rows = Vec::new();
    for (i, iv) in intervals.iter().enumerate() {
        let last = i + 1 == intervals.len();
        for (eps, is_outer) in [(iv.eps_at_min(), true), (iv.eps_at_max(), false)] {
            if last && !is_outer {
                continue;
            }
            rows.push(DensityRow { m: iv.m, eps, ratio: lower_density_estimate(intervals, eps)? });
        }
    }
    Ok(rows)
}
