//! Trapezoidal circle means on prime-order angle grids.
//!
//! Sample angles are `θ_i = 2π i/q`. Every exponent of a constructed product
//! is close to a power of a fixed ratio, and for power-of-two weights it *is* a
//! power of two, so `n_k θ_i` collapses onto a handful of points when `q` is a
//! power of two. With `q` prime and `q ∤ n_k`, `i ↦ n_k i mod q` permutes the
//! grid, and each factor is sampled at all `q` phases.

use std::sync::{Arc, OnceLock};

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::logpos::LogPos;
use crate::product::{n_mod, PreparedFactor, Product};
use crate::scalar::Real;

/// Grid orders for the doubling ladder start just above this.
pub const BASE_ORDER: u64 = 64;

/// Number of ladder levels; the last one is just above `2^20`.
pub const LEVELS: usize = 15;

/// Default relative stopping tolerance between successive levels.
pub const DEFAULT_REL_TOL: f64 = 1e-6;

const PARALLEL_CHUNK: usize = 1 << 14;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Smallest prime `≥ n`.
pub fn next_prime(n: u64) -> u64 {
    (n.max(2)..).find(|&m| is_prime(m)).expect("primes are unbounded")
}

/// Largest prime `≤ n`, if any.
pub fn prev_prime(n: u64) -> Option<u64> {
    (2..=n).rev().find(|&m| is_prime(m))
}

/// Order of ladder level `level`: the smallest prime `≥ 64·2^level`.
pub fn ladder_order(level: usize) -> u64 {
    next_prime(BASE_ORDER << level)
}

/// `sin(π j / (2q))` for `j = 0..=q`, from which every half-phase on the
/// grid of order `q` is read off.
#[derive(Debug)]
pub struct CircleGrid {
    q: u64,
    table: Vec<f64>,
}

impl CircleGrid {
    pub fn new(q: u64) -> Self {
        assert!(q >= 2, "grid order must be at least 2");
        let two_q = (2 * q) as f64;
        let table = (0..=q).map(|j| (std::f64::consts::PI * (j as f64 / two_q)).sin()).collect();
        CircleGrid { q, table }
    }

    /// Shared grid for ladder level `level`.
    pub fn ladder(level: usize) -> Arc<CircleGrid> {
        static CACHE: OnceLock<Vec<OnceLock<Arc<CircleGrid>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| (0..LEVELS).map(|_| OnceLock::new()).collect());
        cache[level].get_or_init(|| Arc::new(CircleGrid::new(ladder_order(level)))).clone()
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    /// `(cos(φ/2), sin(φ/2))` for `φ = 2π p/q`.
    #[inline]
    pub fn half_phase<T: Real>(&self, p: u64) -> (T, T) {
        let q = self.q;
        let c = if 2 * p <= q { self.table[(q - 2 * p) as usize] } else { -self.table[(2 * p - q) as usize] };
        let s = self.table[(2 * p.min(q - p)) as usize];
        (T::lit(c), T::lit(s))
    }
}

/// `log|f(e^{-ℓ} e^{2πi·i/q})|` for `i = 0..q`.
pub fn sample_log_modulus<T: Real>(p: &Product<T>, ell: LogPos<T>, used: usize, grid: &CircleGrid) -> Vec<T> {
    let prepared = p.prepare(ell, used);
    let residues: Vec<u64> = p.factors()[..used]
        .iter()
        .filter(|f| f.log_a != T::zero())
        .map(|f| n_mod(&f.n, grid.order()))
        .collect();
    let q = grid.order() as usize;
    let mut out = vec![T::zero(); q];
    let fill = |start: usize, chunk: &mut [T]| {
        for (f, &m) in prepared.iter().zip(&residues) {
            accumulate(f, m, start as u64, grid, chunk);
        }
    };
    if q > PARALLEL_CHUNK {
        out.par_chunks_mut(PARALLEL_CHUNK).enumerate().for_each(|(i, chunk)| fill(i * PARALLEL_CHUNK, chunk));
    } else {
        fill(0, &mut out);
    }
    out
}

/// `log f(e^{-ℓ} e^{2πi·i/q})` (modulus and argument) for `i = 0..q`.
pub fn sample_log_value<T: Real>(
    p: &Product<T>,
    ell: LogPos<T>,
    used: usize,
    grid: &CircleGrid,
) -> Vec<Complex<T>> {
    let prepared = p.prepare(ell, used);
    let residues: Vec<u64> = p.factors()[..used]
        .iter()
        .filter(|f| f.log_a != T::zero())
        .map(|f| n_mod(&f.n, grid.order()))
        .collect();
    let q = grid.order();
    let mut out = vec![Complex::new(T::zero(), T::zero()); q as usize];
    let fill = |start: usize, chunk: &mut [Complex<T>]| {
        for (f, &m) in prepared.iter().zip(&residues) {
            let mut phase = ((start as u128 * m as u128) % q as u128) as u64;
            for v in chunk.iter_mut() {
                let (c, s) = grid.half_phase::<T>(phase);
                *v = *v + f.log_value(c, s);
                phase += m;
                if phase >= q {
                    phase -= q;
                }
            }
        }
    };
    out.par_chunks_mut(PARALLEL_CHUNK).enumerate().for_each(|(i, chunk)| fill(i * PARALLEL_CHUNK, chunk));
    out
}

fn accumulate<T: Real>(f: &PreparedFactor<T>, m: u64, start: u64, grid: &CircleGrid, out: &mut [T]) {
    let q = grid.order();
    let mut phase = ((start as u128 * m as u128) % q as u128) as u64;
    for v in out.iter_mut() {
        let (c, s) = grid.half_phase::<T>(phase);
        *v = *v + f.log_abs(c, s);
        phase += m;
        if phase >= q {
            phase -= q;
        }
    }
}

/// Functional averaged over the circle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MeanMode<T> {
    /// mean of `log|f|`
    Log,
    /// mean of `log⁺|f|`
    LogPlus,
    /// `ln` of the mean of `|f|^p`
    LogPower(T),
}

#[derive(Clone, Copy, Debug)]
pub struct QuadratureOptions {
    pub rel_tol: f64,
    /// First ladder level tried.
    pub min_level: usize,
    /// Last ladder level tried (inclusive, `< LEVELS`).
    pub max_level: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        QuadratureOptions { rel_tol: DEFAULT_REL_TOL, min_level: 0, max_level: LEVELS - 1 }
    }
}

#[derive(Clone, Debug)]
pub struct MeanEstimate<T> {
    pub values: Vec<T>,
    /// Grid order of the accepted estimate.
    pub q: u64,
    /// Largest change between the last two levels, relative per mode.
    pub last_change: f64,
}

fn reduce<T: Real>(samples: &[T], modes: &[MeanMode<T>]) -> Vec<T> {
    let q = T::from_usize(samples.len()).expect("grid size");
    modes
        .iter()
        .map(|mode| match *mode {
            MeanMode::Log => samples.iter().fold(T::zero(), |a, &v| a + v) / q,
            MeanMode::LogPlus => samples.iter().fold(T::zero(), |a, &v| a + v.max(T::zero())) / q,
            MeanMode::LogPower(p) => {
                // θ = 0 carries the maximum modulus; scale by it
                let shift = p * samples[0];
                let sum = samples.iter().fold(T::zero(), |a, &v| a + (p * v - shift).exp());
                shift + (sum / q).ln()
            }
        })
        .collect()
}

fn change<T: Real>(absolute: bool, old: T, new: T) -> f64 {
    let (old, new) = (old.as_f64(), new.as_f64());
    if old == new {
        return 0.0;
    }
    if absolute {
        (new - old).abs()
    } else {
        (new - old).abs() / new.abs().max(1.0)
    }
}

/// Means of several functionals on the circle `|z| = e^{-ℓ}`, doubling the
/// grid order until every mode changes by at most `rel_tol`.
pub fn adaptive_means<T: Real>(
    p: &Product<T>,
    ell: LogPos<T>,
    used: usize,
    modes: &[MeanMode<T>],
    opts: &QuadratureOptions,
) -> Result<MeanEstimate<T>> {
    let tolerance: Vec<bool> = modes.iter().map(|m| matches!(m, MeanMode::LogPower(_))).collect();
    adaptive_ladder(p, used, &tolerance, opts, |grid| reduce(&sample_log_modulus(p, ell, used, grid), modes))
}

/// The doubling ladder behind [`adaptive_means`], for an arbitrary
/// `estimate(grid) -> values`. `absolute[i]` selects an absolute (rather
/// than relative-to-max(|v|, 1)) stopping test for value `i`.
pub fn adaptive_ladder<T: Real>(
    p: &Product<T>,
    used: usize,
    absolute: &[bool],
    opts: &QuadratureOptions,
    mut estimate: impl FnMut(&CircleGrid) -> Vec<T>,
) -> Result<MeanEstimate<T>> {
    let mut previous: Option<(u64, Vec<T>)> = None;
    let mut older: Option<Vec<T>> = None;
    let last_level = opts.max_level.min(LEVELS - 1);
    for level in opts.min_level..=last_level {
        let grid = CircleGrid::ladder(level);
        let aliased = p.factors()[..used].iter().any(|f| f.log_a != T::zero() && n_mod(&f.n, grid.order()) == 0);
        if aliased {
            continue;
        }
        let values = estimate(&grid);
        if let Some((_, old)) = &previous {
            let last_change = absolute
                .iter()
                .zip(old.iter().zip(&values))
                .map(|(&abs, (&o, &n))| change(abs, o, n))
                .fold(0.0, f64::max);
            if last_change <= opts.rel_tol {
                return Ok(MeanEstimate { values, q: grid.order(), last_change });
            }
        }
        older = previous.map(|(_, v)| v);
        previous = Some((grid.order(), values));
    }
    let first = |v: &Option<Vec<T>>| v.as_ref().and_then(|v| v.first()).map_or(f64::NAN, |x| x.as_f64());
    match previous {
        Some((q, values)) => Err(Error::NoConvergence { q, previous: first(&older), last: first(&Some(values)) }),
        None => Err(Error::Degenerate("every ladder order divides a factor exponent".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        assert_eq!(next_prime(64), 67);
        assert_eq!(prev_prime(4096), Some(4093));
        assert_eq!(ladder_order(0), 67);
        assert!(ladder_order(LEVELS - 1) >= 1 << 20);
        assert!(!is_prime(1) && is_prime(2) && !is_prime(91));
    }

    #[test]
    fn table_half_phases_match_direct_trig() {
        let g = CircleGrid::new(67);
        for p in 0..67u64 {
            let (c, s): (f64, f64) = g.half_phase(p);
            let x = std::f64::consts::PI * p as f64 / 67.0;
            assert!((c - x.cos()).abs() < 1e-15 && (s - x.sin()).abs() < 1e-15, "p = {p}");
        }
    }
}
