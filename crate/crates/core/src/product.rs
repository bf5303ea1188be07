//! The products `f_j(z) = ∏_k (1 + a_k z^{n_k}) / (1 + a_k^{-1} z^{n_k})`.
//!
//! Points are given by their log-radius `ℓ = -ln r` (a [`LogPos`], so radii
//! arbitrarily close to 1 are representable) and a rational angle, which
//! lets `n·θ mod 2π` be reduced exactly for integer `n` of any size.

use num_bigint::{BigInt, BigUint};
use num_complex::Complex;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::bigint::{ln_big, ratio_to_f64};
use crate::construction::Construction;
use crate::error::{Error, Result};
use crate::logpos::{complement_from_ell, ell_from_complement, LogPos};
use crate::scalar::Real;

/// `θ = 2π·num/den` with `0 ≤ num < den`, in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalAngle {
    num: BigUint,
    den: BigUint,
}

impl RationalAngle {
    pub fn new(num: impl Into<BigUint>, den: impl Into<BigUint>) -> Result<Self> {
        let (num, den) = (num.into(), den.into());
        if den.is_zero() {
            return Err(Error::Argument("angle denominator must be positive".into()));
        }
        if num >= den {
            return Err(Error::Argument(format!("angle numerator {num} must be below denominator {den}")));
        }
        Ok(Self::reduced(num, den))
    }

    fn reduced(num: BigUint, den: BigUint) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.gcd(&den);
        RationalAngle { num: num / &g, den: den / &g }
    }

    pub fn zero() -> Self {
        RationalAngle { num: BigUint::zero(), den: BigUint::one() }
    }

    pub fn num(&self) -> &BigUint {
        &self.num
    }

    pub fn den(&self) -> &BigUint {
        &self.den
    }

    /// The angle `-θ`.
    pub fn negate(&self) -> Self {
        if self.num.is_zero() {
            return self.clone();
        }
        RationalAngle { num: &self.den - &self.num, den: self.den.clone() }
    }

    /// Approximate value of `θ / 2π`.
    pub fn turns(&self) -> f64 {
        ratio_to_f64(&BigInt::from(self.num.clone()), &self.den)
    }

    /// `(cos(φ/2), sin(φ/2))` for `φ = n·θ mod 2π`, `φ/2 ∈ [0, π)`.
    pub fn half_phase<T: Real>(&self, n: &BigUint) -> (T, T) {
        let p = (n % &self.den) * &self.num % &self.den;
        let q = &self.den;
        // cos(πp/q) = sin(π(q - 2p)/(2q)),  sin(πp/q) = sin(π·2min(p, q-p)/(2q))
        let two_q = q << 1u8;
        let j_cos = BigInt::from(q.clone()) - BigInt::from(&p << 1u8);
        let rest = q - &p;
        let j_sin = BigInt::from(if p < rest { &p << 1u8 } else { rest << 1u8 });
        let pi = std::f64::consts::PI;
        let c = (pi * ratio_to_f64(&j_cos, &two_q)).sin();
        let s = (pi * ratio_to_f64(&j_sin, &two_q)).sin();
        (T::lit(c), T::lit(s))
    }
}

/// A point `z = r e^{iθ}` of the closed disc, `r = e^{-ℓ}`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscPoint<T: Real> {
    ell: LogPos<T>,
    eps: LogPos<T>,
    angle: RationalAngle,
}

impl<T: Real> DiscPoint<T> {
    /// Point with complement radius `eps = 1 - r ∈ (0, 1]`.
    pub fn from_eps(eps: LogPos<T>, angle: RationalAngle) -> Result<Self> {
        if eps.is_zero() || eps.ln() > T::zero() || eps.ln().is_nan() {
            return Err(Error::Domain { what: "complement radius ε", value: eps.value().as_f64() });
        }
        Ok(DiscPoint { ell: ell_from_complement(eps), eps, angle })
    }

    /// Point with log-radius `ℓ = -ln r ∈ (0, ∞]`.
    pub fn from_ell(ell: LogPos<T>, angle: RationalAngle) -> Result<Self> {
        if ell.is_zero() || ell.ln().is_nan() {
            return Err(Error::Domain { what: "log-radius ℓ", value: ell.value().as_f64() });
        }
        Ok(DiscPoint { ell, eps: complement_from_ell(ell), angle })
    }

    /// `eps` and angle `2π·num/den` from plain numbers.
    pub fn new(eps: T, num: u64, den: u64) -> Result<Self> {
        if !(eps > T::zero()) || eps > T::one() {
            return Err(Error::Domain { what: "complement radius ε", value: eps.as_f64() });
        }
        Self::from_eps(LogPos::new(eps), RationalAngle::new(num, den)?)
    }

    pub fn origin() -> Self {
        DiscPoint { ell: LogPos::infinity(), eps: LogPos::one(), angle: RationalAngle::zero() }
    }

    pub fn ell(&self) -> LogPos<T> {
        self.ell
    }

    pub fn eps(&self) -> LogPos<T> {
        self.eps
    }

    pub fn angle(&self) -> &RationalAngle {
        &self.angle
    }

    pub fn conjugate(&self) -> Self {
        DiscPoint { angle: self.angle.negate(), ..self.clone() }
    }
}

/// One factor `(1 + a z^n) / (1 + z^n / a)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Factor<T> {
    /// Construction index `k` of `(a_k, n_k)`; 0 for hand-made factors.
    pub index: usize,
    pub log_a: T,
    pub n: BigUint,
    pub ln_n: T,
}

/// `ln|1 + t e^{iφ}|` for a fixed `t`, prepared once per circle.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Side<T> {
    /// `ln t` when `t > 1` (the factor is evaluated as `t·(1 + t^{-1} e^{-iφ})`).
    shift: T,
    /// `min(t, 1/t)`
    t: T,
    /// `1 - min(t, 1/t)`
    omt: T,
}

impl<T: Real> Side<T> {
    fn new(ln_t: T) -> Self {
        let (shift, ln_small) = if ln_t > T::zero() { (ln_t, -ln_t) } else { (T::zero(), ln_t) };
        Side { shift, t: ln_small.exp(), omt: -ln_small.exp_m1() }
    }

    #[inline]
    fn log_abs(&self, c: T, cos_phi: T) -> T {
        let t = self.t;
        if t == T::zero() {
            return self.shift;
        }
        let h = t * (t + (cos_phi + cos_phi));
        let half = T::lit(0.5);
        if h.abs() < half {
            self.shift + half * h.ln_1p()
        } else {
            let four = T::lit(4.0);
            self.shift + half * (self.omt * self.omt + four * t * c * c).ln()
        }
    }
}

/// A factor specialised to one circle `|z| = e^{-ℓ}`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct PreparedFactor<T> {
    pub(crate) num: Side<T>,
    pub(crate) den: Side<T>,
    /// `|a r^n - 1|` is within rounding of zero: the circle is a zero circle.
    pub(crate) on_zero_circle: bool,
    ln_u: T,
    ln_v: T,
}

impl<T: Real> PreparedFactor<T> {
    /// `ln|factor|` at half-phase `(c, s)`; `-∞` exactly at a zero.
    #[inline]
    pub(crate) fn log_abs(&self, c: T, s: T) -> T {
        if self.on_zero_circle && c == T::zero() {
            return T::neg_infinity();
        }
        let cos_phi = c * c - s * s;
        self.num.log_abs(c, cos_phi) - self.den.log_abs(c, cos_phi)
    }

    /// `log(factor)` with imaginary part in `(-2π, 2π)`.
    #[inline]
    pub(crate) fn log_value(&self, c: T, s: T) -> Complex<T> {
        Complex::new(self.log_abs(c, s), self.arg(c, s))
    }

    /// Argument of the factor at half-phase `(c, s)`.
    fn arg(&self, c: T, s: T) -> T {
        let one_plus = |ln_t: T| {
            let t = ln_t.exp();
            let two = T::lit(2.0);
            let re = -ln_t.exp_m1() + two * t * c * c;
            let im = two * t * s * c;
            im.atan2(re)
        };
        one_plus(self.ln_u) - one_plus(self.ln_v)
    }
}

impl<T: Real> Factor<T> {
    fn new(index: usize, log_a: T, n: BigUint) -> Self {
        let ln_n = T::lit(ln_big(&n));
        Factor { index, log_a, n, ln_n }
    }

    /// `n·ℓ`, or `+∞` at the origin.
    pub fn n_ell(&self, ell: LogPos<T>) -> T {
        (self.ln_n + ell.ln()).exp()
    }

    /// Log-radius `log a / n` of the zero circle.
    pub fn zero_ell(&self) -> LogPos<T> {
        LogPos::from_ln(self.log_a.ln() - self.ln_n)
    }

    pub(crate) fn prepare(&self, ell: LogPos<T>) -> PreparedFactor<T> {
        let n_ell = self.n_ell(ell);
        let ln_u = self.log_a - n_ell;
        let ln_v = -self.log_a - n_ell;
        let zero_tol = T::lit(16.0) * T::epsilon() * (T::one() + self.log_a);
        PreparedFactor {
            num: Side::new(ln_u),
            den: Side::new(ln_v),
            on_zero_circle: ln_u.abs() <= zero_tol,
            ln_u,
            ln_v,
        }
    }
}

/// How many factors a point needs and the bound on what is left out.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Truncation<T> {
    pub used: usize,
    /// Bound on `|log|∏_{omitted}||`.
    pub tail_log_bound: T,
}

/// A zero circle `|z| = s` carrying `n` simple zeros at angles `π(2l+1)/n`.
#[derive(Clone, Debug, PartialEq)]
pub struct ZeroCircle<T> {
    pub index: usize,
    /// `ln(1/s) = log a / n`
    pub ell: LogPos<T>,
    pub n: BigUint,
}

impl<T: Real> ZeroCircle<T> {
    /// `1 - s`
    pub fn eps(&self) -> LogPos<T> {
        complement_from_ell(self.ell)
    }

    /// The zero at angle `π(2l+1)/n`.
    pub fn zero_point(&self, l: &BigUint) -> Result<DiscPoint<T>> {
        let l = l % &self.n;
        let angle = RationalAngle::new((l << 1u8) + 1u8, &self.n << 1u8)?;
        DiscPoint::from_ell(self.ell, angle)
    }
}

/// One of the two products `f₀`, `f₁`.
#[derive(Clone, Debug)]
pub struct Product<T> {
    parity: u8,
    factors: Vec<Factor<T>>,
    mu: T,
    /// Growth ratio `τ` bounding exponents past the list, or `None` for a
    /// finite product.
    tail_ratio: Option<T>,
}

impl<T: Real> Product<T> {
    /// `f_j` from a construction: factors `k = 2m + j`, `m ≥ 1`, while `a_k`
    /// is defined.
    pub fn from_construction(c: &Construction<T>, parity: u8) -> Result<Self> {
        if parity > 1 {
            return Err(Error::Argument(format!("parity must be 0 or 1, got {parity}")));
        }
        let factors = (1..)
            .map(|m| 2 * m + parity as usize)
            .take_while(|&k| k <= c.ratio_count())
            .map(|k| Ok(Factor::new(k, c.log_a(k)?, c.n(k)?.clone())))
            .collect::<Result<Vec<_>>>()?;
        Self::checked(parity, factors, c.mu(), Some(c.tau()))
    }

    /// Product of the listed `(log a, n)` factors. With `tail_ratio = None`
    /// the product is finite; otherwise unlisted factors with exponents
    /// growing by at least `tail_ratio` are assumed to follow.
    pub fn new(parity: u8, factors: Vec<(T, BigUint)>, mu: T, tail_ratio: Option<T>) -> Result<Self> {
        let factors = factors.into_iter().map(|(la, n)| Factor::new(0, la, n)).collect();
        Self::checked(parity, factors, mu, tail_ratio)
    }

    /// Finite product with no tail.
    pub fn finite(factors: Vec<(T, BigUint)>) -> Result<Self> {
        let mu = factors.iter().map(|(la, _)| la.exp()).fold(T::one(), T::max);
        Self::new(0, factors, mu, None)
    }

    fn checked(parity: u8, factors: Vec<Factor<T>>, mu: T, tail_ratio: Option<T>) -> Result<Self> {
        for f in &factors {
            if !(f.log_a >= T::zero()) || !f.log_a.is_finite() {
                return Err(Error::Argument(format!("factor needs a ≥ 1, got log a = {}", f.log_a)));
            }
            if f.n.is_zero() {
                return Err(Error::Argument("factor exponent must be positive".into()));
            }
        }
        if factors.windows(2).any(|w| w[1].n <= w[0].n) {
            return Err(Error::Argument("factor exponents must be strictly increasing".into()));
        }
        Ok(Product { parity, factors, mu, tail_ratio })
    }

    pub fn parity(&self) -> u8 {
        self.parity
    }

    pub fn factors(&self) -> &[Factor<T>] {
        &self.factors
    }

    pub fn mu(&self) -> T {
        self.mu
    }

    /// `ln` of the omitted-tail majorant `Σ_{k>K} e^{-n_k ℓ} + G`, for each
    /// `K = 0..=len`, where `G` bounds the unlisted factors geometrically.
    fn ln_suffix_sums(&self, ell: LogPos<T>) -> Vec<T> {
        let len = self.factors.len();
        let mut out = vec![T::neg_infinity(); len + 1];
        let geometric = match (self.tail_ratio, self.factors.last()) {
            (None, _) => LogPos::zero(),
            (Some(tau), _) if !(tau > T::one()) => LogPos::infinity(),
            (Some(tau), Some(last)) => {
                let x = last.n_ell(ell);
                let gap = (tau - T::one()) * x;
                // e^{-x} q / (1 - q),  q = e^{-(τ-1)x}
                LogPos::from_ln(-tau * x - (-(-gap).exp_m1()).ln())
            }
            (Some(_), None) => LogPos::infinity(),
        };
        let mut acc = geometric;
        out[len] = acc.ln();
        for k in (0..len).rev() {
            acc = acc.add(LogPos::from_ln(-self.factors[k].n_ell(ell)));
            out[k] = acc.ln();
        }
        out
    }

    /// Smallest number of leading factors whose omitted remainder is
    /// certified below `tol`, i.e. `(1+μ) Σ_{k>K} e^{-n_k ℓ} < tol`.
    pub fn truncation_index(&self, ell: LogPos<T>, tol: T) -> Result<Truncation<T>> {
        if !(tol > T::zero() && tol < T::lit(0.5)) {
            return Err(Error::Argument(format!("tolerance must lie in (0, 1/2), got {tol}")));
        }
        let ln_scale = self.mu.ln_1p();
        let ln_tol = tol.ln();
        let sums = self.ln_suffix_sums(ell);
        for (used, &ln_s) in sums.iter().enumerate() {
            if ln_scale + ln_s < ln_tol {
                let s = (ln_scale + ln_s).exp();
                return Ok(Truncation { used, tail_log_bound: s / (T::one() - s) });
            }
        }
        Err(self.depth_error(tol))
    }

    /// Smallest log-radius the full factor list can certify at `tol`.
    pub fn min_certified_ell(&self, tol: T) -> Option<LogPos<T>> {
        let tau = self.tail_ratio?;
        let last = self.factors.last()?;
        if !(tau > T::one()) {
            return None;
        }
        let target = tol.ln() - self.mu.ln_1p();
        let ln_g = |ln_x: T| {
            let x = ln_x.exp();
            -tau * x - (-(-(tau - T::one()) * x).exp_m1()).ln()
        };
        let (mut lo, mut hi) = (T::lit(-60.0), T::lit(60.0));
        for _ in 0..200 {
            let mid = (lo + hi) * T::lit(0.5);
            if mid <= lo || mid >= hi {
                break;
            }
            if ln_g(mid) < target {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Some(LogPos::from_ln(hi - last.ln_n))
    }

    fn depth_error(&self, tol: T) -> Error {
        match self.min_certified_ell(tol) {
            Some(ell) => {
                let eps = complement_from_ell(ell);
                Error::InsufficientDepth { required_ln_eps: eps.ln().as_f64(), required_eps: eps.to_sci(6) }
            }
            None => Error::Degenerate("product tail cannot be bounded (τ ≤ 1 or no factors)".into()),
        }
    }

    pub(crate) fn prepare(&self, ell: LogPos<T>, used: usize) -> Vec<PreparedFactor<T>> {
        self.factors[..used]
            .iter()
            .filter(|f| f.log_a != T::zero())
            .map(|f| f.prepare(ell))
            .collect()
    }

    /// `log|f_j(z)|`, `-∞` exactly at zeros.
    pub fn log_modulus(&self, z: &DiscPoint<T>, tol: T) -> Result<T> {
        let trunc = self.truncation_index(z.ell, tol)?;
        Ok(self.log_modulus_truncated(z, trunc.used))
    }

    pub(crate) fn log_modulus_truncated(&self, z: &DiscPoint<T>, used: usize) -> T {
        self.factors[..used]
            .iter()
            .filter(|f| f.log_a != T::zero())
            .map(|f| {
                let (c, s) = z.angle.half_phase::<T>(&f.n);
                f.prepare(z.ell).log_abs(c, s)
            })
            .fold(T::zero(), |acc, v| acc + v)
    }

    /// Complex value `f_j(z)`, assembled in polar form from the factors.
    pub fn eval(&self, z: &DiscPoint<T>, tol: T) -> Result<Complex<T>> {
        let trunc = self.truncation_index(z.ell, tol)?;
        let (mut log_mod, mut arg) = (T::zero(), T::zero());
        for f in self.factors[..trunc.used].iter().filter(|f| f.log_a != T::zero()) {
            let (c, s) = z.angle.half_phase::<T>(&f.n);
            let prepared = f.prepare(z.ell);
            log_mod = log_mod + prepared.log_abs(c, s);
            arg = arg + prepared.arg(c, s);
        }
        Ok(Complex::from_polar(log_mod.exp(), arg))
    }

    /// Zero circles with `s ≤ r`, where `r = e^{-ℓ}`.
    pub fn zeros_up_to_ell(&self, ell: LogPos<T>) -> Vec<ZeroCircle<T>> {
        self.zero_circles().into_iter().filter(|z| z.ell >= ell).collect()
    }

    /// Zero circles with `s ≤ r`.
    pub fn zeros_up_to(&self, r: T) -> Result<Vec<ZeroCircle<T>>> {
        if !(r >= T::zero() && r < T::one()) {
            return Err(Error::Domain { what: "radius r", value: r.as_f64() });
        }
        if r == T::zero() {
            return Ok(Vec::new());
        }
        Ok(self.zeros_up_to_ell(LogPos::new(-r.ln())))
    }

    /// All zero circles of the listed factors, innermost first.
    pub fn zero_circles(&self) -> Vec<ZeroCircle<T>> {
        self.factors
            .iter()
            .filter(|f| f.log_a > T::zero())
            .map(|f| ZeroCircle { index: f.index, ell: f.zero_ell(), n: f.n.clone() })
            .collect()
    }
}

/// Exponent `n mod q` for grid sampling.
pub(crate) fn n_mod(n: &BigUint, q: u64) -> u64 {
    (n % q).to_u64().expect("residue fits")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(a: f64, n: u64) -> Product<f64> {
        Product::finite(vec![(a.ln(), BigUint::from(n))]).unwrap()
    }

    #[test]
    fn origin_gives_one() {
        let p = single(1024.0, 64);
        let z = DiscPoint::origin();
        assert_eq!(p.log_modulus(&z, 1e-10).unwrap(), 0.0);
        assert_eq!(p.eval(&z, 1e-10).unwrap(), Complex::new(1.0, 0.0));
        let z = DiscPoint::new(1.0, 0, 1).unwrap();
        assert_eq!(p.log_modulus(&z, 1e-10).unwrap(), 0.0);
    }

    #[test]
    fn exact_zero_of_a_single_factor() {
        let p = single(1024.0, 64);
        let circle = &p.zero_circles()[0];
        assert!((circle.ell.value() - 10.0 * 2f64.ln() / 64.0).abs() < 1e-16);
        let z = circle.zero_point(&BigUint::zero()).unwrap();
        assert_eq!(z.angle(), &RationalAngle::new(1u8, 128u8).unwrap());
        assert_eq!(p.log_modulus(&z, 1e-10).unwrap(), f64::NEG_INFINITY);
        let z = DiscPoint::from_eps(circle.eps(), RationalAngle::new(1u8, 128u8).unwrap()).unwrap();
        assert_eq!(p.log_modulus(&z, 1e-10).unwrap(), f64::NEG_INFINITY);
        // every zero on the circle
        for l in [1u32, 17, 63] {
            let z = circle.zero_point(&BigUint::from(l)).unwrap();
            assert_eq!(p.log_modulus(&z, 1e-10).unwrap(), f64::NEG_INFINITY, "l = {l}");
        }
    }

    #[test]
    fn positive_axis_closed_form() {
        let (a, n) = (1024.0f64, 64u64);
        let p = single(a, n);
        for eps in [0.5f64, 0.1, 0.01, 1e-3] {
            let z = DiscPoint::new(eps, 0, 1).unwrap();
            let x = (1.0 - eps).powi(n as i32);
            let expect = (1.0 + a * x).ln() - (1.0 + x / a).ln();
            let got = p.log_modulus(&z, 1e-10).unwrap();
            assert!((got - expect).abs() < 1e-13 * (1.0 + expect.abs()), "{eps}: {got} vs {expect}");
            let v = p.eval(&z, 1e-10).unwrap();
            assert!(v.im == 0.0 && v.re > 0.0);
        }
    }

    #[test]
    fn matches_direct_complex_evaluation() {
        let p = Product::finite(vec![(3f64.ln(), BigUint::from(3u8)), (7f64.ln(), BigUint::from(10u8))]).unwrap();
        for (eps, num, den) in [(0.3, 1u64, 7u64), (0.05, 5, 12), (0.2, 2, 3)] {
            let z = DiscPoint::new(eps, num, den).unwrap();
            let theta = 2.0 * std::f64::consts::PI * num as f64 / den as f64;
            let zc = Complex::from_polar(1.0 - eps, theta);
            let direct = [(3.0, 3), (7.0, 10)]
                .iter()
                .map(|&(a, n): &(f64, i32)| (Complex::new(1.0, 0.0) + zc.powi(n) * a) / (Complex::new(1.0, 0.0) + zc.powi(n) / a))
                .fold(Complex::new(1.0, 0.0), |acc, f| acc * f);
            let got = p.eval(&z, 1e-10).unwrap();
            assert!((got - direct).norm() < 1e-13 * direct.norm(), "{got} vs {direct}");
            assert!((p.log_modulus(&z, 1e-10).unwrap() - direct.norm().ln()).abs() < 1e-13);
        }
    }

    #[test]
    fn angle_reduction_is_exact_for_huge_exponents() {
        // n = 2^200 + 1, θ = 2π/3: nθ ≡ 2π(2^200 + 1)/3 and 2^200 ≡ 1 (mod 3)
        let n = (BigUint::one() << 200u32) + 1u8;
        let angle = RationalAngle::new(1u8, 3u8).unwrap();
        let (c, s): (f64, f64) = angle.half_phase(&n);
        // φ = 2π·2/3, φ/2 = 2π/3
        assert!((c - (-0.5)).abs() < 1e-15 && (s - 3f64.sqrt() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn truncation_behaviour() {
        let p = Product::new(0, vec![(1024f64.ln(), BigUint::from(64u8)), (1024f64.ln(), BigUint::from(65536u32))], 8192.0, Some(7.0)).unwrap();
        let half = LogPos::new(2f64.ln());
        let t = p.truncation_index(half, 1e-10).unwrap();
        assert!(t.used <= 2);
        assert!(p.truncation_index(half, 0.7).is_err());
        let deep = LogPos::new(1e-9);
        match p.truncation_index(deep, 1e-10) {
            Err(Error::InsufficientDepth { required_ln_eps, .. }) => assert!(required_ln_eps > 1e-9f64.ln()),
            other => panic!("expected depth error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_products() {
        assert!(Product::finite(vec![(-1.0f64, BigUint::from(2u8))]).is_err());
        assert!(Product::finite(vec![(1.0f64, BigUint::from(4u8)), (1.0, BigUint::from(4u8))]).is_err());
        assert!(RationalAngle::new(3u8, 3u8).is_err());
        assert!(RationalAngle::new(0u8, 0u8).is_err());
    }
}
