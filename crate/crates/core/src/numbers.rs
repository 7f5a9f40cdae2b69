//! Exact special numbers: Bernoulli numbers, Eulerian polynomials and their
//! zeros, and the normalised rising factorial `(s)_k = s(s+1)⋯(s+k)/(k+1)!`.

use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::scalar::{cone, czero, real, Real};

/// Exact rational number (always kept in lowest terms, positive denominator).
pub type Rational = BigRational;

fn binomial(n: usize, k: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

fn bernoulli_cache() -> &'static Mutex<Vec<Rational>> {
    static CACHE: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(vec![Rational::one()]))
}

/// Bernoulli numbers `B_0..=B_n`, with `B_1 = -1/2`.
pub fn bernoulli_table(n: usize) -> Vec<Rational> {
    let mut cache = bernoulli_cache().lock().expect("bernoulli cache poisoned");
    while cache.len() <= n {
        let m = cache.len();
        // sum_{k=0}^{m} C(m+1, k) B_k = 0
        let mut acc = Rational::zero();
        for (k, b) in cache.iter().enumerate() {
            if !b.is_zero() {
                acc += Rational::from_integer(binomial(m + 1, k)) * b;
            }
        }
        let b_m = -acc / Rational::from_integer(BigInt::from(m + 1));
        cache.push(b_m);
    }
    cache[..=n].to_vec()
}

/// The Bernoulli number `B_n` (convention `B_1 = -1/2`).
pub fn bernoulli(n: usize) -> Rational {
    bernoulli_table(n).pop().expect("table is non-empty")
}

/// Polynomial with arbitrary-precision integer coefficients, index = degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPolynomial(Vec<BigInt>);

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(BigInt::zero());
        }
        Self(coeffs)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.0.len() == 1 && self.0[0].is_zero()
    }

    pub fn coefficient_sum(&self) -> BigInt {
        self.0.iter().sum()
    }

    /// Sum of absolute values of the coefficients.
    pub fn coefficient_norm(&self) -> f64 {
        self.0.iter().map(|c| c.abs().to_f64().unwrap_or(f64::INFINITY)).sum()
    }

    pub fn derivative(&self) -> Self {
        if self.0.len() <= 1 {
            return Self::new(vec![]);
        }
        Self::new(self.0.iter().enumerate().skip(1).map(|(k, c)| c * BigInt::from(k)).collect())
    }

    /// Horner evaluation at a complex point. Coefficients are rounded to `T`.
    pub fn eval<T: Real>(&self, z: Complex<T>) -> Complex<T> {
        let mut acc = czero::<T>();
        for c in self.0.iter().rev() {
            acc = acc * z + real(big_to_real::<T>(c));
        }
        acc
    }

    /// `|p(z)| / Σ |c_k| |z|^k`, the value relative to its evaluation scale.
    pub fn relative_abs_at(&self, z: Complex<f64>) -> f64 {
        let r = z.norm();
        let scale = self.0.iter().rev().fold(0.0f64, |acc, c| acc * r + big_to_real::<f64>(c).abs());
        if scale == 0.0 {
            return 0.0;
        }
        self.eval(z).norm() / scale
    }

    /// Exact sign of the polynomial at a finite `f64`.
    pub fn sign_at(&self, x: f64) -> i8 {
        assert!(x.is_finite(), "finite abscissa");
        // x = m·2^e exactly; for e < 0 evaluate the homogenized 2^{-e·d}·p(x)
        let (mant, exp, sign) = num_traits::float::FloatCore::integer_decode(x);
        let m = BigInt::from(mant) * BigInt::from(sign);
        let mut acc = BigInt::zero();
        if exp >= 0 {
            let x = m << exp as usize;
            for c in self.0.iter().rev() {
                acc = acc * &x + c;
            }
        } else {
            let shift = (-exp) as usize;
            let d = self.degree();
            for (k, c) in self.0.iter().enumerate().rev() {
                acc = acc * &m + (c << (shift * (d - k)));
            }
        }
        match acc.sign() {
            num_bigint::Sign::Minus => -1,
            num_bigint::Sign::NoSign => 0,
            num_bigint::Sign::Plus => 1,
        }
    }
}

/// Converts an exact integer to `T` through `f64`.
///
/// The value is split into a leading `f64` and its remainder so types wider
/// than `f64` keep about 106 bits.
pub(crate) fn big_to_real<T: Real>(c: &BigInt) -> T {
    let hi = c.to_f64().unwrap_or(f64::INFINITY);
    if !hi.is_finite() {
        return T::from_f64(hi).unwrap_or_else(T::infinity);
    }
    let rest = c - BigInt::from_f64(hi).unwrap_or_else(BigInt::zero);
    T::of(hi) + T::of(rest.to_f64().unwrap_or(0.0))
}

/// Converts an exact rational to `T`.
pub fn rational_to_real<T: Real>(q: &Rational) -> T {
    big_to_real::<T>(q.numer()) / big_to_real::<T>(q.denom())
}

fn eulerian_cache() -> &'static Mutex<Vec<IntPolynomial>> {
    static CACHE: OnceLock<Mutex<Vec<IntPolynomial>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(vec![IntPolynomial::new(vec![BigInt::one()])]))
}

fn eulerian_step(a: &[BigInt], m: usize) -> IntPolynomial {
    let mut next = vec![BigInt::zero(); a.len() + 2];
    // t(1 - t) A'
    for (k, c) in a.iter().enumerate().skip(1) {
        let d = c * BigInt::from(k);
        next[k] += &d;
        next[k + 1] -= d;
    }
    // (1 + (m-1) t) A
    for (k, c) in a.iter().enumerate() {
        next[k] += c;
        next[k + 1] += c * BigInt::from(m - 1);
    }
    IntPolynomial::new(next)
}

/// All Eulerian polynomials `A_0..=A_n` (cached).
pub fn eulerian_table(n: usize) -> Vec<IntPolynomial> {
    let mut cache = eulerian_cache().lock().unwrap_or_else(|e| e.into_inner());
    while cache.len() <= n {
        let m = cache.len();
        let next = eulerian_step(cache[m - 1].coeffs(), m);
        cache.push(next);
    }
    cache[..=n].to_vec()
}

/// Eulerian polynomial `A_n(t)` from `A_n = t(1-t)A_{n-1}' + (1+(n-1)t)A_{n-1}`, `A_0 = 1`.
pub fn eulerian_poly(n: usize) -> IntPolynomial {
    eulerian_table(n).pop().expect("table is non-empty")
}

/// Zeros of `A_n` in ascending order, isolated by exact-sign bisection.
///
/// Brackets come from interlacing with the zeros of `A_{n-1}`; the leftmost
/// bracket is closed with a Cauchy bound and the rightmost with `t = 0`.
pub fn eulerian_zeros(n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("A_{n} has no zeros")));
    }
    static ZEROS: OnceLock<Mutex<Vec<Vec<f64>>>> = OnceLock::new();
    let mut cache = ZEROS.get_or_init(|| Mutex::new(vec![Vec::new(), Vec::new()])).lock().unwrap_or_else(|e| e.into_inner());
    while cache.len() <= n {
        let m = cache.len();
        let zeros = zeros_from_interlacing(m, &cache[m - 1])?;
        cache.push(zeros);
    }
    Ok(cache[n].clone())
}

fn zeros_from_interlacing(m: usize, prev: &[f64]) -> Result<Vec<f64>> {
    let p = eulerian_poly(m);
    let lead = p.coeffs().last().unwrap().abs().to_f64().unwrap();
    let cauchy = 1.0
        + p.coeffs()
            .iter()
            .map(|c| c.abs().to_f64().unwrap() / lead)
            .fold(0.0, f64::max);
    let mut edges = Vec::with_capacity(prev.len() + 2);
    edges.push(-2.0 * cauchy);
    edges.extend_from_slice(prev);
    edges.push(0.0);
    let mut zeros = Vec::with_capacity(m - 1);
    for w in edges.windows(2) {
        zeros.push(bisect_zero(&p, w[0], w[1]).ok_or(Error::BracketFailure { n: m })?);
    }
    Ok(zeros)
}

fn bisect_zero(p: &IntPolynomial, mut lo: f64, mut hi: f64) -> Option<f64> {
    let mut s_lo = p.sign_at(lo);
    let s_hi = p.sign_at(hi);
    if s_lo == 0 {
        return Some(lo);
    }
    if s_hi == 0 {
        return Some(hi);
    }
    if s_lo == s_hi {
        return None;
    }
    for _ in 0..4000 {
        let mid = if lo < 0.0 && hi < 0.0 && lo / hi > 4.0 {
            -(lo * hi).sqrt()
        } else {
            lo + 0.5 * (hi - lo)
        };
        if mid <= lo || mid >= hi || (hi - lo) <= 1e-15 * lo.abs().max(hi.abs()) {
            break;
        }
        let s = p.sign_at(mid);
        if s == 0 {
            return Some(mid);
        }
        if s == s_lo {
            lo = mid;
            s_lo = s;
        } else {
            hi = mid;
        }
    }
    Some(lo + 0.5 * (hi - lo))
}

/// Normalised rising factorial `s(s+1)⋯(s+k)/(k+1)!`.
pub fn poch<T: Real>(s: Complex<T>, k: usize) -> Complex<T> {
    let mut acc = cone::<T>();
    for m in 0..=k {
        acc = acc * (s + real(T::of_usize(m))) / T::of_usize(m + 1);
    }
    acc
}

/// Real-valued `(x)_k` for a real `x`, used for absolute-value majorants.
pub(crate) fn poch_real(x: f64, k: usize) -> f64 {
    let mut acc = 1.0;
    for m in 0..=k {
        acc *= (x + m as f64) / (m + 1) as f64;
    }
    acc
}
