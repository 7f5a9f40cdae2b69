//! Scalar abstraction shared by every numeric routine in the crate.
//!
//! All floating-point code is written against [`Real`], so the same
//! algorithms run in `f32`, `f64`, or any extended-precision type that
//! implements the `num-traits` float traits (double-double, for instance).

use std::fmt::Debug;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar type usable by the evaluators.
pub trait Real: Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Send + Sync + 'static {
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 is representable")
    }

    #[inline]
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("usize is representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Real for T where T: Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Send + Sync + 'static {}

#[inline]
pub(crate) fn cplx<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn real<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

#[inline]
pub(crate) fn czero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

#[inline]
pub(crate) fn cone<T: Real>() -> Complex<T> {
    Complex::new(T::one(), T::zero())
}

/// `e^{2πi·num/den}` with exact values on the eighth roots of unity that are
/// Gaussian integers (±1, ±i).
pub fn root_of_unity<T: Real>(num: i64, den: i64) -> Complex<T> {
    assert!(den > 0, "root_of_unity: denominator must be positive");
    let r = num.rem_euclid(den);
    if r == 0 {
        return cone();
    }
    if 2 * r == den {
        return real(-T::one());
    }
    if 4 * r == den {
        return cplx(T::zero(), T::one());
    }
    if 4 * r == 3 * den {
        return cplx(T::zero(), -T::one());
    }
    let angle = T::TAU() * T::from_i64(r).unwrap() / T::from_i64(den).unwrap();
    let (s, c) = angle.sin_cos();
    cplx(c, s)
}

/// Kahan–Babuška (Neumaier) compensated accumulator for complex values.
#[derive(Debug, Clone, Copy)]
pub struct CompensatedSum<T: Real> {
    sum: Complex<T>,
    comp: Complex<T>,
}

impl<T: Real> Default for CompensatedSum<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Real> CompensatedSum<T> {
    pub fn new() -> Self {
        Self { sum: czero(), comp: czero() }
    }

    #[inline]
    pub fn add(&mut self, x: Complex<T>) {
        let (re, cre) = neumaier(self.sum.re, self.comp.re, x.re);
        let (im, cim) = neumaier(self.sum.im, self.comp.im, x.im);
        self.sum = cplx(re, im);
        self.comp = cplx(cre, cim);
    }

    #[inline]
    pub fn value(&self) -> Complex<T> {
        self.sum + self.comp
    }
}

#[inline]
fn neumaier<T: Real>(sum: T, comp: T, x: T) -> (T, T) {
    let t = sum + x;
    let c = if sum.abs() >= x.abs() { (sum - t) + x } else { (x - t) + sum };
    (t, comp + c)
}
