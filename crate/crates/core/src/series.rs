//! Direct summation inside the convergence domain `U_r`, with certified
//! truncation bounds.
//!
//! All series are summed in one ascending pass over `n`, keeping one running
//! accumulator per depth level, so a depth-`r` sum truncated at `n_1 ≤ N`
//! costs `O(rN)`. The discarded tail `n_1 > N` is bounded through the
//! multiple-zeta majorant `Π n_i^{-Re s_i}` (valid because every coefficient
//! has modulus at most one after the partial-product rescaling), first
//! bounding the inner sums by `C·n^a·(1 + ln n)^b` and then comparing the
//! outer sum with an integral.

use std::ops::Range;

use num_complex::Complex;

use crate::characters::{AdditiveTuple, DirichletTuple};
use crate::error::{Error, Result};
use crate::scalar::{cone, cplx, czero, CompensatedSum, Real};

/// Default cap on the outer truncation index.
pub const DEFAULT_N_CAP: u64 = 1_000_000;

/// A point `(s_1, …, s_r) ∈ ℂ^r`.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalPoint<T: Real> {
    coords: Vec<Complex<T>>,
}

impl<T: Real> EvalPoint<T> {
    pub fn new(coords: Vec<Complex<T>>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidInput("a point needs at least one coordinate".into()));
        }
        Ok(Self { coords })
    }

    pub fn from_reals(xs: &[f64]) -> Result<Self> {
        Self::new(xs.iter().map(|&x| cplx(T::of(x), T::zero())).collect())
    }

    pub fn depth(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Complex<T>] {
        &self.coords
    }

    pub fn s(&self, i: usize) -> Complex<T> {
        self.coords[i - 1]
    }

    /// `s_1 + ⋯ + s_i`.
    pub fn prefix_sum(&self, i: usize) -> Complex<T> {
        self.coords[..i].iter().fold(czero(), |acc, &z| acc + z)
    }

    /// `(s_1 + shift, s_2, …, s_r)`.
    pub fn shift_first(&self, shift: Complex<T>) -> Self {
        let mut coords = self.coords.clone();
        coords[0] = coords[0] + shift;
        Self { coords }
    }

    pub fn conj(&self) -> Self {
        Self { coords: self.coords.iter().map(|z| z.conj()).collect() }
    }

    pub(crate) fn sigmas(&self) -> Vec<f64> {
        self.coords.iter().map(|z| z.re.to_f64_lossy()).collect()
    }
}

/// Value with an absolute error bound and the number of outer terms summed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult<T: Real> {
    pub value: Complex<T>,
    pub abs_error_bound: f64,
    pub terms_used: u64,
}

/// `Re(s_1 + ⋯ + s_i) > i + margin` for every `i`.
pub fn in_u_r<T: Real>(p: &EvalPoint<T>, margin: f64) -> bool {
    let mut acc = 0.0;
    p.sigmas().iter().enumerate().all(|(i, &x)| {
        acc += x;
        acc > (i + 1) as f64 + margin
    })
}

/// `Re(s_1 + ⋯ + s_i) > i - m` for every `i`.
pub fn in_u_r_m<T: Real>(p: &EvalPoint<T>, m: u32) -> bool {
    in_u_r(p, -(m as f64))
}

/// Smallest margin by which the point sits inside `U_r` (negative outside).
pub fn u_r_margin<T: Real>(p: &EvalPoint<T>) -> f64 {
    let mut acc = 0.0;
    let mut best = f64::INFINITY;
    for (i, x) in p.sigmas().iter().enumerate() {
        acc += x;
        best = best.min(acc - (i + 1) as f64);
    }
    best
}

const LOG_SLACK: f64 = 0.3;

/// Bound `h(n) ≤ c·n^a·(1 + ln n)^b` on the inner sums
/// `h(n) = Σ_{n > n_2 > ⋯ > n_r > 0} Π n_i^{-σ_i}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct InnerBound {
    pub c: f64,
    pub a: f64,
    pub b: u32,
}

impl InnerBound {
    /// `inner_sigmas = (σ_2, …, σ_r)`.
    pub fn new(inner_sigmas: &[f64]) -> Self {
        let mut bound = InnerBound { c: 1.0, a: 0.0, b: 0 };
        for &sigma in inner_sigmas.iter().rev() {
            let e = bound.a - sigma;
            bound = if e >= -1.0 + LOG_SLACK {
                InnerBound { c: bound.c / (e + 1.0), a: e + 1.0, b: bound.b }
            } else if e >= -1.0 {
                InnerBound { c: bound.c, a: e + 1.0, b: bound.b + 1 }
            } else if e > -1.0 - LOG_SLACK {
                InnerBound { c: bound.c, a: 0.0, b: bound.b + 1 }
            } else {
                InnerBound { c: bound.c * (1.0 + 1.0 / (-e - 1.0)), a: 0.0, b: bound.b }
            };
        }
        bound
    }

    /// Bound on `Σ_{n > N} n^{-σ_1} h(n)`; infinite when it does not apply.
    pub fn tail(&self, sigma1: f64, n: u64) -> f64 {
        let alpha = sigma1 - self.a;
        if alpha <= 1.0 || n == 0 {
            return f64::INFINITY;
        }
        let nf = n as f64;
        let log_n = 1.0 + nf.ln();
        // the summand x^{-α}(1 + ln x)^b must be decreasing beyond N
        if alpha * log_n < self.b as f64 {
            return f64::INFINITY;
        }
        let mut sum = 0.0;
        let mut falling = 1.0;
        for k in 0..=self.b {
            if k > 0 {
                falling *= (self.b - k + 1) as f64;
            }
            sum += falling * log_n.powi((self.b - k) as i32) / (alpha - 1.0).powi(k as i32 + 1);
        }
        self.c * nf.powf(1.0 - alpha) * sum
    }
}

/// Coefficient structure of a nested sum
/// `U_i(n) = d_i U_i(n-1) + w_i(n) n^{-s_i} U_{i+1}(n-1)`, `U_{r+1}(n) = d_{r+1}^n`.
pub(crate) struct NestedWeights<'a, T: Real> {
    /// `d_1..d_{r+1}`.
    pub decay: Vec<Complex<T>>,
    /// `w_i(n)` for level `i` (0-based) and index `n`.
    pub weight: Box<dyn Fn(usize, u64) -> Complex<T> + Send + Sync + 'a>,
}

impl<'a, T: Real> NestedWeights<'a, T> {
    pub fn additive(tuple: &AdditiveTuple<T>) -> Self {
        let g = tuple.partial_products();
        let mut decay = Vec::with_capacity(g.len() + 1);
        decay.push(cone());
        decay.extend_from_slice(&g);
        Self { decay, weight: Box::new(move |i, _| g[i]) }
    }

    pub fn dirichlet(tuple: &'a DirichletTuple<T>) -> Self {
        Self {
            decay: vec![cone(); tuple.depth() + 1],
            weight: Box::new(move |i, n| tuple.chars()[i].at(n)),
        }
    }

    pub fn congruences(residues: Vec<u64>, moduli: Vec<u64>) -> Self {
        let r = moduli.len();
        Self {
            decay: vec![cone(); r + 1],
            weight: Box::new(move |i, n| if n % moduli[i] == residues[i] % moduli[i] { cone() } else { czero() }),
        }
    }
}

/// Values of one shift family `S(s_1 + j, s_2, …)` for `j` in a range.
#[derive(Debug, Clone)]
pub(crate) struct FamilyResult<T: Real> {
    pub values: Vec<Complex<T>>,
    /// Truncation bound per shift.
    pub tail_bounds: Vec<f64>,
    /// Rounding estimate per shift.
    pub rounding: Vec<f64>,
    /// Certified absolute-value majorant of the first member.
    pub majorant_first: f64,
    pub terms: u64,
}

/// Smallest `N ≥ n_min` with `Σ_j weights_j · tail_j(N) ≤ budget`.
pub(crate) fn choose_truncation(
    inner: &InnerBound,
    sigma1: f64,
    shifts: &Range<usize>,
    weights: &[f64],
    budget: f64,
    n_min: u64,
    cap: u64,
) -> std::result::Result<u64, u64> {
    let total = |n: u64| -> f64 {
        shifts
            .clone()
            .zip(weights)
            .map(|(j, &w)| if w == 0.0 { 0.0 } else { w * inner.tail(sigma1 + j as f64, n) })
            .sum()
    };
    let mut hi = n_min.max(16);
    while total(hi) > budget {
        if hi > (1u64 << 60) {
            return Err(u64::MAX);
        }
        hi *= 2;
    }
    if hi > cap {
        if total(cap) > budget {
            return Err(hi);
        }
        hi = cap;
    }
    let mut lo = (hi / 2).max(n_min);
    if lo == hi || total(lo) <= budget {
        return Ok(lo);
    }
    while hi - lo > 1 && hi - lo > hi / 64 {
        let mid = lo + (hi - lo) / 2;
        if total(mid) <= budget {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// One pass over `n ≤ n_max` summing the family `j ∈ shifts`,
/// `Σ_{n_1 ≥ min_n1} w_1(n_1) n_1^{-s_1-j} U_2(n_1 - 1)`.
pub(crate) fn nested_family<T: Real>(
    w: &NestedWeights<'_, T>,
    p: &EvalPoint<T>,
    shifts: &Range<usize>,
    n_max: u64,
    min_n1: u64,
) -> (Vec<Complex<T>>, f64, f64) {
    let r = p.depth();
    let s = p.coords();
    let sig: Vec<T> = s.iter().map(|z| z.re).collect();
    let tau: Vec<T> = s.iter().map(|z| z.im).collect();
    // u[k] holds U_{k+2}(n-1), k = 0..r-1 (so u[r-1] = U_{r+1})
    let mut u: Vec<Complex<T>> = vec![czero(); r];
    u[r - 1] = cone();
    // majorant counterpart with |coefficients| ≤ 1
    let mut m: Vec<f64> = vec![0.0; r];
    m[r - 1] = 1.0;
    let first_shift = shifts.start;
    let count = shifts.len();
    let mut acc: Vec<CompensatedSum<T>> = vec![CompensatedSum::new(); count];
    let mut abs_first = 0.0f64;
    let mut abs_outer = 0.0f64;
    let tiny = T::min_positive_value().sqrt();
    for n in 1..=n_max {
        let ln = T::of_usize(n as usize).ln();
        let ln64 = (n as f64).ln();
        // outer level (uses U_2(n-1))
        if n >= min_n1 {
            let wt = (w.weight)(0, n);
            if wt != czero() {
                let sh = T::of_usize(first_shift);
                let mag = (-(sig[0] + sh) * ln).exp();
                let (sn, cs) = (-tau[0] * ln).sin_cos();
                let mut term = wt * u[0] * cplx(mag * cs, mag * sn);
                let inv_n = T::one() / T::of_usize(n as usize);
                for a in acc.iter_mut() {
                    a.add(term);
                    term = term * inv_n;
                    if term.norm() < tiny * tiny {
                        break;
                    }
                }
                let w_abs = (-(sig[0].to_f64_lossy() + first_shift as f64) * ln64).exp();
                abs_first += w_abs * m[0];
                abs_outer += w_abs * (wt * u[0]).norm().to_f64_lossy();
            }
        }
        // inner levels, ascending so each reads U_{i+1}(n-1) before it changes
        for k in 0..r - 1 {
            let level = k + 1;
            let wt = (w.weight)(level, n);
            let d = w.decay[level];
            let mut next = d * u[k];
            let mut next_m = m[k];
            if wt != czero() {
                let mag = (-sig[level] * ln).exp();
                let (sn, cs) = (-tau[level] * ln).sin_cos();
                next = next + wt * cplx(mag * cs, mag * sn) * u[k + 1];
                next_m += (-sig[level].to_f64_lossy() * ln64).exp() * m[k + 1];
            }
            u[k] = next;
            m[k] = next_m;
        }
        u[r - 1] = u[r - 1] * w.decay[r];
    }
    let values = acc.iter().map(CompensatedSum::value).collect();
    (values, abs_first, abs_outer)
}

pub(crate) fn family<T: Real>(
    w: &NestedWeights<'_, T>,
    p: &EvalPoint<T>,
    shifts: Range<usize>,
    weights: &[f64],
    budget: f64,
    min_n1: u64,
    cap: u64,
) -> Result<FamilyResult<T>> {
    let sig = p.sigmas();
    let inner = InnerBound::new(&sig[1..]);
    let n_min = min_n1.max(p.depth() as u64);
    let n = choose_truncation(&inner, sig[0], &shifts, weights, budget, n_min, cap).map_err(|needed| {
        Error::TolTooTight { tol: budget, needed, cap }
    })?;
    let (values, abs_first, _) = nested_family(w, p, &shifts, n, min_n1);
    let tail_bounds: Vec<f64> = shifts.clone().map(|j| inner.tail(sig[0] + j as f64, n)).collect();
    let eps = T::epsilon().to_f64_lossy();
    let majorant_first = abs_first + tail_bounds[0];
    let rounding = shifts
        .clone()
        .map(|j| 8.0 * eps * majorant_first * (-(j as f64 - shifts.start as f64) * 2f64.ln()).exp())
        .collect();
    Ok(FamilyResult { values, tail_bounds, rounding, majorant_first, terms: n })
}

fn single<T: Real>(w: &NestedWeights<'_, T>, p: &EvalPoint<T>, tol: f64, min_n1: u64, cap: u64) -> Result<EvalResult<T>> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("tolerance must be positive, got {tol}")));
    }
    if !in_u_r(p, 0.0) {
        return Err(Error::NotInConvergenceRegion { margin: u_r_margin(p) });
    }
    let fam = family(w, p, 0..1, &[1.0], tol, min_n1, cap)?;
    Ok(EvalResult {
        value: fam.values[0],
        abs_error_bound: fam.tail_bounds[0] + fam.rounding[0],
        terms_used: fam.terms,
    })
}

/// Options for direct summation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectOptions {
    pub n_cap: u64,
}

impl Default for DirectOptions {
    fn default() -> Self {
        Self { n_cap: DEFAULT_N_CAP }
    }
}

fn check_depth<T: Real>(r: usize, p: &EvalPoint<T>) -> Result<()> {
    if r != p.depth() {
        return Err(Error::InvalidInput(format!("tuple has depth {r} but the point has {} coordinates", p.depth())));
    }
    Ok(())
}

/// `L_r(f_1..f_r; s)` by direct summation; `tol` bounds the discarded tail.
pub fn eval_additive_direct<T: Real>(tuple: &AdditiveTuple<T>, p: &EvalPoint<T>, tol: f64) -> Result<EvalResult<T>> {
    eval_additive_direct_with(tuple, p, tol, &DirectOptions::default())
}

pub fn eval_additive_direct_with<T: Real>(
    tuple: &AdditiveTuple<T>,
    p: &EvalPoint<T>,
    tol: f64,
    opts: &DirectOptions,
) -> Result<EvalResult<T>> {
    check_depth(tuple.depth(), p)?;
    single(&NestedWeights::additive(tuple), p, tol, 1, opts.n_cap)
}

/// `L_r(s; χ_1..χ_r)` by direct summation.
pub fn eval_dirichlet_direct<T: Real>(tuple: &DirichletTuple<T>, p: &EvalPoint<T>, tol: f64) -> Result<EvalResult<T>> {
    eval_dirichlet_direct_with(tuple, p, tol, &DirectOptions::default())
}

pub fn eval_dirichlet_direct_with<T: Real>(
    tuple: &DirichletTuple<T>,
    p: &EvalPoint<T>,
    tol: f64,
    opts: &DirectOptions,
) -> Result<EvalResult<T>> {
    check_depth(tuple.depth(), p)?;
    single(&NestedWeights::dirichlet(tuple), p, tol, 1, opts.n_cap)
}

/// `Φ_r(s; a)`: the multiple zeta sum restricted to `n_i ≡ a_i (mod N_i)`.
pub fn eval_phi_direct<T: Real>(p: &EvalPoint<T>, residues: &[u64], moduli: &[u64], tol: f64) -> Result<EvalResult<T>> {
    check_depth(residues.len(), p)?;
    check_depth(moduli.len(), p)?;
    if moduli.iter().any(|&n| n == 0) {
        return Err(Error::InvalidInput("moduli must be positive".into()));
    }
    single(
        &NestedWeights::congruences(residues.to_vec(), moduli.to_vec()),
        p,
        tol,
        1,
        DEFAULT_N_CAP,
    )
}

/// `Ψ_r(s; b)`: the additive sum with `f_j(1) = e^{2πi b_j/N_j}`.
pub fn eval_psi_direct<T: Real>(p: &EvalPoint<T>, frequencies: &[i64], moduli: &[u64], tol: f64) -> Result<EvalResult<T>> {
    check_depth(frequencies.len(), p)?;
    check_depth(moduli.len(), p)?;
    let chars = frequencies
        .iter()
        .zip(moduli)
        .map(|(&b, &n)| crate::characters::AdditiveCharacter::root(b, n as i64))
        .collect::<Result<Vec<_>>>()?;
    let tuple = AdditiveTuple::new(chars)?;
    eval_additive_direct(&tuple, p, tol)
}

/// Additive sum over `n_1 ≥ 2` only; for depth `≥ 2` this is the full sum.
pub(crate) fn additive_family<T: Real>(
    tuple: &AdditiveTuple<T>,
    p: &EvalPoint<T>,
    shifts: Range<usize>,
    weights: &[f64],
    budget: f64,
    cap: u64,
) -> Result<FamilyResult<T>> {
    family(&NestedWeights::additive(tuple), p, shifts, weights, budget, 2, cap)
}
