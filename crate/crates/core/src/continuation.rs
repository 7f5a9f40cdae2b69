//! Meromorphic continuation through the translation formulas.
//!
//! Write `V(k) = S_r(s_1 + k, s_2, …, s_r)` where `S_r` is the series restricted
//! to `n_1 ≥ 2` (equal to `L_r` for `r ≥ 2`, and to `L_1 - f_1(1)` for `r = 1`).
//! The translation formulas say `A V = λ` with `A = A_1(s_1 - 1)` when
//! `f_1(1) = 1` and `A = A_2(f_1; s_1)` otherwise, where `λ` collects the
//! depth-`(r-1)` values. Splitting indices at `q` gives
//! `V(0) = Σ_{k<q} B_{0k} λ_k - Σ_{j≥q} (B^{II} A^{IJ})_{0j} V(j)`,
//! and the `V(j)` with `j ≥ q` are summed directly because the shifted
//! point lies inside `U_r`.

use num_complex::Complex;

use crate::characters::{is_one, AdditiveTuple, DirichletTuple};
use crate::error::{Error, Result};
use crate::numbers::{poch, poch_real};
use crate::operator::{b1_first_row, b2_first_row, build_a1, build_a2};
use crate::scalar::{cone, czero, real, Real};
use crate::series::{
    additive_family, choose_truncation, eval_dirichlet_direct_with, in_u_r, u_r_margin, DirectOptions, EvalPoint,
    EvalResult, InnerBound, DEFAULT_N_CAP,
};

/// Largest `q` used on the `f_1(1) ≠ 1` branch.
pub const Q_CAP_NONTRIVIAL: usize = 40;

/// Tuning for [`continue_eval`] and [`evaluate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuationConfig {
    /// Minimum truncation depth; raised until the shifted point clears `direct_margin`.
    pub q: Option<usize>,
    /// Minimum number of retained `J` columns.
    pub k: usize,
    /// Column limit before giving up with `TailNotCertified`.
    pub k_max: usize,
    pub tol: f64,
    /// Margin inside `U_r` required of `(s_1 + q, s_2, …)`.
    pub direct_margin: f64,
    /// Refuse points closer than this to a possible polar hyperplane.
    pub pole_eps: f64,
    /// Cap on the outer index of every direct summation.
    pub n_cap: u64,
    /// Largest outer index for which [`evaluate`] prefers plain direct summation.
    pub direct_budget: u64,
}

impl Default for ContinuationConfig {
    fn default() -> Self {
        Self {
            q: None,
            k: 20,
            k_max: 512,
            tol: 1e-10,
            direct_margin: 3.0,
            pole_eps: 1e-6,
            n_cap: DEFAULT_N_CAP,
            direct_budget: 200_000,
        }
    }
}

impl ContinuationConfig {
    pub fn with_tol(tol: f64) -> Self {
        Self { tol, ..Self::default() }
    }

    /// Rejects a non-positive tolerance and inconsistent size bounds.
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) || self.k == 0 || self.k_max < self.k || self.q == Some(0) {
            return Err(Error::InvalidInput(format!("invalid continuation config {self:?}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
struct Approx<T: Real> {
    value: Complex<T>,
    err: f64,
    /// Part of `err` that is certified; rounding estimates excluded.
    cert: f64,
    terms: u64,
}

impl<T: Real> Approx<T> {
    fn exact(value: Complex<T>) -> Self {
        Self { value, err: 0.0, cert: 0.0, terms: 0 }
    }

    /// Inner levels only report their error; the requested tolerance is
    /// enforced once, on the final value, rounding estimate included.
    fn result(self, tol: f64) -> Result<EvalResult<T>> {
        if self.cert > tol || self.err > tol {
            return Err(Error::TailNotCertified { achieved: self.err.max(self.cert), requested: tol });
        }
        Ok(EvalResult { value: self.value, abs_error_bound: self.err, terms_used: self.terms })
    }
}

/// `NearPole` if `p` lies within `eps` of a possible polar hyperplane of the tuple.
pub(crate) fn check_pole_proximity<T: Real>(tuple: &AdditiveTuple<T>, p: &EvalPoint<T>, eps: f64) -> Result<()> {
    for (j, &i) in tuple.trivial_indices().iter().enumerate() {
        let w = p.prefix_sum(i);
        let (re, im) = (w.re.to_f64_lossy(), w.im.to_f64_lossy());
        let level = re.round() as i64;
        let allowed = if i == 1 { level == 1 } else { level <= (j + 1) as i64 };
        let distance = (re - level as f64).hypot(im);
        if allowed && distance < eps {
            return Err(Error::NearPole { index: i, level, distance });
        }
    }
    Ok(())
}

fn check_depth<T: Real>(tuple: &AdditiveTuple<T>, p: &EvalPoint<T>) -> Result<()> {
    if tuple.depth() != p.depth() {
        return Err(Error::InvalidInput(format!(
            "tuple has depth {} but the point has {} coordinates",
            tuple.depth(),
            p.depth()
        )));
    }
    Ok(())
}

/// `L_r` by the continuation engine, even when `p ∈ U_r`.
pub fn continue_eval<T: Real>(tuple: &AdditiveTuple<T>, p: &EvalPoint<T>, cfg: &ContinuationConfig) -> Result<EvalResult<T>> {
    cfg.validate()?;
    check_depth(tuple, p)?;
    check_pole_proximity(tuple, p, cfg.pole_eps)?;
    let s = continue_s(tuple, p, cfg, cfg.tol)?;
    with_first_term(tuple, s).result(cfg.tol)
}

/// `L_r` anywhere off the polar hyperplanes: direct summation when it is
/// cheap, continuation otherwise.
pub fn evaluate<T: Real>(tuple: &AdditiveTuple<T>, p: &EvalPoint<T>, cfg: &ContinuationConfig) -> Result<EvalResult<T>> {
    cfg.validate()?;
    check_depth(tuple, p)?;
    eval_l(tuple, p, cfg, cfg.tol)?.result(cfg.tol)
}

fn with_first_term<T: Real>(tuple: &AdditiveTuple<T>, s: Approx<T>) -> Approx<T> {
    if tuple.depth() == 1 {
        Approx { value: s.value + tuple.f(1), ..s }
    } else {
        s
    }
}

fn eval_l<T: Real>(tuple: &AdditiveTuple<T>, p: &EvalPoint<T>, cfg: &ContinuationConfig, tol: f64) -> Result<Approx<T>> {
    check_pole_proximity(tuple, p, cfg.pole_eps)?;
    Ok(with_first_term(tuple, eval_s(tuple, p, cfg, tol)?))
}

fn eval_s<T: Real>(tuple: &AdditiveTuple<T>, p: &EvalPoint<T>, cfg: &ContinuationConfig, tol: f64) -> Result<Approx<T>> {
    if in_u_r(p, 0.0) {
        let sig = p.sigmas();
        let inner = InnerBound::new(&sig[1..]);
        let cap = cfg.direct_budget.min(cfg.n_cap);
        if choose_truncation(&inner, sig[0], &(0..1), &[1.0], tol, 2, cap).is_ok() {
            let fam = additive_family(tuple, p, 0..1, &[1.0], tol, cap)?;
            return Ok(Approx {
                value: fam.values[0],
                err: fam.tail_bounds[0] + fam.rounding[0],
                cert: fam.tail_bounds[0],
                terms: fam.terms,
            });
        }
    }
    continue_s(tuple, p, cfg, tol)
}

/// Smallest `q ≥ q_min` with `(s_1 + q, s_2, …) ∈ U_r` at the given margin.
fn choose_q<T: Real>(p: &EvalPoint<T>, q_min: usize, margin: f64) -> usize {
    let mut acc = 0.0;
    let mut need = 1i64;
    for (i, x) in p.sigmas().iter().enumerate() {
        acc += x;
        need = need.max(((i + 1) as f64 + margin - acc).floor() as i64 + 1);
    }
    (need.max(1) as usize).max(q_min)
}

/// Bound on `Σ_{j ≥ q+K} |A_{ij}| base^{-(j-q)}` from `|A_{ij}| ≤ (|t|+i)_{j-i-offset}`.
fn column_tail(t_abs: f64, i: usize, q: usize, k: usize, offset: usize, base: f64) -> f64 {
    let x = t_abs + i as f64;
    let m0 = (q + k) - i - offset;
    let first = poch_real(x, m0) * base.powi(-(k as i32));
    let ratio = ((x + m0 as f64 + 1.0) / (m0 as f64 + 2.0)).max(1.0) / base;
    if !first.is_finite() || ratio >= 1.0 {
        return f64::INFINITY;
    }
    first / (1.0 - ratio)
}

fn continue_s<T: Real>(tuple: &AdditiveTuple<T>, p: &EvalPoint<T>, cfg: &ContinuationConfig, tol: f64) -> Result<Approx<T>> {
    let r = tuple.depth();
    let f1 = tuple.f(1);
    let trivial = is_one(f1);
    let s1 = p.s(1);
    let q = choose_q(p, cfg.q.unwrap_or(1), cfg.direct_margin);
    if !trivial && q > Q_CAP_NONTRIVIAL {
        return Err(Error::InvalidInput(format!(
            "point needs q = {q}, above the cap of {Q_CAP_NONTRIVIAL} for f_1(1) != 1"
        )));
    }
    let (t, brow) = if trivial {
        let t = s1 - cone();
        (t, b1_first_row(t, q)?)
    } else {
        (s1, b2_first_row(f1, s1, q)?)
    };
    let brow_abs: Vec<f64> = brow.iter().map(|b| b.norm().to_f64_lossy()).collect();
    let brow_sum: f64 = brow_abs.iter().sum();
    let eps = T::epsilon().to_f64_lossy();

    // λ_k for k < q
    let child_tol = (tol / (10.0 * brow_sum.max(1.0))).max(f64::MIN_POSITIVE);
    let mut lower_sum = czero::<T>();
    let mut lower_err = 0.0;
    let mut lower_round = 0.0;
    let mut lower_mag = 0.0;
    let mut terms = 0u64;
    let rest: Vec<Complex<T>> = p.coords().iter().skip(2).copied().collect();
    for (k, b) in brow.iter().enumerate() {
        if *b == czero() {
            continue;
        }
        let lam = if r == 1 {
            Approx::exact(if trivial { cone() } else { f1 * f1 })
        } else {
            let kk = real(T::of_usize(k));
            let mut coords = Vec::with_capacity(r - 1);
            if trivial {
                coords.push(s1 + p.s(2) - cone() + kk);
            } else {
                coords.push(s1 + p.s(2) + kk);
            }
            coords.extend_from_slice(&rest);
            let point = EvalPoint::new(coords)?;
            if trivial {
                let sub = tuple.drop_front(1).expect("depth at least 2");
                eval_l(&sub, &point, cfg, child_tol)?
            } else {
                let sub = tuple.merge_front().expect("depth at least 2");
                let v = eval_l(&sub, &point, cfg, child_tol / f1.norm().to_f64_lossy().max(1e-300))?;
                let m = f1.norm().to_f64_lossy();
                Approx { value: f1 * v.value, err: m * v.err, cert: m * v.cert, terms: v.terms }
            }
        };
        lower_sum = lower_sum + *b * lam.value;
        lower_err += brow_abs[k] * lam.cert;
        lower_round += brow_abs[k] * (lam.err - lam.cert);
        lower_mag += brow_abs[k] * lam.value.norm().to_f64_lossy();
        terms += lam.terms;
    }

    // majorant of V(q), used for the discarded columns
    let shifted = p.shift_first(real(T::of_usize(q)));
    let probe = additive_family(tuple, &shifted, 0..1, &[1.0], 1e-3, cfg.n_cap)?;
    let m_q = probe.majorant_first;
    let base = (r.max(2)) as f64;
    let offset = if trivial { 0 } else { 1 };
    let t_abs = t.norm().to_f64_lossy();

    let mut k = cfg.k;
    let (w, weights, col_tail) = loop {
        let op = if trivial { build_a1(t, q, k) } else { build_a2(f1, t, q, k)? };
        let a_ij = op.block_ij();
        let mut w = vec![czero::<T>(); k];
        let mut weights = vec![0.0f64; k];
        for (i, b) in brow.iter().enumerate() {
            for j in 0..k {
                w[j] = w[j] + *b * a_ij[i][j];
                weights[j] += brow_abs[i] * a_ij[i][j].norm().to_f64_lossy();
            }
        }
        let col_tail: f64 = (0..q)
            .map(|i| if brow_abs[i] == 0.0 { 0.0 } else { brow_abs[i] * column_tail(t_abs, i, q, k, offset, base) })
            .sum::<f64>()
            * m_q;
        if col_tail <= tol / 10.0 || k >= cfg.k_max {
            break (w, weights, col_tail);
        }
        k = (2 * k).min(cfg.k_max);
    };

    let fam = additive_family(tuple, p, q..q + k, &weights, tol / 10.0, cfg.n_cap)?;
    terms += fam.terms;
    let mut acc = lower_sum;
    let mut trunc = 0.0;
    let mut round = 0.0;
    let mut mag = lower_mag;
    for j in 0..k {
        acc = acc - w[j] * fam.values[j];
        trunc += weights[j] * fam.tail_bounds[j];
        round += weights[j] * fam.rounding[j];
        mag += weights[j] * fam.values[j].norm().to_f64_lossy();
    }
    let certified = lower_err + trunc + col_tail;
    Ok(Approx { value: acc, err: certified + lower_round + round + 4.0 * eps * mag, cert: certified, terms })
}

/// Both sides of the translation formula that applies to the tuple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TranslationCheck<T: Real> {
    pub lhs: Complex<T>,
    pub rhs: Complex<T>,
    /// Bound on the terms of the right side beyond `terms`.
    pub tail_bound: f64,
    /// Accumulated evaluation error of both sides.
    pub eval_error: f64,
}

/// Evaluates both sides of the translation formula at `p ∈ U_r`, truncating
/// the shift series after `terms` terms.
///
/// For `f_1(1) = 1`: `L_{r-1}(f_2..; s_1+s_2-1, …) = Σ_k (s_1-1)_k L_r(s_1+k, …)`.
/// For `f_1(1) ≠ 1`: `f_1 L_{r-1}(g_2, f_3..; s_1+s_2, …) + (f_1-1) L_r(s) = Σ_k (s_1)_k L_r(s_1+k+1, …)`.
/// At depth 1 the left sides become `1` and `f + (f-1) L_1(s)` and the
/// right sides use `L_1 - f` in place of `L_1`.
pub fn translation_check<T: Real>(tuple: &AdditiveTuple<T>, p: &EvalPoint<T>, terms: usize) -> Result<TranslationCheck<T>> {
    translation_check_with(tuple, p, terms, &ContinuationConfig::with_tol(1e-11))
}

pub fn translation_check_with<T: Real>(
    tuple: &AdditiveTuple<T>,
    p: &EvalPoint<T>,
    terms: usize,
    cfg: &ContinuationConfig,
) -> Result<TranslationCheck<T>> {
    check_depth(tuple, p)?;
    if terms == 0 {
        return Err(Error::InvalidInput("terms must be at least 1".into()));
    }
    if !in_u_r(p, 0.0) {
        return Err(Error::NotInConvergenceRegion { margin: u_r_margin(p) });
    }
    let r = tuple.depth();
    let f1 = tuple.f(1);
    let trivial = is_one(f1);
    let s1 = p.s(1);
    let tol = cfg.tol;
    let mut eval_error = 0.0;

    let mut rhs = czero::<T>();
    for k in 0..terms {
        let kk = real(T::of_usize(k));
        let (coef, shift) = if trivial { (poch(s1 - cone(), k), kk) } else { (poch(s1, k), kk + cone()) };
        let term_tol = (tol / (terms as f64 * coef.norm().to_f64_lossy().max(1.0))).max(1e-15);
        let v = checked(eval_s(tuple, &p.shift_first(shift), cfg, term_tol)?, term_tol)?;
        rhs = rhs + coef * v.value;
        eval_error += coef.norm().to_f64_lossy() * v.err;
    }
    let tail_bound = shift_series_tail(tuple, p, terms, trivial);

    let lhs = if trivial {
        if r == 1 {
            cone()
        } else {
            let mut coords = vec![s1 + p.s(2) - cone()];
            coords.extend(p.coords().iter().skip(2).copied());
            let v = checked(eval_l(&tuple.drop_front(1).expect("depth ≥ 2"), &EvalPoint::new(coords)?, cfg, tol)?, tol)?;
            eval_error += v.err;
            v.value
        }
    } else {
        let v = checked(eval_s(tuple, p, cfg, tol)?, tol)?;
        eval_error += (f1 - cone()).norm().to_f64_lossy() * v.err;
        let l_r = if r == 1 { v.value + f1 } else { v.value };
        let lower = if r == 1 {
            cone()
        } else {
            let mut coords = vec![s1 + p.s(2)];
            coords.extend(p.coords().iter().skip(2).copied());
            let w = checked(eval_l(&tuple.merge_front().expect("depth ≥ 2"), &EvalPoint::new(coords)?, cfg, tol)?, tol)?;
            eval_error += f1.norm().to_f64_lossy() * w.err;
            w.value
        };
        f1 * lower + (f1 - cone()) * l_r
    };
    Ok(TranslationCheck { lhs, rhs, tail_bound, eval_error })
}

fn checked<T: Real>(a: Approx<T>, tol: f64) -> Result<Approx<T>> {
    if a.cert > tol {
        return Err(Error::TailNotCertified { achieved: a.cert, requested: tol });
    }
    Ok(a)
}

/// Bound on `Σ_{k ≥ terms} |coef_k|·|S_r(s_1 + k + δ, …)|` with `|S_r| ≤ M·2^{-k}`.
fn shift_series_tail<T: Real>(tuple: &AdditiveTuple<T>, p: &EvalPoint<T>, terms: usize, trivial: bool) -> f64 {
    let shift = if trivial { terms } else { terms + 1 };
    let shifted = p.shift_first(real(T::of_usize(shift)));
    let m = match additive_family(tuple, &shifted, 0..1, &[1.0], 1e-3, DEFAULT_N_CAP) {
        Ok(f) => f.majorant_first,
        Err(_) => return f64::INFINITY,
    };
    let s1 = p.s(1);
    let x = if trivial { (s1 - cone()).norm().to_f64_lossy() } else { s1.norm().to_f64_lossy() };
    let base = tuple.depth().max(2) as f64;
    let first = poch_real(x, terms);
    let ratio = ((x + terms as f64 + 1.0) / (terms as f64 + 2.0)).max(1.0) / base;
    if !first.is_finite() || ratio >= 1.0 {
        return f64::INFINITY;
    }
    first * m / (1.0 - ratio)
}

/// `L_r(s; χ)` via the decomposition into additive tuples.
pub fn dirichlet_via_decomposition<T: Real>(
    tuple: &DirichletTuple<T>,
    p: &EvalPoint<T>,
    cfg: &ContinuationConfig,
) -> Result<EvalResult<T>> {
    let terms = crate::characters::dirichlet_decomposition(tuple);
    let weight: f64 = terms.iter().map(|t| t.coefficient.norm().to_f64_lossy()).sum();
    let sub = ContinuationConfig { tol: cfg.tol / weight.max(1.0), ..*cfg };
    let mut value = czero::<T>();
    let mut err = 0.0;
    let mut used = 0u64;
    for term in &terms {
        let c = term.coefficient;
        if c.norm().to_f64_lossy() < 1e-15 {
            continue;
        }
        let v = evaluate(&term.additive_tuple(), p, &sub)?;
        value = value + c * v.value;
        err += c.norm().to_f64_lossy() * v.abs_error_bound;
        used += v.terms_used;
    }
    Ok(EvalResult { value, abs_error_bound: err, terms_used: used })
}

/// `L_r(s; χ)` anywhere: direct summation inside `U_r` when cheap, the
/// decomposition otherwise.
pub fn evaluate_dirichlet<T: Real>(
    tuple: &DirichletTuple<T>,
    p: &EvalPoint<T>,
    cfg: &ContinuationConfig,
) -> Result<EvalResult<T>> {
    cfg.validate()?;
    if in_u_r(p, 0.0) {
        let opts = DirectOptions { n_cap: cfg.direct_budget.min(cfg.n_cap) };
        match eval_dirichlet_direct_with(tuple, p, cfg.tol, &opts) {
            Err(Error::TolTooTight { .. }) => {}
            other => return other,
        }
    }
    dirichlet_via_decomposition(tuple, p, cfg)
}
