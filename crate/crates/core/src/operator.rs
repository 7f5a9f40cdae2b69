//! Truncated upper-triangular operators acting on first-coordinate shift
//! sequences `(V(s_1 + k))_{k ≥ 0}`.
//!
//! Rows and columns are indexed from 0. The row index set is `I_q = {0..q-1}`
//! and the retained columns are `I_q` followed by the first `K` indices of
//! `J_q = {q, q+1, …}`.

use num_complex::Complex;

use crate::characters::is_one;
use crate::error::{Error, Result};
use crate::numbers::{bernoulli_table, eulerian_table, rational_to_real};
use crate::scalar::{cone, czero, real, Real};

/// A `q × (q + K)` slice of an infinite upper-triangular matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedOperator<T: Real> {
    q: usize,
    k: usize,
    block_ii: Vec<Vec<Complex<T>>>,
    block_ij: Vec<Vec<Complex<T>>>,
}

impl<T: Real> TruncatedOperator<T> {
    fn from_entries(q: usize, k: usize, entry: impl Fn(usize, usize) -> Complex<T>) -> Self {
        let block_ii = (0..q).map(|i| (0..q).map(|j| if j < i { czero() } else { entry(i, j) }).collect()).collect();
        let block_ij = (0..q).map(|i| (q..q + k).map(|j| entry(i, j)).collect()).collect();
        Self { q, k, block_ii, block_ij }
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn block_ii(&self) -> &[Vec<Complex<T>>] {
        &self.block_ii
    }

    pub fn block_ij(&self) -> &[Vec<Complex<T>>] {
        &self.block_ij
    }

    /// Entry `(i, j)` with `j < q + K`.
    pub fn entry(&self, i: usize, j: usize) -> Complex<T> {
        if j < self.q {
            self.block_ii[i][j]
        } else {
            self.block_ij[i][j - self.q]
        }
    }

    /// Product of the II blocks, `self · other`.
    pub fn mul_ii(&self, other: &Self) -> Vec<Vec<Complex<T>>> {
        mul_upper(&self.block_ii, &other.block_ii)
    }

    /// `max |(self · other)_{ij} − δ_{ij}|` on the II block.
    pub fn identity_defect(&self, other: &Self) -> f64 {
        let p = self.mul_ii(other);
        let mut worst = 0.0f64;
        for (i, row) in p.iter().enumerate() {
            for (j, z) in row.iter().enumerate() {
                let target = if i == j { cone() } else { czero() };
                worst = worst.max((*z - target).norm().to_f64_lossy());
            }
        }
        worst
    }
}

/// Product of two square upper-triangular matrices.
pub(crate) fn mul_upper<T: Real>(a: &[Vec<Complex<T>>], b: &[Vec<Complex<T>>]) -> Vec<Vec<Complex<T>>> {
    let q = a.len();
    let mut out = vec![vec![czero(); q]; q];
    for i in 0..q {
        for j in i..q {
            let mut acc = czero();
            for m in i..=j {
                acc = acc + a[i][m] * b[m][j];
            }
            out[i][j] = acc;
        }
    }
    out
}

/// `A_1(t)`: entry `(i, j) = (t+i)_{j-i}`.
pub fn build_a1<T: Real>(t: Complex<T>, q: usize, k: usize) -> TruncatedOperator<T> {
    let rows = poch_rows(t, q, q + k, 0);
    TruncatedOperator::from_entries(q, k, |i, j| rows[i][j - i])
}

/// `A_2(f; t)`: diagonal `1 - f`, entry `(i, j) = (t+i)_{j-i-1}` above it.
pub fn build_a2<T: Real>(f: Complex<T>, t: Complex<T>, q: usize, k: usize) -> Result<TruncatedOperator<T>> {
    if is_one(f) {
        return Err(Error::DegenerateCharacter);
    }
    let rows = poch_rows(t, q, q + k, 1);
    let diag = cone::<T>() - f;
    Ok(TruncatedOperator::from_entries(q, k, |i, j| if i == j { diag } else { rows[i][j - i - 1] }))
}

/// `rows[i][m] = (t+i)_m` for `i + m + offset < cols`.
fn poch_rows<T: Real>(t: Complex<T>, q: usize, cols: usize, offset: usize) -> Vec<Vec<Complex<T>>> {
    (0..q)
        .map(|i| {
            let x = t + real(T::of_usize(i));
            let len = cols.saturating_sub(i + offset);
            let mut row = Vec::with_capacity(len);
            let mut acc = x;
            for m in 0..len {
                if m > 0 {
                    acc = acc * (x + real(T::of_usize(m))) / T::of_usize(m + 1);
                }
                row.push(acc);
            }
            row
        })
        .collect()
}

/// `u_i(n) = (t+i)(t+i+1)⋯(t+i+n-1)/n!`, with `u_i(0) = 1`.
fn scaled_rising<T: Real>(x: Complex<T>, len: usize) -> Vec<Complex<T>> {
    let mut out = Vec::with_capacity(len);
    let mut acc = cone::<T>();
    for n in 0..len {
        if n > 0 {
            acc = acc * (x + real(T::of_usize(n - 1))) / T::of_usize(n);
        }
        out.push(acc);
    }
    out
}

fn pole_guard<T: Real>(t: Complex<T>, q: usize) -> Result<()> {
    let scale = T::epsilon() * T::of(4.0) * (T::one() + t.norm());
    if (0..q).any(|i| (t + real(T::of_usize(i))).norm() <= scale) {
        return Err(Error::PoleInCoefficient { t: format!("{:?}", t) });
    }
    Ok(())
}

/// `B_1(t) = A_1(t)^{-1}` (II block): `1/(t+i)` on the diagonal, `B_1 = -1/2`
/// next to it, and `(t+i+1)⋯(t+i+k-1)·B_k/k!` beyond.
pub fn build_b1<T: Real>(t: Complex<T>, q: usize) -> Result<TruncatedOperator<T>> {
    pole_guard(t, q)?;
    let bern = bernoulli_table(q);
    let mut bk_over_fact: Vec<T> = Vec::with_capacity(q);
    let mut fact = T::one();
    for (k, b) in bern.iter().enumerate().take(q) {
        if k > 0 {
            fact = fact * T::of_usize(k);
        }
        bk_over_fact.push(rational_to_real::<T>(b) / fact);
    }
    let mut rows = Vec::with_capacity(q);
    for i in 0..q {
        let x = t + real(T::of_usize(i));
        let mut row = vec![czero(); q];
        row[i] = cone::<T>() / x;
        let mut prod = cone::<T>();
        for kk in 1..q - i {
            if kk >= 2 {
                prod = prod * (x + real(T::of_usize(kk - 1)));
            }
            row[i + kk] = prod * bk_over_fact[kk];
        }
        rows.push(row);
    }
    Ok(TruncatedOperator { q, k: 0, block_ii: rows, block_ij: vec![Vec::new(); q] })
}

/// `B_2(f; t) = A_2(f; t)^{-1}` (II block): entry `(i, i+n)` is
/// `A_n(f)/((1-f)(f-1)^n) · (t+i)⋯(t+i+n-1)/n!`.
pub fn build_b2<T: Real>(f: Complex<T>, t: Complex<T>, q: usize) -> Result<TruncatedOperator<T>> {
    if is_one(f) {
        return Err(Error::DegenerateCharacter);
    }
    let coeffs = b2_coefficients(f, q);
    let mut rows = Vec::with_capacity(q);
    for i in 0..q {
        let u = scaled_rising(t + real(T::of_usize(i)), q - i);
        let mut row = vec![czero(); q];
        for n in 0..q - i {
            row[i + n] = coeffs[n] * u[n];
        }
        rows.push(row);
    }
    Ok(TruncatedOperator { q, k: 0, block_ii: rows, block_ij: vec![Vec::new(); q] })
}

/// `A_n(f)/((1-f)(f-1)^n)` for `n < len`.
pub(crate) fn b2_coefficients<T: Real>(f: Complex<T>, len: usize) -> Vec<Complex<T>> {
    let table = eulerian_table(len.saturating_sub(1));
    let inv = cone::<T>() / (f - cone());
    let lead = cone::<T>() / (cone::<T>() - f);
    let mut pw = cone::<T>();
    table
        .iter()
        .take(len)
        .map(|a| {
            let v = lead * a.eval(f) * pw;
            pw = pw * inv;
            v
        })
        .collect()
}

/// Row 0 of `B_1(t)` with `q` entries; only `t = 0` is singular here.
pub(crate) fn b1_first_row<T: Real>(t: Complex<T>, q: usize) -> Result<Vec<Complex<T>>> {
    pole_guard(t, 1)?;
    let bern = bernoulli_table(q);
    let mut row = vec![czero(); q];
    row[0] = cone::<T>() / t;
    let mut prod = cone::<T>();
    let mut fact = T::one();
    for k in 1..q {
        fact = fact * T::of_usize(k);
        if k >= 2 {
            prod = prod * (t + real(T::of_usize(k - 1)));
        }
        row[k] = prod * (rational_to_real::<T>(&bern[k]) / fact);
    }
    Ok(row)
}

/// Row 0 of `B_2(f; t)` with `q` entries.
pub(crate) fn b2_first_row<T: Real>(f: Complex<T>, t: Complex<T>, q: usize) -> Result<Vec<Complex<T>>> {
    if is_one(f) {
        return Err(Error::DegenerateCharacter);
    }
    let coeffs = b2_coefficients(f, q);
    let u = scaled_rising(t, q);
    Ok(coeffs.iter().zip(&u).map(|(c, u)| *c * *u).collect())
}
