//! Polar hyperplanes, exact singularity sets and residues.
//!
//! A hyperplane `s_1 + ⋯ + s_i = n` is written `(index i, level n)`. For
//! additive tuples the possible poles sit on the partial sums ending at the
//! indices where `g_i(1) = 1`; residues are the `(0, j - n)` entries of the
//! finite operator product `C_j` times a lower-depth function.

use std::fmt;

use num_complex::Complex;

use crate::characters::{dirichlet_decomposition, AdditiveTuple, DirichletTuple};
use crate::continuation::{evaluate, evaluate_dirichlet, ContinuationConfig};
use crate::error::{Error, Result};
use crate::numbers::eulerian_poly;
use crate::operator::{build_b1, build_b2, mul_upper};
use crate::scalar::{cone, czero, real, Real};
use crate::series::EvalPoint;

/// Scaled test `|A_n(f)|/n! < EULERIAN_ZERO_TOL` for Eulerian zeros.
pub const EULERIAN_ZERO_TOL: f64 = 1e-10;

/// The hyperplane `s_1 + ⋯ + s_index = level`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hyperplane {
    pub index: usize,
    pub level: i64,
}

impl Hyperplane {
    pub fn new(index: usize, level: i64) -> Self {
        Self { index, level }
    }
}

impl fmt::Display for Hyperplane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lhs: Vec<String> = (1..=self.index).map(|i| format!("s{i}")).collect();
        write!(f, "{} = {}", lhs.join("+"), self.level)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PoleStatus {
    ExactPole,
    PossiblePole,
    Regular,
}

impl PoleStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            PoleStatus::ExactPole => "exact_pole",
            PoleStatus::PossiblePole => "possible_pole",
            PoleStatus::Regular => "regular",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolarReport {
    pub hyperplane: Hyperplane,
    pub status: PoleStatus,
    /// Symbolic residue factor, when known.
    pub residue_factor: Option<String>,
    /// Why the hyperplane has this status.
    pub provenance: String,
}

/// Ascending indices `i` with `g_i(1) = 1`.
pub fn trivial_indices<T: Real>(tuple: &AdditiveTuple<T>) -> Vec<usize> {
    tuple.trivial_indices()
}

/// Position `j` (1-based) of `index` among the trivial indices.
fn position(tuple_trivial: &[usize], index: usize) -> Option<usize> {
    tuple_trivial.iter().position(|&i| i == index).map(|p| p + 1)
}

/// Possible polar hyperplanes with level `≥ n_min`, ordered by index and then
/// by descending level. The top level of each family is always listed.
pub fn possible_poles<T: Real>(tuple: &AdditiveTuple<T>, n_min: i64) -> Vec<Hyperplane> {
    let idx = tuple.trivial_indices();
    let mut out = Vec::new();
    for (pos, &i) in idx.iter().enumerate() {
        let j = (pos + 1) as i64;
        if i == 1 {
            out.push(Hyperplane::new(1, 1));
            continue;
        }
        let mut n = j;
        while n >= n_min.min(j) {
            out.push(Hyperplane::new(i, n));
            n -= 1;
        }
    }
    out
}

/// Why a possible pole is not an exact one, if it is not.
fn removal_reason<T: Real>(tuple: &AdditiveTuple<T>, h: &Hyperplane) -> Option<String> {
    let idx = tuple.trivial_indices();
    if h.index != 2 {
        return None;
    }
    if idx.first() == Some(&1) && idx.get(1) == Some(&2) && h.level <= -1 && h.level % 2 != 0 {
        return Some(format!(
            "residue factor carries the Bernoulli number B_{} = 0",
            2 - h.level
        ));
    }
    if idx.first() == Some(&2) && h.level <= 1 {
        let n = (1 - h.level) as usize;
        if eulerian_vanishes(n, tuple.f(1)) {
            return Some(format!("A_{n}(f_1(1)) = 0 (Eulerian zero)"));
        }
    }
    None
}

fn eulerian_vanishes<T: Real>(n: usize, f: Complex<T>) -> bool {
    if n < 2 {
        return false;
    }
    let mut fact = 1.0f64;
    for k in 2..=n {
        fact *= k as f64;
    }
    eulerian_poly(n).eval(f).norm().to_f64_lossy() / fact < EULERIAN_ZERO_TOL
}

/// Exact polar hyperplanes with level `≥ n_min`.
pub fn exact_poles<T: Real>(tuple: &AdditiveTuple<T>, n_min: i64) -> Vec<Hyperplane> {
    possible_poles(tuple, n_min)
        .into_iter()
        .filter(|h| removal_reason(tuple, h).is_none())
        .collect()
}

/// Every possible pole with its status: exact poles, and the removed
/// hyperplanes marked regular with the reason.
pub fn polar_atlas<T: Real>(tuple: &AdditiveTuple<T>, n_min: i64) -> Vec<PolarReport> {
    let idx = tuple.trivial_indices();
    possible_poles(tuple, n_min)
        .into_iter()
        .map(|h| {
            let j = position(&idx, h.index).expect("possible pole on a trivial index");
            let factor = if h.index == 1 {
                "1 (restriction of L_{r-1}(f_2..f_r; s_2..s_r))".to_string()
            } else {
                format!("(0,{}) entry of C_{}", j as i64 - h.level, j)
            };
            match removal_reason(tuple, &h) {
                Some(reason) => PolarReport {
                    hyperplane: h,
                    status: PoleStatus::Regular,
                    residue_factor: Some(format!("{factor} = 0")),
                    provenance: reason,
                },
                None => PolarReport {
                    hyperplane: h,
                    status: PoleStatus::ExactPole,
                    residue_factor: Some(factor),
                    provenance: format!("g_{}(1) = 1, level {} <= {}", h.index, h.level, j),
                },
            }
        })
        .collect()
}

/// Possible poles of a multiple Dirichlet L-function.
pub fn dirichlet_possible_poles<T: Real>(tuple: &DirichletTuple<T>, n_min: i64) -> Vec<Hyperplane> {
    let mut out = vec![Hyperplane::new(1, 1)];
    for i in 2..=tuple.depth() {
        let mut n = i as i64;
        while n >= n_min.min(i as i64) {
            out.push(Hyperplane::new(i, n));
            n -= 1;
        }
    }
    out
}

pub fn dirichlet_atlas<T: Real>(tuple: &DirichletTuple<T>, n_min: i64) -> Vec<PolarReport> {
    dirichlet_possible_poles(tuple, n_min)
        .into_iter()
        .map(|h| PolarReport {
            hyperplane: h,
            status: PoleStatus::PossiblePole,
            residue_factor: None,
            provenance: "possible pole of a multiple Dirichlet L-function; exactness not decided".into(),
        })
        .collect()
}

/// The point on `h` whose coordinates other than `s_index` are `rest`.
pub fn chart_point<T: Real>(depth: usize, h: &Hyperplane, rest: &[Complex<T>]) -> Result<EvalPoint<T>> {
    if h.index == 0 || h.index > depth {
        return Err(Error::InvalidInput(format!("hyperplane index {} outside 1..={depth}", h.index)));
    }
    if rest.len() + 1 != depth {
        return Err(Error::InvalidInput(format!(
            "a depth-{depth} chart needs {} free coordinates, got {}",
            depth - 1,
            rest.len()
        )));
    }
    let mut coords = Vec::with_capacity(depth);
    coords.extend_from_slice(&rest[..h.index - 1]);
    let partial = coords.iter().fold(czero::<T>(), |a, &z| a + z);
    coords.push(real(T::of(h.level as f64)) - partial);
    coords.extend_from_slice(&rest[h.index - 1..]);
    EvalPoint::new(coords)
}

fn identity<T: Real>(m: usize) -> Vec<Vec<Complex<T>>> {
    (0..m).map(|i| (0..m).map(|j| if i == j { cone() } else { czero() }).collect()).collect()
}

fn scale<T: Real>(a: Vec<Vec<Complex<T>>>, c: Complex<T>) -> Vec<Vec<Complex<T>>> {
    a.into_iter().map(|row| row.into_iter().map(|z| z * c).collect()).collect()
}

fn coefficient_pole(e: Error, h: &Hyperplane) -> Error {
    match e {
        Error::PoleInCoefficient { .. } => Error::NearPole { index: h.index, level: h.level, distance: 0.0 },
        other => other,
    }
}

/// Truncated `C_j` of size `m` at the point `p`.
fn c_matrix<T: Real>(tuple: &AdditiveTuple<T>, p: &EvalPoint<T>, j: usize, m: usize, h: &Hyperplane) -> Result<Vec<Vec<Complex<T>>>> {
    let idx = tuple.trivial_indices();
    let mut acc = identity::<T>(m);
    let b2_run = |acc: Vec<Vec<Complex<T>>>, from: usize, to: usize, shift: usize| -> Result<Vec<Vec<Complex<T>>>> {
        let mut acc = acc;
        for i in from..to {
            let g = tuple.g(i);
            let t = p.prefix_sum(i) - real(T::of_usize(shift));
            let b = build_b2(g, t, m)?;
            acc = mul_upper(&acc, &scale(b.block_ii().to_vec(), g));
        }
        Ok(acc)
    };
    acc = b2_run(acc, 1, idx[0], 0)?;
    for k in 1..j {
        let t = p.prefix_sum(idx[k - 1]) - real(T::of_usize(k));
        let b1 = build_b1(t, m).map_err(|e| coefficient_pole(e, h))?;
        acc = mul_upper(&acc, b1.block_ii());
        acc = b2_run(acc, idx[k - 1] + 1, idx[k], k)?;
    }
    Ok(acc)
}

/// Closed-form residue of `L_r` along `h` at the chart point given by `rest`.
pub fn residue<T: Real>(
    tuple: &AdditiveTuple<T>,
    h: &Hyperplane,
    rest: &[Complex<T>],
    cfg: &ContinuationConfig,
) -> Result<Complex<T>> {
    let r = tuple.depth();
    let idx = tuple.trivial_indices();
    let j = match position(&idx, h.index) {
        Some(j) if possible_poles(tuple, h.level).contains(h) => j,
        _ => return Err(Error::NotAPole { index: h.index, level: h.level }),
    };
    let p = chart_point(r, h, rest)?;
    let entry = if h.index == 1 {
        cone()
    } else {
        let col = (j as i64 - h.level) as usize;
        let m = col + 4;
        c_matrix(tuple, &p, j, m, h)?[0][col]
    };
    let tail = if h.index == r {
        cone()
    } else {
        let sub = tuple.drop_front(h.index).expect("index below depth");
        let q = EvalPoint::new(p.coords()[h.index..].to_vec())?;
        evaluate(&sub, &q, cfg)?.value
    };
    Ok(entry * tail)
}

/// Richardson limit of `(g(δ) + g(-δ))/2` over `δ ∈ {ρ, ρ/2, ρ/4}`, where
/// `g(δ) = δ·F(chart + δ e_index)`.
fn extrapolate<T: Real>(
    p: &EvalPoint<T>,
    index: usize,
    radius: f64,
    mut eval: impl FnMut(&EvalPoint<T>) -> Result<Complex<T>>,
) -> Result<Complex<T>> {
    let mut g = Vec::with_capacity(3);
    for level in 0..3 {
        let d = radius / f64::powi(2.0, level);
        let mut sym = czero::<T>();
        for sign in [1.0, -1.0] {
            let mut coords = p.coords().to_vec();
            coords[index - 1] = coords[index - 1] + real(T::of(sign * d));
            let v = eval(&EvalPoint::new(coords)?)?;
            sym = sym + v * real(T::of(sign * d));
        }
        g.push(sym * real(T::of(0.5)));
    }
    let three = real(T::of(3.0));
    let r01 = (g[1] * real(T::of(4.0)) - g[0]) / three;
    let r12 = (g[2] * real(T::of(4.0)) - g[1]) / three;
    Ok((r12 * real(T::of(16.0)) - r01) / real(T::of(15.0)))
}

/// Numeric residue of `L_r` along `h`, for checking [`residue`].
pub fn residue_numeric_check<T: Real>(
    tuple: &AdditiveTuple<T>,
    h: &Hyperplane,
    rest: &[Complex<T>],
    radius: f64,
    cfg: &ContinuationConfig,
) -> Result<Complex<T>> {
    let p = chart_point(tuple.depth(), h, rest)?;
    extrapolate(&p, h.index, radius, |x| Ok(evaluate(tuple, x, cfg)?.value))
}

/// Residue of a multiple Dirichlet L-function along `h`, as the
/// decomposition-weighted sum of the additive residues.
pub fn dirichlet_residue<T: Real>(
    tuple: &DirichletTuple<T>,
    h: &Hyperplane,
    rest: &[Complex<T>],
    cfg: &ContinuationConfig,
) -> Result<Complex<T>> {
    if !dirichlet_possible_poles(tuple, h.level).contains(h) {
        return Err(Error::NotAPole { index: h.index, level: h.level });
    }
    let mut acc = czero::<T>();
    for term in dirichlet_decomposition(tuple) {
        if term.coefficient.norm().to_f64_lossy() < 1e-15 {
            continue;
        }
        let add = term.additive_tuple();
        if !possible_poles(&add, h.level).contains(h) {
            continue;
        }
        acc = acc + term.coefficient * residue(&add, h, rest, cfg)?;
    }
    Ok(acc)
}

/// Numeric residue of a multiple Dirichlet L-function along `h`.
pub fn dirichlet_residue_numeric_check<T: Real>(
    tuple: &DirichletTuple<T>,
    h: &Hyperplane,
    rest: &[Complex<T>],
    radius: f64,
    cfg: &ContinuationConfig,
) -> Result<Complex<T>> {
    let p = chart_point(tuple.depth(), h, rest)?;
    extrapolate(&p, h.index, radius, |x| Ok(evaluate_dirichlet(tuple, x, cfg)?.value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::{AdditiveCharacter, DirichletCharacter};
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn h(i: usize, n: i64) -> Hyperplane {
        Hyperplane::new(i, n)
    }

    fn minus_one_pair() -> AdditiveTuple<f64> {
        AdditiveTuple::from_values(&[c(-1., 0.), c(-1., 0.)]).unwrap()
    }

    #[test]
    fn trivial_index_examples() {
        assert_eq!(trivial_indices(&AdditiveTuple::<f64>::trivial(3)), vec![1, 2, 3]);
        assert_eq!(trivial_indices(&minus_one_pair()), vec![2]);
        let ii = AdditiveTuple::from_values(&[c(0., 1.), c(0., 1.)]).unwrap();
        assert!(trivial_indices(&ii).is_empty());
    }

    #[test]
    fn possible_pole_examples() {
        assert_eq!(possible_poles(&AdditiveTuple::<f64>::trivial(1), -10), vec![h(1, 1)]);
        let ii = AdditiveTuple::from_values(&[c(0., 1.), c(0., 1.)]).unwrap();
        assert!(possible_poles(&ii, -10).is_empty());
        let mut want = vec![h(1, 1)];
        want.extend((-4..=2).rev().map(|n| h(2, n)));
        assert_eq!(possible_poles(&AdditiveTuple::<f64>::trivial(2), -4), want);
    }

    #[test]
    fn exact_pole_examples() {
        let mut want = vec![h(1, 1)];
        want.extend([2, 1, 0, -2, -4, -6].iter().map(|&n| h(2, n)));
        assert_eq!(exact_poles(&AdditiveTuple::<f64>::trivial(2), -6), want);
        let want: Vec<_> = [1, 0, -2, -4].iter().map(|&n| h(2, n)).collect();
        assert_eq!(exact_poles(&minus_one_pair(), -5), want);
        let conj = AdditiveTuple::new(vec![
            AdditiveCharacter::<f64>::root(1, 4).unwrap(),
            AdditiveCharacter::<f64>::root(-1, 4).unwrap(),
        ])
        .unwrap();
        let want: Vec<_> = (-3..=1).rev().map(|n| h(2, n)).collect();
        assert_eq!(exact_poles(&conj, -3), want);
    }

    #[test]
    fn eulerian_zero_removes_a_level() {
        // f_1(1) = -2 + √3 is a zero of A_3, so s_1 + s_2 = -2 is regular
        let f = c(-2.0 + 3f64.sqrt(), 0.0);
        let t = AdditiveTuple::from_values(&[f, c(1.0, 0.0) / f]);
        // |f| < 1 but |f_2| > 1 is allowed as long as g_2 = 1
        let t = t.unwrap();
        let exact = exact_poles(&t, -4);
        assert!(!exact.contains(&h(2, -2)));
        assert!(exact.contains(&h(2, -1)) && exact.contains(&h(2, -3)));
    }

    #[test]
    fn exact_subset_of_possible() {
        for t in [AdditiveTuple::<f64>::trivial(3), minus_one_pair()] {
            let possible = possible_poles(&t, -6);
            assert!(exact_poles(&t, -6).iter().all(|x| possible.contains(x)));
        }
    }

    #[test]
    fn dirichlet_pole_lists() {
        let chi = DirichletCharacter::<f64>::principal(3);
        let t1 = DirichletTuple::new(vec![chi.clone()]).unwrap();
        assert_eq!(dirichlet_possible_poles(&t1, -5), vec![h(1, 1)]);
        let t2 = DirichletTuple::new(vec![chi.clone(), chi.clone()]).unwrap();
        let mut want = vec![h(1, 1)];
        want.extend((-2..=2).rev().map(|n| h(2, n)));
        assert_eq!(dirichlet_possible_poles(&t2, -2), want);
        let t3 = DirichletTuple::new(vec![chi.clone(), chi.clone(), chi]).unwrap();
        assert_eq!(dirichlet_possible_poles(&t3, 3), vec![h(1, 1), h(2, 2), h(3, 3)]);
    }

    #[test]
    fn closed_form_residues_trivial_depth_two() {
        let t = AdditiveTuple::<f64>::trivial(2);
        let cfg = ContinuationConfig::with_tol(1e-10);
        let z3 = residue(&t, &h(1, 1), &[c(3., 0.)], &cfg).unwrap();
        assert!((z3.re - 1.202_056_903_159_594_2).abs() < 1e-9);
        let half = residue(&t, &h(2, 1), &[c(0.3, 0.2)], &cfg).unwrap();
        assert!((half - c(-0.5, 0.)).norm() < 1e-14);
        let s1 = c(0.4, 0.1);
        let r2 = residue(&t, &h(2, 2), &[s1], &cfg).unwrap();
        assert!((r2 - c(1., 0.) / (s1 - 1.0)).norm() < 1e-13);
        let r0 = residue(&t, &h(2, 0), &[s1], &cfg).unwrap();
        assert!((r0 - s1 / 12.0).norm() < 1e-14);
        let rm1 = residue(&t, &h(2, -1), &[s1], &cfg).unwrap();
        assert!(rm1.norm() < 1e-14);
        assert_eq!(residue(&t, &h(1, 0), &[s1], &cfg).unwrap_err().name(), "NotAPole");
    }

    #[test]
    fn closed_form_residues_minus_one_pair() {
        let t = minus_one_pair();
        let cfg = ContinuationConfig::with_tol(1e-10);
        let s1 = c(0.3, 0.);
        assert!((residue(&t, &h(2, 1), &[s1], &cfg).unwrap() - c(-0.5, 0.)).norm() < 1e-14);
        assert!((residue(&t, &h(2, 0), &[s1], &cfg).unwrap() - s1 / 4.0).norm() < 1e-14);
        assert!(residue(&t, &h(2, -1), &[s1], &cfg).unwrap().norm() < 1e-14);
        assert!(residue(&t, &h(2, -2), &[s1], &cfg).unwrap().norm() > 1e-8);
    }

    #[test]
    fn numeric_residues_match() {
        let t = AdditiveTuple::<f64>::trivial(2);
        let cfg = ContinuationConfig::with_tol(1e-11);
        let num = residue_numeric_check(&t, &h(1, 1), &[c(3., 0.)], 1e-2, &cfg).unwrap();
        assert!((num.re - 1.202_056_903_159_594_2).abs() < 1e-5, "{num}");
        let num = residue_numeric_check(&t, &h(2, 1), &[c(0.3, 0.)], 1e-2, &cfg).unwrap();
        assert!((num - c(-0.5, 0.)).norm() < 1e-5, "{num}");
        let num = residue_numeric_check(&minus_one_pair(), &h(2, -1), &[c(0.3, 0.)], 1e-2, &cfg).unwrap();
        assert!(num.norm() < 1e-5, "{num}");
    }

    #[test]
    fn chart_solves_the_constrained_coordinate() {
        let p = chart_point(3, &h(2, -1), &[c(0.5, 0.1), c(2.0, 0.0)]).unwrap();
        assert_eq!(p.coords()[1], c(-1.5, -0.1));
        assert_eq!(p.coords()[2], c(2.0, 0.0));
        assert!(chart_point(2, &h(3, 0), &[c(0., 0.)]).is_err());
    }
}
