//! Additive characters, Dirichlet characters and the finite Fourier
//! transforms relating the Φ-, Ψ- and L-families.

use num_complex::Complex;
use num_integer::Integer;

use crate::error::{Error, Result};
use crate::scalar::{cone, czero, root_of_unity, Real};

/// Absolute tolerance for deciding `g(1) = 1`.
pub const TRIVIAL_TOL: f64 = 1e-12;

/// Tolerance used when validating Dirichlet character tables.
pub const CHARACTER_TOL: f64 = 1e-9;

pub(crate) fn is_one<T: Real>(z: Complex<T>) -> bool {
    (z - cone::<T>()).norm().to_f64_lossy() <= TRIVIAL_TOL
}

/// A group homomorphism `f: ℤ → ℂ*`, determined by `f(1)`.
///
/// When the character is a root of unity `e^{2πi b/N}` the reduced fraction is
/// kept, so partial products of such characters are computed exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdditiveCharacter<T: Real> {
    value: Complex<T>,
    frequency: Option<(i64, i64)>,
}

impl<T: Real> AdditiveCharacter<T> {
    pub fn trivial() -> Self {
        Self { value: cone(), frequency: Some((0, 1)) }
    }

    pub fn from_value(value: Complex<T>) -> Result<Self> {
        let m = value.norm().to_f64_lossy();
        if !(m.is_finite() && m > 0.0) {
            return Err(Error::InvalidCharacter(format!("f(1) = {value:?} must be a nonzero finite number")));
        }
        Ok(Self { value, frequency: None })
    }

    /// `f(1) = e^{2πiλ}`.
    pub fn from_lambda(lambda: Complex<T>) -> Result<Self> {
        let z = Complex::new(T::zero(), T::TAU()) * lambda;
        Self::from_value(z.exp())
    }

    /// `f(1) = e^{2πi b/N}`.
    pub fn root(b: i64, n: i64) -> Result<Self> {
        if n <= 0 {
            return Err(Error::InvalidCharacter(format!("root {b}/{n}: denominator must be positive")));
        }
        let g = b.gcd(&n);
        let (b, n) = ((b / g).rem_euclid(n / g), n / g);
        Ok(Self { value: root_of_unity(b, n), frequency: Some((b, n)) })
    }

    pub fn value(&self) -> Complex<T> {
        self.value
    }

    /// `b/N` with `f(1) = e^{2πi b/N}`, when known exactly.
    pub fn frequency(&self) -> Option<(i64, i64)> {
        self.frequency
    }

    pub fn is_trivial(&self) -> bool {
        is_one(self.value)
    }

    pub fn conj(&self) -> Self {
        Self {
            value: self.value.conj(),
            frequency: self.frequency.map(|(b, n)| ((-b).rem_euclid(n), n)),
        }
    }

    /// Pointwise product `(f·h)(1) = f(1)h(1)`.
    pub fn mul(&self, other: &Self) -> Self {
        match (self.frequency, other.frequency) {
            (Some((b1, n1)), Some((b2, n2))) => {
                let n = n1.lcm(&n2);
                let b = b1 * (n / n1) + b2 * (n / n2);
                Self::root(b, n).expect("positive denominator")
            }
            _ => Self { value: self.value * other.value, frequency: None },
        }
    }
}

/// Ordered additive characters `f_1..f_r` with cached partial products
/// `g_i(1) = f_1(1)⋯f_i(1)`; construction enforces `|g_i(1)| ≤ 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdditiveTuple<T: Real> {
    chars: Vec<AdditiveCharacter<T>>,
    partial: Vec<AdditiveCharacter<T>>,
}

impl<T: Real> AdditiveTuple<T> {
    pub fn new(chars: Vec<AdditiveCharacter<T>>) -> Result<Self> {
        if chars.is_empty() {
            return Err(Error::InvalidCharacter("an additive tuple needs at least one character".into()));
        }
        let mut partial: Vec<AdditiveCharacter<T>> = Vec::with_capacity(chars.len());
        for (i, f) in chars.iter().enumerate() {
            let g = match partial.last() {
                Some(prev) => prev.mul(f),
                None => *f,
            };
            let m = g.value.norm().to_f64_lossy();
            if m > 1.0 + TRIVIAL_TOL {
                return Err(Error::InvalidCharacter(format!(
                    "|g_{}(1)| = {m} > 1: the series diverges everywhere",
                    i + 1
                )));
            }
            partial.push(g);
        }
        Ok(Self { chars, partial })
    }

    pub fn from_values(values: &[Complex<T>]) -> Result<Self> {
        Self::new(values.iter().map(|&v| AdditiveCharacter::from_value(v)).collect::<Result<_>>()?)
    }

    /// `r` copies of the trivial character: the multiple zeta function.
    pub fn trivial(r: usize) -> Self {
        Self::new(vec![AdditiveCharacter::trivial(); r.max(1)]).expect("trivial tuple is valid")
    }

    pub fn depth(&self) -> usize {
        self.chars.len()
    }

    pub fn chars(&self) -> &[AdditiveCharacter<T>] {
        &self.chars
    }

    /// `f_i(1)` for `i` in `1..=r`.
    pub fn f(&self, i: usize) -> Complex<T> {
        self.chars[i - 1].value
    }

    /// `g_i(1)` for `i` in `1..=r`.
    pub fn g(&self, i: usize) -> Complex<T> {
        self.partial[i - 1].value
    }

    pub fn partial_products(&self) -> Vec<Complex<T>> {
        self.partial.iter().map(|g| g.value).collect()
    }

    /// Ascending 1-based indices with `g_i(1) = 1`.
    pub fn trivial_indices(&self) -> Vec<usize> {
        (1..=self.depth()).filter(|&i| self.partial[i - 1].is_trivial()).collect()
    }

    /// `(f_{k+1}, …, f_r)`; `None` when nothing is left.
    pub fn drop_front(&self, k: usize) -> Option<Self> {
        if k >= self.depth() {
            return None;
        }
        Some(Self::new(self.chars[k..].to_vec()).expect("suffix of a shifted valid tuple"))
    }

    /// `(g_2, f_3, …, f_r)`, the tuple of the second translation formula.
    pub fn merge_front(&self) -> Option<Self> {
        if self.depth() < 2 {
            return None;
        }
        let mut chars = Vec::with_capacity(self.depth() - 1);
        chars.push(self.partial[1]);
        chars.extend_from_slice(&self.chars[2..]);
        Some(Self::new(chars).expect("merged tuple inherits partial products"))
    }

    pub fn conj(&self) -> Self {
        Self::new(self.chars.iter().map(AdditiveCharacter::conj).collect()).expect("conjugation keeps moduli")
    }
}

/// A Dirichlet character mod `N`, stored as its value table on residues `1..=N`.
#[derive(Debug, Clone, PartialEq)]
pub struct DirichletCharacter<T: Real> {
    modulus: u64,
    values: Vec<Complex<T>>,
}

impl<T: Real> DirichletCharacter<T> {
    /// Validates the table: support on units, `χ(1) = 1`, unit modulus, and
    /// complete multiplicativity on units. `values[k]` is `χ(k + 1)`.
    pub fn new(modulus: u64, values: Vec<Complex<T>>) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidCharacter("modulus must be positive".into()));
        }
        if values.len() as u64 != modulus {
            return Err(Error::InvalidCharacter(format!(
                "table has {} entries, modulus is {modulus}",
                values.len()
            )));
        }
        let tol = CHARACTER_TOL;
        let n = modulus;
        let at = |a: u64| values[((a + n - 1) % n) as usize];
        for a in 1..=n {
            let v = at(a);
            let unit = a.gcd(&n) == 1;
            let m = v.norm().to_f64_lossy();
            if unit && (m - 1.0).abs() > tol {
                return Err(Error::InvalidCharacter(format!(
                    "chi({a}) must be a root of unity (|chi({a})| = {m})"
                )));
            }
            if !unit && m > tol {
                return Err(Error::InvalidCharacter(format!("chi({a}) must vanish: gcd({a}, {n}) > 1")));
            }
        }
        if (at(1) - cone::<T>()).norm().to_f64_lossy() > tol {
            return Err(Error::InvalidCharacter("chi(1) must equal 1".into()));
        }
        for a in 1..=n {
            if a.gcd(&n) != 1 {
                continue;
            }
            for b in a..=n {
                if b.gcd(&n) != 1 {
                    continue;
                }
                let lhs = at((a * b) % n);
                let rhs = at(a) * at(b);
                if (lhs - rhs).norm().to_f64_lossy() > tol {
                    return Err(Error::InvalidCharacter(format!(
                        "not multiplicative: chi({a})chi({b}) != chi({})",
                        (a * b) % n
                    )));
                }
            }
        }
        Ok(Self { modulus, values })
    }

    /// The principal character mod `N`.
    pub fn principal(modulus: u64) -> Self {
        let values = (1..=modulus)
            .map(|a| if a.gcd(&modulus) == 1 { cone() } else { czero() })
            .collect();
        Self::new(modulus, values).expect("principal character is valid")
    }

    /// Every character mod `N` when `(ℤ/N)^×` is cyclic, indexed so that
    /// entry 0 is principal.
    pub fn all(modulus: u64) -> Result<Vec<Self>> {
        if modulus == 0 {
            return Err(Error::InvalidCharacter("modulus must be positive".into()));
        }
        if modulus <= 2 {
            return Ok(vec![Self::principal(modulus)]);
        }
        let phi = (1..=modulus).filter(|a| a.gcd(&modulus) == 1).count() as u64;
        let order = |g: u64| {
            let (mut x, mut k) = (g % modulus, 1u64);
            while x != 1 {
                x = x * g % modulus;
                k += 1;
            }
            k
        };
        let gen = (2..modulus)
            .filter(|a| a.gcd(&modulus) == 1)
            .find(|&a| order(a) == phi)
            .ok_or_else(|| Error::InvalidInput(format!("(Z/{modulus})^x is not cyclic")))?;
        let mut log = vec![None; modulus as usize];
        let mut x = 1u64;
        for m in 0..phi {
            log[x as usize] = Some(m as i64);
            x = x * gen % modulus;
        }
        (0..phi as i64)
            .map(|k| {
                let values = (1..=modulus)
                    .map(|a| match log[(a % modulus) as usize] {
                        Some(m) => root_of_unity::<T>(k * m, phi as i64),
                        None => czero(),
                    })
                    .collect();
                Self::new(modulus, values)
            })
            .collect()
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    /// `χ(n)` for any positive integer `n`.
    pub fn at(&self, n: u64) -> Complex<T> {
        self.values[((n + self.modulus - 1) % self.modulus) as usize]
    }

    pub fn conj(&self) -> Self {
        Self { modulus: self.modulus, values: self.values.iter().map(|v| v.conj()).collect() }
    }
}

/// Ordered Dirichlet characters of arbitrary (possibly distinct) moduli.
#[derive(Debug, Clone, PartialEq)]
pub struct DirichletTuple<T: Real> {
    chars: Vec<DirichletCharacter<T>>,
}

impl<T: Real> DirichletTuple<T> {
    pub fn new(chars: Vec<DirichletCharacter<T>>) -> Result<Self> {
        if chars.is_empty() {
            return Err(Error::InvalidCharacter("a Dirichlet tuple needs at least one character".into()));
        }
        Ok(Self { chars })
    }

    pub fn depth(&self) -> usize {
        self.chars.len()
    }

    pub fn chars(&self) -> &[DirichletCharacter<T>] {
        &self.chars
    }

    pub fn moduli(&self) -> Vec<u64> {
        self.chars.iter().map(|c| c.modulus).collect()
    }

    pub fn conj(&self) -> Self {
        Self { chars: self.chars.iter().map(DirichletCharacter::conj).collect() }
    }
}

/// `Ψ(s;b) = Σ_{a=1}^{N} e^{2πi ab/N} Φ(s;a)` for `phi[a-1] = Φ(s;a)`.
pub fn phi_to_psi<T: Real>(phi: &[Complex<T>], b: i64) -> Complex<T> {
    let n = phi.len() as i64;
    phi.iter()
        .enumerate()
        .map(|(i, &v)| root_of_unity::<T>((i as i64 + 1) * b, n) * v)
        .fold(czero(), |acc, x| acc + x)
}

/// `Φ(s;a) = (1/N) Σ_{b=1}^{N} e^{-2πi ab/N} Ψ(s;b)` for `psi[b-1] = Ψ(s;b)`.
pub fn psi_to_phi<T: Real>(psi: &[Complex<T>], a: i64) -> Complex<T> {
    let n = psi.len() as i64;
    let total = psi
        .iter()
        .enumerate()
        .map(|(i, &v)| root_of_unity::<T>(-(i as i64 + 1) * a, n) * v)
        .fold(czero(), |acc, x| acc + x);
    total / T::from_i64(n).unwrap()
}

/// One term of the additive expansion of a multiple Dirichlet L-function.
#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionTerm<T: Real> {
    pub coefficient: Complex<T>,
    /// `b_1..b_r` with `1 ≤ b_j ≤ N_j`.
    pub frequencies: Vec<i64>,
    pub moduli: Vec<u64>,
}

impl<T: Real> DecompositionTerm<T> {
    /// The additive tuple `f_j(1) = e^{2πi b_j/N_j}`.
    pub fn additive_tuple(&self) -> AdditiveTuple<T> {
        let chars = self
            .frequencies
            .iter()
            .zip(&self.moduli)
            .map(|(&b, &n)| AdditiveCharacter::root(b, n as i64).expect("positive modulus"))
            .collect();
        AdditiveTuple::new(chars).expect("roots of unity give a valid tuple")
    }
}

/// Expands `L_r(s; χ_1..χ_r)` as `Σ_b c_b L_r(f_b; s)` over all
/// `N_1⋯N_r` frequency tuples, with coefficient
/// `c_b = (1/N_1⋯N_r) Σ_a χ_1(a_1)⋯χ_r(a_r) e^{-2πi Σ a_j b_j/N_j}`.
pub fn dirichlet_decomposition<T: Real>(tuple: &DirichletTuple<T>) -> Vec<DecompositionTerm<T>> {
    // the a-sum factorises over j
    let per_char: Vec<Vec<Complex<T>>> = tuple
        .chars
        .iter()
        .map(|chi| {
            let n = chi.modulus as i64;
            (1..=n)
                .map(|b| {
                    let s = (1..=n)
                        .map(|a| chi.at(a as u64) * root_of_unity::<T>(-a * b, n))
                        .fold(czero(), |acc, x| acc + x);
                    s / T::from_i64(n).unwrap()
                })
                .collect()
        })
        .collect();
    let moduli = tuple.moduli();
    let mut terms = Vec::new();
    let mut idx = vec![0usize; moduli.len()];
    loop {
        let coefficient = idx.iter().enumerate().fold(cone::<T>(), |acc, (j, &b)| acc * per_char[j][b]);
        terms.push(DecompositionTerm {
            coefficient,
            frequencies: idx.iter().map(|&b| b as i64 + 1).collect(),
            moduli: moduli.clone(),
        });
        let mut j = moduli.len();
        loop {
            if j == 0 {
                return terms;
            }
            j -= 1;
            idx[j] += 1;
            if (idx[j] as u64) < moduli[j] {
                break;
            }
            idx[j] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    #[test]
    fn character_groups_of_small_moduli() {
        for (n, count) in [(1, 1), (2, 1), (3, 2), (4, 2), (5, 4), (7, 6), (9, 6)] {
            let all = super::DirichletCharacter::<f64>::all(n).unwrap();
            assert_eq!(all.len(), count);
            assert_eq!(all[0], super::DirichletCharacter::principal(n));
        }
        assert!(super::DirichletCharacter::<f64>::all(8).is_err());
    }

    use super::*;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn nontrivial_mod_four_is_valid() {
        let chi = DirichletCharacter::<f64>::new(4, vec![c(1., 0.), c(0., 0.), c(-1., 0.), c(0., 0.)]).unwrap();
        assert_eq!(chi.at(3) * chi.at(3), chi.at(9));
        assert_eq!(chi.at(7), c(-1.0, 0.0));
    }

    #[test]
    fn trivial_mod_one_is_valid() {
        let chi = DirichletCharacter::<f64>::new(1, vec![c(1., 0.)]).unwrap();
        assert_eq!(chi.at(17), c(1.0, 0.0));
    }

    #[test]
    fn support_violation_rejected() {
        let err = DirichletCharacter::<f64>::new(3, vec![c(1., 0.); 3]).unwrap_err();
        assert_eq!(err.name(), "InvalidCharacter");
    }

    #[test]
    fn non_multiplicative_rejected() {
        // mod 5: chi(2) = i forces chi(4) = -1
        let vals = vec![c(1., 0.), c(0., 1.), c(0., -1.), c(1., 0.), c(0., 0.)];
        let err = DirichletCharacter::<f64>::new(5, vals).unwrap_err();
        assert!(matches!(err, Error::InvalidCharacter(ref m) if m.contains("multiplicative")));
    }

    #[test]
    fn wrong_length_rejected() {
        assert!(DirichletCharacter::<f64>::new(4, vec![c(1., 0.)]).is_err());
    }

    #[test]
    fn divergent_tuple_rejected() {
        let err = AdditiveTuple::<f64>::from_values(&[c(1.2, 0.0), c(0.5, 0.0)]).unwrap_err();
        assert_eq!(err.name(), "InvalidCharacter");
        // |f_1| > 1 is fine while partial products stay in the disc
        assert!(AdditiveTuple::<f64>::from_values(&[c(0.5, 0.0), c(1.5, 0.0)]).is_ok());
        assert!(AdditiveTuple::<f64>::from_values(&[c(0.5, 0.0), c(2.5, 0.0)]).is_err());
    }

    #[test]
    fn lambda_parameterisation() {
        let f = AdditiveCharacter::<f64>::from_lambda(c(0.5, 0.0)).unwrap();
        assert!((f.value() - c(-1.0, 0.0)).norm() < 1e-15);
        let f = AdditiveCharacter::<f64>::from_lambda(c(0.0, 0.1)).unwrap();
        assert!((f.value().norm() - (-0.2 * std::f64::consts::PI).exp()).abs() < 1e-15);
    }

    #[test]
    fn exact_partial_products_for_roots() {
        let t = AdditiveTuple::<f64>::new(vec![
            AdditiveCharacter::root(1, 3).unwrap(),
            AdditiveCharacter::root(2, 3).unwrap(),
        ])
        .unwrap();
        assert_eq!(t.g(2), c(1.0, 0.0));
        assert_eq!(t.trivial_indices(), vec![2]);
    }

    #[test]
    fn small_dft_identities() {
        let phi = [c(0.7, 0.1)];
        assert_eq!(phi_to_psi(&phi, 1), phi[0]);
        assert_eq!(psi_to_phi(&phi, 1), phi[0]);
        let phi = [c(0.3, 0.0), c(0.2, 0.5)];
        assert!((phi_to_psi(&phi, 2) - (phi[0] + phi[1])).norm() < 1e-15);
        let psi = [c(1.0, 0.0), c(3.0, 0.0)];
        assert!((psi_to_phi(&psi, 2) - c(2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn decomposition_trivial_mod_one() {
        let t = DirichletTuple::new(vec![DirichletCharacter::<f64>::principal(1)]).unwrap();
        let terms = dirichlet_decomposition(&t);
        assert_eq!(terms.len(), 1);
        assert_eq!(terms[0].frequencies, vec![1]);
        assert!((terms[0].coefficient - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn decomposition_term_count_and_validity() {
        let chi4 = DirichletCharacter::<f64>::new(4, vec![c(1., 0.), c(0., 0.), c(-1., 0.), c(0., 0.)]).unwrap();
        let t = DirichletTuple::new(vec![chi4, DirichletCharacter::principal(3)]).unwrap();
        let terms = dirichlet_decomposition(&t);
        assert_eq!(terms.len(), 12);
        for term in &terms {
            let tuple = term.additive_tuple();
            for g in tuple.partial_products() {
                assert!((g.norm() - 1.0).abs() < 1e-14);
            }
        }
    }
}
