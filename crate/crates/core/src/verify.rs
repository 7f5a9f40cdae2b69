//! Invariant suite: every module's properties checked on fixed seeded
//! samples, reporting pass/fail per property.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::characters::{
    dirichlet_decomposition, phi_to_psi, psi_to_phi, AdditiveCharacter, AdditiveTuple, DirichletCharacter,
    DirichletTuple,
};
use crate::continuation::{continue_eval, translation_check, ContinuationConfig};
use crate::numbers::{bernoulli, eulerian_poly, eulerian_zeros, poch};
use crate::operator::{build_a1, build_a2, build_b1, build_b2};
use crate::poles::{
    dirichlet_residue, dirichlet_residue_numeric_check, exact_poles, possible_poles, residue, residue_numeric_check,
    Hyperplane,
};
use crate::series::{eval_additive_direct, eval_dirichlet_direct, eval_phi_direct, eval_psi_direct, EvalPoint};

const SEED: u64 = 0x6d7a_6574_61;

/// Outcome of one property.
#[derive(Debug, Clone, PartialEq)]
pub struct PropertyOutcome {
    pub module: &'static str,
    pub property: &'static str,
    pub passed: bool,
    pub detail: String,
}

type Check = fn() -> std::result::Result<String, String>;

const CHECKS: &[(&str, &str, Check)] = &[
    ("numbers", "eulerian coefficient sums equal n! (n <= 30)", eulerian_sums),
    ("numbers", "eulerian zeros real, negative, simple, no common zero (n <= 25)", eulerian_zero_structure),
    ("numbers", "odd Bernoulli numbers vanish (3 <= n <= 31)", odd_bernoulli),
    ("numbers", "Taylor identity with poch(s-1, k)", taylor_first),
    ("numbers", "Taylor identity with poch(s, k)", taylor_second),
    ("characters", "Dirichlet decomposition equals direct summation", decomposition_matches_direct),
    ("characters", "decomposition tuples are valid", decomposition_tuples_valid),
    ("characters", "phi_to_psi and psi_to_phi are inverse (N <= 12)", phi_psi_inverse),
    ("series", "monotone refinement", monotone_refinement),
    ("series", "conjugation symmetry", conjugation_symmetry),
    ("series", "Psi-Phi and Phi-Psi identities", psi_phi_identities),
    ("series", "rejection of |g_i(1)| > 1", rejection),
    ("continuation", "operator inverse identities", inverse_identities),
    ("continuation", "continuation agrees with direct summation", agreement_on_u_r),
    ("continuation", "independence of (q, K)", parameter_independence),
    ("continuation", "translation identities", translation_identities),
    ("poles", "exact poles are possible poles", exact_subset),
    ("poles", "closed-form residues match numeric residues", exact_residues),
    ("poles", "removed hyperplanes carry zero residue", removed_residues),
    ("poles", "Dirichlet residue along s1 = 1", dirichlet_consistency),
];

/// Names of the modules covered by [`run`].
pub fn modules() -> Vec<&'static str> {
    let mut m: Vec<_> = CHECKS.iter().map(|c| c.0).collect();
    m.dedup();
    m
}

/// Runs every property, or only those of `module`.
pub fn run(module: Option<&str>) -> Vec<PropertyOutcome> {
    CHECKS
        .iter()
        .filter(|c| module.map_or(true, |m| m == c.0))
        .map(|&(module, property, check)| {
            let (passed, detail) = match check() {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            PropertyOutcome { module, property, passed, detail }
        })
        .collect()
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn worst(max: f64, bound: f64, what: &str) -> std::result::Result<String, String> {
    let msg = format!("max {what} {max:.3e} (bound {bound:.0e})");
    if max < bound {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn err_str(e: crate::error::Error) -> String {
    format!("{}: {e}", e.name())
}

fn eulerian_sums() -> std::result::Result<String, String> {
    let mut fact = BigInt::one();
    for n in 1..=30u32 {
        fact *= n;
        if eulerian_poly(n as usize).coefficient_sum() != fact {
            return Err(format!("A_{n}(1) != {n}!"));
        }
    }
    Ok("exact for n = 1..30".into())
}

fn eulerian_zero_structure() -> std::result::Result<String, String> {
    let mut min_next = f64::INFINITY;
    for n in 2..=25usize {
        let zeros = eulerian_zeros(n).map_err(err_str)?;
        if zeros.len() != n - 1 {
            return Err(format!("A_{n} has {} real zeros", zeros.len()));
        }
        let p = eulerian_poly(n);
        let dp = p.derivative();
        let next = eulerian_poly(n + 1);
        for w in zeros.windows(2) {
            if w[0] >= w[1] {
                return Err(format!("A_{n}: zeros not distinct"));
            }
        }
        for &z in &zeros {
            if z >= 0.0 {
                return Err(format!("A_{n}: zero {z} not negative"));
            }
            if dp.eval(c(z, 0.0)).norm() == 0.0 {
                return Err(format!("A_{n}: zero {z} not simple"));
            }
            min_next = min_next.min(next.relative_abs_at(c(z, 0.0)));
        }
        if min_next <= 1e-10 {
            return Err(format!("A_{n} and A_{} share a zero (scaled {min_next:.3e})", n + 1));
        }
    }
    Ok(format!("min scaled |A_(n+1)| at zeros of A_n {min_next:.3e}"))
}

fn odd_bernoulli() -> std::result::Result<String, String> {
    for k in 1..=15 {
        if !bernoulli(2 * k + 1).is_zero() {
            return Err(format!("B_{} != 0", 2 * k + 1));
        }
    }
    Ok("B_3..B_31 odd all zero".into())
}

fn taylor(shift: f64, extra: f64) -> std::result::Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut max = 0.0f64;
    for _ in 0..10 {
        let s = c(rng.gen_range(1.1..3.0), rng.gen_range(-2.0..2.0));
        for n in [2.0f64, 5.0, 10.0] {
            let nn = c(n, 0.0);
            let mut sum = c(0.0, 0.0);
            for k in 0..=40 {
                sum += poch(s - shift, k) * nn.powc(-s - k as f64 - extra);
            }
            let lhs = (nn - 1.0).powc(shift - s) - nn.powc(shift - s);
            max = max.max((sum - lhs).norm());
        }
    }
    worst(max, 1e-10, "deviation")
}

fn taylor_first() -> std::result::Result<String, String> {
    taylor(1.0, 0.0)
}

fn taylor_second() -> std::result::Result<String, String> {
    taylor(0.0, 1.0)
}

fn small_dirichlet_tuples(max_modulus: u64) -> Vec<DirichletTuple<f64>> {
    let chars: Vec<_> = (1..=max_modulus).flat_map(|n| DirichletCharacter::all(n).unwrap()).collect();
    let mut out: Vec<_> = chars.iter().map(|x| DirichletTuple::new(vec![x.clone()]).unwrap()).collect();
    for a in &chars {
        for b in &chars {
            out.push(DirichletTuple::new(vec![a.clone(), b.clone()]).unwrap());
        }
    }
    out
}

/// Random point of `U_r` whose margin lies in `[lo, hi)`.
fn u_r_point(rng: &mut ChaCha8Rng, r: usize, lo: f64, hi: f64) -> EvalPoint<f64> {
    let mut coords = Vec::with_capacity(r);
    let mut prefix = 0.0;
    for i in 1..=r {
        let target = i as f64 + rng.gen_range(lo..hi);
        let re = if i == 1 { target } else { target - prefix };
        prefix += re;
        coords.push(c(re, rng.gen_range(-1.0..1.0)));
    }
    EvalPoint::new(coords).unwrap()
}

fn decomposition_matches_direct() -> std::result::Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 1);
    let mut max = 0.0f64;
    let tuples = small_dirichlet_tuples(5);
    for t in &tuples {
        let p = u_r_point(&mut rng, t.depth(), 2.5, 3.5);
        let direct = eval_dirichlet_direct(t, &p, 1e-10).map_err(err_str)?.value;
        let mut sum = c(0.0, 0.0);
        for term in dirichlet_decomposition(t) {
            if term.coefficient.norm() < 1e-15 {
                continue;
            }
            sum += term.coefficient * eval_additive_direct(&term.additive_tuple(), &p, 1e-11).map_err(err_str)?.value;
        }
        max = max.max((sum - direct).norm());
    }
    worst(max, 1e-8, &format!("deviation over {} tuples", tuples.len()))
}

fn decomposition_tuples_valid() -> std::result::Result<String, String> {
    for t in small_dirichlet_tuples(5) {
        for term in dirichlet_decomposition(&t) {
            let add = term.additive_tuple();
            if add.partial_products().iter().any(|g| (g.norm() - 1.0).abs() > 1e-12) {
                return Err(format!("frequencies {:?} leave the unit circle", term.frequencies));
            }
        }
    }
    Ok("all partial products on the unit circle".into())
}

fn phi_psi_inverse() -> std::result::Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 2);
    let mut max = 0.0f64;
    for n in 1..=12usize {
        let phi: Vec<_> = (0..n).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let psi: Vec<_> = (1..=n as i64).map(|b| phi_to_psi(&phi, b)).collect();
        for a in 1..=n {
            max = max.max((psi_to_phi(&psi, a as i64) - phi[a - 1]).norm());
        }
    }
    worst(max, 1e-12, "round-trip error")
}

fn sample_additive_tuples() -> Vec<AdditiveTuple<f64>> {
    let root = |b, n| AdditiveCharacter::<f64>::root(b, n).unwrap();
    vec![
        AdditiveTuple::trivial(1),
        AdditiveTuple::new(vec![root(1, 2)]).unwrap(),
        AdditiveTuple::trivial(2),
        AdditiveTuple::new(vec![root(1, 2), root(1, 2)]).unwrap(),
        AdditiveTuple::new(vec![root(1, 4), root(3, 4)]).unwrap(),
        AdditiveTuple::new(vec![root(1, 3), root(1, 5)]).unwrap(),
        AdditiveTuple::trivial(3),
        AdditiveTuple::new(vec![root(1, 2), AdditiveCharacter::trivial(), root(1, 7)]).unwrap(),
    ]
}

fn monotone_refinement() -> std::result::Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 3);
    for t in sample_additive_tuples() {
        let p = u_r_point(&mut rng, t.depth(), 2.5, 3.5);
        let mut prev = eval_additive_direct(&t, &p, 1e-4).map_err(err_str)?;
        let mut tol = 1e-4;
        while tol > 1e-10 {
            tol /= 2.0;
            let next = eval_additive_direct(&t, &p, tol).map_err(err_str)?;
            if (next.value - prev.value).norm() > prev.abs_error_bound {
                return Err(format!("tol {tol:.1e}: change exceeds previous bound"));
            }
            prev = next;
        }
    }
    Ok("value changes stay within the previous bound down to 1e-10".into())
}

fn conjugation_symmetry() -> std::result::Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 4);
    let mut max = 0.0f64;
    for t in sample_additive_tuples() {
        let p = u_r_point(&mut rng, t.depth(), 2.5, 3.5);
        let v = eval_additive_direct(&t, &p, 1e-10).map_err(err_str)?.value;
        let w = eval_additive_direct(&t.conj(), &p.conj(), 1e-10).map_err(err_str)?.value;
        max = max.max((v.conj() - w).norm());
    }
    for t in small_dirichlet_tuples(3) {
        let p = u_r_point(&mut rng, t.depth(), 2.5, 3.5);
        let v = eval_dirichlet_direct(&t, &p, 1e-10).map_err(err_str)?.value;
        let w = eval_dirichlet_direct(&t.conj(), &p.conj(), 1e-10).map_err(err_str)?.value;
        max = max.max((v.conj() - w).norm());
    }
    worst(max, 1e-12, "asymmetry")
}

fn index_tuples(moduli: &[u64]) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for &n in moduli {
        out = out.into_iter().flat_map(|v: Vec<u64>| (1..=n).map(move |a| [v.clone(), vec![a]].concat())).collect();
    }
    out
}

fn psi_phi_identities() -> std::result::Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 5);
    let mut max = 0.0f64;
    let mut moduli_sets = vec![];
    for a in 1..=3u64 {
        moduli_sets.push(vec![a]);
        for b in 1..=3u64 {
            moduli_sets.push(vec![a, b]);
        }
    }
    for moduli in moduli_sets {
        let p = u_r_point(&mut rng, moduli.len(), 2.5, 3.5);
        let idx = index_tuples(&moduli);
        let mut phi = Vec::new();
        let mut psi = Vec::new();
        for a in &idx {
            phi.push(eval_phi_direct(&p, a, &moduli, 1e-11).map_err(err_str)?.value);
            let b: Vec<i64> = a.iter().map(|&x| x as i64).collect();
            psi.push(eval_psi_direct(&p, &b, &moduli, 1e-11).map_err(err_str)?.value);
        }
        let phase = |a: &[u64], b: &[u64], sign: f64| {
            let x: f64 = a.iter().zip(b).zip(&moduli).map(|((&a, &b), &n)| (a * b) as f64 / n as f64).sum();
            Complex64::from_polar(1.0, sign * 2.0 * std::f64::consts::PI * x)
        };
        let total: f64 = moduli.iter().product::<u64>() as f64;
        for (bi, b) in idx.iter().enumerate() {
            let rebuilt: Complex64 = idx.iter().zip(&phi).map(|(a, v)| phase(a, b, 1.0) * v).sum();
            max = max.max((rebuilt - psi[bi]).norm());
        }
        for (ai, a) in idx.iter().enumerate() {
            let rebuilt: Complex64 = idx.iter().zip(&psi).map(|(b, v)| phase(a, b, -1.0) * v).sum::<Complex64>() / total;
            max = max.max((rebuilt - phi[ai]).norm());
        }
    }
    worst(max, 1e-8, "identity defect")
}

fn rejection() -> std::result::Result<String, String> {
    let cases = [vec![c(1.5, 0.0)], vec![c(1.0, 0.0), c(0.0, 1.2)], vec![c(-1.0, 0.0), c(1.01, 0.0)]];
    for values in cases {
        if AdditiveTuple::from_values(&values).is_ok() {
            return Err(format!("accepted {values:?}"));
        }
    }
    Ok("all lists with |g_i(1)| > 1 rejected".into())
}

fn inverse_identities() -> std::result::Result<String, String> {
    // f64 sizes where cancellation in B·A stays below 1e-11; q = 20 needs
    // extended precision and is covered by the acceptance suite
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 6);
    let fs = [c(-1.0, 0.0), c(0.0, 1.0), Complex64::from_polar(1.0, 0.4 * std::f64::consts::PI)];
    let mut max = 0.0f64;
    for k in 0..20 {
        let t = c(rng.gen_range(-0.5..2.0), rng.gen_range(-1.0..1.0));
        let f = if k % 4 == 3 { c(rng.gen_range(-0.5..0.4), rng.gen_range(-0.5..0.5)) } else { fs[k % 3] };
        let q1 = 10;
        let d1 = build_b1(t, q1).map_err(err_str)?.identity_defect(&build_a1(t, q1, 0));
        let q2 = 6;
        let a2 = build_a2(f, t, q2, 0).map_err(err_str)?;
        let d2 = build_b2(f, t, q2).map_err(err_str)?.identity_defect(&a2);
        max = max.max(d1).max(d2);
    }
    worst(max, 1e-11, "max-norm defect (q = 10 and 6)")
}

fn agreement_on_u_r() -> std::result::Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 7);
    let cfg = ContinuationConfig::with_tol(1e-10);
    let tuples = sample_additive_tuples();
    let mut max = 0.0f64;
    for k in 0..10 {
        let t = &tuples[k % tuples.len()];
        let p = u_r_point(&mut rng, t.depth(), 2.5, 3.5);
        let direct = eval_additive_direct(t, &p, 1e-10).map_err(err_str)?.value;
        let cont = continue_eval(t, &p, &cfg).map_err(err_str)?.value;
        max = max.max((direct - cont).norm());
    }
    worst(max, 1e-8, "deviation")
}

pub(crate) fn outside_points() -> Vec<(AdditiveTuple<f64>, Vec<Complex64>)> {
    let minus = AdditiveTuple::from_values(&[c(-1.0, 0.0), c(-1.0, 0.0)]).unwrap();
    let conj = AdditiveTuple::new(vec![
        AdditiveCharacter::root(1, 4).unwrap(),
        AdditiveCharacter::root(3, 4).unwrap(),
    ])
    .unwrap();
    vec![
        (AdditiveTuple::trivial(2), vec![c(-1.0, 0.0), c(4.0, 0.0)]),
        (minus.clone(), vec![c(0.5, 0.0), c(0.2, 0.0)]),
        (AdditiveTuple::trivial(1), vec![c(-2.5, 1.0)]),
        (AdditiveTuple::new(vec![AdditiveCharacter::root(1, 3).unwrap()]).unwrap(), vec![c(-1.5, 0.5)]),
        (AdditiveTuple::trivial(2), vec![c(-3.5, 0.0), c(1.2, 0.0)]),
        (AdditiveTuple::trivial(2), vec![c(0.3, 2.0), c(-0.6, 0.5)]),
        (minus, vec![c(-1.2, 0.3), c(0.7, -0.2)]),
        (conj, vec![c(0.4, 0.0), c(-0.9, 0.6)]),
        (AdditiveTuple::trivial(3), vec![c(-0.5, 0.0), c(0.3, 0.0), c(0.7, 0.0)]),
        (
            AdditiveTuple::from_values(&[c(-1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)]).unwrap(),
            vec![c(0.6, 0.1), c(-0.8, 0.0), c(1.1, 0.0)],
        ),
    ]
}

fn parameter_independence() -> std::result::Result<String, String> {
    let mut max = 0.0f64;
    for (t, coords) in outside_points() {
        let p = EvalPoint::new(coords).unwrap();
        let mut vals = Vec::new();
        for (q, k) in [(10, 20), (14, 30), (18, 40)] {
            let cfg = ContinuationConfig { q: Some(q), k, ..ContinuationConfig::with_tol(1e-10) };
            match continue_eval(&t, &p, &cfg) {
                Ok(v) => vals.push(v.value),
                Err(e) if matches!(e.name(), "NearPole" | "TailNotCertified") => {}
                Err(e) => return Err(err_str(e)),
            }
        }
        for v in &vals {
            max = max.max((v - vals[0]).norm());
        }
    }
    worst(max, 1e-7, "spread over (q, K)")
}

fn translation_identities() -> std::result::Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 8);
    let root = |b, n| AdditiveCharacter::<f64>::root(b, n).unwrap();
    let tuples = [
        AdditiveTuple::trivial(2),
        AdditiveTuple::new(vec![root(1, 2), root(1, 3)]).unwrap(),
        AdditiveTuple::trivial(3),
        AdditiveTuple::new(vec![root(1, 4), root(3, 4), root(1, 2)]).unwrap(),
    ];
    let mut max = 0.0f64;
    for t in &tuples {
        for _ in 0..3 {
            let p = u_r_point(&mut rng, t.depth(), 0.5, 1.5);
            let chk = translation_check(t, &p, 60).map_err(err_str)?;
            max = max.max((chk.lhs - chk.rhs).norm());
        }
    }
    worst(max, 1e-8, "|LHS - RHS|")
}

/// Tuples covering the three pole configurations at depth at most 2.
pub(crate) fn pole_sweep_tuples() -> Vec<AdditiveTuple<f64>> {
    let f0 = c(-2.0 + 3f64.sqrt(), 0.0);
    vec![
        AdditiveTuple::trivial(1),
        AdditiveTuple::trivial(2),
        AdditiveTuple::from_values(&[c(1.0, 0.0), c(-1.0, 0.0)]).unwrap(),
        AdditiveTuple::from_values(&[c(-1.0, 0.0), c(-1.0, 0.0)]).unwrap(),
        AdditiveTuple::from_values(&[c(0.0, 1.0), c(0.0, -1.0)]).unwrap(),
        AdditiveTuple::from_values(&[f0, c(1.0, 0.0) / f0]).unwrap(),
    ]
}

/// Free coordinates of a generic chart point on `h`.
pub(crate) fn chart_rest(depth: usize, h: &Hyperplane) -> Vec<Complex64> {
    match (depth, h.index) {
        (1, _) => vec![],
        (_, 1) => vec![c(2.6, 0.3); depth - 1],
        _ => vec![c(0.3, 0.2); depth - 1],
    }
}

fn residue_sweep(exact: bool) -> std::result::Result<String, String> {
    let cfg = ContinuationConfig::with_tol(1e-11);
    let mut max = 0.0f64;
    let mut min_abs = f64::INFINITY;
    let mut count = 0;
    for t in pole_sweep_tuples() {
        let ex = exact_poles(&t, -4);
        for h in possible_poles(&t, -4) {
            if ex.contains(&h) != exact {
                continue;
            }
            let rest = chart_rest(t.depth(), &h);
            let num = residue_numeric_check(&t, &h, &rest, 1e-2, &cfg).map_err(err_str)?;
            count += 1;
            if exact {
                let sym = residue(&t, &h, &rest, &cfg).map_err(err_str)?;
                max = max.max((sym - num).norm());
                min_abs = min_abs.min(sym.norm());
            } else {
                max = max.max(num.norm());
            }
        }
    }
    if exact {
        let detail = format!("{count} hyperplanes, max |closed - numeric| {max:.3e}, min |residue| {min_abs:.3e}");
        if max < 1e-4 && min_abs > 1e-8 {
            Ok(detail)
        } else {
            Err(detail)
        }
    } else {
        worst(max, 1e-6, &format!("numeric residue over {count} hyperplanes"))
    }
}

fn exact_subset() -> std::result::Result<String, String> {
    for t in pole_sweep_tuples().into_iter().chain([AdditiveTuple::trivial(3)]) {
        for n_min in [-6, -1, 0, 2] {
            let possible = possible_poles(&t, n_min);
            if let Some(h) = exact_poles(&t, n_min).into_iter().find(|h| !possible.contains(h)) {
                return Err(format!("{h} exact but not possible"));
            }
        }
    }
    Ok("holds on all sampled tuples".into())
}

fn exact_residues() -> std::result::Result<String, String> {
    residue_sweep(true)
}

fn removed_residues() -> std::result::Result<String, String> {
    residue_sweep(false)
}

fn dirichlet_consistency() -> std::result::Result<String, String> {
    let cfg = ContinuationConfig::with_tol(1e-11);
    let h = Hyperplane::new(1, 1);
    let mut max = 0.0f64;
    let chi3 = DirichletCharacter::<f64>::all(3).unwrap();
    let chi4 = DirichletCharacter::<f64>::all(4).unwrap();
    let tuples = [
        DirichletTuple::new(vec![chi3[0].clone()]).unwrap(),
        DirichletTuple::new(vec![chi3[0].clone(), chi3[1].clone()]).unwrap(),
        DirichletTuple::new(vec![chi4[0].clone(), chi4[0].clone()]).unwrap(),
    ];
    for t in &tuples {
        let rest = vec![c(2.5, 0.4); t.depth() - 1];
        let sym = dirichlet_residue(t, &h, &rest, &cfg).map_err(err_str)?;
        let num = dirichlet_residue_numeric_check(t, &h, &rest, 1e-2, &cfg).map_err(err_str)?;
        max = max.max((sym - num).norm());
    }
    worst(max, 1e-4, "|weighted sum - numeric|")
}
