//! Acceptance criteria, one PASS/FAIL line each.

use std::time::Instant;

use f128::f128;
use multizeta::characters::DirichletCharacter;
use multizeta::continuation::translation_check;
use multizeta::poles::dirichlet_atlas;
use multizeta::scalar::root_of_unity;
use multizeta::*;
use num_complex::Complex;
use num_traits::{FromPrimitive, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn point(xs: &[Complex64]) -> EvalPoint64 {
    EvalPoint::new(xs.to_vec()).unwrap()
}

fn u_r_point(rng: &mut ChaCha8Rng, r: usize, lo: f64, hi: f64) -> EvalPoint64 {
    let mut coords = Vec::new();
    let mut prefix = 0.0;
    for i in 1..=r {
        let target = i as f64 + rng.gen_range(lo..hi);
        let re = target - prefix;
        prefix += re;
        coords.push(c(re, rng.gen_range(-1.0..1.0)));
    }
    point(&coords)
}

// ---- independent oracles ----

const EVEN_BERNOULLI: [f64; 8] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
];

/// Euler–Maclaurin for real `s ≠ 1`.
fn zeta_em(s: f64) -> f64 {
    let n = 20.0f64;
    let mut sum: f64 = (1..20).map(|k| (k as f64).powf(-s)).sum();
    sum += n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s);
    let mut rising = s;
    let mut fact = 2.0;
    for (k, b) in EVEN_BERNOULLI.iter().enumerate() {
        let m = 2 * k + 2;
        sum += b / fact * rising * n.powf(-s - (m as f64) + 1.0);
        rising *= (s + m as f64 - 1.0) * (s + m as f64);
        fact *= (m + 1) as f64 * (m + 2) as f64;
    }
    sum
}

/// Mean of the last two partial sums of an alternating series.
fn alternating(term: impl Fn(u64) -> f64, n: u64) -> f64 {
    let mut s = 0.0;
    let mut prev = 0.0;
    for k in 0..n {
        prev = s;
        s += term(k);
    }
    0.5 * (s + prev)
}

/// `Σ_{n1 > n2 ≥ 1} n1^{-2} n2^{-1}` summed to `N` with the leading tail.
fn double_sum_21() -> f64 {
    let n = 1_000_000u64;
    let mut h = 0.0;
    let mut s = 0.0;
    for k in 1..=n {
        let x = k as f64;
        s += h / (x * x);
        h += 1.0 / x;
    }
    let nf = n as f64;
    s + (nf.ln() + 1.0 + 0.577_215_664_901_532_9) / nf
}

// ---- reporting ----

struct Report {
    failed: usize,
}

impl Report {
    fn line(&mut self, k: usize, name: &str, ok: bool, detail: String) {
        if !ok {
            self.failed += 1;
        }
        println!("{} criterion {k}: {name} ({detail})", if ok { "PASS" } else { "FAIL" });
    }
}

fn quad(z: Complex64) -> Complex<f128> {
    Complex::new(f128::from_f64(z.re).unwrap(), f128::from_f64(z.im).unwrap())
}

fn criterion_1(rep: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut d1, mut d2, mut d1_f64, mut d2_f64) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for k in 0..20 {
        let t = c(rng.gen_range(-0.5..2.5), rng.gen_range(-1.5..1.5));
        let f: Complex<f128> = match k % 4 {
            0 => Complex::new(f128::from_f64(-1.0).unwrap(), f128::from_f64(0.0).unwrap()),
            1 => Complex::new(f128::from_f64(0.0).unwrap(), f128::from_f64(1.0).unwrap()),
            2 => root_of_unity(1, 5),
            _ => root_of_unity(1, 7),
        };
        let fd = c(f.re.to_f64().unwrap(), f.im.to_f64().unwrap());
        let q = 20;
        let tq = quad(t);
        d1 = d1.max(build_b1(tq, q).unwrap().identity_defect(&build_a1(tq, q, 0)));
        d2 = d2.max(build_b2(f, tq, q).unwrap().identity_defect(&build_a2(f, tq, q, 0).unwrap()));
        d1_f64 = d1_f64.max(build_b1(t, q).unwrap().identity_defect(&build_a1(t, q, 0)));
        d2_f64 = d2_f64.max(build_b2(fd, t, q).unwrap().identity_defect(&build_a2(fd, t, q, 0).unwrap()));
    }
    rep.line(
        1,
        "operator inverses at q = 20",
        d1 < 1e-11 && d2 < 1e-11,
        format!("binary128: B1A1 {d1:.2e}, B2A2 {d2:.2e}; f64 for reference: {d1_f64:.2e}, {d2_f64:.2e}"),
    );
}

fn criterion_2(rep: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let root = |b, n| AdditiveCharacter64::root(b, n).unwrap();
    let tuples = [
        AdditiveTuple64::trivial(2),
        AdditiveTuple64::new(vec![root(1, 2), root(1, 3)]).unwrap(),
        AdditiveTuple64::trivial(3),
        AdditiveTuple64::new(vec![root(1, 4), root(3, 4), root(1, 2)]).unwrap(),
    ];
    let mut max = 0.0f64;
    let mut err = None;
    for t in &tuples {
        for _ in 0..10 {
            let p = u_r_point(&mut rng, t.depth(), 0.5, 1.0);
            match translation_check(t, &p, 60) {
                Ok(chk) => max = max.max((chk.lhs - chk.rhs).norm() + chk.tail_bound),
                Err(e) => err = Some(e.name()),
            }
        }
    }
    rep.line(
        2,
        "translation formulas, depths 2 and 3, both branches",
        err.is_none() && max < 1e-8,
        format!("40 points, max |LHS - RHS| + truncation {max:.2e}{}", err.map(|e| format!(", error {e}")).unwrap_or_default()),
    );
}

fn criterion_3(rep: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let cfg = ContinuationConfig::with_tol(1e-10);
    let root = |b, n| AdditiveCharacter64::root(b, n).unwrap();
    let inside = [
        AdditiveTuple64::trivial(1),
        AdditiveTuple64::trivial(2),
        AdditiveTuple64::new(vec![root(1, 2), root(1, 2)]).unwrap(),
        AdditiveTuple64::new(vec![root(1, 3), root(2, 5)]).unwrap(),
        AdditiveTuple64::trivial(3),
    ];
    let mut agree = 0.0f64;
    let mut err = None;
    for _ in 0..2 {
        for t in &inside {
            let p = u_r_point(&mut rng, t.depth(), 2.5, 3.5);
            match (eval_additive_direct(t, &p, 1e-10), continue_eval(t, &p, &cfg)) {
                (Ok(a), Ok(b)) => agree = agree.max((a.value - b.value).norm()),
                (Err(e), _) | (_, Err(e)) => err = Some(e.name()),
            }
        }
    }
    // (frequency b/N per coordinate, point)
    let outside: Vec<(Vec<(i64, i64)>, Vec<(f64, f64)>)> = vec![
        (vec![(0, 1), (0, 1)], vec![(-1., 0.), (4., 0.)]),
        (vec![(1, 2), (1, 2)], vec![(0.5, 0.), (0.2, 0.)]),
        (vec![(0, 1), (0, 1)], vec![(0.5, 0.), (0.2, 0.)]),
        (vec![(0, 1)], vec![(-2.5, 1.)]),
        (vec![(1, 3)], vec![(-1.5, 0.5)]),
        (vec![(0, 1), (0, 1)], vec![(-3.5, 0.), (1.2, 0.)]),
        (vec![(1, 2), (1, 2)], vec![(-1.2, 0.3), (0.7, -0.2)]),
        (vec![(1, 4), (3, 4)], vec![(0.4, 0.), (-0.9, 0.6)]),
        (vec![(0, 1), (0, 1), (0, 1)], vec![(-0.5, 0.), (0.3, 0.), (0.7, 0.)]),
        (vec![(1, 2), (0, 1), (1, 2)], vec![(0.6, 0.1), (-0.8, 0.), (1.1, 0.)]),
    ];
    let mut spread = 0.0f64;
    let mut quad_runs = 0;
    for (freqs, xs) in &outside {
        let mut vals = Vec::new();
        for (q, k) in [(10, 20), (14, 30), (18, 40)] {
            let cfg = ContinuationConfig { q: Some(q), k, ..ContinuationConfig::with_tol(1e-10) };
            match continue_at::<f64>(freqs, xs, &cfg) {
                Ok(v) => vals.push(v),
                // f64 cancellation in the B2 row; binary128 removes it
                Err(Error::TailNotCertified { .. }) => {
                    quad_runs += 1;
                    match continue_at::<f128>(freqs, xs, &cfg) {
                        Ok(v) => vals.push(v),
                        Err(e) => err = Some(e.name()),
                    }
                }
                Err(e) => err = Some(e.name()),
            }
        }
        for v in &vals {
            spread = spread.max((v - vals[0]).norm());
        }
    }
    rep.line(
        3,
        "continuation agrees with direct summation and across (q, K)",
        err.is_none() && agree < 1e-8 && spread < 1e-7,
        format!(
            "10 points in U_r max {agree:.2e}; 10 points outside max spread {spread:.2e}, {quad_runs} of 30 runs in binary128 after f64 TailNotCertified{}",
            err.map(|e| format!(", error {e}")).unwrap_or_default()
        ),
    );
}

fn continue_at<T: Real>(freqs: &[(i64, i64)], xs: &[(f64, f64)], cfg: &ContinuationConfig) -> Result<Complex64> {
    let chars = freqs.iter().map(|&(b, n)| AdditiveCharacter::<T>::root(b, n)).collect::<Result<Vec<_>>>()?;
    let tuple = AdditiveTuple::new(chars)?;
    let p = EvalPoint::new(xs.iter().map(|&(re, im)| Complex::new(T::of(re), T::of(im))).collect())?;
    let v = continue_eval(&tuple, &p, cfg)?.value;
    Ok(c(v.re.to_f64_lossy(), v.im.to_f64_lossy()))
}

fn criterion_4(rep: &mut Report) {
    let cfg = ContinuationConfig::with_tol(1e-11);
    let eval1 = |t: &AdditiveTuple64, s: f64| evaluate(t, &point(&[c(s, 0.)]), &cfg).unwrap().value.re;
    let zeta = AdditiveTuple64::trivial(1);
    let minus = AdditiveTuple64::from_values(&[c(-1., 0.)]).unwrap();
    let chi4 = DirichletCharacter64::new(4, vec![c(1., 0.), c(0., 0.), c(-1., 0.), c(0., 0.)]).unwrap();
    let chi4 = DirichletTuple64::new(vec![chi4]).unwrap();
    let anchors = [
        ("zeta(2)", eval1(&zeta, 2.0), zeta_em(2.0), 1.644_934_066_8),
        ("zeta(0)", eval1(&zeta, 0.0), zeta_em(0.0), -0.5),
        (
            "zeta_2(2,1)",
            evaluate(&AdditiveTuple64::trivial(2), &point(&[c(2., 0.), c(1., 0.)]), &cfg).unwrap().value.re,
            double_sum_21(),
            1.202_056_903_2,
        ),
        (
            "L_1(f;2), f(1) = -1",
            eval1(&minus, 2.0),
            alternating(|k| if k == 0 { 0.0 } else { (-1f64).powi(k as i32) / (k * k) as f64 }, 1_000_001),
            -0.822_467_033_4,
        ),
        (
            "L(2; chi_4)",
            evaluate_dirichlet(&chi4, &point(&[c(2., 0.)]), &cfg).unwrap().value.re,
            alternating(|k| (-1f64).powi(k as i32) / ((2 * k + 1) * (2 * k + 1)) as f64, 1_000_000),
            0.915_965_594_2,
        ),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, lib, oracle, frozen) in anchors {
        let dev = (lib - oracle).abs();
        ok &= dev < 1e-8 && (oracle - frozen).abs() < 1e-9 + 1e-10;
        parts.push(format!("{name} {lib:.10} (oracle dev {dev:.1e})"));
    }
    rep.line(4, "known-value anchors", ok, parts.join("; "));
}

fn criterion_5(rep: &mut Report) {
    let t = AdditiveTuple64::trivial(2);
    let cfg = ContinuationConfig::with_tol(1e-11);
    let mut max_num = 0.0f64;
    let mut max_formula = 0.0f64;
    let mut err = None;
    let two = [c(0.3, 0.2), c(-0.4, 0.7)];
    let mut cases: Vec<(Hyperplane, Complex64, Complex64)> = Vec::new();
    for &s2 in &[c(3., 0.), c(2.5, 1.0)] {
        let zeta_s2 = evaluate(&AdditiveTuple64::trivial(1), &point(&[s2]), &cfg).unwrap().value;
        cases.push((Hyperplane::new(1, 1), s2, zeta_s2));
    }
    // the s2 = 3 oracle is independent of the evaluator
    max_formula = max_formula.max((cases[0].2.re - zeta_em(3.0)).abs());
    for &s1 in &two {
        cases.push((Hyperplane::new(2, 2), s1, c(1., 0.) / (s1 - 1.0)));
        cases.push((Hyperplane::new(2, 1), s1, c(-0.5, 0.)));
        cases.push((Hyperplane::new(2, 0), s1, s1 / 12.0));
    }
    for (h, rest, expect) in cases {
        match (residue(&t, &h, &[rest], &cfg), residue_numeric_check(&t, &h, &[rest], 1e-2, &cfg)) {
            (Ok(sym), Ok(num)) => {
                max_num = max_num.max((sym - num).norm());
                max_formula = max_formula.max((sym - expect).norm());
            }
            (Err(e), _) | (_, Err(e)) => err = Some(e.name()),
        }
    }
    rep.line(
        5,
        "residues of the trivial depth-2 function",
        err.is_none() && max_num < 1e-4 && max_formula < 1e-8,
        format!(
            "8 chart points, max |closed - numeric| {max_num:.2e}, max |closed - formula| {max_formula:.2e}{}",
            err.map(|e| format!(", error {e}")).unwrap_or_default()
        ),
    );
}

fn criterion_6(rep: &mut Report) {
    let cfg = ContinuationConfig::with_tol(1e-11);
    let start = Instant::now();
    let rest = [c(0.3, 0.0)];
    let num = |t: &AdditiveTuple64, n| residue_numeric_check(t, &Hyperplane::new(2, n), &rest, 1e-2, &cfg);
    let trivial = AdditiveTuple64::trivial(2);
    let minus = AdditiveTuple64::from_values(&[c(-1., 0.), c(-1., 0.)]).unwrap();
    let mut zero_max = 0.0f64;
    let mut nonzero_min = f64::INFINITY;
    let mut err = None;
    let mut take = |r: Result<Complex64>, zero: bool| match r {
        Ok(v) if zero => zero_max = zero_max.max(v.norm()),
        Ok(v) => nonzero_min = nonzero_min.min(v.norm()),
        Err(e) => err = Some(e.name()),
    };
    for n in [-1, -3, -5] {
        take(num(&trivial, n), true);
    }
    for n in [-1, -3] {
        take(num(&minus, n), true);
    }
    for n in [1, 0, -2] {
        take(num(&minus, n), false);
    }
    let listed = exact_poles(&trivial, -6).iter().filter(|h| h.index == 2).map(|h| h.level).collect::<Vec<_>>()
        == vec![2, 1, 0, -2, -4, -6]
        && exact_poles(&minus, -5).iter().map(|h| h.level).collect::<Vec<_>>() == vec![1, 0, -2, -4];
    rep.line(
        6,
        "exact-pole exception sets",
        err.is_none() && listed && zero_max < 1e-6 && nonzero_min > 1e-8,
        format!(
            "removed levels max {zero_max:.2e}, kept levels min {nonzero_min:.2e}, lists {}, {:.1} s{}",
            if listed { "match" } else { "differ" },
            start.elapsed().as_secs_f64(),
            err.map(|e| format!(", error {e}")).unwrap_or_default()
        ),
    );
}

fn criterion_7(rep: &mut Report) {
    let mut ok = true;
    let mut min_common = f64::INFINITY;
    for n in 2..=25 {
        let zeros = eulerian_zeros(n).unwrap();
        let p = eulerian_poly(n);
        let next = eulerian_poly(n + 1);
        ok &= zeros.len() == n - 1 && zeros.iter().all(|&z| z < 0.0);
        ok &= zeros.windows(2).all(|w| w[0] < w[1]);
        for &z in &zeros {
            // a sign change across z certifies a zero of odd multiplicity
            let d = z.abs() * 1e-9;
            ok &= p.sign_at(z - d) * p.sign_at(z + d) < 0;
            min_common = min_common.min(next.relative_abs_at(c(z, 0.)));
        }
    }
    ok &= min_common > 1e-10;
    rep.line(
        7,
        "Eulerian zeros real, negative, simple; no common zeros (n <= 25)",
        ok,
        format!("min relative |A_(n+1)| on zeros of A_n {min_common:.2e}"),
    );
}

fn criterion_8(rep: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let chars: Vec<_> = (1..=4).flat_map(|n| DirichletCharacter::<f64>::all(n).unwrap()).collect();
    let mut tuples: Vec<DirichletTuple64> = chars.iter().map(|x| DirichletTuple::new(vec![x.clone()]).unwrap()).collect();
    for a in &chars {
        for b in &chars {
            tuples.push(DirichletTuple::new(vec![a.clone(), b.clone()]).unwrap());
        }
    }
    let mut max = 0.0f64;
    let mut atlas_ok = true;
    for t in &tuples {
        for _ in 0..3 {
            let p = u_r_point(&mut rng, t.depth(), 2.5, 3.5);
            let direct = eval_dirichlet_direct(t, &p, 1e-10).unwrap().value;
            let mut sum = c(0., 0.);
            for term in dirichlet_decomposition(t) {
                if term.coefficient.norm() > 1e-15 {
                    sum += term.coefficient * eval_additive_direct(&term.additive_tuple(), &p, 1e-11).unwrap().value;
                }
            }
            max = max.max((sum - direct).norm());
        }
        let mut want = vec![Hyperplane::new(1, 1)];
        if t.depth() == 2 {
            want.extend((-4..=2).rev().map(|n| Hyperplane::new(2, n)));
        }
        let atlas = dirichlet_atlas(t, -4);
        atlas_ok &= atlas.iter().map(|r| r.hyperplane).collect::<Vec<_>>() == want;
        atlas_ok &= atlas.iter().all(|r| r.status == PoleStatus::PossiblePole);
    }
    rep.line(
        8,
        "Dirichlet decomposition and pole atlas",
        max < 1e-8 && atlas_ok,
        format!(
            "{} tuples x 3 points, max deviation {max:.2e}, atlas {}",
            tuples.len(),
            if atlas_ok { "matches" } else { "differs" }
        ),
    );
}

fn main() {
    let mut rep = Report { failed: 0 };
    criterion_1(&mut rep);
    criterion_2(&mut rep);
    criterion_3(&mut rep);
    criterion_4(&mut rep);
    criterion_5(&mut rep);
    criterion_6(&mut rep);
    criterion_7(&mut rep);
    criterion_8(&mut rep);
    println!("acceptance: {} of 8 criteria passed", 8 - rep.failed);
    if rep.failed > 0 {
        std::process::exit(1);
    }
}
