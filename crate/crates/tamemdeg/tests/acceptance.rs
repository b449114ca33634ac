//! Acceptance criteria, one PASS/FAIL line each.  Exits nonzero on failure.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tamemdeg::aut2;
use tamemdeg::bracket::poisson_degree;
use tamemdeg::construct3::{build_469_family, build_4k2, four_k2_params, realize, Variant469};
use tamemdeg::decide3::{classify, enumerate, Status};
use tamemdeg::gallery::{gallery, nagata_invariant, nagata_power};
use tamemdeg::numsg::SemigroupPair;
use tamemdeg::poly::rat;
use tamemdeg::sample::{self, ChainSpec};
use tamemdeg::su_checks::{bounded_reduction_search, check_elementary_reduction};
use tamemdeg::{Degree, Generator, Multidegree, PolyMap, Polynomial};

type Check = std::result::Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T, E: std::fmt::Display>(r: std::result::Result<T, E>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn within(start: Instant, limit: Duration) -> Check {
    let t = start.elapsed();
    ensure!(t <= limit, "took {t:.2?}, limit {limit:?}");
    Ok(())
}

fn p3(s: &str) -> Polynomial {
    Polynomial::parse(s, &["x", "y", "z"]).expect("test polynomial")
}

fn finite_deg(p: &Polynomial) -> u64 {
    p.degree().finite().map_or(0, u64::from)
}

/// Brute-force membership table of `a·ℕ + b·ℕ` up to `limit`.
fn reachable(a: u64, b: u64, limit: u64) -> Vec<bool> {
    let mut r = vec![false; limit as usize + 1];
    r[0] = true;
    for k in 1..=limit as usize {
        r[k] = (k >= a as usize && r[k - a as usize]) || (k >= b as usize && r[k - b as usize]);
    }
    r
}

fn c1_gallery() -> Check {
    let start = Instant::now();
    let t21 = ok(gallery("su_t2t1"))?;
    ensure!(
        t21.mdeg() == Multidegree::from([9, 6, 3]),
        "T2∘T1 has {}",
        t21.mdeg()
    );
    let f = ok(gallery("su_example"))?;
    ensure!(
        f.mdeg() == Multidegree::from([9, 6, 8]),
        "L∘T3∘T2∘T1 has {}",
        f.mdeg()
    );
    within(start, Duration::from_secs(1))
}

fn c2_nagata() -> Check {
    let start = Instant::now();
    let q = nagata_invariant();
    for n in 1..=6u64 {
        let m = ok(nagata_power(n as u32))?;
        let want = Multidegree::from(&[4 * n - 3, 4 * n - 1, 4 * n + 1][..]);
        ensure!(
            m.mdeg() == want,
            "n = {n}: mdeg {} instead of {want}",
            m.mdeg()
        );
        let (f, g, h) = (m.component(0), m.component(1), m.component(2));
        let lhs = &(g * g) + &(h * f);
        ensure!(lhs == q, "n = {n}: g² + h·f = {lhs}");
    }
    within(start, Duration::from_secs(5))
}

fn c3_brackets() -> Check {
    let f = ok(gallery("su_example"))?;
    let d = ok(poisson_degree(f.component(0), f.component(1)))?;
    ensure!(d >= Degree::Finite(11), "deg[F1, F2] = {d:?}");
    // Independent recomputation of the two cancellations from their text form.
    let nine = finite_deg(&p3("(y + z^6)^2 - (x + z^4)^3"));
    let seven = finite_deg(&p3("(y + z^6 + 3/2*x*z^2)^2 - (x + z^4)^3"));
    ensure!(
        (nine, seven) == (9, 7),
        "direct cancellation degrees ({nine}, {seven})"
    );
    let w9 = ok(build_469_family(0, Variant469::Nine))?;
    let w7 = ok(build_469_family(0, Variant469::Seven))?;
    ensure!(
        (w9.cancellation_degree, w7.cancellation_degree) == (Some(9), Some(7)),
        "builders report {:?} and {:?}",
        w9.cancellation_degree,
        w7.cancellation_degree
    );
    Ok(())
}

fn c4_semigroups() -> Check {
    let start = Instant::now();
    let golden: [(u64, u64, &[u64]); 4] = [
        (5, 7, &[8, 9, 11, 13, 16, 18, 23]),
        (5, 11, &[12, 13, 14, 17, 18, 19, 23, 24, 28, 29, 34, 39]),
        (
            5,
            13,
            &[14, 16, 17, 19, 21, 22, 24, 27, 29, 32, 34, 37, 42, 47],
        ),
        (
            7,
            11,
            &[
                12, 13, 15, 16, 17, 19, 20, 23, 24, 26, 27, 30, 31, 34, 37, 38, 41, 45, 48, 52, 59,
            ],
        ),
    ];
    for (a, b, want) in golden {
        let s = ok(SemigroupPair::new(a, b))?;
        let gaps = ok(s.gaps(b))?;
        ensure!(gaps == want, "({a}, {b}) gaps {gaps:?}");
    }
    let f = ok(ok(SemigroupPair::new(5, 7))?.frobenius())?;
    ensure!(f == 23, "Frobenius(5, 7) = {f}");
    for a in 1..=40u64 {
        for b in 1..=40u64 {
            let limit = 2 * a * b;
            let table = reachable(a, b, limit);
            let s = ok(SemigroupPair::new(a, b))?;
            for k in 0..=limit {
                let m = s.member(k);
                ensure!(
                    m.is_some() == table[k as usize],
                    "({a}, {b}) membership of {k}"
                );
                if let Some((k1, k2)) = m {
                    ensure!(
                        k1 * s.d1() + k2 * s.d2() == k,
                        "({a}, {b}) bad decomposition of {k}"
                    );
                }
            }
            if s.gcd() == 1 {
                let largest = (0..=limit)
                    .rev()
                    .find(|&k| !table[k as usize])
                    .map_or(-1, |k| k as i64);
                ensure!(ok(s.frobenius())? == largest, "Frobenius({a}, {b})");
            }
        }
    }
    within(start, Duration::from_secs(10))
}

fn c5_decisions() -> Check {
    let expect = [
        ([3, 4, 5], Status::NotRealizable),
        ([5, 6, 9], Status::NotRealizable),
        ([37, 70, 105], Status::ConditionalOnJC2),
        ([4, 9, 10], Status::Unknown),
    ];
    for ([a, b, c], s) in expect {
        let got = ok(classify(a, b, c))?.status;
        ensure!(got == s, "({a}, {b}, {c}) gave {got}");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..1000 {
        let t: [u64; 3] = std::array::from_fn(|_| rng.gen_range(1..=80));
        let base = ok(classify(t[0], t[1], t[2]))?;
        for p in [[0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
            let c = ok(classify(t[p[0]], t[p[1]], t[p[2]]))?;
            ensure!(
                (c.status, c.rule) == (base.status, base.rule),
                "{t:?} and its permutation {p:?} disagree"
            );
        }
    }
    for d2 in 3..=40u64 {
        let table = reachable(3, d2, 40);
        for d3 in d2..=40u64 {
            let want = if d2 % 3 == 0 || table[d3 as usize] {
                Status::Realizable
            } else {
                Status::NotRealizable
            };
            let got = ok(classify(3, d2, d3))?.status;
            ensure!(
                got == want,
                "(3, {d2}, {d3}) gave {got}, formula says {want}"
            );
        }
    }
    Ok(())
}

fn c6_witnesses() -> Check {
    let start = Instant::now();
    let mut count = 0;
    for c in ok(enumerate(25))?
        .into_iter()
        .filter(|c| c.status == Status::Realizable)
    {
        let [a, b, d] = c.input;
        let w = ok(realize(a, b, d))?.ok_or_else(|| format!("no witness for {:?}", c.input))?;
        let maps: Vec<PolyMap> = w.factors.iter().map(Generator::to_map).collect();
        let composed = ok(PolyMap::compose_chain(3, &maps))?;
        ensure!(
            composed.mdeg() == Multidegree::from(&c.input[..]),
            "{:?}: recomposed mdeg {}",
            c.input,
            composed.mdeg()
        );
        ensure!(
            maps.iter().all(|m| Generator::recognize(m).is_some()),
            "{:?}: a factor is neither affine nor triangular",
            c.input
        );
        count += 1;
    }
    ensure!(count >= 200, "only {count} realizable triples");
    println!("     {count} witnesses verified");
    within(start, Duration::from_secs(60))
}

fn c7_four_k2() -> Check {
    for k in 3..=5u64 {
        for d3 in (5 * k + 1..=5 * k + 9).filter(|d| d % 2 == 1) {
            let (r, _) = ok(four_k2_params(k, d3))?;
            let w = ok(build_4k2(k, d3))?;
            let want = Multidegree::from(&[4, 4 * k + 2, d3][..]);
            ensure!(
                w.composed.mdeg() == want,
                "(4, {}, {d3}): {}",
                4 * k + 2,
                w.composed.mdeg()
            );
            let expected = 4 * k + 2 + r;
            ensure!(
                w.cancellation_degree.map(u64::from) == Some(expected),
                "k = {k}, d3 = {d3}: cancellation {:?}, expected {expected}",
                w.cancellation_degree
            );
            // The first two components are untouched by the last factor.
            let (f1, f2) = (w.composed.component(0), w.composed.component(1));
            let direct = finite_deg(&(&f2.pow(2) - &f1.pow(2 * k as u32 + 1)));
            ensure!(
                direct == expected,
                "k = {k}, d3 = {d3}: direct cancellation {direct}"
            );
        }
    }
    Ok(())
}

fn eval(f: &PolyMap, point: &[i64]) -> Result<Vec<Polynomial>, String> {
    let args: Vec<Polynomial> = point
        .iter()
        .map(|&v| Polynomial::constant(0, rat(v)))
        .collect();
    f.components()
        .iter()
        .map(|c| ok(c.substitute(&args)))
        .collect()
}

fn pairs(list: &[(u64, u64)]) -> BTreeSet<(u64, u64)> {
    list.iter().copied().collect()
}

fn c8_plane() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let spec = ChainSpec::default();
    for case in 0..500 {
        let chain = sample::random_plane_chain(&mut rng, &spec);
        let f = ok(chain.map())?;
        let d = ok(aut2::peel(&f)).map_err(|e| format!("case {case}: peel failed: {e}"))?;
        ensure!(
            d.length() == chain.degrees.len(),
            "case {case}: length {}",
            d.length()
        );
        ensure!(
            ok(d.compose())? == f,
            "case {case}: factors do not recompose to F"
        );
        let g = ok(d.inverse())?;
        ensure!(g.degree() == f.degree(), "case {case}: deg F⁻¹ ≠ deg F");
        let point = [rng.gen_range(-1..=1), rng.gen_range(-1..=1)];
        let image = eval(&f, &point)?;
        let back: Vec<Polynomial> = ok(g
            .components()
            .iter()
            .map(|c| c.substitute(&image))
            .collect::<tamemdeg::Result<_>>())?;
        let want: Vec<Polynomial> = point
            .iter()
            .map(|&v| Polynomial::constant(0, rat(v)))
            .collect();
        ensure!(back == want, "case {case}: F⁻¹(F(p)) ≠ p");
        let md = f.mdeg().finite().ok_or("zero component")?;
        let (d1, d2) = (md[0].min(md[1]), md[0].max(md[1]));
        ensure!(d2 % d1 == 0, "case {case}: bidegree ({d1}, {d2})");
        let gd = g.mdeg().finite().ok_or("zero component")?;
        let predicted = ok(aut2::inverse_mdeg_prediction(d1, d2, d.length()))?;
        ensure!(
            predicted.contains(&(gd[0], gd[1])),
            "case {case}: mdeg F⁻¹ = {gd:?} not predicted"
        );
        let bound = ok(aut2::length_bound(d1, d2))?;
        ensure!(
            d.length() as u32 <= bound,
            "case {case}: length above bound {bound}"
        );
    }
    let length3 = pairs(&[
        (120, 60),
        (120, 40),
        (120, 24),
        (120, 30),
        (120, 20),
        (120, 12),
        (120, 8),
        (120, 10),
        (120, 6),
        (120, 4),
        (60, 120),
        (40, 120),
        (24, 120),
        (30, 120),
        (20, 120),
        (12, 120),
        (8, 120),
        (10, 120),
        (6, 120),
        (4, 120),
        (120, 120),
    ]);
    let length4 = pairs(&[
        (120, 60),
        (120, 40),
        (120, 24),
        (120, 30),
        (120, 20),
        (120, 12),
        (120, 8),
        (60, 120),
        (40, 120),
        (24, 120),
        (30, 120),
        (20, 120),
        (12, 120),
        (8, 120),
        (120, 120),
    ]);
    let length5 = pairs(&[
        (120, 60),
        (120, 40),
        (120, 24),
        (60, 120),
        (40, 120),
        (24, 120),
        (120, 120),
    ]);
    for (l, want, size) in [(3, length3, 21), (4, length4, 15), (5, length5, 7)] {
        let got = ok(aut2::inverse_mdeg_prediction(60, 120, l))?;
        ensure!(
            got.len() == size && got == want,
            "(60, 120) length {l}: {got:?}"
        );
    }
    within(start, Duration::from_secs(60))
}

fn c9_brackets() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut equal, mut strict) = (0, 0);
    for case in 0..200 {
        let f = sample::random_poly(&mut rng, 3, 4, 4);
        let g = if case % 2 == 0 {
            sample::random_poly(&mut rng, 3, 4, 4)
        } else {
            // Dependent leading forms: a power of f's leading form plus noise.
            let k = rng.gen_range(1..=2);
            &f.pow(k).scale(&rat(sample::nonzero_int(&mut rng, 3)))
                + &sample::random_poly(&mut rng, 3, 2, 3)
        };
        if f.is_constant() || g.is_constant() {
            continue;
        }
        let m = sample::random_invertible_matrix(&mut rng, 3, 2);
        let lin: Vec<Polynomial> = m
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .fold(Polynomial::zero(3), |acc, (j, c)| {
                        &acc + &Polynomial::var(3, j).scale(c)
                    })
            })
            .collect();
        let (fl, gl) = (ok(f.substitute(&lin))?, ok(g.substitute(&lin))?);
        let d = ok(poisson_degree(&f, &g))?;
        ensure!(
            d == ok(poisson_degree(&fl, &gl))?,
            "case {case}: not invariant under a linear change"
        );
        let sum = Degree::Finite(f.degree().finite().unwrap() + g.degree().finite().unwrap());
        ensure!(d <= sum, "case {case}: deg[f, g] above deg f + deg g");
        let forms_independent = !ok(poisson_degree(
            &ok(f.leading_form())?,
            &ok(g.leading_form())?,
        ))?
        .is_neg_inf();
        ensure!(
            (d == sum) == forms_independent,
            "case {case}: equality iff independent leading forms fails"
        );
        if d == sum {
            equal += 1;
        } else {
            strict += 1;
        }
    }
    ensure!(
        equal > 20 && strict > 20,
        "unbalanced corpus: {equal} equal, {strict} strict"
    );

    let mut confined = 0;
    for case in 0..100 {
        // A tame map of the (x1, x2) plane tangent to the identity, embedded in ℂ³.
        let (mut f, mut g) = (Polynomial::var(3, 0), Polynomial::var(3, 1));
        for step in 0..rng.gen_range(1..=3) {
            let deg = rng.gen_range(2..=3);
            let mut s = Polynomial::zero(3);
            for e in 2..=deg {
                let mut exps = [0u32; 3];
                exps[if step % 2 == 0 { 1 } else { 0 }] = e;
                s = &s + &Polynomial::monomial(3, &exps, rat(sample::nonzero_int(&mut rng, 2)));
            }
            let args = [f.clone(), g.clone(), Polynomial::var(3, 2)];
            let shifted = ok(s.substitute(&args))?;
            if step % 2 == 0 {
                f = &f + &shifted;
            } else {
                g = &g + &shifted;
            }
        }
        let d = ok(poisson_degree(&f, &g))?;
        ensure!(
            d == Degree::Finite(2),
            "case {case}: plane pair has bracket degree {d:?}"
        );
        ensure!(
            !f.uses_var(2) && !g.uses_var(2),
            "case {case}: bracket degree 2 outside ℂ[x1, x2]"
        );
        confined += 1;
        // Any higher term in x3 pushes the bracket degree above 2.
        let extra = &Polynomial::monomial(3, &[0, 0, 2], rat(1))
            + &Polynomial::monomial(3, &[1, 0, 1], rat(sample::nonzero_int(&mut rng, 2)));
        let d3 = ok(poisson_degree(&(&f + &extra), &g))?;
        ensure!(
            d3 > Degree::Finite(2),
            "case {case}: x3 term kept bracket degree 2"
        );
    }
    ensure!(confined == 100, "{confined} confinement cases");
    Ok(())
}

fn c10_reductions() -> Check {
    let f = ok(gallery("su_example"))?;
    for i in 0..3 {
        let r = ok(bounded_reduction_search(&f, i, 4, 12))?;
        ensure!(r.is_none(), "su_example component {i} reduced by {:?}", r);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut planted = 0;
    let mut attempts = 0;
    while planted < 100 {
        attempts += 1;
        ensure!(attempts < 2000, "could not plant 100 instances");
        let gens = {
            let count = rng.gen_range(1..=3);
            sample::random_tame3(&mut rng, count, 2)
        };
        let maps: Vec<PolyMap> = gens.iter().map(Generator::to_map).collect();
        let base = ok(PolyMap::compose_chain(3, &maps))?;
        let i = rng.gen_range(0..3);
        let g = sample::random_poly(&mut rng, 2, 3, 3);
        let (j, k) = match i {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let added = ok(g.substitute(&[base.component(j).clone(), base.component(k).clone()]))?;
        let mut comps = base.components().to_vec();
        comps[i] = &comps[i] + &added;
        if comps[i].degree() <= base.component(i).degree() {
            continue;
        }
        let planted_map = ok(PolyMap::new(comps))?;
        let degy = g.degree_in(1).finite().unwrap_or(0);
        let total = g.degree().finite().unwrap_or(0).max(1);
        let found = ok(bounded_reduction_search(&planted_map, i, degy, total))?
            .ok_or_else(|| format!("instance {planted}: planted reduction not found"))?;
        ensure!(
            ok(check_elementary_reduction(&planted_map, &found))?.reduces,
            "instance {planted}: candidate does not reduce"
        );
        planted += 1;
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("gallery multidegrees", c1_gallery),
        ("Nagata family", c2_nagata),
        ("bracket facts", c3_brackets),
        ("semigroup tables", c4_semigroups),
        ("decision engine", c5_decisions),
        ("end-to-end witnesses", c6_witnesses),
        ("(4, 4k+2, d3) construction", c7_four_k2),
        ("plane automorphisms", c8_plane),
        ("bracket properties", c9_brackets),
        ("elementary reductions", c10_reductions),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let t = start.elapsed();
        match result {
            Ok(()) => println!("PASS {:>2} {name} ({t:.2?})", i + 1),
            Err(e) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({t:.2?}): {e}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
