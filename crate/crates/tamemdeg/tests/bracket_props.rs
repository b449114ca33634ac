use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tamemdeg::bracket::{
    algebraically_independent, is_power_proportional, jac_minor, poisson_degree,
    reduced_pair_report, su_lower_bound,
};
use tamemdeg::poly::rat;
use tamemdeg::sample::{random_invertible_matrix, random_poly};
use tamemdeg::{Degree, Polynomial};

fn p3(s: &str) -> Polynomial {
    Polynomial::parse(s, &["x", "y", "z"]).unwrap()
}

fn linear_change(rng: &mut ChaCha8Rng) -> Vec<Polynomial> {
    random_invertible_matrix(rng, 3, 2)
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .fold(Polynomial::zero(3), |acc, (j, c)| {
                    &acc + &Polynomial::var(3, j).scale(c)
                })
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn bracket_degree_is_linearly_invariant(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_poly(&mut rng, 3, 4, 4);
        let g = random_poly(&mut rng, 3, 4, 4);
        let lin = linear_change(&mut rng);
        let d = poisson_degree(&f, &g).unwrap();
        let dl = poisson_degree(&f.substitute(&lin).unwrap(), &g.substitute(&lin).unwrap()).unwrap();
        prop_assert_eq!(d, dl);
    }

    #[test]
    fn bracket_degree_bounded_by_sum(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_poly(&mut rng, 3, 5, 4);
        let g = random_poly(&mut rng, 3, 5, 4);
        prop_assume!(!f.is_constant() && !g.is_constant());
        let sum = f.degree().finite().unwrap() + g.degree().finite().unwrap();
        let d = poisson_degree(&f, &g).unwrap();
        prop_assert!(d <= Degree::Finite(sum));
        let forms = poisson_degree(&f.leading_form().unwrap(), &g.leading_form().unwrap()).unwrap();
        prop_assert_eq!(d == Degree::Finite(sum), !forms.is_neg_inf());
    }

    #[test]
    fn bracket_is_antisymmetric_and_vanishes_on_functions_of_one(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_poly(&mut rng, 3, 3, 3);
        let g = random_poly(&mut rng, 3, 3, 3);
        let m = jac_minor(&f, &g, 0, 2).unwrap();
        prop_assert_eq!(&m + &jac_minor(&g, &f, 0, 2).unwrap(), Polynomial::zero(3));
        let k = rng.gen_range(1..=3);
        let h = &f.pow(k).scale(&rat(3)) + &f;
        prop_assert!(!algebraically_independent(&f, &h).unwrap());
    }

    /// `deg G(f, g)` never drops below the estimate for a *-reduced pair.
    #[test]
    fn degree_estimate_holds(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = &p3("x^2*y^2") + &random_poly(&mut rng, 3, 2, 2);
        let g = &(&p3("x^3*y^3") + &p3("z")) + &random_poly(&mut rng, 3, 3, 2);
        let r = reduced_pair_report(&f, &g).unwrap();
        prop_assume!(r.is_star_reduced);
        let bracket = poisson_degree(&f, &g).unwrap().finite().unwrap() as u64;
        let gg = random_poly(&mut rng, 2, 6, 4);
        prop_assume!(!gg.is_constant());
        let value = gg.substitute(&[f.clone(), g.clone()]).unwrap();
        let degy = gg.degree_in(1).finite().unwrap() as u64;
        let bound = su_lower_bound(4, 6, bracket, degy).unwrap();
        prop_assert!(value.degree().finite().unwrap() as i64 >= bound);
    }
}

#[test]
fn star_reduced_example() {
    let f = p3("x^2*y^2 + z");
    let g = p3("x^3*y^3 + x");
    let r = reduced_pair_report(&f, &g).unwrap();
    assert!(r.independent && r.leading_forms_dependent);
    assert!(!r.f_bar_in_c_of_g_bar && !r.g_bar_in_c_of_f_bar);
    assert!(r.is_star_reduced);
    assert_eq!(r.p, Some(2));

    let h = p3("x^2 + z");
    let k = p3("x^4 + y");
    let r = reduced_pair_report(&h, &k).unwrap();
    assert!(r.g_bar_in_c_of_f_bar && !r.is_star_reduced);
}

#[test]
fn power_proportionality() {
    let f = p3("x + 2*y");
    let h = &f.pow(3).scale(&rat(-5)) + &Polynomial::zero(3);
    assert_eq!(is_power_proportional(&h, &f), Some((rat(-5), 3)));
    assert_eq!(is_power_proportional(&p3("x^3 + y^3"), &f), None);
    assert_eq!(is_power_proportional(&p3("x^2"), &p3("x^3")), None);
}

#[test]
fn estimate_formula() {
    // deg f = 4, deg g = 6, p = 2, deg[f, g] = 5: per q the bound grows by 7.
    assert_eq!(su_lower_bound(4, 6, 5, 0).unwrap(), 0);
    assert_eq!(su_lower_bound(4, 6, 5, 1).unwrap(), 6);
    assert_eq!(su_lower_bound(4, 6, 5, 2).unwrap(), 7);
    assert_eq!(su_lower_bound(4, 6, 5, 5).unwrap(), 20);
    assert!(su_lower_bound(6, 6, 5, 1).is_err());
}

#[test]
fn mismatched_arity_is_rejected() {
    let f = Polynomial::var(2, 0);
    let g = Polynomial::var(3, 0);
    assert!(poisson_degree(&f, &g).is_err());
    assert!(jac_minor(&g, &g, 1, 1).is_err());
    assert!(jac_minor(&g, &g, 0, 3).is_err());
}
