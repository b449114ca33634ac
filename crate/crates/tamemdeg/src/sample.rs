//! Seeded random inputs for property tests and the CLI.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::Result;
use crate::linalg::{self, Matrix};
use crate::poly::{rat, Polynomial, Rational};
use crate::polymap::{Generator, PolyMap};

/// A small nonzero integer in `[-r, r]`.
pub fn nonzero_int<R: Rng + ?Sized>(rng: &mut R, r: i64) -> i64 {
    loop {
        let c = rng.gen_range(-r..=r);
        if c != 0 {
            return c;
        }
    }
}

/// Up to `terms` monomials of total degree at most `max_deg` with small
/// integer coefficients.
pub fn random_poly<R: Rng + ?Sized>(
    rng: &mut R,
    nvars: usize,
    max_deg: u32,
    terms: usize,
) -> Polynomial {
    let mut p = Polynomial::zero(nvars);
    for _ in 0..terms {
        let d = rng.gen_range(0..=max_deg);
        p += &Polynomial::monomial(nvars, &random_exps(rng, nvars, d), rat(nonzero_int(rng, 5)));
    }
    p
}

/// A random exponent vector of total degree `d`.
pub fn random_exps<R: Rng + ?Sized>(rng: &mut R, nvars: usize, d: u32) -> Vec<u32> {
    let mut e = vec![0; nvars];
    for _ in 0..d {
        e[rng.gen_range(0..nvars)] += 1;
    }
    e
}

/// A homogeneous polynomial of degree `d` with at least one term.
pub fn random_homogeneous<R: Rng + ?Sized>(
    rng: &mut R,
    nvars: usize,
    d: u32,
    terms: usize,
) -> Polynomial {
    loop {
        let mut p = Polynomial::zero(nvars);
        for _ in 0..terms.max(1) {
            p +=
                &Polynomial::monomial(nvars, &random_exps(rng, nvars, d), rat(nonzero_int(rng, 5)));
        }
        if !p.is_zero() {
            return p;
        }
    }
}

pub fn random_invertible_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize, r: i64) -> Matrix {
    loop {
        let m: Matrix = (0..n)
            .map(|_| (0..n).map(|_| rat(rng.gen_range(-r..=r))).collect())
            .collect();
        if linalg::determinant(&m).is_ok_and(|d| d != Rational::from_integer(0.into())) {
            return m;
        }
    }
}

pub fn random_affine<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Generator {
    let m = random_invertible_matrix(rng, n, 1);
    let shift = (0..n).map(|_| rat(rng.gen_range(-1..=1))).collect();
    Generator::affine(m, shift).expect("invertible by construction")
}

/// Univariate `c·t^d + (up to two lower terms)` in variable `var` of two.
pub fn random_shift<R: Rng + ?Sized>(rng: &mut R, var: usize, d: u32) -> Polynomial {
    let mono = |k: u32, c: i64| {
        let mut e = [0, 0];
        e[var] = k;
        Polynomial::monomial(2, &e, rat(c))
    };
    let mut f = mono(d, nonzero_int(rng, 2));
    for _ in 0..rng.gen_range(0..=2) {
        f += &mono(rng.gen_range(0..d), nonzero_int(rng, 2));
    }
    f
}

/// Parameters of a random plane chain `L2 ∘ T_l ∘ ... ∘ T_1 ∘ L1`.
#[derive(Clone, Copy, Debug)]
pub struct ChainSpec {
    pub min_degree: u32,
    pub max_degree: u32,
    pub max_length: usize,
    /// Upper bound on the product of the factor degrees.
    pub max_total_degree: u32,
}

impl Default for ChainSpec {
    fn default() -> Self {
        ChainSpec {
            min_degree: 2,
            max_degree: 5,
            max_length: 4,
            max_total_degree: 64,
        }
    }
}

#[derive(Clone, Debug)]
pub struct PlaneChain {
    pub l1: Generator,
    /// `T_1` moves x, `T_2` moves y, and so on.
    pub factors: Vec<Generator>,
    pub l2: Generator,
    pub degrees: Vec<u32>,
}

impl PlaneChain {
    pub fn map(&self) -> Result<PolyMap> {
        let mut maps = vec![self.l1.to_map()];
        maps.extend(self.factors.iter().map(Generator::to_map));
        maps.push(self.l2.to_map());
        PolyMap::compose_chain(2, &maps)
    }
}

/// A tame plane automorphism in the alternating normal form.
pub fn random_plane_chain<R: Rng + ?Sized>(rng: &mut R, spec: &ChainSpec) -> PlaneChain {
    let length = rng.gen_range(0..=spec.max_length);
    let mut degrees: Vec<u32> = Vec::with_capacity(length);
    let mut total = 1u32;
    for _ in 0..length {
        let fits: Vec<u32> = (spec.min_degree..=spec.max_degree)
            .filter(|d| total * d <= spec.max_total_degree)
            .collect();
        let Some(&d) = fits.choose(rng) else {
            break;
        };
        total *= d;
        degrees.push(d);
    }
    let factors = degrees
        .iter()
        .enumerate()
        .map(|(i, &d)| {
            // Odd positions (1-based) move x using y.
            let (target, var) = if i % 2 == 0 { (0, 1) } else { (1, 0) };
            Generator::elementary(2, target, random_shift(rng, var, d)).expect("valid shift")
        })
        .collect();
    PlaneChain {
        l1: random_affine(rng, 2),
        factors,
        l2: random_affine(rng, 2),
        degrees,
    }
}

/// A random tame map of ℂ³: `count` random elementary or affine generators.
pub fn random_tame3<R: Rng + ?Sized>(rng: &mut R, count: usize, max_deg: u32) -> Vec<Generator> {
    (0..count)
        .map(|_| {
            if rng.gen_bool(0.3) {
                random_affine(rng, 3)
            } else {
                let i = rng.gen_range(0..3);
                let others: Vec<usize> = (0..3).filter(|&k| k != i).collect();
                let mut f = Polynomial::zero(3);
                for _ in 0..rng.gen_range(1..=2) {
                    let d = rng.gen_range(1..=max_deg);
                    let mut e = vec![0; 3];
                    for _ in 0..d {
                        e[*others.choose(rng).expect("two choices")] += 1;
                    }
                    f += &Polynomial::monomial(3, &e, rat(nonzero_int(rng, 3)));
                }
                Generator::elementary(3, i, f).expect("avoids x_i")
            }
        })
        .collect()
}
