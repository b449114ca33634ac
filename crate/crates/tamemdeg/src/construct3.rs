//! Explicit tame automorphisms with prescribed multidegree.
//!
//! Every builder returns a chain of certified generators and checks the
//! multidegree of the composed map before returning it.

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::decide3::{self, tab_tail_start, Classification};
use crate::error::{Error, Result};
use crate::gallery;
use crate::poly::{ratio, Degree, Polynomial, Rational};
use crate::polymap::{Generator, Multidegree, PolyMap};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant469 {
    /// `(4, 6, 9+4k)`
    Nine,
    /// `(4, 6, 7+4k)`, with the corrector `3/2·x·z²`
    Seven,
}

/// Parameters that rebuild a witness deterministically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum WitnessRecipe {
    /// `target[index] = Σ_{j<index} coeffs[j]·target[j]`
    SumRule {
        target: Vec<u64>,
        index: usize,
        coeffs: Vec<u64>,
    },
    /// A standard witness on the coordinates `positions` (one coordinate:
    /// identity; two: `(d, d·δ)`), padded to the full target.
    Padding {
        target: Vec<u64>,
        positions: Vec<usize>,
    },
    /// Smallest degree at most twice the gcd: a sum relation from residues.
    Gcd2 {
        target: Vec<u64>,
    },
    Ex469family {
        k: u64,
        variant: Variant469,
    },
    /// `(4, 10, d3)` for odd `d3 >= 11`, built through the tail construction.
    Ex4610family {
        d3: u64,
    },
    FourK2 {
        k: u64,
        d3: u64,
    },
    TabTail {
        a: u64,
        b: u64,
        d3: u64,
    },
    Gallery {
        name: String,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub target: Vec<u64>,
    pub recipe: WitnessRecipe,
    /// Generators in application order: `factors[0]` is applied first.
    pub factors: Vec<Generator>,
    pub composed: PolyMap,
    pub verified_mdeg: Multidegree,
    /// Degree of the cancelling difference in the corrector constructions.
    pub cancellation_degree: Option<u32>,
}

impl Witness {
    fn assemble(
        target: Vec<u64>,
        recipe: WitnessRecipe,
        factors: Vec<Generator>,
        cancellation_degree: Option<u32>,
    ) -> Result<Witness> {
        let n = target.len();
        let maps: Vec<PolyMap> = factors.iter().map(|g| g.to_map()).collect();
        let composed = PolyMap::compose_chain(n, &maps)?;
        let verified_mdeg = composed.mdeg();
        if verified_mdeg != Multidegree::from(target.as_slice()) {
            return Err(Error::VerificationFailed {
                expected: target,
                found: verified_mdeg.0.iter().map(|d| d.to_string()).collect(),
            });
        }
        Ok(Witness {
            target,
            recipe,
            factors,
            composed,
            verified_mdeg,
            cancellation_degree,
        })
    }

    pub fn n(&self) -> usize {
        self.target.len()
    }

    /// Appends a coordinate permutation so the multidegree reads `target`.
    pub fn reordered(self, target: &[u64]) -> Result<Witness> {
        if target == self.target.as_slice() {
            return Ok(self);
        }
        let mut used = vec![false; self.n()];
        let perm: Vec<usize> = target
            .iter()
            .map(|t| {
                let j = (0..self.n())
                    .find(|&j| !used[j] && self.target[j] == *t)
                    .ok_or_else(|| {
                        Error::InvalidArgument(format!(
                            "{target:?} is not a permutation of {:?}",
                            self.target
                        ))
                    })?;
                used[j] = true;
                Ok(j)
            })
            .collect::<Result<_>>()?;
        let mut factors = self.factors;
        factors.push(Generator::permutation(&perm)?);
        Witness::assemble(
            target.to_vec(),
            self.recipe,
            factors,
            self.cancellation_degree,
        )
    }
}

fn var(n: usize, i: usize) -> Polynomial {
    Polynomial::var(n, i)
}

fn mono(n: usize, exps: &[u32], c: Rational) -> Polynomial {
    Polynomial::monomial(n, exps, c)
}

fn deg32(d: u64) -> Result<u32> {
    u32::try_from(d).map_err(|_| Error::InvalidArgument(format!("degree {d} too large")))
}

/// Witness for `d[i] = Σ_{j<i} k_j·d[j]`: `h_k = x_k + x_i^{d_k}` (k ≠ i),
/// then `u_i ↦ u_i + Π u_j^{k_j}`.
pub fn build_sum_rule(d: &[u64], i: usize, coeffs: &[u64]) -> Result<Witness> {
    let n = d.len();
    if i >= n || coeffs.len() != i {
        return Err(Error::InvalidArgument(format!(
            "sum rule needs index < {n} and one coefficient per earlier degree"
        )));
    }
    let sum: u64 = coeffs.iter().zip(d).map(|(k, dj)| k * dj).sum();
    if sum != d[i] || d.contains(&0) {
        return Err(Error::InvalidArgument(format!(
            "d[{i}] = {} differs from the weighted sum {sum}",
            d[i]
        )));
    }
    let mut order = vec![i];
    order.extend((0..n).filter(|&k| k != i));
    let mut shifts = vec![Polynomial::zero(n); n];
    for k in (0..n).filter(|&k| k != i) {
        let mut e = vec![0; n];
        e[i] = deg32(d[k])?;
        shifts[k] = mono(n, &e, Rational::one());
    }
    let h = Generator::triangular_scaled(order, vec![Rational::one(); n], shifts)?;
    let mut e = vec![0; n];
    for (j, &k) in coeffs.iter().enumerate() {
        e[j] = deg32(k)?;
    }
    let g = Generator::elementary(n, i, mono(n, &e, Rational::one()))?;
    let recipe = WitnessRecipe::SumRule {
        target: d.to_vec(),
        index: i,
        coeffs: coeffs.to_vec(),
    };
    Witness::assemble(d.to_vec(), recipe, vec![h, g], None)
}

/// Embeds a witness on `m` coordinates into `target.len()` coordinates:
/// first `h_k = x_k + x_{p}^{d_k}` on the remaining coordinates, where `p` is
/// the first embedded position, then the sub-witness on `positions`.
pub fn build_padding(sub: &Witness, positions: &[usize], target: &[u64]) -> Result<Witness> {
    let n = target.len();
    let m = sub.n();
    if positions.len() != m || m == 0 || m > n {
        return Err(Error::InvalidArgument(
            "positions must match the sub-witness".into(),
        ));
    }
    let mut sorted_pos = positions.to_vec();
    sorted_pos.sort_unstable();
    sorted_pos.dedup();
    if sorted_pos.len() != m || sorted_pos.iter().any(|&p| p >= n) {
        return Err(Error::InvalidArgument(format!(
            "bad positions {positions:?}"
        )));
    }
    for (j, &p) in positions.iter().enumerate() {
        if sub.target[j] != target[p] {
            return Err(Error::InvalidArgument(format!(
                "sub-witness degree {} does not match target degree {} at position {p}",
                sub.target[j], target[p]
            )));
        }
    }
    let anchor = positions[0];
    let rest: Vec<usize> = (0..n).filter(|k| !positions.contains(k)).collect();
    let mut order = positions.to_vec();
    order.extend(&rest);
    let mut shifts = vec![Polynomial::zero(n); n];
    for &k in &rest {
        if target[k] > 1 {
            let mut e = vec![0; n];
            e[anchor] = deg32(target[k])?;
            shifts[k] = mono(n, &e, Rational::one());
        }
    }
    let mut factors = vec![Generator::triangular_scaled(
        order,
        vec![Rational::one(); n],
        shifts,
    )?];
    for f in &sub.factors {
        factors.push(embed_generator(f, n, positions)?);
    }
    let recipe = WitnessRecipe::Padding {
        target: target.to_vec(),
        positions: positions.to_vec(),
    };
    Witness::assemble(target.to_vec(), recipe, factors, None)
}

fn embed_generator(g: &Generator, n: usize, positions: &[usize]) -> Result<Generator> {
    let others: Vec<usize> = (0..n).filter(|k| !positions.contains(k)).collect();
    match g {
        Generator::Affine { matrix, shift } => {
            let mut big = crate::linalg::identity(n);
            let mut b = vec![Rational::zero(); n];
            for (i, &pi) in positions.iter().enumerate() {
                for (j, &pj) in positions.iter().enumerate() {
                    big[pi][pj] = matrix[i][j].clone();
                }
                b[pi] = shift[i].clone();
            }
            Generator::affine(big, b)
        }
        Generator::Triangular {
            order,
            scales,
            shifts,
        } => {
            let mut new_order = others.clone();
            new_order.extend(order.iter().map(|&o| positions[o]));
            let mut new_scales = vec![Rational::one(); n];
            let mut new_shifts = vec![Polynomial::zero(n); n];
            for (i, &pi) in positions.iter().enumerate() {
                new_scales[pi] = scales[i].clone();
                new_shifts[pi] = shifts[i].embed(n, positions)?;
            }
            Generator::triangular_scaled(new_order, new_scales, new_shifts)
        }
    }
}

/// Identity on ℂ¹ (`d = [1]`) or `(x + y^a, y + (x + y^a)^δ)` on ℂ² for `d = [a, a·δ]`.
pub fn standard_low_dim(d: &[u64]) -> Result<Witness> {
    match d {
        [1] => Witness::assemble(
            vec![1],
            WitnessRecipe::Padding {
                target: vec![1],
                positions: vec![0],
            },
            vec![],
            None,
        ),
        [a, b] if *a >= 1 && b % a == 0 => {
            let t1 = Generator::elementary(2, 0, mono(2, &[0, deg32(*a)?], Rational::one()))?;
            let t2 = Generator::elementary(2, 1, mono(2, &[deg32(b / a)?, 0], Rational::one()))?;
            Witness::assemble(
                d.to_vec(),
                WitnessRecipe::Padding {
                    target: d.to_vec(),
                    positions: vec![0, 1],
                },
                vec![t1, t2],
                None,
            )
        }
        _ => Err(Error::InvalidArgument(format!(
            "no standard low-dimensional witness for {d:?}"
        ))),
    }
}

/// Residue argument for `d1/gcd(d) <= 2`.
pub fn build_gcd2(d: &[u64]) -> Result<Witness> {
    let [d1, d2, d3] = <[u64; 3]>::try_from(d)
        .map_err(|_| Error::InvalidArgument("gcd rule witnesses are three-dimensional".into()))?;
    let g = d1.gcd(&d2).gcd(&d3);
    if d1 / g > 2 || !(d1 <= d2 && d2 <= d3) {
        return Err(Error::InvalidArgument(format!(
            "{d:?} is not sorted with d1/gcd <= 2"
        )));
    }
    let w = if d2 % d1 == 0 {
        build_sum_rule(d, 1, &[d2 / d1])?
    } else if d3 % d1 == 0 {
        build_sum_rule(d, 2, &[d3 / d1, 0])?
    } else if (d3 - d2) % d1 == 0 {
        build_sum_rule(d, 2, &[(d3 - d2) / d1, 1])?
    } else {
        unreachable!("residues modulo d1 take at most two values");
    };
    Ok(Witness {
        recipe: WitnessRecipe::Gcd2 { target: d.to_vec() },
        ..w
    })
}

/// Builds `(x+z^a, y + z^p + Σ_{l<=⌊b/a⌋} a_l x^l z^{b−la}, z)` followed by
/// `w ↦ w + (u^{bt} − v^{at}) u^q`, returning the witness and the degree of
/// `u^{bt} − v^{at}` after substitution.
fn corrector_chain(a: u64, b: u64, p: u64, q: u64) -> Result<(Vec<Generator>, u32)> {
    let g = a.gcd(&b);
    let (at, bt) = (a / g, b / g);
    let m = b / a;
    let coeffs = root_series(bt, at, m as usize);
    let (a32, b32, p32) = (deg32(a)?, deg32(b)?, deg32(p)?);
    let mut second = mono(3, &[0, 0, p32], Rational::one());
    for (l, c) in coeffs.iter().enumerate() {
        let l32 = l as u32;
        second += &mono(3, &[l32, 0, b32 - l32 * a32], c.clone());
    }
    let first = mono(3, &[0, 0, a32], Rational::one());
    let f = Generator::triangular_scaled(
        vec![2, 0, 1],
        vec![Rational::one(); 3],
        vec![first, second, Polynomial::zero(3)],
    )?;
    let diff = &var(3, 0).pow(deg32(bt)?) - &var(3, 1).pow(deg32(at)?);
    let cancellation = diff
        .substitute(f.to_map().components())?
        .degree()
        .finite()
        .ok_or_else(|| Error::InvalidArgument("corrector difference vanished".into()))?;
    let shift = &diff * &var(3, 0).pow(deg32(q)?);
    let g = Generator::elementary(3, 2, shift)?;
    Ok((vec![f, g], cancellation))
}

/// Coefficients `a_0 = 1, a_1, ..., a_m` with
/// `(Σ a_l t^l)^e ≡ (1+t)^n (mod t^{m+1})`, by forward substitution.
pub fn root_series(n: u64, e: u64, m: usize) -> Vec<Rational> {
    let binom = |k: usize| -> Rational {
        let mut c = Rational::one();
        for j in 0..k as u64 {
            c = c * Rational::from_integer((n as i64 - j as i64).into())
                / Rational::from_integer(((j + 1) as i64).into());
        }
        c
    };
    let mut a: Vec<Rational> = vec![Rational::one()];
    for k in 1..=m {
        // Coefficient of t^k in S^e with a_k = 0; the unknown enters as e·a_k.
        let mut trial = a.clone();
        trial.push(Rational::zero());
        let partial = series_pow_coeff(&trial, e, k);
        a.push((binom(k) - partial) / Rational::from_integer((e as i64).into()));
    }
    a
}

fn series_pow_coeff(s: &[Rational], e: u64, k: usize) -> Rational {
    let mut acc: Vec<Rational> = vec![Rational::zero(); k + 1];
    acc[0] = Rational::one();
    for _ in 0..e {
        let mut next = vec![Rational::zero(); k + 1];
        for (i, x) in acc.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in s.iter().enumerate() {
                if i + j > k {
                    break;
                }
                next[i + j] += x * y;
            }
        }
        acc = next;
    }
    acc[k].clone()
}

/// `(4, 6, 9+4k)` or `(4, 6, 7+4k)`.
pub fn build_469_family(k: u64, variant: Variant469) -> Result<Witness> {
    let k32 = deg32(k)?;
    let mut second = mono(3, &[0, 0, 6], Rational::one());
    if variant == Variant469::Seven {
        second += &mono(3, &[1, 0, 2], ratio(3, 2));
    }
    let f1 = Generator::triangular_scaled(
        vec![2, 0, 1],
        vec![Rational::one(); 3],
        vec![
            mono(3, &[0, 0, 4], Rational::one()),
            second,
            Polynomial::zero(3),
        ],
    )?;
    let diff = &var(3, 1).pow(2) - &var(3, 0).pow(3);
    let cancellation = diff.substitute(f1.to_map().components())?.degree().finite();
    let f2 = Generator::elementary(3, 2, &diff * &var(3, 0).pow(k32))?;
    let base = match variant {
        Variant469::Nine => 9,
        Variant469::Seven => 7,
    };
    Witness::assemble(
        vec![4, 6, base + 4 * k],
        WitnessRecipe::Ex469family { k, variant },
        vec![f1, f2],
        cancellation,
    )
}

/// The smallest admissible `r ∈ {k−1, …, k+2}` and `q` with `4k+2+r+4q = d3`.
pub fn four_k2_params(k: u64, d3: u64) -> Result<(u64, u64)> {
    if k < 3 || d3 < 5 * k + 1 {
        return Err(Error::InvalidArgument(format!(
            "need k >= 3 and d3 >= 5k+1, got k = {k}, d3 = {d3}"
        )));
    }
    let r = (k - 1..=k + 2)
        .find(|r| (d3 - 4 * k - 2 - r).is_multiple_of(4))
        .expect("four consecutive residues");
    Ok((r, (d3 - 4 * k - 2 - r) / 4))
}

/// `(4, 4k+2, d3)` for `k >= 3` and `d3 >= 5k+1`.
pub fn build_4k2(k: u64, d3: u64) -> Result<Witness> {
    let (r, q) = four_k2_params(k, d3)?;
    let (factors, cancellation) = corrector_chain(4, 4 * k + 2, r, q)?;
    if u64::from(cancellation) != 4 * k + 2 + r {
        return Err(Error::InvalidArgument(format!(
            "cancellation left degree {cancellation}, expected {}",
            4 * k + 2 + r
        )));
    }
    Witness::assemble(
        vec![4, 4 * k + 2, d3],
        WitnessRecipe::FourK2 { k, d3 },
        factors,
        Some(cancellation),
    )
}

/// The exponent `p` and shift `q` used by [`build_tab_tail`].
pub fn tab_tail_params(a: u64, b: u64, d3: u64) -> Result<(u64, u64)> {
    if !(1 < a && a < b) {
        return Err(Error::InvalidArgument(format!(
            "need 1 < a < b, got ({a}, {b})"
        )));
    }
    let start = tab_tail_start(a, b);
    if d3 < start {
        return Err(Error::InvalidArgument(format!(
            "d3 = {d3} is below the tail start {start} for ({a}, {b})"
        )));
    }
    let t = start + (d3 - start) % a;
    let at = a / a.gcd(&b);
    let p = t - b * (at - 1);
    Ok((p, (d3 - t) / a))
}

/// `(a, b, d3)` for `1 < a < b` and `d3 >= lcm(a,b) − min{b−1, (a−1)(⌊b/a⌋+1)}`.
pub fn build_tab_tail(a: u64, b: u64, d3: u64) -> Result<Witness> {
    let (p, q) = tab_tail_params(a, b, d3)?;
    let at = a / a.gcd(&b);
    let (factors, cancellation) = corrector_chain(a, b, p, q)?;
    if u64::from(cancellation) != p + b * (at - 1) {
        return Err(Error::InvalidArgument(format!(
            "cancellation left degree {cancellation}, expected {}",
            p + b * (at - 1)
        )));
    }
    Witness::assemble(
        vec![a, b, d3],
        WitnessRecipe::TabTail { a, b, d3 },
        factors,
        Some(cancellation),
    )
}

pub fn build_gallery(name: &str) -> Result<Witness> {
    let maps = gallery::gallery_factors(name)?;
    let factors = maps
        .iter()
        .map(|m| {
            Generator::recognize(m).ok_or_else(|| {
                Error::InvalidGenerator(format!("gallery map `{name}` has a non-tame factor"))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let n = maps.first().map(|m| m.n()).unwrap_or(3);
    let composed = PolyMap::compose_chain(n, &maps)?;
    let target = composed
        .mdeg()
        .finite()
        .ok_or_else(|| Error::InvalidArgument("zero component".into()))?;
    let w = Witness::assemble(
        target.clone(),
        WitnessRecipe::Gallery {
            name: name.to_string(),
        },
        factors,
        None,
    )?;
    let mut sorted = target;
    sorted.sort_unstable();
    w.reordered(&sorted)
}

/// Dispatches on the recipe kind.
pub fn build(recipe: &WitnessRecipe) -> Result<Witness> {
    match recipe {
        WitnessRecipe::SumRule {
            target,
            index,
            coeffs,
        } => build_sum_rule(target, *index, coeffs),
        WitnessRecipe::Padding { target, positions } => {
            let sub_target: Vec<u64> = positions
                .iter()
                .map(|&p| {
                    target.get(p).copied().ok_or(Error::IndexOutOfRange {
                        index: p,
                        nvars: target.len(),
                    })
                })
                .collect::<Result<_>>()?;
            let sub = standard_low_dim(&sub_target)?;
            build_padding(&sub, positions, target)
        }
        WitnessRecipe::Gcd2 { target } => build_gcd2(target),
        WitnessRecipe::Ex469family { k, variant } => build_469_family(*k, *variant),
        WitnessRecipe::Ex4610family { d3 } => {
            if d3 % 2 == 0 {
                return Err(Error::InvalidArgument(format!(
                    "(4, 10, {d3}) has an even third degree; use the gcd rule"
                )));
            }
            let w = build_tab_tail(4, 10, *d3)?;
            Ok(Witness {
                recipe: recipe.clone(),
                ..w
            })
        }
        WitnessRecipe::FourK2 { k, d3 } => build_4k2(*k, *d3),
        WitnessRecipe::TabTail { a, b, d3 } => build_tab_tail(*a, *b, *d3),
        WitnessRecipe::Gallery { name } => build_gallery(name),
    }
}

/// A witness for a realizable classification, in the caller's coordinate order.
pub fn witness_for(c: &Classification) -> Result<Option<Witness>> {
    match &c.witness_recipe {
        None => Ok(None),
        Some(r) => Ok(Some(build(r)?.reordered(&c.input)?)),
    }
}

/// Classifies and, when realizable, builds the witness.
pub fn realize(d1: u64, d2: u64, d3: u64) -> Result<Option<Witness>> {
    witness_for(&decide3::classify(d1, d2, d3)?)
}

/// Certifies a factor chain: every map is affine or triangular and the
/// composition has the target multidegree.
pub fn verify_chain(target: &[u64], maps: &[PolyMap]) -> Result<Witness> {
    let factors = maps
        .iter()
        .enumerate()
        .map(|(i, m)| {
            Generator::recognize(m).ok_or_else(|| {
                Error::InvalidGenerator(format!("factor {i} is neither affine nor triangular"))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    if let Some(bad) = maps.iter().find(|m| m.n() != target.len()) {
        return Err(Error::ArityMismatch {
            expected: target.len(),
            found: bad.n(),
        });
    }
    let recipe = WitnessRecipe::Gallery {
        name: "external".to_string(),
    };
    Witness::assemble(target.to_vec(), recipe, factors, None)
}

/// Highest degree among the factors; handy for reporting.
pub fn max_factor_degree(w: &Witness) -> Degree {
    w.factors
        .iter()
        .map(|f| f.to_map().degree())
        .max()
        .unwrap_or(Degree::Finite(1))
}
