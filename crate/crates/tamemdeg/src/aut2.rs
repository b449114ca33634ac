//! Automorphisms of the plane: peeling into affine and triangular factors,
//! length, exact inverse and the possible multidegrees of the inverse.

use std::collections::BTreeSet;

use crate::bracket::is_power_proportional;
use crate::error::{Error, Result};
use crate::poly::{Degree, Polynomial, Rational};
use crate::polymap::{Generator, PolyMap};

/// `F = L2 ∘ T_l ∘ ... ∘ T_1 ∘ L1`, with `T_i = (x + f_i(y), y)` for odd `i`
/// and `T_i = (x, y + f_i(x))` for even `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    pub l1: Generator,
    /// `T_1, ..., T_l`, innermost first.
    pub factors: Vec<Generator>,
    pub l2: Generator,
    pub factor_degrees: Vec<u32>,
}

impl Decomposition {
    pub fn length(&self) -> usize {
        self.factors.len()
    }

    /// All generators in application order.
    pub fn chain(&self) -> Vec<Generator> {
        let mut out = vec![self.l1.clone()];
        out.extend(self.factors.iter().cloned());
        out.push(self.l2.clone());
        out
    }

    pub fn compose(&self) -> Result<PolyMap> {
        let maps: Vec<PolyMap> = self.chain().iter().map(Generator::to_map).collect();
        PolyMap::compose_chain(2, &maps)
    }

    /// `L1⁻¹ ∘ T_1⁻¹ ∘ ... ∘ T_l⁻¹ ∘ L2⁻¹`.
    pub fn inverse(&self) -> Result<PolyMap> {
        let maps = self
            .chain()
            .iter()
            .rev()
            .map(|g| g.inverse().map(|i| i.to_map()))
            .collect::<Result<Vec<_>>>()?;
        PolyMap::compose_chain(2, &maps)
    }
}

fn x() -> Polynomial {
    Polynomial::var(2, 0)
}

fn y() -> Polynomial {
    Polynomial::var(2, 1)
}

fn swap_vars(p: &Polynomial) -> Result<Polynomial> {
    p.substitute(&[y(), x()])
}

fn swap() -> Generator {
    Generator::permutation(&[1, 0]).expect("static permutation")
}

fn deg(p: &Polynomial) -> u32 {
    p.degree().finite().unwrap_or(0)
}

/// Fails with `NotKeller` unless the Jacobian determinant is a nonzero constant.
pub fn keller_check(f: &PolyMap) -> Result<()> {
    if f.n() != 2 {
        return Err(Error::ArityMismatch {
            expected: 2,
            found: f.n(),
        });
    }
    let j = f.jacobian_determinant()?;
    if j.is_zero() {
        return Err(Error::NotKeller("Jacobian determinant is zero".into()));
    }
    if !j.is_constant() {
        return Err(Error::NotKeller(format!(
            "Jacobian determinant {j} is not constant"
        )));
    }
    Ok(())
}

/// Subtracts `Σ c_k·p^k` from `q` until `deg q < deg p` (or `deg q <= 1`),
/// returning the reduced `q` and the univariate `f` in variable `var`.
fn reduce_by(
    p: &Polynomial,
    mut q: Polynomial,
    var: usize,
    step: usize,
) -> Result<(Polynomial, Polynomial)> {
    let dp = deg(p);
    let pbar = p.leading_form()?;
    let mut f = Polynomial::zero(2);
    while deg(&q) > 1 && deg(&q) >= dp {
        let qbar = q.leading_form()?;
        let (c, k) = is_power_proportional(&qbar, &pbar).ok_or_else(|| Error::PeelStuck {
            step,
            reason: format!("leading form {qbar} is not a multiple of a power of {pbar}"),
        })?;
        q -= &p.pow(k).scale(&c);
        let mut e = [0, 0];
        e[var] = k;
        f += &Polynomial::monomial(2, &e, c);
    }
    Ok((q, f))
}

/// Peels `F` from the outside into the normalized decomposition.
///
/// A non-Keller map is reported as `NotKeller` in preference to any peeling
/// failure.  The Jacobian is only computed when peeling fails: a successful
/// peel exhibits `F` as a composition of automorphisms, which is Keller.
pub fn peel(f: &PolyMap) -> Result<Decomposition> {
    if f.n() != 2 {
        return Err(Error::ArityMismatch {
            expected: 2,
            found: f.n(),
        });
    }
    peel_unchecked(f).map_err(|e| match keller_check(f) {
        Err(k) => k,
        Ok(()) => e,
    })
}

fn peel_unchecked(f: &PolyMap) -> Result<Decomposition> {
    let d = deg(f.component(0)).max(deg(f.component(1))) as usize;
    let bound = (d * d).max(4);
    let mut p = f.component(0).clone();
    let mut q = f.component(1).clone();
    let mut l2 = Generator::permutation(&[0, 1])?;
    // Outermost first.
    let mut outer: Vec<(Generator, u32)> = Vec::new();
    for step in 0..=bound {
        let (dp, dq) = (deg(&p), deg(&q));
        if dp <= 1 && dq <= 1 {
            let g = PolyMap::new(vec![p, q])?;
            let l1 = Generator::recognize(&g)
                .filter(Generator::is_affine)
                .ok_or_else(|| Error::PeelStuck {
                    step,
                    reason: "remaining affine part is singular".into(),
                })?;
            return finish(l1, outer, l2);
        }
        if dp == dq {
            if step > 0 {
                return Err(Error::PeelStuck {
                    step,
                    reason: format!("equal degrees {dp} after a triangular step"),
                });
            }
            let (pbar, qbar) = (p.leading_form()?, q.leading_form()?);
            let (c, _) = is_power_proportional(&pbar, &qbar)
                .filter(|(_, k)| *k == 1)
                .ok_or_else(|| Error::PeelStuck {
                    step,
                    reason: format!(
                        "leading forms {pbar} and {qbar} of equal degree are not proportional"
                    ),
                })?;
            // F = (x + c·y, y) ∘ (P − c·Q, Q)
            p -= &q.scale(&c);
            let mut m = crate::linalg::identity(2);
            m[0][1] = c;
            l2 = Generator::linear(m)?;
            continue;
        }
        if dp < dq {
            let (rest, fx) = reduce_by(&p, q, 0, step)?;
            q = rest;
            let d = deg(&fx);
            outer.push((Generator::elementary(2, 1, fx)?, d));
        } else {
            let (rest, fy) = reduce_by(&q, p, 1, step)?;
            p = rest;
            let d = deg(&fy);
            outer.push((Generator::elementary(2, 0, fy)?, d));
        }
    }
    Err(Error::PeelStuck {
        step: bound,
        reason: "step bound exceeded".into(),
    })
}

fn finish(l1: Generator, outer: Vec<(Generator, u32)>, l2: Generator) -> Result<Decomposition> {
    let mut factors: Vec<Generator> = outer.iter().rev().map(|(g, _)| g.clone()).collect();
    let factor_degrees: Vec<u32> = outer.iter().rev().map(|(_, d)| *d).collect();
    let (mut l1, mut l2) = (l1, l2);
    // T_1 must move x; otherwise conjugate every factor by the swap.
    let moves_y = |g: &Generator| g.to_map().component(0) == &x();
    if factors.first().is_some_and(moves_y) {
        factors = factors
            .iter()
            .map(|g| {
                let m = g.to_map();
                let comps = vec![swap_vars(m.component(1))?, swap_vars(m.component(0))?];
                Generator::recognize(&PolyMap::new(comps)?)
                    .ok_or_else(|| Error::InvalidGenerator("conjugated factor".into()))
            })
            .collect::<Result<_>>()?;
        let s = swap().to_map();
        l1 = Generator::recognize(&s.compose(&l1.to_map())?).expect("affine");
        l2 = Generator::recognize(&l2.to_map().compose(&s)?).expect("affine");
    }
    Ok(Decomposition {
        l1,
        factors,
        l2,
        factor_degrees,
    })
}

pub fn length(f: &PolyMap) -> Result<usize> {
    Ok(peel(f)?.length())
}

/// The exact inverse.
///
/// Checking `F ∘ F⁻¹ = id` directly expands intermediates of degree
/// `deg(F)²`, so the certificate is split instead: the decomposition must
/// recompose to `F` and every factor must cancel against its inverse.
pub fn inverse(f: &PolyMap) -> Result<PolyMap> {
    let d = peel(f)?;
    let mismatch = |m: &PolyMap| Error::VerificationFailed {
        expected: vec![1, 1],
        found: m.mdeg().0.iter().map(Degree::to_string).collect(),
    };
    let back = d.compose()?;
    if &back != f {
        return Err(mismatch(&back));
    }
    for g in d.chain() {
        let id = g.to_map().compose(&g.inverse()?.to_map())?;
        if id != PolyMap::identity(2) {
            return Err(mismatch(&id));
        }
    }
    d.inverse()
}

/// Number of prime factors of `k` counted with multiplicity.
pub fn omega(k: u64) -> Result<u32> {
    if k == 0 {
        return Err(Error::InvalidArgument("omega is defined for k >= 1".into()));
    }
    let (mut k, mut count, mut p) = (k, 0, 2u64);
    while p * p <= k {
        while k % p == 0 {
            k /= p;
            count += 1;
        }
        p += 1;
    }
    if k > 1 {
        count += 1;
    }
    Ok(count)
}

/// `min(l(d2), l(d1) + 1)` for `d1 <= d2`.
pub fn length_bound(d1: u64, d2: u64) -> Result<u32> {
    let (d1, d2) = (d1.min(d2), d1.max(d2));
    Ok(omega(d2)?.min(omega(d1)? + 1))
}

fn inconsistent(d1: u64, d2: u64, length: usize, clause: &str) -> Error {
    Error::InconsistentLength {
        d1,
        d2,
        length,
        clause: clause.to_string(),
    }
}

/// Every multidegree the inverse of a plane automorphism with multidegree
/// `(d1, d2)` (in either order) and the given length can have.
pub fn inverse_mdeg_prediction(d1: u64, d2: u64, length: usize) -> Result<BTreeSet<(u64, u64)>> {
    let (d1, d2) = (d1.min(d2), d1.max(d2));
    if d1 == 0 {
        return Err(Error::InvalidArgument("degrees must be positive".into()));
    }
    let mut out = BTreeSet::new();
    let with_divisors =
        |out: &mut BTreeSet<(u64, u64)>, d: u64, top: u64, min_omega: usize| -> Result<()> {
            for a in (2..top).filter(|a| top.is_multiple_of(*a)) {
                if omega(top / a)? as usize >= min_omega {
                    out.insert((d, d / a));
                    out.insert((d / a, d));
                }
            }
            out.insert((d, d));
            Ok(())
        };
    match length {
        0 => {
            if (d1, d2) != (1, 1) {
                return Err(inconsistent(
                    d1,
                    d2,
                    0,
                    "length 0 means affine, multidegree (1, 1)",
                ));
            }
            out.insert((1, 1));
        }
        1 => {
            if d2 == 1 || (d1 != 1 && d1 != d2) {
                return Err(inconsistent(
                    d1,
                    d2,
                    1,
                    "length 1 needs (1, d) or (d, d) with d > 1",
                ));
            }
            out.extend([(1, d2), (d2, 1), (d2, d2)]);
        }
        l if d1 == d2 => {
            if d1 == 1 || (omega(d1)? as usize) < l {
                return Err(inconsistent(
                    d1,
                    d2,
                    l,
                    "multidegree (d, d) needs l(d) >= length",
                ));
            }
            with_divisors(&mut out, d1, d1, l - 1)?;
        }
        2 => {
            if d1 == 1 || d2 % d1 != 0 {
                return Err(inconsistent(
                    d1,
                    d2,
                    2,
                    "length 2 needs 1 < d1 < d2 with d1 | d2",
                ));
            }
            let q = d2 / d1;
            out.extend([(d2, q), (q, d2), (d2, d2)]);
        }
        l => {
            if d1 == 1 || d2 % d1 != 0 || (omega(d1)? as usize) + 1 < l {
                return Err(inconsistent(
                    d1,
                    d2,
                    l,
                    "length >= 3 needs 1 < d1 < d2, d1 | d2 and l(d1) >= length - 1",
                ));
            }
            for a in (2..d1).filter(|a| d1 % a == 0) {
                if omega(d1 / a)? as usize + 2 >= l {
                    out.insert((d2, d2 / a));
                    out.insert((d2 / a, d2));
                }
            }
            out.insert((d2, d2));
        }
    }
    Ok(out)
}

/// Univariate shift polynomial `f` of a triangular factor, as coefficients
/// from degree 0 upward.
pub fn factor_coefficients(g: &Generator) -> Vec<Rational> {
    let m = g.to_map();
    let (shift, var) = if m.component(0) == &x() {
        (m.component(1) - &y(), 0)
    } else {
        (m.component(0) - &x(), 1)
    };
    let d = deg(&shift) as usize;
    (0..=d)
        .map(|k| {
            let mut e = vec![0; 2];
            e[var] = k as u32;
            shift.coefficient(&e)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polymap::Multidegree;

    fn map(c: [&str; 2]) -> PolyMap {
        PolyMap::parse(&c, &["x", "y"]).unwrap()
    }

    #[test]
    fn triangular_has_length_one() {
        let f = map(["x", "y + x^3"]);
        let d = peel(&f).unwrap();
        assert_eq!(d.length(), 1);
        assert_eq!(d.factor_degrees, vec![3]);
        assert_eq!(d.compose().unwrap(), f);
        assert_eq!(inverse(&f).unwrap(), map(["x", "y - x^3"]));
    }

    #[test]
    fn swapped_triangular() {
        let f = map(["y + x^2", "x"]);
        assert_eq!(length(&f).unwrap(), 1);
    }

    #[test]
    fn length_two_example() {
        // T2 ∘ T1 with T1 = (x + y^3, y), T2 = (x, y + x^2)
        let f = map(["x + y^3", "y + (x + y^3)^2"]);
        assert_eq!(f.mdeg(), Multidegree::from([3, 6]));
        let d = peel(&f).unwrap();
        assert_eq!(d.length(), 2);
        assert_eq!(d.factor_degrees, vec![3, 2]);
        assert_eq!(d.compose().unwrap(), f);
        assert_eq!(inverse(&f).unwrap().mdeg(), Multidegree::from([6, 2]));
    }

    #[test]
    fn equal_degree_inverse() {
        // L_c ∘ T ∘ L_c with T = (x, y + x^4), L_c = (x + y, y)
        let f = map(["x + y + y + (x + y)^4", "y + (x + y)^4"]);
        assert_eq!(f.mdeg(), Multidegree::from([4, 4]));
        assert_eq!(length(&f).unwrap(), 1);
        assert_eq!(inverse(&f).unwrap().mdeg(), Multidegree::from([4, 4]));
    }

    #[test]
    fn rejects_non_keller() {
        assert!(matches!(
            peel(&map(["x + y^2", "y + x"])),
            Err(Error::NotKeller(_))
        ));
        assert!(matches!(peel(&map(["x^2", "y"])), Err(Error::NotKeller(_))));
    }

    #[test]
    fn affine_has_length_zero() {
        let f = map(["2*x + y + 1", "x - y"]);
        assert_eq!(length(&f).unwrap(), 0);
        let inv = inverse(&f).unwrap();
        assert_eq!(f.compose(&inv).unwrap(), PolyMap::identity(2));
    }

    #[test]
    fn omega_values() {
        assert_eq!(omega(60).unwrap(), 4);
        assert_eq!(omega(1).unwrap(), 0);
        assert_eq!(omega(97).unwrap(), 1);
        assert_eq!(omega(120).unwrap(), 5);
        assert!(omega(0).is_err());
        assert_eq!(length_bound(60, 120).unwrap(), 5);
        assert_eq!(length_bound(1, 8).unwrap(), 1);
        assert_eq!(length_bound(12, 12).unwrap(), 3);
    }

    #[test]
    fn predictions() {
        let p = inverse_mdeg_prediction(60, 120, 5).unwrap();
        let want: BTreeSet<(u64, u64)> = [
            (120, 60),
            (120, 40),
            (120, 24),
            (60, 120),
            (40, 120),
            (24, 120),
            (120, 120),
        ]
        .into();
        assert_eq!(p, want);
        assert_eq!(inverse_mdeg_prediction(60, 120, 3).unwrap().len(), 21);
        assert_eq!(inverse_mdeg_prediction(60, 120, 4).unwrap().len(), 15);
        assert_eq!(
            inverse_mdeg_prediction(1, 7, 1).unwrap(),
            [(1, 7), (7, 1), (7, 7)].into()
        );
        assert!(inverse_mdeg_prediction(60, 120, 6).is_err());
        assert!(inverse_mdeg_prediction(2, 3, 2).is_err());
        assert!(inverse_mdeg_prediction(1, 1, 1).is_err());
    }

    #[test]
    fn shift_coefficients() {
        let g = Generator::elementary(2, 0, Polynomial::parse("2*y^3 - y", &["x", "y"]).unwrap())
            .unwrap();
        let c = factor_coefficients(&g);
        assert_eq!(c.len(), 4);
        assert_eq!(c[3], Rational::from_integer(2.into()));
    }
}
