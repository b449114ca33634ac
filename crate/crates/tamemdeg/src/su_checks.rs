//! Elementary reductions of maps of ℂ³: exact checks, a bounded search and
//! the degree shape forced by a type III reduction.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::bracket::{poisson_degree, reduced_pair_report, su_lower_bound};
use crate::error::{Error, Result};
use crate::poly::{Degree, Monomial, Polynomial, Rational};
use crate::polymap::PolyMap;

/// `F_i − g(F_j, F_k)` with `j < k` the two other indices.
#[derive(Clone, Debug, PartialEq)]
pub struct ReductionCandidate {
    pub target_index: usize,
    pub g: Polynomial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionCheck {
    pub reduces: bool,
    pub original: Degree,
    pub achieved: Degree,
}

fn others(i: usize) -> (usize, usize) {
    match i {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

fn check_dim(f: &PolyMap, i: usize) -> Result<()> {
    if f.n() != 3 {
        return Err(Error::ArityMismatch {
            expected: 3,
            found: f.n(),
        });
    }
    if i >= 3 {
        return Err(Error::IndexOutOfRange { index: i, nvars: 3 });
    }
    Ok(())
}

pub fn check_elementary_reduction(f: &PolyMap, c: &ReductionCandidate) -> Result<ReductionCheck> {
    check_dim(f, c.target_index)?;
    if c.g.nvars() != 2 {
        return Err(Error::ArityMismatch {
            expected: 2,
            found: c.g.nvars(),
        });
    }
    let (j, k) = others(c.target_index);
    let fi = f.component(c.target_index);
    let sub =
        c.g.substitute(&[f.component(j).clone(), f.component(k).clone()])?;
    let achieved = (fi - &sub).degree();
    let original = fi.degree();
    Ok(ReductionCheck {
        reduces: achieved < original,
        original,
        achieved,
    })
}

/// Row echelon form keyed by leading monomial; each row remembers which
/// combination of the inputs produced it.
struct Echelon {
    rows: BTreeMap<Monomial, (Polynomial, Vec<Rational>)>,
    width: usize,
}

impl Echelon {
    fn new(width: usize) -> Self {
        Echelon {
            rows: BTreeMap::new(),
            width,
        }
    }

    /// Reduces `p` (with combination `combo`) until its leading monomial is
    /// not a pivot.
    fn reduce(&self, mut p: Polynomial, mut combo: Vec<Rational>) -> (Polynomial, Vec<Rational>) {
        while let Some((m, c)) = p.leading_term().map(|(m, c)| (m.clone(), c.clone())) {
            let Some((row, rc)) = self.rows.get(&m) else {
                break;
            };
            let (_, lead) = row.leading_term().expect("rows are nonzero");
            let factor = c / lead;
            p -= &row.scale(&factor);
            for (x, y) in combo.iter_mut().zip(rc) {
                *x -= &factor * y;
            }
        }
        (p, combo)
    }

    /// Returns false when `p` was already in the span.
    fn insert(&mut self, p: Polynomial, index: usize) -> bool {
        let mut combo = vec![Rational::from_integer(0.into()); self.width];
        combo[index] = Rational::from_integer(1.into());
        let (p, combo) = self.reduce(p, combo);
        match p.leading_term().map(|(m, _)| m.clone()) {
            Some(m) => {
                self.rows.insert(m, (p, combo));
                true
            }
            None => false,
        }
    }

    /// Combination expressing `target` if it is in the span.
    fn solve(&self, target: Polynomial) -> Option<Vec<Rational>> {
        let zero = vec![Rational::from_integer(0.into()); self.width];
        let (rest, combo) = self.reduce(target, zero);
        rest.is_zero()
            .then(|| combo.into_iter().map(|c| -c).collect())
    }
}

fn linearly_independent(polys: &[Polynomial]) -> bool {
    let mut e = Echelon::new(polys.len());
    polys
        .iter()
        .enumerate()
        .all(|(i, p)| e.insert(p.clone(), i))
}

struct PowerCache<'a> {
    base: &'a Polynomial,
    powers: Vec<Polynomial>,
}

impl<'a> PowerCache<'a> {
    fn new(base: &'a Polynomial) -> Self {
        PowerCache {
            base,
            powers: vec![Polynomial::one(base.nvars())],
        }
    }

    fn get(&mut self, k: usize) -> &Polynomial {
        while self.powers.len() <= k {
            let next = self.powers.last().expect("nonempty") * self.base;
            self.powers.push(next);
        }
        &self.powers[k]
    }
}

/// Largest exponent `m <= bound` of the higher-degree member of a
/// star-reduced pair for which the degree lower bound stays at most `d`.
fn star_reduced_cap(f: &Polynomial, g: &Polynomial, d: u64, bound: u32) -> Result<Option<u32>> {
    if f.is_constant() || g.is_constant() {
        return Ok(None);
    }
    let report = reduced_pair_report(f, g)?;
    let (df, dg) = (deg(f), deg(g));
    if !(report.independent && !report.f_bar_in_c_of_g_bar && !report.g_bar_in_c_of_f_bar)
        || df == dg
    {
        return Ok(None);
    }
    let bracket = poisson_degree(f, g)?.finite().unwrap_or(0) as u64;
    let (lo, hi) = (df.min(dg), df.max(dg));
    let mut cap = None;
    for m in 0..=bound {
        if su_lower_bound(lo, hi, bracket, m as u64)? <= d as i64 {
            cap = Some(m);
        }
    }
    Ok(Some(cap.unwrap_or(0)))
}

fn deg(p: &Polynomial) -> u64 {
    p.degree().finite().unwrap_or(0) as u64
}

/// Searches `g(X, Y) = Σ c_ab X^a Y^b` with `b <= degy_bound` and
/// `a + b <= deg_bound` such that `deg(F_i − g(F_j, F_k)) < deg F_i`.
///
/// Top weight groups whose leading forms are linearly independent cannot
/// cancel and are discarded; what remains is solved exactly.  A `None`
/// verdict only covers the given bounds.
pub fn bounded_reduction_search(
    f: &PolyMap,
    i: usize,
    degy_bound: u32,
    deg_bound: u32,
) -> Result<Option<ReductionCandidate>> {
    check_dim(f, i)?;
    if deg_bound == 0 {
        return Err(Error::InvalidArgument(
            "degree bound must be positive".into(),
        ));
    }
    let (j, k) = others(i);
    let (fx, fy) = (f.component(j), f.component(k));
    let fi = f.component(i);
    let d = deg(fi);
    if fi.degree() <= Degree::Finite(0) {
        return Ok(None);
    }
    let (dx, dy) = (deg(fx), deg(fy));

    // Exponent caps from the lower bound on star-reduced pairs.
    let mut cap_a = deg_bound;
    let mut cap_b = degy_bound.min(deg_bound);
    if dx < dy {
        if let Some(c) = star_reduced_cap(fx, fy, d, cap_b)? {
            cap_b = cap_b.min(c);
        }
    } else if dy < dx {
        if let Some(c) = star_reduced_cap(fy, fx, d, cap_a)? {
            cap_a = cap_a.min(c);
        }
    }

    let mut groups: BTreeMap<u64, Vec<(u32, u32)>> = BTreeMap::new();
    for b in 0..=cap_b {
        for a in 0..=cap_a.min(deg_bound - b) {
            groups
                .entry(a as u64 * dx + b as u64 * dy)
                .or_default()
                .push((a, b));
        }
    }

    let (lx, ly) = (fx.leading_form()?, fy.leading_form()?);
    let (mut plx, mut ply) = (PowerCache::new(&lx), PowerCache::new(&ly));
    while let Some((&w, members)) = groups.iter().next_back() {
        if w <= d {
            break;
        }
        let leads: Vec<Polynomial> = members
            .iter()
            .map(|&(a, b)| plx.get(a as usize) * ply.get(b as usize))
            .collect();
        if !linearly_independent(&leads) {
            break;
        }
        groups.remove(&w);
    }
    match groups.keys().next_back() {
        None => return Ok(None),
        Some(&w) if w < d => return Ok(None),
        _ => {}
    }

    let cands: Vec<(u32, u32)> = groups.values().flatten().copied().collect();
    let (mut px, mut py) = (PowerCache::new(fx), PowerCache::new(fy));
    let d32 = d as u32;
    let mut ech = Echelon::new(cands.len());
    for (idx, &(a, b)) in cands.iter().enumerate() {
        let p = px.get(a as usize) * py.get(b as usize);
        ech.insert(p.part_at_least(d32), idx);
    }
    let Some(combo) = ech.solve(fi.part_at_least(d32)) else {
        return Ok(None);
    };
    let mut g = Polynomial::zero(2);
    for (&(a, b), c) in cands.iter().zip(combo) {
        g += &Polynomial::monomial(2, &[a, b], c);
    }
    let cand = ReductionCandidate { target_index: i, g };
    if !check_elementary_reduction(f, &cand)?.reduces {
        return Err(Error::VerificationFailed {
            expected: vec![d],
            found: vec!["candidate does not reduce".into()],
        });
    }
    Ok(Some(cand))
}

/// True iff `d2 = 2n` and either `d3 = 3n` with `n < d1 <= 3n/2`, or
/// `5n/2 < d3 <= 3n` with `d1 = 3n/2`, for some `n >= 1`.
pub fn type3_shape(d1: u64, d2: u64, d3: u64) -> bool {
    if !d2.is_multiple_of(2) || d2 == 0 {
        return false;
    }
    let n = d2 / 2;
    let first = d3 == 3 * n && n < d1 && 2 * d1 <= 3 * n;
    let second = 5 * n < 2 * d3 && d3 <= 3 * n && 2 * d1 == 3 * n;
    first || second
}
