//! Sparse multivariate polynomials with exact rational coefficients.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Total degree, with the zero polynomial at `NegInf` below every integer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInf,
    Finite(u32),
}

impl Degree {
    pub fn finite(self) -> Option<u32> {
        match self {
            Degree::Finite(d) => Some(d),
            Degree::NegInf => None,
        }
    }

    pub fn is_neg_inf(self) -> bool {
        self == Degree::NegInf
    }
}

impl From<u32> for Degree {
    fn from(d: u32) -> Self {
        Degree::Finite(d)
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInf => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

// -inf is written as JSON null.
impl Serialize for Degree {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Degree::NegInf => s.serialize_none(),
            Degree::Finite(d) => s.serialize_u32(*d),
        }
    }
}

impl<'de> Deserialize<'de> for Degree {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(match Option::<u32>::deserialize(d)? {
            Some(v) => Degree::Finite(v),
            None => Degree::NegInf,
        })
    }
}

/// Exponent vector. The derived order (total degree first, then exponents
/// lexicographically) is graded lex with x1 > x2 > ... > xn.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    deg: u32,
    exps: Vec<u32>,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        let deg = exps.iter().sum();
        Monomial { deg, exps }
    }

    pub fn one(n: usize) -> Self {
        Monomial {
            deg: 0,
            exps: vec![0; n],
        }
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut exps = vec![0; n];
        exps[i] = 1;
        Monomial { deg: 1, exps }
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.deg
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            deg: self.deg + other.deg,
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::term(nvars, Monomial::one(nvars), c)
    }

    /// The variable `x_{i+1}`; panics if `i >= nvars`.
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index {i} out of range for {nvars}");
        Self::term(nvars, Monomial::var(nvars, i), Rational::one())
    }

    pub fn term(nvars: usize, m: Monomial, c: Rational) -> Self {
        assert_eq!(m.nvars(), nvars, "monomial length mismatch");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { nvars, terms }
    }

    pub fn monomial(nvars: usize, exps: &[u32], c: Rational) -> Self {
        Self::term(nvars, Monomial::new(exps.to_vec()), c)
    }

    /// Builds a polynomial from (exponents, coefficient) pairs, summing duplicates.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut p = Polynomial::zero(nvars);
        for (exps, c) in terms {
            if exps.len() != nvars {
                return Err(Error::ArityMismatch {
                    expected: nvars,
                    found: exps.len(),
                });
            }
            p.add_term(Monomial::new(exps), c);
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.deg == 0)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exps: &[u32]) -> Rational {
        self.terms
            .get(&Monomial::new(exps.to_vec()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&vec![0; self.nvars])
    }

    /// Leading term in graded-lex order.
    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn degree(&self) -> Degree {
        match self.terms.keys().next_back() {
            Some(m) => Degree::Finite(m.deg),
            None => Degree::NegInf,
        }
    }

    pub fn total_degree(&self) -> Degree {
        self.degree()
    }

    /// Largest exponent of variable `i` (`NegInf` for zero).
    pub fn degree_in(&self, i: usize) -> Degree {
        self.terms
            .keys()
            .map(|m| Degree::Finite(m.exps[i]))
            .max()
            .unwrap_or(Degree::NegInf)
    }

    pub fn uses_var(&self, i: usize) -> bool {
        self.terms.keys().any(|m| m.exps[i] > 0)
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.keys().next() {
            None => true,
            Some(first) => self.terms.keys().all(|m| m.deg == first.deg),
        }
    }

    pub fn homogeneous_part(&self, d: u32) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.deg == d)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        Polynomial {
            nvars: self.nvars,
            terms,
        }
    }

    /// Sum of the terms of degree at least `d`.
    pub fn part_at_least(&self, d: u32) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.deg >= d)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        Polynomial {
            nvars: self.nvars,
            terms,
        }
    }

    pub fn leading_form(&self) -> Result<Polynomial> {
        match self.degree() {
            Degree::Finite(d) => Ok(self.homogeneous_part(d)),
            Degree::NegInf => Err(Error::ZeroPolynomial),
        }
    }

    pub fn partial_derivative(&self, i: usize) -> Result<Polynomial> {
        if i >= self.nvars {
            return Err(Error::IndexOutOfRange {
                index: i,
                nvars: self.nvars,
            });
        }
        let mut out = Polynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.exps[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.exps.clone();
            exps[i] -= 1;
            out.terms
                .insert(Monomial::new(exps), c * Rational::from_integer(e.into()));
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(t, a)| (t.mul(m), a * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut result = Polynomial::one(self.nvars);
        if k == 0 {
            return result;
        }
        // Sparse inputs stay cheaper under repeated multiplication than squaring.
        if self.terms.len() <= 2 {
            for _ in 0..k {
                result = &result * self;
            }
            return result;
        }
        let mut base = self.clone();
        let mut e = k;
        loop {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = &base * &base;
        }
        result
    }

    /// `self(args[0], ..., args[n-1])`, a polynomial in the variables of the arguments.
    pub fn substitute(&self, args: &[Polynomial]) -> Result<Polynomial> {
        if args.len() != self.nvars {
            return Err(Error::ArityMismatch {
                expected: self.nvars,
                found: args.len(),
            });
        }
        let m = match args.first() {
            Some(a) => a.nvars,
            None => {
                return Err(Error::InvalidArgument(
                    "cannot substitute into a polynomial with no variables".into(),
                ))
            }
        };
        if let Some(bad) = args.iter().find(|a| a.nvars != m) {
            return Err(Error::ArityMismatch {
                expected: m,
                found: bad.nvars,
            });
        }
        let terms: Vec<(&[u32], &Rational)> = self
            .terms
            .iter()
            .map(|(t, c)| (t.exps.as_slice(), c))
            .collect();
        Ok(horner(&terms, 0, args, m))
    }

    /// Rewrites the polynomial in a space of `m` variables, sending
    /// variable `i` to variable `positions[i]`.
    pub fn embed(&self, m: usize, positions: &[usize]) -> Result<Polynomial> {
        if positions.len() != self.nvars {
            return Err(Error::ArityMismatch {
                expected: self.nvars,
                found: positions.len(),
            });
        }
        if let Some(&bad) = positions.iter().find(|&&p| p >= m) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                nvars: m,
            });
        }
        let mut out = Polynomial::zero(m);
        for (t, c) in &self.terms {
            let mut exps = vec![0; m];
            for (i, &e) in t.exps.iter().enumerate() {
                exps[positions[i]] += e;
            }
            out.add_term(Monomial::new(exps), c.clone());
        }
        Ok(out)
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_same(other)?;
        Ok(self + other)
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_same(other)?;
        Ok(self - other)
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_same(other)?;
        Ok(self * other)
    }

    fn check_same(&self, other: &Polynomial) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::ArityMismatch {
                expected: self.nvars,
                found: other.nvars,
            });
        }
        Ok(())
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Integer coefficients and the common denominator they share.
    fn cleared(&self) -> (Vec<(&Monomial, BigInt)>, BigInt) {
        let den = self
            .terms
            .values()
            .fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let ints = self
            .terms
            .iter()
            .map(|(m, c)| (m, c.numer() * (&den / c.denom())))
            .collect();
        (ints, den)
    }

    fn from_integers(nvars: usize, acc: HashMap<Monomial, BigInt>, den: &BigInt) -> Polynomial {
        Polynomial {
            nvars,
            terms: acc
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(m, c)| (m, Rational::new(c, den.clone())))
                .collect(),
        }
    }

    /// Largest absolute numerator or denominator among the coefficients, in bits.
    pub fn coefficient_bits(&self) -> u64 {
        self.terms
            .values()
            .map(|c| c.numer().abs().bits().max(c.denom().bits()))
            .max()
            .unwrap_or(0)
    }
}

fn assert_same(a: &Polynomial, b: &Polynomial) {
    assert_eq!(
        a.nvars, b.nvars,
        "polynomial variable count mismatch: {} vs {}",
        a.nvars, b.nvars
    );
}

/// Nested Horner evaluation, one variable per level, so that only products
/// with the (usually small) arguments themselves are formed.
fn horner(
    terms: &[(&[u32], &Rational)],
    level: usize,
    args: &[Polynomial],
    m: usize,
) -> Polynomial {
    if level == args.len() {
        let mut c = Rational::zero();
        for (_, x) in terms {
            c += *x;
        }
        return Polynomial::constant(m, c);
    }
    let mut groups: BTreeMap<u32, Vec<(&[u32], &Rational)>> = BTreeMap::new();
    for &(e, c) in terms {
        groups.entry(e[level]).or_default().push((e, c));
    }
    let Some((&top, _)) = groups.iter().next_back() else {
        return Polynomial::zero(m);
    };
    let mut acc = horner(&groups[&top], level + 1, args, m);
    for e in (0..top).rev() {
        acc = &acc * &args[level];
        if let Some(g) = groups.get(&e) {
            acc += &horner(g, level + 1, args, m);
        }
    }
    acc
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert_same(self, rhs);
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        assert_same(self, rhs);
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl AddAssign<&Polynomial> for Polynomial {
    fn add_assign(&mut self, rhs: &Polynomial) {
        assert_same(self, rhs);
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&Polynomial> for Polynomial {
    fn sub_assign(&mut self, rhs: &Polynomial) {
        assert_same(self, rhs);
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_same(self, rhs);
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        if rhs.terms.len() == 1 {
            let (m, c) = rhs.terms.iter().next().unwrap();
            return self.mul_term(m, c);
        }
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            return rhs.mul_term(m, c);
        }
        // Multiply over the integers after clearing denominators; rational
        // additions would normalize with a gcd at every step.
        let (a, da) = self.cleared();
        let (b, db) = rhs.cleared();
        let mut acc: HashMap<Monomial, BigInt> = HashMap::with_capacity(a.len() + b.len());
        for (ma, ca) in &a {
            for (mb, cb) in &b {
                *acc.entry(ma.mul(mb)).or_insert_with(BigInt::zero) += ca * cb;
            }
        }
        Polynomial::from_integers(self.nvars, acc, &(da * db))
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: Polynomial) -> Polynomial {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: &Polynomial) -> Polynomial {
                (&self).$f(rhs)
            }
        }
        impl $tr<Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: Polynomial) -> Polynomial {
                self.$f(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = crate::parse::default_var_names(self.nvars);
        f.write_str(&self.to_string_with(&names))
    }
}
