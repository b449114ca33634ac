//! Polynomial maps of affine n-space and the generators of the tame group.

use std::fmt;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::parse::default_var_names;
use crate::poly::{Degree, Polynomial, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyMap {
    components: Vec<Polynomial>,
}

/// Component degrees in component order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Multidegree(pub Vec<Degree>);

impl Multidegree {
    pub fn finite(&self) -> Option<Vec<u64>> {
        self.0.iter().map(|d| d.finite().map(u64::from)).collect()
    }

    pub fn sorted(&self) -> Multidegree {
        let mut v = self.0.clone();
        v.sort();
        Multidegree(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl<const N: usize> From<[u32; N]> for Multidegree {
    fn from(d: [u32; N]) -> Self {
        Multidegree(d.iter().map(|&x| Degree::Finite(x)).collect())
    }
}

impl From<&[u64]> for Multidegree {
    fn from(d: &[u64]) -> Self {
        Multidegree(
            d.iter()
                .map(|&x| Degree::Finite(u32::try_from(x).expect("degree fits in u32")))
                .collect(),
        )
    }
}

impl fmt::Display for Multidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|d| d.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl PolyMap {
    pub fn new(components: Vec<Polynomial>) -> Result<PolyMap> {
        let n = components.len();
        if n == 0 {
            return Err(Error::InvalidArgument(
                "a map needs at least one component".into(),
            ));
        }
        if let Some(bad) = components.iter().find(|c| c.nvars() != n) {
            return Err(Error::ArityMismatch {
                expected: n,
                found: bad.nvars(),
            });
        }
        Ok(PolyMap { components })
    }

    pub fn identity(n: usize) -> PolyMap {
        PolyMap {
            components: (0..n).map(|i| Polynomial::var(n, i)).collect(),
        }
    }

    /// Parses one polynomial per component in the declared variables.
    pub fn parse<S: AsRef<str>, V: AsRef<str>>(components: &[S], vars: &[V]) -> Result<PolyMap> {
        let comps = components
            .iter()
            .map(|c| Polynomial::parse(c.as_ref(), vars))
            .collect::<Result<Vec<_>>>()?;
        PolyMap::new(comps)
    }

    pub fn n(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &Polynomial {
        &self.components[i]
    }

    pub fn into_components(self) -> Vec<Polynomial> {
        self.components
    }

    /// `self ∘ inner`: component i is `self_i(inner_1, ..., inner_n)`.
    pub fn compose(&self, inner: &PolyMap) -> Result<PolyMap> {
        if self.n() != inner.n() {
            return Err(Error::ArityMismatch {
                expected: self.n(),
                found: inner.n(),
            });
        }
        let components = self
            .components
            .par_iter()
            .map(|c| c.substitute(&inner.components))
            .collect::<Result<Vec<_>>>()?;
        Ok(PolyMap { components })
    }

    /// Composes maps given in application order: the first is applied first.
    pub fn compose_chain<'a, I>(n: usize, maps: I) -> Result<PolyMap>
    where
        I: IntoIterator<Item = &'a PolyMap>,
    {
        let mut acc = PolyMap::identity(n);
        for m in maps {
            acc = m.compose(&acc)?;
        }
        Ok(acc)
    }

    pub fn mdeg(&self) -> Multidegree {
        Multidegree(self.components.iter().map(|c| c.degree()).collect())
    }

    pub fn degree(&self) -> Degree {
        self.components
            .iter()
            .map(|c| c.degree())
            .max()
            .unwrap_or(Degree::NegInf)
    }

    /// Degree-one homogeneous parts of the components.
    pub fn linear_part(&self) -> PolyMap {
        PolyMap {
            components: self
                .components
                .iter()
                .map(|c| c.homogeneous_part(1))
                .collect(),
        }
    }

    pub fn jacobian(&self) -> Result<Vec<Vec<Polynomial>>> {
        self.components
            .iter()
            .map(|c| (0..self.n()).map(|j| c.partial_derivative(j)).collect())
            .collect()
    }

    pub fn jacobian_determinant(&self) -> Result<Polynomial> {
        let jac = self.jacobian()?;
        let cols: Vec<usize> = (0..self.n()).collect();
        Ok(det_expand(&jac, 0, &cols, self.n()))
    }

    pub fn to_strings<S: AsRef<str>>(&self, vars: &[S]) -> Vec<String> {
        self.components
            .iter()
            .map(|c| c.to_string_with(vars))
            .collect()
    }
}

fn det_expand(m: &[Vec<Polynomial>], row: usize, cols: &[usize], n: usize) -> Polynomial {
    if cols.len() == 1 {
        return m[row][cols[0]].clone();
    }
    let mut acc = Polynomial::zero(n);
    for (k, &c) in cols.iter().enumerate() {
        if m[row][c].is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let term = &m[row][c] * &det_expand(m, row + 1, &rest, n);
        if k % 2 == 0 {
            acc += &term;
        } else {
            acc -= &term;
        }
    }
    acc
}

impl fmt::Display for PolyMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = default_var_names(self.n());
        write!(f, "({})", self.to_strings(&names).join(", "))
    }
}

/// An affine or triangular automorphism with a structural certificate.
///
/// In the triangular case component `i` equals `scales[i]·x_i + shifts[i]`,
/// where `shifts[i]` only involves variables that precede `i` in `order`.
#[derive(Clone, Debug, PartialEq)]
pub enum Generator {
    Affine {
        matrix: Matrix,
        shift: Vec<Rational>,
    },
    Triangular {
        order: Vec<usize>,
        scales: Vec<Rational>,
        shifts: Vec<Polynomial>,
    },
}

impl Generator {
    pub fn affine(matrix: Matrix, shift: Vec<Rational>) -> Result<Generator> {
        let n = matrix.len();
        if shift.len() != n {
            return Err(Error::ArityMismatch {
                expected: n,
                found: shift.len(),
            });
        }
        if linalg::determinant(&matrix)?.is_zero() {
            return Err(Error::SingularMatrix);
        }
        Ok(Generator::Affine { matrix, shift })
    }

    pub fn linear(matrix: Matrix) -> Result<Generator> {
        let n = matrix.len();
        Generator::affine(matrix, vec![Rational::zero(); n])
    }

    /// The linear map whose component `i` is `x_{perm[i]}`.
    pub fn permutation(perm: &[usize]) -> Result<Generator> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &p in perm {
            if p >= n || seen[p] {
                return Err(Error::InvalidArgument(format!(
                    "{perm:?} is not a permutation"
                )));
            }
            seen[p] = true;
        }
        let matrix = perm
            .iter()
            .map(|&p| {
                (0..n)
                    .map(|j| {
                        if j == p {
                            Rational::one()
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        Generator::linear(matrix)
    }

    /// Adds `f` to component `i`; `f` must not involve `x_i`.
    pub fn elementary(n: usize, i: usize, f: Polynomial) -> Result<Generator> {
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i, nvars: n });
        }
        if f.nvars() != n {
            return Err(Error::ArityMismatch {
                expected: n,
                found: f.nvars(),
            });
        }
        if f.uses_var(i) {
            return Err(Error::InvalidGenerator(format!(
                "elementary shift of component {i} involves x{}",
                i + 1
            )));
        }
        let mut order: Vec<usize> = (0..n).filter(|&k| k != i).collect();
        order.push(i);
        let mut shifts = vec![Polynomial::zero(n); n];
        shifts[i] = f;
        Generator::triangular_scaled(order, vec![Rational::one(); n], shifts)
    }

    /// `x_{order[0]}` is kept and `x_{order[k]}` gains `shifts[k-1]`, a
    /// polynomial in `x_{order[0]}, ..., x_{order[k-1]}`.
    pub fn triangular(order: Vec<usize>, shifts: Vec<Polynomial>) -> Result<Generator> {
        let n = order.len();
        if shifts.len() + 1 != n {
            return Err(Error::ArityMismatch {
                expected: n.saturating_sub(1),
                found: shifts.len(),
            });
        }
        let mut by_component = vec![Polynomial::zero(n); n];
        for (k, f) in shifts.into_iter().enumerate() {
            let Some(&target) = order.get(k + 1) else {
                break;
            };
            if target < n {
                by_component[target] = f;
            }
        }
        Generator::triangular_scaled(order, vec![Rational::one(); n], by_component)
    }

    /// Component `i` is `a_i·x_i + f_i(x_{i+1}, ..., x_n)`.
    pub fn de_jonquieres(scales: Vec<Rational>, shifts: Vec<Polynomial>) -> Result<Generator> {
        let n = scales.len();
        Generator::triangular_scaled((0..n).rev().collect(), scales, shifts)
    }

    pub fn triangular_scaled(
        order: Vec<usize>,
        scales: Vec<Rational>,
        shifts: Vec<Polynomial>,
    ) -> Result<Generator> {
        let n = order.len();
        if scales.len() != n || shifts.len() != n {
            return Err(Error::ArityMismatch {
                expected: n,
                found: scales.len().min(shifts.len()),
            });
        }
        let mut seen = vec![false; n];
        for &o in &order {
            if o >= n || seen[o] {
                return Err(Error::InvalidGenerator(format!(
                    "{order:?} is not a permutation"
                )));
            }
            seen[o] = true;
        }
        if let Some(bad) = shifts.iter().find(|s| s.nvars() != n) {
            return Err(Error::ArityMismatch {
                expected: n,
                found: bad.nvars(),
            });
        }
        if scales.iter().any(|a| a.is_zero()) {
            return Err(Error::InvalidGenerator("zero diagonal coefficient".into()));
        }
        for (k, &i) in order.iter().enumerate() {
            let allowed = &order[..k];
            if let Some(v) = (0..n).find(|&v| shifts[i].uses_var(v) && !allowed.contains(&v)) {
                return Err(Error::InvalidGenerator(format!(
                    "shift of component {i} involves forbidden variable x{}",
                    v + 1
                )));
            }
        }
        Ok(Generator::Triangular {
            order,
            scales,
            shifts,
        })
    }

    pub fn n(&self) -> usize {
        match self {
            Generator::Affine { matrix, .. } => matrix.len(),
            Generator::Triangular { order, .. } => order.len(),
        }
    }

    pub fn is_affine(&self) -> bool {
        match self {
            Generator::Affine { .. } => true,
            Generator::Triangular { shifts, .. } => {
                shifts.iter().all(|s| s.degree() <= Degree::Finite(1))
            }
        }
    }

    pub fn to_map(&self) -> PolyMap {
        let n = self.n();
        let components = match self {
            Generator::Affine { matrix, shift } => matrix
                .iter()
                .zip(shift)
                .map(|(row, b)| {
                    let mut c = Polynomial::constant(n, b.clone());
                    for (j, a) in row.iter().enumerate() {
                        c += &Polynomial::var(n, j).scale(a);
                    }
                    c
                })
                .collect(),
            Generator::Triangular { scales, shifts, .. } => (0..n)
                .map(|i| &Polynomial::var(n, i).scale(&scales[i]) + &shifts[i])
                .collect(),
        };
        PolyMap { components }
    }

    /// The inverse, again a certified generator of the same kind.
    pub fn inverse(&self) -> Result<Generator> {
        let n = self.n();
        match self {
            Generator::Affine { matrix, shift } => {
                let inv = linalg::inverse(matrix)?;
                let shift = linalg::mat_vec(&inv, shift)
                    .into_iter()
                    .map(|x| -x)
                    .collect();
                Ok(Generator::Affine { matrix: inv, shift })
            }
            Generator::Triangular {
                order,
                scales,
                shifts,
            } => {
                // Back-substitution along the order.
                let mut inv_comp: Vec<Polynomial> = (0..n).map(|i| Polynomial::var(n, i)).collect();
                let mut new_shifts = vec![Polynomial::zero(n); n];
                let mut new_scales = vec![Rational::one(); n];
                for &i in order {
                    let s = shifts[i].substitute(&inv_comp)?;
                    let a_inv = Rational::one() / &scales[i];
                    new_shifts[i] = (-&s).scale(&a_inv);
                    new_scales[i] = a_inv.clone();
                    inv_comp[i] = &Polynomial::var(n, i).scale(&a_inv) + &new_shifts[i];
                }
                Generator::triangular_scaled(order.clone(), new_scales, new_shifts)
            }
        }
    }

    /// Recovers a certificate from a bare map, trying affine first.
    pub fn recognize(map: &PolyMap) -> Option<Generator> {
        let n = map.n();
        if map.degree() <= Degree::Finite(1) {
            let matrix: Matrix = map
                .components()
                .iter()
                .map(|c| {
                    (0..n)
                        .map(|j| {
                            let mut e = vec![0; n];
                            e[j] = 1;
                            c.coefficient(&e)
                        })
                        .collect()
                })
                .collect();
            let shift = map.components().iter().map(|c| c.constant_term()).collect();
            return Generator::affine(matrix, shift).ok();
        }
        // Greedy: any component of the form a·x_i + f(already placed variables)
        // can be placed next, and placing more never blocks later choices.
        let mut placed: Vec<usize> = Vec::new();
        let mut scales = vec![Rational::one(); n];
        let mut shifts = vec![Polynomial::zero(n); n];
        while placed.len() < n {
            let next = (0..n).filter(|i| !placed.contains(i)).find_map(|i| {
                let c = map.component(i);
                let mut e = vec![0; n];
                e[i] = 1;
                let a = c.coefficient(&e);
                if a.is_zero() {
                    return None;
                }
                let rest = c - &Polynomial::var(n, i).scale(&a);
                let ok = (0..n).all(|v| !rest.uses_var(v) || placed.contains(&v));
                ok.then_some((i, a, rest))
            });
            let (i, a, rest) = next?;
            scales[i] = a;
            shifts[i] = rest;
            placed.push(i);
        }
        Generator::triangular_scaled(placed, scales, shifts).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    const XYZ: [&str; 3] = ["x", "y", "z"];

    fn map(c: &[&str]) -> PolyMap {
        let vars = default_var_names(c.len());
        PolyMap::parse(c, &vars).unwrap()
    }

    #[test]
    fn compose_identity_is_neutral() {
        let f = map(&["x + y^2", "y", "z^3 + x*y"]);
        assert_eq!(f.compose(&PolyMap::identity(3)).unwrap(), f);
        assert_eq!(PolyMap::identity(3).compose(&f).unwrap(), f);
    }

    #[test]
    fn compose_order() {
        // f ∘ g applies g first.
        let f = map(&["x", "y + x^2"]);
        let g = map(&["x + y^3", "y"]);
        assert_eq!(
            f.compose(&g).unwrap(),
            map(&["x + y^3", "y + x^2 + 2*x*y^3 + y^6"])
        );
    }

    #[test]
    fn linear_parts() {
        assert_eq!(map(&["x + 1", "y + x"]).linear_part(), map(&["x", "y + x"]));
        assert_eq!(map(&["x", "y + x^3"]).linear_part(), map(&["x", "y"]));
    }

    #[test]
    fn elementary_and_inverse() {
        let f = Polynomial::parse("x^3", &["x", "y"]).unwrap();
        let e = Generator::elementary(2, 1, f).unwrap();
        assert_eq!(e.to_map(), map(&["x", "y + x^3"]));
        assert_eq!(e.inverse().unwrap().to_map(), map(&["x", "y - x^3"]));
        let bad = Polynomial::parse("y^2", &["x", "y"]).unwrap();
        assert!(Generator::elementary(2, 1, bad).is_err());
    }

    #[test]
    fn de_jonquieres_identity() {
        let g = Generator::de_jonquieres(vec![rat(1); 3], vec![Polynomial::zero(3); 3]).unwrap();
        assert_eq!(g.to_map(), PolyMap::identity(3));
    }

    #[test]
    fn de_jonquieres_t2() {
        let p = |s: &str| Polynomial::parse(s, &XYZ).unwrap();
        let g = Generator::de_jonquieres(
            vec![rat(6), rat(4), rat(1)],
            vec![p("6*y*z + z^3"), p("z^2"), p("0")],
        )
        .unwrap();
        let t2 = map(&["6*x + 6*y*z + z^3", "4*y + z^2", "z"]);
        assert_eq!(g.to_map(), t2);
        let inv = g.inverse().unwrap().to_map();
        assert_eq!(t2.compose(&inv).unwrap(), PolyMap::identity(3));
        assert_eq!(Generator::recognize(&t2).unwrap().to_map(), t2);
    }

    #[test]
    fn triangular_validates_variables() {
        let p = |s: &str| Polynomial::parse(s, &XYZ).unwrap();
        assert!(Generator::triangular(vec![0, 1, 2], vec![p("x^2"), p("x*y")]).is_ok());
        assert!(Generator::triangular(vec![0, 1, 2], vec![p("z"), p("x*y")]).is_err());
    }

    #[test]
    fn affine_inverse_and_singular() {
        let a = Generator::affine(
            vec![vec![rat(1), rat(2)], vec![rat(3), rat(4)]],
            vec![rat(1), rat(-1)],
        )
        .unwrap();
        let id = a.to_map().compose(&a.inverse().unwrap().to_map()).unwrap();
        assert_eq!(id, PolyMap::identity(2));
        assert_eq!(
            Generator::linear(vec![vec![rat(1), rat(2)], vec![rat(2), rat(4)]]),
            Err(Error::SingularMatrix)
        );
    }

    #[test]
    fn jacobian_determinant_of_triangular() {
        let f = map(&["2*x + y^2", "y - z^3", "z"]);
        assert_eq!(
            f.jacobian_determinant().unwrap(),
            Polynomial::constant(3, rat(2))
        );
    }

    #[test]
    fn recognize_rejects_non_triangular() {
        assert!(Generator::recognize(&map(&["x + y^2", "y + x^2"])).is_none());
        assert!(Generator::recognize(&map(&["x + y", "x + y"])).is_none());
    }
}
