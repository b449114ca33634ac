//! Poisson bracket degrees and reduced pairs.
//!
//! For homogeneous forms, membership `f ∈ ℂ[g]` is the same as
//! `f = c·g^k`: a homogeneous polynomial in `g` of degree `deg f` can only
//! contain the single power `g^(deg f / deg g)`.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{Degree, Polynomial, Rational};

/// `∂f/∂x_i · ∂g/∂x_j − ∂f/∂x_j · ∂g/∂x_i` (0-based indices, `i < j`).
pub fn jac_minor(f: &Polynomial, g: &Polynomial, i: usize, j: usize) -> Result<Polynomial> {
    same_vars(f, g)?;
    let n = f.nvars();
    if j >= n {
        return Err(Error::IndexOutOfRange { index: j, nvars: n });
    }
    if i >= j {
        return Err(Error::InvalidArgument(format!(
            "minor indices must satisfy i < j, got ({i}, {j})"
        )));
    }
    let fi = f.partial_derivative(i)?;
    let fj = f.partial_derivative(j)?;
    let gi = g.partial_derivative(i)?;
    let gj = g.partial_derivative(j)?;
    Ok(&(&fi * &gj) - &(&fj * &gi))
}

/// `deg[f, g]`: 2 plus the largest degree of a 2×2 Jacobian minor, or
/// `NegInf` when every minor vanishes.
pub fn poisson_degree(f: &Polynomial, g: &Polynomial) -> Result<Degree> {
    same_vars(f, g)?;
    let n = f.nvars();
    let df: Vec<Polynomial> = (0..n)
        .map(|i| f.partial_derivative(i))
        .collect::<Result<_>>()?;
    let dg: Vec<Polynomial> = (0..n)
        .map(|i| g.partial_derivative(i))
        .collect::<Result<_>>()?;
    let mut best = Degree::NegInf;
    for i in 0..n {
        for j in i + 1..n {
            let m = &(&df[i] * &dg[j]) - &(&df[j] * &dg[i]);
            if let Degree::Finite(d) = m.degree() {
                best = best.max(Degree::Finite(d + 2));
            }
        }
    }
    Ok(best)
}

pub fn algebraically_independent(f: &Polynomial, g: &Polynomial) -> Result<bool> {
    Ok(poisson_degree(f, g)? >= Degree::Finite(2))
}

/// Returns `(c, k)` with `hbar = c · fbar^k` when such a pair exists.
pub fn is_power_proportional(hbar: &Polynomial, fbar: &Polynomial) -> Option<(Rational, u32)> {
    if hbar.nvars() != fbar.nvars() || hbar.is_zero() || fbar.is_zero() {
        return None;
    }
    let dh = hbar.degree().finite()?;
    let df = fbar.degree().finite()?;
    let k = if df == 0 {
        if dh != 0 {
            return None;
        }
        0
    } else {
        if dh % df != 0 {
            return None;
        }
        dh / df
    };
    let power = fbar.pow(k);
    if power.num_terms() != hbar.num_terms() {
        return None;
    }
    let (mh, ch) = hbar.leading_term()?;
    let (mp, cp) = power.leading_term()?;
    if mh != mp {
        return None;
    }
    let c = ch / cp;
    if power.scale(&c) == *hbar {
        Some((c, k))
    } else {
        None
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReducedPairReport {
    pub independent: bool,
    pub leading_forms_dependent: bool,
    pub f_bar_in_c_of_g_bar: bool,
    pub g_bar_in_c_of_f_bar: bool,
    pub is_star_reduced: bool,
    pub p: Option<u32>,
}

pub fn reduced_pair_report(f: &Polynomial, g: &Polynomial) -> Result<ReducedPairReport> {
    same_vars(f, g)?;
    if f.is_constant() || g.is_constant() {
        return Err(Error::InvalidArgument(
            "reduced pair conditions need nonconstant polynomials".into(),
        ));
    }
    let fbar = f.leading_form()?;
    let gbar = g.leading_form()?;
    let independent = algebraically_independent(f, g)?;
    let leading_forms_dependent = poisson_degree(&fbar, &gbar)?.is_neg_inf();
    let f_in_g = is_power_proportional(&fbar, &gbar).is_some();
    let g_in_f = is_power_proportional(&gbar, &fbar).is_some();
    let is_star_reduced = independent && leading_forms_dependent && !f_in_g && !g_in_f;
    let p = if is_star_reduced {
        let df = f.degree().finite().unwrap();
        let dg = g.degree().finite().unwrap();
        let lo = df.min(dg);
        Some(lo / lo.gcd(&df.max(dg)))
    } else {
        None
    };
    Ok(ReducedPairReport {
        independent,
        leading_forms_dependent,
        f_bar_in_c_of_g_bar: f_in_g,
        g_bar_in_c_of_f_bar: g_in_f,
        is_star_reduced,
        p,
    })
}

/// Lower bound `q(p·deg g − deg g − deg f + deg[f,g]) + r·deg g` for
/// `deg G(f, g)`, where `deg_Y G = p·q + r` and `p = deg f / gcd(deg f, deg g)`.
pub fn su_lower_bound(deg_f: u64, deg_g: u64, bracket_deg: u64, degy_g: u64) -> Result<i64> {
    if deg_f == 0 || deg_f >= deg_g {
        return Err(Error::InvalidArgument(format!(
            "need 0 < deg f < deg g, got deg f = {deg_f}, deg g = {deg_g}"
        )));
    }
    let p = deg_f / deg_f.gcd(&deg_g);
    let q = degy_g / p;
    let r = degy_g % p;
    let per_q = (p * deg_g) as i64 - deg_g as i64 - deg_f as i64 + bracket_deg as i64;
    Ok(q as i64 * per_q + (r * deg_g) as i64)
}

fn same_vars(f: &Polynomial, g: &Polynomial) -> Result<()> {
    if f.nvars() != g.nvars() {
        return Err(Error::ArityMismatch {
            expected: f.nvars(),
            found: g.nvars(),
        });
    }
    Ok(())
}
