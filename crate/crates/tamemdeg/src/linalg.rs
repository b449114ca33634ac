//! Small dense matrices over the rationals.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::Rational;

pub type Matrix = Vec<Vec<Rational>>;

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect()
}

fn check_square(a: &Matrix) -> Result<usize> {
    let n = a.len();
    if let Some(row) = a.iter().find(|r| r.len() != n) {
        return Err(Error::ArityMismatch {
            expected: n,
            found: row.len(),
        });
    }
    Ok(n)
}

/// Gauss-Jordan inverse.
pub fn inverse(a: &Matrix) -> Result<Matrix> {
    let n = check_square(a)?;
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(identity(n))
        .map(|(row, id)| row.iter().cloned().chain(id).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !m[r][col].is_zero())
            .ok_or(Error::SingularMatrix)?;
        m.swap(col, pivot);
        let inv = Rational::one() / &m[col][col];
        for x in m[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                let pivot_row = m[col].clone();
                for (x, p) in m[r].iter_mut().zip(&pivot_row) {
                    *x -= &factor * p;
                }
            }
        }
    }
    Ok(m.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn determinant(a: &Matrix) -> Result<Rational> {
    let n = check_square(a)?;
    let mut m = a.clone();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Ok(Rational::zero());
        };
        if pivot != col {
            m.swap(col, pivot);
            det = -det;
        }
        det *= &m[col][col];
        for r in col + 1..n {
            if !m[r][col].is_zero() {
                let factor = &m[r][col] / &m[col][col];
                let pivot_row = m[col].clone();
                for (x, p) in m[r].iter_mut().zip(&pivot_row) {
                    *x -= &factor * p;
                }
            }
        }
    }
    Ok(det)
}

pub fn mat_vec(a: &Matrix, v: &[Rational]) -> Vec<Rational> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter()
            .map(|r| r.iter().map(|&x| rat(x)).collect())
            .collect()
    }

    #[test]
    fn inverse_roundtrip() {
        let a = m(&[&[0, 1, 2], &[1, 0, 3], &[4, -3, 8]]);
        let inv = inverse(&a).unwrap();
        let prod: Matrix = (0..3)
            .map(|i| {
                (0..3)
                    .map(|j| (0..3).map(|k| &a[i][k] * &inv[k][j]).sum())
                    .collect()
            })
            .collect();
        assert_eq!(prod, identity(3));
        assert_eq!(determinant(&a).unwrap(), rat(-2));
    }

    #[test]
    fn singular() {
        let a = m(&[&[1, 2], &[2, 4]]);
        assert_eq!(inverse(&a), Err(Error::SingularMatrix));
        assert_eq!(determinant(&a).unwrap(), rat(0));
    }
}
