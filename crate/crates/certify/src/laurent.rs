use std::collections::BTreeMap;
use std::fmt;

use frog_core::rational::format_ratio;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{CertifyError, Result};

/// Polynomial in y and 1/y with rational coefficients. Zero coefficients
/// are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<i32, BigRational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(coeff: BigRational, exp: i32) -> Self {
        let mut p = Self::zero();
        p.add_term(coeff, exp);
        p
    }

    pub fn add_term(&mut self, coeff: BigRational, exp: i32) {
        if coeff.is_zero() {
            return;
        }
        let c = self.terms.entry(exp).or_insert_with(BigRational::zero);
        *c += coeff;
        if c.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &BigRational)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, exp: i32) -> BigRational {
        self.terms.get(&exp).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn exponents(&self) -> impl Iterator<Item = i32> + '_ {
        self.terms.keys().copied()
    }

    pub fn eval(&self, y: &BigRational) -> BigRational {
        let inv = y.recip();
        self.terms
            .iter()
            .map(|(e, c)| {
                let base = if *e >= 0 { y } else { &inv };
                c * pow(base, e.unsigned_abs())
            })
            .sum()
    }
}

fn pow(x: &BigRational, e: u32) -> BigRational {
    num_traits::pow(x.clone(), e as usize)
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}*y^{}", format_ratio(c), e)?;
        }
        Ok(())
    }
}

/// Square matrix of Laurent polynomials with labelled rows and columns.
#[derive(Debug, Clone, PartialEq)]
pub struct TypedMatrix {
    pub id: String,
    pub labels: Vec<String>,
    pub entries: Vec<Vec<LaurentPoly>>,
}

pub type RationalMatrix = Vec<Vec<BigRational>>;

impl TypedMatrix {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn entry(&self, row: &str, col: &str) -> Option<&LaurentPoly> {
        let i = self.labels.iter().position(|l| l == row)?;
        let j = self.labels.iter().position(|l| l == col)?;
        Some(&self.entries[i][j])
    }

    pub fn has_nonnegative_coefficients(&self) -> bool {
        self.entries.iter().flatten().all(|p| p.terms().all(|(_, c)| !c.is_negative()))
    }

    /// Substitute y into every entry.
    pub fn eval(&self, y: &BigRational) -> Result<RationalMatrix> {
        if !y.is_positive() {
            return Err(CertifyError::Domain(format!("y = {} must be positive", format_ratio(y))));
        }
        Ok(self.entries.iter().map(|row| row.iter().map(|p| p.eval(y)).collect()).collect())
    }

    /// One line per nonzero entry: `row<TAB>col<TAB>c*y^e + ...`.
    pub fn canonical_text(&self) -> String {
        let mut out = String::new();
        for (i, row) in self.entries.iter().enumerate() {
            for (j, p) in row.iter().enumerate() {
                if !p.is_zero() {
                    out.push_str(&format!("{}\t{}\t{}\n", self.labels[i], self.labels[j], p));
                }
            }
        }
        out
    }
}

pub fn identity(n: usize) -> RationalMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigRational::one() } else { BigRational::zero() })
                .collect()
        })
        .collect()
}

pub fn to_f64_matrix(m: &RationalMatrix) -> Vec<Vec<f64>> {
    m.iter().map(|r| r.iter().map(frog_core::rational::ratio_to_f64).collect()).collect()
}


#[cfg(test)]
mod tests {
    use super::*;
    use frog_core::rational::ratio;

    #[test]
    fn zero_coefficients_are_dropped() {
        let mut p = LaurentPoly::monomial(ratio(1, 2), 1);
        p.add_term(ratio(-1, 2), 1);
        assert!(p.is_zero());
        p.add_term(ratio(0, 1), 3);
        assert_eq!(p.exponents().count(), 0);
    }

    #[test]
    fn evaluation() {
        let mut p = LaurentPoly::monomial(ratio(1, 36), -1);
        p.add_term(ratio(55, 36), 1);
        assert_eq!(p.eval(&ratio(1, 3)), ratio(1, 12) + ratio(55, 108));
        assert_eq!(p.eval(&ratio(1, 1)), ratio(56, 36));
        assert_eq!(p.to_string(), "1/36*y^-1 + 55/36*y^1");
    }

    #[test]
    fn constant_entries_ignore_y() {
        let m = TypedMatrix {
            id: "id".into(),
            labels: vec!["a".into(), "b".into()],
            entries: vec![
                vec![LaurentPoly::monomial(ratio(1, 1), 0), LaurentPoly::zero()],
                vec![LaurentPoly::zero(), LaurentPoly::monomial(ratio(1, 1), 0)],
            ],
        };
        for y in [ratio(1, 3), ratio(7, 2)] {
            assert_eq!(m.eval(&y).unwrap(), identity(2));
        }
        assert!(m.eval(&ratio(0, 1)).is_err());
        assert!(m.eval(&ratio(-1, 2)).is_err());
    }
}
