use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use crate::rational::{factorial, Rational};

/// `alpha * phi_j(scale * z)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PhiTerm {
    pub alpha: Rational,
    pub j: u32,
    pub scale: Rational,
}

/// A coefficient function `z -> sum_m alpha_m phi_{j_m}(scale_m z)`.
///
/// Terms are kept merged (one per `(j, scale)`), sorted, and free of zero
/// coefficients, so structural equality is functional equality over the
/// basis of scaled phi functions.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct PhiCombo {
    terms: Vec<PhiTerm>,
}

impl PhiCombo {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `alpha * phi_j(scale z)`.
    pub fn term(alpha: Rational, j: u32, scale: Rational) -> Self {
        Self::from_terms(vec![PhiTerm { alpha, j, scale }])
    }

    pub fn from_terms(terms: Vec<PhiTerm>) -> Self {
        let mut c = Self { terms };
        c.normalize();
        c
    }

    fn normalize(&mut self) {
        self.terms.sort_by(|a, b| (a.j, a.scale).cmp(&(b.j, b.scale)));
        let mut merged: Vec<PhiTerm> = Vec::with_capacity(self.terms.len());
        for t in self.terms.drain(..) {
            match merged.last_mut() {
                Some(last) if last.j == t.j && last.scale == t.scale => last.alpha += t.alpha,
                _ => merged.push(t),
            }
        }
        merged.retain(|t| !t.alpha.is_zero());
        self.terms = merged;
    }

    pub fn terms(&self) -> &[PhiTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Exact value at `z = 0`, using `phi_j(0) = 1/j!`.
    pub fn at_zero(&self) -> Rational {
        self.terms.iter().map(|t| t.alpha / factorial(t.j)).sum()
    }

    pub fn scaled(&self, k: Rational) -> Self {
        Self::from_terms(self.terms.iter().map(|t| PhiTerm { alpha: t.alpha * k, ..*t }).collect())
    }
}

impl Add for PhiCombo {
    type Output = PhiCombo;
    fn add(mut self, rhs: PhiCombo) -> PhiCombo {
        self.terms.extend(rhs.terms);
        self.normalize();
        self
    }
}

impl Add for &PhiCombo {
    type Output = PhiCombo;
    fn add(self, rhs: &PhiCombo) -> PhiCombo {
        self.clone() + rhs.clone()
    }
}

impl Neg for PhiCombo {
    type Output = PhiCombo;
    fn neg(self) -> PhiCombo {
        self.scaled(-Rational::from_integer(1))
    }
}

impl Sub for PhiCombo {
    type Output = PhiCombo;
    fn sub(self, rhs: PhiCombo) -> PhiCombo {
        self + (-rhs)
    }
}

impl Mul<PhiCombo> for Rational {
    type Output = PhiCombo;
    fn mul(self, rhs: PhiCombo) -> PhiCombo {
        rhs.scaled(self)
    }
}

impl Mul<&PhiCombo> for Rational {
    type Output = PhiCombo;
    fn mul(self, rhs: &PhiCombo) -> PhiCombo {
        rhs.scaled(self)
    }
}

impl fmt::Display for PhiTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*phi{}({})", self.alpha, self.j, self.scale)
    }
}

impl fmt::Display for PhiCombo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, t) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn merge_and_cancel() {
        let a = PhiCombo::term(rat(1, 2), 2, int(1));
        let b = PhiCombo::term(rat(-1, 2), 2, int(1));
        assert!((a.clone() + b).is_zero());
        let c = a.clone() + a.clone();
        assert_eq!(c, PhiCombo::term(int(1), 2, int(1)));
    }

    #[test]
    fn value_at_zero() {
        let b6 = PhiCombo::from_terms(vec![
            PhiTerm { alpha: rat(125, 14), j: 2, scale: int(1) },
            PhiTerm { alpha: rat(-625, 14), j: 3, scale: int(1) },
            PhiTerm { alpha: rat(1125, 14), j: 4, scale: int(1) },
        ]);
        assert_eq!(b6.at_zero(), rat(125, 336));
        assert_eq!(PhiCombo::zero().at_zero(), int(0));
    }
}
