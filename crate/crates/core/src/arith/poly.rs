use std::fmt;

use super::{ArithError, Field};

/// A value in the field or one of the two signed infinities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Extended<T> {
    Finite(T),
    PlusInfinity,
    MinusInfinity,
}

impl<T> Extended<T> {
    pub fn finite(self) -> Option<T> {
        match self {
            Extended::Finite(v) => Some(v),
            _ => None,
        }
    }
}

impl<T: fmt::Display> fmt::Display for Extended<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(v) => write!(f, "{v}"),
            Extended::PlusInfinity => f.write_str("inf"),
            Extended::MinusInfinity => f.write_str("-inf"),
        }
    }
}

/// Univariate polynomial, coefficients lowest degree first, no trailing zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Field> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `t`.
    pub fn x() -> Self {
        Self::new(vec![T::zero(), T::one()])
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn eval(&self, t: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * t.clone() + c.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |p: &Self, i: usize| p.coeffs.get(i).cloned().unwrap_or_else(T::zero);
        Self::new((0..n).map(|i| get(self, i) + get(other, i)).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }
}

/// Limit of `num(t) / den(t)` as `t -> +inf`, by comparing leading terms.
pub fn limit_at_infinity<T: Field>(num: &Poly<T>, den: &Poly<T>) -> Result<Extended<T>, ArithError> {
    let (Some(dd), Some(lc_d)) = (den.degree(), den.leading()) else {
        return Err(ArithError::ZeroDenominatorPolynomial);
    };
    let (Some(nd), Some(lc_n)) = (num.degree(), num.leading()) else {
        return Ok(Extended::Finite(T::zero()));
    };
    Ok(match nd.cmp(&dd) {
        std::cmp::Ordering::Less => Extended::Finite(T::zero()),
        std::cmp::Ordering::Equal => Extended::Finite(lc_n.clone() / lc_d.clone()),
        std::cmp::Ordering::Greater => {
            if (lc_n.clone() / lc_d.clone()).is_positive() {
                Extended::PlusInfinity
            } else {
                Extended::MinusInfinity
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use crate::Rational;

    fn p(cs: &[i64]) -> Poly<Rational> {
        Poly::new(cs.iter().map(|&c| int(c)).collect())
    }

    #[test]
    fn alpha_four_in_r_at_three_three() {
        // r(p+q) - 4 over rpq - p - q with p = q = 3.
        let l = limit_at_infinity(&p(&[-4, 6]), &p(&[-6, 9])).unwrap();
        assert_eq!(l, Extended::Finite(rat(2, 3)));
    }

    #[test]
    fn degree_comparison() {
        assert_eq!(limit_at_infinity(&p(&[1]), &p(&[0, 1])).unwrap(), Extended::Finite(int(0)));
        assert_eq!(limit_at_infinity(&p(&[0, 0, 2]), &p(&[0, -1])).unwrap(), Extended::MinusInfinity);
        assert_eq!(limit_at_infinity(&p(&[0, 0, 2]), &p(&[5, 1])).unwrap(), Extended::PlusInfinity);
        assert_eq!(limit_at_infinity(&p(&[]), &p(&[3])).unwrap(), Extended::Finite(int(0)));
    }

    #[test]
    fn zero_denominator() {
        assert_eq!(
            limit_at_infinity(&p(&[1]), &p(&[0, 0])),
            Err(ArithError::ZeroDenominatorPolynomial)
        );
    }

    #[test]
    fn arithmetic() {
        let a = p(&[1, 1]);
        assert_eq!(a.mul(&a), p(&[1, 2, 1]));
        assert_eq!(a.sub(&a), Poly::zero());
        assert_eq!(a.degree(), Some(1));
        assert_eq!(p(&[1, 2, 1]).eval(&int(2)), int(9));
        assert_eq!(Poly::<Rational>::x().add(&Poly::constant(int(3))), p(&[3, 1]));
    }
}
