//! Exact scalars, dense matrices and rational-function limits.
//!
//! Everything here is generic over [`Field`], an exact ordered field. The
//! crate root fixes the scalar to an arbitrary-precision rational.

mod matrix;
mod multivariate;
mod poly;

use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Num, Signed};

pub use matrix::{solve_linear_system, Matrix};
pub use multivariate::{MPoly, RatFn, RatFnLimit};
pub use poly::{limit_at_infinity, Extended, Poly};

use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArithError {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("denominator polynomial is identically zero")]
    ZeroDenominatorPolynomial,
    #[error("limit diverges with a sign that depends on remaining variables")]
    IndeterminateSign,
    #[error("division by zero")]
    DivisionByZero,
}

/// An exact ordered field.
///
/// Floating point types are deliberately not implementors: every quantity in
/// this crate is compared with `==`.
pub trait Field: Clone + fmt::Debug + PartialOrd + Num + Signed {
    /// Score used to pick Gaussian elimination pivots. Larger is preferred.
    fn pivot_rank(&self) -> Self {
        self.abs()
    }
}

impl<I> Field for Ratio<I>
where
    I: Clone + Integer + Signed + fmt::Debug,
{
    // Largest absolute numerator keeps intermediate growth small in practice.
    fn pivot_rank(&self) -> Self {
        Ratio::from_integer(self.numer().abs())
    }
}

/// Builds `n/d`. Panics when `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Builds the integer `n` as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Canonical text form: `n/d` in lowest terms with positive `d`, and just `n`
/// when `d == 1`.
pub fn render(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses the canonical form produced by [`render`]. Non-reduced input is
/// accepted and reduced.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: num_bigint::BigInt = n.parse().ok()?;
    let d: num_bigint::BigInt = d.parse().ok()?;
    if d == num_bigint::BigInt::from(0) {
        return None;
    }
    Some(Rational::new(n, d))
}

/// Renders a list as `[a,b,c]`.
pub fn render_list(xs: &[Rational]) -> String {
    let parts: Vec<String> = xs.iter().map(render).collect();
    format!("[{}]", parts.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_drops_unit_denominator() {
        assert_eq!(render(&rat(-2, 3)), "-2/3");
        assert_eq!(render(&rat(10, 2)), "5");
        assert_eq!(render(&rat(4, -6)), "-2/3");
        assert_eq!(render(&int(0)), "0");
    }

    #[test]
    fn parse_inverts_render() {
        for x in [rat(-2, 3), int(5), rat(16, 15), int(0)] {
            assert_eq!(parse_rational(&render(&x)), Some(x));
        }
        assert_eq!(parse_rational("6/4"), Some(rat(3, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }

    #[test]
    fn pivot_rank_uses_numerator() {
        assert_eq!(rat(-7, 100).pivot_rank(), int(7));
        let small: Ratio<i64> = Ratio::new(-3, 2);
        assert_eq!(small.pivot_rank(), Ratio::from_integer(3));
    }
}
