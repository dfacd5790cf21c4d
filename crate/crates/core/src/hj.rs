//! Cyclic quotient surface singularities `1/n(1,a)` and their
//! Hirzebruch-Jung resolution chains.

use std::fmt;

use num_integer::Integer;

use crate::arith::{int, rat, ArithError};
use crate::{Rational, RationalMatrix};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HjError {
    #[error("invalid cyclic quotient parameters n={n}, a={a}: need n >= 2, 0 < a < n, gcd(n,a) = 1")]
    InvalidParameters { n: u64, a: u64 },
    #[error("chain weight {0} is below 2")]
    WeightBelowTwo(i64),
    #[error("empty chain")]
    EmptyChain,
    #[error("n must be positive")]
    NonPositiveOrder,
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// The germ `C^2 / Z_n` with weights `(1, a)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CyclicQuotient {
    n: u64,
    a: u64,
}

impl CyclicQuotient {
    pub fn new(n: u64, a: u64) -> Result<Self, HjError> {
        if n < 2 || a == 0 || a >= n || n.gcd(&a) != 1 {
            return Err(HjError::InvalidParameters { n, a });
        }
        Ok(CyclicQuotient { n, a })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn a(&self) -> u64 {
        self.a
    }
}

impl fmt::Display for CyclicQuotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "1/{}(1,{})", self.n, self.a)
    }
}

/// Negated self-intersections `b_1, ..., b_m` of the resolution chain, all `>= 2`.
pub type HjChain = Vec<u64>;

/// Continued fraction `n/a = [b_1, ..., b_m]`.
pub fn hj_expand(q: CyclicQuotient) -> HjChain {
    let (mut x, mut y) = (q.n, q.a);
    let mut out = Vec::new();
    while y > 0 {
        let b = x.div_ceil(y);
        out.push(b);
        (x, y) = (y, b * y - x);
    }
    out
}

/// Inverse of [`hj_expand`].
pub fn chain_to_type(chain: &[i64]) -> Result<CyclicQuotient, HjError> {
    let (&last, rest) = chain.split_last().ok_or(HjError::EmptyChain)?;
    if let Some(&w) = chain.iter().find(|&&w| w < 2) {
        return Err(HjError::WeightBelowTwo(w));
    }
    let (mut num, mut den) = (last as u64, 1u64);
    for &b in rest.iter().rev() {
        (num, den) = (b as u64 * num - den, num);
    }
    CyclicQuotient::new(num, den)
}

/// `1/n(1,a')` with `a a' = 1 mod n`; its chain is the reversed chain.
pub fn conjugate_type(q: CyclicQuotient) -> CyclicQuotient {
    let n = q.n as i64;
    let e = (q.a as i64).extended_gcd(&n);
    let inv = e.x.rem_euclid(n) as u64;
    CyclicQuotient { n: q.n, a: inv }
}

fn chain_matrix(chain: &[u64]) -> RationalMatrix {
    let m = chain.len();
    let mut mat = RationalMatrix::zeros(m, m);
    for (i, &b) in chain.iter().enumerate() {
        mat.set(i, i, int(-(b as i64)));
        if i + 1 < m {
            mat.set(i, i + 1, int(1));
            mat.set(i + 1, i, int(1));
        }
    }
    mat
}

/// Discrepancies `d_i` with `K = sum d_i E_i` near the exceptional chain.
///
/// Solves `sum_i d_i (E_i . E_j) = -2 - E_j^2` by adjunction.
pub fn discrepancy_vector(q: CyclicQuotient) -> Result<Vec<Rational>, HjError> {
    let chain = hj_expand(q);
    let b: Vec<Rational> = chain.iter().map(|&w| int(w as i64 - 2)).collect();
    Ok(chain_matrix(&chain).solve(&b)?)
}

/// Pullback coefficients of a curve meeting `E_1` transversally once.
pub fn curve_pullback_on_chain(q: CyclicQuotient) -> Result<Vec<Rational>, HjError> {
    let chain = hj_expand(q);
    let mut b = vec![int(0); chain.len()];
    b[0] = int(-1);
    Ok(chain_matrix(&chain).solve(&b)?)
}

/// Different of a smooth curve through a `1/n` point with coordinate-axis germ.
pub fn diff_closed_form(n: u64) -> Result<Rational, HjError> {
    if n == 0 {
        return Err(HjError::NonPositiveOrder);
    }
    Ok(int(1) - rat(1, n as i64))
}

/// Weights `(1, w)` of a cyclic group action of order `n`, possibly with
/// `gcd(n, w) > 1`. Such actions contain pseudo-reflections, so they are
/// kept as raw labels rather than as [`CyclicQuotient`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuotientWeights {
    pub n: u64,
    pub w: u64,
}

impl QuotientWeights {
    pub fn as_cyclic(&self) -> Option<CyclicQuotient> {
        CyclicQuotient::new(self.n, self.w).ok()
    }
}

impl fmt::Display for QuotientWeights {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "1/{}(1,{})", self.n, self.w)
    }
}

/// Local facts about the blow-up of an slt point `(xy=0)/Z_n(a,-a,1)`
/// along its singular line.
#[derive(Debug, Clone, PartialEq)]
pub struct SltBlowupFacts {
    pub e_singularities: [QuotientWeights; 2],
    pub y_singularities: [String; 2],
    pub ky_dot_f: Rational,
}

pub fn slt_blowup_facts(q: CyclicQuotient) -> SltBlowupFacts {
    let (n, a) = (q.n, q.a);
    let two_a = (2 * a) % n;
    let minus_two_a = (n - two_a) % n;
    SltBlowupFacts {
        e_singularities: [
            QuotientWeights { n, w: two_a },
            QuotientWeights { n, w: minus_two_a },
        ],
        y_singularities: [
            format!("1/{n}({a},{minus_two_a},1)"),
            format!("1/{n}({},{two_a},1)", n - a),
        ],
        ky_dot_f: int(-1),
    }
}

/// Local facts about the blow-up of a `T4` point with all parameters finite.
#[derive(Debug, Clone, PartialEq)]
pub struct OdpBlowupFacts {
    pub fiber_components: u32,
    pub transversal: bool,
    pub e_singularity: &'static str,
    pub y_singularity: &'static str,
    pub ky_dot_fi: Rational,
    pub fiber_self_intersection_on_normalization: Rational,
}

pub fn odp_blowup_facts() -> OdpBlowupFacts {
    OdpBlowupFacts {
        fiber_components: 2,
        transversal: true,
        e_singularity: "xy - z^2 = 0",
        y_singularity: "1/2(1,1,1)",
        ky_dot_fi: rat(-1, 2),
        fiber_self_intersection_on_normalization: rat(-1, 2),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cq(n: u64, a: u64) -> CyclicQuotient {
        CyclicQuotient::new(n, a).unwrap()
    }

    #[test]
    fn expansions() {
        assert_eq!(hj_expand(cq(9, 5)), vec![2, 5]);
        assert_eq!(hj_expand(cq(9, 7)), vec![2, 2, 2, 3]);
        assert_eq!(hj_expand(cq(9, 4)), vec![3, 2, 2, 2]);
        assert_eq!(hj_expand(cq(3, 1)), vec![3]);
        assert_eq!(hj_expand(cq(5, 4)), vec![2, 2, 2, 2]);
    }

    #[test]
    fn chain_roundtrip_and_errors() {
        assert_eq!(chain_to_type(&[2, 5]).unwrap(), cq(9, 5));
        assert_eq!(chain_to_type(&[3, 2, 2, 2]).unwrap(), cq(9, 4));
        assert_eq!(chain_to_type(&[1, 3]), Err(HjError::WeightBelowTwo(1)));
        assert_eq!(chain_to_type(&[]), Err(HjError::EmptyChain));
    }

    #[test]
    fn invalid_parameters() {
        for (n, a) in [(1, 0), (6, 2), (5, 5), (5, 0), (4, 6)] {
            assert!(CyclicQuotient::new(n, a).is_err(), "{n} {a}");
        }
    }

    #[test]
    fn conjugates() {
        assert_eq!(conjugate_type(cq(9, 5)), cq(9, 2));
        assert_eq!(conjugate_type(cq(9, 4)), cq(9, 7));
        assert_eq!(conjugate_type(cq(7, 1)), cq(7, 1));
    }

    #[test]
    fn discrepancies_of_two_five() {
        assert_eq!(discrepancy_vector(cq(9, 5)).unwrap(), vec![rat(-1, 3), rat(-2, 3)]);
        // First entry equals (a - n + 1)/n.
        assert_eq!(rat(5 - 9 + 1, 9), rat(-1, 3));
        assert_eq!(discrepancy_vector(cq(5, 4)).unwrap(), vec![int(0); 4]);
    }

    #[test]
    fn curve_coefficients() {
        assert_eq!(curve_pullback_on_chain(cq(9, 5)).unwrap(), vec![rat(5, 9), rat(1, 9)]);
        // [2]^k: coefficient at E_j is (k + 1 - j)/(k + 1).
        assert_eq!(
            curve_pullback_on_chain(cq(4, 3)).unwrap(),
            vec![rat(3, 4), rat(2, 4), rat(1, 4)]
        );
    }

    #[test]
    fn differents() {
        assert_eq!(diff_closed_form(2).unwrap(), rat(1, 2));
        assert_eq!(diff_closed_form(9).unwrap(), rat(8, 9));
        assert_eq!(diff_closed_form(1).unwrap(), int(0));
        assert_eq!(diff_closed_form(0), Err(HjError::NonPositiveOrder));
    }

    #[test]
    fn slt_blowup() {
        let f = slt_blowup_facts(cq(3, 1));
        assert_eq!(f.e_singularities[0].as_cyclic(), Some(cq(3, 2)));
        assert_eq!(f.e_singularities[1].as_cyclic(), Some(cq(3, 1)));
        assert_eq!(f.ky_dot_f, int(-1));
        let g = slt_blowup_facts(cq(9, 5));
        assert_eq!(g.e_singularities[0].w, 1);
        assert_eq!(g.e_singularities[1].w, 8);
        assert_eq!(g.y_singularities[0], "1/9(5,8,1)");
        assert_eq!(slt_blowup_facts(cq(2, 1)).ky_dot_f, int(-1));
        assert_eq!(slt_blowup_facts(cq(2, 1)).e_singularities[0].as_cyclic(), None);
    }

    #[test]
    fn odp_blowup() {
        let f = odp_blowup_facts();
        assert_eq!(f.fiber_components, 2);
        assert_eq!(f.ky_dot_fi, rat(-1, 2));
        assert_eq!(f.fiber_self_intersection_on_normalization, rat(-1, 2));
    }
}
