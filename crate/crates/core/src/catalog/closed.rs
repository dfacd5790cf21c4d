//! Closed-form local invariants as rational functions of the cusp
//! parameters, evaluated exactly with iterated limits for infinite ones.

use std::sync::OnceLock;

use super::{effective_type, CatalogError, ComponentRole, ExtNat, SingularityType};
use crate::arith::{int, rat, RatFnLimit};
use crate::{Rational, RationalFunction, RationalMatrix};

const P: usize = 0;
const Q: usize = 1;
const R: usize = 2;
const NVARS: usize = 3;

fn v(i: usize) -> RationalFunction {
    RationalFunction::var(NVARS, i)
}

fn c(n: i64) -> RationalFunction {
    RationalFunction::constant(NVARS, int(n))
}

fn lin(i: usize, a: i64, b: i64) -> RationalFunction {
    c(a).mul(&v(i)).add(&c(b))
}

fn div(a: &RationalFunction, b: &RationalFunction) -> RationalFunction {
    a.div(b).expect("closed forms have nonzero denominators")
}

/// `1 / (x - 2)`.
fn inv_minus_two(i: usize) -> RationalFunction {
    div(&c(1), &lin(i, 1, -2))
}

/// `(2r - 3) / (4r - 4)`, the end coefficient of the middle chain.
fn middle_end() -> RationalFunction {
    div(&lin(R, 2, -3), &lin(R, 4, -4))
}

/// The named closed forms. Variables are `p`, `q`, `r` in that order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ClosedForm {
    /// `1 + (p + q) / (pq + p + q)`.
    Alpha3,
    /// `(r(p + q) - 4) / (rpq - p - q)`.
    Alpha4,
    Beta3,
    Delta3,
    Beta4,
    Delta4,
    /// `V4` class with `p = 2`, as a function of `q` and `r`.
    Beta4V,
    Delta4V,
    /// Squared kept curve on the `p` side of a `T4` resolution.
    KeptSqP,
    /// Squared kept curve on the `q` side.
    KeptSqQ,
    /// Intersection of the two kept curves.
    KeptPair,
    /// Component against the kept curve on the `p` side.
    BranchDotP,
    BranchDotQ,
    /// Squared kept curve of a `T3` resolution.
    KeptSqT3,
    BranchDotT3,
}

const FORM_COUNT: usize = ClosedForm::BranchDotT3 as usize + 1;

impl ClosedForm {
    /// The form built once per process.
    pub fn cached(self) -> &'static RationalFunction {
        static CACHE: [OnceLock<RationalFunction>; FORM_COUNT] = [const { OnceLock::new() }; FORM_COUNT];
        CACHE[self as usize].get_or_init(|| self.build())
    }

    pub fn build(self) -> RationalFunction {
        let (p, q, r) = (v(P), v(Q), v(R));
        let pq = p.mul(&q);
        match self {
            ClosedForm::Alpha3 => c(1).add(&div(&p.add(&q), &pq.add(&p).add(&q))),
            ClosedForm::Alpha4 => div(
                &r.mul(&p.add(&q)).sub(&c(4)),
                &r.mul(&pq).sub(&p).sub(&q),
            ),
            ClosedForm::Beta3 => c(-1).add(&div(&c(1), &p)).add(&div(&c(1), &q)),
            ClosedForm::Delta3 => {
                let s = p.add(&q);
                div(&s.mul(&s), &pq.mul(&pq.add(&p).add(&q)))
            }
            ClosedForm::Beta4 => c(-1).add(&inv_minus_two(P)).add(&inv_minus_two(Q)),
            ClosedForm::Delta4 => inv_minus_two(P)
                .add(&inv_minus_two(Q))
                .sub(&ClosedForm::Alpha4.build()),
            ClosedForm::Beta4V => inv_minus_two(Q).sub(&middle_end()),
            ClosedForm::Delta4V => {
                let n = c(4).mul(&r).add(&q).sub(&c(6));
                let d = c(4)
                    .mul(&c(2).mul(&r).mul(&q).sub(&q).sub(&c(2)))
                    .mul(&lin(R, 1, -1))
                    .mul(&lin(Q, 1, -2));
                div(&n.mul(&n), &d)
            }
            ClosedForm::KeptSqP => c(-1).sub(&inv_minus_two(P)).add(&middle_end()),
            ClosedForm::KeptSqQ => c(-1).sub(&inv_minus_two(Q)).add(&middle_end()),
            ClosedForm::KeptPair => div(&c(1), &lin(R, 4, -4)),
            ClosedForm::BranchDotP => inv_minus_two(P),
            ClosedForm::BranchDotQ => inv_minus_two(Q),
            ClosedForm::KeptSqT3 => c(-1).sub(&div(&c(1), &p)).sub(&div(&c(1), &q)),
            ClosedForm::BranchDotT3 => div(&c(1), &p).add(&div(&c(1), &q)),
        }
    }
}

/// Evaluates at the parameters, sending infinite ones to infinity in the
/// given variable order after substituting the finite ones.
pub fn evaluate_in_order(
    f: &RationalFunction,
    params: [ExtNat; 3],
    order: [usize; 3],
) -> Result<Rational, CatalogError> {
    let label = || format!("({},{},{})", params[0], params[1], params[2]);
    let mut g = f.clone();
    for (i, v) in params.iter().enumerate() {
        if let ExtNat::Finite(n) = v {
            g = g.substitute(i, &int(*n as i64))?;
        }
    }
    for i in order {
        if params[i].is_infinite() {
            g = match g.limit_in(i)? {
                RatFnLimit::Finite(h) => h,
                _ => return Err(CatalogError::Divergent(label())),
            };
        }
    }
    g.as_constant().ok_or_else(|| CatalogError::Divergent(label()))
}

/// [`evaluate_in_order`] with the order `p, q, r`.
pub fn evaluate(f: &RationalFunction, params: [ExtNat; 3]) -> Result<Rational, CatalogError> {
    evaluate_in_order(f, params, [P, Q, R])
}

pub fn alpha3(p: ExtNat, q: ExtNat) -> Result<Rational, CatalogError> {
    SingularityType::DegCusp3 { p, q }.validate()?;
    evaluate(ClosedForm::Alpha3.cached(), [p, q, ExtNat::Finite(1)])
}

pub fn alpha4(p: ExtNat, q: ExtNat, r: ExtNat) -> Result<Rational, CatalogError> {
    SingularityType::DegCusp4 { p, q, r }.validate()?;
    evaluate(ClosedForm::Alpha4.cached(), [p, q, r])
}

/// Class of a point in the census that enters the degree formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CensusClass {
    NormalCrossing,
    Pinch,
    C1,
    C2,
    Slt,
    /// `T3` cusps.
    U3,
    /// `T4` cusps with `p, q >= 3`.
    W4,
    /// `T4` cusps with exactly one of `p, q` equal to 2.
    V4,
    /// `T4` cusps with `p = q = 2`.
    M,
}

impl CensusClass {
    pub fn token(&self) -> &'static str {
        match self {
            CensusClass::NormalCrossing => "nc",
            CensusClass::Pinch => "pinch",
            CensusClass::C1 => "c1",
            CensusClass::C2 => "c2",
            CensusClass::Slt => "slt",
            CensusClass::U3 => "U3",
            CensusClass::W4 => "W4",
            CensusClass::V4 => "V4",
            CensusClass::M => "m",
        }
    }
}

/// Local contributions of a point to the degree computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointInvariants {
    /// Gain in self-intersection from the kept exceptional curves.
    pub beta: Rational,
    /// Loss in self-intersection from the partial contraction.
    pub delta: Rational,
    pub alpha: Rational,
    pub census_class: CensusClass,
}

fn trivial(alpha: i64, class: CensusClass) -> PointInvariants {
    PointInvariants {
        beta: int(0),
        delta: int(0),
        alpha: int(alpha),
        census_class: class,
    }
}

pub fn point_invariants(t: SingularityType, role: Option<ComponentRole>) -> Result<PointInvariants, CatalogError> {
    effective_invariants(effective_type(t, role)?)
}

/// [`point_invariants`] for parameters already placed by role.
pub(crate) fn effective_invariants(t: SingularityType) -> Result<PointInvariants, CatalogError> {
    let two = ExtNat::Finite(2);
    Ok(match t {
        SingularityType::NormalCrossing => trivial(0, CensusClass::NormalCrossing),
        SingularityType::Pinch => trivial(1, CensusClass::Pinch),
        SingularityType::DegCusp1 => trivial(2, CensusClass::C1),
        SingularityType::DegCusp2 { .. } => trivial(2, CensusClass::C2),
        SingularityType::Slt(_) => trivial(0, CensusClass::Slt),
        SingularityType::DegCusp3 { p, q } => {
            let at = [p, q, ExtNat::Finite(1)];
            PointInvariants {
                beta: evaluate(ClosedForm::Beta3.cached(), at)?,
                delta: evaluate(ClosedForm::Delta3.cached(), at)?,
                alpha: evaluate(ClosedForm::Alpha3.cached(), at)?,
                census_class: CensusClass::U3,
            }
        }
        SingularityType::DegCusp4 { p, q, r } => {
            let alpha = evaluate(ClosedForm::Alpha4.cached(), [p, q, r])?;
            match (p == two, q == two) {
                (true, true) => PointInvariants {
                    alpha,
                    ..trivial(0, CensusClass::M)
                },
                (false, false) => PointInvariants {
                    beta: evaluate(ClosedForm::Beta4.cached(), [p, q, r])?,
                    delta: evaluate(ClosedForm::Delta4.cached(), [p, q, r])?,
                    alpha,
                    census_class: CensusClass::W4,
                },
                (p_is_two, _) => {
                    // Normalize so that the parameter equal to 2 is p.
                    let other = if p_is_two { q } else { p };
                    let at = [two, other, r];
                    PointInvariants {
                        beta: evaluate(ClosedForm::Beta4V.cached(), at)?,
                        delta: evaluate(ClosedForm::Delta4V.cached(), at)?,
                        alpha,
                        census_class: CensusClass::V4,
                    }
                }
            }
        }
    })
}

/// Coefficients of the kept curves in the pullback of the component, and the
/// resulting self-intersection drop.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaSolution {
    pub gamma: [Rational; 2],
    pub delta4: Rational,
}

fn finite_w4(p: u64, q: u64, r: u64) -> Result<[ExtNat; 3], CatalogError> {
    if p < 3 || q < 3 || r < 2 {
        return Err(CatalogError::InvalidParameters(format!(
            "need p, q >= 3 and r >= 2, got ({p},{q},{r})"
        )));
    }
    Ok([p.into(), q.into(), r.into()])
}

fn solve_gamma(m: [[Rational; 2]; 2], rhs: [Rational; 2], dots: [Rational; 2]) -> Result<GammaSolution, CatalogError> {
    let mat = RationalMatrix::from_rows(m.iter().map(|row| row.to_vec()).collect())?;
    let g = mat.solve(&rhs)?;
    let delta4 = &g[0] * &dots[0] + &g[1] * &dots[1];
    Ok(GammaSolution {
        gamma: [g[0].clone(), g[1].clone()],
        delta4,
    })
}

/// Solves for the pullback of the component onto the two kept curves using
/// their intersection numbers.
pub fn gamma_system_t4(p: u64, q: u64, r: u64) -> Result<GammaSolution, CatalogError> {
    let at = finite_w4(p, q, r)?;
    let e = |f: ClosedForm| evaluate(f.cached(), at);
    let (ee, bb, eb) = (e(ClosedForm::KeptSqP)?, e(ClosedForm::KeptSqQ)?, e(ClosedForm::KeptPair)?);
    let (ce, cb) = (e(ClosedForm::BranchDotP)?, e(ClosedForm::BranchDotQ)?);
    solve_gamma([[ee, eb.clone()], [eb, bb]], [-ce.clone(), -cb.clone()], [ce, cb])
}

/// Same system with the integer coefficients `-2(pr + p - 4)` and
/// `-2(qr + q - 4)` on the diagonal. These coefficients do not agree with
/// the intersection numbers; kept to document the discrepancy.
pub fn gamma_system_t4_printed(p: u64, q: u64, r: u64) -> Result<GammaSolution, CatalogError> {
    finite_w4(p, q, r)?;
    let (p, q, r) = (p as i64, q as i64, r as i64);
    let k = int(4 * (r - 1));
    solve_gamma(
        [
            [int(-2 * (p * r + p - 4)), int(p - 2)],
            [int(q - 2), int(-2 * (q * r + q - 4))],
        ],
        [-k.clone(), -k],
        [rat(1, p - 2), rat(1, q - 2)],
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    const INF: ExtNat = ExtNat::Infinity;
    fn f(n: u64) -> ExtNat {
        ExtNat::Finite(n)
    }

    #[test]
    fn alpha_values() {
        assert_eq!(alpha3(f(1), f(1)).unwrap(), rat(5, 3));
        assert_eq!(alpha3(INF, INF).unwrap(), int(1));
        assert_eq!(alpha3(f(2), INF).unwrap(), rat(4, 3));
        assert_eq!(alpha4(f(3), f(3), f(3)).unwrap(), rat(2, 3));
        assert_eq!(alpha4(f(2), f(2), f(2)).unwrap(), int(1));
        assert_eq!(alpha4(f(2), f(3), f(3)).unwrap(), rat(11, 13));
        assert_eq!(alpha4(INF, INF, INF).unwrap(), int(0));
        // r / (rq - 1) when p is infinite.
        assert_eq!(alpha4(INF, f(3), f(5)).unwrap(), rat(5, 14));
        assert!(alpha4(f(1), f(3), f(3)).is_err());
    }

    #[test]
    fn alpha4_limit_order_invariant() {
        let f4 = ClosedForm::Alpha4.build();
        let orders = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        for params in [[INF, INF, INF], [INF, f(3), INF], [f(4), INF, INF], [INF, f(2), f(7)]] {
            let first = evaluate_in_order(&f4, params, orders[0]).unwrap();
            for o in orders {
                assert_eq!(evaluate_in_order(&f4, params, o).unwrap(), first, "{params:?} {o:?}");
            }
        }
    }

    #[test]
    fn invariant_identities() {
        for (p, q) in [(1, 1), (1, 4), (3, 2), (5, 7)] {
            let pi = point_invariants(SingularityType::DegCusp3 { p: f(p), q: f(q) }, None).unwrap();
            assert_eq!(pi.beta - pi.delta + int(2), pi.alpha);
        }
        let pi = point_invariants(SingularityType::DegCusp4 { p: f(2), q: f(3), r: f(3) }, None).unwrap();
        assert_eq!(pi.census_class, CensusClass::V4);
        assert_eq!(pi.delta, rat(81, 104));
        assert_eq!(pi.beta, rat(5, 8));
        assert_eq!(pi.alpha, rat(11, 13));
        let swapped = point_invariants(SingularityType::DegCusp4 { p: f(3), q: f(2), r: f(3) }, None).unwrap();
        assert_eq!(swapped, pi);
        let m = point_invariants(SingularityType::DegCusp4 { p: f(2), q: f(2), r: f(5) }, None).unwrap();
        assert_eq!((m.beta, m.delta, m.alpha, m.census_class), (int(0), int(0), int(1), CensusClass::M));
    }

    #[test]
    fn gamma_systems() {
        let g = gamma_system_t4(3, 3, 3).unwrap();
        assert_eq!(g.gamma, [rat(2, 3), rat(2, 3)]);
        assert_eq!(g.delta4, rat(4, 3));
        assert_eq!(gamma_system_t4(4, 3, 2).unwrap().delta4, rat(31, 34));
        // Hand solution of -16 g1 + g2 = -8, g1 - 16 g2 = -8.
        let printed = gamma_system_t4_printed(3, 3, 3).unwrap();
        assert_eq!(printed.gamma, [rat(8, 15), rat(8, 15)]);
        assert_eq!(printed.delta4, rat(16, 15));
        assert!(gamma_system_t4(2, 3, 3).is_err());
    }

    #[test]
    fn gamma_matches_integer_rows() {
        // Rows scaled by 4(r-1)(p-2): -(2pr - p - 2) g1 + (p - 2) g2 = -4(r - 1).
        for (p, q, r) in [(3, 3, 3), (4, 3, 2), (5, 7, 4), (3, 8, 6)] {
            let (pi, qi, ri) = (p as i64, q as i64, r as i64);
            let m = RationalMatrix::from_rows(vec![
                vec![int(-(2 * pi * ri - pi - 2)), int(pi - 2)],
                vec![int(qi - 2), int(-(2 * qi * ri - qi - 2))],
            ])
            .unwrap();
            let k = int(-4 * (ri - 1));
            let g = m.solve(&[k.clone(), k]).unwrap();
            let s = gamma_system_t4(p, q, r).unwrap();
            assert_eq!(s.gamma.to_vec(), g);
            let closed = point_invariants(SingularityType::DegCusp4 { p: f(p), q: f(q), r: f(r) }, None).unwrap();
            assert_eq!(s.delta4, closed.delta);
        }
    }

    #[test]
    fn symmetric_gamma_is_two_over_p() {
        for p in 3..9 {
            for r in 2..7 {
                assert_eq!(gamma_system_t4(p, p, r).unwrap().gamma, [rat(2, p as i64), rat(2, p as i64)]);
            }
        }
    }

    #[test]
    fn infinite_limits() {
        let e = |cf: ClosedForm, at| evaluate(&cf.build(), at).unwrap();
        assert_eq!(e(ClosedForm::KeptSqP, [f(5), f(3), INF]), rat(-5, 6));
        assert_eq!(e(ClosedForm::KeptSqP, [INF, INF, INF]), rat(-1, 2));
        assert_eq!(e(ClosedForm::Delta4, [f(3), f(4), INF]), rat(2, 3) + rat(2, 8));
        assert_eq!(e(ClosedForm::Delta3, [f(2), INF, f(1)]), rat(1, 6));
        assert!(matches!(
            evaluate(&ClosedForm::Beta4.build(), [f(2), f(3), f(3)]),
            Err(CatalogError::Arith(_))
        ));
    }
}
