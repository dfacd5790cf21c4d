use std::fmt;

use super::{effective_type, CatalogError, ComponentRole, ExtNat, SingularityType};
use crate::hj::CyclicQuotient;

/// Multiplicity and embedding dimension of a degenerate cusp.
pub fn mult_embdim(gamma_sq: i64) -> Result<(u32, u32), CatalogError> {
    if !(-4..=-1).contains(&gamma_sq) {
        return Err(CatalogError::OutOfCatalog(format!(
            "cycle self-intersection {gamma_sq} has embedding dimension above 4"
        )));
    }
    let g = (-gamma_sq) as u32;
    Ok((g.max(2), g.max(3)))
}

/// Monomial coefficient times variables with possibly infinite exponents.
/// An infinite exponent kills the whole term.
struct Term {
    coef: i64,
    vars: Vec<(&'static str, ExtNat)>,
}

fn term(coef: i64, vars: &[(&'static str, ExtNat)]) -> Term {
    Term {
        coef,
        vars: vars.to_vec(),
    }
}

fn one(v: &'static str) -> (&'static str, ExtNat) {
    (v, ExtNat::Finite(1))
}

fn render_poly(terms: &[Term]) -> String {
    let mut out = String::new();
    for t in terms {
        if t.coef == 0 || t.vars.iter().any(|(_, e)| e.is_infinite()) {
            continue;
        }
        let mono: String = t
            .vars
            .iter()
            .filter_map(|&(v, e)| match e {
                ExtNat::Finite(0) => None,
                ExtNat::Finite(1) => Some(v.to_string()),
                ExtNat::Finite(k) => Some(format!("{v}^{k}")),
                ExtNat::Infinity => unreachable!(),
            })
            .collect();
        let mag = t.coef.unsigned_abs();
        let body = match (mag, mono.is_empty()) {
            (_, true) => mag.to_string(),
            (1, false) => mono,
            (_, false) => format!("{mag}{mono}"),
        };
        match (out.is_empty(), t.coef < 0) {
            (true, false) => out.push_str(&body),
            (true, true) => out.push_str(&format!("-{body}")),
            (false, false) => out.push_str(&format!(" + {body}")),
            (false, true) => out.push_str(&format!(" - {body}")),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn dec(e: ExtNat, by: u64) -> ExtNat {
    match e {
        ExtNat::Finite(n) => ExtNat::Finite(n - by),
        ExtNat::Infinity => ExtNat::Infinity,
    }
}

fn inc(e: ExtNat, by: u64) -> ExtNat {
    match e {
        ExtNat::Finite(n) => ExtNat::Finite(n + by),
        ExtNat::Infinity => ExtNat::Infinity,
    }
}

/// Coefficient that is itself the exponent; irrelevant when the term dies.
fn coef_of(e: ExtNat) -> i64 {
    e.finite().map_or(1, |n| n as i64)
}

/// Local equations and the singular curve component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalForm {
    pub equations: Vec<String>,
    pub curve: String,
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let eqs: Vec<String> = self.equations.iter().map(|e| format!("{e} = 0")).collect();
        write!(f, "{} along {}", eqs.join(", "), self.curve)
    }
}

fn t4_polys(p: ExtNat, q: ExtNat, r: ExtNat) -> (Vec<Term>, Vec<Term>) {
    let f = vec![
        term(1, &[one("x"), one("y")]),
        term(-1, &[("z", p)]),
        term(-1, &[("t", q)]),
    ];
    let g = vec![term(1, &[one("z"), one("t")]), term(-1, &[("x", r)])];
    (f, g)
}

pub fn normal_form(t: SingularityType, role: Option<ComponentRole>) -> Result<NormalForm, CatalogError> {
    let t = effective_type(t, role)?;
    let nf = |eqs: Vec<String>, curve: &str| NormalForm {
        equations: eqs,
        curve: curve.into(),
    };
    Ok(match t {
        SingularityType::NormalCrossing => nf(vec!["xy".into()], "(x=y=0)"),
        SingularityType::Pinch => nf(
            vec![render_poly(&[term(1, &[("x", 2.into())]), term(-1, &[("y", 2.into()), one("z")])])],
            "(x=y=0)",
        ),
        SingularityType::Slt(q) => NormalForm {
            equations: vec![format!("xy / Z_{}({},-{},1)", q.n(), q.a(), q.a())],
            curve: "(x=y=0)".into(),
        },
        SingularityType::DegCusp1 => nf(
            vec![render_poly(&[
                term(1, &[("x", 2.into())]),
                term(-1, &[("y", 3.into())]),
                term(-1, &[("y", 2.into()), ("z", 2.into())]),
            ])],
            "(x=y=0)",
        ),
        SingularityType::DegCusp2 { n } => nf(
            vec![render_poly(&[
                term(1, &[("x", 2.into())]),
                term(1, &[("z", inc(n, 3))]),
                term(-1, &[("y", 2.into()), ("z", 2.into())]),
            ])],
            "(x=z=0)",
        ),
        SingularityType::DegCusp3 { p, q } => nf(
            vec![render_poly(&[
                term(1, &[("x", inc(p, 2))]),
                term(1, &[("y", inc(q, 2))]),
                term(-1, &[one("x"), one("y"), one("z")]),
            ])],
            "(x=y=0)",
        ),
        SingularityType::DegCusp4 { p, q, r } => {
            let (f, g) = t4_polys(p, q, r);
            let curve = match role {
                Some(ComponentRole::PInfInf | ComponentRole::InfInfR | ComponentRole::InfInfInf) => "(x=y=z=0)",
                _ => "(x=z=t=0)",
            };
            nf(vec![render_poly(&f), render_poly(&g)], curve)
        }
    })
}

/// Presentation of the first-order deformation module at the point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum T1Presentation {
    /// `C[x,y,z] / (generators)`.
    QuotientRing { generators: Vec<String> },
    /// `C[x,y,z,t]^2 / (relations)`.
    Cokernel { relations: Vec<(String, String)> },
}

impl fmt::Display for T1Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            T1Presentation::QuotientRing { generators } => write!(f, "C[x,y,z]/({})", generators.join(", ")),
            T1Presentation::Cokernel { relations } => {
                let rels: Vec<String> = relations.iter().map(|(a, b)| format!("({a}, {b})")).collect();
                write!(f, "C[x,y,z,t]^2/<{}>", rels.join(", "))
            }
        }
    }
}

pub fn t1_presentation(t: SingularityType) -> Result<T1Presentation, CatalogError> {
    t.validate()?;
    let ring = |gens: Vec<String>| T1Presentation::QuotientRing { generators: gens };
    let two = ExtNat::Finite(2);
    Ok(match t {
        SingularityType::Slt(_) => return Err(CatalogError::SltNotPresentable),
        SingularityType::NormalCrossing => ring(vec!["x".into(), "y".into()]),
        SingularityType::Pinch => ring(vec!["x".into(), "y^2".into(), "yz".into()]),
        // Index one hypersurface: the Jacobian quotient.
        SingularityType::DegCusp1 => ring(vec![
            render_poly(&[
                term(1, &[("x", two)]),
                term(-1, &[("y", 3.into())]),
                term(-1, &[("y", two), ("z", two)]),
            ]),
            "2x".into(),
            render_poly(&[term(-3, &[("y", two)]), term(-2, &[one("y"), ("z", two)])]),
            render_poly(&[term(-2, &[("y", two), one("z")])]),
        ]),
        SingularityType::DegCusp2 { n } => ring(vec![
            "x".into(),
            "yz^2".into(),
            render_poly(&[
                term(coef_of(inc(n, 3)), &[("z", inc(n, 2))]),
                term(-2, &[one("z"), ("y", two)]),
            ]),
        ]),
        SingularityType::DegCusp3 { p, q } if p.is_infinite() && q.is_infinite() => {
            ring(vec!["xy".into(), "xz".into(), "yz".into()])
        }
        // Partials of the normal form; the form itself lies in their ideal.
        SingularityType::DegCusp3 { p, q } => ring(vec![
            render_poly(&[term(coef_of(inc(p, 2)), &[("x", inc(p, 1))]), term(-1, &[one("y"), one("z")])]),
            render_poly(&[term(coef_of(inc(q, 2)), &[("y", inc(q, 1))]), term(-1, &[one("x"), one("z")])]),
            "xy".into(),
        ]),
        SingularityType::DegCusp4 { p, q, r } => {
            let (f, g) = t4_polys(p, q, r);
            let (f, g) = (render_poly(&f), render_poly(&g));
            let z = "0".to_string();
            let d = |terms: &[Term]| render_poly(terms);
            T1Presentation::Cokernel {
                relations: vec![
                    (f.clone(), z.clone()),
                    (z.clone(), f),
                    (g.clone(), z.clone()),
                    (z.clone(), g),
                    ("y".into(), d(&[term(-coef_of(r), &[("x", dec(r, 1))])])),
                    ("x".into(), z),
                    (d(&[term(-coef_of(p), &[("z", dec(p, 1))])]), "t".into()),
                    (d(&[term(-coef_of(q), &[("t", dec(q, 1))])]), "z".into()),
                ],
            }
        }
    })
}

/// Shape of the support of the first-order deformation module.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TorsionProfile {
    /// Embedded point of the support over the point.
    pub embedded_point: bool,
    /// Skyscraper summand after restricting to a component of the curve.
    pub restriction_torsion: bool,
}

pub fn torsion_profile(t: SingularityType) -> TorsionProfile {
    let embedded_point = match t {
        SingularityType::NormalCrossing | SingularityType::Slt(_) => false,
        SingularityType::Pinch | SingularityType::DegCusp1 | SingularityType::DegCusp2 { .. } => true,
        SingularityType::DegCusp3 { .. } | SingularityType::DegCusp4 { .. } => {
            let all = if matches!(t, SingularityType::DegCusp3 { .. }) { 2 } else { 3 };
            t.infinite_count() < all
        }
    };
    TorsionProfile {
        embedded_point,
        restriction_torsion: matches!(t, SingularityType::DegCusp4 { .. }),
    }
}

/// Singularity of the general fiber of a local smoothing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmoothingTarget {
    Smooth,
    /// The ordinary double point `xy - zt = 0`.
    Odp,
    /// The threefold quotient `C^3 / Z_n(a, -a, 1)`.
    CyclicQuotient3fold(CyclicQuotient),
}

impl fmt::Display for SmoothingTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SmoothingTarget::Smooth => f.write_str("smooth"),
            SmoothingTarget::Odp => f.write_str("odp"),
            SmoothingTarget::CyclicQuotient3fold(q) => write!(f, "1/{}({},-{},1)", q.n(), q.a(), q.a()),
        }
    }
}

pub fn smoothing_target(t: SingularityType) -> SmoothingTarget {
    match t {
        SingularityType::DegCusp4 { .. } => SmoothingTarget::Odp,
        SingularityType::Slt(q) => SmoothingTarget::CyclicQuotient3fold(q),
        _ => SmoothingTarget::Smooth,
    }
}
