//! Local catalog of the singularities a nonnormal surface with a
//! Q-Gorenstein smoothing can have along its singular curve: normal
//! crossings, pinch points, semi-log-terminal points and degenerate cusps.

mod closed;
mod forms;
mod oracle;
mod resolution;

use std::fmt;
use std::str::FromStr;

pub use closed::{
    alpha3, alpha4, evaluate, evaluate_in_order, gamma_system_t4, gamma_system_t4_printed, point_invariants,
    CensusClass, ClosedForm, GammaSolution, PointInvariants,
};
pub use forms::{
    mult_embdim, normal_form, smoothing_target, t1_presentation, torsion_profile, NormalForm, SmoothingTarget,
    T1Presentation, TorsionProfile,
};
pub use oracle::{sweep, verify_point_invariants, Check, OracleReport, SweepBounds, SweepReport};
pub use resolution::{local_invariants, resolution_graph, GraphInvariants, KeptSide, ResolutionGraph};

use crate::arith::ArithError;
use crate::graph::GraphError;
use crate::hj::{CyclicQuotient, HjError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CatalogError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("outside the catalog: {0}")]
    OutOfCatalog(String),
    #[error("a component role is required for {0}")]
    RoleRequired(String),
    #[error("role {role} is not legal for {kind}")]
    IllegalRole { role: String, kind: String },
    #[error("slt points have no hypersurface presentation")]
    SltNotPresentable,
    #[error("closed form diverges at {0}")]
    Divergent(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Hj(#[from] HjError),
}

/// Natural number or infinity. Infinite exponents make the monomial vanish.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtNat {
    Finite(u64),
    Infinity,
}

impl ExtNat {
    pub fn finite(self) -> Option<u64> {
        match self {
            ExtNat::Finite(n) => Some(n),
            ExtNat::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == ExtNat::Infinity
    }
}

impl fmt::Display for ExtNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtNat::Finite(n) => write!(f, "{n}"),
            ExtNat::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for ExtNat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "inf" | "infinity" => Ok(ExtNat::Infinity),
            _ => s
                .parse::<u64>()
                .map(ExtNat::Finite)
                .map_err(|_| format!("expected a natural number or `inf`, got `{s}`")),
        }
    }
}

impl From<u64> for ExtNat {
    fn from(n: u64) -> Self {
        ExtNat::Finite(n)
    }
}

/// Analytic type of a point of the nonnormal surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SingularityType {
    NormalCrossing,
    Pinch,
    /// `(xy = 0) / Z_n(a, -a, 1)`.
    Slt(CyclicQuotient),
    /// Degenerate cusp with cycle self-intersection `-1`.
    DegCusp1,
    /// Degenerate cusp with cycle self-intersection `-2`, `2 <= n <= inf`.
    DegCusp2 { n: ExtNat },
    /// `1 <= p, q <= inf`.
    DegCusp3 { p: ExtNat, q: ExtNat },
    /// `2 <= p, q, r <= inf`.
    DegCusp4 { p: ExtNat, q: ExtNat, r: ExtNat },
}

fn at_least(name: &str, v: ExtNat, min: u64) -> Result<(), CatalogError> {
    match v {
        ExtNat::Finite(n) if n < min => Err(CatalogError::InvalidParameters(format!("{name}={n} is below {min}"))),
        _ => Ok(()),
    }
}

impl SingularityType {
    pub fn slt(n: u64, a: u64) -> Result<Self, CatalogError> {
        Ok(SingularityType::Slt(CyclicQuotient::new(n, a)?))
    }

    /// Checks parameter ranges.
    pub fn validate(&self) -> Result<(), CatalogError> {
        match *self {
            SingularityType::DegCusp2 { n } => at_least("n", n, 2),
            SingularityType::DegCusp3 { p, q } => {
                at_least("p", p, 1)?;
                at_least("q", q, 1)
            }
            SingularityType::DegCusp4 { p, q, r } => {
                at_least("p", p, 2)?;
                at_least("q", q, 2)?;
                at_least("r", r, 2)
            }
            _ => Ok(()),
        }
    }

    pub fn keyword(&self) -> &'static str {
        match self {
            SingularityType::NormalCrossing => "nc",
            SingularityType::Pinch => "pinch",
            SingularityType::Slt(_) => "slt",
            SingularityType::DegCusp1 => "cusp1",
            SingularityType::DegCusp2 { .. } => "cusp2",
            SingularityType::DegCusp3 { .. } => "cusp3",
            SingularityType::DegCusp4 { .. } => "cusp4",
        }
    }

    /// Self-intersection of the cycle of a degenerate cusp.
    pub fn gamma_sq(&self) -> Option<i64> {
        match self {
            SingularityType::DegCusp1 => Some(-1),
            SingularityType::DegCusp2 { .. } => Some(-2),
            SingularityType::DegCusp3 { .. } => Some(-3),
            SingularityType::DegCusp4 { .. } => Some(-4),
            _ => None,
        }
    }

    pub fn infinite_count(&self) -> usize {
        let params: &[ExtNat] = match self {
            SingularityType::DegCusp2 { n } => &[*n],
            SingularityType::DegCusp3 { p, q } => &[*p, *q],
            SingularityType::DegCusp4 { p, q, r } => &[*p, *q, *r],
            _ => &[],
        };
        params.iter().filter(|v| v.is_infinite()).count()
    }

    /// Number of smooth branches of the singular curve through the point.
    pub fn singular_locus_branches(&self) -> usize {
        match self {
            SingularityType::DegCusp2 { .. } | SingularityType::DegCusp3 { .. } | SingularityType::DegCusp4 { .. } => {
                1 + self.infinite_count()
            }
            _ => 1,
        }
    }
}

impl fmt::Display for SingularityType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())?;
        match self {
            SingularityType::Slt(q) => write!(f, " n={} a={}", q.n(), q.a()),
            SingularityType::DegCusp2 { n } => write!(f, " n={n}"),
            SingularityType::DegCusp3 { p, q } => write!(f, " p={p} q={q}"),
            SingularityType::DegCusp4 { p, q, r } => write!(f, " p={p} q={q} r={r}"),
            _ => Ok(()),
        }
    }
}

/// Which component of the singular curve a `T4` point with infinite
/// parameters is seen from. Each role fixes where the infinite parameters sit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ComponentRole {
    /// Effective parameters `(p, q, inf)`.
    PQInf,
    /// Effective parameters `(p, inf, r)`.
    PInfR,
    /// Effective parameters `(p, inf, inf)`.
    PInfInf,
    /// Effective parameters `(inf, inf, r)`.
    InfInfR,
    /// Effective parameters `(inf, inf, inf)`.
    InfInfInf,
}

impl ComponentRole {
    pub const ALL: [ComponentRole; 5] = [
        ComponentRole::PQInf,
        ComponentRole::PInfR,
        ComponentRole::PInfInf,
        ComponentRole::InfInfR,
        ComponentRole::InfInfInf,
    ];

    pub fn token(&self) -> &'static str {
        match self {
            ComponentRole::PQInf => "pq_inf",
            ComponentRole::PInfR => "p_inf_r",
            ComponentRole::PInfInf => "p_inf_inf",
            ComponentRole::InfInfR => "inf_inf_r",
            ComponentRole::InfInfInf => "inf_inf_inf",
        }
    }

    pub fn infinite_count(&self) -> usize {
        match self {
            ComponentRole::PQInf | ComponentRole::PInfR => 1,
            ComponentRole::PInfInf | ComponentRole::InfInfR => 2,
            ComponentRole::InfInfInf => 3,
        }
    }
}

impl fmt::Display for ComponentRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for ComponentRole {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|r| r.token() == s)
            .ok_or_else(|| format!("unknown role `{s}`"))
    }
}

/// Parameters of a `T4` point as seen from one component.
///
/// Finite parameters keep their relative order and infinite ones move to the
/// slots the role dictates. Without infinite parameters no role is allowed.
pub fn effective_t4(
    p: ExtNat,
    q: ExtNat,
    r: ExtNat,
    role: Option<ComponentRole>,
) -> Result<(ExtNat, ExtNat, ExtNat), CatalogError> {
    let t = SingularityType::DegCusp4 { p, q, r };
    let finite: Vec<ExtNat> = [p, q, r].into_iter().filter(|v| !v.is_infinite()).collect();
    let k = 3 - finite.len();
    let illegal = |role: ComponentRole| CatalogError::IllegalRole {
        role: role.token().into(),
        kind: t.to_string(),
    };
    match (k, role) {
        (0, None) => Ok((p, q, r)),
        (0, Some(role)) => Err(illegal(role)),
        (_, None) => Err(CatalogError::RoleRequired(t.to_string())),
        (k, Some(role)) if role.infinite_count() != k => Err(illegal(role)),
        (_, Some(role)) => {
            let inf = ExtNat::Infinity;
            Ok(match role {
                ComponentRole::PQInf => (finite[0], finite[1], inf),
                ComponentRole::PInfR => (finite[0], inf, finite[1]),
                ComponentRole::PInfInf => (finite[0], inf, inf),
                ComponentRole::InfInfR => (inf, inf, finite[0]),
                ComponentRole::InfInfInf => (inf, inf, inf),
            })
        }
    }
}

/// Applies [`effective_t4`] to `T4` points; other types must come without a role.
pub fn effective_type(t: SingularityType, role: Option<ComponentRole>) -> Result<SingularityType, CatalogError> {
    t.validate()?;
    match t {
        SingularityType::DegCusp4 { p, q, r } => {
            let (p, q, r) = effective_t4(p, q, r, role)?;
            Ok(SingularityType::DegCusp4 { p, q, r })
        }
        _ => match role {
            None => Ok(t),
            Some(role) => Err(CatalogError::IllegalRole {
                role: role.token().into(),
                kind: t.to_string(),
            }),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const INF: ExtNat = ExtNat::Infinity;
    fn f(n: u64) -> ExtNat {
        ExtNat::Finite(n)
    }

    #[test]
    fn ext_nat_parse() {
        assert_eq!("inf".parse::<ExtNat>(), Ok(INF));
        assert_eq!("7".parse::<ExtNat>(), Ok(f(7)));
        assert!("-1".parse::<ExtNat>().is_err());
        assert_eq!(INF.to_string(), "inf");
    }

    #[test]
    fn branches_count_infinities() {
        assert_eq!(SingularityType::DegCusp3 { p: INF, q: INF }.singular_locus_branches(), 3);
        assert_eq!(SingularityType::DegCusp4 { p: f(2), q: INF, r: f(5) }.singular_locus_branches(), 2);
        assert_eq!(SingularityType::DegCusp2 { n: INF }.singular_locus_branches(), 2);
        assert_eq!(SingularityType::DegCusp2 { n: f(3) }.singular_locus_branches(), 1);
        assert_eq!(SingularityType::Pinch.singular_locus_branches(), 1);
    }

    #[test]
    fn parameter_ranges() {
        assert!(SingularityType::DegCusp4 { p: f(1), q: f(3), r: f(3) }.validate().is_err());
        assert!(SingularityType::DegCusp3 { p: f(0), q: f(3) }.validate().is_err());
        assert!(SingularityType::DegCusp2 { n: f(1) }.validate().is_err());
        assert!(SingularityType::DegCusp3 { p: f(1), q: INF }.validate().is_ok());
        assert!(SingularityType::slt(6, 3).is_err());
    }

    #[test]
    fn roles_place_infinities() {
        assert_eq!(effective_t4(f(3), f(4), f(5), None).unwrap(), (f(3), f(4), f(5)));
        assert_eq!(
            effective_t4(INF, f(3), f(5), Some(ComponentRole::PQInf)).unwrap(),
            (f(3), f(5), INF)
        );
        assert_eq!(
            effective_t4(f(4), INF, INF, Some(ComponentRole::InfInfR)).unwrap(),
            (INF, INF, f(4))
        );
        assert!(matches!(effective_t4(f(4), INF, f(3), None), Err(CatalogError::RoleRequired(_))));
        assert!(matches!(
            effective_t4(f(4), INF, f(3), Some(ComponentRole::PInfInf)),
            Err(CatalogError::IllegalRole { .. })
        ));
        assert!(matches!(
            effective_t4(f(4), f(3), f(3), Some(ComponentRole::PQInf)),
            Err(CatalogError::IllegalRole { .. })
        ));
        assert!(matches!(
            effective_type(SingularityType::Pinch, Some(ComponentRole::PQInf)),
            Err(CatalogError::IllegalRole { .. })
        ));
    }

    #[test]
    fn role_tokens_roundtrip() {
        for r in ComponentRole::ALL {
            assert_eq!(r.token().parse::<ComponentRole>(), Ok(r));
        }
    }
}
