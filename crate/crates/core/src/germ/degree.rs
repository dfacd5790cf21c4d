//! Degree of the line bundle part of the deformation sheaf on a component,
//! by the closed formula and by summing local graph contributions.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use super::{GermDescription, GermError, Normalization};
use crate::catalog::{
    local_invariants, point_invariants, resolution_graph, torsion_profile, CensusClass, SingularityType,
};
use crate::graph::divisor_of;
use crate::{int, Rational};

/// Which value of the `T3` contribution enters the degree.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Convention {
    /// `alpha3 = 1 + (p + q) / (pq + p + q)`.
    #[default]
    Theorem,
    /// `alpha3 - 1`, as used in the worked example.
    Example,
}

impl Convention {
    pub fn token(&self) -> &'static str {
        match self {
            Convention::Theorem => "theorem",
            Convention::Example => "example",
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for Convention {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "theorem" => Ok(Convention::Theorem),
            "example" => Ok(Convention::Example),
            _ => Err(format!("unknown convention `{s}`")),
        }
    }
}

/// Point counts on one component, by class.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Census {
    pub nc: usize,
    pub pinch: usize,
    pub c1: usize,
    pub c2: usize,
    pub slt: usize,
    pub u3: usize,
    pub w4: usize,
    pub v4: usize,
    /// `T4` points with `p = q = 2`.
    pub m: usize,
}

impl Census {
    pub fn u4(&self) -> usize {
        self.w4 + self.v4 + self.m
    }

    fn add(&mut self, class: CensusClass) {
        let slot = match class {
            CensusClass::NormalCrossing => &mut self.nc,
            CensusClass::Pinch => &mut self.pinch,
            CensusClass::C1 => &mut self.c1,
            CensusClass::C2 => &mut self.c2,
            CensusClass::Slt => &mut self.slt,
            CensusClass::U3 => &mut self.u3,
            CensusClass::W4 => &mut self.w4,
            CensusClass::V4 => &mut self.v4,
            CensusClass::M => &mut self.m,
        };
        *slot += 1;
    }
}

fn point_err(point: &str) -> impl Fn(crate::catalog::CatalogError) -> GermError + '_ {
    move |source| GermError::Point {
        point: point.to_string(),
        source,
    }
}

pub fn census(g: &GermDescription, component: &str) -> Result<Census, GermError> {
    g.component(component)?;
    let mut c = Census::default();
    for (p, role) in g.points_on(component) {
        c.add(point_invariants(p.kind, role).map_err(point_err(&p.id))?.census_class);
    }
    Ok(c)
}

/// Self-intersection of the preimage of the component on the normalization.
pub fn ctilde_sq(g: &GermDescription, component: &str) -> Result<Rational, GermError> {
    match &g.component(component)?.normalization {
        Normalization::Asserted(v) => Ok(v.clone()),
        Normalization::FromGraph { .. } => {
            let (graph, divisor) = g.graph_of(component)?;
            Ok(graph.self_intersection_contracted(&divisor_of(divisor), &graph.exceptional_clusters())?)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeReport {
    pub component: String,
    pub ctilde_sq: Rational,
    pub census: Census,
    /// Sum of the `T3` and `T4` contributions, theorem convention.
    pub alpha_sum: Rational,
    pub degree_theorem: Rational,
    pub degree_example_convention: Rational,
    /// `None` when some point has no local graph.
    pub degree_proof_path: Option<Rational>,
    /// Points contributing a skyscraper summand, sorted by id.
    pub torsion_summands: Vec<String>,
}

impl DegreeReport {
    pub fn degree(&self, convention: Convention) -> &Rational {
        match convention {
            Convention::Theorem => &self.degree_theorem,
            Convention::Example => &self.degree_example_convention,
        }
    }

    /// The two conventions differ, which happens exactly with `T3` points.
    pub fn conventions_differ(&self) -> bool {
        self.census.u3 > 0
    }
}

pub fn degree_l(g: &GermDescription, component: &str) -> Result<DegreeReport, GermError> {
    let ctilde_sq = ctilde_sq(g, component)?;
    let mut census = Census::default();
    let mut alpha_sum = int(0);
    for (p, role) in g.points_on(component) {
        let inv = point_invariants(p.kind, role).map_err(point_err(&p.id))?;
        census.add(inv.census_class);
        if matches!(inv.census_class, CensusClass::U3 | CensusClass::W4 | CensusClass::V4 | CensusClass::M) {
            alpha_sum += inv.alpha;
        }
    }
    let base = &ctilde_sq + int((census.pinch + 2 * census.c1 + 2 * census.c2) as i64);
    let degree_theorem = &base + &alpha_sum;
    let degree_example_convention = &degree_theorem - int(census.u3 as i64);
    let degree_proof_path = match degree_l_proof_path(g, component) {
        Ok(d) => Some(d),
        Err(GermError::OracleUnavailable(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(DegreeReport {
        component: component.to_string(),
        ctilde_sq,
        census,
        alpha_sum,
        degree_theorem,
        degree_example_convention,
        degree_proof_path,
        torsion_summands: torsion_report(g, component)?,
    })
}

/// Reports for every component, in id order.
pub fn degree_reports(g: &GermDescription) -> Result<Vec<DegreeReport>, GermError> {
    g.component_ids().par_iter().map(|c| degree_l(g, c)).collect()
}

/// The degree assembled from local graphs: `C^2` on the normalized blow-up
/// is `C~^2` minus the drops at the cusps, the kept curves add back their
/// gains, and each class adds its integer constant.
pub fn degree_l_proof_path(g: &GermDescription, component: &str) -> Result<Rational, GermError> {
    let mut chat_sq = ctilde_sq(g, component)?;
    let mut gains = int(0);
    let mut k = 0i64;
    for (p, role) in g.points_on(component) {
        let class = point_invariants(p.kind, role).map_err(point_err(&p.id))?.census_class;
        k += match class {
            CensusClass::NormalCrossing | CensusClass::Slt => 0,
            CensusClass::Pinch => 1,
            CensusClass::C1 | CensusClass::C2 | CensusClass::U3 => 2,
            CensusClass::W4 | CensusClass::V4 | CensusClass::M => 1,
        };
        if !matches!(p.kind, SingularityType::DegCusp3 { .. } | SingularityType::DegCusp4 { .. }) {
            continue;
        }
        let rg = resolution_graph(p.kind, role).map_err(point_err(&p.id))?;
        let inv = local_invariants(&rg).map_err(point_err(&p.id))?;
        match (inv.beta, inv.delta) {
            (Some(beta), Some(delta)) => {
                gains += beta;
                chat_sq -= delta;
            }
            _ => return Err(GermError::OracleUnavailable(format!("point `{}` ({})", p.id, p.kind))),
        }
    }
    Ok(chat_sq + gains + int(k))
}

/// `T4` points on the component, sorted by id.
pub fn torsion_report(g: &GermDescription, component: &str) -> Result<Vec<String>, GermError> {
    g.component(component)?;
    Ok(g.points_on(component)
        .into_iter()
        .filter(|(p, _)| torsion_profile(p.kind).restriction_torsion)
        .map(|(p, _)| p.id.clone())
        .collect())
}

/// Arithmetic genus of the preimage of the component in the normalization,
/// a double cover ramified at pinch points with nodes over some cusps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenusRecord {
    pub pa_c: u32,
    /// `2 p_a(C') - 2`.
    pub euler: i64,
    /// `None` when `euler` is odd, which no census can produce.
    pub pa_cprime: Option<i64>,
    pub ram_smooth: usize,
    pub nodes: usize,
}

pub fn genus_bookkeeping(g: &GermDescription, component: &str) -> Result<GenusRecord, GermError> {
    let pa_c = g.component(component)?.genus;
    let c = census(g, component)?;
    let nodes = c.c1 + c.c2 + c.m;
    let euler = 2 * (2 * pa_c as i64 - 2) + c.pinch as i64 + 2 * nodes as i64;
    Ok(GenusRecord {
        pa_c,
        euler,
        pa_cprime: (euler % 2 == 0).then_some(euler / 2 + 1),
        ram_smooth: c.pinch,
        nodes,
    })
}

/// `K_H . C` by subadjunction: half of `(K + C~) . C~` on the normalization,
/// the half being the degree of `C~ -> C`.
pub fn k_dot_c(g: &GermDescription, component: &str) -> Result<Rational, GermError> {
    let (graph, divisor) = g.graph_of(component)?;
    let d = divisor_of(divisor);
    let cl = graph.exceptional_clusters();
    let k = graph.canonical_intersection_contracted(&d, &cl)?;
    let c2 = graph.self_intersection_contracted(&d, &cl)?;
    Ok((k + c2) / int(2))
}
