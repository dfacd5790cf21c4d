//! A surface germ along a proper curve: components of the double curve, the
//! singular points on them, and the dual graphs that fix `C~^2` and `K.C`.

mod degree;
mod verdict;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::catalog::{effective_type, CatalogError, ComponentRole, SingularityType};
use crate::graph::{Cluster, DualGraph, GraphError};
use crate::hj::CyclicQuotient;
use crate::Rational;

pub use degree::{
    census, ctilde_sq, degree_l, degree_l_proof_path, degree_reports, genus_bookkeeping, k_dot_c,
    torsion_report, Census, Convention, DegreeReport, GenusRecord,
};
pub use verdict::{verdict, Verdict, VerdictKind};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GermError {
    #[error("unknown component `{0}`")]
    UnknownComponent(String),
    #[error("unknown graph `{0}`")]
    UnknownGraph(String),
    #[error("component `{0}` has no graph")]
    RequiresGraph(String),
    #[error("no local graph for {0}")]
    OracleUnavailable(String),
    #[error("point `{point}`: {source}")]
    Point { point: String, source: CatalogError },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
}

/// How `C~^2` of a component is known.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Normalization {
    Asserted(Rational),
    /// Reduced sum of retained curves of a graph.
    FromGraph { graph: String, divisor: Vec<String> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GermComponent {
    pub id: String,
    pub genus: u32,
    pub normalization: Normalization,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointIncidence {
    pub id: String,
    pub kind: SingularityType,
    pub incidences: Vec<(String, Option<ComponentRole>)>,
    /// Branches of the singular curve through the point on each listed
    /// component; 2 makes the preimage nodal there.
    pub branches: u8,
}

impl PointIncidence {
    pub fn role_on(&self, component: &str) -> Option<Option<ComponentRole>> {
        self.incidences.iter().find(|(c, _)| c == component).map(|(_, r)| *r)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Assumptions {
    /// Vanishing of the second cohomology of the tangent sheaf.
    pub h2_tangent_vanishes: bool,
    /// The germ is a modification of an isolated singularity.
    pub modification: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GermDescription {
    pub name: String,
    pub assumptions: Assumptions,
    pub components: Vec<GermComponent>,
    pub graphs: BTreeMap<String, DualGraph>,
    pub points: Vec<PointIncidence>,
    /// Expected `C~^2` values, checked against the normalization data.
    pub selfint_checks: BTreeMap<String, Rational>,
}

impl GermDescription {
    pub fn component(&self, id: &str) -> Result<&GermComponent, GermError> {
        self.components
            .iter()
            .find(|c| c.id == id)
            .ok_or_else(|| GermError::UnknownComponent(id.into()))
    }

    /// Component ids in sorted order.
    pub fn component_ids(&self) -> Vec<String> {
        let mut ids: Vec<String> = self.components.iter().map(|c| c.id.clone()).collect();
        ids.sort();
        ids
    }

    /// Points lying on the component, sorted by id, with their role there.
    pub fn points_on(&self, component: &str) -> Vec<(&PointIncidence, Option<ComponentRole>)> {
        let mut v: Vec<_> = self
            .points
            .iter()
            .filter_map(|p| p.role_on(component).map(|r| (p, r)))
            .collect();
        v.sort_by(|a, b| a.0.id.cmp(&b.0.id));
        v
    }

    /// Graph and divisor of a graph-backed component.
    pub fn graph_of(&self, component: &str) -> Result<(&DualGraph, &[String]), GermError> {
        match &self.component(component)?.normalization {
            Normalization::FromGraph { graph, divisor } => {
                let g = self.graphs.get(graph).ok_or_else(|| GermError::UnknownGraph(graph.clone()))?;
                Ok((g, divisor))
            }
            Normalization::Asserted(_) => Err(GermError::RequiresGraph(component.into())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum DiagnosticKind {
    DuplicateId,
    DanglingReference,
    IllegalIncidence,
    InvalidParameters,
    NotRetained,
    NotNegativeDefinite,
    SelfIntersectionMismatch,
    UnusedCluster,
    HigherGenus,
}

impl DiagnosticKind {
    pub fn token(&self) -> &'static str {
        match self {
            DiagnosticKind::DuplicateId => "duplicate_id",
            DiagnosticKind::DanglingReference => "dangling_reference",
            DiagnosticKind::IllegalIncidence => "illegal_incidence",
            DiagnosticKind::InvalidParameters => "invalid_parameters",
            DiagnosticKind::NotRetained => "not_retained",
            DiagnosticKind::NotNegativeDefinite => "not_negative_definite",
            DiagnosticKind::SelfIntersectionMismatch => "selfint_mismatch",
            DiagnosticKind::UnusedCluster => "unused_cluster",
            DiagnosticKind::HigherGenus => "higher_genus",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub kind: DiagnosticKind,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{sev}[{}]: {}", self.kind.token(), self.message)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Diagnostics(pub Vec<Diagnostic>);

impl Diagnostics {
    fn error(&mut self, kind: DiagnosticKind, message: String) {
        self.0.push(Diagnostic {
            severity: Severity::Error,
            kind,
            message,
        });
    }

    fn warn(&mut self, kind: DiagnosticKind, message: String) {
        self.0.push(Diagnostic {
            severity: Severity::Warning,
            kind,
            message,
        });
    }

    pub fn errors(&self) -> impl Iterator<Item = &Diagnostic> {
        self.0.iter().filter(|d| d.severity == Severity::Error)
    }

    pub fn is_ok(&self) -> bool {
        self.errors().next().is_none()
    }

    pub fn has(&self, kind: DiagnosticKind) -> bool {
        self.0.iter().any(|d| d.kind == kind)
    }
}

/// Structural checks. Problems are collected, never thrown.
pub fn validate(g: &GermDescription) -> Diagnostics {
    use DiagnosticKind::*;
    let mut d = Diagnostics::default();

    let mut seen = BTreeSet::new();
    for id in g.components.iter().map(|c| &c.id).chain(g.points.iter().map(|p| &p.id)) {
        if !seen.insert(id.as_str()) {
            d.error(DuplicateId, format!("`{id}` is declared twice"));
        }
    }

    for (gid, graph) in &g.graphs {
        for cl in graph.exceptional_clusters() {
            if !graph.is_negative_definite(cl.ids()).unwrap_or(false) {
                d.error(
                    NotNegativeDefinite,
                    format!("graph `{gid}`: cluster {{{}}} is not negative definite", cl.ids().join(",")),
                );
            }
        }
    }

    // Clusters met by some component, per graph.
    let mut used: BTreeMap<&str, BTreeSet<String>> = BTreeMap::new();
    for c in &g.components {
        if c.genus > 0 {
            d.warn(HigherGenus, format!("component `{}` has genus {}; verdicts need rational components", c.id, c.genus));
        }
        let Normalization::FromGraph { graph, divisor } = &c.normalization else {
            continue;
        };
        let Some(gr) = g.graphs.get(graph) else {
            d.error(DanglingReference, format!("component `{}` refers to missing graph `{graph}`", c.id));
            continue;
        };
        for cid in divisor {
            match gr.curve(cid) {
                None => d.error(DanglingReference, format!("component `{}`: graph `{graph}` has no curve `{cid}`", c.id)),
                Some(curve) if !curve.retained => {
                    d.error(NotRetained, format!("component `{}`: curve `{cid}` is not retained", c.id))
                }
                Some(_) => {}
            }
        }
        for cl in gr.exceptional_clusters() {
            let meets = cl
                .ids()
                .iter()
                .any(|e| divisor.iter().any(|cid| gr.intersection(cid, e).is_ok_and(|m| m != 0)));
            if meets {
                used.entry(graph.as_str()).or_default().insert(cl.ids()[0].clone());
            }
        }
    }
    for (gid, graph) in &g.graphs {
        for cl in graph.exceptional_clusters() {
            if !used.get(gid.as_str()).is_some_and(|s| s.contains(&cl.ids()[0])) {
                d.warn(
                    UnusedCluster,
                    format!("graph `{gid}`: cluster {{{}}} meets no component", cl.ids().join(",")),
                );
            }
        }
    }

    let components: BTreeSet<&str> = g.components.iter().map(|c| c.id.as_str()).collect();
    for p in &g.points {
        if let Err(e) = p.kind.validate() {
            d.error(InvalidParameters, format!("point `{}`: {e}", p.id));
            continue;
        }
        if p.incidences.is_empty() {
            d.error(IllegalIncidence, format!("point `{}` lies on no component", p.id));
        }
        let mut on = BTreeSet::new();
        for (cid, role) in &p.incidences {
            if !components.contains(cid.as_str()) {
                d.error(DanglingReference, format!("point `{}` lies on unknown component `{cid}`", p.id));
            }
            if !on.insert(cid.as_str()) {
                d.error(IllegalIncidence, format!("point `{}` lists component `{cid}` twice", p.id));
            }
            if let Err(e) = effective_type(p.kind, *role) {
                d.error(IllegalIncidence, format!("point `{}` on `{cid}`: {e}", p.id));
            }
        }
        if !(1..=2).contains(&p.branches) {
            d.error(IllegalIncidence, format!("point `{}`: branches must be 1 or 2", p.id));
            continue;
        }
        let listed = p.incidences.len() * p.branches as usize;
        let expected = p.kind.singular_locus_branches();
        if !p.incidences.is_empty() && listed != expected {
            d.error(
                IllegalIncidence,
                format!("point `{}` ({}) has {expected} branches of the double curve, {listed} listed", p.id, p.kind),
            );
        }
    }

    for (cid, want) in &g.selfint_checks {
        if !components.contains(cid.as_str()) {
            d.error(DanglingReference, format!("selfint check on unknown component `{cid}`"));
            continue;
        }
        // Graph problems are already reported above.
        if let Ok(have) = ctilde_sq(g, cid) {
            if &have != want {
                d.error(
                    SelfIntersectionMismatch,
                    format!(
                        "component `{cid}`: C~^2 = {} but {} was stated",
                        crate::render(&have),
                        crate::render(want)
                    ),
                );
            }
        }
    }
    d
}

/// A contracted chain of a graph with its quotient type, read from the first
/// retained neighbour (in id order) that meets one end.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterType {
    pub curves: Vec<String>,
    pub anchor: String,
    pub quotient: CyclicQuotient,
}

/// Quotient types of the chain clusters of a graph. Clusters that are not
/// chains, or that no retained curve anchors, are skipped.
pub fn cluster_types(graph: &DualGraph) -> Vec<ClusterType> {
    let mut retained: Vec<&str> = graph.curves().iter().filter(|c| c.retained).map(|c| c.id.as_str()).collect();
    retained.sort();
    let mut out = Vec::new();
    for cl in graph.exceptional_clusters() {
        if let Some(ct) = anchored(graph, &cl, &retained) {
            out.push(ct);
        }
    }
    out
}

fn anchored(graph: &DualGraph, cl: &Cluster, retained: &[&str]) -> Option<ClusterType> {
    retained.iter().find_map(|a| {
        graph.cluster_quotient_type(cl, a).ok().map(|quotient| ClusterType {
            curves: cl.ids().to_vec(),
            anchor: a.to_string(),
            quotient,
        })
    })
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::int;

    #[test]
    fn examples_validate() {
        for g in [example1(), example2()] {
            let d = validate(&g);
            assert!(d.0.is_empty(), "{:?}", d);
        }
    }

    #[test]
    fn overcounted_branches() {
        let mut g = example2();
        g.components.push(GermComponent {
            id: "D".into(),
            genus: 0,
            normalization: Normalization::Asserted(int(-1)),
        });
        g.points[0].incidences.push(("D".into(), None));
        g.points[0].branches = 2;
        let d = validate(&g);
        assert!(d.has(DiagnosticKind::IllegalIncidence));
        assert!(!d.is_ok());
    }

    #[test]
    fn dangling_graph() {
        let mut g = example1();
        g.graphs.clear();
        assert!(validate(&g).has(DiagnosticKind::DanglingReference));
    }

    #[test]
    fn divisor_must_be_retained() {
        let mut g = example1();
        g.components[0].normalization = Normalization::FromGraph {
            graph: "N".into(),
            divisor: vec!["G".into(), "a".into()],
        };
        assert!(validate(&g).has(DiagnosticKind::NotRetained));
    }

    #[test]
    fn selfint_check() {
        let mut g = example1();
        g.selfint_checks.insert("C".into(), int(-3));
        assert!(validate(&g).is_ok());
        g.selfint_checks.insert("C".into(), int(-2));
        assert!(validate(&g).has(DiagnosticKind::SelfIntersectionMismatch));
    }

    #[test]
    fn example2_cluster_types() {
        let g = example2();
        let types: Vec<String> = cluster_types(&g.graphs["N"])
            .iter()
            .map(|c| format!("{}@{}", c.quotient, c.anchor))
            .collect();
        assert_eq!(types, ["1/9(1,4)@C2", "1/3(1,1)@C1", "1/9(1,5)@C1"]);
    }

    #[test]
    fn cusp4_roles_and_branches() {
        use crate::catalog::ExtNat;
        let t = SingularityType::DegCusp4 {
            p: ExtNat::Finite(3),
            q: ExtNat::Finite(3),
            r: ExtNat::Infinity,
        };
        let mut g = asserted(-1, vec![point("Q", t, &["C"])]);
        // Two branches and no role.
        assert!(validate(&g).has(DiagnosticKind::IllegalIncidence));
        g.points[0].branches = 2;
        g.points[0].incidences[0].1 = Some(ComponentRole::PQInf);
        assert!(validate(&g).is_ok(), "{:?}", validate(&g));
    }
}
