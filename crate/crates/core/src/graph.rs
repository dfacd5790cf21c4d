//! Weighted dual graphs of curves on a smooth surface, and intersection
//! numbers after contracting negative definite clusters.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::arith::{int, ArithError};
use crate::hj::{chain_to_type, CyclicQuotient, HjError};
use crate::{Rational, RationalMatrix};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("self-loop on `{0}` is not allowed")]
    SelfLoopForbidden(String),
    #[error("cluster is not negative definite")]
    NotNegativeDefinite,
    #[error("empty cluster")]
    EmptyCluster,
    #[error("cluster contains retained curve `{0}`")]
    ClusterContainsRetained(String),
    #[error("cluster is not connected")]
    DisconnectedCluster,
    #[error("clusters overlap at `{0}`")]
    OverlappingClusters(String),
    #[error("divisor has support `{0}` inside a contracted cluster")]
    DivisorOnCluster(String),
    #[error("curve `{0}` does not meet the cluster")]
    CurveMissesCluster(String),
    #[error("cluster is not a chain")]
    NotAChain,
    #[error("anchor `{0}` does not meet exactly one end of the chain once")]
    AmbiguousAnchor(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Hj(#[from] HjError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Curve {
    pub id: String,
    pub self_intersection: i64,
    pub genus: u32,
    /// Retained curves are never contracted.
    pub retained: bool,
}

/// Rational combination of curves, keyed by curve id.
pub type Divisor = BTreeMap<String, Rational>;

/// Reduced divisor with coefficient one on each listed curve.
pub fn divisor_of<S: AsRef<str>>(ids: &[S]) -> Divisor {
    let mut d = Divisor::new();
    for id in ids {
        *d.entry(id.as_ref().to_string()).or_insert_with(|| int(0)) += int(1);
    }
    d
}

/// Multigraph of curves. Edge multiplicity is the intersection number.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DualGraph {
    curves: Vec<Curve>,
    index: BTreeMap<String, usize>,
    edges: BTreeMap<(usize, usize), u32>,
}

/// A connected set of non-retained curves to be contracted to one point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cluster {
    ids: Vec<String>,
}

impl Cluster {
    pub fn new<S: AsRef<str>>(g: &DualGraph, ids: &[S]) -> Result<Self, GraphError> {
        if ids.is_empty() {
            return Err(GraphError::EmptyCluster);
        }
        let mut seen = BTreeSet::new();
        for id in ids {
            let id = id.as_ref();
            let i = g.idx(id)?;
            if g.curves[i].retained {
                return Err(GraphError::ClusterContainsRetained(id.into()));
            }
            if !seen.insert(i) {
                return Err(GraphError::DuplicateVertex(id.into()));
            }
        }
        if g.components(&seen).len() != 1 {
            return Err(GraphError::DisconnectedCluster);
        }
        Ok(Cluster {
            ids: ids.iter().map(|s| s.as_ref().to_string()).collect(),
        })
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }
}

impl DualGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_curve(&mut self, id: &str, self_intersection: i64, retained: bool) -> Result<(), GraphError> {
        self.add_curve_with_genus(id, self_intersection, 0, retained)
    }

    pub fn add_curve_with_genus(
        &mut self,
        id: &str,
        self_intersection: i64,
        genus: u32,
        retained: bool,
    ) -> Result<(), GraphError> {
        if self.index.contains_key(id) {
            return Err(GraphError::DuplicateVertex(id.into()));
        }
        self.index.insert(id.into(), self.curves.len());
        self.curves.push(Curve {
            id: id.into(),
            self_intersection,
            genus,
            retained,
        });
        Ok(())
    }

    /// Adds one transversal intersection point between two distinct curves.
    pub fn add_edge(&mut self, a: &str, b: &str) -> Result<(), GraphError> {
        self.add_edges(a, b, 1)
    }

    pub fn add_edges(&mut self, a: &str, b: &str, multiplicity: u32) -> Result<(), GraphError> {
        let (i, j) = (self.idx(a)?, self.idx(b)?);
        if i == j {
            return Err(GraphError::SelfLoopForbidden(a.into()));
        }
        if multiplicity > 0 {
            *self.edges.entry((i.min(j), i.max(j))).or_insert(0) += multiplicity;
        }
        Ok(())
    }

    fn idx(&self, id: &str) -> Result<usize, GraphError> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| GraphError::UnknownVertex(id.into()))
    }

    pub fn curves(&self) -> &[Curve] {
        &self.curves
    }

    pub fn curve(&self, id: &str) -> Option<&Curve> {
        self.index.get(id).map(|&i| &self.curves[i])
    }

    pub fn contains(&self, id: &str) -> bool {
        self.index.contains_key(id)
    }

    /// Edges as `(a, b, multiplicity)` with `a` declared before `b`.
    pub fn edges(&self) -> impl Iterator<Item = (&str, &str, u32)> + '_ {
        self.edges
            .iter()
            .map(|(&(i, j), &m)| (self.curves[i].id.as_str(), self.curves[j].id.as_str(), m))
    }

    fn int_idx(&self, i: usize, j: usize) -> i64 {
        if i == j {
            self.curves[i].self_intersection
        } else {
            self.edges.get(&(i.min(j), i.max(j))).map_or(0, |&m| m as i64)
        }
    }

    /// Intersection number of two curves on the smooth surface.
    pub fn intersection(&self, a: &str, b: &str) -> Result<i64, GraphError> {
        Ok(self.int_idx(self.idx(a)?, self.idx(b)?))
    }

    fn neighbors(&self, i: usize) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.edges.iter().filter_map(move |(&(a, b), &m)| {
            if a == i {
                Some((b, m))
            } else if b == i {
                Some((a, m))
            } else {
                None
            }
        })
    }

    /// Connected components of the induced subgraph, in declaration order.
    fn components(&self, set: &BTreeSet<usize>) -> Vec<Vec<usize>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for &start in set {
            if !seen.insert(start) {
                continue;
            }
            let mut comp = vec![start];
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for (w, _) in self.neighbors(v) {
                    if set.contains(&w) && seen.insert(w) {
                        comp.push(w);
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Connected components of the given curves, as clusters. All curves must
    /// be non-retained.
    pub fn clusters_of<S: AsRef<str>>(&self, ids: &[S]) -> Result<Vec<Cluster>, GraphError> {
        let mut set = BTreeSet::new();
        for id in ids {
            set.insert(self.idx(id.as_ref())?);
        }
        self.components(&set)
            .into_iter()
            .map(|c| {
                let ids: Vec<&str> = c.iter().map(|&i| self.curves[i].id.as_str()).collect();
                Cluster::new(self, &ids)
            })
            .collect()
    }

    /// Connected components of all non-retained curves.
    pub fn exceptional_clusters(&self) -> Vec<Cluster> {
        let ids: Vec<&str> = self
            .curves
            .iter()
            .filter(|c| !c.retained)
            .map(|c| c.id.as_str())
            .collect();
        self.clusters_of(&ids).expect("non-retained curves always form clusters")
    }

    pub fn intersection_matrix<S: AsRef<str>>(&self, ids: &[S]) -> Result<RationalMatrix, GraphError> {
        let idx: Vec<usize> = ids.iter().map(|s| self.idx(s.as_ref())).collect::<Result<_, _>>()?;
        let mut m = RationalMatrix::zeros(idx.len(), idx.len());
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                m.set(a, b, int(self.int_idx(i, j)));
            }
        }
        Ok(m)
    }

    pub fn is_negative_definite<S: AsRef<str>>(&self, ids: &[S]) -> Result<bool, GraphError> {
        Ok(self.intersection_matrix(ids)?.is_negative_definite())
    }

    fn union_of(&self, clusters: &[Cluster]) -> Result<Vec<usize>, GraphError> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for c in clusters {
            for id in &c.ids {
                let i = self.idx(id)?;
                if !seen.insert(i) {
                    return Err(GraphError::OverlappingClusters(id.clone()));
                }
                out.push(i);
            }
        }
        Ok(out)
    }

    fn dot_raw(&self, a: &Divisor, b: &Divisor) -> Result<Rational, GraphError> {
        let mut acc = int(0);
        for (u, x) in a {
            let i = self.idx(u)?;
            for (v, y) in b {
                let j = self.idx(v)?;
                acc += x * y * int(self.int_idx(i, j));
            }
        }
        Ok(acc)
    }

    fn dot_curve(&self, d: &Divisor, j: usize) -> Result<Rational, GraphError> {
        let mut acc = int(0);
        for (u, x) in d {
            acc += x * int(self.int_idx(self.idx(u)?, j));
        }
        Ok(acc)
    }

    /// Solves `sum_i x_i (E_i . E_j) = rhs_j` over the union of the clusters.
    fn solve_on(&self, union: &[usize], rhs: Vec<Rational>) -> Result<Vec<Rational>, GraphError> {
        let ids: Vec<&str> = union.iter().map(|&i| self.curves[i].id.as_str()).collect();
        let m = self.intersection_matrix(&ids)?;
        if !m.is_negative_definite() {
            return Err(GraphError::NotNegativeDefinite);
        }
        Ok(m.solve(&rhs)?)
    }

    /// Coefficients `g_i` such that `D + sum g_i E_i` is orthogonal to every
    /// curve in the clusters.
    pub fn pullback(&self, d: &Divisor, clusters: &[Cluster]) -> Result<Divisor, GraphError> {
        let union = self.union_of(clusters)?;
        for id in d.keys() {
            let i = self.idx(id)?;
            if union.contains(&i) {
                return Err(GraphError::DivisorOnCluster(id.clone()));
            }
        }
        let rhs = union
            .iter()
            .map(|&j| self.dot_curve(d, j).map(|x| -x))
            .collect::<Result<Vec<_>, _>>()?;
        let g = self.solve_on(&union, rhs)?;
        Ok(union
            .iter()
            .zip(g)
            .map(|(&i, x)| (self.curves[i].id.clone(), x))
            .collect())
    }

    /// `A . B` after contracting the clusters, computed as `A . (B + pullback)`.
    pub fn pair_intersection_contracted(
        &self,
        a: &Divisor,
        b: &Divisor,
        clusters: &[Cluster],
    ) -> Result<Rational, GraphError> {
        let g = self.pullback(b, clusters)?;
        Ok(self.dot_raw(a, b)? + self.dot_raw(a, &g)?)
    }

    pub fn self_intersection_contracted(&self, d: &Divisor, clusters: &[Cluster]) -> Result<Rational, GraphError> {
        self.pair_intersection_contracted(d, d, clusters)
    }

    fn k_dot_idx(&self, i: usize) -> Rational {
        let c = &self.curves[i];
        int(2 * c.genus as i64 - 2 - c.self_intersection)
    }

    /// Discrepancies of the clusters: `K = pullback(K_contracted) + sum d_i E_i`.
    pub fn discrepancies(&self, clusters: &[Cluster]) -> Result<Divisor, GraphError> {
        let union = self.union_of(clusters)?;
        let rhs = union.iter().map(|&j| self.k_dot_idx(j)).collect();
        let d = self.solve_on(&union, rhs)?;
        Ok(union
            .iter()
            .zip(d)
            .map(|(&i, x)| (self.curves[i].id.clone(), x))
            .collect())
    }

    /// `K . D` on the contracted surface: `K.D + sum g_i (K.E_i)`.
    pub fn canonical_intersection_contracted(&self, d: &Divisor, clusters: &[Cluster]) -> Result<Rational, GraphError> {
        let g = self.pullback(d, clusters)?;
        let mut acc = int(0);
        for (id, x) in d.iter().chain(g.iter()) {
            acc += x * self.k_dot_idx(self.idx(id)?);
        }
        Ok(acc)
    }

    /// Different of `curve` at the point where `cluster` contracts.
    pub fn different_at_cluster(&self, curve: &str, cluster: &Cluster) -> Result<Rational, GraphError> {
        let ci = self.idx(curve)?;
        let cs = std::slice::from_ref(cluster);
        let meets = cluster
            .ids
            .iter()
            .any(|e| self.idx(e).is_ok_and(|j| self.int_idx(ci, j) != 0));
        if !meets {
            return Err(GraphError::CurveMissesCluster(curve.into()));
        }
        let g = self.pullback(&divisor_of(&[curve]), cs)?;
        let d = self.discrepancies(cs)?;
        let mut acc = int(0);
        for (id, gi) in &g {
            acc += (gi - &d[id]) * int(self.int_idx(ci, self.idx(id)?));
        }
        Ok(acc)
    }

    /// Type of a chain cluster, read from the end met by `anchor`.
    pub fn cluster_quotient_type(&self, cluster: &Cluster, anchor: &str) -> Result<CyclicQuotient, GraphError> {
        let anchor_i = self.idx(anchor)?;
        let members: Vec<usize> = cluster.ids.iter().map(|s| self.idx(s)).collect::<Result<_, _>>()?;
        let set: BTreeSet<usize> = members.iter().copied().collect();
        let inner = |v: usize| -> Vec<(usize, u32)> { self.neighbors(v).filter(|(w, _)| set.contains(w)).collect() };
        let mut ends = Vec::new();
        for &v in &members {
            let nb = inner(v);
            if nb.len() > 2 || nb.iter().any(|&(_, m)| m > 1) {
                return Err(GraphError::NotAChain);
            }
            if nb.len() < 2 {
                ends.push(v);
            }
        }
        // A cycle has no ends.
        if ends.is_empty() {
            return Err(GraphError::NotAChain);
        }
        let touching: Vec<(usize, u32)> = self.neighbors(anchor_i).filter(|(w, _)| set.contains(w)).collect();
        let start = match touching.as_slice() {
            [(v, 1)] if ends.contains(v) => *v,
            _ => return Err(GraphError::AmbiguousAnchor(anchor.into())),
        };
        let mut order = vec![start];
        let mut prev = usize::MAX;
        let mut cur = start;
        while let Some((next, _)) = inner(cur).into_iter().find(|&(w, _)| w != prev) {
            (prev, cur) = (cur, next);
            order.push(cur);
        }
        let weights: Vec<i64> = order.iter().map(|&i| -self.curves[i].self_intersection).collect();
        Ok(chain_to_type(&weights)?)
    }

    /// Graphviz text. Retained curves are boxed, each intersection point is
    /// one edge line.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph dual {\n");
        for c in &self.curves {
            let shape = if c.retained { "box" } else { "ellipse" };
            let genus = if c.genus > 0 { format!(" g={}", c.genus) } else { String::new() };
            let _ = writeln!(
                s,
                "  \"{}\" [label=\"{} ({}){}\", shape={}];",
                c.id, c.id, c.self_intersection, genus, shape
            );
        }
        for (a, b, m) in self.edges() {
            for _ in 0..m {
                let _ = writeln!(s, "  \"{a}\" -- \"{b}\";");
            }
        }
        s.push_str("}\n");
        s
    }

    /// `anchor` (retained, given self-intersection) followed by the resolution
    /// chain of `q`, named `E1, E2, ...` from the anchor side.
    pub fn hj_chain(q: CyclicQuotient, anchor: &str, anchor_self: i64) -> Self {
        let mut g = DualGraph::new();
        g.add_curve(anchor, anchor_self, true).expect("fresh graph");
        let mut prev = anchor.to_string();
        for (k, b) in crate::hj::hj_expand(q).into_iter().enumerate() {
            let id = format!("E{}", k + 1);
            g.add_curve(&id, -(b as i64), false).expect("fresh id");
            g.add_edge(&prev, &id).expect("known ids");
            prev = id;
        }
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn chain(spec: &[(&str, i64, bool)]) -> DualGraph {
        let mut g = DualGraph::new();
        for &(id, s, r) in spec {
            g.add_curve(id, s, r).unwrap();
        }
        for w in spec.windows(2) {
            g.add_edge(w[0].0, w[1].0).unwrap();
        }
        g
    }

    #[test]
    fn pullback_on_a2_chain() {
        let g = chain(&[("C", -1, true), ("E1", -2, false), ("E2", -2, false)]);
        let cl = g.exceptional_clusters();
        let pb = g.pullback(&divisor_of(&["C"]), &cl).unwrap();
        assert_eq!(pb["E1"], rat(2, 3));
        assert_eq!(pb["E2"], rat(1, 3));
        assert_eq!(g.self_intersection_contracted(&divisor_of(&["C"]), &cl).unwrap(), rat(-1, 3));
    }

    #[test]
    fn different_values() {
        for (n, a, expect) in [(3, 1, rat(2, 3)), (2, 1, rat(1, 2)), (9, 5, rat(8, 9)), (9, 4, rat(8, 9))] {
            let g = DualGraph::hj_chain(CyclicQuotient::new(n, a).unwrap(), "C", -1);
            let cl = g.exceptional_clusters();
            assert_eq!(g.different_at_cluster("C", &cl[0]).unwrap(), expect, "{n} {a}");
        }
    }

    #[test]
    fn quotient_type_reads_from_anchor() {
        let g = chain(&[("C", -1, true), ("E1", -2, false), ("E2", -5, false), ("D", -1, true)]);
        let cl = g.exceptional_clusters();
        assert_eq!(g.cluster_quotient_type(&cl[0], "C").unwrap(), CyclicQuotient::new(9, 5).unwrap());
        assert_eq!(g.cluster_quotient_type(&cl[0], "D").unwrap(), CyclicQuotient::new(9, 2).unwrap());
    }

    #[test]
    fn quotient_type_errors() {
        let mut g = chain(&[("C", -1, true), ("E1", -2, false), ("E2", -2, false), ("E3", -2, false)]);
        let cl = g.exceptional_clusters();
        g.add_edge("C", "E2").unwrap();
        assert_eq!(
            g.cluster_quotient_type(&cl[0], "C"),
            Err(GraphError::AmbiguousAnchor("C".into()))
        );
        let mut star = chain(&[("C", -1, true), ("E1", -2, false)]);
        for id in ["A", "B", "D"] {
            star.add_curve(id, -2, false).unwrap();
            star.add_edge("E1", id).unwrap();
        }
        let cl = star.exceptional_clusters();
        assert_eq!(star.cluster_quotient_type(&cl[0], "C"), Err(GraphError::NotAChain));
    }

    #[test]
    fn structural_errors() {
        let mut g = chain(&[("C", -1, true), ("E", -2, false)]);
        assert_eq!(g.add_edge("E", "E"), Err(GraphError::SelfLoopForbidden("E".into())));
        assert_eq!(g.add_curve("E", -2, false), Err(GraphError::DuplicateVertex("E".into())));
        assert!(matches!(g.add_edge("E", "X"), Err(GraphError::UnknownVertex(_))));
        assert_eq!(Cluster::new(&g, &["C"]), Err(GraphError::ClusterContainsRetained("C".into())));
        let cl = g.exceptional_clusters();
        assert_eq!(
            g.pullback(&divisor_of(&["E"]), &cl),
            Err(GraphError::DivisorOnCluster("E".into()))
        );
        assert_eq!(
            g.pullback(&divisor_of(&["C"]), &[cl[0].clone(), cl[0].clone()]),
            Err(GraphError::OverlappingClusters("E".into()))
        );
    }

    #[test]
    fn not_negative_definite() {
        let g = chain(&[("C", -1, true), ("E1", -1, false), ("E2", -1, false)]);
        let cl = g.exceptional_clusters();
        assert_eq!(g.pullback(&divisor_of(&["C"]), &cl), Err(GraphError::NotNegativeDefinite));
    }

    #[test]
    fn canonical_intersection() {
        // K.C on contracting a (-3)-curve met by a (-1)-curve: -1 + 1/3.
        let g = chain(&[("C", -1, true), ("E", -3, false)]);
        let cl = g.exceptional_clusters();
        assert_eq!(
            g.canonical_intersection_contracted(&divisor_of(&["C"]), &cl).unwrap(),
            rat(-2, 3)
        );
        assert_eq!(g.discrepancies(&cl).unwrap()["E"], rat(-1, 3));
    }

    #[test]
    fn dot_lists_multi_edges() {
        let mut g = chain(&[("C", -1, true), ("F", -3, false)]);
        g.add_edge("C", "F").unwrap();
        let dot = g.to_dot();
        assert_eq!(dot.matches("\"C\" -- \"F\"").count(), 2);
        assert!(dot.contains("shape=box"));
    }
}
