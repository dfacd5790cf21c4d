//! Extended dual graphs of the preimage of the singular curve near a point,
//! and the local invariants they determine.

use std::collections::BTreeMap;

use super::{effective_type, CatalogError, ComponentRole, ExtNat, SingularityType};
use crate::arith::{int, rat};
use crate::graph::{divisor_of, DualGraph};
use crate::hj::{hj_expand, CyclicQuotient};
use crate::Rational;

/// The component's own preimage.
pub const BRANCH: &str = "C'";

/// Which closed-form family a kept curve is measured against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum KeptSide {
    P,
    Q,
}

/// Local graph around one point.
///
/// Retained curves carry self-intersection `-1` as a placeholder: no local
/// invariant depends on it.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolutionGraph {
    pub shape: &'static str,
    pub graph: DualGraph,
    /// Vertices over the component carrying the point. Empty when the
    /// description does not single it out.
    pub branches: Vec<String>,
    /// Curves left uncontracted on the normalized blow-up.
    pub kept: Vec<(String, KeptSide)>,
    /// Explicit values of squared kept curves, keyed by curve id.
    pub stated: BTreeMap<String, Rational>,
    pub notes: Vec<String>,
}

impl ResolutionGraph {
    fn new(shape: &'static str) -> Self {
        ResolutionGraph {
            shape,
            graph: DualGraph::new(),
            branches: Vec::new(),
            kept: Vec::new(),
            stated: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    fn retained(&mut self, id: &str) {
        self.graph.add_curve(id, -1, true).expect("builder ids are unique");
    }

    fn curve(&mut self, id: &str, s: i64) {
        self.graph.add_curve(id, s, false).expect("builder ids are unique");
    }

    fn edge(&mut self, a: &str, b: &str) {
        self.graph.add_edge(a, b).expect("builder ids are known");
    }

    /// Adds curves in order and links them into a path starting at `from`.
    /// Returns the last id, or `from` when `ids` is empty.
    fn path(&mut self, from: &str, ids: &[(String, i64)]) -> String {
        let mut prev = from.to_string();
        for (id, s) in ids {
            self.curve(id, *s);
            self.edge(&prev, id);
            prev = id.clone();
        }
        prev
    }
}

fn twos(prefix: &str, range: impl Iterator<Item = u64>) -> Vec<(String, i64)> {
    range.map(|i| (format!("{prefix}{i}"), -2)).collect()
}

/// Middle chain `[3, 2^(r-3), 3]`, or `[4]` when `r = 2`.
fn middle(r: u64, first: &str, inner: &str, last: &str) -> Vec<(String, i64)> {
    if r == 2 {
        return vec![(first.to_string(), -4)];
    }
    let mut v = vec![(first.to_string(), -3)];
    v.extend(twos(inner, 1..=r - 3));
    v.push((last.to_string(), -3));
    v
}


/// Local graph of the component through a point of the given type.
pub fn resolution_graph(t: SingularityType, role: Option<ComponentRole>) -> Result<ResolutionGraph, CatalogError> {
    let t = effective_type(t, role)?;
    use ExtNat::{Finite, Infinity};
    Ok(match t {
        SingularityType::NormalCrossing | SingularityType::Pinch => {
            let mut g = ResolutionGraph::new("smooth");
            g.retained(BRANCH);
            g.branches.push(BRANCH.into());
            g
        }
        SingularityType::Slt(q) => slt_graph(q),
        SingularityType::DegCusp1 => {
            let mut g = ResolutionGraph::new("nodal");
            g.retained(BRANCH);
            g.branches.push(BRANCH.into());
            g.notes.push("two transversal branches through a smooth point".into());
            g
        }
        SingularityType::DegCusp2 { n: Finite(n) } => {
            let mut g = ResolutionGraph::new("a_chain_cycle");
            g.retained(BRANCH);
            g.branches.push(BRANCH.into());
            let end = g.path(BRANCH, &twos("A", 1..n));
            g.edge(&end, BRANCH);
            g
        }
        SingularityType::DegCusp2 { n: Infinity } => {
            let mut g = ResolutionGraph::new("normal_crossing");
            g.retained(BRANCH);
            g.branches.push(BRANCH.into());
            g.notes.push("branches meet at a normal crossing point, separated on the normalization".into());
            g
        }
        SingularityType::DegCusp3 { p, q } => t3_graph(p, q),
        SingularityType::DegCusp4 { p, q, r } => match (p, q, r) {
            (Finite(p), Finite(q), Finite(r)) => t4_finite(p, q, r),
            (Finite(p), Finite(q), Infinity) => t4_r_infinite(p, q),
            (Finite(p), Infinity, Finite(r)) => t4_q_infinite(p, r),
            (Finite(p), Infinity, Infinity) => t4_qr_infinite(p),
            (Infinity, Infinity, Finite(r)) => t4_pq_infinite(r),
            _ => {
                let mut g = ResolutionGraph::new("t4_all_infinite");
                g.stated.insert("E1".into(), rat(-1, 2));
                g.stated.insert("E2".into(), rat(-1, 2));
                g.notes.push("normalization smooth; no graph is described".into());
                g
            }
        },
    })
}

fn slt_graph(q: CyclicQuotient) -> ResolutionGraph {
    let mut g = ResolutionGraph::new("two_cyclic_points");
    g.retained(BRANCH);
    g.branches.push(BRANCH.into());
    let conj = CyclicQuotient::new(q.n(), q.n() - q.a()).expect("n - a is coprime to n");
    for (prefix, qq) in [("E", q), ("G", conj)] {
        let chain: Vec<(String, i64)> = hj_expand(qq)
            .into_iter()
            .enumerate()
            .map(|(i, b)| (format!("{prefix}{}", i + 1), -(b as i64)))
            .collect();
        g.path(BRANCH, &chain);
    }
    g
}

fn t3_graph(p: ExtNat, q: ExtNat) -> ResolutionGraph {
    use ExtNat::{Finite, Infinity};
    match (p, q) {
        (Finite(p), Finite(q)) => {
            let mut g = ResolutionGraph::new("t3_cycle");
            g.retained(BRANCH);
            g.branches.push(BRANCH.into());
            let a = g.path(BRANCH, &twos("A", 1..p));
            g.curve("F", -3);
            g.edge(&a, "F");
            let b = g.path(BRANCH, &twos("B", 1..q));
            g.edge(&b, "F");
            g.kept.push(("F".into(), KeptSide::P));
            g
        }
        (Finite(k), Infinity) | (Infinity, Finite(k)) => {
            let mut g = ResolutionGraph::new("t3_one_infinite");
            g.retained(BRANCH);
            g.retained("C1'");
            g.branches.push(BRANCH.into());
            let a = g.path(BRANCH, &twos("A", 1..k));
            g.curve("F", -2);
            g.edge(&a, "F");
            g.edge("F", "C1'");
            g.kept.push(("F".into(), KeptSide::P));
            g.stated.insert("F".into(), int(-1) - rat(1, k as i64));
            g
        }
        (Infinity, Infinity) => {
            let mut g = ResolutionGraph::new("t3_all_infinite");
            g.retained(BRANCH);
            g.retained("C1'");
            g.retained("C2'");
            g.branches.push(BRANCH.into());
            g.curve("F", -1);
            g.edge("F", "C1'");
            g.edge("F", "C2'");
            g.kept.push(("F".into(), KeptSide::P));
            g.stated.insert("F".into(), int(-1));
            g
        }
    }
}

/// `C' - E_{p-2} .. E_1 - middle - B_1 .. B_{q-2} - C'`.
fn t4_finite(p: u64, q: u64, r: u64) -> ResolutionGraph {
    let mut g = ResolutionGraph::new(if r == 2 { "t4_chain_r2" } else { "t4_chain" });
    g.retained(BRANCH);
    g.branches.push(BRANCH.into());
    let e: Vec<(String, i64)> = twos("E", (1..=p.saturating_sub(2)).rev()).into_iter().collect();
    let end = g.path(BRANCH, &e);
    let mid = g.path(&end, &middle(r, if r == 2 { "F" } else { "F1" }, "D", "F2"));
    let b = twos("B", 1..=q.saturating_sub(2));
    let last = g.path(&mid, &b);
    g.edge(&last, BRANCH);
    if p >= 3 {
        g.kept.push(("E1".into(), KeptSide::P));
    }
    if q >= 3 {
        g.kept.push(("B1".into(), KeptSide::Q));
    }
    g
}

/// `C' - E_{p-2} .. E_1 - F1 - C1' - F2 - B_1 .. B_{q-2} - C'`.
fn t4_r_infinite(p: u64, q: u64) -> ResolutionGraph {
    let mut g = ResolutionGraph::new("t4_r_infinite");
    g.retained(BRANCH);
    g.retained("C1'");
    g.branches.push(BRANCH.into());
    let e = twos("E", (1..=p - 2).rev());
    let end = g.path(BRANCH, &e);
    g.path(&end, &[("F1".into(), -2)]);
    g.edge("F1", "C1'");
    g.path("C1'", &[("F2".into(), -2)]);
    let last = g.path("F2", &twos("B", 1..=q - 2));
    g.edge(&last, BRANCH);
    if p >= 3 {
        g.kept.push(("E1".into(), KeptSide::P));
        g.stated.insert("E1".into(), rat(-(p as i64), 2 * (p as i64 - 2)));
    }
    if q >= 3 {
        g.kept.push(("B1".into(), KeptSide::Q));
        g.stated.insert("B1".into(), rat(-(q as i64), 2 * (q as i64 - 2)));
    }
    g
}

fn middle_end(r: u64) -> Rational {
    let r = r as i64;
    rat(2 * r - 3, 4 * r - 4)
}

/// `C1' - B_{p-2} .. B_1 - middle - F1(-1) - C2' - C1'` on the normalized
/// blow-up. The component is not singled out.
fn t4_q_infinite(p: u64, r: u64) -> ResolutionGraph {
    let mut g = ResolutionGraph::new("t4_q_infinite");
    g.retained("C1'");
    g.retained("C2'");
    let b = g.path("C1'", &twos("B", (1..=p - 2).rev()));
    let mid = g.path(&b, &middle(r, "F", "E", &format!("E{}", r.saturating_sub(2))));
    g.path(&mid, &[("F1".into(), -1)]);
    g.edge("F1", "C2'");
    g.edge("C2'", "C1'");
    if p >= 3 {
        g.kept.push(("B1".into(), KeptSide::P));
        g.stated
            .insert("B1".into(), int(-1) - rat(1, p as i64 - 2) + middle_end(r));
    }
    g.kept.push(("F1".into(), KeptSide::Q));
    g.stated.insert("F1".into(), int(-1) + middle_end(r));
    g
}

/// `C1' - E_{p-2} .. E_1 - F - C2' - F1 - B(-1) - C3' - C1'`, seen from the
/// first or second component.
fn t4_qr_infinite(p: u64) -> ResolutionGraph {
    let mut g = ResolutionGraph::new("t4_qr_infinite");
    for c in ["C1'", "C2'", "C3'"] {
        g.retained(c);
    }
    let e = g.path("C1'", &twos("E", (1..=p - 2).rev()));
    g.path(&e, &[("F".into(), -2)]);
    g.edge("F", "C2'");
    g.path("C2'", &[("F1".into(), -2), ("B".into(), -1)]);
    g.edge("B", "C3'");
    g.edge("C3'", "C1'");
    if p >= 3 {
        g.kept.push(("E1".into(), KeptSide::P));
        g.stated.insert("E1".into(), rat(-(p as i64), 2 * (p as i64 - 2)));
    }
    g.kept.push(("B".into(), KeptSide::Q));
    g.stated.insert("B".into(), rat(-1, 2));
    g
}

/// `C1' - B1(-1) - middle - B2(-1) - C2' - C3' - C1'`, seen from the third
/// component; the finite parameter sits in the `r` slot.
fn t4_pq_infinite(r: u64) -> ResolutionGraph {
    let mut g = ResolutionGraph::new("t4_pq_infinite");
    for c in ["C1'", "C2'", "C3'"] {
        g.retained(c);
    }
    g.path("C1'", &[("B1".into(), -1)]);
    let first = if r == 2 { "F".to_string() } else { format!("E{}", r - 2) };
    let mid = g.path("B1", &middle(r, &first, "E", "F"));
    g.path(&mid, &[("B2".into(), -1)]);
    g.edge("B2", "C2'");
    g.edge("C2'", "C3'");
    g.edge("C3'", "C1'");
    let v = int(-1) + middle_end(r);
    g.kept.push(("B1".into(), KeptSide::P));
    g.kept.push(("B2".into(), KeptSide::Q));
    g.stated.insert("B1".into(), v.clone());
    g.stated.insert("B2".into(), v);
    g
}

/// Intersection numbers on the normalized blow-up and on the normalization,
/// read off the graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphInvariants {
    pub kept_sq: BTreeMap<String, Rational>,
    /// Only present with two kept curves.
    pub kept_pair: Option<Rational>,
    /// Empty when the component is not singled out.
    pub branch_dot_kept: BTreeMap<String, Rational>,
    pub beta: Option<Rational>,
    pub delta: Option<Rational>,
}

pub fn local_invariants(rg: &ResolutionGraph) -> Result<GraphInvariants, CatalogError> {
    let g = &rg.graph;
    let kept: Vec<&str> = rg.kept.iter().map(|(id, _)| id.as_str()).collect();
    let exceptional: Vec<&str> = g.curves().iter().filter(|c| !c.retained).map(|c| c.id.as_str()).collect();
    let hat_ids: Vec<&str> = exceptional.iter().copied().filter(|id| !kept.contains(id)).collect();
    let hat = g.clusters_of(&hat_ids)?;
    let tilde = g.clusters_of(&exceptional)?;

    let mut kept_sq = BTreeMap::new();
    for id in &kept {
        kept_sq.insert(id.to_string(), g.self_intersection_contracted(&divisor_of(&[id]), &hat)?);
    }
    let kept_pair = match kept.as_slice() {
        [a, b] => Some(g.pair_intersection_contracted(&divisor_of(&[a]), &divisor_of(&[b]), &hat)?),
        _ => None,
    };
    let mut branch_dot_kept = BTreeMap::new();
    let (mut beta, mut delta) = (None, None);
    if !rg.branches.is_empty() {
        let c = divisor_of(&rg.branches);
        for id in &kept {
            branch_dot_kept.insert(id.to_string(), g.pair_intersection_contracted(&c, &divisor_of(&[id]), &hat)?);
        }
        let f = divisor_of(&kept);
        let fsq = if kept.is_empty() { int(0) } else { g.self_intersection_contracted(&f, &hat)? };
        let cf = if kept.is_empty() { int(0) } else { g.pair_intersection_contracted(&c, &f, &hat)? };
        beta = Some(fsq + int(2) * cf);
        delta = Some(g.self_intersection_contracted(&c, &tilde)? - g.self_intersection_contracted(&c, &hat)?);
    }
    Ok(GraphInvariants {
        kept_sq,
        kept_pair,
        branch_dot_kept,
        beta,
        delta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::point_invariants;

    const INF: ExtNat = ExtNat::Infinity;
    fn f(n: u64) -> ExtNat {
        ExtNat::Finite(n)
    }

    fn inv(t: SingularityType, role: Option<ComponentRole>) -> GraphInvariants {
        local_invariants(&resolution_graph(t, role).unwrap()).unwrap()
    }

    #[test]
    fn t3_finite_by_hand() {
        // p = q = 1: C' meets F(-3) twice, nothing contracted on the blow-up.
        let i = inv(SingularityType::DegCusp3 { p: f(1), q: f(1) }, None);
        assert_eq!(i.kept_sq["F"], int(-3));
        assert_eq!(i.branch_dot_kept["F"], int(2));
        assert_eq!(i.beta, Some(int(1)));
        assert_eq!(i.delta, Some(rat(4, 3)));
        let j = inv(SingularityType::DegCusp3 { p: f(2), q: f(3) }, None);
        assert_eq!(j.kept_sq["F"], int(-1) - rat(1, 2) - rat(1, 3));
    }

    #[test]
    fn t4_333_by_hand() {
        let i = inv(SingularityType::DegCusp4 { p: f(3), q: f(3), r: f(3) }, None);
        assert_eq!(i.kept_sq["E1"], rat(-13, 8));
        assert_eq!(i.kept_sq["B1"], rat(-13, 8));
        assert_eq!(i.kept_pair, Some(rat(1, 8)));
        assert_eq!(i.branch_dot_kept["E1"], int(1));
        assert_eq!(i.delta, Some(rat(4, 3)));
    }

    #[test]
    fn cycle_self_intersection() {
        // Sum of squares plus twice the length minus 2 recovers the cycle square.
        for (t, expect) in [
            (SingularityType::DegCusp4 { p: f(4), q: f(3), r: f(5) }, -4),
            (SingularityType::DegCusp4 { p: f(5), q: f(2), r: f(2) }, -4),
            (SingularityType::DegCusp3 { p: f(3), q: f(2) }, -3),
            (SingularityType::DegCusp2 { n: f(4) }, -2),
        ] {
            let g = resolution_graph(t, None).unwrap().graph;
            let ex: Vec<_> = g.curves().iter().filter(|c| !c.retained).collect();
            let s: i64 = ex.iter().map(|c| c.self_intersection).sum();
            assert_eq!(s + 2 * ex.len() as i64 - 2, expect, "{t}");
        }
    }

    #[test]
    fn one_infinite_t3_matches_limits() {
        let t = SingularityType::DegCusp3 { p: f(3), q: INF };
        let i = inv(t, None);
        let c = point_invariants(t, None).unwrap();
        assert_eq!(i.beta, Some(c.beta));
        assert_eq!(i.delta, Some(c.delta));
        assert_eq!(i.kept_sq["F"], rat(-4, 3));
    }

    #[test]
    fn infinite_t4_graphs_reproduce_stated() {
        let cases = [
            (SingularityType::DegCusp4 { p: f(4), q: f(5), r: INF }, None),
            (SingularityType::DegCusp4 { p: f(4), q: INF, r: f(3) }, Some(ComponentRole::PInfR)),
            (SingularityType::DegCusp4 { p: f(5), q: INF, r: f(2) }, Some(ComponentRole::PInfR)),
            (SingularityType::DegCusp4 { p: f(4), q: INF, r: INF }, Some(ComponentRole::PInfInf)),
            (SingularityType::DegCusp4 { p: f(6), q: INF, r: INF }, Some(ComponentRole::InfInfR)),
        ];
        for (t, role) in cases {
            let role = role.or(Some(ComponentRole::PQInf));
            let rg = resolution_graph(t, role).unwrap();
            let i = local_invariants(&rg).unwrap();
            for (id, v) in &rg.stated {
                assert_eq!(&i.kept_sq[id], v, "{t} {id}");
            }
        }
    }

    #[test]
    fn slt_graph_chains() {
        let rg = resolution_graph(SingularityType::slt(9, 5).unwrap(), None).unwrap();
        assert_eq!(rg.graph.curve("E2").unwrap().self_intersection, -5);
        // Conjugate side 9/4 = [3, 2, 2, 2].
        assert_eq!(rg.graph.curve("G1").unwrap().self_intersection, -3);
        assert_eq!(rg.graph.exceptional_clusters().len(), 2);
    }
}
