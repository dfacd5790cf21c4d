//! Global smoothability from the component degrees.

use super::{degree_reports, k_dot_c, Convention, GermDescription, GermError};
use crate::catalog::{smoothing_target, SmoothingTarget};
use crate::{int, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VerdictKind {
    /// General fiber singularities of the smoothing, per point.
    GloballySmoothable { targets: Vec<(String, SmoothingTarget)> },
    /// First component (in id order) of negative degree.
    NotSmoothable { component: String, degree: Rational },
    /// Smoothable, and the smoothing contracts to an extremal neighborhood.
    ExtremalNeighborhood {
        targets: Vec<(String, SmoothingTarget)>,
        k_dot_c: Vec<(String, Rational)>,
    },
    /// Hypotheses that do not hold or were not asserted.
    Inconclusive { missing: Vec<String> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub convention: Convention,
    pub kind: VerdictKind,
}

impl VerdictKind {
    pub fn token(&self) -> &'static str {
        match self {
            VerdictKind::GloballySmoothable { .. } => "globally_smoothable",
            VerdictKind::NotSmoothable { .. } => "not_smoothable",
            VerdictKind::ExtremalNeighborhood { .. } => "extremal_neighborhood",
            VerdictKind::Inconclusive { .. } => "inconclusive",
        }
    }
}

pub fn verdict(g: &GermDescription, convention: Convention) -> Result<Verdict, GermError> {
    let done = |kind| Ok(Verdict { convention, kind });
    let mut missing = Vec::new();
    if !g.assumptions.h2_tangent_vanishes {
        missing.push("h2_tangent_vanishes".to_string());
    }
    let mut ids = g.component_ids();
    for id in &ids {
        if g.component(id)?.genus > 0 {
            missing.push(format!("rational:{id}"));
        }
    }
    if !missing.is_empty() {
        return done(VerdictKind::Inconclusive { missing });
    }

    for r in degree_reports(g)? {
        let d = r.degree(convention).clone();
        if d < int(0) {
            return done(VerdictKind::NotSmoothable {
                component: r.component,
                degree: d,
            });
        }
    }

    let mut points: Vec<_> = g.points.iter().collect();
    points.sort_by(|a, b| a.id.cmp(&b.id));
    let targets = points.iter().map(|p| (p.id.clone(), smoothing_target(p.kind))).collect();

    if g.assumptions.modification {
        let mut ks = Vec::new();
        for id in ids.drain(..) {
            match k_dot_c(g, &id) {
                Ok(k) => ks.push((id, k)),
                Err(GermError::RequiresGraph(_)) => return done(VerdictKind::GloballySmoothable { targets }),
                Err(e) => return Err(e),
            }
        }
        if ks.iter().all(|(_, k)| *k < int(0)) {
            return done(VerdictKind::ExtremalNeighborhood { targets, k_dot_c: ks });
        }
    }
    done(VerdictKind::GloballySmoothable { targets })
}
