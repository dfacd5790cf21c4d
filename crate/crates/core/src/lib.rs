//! Exact invariants of Q-Gorenstein deformations of nonnormal surface germs
//! along a proper curve.
//!
//! The pipeline runs bottom up: [`arith`] supplies exact linear algebra and
//! limits, [`hj`] handles cyclic quotient chains, [`graph`] contracts clusters
//! of curves on a dual graph, [`catalog`] knows the local singularity types and
//! their invariants, [`germ`] assembles a whole germ into degrees and a
//! smoothability verdict, and [`cli`] reads and writes germ files.

pub mod arith;
pub mod catalog;
pub mod cli;
pub mod germ;
pub mod graph;
pub mod hj;

/// Arbitrary-precision rational; the scalar used throughout.
pub type Rational = num_rational::BigRational;
pub type RationalMatrix = arith::Matrix<Rational>;
pub type UnivariatePoly = arith::Poly<Rational>;
pub type ExtRational = arith::Extended<Rational>;
pub type RationalFunction = arith::RatFn<Rational>;

pub use arith::{int, rat, render};
pub use catalog::{ComponentRole, ExtNat, SingularityType};
pub use germ::GermDescription;

pub use graph::{Cluster, DualGraph};
pub use hj::CyclicQuotient;
