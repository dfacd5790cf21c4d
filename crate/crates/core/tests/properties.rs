use num_traits::{One, Zero};
use proptest::prelude::*;
use qgdeform::arith::{solve_linear_system, Matrix};
use qgdeform::catalog::{point_invariants, ExtNat, SingularityType};
use qgdeform::cli::{emit_germ_file, parse_germ_file};
use qgdeform::germ::{
    degree_l, torsion_report, verdict, Assumptions, Convention, GermComponent, GermDescription, Normalization,
    PointIncidence, VerdictKind,
};
use qgdeform::hj::{chain_to_type, conjugate_type, hj_expand};
use qgdeform::{int, rat, CyclicQuotient, Rational};

fn small_rat() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| rat(n, d))
}

/// Determinant by cofactor expansion, independent of elimination.
fn cofactor_det(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = Rational::zero();
    for j in 0..n {
        let minor: Vec<Vec<Rational>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| x.clone()).collect())
            .collect();
        let term = &m[0][j] * cofactor_det(&minor);
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

fn cramer(m: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let det = cofactor_det(m);
    if det.is_zero() {
        return None;
    }
    Some(
        (0..m.len())
            .map(|j| {
                let replaced: Vec<Vec<Rational>> = m
                    .iter()
                    .zip(b)
                    .map(|(row, bi)| {
                        let mut row = row.clone();
                        row[j] = bi.clone();
                        row
                    })
                    .collect();
                cofactor_det(&replaced) / &det
            })
            .collect(),
    )
}

fn coprime_pair(max: u64) -> impl Strategy<Value = CyclicQuotient> {
    (2..=max)
        .prop_flat_map(|n| (Just(n), 1..n))
        .prop_filter_map("coprime", |(n, a)| CyclicQuotient::new(n, a).ok())
}

fn ext(lo: u64) -> impl Strategy<Value = ExtNat> {
    prop_oneof![4 => (lo..=8u64).prop_map(ExtNat::Finite), 1 => Just(ExtNat::Infinity)]
}

fn finite_kind() -> impl Strategy<Value = SingularityType> {
    let f = |lo: u64| (lo..=8u64).prop_map(ExtNat::Finite);
    prop_oneof![
        Just(SingularityType::NormalCrossing),
        Just(SingularityType::Pinch),
        Just(SingularityType::DegCusp1),
        f(2).prop_map(|n| SingularityType::DegCusp2 { n }),
        (f(1), f(1)).prop_map(|(p, q)| SingularityType::DegCusp3 { p, q }),
        (f(2), f(2), f(2)).prop_map(|(p, q, r)| SingularityType::DegCusp4 { p, q, r }),
        coprime_pair(8).prop_map(SingularityType::Slt),
    ]
}

fn germ(selfint: Rational, kinds: Vec<SingularityType>) -> GermDescription {
    GermDescription {
        name: "prop".into(),
        assumptions: Assumptions {
            h2_tangent_vanishes: true,
            modification: false,
        },
        components: vec![GermComponent {
            id: "C".into(),
            genus: 0,
            normalization: Normalization::Asserted(selfint),
        }],
        graphs: Default::default(),
        points: kinds
            .into_iter()
            .enumerate()
            .map(|(i, kind)| PointIncidence {
                id: format!("P{i:02}"),
                kind,
                incidences: vec![("C".into(), None)],
                branches: 1,
            })
            .collect(),
        selfint_checks: Default::default(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn solve_matches_cramer(n in 1usize..=4, entries in prop::collection::vec(small_rat(), 20)) {
        let rows: Vec<Vec<Rational>> = (0..n).map(|i| entries[i * n..(i + 1) * n].to_vec()).collect();
        let b: Vec<Rational> = entries[16..16 + n].to_vec();
        let m = Matrix::from_rows(rows.clone()).unwrap();
        match cramer(&rows, &b) {
            Some(x) => prop_assert_eq!(solve_linear_system(&m, &b).unwrap(), x),
            None => prop_assert!(solve_linear_system(&m, &b).is_err()),
        }
        prop_assert_eq!(m.determinant().unwrap(), cofactor_det(&rows));
    }

    #[test]
    fn hj_round_trip_and_duality(q in coprime_pair(60)) {
        let chain: Vec<i64> = hj_expand(q).into_iter().map(|b| b as i64).collect();
        prop_assert_eq!(chain_to_type(&chain).unwrap(), q);
        let rev: Vec<i64> = chain.iter().rev().copied().collect();
        let conj = conjugate_type(q);
        prop_assert_eq!(chain_to_type(&rev).unwrap(), conj);
        prop_assert_eq!(conjugate_type(conj), q);
    }

    #[test]
    fn alpha_four_limits_are_order_free(p in ext(2), q in ext(2), r in ext(2)) {
        use qgdeform::catalog::{evaluate_in_order, ClosedForm};
        let f = ClosedForm::Alpha4.cached();
        let base = evaluate_in_order(f, [p, q, r], [0, 1, 2]).unwrap();
        for order in [[2, 1, 0], [1, 2, 0], [0, 2, 1]] {
            prop_assert_eq!(evaluate_in_order(f, [p, q, r], order).unwrap(), base.clone());
        }
    }

    #[test]
    fn convention_gap_counts_t3(selfint in small_rat(), kinds in prop::collection::vec(finite_kind(), 0..8)) {
        let g = germ(selfint, kinds.clone());
        let d = degree_l(&g, "C").unwrap();
        let u3 = kinds.iter().filter(|k| matches!(k, SingularityType::DegCusp3 { .. })).count();
        prop_assert_eq!(&d.degree_theorem - &d.degree_example_convention, int(u3 as i64));
        prop_assert_eq!(d.degree_proof_path.as_ref(), Some(&d.degree_theorem));
        let t4 = kinds.iter().filter(|k| matches!(k, SingularityType::DegCusp4 { .. })).count();
        prop_assert_eq!(torsion_report(&g, "C").unwrap().len(), t4);
    }

    #[test]
    fn raising_selfint_never_breaks_smoothability(selfint in small_rat(), kinds in prop::collection::vec(finite_kind(), 0..6)) {
        let low = verdict(&germ(selfint.clone(), kinds.clone()), Convention::Theorem).unwrap();
        let high = verdict(&germ(selfint + Rational::one(), kinds), Convention::Theorem).unwrap();
        let smoothable = |k: &VerdictKind| matches!(k, VerdictKind::GloballySmoothable { .. });
        prop_assert!(!smoothable(&low.kind) || smoothable(&high.kind));
    }

    #[test]
    fn alpha_sum_is_census_sum(kinds in prop::collection::vec(finite_kind(), 0..8)) {
        let g = germ(int(0), kinds.clone());
        let d = degree_l(&g, "C").unwrap();
        let mut sum = int(0);
        for k in kinds {
            let inv = point_invariants(k, None).unwrap();
            if matches!(k, SingularityType::DegCusp3 { .. } | SingularityType::DegCusp4 { .. }) {
                sum += inv.alpha;
            }
        }
        prop_assert_eq!(d.alpha_sum, sum);
    }

    #[test]
    fn germ_files_round_trip(selfint in small_rat(), kinds in prop::collection::vec(finite_kind(), 0..8)) {
        let g = germ(selfint, kinds);
        let text = emit_germ_file(&g);
        let back = parse_germ_file(&text).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(emit_germ_file(&back), text);
    }
}
