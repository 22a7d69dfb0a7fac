mod common;

use proptest::prelude::*;

use rtsieve::ntheory::Sign;
use rtsieve::weilgate::{
    degree_combination_exists, describe_combination, eliminate_mq, evaluate_prime,
    find_degree_combination, FactorShape, RouteKind,
};

#[test]
fn combination_matches_oracle_exhaustively() {
    let checked = common::check_combinations(6, 6, 20).unwrap();
    assert!(checked > 100_000);
}

proptest! {
    #[test]
    fn combination_matches_oracle_on_wide_degrees(
        kinds in prop::collection::vec((1usize..=24, 0usize..=2), 0..=6),
        target in 0usize..=20,
    ) {
        let kinds: Vec<FactorShape> = kinds.into_iter().map(|(degree, real_roots)| FactorShape { degree, real_roots }).collect();
        let found = find_degree_combination(&kinds, target);
        prop_assert_eq!(found.is_some(), common::combination_oracle(&kinds, target));
        prop_assert_eq!(degree_combination_exists(&kinds, target), found.is_some());
        if let Some(m) = found {
            let total: usize = kinds.iter().zip(&m).map(|(k, &n)| k.degree * n as usize).sum();
            prop_assert_eq!(total, target);
            prop_assert!(kinds.iter().zip(&m).all(|(k, &n)| k.real_roots == 0 || n % 2 == 0));
        }
    }
}

fn shapes(m_q: u64, sign: Sign, p: u64) -> Vec<(usize, bool)> {
    let mut v: Vec<(usize, bool)> = evaluate_prime(7, m_q, sign, p)
        .unwrap()
        .factors
        .iter()
        .map(|f| (f.degree, f.real_roots > 0))
        .collect();
    v.sort();
    v
}

#[test]
fn genus_seven_concordance() {
    // eliminated values
    for (m_q, kind, prime) in [
        (8, RouteKind::UniversalOddQnr, None),
        (10, RouteKind::ExplicitPrime, Some(5)),
        (12, RouteKind::UniversalOddQnr, None),
        (30, RouteKind::ExplicitPrime, Some(5)),
    ] {
        let c = eliminate_mq(7, m_q, 200).unwrap();
        assert!(c.eliminated, "m_Q = {m_q}");
        let route = c.route.as_ref().unwrap();
        assert_eq!((route.kind, route.prime), (kind, prime), "m_Q = {m_q}");
        c.verify().unwrap();
    }
    assert_eq!(
        shapes(30, Sign::Plus, 5),
        vec![
            (2, true),
            (4, false),
            (4, false),
            (4, false),
            (8, false),
            (8, false)
        ]
    );
    assert_eq!(
        shapes(10, Sign::Plus, 5),
        vec![(2, true), (4, false), (4, false)]
    );

    // open values and the assemblies that keep them open
    for (m_q, p, assembly) in [
        (14, 7, "2 + 6 + 6"),
        (18, 3, "2 + 6 + 6"),
        (20, 5, "2 + 4 + 8"),
        (24, 3, "2 + 4 + 8"),
    ] {
        let c = eliminate_mq(7, m_q, 200).unwrap();
        assert!(!c.eliminated, "m_Q = {m_q}");
        let ev = c.per_prime.iter().find(|e| e.prime == p).unwrap();
        assert_eq!(describe_combination(ev), assembly, "m_Q = {m_q}");
        assert!(c.routes_considered.iter().all(|r| !r.eliminated));
        c.verify().unwrap();
    }
    // T^2 + 7 has no real root, so it may appear once
    assert_eq!(
        shapes(14, Sign::Minus, 7),
        vec![(2, false), (6, false), (6, false)]
    );
}

#[test]
fn dodecic_explicit_route_is_blocked_at_genus_five() {
    let c = eliminate_mq(5, 12, 100).unwrap();
    assert!(c.eliminated);
    let explicit = &c.routes_considered[0];
    assert_eq!(explicit.route.prime, Some(3));
    assert!(!explicit.eliminated);
    assert_eq!(explicit.witness_prime, Some(3));
}

#[test]
fn nonresidue_shapes_are_uniform_in_p() {
    // the route needs the obstruction at every odd prime; spot-check that the
    // factor shapes do not move with p
    for (m_q, expected) in [
        (8, vec![(8, false)]),
        (10, vec![(2, false), (8, false)]),
        (12, vec![(4, false), (8, false)]),
    ] {
        for p in (3..1000).filter(|&p| common::naive_is_prime(p)) {
            assert_eq!(
                shapes(m_q, Sign::Minus, p),
                expected,
                "m_Q = {m_q}, p = {p}"
            );
        }
    }
    let c8 = eliminate_mq(5, 8, 1000).unwrap();
    assert!(c8.notes.iter().all(|n| !n.contains("factor shape")));
}

#[test]
fn window_closes_above_six() {
    let c = eliminate_mq(7, 14, 100).unwrap();
    let universal = c.routes_considered.last().unwrap();
    assert_eq!(universal.route.kind, RouteKind::UniversalOddQnr);
    assert!(!universal.evaluated && !universal.route.window_ok);
    assert!(eliminate_mq(5, 10, 2).is_err());
    assert!(eliminate_mq(5, 10, 2_000_000).is_err());
}
