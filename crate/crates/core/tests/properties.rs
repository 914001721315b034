mod common;

use common::{chain_rule_holds, check_orbit_partition, good_prime, lll_holds, p1_map, p2_monomial_map, q, reduction_commutes};
use num_bigint::BigInt;
use preper::closure::rational_preimages;
use preper::global::oracle::points_up_to_height;
use preper::modp::{build_orbit_graph, find_cycles, DEFAULT_MAX_TABLE_POINTS};
use preper::poly::{parse_map, HomogeneousMap, RationalProjPoint};
use proptest::prelude::*;

fn p1_maps() -> impl Strategy<Value = HomogeneousMap> {
    (2u32..=3)
        .prop_flat_map(|d| (Just(d), prop::collection::vec(-10i64..=10, 2 * (d as usize + 1))))
        .prop_filter_map("not a morphism", |(d, cs)| p1_map(d, &cs.iter().map(|&c| q(c, 1)).collect::<Vec<_>>()))
}

fn p2_maps() -> impl Strategy<Value = HomogeneousMap> {
    (2u32..=3, prop::array::uniform5(-6i64..=6)).prop_filter_map("not a morphism", |(d, c)| p2_monomial_map(d, c))
}

fn maps() -> impl Strategy<Value = HomogeneousMap> {
    prop_oneof![3 => p1_maps(), 1 => p2_maps()]
}

fn point(n: usize, h: i64) -> impl Strategy<Value = RationalProjPoint> {
    prop::collection::vec(-h..=h, n + 1)
        .prop_filter_map("zero vector", |v| RationalProjPoint::new(v.into_iter().map(BigInt::from).collect()).ok())
}

fn map_and_point(h: i64) -> impl Strategy<Value = (HomogeneousMap, RationalProjPoint)> {
    maps().prop_flat_map(move |f| {
        let n = f.dimension();
        (Just(f), point(n, h))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn reduction_commutes_with_iteration((f, p0) in map_and_point(50), start in 0usize..8, n in 1usize..=4) {
        let p = good_prime(&f, start).expect("finitely many bad primes");
        prop_assert_eq!(reduction_commutes(&f, &p0, p, n), Ok(()));
    }

    #[test]
    fn lll_preserves_lattice_and_finds_short_vectors(
        rows in (2usize..=3).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(-20i64..=20, n), n))
    ) {
        let r = lll_holds(&rows);
        prop_assume!(r.is_some());
        prop_assert_eq!(r.unwrap(), Ok(()));
    }

    #[test]
    fn parse_print_round_trip(f in maps()) {
        prop_assert_eq!(parse_map(&f.render()).unwrap(), f);
    }

    #[test]
    fn orbit_graphs_partition(f in maps(), start in 0usize..8) {
        let p = good_prime(&f, start).unwrap();
        prop_assume!(f.dimension() == 1 || p <= 11);
        let g = build_orbit_graph(&f, p, DEFAULT_MAX_TABLE_POINTS).unwrap();
        prop_assert_eq!(check_orbit_partition(&g, &find_cycles(&g)), Ok(()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn chain_rule_multiplier((f, p0) in map_and_point(5), n in 1usize..=3) {
        let r = chain_rule_holds(&f, &p0, n);
        prop_assume!(r.is_some());
        prop_assert_eq!(r.unwrap(), Ok(()));
    }

    #[test]
    fn preimages_match_search((f, r) in map_and_point(3)) {
        let target = f.evaluate(&r).unwrap();
        let pre = rational_preimages(&f, &target).unwrap();
        prop_assert!(pre.contains(&r));
        for x in &pre {
            prop_assert_eq!(&f.evaluate(x).unwrap(), &target);
        }
        let h = if f.dimension() == 1 { 12 } else { 3 };
        for x in points_up_to_height(f.dimension(), h) {
            if f.evaluate(&x).unwrap() == target {
                prop_assert!(pre.contains(&x), "missing preimage {}", x);
            }
        }
    }
}
