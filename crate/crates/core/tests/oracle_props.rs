use cantor_arith::intervals::RatInterval;
use cantor_arith::oracle::{
    level_set, minkowski_product, minkowski_sum, IntervalUnion, OracleConfig,
};
use cantor_arith::ratio::frac;
use cantor_arith::Ratio;
use proptest::prelude::*;

fn union() -> impl Strategy<Value = IntervalUnion> {
    prop::collection::vec((0i64..40, 0i64..8), 1..5).prop_map(|v| {
        let parts: Vec<RatInterval> = v
            .into_iter()
            .map(|(a, w)| RatInterval::new(frac(a, 8), frac(a + w, 8)).unwrap())
            .collect();
        IntervalUnion::from_parts(&parts)
    })
}

fn alpha() -> impl Strategy<Value = Ratio> {
    (1i64..10).prop_map(|n| frac(n, 10))
}

proptest! {
    #[test]
    fn level_sets_nest(a in alpha(), l in 0usize..7) {
        let cfg = OracleConfig::default();
        let fine = level_set(&a, l + 1, &cfg).unwrap();
        let coarse = level_set(&a, l, &cfg).unwrap();
        prop_assert_eq!(fine.parts.len(), 1 << (l + 1));
        prop_assert!(fine.is_subset_of(&coarse));
    }

    #[test]
    fn union_is_canonical(u in union()) {
        for w in u.parts.windows(2) {
            prop_assert!(w[0].hi < w[1].lo);
        }
    }

    #[test]
    fn sums_commute_and_associate(u in union(), v in union(), w in union()) {
        prop_assert_eq!(minkowski_sum(&u, &v), minkowski_sum(&v, &u));
        prop_assert_eq!(
            minkowski_sum(&minkowski_sum(&u, &v), &w),
            minkowski_sum(&u, &minkowski_sum(&v, &w))
        );
    }

    #[test]
    fn products_commute_and_associate(u in union(), v in union(), w in union()) {
        prop_assert_eq!(minkowski_product(&u, &v), minkowski_product(&v, &u));
        prop_assert_eq!(
            minkowski_product(&minkowski_product(&u, &v), &w),
            minkowski_product(&u, &minkowski_product(&v, &w))
        );
    }

    #[test]
    fn sum_contains_pairwise_sums(u in union(), v in union(), i in 0usize..4, j in 0usize..4) {
        let a = &u.parts[i % u.parts.len()];
        let b = &v.parts[j % v.parts.len()];
        let s = minkowski_sum(&u, &v);
        prop_assert!(s.contains_point(&(&a.lo + &b.hi)));
        prop_assert!(s.contains_point(&(a.midpoint() + b.midpoint())));
    }
}
