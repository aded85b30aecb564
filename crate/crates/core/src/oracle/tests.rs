use super::*;
use crate::ratio::frac;

fn iv(a: Ratio, b: Ratio) -> RatInterval {
    RatInterval::new(a, b).unwrap()
}

fn cfg() -> OracleConfig {
    OracleConfig::default()
}

#[test]
fn level_one_third() {
    let u = level_set(&frac(1, 3), 1, &cfg()).unwrap();
    assert_eq!(
        u.parts,
        vec![iv(frac(0, 1), frac(1, 3)), iv(frac(2, 3), frac(1, 1))]
    );
    let u2 = level_set(&frac(1, 3), 2, &cfg()).unwrap();
    assert_eq!(u2.parts.len(), 4);
    assert!(u2.parts.iter().all(|p| p.length() == frac(1, 9)));
    assert_eq!(u2.total_length(), frac(4, 9));
    assert!(u2.is_subset_of(&u));
}

#[test]
fn level_limit() {
    let c = OracleConfig { l_max: 3, ..cfg() };
    assert!(matches!(level_set(&frac(1, 3), 4, &c), Err(Error::Resource(_))));
}

#[test]
fn power_images() {
    let u = level_set(&frac(1, 3), 1, &cfg()).unwrap();
    let sq = map_power(&u, 2).unwrap();
    assert_eq!(
        sq.parts,
        vec![iv(frac(0, 1), frac(1, 9)), iv(frac(4, 9), frac(1, 1))]
    );
    assert_eq!(map_power(&u, 1).unwrap(), u);
    let c = map_power(&IntervalUnion::single(iv(frac(1, 2), frac(3, 4))), 3).unwrap();
    assert_eq!(c.parts, vec![iv(frac(1, 8), frac(27, 64))]);
    let neg = IntervalUnion::single(iv(frac(-1, 2), frac(0, 1)));
    assert!(map_power(&neg, 2).is_err());
}

#[test]
fn minkowski_examples() {
    let u = level_set(&frac(1, 3), 1, &cfg()).unwrap();
    assert_eq!(minkowski_sum(&u, &u).parts, vec![iv(frac(0, 1), frac(2, 1))]);
    let a = IntervalUnion::single(iv(frac(0, 1), frac(1, 1)));
    let b = IntervalUnion::single(iv(frac(5, 1), frac(5, 1)));
    assert_eq!(minkowski_sum(&a, &b).parts, vec![iv(frac(5, 1), frac(6, 1))]);
    let h = IntervalUnion::single(iv(frac(1, 2), frac(1, 1)));
    assert_eq!(minkowski_product(&h, &h).parts, vec![iv(frac(1, 4), frac(1, 1))]);
}

#[test]
fn cap_is_a_resource_error() {
    let u = level_set(&frac(1, 3), 6, &cfg()).unwrap();
    assert!(matches!(
        minkowski_sum_capped(&u, &u, 100),
        Err(Error::Resource(_))
    ));
}

#[test]
fn coverage_examples() {
    let sum = coverage_check(
        &iv(frac(4, 3), frac(2, 1)),
        &[frac(1, 3), frac(1, 3)],
        &CoverageOp::Sum(PhiSpec::Power(1)),
        1,
        &cfg(),
    )
    .unwrap();
    assert!(sum.covered);
    let prod = coverage_check(
        &iv(frac(512, 729), frac(8, 9)),
        &vec![frac(1, 3); 4],
        &CoverageOp::Product,
        3,
        &cfg(),
    )
    .unwrap();
    assert!(prod.covered);
}

#[test]
fn uncovered_pieces_are_reported() {
    let u = IntervalUnion::from_parts(&[iv(frac(0, 1), frac(1, 1)), iv(frac(2, 1), frac(3, 1))]);
    assert_eq!(
        u.uncovered(&iv(frac(1, 2), frac(4, 1))),
        vec![iv(frac(1, 1), frac(2, 1)), iv(frac(3, 1), frac(4, 1))]
    );
    assert!(u.uncovered(&iv(frac(2, 1), frac(3, 1))).is_empty());
}
