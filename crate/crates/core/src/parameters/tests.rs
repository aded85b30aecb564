use super::*;
use crate::ratio::{frac, parse_list};
use proptest::prelude::*;

#[test]
fn sum_count_examples() {
    let c = |a, b, m| sum_counts(&frac(a, b), m).unwrap();
    assert_eq!(c(1, 3, 1), SumCounts { s: 1, k: 0, r: 2 });
    assert_eq!(c(1, 2, 1), SumCounts { s: 1, k: 2, r: 6 });
    assert_eq!(c(1, 2, 2), SumCounts { s: 2, k: 2, r: 8 });
    assert_eq!(c(2, 3, 3), SumCounts { s: 2, k: 6, r: 16 });
    assert!(sum_counts(&frac(1, 2), 0).is_err());
}

#[test]
fn shift_exponent_examples() {
    assert_eq!(shift_exponent(&frac(1, 2), &frac(1, 2), 5).unwrap(), 5);
    assert_eq!(shift_exponent(&frac(1, 2), &frac(1, 3), 2).unwrap(), 3);
    assert!(shift_exponent(&frac(1, 3), &frac(1, 2), 2).is_err());
}

#[test]
fn mixed_sum_split_examples() {
    let v = parse_list("1/2, 1/3*7").unwrap();
    assert_eq!(mixed_sum_split(&v, 1).unwrap(), MixedSplit { n1: 4, n2: 4 });
    // strict inequality against a zero right side forces n1 = 1
    let v = parse_list("1/3*4").unwrap();
    assert!(matches!(mixed_sum_split(&v, 1), Err(Error::Infeasible { .. })));
    let v = parse_list("1/3*5").unwrap();
    assert_eq!(mixed_sum_split(&v, 1).unwrap(), MixedSplit { n1: 1, n2: 4 });
    let v = parse_list("1/4*5").unwrap();
    assert_eq!(mixed_sum_split(&v, 1).unwrap().n1, 0);
    assert!(mixed_sum_split(&parse_list("1/3, 1/2").unwrap(), 1).is_err());
}

#[test]
fn mixed_product_split_examples() {
    let four = parse_list("1/3*4").unwrap();
    assert!(matches!(
        mixed_product_split(&ratio::one(), &four, &frac(1, 3)),
        Err(Error::Infeasible { .. })
    ));
    let five = parse_list("1/3*5").unwrap();
    assert_eq!(
        mixed_product_split(&ratio::one(), &five, &frac(1, 3)).unwrap(),
        MixedSplit { n1: 1, n2: 4 }
    );
}

#[test]
fn chi_example() {
    let v = parse_list("1/3*2").unwrap();
    assert_eq!(chi(&v, &v).unwrap(), frac(4096, 6561));
}

#[test]
fn product_counts_one_third() {
    let pc = product_counts(&frac(1, 3)).unwrap();
    assert_eq!((pc.k, pc.t, pc.s, pc.p), (2, 2, 2, 0));
    assert_eq!(pc.theta, frac(8, 9));
    assert!(pc.beta.is_none());
    let x = ratio::pow(&(ratio::one() / &pc.theta), 3);
    assert_eq!(ratio::ceil_to_u64(&x), 2);
}

#[test]
fn product_counts_one_fifth() {
    let pc = product_counts(&frac(1, 5)).unwrap();
    assert_eq!(pc.k, 3);
    assert_eq!(pc.theta, frac(117, 125));
}

#[test]
fn product_counts_above_one_third() {
    let a = frac(1, 2);
    let pc = product_counts(&a).unwrap();
    assert_eq!(pc.beta, Some(frac(3, 7)));
    assert!(pc.p >= 1);
    assert_eq!(pc.s + pc.p, pc.t);
}

#[test]
fn beta_values() {
    assert_eq!(beta_alpha(&frac(1, 2)), Some(frac(3, 7)));
    assert_eq!(beta_alpha(&frac(1, 3)), None);
}

fn bracket_holds(pc: &ProductCounts, t: u64) -> bool {
    let x = ratio::pow(&(ratio::one() / &pc.theta), (2 * t - 1) as u32);
    let tq = ratio::int(t as i64);
    match &pc.beta {
        None => x <= tq && tq < x + ratio::one(),
        Some(b) => {
            let g = ratio::one() / b;
            &g * &x <= tq && tq < g * x + ratio::int(2)
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sum_counts_invariants(num in 1i64..99, m in 1u32..6) {
        let a = frac(num, 100);
        let c = sum_counts(&a, m).unwrap();
        prop_assert_eq!(c.r, 2 * c.s + 2 * c.k);
        prop_assert_eq!(c.k == 0, a <= frac(1, 3));
        if m == 1 { prop_assert_eq!(c.s, 1); }
    }

    #[test]
    fn shift_exponent_is_minimal_and_increasing(a in 2i64..9, b in 1i64..9, l in 1usize..12) {
        let (a1, aj) = if a >= b { (frac(a, 10), frac(b, 10)) } else { (frac(b, 10), frac(a, 10)) };
        let n = shift_exponent(&a1, &aj, l).unwrap();
        let p1 = CantorParams::new(a1.clone()).unwrap();
        let pj = CantorParams::new(aj.clone()).unwrap();
        prop_assert!(pj.step(n) <= p1.step(l));
        prop_assert!(pj.step(n - 1) > p1.step(l));
        prop_assert!(shift_exponent(&a1, &aj, l + 1).unwrap() > n);
    }

    #[test]
    fn product_counts_bracket_and_minimality(num in 5i64..95) {
        let a = frac(num, 100);
        let pc = match product_counts(&a) { Ok(pc) => pc, Err(_) => return Ok(()) };
        prop_assert_eq!(pc.s + pc.p, pc.t);
        prop_assert_eq!(pc.p == 0, a <= frac(1, 3));
        prop_assert!(pc.theta > ratio::zero() && pc.theta < ratio::one());
        prop_assert!(bracket_holds(&pc, pc.t));
    }

    #[test]
    fn appending_smaller_params_keeps_split(extra in 0usize..4) {
        let mut v = parse_list("1/2, 1/3*7").unwrap();
        v.extend(std::iter::repeat(frac(1, 5)).take(extra));
        prop_assert_eq!(mixed_sum_split(&v, 1).unwrap(), MixedSplit { n1: 4, n2: 4 });
    }

    #[test]
    fn smaller_chi_never_shrinks_split(c in 50i64..100) {
        let v = parse_list("1/3*12").unwrap();
        let hi = mixed_product_split(&frac(c, 100), &v, &frac(1, 3));
        let lo = mixed_product_split(&frac(c - 10, 100), &v, &frac(1, 3));
        if let (Ok(h), Ok(l)) = (hi, lo) {
            prop_assert!(l.n1 >= h.n1 && l.n2 >= h.n2);
        }
    }
}
