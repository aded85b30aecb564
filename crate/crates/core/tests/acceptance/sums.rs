use cantor_arith::c1_maps::PhiSpec;
use cantor_arith::intervals::{
    family_lengths, lemma2_interval, thm3_family_lower, thm3_family_upper,
    upper_closed_form_length, variant_interval, Classification, RatInterval, VariantFamily,
};
use cantor_arith::oracle::{
    coverage_of, fold_level_sets, level_set, verify_decomposition, CoverageOp, OracleConfig,
};
use cantor_arith::parameters::{e_alpha, sum_counts};
use cantor_arith::ratio::{frac, int, pow};
use cantor_arith::sum_solver::{decompose_sum, decompose_sum_variant, SolveOptions};
use cantor_arith::Error;

use crate::common::{eta_minus, random_in, rng, Criterion, SUM_GRID};

pub fn c1_sum_interval_examples() -> Criterion {
    let mut c = Criterion::new(1, "sum counts and base interval");
    for ((a, b), r, lo, hi) in [
        ((1, 3), 2, frac(4, 3), frac(2, 1)),
        ((1, 2), 6, frac(5, 1), frac(11, 2)),
    ] {
        let alpha = frac(a, b);
        let counts = sum_counts(&alpha, 1).unwrap();
        let iv = lemma2_interval(&alpha, 1).unwrap();
        c.check(
            format!("alpha={alpha}"),
            counts.r == r && iv == RatInterval::new(lo.clone(), hi.clone()).unwrap(),
            format!("r={} I={iv}", counts.r),
        );
    }
    c
}

pub fn c2_sum_solver() -> Criterion {
    let mut c = Criterion::new(2, "sum solver certification on the (alpha, m) grid");
    let mut rng = rng(2);
    for (a, b) in SUM_GRID {
        let alpha = frac(a, b);
        for m in 1..=3u32 {
            let tol = int(m as i64) * pow(&eta_minus(&alpha), 30);
            let opts = SolveOptions::new(tol.clone(), 200);
            let iv = lemma2_interval(&alpha, m).unwrap();
            let (mut bad, mut budget) = (0, 0);
            for _ in 0..200 {
                let x = random_in(&mut rng, &iv);
                match decompose_sum(&alpha, m, &x, &opts) {
                    Ok(d) => {
                        if d.certified_bound > tol || !verify_decomposition(&d, &x).passed() {
                            bad += 1;
                        }
                    }
                    Err(Error::BudgetViolation { .. }) => budget += 1,
                    Err(_) => bad += 1,
                }
            }
            c.check(
                format!("alpha={alpha} m={m}"),
                bad == 0 && budget == 0,
                format!("{bad} uncertified, {budget} budget violations"),
            );
        }
    }
    c
}

pub fn c3_coverage() -> Criterion {
    let mut c = Criterion::new(3, "oracle coverage of the base interval for l <= 6");
    let cfg = OracleConfig::default();
    for (a, b) in SUM_GRID {
        let alpha = frac(a, b);
        for m in 1..=3u32 {
            let r = sum_counts(&alpha, m).unwrap().r as usize;
            let iv = lemma2_interval(&alpha, m).unwrap();
            let terms = vec![alpha.clone(); r];
            let op = CoverageOp::Sum(PhiSpec::Power(m));
            let mut ok = true;
            let mut detail = String::new();
            let mut prev = None;
            for l in 1..=6 {
                match fold_level_sets(&terms, &op, l, &cfg) {
                    Ok(u) => {
                        let rep = coverage_of(&iv, &u, l);
                        if !rep.covered {
                            ok = false;
                            detail = format!("l={l} misses {:?}", rep.uncovered);
                        }
                        let nested_sets = level_set(&alpha, l, &cfg)
                            .unwrap()
                            .is_subset_of(&level_set(&alpha, l - 1, &cfg).unwrap());
                        let nested_sums = prev.as_ref().map_or(true, |p| u.is_subset_of(p));
                        if !nested_sets || !nested_sums {
                            ok = false;
                            detail = format!("nesting fails at l={l}");
                        }
                        prev = Some(u);
                    }
                    Err(e) => {
                        ok = false;
                        detail = e.to_string();
                    }
                }
            }
            c.check(format!("alpha={alpha} m={m}"), ok, detail);
        }
    }
    c
}

pub fn c4_variant_families() -> Criterion {
    let mut c = Criterion::new(4, "interval families");
    let third = frac(1, 3);
    let up = thm3_family_upper(&third, 1).unwrap();
    c.check(
        "upper (1/3,1) single",
        up.classification == Classification::SingleInterval && e_alpha(&third, 1) == frac(0, 1),
        "",
    );
    let half = frac(1, 2);
    let up = thm3_family_upper(&half, 1).unwrap();
    c.check(
        "upper (1/2,1) three disjoint parts of length 3/8",
        up.classification == Classification::DisjointUnion
            && up.merged.len() == 3
            && up.total_length == frac(3, 8),
        format!("{} parts, length {}", up.merged.len(), up.total_length),
    );

    let (mut not_single, mut first_bad) = (0, None);
    let (mut upper_len_bad, mut lower_len_bad) = (0, 0);
    for i in 1..=99 {
        let alpha = frac(i, 100);
        for m in 1..=10u32 {
            let lower = thm3_family_lower(&alpha, m).unwrap();
            if lower.classification != Classification::SingleInterval {
                not_single += 1;
                first_bad.get_or_insert((alpha.clone(), m));
            }
            let upper = thm3_family_upper(&alpha, m).unwrap();
            if upper.total_length != upper_closed_form_length(&alpha, m).unwrap() {
                upper_len_bad += 1;
            }
            if lower.total_length != family_lengths(&alpha, m).unwrap().lower_single {
                lower_len_bad += 1;
            }
        }
    }
    c.check(
        "lower union single on 99 x 10 grid",
        not_single == 0,
        format!(
            "{not_single}/990 disjoint, first at {:?}",
            first_bad.map(|(a, m)| format!("alpha={a} m={m}"))
        ),
    );
    c.check(
        "upper lengths match closed forms",
        upper_len_bad == 0,
        format!("{upper_len_bad}/990 mismatches"),
    );
    c.check(
        "lower length matches closed form",
        lower_len_bad == 0,
        format!("{lower_len_bad}/990 mismatches"),
    );

    let mut rng = rng(4);
    for (alpha, m) in [(frac(1, 3), 1u32), (frac(1, 2), 2)] {
        let h = sum_counts(&alpha, m).unwrap().half() as usize;
        let tol = int(m as i64) * pow(&eta_minus(&alpha), 30);
        let opts = SolveOptions::new(tol, 200);
        let mut bad = 0;
        for family in [VariantFamily::Upper, VariantFamily::Lower] {
            for t in 1..=h {
                let iv = variant_interval(&alpha, m, family, t).unwrap();
                for _ in 0..50 {
                    let x = random_in(&mut rng, &iv);
                    let ok = decompose_sum_variant(&alpha, m, t, family, &x, &opts)
                        .map(|d| d.tolerance_met && verify_decomposition(&d, &x).passed())
                        .unwrap_or(false);
                    if !ok {
                        bad += 1;
                    }
                }
            }
        }
        c.check(
            format!("variants certified at ({alpha},{m})"),
            bad == 0,
            format!("{bad} failures"),
        );
    }
    c
}
