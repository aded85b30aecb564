use cantor_arith::c1_maps::PhiSpec;
use cantor_arith::intervals::{lemma2_interval, thm4_interval, thm5_interval, RatInterval};
use cantor_arith::oracle::{coverage_check, verify_decomposition, CoverageOp, OracleConfig};
use cantor_arith::parameters::{mixed_sum_split, product_counts, sum_counts, MixedSplit};
use cantor_arith::ratio::{frac, int, pow};
use cantor_arith::product_solver::decompose_product;
use cantor_arith::sum_solver::{decompose_mixed_sum, decompose_sum, SolveOptions};
use cantor_arith::Ratio;

use crate::common::{eta_minus, random_in, rng, Criterion, SUM_GRID};

pub fn c6_product_interval() -> Criterion {
    let mut c = Criterion::new(6, "single-parameter products at alpha = 1/3");
    let alpha = frac(1, 3);
    let pc = product_counts(&alpha).unwrap();
    let x3 = pow(&frac(9, 8), 3);
    c.check(
        "k=2 t=2 and bracket",
        pc.k == 2 && pc.t == 2 && x3 <= int(2) && int(2) < int(1) + &x3 && pc.theta == frac(8, 9),
        format!("k={} t={}", pc.k, pc.t),
    );
    let (iv, _) = thm5_interval(&alpha).unwrap();
    c.check(
        "interval [512/729, 8/9]",
        iv == RatInterval::new(frac(512, 729), frac(8, 9)).unwrap(),
        iv.to_string(),
    );
    let tol = pow(&eta_minus(&alpha), 30);
    let opts = SolveOptions::new(tol.clone(), 200);
    let mut rng = rng(6);
    let mut bad = 0;
    for _ in 0..200 {
        let x = random_in(&mut rng, &iv);
        let ok = decompose_product(&alpha, &x, &opts)
            .map(|d| d.certified_bound <= tol && verify_decomposition(&d, &x).passed())
            .unwrap_or(false);
        if !ok {
            bad += 1;
        }
    }
    c.check("200 products certified", bad == 0, format!("{bad} failures"));
    let cfg = OracleConfig::default();
    let terms = vec![alpha.clone(); 2 * pc.t as usize];
    let uncovered: Vec<usize> = (1..=4)
        .filter(|&l| {
            !coverage_check(&iv, &terms, &CoverageOp::Product, l, &cfg)
                .map(|r| r.covered)
                .unwrap_or(false)
        })
        .collect();
    c.check("product coverage l <= 4", uncovered.is_empty(), format!("{uncovered:?}"));
    c
}

pub fn c7_mixed_reduction() -> Criterion {
    let mut c = Criterion::new(7, "mixed sums and the equal-parameter reduction");
    let mut rng = rng(7);
    let (mut iv_bad, mut trace_bad) = (0, 0);
    for (a, b) in SUM_GRID {
        let alpha = frac(a, b);
        for m in 1..=3u32 {
            let h = sum_counts(&alpha, m).unwrap().half() as usize;
            let list = vec![alpha.clone(); h];
            let iv = lemma2_interval(&alpha, m).unwrap();
            if thm4_interval(&list, &list, m).ok() != Some(iv.clone()) {
                iv_bad += 1;
            }
            let opts = SolveOptions::new(int(m as i64) * pow(&eta_minus(&alpha), 30), 200);
            for _ in 0..5 {
                let x = random_in(&mut rng, &iv);
                let single = decompose_sum(&alpha, m, &x, &opts).map(|d| d.delta_sequence());
                let mixed = decompose_mixed_sum(&list, &list, m, &x, &opts).map(|d| d.delta_sequence());
                match (single, mixed) {
                    (Ok(s), Ok(t)) if s == t => {}
                    _ => trace_bad += 1,
                }
            }
        }
    }
    c.check("equal-parameter interval", iv_bad == 0, format!("{iv_bad} mismatches"));
    c.check("equal-parameter trace", trace_bad == 0, format!("{trace_bad} mismatches"));

    let mut list: Vec<Ratio> = vec![frac(1, 2)];
    list.extend(vec![frac(1, 3); 7]);
    let split = mixed_sum_split(&list, 1);
    c.check(
        "split (4, 4)",
        split.as_ref().ok() == Some(&MixedSplit { n1: 4, n2: 4 }),
        format!("{split:?}"),
    );
    let iv = thm4_interval(&list, &list, 1).unwrap();
    c.check(
        "interval [79/6, 41/3]",
        iv == RatInterval::new(frac(79, 6), frac(41, 3)).unwrap(),
        iv.to_string(),
    );
    let tol = pow(&frac(1, 4), 30);
    let opts = SolveOptions::new(tol.clone(), 200);
    let mut bad = 0;
    for _ in 0..100 {
        let x = random_in(&mut rng, &iv);
        let ok = decompose_mixed_sum(&list, &list, 1, &x, &opts)
            .map(|d| d.points.len() == 16 && d.certified_bound <= tol && verify_decomposition(&d, &x).passed())
            .unwrap_or(false);
        if !ok {
            bad += 1;
        }
    }
    c.check("100 mixed sums certified", bad == 0, format!("{bad} failures"));
    let cfg = OracleConfig::default();
    let terms: Vec<Ratio> = list.iter().chain(&list).cloned().collect();
    let uncovered: Vec<usize> = (1..=4)
        .filter(|&l| {
            !coverage_check(&iv, &terms, &CoverageOp::Sum(PhiSpec::Power(1)), l, &cfg)
                .map(|r| r.covered)
                .unwrap_or(false)
        })
        .collect();
    c.check("mixed coverage l <= 4", uncovered.is_empty(), format!("{uncovered:?}"));
    c
}
