use cantor_arith::c1_maps::{
    c1_sum_counts, c1_sum_interval, decompose_c1_sum, phi_affine, phi_power,
};
use cantor_arith::engine::Decomposition;
use cantor_arith::intervals::{lemma2_interval, thm5_interval, thm6_intervals};
use cantor_arith::oracle::verify_decomposition;
use cantor_arith::parameters::{mixed_sum_split, product_counts, sum_counts};
use cantor_arith::product_solver::decompose_product;
use cantor_arith::ratio::{frac, int, pow};
use cantor_arith::sum_solver::{decompose_mixed_sum, decompose_sum, SolveOptions};
use cantor_arith::{Error, Ratio};

use crate::common::{eta_minus, random_in, rng, Criterion, SUM_GRID};

fn json(d: &Decomposition) -> String {
    serde_json::to_string(d).unwrap()
}

pub fn c8_c1_consistency() -> Criterion {
    let mut c = Criterion::new(8, "general-map path consistency and affine equivariance");
    let mut rng = rng(8);
    let mut bad = Vec::new();
    for (a, b) in SUM_GRID {
        let alpha = frac(a, b);
        for m in 1..=3u32 {
            let phi = phi_power(m);
            let same_counts = c1_sum_counts(&alpha, &phi).ok() == sum_counts(&alpha, m).ok();
            let iv = lemma2_interval(&alpha, m).unwrap();
            let same_iv = c1_sum_interval(&alpha, &phi).ok() == Some(iv.clone());
            let opts = SolveOptions::new(int(m as i64) * pow(&eta_minus(&alpha), 30), 200);
            let mut same_trace = true;
            for _ in 0..10 {
                let x = random_in(&mut rng, &iv);
                let p = decompose_sum(&alpha, m, &x, &opts).map(|d| json(&d));
                let q = decompose_c1_sum(&alpha, &phi, &x, &opts).map(|d| json(&d));
                same_trace &= matches!((p, q), (Ok(p), Ok(q)) if p == q);
            }
            if !(same_counts && same_iv && same_trace) {
                bad.push(format!("alpha={alpha} m={m}"));
            }
        }
    }
    c.check("power path bit-identical", bad.is_empty(), bad.join(", "));

    let alpha = frac(1, 2);
    let (sa, sb) = (int(2), int(1));
    let affine = phi_affine(sa.clone(), sb.clone());
    let r = int(c1_sum_counts(&alpha, &affine).unwrap().r as i64);
    let iv = c1_sum_interval(&alpha, &affine).unwrap();
    let tol = pow(&eta_minus(&alpha), 30);
    let mut bad = 0;
    for _ in 0..50 {
        let x = random_in(&mut rng, &iv);
        let y = (&x - &r * &sb) / &sa;
        let da = decompose_c1_sum(&alpha, &affine, &x, &SolveOptions::new(&sa * &tol, 200));
        let di = decompose_c1_sum(&alpha, &phi_power(1), &y, &SolveOptions::new(tol.clone(), 200));
        let ok = match (da, di) {
            (Ok(da), Ok(di)) => {
                let addrs = |d: &Decomposition| d.points.iter().map(|p| p.address.clone()).collect::<Vec<_>>();
                addrs(&da) == addrs(&di)
                    && da.residual == &sa * &di.residual
                    && verify_decomposition(&da, &x).passed()
                    && verify_decomposition(&di, &y).passed()
            }
            _ => false,
        };
        if !ok {
            bad += 1;
        }
    }
    c.check("affine(2,1) equivariance on 50 x", bad == 0, format!("{bad} failures"));
    c
}

pub fn c9_negative_controls() -> Criterion {
    let mut c = Criterion::new(9, "negative controls");
    let alpha = frac(1, 2);
    let opts = SolveOptions::new(pow(&frac(1, 4), 30), 200);
    let x = frac(51, 10);
    let d = decompose_sum(&alpha, 1, &x, &opts).unwrap();
    c.check("baseline passes", verify_decomposition(&d, &x).passed(), "");

    let (mut flips, mut caught) = (0, 0);
    for j in 0..d.points.len() {
        for i in 0..d.points[j].address.word.len() {
            let mut t = d.clone();
            let mut digits = t.points[j].address.word.digits().to_vec();
            digits[i] = !digits[i];
            let s: String = digits.iter().map(|b| if *b { '1' } else { '0' }).collect();
            t.points[j].address.word = s.parse().unwrap();
            flips += 1;
            if !verify_decomposition(&t, &x).passed() {
                caught += 1;
            }
        }
    }
    c.check("every digit flip caught", flips > 0 && caught == flips, format!("{caught}/{flips}"));

    let mut t = d.clone();
    t.residual += frac(1, 1 << 20);
    let rep = verify_decomposition(&t, &x);
    c.check(
        "residual tamper caught",
        !rep.identity.is_empty() && rep.identity_mismatch.is_some(),
        "",
    );

    let iv = lemma2_interval(&alpha, 1).unwrap();
    let (piv, _) = thm5_interval(&frac(1, 3)).unwrap();
    let outside = [
        decompose_sum(&alpha, 1, &(&iv.lo - frac(1, 1000)), &opts).err(),
        decompose_sum(&alpha, 1, &(&iv.hi + frac(1, 1000)), &opts).err(),
        decompose_product(&frac(1, 3), &(&piv.hi + frac(1, 1000)), &opts).err(),
    ];
    c.check(
        "outside x rejected",
        outside.iter().all(|e| matches!(e, Some(Error::OutOfInterval { .. }))),
        "",
    );

    let named = |e: &Error| matches!(e, Error::Infeasible { inequality, .. } if !inequality.is_empty());
    let thirds = vec![frac(1, 3); 4];
    let short = vec![frac(1, 2), frac(1, 3)];
    let results = [
        mixed_sum_split(&thirds, 1).err(),
        decompose_mixed_sum(&short, &short, 1, &frac(3, 1), &opts).err(),
        thm6_intervals(&vec![frac(1, 3); 5], &vec![frac(1, 3); 5]).err(),
    ];
    c.check(
        "infeasible splits name the inequality",
        results.iter().all(|e| e.as_ref().is_some_and(named)),
        format!("{results:?}"),
    );
    c
}

fn one_run() -> String {
    let mut rng = rng(10);
    let mut out = String::new();
    for (a, b) in SUM_GRID {
        let alpha = frac(a, b);
        out += &serde_json::to_string(&sum_counts(&alpha, 2).unwrap()).unwrap();
        out += &serde_json::to_string(&product_counts(&alpha).unwrap()).unwrap();
        let iv = lemma2_interval(&alpha, 2).unwrap();
        let opts = SolveOptions::new(int(2) * pow(&eta_minus(&alpha), 30), 200);
        for _ in 0..5 {
            let x: Ratio = random_in(&mut rng, &iv);
            out += &json(&decompose_sum(&alpha, 2, &x, &opts).unwrap());
        }
        let (piv, _) = thm5_interval(&alpha).unwrap();
        for _ in 0..5 {
            let x = random_in(&mut rng, &piv);
            out += &json(&decompose_product(&alpha, &x, &opts).unwrap());
        }
    }
    out
}

pub fn c10_determinism() -> Criterion {
    let mut c = Criterion::new(10, "determinism");
    let (a, b) = (one_run(), one_run());
    c.check("two seeded runs byte-identical", a == b, format!("{} bytes", a.len()));
    c
}
