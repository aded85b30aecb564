use cantor_arith::c1_maps::{self, PhiSpec};
use cantor_arith::intervals::{self, IntervalFamily, RatInterval};
use cantor_arith::parameters::{alpha1_of_m, default_radius, e_alpha, product_counts, sum_counts};
use cantor_arith::{ratio, Ratio};
use serde_json::{json, Value};

use crate::args::{IntervalKind, ParamArgs};
use crate::output::{q, CliError, CliResult, Report};

pub fn need<'a, T>(v: &'a Option<T>, flag: &str) -> CliResult<&'a T> {
    v.as_ref()
        .ok_or_else(|| CliError::usage(format!("missing required flag {flag}")))
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn interval_json(i: &RatInterval) -> Value {
    json!({ "lo": q(&i.lo), "hi": q(&i.hi), "lo_decimal": ratio::to_decimal(&i.lo, 12), "hi_decimal": ratio::to_decimal(&i.hi, 12) })
}

pub fn params_sum(alpha: &Ratio, m: u32, phi: Option<&PhiSpec>) -> CliResult<Report> {
    let (counts, label) = match phi {
        Some(phi) => (c1_maps::c1_sum_counts(alpha, phi)?, phi.to_string()),
        None => (sum_counts(alpha, m)?, format!("power:{m}")),
    };
    let inputs = json!({ "alpha": q(alpha), "phi": label });
    Ok(Report::new(inputs, to_value(&counts)))
}

pub fn params_product(alpha: &Ratio, phi: Option<&PhiSpec>) -> CliResult<Report> {
    let pc = match phi {
        Some(phi) => c1_maps::c1_product_params(alpha, phi)?,
        None => product_counts(alpha)?,
    };
    let inputs = json!({ "alpha": q(alpha), "phi": phi.map(|p| p.to_string()) });
    let certs = json!({
        "constant": to_value(&pc.constant),
        "constant_decimal": pc.constant.to_decimal(15),
    });
    Ok(Report::new(inputs, to_value(&pc)).certificates(certs))
}

fn family_rows(rows: &mut Vec<Vec<String>>, name: &str, f: &IntervalFamily) {
    for (t, i) in &f.members {
        rows.push(vec![name.into(), t.to_string(), ratio::fmt(&i.lo), ratio::fmt(&i.hi)]);
    }
}

pub fn interval(kind: IntervalKind, p: &ParamArgs) -> CliResult<Report> {
    let m = p.m.unwrap_or(1);
    let lists = || -> CliResult<(Vec<Ratio>, Vec<Ratio>)> {
        Ok((need(&p.alphas, "--alphas")?.clone(), need(&p.betas, "--betas")?.clone()))
    };
    let inputs = json!({
        "kind": format!("{kind:?}").to_lowercase(),
        "alpha": p.alpha.as_ref().map(q),
        "alphas": p.alphas.as_ref().map(|v| v.iter().map(q).collect::<Vec<_>>()),
        "betas": p.betas.as_ref().map(|v| v.iter().map(q).collect::<Vec<_>>()),
        "m": m,
        "phi": p.phi.as_ref().map(|f| f.to_string()),
        "which": p.which,
    });
    let report = match kind {
        IntervalKind::Lemma2 => {
            let a = need(&p.alpha, "--alpha")?;
            let i = intervals::lemma2_interval(a, m)?;
            Report::new(inputs, json!({ "interval": interval_json(&i), "counts": to_value(&sum_counts(a, m)?) }))
                .csv(interval_csv(&i))
        }
        IntervalKind::Thm3 => {
            let a = need(&p.alpha, "--alpha")?;
            let upper = intervals::thm3_family_upper(a, m)?;
            let lower = intervals::thm3_family_lower(a, m)?;
            let mut rows = vec![vec!["family".into(), "t".into(), "lo".into(), "hi".into()]];
            family_rows(&mut rows, "upper", &upper);
            family_rows(&mut rows, "lower", &lower);
            let out = json!({
                "upper": to_value(&upper),
                "lower": to_value(&lower),
                "upper_adjacent": intervals::upper_adjacency_holds(a, m),
                "lower_adjacent_published": intervals::lower_adjacency_published(a, m)?,
                "lower_adjacent_exact": intervals::lower_adjacency_exact(a, m)?,
                "closed_form_lengths": to_value(&intervals::family_lengths(a, m)?),
            });
            Report::new(inputs, out).csv(rows)
        }
        IntervalKind::Thm4 => {
            let (a, b) = lists()?;
            let (a, b) = if p.which == 2 { (b, a) } else { (a, b) };
            let i = intervals::thm4_interval(&a, &b, m)?;
            let cert = intervals::mixed_sum_certificate(&a, &b, m)?;
            Report::new(inputs, json!({ "interval": interval_json(&i), "certificate": to_value(&cert) }))
                .csv(interval_csv(&i))
        }
        IntervalKind::Thm5 => {
            let a = need(&p.alpha, "--alpha")?;
            let (i, pc) = intervals::thm5_interval(a)?;
            Report::new(inputs, json!({ "interval": interval_json(&i), "counts": to_value(&pc) }))
                .csv(interval_csv(&i))
        }
        IntervalKind::Thm6 => {
            let (a, b) = lists()?;
            let r = intervals::thm6_intervals(&a, &b)?;
            let rows = vec![
                vec!["interval".into(), "lo".into(), "hi".into()],
                vec!["1".into(), ratio::fmt(&r.interval1.lo), ratio::fmt(&r.interval1.hi)],
                vec!["2".into(), ratio::fmt(&r.interval2.lo), ratio::fmt(&r.interval2.hi)],
            ];
            Report::new(inputs, to_value(&r)).csv(rows)
        }
        IntervalKind::Gamma => {
            let (a, b) = lists()?;
            Report::new(inputs, to_value(&intervals::gamma_split_intervals(&a, &b)?))
        }
        IntervalKind::C1sum => {
            let a = need(&p.alpha, "--alpha")?;
            let phi = need(&p.phi, "--phi")?;
            let i = c1_maps::c1_sum_interval(a, phi)?;
            Report::new(inputs, json!({ "interval": interval_json(&i), "counts": to_value(&c1_maps::c1_sum_counts(a, phi)?) }))
                .csv(interval_csv(&i))
        }
        IntervalKind::C1prod => {
            let a = need(&p.alpha, "--alpha")?;
            let phi = need(&p.phi, "--phi")?;
            let i = c1_maps::c1_product_interval(a, phi)?;
            Report::new(inputs, json!({ "interval": interval_json(&i), "counts": to_value(&c1_maps::c1_product_params(a, phi)?) }))
                .csv(interval_csv(&i))
        }
    };
    Ok(report)
}

fn interval_csv(i: &RatInterval) -> Vec<Vec<String>> {
    vec![
        vec!["lo".into(), "hi".into()],
        vec![ratio::fmt(&i.lo), ratio::fmt(&i.hi)],
    ]
}

/// Sign of `E(α)` at `α = i/grid`, plus the located sign change, per `m`.
pub fn alpha1(ms: &[u32], grid: u32) -> CliResult<Report> {
    if grid < 2 {
        return Err(CliError::usage("--grid must be at least 2"));
    }
    let mut rows = vec![vec!["m".into(), "alpha".into(), "sign".into(), "e_alpha".into()]];
    let mut tables = Vec::new();
    for &m in ms {
        if m == 0 {
            return Err(CliError::usage("--m must be at least 1"));
        }
        let mut changes = Vec::new();
        let mut prev: Option<(Ratio, &str)> = None;
        for i in 1..grid {
            let a = ratio::frac(i as i64, grid as i64);
            let e = e_alpha(&a, m);
            let sign = match ratio::sign(&e) {
                std::cmp::Ordering::Less => "-",
                std::cmp::Ordering::Equal => "0",
                std::cmp::Ordering::Greater => "+",
            };
            rows.push(vec![m.to_string(), ratio::fmt(&a), sign.into(), ratio::fmt(&e)]);
            if let Some((pa, ps)) = &prev {
                if *ps != sign {
                    changes.push(json!({ "from": q(pa), "to": q(&a), "signs": format!("{ps}{sign}") }));
                }
            }
            prev = Some((a, sign));
        }
        let root = match alpha1_of_m(m, grid, &default_radius()) {
            Ok(r) => json!({ "enclosure": to_value(&r), "decimal": r.to_decimal(15), "exact": r.is_exact() }),
            Err(e) => json!({ "error": e.to_string() }),
        };
        tables.push(json!({ "m": m, "alpha1": root, "sign_changes": changes }));
    }
    let inputs = json!({ "m": ms, "grid": grid });
    Ok(Report::new(inputs, json!({ "tables": tables })).csv(rows))
}
