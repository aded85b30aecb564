use std::io::Read;

use cantor_arith::c1_maps::{self, decompose_c1_sum, phi_power};
use cantor_arith::cantor_model::CantorParams;
use cantor_arith::engine::Decomposition;
use cantor_arith::intervals::{self, RatInterval};
use cantor_arith::oracle::{coverage_check, verify_decomposition, CoverageOp, OracleConfig};
use cantor_arith::product_solver::{decompose_mixed_product, decompose_product, MixedProductInterval};
use cantor_arith::sum_solver::{decompose_mixed_sum, decompose_sum, decompose_sum_variant, SolveOptions};
use cantor_arith::{ratio, Error, Ratio};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::args::{DecomposeKind, ParamArgs, StopArgs};
use crate::output::{q, CliError, CliResult, Report};
use crate::query::need;

fn lists(p: &ParamArgs) -> CliResult<(Vec<Ratio>, Vec<Ratio>)> {
    let (a, b) = (need(&p.alphas, "--alphas")?.clone(), need(&p.betas, "--betas")?.clone());
    Ok(if p.which == 2 { (b, a) } else { (a, b) })
}

fn which(p: &ParamArgs) -> MixedProductInterval {
    if p.which == 2 {
        MixedProductInterval::Second
    } else {
        MixedProductInterval::First
    }
}

/// The interval a decomposition of this kind must start from.
pub fn target_interval(kind: DecomposeKind, p: &ParamArgs) -> CliResult<RatInterval> {
    let m = p.m.unwrap_or(1);
    Ok(match kind {
        DecomposeKind::Sum => intervals::lemma2_interval(need(&p.alpha, "--alpha")?, m)?,
        DecomposeKind::SumVariant => intervals::variant_interval(
            need(&p.alpha, "--alpha")?,
            m,
            (*need(&p.family, "--family")?).into(),
            *need(&p.t, "--t")?,
        )?,
        DecomposeKind::MixedSum => {
            let (a, b) = lists(p)?;
            intervals::thm4_interval(&a, &b, m)?
        }
        DecomposeKind::Product => intervals::thm5_interval(need(&p.alpha, "--alpha")?)?.0,
        DecomposeKind::MixedProduct => {
            let r = intervals::thm6_intervals(need(&p.alphas, "--alphas")?, need(&p.betas, "--betas")?)?;
            match which(p) {
                MixedProductInterval::First => r.interval1,
                MixedProductInterval::Second => r.interval2,
            }
        }
        DecomposeKind::C1Sum => {
            c1_maps::c1_sum_interval(need(&p.alpha, "--alpha")?, need(&p.phi, "--phi")?)?
        }
    })
}

/// `tol`, or `M·η₋^scale` with the construction's bound constant `M`.
pub fn options(kind: DecomposeKind, p: &ParamArgs, stop: &StopArgs) -> CliResult<SolveOptions> {
    let tolerance = match (&stop.tol, stop.scale) {
        (Some(t), _) => t.clone(),
        (None, Some(l)) => {
            let pivot = match kind {
                DecomposeKind::MixedSum | DecomposeKind::MixedProduct => {
                    need(&p.alphas, "--alphas")?[0].clone()
                }
                _ => need(&p.alpha, "--alpha")?.clone(),
            };
            let m = ratio::int(p.m.unwrap_or(1) as i64);
            let constant = match kind {
                DecomposeKind::Product | DecomposeKind::MixedProduct => ratio::one(),
                DecomposeKind::C1Sum => c1_maps::sum_derivative_bounds(&pivot, need(&p.phi, "--phi")?)?.1,
                _ => m,
            };
            constant * ratio::pow(CantorParams::new(pivot)?.eta_minus(), l)
        }
        (None, None) => SolveOptions::default().tolerance,
    };
    Ok(SolveOptions::new(tolerance, stop.depth_budget))
}

pub fn solve(kind: DecomposeKind, p: &ParamArgs, x: &Ratio, o: &SolveOptions) -> cantor_arith::Result<Decomposition> {
    let m = p.m.unwrap_or(1);
    let alpha = || p.alpha.clone().ok_or_else(|| Error::Domain("missing --alpha".into()));
    match kind {
        DecomposeKind::Sum => decompose_sum(&alpha()?, m, x, o),
        DecomposeKind::SumVariant => {
            let family = p.family.ok_or_else(|| Error::Domain("missing --family".into()))?;
            let t = p.t.ok_or_else(|| Error::Domain("missing --t".into()))?;
            decompose_sum_variant(&alpha()?, m, t, family.into(), x, o)
        }
        DecomposeKind::MixedSum => {
            let (a, b) = lists(p).map_err(|e| Error::Domain(e.message))?;
            decompose_mixed_sum(&a, &b, m, x, o)
        }
        DecomposeKind::Product => decompose_product(&alpha()?, x, o),
        DecomposeKind::MixedProduct => {
            let a = p.alphas.clone().ok_or_else(|| Error::Domain("missing --alphas".into()))?;
            let b = p.betas.clone().ok_or_else(|| Error::Domain("missing --betas".into()))?;
            decompose_mixed_product(&a, &b, which(p), x, o)
        }
        DecomposeKind::C1Sum => {
            let phi = p.phi.clone().unwrap_or_else(|| phi_power(m));
            decompose_c1_sum(&alpha()?, &phi, x, o)
        }
    }
}

fn inputs(kind: DecomposeKind, p: &ParamArgs, o: &SolveOptions) -> Value {
    json!({
        "kind": format!("{kind:?}"),
        "alpha": p.alpha.as_ref().map(q),
        "alphas": p.alphas.as_ref().map(|v| v.iter().map(q).collect::<Vec<_>>()),
        "betas": p.betas.as_ref().map(|v| v.iter().map(q).collect::<Vec<_>>()),
        "m": p.m,
        "phi": p.phi.as_ref().map(|f| f.to_string()),
        "t": p.t,
        "family": p.family.map(|f| format!("{f:?}").to_lowercase()),
        "which": p.which,
        "tolerance": q(&o.tolerance),
        "depth_budget": o.depth_budget,
    })
}

fn certificates(d: &Decomposition) -> Value {
    let report = verify_decomposition(d, &d.x);
    let max_moves = d.trace.iter().map(|s| s.moves.len()).max().unwrap_or(0);
    json!({
        "certified_bound": q(&d.certified_bound),
        "tolerance_met": d.tolerance_met,
        "residual": q(&d.residual),
        "final_scale": d.final_scale,
        "trace": { "rounds": d.trace.len(), "max_moves_per_round": max_moves, "round_budget": d.construction.round_budget },
        "verification": { "passed": report.passed(), "failures": report.failures() },
    })
}

pub fn decompose(kind: DecomposeKind, p: &ParamArgs, x: &Ratio, stop: &StopArgs) -> CliResult<Report> {
    let o = options(kind, p, stop)?;
    let d = solve(kind, p, x, &o)?;
    let mut rows = vec![["point", "alpha", "pool", "address", "value"].map(String::from).to_vec()];
    for (j, pt) in d.points.iter().enumerate() {
        rows.push(vec![
            j.to_string(),
            ratio::fmt(&pt.alpha),
            format!("{:?}", pt.pool),
            pt.address.to_string(),
            ratio::fmt(&pt.value),
        ]);
    }
    let mut inp = inputs(kind, p, &o);
    inp["x"] = q(x);
    let certs = certificates(&d);
    let mut r = Report::new(inp, json!({ "decomposition": d })).certificates(certs).csv(rows);
    if !verify_decomposition(&d, x).passed() {
        r.code = 4;
    }
    Ok(r)
}

fn read_input(path: &str) -> CliResult<String> {
    let mut s = String::new();
    if path == "-" {
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::usage(format!("cannot read stdin: {e}")))?;
    } else {
        s = std::fs::read_to_string(path).map_err(|e| CliError::usage(format!("cannot read {path}: {e}")))?;
    }
    Ok(s)
}

/// Accepts a full CLI document or a bare decomposition.
pub fn parse_decomposition(text: &str) -> CliResult<Decomposition> {
    let v: Value = serde_json::from_str(text)?;
    let inner = v
        .get("outputs")
        .and_then(|o| o.get("decomposition"))
        .cloned()
        .unwrap_or(v);
    Ok(serde_json::from_value(inner)?)
}

pub fn verify_doc(input: &str, x: Option<&Ratio>) -> CliResult<Report> {
    let d = parse_decomposition(&read_input(input)?)?;
    let x = x.cloned().unwrap_or_else(|| d.x.clone());
    let rep = verify_decomposition(&d, &x);
    let mut rows = vec![vec!["check".to_string(), "passed".to_string(), "failures".to_string()]];
    for (name, v) in [
        ("membership", &rep.membership),
        ("identity", &rep.identity),
        ("bound", &rep.bound),
        ("trace", &rep.trace),
    ] {
        rows.push(vec![name.into(), v.is_empty().to_string(), v.join("; ")]);
    }
    let passed = rep.passed();
    let mut r = Report::new(
        json!({ "input": input, "x": q(&x) }),
        json!({ "passed": passed, "report": rep }),
    )
    .csv(rows);
    if !passed {
        r.code = 4;
    }
    Ok(r)
}

pub fn verify_coverage(target: RatInterval, terms: &[Ratio], op: CoverageOp, level: usize) -> CliResult<Report> {
    let cfg = OracleConfig::from_env();
    let mut levels = Vec::new();
    let mut rows = vec![["level", "covered", "union_parts", "uncovered"].map(String::from).to_vec()];
    let mut all = true;
    for l in 1..=level {
        let rep = coverage_check(&target, terms, &op, l, &cfg)?;
        all &= rep.covered;
        rows.push(vec![
            l.to_string(),
            rep.covered.to_string(),
            rep.union_parts.to_string(),
            rep.uncovered.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" "),
        ]);
        levels.push(rep);
    }
    let inputs = json!({
        "target": { "lo": q(&target.lo), "hi": q(&target.hi) },
        "terms": terms.iter().map(q).collect::<Vec<_>>(),
        "op": op,
        "level": level,
        "l_max": cfg.l_max,
        "part_cap": cfg.part_cap,
    });
    let mut r = Report::new(inputs, json!({ "covered": all, "levels": levels })).csv(rows);
    if !all {
        r.code = 2;
    }
    Ok(r)
}

pub fn batch(
    kind: DecomposeKind,
    p: &ParamArgs,
    count: usize,
    seed: u64,
    denominator: u64,
    stop: &StopArgs,
) -> CliResult<Report> {
    if denominator == 0 {
        return Err(CliError::usage("--denominator must be positive"));
    }
    let iv = target_interval(kind, p)?;
    let o = options(kind, p, stop)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let den = Ratio::from_integer(denominator.into());
    let xs: Vec<Ratio> = (0..count)
        .map(|_| &iv.lo + iv.length() * Ratio::from_integer(rng.gen_range(0..=denominator).into()) / &den)
        .collect();
    let items: Vec<(Value, bool, bool)> = xs
        .par_iter()
        .enumerate()
        .map(|(i, x)| match solve(kind, p, x, &o) {
            Ok(d) => {
                let verified = verify_decomposition(&d, x).passed();
                let v = json!({
                    "index": i,
                    "x": q(x),
                    "certified_bound": q(&d.certified_bound),
                    "tolerance_met": d.tolerance_met,
                    "residual": q(&d.residual),
                    "rounds": d.trace.len(),
                    "verified": verified,
                });
                (v, verified && d.tolerance_met, verified)
            }
            Err(e) => {
                let fatal = matches!(e, Error::BudgetViolation { .. } | Error::Internal(_));
                (json!({ "index": i, "x": q(x), "error": e.to_string() }), false, !fatal)
            }
        })
        .collect();
    let certified = items.iter().filter(|t| t.1).count();
    let sound = items.iter().all(|t| t.2);
    let mut rows = vec![["index", "x", "certified_bound", "tolerance_met", "verified", "error"]
        .map(String::from)
        .to_vec()];
    for (v, _, _) in &items {
        let s = |k: &str| match &v[k] {
            Value::Null => String::new(),
            Value::String(s) => s.clone(),
            other => other.to_string(),
        };
        rows.push(vec![s("index"), s("x"), s("certified_bound"), s("tolerance_met"), s("verified"), s("error")]);
    }
    let mut inp = inputs(kind, p, &o);
    inp["count"] = json!(count);
    inp["seed"] = json!(seed);
    inp["denominator"] = json!(denominator);
    let outputs = json!({
        "interval": { "lo": q(&iv.lo), "hi": q(&iv.hi) },
        "items": items.iter().map(|t| t.0.clone()).collect::<Vec<_>>(),
    });
    let certs = json!({ "certified": certified, "count": count, "all_verified": sound });
    let mut r = Report::new(inp, outputs).certificates(certs).csv(rows);
    if !sound {
        r.code = 4;
    }
    Ok(r)
}
