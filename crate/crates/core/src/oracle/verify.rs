//! Independent replay of a [`Decomposition`].

use std::collections::HashSet;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cantor_model::{endpoint_value, locate, shift_at, CantorParams, LocateResult};
use crate::engine::{Decomposition, Pool};
use crate::ratio::{self, Ratio};

/// Failures per check; an empty list means the check passed.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub membership: Vec<String>,
    pub identity: Vec<String>,
    pub bound: Vec<String>,
    pub trace: Vec<String>,
    /// `x − (aggregate + residual)` when nonzero.
    #[serde(with = "crate::parameters::serde_opt_ratio")]
    pub identity_mismatch: Option<Ratio>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.membership.is_empty()
            && self.identity.is_empty()
            && self.bound.is_empty()
            && self.trace.is_empty()
    }

    pub fn failures(&self) -> Vec<String> {
        let tag = |name: &str, v: &[String]| {
            v.iter().map(|s| format!("{name}: {s}")).collect::<Vec<_>>()
        };
        [
            tag("membership", &self.membership),
            tag("identity", &self.identity),
            tag("bound", &self.bound),
            tag("trace", &self.trace),
        ]
        .concat()
    }
}

fn f(q: &Ratio) -> String {
    ratio::fmt(q)
}

/// Checks `d` against `x`: recomputed values and membership, the exact
/// identity, the residual bound, and a full replay of the trace.
pub fn verify_decomposition(d: &Decomposition, x: &Ratio) -> VerifyReport {
    let mut r = VerifyReport::default();
    let c = &d.construction;
    let params: Vec<CantorParams> = match c.params() {
        Ok(p) => p,
        Err(e) => {
            r.membership.push(format!("bad parameters: {e}"));
            return r;
        }
    };
    let n = params.len();
    if d.points.len() != n || d.initial.len() != n || c.pools.len() != n {
        r.membership.push(format!(
            "{} points, {} initial addresses, {} parameters",
            d.points.len(),
            d.initial.len(),
            n
        ));
        return r;
    }

    // (i) values from addresses, never inside a gap
    let mut values = Vec::with_capacity(n);
    for (j, (pt, p)) in d.points.iter().zip(&params).enumerate() {
        if pt.alpha != c.point_alphas[j] || pt.pool != c.pools[j] {
            r.membership.push(format!("point {j} disagrees with the construction"));
        }
        let v = endpoint_value(p, &pt.address);
        if v != pt.value {
            r.membership.push(format!(
                "point {j}: {} has value {}, reported {}",
                pt.address,
                f(&v),
                f(&pt.value)
            ));
        }
        match locate(p, &v, pt.address.depth() + 2) {
            Ok(LocateResult::Gap(g)) => r
                .membership
                .push(format!("point {j}: {} lies in the gap at {}", f(&v), g.word)),
            Err(e) => r.membership.push(format!("point {j}: {e}")),
            Ok(_) => {}
        }
        values.push(v);
    }

    // (ii) aggregate + residual = x
    if d.x != *x {
        r.identity
            .push(format!("decomposition is for {}, not {}", f(&d.x), f(x)));
    }
    let total = c.aggregate.total(&values);
    let gap = x - (&total + &d.residual);
    if !gap.is_zero() {
        r.identity.push(format!(
            "aggregate {} + residual {} misses x by {}",
            f(&total),
            f(&d.residual),
            f(&gap)
        ));
        r.identity_mismatch = Some(gap);
    }

    // (iii) |residual| ≤ certified bound
    if d.residual.abs() > d.certified_bound {
        r.bound.push(format!(
            "|residual| {} exceeds the certified bound {}",
            f(&d.residual.abs()),
            f(&d.certified_bound)
        ));
    }
    if d.tolerance_met != (d.certified_bound <= d.tolerance) {
        r.bound.push("tolerance flag disagrees with the bound".into());
    }

    replay(d, x, &params, &mut r.trace);
    r
}

fn replay(d: &Decomposition, x: &Ratio, params: &[CantorParams], out: &mut Vec<String>) {
    let c = &d.construction;
    let mut addrs = d.initial.clone();
    let mut values: Vec<Ratio> = addrs
        .iter()
        .zip(params)
        .map(|(a, p)| endpoint_value(p, a))
        .collect();
    let mut delta = x - c.aggregate.total(&values);
    let mut last_bound: Option<Ratio> = None;
    let mut last_scale = 0;
    for (k, step) in d.trace.iter().enumerate() {
        let at = format!("round {k}");
        if step.round != k {
            out.push(format!("{at}: labelled {}", step.round));
        }
        if step.delta_before != delta {
            out.push(format!("{at}: delta before {} ≠ replayed {}", f(&step.delta_before), f(&delta)));
        }
        if step.moves.len() > c.round_budget {
            out.push(format!("{at}: {} moves exceed budget {}", step.moves.len(), c.round_budget));
        }
        if k > 0 && step.scale != last_scale {
            out.push(format!("{at}: starts at scale {} after ending at {last_scale}", step.scale));
        }
        if k > 0 && step.next_scale <= step.scale {
            out.push(format!("{at}: scale did not advance"));
        }
        let mut seen = HashSet::new();
        for mv in &step.moves {
            let j = mv.point;
            if j >= addrs.len() {
                out.push(format!("{at}: move of unknown point {j}"));
                return;
            }
            if !seen.insert(j) {
                out.push(format!("{at}: point {j} moved twice"));
            }
            if mv.from != addrs[j] {
                out.push(format!("{at}: point {j} moves from {} but sits at {}", mv.from, addrs[j]));
            }
            let v = endpoint_value(&params[j], &mv.to);
            let up = match c.pools[j] {
                Pool::Inc => v >= values[j],
                Pool::Dec => v <= values[j],
            };
            if !up {
                out.push(format!("{at}: point {j} moved against its direction"));
            }
            let before = c.aggregate.total(&values);
            values[j] = v;
            let effect = (c.aggregate.total(&values) - before).abs();
            if k == 0 {
                if !mv.to.word.starts_with(&mv.from.word) {
                    out.push(format!("{at}: first move leaves segment {}", mv.from.word));
                }
            } else {
                check_shift(d, params, j, mv, &effect, &at, out);
            }
            addrs[j] = mv.to.clone();
        }
        delta = x - c.aggregate.total(&values);
        if step.delta_after != delta {
            out.push(format!("{at}: delta after {} ≠ replayed {}", f(&step.delta_after), f(&delta)));
        }
        match c.bound(step.next_scale) {
            Ok(b) if b == step.bound => {}
            _ => out.push(format!("{at}: bound {} is not M·ρ^{}", f(&step.bound), step.next_scale)),
        }
        if delta.abs() > step.bound {
            out.push(format!("{at}: |delta| {} exceeds bound {}", f(&delta.abs()), f(&step.bound)));
        }
        if let Some(b) = &last_bound {
            if step.bound >= *b {
                out.push(format!("{at}: bound did not decrease"));
            }
        }
        last_bound = Some(step.bound.clone());
        last_scale = step.next_scale;
    }
    if delta != d.residual {
        out.push(format!("replayed residual {} ≠ reported {}", f(&delta), f(&d.residual)));
    }
    for (j, (a, pt)) in addrs.iter().zip(&d.points).enumerate() {
        if *a != pt.address {
            out.push(format!("point {j}: replay ends at {a}, reported {}", pt.address));
        }
    }
    let expected = if delta.is_zero() {
        Some(Ratio::zero())
    } else {
        last_bound.clone()
    };
    if expected.as_ref() != Some(&d.certified_bound) {
        out.push(format!("certified bound {} does not match the trace", f(&d.certified_bound)));
    }
    if d.final_scale != last_scale {
        out.push(format!("final scale {} ≠ traced {last_scale}", d.final_scale));
    }
}

/// A later-round move must be one exact single-step shift whose effect on
/// the aggregate lies in the construction's bracket.
fn check_shift(
    d: &Decomposition,
    params: &[CantorParams],
    j: usize,
    mv: &crate::engine::Move,
    effect: &Ratio,
    at: &str,
    out: &mut Vec<String>,
) {
    let c = &d.construction;
    let q = match mv.to.depth().checked_sub(1) {
        Some(q) if q >= mv.from.depth() => q,
        _ => {
            out.push(format!("{at}: point {j} move {} → {} is not a shift", mv.from, mv.to));
            return;
        }
    };
    match shift_at(&params[j], &mv.from, q) {
        Ok((to, _)) if to == mv.to => {}
        _ => {
            out.push(format!("{at}: point {j} move {} → {} is not a shift", mv.from, mv.to));
            return;
        }
    }
    let step = params[j].step(q);
    let lo = &c.effect_lower * &step;
    let hi = &c.effect_upper * &step;
    if *effect < lo || *effect > hi {
        out.push(format!(
            "{at}: point {j} effect {} outside [{}, {}]",
            f(effect),
            f(&lo),
            f(&hi)
        ));
    }
}
