//! Products of Cantor points.
//!
//! Every point stays inside the top segment `A_{1^k}` = `[θ, 1]` of its
//! set: left endpoints start at `θ`, right endpoints at `1`.

use serde::{Deserialize, Serialize};

use crate::cantor_model::{EndpointAddress, Word};
use crate::engine::{Aggregate, Construction, Decomposition, Engine, Pool};
use crate::error::{Error, Result};
use crate::intervals::{self, ThetaTable};
use crate::ratio::{self, Ratio};
use crate::sum_solver::SolveOptions;

fn ones(k: u64) -> Word {
    Word::ones(k as usize)
}

/// `x = ∏_{j ≤ 2t} c_j` with every `c_j ∈ C_α`.
pub fn decompose_product(alpha: &Ratio, x: &Ratio, opts: &SolveOptions) -> Result<Decomposition> {
    let (interval, pc) = intervals::thm5_interval(alpha)?;
    interval.require(x)?;
    let t = pc.t as usize;
    let mut initial = vec![EndpointAddress::left(ones(pc.k)); t];
    initial.extend(vec![EndpointAddress::right(ones(pc.k)); t]);
    let mut pools = vec![Pool::Inc; t];
    pools.extend(vec![Pool::Dec; t]);
    let c = Construction {
        aggregate: Aggregate::Product,
        point_alphas: vec![alpha.clone(); 2 * t],
        pools,
        pivot: 0,
        bound_constant: ratio::one(),
        effect_lower: ratio::pow(&pc.theta, (2 * t - 1) as u32),
        effect_upper: ratio::one(),
        round_budget: t,
    };
    Engine::new(&c, initial, x.clone())?.run(&opts.tolerance, opts.depth_budget)
}

/// Which of the two mixed-product intervals to solve in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MixedProductInterval {
    /// `β` points start at `θ`, `α` points at `1`.
    First,
    /// `α` points start at `θ`, `β` points at `1`.
    Second,
}

/// `x = ∏ a_i · ∏ b_j` with `a_i ∈ C_{α_i}`, `b_j ∈ C_{β_j}`.
pub fn decompose_mixed_product(
    alphas: &[Ratio],
    betas: &[Ratio],
    which: MixedProductInterval,
    x: &Ratio,
    opts: &SolveOptions,
) -> Result<Decomposition> {
    let iv = intervals::thm6_intervals(alphas, betas)?;
    let (interval, low, high) = match which {
        MixedProductInterval::First => (&iv.interval1, betas, alphas),
        MixedProductInterval::Second => (&iv.interval2, alphas, betas),
    };
    interval.require(x)?;
    solve_mixed(low, high, x, opts)
}

/// `low` points start at their `θ`, `high` points at `1`.
pub fn solve_mixed(
    low: &[Ratio],
    high: &[Ratio],
    x: &Ratio,
    opts: &SolveOptions,
) -> Result<Decomposition> {
    if low.is_empty() || high.is_empty() {
        return Err(Error::Domain("both parameter lists must be non-empty".into()));
    }
    let mut table = ThetaTable::default();
    let mut initial = Vec::new();
    let mut pools = Vec::new();
    let mut chi = ratio::one();
    let mut max_theta = ratio::zero();
    for (list, pool) in [(low, Pool::Inc), (high, Pool::Dec)] {
        for a in list {
            let pc = table.counts(a)?;
            let w = ones(pc.k);
            chi *= &pc.theta;
            if pc.theta > max_theta {
                max_theta = pc.theta.clone();
            }
            initial.push(match pool {
                Pool::Inc => EndpointAddress::left(w),
                Pool::Dec => EndpointAddress::right(w),
            });
            pools.push(pool);
        }
    }
    let c = Construction {
        aggregate: Aggregate::Product,
        point_alphas: low.iter().chain(high).cloned().collect(),
        pools,
        pivot: 0,
        bound_constant: ratio::one(),
        effect_lower: chi / max_theta,
        effect_upper: ratio::one(),
        round_budget: low.len().max(high.len()),
    };
    Engine::new(&c, initial, x.clone())?.run(&opts.tolerance, opts.depth_budget)
}
