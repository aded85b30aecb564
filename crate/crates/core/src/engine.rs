//! The shift dynamics shared by every sum and product construction.
//!
//! Points live in two pools: `Inc` points are left endpoints that only
//! move up, `Dec` points are right endpoints that only move down. A first
//! move sends one point to the gap edge next to the exact preimage of the
//! target; every later round restores `|Δ| ≤ M·ρ^{n+1}` from
//! `|Δ| ≤ M·ρ^n` using single-step shifts at scale `n` (large) and `n+1`
//! (small), where `ρ = η₋` of the pivot parameter.

use std::collections::HashMap;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::c1_maps::PhiSpec;
use crate::cantor_model::{
    endpoint_value, locate_by, shift_at, CantorParams, EndpointAddress, LocateResult,
    Membership, Side,
};
use crate::error::{Error, Result};
use crate::parameters::shift_exponent;
use crate::ratio::{self, Ratio};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pool {
    Inc,
    Dec,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Aggregate {
    /// `Σ φ(v_j)`
    Sum { phi: PhiSpec },
    /// `∏ v_j`
    Product,
}

impl Aggregate {
    pub fn total(&self, values: &[Ratio]) -> Ratio {
        match self {
            Aggregate::Sum { phi } => values.iter().map(|v| phi.eval(v)).sum(),
            Aggregate::Product => values.iter().product(),
        }
    }
}

/// Everything needed to rerun or re-check a construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Construction {
    pub aggregate: Aggregate,
    /// Parameter of each point.
    #[serde(with = "ratio::serde_ratio_vec")]
    pub point_alphas: Vec<Ratio>,
    pub pools: Vec<Pool>,
    /// Index of the point whose parameter sets the bound ratio.
    pub pivot: usize,
    /// `M` in the bound `M·ρ^n`.
    #[serde(with = "ratio::serde_ratio")]
    pub bound_constant: Ratio,
    /// A single shift of size `δ` moves the aggregate by at least
    /// `effect_lower·δ` and at most `effect_upper·δ`.
    #[serde(with = "ratio::serde_ratio")]
    pub effect_lower: Ratio,
    #[serde(with = "ratio::serde_ratio")]
    pub effect_upper: Ratio,
    /// Maximum number of moves in one round.
    pub round_budget: usize,
}

impl Construction {
    pub fn params(&self) -> Result<Vec<CantorParams>> {
        self.point_alphas
            .iter()
            .map(|a| CantorParams::new(a.clone()))
            .collect()
    }

    pub fn bound_ratio(&self) -> Result<Ratio> {
        Ok(CantorParams::new(self.point_alphas[self.pivot].clone())?
            .eta_minus()
            .clone())
    }

    /// `M·ρ^n`
    pub fn bound(&self, n: usize) -> Result<Ratio> {
        Ok(&self.bound_constant * ratio::pow(&self.bound_ratio()?, n as u32))
    }

    /// Shift scale for point `j` matching pivot scale `l`.
    pub fn exponent(&self, j: usize, l: usize) -> Result<usize> {
        shift_exponent(&self.point_alphas[self.pivot], &self.point_alphas[j], l)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointRecord {
    #[serde(with = "ratio::serde_ratio")]
    pub alpha: Ratio,
    pub pool: Pool,
    pub address: EndpointAddress,
    #[serde(with = "ratio::serde_ratio")]
    pub value: Ratio,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Move {
    pub point: usize,
    pub from: EndpointAddress,
    pub to: EndpointAddress,
}

/// One round. Round 0 is the first move; later rounds start at `scale`
/// and end with `|delta_after| ≤ bound = M·ρ^{next_scale}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub round: usize,
    #[serde(with = "ratio::serde_ratio")]
    pub delta_before: Ratio,
    #[serde(with = "ratio::serde_ratio")]
    pub delta_after: Ratio,
    pub scale: usize,
    pub next_scale: usize,
    #[serde(with = "ratio::serde_ratio")]
    pub bound: Ratio,
    pub moves: Vec<Move>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub construction: Construction,
    #[serde(with = "ratio::serde_ratio")]
    pub x: Ratio,
    pub initial: Vec<EndpointAddress>,
    pub points: Vec<PointRecord>,
    #[serde(with = "ratio::serde_ratio")]
    pub residual: Ratio,
    #[serde(with = "ratio::serde_ratio")]
    pub certified_bound: Ratio,
    #[serde(with = "ratio::serde_ratio")]
    pub tolerance: Ratio,
    pub tolerance_met: bool,
    pub final_scale: usize,
    pub trace: Vec<TraceStep>,
}

impl Decomposition {
    /// `Δ` after each round, for trace comparisons.
    pub fn delta_sequence(&self) -> Vec<Ratio> {
        self.trace.iter().map(|s| s.delta_after.clone()).collect()
    }
}

pub struct Engine<'a> {
    c: &'a Construction,
    params: Vec<CantorParams>,
    addrs: Vec<EndpointAddress>,
    values: Vec<Ratio>,
    total: Ratio,
    x: Ratio,
    exponents: HashMap<(usize, usize), usize>,
}

impl<'a> Engine<'a> {
    pub fn new(c: &'a Construction, initial: Vec<EndpointAddress>, x: Ratio) -> Result<Self> {
        let params = c.params()?;
        if initial.len() != params.len() || c.pools.len() != params.len() {
            return Err(Error::Internal("construction sizes disagree".into()));
        }
        for (a, pool) in initial.iter().zip(&c.pools) {
            let want = match pool {
                Pool::Inc => Side::Left,
                Pool::Dec => Side::Right,
            };
            if a.side != want {
                return Err(Error::Internal(format!("initial address {a} is in the wrong pool")));
            }
        }
        let values: Vec<Ratio> = initial
            .iter()
            .zip(&params)
            .map(|(a, p)| endpoint_value(p, a))
            .collect();
        let total = c.aggregate.total(&values);
        Ok(Engine {
            c,
            params,
            addrs: initial,
            values,
            total,
            x,
            exponents: HashMap::new(),
        })
    }

    fn delta(&self) -> Ratio {
        &self.x - &self.total
    }

    /// Aggregate after replacing point `j`'s value by `v`.
    fn total_with(&self, j: usize, v: &Ratio) -> Ratio {
        match &self.c.aggregate {
            Aggregate::Sum { phi } => &self.total - phi.eval(&self.values[j]) + phi.eval(v),
            Aggregate::Product => &self.total / &self.values[j] * v,
        }
    }

    fn set(&mut self, j: usize, to: EndpointAddress) -> Move {
        let v = endpoint_value(&self.params[j], &to);
        self.total = self.total_with(j, &v);
        self.values[j] = v;
        let from = std::mem::replace(&mut self.addrs[j], to.clone());
        Move { point: j, from, to }
    }

    fn exponent(&mut self, j: usize, l: usize) -> Result<usize> {
        if let Some(&e) = self.exponents.get(&(j, l)) {
            return Ok(e);
        }
        let e = self.c.exponent(j, l)?;
        self.exponents.insert((j, l), e);
        Ok(e)
    }

    /// Largest `n ≥ from` (capped at `cap`) with `|Δ| ≤ M·ρ^n`.
    fn scale_for(&self, from: usize, cap: usize, round: usize) -> Result<usize> {
        let d = self.delta().abs();
        let rho = self.c.bound_ratio()?;
        let mut b = self.c.bound(from)?;
        if d > b {
            return Err(Error::BudgetViolation {
                round,
                detail: format!(
                    "|delta| = {} exceeds the scale-{from} bound {}",
                    ratio::fmt(&d),
                    ratio::fmt(&b)
                ),
            });
        }
        let mut n = from;
        loop {
            let next = &b * &rho;
            if n >= cap || d > next {
                return Ok(n);
            }
            b = next;
            n += 1;
        }
    }

    /// Smallest `n ≤ cap` with `M·ρ^n ≤ tolerance`, else `cap`.
    fn tolerance_scale(&self, tolerance: &Ratio, cap: usize) -> Result<usize> {
        let rho = self.c.bound_ratio()?;
        let mut b = self.c.bound_constant.clone();
        let mut n = 0;
        while n < cap && b > *tolerance {
            b *= &rho;
            n += 1;
        }
        Ok(n)
    }

    /// Sends the first `Dec` point (if `Δ < 0`) or the first `Inc` point
    /// (if `Δ > 0`) to the gap edge next to the exact preimage.
    fn first_move(&mut self, depth_budget: usize) -> Result<Move> {
        let pool = if self.delta().is_negative() {
            Pool::Dec
        } else {
            Pool::Inc
        };
        let j = self
            .c
            .pools
            .iter()
            .position(|p| *p == pool)
            .ok_or_else(|| Error::Internal(format!("no {pool:?} point to start from")))?;
        let cur = self.values[j].clone();
        let start = self.addrs[j].word.clone();
        let loc = match &self.c.aggregate {
            Aggregate::Sum { phi } => {
                let target = &self.x - (&self.total - phi.eval(&cur));
                locate_by(&self.params[j], &start, depth_budget, |v| phi.eval(v).cmp(&target))
            }
            Aggregate::Product => {
                let x0 = &self.x * &cur / &self.total;
                locate_by(&self.params[j], &start, depth_budget, |v| v.cmp(&x0))
            }
        }
        .map_err(|_| Error::Internal("first-move preimage left its segment".into()))?;
        let to = match (loc, pool) {
            (LocateResult::Member(Membership::Endpoint(a)), _) => a,
            (LocateResult::Gap(g), Pool::Dec) => EndpointAddress::right(g.word.child(false)),
            (LocateResult::Gap(g), Pool::Inc) => EndpointAddress::left(g.word.child(true)),
            (LocateResult::DepthExceeded { word }, Pool::Dec) => EndpointAddress::right(word),
            (LocateResult::DepthExceeded { word }, Pool::Inc) => EndpointAddress::left(word),
            (LocateResult::Member(Membership::Periodic { .. }), _) => {
                return Err(Error::Internal("unexpected periodic preimage".into()))
            }
        };
        Ok(self.set(j, to))
    }

    /// Candidate shift of point `j` at pivot scale `l`: the new address and
    /// the resulting `Δ`.
    fn look(&mut self, j: usize, l: usize) -> Result<(EndpointAddress, Ratio)> {
        let e = self.exponent(j, l)?;
        let (to, _) = shift_at(&self.params[j], &self.addrs[j], e)?;
        let v = endpoint_value(&self.params[j], &to);
        Ok((to, &self.x - self.total_with(j, &v)))
    }

    fn round(&mut self, n: usize, round: usize) -> Result<Vec<Move>> {
        let target = self.c.bound(n + 1)?;
        let mut used = vec![false; self.addrs.len()];
        let mut moves = Vec::new();
        let pool_of = |d: &Ratio| if d.is_positive() { Pool::Inc } else { Pool::Dec };

        // large shifts at scale n, never overshooting past −target
        let pool = pool_of(&self.delta());
        while self.delta().abs() > target {
            let mut applied = false;
            for j in 0..self.addrs.len() {
                if used[j] || self.c.pools[j] != pool || self.addrs[j].depth() > self.exponent(j, n)? {
                    continue;
                }
                let (to, d) = self.look(j, n)?;
                let signed = if pool == Pool::Inc { d.clone() } else { -d.clone() };
                if signed >= -target.clone() {
                    moves.push(self.set(j, to));
                    used[j] = true;
                    applied = true;
                    break;
                }
            }
            if !applied {
                break;
            }
        }

        // small shifts at scale n+1 in the direction of the current Δ
        while self.delta().abs() > target {
            let pool = pool_of(&self.delta());
            let mut applied = false;
            for j in 0..self.addrs.len() {
                if used[j]
                    || self.c.pools[j] != pool
                    || self.addrs[j].depth() > self.exponent(j, n + 1)?
                {
                    continue;
                }
                let (to, _) = self.look(j, n + 1)?;
                moves.push(self.set(j, to));
                used[j] = true;
                applied = true;
                break;
            }
            if !applied {
                return Err(Error::BudgetViolation {
                    round,
                    detail: format!(
                        "no {pool:?} point left at scale {}; |delta| = {} > {}",
                        n + 1,
                        ratio::fmt(&self.delta().abs()),
                        ratio::fmt(&target)
                    ),
                });
            }
        }
        if moves.len() > self.c.round_budget {
            return Err(Error::BudgetViolation {
                round,
                detail: format!(
                    "{} moves exceed the round budget {}",
                    moves.len(),
                    self.c.round_budget
                ),
            });
        }
        Ok(moves)
    }

    /// Runs the dynamics until `M·ρ^n ≤ tolerance`, `Δ = 0`, or
    /// `n = depth_budget`.
    pub fn run(mut self, tolerance: &Ratio, depth_budget: usize) -> Result<Decomposition> {
        if !tolerance.is_positive() {
            return Err(Error::Domain("tolerance must be positive".into()));
        }
        let initial = self.addrs.clone();
        let mut trace = Vec::new();
        let mut n = 0;
        if !self.delta().is_zero() {
            let before = self.delta();
            let mv = self.first_move(self.tolerance_scale(tolerance, depth_budget)? + 1)?;
            n = self.scale_for(0, depth_budget, 0)?;
            trace.push(TraceStep {
                round: 0,
                delta_before: before,
                delta_after: self.delta(),
                scale: 0,
                next_scale: n,
                bound: self.c.bound(n)?,
                moves: vec![mv],
            });
        }
        let mut round = 0;
        while !self.delta().is_zero() && self.c.bound(n)? > *tolerance && n < depth_budget {
            round += 1;
            let before = self.delta();
            let moves = self.round(n, round)?;
            let next = self.scale_for(n + 1, depth_budget.max(n + 1), round)?;
            trace.push(TraceStep {
                round,
                delta_before: before,
                delta_after: self.delta(),
                scale: n,
                next_scale: next,
                bound: self.c.bound(next)?,
                moves,
            });
            n = next;
        }
        let residual = self.delta();
        let certified_bound = if residual.is_zero() {
            Ratio::zero()
        } else {
            self.c.bound(n)?
        };
        let points = (0..self.addrs.len())
            .map(|j| PointRecord {
                alpha: self.c.point_alphas[j].clone(),
                pool: self.c.pools[j],
                address: self.addrs[j].clone(),
                value: self.values[j].clone(),
            })
            .collect();
        Ok(Decomposition {
            construction: self.c.clone(),
            x: self.x.clone(),
            initial,
            points,
            tolerance_met: certified_bound <= *tolerance,
            residual,
            certified_bound,
            tolerance: tolerance.clone(),
            final_scale: n,
            trace,
        })
    }
}
