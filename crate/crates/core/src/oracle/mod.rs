//! Brute-force checks: finite-level set algebra over exact rational
//! intervals, coverage of interval claims, and decomposition replay.

use std::env;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::c1_maps::PhiSpec;
use crate::cantor_model::{segment_left, CantorParams, Word};
use crate::error::{Error, Result};
use crate::intervals::{merge_closed, RatInterval};
use crate::ratio::Ratio;

mod verify;

pub use verify::{verify_decomposition, VerifyReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    pub l_max: usize,
    pub part_cap: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            l_max: 12,
            part_cap: 1_000_000,
        }
    }
}

impl OracleConfig {
    /// Defaults overridden by `CANTOR_ARITH_LMAX` and `CANTOR_ARITH_PART_CAP`.
    pub fn from_env() -> Self {
        let mut c = OracleConfig::default();
        if let Some(v) = env::var("CANTOR_ARITH_LMAX").ok().and_then(|s| s.parse().ok()) {
            c.l_max = v;
        }
        if let Some(v) = env::var("CANTOR_ARITH_PART_CAP")
            .ok()
            .and_then(|s| s.parse().ok())
        {
            c.part_cap = v;
        }
        c
    }
}

/// Sorted, pairwise disjoint, non-touching closed intervals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalUnion {
    pub parts: Vec<RatInterval>,
}

impl IntervalUnion {
    pub fn from_parts(parts: &[RatInterval]) -> Self {
        IntervalUnion {
            parts: merge_closed(parts),
        }
    }

    pub fn single(i: RatInterval) -> Self {
        IntervalUnion { parts: vec![i] }
    }

    pub fn total_length(&self) -> Ratio {
        self.parts.iter().map(RatInterval::length).sum()
    }

    pub fn contains_point(&self, x: &Ratio) -> bool {
        let i = self.parts.partition_point(|p| p.hi < *x);
        i < self.parts.len() && self.parts[i].contains(x)
    }

    pub fn contains_interval(&self, t: &RatInterval) -> bool {
        self.parts.iter().any(|p| p.lo <= t.lo && t.hi <= p.hi)
    }

    /// Every part of `self` lies inside some part of `other`.
    pub fn is_subset_of(&self, other: &IntervalUnion) -> bool {
        self.parts.iter().all(|p| other.contains_interval(p))
    }

    /// Closures of the pieces of `target` not covered.
    pub fn uncovered(&self, target: &RatInterval) -> Vec<RatInterval> {
        let mut out = Vec::new();
        let mut cursor = target.lo.clone();
        let mut open = true;
        for p in &self.parts {
            if p.hi < cursor {
                continue;
            }
            if p.lo > target.hi {
                break;
            }
            if p.lo > cursor {
                out.push(RatInterval {
                    lo: cursor.clone(),
                    hi: p.lo.clone(),
                });
            }
            if p.hi >= target.hi {
                open = false;
                break;
            }
            cursor = p.hi.clone();
        }
        if open {
            out.push(RatInterval {
                lo: cursor,
                hi: target.hi.clone(),
            });
        }
        out
    }
}

/// The `2^l` segments of level `l`.
pub fn level_set(alpha: &Ratio, l: usize, cfg: &OracleConfig) -> Result<IntervalUnion> {
    if l > cfg.l_max {
        return Err(Error::Resource(format!(
            "level {l} exceeds the limit {}",
            cfg.l_max
        )));
    }
    let p = CantorParams::new(alpha.clone())?;
    let width = p.segment_width(l);
    let mut words = vec![Word::empty()];
    for _ in 0..l {
        words = words
            .into_iter()
            .flat_map(|w| [w.child(false), w.child(true)])
            .collect();
    }
    let parts = words
        .iter()
        .map(|w| {
            let lo = segment_left(&p, w);
            RatInterval {
                hi: &lo + &width,
                lo,
            }
        })
        .collect();
    Ok(IntervalUnion { parts })
}

fn check_increasing(phi: &PhiSpec, part: &RatInterval) -> Result<()> {
    let ok = match phi {
        PhiSpec::Power(_) => !part.lo.is_negative(),
        PhiSpec::Affine(a, _) => a.is_positive(),
        PhiSpec::Poly(_) => part.lo.is_positive() && phi.derivative_bounds(&part.lo, &part.hi).is_ok(),
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Domain(format!("{phi} is not certified increasing on {part}")))
    }
}

pub fn map_phi(u: &IntervalUnion, phi: &PhiSpec) -> Result<IntervalUnion> {
    let mut out = Vec::with_capacity(u.parts.len());
    for p in &u.parts {
        check_increasing(phi, p)?;
        out.push(RatInterval {
            lo: phi.eval(&p.lo),
            hi: phi.eval(&p.hi),
        });
    }
    Ok(IntervalUnion::from_parts(&out))
}

pub fn map_power(u: &IntervalUnion, m: u32) -> Result<IntervalUnion> {
    map_phi(u, &PhiSpec::Power(m))
}

fn check_cap(u: &IntervalUnion, v: &IntervalUnion, cap: usize) -> Result<()> {
    let n = u.parts.len().saturating_mul(v.parts.len());
    if n > cap {
        return Err(Error::Resource(format!(
            "{n} intermediate parts exceed the cap {cap}"
        )));
    }
    Ok(())
}

pub fn minkowski_sum_capped(u: &IntervalUnion, v: &IntervalUnion, cap: usize) -> Result<IntervalUnion> {
    check_cap(u, v, cap)?;
    let mut out = Vec::with_capacity(u.parts.len() * v.parts.len());
    for a in &u.parts {
        for b in &v.parts {
            out.push(RatInterval {
                lo: &a.lo + &b.lo,
                hi: &a.hi + &b.hi,
            });
        }
    }
    Ok(IntervalUnion::from_parts(&out))
}

pub fn minkowski_product_capped(
    u: &IntervalUnion,
    v: &IntervalUnion,
    cap: usize,
) -> Result<IntervalUnion> {
    check_cap(u, v, cap)?;
    if u.parts.iter().chain(&v.parts).any(|p| p.lo.is_negative()) {
        return Err(Error::Domain("minkowski product needs nonnegative parts".into()));
    }
    let mut out = Vec::with_capacity(u.parts.len() * v.parts.len());
    for a in &u.parts {
        for b in &v.parts {
            out.push(RatInterval {
                lo: &a.lo * &b.lo,
                hi: &a.hi * &b.hi,
            });
        }
    }
    Ok(IntervalUnion::from_parts(&out))
}

pub fn minkowski_sum(u: &IntervalUnion, v: &IntervalUnion) -> IntervalUnion {
    minkowski_sum_capped(u, v, usize::MAX).expect("uncapped")
}

/// Panics on negative parts.
pub fn minkowski_product(u: &IntervalUnion, v: &IntervalUnion) -> IntervalUnion {
    minkowski_product_capped(u, v, usize::MAX).expect("nonnegative parts")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoverageOp {
    /// `Σ φ(c_j)`
    Sum(PhiSpec),
    /// `∏ c_j`
    Product,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub target: RatInterval,
    pub level: usize,
    pub covered: bool,
    pub uncovered: Vec<RatInterval>,
    pub union_parts: usize,
}

/// Left fold of level-`l` sets, one per term, merged after each step.
pub fn fold_level_sets(
    terms: &[Ratio],
    op: &CoverageOp,
    l: usize,
    cfg: &OracleConfig,
) -> Result<IntervalUnion> {
    let mut acc: Option<IntervalUnion> = None;
    for a in terms {
        let base = level_set(a, l, cfg)?;
        let term = match op {
            CoverageOp::Sum(phi) => map_phi(&base, phi)?,
            CoverageOp::Product => base,
        };
        acc = Some(match acc {
            None => term,
            Some(u) => match op {
                CoverageOp::Sum(_) => minkowski_sum_capped(&u, &term, cfg.part_cap)?,
                CoverageOp::Product => minkowski_product_capped(&u, &term, cfg.part_cap)?,
            },
        });
    }
    acc.ok_or_else(|| Error::Domain("coverage needs at least one term".into()))
}

/// Whether `target` lies in the level-`l` outer approximation of
/// `{Σ φ(c_j)}` or `{∏ c_j}`, one term per entry of `terms`.
pub fn coverage_check(
    target: &RatInterval,
    terms: &[Ratio],
    op: &CoverageOp,
    l: usize,
    cfg: &OracleConfig,
) -> Result<CoverageReport> {
    Ok(coverage_of(target, &fold_level_sets(terms, op, l, cfg)?, l))
}

/// Coverage of `target` by an already folded union.
pub fn coverage_of(target: &RatInterval, u: &IntervalUnion, level: usize) -> CoverageReport {
    let uncovered: Vec<RatInterval> = u
        .uncovered(target)
        .into_iter()
        .filter(|g| !g.length().is_zero() || !u.contains_point(&g.lo))
        .collect();
    CoverageReport {
        target: target.clone(),
        level,
        covered: uncovered.is_empty(),
        uncovered,
        union_parts: u.parts.len(),
    }
}

#[cfg(test)]
mod tests;
