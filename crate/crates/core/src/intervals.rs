//! Certified intervals and interval families, all in exact rationals.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::cantor_model::CantorParams;
use crate::error::{Error, Result};
use crate::parameters::{
    self, check_descending, mixed_product_split, mixed_sum_split, product_counts, sum_counts,
    MixedSplit, ProductCounts, SumCounts,
};
use crate::ratio::{self, Ratio};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RatInterval {
    #[serde(with = "ratio::serde_ratio")]
    pub lo: Ratio,
    #[serde(with = "ratio::serde_ratio")]
    pub hi: Ratio,
}

impl RatInterval {
    pub fn new(lo: Ratio, hi: Ratio) -> Result<Self> {
        if lo > hi {
            return Err(Error::Internal(format!(
                "empty interval [{}, {}]",
                ratio::fmt(&lo),
                ratio::fmt(&hi)
            )));
        }
        Ok(RatInterval { lo, hi })
    }

    pub fn centered(center: &Ratio, half: &Ratio) -> Self {
        RatInterval {
            lo: center - half,
            hi: center + half,
        }
    }

    pub fn contains(&self, x: &Ratio) -> bool {
        self.lo <= *x && *x <= self.hi
    }

    pub fn length(&self) -> Ratio {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Ratio {
        (&self.lo + &self.hi) / ratio::int(2)
    }

    pub fn require(&self, x: &Ratio) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::OutOfInterval {
                x: ratio::fmt(x),
                lo: ratio::fmt(&self.lo),
                hi: ratio::fmt(&self.hi),
            })
        }
    }
}

impl std::fmt::Display for RatInterval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {}]", ratio::fmt(&self.lo), ratio::fmt(&self.hi))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classification {
    SingleInterval,
    DisjointUnion,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalFamily {
    pub members: Vec<(usize, RatInterval)>,
    pub merged: Vec<RatInterval>,
    pub classification: Classification,
    #[serde(with = "ratio::serde_ratio")]
    pub total_length: Ratio,
}

/// Union of closed intervals; touching intervals merge.
pub fn merge_closed(items: &[RatInterval]) -> Vec<RatInterval> {
    let mut v: Vec<RatInterval> = items.to_vec();
    v.sort_by(|a, b| a.lo.cmp(&b.lo));
    let mut out: Vec<RatInterval> = Vec::with_capacity(v.len());
    for it in v {
        match out.last_mut() {
            Some(last) if it.lo <= last.hi => {
                if it.hi > last.hi {
                    last.hi = it.hi;
                }
            }
            _ => out.push(it),
        }
    }
    out
}

impl IntervalFamily {
    pub fn from_members(members: Vec<(usize, RatInterval)>) -> Self {
        let items: Vec<RatInterval> = members.iter().map(|(_, i)| i.clone()).collect();
        let merged = merge_closed(&items);
        let total_length = merged.iter().map(RatInterval::length).sum();
        let classification = if merged.len() == 1 {
            Classification::SingleInterval
        } else {
            Classification::DisjointUnion
        };
        IntervalFamily {
            members,
            merged,
            classification,
            total_length,
        }
    }
}

fn half(c: &SumCounts) -> Ratio {
    ratio::int(c.half() as i64)
}

/// `S₁ = (r/2)η₊^m + r/2`, the starting sum of the basic construction.
pub fn lemma2_center(alpha: &Ratio, m: u32) -> Result<Ratio> {
    let c = sum_counts(alpha, m)?;
    let p = CantorParams::new(alpha.clone())?;
    let h = half(&c);
    Ok(&h * ratio::pow(p.eta_plus(), m) + h)
}

/// `[(r/2−1) + (r/2+1)η₊^m, (r/2+1) + (r/2−1)η₊^m]`.
pub fn lemma2_interval(alpha: &Ratio, m: u32) -> Result<RatInterval> {
    let p = CantorParams::new(alpha.clone())?;
    let eta_m = ratio::pow(p.eta_plus(), m);
    Ok(RatInterval::centered(
        &lemma2_center(alpha, m)?,
        &(ratio::one() - eta_m),
    ))
}

/// Which starting configuration a sum variant uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VariantFamily {
    /// `t` of the left points start at `η₊(3−α)/2`.
    Upper,
    /// `t` of the right points start at `(3+α²)/4`.
    Lower,
}

/// `v = η₊(3−α)/2` (upper) or `w = (3+α²)/4` (lower).
pub fn variant_anchor(p: &CantorParams, family: VariantFamily) -> Ratio {
    let a = p.alpha();
    match family {
        VariantFamily::Upper => p.eta_plus() * (ratio::int(3) - a) / ratio::int(2),
        VariantFamily::Lower => (ratio::int(3) + a * a) / ratio::int(4),
    }
}

/// Starting sum of the variant with `t` shifted points.
pub fn variant_center(alpha: &Ratio, m: u32, family: VariantFamily, t: usize) -> Result<Ratio> {
    let c = sum_counts(alpha, m)?;
    check_t(&c, t)?;
    let p = CantorParams::new(alpha.clone())?;
    let eta_m = ratio::pow(p.eta_plus(), m);
    let anchor_m = ratio::pow(&variant_anchor(&p, family), m);
    let h = half(&c);
    let tq = ratio::int(t as i64);
    Ok(match family {
        VariantFamily::Upper => (&h - &tq) * eta_m + &tq * anchor_m + h,
        VariantFamily::Lower => &h * eta_m + &tq * anchor_m + (h - tq),
    })
}

fn check_t(c: &SumCounts, t: usize) -> Result<()> {
    if t == 0 || t as u64 > c.half() {
        return Err(Error::Domain(format!(
            "variant index t = {t} outside 1..={}",
            c.half()
        )));
    }
    Ok(())
}

/// Half-width of every variant member: `1 − v^m` or `w^m − η₊^m`.
pub fn variant_half_width(alpha: &Ratio, m: u32, family: VariantFamily) -> Result<Ratio> {
    let p = CantorParams::new(alpha.clone())?;
    let anchor_m = ratio::pow(&variant_anchor(&p, family), m);
    Ok(match family {
        VariantFamily::Upper => ratio::one() - anchor_m,
        VariantFamily::Lower => anchor_m - ratio::pow(p.eta_plus(), m),
    })
}

pub fn variant_interval(
    alpha: &Ratio,
    m: u32,
    family: VariantFamily,
    t: usize,
) -> Result<RatInterval> {
    Ok(RatInterval::centered(
        &variant_center(alpha, m, family, t)?,
        &variant_half_width(alpha, m, family)?,
    ))
}

fn family(alpha: &Ratio, m: u32, fam: VariantFamily) -> Result<IntervalFamily> {
    let c = sum_counts(alpha, m)?;
    let members = (1..=c.half() as usize)
        .map(|t| Ok((t, variant_interval(alpha, m, fam, t)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(IntervalFamily::from_members(members))
}

/// The `I^(t)` family and its union `I′`.
pub fn thm3_family_upper(alpha: &Ratio, m: u32) -> Result<IntervalFamily> {
    family(alpha, m, VariantFamily::Upper)
}

/// The `I_(t)` family and its union `I″`. Classified by the exact union.
pub fn thm3_family_lower(alpha: &Ratio, m: u32) -> Result<IntervalFamily> {
    family(alpha, m, VariantFamily::Lower)
}

/// Consecutive upper members touch iff `2 + η₊^m ≥ 3η₊^m((3−α)/2)^m`.
pub fn upper_adjacency_holds(alpha: &Ratio, m: u32) -> bool {
    parameters::e_alpha(alpha, m) >= ratio::zero()
}

/// The published lower-family test `1 + w^m ≥ 2η₊^m`.
pub fn lower_adjacency_published(alpha: &Ratio, m: u32) -> Result<bool> {
    let p = CantorParams::new(alpha.clone())?;
    let w = ratio::pow(&variant_anchor(&p, VariantFamily::Lower), m);
    Ok(ratio::one() + w >= ratio::int(2) * ratio::pow(p.eta_plus(), m))
}

/// Consecutive lower members touch iff `3w^m ≥ 1 + 2η₊^m`: each step in
/// `t` moves the member left by `1 − w^m`.
pub fn lower_adjacency_exact(alpha: &Ratio, m: u32) -> Result<bool> {
    let p = CantorParams::new(alpha.clone())?;
    let w = ratio::pow(&variant_anchor(&p, VariantFamily::Lower), m);
    Ok(ratio::int(3) * w >= ratio::one() + ratio::int(2) * ratio::pow(p.eta_plus(), m))
}

/// Closed-form lengths of the family unions as published.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyLengths {
    /// `2 + (r/2−3)v^m − (r/2−1)η₊^m`, the merged upper union.
    #[serde(with = "ratio::serde_ratio")]
    pub upper_single: Ratio,
    /// `r(1 − v^m)`, the disjoint upper union.
    #[serde(with = "ratio::serde_ratio")]
    pub upper_disjoint: Ratio,
    /// `(r/2+1)w^m − 2η₊^m + (r/2−1)`, the lower union.
    #[serde(with = "ratio::serde_ratio")]
    pub lower_single: Ratio,
}

pub fn family_lengths(alpha: &Ratio, m: u32) -> Result<FamilyLengths> {
    let c = sum_counts(alpha, m)?;
    let p = CantorParams::new(alpha.clone())?;
    let h = half(&c);
    let r = ratio::int(c.r as i64);
    let eta_m = ratio::pow(p.eta_plus(), m);
    let v = ratio::pow(&variant_anchor(&p, VariantFamily::Upper), m);
    let w = ratio::pow(&variant_anchor(&p, VariantFamily::Lower), m);
    let one = ratio::one();
    Ok(FamilyLengths {
        upper_single: ratio::int(2) + (&h - ratio::int(3)) * &v - (&h - &one) * &eta_m,
        upper_disjoint: r * (&one - &v),
        lower_single: (&h + &one) * w - ratio::int(2) * eta_m + (h - one),
    })
}

/// Published length for the upper family under its classification.
pub fn upper_closed_form_length(alpha: &Ratio, m: u32) -> Result<Ratio> {
    let l = family_lengths(alpha, m)?;
    Ok(if upper_adjacency_holds(alpha, m) {
        l.upper_single
    } else {
        l.upper_disjoint
    })
}

/// Why a mixed-sum configuration is admissible.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum MixedSumCertificate {
    /// Both lists meet the split inequalities.
    Splits { alpha: MixedSplit, beta: MixedSplit },
    /// A single parameter throughout with at least `s + k` terms per list,
    /// so the single-set counts apply directly.
    EqualParameters { counts: SumCounts },
}

pub fn mixed_sum_certificate(
    alphas: &[Ratio],
    betas: &[Ratio],
    m: u32,
) -> Result<MixedSumCertificate> {
    check_descending(alphas, "alpha")?;
    check_descending(betas, "beta")?;
    if alphas[0] != betas[0] {
        return Err(Error::Precondition(format!(
            "leading parameters differ: {} vs {}",
            ratio::fmt(&alphas[0]),
            ratio::fmt(&betas[0])
        )));
    }
    let split = mixed_sum_split(alphas, m).and_then(|a| Ok((a, mixed_sum_split(betas, m)?)));
    match split {
        Ok((alpha, beta)) => Ok(MixedSumCertificate::Splits { alpha, beta }),
        Err(e) => {
            let a = &alphas[0];
            let uniform = alphas.iter().chain(betas).all(|b| b == a);
            if uniform {
                let counts = sum_counts(a, m)?;
                let need = counts.half() as usize;
                if alphas.len() >= need && betas.len() >= need {
                    return Ok(MixedSumCertificate::EqualParameters { counts });
                }
            }
            Err(e)
        }
    }
}

/// `S₁ = Σ η₊(α_i)^m + p`.
pub fn mixed_sum_center(alphas: &[Ratio], betas: &[Ratio], m: u32) -> Result<Ratio> {
    let mut acc = ratio::int(betas.len() as i64);
    for a in alphas {
        acc += ratio::pow(CantorParams::new(a.clone())?.eta_plus(), m);
    }
    Ok(acc)
}

/// `[S₁ − 1 + η₊(β₁)^m, S₁ + 1 − η₊(α₁)^m]`; swap the lists for the
/// role-swapped interval.
pub fn thm4_interval(alphas: &[Ratio], betas: &[Ratio], m: u32) -> Result<RatInterval> {
    mixed_sum_certificate(alphas, betas, m)?;
    let center = mixed_sum_center(alphas, betas, m)?;
    let eta_a = ratio::pow(CantorParams::new(alphas[0].clone())?.eta_plus(), m);
    let eta_b = ratio::pow(CantorParams::new(betas[0].clone())?.eta_plus(), m);
    RatInterval::new(
        &center - ratio::one() + eta_b,
        center + ratio::one() - eta_a,
    )
}

/// `[θ^{t+1}, θ^{t−1}]`.
pub fn thm5_interval(alpha: &Ratio) -> Result<(RatInterval, ProductCounts)> {
    let pc = product_counts(alpha)?;
    let lo = ratio::pow(&pc.theta, (pc.t + 1) as u32);
    let hi = ratio::pow(&pc.theta, (pc.t - 1) as u32);
    Ok((RatInterval::new(lo, hi)?, pc))
}

/// Memoised `θ_α` lookups.
#[derive(Debug, Default)]
pub struct ThetaTable(HashMap<Ratio, ProductCounts>);

impl ThetaTable {
    pub fn counts(&mut self, a: &Ratio) -> Result<&ProductCounts> {
        if !self.0.contains_key(a) {
            let pc = product_counts(a)?;
            self.0.insert(a.clone(), pc);
        }
        Ok(&self.0[a])
    }

    pub fn theta(&mut self, a: &Ratio) -> Result<Ratio> {
        Ok(self.counts(a)?.theta.clone())
    }

    pub fn product(&mut self, list: &[Ratio]) -> Result<Ratio> {
        let mut acc = ratio::one();
        for a in list {
            acc *= self.theta(a)?;
        }
        Ok(acc)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Thm6Intervals {
    #[serde(with = "ratio::serde_ratio")]
    pub chi: Ratio,
    pub split_alpha: MixedSplit,
    pub split_beta: MixedSplit,
    /// `[∏θ_β · θ_{α₁}, ∏_{i≥2}θ_β]`
    pub interval1: RatInterval,
    /// `[∏θ_α · θ_{β₁}, ∏_{i≥2}θ_α]`
    pub interval2: RatInterval,
}

/// The two mixed-product intervals, computed without the split check.
pub fn thm6_interval_pair(
    alphas: &[Ratio],
    betas: &[Ratio],
    table: &mut ThetaTable,
) -> Result<(RatInterval, RatInterval)> {
    let ta1 = table.theta(&alphas[0])?;
    let tb1 = table.theta(&betas[0])?;
    let i1 = RatInterval::new(table.product(betas)? * ta1, table.product(&betas[1..])?)?;
    let i2 = RatInterval::new(table.product(alphas)? * tb1, table.product(&alphas[1..])?)?;
    Ok((i1, i2))
}

pub fn thm6_intervals(alphas: &[Ratio], betas: &[Ratio]) -> Result<Thm6Intervals> {
    check_descending(alphas, "alpha")?;
    check_descending(betas, "beta")?;
    if alphas[0] != betas[0] {
        return Err(Error::Precondition(format!(
            "leading parameters differ: {} vs {}",
            ratio::fmt(&alphas[0]),
            ratio::fmt(&betas[0])
        )));
    }
    let mut table = ThetaTable::default();
    let chi = table.product(alphas)? * table.product(betas)?;
    let split_alpha = mixed_product_split(&chi, alphas, &alphas[0])?;
    let split_beta = mixed_product_split(&chi, betas, &betas[0])?;
    let (interval1, interval2) = thm6_interval_pair(alphas, betas, &mut table)?;
    Ok(Thm6Intervals {
        chi,
        split_alpha,
        split_beta,
        interval1,
        interval2,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaSplitIntervals {
    #[serde(with = "ratio::serde_ratio")]
    pub chi1: Ratio,
    #[serde(with = "ratio::serde_ratio")]
    pub chi2: Ratio,
    pub i1: RatInterval,
    pub i2: RatInterval,
    pub i3: RatInterval,
    pub i4: RatInterval,
    /// `None` when `I₁`, `I₂` are certified, else the violated constraint.
    pub infeasible_12: Option<String>,
    pub infeasible_34: Option<String>,
}

fn split_diag(r: Result<MixedSplit>) -> Option<String> {
    r.err().map(|e| e.to_string())
}

/// Intervals for a descending sequence partitioned into `alphas` and
/// `betas`, with `A = {α ≤ β₁}` and `B = {β ≤ α₁}`.
pub fn gamma_split_intervals(alphas: &[Ratio], betas: &[Ratio]) -> Result<GammaSplitIntervals> {
    check_descending(alphas, "alpha")?;
    check_descending(betas, "beta")?;
    let (a1, b1) = (&alphas[0], &betas[0]);
    let set_a: Vec<Ratio> = alphas.iter().filter(|a| *a <= b1).cloned().collect();
    let set_b: Vec<Ratio> = betas.iter().filter(|b| *b <= a1).cloned().collect();
    let mut table = ThetaTable::default();
    let prod_a = table.product(&set_a)?;
    let prod_b = table.product(&set_b)?;
    let chi1 = &prod_a * table.product(betas)?;
    let chi2 = &prod_b * table.product(alphas)?;
    let i1 = RatInterval::new(&prod_a * table.theta(b1)?, prod_a.clone())?;
    let i2 = RatInterval::new(table.product(betas)?, table.product(&betas[1..])?)?;
    let i3 = RatInterval::new(&prod_b * table.theta(a1)?, prod_b.clone())?;
    let i4 = RatInterval::new(table.product(alphas)?, table.product(&alphas[1..])?)?;
    let infeasible_12 = split_diag(mixed_product_split(&chi1, &set_a, b1))
        .or_else(|| split_diag(mixed_product_split(&chi1, betas, b1)));
    let infeasible_34 = split_diag(mixed_product_split(&chi2, &set_b, a1))
        .or_else(|| split_diag(mixed_product_split(&chi2, alphas, a1)));
    Ok(GammaSplitIntervals {
        chi1,
        chi2,
        i1,
        i2,
        i3,
        i4,
        infeasible_12,
        infeasible_34,
    })
}

#[cfg(test)]
#[path = "intervals_tests.rs"]
mod tests;
