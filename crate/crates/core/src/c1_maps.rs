//! Increasing maps `φ` with exact rational evaluation, their derivative
//! bounds, and the counts and intervals for sums and products of
//! `φ`-images of Cantor points.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cantor_model::CantorParams;
use crate::error::{Error, Result};
use crate::intervals::RatInterval;
use crate::parameters::{self, counts_from_derivative_ratio, ProductCounts, SumCounts};
use crate::ratio::{self, Ratio};

pub use crate::sum_solver::decompose_c1_sum;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PhiSpec {
    /// `x ↦ x^m`
    Power(u32),
    /// `x ↦ a·x + b`, `a > 0`
    Affine(Ratio, Ratio),
    /// `x ↦ Σ c_i x^i`
    Poly(Vec<Ratio>),
}

pub fn phi_power(m: u32) -> PhiSpec {
    PhiSpec::Power(m)
}

pub fn phi_affine(a: Ratio, b: Ratio) -> PhiSpec {
    PhiSpec::Affine(a, b)
}

fn horner(c: &[Ratio], x: &Ratio) -> Ratio {
    c.iter().rev().fold(Ratio::zero(), |acc, ci| acc * x + ci)
}

fn derivative(c: &[Ratio]) -> Vec<Ratio> {
    c.iter()
        .enumerate()
        .skip(1)
        .map(|(i, ci)| ci * ratio::int(i as i64))
        .collect()
}

fn binom(n: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// Bernstein coefficients of `p` on `[lo, hi]`; all of one sign
/// certifies that sign for `p` on the whole interval.
fn bernstein(p: &[Ratio], lo: &Ratio, hi: &Ratio) -> Vec<Ratio> {
    if p.is_empty() {
        return Vec::new();
    }
    let d = p.len().saturating_sub(1);
    // coefficients of u ↦ p(lo + (hi−lo)u)
    let w = hi - lo;
    let mut shifted = vec![Ratio::zero(); p.len()];
    for (i, ci) in p.iter().enumerate() {
        // ci·(lo + w u)^i
        for j in 0..=i {
            let term = ci
                * Ratio::from_integer(binom(i, j))
                * ratio::pow(lo, (i - j) as u32)
                * ratio::pow(&w, j as u32);
            shifted[j] += term;
        }
    }
    (0..=d)
        .map(|i| {
            (0..=i)
                .map(|j| {
                    &shifted[j] * Ratio::new(binom(i, j), binom(d, j))
                })
                .sum()
        })
        .collect()
}

impl PhiSpec {
    pub fn eval(&self, x: &Ratio) -> Ratio {
        match self {
            PhiSpec::Power(m) => ratio::pow(x, *m),
            PhiSpec::Affine(a, b) => a * x + b,
            PhiSpec::Poly(c) => horner(c, x),
        }
    }

    pub fn label(&self) -> String {
        self.to_string()
    }

    /// `(g₂, g₁)` with `0 < g₂ ≤ φ′ ≤ g₁` on `[lo, hi]`, `0 < lo ≤ hi`.
    pub fn derivative_bounds(&self, lo: &Ratio, hi: &Ratio) -> Result<(Ratio, Ratio)> {
        if *lo <= ratio::zero() || lo > hi {
            return Err(Error::Domain(format!(
                "derivative bounds need 0 < lo ≤ hi, got [{}, {}]",
                ratio::fmt(lo),
                ratio::fmt(hi)
            )));
        }
        let (g2, g1) = match self {
            PhiSpec::Power(m) => {
                if *m == 0 {
                    return Err(Error::Domain("power map needs m ≥ 1".into()));
                }
                let mq = ratio::int(*m as i64);
                (&mq * ratio::pow(lo, m - 1), mq * ratio::pow(hi, m - 1))
            }
            PhiSpec::Affine(a, _) => (a.clone(), a.clone()),
            PhiSpec::Poly(c) => {
                let d1 = derivative(c);
                let d2 = derivative(&d1);
                let b = bernstein(&d2, lo, hi);
                let (at_lo, at_hi) = (horner(&d1, lo), horner(&d1, hi));
                if b.iter().all(|v| *v >= Ratio::zero()) {
                    (at_lo, at_hi)
                } else if b.iter().all(|v| *v <= Ratio::zero()) {
                    (at_hi, at_lo)
                } else {
                    return Err(Error::Domain(format!(
                        "cannot certify a monotone derivative for {self} on [{}, {}]",
                        ratio::fmt(lo),
                        ratio::fmt(hi)
                    )));
                }
            }
        };
        if g2 <= Ratio::zero() {
            return Err(Error::Domain(format!(
                "{self} is not strictly increasing on [{}, {}]",
                ratio::fmt(lo),
                ratio::fmt(hi)
            )));
        }
        Ok((g2, g1))
    }
}

impl fmt::Display for PhiSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PhiSpec::Power(m) => write!(f, "power:{m}"),
            PhiSpec::Affine(a, b) => write!(f, "affine:{},{}", ratio::fmt(a), ratio::fmt(b)),
            PhiSpec::Poly(c) => {
                let v: Vec<String> = c.iter().map(ratio::fmt).collect();
                write!(f, "poly:{}", v.join(","))
            }
        }
    }
}

impl FromStr for PhiSpec {
    type Err = Error;

    /// `power:m`, `affine:a,b`, or `poly:c0,c1,…`.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, args) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("map {s:?} is not kind:args")))?;
        let list = ratio::parse_list(args)?;
        match kind.trim() {
            "power" => {
                let m: u32 = args
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad power exponent {args:?}")))?;
                if m == 0 {
                    return Err(Error::Domain("power map needs m ≥ 1".into()));
                }
                Ok(PhiSpec::Power(m))
            }
            "affine" => match list.as_slice() {
                [a, b] if *a > Ratio::zero() => Ok(PhiSpec::Affine(a.clone(), b.clone())),
                [_, _] => Err(Error::Domain("affine map needs a > 0".into())),
                _ => Err(Error::Parse(format!("affine map needs a,b, got {args:?}"))),
            },
            "poly" if !list.is_empty() => Ok(PhiSpec::Poly(list)),
            _ => Err(Error::Parse(format!("unknown map {s:?}"))),
        }
    }
}

impl Serialize for PhiSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PhiSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `(g₂, g₁)` on the sum domain `[η₊, 1]`.
pub fn sum_derivative_bounds(alpha: &Ratio, phi: &PhiSpec) -> Result<(Ratio, Ratio)> {
    let p = CantorParams::new(alpha.clone())?;
    phi.derivative_bounds(p.eta_plus(), &ratio::one())
}

pub fn c1_sum_counts(alpha: &Ratio, phi: &PhiSpec) -> Result<SumCounts> {
    let (g2, g1) = sum_derivative_bounds(alpha, phi)?;
    Ok(counts_from_derivative_ratio(alpha, &(g2 / g1)))
}

/// `[(r/2−1)φ(1) + (r/2+1)φ(η₊), (r/2+1)φ(1) + (r/2−1)φ(η₊)]`.
pub fn c1_sum_interval(alpha: &Ratio, phi: &PhiSpec) -> Result<RatInterval> {
    let c = c1_sum_counts(alpha, phi)?;
    let p = CantorParams::new(alpha.clone())?;
    let h = ratio::int(c.half() as i64);
    let one = ratio::one();
    let (top, bottom) = (phi.eval(&one), phi.eval(p.eta_plus()));
    RatInterval::new(
        (&h - &one) * &top + (&h + &one) * &bottom,
        (&h + &one) * top + (h - one) * bottom,
    )
}

/// Product counts for `φ`-images: `t` scanned against
/// `X_t = (g₃/g₄)/φ(θ)^{2t−1}`, with `k` from the plain product counts.
pub fn c1_product_params(alpha: &Ratio, phi: &PhiSpec) -> Result<ProductCounts> {
    let base = parameters::product_counts(alpha)?;
    let phi_theta = phi.eval(&base.theta);
    if phi_theta <= Ratio::zero() || phi_theta >= ratio::one() {
        return Err(Error::Domain(format!(
            "need 0 < φ(θ) < 1, got {}",
            ratio::fmt(&phi_theta)
        )));
    }
    let (g4, g3) = phi.derivative_bounds(&base.theta, &ratio::one())?;
    let (t, s, p) = parameters::product_t_scan(
        alpha,
        &phi_theta,
        &(g3 / g4),
        base.beta.as_ref(),
        parameters::DEFAULT_T_MAX,
    )?;
    Ok(ProductCounts {
        t,
        s,
        p,
        theta: base.theta.clone(),
        ..base
    })
}

/// `[φ(θ)^{t+1}, φ(θ)^{t−1}]`.
pub fn c1_product_interval(alpha: &Ratio, phi: &PhiSpec) -> Result<RatInterval> {
    let pc = c1_product_params(alpha, phi)?;
    let b = phi.eval(&pc.theta);
    RatInterval::new(
        ratio::pow(&b, (pc.t + 1) as u32),
        ratio::pow(&b, (pc.t - 1) as u32),
    )
}

#[cfg(test)]
#[path = "c1_maps_tests.rs"]
mod tests;
