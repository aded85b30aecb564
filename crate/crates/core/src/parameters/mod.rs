//! Term counts, transcendental constants, split searches and shift
//! exponent schedules.

mod enclosure;

pub use enclosure::{
    alpha1_of_m, default_radius, e_alpha, e_bounds, ln_bounds, simplest_between, solve_a0,
    solve_a0_to, solve_a1, solve_a1_to, ApproxReal,
};

use serde::{Deserialize, Serialize};

use crate::cantor_model::CantorParams;
use crate::error::{Error, Result};
use crate::ratio::{self, Ratio};

pub const DEFAULT_T_MAX: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SumCounts {
    pub s: u64,
    pub k: u64,
    pub r: u64,
}

impl SumCounts {
    pub fn half(&self) -> u64 {
        self.r / 2
    }
}

/// Counts from the derivative ratio `q = g₂/g₁ ∈ (0, 1]`:
/// `s = ⌈1/q⌉`, and for `α > 1/3`, `k = ⌈((3α−1)/2) / (q·(1−α²)/4)⌉`.
pub fn counts_from_derivative_ratio(alpha: &Ratio, q: &Ratio) -> SumCounts {
    let s = ratio::ceil_to_u64(&(ratio::one() / q));
    let k = if *alpha <= ratio::frac(1, 3) {
        0
    } else {
        let num = (ratio::int(3) * alpha - ratio::one()) / ratio::int(2);
        let den = q * (ratio::one() - alpha * alpha) / ratio::int(4);
        ratio::ceil_to_u64(&(num / den))
    };
    SumCounts { s, k, r: 2 * s + 2 * k }
}

pub fn sum_counts(alpha: &Ratio, m: u32) -> Result<SumCounts> {
    let p = CantorParams::new(alpha.clone())?;
    if m == 0 {
        return Err(Error::Domain("m must be at least 1".into()));
    }
    Ok(counts_from_derivative_ratio(
        alpha,
        &ratio::pow(p.eta_plus(), m - 1),
    ))
}

/// Minimal `n ≥ l` with `η₋(α_j)^n η₊(α_j) ≤ η₋(α₁)^l η₊(α₁)`.
///
/// No `n < l` can satisfy it: `η₊(α_j)/η₊(α₁) > 1/2 > η₋(α₁)`.
pub fn shift_exponent(alpha_1: &Ratio, alpha_j: &Ratio, l: usize) -> Result<usize> {
    if alpha_j > alpha_1 {
        return Err(Error::Precondition(format!(
            "shift exponent needs alpha_j ≤ alpha_1, got {} > {}",
            ratio::fmt(alpha_j),
            ratio::fmt(alpha_1)
        )));
    }
    let p1 = CantorParams::new(alpha_1.clone())?;
    let pj = CantorParams::new(alpha_j.clone())?;
    let rhs = p1.step(l);
    let mut n = l;
    let mut lhs = pj.step(n);
    while lhs > rhs {
        lhs *= pj.eta_minus();
        n += 1;
    }
    Ok(n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MixedSplit {
    pub n1: usize,
    pub n2: usize,
}

impl MixedSplit {
    pub fn total(&self) -> usize {
        self.n1 + self.n2
    }
}

fn list_str(v: &[Ratio]) -> String {
    let items: Vec<String> = v.iter().map(ratio::fmt).collect();
    format!("({})", items.join(", "))
}

pub fn check_descending(v: &[Ratio], what: &str) -> Result<()> {
    if v.is_empty() {
        return Err(Error::Precondition(format!("{what} list is empty")));
    }
    if v.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::Precondition(format!(
            "{what} list {} is not weakly descending",
            list_str(v)
        )));
    }
    for a in v {
        CantorParams::new(a.clone())?;
    }
    Ok(())
}

/// Greedy minimal prefix: first `n1` terms of `w1` with sum `> rhs1`,
/// then the next `n2` terms of `w2` with sum `> 1`.
fn greedy_split(
    list: &[Ratio],
    w1: &[Ratio],
    rhs1: &Ratio,
    w2: &[Ratio],
    ineq1: &str,
    ineq2: &str,
) -> Result<MixedSplit> {
    let mut acc = ratio::zero();
    let mut n1 = 0;
    while acc <= *rhs1 {
        if n1 == w1.len() {
            return Err(Error::Infeasible {
                list: list_str(list),
                inequality: ineq1.into(),
                detail: format!(
                    "sum over all {} terms is {} ≤ {}",
                    n1,
                    ratio::fmt(&acc),
                    ratio::fmt(rhs1)
                ),
            });
        }
        acc += &w1[n1];
        n1 += 1;
    }
    let mut acc = ratio::zero();
    let mut n2 = 0;
    while acc <= ratio::one() {
        if n1 + n2 == w2.len() {
            return Err(Error::Infeasible {
                list: list_str(list),
                inequality: ineq2.into(),
                detail: format!(
                    "after n1 = {n1}, the remaining {n2} terms sum to {} ≤ 1",
                    ratio::fmt(&acc)
                ),
            });
        }
        acc += &w2[n1 + n2];
        n2 += 1;
    }
    Ok(MixedSplit { n1, n2 })
}

fn pivot_rhs(pivot: &Ratio) -> Ratio {
    (ratio::int(3) * pivot - ratio::one()) / (ratio::one() + pivot)
}

/// Split of a descending list for mixed sums of `m`-th powers.
pub fn mixed_sum_split(alphas: &[Ratio], m: u32) -> Result<MixedSplit> {
    check_descending(alphas, "parameter")?;
    let mut w1 = Vec::with_capacity(alphas.len());
    let mut w2 = Vec::with_capacity(alphas.len());
    for a in alphas {
        let p = CantorParams::new(a.clone())?;
        let lead = ratio::pow(p.eta_plus(), m - 1) * p.eta_minus();
        w1.push(&lead * p.eta_minus());
        w2.push(lead);
    }
    greedy_split(
        alphas,
        &w1,
        &pivot_rhs(&alphas[0]),
        &w2,
        "sum eta_+^(m-1) eta_-^2 > (3a1-1)/(1+a1)",
        "sum eta_+^(m-1) eta_- > 1",
    )
}

/// Split of a descending list for mixed products, weighted by `chi`.
pub fn mixed_product_split(chi: &Ratio, seq: &[Ratio], pivot: &Ratio) -> Result<MixedSplit> {
    check_descending(seq, "parameter")?;
    if *chi <= ratio::zero() || *chi > ratio::one() {
        return Err(Error::Domain(format!(
            "chi must lie in (0, 1], got {}",
            ratio::fmt(chi)
        )));
    }
    let mut w1 = Vec::with_capacity(seq.len());
    let mut w2 = Vec::with_capacity(seq.len());
    for a in seq {
        let p = CantorParams::new(a.clone())?;
        w1.push(chi * p.eta_minus() * p.eta_minus());
        w2.push(chi * p.eta_minus());
    }
    greedy_split(
        seq,
        &w1,
        &pivot_rhs(pivot),
        &w2,
        "chi sum eta_-^2 > (3a1-1)/(1+a1)",
        "chi sum eta_- > 1",
    )
}

/// `β_α = (1−α²)/(6α−1−α²)` for `α > 1/3`.
pub fn beta_alpha(alpha: &Ratio) -> Option<Ratio> {
    if *alpha <= ratio::frac(1, 3) {
        return None;
    }
    let a2 = alpha * alpha;
    Some((ratio::one() - &a2) / (ratio::int(6) * alpha - ratio::one() - a2))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductCounts {
    #[serde(with = "ratio::serde_ratio")]
    pub alpha: Ratio,
    pub k: u64,
    pub t: u64,
    pub s: u64,
    pub p: u64,
    #[serde(with = "ratio::serde_ratio")]
    pub theta: Ratio,
    #[serde(with = "crate::parameters::serde_opt_ratio")]
    pub beta: Option<Ratio>,
    /// `a₀` for `α ≤ 1/3`, `a₁(β)` otherwise.
    pub constant: ApproxReal,
}

pub(crate) mod serde_opt_ratio {
    use crate::ratio::{self, Ratio};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Option<Ratio>, s: S) -> Result<S::Ok, S::Error> {
        match q {
            Some(q) => s.serialize_some(&ratio::fmt(q)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Ratio>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| ratio::parse(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}

/// `θ = 1 − η₋^k`.
pub fn theta(alpha: &Ratio, k: u64) -> Result<Ratio> {
    let p = CantorParams::new(alpha.clone())?;
    Ok(ratio::one() - p.segment_width(k as usize))
}

/// Minimal `k` with `1/(1−η₋^k) ≤ a`, decided against an enclosure of `a`
/// that is tightened whenever the comparison is ambiguous.
fn minimal_k<F>(eta: &Ratio, mut enclose: F) -> Result<(u64, ApproxReal)>
where
    F: FnMut(&Ratio) -> Result<ApproxReal>,
{
    let mut radius = default_radius();
    let mut a = enclose(&radius)?;
    let mut k = 1u64;
    let mut pow = eta.clone();
    loop {
        let v = ratio::one() / (ratio::one() - &pow);
        let decided = loop {
            match a.cmp_rational(&v) {
                Some(o) => break o,
                None => {
                    radius = &radius * ratio::frac(1, 1 << 30);
                    if radius < Ratio::new(1.into(), num_bigint::BigInt::from(1) << 2000u32) {
                        return Err(Error::Internal(
                            "constant enclosure cannot separate 1/(1-eta^k)".into(),
                        ));
                    }
                    a = enclose(&radius)?;
                }
            }
        };
        if decided != std::cmp::Ordering::Greater {
            return Ok((k, a));
        }
        k += 1;
        pow *= eta;
    }
}

pub fn product_counts(alpha: &Ratio) -> Result<ProductCounts> {
    product_counts_with(alpha, DEFAULT_T_MAX)
}

pub fn product_counts_with(alpha: &Ratio, t_max: u64) -> Result<ProductCounts> {
    let params = CantorParams::new(alpha.clone())?;
    let beta = beta_alpha(alpha);
    let (k, constant) = match &beta {
        None => minimal_k(params.eta_minus(), solve_a0_to)?,
        Some(b) => minimal_k(params.eta_minus(), |r| solve_a1_to(b, r))?,
    };
    let th = ratio::one() - params.segment_width(k as usize);
    let (t, s, p) = product_t_scan(alpha, &th, &ratio::one(), beta.as_ref(), t_max)
        .map_err(|e| match e {
            Error::NoSolution(d) => Error::NoSolution(format!("{d} (k = {k})")),
            e => e,
        })?;
    Ok(ProductCounts {
        alpha: alpha.clone(),
        k,
        t,
        s,
        p,
        theta: th,
        beta,
        constant,
    })
}

/// Minimal `t` with `γX_t ≤ t < slack + γX_t`, `X_t = factor/base^{2t−1}`
/// (`γ = 1`, slack 1 without `β`; `γ = 1/β`, slack 2 with it), split as
/// `s = ⌈X_t⌉`, `p = t − s ≥ ⌈X_t·2(3α−1)/(1−α²)⌉`.
pub fn product_t_scan(
    alpha: &Ratio,
    base: &Ratio,
    factor: &Ratio,
    beta: Option<&Ratio>,
    t_max: u64,
) -> Result<(u64, u64, u64)> {
    let inv = ratio::one() / base;
    let inv2 = &inv * &inv;
    let (gamma, slack) = match beta {
        None => (ratio::one(), ratio::one()),
        Some(b) => (ratio::one() / b, ratio::int(2)),
    };
    let y_factor = ratio::int(2) * (ratio::int(3) * alpha - ratio::one())
        / (ratio::one() - alpha * alpha);
    let mut x = factor * &inv;
    for t in 1..=t_max {
        let tq = ratio::int(t as i64);
        let lower = &gamma * &x;
        if lower <= tq && tq < &lower + &slack {
            let s = ratio::ceil_to_u64(&x);
            let p = match beta {
                None => Some(0),
                Some(_) => {
                    let need = ratio::ceil_to_u64(&(&x * &y_factor));
                    t.checked_sub(s).filter(|&p| p >= need)
                }
            };
            if let Some(p) = p {
                if s + p == t {
                    return Ok((t, s, p));
                }
            }
        }
        // gamma·X grows by base^-2 per step; once above t with a faster
        // ratio than (t+1)/t it never comes back
        if lower > tq && inv2 >= ratio::frac(t as i64 + 1, t as i64) {
            break;
        }
        x *= &inv2;
    }
    Err(Error::NoSolution(format!(
        "no t ≤ {t_max} satisfies the product bracket for alpha = {}",
        ratio::fmt(alpha)
    )))
}

/// `χ = ∏ θ_{α_i} · ∏ θ_{β_i}` with per-parameter minimal `k`.
pub fn chi(alphas: &[Ratio], betas: &[Ratio]) -> Result<Ratio> {
    let mut acc = ratio::one();
    for a in alphas.iter().chain(betas) {
        acc *= product_counts(a)?.theta;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests;
