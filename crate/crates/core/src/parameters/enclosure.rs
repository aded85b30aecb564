//! Certified rational enclosures of transcendental constants.
//!
//! `ln` and `e` are bracketed by truncated series with explicit tail
//! bounds, so every comparison made here is a theorem about rationals.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ratio::{self, Ratio};

const START_BITS: u32 = 64;
const MAX_BITS: u32 = 8192;

/// A real known to lie in `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApproxReal {
    #[serde(with = "ratio::serde_ratio")]
    pub lo: Ratio,
    #[serde(with = "ratio::serde_ratio")]
    pub hi: Ratio,
}

impl ApproxReal {
    pub fn exact(q: Ratio) -> Self {
        ApproxReal {
            lo: q.clone(),
            hi: q,
        }
    }

    pub fn value(&self) -> Ratio {
        (&self.lo + &self.hi) / ratio::int(2)
    }

    pub fn radius(&self) -> Ratio {
        (&self.hi - &self.lo) / ratio::int(2)
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, q: &Ratio) -> bool {
        self.lo <= *q && *q <= self.hi
    }

    /// Certified order of `q` against the enclosed real, `None` if `q`
    /// falls inside a non-degenerate enclosure.
    pub fn cmp_rational(&self, q: &Ratio) -> Option<Ordering> {
        if *q < self.lo {
            Some(Ordering::Less)
        } else if *q > self.hi {
            Some(Ordering::Greater)
        } else if self.is_exact() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn to_decimal(&self, digits: usize) -> String {
        ratio::to_decimal(&self.value(), digits)
    }
}

/// `10^-12`, the default enclosure radius.
pub fn default_radius() -> Ratio {
    Ratio::new(1.into(), num_traits::pow(num_bigint::BigInt::from(10), 12))
}

/// Bounds on `e` with error below `2^-bits`.
pub fn e_bounds(bits: u32) -> (Ratio, Ratio) {
    let eps = Ratio::new(1.into(), num_bigint::BigInt::one() << bits);
    let mut sum = Ratio::zero();
    let mut term = Ratio::one();
    let mut k = 0i64;
    loop {
        sum += &term;
        k += 1;
        term /= ratio::int(k);
        // tail after 1/(k-1)! is below 2/k!
        let tail = &term * ratio::int(2);
        if tail < eps {
            return (
                ratio::round_down(&sum, bits + 2),
                ratio::round_up(&(sum + tail), bits + 2),
            );
        }
    }
}

/// Bounds on `ln x` (x > 0) with error below `2^-bits`, from
/// `ln x = 2·artanh((x−1)/(x+1))`.
pub fn ln_bounds(x: &Ratio, bits: u32) -> (Ratio, Ratio) {
    assert!(x.is_positive(), "ln of a non-positive rational");
    let z = (x - ratio::one()) / (x + ratio::one());
    if z.is_zero() {
        return (Ratio::zero(), Ratio::zero());
    }
    let eps = Ratio::new(1.into(), num_bigint::BigInt::one() << bits);
    let z2 = &z * &z;
    let inv_one_minus = ratio::one() / (ratio::one() - &z2);
    let mut pow = z.clone();
    let mut sum = Ratio::zero();
    let mut k = 0i64;
    loop {
        sum += &pow / ratio::int(2 * k + 1);
        pow *= &z2;
        k += 1;
        let tail = pow.abs() / ratio::int(2 * k + 1) * &inv_one_minus * ratio::int(2);
        if tail < eps {
            let two_sum = sum * ratio::int(2);
            return (
                ratio::round_down(&(&two_sum - &tail), bits + 2),
                ratio::round_up(&(two_sum + tail), bits + 2),
            );
        }
    }
}

/// Root of `a^p · ln a = c / (2e)` for `a > 1`, `c > 0`, to `radius`.
fn solve_power_log(p: u32, c: &Ratio, radius: &Ratio) -> Result<ApproxReal> {
    if !c.is_positive() {
        return Err(Error::Domain(format!(
            "right-hand constant must be positive, got {}",
            ratio::fmt(c)
        )));
    }
    // sign of h(a) = a^p ln a − c/(2e), refined until certain
    let sign = |a: &Ratio| -> Result<Ordering> {
        let mut bits = START_BITS;
        while bits <= MAX_BITS {
            let (llo, lhi) = ln_bounds(a, bits);
            let (elo, ehi) = e_bounds(bits);
            let ap = ratio::pow(a, p);
            let (hlo, hhi) = (&ap * llo, &ap * lhi);
            let (tlo, thi) = (c / (ratio::int(2) * ehi), c / (ratio::int(2) * elo));
            if hlo > thi {
                return Ok(Ordering::Greater);
            }
            if hhi < tlo {
                return Ok(Ordering::Less);
            }
            bits *= 2;
        }
        Err(Error::Internal(format!(
            "sign of a^{p} ln a − c/(2e) unresolved at a = {}",
            ratio::fmt(a)
        )))
    };
    let mut lo = ratio::one();
    let mut hi = ratio::int(2);
    while sign(&hi)? != Ordering::Greater {
        lo = hi.clone();
        hi *= ratio::int(2);
    }
    let target = radius * ratio::int(2);
    while &hi - &lo > target {
        let mid = (&lo + &hi) / ratio::int(2);
        match sign(&mid)? {
            Ordering::Greater => hi = mid,
            _ => lo = mid,
        }
    }
    Ok(ApproxReal { lo, hi })
}

/// `a₀ > 1` with `a₀² ln a₀ = 1/(2e)`.
pub fn solve_a0() -> ApproxReal {
    solve_a0_to(&default_radius()).expect("a0 enclosure")
}

pub fn solve_a0_to(radius: &Ratio) -> Result<ApproxReal> {
    static DEFAULT: std::sync::OnceLock<ApproxReal> = std::sync::OnceLock::new();
    if *radius == default_radius() {
        if let Some(a) = DEFAULT.get() {
            return Ok(a.clone());
        }
        let a = solve_power_log(2, &ratio::one(), radius)?;
        return Ok(DEFAULT.get_or_init(|| a).clone());
    }
    solve_power_log(2, &ratio::one(), radius)
}

/// `a₁ > 1` with `a₁⁵ ln a₁ = β/(2e)`.
pub fn solve_a1(beta: &Ratio) -> Result<ApproxReal> {
    solve_a1_to(beta, &default_radius())
}

pub fn solve_a1_to(beta: &Ratio, radius: &Ratio) -> Result<ApproxReal> {
    solve_power_log(5, beta, radius)
}

/// `E(α) = 2 + η₊^m − 3·η₊^m·((3−α)/2)^m`, evaluated exactly.
pub fn e_alpha(alpha: &Ratio, m: u32) -> Ratio {
    let eta_p = ratio::pow(&((ratio::one() + alpha) / ratio::int(2)), m);
    let w = ratio::pow(&((ratio::int(3) - alpha) / ratio::int(2)), m);
    ratio::int(2) + &eta_p - ratio::int(3) * eta_p * w
}

/// Smallest `α ∈ (0, 1)` where `E(α)` changes sign, found on the grid
/// `i/grid` and refined by bisection. An exact rational root (checked via
/// the simplest fraction in the final bracket) is returned as a point.
pub fn alpha1_of_m(m: u32, grid: u32, radius: &Ratio) -> Result<ApproxReal> {
    if m == 0 || grid < 2 {
        return Err(Error::Domain("alpha1 needs m ≥ 1 and grid ≥ 2".into()));
    }
    let g = ratio::int(grid as i64);
    let mut prev_q = ratio::frac(1, grid as i64);
    let mut prev = ratio::sign(&e_alpha(&prev_q, m));
    if prev == Ordering::Equal {
        return Ok(ApproxReal::exact(prev_q));
    }
    for i in 2..grid {
        let q = ratio::int(i as i64) / &g;
        let s = ratio::sign(&e_alpha(&q, m));
        if s == Ordering::Equal {
            return Ok(ApproxReal::exact(q));
        }
        if s != prev {
            return Ok(bisect_root(m, prev_q, q, prev, radius));
        }
        prev = s;
        prev_q = q;
    }
    Err(Error::NoSolution(format!(
        "E(alpha) keeps one sign on the {grid}-point grid for m = {m}"
    )))
}

fn bisect_root(m: u32, mut lo: Ratio, mut hi: Ratio, lo_sign: Ordering, radius: &Ratio) -> ApproxReal {
    let target = radius * ratio::int(2);
    while &hi - &lo > target {
        let mid = (&lo + &hi) / ratio::int(2);
        let s = ratio::sign(&e_alpha(&mid, m));
        if s == Ordering::Equal {
            return ApproxReal::exact(mid);
        }
        if s == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let q = simplest_between(&lo, &hi);
    if e_alpha(&q, m).is_zero() {
        return ApproxReal::exact(q);
    }
    ApproxReal { lo, hi }
}

/// The fraction with the smallest denominator in `[lo, hi]`, `0 ≤ lo ≤ hi`.
pub fn simplest_between(lo: &Ratio, hi: &Ratio) -> Ratio {
    let fl = lo.floor();
    if fl == *lo {
        return fl;
    }
    if &fl + ratio::one() <= *hi {
        return fl + ratio::one();
    }
    // same integer part: recurse on reciprocals of fractional parts
    let inner = simplest_between(&(ratio::one() / (hi - &fl)), &(ratio::one() / (lo - &fl)));
    fl + ratio::one() / inner
}
