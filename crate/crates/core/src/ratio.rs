//! Exact rational helpers.
//!
//! All set geometry and solver state in this crate is carried as
//! [`Ratio`], an arbitrary-precision rational in canonical reduced form.
//! Fractions are parsed from and printed as `p/q` strings; no binary
//! floating point ever feeds back into a computation.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Ratio = num_rational::BigRational;

pub fn int(n: i64) -> Ratio {
    Ratio::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Ratio {
    Ratio::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Ratio {
    Ratio::zero()
}

pub fn one() -> Ratio {
    Ratio::one()
}

/// Parses `p/q`, `p`, or a finite decimal like `0.25` exactly.
pub fn parse(s: &str) -> Result<Ratio> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not an exact fraction: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Ratio::new(n, d));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        if fp.is_empty() || !fp.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = ip.starts_with('-');
        let ip_abs = ip.trim_start_matches(['-', '+']);
        let whole: BigInt = if ip_abs.is_empty() {
            BigInt::zero()
        } else {
            ip_abs.parse().map_err(|_| bad())?
        };
        let fpart: BigInt = fp.parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), fp.len());
        let mag = Ratio::new(whole * &scale + fpart, scale);
        return Ok(if neg { -mag } else { mag });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Ratio::from_integer(n))
}

/// Parses a comma-separated list; `a*k` repeats `a` k times.
pub fn parse_list(s: &str) -> Result<Vec<Ratio>> {
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        match item.split_once(['*', 'x']) {
            Some((v, k)) => {
                let v = parse(v)?;
                let k: usize = k
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad repeat count in {item:?}")))?;
                out.extend(std::iter::repeat(v).take(k));
            }
            None => out.push(parse(item)?),
        }
    }
    Ok(out)
}

/// Canonical `p/q` form (`p` when the denominator is one).
pub fn fmt(q: &Ratio) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn pow(q: &Ratio, e: u32) -> Ratio {
    num_traits::pow(q.clone(), e as usize)
}

pub fn ceil_to_u64(q: &Ratio) -> u64 {
    let c = q.ceil().to_integer();
    u64::try_from(c).expect("ceiling does not fit in u64")
}

/// Decimal rendering with `digits` fractional digits, truncated toward zero.
/// Display only; never parsed back into a computation.
pub fn to_decimal(q: &Ratio, digits: usize) -> String {
    let neg = q.is_negative();
    let a = q.abs();
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = (a.numer() * &scale).div_floor(a.denom());
    let (ip, fp) = scaled.div_rem(&scale);
    let mut s = String::new();
    if neg {
        s.push('-');
    }
    s.push_str(&ip.to_string());
    if digits > 0 {
        let f = fp.to_string();
        s.push('.');
        s.push_str(&"0".repeat(digits - f.len()));
        s.push_str(&f);
    }
    s
}

pub fn to_f64(q: &Ratio) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}

/// Largest dyadic `k / 2^bits` not above `q`.
pub fn round_down(q: &Ratio, bits: u32) -> Ratio {
    let den = BigInt::one() << bits;
    let n = (q.numer() * &den).div_floor(q.denom());
    Ratio::new(n, den)
}

/// Smallest dyadic `k / 2^bits` not below `q`.
pub fn round_up(q: &Ratio, bits: u32) -> Ratio {
    let den = BigInt::one() << bits;
    let n = (q.numer() * &den).div_ceil(q.denom());
    Ratio::new(n, den)
}

pub fn sign(q: &Ratio) -> Ordering {
    q.cmp(&Ratio::zero())
}

/// Serde adapter: a [`Ratio`] as a `"p/q"` string.
pub mod serde_ratio {
    use super::Ratio;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Ratio, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::fmt(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Ratio, D::Error> {
        let s = String::deserialize(d)?;
        super::parse(&s).map_err(serde::de::Error::custom)
    }
}

pub mod serde_ratio_vec {
    use super::Ratio;
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Ratio], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for q in v {
            seq.serialize_element(&super::fmt(q))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Ratio>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| super::parse(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_integers_and_decimals() {
        assert_eq!(parse("2/4").unwrap(), frac(1, 2));
        assert_eq!(parse("-3").unwrap(), int(-3));
        assert_eq!(parse("0.25").unwrap(), frac(1, 4));
        assert_eq!(parse("-1.5").unwrap(), frac(-3, 2));
        assert!(parse("1/0").is_err());
        assert!(parse("abc").is_err());
        assert!(parse("1.").is_err());
    }

    #[test]
    fn list_with_repeats() {
        let v = parse_list("1/2, 1/3*3").unwrap();
        assert_eq!(v, vec![frac(1, 2), frac(1, 3), frac(1, 3), frac(1, 3)]);
    }

    #[test]
    fn formatting() {
        assert_eq!(fmt(&frac(6, 4)), "3/2");
        assert_eq!(fmt(&int(5)), "5");
        assert_eq!(to_decimal(&frac(1, 3), 5), "0.33333");
        assert_eq!(to_decimal(&frac(-1, 8), 3), "-0.125");
        assert_eq!(to_decimal(&frac(1, 100), 3), "0.010");
    }

    #[test]
    fn dyadic_rounding_brackets() {
        let q = frac(1, 3);
        let lo = round_down(&q, 20);
        let hi = round_up(&q, 20);
        assert!(lo <= q && q <= hi);
        assert!(&hi - &lo <= frac(1, 1 << 20));
    }
}
