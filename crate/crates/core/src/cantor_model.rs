//! Exact symbolic model of the central Cantor set `C_α`.
//!
//! `C_α` is built from `[0, 1]` by removing the open middle fraction `α`
//! of every segment at every level. A segment is named by a binary word
//! (`0` = left child, `1` = right child); its two endpoints are named by
//! an [`EndpointAddress`]. Every endpoint lies in `C_α`, so a point carried
//! as an address is a member by construction.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ratio::{self, Ratio};

/// Parameters of `C_α` with the two derived ratios
/// `η₊ = (1+α)/2` (offset of the right child) and
/// `η₋ = (1−α)/2` (per-level contraction).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CantorParams {
    alpha: Ratio,
    eta_plus: Ratio,
    eta_minus: Ratio,
}

impl CantorParams {
    pub fn new(alpha: Ratio) -> Result<Self> {
        if alpha <= ratio::zero() || alpha >= ratio::one() {
            return Err(Error::Domain(format!(
                "alpha must lie in (0, 1), got {}",
                ratio::fmt(&alpha)
            )));
        }
        let half = ratio::frac(1, 2);
        let eta_plus = (ratio::one() + &alpha) * &half;
        let eta_minus = (ratio::one() - &alpha) * &half;
        Ok(CantorParams {
            alpha,
            eta_plus,
            eta_minus,
        })
    }

    pub fn alpha(&self) -> &Ratio {
        &self.alpha
    }

    pub fn eta_plus(&self) -> &Ratio {
        &self.eta_plus
    }

    pub fn eta_minus(&self) -> &Ratio {
        &self.eta_minus
    }

    /// `η₋^level`, the width of every segment at `level`.
    pub fn segment_width(&self, level: usize) -> Ratio {
        ratio::pow(&self.eta_minus, level as u32)
    }

    /// `η₊·η₋^q`, the size of a single move at scale `q`.
    pub fn step(&self, q: usize) -> Ratio {
        &self.eta_plus * self.segment_width(q)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

/// A finite word over `{0, 1}`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<bool>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn ones(n: usize) -> Self {
        Word(vec![true; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn digits(&self) -> &[bool] {
        &self.0
    }

    pub fn push(&mut self, d: bool) {
        self.0.push(d);
    }

    pub fn child(&self, d: bool) -> Word {
        let mut w = self.clone();
        w.0.push(d);
        w
    }

    pub fn starts_with(&self, prefix: &Word) -> bool {
        self.0.starts_with(&prefix.0)
    }

    /// Flips the digit at `i` (used by tamper tests and negative controls).
    pub fn flip(&mut self, i: usize) {
        self.0[i] = !self.0[i];
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &d in &self.0 {
            f.write_str(if d { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::Parse(format!("word digit {c:?} not in {{0,1}}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

/// A segment endpoint: the left or right end of segment `A_word`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EndpointAddress {
    pub side: Side,
    pub word: Word,
}

impl EndpointAddress {
    pub fn left(word: Word) -> Self {
        EndpointAddress {
            side: Side::Left,
            word,
        }
    }

    pub fn right(word: Word) -> Self {
        EndpointAddress {
            side: Side::Right,
            word,
        }
    }

    pub fn depth(&self) -> usize {
        self.word.len()
    }
}

impl fmt::Display for EndpointAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.side {
            Side::Left => 'L',
            Side::Right => 'R',
        };
        write!(f, "{s}:{}", self.word)
    }
}

impl FromStr for EndpointAddress {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (side, word) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("address {s:?} is not of the form L:w / R:w")))?;
        let side = match side {
            "L" => Side::Left,
            "R" => Side::Right,
            _ => return Err(Error::Parse(format!("address side {side:?} is not L or R"))),
        };
        Ok(EndpointAddress {
            side,
            word: word.parse()?,
        })
    }
}

impl Serialize for EndpointAddress {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for EndpointAddress {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The open gap `O_word` removed from segment `A_word`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapLocation {
    pub word: Word,
    pub level: usize,
    pub left: Ratio,
    pub right: Ratio,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    /// The point is this segment endpoint.
    Endpoint(EndpointAddress),
    /// The rescaled descent state repeated: the address is
    /// `prefix` followed by `cycle` forever.
    Periodic { prefix: Word, cycle: Word },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LocateResult {
    Member(Membership),
    Gap(GapLocation),
    /// No gap, endpoint, or cycle within the depth limit; `word` names the
    /// deepest segment known to contain the point.
    DepthExceeded { word: Word },
}

/// Left end of segment `A_word`: `Σ_{i: w_i = 1} η₊·η₋^{i−1}`.
pub fn segment_left(params: &CantorParams, word: &Word) -> Ratio {
    let mut acc = Ratio::zero();
    let mut scale = Ratio::one();
    for &d in word.digits() {
        if d {
            acc += params.eta_plus() * &scale;
        }
        scale *= params.eta_minus();
    }
    acc
}

pub fn endpoint_value(params: &CantorParams, addr: &EndpointAddress) -> Ratio {
    let left = segment_left(params, &addr.word);
    match addr.side {
        Side::Left => left,
        Side::Right => left + params.segment_width(addr.word.len()),
    }
}

pub fn gap_of(params: &CantorParams, word: &Word) -> GapLocation {
    let left = endpoint_value(params, &EndpointAddress::right(word.child(false)));
    let right = endpoint_value(params, &EndpointAddress::left(word.child(true)));
    GapLocation {
        word: word.clone(),
        level: word.len(),
        left,
        right,
    }
}

/// Locates `x ∈ [0, 1]` by exact affine rescaling descent.
///
/// A repeated rescaled state proves membership with an eventually
/// periodic address.
pub fn locate(params: &CantorParams, x: &Ratio, max_depth: usize) -> Result<LocateResult> {
    if *x < ratio::zero() || *x > ratio::one() {
        return Err(Error::Domain(format!(
            "locate expects x in [0, 1], got {}",
            ratio::fmt(x)
        )));
    }
    let eta = params.eta_minus();
    let eta_p = params.eta_plus();
    let mut word = Word::empty();
    let mut y = x.clone();
    let mut seen: HashMap<Ratio, usize> = HashMap::new();
    loop {
        if y.is_zero() {
            return Ok(LocateResult::Member(Membership::Endpoint(
                EndpointAddress::left(word),
            )));
        }
        if y.is_one() {
            return Ok(LocateResult::Member(Membership::Endpoint(
                EndpointAddress::right(word),
            )));
        }
        if y > *eta && y < *eta_p {
            return Ok(LocateResult::Gap(gap_of(params, &word)));
        }
        if let Some(&at) = seen.get(&y) {
            let d = word.digits();
            return Ok(LocateResult::Member(Membership::Periodic {
                prefix: Word(d[..at].to_vec()),
                cycle: Word(d[at..].to_vec()),
            }));
        }
        if word.len() >= max_depth {
            return Ok(LocateResult::DepthExceeded { word });
        }
        seen.insert(y.clone(), word.len());
        if y <= *eta {
            y = &y / eta;
            word.push(false);
        } else {
            y = (&y - eta_p) / eta;
            word.push(true);
        }
    }
}

/// Locates the preimage of a target under an increasing map, starting at
/// segment `start`. `cmp(p)` must return the order of `φ(p)` against the
/// target. No cycle detection: the preimage need not be rational.
pub fn locate_by<F>(
    params: &CantorParams,
    start: &Word,
    max_depth: usize,
    cmp: F,
) -> Result<LocateResult>
where
    F: Fn(&Ratio) -> std::cmp::Ordering,
{
    use std::cmp::Ordering::*;
    let mut word = start.clone();
    let mut left = segment_left(params, &word);
    let lo_ord = cmp(&left);
    let hi_ord = cmp(&(&left + params.segment_width(word.len())));
    if lo_ord == Greater || hi_ord == Less {
        return Err(Error::Precondition(format!(
            "target preimage is outside segment {word}"
        )));
    }
    loop {
        let width = params.segment_width(word.len());
        let right = &left + &width;
        if cmp(&left) == Equal {
            return Ok(LocateResult::Member(Membership::Endpoint(
                EndpointAddress::left(word),
            )));
        }
        if cmp(&right) == Equal {
            return Ok(LocateResult::Member(Membership::Endpoint(
                EndpointAddress::right(word),
            )));
        }
        if word.len() >= max_depth {
            return Ok(LocateResult::DepthExceeded { word });
        }
        let child = &width * params.eta_minus();
        let gap_left = &left + &child;
        let gap_right = &right - &child;
        let gl = cmp(&gap_left);
        let gr = cmp(&gap_right);
        if gl == Less && gr == Greater {
            return Ok(LocateResult::Gap(GapLocation {
                level: word.len(),
                word,
                left: gap_left,
                right: gap_right,
            }));
        }
        if gl != Less {
            word.push(false);
        } else {
            word.push(true);
            left = gap_right;
        }
    }
}

/// Moves a left endpoint up to the left end of its right child.
/// Returns the new address and the increment `η₊·η₋^{|w|}`.
pub fn move_increase(
    params: &CantorParams,
    addr: &EndpointAddress,
) -> Result<(EndpointAddress, Ratio)> {
    if addr.side != Side::Left {
        return Err(Error::Precondition(format!(
            "move_increase needs a left endpoint, got {addr}"
        )));
    }
    let inc = params.step(addr.depth());
    Ok((EndpointAddress::left(addr.word.child(true)), inc))
}

/// Moves a right endpoint down to the right end of its left child.
/// Returns the new address and the decrement `η₊·η₋^{|w|}`.
pub fn move_decrease(
    params: &CantorParams,
    addr: &EndpointAddress,
) -> Result<(EndpointAddress, Ratio)> {
    if addr.side != Side::Right {
        return Err(Error::Precondition(format!(
            "move_decrease needs a right endpoint, got {addr}"
        )));
    }
    let dec = params.step(addr.depth());
    Ok((EndpointAddress::right(addr.word.child(false)), dec))
}

/// Value-preserving depth increase: left endpoints take the `0` child,
/// right endpoints the `1` child.
pub fn deepen(addr: &EndpointAddress) -> EndpointAddress {
    let digit = addr.side == Side::Right;
    EndpointAddress {
        side: addr.side,
        word: addr.word.child(digit),
    }
}

/// Deepens `addr` to depth `scale` and applies one move in its natural
/// direction (up for left endpoints, down for right endpoints).
/// The magnitude of the change is `η₊·η₋^scale`.
pub fn shift_at(
    params: &CantorParams,
    addr: &EndpointAddress,
    scale: usize,
) -> Result<(EndpointAddress, Ratio)> {
    if scale < addr.depth() {
        return Err(Error::Precondition(format!(
            "cannot shift {addr} at scale {scale} below its depth"
        )));
    }
    let mut a = addr.clone();
    while a.depth() < scale {
        a = deepen(&a);
    }
    match a.side {
        Side::Left => move_increase(params, &a),
        Side::Right => move_decrease(params, &a),
    }
}
