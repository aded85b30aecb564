//! Sums of `m`-th powers of Cantor points.
//!
//! `r/2` left endpoints start at `η₊` and only move up; `r/2` right
//! endpoints start at `1` and only move down. All arithmetic is exact.

use crate::c1_maps::{self, phi_power, PhiSpec};
use crate::cantor_model::{CantorParams, EndpointAddress, Word};
use crate::engine::{Aggregate, Construction, Decomposition, Engine, Pool};
use crate::error::{Error, Result};
use crate::intervals::{self, VariantFamily};
use crate::parameters::check_descending;
use crate::ratio::{self, Ratio};

/// Stopping rule shared by every solver.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOptions {
    pub tolerance: Ratio,
    pub depth_budget: usize,
}

impl SolveOptions {
    pub fn new(tolerance: Ratio, depth_budget: usize) -> Self {
        SolveOptions {
            tolerance,
            depth_budget,
        }
    }
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            tolerance: ratio::frac(1, 1_000_000_000_000),
            depth_budget: 256,
        }
    }
}

fn word(s: &str) -> Word {
    s.parse().expect("static word")
}

pub(crate) struct SumSetup {
    pub alphas: Vec<Ratio>,
    pub pools: Vec<Pool>,
    pub initial: Vec<EndpointAddress>,
}

impl SumSetup {
    /// `h` left endpoints at `L:1` then `h` right endpoints at `R:`.
    pub fn single(alpha: &Ratio, h: usize) -> Self {
        let mut s = SumSetup {
            alphas: vec![alpha.clone(); 2 * h],
            pools: vec![Pool::Inc; h],
            initial: vec![EndpointAddress::left(word("1")); h],
        };
        s.pools.extend(vec![Pool::Dec; h]);
        s.initial.extend(vec![EndpointAddress::right(Word::empty()); h]);
        s
    }

    pub fn run(
        self,
        phi: PhiSpec,
        pivot: usize,
        bounds: (Ratio, Ratio),
        x: &Ratio,
        opts: &SolveOptions,
    ) -> Result<Decomposition> {
        let inc = self.pools.iter().filter(|p| **p == Pool::Inc).count();
        let (g2, g1) = bounds;
        let c = Construction {
            aggregate: Aggregate::Sum { phi },
            point_alphas: self.alphas,
            round_budget: inc.max(self.pools.len() - inc),
            pools: self.pools,
            pivot,
            bound_constant: g1.clone(),
            effect_lower: g2,
            effect_upper: g1,
        };
        Engine::new(&c, self.initial, x.clone())?.run(&opts.tolerance, opts.depth_budget)
    }
}

/// Sum decomposition for a general increasing `φ` with the bound
/// schedule `g₁·η₋^l`.
pub fn decompose_c1_sum(
    alpha: &Ratio,
    phi: &PhiSpec,
    x: &Ratio,
    opts: &SolveOptions,
) -> Result<Decomposition> {
    c1_maps::c1_sum_interval(alpha, phi)?.require(x)?;
    let counts = c1_maps::c1_sum_counts(alpha, phi)?;
    let bounds = c1_maps::sum_derivative_bounds(alpha, phi)?;
    SumSetup::single(alpha, counts.half() as usize).run(phi.clone(), 0, bounds, x, opts)
}

/// `x = Σ_{j ≤ r} c_j^m` with every `c_j ∈ C_α`.
pub fn decompose_sum(alpha: &Ratio, m: u32, x: &Ratio, opts: &SolveOptions) -> Result<Decomposition> {
    decompose_c1_sum(alpha, &phi_power(m), x, opts)
}

/// As [`decompose_sum`] on a member of the upper or lower interval family.
pub fn decompose_sum_variant(
    alpha: &Ratio,
    m: u32,
    t: usize,
    family: VariantFamily,
    x: &Ratio,
    opts: &SolveOptions,
) -> Result<Decomposition> {
    intervals::variant_interval(alpha, m, family, t)?.require(x)?;
    let phi = phi_power(m);
    let h = c1_maps::c1_sum_counts(alpha, &phi)?.half() as usize;
    let mut setup = SumSetup::single(alpha, h);
    for j in 0..t {
        match family {
            VariantFamily::Upper => setup.initial[j] = EndpointAddress::left(word("11")),
            VariantFamily::Lower => setup.initial[h + j] = EndpointAddress::right(word("10")),
        }
    }
    let bounds = c1_maps::sum_derivative_bounds(alpha, &phi)?;
    setup.run(phi, 0, bounds, x, opts)
}

/// `x = Σ a_i^m + Σ b_j^m` with `a_i ∈ C_{α_i}`, `b_j ∈ C_{β_j}`.
pub fn decompose_mixed_sum(
    alphas: &[Ratio],
    betas: &[Ratio],
    m: u32,
    x: &Ratio,
    opts: &SolveOptions,
) -> Result<Decomposition> {
    check_descending(alphas, "alpha")?;
    check_descending(betas, "beta")?;
    intervals::thm4_interval(alphas, betas, m)?.require(x)?;
    let phi = phi_power(m);
    let lowest = alphas.iter().chain(betas).min().ok_or_else(|| {
        Error::Domain("empty parameter lists".into())
    })?;
    let lo = CantorParams::new(lowest.clone())?.eta_plus().clone();
    let bounds = phi.derivative_bounds(&lo, &ratio::one())?;
    let mut setup = SumSetup {
        alphas: alphas.iter().chain(betas).cloned().collect(),
        pools: vec![Pool::Inc; alphas.len()],
        initial: vec![EndpointAddress::left(word("1")); alphas.len()],
    };
    setup.pools.extend(vec![Pool::Dec; betas.len()]);
    setup
        .initial
        .extend(vec![EndpointAddress::right(Word::empty()); betas.len()]);
    setup.run(phi, 0, bounds, x, opts)
}
