use cantor_arith::intervals::RatInterval;
use cantor_arith::ratio::{frac, int};
use cantor_arith::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Criterion {
    pub id: u32,
    pub name: &'static str,
    checks: Vec<(String, bool, String)>,
}

impl Criterion {
    pub fn new(id: u32, name: &'static str) -> Self {
        Criterion {
            id,
            name,
            checks: Vec::new(),
        }
    }

    pub fn check(&mut self, name: impl Into<String>, ok: bool, detail: impl Into<String>) {
        self.checks.push((name.into(), ok, detail.into()));
    }

    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.1)
    }

    pub fn failure_summary(&self) -> String {
        let failed: Vec<String> = self
            .checks
            .iter()
            .filter(|c| !c.1)
            .map(|c| {
                if c.2.is_empty() {
                    c.0.clone()
                } else {
                    format!("{} ({})", c.0, c.2)
                }
            })
            .collect();
        if failed.is_empty() {
            format!(" {} checks", self.checks.len())
        } else {
            format!(" failed: {}", failed.join("; "))
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform on a grid of `1_000_003` steps across `iv`, endpoints included.
pub fn random_in(rng: &mut ChaCha8Rng, iv: &RatInterval) -> Ratio {
    const D: i64 = 1_000_003;
    let n = rng.gen_range(0..=D);
    &iv.lo + iv.length() * frac(n, D)
}

pub fn eta_minus(alpha: &Ratio) -> Ratio {
    (int(1) - alpha) / int(2)
}

pub const SUM_GRID: [(i64, i64); 4] = [(1, 4), (1, 3), (1, 2), (2, 3)];
