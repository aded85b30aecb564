use cantor_arith::c1_maps::PhiSpec;
use cantor_arith::intervals::VariantFamily;
use cantor_arith::ratio;
use cantor_arith::Ratio;
use clap::{Args, Parser, Subcommand, ValueEnum};

fn fraction(s: &str) -> Result<Ratio, String> {
    ratio::parse(s).map_err(|e| e.to_string())
}

/// One comma-separated argument, not a repeated flag.
pub type FractionList = Vec<Ratio>;

fn fraction_list(s: &str) -> Result<FractionList, String> {
    let v = ratio::parse_list(s).map_err(|e| e.to_string())?;
    if v.is_empty() {
        return Err("empty list".into());
    }
    Ok(v)
}

fn phi(s: &str) -> Result<PhiSpec, String> {
    s.parse().map_err(|e: cantor_arith::Error| e.to_string())
}

#[derive(Parser, Debug)]
#[command(name = "cantor-arith", version, about = "Exact sums and products of central Cantor sets")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Term counts s, k, r for sums of m-th powers (or φ-images).
    ParamsSum {
        #[arg(long, value_parser = fraction)]
        alpha: Ratio,
        #[arg(long, default_value_t = 1)]
        m: u32,
        /// Map spec such as `power:2`, `affine:2,1`, `poly:0,1,1/2`.
        #[arg(long, value_parser = phi)]
        phi: Option<PhiSpec>,
    },
    /// Product counts k, t, s, p and θ.
    ParamsProduct {
        #[arg(long, value_parser = fraction)]
        alpha: Ratio,
        #[arg(long, value_parser = phi)]
        phi: Option<PhiSpec>,
    },
    /// Certified intervals.
    Interval {
        #[arg(value_enum)]
        kind: IntervalKind,
        #[command(flatten)]
        p: ParamArgs,
    },
    /// Decompose x and emit the certified decomposition.
    Decompose {
        #[arg(value_enum)]
        kind: DecomposeKind,
        #[command(flatten)]
        p: ParamArgs,
        #[arg(long, value_parser = fraction)]
        x: Ratio,
        #[command(flatten)]
        stop: StopArgs,
    },
    /// Independent checks.
    Verify {
        #[command(subcommand)]
        what: VerifyCommand,
    },
    /// Sign table of E(α) on a grid, one row per (m, α).
    Alpha1 {
        /// One or more exponents, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "1")]
        m: Vec<u32>,
        #[arg(long, default_value_t = 99)]
        grid: u32,
    },
    /// Decompose and verify seeded random x across an interval.
    Batch {
        #[arg(value_enum)]
        kind: DecomposeKind,
        #[command(flatten)]
        p: ParamArgs,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// x is sampled from the grid lo + (hi − lo)·j/denominator.
        #[arg(long, default_value_t = 1_000_003)]
        denominator: u64,
        #[command(flatten)]
        stop: StopArgs,
    },
}

#[derive(Subcommand, Debug)]
pub enum VerifyCommand {
    /// Re-check a decomposition JSON document (`-` reads stdin).
    Decomposition {
        input: String,
        /// Check against this x instead of the one in the document.
        #[arg(long, value_parser = fraction)]
        x: Option<Ratio>,
    },
    /// Check that [lo, hi] lies in the level-l Minkowski fold, for every
    /// level up to `--level`.
    Coverage {
        #[arg(long, value_parser = fraction)]
        lo: Ratio,
        #[arg(long, value_parser = fraction)]
        hi: Ratio,
        /// One parameter per term, e.g. `1/3*4`.
        #[arg(long, value_parser = fraction_list)]
        terms: FractionList,
        /// Fold by products instead of sums.
        #[arg(long)]
        product: bool,
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[arg(long, value_parser = phi)]
        phi: Option<PhiSpec>,
        #[arg(long, default_value_t = 4)]
        level: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntervalKind {
    Lemma2,
    Thm3,
    Thm4,
    Thm5,
    Thm6,
    Gamma,
    C1sum,
    C1prod,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecomposeKind {
    Sum,
    SumVariant,
    MixedSum,
    Product,
    MixedProduct,
    C1Sum,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Upper,
    Lower,
}

impl From<Family> for VariantFamily {
    fn from(f: Family) -> Self {
        match f {
            Family::Upper => VariantFamily::Upper,
            Family::Lower => VariantFamily::Lower,
        }
    }
}

#[derive(Args, Debug, Clone, Default)]
pub struct ParamArgs {
    #[arg(long, value_parser = fraction)]
    pub alpha: Option<Ratio>,
    #[arg(long)]
    pub m: Option<u32>,
    #[arg(long, value_parser = phi)]
    pub phi: Option<PhiSpec>,
    /// Descending list, e.g. `1/2,1/3*7`.
    #[arg(long, value_parser = fraction_list)]
    pub alphas: Option<FractionList>,
    #[arg(long, value_parser = fraction_list)]
    pub betas: Option<FractionList>,
    /// Variant member index.
    #[arg(long)]
    pub t: Option<usize>,
    #[arg(long, value_enum)]
    pub family: Option<Family>,
    /// Which mixed interval (1 or 2); for sums, 2 swaps the lists.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub which: u8,
}

#[derive(Args, Debug, Clone)]
pub struct StopArgs {
    /// Tolerance as an exact fraction.
    #[arg(long, value_parser = fraction, conflicts_with = "scale")]
    pub tol: Option<Ratio>,
    /// Tolerance M·η₋^scale in units of the certified bound.
    #[arg(long)]
    pub scale: Option<u32>,
    #[arg(long, default_value_t = 256)]
    pub depth_budget: usize,
}
