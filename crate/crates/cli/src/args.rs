use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "cubing", version, about = "Cube maps in finite groups and solution-free sets in cyclic groups")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Worker threads for parallel scans.
    #[arg(long, default_value_t = 1, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    pub jobs: u32,
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    /// Search node budget for the set solver and subgroup searches.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub budget: Option<u64>,
    /// Refuse automorphism groups larger than this.
    #[arg(long, default_value_t = 100_000, global = true)]
    pub aut_cap: usize,
    #[arg(long, env = "CUBING_CACHE_DIR", global = true)]
    pub cache_dir: Option<PathBuf>,
    #[arg(long, global = true, conflicts_with = "rebuild_cache")]
    pub no_cache: bool,
    #[arg(long, global = true)]
    pub rebuild_cache: bool,
    /// Check associativity on every triple, whatever the order.
    #[arg(long, global = true)]
    pub strict: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build, load and describe groups.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Sets of elements sent to their cubes.
    #[command(subcommand)]
    Cube(CubeCmd),
    /// Solution-free subsets of Z_n.
    #[command(subcommand)]
    Sfs(SfsCmd),
    /// Verification suites over the built-in catalog.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Exploratory searches.
    #[command(subcommand)]
    Search(SearchCmd),
}

#[derive(Subcommand, Debug)]
pub enum GroupCmd {
    /// Build a group from a builder name and parameters, e.g. `psl2 7` or `cyclic_semidirect 7 3 2`.
    Build {
        name: String,
        params: Vec<usize>,
        /// Write the Cayley table as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Load and validate a group file.
    Load { file: PathBuf },
    /// Structural summary of a file or built-in name.
    Info { group: String },
    /// List the built-in catalog.
    Catalog {
        #[arg(long, default_value_t = 360)]
        order_cap: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum CubeCmd {
    /// `T_{n,α}` for one automorphism (identity by default).
    Ratio {
        group: String,
        /// JSON array with the image of each element.
        #[arg(long, conflicts_with = "power")]
        aut_file: Option<PathBuf>,
        /// Use α = x ↦ x^k.
        #[arg(long, allow_hyphen_values = true)]
        power: Option<i64>,
        #[arg(long, default_value_t = 3, allow_hyphen_values = true)]
        exponent: i64,
    },
    /// Maximum ratio over all automorphisms.
    Max {
        group: String,
        #[arg(long, default_value_t = 3, allow_hyphen_values = true)]
        exponent: i64,
    },
    /// Structure verdict and the matching construction.
    Classify { group: String },
}

#[derive(Subcommand, Debug)]
pub enum SfsCmd {
    /// Largest solution-free subset of Z_n.
    T {
        n: usize,
        /// Equations as coefficient lists; defaults to 1,1,-2 and 1,2,-3.
        #[arg(long = "equation", allow_hyphen_values = true)]
        equations: Vec<String>,
    },
    /// T(n)/n for a range, compared against a bound.
    TauRange {
        lo: usize,
        hi: usize,
        #[arg(long, default_value = "4/17")]
        bound: String,
    },
    /// Recompute the reference table.
    Table,
    /// Every solution-free set of the given size.
    Extremal {
        n: usize,
        size: usize,
        /// List every 0-containing set instead of one per dilation class.
        #[arg(long)]
        raw: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum VerifyCmd {
    /// Structural lemmas over all automorphisms of small groups plus a seeded sample.
    Lemmas {
        #[arg(long, default_value_t = 360)]
        order_cap: usize,
        #[arg(long, default_value_t = 24)]
        exhaustive_cap: usize,
        #[arg(long, default_value_t = 500)]
        min_samples: usize,
    },
    /// Structure verdicts against brute-force maxima.
    Theorem31 {
        #[arg(long, default_value_t = 64)]
        order_cap: usize,
    },
    /// Maxima at 4/15 and solvability above it.
    SolvableBoundary {
        #[arg(long, default_value_t = 360)]
        order_cap: usize,
    },
    /// Largest abelian subgroups of L2(q).
    Table1 {
        #[arg(long, default_value_t = 13)]
        max_q: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum SearchCmd {
    /// Look for {a, b, ab, a^n b} inside T with [a,b] != 1.
    RemarkN {
        #[arg(allow_hyphen_values = true)]
        n: i64,
        #[arg(long, default_value_t = 48)]
        order_cap: usize,
    },
}
