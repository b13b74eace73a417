use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use detcx_core::Field;

fn parse_field(s: &str) -> Result<Field, String> {
    s.parse().map_err(|e: detcx_core::Error| e.to_string())
}

#[derive(Parser, Debug)]
#[command(name = "detcx", version, about = "Determinantal complexity toolkit")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

/// Caps resolve as flag, then environment variable, then default.
#[derive(Args, Debug)]
pub struct Global {
    #[arg(long, global = true, value_enum, default_value = "text", env = "DETCX_FORMAT")]
    pub format: Format,
    /// Omit timing fields so identical runs give identical output.
    #[arg(long, global = true)]
    pub deterministic: bool,
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "DETCX_JOBS")]
    pub jobs: Option<usize>,
    /// Gröbner timeout in seconds.
    #[arg(long, global = true, env = "DETCX_TIMEOUT")]
    pub timeout: Option<f64>,
    /// Maximum number of S-pairs per Gröbner computation.
    #[arg(long, global = true, env = "DETCX_MAX_PAIRS")]
    pub max_pairs: Option<usize>,
    /// Maximum degree of a basis element.
    #[arg(long, global = true, env = "DETCX_MAX_DEGREE")]
    pub max_degree: Option<u32>,
    /// Largest matrix size expanded symbolically by Laplace.
    #[arg(long, global = true, env = "DETCX_LAPLACE_CAP")]
    pub laplace_cap: Option<usize>,
    /// Maximum candidate count for exhaustive search.
    #[arg(long, global = true, env = "DETCX_SEARCH_CAP")]
    pub search_cap: Option<u128>,
    /// Re-check every Gröbner basis (sampled S-pairs on large bases).
    #[arg(long, global = true)]
    pub check_basis: bool,
}

#[derive(Args, Debug)]
pub struct PolyArg {
    /// Polynomial, or one of perm2..perm6, det2..det5, cubic, fermat:d:n.
    #[arg(long)]
    pub poly: String,
    #[arg(long, value_parser = parse_field)]
    pub field: Option<Field>,
}

#[derive(Args, Debug)]
pub struct MapArg {
    /// Matrix-map JSON file.
    #[arg(long, conflicts_with = "catalog")]
    pub map: Option<PathBuf>,
    /// Catalog entry instead of a file.
    #[arg(long)]
    pub catalog: Option<String>,
    /// Target; defaults to the catalog entry's target.
    #[arg(long)]
    pub poly: Option<String>,
    /// Field for catalog entries, or reduction target for file maps over ℚ.
    #[arg(long, value_parser = parse_field)]
    pub field: Option<Field>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    Probabilistic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    Laplace,
    Berkowitz,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum System {
    Six,
    Degree3,
    Full,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse a polynomial and print its canonical form.
    Parse {
        #[command(flatten)]
        poly: PolyArg,
        /// Comma-separated variable order.
        #[arg(long)]
        vars: Option<String>,
    },
    /// Check det(L(x)) = f(x).
    Verify {
        #[command(flatten)]
        map: MapArg,
        #[arg(long, value_enum, default_value = "exact")]
        mode: Mode,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "laplace")]
        algorithm: Algorithm,
    },
    /// Codimension of the singular locus.
    Codim {
        #[command(flatten)]
        poly: PolyArg,
    },
    /// Lower-bound certificate dc(f) >= codim Sing(f) + 1.
    Certify {
        #[command(flatten)]
        poly: PolyArg,
    },
    /// Normalize an expression and run the checks of the lower-bound argument.
    Analyze {
        #[command(flatten)]
        map: MapArg,
    },
    /// Does the image of L meet the singular locus of the determinant?
    AvoidCheck {
        #[command(flatten)]
        map: MapArg,
        #[arg(long, value_enum, default_value = "exact")]
        mode: Mode,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Branching program for perm_n and its determinantal expression.
    Grenet {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = parse_field)]
        field: Option<Field>,
    },
    /// List catalog entries, or export one.
    Catalog {
        name: Option<String>,
        #[arg(long, value_parser = parse_field)]
        field: Option<Field>,
        /// Print only the matrix-map file.
        #[arg(long, requires = "name")]
        map_only: bool,
    },
    /// Coefficient equations of the rank-3 template for the cubic surface.
    CoeffEqs {
        #[arg(long, value_enum, default_value = "six")]
        system: System,
    },
    /// Consistency of the cubic-surface coefficient systems by case.
    CubicCase {
        #[arg(long, value_enum, value_delimiter = ',', default_values = ["six", "degree3", "full"])]
        systems: Vec<System>,
    },
    /// Exhaustive search for size-m expressions over a prime field.
    Search {
        #[command(flatten)]
        poly: PolyArg,
        #[arg(long)]
        m: usize,
        /// Enumerate every affine map instead of canonical forms.
        #[arg(long)]
        unrestricted: bool,
        #[arg(long)]
        max_results: Option<usize>,
    },
    /// Smallest expression size over a prime field.
    Dc {
        #[command(flatten)]
        poly: PolyArg,
        #[arg(long, default_value_t = 3)]
        m_max: usize,
    },
    /// Sample the singular codimension of random linear determinants.
    Bertini {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 101)]
        p: u64,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write the histogram as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Eliminate variables a linear map does not depend on.
    ConeReduce {
        #[arg(long)]
        map: PathBuf,
    },
}
