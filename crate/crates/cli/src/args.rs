use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::literal::SelfMapSpec;

/// Invariant distances, extremal discs and complex geodesics on the
/// tetrablock and the symmetrized bidisc.
///
/// Complex numbers are written `a`, `a+bi` or `bi`. Put `--` before
/// positional values that start with a minus sign and are not plain numbers.
/// The environment variable TETRA_DEFAULT_TOL overrides the default
/// classification tolerance.
#[derive(Debug, Parser)]
#[command(name = "tetra", version)]
pub struct Cli {
    /// Print the JSON report envelope instead of plain text.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify a point as interior, boundary or exterior (exit 0, 1, 2).
    Member(MemberArgs),
    /// Lower and upper bounds for the invariant distances between two points.
    Distance(DistanceArgs),
    /// Evaluate, verify or solve for complex geodesics.
    #[command(subcommand)]
    Geodesic(GeodesicCommand),
    /// Run the seeded verification suites.
    VerifyPaper(VerifyArgs),
    /// Tabulate a quantity over a parameter grid as CSV or JSON lines.
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Domain {
    Tetrablock,
    G2,
}

#[derive(Debug, Args)]
pub struct MemberArgs {
    pub domain: Domain,
    /// Point components (3 for the tetrablock, 2 for G2 as `s p`).
    #[arg(required = true, allow_negative_numbers = true)]
    pub components: Vec<String>,
    /// Boundary band half-width.
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct DistanceArgs {
    /// First tetrablock point, comma separated (`z1,z2,z3`).
    #[arg(allow_negative_numbers = true)]
    pub w: String,
    /// Second tetrablock point.
    #[arg(allow_negative_numbers = true)]
    pub z: String,
    /// Families for the Carathéodory lower bound (psi, psi-sigma, magic).
    #[arg(long, value_delimiter = ',', default_value = "psi,psi-sigma,magic")]
    pub lower_families: Vec<String>,
    /// Disc families for the Lempert upper bound (general, origin, cor43, product).
    #[arg(long, value_delimiter = ',', default_value = "general,origin,cor43,product")]
    pub upper_families: Vec<String>,
    /// Residual-evaluation allowance of the disc search.
    #[arg(long, default_value_t = tetrablock::geodesics::DEFAULT_SEARCH_BUDGET)]
    pub budget: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DiscKind {
    /// Geodesic through the origin.
    Origin,
    /// Geodesic-like disc with `ψ` in place of `λ` (needs --psi).
    General,
    /// Disc in the boundary.
    Boundary,
    /// Transported extremal `(f1/λ, f2, f3/λ)` of an origin geodesic.
    Transported,
}

#[derive(Debug, Args)]
pub struct DiscArgs {
    #[arg(long, value_enum, default_value = "tetrablock")]
    pub domain: Domain,
    #[arg(long, value_enum, default_value = "origin")]
    pub kind: DiscKind,
    /// The constant `C`; defaults to `-φ(0)`.
    #[arg(long = "C", allow_hyphen_values = true)]
    pub c: Option<f64>,
    /// `φ`: `id`, `const:<c>` or `zeros:<a1>,…[@scale]`; defaults to the constant `-C`.
    #[arg(long)]
    pub phi: Option<SelfMapSpec>,
    /// `ψ` for general discs, same syntax as --phi.
    #[arg(long)]
    pub psi: Option<SelfMapSpec>,
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub omega1: String,
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub omega2: String,
    /// Rotation of the G2 geodesic.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub omega: String,
    /// Follow the disc by the swap `(z1, z2, z3) ↦ (z2, z1, z3)`.
    #[arg(long)]
    pub swap: bool,
}

#[derive(Debug, Subcommand)]
pub enum GeodesicCommand {
    /// Evaluate a disc at given points, or on a polar sample grid.
    Eval {
        #[command(flatten)]
        disc: DiscArgs,
        /// Evaluation points (repeat or comma separate).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        lambda: Vec<String>,
        /// Angles per radius of the sample grid used without --lambda (radii 0.1, …, 0.9).
        #[arg(long, default_value_t = 16)]
        samples: usize,
    },
    /// Check that the disc stays in the domain and, where one is known, that its left inverse is exact.
    Verify {
        #[command(flatten)]
        disc: DiscArgs,
        /// Left-inverse tolerance.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Find an origin geodesic through a tetrablock point.
    Solve {
        /// Target point `z1,z2,z3`.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        /// Disc parameter at which the geodesic must hit the point.
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, default_value_t = 2)]
        max_degree: usize,
        #[arg(long, default_value_t = tetrablock::geodesics::DEFAULT_SOLVE_BUDGET)]
        budget: usize,
    },
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// `all` or a suite name.
    #[arg(long, default_value = "all")]
    pub suite: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Quantity {
    /// Ψ-family distance from the origin to an origin geodesic with constant `φ = -C`.
    #[value(name = "p-e", alias = "pe", alias = "p_e")]
    PE,
    /// Carathéodory lower bound, same grid as p-e.
    #[value(alias = "c_lower")]
    CLower,
    /// Disc-search upper bound against the closed form on pairs `(0,0,w)`, `(0,z,w)`.
    #[value(alias = "k_upper")]
    KUpper,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(value_enum)]
    pub quantity: Quantity,
    /// Grid of `C` (p-e, c-lower): `v` or `start:stop:step`.
    #[arg(long = "C", default_value = "0.05:0.95:0.05")]
    pub c: String,
    /// Disc parameter (p-e, c-lower).
    #[arg(long, default_value = "0.1", allow_hyphen_values = true)]
    pub lambda: String,
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub omega1: String,
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub omega2: String,
    /// Grid of real `z` (k-upper).
    #[arg(long, default_value = "0.1:0.4:0.1")]
    pub z: String,
    /// Grid of real `w` (k-upper).
    #[arg(long, default_value = "0:0.4:0.1", allow_hyphen_values = true)]
    pub w: String,
    #[arg(long, default_value_t = tetrablock::geodesics::DEFAULT_SEARCH_BUDGET)]
    pub budget: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "csv")]
    pub out: Format,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub output: Option<std::path::PathBuf>,
}
