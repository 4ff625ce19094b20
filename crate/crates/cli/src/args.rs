//! Command-line arguments.

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug, Clone)]
#[command(name = "heisenrig", version, about = "Exact verifiers for Heisenberg groups over finite rings")]
pub struct Cli {
    #[command(flatten)]
    pub config: RunArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    /// Ring spec, e.g. `Z/4`, `F2[t]/(t^2)`, `Z/2 x Z/3`.
    #[arg(long, global = true, default_value = "Z/4")]
    pub ring: String,
    /// Rank of the free module `R^n`.
    #[arg(long, global = true, default_value_t = 1)]
    pub n: usize,
    /// Pairing matrix: entries separated by commas, rows by `;`. A single
    /// entry `c` means `c * I`.
    #[arg(long, global = true, default_value = "1")]
    pub pairing: String,
    /// `auto` for the first generating character, or an exponent tuple.
    #[arg(long = "char", global = true, default_value = "auto")]
    pub character: String,
    /// Comma-separated models; `conjugated` alone uses `--seed`.
    #[arg(long, global = true, default_value = "schrodinger,induced,fourier,conjugated")]
    pub models: String,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Largest ring or group that may be enumerated.
    #[arg(long, global = true, env = "HEISENRIG_CAP_ELEMS")]
    pub cap_elems: Option<usize>,
    /// Largest group order for exhaustive pair checks.
    #[arg(long, global = true)]
    pub cap_pairs: Option<usize>,
    /// Largest additive degree searched for.
    #[arg(long, global = true)]
    pub cap_degree: Option<usize>,
    /// Largest representation dimension given to the solvers.
    #[arg(long, global = true)]
    pub cap_dim: Option<usize>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Parse and build a ring; report its order and additive structure.
    Ring {
        /// Also list every element.
        #[arg(long)]
        elements: bool,
    },
    /// Search for a generating character.
    Frobenius,
    /// Group axioms, Weyl relation, homomorphism property and centre.
    Group,
    /// Uniqueness of the Schrödinger representation across models.
    Svn,
    /// Defect invariants of a phase function `R^n -> R`.
    Defect {
        /// `square`, `power:<k>`, `linear:<b>`, `const:<c>`, or
        /// `table:<v0>;<v1>;...` with one value per element of `R^n`.
        #[arg(long, default_value = "square")]
        phase: String,
        #[arg(long, value_enum, default_value_t = TensorIndexArg::AdditiveDegree)]
        tensor_index: TensorIndexArg,
    },
    /// Induced filtration of the Schrödinger representation.
    Filtration {
        /// `fh`, or a JSON file listing `[degree, operator]` pairs where an
        /// operator is `"scalar"`, `"M:<y>"`, `"T:<x>"` or a matrix of strings.
        #[arg(long, default_value = "fh")]
        gens: String,
        #[arg(long, value_enum, default_value_t = ModeArg::Cyclic)]
        mode: ModeArg,
    },
    /// Orbit of the character `x -> eps(beta(y, x))` as `y` varies.
    Orbit,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum TensorIndexArg {
    AdditiveDegree,
    LiteralMin,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    /// Span of `T delta_0` for `T` in `P_k`.
    Cyclic,
    /// Sum of the images of `P_k`.
    Full,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Ring { .. } => "ring",
            Command::Frobenius => "frobenius",
            Command::Group => "group",
            Command::Svn => "svn",
            Command::Defect { .. } => "defect",
            Command::Filtration { .. } => "filtration",
            Command::Orbit => "orbit",
        }
    }
}
