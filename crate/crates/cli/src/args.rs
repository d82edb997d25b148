use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rootcomp::series::Rational;
use rootcomp::type_a::{Coweight, PositiveRoot};

#[derive(Parser, Debug)]
#[command(name = "rootcomp", version, about = "Root components of tensor products via convolution varieties")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    JsonLines,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Check the two root-component conditions.
    Check(CaseArgs),
    /// Build the constructed points and verify their relative positions.
    Verify(CaseArgs),
    /// Orbit dimensions by tangent-space linear algebra.
    Orbitdim(CaseArgs),
    /// Try to certify that the two constructed orbits are disjoint.
    Disjoint(CaseArgs),
    /// Tensor product multiplicity of the root component.
    Mult(CaseArgs),
    /// Run every case of a battery file, one command line per line.
    Battery {
        file: PathBuf,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Check(_) => "check",
            Command::Verify(_) => "verify",
            Command::Orbitdim(_) => "orbitdim",
            Command::Disjoint(_) => "disjoint",
            Command::Mult(_) => "mult",
            Command::Battery { .. } => "battery",
        }
    }

    pub fn case_args(&self) -> Option<&CaseArgs> {
        match self {
            Command::Check(c) | Command::Verify(c) | Command::Orbitdim(c) | Command::Disjoint(c) | Command::Mult(c) => Some(c),
            Command::Battery { .. } => None,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExpectedVerdict {
    Disjoint,
    Unknown,
}

#[derive(Args, Debug, Clone, Default)]
pub struct CaseArgs {
    /// Rank: the group is PGL_{n+1}.
    #[arg(long)]
    pub n: Option<usize>,

    /// Dominant coweight, "fw:c1,..,cn" or "v:x1,..,x{n+1}".
    #[arg(long)]
    pub lambda: Option<Coweight>,

    #[arg(long)]
    pub mu: Option<Coweight>,

    /// Positive root alpha_p + ... + alpha_q, written "p..q".
    #[arg(long)]
    pub beta: Option<PositiveRoot>,

    #[arg(long = "N")]
    pub big_n: Option<i64>,

    /// Parameter of the rank-two family (a rational other than 0 and 1).
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<Rational>,

    /// Truncation order for the orbit-dimension engine.
    #[arg(long)]
    pub truncation_override: Option<usize>,

    /// Expected orbit dimension of the first constructed point.
    #[arg(long)]
    pub expect_dim: Option<i64>,

    /// Expected exact multiplicity.
    #[arg(long)]
    pub expect_mult: Option<u64>,

    /// Expected lower bound for the multiplicity.
    #[arg(long)]
    pub expect_mult_min: Option<u64>,

    #[arg(long, value_enum)]
    pub expect_verdict: Option<ExpectedVerdict>,
}
