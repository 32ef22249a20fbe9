use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "toricmle", version, about = "Maximum likelihood estimation for toric models")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Numerical tolerance; defaults depend on the command.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Seed for randomized checks.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Maximum likelihood estimates.
    #[command(subcommand)]
    Mle(MleCommand),
    /// The sixteen toric del Pezzo surfaces.
    Catalog {
        #[arg(long)]
        label: Option<String>,
    },
    /// Discriminants and singular points.
    #[command(subcommand)]
    Discriminant(DiscriminantCommand),
    /// Generators of toric ideals.
    #[command(subcommand)]
    Generators(GeneratorsCommand),
    /// Horn matrix of a 3-valent tree.
    Horn {
        #[arg(long)]
        tree: PathBuf,
    },
    /// Run the built-in checks.
    Selftest {
        /// Only checks whose name contains this string.
        #[arg(long)]
        filter: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
pub enum MleCommand {
    /// Any log-linear model, by iterative scaling.
    Loglinear {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        max_iter: Option<usize>,
    },
    /// A catalog surface; closed form where available.
    Delpezzo {
        #[arg(long)]
        label: String,
        #[arg(long)]
        data: PathBuf,
    },
    /// A group-based binary tree model in Fourier coordinates.
    Phylo {
        #[arg(long)]
        tree: PathBuf,
        #[arg(long)]
        data: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Direct)]
        method: Method,
    },
    /// A codimension-zero toric fiber product.
    Tfp {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        data: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Direct,
    Horn,
    Tfp,
}

#[derive(Debug, Subcommand)]
pub enum DiscriminantCommand {
    /// Factors of the principal determinant of a scaled Veronese surface.
    Veronese {
        #[arg(long = "C", short = 'C')]
        c: PathBuf,
    },
    /// Whether theta is a singular point of f_c.
    CheckSingular {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        theta: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum GeneratorsCommand {
    /// Lift(F), Lift(G) and Quad for a graded configuration.
    Tfp {
        #[arg(long)]
        config: PathBuf,
        /// Generators of the first factor over its flattened variables.
        #[arg(long)]
        f: Option<PathBuf>,
        /// Generators of the second factor over its flattened variables.
        #[arg(long)]
        g: Option<PathBuf>,
    },
    /// Generators of a 3-valent tree model.
    Phylo {
        #[arg(long)]
        tree: PathBuf,
    },
}
