mod commands;
mod genfile;
mod render;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "liftcheck", version, about = "Surjectivity checks for p-adic matrix groups from finite-level data")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Output format on stdout.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[arg(long, default_value_t = 1, global = true)]
    pub seed: u64,
    /// Worker threads; computations currently run on one.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..), global = true)]
    pub threads: u64,
    /// Largest group or coset space enumerated explicitly.
    #[arg(long, default_value_t = 5_000_000, value_parser = clap::value_parser!(u64).range(1..), global = true)]
    pub bound: u64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Galois ring parameters and element arithmetic.
    Ring(RingArgs),
    /// Group orders, generators and membership.
    Group(GroupArgs),
    /// Decide whether generators lift to the full p-adic group.
    LiftCheck(LiftArgs),
    /// Congruence-layer filtration of a generated subgroup.
    Layers(LayersArgs),
    /// Structural criteria and fixtures.
    Criteria(CriteriaArgs),
    /// Brute-force enumeration, composition factors and section search.
    Oracle(OracleArgs),
    /// Hyperelliptic curves: discriminants, Galois certificates, point counts.
    Curve(CurveArgs),
}

#[derive(Args, Debug)]
pub struct RingArgs {
    /// e.g. `W(p=2,r=2,n=3)`, `Z/81`, `F4`.
    #[arg(long)]
    pub ring: String,
    #[arg(long, value_enum)]
    pub op: Option<RingOpArg>,
    /// Element as an integer or a coefficient list `[a0,a1,...]`.
    #[arg(long)]
    pub a: Option<String>,
    #[arg(long)]
    pub b: Option<String>,
    /// Exponent for `pow`, target level for `reduce`.
    #[arg(long)]
    pub e: Option<u64>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum RingOpArg {
    Add,
    Sub,
    Mul,
    Inv,
    Pow,
    Teichmuller,
    Frobenius,
    Reduce,
    Valuation,
}

#[derive(Args, Debug)]
pub struct GroupArgs {
    #[command(subcommand)]
    pub action: GroupAction,
}

#[derive(Subcommand, Debug)]
pub enum GroupAction {
    /// Order and Lie data of a descriptor such as `GSp(4,W(p=2,r=1,n=2))`.
    Info {
        #[arg(long)]
        group: String,
    },
    /// Standard generators in generator-file format.
    Generators {
        #[arg(long)]
        group: String,
        /// Also write them to this generator file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Membership and multiplier of the matrices in a generator file.
    Member {
        #[arg(long)]
        group: String,
        #[arg(long)]
        generators: PathBuf,
    },
}

#[derive(Args, Debug)]
pub struct LiftArgs {
    #[arg(long)]
    pub group: String,
    /// Generator file; the standard generators when omitted.
    #[arg(long)]
    pub generators: Option<PathBuf>,
    /// FULL, TILDE, NORMAL_DERIVED, NORMAL_DERIVED_PRIME or THM_4_1.
    #[arg(long, default_value = "FULL")]
    pub mode: String,
    /// Asserted hypothesis; repeatable. Use `abelianization`, `ab-kernel`, `disjoint` or free text.
    #[arg(long = "hypothesis")]
    pub hypotheses: Vec<String>,
    /// Maximal Schreier word length.
    #[arg(long, default_value_t = 16, value_parser = clap::value_parser!(u64).range(1..))]
    pub word_budget: u64,
    /// Attach the index decomposition.
    #[arg(long)]
    pub with_index: bool,
}

#[derive(Args, Debug)]
pub struct LayersArgs {
    #[arg(long)]
    pub group: String,
    #[arg(long)]
    pub generators: Option<PathBuf>,
    #[arg(long, default_value_t = 16, value_parser = clap::value_parser!(u64).range(1..))]
    pub word_budget: u64,
    /// Include layer bases in the report.
    #[arg(long)]
    pub bases: bool,
}

#[derive(Args, Debug)]
pub struct CriteriaArgs {
    #[command(subcommand)]
    pub action: CriteriaAction,
}

#[derive(Subcommand, Debug)]
pub enum CriteriaAction {
    /// Conditions (i)-(v) for a bundled fixture or a field-level group descriptor.
    Check24 {
        #[arg(long, conflicts_with = "group")]
        fixture: Option<String>,
        #[arg(long)]
        group: Option<String>,
    },
    /// Semisimple criterion and exception lists for a descriptor.
    Check225 {
        #[arg(long)]
        group: String,
    },
    /// Print an exception list ("2.2.4", "2.2.5" or "2.3") at residue size q.
    Exceptions {
        #[arg(long)]
        list: String,
        #[arg(long)]
        q: u64,
    },
    /// List the bundled fixture ids.
    Fixtures,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    #[command(subcommand)]
    pub action: OracleAction,
}

#[derive(Subcommand, Debug)]
pub enum OracleAction {
    /// Enumerate <generators> (or the whole group) and report its order.
    Enumerate {
        #[arg(long)]
        group: String,
        #[arg(long)]
        generators: Option<PathBuf>,
    },
    /// Composition factors of <generators> (or the whole group).
    Factors {
        #[arg(long)]
        group: String,
        #[arg(long)]
        generators: Option<PathBuf>,
    },
    /// Search for a section of G(W_n) -> G(W_{n-1}), n the descriptor level.
    Section {
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 1 << 26, value_parser = clap::value_parser!(u64).range(1..))]
        node_budget: u64,
    },
    /// Generation properties of S inside a field-level group.
    Generation {
        #[arg(long)]
        group: String,
        #[arg(long)]
        generators: PathBuf,
    },
}

#[derive(Args, Debug)]
pub struct CurveArgs {
    #[command(subcommand)]
    pub action: CurveAction,
}

#[derive(Subcommand, Debug)]
pub enum CurveAction {
    /// Decide Im(rho_2) = GSp_2d(Z_2) for y^2 = f(x), deg f = 3d.
    Verdict {
        #[arg(long)]
        f: String,
        /// Do not assert that the curve is defined over Q.
        #[arg(long)]
        no_assert_q: bool,
        #[arg(long, default_value_t = 500, value_parser = clap::value_parser!(u64).range(1..))]
        primes: u64,
    },
    /// Discriminant and its squarefree part.
    Disc {
        #[arg(long)]
        f: String,
        #[arg(long, default_value_t = 2_000_000, value_parser = clap::value_parser!(u64).range(1..))]
        rho_budget: u64,
    },
    /// Galois certificate for degree 3 or 6.
    Certify {
        #[arg(long)]
        f: String,
        #[arg(long, default_value_t = 500, value_parser = clap::value_parser!(u64).range(1..))]
        primes: u64,
    },
    /// Point counts and L-polynomial at a prime.
    Count {
        #[arg(long)]
        f: String,
        #[arg(long)]
        l: u64,
    },
    /// Compare L mod 2 with Frobenius on the 2-torsion model at the good primes up to `max-l`.
    Mod2 {
        #[arg(long)]
        f: String,
        #[arg(long, default_value_t = 100)]
        max_l: u64,
    },
    /// Frobenius evidence table; `--plane` takes a homogeneous polynomial in x, y, z.
    Evidence {
        #[arg(long, required_unless_present = "plane")]
        f: Option<String>,
        #[arg(long, conflicts_with = "f")]
        plane: Option<String>,
        #[arg(long, default_value_t = 50)]
        max_l: u64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (doc, code) = commands::run(&cli);
    let body = match cli.global.format {
        Format::Json => serde_json::to_string_pretty(&doc).expect("report serializes") + "\n",
        Format::Text => render::text(&doc),
    };
    let _ = std::io::stdout().write_all(body.as_bytes());
    if let Some(err) = doc.get("error").and_then(|e| e.as_str()) {
        eprintln!("liftcheck: {err}");
    }
    ExitCode::from(code)
}
