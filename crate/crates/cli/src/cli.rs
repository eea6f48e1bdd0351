use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "archord", version, about = "Exact computations with Archimedean and circularly ordered groups")]
pub struct Cli {
    /// Declaration script replayed before the command; successful
    /// declarations are appended to it.
    #[arg(long, global = true, value_name = "FILE")]
    pub session: Option<PathBuf>,
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Enumeration height for searches and invariant fragments.
    #[arg(long, global = true, value_name = "K")]
    pub height: Option<u32>,
    /// Width bound for interval outputs, as an exact rational.
    #[arg(long, global = true, value_name = "RATIONAL")]
    pub eps: Option<String>,
    /// Largest power tried by separating-power scans.
    #[arg(long, global = true, value_name = "N")]
    pub cap: Option<u64>,
    /// Maximum refinement rounds per sign decision.
    #[arg(long = "refine-cap", global = true, value_name = "N")]
    pub refine_cap: Option<u32>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Symbol registry.
    #[command(subcommand)]
    Sym(SymCmd),
    /// Finitely generated subgroups of the reals.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Ordered groups Z^n or Q^n given by a type vector.
    #[command(subcommand)]
    Type(TypeCmd),
    /// Comparison in a typed ordered group.
    #[command(subcommand)]
    Order(OrderCmd),
    /// Enclose the real value of an element relative to a positive unit.
    Holder(HolderArgs),
    /// Decide isomorphism or embeddability.
    Decide(DecideArgs),
    /// Finite fragments of the rescaling invariant.
    #[command(subcommand)]
    Invariant(InvariantCmd),
    /// Fractional-linear action of GL2(Z).
    #[command(subcommand)]
    Gl2(Gl2Cmd),
    /// Finite colored linear orders.
    #[command(subcommand)]
    Clo(CloCmd),
    /// Ordered divisible groups built from colored linear orders.
    #[command(subcommand)]
    Odag(OdagCmd),
    /// The circle group with angles in [0, 1).
    #[command(subcommand)]
    Circ(CircCmd),
    /// The ordered central extension of the circle by Z.
    #[command(subcommand)]
    Zeleva(ZelevaCmd),
    /// Hahn series with rational coefficients.
    #[command(subcommand)]
    Hahn(HahnCmd),
}

#[derive(Subcommand, Debug, Clone)]
pub enum SymCmd {
    /// Declare a symbol: `sym declare s1 linear decimal:1.41421356`.
    Declare {
        name: String,
        /// linear | algebraic
        mode: String,
        /// decimal:<digits> | rat:<p/q> | const:<name>
        binding: String,
    },
    /// List declared symbols.
    List,
}

#[derive(Subcommand, Debug, Clone)]
pub enum GroupCmd {
    /// Name a subgroup literal such as `q[1, s1]` or `z[1, 1/2]`.
    New { name: String, literal: String },
    Show { group: String },
}

#[derive(Subcommand, Debug, Clone)]
pub enum TypeCmd {
    /// Name a type literal such as `[1, s1]` (over Z) or `q[1, s1]`.
    New { name: String, literal: String },
    Show { ty: String },
}

#[derive(Subcommand, Debug, Clone)]
pub enum OrderCmd {
    /// Compare two vectors such as `(1, 0)` and `(0, 1)`.
    Cmp { ty: String, x: String, y: String },
}

#[derive(Args, Debug, Clone)]
pub struct HolderArgs {
    pub ty: String,
    pub t: String,
    /// Positive unit; defaults to whichever of ±e1 is positive.
    #[arg(long)]
    pub unit: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct DecideArgs {
    /// iso | embed
    pub direction: String,
    pub g: String,
    pub h: String,
    /// unit-span | field | rank1 | pointed
    #[arg(long)]
    pub family: Option<String>,
    /// Distinguished points for the pointed family.
    #[arg(long, num_args = 2, value_names = ["G_POINT", "H_POINT"])]
    pub points: Option<Vec<String>>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum InvariantCmd {
    /// Write slices and triples for `G/r`, `r` up to `--height`.
    Emit {
        group: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug, Clone)]
pub enum Gl2Cmd {
    /// `(a·x + b)/(c·x + d)`.
    #[command(allow_negative_numbers = true)]
    Apply {
        a: i64,
        b: i64,
        c: i64,
        d: i64,
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
}

#[derive(Subcommand, Debug, Clone)]
pub enum CloCmd {
    /// Name an order: `clo new K --order "0<1<2" --colors "0,1,0"`.
    New {
        name: String,
        #[arg(long)]
        order: String,
        #[arg(long)]
        colors: String,
    },
    Show { clo: String },
    /// Least order- and color-preserving injection of K into L.
    Embed { k: String, l: String },
}

#[derive(Subcommand, Debug, Clone)]
pub enum OdagCmd {
    /// Compare elements given as JSON maps `{"pos": [q0, q1]}`.
    Cmp { clo: String, f: String, g: String },
}

#[derive(Subcommand, Debug, Clone)]
pub enum CircCmd {
    /// Orientation of three angles: 1, -1 or 0.
    #[command(allow_negative_numbers = true)]
    Cocycle { t1: String, t2: String, t3: String },
    /// Least n with floor(n·alpha) < floor(n·beta), up to `--cap`.
    #[command(allow_negative_numbers = true)]
    Separate { alpha: String, beta: String },
}

#[derive(Subcommand, Debug, Clone)]
pub enum ZelevaCmd {
    /// Product of elements written `(theta, n)`.
    Mul { p: String, q: String },
    Cmp { p: String, q: String },
    #[command(allow_negative_numbers = true)]
    Pow { p: String, k: i64 },
}

#[derive(Subcommand, Debug, Clone)]
pub enum HahnCmd {
    /// Normalize a series over the exponents of a type or colored order.
    Eval {
        exponents: String,
        #[arg(allow_hyphen_values = true)]
        series: String,
    },
}

impl Command {
    /// Commands that only extend the session.
    pub fn is_declaration(&self) -> bool {
        matches!(
            self,
            Command::Sym(SymCmd::Declare { .. })
                | Command::Group(GroupCmd::New { .. })
                | Command::Type(TypeCmd::New { .. })
                | Command::Clo(CloCmd::New { .. })
        )
    }
}
