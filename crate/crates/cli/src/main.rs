mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use plcover::cohomology::DEFAULT_DESCENT_BUDGET;
use plcover::grouppi::DEFAULT_NODE_BUDGET;
use plcover::{Error, ErrorKind};

use report::{emit, Report};

const EXIT_INVALID: u8 = 1;
const EXIT_VERIFICATION: u8 = 2;
const EXIT_BUDGET: u8 = 3;

/// Pseudomanifolds, branched coverings and descent certificates.
///
/// Complex inputs are facet-list JSON files (`{"dimension": n, "facets": [...]}`)
/// or `corpus:<name>` for a built-in complex.
#[derive(Parser, Debug)]
#[command(name = "plcover", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeArg {
    /// Closed if the complex is closed, otherwise with boundary.
    Auto,
    Closed,
    Boundary,
}

/// A subcomplex given as a facet-list file, a skeleton, or a vertex set.
#[derive(Args, Debug, Clone, Serialize)]
pub struct SubArgs {
    /// Facet-list file with the subcomplex, in the ids of the input.
    #[arg(long, conflicts_with_all = ["skeleton", "vertices"])]
    pub sub: Option<String>,
    /// Use the i-skeleton of the input.
    #[arg(long, conflicts_with = "vertices")]
    pub skeleton: Option<usize>,
    /// Use a set of vertices, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub vertices: Option<Vec<usize>>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CoefficientArgs {
    /// Orders of the cyclic summands of the coefficient group, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "2")]
    pub coefficients: Vec<u64>,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Pseudomanifold and normality check.
    Verify {
        input: String,
        #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
        mode: ModeArg,
    },
    /// Link of every simplex; fails if a link of codimension at least 2 is not a pseudomanifold.
    Links { input: String },
    /// The i-coskeleton in the first derived subdivision.
    Coskeleton {
        input: String,
        #[arg(long)]
        dim: usize,
    },
    /// C(B, X): derived simplices disjoint from B.
    Complement {
        input: String,
        #[command(flatten)]
        sub: SubArgs,
    },
    /// Regular neighborhood N(B, X), its complement and common boundary (B full).
    Neighborhood {
        input: String,
        #[command(flatten)]
        sub: SubArgs,
    },
    /// Edge-path presentation, abelianization and low-index subgroups.
    Pi1 {
        input: String,
        #[arg(long)]
        abelianization: bool,
        /// Enumerate subgroups of index up to this bound.
        #[arg(long)]
        max_index: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
    },
    /// Covering spaces from monodromy: one coset table, or every connected cover of a degree.
    Cover {
        input: String,
        /// Coset table `{"degree": k, "action": [[...], ...]}` on the edge-path generators.
        #[arg(long, conflicts_with = "max_index", required_unless_present = "max_index")]
        table: Option<String>,
        /// Build one connected cover per conjugacy class of subgroups of this index.
        #[arg(long)]
        max_index: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
    },
    /// Branched covering of X' branched along V from a connected cover of C(V, X).
    BranchComplete {
        input: String,
        #[command(flatten)]
        branch: SubArgs,
        #[arg(long)]
        degree: usize,
        /// Which connected cover of that degree, in enumeration order.
        #[arg(long, default_value_t = 0)]
        choice: usize,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
    },
    /// Skeleton/coskeleton cover family with intersection certificates.
    EtaleFamily {
        input: String,
        #[command(flatten)]
        branch: SubArgs,
        #[arg(long, default_value_t = 2)]
        members: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Cohomology with constant finite coefficients.
    Cohomology {
        input: String,
        #[arg(long)]
        degree: usize,
        #[command(flatten)]
        coefficients: CoefficientArgs,
    },
    /// Kill a cohomology class: a branched cover in degree 1, family complements above.
    Kill {
        input: String,
        #[arg(long)]
        degree: usize,
        /// Index of the cohomology representative to kill.
        #[arg(long, default_value_t = 0, conflicts_with = "cochain")]
        class: usize,
        /// Cochain dump to kill instead of a computed representative.
        #[arg(long)]
        cochain: Option<String>,
        #[command(flatten)]
        coefficients: CoefficientArgs,
        #[command(flatten)]
        branch: SubArgs,
        #[arg(long, default_value_t = 2)]
        members: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Čech nerve of the open vertex-star cover.
    Nerve { input: String },
    /// Principal bundles counted by homomorphisms and by descent data.
    DescentCount {
        input: String,
        /// Group file: `{"cyclic": n}`, `{"symmetric": d}`, `{"table": [[...]]}` or `{"permutations": [[...]]}`.
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = DEFAULT_DESCENT_BUDGET)]
        budget: u64,
    },
}

impl Command {
    fn name(&self) -> String {
        match serde_json::to_value(self).expect("command serializes") {
            Value::Object(m) => m.keys().next().cloned().unwrap_or_default(),
            Value::String(s) => s,
            _ => String::new(),
        }
    }

    fn parameters(&self) -> serde_json::Map<String, Value> {
        match serde_json::to_value(self).expect("command serializes") {
            Value::Object(m) => match m.into_iter().next() {
                Some((_, Value::Object(p))) => p,
                _ => Default::default(),
            },
            _ => Default::default(),
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e.kind() {
        ErrorKind::InvalidInput => EXIT_INVALID,
        ErrorKind::Verification => EXIT_VERIFICATION,
        ErrorKind::Resource => EXIT_BUDGET,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let name = cli.command.name();
    let parameters = cli.command.parameters();
    let mut inputs = Vec::new();
    let outcome = match commands::run(&cli.command, &mut inputs) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {name}: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let report = Report {
        tool: "plcover",
        version: env!("CARGO_PKG_VERSION"),
        command: &name,
        inputs: &inputs,
        parameters: &parameters,
        passed: outcome.passed,
        summary: &outcome.summary,
        result: &outcome.result,
    };
    let body = match cli.format {
        Format::Json => report.json(),
        Format::Text => report.text(),
    };
    if let Err(e) = emit(cli.out.as_deref(), &body) {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_INVALID);
    }
    if outcome.passed {
        ExitCode::SUCCESS
    } else {
        eprintln!("verification failed: {}", outcome.summary);
        ExitCode::from(EXIT_VERIFICATION)
    }
}
