mod analyze;
mod construct;
mod output;
mod repro;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use output::Failure;

#[derive(Parser)]
#[command(name = "freecurve", version, about = "Freeness, syzygies and local invariants of plane curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run tasks on one curve or on a job file.
    Analyze(AnalyzeArgs),
    /// Check catalog entries against freshly computed invariants.
    Repro(ReproArgs),
    /// Build curves from a family and write them as analyze jobs.
    Construct(ConstructArgs),
}

#[derive(Args)]
pub struct AnalyzeArgs {
    /// Job file: one job or `{"jobs": [...]}`.
    #[arg(long, conflicts_with_all = ["curve", "entry"])]
    pub input: Option<PathBuf>,
    /// Inline polynomial.
    #[arg(long, conflicts_with = "entry")]
    pub curve: Option<String>,
    /// Catalog entry id.
    #[arg(long)]
    pub entry: Option<String>,
    /// Coefficient field as JSON, e.g. '{"kind":"ext","base":{"kind":"Q"},"minpoly":"i^2+1","gen":"i"}'.
    #[arg(long)]
    pub field: Option<String>,
    /// Comma-separated tasks: mdr, tjurina, classify, local, flexes, modular, supersolvable, saito.
    #[arg(long)]
    pub tasks: Option<String>,
    /// Singular points, separated by ';', e.g. '(0:0:1);(1:0:0)'.
    #[arg(long)]
    pub points: Option<String>,
    /// Candidate points for modular, supersolvable and flexes, separated by ';'.
    #[arg(long)]
    pub candidates: Option<String>,
    /// Recompute mdr and tau modulo these primes and compare.
    #[arg(long, value_delimiter = ',')]
    pub modular_check: Vec<u64>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, default_value = "catalog.json")]
    pub catalog: PathBuf,
}

#[derive(Args)]
pub struct ReproArgs {
    #[arg(long, default_value = "catalog.json")]
    pub catalog: PathBuf,
    /// Keep only entries of this family.
    #[arg(long)]
    pub family: Option<String>,
    /// Keep only entries whose id contains this text.
    #[arg(long)]
    pub id: Option<String>,
    /// Predicates such as 'degree>13', 'degree<=9' or 'family=cross'.
    #[arg(long)]
    pub filter: Vec<String>,
    #[arg(long, default_value_t = 13)]
    pub max_degree: u32,
    /// Run entries above --max-degree instead of skipping them.
    #[arg(long)]
    pub allow_large: bool,
    /// Primes for the double check; defaults to two primes near 2^31.
    #[arg(long, value_delimiter = ',')]
    pub modular_check: Vec<u64>,
    /// Write the JSON report here.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Print JSON instead of the table.
    #[arg(long)]
    pub json: bool,
}

#[derive(Args)]
pub struct ConstructArgs {
    /// thom-sebastiani, fermat-extended, fermat-arrangement, fermat-lines,
    /// tangent-chain, cross, conicline, bitangent, ciani, named, explicit.
    pub family: String,
    /// Linear forms in x, y for thom-sebastiani.
    #[arg(long, value_delimiter = ',')]
    pub ell: Vec<String>,
    /// Exponents for thom-sebastiani; line count for tangent-chain and bitangent.
    #[arg(long, value_delimiter = ',')]
    pub k: Vec<u32>,
    #[arg(long)]
    pub d: Option<u32>,
    #[arg(long)]
    pub m: Option<u32>,
    #[arg(long)]
    pub j: Option<u32>,
    /// Build only this part.
    #[arg(long)]
    pub part: Option<String>,
    #[arg(long)]
    pub name: Option<String>,
    #[arg(long)]
    pub lambda: Option<String>,
    #[arg(long)]
    pub polynomial: Option<String>,
    /// Field override as JSON.
    #[arg(long)]
    pub field: Option<String>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, default_value = "catalog.json")]
    pub catalog: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (result, output) = match &cli.command {
        Command::Analyze(a) => (analyze::run(a), a.output.clone()),
        Command::Repro(r) => (repro::run(r), r.output.clone()),
        Command::Construct(c) => (construct::run(c), c.output.clone()),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            let text = output::to_json(&f.report());
            if let Some(path) = output {
                let _ = std::fs::write(path, &text);
            }
            println!("{text}");
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

pub(crate) type Outcome = Result<u8, Failure>;
