use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use burnside::job::{run, Command, Format, JobSpec};
use burnside::{ElementDoc, Error, GroupSpec, MarkVariant, Result};

#[derive(Parser)]
#[command(name = "burnside", version, about = "Exact computations in double Burnside modules A(G, K)")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// Source group: a name (S3, C(5), C2xC2), inline JSON, or a JSON file.
    #[arg(long, global = true)]
    group: Option<String>,

    /// Middle group of a composition A(via, K) x A(group, via); defaults to --group.
    #[arg(long, global = true)]
    via: Option<String>,

    /// Target group K; defaults to the trivial group.
    #[arg(long, global = true)]
    target: Option<String>,

    #[arg(long, global = true)]
    prime: Option<u64>,

    /// Element document (JSON); repeat for compose, left factor first.
    #[arg(long, global = true)]
    element: Vec<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = VariantArg::Raw)]
    variant: VariantArg,

    /// Precision of p-adic digit renderings.
    #[arg(long, global = true, default_value_t = 8)]
    digits: u32,

    /// Persistent cache directory.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,

    #[arg(long, global = true, conflicts_with = "cache")]
    no_cache: bool,

    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
}

#[derive(Subcommand, Clone)]
enum Cmd {
    /// List the basis classes of A(G, K).
    Basis,
    /// Compose two elements.
    Compose,
    /// The p-local idempotent 1_p of A_p(G, G).
    OneP,
    /// Project an element of A(G, K) to its p-component.
    Project,
    /// Table of marks of A(G, K).
    Marks,
    /// Kernel of the prime-power marks on A(G, K).
    Kernel,
    /// Number of p-isotropy classes with nontrivial homomorphism.
    SegalRank,
    /// Split an element into its components for every prime dividing |G|.
    Decompose,
    /// Run the invariant suites over a group corpus.
    Selftest {
        /// Comma-separated group names; defaults to the built-in corpus.
        #[arg(long, value_delimiter = ',')]
        corpus: Option<Vec<String>>,
    },
}

#[derive(ValueEnum, Clone, Copy)]
enum VariantArg {
    #[value(name = "withW")]
    WithW,
    Raw,
}

#[derive(ValueEnum, Clone, Copy)]
enum FormatArg {
    Json,
    Csv,
}

fn group_arg(arg: &str) -> Result<GroupSpec> {
    let path = Path::new(arg);
    if !arg.trim_start().starts_with('{') && path.is_file() {
        return Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?);
    }
    GroupSpec::parse_arg(arg)
}

fn job(cli: Cli) -> Result<JobSpec> {
    let (command, corpus) = match cli.command {
        Cmd::Basis => (Command::Basis, None),
        Cmd::Compose => (Command::Compose, None),
        Cmd::OneP => (Command::OneP, None),
        Cmd::Project => (Command::Project, None),
        Cmd::Marks => (Command::Marks, None),
        Cmd::Kernel => (Command::Kernel, None),
        Cmd::SegalRank => (Command::SegalRank, None),
        Cmd::Decompose => (Command::Decompose, None),
        Cmd::Selftest { corpus } => (Command::Selftest, corpus),
    };
    let mut job = JobSpec::new(command);
    job.group = cli.group.as_deref().map(group_arg).transpose()?;
    job.via = cli.via.as_deref().map(group_arg).transpose()?;
    job.target = cli.target.as_deref().map(group_arg).transpose()?;
    job.prime = cli.prime;
    job.elements = cli
        .element
        .iter()
        .map(|p| -> Result<ElementDoc> { Ok(serde_json::from_str(&std::fs::read_to_string(p)?)?) })
        .collect::<Result<_>>()?;
    job.digits = cli.digits;
    job.variant = match cli.variant {
        VariantArg::WithW => MarkVariant::WithW,
        VariantArg::Raw => MarkVariant::Raw,
    };
    job.format = match cli.format {
        FormatArg::Json => Format::Json,
        FormatArg::Csv => Format::Csv,
    };
    job.cache = if cli.no_cache { None } else { cli.cache };
    job.corpus = corpus;
    Ok(job)
}

fn fail(e: Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let spec = match job(cli) {
        Ok(s) => s,
        Err(e) => return fail(e),
    };
    match run(&spec) {
        Ok(out) => {
            print!("{}", out.body);
            if out.success {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => fail(e),
    }
}
