use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use mustcheck::cli::{
    cmd_axioms, cmd_distinguish, cmd_leq, cmd_lts, cmd_must, cmd_parse, load, resolve, AxiomSelection, CliError,
    Document, Engine, Format, Method, RunConfig,
};
use mustcheck::labels::{Calculus, Channel, ValueDomain};
use mustcheck::syntax::Definitions;

/// Must-preorder checker for CCS-style calculi with value passing and
/// asynchrony.
#[derive(Parser)]
#[command(name = "mustcheck", version)]
struct Args {
    /// ccs, accs, vccs or vaccs
    #[arg(long, global = true, default_value = "vaccs")]
    calculus: String,
    /// Comma-separated values, e.g. 0,1 (defaults per calculus)
    #[arg(long, global = true)]
    val: Option<String>,
    /// Maximal number of explored states or pairs
    #[arg(long, global = true, default_value_t = 10_000)]
    bound: usize,
    /// preset, identity, constant, or a table file
    #[arg(long, global = true, default_value = "preset")]
    abstraction: String,
    #[arg(long, global = true, value_enum, default_value_t = Fmt::Human)]
    format: Fmt,
    /// Messages the environment may leave in a forwarder's mail
    #[arg(long, global = true, default_value_t = 3)]
    mail: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Fmt {
    Human,
    Structured,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a definitions file and print canonical forms
    Parse { file: PathBuf },
    /// Dump the transition graph of a process
    Lts {
        file: PathBuf,
        /// Definition name or inline term (not needed for multiset)
        name: Option<String>,
        /// term, fw, multiset or toset
        #[arg(long, default_value = "term")]
        engine: String,
        /// Channels for the multiset engine, e.g. a,b
        #[arg(long)]
        channels: Option<String>,
    },
    /// Run a test against a process
    Must { file: PathBuf, server: String, test: String },
    /// Compare two processes
    Leq {
        file: PathBuf,
        p: String,
        q: String,
        /// alt (acceptance sets) or test (sampled clients)
        #[arg(long, default_value = "alt")]
        method: String,
        /// Number of clients for the test method
        #[arg(long, default_value_t = 500)]
        tests: usize,
    },
    /// Synthesize a test passed by P and failed by Q
    Distinguish { file: PathBuf, p: String, q: String },
    /// Check an axiom or axiom class on a graph
    Axioms {
        file: PathBuf,
        name: Option<String>,
        #[arg(long, default_value = "term")]
        engine: String,
        /// ltsmultiset, agents, or a single axiom name
        #[arg(long, default_value = "agents")]
        class: String,
        #[arg(long)]
        channels: Option<String>,
    },
}

fn config(args: &Args) -> Result<RunConfig, CliError> {
    let calculus: Calculus = args.calculus.parse()?;
    let mut cfg = RunConfig::new(calculus);
    if let Some(v) = &args.val {
        cfg.values = ValueDomain::parse_list(v)?;
    }
    if args.bound == 0 {
        return Err(CliError::Usage("--bound must be positive".into()));
    }
    cfg.bound = args.bound;
    cfg.mail = args.mail;
    cfg.set_abstraction(&args.abstraction)?;
    cfg.format = match args.format {
        Fmt::Human => Format::Human,
        Fmt::Structured => Format::Structured,
    };
    Ok(cfg)
}

fn channels(list: &Option<String>) -> Result<BTreeSet<Channel>, CliError> {
    let Some(list) = list else { return Ok(BTreeSet::new()) };
    list.split(',').map(|c| Channel::new(c.trim()).map_err(CliError::from)).collect()
}

fn optional(defs: &Definitions, name: &Option<String>, cfg: &RunConfig) -> Result<Option<mustcheck::syntax::Process>, CliError> {
    name.as_deref().map(|n| resolve(defs, n, cfg)).transpose()
}

fn run(args: &Args) -> Result<String, CliError> {
    let cfg = config(args)?;
    let out = match &args.command {
        Command::Parse { file } => cmd_parse(&load(file, &cfg)?, &cfg).render(cfg.format),
        Command::Lts { file, name, engine, channels: chans } => {
            let defs = load(file, &cfg)?;
            let p = optional(&defs, name, &cfg)?;
            cmd_lts(p.as_ref(), engine.parse::<Engine>()?, &channels(chans)?, &cfg)?.render(cfg.format)
        }
        Command::Must { file, server, test } => {
            let defs = load(file, &cfg)?;
            cmd_must(&resolve(&defs, server, &cfg)?, &resolve(&defs, test, &cfg)?, &cfg)?.render(cfg.format)
        }
        Command::Leq { file, p, q, method, tests } => {
            let defs = load(file, &cfg)?;
            let (p, q) = (resolve(&defs, p, &cfg)?, resolve(&defs, q, &cfg)?);
            cmd_leq(&p, &q, method.parse::<Method>()?, *tests, &cfg)?.render(cfg.format)
        }
        Command::Distinguish { file, p, q } => {
            let defs = load(file, &cfg)?;
            cmd_distinguish(&resolve(&defs, p, &cfg)?, &resolve(&defs, q, &cfg)?, &cfg)?.render(cfg.format)
        }
        Command::Axioms { file, name, engine, class, channels: chans } => {
            let defs = load(file, &cfg)?;
            let p = optional(&defs, name, &cfg)?;
            let which = AxiomSelection::parse(class)?;
            cmd_axioms(p.as_ref(), engine.parse::<Engine>()?, &which, &channels(chans)?, &cfg)?.render(cfg.format)
        }
    };
    Ok(out)
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
