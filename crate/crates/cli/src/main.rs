//! `thue2dlite`: compile word problems into DL-Lite_core ontologies and
//! queries, search for certificates, and check them.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use thue2dlite_core::harness::{
    cmd_check_model, cmd_compile, cmd_countermodel, cmd_enumerate, cmd_eval, cmd_rewrite, cmd_verify, exit, Config,
    EnumerateTarget, HarnessError, Outcome, CONFIG_ENV,
};
use thue2dlite_core::ontology::{chase, parse_ontology};
use thue2dlite_core::structures::write_structure;
use thue2dlite_core::thue::Variant;

#[derive(Parser)]
#[command(
    name = "thue2dlite",
    version,
    about = "Thue word problems as DL-Lite_core query entailment"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Options,
}

#[derive(Args)]
struct Options {
    /// TOML config file; flags override its values.
    #[arg(long, global = true, env = CONFIG_ENV)]
    config: Option<PathBuf>,
    /// Print the JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Enforce the unique name assumption.
    #[arg(long, global = true, overrides_with = "no_una")]
    una: bool,
    /// Allow several constants on one vertex.
    #[arg(long, global = true, overrides_with = "una")]
    no_una: bool,
    /// Enforce the partial closed world assumption.
    #[arg(long, global = true, overrides_with = "no_pcwa")]
    pcwa: bool,
    /// Allow unasserted facts among constants.
    #[arg(long, global = true, overrides_with = "pcwa")]
    no_pcwa: bool,
    /// Expansion budget of the rewriting search.
    #[arg(long, global = true)]
    max_steps: Option<usize>,
    /// Longest word the rewriting search visits.
    #[arg(long, global = true)]
    max_word_len: Option<usize>,
    /// Largest semigroup order tried for a separating witness.
    #[arg(long, global = true)]
    max_order: Option<usize>,
    /// Chase rounds.
    #[arg(long, global = true)]
    depth: Option<usize>,
    /// Vertex bound for exhaustive enumeration.
    #[arg(long, global = true)]
    max_vertices: Option<usize>,
    /// Also forbid T between the components of phi.
    #[arg(long = "phi-negate-T", global = true)]
    phi_negate_t: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Write the ontology, the combined query and a manifest.
    Compile {
        instance: PathBuf,
        #[arg(long, default_value = "neq")]
        variant: Variant,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Search for a rewrite path between the goal words.
    Rewrite { instance: PathBuf },
    /// Build and verify a finite countermodel.
    Countermodel {
        instance: PathBuf,
        #[arg(long, default_value = "neq")]
        variant: Variant,
        /// Directory for model.struct and report.json.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a query (or union of queries) on a structure.
    Eval {
        query: PathBuf,
        model: PathBuf,
        /// Check the model against this ontology first.
        #[arg(long)]
        ontology: Option<PathBuf>,
    },
    /// Check a structure against an ontology.
    CheckModel { model: PathBuf, ontology: PathBuf },
    /// Run the verification suite on an instance.
    Verify { instance: PathBuf },
    /// Run an exhaustive property over small structures.
    Enumerate {
        /// Comma-separated letters, e.g. `a,b`.
        #[arg(
            long,
            value_delimiter = ',',
            conflicts_with = "instance",
            required_unless_present = "instance"
        )]
        alphabet: Vec<String>,
        /// Take the signature and rules from this instance.
        #[arg(long)]
        instance: Option<PathBuf>,
        /// imperfect-implies-gamma-neq, imperfect-implies-gamma-neg or ontology-iff-candidate.
        #[arg(long)]
        check: String,
    },
    /// Run the bounded chase on an ontology and print the result.
    Chase { ontology: PathBuf },
}

fn config(opts: &Options) -> Result<Config, HarnessError> {
    let mut cfg = match &opts.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    if opts.una || opts.no_una {
        cfg.una = opts.una;
    }
    if opts.pcwa || opts.no_pcwa {
        cfg.pcwa = opts.pcwa;
    }
    if let Some(n) = opts.max_steps {
        cfg.max_expansions = n;
    }
    if opts.max_word_len.is_some() {
        cfg.max_word_len = opts.max_word_len;
    }
    if let Some(n) = opts.max_order {
        cfg.max_semigroup_order = n;
    }
    if let Some(n) = opts.depth {
        cfg.chase_depth = n;
    }
    if let Some(n) = opts.max_vertices {
        cfg.enum_max_vertices = n;
    }
    cfg.phi_negate_t |= opts.phi_negate_t;
    Ok(cfg)
}

fn run_chase(path: &Path, cfg: &Config) -> Result<Outcome, HarnessError> {
    let text = std::fs::read_to_string(path).map_err(|source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let o = parse_ontology(&text).map_err(|e| HarnessError::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    let r = chase(&o, cfg.chase_depth);
    let structure = write_structure(&r.structure);
    Ok(Outcome {
        code: exit::SUCCESS,
        report: serde_json::json!({
            "fixpoint": r.fixpoint,
            "rounds": r.rounds,
            "vertices": r.structure.vertex_count(),
            "structure": structure,
        }),
        text: format!(
            "# {} rounds, {}\n{structure}",
            r.rounds,
            if r.fixpoint { "fixpoint" } else { "no fixpoint" }
        ),
    })
}

fn run(cli: &Cli) -> Result<Outcome, HarnessError> {
    let cfg = config(&cli.opts)?;
    match &cli.command {
        Command::Compile { instance, variant, out } => cmd_compile(instance, *variant, out, &cfg),
        Command::Rewrite { instance } => cmd_rewrite(instance, &cfg),
        Command::Countermodel { instance, variant, out } => cmd_countermodel(instance, *variant, out.as_deref(), &cfg),
        Command::Eval { query, model, ontology } => cmd_eval(query, model, ontology.as_deref(), &cfg),
        Command::CheckModel { model, ontology } => cmd_check_model(model, ontology, &cfg),
        Command::Verify { instance } => cmd_verify(instance, &cfg),
        Command::Enumerate {
            alphabet,
            instance,
            check,
        } => {
            let target = match instance {
                Some(path) => EnumerateTarget::Instance(path.clone()),
                None => EnumerateTarget::Alphabet(alphabet.clone()),
            };
            cmd_enumerate(&target, cli.opts.max_vertices, check, &cfg)
        }
        Command::Chase { ontology } => run_chase(ontology, &cfg),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => exit::SUCCESS,
                _ => exit::USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            if cli.opts.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&outcome.report).expect("reports serialize")
                );
            } else {
                print!("{}", outcome.text);
            }
            ExitCode::from(outcome.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
