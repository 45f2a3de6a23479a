use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use planar_variation::engine::SearchConfig;
use planar_variation_cli::{
    circle_command, configure_threads, norm_command, parse_line, parse_ops, report_command, var_command, verify_command,
    vf_command, CliError, CliResult, Format, Mutation, Output, ProblemFile, Suite, TableFormat,
};

/// Variation of functions on finite planar point sets.
#[derive(Parser, Debug)]
#[command(name = "pvar", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
struct SearchArgs {
    /// Longest list enumerated by the search (L).
    #[arg(long, default_value_t = 6)]
    depth: usize,
    /// Cycle repetitions tried during amplification (N).
    #[arg(long, default_value_t = 25)]
    repeat: usize,
    /// Beam width for larger sets; 0 forces exhaustive search.
    #[arg(long, default_value_t = 64)]
    beam: usize,
    /// Seed for beam tie-breaking.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl SearchArgs {
    fn config(&self) -> CliResult<SearchConfig> {
        Ok(SearchConfig::new(self.depth, self.repeat, self.beam, self.seed)?)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Variation factor of a point list.
    Vf {
        #[arg(long)]
        list: PathBuf,
        /// Measure on this line instead of the best one.
        #[arg(long, allow_hyphen_values = true)]
        line: Option<String>,
        /// Print a per-segment table instead of JSON.
        #[arg(long)]
        explain: bool,
    },
    /// Certified interval for the variation of a function.
    Var {
        #[arg(long)]
        problem: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long, default_value = "json", value_parser = ["json", "csv"])]
        format: String,
    },
    /// BV norm of a function after a pipeline of operations.
    Norm {
        #[arg(long)]
        problem: PathBuf,
        /// e.g. "add:g.json|mul:g.json|abs|max:g.json"; paths are relative to the problem file.
        #[arg(long, default_value = "")]
        ops: String,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Classical circle variation against the planar bounds.
    CircleCompare {
        #[arg(long)]
        sample: PathBuf,
        #[arg(long, default_value_t = 25)]
        repeat: usize,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        #[arg(long, default_value_t = 64)]
        beam: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Randomized property suite.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Run against a deliberately broken rule (`broken-type2`).
        #[arg(long)]
        inject_mutation: Option<String>,
    },
    /// Bound tables and sketches.
    Report {
        #[arg(long)]
        problem: Option<PathBuf>,
        /// Append the alternating harmonic sweep for m = 2..=M.
        #[arg(long)]
        harmonic: Option<usize>,
        #[arg(long, default_value = "json")]
        format: String,
        #[command(flatten)]
        search: SearchArgs,
    },
}

fn parent(path: &Path) -> &Path {
    path.parent().unwrap_or(Path::new("."))
}

fn run(cli: Cli) -> CliResult<Output> {
    configure_threads()?;
    match cli.command {
        Command::Vf { list, line, explain } => {
            let line = line.as_deref().map(parse_line).transpose()?;
            vf_command(&ProblemFile::load(&list)?, line.as_ref(), explain)
        }
        Command::Var { problem, search, format } => {
            let format = if format == "csv" { TableFormat::Csv } else { TableFormat::Json };
            var_command(&ProblemFile::load(&problem)?, &search.config()?, format)
        }
        Command::Norm { problem, ops, search } => {
            let ops = parse_ops(&ops)?;
            norm_command(&ProblemFile::load(&problem)?, &ops, parent(&problem), &search.config()?)
        }
        Command::CircleCompare { sample, repeat, depth, beam, seed } => {
            let cfg = SearchConfig::new(depth, repeat, beam, seed)?;
            circle_command(&ProblemFile::load(&sample)?, &cfg)
        }
        Command::Verify { suite, seed, trials, inject_mutation } => {
            let suite: Suite = suite.parse()?;
            let mutation = inject_mutation.as_deref().map(str::parse::<Mutation>).transpose()?;
            verify_command(suite, seed, trials, mutation)
        }
        Command::Report { problem, harmonic, format, search } => {
            let format: Format = format.parse()?;
            let problem = problem.as_deref().map(ProblemFile::load).transpose()?;
            report_command(problem.as_ref(), harmonic, format, &search.config()?)
        }
    }
}

fn error_document(msg: &str) -> String {
    serde_json::json!({ "error": msg }).to_string()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.render().to_string();
            println!("{}", error_document(msg.trim()));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{}", out.text);
            if out.violated {
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            let e: CliError = e;
            println!("{}", error_document(&e.to_string()));
            ExitCode::from(2)
        }
    }
}
