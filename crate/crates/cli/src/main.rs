use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use milnorfib::corpus::{self, Entry, EntryResult};
use milnorfib::problem::load_problem;
use milnorfib::report::{emit_report, Format, RunConfig, DEFAULT_SEED};
use milnorfib::{pipeline, Error};

#[derive(Parser)]
#[command(
    name = "milnorfib",
    version,
    about = "Exact checks for harmonic first integral maps and their Milnor fibrations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Human,
    Machine,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Human => Format::Human,
            FormatArg::Machine => Format::Machine,
        }
    }
}

#[derive(Args, Clone)]
struct Common {
    /// Problem file (TOML).
    path: PathBuf,
    #[arg(long, value_enum, default_value = "human")]
    format: FormatArg,
    /// Seed for the randomized parts (check functionals, sampling).
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Map to use when the problem declares several.
    #[arg(long)]
    map: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// First-integral, Frobenius, involutivity and harmonicity checks.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Comma-separated check families.
        #[arg(long, value_delimiter = ',')]
        checks: Vec<String>,
    },
    /// Milnor number and local degree of the gradient of one component.
    Degree {
        #[command(flatten)]
        common: Common,
        /// 1-based component index.
        #[arg(long, default_value_t = 1)]
        component: usize,
    },
    /// Runs the theorem engine on a map.
    Classify {
        #[command(flatten)]
        common: Common,
        /// Injects a user assertion (repeatable).
        #[arg(long = "assert")]
        assertions: Vec<String>,
    },
    /// The bundled example corpus.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
}

#[derive(Subcommand)]
enum CorpusAction {
    /// Lists the entries.
    List {
        #[arg(long)]
        dir: Option<PathBuf>,
    },
    /// Runs every entry against its expectation file.
    RunAll {
        /// Read entries from a directory instead of the bundled set.
        #[arg(long)]
        dir: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "human")]
        format: FormatArg,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Writes the bundled problem and expectation files into a directory.
    Export { dir: PathBuf },
}

fn input_error(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(2)
}

fn entries(dir: &Option<PathBuf>) -> Result<Vec<Entry>, Error> {
    match dir {
        Some(d) => corpus::from_dir(d),
        None => Ok(corpus::bundled()),
    }
}

fn write_out(bytes: &[u8]) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(bytes);
    let _ = out.flush();
}

fn run_problem(command: &str, common: Common, tweak: impl FnOnce(&mut RunConfig)) -> ExitCode {
    let problem = match load_problem(&common.path) {
        Ok(p) => p,
        Err(e) => return input_error(&e),
    };
    let mut cfg = RunConfig::new(command, common.path.display().to_string());
    cfg.format = common.format.into();
    cfg.seed = common.seed;
    cfg.map = common.map;
    tweak(&mut cfg);
    match pipeline::run(&problem, cfg.clone()) {
        Ok(report) => {
            write_out(&emit_report(&report, cfg.format));
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => input_error(&e),
    }
}

fn corpus_human(results: &[EntryResult]) -> String {
    let mut s = String::new();
    for r in results {
        let tag = if r.passed { "PASS" } else { "FAIL" };
        s.push_str(&format!("{tag} {:<20} {}\n", r.name, r.description));
        for m in &r.mismatches {
            s.push_str(&format!("     {m}\n"));
        }
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    s.push_str(&format!("{} entries, {} failed\n", results.len(), failed));
    s
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Verify { common, checks } => run_problem("verify", common, |c| c.checks = checks),
        Command::Degree { common, component } => run_problem("degree", common, |c| c.component = Some(component)),
        Command::Classify { common, assertions } => run_problem("classify", common, |c| c.assertions = assertions),
        Command::Corpus { action } => match action {
            CorpusAction::List { dir } => match entries(&dir) {
                Ok(es) => {
                    let mut s = String::new();
                    for e in es {
                        s.push_str(&e.name);
                        s.push('\n');
                    }
                    write_out(s.as_bytes());
                    ExitCode::SUCCESS
                }
                Err(e) => input_error(&e),
            },
            CorpusAction::RunAll { dir, format, seed } => {
                let es = match entries(&dir) {
                    Ok(es) => es,
                    Err(e) => return input_error(&e),
                };
                let results = corpus::run_all(&es, seed);
                let all = results.iter().all(|r| r.passed);
                let text = match Format::from(format) {
                    Format::Machine => {
                        let v = serde_json::json!({ "seed": seed, "passed": all, "entries": results });
                        let mut s = serde_json::to_string_pretty(&v).expect("serializable");
                        s.push('\n');
                        s
                    }
                    Format::Human => corpus_human(&results),
                };
                write_out(text.as_bytes());
                if all {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(1)
                }
            }
            CorpusAction::Export { dir } => {
                let res = std::fs::create_dir_all(&dir).and_then(|_| {
                    for e in corpus::bundled() {
                        std::fs::write(dir.join(format!("{}.prob", e.name)), &e.problem)?;
                        std::fs::write(dir.join(format!("{}.expect.toml", e.name)), &e.expect)?;
                    }
                    Ok(())
                });
                match res {
                    Ok(()) => ExitCode::SUCCESS,
                    Err(e) => input_error(&Error::Io {
                        path: dir.display().to_string(),
                        message: e.to_string(),
                    }),
                }
            }
        },
    }
}
