use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use sstkit::algebra::{decide_hdt0l_with, AlgebraicOptions, DEFAULT_MAX_STEPS};
use sstkit::format::{parse_hdt0l, parse_sst, print_hdt0l, print_sst};
use sstkit::hdt0l::bounded_search;
use sstkit::reductions::{LabelOrigin, DEFAULT_MAX_LEN};
use sstkit::report::{Report, EXIT_INPUT_ERROR};
use sstkit::{
    bisst_to_hdt0l, check_diagonal, check_equivalent, check_functional, hdt0l_to_sst_pair, product,
    Alphabet, Engine, Error, Hdt0lInstance, Sst, Word,
};

#[derive(Parser)]
#[command(name = "sstkit", version)]
#[command(about = "Evaluate streaming string transducers and decide their equivalence")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the outputs of a machine on one input word
    Eval {
        sst: PathBuf,
        /// Letters separated by spaces or commas; `~` is the empty word
        #[arg(long)]
        word: String,
    },
    /// Report whether every update uses each variable at most once
    Copyless { sst: PathBuf },
    /// Build the synchronized product of two machines
    Product {
        left: PathBuf,
        right: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Decide whether two deterministic machines are equivalent
    Equiv {
        left: PathBuf,
        right: PathBuf,
        #[command(flatten)]
        engine: EngineArgs,
    },
    /// Decide whether a machine is functional
    Functional {
        sst: PathBuf,
        #[command(flatten)]
        engine: EngineArgs,
    },
    /// Decide whether a pair-output machine always outputs equal components
    Diagonal {
        bisst: PathBuf,
        #[command(flatten)]
        engine: EngineArgs,
    },
    /// Translate between machines and HDT0L instances
    #[command(subcommand)]
    Reduce(Reduce),
    /// HDT0L instance commands
    #[command(subcommand)]
    Hdt0l(Hdt0lCommand),
}

#[derive(Subcommand)]
enum Reduce {
    /// Pair-output machine to an HDT0L instance
    ToHdt0l {
        bisst: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// HDT0L instance to two deterministic machines
    ToSst {
        instance: PathBuf,
        #[arg(short, long, num_args = 2, value_names = ["OUT1", "OUT2"], required = true)]
        output: Vec<PathBuf>,
    },
}

#[derive(Subcommand)]
enum Hdt0lCommand {
    /// Decide whether both derivations agree on every label sequence
    Decide {
        instance: PathBuf,
        #[command(flatten)]
        engine: EngineArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineKind {
    Bounded,
    Ideal,
}

#[derive(Args)]
struct EngineArgs {
    #[arg(long, value_enum, default_value = "ideal")]
    engine: EngineKind,
    /// Longest label sequence the bounded engine examines
    #[arg(long, default_value_t = DEFAULT_MAX_LEN)]
    max_len: usize,
    /// Chain steps the ideal engine may take
    #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
    max_steps: usize,
    /// Print the report as JSON
    #[arg(long)]
    json: bool,
}

impl EngineArgs {
    fn engine(&self) -> Engine {
        match self.engine {
            EngineKind::Bounded => Engine::Bounded {
                max_len: self.max_len,
            },
            EngineKind::Ideal => Engine::Ideal {
                max_steps: self.max_steps,
            },
        }
    }

    fn emit(&self, report: &Report) -> i32 {
        if self.json {
            println!("{}", report.to_json());
        } else {
            print!("{}", report.to_human());
        }
        report.exit_code()
    }
}

/// A failure that is not a verdict: unreadable files, syntax errors and
/// unmet preconditions.
struct InputError(String);

impl From<Error> for InputError {
    fn from(e: Error) -> Self {
        InputError(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, InputError> {
    fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn load_sst(path: &Path) -> Result<Sst, InputError> {
    parse_sst(&read(path)?).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn load_hdt0l(path: &Path) -> Result<Hdt0lInstance, InputError> {
    parse_hdt0l(&read(path)?).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn write(path: Option<&Path>, text: &str) -> Result<(), InputError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| InputError(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Splits on whitespace or commas; a single unseparated string is read one
/// character per letter when every letter of the alphabet is one character.
fn parse_word(alphabet: &Alphabet, text: &str) -> Result<Word, InputError> {
    let text = text.trim();
    let tokens: Vec<String> = if text.contains(|c: char| c.is_whitespace() || c == ',') {
        text.split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(str::to_string)
            .collect()
    } else if alphabet.letter(text).is_none()
        && alphabet
            .letters()
            .iter()
            .all(|l| l.token().chars().count() == 1)
    {
        text.chars().map(String::from).collect()
    } else {
        vec![text.to_string()]
    };
    let tokens: Vec<String> = tokens.into_iter().filter(|t| t != "~").collect();
    Ok(alphabet.word(&tokens)?)
}

fn run(cli: Cli) -> Result<i32, InputError> {
    match cli.command {
        Command::Eval { sst, word } => {
            let t = load_sst(&sst)?;
            let u = parse_word(t.input(), &word)?;
            let outputs = t.evaluate(&u);
            if outputs.is_empty() {
                println!("no output: `{u}` is not in the domain");
            }
            for o in outputs {
                println!("{o}");
            }
            Ok(0)
        }
        Command::Copyless { sst } => {
            let t = load_sst(&sst)?;
            match t.copyless_violation() {
                None => {
                    println!("copyless");
                    Ok(0)
                }
                Some(tr) => {
                    println!("not copyless: transition {tr} uses a variable twice");
                    Ok(1)
                }
            }
        }
        Command::Product {
            left,
            right,
            output,
        } => {
            let p = product(&load_sst(&left)?, &load_sst(&right)?)?;
            write(output.as_deref(), &print_sst(&p))?;
            Ok(0)
        }
        Command::Equiv {
            left,
            right,
            engine,
        } => {
            let d = check_equivalent(&load_sst(&left)?, &load_sst(&right)?, engine.engine())?;
            Ok(engine.emit(&Report::from_decision("equiv", &d)))
        }
        Command::Functional { sst, engine } => {
            let d = check_functional(&load_sst(&sst)?, engine.engine())?;
            Ok(engine.emit(&Report::from_decision("functional", &d)))
        }
        Command::Diagonal { bisst, engine } => {
            let d = check_diagonal(&load_sst(&bisst)?, engine.engine())?;
            Ok(engine.emit(&Report::from_decision("diagonal", &d)))
        }
        Command::Reduce(Reduce::ToHdt0l { bisst, output }) => {
            let (inst, trace) = bisst_to_hdt0l(&load_sst(&bisst)?)?;
            write(output.as_deref(), &print_hdt0l(&inst))?;
            if output.is_some() {
                for (label, origin) in trace.labels() {
                    match origin {
                        LabelOrigin::Final(q) => println!("{label}: final state {q}"),
                        LabelOrigin::Transition(t) => println!("{label}: transition {t}"),
                    }
                }
            }
            Ok(0)
        }
        Command::Reduce(Reduce::ToSst { instance, output }) => {
            let (t1, t2) = hdt0l_to_sst_pair(&load_hdt0l(&instance)?)?;
            write(Some(&output[0]), &print_sst(&t1))?;
            write(Some(&output[1]), &print_sst(&t2))?;
            Ok(0)
        }
        Command::Hdt0l(Hdt0lCommand::Decide { instance, engine }) => {
            let inst = load_hdt0l(&instance)?;
            let report = match engine.engine() {
                Engine::Bounded { max_len } => {
                    let o = bounded_search(&inst, max_len);
                    let consumed = format!(
                        "label sequences up to length {}{}",
                        o.depth,
                        if o.exhausted {
                            ", derivation states exhausted"
                        } else {
                            ""
                        }
                    );
                    Report::new(
                        "hdt0l decide",
                        &o.verdict,
                        &engine.engine().to_string(),
                        &consumed,
                    )
                }
                Engine::Ideal { max_steps } => {
                    let options = AlgebraicOptions {
                        max_steps,
                        ..AlgebraicOptions::default()
                    };
                    let o = decide_hdt0l_with(&inst, &options)?;
                    let consumed = format!(
                        "chain depth {}, {} tracked polynomials, basis size {}, {} reductions",
                        o.depth, o.tracked, o.basis_size, o.reductions
                    );
                    Report::new(
                        "hdt0l decide",
                        &o.verdict,
                        &engine.engine().to_string(),
                        &consumed,
                    )
                }
            };
            Ok(engine.emit(&report))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT_ERROR } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(InputError(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(EXIT_INPUT_ERROR as u8)
        }
    }
}
