use std::fs;
use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use ace_core::executor::{Env, ExecEvent, ExecOptions, Prompt};
use ace_core::fixtures::simplemat_lexicon;
use ace_core::lexicon::Lexicon;
use ace_core::logic::DEFAULT_DEPTH_LIMIT;
use ace_core::parser::paraphrase::paraphrase;
use ace_core::parser::parse_text;
use ace_core::session::Session;
use clap::{Parser, Subcommand};
use thiserror::Error;

#[derive(Parser)]
#[command(name = "acectl", version, about = "Parse, query and execute controlled-English specifications")]
struct Cli {
    /// Lexicon file. Defaults to FILE with a `.lex` extension when that
    /// exists, otherwise the bundled SimpleMat lexicon.
    #[arg(long, global = true)]
    lexicon: Option<PathBuf>,
    /// Derivation depth limit for queries and execution.
    #[arg(long, global = true, default_value_t = DEFAULT_DEPTH_LIMIT)]
    depth: usize,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the paraphrase of each sentence.
    Parse { file: PathBuf },
    /// Print the DRS of the text.
    Drs {
        file: PathBuf,
        /// Print the resolved DRS before cleanup.
        #[arg(long)]
        resolved: bool,
    },
    /// Print the knowledge base.
    Kb { file: PathBuf },
    /// Answer a question against the text.
    Query { file: PathBuf, question: String },
    /// Execute the text as an event simulation.
    Exec {
        file: PathBuf,
        /// Extra sentences or `X is a N.` facts for this run only.
        #[arg(long)]
        scaffold: Option<PathBuf>,
        /// Answers to prompts, one per line, used before asking on stdin.
        #[arg(long)]
        answers: Option<PathBuf>,
        /// Print raw terms instead of descriptions.
        #[arg(long)]
        raw: bool,
    },
    /// Interactive dialog.
    Repl,
    /// Serve the HTTP-JSON session API.
    Serve {
        #[arg(long)]
        port: u16,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{}", .0.report())]
    Core(#[from] ace_core::Error),
    #[error("error: io: {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("error: io: {0}")]
    Server(io::Error),
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn load_lexicon(explicit: Option<&Path>, file: Option<&Path>) -> Result<Lexicon, CliError> {
    let beside = file.map(|f| f.with_extension("lex")).filter(|p| p.exists());
    match explicit.map(Path::to_path_buf).or(beside) {
        Some(p) => Ok(Lexicon::load(&read(&p)?).map_err(ace_core::Error::from)?),
        None => Ok(simplemat_lexicon()),
    }
}

fn accepted(cli: &Cli, file: &Path) -> Result<Session, CliError> {
    let mut s = Session::new(load_lexicon(cli.lexicon.as_deref(), Some(file))?);
    s.set_depth_limit(cli.depth);
    s.add(&read(file)?)?;
    Ok(s)
}

/// Answers from a file first, then from stdin.
struct ConsoleEnv<R> {
    scripted: std::vec::IntoIter<String>,
    input: R,
}

impl<R: BufRead> Env for ConsoleEnv<R> {
    fn answer(&mut self, prompt: &Prompt) -> Option<String> {
        if let Some(a) = self.scripted.next() {
            return Some(a);
        }
        print!("{} ", prompt.text);
        io::stdout().flush().ok()?;
        let mut line = String::new();
        match self.input.read_line(&mut line) {
            Ok(0) | Err(_) => None,
            Ok(_) => Some(line.trim().to_string()),
        }
    }

    fn emit(&mut self, event: ExecEvent) {
        match event {
            ExecEvent::Trace { text } => println!("{text}"),
            ExecEvent::Hook { .. } => println!("{}", serde_json::to_string(&event).expect("event serializes")),
            ExecEvent::Warning { text } => eprintln!("warning: {text}"),
            ExecEvent::Prompt { .. } | ExecEvent::Done | ExecEvent::Error { .. } => {}
        }
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Cmd::Parse { file } => {
            let lex = load_lexicon(cli.lexicon.as_deref(), Some(file))?;
            let mut d = ace_core::discourse::DiscourseState::new();
            for tree in parse_text(&lex, &read(file)?).map_err(ace_core::Error::from)? {
                let a = d.add_sentence(&lex, &tree).map_err(ace_core::Error::from)?;
                println!("{}", paraphrase(&tree, &lex, &a.resolutions, &d.referents));
            }
        }
        Cmd::Drs { file, resolved } => {
            let s = accepted(cli, file)?;
            if *resolved {
                println!("{}", s.discourse().drs.dump());
            } else {
                println!("{}", s.drs().dump());
            }
        }
        Cmd::Kb { file } => print!("{}", accepted(cli, file)?.kb_dump()),
        Cmd::Query { file, question } => println!("{}", accepted(cli, file)?.query(question)?.answer),
        Cmd::Exec {
            file,
            scaffold,
            answers,
            raw,
        } => {
            let s = accepted(cli, file)?;
            let scaffold = scaffold.as_deref().map(read).transpose()?;
            let scripted: Vec<String> = match answers {
                Some(p) => read(p)?
                    .lines()
                    .map(str::trim)
                    .filter(|l| !l.is_empty())
                    .map(String::from)
                    .collect(),
                None => Vec::new(),
            };
            let opts = ExecOptions {
                raw: *raw,
                depth_limit: cli.depth,
                ..ExecOptions::default()
            };
            let mut env = ConsoleEnv {
                scripted: scripted.into_iter(),
                input: io::stdin().lock(),
            };
            s.execute(scaffold.as_deref(), &opts, &mut env)?;
        }
        Cmd::Repl => repl(cli)?,
        Cmd::Serve { port } => serve(cli, *port)?,
    }
    Ok(())
}

const REPL_HELP: &str = "\
Sentences ending in `.` are staged and paraphrased; questions ending in `?` are answered.
  :accept          add the staged sentences to the knowledge base
  :discard         drop the staged sentences
  :kb              print the knowledge base
  :drs             print the cleaned DRS
  :lex RECORD      add a lexicon record, e.g. :lex noun(clerk, clerks, masc, count).
  :exec            execute the accepted text
  :save FILE       write the session file
  :load FILE       replace the session by a saved one
  :quit";

fn repl(cli: &Cli) -> Result<(), CliError> {
    let base = load_lexicon(cli.lexicon.as_deref(), None)?;
    let mut s = Session::new(base.clone());
    s.set_depth_limit(cli.depth);
    let stdin = io::stdin();
    let mut lines = stdin.lock().lines();
    println!("{REPL_HELP}");
    loop {
        print!("> ");
        io::stdout().flush().ok();
        let Some(Ok(line)) = lines.next() else { break };
        let line = line.trim();
        let (cmd, arg) = line.split_once(' ').unwrap_or((line, ""));
        let arg = arg.trim();
        let r: Result<(), CliError> = match cmd {
            "" => Ok(()),
            ":quit" | ":q" => break,
            ":help" => {
                println!("{REPL_HELP}");
                Ok(())
            }
            ":accept" => s.accept().map(|ws| ws.iter().for_each(|w| println!("{w}"))).map_err(Into::into),
            ":discard" => {
                println!("discarded {} sentence(s)", s.discard());
                Ok(())
            }
            ":kb" => {
                print!("{}", s.kb_dump());
                Ok(())
            }
            ":drs" => {
                println!("{}", s.drs().dump());
                Ok(())
            }
            ":lex" => s.edit_lexicon(arg).map_err(Into::into),
            ":exec" => {
                let opts = ExecOptions {
                    depth_limit: cli.depth,
                    ..ExecOptions::default()
                };
                let mut env = ConsoleEnv {
                    scripted: Vec::new().into_iter(),
                    input: io::stdin().lock(),
                };
                s.execute(None, &opts, &mut env).map(|_| ()).map_err(Into::into)
            }
            ":save" => fs::write(arg, s.save_json()).map_err(|source| CliError::Io {
                path: arg.into(),
                source,
            }),
            ":load" => read(Path::new(arg))
                .and_then(|json| Session::load_json(base.clone(), &json).map_err(Into::into))
                .map(|mut loaded| {
                    loaded.set_depth_limit(cli.depth);
                    s = loaded;
                }),
            _ if line.ends_with('?') => s.query(line).map(|a| println!("{}", a.answer)).map_err(Into::into),
            _ => {
                let sub = s.submit(line);
                for st in &sub.sentences {
                    println!("{}", st.paraphrase);
                    st.warnings.iter().for_each(|w| println!("{w}"));
                }
                if let Some(e) = sub.error {
                    println!("{e}");
                }
                Ok(())
            }
        };
        if let Err(e) = r {
            println!("{e}");
        }
    }
    Ok(())
}

fn serve(cli: &Cli, port: u16) -> Result<(), CliError> {
    let lex = load_lexicon(cli.lexicon.as_deref(), None)?;
    let state = acectl::service::AppState::new(lex).with_depth_limit(cli.depth);
    let rt = tokio::runtime::Runtime::new().map_err(CliError::Server)?;
    rt.block_on(async {
        let listener = tokio::net::TcpListener::bind(("127.0.0.1", port)).await?;
        eprintln!("listening on http://127.0.0.1:{port}");
        axum::serve(listener, acectl::service::router(state)).await
    })
    .map_err(CliError::Server)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::FAILURE
        }
    }
}
