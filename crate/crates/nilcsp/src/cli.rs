//! Command-line interface.

use std::io::{self, Read, Write};
use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use nilcsp_core::{
    check_all, classify, parse, parse_expr, print_source, CheckConfig, ErrorKind, Explorer, ParseError, ProcessTerm,
    SemanticError, SourceFile,
};

use crate::animate::{animate, AnimateError};
use crate::json::{LawReportJson, TracesJson};
use crate::server;
use crate::session::{SessionError, SessionStore};

pub const DEFAULT_PORT: u16 = 7420;

#[derive(Debug, Parser)]
#[command(name = "nilcsp", version, about = "Workbench for CSP processes with a silent nil event")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a source file and print its definitions.
    Parse {
        /// Source file, or `-` for standard input.
        file: PathBuf,
    },
    /// List the observable traces of a process.
    Traces {
        file: PathBuf,
        #[arg(long, short = 'p', value_name = "NAME")]
        process: String,
        /// Maximum number of observable events per trace.
        #[arg(long, short = 'd', default_value_t = 8)]
        depth: usize,
        #[arg(long)]
        json: bool,
    },
    /// Compare two process expressions by their observable traces.
    Equiv {
        file: PathBuf,
        /// First expression; may refer to the file's definitions.
        a: String,
        /// Second expression.
        b: String,
        #[arg(long, short = 'd', default_value_t = 8)]
        depth: usize,
    },
    /// Report whether a process is live, quiescent or terminating.
    Classify { file: PathBuf, name: String },
    /// Check the nil laws on generated instances.
    CheckLaws {
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        /// Largest generated term, in operators.
        #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u32).range(1..))]
        size: u32,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        #[arg(long, env = "NILCSP_SEED", default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Step through a process interactively.
    Animate { file: PathBuf, name: String },
    /// Run the HTTP session service.
    Serve {
        #[arg(long, default_value_t = DEFAULT_PORT)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        bind: IpAddr,
    },
}

/// Process exit statuses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum Exit {
    Success = 0,
    PropertyFails = 1,
    Usage = 2,
    Semantic = 3,
}

impl From<Exit> for ExitCode {
    fn from(exit: Exit) -> Self {
        ExitCode::from(exit as u8)
    }
}

#[derive(Debug, thiserror::Error)]
enum Failure {
    #[error("{path}: {source}")]
    Read { path: String, source: io::Error },
    #[error("{path}:{source}")]
    Parse { path: String, source: ParseError },
    #[error("{0}")]
    Semantic(#[from] SemanticError),
    #[error("unknown process {0}")]
    UnknownProcess(String),
    #[error("cannot listen on {addr}: {source}")]
    Bind { addr: SocketAddr, source: io::Error },
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Failure {
    fn exit(&self) -> Exit {
        match self {
            Failure::Parse { source, .. } if source.kind == ErrorKind::Resolution => Exit::Semantic,
            Failure::Semantic(_) | Failure::UnknownProcess(_) => Exit::Semantic,
            Failure::Read { .. } | Failure::Parse { .. } | Failure::Bind { .. } | Failure::Io(_) => Exit::Usage,
        }
    }
}

impl From<SessionError> for Failure {
    fn from(e: SessionError) -> Self {
        match e {
            SessionError::UnknownProcess(name) => Failure::UnknownProcess(name),
            SessionError::Semantic(e) => Failure::Semantic(e),
            other => Failure::Io(io::Error::other(other.to_string())),
        }
    }
}

impl From<AnimateError> for Failure {
    fn from(e: AnimateError) -> Self {
        match e {
            AnimateError::Session(e) => e.into(),
            AnimateError::Io(e) => Failure::Io(e),
        }
    }
}

/// Runs `cli`, writing results to `out` and diagnostics to `err`.
pub fn run(cli: Cli, input: impl io::BufRead, mut out: impl Write, mut err: impl Write) -> Exit {
    match execute(cli.command, input, &mut out, &mut err) {
        Ok(exit) => exit,
        Err(failure) => {
            let _ = writeln!(err, "error: {failure}");
            failure.exit()
        }
    }
}

fn execute(
    command: Command,
    input: impl io::BufRead,
    out: &mut impl Write,
    err: &mut impl Write,
) -> Result<Exit, Failure> {
    match command {
        Command::Parse { file } => {
            let source = load(&file)?;
            write!(out, "{}", print_source(&source.definitions, source.main.as_ref()))?;
            Ok(Exit::Success)
        }
        Command::Traces { file, process, depth, json } => {
            let source = load(&file)?;
            let defs = source.definitions.desugared();
            let (name, _) = defs.get_str(&process).ok_or_else(|| Failure::UnknownProcess(process.clone()))?;
            let set = Explorer::new(&defs).observable_traces(&ProcessTerm::Ref(name.clone()), depth)?;
            if json {
                serde_json::to_writer(&mut *out, &TracesJson::new(&process, &set)).map_err(io::Error::from)?;
                writeln!(out)?;
            } else {
                for trace in set.sorted() {
                    writeln!(out, "{trace}")?;
                }
            }
            Ok(Exit::Success)
        }
        Command::Equiv { file, a, b, depth } => {
            let source = load(&file)?;
            let defs = source.definitions.desugared();
            let expr = |text: &str| {
                parse_expr(text, &defs).map_err(|e| Failure::Parse { path: format!("expression {text:?}"), source: e })
            };
            let (a, b) = (expr(&a)?, expr(&b)?);
            let verdict = Explorer::new(&defs).trace_equiv(&a, &b, depth)?;
            match verdict.witness {
                None => {
                    writeln!(out, "equivalent (depth {depth})")?;
                    Ok(Exit::Success)
                }
                Some(witness) => {
                    writeln!(out, "NOT equivalent; witness {witness}")?;
                    Ok(Exit::PropertyFails)
                }
            }
        }
        Command::Classify { file, name } => {
            let source = load(&file)?;
            let defs = source.definitions.desugared();
            let (name, _) = defs.get_str(&name).ok_or_else(|| Failure::UnknownProcess(name.clone()))?;
            writeln!(out, "{}", classify(&ProcessTerm::Ref(name.clone()), &defs)?)?;
            Ok(Exit::Success)
        }
        Command::CheckLaws { samples, size, depth, seed, json } => {
            writeln!(err, "samples {samples}, size {size}, depth {depth}, seed {seed}")?;
            let reports = check_all(CheckConfig { samples, size_bound: size as usize, depth, seed });
            if json {
                let rendered: Vec<LawReportJson> = reports.iter().map(LawReportJson::from).collect();
                serde_json::to_writer_pretty(&mut *out, &rendered).map_err(io::Error::from)?;
                writeln!(out)?;
            } else {
                for report in &reports {
                    let verdict = if report.passed { "passed" } else { "FAILED" };
                    writeln!(
                        out,
                        "{} {verdict} ({} instances)  {}",
                        report.law,
                        report.instances_checked,
                        report.law.statement()
                    )?;
                    if let Some(note) = report.note {
                        writeln!(out, "    note: {note}")?;
                    }
                    for c in &report.counterexamples {
                        writeln!(out, "    counterexample: {}  witness {}", c.term, c.witness)?;
                    }
                }
            }
            Ok(if reports.iter().all(|r| r.passed) { Exit::Success } else { Exit::PropertyFails })
        }
        Command::Animate { file, name } => {
            let source = load(&file)?;
            animate(&source.definitions, &name, input, out)?;
            Ok(Exit::Success)
        }
        Command::Serve { port, bind } => {
            let addr = SocketAddr::new(bind, port);
            let runtime = tokio::runtime::Runtime::new()?;
            runtime.block_on(async {
                let listener = server::bind(addr).await.map_err(|source| Failure::Bind { addr, source })?;
                writeln!(err, "listening on http://{}", listener.local_addr()?)?;
                err.flush()?;
                server::serve(listener, Arc::new(SessionStore::default())).await?;
                Ok(Exit::Success)
            })
        }
    }
}

fn load(path: &Path) -> Result<SourceFile, Failure> {
    let display = path.display().to_string();
    let mut text = String::new();
    let read = if path.as_os_str() == "-" {
        io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    read.map_err(|source| Failure::Read { path: display.clone(), source })?;
    parse(&text).map_err(|source| Failure::Parse { path: display, source })
}
