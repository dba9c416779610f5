//! Command-line front end. Exit codes: 0 success, 1 validation or property
//! failure, 2 usage error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::automata::{enumerate_language, FstError};
use crate::dot::export_dot;
use crate::guided::{allowed_tokens, constraint_prefix, GuidedError};
use crate::io::{load_automaton, load_fst, load_merges, load_vocab, save_automaton, IoError};
use crate::oracle::{first_mismatch, Canonical, Mismatch};
use crate::promote::{
    promote_agnostic, promote_bpe_with, promote_maxmatch, PromoteError, PromoteOptions,
    PromotionResult,
};
use crate::regex::{compile_pattern, PatternError};
use crate::symbols::Sym;
use crate::tokenize::{
    bpe_tokenize, bpe_tokenize_iterative, maxmatch_tokenize, BpeTokenizer, TokenizeError,
    Vocabulary,
};

#[derive(Debug, Parser)]
#[command(name = "tokenfst", version, about = "Promote character patterns to subword automata")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PromoteMode {
    Agnostic,
    Maxmatch,
    Bpe,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TokenizeMode {
    Maxmatch,
    Bpe,
    BpeIterative,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compile a pattern and promote it to a subword DFA.
    Promote {
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        vocab: PathBuf,
        #[arg(long)]
        merges: Option<PathBuf>,
        #[arg(long, value_enum)]
        mode: PromoteMode,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Print per-stage sizes and timings.
        #[arg(long)]
        stats: bool,
        /// Write each intermediate BPE stage to this directory.
        #[arg(long)]
        dump_stages: Option<PathBuf>,
    },
    /// Tokenize a string.
    Tokenize {
        #[arg(long, value_enum)]
        mode: TokenizeMode,
        #[arg(long)]
        vocab: PathBuf,
        #[arg(long)]
        merges: Option<PathBuf>,
        #[arg(long)]
        input: String,
    },
    /// List accepted sequences up to a length.
    Enumerate {
        #[arg(long)]
        automaton: PathBuf,
        #[arg(long)]
        max_len: usize,
    },
    /// Compare a promotion against the string tokenizer.
    Check {
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        vocab: PathBuf,
        #[arg(long)]
        merges: Option<PathBuf>,
        #[arg(long, value_enum)]
        mode: PromoteMode,
        #[arg(long)]
        max_len: usize,
    },
    /// Print the tokens allowed after a prefix, one per line.
    Mask {
        #[arg(long)]
        automaton: PathBuf,
        /// Space-separated tokens.
        #[arg(long, default_value = "")]
        prefix: String,
        /// Read the prefix and print the mask as numeric ids.
        #[arg(long)]
        ids: bool,
    },
    /// Render a stored machine as Graphviz DOT.
    Dot {
        #[arg(long)]
        automaton: PathBuf,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Io(#[from] IoError),
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error(transparent)]
    Promote(#[from] PromoteError),
    #[error(transparent)]
    Tokenize(#[from] TokenizeError),
    #[error(transparent)]
    Guided(#[from] GuidedError),
    #[error(transparent)]
    Fst(#[from] FstError),
    #[error("{0}")]
    Usage(String),
    #[error("write failed: {0}")]
    Output(#[from] std::io::Error),
}

/// Entry point for the binary.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(args, &mut stdout.lock(), &mut stderr.lock())
}

/// Runs one command, writing to the given streams, and returns the exit
/// code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn load_bpe(v: &Vocabulary, merges: Option<&Path>) -> Result<BpeTokenizer, CliError> {
    let m = merges.ok_or_else(|| CliError::Usage("--merges is required for bpe modes".into()))?;
    Ok(load_merges(m, v)?)
}

fn do_promote(
    pattern: &str,
    v: &Vocabulary,
    merges: Option<&Path>,
    mode: PromoteMode,
    opts: PromoteOptions,
) -> Result<(crate::automata::Dfa, PromotionResult, Option<BpeTokenizer>), CliError> {
    let a = compile_pattern(pattern, v.symbols())?;
    let (r, bpe) = match mode {
        PromoteMode::Agnostic => (promote_agnostic(&a, v)?, None),
        PromoteMode::Maxmatch => (promote_maxmatch(&a, v)?, None),
        PromoteMode::Bpe => {
            let t = load_bpe(v, merges)?;
            (promote_bpe_with(&a, &t, opts)?, Some(t))
        }
    };
    Ok((a, r, bpe))
}

fn render(v: &Vocabulary, seq: &[Sym]) -> String {
    v.symbols().render(seq)
}

fn execute(cmd: Command, out: &mut dyn Write) -> Result<i32, CliError> {
    match cmd {
        Command::Promote {
            pattern,
            vocab,
            merges,
            mode,
            out: path,
            dot,
            stats,
            dump_stages,
        } => {
            let v = load_vocab(&vocab)?;
            let opts = PromoteOptions {
                keep_intermediates: dump_stages.is_some(),
            };
            let (_, r, _) = do_promote(&pattern, &v, merges.as_deref(), mode, opts)?;
            save_automaton(&r.dfa, &path)?;
            if let Some(d) = dot {
                export_dot(&r.dfa, &d)?;
            }
            if let Some(dir) = dump_stages {
                std::fs::create_dir_all(&dir).map_err(|source| IoError::Io {
                    path: dir.clone(),
                    source,
                })?;
                for (i, s) in r.intermediates.iter().enumerate() {
                    save_automaton(s, &dir.join(format!("stage-{:02}.json", i + 1)))?;
                }
            }
            if stats {
                writeln!(out, "stage\tstates\ttransitions\tdeterministic\tmicros")?;
                for s in &r.stats.stages {
                    writeln!(
                        out,
                        "{}\t{}\t{}\t{}\t{}",
                        s.label,
                        s.states,
                        s.transitions,
                        s.deterministic,
                        s.elapsed.as_micros()
                    )?;
                }
                writeln!(out, "total\t\t\t\t{}", r.stats.total.as_micros())?;
            }
            Ok(0)
        }
        Command::Tokenize {
            mode,
            vocab,
            merges,
            input,
        } => {
            let v = load_vocab(&vocab)?;
            let seq = match mode {
                TokenizeMode::Maxmatch => maxmatch_tokenize(&v, &input)?,
                TokenizeMode::Bpe => bpe_tokenize(&load_bpe(&v, merges.as_deref())?, &input)?,
                TokenizeMode::BpeIterative => {
                    bpe_tokenize_iterative(&load_bpe(&v, merges.as_deref())?, &input)?
                }
            };
            writeln!(out, "{}", render(&v, &seq))?;
            Ok(0)
        }
        Command::Enumerate { automaton, max_len } => {
            let a = load_fst(&automaton)?;
            let mut lang: Vec<Vec<Sym>> = enumerate_language(&a, max_len)?.into_iter().collect();
            lang.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
            for s in lang {
                writeln!(out, "{}", a.symbols().render(&s))?;
            }
            Ok(0)
        }
        Command::Check {
            pattern,
            vocab,
            merges,
            mode,
            max_len,
        } => {
            let v = load_vocab(&vocab)?;
            let (a, r, bpe) =
                do_promote(&pattern, &v, merges.as_deref(), mode, PromoteOptions::default())?;
            let c = match (&bpe, mode) {
                (Some(t), _) => Canonical::Bpe(t),
                (None, PromoteMode::Maxmatch) => Canonical::MaxMatch(&v),
                (None, _) => Canonical::Agnostic(&v),
            };
            match first_mismatch(&a, &r.dfa, c, max_len, max_len)? {
                None => {
                    writeln!(out, "ok")?;
                    Ok(0)
                }
                Some(m) => {
                    let (kind, t) = match &m {
                        Mismatch::Missing(t) => ("missing", t),
                        Mismatch::Unexpected(t) => ("unexpected", t),
                    };
                    writeln!(out, "mismatch: {kind}: {}", render(&v, t))?;
                    Ok(1)
                }
            }
        }
        Command::Mask {
            automaton,
            prefix,
            ids,
        } => {
            let d = load_automaton(&automaton)?;
            let sym = d.symbols().clone();
            let toks: Vec<Sym> = prefix
                .split_whitespace()
                .map(|t| {
                    let id = if ids {
                        t.parse::<Sym>().ok().filter(|&i| sym.token(i).is_some())
                    } else {
                        sym.lookup(t)
                    };
                    id.ok_or_else(|| CliError::Usage(format!("unknown token {t:?} in prefix")))
                })
                .collect::<Result<_, _>>()?;
            let s = constraint_prefix(&d, &toks)?;
            for t in allowed_tokens(&s) {
                if ids {
                    writeln!(out, "{t}")?;
                } else {
                    writeln!(out, "{}", sym.label(t))?;
                }
            }
            Ok(0)
        }
        Command::Dot { automaton, out: path } => {
            let a = load_fst(&automaton)?;
            match path {
                Some(p) => export_dot(&a, &p)?,
                None => write!(out, "{}", crate::dot::to_dot(&a))?,
            }
            Ok(0)
        }
    }
}
