//! Vocabulary and merge-list files, and the JSON automaton format.
//!
//! Automaton documents look like
//!
//! ```json
//! {
//!   "symbols": ["a", "b", "ab"],
//!   "num_states": 2,
//!   "start": 0,
//!   "finals": [1],
//!   "transitions": [
//!     [0, 2, 2, 1]
//!   ]
//! }
//! ```
//!
//! `symbols[i]` names id `i + 2`; ids 0 and 1 are ε and φ. `finals` and
//! `transitions` are sorted.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::automata::{Dfa, Fst, FstError, Transition};
use crate::symbols::{SymbolTable, FIRST_TOKEN};
use crate::tokenize::{BpeError, BpeTokenizer, VocabError, Vocabulary};

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error(transparent)]
    Vocab(#[from] VocabError),
    #[error(transparent)]
    Bpe(#[from] BpeError),
    #[error("at `{path}`: {message}")]
    Schema { path: String, message: String },
    #[error(transparent)]
    Fst(#[from] FstError),
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> IoError + '_ {
    move |source| IoError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn read(path: &Path) -> Result<String, IoError> {
    fs::read_to_string(path).map_err(io_err(path))
}

/// Writes through a temporary file in the target directory and renames it
/// into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), IoError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err(path))?;
    tmp.write_all(contents).map_err(io_err(path))?;
    tmp.persist(path).map_err(|e| io_err(path)(e.error))?;
    Ok(())
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    let text = text.strip_suffix('\n').unwrap_or(text);
    let lines: Box<dyn Iterator<Item = &str>> = if text.is_empty() {
        Box::new(std::iter::empty())
    } else {
        Box::new(text.split('\n'))
    };
    lines
        .enumerate()
        .map(|(i, l)| (i + 1, l.strip_suffix('\r').unwrap_or(l)))
}

/// One token per line, in id order.
pub fn parse_vocab(text: &str) -> Result<Vocabulary, IoError> {
    let mut table = SymbolTable::new();
    for (line, tok) in content_lines(text) {
        let err = |message: String| IoError::Line { line, message };
        if tok.is_empty() {
            return Err(err("empty token".into()));
        }
        if tok.chars().any(char::is_whitespace) {
            return Err(err(format!("token {tok:?} contains whitespace")));
        }
        if table.lookup(tok).is_some() {
            return Err(err(format!("duplicate token {tok:?}")));
        }
        table.insert(tok).map_err(|e| err(e.to_string()))?;
    }
    Ok(Vocabulary::new(Arc::new(table))?)
}

pub fn load_vocab(path: &Path) -> Result<Vocabulary, IoError> {
    parse_vocab(&read(path)?)
}

/// `left right` per line in priority order. Lines starting with `#` and
/// blank lines are skipped.
pub fn parse_merges(text: &str, v: &Vocabulary) -> Result<BpeTokenizer, IoError> {
    let mut pairs = Vec::new();
    for (line, l) in content_lines(text) {
        if l.starts_with('#') || l.trim().is_empty() {
            continue;
        }
        let err = |message: String| IoError::Line { line, message };
        let parts: Vec<&str> = l.split(' ').collect();
        let [a, b] = parts[..] else {
            return Err(err(format!("expected two space-separated tokens, got {l:?}")));
        };
        let id = |s: &str| {
            v.lookup(s)
                .ok_or_else(|| err(format!("unknown token {s:?}")))
        };
        pairs.push((id(a)?, id(b)?));
    }
    Ok(BpeTokenizer::new(v.clone(), &pairs)?)
}

pub fn load_merges(path: &Path, v: &Vocabulary) -> Result<BpeTokenizer, IoError> {
    parse_merges(&read(path)?, v)
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    symbols: Vec<String>,
    num_states: usize,
    start: u32,
    finals: Vec<u32>,
    transitions: Vec<[u32; 4]>,
}

/// Serializes a machine. Output is deterministic for a given machine.
pub fn automaton_to_string(a: &Fst) -> String {
    let mut transitions: Vec<[u32; 4]> = a
        .transitions()
        .map(|t| [t.src, t.input, t.output, t.dst])
        .collect();
    transitions.sort_unstable();
    let mut out = String::from("{\n");
    out += &format!("  \"symbols\": {},\n", json(a.symbols().tokens()));
    out += &format!("  \"num_states\": {},\n", a.num_states());
    out += &format!("  \"start\": {},\n", a.start());
    out += &format!("  \"finals\": {},\n", json(&a.finals().collect::<Vec<_>>()));
    if transitions.is_empty() {
        out += "  \"transitions\": []\n";
    } else {
        out += "  \"transitions\": [\n";
        let rows: Vec<String> = transitions
            .iter()
            .map(|t| format!("    {}", json(t)))
            .collect();
        out += &rows.join(",\n");
        out += "\n  ]\n";
    }
    out += "}\n";
    out
}

fn json<T: Serialize + ?Sized>(v: &T) -> String {
    serde_json::to_string(v).expect("plain data serializes")
}

fn schema(path: impl Into<String>, message: impl Into<String>) -> IoError {
    IoError::Schema {
        path: path.into(),
        message: message.into(),
    }
}

/// Parses and validates a machine document.
pub fn automaton_from_str(text: &str) -> Result<Fst, IoError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let doc: Document = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        schema(path, e.into_inner().to_string())
    })?;

    let symbols =
        SymbolTable::from_tokens(doc.symbols.iter().cloned()).map_err(|e| schema("symbols", e.to_string()))?;
    if doc.num_states == 0 {
        return Err(schema("num_states", "must be at least 1"));
    }
    let n = doc.num_states as u32;
    if doc.start >= n {
        return Err(schema("start", format!("{} out of range", doc.start)));
    }
    for (i, w) in doc.finals.iter().enumerate() {
        if *w >= n {
            return Err(schema(format!("finals[{i}]"), format!("state {w} out of range")));
        }
        if i > 0 && doc.finals[i - 1] >= *w {
            return Err(schema(format!("finals[{i}]"), "not strictly increasing"));
        }
    }
    let max_sym = FIRST_TOKEN + symbols.len() as u32;
    for (i, t) in doc.transitions.iter().enumerate() {
        for (j, field) in ["src", "input", "output", "dst"].iter().enumerate() {
            let bound = if j == 0 || j == 3 { n } else { max_sym };
            if t[j] >= bound {
                return Err(schema(
                    format!("transitions[{i}][{j}]"),
                    format!("{field} {} out of range", t[j]),
                ));
            }
        }
        if i > 0 && doc.transitions[i - 1] >= *t {
            return Err(schema(format!("transitions[{i}]"), "not strictly increasing"));
        }
    }
    let transitions = doc.transitions.iter().map(|t| Transition {
        src: t[0],
        input: t[1],
        output: t[2],
        dst: t[3],
    });
    Ok(Fst::from_parts(
        Arc::new(symbols),
        doc.num_states,
        doc.start,
        doc.finals.iter().copied(),
        transitions,
    )?)
}

pub fn save_automaton(a: &Fst, path: &Path) -> Result<(), IoError> {
    write_atomic(path, automaton_to_string(a).as_bytes())
}

pub fn load_fst(path: &Path) -> Result<Fst, IoError> {
    automaton_from_str(&read(path)?)
}

/// Loads a machine and checks that it is a deterministic acceptor.
pub fn load_automaton(path: &Path) -> Result<Dfa, IoError> {
    Ok(Dfa::try_from_fst(load_fst(path)?)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::canonicalize;
    use crate::promote::promote_agnostic;
    use crate::regex::compile_pattern;

    #[test]
    fn vocab_files() {
        let v = parse_vocab("a\nb\nab\n").unwrap();
        assert_eq!(v.len(), 3);
        assert_eq!(v.chars().keys().collect::<String>(), "ab");
        let v = parse_vocab("a\nb\nn\ns\nba\nna\nban\nbana").unwrap();
        assert_eq!(v.len(), 8);
        assert!(matches!(
            parse_vocab("ab\n"),
            Err(IoError::Vocab(VocabError::MissingChar { ch: 'a', .. }))
        ));
        assert!(matches!(parse_vocab("a\na\n"), Err(IoError::Line { line: 2, .. })));
        assert!(matches!(parse_vocab("a\n\nb\n"), Err(IoError::Line { line: 2, .. })));
        assert!(matches!(parse_vocab("a\na b\n"), Err(IoError::Line { line: 2, .. })));
        assert!(parse_vocab("").unwrap().is_empty());
    }

    #[test]
    fn merges_files() {
        let v = parse_vocab("t\no\np\nl\ng\ny\nto\ngy\nlo\npo\nlogy\n").unwrap();
        let t = parse_merges("#version: 0.2\nt o\ng y\nl o\np o\nlo gy\n", &v).unwrap();
        assert_eq!(t.merges().len(), 5);
        assert_eq!(v.token(t.merges()[4].result), Some("logy"));

        let v = parse_vocab("x\ny\n").unwrap();
        assert!(parse_merges("", &v).unwrap().merges().is_empty());
        assert!(matches!(
            parse_merges("x y\n", &v),
            Err(IoError::Bpe(BpeError::MissingResult { .. }))
        ));
        assert!(matches!(parse_merges("x z\n", &v), Err(IoError::Line { line: 1, .. })));
        assert!(matches!(parse_merges("x y y\n", &v), Err(IoError::Line { line: 1, .. })));
    }

    #[test]
    fn round_trip() {
        let v = Vocabulary::from_tokens(["a", "b", "c", "ab", "abc", "bc"]).unwrap();
        let a = compile_pattern("abaabcc", v.symbols()).unwrap();
        let r = promote_agnostic(&a, &v).unwrap().dfa;
        let text = automaton_to_string(&r);
        let back = Dfa::try_from_fst(automaton_from_str(&text).unwrap()).unwrap();
        assert_eq!(canonicalize(&back), canonicalize(&r));
        assert_eq!(automaton_to_string(&back), text);

        let e = Fst::empty(v.symbols().clone());
        assert_eq!(automaton_from_str(&automaton_to_string(&e)).unwrap(), e);
    }

    #[test]
    fn files_on_disk() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("m.json");
        let v = Vocabulary::from_tokens(["a", "b"]).unwrap();
        let a = compile_pattern("a*b", v.symbols()).unwrap();
        save_automaton(&a, &p).unwrap();
        assert_eq!(canonicalize(&load_automaton(&p).unwrap()), canonicalize(&a));
        assert!(matches!(
            load_automaton(&dir.path().join("missing.json")),
            Err(IoError::Io { .. })
        ));
    }

    #[test]
    fn schema_errors_name_fields() {
        let ok = r#"{"symbols":["a"],"num_states":2,"start":0,"finals":[1],"transitions":[[0,2,2,1]]}"#;
        assert!(automaton_from_str(ok).is_ok());
        let path = |text: &str| match automaton_from_str(text) {
            Err(IoError::Schema { path, .. }) => path,
            other => panic!("{other:?}"),
        };
        assert_eq!(path(&ok.replace("[1]", "[1,0]")), "finals[1]");
        assert_eq!(path(&ok.replace("[1]", "[7]")), "finals[0]");
        assert_eq!(path(&ok.replace("[1]", "[\"x\"]")), "finals[0]");
        assert_eq!(path(&ok.replace("[0,2,2,1]", "[0,9,2,1]")), "transitions[0][1]");
        assert_eq!(path(&ok.replace("\"start\":0,", "")), ".");
        assert_eq!(path(&ok.replace("\"num_states\":2", "\"num_states\":0")), "num_states");
    }
}
