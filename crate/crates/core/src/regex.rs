//! Character-level pattern compiler.
//!
//! Supported syntax: literals, grouping `( )`, alternation `|`, the postfix
//! operators `*`, `+`, `?`, character classes `[abc]`, `[a-c]`, `[^ab]`,
//! the wildcard `.` and `\` escapes. There are no anchors, captures or lazy
//! quantifiers. `.` and negated classes range over the declared alphabet.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::automata::{determinize, epsilon_remove, minimize, Dfa, Fst, StateId};
use crate::symbols::{Sym, SymbolTable, EPSILON};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PatternError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("character {ch:?} at byte {offset} is not in the alphabet")]
    Alphabet { ch: char, offset: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PatternAst {
    /// Matches only the empty string.
    Empty,
    Literal(char),
    Concat(Vec<PatternAst>),
    Alt(Vec<PatternAst>),
    Star(Box<PatternAst>),
    Plus(Box<PatternAst>),
    Optional(Box<PatternAst>),
    /// A set of characters; the empty set matches nothing.
    Class(BTreeSet<char>),
    Any,
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    sigma: &'a BTreeSet<char>,
}


impl<'a> Parser<'a> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn syntax(&self, offset: usize, message: impl Into<String>) -> PatternError {
        PatternError::Syntax {
            offset,
            message: message.into(),
        }
    }

    fn check(&self, ch: char, offset: usize) -> Result<char, PatternError> {
        if self.sigma.contains(&ch) {
            Ok(ch)
        } else {
            Err(PatternError::Alphabet { ch, offset })
        }
    }

    fn alt(&mut self) -> Result<PatternAst, PatternError> {
        let mut branches = vec![self.concat()?];
        while self.peek() == Some('|') {
            self.bump();
            branches.push(self.concat()?);
        }
        Ok(if branches.len() == 1 {
            branches.pop().unwrap()
        } else {
            PatternAst::Alt(branches)
        })
    }

    fn concat(&mut self) -> Result<PatternAst, PatternError> {
        let mut items = Vec::new();
        while let Some(c) = self.peek() {
            if c == '|' || c == ')' {
                break;
            }
            items.push(self.repeat()?);
        }
        Ok(match items.len() {
            0 => PatternAst::Empty,
            1 => items.pop().unwrap(),
            _ => PatternAst::Concat(items),
        })
    }

    fn repeat(&mut self) -> Result<PatternAst, PatternError> {
        let mut node = self.atom()?;
        while let Some(c) = self.peek() {
            node = match c {
                '*' => PatternAst::Star(Box::new(node)),
                '+' => PatternAst::Plus(Box::new(node)),
                '?' => PatternAst::Optional(Box::new(node)),
                _ => break,
            };
            self.bump();
        }
        Ok(node)
    }

    fn atom(&mut self) -> Result<PatternAst, PatternError> {
        let offset = self.pos;
        let c = self.bump().expect("atom called at end of input");
        match c {
            '(' => {
                let inner = self.alt()?;
                if self.bump() != Some(')') {
                    return Err(self.syntax(offset, "unclosed group"));
                }
                Ok(inner)
            }
            '[' => self.class(offset),
            '.' => Ok(PatternAst::Any),
            '\\' => match self.bump() {
                Some(e) => Ok(PatternAst::Literal(self.check(e, offset)?)),
                None => Err(self.syntax(offset, "dangling escape")),
            },
            '*' | '+' | '?' => Err(self.syntax(offset, format!("nothing to repeat before {c:?}"))),
            ')' => Err(self.syntax(offset, "unmatched ')'")),
            _ => Ok(PatternAst::Literal(self.check(c, offset)?)),
        }
    }

    fn class_char(&mut self, open: usize) -> Result<(char, usize), PatternError> {
        let offset = self.pos;
        match self.bump() {
            None => Err(self.syntax(open, "unclosed character class")),
            Some('\\') => match self.bump() {
                Some(e) => Ok((e, offset)),
                None => Err(self.syntax(offset, "dangling escape")),
            },
            Some(c) => Ok((c, offset)),
        }
    }

    fn class(&mut self, open: usize) -> Result<PatternAst, PatternError> {
        let negated = self.peek() == Some('^');
        if negated {
            self.bump();
        }
        let mut set = BTreeSet::new();
        loop {
            match self.peek() {
                None => return Err(self.syntax(open, "unclosed character class")),
                Some(']') => {
                    self.bump();
                    break;
                }
                Some(_) => {}
            }
            let (lo, lo_off) = self.class_char(open)?;
            let is_range = self.peek() == Some('-')
                && self.src[self.pos + 1..].chars().next().is_some_and(|c| c != ']');
            if is_range {
                self.bump();
                let (hi, hi_off) = self.class_char(open)?;
                if hi < lo {
                    return Err(self.syntax(lo_off, format!("reversed range {lo}-{hi}")));
                }
                // Endpoints must be alphabet characters; the range then
                // covers whatever alphabet characters lie between them.
                self.check(lo, lo_off)?;
                self.check(hi, hi_off)?;
                set.extend(self.sigma.range(lo..=hi).copied());
            } else {
                set.insert(self.check(lo, lo_off)?);
            }
        }
        if negated {
            set = self.sigma.difference(&set).copied().collect();
        }
        Ok(PatternAst::Class(set))
    }
}

/// Parses `pattern`, checking every literal against `sigma`.
pub fn parse_pattern(pattern: &str, sigma: &BTreeSet<char>) -> Result<PatternAst, PatternError> {
    let mut p = Parser {
        src: pattern,
        pos: 0,
        sigma,
    };
    let ast = p.alt()?;
    if p.pos < pattern.len() {
        return Err(p.syntax(p.pos, "unmatched ')'"));
    }
    Ok(ast)
}

/// The character alphabet declared by a symbol table: its single-character
/// tokens.
pub fn alphabet_chars(symbols: &SymbolTable) -> BTreeSet<char> {
    symbols
        .tokens()
        .iter()
        .filter_map(|t| {
            let mut it = t.chars();
            match (it.next(), it.next()) {
                (Some(c), None) => Some(c),
                _ => None,
            }
        })
        .collect()
}

struct Thompson<'a> {
    fst: Fst,
    symbols: &'a SymbolTable,
    sigma: &'a BTreeSet<char>,
}

impl Thompson<'_> {
    fn sym(&self, c: char) -> Sym {
        self.symbols
            .lookup_char(c)
            .expect("parser only admits alphabet characters")
    }

    fn build(&mut self, ast: &PatternAst) -> (StateId, StateId) {
        let s = self.fst.add_state();
        let e = self.fst.add_state();
        match ast {
            PatternAst::Empty => self.fst.add_acceptor_arc(s, EPSILON, e),
            PatternAst::Literal(c) => {
                let sym = self.sym(*c);
                self.fst.add_acceptor_arc(s, sym, e);
            }
            PatternAst::Class(set) => {
                for &c in set {
                    let sym = self.sym(c);
                    self.fst.add_acceptor_arc(s, sym, e);
                }
            }
            PatternAst::Any => {
                for &c in self.sigma {
                    let sym = self.sym(c);
                    self.fst.add_acceptor_arc(s, sym, e);
                }
            }
            PatternAst::Concat(items) => {
                let mut cur = s;
                for item in items {
                    let (is, ie) = self.build(item);
                    self.fst.add_acceptor_arc(cur, EPSILON, is);
                    cur = ie;
                }
                self.fst.add_acceptor_arc(cur, EPSILON, e);
            }
            PatternAst::Alt(branches) => {
                for b in branches {
                    let (bs, be) = self.build(b);
                    self.fst.add_acceptor_arc(s, EPSILON, bs);
                    self.fst.add_acceptor_arc(be, EPSILON, e);
                }
            }
            PatternAst::Star(inner) | PatternAst::Plus(inner) | PatternAst::Optional(inner) => {
                let (is, ie) = self.build(inner);
                self.fst.add_acceptor_arc(s, EPSILON, is);
                self.fst.add_acceptor_arc(ie, EPSILON, e);
                if !matches!(ast, PatternAst::Plus(_)) {
                    self.fst.add_acceptor_arc(s, EPSILON, e);
                }
                if !matches!(ast, PatternAst::Optional(_)) {
                    self.fst.add_acceptor_arc(ie, EPSILON, is);
                }
            }
        }
        (s, e)
    }
}

/// Thompson NFA (with ε arcs) for a parsed pattern.
pub fn thompson(ast: &PatternAst, symbols: &Arc<SymbolTable>) -> Fst {
    let sigma = alphabet_chars(symbols);
    let mut t = Thompson {
        fst: Fst::new(symbols.clone()),
        symbols,
        sigma: &sigma,
    };
    let (s, e) = t.build(ast);
    t.fst.add_acceptor_arc(0, EPSILON, s);
    t.fst.set_final(e, true);
    t.fst
}

/// Compiles `pattern` into a minimal, trim DFA over the single-character
/// symbols of `symbols`.
pub fn compile_pattern(pattern: &str, symbols: &Arc<SymbolTable>) -> Result<Dfa, PatternError> {
    let sigma = alphabet_chars(symbols);
    let ast = parse_pattern(pattern, &sigma)?;
    let nfa = epsilon_remove(&thompson(&ast, symbols));
    let dfa = determinize(&nfa).expect("Thompson NFA is an ε-free acceptor after ε-removal");
    Ok(minimize(&dfa))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{enumerate_language, is_deterministic};

    fn table(chars: &str) -> Arc<SymbolTable> {
        Arc::new(SymbolTable::from_tokens(chars.chars().map(String::from)).unwrap())
    }

    fn lang(d: &Dfa, n: usize) -> BTreeSet<String> {
        enumerate_language(d, n)
            .unwrap()
            .iter()
            .map(|s| d.symbols().concat(s))
            .collect()
    }

    #[test]
    fn literal_string_is_linear() {
        let d = compile_pattern("abaabcc", &table("abc")).unwrap();
        assert_eq!(d.num_states(), 8);
        assert_eq!(d.num_transitions(), 7);
        assert!(is_deterministic(&d));
    }

    #[test]
    fn duplicate_alternatives_collapse() {
        let t = table("abc");
        assert_eq!(
            compile_pattern("a|a", &t).unwrap(),
            compile_pattern("a", &t).unwrap()
        );
    }

    #[test]
    fn starred_group() {
        let d = compile_pattern("(ab)*c", &table("abc")).unwrap();
        let expected: BTreeSet<String> = ["c", "abc", "ababc"].iter().map(|s| s.to_string()).collect();
        assert_eq!(lang(&d, 5), expected);
    }

    #[test]
    fn classes_any_and_negation() {
        let t = table("abc");
        assert_eq!(lang(&compile_pattern("[a-b]", &t).unwrap(), 2).len(), 2);
        assert_eq!(lang(&compile_pattern("[^a]", &t).unwrap(), 2).len(), 2);
        assert_eq!(lang(&compile_pattern(".", &t).unwrap(), 2).len(), 3);
        assert_eq!(lang(&compile_pattern("a+", &t).unwrap(), 3).len(), 3);
        assert_eq!(lang(&compile_pattern("a?b", &t).unwrap(), 3).len(), 2);
    }

    #[test]
    fn empty_patterns() {
        let t = table("ab");
        let eps = compile_pattern("", &t).unwrap();
        assert_eq!(lang(&eps, 3), [String::new()].into_iter().collect());
        let none = compile_pattern("[]", &t).unwrap();
        assert!(lang(&none, 3).is_empty());
        assert_eq!(none.num_states(), 1);
    }

    #[test]
    fn errors_carry_offsets() {
        let t = table("ab");
        assert_eq!(
            compile_pattern("ab(a", &t),
            Err(PatternError::Syntax {
                offset: 2,
                message: "unclosed group".into()
            })
        );
        assert!(matches!(
            compile_pattern("a*|*", &t),
            Err(PatternError::Syntax { offset: 3, .. })
        ));
        assert!(matches!(
            compile_pattern("ab)", &t),
            Err(PatternError::Syntax { offset: 2, .. })
        ));
        assert_eq!(
            compile_pattern("abz", &t),
            Err(PatternError::Alphabet { ch: 'z', offset: 2 })
        );
    }
}
