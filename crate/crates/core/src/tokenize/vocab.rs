use std::collections::BTreeMap;
use std::sync::Arc;

use super::TokenizeError;
use crate::symbols::{Sym, SymbolError, SymbolTable};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VocabError {
    #[error(transparent)]
    Symbol(#[from] SymbolError),
    #[error("character {ch:?} (in token {token:?}) has no single-character token")]
    MissingChar { ch: char, token: String },
}

/// A subword vocabulary: every token of the symbol table, with the
/// single-character tokens forming the character alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    symbols: Arc<SymbolTable>,
    chars: BTreeMap<char, Sym>,
    max_token_len: usize,
}

impl Vocabulary {
    /// Wraps a symbol table, checking that every character used inside any
    /// token is itself a token.
    pub fn new(symbols: Arc<SymbolTable>) -> Result<Self, VocabError> {
        let mut chars = BTreeMap::new();
        let mut max_token_len = 0;
        for id in symbols.ids() {
            let tok = symbols.token(id).unwrap_or_default();
            let mut it = tok.chars();
            if let (Some(c), None) = (it.next(), it.next()) {
                chars.insert(c, id);
            }
            max_token_len = max_token_len.max(tok.chars().count());
        }
        for tok in symbols.tokens() {
            if let Some(ch) = tok.chars().find(|c| !chars.contains_key(c)) {
                return Err(VocabError::MissingChar {
                    ch,
                    token: tok.clone(),
                });
            }
        }
        Ok(Self {
            symbols,
            chars,
            max_token_len,
        })
    }

    pub fn from_tokens<I, S>(tokens: I) -> Result<Self, VocabError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self::new(Arc::new(SymbolTable::from_tokens(tokens)?))
    }

    pub fn symbols(&self) -> &Arc<SymbolTable> {
        &self.symbols
    }

    /// Character alphabet Σ with the symbol id of each character.
    pub fn chars(&self) -> &BTreeMap<char, Sym> {
        &self.chars
    }

    pub fn char_ids(&self) -> impl Iterator<Item = Sym> + '_ {
        self.chars.values().copied()
    }

    pub fn token_ids(&self) -> impl Iterator<Item = Sym> + '_ {
        self.symbols.ids()
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Longest token length in characters.
    pub fn max_token_len(&self) -> usize {
        self.max_token_len
    }

    pub fn lookup(&self, token: &str) -> Option<Sym> {
        self.symbols.lookup(token)
    }

    pub fn token(&self, id: Sym) -> Option<&str> {
        self.symbols.token(id)
    }

    pub fn is_char(&self, id: Sym) -> bool {
        self.token(id).is_some_and(|t| t.chars().count() == 1)
    }

    /// Character symbol ids of `w`.
    pub fn encode_chars(&self, w: &str) -> Result<Vec<Sym>, TokenizeError> {
        w.char_indices()
            .map(|(offset, ch)| {
                self.chars
                    .get(&ch)
                    .copied()
                    .ok_or(TokenizeError::UnknownChar { ch, offset })
            })
            .collect()
    }

    /// Token strings for a sequence of ids.
    pub fn decode(&self, seq: &[Sym]) -> Vec<&str> {
        seq.iter().filter_map(|&s| self.token(s)).collect()
    }
}
