//! Dense symbol ids shared by characters and subword tokens.
//!
//! Id `0` is the empty symbol (ε) and id `1` the failure symbol (φ). Every
//! other id names a token string. Single-character tokens double as the
//! character alphabet, so a pattern automaton over characters and a promoted
//! automaton over subwords live in the same id space.

use std::collections::HashMap;
use std::fmt;

/// A symbol id.
pub type Sym = u32;

/// The empty symbol.
pub const EPSILON: Sym = 0;
/// The failure symbol. Only ever used as an input label.
pub const PHI: Sym = 1;
/// First id available to tokens.
pub const FIRST_TOKEN: Sym = 2;

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum SymbolError {
    #[error("duplicate token {0:?}")]
    Duplicate(String),
    #[error("empty token")]
    Empty,
}

/// Bijection between token strings and symbol ids.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct SymbolTable {
    entries: Vec<String>,
    index: HashMap<String, Sym>,
}

impl fmt::Debug for SymbolTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.entries.iter()).finish()
    }
}

impl SymbolTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a table from tokens in id order, rejecting duplicates.
    pub fn from_tokens<I, S>(tokens: I) -> Result<Self, SymbolError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut table = Self::new();
        for tok in tokens {
            let tok = tok.into();
            if table.index.contains_key(&tok) {
                return Err(SymbolError::Duplicate(tok));
            }
            table.insert(tok)?;
        }
        Ok(table)
    }

    /// Adds `token` if absent and returns its id.
    pub fn insert(&mut self, token: impl Into<String>) -> Result<Sym, SymbolError> {
        let token = token.into();
        if token.is_empty() {
            return Err(SymbolError::Empty);
        }
        if let Some(&id) = self.index.get(&token) {
            return Ok(id);
        }
        let id = FIRST_TOKEN + self.entries.len() as Sym;
        self.index.insert(token.clone(), id);
        self.entries.push(token);
        Ok(id)
    }

    pub fn lookup(&self, token: &str) -> Option<Sym> {
        self.index.get(token).copied()
    }

    pub fn lookup_char(&self, c: char) -> Option<Sym> {
        let mut buf = [0u8; 4];
        self.lookup(c.encode_utf8(&mut buf))
    }

    /// Token string for a token id; `None` for ε, φ, and unassigned ids.
    pub fn token(&self, id: Sym) -> Option<&str> {
        id.checked_sub(FIRST_TOKEN)
            .and_then(|i| self.entries.get(i as usize))
            .map(String::as_str)
    }

    /// Human readable label, rendering ε and φ literally.
    pub fn label(&self, id: Sym) -> String {
        match id {
            EPSILON => "ε".to_string(),
            PHI => "φ".to_string(),
            _ => self
                .token(id)
                .map(str::to_string)
                .unwrap_or_else(|| format!("#{id}")),
        }
    }

    /// Number of token entries (excluding the reserved ids).
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Token strings in id order.
    pub fn tokens(&self) -> &[String] {
        &self.entries
    }

    /// All token ids in ascending order.
    pub fn ids(&self) -> impl Iterator<Item = Sym> + '_ {
        (0..self.entries.len() as Sym).map(|i| i + FIRST_TOKEN)
    }

    pub fn contains(&self, id: Sym) -> bool {
        self.token(id).is_some()
    }

    /// Ids of the single-character tokens, i.e. the character alphabet.
    pub fn char_ids(&self) -> Vec<Sym> {
        self.ids()
            .filter(|&id| self.token(id).is_some_and(|t| t.chars().count() == 1))
            .collect()
    }

    /// Concatenated surface string of a token sequence.
    pub fn concat(&self, seq: &[Sym]) -> String {
        seq.iter().filter_map(|&s| self.token(s)).collect()
    }

    /// Space separated rendering of a token sequence.
    pub fn render(&self, seq: &[Sym]) -> String {
        seq.iter()
            .map(|&s| self.label(s))
            .collect::<Vec<_>>()
            .join(" ")
    }
}
