use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::Arc;

use super::{TokenizeError, VocabError, Vocabulary};
use crate::symbols::{Sym, SymbolTable};

/// One merge rule `left right -> result`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Merge {
    pub left: Sym,
    pub right: Sym,
    pub result: Sym,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BpeError {
    #[error("merge {index} references unknown token id {id}")]
    UnknownToken { index: usize, id: Sym },
    #[error("merge {index}: {concat:?} is not in the vocabulary")]
    MissingResult { index: usize, concat: String },
    #[error("merge {index}: {concat:?} is already produced by merge {first}")]
    DuplicateResult {
        index: usize,
        first: usize,
        concat: String,
    },
    #[error("merge {index}: operand {operand:?} is neither a character nor produced by an earlier merge")]
    OperandUnavailable { index: usize, operand: String },
    #[error("token {0:?} is not produced by any merge")]
    UnmergedToken(String),
    #[error(transparent)]
    Vocab(#[from] VocabError),
}

/// A trained BPE tokenizer: vocabulary plus merges in priority order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BpeTokenizer {
    vocab: Vocabulary,
    merges: Vec<Merge>,
    ranks: HashMap<(Sym, Sym), usize>,
}

impl BpeTokenizer {
    /// Validates `pairs` against `vocab`. Merge operands must be characters
    /// or results of earlier merges, results must be distinct vocabulary
    /// tokens, and every multi-character token must be some merge's result.
    pub fn new(vocab: Vocabulary, pairs: &[(Sym, Sym)]) -> Result<Self, BpeError> {
        let mut merges = Vec::with_capacity(pairs.len());
        let mut ranks = HashMap::new();
        let mut produced: HashMap<Sym, usize> = HashMap::new();
        for (index, &(left, right)) in pairs.iter().enumerate() {
            let mut concat = String::new();
            for id in [left, right] {
                let tok = vocab
                    .token(id)
                    .ok_or(BpeError::UnknownToken { index, id })?;
                if !vocab.is_char(id) && !produced.contains_key(&id) {
                    return Err(BpeError::OperandUnavailable {
                        index,
                        operand: tok.to_string(),
                    });
                }
                concat.push_str(tok);
            }
            let result = vocab.lookup(&concat).ok_or_else(|| BpeError::MissingResult {
                index,
                concat: concat.clone(),
            })?;
            if let Some(&first) = produced.get(&result) {
                return Err(BpeError::DuplicateResult {
                    index,
                    first,
                    concat,
                });
            }
            produced.insert(result, index);
            ranks.insert((left, right), index);
            merges.push(Merge {
                left,
                right,
                result,
            });
        }
        if let Some(id) = vocab
            .token_ids()
            .find(|&id| !vocab.is_char(id) && !produced.contains_key(&id))
        {
            return Err(BpeError::UnmergedToken(
                vocab.token(id).unwrap_or_default().to_string(),
            ));
        }
        Ok(Self {
            vocab,
            merges,
            ranks,
        })
    }

    /// Convenience constructor from token strings.
    pub fn from_strs(tokens: &[&str], merges: &[(&str, &str)]) -> Result<Self, BpeError> {
        let vocab = Vocabulary::from_tokens(tokens.iter().copied())?;
        let mut pairs = Vec::with_capacity(merges.len());
        for (index, (a, b)) in merges.iter().enumerate() {
            let id = |s: &str| {
                vocab.lookup(s).ok_or_else(|| BpeError::MissingResult {
                    index,
                    concat: s.to_string(),
                })
            };
            pairs.push((id(a)?, id(b)?));
        }
        Self::new(vocab, &pairs)
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn merges(&self) -> &[Merge] {
        &self.merges
    }

    /// Priority of a pair (lower is applied first).
    pub fn rank(&self, left: Sym, right: Sym) -> Option<usize> {
        self.ranks.get(&(left, right)).copied()
    }

    /// Tokens observable before merge `i` runs: the characters plus the
    /// results of merges `0..i`.
    pub fn alphabet_before(&self, i: usize) -> BTreeSet<Sym> {
        self.vocab
            .char_ids()
            .chain(self.merges[..i].iter().map(|m| m.result))
            .collect()
    }
}

/// Replaces every non-overlapping adjacent `(left, right)` with the merge
/// result, scanning left to right. A fresh result never pairs within the
/// same call.
pub fn apply_merge(seq: &[Sym], m: &Merge) -> Vec<Sym> {
    let mut out = Vec::with_capacity(seq.len());
    let mut i = 0;
    while i < seq.len() {
        if i + 1 < seq.len() && seq[i] == m.left && seq[i + 1] == m.right {
            out.push(m.result);
            i += 2;
        } else {
            out.push(seq[i]);
            i += 1;
        }
    }
    out
}

/// Repeatedly applies the highest-priority merge present in the sequence
/// until none applies.
pub fn bpe_tokenize(t: &BpeTokenizer, w: &str) -> Result<Vec<Sym>, TokenizeError> {
    let mut seq = t.vocab.encode_chars(w)?;
    loop {
        let best = seq
            .windows(2)
            .filter_map(|p| t.rank(p[0], p[1]))
            .min();
        match best {
            Some(rank) => seq = apply_merge(&seq, &t.merges[rank]),
            None => return Ok(seq),
        }
    }
}

/// Applies every merge once, in priority order.
pub fn bpe_tokenize_iterative(t: &BpeTokenizer, w: &str) -> Result<Vec<Sym>, TokenizeError> {
    let seq = t.vocab.encode_chars(w)?;
    Ok(t.merges.iter().fold(seq, |seq, m| apply_merge(&seq, m)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrainStatus {
    Complete,
    /// No pair was left to merge; fewer merges than requested were learned.
    Exhausted { learned: usize },
}

/// Learns up to `k` merges from `corpus` (one character sequence per word).
///
/// Each step merges the most frequent adjacent pair; ties go to the pair
/// whose first occurrence (word order, then position) is earliest. Pairs
/// whose concatenation is already a token are skipped so merge results
/// stay unique.
pub fn bpe_train(corpus: &[&str], k: usize) -> Result<(BpeTokenizer, TrainStatus), BpeError> {
    let chars: BTreeSet<char> = corpus.iter().flat_map(|w| w.chars()).collect();
    let mut table = SymbolTable::new();
    for c in &chars {
        table.insert(c.to_string()).expect("characters are non-empty");
    }
    let mut words: Vec<Vec<Sym>> = corpus
        .iter()
        .map(|w| w.chars().map(|c| table.lookup_char(c).unwrap()).collect())
        .collect();
    let mut pairs = Vec::new();
    let mut status = TrainStatus::Complete;

    for _ in 0..k {
        let mut counts: HashMap<(Sym, Sym), (usize, usize)> = HashMap::new();
        let mut order = 0usize;
        for w in &words {
            for p in w.windows(2) {
                let e = counts.entry((p[0], p[1])).or_insert((0, order));
                e.0 += 1;
                order += 1;
            }
        }
        let existing: HashSet<&str> = table.tokens().iter().map(String::as_str).collect();
        let best = counts
            .iter()
            .filter(|((a, b), _)| {
                let cat = format!("{}{}", table.token(*a).unwrap(), table.token(*b).unwrap());
                !existing.contains(cat.as_str())
            })
            .max_by(|x, y| x.1 .0.cmp(&y.1 .0).then(y.1 .1.cmp(&x.1 .1)))
            .map(|(&p, _)| p);
        let Some((a, b)) = best else {
            status = TrainStatus::Exhausted {
                learned: pairs.len(),
            };
            break;
        };
        let cat = format!("{}{}", table.token(a).unwrap(), table.token(b).unwrap());
        let result = table.insert(cat).expect("non-empty");
        let m = Merge {
            left: a,
            right: b,
            result,
        };
        for w in &mut words {
            *w = apply_merge(w, &m);
        }
        pairs.push((a, b));
    }
    let vocab = Vocabulary::new(Arc::new(table))?;
    Ok((BpeTokenizer::new(vocab, &pairs)?, status))
}
