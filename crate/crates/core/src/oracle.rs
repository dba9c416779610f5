//! Reference languages computed from string tokenizers, for checking
//! promoted automata.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};

use crate::automata::{enumerate_language, Dfa, FstError, DEFAULT_PATH_CAP};
use crate::symbols::Sym;
use crate::tokenize::{bpe_tokenize, maxmatch_tokenize, BpeTokenizer, Vocabulary};

/// How a surface string maps to token sequences.
#[derive(Debug, Clone, Copy)]
pub enum Canonical<'a> {
    /// Every segmentation.
    Agnostic(&'a Vocabulary),
    MaxMatch(&'a Vocabulary),
    Bpe(&'a BpeTokenizer),
}

impl<'a> Canonical<'a> {
    pub fn vocab(&self) -> &'a Vocabulary {
        match *self {
            Canonical::Agnostic(v) | Canonical::MaxMatch(v) => v,
            Canonical::Bpe(t) => t.vocab(),
        }
    }

    /// Token sequences for surface string `w`, given as character ids.
    pub fn images(&self, chars: &[Sym]) -> BTreeSet<Vec<Sym>> {
        let v = self.vocab();
        let w = v.symbols().concat(chars);
        match *self {
            Canonical::Agnostic(v) => segmentations(v, &w),
            Canonical::MaxMatch(v) => [maxmatch_tokenize(v, &w).expect("pattern over Σ")]
                .into_iter()
                .collect(),
            Canonical::Bpe(t) => [bpe_tokenize(t, &w).expect("pattern over Σ")]
                .into_iter()
                .collect(),
        }
    }
}

/// All ways of writing `w` as a concatenation of vocabulary tokens.
pub fn segmentations(v: &Vocabulary, w: &str) -> BTreeSet<Vec<Sym>> {
    fn go(
        v: &Vocabulary,
        w: &str,
        i: usize,
        memo: &mut HashMap<usize, Vec<Vec<Sym>>>,
    ) -> Vec<Vec<Sym>> {
        if i == w.len() {
            return vec![vec![]];
        }
        if let Some(r) = memo.get(&i) {
            return r.clone();
        }
        let mut out = Vec::new();
        for (j, _) in w[i..].char_indices().skip(1).chain([(w.len() - i, ' ')]) {
            if let Some(id) = v.lookup(&w[i..i + j]) {
                for rest in go(v, w, i + j, memo) {
                    let mut s = Vec::with_capacity(rest.len() + 1);
                    s.push(id);
                    s.extend(rest);
                    out.push(s);
                }
            }
        }
        memo.insert(i, out.clone());
        out
    }
    go(v, w, 0, &mut HashMap::new()).into_iter().collect()
}

fn char_len(v: &Vocabulary, seq: &[Sym]) -> usize {
    seq.iter()
        .map(|&s| v.token(s).map_or(0, |t| t.chars().count()))
        .sum()
}

/// `{ t | concat(t) ∈ L(a), |concat(t)| <= max_chars, |t| <= max_tokens }`
/// restricted to the images chosen by `c`.
pub fn oracle_language(
    a: &Dfa,
    c: Canonical<'_>,
    max_chars: usize,
    max_tokens: usize,
) -> Result<BTreeSet<Vec<Sym>>, FstError> {
    let mut out = BTreeSet::new();
    for w in enumerate_language(a, max_chars)? {
        out.extend(c.images(&w).into_iter().filter(|t| t.len() <= max_tokens));
    }
    Ok(out)
}

/// Accepted token sequences of `p` within the same bounds as
/// [`oracle_language`]. Prefixes are pruned on spelled length, so long
/// tokens do not blow up the search.
pub fn promoted_language(
    p: &Dfa,
    v: &Vocabulary,
    max_chars: usize,
    max_tokens: usize,
) -> Result<BTreeSet<Vec<Sym>>, FstError> {
    let mut found = BTreeSet::new();
    let mut explored = 0usize;
    let mut stack = vec![(p.start(), Vec::new(), 0usize)];
    while let Some((q, seq, chars)) = stack.pop() {
        explored += 1;
        if explored > DEFAULT_PATH_CAP {
            return Err(FstError::EnumerationCap {
                explored: DEFAULT_PATH_CAP,
                partial: found.len(),
            });
        }
        if p.is_final(q) {
            found.insert(seq.clone());
        }
        if seq.len() == max_tokens {
            continue;
        }
        for t in p.arcs(q) {
            let n = chars + char_len(v, &[t.input]);
            if n <= max_chars {
                let mut next = seq.clone();
                next.push(t.input);
                stack.push((t.dst, next, n));
            }
        }
    }
    Ok(found)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Mismatch {
    /// Expected by the oracle, rejected by the promoted automaton.
    Missing(Vec<Sym>),
    /// Accepted by the promoted automaton, not expected.
    Unexpected(Vec<Sym>),
}

impl Mismatch {
    pub fn tokens(&self) -> &[Sym] {
        match self {
            Mismatch::Missing(t) | Mismatch::Unexpected(t) => t,
        }
    }
}

fn shortlex(a: &[Sym], b: &[Sym]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

/// Compares the promoted language against the oracle within the bounds.
/// Returns the shortest, then lexicographically least, disagreement.
pub fn first_mismatch(
    a: &Dfa,
    p: &Dfa,
    c: Canonical<'_>,
    max_chars: usize,
    max_tokens: usize,
) -> Result<Option<Mismatch>, FstError> {
    let want = oracle_language(a, c, max_chars, max_tokens)?;
    let got = promoted_language(p, c.vocab(), max_chars, max_tokens)?;
    let missing = want.difference(&got).map(|t| Mismatch::Missing(t.clone()));
    let extra = got.difference(&want).map(|t| Mismatch::Unexpected(t.clone()));
    Ok(missing
        .chain(extra)
        .min_by(|x, y| shortlex(x.tokens(), y.tokens())))
}
