//! Random instance generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use tokenfst::automata::{enumerate_language_capped, minimize, Dfa, Fst};
use tokenfst::tokenize::{BpeTokenizer, Vocabulary};

pub const LETTERS: &[char] = &['a', 'b', 'c', 'd'];

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Σ of `sigma` letters plus random 2-3 character tokens, `|Γ| <= max_gamma`.
pub fn random_vocab(rng: &mut StdRng, sigma: usize, max_gamma: usize) -> Vocabulary {
    let chars = &LETTERS[..sigma];
    let mut tokens: Vec<String> = chars.iter().map(|c| c.to_string()).collect();
    let target = rng.gen_range(sigma..=max_gamma);
    let mut attempts = 0;
    while tokens.len() < target && attempts < 100 {
        attempts += 1;
        let len = rng.gen_range(2..=3);
        let t: String = (0..len).map(|_| *chars.choose(rng).unwrap()).collect();
        if !tokens.contains(&t) {
            tokens.push(t);
        }
    }
    Vocabulary::from_tokens(tokens).unwrap()
}

/// `k` random merges over `sigma` letters. Operands are drawn from the
/// characters and earlier results.
pub fn random_bpe(rng: &mut StdRng, sigma: usize, k: usize) -> BpeTokenizer {
    let mut tokens: Vec<String> = LETTERS[..sigma].iter().map(|c| c.to_string()).collect();
    let mut merges: Vec<(String, String)> = Vec::new();
    let mut attempts = 0;
    while merges.len() < k && attempts < 1000 {
        attempts += 1;
        let a = tokens.choose(rng).unwrap().clone();
        let b = tokens.choose(rng).unwrap().clone();
        let ab = format!("{a}{b}");
        if ab.chars().count() > 6 || tokens.contains(&ab) {
            continue;
        }
        tokens.push(ab);
        merges.push((a, b));
    }
    let toks: Vec<&str> = tokens.iter().map(String::as_str).collect();
    let ms: Vec<(&str, &str)> = merges.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    BpeTokenizer::from_strs(&toks, &ms).unwrap()
}

/// A random trim minimal DFA over the vocabulary's characters with at most
/// `max_states` states, non-empty language, and at most `max_strings`
/// strings of length `<= max_len`.
pub fn random_pattern(
    rng: &mut StdRng,
    v: &Vocabulary,
    max_states: usize,
    max_len: usize,
    max_strings: usize,
) -> Dfa {
    let sigma: Vec<u32> = v.char_ids().collect();
    loop {
        let n = rng.gen_range(1..=max_states);
        let mut f = Fst::with_states(v.symbols().clone(), n);
        let density = rng.gen_range(0.25..0.6);
        for q in 0..n as u32 {
            for &c in &sigma {
                if rng.gen_bool(density) {
                    f.add_acceptor_arc(q, c, rng.gen_range(0..n as u32));
                }
            }
            if rng.gen_bool(0.35) {
                f.set_final(q, true);
            }
        }
        let d = minimize(&Dfa::try_from_fst(f).unwrap());
        if d.is_empty_language() {
            continue;
        }
        match enumerate_language_capped(&d, max_len, 4 * max_strings) {
            Ok(l) if l.len() <= max_strings => return d,
            _ => continue,
        }
    }
}

/// A random pattern whose minimal DFA has exactly `states` states.
pub fn pattern_with_states(rng: &mut StdRng, v: &Vocabulary, states: usize) -> Dfa {
    loop {
        let d = random_pattern(rng, v, states + 2, 8, 50_000);
        if d.num_states() == states {
            return d;
        }
    }
}

/// Random string over the vocabulary's characters.
pub fn random_string(rng: &mut StdRng, v: &Vocabulary, max_len: usize) -> String {
    let chars: Vec<char> = v.chars().keys().copied().collect();
    let n = rng.gen_range(0..=max_len);
    (0..n).map(|_| *chars.choose(rng).unwrap()).collect()
}

pub fn all_strings(sigma: &[char], max_len: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut frontier = vec![String::new()];
    for _ in 0..max_len {
        frontier = frontier
            .iter()
            .flat_map(|w| sigma.iter().map(move |c| format!("{w}{c}")))
            .collect();
        out.extend(frontier.iter().cloned());
    }
    out
}

pub fn set<T: Ord + Clone>(items: &[T]) -> BTreeSet<T> {
    items.iter().cloned().collect()
}
