use std::collections::BTreeMap;

use crate::automata::{determinize_pairs, kleene_star_closure, Fst, StateId};
use crate::symbols::EPSILON;
use crate::tokenize::Vocabulary;

/// Lexicon transducer mapping character sequences to every token sequence
/// with the same concatenation.
///
/// One trie over token prefixes. Every character arc emits ε except the
/// arc completing a token, which emits the token into a shared end state.
/// The end state loops back to the root through the closure.
pub fn build_lexicon_transducer(v: &Vocabulary) -> Fst {
    let symbols = v.symbols().clone();
    let mut fst = Fst::new(symbols.clone());
    let end = fst.add_state();
    fst.set_final(end, true);
    let mut nodes: BTreeMap<String, StateId> = BTreeMap::new();
    nodes.insert(String::new(), fst.start());

    for id in v.token_ids() {
        let tok = symbols.token(id).expect("vocabulary id");
        let chars: Vec<char> = tok.chars().collect();
        let mut prefix = String::new();
        let mut q = fst.start();
        for (i, &c) in chars.iter().enumerate() {
            let ch = v.chars()[&c];
            if i + 1 == chars.len() {
                fst.add_arc(q, ch, id, end);
                break;
            }
            prefix.push(c);
            q = match nodes.get(&prefix) {
                Some(&next) => next,
                None => {
                    let next = fst.add_state();
                    fst.add_arc(q, ch, EPSILON, next);
                    nodes.insert(prefix.clone(), next);
                    next
                }
            };
        }
    }
    // Already deterministic on input:output pairs; kept as a safety pass.
    let fst = determinize_pairs(&fst);
    kleene_star_closure(&fst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{compose, enumerate_language, project_output, transduce};
    use crate::symbols::Sym;
    use std::collections::BTreeSet;

    fn segs(v: &Vocabulary, w: &str) -> BTreeSet<Vec<String>> {
        let t = build_lexicon_transducer(v);
        let input = v.encode_chars(w).unwrap();
        transduce(&t, &input, w.len())
            .unwrap()
            .into_iter()
            .map(|s| v.decode(&s).into_iter().map(String::from).collect())
            .collect()
    }

    // Counts segmentations by brute force over all split points.
    fn count_splits(tokens: &[&str], w: &str) -> usize {
        if w.is_empty() {
            return 1;
        }
        tokens
            .iter()
            .filter(|t| w.starts_with(**t))
            .map(|t| count_splits(tokens, &w[t.len()..]))
            .sum()
    }

    #[test]
    fn pair_ab() {
        let v = Vocabulary::from_tokens(["a", "b", "c", "ab", "abc", "bc"]).unwrap();
        let got = segs(&v, "ab");
        let want: BTreeSet<Vec<String>> = [vec!["a".into(), "b".into()], vec!["ab".into()]]
            .into_iter()
            .collect();
        assert_eq!(got, want);
        // Same answer through composition with the string acceptor.
        let a = Fst::linear(v.symbols().clone(), &v.encode_chars("ab").unwrap());
        let lang = enumerate_language(&project_output(&compose(&a, &build_lexicon_transducer(&v)).unwrap()), 4)
            .unwrap();
        assert_eq!(lang.len(), 2);
    }

    #[test]
    fn characters_only_is_identity() {
        let v = Vocabulary::from_tokens(["x", "y"]).unwrap();
        assert_eq!(segs(&v, "xyyx").len(), 1);
        assert_eq!(segs(&v, ""), [Vec::<String>::new()].into_iter().collect());
    }

    #[test]
    fn abaab_segmentations() {
        // a.b.a.a.b a.b.a.ab ab.a.a.b ab.a.ab aba.a.b aba.ab
        let tokens = ["a", "b", "ab", "aba"];
        let v = Vocabulary::from_tokens(tokens).unwrap();
        assert_eq!(count_splits(&tokens, "abaab"), 6);
        assert_eq!(segs(&v, "abaab").len(), 6);
    }

    #[test]
    fn single_token_relation() {
        let tokens = ["a", "b", "ab", "aba", "bb"];
        let v = Vocabulary::from_tokens(tokens).unwrap();
        let t = build_lexicon_transducer(&v);
        // Every string of length <= 3 maps to a single token iff it is one.
        let sigma = ["a", "b"];
        let mut words = vec![String::new()];
        for _ in 0..3 {
            let mut next = Vec::new();
            for w in &words {
                for c in sigma {
                    next.push(format!("{w}{c}"));
                }
            }
            words.extend(next.iter().cloned());
            words.dedup();
        }
        words.sort();
        words.dedup();
        for w in words.iter().filter(|w| !w.is_empty()) {
            let outs = transduce(&t, &v.encode_chars(w).unwrap(), 1).unwrap();
            let single: Vec<&Vec<Sym>> = outs.iter().filter(|o| o.len() == 1).collect();
            match v.lookup(w) {
                Some(id) => assert_eq!(single, [&vec![id]], "{w}"),
                None => assert!(single.is_empty(), "{w}"),
            }
        }
    }
}
