use std::collections::{HashMap, VecDeque};

use super::dfa::Dfa;
use super::fst::{Fst, StateId};
use super::ops::trim;
use crate::symbols::Sym;

/// Minimal DFA for the language of `d`, by Moore-style partition refinement
/// over the trimmed machine. The result is in canonical numbering (see
/// [`canonicalize`]), so two minimal DFAs for one language compare equal.
pub fn minimize(d: &Dfa) -> Dfa {
    let t = trim(d.as_fst());
    let n = t.num_states();

    let mut class: Vec<u32> = t.states().map(|q| t.is_final(q) as u32).collect();
    let mut num_classes = class.iter().copied().max().map_or(0, |m| m + 1) as usize;
    if class.iter().all(|&c| c == class[0]) {
        class.iter_mut().for_each(|c| *c = 0);
        num_classes = 1;
    }

    loop {
        let mut sigs: HashMap<(u32, Vec<(Sym, u32)>), u32> = HashMap::new();
        let mut next = vec![0u32; n];
        for q in t.states() {
            let mut sig: Vec<(Sym, u32)> = t
                .arcs(q)
                .iter()
                .map(|a| (a.input, class[a.dst as usize]))
                .collect();
            sig.sort_unstable();
            let len = sigs.len() as u32;
            next[q as usize] = *sigs.entry((class[q as usize], sig)).or_insert(len);
        }
        let count = sigs.len();
        class = next;
        if count == num_classes {
            break;
        }
        num_classes = count;
    }

    let mut quotient = Fst::with_states(t.symbols().clone(), num_classes);
    quotient.set_start(class[t.start() as usize]);
    let mut done = vec![false; num_classes];
    for q in t.states() {
        let c = class[q as usize];
        if std::mem::replace(&mut done[c as usize], true) {
            continue;
        }
        quotient.set_final(c, t.is_final(q));
        for a in t.arcs(q) {
            quotient.add_acceptor_arc(c, a.input, class[a.dst as usize]);
        }
    }
    let dfa = Dfa::try_from_fst(quotient).expect("quotient of a DFA is deterministic");
    canonicalize(&dfa)
}

/// Renumbers states in breadth-first order from the start, visiting arcs by
/// ascending label. Unreachable states are dropped. Isomorphic DFAs have
/// equal canonical forms.
pub fn canonicalize(d: &Dfa) -> Dfa {
    let mut map = vec![StateId::MAX; d.num_states()];
    let mut order = Vec::with_capacity(d.num_states());
    let mut queue = VecDeque::new();
    map[d.start() as usize] = 0;
    order.push(d.start());
    queue.push_back(d.start());
    while let Some(q) = queue.pop_front() {
        // Dfa keeps arcs sorted by label.
        for a in d.arcs(q) {
            if map[a.dst as usize] == StateId::MAX {
                map[a.dst as usize] = order.len() as StateId;
                order.push(a.dst);
                queue.push_back(a.dst);
            }
        }
    }
    let mut out = Fst::with_states(d.symbols().clone(), order.len());
    for (nq, &q) in order.iter().enumerate() {
        out.set_final(nq as StateId, d.is_final(q));
        for a in d.arcs(q) {
            out.add_acceptor_arc(nq as StateId, a.input, map[a.dst as usize]);
        }
    }
    Dfa::try_from_fst(out).expect("renumbering preserves determinism")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::language::enumerate_language;
    use crate::symbols::SymbolTable;
    use std::sync::Arc;

    fn table() -> Arc<SymbolTable> {
        Arc::new(SymbolTable::from_tokens(["a", "b"]).unwrap())
    }

    #[test]
    fn merges_equivalent_states() {
        // (a|b)a with two separate middle states.
        let mut f = Fst::with_states(table(), 4);
        f.add_acceptor_arc(0, 2, 1);
        f.add_acceptor_arc(0, 3, 2);
        f.add_acceptor_arc(1, 2, 3);
        f.add_acceptor_arc(2, 2, 3);
        f.set_final(3, true);
        let d = Dfa::try_from_fst(f).unwrap();
        let m = minimize(&d);
        assert_eq!(m.num_states(), 3);
        assert_eq!(
            enumerate_language(&d, 4).unwrap(),
            enumerate_language(&m, 4).unwrap()
        );
        assert_eq!(minimize(&m), m);
    }

    #[test]
    fn split_states_with_identical_futures_merge() {
        // Two predecessors x1, x2 each with their own copy of y (q', p').
        // 0 -a-> x1, 0 -b-> x2, x1 -a-> y1, x2 -a-> y2, y1 -b-> z, y2 -b-> z
        let mut f = Fst::with_states(table(), 6);
        f.add_acceptor_arc(0, 2, 1);
        f.add_acceptor_arc(0, 3, 2);
        f.add_acceptor_arc(1, 2, 3);
        f.add_acceptor_arc(2, 2, 4);
        f.add_acceptor_arc(3, 3, 5);
        f.add_acceptor_arc(4, 3, 5);
        f.set_final(5, true);
        let m = minimize(&Dfa::try_from_fst(f).unwrap());
        assert_eq!(m.num_states(), 4);
    }

    #[test]
    fn empty_language_minimizes_to_single_state() {
        let mut f = Fst::with_states(table(), 2);
        f.add_acceptor_arc(0, 2, 1);
        let m = minimize(&Dfa::try_from_fst(f).unwrap());
        assert_eq!(m.num_states(), 1);
        assert_eq!(m.num_transitions(), 0);
        assert!(!m.is_final(0));
    }
}
