use std::collections::{BTreeMap, HashMap, VecDeque};

use super::dfa::Dfa;
use super::epsilon::epsilon_closures;
use super::fst::{Fst, StateId};
use super::FstError;
use crate::symbols::{Sym, EPSILON, PHI};

/// Subset construction for acceptors. `ε` arcs, if any, are closed over.
pub fn determinize(a: &Fst) -> Result<Dfa, FstError> {
    if let Some(t) = a.transitions().find(|t| t.input != t.output) {
        return Err(FstError::NotAcceptor { state: t.src });
    }
    if a.has_phi() {
        return Err(FstError::Unsupported("determinizing a machine with φ arcs".into()));
    }
    Dfa::try_from_fst(determinize_pairs(a))
}

/// Subset construction that treats each `input:output` pair as one label.
/// On a transducer this merges common prefixes that agree on both tapes,
/// which leaves a trie-shaped lexicon unchanged.
pub fn determinize_pairs(a: &Fst) -> Fst {
    let closures = epsilon_closures(a);
    let close = |seeds: &[StateId]| -> Vec<StateId> {
        let mut v: Vec<StateId> = seeds
            .iter()
            .flat_map(|&q| closures[q as usize].iter().copied())
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    };

    let mut out = Fst::new(a.symbols().clone());
    let mut ids: HashMap<Vec<StateId>, StateId> = HashMap::new();
    let mut queue = VecDeque::new();
    let start = close(&[a.start()]);
    ids.insert(start.clone(), 0);
    queue.push_back(start);

    while let Some(subset) = queue.pop_front() {
        let src = ids[&subset];
        if subset.iter().any(|&q| a.is_final(q)) {
            out.set_final(src, true);
        }
        let mut moves: BTreeMap<(Sym, Sym), Vec<StateId>> = BTreeMap::new();
        for &q in &subset {
            for t in a.arcs(q) {
                if t.input == EPSILON && t.output == EPSILON {
                    continue;
                }
                debug_assert!(t.input != PHI);
                moves.entry((t.input, t.output)).or_default().push(t.dst);
            }
        }
        for ((input, output), targets) in moves {
            let target = close(&targets);
            let dst = match ids.get(&target) {
                Some(&id) => id,
                None => {
                    let id = out.add_state();
                    ids.insert(target.clone(), id);
                    queue.push_back(target);
                    id
                }
            };
            out.add_arc(src, input, output, dst);
        }
    }
    out
}
