use std::ops::Deref;

use super::fst::{Fst, StateId};
use super::FstError;
use crate::symbols::{Sym, EPSILON, PHI};

/// A deterministic, ε-free acceptor. Arcs of every state are kept sorted by
/// label so stepping is a binary search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa {
    fst: Fst,
}

impl Deref for Dfa {
    type Target = Fst;

    fn deref(&self) -> &Fst {
        &self.fst
    }
}

/// True iff `fst` has no ε or φ arcs and no state has two arcs with the same
/// input label.
pub fn is_deterministic(fst: &Fst) -> bool {
    find_nondeterminism(fst).is_none()
}

fn find_nondeterminism(fst: &Fst) -> Option<(StateId, Sym)> {
    let mut labels = Vec::new();
    for q in fst.states() {
        labels.clear();
        for t in fst.arcs(q) {
            if t.input == EPSILON || t.input == PHI || t.output == EPSILON {
                return Some((q, t.input));
            }
            labels.push(t.input);
        }
        labels.sort_unstable();
        if let Some(w) = labels.windows(2).find(|w| w[0] == w[1]) {
            return Some((q, w[0]));
        }
    }
    None
}

impl Dfa {
    /// Validates that `fst` is a deterministic acceptor.
    pub fn try_from_fst(mut fst: Fst) -> Result<Self, FstError> {
        if let Some(t) = fst.transitions().find(|t| t.input != t.output) {
            return Err(FstError::NotAcceptor { state: t.src });
        }
        if let Some((state, symbol)) = find_nondeterminism(&fst) {
            return Err(FstError::NotDeterministic { state, symbol });
        }
        fst.normalize_arcs();
        Ok(Self { fst })
    }

    pub fn as_fst(&self) -> &Fst {
        &self.fst
    }

    pub fn into_fst(self) -> Fst {
        self.fst
    }

    /// Successor of `q` on `sym`, if any.
    pub fn next(&self, q: StateId, sym: Sym) -> Option<StateId> {
        let arcs = self.fst.arcs(q);
        arcs.binary_search_by_key(&sym, |t| t.input)
            .ok()
            .map(|i| arcs[i].dst)
    }

    /// Runs `seq` from the start state.
    pub fn run(&self, seq: &[Sym]) -> Option<StateId> {
        seq.iter()
            .try_fold(self.fst.start(), |q, &s| self.next(q, s))
    }

    pub fn accepts(&self, seq: &[Sym]) -> bool {
        self.run(seq).is_some_and(|q| self.fst.is_final(q))
    }
}
