use std::collections::BTreeSet;
use std::sync::Arc;

use crate::symbols::{Sym, SymbolTable, EPSILON, PHI};

pub type StateId = u32;

/// One arc `src --input:output--> dst`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transition {
    pub src: StateId,
    pub input: Sym,
    pub output: Sym,
    pub dst: StateId,
}

/// An unweighted finite-state transducer whose labels live in one shared
/// [`SymbolTable`]. Acceptors are transducers with `input == output` on
/// every arc.
#[derive(Clone, Debug)]
pub struct Fst {
    symbols: Arc<SymbolTable>,
    start: StateId,
    finals: Vec<bool>,
    arcs: Vec<Vec<Transition>>,
}

impl PartialEq for Fst {
    fn eq(&self, other: &Self) -> bool {
        self.start == other.start
            && self.finals == other.finals
            && self.arcs == other.arcs
            && (Arc::ptr_eq(&self.symbols, &other.symbols) || self.symbols == other.symbols)
    }
}

impl Eq for Fst {}

impl Fst {
    /// A machine with a single non-final start state.
    pub fn new(symbols: Arc<SymbolTable>) -> Self {
        Self {
            symbols,
            start: 0,
            finals: vec![false],
            arcs: vec![Vec::new()],
        }
    }

    /// The canonical empty-language machine: one non-final state, no arcs.
    pub fn empty(symbols: Arc<SymbolTable>) -> Self {
        Self::new(symbols)
    }

    /// A machine with `n` states (at least one), start 0 and no arcs.
    pub fn with_states(symbols: Arc<SymbolTable>, n: usize) -> Self {
        let n = n.max(1);
        Self {
            symbols,
            start: 0,
            finals: vec![false; n],
            arcs: vec![Vec::new(); n],
        }
    }

    pub fn symbols(&self) -> &Arc<SymbolTable> {
        &self.symbols
    }

    pub fn num_states(&self) -> usize {
        self.arcs.len()
    }

    pub fn start(&self) -> StateId {
        self.start
    }

    pub fn is_final(&self, q: StateId) -> bool {
        self.finals[q as usize]
    }

    pub fn finals(&self) -> impl Iterator<Item = StateId> + '_ {
        self.finals
            .iter()
            .enumerate()
            .filter(|(_, &f)| f)
            .map(|(q, _)| q as StateId)
    }

    pub fn arcs(&self, q: StateId) -> &[Transition] {
        &self.arcs[q as usize]
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> {
        0..self.arcs.len() as StateId
    }

    pub fn transitions(&self) -> impl Iterator<Item = &Transition> + '_ {
        self.arcs.iter().flatten()
    }

    pub fn num_transitions(&self) -> usize {
        self.arcs.iter().map(Vec::len).sum()
    }

    pub fn add_state(&mut self) -> StateId {
        self.arcs.push(Vec::new());
        self.finals.push(false);
        (self.arcs.len() - 1) as StateId
    }

    pub fn set_start(&mut self, q: StateId) {
        assert!((q as usize) < self.num_states(), "start state {q} out of range");
        self.start = q;
    }

    pub fn set_final(&mut self, q: StateId, is_final: bool) {
        self.finals[q as usize] = is_final;
    }

    /// Adds an arc. Panics on out-of-range states, a φ output label, or a
    /// second φ arc leaving the same state.
    pub fn add_arc(&mut self, src: StateId, input: Sym, output: Sym, dst: StateId) {
        let n = self.num_states();
        assert!((src as usize) < n && (dst as usize) < n, "arc {src}->{dst} out of range");
        assert!(output != PHI, "φ may only appear as an input label");
        if input == PHI {
            assert!(
                self.phi_arc(src).is_none(),
                "state {src} already has a φ arc"
            );
        }
        self.arcs[src as usize].push(Transition {
            src,
            input,
            output,
            dst,
        });
    }

    /// Adds an acceptor arc `src --label:label--> dst`.
    pub fn add_acceptor_arc(&mut self, src: StateId, label: Sym, dst: StateId) {
        self.add_arc(src, label, label, dst);
    }

    pub fn phi_arc(&self, q: StateId) -> Option<&Transition> {
        self.arcs[q as usize].iter().find(|t| t.input == PHI)
    }

    /// True if every arc has `input == output`.
    pub fn is_acceptor(&self) -> bool {
        self.transitions().all(|t| t.input == t.output)
    }

    pub fn has_epsilons(&self) -> bool {
        self.transitions().any(|t| t.input == EPSILON || t.output == EPSILON)
    }

    pub fn has_phi(&self) -> bool {
        self.transitions().any(|t| t.input == PHI)
    }

    /// Non-ε, non-φ input labels.
    pub fn input_alphabet(&self) -> BTreeSet<Sym> {
        self.transitions()
            .map(|t| t.input)
            .filter(|&s| s != EPSILON && s != PHI)
            .collect()
    }

    /// Non-ε output labels.
    pub fn output_alphabet(&self) -> BTreeSet<Sym> {
        self.transitions()
            .map(|t| t.output)
            .filter(|&s| s != EPSILON)
            .collect()
    }

    /// Sorts each state's arcs and drops exact duplicates.
    pub(crate) fn normalize_arcs(&mut self) {
        for arcs in &mut self.arcs {
            arcs.sort_unstable();
            arcs.dedup();
        }
    }

    /// True if the machine accepts nothing (no final state reachable).
    pub fn is_empty_language(&self) -> bool {
        let mut seen = vec![false; self.num_states()];
        let mut stack = vec![self.start];
        seen[self.start as usize] = true;
        while let Some(q) = stack.pop() {
            if self.is_final(q) {
                return false;
            }
            for t in self.arcs(q) {
                if !seen[t.dst as usize] {
                    seen[t.dst as usize] = true;
                    stack.push(t.dst);
                }
            }
        }
        true
    }

    /// Reverse adjacency: for each state, the sources of its incoming arcs.
    pub(crate) fn predecessors(&self) -> Vec<Vec<StateId>> {
        let mut preds = vec![Vec::new(); self.num_states()];
        for t in self.transitions() {
            preds[t.dst as usize].push(t.src);
        }
        preds
    }

    /// Builds a machine from raw parts. Validates ranges and label rules.
    pub fn from_parts(
        symbols: Arc<SymbolTable>,
        num_states: usize,
        start: StateId,
        finals: impl IntoIterator<Item = StateId>,
        transitions: impl IntoIterator<Item = Transition>,
    ) -> Result<Self, super::FstError> {
        use super::FstError;
        if num_states == 0 {
            return Err(FstError::Invalid("num_states must be at least 1".into()));
        }
        if start as usize >= num_states {
            return Err(FstError::Invalid(format!(
                "start {start} out of range for {num_states} states"
            )));
        }
        let mut fst = Self::with_states(symbols, num_states);
        fst.start = start;
        for q in finals {
            if q as usize >= num_states {
                return Err(FstError::Invalid(format!("final state {q} out of range")));
            }
            fst.finals[q as usize] = true;
        }
        let max_sym = fst.symbols.len() as Sym + crate::symbols::FIRST_TOKEN;
        for t in transitions {
            if t.src as usize >= num_states || t.dst as usize >= num_states {
                return Err(FstError::Invalid(format!(
                    "transition {t:?} references a state out of range"
                )));
            }
            if t.input >= max_sym || t.output >= max_sym {
                return Err(FstError::Invalid(format!(
                    "transition {t:?} references an unknown symbol"
                )));
            }
            if t.output == PHI {
                return Err(FstError::Invalid(format!(
                    "transition {t:?} has φ as output label"
                )));
            }
            if t.input == PHI && fst.phi_arc(t.src).is_some() {
                return Err(FstError::Invalid(format!(
                    "state {} has more than one φ arc",
                    t.src
                )));
            }
            fst.arcs[t.src as usize].push(t);
        }
        Ok(fst)
    }

    /// Acceptor for a single symbol sequence.
    pub fn linear(symbols: Arc<SymbolTable>, seq: &[Sym]) -> Self {
        let mut fst = Self::with_states(symbols, seq.len() + 1);
        for (i, &s) in seq.iter().enumerate() {
            fst.add_acceptor_arc(i as StateId, s, i as StateId + 1);
        }
        fst.set_final(seq.len() as StateId, true);
        fst
    }

    /// Identity transducer over the given symbols (one state, final).
    pub fn identity(symbols: Arc<SymbolTable>, alphabet: impl IntoIterator<Item = Sym>) -> Self {
        let mut fst = Self::new(symbols);
        fst.set_final(0, true);
        for s in alphabet {
            fst.add_acceptor_arc(0, s, 0);
        }
        fst
    }
}
