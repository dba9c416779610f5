use std::collections::BTreeSet;
use std::sync::Arc;

use super::LexiconError;
use crate::automata::{Fst, StateId};
use crate::symbols::{Sym, SymbolTable, EPSILON, PHI};
use crate::tokenize::Merge;

/// Initial state.
pub const Q0: StateId = 0;
/// Active state: an `a` has been read and not yet emitted.
pub const Q1: StateId = 1;
/// Abort state: the pending `a` was emitted without a following `b`.
pub const Q2: StateId = 2;

/// Three-state transducer rewriting every left-to-right `a b` into `ab`.
///
/// Arcs over alphabet `A`:
///
/// - `(q0, c, c, q0)` for `c ∈ A \ {a, ab}`
/// - `(q0, a, ε, q1)`
/// - `(q1, b, ab, q0)`
/// - `(q1, φ, a, q2)`
/// - `(q2, c, c, q0)` for `c ∈ A \ {a, b, ab}`
/// - `(q2, a, ε, q1)` when `a ≠ b`
///
/// Finals are `{q0, q2}`; φ also fires at end of input, flushing a
/// trailing `a`. A second `a` seen in `q1` goes out through φ and comes
/// back through `(q2, a, ε, q1)`, so after projection every state has at
/// most one arc per output symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct MergeGadget {
    merge: Merge,
    alphabet: BTreeSet<Sym>,
    fst: Fst,
}

impl MergeGadget {
    pub fn merge(&self) -> Merge {
        self.merge
    }

    pub fn alphabet(&self) -> &BTreeSet<Sym> {
        &self.alphabet
    }

    pub fn fst(&self) -> &Fst {
        &self.fst
    }

    pub fn into_fst(self) -> Fst {
        self.fst
    }

    /// The same relation with the pending `a` re-emitted by a self-loop
    /// `(q1, a, a, q1)` instead of the `q2` detour. Composition with this
    /// form can leave two arcs emitting `a` out of one state.
    pub fn postpone_loop_fst(&self) -> Fst {
        let Merge { left: a, right: b, .. } = self.merge;
        let mut fst = base(&self.fst.symbols().clone(), self.merge, &self.alphabet);
        if a != b {
            fst.add_arc(Q1, a, a, Q1);
        }
        fst.normalize_arcs();
        fst
    }
}

fn base(symbols: &Arc<SymbolTable>, m: Merge, alphabet: &BTreeSet<Sym>) -> Fst {
    let Merge {
        left: a,
        right: b,
        result: ab,
    } = m;
    let mut fst = Fst::with_states(symbols.clone(), 3);
    fst.set_final(Q0, true);
    fst.set_final(Q2, true);
    for &c in alphabet {
        if c != a && c != ab {
            fst.add_arc(Q0, c, c, Q0);
            if c != b {
                fst.add_arc(Q2, c, c, Q0);
            }
        }
    }
    fst.add_arc(Q0, a, EPSILON, Q1);
    fst.add_arc(Q1, b, ab, Q0);
    fst.add_arc(Q1, PHI, a, Q2);
    fst
}

/// Builds the gadget for merge `m` over `alphabet`, the tokens observable
/// before the merge runs.
pub fn build_merge_gadget(
    symbols: &Arc<SymbolTable>,
    m: Merge,
    alphabet: &BTreeSet<Sym>,
) -> Result<MergeGadget, LexiconError> {
    if symbols.token(m.result).is_none() {
        return Err(LexiconError::MissingResult(m.result));
    }
    for s in [m.left, m.right] {
        if !alphabet.contains(&s) {
            return Err(LexiconError::OperandNotInAlphabet(s));
        }
    }
    let mut fst = base(symbols, m, alphabet);
    if m.left != m.right {
        fst.add_arc(Q2, m.left, EPSILON, Q1);
    }
    fst.normalize_arcs();
    Ok(MergeGadget {
        merge: m,
        alphabet: alphabet.clone(),
        fst,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{
        compose, epsilon_remove, is_deterministic, project_output, transduce,
    };
    use crate::tokenize::apply_merge;

    fn setup(tokens: &[&str], a: &str, b: &str, alphabet: &[&str]) -> (Arc<SymbolTable>, MergeGadget) {
        let table = Arc::new(SymbolTable::from_tokens(tokens.iter().copied()).unwrap());
        let id = |s: &str| table.lookup(s).unwrap();
        let m = Merge {
            left: id(a),
            right: id(b),
            result: table.lookup(&format!("{a}{b}")).unwrap(),
        };
        let alpha = alphabet.iter().map(|s| id(s)).collect();
        let g = build_merge_gadget(&table, m, &alpha).unwrap();
        (table, g)
    }

    fn sequences(alphabet: &BTreeSet<Sym>, max_len: usize) -> Vec<Vec<Sym>> {
        let mut out = vec![vec![]];
        let mut frontier = vec![vec![]];
        for _ in 0..max_len {
            frontier = frontier
                .iter()
                .flat_map(|s: &Vec<Sym>| {
                    alphabet.iter().map(move |&c| {
                        let mut n = s.clone();
                        n.push(c);
                        n
                    })
                })
                .collect();
            out.extend(frontier.iter().cloned());
        }
        out
    }

    fn assert_sound(g: &MergeGadget, fst: &Fst, max_len: usize) {
        let m = g.merge();
        for s in sequences(g.alphabet(), max_len) {
            let outs = transduce(fst, &s, s.len()).unwrap();
            assert_eq!(outs, vec![apply_merge(&s, &m)], "{s:?}");
            assert!(!outs[0].windows(2).any(|p| p == [m.left, m.right]));
        }
    }

    #[test]
    fn arc_inventory() {
        let (t, g) = setup(&["a", "b", "c", "ab"], "a", "b", &["a", "b", "c"]);
        let f = g.fst();
        assert_eq!(f.num_states(), 3);
        assert_eq!(f.transitions().filter(|t| t.input == PHI).count(), 1);
        assert_eq!(f.phi_arc(Q1).unwrap().output, t.lookup("a").unwrap());
        assert!(f.is_final(Q0) && f.is_final(Q2) && !f.is_final(Q1));
        // q0 copies b and c, q2 copies only c.
        assert_eq!(f.arcs(Q0).len(), 3);
        assert_eq!(f.arcs(Q2).len(), 2);
    }

    #[test]
    fn sound_distinct_operands() {
        let (_, g) = setup(&["a", "b", "c", "ab"], "a", "b", &["a", "b", "c"]);
        assert_sound(&g, g.fst(), 7);
        assert_sound(&g, &g.postpone_loop_fst(), 7);
    }

    #[test]
    fn sound_repeated_operand() {
        let (t, g) = setup(&["a", "b", "aa"], "a", "a", &["a", "b"]);
        assert_sound(&g, g.fst(), 7);
        let a = t.lookup("a").unwrap();
        let aa = t.lookup("aa").unwrap();
        assert_eq!(transduce(g.fst(), &[a, a, a], 3).unwrap(), vec![vec![aa, a]]);
    }

    #[test]
    fn sound_with_earlier_results() {
        let (_, g) = setup(
            &["a", "b", "c", "ab", "bc", "abc"],
            "ab",
            "c",
            &["a", "b", "c", "ab", "bc"],
        );
        assert_sound(&g, g.fst(), 5);
    }

    #[test]
    fn absent_operand_is_identity() {
        let table = Arc::new(SymbolTable::from_tokens(["a", "b", "x", "ab"]).unwrap());
        let m = Merge { left: 2, right: 3, result: 5 };
        let alpha: BTreeSet<Sym> = [2, 3, 4].into_iter().collect();
        let g = build_merge_gadget(&table, m, &alpha).unwrap();
        for s in [vec![4, 4], vec![3, 4, 3], vec![]] {
            assert_eq!(transduce(g.fst(), &s, 3).unwrap(), vec![s.clone()]);
        }
    }

    #[test]
    fn missing_operand_rejected() {
        let table = Arc::new(SymbolTable::from_tokens(["a", "b", "ab"]).unwrap());
        let m = Merge { left: 2, right: 4, result: 4 };
        let alpha: BTreeSet<Sym> = [2, 3].into_iter().collect();
        assert_eq!(
            build_merge_gadget(&table, m, &alpha),
            Err(LexiconError::OperandNotInAlphabet(4))
        );
    }

    // A = {aa, ac} merging (a, b): both forms define the same relation,
    // only the factored one stays deterministic after projection.
    #[test]
    fn postpone_loop_breaks_determinism() {
        let (t, g) = setup(&["a", "b", "c", "ab"], "a", "b", &["a", "b", "c"]);
        let (a, c) = (t.lookup("a").unwrap(), t.lookup("c").unwrap());
        let mut acc = Fst::with_states(t.clone(), 3);
        acc.add_acceptor_arc(0, a, 1);
        acc.add_acceptor_arc(1, a, 2);
        acc.add_acceptor_arc(1, c, 2);
        acc.set_final(2, true);
        let stage = |gf: &Fst| epsilon_remove(&project_output(&compose(&acc, gf).unwrap()));
        assert!(is_deterministic(&stage(g.fst())));
        assert!(!is_deterministic(&stage(&g.postpone_loop_fst())));
    }
}
