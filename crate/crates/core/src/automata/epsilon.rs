use super::fst::{Fst, StateId};
use super::ops::connect_forward;
use crate::symbols::EPSILON;

/// ε-closure of every state over arcs labelled `ε:ε`. Cycles are fine.
pub(crate) fn epsilon_closures(a: &Fst) -> Vec<Vec<StateId>> {
    let n = a.num_states();
    let mut closures = Vec::with_capacity(n);
    let mut mark = vec![usize::MAX; n];
    for q in a.states() {
        let mut set = vec![q];
        mark[q as usize] = q as usize;
        let mut i = 0;
        while i < set.len() {
            let p = set[i];
            i += 1;
            for t in a.arcs(p) {
                if t.input == EPSILON && t.output == EPSILON && mark[t.dst as usize] != q as usize {
                    mark[t.dst as usize] = q as usize;
                    set.push(t.dst);
                }
            }
        }
        set.sort_unstable();
        closures.push(set);
    }
    closures
}

/// Removes ε arcs from an acceptor without changing its language. The
/// result only keeps states reachable from the start and may be
/// nondeterministic.
pub fn epsilon_remove(a: &Fst) -> Fst {
    let closures = epsilon_closures(a);
    let mut out = Fst::with_states(a.symbols().clone(), a.num_states());
    out.set_start(a.start());
    for q in a.states() {
        let closure = &closures[q as usize];
        if closure.iter().any(|&p| a.is_final(p)) {
            out.set_final(q, true);
        }
        for &p in closure {
            for t in a.arcs(p) {
                if !(t.input == EPSILON && t.output == EPSILON) {
                    out.add_arc(q, t.input, t.output, t.dst);
                }
            }
        }
    }
    out.normalize_arcs();
    connect_forward(&out)
}
