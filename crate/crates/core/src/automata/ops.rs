use super::fst::{Fst, StateId};
use crate::symbols::EPSILON;

/// Output projection: every arc `(q, i, o, p)` becomes `(q, o, o, p)`.
/// States, start and finals are unchanged.
pub fn project_output(t: &Fst) -> Fst {
    let mut out = Fst::with_states(t.symbols().clone(), t.num_states());
    out.set_start(t.start());
    for q in t.finals() {
        out.set_final(q, true);
    }
    for tr in t.transitions() {
        out.add_acceptor_arc(tr.src, tr.output, tr.dst);
    }
    out.normalize_arcs();
    out
}

fn reachable(n: usize, roots: &[StateId], adj: &[Vec<StateId>]) -> Vec<bool> {
    let mut seen = vec![false; n];
    let mut stack = Vec::new();
    for &r in roots {
        if !seen[r as usize] {
            seen[r as usize] = true;
            stack.push(r);
        }
    }
    while let Some(q) = stack.pop() {
        for &p in &adj[q as usize] {
            if !seen[p as usize] {
                seen[p as usize] = true;
                stack.push(p);
            }
        }
    }
    seen
}

/// Keeps only states that are reachable from the start and can reach a
/// final state. A machine with no accepting path becomes [`Fst::empty`].
pub fn trim(a: &Fst) -> Fst {
    let n = a.num_states();
    let succ: Vec<Vec<StateId>> = a
        .states()
        .map(|q| a.arcs(q).iter().map(|t| t.dst).collect())
        .collect();
    let fwd = reachable(n, &[a.start()], &succ);
    let finals: Vec<StateId> = a.finals().collect();
    let bwd = reachable(n, &finals, &a.predecessors());
    let keep: Vec<bool> = (0..n).map(|q| fwd[q] && bwd[q]).collect();
    retain_states(a, &keep)
}

/// Keeps only states reachable from the start.
pub fn connect_forward(a: &Fst) -> Fst {
    let succ: Vec<Vec<StateId>> = a
        .states()
        .map(|q| a.arcs(q).iter().map(|t| t.dst).collect())
        .collect();
    let keep = reachable(a.num_states(), &[a.start()], &succ);
    retain_states(a, &keep)
}

fn retain_states(a: &Fst, keep: &[bool]) -> Fst {
    if !keep[a.start() as usize] {
        return Fst::empty(a.symbols().clone());
    }
    // The start keeps id 0; the rest keep their relative order.
    let mut map = vec![StateId::MAX; a.num_states()];
    let mut next = 1;
    map[a.start() as usize] = 0;
    for q in a.states() {
        if keep[q as usize] && q != a.start() {
            map[q as usize] = next;
            next += 1;
        }
    }
    let mut out = Fst::with_states(a.symbols().clone(), next as usize);
    for q in a.states().filter(|&q| keep[q as usize]) {
        let nq = map[q as usize];
        out.set_final(nq, a.is_final(q));
        for t in a.arcs(q) {
            if keep[t.dst as usize] {
                out.add_arc(nq, t.input, t.output, map[t.dst as usize]);
            }
        }
    }
    out
}

/// Kleene closure: adds `(q, ε, ε, start)` for every final `q` and makes
/// the start final. When the start has incoming arcs a fresh final start is
/// introduced first so that `(ε, ε)` is the only pair gained.
pub fn kleene_star_closure(t: &Fst) -> Fst {
    let mut out = t.clone();
    let has_incoming = t.transitions().any(|tr| tr.dst == t.start());
    if has_incoming {
        let old = out.start();
        let fresh = out.add_state();
        out.add_arc(fresh, EPSILON, EPSILON, old);
        out.set_start(fresh);
    }
    let start = out.start();
    for q in t.finals() {
        out.add_arc(q, EPSILON, EPSILON, start);
    }
    out.set_final(start, true);
    out.normalize_arcs();
    out
}
