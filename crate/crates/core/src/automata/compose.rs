//! Worklist composition with ε matching and per-state φ expansion.
//!
//! A composed state is a triple `(left, right, excluded)`. `excluded` is the
//! set of symbols the right machine has committed to *not* reading next
//! because a φ arc was taken: φ at right state `r` is only usable for a
//! symbol that labels no other arc of `r`. The commitment is checked when
//! the left machine next emits a symbol, and dropped once a symbol is
//! consumed. End of input never matches a sibling arc, so a φ chain may
//! always be followed to reach finality.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use super::fst::{Fst, StateId};
use super::FstError;
use crate::symbols::{Sym, EPSILON, PHI};

type GuardId = u32;

struct Guards {
    sets: Vec<Vec<Sym>>,
    index: HashMap<Vec<Sym>, GuardId>,
}

impl Guards {
    fn new() -> Self {
        let mut g = Self {
            sets: Vec::new(),
            index: HashMap::new(),
        };
        g.intern(Vec::new());
        g
    }

    fn intern(&mut self, set: Vec<Sym>) -> GuardId {
        if let Some(&id) = self.index.get(&set) {
            return id;
        }
        let id = self.sets.len() as GuardId;
        self.sets.push(set.clone());
        self.index.insert(set, id);
        id
    }

    fn excludes(&self, g: GuardId, sym: Sym) -> bool {
        self.sets[g as usize].binary_search(&sym).is_ok()
    }
}

/// What the left machine can emit next from a state, looking through arcs
/// with ε output.
struct Lookahead {
    labels: Vec<Sym>,
    can_end: bool,
}

fn lookahead(left: &Fst, x: StateId) -> Lookahead {
    let mut seen = vec![false; left.num_states()];
    let mut stack = vec![x];
    seen[x as usize] = true;
    let mut labels = Vec::new();
    let mut can_end = false;
    while let Some(q) = stack.pop() {
        can_end |= left.is_final(q);
        for t in left.arcs(q) {
            if t.output == EPSILON {
                if !seen[t.dst as usize] {
                    seen[t.dst as usize] = true;
                    stack.push(t.dst);
                }
            } else {
                labels.push(t.output);
            }
        }
    }
    labels.sort_unstable();
    labels.dedup();
    Lookahead { labels, can_end }
}

pub(crate) fn same_symbols(a: &Fst, b: &Fst) -> bool {
    Arc::ptr_eq(a.symbols(), b.symbols()) || a.symbols() == b.symbols()
}

/// Composes `left ∘ right`: the result accepts `(x, z)` iff some `y` has
/// `left(x, y)` and `right(y, z)`. φ arcs are honoured on the input side of
/// `right` only. Only states reachable from the start are built.
pub fn compose(left: &Fst, right: &Fst) -> Result<Fst, FstError> {
    if !same_symbols(left, right) {
        return Err(FstError::SymbolTableMismatch);
    }
    if left.has_phi() {
        return Err(FstError::Unsupported(
            "φ arcs on the left operand of a composition".into(),
        ));
    }

    // Right arcs sorted by input label, and the non-φ, non-ε input labels
    // of each right state (what a φ arc there must not read).
    let right_sorted: Vec<Vec<_>> = right
        .states()
        .map(|q| {
            let mut v = right.arcs(q).to_vec();
            v.sort_unstable_by_key(|t| t.input);
            v
        })
        .collect();
    let right_inputs: Vec<Vec<Sym>> = right_sorted
        .iter()
        .map(|arcs| {
            let mut v: Vec<Sym> = arcs
                .iter()
                .map(|t| t.input)
                .filter(|&s| s != EPSILON && s != PHI)
                .collect();
            v.dedup();
            v
        })
        .collect();

    let mut looks: HashMap<StateId, Lookahead> = HashMap::new();
    let mut guards = Guards::new();
    let mut ids: HashMap<(StateId, StateId, GuardId), StateId> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut out = Fst::new(left.symbols().clone());

    let start = (left.start(), right.start(), 0);
    ids.insert(start, 0);
    queue.push_back(start);

    let mut get_id = |key: (StateId, StateId, GuardId),
                      out: &mut Fst,
                      queue: &mut VecDeque<_>|
     -> StateId {
        *ids.entry(key).or_insert_with(|| {
            queue.push_back(key);
            out.add_state()
        })
    };

    while let Some(key) = queue.pop_front() {
        let (x, r, g) = key;
        let src = get_id(key, &mut out, &mut queue);
        if left.is_final(x) && right.is_final(r) {
            out.set_final(src, true);
        }

        for t in left.arcs(x) {
            if t.output == EPSILON {
                let dst = get_id((t.dst, r, g), &mut out, &mut queue);
                out.add_arc(src, t.input, EPSILON, dst);
                continue;
            }
            if guards.excludes(g, t.output) {
                continue;
            }
            let arcs = &right_sorted[r as usize];
            let lo = arcs.partition_point(|u| u.input < t.output);
            for u in arcs[lo..].iter().take_while(|u| u.input == t.output) {
                let dst = get_id((t.dst, u.dst, 0), &mut out, &mut queue);
                out.add_arc(src, t.input, u.output, dst);
            }
        }

        for u in &right_sorted[r as usize] {
            match u.input {
                EPSILON => {
                    let dst = get_id((x, u.dst, g), &mut out, &mut queue);
                    out.add_arc(src, EPSILON, u.output, dst);
                }
                PHI => {
                    let mut excluded = guards.sets[g as usize].clone();
                    excluded.extend_from_slice(&right_inputs[r as usize]);
                    excluded.sort_unstable();
                    excluded.dedup();
                    let look = looks.entry(x).or_insert_with(|| lookahead(left, x));
                    let viable = look.can_end
                        || look
                            .labels
                            .iter()
                            .any(|c| excluded.binary_search(c).is_err());
                    if !viable {
                        continue;
                    }
                    let ng = guards.intern(excluded);
                    let dst = get_id((x, u.dst, ng), &mut out, &mut queue);
                    out.add_arc(src, EPSILON, u.output, dst);
                }
                _ => {}
            }
        }
    }
    out.normalize_arcs();
    Ok(out)
}
