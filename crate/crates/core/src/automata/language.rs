//! Acceptance, bounded transduction and bounded language enumeration.
//!
//! All of these follow φ semantics on the input side: a φ arc at `q` is
//! taken without consuming anything, after which the next consumed symbol
//! must not label any other arc of `q`. End of input is always allowed
//! through φ.

use std::collections::{BTreeSet, HashSet, VecDeque};

use super::fst::{Fst, StateId};
use super::FstError;
use crate::symbols::{Sym, EPSILON, PHI};

/// An (input, output) pair of label sequences.
pub type SeqPair = (Vec<Sym>, Vec<Sym>);

/// Default cap on explored configurations for the enumeration helpers.
pub const DEFAULT_PATH_CAP: usize = 1_000_000;

/// A position in the machine plus the symbols a pending φ forbids next.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
struct Config {
    state: StateId,
    excluded: Vec<Sym>,
}

fn plain_inputs(fst: &Fst, q: StateId) -> impl Iterator<Item = Sym> + '_ {
    fst.arcs(q)
        .iter()
        .map(|t| t.input)
        .filter(|&s| s != EPSILON && s != PHI)
}

fn phi_excluded(fst: &Fst, q: StateId, excluded: &[Sym]) -> Vec<Sym> {
    let mut v: Vec<Sym> = excluded.iter().copied().chain(plain_inputs(fst, q)).collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// ε/φ closure of a set of configurations over input labels.
fn closure(fst: &Fst, seeds: impl IntoIterator<Item = Config>) -> BTreeSet<Config> {
    let mut set: BTreeSet<Config> = BTreeSet::new();
    let mut stack: Vec<Config> = Vec::new();
    for c in seeds {
        if set.insert(c.clone()) {
            stack.push(c);
        }
    }
    while let Some(c) = stack.pop() {
        for t in fst.arcs(c.state) {
            let next = match t.input {
                EPSILON => Config {
                    state: t.dst,
                    excluded: c.excluded.clone(),
                },
                PHI => Config {
                    state: t.dst,
                    excluded: phi_excluded(fst, c.state, &c.excluded),
                },
                _ => continue,
            };
            if set.insert(next.clone()) {
                stack.push(next);
            }
        }
    }
    set
}

fn step(fst: &Fst, configs: &BTreeSet<Config>, sym: Sym) -> BTreeSet<Config> {
    let seeds = configs
        .iter()
        .filter(|c| c.excluded.binary_search(&sym).is_err())
        .flat_map(|c| fst.arcs(c.state).iter().filter(|t| t.input == sym))
        .map(|t| Config {
            state: t.dst,
            excluded: Vec::new(),
        })
        .collect::<Vec<_>>();
    closure(fst, seeds)
}

fn start_configs(fst: &Fst) -> BTreeSet<Config> {
    closure(
        fst,
        [Config {
            state: fst.start(),
            excluded: Vec::new(),
        }],
    )
}

/// True iff some accepting path reads `seq` on its input side.
pub fn accepts(fst: &Fst, seq: &[Sym]) -> bool {
    let mut configs = start_configs(fst);
    for &s in seq {
        configs = step(fst, &configs, s);
        if configs.is_empty() {
            return false;
        }
    }
    configs.iter().any(|c| fst.is_final(c.state))
}

/// Every accepted input sequence of length at most `max_len`.
pub fn enumerate_language(fst: &Fst, max_len: usize) -> Result<BTreeSet<Vec<Sym>>, FstError> {
    enumerate_language_capped(fst, max_len, DEFAULT_PATH_CAP)
}

/// As [`enumerate_language`], failing once more than `cap` prefixes have
/// been explored.
pub fn enumerate_language_capped(
    fst: &Fst,
    max_len: usize,
    cap: usize,
) -> Result<BTreeSet<Vec<Sym>>, FstError> {
    let mut found = BTreeSet::new();
    let mut explored = 0usize;
    let mut stack = vec![(Vec::new(), start_configs(fst))];
    while let Some((prefix, configs)) = stack.pop() {
        explored += 1;
        if explored > cap {
            return Err(FstError::EnumerationCap {
                explored: explored - 1,
                partial: found.len(),
            });
        }
        if configs.iter().any(|c| fst.is_final(c.state)) {
            found.insert(prefix.clone());
        }
        if prefix.len() == max_len {
            continue;
        }
        let labels: BTreeSet<Sym> = configs
            .iter()
            .flat_map(|c| plain_inputs(fst, c.state))
            .collect();
        for sym in labels {
            let next = step(fst, &configs, sym);
            if next.is_empty() {
                continue;
            }
            let mut p = prefix.clone();
            p.push(sym);
            stack.push((p, next));
        }
    }
    Ok(found)
}

/// All outputs `y` with `|y| <= max_out` such that the transducer accepts
/// `(input, y)`.
pub fn transduce(fst: &Fst, input: &[Sym], max_out: usize) -> Result<Vec<Vec<Sym>>, FstError> {
    let pairs = search_pairs(fst, Bound::Exact(input), max_out, DEFAULT_PATH_CAP)?;
    Ok(pairs.into_iter().map(|(_, y)| y).collect())
}

/// Every accepted pair `(x, y)` with `|x| <= max_in` and `|y| <= max_out`.
pub fn enumerate_pairs(
    fst: &Fst,
    max_in: usize,
    max_out: usize,
) -> Result<BTreeSet<SeqPair>, FstError> {
    search_pairs(fst, Bound::Len(max_in), max_out, DEFAULT_PATH_CAP)
}

enum Bound<'a> {
    Exact(&'a [Sym]),
    Len(usize),
}

fn search_pairs(
    fst: &Fst,
    bound: Bound<'_>,
    max_out: usize,
    cap: usize,
) -> Result<BTreeSet<SeqPair>, FstError> {
    type Item = (StateId, Vec<Sym>, Vec<Sym>, Vec<Sym>);
    let mut found = BTreeSet::new();
    let mut seen: HashSet<Item> = HashSet::new();
    let mut queue: VecDeque<Item> = VecDeque::new();
    let start = (fst.start(), Vec::new(), Vec::new(), Vec::new());
    seen.insert(start.clone());
    queue.push_back(start);

    let complete = |x: &[Sym]| match bound {
        Bound::Exact(w) => x.len() == w.len(),
        Bound::Len(_) => true,
    };
    let next_input = |x: &[Sym]| -> Option<Option<Sym>> {
        match bound {
            Bound::Exact(w) => w.get(x.len()).map(|&s| Some(s)),
            Bound::Len(n) => (x.len() < n).then_some(None),
        }
    };

    while let Some((q, excluded, x, y)) = queue.pop_front() {
        if seen.len() > cap {
            return Err(FstError::EnumerationCap {
                explored: seen.len(),
                partial: found.len(),
            });
        }
        if fst.is_final(q) && complete(&x) {
            found.insert((x.clone(), y.clone()));
        }
        for t in fst.arcs(q) {
            if t.output != EPSILON && y.len() >= max_out {
                continue;
            }
            let mut ny = y.clone();
            if t.output != EPSILON {
                ny.push(t.output);
            }
            let item = match t.input {
                EPSILON => (t.dst, excluded.clone(), x.clone(), ny),
                PHI => (t.dst, phi_excluded(fst, q, &excluded), x.clone(), ny),
                sym => {
                    if excluded.binary_search(&sym).is_ok() {
                        continue;
                    }
                    match next_input(&x) {
                        Some(Some(w)) if w == sym => {}
                        Some(None) => {}
                        _ => continue,
                    }
                    let mut nx = x.clone();
                    nx.push(sym);
                    (t.dst, Vec::new(), nx, ny)
                }
            };
            if seen.insert(item.clone()) {
                queue.push_back(item);
            }
        }
    }
    Ok(found)
}
