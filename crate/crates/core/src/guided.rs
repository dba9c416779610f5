//! Next-token masks over a promoted DFA and a deterministic stub decoder.

use std::collections::BTreeSet;

use crate::automata::{Dfa, StateId};
use crate::symbols::{Sym, EPSILON};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GuidedError {
    #[error("constraint automaton accepts nothing")]
    DeadConstraint,
    #[error("token {token} is not allowed in state {state}")]
    Violation { state: StateId, token: Sym },
    #[error("generation stopped after {} tokens outside an accepting state", prefix.len())]
    Incomplete { prefix: Vec<Sym> },
}

/// Position of a decode session within a constraint DFA.
#[derive(Debug, Clone, Copy)]
pub struct ConstraintState<'a> {
    dfa: &'a Dfa,
    state: StateId,
}

impl<'a> ConstraintState<'a> {
    pub fn dfa(&self) -> &'a Dfa {
        self.dfa
    }

    pub fn state(&self) -> StateId {
        self.state
    }

    /// Generation may stop here.
    pub fn terminable(&self) -> bool {
        self.dfa.is_final(self.state)
    }
}

/// Starts a session. `d` is expected trim, so every arc leads somewhere
/// accepting.
pub fn constraint_begin(d: &Dfa) -> Result<ConstraintState<'_>, GuidedError> {
    if d.is_empty_language() {
        return Err(GuidedError::DeadConstraint);
    }
    Ok(ConstraintState {
        dfa: d,
        state: d.start(),
    })
}

pub fn allowed_tokens(s: &ConstraintState<'_>) -> BTreeSet<Sym> {
    s.dfa.arcs(s.state).iter().map(|t| t.input).collect()
}

pub fn constraint_advance<'a>(
    s: &ConstraintState<'a>,
    tok: Sym,
) -> Result<ConstraintState<'a>, GuidedError> {
    match s.dfa.next(s.state, tok) {
        Some(state) => Ok(ConstraintState { dfa: s.dfa, state }),
        None => Err(GuidedError::Violation {
            state: s.state,
            token: tok,
        }),
    }
}

/// Advances through a whole prefix.
pub fn constraint_prefix<'a>(d: &'a Dfa, prefix: &[Sym]) -> Result<ConstraintState<'a>, GuidedError> {
    prefix
        .iter()
        .try_fold(constraint_begin(d)?, |s, &t| constraint_advance(&s, t))
}

/// Stand-in language model with reproducible pseudo-random scores.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StubLM {
    pub seed: u64,
    pub vocab_size: usize,
}

fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl StubLM {
    pub fn new(seed: u64, vocab_size: usize) -> Self {
        Self { seed, vocab_size }
    }

    /// Score in `[0, 1)` for `candidate` after `context`.
    pub fn score(&self, context: &[Sym], candidate: Sym) -> f64 {
        let h = context
            .iter()
            .fold(mix(self.seed), |h, &t| mix(h ^ u64::from(t)));
        let h = mix(h ^ 0xa5a5_a5a5 ^ u64::from(candidate));
        (h >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Score of stopping after `context`.
    pub fn end_score(&self, context: &[Sym]) -> f64 {
        self.score(context, EPSILON)
    }
}

/// Highest-scoring allowed token, lowest id on ties.
fn argmax(lm: &StubLM, context: &[Sym], allowed: &BTreeSet<Sym>) -> Option<(Sym, f64)> {
    allowed.iter().fold(None, |best, &t| {
        let s = lm.score(context, t);
        match best {
            Some((_, b)) if b >= s => best,
            _ => Some((t, s)),
        }
    })
}

/// Greedy constrained decoding. At an accepting state generation stops
/// when the end score beats every allowed continuation.
pub fn constrained_decode(lm: &StubLM, d: &Dfa, max_steps: usize) -> Result<Vec<Sym>, GuidedError> {
    decode_from(lm, constraint_begin(d)?, Vec::new(), max_steps)
}

fn decode_from<'a>(
    lm: &StubLM,
    mut s: ConstraintState<'a>,
    mut out: Vec<Sym>,
    max_steps: usize,
) -> Result<Vec<Sym>, GuidedError> {
    while out.len() < max_steps {
        let best = argmax(lm, &out, &allowed_tokens(&s));
        if s.terminable() && best.is_none_or(|(_, b)| lm.end_score(&out) > b) {
            return Ok(out);
        }
        let Some((tok, _)) = best else { break };
        s = constraint_advance(&s, tok)?;
        out.push(tok);
    }
    if s.terminable() {
        Ok(out)
    } else {
        Err(GuidedError::Incomplete { prefix: out })
    }
}

/// Decoding with periodic repair: every `every` tokens the prefix is
/// detokenized and retokenized with `retokenize`; the retokenized prefix
/// replaces the generated one when the constraint still admits it.
pub fn constrained_decode_retokenizing<F>(
    lm: &StubLM,
    d: &Dfa,
    max_steps: usize,
    every: usize,
    retokenize: F,
) -> Result<Vec<Sym>, GuidedError>
where
    F: Fn(&[Sym]) -> Vec<Sym>,
{
    let every = every.max(1);
    let mut s = constraint_begin(d)?;
    let mut out = Vec::new();
    while out.len() < max_steps {
        let best = argmax(lm, &out, &allowed_tokens(&s));
        if s.terminable() && best.is_none_or(|(_, b)| lm.end_score(&out) > b) {
            break;
        }
        let Some((tok, _)) = best else { break };
        s = constraint_advance(&s, tok)?;
        out.push(tok);
        if out.len() % every == 0 {
            let fixed = retokenize(&out);
            if let Ok(ns) = constraint_prefix(d, &fixed) {
                s = ns;
                out = fixed;
            }
        }
    }
    let fixed = retokenize(&out);
    match constraint_prefix(d, &fixed) {
        Ok(ns) if ns.terminable() => Ok(fixed),
        _ if s.terminable() => Ok(out),
        _ => Err(GuidedError::Incomplete { prefix: out }),
    }
}
