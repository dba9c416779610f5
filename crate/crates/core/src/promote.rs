//! Promotion of character-level pattern DFAs to subword-level DFAs.

use std::fmt;
use std::time::{Duration, Instant};

use crate::automata::{
    compose, determinize, epsilon_remove, is_deterministic, minimize, project_output, Dfa, Fst,
    FstError,
};
use crate::lexicon::{
    build_failure_trie, build_lexicon_transducer, build_maxmatch_transducer, build_merge_gadget,
    LexiconError,
};
use crate::symbols::Sym;
use crate::tokenize::{BpeTokenizer, Vocabulary};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Agnostic,
    MaxMatch,
    Bpe,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Agnostic => "agnostic",
            Mode::MaxMatch => "maxmatch",
            Mode::Bpe => "bpe",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PromoteError {
    #[error("pattern uses a different symbol table than the vocabulary")]
    SymbolTableMismatch,
    #[error("pattern label {0:?} is not a single-character token")]
    NonCharacterLabel(String),
    #[error(transparent)]
    Fst(#[from] FstError),
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
}

/// One pipeline stage.
#[derive(Debug, Clone, PartialEq)]
pub struct StageStats {
    pub label: String,
    /// State and transition counts after minimization.
    pub states: usize,
    pub transitions: usize,
    /// Whether the ε-removed projection was deterministic before any
    /// determinization. Always true for the input stage.
    pub deterministic: bool,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PromotionStats {
    /// The input pattern first, then one entry per composition.
    pub stages: Vec<StageStats>,
    pub total: Duration,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PromotionResult {
    pub dfa: Dfa,
    pub mode: Mode,
    pub stats: PromotionStats,
    /// Minimized machine after each stage, when requested.
    pub intermediates: Vec<Dfa>,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct PromoteOptions {
    pub keep_intermediates: bool,
}

/// Per-stage minimized state counts: one per composition, or the input
/// size when nothing was composed.
pub fn promotion_stats(r: &PromotionResult) -> Vec<usize> {
    match r.stats.stages.split_first() {
        Some((input, [])) => vec![input.states],
        Some((_, rest)) => rest.iter().map(|s| s.states).collect(),
        None => vec![],
    }
}

fn check_pattern(a: &Dfa, v: &Vocabulary) -> Result<(), PromoteError> {
    let (x, y) = (a.symbols(), v.symbols());
    if !std::sync::Arc::ptr_eq(x, y) && x != y {
        return Err(PromoteError::SymbolTableMismatch);
    }
    for s in a.input_alphabet() {
        if !v.is_char(s) {
            return Err(PromoteError::NonCharacterLabel(y.label(s)));
        }
    }
    Ok(())
}

fn input_stage(a: &Dfa) -> StageStats {
    StageStats {
        label: "input".into(),
        states: a.num_states(),
        transitions: a.num_transitions(),
        deterministic: true,
        elapsed: Duration::ZERO,
    }
}

/// `minimize(epsilon_remove(project_output(compose(current, t))))`.
///
/// With `determinize_first` unset the projection must already be
/// deterministic; otherwise this is an error rather than a silent fix-up.
fn stage(
    current: &Fst,
    t: &Fst,
    label: String,
    determinize_first: bool,
) -> Result<(Dfa, StageStats), PromoteError> {
    let started = Instant::now();
    let p = epsilon_remove(&project_output(&compose(current, t)?));
    let deterministic = is_deterministic(&p);
    let d = if determinize_first && !deterministic {
        determinize(&p)?
    } else {
        Dfa::try_from_fst(p)?
    };
    let m = minimize(&d);
    let stats = StageStats {
        label,
        states: m.num_states(),
        transitions: m.num_transitions(),
        deterministic,
        elapsed: started.elapsed(),
    };
    Ok((m, stats))
}

fn run(
    a: &Dfa,
    mode: Mode,
    stages: Vec<(String, Fst)>,
    determinize_first: bool,
    opts: PromoteOptions,
) -> Result<PromotionResult, PromoteError> {
    let started = Instant::now();
    let mut stats = PromotionStats {
        stages: vec![input_stage(a)],
        total: Duration::ZERO,
    };
    let mut intermediates = Vec::new();
    let mut current = minimize(a);
    if current.is_empty_language() {
        stats.total = started.elapsed();
        return Ok(PromotionResult {
            dfa: current,
            mode,
            stats,
            intermediates,
        });
    }
    for (label, t) in stages {
        let (next, s) = stage(&current, &t, label, determinize_first)?;
        stats.stages.push(s);
        if opts.keep_intermediates {
            intermediates.push(next.clone());
        }
        current = next;
    }
    stats.total = started.elapsed();
    Ok(PromotionResult {
        dfa: current,
        mode,
        stats,
        intermediates,
    })
}

/// Every segmentation of every matching string.
pub fn promote_agnostic(a: &Dfa, v: &Vocabulary) -> Result<PromotionResult, PromoteError> {
    check_pattern(a, v)?;
    let t = build_lexicon_transducer(v);
    run(
        a,
        Mode::Agnostic,
        vec![("lexicon".into(), t)],
        false,
        PromoteOptions::default(),
    )
}

/// Only greedy longest-match tokenizations of matching strings.
///
/// The projected composition can offer the same popped token along two
/// paths that only diverge on later characters, so this pipeline
/// determinizes before minimizing.
pub fn promote_maxmatch(a: &Dfa, v: &Vocabulary) -> Result<PromotionResult, PromoteError> {
    check_pattern(a, v)?;
    let t = build_maxmatch_transducer(&build_failure_trie(v));
    run(
        a,
        Mode::MaxMatch,
        vec![("maxmatch".into(), t)],
        true,
        PromoteOptions::default(),
    )
}

/// Only BPE tokenizations of matching strings, one gadget per merge,
/// minimizing after every merge.
pub fn promote_bpe(a: &Dfa, t: &BpeTokenizer) -> Result<PromotionResult, PromoteError> {
    promote_bpe_with(a, t, PromoteOptions::default())
}

pub fn promote_bpe_with(
    a: &Dfa,
    t: &BpeTokenizer,
    opts: PromoteOptions,
) -> Result<PromotionResult, PromoteError> {
    check_pattern(a, t.vocab())?;
    let gadgets = merge_gadgets(t)?;
    run(a, Mode::Bpe, gadgets, false, opts)
}

fn merge_gadgets(t: &BpeTokenizer) -> Result<Vec<(String, Fst)>, PromoteError> {
    let symbols = t.vocab().symbols();
    t.merges()
        .iter()
        .enumerate()
        .map(|(i, &m)| {
            let g = build_merge_gadget(symbols, m, &t.alphabet_before(i))?;
            let label = format!(
                "merge {} ({} {})",
                i + 1,
                symbols.label(m.left),
                symbols.label(m.right)
            );
            Ok((label, g.into_fst()))
        })
        .collect()
}

/// BPE promotion through one chained composition `A ∘ G1 ∘ … ∘ Gn`
/// (associated left to right), projected and minimized once at the end.
pub fn promote_bpe_chained(a: &Dfa, t: &BpeTokenizer) -> Result<Dfa, PromoteError> {
    check_pattern(a, t.vocab())?;
    let mut current: Fst = a.as_fst().clone();
    for (_, g) in merge_gadgets(t)? {
        current = compose(&current, &g)?;
    }
    let p = epsilon_remove(&project_output(&current));
    Ok(minimize(&determinize(&p)?))
}

/// Dispatch on mode. `merges` is required for [`Mode::Bpe`].
pub fn promote(
    a: &Dfa,
    mode: Mode,
    v: &Vocabulary,
    bpe: Option<&BpeTokenizer>,
) -> Result<PromotionResult, PromoteError> {
    match (mode, bpe) {
        (Mode::Agnostic, _) => promote_agnostic(a, v),
        (Mode::MaxMatch, _) => promote_maxmatch(a, v),
        (Mode::Bpe, Some(t)) => promote_bpe(a, t),
        (Mode::Bpe, None) => Err(PromoteError::Fst(FstError::Invalid(
            "bpe promotion needs a merge list".into(),
        ))),
    }
}

/// Token sequence rendered with spaces.
pub fn render(v: &Vocabulary, seq: &[Sym]) -> String {
    v.symbols().render(seq)
}
