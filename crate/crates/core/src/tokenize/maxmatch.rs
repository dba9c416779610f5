use super::{TokenizeError, Vocabulary};
use crate::symbols::Sym;

/// Greedy longest-match-first tokenization, scanning left to right and
/// trying every window length up to the longest token.
pub fn maxmatch_tokenize(v: &Vocabulary, w: &str) -> Result<Vec<Sym>, TokenizeError> {
    // Validates the input alphabet.
    let char_ids = v.encode_chars(w)?;
    let chars: Vec<char> = w.chars().collect();
    let m = v.max_token_len();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let mut best = (char_ids[i], 1);
        let mut window = String::new();
        for j in 1..=m.min(chars.len() - i) {
            window.push(chars[i + j - 1]);
            if let Some(id) = v.lookup(&window) {
                best = (id, j);
            }
        }
        out.push(best.0);
        i += best.1;
    }
    Ok(out)
}
