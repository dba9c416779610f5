use std::collections::{BTreeMap, VecDeque};

use crate::automata::{Fst, StateId};
use crate::symbols::{Sym, EPSILON, PHI};
use crate::tokenize::Vocabulary;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrieNode {
    pub prefix: String,
    pub children: BTreeMap<char, usize>,
    /// Token id when `prefix` is itself a token.
    pub token: Option<Sym>,
    /// Failure link.
    pub fail: Option<usize>,
    /// Tokens popped when following the failure link.
    pub pops: Vec<Sym>,
}

/// Prefix trie of a vocabulary with MaxMatch failure links. Node 0 is the
/// root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FailureTrie {
    vocab: Vocabulary,
    nodes: Vec<TrieNode>,
}

impl FailureTrie {
    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn nodes(&self) -> &[TrieNode] {
        &self.nodes
    }

    pub fn root(&self) -> usize {
        0
    }

    pub fn node(&self, prefix: &str) -> Option<&TrieNode> {
        let mut n = 0;
        for c in prefix.chars() {
            n = *self.nodes[n].children.get(&c)?;
        }
        Some(&self.nodes[n])
    }
}

/// Builds the trie and fills failure links breadth first.
///
/// A token node fails to the root popping itself. A non-token child `v`
/// of `u` on `c` walks `u`'s failure chain until some node has a `c`
/// child, collecting the pops along the way.
pub fn build_failure_trie(v: &Vocabulary) -> FailureTrie {
    let mut nodes = vec![TrieNode {
        prefix: String::new(),
        children: BTreeMap::new(),
        token: None,
        fail: None,
        pops: Vec::new(),
    }];
    for id in v.token_ids() {
        let tok = v.token(id).expect("vocabulary id");
        let mut n = 0;
        for c in tok.chars() {
            n = match nodes[n].children.get(&c) {
                Some(&next) => next,
                None => {
                    let next = nodes.len();
                    let mut prefix = nodes[n].prefix.clone();
                    prefix.push(c);
                    nodes.push(TrieNode {
                        prefix,
                        children: BTreeMap::new(),
                        token: None,
                        fail: None,
                        pops: Vec::new(),
                    });
                    nodes[n].children.insert(c, next);
                    next
                }
            };
        }
        nodes[n].token = Some(id);
    }

    let mut queue = VecDeque::from([0usize]);
    while let Some(u) = queue.pop_front() {
        let children: Vec<(char, usize)> =
            nodes[u].children.iter().map(|(&c, &n)| (c, n)).collect();
        for (c, child) in children {
            queue.push_back(child);
            if let Some(id) = nodes[child].token {
                nodes[child].fail = Some(0);
                nodes[child].pops = vec![id];
                continue;
            }
            let mut z = nodes[u].fail;
            let mut collected = Vec::new();
            while let Some(zi) = z {
                if nodes[zi].children.contains_key(&c) {
                    break;
                }
                collected.extend_from_slice(&nodes[zi].pops);
                z = nodes[zi].fail;
            }
            if let Some(zi) = z {
                let mut pops = nodes[u].pops.clone();
                pops.extend(collected);
                nodes[child].fail = Some(nodes[zi].children[&c]);
                nodes[child].pops = pops;
            }
        }
    }
    FailureTrie {
        vocab: v.clone(),
        nodes,
    }
}

/// Converts a failure trie into a transducer whose only accepted output
/// for an input string is its greedy longest-match tokenization.
///
/// Character arcs follow the trie and emit ε. Each non-root node with a
/// failure link gets a φ arc emitting its pops, one token per arc, ending
/// at the failure target. The root is the start and the only final state.
pub fn build_maxmatch_transducer(trie: &FailureTrie) -> Fst {
    let v = trie.vocab();
    let mut fst = Fst::with_states(v.symbols().clone(), trie.nodes.len());
    fst.set_final(0, true);
    for (i, node) in trie.nodes.iter().enumerate() {
        for (c, &child) in &node.children {
            fst.add_arc(i as StateId, v.chars()[c], EPSILON, child as StateId);
        }
        let Some(target) = node.fail else { continue };
        let mut src = i as StateId;
        let mut input = PHI;
        for (k, &tok) in node.pops.iter().enumerate() {
            let dst = if k + 1 == node.pops.len() {
                target as StateId
            } else {
                fst.add_state()
            };
            fst.add_arc(src, input, tok, dst);
            src = dst;
            input = EPSILON;
        }
    }
    fst
}
