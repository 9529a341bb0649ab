//! Lempel–Ziv (1976) production complexity.
//!
//! The exhaustive history splits the sequence into components: each
//! component is the longest prefix of the remaining input that can be copied
//! from a start position strictly inside the already-seen text (overlap
//! allowed), extended by one innovating symbol. The final component may end
//! while still copyable; it is counted all the same.
//!
//! Finding the longest copyable prefix uses a suffix automaton grown online
//! over the text. Matching `w·a` with `w = s[i..i+l)` against the automaton of
//! `s[..i+l)` is exactly the test "does `w·a` start before `i`".

use rustc_hash::FxHashMap;

const NONE: u32 = u32::MAX;
const ROOT: u32 = 0;

struct Node {
    len: u32,
    link: u32,
    // head of this state's outgoing-edge list in `SuffixAutomaton::edges`
    first_edge: u32,
}

struct Edge {
    symbol: u64,
    next: u32,
}

/// Online suffix automaton over `u64` symbols.
///
/// Transitions live in one hash map for lookup; each state also keeps an
/// intrusive list of its edge symbols so clones can copy them.
struct SuffixAutomaton {
    nodes: Vec<Node>,
    edges: Vec<Edge>,
    trans: FxHashMap<(u32, u64), u32>,
    last: u32,
}

impl SuffixAutomaton {
    fn with_capacity(n: usize) -> Self {
        let mut nodes = Vec::with_capacity(2 * n + 1);
        nodes.push(Node {
            len: 0,
            link: NONE,
            first_edge: NONE,
        });
        let mut trans = FxHashMap::default();
        trans.reserve(2 * n);
        Self {
            nodes,
            edges: Vec::with_capacity(2 * n),
            trans,
            last: ROOT,
        }
    }

    #[inline]
    fn next(&self, state: u32, symbol: u64) -> Option<u32> {
        self.trans.get(&(state, symbol)).copied()
    }

    fn set(&mut self, state: u32, symbol: u64, target: u32) {
        if self.trans.insert((state, symbol), target).is_none() {
            let node = &mut self.nodes[state as usize];
            self.edges.push(Edge {
                symbol,
                next: node.first_edge,
            });
            node.first_edge = (self.edges.len() - 1) as u32;
        }
    }

    fn push_node(&mut self, len: u32, link: u32) -> u32 {
        self.nodes.push(Node {
            len,
            link,
            first_edge: NONE,
        });
        (self.nodes.len() - 1) as u32
    }

    /// Appends one symbol. Returns `(split, clone)` when an existing state
    /// was split, so callers holding `split` can re-home short strings.
    fn extend(&mut self, symbol: u64) -> Option<(u32, u32)> {
        let cur = self.push_node(self.nodes[self.last as usize].len + 1, NONE);
        let mut p = self.last;
        self.last = cur;
        while p != NONE && self.next(p, symbol).is_none() {
            self.set(p, symbol, cur);
            p = self.nodes[p as usize].link;
        }
        if p == NONE {
            self.nodes[cur as usize].link = ROOT;
            return None;
        }
        let q = self.next(p, symbol).expect("transition checked above");
        let p_len = self.nodes[p as usize].len;
        if p_len + 1 == self.nodes[q as usize].len {
            self.nodes[cur as usize].link = q;
            return None;
        }
        let clone = self.push_node(p_len + 1, self.nodes[q as usize].link);
        let mut e = self.nodes[q as usize].first_edge;
        while e != NONE {
            let sym = self.edges[e as usize].symbol;
            let target = self.next(q, sym).expect("edge list mirrors map");
            self.set(clone, sym, target);
            e = self.edges[e as usize].next;
        }
        while p != NONE && self.next(p, symbol) == Some(q) {
            self.set(p, symbol, clone);
            p = self.nodes[p as usize].link;
        }
        self.nodes[q as usize].link = clone;
        self.nodes[cur as usize].link = clone;
        Some((q, clone))
    }
}

/// Walks the exhaustive history, calling `emit(start, end)` per component.
pub(crate) fn exhaustive_history(symbols: &[u64], mut emit: impl FnMut(usize, usize)) {
    let n = symbols.len();
    let mut sam = SuffixAutomaton::with_capacity(n);
    let mut built = 0usize;
    let mut start = 0usize;
    while start < n {
        let mut state = ROOT;
        let mut matched = 0usize;
        loop {
            if start + matched == n {
                emit(start, n);
                start = n;
                break;
            }
            while built < start + matched {
                if let Some((split, clone)) = sam.extend(symbols[built]) {
                    if state == split && matched <= sam.nodes[clone as usize].len as usize {
                        state = clone;
                    }
                }
                built += 1;
            }
            match sam.next(state, symbols[start + matched]) {
                Some(next) => {
                    state = next;
                    matched += 1;
                }
                None => {
                    let end = start + matched + 1;
                    emit(start, end);
                    start = end;
                    break;
                }
            }
        }
    }
}

/// Number of components in the exhaustive history.
pub(crate) fn production_count(symbols: &[u64]) -> usize {
    let mut count = 0;
    exhaustive_history(symbols, |_, _| count += 1);
    count
}
