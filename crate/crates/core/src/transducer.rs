//! The Raney transducer `T_n`.
//!
//! States are `DB_n`. From a state `M`, an input word `V` is extended letter
//! by letter while `M·mu(V)` stays row balanced; the first word that escapes
//! becomes an edge `M -V|W-> N` with `M·mu(V) = mu(W)·N`, where `W` and `N`
//! come from greedy left peeling. The prefixes seen along the way form a
//! trie per state, which the table-driven [`Walker`] follows.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::engine::{peel_to_rb, ClosedWalk};
use crate::error::{Error, Result};
use crate::matrices::{enumerate_db, in_d, in_db, is_le, is_re, nu_l, nu_r, Mat2};
use crate::words::{LRWord, Letter};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TransducerEdge {
    pub from: Mat2,
    pub input: LRWord,
    pub output: LRWord,
    pub to: Mat2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Step {
    Node(usize),
    Edge(usize),
}

#[derive(Clone, Debug)]
struct TrieNode {
    matrix: Mat2,
    state: usize,
    next: [Step; 2],
}

fn slot(letter: Letter) -> usize {
    match letter {
        Letter::L => 0,
        Letter::R => 1,
    }
}

/// Immutable `T_n`.
#[derive(Clone, Debug)]
pub struct Transducer {
    n: u64,
    states: Vec<Mat2>,
    index: HashMap<Mat2, usize>,
    edges: Vec<TransducerEdge>,
    edge_target: Vec<usize>,
    nodes: Vec<TrieNode>,
    roots: Vec<usize>,
}

/// Greedy left peeling of `p ∈ D_n` into `mu(w)·k` with `k` row balanced.
/// Fails if nothing peels or if `k` is not doubly balanced.
pub fn factorize_to_db(p: &Mat2, n: u64) -> Result<(LRWord, Mat2)> {
    if !in_d(p, n) {
        return Err(Error::not_in(p, format!("D_{n}")));
    }
    let mut k = p.clone();
    let mut w = LRWord::empty();
    peel_to_rb(&mut k, &mut w);
    if w.is_empty() {
        return Err(Error::FactorizationViolation(format!("{p}: empty output word")));
    }
    if !in_db(&k, n) {
        return Err(Error::FactorizationViolation(format!("{p} peels to {k}")));
    }
    Ok((w, k))
}

/// Builds `T_n`.
pub fn build_transducer(n: u64) -> Result<Transducer> {
    if n == 0 {
        return Err(Error::InvalidN { min: 1, got: 0 });
    }
    let states = enumerate_db(n);
    let index: HashMap<Mat2, usize> = states.iter().cloned().zip(0..).collect();
    let mut nodes: Vec<TrieNode> = Vec::new();
    let mut prefixes: Vec<LRWord> = Vec::new();
    let mut edges = Vec::new();
    let mut edge_target = Vec::new();
    let mut roots = Vec::with_capacity(states.len());
    let placeholder = [Step::Edge(usize::MAX); 2];

    for (si, m) in states.iter().enumerate() {
        roots.push(nodes.len());
        nodes.push(TrieNode {
            matrix: m.clone(),
            state: si,
            next: placeholder,
        });
        prefixes.push(LRWord::empty());
        let mut stack = vec![nodes.len() - 1];
        while let Some(id) = stack.pop() {
            // R is pushed last so L subtrees come out first.
            for letter in [Letter::R, Letter::L] {
                let mut y = nodes[id].matrix.clone();
                y.mul_letter_right(letter, &BigInt::one());
                let mut input = prefixes[id].clone();
                input.push(letter, 1u32);
                let step = if y.row_balanced_shape() {
                    nodes.push(TrieNode {
                        matrix: y,
                        state: si,
                        next: placeholder,
                    });
                    prefixes.push(input);
                    stack.push(nodes.len() - 1);
                    Step::Node(nodes.len() - 1)
                } else {
                    let (output, to) = factorize_to_db(&y, n)?;
                    edge_target.push(index[&to]);
                    edges.push(TransducerEdge {
                        from: m.clone(),
                        input,
                        output,
                        to,
                    });
                    Step::Edge(edges.len() - 1)
                };
                nodes[id].next[slot(letter)] = step;
            }
        }
    }

    Ok(Transducer {
        n,
        states,
        index,
        edges,
        edge_target,
        nodes,
        roots,
    })
}

impl Transducer {
    pub fn n(&self) -> u64 {
        self.n
    }

    /// `DB_n`, with `A_n` first.
    pub fn states(&self) -> &[Mat2] {
        &self.states
    }

    pub fn edges(&self) -> &[TransducerEdge] {
        &self.edges
    }

    pub fn edges_from<'a>(&'a self, m: &'a Mat2) -> impl Iterator<Item = &'a TransducerEdge> + 'a {
        self.edges.iter().filter(move |e| &e.from == m)
    }

    pub fn state_index(&self, m: &Mat2) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn contains_state(&self, m: &Mat2) -> bool {
        self.index.contains_key(m)
    }

    /// Size of the prefix trie, which equals the number of row-balanced
    /// matrices reachable mid-edge (including the states themselves).
    pub fn trie_size(&self) -> usize {
        self.nodes.len()
    }

    pub fn walker(&self, start: &Mat2) -> Result<Walker<'_>> {
        let si = self
            .state_index(start)
            .ok_or_else(|| Error::UnknownState(start.to_string()))?;
        Ok(Walker {
            t: self,
            node: self.roots[si],
        })
    }

    /// One line per edge: `from  input | output  -> to`.
    pub fn to_table(&self) -> String {
        let mut s = String::new();
        for e in &self.edges {
            let _ = writeln!(s, "{:<14} {:>10} | {:<10} -> {}", e.from, e.input, e.output, e.to);
        }
        s
    }

    pub fn to_dot(&self) -> String {
        let mut s = format!("digraph T{} {{\n  rankdir=LR;\n", self.n);
        for m in &self.states {
            let _ = writeln!(s, "  \"{m}\";");
        }
        for e in &self.edges {
            let _ = writeln!(s, "  \"{}\" -> \"{}\" [label=\"{}|{}\"];", e.from, e.to, e.input, e.output);
        }
        s.push_str("}\n");
        s
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Output(e.to_string());
        w.write_record(["from", "input", "output", "to"]).map_err(io)?;
        for e in &self.edges {
            w.write_record([
                e.from.to_string(),
                e.input.to_string(),
                e.output.to_string(),
                e.to.to_string(),
            ])
            .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Output(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_json_value(&self) -> Result<TransducerJson> {
        Ok(TransducerJson {
            n: self.n,
            states: self.states.iter().map(Mat2::to_i64s).collect::<Result<_>>()?,
            edges: self
                .edges
                .iter()
                .map(|e| {
                    Ok(EdgeJson {
                        from: e.from.to_i64s()?,
                        input: e.input.clone(),
                        output: e.output.clone(),
                        to: e.to.to_i64s()?,
                    })
                })
                .collect::<Result<_>>()?,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        let v = self.to_json_value()?;
        Ok(serde_json::to_string_pretty(&v).expect("plain data serializes"))
    }
}

/// JSON form of a transducer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransducerJson {
    pub n: u64,
    pub states: Vec<[i64; 4]>,
    pub edges: Vec<EdgeJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub from: [i64; 4],
    pub input: LRWord,
    pub output: LRWord,
    pub to: [i64; 4],
}

/// Position inside `T_n`: a state plus the consumed prefix of the pending
/// edge input.
#[derive(Clone, Debug)]
pub struct Walker<'a> {
    t: &'a Transducer,
    node: usize,
}

impl Walker<'_> {
    /// `state · mu(pending prefix)`.
    pub fn matrix(&self) -> &Mat2 {
        &self.t.nodes[self.node].matrix
    }

    pub fn state(&self) -> &Mat2 {
        &self.t.states[self.t.nodes[self.node].state]
    }

    pub fn at_boundary(&self) -> bool {
        self.t.roots[self.t.nodes[self.node].state] == self.node
    }

    /// Opaque key identifying the position.
    pub fn position(&self) -> usize {
        self.node
    }

    pub fn step(&mut self, letter: Letter, out: &mut LRWord) {
        match self.t.nodes[self.node].next[slot(letter)] {
            Step::Node(j) => self.node = j,
            Step::Edge(e) => {
                out.append(&self.t.edges[e].output);
                self.node = self.t.roots[self.t.edge_target[e]];
            }
        }
    }

    pub fn feed(&mut self, letter: Letter, k: &BigUint, out: &mut LRWord) {
        let k = k.to_u64().expect("run length fits in u64");
        for _ in 0..k {
            self.step(letter, out);
        }
    }

    pub fn feed_word(&mut self, w: &LRWord, out: &mut LRWord) {
        for (l, e) in w.runs() {
            self.feed(*l, e, out);
        }
    }
}

/// Feeds `repetend` cyclically from `start` and closes the walk at the first
/// repeated position at a repetend boundary.
///
/// Repetend boundaries can fall inside an edge, so the closed walk may start
/// at a row-balanced matrix that is not a state; `gamma` is bounded by the
/// trie size rather than by `#DB_n`.
pub fn transduce_cycle(t: &Transducer, start: &Mat2, repetend: &LRWord) -> Result<ClosedWalk> {
    if repetend.is_empty() {
        return Err(Error::EmptyWord);
    }
    if !repetend.has_both_letters() {
        return Err(Error::SingleLetterWord(repetend.to_string()));
    }
    let mut walker = t.walker(start)?;
    let mut seen: HashMap<usize, usize> = HashMap::new();
    let mut outputs: Vec<LRWord> = Vec::new();
    loop {
        if let Some(&i) = seen.get(&walker.position()) {
            let gamma = outputs.len() - i;
            let mut output = LRWord::empty();
            for w in &outputs[i..] {
                output.append(w);
            }
            return Ok(ClosedWalk {
                start: walker.matrix().clone(),
                input: repetend.pow(gamma),
                output,
                gamma,
            });
        }
        seen.insert(walker.position(), outputs.len());
        let mut out = LRWord::empty();
        walker.feed_word(repetend, &mut out);
        outputs.push(out);
    }
}

/// Walk data for `M ∈ LE_n` and `ν_L(M) ≤ i < 2ν_L(M)`: the target
/// `N ∈ RE_n`, the exponent `j` and the output `W` of the walk
/// `M -L^i R^j|W-> N` with `3n − ν_R(N) < j ≤ 3n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeWalk {
    pub target: Mat2,
    pub j: u64,
    pub output: LRWord,
}

pub fn walk_le(t: &Transducer, m: &Mat2, i: u64) -> Result<LeWalk> {
    if !t.contains_state(m) {
        return Err(Error::UnknownState(m.to_string()));
    }
    if !is_le(m)? {
        return Err(Error::not_in(m, format!("LE_{}", t.n)));
    }
    let nu = nu_l(m)?.to_u64().expect("nu_L is at most n");
    if i < nu || i > 2 * nu - 1 {
        return Err(Error::OutOfRange {
            what: "i",
            value: i.to_string(),
            lo: nu.to_string(),
            hi: (2 * nu - 1).to_string(),
        });
    }
    let n = t.n;
    let mut walker = t.walker(m)?;
    let mut out = LRWord::empty();
    walker.feed(Letter::L, &BigUint::from(i), &mut out);
    let mut found: Option<LeWalk> = None;
    for j in 1..=3 * n {
        walker.step(Letter::R, &mut out);
        if !walker.at_boundary() || !is_re(walker.state())? {
            continue;
        }
        let target = walker.state();
        let nu_r = nu_r(target)?.to_u64().expect("nu_R is at most n");
        if j + nu_r > 3 * n {
            if let Some(prev) = &found {
                return Err(Error::FactorizationViolation(format!(
                    "walk from {m} with L^{i} meets RE twice in the window: j = {} and {j}",
                    prev.j
                )));
            }
            found = Some(LeWalk {
                target: target.clone(),
                j,
                output: out.clone(),
            });
        }
    }
    found.ok_or_else(|| {
        Error::FactorizationViolation(format!("walk from {m} with L^{i} never reaches RE"))
    })
}
