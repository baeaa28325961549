//! Executable checks of the structural properties of `T_n`.
//!
//! Every check returns the list of violations it found, so an empty vector
//! means the property holds on everything that was examined.

use std::collections::{HashMap, HashSet};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::matrices::{in_rb, is_le, is_ls, is_re, nu_l, nu_r, xi, Mat2};
use crate::transducer::{transduce_cycle, walk_le, Transducer};
use crate::words::{LRWord, Letter};

/// Edge-level facts: `M·mu(V) = mu(W)·N`, every proper prefix of `V` keeps
/// `M` row balanced while `V` does not, the last input letter equals the
/// first output letter, no input run exceeds `n`, and the inputs leaving a
/// state form a prefix code with lengths `1, 2, …, ℓ−1, ℓ, ℓ`.
pub fn edge_invariants(t: &Transducer) -> Vec<String> {
    let n = t.n();
    let mut bad = Vec::new();
    for e in t.edges() {
        let tag = format!("{} -{}|{}-> {}", e.from, e.input, e.output, e.to);
        if !t.contains_state(&e.to) {
            bad.push(format!("{tag}: target is not a state"));
        }
        if &e.from * &e.input.mu() != &e.output.mu() * &e.to {
            bad.push(format!("{tag}: M·mu(V) ≠ mu(W)·N"));
        }
        let mut x = e.from.clone();
        let letters: Vec<Letter> = e.input.letters().collect();
        for (k, l) in letters.iter().enumerate() {
            x = &x * &Mat2::letter_power(*l, 1);
            let last = k + 1 == letters.len();
            if in_rb(&x, n) == last {
                bad.push(format!("{tag}: prefix of length {} has the wrong RB status", k + 1));
            }
        }
        if e.input.last_letter() != e.output.first_letter() {
            bad.push(format!("{tag}: letters do not match"));
        }
        if e.input.max_run() > BigUint::from(n) {
            bad.push(format!("{tag}: input run longer than n"));
        }
    }
    for s in t.states() {
        let inputs: Vec<Vec<Letter>> = t.edges_from(s).map(|e| e.input.letters().collect()).collect();
        for (i, u) in inputs.iter().enumerate() {
            for (j, v) in inputs.iter().enumerate() {
                if i != j && v.starts_with(u) {
                    bad.push(format!("{s}: input labels are not a prefix code"));
                }
            }
        }
        let mut lens: Vec<usize> = inputs.iter().map(Vec::len).collect();
        lens.sort_unstable();
        let l = lens.last().copied().unwrap_or(0);
        let mut expected: Vec<usize> = (1..=l).collect();
        expected.push(l);
        if lens != expected {
            bad.push(format!("{s}: input length profile {lens:?}"));
        }
    }
    bad
}

/// Edge `(M, V, W, N)` exists iff `(M*, V*, W*, N*)` exists iff
/// `(Nᵀ, Wᵀ, Vᵀ, Mᵀ)` exists.
pub fn symmetry(t: &Transducer) -> Vec<String> {
    let set: HashSet<(&Mat2, &LRWord, &LRWord, &Mat2)> =
        t.edges().iter().map(|e| (&e.from, &e.input, &e.output, &e.to)).collect();
    let mut bad = Vec::new();
    for e in t.edges() {
        let star = (e.from.associated(), e.input.star(), e.output.star(), e.to.associated());
        if !set.contains(&(&star.0, &star.1, &star.2, &star.3)) {
            bad.push(format!("{} -{}|{}-> {}: no associated edge", e.from, e.input, e.output, e.to));
        }
        let tr = (e.to.transpose(), e.output.transpose_word(), e.input.transpose_word(), e.from.transpose());
        if !set.contains(&(&tr.0, &tr.1, &tr.2, &tr.3)) {
            bad.push(format!("{} -{}|{}-> {}: no transposed edge", e.from, e.input, e.output, e.to));
        }
    }
    bad
}

/// Boundary states met while reading `letter` from `start`, as
/// `(letters read, state)`, for at most `limit` letters.
fn single_letter_trace(t: &Transducer, start: &Mat2, letter: Letter, limit: usize) -> Vec<(usize, Mat2)> {
    let mut w = t.walker(start).expect("start is a state");
    let mut out = LRWord::empty();
    let mut trace = Vec::new();
    for k in 1..=limit {
        w.step(letter, &mut out);
        if w.at_boundary() {
            trace.push((k, w.state().clone()));
        }
    }
    trace
}

/// A state has a closed walk reading only `L` iff `b = 0` (only `R` iff
/// `c = 0`). The shortest such walk reads `a/gcd(a, d)` letters (resp.
/// `d/gcd(a, d)`), which is at most `n` and equals `ν_L` on `LE_n` (resp.
/// `ν_R` on `RE_n`). Each such cycle passes through exactly one `LE_n`
/// (resp. `RE_n`) state.
pub fn ls_characterization(t: &Transducer) -> Vec<String> {
    let n = t.n();
    // The walk is deterministic on trie nodes, so a return must happen
    // within that many letters.
    let limit = t.trie_size() + 1;
    let mut bad = Vec::new();
    for m in t.states() {
        for letter in [Letter::L, Letter::R] {
            let trace = single_letter_trace(t, m, letter, limit);
            let ret = trace.iter().find(|(_, s)| s == m).map(|&(k, _)| k);
            let (off, own) = match letter {
                Letter::L => (&m.b, &m.a),
                Letter::R => (&m.c, &m.d),
            };
            let stays = off.is_zero();
            if ret.is_some() != stays {
                bad.push(format!("{m}: closed {letter:?}-walk {ret:?}, off-diagonal zero {stays}"));
                continue;
            }
            let Some(k) = ret else { continue };
            let expected = (own / m.a.gcd(&m.d)).to_usize().expect("small entry");
            if k != expected || k as u64 > n {
                bad.push(format!("{m}: shortest {letter:?}-cycle {k}, expected {expected}"));
            }
            let (is_end, nu) = match letter {
                Letter::L => (is_le(m).unwrap_or(false), nu_l(m).ok()),
                Letter::R => (is_re(m).unwrap_or(false), nu_r(m).ok()),
            };
            if let (true, Some(nu)) = (is_end, nu) {
                if nu.to_usize() != Some(k) {
                    bad.push(format!("{m}: ν = {nu}, shortest cycle {k}"));
                }
            }
            let ends: HashSet<&Mat2> = trace
                .iter()
                .take_while(|&&(j, _)| j <= k)
                .map(|(_, s)| s)
                .filter(|s| match letter {
                    Letter::L => is_le(s).unwrap_or(false),
                    Letter::R => is_re(s).unwrap_or(false),
                })
                .collect();
            if ends.len() != 1 {
                bad.push(format!("{m}: {letter:?}-cycle meets {} end states", ends.len()));
            }
        }
    }
    bad
}

/// From every state, reading `L`s reaches exactly one `LE_n` state, first
/// after at most `n` letters, and afterwards meets only `LS_n` states.
pub fn le_funnel(t: &Transducer) -> Vec<String> {
    let n = t.n() as usize;
    let limit = t.trie_size() + 1;
    let mut bad = Vec::new();
    for q in t.states() {
        let mut trace = vec![(0, q.clone())];
        trace.extend(single_letter_trace(t, q, Letter::L, limit));
        let hits: Vec<&(usize, Mat2)> = trace.iter().filter(|(_, s)| is_le(s).unwrap_or(false)).collect();
        let distinct: HashSet<&Mat2> = hits.iter().map(|(_, s)| s).collect();
        if distinct.len() != 1 {
            bad.push(format!("{q}: reaches {} LE states", distinct.len()));
            continue;
        }
        let first = hits[0].0;
        if first > n {
            bad.push(format!("{q}: first LE state after {first} letters"));
        }
        if let Some((k, s)) = trace.iter().find(|(k, s)| *k > first && !is_ls(s).unwrap_or(false)) {
            bad.push(format!("{q}: leaves LS at {s} after {k} letters"));
        }
    }
    bad
}

fn random_letters(rng: &mut impl Rng, len: usize) -> Vec<Letter> {
    (0..len).map(|_| if rng.gen() { Letter::L } else { Letter::R }).collect()
}

fn run_letters(t: &Transducer, start: &Mat2, input: &[Letter]) -> (bool, Mat2, LRWord) {
    let mut w = t.walker(start).expect("start is a state");
    let mut out = LRWord::empty();
    for l in input {
        w.step(*l, &mut out);
    }
    (w.at_boundary(), w.state().clone(), out)
}

/// Random walks `M -V₁Q^mV₂|W-> N` with `m ≥ 4n`: dropping `n` letters from
/// the long run gives a walk `M → N` whose output has the same run count and
/// first letter.
pub fn deflation(t: &Transducer, rng: &mut impl Rng, samples: usize) -> Vec<String> {
    let n = t.n() as usize;
    let mut bad = Vec::new();
    for _ in 0..samples {
        let m = t.states().choose(rng).expect("nonempty").clone();
        let q = if rng.gen() { Letter::L } else { Letter::R };
        let run = rng.gen_range(4 * n..=6 * n);
        let v1_len = rng.gen_range(0..=6);
        let v1 = random_letters(rng, v1_len);
        let v2_len = rng.gen_range(0..=6);
        let mut v2 = random_letters(rng, v2_len);
        let build = |run: usize, v2: &[Letter]| -> Vec<Letter> {
            let mut v = v1.clone();
            v.extend(std::iter::repeat_n(q, run));
            v.extend_from_slice(v2);
            v
        };
        // Extend V₂ until the long input ends on an edge boundary.
        let (mut done, mut end, mut out) = run_letters(t, &m, &build(run, &v2));
        while !done {
            v2.push(if rng.gen() { Letter::L } else { Letter::R });
            (done, end, out) = run_letters(t, &m, &build(run, &v2));
        }
        let (done2, end2, out2) = run_letters(t, &m, &build(run - n, &v2));
        let tag = format!("{m} with {:?}, {q:?}^{run}, {:?}", v1, v2);
        if !done2 || end2 != end {
            bad.push(format!("{tag}: shortened walk ends at {end2} (boundary {done2}), not {end}"));
        } else if out2.sigma() != out.sigma() || out2.first_letter() != out.first_letter() {
            bad.push(format!("{tag}: outputs {out} and {out2} differ in σ or first letter"));
        }
    }
    bad
}

/// Random short inputs `V` with both letters and a closed walk with output
/// `W`: some word of `τ(κ(V))` has a closed walk, from some state, whose
/// output satisfies `σ_c(Ŵ) ≥ σ_c(W)`.
pub fn inflation(t: &Transducer, rng: &mut impl Rng, samples: usize) -> Vec<String> {
    let n = t.n();
    let mut bad = Vec::new();
    let mut cache: HashMap<LRWord, usize> = HashMap::new();
    for _ in 0..samples {
        let sigma = 2 * rng.gen_range(1..=2);
        let first = if rng.gen() { Letter::L } else { Letter::R };
        let mut v = LRWord::empty();
        for i in 0..sigma {
            let l = if i % 2 == 0 { first } else { first.star() };
            v.push(l, rng.gen_range(1u32..=3));
        }
        let m = t.states().choose(rng).expect("nonempty");
        let base = match transduce_cycle(t, m, &v).and_then(|w| w.output.sigma_c()) {
            Ok(s) => s,
            Err(e) => {
                bad.push(format!("{m} on {v}: {e}"));
                continue;
            }
        };
        let best = *cache.entry(v.clone()).or_insert_with(|| {
            let Ok(hats) = v.tau_kappa(n) else { return 0 };
            hats.iter()
                .flat_map(|h| t.states().iter().map(move |s| (s, h)))
                .filter_map(|(s, h)| transduce_cycle(t, s, h).ok()?.output.sigma_c().ok())
                .max()
                .unwrap_or(0)
        });
        if best < base {
            bad.push(format!("{m} on {v}: σ_c {base}, best inflated σ_c {best}"));
        }
    }
    bad
}

/// `σ(W_{L,M,i}) = 2⌊ξ(i·m₁ + u₁, t₁)/2⌋ + 2` for `M = [[t₁,0],[u₁,m₁]] ∈ LE_n`
/// and `ν_L(M) ≤ i < 2ν_L(M)`, with `W` starting in `L` and ending in `R`.
pub fn walk_le_formula(t: &Transducer) -> Vec<String> {
    let mut bad = Vec::new();
    for m in t.states().iter().filter(|s| is_le(s).unwrap_or(false)) {
        let nu = nu_l(m).expect("LE state").to_u64().expect("small");
        let (t1, u1, m1) = (
            m.a.to_u64().expect("small"),
            m.c.to_u64().expect("small"),
            m.d.to_u64().expect("small"),
        );
        for i in nu..2 * nu {
            let walk = match walk_le(t, m, i) {
                Ok(w) => w,
                Err(e) => {
                    bad.push(format!("{m}, i = {i}: {e}"));
                    continue;
                }
            };
            let x = xi(i * m1 + u1, t1).expect("positive arguments") as usize;
            let w = &walk.output;
            if w.sigma() != 2 * (x / 2) + 2
                || w.first_letter() != Some(Letter::L)
                || w.last_letter() != Some(Letter::R)
            {
                bad.push(format!("{m}, i = {i}: W = {w}, ξ = {x}"));
            }
        }
    }
    bad
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transducer::build_transducer;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn small_transducers_pass() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..=8 {
            let t = build_transducer(n).unwrap();
            assert_eq!(edge_invariants(&t), Vec::<String>::new(), "n = {n}");
            assert_eq!(symmetry(&t), Vec::<String>::new(), "n = {n}");
            assert_eq!(ls_characterization(&t), Vec::<String>::new(), "n = {n}");
            assert_eq!(le_funnel(&t), Vec::<String>::new(), "n = {n}");
            assert_eq!(deflation(&t, &mut rng, 30), Vec::<String>::new(), "n = {n}");
            assert_eq!(walk_le_formula(&t), Vec::<String>::new(), "n = {n}");
        }
    }

    #[test]
    fn inflation_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 1..=3 {
            let t = build_transducer(n).unwrap();
            assert_eq!(inflation(&t, &mut rng, 10), Vec::<String>::new(), "n = {n}");
        }
    }
}
