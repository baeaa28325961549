//! Online transduction at run granularity.
//!
//! The state is a row-balanced matrix `X`. Absorbing a letter multiplies on
//! the right; as soon as `X` leaves `RB_n` the largest possible left factors
//! are peeled off and emitted, which lands back in `DB_n`. A whole run is
//! handled with a bounded number of big-integer operations: escapes are
//! located by a ceiling division, and once `b = 0` (for `L`) or `c = 0`
//! (for `R`) the rest of the run has a closed form.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::matrices::{peel_left, Mat2};
use crate::words::{LRWord, Letter};

/// A closed walk `start -V^γ|W-> start` for a repetend `V`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedWalk {
    pub start: Mat2,
    pub input: LRWord,
    pub output: LRWord,
    pub gamma: usize,
}

/// Peels maximal left factors until none applies, appending them to `out`.
/// The result is row balanced.
pub fn peel_to_rb(x: &mut Mat2, out: &mut LRWord) {
    while let Some((l, k)) = peel_left(x) {
        x.mul_letter_left(l, &-&k);
        out.push(l, k.magnitude().clone());
    }
}

#[derive(Clone, Debug)]
pub struct Engine {
    x: Mat2,
}

impl Engine {
    /// Starts from a row-balanced matrix with positive determinant.
    pub fn new(x: Mat2) -> Result<Self> {
        if !x.is_nonneg() || !x.det().is_positive() || !x.row_balanced_shape() {
            return Err(Error::not_in(&x, "RB_n"));
        }
        Ok(Engine { x })
    }

    pub fn state(&self) -> &Mat2 {
        &self.x
    }

    /// True exactly at edge boundaries of the transducer: a state that has
    /// absorbed a letter without escaping is never column balanced.
    pub fn at_boundary(&self) -> bool {
        self.x.column_balanced_shape()
    }

    /// Absorbs `letter^k`, appending emitted letters to `out`.
    pub fn feed(&mut self, letter: Letter, k: &BigUint, out: &mut LRWord) {
        let mut k = BigInt::from(k.clone());
        while k.is_positive() {
            let x = &mut self.x;
            match letter {
                Letter::L if x.b.is_zero() => {
                    let t = &x.c + &k * &x.d;
                    let (q, r) = t.div_mod_floor(&x.a);
                    out.push(Letter::L, q.magnitude().clone());
                    x.c = r;
                    return;
                }
                Letter::R if x.c.is_zero() => {
                    let t = &x.b + &k * &x.a;
                    let (q, r) = t.div_mod_floor(&x.d);
                    out.push(Letter::R, q.magnitude().clone());
                    x.b = r;
                    return;
                }
                _ => {}
            }
            let escape = match letter {
                Letter::L => (&x.a - &x.c).div_ceil(&(&x.d - &x.b)),
                Letter::R => (&x.d - &x.b).div_ceil(&(&x.a - &x.c)),
            };
            if k < escape {
                x.mul_letter_right(letter, &k);
                return;
            }
            x.mul_letter_right(letter, &escape);
            k -= &escape;
            peel_to_rb(x, out);
        }
    }

    pub fn feed_word(&mut self, w: &LRWord, out: &mut LRWord) {
        for (l, e) in w.runs() {
            self.feed(*l, e, out);
        }
    }
}

/// Feeds `repetend` repeatedly from `start` until the state at a repetend
/// boundary repeats.
pub fn closed_walk_online(start: &Mat2, repetend: &LRWord) -> Result<ClosedWalk> {
    if repetend.is_empty() {
        return Err(Error::EmptyWord);
    }
    if !repetend.has_both_letters() {
        return Err(Error::SingleLetterWord(repetend.to_string()));
    }
    let mut engine = Engine::new(start.clone())?;
    let mut seen: HashMap<Mat2, usize> = HashMap::new();
    let mut outputs: Vec<LRWord> = Vec::new();
    loop {
        if let Some(&i) = seen.get(engine.state()) {
            let gamma = outputs.len() - i;
            let mut output = LRWord::empty();
            for w in &outputs[i..] {
                output.append(w);
            }
            return Ok(ClosedWalk {
                start: engine.state().clone(),
                input: repetend.pow(gamma),
                output,
                gamma,
            });
        }
        seen.insert(engine.state().clone(), outputs.len());
        let mut out = LRWord::empty();
        engine.feed_word(repetend, &mut out);
        outputs.push(out);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> LRWord {
        s.parse().unwrap()
    }

    fn brute(x: &Mat2, input: &LRWord) -> (Mat2, LRWord) {
        let mut x = x.clone();
        let mut out = LRWord::empty();
        for l in input.letters() {
            x.mul_letter_right(l, &BigInt::from(1));
            if !x.row_balanced_shape() {
                peel_to_rb(&mut x, &mut out);
            }
        }
        (x, out)
    }

    #[test]
    fn t2_walk() {
        let walk = closed_walk_online(&Mat2::a_n(2), &w("R^2L^2")).unwrap();
        assert_eq!(walk.output, w("R^4L"));
        assert_eq!(walk.gamma, 1);
        assert_eq!(walk.start, Mat2::a_n(2));
        let walk = closed_walk_online(&Mat2::a_n_star(2), &w("L^2R^2")).unwrap();
        assert_eq!(walk.output, w("L^4R"));
    }

    #[test]
    fn run_level_matches_letter_level() {
        let inputs = ["L^5", "R^7L^3", "LRLLRRR", "L^13R^2L^9R", "R^30L^1R^17"];
        for n in 1..=12u64 {
            for s in crate::matrices::enumerate_db(n) {
                for inp in inputs {
                    let input = w(inp);
                    let mut e = Engine::new(s.clone()).unwrap();
                    let mut out = LRWord::empty();
                    e.feed_word(&input, &mut out);
                    let (x, o) = brute(&s, &input);
                    assert_eq!((e.state().clone(), out), (x, o), "n={n} s={s} in={inp}");
                }
            }
        }
    }

    #[test]
    fn closed_walk_identity() {
        for n in 2..=9u64 {
            for s in crate::matrices::enumerate_db(n) {
                let v = w("R^3L^2RL^4");
                let walk = closed_walk_online(&s, &v).unwrap();
                let lhs = &walk.start * &walk.input.mu();
                let rhs = &walk.output.mu() * &walk.start;
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(Engine::new(Mat2::new(1, 3, 0, 3)).is_err());
        assert!(closed_walk_online(&Mat2::a_n(2), &w("L^3")).is_err());
        assert!(closed_walk_online(&Mat2::a_n(2), &LRWord::empty()).is_err());
    }
}
