//! End-to-end period computation for `h_M(x)`.
//!
//! `x = C·y` with `C` the preperiod convergent matrix and `y > 1` purely
//! periodic, so `h_M(x) = h_{MC}(y)`. The reduction absorbs letters of the
//! LR expansion of `y` until `MC·mu(prefix) = U·X` with `U` unimodular and
//! `X ∈ DB_n`. Unimodular maps do not change the tail of a continued
//! fraction, so the period of `h_M(x)` is read off the closed walk of `T_n`
//! from `X` on the remaining input.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::engine::{closed_walk_online, peel_to_rb};
use crate::error::{Error, Result};
use crate::matrices::Mat2;
use crate::surds::{apply_mobius, cf_from_surd, surd_from_cf, PeriodicCF};
use crate::transducer::{build_transducer, transduce_cycle, Transducer};
use crate::words::{LRWord, Letter};

/// Outcome of [`reduce_to_db`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    /// Doubly balanced start state.
    pub state: Mat2,
    /// Determinant of `state`.
    pub n: u64,
    /// The LR repetend of the remaining input, aligned to the current
    /// position.
    pub tail: LRWord,
    /// Letters peeled on the way into `RB_n`.
    pub emitted: LRWord,
    /// Number of input letters absorbed.
    pub absorbed: BigUint,
}

/// Input position inside a cyclic LR word.
struct Cursor<'a> {
    word: &'a LRWord,
    run: usize,
    used: BigUint,
    absorbed: BigUint,
    cap: BigUint,
}

impl Cursor<'_> {
    fn remaining(&self) -> BigUint {
        &self.word.runs()[self.run].1 - &self.used
    }

    fn letter(&self) -> Letter {
        self.word.runs()[self.run].0
    }

    fn advance(&mut self, k: &BigUint) -> Result<()> {
        self.used += k;
        self.absorbed += k;
        if self.used == self.word.runs()[self.run].1 {
            self.used = BigUint::zero();
            self.run = (self.run + 1) % self.word.sigma();
        }
        if self.absorbed > self.cap {
            return Err(Error::IterationCap(self.cap.to_u64().unwrap_or(u64::MAX)));
        }
        Ok(())
    }
}

/// Default bound on absorbed letters: `1000·n·(|LR repetend| + |preperiod| + 1)`.
pub fn default_cap(n: u64, x: &PeriodicCF) -> BigUint {
    BigUint::from(1000u32) * n * (x.repetend_lr().len() + x.preperiod().len() + 1u32)
}

/// Brings `h_m(x)` to a doubly balanced state and an aligned periodic tail.
pub fn reduce_to_db(m: &Mat2, x: &PeriodicCF) -> Result<Reduction> {
    reduce_to_db_with_cap(m, x, None)
}

pub fn reduce_to_db_with_cap(m: &Mat2, x: &PeriodicCF, cap: Option<BigUint>) -> Result<Reduction> {
    if m.det().is_zero() {
        return Err(Error::SingularMatrix(m.to_string()));
    }
    let (m, _) = m.primitive_part();
    let mut mm = &m * &x.preperiod_matrix();
    let mut input = x.repetend_lr();
    if mm.det().is_negative() {
        // h_M(y) = h_{MJ}(1/y), and 1/y has the letter-swapped expansion.
        mm = &mm * &Mat2::swap();
        input = input.star();
    }
    let n = mm
        .det()
        .to_u64()
        .ok_or_else(|| Error::Overflow(mm.det().to_string()))?;
    let cap = cap.unwrap_or_else(|| default_cap(n, x));
    let mut cur = Cursor {
        word: &input,
        run: 0,
        used: BigUint::zero(),
        absorbed: BigUint::zero(),
        cap,
    };

    // Make every entry nonnegative using left unimodular moves.
    loop {
        if mm.is_nonpos() {
            mm = mm.neg();
        }
        if mm.is_nonneg() {
            break;
        }
        if !mm.c.is_zero() && !mm.d.is_zero() && mm.c.signum() == mm.d.signum() {
            let q = mm.a.div_floor(&mm.c);
            if q == mm.b.div_floor(&mm.d) && !q.is_zero() {
                mm.a -= &q * &mm.c;
                mm.b -= &q * &mm.d;
                continue;
            }
        }
        let k = cur.remaining();
        mm.mul_letter_right(cur.letter(), &BigInt::from(k.clone()));
        cur.advance(&k)?;
    }

    let mut emitted = LRWord::empty();
    peel_to_rb(&mut mm, &mut emitted);
    while !mm.column_balanced_shape() {
        let letter = cur.letter();
        let escape = match letter {
            Letter::L => (&mm.a - &mm.c).div_ceil(&(&mm.d - &mm.b)),
            Letter::R => (&mm.d - &mm.b).div_ceil(&(&mm.a - &mm.c)),
        };
        let escape = escape.to_biguint().expect("escape count is positive");
        let k = cur.remaining();
        if k < escape {
            mm.mul_letter_right(letter, &BigInt::from(k.clone()));
            cur.advance(&k)?;
        } else {
            mm.mul_letter_right(letter, &BigInt::from(escape.clone()));
            cur.advance(&escape)?;
            peel_to_rb(&mut mm, &mut emitted);
        }
    }
    debug_assert!(crate::matrices::in_db(&mm, n));
    let tail = input.rotate_left(&cur.absorbed);
    Ok(Reduction {
        state: mm,
        n,
        tail,
        emitted,
        absorbed: cur.absorbed,
    })
}

/// Period of the number whose LR expansion ends in the infinite power of
/// `cycle`.
///
/// After reduction to a primitive word whose first and last letters differ,
/// the period is `σ/2` when the word has the form `V·V*` and `σ` otherwise.
pub fn lr_cycle_to_period(cycle: &LRWord) -> Result<usize> {
    if cycle.is_empty() {
        return Err(Error::EmptyWord);
    }
    if !cycle.has_both_letters() {
        return Err(Error::SingleLetterWord(cycle.to_string()));
    }
    let (root, _) = cycle.primitive_root()?;
    let w = if root.first_letter() == root.last_letter() {
        root.rotate_runs(1)
    } else {
        root
    };
    let s = w.sigma();
    let runs = w.runs();
    let half = s / 2;
    let self_dual = s % 2 == 0
        && (0..half).all(|i| runs[i + half].0 == runs[i].0.star() && runs[i + half].1 == runs[i].1);
    Ok(if self_dual { half } else { s })
}

/// `per(h_m(x))` through `T_n`, building the transducer.
pub fn image_period(m: &Mat2, x: &PeriodicCF) -> Result<usize> {
    let red = reduce_to_db(m, x)?;
    let t = build_transducer(red.n)?;
    period_from_reduction(&t, &red)
}

/// `per(h_m(x))` through a prebuilt `T_n`.
pub fn image_period_using(t: &Transducer, m: &Mat2, x: &PeriodicCF) -> Result<usize> {
    let red = reduce_to_db(m, x)?;
    if red.n != t.n() {
        return Err(Error::DegreeMismatch {
            expected: t.n(),
            got: red.n.to_string(),
        });
    }
    period_from_reduction(t, &red)
}

fn period_from_reduction(t: &Transducer, red: &Reduction) -> Result<usize> {
    let walk = transduce_cycle(t, &red.state, &red.tail)?;
    lr_cycle_to_period(&walk.output)
}

/// `per(h_m(x))` through the run-level online engine.
pub fn image_period_online(m: &Mat2, x: &PeriodicCF) -> Result<usize> {
    let red = reduce_to_db(m, x)?;
    let walk = closed_walk_online(&red.state, &red.tail)?;
    lr_cycle_to_period(&walk.output)
}

/// `h_m(x)` through the surd oracle.
pub fn oracle_image(m: &Mat2, x: &PeriodicCF) -> Result<PeriodicCF> {
    Ok(cf_from_surd(&apply_mobius(m, &surd_from_cf(x))?))
}

/// `per(h_m(x))` through the surd oracle.
pub fn oracle_period(m: &Mat2, x: &PeriodicCF) -> Result<usize> {
    Ok(oracle_image(m, x)?.per())
}

/// `|det m| / content(m)²`, the index of the transducer that handles `m`.
pub fn degree(m: &Mat2) -> Result<u64> {
    let (p, _) = m.primitive_part();
    let d = p.det().abs();
    if d.is_zero() {
        return Err(Error::SingularMatrix(m.to_string()));
    }
    d.to_u64().ok_or_else(|| Error::Overflow(d.to_string()))
}
