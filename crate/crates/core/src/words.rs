//! Words over `{L, R}`, stored run-length encoded.
//!
//! `L = [[1,0],[1,1]]` and `R = [[1,1],[0,1]]` generate the monoid of
//! nonnegative unimodular matrices freely, so `mu` is an isomorphism between
//! words and `D_1`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrices::{peel_left, Mat2};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    L,
    R,
}

impl Letter {
    pub fn star(self) -> Letter {
        match self {
            Letter::L => Letter::R,
            Letter::R => Letter::L,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::L => 'L',
            Letter::R => 'R',
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// A finite word over `{L, R}` in canonical run-length form: exponents are
/// positive and adjacent runs carry different letters.
///
/// Ordering is lexicographic on the letter sequence with `L < R`; a proper
/// prefix sorts first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LRWord {
    runs: Vec<(Letter, BigUint)>,
}

impl LRWord {
    pub fn empty() -> Self {
        LRWord::default()
    }

    pub fn letter(letter: Letter) -> Self {
        LRWord::run(letter, 1u32)
    }

    pub fn run(letter: Letter, exp: impl Into<BigUint>) -> Self {
        let mut w = LRWord::empty();
        w.push(letter, exp);
        w
    }

    /// Builds a word from arbitrary runs, merging neighbours and dropping
    /// zero exponents.
    pub fn from_runs<I, E>(runs: I) -> Self
    where
        I: IntoIterator<Item = (Letter, E)>,
        E: Into<BigUint>,
    {
        let mut w = LRWord::empty();
        for (l, e) in runs {
            w.push(l, e);
        }
        w
    }

    pub fn runs(&self) -> &[(Letter, BigUint)] {
        &self.runs
    }

    pub fn push(&mut self, letter: Letter, exp: impl Into<BigUint>) {
        let exp = exp.into();
        if exp.is_zero() {
            return;
        }
        match self.runs.last_mut() {
            Some((l, e)) if *l == letter => *e += exp,
            _ => self.runs.push((letter, exp)),
        }
    }

    pub fn append(&mut self, other: &LRWord) {
        for (l, e) in &other.runs {
            self.push(*l, e.clone());
        }
    }

    pub fn concat(&self, other: &LRWord) -> LRWord {
        let mut w = self.clone();
        w.append(other);
        w
    }

    /// `self` repeated `k` times.
    pub fn pow(&self, k: usize) -> LRWord {
        let mut w = LRWord::empty();
        for _ in 0..k {
            w.append(self);
        }
        w
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    /// Number of letters.
    pub fn len(&self) -> BigUint {
        self.runs.iter().map(|(_, e)| e).sum()
    }

    pub fn first_letter(&self) -> Option<Letter> {
        self.runs.first().map(|(l, _)| *l)
    }

    pub fn last_letter(&self) -> Option<Letter> {
        self.runs.last().map(|(l, _)| *l)
    }

    pub fn has_both_letters(&self) -> bool {
        self.runs.len() >= 2
    }

    /// Longest run exponent, zero for the empty word.
    pub fn max_run(&self) -> BigUint {
        self.runs.iter().map(|(_, e)| e.clone()).max().unwrap_or_default()
    }

    /// Letters in order. Only sensible for short words.
    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        self.runs.iter().flat_map(|(l, e)| {
            let k = e.to_usize().expect("run too long to expand");
            std::iter::repeat_n(*l, k)
        })
    }

    pub fn mu(&self) -> Mat2 {
        let mut m = Mat2::identity();
        for (l, e) in &self.runs {
            m.mul_letter_right(*l, &BigInt::from(e.clone()));
        }
        m
    }

    /// Inverse of `mu` on `D_1`, by greedy left peeling.
    pub fn word_of_matrix(m: &Mat2) -> Result<LRWord> {
        if !m.is_nonneg() || !m.det().is_one() {
            return Err(Error::NotUnimodular(m.to_string()));
        }
        let mut x = m.clone();
        let mut w = LRWord::empty();
        while x != Mat2::identity() {
            let (l, k) = peel_left(&x).ok_or_else(|| Error::NotUnimodular(m.to_string()))?;
            x.mul_letter_left(l, &-&k);
            w.push(l, k.to_biguint().expect("peel count is positive"));
        }
        Ok(w)
    }

    /// Number of runs.
    pub fn sigma(&self) -> usize {
        self.runs.len()
    }

    /// Least run count over all conjugates, `2⌊σ/2⌋`.
    pub fn sigma_c(&self) -> Result<usize> {
        if self.is_empty() {
            return Err(Error::EmptyWord);
        }
        Ok(2 * (self.sigma() / 2))
    }

    /// Letters swapped.
    pub fn star(&self) -> LRWord {
        LRWord {
            runs: self.runs.iter().map(|(l, e)| (l.star(), e.clone())).collect(),
        }
    }

    /// Reversed and letters swapped, so that `mu(V^T) = mu(V)^T`.
    pub fn transpose_word(&self) -> LRWord {
        LRWord {
            runs: self.runs.iter().rev().map(|(l, e)| (l.star(), e.clone())).collect(),
        }
    }

    /// Splits after `k` letters. `k` must not exceed the length.
    pub fn split_at(&self, k: &BigUint) -> (LRWord, LRWord) {
        let mut left = LRWord::empty();
        let mut right = LRWord::empty();
        let mut rest = k.clone();
        for (l, e) in &self.runs {
            if rest.is_zero() {
                right.push(*l, e.clone());
            } else if *e <= rest {
                rest -= e;
                left.push(*l, e.clone());
            } else {
                left.push(*l, rest.clone());
                right.push(*l, e - &rest);
                rest = BigUint::zero();
            }
        }
        (left, right)
    }

    /// Cyclic rotation moving the first `k` letters to the end.
    pub fn rotate_left(&self, k: &BigUint) -> LRWord {
        if self.is_empty() {
            return LRWord::empty();
        }
        let k = k % self.len();
        let (a, b) = self.split_at(&k);
        b.concat(&a)
    }

    /// Rotation starting at run `i`.
    pub fn rotate_runs(&self, i: usize) -> LRWord {
        let mut w = LRWord::empty();
        for (l, e) in self.runs[i..].iter().chain(&self.runs[..i]) {
            w.push(*l, e.clone());
        }
        w
    }

    /// All cyclic rotations, deduplicated and sorted.
    pub fn conjugates(&self) -> Result<Vec<LRWord>> {
        if self.is_empty() {
            return Err(Error::EmptyWord);
        }
        let n = self
            .len()
            .to_u64()
            .ok_or_else(|| Error::Overflow(self.len().to_string()))?;
        let mut out: Vec<LRWord> = (0..n).map(|k| self.rotate_left(&BigUint::from(k))).collect();
        out.sort();
        out.dedup();
        Ok(out)
    }

    /// The primitive word `U` and the largest `k` with `self = U^k`.
    pub fn primitive_root(&self) -> Result<(LRWord, BigUint)> {
        let s = self.sigma();
        match s {
            0 => return Err(Error::EmptyWord),
            1 => {
                let (l, e) = &self.runs[0];
                return Ok((LRWord::letter(*l), e.clone()));
            }
            _ => {}
        }
        let first = &self.runs[0];
        let last = &self.runs[s - 1];
        if first.0 != last.0 {
            let p = run_period(&self.runs);
            let root = LRWord {
                runs: self.runs[..p].to_vec(),
            };
            return Ok((root, BigUint::from(s / p)));
        }
        // Z^a X Z^b = (Z^a Y Z^b)^k exactly when the cyclic run list
        // X, Z^(a+b) is periodic.
        let z = first.0;
        let mut cyc: Vec<(Letter, BigUint)> = self.runs[1..s - 1].to_vec();
        cyc.push((z, &first.1 + &last.1));
        let p = run_period(&cyc);
        let mut root = LRWord::run(z, first.1.clone());
        for (l, e) in &cyc[..p - 1] {
            root.push(*l, e.clone());
        }
        root.push(z, last.1.clone());
        Ok((root, BigUint::from(cyc.len() / p)))
    }

    pub fn is_primitive(&self) -> Result<bool> {
        Ok(self.primitive_root()?.1.is_one())
    }

    /// Replaces every exponent `i` by the representative of `i mod n` in
    /// `[4n, 5n - 1]`.
    pub fn kappa(&self, n: u64) -> Result<LRWord> {
        if self.is_empty() {
            return Err(Error::EmptyWord);
        }
        if n == 0 {
            return Err(Error::InvalidN { min: 1, got: 0 });
        }
        let nb = BigUint::from(n);
        let base = BigUint::from(4u32) * &nb;
        Ok(LRWord {
            runs: self
                .runs
                .iter()
                .map(|(l, e)| (*l, &base + e.mod_floor(&nb)))
                .collect(),
        })
    }

    /// `τ(κ(W'))`, where `W'` is the lexicographically least conjugate with
    /// `σ(W') = σ_c(W)`.
    pub fn tau_kappa(&self, n: u64) -> Result<Vec<LRWord>> {
        if self.is_empty() {
            return Err(Error::EmptyWord);
        }
        if !self.has_both_letters() {
            return Err(Error::SingleLetterWord(self.to_string()));
        }
        let target = self.sigma_c()?;
        let w = (0..self.sigma())
            .map(|i| self.rotate_runs(i))
            .filter(|w| w.sigma() == target)
            .min()
            .expect("some run-start rotation attains sigma_c");
        w.kappa(n)?.conjugates()
    }
}

/// Least `p` dividing `runs.len()` with `runs[i] = runs[i + p]`.
fn run_period(runs: &[(Letter, BigUint)]) -> usize {
    let n = runs.len();
    (1..=n)
        .filter(|p| n.is_multiple_of(*p))
        .find(|&p| (p..n).all(|i| runs[i] == runs[i - p]))
        .unwrap_or(n)
}

impl Ord for LRWord {
    fn cmp(&self, other: &Self) -> Ordering {
        let (mut i, mut j) = (0, 0);
        let mut used_i = BigUint::zero();
        let mut used_j = BigUint::zero();
        loop {
            match (self.runs.get(i), other.runs.get(j)) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some((la, ea)), Some((lb, eb))) => {
                    if la != lb {
                        return la.cmp(lb);
                    }
                    let ra = ea - &used_i;
                    let rb = eb - &used_j;
                    match ra.cmp(&rb) {
                        Ordering::Equal => {
                            i += 1;
                            j += 1;
                            used_i = BigUint::zero();
                            used_j = BigUint::zero();
                        }
                        Ordering::Less => {
                            i += 1;
                            used_i = BigUint::zero();
                            used_j += ra;
                        }
                        Ordering::Greater => {
                            j += 1;
                            used_j = BigUint::zero();
                            used_i += rb;
                        }
                    }
                }
            }
        }
    }
}

impl PartialOrd for LRWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Exponent form without separators, e.g. `L^2RLR^3`; `ε` for the empty word.
impl fmt::Display for LRWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "ε");
        }
        for (l, e) in &self.runs {
            if e.is_one() {
                write!(f, "{l}")?;
            } else {
                write!(f, "{l}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Accepts `L^2 R L R^3`, `LLRLRRR`, mixtures of both, and `ε` or the empty
/// string for the empty word.
impl FromStr for LRWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.is_empty() || t == "ε" {
            return Ok(LRWord::empty());
        }
        let mut w = LRWord::empty();
        let mut chars = t.chars().peekable();
        while let Some(ch) = chars.next() {
            let letter = match ch {
                'L' => Letter::L,
                'R' => Letter::R,
                c if c.is_whitespace() => continue,
                c => return Err(Error::parse("word", s, format!("unexpected character {c:?}"))),
            };
            let mut exp = BigUint::one();
            if chars.peek() == Some(&'^') {
                chars.next();
                let mut digits = String::new();
                while let Some(d) = chars.peek().filter(|c| c.is_ascii_digit()) {
                    digits.push(*d);
                    chars.next();
                }
                exp = digits
                    .parse()
                    .map_err(|_| Error::parse("word", s, "missing exponent after '^'"))?;
                if exp.is_zero() {
                    return Err(Error::parse("word", s, "exponents must be positive"));
                }
            }
            w.push(letter, exp);
        }
        Ok(w)
    }
}

impl Serialize for LRWord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for LRWord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> LRWord {
        s.parse().unwrap()
    }

    fn set(words: &[&str]) -> Vec<LRWord> {
        let mut v: Vec<LRWord> = words.iter().map(|s| w(s)).collect();
        v.sort();
        v
    }

    #[test]
    fn mu_examples() {
        assert_eq!(w("L").mu(), Mat2::new(1, 0, 1, 1));
        assert_eq!(LRWord::empty().mu(), Mat2::identity());
        assert_eq!(w("L^2 R L R^3").mu(), Mat2::new(2, 7, 5, 18));
    }

    #[test]
    fn word_of_matrix_examples() {
        assert_eq!(LRWord::word_of_matrix(&Mat2::new(1, 0, 1, 1)).unwrap(), w("L"));
        assert_eq!(LRWord::word_of_matrix(&Mat2::identity()).unwrap(), LRWord::empty());
        assert_eq!(LRWord::word_of_matrix(&Mat2::new(2, 7, 5, 18)).unwrap(), w("LLRLRRR"));
        assert!(LRWord::word_of_matrix(&Mat2::new(2, 0, 0, 1)).is_err());
        assert!(LRWord::word_of_matrix(&Mat2::new(1, -1, 0, 1)).is_err());
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(w("LLRRRRL").sigma(), 3);
        assert_eq!(LRWord::empty().sigma(), 0);
        assert_eq!(w("L^2RLR^3").sigma(), 4);
        assert_eq!(w("LLRRRRL").sigma_c().unwrap(), 2);
        assert_eq!(w("LR").sigma_c().unwrap(), 2);
        assert_eq!(w("R^4L").sigma_c().unwrap(), 2);
        assert_eq!(w("L^5").sigma_c().unwrap(), 0);
        assert_eq!(LRWord::empty().sigma_c(), Err(Error::EmptyWord));
    }

    #[test]
    fn star_and_transpose_examples() {
        assert_eq!(w("R^2L^2").star(), w("L^2R^2"));
        assert_eq!(LRWord::empty().star(), LRWord::empty());
        assert_eq!(w("L^2RLR^3").star(), w("R^2LRL^3"));
        assert_eq!(w("L").transpose_word(), w("R"));
        assert_eq!(w("LR").transpose_word(), w("LR"));
        assert_eq!(w("L^2R^3").transpose_word(), w("L^3R^2"));
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(w("LR").conjugates().unwrap(), set(&["LR", "RL"]));
        assert_eq!(
            w("LLRR").conjugates().unwrap(),
            set(&["LLRR", "LRRL", "RRLL", "RLLR"])
        );
        assert_eq!(w("L^3").conjugates().unwrap(), set(&["L^3"]));
        assert!(LRWord::empty().conjugates().is_err());
    }

    #[test]
    fn primitive_root_examples() {
        let one = BigUint::one();
        let two = BigUint::from(2u32);
        assert_eq!(w("LRLR").primitive_root().unwrap(), (w("LR"), two.clone()));
        assert_eq!(w("LLR").primitive_root().unwrap(), (w("LLR"), one.clone()));
        assert_eq!(w("R^3L^3R^3L^3").primitive_root().unwrap(), (w("R^3L^3"), two.clone()));
        assert_eq!(w("RLRRLRRLR").primitive_root().unwrap(), (w("RLR"), BigUint::from(3u32)));
        assert_eq!(w("RLRLR").primitive_root().unwrap(), (w("RLRLR"), one));
        assert_eq!(w("L^6").primitive_root().unwrap(), (w("L"), BigUint::from(6u32)));
    }

    #[test]
    fn kappa_examples() {
        assert_eq!(w("LR^10L^55").kappa(10).unwrap(), w("L^41R^40L^45"));
        assert_eq!(w("L^28").kappa(7).unwrap(), w("L^28"));
        assert_eq!(w("R").kappa(2).unwrap(), w("R^9"));
    }

    #[test]
    fn tau_kappa_examples() {
        let a = w("LR").tau_kappa(1).unwrap();
        assert_eq!(a, w("L^4R^4").conjugates().unwrap());
        assert_eq!(w("RL").tau_kappa(1).unwrap(), a);
        assert_eq!(w("R^3L^3").tau_kappa(2).unwrap(), w("L^9R^9").conjugates().unwrap());
        assert!(w("L^3").tau_kappa(2).is_err());
        assert!(LRWord::empty().tau_kappa(2).is_err());
    }

    #[test]
    fn lexicographic_order() {
        assert!(w("L") < w("R"));
        assert!(w("L") < w("LL"));
        assert!(w("LLR") < w("LR"));
        assert!(w("RL") > w("LR^9"));
        assert!(LRWord::empty() < w("L"));
        assert_eq!(w("L^2R").cmp(&w("LLR")), Ordering::Equal);
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(w("L^2 R L R^3"), w("LLRLRRR"));
        assert_eq!(w("LLRLRRR").to_string(), "L^2RLR^3");
        assert_eq!(LRWord::empty().to_string(), "ε");
        assert_eq!(w("ε"), LRWord::empty());
        assert!("LX".parse::<LRWord>().is_err());
        assert!("L^".parse::<LRWord>().is_err());
        assert!("L^0".parse::<LRWord>().is_err());
        let json = serde_json::to_string(&w("RL^4")).unwrap();
        assert_eq!(json, "\"RL^4\"");
        assert_eq!(serde_json::from_str::<LRWord>(&json).unwrap(), w("RL^4"));
    }

    #[test]
    fn rotation_and_split() {
        let v = w("L^2R^3L");
        assert_eq!(v.rotate_left(&BigUint::from(1u32)), w("LR^3L^2"));
        assert_eq!(v.rotate_left(&BigUint::from(3u32)), w("R^2L^3R"));
        assert_eq!(v.rotate_left(&BigUint::from(6u32)), v);
        let (a, b) = v.split_at(&BigUint::from(4u32));
        assert_eq!((a, b), (w("L^2R^2"), w("RL")));
    }
}
