//! Exact quadratic irrationals `(P + √D)/Q` and their periodic continued
//! fractions. This module is the oracle the transducer pipeline is checked
//! against, so it uses no transducer code and no floating point.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrices::Mat2;
use crate::words::{LRWord, Letter};

/// The real number `(p + √d)/q` with `d > 0` not a square and `q ≠ 0`.
///
/// Construction keeps `q | d − p²`, the form in which the complete-quotient
/// recurrence stays integral. Representations are not unique, so equality
/// compares values.
#[derive(Clone, Debug)]
pub struct QuadraticSurd {
    p: BigInt,
    q: BigInt,
    d: BigInt,
}

impl QuadraticSurd {
    pub fn new(p: impl Into<BigInt>, q: impl Into<BigInt>, d: impl Into<BigInt>) -> Result<Self> {
        let (mut p, mut q, mut d) = (p.into(), q.into(), d.into());
        if q.is_zero() {
            return Err(Error::InvalidSurd("denominator is zero".into()));
        }
        if !d.is_positive() {
            return Err(Error::InvalidSurd(format!("radicand {d} is not positive")));
        }
        let r = d.sqrt();
        if &r * &r == d {
            return Err(Error::InvalidSurd(format!("radicand {d} is a perfect square")));
        }
        if !(&d - &p * &p).is_multiple_of(&q) {
            let s = q.abs();
            p *= &s;
            d *= &s * &s;
            q *= &s;
        }
        let g = p.gcd(&q);
        if g > BigInt::one() && d.is_multiple_of(&(&g * &g)) {
            let (p2, q2, d2) = (&p / &g, &q / &g, &d / (&g * &g));
            if (&d2 - &p2 * &p2).is_multiple_of(&q2) {
                (p, q, d) = (p2, q2, d2);
            }
        }
        Ok(QuadraticSurd { p, q, d })
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }

    /// Exact `⌊(p + √d)/q⌋`.
    pub fn floor(&self) -> BigInt {
        let r: BigInt = Roots::sqrt(&self.d);
        if self.q.is_positive() {
            (&self.p + r).div_floor(&self.q)
        } else {
            (-&self.p - r - 1i32).div_floor(&-&self.q)
        }
    }

    /// The Galois conjugate `(p − √d)/q`.
    pub fn conjugate(&self) -> QuadraticSurd {
        QuadraticSurd::new(-&self.p, -&self.q, self.d.clone()).expect("conjugate of a valid surd")
    }

    /// Floating-point value. Large entries are scaled by a common power of
    /// two first so that the conversion does not overflow.
    pub fn to_f64(&self) -> f64 {
        let bits = self.p.bits().max(self.q.bits()).max(self.d.bits() / 2);
        let shift = bits.saturating_sub(900);
        let p = (&self.p >> shift).to_f64().unwrap_or(f64::NAN);
        let q = (&self.q >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (&self.d >> (2 * shift)).to_f64().unwrap_or(f64::NAN);
        (p + d.sqrt()) / q
    }

    /// `1/x - a` for `a = ⌊x⌋`, the next complete quotient.
    fn step(&self, a: &BigInt) -> QuadraticSurd {
        let p = a * &self.q - &self.p;
        let q = (&self.d - &p * &p) / &self.q;
        QuadraticSurd {
            p,
            q,
            d: self.d.clone(),
        }
    }
}

impl PartialEq for QuadraticSurd {
    fn eq(&self, o: &Self) -> bool {
        &self.p * &o.q == &o.p * &self.q
            && self.q.signum() == o.q.signum()
            && &self.d * &o.q * &o.q == &o.d * &self.q * &self.q
    }
}

impl Eq for QuadraticSurd {}

/// Text form `P,Q,D`.
impl fmt::Display for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.p, self.q, self.d)
    }
}

impl FromStr for QuadraticSurd {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(Error::parse("surd", s, "expected P,Q,D"));
        }
        let nums: Vec<BigInt> = parts
            .iter()
            .map(|t| t.parse::<BigInt>().map_err(|e| Error::parse("surd", s, e.to_string())))
            .collect::<Result<_>>()?;
        QuadraticSurd::new(nums[0].clone(), nums[1].clone(), nums[2].clone())
    }
}

/// An eventually periodic continued fraction `[p0, …, pk; r0, …, rm]`.
///
/// The repetend is kept primitive and the preperiod as short as possible,
/// so two equal numbers have equal `PeriodicCF` values.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PeriodicCF {
    preperiod: Vec<BigInt>,
    repetend: Vec<BigInt>,
}

impl PeriodicCF {
    pub fn new(preperiod: Vec<BigInt>, repetend: Vec<BigInt>) -> Result<Self> {
        if repetend.is_empty() {
            return Err(Error::InvalidCf("repetend is empty".into()));
        }
        if let Some(q) = repetend.iter().find(|q| !q.is_positive()) {
            return Err(Error::InvalidCf(format!("repetend term {q} is not positive")));
        }
        if let Some(q) = preperiod.iter().skip(1).find(|q| !q.is_positive()) {
            return Err(Error::InvalidCf(format!("preperiod term {q} is not positive")));
        }
        let mut cf = PeriodicCF {
            preperiod,
            repetend,
        };
        cf.canonicalize();
        Ok(cf)
    }

    /// Convenience constructor from machine integers.
    pub fn from_i64s(preperiod: &[i64], repetend: &[i64]) -> Result<Self> {
        PeriodicCF::new(
            preperiod.iter().map(|&x| BigInt::from(x)).collect(),
            repetend.iter().map(|&x| BigInt::from(x)).collect(),
        )
    }

    fn canonicalize(&mut self) {
        let n = self.repetend.len();
        if let Some(p) = (1..=n)
            .filter(|p| n.is_multiple_of(*p))
            .find(|&p| (p..n).all(|i| self.repetend[i] == self.repetend[i - p]))
        {
            self.repetend.truncate(p);
        }
        while self.preperiod.last().is_some_and(|x| x == self.repetend.last().unwrap()) {
            self.preperiod.pop();
            self.repetend.rotate_right(1);
        }
    }

    pub fn preperiod(&self) -> &[BigInt] {
        &self.preperiod
    }

    pub fn repetend(&self) -> &[BigInt] {
        &self.repetend
    }

    /// Length of the repetend.
    pub fn per(&self) -> usize {
        self.repetend.len()
    }

    pub fn is_purely_periodic(&self) -> bool {
        self.preperiod.is_empty()
    }

    /// Product of `[[q, 1], [1, 0]]` over the preperiod.
    pub fn preperiod_matrix(&self) -> Mat2 {
        convergent_matrix(&self.preperiod)
    }

    /// LR repetend `R^{r0} L^{r1} …` of the purely periodic tail, doubled
    /// when the repetend has odd length so that the letters alternate.
    pub fn repetend_lr(&self) -> LRWord {
        let k = if self.repetend.len() % 2 == 1 { 2 } else { 1 };
        let mut w = LRWord::empty();
        let mut letter = Letter::R;
        for q in self.repetend.iter().cycle().take(k * self.repetend.len()) {
            w.push(letter, q.to_biguint().expect("repetend terms are positive"));
            letter = letter.star();
        }
        w
    }

    /// The number whose LR expansion is the infinite power of `cycle`.
    pub fn from_lr_periodic(cycle: &LRWord) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::EmptyWord);
        }
        if !cycle.has_both_letters() {
            return Err(Error::SingleLetterWord(cycle.to_string()));
        }
        let runs = cycle.runs();
        let exp = |e: &BigUint| BigInt::from(e.clone());
        let mut pre = Vec::new();
        if cycle.first_letter() == Some(Letter::L) {
            pre.push(BigInt::zero());
        }
        let terms: Vec<BigInt> = if cycle.first_letter() == cycle.last_letter() {
            // Z^a X Z^b repeated reads Z^a, then X Z^(a+b) forever.
            let (first, last) = (&runs[0].1, &runs[runs.len() - 1].1);
            pre.push(exp(first));
            let mut t: Vec<BigInt> = runs[1..runs.len() - 1].iter().map(|(_, e)| exp(e)).collect();
            t.push(exp(&(first + last)));
            t
        } else {
            runs.iter().map(|(_, e)| exp(e)).collect()
        };
        PeriodicCF::new(pre, terms)
    }

    /// Initial terms, cycling the repetend, for approximation.
    pub fn terms(&self) -> impl Iterator<Item = &BigInt> + '_ {
        self.preperiod.iter().chain(self.repetend.iter().cycle())
    }
}

/// Product of `[[q, 1], [1, 0]]` over `qs`.
pub fn convergent_matrix(qs: &[BigInt]) -> Mat2 {
    qs.iter()
        .fold(Mat2::identity(), |acc, q| &acc * &Mat2::quotient(q))
}

/// Text form `[p0,p1;r0,r1]`.
impl fmt::Display for PeriodicCF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[BigInt]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "[{};{}]", join(&self.preperiod), join(&self.repetend))
    }
}

impl FromStr for PeriodicCF {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let inner = t
            .strip_prefix('[')
            .and_then(|x| x.strip_suffix(']'))
            .ok_or_else(|| Error::parse("continued fraction", s, "expected [pre;rep]"))?;
        let (pre, rep) = inner
            .split_once(';')
            .ok_or_else(|| Error::parse("continued fraction", s, "missing ';'"))?;
        let list = |part: &str| -> Result<Vec<BigInt>> {
            let part = part.trim();
            if part.is_empty() {
                return Ok(Vec::new());
            }
            part.split(',')
                .map(|x| {
                    x.trim()
                        .parse::<BigInt>()
                        .map_err(|e| Error::parse("continued fraction", s, e.to_string()))
                })
                .collect()
        };
        PeriodicCF::new(list(pre)?, list(rep)?)
    }
}

impl Serialize for PeriodicCF {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PeriodicCF {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Continued fraction expansion; the first repeated complete quotient
/// closes the cycle.
pub fn cf_from_surd(x: &QuadraticSurd) -> PeriodicCF {
    let mut seen: HashMap<(BigInt, BigInt), usize> = HashMap::new();
    let mut quotients = Vec::new();
    let mut cur = x.clone();
    loop {
        if let Some(&start) = seen.get(&(cur.p.clone(), cur.q.clone())) {
            let repetend = quotients.split_off(start);
            return PeriodicCF::new(quotients, repetend).expect("expansion of a surd is valid");
        }
        seen.insert((cur.p.clone(), cur.q.clone()), quotients.len());
        let a = cur.floor();
        cur = cur.step(&a);
        quotients.push(a);
    }
}

/// The quadratic irrational with the given expansion.
pub fn surd_from_cf(cf: &PeriodicCF) -> QuadraticSurd {
    let m = convergent_matrix(&cf.repetend);
    // y = (a y + b)/(c y + d)  ⇒  c y² + (d − a) y − b = 0, larger root.
    let two_c = &m.c * 2;
    let diff = &m.a - &m.d;
    let disc = &diff * &diff + &m.b * &m.c * 4;
    let y = QuadraticSurd::new(diff, two_c, disc).expect("periodic expansion is irrational");
    if cf.preperiod.is_empty() {
        y
    } else {
        apply_mobius(&cf.preperiod_matrix(), &y).expect("preperiod matrix is unimodular")
    }
}

/// `(a x + b)/(c x + d)` computed exactly in `ℚ(√D)`.
pub fn apply_mobius(m: &Mat2, x: &QuadraticSurd) -> Result<QuadraticSurd> {
    let det = m.det();
    if det.is_zero() {
        return Err(Error::SingularMatrix(m.to_string()));
    }
    let (p, q, d) = (&x.p, &x.q, &x.d);
    let num = &m.a * p + &m.b * q;
    let den = &m.c * p + &m.d * q;
    let xx = &num * &den - &m.a * &m.c * d;
    let yy = q * &det;
    let zz = &den * &den - &m.c * &m.c * d;
    let s = yy.signum();
    QuadraticSurd::new(&s * xx, &s * zz, &yy * &yy * d)
}

/// Minimal period of the expansion of `x`.
pub fn per(x: &QuadraticSurd) -> usize {
    cf_from_surd(x).per()
}
