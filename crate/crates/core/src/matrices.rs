//! Exact 2×2 integer matrices, the Euclidean step count `xi`, and the
//! matrix classes that make up the states of a Raney transducer.
//!
//! For a fixed determinant `n`:
//!
//! * `D_n`:  nonnegative entries, determinant `n`, content (gcd of entries) 1;
//! * `RB_n`: row balanced, `a > c` and `d > b`;
//! * `CB_n`: column balanced, `a > b` and `d > c`;
//! * `DB_n`: doubly balanced, `RB_n ∩ CB_n`.
//!
//! `LS_n`/`RS_n` are the states of `DB_n` with `b = 0` / `c = 0`, and
//! `LE_n`/`RE_n` pick one representative per class (`c < gcd(a, d)` /
//! `b < gcd(a, d)`).

use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::words::Letter;

/// Row-major 2×2 matrix `[[a, b], [c, d]]` over arbitrary-precision integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat2 {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl Mat2 {
    pub fn new(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        c: impl Into<BigInt>,
        d: impl Into<BigInt>,
    ) -> Self {
        Mat2 {
            a: a.into(),
            b: b.into(),
            c: c.into(),
            d: d.into(),
        }
    }

    pub fn identity() -> Self {
        Mat2::new(1, 0, 0, 1)
    }

    /// `[[0, 1], [1, 0]]`, the letter swap.
    pub fn swap() -> Self {
        Mat2::new(0, 1, 1, 0)
    }

    /// `A_n = [[n, 0], [0, 1]]`.
    pub fn a_n(n: u64) -> Self {
        Mat2::new(n, 0, 0, 1)
    }

    /// `A_n* = [[1, 0], [0, n]]`.
    pub fn a_n_star(n: u64) -> Self {
        Mat2::new(1, 0, 0, n)
    }

    /// The matrix of `letter^k`.
    pub fn letter_power(letter: Letter, k: impl Into<BigInt>) -> Self {
        match letter {
            Letter::L => Mat2::new(BigInt::one(), BigInt::zero(), k.into(), BigInt::one()),
            Letter::R => Mat2::new(BigInt::one(), k.into(), BigInt::zero(), BigInt::one()),
        }
    }

    /// Convergent matrix `[[q, 1], [1, 0]]` of one partial quotient.
    pub fn quotient(q: &BigInt) -> Self {
        Mat2::new(q.clone(), 1, 1, 0)
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    /// Greatest common divisor of the four entries (0 for the zero matrix).
    pub fn content(&self) -> BigInt {
        self.a.gcd(&self.b).gcd(&self.c).gcd(&self.d)
    }

    /// Adjugate `[[d, -b], [-c, a]]`, i.e. `det · M⁻¹`.
    pub fn adjugate(&self) -> Self {
        Mat2::new(self.d.clone(), -&self.b, -&self.c, self.a.clone())
    }

    /// The associated matrix `M* = J·M·J = [[d, c], [b, a]]`.
    pub fn associated(&self) -> Self {
        Mat2::new(self.d.clone(), self.c.clone(), self.b.clone(), self.a.clone())
    }

    pub fn transpose(&self) -> Self {
        Mat2::new(self.a.clone(), self.c.clone(), self.b.clone(), self.d.clone())
    }

    pub fn neg(&self) -> Self {
        Mat2::new(-&self.a, -&self.b, -&self.c, -&self.d)
    }

    /// Divides every entry by `g`, which must divide all of them.
    pub fn div_exact(&self, g: &BigInt) -> Self {
        Mat2::new(&self.a / g, &self.b / g, &self.c / g, &self.d / g)
    }

    /// Returns the matrix divided by its content, and the content.
    pub fn primitive_part(&self) -> (Self, BigInt) {
        let g = self.content();
        if g.is_zero() || g.is_one() {
            (self.clone(), g)
        } else {
            (self.div_exact(&g), g)
        }
    }

    pub fn is_nonneg(&self) -> bool {
        !self.a.is_negative() && !self.b.is_negative() && !self.c.is_negative() && !self.d.is_negative()
    }

    pub fn is_nonpos(&self) -> bool {
        !self.a.is_positive() && !self.b.is_positive() && !self.c.is_positive() && !self.d.is_positive()
    }

    /// Right multiplication by `letter^k`, in place.
    pub fn mul_letter_right(&mut self, letter: Letter, k: &BigInt) {
        match letter {
            Letter::L => {
                self.a += &self.b * k;
                self.c += &self.d * k;
            }
            Letter::R => {
                self.b += &self.a * k;
                self.d += &self.c * k;
            }
        }
    }

    /// Left multiplication by `letter^k`, in place. Negative `k` peels.
    pub fn mul_letter_left(&mut self, letter: Letter, k: &BigInt) {
        match letter {
            Letter::L => {
                self.c += &self.a * k;
                self.d += &self.b * k;
            }
            Letter::R => {
                self.a += &self.c * k;
                self.b += &self.d * k;
            }
        }
    }

    pub(crate) fn row_balanced_shape(&self) -> bool {
        self.a > self.c && self.d > self.b
    }

    pub(crate) fn column_balanced_shape(&self) -> bool {
        self.a > self.b && self.d > self.c
    }

    /// Entries as `i64`, for serialization of small matrices.
    pub fn to_i64s(&self) -> Result<[i64; 4]> {
        let conv = |x: &BigInt| x.to_i64().ok_or_else(|| Error::Overflow(x.to_string()));
        Ok([conv(&self.a)?, conv(&self.b)?, conv(&self.c)?, conv(&self.d)?])
    }
}

impl Mul for &Mat2 {
    type Output = Mat2;

    fn mul(self, rhs: &Mat2) -> Mat2 {
        Mat2 {
            a: &self.a * &rhs.a + &self.b * &rhs.c,
            b: &self.a * &rhs.b + &self.b * &rhs.d,
            c: &self.c * &rhs.a + &self.d * &rhs.c,
            d: &self.c * &rhs.b + &self.d * &rhs.d,
        }
    }
}

impl Mul for Mat2 {
    type Output = Mat2;

    fn mul(self, rhs: Mat2) -> Mat2 {
        &self * &rhs
    }
}

/// Text form `a,b,c,d` (row-major).
impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.a, self.b, self.c, self.d)
    }
}

impl FromStr for Mat2 {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(Error::parse("matrix", s, "expected four comma-separated integers"));
        }
        let mut v = Vec::with_capacity(4);
        for p in parts {
            v.push(
                p.parse::<BigInt>()
                    .map_err(|e| Error::parse("matrix", s, e.to_string()))?,
            );
        }
        let mut it = v.into_iter();
        Ok(Mat2 {
            a: it.next().unwrap(),
            b: it.next().unwrap(),
            c: it.next().unwrap(),
            d: it.next().unwrap(),
        })
    }
}

/// Number of division steps the Euclidean algorithm performs on `(a, c)`
/// before reaching a zero remainder. Symmetric in its arguments.
pub fn xi<T>(a: T, c: T) -> Result<u32>
where
    T: Integer + Clone,
{
    if a < T::zero() || c < T::zero() {
        return Err(Error::XiNegative);
    }
    let (mut hi, mut lo) = if a >= c { (a, c) } else { (c, a) };
    if hi.is_zero() {
        return Err(Error::XiUndefined);
    }
    let mut steps = 0;
    while !lo.is_zero() {
        let r = hi.mod_floor(&lo);
        hi = lo;
        lo = r;
        steps += 1;
    }
    Ok(steps)
}

/// Maximal left factor `letter^k` (`k ≥ 1`) of a nonnegative matrix with
/// positive determinant that leaves the remainder nonnegative, or `None`
/// when the matrix is row balanced or the identity.
///
/// `R` peels iff `a ≥ c` and `b ≥ d`, `L` iff `c ≥ a` and `d ≥ b`; a positive
/// determinant rules out both at once.
pub fn peel_left(m: &Mat2) -> Option<(Letter, BigInt)> {
    let count = |num1: &BigInt, den1: &BigInt, num2: &BigInt, den2: &BigInt| {
        let q1 = (!den1.is_zero()).then(|| num1 / den1);
        let q2 = (!den2.is_zero()).then(|| num2 / den2);
        match (q1, q2) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (Some(x), None) | (None, Some(x)) => Some(x),
            (None, None) => None,
        }
    };
    if m.a >= m.c && m.b >= m.d {
        count(&m.a, &m.c, &m.b, &m.d)
            .filter(|k| k.is_positive())
            .map(|k| (Letter::R, k))
    } else if m.c >= m.a && m.d >= m.b {
        count(&m.c, &m.a, &m.d, &m.b)
            .filter(|k| k.is_positive())
            .map(|k| (Letter::L, k))
    } else {
        None
    }
}

fn big(n: u64) -> BigInt {
    BigInt::from(n)
}

pub fn in_d(m: &Mat2, n: u64) -> bool {
    m.is_nonneg() && m.det() == big(n) && m.content().is_one()
}

pub fn in_rb(m: &Mat2, n: u64) -> bool {
    in_d(m, n) && m.row_balanced_shape()
}

pub fn in_cb(m: &Mat2, n: u64) -> bool {
    in_d(m, n) && m.column_balanced_shape()
}

pub fn in_db(m: &Mat2, n: u64) -> bool {
    in_d(m, n) && m.row_balanced_shape() && m.column_balanced_shape()
}

/// All of `DB_n`, sorted with `A_n` first and `A_n*` last.
///
/// Membership forces `1 ≤ a, d ≤ n`, `0 ≤ b < d`, `0 ≤ c < a`, so the scan
/// runs over `(a, d)` and solves `bc = ad − n` for each `b`.
pub fn enumerate_db(n: u64) -> Vec<Mat2> {
    let mut out = Vec::new();
    for a in 1..=n {
        for d in 1..=n {
            let Some(k) = (a * d).checked_sub(n) else {
                continue;
            };
            for b in 0..d {
                let c = if b == 0 {
                    if k != 0 {
                        continue;
                    }
                    None
                } else if k % b == 0 {
                    Some(k / b)
                } else {
                    continue;
                };
                let cs: Vec<u64> = match c {
                    Some(c) => vec![c],
                    None => (0..a).collect(),
                };
                for c in cs {
                    if c >= a || d <= c || a <= b {
                        continue;
                    }
                    if a.gcd(&b).gcd(&c).gcd(&d) != 1 {
                        continue;
                    }
                    out.push(Mat2::new(a, b, c, d));
                }
            }
        }
    }
    out.sort_by(|x, y| y.a.cmp(&x.a).then_with(|| x.b.cmp(&y.b)).then_with(|| x.c.cmp(&y.c)));
    out
}

/// Determinant of a `DB` matrix as `u64`, or an error naming the class.
pub fn db_degree(m: &Mat2) -> Result<u64> {
    let n = m
        .det()
        .to_u64()
        .filter(|&n| n >= 1)
        .ok_or_else(|| Error::not_in(m, "DB_n"))?;
    if in_db(m, n) {
        Ok(n)
    } else {
        Err(Error::not_in(m, format!("DB_{n}")))
    }
}

pub fn is_ls(m: &Mat2) -> Result<bool> {
    db_degree(m)?;
    Ok(m.b.is_zero())
}

pub fn is_rs(m: &Mat2) -> Result<bool> {
    db_degree(m)?;
    Ok(m.c.is_zero())
}

pub fn is_le(m: &Mat2) -> Result<bool> {
    db_degree(m)?;
    Ok(m.b.is_zero() && m.c < m.a.gcd(&m.d))
}

pub fn is_re(m: &Mat2) -> Result<bool> {
    db_degree(m)?;
    Ok(m.c.is_zero() && m.b < m.a.gcd(&m.d))
}

/// Least `i > 0` with a closed walk reading `L^i` from `m ∈ LE_n`:
/// `a / gcd(a, d)`.
pub fn nu_l(m: &Mat2) -> Result<BigInt> {
    if !is_le(m)? {
        return Err(Error::not_in(m, "LE_n"));
    }
    Ok(&m.a / m.a.gcd(&m.d))
}

/// Least `i > 0` with a closed walk reading `R^i` from `m ∈ RE_n`:
/// `d / gcd(a, d)`.
pub fn nu_r(m: &Mat2) -> Result<BigInt> {
    if !is_re(m)? {
        return Err(Error::not_in(m, "RE_n"));
    }
    Ok(&m.d / m.a.gcd(&m.d))
}

/// `LE_n` built from the divisor structure: `[[t, 0], [u, n/t]]` for every
/// divisor `t`, with `u = 0` when `gcd(t, n/t) = 1` and `1 ≤ u < gcd(t, n/t)`
/// otherwise, keeping only matrices of content 1.
pub fn enumerate_le(n: u64) -> Vec<Mat2> {
    let mut out = Vec::new();
    for t in (1..=n).filter(|t| n.is_multiple_of(*t)) {
        let m = n / t;
        let g = t.gcd(&m);
        let us: Vec<u64> = if g == 1 { vec![0] } else { (1..g).collect() };
        for u in us {
            if t.gcd(&u).gcd(&m) == 1 {
                out.push(Mat2::new(t, 0, u, m));
            }
        }
    }
    out.sort();
    out
}

pub fn enumerate_re(n: u64) -> Vec<Mat2> {
    let mut out: Vec<Mat2> = enumerate_le(n).iter().map(Mat2::associated).collect();
    out.sort();
    out
}
