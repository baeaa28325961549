//! The bound `S_n` with `per(x)/S_n ≤ per(h_M(x)) ≤ S_n·per(x)` for
//! `|det M| = n`.
//!
//! The closed form sums over divisors `t | n` and `j ∈ [t, 2t − 1]` the
//! quantity `2⌊ξ(j, t)/2⌋ + 1`, skipping multiples of `g_t = gcd(t, n/t)`
//! when `g_t > 1`. The same number arises as a sum of run counts of
//! transducer walks from `LE_n`, which [`s_n_via_transducer`] computes.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::matrices::{enumerate_le, nu_l, xi, Mat2};
use crate::transducer::{build_transducer, walk_le, Transducer};
use crate::words::{LRWord, Letter};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundTerm {
    pub t: u64,
    pub j: u64,
    pub xi: u32,
    pub term: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundBreakdown {
    pub n: u64,
    pub terms: Vec<BoundTerm>,
    pub total: u64,
}

impl BoundBreakdown {
    /// Terms grouped by divisor.
    pub fn per_divisor(&self) -> BTreeMap<u64, Vec<&BoundTerm>> {
        let mut m: BTreeMap<u64, Vec<&BoundTerm>> = BTreeMap::new();
        for term in &self.terms {
            m.entry(term.t).or_default().push(term);
        }
        m
    }
}

fn check_n(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidN { min: 1, got: 0 });
    }
    Ok(())
}

pub fn s_n_closed_form(n: u64) -> Result<BoundBreakdown> {
    check_n(n)?;
    let mut terms = Vec::new();
    for t in (1..=n).filter(|t| n.is_multiple_of(*t)) {
        let g = t.gcd(&(n / t));
        for j in t..2 * t {
            if g > 1 && j % g == 0 {
                continue;
            }
            let x = xi(j, t)?;
            terms.push(BoundTerm {
                t,
                j,
                xi: x,
                term: 2 * u64::from(x / 2) + 1,
            });
        }
    }
    let total = terms.iter().map(|t| t.term).sum();
    Ok(BoundBreakdown { n, terms, total })
}

pub fn s_n(n: u64) -> Result<u64> {
    Ok(s_n_closed_form(n)?.total)
}

/// `Σ_{M ∈ LE_n} Σ_{i = ν_L(M)}^{2ν_L(M) − 1} (σ(W_{L,M,i}) − 1)`.
pub fn s_n_via_transducer(n: u64) -> Result<u64> {
    check_n(n)?;
    let t = build_transducer(n)?;
    s_n_via_transducer_using(&t)
}

pub fn s_n_via_transducer_using(t: &Transducer) -> Result<u64> {
    let mut total = 0u64;
    for m in enumerate_le(t.n()) {
        let nu = nu_l(&m)?.to_u64().expect("nu_L is at most n");
        for i in nu..2 * nu {
            total += walk_le(t, &m, i)?.output.sigma() as u64 - 1;
        }
    }
    Ok(total)
}

/// The same sum taken over every `[[t, 0], [u, n/t]]` with `tm = n` and
/// `u = 0` if `gcd(t, m) = 1`, `1 ≤ u < gcd(t, m)` otherwise, including
/// matrices whose entries share a factor. Those are not states of `T_n`, so
/// their walks run on the online engine.
pub fn s_n_via_divisor_walks(n: u64) -> Result<u64> {
    check_n(n)?;
    let mut total = 0u64;
    for t in (1..=n).filter(|t| n.is_multiple_of(*t)) {
        let m = n / t;
        let g = t.gcd(&m);
        let us: Vec<u64> = if g == 1 { vec![0] } else { (1..g).collect() };
        for u in us {
            let start = Mat2::new(t, 0, u, m);
            let nu = t / g;
            for i in nu..2 * nu {
                total += online_le_walk(&start, i, n)?.sigma() as u64 - 1;
            }
        }
    }
    Ok(total)
}

/// Output of `start -L^i R^j|W-> N` where `N` has `c = 0`, `b < gcd(a, d)`,
/// is reached at an edge boundary, and `3n − d/gcd(a, d) < j ≤ 3n`.
fn online_le_walk(start: &Mat2, i: u64, n: u64) -> Result<LRWord> {
    let mut e = Engine::new(start.clone())?;
    let mut out = LRWord::empty();
    e.feed(Letter::L, &BigUint::from(i), &mut out);
    let one = BigUint::one();
    let mut found = None;
    for j in 1..=3 * n {
        e.feed(Letter::R, &one, &mut out);
        let x = e.state();
        if !e.at_boundary() || !x.c.is_zero() {
            continue;
        }
        let g = x.a.gcd(&x.d);
        if x.b >= g {
            continue;
        }
        let nu_r = (&x.d / &g).to_u64().expect("small entry");
        if j + nu_r > 3 * n {
            if found.is_some() {
                return Err(Error::FactorizationViolation(format!(
                    "walk from {start} with L^{i} meets RE twice"
                )));
            }
            found = Some(out.clone());
        }
    }
    found.ok_or_else(|| Error::FactorizationViolation(format!("walk from {start} with L^{i} never reaches RE")))
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Conjectured sharp bound for prime `n`: `5` for `n = 2`, otherwise
/// `c + 2·Σ_{i=1}^{(n−1)/2} (ξ(i, n) + 2)` with `c = 2` for `n ≡ 3 (mod 4)`
/// and `c = 1` for `n ≡ 1 (mod 4)`.
pub fn prime_sharp_bound(n: u64) -> Result<u64> {
    if !is_prime(n) {
        return Err(Error::NotPrime(n));
    }
    if n == 2 {
        return Ok(5);
    }
    let mut sum = 0u64;
    for i in 1..=(n - 1) / 2 {
        sum += u64::from(xi(i, n)?) + 2;
    }
    let c = if n % 4 == 3 { 2 } else { 1 };
    Ok(c + 2 * sum)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    ViolatesUpper,
    ViolatesLower,
}

/// Compares `per_hx` with `[per_x / S_n, S_n · per_x]` exactly.
pub fn check_bound(n: u64, per_x: u64, per_hx: u64) -> Result<Verdict> {
    if per_x == 0 || per_hx == 0 {
        return Err(Error::OutOfRange {
            what: "period",
            value: "0".into(),
            lo: "1".into(),
            hi: "∞".into(),
        });
    }
    Ok(check_bound_with(s_n(n)?, per_x, per_hx))
}

/// [`check_bound`] with a precomputed `S_n`.
pub fn check_bound_with(s: u64, per_x: u64, per_hx: u64) -> Verdict {
    let s = BigInt::from(s);
    let (px, ph) = (BigInt::from(per_x), BigInt::from(per_hx));
    if ph > &s * &px {
        Verdict::ViolatesUpper
    } else if &ph * &s < px {
        Verdict::ViolatesLower
    } else {
        Verdict::Holds
    }
}
