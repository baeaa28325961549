//! Randomized cross-check of the transducer pipeline against the surd
//! oracle, plus the single-input `transform` report.
//!
//! Trial `i` draws from a ChaCha8 stream keyed by `(seed, i)`, so results do
//! not depend on scheduling or on the number of worker threads.

use std::time::Instant;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{check_bound_with, s_n, Verdict};
use crate::error::{Error, Result};
use crate::matrices::{enumerate_db, Mat2};
use crate::pipeline::{degree, image_period, image_period_using, oracle_image};
use crate::surds::PeriodicCF;
use crate::transducer::{build_transducer, Transducer};
use crate::words::Letter;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub n: u64,
    pub samples: usize,
    pub seed: u64,
    pub max_period: usize,
    pub max_quotient: u64,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
}

impl VerifyConfig {
    pub fn new(n: u64, samples: usize, seed: u64) -> Self {
        VerifyConfig {
            n,
            samples,
            seed,
            max_period: 8,
            max_quotient: 50,
            jobs: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub index: usize,
    pub matrix: String,
    pub cf: PeriodicCF,
    pub per_x: usize,
    pub per_hx: Option<usize>,
    pub oracle_per: Option<usize>,
    pub verdict: Option<Verdict>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub n: u64,
    pub samples: usize,
    pub seed: u64,
    pub s_n: u64,
    pub failures: Vec<Failure>,
    pub elapsed_ms: u64,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// One drawn test case.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sample {
    pub matrix: Mat2,
    pub cf: PeriodicCF,
}

fn rng_for(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// Random CF: preperiod of length 0 to 2 (first term in `[-q, q]`), repetend
/// of length 1 to `max_period`, quotients in `[1, max_quotient]`.
pub fn random_cf(rng: &mut impl Rng, max_period: usize, max_quotient: u64) -> PeriodicCF {
    let q = max_quotient as i64;
    let pre_len = rng.gen_range(0..=2);
    let mut pre: Vec<BigInt> = Vec::with_capacity(pre_len);
    for k in 0..pre_len {
        let v = if k == 0 { rng.gen_range(-q..=q) } else { rng.gen_range(1..=q) };
        pre.push(v.into());
    }
    let rep_len = rng.gen_range(1..=max_period);
    let rep = (0..rep_len).map(|_| rng.gen_range(1..=q).into()).collect();
    PeriodicCF::new(pre, rep).expect("generated terms are in range")
}

/// Random matrix with `|det| = n` and content 1: a `DB_n` state multiplied
/// on both sides by up to four factors from `{L, R, L⁻¹, R⁻¹, J}`.
pub fn random_matrix(rng: &mut impl Rng, states: &[Mat2]) -> Mat2 {
    let base = states.choose(rng).expect("DB_n is nonempty").clone();
    let left = random_dressing(rng);
    let right = random_dressing(rng);
    &(&left * &base) * &right
}

fn random_dressing(rng: &mut impl Rng) -> Mat2 {
    let len = rng.gen_range(0..=4);
    let mut u = Mat2::identity();
    for _ in 0..len {
        let f = match rng.gen_range(0..5) {
            0 => Mat2::letter_power(Letter::L, 1),
            1 => Mat2::letter_power(Letter::R, 1),
            2 => Mat2::letter_power(Letter::L, -1),
            3 => Mat2::letter_power(Letter::R, -1),
            _ => Mat2::swap(),
        };
        u = &u * &f;
    }
    u
}

pub fn sample(cfg: &VerifyConfig, states: &[Mat2], index: usize) -> Sample {
    let mut rng = rng_for(cfg.seed, index);
    let cf = random_cf(&mut rng, cfg.max_period, cfg.max_quotient);
    let matrix = random_matrix(&mut rng, states);
    Sample { matrix, cf }
}

fn run_trial(t: &Transducer, s: u64, index: usize, smp: &Sample) -> Option<Failure> {
    let per_x = smp.cf.per();
    let mut failure = Failure {
        index,
        matrix: smp.matrix.to_string(),
        cf: smp.cf.clone(),
        per_x,
        per_hx: None,
        oracle_per: None,
        verdict: None,
        error: None,
    };
    let per_hx = match image_period_using(t, &smp.matrix, &smp.cf) {
        Ok(p) => p,
        Err(e) => {
            failure.error = Some(e.to_string());
            return Some(failure);
        }
    };
    failure.per_hx = Some(per_hx);
    let oracle = match oracle_image(&smp.matrix, &smp.cf) {
        Ok(c) => c.per(),
        Err(e) => {
            failure.error = Some(e.to_string());
            return Some(failure);
        }
    };
    failure.oracle_per = Some(oracle);
    let verdict = check_bound_with(s, per_x as u64, per_hx as u64);
    failure.verdict = Some(verdict);
    (per_hx != oracle || verdict != Verdict::Holds).then_some(failure)
}

/// Runs `cfg.samples` trials. `progress` is called with the number of
/// finished trials from worker threads.
pub fn verify(cfg: &VerifyConfig, progress: Option<&(dyn Fn(usize) + Sync)>) -> Result<VerifyReport> {
    if cfg.n < 2 {
        return Err(Error::InvalidN { min: 2, got: cfg.n });
    }
    if cfg.max_period == 0 || cfg.max_quotient == 0 {
        return Err(Error::OutOfRange {
            what: "max_period/max_quotient",
            value: "0".into(),
            lo: "1".into(),
            hi: "∞".into(),
        });
    }
    let start = Instant::now();
    let t = build_transducer(cfg.n)?;
    let s = s_n(cfg.n)?;
    let states = enumerate_db(cfg.n);
    let done = std::sync::atomic::AtomicUsize::new(0);
    let work = || -> Vec<Failure> {
        let mut failures: Vec<Failure> = (0..cfg.samples)
            .into_par_iter()
            .filter_map(|i| {
                let f = run_trial(&t, s, i, &sample(cfg, &states, i));
                let k = done.fetch_add(1, std::sync::atomic::Ordering::Relaxed) + 1;
                if let Some(p) = progress {
                    p(k);
                }
                f
            })
            .collect();
        failures.sort_by_key(|f| f.index);
        failures
    };
    let failures = match cfg.jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build()
            .map_err(|e| Error::ThreadPool(e.to_string()))?
            .install(work),
        None => work(),
    };
    Ok(VerifyReport {
        n: cfg.n,
        samples: cfg.samples,
        seed: cfg.seed,
        s_n: s,
        failures,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransformReport {
    pub matrix: String,
    pub cf: PeriodicCF,
    pub n: u64,
    pub result_cf: PeriodicCF,
    pub per_x: usize,
    pub per_hx: usize,
    pub oracle_per: usize,
    pub s_n: u64,
    pub verdict: Verdict,
}

/// `h_m(x)` with its period from the transducer and from the oracle.
pub fn transform(m: &Mat2, x: &PeriodicCF) -> Result<TransformReport> {
    let n = degree(m)?;
    let per_hx = image_period(m, x)?;
    let result_cf = oracle_image(m, x)?;
    let s = s_n(n)?;
    Ok(TransformReport {
        matrix: m.to_string(),
        cf: x.clone(),
        n,
        per_x: x.per(),
        per_hx,
        oracle_per: result_cf.per(),
        result_cf,
        s_n: s,
        verdict: check_bound_with(s, x.per() as u64, per_hx as u64),
    })
}
