//! Lower bounds on `sup per(h_M(x)) / per(x)` by exhaustive search over
//! start states and input rotations.
//!
//! For a fixed `x`, every `M ∈ DB_n` is tried against every rotation of the
//! LR repetend of `x`. A rotation is the repetend of another number with the
//! same period, so each pair is a legitimate `(M, x')` with
//! `per(x') = per(x)`. Preperiods are irrelevant to the tail and are ignored.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::engine::closed_walk_online;
use crate::error::{Error, Result};
use crate::matrices::{enumerate_db, Mat2};
use crate::pipeline::{lr_cycle_to_period, oracle_image};
use crate::surds::PeriodicCF;
use crate::words::LRWord;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub n: u64,
    pub cf: PeriodicCF,
    pub per_x: usize,
    /// Largest image period found.
    pub best_period: usize,
    /// `best_period / per_x`.
    pub best_ratio: f64,
    /// State that attains the best period.
    pub witness_state: String,
    /// The rotated LR repetend fed to the witness state.
    pub witness_input: LRWord,
    /// The number whose expansion is the infinite power of `witness_input`.
    pub witness_x: PeriodicCF,
    /// Expansion of `h_witness_state(witness_x)` from the surd oracle.
    pub witness_image: PeriodicCF,
    /// Number of `(state, rotation)` pairs evaluated.
    pub evaluated: usize,
}

pub fn search(n: u64, x: &PeriodicCF) -> Result<SearchReport> {
    if n == 0 {
        return Err(Error::InvalidN { min: 1, got: 0 });
    }
    let tail = PeriodicCF::new(Vec::new(), x.repetend().to_vec())?;
    let rotations = tail.repetend_lr().conjugates()?;
    let states = enumerate_db(n);
    let pairs: Vec<(&Mat2, &LRWord)> = states
        .iter()
        .flat_map(|s| rotations.iter().map(move |r| (s, r)))
        .collect();
    let results: Vec<(usize, usize)> = pairs
        .par_iter()
        .enumerate()
        .map(|(k, (s, r))| {
            let walk = closed_walk_online(s, r)?;
            Ok((lr_cycle_to_period(&walk.output)?, k))
        })
        .collect::<Result<_>>()?;
    // Largest period; the first pair in state-then-rotation order wins ties.
    let &(best_period, k) = results
        .iter()
        .max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)))
        .expect("at least one state and one rotation");
    let (state, input) = pairs[k];
    let witness_x = PeriodicCF::from_lr_periodic(input)?;
    let witness_image = oracle_image(state, &witness_x)?;
    if witness_image.per() != best_period || witness_x.per() != x.per() {
        return Err(Error::FactorizationViolation(format!(
            "oracle disagrees on witness {state} with {input}: period {} vs {best_period}",
            witness_image.per()
        )));
    }
    Ok(SearchReport {
        n,
        cf: x.clone(),
        per_x: x.per(),
        best_period,
        best_ratio: best_period as f64 / x.per() as f64,
        witness_state: state.to_string(),
        witness_input: input.clone(),
        witness_x,
        witness_image,
        evaluated: pairs.len(),
    })
}
