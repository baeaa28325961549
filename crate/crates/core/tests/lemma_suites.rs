use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use raney_core::engine::closed_walk_online;
use raney_core::lemmas;
use raney_core::matrices::{enumerate_db, enumerate_le, enumerate_re, is_le, is_re};
use raney_core::pipeline::lr_cycle_to_period;
use raney_core::transducer::transduce_cycle;
use raney_core::{build_transducer, LRWord, Letter, Transducer};

fn transducers(max: u64) -> impl Iterator<Item = Transducer> {
    (1..=max).map(|n| build_transducer(n).unwrap())
}

fn assert_clean(what: &str, n: u64, bad: Vec<String>) {
    assert!(bad.is_empty(), "{what} fails for n = {n}:\n{}", bad.join("\n"));
}

#[test]
fn edge_invariants_up_to_20() {
    for t in transducers(20) {
        assert_clean("edge invariants", t.n(), lemmas::edge_invariants(&t));
    }
}

#[test]
fn symmetry_up_to_20() {
    for t in transducers(20) {
        assert_clean("symmetry", t.n(), lemmas::symmetry(&t));
    }
}

#[test]
fn single_letter_cycles_up_to_20() {
    for t in transducers(20) {
        assert_clean("LS/RS characterization", t.n(), lemmas::ls_characterization(&t));
        assert_clean("LE funnel", t.n(), lemmas::le_funnel(&t));
    }
}

#[test]
fn deflation_random_walks() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for t in transducers(20) {
        assert_clean("deflation", t.n(), lemmas::deflation(&t, &mut rng, 300));
    }
}

#[test]
fn inflation_small_n() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for t in transducers(5) {
        assert_clean("inflation", t.n(), lemmas::inflation(&t, &mut rng, 60));
    }
}

#[test]
fn walk_le_formula_up_to_20() {
    for t in transducers(20) {
        assert_clean("walk_LE formula", t.n(), lemmas::walk_le_formula(&t));
    }
}

#[test]
fn le_and_re_are_the_filtered_states() {
    for n in 1..=40 {
        let db = enumerate_db(n);
        let mut le: Vec<_> = db.iter().filter(|m| is_le(m).unwrap()).cloned().collect();
        let mut re: Vec<_> = db.iter().filter(|m| is_re(m).unwrap()).cloned().collect();
        le.sort();
        re.sort();
        assert_eq!(le, enumerate_le(n), "n = {n}");
        assert_eq!(re, enumerate_re(n), "n = {n}");
    }
}

fn random_cycle(rng: &mut impl Rng) -> LRWord {
    let mut w = LRWord::empty();
    let runs = 2 * rng.gen_range(1..=4);
    for i in 0..runs {
        let l = if i % 2 == 0 { Letter::R } else { Letter::L };
        w.push(l, rng.gen_range(1u32..=40));
    }
    w
}

#[test]
fn table_and_online_engines_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for t in transducers(16) {
        for _ in 0..40 {
            let start = &t.states()[rng.gen_range(0..t.states().len())];
            let cycle = random_cycle(&mut rng);
            let a = transduce_cycle(&t, start, &cycle).unwrap();
            let b = closed_walk_online(start, &cycle).unwrap();
            assert_eq!(
                lr_cycle_to_period(&a.output).unwrap(),
                lr_cycle_to_period(&b.output).unwrap(),
                "n = {}, start {start}, input {cycle}",
                t.n()
            );
            assert_eq!(a.output.sigma_c().unwrap() * b.gamma, b.output.sigma_c().unwrap() * a.gamma);
        }
    }
}
