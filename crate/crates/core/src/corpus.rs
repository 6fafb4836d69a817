//! Seeded generation of small program terms.

use std::collections::HashSet;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::lang::{countdown, Term};

fn leaf(rng: &mut impl Rng) -> Term {
    match rng.gen_range(0..5) {
        0 => Term::instr("dec"),
        1 => Term::guard("pos"),
        2 => Term::guard("npos"),
        3 => Term::Skip,
        _ => Term::Hang,
    }
}

fn term(rng: &mut impl Rng, depth: usize) -> Term {
    if depth <= 1 || rng.gen_bool(0.25) {
        return leaf(rng);
    }
    match rng.gen_range(0..5) {
        0 | 1 => Term::seq(term(rng, depth - 1), term(rng, depth - 1)),
        2 | 3 => Term::choice(term(rng, depth - 1), term(rng, depth - 1)),
        _ => Term::star(term(rng, depth - 1)),
    }
}

/// `count` distinct terms of depth at most `max_depth` over `dec`,
/// `guard(pos)`, `guard(npos)`, `1`, `0` and the regular operations. The
/// countdown loop always comes first; the rest depend only on `seed`.
pub fn generate_corpus(seed: u64, count: usize, max_depth: usize) -> Vec<Term> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(count);
    let first = countdown();
    if first.depth() <= max_depth && count > 0 {
        seen.insert(first.clone());
        out.push(first);
    }
    let mut attempts = 0usize;
    while out.len() < count && attempts < count * 1000 {
        attempts += 1;
        let t = term(&mut rng, max_depth.max(1));
        if seen.insert(t.clone()) {
            out.push(t);
        }
    }
    out
}
