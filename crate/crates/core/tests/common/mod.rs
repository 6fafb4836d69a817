//! Test oracles that do not go through the transformer implementation.
#![allow(dead_code)]

use absref::{Language, Predicate, State, Term};

/// Relational semantics of a term over the countdown language: a boolean
/// matrix `r[s][s']`, "run from s may end in s'".
pub fn relation(lang: &Language, t: &Term) -> Vec<Vec<bool>> {
    let u = lang.universe();
    let n = u.size();
    let int = |i: usize| match u.state(i) {
        State::Int(v) => *v,
        _ => unreachable!(),
    };
    let bound = -int(0);
    let identity = |keep: &dyn Fn(i64) -> bool| {
        (0..n)
            .map(|i| (0..n).map(|j| i == j && keep(int(i))).collect())
            .collect::<Vec<Vec<bool>>>()
    };
    match t {
        Term::Instr(name) => {
            assert_eq!(name, "dec");
            (0..n)
                .map(|i| (0..n).map(|j| int(j) == (int(i) - 1).max(-bound)).collect())
                .collect()
        }
        Term::Guard(test) => match test.as_str() {
            "pos" => identity(&|v| v > 0),
            "npos" => identity(&|v| v <= 0),
            other => panic!("unknown test {other}"),
        },
        Term::Skip => identity(&|_| true),
        Term::Hang => vec![vec![false; n]; n],
        Term::Seq(a, b) => compose(&relation(lang, a), &relation(lang, b)),
        Term::Choice(a, b) => {
            let (ra, rb) = (relation(lang, a), relation(lang, b));
            (0..n)
                .map(|i| (0..n).map(|j| ra[i][j] || rb[i][j]).collect())
                .collect()
        }
        Term::Star(a) => {
            let step = relation(lang, a);
            let mut closure = identity(&|_| true);
            loop {
                let next = compose(&closure, &step);
                let merged: Vec<Vec<bool>> = (0..n)
                    .map(|i| (0..n).map(|j| closure[i][j] || next[i][j]).collect())
                    .collect();
                if merged == closure {
                    return closure;
                }
                closure = merged;
            }
        }
    }
}

fn compose(a: &[Vec<bool>], b: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).any(|k| a[i][k] && b[k][j])).collect())
        .collect()
}

/// Weakest liberal precondition from the relation: every final state in `post`.
pub fn wlp_oracle(lang: &Language, t: &Term, post: &Predicate) -> Predicate {
    let r = relation(lang, t);
    let n = lang.universe().size();
    Predicate::from_indices(
        lang.universe(),
        (0..n).filter(|&i| (0..n).all(|j| !r[i][j] || post.contains(j))),
    )
}

/// Forward image of `pre` under the relation.
pub fn post_oracle(lang: &Language, t: &Term, pre: &Predicate) -> Predicate {
    let r = relation(lang, t);
    let n = lang.universe().size();
    Predicate::from_indices(
        lang.universe(),
        (0..n).filter(|&j| (0..n).any(|i| pre.contains(i) && r[i][j])),
    )
}

pub fn contains_hang(t: &Term) -> bool {
    match t {
        Term::Hang => true,
        Term::Seq(a, b) | Term::Choice(a, b) => contains_hang(a) || contains_hang(b),
        Term::Star(a) => contains_hang(a),
        _ => false,
    }
}

pub fn ints(lang: &Language, xs: &[i64]) -> Predicate {
    Predicate::from_ints(lang.universe(), xs.iter().copied()).unwrap()
}

pub fn filter(lang: &Language, f: impl Fn(i64) -> bool) -> Predicate {
    Predicate::filter(lang.universe(), |s| match s {
        State::Int(v) => f(*v),
        _ => false,
    })
}
