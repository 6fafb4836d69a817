//! Integer intervals with threshold widening.

use std::fmt;

use crate::absint::AbstractDomain;
use crate::error::{Error, Result};
use crate::lang::{Atom, Language};
use crate::predicate::Predicate;

use super::{int_of, symmetric_bound};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Interval {
    Empty,
    /// Inclusive bounds, `lo ≤ hi`.
    Range(i64, i64),
}

impl Interval {
    pub fn new(lo: i64, hi: i64) -> Interval {
        if lo <= hi {
            Interval::Range(lo, hi)
        } else {
            Interval::Empty
        }
    }

    /// Smallest interval containing every member of `p`.
    pub fn hull(p: &Predicate) -> Interval {
        let mut vals = p.states().map(int_of);
        match vals.next() {
            None => Interval::Empty,
            Some(first) => {
                let (lo, hi) = vals.fold((first, first), |(l, h), v| (l.min(v), h.max(v)));
                Interval::Range(lo, hi)
            }
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Interval::Empty => f.write_str("[]"),
            Interval::Range(lo, hi) => write!(f, "[{lo},{hi}]"),
        }
    }
}

#[derive(Clone)]
pub struct IntervalDomain {
    lang: Language,
    bound: i64,
    thresholds: Vec<i64>,
}

/// Intervals over a `[-n, n]` language. `thresholds` must be strictly
/// increasing and contain both `-n` and `n`; `None` selects `{-n, 0, n}`.
pub fn interval_domain(lang: &Language, thresholds: Option<&[i64]>) -> Result<IntervalDomain> {
    let n = symmetric_bound(lang)?;
    let thresholds = thresholds.map_or_else(|| vec![-n, 0, n], <[i64]>::to_vec);
    if !thresholds.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::InvalidArgument("thresholds must be strictly increasing".into()));
    }
    if thresholds.first() != Some(&-n) || thresholds.last() != Some(&n) {
        return Err(Error::InvalidArgument(format!(
            "thresholds must start at {} and end at {n}",
            -n
        )));
    }
    Ok(IntervalDomain {
        lang: lang.clone(),
        bound: n,
        thresholds,
    })
}

impl IntervalDomain {
    pub fn thresholds(&self) -> &[i64] {
        &self.thresholds
    }

    fn threshold_at_or_below(&self, v: i64) -> i64 {
        *self.thresholds.iter().rev().find(|&&t| t <= v).unwrap_or(&-self.bound)
    }

    fn threshold_at_or_above(&self, v: i64) -> i64 {
        *self.thresholds.iter().find(|&&t| t >= v).unwrap_or(&self.bound)
    }
}

impl AbstractDomain for IntervalDomain {
    type Value = Interval;

    fn name(&self) -> String {
        "interval".into()
    }

    fn language(&self) -> &Language {
        &self.lang
    }

    fn gamma(&self, v: &Interval) -> Predicate {
        match *v {
            Interval::Empty => Predicate::empty(self.lang.universe()),
            Interval::Range(lo, hi) => Predicate::filter(self.lang.universe(), |s| {
                (lo..=hi).contains(&int_of(s))
            }),
        }
    }

    fn leq(&self, a: &Interval, b: &Interval) -> bool {
        match (*a, *b) {
            (Interval::Empty, _) => true,
            (_, Interval::Empty) => false,
            (Interval::Range(a0, a1), Interval::Range(b0, b1)) => b0 <= a0 && a1 <= b1,
        }
    }

    fn join(&self, a: &Interval, b: &Interval) -> Interval {
        match (*a, *b) {
            (Interval::Empty, x) | (x, Interval::Empty) => x,
            (Interval::Range(a0, a1), Interval::Range(b0, b1)) => {
                Interval::Range(a0.min(b0), a1.max(b1))
            }
        }
    }

    fn widen(&self, a: &Interval, b: &Interval) -> Interval {
        match (*a, *b) {
            (Interval::Empty, x) | (x, Interval::Empty) => x,
            (Interval::Range(a0, a1), Interval::Range(b0, b1)) => {
                let lo = if b0 < a0 { self.threshold_at_or_below(b0) } else { a0 };
                let hi = if b1 > a1 { self.threshold_at_or_above(b1) } else { a1 };
                Interval::Range(lo, hi)
            }
        }
    }

    fn transfer(&self, atom: &Atom, v: &Interval) -> Option<Interval> {
        match atom {
            Atom::Instr(name) if name == "dec" => Some(match *v {
                Interval::Empty => Interval::Empty,
                Interval::Range(lo, hi) => {
                    Interval::Range((lo - 1).max(-self.bound), (hi - 1).max(-self.bound))
                }
            }),
            Atom::Guard(test) => {
                let sem = self.lang.test(test).ok()?;
                Some(Interval::hull(&self.gamma(v).intersection(sem)))
            }
            Atom::Instr(_) => None,
        }
    }

    fn carrier(&self) -> Option<Vec<Interval>> {
        let n = self.bound;
        let mut out = vec![Interval::Empty];
        for lo in -n..=n {
            out.extend((lo..=n).map(|hi| Interval::Range(lo, hi)));
        }
        Some(out)
    }

    fn widening_bound(&self) -> Option<usize> {
        Some(self.thresholds.len() + 1)
    }

    fn parse_value(&self, text: &str) -> Result<Interval> {
        let bad = |reason: String| Error::InvalidValue {
            text: text.to_owned(),
            reason,
        };
        let t = text.trim();
        if t == "[]" || t == "empty" {
            return Ok(Interval::Empty);
        }
        let inner = t
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| bad("expected an interval such as [0,3]".into()))?;
        let (lo, hi) = inner
            .split_once(',')
            .ok_or_else(|| bad("expected two bounds".into()))?;
        let num = |s: &str| -> Result<i64> {
            s.trim()
                .replace('−', "-")
                .parse()
                .map_err(|_| bad(format!("`{}` is not an integer", s.trim())))
        };
        let (lo, hi) = (num(lo)?, num(hi)?);
        if lo > hi || lo < -self.bound || hi > self.bound {
            return Err(bad(format!(
                "bounds must satisfy {} ≤ lo ≤ hi ≤ {}",
                -self.bound, self.bound
            )));
        }
        Ok(Interval::Range(lo, hi))
    }
}
