//! Finite state universes and predicates over them.
//!
//! A [`Predicate`] is a subset of a [`Universe`], stored as a bitset over the
//! universe's state indices. Universes are shared behind an `Arc`; two
//! universes are equal when they list the same states in the same order.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::error::{Error, Result};

/// A single state of a universe.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(untagged)]
pub enum State {
    Int(i64),
    Token(String),
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            State::Int(n) => write!(f, "{n}"),
            State::Token(t) => f.write_str(t),
        }
    }
}

impl From<i64> for State {
    fn from(n: i64) -> Self {
        State::Int(n)
    }
}

impl From<&str> for State {
    fn from(t: &str) -> Self {
        State::Token(t.to_owned())
    }
}

struct UniverseInner {
    states: Vec<State>,
    index: HashMap<State, usize>,
}

/// An ordered, non-empty, finite sequence of distinct states.
#[derive(Clone)]
pub struct Universe(Arc<UniverseInner>);

impl Universe {
    pub fn new(states: Vec<State>) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::InvalidUniverse("a universe needs at least one state".into()));
        }
        let mut index = HashMap::with_capacity(states.len());
        for (i, s) in states.iter().enumerate() {
            if index.insert(s.clone(), i).is_some() {
                return Err(Error::InvalidUniverse(format!("duplicate state `{s}`")));
            }
        }
        Ok(Universe(Arc::new(UniverseInner { states, index })))
    }

    /// The integers `lo..=hi`.
    pub fn int_range(lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidUniverse(format!("empty range [{lo}, {hi}]")));
        }
        Universe::new((lo..=hi).map(State::Int).collect())
    }

    pub fn tokens<I, S>(tokens: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Universe::new(tokens.into_iter().map(|t| State::Token(t.into())).collect())
    }

    pub fn size(&self) -> usize {
        self.0.states.len()
    }

    pub fn states(&self) -> &[State] {
        &self.0.states
    }

    pub fn state(&self, i: usize) -> &State {
        &self.0.states[i]
    }

    pub fn index_of(&self, s: &State) -> Option<usize> {
        self.0.index.get(s).copied()
    }

    pub fn ensure_same(&self, other: &Universe, context: &str) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::UniverseMismatch(format!(
                "{context}: {self:?} vs {other:?}"
            )))
        }
    }
}

impl PartialEq for Universe {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.states == other.0.states
    }
}

impl Eq for Universe {}

impl fmt::Debug for Universe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let states = self.states();
        if states.len() <= 8 {
            write!(f, "Universe[")?;
            for (i, s) in states.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{s}")?;
            }
            f.write_str("]")
        } else {
            write!(
                f,
                "Universe[{}..{}; {} states]",
                states[0],
                states[states.len() - 1],
                states.len()
            )
        }
    }
}

/// A subset of a universe.
#[derive(Clone)]
pub struct Predicate {
    universe: Universe,
    bits: FixedBitSet,
}

impl Predicate {
    pub fn empty(universe: &Universe) -> Self {
        Predicate {
            universe: universe.clone(),
            bits: FixedBitSet::with_capacity(universe.size()),
        }
    }

    pub fn full(universe: &Universe) -> Self {
        let mut p = Predicate::empty(universe);
        p.bits.insert_range(..);
        p
    }

    pub fn singleton(universe: &Universe, index: usize) -> Self {
        let mut p = Predicate::empty(universe);
        p.bits.insert(index);
        p
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(universe: &Universe, indices: I) -> Self {
        let mut p = Predicate::empty(universe);
        p.bits.extend(indices);
        p
    }

    pub fn from_states<'a, I>(universe: &Universe, states: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a State>,
    {
        let mut p = Predicate::empty(universe);
        for s in states {
            let i = universe
                .index_of(s)
                .ok_or_else(|| Error::UnknownState(s.to_string()))?;
            p.bits.insert(i);
        }
        Ok(p)
    }

    pub fn from_ints<I: IntoIterator<Item = i64>>(universe: &Universe, ints: I) -> Result<Self> {
        let states: Vec<State> = ints.into_iter().map(State::Int).collect();
        Predicate::from_states(universe, &states)
    }

    /// States of `universe` satisfying `pred`.
    pub fn filter(universe: &Universe, pred: impl Fn(&State) -> bool) -> Self {
        Predicate::from_indices(
            universe,
            universe
                .states()
                .iter()
                .enumerate()
                .filter(|(_, s)| pred(s))
                .map(|(i, _)| i),
        )
    }

    /// Decode the predicate whose members are the set bits of `mask`.
    pub fn from_mask(universe: &Universe, mask: u64) -> Self {
        Predicate::from_indices(
            universe,
            (0..universe.size().min(64)).filter(|i| mask >> i & 1 == 1),
        )
    }

    /// The members as a bitmask. Only meaningful for universes of at most 64 states.
    pub fn mask(&self) -> u64 {
        debug_assert!(self.universe.size() <= 64);
        self.bits.ones().fold(0u64, |m, i| m | 1 << i)
    }

    /// Every predicate over `universe`, in mask order. Universes above 63 states are rejected.
    pub fn all(universe: &Universe) -> Result<impl Iterator<Item = Predicate> + '_> {
        if universe.size() > 63 {
            return Err(Error::BudgetExceeded {
                needed: 1u128 << universe.size().min(127),
                budget: u64::MAX,
            });
        }
        Ok((0..1u64 << universe.size()).map(move |m| Predicate::from_mask(universe, m)))
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn contains(&self, index: usize) -> bool {
        self.bits.contains(index)
    }

    pub fn contains_state(&self, s: &State) -> bool {
        self.universe.index_of(s).is_some_and(|i| self.contains(i))
    }

    pub fn insert(&mut self, index: usize) {
        self.bits.insert(index);
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.universe.size()
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn states(&self) -> impl Iterator<Item = &State> + '_ {
        self.bits.ones().map(|i| self.universe.state(i))
    }

    pub fn union(&self, other: &Predicate) -> Predicate {
        self.assert_same(other);
        let mut p = self.clone();
        p.bits.union_with(&other.bits);
        p
    }

    pub fn intersection(&self, other: &Predicate) -> Predicate {
        self.assert_same(other);
        let mut p = self.clone();
        p.bits.intersect_with(&other.bits);
        p
    }

    pub fn difference(&self, other: &Predicate) -> Predicate {
        self.assert_same(other);
        let mut p = self.clone();
        p.bits.difference_with(&other.bits);
        p
    }

    pub fn complement(&self) -> Predicate {
        let mut p = self.clone();
        p.bits.toggle_range(..);
        p
    }

    pub fn is_subset(&self, other: &Predicate) -> bool {
        self.assert_same(other);
        self.bits.is_subset(&other.bits)
    }

    pub(crate) fn union_in_place(&mut self, other: &Predicate) {
        self.bits.union_with(&other.bits);
    }

    // Binary set operations between universes are programming errors; the
    // public entry points validate universes before reaching here.
    fn assert_same(&self, other: &Predicate) {
        assert!(
            self.universe == other.universe,
            "predicate universe mismatch: {:?} vs {:?}",
            self.universe,
            other.universe
        );
    }
}

impl PartialEq for Predicate {
    fn eq(&self, other: &Self) -> bool {
        self.universe == other.universe && self.bits == other.bits
    }
}

impl Eq for Predicate {}

impl Hash for Predicate {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.bits.hash(state);
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, s) in self.states().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
