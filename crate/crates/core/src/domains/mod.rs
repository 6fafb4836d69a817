//! Bundled abstract domains for the countdown language.

mod concrete;
mod interval;
mod mutated;
mod signs;

pub use concrete::{concrete_domain, ConcreteDomain, MAX_CONCRETE_STATES};
pub use interval::{interval_domain, Interval, IntervalDomain};
pub use mutated::Mutated;
pub use signs::{signs_domain, Sign, SignMap, SignSet, SignsDomain};

use crate::error::{Error, Result};
use crate::lang::Language;
use crate::predicate::State;

/// Names accepted by the command line `--domain` flag.
pub const DOMAIN_NAMES: [&str; 3] = ["signs", "concrete", "interval"];

/// The integer bound `n` of a language over `[-n, n]`.
pub(crate) fn symmetric_bound(lang: &Language) -> Result<i64> {
    let states = lang.universe().states();
    match (states.first(), states.last()) {
        (Some(State::Int(lo)), Some(State::Int(hi)))
            if *lo == -*hi && states.len() as i64 == 2 * hi + 1 =>
        {
            Ok(*hi)
        }
        _ => Err(Error::InvalidArgument(
            "domain requires an integer universe of the form [-n, n]".into(),
        )),
    }
}

pub(crate) fn int_of(s: &State) -> i64 {
    match s {
        State::Int(n) => *n,
        State::Token(t) => unreachable!("integer universe holds token `{t}`"),
    }
}

/// `signs` with `dec♯(+) = {+}`: misses the step from 1 to 0.
pub fn broken_sign_dec(lang: &Language) -> Result<Mutated<SignsDomain>> {
    Ok(Mutated::new(
        signs_domain(lang)?,
        "dec +↦{+}",
        crate::lang::Atom::Instr("dec".into()),
        |v: &SignSet| {
            v.signs()
                .map(|s| match s {
                    Sign::Pos => SignSet::of(&[Sign::Pos]),
                    other => SignsDomain::dec_sign(other),
                })
                .fold(SignSet::EMPTY, SignSet::union)
        },
    ))
}

/// `signs` with `guard♯(pos)` discarding every state.
pub fn broken_sign_guard(lang: &Language) -> Result<Mutated<SignsDomain>> {
    Ok(Mutated::new(
        signs_domain(lang)?,
        "guard(pos) ↦ {}",
        crate::lang::Atom::Guard("pos".into()),
        |_: &SignSet| SignSet::EMPTY,
    ))
}

/// `interval` with `dec♯` as the identity.
pub fn broken_interval_dec(lang: &Language) -> Result<Mutated<IntervalDomain>> {
    Ok(Mutated::new(
        interval_domain(lang, None)?,
        "dec = id",
        crate::lang::Atom::Instr("dec".into()),
        |v: &Interval| *v,
    ))
}
