//! Abstraction of an integer by the set of signs it may take.

use std::fmt;

use crate::absint::AbstractDomain;
use crate::error::{Error, Result};
use crate::lang::{Atom, Language};
use crate::predicate::Predicate;

use super::{int_of, symmetric_bound};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Neg,
    Zero,
    Pos,
}

impl Sign {
    pub const ALL: [Sign; 3] = [Sign::Neg, Sign::Zero, Sign::Pos];

    pub fn of(n: i64) -> Sign {
        match n.signum() {
            -1 => Sign::Neg,
            0 => Sign::Zero,
            _ => Sign::Pos,
        }
    }

    fn bit(self) -> u8 {
        match self {
            Sign::Neg => 1,
            Sign::Zero => 2,
            Sign::Pos => 4,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Sign::Neg => "-",
            Sign::Zero => "0",
            Sign::Pos => "+",
        }
    }
}

/// A subset of `{-, 0, +}`. The empty set is included so that guards stay
/// inside the carrier.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct SignSet(u8);

impl SignSet {
    pub const EMPTY: SignSet = SignSet(0);
    pub const TOP: SignSet = SignSet(7);

    pub fn of(signs: &[Sign]) -> SignSet {
        SignSet(signs.iter().fold(0, |m, s| m | s.bit()))
    }

    pub fn contains(self, s: Sign) -> bool {
        self.0 & s.bit() != 0
    }

    pub fn union(self, other: SignSet) -> SignSet {
        SignSet(self.0 | other.0)
    }

    pub fn intersection(self, other: SignSet) -> SignSet {
        SignSet(self.0 & other.0)
    }

    pub fn is_subset(self, other: SignSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn signs(self) -> impl Iterator<Item = Sign> {
        Sign::ALL.into_iter().filter(move |s| self.contains(*s))
    }

    pub fn all() -> impl Iterator<Item = SignSet> {
        (0..8).map(SignSet)
    }
}

impl fmt::Display for SignSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, s) in self.signs().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(s.symbol())?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for SignSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl std::str::FromStr for SignSet {
    type Err = Error;

    fn from_str(text: &str) -> Result<SignSet> {
        let bad = |reason: &str| Error::InvalidValue {
            text: text.to_owned(),
            reason: reason.to_owned(),
        };
        let inner = text
            .trim()
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .ok_or_else(|| bad("expected a sign set such as {0,+}"))?;
        let mut set = SignSet::EMPTY;
        for item in inner.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let sign = match item {
                "-" | "−" => Sign::Neg,
                "0" => Sign::Zero,
                "+" => Sign::Pos,
                _ => return Err(bad(&format!("unknown sign `{item}`"))),
            };
            set = set.union(SignSet::of(&[sign]));
        }
        Ok(set)
    }
}

/// A union-preserving map on sign sets, fixed by the images of the three
/// singletons.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SignMap(pub [SignSet; 3]);

impl SignMap {
    pub fn apply(&self, v: SignSet) -> SignSet {
        v.signs()
            .map(|s| self.0[s.bit().trailing_zeros() as usize])
            .fold(SignSet::EMPTY, SignSet::union)
    }

    /// All 512 such maps.
    pub fn all() -> impl Iterator<Item = SignMap> {
        (0..512usize).map(|code| {
            SignMap([
                SignSet((code & 7) as u8),
                SignSet((code >> 3 & 7) as u8),
                SignSet((code >> 6 & 7) as u8),
            ])
        })
    }
}

/// The sign domain over a `[-n, n]` language with tests `pos`/`npos` and
/// instruction `dec`.
#[derive(Clone)]
pub struct SignsDomain {
    lang: Language,
}

pub fn signs_domain(lang: &Language) -> Result<SignsDomain> {
    symmetric_bound(lang)?;
    lang.instruction("dec")?;
    lang.negation("pos")?;
    Ok(SignsDomain { lang: lang.clone() })
}

impl SignsDomain {
    /// Abstract decrement of a single sign.
    pub fn dec_sign(s: Sign) -> SignSet {
        match s {
            Sign::Pos => SignSet::of(&[Sign::Zero, Sign::Pos]),
            Sign::Zero | Sign::Neg => SignSet::of(&[Sign::Neg]),
        }
    }

    pub fn dec(v: SignSet) -> SignSet {
        v.signs()
            .map(SignsDomain::dec_sign)
            .fold(SignSet::EMPTY, SignSet::union)
    }
}

impl AbstractDomain for SignsDomain {
    type Value = SignSet;

    fn name(&self) -> String {
        "signs".into()
    }

    fn language(&self) -> &Language {
        &self.lang
    }

    fn gamma(&self, v: &SignSet) -> Predicate {
        Predicate::filter(self.lang.universe(), |s| v.contains(Sign::of(int_of(s))))
    }

    fn leq(&self, a: &SignSet, b: &SignSet) -> bool {
        a.is_subset(*b)
    }

    fn join(&self, a: &SignSet, b: &SignSet) -> SignSet {
        a.union(*b)
    }

    fn widen(&self, a: &SignSet, b: &SignSet) -> SignSet {
        a.union(*b)
    }

    fn transfer(&self, atom: &Atom, v: &SignSet) -> Option<SignSet> {
        match atom {
            Atom::Instr(name) if name == "dec" => Some(SignsDomain::dec(*v)),
            Atom::Guard(test) if test == "pos" => Some(v.intersection(SignSet::of(&[Sign::Pos]))),
            Atom::Guard(test) if test == "npos" => {
                Some(v.intersection(SignSet::of(&[Sign::Neg, Sign::Zero])))
            }
            _ => None,
        }
    }

    fn carrier(&self) -> Option<Vec<SignSet>> {
        Some(SignSet::all().collect())
    }

    fn widening_bound(&self) -> Option<usize> {
        Some(3)
    }

    fn parse_value(&self, text: &str) -> Result<SignSet> {
        text.parse()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::example_language;

    fn set(text: &str) -> SignSet {
        text.parse().unwrap()
    }

    #[test]
    fn sign_transfer_table() {
        let dom = signs_domain(&example_language(3).unwrap()).unwrap();
        let dec = Atom::Instr("dec".into());
        assert_eq!(dom.transfer(&dec, &set("{+}")), Some(set("{0,+}")));
        assert_eq!(dom.transfer(&dec, &set("{0}")), Some(set("{-}")));
        assert_eq!(dom.transfer(&dec, &set("{-}")), Some(set("{-}")));
        assert_eq!(dom.transfer(&dec, &SignSet::EMPTY), Some(SignSet::EMPTY));
        let npos = Atom::Guard("npos".into());
        assert_eq!(dom.transfer(&npos, &set("{0,+}")), Some(set("{0}")));
        let pos = Atom::Guard("pos".into());
        assert_eq!(dom.transfer(&pos, &SignSet::TOP), Some(set("{+}")));
        assert_eq!(dom.transfer(&pos, &set("{-,0}")), Some(SignSet::EMPTY));
        assert_eq!(dom.transfer(&Atom::Instr("inc".into()), &SignSet::TOP), None);
    }

    #[test]
    fn gamma_by_sign() {
        let lang = example_language(3).unwrap();
        let dom = signs_domain(&lang).unwrap();
        let g = dom.gamma(&set("{-,+}"));
        assert_eq!(g, Predicate::from_ints(lang.universe(), [-3, -2, -1, 1, 2, 3]).unwrap());
        assert!(dom.gamma(&SignSet::EMPTY).is_empty());
    }

    #[test]
    fn sign_maps_preserve_unions() {
        assert_eq!(SignMap::all().count(), 512);
        for m in SignMap::all().step_by(7) {
            assert_eq!(m.apply(SignSet::EMPTY), SignSet::EMPTY);
            for a in SignSet::all() {
                for b in SignSet::all() {
                    assert_eq!(m.apply(a.union(b)), m.apply(a).union(m.apply(b)));
                }
            }
        }
        let dec = SignMap([
            SignsDomain::dec_sign(Sign::Neg),
            SignsDomain::dec_sign(Sign::Zero),
            SignsDomain::dec_sign(Sign::Pos),
        ]);
        for v in SignSet::all() {
            assert_eq!(dec.apply(v), SignsDomain::dec(v));
        }
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(set("{ +, 0 }").to_string(), "{0,+}");
        assert_eq!(set("{−}"), SignSet::of(&[Sign::Neg]));
        assert_eq!(set("{}"), SignSet::EMPTY);
        assert!("{1}".parse::<SignSet>().is_err());
        assert!("0,+".parse::<SignSet>().is_err());
    }
}
