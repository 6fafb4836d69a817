//! Program syntax, the text format, and weakest-liberal-precondition semantics.

mod parse;
mod term;

use std::collections::BTreeMap;

pub use parse::{parse, ParseError};
pub use term::{Atom, Term};

use crate::error::{Error, Result};
use crate::predicate::{Predicate, State, Universe};
use crate::rel::{inverse_image, StateFunction};
use crate::transformer::{choice, hang, seq, skip, star, Extensional, Transformer};

/// A language: a state universe, named instructions given by their wlp
/// transformers, named tests, and a negation table pairing tests.
#[derive(Clone)]
pub struct Language {
    universe: Universe,
    instructions: BTreeMap<String, Transformer>,
    tests: BTreeMap<String, Predicate>,
    negations: BTreeMap<String, String>,
    saturation: Option<(String, usize)>,
}

impl Language {
    pub fn new(universe: &Universe) -> Self {
        Language {
            universe: universe.clone(),
            instructions: BTreeMap::new(),
            tests: BTreeMap::new(),
            negations: BTreeMap::new(),
            saturation: None,
        }
    }

    /// Register an instruction. It must be homogeneous over the language's
    /// universe; monotonicity is checked whenever the universe fits the
    /// default extensional budget.
    pub fn add_instruction(&mut self, name: &str, wlp: Transformer) -> Result<()> {
        self.universe.ensure_same(wlp.input(), "instruction input")?;
        self.universe.ensure_same(wlp.output(), "instruction output")?;
        let ext = Extensional::default();
        if ext.predicates(&self.universe).is_ok() && !ext.is_monotone(&wlp)? {
            return Err(Error::NotMonotone);
        }
        self.instructions.insert(name.to_owned(), wlp);
        Ok(())
    }

    pub fn add_test(&mut self, name: &str, semantics: Predicate) -> Result<()> {
        self.universe.ensure_same(semantics.universe(), "test")?;
        self.tests.insert(name.to_owned(), semantics);
        Ok(())
    }

    /// Pair `b` with `not_b`; their semantics must be complementary.
    pub fn add_negation(&mut self, b: &str, not_b: &str) -> Result<()> {
        let pb = self.test(b)?;
        let pn = self.test(not_b)?;
        if pb.complement() != *pn {
            return Err(Error::InvalidArgument(format!(
                "tests `{b}` and `{not_b}` are not complementary"
            )));
        }
        self.negations.insert(b.to_owned(), not_b.to_owned());
        self.negations.insert(not_b.to_owned(), b.to_owned());
        Ok(())
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn instruction(&self, name: &str) -> Result<&Transformer> {
        self.instructions
            .get(name)
            .ok_or_else(|| Error::UnknownInstruction(name.to_owned()))
    }

    pub fn test(&self, name: &str) -> Result<&Predicate> {
        self.tests
            .get(name)
            .ok_or_else(|| Error::UnknownTest(name.to_owned()))
    }

    pub fn negation(&self, name: &str) -> Result<&str> {
        self.negations
            .get(name)
            .map(String::as_str)
            .ok_or_else(|| Error::NoNegation(name.to_owned()))
    }

    pub fn instruction_names(&self) -> impl Iterator<Item = &str> {
        self.instructions.keys().map(String::as_str)
    }

    pub fn test_names(&self) -> impl Iterator<Item = &str> {
        self.tests.keys().map(String::as_str)
    }

    /// Every instruction and every guard, in a fixed order.
    pub fn atoms(&self) -> Vec<Atom> {
        self.instructions
            .keys()
            .map(|n| Atom::Instr(n.clone()))
            .chain(self.tests.keys().map(|t| Atom::Guard(t.clone())))
            .collect()
    }

    /// `guard(b)(X) = ¬⟦b⟧ ∪ X`.
    pub fn guard(&self, b: &str) -> Result<Transformer> {
        Ok(Transformer::guard(self.test(b)?))
    }

    pub fn if_then_else(&self, b: &str, u: Term, v: Term) -> Result<Term> {
        Ok(encode_if(b, self.negation(b)?, u, v))
    }

    pub fn while_do(&self, b: &str, u: Term) -> Result<Term> {
        Ok(encode_while(b, self.negation(b)?, u))
    }

    pub fn parse(&self, text: &str) -> std::result::Result<Term, ParseError> {
        parse(text, self)
    }

    pub fn wlp_atom(&self, atom: &Atom) -> Result<Transformer> {
        match atom {
            Atom::Instr(name) => self.instruction(name).cloned(),
            Atom::Guard(test) => self.guard(test),
        }
    }

    /// The weakest-liberal-precondition transformer of a program, built
    /// homomorphically over the regular operations.
    pub fn wlp(&self, t: &Term) -> Result<Transformer> {
        match t {
            Term::Instr(name) => self.instruction(name).cloned(),
            Term::Guard(test) => self.guard(test),
            Term::Seq(a, b) => seq(&self.wlp(a)?, &self.wlp(b)?),
            Term::Choice(a, b) => choice(&self.wlp(a)?, &self.wlp(b)?),
            Term::Skip => Ok(skip(&self.universe)),
            Term::Hang => Ok(hang(&self.universe, &self.universe)),
            Term::Star(a) => star(&self.wlp(a)?),
        }
    }

    /// Mark `state` as the point where `instruction` saturates instead of
    /// leaving the bounded universe.
    pub fn set_saturation(&mut self, instruction: &str, state: &State) -> Result<()> {
        let i = self
            .universe
            .index_of(state)
            .ok_or_else(|| Error::UnknownState(state.to_string()))?;
        self.saturation = Some((instruction.to_owned(), i));
        Ok(())
    }

    /// A note for reports whenever `p` involves the saturation boundary.
    pub fn boundary_note(&self, p: &Predicate) -> Option<String> {
        let (instr, i) = self.saturation.as_ref()?;
        p.contains(*i).then(|| {
            format!(
                "note: {} touches {}, where `{instr}` saturates",
                p,
                self.universe.state(*i)
            )
        })
    }
}

pub(crate) fn encode_if(b: &str, not_b: &str, u: Term, v: Term) -> Term {
    Term::choice(
        Term::seq(Term::guard(b), u),
        Term::seq(Term::guard(not_b), v),
    )
}

pub(crate) fn encode_while(b: &str, not_b: &str, u: Term) -> Term {
    Term::seq(Term::star(Term::seq(Term::guard(b), u)), Term::guard(not_b))
}

/// The single-cell integer language over `[-n, n]`: tests `pos` (n > 0) and
/// `npos` (n ≤ 0), and `dec`, whose wlp is `{n | n-1 ∈ X}` with `n-1`
/// saturating at `-n`.
pub fn example_language(n: i64) -> Result<Language> {
    if n < 1 {
        return Err(Error::InvalidArgument(format!(
            "universe bound must be at least 1, got {n}"
        )));
    }
    let u = Universe::int_range(-n, n)?;
    let int = |s: &State| match s {
        State::Int(v) => *v,
        State::Token(_) => unreachable!("integer universe"),
    };
    let mut lang = Language::new(&u);
    let dec = StateFunction::from_fn(&u, &u, |i| {
        let m = (int(u.state(i)) - 1).max(-n);
        u.index_of(&State::Int(m)).expect("saturated value stays in range")
    })?;
    lang.add_instruction("dec", inverse_image(&dec))?;
    lang.add_test("pos", Predicate::filter(&u, |s| int(s) > 0))?;
    lang.add_test("npos", Predicate::filter(&u, |s| int(s) <= 0))?;
    lang.add_negation("pos", "npos")?;
    lang.set_saturation("dec", &State::Int(-n))?;
    Ok(lang)
}

/// `while pos do dec`, the countdown program.
pub fn countdown() -> Term {
    encode_while("pos", "npos", Term::instr("dec"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transformer::eq;

    fn lang3() -> Language {
        example_language(3).unwrap()
    }

    fn ints(l: &Language, xs: &[i64]) -> Predicate {
        Predicate::from_ints(l.universe(), xs.iter().copied()).unwrap()
    }

    #[test]
    fn example_language_tests_and_dec() {
        let l = lang3();
        assert_eq!(*l.test("pos").unwrap(), ints(&l, &[1, 2, 3]));
        assert_eq!(*l.test("npos").unwrap(), ints(&l, &[-3, -2, -1, 0]));
        let dec = l.instruction("dec").unwrap();
        assert!(dec.apply(&Predicate::full(l.universe())).unwrap().is_full());
        assert_eq!(dec.apply(&ints(&l, &[2])).unwrap(), ints(&l, &[3]));
        assert_eq!(dec.apply(&ints(&l, &[-3])).unwrap(), ints(&l, &[-3, -2]));
        assert!(example_language(0).is_err());
    }

    #[test]
    fn guard_values() {
        let l = lang3();
        let u = l.universe();
        assert_eq!(
            l.guard("pos").unwrap().apply(&Predicate::empty(u)).unwrap(),
            ints(&l, &[-3, -2, -1, 0])
        );
        assert!(l.guard("pos").unwrap().apply(&Predicate::full(u)).unwrap().is_full());
        assert_eq!(
            l.guard("npos").unwrap().apply(&ints(&l, &[1])).unwrap(),
            ints(&l, &[1, 2, 3])
        );
        assert!(matches!(l.guard("zero"), Err(Error::UnknownTest(_))));
    }

    #[test]
    fn countdown_wlp() {
        let l = lang3();
        let d = l.wlp(&countdown()).unwrap();
        assert_eq!(d.apply(&ints(&l, &[0])).unwrap(), ints(&l, &[0, 1, 2, 3]));
        let dd = l.wlp(&Term::seq(Term::instr("dec"), Term::instr("dec"))).unwrap();
        assert_eq!(dd.apply(&ints(&l, &[0])).unwrap(), ints(&l, &[2]));
        assert!(eq(&l.wlp(&Term::Skip).unwrap(), &skip(l.universe())).unwrap());
    }

    #[test]
    fn if_then_else_encoding() {
        let l = lang3();
        let t = l.if_then_else("pos", Term::Skip, Term::Skip).unwrap();
        assert_eq!(
            t,
            Term::choice(
                Term::seq(Term::guard("pos"), Term::Skip),
                Term::seq(Term::guard("npos"), Term::Skip)
            )
        );
        assert!(eq(&l.wlp(&t).unwrap(), &skip(l.universe())).unwrap());
        let t = l.if_then_else("pos", Term::instr("dec"), Term::Skip).unwrap();
        assert_eq!(l.wlp(&t).unwrap().apply(&ints(&l, &[0])).unwrap(), ints(&l, &[0, 1]));
    }

    #[test]
    fn while_encoding() {
        let l = lang3();
        assert_eq!(l.while_do("pos", Term::instr("dec")).unwrap(), countdown());
        let d = Term::seq(
            Term::star(Term::seq(Term::guard("pos"), Term::instr("dec"))),
            Term::guard("npos"),
        );
        assert_eq!(countdown(), d);
        assert!(l.while_do("odd", Term::Skip).is_err());
    }

    #[test]
    fn while_on_an_empty_test_is_skip() {
        let mut l = lang3();
        let u = l.universe().clone();
        l.add_test("never", Predicate::empty(&u)).unwrap();
        l.add_test("always", Predicate::full(&u)).unwrap();
        l.add_negation("never", "always").unwrap();
        let t = l.while_do("never", Term::instr("dec")).unwrap();
        assert!(eq(&l.wlp(&t).unwrap(), &skip(&u)).unwrap());
    }

    #[test]
    fn negation_requires_complement() {
        let mut l = lang3();
        let u = l.universe().clone();
        l.add_test("zero", Predicate::from_ints(&u, [0]).unwrap()).unwrap();
        assert!(l.add_negation("zero", "pos").is_err());
    }

    #[test]
    fn wlp_reports_unknown_names() {
        let l = lang3();
        assert!(matches!(
            l.wlp(&Term::instr("inc")),
            Err(Error::UnknownInstruction(_))
        ));
    }

    #[test]
    fn boundary_note_mentions_saturation() {
        let l = lang3();
        assert!(l.boundary_note(&ints(&l, &[-3, 0])).is_some());
        assert!(l.boundary_note(&ints(&l, &[0])).is_none());
    }

    #[test]
    fn parser_precedence_and_forms() {
        let l = lang3();
        assert_eq!(l.parse("while pos do dec").unwrap(), countdown());
        assert_eq!(l.parse("while pos do dec end").unwrap(), countdown());
        assert_eq!(
            l.parse("(guard(pos); dec)* ; guard(npos)").unwrap(),
            countdown()
        );
        assert_eq!(
            l.parse("a + b ; c").unwrap(),
            Term::choice(Term::instr("a"), Term::seq(Term::instr("b"), Term::instr("c")))
        );
        assert_eq!(
            l.parse("a ; b*").unwrap(),
            Term::seq(Term::instr("a"), Term::star(Term::instr("b")))
        );
        assert_eq!(
            l.parse("# comment\n1 + 0 # trailing").unwrap(),
            Term::choice(Term::Skip, Term::Hang)
        );
        assert_eq!(
            l.parse("if pos then dec else 1 end").unwrap(),
            l.if_then_else("pos", Term::instr("dec"), Term::Skip).unwrap()
        );
    }

    #[test]
    fn parser_errors_carry_positions() {
        let l = lang3();
        let e = l.parse("dec ;\n  + dec").unwrap_err();
        assert_eq!((e.line, e.column), (2, 3));
        let e = l.parse("while odd do dec end").unwrap_err();
        assert_eq!((e.line, e.column), (1, 7));
        assert!(l.parse("(dec").is_err());
        assert!(l.parse("dec )").is_err());
        assert!(l.parse("2").is_err());
        assert!(l.parse("dec $").is_err());
        assert!(l.parse("while pos do dec end dec").is_err());
    }
}
