use std::fmt;

/// A primitive step of a program: a named instruction or a guard on a test.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    Instr(String),
    Guard(String),
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Instr(name) => f.write_str(name),
            Atom::Guard(test) => write!(f, "guard({test})"),
        }
    }
}

/// Abstract syntax of regular programs.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Instr(String),
    Guard(String),
    Seq(Box<Term>, Box<Term>),
    Choice(Box<Term>, Box<Term>),
    Skip,
    Hang,
    Star(Box<Term>),
}

impl Term {
    pub fn instr(name: &str) -> Term {
        Term::Instr(name.to_owned())
    }

    pub fn guard(test: &str) -> Term {
        Term::Guard(test.to_owned())
    }

    pub fn seq(a: Term, b: Term) -> Term {
        Term::Seq(Box::new(a), Box::new(b))
    }

    pub fn choice(a: Term, b: Term) -> Term {
        Term::Choice(Box::new(a), Box::new(b))
    }

    pub fn star(a: Term) -> Term {
        Term::Star(Box::new(a))
    }

    pub fn atom(&self) -> Option<Atom> {
        match self {
            Term::Instr(n) => Some(Atom::Instr(n.clone())),
            Term::Guard(t) => Some(Atom::Guard(t.clone())),
            _ => None,
        }
    }

    /// Height of the syntax tree; leaves have depth 1.
    pub fn depth(&self) -> usize {
        match self {
            Term::Seq(a, b) | Term::Choice(a, b) => 1 + a.depth().max(b.depth()),
            Term::Star(a) => 1 + a.depth(),
            _ => 1,
        }
    }

    pub fn atoms(&self) -> Vec<Atom> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_atoms(&self, out: &mut Vec<Atom>) {
        match self {
            Term::Seq(a, b) | Term::Choice(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
            Term::Star(a) => a.collect_atoms(out),
            Term::Skip | Term::Hang => {}
            leaf => out.extend(leaf.atom()),
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
        let own = match self {
            Term::Choice(..) => 0,
            Term::Seq(..) => 1,
            Term::Star(_) => 2,
            _ => 3,
        };
        if own < prec {
            f.write_str("(")?;
        }
        match self {
            Term::Instr(n) => f.write_str(n)?,
            Term::Guard(t) => write!(f, "guard({t})")?,
            Term::Skip => f.write_str("1")?,
            Term::Hang => f.write_str("0")?,
            Term::Choice(a, b) => {
                a.fmt_prec(f, 0)?;
                f.write_str(" + ")?;
                b.fmt_prec(f, 1)?;
            }
            Term::Seq(a, b) => {
                a.fmt_prec(f, 1)?;
                f.write_str("; ")?;
                b.fmt_prec(f, 2)?;
            }
            Term::Star(a) => {
                a.fmt_prec(f, 2)?;
                f.write_str("*")?;
            }
        }
        if own < prec {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}
