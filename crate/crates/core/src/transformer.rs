//! Monotone predicate transformers and the regular operations on them.
//!
//! A [`Transformer`] maps predicates over its `input` universe to predicates
//! over its `output` universe. Transformers are kept as evaluable terms built
//! from the regular operations, guards, relation liftings and small explicit
//! tables; they are never expanded to a full `2^n` table unless built from one.
//!
//! Sequence follows the backward reading of program semantics:
//! `seq(a, b)` evaluates `b` first, so `seq(a, b)(X) = a(b(X))`.
//!
//! Iteration `star(a)` is evaluated pointwise. For a postcondition `Q` the
//! result is the greatest fixed point of `Y ↦ Q ∩ a(Y)`, reached by descending
//! iteration from the full universe. Writing `g(Q)` for that pointwise gfp,
//! `g` is itself a fixed point of `p ↦ skip + a;p` (unfold once at each `Q`),
//! and any transformer `p` with `p = skip + a;p` satisfies `p(Q) ⊆ Q ∩ a(p(Q))`,
//! so `p(Q)` is a post-fixed point below the gfp. Hence `g` is the greatest
//! fixed point in the transformer lattice.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::predicate::{Predicate, Universe};
use crate::rel::Relation;

/// Default number of predicate evaluations an extensional check may spend.
pub const DEFAULT_BUDGET: u64 = 1 << 16;

/// Largest input universe accepted for an explicit transformer table.
pub const MAX_TABLE_STATES: usize = 16;

#[derive(Clone)]
pub struct Transformer {
    input: Universe,
    output: Universe,
    node: Arc<Node>,
}

enum Node {
    Skip,
    Hang,
    Seq(Transformer, Transformer),
    Choice(Transformer, Transformer),
    Star(Transformer),
    Guard(Predicate),
    Angelic(Relation),
    Demonic(Relation),
    Table { outputs: Vec<Predicate>, additive: bool },
}

impl Transformer {
    fn new(input: Universe, output: Universe, node: Node) -> Self {
        Transformer {
            input,
            output,
            node: Arc::new(node),
        }
    }

    pub fn input(&self) -> &Universe {
        &self.input
    }

    pub fn output(&self) -> &Universe {
        &self.output
    }

    pub fn is_homogeneous(&self) -> bool {
        self.input == self.output
    }

    /// Evaluate at `x`, checking that `x` lives over the input universe.
    pub fn apply(&self, x: &Predicate) -> Result<Predicate> {
        self.input.ensure_same(x.universe(), "apply")?;
        Ok(self.eval(x))
    }

    pub(crate) fn eval(&self, x: &Predicate) -> Predicate {
        match &*self.node {
            Node::Skip => x.clone(),
            Node::Hang => Predicate::full(&self.output),
            Node::Seq(a, b) => a.eval(&b.eval(x)),
            Node::Choice(a, b) => a.eval(x).intersection(&b.eval(x)),
            Node::Star(a) => {
                let mut y = Predicate::full(&self.input);
                loop {
                    let next = x.intersection(&a.eval(&y));
                    if next == y {
                        return y;
                    }
                    y = next;
                }
            }
            Node::Guard(test) => test.complement().union(x),
            Node::Angelic(r) => {
                let mut out = Predicate::empty(&self.output);
                for i in x.indices() {
                    out.union_in_place(r.image(i));
                }
                out
            }
            Node::Demonic(r) => Predicate::from_indices(
                &self.output,
                (0..self.output.size()).filter(|&i| r.image(i).is_subset(x)),
            ),
            Node::Table { outputs, .. } => outputs[x.mask() as usize].clone(),
        }
    }

    /// Whether the transformer is known, by construction, to preserve
    /// arbitrary unions (including the empty union).
    pub fn is_additive(&self) -> bool {
        match &*self.node {
            Node::Skip | Node::Angelic(_) => true,
            Node::Seq(a, b) => a.is_additive() && b.is_additive(),
            Node::Demonic(r) => r.is_functional(),
            Node::Table { additive, .. } => *additive,
            Node::Hang | Node::Choice(..) | Node::Star(_) | Node::Guard(_) => false,
        }
    }

    /// Build an explicit transformer from its values on every input predicate.
    ///
    /// The input universe may have at most [`MAX_TABLE_STATES`] states, and `f`
    /// must be monotone.
    pub fn table(
        input: &Universe,
        output: &Universe,
        f: impl Fn(&Predicate) -> Predicate,
    ) -> Result<Self> {
        if input.size() > MAX_TABLE_STATES {
            return Err(Error::BudgetExceeded {
                needed: 1u128 << input.size(),
                budget: 1 << MAX_TABLE_STATES,
            });
        }
        let outputs: Vec<Predicate> = Predicate::all(input)?.map(|x| f(&x)).collect();
        for (m, out) in outputs.iter().enumerate() {
            output.ensure_same(out.universe(), "table output")?;
            for i in 0..input.size() {
                let up = m | 1 << i;
                if up != m && !out.is_subset(&outputs[up]) {
                    return Err(Error::NotMonotone);
                }
            }
        }
        let additive = outputs[0].is_empty()
            && outputs.iter().enumerate().all(|(m, out)| {
                let mut joined = Predicate::empty(output);
                for i in 0..input.size() {
                    if m >> i & 1 == 1 {
                        joined.union_in_place(&outputs[1 << i]);
                    }
                }
                &joined == out
            });
        Ok(Transformer::new(
            input.clone(),
            output.clone(),
            Node::Table { outputs, additive },
        ))
    }

    /// `guard(b)(X) = ¬b ∪ X`.
    pub fn guard(test: &Predicate) -> Self {
        let u = test.universe().clone();
        Transformer::new(u.clone(), u, Node::Guard(test.clone()))
    }

    pub(crate) fn angelic(r: &Relation) -> Self {
        Transformer::new(r.source().clone(), r.target().clone(), Node::Angelic(r.clone()))
    }

    pub(crate) fn demonic(r: &Relation) -> Self {
        Transformer::new(r.target().clone(), r.source().clone(), Node::Demonic(r.clone()))
    }
}

impl fmt::Debug for Transformer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.node {
            Node::Skip => f.write_str("1"),
            Node::Hang => f.write_str("0"),
            Node::Seq(a, b) => write!(f, "({a:?};{b:?})"),
            Node::Choice(a, b) => write!(f, "({a:?}+{b:?})"),
            Node::Star(a) => write!(f, "{a:?}*"),
            Node::Guard(t) => write!(f, "guard{t}"),
            Node::Angelic(_) => f.write_str("<r>"),
            Node::Demonic(_) => f.write_str("[r]"),
            Node::Table { .. } => f.write_str("table"),
        }
    }
}

/// `1`: the identity transformer.
pub fn skip(universe: &Universe) -> Transformer {
    Transformer::new(universe.clone(), universe.clone(), Node::Skip)
}

/// `0`: maps every predicate to the full output universe.
pub fn hang(input: &Universe, output: &Universe) -> Transformer {
    Transformer::new(input.clone(), output.clone(), Node::Hang)
}

/// `a;b`, evaluated as `a(b(X))`.
pub fn seq(a: &Transformer, b: &Transformer) -> Result<Transformer> {
    a.input.ensure_same(&b.output, "sequence")?;
    Ok(Transformer::new(
        b.input.clone(),
        a.output.clone(),
        Node::Seq(a.clone(), b.clone()),
    ))
}

/// `a+b`: pointwise intersection.
pub fn choice(a: &Transformer, b: &Transformer) -> Result<Transformer> {
    a.input.ensure_same(&b.input, "choice input")?;
    a.output.ensure_same(&b.output, "choice output")?;
    Ok(Transformer::new(
        a.input.clone(),
        a.output.clone(),
        Node::Choice(a.clone(), b.clone()),
    ))
}

/// `a*`: the greatest fixed point of `p ↦ 1 + a;p`.
pub fn star(a: &Transformer) -> Result<Transformer> {
    if !a.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    Ok(Transformer::new(
        a.input.clone(),
        a.input.clone(),
        Node::Star(a.clone()),
    ))
}

/// Budgeted extensional checks: order, equality and monotonicity decided by
/// enumerating predicates over the input universe.
#[derive(Clone, Copy, Debug)]
pub struct Extensional {
    budget: u64,
}

impl Default for Extensional {
    fn default() -> Self {
        Extensional {
            budget: DEFAULT_BUDGET,
        }
    }
}

impl Extensional {
    pub fn new(budget: u64) -> Self {
        Extensional { budget }
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    fn charge(&self, needed: u128) -> Result<()> {
        if needed > self.budget as u128 {
            Err(Error::BudgetExceeded {
                needed,
                budget: self.budget,
            })
        } else {
            Ok(())
        }
    }

    /// Every predicate over `universe`, provided `2^size` fits the budget.
    pub fn predicates<'u>(
        &self,
        universe: &'u Universe,
    ) -> Result<impl Iterator<Item = Predicate> + 'u> {
        self.charge(1u128 << universe.size().min(127))?;
        Predicate::all(universe)
    }

    fn check_types(a: &Transformer, b: &Transformer) -> Result<()> {
        a.input.ensure_same(&b.input, "order input")?;
        a.output.ensure_same(&b.output, "order output")
    }

    /// A predicate `X` with `a(X) ⊄ b(X)`, or `None` when `a ⊑ b`.
    ///
    /// When `a` is additive the check runs over singletons only:
    /// `a(X) = ⋃ a({x}) ⊆ ⋃ b({x}) ⊆ b(X)` by monotonicity of `b`.
    pub fn leq_witness(&self, a: &Transformer, b: &Transformer) -> Result<Option<Predicate>> {
        Self::check_types(a, b)?;
        if a.is_additive() {
            let n = a.input.size();
            self.charge(n as u128 + 1)?;
            return Ok((0..n)
                .map(|i| Predicate::singleton(&a.input, i))
                .find(|x| !a.eval(x).is_subset(&b.eval(x))));
        }
        self.leq_witness_exhaustive(a, b)
    }

    /// As [`Extensional::leq_witness`], always enumerating all of `P(input)`.
    pub fn leq_witness_exhaustive(
        &self,
        a: &Transformer,
        b: &Transformer,
    ) -> Result<Option<Predicate>> {
        Self::check_types(a, b)?;
        Ok(self
            .predicates(&a.input)?
            .find(|x| !a.eval(x).is_subset(&b.eval(x))))
    }

    pub fn leq(&self, a: &Transformer, b: &Transformer) -> Result<bool> {
        Ok(self.leq_witness(a, b)?.is_none())
    }

    pub fn eq(&self, a: &Transformer, b: &Transformer) -> Result<bool> {
        Self::check_types(a, b)?;
        Ok(self.eq_witness(a, b)?.is_none())
    }

    /// A predicate on which `a` and `b` differ.
    pub fn eq_witness(&self, a: &Transformer, b: &Transformer) -> Result<Option<Predicate>> {
        Self::check_types(a, b)?;
        Ok(self
            .predicates(&a.input)?
            .find(|x| a.eval(x) != b.eval(x)))
    }

    /// Checks `X ⊆ Y ⟹ t(X) ⊆ t(Y)` over all covering pairs `X ⊂ X ∪ {s}`.
    pub fn is_monotone(&self, t: &Transformer) -> Result<bool> {
        let n = t.input.size();
        for x in self.predicates(&t.input)? {
            let tx = t.eval(&x);
            for i in (0..n).filter(|&i| !x.contains(i)) {
                let mut up = x.clone();
                up.insert(i);
                if !tx.is_subset(&t.eval(&up)) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// `a ⊑ b` with the default budget.
pub fn leq(a: &Transformer, b: &Transformer) -> Result<bool> {
    Extensional::default().leq(a, b)
}

/// Extensional equality with the default budget.
pub fn eq(a: &Transformer, b: &Transformer) -> Result<bool> {
    Extensional::default().eq(a, b)
}
