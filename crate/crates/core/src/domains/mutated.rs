use std::sync::Arc;

use crate::absint::AbstractDomain;
use crate::error::Result;
use crate::lang::{Atom, Language};
use crate::predicate::Predicate;

type TransferFn<V> = Arc<dyn Fn(&V) -> V + Send + Sync>;

/// A domain with one transfer function replaced. Used to build deliberately
/// unsound variants.
#[derive(Clone)]
pub struct Mutated<D: AbstractDomain> {
    base: D,
    label: String,
    atom: Atom,
    replacement: TransferFn<D::Value>,
}

impl<D: AbstractDomain> Mutated<D> {
    pub fn new(
        base: D,
        label: &str,
        atom: Atom,
        replacement: impl Fn(&D::Value) -> D::Value + Send + Sync + 'static,
    ) -> Self {
        Mutated {
            base,
            label: label.to_owned(),
            atom,
            replacement: Arc::new(replacement),
        }
    }

    pub fn base(&self) -> &D {
        &self.base
    }
}

impl<D: AbstractDomain> AbstractDomain for Mutated<D> {
    type Value = D::Value;

    fn name(&self) -> String {
        format!("{}[{}]", self.base.name(), self.label)
    }

    fn language(&self) -> &Language {
        self.base.language()
    }

    fn gamma(&self, v: &D::Value) -> Predicate {
        self.base.gamma(v)
    }

    fn leq(&self, a: &D::Value, b: &D::Value) -> bool {
        self.base.leq(a, b)
    }

    fn join(&self, a: &D::Value, b: &D::Value) -> D::Value {
        self.base.join(a, b)
    }

    fn widen(&self, a: &D::Value, b: &D::Value) -> D::Value {
        self.base.widen(a, b)
    }

    fn transfer(&self, atom: &Atom, v: &D::Value) -> Option<D::Value> {
        if *atom == self.atom {
            Some((self.replacement)(v))
        } else {
            self.base.transfer(atom, v)
        }
    }

    fn hang(&self, v: &D::Value) -> D::Value {
        self.base.hang(v)
    }

    fn carrier(&self) -> Option<Vec<D::Value>> {
        self.base.carrier()
    }

    fn widening_bound(&self) -> Option<usize> {
        self.base.widening_bound()
    }

    fn parse_value(&self, text: &str) -> Result<D::Value> {
        self.base.parse_value(text)
    }
}
