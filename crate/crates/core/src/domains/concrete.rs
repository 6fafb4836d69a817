//! The most precise domain: abstract values are predicates themselves.

use std::collections::BTreeMap;

use crate::absint::AbstractDomain;
use crate::error::{Error, Result};
use crate::lang::{Atom, Language};
use crate::predicate::{Predicate, State};

/// Largest universe whose full powerset is used as a carrier.
pub const MAX_CONCRETE_STATES: usize = 12;

#[derive(Clone)]
pub struct ConcreteDomain {
    lang: Language,
    /// Per atom, the forward successors of each state.
    successors: BTreeMap<Atom, Vec<Predicate>>,
}

/// Build the powerset domain. Transfer functions are the strongest forward
/// maps: `s'` is reachable from `s` by `i` unless `s ∈ wlp(i)(U \ {s'})`.
pub fn concrete_domain(lang: &Language) -> Result<ConcreteDomain> {
    let u = lang.universe();
    if u.size() > MAX_CONCRETE_STATES {
        return Err(Error::BudgetExceeded {
            needed: 1u128 << u.size(),
            budget: 1 << MAX_CONCRETE_STATES,
        });
    }
    let mut successors = BTreeMap::new();
    for atom in lang.atoms() {
        let wlp = lang.wlp_atom(&atom)?;
        let avoid: Vec<Predicate> = (0..u.size())
            .map(|j| wlp.eval(&Predicate::singleton(u, j).complement()))
            .collect();
        let succ = (0..u.size())
            .map(|i| Predicate::from_indices(u, (0..u.size()).filter(|&j| !avoid[j].contains(i))))
            .collect();
        successors.insert(atom, succ);
    }
    Ok(ConcreteDomain {
        lang: lang.clone(),
        successors,
    })
}

impl AbstractDomain for ConcreteDomain {
    type Value = Predicate;

    fn name(&self) -> String {
        "concrete".into()
    }

    fn language(&self) -> &Language {
        &self.lang
    }

    fn gamma(&self, v: &Predicate) -> Predicate {
        v.clone()
    }

    fn join(&self, a: &Predicate, b: &Predicate) -> Predicate {
        a.union(b)
    }

    fn widen(&self, a: &Predicate, b: &Predicate) -> Predicate {
        a.union(b)
    }

    fn transfer(&self, atom: &Atom, v: &Predicate) -> Option<Predicate> {
        let succ = self.successors.get(atom)?;
        let mut out = Predicate::empty(self.lang.universe());
        for i in v.indices() {
            out.union_in_place(&succ[i]);
        }
        Some(out)
    }

    fn carrier(&self) -> Option<Vec<Predicate>> {
        Predicate::all(self.lang.universe()).ok().map(Iterator::collect)
    }

    fn widening_bound(&self) -> Option<usize> {
        Some(self.lang.universe().size())
    }

    fn parse_value(&self, text: &str) -> Result<Predicate> {
        let bad = |reason: String| Error::InvalidValue {
            text: text.to_owned(),
            reason,
        };
        let inner = text
            .trim()
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .ok_or_else(|| bad("expected a state set such as {0,1}".into()))?;
        let mut states = Vec::new();
        for item in inner.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let n: i64 = item
                .replace('−', "-")
                .parse()
                .map_err(|_| bad(format!("`{item}` is not an integer")))?;
            states.push(State::Int(n));
        }
        Predicate::from_states(self.lang.universe(), &states).map_err(|e| bad(e.to_string()))
    }
}
