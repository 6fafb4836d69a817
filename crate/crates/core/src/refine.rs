//! Data refinement, pre/post specifications, and the two characterisations
//! of abstract-interpretation soundness as refinements through `⟨γ⟩`.

use std::collections::HashMap;
use std::hash::Hash;

use serde::Serialize;

use crate::absint::{AbstractDomain, Analyzer};
use crate::error::{Error, Result};
use crate::lang::{Language, Term};
use crate::predicate::{Predicate, State, Universe};
use crate::rel::{angelic, demonic, direct_image, inverse_image, Relation, StateFunction};
use crate::transformer::{seq, Extensional, Transformer};

/// A predicate `X` over the abstract side with `ι(a(X)) ⊄ b(ι(X))`, or `None`
/// when `a ⊑_ι b`.
pub fn refinement_witness(
    ext: &Extensional,
    a: &Transformer,
    b: &Transformer,
    iota: &Transformer,
) -> Result<Option<Predicate>> {
    ext.leq_witness(&seq(iota, a)?, &seq(b, iota)?)
}

/// `a ⊑_ι b`, i.e. `ι;a ⊑ b;ι`.
pub fn refines(ext: &Extensional, a: &Transformer, b: &Transformer, iota: &Transformer) -> Result<bool> {
    Ok(refinement_witness(ext, a, b, iota)?.is_none())
}

/// A specification built from a precondition and a postcondition.
#[derive(Clone, Debug)]
pub struct SpecPair {
    pub pre: Predicate,
    pub post: Predicate,
    /// `X ↦ pre ∩ X`
    pub f_pre: Transformer,
    /// `X ↦ ⊤` if `post ⊆ X`, else `∅`
    pub f_post: Transformer,
    /// `f_pre; f_post`
    pub spec: Transformer,
}

pub fn spec(pre: &Predicate, post: &Predicate) -> Result<SpecPair> {
    let u = pre.universe();
    u.ensure_same(post.universe(), "specification")?;
    // f_pre is the angelic lifting of the partial identity on `pre`; f_post
    // the demonic lifting of the constant relation to `post`.
    let restrict = Relation::from_fn(u, u, |i| {
        if pre.contains(i) {
            Predicate::singleton(u, i)
        } else {
            Predicate::empty(u)
        }
    })?;
    let everywhere = Relation::from_fn(u, u, |_| post.clone())?;
    let f_pre = angelic(&restrict);
    let f_post = demonic(&everywhere);
    let spec = seq(&f_pre, &f_post)?;
    Ok(SpecPair {
        pre: pre.clone(),
        post: post.clone(),
        f_pre,
        f_post,
        spec,
    })
}

/// `pre ⊆ wlp(t)(post)`.
pub fn hoare_check(lang: &Language, t: &Term, pre: &Predicate, post: &Predicate) -> Result<bool> {
    let wlp = lang.wlp(t)?;
    lang.universe().ensure_same(pre.universe(), "precondition")?;
    Ok(pre.is_subset(&wlp.apply(post)?))
}

/// `n ↦ -n` on an integer universe closed under negation.
pub fn negation_map(u: &Universe) -> Result<StateFunction> {
    let map = u
        .states()
        .iter()
        .map(|s| match s {
            State::Int(n) => u
                .index_of(&State::Int(-n))
                .ok_or_else(|| Error::UnknownState((-n).to_string())),
            State::Token(t) => Err(Error::InvalidArgument(format!(
                "negation needs integer states, found `{t}`"
            ))),
        })
        .collect::<Result<Vec<_>>>()?;
    StateFunction::new(u, u, map)
}

/// An enumerated carrier reified as a universe of tokens, so that `γ` becomes
/// a relation and abstract maps become state functions.
pub struct Carrier<V> {
    values: Vec<V>,
    index: HashMap<V, usize>,
    universe: Universe,
}

impl<V: Clone + Eq + Hash + std::fmt::Display> Carrier<V> {
    pub fn of<D: AbstractDomain<Value = V>>(dom: &D) -> Result<Self> {
        let values = dom
            .carrier()
            .ok_or_else(|| Error::CarrierNotEnumerable(dom.name()))?;
        let universe = Universe::tokens(values.iter().map(|v| v.to_string()))?;
        let index = values.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
        Ok(Carrier {
            values,
            index,
            universe,
        })
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn values(&self) -> &[V] {
        &self.values
    }

    pub fn index_of(&self, v: &V) -> Result<usize> {
        self.index.get(v).copied().ok_or_else(|| Error::InvalidValue {
            text: v.to_string(),
            reason: "not in the carrier".into(),
        })
    }

    /// `γ` as a relation from the carrier to the concrete universe.
    pub fn gamma_relation<D: AbstractDomain<Value = V>>(&self, dom: &D) -> Result<Relation> {
        Relation::from_fn(&self.universe, dom.language().universe(), |i| {
            dom.gamma(&self.values[i])
        })
    }

    /// Materialise an abstract map as a state function on the carrier.
    pub fn function(&self, mut f: impl FnMut(&V) -> Result<V>) -> Result<StateFunction> {
        let map = self
            .values
            .iter()
            .map(|v| f(v).and_then(|w| self.index_of(&w)))
            .collect::<Result<Vec<_>>>()?;
        StateFunction::new(&self.universe, &self.universe, map)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    /// Which formulation failed: `lhs`, `rhs` or `proof_chain`.
    pub side: String,
    pub value: String,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoremReport {
    pub theorem: String,
    pub domain: String,
    pub term: String,
    pub lhs: bool,
    pub rhs: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub proof_chain: Option<bool>,
    pub agree: bool,
    pub witnesses: Vec<Witness>,
}

/// Forward soundness as refinement:
/// `p♯⁻¹ ⊑_⟨γ⟩ p ⟺ ∀s♯. γ(s♯) ⊆ p(γ(p♯(s♯)))`.
///
/// Both sides are computed independently, together with the intermediate
/// form `p♯⁻¹;[γ] ⊑ [γ];p`, and compared.
pub fn check_theorem1<D: AbstractDomain>(
    ext: &Extensional,
    dom: &D,
    t: &Term,
) -> Result<TheoremReport> {
    let carrier = Carrier::of(dom)?;
    let wlp = dom.language().wlp(t)?;
    let analyzer = Analyzer::new(dom);
    let abstract_map = carrier.function(|s| analyzer.run(t, s))?;
    let gamma = carrier.gamma_relation(dom)?;
    let iota = angelic(&gamma);
    let inv = inverse_image(&abstract_map);
    let vals = carrier.values();
    let mut witnesses = Vec::new();

    let lhs_witness = refinement_witness(ext, &inv, &wlp, &iota)?;
    if let Some(x) = &lhs_witness {
        let allowed = wlp.eval(&iota.eval(x));
        for (i, v) in vals.iter().enumerate() {
            if x.contains(abstract_map.apply(i)) && !dom.gamma(v).is_subset(&allowed) {
                witnesses.push(Witness {
                    side: "lhs".into(),
                    value: v.to_string(),
                    detail: format!("X = {x}: γ({v}) ⊄ p(⟨γ⟩(X)) = {allowed}"),
                });
            }
        }
    }

    let mut rhs = true;
    for (i, v) in vals.iter().enumerate() {
        let out = &vals[abstract_map.apply(i)];
        let guaranteed = wlp.eval(&dom.gamma(out));
        if !dom.gamma(v).is_subset(&guaranteed) {
            rhs = false;
            witnesses.push(Witness {
                side: "rhs".into(),
                value: v.to_string(),
                detail: format!("p♯({v}) = {out}; p(γ({out})) = {guaranteed}"),
            });
        }
    }

    let down = demonic(&gamma);
    let chain_witness = ext.leq_witness(&seq(&inv, &down)?, &seq(&down, &wlp)?)?;
    if let Some(y) = &chain_witness {
        witnesses.push(Witness {
            side: "proof_chain".into(),
            value: y.to_string(),
            detail: "p♯⁻¹([γ](Y)) ⊄ [γ](p(Y))".into(),
        });
    }

    let lhs = lhs_witness.is_none();
    let chain = chain_witness.is_none();
    Ok(TheoremReport {
        theorem: "forward".into(),
        domain: dom.name(),
        term: t.to_string(),
        lhs,
        rhs,
        proof_chain: Some(chain),
        agree: lhs == rhs && rhs == chain,
        witnesses,
    })
}

/// Backward soundness as refinement:
/// `p♯_* ⊑_⟨γ⟩ p ⟺ ∀s♯. γ(p♯(s♯)) ⊆ p(γ(s♯))`, for a candidate backward map.
pub fn check_theorem2<D: AbstractDomain>(
    ext: &Extensional,
    dom: &D,
    t: &Term,
    backward: impl Fn(&D::Value) -> D::Value,
) -> Result<TheoremReport> {
    let carrier = Carrier::of(dom)?;
    let wlp = dom.language().wlp(t)?;
    let map = carrier.function(|s| Ok(backward(s)))?;
    let iota = angelic(&carrier.gamma_relation(dom)?);
    let vals = carrier.values();
    let mut witnesses = Vec::new();

    let lhs_witness = refinement_witness(ext, &direct_image(&map), &wlp, &iota)?;
    if let Some(x) = &lhs_witness {
        witnesses.push(Witness {
            side: "lhs".into(),
            value: x.to_string(),
            detail: "⟨γ⟩(p♯_*(X)) ⊄ p(⟨γ⟩(X))".into(),
        });
    }

    let mut rhs = true;
    for (i, v) in vals.iter().enumerate() {
        let pre = &vals[map.apply(i)];
        let guaranteed = wlp.eval(&dom.gamma(v));
        if !dom.gamma(pre).is_subset(&guaranteed) {
            rhs = false;
            witnesses.push(Witness {
                side: "rhs".into(),
                value: v.to_string(),
                detail: format!("p♯({v}) = {pre}; p(γ({v})) = {guaranteed}"),
            });
        }
    }

    let lhs = lhs_witness.is_none();
    Ok(TheoremReport {
        theorem: "backward".into(),
        domain: dom.name(),
        term: t.to_string(),
        lhs,
        rhs,
        proof_chain: None,
        agree: lhs == rhs,
        witnesses,
    })
}
