//! Relations as state-to-predicate maps, their angelic and demonic liftings,
//! and direct/inverse images of state functions.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::predicate::{Predicate, Universe};
use crate::transformer::{Extensional, Transformer};

/// A relation `A → P(B)`, stored as one image predicate per source state.
#[derive(Clone)]
pub struct Relation {
    source: Universe,
    target: Universe,
    images: Arc<Vec<Predicate>>,
}

impl Relation {
    pub fn new(source: &Universe, target: &Universe, images: Vec<Predicate>) -> Result<Self> {
        if images.len() != source.size() {
            return Err(Error::InvalidArgument(format!(
                "relation needs {} images, got {}",
                source.size(),
                images.len()
            )));
        }
        for img in &images {
            target.ensure_same(img.universe(), "relation image")?;
        }
        Ok(Relation {
            source: source.clone(),
            target: target.clone(),
            images: Arc::new(images),
        })
    }

    pub fn from_fn(
        source: &Universe,
        target: &Universe,
        f: impl Fn(usize) -> Predicate,
    ) -> Result<Self> {
        Relation::new(source, target, (0..source.size()).map(f).collect())
    }

    pub fn identity(universe: &Universe) -> Self {
        Relation {
            source: universe.clone(),
            target: universe.clone(),
            images: Arc::new(
                (0..universe.size())
                    .map(|i| Predicate::singleton(universe, i))
                    .collect(),
            ),
        }
    }

    /// Recover the relation behind a join-preserving transformer from its
    /// action on singletons.
    pub fn from_additive(t: &Transformer) -> Relation {
        let images = (0..t.input().size())
            .map(|i| t.eval(&Predicate::singleton(t.input(), i)))
            .collect();
        Relation {
            source: t.input().clone(),
            target: t.output().clone(),
            images: Arc::new(images),
        }
    }

    pub fn source(&self) -> &Universe {
        &self.source
    }

    pub fn target(&self) -> &Universe {
        &self.target
    }

    pub fn image(&self, i: usize) -> &Predicate {
        &self.images[i]
    }

    /// Every source state relates to exactly one target state.
    pub fn is_functional(&self) -> bool {
        self.images.iter().all(|img| img.len() == 1)
    }

    /// Every relation between two universes, for small universes only.
    pub fn enumerate(source: &Universe, target: &Universe) -> Result<Vec<Relation>> {
        let per_state = 1u128 << target.size();
        let count = per_state.checked_pow(source.size() as u32).unwrap_or(u128::MAX);
        if count > 1 << 20 {
            return Err(Error::BudgetExceeded {
                needed: count,
                budget: 1 << 20,
            });
        }
        let per_state = per_state as u64;
        Ok((0..count as u64)
            .map(|code| {
                let images = (0..source.size())
                    .map(|i| Predicate::from_mask(target, code / per_state.pow(i as u32) % per_state))
                    .collect();
                Relation {
                    source: source.clone(),
                    target: target.clone(),
                    images: Arc::new(images),
                }
            })
            .collect())
    }
}

/// A total function between universes, identified with its graph.
#[derive(Clone)]
pub struct StateFunction {
    source: Universe,
    target: Universe,
    map: Arc<Vec<usize>>,
}

impl StateFunction {
    pub fn new(source: &Universe, target: &Universe, map: Vec<usize>) -> Result<Self> {
        if map.len() != source.size() {
            return Err(Error::InvalidArgument(format!(
                "state function needs {} entries, got {}",
                source.size(),
                map.len()
            )));
        }
        if let Some(&bad) = map.iter().find(|&&j| j >= target.size()) {
            return Err(Error::InvalidArgument(format!(
                "state function lands outside its target (index {bad})"
            )));
        }
        Ok(StateFunction {
            source: source.clone(),
            target: target.clone(),
            map: Arc::new(map),
        })
    }

    pub fn from_fn(
        source: &Universe,
        target: &Universe,
        f: impl Fn(usize) -> usize,
    ) -> Result<Self> {
        StateFunction::new(source, target, (0..source.size()).map(f).collect())
    }

    pub fn identity(universe: &Universe) -> Self {
        StateFunction {
            source: universe.clone(),
            target: universe.clone(),
            map: Arc::new((0..universe.size()).collect()),
        }
    }

    pub fn source(&self) -> &Universe {
        &self.source
    }

    pub fn target(&self) -> &Universe {
        &self.target
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn graph(&self) -> Relation {
        Relation {
            source: self.source.clone(),
            target: self.target.clone(),
            images: Arc::new(
                self.map
                    .iter()
                    .map(|&j| Predicate::singleton(&self.target, j))
                    .collect(),
            ),
        }
    }
}

/// `⟨r⟩(X) = ⋃_{x ∈ X} r(x)`, a transformer `P(A) → P(B)`.
pub fn angelic(r: &Relation) -> Transformer {
    Transformer::angelic(r)
}

/// `[r](Y) = {x | r(x) ⊆ Y}`, a transformer `P(B) → P(A)`.
pub fn demonic(r: &Relation) -> Transformer {
    Transformer::demonic(r)
}

/// `f_*`, the direct image.
pub fn direct_image(f: &StateFunction) -> Transformer {
    angelic(&f.graph())
}

/// `f⁻¹`, the inverse image: `x ∈ f⁻¹(X) ⟺ f(x) ∈ X`.
pub fn inverse_image(f: &StateFunction) -> Transformer {
    demonic(&f.graph())
}

/// Outcome of [`check_galois`]: the adjunction and its unit/counit forms.
#[derive(Clone, Debug, Default)]
pub struct GaloisReport {
    /// `⟨r⟩(X) ⊆ Y ⟺ X ⊆ [r](Y)` for all `X`, `Y`.
    pub adjunction: bool,
    /// `X ⊆ [r](⟨r⟩(X))` for all `X`.
    pub unit: bool,
    /// `⟨r⟩([r](Y)) ⊆ Y` for all `Y`.
    pub counit: bool,
    /// First failing `(X, Y)` pair of the adjunction, if any.
    pub witness: Option<(Predicate, Predicate)>,
}

impl GaloisReport {
    pub fn holds(&self) -> bool {
        self.adjunction && self.unit && self.counit
    }

    /// The three formulations must agree regardless of the relation.
    pub fn consistent(&self) -> bool {
        self.adjunction == self.unit && self.unit == self.counit
    }
}

/// Verify by enumeration that `⟨r⟩` and `[r]` form a Galois connection.
pub fn check_galois(ext: &Extensional, r: &Relation) -> Result<GaloisReport> {
    let up = angelic(r);
    let down = demonic(r);
    let xs: Vec<Predicate> = ext.predicates(r.source())?.collect();
    let ys: Vec<Predicate> = ext.predicates(r.target())?.collect();
    let mut report = GaloisReport {
        adjunction: true,
        unit: true,
        counit: true,
        witness: None,
    };
    let ups: Vec<Predicate> = xs.iter().map(|x| up.eval(x)).collect();
    let downs: Vec<Predicate> = ys.iter().map(|y| down.eval(y)).collect();
    'outer: for (x, ux) in xs.iter().zip(&ups) {
        for (y, dy) in ys.iter().zip(&downs) {
            if ux.is_subset(y) != x.is_subset(dy) {
                report.adjunction = false;
                report.witness = Some((x.clone(), y.clone()));
                break 'outer;
            }
        }
    }
    report.unit = xs.iter().zip(&ups).all(|(x, ux)| x.is_subset(&down.eval(ux)));
    report.counit = ys.iter().zip(&downs).all(|(y, dy)| up.eval(dy).is_subset(y));
    Ok(report)
}
