//! Weakest-liberal-precondition semantics, abstract interpretation and
//! data-refinement checking over finite state universes.
//!
//! Programs denote monotone predicate transformers ([`Transformer`]), built
//! from named instructions with the regular operations. An abstract domain
//! ([`AbstractDomain`]) gives a forward analysis of the same programs, and
//! [`refine`] checks that the analysis is sound exactly when it is a data
//! refinement of the program through the concretisation.
//!
//! Every order, equality and law is decided by enumerating predicates, under
//! an explicit evaluation budget ([`Extensional`]).

pub mod absint;
pub mod corpus;
pub mod domains;
mod error;
pub mod lang;
pub mod laws;
pub mod predicate;
pub mod refine;
pub mod rel;
pub mod report;
pub mod transformer;

pub use absint::{analyze, audit_domain, pfp, verify_soundness, AbstractDomain, Analyzer};
pub use error::{Error, Result};
pub use lang::{countdown, example_language, parse, Atom, Language, Term};
pub use predicate::{Predicate, State, Universe};
pub use refine::{check_theorem1, check_theorem2, hoare_check, refines, spec};
pub use rel::{angelic, check_galois, demonic, direct_image, inverse_image, Relation, StateFunction};
pub use transformer::{choice, eq, hang, leq, seq, skip, star, Extensional, Transformer};
