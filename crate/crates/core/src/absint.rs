//! The abstract-domain contract and the forward abstract interpreter.
//!
//! The abstract semantics of a term is defined by induction on its syntax:
//! sequence composes forward (`(a;b)♯ = b♯ ∘ a♯`), choice joins, skip is the
//! identity, hang returns its input, and iteration takes the widening-based
//! post-fixed point of the body.

use std::collections::HashMap;
use std::fmt::{Debug, Display};
use std::hash::Hash;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lang::{Atom, Language, Term};
use crate::predicate::Predicate;
use crate::report::Finding;

pub const DEFAULT_ITERATION_CAP: usize = 1000;

/// An abstract domain over the states of a [`Language`].
pub trait AbstractDomain {
    type Value: Clone + Eq + Hash + Debug + Display;

    fn name(&self) -> String;

    fn language(&self) -> &Language;

    /// Concretisation into predicates over the language's universe.
    fn gamma(&self, v: &Self::Value) -> Predicate;

    /// The order induced by concretisation. Domains may override this with a
    /// direct comparison; audits check the two agree.
    fn leq(&self, a: &Self::Value, b: &Self::Value) -> bool {
        self.gamma(a).is_subset(&self.gamma(b))
    }

    fn join(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;

    fn widen(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;

    /// Forward transfer function of an instruction or guard; `None` when the
    /// domain has none for `atom`.
    fn transfer(&self, atom: &Atom, v: &Self::Value) -> Option<Self::Value>;

    /// The result of `0♯`, which may be chosen freely; returns the input.
    fn hang(&self, v: &Self::Value) -> Self::Value {
        v.clone()
    }

    /// Every abstract value, when the carrier is small enough to enumerate.
    fn carrier(&self) -> Option<Vec<Self::Value>>;

    /// Claimed bound on the index `n` at which widened chains first satisfy
    /// `y_{n+1} ≤ y_n`.
    fn widening_bound(&self) -> Option<usize> {
        None
    }

    fn parse_value(&self, text: &str) -> Result<Self::Value>;
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum TraceEvent {
    Step {
        atom: String,
        input: String,
        output: String,
    },
    LoopEnter {
        body: String,
        input: String,
    },
    /// One widening step: `y_{n} = y_{n-1} ∇ x_{n}`.
    LoopWiden {
        n: usize,
        previous: String,
        next_input: String,
        widened: String,
    },
    LoopStable {
        iterations: usize,
        invariant: String,
    },
}

/// Events recorded while analysing a term, in evaluation order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AnalysisTrace {
    pub events: Vec<TraceEvent>,
}

impl AnalysisTrace {
    /// Numbered, human-readable lines.
    pub fn lines(&self) -> Vec<String> {
        let mut out = Vec::new();
        for e in &self.events {
            out.push(match e {
                TraceEvent::LoopEnter { body, input } => {
                    format!("entering loop ({body})* with state {input}")
                }
                TraceEvent::Step { atom, input, output } => {
                    format!("applying {atom}♯ to {input}: state becomes {output}")
                }
                TraceEvent::LoopWiden {
                    n,
                    previous,
                    next_input,
                    widened,
                } => format!("iteration {n}: {previous} ∇ {next_input} = {widened}"),
                TraceEvent::LoopStable {
                    iterations,
                    invariant,
                } => format!("invariant {invariant} found after {iterations} iteration(s)"),
            });
        }
        out.into_iter()
            .enumerate()
            .map(|(i, l)| format!("{}. {l}", i + 1))
            .collect()
    }
}

/// Result of a post-fixed-point computation: the answer `y_n` and every
/// `y_0, …, y_{n+1}` computed on the way.
#[derive(Clone, Debug)]
pub struct PfpRun<V> {
    pub result: V,
    pub chain: Vec<V>,
}

/// Post-fixed point of `f` above `s`: `x_0 = s`, `y_0 = x_0`,
/// `x_{n+1} = f(y_n)`, `y_{n+1} = y_n ∇ x_{n+1}`, stopping at the first `n`
/// with `y_{n+1} ≤ y_n` and returning `y_n`.
pub fn pfp<D: AbstractDomain>(
    dom: &D,
    mut f: impl FnMut(&D::Value) -> Result<D::Value>,
    s: &D::Value,
    cap: usize,
) -> Result<PfpRun<D::Value>> {
    let mut chain = vec![s.clone()];
    let mut y = s.clone();
    for _ in 0..cap {
        let x = f(&y)?;
        let next = dom.widen(&y, &x);
        chain.push(next.clone());
        if dom.leq(&next, &y) {
            return Ok(PfpRun { result: y, chain });
        }
        y = next;
    }
    Err(Error::WideningDivergence {
        domain: dom.name(),
        cap,
    })
}

/// Forward abstract interpreter for terms over a domain.
pub struct Analyzer<'d, D> {
    dom: &'d D,
    cap: usize,
}

impl<'d, D: AbstractDomain> Analyzer<'d, D> {
    pub fn new(dom: &'d D) -> Self {
        Analyzer {
            dom,
            cap: DEFAULT_ITERATION_CAP,
        }
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    pub fn run(&self, t: &Term, s: &D::Value) -> Result<D::Value> {
        self.eval(t, s, &mut None)
    }

    pub fn run_traced(&self, t: &Term, s: &D::Value) -> Result<(D::Value, AnalysisTrace)> {
        let mut trace = Some(AnalysisTrace::default());
        let v = self.eval(t, s, &mut trace)?;
        Ok((v, trace.unwrap_or_default()))
    }

    fn eval(
        &self,
        t: &Term,
        s: &D::Value,
        trace: &mut Option<AnalysisTrace>,
    ) -> Result<D::Value> {
        let dom = self.dom;
        match t {
            Term::Instr(_) | Term::Guard(_) => {
                let atom = t.atom().expect("leaf term");
                let out = dom.transfer(&atom, s).ok_or_else(|| Error::MissingTransfer {
                    domain: dom.name(),
                    atom: atom.to_string(),
                })?;
                if let Some(tr) = trace {
                    tr.events.push(TraceEvent::Step {
                        atom: atom.to_string(),
                        input: s.to_string(),
                        output: out.to_string(),
                    });
                }
                Ok(out)
            }
            Term::Seq(a, b) => {
                let mid = self.eval(a, s, trace)?;
                self.eval(b, &mid, trace)
            }
            Term::Choice(a, b) => {
                let l = self.eval(a, s, trace)?;
                let r = self.eval(b, s, trace)?;
                Ok(dom.join(&l, &r))
            }
            Term::Skip => Ok(s.clone()),
            Term::Hang => Ok(dom.hang(s)),
            Term::Star(body) => {
                if let Some(tr) = trace {
                    tr.events.push(TraceEvent::LoopEnter {
                        body: body.to_string(),
                        input: s.to_string(),
                    });
                }
                let mut n = 0;
                let run = pfp(
                    dom,
                    |y| {
                        n += 1;
                        let x = self.eval(body, y, trace)?;
                        if let Some(tr) = trace {
                            tr.events.push(TraceEvent::LoopWiden {
                                n,
                                previous: y.to_string(),
                                next_input: x.to_string(),
                                widened: dom.widen(y, &x).to_string(),
                            });
                        }
                        Ok(x)
                    },
                    s,
                    self.cap,
                )?;
                if let Some(tr) = trace {
                    tr.events.push(TraceEvent::LoopStable {
                        iterations: run.chain.len() - 1,
                        invariant: run.result.to_string(),
                    });
                }
                Ok(run.result)
            }
        }
    }
}

/// `t♯(s)` with the default iteration cap.
pub fn analyze<D: AbstractDomain>(dom: &D, t: &Term, s: &D::Value) -> Result<D::Value> {
    Analyzer::new(dom).run(t, s)
}

/// Findings of a soundness or audit run.
#[derive(Clone, Debug, Serialize)]
pub struct DomainReport {
    pub domain: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub term: Option<String>,
    /// For audits: the largest widening index observed over all chains.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub widening_steps: Option<usize>,
    pub findings: Vec<Finding>,
}

impl DomainReport {
    pub fn is_clean(&self) -> bool {
        self.findings.is_empty()
    }
}

fn carrier_of<D: AbstractDomain>(dom: &D) -> Result<Vec<D::Value>> {
    dom.carrier()
        .ok_or_else(|| Error::CarrierNotEnumerable(dom.name()))
}

/// Checks `γ(s♯) ⊆ wlp(t)(γ(t♯(s♯)))` for every abstract value.
pub fn verify_soundness<D: AbstractDomain>(dom: &D, t: &Term) -> Result<DomainReport> {
    let wlp = dom.language().wlp(t)?;
    let analyzer = Analyzer::new(dom);
    let mut findings = Vec::new();
    for s in carrier_of(dom)? {
        let out = analyzer.run(t, &s)?;
        let required = dom.gamma(&s);
        let guaranteed = wlp.eval(&dom.gamma(&out));
        if !required.is_subset(&guaranteed) {
            findings.push(Finding::new(
                "soundness",
                s.to_string(),
                format!("γ(s♯) = {required} ⊆ wlp(t)(γ(t♯(s♯)))"),
                format!("t♯(s♯) = {out}, wlp(t)(γ(t♯(s♯))) = {guaranteed}"),
            ));
        }
    }
    Ok(DomainReport {
        domain: dom.name(),
        term: Some(t.to_string()),
        widening_steps: None,
        findings,
    })
}

/// Enumerated check of every domain axiom: order/concretisation agreement,
/// join and widening upper bounds, carrier closure, widening stabilisation
/// against the declared bound, and per-atom transfer soundness.
pub fn audit_domain<D: AbstractDomain>(dom: &D) -> Result<DomainReport> {
    let carrier = carrier_of(dom)?;
    let n = carrier.len();
    let index: HashMap<&D::Value, usize> = carrier.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let gammas: Vec<Predicate> = carrier.iter().map(|v| dom.gamma(v)).collect();
    let mut findings = Vec::new();

    let mut below = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            let by_gamma = gammas[i].is_subset(&gammas[j]);
            below[i][j] = by_gamma;
            if dom.leq(&carrier[i], &carrier[j]) != by_gamma {
                findings.push(Finding::new(
                    "order agrees with concretisation",
                    format!("({}, {})", carrier[i], carrier[j]),
                    by_gamma.to_string(),
                    (!by_gamma).to_string(),
                ));
            }
        }
    }

    let mut widened = vec![vec![None; n]; n];
    for i in 0..n {
        for j in 0..n {
            let (s, t) = (&carrier[i], &carrier[j]);
            for (op, v) in [("join", dom.join(s, t)), ("widening", dom.widen(s, t))] {
                let g = dom.gamma(&v);
                for (side, arg) in [("left", i), ("right", j)] {
                    if !gammas[arg].is_subset(&g) {
                        findings.push(Finding::new(
                            &format!("{op} upper bound ({side})"),
                            format!("({s}, {t})"),
                            format!("{} ≤ {v}", carrier[arg]),
                            format!("γ({v}) = {g}"),
                        ));
                    }
                }
                match index.get(&v) {
                    Some(&k) if op == "widening" => widened[i][j] = Some(k),
                    Some(_) => {}
                    None => findings.push(Finding::new(
                        &format!("{op} stays in carrier"),
                        format!("({s}, {t})"),
                        "a carrier value".into(),
                        v.to_string(),
                    )),
                }
            }
        }
    }

    let widening_steps = if findings.is_empty() {
        match longest_widening_chain(&below, &widened) {
            Some(steps) => {
                if let Some(bound) = dom.widening_bound() {
                    if steps > bound {
                        findings.push(Finding::new(
                            "widening stabilisation bound",
                            dom.name(),
                            format!("n ≤ {bound}"),
                            format!("n = {steps}"),
                        ));
                    }
                }
                Some(steps)
            }
            None => {
                findings.push(Finding::new(
                    "widening stabilisation",
                    dom.name(),
                    "every widened increasing chain stabilises".into(),
                    "a widened chain cycles without satisfying y_{n+1} ≤ y_n".into(),
                ));
                None
            }
        }
    } else {
        None
    };

    let lang = dom.language();
    for atom in lang.atoms() {
        let wlp = lang.wlp_atom(&atom)?;
        for (s, g) in carrier.iter().zip(&gammas) {
            match dom.transfer(&atom, s) {
                None => {
                    findings.push(Finding::new(
                        "transfer function present",
                        atom.to_string(),
                        "a transfer function".into(),
                        "none".into(),
                    ));
                    break;
                }
                Some(out) => {
                    let guaranteed = wlp.eval(&dom.gamma(&out));
                    if !g.is_subset(&guaranteed) {
                        findings.push(Finding::new(
                            &format!("transfer soundness of {atom}"),
                            s.to_string(),
                            format!("{g} ⊆ wlp({atom})(γ({out}))"),
                            guaranteed.to_string(),
                        ));
                    }
                }
            }
        }
    }

    Ok(DomainReport {
        domain: dom.name(),
        term: None,
        widening_steps,
        findings,
    })
}

/// The largest `n` such that some increasing chain `x_0 ≤ x_1 ≤ …` gives
/// `y_0 < y_1 < … < y_n` before the first `y_{n+1} ≤ y_n`. `None` if some
/// chain revisits a `(y, x)` state without stabilising.
///
/// The future of a widened chain depends only on the current `(y_n, x_n)`,
/// so the maximum is computed by memoised search over such pairs.
fn longest_widening_chain(below: &[Vec<bool>], widened: &[Vec<Option<usize>>]) -> Option<usize> {
    #[derive(Clone, Copy)]
    enum Mark {
        Fresh,
        Active,
        Done(usize),
    }
    let n = below.len();
    let mut memo = vec![Mark::Fresh; n * n];
    fn visit(
        y: usize,
        x: usize,
        below: &[Vec<bool>],
        widened: &[Vec<Option<usize>>],
        memo: &mut [Mark],
    ) -> Option<usize> {
        let n = below.len();
        match memo[y * n + x] {
            Mark::Done(v) => return Some(v),
            Mark::Active => return None,
            Mark::Fresh => {}
        }
        memo[y * n + x] = Mark::Active;
        let mut best = 0;
        for next in (0..n).filter(|&k| below[x][k]) {
            let w = widened[y][next]?;
            if !below[w][y] {
                best = best.max(1 + visit(w, next, below, widened, memo)?);
            }
        }
        memo[y * n + x] = Mark::Done(best);
        Some(best)
    }
    let mut best = 0;
    for x0 in 0..n {
        best = best.max(visit(x0, x0, below, widened, &mut memo)?);
    }
    Some(best)
}
