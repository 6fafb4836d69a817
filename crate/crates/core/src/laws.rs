//! The algebraic laws of the regular operations, checked extensionally, and
//! a counterexample search for the two left-distributivity laws that fail.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::predicate::{Predicate, Universe};
use crate::rel::{angelic, demonic, Relation};
use crate::transformer::{choice, hang, seq, skip, star, Extensional, Transformer};

/// Laws that hold for all monotone transformers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Law {
    SeqAssociative,
    SeqMonotone,
    SkipNeutral,
    ChoiceAssociative,
    ChoiceCommutative,
    RightDistributive,
    ChoiceOrderSplit,
    HangNeutralForChoice,
    HangAbsorbsSeq,
    HangIsTop,
    StarUnfold,
    StarInduction,
}

/// Laws a Kleene algebra would have but predicate transformers lack.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NonLaw {
    /// `a;(b+c) = a;b + a;c`
    LeftDistributive,
    /// `a;0 = 0`
    HangRightAbsorbs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    /// The law is an implication and its premise is false.
    Vacuous,
    Fails,
}

impl Verdict {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Holds
        } else {
            Verdict::Fails
        }
    }
}

impl Law {
    pub const ALL: [Law; 12] = [
        Law::SeqAssociative,
        Law::SeqMonotone,
        Law::SkipNeutral,
        Law::ChoiceAssociative,
        Law::ChoiceCommutative,
        Law::RightDistributive,
        Law::ChoiceOrderSplit,
        Law::HangNeutralForChoice,
        Law::HangAbsorbsSeq,
        Law::HangIsTop,
        Law::StarUnfold,
        Law::StarInduction,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Law::SeqAssociative => "(a;b);c = a;(b;c)",
            Law::SeqMonotone => "a ⊑ a' ∧ b ⊑ b' ⟹ a;b ⊑ a';b'",
            Law::SkipNeutral => "1;a = a = a;1",
            Law::ChoiceAssociative => "(a+b)+c = a+(b+c)",
            Law::ChoiceCommutative => "a+b = b+a",
            Law::RightDistributive => "(a+b);c = a;c + b;c",
            Law::ChoiceOrderSplit => "p ⊑ (a+b);q ⟺ p ⊑ a;q ∧ p ⊑ b;q",
            Law::HangNeutralForChoice => "0+a = a = a+0",
            Law::HangAbsorbsSeq => "0;a = 0",
            Law::HangIsTop => "a ⊑ 0",
            Law::StarUnfold => "a*;q = q + a;a*;q",
            Law::StarInduction => "p ⊑ q + a;p ⟹ p ⊑ a*;q",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Law::SkipNeutral | Law::HangNeutralForChoice | Law::HangAbsorbsSeq | Law::HangIsTop => 1,
            Law::ChoiceCommutative | Law::StarUnfold => 2,
            Law::SeqAssociative
            | Law::ChoiceAssociative
            | Law::RightDistributive
            | Law::StarInduction => 3,
            Law::SeqMonotone | Law::ChoiceOrderSplit => 4,
        }
    }

    /// Evaluate the law on one instance. All arguments must be homogeneous
    /// transformers over one universe.
    pub fn check(self, ext: &Extensional, args: &[Transformer]) -> Result<Verdict> {
        if args.len() != self.arity() {
            return Err(Error::InvalidArgument(format!(
                "law `{}` takes {} arguments",
                self.name(),
                self.arity()
            )));
        }
        let u = args[0].input().clone();
        let top = hang(&u, &u);
        let one = skip(&u);
        let v = match (self, args) {
            (Law::SeqAssociative, [a, b, c]) => Verdict::from_bool(ext.eq(
                &seq(&seq(a, b)?, c)?,
                &seq(a, &seq(b, c)?)?,
            )?),
            (Law::SeqMonotone, [a, b, a2, b2]) => {
                if ext.leq(a, a2)? && ext.leq(b, b2)? {
                    Verdict::from_bool(ext.leq(&seq(a, b)?, &seq(a2, b2)?)?)
                } else {
                    Verdict::Vacuous
                }
            }
            (Law::SkipNeutral, [a]) => Verdict::from_bool(
                ext.eq(&seq(&one, a)?, a)? && ext.eq(&seq(a, &one)?, a)?,
            ),
            (Law::ChoiceAssociative, [a, b, c]) => Verdict::from_bool(ext.eq(
                &choice(&choice(a, b)?, c)?,
                &choice(a, &choice(b, c)?)?,
            )?),
            (Law::ChoiceCommutative, [a, b]) => {
                Verdict::from_bool(ext.eq(&choice(a, b)?, &choice(b, a)?)?)
            }
            (Law::RightDistributive, [a, b, c]) => Verdict::from_bool(ext.eq(
                &seq(&choice(a, b)?, c)?,
                &choice(&seq(a, c)?, &seq(b, c)?)?,
            )?),
            (Law::ChoiceOrderSplit, [p, a, b, q]) => {
                let lhs = ext.leq(p, &seq(&choice(a, b)?, q)?)?;
                let rhs = ext.leq(p, &seq(a, q)?)? && ext.leq(p, &seq(b, q)?)?;
                Verdict::from_bool(lhs == rhs)
            }
            (Law::HangNeutralForChoice, [a]) => Verdict::from_bool(
                ext.eq(&choice(&top, a)?, a)? && ext.eq(&choice(a, &top)?, a)?,
            ),
            (Law::HangAbsorbsSeq, [a]) => Verdict::from_bool(ext.eq(&seq(&top, a)?, &top)?),
            (Law::HangIsTop, [a]) => Verdict::from_bool(ext.leq(a, &top)?),
            (Law::StarUnfold, [a, q]) => {
                let sq = seq(&star(a)?, q)?;
                Verdict::from_bool(ext.eq(&sq, &choice(q, &seq(a, &sq)?)?)?)
            }
            (Law::StarInduction, [a, p, q]) => {
                if ext.leq(p, &choice(q, &seq(a, p)?)?)? {
                    Verdict::from_bool(ext.leq(p, &seq(&star(a)?, q)?)?)
                } else {
                    Verdict::Vacuous
                }
            }
            _ => unreachable!("arity checked above"),
        };
        Ok(v)
    }
}

impl NonLaw {
    pub fn name(self) -> &'static str {
        match self {
            NonLaw::LeftDistributive => "a;(b+c) = a;b + a;c",
            NonLaw::HangRightAbsorbs => "a;0 = 0",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            NonLaw::LeftDistributive => 3,
            NonLaw::HangRightAbsorbs => 1,
        }
    }

    /// Whether the equation holds on this instance.
    pub fn holds_on(self, ext: &Extensional, args: &[Transformer]) -> Result<bool> {
        match (self, args) {
            (NonLaw::LeftDistributive, [a, b, c]) => ext.eq(
                &seq(a, &choice(b, c)?)?,
                &choice(&seq(a, b)?, &seq(a, c)?)?,
            ),
            (NonLaw::HangRightAbsorbs, [a]) => {
                let top = hang(a.input(), a.input());
                ext.eq(&seq(a, &top)?, &top)
            }
            _ => Err(Error::InvalidArgument(format!(
                "`{}` takes {} arguments",
                self.name(),
                self.arity()
            ))),
        }
    }
}

/// Search tuples from `pool` in lexicographic order for an instance on which
/// the equation fails.
pub fn find_counterexample(
    ext: &Extensional,
    law: NonLaw,
    pool: &[Transformer],
) -> Result<Option<Vec<Transformer>>> {
    let k = law.arity();
    let n = pool.len();
    if n == 0 {
        return Ok(None);
    }
    let mut idx = vec![0usize; k];
    loop {
        let args: Vec<Transformer> = idx.iter().map(|&i| pool[i].clone()).collect();
        if !law.holds_on(ext, &args)? {
            return Ok(Some(args));
        }
        let mut pos = k;
        loop {
            if pos == 0 {
                return Ok(None);
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < n {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// Every monotone transformer from `P(input)` to `P(output)`.
///
/// Built by assigning outputs to input predicates in mask order, keeping only
/// assignments above every already-assigned subset. Limited to tiny universes.
pub fn monotone_transformers(input: &Universe, output: &Universe) -> Result<Vec<Transformer>> {
    const LIMIT: u128 = 1 << 20;
    let inputs = 1usize << input.size();
    let outs = 1u128 << output.size();
    if input.size() > 4 || outs.checked_pow(inputs as u32).is_none_or(|c| c > LIMIT) {
        return Err(Error::BudgetExceeded {
            needed: outs.saturating_pow(inputs as u32),
            budget: LIMIT as u64,
        });
    }
    let mut tables = Vec::new();
    let mut current = vec![0u64; inputs];
    fn fill(m: usize, inputs: usize, outs: u64, current: &mut Vec<u64>, tables: &mut Vec<Vec<u64>>) {
        if m == inputs {
            tables.push(current.clone());
            return;
        }
        for v in 0..outs {
            // All immediate subsets of m are already assigned.
            let ok = (0..usize::BITS as usize)
                .filter(|i| m >> i & 1 == 1)
                .all(|i| current[m & !(1 << i)] & !v == 0);
            if ok {
                current[m] = v;
                fill(m + 1, inputs, outs, current, tables);
            }
        }
    }
    fill(0, inputs, outs as u64, &mut current, &mut tables);
    tables
        .into_iter()
        .map(|t| Transformer::table(input, output, |x| Predicate::from_mask(output, t[x.mask() as usize])))
        .collect()
}

/// A random monotone transformer over `u`: an explicit table, a relation
/// lifting, a guard, or a small composite of those.
pub fn random_transformer(rng: &mut impl Rng, u: &Universe, depth: usize) -> Result<Transformer> {
    let leaf = depth == 0 || rng.gen_bool(0.4);
    if leaf {
        return match rng.gen_range(0..6) {
            0 => random_table(rng, u),
            1 => Ok(angelic(&random_relation(rng, u)?)),
            2 => Ok(demonic(&random_relation(rng, u)?)),
            3 => Ok(Transformer::guard(&random_predicate(rng, u, 0.5))),
            4 => Ok(skip(u)),
            _ => {
                if rng.gen_bool(0.5) {
                    Ok(hang(u, u))
                } else {
                    random_table(rng, u)
                }
            }
        };
    }
    let a = random_transformer(rng, u, depth - 1)?;
    match rng.gen_range(0..3) {
        0 => seq(&a, &random_transformer(rng, u, depth - 1)?),
        1 => choice(&a, &random_transformer(rng, u, depth - 1)?),
        _ => star(&a),
    }
}

fn random_predicate(rng: &mut impl Rng, u: &Universe, density: f64) -> Predicate {
    Predicate::from_indices(u, (0..u.size()).filter(|_| rng.gen_bool(density)))
}

fn random_relation(rng: &mut impl Rng, u: &Universe) -> Result<Relation> {
    let density = *[0.15, 0.3, 0.5].choose(rng).unwrap();
    let images = (0..u.size()).map(|_| random_predicate(rng, u, density)).collect();
    Relation::new(u, u, images)
}

/// Upward closure of a sparse random assignment; monotone by construction
/// and generally neither additive nor conjunctive.
fn random_table(rng: &mut impl Rng, u: &Universe) -> Result<Transformer> {
    let n = 1usize << u.size();
    let seeds: Vec<Option<Predicate>> = (0..n)
        .map(|_| rng.gen_bool(0.08).then(|| random_predicate(rng, u, 0.2)))
        .collect();
    Transformer::table(u, u, |x| {
        let m = x.mask() as usize;
        let mut out = Predicate::empty(u);
        for (sub, seed) in seeds.iter().enumerate() {
            if let Some(p) = seed {
                if sub & !m == 0 {
                    out.union_in_place(p);
                }
            }
        }
        out
    })
}

/// Aggregate result of checking one law over many instances.
#[derive(Clone, Debug)]
pub struct LawTally {
    pub law: Law,
    pub cases: usize,
    pub vacuous: usize,
    pub failures: usize,
    pub exhaustive: bool,
}

impl LawTally {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Check `law` over `pool`: exhaustively when `pool.len()^arity ≤ max_cases`,
/// otherwise over `max_cases` sampled tuples. Implicational laws get half of
/// their sampled instances built so the premise holds.
pub fn check_law(
    ext: &Extensional,
    law: Law,
    pool: &[Transformer],
    max_cases: usize,
    rng: &mut impl Rng,
) -> Result<LawTally> {
    let k = law.arity();
    let total = (pool.len() as u128).pow(k as u32);
    let mut tally = LawTally {
        law,
        cases: 0,
        vacuous: 0,
        failures: 0,
        exhaustive: total <= max_cases as u128,
    };
    let record = |v: Verdict, tally: &mut LawTally| {
        tally.cases += 1;
        match v {
            Verdict::Holds => {}
            Verdict::Vacuous => tally.vacuous += 1,
            Verdict::Fails => tally.failures += 1,
        }
    };
    if tally.exhaustive {
        for code in 0..total as usize {
            let args: Vec<Transformer> = (0..k)
                .map(|i| pool[code / pool.len().pow(i as u32) % pool.len()].clone())
                .collect();
            record(law.check(ext, &args)?, &mut tally);
        }
        return Ok(tally);
    }
    for case in 0..max_cases {
        let mut args: Vec<Transformer> =
            (0..k).map(|_| pool.choose(rng).unwrap().clone()).collect();
        if case % 2 == 1 {
            match law {
                Law::SeqMonotone => {
                    args[0] = choice(&args[2], &args[0])?;
                    args[1] = choice(&args[3], &args[1])?;
                }
                Law::StarInduction => {
                    let fixed = seq(&star(&args[0])?, &args[2])?;
                    args[1] = if rng.gen_bool(0.5) {
                        fixed
                    } else {
                        choice(&fixed, &args[1])?
                    };
                }
                _ => {}
            }
        }
        record(law.check(ext, &args)?, &mut tally);
    }
    Ok(tally)
}
