//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use absref::absint::TraceEvent;
use absref::corpus::generate_corpus;
use absref::domains::{
    broken_interval_dec, broken_sign_dec, broken_sign_guard, concrete_domain, interval_domain,
    signs_domain, SignMap, SignSet,
};
use absref::laws::{check_law, find_counterexample, monotone_transformers, random_transformer, Law, NonLaw};
use absref::refine::{negation_map, TheoremReport};
use absref::{
    audit_domain, check_galois, check_theorem1, check_theorem2, countdown, direct_image,
    example_language, hoare_check, inverse_image, refines, spec, verify_soundness,
    Analyzer, Extensional, Relation, StateFunction, Term, Transformer, Universe,
};
use common::{filter, ints};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 2024;
const CORPUS_SIZE: usize = 200;
const CORPUS_DEPTH: usize = 4;
const MIN_LAW_CASES: usize = 500;

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err(e: absref::Error) -> String {
    e.to_string()
}

fn sign_run() -> Outcome {
    let lang = example_language(3).map_err(err)?;
    let dom = signs_domain(&lang).map_err(err)?;
    let start: SignSet = "{0,+}".parse().map_err(err)?;
    let (out, trace) = Analyzer::new(&dom).run_traced(&countdown(), &start).map_err(err)?;
    let steps: Vec<(String, String, String)> = trace
        .events
        .iter()
        .filter_map(|e| match e {
            TraceEvent::Step { atom, input, output } => Some((atom.clone(), input.clone(), output.clone())),
            _ => None,
        })
        .collect();
    let expected = [
        ("guard(pos)", "{0,+}", "{+}"),
        ("dec", "{+}", "{0,+}"),
        ("guard(npos)", "{0,+}", "{0}"),
    ];
    ensure(
        steps.len() == expected.len()
            && steps.iter().zip(expected).all(|(s, e)| s.0 == e.0 && s.1 == e.1 && s.2 == e.2),
        format!("steps {steps:?}"),
    )?;
    let widenings = trace.events.iter().filter(|e| matches!(e, TraceEvent::LoopWiden { .. })).count();
    ensure(widenings == 1, format!("{widenings} widening iterations"))?;
    let stable = trace.events.iter().any(|e| matches!(e, TraceEvent::LoopStable { invariant, .. } if invariant == "{0,+}"));
    ensure(stable, "loop invariant is not {0,+}")?;
    ensure(out.to_string() == "{0}", format!("final state {out}"))?;
    Ok("{0,+} → {+} → {0,+}, invariant {0,+} after 1 iteration, final {0}".into())
}

fn refinement_example() -> Outcome {
    let ext = Extensional::default();
    for n in 1..=6 {
        let lang = example_language(n).map_err(err)?;
        let d = lang.wlp(&countdown()).map_err(err)?;
        let sp = spec(&filter(&lang, |v| v <= 0), &ints(&lang, &[0])).map_err(err)?;
        let iota = direct_image(&negation_map(lang.universe()).map_err(err)?);
        let refined = refines(&ext, &sp.spec, &d, &iota).map_err(err)?;
        let nonneg = filter(&lang, |v| v >= 0);
        let hoare = hoare_check(&lang, &countdown(), &nonneg, &ints(&lang, &[0])).map_err(err)?;
        let wlp = d.apply(&ints(&lang, &[0])).map_err(err)?;
        ensure(refined, format!("N = {n}: refinement fails"))?;
        ensure(hoare, format!("N = {n}: Hoare check fails"))?;
        ensure(wlp == nonneg, format!("N = {n}: wlp(d)({{0}}) = {wlp}"))?;
    }
    Ok("N = 1..6: refinement, Hoare check and wlp(d)({0}) = {n ≥ 0}".into())
}

#[derive(Default)]
struct Agreement {
    instances: usize,
    both_false: usize,
    disagreements: Vec<String>,
}

impl Agreement {
    fn record(&mut self, rep: &TheoremReport) {
        self.instances += 1;
        if !rep.agree {
            self.disagreements.push(format!("{} on {}", rep.domain, rep.term));
        }
        if !rep.lhs && !rep.rhs {
            self.both_false += 1;
        }
    }
}

fn theorem1() -> Outcome {
    let ext = Extensional::default();
    let lang = example_language(3).map_err(err)?;
    let corpus = generate_corpus(SEED, CORPUS_SIZE, CORPUS_DEPTH);
    ensure(corpus.len() == CORPUS_SIZE, "corpus too small")?;
    let signs = signs_domain(&lang).map_err(err)?;
    let conc = concrete_domain(&lang).map_err(err)?;
    let iv = interval_domain(&lang, None).map_err(err)?;
    let m1 = broken_sign_dec(&lang).map_err(err)?;
    let m2 = broken_sign_guard(&lang).map_err(err)?;
    let m3 = broken_interval_dec(&lang).map_err(err)?;
    let mut tally = Agreement::default();
    for t in &corpus {
        tally.record(&check_theorem1(&ext, &signs, t).map_err(err)?);
        tally.record(&check_theorem1(&ext, &conc, t).map_err(err)?);
        tally.record(&check_theorem1(&ext, &iv, t).map_err(err)?);
        tally.record(&check_theorem1(&ext, &m1, t).map_err(err)?);
        tally.record(&check_theorem1(&ext, &m2, t).map_err(err)?);
        tally.record(&check_theorem1(&ext, &m3, t).map_err(err)?);
    }
    ensure(tally.disagreements.is_empty(), format!("disagree: {:?}", tally.disagreements))?;
    ensure(tally.both_false >= 10, format!("only {} instances with both sides false", tally.both_false))?;
    Ok(format!(
        "{} instances agree, {} with both sides false",
        tally.instances, tally.both_false
    ))
}

fn theorem2() -> Outcome {
    let ext = Extensional::default();
    let lang = example_language(3).map_err(err)?;
    let dom = signs_domain(&lang).map_err(err)?;
    let maps: Vec<SignMap> = SignMap::all().collect();
    let mut tally = Agreement::default();
    let mut sound = 0;
    for t in generate_corpus(SEED, 50, CORPUS_DEPTH) {
        for f in &maps {
            let rep = check_theorem2(&ext, &dom, &t, |s| f.apply(*s)).map_err(err)?;
            sound += rep.lhs as usize;
            tally.record(&rep);
        }
    }
    ensure(tally.disagreements.is_empty(), format!("disagree: {:?}", &tally.disagreements[..tally.disagreements.len().min(5)]))?;
    Ok(format!(
        "{} instances agree ({} maps × 50 terms), {} sound",
        tally.instances,
        maps.len(),
        sound
    ))
}

fn law_suite() -> Outcome {
    let ext = Extensional::default();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let two = Universe::int_range(0, 1).map_err(err)?;
    let small_pool = monotone_transformers(&two, &two).map_err(err)?;
    let seven = Universe::int_range(-3, 3).map_err(err)?;
    let big_pool: Vec<Transformer> = (0..40)
        .map(|_| {
            // Tabulated once so that compound law instances evaluate by lookup.
            let t = random_transformer(&mut rng, &seven, 3)?;
            Transformer::table(&seven, &seven, |x| t.apply(x).expect("same universe"))
        })
        .collect::<absref::Result<_>>()
        .map_err(err)?;
    let mut fewest = usize::MAX;
    let mut summary = Vec::new();
    for (label, pool) in [("2-state", &small_pool), ("7-state", &big_pool)] {
        let mut total = 0;
        for law in Law::ALL {
            let tally = check_law(&ext, law, pool, 2000, &mut rng).map_err(err)?;
            ensure(tally.passed(), format!("{} fails on {label}: {tally:?}", law.name()))?;
            ensure(
                tally.exhaustive || tally.cases >= MIN_LAW_CASES,
                format!("{} on {label}: only {} sampled cases", law.name(), tally.cases),
            )?;
            ensure(tally.vacuous < tally.cases, format!("{} on {label}: premise never holds", law.name()))?;
            if !tally.exhaustive {
                fewest = fewest.min(tally.cases);
            }
            total += tally.cases;
        }
        ensure(total >= MIN_LAW_CASES, format!("{label}: only {total} cases"))?;
        summary.push(format!("{label} {total} cases"));
    }
    for non_law in [NonLaw::LeftDistributive, NonLaw::HangRightAbsorbs] {
        let found = find_counterexample(&ext, non_law, &small_pool).map_err(err)?;
        let args = found.ok_or_else(|| format!("no counterexample to {}", non_law.name()))?;
        ensure(!non_law.holds_on(&ext, &args).map_err(err)?, "counterexample does not refute")?;
    }
    Ok(format!(
        "{} laws ({}; sampled laws ≥ {fewest} cases, the rest exhaustive); counterexamples to both non-laws",
        Law::ALL.len(),
        summary.join(", ")
    ))
}

fn galois_suite() -> Outcome {
    let ext = Extensional::default();
    let mut count = 0;
    for (m, n) in [(2, 2), (2, 3)] {
        let a = Universe::int_range(0, m - 1).map_err(err)?;
        let b = Universe::tokens((0..n).map(|i| format!("b{i}"))).map_err(err)?;
        for r in Relation::enumerate(&a, &b).map_err(err)? {
            let rep = check_galois(&ext, &r).map_err(err)?;
            ensure(rep.holds() && rep.consistent(), format!("galois fails: {rep:?}"))?;
            count += 1;
        }
    }
    ensure(count == 16 + 64, format!("{count} relations enumerated"))?;

    // Lattice-level adjunctions on seeded transformer pairs.
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let u = Universe::int_range(-1, 1).map_err(err)?;
    let mut laws = 0;
    for _ in 0..200 {
        let p = random_transformer(&mut rng, &u, 2).map_err(err)?;
        let q = random_transformer(&mut rng, &u, 2).map_err(err)?;
        let st = random_transformer(&mut rng, &u, 1).map_err(err)?;
        let r = Relation::from_additive(&absref::seq(&absref::angelic(&Relation::identity(&u)), &st).map_err(err)?);
        let code = laws % 27;
        let f = StateFunction::from_fn(&u, &u, |i| code / 3usize.pow(i as u32) % 3).map_err(err)?;
        let pairs = [
            (absref::angelic(&r), absref::demonic(&r)),
            (direct_image(&f), inverse_image(&f)),
        ];
        for (lower, upper) in &pairs {
            let a1 = ext.leq(&absref::seq(lower, &p).map_err(err)?, &q).map_err(err)?;
            let b1 = ext.leq(&p, &absref::seq(upper, &q).map_err(err)?).map_err(err)?;
            let a2 = ext.leq(&absref::seq(&p, upper).map_err(err)?, &q).map_err(err)?;
            let b2 = ext.leq(&p, &absref::seq(&q, lower).map_err(err)?).map_err(err)?;
            ensure(a1 == b1 && a2 == b2, "adjunction law fails")?;
        }
        laws += 1;
    }
    Ok(format!("{count} relations by enumeration; 4 adjunction laws on {laws} seeded instances"))
}

fn audits() -> Outcome {
    for n in 1..=3 {
        let lang = example_language(n).map_err(err)?;
        let signs = audit_domain(&signs_domain(&lang).map_err(err)?).map_err(err)?;
        ensure(signs.is_clean(), format!("signs N = {n}: {:?}", signs.findings))?;
        let conc = audit_domain(&concrete_domain(&lang).map_err(err)?).map_err(err)?;
        ensure(conc.is_clean(), format!("concrete N = {n}: {:?}", conc.findings))?;
    }
    let lang = example_language(3).map_err(err)?;
    let iv = interval_domain(&lang, None).map_err(err)?;
    let rep = audit_domain(&iv).map_err(err)?;
    ensure(rep.is_clean(), format!("interval: {:?}", rep.findings))?;
    let steps = rep.widening_steps.ok_or("no widening measurement")?;
    let bound = iv.thresholds().len() + 1;
    ensure(steps <= bound, format!("widening needs {steps} > {bound} steps"))?;
    Ok(format!(
        "signs and concrete clean for N = 1..3, interval clean; widened chains stabilise within {steps} ≤ {bound} steps"
    ))
}

fn soundness() -> Outcome {
    let lang = example_language(3).map_err(err)?;
    let signs = signs_domain(&lang).map_err(err)?;
    let iv = interval_domain(&lang, None).map_err(err)?;
    let corpus = generate_corpus(SEED, CORPUS_SIZE, CORPUS_DEPTH);
    for t in &corpus {
        let a = verify_soundness(&signs, t).map_err(err)?;
        ensure(a.is_clean(), format!("signs unsound on {t}: {:?}", a.findings))?;
        let b = verify_soundness(&iv, t).map_err(err)?;
        ensure(b.is_clean(), format!("interval unsound on {t}: {:?}", b.findings))?;
    }
    let broken = broken_sign_dec(&lang).map_err(err)?;
    let rep = verify_soundness(&broken, &Term::instr("dec")).map_err(err)?;
    ensure(
        rep.findings.iter().any(|f| f.witness == "{+}"),
        format!("broken dec not caught at {{+}}: {:?}", rep.findings),
    )?;
    Ok(format!("{} terms sound for signs and interval; broken dec caught at {{+}}", corpus.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("sign-domain worked run", Duration::from_secs(1), sign_run),
        ("refinement example", Duration::from_secs(1), refinement_example),
        ("forward soundness biconditional", Duration::from_secs(60), theorem1),
        ("backward soundness biconditional", Duration::from_secs(60), theorem2),
        ("law suite", Duration::from_secs(30), law_suite),
        ("Galois suite", Duration::from_secs(30), galois_suite),
        ("domain audits", Duration::from_secs(10), audits),
        ("soundness property", Duration::from_secs(30), soundness),
    ];
    let mut failed = 0;
    for (i, (name, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|msg| {
            if elapsed <= *limit {
                Ok(msg)
            } else {
                Err(format!("took {elapsed:.2?}, limit {limit:?}"))
            }
        });
        match outcome {
            Ok(msg) => println!("PASS {} {name} ({elapsed:.2?}): {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {} {name} ({elapsed:.2?}): {msg}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
