use std::fmt::Display;
use std::path::PathBuf;
use std::process::ExitCode;

use absref::absint::{AnalysisTrace, DomainReport};
use absref::corpus::generate_corpus;
use absref::domains::{
    broken_interval_dec, broken_sign_dec, broken_sign_guard, concrete_domain, interval_domain,
    signs_domain, SignMap, SignSet, DOMAIN_NAMES,
};
use absref::laws::{check_law, find_counterexample, monotone_transformers, random_transformer, Law, NonLaw};
use absref::refine::{negation_map, TheoremReport};
use absref::transformer::DEFAULT_BUDGET;
use absref::{
    angelic, audit_domain, check_galois, check_theorem1, check_theorem2, countdown, demonic,
    direct_image, example_language, hoare_check, inverse_image, refines, seq, spec,
    verify_soundness, AbstractDomain, Analyzer, Extensional, Language, Predicate, Relation, State,
    StateFunction, Term, Transformer, Universe,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

const MUTANT_NAMES: [&str; 3] = ["signs-broken-dec", "signs-broken-guard", "interval-broken-dec"];
const CORPUS_SIZE: usize = 200;
const CORPUS_DEPTH: usize = 4;
const BACKWARD_TERMS: usize = 50;
const LAW_CASES: usize = 2000;

#[derive(Parser)]
#[command(name = "absref", version, about = "Predicate-transformer semantics, abstract interpretation and refinement checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the forward abstract interpreter on a program.
    Analyze(Opts),
    /// Check the regular-operation laws and search for counterexamples to the non-laws.
    CheckLaws(Opts),
    /// Check the Galois connection between angelic and demonic liftings.
    CheckGalois(Opts),
    /// Audit a domain and verify soundness of its analysis on a program or the corpus.
    CheckSoundness(Opts),
    /// Check soundness-as-refinement in both directions on a program or the corpus.
    CheckTheorems(Opts),
    /// Reproduce the worked examples.
    Demo(Opts),
}

#[derive(Args, Clone)]
struct Opts {
    /// signs, concrete, interval, or one of the deliberately broken variants
    #[arg(long)]
    domain: Option<String>,
    /// Abstract input value, e.g. "{0,+}", "[0,3]" or "{-1,2}"
    #[arg(long)]
    input: Option<String>,
    /// Program text
    #[arg(long, conflicts_with = "program_file")]
    program: Option<String>,
    #[arg(long)]
    program_file: Option<PathBuf>,
    /// States range over [-N, N]
    #[arg(short = 'N', long = "universe-bound", default_value_t = 3)]
    universe_bound: i64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, default_value_t = 2024)]
    seed: u64,
    /// Maximum number of predicates an extensional comparison may enumerate
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Suppress analysis traces
    #[arg(long)]
    quiet: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// Usage problems exit with status 2.
struct Usage(String);

impl<E: Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

type Run<T> = Result<T, Usage>;

struct Output {
    ok: bool,
    text: Vec<String>,
    json: Value,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (opts, run): (&Opts, fn(&Opts) -> Run<Output>) = match &cli.command {
        Command::Analyze(o) => (o, cmd_analyze),
        Command::CheckLaws(o) => (o, cmd_laws),
        Command::CheckGalois(o) => (o, cmd_galois),
        Command::CheckSoundness(o) => (o, cmd_soundness),
        Command::CheckTheorems(o) => (o, cmd_theorems),
        Command::Demo(o) => (o, cmd_demo),
    };
    match run(opts) {
        Ok(out) => {
            match opts.format {
                Format::Text => out.text.iter().for_each(|l| println!("{l}")),
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&out.json).expect("reports serialise")
                ),
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

/// Calls the generic function `$f(&domain, args...)` for the named domain.
macro_rules! with_domain {
    ($name:expr, $lang:expr, $f:ident($($arg:expr),*)) => {{
        let lang: &Language = $lang;
        match $name {
            "signs" => $f(&signs_domain(lang)?, $($arg),*),
            "concrete" => $f(&concrete_domain(lang)?, $($arg),*),
            "interval" => $f(&interval_domain(lang, None)?, $($arg),*),
            "signs-broken-dec" => $f(&broken_sign_dec(lang)?, $($arg),*),
            "signs-broken-guard" => $f(&broken_sign_guard(lang)?, $($arg),*),
            "interval-broken-dec" => $f(&broken_interval_dec(lang)?, $($arg),*),
            other => Err(Usage(format!(
                "unknown domain `{other}`; expected one of {}",
                DOMAIN_NAMES.iter().chain(&MUTANT_NAMES).copied().collect::<Vec<_>>().join(", ")
            ))),
        }
    }};
}

fn language(opts: &Opts) -> Run<Language> {
    Ok(example_language(opts.universe_bound)?)
}

fn domain_name(opts: &Opts) -> &str {
    opts.domain.as_deref().unwrap_or("signs")
}

fn program(opts: &Opts, lang: &Language) -> Run<Option<Term>> {
    let text = match (&opts.program, &opts.program_file) {
        (Some(text), _) => text.clone(),
        (None, Some(path)) => std::fs::read_to_string(path)
            .map_err(|e| Usage(format!("cannot read {}: {e}", path.display())))?,
        (None, None) => return Ok(None),
    };
    Ok(Some(lang.parse(&text)?))
}

fn terms(opts: &Opts, lang: &Language, count: usize) -> Run<Vec<Term>> {
    Ok(match program(opts, lang)? {
        Some(t) => vec![t],
        None => generate_corpus(opts.seed, count, CORPUS_DEPTH),
    })
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn cmd_analyze(opts: &Opts) -> Run<Output> {
    let lang = language(opts)?;
    let t = program(opts, &lang)?.ok_or_else(|| Usage("analyze needs --program or --program-file".into()))?;
    with_domain!(domain_name(opts), &lang, analyze_with(opts, &t))
}

fn analyze_with<D: AbstractDomain>(dom: &D, opts: &Opts, t: &Term) -> Run<Output> {
    let input = match &opts.input {
        Some(text) => dom.parse_value(text)?,
        None => {
            let top = Predicate::full(dom.language().universe());
            dom.carrier()
                .and_then(|c| c.into_iter().find(|v| dom.gamma(v) == top))
                .ok_or_else(|| Usage("analyze needs --input".into()))?
        }
    };
    let (result, trace): (D::Value, AnalysisTrace) = Analyzer::new(dom).run_traced(t, &input)?;
    let note = dom.language().boundary_note(&dom.gamma(&result));
    let mut text = if opts.quiet { Vec::new() } else { trace.lines() };
    text.extend(note.clone());
    text.push(result.to_string());
    let json = json!({
        "domain": dom.name(),
        "term": t.to_string(),
        "input": input.to_string(),
        "result": result.to_string(),
        "trace": if opts.quiet { Value::Null } else { serde_json::to_value(&trace)? },
        "note": note,
    });
    Ok(Output { ok: true, text, json })
}

#[derive(Serialize)]
struct LawLine {
    law: String,
    universe: String,
    cases: usize,
    vacuous: usize,
    failures: usize,
    exhaustive: bool,
}

fn cmd_laws(opts: &Opts) -> Run<Output> {
    let ext = Extensional::new(opts.budget);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let two = Universe::int_range(0, 1)?;
    let small = monotone_transformers(&two, &two)?;
    let seven = Universe::int_range(-3, 3)?;
    let big = (0..40)
        .map(|_| {
            let t = random_transformer(&mut rng, &seven, 3)?;
            Transformer::table(&seven, &seven, |x| t.apply(x).expect("same universe"))
        })
        .collect::<absref::Result<Vec<_>>>()?;
    let mut ok = true;
    let mut text = Vec::new();
    let mut laws = Vec::new();
    for (label, pool) in [("2 states", &small), ("7 states", &big)] {
        for law in Law::ALL {
            let tally = check_law(&ext, law, pool, LAW_CASES, &mut rng)?;
            ok &= tally.passed();
            text.push(format!(
                "{} {} on {label}: {} cases ({} vacuous){}",
                pass(tally.passed()),
                law.name(),
                tally.cases,
                tally.vacuous,
                if tally.exhaustive { ", exhaustive" } else { "" }
            ));
            laws.push(LawLine {
                law: law.name().into(),
                universe: label.into(),
                cases: tally.cases,
                vacuous: tally.vacuous,
                failures: tally.failures,
                exhaustive: tally.exhaustive,
            });
        }
    }
    let mut non_laws = Vec::new();
    for non_law in [NonLaw::LeftDistributive, NonLaw::HangRightAbsorbs] {
        let found = find_counterexample(&ext, non_law, &small)?;
        ok &= found.is_some();
        let shown = found.as_ref().map(|args| describe_transformers(args));
        text.push(match &shown {
            Some(d) => format!("PASS counterexample to {}: {d}", non_law.name()),
            None => format!("FAIL no counterexample to {}", non_law.name()),
        });
        non_laws.push(json!({"non_law": non_law.name(), "counterexample": shown}));
    }
    Ok(Output {
        ok,
        text,
        json: json!({"laws": laws, "non_laws": non_laws, "passed": ok}),
    })
}

/// Transformers on small universes as value tables `X ↦ t(X)`.
fn describe_transformers(ts: &[Transformer]) -> String {
    ts.iter()
        .map(|t| {
            let cells: Vec<String> = Predicate::all(t.input())
                .expect("small universe")
                .map(|x| format!("{x}↦{}", t.apply(&x).expect("same universe")))
                .collect();
            format!("[{}]", cells.join(" "))
        })
        .collect::<Vec<_>>()
        .join(", ")
}

fn cmd_galois(opts: &Opts) -> Run<Output> {
    let ext = Extensional::new(opts.budget);
    let mut ok = true;
    let mut text = Vec::new();
    let mut sizes = Vec::new();
    for (m, n) in [(2usize, 2usize), (2, 3), (3, 2)] {
        let a = Universe::int_range(0, m as i64 - 1)?;
        let b = Universe::tokens((0..n).map(|i| format!("b{i}")))?;
        let mut count = 0;
        let mut failures = 0;
        for r in Relation::enumerate(&a, &b)? {
            let rep = check_galois(&ext, &r)?;
            count += 1;
            failures += usize::from(!(rep.holds() && rep.consistent()));
        }
        ok &= failures == 0;
        text.push(format!("{} {count} relations {m}→{n}: {failures} failures", pass(failures == 0)));
        sizes.push(json!({"source": m, "target": n, "relations": count, "failures": failures}));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let u = Universe::int_range(-1, 1)?;
    let mut adjunction_failures = 0;
    let instances = 100;
    for i in 0..instances {
        let p = random_transformer(&mut rng, &u, 2)?;
        let q = random_transformer(&mut rng, &u, 2)?;
        let r = Relation::from_additive(&seq(&angelic(&Relation::identity(&u)), &random_transformer(&mut rng, &u, 1)?)?);
        let f = StateFunction::from_fn(&u, &u, |s| i / 3usize.pow(s as u32) % 3)?;
        for (lower, upper) in [(angelic(&r), demonic(&r)), (direct_image(&f), inverse_image(&f))] {
            let a1 = ext.leq(&seq(&lower, &p)?, &q)?;
            let b1 = ext.leq(&p, &seq(&upper, &q)?)?;
            let a2 = ext.leq(&seq(&p, &upper)?, &q)?;
            let b2 = ext.leq(&p, &seq(&q, &lower)?)?;
            adjunction_failures += usize::from(a1 != b1) + usize::from(a2 != b2);
        }
    }
    ok &= adjunction_failures == 0;
    text.push(format!(
        "{} adjunction laws on {instances} seeded instances: {adjunction_failures} failures",
        pass(adjunction_failures == 0)
    ));
    Ok(Output {
        ok,
        text,
        json: json!({
            "enumerated": sizes,
            "adjunctions": {"instances": instances, "failures": adjunction_failures},
            "passed": ok,
        }),
    })
}

fn cmd_soundness(opts: &Opts) -> Run<Output> {
    let lang = language(opts)?;
    let ts = terms(opts, &lang, CORPUS_SIZE)?;
    with_domain!(domain_name(opts), &lang, soundness_with(&ts))
}

fn soundness_with<D: AbstractDomain>(dom: &D, ts: &[Term]) -> Run<Output> {
    let audit = audit_domain(dom)?;
    let mut text = vec![format!(
        "{} audit of {}{}",
        pass(audit.is_clean()),
        dom.name(),
        audit
            .widening_steps
            .map(|n| format!(" (widened chains stabilise within {n} steps)"))
            .unwrap_or_default()
    )];
    text.extend(findings_lines(&audit));
    let mut unsound: Vec<DomainReport> = Vec::new();
    for t in ts {
        let rep = verify_soundness(dom, t)?;
        if !rep.is_clean() {
            text.push(format!("FAIL {t}"));
            text.extend(findings_lines(&rep));
            unsound.push(rep);
        }
    }
    let ok = audit.is_clean() && unsound.is_empty();
    text.push(format!(
        "{} {} of {} terms sound",
        pass(unsound.is_empty()),
        ts.len() - unsound.len(),
        ts.len()
    ));
    Ok(Output {
        ok,
        text,
        json: json!({
            "domain": dom.name(),
            "audit": audit,
            "terms": ts.len(),
            "unsound": unsound,
            "passed": ok,
        }),
    })
}

fn findings_lines(rep: &DomainReport) -> Vec<String> {
    rep.findings
        .iter()
        .map(|f| format!("  {} at {}: expected {}, got {}", f.check, f.witness, f.expected, f.actual))
        .collect()
}

fn cmd_theorems(opts: &Opts) -> Run<Output> {
    let lang = language(opts)?;
    let ext = Extensional::new(opts.budget);
    let ts = terms(opts, &lang, CORPUS_SIZE)?;
    let name = domain_name(opts);
    let forward = with_domain!(name, &lang, forward_with(&ext, &ts))?;
    let mut reports = forward;
    if name == "signs" || name.starts_with("signs-") {
        let backward_terms = terms(opts, &lang, BACKWARD_TERMS)?;
        reports.extend(backward_signs(&ext, &lang, &backward_terms)?);
    }
    let ok = reports.iter().all(|r| r.agree);
    let mut text = Vec::new();
    for r in reports.iter().filter(|r| r.theorem == "forward") {
        text.push(format!(
            "{} forward {} on {}: lhs {}, rhs {}, agree: {}",
            pass(r.agree),
            r.domain,
            r.term,
            r.lhs,
            r.rhs,
            r.agree
        ));
        for w in &r.witnesses {
            text.push(format!("  {} witness {}: {}", w.side, w.value, w.detail));
        }
    }
    let backward: Vec<&TheoremReport> = reports.iter().filter(|r| r.theorem == "backward").collect();
    if !backward.is_empty() {
        let agree = backward.iter().filter(|r| r.agree).count();
        let sound = backward.iter().filter(|r| r.lhs).count();
        text.push(format!(
            "{} backward: {agree} of {} instances agree ({sound} sound)",
            pass(agree == backward.len()),
            backward.len()
        ));
    }
    text.push(format!("agree: {ok}"));
    // Backward instances are numerous; JSON lists only the forward reports and
    // backward disagreements.
    let listed: Vec<&TheoremReport> = reports
        .iter()
        .filter(|r| r.theorem == "forward" || !r.agree)
        .collect();
    Ok(Output {
        ok,
        text,
        json: json!({
            "reports": listed,
            "backward_instances": backward.len(),
            "agree": ok,
        }),
    })
}

fn forward_with<D: AbstractDomain>(dom: &D, ext: &Extensional, ts: &[Term]) -> Run<Vec<TheoremReport>> {
    ts.iter()
        .map(|t| check_theorem1(ext, dom, t).map_err(Usage::from))
        .collect()
}

fn backward_signs(ext: &Extensional, lang: &Language, ts: &[Term]) -> Run<Vec<TheoremReport>> {
    let dom = signs_domain(lang)?;
    let mut out = Vec::new();
    for t in ts {
        for f in SignMap::all() {
            out.push(check_theorem2(ext, &dom, t, |s: &SignSet| f.apply(*s))?);
        }
    }
    Ok(out)
}

fn cmd_demo(opts: &Opts) -> Run<Output> {
    let lang = language(opts)?;
    let ext = Extensional::new(opts.budget);
    let u = lang.universe();
    let int_pred = |f: fn(i64) -> bool| {
        Predicate::filter(u, move |s| matches!(s, State::Int(n) if f(*n)))
    };
    let zero = Predicate::from_ints(u, [0])?;
    let mut text = Vec::new();
    let mut steps = Vec::new();
    let mut ok = true;
    let mut record = |name: &str, passed: bool, lines: Vec<String>, text: &mut Vec<String>| {
        ok &= passed;
        text.push(format!("{} {name}", pass(passed)));
        text.extend(lines.iter().map(|l| format!("  {l}")));
        steps.push(json!({"step": name, "passed": passed, "lines": lines}));
    };

    let d = countdown();
    let wlp = lang.wlp(&d)?.apply(&zero)?;
    let parsed = lang.parse("while pos do dec end")?;
    record(
        "countdown program",
        parsed == d && wlp == int_pred(|n| n >= 0),
        vec![format!("d = {d}"), format!("wlp(d)({zero}) = {wlp}")],
        &mut text,
    );

    let signs = signs_domain(&lang)?;
    let start: SignSet = "{0,+}".parse()?;
    let (result, trace) = Analyzer::new(&signs).run_traced(&d, &start)?;
    let mut lines = trace.lines();
    lines.push(format!("final state {result}"));
    record("sign run", result.to_string() == "{0}", lines, &mut text);

    let sp = spec(&int_pred(|n| n <= 0), &zero)?;
    let iota = direct_image(&negation_map(u)?);
    let refined = refines(&ext, &sp.spec, &lang.wlp(&d)?, &iota)?;
    let hoare = hoare_check(&lang, &d, &int_pred(|n| n >= 0), &zero)?;
    record(
        "refinement",
        refined && hoare,
        vec![
            format!("F = F_pre;F_post with pre = {}, post = {zero}", sp.pre),
            format!("F ⊑_ι wlp(d) with ι(n) = -n: {refined}"),
            format!("n ≥ 0 ⟹ n ∈ wlp(d)({zero}): {hoare}"),
        ],
        &mut text,
    );

    let two = Universe::int_range(0, 1)?;
    let pool = monotone_transformers(&two, &two)?;
    let found = find_counterexample(&ext, NonLaw::LeftDistributive, &pool)?;
    record(
        "non-Kleene",
        found.is_some(),
        vec![match &found {
            Some(args) => format!("a;(b+c) ≠ a;b + a;c for a, b, c = {}", describe_transformers(args)),
            None => "no counterexample to left distributivity".into(),
        }],
        &mut text,
    );

    Ok(Output {
        ok,
        text,
        json: json!({"steps": steps, "passed": ok}),
    })
}
