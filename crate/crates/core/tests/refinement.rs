mod common;

use absref::corpus::generate_corpus;
use absref::domains::{broken_sign_dec, concrete_domain, signs_domain, SignMap, SignSet};
use absref::laws::monotone_transformers;
use absref::refine::{negation_map, refinement_witness, Carrier};
use absref::{
    check_theorem1, check_theorem2, countdown, direct_image, example_language, hoare_check,
    refines, seq, skip, spec, AbstractDomain, Extensional, Predicate, Term,
};
use common::{filter, ints, wlp_oracle};
use proptest::prelude::*;

#[test]
fn countdown_refines_negated_spec_for_every_bound() {
    let ext = Extensional::default();
    for n in 1..=6 {
        let lang = example_language(n).unwrap();
        let u = lang.universe();
        let d = lang.wlp(&countdown()).unwrap();
        let sp = spec(&filter(&lang, |v| v <= 0), &ints(&lang, &[0])).unwrap();
        let iota = direct_image(&negation_map(u).unwrap());
        let refined = refines(&ext, &sp.spec, &d, &iota).unwrap();
        let nonneg = filter(&lang, |v| v >= 0);
        let hoare = hoare_check(&lang, &countdown(), &nonneg, &ints(&lang, &[0])).unwrap();
        assert!(refined && hoare, "N = {n}");
        // The pointwise reading: pre(-s) ⟹ s ∈ wlp(d)({0}), checked by the oracle.
        let wlp = wlp_oracle(&lang, &countdown(), &ints(&lang, &[0]));
        assert_eq!(wlp, nonneg);
    }
}

#[test]
fn refinement_with_a_failing_postcondition() {
    let ext = Extensional::default();
    let lang = example_language(3).unwrap();
    let d = lang.wlp(&countdown()).unwrap();
    let sp = spec(&filter(&lang, |v| v <= 1), &ints(&lang, &[0])).unwrap();
    let iota = direct_image(&negation_map(lang.universe()).unwrap());
    assert!(!refines(&ext, &sp.spec, &d, &iota).unwrap());
    // pre admits 1, whose negation -1 halts at once in -1.
    assert!(!hoare_check(&lang, &countdown(), &filter(&lang, |v| v >= -1), &ints(&lang, &[0])).unwrap());
}

#[test]
fn theorem1_agrees_on_the_corpus() {
    let ext = Extensional::default();
    let lang = example_language(3).unwrap();
    let signs = signs_domain(&lang).unwrap();
    let broken = broken_sign_dec(&lang).unwrap();
    let mut both_false = 0;
    for t in generate_corpus(2, 60, 4) {
        let good = check_theorem1(&ext, &signs, &t).unwrap();
        assert!(good.agree && good.lhs, "{t}");
        let bad = check_theorem1(&ext, &broken, &t).unwrap();
        assert!(bad.agree, "{t}: {bad:?}");
        if !bad.lhs {
            both_false += 1;
        }
    }
    assert!(both_false > 0);
}

#[test]
fn theorem1_broken_dec_witness() {
    let ext = Extensional::default();
    let lang = example_language(3).unwrap();
    let rep = check_theorem1(&ext, &broken_sign_dec(&lang).unwrap(), &Term::instr("dec")).unwrap();
    assert!(!rep.lhs && !rep.rhs && rep.proof_chain == Some(false) && rep.agree);
    for side in ["lhs", "rhs"] {
        assert!(rep.witnesses.iter().any(|w| w.side == side && w.value == "{+}"), "{side}: {:?}", rep.witnesses);
    }
}

#[test]
fn theorem1_concrete_domain() {
    let ext = Extensional::default();
    let lang = example_language(2).unwrap();
    let conc = concrete_domain(&lang).unwrap();
    for t in generate_corpus(6, 15, 3) {
        let rep = check_theorem1(&ext, &conc, &t).unwrap();
        assert!(rep.agree && rep.lhs, "{t}");
    }
}

/// The largest sign set whose concretisation lies inside `wlp(t)(γ(s))`.
fn best_backward(dom: &impl AbstractDomain<Value = SignSet>, t: &Term, s: &SignSet) -> SignSet {
    let wlp = dom.language().wlp(t).unwrap();
    let target = wlp.apply(&dom.gamma(s)).unwrap();
    SignSet::all()
        .filter(|c| dom.gamma(c).is_subset(&target))
        .fold(SignSet::EMPTY, SignSet::union)
}

#[test]
fn theorem2_examples() {
    let ext = Extensional::default();
    let lang = example_language(3).unwrap();
    let dom = signs_domain(&lang).unwrap();
    let dec = Term::instr("dec");
    let best = check_theorem2(&ext, &dom, &dec, |s| best_backward(&dom, &dec, s)).unwrap();
    assert!(best.lhs && best.rhs && best.agree);
    let top = check_theorem2(&ext, &dom, &dec, |_| SignSet::TOP).unwrap();
    assert!(!top.lhs && !top.rhs && top.agree);
    let bottom = check_theorem2(&ext, &dom, &dec, |_| SignSet::EMPTY).unwrap();
    assert!(bottom.lhs && bottom.rhs);
    let ident = check_theorem2(&ext, &dom, &dec, |s| *s).unwrap();
    assert!(!ident.lhs && ident.agree);
}

#[test]
fn theorem2_all_sign_maps_agree() {
    let ext = Extensional::default();
    let lang = example_language(3).unwrap();
    let dom = signs_domain(&lang).unwrap();
    for t in generate_corpus(13, 5, 3) {
        let mut sound = 0;
        for f in SignMap::all() {
            let rep = check_theorem2(&ext, &dom, &t, |s| f.apply(*s)).unwrap();
            assert!(rep.agree, "{t} {f:?}");
            sound += rep.lhs as usize;
        }
        assert!(sound > 0, "the empty map is always sound");
    }
}

#[test]
fn carrier_reification() {
    let lang = example_language(3).unwrap();
    let dom = signs_domain(&lang).unwrap();
    let carrier = Carrier::of(&dom).unwrap();
    assert_eq!(carrier.universe().size(), 8);
    let gamma = carrier.gamma_relation(&dom).unwrap();
    for (i, v) in carrier.values().iter().enumerate() {
        assert_eq!(gamma.image(i), &dom.gamma(v));
        assert_eq!(carrier.index_of(v).unwrap(), i);
    }
}

proptest! {
    #[test]
    fn refinement_composes(i in 0usize..36, j in 0usize..36, k in 0usize..36, p in 0usize..36, q in 0usize..36) {
        // ι;a ⊑ b;ι and κ;b ⊑ c;κ give κ;ι;a ⊑ c;κ;ι.
        let u = absref::Universe::int_range(0, 1).unwrap();
        let pool = monotone_transformers(&u, &u).unwrap();
        let ext = Extensional::default();
        let (a, b, c, iota, kappa) = (&pool[i], &pool[j], &pool[k], &pool[p], &pool[q]);
        prop_assert!(refines(&ext, a, a, &skip(&u)).unwrap());
        if refines(&ext, a, b, iota).unwrap() && refines(&ext, b, c, kappa).unwrap() {
            prop_assert!(refines(&ext, a, c, &seq(kappa, iota).unwrap()).unwrap());
        }
    }

    #[test]
    fn refinement_witness_is_a_real_violation(i in 0usize..36, j in 0usize..36, p in 0usize..36) {
        let u = absref::Universe::int_range(0, 1).unwrap();
        let pool = monotone_transformers(&u, &u).unwrap();
        let ext = Extensional::default();
        let (a, b, iota) = (&pool[i], &pool[j], &pool[p]);
        if let Some(x) = refinement_witness(&ext, a, b, iota).unwrap() {
            let lhs = iota.apply(&a.apply(&x).unwrap()).unwrap();
            let rhs = b.apply(&iota.apply(&x).unwrap()).unwrap();
            prop_assert!(!lhs.is_subset(&rhs));
        }
    }

    #[test]
    fn hoare_matches_oracle(seed in any::<u64>(), pre in 0u64..128, post in 0u64..128) {
        let lang = example_language(3).unwrap();
        let t = generate_corpus(seed, 2, 4).pop().unwrap();
        let (pre, post) = (Predicate::from_mask(lang.universe(), pre), Predicate::from_mask(lang.universe(), post));
        prop_assert_eq!(
            hoare_check(&lang, &t, &pre, &post).unwrap(),
            pre.is_subset(&wlp_oracle(&lang, &t, &post))
        );
    }
}
