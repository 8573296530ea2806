//! Acceptance gate: one test per criterion, each printing a single
//! `criterion N (...): PASS`/`FAIL` line (visible with `--nocapture`).

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use coaltrace::automaton::{
    check_dist_law_axioms, parse_automaton, random_automaton, Alphabet, AnyAutomaton, Automaton,
    StateId, Step, FIXTURE_A1, FIXTURE_A2,
};
use coaltrace::logic::{
    apply_axiom_once, distinguish, eval, normal_form, pairing, parse_formula, random_formula,
    refute,
};
use coaltrace::semiring::{check_semiring_laws, parse_rational};
use coaltrace::trace::{
    brute_force_tr, embed, equiv_bounded, equiv_exact_boolean, equiv_exact_rational,
    equiv_exact_rational_with_stats, project, tr,
};
use coaltrace::weighting::check_monad_and_strength_laws;
use coaltrace::{
    with_semiring, BoolSemiring, ProbabilityMode, RatSemiring, Semiring, SemiringKind, Weighting,
};

const KINDS: [SemiringKind; 4] = [
    SemiringKind::Boolean,
    SemiringKind::Nat,
    SemiringKind::Rational,
    SemiringKind::MinPlus,
];

fn report(label: &str, ok: bool) {
    println!("{label}: {}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "{label} failed");
}

fn a1() -> Automaton<BoolSemiring> {
    match parse_automaton(FIXTURE_A1).unwrap() {
        AnyAutomaton::Boolean(aut) => aut,
        _ => unreachable!(),
    }
}

fn a2() -> Automaton<RatSemiring> {
    match parse_automaton(FIXTURE_A2).unwrap() {
        AnyAutomaton::Rational(aut) => aut,
        _ => unreachable!(),
    }
}

fn corpus<S: Semiring>(s: S, count: usize, base_seed: u64) -> Vec<Automaton<S>> {
    (0..count as u64)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(base_seed ^ (i * 7919));
            let n_states = rng.gen_range(1..=6);
            let n_actions = rng.gen_range(1..=3);
            let names = ["a", "b", "c"][..n_actions].join(" ");
            random_automaton(
                s,
                n_states,
                Alphabet::parse(&names).unwrap(),
                0.15,
                base_seed.wrapping_add(i),
                ProbabilityMode::None,
            )
        })
        .collect()
}

#[test]
fn criterion_1_law_suites() {
    let mut ok = true;
    for kind in KINDS {
        with_semiring!(kind, s => {
            ok &= check_semiring_laws(s, 1000, 11).all_passed();
            ok &= check_monad_and_strength_laws(s, 1000, 12).all_passed();
            ok &= check_dist_law_axioms(s, 1000, 13).all_passed();
        });
    }
    report("criterion 1 (law suites, 1000 samples per law per semiring)", ok);
}

#[test]
fn criterion_2_brute_force_oracle() {
    let mut ok = true;
    let mut total = 0usize;
    for kind in KINDS {
        with_semiring!(kind, s => {
            for aut in corpus(s, 60, 1000 + kind as u64) {
                total += 1;
                for n in 0..=6 {
                    ok &= tr(&aut, n) == brute_force_tr(&aut, n);
                }
            }
        });
    }
    assert!(total >= 200);
    report("criterion 2 (tr = brute-force oracle on 240 automata, depths 0-6)", ok);
}

#[test]
fn criterion_3_cone_and_retraction() {
    let mut ok = true;
    for kind in KINDS {
        with_semiring!(kind, s => {
            for aut in corpus(s, 60, 1000 + kind as u64) {
                let mut tables: Vec<_> = (0..=11).map(|n| tr(&aut, n)).collect();
                for n in 0..=10 {
                    ok &= project(&tables[n + 1]) == tables[n];
                    ok &= project(&embed(&tables[n])) == tables[n];
                }
                tables.clear();
            }
        });
    }
    report("criterion 3 (projection cone and embed section, n <= 10)", ok);
}

/// Partition-refinement bisimilarity for boolean automata: states are
/// identified when they agree on acceptance and on the set of
/// (action, successor-class) pairs, iterated to a fixpoint.
fn bisimulation_classes(aut: &Automaton<BoolSemiring>) -> Vec<usize> {
    let mut class: Vec<usize> = aut
        .states()
        .map(|x| usize::from(aut.accept_weight(x)))
        .collect();
    loop {
        let mut signatures: Vec<(usize, Vec<(usize, usize)>)> = aut
            .states()
            .map(|x| {
                let mut moves: Vec<(usize, usize)> = aut
                    .gamma(x)
                    .iter()
                    .filter_map(|(step, _)| match step {
                        Step::Act(a, y) => Some((a.0, class[y.0])),
                        Step::Stop => None,
                    })
                    .collect();
                moves.sort_unstable();
                moves.dedup();
                (class[x.0], moves)
            })
            .collect();
        let mut keys = signatures.clone();
        keys.sort_unstable();
        keys.dedup();
        let next: Vec<usize> = signatures
            .drain(..)
            .map(|sig| keys.binary_search(&sig).unwrap())
            .collect();
        if next == class {
            return class;
        }
        class = next;
    }
}

#[test]
fn criterion_4_trace_equivalent_not_bisimilar() {
    let aut = a1();
    let x = aut.state("x").unwrap();
    let x2 = aut.state("x2").unwrap();
    let classes = bisimulation_classes(&aut);
    let ok = equiv_bounded(&aut, x, x2, 6)
        && equiv_exact_boolean(&aut, x, x2)
        && classes[x.0] != classes[x2.0];
    report("criterion 4 (A1: trace-equivalent but not bisimilar)", ok);
}

#[test]
fn criterion_5_adequacy() {
    let mut ok = true;
    for kind in KINDS {
        with_semiring!(kind, s => {
            let mut rng = ChaCha8Rng::seed_from_u64(500 + kind as u64);
            let mut triples = 0usize;
            for aut in corpus(s, 30, 5000 + kind as u64) {
                for _ in 0..6 {
                    let phi = random_formula(s, aut.alphabet(), 5, &mut rng);
                    let nf = normal_form(&phi, aut.alphabet()).unwrap();
                    let t = tr(&aut, phi.depth() + 1);
                    for x in aut.states() {
                        triples += 1;
                        ok &= eval(&aut, &phi, x).unwrap() == pairing(&nf, t.state(x));
                    }
                }
            }
            assert!(triples >= 500, "only {triples} triples for {kind:?}");
        });
    }
    report("criterion 5 (adequacy: eval = pairing(NF, tr) on 500+ triples per semiring)", ok);
}

#[test]
fn criterion_6_axiom_soundness() {
    let mut ok = true;
    let alphabet = Alphabet::parse("a b c").unwrap();
    for kind in KINDS {
        with_semiring!(kind, s => {
            let mut rng = ChaCha8Rng::seed_from_u64(600 + kind as u64);
            for i in 0..1000u64 {
                let phi = random_formula(s, &alphabet, 3, &mut rng);
                let rewritten = apply_axiom_once(&phi, i);
                ok &= normal_form(&phi, &alphabet).unwrap()
                    == normal_form(&rewritten, &alphabet).unwrap();
            }
            // the bifurcation instance itself
            let lhs = parse_formula(s, "<a>(<b>end + <c>end)").unwrap();
            let rhs = parse_formula(s, "<a><b>end + <a><c>end").unwrap();
            ok &= normal_form(&lhs, &alphabet).unwrap() == normal_form(&rhs, &alphabet).unwrap();
        });
    }
    report("criterion 6 (normal form invariant under 1000 axiom rewrites per semiring)", ok);
}

#[test]
fn criterion_7_expressiveness_and_completeness() {
    let mut ok = true;
    let mut pairs = 0usize;
    for kind in KINDS {
        with_semiring!(kind, s => {
            let mut rng = ChaCha8Rng::seed_from_u64(700 + kind as u64);
            // distinguish contract on random state pairs
            for aut in corpus(s, 15, 7000 + kind as u64) {
                for _ in 0..2 {
                    let x = StateId(rng.gen_range(0..aut.state_count()));
                    let y = StateId(rng.gen_range(0..aut.state_count()));
                    pairs += 1;
                    match distinguish(&aut, x, y, 5) {
                        Some(phi) => {
                            ok &= eval(&aut, &phi, x).unwrap() != eval(&aut, &phi, y).unwrap();
                        }
                        None => ok &= equiv_bounded(&aut, x, y, 6),
                    }
                }
            }
            // refute contract on random formula pairs
            let alphabet = Alphabet::parse("a b").unwrap();
            for _ in 0..30 {
                let phi = random_formula(s, &alphabet, 3, &mut rng);
                let psi = random_formula(s, &alphabet, 3, &mut rng);
                pairs += 1;
                let nf_equal = normal_form(&phi, &alphabet).unwrap()
                    == normal_form(&psi, &alphabet).unwrap();
                match refute(s, &alphabet, &phi, &psi).unwrap() {
                    Some((chain, start)) => {
                        ok &= !nf_equal;
                        ok &= eval(&chain, &phi, start).unwrap()
                            != eval(&chain, &psi, start).unwrap();
                    }
                    None => ok &= nf_equal,
                }
            }
        });
    }
    assert!(pairs >= 200);
    report("criterion 7 (distinguish separates; refute countermodels differ; none iff NF equal)", ok);
}

#[test]
fn criterion_8_exact_matches_bounded() {
    let mut ok = true;
    for aut in corpus(BoolSemiring, 60, 8000) {
        // one table per automaton; equiv_bounded(x, y, n) compares tr_n
        let t = tr(&aut, 2 * aut.state_count() + 2);
        for x in aut.states() {
            for y in aut.states() {
                ok &= equiv_exact_boolean(&aut, x, y) == (t.state(x) == t.state(y));
            }
        }
    }
    for aut in corpus(RatSemiring, 60, 8800) {
        let t = tr(&aut, 2 * aut.state_count() + 2);
        for x in aut.states() {
            for y in aut.states() {
                let (equal, basis) = equiv_exact_rational_with_stats(&aut, x, y);
                ok &= equal == (t.state(x) == t.state(y));
                ok &= basis <= aut.state_count();
            }
        }
    }
    // rational exactness genuinely needs the linear-span view: duplicated
    // branching below makes subset-style reasoning insufficient
    let aut = a2();
    let s0 = aut.state("s0").unwrap();
    ok &= equiv_exact_rational(&aut, s0, s0);
    report("criterion 8 (exact deciders agree with bounded at depth 2n+2; basis <= n)", ok);
}

#[test]
fn criterion_9_probabilistic_reading() {
    let aut = a2();
    let s0 = aut.state("s0").unwrap();
    let quarter = parse_rational("1/4").unwrap();
    let half = parse_rational("1/2").unwrap();

    let scaled = parse_formula(RatSemiring, "1/2 * <a>end").unwrap();
    let plain = parse_formula(RatSemiring, "<a>end").unwrap();
    let t2 = tr(&aut, 2);
    let a = aut.alphabet().lookup("a").unwrap();
    let word_a = coaltrace::automaton::Word::from_actions(vec![a]);

    let ok = eval(&aut, &scaled, s0).unwrap() == quarter
        && eval(&aut, &plain, s0).unwrap() == half
        && t2.state(s0).weight(&word_a) == half;
    report("criterion 9 (A2: 1/2*<a>end evaluates to 1/4, <a>end to 1/2 = tr_2(s0)(a))", ok);
}

#[test]
fn fixtures_parse_and_round_trip() {
    let printed = a1().print();
    assert_eq!(
        match parse_automaton(&printed).unwrap() {
            AnyAutomaton::Boolean(aut) => aut.print(),
            _ => unreachable!(),
        },
        printed
    );
    assert_eq!(a2().mode(), ProbabilityMode::Distribution);
}

#[test]
fn nat_weighting_mass_smoke() {
    // tiny independent cross-check that the corpus generator is honest:
    // a deterministic one-edge automaton has the expected trace weight
    let text = "semiring nat\nalphabet a\nstates p q\naccept q : 2\nedge p -a-> q : 3\n";
    let aut = match parse_automaton(text).unwrap() {
        AnyAutomaton::Nat(aut) => aut,
        _ => unreachable!(),
    };
    let p = aut.state("p").unwrap();
    let t = tr(&aut, 2);
    let a = aut.alphabet().lookup("a").unwrap();
    let word_a = coaltrace::automaton::Word::from_actions(vec![a]);
    assert_eq!(t.state(p).weight(&word_a), BigUint::from(6u32));
    let _: Weighting<_, _> = t.state(p).clone();
}
