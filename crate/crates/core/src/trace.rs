//! Finite trace maps and trace-equivalence decision.
//!
//! `tr(aut, n)` assigns every state the weighting over words of length
//! strictly below `n` that it accepts, following the recursion
//! `tr_{n+1} = T̄(tr_n) ∘ γ` unfolded through the distributive law.
//! Bounded equivalence compares these tables; for boolean and rational
//! weights exact deciders close the quantifier over all depths.

use std::collections::{BTreeSet, HashSet, VecDeque};

use num_rational::BigRational;
use num_traits::Zero;

use crate::automaton::{ActionId, Automaton, StateId, Step, Word};
use crate::semiring::{BoolSemiring, RatSemiring, Semiring};
use crate::weighting::Weighting;

/// Per-state trace weightings at a fixed depth. Every word in any
/// support has length < `depth`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceTable<S: Semiring> {
    depth: usize,
    table: Vec<Weighting<Word, S>>,
}

impl<S: Semiring> TraceTable<S> {
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn state(&self, x: StateId) -> &Weighting<Word, S> {
        &self.table[x.0]
    }

    pub fn states(&self) -> impl Iterator<Item = &Weighting<Word, S>> {
        self.table.iter()
    }
}

/// Computes `tr_n` for every state by dynamic programming over depth:
/// `tr_0` is empty everywhere, and one step prepends an action to the
/// successor's traces or records termination at ε.
pub fn tr<S: Semiring>(aut: &Automaton<S>, n: usize) -> TraceTable<S> {
    let s = aut.semiring();
    let mut layer: Vec<Weighting<Word, S>> =
        vec![Weighting::new(s); aut.state_count()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(aut.state_count());
        for x in aut.states() {
            let mut w = Weighting::new(s);
            for (step, weight) in aut.gamma(x).iter() {
                match step {
                    Step::Stop => w.insert_add(Word::empty(), weight.clone()),
                    Step::Act(a, y) => {
                        for (word, tail) in layer[y.0].iter() {
                            w.insert_add(word.cons(*a), s.mul(weight, tail));
                        }
                    }
                }
            }
            next.push(w);
        }
        layer = next;
    }
    TraceTable {
        depth: n,
        table: layer,
    }
}

/// Independent oracle: computes the same table by explicit enumeration
/// of all paths, with no sharing between depths.
pub fn brute_force_tr<S: Semiring>(aut: &Automaton<S>, n: usize) -> TraceTable<S> {
    let s = aut.semiring();
    let mut table = Vec::with_capacity(aut.state_count());
    for x in aut.states() {
        let mut w = Weighting::new(s);
        if n > 0 {
            let mut prefix = Vec::new();
            enumerate_paths(aut, x, &mut prefix, s.one(), n, &mut w);
        }
        table.push(w);
    }
    TraceTable { depth: n, table }
}

fn enumerate_paths<S: Semiring>(
    aut: &Automaton<S>,
    x: StateId,
    prefix: &mut Vec<ActionId>,
    product: S::Elem,
    n: usize,
    out: &mut Weighting<Word, S>,
) {
    let s = aut.semiring();
    let term = aut.accept_weight(x);
    if !s.is_zero(&term) {
        out.insert_add(Word::from_actions(prefix.clone()), s.mul(&product, &term));
    }
    if prefix.len() + 1 >= n {
        return;
    }
    for (step, weight) in aut.gamma(x).iter() {
        if let Step::Act(a, y) = step {
            prefix.push(*a);
            enumerate_paths(aut, *y, prefix, s.mul(&product, weight), n, out);
            prefix.pop();
        }
    }
}

/// Final-sequence projection: drops the words of maximal length,
/// giving the table one depth lower.
pub fn project<S: Semiring>(t: &TraceTable<S>) -> TraceTable<S> {
    assert!(t.depth >= 1, "project needs depth >= 1");
    let cutoff = t.depth - 1;
    let table = t
        .table
        .iter()
        .map(|w| {
            Weighting::from_entries(
                w.semiring(),
                w.iter()
                    .filter(|(word, _)| word.len() < cutoff)
                    .map(|(word, weight)| (word.clone(), weight.clone())),
            )
        })
        .collect();
    TraceTable {
        depth: cutoff,
        table,
    }
}

/// Final-sequence embedding: the identity on weightings, reindexed one
/// depth higher. `project(embed(t)) == t`.
pub fn embed<S: Semiring>(t: &TraceTable<S>) -> TraceTable<S> {
    TraceTable {
        depth: t.depth + 1,
        table: t.table.clone(),
    }
}

/// True iff `tr_k(x) = tr_k(y)` for all k ≤ n. Comparing at n suffices
/// because the projections form a cone over lower depths.
pub fn equiv_bounded<S: Semiring>(aut: &Automaton<S>, x: StateId, y: StateId, n: usize) -> bool {
    let t = tr(aut, n);
    let equal = t.state(x) == t.state(y);
    #[cfg(debug_assertions)]
    if equal {
        let mut cur = t;
        while cur.depth() > 0 {
            cur = project(&cur);
            debug_assert_eq!(cur.state(x), cur.state(y));
        }
    }
    equal
}

/// Exact trace equivalence over the boolean semiring: subset
/// construction on the reachable parts with ∗ as acceptance, then DFA
/// equivalence by breadth-first pair search.
pub fn equiv_exact_boolean(aut: &Automaton<BoolSemiring>, x: StateId, y: StateId) -> bool {
    let accepting = |set: &BTreeSet<StateId>| set.iter().any(|q| aut.accept_weight(*q));
    let successor = |set: &BTreeSet<StateId>, a: ActionId| -> BTreeSet<StateId> {
        let mut next = BTreeSet::new();
        for q in set {
            for (step, _) in aut.gamma(*q).iter() {
                if let Step::Act(b, r) = step {
                    if *b == a {
                        next.insert(*r);
                    }
                }
            }
        }
        next
    };

    let start = (BTreeSet::from([x]), BTreeSet::from([y]));
    let mut seen: HashSet<(Vec<StateId>, Vec<StateId>)> = HashSet::new();
    let mut queue = VecDeque::from([start]);
    while let Some((p, q)) = queue.pop_front() {
        let key = (
            p.iter().copied().collect::<Vec<_>>(),
            q.iter().copied().collect::<Vec<_>>(),
        );
        if !seen.insert(key) {
            continue;
        }
        if accepting(&p) != accepting(&q) {
            return false;
        }
        for a in aut.alphabet().actions() {
            queue.push_back((successor(&p, a), successor(&q, a)));
        }
    }
    true
}

/// Exact trace equivalence over the rationals, together with the number
/// of basis vectors the span search materialized (always at most the
/// number of states).
pub fn equiv_exact_rational_with_stats(
    aut: &Automaton<RatSemiring>,
    x: StateId,
    y: StateId,
) -> (bool, usize) {
    let n = aut.state_count();
    let termination: Vec<BigRational> = aut.states().map(|q| aut.accept_weight(q)).collect();

    // difference vector unit(x) - unit(y) in the free module over states
    let mut start = vec![BigRational::zero(); n];
    start[x.0] += BigRational::from_integer(1.into());
    start[y.0] -= BigRational::from_integer(1.into());

    // basis vectors kept reduced, each with a recorded pivot column
    let mut basis: Vec<(usize, Vec<BigRational>)> = Vec::new();
    let mut queue = VecDeque::from([start]);

    while let Some(mut v) = queue.pop_front() {
        for (pivot, b) in &basis {
            if !v[*pivot].is_zero() {
                let factor = &v[*pivot] / &b[*pivot];
                for i in 0..n {
                    let delta = &factor * &b[i];
                    v[i] -= delta;
                }
            }
        }
        let Some(pivot) = v.iter().position(|c| !c.is_zero()) else {
            continue;
        };
        let functional: BigRational = (0..n).map(|i| &v[i] * &termination[i]).sum();
        if !functional.is_zero() {
            return (false, basis.len());
        }
        for a in aut.alphabet().actions() {
            let mut succ = vec![BigRational::zero(); n];
            for (i, coeff) in v.iter().enumerate() {
                if coeff.is_zero() {
                    continue;
                }
                for (step, weight) in aut.gamma(StateId(i)).iter() {
                    if let Step::Act(b, target) = step {
                        if *b == a {
                            succ[target.0] += coeff * weight;
                        }
                    }
                }
            }
            queue.push_back(succ);
        }
        basis.push((pivot, v));
    }
    (true, basis.len())
}

/// Exact trace equivalence over the rationals via the linear-span
/// method: grow the span of the difference vector under all actions and
/// test the termination functional on it.
pub fn equiv_exact_rational(aut: &Automaton<RatSemiring>, x: StateId, y: StateId) -> bool {
    equiv_exact_rational_with_stats(aut, x, y).0
}

/// Deterministic rendering of the trace table: states in declaration
/// order, words in length-lex order.
pub fn trace_report<S: Semiring>(aut: &Automaton<S>, n: usize) -> String {
    let t = tr(aut, n);
    let mut out = String::new();
    for x in aut.states() {
        out.push_str(&format!(
            "{}: {}\n",
            aut.state_name(x),
            t.state(x).render_with(|w| aut.alphabet().render_word(w))
        ));
    }
    out
}
