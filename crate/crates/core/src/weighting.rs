//! Finite-support weightings: the branching monad applied to a key set.
//!
//! A `Weighting<K, S>` is a finite-support map from keys to nonzero
//! elements of the semiring `S`. Over the boolean semiring it is exactly a
//! finite set of keys. The monad structure (unit, flatten), functor action,
//! Kleisli composition and the strength laws live here, together with
//! seeded law checks.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::One;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::laws::{LawReport, LawResult};
use crate::semiring::{RatSemiring, Semiring};

/// Finite-support map into a semiring, kept canonical: no key ever maps
/// to zero. Keys are totally ordered so iteration and printing are
/// deterministic and equality is structural.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Weighting<K: Ord + Clone, S: Semiring> {
    semiring: S,
    entries: BTreeMap<K, S::Elem>,
}

impl<K: Ord + Clone, S: Semiring> Weighting<K, S> {
    pub fn new(semiring: S) -> Self {
        Weighting {
            semiring,
            entries: BTreeMap::new(),
        }
    }

    /// The monad unit: a Dirac/singleton weighting `{k ↦ one}`.
    pub fn unit(semiring: S, key: K) -> Self {
        let mut w = Weighting::new(semiring);
        w.insert_add(key, semiring.one());
        w
    }

    pub fn from_entries(semiring: S, entries: impl IntoIterator<Item = (K, S::Elem)>) -> Self {
        let mut w = Weighting::new(semiring);
        for (k, v) in entries {
            w.insert_add(k, v);
        }
        w
    }

    pub fn semiring(&self) -> S {
        self.semiring
    }

    /// Adds `value` onto the weight at `key`, pruning the entry if the
    /// result is zero.
    pub fn insert_add(&mut self, key: K, value: S::Elem) {
        let s = self.semiring;
        if s.is_zero(&value) {
            return;
        }
        match self.entries.remove(&key) {
            None => {
                self.entries.insert(key, value);
            }
            Some(old) => {
                let combined = s.add(&old, &value);
                if !s.is_zero(&combined) {
                    self.entries.insert(key, combined);
                }
            }
        }
    }

    /// The weight at `key`; zero for keys outside the support.
    pub fn weight(&self, key: &K) -> S::Elem {
        self.entries
            .get(key)
            .cloned()
            .unwrap_or_else(|| self.semiring.zero())
    }

    pub fn contains(&self, key: &K) -> bool {
        self.entries.contains_key(key)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &S::Elem)> {
        self.entries.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &K> {
        self.entries.keys()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Pointwise sum of two weightings.
    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, v) in other.iter() {
            out.insert_add(k.clone(), v.clone());
        }
        out
    }

    /// Multiplies every weight by `scalar` on the left, pruning zeros.
    pub fn scale(&self, scalar: &S::Elem) -> Self {
        let s = self.semiring;
        Weighting::from_entries(
            s,
            self.iter().map(|(k, v)| (k.clone(), s.mul(scalar, v))),
        )
    }

    /// Functor action: pushforward along `f`, combining collisions with
    /// the semiring addition.
    pub fn map<L: Ord + Clone>(&self, f: impl Fn(&K) -> L) -> Weighting<L, S> {
        Weighting::from_entries(self.semiring, self.iter().map(|(k, v)| (f(k), v.clone())))
    }

    /// Kleisli extension: `flatten(map(f, self))` in one pass.
    pub fn bind<L: Ord + Clone>(&self, f: impl Fn(&K) -> Weighting<L, S>) -> Weighting<L, S> {
        let s = self.semiring;
        let mut out = Weighting::new(s);
        for (k, outer) in self.iter() {
            for (l, inner) in f(k).iter() {
                out.insert_add(l.clone(), s.mul(outer, inner));
            }
        }
        out
    }

    /// Total mass: the semiring sum of all weights.
    pub fn mass(&self) -> S::Elem {
        crate::semiring::fold_sum(self.semiring, self.iter().map(|(_, v)| v.clone()))
    }

    /// Canonical rendering: `{k:w, ...}` with keys in order; weights are
    /// omitted over the boolean semiring, giving plain set notation.
    pub fn render_with(&self, fmt_key: impl Fn(&K) -> String) -> String {
        let s = self.semiring;
        let body = self
            .iter()
            .map(|(k, v)| {
                if s.show_weights() {
                    format!("{}:{}", fmt_key(k), s.format_elem(v))
                } else {
                    fmt_key(k)
                }
            })
            .collect::<Vec<_>>()
            .join(", ");
        format!("{{{body}}}")
    }
}

impl<K: Ord + Clone + fmt::Display, S: Semiring> fmt::Display for Weighting<K, S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render_with(|k| k.to_string()))
    }
}

/// The monad multiplication: weighted flattening of a weighting of
/// weightings.
pub fn flatten<K: Ord + Clone, S: Semiring>(outer: &Weighting<Weighting<K, S>, S>) -> Weighting<K, S> {
    outer.bind(|inner| inner.clone())
}

/// Kleisli composition of `f : X → BY` and `g : Y → BZ`.
pub fn kleisli_compose<'a, X, Y, Z, S>(
    f: impl Fn(&X) -> Weighting<Y, S> + 'a,
    g: impl Fn(&Y) -> Weighting<Z, S> + 'a,
) -> impl Fn(&X) -> Weighting<Z, S> + 'a
where
    Y: Ord + Clone,
    Z: Ord + Clone,
    S: Semiring,
{
    move |x| f(x).bind(&g)
}

/// Strength: pairs every key of `w` with the point `y`, keeping weights.
pub fn strength<K: Ord + Clone, Y: Ord + Clone, S: Semiring>(
    w: &Weighting<K, S>,
    y: &Y,
) -> Weighting<(K, Y), S> {
    w.map(|k| (k.clone(), y.clone()))
}

/// Double strength: the product weighting `(x,y) ↦ u(x)·v(y)`.
pub fn double_strength<K: Ord + Clone, L: Ord + Clone, S: Semiring>(
    u: &Weighting<K, S>,
    v: &Weighting<L, S>,
) -> Weighting<(K, L), S> {
    u.bind(|x| v.map(|y| (x.clone(), y.clone())))
}

/// Mass constraint declared for probabilistic systems.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProbabilityMode {
    None,
    Subdistribution,
    Distribution,
}

impl ProbabilityMode {
    pub fn parse(name: &str) -> Option<ProbabilityMode> {
        match name {
            "none" => Some(ProbabilityMode::None),
            "subdistribution" => Some(ProbabilityMode::Subdistribution),
            "distribution" => Some(ProbabilityMode::Distribution),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ProbabilityMode::None => "none",
            ProbabilityMode::Subdistribution => "subdistribution",
            ProbabilityMode::Distribution => "distribution",
        }
    }
}

/// Why a weighting fails its declared probability mode.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProbabilityViolation {
    /// A weight outside (0, 1]; the support never holds exact zeros.
    WeightOutOfRange { weight: BigRational },
    /// Total mass breaks the declared constraint.
    Mass { mass: BigRational },
}

impl fmt::Display for ProbabilityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProbabilityViolation::WeightOutOfRange { weight } => {
                write!(f, "weight {weight} outside (0, 1]")
            }
            ProbabilityViolation::Mass { mass } => write!(f, "mass {mass}"),
        }
    }
}

impl<K: Ord + Clone> Weighting<K, RatSemiring> {
    /// Checks the declared mass constraint with exact rational
    /// comparisons: total mass ≤ 1 for subdistributions, = 1 for
    /// distributions.
    pub fn validate_probability(&self, mode: ProbabilityMode) -> Result<(), ProbabilityViolation> {
        if mode == ProbabilityMode::None {
            return Ok(());
        }
        let one = BigRational::one();
        for (_, w) in self.iter() {
            if *w <= RatSemiring.zero() || *w > one {
                return Err(ProbabilityViolation::WeightOutOfRange { weight: w.clone() });
            }
        }
        let mass = self.mass();
        let ok = match mode {
            ProbabilityMode::None => true,
            ProbabilityMode::Subdistribution => mass <= one,
            ProbabilityMode::Distribution => mass == one,
        };
        if ok {
            Ok(())
        } else {
            Err(ProbabilityViolation::Mass { mass })
        }
    }
}

/// Samples a small weighting over integer keys; used by the law suites.
pub fn sample_weighting<S: Semiring>(s: S, rng: &mut impl Rng, key_space: u32) -> Weighting<u32, S> {
    let size = rng.gen_range(0..4);
    let mut w = Weighting::new(s);
    for _ in 0..size {
        let key = rng.gen_range(0..key_space);
        w.insert_add(key, s.sample(rng));
    }
    w
}

fn sample_nested<S: Semiring>(
    s: S,
    rng: &mut impl Rng,
    key_space: u32,
) -> Weighting<Weighting<u32, S>, S> {
    let size = rng.gen_range(0..3);
    let mut w = Weighting::new(s);
    for _ in 0..size {
        let inner = sample_weighting(s, rng, key_space);
        w.insert_add(inner, s.sample(rng));
    }
    w
}

fn sample_nested3<S: Semiring>(
    s: S,
    rng: &mut impl Rng,
    key_space: u32,
) -> Weighting<Weighting<Weighting<u32, S>, S>, S> {
    let size = rng.gen_range(0..3);
    let mut w = Weighting::new(s);
    for _ in 0..size {
        let inner = sample_nested(s, rng, key_space);
        w.insert_add(inner, s.sample(rng));
    }
    w
}

/// Checks the monad unit laws, flatten associativity, the strength laws
/// and the consistency of the two composites defining double strength,
/// on seeded samples. Deterministic given the seed.
pub fn check_monad_and_strength_laws<S: Semiring>(
    s: S,
    sample_count: usize,
    seed: u64,
) -> LawReport {
    let mut report = LawReport::new(format!("monad and strength laws: {}", s.name()));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut unit_outer = None;
    let mut unit_inner = None;
    let mut flat_assoc = None;
    let mut st_unit = None;
    let mut st_mult = None;
    let mut dst_consistent = None;

    for _ in 0..sample_count {
        let w = sample_weighting(s, &mut rng, 6);

        // μ ∘ η = id on BX
        if unit_outer.is_none() && flatten(&Weighting::unit(s, w.clone())) != w {
            unit_outer = Some(format!("{w:?}"));
        }
        // μ ∘ Bη = id on BX
        if unit_inner.is_none() && flatten(&w.map(|x| Weighting::unit(s, *x))) != w {
            unit_inner = Some(format!("{w:?}"));
        }

        let nested3 = sample_nested3(s, &mut rng, 6);
        if flat_assoc.is_none() {
            let lhs = flatten(&flatten(&nested3));
            let rhs = flatten(&nested3.map(flatten));
            if lhs != rhs {
                flat_assoc = Some(format!("{nested3:?}"));
            }
        }

        // st ∘ (η × id) = η
        let x: u32 = rng.gen_range(0..6);
        let y: u32 = rng.gen_range(0..6);
        if st_unit.is_none()
            && strength(&Weighting::unit(s, x), &y) != Weighting::unit(s, (x, y))
        {
            st_unit = Some(format!("({x}, {y})"));
        }

        // μ ∘ B st ∘ st_B = st ∘ (μ × id)
        let nested = sample_nested(s, &mut rng, 6);
        if st_mult.is_none() {
            let lhs = flatten(&strength(&nested, &y).map(|(inner, point)| strength(inner, point)));
            let rhs = strength(&flatten(&nested), &y);
            if lhs != rhs {
                st_mult = Some(format!("{nested:?} with {y}"));
            }
        }

        // The two strength/μ composites defining dst agree, and match the
        // pointwise product formula.
        let u = sample_weighting(s, &mut rng, 6);
        let v = sample_weighting(s, &mut rng, 6);
        if dst_consistent.is_none() {
            let left_first = u.bind(|a| v.map(|b| (*a, *b)));
            let right_first = v.bind(|b| u.map(|a| (*a, *b)));
            let product = double_strength(&u, &v);
            if left_first != right_first || left_first != product {
                dst_consistent = Some(format!("u = {u:?}, v = {v:?}"));
            }
        }
    }

    report.push(LawResult::new("flatten-unit-outer", unit_outer));
    report.push(LawResult::new("flatten-unit-inner", unit_inner));
    report.push(LawResult::new("flatten-associative", flat_assoc));
    report.push(LawResult::new("strength-unit", st_unit));
    report.push(LawResult::new("strength-multiplication", st_mult));
    report.push(LawResult::new("double-strength-consistent", dst_consistent));
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semiring::{
        parse_rational, BoolSemiring, MinPlusSemiring, NatSemiring, Tropical,
    };
    use num_bigint::BigUint;

    fn bset(keys: &[&str]) -> Weighting<String, BoolSemiring> {
        Weighting::from_entries(
            BoolSemiring,
            keys.iter().map(|k| (k.to_string(), true)),
        )
    }

    #[test]
    fn unit_examples() {
        assert_eq!(Weighting::unit(BoolSemiring, "q"), {
            let mut w = Weighting::new(BoolSemiring);
            w.insert_add("q", true);
            w
        });
        let q = Weighting::unit(RatSemiring, "q");
        assert_eq!(q.weight(&"q"), RatSemiring.one());
        let t = Weighting::unit(MinPlusSemiring, "q");
        assert_eq!(t.weight(&"q"), Tropical::finite(0));
    }

    #[test]
    fn flatten_boolean_is_union() {
        let outer = Weighting::from_entries(
            BoolSemiring,
            [(bset(&["a", "b"]), true), (bset(&["b", "c"]), true)],
        );
        assert_eq!(flatten(&outer), bset(&["a", "b", "c"]));
    }

    #[test]
    fn flatten_rational_mixture() {
        let s = RatSemiring;
        let half = parse_rational("1/2").unwrap();
        let d1 = Weighting::unit(s, "x");
        let d2 = Weighting::unit(s, "y");
        let outer = Weighting::from_entries(s, [(d1, half.clone()), (d2, half.clone())]);
        let flat = flatten(&outer);
        assert_eq!(flat.weight(&"x"), half);
        assert_eq!(flat.weight(&"y"), half);
        assert_eq!(flat.len(), 2);
    }

    #[test]
    fn map_pushforward_collisions() {
        let s = NatSemiring;
        let w = Weighting::from_entries(
            s,
            [("x", BigUint::from(2u32)), ("y", BigUint::from(3u32))],
        );
        let collapsed = w.map(|_| "star");
        assert_eq!(collapsed.weight(&"star"), BigUint::from(5u32));
        assert_eq!(w.map(|k| *k), w);
    }

    #[test]
    fn kleisli_examples() {
        // relation composition over the boolean semiring
        let f = |_: &&str| bset(&["y1", "y2"]);
        let g = |y: &String| {
            if y == "y1" {
                bset(&["z"])
            } else {
                Weighting::new(BoolSemiring)
            }
        };
        let composed = kleisli_compose(f, g);
        assert_eq!(composed(&"x"), bset(&["z"]));

        let s = RatSemiring;
        let half = parse_rational("1/2").unwrap();
        let third = parse_rational("1/3").unwrap();
        let f = move |_: &&str| Weighting::from_entries(s, [("y", half.clone())]);
        let g = move |_: &&str| Weighting::from_entries(s, [("z", third.clone())]);
        let composed = kleisli_compose(f, g);
        assert_eq!(
            composed(&"x").weight(&"z"),
            parse_rational("1/6").unwrap()
        );
    }

    #[test]
    fn strength_examples() {
        assert_eq!(
            strength(&Weighting::unit(BoolSemiring, "x"), &"y"),
            Weighting::unit(BoolSemiring, ("x", "y"))
        );
        let prod = strength(&bset(&["a", "b"]), &"y");
        assert_eq!(prod.len(), 2);
        assert!(prod.contains(&("a".to_string(), "y")));
        assert!(strength(&Weighting::<u32, BoolSemiring>::new(BoolSemiring), &7).is_empty());
    }

    #[test]
    fn double_strength_examples() {
        let s = RatSemiring;
        let u = Weighting::from_entries(s, [("x", parse_rational("1/2").unwrap())]);
        let v = Weighting::from_entries(s, [("y", parse_rational("1/3").unwrap())]);
        assert_eq!(
            double_strength(&u, &v).weight(&("x", "y")),
            parse_rational("1/6").unwrap()
        );

        let a = bset(&["a", "b"]);
        let c = bset(&["c"]);
        let prod = double_strength(&a, &c);
        assert_eq!(prod.len(), 2);

        assert!(double_strength(&u, &Weighting::<&str, _>::new(s)).is_empty());
    }

    #[test]
    fn probability_validation() {
        let s = RatSemiring;
        let half = parse_rational("1/2").unwrap();
        let even = Weighting::from_entries(s, [("x", half.clone()), ("y", half.clone())]);
        assert!(even.validate_probability(ProbabilityMode::Distribution).is_ok());

        let short = Weighting::from_entries(s, [("x", half.clone())]);
        assert_eq!(
            short.validate_probability(ProbabilityMode::Distribution),
            Err(ProbabilityViolation::Mass { mass: half })
        );
        assert!(short
            .validate_probability(ProbabilityMode::Subdistribution)
            .is_ok());
    }

    #[test]
    fn monad_and_strength_laws_pass() {
        assert!(check_monad_and_strength_laws(BoolSemiring, 500, 11).all_passed());
        assert!(check_monad_and_strength_laws(NatSemiring, 500, 12).all_passed());
        assert!(check_monad_and_strength_laws(RatSemiring, 500, 13).all_passed());
        assert!(check_monad_and_strength_laws(MinPlusSemiring, 500, 14).all_passed());
    }

    #[test]
    fn kleisli_unit_and_associativity_sampled() {
        use rand::SeedableRng;
        let s = NatSemiring;
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..200 {
            let w = sample_weighting(s, &mut rng, 5);
            // unit is a two-sided identity for bind
            assert_eq!(w.bind(|k| Weighting::unit(s, *k)), w);

            let table_f: Vec<Weighting<u32, NatSemiring>> =
                (0..5).map(|_| sample_weighting(s, &mut rng, 5)).collect();
            let table_g: Vec<Weighting<u32, NatSemiring>> =
                (0..5).map(|_| sample_weighting(s, &mut rng, 5)).collect();
            let f = |k: &u32| table_f[*k as usize].clone();
            let g = |k: &u32| table_g[*k as usize].clone();
            let lhs = w.bind(&f).bind(&g);
            let rhs = w.bind(|k| f(k).bind(&g));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn rendering_format() {
        let s = RatSemiring;
        let half = parse_rational("1/2").unwrap();
        let w = Weighting::from_entries(s, [("y", half.clone()), ("x", half.clone())]);
        assert_eq!(w.to_string(), "{x:1/2, y:1/2}");
        assert_eq!(bset(&["y", "x"]).to_string(), "{x, y}");
        assert_eq!(Weighting::<u32, BoolSemiring>::new(BoolSemiring).to_string(), "{}");
    }

    #[test]
    fn zero_entries_are_pruned() {
        let s = NatSemiring;
        let mut w = Weighting::new(s);
        w.insert_add("x", BigUint::from(0u32));
        assert!(w.is_empty());
        w.insert_add("x", BigUint::from(3u32));
        assert_eq!(w.len(), 1);
        let scaled = w.scale(&BigUint::from(0u32));
        assert!(scaled.is_empty());
    }
}
