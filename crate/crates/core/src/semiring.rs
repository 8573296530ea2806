//! Semiring interface and the four built-in weight domains.
//!
//! A semiring fixes the weight algebra of a branching transition system:
//! booleans give nondeterminism, naturals give multisets, exact rationals
//! give (sub)probability, and the tropical semiring gives cost weighting.

use std::fmt::Debug;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::laws::{LawReport, LawResult};

/// A commutative semiring with decidable equality.
///
/// Instances are zero-sized tags; the element type carries the values.
/// All operations are pure, so instances and elements are freely shareable.
pub trait Semiring: Copy + Ord + Eq + Debug + Default + 'static {
    type Elem: Clone + Eq + Ord + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    /// Semiring element equality. Structural equality is correct for all
    /// built-ins because their representations are canonical.
    fn eq_elem(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        a == b
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        self.eq_elem(a, &self.zero())
    }

    /// Name used in files and CLI flags.
    fn name(&self) -> &'static str;

    /// Deterministic test-value sampler.
    fn sample(&self, rng: &mut impl Rng) -> Self::Elem;

    /// Exact division, where the carrier supports it (used to normalize
    /// probability rows). `None` means the semiring has no division.
    fn try_div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        let _ = (a, b);
        None
    }

    fn parse_elem(&self, text: &str) -> Result<Self::Elem, String>;
    fn format_elem(&self, a: &Self::Elem) -> String;

    /// Whether weights are printed in weighting renderings. The boolean
    /// semiring omits them: a weighting is just a finite set.
    fn show_weights(&self) -> bool {
        true
    }
}

/// Fold of `add` over a sequence, starting from `zero`.
pub fn fold_sum<S: Semiring>(s: S, xs: impl IntoIterator<Item = S::Elem>) -> S::Elem {
    xs.into_iter().fold(s.zero(), |acc, x| s.add(&acc, &x))
}

/// Fold of `mul` over a sequence, starting from `one`.
pub fn fold_product<S: Semiring>(s: S, xs: impl IntoIterator<Item = S::Elem>) -> S::Elem {
    xs.into_iter().fold(s.one(), |acc, x| s.mul(&acc, &x))
}

/// The boolean semiring ({false, true}, or, and). Induces finite powerset.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct BoolSemiring;

impl Semiring for BoolSemiring {
    type Elem = bool;

    fn zero(&self) -> bool {
        false
    }
    fn one(&self) -> bool {
        true
    }
    fn add(&self, a: &bool, b: &bool) -> bool {
        *a || *b
    }
    fn mul(&self, a: &bool, b: &bool) -> bool {
        *a && *b
    }
    fn name(&self) -> &'static str {
        "boolean"
    }
    fn sample(&self, rng: &mut impl Rng) -> bool {
        rng.gen()
    }
    fn parse_elem(&self, text: &str) -> Result<bool, String> {
        match text {
            "1" | "true" => Ok(true),
            "0" | "false" => Ok(false),
            other => Err(format!("invalid boolean weight `{other}`")),
        }
    }
    fn format_elem(&self, a: &bool) -> String {
        if *a { "true" } else { "false" }.to_string()
    }
    fn show_weights(&self) -> bool {
        false
    }
}

/// The natural numbers (ℕ, +, ·). Induces the bag (multiset) functor.
/// Arbitrary precision, so no overflow.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct NatSemiring;

impl Semiring for NatSemiring {
    type Elem = BigUint;

    fn zero(&self) -> BigUint {
        BigUint::zero()
    }
    fn one(&self) -> BigUint {
        BigUint::one()
    }
    fn add(&self, a: &BigUint, b: &BigUint) -> BigUint {
        a + b
    }
    fn mul(&self, a: &BigUint, b: &BigUint) -> BigUint {
        a * b
    }
    fn name(&self) -> &'static str {
        "nat"
    }
    fn sample(&self, rng: &mut impl Rng) -> BigUint {
        BigUint::from(rng.gen_range(0u32..7))
    }
    fn parse_elem(&self, text: &str) -> Result<BigUint, String> {
        BigUint::from_str(text).map_err(|_| format!("invalid natural weight `{text}`"))
    }
    fn format_elem(&self, a: &BigUint) -> String {
        a.to_string()
    }
}

/// Exact rationals (ℚ, +, ·). Used for probability weights so that trace
/// equality is literal equality, never a tolerance check.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct RatSemiring;

impl Semiring for RatSemiring {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn name(&self) -> &'static str {
        "rational"
    }
    fn sample(&self, rng: &mut impl Rng) -> BigRational {
        let numer = rng.gen_range(0i64..7);
        let denom = rng.gen_range(1i64..5);
        BigRational::new(BigInt::from(numer), BigInt::from(denom))
    }
    fn try_div(&self, a: &BigRational, b: &BigRational) -> Option<BigRational> {
        if b.is_zero() {
            None
        } else {
            Some(a / b)
        }
    }
    fn parse_elem(&self, text: &str) -> Result<BigRational, String> {
        parse_rational(text).ok_or_else(|| format!("invalid rational weight `{text}`"))
    }
    fn format_elem(&self, a: &BigRational) -> String {
        a.to_string()
    }
}

/// Exact decimal or fraction parsing: `p/q`, `3`, `-1/2`, `0.25`.
/// Decimals convert exactly, e.g. "0.5" becomes 1/2.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    if text.is_empty() {
        return None;
    }
    if let Some(dot) = text.find('.') {
        let (int_part, frac_part) = (&text[..dot], &text[dot + 1..]);
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let (sign, digits) = match int_part.strip_prefix('-') {
            Some(rest) => (-1, rest),
            None => (1, int_part.strip_prefix('+').unwrap_or(int_part)),
        };
        if !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let whole = if digits.is_empty() {
            BigInt::zero()
        } else {
            BigInt::from_str(digits).ok()?
        };
        let frac = BigInt::from_str(frac_part).ok()?;
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let numer = whole * &scale + frac;
        return Some(BigRational::new(numer * BigInt::from(sign), scale));
    }
    BigRational::from_str(text).ok()
}

/// Element of the tropical semiring: a natural number cost or infinity.
/// `Infinity` is the additive unit (neutral for min) and absorbs the
/// multiplicative operation, which is integer addition.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Tropical {
    Finite(BigUint),
    Infinity,
}

impl Tropical {
    pub fn finite(n: u64) -> Self {
        Tropical::Finite(BigUint::from(n))
    }
}

/// The min-plus (tropical) semiring (ℕ ∪ {∞}, min, +, ∞, 0).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct MinPlusSemiring;

impl Semiring for MinPlusSemiring {
    type Elem = Tropical;

    fn zero(&self) -> Tropical {
        Tropical::Infinity
    }
    fn one(&self) -> Tropical {
        Tropical::Finite(BigUint::zero())
    }
    fn add(&self, a: &Tropical, b: &Tropical) -> Tropical {
        match (a, b) {
            (Tropical::Infinity, x) | (x, Tropical::Infinity) => x.clone(),
            (Tropical::Finite(m), Tropical::Finite(n)) => Tropical::Finite(m.min(n).clone()),
        }
    }
    fn mul(&self, a: &Tropical, b: &Tropical) -> Tropical {
        match (a, b) {
            (Tropical::Infinity, _) | (_, Tropical::Infinity) => Tropical::Infinity,
            (Tropical::Finite(m), Tropical::Finite(n)) => Tropical::Finite(m + n),
        }
    }
    fn name(&self) -> &'static str {
        "minplus"
    }
    fn sample(&self, rng: &mut impl Rng) -> Tropical {
        match rng.gen_range(0u32..8) {
            7 => Tropical::Infinity,
            n => Tropical::Finite(BigUint::from(n)),
        }
    }
    fn parse_elem(&self, text: &str) -> Result<Tropical, String> {
        if text == "inf" {
            return Ok(Tropical::Infinity);
        }
        BigUint::from_str(text)
            .map(Tropical::Finite)
            .map_err(|_| format!("invalid min-plus weight `{text}` (expected integer or `inf`)"))
    }
    fn format_elem(&self, a: &Tropical) -> String {
        match a {
            Tropical::Infinity => "inf".to_string(),
            Tropical::Finite(n) => n.to_string(),
        }
    }
}

/// The four semiring names accepted in files and on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SemiringKind {
    Boolean,
    Nat,
    Rational,
    MinPlus,
}

impl SemiringKind {
    pub fn parse(name: &str) -> Option<SemiringKind> {
        match name {
            "boolean" => Some(SemiringKind::Boolean),
            "nat" => Some(SemiringKind::Nat),
            "rational" => Some(SemiringKind::Rational),
            "minplus" => Some(SemiringKind::MinPlus),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SemiringKind::Boolean => "boolean",
            SemiringKind::Nat => "nat",
            SemiringKind::Rational => "rational",
            SemiringKind::MinPlus => "minplus",
        }
    }
}

/// Checks the semiring axioms on seeded samples: associativity and
/// commutativity of both operations, units, distributivity, absorption.
/// Failures are reported with a witness triple, never raised.
pub fn check_semiring_laws<S: Semiring>(s: S, sample_count: usize, seed: u64) -> LawReport {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let samples: Vec<(S::Elem, S::Elem, S::Elem)> = (0..sample_count)
        .map(|_| (s.sample(&mut rng), s.sample(&mut rng), s.sample(&mut rng)))
        .collect();

    let mut report = LawReport::new(format!("semiring laws: {}", s.name()));
    let mut law = |name: &str, check: &dyn Fn(&(S::Elem, S::Elem, S::Elem)) -> bool| {
        let cex = samples
            .iter()
            .find(|t| !check(t))
            .map(|t| format!("{:?}", t));
        report.push(LawResult::new(name, cex));
    };

    law("add-associative", &|(a, b, c)| {
        s.eq_elem(&s.add(&s.add(a, b), c), &s.add(a, &s.add(b, c)))
    });
    law("add-commutative", &|(a, b, _)| {
        s.eq_elem(&s.add(a, b), &s.add(b, a))
    });
    law("add-unit", &|(a, _, _)| {
        s.eq_elem(&s.add(a, &s.zero()), a) && s.eq_elem(&s.add(&s.zero(), a), a)
    });
    law("mul-associative", &|(a, b, c)| {
        s.eq_elem(&s.mul(&s.mul(a, b), c), &s.mul(a, &s.mul(b, c)))
    });
    law("mul-commutative", &|(a, b, _)| {
        s.eq_elem(&s.mul(a, b), &s.mul(b, a))
    });
    law("mul-unit", &|(a, _, _)| {
        s.eq_elem(&s.mul(a, &s.one()), a) && s.eq_elem(&s.mul(&s.one(), a), a)
    });
    law("distribute-left", &|(a, b, c)| {
        s.eq_elem(&s.mul(a, &s.add(b, c)), &s.add(&s.mul(a, b), &s.mul(a, c)))
    });
    law("distribute-right", &|(a, b, c)| {
        s.eq_elem(&s.mul(&s.add(a, b), c), &s.add(&s.mul(a, c), &s.mul(b, c)))
    });
    law("zero-absorbs", &|(a, _, _)| {
        s.is_zero(&s.mul(a, &s.zero())) && s.is_zero(&s.mul(&s.zero(), a))
    });
    report
}

/// Exact positive-rational check used by probability validation.
pub fn rational_is_negative(r: &BigRational) -> bool {
    r.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fold_sum_examples() {
        let b = BoolSemiring;
        assert!(fold_sum(b, [false, true, false]));
        let mp = MinPlusSemiring;
        assert_eq!(fold_sum(mp, []), Tropical::Infinity);
        let q = RatSemiring;
        let half = parse_rational("1/2").unwrap();
        let third = parse_rational("1/3").unwrap();
        assert_eq!(fold_sum(q, [half, third]), parse_rational("5/6").unwrap());
    }

    #[test]
    fn fold_product_examples() {
        let mp = MinPlusSemiring;
        assert_eq!(
            fold_product(mp, [Tropical::finite(2), Tropical::finite(3)]),
            Tropical::finite(5)
        );
        assert!(fold_product(BoolSemiring, []));
        let n = NatSemiring;
        assert_eq!(
            fold_product(
                n,
                [BigUint::from(2u32), BigUint::from(3u32), BigUint::zero()]
            ),
            BigUint::zero()
        );
    }

    #[test]
    fn rational_arithmetic_is_exact() {
        let q = RatSemiring;
        let third = parse_rational("1/3").unwrap();
        let sixth = parse_rational("1/6").unwrap();
        assert!(q.eq_elem(&q.add(&third, &sixth), &parse_rational("1/2").unwrap()));
    }

    #[test]
    fn decimal_parsing_is_exact() {
        assert_eq!(parse_rational("0.5").unwrap(), parse_rational("1/2").unwrap());
        assert_eq!(
            parse_rational("0.25").unwrap(),
            parse_rational("1/4").unwrap()
        );
        assert_eq!(parse_rational("2.50").unwrap(), parse_rational("5/2").unwrap());
        assert_eq!(
            parse_rational("-0.1").unwrap(),
            parse_rational("-1/10").unwrap()
        );
        assert!(parse_rational("1.2.3").is_none());
        assert!(parse_rational("").is_none());
    }

    #[test]
    fn builtin_laws_pass() {
        assert!(check_semiring_laws(BoolSemiring, 100, 1).all_passed());
        assert!(check_semiring_laws(NatSemiring, 100, 2).all_passed());
        assert!(check_semiring_laws(RatSemiring, 100, 3).all_passed());
        assert!(check_semiring_laws(MinPlusSemiring, 100, 4).all_passed());
    }

    /// Integers under subtraction: intentionally not a semiring.
    #[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
    struct BrokenSub;

    impl Semiring for BrokenSub {
        type Elem = i64;
        fn zero(&self) -> i64 {
            0
        }
        fn one(&self) -> i64 {
            1
        }
        fn add(&self, a: &i64, b: &i64) -> i64 {
            a - b
        }
        fn mul(&self, a: &i64, b: &i64) -> i64 {
            a * b
        }
        fn name(&self) -> &'static str {
            "broken-sub"
        }
        fn sample(&self, rng: &mut impl Rng) -> i64 {
            rng.gen_range(-5..6)
        }
        fn parse_elem(&self, text: &str) -> Result<i64, String> {
            text.parse().map_err(|_| "bad".to_string())
        }
        fn format_elem(&self, a: &i64) -> String {
            a.to_string()
        }
    }

    #[test]
    fn broken_instance_reports_commutativity_failure() {
        let report = check_semiring_laws(BrokenSub, 100, 7);
        assert!(!report.all_passed());
        let comm = report
            .results()
            .iter()
            .find(|r| r.name == "add-commutative")
            .unwrap();
        assert!(!comm.passed);
        assert!(comm.counterexample.is_some());
    }

    #[test]
    fn kind_names_round_trip() {
        for kind in [
            SemiringKind::Boolean,
            SemiringKind::Nat,
            SemiringKind::Rational,
            SemiringKind::MinPlus,
        ] {
            assert_eq!(SemiringKind::parse(kind.name()), Some(kind));
        }
        assert_eq!(SemiringKind::parse("Boolean"), None);
    }
}
