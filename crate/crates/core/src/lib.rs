//! Finite trace semantics and trace logic for semiring-weighted branching
//! transition systems.
//!
//! A system is a coalgebra `γ : X → B({∗} + Act × X)` where `B` is the
//! finite-support weighting monad of a semiring. This crate computes the
//! trace maps `tr_n`, decides trace equivalence (bounded for every
//! semiring, exactly for boolean and rational weights), evaluates the
//! trace logic `0 | √ | φ∨φ | ⟨a⟩φ | s·φ`, rewrites formulas to normal
//! form under the trace axioms, synthesizes separating formulas, and
//! refutes underivable equations with chain-automaton countermodels.

pub mod automaton;
pub mod laws;
pub mod logic;
pub mod semiring;
pub mod trace;
pub mod weighting;

pub use automaton::{Alphabet, AnyAutomaton, Automaton, StateId, Step, Word};
pub use laws::{LawReport, LawResult};
pub use semiring::{
    BoolSemiring, MinPlusSemiring, NatSemiring, RatSemiring, Semiring, SemiringKind,
};
pub use weighting::{ProbabilityMode, Weighting};
