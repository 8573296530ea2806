//! The trace logic: formulas `0 | √ | φ∨φ | ⟨a⟩φ | s·φ`, semiring-valued
//! evaluation against automata, normal forms under the trace axioms,
//! separating-formula synthesis and equation refutation.
//!
//! Disjunction is interpreted by the semiring addition throughout: join
//! for booleans, numeric addition for rationals. A normal form is a
//! finite weighted combination of trace atoms `⟨a_1⟩…⟨a_k⟩√`, i.e. a
//! weighting over words.

use std::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::automaton::{Alphabet, Automaton, AutomatonError, StateId, Step, Word};
use crate::semiring::Semiring;
use crate::trace::tr;
use crate::weighting::{ProbabilityMode, Weighting};

/// Formula AST. `Tick` is √ (successful termination), `Join` is ∨,
/// `Diam` is ⟨a⟩, `Scale` is the weighted prefix `s·φ`. Negation and
/// conjunction do not exist in this logic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formula<S: Semiring> {
    Zero,
    Tick,
    Join(Box<Formula<S>>, Box<Formula<S>>),
    Diam(String, Box<Formula<S>>),
    Scale(S::Elem, Box<Formula<S>>),
}

#[derive(Debug, Error, PartialEq)]
pub enum LogicError {
    #[error("syntax error at position {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("unknown action `{0}`")]
    UnknownAction(String),
}

impl<S: Semiring> Formula<S> {
    pub fn join(l: Formula<S>, r: Formula<S>) -> Formula<S> {
        Formula::Join(Box::new(l), Box::new(r))
    }

    pub fn diam(action: &str, body: Formula<S>) -> Formula<S> {
        Formula::Diam(action.to_string(), Box::new(body))
    }

    pub fn scale(scalar: S::Elem, body: Formula<S>) -> Formula<S> {
        Formula::Scale(scalar, Box::new(body))
    }

    /// The trace atom `⟨a_1⟩…⟨a_k⟩√` for a word.
    pub fn atom(alphabet: &Alphabet, word: &Word) -> Formula<S> {
        word.actions().iter().rev().fold(Formula::Tick, |acc, a| {
            Formula::diam(alphabet.name(*a), acc)
        })
    }

    /// Maximum ⟨a⟩-nesting.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Zero | Formula::Tick => 0,
            Formula::Join(l, r) => l.depth().max(r.depth()),
            Formula::Diam(_, body) => 1 + body.depth(),
            Formula::Scale(_, body) => body.depth(),
        }
    }

    fn actions_into(&self, out: &mut Vec<String>) {
        match self {
            Formula::Zero | Formula::Tick => {}
            Formula::Join(l, r) => {
                l.actions_into(out);
                r.actions_into(out);
            }
            Formula::Diam(a, body) => {
                if !out.contains(a) {
                    out.push(a.clone());
                }
                body.actions_into(out);
            }
            Formula::Scale(_, body) => body.actions_into(out),
        }
    }

    /// Actions occurring in the formula, in first-occurrence order.
    pub fn actions(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.actions_into(&mut out);
        out
    }

    fn scalars_into(&self, out: &mut Vec<S::Elem>) {
        match self {
            Formula::Zero | Formula::Tick => {}
            Formula::Join(l, r) => {
                l.scalars_into(out);
                r.scalars_into(out);
            }
            Formula::Diam(_, body) => body.scalars_into(out),
            Formula::Scale(s, body) => {
                if !out.contains(s) {
                    out.push(s.clone());
                }
                body.scalars_into(out);
            }
        }
    }
}

impl<S: Semiring> fmt::Display for Formula<S> {
    /// Canonical printer with minimal parentheses; `+` prints
    /// left-associated, so output reparses to an equal AST.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = S::default();
        match self {
            Formula::Zero => write!(f, "0"),
            Formula::Tick => write!(f, "end"),
            Formula::Join(l, r) => {
                write!(f, "{l} + ")?;
                if matches!(**r, Formula::Join(_, _)) {
                    write!(f, "({r})")
                } else {
                    write!(f, "{r}")
                }
            }
            Formula::Diam(a, body) => {
                if matches!(**body, Formula::Join(_, _)) {
                    write!(f, "<{a}>({body})")
                } else {
                    write!(f, "<{a}>{body}")
                }
            }
            Formula::Scale(scalar, body) => {
                write!(f, "{} * ", s.format_elem(scalar))?;
                if matches!(**body, Formula::Join(_, _)) {
                    write!(f, "({body})")
                } else {
                    write!(f, "{body}")
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Diam(String),
    Atom(String),
    Plus,
    Star,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Token)>, LogicError> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                tokens.push((i, Token::Plus));
                i += 1;
            }
            '*' => {
                tokens.push((i, Token::Star));
                i += 1;
            }
            '(' => {
                tokens.push((i, Token::LParen));
                i += 1;
            }
            ')' => {
                tokens.push((i, Token::RParen));
                i += 1;
            }
            '<' => {
                let close = text[i..].find('>').map(|j| i + j).ok_or(LogicError::Syntax {
                    pos: i,
                    message: "unterminated `<`".into(),
                })?;
                let name = &text[i + 1..close];
                if name.is_empty()
                    || !name.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_')
                {
                    return Err(LogicError::Syntax {
                        pos: i,
                        message: format!("invalid action name `{name}`"),
                    });
                }
                tokens.push((i, Token::Diam(name.to_string())));
                i = close + 1;
            }
            _ if c.is_ascii_alphanumeric() || c == '_' || c == '/' || c == '.' || c == '-' => {
                let start = i;
                while i < bytes.len() {
                    let b = bytes[i] as char;
                    if b.is_ascii_alphanumeric() || b == '_' || b == '/' || b == '.' || b == '-' {
                        i += 1;
                    } else {
                        break;
                    }
                }
                tokens.push((start, Token::Atom(text[start..i].to_string())));
            }
            other => {
                return Err(LogicError::Syntax {
                    pos: i,
                    message: format!("unexpected character `{other}`"),
                });
            }
        }
    }
    Ok(tokens)
}

struct Parser<'a, S: Semiring> {
    semiring: S,
    tokens: &'a [(usize, Token)],
    pos: usize,
    end: usize,
}

impl<'a, S: Semiring> Parser<'a, S> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|(p, _)| *p)
            .unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Token> {
        let tok = self.tokens.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        tok
    }

    fn error(&self, message: impl Into<String>) -> LogicError {
        LogicError::Syntax {
            pos: self.here(),
            message: message.into(),
        }
    }

    // join := unary (`+` unary)*, folded to the left
    fn parse_join(&mut self) -> Result<Formula<S>, LogicError> {
        let mut acc = self.parse_unary()?;
        while self.peek() == Some(&Token::Plus) {
            self.bump();
            let rhs = self.parse_unary()?;
            acc = Formula::join(acc, rhs);
        }
        Ok(acc)
    }

    // unary := `<a>` unary | scalar `*` unary | atom
    fn parse_unary(&mut self) -> Result<Formula<S>, LogicError> {
        match self.peek() {
            Some(Token::Diam(_)) => {
                let Some(Token::Diam(a)) = self.bump() else {
                    unreachable!()
                };
                Ok(Formula::Diam(a, Box::new(self.parse_unary()?)))
            }
            Some(Token::Atom(_)) if self.tokens.get(self.pos + 1).map(|(_, t)| t) == Some(&Token::Star) => {
                let Some(Token::Atom(text)) = self.bump() else {
                    unreachable!()
                };
                let at = self.tokens[self.pos - 1].0;
                let scalar = self.semiring.parse_elem(&text).map_err(|e| LogicError::Syntax {
                    pos: at,
                    message: e,
                })?;
                self.bump(); // `*`
                Ok(Formula::Scale(scalar, Box::new(self.parse_unary()?)))
            }
            _ => self.parse_atom(),
        }
    }

    fn parse_atom(&mut self) -> Result<Formula<S>, LogicError> {
        match self.peek().cloned() {
            Some(Token::Atom(text)) => {
                self.bump();
                match text.as_str() {
                    "0" => Ok(Formula::Zero),
                    "end" => Ok(Formula::Tick),
                    other => Err(self.error(format!(
                        "unexpected `{other}` (expected `0`, `end`, `<a>`, or `(`)"
                    ))),
                }
            }
            Some(Token::LParen) => {
                self.bump();
                let inner = self.parse_join()?;
                if self.peek() == Some(&Token::RParen) {
                    self.bump();
                    Ok(inner)
                } else {
                    Err(self.error("expected `)`"))
                }
            }
            Some(tok) => Err(self.error(format!("unexpected token {tok:?}"))),
            None => Err(self.error("unexpected end of formula")),
        }
    }
}

/// Parses the formula grammar `0 | end | <a> φ | φ + ψ | s * φ` with
/// parentheses. Unknown actions are deferred to evaluation time.
pub fn parse_formula<S: Semiring>(s: S, text: &str) -> Result<Formula<S>, LogicError> {
    let tokens = lex(text)?;
    let mut parser = Parser {
        semiring: s,
        tokens: &tokens,
        pos: 0,
        end: text.len(),
    };
    let formula = parser.parse_join()?;
    if parser.pos != tokens.len() {
        return Err(parser.error("trailing input after formula"));
    }
    Ok(formula)
}

/// Evaluates a formula at every state at once (one vector per
/// subformula, so evaluation is linear in the AST size).
pub fn eval_all<S: Semiring>(
    aut: &Automaton<S>,
    formula: &Formula<S>,
) -> Result<Vec<S::Elem>, LogicError> {
    let s = aut.semiring();
    match formula {
        Formula::Zero => Ok(vec![s.zero(); aut.state_count()]),
        Formula::Tick => Ok(aut.states().map(|x| aut.accept_weight(x)).collect()),
        Formula::Join(l, r) => {
            let lv = eval_all(aut, l)?;
            let rv = eval_all(aut, r)?;
            Ok(lv.iter().zip(&rv).map(|(a, b)| s.add(a, b)).collect())
        }
        Formula::Scale(scalar, body) => {
            let v = eval_all(aut, body)?;
            Ok(v.iter().map(|a| s.mul(scalar, a)).collect())
        }
        Formula::Diam(name, body) => {
            let a = aut
                .alphabet()
                .lookup(name)
                .ok_or_else(|| LogicError::UnknownAction(name.clone()))?;
            let v = eval_all(aut, body)?;
            Ok(aut
                .states()
                .map(|x| {
                    let mut acc = s.zero();
                    for (step, weight) in aut.gamma(x).iter() {
                        if let Step::Act(b, y) = step {
                            if *b == a {
                                acc = s.add(&acc, &s.mul(weight, &v[y.0]));
                            }
                        }
                    }
                    acc
                })
                .collect())
        }
    }
}

/// Evaluates a formula at one state.
pub fn eval<S: Semiring>(
    aut: &Automaton<S>,
    formula: &Formula<S>,
    x: StateId,
) -> Result<S::Elem, LogicError> {
    Ok(eval_all(aut, formula)?[x.0].clone())
}

/// Rewrites a formula to its normal form: the weighting over words that
/// is invariant under every trace axiom. `⟨a⟩` prepends the action,
/// `∨` adds pointwise, `s·` multiplies coefficients, `0` is empty.
pub fn normal_form<S: Semiring>(
    formula: &Formula<S>,
    alphabet: &Alphabet,
) -> Result<Weighting<Word, S>, LogicError> {
    let s = S::default();
    match formula {
        Formula::Zero => Ok(Weighting::new(s)),
        Formula::Tick => Ok(Weighting::unit(s, Word::empty())),
        Formula::Join(l, r) => Ok(normal_form(l, alphabet)?.add(&normal_form(r, alphabet)?)),
        Formula::Scale(scalar, body) => Ok(normal_form(body, alphabet)?.scale(scalar)),
        Formula::Diam(name, body) => {
            let a = alphabet
                .lookup(name)
                .ok_or_else(|| LogicError::UnknownAction(name.clone()))?;
            Ok(normal_form(body, alphabet)?.map(|w| w.cons(a)))
        }
    }
}

/// Bilinear pairing of a normal form against a trace weighting:
/// `Σ_w nf(w)·t(w)`.
pub fn pairing<S: Semiring>(nf: &Weighting<Word, S>, t: &Weighting<Word, S>) -> S::Elem {
    let s = nf.semiring();
    crate::semiring::fold_sum(
        s,
        nf.iter().map(|(w, coeff)| s.mul(coeff, &t.weight(w))),
    )
}

fn local_rewrites<S: Semiring>(
    formula: &Formula<S>,
    actions: &[String],
    scalars: &[S::Elem],
) -> Vec<Formula<S>> {
    let s = S::default();
    let mut out = Vec::new();
    match formula {
        Formula::Zero => {
            // reverse of ⟨a⟩0 = 0 and of s·0 = 0
            for a in actions {
                out.push(Formula::diam(a, Formula::Zero));
            }
            for scalar in scalars {
                out.push(Formula::scale(scalar.clone(), Formula::Zero));
            }
        }
        Formula::Diam(a, body) => match &**body {
            Formula::Zero => out.push(Formula::Zero),
            Formula::Join(p, q) => out.push(Formula::join(
                Formula::diam(a, (**p).clone()),
                Formula::diam(a, (**q).clone()),
            )),
            _ => {}
        },
        Formula::Join(l, r) => {
            // commutativity
            out.push(Formula::join((**r).clone(), (**l).clone()));
            // associativity in both directions
            if let Formula::Join(p, q) = &**l {
                out.push(Formula::join(
                    (**p).clone(),
                    Formula::join((**q).clone(), (**r).clone()),
                ));
            }
            if let Formula::Join(p, q) = &**r {
                out.push(Formula::join(
                    Formula::join((**l).clone(), (**p).clone()),
                    (**q).clone(),
                ));
            }
            // unit
            if matches!(**r, Formula::Zero) {
                out.push((**l).clone());
            }
            if matches!(**l, Formula::Zero) {
                out.push((**r).clone());
            }
            // reverse diamond distribution: ⟨a⟩φ ∨ ⟨a⟩ψ = ⟨a⟩(φ∨ψ)
            if let (Formula::Diam(a, p), Formula::Diam(b, q)) = (&**l, &**r) {
                if a == b {
                    out.push(Formula::diam(
                        a,
                        Formula::join((**p).clone(), (**q).clone()),
                    ));
                }
            }
            // reverse scalar distribution: s·φ ∨ s·ψ = s·(φ∨ψ)
            if let (Formula::Scale(c, p), Formula::Scale(d, q)) = (&**l, &**r) {
                if s.eq_elem(c, d) {
                    out.push(Formula::scale(
                        c.clone(),
                        Formula::join((**p).clone(), (**q).clone()),
                    ));
                }
            }
        }
        Formula::Scale(scalar, body) => match &**body {
            Formula::Zero => out.push(Formula::Zero),
            Formula::Join(p, q) => out.push(Formula::join(
                Formula::scale(scalar.clone(), (**p).clone()),
                Formula::scale(scalar.clone(), (**q).clone()),
            )),
            Formula::Scale(inner, p) => out.push(Formula::scale(
                s.mul(scalar, inner),
                (**p).clone(),
            )),
            _ => {}
        },
        Formula::Tick => {}
    }
    // reverse join unit applies at every position
    out.push(Formula::join(formula.clone(), Formula::Zero));
    out
}

fn rewrites_anywhere<S: Semiring>(
    formula: &Formula<S>,
    actions: &[String],
    scalars: &[S::Elem],
) -> Vec<Formula<S>> {
    let mut out = local_rewrites(formula, actions, scalars);
    match formula {
        Formula::Join(l, r) => {
            for l2 in rewrites_anywhere(l, actions, scalars) {
                out.push(Formula::join(l2, (**r).clone()));
            }
            for r2 in rewrites_anywhere(r, actions, scalars) {
                out.push(Formula::join((**l).clone(), r2));
            }
        }
        Formula::Diam(a, body) => {
            for b2 in rewrites_anywhere(body, actions, scalars) {
                out.push(Formula::diam(a, b2));
            }
        }
        Formula::Scale(scalar, body) => {
            for b2 in rewrites_anywhere(body, actions, scalars) {
                out.push(Formula::scale(scalar.clone(), b2));
            }
        }
        _ => {}
    }
    out
}

/// Applies one axiom instance (in either direction) at a seeded-random
/// position. Identity when no redex exists. Every candidate preserves
/// the normal form.
pub fn apply_axiom_once<S: Semiring>(formula: &Formula<S>, seed: u64) -> Formula<S> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let actions = formula.actions();
    let mut scalars = Vec::new();
    formula.scalars_into(&mut scalars);
    let candidates = rewrites_anywhere(formula, &actions, &scalars);
    if candidates.is_empty() {
        formula.clone()
    } else {
        let i = rng.gen_range(0..candidates.len());
        candidates[i].clone()
    }
}

/// Finds the least word (length-lex) where the trace weightings of `x`
/// and `y` differ at depths up to `max_depth`, returned as a trace-atom
/// formula; `None` when the states agree on all those words.
pub fn distinguish<S: Semiring>(
    aut: &Automaton<S>,
    x: StateId,
    y: StateId,
    max_depth: usize,
) -> Option<Formula<S>> {
    let t = tr(aut, max_depth + 1);
    let wx = t.state(x);
    let wy = t.state(y);
    let mut words: Vec<&Word> = wx.support().chain(wy.support()).collect();
    words.sort();
    words.dedup();
    let s = aut.semiring();
    for w in words {
        if !s.eq_elem(&wx.weight(w), &wy.weight(w)) {
            return Some(Formula::atom(aut.alphabet(), w));
        }
    }
    None
}

/// Refutes an underivable equation: when the normal forms of `φ` and
/// `ψ` differ, builds the chain automaton for the least differing word
/// and returns it with its initial state; `None` when the equation is
/// derivable from the axioms.
pub fn refute<S: Semiring>(
    s: S,
    alphabet: &Alphabet,
    phi: &Formula<S>,
    psi: &Formula<S>,
) -> Result<Option<(Automaton<S>, StateId)>, LogicError> {
    let nf_phi = normal_form(phi, alphabet)?;
    let nf_psi = normal_form(psi, alphabet)?;
    if nf_phi == nf_psi {
        return Ok(None);
    }
    let mut words: Vec<&Word> = nf_phi.support().chain(nf_psi.support()).collect();
    words.sort();
    words.dedup();
    let witness = words
        .into_iter()
        .find(|w| !s.eq_elem(&nf_phi.weight(w), &nf_psi.weight(w)))
        .expect("unequal normal forms differ on some word")
        .clone();

    let k = witness.len();
    let states: Vec<String> = (0..=k).map(|i| format!("s{i}")).collect();
    let mut out = vec![Weighting::new(s); k + 1];
    for (i, a) in witness.actions().iter().enumerate() {
        out[i].insert_add(Step::Act(*a, StateId(i + 1)), s.one());
    }
    out[k].insert_add(Step::Stop, s.one());
    let chain = Automaton::from_parts(s, alphabet.clone(), states, out, ProbabilityMode::None)
        .expect("chain automaton is valid");
    Ok(Some((chain, StateId(0))))
}

/// Seeded random formula generator for test corpora. `max_depth` bounds
/// the ⟨a⟩-nesting.
pub fn random_formula<S: Semiring>(
    s: S,
    alphabet: &Alphabet,
    max_depth: usize,
    rng: &mut impl Rng,
) -> Formula<S> {
    let choice = if max_depth == 0 || alphabet.is_empty() {
        rng.gen_range(0..4)
    } else {
        rng.gen_range(0..6)
    };
    match choice {
        0 => Formula::Zero,
        1 | 2 => Formula::Tick,
        3 => Formula::scale(s.sample(rng), random_formula(s, alphabet, max_depth, rng)),
        4 => Formula::join(
            random_formula(s, alphabet, max_depth, rng),
            random_formula(s, alphabet, max_depth, rng),
        ),
        _ => {
            let a = rng.gen_range(0..alphabet.len());
            Formula::diam(
                alphabet.name(crate::automaton::ActionId(a)),
                random_formula(s, alphabet, max_depth - 1, rng),
            )
        }
    }
}

/// Convenience wrapper: resolve state names through the automaton.
pub fn resolve_state<S: Semiring>(
    aut: &Automaton<S>,
    name: &str,
) -> Result<StateId, AutomatonError> {
    aut.state(name)
}
