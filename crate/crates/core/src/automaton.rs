//! Weighted branching automata: coalgebras `γ : X → B({∗} + Act × X)`
//! over a finite state set, with a line-oriented file format, random
//! generation for test corpora, and the distributive law that commutes
//! the transition shape past branching.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::laws::{LawReport, LawResult};
use crate::semiring::{
    BoolSemiring, MinPlusSemiring, NatSemiring, RatSemiring, Semiring, SemiringKind,
};
use crate::weighting::{flatten, sample_weighting, ProbabilityMode, Weighting};

/// Index into an automaton's alphabet. Ordering is alphabet order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ActionId(pub usize);

/// Index into an automaton's state list. Ordering is declaration order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(pub usize);

/// Ordered finite set of action names. The declaration order fixes all
/// deterministic iteration, including the length-lex order on words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
    index: BTreeMap<String, usize>,
}

fn valid_name(name: &str) -> bool {
    !name.is_empty()
        && name
            .bytes()
            .all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

impl Alphabet {
    pub fn new(names: impl IntoIterator<Item = String>) -> Result<Alphabet, String> {
        let names: Vec<String> = names.into_iter().collect();
        let mut index = BTreeMap::new();
        for (i, name) in names.iter().enumerate() {
            if !valid_name(name) {
                return Err(format!("invalid action name `{name}`"));
            }
            if index.insert(name.clone(), i).is_some() {
                return Err(format!("duplicate action `{name}`"));
            }
        }
        Ok(Alphabet { names, index })
    }

    /// Parses a whitespace-separated action list, e.g. `"a b c"`.
    pub fn parse(text: &str) -> Result<Alphabet, String> {
        Alphabet::new(text.split_whitespace().map(str::to_string))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn actions(&self) -> impl Iterator<Item = ActionId> {
        (0..self.names.len()).map(ActionId)
    }

    pub fn name(&self, a: ActionId) -> &str {
        &self.names[a.0]
    }

    pub fn lookup(&self, name: &str) -> Option<ActionId> {
        self.index.get(name).copied().map(ActionId)
    }

    /// Renders a word by concatenating action names; the empty word is ε.
    pub fn render_word(&self, w: &Word) -> String {
        if w.is_empty() {
            "ε".to_string()
        } else {
            w.actions().iter().map(|a| self.name(*a)).collect()
        }
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.names.join(" "))
    }
}

/// One transition-shape element of `TX = {∗} + Act × X`: either the
/// termination marker or an action-labelled successor.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Step<X> {
    Stop,
    Act(ActionId, X),
}

/// A finite word over the alphabet. Total order is length first, then
/// lexicographic in alphabet order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Word(Vec<ActionId>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn from_actions(actions: Vec<ActionId>) -> Word {
        Word(actions)
    }

    pub fn actions(&self) -> &[ActionId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The word `a·self`.
    pub fn cons(&self, a: ActionId) -> Word {
        let mut actions = Vec::with_capacity(self.0.len() + 1);
        actions.push(a);
        actions.extend_from_slice(&self.0);
        Word(actions)
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Word) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Word) -> std::cmp::Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

/// A finite weighted branching automaton: per-state termination weight
/// and weighted labelled edges, canonically stored as one weighting over
/// steps per state. Immutable after construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automaton<S: Semiring> {
    semiring: S,
    alphabet: Alphabet,
    states: Vec<String>,
    out: Vec<Weighting<Step<StateId>, S>>,
    mode: ProbabilityMode,
}

#[derive(Debug, Error, PartialEq)]
pub enum AutomatonError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("no states declared")]
    NoStates,
    #[error("state `{state}`: probability violation: {message}")]
    Probability { state: String, message: String },
    #[error("unknown state `{0}`")]
    UnknownState(String),
}

fn syntax(line: usize, message: impl Into<String>) -> AutomatonError {
    AutomatonError::Syntax {
        line,
        message: message.into(),
    }
}

impl<S: Semiring> Automaton<S> {
    /// Builds a validated automaton from parts. `out` must have one
    /// weighting per state, referencing only declared actions/states.
    pub fn from_parts(
        semiring: S,
        alphabet: Alphabet,
        states: Vec<String>,
        out: Vec<Weighting<Step<StateId>, S>>,
        mode: ProbabilityMode,
    ) -> Result<Automaton<S>, AutomatonError> {
        if states.is_empty() {
            return Err(AutomatonError::NoStates);
        }
        assert_eq!(states.len(), out.len());
        for row in &out {
            for (step, _) in row.iter() {
                if let Step::Act(a, StateId(x)) = step {
                    assert!(a.0 < alphabet.len() && *x < states.len());
                }
            }
        }
        Ok(Automaton {
            semiring,
            alphabet,
            states,
            out,
            mode,
        })
    }

    pub fn semiring(&self) -> S {
        self.semiring
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn mode(&self) -> ProbabilityMode {
        self.mode
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> {
        (0..self.states.len()).map(StateId)
    }

    pub fn state_name(&self, x: StateId) -> &str {
        &self.states[x.0]
    }

    pub fn state(&self, name: &str) -> Result<StateId, AutomatonError> {
        self.states
            .iter()
            .position(|s| s == name)
            .map(StateId)
            .ok_or_else(|| AutomatonError::UnknownState(name.to_string()))
    }

    /// The coalgebra map at `x`: the stored out-weighting over steps.
    pub fn gamma(&self, x: StateId) -> &Weighting<Step<StateId>, S> {
        &self.out[x.0]
    }

    /// Termination weight of `x` (weight of ∗).
    pub fn accept_weight(&self, x: StateId) -> S::Elem {
        self.gamma(x).weight(&Step::Stop)
    }

    /// Weight of the edge `x -a-> y`.
    pub fn edge_weight(&self, x: StateId, a: ActionId, y: StateId) -> S::Elem {
        self.gamma(x).weight(&Step::Act(a, y))
    }

    /// Canonical printer for the automaton file format. States and edges
    /// come out in declaration/alphabet order; parsing the output gives
    /// back an equal automaton.
    pub fn print(&self) -> String {
        let s = self.semiring;
        let mut text = String::new();
        text.push_str(&format!("semiring {}\n", s.name()));
        if self.mode != ProbabilityMode::None {
            text.push_str(&format!("mode {}\n", self.mode.name()));
        }
        text.push_str(&format!("alphabet {}\n", self.alphabet));
        text.push_str(&format!("states {}\n", self.states.join(" ")));
        for x in self.states() {
            let w = self.accept_weight(x);
            if !s.is_zero(&w) {
                if s.show_weights() {
                    text.push_str(&format!(
                        "accept {} : {}\n",
                        self.state_name(x),
                        s.format_elem(&w)
                    ));
                } else {
                    text.push_str(&format!("accept {}\n", self.state_name(x)));
                }
            }
        }
        for x in self.states() {
            for (step, w) in self.gamma(x).iter() {
                if let Step::Act(a, y) = step {
                    if s.show_weights() {
                        text.push_str(&format!(
                            "edge {} -{}-> {} : {}\n",
                            self.state_name(x),
                            self.alphabet.name(*a),
                            self.state_name(*y),
                            s.format_elem(w)
                        ));
                    } else {
                        text.push_str(&format!(
                            "edge {} -{}-> {}\n",
                            self.state_name(x),
                            self.alphabet.name(*a),
                            self.state_name(*y)
                        ));
                    }
                }
            }
        }
        text
    }
}

/// The distributive law `π : TB ⇒ BT` for the transition shape
/// `{∗} + Act × (−)`: termination becomes a Dirac on ∗, and an action
/// over a weighting pushes the action label onto every key.
pub fn dist_law<X: Ord + Clone, S: Semiring>(
    s: S,
    step: &Step<Weighting<X, S>>,
) -> Weighting<Step<X>, S> {
    match step {
        Step::Stop => Weighting::unit(s, Step::Stop),
        Step::Act(a, w) => w.map(|x| Step::Act(*a, x.clone())),
    }
}

fn sample_step<X>(
    rng: &mut ChaCha8Rng,
    n_actions: usize,
    body: impl FnOnce(&mut ChaCha8Rng) -> X,
) -> Step<X> {
    if rng.gen_range(0..4) == 0 {
        Step::Stop
    } else {
        let a = ActionId(rng.gen_range(0..n_actions));
        Step::Act(a, body(rng))
    }
}

/// Checks the distributive-law axioms `π ∘ Tη = η_T` and
/// `π ∘ Tμ = μ_T ∘ Bπ ∘ π_B` plus naturality on seeded samples.
pub fn check_dist_law_axioms<S: Semiring>(s: S, sample_count: usize, seed: u64) -> LawReport {
    let mut report = LawReport::new(format!("distributive law axioms: {}", s.name()));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_actions = 2;

    let mut unit_axiom = None;
    let mut mult_axiom = None;
    let mut naturality = None;

    for _ in 0..sample_count {
        // π ∘ Tη = η_T on a plain step
        let step: Step<u32> = sample_step(&mut rng, n_actions, |r| r.gen_range(0..6u32));
        if unit_axiom.is_none() {
            let lifted = match &step {
                Step::Stop => Step::Stop,
                Step::Act(a, x) => Step::Act(*a, Weighting::unit(s, *x)),
            };
            if dist_law(s, &lifted) != Weighting::unit(s, step.clone()) {
                unit_axiom = Some(format!("{step:?}"));
            }
        }

        // π ∘ Tμ = μ_T ∘ Bπ ∘ π_B on a step over a nested weighting
        let nested_step: Step<Weighting<Weighting<u32, S>, S>> =
            sample_step(&mut rng, n_actions, |r| {
                let size = r.gen_range(0..3);
                let mut w = Weighting::new(s);
                for _ in 0..size {
                    let inner = sample_weighting(s, r, 6);
                    w.insert_add(inner, s.sample(r));
                }
                w
            });
        if mult_axiom.is_none() {
            let lhs = {
                let flattened = match &nested_step {
                    Step::Stop => Step::Stop,
                    Step::Act(a, ww) => Step::Act(*a, flatten(ww)),
                };
                dist_law(s, &flattened)
            };
            let rhs = flatten(&dist_law(s, &nested_step).map(|inner| dist_law(s, inner)));
            if lhs != rhs {
                mult_axiom = Some(format!("{nested_step:?}"));
            }
        }

        // naturality: BTf ∘ π = π ∘ TBf for a sampled f
        let table: Vec<u32> = (0..6).map(|_| rng.gen_range(0..6)).collect();
        let f = |x: &u32| table[*x as usize];
        let step_w: Step<Weighting<u32, S>> =
            sample_step(&mut rng, n_actions, |r| sample_weighting(s, r, 6));
        if naturality.is_none() {
            let lhs = dist_law(s, &step_w).map(|st| match st {
                Step::Stop => Step::Stop,
                Step::Act(a, x) => Step::Act(*a, f(x)),
            });
            let mapped = match &step_w {
                Step::Stop => Step::Stop,
                Step::Act(a, w) => Step::Act(*a, w.map(&f)),
            };
            let rhs = dist_law(s, &mapped);
            if lhs != rhs {
                naturality = Some(format!("{step_w:?}"));
            }
        }
    }

    report.push(LawResult::new("dist-unit (π∘Tη = η_T)", unit_axiom));
    report.push(LawResult::new("dist-mult (π∘Tμ = μ_T∘Bπ∘π_B)", mult_axiom));
    report.push(LawResult::new("dist-naturality", naturality));
    report
}

/// A parsed automaton over whichever semiring its file declares.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyAutomaton {
    Boolean(Automaton<BoolSemiring>),
    Nat(Automaton<NatSemiring>),
    Rational(Automaton<RatSemiring>),
    MinPlus(Automaton<MinPlusSemiring>),
}

impl AnyAutomaton {
    pub fn kind(&self) -> SemiringKind {
        match self {
            AnyAutomaton::Boolean(_) => SemiringKind::Boolean,
            AnyAutomaton::Nat(_) => SemiringKind::Nat,
            AnyAutomaton::Rational(_) => SemiringKind::Rational,
            AnyAutomaton::MinPlus(_) => SemiringKind::MinPlus,
        }
    }
}

/// Dispatches a generic expression over the semiring of an [`AnyAutomaton`].
#[macro_export]
macro_rules! with_automaton {
    ($any:expr, $aut:ident => $body:expr) => {
        match $any {
            $crate::automaton::AnyAutomaton::Boolean($aut) => $body,
            $crate::automaton::AnyAutomaton::Nat($aut) => $body,
            $crate::automaton::AnyAutomaton::Rational($aut) => $body,
            $crate::automaton::AnyAutomaton::MinPlus($aut) => $body,
        }
    };
}

/// Dispatches a generic expression over a [`SemiringKind`], binding the
/// semiring instance.
#[macro_export]
macro_rules! with_semiring {
    ($kind:expr, $s:ident => $body:expr) => {
        match $kind {
            $crate::semiring::SemiringKind::Boolean => {
                let $s = $crate::semiring::BoolSemiring;
                $body
            }
            $crate::semiring::SemiringKind::Nat => {
                let $s = $crate::semiring::NatSemiring;
                $body
            }
            $crate::semiring::SemiringKind::Rational => {
                let $s = $crate::semiring::RatSemiring;
                $body
            }
            $crate::semiring::SemiringKind::MinPlus => {
                let $s = $crate::semiring::MinPlusSemiring;
                $body
            }
        }
    };
}

/// Parses the automaton file format, dispatching on the declared
/// semiring. Rejects undeclared states/actions, duplicate edges, zero
/// weights, and probability-mode violations.
pub fn parse_automaton(text: &str) -> Result<AnyAutomaton, AutomatonError> {
    let kind = declared_semiring(text)?;
    match kind {
        SemiringKind::Boolean => parse_typed(BoolSemiring, text).map(AnyAutomaton::Boolean),
        SemiringKind::Nat => parse_typed(NatSemiring, text).map(AnyAutomaton::Nat),
        SemiringKind::Rational => {
            let aut = parse_typed(RatSemiring, text)?;
            if aut.mode() != ProbabilityMode::None {
                for x in aut.states() {
                    if let Err(v) = aut.gamma(x).validate_probability(aut.mode()) {
                        return Err(AutomatonError::Probability {
                            state: aut.state_name(x).to_string(),
                            message: v.to_string(),
                        });
                    }
                }
            }
            Ok(AnyAutomaton::Rational(aut))
        }
        SemiringKind::MinPlus => parse_typed(MinPlusSemiring, text).map(AnyAutomaton::MinPlus),
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            None
        } else {
            Some((i + 1, line))
        }
    })
}

fn declared_semiring(text: &str) -> Result<SemiringKind, AutomatonError> {
    let (line_no, line) = content_lines(text)
        .next()
        .ok_or_else(|| syntax(1, "empty file; expected `semiring <name>`"))?;
    let mut toks = line.split_whitespace();
    match (toks.next(), toks.next(), toks.next()) {
        (Some("semiring"), Some(name), None) => SemiringKind::parse(name).ok_or_else(|| {
            syntax(
                line_no,
                format!("unknown semiring `{name}` (expected boolean, nat, rational, minplus)"),
            )
        }),
        _ => Err(syntax(line_no, "expected `semiring <name>` on the first line")),
    }
}

/// Parses the file against a fixed semiring instance. Mode validation
/// against mass constraints is the caller's job ([`parse_automaton`]
/// does it for rationals).
pub fn parse_typed<S: Semiring>(s: S, text: &str) -> Result<Automaton<S>, AutomatonError> {
    let mut alphabet: Option<Alphabet> = None;
    let mut states: Option<Vec<String>> = None;
    let mut mode = ProbabilityMode::None;
    let mut mode_seen = false;
    let mut accepts: Vec<(usize, String, S::Elem)> = Vec::new();
    let mut edges: Vec<(usize, String, String, String, S::Elem)> = Vec::new();
    let mut first = true;

    for (line_no, line) in content_lines(text) {
        let toks: Vec<&str> = line.split_whitespace().collect();
        let head = toks[0];
        if first {
            first = false;
            if head != "semiring" {
                return Err(syntax(line_no, "expected `semiring <name>` on the first line"));
            }
            continue;
        }
        match head {
            "semiring" => return Err(syntax(line_no, "duplicate `semiring` line")),
            "mode" => {
                if mode_seen {
                    return Err(syntax(line_no, "duplicate `mode` line"));
                }
                if toks.len() != 2 {
                    return Err(syntax(line_no, "expected `mode <none|subdistribution|distribution>`"));
                }
                mode = ProbabilityMode::parse(toks[1])
                    .ok_or_else(|| syntax(line_no, format!("unknown mode `{}`", toks[1])))?;
                mode_seen = true;
            }
            "alphabet" => {
                if alphabet.is_some() {
                    return Err(syntax(line_no, "duplicate `alphabet` line"));
                }
                let parsed = Alphabet::new(toks[1..].iter().map(|t| t.to_string()))
                    .map_err(|e| syntax(line_no, e))?;
                alphabet = Some(parsed);
            }
            "states" => {
                if states.is_some() {
                    return Err(syntax(line_no, "duplicate `states` line"));
                }
                let mut seen = BTreeMap::new();
                for (i, name) in toks[1..].iter().enumerate() {
                    if !valid_name(name) {
                        return Err(syntax(line_no, format!("invalid state name `{name}`")));
                    }
                    if seen.insert(name.to_string(), i).is_some() {
                        return Err(syntax(line_no, format!("duplicate state `{name}`")));
                    }
                }
                states = Some(toks[1..].iter().map(|t| t.to_string()).collect());
            }
            "accept" => {
                let (name, weight) = parse_weight_suffix(s, line_no, &toks[1..])?;
                if accepts.iter().any(|(_, n, _)| *n == name) {
                    return Err(syntax(line_no, format!("duplicate accept for state `{name}`")));
                }
                accepts.push((line_no, name, weight));
            }
            "edge" => {
                // edge SRC -a-> TGT [: w]
                if toks.len() < 4 {
                    return Err(syntax(line_no, "expected `edge SRC -a-> TGT [: w]`"));
                }
                let src = toks[1].to_string();
                let arrow = toks[2];
                let action = arrow
                    .strip_prefix('-')
                    .and_then(|t| t.strip_suffix("->"))
                    .filter(|a| valid_name(a))
                    .ok_or_else(|| {
                        syntax(line_no, format!("malformed arrow `{arrow}` (expected `-a->`)"))
                    })?
                    .to_string();
                let (tgt, weight) = parse_weight_suffix(s, line_no, &toks[3..])?;
                if edges
                    .iter()
                    .any(|(_, s0, a0, t0, _)| *s0 == src && *a0 == action && *t0 == tgt)
                {
                    return Err(syntax(
                        line_no,
                        format!("duplicate edge {src} -{action}-> {tgt}"),
                    ));
                }
                edges.push((line_no, src, action, tgt, weight));
            }
            other => {
                return Err(syntax(line_no, format!("unknown directive `{other}`")));
            }
        }
    }

    let alphabet = alphabet.ok_or_else(|| syntax(1, "missing `alphabet` line"))?;
    let states = states.ok_or_else(|| syntax(1, "missing `states` line"))?;
    if states.is_empty() {
        return Err(AutomatonError::NoStates);
    }
    let state_of = |line_no: usize, name: &str| {
        states
            .iter()
            .position(|n| n == name)
            .map(StateId)
            .ok_or_else(|| syntax(line_no, format!("undeclared state `{name}`")))
    };

    let mut out = vec![Weighting::new(s); states.len()];
    for (line_no, name, weight) in accepts {
        let x = state_of(line_no, &name)?;
        out[x.0].insert_add(Step::Stop, weight);
    }
    for (line_no, src, action, tgt, weight) in edges {
        let x = state_of(line_no, &src)?;
        let a = alphabet
            .lookup(&action)
            .ok_or_else(|| syntax(line_no, format!("undeclared action `{action}`")))?;
        let y = state_of(line_no, &tgt)?;
        out[x.0].insert_add(Step::Act(a, y), weight);
    }

    Automaton::from_parts(s, alphabet, states, out, mode)
}

fn parse_weight_suffix<S: Semiring>(
    s: S,
    line_no: usize,
    toks: &[&str],
) -> Result<(String, S::Elem), AutomatonError> {
    match toks {
        [name] => {
            if s.show_weights() {
                Err(syntax(
                    line_no,
                    format!("missing weight (`: w`) for semiring {}", s.name()),
                ))
            } else {
                Ok((name.to_string(), s.one()))
            }
        }
        [name, ":", w] => {
            let weight = s.parse_elem(w).map_err(|e| syntax(line_no, e))?;
            if s.is_zero(&weight) {
                return Err(syntax(line_no, format!("zero weight `{w}` not allowed")));
            }
            Ok((name.to_string(), weight))
        }
        _ => Err(syntax(line_no, "expected `NAME [: w]`")),
    }
}

/// Deterministic random automaton for test corpora. Every candidate edge
/// and termination weight is drawn from the semiring sampler with the
/// given density; in probability modes rows are renormalized to meet the
/// declared constraint (requires a semiring with division).
pub fn random_automaton<S: Semiring>(
    s: S,
    n_states: usize,
    alphabet: Alphabet,
    density: f64,
    seed: u64,
    mode: ProbabilityMode,
) -> Automaton<S> {
    assert!(n_states > 0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let states: Vec<String> = (0..n_states).map(|i| format!("s{i}")).collect();
    let mut out = Vec::with_capacity(n_states);
    for _ in 0..n_states {
        let mut row = Weighting::new(s);
        if rng.gen_bool(density.clamp(0.0, 1.0)) {
            row.insert_add(Step::Stop, s.sample(&mut rng));
        }
        for a in alphabet.actions() {
            for y in 0..n_states {
                if rng.gen_bool(density.clamp(0.0, 1.0)) {
                    row.insert_add(Step::Act(a, StateId(y)), s.sample(&mut rng));
                }
            }
        }
        if mode != ProbabilityMode::None {
            row = normalize_row(s, row, mode, &mut rng);
        }
        out.push(row);
    }
    Automaton::from_parts(s, alphabet, states, out, mode).expect("generated automaton is valid")
}

fn normalize_row<S: Semiring>(
    s: S,
    row: Weighting<Step<StateId>, S>,
    mode: ProbabilityMode,
    rng: &mut impl Rng,
) -> Weighting<Step<StateId>, S> {
    if row.is_empty() {
        return match mode {
            ProbabilityMode::Distribution => Weighting::unit(s, Step::Stop),
            _ => row,
        };
    }
    let inv_mass = s
        .try_div(&s.one(), &row.mass())
        .expect("probability modes need a semiring with division");
    let mut normalized = row.scale(&inv_mass);
    if mode == ProbabilityMode::Subdistribution && rng.gen_bool(0.5) {
        let two = s.add(&s.one(), &s.one());
        let half = s.try_div(&s.one(), &two).expect("division available");
        normalized = normalized.scale(&half);
    }
    normalized
}

/// Fixture from the motivating example: two boolean states accepting the
/// same language {ab, ac} without being bisimilar.
pub const FIXTURE_A1: &str = "\
semiring boolean
alphabet a b c
states x y1 z x2 y2 y3
accept z
edge x -a-> y1
edge y1 -b-> z
edge y1 -c-> z
edge x2 -a-> y2
edge x2 -a-> y3
edge y2 -b-> z
edge y3 -c-> z
";

/// Fixture: a two-state probabilistic automaton terminating after one
/// step of `a` or `b`, each with probability 1/2.
pub const FIXTURE_A2: &str = "\
semiring rational
mode distribution
alphabet a b
states s0 s1
accept s1 : 1
edge s0 -a-> s1 : 1/2
edge s0 -b-> s1 : 1/2
";
