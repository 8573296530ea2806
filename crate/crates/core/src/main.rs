//! `coaltrace` command line: batch commands over automaton files and
//! formulas. Thin adapter over the library; all output is deterministic
//! given the arguments (and seed, for `laws`).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use coaltrace::automaton::{parse_automaton, Alphabet, AnyAutomaton, Automaton, StateId, Word};
use coaltrace::logic::{distinguish, eval, normal_form, parse_formula, refute};
use coaltrace::semiring::{check_semiring_laws, Semiring, SemiringKind};
use coaltrace::trace::{
    equiv_bounded, equiv_exact_boolean, equiv_exact_rational, tr, trace_report,
};
use coaltrace::weighting::check_monad_and_strength_laws;
use coaltrace::{with_automaton, with_semiring};

#[derive(Parser)]
#[command(
    name = "coaltrace",
    about = "Trace semantics and trace logic for semiring-weighted automata",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the trace weightings of all states (words of length < DEPTH)
    Traces {
        file: PathBuf,
        #[arg(long)]
        depth: usize,
        /// Restrict the report to one state
        #[arg(long)]
        state: Option<String>,
    },
    /// Decide trace equivalence of two states
    Equiv {
        file: PathBuf,
        x: String,
        y: String,
        /// Depth bound for the comparison (ignored with --exact)
        #[arg(long)]
        depth: usize,
        /// Unbounded decision (boolean and rational semirings only)
        #[arg(long)]
        exact: bool,
    },
    /// Evaluate a formula at a state
    Eval {
        file: PathBuf,
        #[arg(long)]
        formula: String,
        #[arg(long)]
        state: String,
    },
    /// Print the normal form of a formula as a weighting over words
    Nf {
        #[arg(long)]
        semiring: String,
        /// Space-separated action names, e.g. "a b c"
        #[arg(long)]
        alphabet: String,
        #[arg(long)]
        formula: String,
    },
    /// Print a separating formula for two states, or `none`
    Distinguish {
        file: PathBuf,
        x: String,
        y: String,
        #[arg(long)]
        depth: usize,
    },
    /// Refute an equation between two formulas with a countermodel
    Refute {
        #[arg(long)]
        semiring: String,
        /// Space-separated action names, e.g. "a b c"
        #[arg(long)]
        alphabet: String,
        phi: String,
        psi: String,
    },
    /// Run the semiring, monad/strength, and distributive-law suites
    Laws {
        #[arg(long)]
        semiring: String,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn load(file: &PathBuf) -> Result<AnyAutomaton, String> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| format!("cannot read {}: {e}", file.display()))?;
    parse_automaton(&text).map_err(|e| format!("{}: {e}", file.display()))
}

fn resolve<S: Semiring>(aut: &Automaton<S>, name: &str) -> Result<StateId, String> {
    aut.state(name).map_err(|e| e.to_string())
}

fn kind_of(name: &str) -> Result<SemiringKind, String> {
    SemiringKind::parse(name)
        .ok_or_else(|| format!("unknown semiring `{name}` (boolean, nat, rational, minplus)"))
}

/// Least word (length-lex) where the depth-`n` traces of two states
/// differ.
fn least_diff_word<S: Semiring>(
    aut: &Automaton<S>,
    x: StateId,
    y: StateId,
    n: usize,
) -> Option<Word> {
    let t = tr(aut, n);
    let (wx, wy) = (t.state(x), t.state(y));
    let mut words: Vec<&Word> = wx.support().chain(wy.support()).collect();
    words.sort();
    words.dedup();
    let s = aut.semiring();
    words
        .into_iter()
        .find(|w| !s.eq_elem(&wx.weight(w), &wy.weight(w)))
        .cloned()
}

fn report_distinguished<S: Semiring>(aut: &Automaton<S>, word: &Word) -> u8 {
    println!(
        "distinguished at depth {} by word {}",
        word.len() + 1,
        aut.alphabet().render_word(word)
    );
    1
}

fn cmd_equiv(
    any: &AnyAutomaton,
    x: &str,
    y: &str,
    depth: usize,
    exact: bool,
) -> Result<u8, String> {
    if !exact {
        return with_automaton!(any, aut => {
            let (x, y) = (resolve(aut, x)?, resolve(aut, y)?);
            if equiv_bounded(aut, x, y, depth) {
                println!("equivalent");
                Ok(0)
            } else {
                let word = least_diff_word(aut, x, y, depth)
                    .expect("bounded inequivalence yields a differing word");
                Ok(report_distinguished(aut, &word))
            }
        });
    }
    // Exact mode: the decision is depth-unbounded, and a distinguishing
    // word is recovered by deepening until the traces differ.
    fn distinguished_at<S: Semiring>(aut: &Automaton<S>, x: StateId, y: StateId) -> Word {
        (1..)
            .find_map(|n| least_diff_word(aut, x, y, n))
            .expect("exact inequivalence yields a differing word")
    }
    match any {
        AnyAutomaton::Boolean(aut) => {
            let (x, y) = (resolve(aut, x)?, resolve(aut, y)?);
            if equiv_exact_boolean(aut, x, y) {
                println!("equivalent");
                Ok(0)
            } else {
                Ok(report_distinguished(aut, &distinguished_at(aut, x, y)))
            }
        }
        AnyAutomaton::Rational(aut) => {
            let (x, y) = (resolve(aut, x)?, resolve(aut, y)?);
            if equiv_exact_rational(aut, x, y) {
                println!("equivalent");
                Ok(0)
            } else {
                Ok(report_distinguished(aut, &distinguished_at(aut, x, y)))
            }
        }
        other => Err(format!(
            "--exact requires a boolean or rational automaton, got {}",
            other.kind().name()
        )),
    }
}

fn run(cli: Cli) -> Result<u8, String> {
    match cli.command {
        Command::Traces { file, depth, state } => {
            let any = load(&file)?;
            with_automaton!(&any, aut => {
                match state {
                    Some(name) => {
                        let x = resolve(aut, &name)?;
                        let t = tr(aut, depth);
                        println!(
                            "{name}: {}",
                            t.state(x).render_with(|w| aut.alphabet().render_word(w))
                        );
                    }
                    None => print!("{}", trace_report(aut, depth)),
                }
            });
            Ok(0)
        }
        Command::Equiv {
            file,
            x,
            y,
            depth,
            exact,
        } => cmd_equiv(&load(&file)?, &x, &y, depth, exact),
        Command::Eval {
            file,
            formula,
            state,
        } => {
            let any = load(&file)?;
            with_automaton!(&any, aut => {
                let s = aut.semiring();
                let phi = parse_formula(s, &formula).map_err(|e| e.to_string())?;
                let x = resolve(aut, &state)?;
                let value = eval(aut, &phi, x).map_err(|e| e.to_string())?;
                println!("{}", s.format_elem(&value));
            });
            Ok(0)
        }
        Command::Nf {
            semiring,
            alphabet,
            formula,
        } => {
            let kind = kind_of(&semiring)?;
            with_semiring!(kind, s => {
                let alphabet = Alphabet::parse(&alphabet).map_err(|e| e.to_string())?;
                let phi = parse_formula(s, &formula).map_err(|e| e.to_string())?;
                let nf = normal_form(&phi, &alphabet).map_err(|e| e.to_string())?;
                println!("{}", nf.render_with(|w| alphabet.render_word(w)));
            });
            Ok(0)
        }
        Command::Distinguish { file, x, y, depth } => {
            let any = load(&file)?;
            with_automaton!(&any, aut => {
                let (x, y) = (resolve(aut, &x)?, resolve(aut, &y)?);
                match distinguish(aut, x, y, depth) {
                    Some(phi) => println!("{phi}"),
                    None => println!("none"),
                }
            });
            Ok(0)
        }
        Command::Refute {
            semiring,
            alphabet,
            phi,
            psi,
        } => {
            let kind = kind_of(&semiring)?;
            with_semiring!(kind, s => {
                let alphabet = Alphabet::parse(&alphabet).map_err(|e| e.to_string())?;
                let phi = parse_formula(s, &phi).map_err(|e| e.to_string())?;
                let psi = parse_formula(s, &psi).map_err(|e| e.to_string())?;
                match refute(s, &alphabet, &phi, &psi).map_err(|e| e.to_string())? {
                    Some((chain, start)) => {
                        print!("{}", chain.print());
                        println!("witness {}", chain.state_name(start));
                    }
                    None => println!("equal under axioms"),
                }
            });
            Ok(0)
        }
        Command::Laws {
            semiring,
            samples,
            seed,
        } => {
            let kind = kind_of(&semiring)?;
            with_semiring!(kind, s => {
                print!("{}", check_semiring_laws(s, samples, seed));
                print!("{}", check_monad_and_strength_laws(s, samples, seed));
                print!("{}", coaltrace::automaton::check_dist_law_axioms(s, samples, seed));
            });
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
