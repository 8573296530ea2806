//! Pass/fail reports for sampled algebraic-law checks.

use std::fmt;

/// Outcome of one law on a batch of samples. A failing law carries the
/// first counterexample found.
#[derive(Clone, Debug)]
pub struct LawResult {
    pub name: String,
    pub passed: bool,
    pub counterexample: Option<String>,
}

impl LawResult {
    pub fn new(name: &str, counterexample: Option<String>) -> Self {
        LawResult {
            name: name.to_string(),
            passed: counterexample.is_none(),
            counterexample,
        }
    }
}

/// A named suite of law results.
#[derive(Clone, Debug)]
pub struct LawReport {
    title: String,
    results: Vec<LawResult>,
}

impl LawReport {
    pub fn new(title: String) -> Self {
        LawReport {
            title,
            results: Vec::new(),
        }
    }

    pub fn push(&mut self, result: LawResult) {
        self.results.push(result);
    }

    pub fn results(&self) -> &[LawResult] {
        &self.results
    }

    pub fn title(&self) -> &str {
        &self.title
    }

    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }
}

impl fmt::Display for LawReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.title)?;
        for r in &self.results {
            if r.passed {
                writeln!(f, "  {}: pass", r.name)?;
            } else {
                writeln!(
                    f,
                    "  {}: FAIL ({})",
                    r.name,
                    r.counterexample.as_deref().unwrap_or("no witness")
                )?;
            }
        }
        Ok(())
    }
}
