//! Small reporting harness: a criterion is a list of named checks plus a time budget.

use std::fmt;
use std::time::{Duration, Instant};

#[derive(Debug, Default)]
pub struct Checks {
    total: usize,
    failures: Vec<String>,
}

impl Checks {
    /// Records one check; `detail` is only rendered on failure.
    pub fn check(&mut self, label: impl fmt::Display, ok: bool, detail: impl FnOnce() -> String) {
        self.total += 1;
        if !ok {
            self.failures.push(format!("{label}: {}", detail()));
        }
    }

    pub fn total(&self) -> usize {
        self.total
    }
}

#[derive(Debug)]
pub struct Outcome {
    pub id: u32,
    pub title: &'static str,
    pub checks: usize,
    pub failures: Vec<String>,
    pub elapsed: Duration,
    pub budget: Duration,
}

impl Outcome {
    pub fn within_budget(&self) -> bool {
        self.elapsed < self.budget
    }

    pub fn passed(&self) -> bool {
        self.checks > 0 && self.failures.is_empty() && self.within_budget()
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} criterion {:>2} ({}): {}/{} checks, {:.2} s (budget {} s)",
            if self.passed() { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.checks - self.failures.len(),
            self.checks,
            self.elapsed.as_secs_f64(),
            self.budget.as_secs()
        )
    }
}

/// Runs `body`, timing it against `budget`.
pub fn run_criterion(id: u32, title: &'static str, budget: Duration, body: impl FnOnce(&mut Checks)) -> Outcome {
    let mut checks = Checks::default();
    let start = Instant::now();
    body(&mut checks);
    let elapsed = start.elapsed();
    Outcome {
        id,
        title,
        checks: checks.total,
        failures: checks.failures,
        elapsed,
        budget,
    }
}
