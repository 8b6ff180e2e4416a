//! The acceptance suite: eleven property checks with seeded randomness and
//! independent oracles, shared by the `acceptance` test target and the CLI.

mod ext;
mod formal;
mod lie;
mod oracle;

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Parameters of a run.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Config {
    pub seed: u64,
    /// Working precision `N`.
    pub prec: i32,
    /// Series window for the formal-group criteria.
    pub window: i64,
}

impl Default for Config {
    fn default() -> Self {
        Config { seed: 20240601, prec: 12, window: 60 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl std::fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{tag}] {:>2} {:<34} {} ({:.1}s)", self.id, self.name, self.detail, self.seconds)
    }
}

type Check = fn(&Config, &mut ChaCha8Rng) -> Result<String, String>;

pub const CRITERIA: [(u8, &str, Check); 11] = [
    (1, "formal group axioms", formal::group_axioms),
    (2, "cyclotomic binomial oracle", formal::cyclotomic_oracle),
    (3, "valuation gain", formal::valuation_gain),
    (4, "box valuation endpoint rule", formal::endpoint_rule),
    (5, "log gamma dual evaluation", lie::dual_evaluation),
    (6, "nabla oracles", lie::nabla_oracles),
    (7, "derivation and linearity", lie::derivation_linearity),
    (8, "F-analyticity classification", lie::classification),
    (9, "twist pipeline", ext::twist_pipeline),
    (10, "ext round trip", ext::round_trip),
    (11, "ext lemma transport", ext::ext_lemma),
];

/// Run one criterion (1-based id).
pub fn run_one(id: u8, cfg: &Config) -> Option<CriterionResult> {
    let (id, name, check) = *CRITERIA.iter().find(|c| c.0 == id)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ (id as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let t0 = Instant::now();
    let out = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| check(cfg, &mut rng)))
        .unwrap_or_else(|e| Err(format!("panic: {}", panic_message(&e))));
    let seconds = t0.elapsed().as_secs_f64();
    Some(match out {
        Ok(detail) => CriterionResult { id, name, passed: true, detail, seconds },
        Err(detail) => CriterionResult { id, name, passed: false, detail, seconds },
    })
}

pub fn run_all(cfg: &Config) -> Vec<CriterionResult> {
    CRITERIA.iter().map(|c| run_one(c.0, cfg).unwrap()).collect()
}

fn panic_message(e: &Box<dyn std::any::Any + Send>) -> String {
    e.downcast_ref::<String>()
        .cloned()
        .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
        .unwrap_or_else(|| "unknown".into())
}

/// `Err` with the first failure message, else `Ok(count)`.
fn all_ok<T>(results: Vec<Result<T, String>>) -> Result<Vec<T>, String> {
    results.into_iter().collect()
}

fn err<E: std::fmt::Display>(ctx: &str) -> impl Fn(E) -> String + '_ {
    move |e| format!("{ctx}: {e}")
}
