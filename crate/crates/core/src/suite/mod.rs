//! Random subspace tuples and batch verification of the structural theorems.

mod checks;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use checks::{registry, Case, Check, Outcome};

use crate::error::Result;
use crate::io::write_tuple;
use crate::linalg::{FieldSpec, Subspace};
use crate::tuple::SubspaceTuple;

/// Parameters of a random case stream. `ambient_dim` and `n` are upper
/// bounds; each case draws its own values in `1..=bound`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenConfig {
    pub field: FieldSpec,
    pub ambient_dim: usize,
    pub n: usize,
    pub max_generators_per_subspace: usize,
    pub seed: u64,
    pub cases: usize,
}

impl GenConfig {
    pub fn new(field: FieldSpec, ambient_dim: usize, n: usize, seed: u64, cases: usize) -> Self {
        GenConfig {
            field,
            ambient_dim,
            n,
            max_generators_per_subspace: ambient_dim,
            seed,
            cases,
        }
    }
}

fn draw_bound(rng: &mut ChaCha8Rng, max: usize) -> usize {
    if max == 0 {
        0
    } else {
        rng.random_range(1..=max)
    }
}

/// The tuple for `case_index`, a pure function of `(cfg, case_index)`.
pub fn random_tuple(cfg: &GenConfig, case_index: u64) -> SubspaceTuple {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(case_index);
    let f = cfg.field;
    let d = draw_bound(&mut rng, cfg.ambient_dim);
    let n = draw_bound(&mut rng, cfg.n);
    let entries = (0..n)
        .map(|_| {
            let k = rng.random_range(0..=cfg.max_generators_per_subspace);
            let rows = (0..k)
                .map(|_| {
                    (0..d)
                        .map(|_| match f {
                            FieldSpec::Rationals => f.from_i64(rng.random_range(-3..=3)),
                            FieldSpec::Prime(p) => f.from_i64(rng.random_range(0..p) as i64),
                        })
                        .collect()
                })
                .collect();
            Subspace::new(f, d, rows).expect("rows of width d")
        })
        .collect();
    SubspaceTuple::new(f, d, entries).expect("entries share the ambient space")
}

/// Options that alter the system under test.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SuiteOptions {
    /// Run every check against a matroid whose rank is off by one.
    #[cfg(feature = "mutation-hook")]
    pub rank_fault: bool,
}

/// A failing case, replayable from `tuple_text`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub case_index: u64,
    pub message: String,
    pub tuple_text: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckStats {
    pub name: &'static str,
    pub statement: &'static str,
    pub run: usize,
    pub skipped: usize,
    pub failed: usize,
    pub first_failure: Option<Counterexample>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub config: GenConfig,
    pub cases: usize,
    pub checks: Vec<CheckStats>,
}

impl SuiteReport {
    pub fn failures(&self) -> usize {
        self.checks.iter().map(|c| c.failed).sum()
    }

    pub fn passed(&self) -> bool {
        self.failures() == 0
    }

    pub fn check(&self, name: &str) -> Option<&CheckStats> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Adds the counters of a report over a disjoint case range.
    pub fn merge(&mut self, other: SuiteReport) {
        self.cases += other.cases;
        for (mine, theirs) in self.checks.iter_mut().zip(other.checks) {
            mine.run += theirs.run;
            mine.skipped += theirs.skipped;
            mine.failed += theirs.failed;
            let earlier = match (&mine.first_failure, &theirs.first_failure) {
                (None, Some(_)) => true,
                (Some(a), Some(b)) => b.case_index < a.case_index,
                _ => false,
            };
            if earlier {
                mine.first_failure = theirs.first_failure;
            }
        }
    }
}

pub fn run_suite(cfg: &GenConfig) -> SuiteReport {
    run_suite_with(cfg, &SuiteOptions::default())
}

pub fn run_suite_with(cfg: &GenConfig, opts: &SuiteOptions) -> SuiteReport {
    let checks = registry();
    let mut stats: Vec<CheckStats> = checks
        .iter()
        .map(|c| CheckStats {
            name: c.name,
            statement: c.statement,
            run: 0,
            skipped: 0,
            failed: 0,
            first_failure: None,
        })
        .collect();
    for idx in 0..cfg.cases as u64 {
        let t = random_tuple(cfg, idx);
        let outcomes = run_checks(&checks, &t, idx ^ cfg.seed.rotate_left(17), opts);
        for (s, outcome) in stats.iter_mut().zip(outcomes) {
            match outcome {
                Outcome::Pass => s.run += 1,
                Outcome::Skip => s.skipped += 1,
                Outcome::Fail(message) => {
                    s.run += 1;
                    s.failed += 1;
                    if s.first_failure.is_none() {
                        s.first_failure = Some(Counterexample {
                            case_index: idx,
                            message,
                            tuple_text: write_tuple(&t),
                        });
                    }
                }
            }
        }
    }
    SuiteReport {
        config: *cfg,
        cases: cfg.cases,
        checks: stats,
    }
}

fn run_checks(checks: &[Check], t: &SubspaceTuple, salt: u64, opts: &SuiteOptions) -> Vec<Outcome> {
    match Case::new(t.clone(), salt, opts) {
        Ok(case) => checks.iter().map(|c| c.evaluate(&case)).collect(),
        Err(e) => checks
            .iter()
            .map(|_| Outcome::Fail(format!("case setup failed: {e}")))
            .collect(),
    }
}

/// Runs every registered check on one tuple, as when replaying a
/// counterexample file.
pub fn replay(t: &SubspaceTuple, opts: &SuiteOptions) -> Result<Vec<(&'static str, Outcome)>> {
    let checks = registry();
    let case = Case::new(t.clone(), 0, opts)?;
    Ok(checks.iter().map(|c| (c.name, c.evaluate(&case))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::parse_tuple;

    #[test]
    fn generator_is_deterministic() {
        let cfg = GenConfig::new(FieldSpec::Prime(2), 2, 3, 1, 1);
        assert_eq!(random_tuple(&cfg, 0), random_tuple(&cfg, 0));
        let other = GenConfig { seed: 2, ..cfg };
        let differs = (0..20).any(|i| random_tuple(&cfg, i) != random_tuple(&other, i));
        assert!(differs);
    }

    #[test]
    fn no_generators_gives_loops() {
        let cfg = GenConfig {
            max_generators_per_subspace: 0,
            ..GenConfig::new(FieldSpec::Rationals, 3, 4, 5, 10)
        };
        for i in 0..10 {
            let t = random_tuple(&cfg, i);
            assert!(t.entries().iter().all(Subspace::is_zero));
        }
    }

    #[test]
    fn stream_is_not_trivial() {
        let cfg = GenConfig::new(FieldSpec::Prime(3), 4, 5, 7, 100);
        let mut kinds = (false, false);
        for i in 0..100 {
            let t = random_tuple(&cfg, i);
            let table = t.defect_table().unwrap();
            if table.is_independent(t.ground()) {
                kinds.0 = true;
            } else {
                kinds.1 = true;
            }
        }
        assert_eq!(kinds, (true, true));
    }

    #[test]
    fn empty_run() {
        let report = run_suite(&GenConfig::new(FieldSpec::Prime(2), 3, 3, 0, 0));
        assert_eq!(report.cases, 0);
        assert!(report.checks.iter().all(|c| c.run == 0 && c.skipped == 0 && c.failed == 0));
        assert!(report.passed());
    }

    #[test]
    fn small_runs_pass_and_account() {
        for field in [FieldSpec::Prime(2), FieldSpec::Prime(3), FieldSpec::Rationals] {
            let cfg = GenConfig::new(field, 4, 5, 11, 40);
            let report = run_suite(&cfg);
            for c in &report.checks {
                assert_eq!(c.run + c.skipped, 40, "{}", c.name);
                assert_eq!(c.failed, 0, "{}: {:?}", c.name, c.first_failure);
            }
        }
    }

    #[test]
    fn merge_adds_counters() {
        let cfg = GenConfig::new(FieldSpec::Prime(2), 3, 4, 3, 10);
        let mut a = run_suite(&cfg);
        let b = run_suite(&cfg);
        a.merge(b);
        assert_eq!(a.cases, 20);
        assert!(a.checks.iter().all(|c| c.run + c.skipped == 20));
    }

    #[cfg(feature = "mutation-hook")]
    #[test]
    fn rank_fault_is_caught_and_replays() {
        let cfg = GenConfig::new(FieldSpec::Prime(2), 3, 4, 1, 20);
        let opts = SuiteOptions { rank_fault: true };
        let report = run_suite_with(&cfg, &opts);
        assert!(!report.passed());
        let failing = report.checks.iter().find(|c| c.failed > 0).unwrap();
        let cx = failing.first_failure.as_ref().unwrap();
        let t = parse_tuple(&cx.tuple_text).unwrap();
        let outcomes = replay(&t, &opts).unwrap();
        let (_, o) = outcomes.iter().find(|(n, _)| *n == failing.name).unwrap();
        assert!(matches!(o, Outcome::Fail(_)));
        let clean = replay(&t, &SuiteOptions::default()).unwrap();
        assert!(clean.iter().all(|(_, o)| !matches!(o, Outcome::Fail(_))));
    }
}
