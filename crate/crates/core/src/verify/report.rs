//! Seeded batches of identity checks over the cone corpus.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::thread;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{inputs_for, sample_point, verify_named, Identity, IdentityCheck};
use crate::config::EvalConfig;
use crate::corpus;
use crate::error::Error;
use crate::sl::ModuliPoint;

/// `samples` seeded checks of `identity` on the corpus cone `cone_name`. For
/// identities without a cone, the cone's dimension is the number of periods.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteEntry {
    pub identity: Identity,
    pub cone_name: String,
    pub samples: usize,
}

impl SuiteEntry {
    pub fn new(identity: Identity, cone_name: &str, samples: usize) -> Self {
        SuiteEntry {
            identity,
            cone_name: cone_name.to_string(),
            samples,
        }
    }
}

impl Serialize for Identity {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// Every identity on the cones where it is meaningful and affordable.
pub fn default_suite() -> Vec<SuiteEntry> {
    use Identity::*;
    let all = [
        "standard2",
        "standard3",
        "standard4",
        "conifold",
        "pentagon",
    ];
    let mut suite = Vec::new();
    let mut add = |id: Identity, cones: &[&str], samples: usize| {
        for c in cones {
            suite.push(SuiteEntry::new(id, c, samples));
        }
    };
    add(ConesumBruteForce, &all, 5);
    add(ConesumReflection, &all, 5);
    add(CompletionInvariance, &all, 2);
    add(BernoulliProps, &all, 3);
    add(BernoulliFit, &all, 3);
    add(PolylogExp, &["standard2", "standard3"], 5);
    add(QfactRelations, &["standard2", "standard3"], 5);
    add(GrRelations, &["standard2", "standard3"], 3);
    add(GrModularity, &["standard2", "standard3", "standard4"], 3);
    add(SrTwoForms, &["standard2", "standard3"], 3);
    add(SrCTwoForms, &["standard3", "conifold", "pentagon"], 3);
    add(ConeModularity, &["standard3", "conifold", "pentagon"], 3);
    add(SrCHomogeneity, &["standard3", "conifold", "pentagon"], 2);
    add(GrCMethods, &["standard2", "conifold"], 2);
    add(GrCFactorization, &["standard2", "conifold"], 2);
    add(GrCAsSrCProduct, &["standard2"], 1);
    suite
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

/// The outcome of [`run_report`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub checks: Vec<IdentityCheck>,
    pub config: EvalConfig,
    pub versions: BTreeMap<String, String>,
    pub seed: u64,
    pub summary: Summary,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is serializable")
    }

    /// One line per check plus a summary line.
    pub fn table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<22} {:<10} {:>10} {:>10} {:>10}  status",
            "identity", "cone", "residual", "tolerance", "tail"
        );
        for c in &self.checks {
            let cone = c
                .inputs
                .cone_name
                .clone()
                .unwrap_or_else(|| format!("n={}", c.inputs.periods.len()));
            let _ = writeln!(
                out,
                "{:<22} {:<10} {:>10.2e} {:>10.1e} {:>10.1e}  {}{}",
                c.name,
                cone,
                c.residual,
                c.tolerance,
                c.tail_bound,
                if c.passed() { "pass" } else { "FAIL" },
                c.error
                    .as_deref()
                    .map(|e| format!(" ({e})"))
                    .unwrap_or_default()
            );
        }
        let _ = writeln!(
            out,
            "{} checks, {} passed, {} failed",
            self.summary.total, self.summary.passed, self.summary.failed
        );
        out
    }
}

fn entry_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

fn run_entry(entry: &SuiteEntry, index: usize, seed: u64, cfg: &EvalConfig) -> Vec<IdentityCheck> {
    let id = entry.identity;
    let Some(cone) = corpus::by_name(&entry.cone_name) else {
        let err = Error::InvalidInput(format!("unknown corpus cone {:?}", entry.cone_name));
        let empty = ModuliPoint::new(Default::default(), Vec::new());
        let inputs = inputs_for(id, &crate::cone::Cone::standard(1), None, &empty);
        return vec![IdentityCheck::errored(id, inputs, &err, cfg)];
    };
    let mut rng = entry_rng(seed, index);
    let name = Some(entry.cone_name.as_str());
    (0..entry.samples)
        .map(|_| match sample_point(id, &cone, &mut rng) {
            Ok(p) => verify_named(id, &cone, name, &p, cfg).unwrap_or_else(|e| {
                IdentityCheck::errored(id, inputs_for(id, &cone, name, &p), &e, cfg)
            }),
            Err(e) => {
                let empty = ModuliPoint::new(Default::default(), Vec::new());
                IdentityCheck::errored(id, inputs_for(id, &cone, name, &empty), &e, cfg)
            }
        })
        .collect()
}

/// Runs `suite` with points drawn from per-entry streams of `seed`. Entries
/// run in parallel; the result does not depend on scheduling.
pub fn run_report(suite: &[SuiteEntry], seed: u64, cfg: &EvalConfig) -> Report {
    let workers = thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(suite.len().max(1));
    let mut results: Vec<Vec<IdentityCheck>> = vec![Vec::new(); suite.len()];
    thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                s.spawn(move || {
                    (w..suite.len())
                        .step_by(workers)
                        .map(|i| (i, run_entry(&suite[i], i, seed, cfg)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (i, checks) in h.join().expect("worker panicked") {
                results[i] = checks;
            }
        }
    });
    let checks: Vec<IdentityCheck> = results.into_iter().flatten().collect();
    let passed = checks.iter().filter(|c| c.passed()).count();
    let mut versions = BTreeMap::new();
    versions.insert(
        env!("CARGO_PKG_NAME").to_string(),
        env!("CARGO_PKG_VERSION").to_string(),
    );
    versions.insert("report_schema".to_string(), "1".to_string());
    Report {
        summary: Summary {
            total: checks.len(),
            passed,
            failed: checks.len() - passed,
        },
        checks,
        config: cfg.clone(),
        versions,
        seed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_suite_gives_empty_report() {
        let r = run_report(&[], 1, &EvalConfig::default());
        assert!(r.checks.is_empty());
        assert_eq!(r.summary.total, 0);
        assert!(r.all_passed());
    }

    #[test]
    fn same_seed_same_json() {
        let suite = vec![
            SuiteEntry::new(Identity::PolylogExp, "standard2", 3),
            SuiteEntry::new(Identity::ConesumReflection, "conifold", 3),
        ];
        let cfg = EvalConfig::default();
        let a = run_report(&suite, 7, &cfg).to_json();
        let b = run_report(&suite, 7, &cfg).to_json();
        assert_eq!(a, b);
        assert_ne!(a, run_report(&suite, 8, &cfg).to_json());
    }

    #[test]
    fn unknown_cone_is_recorded_as_failure() {
        let r = run_report(
            &[SuiteEntry::new(Identity::PolylogExp, "nope", 2)],
            1,
            &EvalConfig::default(),
        );
        assert_eq!(r.summary.failed, 1);
        assert!(r.checks[0].error.is_some());
    }
}
