//! Verification suites run by `verify`.

use serde_json::{json, Value};

use crate::component_group::{CentralizerDescriptor, Which};
use crate::error::Result;
use crate::groth_engine::{infchar_of_term, AtomLevel, Config, Convention, Engine};
use crate::packet_enum::{packet, Level};
use crate::param_core::ArthurParameter;

pub const SUITES: [&str; 4] = ["independence", "infchar", "restriction", "reconciliation"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteOutcome {
    pub suite: &'static str,
    pub passed: bool,
    pub skipped: bool,
    pub checks: usize,
    pub failures: Vec<String>,
    pub extra: Value,
}

impl SuiteOutcome {
    fn new(suite: &'static str) -> SuiteOutcome {
        SuiteOutcome {
            suite,
            passed: true,
            skipped: false,
            checks: 0,
            failures: Vec::new(),
            extra: Value::Null,
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.passed = false;
            self.failures.push(what());
        }
    }

    pub fn to_value(&self) -> Value {
        let mut v = json!({
            "suite": self.suite,
            "passed": self.passed,
            "skipped": self.skipped,
            "checks": self.checks,
            "failures": self.failures,
        });
        if !self.extra.is_null() {
            v["details"] = self.extra.clone();
        }
        v
    }
}

/// Suite names selected by `name`; `all` selects every suite.
pub fn select(name: &str) -> Option<Vec<&'static str>> {
    if name == "all" {
        return Some(SUITES.to_vec());
    }
    SUITES.iter().find(|s| **s == name).map(|s| vec![*s])
}

const LEVELS: [AtomLevel; 2] = [AtomLevel::Classical, AtomLevel::Similitude];

fn engine(level: AtomLevel, convention: Convention) -> Engine {
    Engine::new(Config {
        convention,
        ..Config::at(level)
    })
}

fn level_name(level: AtomLevel) -> &'static str {
    match level {
        AtomLevel::Classical => "classical",
        AtomLevel::Similitude => "similitude",
    }
}

pub fn run_suite(suite: &'static str, psi: &ArthurParameter, convention: Convention) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new(suite);
    if !psi.is_ddr() {
        out.skipped = true;
        return Ok(out);
    }
    let chars = CentralizerDescriptor::build(psi)?.characters(Which::SSigma0);
    match suite {
        "independence" => {
            for level in LEVELS {
                let mut e = engine(level, convention);
                for eps in &chars {
                    let atom = e.atom_of(psi, eps)?;
                    let r = e.verify_block_independence(&atom)?;
                    out.check(r.equal, || {
                        format!("{} eps={eps}: difference {}", level_name(level), r.diff)
                    });
                }
            }
        }
        "infchar" => {
            let want = psi.inf_char();
            for level in LEVELS {
                let mut e = engine(level, convention);
                for eps in &chars {
                    let atom = e.atom_of(psi, eps)?;
                    let mut sums = vec![e.expand_full(&atom)?];
                    for j in 0..atom.blocks.len() {
                        if atom.blocks[j].0.is_reducible() {
                            sums.push(e.expand_step(&atom, j)?);
                        }
                    }
                    for s in sums {
                        for (t, _) in s.iter() {
                            let ok = infchar_of_term(t).map(|ic| ic == want).unwrap_or(false);
                            out.check(ok, || format!("{} eps={eps}: term {t}", level_name(level)));
                        }
                    }
                }
            }
        }
        "restriction" => {
            let mut e = engine(AtomLevel::Similitude, convention);
            for eps in &chars {
                let atom = e.atom_of(psi, eps)?;
                let (lhs, rhs) = e.restriction_sides(&atom)?;
                out.check(lhs == rhs, || format!("eps={eps}: difference {}", lhs.minus(&rhs)));
            }
        }
        "reconciliation" => {
            let mut passing = Vec::new();
            for conv in Convention::ALL {
                let mut all = true;
                for (level, pl) in [
                    (AtomLevel::Classical, Level::ClassicalSigma0),
                    (AtomLevel::Similitude, Level::SimilitudeSigma0),
                ] {
                    let mut e = engine(level, conv);
                    for eps in &chars {
                        let atom = e.atom_of(psi, eps)?;
                        let predicted = e.resolved_count(&atom)?;
                        let counted = packet(psi, pl, Some(eps))?.elements.len() as u64;
                        if predicted != counted {
                            all = false;
                            if conv == convention {
                                out.failures.push(format!(
                                    "{} eps={eps}: {predicted} constituents, {counted} classes",
                                    level_name(level)
                                ));
                            }
                        }
                    }
                }
                if all {
                    passing.push(conv.id());
                }
            }
            out.check(passing.contains(&convention.id()), || {
                format!("convention {} disagrees", convention.id())
            });
            out.extra = json!({ "passing_conventions": passing });
        }
        _ => unreachable!("suite names come from SUITES"),
    }
    Ok(out)
}
