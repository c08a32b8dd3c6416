//! Exhaustive per-family verification suites shared by the CLI and tests.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::decode::{graph_from_int1, string_from_cf1, tree_from_int1};
use crate::error::Result;
use crate::exact::{BitVector, ExactDist};
use crate::families::{Family, HiddenParam};
use crate::oracle::{cf_block_positions, compute_oracle, AnswerOracle, CanonicalBytes, ComponentKey, OracleKind};
use crate::scm::{Caps, Intervention};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub family: &'static str,
    pub size: usize,
    pub n: usize,
    pub scms: usize,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }
}

/// `do(X_var = value)` from an INT1 or INT_ALL oracle.
pub fn single_do(oracle: &AnswerOracle, var: usize, value: bool) -> Option<&ExactDist> {
    match oracle.kind() {
        OracleKind::IntAll => oracle.component(&ComponentKey::DoSet(Intervention::single(var, value))),
        _ => oracle.do_component(var, value),
    }
}

/// Each CF1 triple's factual block equals OBS and its world-b block equals
/// `do(X_i = b)`, bit for bit.
pub fn cf1_consistent(cf1: &AnswerOracle, interventional: &AnswerOracle) -> Result<bool> {
    let n = cf1.n();
    let Some(obs) = interventional.obs() else { return Ok(false) };
    for i in 0..n {
        let Some(triple) = cf1.cf_component(i) else { return Ok(false) };
        if triple.marginal(&cf_block_positions(n, 0))? != *obs {
            return Ok(false);
        }
        for (block, value) in [(1, false), (2, true)] {
            let world = triple.marginal(&cf_block_positions(n, block))?;
            if single_do(interventional, i, value) != Some(&world) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `{0^n: 1/2, 1^n: 1/2}`.
pub fn coupled_coin(n: usize) -> ExactDist {
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    ExactDist::new(n, [(BitVector::zeros(n), half.clone()), (BitVector::from_bits(vec![true; n]), half)])
        .expect("two halves sum to one")
}

fn decodes_to(param: &HiddenParam, lower: &AnswerOracle, cf1: &AnswerOracle) -> bool {
    match param {
        HiddenParam::Tree(t) => tree_from_int1(lower).is_ok_and(|d| d == *t),
        HiddenParam::Graph(g) => graph_from_int1(lower).is_ok_and(|d| d == *g),
        HiddenParam::String(s) => string_from_cf1(cf1).is_ok_and(|d| d == *s),
    }
}

struct Identical {
    first: Option<CanonicalBytes>,
    all_same: bool,
}

impl Identical {
    fn new() -> Self {
        Identical { first: None, all_same: true }
    }

    fn push(&mut self, bytes: CanonicalBytes) {
        match &self.first {
            None => self.first = Some(bytes),
            Some(f) => self.all_same &= *f == bytes,
        }
    }
}

/// Runs the family's suite: OBS (or INT_ALL) identical across parameters,
/// the separating rung injective, decoder round-trips, and CF1/do consistency.
pub fn verify_family(family: Family, caps: &Caps) -> Result<VerifyReport> {
    let params = family.params(caps)?;
    let n = family.n();
    let xor = matches!(family, Family::Xor { .. });
    let (shared_kind, separating_kind) = if xor { (OracleKind::IntAll, OracleKind::Cf1) } else { (OracleKind::Int1, OracleKind::Int1) };

    let mut obs_same = Identical::new();
    let mut shared_same = Identical::new();
    let mut separating = BTreeSet::new();
    let mut round_trips = 0usize;
    let mut consistent = 0usize;
    let mut obs_extractable = 0usize;
    let mut obs_expected = true;
    let expected_obs = coupled_coin(n);

    for p in &params {
        let scm = p.build_scm();
        let obs = compute_oracle(&scm, OracleKind::Obs, caps)?;
        let shared = compute_oracle(&scm, shared_kind, caps)?;
        let cf1 = compute_oracle(&scm, OracleKind::Cf1, caps)?;
        if !xor {
            obs_expected &= obs.obs() == Some(&expected_obs);
        }
        if shared.obs() == obs.obs() {
            obs_extractable += 1;
        }
        if cf1_consistent(&cf1, &shared)? {
            consistent += 1;
        }
        if decodes_to(p, &shared, &cf1) {
            round_trips += 1;
        }
        let sep_bytes = if xor { cf1.serialize() } else { shared.serialize() };
        separating.insert(sep_bytes.digest());
        obs_same.push(obs.serialize());
        if xor {
            shared_same.push(shared.serialize());
        }
    }

    let total = params.len();
    let mut checks = vec![Check {
        name: "observational serializations identical",
        passed: obs_same.all_same && obs_expected,
        detail: if xor {
            format!("{total} SCMs")
        } else {
            format!("{total} SCMs, law {{0^{n}: 1/2, 1^{n}: 1/2}}: {obs_expected}")
        },
    }];
    if xor {
        checks.push(Check {
            name: "INT_ALL serializations identical",
            passed: shared_same.all_same,
            detail: format!("{total} SCMs, {} interventions each", shared_kind.component_keys(n).len()),
        });
    }
    checks.extend([
        Check {
            name: if xor { "CF1 injective" } else { "INT1 injective" },
            passed: separating.len() == total,
            detail: format!("{}/{total} distinct {} byte-strings", separating.len(), separating_kind),
        },
        Check {
            name: "decoder round-trip",
            passed: round_trips == total,
            detail: format!("{round_trips}/{total} round-trips"),
        },
        Check {
            name: "CF1 blocks match do components",
            passed: consistent == total,
            detail: format!("{consistent}/{total} SCMs"),
        },
        Check {
            name: "OBS extractable from interventional oracle",
            passed: obs_extractable == total,
            detail: format!("{obs_extractable}/{total} SCMs"),
        },
    ]);
    Ok(VerifyReport { family: family.name(), size: family.size(), n, scms: total, checks })
}
