//! Binary acyclic structural causal models with finite rational noise.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Violation};
use crate::exact::{fmt_ratio, half, parse_ratio, ExactRational};
use crate::gate::Gate;

/// Enumeration guardrails. Defaults are desk-scale; every field can be raised.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    /// Maximum number of exogenous points enumerated for one distribution.
    pub support: u64,
    /// Maximum `n` for the all-interventions oracle (3^n mutilations).
    pub int_all_n: usize,
    /// Maximum node count for rooted-tree enumeration.
    pub tree_n: usize,
    /// Maximum layer size for bipartite-graph enumeration.
    pub graph_m: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { support: 1 << 24, int_all_n: 12, tree_n: 7, graph_m: 3 }
    }
}

/// Finite-support rational distribution over small integer noise symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NoiseDist {
    pub support: Vec<u32>,
    pub probs: Vec<ExactRational>,
}

impl NoiseDist {
    /// Point mass on `symbol`; the representation of a constant exogenous variable.
    pub fn constant(symbol: u32) -> Self {
        NoiseDist { support: vec![symbol], probs: vec![ExactRational::one()] }
    }

    pub fn bernoulli_half() -> Self {
        NoiseDist::bernoulli(half())
    }

    /// `P(1) = p`. Degenerates to a point mass when `p` is 0 or 1.
    pub fn bernoulli(p: ExactRational) -> Self {
        if p.is_zero() {
            NoiseDist::constant(0)
        } else if p.is_one() {
            NoiseDist::constant(1)
        } else {
            NoiseDist { support: vec![0, 1], probs: vec![ExactRational::one() - &p, p] }
        }
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    /// Sorted by symbol so that equal laws compare equal.
    pub(crate) fn canonical(&self) -> NoiseDist {
        let mut pairs: Vec<_> = self.support.iter().copied().zip(self.probs.iter().cloned()).collect();
        pairs.sort_by_key(|(s, _)| *s);
        let (support, probs) = pairs.into_iter().unzip();
        NoiseDist { support, probs }
    }

    fn problems(&self) -> Option<String> {
        if self.support.len() != self.probs.len() {
            return Some(format!("{} symbols but {} probabilities", self.support.len(), self.probs.len()));
        }
        if self.support.is_empty() {
            return Some("empty support".into());
        }
        let distinct: BTreeSet<_> = self.support.iter().collect();
        if distinct.len() != self.support.len() {
            return Some("duplicate support symbols".into());
        }
        if let Some(p) = self.probs.iter().find(|p| !p.is_positive()) {
            return Some(format!("non-positive probability {}", fmt_ratio(p)));
        }
        let total = self.probs.iter().fold(ExactRational::zero(), |s, p| s + p);
        if !total.is_one() {
            return Some(format!("probabilities sum to {}", fmt_ratio(&total)));
        }
        None
    }
}

/// Structural equation of one variable: `X_i = gate(X_parents, U_i)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mechanism {
    pub gate: Gate,
    pub parents: Vec<usize>,
    pub noise: NoiseDist,
}

impl Mechanism {
    pub fn new(gate: Gate, parents: Vec<usize>, noise: NoiseDist) -> Self {
        Mechanism { gate, parents, noise }
    }

    pub fn constant(value: bool) -> Self {
        let gate = if value { Gate::Const1 } else { Gate::Const0 };
        Mechanism { gate, parents: Vec::new(), noise: NoiseDist::constant(0) }
    }
}

/// Hard atomic intervention `do(X_S = x_S)`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Intervention(BTreeMap<usize, bool>);

impl Intervention {
    pub fn none() -> Self {
        Intervention::default()
    }

    pub fn single(var: usize, value: bool) -> Self {
        Intervention(BTreeMap::from([(var, value)]))
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, bool)>) -> Self {
        Intervention(pairs.into_iter().collect())
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn get(&self, var: usize) -> Option<bool> {
        self.0.get(&var).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, bool)> + '_ {
        self.0.iter().map(|(&k, &v)| (k, v))
    }

    /// Union of two interventions; entries of `other` win on overlap.
    pub fn merged(&self, other: &Intervention) -> Intervention {
        let mut out = self.0.clone();
        out.extend(other.0.iter().map(|(&k, &v)| (k, v)));
        Intervention(out)
    }

    /// `S=<comma list> x=<bits>`, members ascending.
    pub fn key(&self) -> String {
        let vars: Vec<String> = self.0.keys().map(|k| k.to_string()).collect();
        let bits: String = self.0.values().map(|&b| if b { '1' } else { '0' }).collect();
        format!("S={} x={}", vars.join(","), bits)
    }
}

/// A validated SCM. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Scm {
    mechanisms: Vec<Mechanism>,
    order: Vec<usize>,
}

/// Checks every structural invariant and reports all violations found.
pub fn validate(mechanisms: &[Mechanism]) -> std::result::Result<(), Vec<Violation>> {
    let n = mechanisms.len();
    let mut violations = Vec::new();
    for (var, mech) in mechanisms.iter().enumerate() {
        let mut seen = BTreeSet::new();
        for &p in &mech.parents {
            if p >= n {
                violations.push(Violation::BadParent { var, parent: p, reason: "index out of range" });
            } else if p == var {
                violations.push(Violation::BadParent { var, parent: p, reason: "self loop" });
            } else if !seen.insert(p) {
                violations.push(Violation::BadParent { var, parent: p, reason: "duplicate parent" });
            }
        }
        if !mech.gate.accepts_arity(mech.parents.len()) {
            violations.push(Violation::BadArity { var, gate: mech.gate.name(), arity: mech.parents.len() });
        }
        if let Some(reason) = mech.noise.problems() {
            violations.push(Violation::BadNoise { var, reason });
        } else if mech.gate.reads_noise() && mech.noise.support.iter().any(|&s| s > 1) {
            violations.push(Violation::BadNoise {
                var,
                reason: format!("gate {} needs binary noise symbols", mech.gate),
            });
        }
    }
    let parents_ok = violations.iter().all(|v| !matches!(v, Violation::BadParent { .. }));
    if parents_ok {
        if let Err(involved) = kahn(mechanisms) {
            violations.push(Violation::Cycle { involved });
        }
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}

/// Kahn's algorithm with a min-heap so ties break by ascending index.
/// On a cycle, returns the variables that could not be ordered.
fn kahn(mechanisms: &[Mechanism]) -> std::result::Result<Vec<usize>, Vec<usize>> {
    let n = mechanisms.len();
    let mut indegree: Vec<usize> = mechanisms.iter().map(|m| m.parents.len()).collect();
    let mut children = vec![Vec::new(); n];
    for (v, m) in mechanisms.iter().enumerate() {
        for &p in &m.parents {
            children[p].push(v);
        }
    }
    let mut ready: BinaryHeap<Reverse<usize>> = (0..n).filter(|&v| indegree[v] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse(v)) = ready.pop() {
        order.push(v);
        for &c in &children[v] {
            indegree[c] -= 1;
            if indegree[c] == 0 {
                ready.push(Reverse(c));
            }
        }
    }
    if order.len() == n {
        Ok(order)
    } else {
        Err((0..n).filter(|&v| indegree[v] > 0).collect())
    }
}

impl Scm {
    pub fn new(mechanisms: Vec<Mechanism>) -> Result<Scm> {
        validate(&mechanisms).map_err(Error::Invalid)?;
        let order = kahn(&mechanisms).expect("validated");
        Ok(Scm { mechanisms, order })
    }

    pub fn n(&self) -> usize {
        self.mechanisms.len()
    }

    pub fn mechanisms(&self) -> &[Mechanism] {
        &self.mechanisms
    }

    pub fn mechanism(&self, var: usize) -> &Mechanism {
        &self.mechanisms[var]
    }

    /// Topological order; every variable follows its parents, ties by ascending index.
    pub fn topo_order(&self) -> &[usize] {
        &self.order
    }

    pub fn max_indegree(&self) -> usize {
        self.mechanisms.iter().map(|m| m.parents.len()).max().unwrap_or(0)
    }

    /// Product of all noise support sizes, saturating.
    pub fn exogenous_points(&self) -> u128 {
        self.mechanisms.iter().fold(1u128, |acc, m| acc.saturating_mul(m.noise.len() as u128))
    }

    pub fn check_intervention(&self, iv: &Intervention) -> Result<()> {
        match iv.iter().find(|&(v, _)| v >= self.n()) {
            Some((var, _)) => Err(Error::BadIntervention { var, n: self.n() }),
            None => Ok(()),
        }
    }

    /// The mutilated model: each intervened variable becomes a parentless
    /// constant with degenerate noise. `self` is left untouched.
    pub fn apply_do(&self, iv: &Intervention) -> Result<Scm> {
        self.check_intervention(iv)?;
        let mechanisms: Vec<Mechanism> = self
            .mechanisms
            .iter()
            .enumerate()
            .map(|(v, m)| match iv.get(v) {
                Some(value) => Mechanism::constant(value),
                None => m.clone(),
            })
            .collect();
        // Removing edges cannot create a cycle; only the order may change.
        let order = kahn(&mechanisms).expect("mutilation keeps acyclicity");
        Ok(Scm { mechanisms, order })
    }

    pub fn to_json(&self) -> String {
        let doc = ScmDoc {
            n: self.n(),
            variables: self
                .mechanisms
                .iter()
                .enumerate()
                .map(|(id, m)| VariableDoc {
                    id,
                    parents: m.parents.clone(),
                    gate: m.gate.name().to_string(),
                    noise: NoiseDoc {
                        support: m.noise.support.clone(),
                        probs: m.noise.probs.iter().map(fmt_ratio).collect(),
                    },
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Scm> {
        let doc: ScmDoc = serde_json::from_str(text)?;
        if doc.variables.len() != doc.n {
            return Err(Error::Parse(format!("n={} but {} variables", doc.n, doc.variables.len())));
        }
        let mut violations = Vec::new();
        let mut mechanisms = Vec::with_capacity(doc.n);
        for (position, var) in doc.variables.into_iter().enumerate() {
            if var.id != position {
                violations.push(Violation::BadId { position, id: var.id });
            }
            let probs = var.noise.probs.iter().map(|p| parse_ratio(p)).collect::<Result<Vec<_>>>()?;
            mechanisms.push(Mechanism {
                gate: var.gate.parse()?,
                parents: var.parents,
                noise: NoiseDist { support: var.noise.support, probs },
            });
        }
        if !violations.is_empty() {
            return Err(Error::Invalid(violations));
        }
        Scm::new(mechanisms)
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct ScmDoc {
    n: usize,
    variables: Vec<VariableDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
struct VariableDoc {
    id: usize,
    parents: Vec<usize>,
    gate: String,
    noise: NoiseDoc,
}

#[derive(Debug, Serialize, Deserialize)]
struct NoiseDoc {
    support: Vec<u32>,
    probs: Vec<String>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;

    fn copy_of(p: usize) -> Mechanism {
        Mechanism::new(Gate::Copy, vec![p], NoiseDist::constant(0))
    }

    fn source() -> Mechanism {
        Mechanism::new(Gate::BernSource, vec![], NoiseDist::bernoulli_half())
    }

    #[test]
    fn chain_is_valid() {
        let scm = Scm::new(vec![source(), copy_of(0)]).unwrap();
        assert_eq!(scm.topo_order(), &[0, 1]);
    }

    #[test]
    fn two_cycle_is_rejected() {
        let err = validate(&[copy_of(1), copy_of(0)]).unwrap_err();
        assert_eq!(err.len(), 1);
        assert_eq!(err[0].code(), "CYCLE");
    }

    #[test]
    fn noise_not_summing_to_one() {
        let bad = NoiseDist { support: vec![0, 1], probs: vec![ratio(1, 2), ratio(1, 3)] };
        let err = validate(&[Mechanism::new(Gate::BernSource, vec![], bad)]).unwrap_err();
        assert_eq!(err[0].code(), "BAD_NOISE");
    }

    #[test]
    fn every_violation_listed() {
        let mechs = vec![
            Mechanism::new(Gate::Copy, vec![5], NoiseDist::constant(0)),
            Mechanism::new(Gate::And, vec![0, 0], NoiseDist { support: vec![0], probs: vec![ratio(1, 2)] }),
            Mechanism::new(Gate::BernSource, vec![0], NoiseDist::bernoulli_half()),
        ];
        let codes: Vec<_> = validate(&mechs).unwrap_err().iter().map(|v| v.code()).collect();
        assert_eq!(codes, vec!["BAD_PARENT", "BAD_PARENT", "BAD_NOISE", "ARITY_MISMATCH"]);
    }

    #[test]
    fn noise_reading_gates_need_binary_symbols() {
        let noise = NoiseDist { support: vec![0, 2], probs: vec![ratio(1, 2), ratio(1, 2)] };
        let err = validate(&[Mechanism::new(Gate::BernSource, vec![], noise)]).unwrap_err();
        assert_eq!(err[0].code(), "BAD_NOISE");
    }

    #[test]
    fn topo_order_examples() {
        let chain = Scm::new(vec![source(), copy_of(0), copy_of(1)]).unwrap();
        assert_eq!(chain.topo_order(), &[0, 1, 2]);
        let edgeless = Scm::new(vec![source(), source(), source()]).unwrap();
        assert_eq!(edgeless.topo_order(), &[0, 1, 2]);
        // reversed chain numbering still orders parents first
        let rev = Scm::new(vec![copy_of(1), copy_of(2), source()]).unwrap();
        assert_eq!(rev.topo_order(), &[2, 1, 0]);
    }

    #[test]
    fn apply_do_mutilates_only_targets() {
        let chain = Scm::new(vec![source(), copy_of(0), copy_of(1)]).unwrap();
        let cut = chain.apply_do(&Intervention::single(1, false)).unwrap();
        assert_eq!(cut.mechanism(1).gate, Gate::Const0);
        assert!(cut.mechanism(1).parents.is_empty());
        assert_eq!(cut.mechanism(2), chain.mechanism(2));
        assert_eq!(chain.mechanism(1).gate, Gate::Copy);
        assert_eq!(chain.apply_do(&Intervention::none()).unwrap(), chain);
        assert!(chain.apply_do(&Intervention::single(3, true)).is_err());
    }

    #[test]
    fn apply_do_idempotent_and_commuting() {
        let chain = Scm::new(vec![source(), copy_of(0), copy_of(1)]).unwrap();
        let a = Intervention::single(0, true);
        let b = Intervention::single(2, false);
        let once = chain.apply_do(&a).unwrap();
        assert_eq!(once.apply_do(&a).unwrap(), once);
        let ab = once.apply_do(&b).unwrap();
        let ba = chain.apply_do(&b).unwrap().apply_do(&a).unwrap();
        assert_eq!(ab, ba);
        assert_eq!(ab, chain.apply_do(&a.merged(&b)).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let scm = Scm::new(vec![source(), copy_of(0), Mechanism::new(Gate::And, vec![0, 1], NoiseDist::constant(0))])
            .unwrap();
        let text = scm.to_json();
        assert!(text.contains("\"1/2\""));
        assert_eq!(Scm::from_json(&text).unwrap(), scm);
    }

    #[test]
    fn json_rejects_cycle() {
        let text = r#"{"n":2,"variables":[
            {"id":0,"parents":[1],"gate":"COPY","noise":{"support":[0],"probs":["1/1"]}},
            {"id":1,"parents":[0],"gate":"COPY","noise":{"support":[0],"probs":["1/1"]}}]}"#;
        assert!(matches!(Scm::from_json(text), Err(Error::Invalid(v)) if v[0].code() == "CYCLE"));
    }

    #[test]
    fn intervention_key() {
        assert_eq!(Intervention::none().key(), "S= x=");
        assert_eq!(Intervention::from_pairs([(2, true), (0, false)]).key(), "S=0,2 x=01");
    }
}
