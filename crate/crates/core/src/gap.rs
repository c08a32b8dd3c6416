//! Description-length accounting with two computable surrogates:
//! constructive encoder bit-lengths (upper-bound surrogate) and log2 of
//! ambiguity-class sizes (lower-bound surrogate), plus exact conditional
//! Shannon entropy under the uniform prior and the degree-sensitive bound.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{fmt_ratio, ExactRational};
use crate::families::{class_membership, BipartiteGraph, ClassSpec, Family, HiddenParam, HiddenString};
use crate::oracle::{compute_oracle, d_int, AnswerOracle, CanonicalBytes, OracleKind};
use crate::scm::{Caps, Scm};

/// Smallest `k` with `2^k >= x` (0 for `x <= 1`).
pub fn ceil_log2(x: &BigUint) -> u64 {
    if x <= &BigUint::one() {
        return 0;
    }
    let k = x.bits();
    if (BigUint::one() << (k - 1)) == *x {
        k - 1
    } else {
        k
    }
}

/// `log2(x)` as a float, accurate for huge `x`.
pub fn log2_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 52 {
        return x.to_f64().unwrap_or(0.0).log2();
    }
    let shift = bits - 52;
    (x >> shift).to_f64().unwrap_or(0.0).log2() + shift as f64
}

/// Exponent `k` when `x == 2^k`.
pub fn exact_log2(x: &BigUint) -> Option<u64> {
    (x.count_ones() == 1).then(|| x.bits() - 1)
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

/// Named whole-bit components of a constructive code, with the real-valued
/// formula value alongside for comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BitBudget {
    pub component_bits: Vec<(String, u64)>,
    pub total_bits: u64,
    pub idealized_bits: f64,
}

impl BitBudget {
    fn new(component_bits: Vec<(String, u64)>, idealized_bits: f64) -> Self {
        let total_bits = component_bits.iter().map(|(_, b)| b).sum();
        BitBudget { component_bits, total_bits, idealized_bits }
    }

    pub fn component(&self, label: &str) -> Option<u64> {
        self.component_bits.iter().find(|(l, _)| l == label).map(|(_, b)| *b)
    }
}

/// Prüfer sequence plus root label: `⌈(n−2)·log2 n⌉ + ⌈log2 n⌉` bits.
pub fn tree_bit_budget(n: usize) -> BitBudget {
    let big_n = BigUint::from(n);
    let sequence = ceil_log2(&big_n.pow(n.saturating_sub(2) as u32));
    let root = ceil_log2(&big_n);
    let idealized = if n == 0 { 0.0 } else { (n as f64 - 1.0) * (n as f64).log2() };
    BitBudget::new(vec![("sequence".into(), sequence), ("root".into(), root)], idealized)
}

/// Row-major `m × m` adjacency bits.
pub fn adjacency_encode(g: &BipartiteGraph) -> String {
    let m = g.m();
    (0..m * m).map(|k| if g.contains(k / m, k % m) { '1' } else { '0' }).collect()
}

pub fn adjacency_decode(m: usize, bits: &str) -> Result<BipartiteGraph> {
    if bits.len() != m * m {
        return Err(Error::Parse(format!("{} adjacency bits for m={m}", bits.len())));
    }
    let mut edges = Vec::new();
    for (k, c) in bits.chars().enumerate() {
        match c {
            '1' => edges.push((k / m, k % m)),
            '0' => {}
            _ => return Err(Error::Parse(format!("bad adjacency bit {c:?}"))),
        }
    }
    BipartiteGraph::new(m, edges)
}

/// Whole-bit length of the family's constructive parameter code.
pub fn encoder_bits(family: Family) -> u64 {
    match family {
        Family::Tree { n } => tree_bit_budget(n).total_bits,
        Family::Bipartite { m } => (m * m) as u64,
        Family::Xor { m } => m as u64,
    }
}

/// Codeword of a parameter under its family's encoder.
pub fn encode_param(param: &HiddenParam) -> String {
    match param {
        HiddenParam::Tree(t) => {
            let n = t.n();
            let (seq, root) = crate::prufer::prufer_encode(t);
            let digits = |v: usize, width: u64| format!("{v:0width$b}", width = width as usize);
            let root_bits = ceil_log2(&BigUint::from(n));
            // mixed-radix integer of the sequence, written in its whole-bit width
            let value = seq.iter().fold(BigUint::zero(), |acc, &v| acc * BigUint::from(n) + BigUint::from(v));
            let width = tree_bit_budget(n).component("sequence").unwrap_or(0) as usize;
            let seq_bits = if width == 0 { String::new() } else { format!("{:0>width$}", value.to_str_radix(2)) };
            format!("{seq_bits}{}", if root_bits == 0 { String::new() } else { digits(root, root_bits) })
        }
        HiddenParam::Graph(g) => adjacency_encode(g),
        HiddenParam::String(s) => s.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AmbiguityClass {
    /// SHA-256 of the shared lower-rung canonical bytes.
    pub lower_digest: String,
    pub members: u64,
    /// How many parameters map to each distinct higher-rung oracle, descending.
    pub higher_multiplicities: Vec<u64>,
}

impl AmbiguityClass {
    pub fn distinct_higher(&self) -> u64 {
        self.higher_multiplicities.len() as u64
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AmbiguityReport {
    pub family: Family,
    pub lower_kind: &'static str,
    pub higher_kind: &'static str,
    /// Sorted by digest.
    pub classes: Vec<AmbiguityClass>,
    pub family_size: u64,
}

impl AmbiguityReport {
    /// The largest number of distinct higher oracles sharing one lower oracle.
    pub fn ambiguity_count(&self) -> u64 {
        self.classes.iter().map(AmbiguityClass::distinct_higher).max().unwrap_or(0)
    }

    pub fn log2_ambiguity(&self) -> f64 {
        (self.ambiguity_count() as f64).log2()
    }
}

/// Canonical lower and higher oracle bytes for every parameter of the family.
pub fn oracle_table(
    family: Family,
    lower: OracleKind,
    higher: OracleKind,
    caps: &Caps,
) -> Result<Vec<(HiddenParam, CanonicalBytes, CanonicalBytes)>> {
    family
        .params(caps)?
        .into_iter()
        .map(|p| {
            let scm = p.build_scm();
            let lo = compute_oracle(&scm, lower, caps)?.serialize();
            let hi = if higher == lower { lo.clone() } else { compute_oracle(&scm, higher, caps)?.serialize() };
            Ok((p, lo, hi))
        })
        .collect()
}

pub fn ambiguity_classes(family: Family, lower: OracleKind, higher: OracleKind, caps: &Caps) -> Result<AmbiguityReport> {
    let table = oracle_table(family, lower, higher, caps)?;
    let family_size = table.len() as u64;
    let mut groups: BTreeMap<String, BTreeMap<CanonicalBytes, u64>> = BTreeMap::new();
    for (_, lo, hi) in table {
        *groups.entry(lo.digest()).or_default().entry(hi).or_default() += 1;
    }
    let classes = groups
        .into_iter()
        .map(|(lower_digest, highs)| {
            let mut higher_multiplicities: Vec<u64> = highs.into_values().collect();
            higher_multiplicities.sort_unstable_by(|a, b| b.cmp(a));
            AmbiguityClass { lower_digest, members: higher_multiplicities.iter().sum(), higher_multiplicities }
        })
        .collect();
    Ok(AmbiguityReport { family, lower_kind: lower.name(), higher_kind: higher.name(), classes, family_size })
}

/// An exact linear combination `Σ c_k · log2(k)` of logarithms of integers.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LogSum {
    terms: BTreeMap<BigUint, ExactRational>,
}

impl LogSum {
    pub fn add_term(&mut self, coefficient: ExactRational, argument: BigUint) {
        if argument.is_one() || coefficient.is_zero() {
            return;
        }
        let slot = self.terms.entry(argument.clone()).or_insert_with(ExactRational::zero);
        *slot += coefficient;
        if slot.is_zero() {
            self.terms.remove(&argument);
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.terms.iter().map(|(k, c)| crate::exact::to_f64(c) * log2_big(k)).sum()
    }

    /// The exact value when every surviving logarithm is of a power of two.
    pub fn exact(&self) -> Option<ExactRational> {
        self.terms.iter().try_fold(ExactRational::zero(), |acc, (k, c)| {
            exact_log2(k).map(|e| acc + c * ExactRational::from_integer(BigInt::from(e)))
        })
    }
}

/// `H(higher | lower)` in bits with the parameter drawn uniformly.
pub fn conditional_entropy(report: &AmbiguityReport) -> LogSum {
    let total = BigInt::from(report.family_size);
    let mut h = LogSum::default();
    for class in &report.classes {
        for &count in &class.higher_multiplicities {
            let weight = BigRational::new(BigInt::from(count), total.clone());
            h.add_term(weight.clone(), BigUint::from(class.members));
            h.add_term(-weight, BigUint::from(count));
        }
    }
    h
}

pub fn conditional_entropy_uniform(family: Family, lower: OracleKind, higher: OracleKind, caps: &Caps) -> Result<LogSum> {
    Ok(conditional_entropy(&ambiguity_classes(family, lower, higher, caps)?))
}

/// Verdict of an inequality checked against an outward-rounded interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BoundCheck {
    Holds,
    Violated,
    Undecided,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeBoundReport {
    pub n: usize,
    pub d: usize,
    /// `Σ_{k=0..d} C(n−1, k)`, exact.
    pub parent_choices: String,
    /// `n · ⌈log2 parent_choices⌉`.
    pub parent_bits: u64,
    /// `⌈log2 n!⌉`.
    pub order_bits: u64,
    /// `n · ⌈log2(|Γ|·|Π|)⌉` when a library is given.
    pub gate_noise_bits: Option<u64>,
    /// `⌊lower end⌋` and `⌈upper end⌉` of `(d+1)(e(n−1)/d)^d`.
    pub rhs_floor: String,
    pub rhs_ceil: String,
    pub closed_form_check: BoundCheck,
}

impl DegreeBoundReport {
    pub fn parent_choices(&self) -> BigUint {
        self.parent_choices.parse().expect("decimal")
    }
}

pub fn parent_choices(n: usize, d: usize) -> BigUint {
    let up = BigUint::from(n.saturating_sub(1));
    (0..=d).map(|k| binomial(up.clone(), BigUint::from(k))).sum()
}

/// Rational enclosure `[lo, hi]` of Euler's number from the truncated series
/// `Σ_{k≤25} 1/k!` and its tail bound `1/(25!·25)`.
pub fn e_enclosure() -> (ExactRational, ExactRational) {
    const TERMS: u64 = 25;
    let mut lo = ExactRational::zero();
    let mut fact = BigInt::one();
    for k in 0..=TERMS {
        if k > 0 {
            fact *= BigInt::from(k);
        }
        lo += BigRational::new(BigInt::one(), fact.clone());
    }
    let hi = &lo + BigRational::new(BigInt::one(), fact * BigInt::from(TERMS));
    (lo, hi)
}

pub fn degree_bound(n: usize, d: usize) -> Result<DegreeBoundReport> {
    if d == 0 || d + 1 > n {
        return Err(Error::BadRange(format!("need 1 <= d <= n-1, got n={n} d={d}")));
    }
    let choices = parent_choices(n, d);
    let (e_lo, e_hi) = e_enclosure();
    let rhs = |e: &ExactRational| {
        let base = e * BigRational::new(BigInt::from(n - 1), BigInt::from(d));
        num_traits::pow(base, d) * ExactRational::from_integer(BigInt::from(d + 1))
    };
    let (lo, hi) = (rhs(&e_lo), rhs(&e_hi));
    let lhs = ExactRational::from_integer(BigInt::from(choices.clone()));
    let closed_form_check = if lhs <= lo {
        BoundCheck::Holds
    } else if lhs > hi {
        BoundCheck::Violated
    } else {
        BoundCheck::Undecided
    };
    Ok(DegreeBoundReport {
        n,
        d,
        parent_bits: n as u64 * ceil_log2(&choices),
        parent_choices: choices.to_string(),
        order_bits: ceil_log2(&factorial(n)),
        gate_noise_bits: None,
        rhs_floor: lo.floor().to_integer().to_string(),
        rhs_ceil: hi.ceil().to_integer().to_string(),
        closed_form_check,
    })
}

/// Constructive code for a member of `M_{n,d}(Γ, Π)`: a topological order,
/// each variable's parent set, and each variable's gate and noise choice.
pub fn generic_class_encoding(scm: &Scm, spec: &ClassSpec) -> Result<BitBudget> {
    let membership = class_membership(scm, spec);
    if !membership.member {
        return Err(Error::NotMember(membership.violations.join("; ")));
    }
    let n = scm.n();
    let d = spec.d.min(n.saturating_sub(1));
    let choices = parent_choices(n, d);
    let library = BigUint::from(spec.gamma.len() * spec.pi.len());
    let order = ceil_log2(&factorial(n));
    let parents = n as u64 * ceil_log2(&choices);
    let gate_noise = n as u64 * ceil_log2(&library);
    let idealized = log2_big(&factorial(n)) + n as f64 * (log2_big(&choices) + log2_big(&library));
    Ok(BitBudget::new(
        vec![("order".into(), order), ("parents".into(), parents), ("gate_noise".into(), gate_noise)],
        idealized,
    ))
}

/// One row of the gap table; field names are the CSV columns.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapRow {
    pub family: &'static str,
    pub size_param: usize,
    pub n: usize,
    pub lower_kind: &'static str,
    pub higher_kind: &'static str,
    pub ambiguity_count: u64,
    pub log2_ambiguity: f64,
    pub encoder_bits: u64,
    pub entropy_bits: f64,
    pub min_pairwise_d_int: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapDetail {
    pub row: GapRow,
    /// Exact entropy when it is rational.
    pub entropy_exact: Option<String>,
    /// `encoder_bits − log2_ambiguity`.
    pub slack_bits: f64,
    /// `ambiguity_count <= 2^encoder_bits`, exact.
    pub lower_le_upper: bool,
}

pub fn separation_table(family: Family, lower: OracleKind, higher: OracleKind, caps: &Caps) -> Result<GapDetail> {
    let report = ambiguity_classes(family, lower, higher, caps)?;
    let entropy = conditional_entropy(&report);
    let encoder = encoder_bits(family);
    let count = report.ambiguity_count();
    let lower_le_upper = BigUint::from(count) <= BigUint::one() << encoder;
    if !lower_le_upper && !matches!(family, Family::Tree { .. }) {
        return Err(Error::BadRange(format!("ambiguity {count} exceeds 2^{encoder}")));
    }
    let min_pairwise_d_int = match (family, higher) {
        (Family::Bipartite { m }, OracleKind::Int1) => Some(fmt_ratio(&min_pairwise_d_int(&bipartite_int1(m, caps)?)?)),
        _ => None,
    };
    let row = GapRow {
        family: family.name(),
        size_param: family.size(),
        n: family.n(),
        lower_kind: lower.name(),
        higher_kind: higher.name(),
        ambiguity_count: count,
        log2_ambiguity: report.log2_ambiguity(),
        encoder_bits: encoder,
        entropy_bits: entropy.to_f64(),
        min_pairwise_d_int,
    };
    Ok(GapDetail {
        slack_bits: encoder as f64 - row.log2_ambiguity,
        entropy_exact: entropy.exact().map(|q| fmt_ratio(&q)),
        row,
        lower_le_upper,
    })
}

fn bipartite_int1(m: usize, caps: &Caps) -> Result<Vec<AnswerOracle>> {
    Family::Bipartite { m }
        .params(caps)?
        .iter()
        .map(|p| compute_oracle(&p.build_scm(), OracleKind::Int1, caps))
        .collect()
}

/// Smallest `d_Int` over all unordered pairs, or 1 when there are none.
fn min_pairwise_d_int(oracles: &[AnswerOracle]) -> Result<ExactRational> {
    let mut best: Option<ExactRational> = None;
    for (i, a) in oracles.iter().enumerate() {
        for b in &oracles[i + 1..] {
            let d = d_int(a, b)?;
            if best.as_ref().is_none_or(|cur| d < *cur) {
                best = Some(d);
            }
        }
    }
    Ok(best.unwrap_or_else(ExactRational::one))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparationReport {
    pub m: usize,
    pub epsilon: String,
    pub oracles: usize,
    pub pairs: usize,
    pub min_pairwise_d_int: String,
    /// `2ε < min d_Int`: open ε-balls around distinct oracles are pairwise disjoint.
    pub disjoint: bool,
    /// `min d_Int >= 1/2`.
    pub meets_half: bool,
}

pub fn pairwise_separation_check(m: usize, epsilon: &ExactRational, caps: &Caps) -> Result<SeparationReport> {
    if epsilon < &ExactRational::zero() {
        return Err(Error::BadRange("epsilon must be non-negative".into()));
    }
    let oracles = bipartite_int1(m, caps)?;
    let min = min_pairwise_d_int(&oracles)?;
    let two = ExactRational::from_integer(BigInt::from(2));
    Ok(SeparationReport {
        m,
        epsilon: fmt_ratio(epsilon),
        oracles: oracles.len(),
        pairs: oracles.len() * oracles.len().saturating_sub(1) / 2,
        disjoint: &two * epsilon < min,
        meets_half: min >= crate::exact::half(),
        min_pairwise_d_int: fmt_ratio(&min),
    })
}

/// `m`-bit code of a hidden string.
pub fn string_encode(s: &HiddenString) -> String {
    s.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;
    use crate::families::{build_bipartite_scm, build_tree_scm, RootedTree};
    use crate::gate::Gate;
    use proptest::prelude::*;

    #[test]
    fn ceil_log2_values() {
        let c = |v: u64| ceil_log2(&BigUint::from(v));
        assert_eq!([c(0), c(1), c(2), c(3), c(4), c(5), c(8), c(9)], [0, 0, 1, 2, 2, 3, 3, 4]);
        assert_eq!(exact_log2(&BigUint::from(512u32)), Some(9));
        assert_eq!(exact_log2(&BigUint::from(625u32)), None);
    }

    #[test]
    fn tree_budget_examples() {
        let b4 = tree_bit_budget(4);
        assert_eq!(b4.component("sequence"), Some(4));
        assert_eq!(b4.component("root"), Some(2));
        assert_eq!(b4.total_bits, 6);
        let b2 = tree_bit_budget(2);
        assert_eq!((b2.component("sequence"), b2.component("root")), (Some(0), Some(1)));
        assert_eq!(tree_bit_budget(16).idealized_bits, 60.0);
        // ⌈3·log2 5⌉ = 7, ⌈log2 5⌉ = 3
        assert_eq!(tree_bit_budget(5).total_bits, 10);
    }

    #[test]
    fn adjacency_examples() {
        let g = BipartiteGraph::new(2, [(0, 0)]).unwrap();
        assert_eq!(adjacency_encode(&g), "1000");
        assert_eq!(adjacency_encode(&BipartiteGraph::empty(3)), "000000000");
        assert_eq!(adjacency_decode(2, "1000").unwrap(), g);
        assert!(adjacency_decode(2, "100").is_err());
    }

    #[test]
    fn tree_codewords_fit_budget() {
        let caps = Caps::default();
        for n in 1..=5 {
            let budget = tree_bit_budget(n).total_bits as usize;
            let words: std::collections::BTreeSet<_> = Family::Tree { n }
                .params(&caps)
                .unwrap()
                .iter()
                .map(|p| {
                    let w = encode_param(p);
                    assert_eq!(w.len(), budget);
                    w
                })
                .collect();
            assert_eq!(words.len() as u64, (n as u64).pow(n as u32 - 1));
        }
    }

    #[test]
    fn degree_bound_examples() {
        let pc = |n, d| degree_bound(n, d).unwrap().parent_choices();
        assert_eq!(pc(4, 1), BigUint::from(4u32));
        assert_eq!(pc(4, 3), BigUint::from(8u32));
        assert_eq!(pc(7, 6), BigUint::from(64u32));
        assert_eq!(pc(7, 1), BigUint::from(7u32));
        assert!(degree_bound(4, 0).is_err());
        assert!(degree_bound(4, 4).is_err());
    }

    #[test]
    fn e_enclosure_brackets_e() {
        let (lo, hi) = e_enclosure();
        assert!(crate::exact::to_f64(&lo) <= std::f64::consts::E);
        assert!(crate::exact::to_f64(&hi) >= std::f64::consts::E);
        assert!(lo < hi);
    }

    #[test]
    fn generic_encoding_examples() {
        let noise = ClassSpec::standard_noise();
        let tree_class = ClassSpec::new([Gate::Copy, Gate::BernSource], noise.clone(), 1).unwrap();
        let tree = build_tree_scm(&RootedTree::chain(3));
        let b = generic_class_encoding(&tree, &tree_class).unwrap();
        assert_eq!(b.component("parents"), Some(6));

        let single = build_tree_scm(&RootedTree::chain(1));
        let b = generic_class_encoding(&single, &tree_class).unwrap();
        assert_eq!((b.component("order"), b.component("parents")), (Some(0), Some(0)));

        let bip_class = ClassSpec::new([Gate::Copy, Gate::And, Gate::BernSource], noise, 2).unwrap();
        let bip = build_bipartite_scm(&BipartiteGraph::full(1));
        let b = generic_class_encoding(&bip, &bip_class).unwrap();
        assert!(b.total_bits >= tree_bit_budget(3).total_bits);

        let fat = build_bipartite_scm(&BipartiteGraph::full(2));
        assert!(matches!(generic_class_encoding(&fat, &tree_class), Err(Error::NotMember(_))));
    }

    #[test]
    fn entropy_of_identity_is_zero() {
        let caps = Caps::default();
        let h = conditional_entropy_uniform(Family::Bipartite { m: 2 }, OracleKind::Int1, OracleKind::Int1, &caps).unwrap();
        assert_eq!(h.exact(), Some(ratio(0, 1)));
        let h = conditional_entropy_uniform(Family::Xor { m: 2 }, OracleKind::Obs, OracleKind::Obs, &caps).unwrap();
        assert_eq!(h.exact(), Some(ratio(0, 1)));
    }

    #[test]
    fn entropy_counts() {
        let caps = Caps::default();
        let h = conditional_entropy_uniform(Family::Xor { m: 3 }, OracleKind::Int1, OracleKind::Cf1, &caps).unwrap();
        assert_eq!(h.exact(), Some(ratio(3, 1)));
        let h = conditional_entropy_uniform(Family::Bipartite { m: 2 }, OracleKind::Obs, OracleKind::Int1, &caps).unwrap();
        assert_eq!(h.exact(), Some(ratio(4, 1)));
        // xor: Int1 carries no information beyond Obs
        let h = conditional_entropy_uniform(Family::Xor { m: 2 }, OracleKind::Obs, OracleKind::Int1, &caps).unwrap();
        assert_eq!(h.exact(), Some(ratio(0, 1)));
    }

    #[test]
    fn log_sum_cancels() {
        let mut s = LogSum::default();
        s.add_term(ratio(1, 2), BigUint::from(625u32));
        s.add_term(ratio(-1, 2), BigUint::from(625u32));
        assert_eq!(s.exact(), Some(ratio(0, 1)));
        s.add_term(ratio(1, 1), BigUint::from(5u32));
        assert_eq!(s.exact(), None);
        assert!((s.to_f64() - 5f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn separation_examples() {
        let caps = Caps::default();
        let r = pairwise_separation_check(2, &ratio(1, 5), &caps).unwrap();
        assert_eq!((r.pairs, r.min_pairwise_d_int.as_str(), r.disjoint), (120, "1/2", true));
        let r = pairwise_separation_check(2, &ratio(1, 4), &caps).unwrap();
        assert!(!r.disjoint);
        let r = pairwise_separation_check(1, &ratio(0, 1), &caps).unwrap();
        assert_eq!(r.oracles, 2);
        assert!(r.disjoint);
        assert!(pairwise_separation_check(4, &ratio(0, 1), &caps).is_err());
        assert!(pairwise_separation_check(1, &ratio(-1, 2), &caps).is_err());
    }

    proptest! {
        #[test]
        fn degree_bound_monotone_in_d(n in 2usize..22) {
            let mut prev = BigUint::zero();
            for d in 1..n {
                let r = degree_bound(n, d).unwrap();
                let pc = r.parent_choices();
                prop_assert!(pc >= prev);
                prop_assert_eq!(r.closed_form_check, BoundCheck::Holds);
                prev = pc;
            }
            prop_assert_eq!(prev, BigUint::one() << (n - 1));
        }
    }
}
