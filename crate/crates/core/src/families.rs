//! The three separating SCM families, their hidden parameters, exhaustive
//! enumeration, and membership in bounded-indegree gate-schema classes.
//!
//! Variable numbering:
//! - tree: node `v` is variable `v`;
//! - bipartite: `r = 0`, `a_i = 1 + i`, `b_j = 1 + m + j` (n = 2m + 1);
//! - modular XOR: `X_t = 2t`, `Y_t = 2t + 1` (n = 2m).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gate::Gate;
use crate::prufer::prufer_decode;
use crate::scm::{Caps, Mechanism, NoiseDist, Scm};

/// Rooted labeled tree on `0..n`, stored as parent pointers.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RootedTree {
    root: usize,
    parent: Vec<Option<usize>>,
}

impl RootedTree {
    pub fn new(root: usize, parent: Vec<Option<usize>>) -> Result<Self> {
        let n = parent.len();
        if root >= n {
            return Err(Error::InvalidTree(format!("root {root} out of range for n={n}")));
        }
        for (v, p) in parent.iter().enumerate() {
            match (v == root, p) {
                (true, Some(_)) => return Err(Error::InvalidTree("root has a parent".into())),
                (false, None) => return Err(Error::InvalidTree(format!("node {v} has no parent"))),
                (false, Some(p)) if *p >= n || *p == v => {
                    return Err(Error::InvalidTree(format!("node {v} has bad parent {p}")))
                }
                _ => {}
            }
        }
        // Every node must reach the root in fewer than n steps.
        for start in 0..n {
            let mut v = start;
            let mut steps = 0;
            while let Some(p) = parent[v] {
                v = p;
                steps += 1;
                if steps > n {
                    return Err(Error::InvalidTree(format!("cycle through node {start}")));
                }
            }
        }
        Ok(RootedTree { root, parent })
    }

    pub fn from_parent_map(n: usize, root: usize, map: &BTreeMap<usize, usize>) -> Result<Self> {
        if let Some(&bad) = map.keys().find(|&&c| c >= n) {
            return Err(Error::InvalidTree(format!("node {bad} out of range")));
        }
        RootedTree::new(root, (0..n).map(|v| map.get(&v).copied()).collect())
    }

    pub fn n(&self) -> usize {
        self.parent.len()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    /// `(child, parent)` pairs in ascending child order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.parent.iter().enumerate().filter_map(|(c, p)| p.map(|p| (c, p)))
    }

    pub fn chain(n: usize) -> Self {
        RootedTree::new(0, (0..n).map(|v| v.checked_sub(1)).collect()).expect("chain is a tree")
    }

    pub fn star(n: usize) -> Self {
        RootedTree::new(0, (0..n).map(|v| (v > 0).then_some(0)).collect()).expect("star is a tree")
    }

    pub fn to_json(&self) -> String {
        let doc = TreeDoc {
            n: self.n(),
            root: self.root,
            parent: self.edges().collect(),
        };
        serde_json::to_string(&doc).expect("plain data")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: TreeDoc = serde_json::from_str(text)?;
        RootedTree::from_parent_map(doc.n, doc.root, &doc.parent)
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct TreeDoc {
    n: usize,
    root: usize,
    parent: BTreeMap<usize, usize>,
}

/// Bipartite graph `G ⊆ A × B`; `(i, j)` means `(a_i, b_j) ∈ G`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BipartiteGraph {
    m: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl BipartiteGraph {
    pub fn new(m: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let edges: BTreeSet<_> = edges.into_iter().collect();
        if let Some(&(i, j)) = edges.iter().find(|&&(i, j)| i >= m || j >= m) {
            return Err(Error::Parse(format!("edge ({i},{j}) out of range for m={m}")));
        }
        Ok(BipartiteGraph { m, edges })
    }

    pub fn empty(m: usize) -> Self {
        BipartiteGraph { m, edges: BTreeSet::new() }
    }

    pub fn full(m: usize) -> Self {
        BipartiteGraph { m, edges: (0..m).flat_map(|i| (0..m).map(move |j| (i, j))).collect() }
    }

    /// Graph whose row-major adjacency bitstring, read as a binary number, is `mask`.
    pub fn from_mask(m: usize, mask: u64) -> Self {
        let cells = m * m;
        let edges = (0..cells)
            .filter(|&k| (mask >> (cells - 1 - k)) & 1 == 1)
            .map(|k| (k / m, k % m))
            .collect();
        BipartiteGraph { m, edges }
    }

    pub fn mask(&self) -> u64 {
        let cells = self.m * self.m;
        self.edges.iter().fold(0, |acc, &(i, j)| acc | 1 << (cells - 1 - (i * self.m + j)))
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.edges.contains(&(i, j))
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn to_json(&self) -> String {
        let doc = GraphDoc { m: self.m, edges: self.edges.iter().map(|&(i, j)| [i, j]).collect() };
        serde_json::to_string(&doc).expect("plain data")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: GraphDoc = serde_json::from_str(text)?;
        BipartiteGraph::new(doc.m, doc.edges.into_iter().map(|[i, j]| (i, j)))
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct GraphDoc {
    m: usize,
    edges: Vec<[usize; 2]>,
}

/// Hidden string `s ∈ {0,1}^m` of the modular-XOR family.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HiddenString(Vec<bool>);

impl HiddenString {
    pub fn new(bits: Vec<bool>) -> Self {
        HiddenString(bits)
    }

    pub fn m(&self) -> usize {
        self.0.len()
    }

    pub fn bit(&self, t: usize) -> bool {
        self.0[t]
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&StringDoc { m: self.m(), bits: self.to_string() }).expect("plain data")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: StringDoc = serde_json::from_str(text)?;
        let s: HiddenString = doc.bits.parse()?;
        if s.m() != doc.m {
            return Err(Error::Parse(format!("m={} but {} bits", doc.m, s.m())));
        }
        Ok(s)
    }
}

impl fmt::Display for HiddenString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|&b| f.write_str(if b { "1" } else { "0" }))
    }
}

impl std::str::FromStr for HiddenString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits: crate::exact::BitVector = s.parse()?;
        Ok(HiddenString(bits.bits().to_vec()))
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct StringDoc {
    m: usize,
    bits: String,
}

/// A hidden parameter of any of the three families.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum HiddenParam {
    Tree(RootedTree),
    Graph(BipartiteGraph),
    String(HiddenString),
}

impl HiddenParam {
    pub fn build_scm(&self) -> Scm {
        match self {
            HiddenParam::Tree(t) => build_tree_scm(t),
            HiddenParam::Graph(g) => build_bipartite_scm(g),
            HiddenParam::String(s) => build_xor_scm(s),
        }
    }

    pub fn to_json(&self) -> String {
        match self {
            HiddenParam::Tree(t) => t.to_json(),
            HiddenParam::Graph(g) => g.to_json(),
            HiddenParam::String(s) => s.to_json(),
        }
    }

    /// Recognizes the document by its distinguishing field.
    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        if value.get("root").is_some() {
            RootedTree::from_json(text).map(HiddenParam::Tree)
        } else if value.get("edges").is_some() {
            BipartiteGraph::from_json(text).map(HiddenParam::Graph)
        } else if value.get("bits").is_some() {
            HiddenString::from_json(text).map(HiddenParam::String)
        } else {
            Err(Error::Parse("not a tree, graph or string parameter".into()))
        }
    }
}

/// A family at a fixed size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    Tree { n: usize },
    Bipartite { m: usize },
    Xor { m: usize },
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Tree { .. } => "tree",
            Family::Bipartite { .. } => "bipartite",
            Family::Xor { .. } => "xor",
        }
    }

    /// The size parameter: `n` for trees, `m` otherwise.
    pub fn size(self) -> usize {
        match self {
            Family::Tree { n } => n,
            Family::Bipartite { m } | Family::Xor { m } => m,
        }
    }

    /// Number of endogenous variables.
    pub fn n(self) -> usize {
        match self {
            Family::Tree { n } => n,
            Family::Bipartite { m } => 2 * m + 1,
            Family::Xor { m } => 2 * m,
        }
    }

    /// All hidden parameters, in the enumerators' deterministic order.
    pub fn params(self, caps: &Caps) -> Result<Vec<HiddenParam>> {
        Ok(match self {
            Family::Tree { n } => enumerate_trees(n, caps)?.map(HiddenParam::Tree).collect(),
            Family::Bipartite { m } => enumerate_graphs(m, caps)?.map(HiddenParam::Graph).collect(),
            Family::Xor { m } => enumerate_strings(m).map(HiddenParam::String).collect(),
        })
    }
}

/// Gate library, noise library and indegree bound of a class `M_{n,d}(Γ, Π)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassSpec {
    pub gamma: BTreeSet<Gate>,
    pub pi: Vec<NoiseDist>,
    pub d: usize,
}

impl ClassSpec {
    pub fn new(gamma: impl IntoIterator<Item = Gate>, pi: Vec<NoiseDist>, d: usize) -> Result<Self> {
        let gamma: BTreeSet<Gate> = gamma.into_iter().collect();
        if d == 0 || gamma.is_empty() || pi.is_empty() {
            return Err(Error::BadRange("class needs d >= 1 and non-empty libraries".into()));
        }
        let mut canon: Vec<NoiseDist> = Vec::new();
        for p in pi {
            let p = p.canonical();
            if !canon.contains(&p) {
                canon.push(p);
            }
        }
        Ok(ClassSpec { gamma, pi: canon, d })
    }

    /// `Π = {δ_0, Bernoulli(1/2)}`, the noise library shared by the tree and bipartite families.
    pub fn standard_noise() -> Vec<NoiseDist> {
        vec![NoiseDist::constant(0), NoiseDist::bernoulli_half()]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Membership {
    pub member: bool,
    pub max_indegree: usize,
    pub violations: Vec<String>,
}

pub fn class_membership(scm: &Scm, spec: &ClassSpec) -> Membership {
    let mut violations = Vec::new();
    for (v, mech) in scm.mechanisms().iter().enumerate() {
        if !spec.gamma.contains(&mech.gate) {
            violations.push(format!("variable {v}: gate {} not in library", mech.gate));
        }
        if !spec.pi.contains(&mech.noise.canonical()) {
            violations.push(format!("variable {v}: noise law not in library"));
        }
        if mech.parents.len() > spec.d {
            violations.push(format!("variable {v}: {} parents exceeds d={}", mech.parents.len(), spec.d));
        }
    }
    Membership { member: violations.is_empty(), max_indegree: scm.max_indegree(), violations }
}

fn copy_of(p: usize) -> Mechanism {
    Mechanism::new(Gate::Copy, vec![p], NoiseDist::constant(0))
}

fn fair_source() -> Mechanism {
    Mechanism::new(Gate::BernSource, vec![], NoiseDist::bernoulli_half())
}

/// Root is a fair coin, every other node copies its parent.
pub fn build_tree_scm(tree: &RootedTree) -> Scm {
    let mechanisms = (0..tree.n())
        .map(|v| match tree.parent(v) {
            None => fair_source(),
            Some(p) => copy_of(p),
        })
        .collect();
    Scm::new(mechanisms).expect("tree SCMs are valid")
}

pub fn bipartite_a(i: usize) -> usize {
    1 + i
}

pub fn bipartite_b(m: usize, j: usize) -> usize {
    1 + m + j
}

/// `r` a fair coin, `a_i := r`, `b_j := AND(r, a_i for (i, j) ∈ G)`.
pub fn build_bipartite_scm(graph: &BipartiteGraph) -> Scm {
    let m = graph.m();
    let mut mechanisms = vec![fair_source()];
    mechanisms.extend((0..m).map(|_| copy_of(0)));
    for j in 0..m {
        let mut parents = vec![0];
        parents.extend((0..m).filter(|&i| graph.contains(i, j)).map(bipartite_a));
        mechanisms.push(Mechanism::new(Gate::And, parents, NoiseDist::constant(0)));
    }
    Scm::new(mechanisms).expect("bipartite SCMs are valid")
}

pub fn xor_x(t: usize) -> usize {
    2 * t
}

pub fn xor_y(t: usize) -> usize {
    2 * t + 1
}

/// `X_t` a fair coin; `Y_t` an independent fair coin when `s_t = 0`, else `X_t ⊕ U_{Y_t}`.
pub fn build_xor_scm(s: &HiddenString) -> Scm {
    let mechanisms = (0..s.m())
        .flat_map(|t| {
            let y = if s.bit(t) {
                Mechanism::new(Gate::XorNoise, vec![xor_x(t)], NoiseDist::bernoulli_half())
            } else {
                fair_source()
            };
            [fair_source(), y]
        })
        .collect();
    Scm::new(mechanisms).expect("xor SCMs are valid")
}

/// All `n^(n-1)` rooted labeled trees: every Prüfer sequence times every root.
pub fn enumerate_trees(n: usize, caps: &Caps) -> Result<impl Iterator<Item = RootedTree>> {
    if n == 0 || n > caps.tree_n {
        return Err(Error::NTooLarge { n, cap: caps.tree_n });
    }
    let len = n.saturating_sub(2);
    let sequences = (n as u64).pow(len as u32);
    Ok((0..sequences).flat_map(move |code| {
        let mut seq = vec![0; len];
        let mut rest = code;
        for slot in seq.iter_mut().rev() {
            *slot = (rest % n as u64) as usize;
            rest /= n as u64;
        }
        (0..n).map(move |root| prufer_decode(n, &seq, root).expect("every sequence decodes"))
    }))
}

/// All `2^(m²)` graphs in ascending adjacency-bitmask order.
pub fn enumerate_graphs(m: usize, caps: &Caps) -> Result<impl Iterator<Item = BipartiteGraph>> {
    if m > caps.graph_m || m * m >= 64 {
        return Err(Error::MTooLarge { m, cap: caps.graph_m });
    }
    Ok((0..1u64 << (m * m)).map(move |mask| BipartiteGraph::from_mask(m, mask)))
}

/// All `2^m` strings in ascending binary order.
pub fn enumerate_strings(m: usize) -> impl Iterator<Item = HiddenString> {
    assert!(m < 64, "string family too large to enumerate");
    (0..1u64 << m).map(move |v| HiddenString(crate::exact::BitVector::from_index(v, m).bits().to_vec()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{half, BitVector, ExactDist};
    use crate::infer::{interventional, observational};
    use crate::scm::Intervention;

    fn caps() -> Caps {
        Caps::default()
    }

    fn two_point(n: usize) -> ExactDist {
        ExactDist::new(n, [(BitVector::zeros(n), half()), (BitVector::from_bits(vec![true; n]), half())]).unwrap()
    }

    #[test]
    fn tree_scm_observations() {
        let single = build_tree_scm(&RootedTree::chain(1));
        assert_eq!(observational(&single, &caps()).unwrap(), ExactDist::uniform(1));
        let chain = build_tree_scm(&RootedTree::chain(3));
        assert_eq!(observational(&chain, &caps()).unwrap(), two_point(3));
        let star5 = observational(&build_tree_scm(&RootedTree::star(5)), &caps()).unwrap();
        let chain5 = observational(&build_tree_scm(&RootedTree::chain(5)), &caps()).unwrap();
        assert_eq!(star5, chain5);
    }

    #[test]
    fn bipartite_scm_layout() {
        let g = BipartiteGraph::new(1, []).unwrap();
        let scm = build_bipartite_scm(&g);
        assert_eq!(scm.n(), 3);
        assert_eq!(scm.topo_order(), &[0, 1, 2]);
        assert_eq!(observational(&scm, &caps()).unwrap(), two_point(3));
        let g1 = BipartiteGraph::new(1, [(0, 0)]).unwrap();
        assert_eq!(observational(&build_bipartite_scm(&g1), &caps()).unwrap(), two_point(3));
    }

    #[test]
    fn bipartite_do_reveals_edge() {
        let g = BipartiteGraph::new(2, [(0, 0)]).unwrap();
        let scm = build_bipartite_scm(&g);
        let d = interventional(&scm, &Intervention::single(bipartite_a(0), false), &caps()).unwrap();
        assert_eq!(d.marginal_prob(bipartite_b(2, 0), false), crate::exact::ratio(1, 1));
        assert_eq!(d.marginal_prob(bipartite_b(2, 1), false), half());
    }

    #[test]
    fn xor_scm_observations() {
        for s in ["0", "1"] {
            let scm = build_xor_scm(&s.parse().unwrap());
            assert_eq!(observational(&scm, &caps()).unwrap(), ExactDist::uniform(2));
        }
    }

    #[test]
    fn enumeration_counts() {
        let trees: Vec<_> = enumerate_trees(2, &caps()).unwrap().collect();
        assert_eq!(trees.len(), 2);
        assert_ne!(trees[0], trees[1]);
        assert_eq!(enumerate_trees(3, &caps()).unwrap().count(), 9);
        let five: BTreeSet<_> = enumerate_trees(5, &caps()).unwrap().collect();
        assert_eq!(five.len(), 625);
        assert!(enumerate_trees(8, &caps()).is_err());

        assert_eq!(enumerate_graphs(1, &caps()).unwrap().count(), 2);
        assert_eq!(enumerate_graphs(2, &caps()).unwrap().count(), 16);
        let masks: Vec<_> = enumerate_graphs(3, &caps()).unwrap().map(|g| g.mask()).collect();
        assert_eq!(masks, (0..512).collect::<Vec<_>>());
        assert!(enumerate_graphs(4, &caps()).is_err());

        let strings: Vec<_> = enumerate_strings(1).map(|s| s.to_string()).collect();
        assert_eq!(strings, vec!["0", "1"]);
        assert_eq!(enumerate_strings(3).count(), 8);
        assert_eq!(enumerate_strings(4).count(), 16);
    }

    #[test]
    fn mask_is_row_major() {
        let g = BipartiteGraph::new(2, [(0, 0)]).unwrap();
        assert_eq!(g.mask(), 0b1000);
        assert_eq!(BipartiteGraph::from_mask(2, 0b1000), g);
        assert_eq!(BipartiteGraph::from_mask(3, 0b1_1111_1111), BipartiteGraph::full(3));
    }

    #[test]
    fn membership() {
        let noise = ClassSpec::standard_noise();
        let tree_class = ClassSpec::new([Gate::Copy, Gate::BernSource], noise.clone(), 1).unwrap();
        let tree = build_tree_scm(&RootedTree::chain(4));
        let mem = class_membership(&tree, &tree_class);
        assert!(mem.member);
        assert_eq!(mem.max_indegree, 1);

        let full = build_bipartite_scm(&BipartiteGraph::full(2));
        let narrow = ClassSpec::new([Gate::Copy, Gate::And, Gate::BernSource], noise.clone(), 1).unwrap();
        let mem = class_membership(&full, &narrow);
        assert!(!mem.member);
        assert_eq!(mem.max_indegree, 3);

        let wide = ClassSpec::new([Gate::Copy, Gate::And, Gate::BernSource], noise, full.n() - 1).unwrap();
        assert!(class_membership(&full, &wide).member);
        assert!(!class_membership(&full, &tree_class).member);
    }

    #[test]
    fn param_json() {
        let t = RootedTree::chain(3);
        assert_eq!(t.to_json(), r#"{"n":3,"root":0,"parent":{"1":0,"2":1}}"#);
        assert_eq!(RootedTree::from_json(&t.to_json()).unwrap(), t);
        let g = BipartiteGraph::new(2, [(0, 1)]).unwrap();
        assert_eq!(g.to_json(), r#"{"m":2,"edges":[[0,1]]}"#);
        let s: HiddenString = "0101".parse().unwrap();
        assert_eq!(s.to_json(), r#"{"m":4,"bits":"0101"}"#);
        for p in [HiddenParam::Tree(t), HiddenParam::Graph(g), HiddenParam::String(s)] {
            assert_eq!(HiddenParam::from_json(&p.to_json()).unwrap(), p);
        }
        assert!(RootedTree::from_json(r#"{"n":2,"root":0,"parent":{}}"#).is_err());
    }
}
