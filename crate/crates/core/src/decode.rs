//! Decoders from higher-rung oracles back to the hidden family parameter.
//!
//! Decoders see only the oracle. Inputs outside a family's image are
//! rejected with typed errors, never guessed at.

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{half, ExactRational};
use crate::families::{
    bipartite_a, bipartite_b, build_bipartite_scm, build_tree_scm, build_xor_scm, xor_x, xor_y, BipartiteGraph,
    HiddenString, RootedTree,
};
use crate::oracle::{compute_oracle, AnswerOracle, OracleKind};
use crate::scm::{Caps, Scm};

/// `Desc(i)`: the nodes forced to 0 by `do(X_i = 0)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DescendantSets {
    pub sets: Vec<BTreeSet<usize>>,
}

impl DescendantSets {
    pub fn n(&self) -> usize {
        self.sets.len()
    }

    /// Any two sets are nested or disjoint.
    pub fn is_laminar(&self) -> bool {
        self.sets.iter().enumerate().all(|(i, a)| {
            self.sets[i + 1..].iter().all(|b| a.is_subset(b) || b.is_subset(a) || a.is_disjoint(b))
        })
    }
}

/// The decoded parameter must reproduce the input exactly; anything else
/// was not produced by the family.
fn reproduces(oracle: &AnswerOracle, scm: &Scm) -> bool {
    let caps = Caps { support: u64::MAX, ..Caps::default() };
    compute_oracle(scm, oracle.kind(), &caps).is_ok_and(|o| o == *oracle)
}

fn expect_kind(oracle: &AnswerOracle, kind: OracleKind) -> Result<()> {
    if oracle.kind() == kind {
        Ok(())
    } else {
        Err(Error::KindMismatch { expected: kind.name(), found: oracle.kind().name() })
    }
}

/// Classifies a marginal as forced (`Some(true)`) or a fair coin (`Some(false)`).
fn dichotomy(p: &ExactRational) -> Option<bool> {
    if p.is_one() {
        Some(true)
    } else if *p == half() {
        Some(false)
    } else {
        None
    }
}

pub fn descendants_from_int1(oracle: &AnswerOracle) -> Result<DescendantSets> {
    expect_kind(oracle, OracleKind::Int1)?;
    let n = oracle.n();
    let mut sets = Vec::with_capacity(n);
    for i in 0..n {
        let dist = oracle.do_component(i, false).expect("INT1 oracles carry every do component");
        let mut desc = BTreeSet::new();
        for j in 0..n {
            let p = dist.marginal_prob(j, false);
            match dichotomy(&p) {
                Some(true) => {
                    desc.insert(j);
                }
                Some(false) => {}
                None => {
                    return Err(Error::NotTreeLike(format!("P(X_{j}=0 | do(X_{i}=0)) = {p} is neither 1 nor 1/2")))
                }
            }
        }
        sets.push(desc);
    }
    Ok(DescendantSets { sets })
}

/// Root is the node whose descendant set is everything; each other node's
/// parent is its ancestor with the smallest descendant set.
pub fn tree_from_descendants(desc: &DescendantSets) -> Result<RootedTree> {
    let n = desc.n();
    if n == 0 {
        return Err(Error::NotTreeLike("empty oracle".into()));
    }
    let roots: Vec<usize> = (0..n).filter(|&i| desc.sets[i].len() == n).collect();
    let &[root] = roots.as_slice() else {
        return Err(Error::NotTreeLike(format!("{} candidate roots", roots.len())));
    };
    let mut parent = vec![None; n];
    for v in (0..n).filter(|&v| v != root) {
        let mut best: Option<(usize, usize)> = None;
        let mut tied = false;
        for u in (0..n).filter(|&u| u != v && desc.sets[u].contains(&v)) {
            let size = desc.sets[u].len();
            match best {
                Some((_, s)) if size > s => {}
                Some((_, s)) if size == s => tied = true,
                _ => {
                    best = Some((u, size));
                    tied = false;
                }
            }
        }
        match (best, tied) {
            (None, _) => return Err(Error::NotTreeLike(format!("node {v} has no ancestor"))),
            (Some(_), true) => return Err(Error::AmbiguousParent { node: v }),
            (Some((u, _)), false) => parent[v] = Some(u),
        }
    }
    RootedTree::new(root, parent).map_err(|e| Error::NotTreeLike(e.to_string()))
}

pub fn tree_from_int1(oracle: &AnswerOracle) -> Result<RootedTree> {
    let tree = tree_from_descendants(&descendants_from_int1(oracle)?)?;
    if !reproduces(oracle, &build_tree_scm(&tree)) {
        return Err(Error::NotTreeLike("oracle differs from that of the decoded tree".into()));
    }
    Ok(tree)
}

/// `(i, j) ∈ G` iff `do(X_{a_i} = 0)` forces `X_{b_j} = 0`.
pub fn graph_from_int1(oracle: &AnswerOracle) -> Result<BipartiteGraph> {
    expect_kind(oracle, OracleKind::Int1)?;
    let n = oracle.n();
    if n.is_multiple_of(2) {
        return Err(Error::NotBipartiteLike(format!("n={n} is not 2m+1")));
    }
    let m = (n - 1) / 2;
    let mut edges = Vec::new();
    for i in 0..m {
        let dist = oracle.do_component(bipartite_a(i), false).expect("INT1 oracles carry every do component");
        for j in 0..m {
            let p = dist.marginal_prob(bipartite_b(m, j), false);
            match dichotomy(&p) {
                Some(true) => edges.push((i, j)),
                Some(false) => {}
                None => {
                    return Err(Error::NotBipartiteLike(format!(
                        "P(b_{j}=0 | do(a_{i}=0)) = {p} is neither 1 nor 1/2"
                    )))
                }
            }
        }
    }
    let graph = BipartiteGraph::new(m, edges)?;
    if !reproduces(oracle, &build_bipartite_scm(&graph)) {
        return Err(Error::NotBipartiteLike("oracle differs from that of the decoded graph".into()));
    }
    Ok(graph)
}

/// `s_t = 0` iff `Y_t` agrees across the two counterfactual worlds of `do(X_t)` almost surely.
pub fn string_from_cf1(oracle: &AnswerOracle) -> Result<HiddenString> {
    expect_kind(oracle, OracleKind::Cf1)?;
    let n = oracle.n();
    if !n.is_multiple_of(2) {
        return Err(Error::NotXorLike(format!("n={n} is odd")));
    }
    let m = n / 2;
    let mut bits = Vec::with_capacity(m);
    for t in 0..m {
        let triple = oracle.cf_component(xor_x(t)).expect("CF1 oracles carry every component");
        let y = xor_y(t);
        let agree = triple.prob_where(|x| x.get(n + y) == x.get(2 * n + y));
        if agree.is_one() {
            bits.push(false);
        } else if agree.is_zero() {
            bits.push(true);
        } else {
            return Err(Error::NotXorLike(format!("module {t}: agreement probability {agree}")));
        }
    }
    let s = HiddenString::new(bits);
    if !reproduces(oracle, &build_xor_scm(&s)) {
        return Err(Error::NotXorLike("oracle differs from that of the decoded string".into()));
    }
    Ok(s)
}
