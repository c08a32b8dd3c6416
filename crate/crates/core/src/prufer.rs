//! Prüfer codes for rooted labeled trees: the unrooted tree goes through the
//! standard smallest-leaf-first elimination and the root label is kept aside.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::families::RootedTree;

/// Returns the `n - 2` label sequence and the root. Trees with `n <= 2`
/// have an empty sequence.
pub fn prufer_encode(tree: &RootedTree) -> (Vec<usize>, usize) {
    let n = tree.n();
    if n <= 2 {
        return (Vec::new(), tree.root());
    }
    let mut adjacency = vec![Vec::new(); n];
    for (child, parent) in tree.edges() {
        adjacency[child].push(parent);
        adjacency[parent].push(child);
    }
    let mut degree: Vec<usize> = adjacency.iter().map(Vec::len).collect();
    let mut removed = vec![false; n];
    let mut leaves: BinaryHeap<Reverse<usize>> = (0..n).filter(|&v| degree[v] == 1).map(Reverse).collect();
    let mut sequence = Vec::with_capacity(n - 2);
    while sequence.len() < n - 2 {
        let Reverse(leaf) = leaves.pop().expect("a tree always has a leaf");
        removed[leaf] = true;
        let neighbor = adjacency[leaf].iter().copied().find(|&u| !removed[u]).expect("leaf has one live neighbor");
        sequence.push(neighbor);
        degree[neighbor] -= 1;
        if degree[neighbor] == 1 {
            leaves.push(Reverse(neighbor));
        }
    }
    (sequence, tree.root())
}

/// Inverse of [`prufer_encode`] for a tree on `n` labels.
pub fn prufer_decode(n: usize, sequence: &[usize], root: usize) -> Result<RootedTree> {
    if n == 0 {
        return Err(Error::InvalidSequence("n must be positive".into()));
    }
    if sequence.len() != n.saturating_sub(2) {
        return Err(Error::InvalidSequence(format!("length {} for n={n}", sequence.len())));
    }
    if root >= n {
        return Err(Error::InvalidSequence(format!("root {root} out of range")));
    }
    if let Some(bad) = sequence.iter().find(|&&v| v >= n) {
        return Err(Error::InvalidSequence(format!("label {bad} out of range")));
    }
    let mut adjacency = vec![Vec::new(); n];
    if n == 2 {
        adjacency[0].push(1);
        adjacency[1].push(0);
    } else if n > 2 {
        let mut degree = vec![1usize; n];
        for &v in sequence {
            degree[v] += 1;
        }
        let mut leaves: BinaryHeap<Reverse<usize>> = (0..n).filter(|&v| degree[v] == 1).map(Reverse).collect();
        for &v in sequence {
            let Reverse(leaf) = leaves.pop().expect("count argument guarantees a leaf");
            adjacency[leaf].push(v);
            adjacency[v].push(leaf);
            degree[v] -= 1;
            if degree[v] == 1 {
                leaves.push(Reverse(v));
            }
        }
        let Reverse(a) = leaves.pop().expect("two leaves remain");
        let Reverse(b) = leaves.pop().expect("two leaves remain");
        adjacency[a].push(b);
        adjacency[b].push(a);
    }
    // Orient away from the root.
    let mut parent = vec![None; n];
    let mut seen = vec![false; n];
    let mut stack = vec![root];
    seen[root] = true;
    while let Some(u) = stack.pop() {
        for &w in &adjacency[u] {
            if !seen[w] {
                seen[w] = true;
                parent[w] = Some(u);
                stack.push(w);
            }
        }
    }
    RootedTree::new(root, parent)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_rooted_at_end() {
        let path = RootedTree::new(0, vec![None, Some(0), Some(1)]).unwrap();
        assert_eq!(prufer_encode(&path), (vec![1], 0));
        assert_eq!(prufer_decode(3, &[1], 0).unwrap(), path);
    }

    #[test]
    fn star() {
        let star = RootedTree::new(0, vec![None, Some(0), Some(0), Some(0)]).unwrap();
        assert_eq!(prufer_encode(&star), (vec![0, 0], 0));
        assert_eq!(prufer_decode(4, &[0, 0], 0).unwrap(), star);
    }

    #[test]
    fn tiny_trees() {
        let single = RootedTree::new(0, vec![None]).unwrap();
        assert_eq!(prufer_encode(&single), (vec![], 0));
        assert_eq!(prufer_decode(1, &[], 0).unwrap(), single);
        let pair = RootedTree::new(1, vec![Some(1), None]).unwrap();
        assert_eq!(prufer_decode(2, &[], 1).unwrap(), pair);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(prufer_decode(4, &[0], 0).is_err());
        assert!(prufer_decode(4, &[0, 4], 0).is_err());
        assert!(prufer_decode(4, &[0, 0], 4).is_err());
        assert!(prufer_decode(0, &[], 0).is_err());
    }
}
