use std::collections::BTreeSet;

use causal_ladder::decode::{graph_from_int1, string_from_cf1, tree_from_int1};
use causal_ladder::families::{enumerate_graphs, enumerate_strings, enumerate_trees, Family};
use causal_ladder::gap::{adjacency_decode, adjacency_encode, encode_param, encoder_bits};
use causal_ladder::prufer::{prufer_decode, prufer_encode};
use causal_ladder::{compute_oracle, BipartiteGraph, Caps, HiddenParam, HiddenString, OracleKind, RootedTree};

#[test]
fn prufer_is_a_bijection_up_to_seven_nodes() {
    let caps = Caps::default();
    for n in 1..=7 {
        let mut seen = BTreeSet::new();
        let mut count = 0usize;
        for t in enumerate_trees(n, &caps).unwrap() {
            let (seq, root) = prufer_encode(&t);
            assert_eq!(seq.len(), n.saturating_sub(2));
            assert_eq!(prufer_decode(n, &seq, root).unwrap(), t);
            seen.insert(t);
            count += 1;
        }
        assert_eq!(count, n.pow(n.saturating_sub(1) as u32));
        assert_eq!(seen.len(), count);
    }
}

#[test]
fn tree_decoder_on_every_tree_up_to_six() {
    let caps = Caps::default();
    for n in 1..=6 {
        for t in enumerate_trees(n, &caps).unwrap() {
            let oracle = compute_oracle(&HiddenParam::Tree(t.clone()).build_scm(), OracleKind::Int1, &caps).unwrap();
            assert_eq!(tree_from_int1(&oracle).unwrap(), t);
        }
    }
}

#[test]
fn graph_decoder_and_adjacency_code() {
    let caps = Caps::default();
    for m in 1..=2 {
        for g in enumerate_graphs(m, &caps).unwrap() {
            let bits = adjacency_encode(&g);
            assert_eq!(bits.len() as u64, encoder_bits(Family::Bipartite { m }));
            assert_eq!(adjacency_decode(m, &bits).unwrap(), g);
            let oracle = compute_oracle(&HiddenParam::Graph(g.clone()).build_scm(), OracleKind::Int1, &caps).unwrap();
            assert_eq!(graph_from_int1(&oracle).unwrap(), g);
        }
    }
}

#[test]
fn string_decoder_up_to_five_modules() {
    let caps = Caps::default();
    for m in 1..=5 {
        for s in enumerate_strings(m) {
            let oracle = compute_oracle(&HiddenParam::String(s.clone()).build_scm(), OracleKind::Cf1, &caps).unwrap();
            assert_eq!(string_from_cf1(&oracle).unwrap(), s);
        }
    }
}

#[test]
fn codewords_are_distinct_and_fit() {
    let caps = Caps::default();
    for family in [Family::Tree { n: 5 }, Family::Bipartite { m: 2 }, Family::Xor { m: 4 }] {
        let params = family.params(&caps).unwrap();
        let codes: BTreeSet<String> = params.iter().map(encode_param).collect();
        assert_eq!(codes.len(), params.len(), "{family:?}");
        assert!(codes.iter().all(|c| c.len() as u64 == encoder_bits(family)), "{family:?}");
    }
}

#[test]
fn parameter_json_round_trips() {
    let params = [
        HiddenParam::Tree(RootedTree::chain(4)),
        HiddenParam::Tree(RootedTree::new(2, vec![Some(2), Some(0), None]).unwrap()),
        HiddenParam::Graph(BipartiteGraph::from_mask(3, 0b101_010_001)),
        HiddenParam::Graph(BipartiteGraph::empty(2)),
        HiddenParam::String(HiddenString::new(vec![true, false, true, false])),
    ];
    for p in params {
        assert_eq!(HiddenParam::from_json(&p.to_json()).unwrap(), p);
    }
}

#[test]
fn caps_are_enforced() {
    let caps = Caps::default();
    assert!(enumerate_trees(8, &caps).err().is_some_and(|e| e.is_cap()));
    assert!(enumerate_graphs(4, &caps).err().is_some_and(|e| e.is_cap()));
    let tight = Caps { support: 4, ..caps };
    let xor = HiddenParam::String("101".parse().unwrap()).build_scm();
    assert!(compute_oracle(&xor, OracleKind::Obs, &tight).unwrap_err().is_cap());
    let small = Caps { int_all_n: 3, ..caps };
    assert!(compute_oracle(&xor, OracleKind::IntAll, &small).unwrap_err().is_cap());
}
