use kisin::components::{
    alternating, count_polynomial, factor_components, format_polynomial, graph_connected, intersection_graph,
    intersection_graph_from_indices, maximal_exprimable_sets, maximal_exprimable_sets_brute, maximal_exprimables,
    maximal_patterns, synthetic_chain, synthetic_loop, NodeState,
};
use kisin::field::P1;
use kisin::variety::{factor_points, FactorVariety, Orientation};
use kisin::Error;
use proptest::prelude::*;
use std::collections::BTreeSet;

const L: u64 = 5;

fn orient(mask: u32, n: usize) -> Vec<Orientation> {
    (0..n).map(|k| if mask >> k & 1 == 1 { Orientation::Up } else { Orientation::Down }).collect()
}

fn member(pat: &[NodeState], pt: &[P1]) -> bool {
    pat.iter().zip(pt).all(|(s, x)| match s {
        NodeState::Free => true,
        NodeState::Pinned(p) => p.to_p1(L) == *x,
    })
}

/// Components cover every point, and none is contained in another.
fn check_cover(fv: &FactorVariety, pats: &[Vec<NodeState>]) {
    let pts = factor_points(fv, L);
    for pt in &pts {
        assert!(pats.iter().any(|p| member(p, pt)), "uncovered point {pt:?}");
    }
    let sets: Vec<BTreeSet<Vec<P1>>> =
        pats.iter().map(|p| pts.iter().filter(|x| member(p, x)).cloned().collect()).collect();
    for (i, a) in sets.iter().enumerate() {
        assert!(!a.is_empty());
        for (j, b) in sets.iter().enumerate() {
            if i != j {
                assert!(!a.is_subset(b), "component {i} inside {j}");
            }
        }
    }
}

#[test]
fn exprimable_patterns_agree_with_pin_patterns() {
    for len in 1..=8 {
        for mask in 0..(1u32 << (len - 1)) {
            let fv = synthetic_chain(&orient(mask, len - 1));
            assert_eq!(factor_components(&fv).unwrap(), maximal_patterns(&fv), "len {len} mask {mask}");
        }
    }
}

#[test]
fn chain_components_cover_points() {
    for len in 1..=5 {
        for mask in 0..(1u32 << (len - 1)) {
            let fv = synthetic_chain(&orient(mask, len - 1));
            check_cover(&fv, &factor_components(&fv).unwrap());
        }
    }
}

#[test]
fn loop_components_cover_points() {
    for len in 2..=5 {
        for mask in 0..(1u32 << (len - 1)) {
            for closing in [(0, 0), (1, 1), (0, 1), (1, 0)] {
                let fv = synthetic_loop(&orient(mask, len - 1), closing);
                let pats = factor_components(&fv).unwrap();
                check_cover(&fv, &pats);
                // untwisted loops can fall apart (y0 z1 = y1 z0 = 0 is two points)
                if fv.twisted == Some(true) {
                    let edges = intersection_graph(&pats);
                    assert!(graph_connected(pats.len(), &edges), "len {len} mask {mask} closing {closing:?}");
                }
            }
        }
    }
}

#[test]
fn loops_are_not_chains() {
    let fv = synthetic_loop(&alternating(3), (0, 0));
    assert!(matches!(maximal_exprimables(&fv), Err(Error::NotAChain(_))));
}

#[test]
fn chain_intersection_graphs_are_connected() {
    for len in 1..=9 {
        for mask in 0..(1u32 << (len - 1)) {
            let fv = synthetic_chain(&orient(mask, len - 1));
            let ch = fv.slope_changes();
            let sets = maximal_exprimables(&fv).unwrap();
            let by_index = intersection_graph_from_indices(len, &ch, &sets);
            let pats: Vec<_> = sets.iter().map(|s| kisin::components::pattern_of_exprimable(&fv, s).unwrap()).collect();
            assert_eq!(by_index, intersection_graph(&pats), "len {len} mask {mask}");
            assert!(graph_connected(sets.len(), &by_index));
        }
    }
}

#[test]
fn twenty_node_polynomial() {
    assert_eq!(format_polynomial(&count_polynomial(20)), "11X^10 + 120X^9 + 126X^8 + 8X^7");
    let total: u64 = count_polynomial(20).iter().map(|c| u64::try_from(c).unwrap()).sum();
    assert_eq!(total, 265);
}

proptest! {
    #[test]
    fn dp_matches_brute(len in 1usize..=14, mask in any::<u32>()) {
        let fv = synthetic_chain(&orient(mask, len - 1));
        let ch = fv.slope_changes();
        prop_assert_eq!(maximal_exprimable_sets(len, &ch), maximal_exprimable_sets_brute(len, &ch));
    }
}
