//! Brute-force enumeration of every layer decomposition of a small graph.
//!
//! This is the ground truth the search is tested against, so it deliberately
//! shares nothing with insertion, resolution or bounding: it walks every
//! ordered partition of the nodes and every choice of interfaces, and keeps
//! what [`validate`] accepts.

use thiserror::Error;

use crate::decomposition::{validate, Block, LayerDecomposition};
use crate::graph::Dag;
use crate::nodeset::NodeSet;

pub const DEFAULT_CAP: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("graph has {nodes} nodes, enumeration cap is {cap}")]
    TooLarge { nodes: usize, cap: usize },
}

/// Calls `visit` on every valid decomposition, rightmost block first, block
/// contents and interfaces in increasing subset rank.
pub fn for_each_decomposition<F>(g: &Dag, max_nodes: usize, mut visit: F) -> Result<(), OracleError>
where
    F: FnMut(&LayerDecomposition),
{
    let n = g.node_count();
    if n > max_nodes || n > 20 {
        return Err(OracleError::TooLarge { nodes: n, cap: max_nodes.min(20) });
    }
    if n == 0 {
        visit(&LayerDecomposition::empty());
        return Ok(());
    }
    let mut neighbors = vec![0u32; n];
    for (p, c) in g.arcs() {
        neighbors[p] |= 1 << c;
        neighbors[c] |= 1 << p;
    }
    let all = g.nodes();
    let mut blocks = Vec::new();
    ordered_partitions(&neighbors, (1u32 << n) - 1, &mut blocks, &mut |partition| {
        let mut interfaces = vec![0u32; partition.len()];
        choose_interfaces(partition, 0, &mut interfaces, &mut |interfaces| {
            let d = LayerDecomposition::new(
                partition
                    .iter()
                    .zip(interfaces)
                    .map(|(&t, &s)| Block::new(mask_to_set(n, t), mask_to_set(n, s)))
                    .collect(),
            );
            if validate(g, &d, &all).is_ok() {
                visit(&d);
            }
        });
    });
    Ok(())
}

pub fn enumerate_decompositions(g: &Dag, max_nodes: usize) -> Result<Vec<LayerDecomposition>, OracleError> {
    let mut out = Vec::new();
    for_each_decomposition(g, max_nodes, |d| out.push(d.clone()))?;
    Ok(out)
}

/// Minimum width over all decompositions; 0 for the empty graph.
pub fn oracle_layerwidth(g: &Dag) -> Result<usize, OracleError> {
    let mut best = usize::MAX;
    for_each_decomposition(g, DEFAULT_CAP, |d| best = best.min(d.width()))?;
    Ok(if g.node_count() == 0 { 0 } else { best })
}

/// One decomposition JSON object per line.
pub fn to_json_lines(g: &Dag, decompositions: &[LayerDecomposition]) -> String {
    let mut out = String::new();
    for d in decompositions {
        out.push_str(&serde_json::to_string(&d.to_json(g)).expect("decomposition JSON serializes"));
        out.push('\n');
    }
    out
}

fn mask_to_set(n: usize, mask: u32) -> NodeSet {
    NodeSet::from_nodes(n, (0..n).filter(|&v| mask & (1 << v) != 0))
}

/// Ordered partitions of `remaining` into non-empty blocks. A block is only
/// accepted if no arc reaches it from a block two or more positions to its
/// right; that is implied by D3 whatever the interfaces are.
fn ordered_partitions(neighbors: &[u32], remaining: u32, blocks: &mut Vec<u32>, emit: &mut dyn FnMut(&[u32])) {
    if remaining == 0 {
        emit(blocks);
        return;
    }
    let far: u32 = blocks.iter().rev().skip(1).fold(0, |acc, &b| acc | b);
    // Submasks of `remaining` in increasing numeric order.
    let mut t: u32 = 0;
    loop {
        t = t.wrapping_sub(remaining) & remaining;
        if t == 0 {
            break;
        }
        let reach = (0..neighbors.len()).filter(|&v| t & (1 << v) != 0).fold(0, |acc, v| acc | neighbors[v]);
        if reach & far == 0 {
            blocks.push(t);
            ordered_partitions(neighbors, remaining & !t, blocks, emit);
            blocks.pop();
        }
    }
}

fn choose_interfaces(partition: &[u32], i: usize, chosen: &mut Vec<u32>, emit: &mut dyn FnMut(&[u32])) {
    if i == partition.len() {
        emit(chosen);
        return;
    }
    let t = partition[i];
    // All submasks of t including the empty one, increasing.
    let mut s: u32 = 0;
    loop {
        chosen[i] = s;
        choose_interfaces(partition, i + 1, chosen, emit);
        if s == t {
            break;
        }
        s = s.wrapping_sub(t) & t;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_of_two_has_four_decompositions() {
        let g = Dag::parse_edge_list("A B").unwrap();
        let all = enumerate_decompositions(&g, DEFAULT_CAP).unwrap();
        let expected: Vec<LayerDecomposition> = [
            vec![(&["A", "B"][..], &[][..])],
            vec![(&["A", "B"][..], &["A"][..])],
            vec![(&["B"][..], &["B"][..]), (&["A"][..], &["A"][..])],
            vec![(&["B"][..], &["B"][..]), (&["A"][..], &[][..])],
        ]
        .iter()
        .map(|blocks| LayerDecomposition::from_labels(&g, blocks).unwrap())
        .collect();
        let mut got = all.clone();
        got.sort();
        let mut want = expected;
        want.sort();
        assert_eq!(got, want);
        assert_eq!(oracle_layerwidth(&g).unwrap(), 1);
    }

    #[test]
    fn small_cases() {
        let single = Dag::parse_edge_list("#nodes: X").unwrap();
        assert_eq!(enumerate_decompositions(&single, DEFAULT_CAP).unwrap().len(), 2);
        let empty = Dag::parse_edge_list("").unwrap();
        assert_eq!(enumerate_decompositions(&empty, DEFAULT_CAP).unwrap(), vec![LayerDecomposition::empty()]);
        assert_eq!(oracle_layerwidth(&empty).unwrap(), 0);
    }

    #[test]
    fn extremal_families() {
        let star = Dag::parse_edge_list("R L1\nR L2\nR L3").unwrap();
        assert_eq!(oracle_layerwidth(&star).unwrap(), 2);
        let chord = Dag::parse_edge_list("A B\nB C\nC D\nA D").unwrap();
        assert_eq!(oracle_layerwidth(&chord).unwrap(), 3);
    }

    #[test]
    fn cap_is_enforced() {
        let g = Dag::parse_edge_list("#nodes: a b c d").unwrap();
        assert_eq!(enumerate_decompositions(&g, 3), Err(OracleError::TooLarge { nodes: 4, cap: 3 }));
    }

    #[test]
    fn enumeration_is_deterministic_and_distinct() {
        let g = Dag::parse_edge_list("a b\na c\nb d\nc d").unwrap();
        let first = enumerate_decompositions(&g, DEFAULT_CAP).unwrap();
        assert_eq!(first, enumerate_decompositions(&g, DEFAULT_CAP).unwrap());
        let mut dedup = first.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), first.len());
        assert!(to_json_lines(&g, &first).lines().count() == first.len());
    }
}
