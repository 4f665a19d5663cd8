//! Graph constructors: chains of directed cliques, the 3-PARTITION
//! reduction, named families and seeded random DAGs.

mod family;
mod reduction;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{Dag, DagBuilder};

pub use family::{family, family_by_name, Family, FAMILIES};
pub use reduction::{check_chain_of_cliques, reduction_graph, ReductionLayout, ThreePartitionInstance};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeneratorError {
    #[error("chain of cliques needs at least one segment, each of positive size")]
    EmptySegment,
    #[error("invalid 3-PARTITION instance: {0}")]
    InvalidInstance(String),
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error("{family} needs a parameter of at least {min}, got {got}")]
    ParamTooSmall { family: &'static str, min: usize, got: usize },
    #[error("chain-of-cliques check failed: {0}")]
    Structure(String),
}

/// Adds a directed clique over `nodes` (listed sink first): `nodes[i] ->
/// nodes[j]` iff `i > j`.
pub(crate) fn add_clique(b: &mut DagBuilder, nodes: &[usize]) {
    for (i, &hi) in nodes.iter().enumerate() {
        for &lo in &nodes[..i] {
            b.arc(hi, lo).expect("clique nodes are distinct and in range");
        }
    }
}

/// Lays out a chain of cliques in `b`: the tip, then each segment, with
/// every segment's clique sunk into the previous segment's source. Returns
/// the node indices of each segment.
pub(crate) fn add_chain(b: &mut DagBuilder, tip: usize, segments: &[Vec<String>]) -> Vec<Vec<usize>> {
    let mut sink = tip;
    let mut out = Vec::with_capacity(segments.len());
    for labels in segments {
        let mut clique = Vec::with_capacity(labels.len() + 1);
        clique.push(sink);
        let seg: Vec<usize> = labels.iter().map(|l| b.add_node(l.clone())).collect();
        clique.extend(&seg);
        add_clique(b, &clique);
        sink = *seg.last().expect("segments are non-empty");
        out.push(seg);
    }
    out
}

/// Chain of directed cliques with tip `w0` and segments `W{i}#{j}`.
pub fn chain_of_cliques(segment_sizes: &[usize]) -> Result<Dag, GeneratorError> {
    if segment_sizes.is_empty() || segment_sizes.contains(&0) {
        return Err(GeneratorError::EmptySegment);
    }
    let mut b = DagBuilder::new();
    let tip = b.node("w0");
    let segments: Vec<Vec<String>> =
        segment_sizes.iter().enumerate().map(|(i, &s)| (0..s).map(|j| format!("W{i}#{j}")).collect()).collect();
    add_chain(&mut b, tip, &segments);
    Ok(b.build().expect("chain of cliques is acyclic"))
}

/// Random DAG on nodes `v0..v{n-1}`: a seeded uniform permutation fixes the
/// order, then each forward pair becomes an arc with probability `p`.
///
/// # Panics
/// If `p` is outside `[0, 1]`.
pub fn random_dag(n: usize, p: f64, seed: u64) -> Dag {
    assert!((0.0..=1.0).contains(&p), "arc probability {p} outside [0, 1]");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut b = DagBuilder::new();
    for v in 0..n {
        b.add_node(format!("v{v}"));
    }
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                b.arc(order[i], order[j]).expect("distinct nodes");
            }
        }
    }
    b.build().expect("arcs follow a fixed order")
}
