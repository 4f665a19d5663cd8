//! Layer decompositions, partial layer decompositions (PLDs) and the
//! single-variable insertions that define the search tree.
//!
//! Block index 0 is the rightmost block (it holds the sinks); the last block
//! is the leftmost one and holds the sources. A decomposition is a list of
//! `(T, S)` pairs where `T` is the block and `S ⊆ T` its interface. The five
//! conditions checked by [`validate`] are numbered D1 to D5:
//!
//! * D1: the blocks are non-empty and partition the scope.
//! * D2: every interface lies inside its block.
//! * D3: an arc joins only nodes of the same or adjacent blocks, and when it
//!   crosses from block `i + 1` to block `i` the block-`i` end is in `S^i`.
//! * D4: children of `S^i` lie in `T^i \ S^i` or `S^{i-1}` (only `T^0 \ S^0` for `i = 0`).
//! * D5: parents of `S^i` lie in `T^{i+1}`; the leftmost interface has no parents.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Dag;
use crate::nodeset::NodeSet;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Block {
    pub nodes: NodeSet,
    pub interface: NodeSet,
}

impl Block {
    pub fn new(nodes: NodeSet, interface: NodeSet) -> Self {
        Block { nodes, interface }
    }

    /// `T \ S`.
    pub fn inner(&self) -> NodeSet {
        self.nodes.difference(&self.interface)
    }
}

/// Ordered `(T, S)` pairs; `blocks[0]` is the rightmost block.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LayerDecomposition {
    blocks: Vec<Block>,
}

impl LayerDecomposition {
    pub fn new(blocks: Vec<Block>) -> Self {
        LayerDecomposition { blocks }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// The single-block decomposition `((V, ∅))`.
    pub fn trivial(g: &Dag) -> Self {
        if g.node_count() == 0 {
            return Self::empty();
        }
        LayerDecomposition { blocks: vec![Block::new(g.nodes(), g.empty_set())] }
    }

    /// Builds a decomposition from `(T, S)` label lists, rightmost first.
    pub fn from_labels(g: &Dag, blocks: &[(&[&str], &[&str])]) -> Result<Self, DecompositionError> {
        let lookup = |names: &[&str]| -> Result<NodeSet, DecompositionError> {
            let mut set = g.empty_set();
            for name in names {
                set.insert(g.index_of(name).ok_or_else(|| DecompositionError::UnknownNode(name.to_string()))?);
            }
            Ok(set)
        };
        let blocks = blocks
            .iter()
            .map(|(t, s)| Ok(Block::new(lookup(t)?, lookup(s)?)))
            .collect::<Result<Vec<_>, DecompositionError>>()?;
        Ok(LayerDecomposition { blocks })
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn into_blocks(self) -> Vec<Block> {
        self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Largest block size; 0 for the empty decomposition.
    pub fn width(&self) -> usize {
        self.blocks.iter().map(|b| b.nodes.len()).max().unwrap_or(0)
    }

    /// Index of the block holding `v`.
    pub fn block_of(&self, v: usize) -> Option<usize> {
        self.blocks.iter().position(|b| b.nodes.contains(v))
    }

    /// Intersects every block with `w` and drops blocks left empty.
    pub fn restrict(&self, w: &NodeSet) -> LayerDecomposition {
        let blocks = self
            .blocks
            .iter()
            .map(|b| Block::new(b.nodes.intersection(w), b.interface.intersection(w)))
            .filter(|b| !b.nodes.is_empty())
            .collect();
        LayerDecomposition { blocks }
    }

    /// Places `other`'s blocks to the left of this decomposition's blocks.
    pub fn concat(mut self, other: LayerDecomposition) -> LayerDecomposition {
        self.blocks.extend(other.blocks);
        self
    }

    pub fn to_json(&self, g: &Dag) -> DecompositionJson {
        let names = |s: &NodeSet| {
            let mut v: Vec<String> = s.iter().map(|i| g.label(i).to_string()).collect();
            v.sort();
            v
        };
        DecompositionJson {
            blocks: self.blocks.iter().map(|b| BlockJson { nodes: names(&b.nodes), interface: names(&b.interface) }).collect(),
            width: self.width(),
        }
    }

    pub fn from_json(g: &Dag, json: &DecompositionJson) -> Result<Self, DecompositionError> {
        let lookup = |names: &[String]| -> Result<NodeSet, DecompositionError> {
            let mut set = g.empty_set();
            for name in names {
                set.insert(g.index_of(name).ok_or_else(|| DecompositionError::UnknownNode(name.clone()))?);
            }
            Ok(set)
        };
        let blocks = json
            .blocks
            .iter()
            .map(|b| Ok(Block::new(lookup(&b.nodes)?, lookup(&b.interface)?)))
            .collect::<Result<Vec<_>, DecompositionError>>()?;
        Ok(LayerDecomposition { blocks })
    }

    /// Human-readable form like `(({B},{B}),({A},{A}))`.
    pub fn display<'a>(&'a self, g: &'a Dag) -> impl fmt::Display + 'a {
        DisplayWith { d: self, g }
    }
}

struct DisplayWith<'a> {
    d: &'a LayerDecomposition,
    g: &'a Dag,
}

impl fmt::Display for DisplayWith<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let set = |s: &NodeSet| s.iter().map(|v| self.g.label(v)).collect::<Vec<_>>().join(",");
        write!(f, "(")?;
        for (i, b) in self.d.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "({{{}}},{{{}}})", set(&b.nodes), set(&b.interface))?;
        }
        write!(f, ")")
    }
}

/// Wire form: `{"blocks":[{"T":[…],"S":[…]},…],"width":w}`, names sorted
/// within each set, array index 0 is the rightmost block.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionJson {
    pub blocks: Vec<BlockJson>,
    #[serde(default)]
    pub width: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockJson {
    #[serde(rename = "T")]
    pub nodes: Vec<String>,
    #[serde(rename = "S")]
    pub interface: Vec<String>,
}

/// A failed decomposition condition with its witnesses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    EmptyBlock { block: usize },
    Overlap { node: usize, first: usize, second: usize },
    Uncovered { node: usize },
    InterfaceOutsideBlock { block: usize, node: usize },
    Separation { parent: usize, child: usize, parent_block: usize, child_block: usize },
    ChildPlacement { block: usize, node: usize, child: usize },
    ParentPlacement { block: usize, node: usize, parent: usize },
}

impl Violation {
    pub fn condition(&self) -> &'static str {
        match self {
            Violation::EmptyBlock { .. } | Violation::Overlap { .. } | Violation::Uncovered { .. } => "D1",
            Violation::InterfaceOutsideBlock { .. } => "D2",
            Violation::Separation { .. } => "D3",
            Violation::ChildPlacement { .. } => "D4",
            Violation::ParentPlacement { .. } => "D5",
        }
    }

    pub fn nodes(&self) -> Vec<usize> {
        match *self {
            Violation::EmptyBlock { .. } => vec![],
            Violation::Overlap { node, .. } | Violation::Uncovered { node } | Violation::InterfaceOutsideBlock { node, .. } => {
                vec![node]
            }
            Violation::Separation { parent, child, .. } => vec![parent, child],
            Violation::ChildPlacement { node, child, .. } => vec![node, child],
            Violation::ParentPlacement { node, parent, .. } => vec![node, parent],
        }
    }

    pub fn describe(&self, g: &Dag) -> String {
        let l = |v: usize| g.label(v);
        match *self {
            Violation::EmptyBlock { block } => format!("D1: block {block} is empty"),
            Violation::Overlap { node, first, second } => {
                format!("D1: {} appears in blocks {first} and {second}", l(node))
            }
            Violation::Uncovered { node } => format!("D1: {} is in no block", l(node)),
            Violation::InterfaceOutsideBlock { block, node } => {
                format!("D2: {} in S^{block} but not in T^{block}", l(node))
            }
            Violation::Separation { parent, child, parent_block, child_block } => format!(
                "D3: arc {} -> {} joins T^{parent_block} and T^{child_block} across a separator",
                l(parent),
                l(child)
            ),
            Violation::ChildPlacement { block: 0, node, child } => {
                format!("D4: child {} of {}∈S^0 not in T^0∖S^0", l(child), l(node))
            }
            Violation::ChildPlacement { block, node, child } => format!(
                "D4: child {} of {}∈S^{block} not in (T^{block}∖S^{block})∪S^{}",
                l(child),
                l(node),
                block - 1
            ),
            Violation::ParentPlacement { block, node, parent } => {
                format!("D5: parent {} of {}∈S^{block} not in T^{}", l(parent), l(node), block + 1)
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecompositionError {
    #[error("node {0} lies outside the validation scope")]
    ScopeMismatch(usize),
    #[error("unknown node {0}")]
    UnknownNode(String),
    #[error("{} violated", .0.condition())]
    Violation(Violation),
    #[error("{0} is not a boundary variable of the partial decomposition")]
    NotBoundary(usize),
    #[error("{0} is already inserted")]
    AlreadyInserted(usize),
}

/// Checks D1–D5 on the subgraph induced by `scope`.
///
/// Reports the lowest-numbered failing condition.
pub fn validate(g: &Dag, d: &LayerDecomposition, scope: &NodeSet) -> Result<(), DecompositionError> {
    let n = g.node_count();
    let mut block_of = vec![usize::MAX; n];
    let mut overlap = None;
    for (i, b) in d.blocks.iter().enumerate() {
        for v in b.nodes.iter().chain(b.interface.iter()) {
            if !scope.contains(v) {
                return Err(DecompositionError::ScopeMismatch(v));
            }
        }
        for v in b.nodes.iter() {
            if block_of[v] == usize::MAX {
                block_of[v] = i;
            } else if overlap.is_none() {
                overlap = Some(Violation::Overlap { node: v, first: block_of[v], second: i });
            }
        }
    }
    let fail = |v: Violation| Err(DecompositionError::Violation(v));

    // D1
    if let Some(i) = d.blocks.iter().position(|b| b.nodes.is_empty()) {
        return fail(Violation::EmptyBlock { block: i });
    }
    if let Some(v) = overlap {
        return fail(v);
    }
    if let Some(v) = scope.iter().find(|&v| block_of[v] == usize::MAX) {
        return fail(Violation::Uncovered { node: v });
    }
    // D2
    for (i, b) in d.blocks.iter().enumerate() {
        if let Some(v) = b.interface.iter().find(|&v| !b.nodes.contains(v)) {
            return fail(Violation::InterfaceOutsideBlock { block: i, node: v });
        }
    }
    // D3
    for p in scope.iter() {
        for &c in g.children(p) {
            if !scope.contains(c) {
                continue;
            }
            let (bp, bc) = (block_of[p], block_of[c]);
            let separated = match bp.abs_diff(bc) {
                0 => false,
                1 => {
                    let (low, low_block) = if bp < bc { (p, bp) } else { (c, bc) };
                    !d.blocks[low_block].interface.contains(low)
                }
                _ => true,
            };
            if separated {
                return fail(Violation::Separation { parent: p, child: c, parent_block: bp, child_block: bc });
            }
        }
    }
    // D4
    for (i, b) in d.blocks.iter().enumerate() {
        for s in b.interface.iter() {
            for &c in g.children(s) {
                if !scope.contains(c) {
                    continue;
                }
                let ok = (block_of[c] == i && !b.interface.contains(c))
                    || (i > 0 && d.blocks[i - 1].interface.contains(c));
                if !ok {
                    return fail(Violation::ChildPlacement { block: i, node: s, child: c });
                }
            }
        }
    }
    // D5
    let k = d.blocks.len().saturating_sub(1);
    for (i, b) in d.blocks.iter().enumerate() {
        for s in b.interface.iter() {
            for &p in g.parents(s) {
                if scope.contains(p) && (i == k || block_of[p] != i + 1) {
                    return fail(Violation::ParentPlacement { block: i, node: s, parent: p });
                }
            }
        }
    }
    Ok(())
}

/// A layer decomposition of the subgraph induced by `vars`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pld {
    decomposition: LayerDecomposition,
    vars: NodeSet,
}

impl Pld {
    pub fn empty(node_count: usize) -> Self {
        Pld { decomposition: LayerDecomposition::empty(), vars: NodeSet::empty(node_count) }
    }

    /// Wraps `d`, taking `Vars(d)` as the union of its blocks. Does not validate.
    pub fn new(node_count: usize, d: LayerDecomposition) -> Self {
        let mut vars = NodeSet::empty(node_count);
        for b in &d.blocks {
            vars.union_with(&b.nodes);
        }
        Pld { decomposition: d, vars }
    }

    pub fn decomposition(&self) -> &LayerDecomposition {
        &self.decomposition
    }

    pub fn into_decomposition(self) -> LayerDecomposition {
        self.decomposition
    }

    pub fn vars(&self) -> &NodeSet {
        &self.vars
    }

    pub fn blocks(&self) -> &[Block] {
        &self.decomposition.blocks
    }

    pub fn width(&self) -> usize {
        self.decomposition.width()
    }

    pub fn validate(&self, g: &Dag) -> Result<(), DecompositionError> {
        validate(g, &self.decomposition, &self.vars)
    }

    /// True when `outer` restricted to `Vars(self)` is exactly this PLD,
    /// i.e. `outer` keeps every placed node in the same relative block and
    /// the same interface status.
    pub fn extends_to(&self, outer: &LayerDecomposition) -> bool {
        outer.restrict(&self.vars) == self.decomposition
    }
}

/// Containment at a single block offset: `T_inner^i ⊆ T_outer^{i+m}` and
/// `S_inner^i ⊆ S_outer^{i+m}` for some `m ≥ 0`.
pub fn is_sub_pld(inner: &Pld, outer: &Pld) -> bool {
    if !inner.vars.is_subset(&outer.vars) {
        return false;
    }
    let (ib, ob) = (inner.blocks(), outer.blocks());
    if ib.is_empty() {
        return true;
    }
    if ib.len() > ob.len() {
        return false;
    }
    (0..=ob.len() - ib.len()).any(|m| {
        ib.iter()
            .zip(&ob[m..])
            .all(|(a, b)| a.nodes.is_subset(&b.nodes) && a.interface.is_subset(&b.interface))
    })
}

/// The two single-variable PLDs: `(({x},{x}))` then `(({x},∅))`.
pub fn initial_plds(g: &Dag, x: usize) -> Vec<Pld> {
    let n = g.node_count();
    let one = NodeSet::singleton(n, x);
    [one.clone(), NodeSet::empty(n)]
        .into_iter()
        .map(|s| Pld::new(n, LayerDecomposition::new(vec![Block::new(one.clone(), s)])))
        .collect()
}

/// Every way of placing `x` into `d` without disturbing the placed nodes,
/// in a fixed order: into `T^j \ S^j` for each block, into `S^j` for each
/// block, as a new leftmost block, and as a new rightmost block (each new
/// block first with interface `{x}`, then with an empty one, as in
/// [`initial_plds`]). Candidates failing [`validate`] are dropped; for a
/// boundary variable at most two survive.
pub fn insertions(g: &Dag, d: &Pld, x: usize) -> Result<Vec<Pld>, DecompositionError> {
    if d.vars.contains(x) {
        return Err(DecompositionError::AlreadyInserted(x));
    }
    if d.vars.is_empty() {
        return Ok(initial_plds(g, x));
    }
    if !g.is_boundary(&d.vars, x) {
        return Err(DecompositionError::NotBoundary(x));
    }
    let mut out: Vec<Pld> = Vec::with_capacity(2);
    for candidate in candidates(g, d, x) {
        if candidate.validate(g).is_ok() && !out.contains(&candidate) {
            out.push(candidate);
        }
    }
    Ok(out)
}

fn candidates<'a>(g: &'a Dag, d: &'a Pld, x: usize) -> impl Iterator<Item = Pld> + 'a {
    let n = g.node_count();
    let k = d.blocks().len();
    let mut vars = d.vars.clone();
    vars.insert(x);
    let with = move |blocks: Vec<Block>| Pld { decomposition: LayerDecomposition::new(blocks), vars: vars.clone() };
    let single = NodeSet::singleton(n, x);
    let fresh = [single.clone(), NodeSet::empty(n)];

    let into_inner = (0..k).map(move |j| {
        let mut blocks = d.blocks().to_vec();
        blocks[j].nodes.insert(x);
        blocks
    });
    let into_interface = (0..k).map(move |j| {
        let mut blocks = d.blocks().to_vec();
        blocks[j].nodes.insert(x);
        blocks[j].interface.insert(x);
        blocks
    });
    let left = fresh.clone().into_iter().map({
        let single = single.clone();
        move |s| {
            let mut blocks = d.blocks().to_vec();
            blocks.push(Block::new(single.clone(), s));
            blocks
        }
    });
    let right = fresh.into_iter().map(move |s| {
        let mut blocks = Vec::with_capacity(k + 1);
        blocks.push(Block::new(single.clone(), s));
        blocks.extend_from_slice(d.blocks());
        blocks
    });
    into_inner.chain(into_interface).chain(left).chain(right).map(with)
}
