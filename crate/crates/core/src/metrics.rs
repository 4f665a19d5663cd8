//! Treewidth through elimination orders of the moral graph, bandwidth
//! through topological orders, and the orders induced by a layer
//! decomposition. Exact computations are capped at desk-scale sizes; the
//! estimator registry adds greedy upper bounds for anything larger.

use thiserror::Error;

use crate::decomposition::LayerDecomposition;
use crate::graph::Dag;
use crate::nodeset::NodeSet;

pub const TREEWIDTH_CAP: usize = 9;
pub const BANDWIDTH_CAP: usize = 10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MetricsError {
    #[error("order is not a permutation of the nodes")]
    NotPermutation,
    #[error("order is not topological: {child} precedes its parent {parent}")]
    NotTopological { parent: usize, child: usize },
    #[error("graph has {nodes} nodes, exact computation is capped at {cap}")]
    TooLarge { nodes: usize, cap: usize },
}

fn check_permutation(n: usize, order: &[usize]) -> Result<Vec<usize>, MetricsError> {
    if order.len() != n {
        return Err(MetricsError::NotPermutation);
    }
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        if v >= n || pos[v] != usize::MAX {
            return Err(MetricsError::NotPermutation);
        }
        pos[v] = i;
    }
    Ok(pos)
}

/// Largest neighbourhood met while eliminating the moral graph in `order`.
pub fn elimination_width(g: &Dag, order: &[usize]) -> Result<usize, MetricsError> {
    let n = g.node_count();
    check_permutation(n, order)?;
    let moral = g.moralize();
    let mut adj: Vec<NodeSet> = (0..n).map(|v| moral.neighbors(v).clone()).collect();
    let mut width = 0;
    for &v in order {
        let nbrs = adj[v].clone();
        width = width.max(nbrs.len());
        for u in nbrs.iter() {
            adj[u].union_with(&nbrs);
            adj[u].remove(u);
            adj[u].remove(v);
        }
        adj[v] = NodeSet::empty(n);
    }
    Ok(width)
}

/// Exact treewidth by dynamic programming over eliminated sets.
///
/// For an eliminated set `S` and next vertex `v`, the neighbourhood of `v`
/// at elimination time is the set of uneliminated vertices reachable from
/// `v` through `S`, so the optimum over all orders is a minimum over
/// subsets rather than permutations.
pub fn treewidth_small(g: &Dag, cap: usize) -> Result<usize, MetricsError> {
    let n = g.node_count();
    if n > cap || n > 24 {
        return Err(MetricsError::TooLarge { nodes: n, cap: cap.min(24) });
    }
    if n == 0 {
        return Ok(0);
    }
    let moral = g.moralize();
    let nbr: Vec<u32> = (0..n).map(|v| moral.neighbors(v).iter().fold(0u32, |m, u| m | 1 << u)).collect();
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let q = |s: u32, v: usize| -> u32 {
        // vertices outside s ∪ {v} reachable from v through s
        let mut seen = 1u32 << v;
        let mut frontier = 1u32 << v;
        let mut out = 0u32;
        while frontier != 0 {
            let u = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let reach = nbr[u] & !seen;
            seen |= reach;
            out |= reach & !s;
            frontier |= reach & s;
        }
        out.count_ones()
    };
    let mut tw = vec![u32::MAX; 1usize << n];
    tw[0] = 0;
    for s in 1..=full {
        let mut best = u32::MAX;
        let mut bits = s;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let rest = s & !(1 << v);
            best = best.min(tw[rest as usize].max(q(rest, v)));
        }
        tw[s as usize] = best;
    }
    Ok(tw[full as usize] as usize)
}

/// Greedy min-fill elimination; an upper bound on treewidth.
pub fn min_fill_width(g: &Dag) -> usize {
    let n = g.node_count();
    let moral = g.moralize();
    let mut adj: Vec<NodeSet> = (0..n).map(|v| moral.neighbors(v).clone()).collect();
    let mut alive = NodeSet::full(n);
    let mut width = 0;
    while let Some(v) = alive.iter().min_by_key(|&v| {
        let nb: Vec<usize> = adj[v].iter().collect();
        let fill: usize = nb.iter().enumerate().map(|(i, &a)| nb[i + 1..].iter().filter(|&&b| !adj[a].contains(b)).count()).sum();
        (fill, nb.len(), v)
    }) {
        let nbrs = adj[v].clone();
        width = width.max(nbrs.len());
        for u in nbrs.iter() {
            adj[u].union_with(&nbrs);
            adj[u].remove(u);
            adj[u].remove(v);
        }
        adj[v] = NodeSet::empty(n);
        alive.remove(v);
    }
    width
}

/// Blocks `T^0, T^1, …, T^k` in turn, each in index order.
pub fn elimination_order_from_ld(d: &LayerDecomposition) -> Vec<usize> {
    d.blocks().iter().flat_map(|b| b.nodes.iter()).collect()
}

/// Largest parent-to-child distance in a topological order.
pub fn topo_order_width(g: &Dag, order: &[usize]) -> Result<usize, MetricsError> {
    let pos = check_permutation(g.node_count(), order)?;
    let mut width = 0;
    for (p, c) in g.arcs() {
        if pos[c] < pos[p] {
            return Err(MetricsError::NotTopological { parent: p, child: c });
        }
        width = width.max(pos[c] - pos[p]);
    }
    Ok(width)
}

/// Exact bandwidth by backtracking over topological orders.
pub fn bandwidth_small(g: &Dag, cap: usize) -> Result<usize, MetricsError> {
    let n = g.node_count();
    if n > cap {
        return Err(MetricsError::TooLarge { nodes: n, cap });
    }
    let start = g.topological_sort();
    let mut best = topo_order_width(g, &start)?;
    if best <= 1 {
        return Ok(best);
    }
    let mut state = BandwidthSearch {
        g,
        pos: vec![usize::MAX; n],
        missing_parents: (0..n).map(|v| g.parents(v).len()).collect(),
        unplaced_children: (0..n).map(|v| g.children(v).len()).collect(),
        placed: Vec::with_capacity(n),
    };
    state.extend(&mut best);
    Ok(best)
}

struct BandwidthSearch<'g> {
    g: &'g Dag,
    pos: Vec<usize>,
    missing_parents: Vec<usize>,
    unplaced_children: Vec<usize>,
    placed: Vec<usize>,
}

impl BandwidthSearch<'_> {
    /// Looks for orders of width strictly below `best`, lowering it.
    fn extend(&mut self, best: &mut usize) {
        let n = self.g.node_count();
        let p = self.placed.len();
        if p == n {
            let w = self.g.arcs().map(|(a, b)| self.pos[b] - self.pos[a]).max().unwrap_or(0);
            *best = (*best).min(w);
            return;
        }
        // Every placed node with an unplaced child will be stretched to at least p.
        if self.placed.iter().any(|&u| self.unplaced_children[u] > 0 && p - self.pos[u] >= *best) {
            return;
        }
        for v in 0..n {
            if self.pos[v] != usize::MAX || self.missing_parents[v] > 0 {
                continue;
            }
            self.pos[v] = p;
            self.placed.push(v);
            for &c in self.g.children(v) {
                self.missing_parents[c] -= 1;
            }
            for &u in self.g.parents(v) {
                self.unplaced_children[u] -= 1;
            }
            self.extend(best);
            for &u in self.g.parents(v) {
                self.unplaced_children[u] += 1;
            }
            for &c in self.g.children(v) {
                self.missing_parents[c] += 1;
            }
            self.placed.pop();
            self.pos[v] = usize::MAX;
        }
    }
}

/// Blocks `T^k, …, T^0` in turn, each in topological order.
pub fn topo_order_from_ld(g: &Dag, d: &LayerDecomposition) -> Vec<usize> {
    let topo = g.topological_sort();
    d.blocks().iter().rev().flat_map(|b| topo.iter().copied().filter(|&v| b.nodes.contains(v))).collect()
}

/// A width measure selectable by name.
pub trait WidthEstimator: Send + Sync {
    fn name(&self) -> &'static str;

    /// True when the value is the metric itself rather than an upper bound.
    fn exact(&self) -> bool;

    /// `hint` is a layer decomposition of `g`, used by estimators that
    /// derive an order from one.
    fn estimate(&self, g: &Dag, hint: Option<&LayerDecomposition>) -> Result<usize, MetricsError>;
}

pub struct ExactTreewidth;
pub struct MinFillTreewidth;
pub struct ExactBandwidth;
pub struct BlockOrderBandwidth;

impl WidthEstimator for ExactTreewidth {
    fn name(&self) -> &'static str {
        "treewidth"
    }
    fn exact(&self) -> bool {
        true
    }
    fn estimate(&self, g: &Dag, _: Option<&LayerDecomposition>) -> Result<usize, MetricsError> {
        treewidth_small(g, TREEWIDTH_CAP)
    }
}

impl WidthEstimator for MinFillTreewidth {
    fn name(&self) -> &'static str {
        "treewidth-min-fill"
    }
    fn exact(&self) -> bool {
        false
    }
    fn estimate(&self, g: &Dag, _: Option<&LayerDecomposition>) -> Result<usize, MetricsError> {
        Ok(min_fill_width(g))
    }
}

impl WidthEstimator for ExactBandwidth {
    fn name(&self) -> &'static str {
        "bandwidth"
    }
    fn exact(&self) -> bool {
        true
    }
    fn estimate(&self, g: &Dag, _: Option<&LayerDecomposition>) -> Result<usize, MetricsError> {
        bandwidth_small(g, BANDWIDTH_CAP)
    }
}

impl WidthEstimator for BlockOrderBandwidth {
    fn name(&self) -> &'static str {
        "bandwidth-block-order"
    }
    fn exact(&self) -> bool {
        false
    }
    fn estimate(&self, g: &Dag, hint: Option<&LayerDecomposition>) -> Result<usize, MetricsError> {
        let order = match hint {
            Some(d) => topo_order_from_ld(g, d),
            None => g.topological_sort(),
        };
        topo_order_width(g, &order)
    }
}

pub static ESTIMATORS: &[&dyn WidthEstimator] = &[&ExactTreewidth, &MinFillTreewidth, &ExactBandwidth, &BlockOrderBandwidth];

pub fn estimator_by_name(name: &str) -> Option<&'static dyn WidthEstimator> {
    ESTIMATORS.iter().copied().find(|e| e.name() == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(text: &str) -> Dag {
        Dag::parse_edge_list(text).unwrap()
    }

    fn idx(g: &Dag, names: &[&str]) -> Vec<usize> {
        names.iter().map(|n| g.index_of(n).unwrap()).collect()
    }

    const STACK2: &str = "a c\na d\nb c\nb d\nc X\nd X";
    const BIPARTITE2: &str = "a c\na d\nb c\nb d";

    #[test]
    fn elimination_examples() {
        let chain = g("A B\nB C");
        assert_eq!(elimination_width(&chain, &idx(&chain, &["A", "C", "B"])), Ok(1));
        let stack = g(STACK2);
        assert_eq!(elimination_width(&stack, &idx(&stack, &["X", "a", "b", "c", "d"])), Ok(3));
        let single = g("#nodes: v");
        assert_eq!(elimination_width(&single, &[0]), Ok(0));
        assert_eq!(elimination_width(&chain, &[0, 0, 1]), Err(MetricsError::NotPermutation));
        assert_eq!(elimination_width(&chain, &[0, 1]), Err(MetricsError::NotPermutation));
    }

    #[test]
    fn treewidth_examples() {
        assert_eq!(treewidth_small(&g("A B\nB C"), TREEWIDTH_CAP), Ok(1));
        assert_eq!(treewidth_small(&g("A B\nB C\nC D\nA D"), TREEWIDTH_CAP), Ok(2));
        assert_eq!(treewidth_small(&g(STACK2), TREEWIDTH_CAP), Ok(3));
        assert_eq!(treewidth_small(&g("#nodes: a b"), TREEWIDTH_CAP), Ok(0));
        assert!(matches!(treewidth_small(&g(STACK2), 4), Err(MetricsError::TooLarge { nodes: 5, cap: 4 })));
    }

    #[test]
    fn orders_from_decompositions() {
        let stack = g(STACK2);
        let d = LayerDecomposition::from_labels(&stack, &[(&["X"], &["X"]), (&["c", "d"], &["c", "d"]), (&["a", "b"], &["a", "b"])])
            .unwrap();
        let elim = elimination_order_from_ld(&d);
        assert_eq!(elim, idx(&stack, &["X", "c", "d", "a", "b"]));
        assert!(elimination_width(&stack, &elim).unwrap() <= 3);
        let topo = topo_order_from_ld(&stack, &d);
        assert_eq!(topo, idx(&stack, &["a", "b", "c", "d", "X"]));
        assert_eq!(topo_order_width(&stack, &topo), Ok(3));

        let chain = g("A B");
        let d = LayerDecomposition::from_labels(&chain, &[(&["B"], &["B"]), (&["A"], &["A"])]).unwrap();
        assert_eq!(elimination_order_from_ld(&d), vec![1, 0]);
        assert_eq!(elimination_width(&chain, &[1, 0]), Ok(1));
        assert_eq!(topo_order_from_ld(&chain, &d), vec![0, 1]);

        let diamond = g("#nodes: D C B A\nA B\nA C\nB D\nC D");
        let trivial = LayerDecomposition::trivial(&diamond);
        assert_eq!(elimination_order_from_ld(&trivial), vec![0, 1, 2, 3]);
        assert_eq!(topo_order_from_ld(&diamond, &trivial), diamond.topological_sort());
    }

    #[test]
    fn bandwidth_examples() {
        let bip = g(BIPARTITE2);
        assert_eq!(topo_order_width(&bip, &idx(&bip, &["a", "b", "c", "d"])), Ok(3));
        assert_eq!(bandwidth_small(&bip, BANDWIDTH_CAP), Ok(3));
        let chain = g("A B\nB C");
        assert_eq!(topo_order_width(&chain, &[0, 1, 2]), Ok(1));
        assert_eq!(bandwidth_small(&chain, BANDWIDTH_CAP), Ok(1));
        assert_eq!(bandwidth_small(&g("#nodes: a b c"), BANDWIDTH_CAP), Ok(0));
        assert_eq!(bandwidth_small(&g("A B\nB C\nC D\nA D"), BANDWIDTH_CAP), Ok(3));
        assert_eq!(topo_order_width(&chain, &[1, 0, 2]), Err(MetricsError::NotTopological { parent: 0, child: 1 }));
    }

    #[test]
    fn estimator_registry() {
        let stack = g(STACK2);
        assert_eq!(estimator_by_name("treewidth").unwrap().estimate(&stack, None), Ok(3));
        let fill = estimator_by_name("treewidth-min-fill").unwrap();
        assert!(!fill.exact());
        assert!(fill.estimate(&stack, None).unwrap() >= 3);
        assert_eq!(estimator_by_name("bandwidth").unwrap().estimate(&stack, None), Ok(3));
        assert!(estimator_by_name("bandwidth-block-order").unwrap().estimate(&stack, None).unwrap() >= 3);
        assert!(estimator_by_name("pathwidth").is_none());
    }
}
