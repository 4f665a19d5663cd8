//! Immutable DAG representation and the structural queries the rest of the
//! crate builds on.
//!
//! Nodes are dense indices `0..node_count` assigned at construction time;
//! labels are kept only for reading and writing files.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::fmt::Write as _;

use thiserror::Error;

use crate::nodeset::NodeSet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: expected \"<parent> <child>\", got {content:?}")]
    Syntax { line: usize, content: String },
    #[error("self-loop on {node}")]
    SelfLoop { node: String },
    #[error("duplicate arc {parent} -> {child}")]
    DuplicateArc { parent: String, child: String },
    #[error("cycle detected: back-arc {from} -> {to}")]
    CycleDetected { from: String, to: String },
    #[error("duplicate node label {0}")]
    DuplicateLabel(String),
    #[error("node index {0} out of range")]
    IndexOutOfRange(usize),
}

/// A directed acyclic graph with stable node indices and unique labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dag {
    labels: Vec<String>,
    parents: Vec<Vec<usize>>,
    children: Vec<Vec<usize>>,
    arc_count: usize,
}

/// Incremental constructor; acyclicity and arc uniqueness are checked by
/// [`DagBuilder::build`].
#[derive(Debug, Default, Clone)]
pub struct DagBuilder {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    parents: Vec<Vec<usize>>,
    children: Vec<Vec<usize>>,
}

impl DagBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the index of `label`, adding the node if it is new.
    pub fn node(&mut self, label: &str) -> usize {
        if let Some(&i) = self.index.get(label) {
            return i;
        }
        self.add_node(label.to_string())
    }

    /// Adds a node without looking up its label. Callers that generate
    /// labels know them to be unique; [`DagBuilder::build`] still checks.
    pub fn add_node(&mut self, label: String) -> usize {
        let i = self.labels.len();
        self.index.insert(label.clone(), i);
        self.labels.push(label);
        self.parents.push(Vec::new());
        self.children.push(Vec::new());
        i
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn arc(&mut self, parent: usize, child: usize) -> Result<(), GraphError> {
        let n = self.labels.len();
        if parent >= n {
            return Err(GraphError::IndexOutOfRange(parent));
        }
        if child >= n {
            return Err(GraphError::IndexOutOfRange(child));
        }
        if parent == child {
            return Err(GraphError::SelfLoop { node: self.labels[parent].clone() });
        }
        self.children[parent].push(child);
        self.parents[child].push(parent);
        Ok(())
    }

    pub fn build(mut self) -> Result<Dag, GraphError> {
        if self.index.len() != self.labels.len() {
            let mut seen = HashMap::new();
            for label in &self.labels {
                if seen.insert(label.as_str(), ()).is_some() {
                    return Err(GraphError::DuplicateLabel(label.clone()));
                }
            }
        }
        let mut arc_count = 0;
        for (p, kids) in self.children.iter_mut().enumerate() {
            kids.sort_unstable();
            if let Some(w) = kids.windows(2).find(|w| w[0] == w[1]) {
                return Err(GraphError::DuplicateArc {
                    parent: self.labels[p].clone(),
                    child: self.labels[w[0]].clone(),
                });
            }
            arc_count += kids.len();
        }
        for ps in self.parents.iter_mut() {
            ps.sort_unstable();
        }
        let dag = Dag { labels: self.labels, parents: self.parents, children: self.children, arc_count };
        if let Some((from, to)) = dag.find_back_arc() {
            return Err(GraphError::CycleDetected {
                from: dag.labels[from].clone(),
                to: dag.labels[to].clone(),
            });
        }
        Ok(dag)
    }
}

/// Partition of the nodes by how the search may treat them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeClassification {
    pub roots: NodeSet,
    /// Nodes with some strict ancestor joined by an arc to some strict descendant.
    pub chorded: NodeSet,
    pub branch: NodeSet,
}

/// Undirected graph produced by [`Dag::moralize`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoralGraph {
    adjacency: Vec<NodeSet>,
}

impl MoralGraph {
    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn neighbors(&self, v: usize) -> &NodeSet {
        &self.adjacency[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].contains(v)
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(NodeSet::len).sum::<usize>() / 2
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (u, adj) in self.adjacency.iter().enumerate() {
            out.extend(adj.iter().filter(|&v| v > u).map(|v| (u, v)));
        }
        out
    }
}

impl Dag {
    /// Builds a graph from labels and index arcs.
    pub fn from_arcs<S: AsRef<str>>(labels: &[S], arcs: &[(usize, usize)]) -> Result<Dag, GraphError> {
        let mut b = DagBuilder::new();
        for l in labels {
            b.add_node(l.as_ref().to_string());
        }
        for &(p, c) in arcs {
            b.arc(p, c)?;
        }
        b.build()
    }

    /// Parses the edge-list format: one `parent child` pair per line, lines
    /// starting with `#` are comments, and a `#nodes: a b c` line declares
    /// nodes (including isolated ones) in order.
    pub fn parse_edge_list(text: &str) -> Result<Dag, GraphError> {
        let mut b = DagBuilder::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("#nodes:") {
                for name in rest.split_whitespace() {
                    b.node(name);
                }
                continue;
            }
            if line.starts_with('#') {
                continue;
            }
            let mut tokens = line.split_whitespace();
            match (tokens.next(), tokens.next(), tokens.next()) {
                (Some(p), Some(c), None) => {
                    let (p, c) = (b.node(p), b.node(c));
                    b.arc(p, c)?;
                }
                _ => {
                    return Err(GraphError::Syntax { line: lineno + 1, content: raw.to_string() });
                }
            }
        }
        b.build()
    }

    /// Inverse of [`Dag::parse_edge_list`]; the `#nodes:` header pins the
    /// index order so that a round trip reproduces the same graph.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        if !self.labels.is_empty() {
            out.push_str("#nodes:");
            for l in &self.labels {
                out.push(' ');
                out.push_str(l);
            }
            out.push('\n');
        }
        for (p, kids) in self.children.iter().enumerate() {
            for &c in kids {
                let _ = writeln!(out, "{} {}", self.labels[p], self.labels[c]);
            }
        }
        out
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arc_count
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn parents(&self, v: usize) -> &[usize] {
        &self.parents[v]
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn has_arc(&self, parent: usize, child: usize) -> bool {
        self.children[parent].binary_search(&child).is_ok()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.parents[v].len() + self.children[v].len()
    }

    /// Arcs in (parent, child) lexicographic order.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.children.iter().enumerate().flat_map(|(p, kids)| kids.iter().map(move |&c| (p, c)))
    }

    pub fn nodes(&self) -> NodeSet {
        NodeSet::full(self.node_count())
    }

    pub fn empty_set(&self) -> NodeSet {
        NodeSet::empty(self.node_count())
    }

    /// Kahn's algorithm, always releasing the lowest ready index first.
    pub fn topological_sort(&self) -> Vec<usize> {
        let n = self.node_count();
        let mut indegree: Vec<usize> = self.parents.iter().map(Vec::len).collect();
        let mut ready: BinaryHeap<Reverse<usize>> =
            (0..n).filter(|&v| indegree[v] == 0).map(Reverse).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(Reverse(v)) = ready.pop() {
            order.push(v);
            for &c in &self.children[v] {
                indegree[c] -= 1;
                if indegree[c] == 0 {
                    ready.push(Reverse(c));
                }
            }
        }
        order
    }

    /// Nodes outside `w` with a parent or child inside `w`.
    pub fn boundary_vars(&self, w: &NodeSet) -> NodeSet {
        let mut out = self.empty_set();
        for v in w.iter() {
            for &u in self.parents[v].iter().chain(&self.children[v]) {
                if !w.contains(u) {
                    out.insert(u);
                }
            }
        }
        out
    }

    pub fn is_boundary(&self, w: &NodeSet, x: usize) -> bool {
        !w.contains(x) && self.parents[x].iter().chain(&self.children[x]).any(|&u| w.contains(u))
    }

    /// Strict ancestors of every node, indexed by node.
    pub fn ancestor_sets(&self) -> Vec<NodeSet> {
        let n = self.node_count();
        let mut anc = vec![NodeSet::empty(n); n];
        for v in self.topological_sort() {
            let mut acc = NodeSet::empty(n);
            for &p in &self.parents[v] {
                acc.insert(p);
                acc.union_with(&anc[p]);
            }
            anc[v] = acc;
        }
        anc
    }

    /// Strict descendants of every node, indexed by node.
    pub fn descendant_sets(&self) -> Vec<NodeSet> {
        let n = self.node_count();
        let mut desc = vec![NodeSet::empty(n); n];
        for v in self.topological_sort().into_iter().rev() {
            let mut acc = NodeSet::empty(n);
            for &c in &self.children[v] {
                acc.insert(c);
                acc.union_with(&desc[c]);
            }
            desc[v] = acc;
        }
        desc
    }

    pub fn classify_nodes(&self) -> NodeClassification {
        let n = self.node_count();
        let anc = self.ancestor_sets();
        let desc = self.descendant_sets();
        let mut roots = NodeSet::empty(n);
        let mut chorded = NodeSet::empty(n);
        let mut branch = NodeSet::empty(n);
        for x in 0..n {
            let has_chord = anc[x].iter().any(|p| self.children[p].iter().any(|&c| desc[x].contains(c)));
            if has_chord {
                chorded.insert(x);
            } else if self.parents[x].is_empty() {
                roots.insert(x);
            } else {
                branch.insert(x);
            }
        }
        NodeClassification { roots, chorded, branch }
    }

    /// Connects all co-parents pairwise and drops arc directions.
    pub fn moralize(&self) -> MoralGraph {
        let n = self.node_count();
        let mut adjacency = vec![NodeSet::empty(n); n];
        for (p, c) in self.arcs() {
            adjacency[p].insert(c);
            adjacency[c].insert(p);
        }
        for ps in &self.parents {
            for (i, &a) in ps.iter().enumerate() {
                for &b in &ps[i + 1..] {
                    adjacency[a].insert(b);
                    adjacency[b].insert(a);
                }
            }
        }
        MoralGraph { adjacency }
    }

    /// Weakly connected components, each sorted, ordered by smallest member.
    pub fn weak_components(&self) -> Vec<Vec<usize>> {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut stack = vec![start];
            let mut comp = Vec::new();
            while let Some(v) = stack.pop() {
                comp.push(v);
                for &u in self.parents[v].iter().chain(&self.children[v]) {
                    if !seen[u] {
                        seen[u] = true;
                        stack.push(u);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_weakly_connected(&self) -> bool {
        self.weak_components().len() <= 1
    }

    /// Induced subgraph on `nodes` (in the given order); node `i` of the
    /// result is `nodes[i]` of `self`.
    pub fn induced(&self, nodes: &[usize]) -> Dag {
        let mut local = vec![usize::MAX; self.node_count()];
        for (i, &v) in nodes.iter().enumerate() {
            local[v] = i;
        }
        let labels: Vec<String> = nodes.iter().map(|&v| self.labels[v].clone()).collect();
        let mut parents = vec![Vec::new(); nodes.len()];
        let mut children = vec![Vec::new(); nodes.len()];
        let mut arc_count = 0;
        for (i, &v) in nodes.iter().enumerate() {
            for &c in &self.children[v] {
                if local[c] != usize::MAX {
                    children[i].push(local[c]);
                    parents[local[c]].push(i);
                    arc_count += 1;
                }
            }
        }
        for list in parents.iter_mut().chain(children.iter_mut()) {
            list.sort_unstable();
        }
        Dag { labels, parents, children, arc_count }
    }

    /// Returns some arc closing a cycle, if any.
    fn find_back_arc(&self) -> Option<(usize, usize)> {
        const WHITE: u8 = 0;
        const GRAY: u8 = 1;
        const BLACK: u8 = 2;
        let n = self.node_count();
        let mut color = vec![WHITE; n];
        let mut stack: Vec<(usize, usize)> = Vec::new();
        for start in 0..n {
            if color[start] != WHITE {
                continue;
            }
            color[start] = GRAY;
            stack.push((start, 0));
            while let Some(&mut (v, ref mut next)) = stack.last_mut() {
                if let Some(&c) = self.children[v].get(*next) {
                    *next += 1;
                    match color[c] {
                        WHITE => {
                            color[c] = GRAY;
                            stack.push((c, 0));
                        }
                        GRAY => return Some((v, c)),
                        _ => {}
                    }
                } else {
                    color[v] = BLACK;
                    stack.pop();
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(g: &Dag, names: &[&str]) -> NodeSet {
        NodeSet::from_nodes(g.node_count(), names.iter().map(|n| g.index_of(n).unwrap()))
    }

    fn names(g: &Dag, s: &NodeSet) -> Vec<String> {
        s.iter().map(|v| g.label(v).to_string()).collect()
    }

    #[test]
    fn parses_chain_and_diamond() {
        let chain = Dag::parse_edge_list("A B\nB C").unwrap();
        assert_eq!(chain.labels(), ["A", "B", "C"]);
        assert_eq!(chain.arcs().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);

        let diamond = Dag::parse_edge_list("A B\nA C\nB D\nC D").unwrap();
        assert_eq!(diamond.node_count(), 4);
        assert_eq!(diamond.arc_count(), 4);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(
            Dag::parse_edge_list("A B\nB A"),
            Err(GraphError::CycleDetected { from: "B".into(), to: "A".into() })
        );
        assert!(matches!(Dag::parse_edge_list("A A"), Err(GraphError::SelfLoop { .. })));
        assert!(matches!(Dag::parse_edge_list("A B\nA B"), Err(GraphError::DuplicateArc { .. })));
        assert!(matches!(Dag::parse_edge_list("A B C"), Err(GraphError::Syntax { line: 1, .. })));
        assert!(matches!(
            Dag::parse_edge_list("A B\nB C\nC D\nD B"),
            Err(GraphError::CycleDetected { .. })
        ));
    }

    #[test]
    fn header_declares_isolated_nodes_and_comments_are_skipped() {
        let g = Dag::parse_edge_list("#nodes: X Y Z\n# a comment\nY Z\n\n").unwrap();
        assert_eq!(g.labels(), ["X", "Y", "Z"]);
        assert_eq!(g.arc_count(), 1);
        assert_eq!(Dag::parse_edge_list(&g.to_edge_list()).unwrap(), g);
        let empty = Dag::parse_edge_list("").unwrap();
        assert_eq!(empty.node_count(), 0);
    }

    #[test]
    fn labels_with_hash_inside_parse() {
        let g = Dag::parse_edge_list("P#1 P#0").unwrap();
        assert_eq!(g.labels(), ["P#1", "P#0"]);
    }

    #[test]
    fn topological_sort_tie_breaks_by_index() {
        let chain = Dag::parse_edge_list("A B\nB C").unwrap();
        assert_eq!(chain.topological_sort(), vec![0, 1, 2]);
        let diamond = Dag::parse_edge_list("A B\nA C\nB D\nC D").unwrap();
        assert_eq!(diamond.topological_sort(), vec![0, 1, 2, 3]);
        let edgeless = Dag::parse_edge_list("#nodes: a b c").unwrap();
        assert_eq!(edgeless.topological_sort(), vec![0, 1, 2]);
        let reversed = Dag::parse_edge_list("#nodes: C B A\nA B\nB C").unwrap();
        assert_eq!(reversed.topological_sort(), vec![2, 1, 0]);
    }

    #[test]
    fn boundary_of_subsets() {
        let g = Dag::parse_edge_list("A B\nB C\nC D\nA D").unwrap();
        assert_eq!(names(&g, &g.boundary_vars(&set(&g, &["B"]))), ["A", "C"]);
        assert!(g.boundary_vars(&g.empty_set()).is_empty());
        assert!(g.boundary_vars(&g.nodes()).is_empty());
        let chain = Dag::parse_edge_list("A B\nB C").unwrap();
        assert!(chain.boundary_vars(&set(&chain, &["A", "B", "C"])).is_empty());
    }

    #[test]
    fn classification_examples() {
        let g = Dag::parse_edge_list("A B\nB C\nC D\nA D").unwrap();
        let c = g.classify_nodes();
        assert_eq!(names(&g, &c.chorded), ["B", "C"]);
        assert_eq!(names(&g, &c.roots), ["A"]);
        assert_eq!(names(&g, &c.branch), ["D"]);

        let star = Dag::parse_edge_list("R L1\nR L2\nR L3").unwrap();
        let c = star.classify_nodes();
        assert_eq!(names(&star, &c.roots), ["R"]);
        assert!(c.chorded.is_empty());
        assert_eq!(names(&star, &c.branch), ["L1", "L2", "L3"]);

        let single = Dag::parse_edge_list("#nodes: X").unwrap();
        let c = single.classify_nodes();
        assert_eq!(c.roots.len(), 1);
        assert!(c.chorded.is_empty() && c.branch.is_empty());
    }

    #[test]
    fn moral_graphs() {
        let stack = Dag::parse_edge_list("a c\na d\nb c\nb d\nc X\nd X").unwrap();
        let m = stack.moralize();
        let l = |s: &str| stack.index_of(s).unwrap();
        let mut expected: Vec<(usize, usize)> = [
            ("a", "b"), ("c", "d"), ("a", "c"), ("a", "d"), ("b", "c"), ("b", "d"), ("c", "X"), ("d", "X"),
        ]
        .iter()
        .map(|&(u, v)| (l(u).min(l(v)), l(u).max(l(v))))
        .collect();
        expected.sort_unstable();
        assert_eq!(m.edges(), expected);
        for u in ["a", "b", "c", "d"] {
            for v in ["a", "b", "c", "d"] {
                assert!(u == v || m.has_edge(l(u), l(v)));
            }
        }

        let chain = Dag::parse_edge_list("A B\nB C").unwrap();
        assert_eq!(chain.moralize().edges(), vec![(0, 1), (1, 2)]);

        let diamond = Dag::parse_edge_list("A B\nA C\nB D\nC D").unwrap();
        assert_eq!(diamond.moralize().edges(), vec![(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]);
    }

    #[test]
    fn components_and_induced_subgraphs() {
        let g = Dag::parse_edge_list("#nodes: a b c d e\na b\nd c").unwrap();
        assert_eq!(g.weak_components(), vec![vec![0, 1], vec![2, 3], vec![4]]);
        let sub = g.induced(&[2, 3]);
        assert_eq!(sub.labels(), ["c", "d"]);
        assert_eq!(sub.arcs().collect::<Vec<_>>(), vec![(1, 0)]);
    }
}
