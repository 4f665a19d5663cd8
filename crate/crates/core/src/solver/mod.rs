//! Depth-first branch-and-bound over partial layer decompositions.
//!
//! The search starts from the empty PLD and repeatedly inserts a boundary
//! variable, branching on its (at most two) insertions. Each node is first
//! resolved (see [`resolve`]), then bounded with the configured
//! [`LowerBound`]; a node whose bound reaches the incumbent width is cut.
//! Every improving leaf is reported to the incumbent callback, so an
//! interrupted run still returns the best decomposition seen so far.

pub mod bound;
pub mod resolve;

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decomposition::{validate, Block, DecompositionJson, LayerDecomposition, Pld};
use crate::graph::Dag;
use crate::nodeset::NodeSet;

pub use bound::{default_lower_bound, lower_bound, lower_bound_by_name, Bound, LowerBound, LOWER_BOUNDS};
pub use resolve::{Constraints, Resolver, Rules};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("node index {0} out of range")]
    UnknownNode(usize),
    #[error("cause/effect constraints spread over several weakly connected components in a way concatenation cannot honor")]
    UnsupportedConstraints,
}

pub type IncumbentCallback<'a> = Box<dyn FnMut(usize, &LayerDecomposition) + 'a>;
pub type LeafCallback<'a> = Box<dyn FnMut(&LayerDecomposition) + 'a>;

pub struct SolveConfig<'a> {
    /// Must end up in the interface of the leftmost block.
    pub cause_vars: Vec<usize>,
    /// Must end up in the rightmost block.
    pub effect_vars: Vec<usize>,
    pub time_budget: Option<Duration>,
    /// Bound-based pruning; off turns the search into a full enumeration.
    pub prune: bool,
    /// Root and chorded commitments during resolution.
    pub structural_rules: bool,
    pub lower_bound: &'static dyn LowerBound,
    /// Called with each strictly improving incumbent.
    pub incumbent_callback: Option<IncumbentCallback<'a>>,
    /// Called on every leaf that satisfies the constraints. Only fires for
    /// weakly connected graphs.
    pub leaf_callback: Option<LeafCallback<'a>>,
}

impl Default for SolveConfig<'_> {
    fn default() -> Self {
        SolveConfig {
            cause_vars: Vec::new(),
            effect_vars: Vec::new(),
            time_budget: None,
            prune: true,
            structural_rules: true,
            lower_bound: default_lower_bound(),
            incumbent_callback: None,
            leaf_callback: None,
        }
    }
}

impl<'a> SolveConfig<'a> {
    /// Enumeration mode: no pruning, only forced commitments.
    pub fn exhaustive() -> Self {
        SolveConfig { prune: false, structural_rules: false, ..Default::default() }
    }

    pub fn rules(&self) -> Rules {
        if self.structural_rules {
            Rules::ALL
        } else {
            Rules::FORCED_ONLY
        }
    }
}

/// A node of the search tree. The path cost is always 0; only the bound
/// on the best reachable width matters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchNode {
    pub pld: Pld,
    pub h: Bound,
}

impl SearchNode {
    pub fn g(&self) -> usize {
        0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub best: Option<LayerDecomposition>,
    pub width: Option<usize>,
    /// False if the time budget ran out before the search finished.
    pub optimal: bool,
    pub nodes_expanded: u64,
    /// Expansions whose branching variable had two live insertions.
    pub branch_nodes: u64,
}

impl SolveResult {
    pub fn to_json(&self, g: &Dag) -> SolveResultJson {
        SolveResultJson {
            width: self.width,
            optimal: self.optimal,
            nodes_expanded: self.nodes_expanded,
            branch_nodes: self.branch_nodes,
            decomposition: self.best.as_ref().map(|d| d.to_json(g)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveResultJson {
    pub width: Option<usize>,
    pub optimal: bool,
    pub nodes_expanded: u64,
    pub branch_nodes: u64,
    pub decomposition: Option<DecompositionJson>,
}

pub fn solve(g: &Dag, mut cfg: SolveConfig<'_>) -> Result<SolveResult, SolveError> {
    let n = g.node_count();
    if let Some(&v) = cfg.cause_vars.iter().chain(&cfg.effect_vars).find(|&&v| v >= n) {
        return Err(SolveError::UnknownNode(v));
    }
    let deadline = cfg.time_budget.map(|b| Instant::now() + b);
    let components = g.weak_components();
    if components.len() <= 1 {
        let constraints = Constraints {
            causes: NodeSet::from_nodes(n, cfg.cause_vars.iter().copied()),
            effects: NodeSet::from_nodes(n, cfg.effect_vars.iter().copied()),
        };
        let mut search = Search::new(g, constraints, &mut cfg, deadline);
        search.run();
        return Ok(search.finish());
    }
    solve_components(g, &components, cfg, deadline)
}

/// Solves each weakly connected component on its own and lays the results
/// side by side, component 0 rightmost. A component holding effects goes
/// to the right end and one holding causes to the left end.
fn solve_components(
    g: &Dag,
    components: &[Vec<usize>],
    mut cfg: SolveConfig<'_>,
    deadline: Option<Instant>,
) -> Result<SolveResult, SolveError> {
    let n = g.node_count();
    let causes = NodeSet::from_nodes(n, cfg.cause_vars.iter().copied());
    let effects = NodeSet::from_nodes(n, cfg.effect_vars.iter().copied());
    let touches = |comp: &[usize], s: &NodeSet| comp.iter().any(|&v| s.contains(v));
    let with_effects: Vec<usize> = (0..components.len()).filter(|&i| touches(&components[i], &effects)).collect();
    let with_causes: Vec<usize> = (0..components.len()).filter(|&i| touches(&components[i], &causes)).collect();
    if with_effects.len() > 1 || with_causes.len() > 1 || (!with_effects.is_empty() && with_effects == with_causes) {
        return Err(SolveError::UnsupportedConstraints);
    }
    let mut order: Vec<usize> = Vec::with_capacity(components.len());
    order.extend(&with_effects);
    order.extend((0..components.len()).filter(|i| !with_effects.contains(i) && !with_causes.contains(i)));
    order.extend(&with_causes);

    let mut combined = LayerDecomposition::empty();
    let mut total = SolveResult { best: None, width: None, optimal: true, nodes_expanded: 0, branch_nodes: 0 };
    for &i in &order {
        let nodes = &components[i];
        let sub = g.induced(nodes);
        let local = |s: &NodeSet| {
            NodeSet::from_nodes(nodes.len(), nodes.iter().enumerate().filter(|(_, &v)| s.contains(v)).map(|(j, _)| j))
        };
        let constraints = Constraints { causes: local(&causes), effects: local(&effects) };
        let mut sub_cfg = SolveConfig {
            prune: cfg.prune,
            structural_rules: cfg.structural_rules,
            lower_bound: cfg.lower_bound,
            ..Default::default()
        };
        let mut search = Search::new(&sub, constraints, &mut sub_cfg, deadline);
        search.run();
        let part = search.finish();
        total.nodes_expanded += part.nodes_expanded;
        total.branch_nodes += part.branch_nodes;
        total.optimal &= part.optimal;
        let Some(d) = part.best else {
            total.optimal = part.optimal;
            return Ok(total);
        };
        combined = combined.concat(lift(&d, nodes, n));
    }
    total.width = Some(combined.width());
    if let Some(cb) = cfg.incumbent_callback.as_mut() {
        cb(combined.width(), &combined);
    }
    total.best = Some(combined);
    Ok(total)
}

/// Maps a decomposition of `g.induced(nodes)` back to `g`'s indices.
fn lift(d: &LayerDecomposition, nodes: &[usize], n: usize) -> LayerDecomposition {
    let map = |s: &NodeSet| NodeSet::from_nodes(n, s.iter().map(|j| nodes[j]));
    LayerDecomposition::new(d.blocks().iter().map(|b| Block::new(map(&b.nodes), map(&b.interface))).collect())
}

struct Search<'g, 'c, 'a> {
    g: &'g Dag,
    resolver: Resolver<'g>,
    cfg: &'c mut SolveConfig<'a>,
    deadline: Option<Instant>,
    best: Option<LayerDecomposition>,
    best_width: usize,
    nodes_expanded: u64,
    branch_nodes: u64,
    interrupted: bool,
}

impl<'g, 'c, 'a> Search<'g, 'c, 'a> {
    fn new(g: &'g Dag, constraints: Constraints, cfg: &'c mut SolveConfig<'a>, deadline: Option<Instant>) -> Self {
        let resolver = Resolver::new(g, constraints, cfg.rules());
        Search {
            g,
            resolver,
            cfg,
            deadline,
            best: None,
            best_width: usize::MAX,
            nodes_expanded: 0,
            branch_nodes: 0,
            interrupted: false,
        }
    }

    fn run(&mut self) {
        let n = self.g.node_count();
        if n == 0 {
            self.offer(LayerDecomposition::empty());
            return;
        }
        self.seed();
        if let Some(root) = self.resolver.resolve(Pld::empty(n)) {
            self.expand(root);
        }
    }

    fn finish(self) -> SolveResult {
        SolveResult {
            width: self.best.as_ref().map(LayerDecomposition::width),
            best: self.best,
            optimal: !self.interrupted,
            nodes_expanded: self.nodes_expanded,
            branch_nodes: self.branch_nodes,
        }
    }

    /// Starts the incumbent at the single block `((V, causes))` when that
    /// satisfies the constraints.
    fn seed(&mut self) {
        let constraints = self.resolver.constraints();
        let d = LayerDecomposition::new(vec![Block::new(self.g.nodes(), constraints.causes.clone())]);
        if validate(self.g, &d, &self.g.nodes()).is_ok() && constraints.admits(self.g, &Pld::new(self.g.node_count(), d.clone())) {
            self.offer(d);
        }
    }

    fn offer(&mut self, d: LayerDecomposition) {
        let w = d.width();
        if w < self.best_width {
            self.best_width = w;
            if let Some(cb) = self.cfg.incumbent_callback.as_mut() {
                cb(w, &d);
            }
            self.best = Some(d);
        }
    }

    fn out_of_time(&mut self) -> bool {
        if !self.interrupted {
            if let Some(deadline) = self.deadline {
                self.interrupted = Instant::now() >= deadline;
            }
        }
        self.interrupted
    }

    /// `d` is already resolved.
    fn expand(&mut self, d: Pld) {
        if self.out_of_time() {
            return;
        }
        self.nodes_expanded += 1;
        if d.vars().len() == self.g.node_count() {
            let leaf = d.into_decomposition();
            if let Some(cb) = self.cfg.leaf_callback.as_mut() {
                cb(&leaf);
            }
            self.offer(leaf);
            return;
        }
        if self.cfg.prune {
            let node = SearchNode { h: self.cfg.lower_bound.bound(self.g, &d), pld: d };
            match node.h {
                Bound::Infeasible => return,
                Bound::Finite(h) if node.g() + h >= self.best_width => return,
                Bound::Finite(_) => {}
            }
            return self.branch(node.pld);
        }
        self.branch(d);
    }

    fn branch(&mut self, d: Pld) {
        let x = self.select(&d);
        let children: Vec<Pld> =
            self.resolver.options(&d, x).into_iter().filter_map(|o| self.resolver.resolve(o)).collect();
        if children.len() == 2 {
            self.branch_nodes += 1;
        }
        for child in children {
            self.expand(child);
        }
    }

    /// Next variable to insert. The very first one comes from the branch
    /// class when there is one (highest degree, then lowest index). After
    /// that, boundary variables are ranked chorded, root, branch, then by
    /// most placed neighbours, then by index.
    fn select(&self, d: &Pld) -> usize {
        let classes = self.resolver.classes();
        let g = self.g;
        if d.vars().is_empty() {
            let pool = if classes.branch.is_empty() { g.nodes() } else { classes.branch.clone() };
            return pool.iter().max_by_key(|&v| (g.degree(v), std::cmp::Reverse(v))).expect("non-empty graph");
        }
        let class = |x: usize| {
            if classes.chorded.contains(x) {
                0
            } else if classes.roots.contains(x) {
                1
            } else {
                2
            }
        };
        let placed = |x: usize| g.parents(x).iter().chain(g.children(x)).filter(|&&u| d.vars().contains(u)).count();
        g.boundary_vars(d.vars())
            .iter()
            .min_by_key(|&x| (class(x), std::cmp::Reverse(placed(x)), x))
            .expect("connected graph has a boundary variable")
    }
}
