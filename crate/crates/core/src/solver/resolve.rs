//! Resolution: commit every insertion the search never needs to branch on.

use crate::decomposition::{initial_plds, insertions, Pld};
use crate::graph::{Dag, NodeClassification};
use crate::nodeset::NodeSet;

/// Placement constraints: causes must end up in the leftmost interface,
/// effects in the rightmost block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraints {
    pub causes: NodeSet,
    pub effects: NodeSet,
}

impl Constraints {
    pub fn none(node_count: usize) -> Self {
        Constraints { causes: NodeSet::empty(node_count), effects: NodeSet::empty(node_count) }
    }

    pub fn is_empty(&self) -> bool {
        self.causes.is_empty() && self.effects.is_empty()
    }

    /// False when no extension of `d` can satisfy the constraints. Placed
    /// effects must already be in block 0 and placed causes in the current
    /// leftmost interface: blocks are only ever added at the ends, so a
    /// node that is off either end now stays off it.
    pub fn admits(&self, g: &Dag, d: &Pld) -> bool {
        if self.causes.iter().any(|c| !g.parents(c).is_empty()) {
            return false;
        }
        let blocks = d.blocks();
        let Some(leftmost) = blocks.last() else {
            return true;
        };
        let placed_causes = self.causes.intersection(d.vars());
        let placed_effects = self.effects.intersection(d.vars());
        placed_causes.is_subset(&leftmost.interface) && placed_effects.is_subset(&blocks[0].nodes)
    }
}

/// Which commitments beyond forced insertions resolution may make.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rules {
    /// Commit the first insertion of a root boundary variable. Only sound
    /// without placement constraints.
    pub roots: bool,
    /// Look ahead on chorded boundary variables and commit the one
    /// insertion that survives.
    pub chorded: bool,
}

impl Rules {
    pub const ALL: Rules = Rules { roots: true, chorded: true };
    pub const FORCED_ONLY: Rules = Rules { roots: false, chorded: false };
}

/// Nested resolution depth used when probing a chorded variable.
const LOOKAHEAD_DEPTH: usize = 1;

pub struct Resolver<'g> {
    g: &'g Dag,
    classes: NodeClassification,
    constraints: Constraints,
    rules: Rules,
}

impl<'g> Resolver<'g> {
    pub fn new(g: &'g Dag, constraints: Constraints, rules: Rules) -> Self {
        Resolver { g, classes: g.classify_nodes(), constraints, rules }
    }

    pub fn classes(&self) -> &NodeClassification {
        &self.classes
    }

    pub fn constraints(&self) -> &Constraints {
        &self.constraints
    }

    /// Insertions of `x` into `d` compatible with the constraints.
    pub fn options(&self, d: &Pld, x: usize) -> Vec<Pld> {
        let all = if d.vars().is_empty() {
            initial_plds(self.g, x)
        } else {
            insertions(self.g, d, x).expect("x is an uninserted boundary variable")
        };
        all.into_iter().filter(|o| self.constraints.admits(self.g, o)).collect()
    }

    /// Runs resolution to a fixpoint; `None` means nothing extends `d`.
    pub fn resolve(&self, d: Pld) -> Option<Pld> {
        self.resolve_to_depth(d, LOOKAHEAD_DEPTH)
    }

    fn resolve_to_depth(&self, mut d: Pld, depth: usize) -> Option<Pld> {
        if !self.constraints.admits(self.g, &d) {
            return None;
        }
        'fixpoint: loop {
            if d.vars().is_empty() {
                return Some(d);
            }
            let mut open: Vec<(usize, Vec<Pld>)> = Vec::new();
            for x in self.g.boundary_vars(d.vars()).iter() {
                let mut opts = self.options(&d, x);
                match opts.len() {
                    0 => return None,
                    1 => {
                        d = opts.pop().unwrap();
                        continue 'fixpoint;
                    }
                    _ => open.push((x, opts)),
                }
            }
            if self.rules.roots && self.constraints.is_empty() {
                if let Some((_, opts)) = open.iter_mut().find(|(x, _)| self.classes.roots.contains(*x)) {
                    d = opts.swap_remove(0);
                    continue 'fixpoint;
                }
            }
            if self.rules.chorded && depth > 0 {
                for (x, opts) in open {
                    if !self.classes.chorded.contains(x) {
                        continue;
                    }
                    let mut alive: Vec<Pld> =
                        opts.into_iter().filter_map(|o| self.resolve_to_depth(o, depth - 1)).collect();
                    match alive.len() {
                        0 => return None,
                        1 => {
                            d = alive.pop().unwrap();
                            continue 'fixpoint;
                        }
                        _ => {}
                    }
                }
            }
            return Some(d);
        }
    }
}
