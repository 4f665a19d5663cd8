//! Admissible lower bounds on the best completion of a partial
//! decomposition, selectable by name.

use std::fmt;

use crate::decomposition::Pld;
use crate::graph::Dag;

/// Lower bound on the width of every full decomposition extending a PLD.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    Finite(usize),
    /// No full decomposition extends the PLD.
    Infeasible,
}

impl Bound {
    pub fn finite(self) -> Option<usize> {
        match self {
            Bound::Finite(w) => Some(w),
            Bound::Infeasible => None,
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Finite(w) => write!(f, "{w}"),
            Bound::Infeasible => write!(f, "infeasible"),
        }
    }
}

pub trait LowerBound: Send + Sync {
    fn name(&self) -> &'static str;

    fn summary(&self) -> &'static str;

    fn bound(&self, g: &Dag, pld: &Pld) -> Bound;
}

/// The width of the PLD itself.
pub struct PldWidth;

impl LowerBound for PldWidth {
    fn name(&self) -> &'static str {
        "width"
    }

    fn summary(&self) -> &'static str {
        "width of the partial decomposition"
    }

    fn bound(&self, _g: &Dag, pld: &Pld) -> Bound {
        Bound::Finite(pld.width())
    }
}

/// Adds every uninserted parent of a placed node to the block it is forced
/// into. A parent of `Y ∈ S^i` must sit in block `i + 1` (a new leftmost
/// block when `i` is the last index); a parent of `Y ∈ T^i \ S^i` must sit
/// in block `i`. Two different forced blocks for one parent is a dead end.
pub struct ParentForcing;

impl LowerBound for ParentForcing {
    fn name(&self) -> &'static str {
        "parents"
    }

    fn summary(&self) -> &'static str {
        "width after adding uninserted parents to their forced blocks"
    }

    fn bound(&self, g: &Dag, pld: &Pld) -> Bound {
        let blocks = pld.blocks();
        let k = blocks.len();
        let mut extra = vec![0usize; k + 1];
        let mut forced = vec![usize::MAX; g.node_count()];
        for (i, b) in blocks.iter().enumerate() {
            for y in b.nodes.iter() {
                let target = if b.interface.contains(y) { i + 1 } else { i };
                for &x in g.parents(y) {
                    if pld.vars().contains(x) {
                        continue;
                    }
                    if forced[x] == usize::MAX {
                        forced[x] = target;
                        extra[target] += 1;
                    } else if forced[x] != target {
                        return Bound::Infeasible;
                    }
                }
            }
        }
        let widest = blocks.iter().zip(&extra).map(|(b, e)| b.nodes.len() + e).max().unwrap_or(0);
        Bound::Finite(widest.max(extra[k]))
    }
}

pub static LOWER_BOUNDS: &[&dyn LowerBound] = &[&ParentForcing, &PldWidth];

pub fn lower_bound_by_name(name: &str) -> Option<&'static dyn LowerBound> {
    LOWER_BOUNDS.iter().copied().find(|b| b.name() == name)
}

pub fn default_lower_bound() -> &'static dyn LowerBound {
    &ParentForcing
}

/// The parent-forcing bound.
pub fn lower_bound(g: &Dag, pld: &Pld) -> Bound {
    ParentForcing.bound(g, pld)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::LayerDecomposition;

    fn pld(g: &Dag, blocks: &[(&[&str], &[&str])]) -> Pld {
        Pld::new(g.node_count(), LayerDecomposition::from_labels(g, blocks).unwrap())
    }

    #[test]
    fn shared_child_pulls_parents_into_its_block() {
        let g = Dag::parse_edge_list("a e\nb e\nc e").unwrap();
        assert_eq!(lower_bound(&g, &pld(&g, &[(&["e"], &[])])), Bound::Finite(4));
        assert_eq!(PldWidth.bound(&g, &pld(&g, &[(&["e"], &[])])), Bound::Finite(1));
    }

    #[test]
    fn conflicting_forced_blocks_are_infeasible() {
        let g = Dag::parse_edge_list("X Y1\nX Y2").unwrap();
        assert_eq!(lower_bound(&g, &pld(&g, &[(&["Y1", "Y2"], &["Y1"])])), Bound::Infeasible);
    }

    #[test]
    fn parents_of_leftmost_interface_open_a_new_block() {
        let g = Dag::parse_edge_list("A B").unwrap();
        assert_eq!(lower_bound(&g, &pld(&g, &[(&["B"], &["B"])])), Bound::Finite(1));
        let g = Dag::parse_edge_list("a x\nb x\nc x").unwrap();
        assert_eq!(lower_bound(&g, &pld(&g, &[(&["x"], &["x"])])), Bound::Finite(3));
    }

    #[test]
    fn complete_pld_bound_is_its_width() {
        let g = Dag::parse_edge_list("A B\nB C").unwrap();
        let d = pld(&g, &[(&["C"], &["C"]), (&["A", "B"], &["A"])]);
        assert_eq!(lower_bound(&g, &d), Bound::Finite(2));
        assert_eq!(lower_bound(&g, &Pld::empty(3)), Bound::Finite(0));
    }

    #[test]
    fn registry_lookup() {
        assert_eq!(lower_bound_by_name("parents").unwrap().name(), "parents");
        assert_eq!(lower_bound_by_name("width").unwrap().name(), "width");
        assert!(lower_bound_by_name("nope").is_none());
    }
}
