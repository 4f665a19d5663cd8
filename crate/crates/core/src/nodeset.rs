use std::fmt;

use fixedbitset::FixedBitSet;

/// A set of node indices of one graph, sized to that graph's node count.
///
/// All sets taking part in a binary operation must come from the same graph;
/// mixing capacities is a logic error and panics in debug builds.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeSet(FixedBitSet);

impl NodeSet {
    pub fn empty(capacity: usize) -> Self {
        NodeSet(FixedBitSet::with_capacity(capacity))
    }

    pub fn full(capacity: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(capacity);
        bits.insert_range(..);
        NodeSet(bits)
    }

    pub fn singleton(capacity: usize, node: usize) -> Self {
        let mut set = Self::empty(capacity);
        set.insert(node);
        set
    }

    pub fn from_nodes<I: IntoIterator<Item = usize>>(capacity: usize, nodes: I) -> Self {
        let mut set = Self::empty(capacity);
        for node in nodes {
            set.insert(node);
        }
        set
    }

    /// Number of node slots (the graph's node count), not the cardinality.
    pub fn capacity(&self) -> usize {
        self.0.len()
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn contains(&self, node: usize) -> bool {
        self.0.contains(node)
    }

    pub fn insert(&mut self, node: usize) {
        self.0.insert(node);
    }

    pub fn remove(&mut self, node: usize) {
        self.0.set(node, false);
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.ones()
    }

    pub fn first(&self) -> Option<usize> {
        self.0.minimum()
    }

    pub fn is_subset(&self, other: &NodeSet) -> bool {
        debug_assert_eq!(self.capacity(), other.capacity());
        self.0.is_subset(&other.0)
    }

    pub fn is_disjoint(&self, other: &NodeSet) -> bool {
        debug_assert_eq!(self.capacity(), other.capacity());
        self.0.is_disjoint(&other.0)
    }

    pub fn union_with(&mut self, other: &NodeSet) {
        debug_assert_eq!(self.capacity(), other.capacity());
        self.0.union_with(&other.0);
    }

    pub fn intersect_with(&mut self, other: &NodeSet) {
        debug_assert_eq!(self.capacity(), other.capacity());
        self.0.intersect_with(&other.0);
    }

    pub fn difference_with(&mut self, other: &NodeSet) {
        debug_assert_eq!(self.capacity(), other.capacity());
        self.0.difference_with(&other.0);
    }

    pub fn union(&self, other: &NodeSet) -> NodeSet {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    pub fn intersection(&self, other: &NodeSet) -> NodeSet {
        let mut out = self.clone();
        out.intersect_with(other);
        out
    }

    pub fn difference(&self, other: &NodeSet) -> NodeSet {
        let mut out = self.clone();
        out.difference_with(other);
        out
    }

    pub fn intersection_count(&self, other: &NodeSet) -> usize {
        self.0.intersection_count(&other.0)
    }
}

impl fmt::Debug for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_algebra() {
        let a = NodeSet::from_nodes(6, [0, 2, 4]);
        let b = NodeSet::from_nodes(6, [2, 3]);
        assert_eq!(a.union(&b).iter().collect::<Vec<_>>(), vec![0, 2, 3, 4]);
        assert_eq!(a.intersection(&b).iter().collect::<Vec<_>>(), vec![2]);
        assert_eq!(a.difference(&b).iter().collect::<Vec<_>>(), vec![0, 4]);
        assert!(!a.is_disjoint(&b));
        assert!(NodeSet::singleton(6, 2).is_subset(&a));
        assert_eq!(NodeSet::full(6).len(), 6);
        assert!(NodeSet::empty(0).is_empty());
    }
}
