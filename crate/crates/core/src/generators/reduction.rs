//! The 3-PARTITION reduction: a body chain of directed cliques
//! `tip, P, B_1..B_m, H` and one tentacle per element, an arm of `m` nodes
//! hanging off `H` that ends in a directed clique (the hand) whose size is
//! `c` times the element size.
//!
//! Labels: `tip`, `P#j`, `B{i}#j`, `H#j`, `t{i},{j}`, `hand{i}#j`, with `i`
//! and the arm position `j` counted from 1 and clique positions from 0.
//! Within each clique a higher position points to a lower one.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::graph::{Dag, DagBuilder};

use super::{add_chain, add_clique, GeneratorError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreePartitionInstance {
    pub sizes: Vec<usize>,
    pub bound: usize,
}

impl ThreePartitionInstance {
    pub fn new(sizes: Vec<usize>, bound: usize) -> Result<Self, GeneratorError> {
        let inst = ThreePartitionInstance { sizes, bound };
        inst.check()?;
        Ok(inst)
    }

    pub fn from_json(text: &str) -> Result<Self, GeneratorError> {
        let inst: ThreePartitionInstance =
            serde_json::from_str(text).map_err(|e| GeneratorError::InvalidInstance(e.to_string()))?;
        inst.check()?;
        Ok(inst)
    }

    pub fn m(&self) -> usize {
        self.sizes.len() / 3
    }

    /// Checks `3m` elements, `D/4 < s < D/2` for each, and total `m·D`.
    pub fn check(&self) -> Result<(), GeneratorError> {
        let invalid = |msg: String| Err(GeneratorError::InvalidInstance(msg));
        let d = self.bound;
        if self.sizes.is_empty() || !self.sizes.len().is_multiple_of(3) {
            return invalid(format!("{} elements is not a positive multiple of 3", self.sizes.len()));
        }
        if let Some(&s) = self.sizes.iter().find(|&&s| 4 * s <= d || 2 * s >= d) {
            return invalid(format!("size {s} is not strictly between {d}/4 and {d}/2"));
        }
        let total: usize = self.sizes.iter().sum();
        if total != self.m() * d {
            return invalid(format!("sizes sum to {total}, expected {}", self.m() * d));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct ReductionLayout {
    pub dag: Dag,
    pub tip: usize,
    pub tail: Vec<usize>,
    pub spine: Vec<Vec<usize>>,
    pub head: Vec<usize>,
    /// `arms[i][j]` is `t{i+1},{j+1}`.
    pub arms: Vec<Vec<usize>>,
    pub hands: Vec<Vec<usize>>,
    pub c: usize,
    pub k: usize,
}

impl ReductionLayout {
    pub fn m(&self) -> usize {
        self.spine.len()
    }

    /// The body segments after the tip, head last.
    pub fn body_segments(&self) -> Vec<Vec<usize>> {
        let mut segs = vec![self.tail.clone()];
        segs.extend(self.spine.iter().cloned());
        segs.push(self.head.clone());
        segs
    }

    pub fn body_node_count(&self) -> usize {
        1 + self.tail.len() + self.spine.iter().map(Vec::len).sum::<usize>() + self.head.len()
    }

    pub fn tentacle_node_count(&self) -> usize {
        self.arms.iter().map(Vec::len).sum::<usize>() + self.hands.iter().map(Vec::len).sum::<usize>()
    }

    /// Role map with the constants and every role's labels.
    pub fn roles_json(&self) -> Value {
        let names = |v: &[usize]| v.iter().map(|&x| self.dag.label(x)).collect::<Vec<_>>();
        json!({
            "c": self.c,
            "k": self.k,
            "tip": self.dag.label(self.tip),
            "tail": names(&self.tail),
            "spine": self.spine.iter().map(|s| names(s)).collect::<Vec<_>>(),
            "head": names(&self.head),
            "arms": self.arms.iter().map(|a| names(a)).collect::<Vec<_>>(),
            "hands": self.hands.iter().map(|h| names(h)).collect::<Vec<_>>(),
        })
    }
}

pub fn reduction_graph(inst: &ThreePartitionInstance) -> Result<ReductionLayout, GeneratorError> {
    inst.check()?;
    let m = inst.m();
    let d = inst.bound;
    let c = 3 * m * m + 9 * m;
    let k = 2 * (6 * m - 3 + c * d) + 1;

    let mut segments: Vec<Vec<String>> = vec![(0..k).map(|j| format!("P#{j}")).collect()];
    for i in 1..=m {
        let len = k - (6 * i - 3) - c * d;
        segments.push((0..len).map(|j| format!("B{i}#{j}")).collect());
    }
    segments.push((0..k).map(|j| format!("H#{j}")).collect());

    let mut b = DagBuilder::new();
    let tip = b.node("tip");
    let mut body = add_chain(&mut b, tip, &segments).into_iter();
    let tail = body.next().unwrap();
    let spine: Vec<Vec<usize>> = body.by_ref().take(m).collect();
    let head = body.next().unwrap();

    let mut arms = Vec::with_capacity(3 * m);
    let mut hands = Vec::with_capacity(3 * m);
    for (i, &s) in inst.sizes.iter().enumerate() {
        let i = i + 1;
        let arm: Vec<usize> = (1..=m).map(|j| b.add_node(format!("t{i},{j}"))).collect();
        let hand: Vec<usize> = (0..c * s).map(|j| b.add_node(format!("hand{i}#{j}"))).collect();
        add_clique(&mut b, &hand);
        b.arc(head[0], arm[m - 1]).unwrap();
        for j in (1..m).rev() {
            b.arc(arm[j], arm[j - 1]).unwrap();
        }
        b.arc(arm[0], *hand.last().unwrap()).unwrap();
        arms.push(arm);
        hands.push(hand);
    }
    let dag = b.build().expect("reduction graph is acyclic");
    Ok(ReductionLayout { dag, tip, tail, spine, head, arms, hands, c, k })
}

/// Checks that `tip` and `segments` form a chain of directed cliques in `g`:
/// each segment plus the previous segment's source (the tip for the first)
/// is a directed clique ordered as listed, and no other arcs join body nodes.
pub fn check_chain_of_cliques(g: &Dag, tip: usize, segments: &[Vec<usize>]) -> Result<(), GeneratorError> {
    let fail = |msg: String| Err(GeneratorError::Structure(msg));
    let mut in_body = vec![false; g.node_count()];
    in_body[tip] = true;
    let mut expected_arcs = 0usize;
    let mut sink = tip;
    for (s, seg) in segments.iter().enumerate() {
        if seg.is_empty() {
            return fail(format!("segment {s} is empty"));
        }
        for &v in seg {
            if std::mem::replace(&mut in_body[v], true) {
                return fail(format!("{} appears in two segments", g.label(v)));
            }
        }
        let clique: Vec<usize> = std::iter::once(sink).chain(seg.iter().copied()).collect();
        for (i, &hi) in clique.iter().enumerate() {
            for &lo in &clique[..i] {
                if !g.has_arc(hi, lo) {
                    return fail(format!("missing arc {} -> {}", g.label(hi), g.label(lo)));
                }
            }
        }
        expected_arcs += clique.len() * (clique.len() - 1) / 2;
        sink = *seg.last().unwrap();
    }
    let body_arcs: usize =
        (0..g.node_count()).filter(|&v| in_body[v]).map(|v| g.children(v).iter().filter(|&&c| in_body[c]).count()).sum();
    if body_arcs != expected_arcs {
        return fail(format!("{body_arcs} arcs among body nodes, a minimal chain has {expected_arcs}"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instance_validation() {
        assert!(ThreePartitionInstance::new(vec![6, 6, 6, 6, 7, 8, 9, 10, 11], 23).is_ok());
        assert!(ThreePartitionInstance::new(vec![4, 6, 7], 17).is_err());
        assert!(ThreePartitionInstance::new(vec![6, 6, 6, 6], 24).is_err());
        assert!(ThreePartitionInstance::new(vec![6, 6, 6], 19).is_err());
        assert!(ThreePartitionInstance::new(vec![5, 5, 5], 16).is_err());
        let inst = ThreePartitionInstance::from_json(r#"{"sizes":[5,5,6],"bound":16}"#).unwrap();
        assert_eq!(inst.m(), 1);
        assert!(ThreePartitionInstance::from_json(r#"{"sizes":[5,5,6]}"#).is_err());
    }

    #[test]
    fn small_reduction_layout() {
        let inst = ThreePartitionInstance::new(vec![5, 5, 6], 16).unwrap();
        let r = reduction_graph(&inst).unwrap();
        assert_eq!((r.c, r.k), (12, 2 * (3 + 12 * 16) + 1));
        assert_eq!(r.spine[0].len(), r.k - 3 - 12 * 16);
        assert_eq!(r.hands.iter().map(Vec::len).collect::<Vec<_>>(), vec![60, 60, 72]);
        assert_eq!(r.dag.node_count(), r.body_node_count() + r.tentacle_node_count());
        check_chain_of_cliques(&r.dag, r.tip, &r.body_segments()).unwrap();
        let t = r.dag.index_of("t1,1").unwrap();
        assert!(r.dag.has_arc(r.head[0], t));
        assert!(r.dag.has_arc(t, r.dag.index_of("hand1#59").unwrap()));
        assert_eq!(r.roles_json()["arms"][2][0], "t3,1");
    }

    #[test]
    fn chain_check_rejects_extra_and_missing_arcs() {
        let g = Dag::parse_edge_list("b a\nc a\nc b\nd c").unwrap();
        let ix = |l: &str| g.index_of(l).unwrap();
        check_chain_of_cliques(&g, ix("a"), &[vec![ix("b"), ix("c")], vec![ix("d")]]).unwrap();
        let extra = Dag::parse_edge_list("b a\nc a\nc b\nd c\nd a").unwrap();
        let ix = |l: &str| extra.index_of(l).unwrap();
        assert!(check_chain_of_cliques(&extra, ix("a"), &[vec![ix("b"), ix("c")], vec![ix("d")]]).is_err());
        let ix = |l: &str| g.index_of(l).unwrap();
        assert!(check_chain_of_cliques(&g, ix("a"), &[vec![ix("c"), ix("b")], vec![ix("d")]]).is_err());
    }
}
