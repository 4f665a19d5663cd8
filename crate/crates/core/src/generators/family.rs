//! Named graph families with one size parameter.

use crate::graph::{Dag, DagBuilder};

use super::GeneratorError;

pub trait Family: Send + Sync {
    fn name(&self) -> &'static str;

    fn min_param(&self) -> usize;

    fn summary(&self) -> &'static str;

    /// Builds the member for `param`, which is at least [`Family::min_param`].
    fn build(&self, param: usize) -> Dag;
}

pub struct Star;
pub struct ChordChain;
pub struct BipartiteStack;
pub struct Bipartite;

impl Family for Star {
    fn name(&self) -> &'static str {
        "star"
    }
    fn min_param(&self) -> usize {
        2
    }
    fn summary(&self) -> &'static str {
        "root r with children c1..c{n-1}"
    }
    fn build(&self, n: usize) -> Dag {
        let mut b = DagBuilder::new();
        let root = b.node("r");
        for i in 1..n {
            let c = b.add_node(format!("c{i}"));
            b.arc(root, c).unwrap();
        }
        b.build().unwrap()
    }
}

impl Family for ChordChain {
    fn name(&self) -> &'static str {
        "chord_chain"
    }
    fn min_param(&self) -> usize {
        3
    }
    fn summary(&self) -> &'static str {
        "path v1 -> .. -> vn plus the arc v1 -> vn"
    }
    fn build(&self, n: usize) -> Dag {
        let mut b = DagBuilder::new();
        let path: Vec<usize> = (1..=n).map(|i| b.add_node(format!("v{i}"))).collect();
        for w in path.windows(2) {
            b.arc(w[0], w[1]).unwrap();
        }
        b.arc(path[0], path[n - 1]).unwrap();
        b.build().unwrap()
    }
}

fn complete_bipartite(b: &mut DagBuilder, w: usize) -> Vec<usize> {
    let upper: Vec<usize> = (1..=w).map(|i| b.add_node(format!("a{i}"))).collect();
    let lower: Vec<usize> = (1..=w).map(|i| b.add_node(format!("b{i}"))).collect();
    for &u in &upper {
        for &l in &lower {
            b.arc(u, l).unwrap();
        }
    }
    lower
}

impl Family for BipartiteStack {
    fn name(&self) -> &'static str {
        "bipartite_stack"
    }
    fn min_param(&self) -> usize {
        1
    }
    fn summary(&self) -> &'static str {
        "a1..aw all point to b1..bw, which all point to X"
    }
    fn build(&self, w: usize) -> Dag {
        let mut b = DagBuilder::new();
        let lower = complete_bipartite(&mut b, w);
        let x = b.node("X");
        for l in lower {
            b.arc(l, x).unwrap();
        }
        b.build().unwrap()
    }
}

impl Family for Bipartite {
    fn name(&self) -> &'static str {
        "bipartite"
    }
    fn min_param(&self) -> usize {
        1
    }
    fn summary(&self) -> &'static str {
        "a1..aw all point to b1..bw"
    }
    fn build(&self, w: usize) -> Dag {
        let mut b = DagBuilder::new();
        complete_bipartite(&mut b, w);
        b.build().unwrap()
    }
}

pub static FAMILIES: &[&dyn Family] = &[&Star, &ChordChain, &BipartiteStack, &Bipartite];

pub fn family_by_name(name: &str) -> Option<&'static dyn Family> {
    FAMILIES.iter().copied().find(|f| f.name() == name)
}

pub fn family(name: &str, param: usize) -> Result<Dag, GeneratorError> {
    let f = family_by_name(name).ok_or_else(|| GeneratorError::UnknownFamily(name.to_string()))?;
    if param < f.min_param() {
        return Err(GeneratorError::ParamTooSmall { family: f.name(), min: f.min_param(), got: param });
    }
    Ok(f.build(param))
}
