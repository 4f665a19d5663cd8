//! Test corpora and a from-scratch decomposition checker shared by the
//! integration tests.
#![allow(dead_code)]

use layerwidth::generators::random_dag;
use layerwidth::graph::Dag;

/// Every weakly connected labelled DAG on `n` nodes.
pub fn connected_dags(n: usize) -> Vec<Dag> {
    let labels: Vec<String> = (0..n).map(|i| format!("n{i}")).collect();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b))).collect();
    let mut out = Vec::new();
    for mask in 0u32..(1 << pairs.len()) {
        let arcs: Vec<(usize, usize)> = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p).collect();
        if let Ok(g) = Dag::from_arcs(&labels, &arcs) {
            if g.is_weakly_connected() {
                out.push(g);
            }
        }
    }
    out
}

/// Every weakly connected labelled DAG on 1 to 4 nodes.
pub fn small_corpus() -> Vec<Dag> {
    (1..=4).flat_map(connected_dags).collect()
}

/// `count` weakly connected seeded random DAGs whose sizes cycle through
/// `sizes`, with arc probabilities between 0.3 and 0.7.
pub fn random_connected(count: usize, sizes: &[usize], seed: u64) -> Vec<Dag> {
    let mut out = Vec::with_capacity(count);
    let mut s = seed;
    while out.len() < count {
        let n = sizes[out.len() % sizes.len()];
        let p = 0.3 + 0.1 * (s % 5) as f64;
        let g = random_dag(n, p, s);
        s += 1;
        if g.is_weakly_connected() {
            out.push(g);
        }
    }
    out
}

/// Direct reading of the five conditions on a list of `(block, interface)`
/// node lists, block 0 rightmost.
pub fn naive_is_decomposition(g: &Dag, blocks: &[(Vec<usize>, Vec<usize>)]) -> bool {
    let n = g.node_count();
    let mut home = vec![None; n];
    for (i, (t, s)) in blocks.iter().enumerate() {
        if t.is_empty() {
            return false;
        }
        for &v in t {
            if home[v].is_some() {
                return false;
            }
            home[v] = Some(i);
        }
        if s.iter().any(|v| !t.contains(v)) {
            return false;
        }
    }
    if home.iter().any(Option::is_none) {
        return false;
    }
    let in_s = |v: usize| blocks[home[v].unwrap()].1.contains(&v);
    for p in 0..n {
        for &c in g.children(p) {
            let (bp, bc) = (home[p].unwrap(), home[c].unwrap());
            if bp.abs_diff(bc) > 1 {
                return false;
            }
            if bp != bc {
                let right = if bp < bc { p } else { c };
                if !in_s(right) {
                    return false;
                }
            }
            if in_s(p) {
                let i = bp;
                let ok = (bc == i && !in_s(c)) || (i > 0 && bc == i - 1 && in_s(c));
                if !ok {
                    return false;
                }
            }
            if in_s(c) && bp != bc + 1 {
                return false;
            }
        }
    }
    true
}
