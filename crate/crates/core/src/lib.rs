//! Layer decompositions of directed acyclic graphs.
//!
//! [`solver::solve`] computes the layerwidth exactly by branch and bound
//! over partial decompositions, [`decomposition::validate`] checks a
//! decomposition, and [`oracle`] enumerates every decomposition of a small
//! graph by brute force. [`metrics`] relates layerwidth to treewidth and
//! bandwidth; [`generators`] builds graph families, random DAGs and the
//! 3-PARTITION reduction graphs.

pub mod decomposition;
pub mod generators;
pub mod graph;
pub mod metrics;
pub mod nodeset;
pub mod oracle;
pub mod solver;
