//! Explicit path-prefix trees, `d`-trees, weights, projections and the
//! tree surgery behind the hierarchy results.
//!
//! This layer is exact (all weights are rationals) and meant for small
//! instances: it is the oracle against which the dynamic program in
//! [`crate::certify`] is checked.
//!
//! Tree degree convention: `deg_T(p)` counts the children of `p` plus the
//! edge to its parent, so for a non-root path `deg_T(p) - 1` is the number of
//! children. The root has no parent edge.

mod cost;
mod decompose;
mod enumerate;
mod tree;
mod weights;

pub use cost::{
    averaging_transform, best_trim_child, path_weights, project, reduce_degree, subtree_cost,
    subtree_costs, tree_cost, weight_of_path, Deviation,
};
pub use decompose::{decompose_reduced, reconstruct, Piece};
pub use enumerate::{
    count_d_trees, enumerate_d_trees, sample_d_tree, sample_subtree, DEFAULT_TREE_CAP,
};
pub use tree::{build_path_prefix_tree, path_count, PathKind, SubTree, TreeNode, DEFAULT_NODE_CAP};
pub use weights::WeightVector;
