//! Splitting a reduced `d`-tree of height `2kh` into reduced `d`-trees of
//! height `2h`.
//!
//! The pieces are rooted at the variable paths whose depth is a multiple of
//! `2h` (excluding the leaves); the leaves of one piece are the roots of the
//! next. With `w̄` the k-legal extension of `w` by `α`, every variable path of
//! depth `2(mh + s)` in piece `j` (rooted at `p_j`, depth `2mh`) satisfies
//!
//! ```text
//! w̄_T(p) = c_j · w_{T_j}(p),
//! c_j = (α_{m+1} / ‖α‖₁) · Π_{1 <= |q| <= |p_j|, q prefix of p_j} 1/(deg_T(q) - 1)
//! ```
//!
//! so `π_{T,w̄} = Σ_j c_j π_{T_j,w}`. The level factor alone is not enough:
//! normalizing by `‖w̄‖₁` introduces `1/‖α‖₁`, and the tree-degree factors
//! accumulated above `p_j` carry over.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{project, Deviation, SubTree, WeightVector};
use crate::error::{Error, Result};
use crate::graph::TannerGraph;

#[derive(Clone, Debug)]
pub struct Piece {
    pub tree: SubTree,
    /// `m`: the piece root sits at depth `2mh` (0-based, indexes `α_{m+1}`).
    pub level: usize,
    /// Id of the piece root in the original tree.
    pub origin: usize,
    pub coefficient: BigRational,
}

pub fn decompose_reduced(
    g: &TannerGraph,
    tree: &SubTree,
    h: usize,
    k: usize,
    d: usize,
    alpha: &[BigRational],
) -> Result<Vec<Piece>> {
    if h == 0 || k == 0 {
        return Err(Error::Precondition("decomposition needs h >= 1 and k >= 1".into()));
    }
    if alpha.len() != k || alpha.iter().any(|a| !a.is_positive()) {
        return Err(Error::InvalidWeights(format!(
            "need {k} positive extension factors, got {}",
            alpha.len()
        )));
    }
    // Checks the nominal height 2kh; branches through degree-1 variables
    // may end earlier.
    tree.is_reduced_d_tree(g, k * h, d)?;
    let alpha_norm = alpha.iter().fold(BigRational::zero(), |acc, a| acc + a);
    // factor[i]: product of 1/(deg_T(q) - 1) over non-root prefixes of i,
    // including i itself.
    let mut factor = vec![BigRational::one(); tree.len()];
    for i in 1..tree.len() {
        let p = tree.node(i).parent.expect("non-root");
        let own = tree.children(i).len();
        let mut f = factor[p].clone();
        if own > 0 {
            f /= BigRational::from_integer((own as i64).into());
        }
        factor[i] = f;
    }
    let span = 2 * h;
    let mut pieces = Vec::new();
    for (i, node) in tree.nodes().iter().enumerate() {
        if node.depth % span != 0 || node.depth == 2 * k * h || !node.target.is_variable() {
            continue;
        }
        let level = node.depth / span;
        let piece = tree.extract(i, span)?;
        piece.is_reduced_d_tree(g, h, d)?;
        pieces.push(Piece {
            tree: piece,
            level,
            origin: i,
            coefficient: &alpha[level] / &alpha_norm * &factor[i],
        });
    }
    Ok(pieces)
}

/// `Σ_j c_j π_{T_j, w}`.
pub fn reconstruct(g: &TannerGraph, pieces: &[Piece], w: &WeightVector) -> Result<Deviation> {
    let mut out = Deviation::zero(g.num_variables());
    for piece in pieces {
        let dev = project(g, &piece.tree, w)?;
        for (acc, x) in out.vector.iter_mut().zip(dev.vector) {
            *acc += &piece.coefficient * x;
        }
    }
    Ok(out)
}
