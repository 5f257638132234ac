use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{SubTree, WeightVector};
use crate::error::{Error, Result};
use crate::graph::TannerGraph;
use crate::scalar::Scalar;

/// A projected weighted subtree: a point of `[0,1]^N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Deviation {
    pub vector: Vec<BigRational>,
    /// Root variable of the generating tree, when known.
    pub root: Option<usize>,
}

impl Deviation {
    pub fn zero(n: usize) -> Self {
        Deviation {
            vector: vec![BigRational::zero(); n],
            root: None,
        }
    }

    /// `Σ_v π(v)`.
    pub fn mass(&self) -> BigRational {
        self.vector.iter().fold(BigRational::zero(), |acc, x| acc + x)
    }

    /// `⟨λ, π⟩`.
    pub fn cost<S: Scalar>(&self, llr: &[S]) -> S {
        self.vector
            .iter()
            .zip(llr)
            .fold(S::zero(), |acc, (p, l)| acc + S::from_rational(p) * l.clone())
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.vector.iter().map(f64::from_rational).collect()
    }
}

/// `w_T(p)` for every node (`None` for local-code paths, zero at the root).
pub fn path_weights(tree: &SubTree, w: &WeightVector) -> Result<Vec<Option<BigRational>>> {
    if tree.height() > 2 * w.h() {
        return Err(Error::InvalidWeights(format!(
            "tree of height {} needs at least {} weight levels, got {}",
            tree.height(),
            tree.height().div_ceil(2),
            w.h()
        )));
    }
    let scaled: Vec<BigRational> = w.normalized();
    let n = tree.len();
    // prefix[i]: product of 1/(deg_T(q) - 1) over proper non-root prefixes q.
    let mut prefix = vec![BigRational::one(); n];
    let mut out = vec![None; n];
    for i in 0..n {
        let node = tree.node(i);
        if let Some(p) = node.parent {
            prefix[i] = if p == 0 {
                BigRational::one()
            } else {
                let k = tree.children(p).len() as i64;
                &prefix[p] / BigRational::from_integer(k.into())
            };
        }
        if node.target.is_variable() {
            out[i] = Some(if i == 0 {
                BigRational::zero()
            } else {
                let level = node.depth.div_ceil(2);
                &scaled[level - 1] * &prefix[i]
                    / BigRational::from_integer((node.graph_degree as i64).into())
            });
        }
    }
    Ok(out)
}

/// `w_T(p)` for a single variable path.
pub fn weight_of_path(tree: &SubTree, p: usize, w: &WeightVector) -> Result<BigRational> {
    if !tree.node(p).target.is_variable() {
        return Err(Error::InvalidTree(format!("node {p} is a local-code path")));
    }
    Ok(path_weights(tree, w)?[p].clone().expect("variable path"))
}

/// The projection `π(v) = Σ_{t(p) = v} w_T(p)`.
pub fn project(g: &TannerGraph, tree: &SubTree, w: &WeightVector) -> Result<Deviation> {
    let weights = path_weights(tree, w)?;
    let mut dev = Deviation::zero(g.num_variables());
    dev.root = Some(tree.root_variable());
    for (node, weight) in tree.nodes().iter().zip(weights) {
        if let (crate::graph::Node::Variable(v), Some(x)) = (node.target, weight) {
            dev.vector[v] += x;
        }
    }
    Ok(dev)
}

/// `⟨λ, π(T)⟩`.
pub fn tree_cost<S: Scalar>(g: &TannerGraph, tree: &SubTree, llr: &[S], w: &WeightVector) -> Result<S> {
    Ok(project(g, tree, w)?.cost(llr))
}

fn node_terms<S: Scalar>(tree: &SubTree, llr: &[S], w: &WeightVector) -> Result<Vec<S>> {
    let weights = path_weights(tree, w)?;
    Ok(tree
        .nodes()
        .iter()
        .zip(weights)
        .map(|(node, weight)| match (node.target, weight) {
            (crate::graph::Node::Variable(v), Some(x)) => S::from_rational(&x) * llr[v].clone(),
            _ => S::zero(),
        })
        .collect())
}

/// `cost_T(T_q)` for every node `q`, by the bottom-up recursion: a variable
/// path adds its own term `λ_{t(p)} w_T(p)` to its children's costs, a
/// local-code path sums its children.
pub fn subtree_costs<S: Scalar>(tree: &SubTree, llr: &[S], w: &WeightVector) -> Result<Vec<S>> {
    let mut cost = node_terms(tree, llr, w)?;
    for i in (1..tree.len()).rev() {
        let p = tree.node(i).parent.expect("non-root");
        let c = cost[i].clone();
        cost[p] = cost[p].clone() + c;
    }
    Ok(cost)
}

pub fn subtree_cost<S: Scalar>(tree: &SubTree, q: usize, llr: &[S], w: &WeightVector) -> Result<S> {
    Ok(subtree_costs(tree, llr, w)?.swap_remove(q))
}

/// The child of `p` whose hanging subtree has maximum cost, ties to the
/// first in edge-label order. For a non-root `p`, trimming it never
/// increases `⟨λ, π(T)⟩`.
pub fn best_trim_child<S: Scalar>(tree: &SubTree, p: usize, llr: &[S], w: &WeightVector) -> Result<usize> {
    let children = tree.children(p);
    if children.len() < 2 {
        return Err(Error::InvalidTree(format!(
            "node {p} has {} children, need at least 2",
            children.len()
        )));
    }
    let costs = subtree_costs(tree, llr, w)?;
    let mut best = children[0];
    for &c in &children[1..] {
        if costs[c] > costs[best] {
            best = c;
        }
    }
    Ok(best)
}

/// Turns a `(d+1)`-tree into a `d`-tree of no larger cost by repeatedly
/// trimming the most expensive child of the first over-degree local-code
/// path.
pub fn reduce_degree<S: Scalar>(
    g: &TannerGraph,
    tree: &SubTree,
    llr: &[S],
    w: &WeightVector,
    d: usize,
) -> Result<SubTree> {
    let h = tree.height() / 2;
    tree.is_d_tree(g, h, d + 1)?;
    let mut cur = tree.clone();
    loop {
        let next = (0..cur.len())
            .find(|&i| !cur.node(i).target.is_variable() && cur.tree_degree(i) == d + 1);
        let Some(p) = next else { break };
        let q = best_trim_child(&cur, p, llr, w)?;
        cur = cur.trim(q)?;
    }
    cur.is_d_tree(g, h, d)?;
    Ok(cur)
}

/// The averaging transform used in the trimming argument:
/// `x'_i = 0` at the (first) maximum, `k/(k-1) · x_i` elsewhere. The sum
/// never increases.
pub fn averaging_transform(x: &[f64]) -> Vec<f64> {
    let k = x.len();
    if k < 2 {
        return vec![0.0; k];
    }
    let kmax = x
        .iter()
        .enumerate()
        .fold(0, |best, (i, v)| if *v > x[best] { i } else { best });
    let scale = k as f64 / (k - 1) as f64;
    x.iter()
        .enumerate()
        .map(|(i, v)| if i == kmax { 0.0 } else { scale * v })
        .collect()
}
