//! Minimum deviation cost by dynamic programming over the computation tree.
//!
//! Pulling the prefix factors of the path weights out of each subtree, the
//! cost of the subtree hanging at a variable path that enters `v` over edge
//! `e = (C, v)` at depth `2ℓ` is `P(p) · V_ℓ[e]` with
//!
//! ```text
//! V_ℓ[e] = λ_v c_ℓ / deg v + 1/(deg v - 1) · Σ_{e' at v, e' != e} K_{ℓ+1}[e']   (ℓ < h)
//! V_h[e] = λ_v c_h / deg v
//! K_ℓ[e] = 1/(d - 1) · (sum of the d - 1 smallest V_ℓ over the other edges of C)
//! ```
//!
//! where `c_ℓ = w_ℓ / ‖w‖₁`. The root `r` costs `Σ_{e at r} K_1[e]`; a
//! reduced tree drops its most expensive root branch. Every choice is local,
//! so the recursion yields the exact minimum over all trees. Ties are broken
//! by edge-label order.

use super::MinCost;
use crate::devtree::{SubTree, WeightVector};
use crate::error::{Error, Result};
use crate::graph::TannerGraph;
use crate::scalar::Scalar;

pub(crate) fn check_inputs<S>(g: &TannerGraph, llr: &[S], d: usize) -> Result<()> {
    if llr.len() != g.num_variables() {
        return Err(Error::LengthMismatch {
            expected: g.num_variables(),
            actual: llr.len(),
        });
    }
    if d < 2 {
        return Err(Error::InvalidDegree {
            d,
            reason: "d must be at least 2".into(),
        });
    }
    if d > g.min_check_degree() {
        return Err(Error::InvalidDegree {
            d,
            reason: format!(
                "d exceeds the minimum check degree {}, so some roots have no d-tree",
                g.min_check_degree()
            ),
        });
    }
    Ok(())
}

/// For every edge `e = (C, v)`: the sum of the `d - 1` smallest `vals` over
/// the other edges of `C`, ties to the lower label. `order` is scratch space.
pub(crate) fn select_sums<S: Scalar>(g: &TannerGraph, d: usize, vals: &[S], out: &mut [S]) {
    let mut order: Vec<usize> = Vec::new();
    for j in 0..g.num_checks() {
        let edges = g.check_edges(j);
        if d == 2 {
            // Smallest and second smallest, first occurrence on ties.
            let (mut a, mut b) = (0usize, usize::MAX);
            for i in 1..edges.len() {
                if vals[edges[i]] < vals[edges[a]] {
                    b = a;
                    a = i;
                } else if b == usize::MAX || vals[edges[i]] < vals[edges[b]] {
                    b = i;
                }
            }
            for (i, &e) in edges.iter().enumerate() {
                out[e] = vals[edges[if i == a { b } else { a }]].clone();
            }
            continue;
        }
        order.clear();
        order.extend(0..edges.len());
        order.sort_by(|&x, &y| {
            vals[edges[x]]
                .partial_cmp(&vals[edges[y]])
                .expect("finite costs")
        });
        for (i, &e) in edges.iter().enumerate() {
            out[e] = order
                .iter()
                .filter(|&&k| k != i)
                .take(d - 1)
                .fold(S::zero(), |acc, &k| acc + vals[edges[k]].clone());
        }
    }
}

/// The `d - 1` children chosen under edge `e`, in label order.
pub(crate) fn selected_children<S: Scalar>(g: &TannerGraph, d: usize, vals: &[S], e: usize) -> Vec<usize> {
    let edges = g.check_edges(g.edge(e).check);
    let mut others: Vec<usize> = edges.iter().copied().filter(|&f| f != e).collect();
    others.sort_by(|&x, &y| vals[x].partial_cmp(&vals[y]).expect("finite costs"));
    let mut chosen: Vec<usize> = others.into_iter().take(d - 1).collect();
    chosen.sort_unstable();
    chosen
}

/// Index (into `branches`) of the first maximum.
pub(crate) fn first_max<S: PartialOrd>(branches: &[S]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, b) in branches.iter().enumerate() {
        if best.is_none_or(|k| *b > branches[k]) {
            best = Some(i);
        }
    }
    best
}

/// Sum of `branches`, skipping the first maximum when `reduced`.
pub(crate) fn root_sum<S: Scalar>(branches: &[S], reduced: bool) -> S {
    let skip = if reduced { first_max(branches) } else { None };
    branches
        .iter()
        .enumerate()
        .filter(|&(i, _)| Some(i) != skip)
        .fold(S::zero(), |acc, (_, b)| acc + b.clone())
}

/// The filled table: `V_ℓ` for every level, and the per-root costs.
#[derive(Clone, Debug)]
pub struct DpTable<S> {
    h: usize,
    d: usize,
    reduced: bool,
    /// `values[ℓ - 1][e] = V_ℓ[e]`.
    values: Vec<Vec<S>>,
    root_costs: Vec<S>,
}

impl<S: Scalar> DpTable<S> {
    pub fn build(g: &TannerGraph, llr: &[S], w: &WeightVector, d: usize, reduced: bool) -> Result<Self> {
        check_inputs(g, llr, d)?;
        let h = w.h();
        let ne = g.num_edges();
        let c: Vec<S> = w.normalized();
        let inv_d1 = S::recip_usize(d - 1);
        let own = |e: usize, level: usize| {
            let v = g.edge(e).variable;
            llr[v].clone() * c[level - 1].clone() * S::recip_usize(g.variable_degree(v))
        };
        let mut values: Vec<Vec<S>> = vec![Vec::new(); h];
        values[h - 1] = (0..ne).map(|e| own(e, h)).collect();
        let mut k = vec![S::zero(); ne];
        for level in (1..h).rev() {
            select_sums(g, d, &values[level], &mut k);
            k.iter_mut().for_each(|x| *x = x.clone() * inv_d1.clone());
            let mut next = Vec::with_capacity(ne);
            for e in 0..ne {
                let v = g.edge(e).variable;
                let deg = g.variable_degree(v);
                let mut x = own(e, level);
                if deg > 1 {
                    let below = g
                        .variable_edges(v)
                        .iter()
                        .filter(|&&f| f != e)
                        .fold(S::zero(), |acc, &f| acc + k[f].clone());
                    x = x + below * S::recip_usize(deg - 1);
                }
                next.push(x);
            }
            values[level - 1] = next;
        }
        select_sums(g, d, &values[0], &mut k);
        k.iter_mut().for_each(|x| *x = x.clone() * inv_d1.clone());
        let root_costs = (0..g.num_variables())
            .map(|r| {
                let branches: Vec<S> = g.variable_edges(r).iter().map(|&e| k[e].clone()).collect();
                root_sum(&branches, reduced)
            })
            .collect();
        Ok(DpTable {
            h,
            d,
            reduced,
            values,
            root_costs,
        })
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn reduced(&self) -> bool {
        self.reduced
    }

    /// Minimum cost over trees rooted at `r`.
    pub fn root_cost(&self, r: usize) -> &S {
        &self.root_costs[r]
    }

    pub fn root_costs(&self) -> &[S] {
        &self.root_costs
    }

    /// `V_ℓ[e]`.
    pub fn value(&self, level: usize, e: usize) -> &S {
        &self.values[level - 1][e]
    }

    /// Global minimum; the witness root is the lowest-index minimizer.
    pub fn min_cost(&self) -> MinCost<S> {
        let mut best = 0;
        for (r, c) in self.root_costs.iter().enumerate() {
            if *c < self.root_costs[best] {
                best = r;
            }
        }
        MinCost {
            min_cost: self.root_costs[best].clone(),
            witness_root: best,
        }
    }

    /// Rebuilds a minimizing tree rooted at `r` by following the DP
    /// choices. Fails if the tree would exceed `node_cap` nodes.
    pub fn extract_witness(&self, g: &TannerGraph, r: usize, node_cap: usize) -> Result<SubTree> {
        let d = self.d;
        let mut tree = SubTree::singleton(g, r);
        let root_edges = g.variable_edges(r);
        let mut k = vec![S::zero(); g.num_edges()];
        select_sums(g, d, &self.values[0], &mut k);
        let branches: Vec<S> = root_edges.iter().map(|&e| k[e].clone()).collect();
        let skip = if self.reduced { first_max(&branches) } else { None };
        // Frontier of (tree node, edge it was entered by, level of its children).
        let mut frontier: Vec<(usize, usize, usize)> = root_edges
            .iter()
            .enumerate()
            .filter(|&(i, _)| Some(i) != skip)
            .map(|(_, &e)| (tree.push_child(g, 0, e), e, 1))
            .collect();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for (node, e, level) in frontier {
                for f in selected_children(g, d, &self.values[level - 1], e) {
                    let vnode = tree.push_child(g, node, f);
                    if level < self.h {
                        let v = g.edge(f).variable;
                        for &f2 in g.variable_edges(v) {
                            if f2 != f {
                                next.push((tree.push_child(g, vnode, f2), f2, level + 1));
                            }
                        }
                    }
                }
                if tree.len() > node_cap {
                    return Err(Error::NodeCapExceeded {
                        estimated: tree.len() as u128,
                        cap: node_cap,
                    });
                }
            }
            frontier = next;
        }
        Ok(tree)
    }
}

/// Minimum of `⟨λ⁰, π⟩` over all (reduced) `d`-trees of every root.
pub fn min_deviation_cost<S: Scalar>(
    g: &TannerGraph,
    llr0: &[S],
    w: &WeightVector,
    d: usize,
    reduced: bool,
) -> Result<MinCost<S>> {
    Ok(DpTable::build(g, llr0, w, d, reduced)?.min_cost())
}
