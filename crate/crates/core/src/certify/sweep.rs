//! All heights at once for unit level weights.
//!
//! With `w = 1^h` every level carries `c_ℓ = 1/h`, so `h · V_ℓ` depends only
//! on the number of levels `m = h - ℓ` below it:
//!
//! ```text
//! U_0[e] = λ_v / deg v
//! Q_m[e] = 1/(d - 1) · (sum of the d - 1 smallest U_{m-1} over the other edges of C)
//! U_m[e] = λ_v / deg v + 1/(deg v - 1) · Σ_{e' at v, e' != e} Q_m[e']
//! ```
//!
//! and the root cost at height `h` is `(1/h) Σ_{e at r} Q_h[e]` (dropping the
//! first maximum branch for reduced trees). One pass up to the largest
//! height therefore certifies every height of a grid, for both LO and
//! strong LO.

use super::dp::{check_inputs, root_sum, select_sums};
use crate::error::{Error, Result};
use crate::graph::TannerGraph;
use crate::scalar::Scalar;

/// Minimum costs at one height, with the lowest-index minimizing roots.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepPoint<S> {
    pub h: usize,
    pub lo_min: S,
    pub lo_root: usize,
    pub nlo_min: S,
    pub nlo_root: usize,
}

fn argmin<S: PartialOrd + Clone>(values: &[S]) -> (S, usize) {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v < values[best] {
            best = i;
        }
    }
    (values[best].clone(), best)
}

/// Unit-weight minimum deviation costs for every height in `heights`
/// (ascending, each at least 1), for both full and reduced trees.
pub fn unit_weight_sweep<S: Scalar>(
    g: &TannerGraph,
    llr0: &[S],
    d: usize,
    heights: &[usize],
) -> Result<Vec<SweepPoint<S>>> {
    check_inputs(g, llr0, d)?;
    if heights.is_empty() || heights[0] == 0 || heights.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Precondition(
            "heights must be positive and strictly ascending".into(),
        ));
    }
    let ne = g.num_edges();
    let n = g.num_variables();
    let inv_d1 = S::recip_usize(d - 1);
    let own: Vec<S> = (0..ne)
        .map(|e| {
            let v = g.edge(e).variable;
            llr0[v].clone() * S::recip_usize(g.variable_degree(v))
        })
        .collect();
    let inv_deg1: Vec<S> = (0..n)
        .map(|v| match g.variable_degree(v) {
            0 | 1 => S::zero(),
            deg => S::recip_usize(deg - 1),
        })
        .collect();
    let mut u = own.clone();
    let mut q = vec![S::zero(); ne];
    let mut out = Vec::with_capacity(heights.len());
    let mut next_h = heights.iter().peekable();
    let max_h = *heights.last().expect("non-empty");
    let mut branches: Vec<S> = Vec::new();
    for m in 1..=max_h {
        select_sums(g, d, &u, &mut q);
        q.iter_mut().for_each(|x| *x = x.clone() * inv_d1.clone());
        if next_h.peek() == Some(&&m) {
            next_h.next();
            let scale = S::recip_usize(m);
            let mut lo = Vec::with_capacity(n);
            let mut nlo = Vec::with_capacity(n);
            for r in 0..n {
                branches.clear();
                branches.extend(g.variable_edges(r).iter().map(|&e| q[e].clone()));
                lo.push(root_sum(&branches, false) * scale.clone());
                nlo.push(root_sum(&branches, true) * scale.clone());
            }
            let (lo_min, lo_root) = argmin(&lo);
            let (nlo_min, nlo_root) = argmin(&nlo);
            out.push(SweepPoint {
                h: m,
                lo_min,
                lo_root,
                nlo_min,
                nlo_root,
            });
        }
        if m == max_h {
            break;
        }
        for (v, inv) in inv_deg1.iter().enumerate() {
            let edges = g.variable_edges(v);
            for &e in edges {
                let below = edges
                    .iter()
                    .filter(|&&f| f != e)
                    .fold(S::zero(), |acc, &f| acc + q[f].clone());
                u[e] = own[e].clone() + below * inv.clone();
            }
        }
    }
    Ok(out)
}
