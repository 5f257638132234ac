use std::rc::Rc;

use itertools::Itertools;
use rand::seq::index;
use rand::Rng;

use super::SubTree;
use crate::error::{Error, Result};
use crate::graph::{Node, TannerGraph};

/// Default ceiling on the number of enumerated trees.
pub const DEFAULT_TREE_CAP: usize = 200_000;

fn check_degree_precondition(g: &TannerGraph, d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidDegree {
            d,
            reason: "d must be at least 2".into(),
        });
    }
    if g.min_check_degree() < d {
        return Err(Error::InvalidDegree {
            d,
            reason: format!(
                "some check has degree {} < d, so no d-tree exists",
                g.min_check_degree()
            ),
        });
    }
    Ok(())
}

// Elementary symmetric polynomial e_k of the inputs, saturating.
fn elementary_symmetric(values: &[u128], k: usize) -> u128 {
    let mut e = vec![0u128; k + 1];
    e[0] = 1;
    for &x in values {
        for j in (1..=k).rev() {
            e[j] = e[j].saturating_add(e[j - 1].saturating_mul(x));
        }
    }
    e[k]
}

/// Number of (reduced) `d`-trees of height `2h` rooted at `r`, counted
/// without building any tree: a local-code path contributes the
/// elementary symmetric sum of its candidates' counts, a variable path
/// the product over its children. Saturates at `u128::MAX`.
pub fn count_d_trees(g: &TannerGraph, r: usize, h: usize, d: usize, reduced: bool) -> Result<u128> {
    check_degree_precondition(g, d)?;
    let ne = g.num_edges();
    // var_count[e]: trees hanging at a variable path entered over e, with
    // the current number of levels below it.
    let mut var_count = vec![1u128; ne];
    let mut check_count = vec![1u128; ne];
    for level in (1..=h).rev() {
        if level < h {
            var_count = (0..ne)
                .map(|e| {
                    let v = g.edge(e).variable;
                    g.variable_edges(v)
                        .iter()
                        .filter(|&&f| f != e)
                        .fold(1u128, |acc, &f| acc.saturating_mul(check_count[f]))
                })
                .collect();
        }
        check_count = (0..ne)
            .map(|e| {
                let j = g.edge(e).check;
                let others: Vec<u128> = g
                    .check_edges(j)
                    .iter()
                    .filter(|&&f| f != e)
                    .map(|&f| var_count[f])
                    .collect();
                elementary_symmetric(&others, d - 1)
            })
            .collect();
    }
    if h == 0 {
        return Ok(1);
    }
    let branches: Vec<u128> = g.variable_edges(r).iter().map(|&f| check_count[f]).collect();
    if reduced {
        Ok(elementary_symmetric(&branches, branches.len().saturating_sub(1)))
    } else {
        Ok(branches.iter().fold(1u128, |acc, &x| acc.saturating_mul(x)))
    }
}

/// A node of a shared tree fragment, identified by the edge used to reach it.
struct Frag {
    edge: usize,
    children: Vec<Rc<Frag>>,
}

fn product(lists: &[Vec<Rc<Frag>>]) -> Vec<Vec<Rc<Frag>>> {
    let mut out: Vec<Vec<Rc<Frag>>> = vec![Vec::new()];
    for list in lists {
        out = out
            .iter()
            .flat_map(|prefix| {
                list.iter().map(move |item| {
                    let mut v = prefix.clone();
                    v.push(item.clone());
                    v
                })
            })
            .collect();
    }
    out
}

struct Enumerator<'a> {
    g: &'a TannerGraph,
    h: usize,
    d: usize,
}

impl Enumerator<'_> {
    fn variable(&self, e: usize, depth: usize) -> Vec<Rc<Frag>> {
        if depth == 2 * self.h {
            return vec![Rc::new(Frag {
                edge: e,
                children: Vec::new(),
            })];
        }
        let v = self.g.edge(e).variable;
        let lists: Vec<Vec<Rc<Frag>>> = self
            .g
            .variable_edges(v)
            .iter()
            .filter(|&&f| f != e)
            .map(|&f| self.check(f, depth + 1))
            .collect();
        product(&lists)
            .into_iter()
            .map(|children| Rc::new(Frag { edge: e, children }))
            .collect()
    }

    fn check(&self, e: usize, depth: usize) -> Vec<Rc<Frag>> {
        let j = self.g.edge(e).check;
        let lists: Vec<Vec<Rc<Frag>>> = self
            .g
            .check_edges(j)
            .iter()
            .filter(|&&f| f != e)
            .map(|&f| self.variable(f, depth + 1))
            .collect();
        let mut out = Vec::new();
        for subset in (0..lists.len()).combinations(self.d - 1) {
            let chosen: Vec<Vec<Rc<Frag>>> = subset.iter().map(|&i| lists[i].clone()).collect();
            for children in product(&chosen) {
                out.push(Rc::new(Frag { edge: e, children }));
            }
        }
        out
    }
}

fn materialize(g: &TannerGraph, r: usize, branches: &[Rc<Frag>]) -> SubTree {
    let mut tree = SubTree::singleton(g, r);
    let mut stack: Vec<(usize, &Rc<Frag>)> = Vec::new();
    for b in branches.iter().rev() {
        stack.push((0, b));
    }
    // Depth-first with children pushed in reverse so they are appended in
    // order; parents always precede children.
    while let Some((parent, frag)) = stack.pop() {
        let id = tree.push_child(g, parent, frag.edge);
        for c in frag.children.iter().rev() {
            stack.push((id, c));
        }
    }
    tree
}

/// All (reduced) `d`-trees of height `2h` rooted at `r`, in a fixed order.
pub fn enumerate_d_trees(
    g: &TannerGraph,
    r: usize,
    h: usize,
    d: usize,
    reduced: bool,
    cap: usize,
) -> Result<Vec<SubTree>> {
    let estimated = count_d_trees(g, r, h, d, reduced)?;
    if estimated > cap as u128 {
        return Err(Error::EnumerationCapExceeded { estimated, cap });
    }
    if h == 0 {
        return Ok(vec![SubTree::singleton(g, r)]);
    }
    let en = Enumerator { g, h, d };
    let lists: Vec<Vec<Rc<Frag>>> = g
        .variable_edges(r)
        .iter()
        .map(|&f| en.check(f, 1))
        .collect();
    let mut trees = Vec::new();
    if reduced {
        for drop in 0..lists.len() {
            let kept: Vec<Vec<Rc<Frag>>> = lists
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != drop)
                .map(|(_, l)| l.clone())
                .collect();
            trees.extend(product(&kept).iter().map(|b| materialize(g, r, b)));
        }
    } else {
        trees.extend(product(&lists).iter().map(|b| materialize(g, r, b)));
    }
    Ok(trees)
}

/// Draws a uniformly random child subset at every local-code path (and a
/// uniformly random dropped root branch when `reduced`).
pub fn sample_d_tree<R: Rng + ?Sized>(
    g: &TannerGraph,
    r: usize,
    h: usize,
    d: usize,
    reduced: bool,
    rng: &mut R,
) -> Result<SubTree> {
    check_degree_precondition(g, d)?;
    let mut tree = SubTree::singleton(g, r);
    if h == 0 {
        return Ok(tree);
    }
    let root_edges = g.variable_edges(r);
    let dropped = if reduced {
        Some(rng.random_range(0..root_edges.len()))
    } else {
        None
    };
    let mut frontier: Vec<usize> = Vec::new();
    for (i, &e) in root_edges.iter().enumerate() {
        if Some(i) != dropped {
            frontier.push(tree.push_child(g, 0, e));
        }
    }
    for _ in 1..2 * h {
        let mut next = Vec::new();
        for id in frontier {
            let node = tree.node(id).clone();
            let back = node.edge.expect("non-root");
            match node.target {
                Node::Check(j) => {
                    let others: Vec<usize> =
                        g.check_edges(j).iter().copied().filter(|&f| f != back).collect();
                    let mut pick = index::sample(rng, others.len(), d - 1).into_vec();
                    pick.sort_unstable();
                    for i in pick {
                        next.push(tree.push_child(g, id, others[i]));
                    }
                }
                Node::Variable(v) => {
                    for &f in g.variable_edges(v) {
                        if f != back {
                            next.push(tree.push_child(g, id, f));
                        }
                    }
                }
            }
        }
        frontier = next;
    }
    Ok(tree)
}

/// Random subtree of the path-prefix tree: every child is kept
/// independently with probability `keep`.
pub fn sample_subtree<R: Rng + ?Sized>(
    g: &TannerGraph,
    r: usize,
    height: usize,
    keep: f64,
    rng: &mut R,
) -> SubTree {
    let mut tree = SubTree::singleton(g, r);
    let mut frontier = vec![0usize];
    for _ in 0..height {
        let mut next = Vec::new();
        for id in frontier {
            let back = tree.node(id).edge;
            let edges: Vec<usize> = match tree.node(id).target {
                Node::Variable(v) => g.variable_edges(v).to_vec(),
                Node::Check(j) => g.check_edges(j).to_vec(),
            };
            for e in edges {
                if Some(e) != back && rng.random_bool(keep) {
                    next.push(tree.push_child(g, id, e));
                }
            }
        }
        frontier = next;
    }
    tree
}
