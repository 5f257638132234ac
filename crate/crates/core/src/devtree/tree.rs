use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{Node, TannerGraph};

/// Default ceiling on explicitly materialized tree nodes.
pub const DEFAULT_NODE_CAP: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PathKind {
    Variable,
    LocalCode,
}

/// One backtrackless path of the Tanner graph starting at the root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeNode {
    /// Last node of the path, `t(p)`.
    pub target: Node,
    /// Path length `|p|`.
    pub depth: usize,
    pub parent: Option<usize>,
    /// Children in ascending edge-id order (variable: ascending check,
    /// check: edge-label order).
    pub children: Vec<usize>,
    /// Graph edge traversed from the parent.
    pub edge: Option<usize>,
    /// `deg_G(t(p))`.
    pub graph_degree: usize,
}

impl TreeNode {
    pub fn kind(&self) -> PathKind {
        if self.target.is_variable() {
            PathKind::Variable
        } else {
            PathKind::LocalCode
        }
    }
}

/// A rooted subtree of a path-prefix tree. Node 0 is the root and every
/// parent is stored before its children.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubTree {
    root: usize,
    nodes: Vec<TreeNode>,
}

impl SubTree {
    /// Trivial tree holding only the root path `(r)`.
    pub fn singleton(g: &TannerGraph, r: usize) -> Self {
        SubTree {
            root: r,
            nodes: vec![TreeNode {
                target: Node::Variable(r),
                depth: 0,
                parent: None,
                children: Vec::new(),
                edge: None,
                graph_degree: g.variable_degree(r),
            }],
        }
    }

    /// Appends a child of `parent` reached through graph edge `edge`. The
    /// caller keeps children in ascending edge order.
    pub(crate) fn push_child(&mut self, g: &TannerGraph, parent: usize, edge: usize) -> usize {
        let e = g.edge(edge);
        let target = match self.nodes[parent].target {
            Node::Variable(_) => Node::Check(e.check),
            Node::Check(_) => Node::Variable(e.variable),
        };
        let id = self.nodes.len();
        self.nodes.push(TreeNode {
            target,
            depth: self.nodes[parent].depth + 1,
            parent: Some(parent),
            children: Vec::new(),
            edge: Some(edge),
            graph_degree: g.degree(target),
        });
        self.nodes[parent].children.push(id);
        id
    }

    /// Builds a tree from a prefix-closed set of paths, all starting at the
    /// same variable.
    pub fn from_paths(g: &TannerGraph, paths: &[Vec<Node>]) -> Result<SubTree> {
        let Some(Node::Variable(r)) = paths.first().and_then(|p| p.first().copied()) else {
            return Err(Error::InvalidTree("paths must start at a variable".into()));
        };
        let mut sorted: Vec<&Vec<Node>> = paths.iter().filter(|p| p.len() > 1).collect();
        sorted.sort_by_key(|p| p.len());
        sorted.dedup();
        let mut tree = SubTree::singleton(g, r);
        // Shorter paths first so that parents precede children.
        let mut ids: Vec<(Vec<Node>, usize)> = vec![(vec![Node::Variable(r)], 0)];
        for p in sorted {
            if p[0] != Node::Variable(r) {
                return Err(Error::InvalidTree("paths start at different roots".into()));
            }
            let parent_path = &p[..p.len() - 1];
            let parent = ids
                .iter()
                .find(|(q, _)| q.as_slice() == parent_path)
                .map(|(_, id)| *id)
                .ok_or_else(|| Error::InvalidTree(format!("path {p:?} has no parent in the set")))?;
            let edge = edge_between(g, p[p.len() - 2], p[p.len() - 1])
                .ok_or_else(|| Error::InvalidTree(format!("path {p:?} leaves the graph")))?;
            let id = tree.push_child(g, parent, edge);
            ids.push((p.clone(), id));
        }
        let edges: Vec<Option<usize>> = tree.nodes.iter().map(|n| n.edge).collect();
        for node in &mut tree.nodes {
            node.children.sort_by_key(|&c| edges[c]);
        }
        tree.validate(g)?;
        Ok(tree)
    }

    /// Variable index of the root.
    pub fn root_variable(&self) -> usize {
        self.root
    }

    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn node(&self, id: usize) -> &TreeNode {
        &self.nodes[id]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn height(&self) -> usize {
        self.nodes.iter().map(|n| n.depth).max().unwrap_or(0)
    }

    pub fn children(&self, id: usize) -> &[usize] {
        &self.nodes[id].children
    }

    /// `deg_T(p)`: children plus the parent edge for non-root paths.
    pub fn tree_degree(&self, id: usize) -> usize {
        let n = &self.nodes[id];
        n.children.len() + usize::from(n.parent.is_some())
    }

    /// The path `p` as a node sequence starting at the root.
    pub fn path(&self, id: usize) -> Vec<Node> {
        let mut out = Vec::with_capacity(self.nodes[id].depth + 1);
        let mut cur = Some(id);
        while let Some(i) = cur {
            out.push(self.nodes[i].target);
            cur = self.nodes[i].parent;
        }
        out.reverse();
        out
    }

    /// Locates a path given as a node sequence.
    pub fn find_path(&self, path: &[Node]) -> Option<usize> {
        let (first, rest) = path.split_first()?;
        if *first != self.nodes[0].target {
            return None;
        }
        let mut cur = 0;
        for step in rest {
            cur = *self.nodes[cur]
                .children
                .iter()
                .find(|&&c| self.nodes[c].target == *step)?;
        }
        Some(cur)
    }

    /// Ids of the subtree hanging at `id` (including `id`), in storage order.
    pub fn descendants(&self, id: usize) -> Vec<usize> {
        let mut inside = vec![false; self.nodes.len()];
        inside[id] = true;
        let mut out = vec![id];
        for i in id + 1..self.nodes.len() {
            if let Some(p) = self.nodes[i].parent {
                if inside[p] {
                    inside[i] = true;
                    out.push(i);
                }
            }
        }
        out
    }

    /// `Trim(T, q)`: removes the subtree hanging at `q`.
    pub fn trim(&self, q: usize) -> Result<SubTree> {
        self.trim_with_map(q).map(|(t, _)| t)
    }

    /// Like [`SubTree::trim`], also returning the old-to-new id map.
    pub fn trim_with_map(&self, q: usize) -> Result<(SubTree, Vec<Option<usize>>)> {
        if q == 0 {
            return Err(Error::InvalidTree("the root cannot be trimmed".into()));
        }
        if q >= self.nodes.len() {
            return Err(Error::InvalidTree(format!("node {q} is not in the tree")));
        }
        let mut map = vec![None; self.nodes.len()];
        let mut removed = vec![false; self.nodes.len()];
        let mut nodes: Vec<TreeNode> = Vec::with_capacity(self.nodes.len());
        for (i, node) in self.nodes.iter().enumerate() {
            if i == q || node.parent.is_some_and(|p| removed[p]) {
                removed[i] = true;
                continue;
            }
            map[i] = Some(nodes.len());
            nodes.push(TreeNode {
                parent: node.parent.map(|p| map[p].expect("parent precedes child")),
                children: Vec::new(),
                ..node.clone()
            });
        }
        for i in 1..nodes.len() {
            let p = nodes[i].parent.expect("non-root");
            nodes[p].children.push(i);
        }
        Ok((
            SubTree {
                root: self.root,
                nodes,
            },
            map,
        ))
    }

    /// Re-roots the subtree hanging at variable path `id`, keeping at most
    /// `span` further levels of depth.
    pub fn extract(&self, id: usize, span: usize) -> Result<SubTree> {
        let Node::Variable(r) = self.nodes[id].target else {
            return Err(Error::InvalidTree("only variable paths can become roots".into()));
        };
        let base = self.nodes[id].depth;
        let mut map = vec![None; self.nodes.len()];
        map[id] = Some(0);
        let mut nodes = vec![TreeNode {
            depth: 0,
            parent: None,
            children: Vec::new(),
            edge: None,
            ..self.nodes[id].clone()
        }];
        for i in id + 1..self.nodes.len() {
            let node = &self.nodes[i];
            let Some(p) = node.parent.and_then(|p| map[p]) else {
                continue;
            };
            if node.depth - base > span {
                continue;
            }
            let id = nodes.len();
            map[i] = Some(id);
            nodes[p].children.push(id);
            nodes.push(TreeNode {
                depth: node.depth - base,
                parent: Some(p),
                children: Vec::new(),
                ..node.clone()
            });
        }
        Ok(SubTree { root: r, nodes })
    }

    /// Structural check: every node is a backtrackless extension of its
    /// parent by one graph edge, children are stored in ascending edge order,
    /// and cached degrees match the graph.
    pub fn validate(&self, g: &TannerGraph) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidTree(msg));
        let Some(root) = self.nodes.first() else {
            return bad("empty tree".into());
        };
        if root.target != Node::Variable(self.root) || root.depth != 0 || root.parent.is_some() {
            return bad("malformed root".into());
        }
        if self.root >= g.num_variables() {
            return bad(format!("root {} is not a variable of the graph", self.root));
        }
        for (i, node) in self.nodes.iter().enumerate() {
            if node.graph_degree != g.degree(node.target) {
                return bad(format!("node {i} caches a wrong graph degree"));
            }
            if node.target.is_variable() != (node.depth % 2 == 0) {
                return bad(format!("node {i} breaks the variable/check alternation"));
            }
            let mut last = None;
            for &c in &node.children {
                if c <= i || c >= self.nodes.len() || self.nodes[c].parent != Some(i) {
                    return bad(format!("node {i} has a broken child link {c}"));
                }
                let e = self.nodes[c].edge;
                if e <= last {
                    return bad(format!("children of node {i} are not in edge order"));
                }
                last = e;
            }
            let Some(p) = node.parent else {
                if i != 0 {
                    return bad(format!("node {i} has no parent"));
                }
                continue;
            };
            if p >= i || !self.nodes[p].children.contains(&i) {
                return bad(format!("node {i} has a broken parent link"));
            }
            let parent = &self.nodes[p];
            if node.depth != parent.depth + 1 {
                return bad(format!("node {i} has depth {} under depth {}", node.depth, parent.depth));
            }
            let Some(e) = node.edge else {
                return bad(format!("node {i} has no edge"));
            };
            if e >= g.num_edges() {
                return bad(format!("node {i} uses unknown edge {e}"));
            }
            let edge = g.edge(e);
            let ends = match (parent.target, node.target) {
                (Node::Variable(v), Node::Check(j)) | (Node::Check(j), Node::Variable(v)) => {
                    edge.variable == v && edge.check == j
                }
                _ => false,
            };
            if !ends {
                return bad(format!("edge {e} does not join node {i} to its parent"));
            }
            if parent.edge == Some(e) {
                return bad(format!("node {i} backtracks"));
            }
        }
        Ok(())
    }

    fn check_d_tree(&self, g: &TannerGraph, h: usize, d: usize, reduced: bool) -> Result<()> {
        self.validate(g)?;
        let bad = |msg: String| Err(Error::InvalidTree(msg));
        let leaf_depth = 2 * h;
        for (i, node) in self.nodes.iter().enumerate() {
            let have = node.children.len();
            let want = if node.depth == leaf_depth {
                0
            } else if node.depth > leaf_depth {
                return bad(format!("node {i} lies below depth {leaf_depth}"));
            } else if !node.target.is_variable() {
                d - 1
            } else if i == 0 {
                node.graph_degree - usize::from(reduced)
            } else {
                node.graph_degree - 1
            };
            if have != want {
                return bad(format!(
                    "node {i} at depth {} has {have} children, expected {want}",
                    node.depth
                ));
            }
        }
        Ok(())
    }

    /// Is this a `d`-tree of height `2h`? (The root keeps all its children,
    /// local-code paths keep `d - 1`, other variable paths keep all.)
    pub fn is_d_tree(&self, g: &TannerGraph, h: usize, d: usize) -> Result<()> {
        self.check_d_tree(g, h, d, false)
    }

    /// Same as [`SubTree::is_d_tree`] but with root degree `deg_G(r) - 1`.
    pub fn is_reduced_d_tree(&self, g: &TannerGraph, h: usize, d: usize) -> Result<()> {
        self.check_d_tree(g, h, d, true)
    }

    /// Graphviz rendering: variable paths as circles, local-code paths as
    /// squares.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph subtree {\n");
        for (i, node) in self.nodes.iter().enumerate() {
            let (label, shape) = match node.target {
                Node::Variable(v) => (format!("v{v}"), "circle"),
                Node::Check(j) => (format!("C{j}"), "square"),
            };
            writeln!(out, "  n{i} [label=\"{label}\", shape={shape}];").unwrap();
        }
        for (i, node) in self.nodes.iter().enumerate() {
            for c in &node.children {
                writeln!(out, "  n{i} -> n{c};").unwrap();
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Number of backtrackless paths of length `<= height` from variable `r`,
/// saturating at `u128::MAX`.
pub fn path_count(g: &TannerGraph, r: usize, height: usize) -> u128 {
    if height == 0 {
        return 1;
    }
    // at_check[e] / at_var[e]: size of the subtree hanging at a check
    // (variable) path entered over edge e, with the current number of
    // remaining steps.
    let ne = g.num_edges();
    let mut at_check = vec![1u128; ne];
    let mut at_var = vec![1u128; ne];
    for _ in 1..height {
        let sum_others = |edges: &[usize], e: usize, below: &[u128]| {
            edges
                .iter()
                .filter(|&&f| f != e)
                .fold(1u128, |acc, &f| acc.saturating_add(below[f]))
        };
        let next_check: Vec<u128> = (0..ne)
            .map(|e| sum_others(g.check_edges(g.edge(e).check), e, &at_var))
            .collect();
        let next_var: Vec<u128> = (0..ne)
            .map(|e| sum_others(g.variable_edges(g.edge(e).variable), e, &at_check))
            .collect();
        at_check = next_check;
        at_var = next_var;
    }
    g.variable_edges(r)
        .iter()
        .fold(1u128, |acc, &f| acc.saturating_add(at_check[f]))
}

fn edge_between(g: &TannerGraph, a: Node, b: Node) -> Option<usize> {
    let (v, j) = match (a, b) {
        (Node::Variable(v), Node::Check(j)) | (Node::Check(j), Node::Variable(v)) => (v, j),
        _ => return None,
    };
    if v >= g.num_variables() || j >= g.num_checks() {
        return None;
    }
    g.variable_edges(v).iter().copied().find(|&e| g.edge(e).check == j)
}

/// The complete path-prefix tree of height `height` rooted at variable `r`.
pub fn build_path_prefix_tree(
    g: &TannerGraph,
    r: usize,
    height: usize,
    node_cap: usize,
) -> Result<SubTree> {
    if r >= g.num_variables() {
        return Err(Error::Precondition(format!("root {r} is not a variable")));
    }
    let estimated = path_count(g, r, height);
    if estimated > node_cap as u128 {
        return Err(Error::NodeCapExceeded {
            estimated,
            cap: node_cap,
        });
    }
    let mut tree = SubTree::singleton(g, r);
    let mut frontier = vec![0usize];
    for _ in 0..height {
        let mut next = Vec::new();
        for id in frontier {
            let back = tree.nodes[id].edge;
            let edges: Vec<usize> = match tree.nodes[id].target {
                Node::Variable(v) => g.variable_edges(v).to_vec(),
                Node::Check(j) => g.check_edges(j).to_vec(),
            };
            for e in edges {
                if Some(e) != back {
                    next.push(tree.push_child(g, id, e));
                }
            }
        }
        frontier = next;
    }
    Ok(tree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::devtree::tests::example1;

    #[test]
    fn example1_prefix_tree_contains_paths() {
        let g = example1();
        let t = build_path_prefix_tree(&g, 1, 4, DEFAULT_NODE_CAP).unwrap();
        t.validate(&g).unwrap();
        let (b, y, c, z, a) = (Node::Variable(1), Node::Check(1), Node::Variable(2), Node::Check(2), Node::Variable(0));
        for p in [vec![b], vec![b, y], vec![b, y, c], vec![b, y, c, z], vec![b, y, c, z, a]] {
            assert!(t.find_path(&p).is_some(), "{p:?}");
        }
        assert!(t.find_path(&[b, y, b]).is_none());
        assert_eq!(t.len() as u128, path_count(&g, 1, 4));
        assert_eq!(t.height(), 4);
    }

    #[test]
    fn height_one_is_a_star() {
        let g = example1();
        for r in 0..4 {
            let t = build_path_prefix_tree(&g, r, 1, DEFAULT_NODE_CAP).unwrap();
            assert_eq!(t.children(0).len(), g.variable_degree(r));
            assert_eq!(t.len(), 1 + g.variable_degree(r));
        }
    }

    #[test]
    fn node_cap() {
        let g = example1();
        let err = build_path_prefix_tree(&g, 0, 12, 1000).unwrap_err();
        assert!(matches!(err, Error::NodeCapExceeded { cap: 1000, .. }));
    }

    #[test]
    fn trim_root_child_and_degrees() {
        let g = example1();
        let t = build_path_prefix_tree(&g, 1, 2, DEFAULT_NODE_CAP).unwrap();
        assert_eq!(t.tree_degree(0), 3);
        let y = t.find_path(&[Node::Variable(1), Node::Check(1)]).unwrap();
        assert_eq!(t.tree_degree(y), 4);
        let trimmed = t.trim(y).unwrap();
        trimmed.validate(&g).unwrap();
        assert_eq!(trimmed.tree_degree(0), 2);
        assert_eq!(trimmed.len(), t.len() - t.descendants(y).len());
        assert!(t.trim(0).is_err());
    }

    #[test]
    fn trim_only_child_gives_height_zero() {
        let g = TannerGraph::new(3, vec![vec![0, 1, 2]]).unwrap();
        let t = build_path_prefix_tree(&g, 0, 2, DEFAULT_NODE_CAP).unwrap();
        let t0 = t.trim(1).unwrap();
        assert_eq!(t0.len(), 1);
        assert_eq!(t0.height(), 0);
    }

    #[test]
    fn validate_rejects_backtracking() {
        let g = example1();
        let mut t = SubTree::singleton(&g, 0);
        let e = g.variable_edges(0)[0];
        let c = t.push_child(&g, 0, e);
        t.push_child(&g, c, e);
        assert!(t.validate(&g).is_err());
    }

    #[test]
    fn extract_reroots() {
        let g = example1();
        let t = build_path_prefix_tree(&g, 1, 4, DEFAULT_NODE_CAP).unwrap();
        let id = t
            .find_path(&[Node::Variable(1), Node::Check(1), Node::Variable(2)])
            .unwrap();
        let sub = t.extract(id, 2).unwrap();
        assert_eq!(sub.root_variable(), 2);
        assert_eq!(sub.height(), 2);
        // Re-rooted trees omit the edge back to the old parent.
        assert_eq!(sub.children(0).len(), 2);
        sub.validate(&g).unwrap();
    }

    #[test]
    fn dot_output() {
        let g = example1();
        let t = build_path_prefix_tree(&g, 1, 1, DEFAULT_NODE_CAP).unwrap();
        let dot = t.to_dot();
        assert!(dot.contains("shape=circle"));
        assert!(dot.contains("shape=square"));
        assert_eq!(dot.matches("->").count(), 3);
    }
}
