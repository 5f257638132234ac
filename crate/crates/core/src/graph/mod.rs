//! Edge-labeled Tanner graphs.
//!
//! The edge labeling of a check node is the order of its neighbor list:
//! position `i` in `check_neighbors(j)` is label `i + 1`. Projections onto a
//! local code and every tie-break in the crate follow this order.

mod alist;
mod generate;
mod gf2;
mod local_code;

use std::collections::VecDeque;

pub use alist::{load_alist, load_local_codes};
pub use generate::{
    generate_irregular, generate_regular, generate_regular_with_budget, DEFAULT_ATTEMPTS,
};
pub use local_code::{ExplicitCode, LocalCode, MAX_EXPLICIT_BLOCK_LENGTH};

use crate::error::{Error, Result};

/// A node of a Tanner graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node {
    Variable(usize),
    Check(usize),
}

impl Node {
    pub fn is_variable(self) -> bool {
        matches!(self, Node::Variable(_))
    }
}

/// An edge `(C_check, v_variable)`; `position` is its label at the check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub check: usize,
    pub variable: usize,
    pub position: usize,
}

#[derive(Clone, Debug)]
pub struct TannerGraph {
    num_variables: usize,
    check_neighbors: Vec<Vec<usize>>,
    edges: Vec<Edge>,
    check_edges: Vec<Vec<usize>>,
    variable_edges: Vec<Vec<usize>>,
    local_codes: Vec<LocalCode>,
}

impl TannerGraph {
    /// Builds a graph with SPC local codes from ordered check neighborhoods.
    pub fn new(num_variables: usize, checks: Vec<Vec<usize>>) -> Result<Self> {
        let codes = vec![LocalCode::Spc; checks.len()];
        Self::with_local_codes(num_variables, checks, codes)
    }

    pub fn with_local_codes(
        num_variables: usize,
        checks: Vec<Vec<usize>>,
        local_codes: Vec<LocalCode>,
    ) -> Result<Self> {
        if num_variables == 0 || checks.is_empty() {
            return Err(Error::InvalidGraph(
                "need at least one variable node and one check node".into(),
            ));
        }
        if local_codes.len() != checks.len() {
            return Err(Error::InvalidGraph(format!(
                "{} local codes for {} checks",
                local_codes.len(),
                checks.len()
            )));
        }
        let mut edges = Vec::new();
        let mut check_edges = Vec::with_capacity(checks.len());
        let mut variable_edges = vec![Vec::new(); num_variables];
        let mut seen = vec![usize::MAX; num_variables];
        for (j, nbrs) in checks.iter().enumerate() {
            if nbrs.is_empty() {
                return Err(Error::InvalidGraph(format!("check {j} has no neighbors")));
            }
            let mut ids = Vec::with_capacity(nbrs.len());
            for (position, &v) in nbrs.iter().enumerate() {
                if v >= num_variables {
                    return Err(Error::InvalidGraph(format!(
                        "check {j} lists variable {v}, but N = {num_variables}"
                    )));
                }
                if seen[v] == j {
                    return Err(Error::InvalidGraph(format!(
                        "check {j} lists variable {v} twice"
                    )));
                }
                seen[v] = j;
                let id = edges.len();
                edges.push(Edge {
                    check: j,
                    variable: v,
                    position,
                });
                ids.push(id);
                variable_edges[v].push(id);
            }
            check_edges.push(ids);
        }
        if let Some(v) = variable_edges.iter().position(Vec::is_empty) {
            return Err(Error::InvalidGraph(format!("variable {v} has degree 0")));
        }
        for (j, code) in local_codes.iter().enumerate() {
            let degree = checks[j].len();
            match code.block_length() {
                Some(n) if n != degree => {
                    return Err(Error::InvalidGraph(format!(
                        "check {j} has degree {degree} but its local code has length {n}"
                    )))
                }
                None if degree < 2 => {
                    return Err(Error::InvalidGraph(format!(
                        "SPC check {j} has degree {degree}; a single-bit parity check has no nonzero codeword"
                    )))
                }
                _ => {}
            }
        }
        Ok(TannerGraph {
            num_variables,
            check_neighbors: checks,
            edges,
            check_edges,
            variable_edges,
            local_codes,
        })
    }

    /// Replaces the local codes of the listed checks.
    pub fn replace_local_codes(
        &self,
        codes: impl IntoIterator<Item = (usize, LocalCode)>,
    ) -> Result<Self> {
        let mut local_codes = self.local_codes.clone();
        for (j, code) in codes {
            if j >= local_codes.len() {
                return Err(Error::InvalidGraph(format!(
                    "check {j} out of range (J = {})",
                    local_codes.len()
                )));
            }
            local_codes[j] = code;
        }
        Self::with_local_codes(self.num_variables, self.check_neighbors.clone(), local_codes)
    }

    pub fn num_variables(&self) -> usize {
        self.num_variables
    }

    pub fn num_checks(&self) -> usize {
        self.check_neighbors.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, id: usize) -> Edge {
        self.edges[id]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Ordered neighborhood of check `j` (the edge labeling).
    pub fn check_neighbors(&self, j: usize) -> &[usize] {
        &self.check_neighbors[j]
    }

    /// Edge ids at check `j`, in label order.
    pub fn check_edges(&self, j: usize) -> &[usize] {
        &self.check_edges[j]
    }

    /// Edge ids at variable `v`, in ascending check order.
    pub fn variable_edges(&self, v: usize) -> &[usize] {
        &self.variable_edges[v]
    }

    pub fn variable_checks(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.variable_edges[v].iter().map(|&e| self.edges[e].check)
    }

    pub fn variable_degree(&self, v: usize) -> usize {
        self.variable_edges[v].len()
    }

    pub fn check_degree(&self, j: usize) -> usize {
        self.check_neighbors[j].len()
    }

    pub fn degree(&self, node: Node) -> usize {
        match node {
            Node::Variable(v) => self.variable_degree(v),
            Node::Check(j) => self.check_degree(j),
        }
    }

    pub fn min_check_degree(&self) -> usize {
        self.check_neighbors.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn max_check_degree(&self) -> usize {
        self.check_neighbors.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn local_code(&self, j: usize) -> &LocalCode {
        &self.local_codes[j]
    }

    pub fn has_only_spc(&self) -> bool {
        self.local_codes.iter().all(|c| matches!(c, LocalCode::Spc))
    }

    /// Neighbors of a node; for checks this is the labeled order.
    pub fn neighbors(&self, node: Node) -> Vec<Node> {
        match node {
            Node::Variable(v) => self.variable_checks(v).map(Node::Check).collect(),
            Node::Check(j) => self.check_neighbors[j].iter().map(|&v| Node::Variable(v)).collect(),
        }
    }

    /// Returns `(d_L, d_R)` if every variable has degree `d_L` and every check
    /// degree `d_R`.
    pub fn regular_degrees(&self) -> Option<(usize, usize)> {
        let dl = self.variable_degree(0);
        let dr = self.check_degree(0);
        let regular = (0..self.num_variables).all(|v| self.variable_degree(v) == dl)
            && (0..self.num_checks()).all(|j| self.check_degree(j) == dr);
        regular.then_some((dl, dr))
    }

    /// Minimum local distance `d*`.
    pub fn min_local_distance(&self) -> usize {
        self.local_codes
            .iter()
            .map(LocalCode::min_distance)
            .min()
            .expect("graph has at least one check")
    }

    pub fn is_codeword(&self, x: &[u8]) -> Result<bool> {
        if x.len() != self.num_variables {
            return Err(Error::LengthMismatch {
                expected: self.num_variables,
                actual: x.len(),
            });
        }
        let mut local = Vec::new();
        for (j, nbrs) in self.check_neighbors.iter().enumerate() {
            local.clear();
            local.extend(nbrs.iter().map(|&v| x[v]));
            if !self.local_codes[j].contains(&local) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Rows of the global parity-check matrix: each local parity row lifted
    /// onto the check's neighborhood.
    pub fn parity_check_rows(&self) -> Vec<Vec<u8>> {
        let mut rows = Vec::new();
        for (j, nbrs) in self.check_neighbors.iter().enumerate() {
            for local in self.local_codes[j].parity_rows(nbrs.len()) {
                let mut row = vec![0u8; self.num_variables];
                for (pos, &v) in nbrs.iter().enumerate() {
                    row[v] = local[pos];
                }
                rows.push(row);
            }
        }
        rows
    }

    /// A GF(2) basis of the Tanner code.
    pub fn code_basis(&self) -> Vec<Vec<u8>> {
        gf2::null_space(&self.parity_check_rows(), self.num_variables)
    }

    pub fn dimension(&self) -> usize {
        self.code_basis().len()
    }

    /// Length of the shortest cycle, or `None` when the graph is a forest.
    ///
    /// BFS from every node; each non-tree edge `(u, x)` closes a cycle of
    /// length at most `dist(u) + dist(x) + 1`, and the minimum over all
    /// sources is exact.
    pub fn girth(&self) -> Option<usize> {
        let n = self.num_variables;
        let total = n + self.num_checks();
        let index = |node: Node| match node {
            Node::Variable(v) => v,
            Node::Check(j) => n + j,
        };
        let node_of = |i: usize| {
            if i < n {
                Node::Variable(i)
            } else {
                Node::Check(i - n)
            }
        };
        let adjacency: Vec<Vec<usize>> = (0..total)
            .map(|i| self.neighbors(node_of(i)).into_iter().map(index).collect())
            .collect();

        let mut best = usize::MAX;
        let mut dist = vec![usize::MAX; total];
        let mut parent = vec![usize::MAX; total];
        let mut queue = VecDeque::new();
        for source in 0..total {
            dist.iter_mut().for_each(|d| *d = usize::MAX);
            dist[source] = 0;
            parent[source] = usize::MAX;
            queue.clear();
            queue.push_back(source);
            while let Some(u) = queue.pop_front() {
                if 2 * dist[u] >= best {
                    break;
                }
                for &x in &adjacency[u] {
                    if dist[x] == usize::MAX {
                        dist[x] = dist[u] + 1;
                        parent[x] = u;
                        queue.push_back(x);
                    } else if parent[u] != x {
                        best = best.min(dist[u] + dist[x] + 1);
                    }
                }
            }
        }
        (best != usize::MAX).then_some(best)
    }
}
