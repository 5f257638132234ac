//! MacKay alist reader/writer and the local-code sidecar format.
//!
//! Alist layout (1-indexed on disk):
//!
//! ```text
//! N J
//! max_var_degree max_check_degree
//! var degrees (N numbers)
//! check degrees (J numbers)
//! N lines of check indices, zero-padded to max_var_degree
//! J lines of variable indices, zero-padded to max_check_degree
//! ```
//!
//! The order of the variable indices on each check line is the edge
//! labeling of that check.
//!
//! Sidecar lines are `<check, 1-indexed> <row> [<row> ...]` where each row is
//! a bitstring as long as the check degree; `#` starts a comment.

use std::fmt::Write as _;

use super::{LocalCode, TannerGraph};
use crate::error::{Error, Result};

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines {
            inner: text.lines().enumerate(),
        }
    }

    /// Next non-blank line as `(1-based line number, tokens)`.
    fn next_numbers(&mut self, what: &str) -> Result<(usize, Vec<usize>)> {
        for (i, line) in self.inner.by_ref() {
            if line.trim().is_empty() {
                continue;
            }
            let numbers = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<usize>().map_err(|_| Error::Alist {
                        line: i + 1,
                        message: format!("{what}: {t:?} is not a nonnegative integer"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            return Ok((i + 1, numbers));
        }
        Err(Error::Alist {
            line: 0,
            message: format!("unexpected end of input while reading {what}"),
        })
    }
}

fn alist_err(line: usize, message: impl Into<String>) -> Error {
    Error::Alist {
        line,
        message: message.into(),
    }
}

/// Parses an alist into a graph with SPC local codes.
pub fn load_alist(text: &str) -> Result<TannerGraph> {
    let mut lines = Lines::new(text);
    let (line, header) = lines.next_numbers("header")?;
    let [n, j] = header[..] else {
        return Err(alist_err(line, "header must be \"N J\""));
    };
    if n == 0 || j == 0 {
        return Err(alist_err(line, "N and J must be positive"));
    }
    let (line, maxima) = lines.next_numbers("maximum degrees")?;
    if maxima.len() != 2 {
        return Err(alist_err(line, "expected two maximum degrees"));
    }
    let (line, var_degrees) = lines.next_numbers("variable degrees")?;
    if var_degrees.len() != n {
        return Err(alist_err(
            line,
            format!("{} variable degrees for N = {n}", var_degrees.len()),
        ));
    }
    let (line, check_degrees) = lines.next_numbers("check degrees")?;
    if check_degrees.len() != j {
        return Err(alist_err(
            line,
            format!("{} check degrees for J = {j}", check_degrees.len()),
        ));
    }

    let mut var_lists = Vec::with_capacity(n);
    for (v, &deg) in var_degrees.iter().enumerate() {
        let (line, entries) = lines.next_numbers("variable neighbor list")?;
        let list = neighbor_list(line, &entries, deg, j, &format!("variable {}", v + 1))?;
        var_lists.push(list);
    }
    let mut checks = Vec::with_capacity(j);
    for (c, &deg) in check_degrees.iter().enumerate() {
        let (line, entries) = lines.next_numbers("check neighbor list")?;
        let list = neighbor_list(line, &entries, deg, n, &format!("check {}", c + 1))?;
        let mut sorted = list.clone();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(alist_err(
                line,
                format!("check {} lists variable {} twice", c + 1, w[0] + 1),
            ));
        }
        checks.push(list);
    }

    // Both halves must describe the same edge set.
    let mut from_checks = vec![Vec::new(); n];
    for (c, list) in checks.iter().enumerate() {
        for &v in list {
            from_checks[v].push(c);
        }
    }
    for (v, list) in var_lists.iter_mut().enumerate() {
        list.sort_unstable();
        if *list != from_checks[v] {
            return Err(alist_err(
                0,
                format!(
                    "variable {} lists checks {:?} but checks list it in {:?}",
                    v + 1,
                    list.iter().map(|c| c + 1).collect::<Vec<_>>(),
                    from_checks[v].iter().map(|c| c + 1).collect::<Vec<_>>()
                ),
            ));
        }
    }

    TannerGraph::new(n, checks)
}

fn neighbor_list(
    line: usize,
    entries: &[usize],
    degree: usize,
    bound: usize,
    who: &str,
) -> Result<Vec<usize>> {
    let list: Vec<usize> = entries.iter().copied().filter(|&x| x != 0).collect();
    if list.len() != degree {
        return Err(alist_err(
            line,
            format!("{who} has degree {degree} but lists {} neighbors", list.len()),
        ));
    }
    if let Some(&bad) = list.iter().find(|&&x| x > bound) {
        return Err(alist_err(
            line,
            format!("{who} lists index {bad}, outside 1..={bound}"),
        ));
    }
    Ok(list.into_iter().map(|x| x - 1).collect())
}

impl TannerGraph {
    /// Serializes the graph structure as an alist (local codes are not
    /// part of the format; see [`TannerGraph::local_codes_sidecar`]).
    pub fn to_alist(&self) -> String {
        let n = self.num_variables();
        let j = self.num_checks();
        let max_v = (0..n).map(|v| self.variable_degree(v)).max().unwrap_or(0);
        let max_c = self.max_check_degree();
        let mut out = String::new();
        let join = |xs: &mut dyn Iterator<Item = usize>| {
            xs.map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
        };
        writeln!(out, "{n} {j}").unwrap();
        writeln!(out, "{max_v} {max_c}").unwrap();
        writeln!(out, "{}", join(&mut (0..n).map(|v| self.variable_degree(v)))).unwrap();
        writeln!(out, "{}", join(&mut (0..j).map(|c| self.check_degree(c)))).unwrap();
        for v in 0..n {
            let mut row: Vec<usize> = self.variable_checks(v).map(|c| c + 1).collect();
            row.resize(max_v, 0);
            writeln!(out, "{}", join(&mut row.into_iter())).unwrap();
        }
        for c in 0..j {
            let mut row: Vec<usize> = self.check_neighbors(c).iter().map(|v| v + 1).collect();
            row.resize(max_c, 0);
            writeln!(out, "{}", join(&mut row.into_iter())).unwrap();
        }
        out
    }

    /// Sidecar text for every non-SPC check.
    pub fn local_codes_sidecar(&self) -> String {
        let mut out = String::new();
        for c in 0..self.num_checks() {
            let code = self.local_code(c);
            if matches!(code, LocalCode::Spc) {
                continue;
            }
            let rows = code.to_bitstrings(self.check_degree(c));
            writeln!(out, "{} {}", c + 1, rows.join(" ")).unwrap();
        }
        out
    }
}

/// Attaches explicit local codes from sidecar text to a loaded graph.
pub fn load_local_codes(graph: &TannerGraph, text: &str) -> Result<TannerGraph> {
    let mut codes = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| Error::LocalCodeFile {
            line: i + 1,
            message,
        };
        let mut tokens = line.split_whitespace();
        let index: usize = tokens
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| err("expected a 1-indexed check number".into()))?;
        if index == 0 || index > graph.num_checks() {
            return Err(err(format!(
                "check {index} outside 1..={}",
                graph.num_checks()
            )));
        }
        let rows: Vec<&str> = tokens.collect();
        let code = LocalCode::from_bitstrings(&rows).map_err(|e| err(e.to_string()))?;
        codes.push((index - 1, code));
    }
    graph.replace_local_codes(codes)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SINGLE: &str = "3 1\n1 3\n1 1 1\n3\n1\n1\n1\n1 2 3\n";

    #[test]
    fn single_check() {
        let g = load_alist(SINGLE).unwrap();
        assert_eq!(g.num_variables(), 3);
        assert_eq!(g.num_checks(), 1);
        assert_eq!(g.check_degree(0), 3);
        assert_eq!(g.min_local_distance(), 2);
    }

    #[test]
    fn degree_mismatch() {
        let text = "3 1\n1 4\n1 1 1\n4\n1\n1\n1\n1 2 3\n";
        let err = load_alist(text).unwrap_err();
        assert!(matches!(err, Error::Alist { line: 8, .. }), "{err}");
    }

    #[test]
    fn malformed_header() {
        assert!(matches!(load_alist("3\n"), Err(Error::Alist { line: 1, .. })));
        assert!(matches!(load_alist("a b\n"), Err(Error::Alist { line: 1, .. })));
        assert!(load_alist("").is_err());
    }

    #[test]
    fn out_of_range_and_duplicates() {
        let oob = "3 1\n1 3\n1 1 1\n3\n1\n1\n1\n1 2 4\n";
        assert!(matches!(load_alist(oob), Err(Error::Alist { line: 8, .. })));
        let dup = "3 1\n1 3\n1 1 1\n3\n1\n1\n1\n1 2 2\n";
        assert!(load_alist(dup).is_err());
    }

    #[test]
    fn inconsistent_halves() {
        let text = "3 2\n1 2\n1 1 1\n2 1\n1\n2\n1\n1 2\n3\n";
        assert!(load_alist(text).is_err());
    }

    #[test]
    fn zero_padding_and_order_preserved() {
        let text = "4 2\n2 3\n1 1 2 1\n3 2\n1 0\n1 0\n2 1\n2 0\n3 1 2\n4 3\n";
        let g = load_alist(text).unwrap();
        assert_eq!(g.check_neighbors(0), &[2, 0, 1]);
        assert_eq!(g.check_neighbors(1), &[3, 2]);
        let again = load_alist(&g.to_alist()).unwrap();
        assert_eq!(again.check_neighbors(0), g.check_neighbors(0));
        assert_eq!(again.to_alist(), g.to_alist());
    }

    #[test]
    fn sidecar_round_trip() {
        let checks = vec![(0..8).collect::<Vec<_>>(), (4..12).collect::<Vec<_>>()];
        let g = TannerGraph::new(12, checks).unwrap();
        let with = load_local_codes(&g, "# hamming on the second check\n2 11111111 11110000 11001100 10101010\n")
            .unwrap();
        assert_eq!(with.local_code(1).min_distance(), 4);
        assert!(matches!(with.local_code(0), LocalCode::Spc));
        let text = with.local_codes_sidecar();
        let again = load_local_codes(&g, &text).unwrap();
        assert_eq!(again.local_code(1), with.local_code(1));
        assert!(load_local_codes(&g, "3 1111\n").is_err());
        assert!(load_local_codes(&g, "1 1111\n").is_err());
    }
}
