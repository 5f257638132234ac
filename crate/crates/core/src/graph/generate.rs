//! Seeded random `(d_L, d_R)`-regular Tanner graphs with a girth floor.
//!
//! Edges are added variable by variable. A candidate check is admissible if
//! it has a free socket, is not already adjacent, and sits at distance at
//! least `min_girth - 1` from the variable in the partial graph (so the new
//! edge closes no cycle shorter than `min_girth`). Among admissible checks
//! the ones with the most free sockets are preferred, ties broken uniformly
//! at random. A dead end restarts the attempt on a fresh RNG stream.

use std::collections::VecDeque;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::TannerGraph;
use crate::error::{Error, Result};

pub const DEFAULT_ATTEMPTS: usize = 500;

pub fn generate_regular(
    n: usize,
    d_l: usize,
    d_r: usize,
    min_girth: usize,
    seed: u64,
) -> Result<TannerGraph> {
    generate_regular_with_budget(n, d_l, d_r, min_girth, seed, DEFAULT_ATTEMPTS)
}

pub fn generate_regular_with_budget(
    n: usize,
    d_l: usize,
    d_r: usize,
    min_girth: usize,
    seed: u64,
    attempts: usize,
) -> Result<TannerGraph> {
    if n == 0 || d_l == 0 || d_r < 2 {
        return Err(Error::Infeasible(format!(
            "need n >= 1, d_L >= 1 and d_R >= 2 (got n={n}, d_L={d_l}, d_R={d_r})"
        )));
    }
    if !(n * d_l).is_multiple_of(d_r) {
        return Err(Error::Infeasible(format!(
            "n * d_L = {} is not divisible by d_R = {d_r}",
            n * d_l
        )));
    }
    if min_girth < 4 || !min_girth.is_multiple_of(2) {
        return Err(Error::Infeasible(format!(
            "min_girth must be even and >= 4, got {min_girth}"
        )));
    }
    let j = n * d_l / d_r;
    if d_r > n || d_l > j {
        return Err(Error::Infeasible(format!(
            "{n} variables and {j} checks cannot host degrees ({d_l}, {d_r}) without parallel edges"
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..attempts {
        rng.set_stream(attempt as u64);
        if let Some(checks) = try_build(n, j, d_l, d_r, min_girth, &mut rng) {
            let g = TannerGraph::new(n, checks)?;
            debug_assert!(g.girth().is_none_or(|girth| girth >= min_girth));
            return Ok(g);
        }
    }
    Err(Error::RetryBudgetExhausted {
        girth: min_girth,
        attempts,
    })
}

fn try_build(
    n: usize,
    j: usize,
    d_l: usize,
    d_r: usize,
    min_girth: usize,
    rng: &mut ChaCha8Rng,
) -> Option<Vec<Vec<usize>>> {
    let mut checks: Vec<Vec<usize>> = vec![Vec::with_capacity(d_r); j];
    let mut var_checks: Vec<Vec<usize>> = vec![Vec::with_capacity(d_l); n];
    // Checks within distance < min_girth - 1 of the current variable.
    let mut near = vec![usize::MAX; j];
    let mut stamp = 0usize;
    let mut seen_var = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    let mut candidates = Vec::with_capacity(j);

    for v in 0..n {
        for _ in 0..d_l {
            stamp += 1;
            mark_near(
                v,
                min_girth,
                &checks,
                &var_checks,
                &mut near,
                &mut seen_var,
                stamp,
                &mut queue,
            );
            let mut best_free = 0;
            candidates.clear();
            for c in 0..j {
                let free = d_r - checks[c].len();
                if free == 0 || near[c] == stamp {
                    continue;
                }
                if free > best_free {
                    best_free = free;
                    candidates.clear();
                }
                if free == best_free {
                    candidates.push(c);
                }
            }
            let &c = candidates.choose(rng)?;
            checks[c].push(v);
            var_checks[v].push(c);
        }
    }
    Some(checks)
}

/// Stamps every check reachable from `v` by a path of length at most
/// `min_girth - 3` (those checks would close a cycle shorter than
/// `min_girth`). Adjacent checks are always stamped.
#[allow(clippy::too_many_arguments)]
fn mark_near(
    v: usize,
    min_girth: usize,
    checks: &[Vec<usize>],
    var_checks: &[Vec<usize>],
    near: &mut [usize],
    seen_var: &mut [usize],
    stamp: usize,
    queue: &mut VecDeque<(usize, usize)>,
) {
    let limit = min_girth - 3;
    queue.clear();
    queue.push_back((v, 0));
    seen_var[v] = stamp;
    while let Some((u, dist)) = queue.pop_front() {
        for &c in &var_checks[u] {
            if dist + 1 > limit || near[c] == stamp {
                continue;
            }
            near[c] = stamp;
            if dist + 2 < limit {
                for &w in &checks[c] {
                    if seen_var[w] != stamp {
                        seen_var[w] = stamp;
                        queue.push_back((w, dist + 2));
                    }
                }
            }
        }
    }
}

/// Random irregular graph for oracle tests: `j` checks whose degrees are
/// drawn uniformly from `min_check_degree..=max_check_degree` (raised where
/// needed so that the total reaches `n`). A random permutation of the
/// variables is dealt into random check slots so every variable is covered;
/// the remaining slots take distinct random variables, and each check lists
/// its variables in random order.
pub fn generate_irregular(
    n: usize,
    j: usize,
    min_check_degree: usize,
    max_check_degree: usize,
    seed: u64,
) -> Result<TannerGraph> {
    if j == 0 || min_check_degree < 2 || min_check_degree > max_check_degree || max_check_degree > n {
        return Err(Error::Infeasible(format!(
            "cannot place {j} checks of degree {min_check_degree}..={max_check_degree} on {n} variables"
        )));
    }
    if j * max_check_degree < n {
        return Err(Error::Infeasible(format!(
            "{j} checks of degree <= {max_check_degree} cannot cover {n} variables"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut degrees: Vec<usize> = (0..j)
        .map(|_| rng.random_range(min_check_degree..=max_check_degree))
        .collect();
    while degrees.iter().sum::<usize>() < n {
        let open: Vec<usize> = (0..j).filter(|&c| degrees[c] < max_check_degree).collect();
        degrees[open[rng.random_range(0..open.len())]] += 1;
    }
    let mut slots: Vec<usize> = degrees
        .iter()
        .enumerate()
        .flat_map(|(c, &d)| std::iter::repeat_n(c, d))
        .collect();
    slots.shuffle(&mut rng);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut checks: Vec<Vec<usize>> = vec![Vec::new(); j];
    for (&c, &v) in slots.iter().zip(&order) {
        checks[c].push(v);
    }
    for (check, &deg) in checks.iter_mut().zip(&degrees) {
        let mut rest: Vec<usize> = (0..n).filter(|v| !check.contains(v)).collect();
        rest.shuffle(&mut rng);
        check.extend(rest.into_iter().take(deg - check.len()));
        check.shuffle(&mut rng);
    }
    TannerGraph::new(n, checks)
}
