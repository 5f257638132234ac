//! Brute-force minimum deviation cost by explicit enumeration, and a suite
//! comparing it against the dynamic program on random small graphs.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{min_deviation_cost, MinCost};
use crate::devtree::{count_d_trees, enumerate_d_trees, project, WeightVector};
use crate::error::{Error, Result};
use crate::graph::{generate_irregular, TannerGraph};

/// Every distinct deviation of one `(w, d, reduced)` family, over all roots,
/// stored as integer numerators over a common denominator.
#[derive(Clone, Debug)]
pub struct DeviationSet {
    /// `(root, numerators, denominator)`, in root order.
    entries: Vec<(usize, Vec<i128>, i128)>,
    trees: usize,
}

impl DeviationSet {
    pub fn enumerate(
        g: &TannerGraph,
        w: &WeightVector,
        d: usize,
        reduced: bool,
        cap: usize,
    ) -> Result<Self> {
        let h = w.h();
        let mut entries: Vec<(usize, Vec<i128>, i128)> = Vec::new();
        let mut trees = 0;
        for r in 0..g.num_variables() {
            let mut seen = std::collections::HashSet::new();
            for t in enumerate_d_trees(g, r, h, d, reduced, cap)? {
                trees += 1;
                let dev = project(g, &t, w)?;
                if !seen.insert(dev.vector.clone()) {
                    continue;
                }
                let den = dev
                    .vector
                    .iter()
                    .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                let nums = dev
                    .vector
                    .iter()
                    .map(|x| (x.numer() * (&den / x.denom())).to_i128())
                    .collect::<Option<Vec<_>>>();
                match (nums, den.to_i128()) {
                    (Some(nums), Some(den)) => entries.push((r, nums, den)),
                    _ => {
                        return Err(Error::ResourceGuard(
                            "deviation denominators overflow 128 bits".into(),
                        ))
                    }
                }
            }
        }
        Ok(DeviationSet { entries, trees })
    }

    /// Number of distinct deviations.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of trees enumerated (before deduplication).
    pub fn trees(&self) -> usize {
        self.trees
    }

    /// Minimum of `⟨λ, β⟩`; the root is the lowest index attaining it.
    pub fn min_cost(&self, llr: &[i64]) -> MinCost<BigRational> {
        let mut best: Option<(i128, i128, usize)> = None;
        for (r, nums, den) in &self.entries {
            let dot: i128 = nums.iter().zip(llr).map(|(a, &l)| a * l as i128).sum();
            let better = match best {
                None => true,
                Some((bn, bd, _)) => dot * bd < bn * den,
            };
            if better {
                best = Some((dot, *den, *r));
            }
        }
        let (num, den, root) = best.expect("non-empty deviation set");
        MinCost {
            min_cost: BigRational::new(num.into(), den.into()),
            witness_root: root,
        }
    }
}

/// Enumeration minimum for integer LLRs.
pub fn enumeration_min_cost(
    g: &TannerGraph,
    llr0: &[i64],
    w: &WeightVector,
    d: usize,
    reduced: bool,
    cap: usize,
) -> Result<MinCost<BigRational>> {
    Ok(DeviationSet::enumerate(g, w, d, reduced, cap)?.min_cost(llr0))
}

#[derive(Clone, Debug)]
pub struct OracleSuiteConfig {
    pub graphs: usize,
    pub max_n: usize,
    pub max_h: usize,
    pub llrs_per_case: usize,
    pub degrees: Vec<usize>,
    /// Largest number of trees enumerated for one case (summed over roots).
    pub tree_cap: usize,
    pub seed: u64,
}

impl Default for OracleSuiteConfig {
    fn default() -> Self {
        OracleSuiteConfig {
            graphs: 50,
            max_n: 12,
            max_h: 3,
            llrs_per_case: 100,
            degrees: vec![2, 3],
            tree_cap: 20_000,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleMismatch {
    pub graph: usize,
    pub h: usize,
    pub d: usize,
    pub reduced: bool,
    pub llr: Vec<i64>,
    pub dp: MinCost<BigRational>,
    pub oracle: MinCost<BigRational>,
}

#[derive(Clone, Debug, Default)]
pub struct OracleReport {
    pub graphs: usize,
    /// Compared `(graph, h, d, reduced)` families.
    pub cases: usize,
    /// Compared LLR vectors over all cases.
    pub instances: usize,
    /// `cases_by_h[h - 1]`.
    pub cases_by_h: Vec<usize>,
    /// Families skipped because even `h = 1` exceeds the tree cap.
    pub skipped: usize,
    pub mismatches: Vec<OracleMismatch>,
}

impl OracleReport {
    fn merge(mut self, other: OracleReport) -> OracleReport {
        self.graphs += other.graphs;
        self.cases += other.cases;
        self.instances += other.instances;
        self.skipped += other.skipped;
        if self.cases_by_h.len() < other.cases_by_h.len() {
            self.cases_by_h.resize(other.cases_by_h.len(), 0);
        }
        for (a, b) in self.cases_by_h.iter_mut().zip(&other.cases_by_h) {
            *a += b;
        }
        self.mismatches.extend(other.mismatches);
        self
    }
}

fn random_llr(rng: &mut ChaCha8Rng, n: usize) -> Vec<i64> {
    // Mix of sign patterns (±1, where exact ties are common) and wider
    // integer ranges.
    if rng.random_bool(0.3) {
        (0..n).map(|_| if rng.random_bool(0.7) { 1 } else { -1 }).collect()
    } else {
        (0..n).map(|_| rng.random_range(-6..=10)).collect()
    }
}

fn run_graph(cfg: &OracleSuiteConfig, index: usize) -> Result<OracleReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(index as u64);
    let n = rng.random_range(4..=cfg.max_n.max(4));
    let max_check = n.min(4);
    let min_check = cfg.degrees.iter().copied().max().unwrap_or(2).clamp(2, max_check);
    let j = rng.random_range(2..=(n / 2 + 1).max(2));
    let j = j.max(n.div_ceil(max_check));
    let g = generate_irregular(n, j, min_check, max_check, rng.random())?;
    let mut report = OracleReport {
        graphs: 1,
        cases_by_h: vec![0; cfg.max_h],
        ..OracleReport::default()
    };
    for &d in &cfg.degrees {
        for reduced in [false, true] {
            let total = |h: usize| -> Result<u128> {
                (0..n).try_fold(0u128, |acc, r| {
                    Ok(acc.saturating_add(count_d_trees(&g, r, h, d, reduced)?))
                })
            };
            let mut h = 0;
            for cand in (1..=cfg.max_h).rev() {
                if total(cand)? <= cfg.tree_cap as u128 {
                    h = cand;
                    break;
                }
            }
            if h == 0 {
                report.skipped += 1;
                continue;
            }
            let levels: Vec<i64> = (0..h).map(|_| rng.random_range(1..=4)).collect();
            let w = WeightVector::from_integers(&levels)?;
            let set = DeviationSet::enumerate(&g, &w, d, reduced, cfg.tree_cap)?;
            report.cases += 1;
            report.cases_by_h[h - 1] += 1;
            for _ in 0..cfg.llrs_per_case {
                let llr = random_llr(&mut rng, n);
                let exact: Vec<BigRational> =
                    llr.iter().map(|&x| BigRational::from_integer(x.into())).collect();
                let dp = min_deviation_cost(&g, &exact, &w, d, reduced)?;
                let oracle = set.min_cost(&llr);
                report.instances += 1;
                if dp != oracle {
                    report.mismatches.push(OracleMismatch {
                        graph: index,
                        h,
                        d,
                        reduced,
                        llr,
                        dp,
                        oracle,
                    });
                }
            }
        }
    }
    Ok(report)
}

/// Compares the dynamic program with enumeration (exact rationals, value
/// and witness root) on `cfg.graphs` random irregular graphs. For each
/// graph and `(d, reduced)` the largest height up to `max_h` whose trees fit
/// the cap is used.
pub fn run_oracle_suite(cfg: &OracleSuiteConfig) -> Result<OracleReport> {
    if cfg.max_h == 0 || cfg.max_n < 4 {
        return Err(Error::Precondition("oracle suite needs max_h >= 1 and max_n >= 4".into()));
    }
    let reports = (0..cfg.graphs)
        .into_par_iter()
        .map(|i| run_graph(cfg, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(reports.into_iter().fold(
        OracleReport {
            cases_by_h: vec![0; cfg.max_h],
            ..OracleReport::default()
        },
        OracleReport::merge,
    ))
}
