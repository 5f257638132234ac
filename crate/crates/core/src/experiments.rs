//! Monte-Carlo growth of `|LO|` and `|NLO|` with the height `h` over BSC
//! LLR ensembles for the all-zero codeword.
//!
//! One ensemble `Λ_p` is drawn per crossover probability and reused across
//! every height of the grid, so per-trial traces can be compared across
//! heights.

use std::io::{Read, Write};
use std::path::Path;
use std::time::Instant;

use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::certify::{min_deviation_cost, unit_weight_sweep, MARGINAL_TOLERANCE};
use crate::channel::{sample_llr_allzero, ChannelSpec};
use crate::devtree::WeightVector;
use crate::error::{Error, Result};
use crate::graph::TannerGraph;
use crate::scalar::convert_slice;

pub const DEFAULT_H_GRID: [usize; 7] = [4, 8, 16, 32, 64, 128, 320];

/// Default bound on `|p| · trials · edges · Σ heights` elementary steps.
pub const DEFAULT_WORK_CAP: u128 = 200_000_000_000;

pub const CSV_HEADER: &str = "p,h,trials,lo_count,nlo_count,marginal_count,wall_time_s";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub p: f64,
    pub h: usize,
    pub trials: u64,
    pub lo_count: u64,
    pub nlo_count: u64,
    /// Trials whose float decision at this height needed exact arithmetic.
    pub marginal_count: u64,
    /// Wall time of the whole ensemble for this `p` (all heights are
    /// certified together); 0 when timing is disabled.
    pub wall_time_s: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthConfig {
    pub p_list: Vec<f64>,
    pub trials: u64,
    /// Strictly ascending.
    pub h_grid: Vec<usize>,
    pub d: usize,
    pub seed: u64,
    /// `unit`, `geometric:<ρ>` or an explicit list, resolved per height.
    pub weights: String,
    /// Scale LLRs to `±1`. Decisions are unchanged; exact re-checks are cheaper.
    pub normalize: bool,
    /// When false, `wall_time_s` is 0 so that output is byte-reproducible.
    pub record_timing: bool,
    pub work_cap: u128,
}

impl Default for GrowthConfig {
    fn default() -> Self {
        GrowthConfig {
            p_list: vec![0.04],
            trials: 500,
            h_grid: DEFAULT_H_GRID.to_vec(),
            d: 2,
            seed: 0,
            weights: "unit".into(),
            normalize: true,
            record_timing: false,
            work_cap: DEFAULT_WORK_CAP,
        }
    }
}

impl GrowthConfig {
    fn validate(&self, g: &TannerGraph) -> Result<()> {
        if self.h_grid.is_empty()
            || self.h_grid[0] == 0
            || self.h_grid.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(Error::Precondition("h grid must be positive and strictly ascending".into()));
        }
        if self.d < 2 || self.d > g.min_check_degree() {
            return Err(Error::InvalidDegree {
                d: self.d,
                reason: format!("must lie in 2..={}", g.min_check_degree()),
            });
        }
        let work = self.estimated_work(g);
        if work > self.work_cap {
            return Err(Error::ResourceGuard(format!(
                "estimated {work} steps exceeds the cap of {}",
                self.work_cap
            )));
        }
        Ok(())
    }

    fn is_unit(&self) -> bool {
        self.weights.trim().eq_ignore_ascii_case("unit")
    }

    /// Elementary DP steps the run will take (one sweep per trial for unit
    /// weights, one table per height otherwise).
    pub fn estimated_work(&self, g: &TannerGraph) -> u128 {
        let heights: u128 = if self.is_unit() {
            self.h_grid.last().copied().unwrap_or(0) as u128
        } else {
            self.h_grid.iter().map(|&h| h as u128).sum()
        };
        self.p_list.len() as u128 * self.trials as u128 * g.num_edges() as u128 * heights
    }
}

/// Per-trial certification history across the grid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialTrace {
    pub trial: u64,
    /// Smallest grid height at which LO certifies.
    pub lo_first: Option<usize>,
    pub nlo_first: Option<usize>,
    /// Certified at some height but refuted at a larger grid height.
    pub lo_nonmonotone: bool,
    pub nlo_nonmonotone: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PSummary {
    pub p: f64,
    pub traces: Vec<TrialTrace>,
    pub lo_nonmonotone: u64,
    pub nlo_nonmonotone: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthReport {
    /// p-major, h-minor.
    pub records: Vec<ExperimentRecord>,
    pub summaries: Vec<PSummary>,
}

struct TrialOutcome {
    lo: Vec<bool>,
    nlo: Vec<bool>,
    marginal: Vec<bool>,
}

fn positive_float(x: f64) -> (bool, bool) {
    (x > 0.0, x.abs() < MARGINAL_TOLERANCE)
}

fn run_trial(g: &TannerGraph, cfg: &GrowthConfig, spec: &ChannelSpec, trial: u64) -> Result<TrialOutcome> {
    let llr = sample_llr_allzero(g.num_variables(), spec, trial)?.values;
    let k = cfg.h_grid.len();
    let mut out = TrialOutcome {
        lo: vec![false; k],
        nlo: vec![false; k],
        marginal: vec![false; k],
    };
    if cfg.is_unit() {
        let points = unit_weight_sweep::<f64>(g, &llr, cfg.d, &cfg.h_grid)?;
        for (i, pt) in points.iter().enumerate() {
            let (lo, ml) = positive_float(pt.lo_min);
            let (nlo, mn) = positive_float(pt.nlo_min);
            out.lo[i] = lo;
            out.nlo[i] = nlo;
            out.marginal[i] = ml || mn;
        }
        // Exact sweeps get expensive with height, so only the marginal
        // heights are revisited.
        let marginal: Vec<usize> = (0..k).filter(|&i| out.marginal[i]).collect();
        if !marginal.is_empty() {
            let exact: Vec<BigRational> = convert_slice(&llr);
            let zero = BigRational::from_integer(0.into());
            let heights: Vec<usize> = marginal.iter().map(|&i| cfg.h_grid[i]).collect();
            let points = unit_weight_sweep(g, &exact, cfg.d, &heights)?;
            for (&i, pt) in marginal.iter().zip(&points) {
                out.lo[i] = pt.lo_min > zero;
                out.nlo[i] = pt.nlo_min > zero;
            }
        }
        return Ok(out);
    }
    let mut exact: Option<Vec<BigRational>> = None;
    for (i, &h) in cfg.h_grid.iter().enumerate() {
        let w = WeightVector::parse(&cfg.weights, Some(h))?;
        for reduced in [false, true] {
            let m = min_deviation_cost::<f64>(g, &llr, &w, cfg.d, reduced)?.min_cost;
            let (mut ok, marginal) = positive_float(m);
            if marginal {
                out.marginal[i] = true;
                let ex = exact.get_or_insert_with(|| convert_slice(&llr));
                let m = min_deviation_cost(g, ex, &w, cfg.d, reduced)?.min_cost;
                ok = m > BigRational::from_integer(0.into());
            }
            if reduced {
                out.nlo[i] = ok;
            } else {
                out.lo[i] = ok;
            }
        }
    }
    Ok(out)
}

fn trace(grid: &[usize], certified: &[bool]) -> (Option<usize>, bool) {
    let first = certified.iter().position(|&c| c);
    let nonmonotone = first.is_some_and(|i| certified[i..].iter().any(|&c| !c));
    (first.map(|i| grid[i]), nonmonotone)
}

/// Certifies the all-zero codeword for every `(p, trial, h)` under LO and
/// strong LO. Trials run in parallel and are reduced in trial order.
pub fn run_growth_experiment(g: &TannerGraph, cfg: &GrowthConfig) -> Result<GrowthReport> {
    cfg.validate(g)?;
    if !cfg.is_unit() {
        // Fail fast on a malformed weight spec.
        WeightVector::parse(&cfg.weights, Some(cfg.h_grid[0]))?;
    }
    let mut records = Vec::new();
    let mut summaries = Vec::new();
    for &p in &cfg.p_list {
        let spec = ChannelSpec::bsc(p, cfg.seed)?.normalized(cfg.normalize);
        let start = Instant::now();
        let outcomes = (0..cfg.trials)
            .into_par_iter()
            .map(|trial| run_trial(g, cfg, &spec, trial))
            .collect::<Result<Vec<_>>>()?;
        let wall = if cfg.record_timing {
            start.elapsed().as_secs_f64()
        } else {
            0.0
        };
        for (i, &h) in cfg.h_grid.iter().enumerate() {
            records.push(ExperimentRecord {
                p,
                h,
                trials: cfg.trials,
                lo_count: outcomes.iter().filter(|o| o.lo[i]).count() as u64,
                nlo_count: outcomes.iter().filter(|o| o.nlo[i]).count() as u64,
                marginal_count: outcomes.iter().filter(|o| o.marginal[i]).count() as u64,
                wall_time_s: wall,
            });
        }
        let traces: Vec<TrialTrace> = outcomes
            .iter()
            .zip(0u64..)
            .map(|(o, trial)| {
                let (lo_first, lo_nonmonotone) = trace(&cfg.h_grid, &o.lo);
                let (nlo_first, nlo_nonmonotone) = trace(&cfg.h_grid, &o.nlo);
                TrialTrace {
                    trial,
                    lo_first,
                    nlo_first,
                    lo_nonmonotone,
                    nlo_nonmonotone,
                }
            })
            .collect();
        summaries.push(PSummary {
            p,
            lo_nonmonotone: traces.iter().filter(|t| t.lo_nonmonotone).count() as u64,
            nlo_nonmonotone: traces.iter().filter(|t| t.nlo_nonmonotone).count() as u64,
            traces,
        });
    }
    Ok(GrowthReport { records, summaries })
}

/// Times two trials and extrapolates to the full configuration.
pub fn estimate_seconds(g: &TannerGraph, cfg: &GrowthConfig) -> Result<f64> {
    cfg.validate(g)?;
    let probe = GrowthConfig {
        p_list: vec![cfg.p_list.first().copied().unwrap_or(0.04)],
        trials: 2,
        ..cfg.clone()
    };
    let start = Instant::now();
    let spec = ChannelSpec::bsc(probe.p_list[0], cfg.seed)?.normalized(cfg.normalize);
    for trial in 0..probe.trials {
        run_trial(g, &probe, &spec, trial)?;
    }
    let per_trial = start.elapsed().as_secs_f64() / probe.trials as f64;
    let workers = rayon::current_num_threads().max(1) as f64;
    Ok(per_trial * cfg.trials as f64 * cfg.p_list.len() as f64 / workers)
}

pub fn write_csv<W: Write>(mut out: W, records: &[ExperimentRecord]) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.p, r.h, r.trials, r.lo_count, r.nlo_count, r.marginal_count, r.wall_time_s
        )?;
    }
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<ExperimentRecord>> {
    let mut reader = csv::Reader::from_reader(input);
    let header: Vec<String> = reader.headers()?.iter().map(str::to_owned).collect();
    if header.join(",") != CSV_HEADER {
        return Err(Error::Parse(format!("unexpected header {header:?}")));
    }
    reader
        .deserialize()
        .map(|r| r.map_err(Error::from))
        .collect()
}

/// Writes records to `destination`, in the order given.
pub fn emit_csv(records: &[ExperimentRecord], destination: &Path) -> Result<()> {
    let file = std::fs::File::create(destination)?;
    let mut out = std::io::BufWriter::new(file);
    write_csv(&mut out, records)?;
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate_regular;

    fn small_cfg() -> GrowthConfig {
        GrowthConfig {
            p_list: vec![0.02, 0.08],
            trials: 40,
            h_grid: vec![2, 4, 8],
            ..GrowthConfig::default()
        }
    }

    #[test]
    fn counts_are_ordered_and_bounded() {
        let g = generate_regular(60, 3, 6, 6, 0).unwrap();
        let report = run_growth_experiment(&g, &small_cfg()).unwrap();
        assert_eq!(report.records.len(), 6);
        for r in &report.records {
            assert!(r.nlo_count <= r.lo_count);
            assert!(r.lo_count <= r.trials);
        }
        assert_eq!(
            report.records.iter().map(|r| (r.p, r.h)).collect::<Vec<_>>(),
            vec![(0.02, 2), (0.02, 4), (0.02, 8), (0.08, 2), (0.08, 4), (0.08, 8)]
        );
    }

    #[test]
    fn almost_noiseless_channel_certifies_everything() {
        let g = generate_regular(60, 3, 6, 6, 1).unwrap();
        let cfg = GrowthConfig {
            p_list: vec![1e-6],
            trials: 30,
            h_grid: vec![1, 2, 3],
            ..GrowthConfig::default()
        };
        let report = run_growth_experiment(&g, &cfg).unwrap();
        assert!(report.records.iter().all(|r| r.lo_count == 30 && r.nlo_count == 30));
    }

    #[test]
    fn sweep_path_matches_per_height_tables() {
        let g = generate_regular(60, 3, 6, 6, 2).unwrap();
        let unit = run_growth_experiment(&g, &small_cfg()).unwrap();
        let cfg = GrowthConfig {
            weights: "1".into(),
            ..small_cfg()
        };
        // A one-entry list cannot match every height, so use an explicit
        // constant spec resolved per height instead.
        assert!(run_growth_experiment(&g, &cfg).is_err());
        let cfg = GrowthConfig {
            weights: "geometric:1".into(),
            ..small_cfg()
        };
        let general = run_growth_experiment(&g, &cfg).unwrap();
        assert_eq!(unit.records, general.records);
        assert_eq!(unit.summaries, general.summaries);
    }

    #[test]
    fn reproducible_bytes() {
        let g = generate_regular(60, 3, 6, 6, 3).unwrap();
        let mut a = Vec::new();
        let mut b = Vec::new();
        write_csv(&mut a, &run_growth_experiment(&g, &small_cfg()).unwrap().records).unwrap();
        write_csv(&mut b, &run_growth_experiment(&g, &small_cfg()).unwrap().records).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn traces_are_consistent_with_counts() {
        let g = generate_regular(60, 3, 6, 6, 4).unwrap();
        let report = run_growth_experiment(&g, &small_cfg()).unwrap();
        for s in &report.summaries {
            let last = report
                .records
                .iter()
                .rfind(|r| r.p == s.p)
                .unwrap();
            let never = s.traces.iter().filter(|t| t.lo_first.is_none()).count() as u64;
            assert!(last.lo_count + never <= last.trials + s.lo_nonmonotone);
        }
    }

    #[test]
    fn resource_guard_and_preconditions() {
        let g = generate_regular(60, 3, 6, 6, 0).unwrap();
        let cfg = GrowthConfig {
            work_cap: 10,
            ..small_cfg()
        };
        assert!(matches!(run_growth_experiment(&g, &cfg), Err(Error::ResourceGuard(_))));
        let cfg = GrowthConfig {
            h_grid: vec![4, 2],
            ..small_cfg()
        };
        assert!(run_growth_experiment(&g, &cfg).is_err());
        let cfg = GrowthConfig { d: 7, ..small_cfg() };
        assert!(run_growth_experiment(&g, &cfg).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let mut buf = Vec::new();
        write_csv(&mut buf, &[]).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap(), format!("{CSV_HEADER}\n"));
        assert!(read_csv(buf.as_slice()).unwrap().is_empty());
        let records = vec![
            ExperimentRecord {
                p: 0.04,
                h: 4,
                trials: 10,
                lo_count: 9,
                nlo_count: 8,
                marginal_count: 0,
                wall_time_s: 0.125,
            },
            ExperimentRecord {
                p: 1e-6,
                h: 320,
                trials: 10,
                lo_count: 10,
                nlo_count: 10,
                marginal_count: 1,
                wall_time_s: 0.0,
            },
        ];
        let mut buf = Vec::new();
        write_csv(&mut buf, &records).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(text.lines().count(), 3);
        assert!(text.contains("0.000001,320"));
        assert_eq!(read_csv(buf.as_slice()).unwrap(), records);
    }

    #[test]
    fn emit_to_unwritable_destination_fails() {
        assert!(emit_csv(&[], Path::new("/nonexistent-dir/x.csv")).is_err());
    }
}
