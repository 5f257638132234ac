//! Falsification harnesses for the inclusion results: the degree hierarchy
//! (LO at `d` implies LO at `d + 1`), the height hierarchy for strong LO
//! under k-legal weight extensions, strong LO implying LO, and ML
//! sufficiency of local optimality when `d <= d*`.
//!
//! Float-mode decisions whose minimum cost is within `1e-9` of zero are
//! re-decided in exact arithmetic before they can count as violations.

use std::fmt;

use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::certify::{certify_zero, Certificate, CertificateKind, CertifyOptions, NumericMode};
use crate::channel::{negate_relative_values, sample_llr_allzero, ChannelSpec};
use crate::devtree::WeightVector;
use crate::error::{Error, Result};
use crate::graph::TannerGraph;
use crate::scalar::convert_slice;

/// Largest code dimension the exhaustive ML decoder accepts.
pub const MAX_ML_DIMENSION: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Theorem {
    /// `LO(h, w, d) ⊆ LO(h, w, d + 1)`.
    DegreeHierarchy,
    /// `NLO(h, w, d) ⊆ NLO(k h, w̄, d)` for k-legal extensions `w̄`.
    HeightHierarchy,
    /// `NLO(h, w, d) ⊆ LO(h, w, d)`.
    StrongImpliesLo,
    /// Certified (with `d <= d*`) implies unique ML codeword.
    MlSufficiency,
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Theorem::DegreeHierarchy => "degree-hierarchy",
            Theorem::HeightHierarchy => "height-hierarchy",
            Theorem::StrongImpliesLo => "strong-implies-lo",
            Theorem::MlSufficiency => "ml-sufficiency",
        })
    }
}

/// Where an LLR vector came from, enough to rebuild it exactly.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Provenance {
    /// `sample_llr_allzero(n, spec, trial)`.
    Channel { spec: ChannelSpec, trial: u64 },
    /// `λ_i = +1` if bit `i` of the pattern is 0, else `-1`.
    SignPattern(u64),
    /// Supplied directly by the caller.
    Explicit,
}

impl Provenance {
    /// Rebuilds the LLR vector (not available for explicit inputs).
    pub fn replay(&self, n: usize) -> Result<Vec<f64>> {
        match self {
            Provenance::Channel { spec, trial } => Ok(sample_llr_allzero(n, spec, *trial)?.values),
            Provenance::SignPattern(bits) => Ok(sign_pattern(n, *bits)),
            Provenance::Explicit => Err(Error::Precondition(
                "explicit LLR vectors cannot be replayed".into(),
            )),
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Channel { spec, trial } => {
                write!(f, "{}:seed={}:trial={trial}", spec.kind, spec.seed)
            }
            Provenance::SignPattern(bits) => write!(f, "signs:{bits:#x}"),
            Provenance::Explicit => f.write_str("explicit"),
        }
    }
}

pub fn sign_pattern(n: usize, bits: u64) -> Vec<f64> {
    (0..n)
        .map(|i| if (bits >> i) & 1 == 1 { -1.0 } else { 1.0 })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub provenance: Provenance,
    /// The parameter pair, e.g. `d=2->3` or `h=2->4`.
    pub params: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InclusionReport {
    pub theorem: Theorem,
    /// LLR vectors examined.
    pub instances: u64,
    /// Instances where the premise held (the inclusion was actually tested).
    pub premise_held: u64,
    pub violations: Vec<Violation>,
    /// Float decisions that needed exact re-adjudication.
    pub marginal: u64,
    /// Whether ML sufficiency applies to the tested parameters (`d <= d*`).
    pub ml_applies: bool,
    pub notes: Vec<String>,
}

impl InclusionReport {
    pub fn new(theorem: Theorem) -> Self {
        InclusionReport {
            theorem,
            instances: 0,
            premise_held: 0,
            violations: Vec::new(),
            marginal: 0,
            ml_applies: false,
            notes: Vec::new(),
        }
    }

    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    /// Associative merge; `other`'s violations follow `self`'s.
    pub fn merge(mut self, other: InclusionReport) -> InclusionReport {
        self.instances += other.instances;
        self.premise_held += other.premise_held;
        self.violations.extend(other.violations);
        self.marginal += other.marginal;
        self.ml_applies &= other.ml_applies;
        for note in other.notes {
            if !self.notes.contains(&note) {
                self.notes.push(note);
            }
        }
        self
    }

    pub const CSV_HEADER: &'static str = "theorem,instances,premise_held,violations,marginal,ml_applies";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.theorem,
            self.instances,
            self.premise_held,
            self.violations.len(),
            self.marginal,
            self.ml_applies
        )
    }

    /// CSV of the violations: `provenance,params,detail`.
    pub fn violations_csv(&self) -> String {
        let mut out = String::from("provenance,params,detail\n");
        for v in &self.violations {
            out.push_str(&format!("{},{},{}\n", v.provenance, v.params, v.detail.replace(',', ";")));
        }
        out
    }

    pub fn summary(&self) -> String {
        let mut s = format!(
            "{}: {} instances, premise held in {}, {} violations, {} marginal (re-decided exactly)",
            self.theorem,
            self.instances,
            self.premise_held,
            self.violations.len(),
            self.marginal
        );
        for note in &self.notes {
            s.push_str("\n  note: ");
            s.push_str(note);
        }
        s
    }
}

/// A decision, re-derived in exact arithmetic when the float margin is
/// within tolerance.
struct Decided {
    cert: Certificate,
    marginal: bool,
}

fn decide(
    g: &TannerGraph,
    llr0: &[f64],
    w: &WeightVector,
    d: usize,
    kind: CertificateKind,
    mode: NumericMode,
) -> Result<Decided> {
    let opts = CertifyOptions {
        mode,
        ..CertifyOptions::default()
    };
    let cert = certify_zero(g, llr0, w, d, kind, &opts)?;
    if cert.marginal {
        let exact = certify_zero(g, llr0, w, d, kind, &CertifyOptions::exact())?;
        return Ok(Decided {
            cert: exact,
            marginal: true,
        });
    }
    Ok(Decided {
        cert,
        marginal: false,
    })
}

fn relative_llr(g: &TannerGraph, x: &[u8], llr: &[f64]) -> Result<Vec<f64>> {
    if !g.is_codeword(x)? {
        return Err(Error::NotACodeword);
    }
    negate_relative_values(x, llr)
}

/// Certifies `x` for every `d` in `d_range` (ascending) and reports any
/// `d` certified whose successor is refuted. The inclusion is structural
/// and is tested up to the check degree; ML sufficiency additionally needs
/// `d <= d*`, which the report records separately.
#[allow(clippy::too_many_arguments)]
pub fn check_degree_chain(
    g: &TannerGraph,
    x: &[u8],
    llr: &[f64],
    w: &WeightVector,
    d_range: &[usize],
    mode: NumericMode,
    provenance: Provenance,
) -> Result<InclusionReport> {
    if d_range.is_empty() || d_range.windows(2).any(|p| p[1] != p[0] + 1) {
        return Err(Error::Precondition("d_range must be consecutive and ascending".into()));
    }
    let max_d = *d_range.last().expect("non-empty");
    if d_range[0] < 2 || max_d > g.min_check_degree() {
        return Err(Error::InvalidDegree {
            d: max_d,
            reason: format!(
                "degree chain must lie in 2..={} (minimum check degree)",
                g.min_check_degree()
            ),
        });
    }
    let llr0 = relative_llr(g, x, llr)?;
    let mut report = InclusionReport::new(Theorem::DegreeHierarchy);
    report.instances = 1;
    report.ml_applies = max_d <= g.min_local_distance();
    if !report.ml_applies {
        report.notes.push(format!(
            "chain extends beyond d* = {}: inclusion is structural, ML sufficiency not implied there",
            g.min_local_distance()
        ));
    }
    let mut prev: Option<(usize, bool)> = None;
    for &d in d_range {
        let decided = decide(g, &llr0, w, d, CertificateKind::Lo, mode)?;
        report.marginal += u64::from(decided.marginal);
        let certified = decided.cert.is_certified();
        if let Some((pd, true)) = prev {
            report.premise_held += 1;
            if !certified {
                report.violations.push(Violation {
                    provenance,
                    params: format!("d={pd}->{d}"),
                    detail: format!("min cost at d={d}: {}", decided.cert.min_cost),
                });
            }
        }
        prev = Some((d, certified));
    }
    Ok(report)
}

/// If `x` is strongly locally optimal at `(h, w)`, checks strong local
/// optimality at `(k h, w̄)` for each extension `w̄ = α_1 w ∘ ... ∘ α_k w`.
#[allow(clippy::too_many_arguments)]
pub fn check_height_chain(
    g: &TannerGraph,
    x: &[u8],
    llr: &[f64],
    w: &WeightVector,
    alphas: &[Vec<BigRational>],
    d: usize,
    mode: NumericMode,
    provenance: Provenance,
) -> Result<InclusionReport> {
    let llr0 = relative_llr(g, x, llr)?;
    let mut report = InclusionReport::new(Theorem::HeightHierarchy);
    report.instances = 1;
    report.ml_applies = d <= g.min_local_distance();
    let base = decide(g, &llr0, w, d, CertificateKind::StrongLo, mode)?;
    report.marginal += u64::from(base.marginal);
    if !base.cert.is_certified() {
        return Ok(report);
    }
    report.premise_held += 1;
    for alpha in alphas {
        let ext = w.extend(alpha)?;
        let decided = decide(g, &llr0, &ext, d, CertificateKind::StrongLo, mode)?;
        report.marginal += u64::from(decided.marginal);
        if !decided.cert.is_certified() {
            report.violations.push(Violation {
                provenance,
                params: format!("h={}->{}", w.h(), ext.h()),
                detail: format!("extended weights {ext}, min cost {}", decided.cert.min_cost),
            });
        }
    }
    Ok(report)
}

/// Strong LO must imply LO. Both minimum costs are computed; only the
/// decision implication is asserted.
pub fn check_strong_implies_lo(
    g: &TannerGraph,
    x: &[u8],
    llr: &[f64],
    w: &WeightVector,
    d: usize,
    mode: NumericMode,
    provenance: Provenance,
) -> Result<InclusionReport> {
    let llr0 = relative_llr(g, x, llr)?;
    let mut report = InclusionReport::new(Theorem::StrongImpliesLo);
    report.instances = 1;
    report.ml_applies = d <= g.min_local_distance();
    let strong = decide(g, &llr0, w, d, CertificateKind::StrongLo, mode)?;
    let lo = decide(g, &llr0, w, d, CertificateKind::Lo, mode)?;
    report.marginal += u64::from(strong.marginal) + u64::from(lo.marginal);
    if strong.cert.is_certified() {
        report.premise_held += 1;
        if !lo.cert.is_certified() {
            report.violations.push(Violation {
                provenance,
                params: format!("h={},d={d}", w.h()),
                detail: format!(
                    "strong min {} but LO min {}",
                    strong.cert.min_cost, lo.cert.min_cost
                ),
            });
        }
    }
    Ok(report)
}

/// Result of exhaustive maximum-likelihood decoding.
#[derive(Clone, Debug, PartialEq)]
pub struct MlResult {
    /// Every codeword attaining the minimum of `⟨λ, x⟩` (exact ties).
    pub minimizers: Vec<Vec<u8>>,
    pub min_value: BigRational,
}

impl MlResult {
    pub fn unique_zero(&self) -> bool {
        self.minimizers.len() == 1 && self.minimizers[0].iter().all(|&b| b == 0)
    }
}

/// Minimizes `⟨λ, x⟩` over all codewords by walking the span of a GF(2)
/// basis in Gray-code order. Candidates close to the float minimum are
/// re-evaluated exactly so that ties are detected without rounding.
pub fn ml_decode_exhaustive(g: &TannerGraph, llr: &[f64]) -> Result<MlResult> {
    if llr.len() != g.num_variables() {
        return Err(Error::LengthMismatch {
            expected: g.num_variables(),
            actual: llr.len(),
        });
    }
    let basis = g.code_basis();
    let dim = basis.len();
    if dim > MAX_ML_DIMENSION {
        return Err(Error::DimensionCapExceeded {
            dimension: dim,
            cap: MAX_ML_DIMENSION,
        });
    }
    let n = llr.len();
    let scale: f64 = llr.iter().map(|x| x.abs()).sum::<f64>() + 1.0;
    let tol = 1e-9 * scale;
    let mut x = vec![0u8; n];
    let mut value = 0.0f64;
    let mut best = 0.0f64;
    let mut candidates: Vec<Vec<u8>> = vec![x.clone()];
    for i in 1u64..(1u64 << dim) {
        let flip = i.trailing_zeros() as usize;
        for (j, &b) in basis[flip].iter().enumerate() {
            if b == 1 {
                x[j] ^= 1;
                value += if x[j] == 1 { llr[j] } else { -llr[j] };
            }
        }
        if value < best - tol {
            best = value;
            candidates.retain(|c| {
                let v: f64 = c.iter().zip(llr).map(|(&b, l)| f64::from(b) * l).sum();
                v <= best + tol
            });
        }
        if value <= best + tol {
            candidates.push(x.clone());
        }
    }
    let exact: Vec<BigRational> = convert_slice(llr);
    let eval = |c: &Vec<u8>| {
        c.iter()
            .zip(&exact)
            .filter(|(&b, _)| b == 1)
            .fold(BigRational::from_integer(0.into()), |acc, (_, l)| acc + l)
    };
    let values: Vec<BigRational> = candidates.iter().map(eval).collect();
    let min_value = values.iter().min().cloned().expect("zero codeword is a candidate");
    let mut minimizers: Vec<Vec<u8>> = candidates
        .into_iter()
        .zip(values)
        .filter(|(_, v)| *v == min_value)
        .map(|(c, _)| c)
        .collect();
    minimizers.sort();
    minimizers.dedup();
    Ok(MlResult {
        minimizers,
        min_value,
    })
}

/// Samples `trials` channel outputs for the all-zero codeword; whenever LO
/// or strong LO certifies, exhaustive ML decoding must return exactly the
/// all-zero word. Refuses `d > d*`, where certification does not imply ML
/// optimality.
pub fn verify_ml_sufficiency(
    g: &TannerGraph,
    trials: u64,
    spec: &ChannelSpec,
    w: &WeightVector,
    d: usize,
    mode: NumericMode,
) -> Result<InclusionReport> {
    let dstar = g.min_local_distance();
    if d > dstar {
        return Err(Error::Precondition(format!(
            "d = {d} exceeds d* = {dstar}: certification would not imply ML optimality"
        )));
    }
    if g.dimension() > MAX_ML_DIMENSION {
        return Err(Error::DimensionCapExceeded {
            dimension: g.dimension(),
            cap: MAX_ML_DIMENSION,
        });
    }
    let n = g.num_variables();
    let reports = (0..trials)
        .into_par_iter()
        .map(|trial| -> Result<InclusionReport> {
            let provenance = Provenance::Channel { spec: *spec, trial };
            let llr = sample_llr_allzero(n, spec, trial)?.values;
            let mut report = InclusionReport::new(Theorem::MlSufficiency);
            report.instances = 1;
            report.ml_applies = true;
            let lo = decide(g, &llr, w, d, CertificateKind::Lo, mode)?;
            let strong = decide(g, &llr, w, d, CertificateKind::StrongLo, mode)?;
            report.marginal += u64::from(lo.marginal) + u64::from(strong.marginal);
            if lo.cert.is_certified() || strong.cert.is_certified() {
                report.premise_held += 1;
                let ml = ml_decode_exhaustive(g, &llr)?;
                if !ml.unique_zero() {
                    let which = match (lo.cert.is_certified(), strong.cert.is_certified()) {
                        (true, true) => "LO and strong LO",
                        (true, false) => "LO",
                        _ => "strong LO",
                    };
                    report.violations.push(Violation {
                        provenance,
                        params: format!("h={},d={d}", w.h()),
                        detail: format!(
                            "{which} certified but ML has {} minimizer(s) at value {}",
                            ml.minimizers.len(),
                            ml.min_value
                        ),
                    });
                }
            }
            Ok(report)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(merge_all(Theorem::MlSufficiency, reports, true))
}

fn merge_all(theorem: Theorem, reports: Vec<InclusionReport>, ml_applies: bool) -> InclusionReport {
    let mut start = InclusionReport::new(theorem);
    start.ml_applies = ml_applies;
    reports.into_iter().fold(start, InclusionReport::merge)
}

/// Which inclusion a Monte-Carlo run exercises.
#[derive(Clone, Debug)]
pub enum HarnessCheck {
    DegreeChain { d_range: Vec<usize> },
    HeightChain { alphas: Vec<Vec<BigRational>>, d: usize },
    StrongImpliesLo { d: usize },
}

impl HarnessCheck {
    fn theorem(&self) -> Theorem {
        match self {
            HarnessCheck::DegreeChain { .. } => Theorem::DegreeHierarchy,
            HarnessCheck::HeightChain { .. } => Theorem::HeightHierarchy,
            HarnessCheck::StrongImpliesLo { .. } => Theorem::StrongImpliesLo,
        }
    }

    fn run(
        &self,
        g: &TannerGraph,
        llr: &[f64],
        w: &WeightVector,
        mode: NumericMode,
        provenance: Provenance,
    ) -> Result<InclusionReport> {
        let zero = vec![0u8; g.num_variables()];
        match self {
            HarnessCheck::DegreeChain { d_range } => {
                check_degree_chain(g, &zero, llr, w, d_range, mode, provenance)
            }
            HarnessCheck::HeightChain { alphas, d } => {
                check_height_chain(g, &zero, llr, w, alphas, *d, mode, provenance)
            }
            HarnessCheck::StrongImpliesLo { d } => {
                check_strong_implies_lo(g, &zero, llr, w, *d, mode, provenance)
            }
        }
    }
}

/// Runs `check` on `trials` channel samples for the all-zero codeword, in
/// parallel; the merged report lists violations in trial order.
pub fn monte_carlo(
    g: &TannerGraph,
    spec: &ChannelSpec,
    trials: u64,
    w: &WeightVector,
    check: &HarnessCheck,
    mode: NumericMode,
) -> Result<InclusionReport> {
    let n = g.num_variables();
    let reports = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let llr = sample_llr_allzero(n, spec, trial)?.values;
            check.run(g, &llr, w, mode, Provenance::Channel { spec: *spec, trial })
        })
        .collect::<Result<Vec<_>>>()?;
    let ml = reports.iter().all(|r| r.ml_applies);
    Ok(merge_all(check.theorem(), reports, ml))
}

/// Runs `check` on all `2^N` sign patterns `λ ∈ {±1}^N` (N <= 20).
pub fn exhaustive_signs(
    g: &TannerGraph,
    w: &WeightVector,
    check: &HarnessCheck,
    mode: NumericMode,
) -> Result<InclusionReport> {
    let n = g.num_variables();
    if n > 20 {
        return Err(Error::ResourceGuard(format!(
            "exhaustive sign sweep over 2^{n} patterns refused (limit 2^20)"
        )));
    }
    let reports = (0..1u64 << n)
        .into_par_iter()
        .map(|bits| {
            let llr = sign_pattern(n, bits);
            check.run(g, &llr, w, mode, Provenance::SignPattern(bits))
        })
        .collect::<Result<Vec<_>>>()?;
    let ml = reports.iter().all(|r| r.ml_applies);
    Ok(merge_all(check.theorem(), reports, ml))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_irregular, generate_regular, LocalCode};
    use crate::scalar::ratio;

    fn hamming_pair() -> TannerGraph {
        let checks = vec![(0..8).collect(), (4..12).collect()];
        let codes = vec![LocalCode::extended_hamming_8_4(); 2];
        TannerGraph::with_local_codes(12, checks, codes).unwrap()
    }

    #[test]
    fn vacuous_chain_with_positive_llr() {
        let g = generate_regular(60, 3, 6, 6, 0).unwrap();
        let w = WeightVector::unit(3).unwrap();
        let r = check_degree_chain(&g, &[0; 60], &[1.0; 60], &w, &[2, 3, 4, 5, 6], NumericMode::Float, Provenance::Explicit).unwrap();
        assert!(r.is_clean());
        assert_eq!(r.premise_held, 4);
        assert!(!r.ml_applies);
        assert!(!r.notes.is_empty());
    }

    #[test]
    fn chain_rejects_bad_range() {
        let g = generate_regular(60, 3, 6, 6, 0).unwrap();
        let w = WeightVector::unit(1).unwrap();
        assert!(check_degree_chain(&g, &[0; 60], &[1.0; 60], &w, &[2, 7], NumericMode::Float, Provenance::Explicit).is_err());
        assert!(check_degree_chain(&g, &[0; 60], &[1.0; 60], &w, &[6, 7], NumericMode::Float, Provenance::Explicit).is_err());
    }

    #[test]
    fn chain_is_upward_closed_on_small_graphs() {
        let w = WeightVector::unit(2).unwrap();
        for seed in 0..4 {
            let g = generate_irregular(8, 4, 4, 5, seed).unwrap();
            let check = HarnessCheck::DegreeChain { d_range: vec![2, 3, 4] };
            let r = exhaustive_signs(&g, &w, &check, NumericMode::Exact).unwrap();
            assert_eq!(r.instances, 256);
            assert!(r.is_clean(), "{:?}", r.violations);
        }
    }

    #[test]
    fn refuted_low_certified_high_is_reported_in_order() {
        // Search sign patterns for an instance refuted at d=2 but certified
        // at d=3 (allowed), then confirm the chain has no violations.
        let g = generate_irregular(8, 4, 4, 4, 11).unwrap();
        let w = WeightVector::unit(1).unwrap();
        let mut found = false;
        for bits in 0..256u64 {
            let llr = sign_pattern(8, bits);
            let r = check_degree_chain(&g, &[0; 8], &llr, &w, &[2, 3, 4], NumericMode::Exact, Provenance::SignPattern(bits)).unwrap();
            assert!(r.is_clean());
            let lo2 = certify_zero(&g, &llr, &w, 2, CertificateKind::Lo, &CertifyOptions::exact()).unwrap();
            let lo3 = certify_zero(&g, &llr, &w, 3, CertificateKind::Lo, &CertifyOptions::exact()).unwrap();
            if !lo2.is_certified() && lo3.is_certified() {
                found = true;
            }
        }
        assert!(found);
    }

    #[test]
    fn height_chain_tautology_and_geometric() {
        let g = generate_regular(60, 3, 6, 6, 2).unwrap();
        let spec = ChannelSpec::bsc(0.05, 3).unwrap().normalized(true);
        let w = WeightVector::unit(2).unwrap();
        let check = HarnessCheck::HeightChain { alphas: vec![vec![ratio(1, 1)]], d: 2 };
        let r = monte_carlo(&g, &spec, 50, &w, &check, NumericMode::Float).unwrap();
        assert!(r.is_clean());
        let rho = ratio(1, 2);
        let wg = WeightVector::geometric(rho.clone(), 2).unwrap();
        let alphas = vec![vec![ratio(1, 1), num_traits::pow(rho.clone(), 2)]];
        let check = HarnessCheck::HeightChain { alphas, d: 2 };
        let r = monte_carlo(&g, &spec, 50, &wg, &check, NumericMode::Float).unwrap();
        assert!(r.is_clean());
        assert!(r.premise_held > 0);
    }

    #[test]
    fn strong_implies_lo_exhaustive() {
        let w = WeightVector::unit(2).unwrap();
        for seed in 0..3 {
            let g = generate_irregular(9, 4, 3, 4, seed).unwrap();
            let check = HarnessCheck::StrongImpliesLo { d: 2 };
            let r = exhaustive_signs(&g, &w, &check, NumericMode::Float).unwrap();
            assert!(r.is_clean());
        }
        let g = generate_regular(60, 3, 6, 6, 1).unwrap();
        let r = check_strong_implies_lo(&g, &[0; 60], &[1.0; 60], &w, 2, NumericMode::Float, Provenance::Explicit).unwrap();
        assert_eq!(r.premise_held, 1);
        assert!(r.is_clean());
    }

    #[test]
    fn ml_decoder_basics() {
        let g = generate_regular(12, 2, 3, 4, 0).unwrap();
        let r = ml_decode_exhaustive(&g, &[1.0; 12]).unwrap();
        assert!(r.unique_zero());
        let r = ml_decode_exhaustive(&g, &[0.0; 12]).unwrap();
        assert_eq!(r.minimizers.len(), 1 << g.dimension());
    }

    #[test]
    fn ml_decoder_matches_full_space() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for seed in 0..10 {
            let n = 10 + seed as usize % 6;
            let g = generate_irregular(n, 5, 3, 5, seed).unwrap();
            let llr: Vec<f64> = (0..n).map(|_| rng.random_range(-4..6) as f64).collect();
            let r = ml_decode_exhaustive(&g, &llr).unwrap();
            let mut best = f64::INFINITY;
            let mut argmin = Vec::new();
            for bits in 0..1u32 << n {
                let x: Vec<u8> = (0..n).map(|i| ((bits >> i) & 1) as u8).collect();
                if !g.is_codeword(&x).unwrap() {
                    continue;
                }
                let v: f64 = x.iter().zip(&llr).map(|(&b, l)| f64::from(b) * l).sum();
                if v < best {
                    best = v;
                    argmin.clear();
                }
                if v == best {
                    argmin.push(x);
                }
            }
            argmin.sort();
            assert_eq!(r.minimizers, argmin);
        }
    }

    #[test]
    fn ml_sufficiency_refuses_d_above_dstar() {
        let g = generate_regular(12, 2, 3, 4, 0).unwrap();
        let spec = ChannelSpec::bsc(0.1, 0).unwrap();
        let w = WeightVector::unit(2).unwrap();
        assert!(verify_ml_sufficiency(&g, 10, &spec, &w, 3, NumericMode::Float).is_err());
    }

    #[test]
    fn ml_sufficiency_small_cases() {
        let w = WeightVector::unit(2).unwrap();
        let g = generate_regular(12, 2, 3, 4, 0).unwrap();
        let spec = ChannelSpec::bsc(0.1, 5).unwrap();
        let r = verify_ml_sufficiency(&g, 200, &spec, &w, 2, NumericMode::Float).unwrap();
        assert!(r.is_clean());
        assert!(r.premise_held > 0);
        let g = hamming_pair();
        assert_eq!(g.min_local_distance(), 4);
        let r = verify_ml_sufficiency(&g, 200, &spec, &w, 3, NumericMode::Float).unwrap();
        assert!(r.is_clean(), "{:?}", r.violations);
        assert!(r.premise_held > 0);
    }

    #[test]
    fn provenance_replays() {
        let spec = ChannelSpec::bsc(0.2, 9).unwrap();
        let p = Provenance::Channel { spec, trial: 4 };
        assert_eq!(p.replay(10).unwrap(), sample_llr_allzero(10, &spec, 4).unwrap().values);
        assert_eq!(Provenance::SignPattern(0b101).replay(3).unwrap(), vec![-1.0, 1.0, -1.0]);
        assert!(Provenance::Explicit.replay(3).is_err());
    }

    #[test]
    fn report_merge_is_associative() {
        let mk = |n: u64, v: usize| {
            let mut r = InclusionReport::new(Theorem::StrongImpliesLo);
            r.instances = n;
            r.ml_applies = true;
            for i in 0..v {
                r.violations.push(Violation {
                    provenance: Provenance::SignPattern(i as u64),
                    params: String::new(),
                    detail: String::new(),
                });
            }
            r
        };
        let (a, b, c) = (mk(1, 1), mk(2, 0), mk(3, 2));
        let left = a.clone().merge(b.clone()).merge(c.clone());
        let right = a.merge(b.merge(c));
        assert_eq!(left, right);
        assert_eq!(left.instances, 6);
        assert!(left.csv_row().starts_with("strong-implies-lo,6"));
    }
}
