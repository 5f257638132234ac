//! Local-optimality certificates.
//!
//! `x` is `(h, w, d)`-locally optimal for `λ` iff the all-zero word is
//! locally optimal for `λ⁰ = (-1)^x ∗ λ`, i.e. iff every deviation `β` has
//! `⟨λ⁰, β⟩ > 0`. The minimum over deviations is computed by the dynamic
//! program in [`DpTable`]; strong local optimality uses reduced trees.

mod dp;
mod oracle;
mod sweep;

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::channel::negate_relative_values;
use crate::devtree::{project, SubTree, WeightVector, DEFAULT_NODE_CAP};
use crate::error::{Error, Result};
use crate::graph::TannerGraph;
use crate::scalar::{convert_slice, Scalar};

pub use dp::{min_deviation_cost, DpTable};
pub use oracle::{
    enumeration_min_cost, run_oracle_suite, DeviationSet, OracleMismatch, OracleReport,
    OracleSuiteConfig,
};
pub use sweep::{unit_weight_sweep, SweepPoint};

/// Float-mode costs with magnitude below this are flagged as marginal.
pub const MARGINAL_TOLERANCE: f64 = 1e-9;

/// Minimum deviation cost and the lowest-index root attaining it.
#[derive(Clone, Debug, PartialEq)]
pub struct MinCost<S> {
    pub min_cost: S,
    pub witness_root: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CertificateKind {
    Lo,
    StrongLo,
}

impl CertificateKind {
    pub fn reduced(self) -> bool {
        self == CertificateKind::StrongLo
    }
}

impl fmt::Display for CertificateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CertificateKind::Lo => "LO",
            CertificateKind::StrongLo => "StrongLO",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Decision {
    Certified,
    Refuted,
}

impl Decision {
    pub fn is_certified(self) -> bool {
        self == Decision::Certified
    }
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Decision::Certified => "certified",
            Decision::Refuted => "refuted",
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum NumericMode {
    /// Double precision; near-zero minima are flagged as marginal.
    #[default]
    Float,
    /// Exact rationals. Every finite `f64` LLR converts exactly.
    Exact,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CertifyOptions {
    pub mode: NumericMode,
    /// Rebuild an explicit minimizing tree when refuted.
    pub witness: bool,
    pub node_cap: usize,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            mode: NumericMode::Float,
            witness: false,
            node_cap: DEFAULT_NODE_CAP,
        }
    }
}

impl CertifyOptions {
    pub fn exact() -> Self {
        CertifyOptions {
            mode: NumericMode::Exact,
            ..Self::default()
        }
    }

    pub fn with_witness(mut self) -> Self {
        self.witness = true;
        self
    }
}

#[derive(Clone, Debug)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub h: usize,
    pub weights: WeightVector,
    pub d: usize,
    pub reduced: bool,
    pub decision: Decision,
    /// `min_β ⟨λ⁰, β⟩`, which is also the certification margin.
    pub min_cost: f64,
    /// The same value in exact mode.
    pub exact_min_cost: Option<BigRational>,
    /// Float mode only: `|min_cost| < 1e-9`.
    pub marginal: bool,
    pub witness_root: usize,
    pub witness_tree: Option<SubTree>,
}

impl Certificate {
    pub fn is_certified(&self) -> bool {
        self.decision.is_certified()
    }

    pub const RECORD_HEADER: &'static str = "kind,h,d,reduced,decision,min_cost,witness_root";

    /// `kind,h,d,reduced,decision,min_cost,witness_root`.
    pub fn record(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.kind, self.h, self.d, self.reduced, self.decision, self.min_cost, self.witness_root
        )
    }
}

/// A parsed certificate record (the explicit tree is not serialized).
#[derive(Clone, Debug, PartialEq)]
pub struct CertificateRecord {
    pub kind: CertificateKind,
    pub h: usize,
    pub d: usize,
    pub reduced: bool,
    pub decision: Decision,
    pub min_cost: f64,
    pub witness_root: usize,
}

impl FromStr for CertificateRecord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let f: Vec<&str> = s.trim().split(',').collect();
        let bad = || Error::Parse(format!("malformed certificate record {s:?}"));
        if f.len() != 7 {
            return Err(bad());
        }
        Ok(CertificateRecord {
            kind: match f[0] {
                "LO" => CertificateKind::Lo,
                "StrongLO" => CertificateKind::StrongLo,
                _ => return Err(bad()),
            },
            h: f[1].parse().map_err(|_| bad())?,
            d: f[2].parse().map_err(|_| bad())?,
            reduced: f[3].parse().map_err(|_| bad())?,
            decision: match f[4] {
                "certified" => Decision::Certified,
                "refuted" => Decision::Refuted,
                _ => return Err(bad()),
            },
            min_cost: f[5].parse().map_err(|_| bad())?,
            witness_root: f[6].parse().map_err(|_| bad())?,
        })
    }
}

/// The k-legal extension `α_1 w ∘ ... ∘ α_k w`.
pub fn extend_weights(w: &WeightVector, alpha: &[BigRational]) -> Result<WeightVector> {
    w.extend(alpha)
}

fn certify_generic<S: Scalar>(
    g: &TannerGraph,
    llr0: &[S],
    w: &WeightVector,
    d: usize,
    kind: CertificateKind,
    opts: &CertifyOptions,
) -> Result<(Certificate, S)> {
    let reduced = kind.reduced();
    let table = DpTable::build(g, llr0, w, d, reduced)?;
    let MinCost {
        min_cost,
        witness_root,
    } = table.min_cost();
    let decision = if min_cost > S::zero() {
        Decision::Certified
    } else {
        Decision::Refuted
    };
    let witness_tree = if opts.witness && decision == Decision::Refuted {
        table.extract_witness(g, witness_root, opts.node_cap).ok()
    } else {
        None
    };
    let value = min_cost.to_f64();
    Ok((
        Certificate {
            kind,
            h: w.h(),
            weights: w.clone(),
            d,
            reduced,
            decision,
            min_cost: value,
            exact_min_cost: None,
            marginal: false,
            witness_root,
            witness_tree,
        },
        min_cost,
    ))
}

/// Certifies the all-zero word against `λ⁰` directly.
pub fn certify_zero(
    g: &TannerGraph,
    llr0: &[f64],
    w: &WeightVector,
    d: usize,
    kind: CertificateKind,
    opts: &CertifyOptions,
) -> Result<Certificate> {
    match opts.mode {
        NumericMode::Float => {
            let (mut cert, _) = certify_generic::<f64>(g, llr0, w, d, kind, opts)?;
            cert.marginal = cert.min_cost.abs() < MARGINAL_TOLERANCE;
            Ok(cert)
        }
        NumericMode::Exact => {
            let exact: Vec<BigRational> = convert_slice(llr0);
            let (mut cert, value) = certify_generic(g, &exact, w, d, kind, opts)?;
            cert.exact_min_cost = Some(value);
            Ok(cert)
        }
    }
}

fn certify(
    g: &TannerGraph,
    x: &[u8],
    llr: &[f64],
    w: &WeightVector,
    d: usize,
    kind: CertificateKind,
    opts: &CertifyOptions,
) -> Result<Certificate> {
    if !g.is_codeword(x)? {
        return Err(Error::NotACodeword);
    }
    let llr0 = negate_relative_values(x, llr)?;
    certify_zero(g, &llr0, w, d, kind, opts)
}

/// Is `x` `(h, w, d)`-locally optimal for `λ`? (`h = w.h()`.)
pub fn certify_lo(
    g: &TannerGraph,
    x: &[u8],
    llr: &[f64],
    w: &WeightVector,
    d: usize,
    opts: &CertifyOptions,
) -> Result<Certificate> {
    certify(g, x, llr, w, d, CertificateKind::Lo, opts)
}

/// Strong local optimality: the same over reduced deviations.
pub fn certify_strong_lo(
    g: &TannerGraph,
    x: &[u8],
    llr: &[f64],
    w: &WeightVector,
    d: usize,
    opts: &CertifyOptions,
) -> Result<Certificate> {
    certify(g, x, llr, w, d, CertificateKind::StrongLo, opts)
}

/// Checks that a certificate's witness is a valid (reduced) `d`-tree whose
/// projected cost equals the reported minimum (exactly in exact mode,
/// within `1e-9` otherwise).
pub fn verify_witness(g: &TannerGraph, cert: &Certificate, llr0: &[f64]) -> Result<()> {
    let tree = cert
        .witness_tree
        .as_ref()
        .ok_or_else(|| Error::Precondition("certificate carries no witness tree".into()))?;
    if cert.reduced {
        tree.is_reduced_d_tree(g, cert.h, cert.d)?;
    } else {
        tree.is_d_tree(g, cert.h, cert.d)?;
    }
    if tree.root_variable() != cert.witness_root {
        return Err(Error::InvalidTree("witness rooted at the wrong variable".into()));
    }
    let dev = project(g, tree, &cert.weights)?;
    match &cert.exact_min_cost {
        Some(exact) => {
            let cost: BigRational = dev.cost(&convert_slice::<BigRational>(llr0));
            if &cost != exact {
                return Err(Error::InvalidTree(format!("witness cost {cost} != {exact}")));
            }
        }
        None => {
            let cost: f64 = dev.cost(llr0);
            if (cost - cert.min_cost).abs() > 1e-9 * (1.0 + cert.min_cost.abs()) {
                return Err(Error::InvalidTree(format!(
                    "witness cost {cost} != {}",
                    cert.min_cost
                )));
            }
        }
    }
    Ok(())
}

/// Exact zero test used by tests and harnesses.
pub fn is_exact_zero(cert: &Certificate) -> bool {
    cert.exact_min_cost.as_ref().is_some_and(Zero::is_zero)
}
