//! Local-optimality certificates for Tanner codes.
//!
//! A codeword `x` of a Tanner code is locally optimal with respect to an LLR
//! vector `λ` when every deviation built from a weighted `d`-tree of the
//! computation tree has strictly positive cost relative to `x`. This crate
//! provides:
//!
//! * [`graph`]: edge-labeled Tanner graphs with SPC or explicit local codes,
//!   alist I/O, girth, and a seeded regular-graph generator.
//! * [`channel`]: reproducible BSC/AWGN LLR sampling.
//! * [`devtree`]: explicit path-prefix trees, `d`-trees, weights, projections,
//!   trimming and the decompositions used by the hierarchy arguments. This is
//!   the exact, oracle-scale layer.
//! * [`certify`]: the production dynamic program computing the minimum
//!   deviation cost, and the LO / strong-LO certificates built on it.
//! * [`hierarchy`]: falsification harnesses for the degree and height
//!   hierarchies, strong-LO ⇒ LO, and ML sufficiency.
//! * [`experiments`]: Monte-Carlo growth curves of |LO| and |NLO| versus
//!   the height.

pub mod certify;
pub mod channel;
pub mod devtree;
pub mod error;
pub mod experiments;
pub mod graph;
pub mod hierarchy;
pub mod scalar;

pub use certify::{
    certify_lo, certify_strong_lo, extend_weights, min_deviation_cost, Certificate,
    CertificateKind, CertifyOptions, Decision, DpTable, MinCost, NumericMode,
};
pub use channel::{negate_relative, sample_llr_allzero, ChannelKind, ChannelSpec, LlrVector};
pub use devtree::{Deviation, SubTree, WeightVector};
pub use error::{Error, Result};
pub use graph::{generate_regular, load_alist, LocalCode, Node, TannerGraph};
pub use scalar::Scalar;
