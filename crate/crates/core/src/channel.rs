//! LLR sampling for memoryless binary-input output-symmetric channels.
//!
//! Randomness is counter based: a trial uses the ChaCha8 stream
//! `(seed, trial)` and bit `i` consumes the `i`-th draw(s) of that stream, so
//! any trial can be regenerated on its own and trials can run in parallel.

use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum ChannelKind {
    /// Binary symmetric channel with crossover probability `p`.
    Bsc { p: f64 },
    /// BPSK (`0 -> +1`) over additive white Gaussian noise.
    Awgn { sigma: f64 },
}

impl ChannelKind {
    pub fn validate(&self) -> Result<()> {
        match *self {
            ChannelKind::Bsc { p } if !(p > 0.0 && p < 0.5) => Err(Error::InvalidChannel(
                format!("BSC crossover probability must lie in (0, 1/2), got {p}"),
            )),
            ChannelKind::Awgn { sigma } if !(sigma > 0.0 && sigma.is_finite()) => Err(
                Error::InvalidChannel(format!("AWGN sigma must be positive, got {sigma}")),
            ),
            _ => Ok(()),
        }
    }

    /// `ln((1-p)/p)` for the BSC.
    pub fn bsc_magnitude(&self) -> Option<f64> {
        match *self {
            ChannelKind::Bsc { p } => Some(((1.0 - p) / p).ln()),
            ChannelKind::Awgn { .. } => None,
        }
    }
}

impl fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChannelKind::Bsc { p } => write!(f, "bsc:{p}"),
            ChannelKind::Awgn { sigma } => write!(f, "awgn:{sigma}"),
        }
    }
}

impl FromStr for ChannelKind {
    type Err = Error;

    /// `bsc:<p>` or `awgn:<sigma>`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, value) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("channel {s:?}: expected bsc:<p> or awgn:<sigma>")))?;
        let value: f64 = value
            .parse()
            .map_err(|_| Error::Parse(format!("channel parameter {value:?} is not a number")))?;
        let kind = match name.to_ascii_lowercase().as_str() {
            "bsc" => ChannelKind::Bsc { p: value },
            "awgn" => ChannelKind::Awgn { sigma: value },
            other => return Err(Error::Parse(format!("unknown channel {other:?}"))),
        };
        kind.validate()?;
        Ok(kind)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelSpec {
    pub kind: ChannelKind,
    pub seed: u64,
    /// Scale BSC LLRs to `±1`. Positive scaling preserves every strict
    /// certificate and makes the values exact in rational arithmetic.
    pub normalize: bool,
}

impl ChannelSpec {
    pub fn new(kind: ChannelKind, seed: u64) -> Result<Self> {
        kind.validate()?;
        Ok(ChannelSpec {
            kind,
            seed,
            normalize: false,
        })
    }

    pub fn bsc(p: f64, seed: u64) -> Result<Self> {
        Self::new(ChannelKind::Bsc { p }, seed)
    }

    pub fn normalized(mut self, normalize: bool) -> Self {
        self.normalize = normalize;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LlrProvenance {
    pub spec: ChannelSpec,
    pub trial: u64,
    /// `|λ_i|` before normalization (BSC only).
    pub magnitude: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LlrVector {
    pub values: Vec<f64>,
    pub provenance: Option<LlrProvenance>,
}

impl LlrVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(i) = values.iter().position(|x| !x.is_finite()) {
            return Err(Error::InvalidChannel(format!("LLR entry {i} is not finite")));
        }
        Ok(LlrVector {
            values,
            provenance: None,
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// LLRs for transmission of the all-zero codeword over `spec`.
pub fn sample_llr_allzero(num_variables: usize, spec: &ChannelSpec, trial: u64) -> Result<LlrVector> {
    spec.kind.validate()?;
    let mut rng = trial_rng(spec.seed, trial);
    let (values, magnitude) = match spec.kind {
        ChannelKind::Bsc { p } => {
            let magnitude = ((1.0 - p) / p).ln();
            let level = if spec.normalize { 1.0 } else { magnitude };
            let values = (0..num_variables)
                .map(|_| if rng.random::<f64>() < p { -level } else { level })
                .collect();
            (values, Some(magnitude))
        }
        ChannelKind::Awgn { sigma } => {
            if spec.normalize {
                return Err(Error::InvalidChannel(
                    "LLR normalization is only defined for the BSC".into(),
                ));
            }
            let noise = Normal::new(0.0, sigma)
                .map_err(|e| Error::InvalidChannel(e.to_string()))?;
            let scale = 2.0 / (sigma * sigma);
            let values = (0..num_variables)
                .map(|_| scale * (1.0 + noise.sample(&mut rng)))
                .collect();
            (values, None)
        }
    };
    Ok(LlrVector {
        values,
        provenance: Some(LlrProvenance {
            spec: *spec,
            trial,
            magnitude,
        }),
    })
}

/// LLRs for transmission of codeword `x`: the all-zero sample with signs
/// flipped where `x_i = 1`.
pub fn sample_llr(x: &[u8], spec: &ChannelSpec, trial: u64) -> Result<LlrVector> {
    let base = sample_llr_allzero(x.len(), spec, trial)?;
    negate_relative(x, &base)
}

/// `(-1)^x * λ`, coordinatewise.
pub fn negate_relative(x: &[u8], llr: &LlrVector) -> Result<LlrVector> {
    Ok(LlrVector {
        values: negate_relative_values(x, &llr.values)?,
        provenance: llr.provenance,
    })
}

pub fn negate_relative_values<S: Scalar>(x: &[u8], llr: &[S]) -> Result<Vec<S>> {
    if x.len() != llr.len() {
        return Err(Error::LengthMismatch {
            expected: llr.len(),
            actual: x.len(),
        });
    }
    Ok(x.iter()
        .zip(llr)
        .map(|(&b, l)| if b & 1 == 1 { -l.clone() } else { l.clone() })
        .collect())
}

/// `x ⊕ f` with `(x ⊕ f)_i = |x_i - f_i|`.
pub fn relative_point<S: Scalar>(x: &[u8], f: &[S]) -> Vec<S> {
    x.iter()
        .zip(f)
        .map(|(&b, v)| if b & 1 == 1 { S::one() - v.clone() } else { v.clone() })
        .collect()
}

/// Writes LLR vectors as CSV, one row per trial: `trial,l0,l1,...`.
pub fn write_llr_csv<W: Write>(out: W, rows: &[LlrVector]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let n = rows.first().map_or(0, LlrVector::len);
    let mut header = vec!["trial".to_string()];
    header.extend((0..n).map(|i| format!("l{i}")));
    w.write_record(&header)?;
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                actual: row.len(),
            });
        }
        let trial = row.provenance.map_or(i as u64, |p| p.trial);
        let mut record = vec![trial.to_string()];
        record.extend(row.values.iter().map(|v| v.to_string()));
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads rows written by [`write_llr_csv`] as `(trial, values)`.
pub fn read_llr_csv<R: Read>(input: R) -> Result<Vec<(u64, Vec<f64>)>> {
    let mut r = csv::Reader::from_reader(input);
    let mut rows = Vec::new();
    for record in r.records() {
        let record = record?;
        let mut fields = record.iter();
        let trial = fields
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse("missing trial column".into()))?;
        let values = fields
            .map(|v| v.parse::<f64>().map_err(|_| Error::Parse(format!("bad LLR {v:?}"))))
            .collect::<Result<Vec<_>>>()?;
        rows.push((trial, values));
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::inner_product;
    use rand::Rng;

    #[test]
    fn rejects_degenerate_parameters() {
        assert!(ChannelSpec::bsc(0.0, 0).is_err());
        assert!(ChannelSpec::bsc(0.5, 0).is_err());
        assert!(ChannelSpec::new(ChannelKind::Awgn { sigma: 0.0 }, 0).is_err());
        assert!("bsc:0.7".parse::<ChannelKind>().is_err());
        assert_eq!("bsc:0.04".parse::<ChannelKind>().unwrap(), ChannelKind::Bsc { p: 0.04 });
    }

    #[test]
    fn bsc_magnitude_is_ln_24_at_p_004() {
        let spec = ChannelSpec::bsc(0.04, 11).unwrap();
        let llr = sample_llr_allzero(500, &spec, 0).unwrap();
        let expected = 24f64.ln();
        assert!((expected - 3.178).abs() < 1e-3);
        for v in &llr.values {
            assert!((v.abs() - expected).abs() < 1e-12);
        }
        let normalized = sample_llr_allzero(500, &spec.normalized(true), 0).unwrap();
        for (a, b) in llr.values.iter().zip(&normalized.values) {
            assert_eq!(a.signum(), b.signum());
            assert_eq!(b.abs(), 1.0);
        }
    }

    #[test]
    fn deterministic_per_seed_and_trial() {
        let spec = ChannelSpec::bsc(0.1, 7).unwrap();
        let a = sample_llr_allzero(200, &spec, 3).unwrap();
        let b = sample_llr_allzero(200, &spec, 3).unwrap();
        assert_eq!(a, b);
        let c = sample_llr_allzero(200, &spec, 4).unwrap();
        assert_ne!(a.values, c.values);
    }

    #[test]
    fn flip_count_concentrates() {
        let p = 0.07;
        let spec = ChannelSpec::bsc(p, 2024).unwrap();
        let trials = 100;
        let per = 10_000;
        let negatives: usize = (0..trials)
            .map(|t| {
                sample_llr_allzero(per, &spec, t)
                    .unwrap()
                    .values
                    .iter()
                    .filter(|v| **v < 0.0)
                    .count()
            })
            .sum();
        let total = (trials * per as u64) as f64;
        let mean = p * total;
        let sd = (total * p * (1.0 - p)).sqrt();
        assert!((negatives as f64 - mean).abs() < 5.0 * sd, "{negatives} vs {mean}");
    }

    #[test]
    fn trials_are_uncorrelated() {
        let spec = ChannelSpec::bsc(0.3, 5).unwrap();
        let n = 20_000;
        let a = sample_llr_allzero(n, &spec, 0).unwrap();
        let b = sample_llr_allzero(n, &spec, 1).unwrap();
        let sign = |v: &f64| if *v < 0.0 { 1.0 } else { 0.0 };
        let xa: Vec<f64> = a.values.iter().map(sign).collect();
        let xb: Vec<f64> = b.values.iter().map(sign).collect();
        let corr = |x: &[f64], y: &[f64]| {
            let mx = x.iter().sum::<f64>() / x.len() as f64;
            let my = y.iter().sum::<f64>() / y.len() as f64;
            let cov: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
            let vx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
            let vy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
            cov / (vx * vy).sqrt()
        };
        // Cross-trial and lag-1 serial correlation, 5 standard errors.
        let bound = 5.0 / (n as f64).sqrt();
        assert!(corr(&xa, &xb).abs() < bound);
        assert!(corr(&xa[1..], &xa[..n - 1]).abs() < bound);
    }

    #[test]
    fn awgn_mean() {
        let sigma = 0.8;
        let spec = ChannelSpec::new(ChannelKind::Awgn { sigma }, 1).unwrap();
        let llr = sample_llr_allzero(50_000, &spec, 0).unwrap();
        let mean = llr.values.iter().sum::<f64>() / llr.len() as f64;
        let expected = 2.0 / (sigma * sigma);
        assert!((mean - expected).abs() < 0.05 * expected);
        assert!(sample_llr_allzero(4, &spec.normalized(true), 0).is_err());
    }

    #[test]
    fn negate_relative_examples() {
        let llr = LlrVector::new(vec![-2.0, 3.0]).unwrap();
        assert_eq!(negate_relative(&[1, 0], &llr).unwrap().values, vec![2.0, 3.0]);
        assert_eq!(negate_relative(&[0, 0], &llr).unwrap().values, llr.values);
        assert!(negate_relative(&[0], &llr).is_err());
    }

    #[test]
    fn sign_flip_identity() {
        // <(-1)^x * λ, β> = <λ, x ⊕ β> - <λ, x>
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..1000 {
            let n = rng.random_range(1..12);
            let x: Vec<u8> = (0..n).map(|_| rng.random_range(0..2)).collect();
            let llr: Vec<f64> = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
            let beta: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
            let lhs = inner_product(&negate_relative_values(&x, &llr).unwrap(), &beta);
            let xf: Vec<f64> = x.iter().map(|&b| b as f64).collect();
            let rhs = inner_product(&llr, &relative_point(&x, &beta)) - inner_product(&llr, &xf);
            assert!((lhs - rhs).abs() < 1e-12);
        }
    }

    #[test]
    fn csv_round_trip() {
        let spec = ChannelSpec::bsc(0.2, 3).unwrap();
        let rows: Vec<LlrVector> = (0..4).map(|t| sample_llr_allzero(6, &spec, t).unwrap()).collect();
        let mut buf = Vec::new();
        write_llr_csv(&mut buf, &rows).unwrap();
        let back = read_llr_csv(buf.as_slice()).unwrap();
        assert_eq!(back.len(), 4);
        for (row, (trial, values)) in rows.iter().zip(&back) {
            assert_eq!(row.provenance.unwrap().trial, *trial);
            assert_eq!(&row.values, values);
        }
    }
}
