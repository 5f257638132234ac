use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Level weights `w = (w_1, ..., w_h)`: nonnegative, not all zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightVector {
    levels: Vec<BigRational>,
}

fn parse_rational(text: &str) -> Result<BigRational> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let num: i64 = num
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad numerator in {text:?}")))?;
        let den: i64 = den
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad denominator in {text:?}")))?;
        if den == 0 {
            return Err(Error::Parse(format!("zero denominator in {text:?}")));
        }
        return Ok(BigRational::new(num.into(), den.into()));
    }
    let x: f64 = text
        .parse()
        .map_err(|_| Error::Parse(format!("{text:?} is not a number")))?;
    BigRational::from_float(x).ok_or_else(|| Error::Parse(format!("{text:?} is not finite")))
}

impl WeightVector {
    pub fn new(levels: Vec<BigRational>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::InvalidWeights("weight vector must have h >= 1 levels".into()));
        }
        if levels.iter().any(Signed::is_negative) {
            return Err(Error::InvalidWeights("weights must be nonnegative".into()));
        }
        if levels.iter().all(Zero::is_zero) {
            return Err(Error::InvalidWeights("weights must not all be zero".into()));
        }
        Ok(WeightVector { levels })
    }

    pub fn from_f64(levels: &[f64]) -> Result<Self> {
        let levels = levels
            .iter()
            .map(|&x| {
                BigRational::from_float(x)
                    .ok_or_else(|| Error::InvalidWeights(format!("weight {x} is not finite")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(levels)
    }

    pub fn from_integers(levels: &[i64]) -> Result<Self> {
        Self::new(levels.iter().map(|&x| BigRational::from_integer(x.into())).collect())
    }

    /// `1^h`.
    pub fn unit(h: usize) -> Result<Self> {
        Self::new(vec![BigRational::one(); h])
    }

    /// `(ρ, ρ², ..., ρ^h)` for `ρ > 0`.
    pub fn geometric(rho: BigRational, h: usize) -> Result<Self> {
        if !rho.is_positive() {
            return Err(Error::InvalidWeights(format!("geometric ratio must be positive, got {rho}")));
        }
        let mut levels = Vec::with_capacity(h);
        let mut x = rho.clone();
        for _ in 0..h {
            levels.push(x.clone());
            x *= &rho;
        }
        Self::new(levels)
    }

    /// Parses `unit`, `geometric:<ρ>` or an explicit comma list such as
    /// `2,4`. For the first two forms `h` sets the length; an explicit list
    /// must have exactly `h` entries when `h` is given.
    pub fn parse(spec: &str, h: Option<usize>) -> Result<Self> {
        let spec = spec.trim();
        let need_h = || {
            h.ok_or_else(|| Error::Parse(format!("weight spec {spec:?} needs a height")))
        };
        if spec.eq_ignore_ascii_case("unit") {
            return Self::unit(need_h()?);
        }
        if let Some(rho) = spec.strip_prefix("geometric:") {
            return Self::geometric(parse_rational(rho)?, need_h()?);
        }
        let levels = spec
            .split(',')
            .map(parse_rational)
            .collect::<Result<Vec<_>>>()?;
        if let Some(h) = h {
            if levels.len() != h {
                return Err(Error::InvalidWeights(format!(
                    "{} weights given for height {h}",
                    levels.len()
                )));
            }
        }
        Self::new(levels)
    }

    pub fn h(&self) -> usize {
        self.levels.len()
    }

    pub fn levels(&self) -> &[BigRational] {
        &self.levels
    }

    /// `w_ℓ` for `1 <= ℓ <= h`.
    pub fn level(&self, l: usize) -> &BigRational {
        &self.levels[l - 1]
    }

    pub fn norm1(&self) -> BigRational {
        self.levels.iter().fold(BigRational::zero(), |acc, x| acc + x)
    }

    /// `w_ℓ / ‖w‖₁` for every level, in the requested backend.
    pub fn normalized<S: Scalar>(&self) -> Vec<S> {
        let norm = self.norm1();
        self.levels.iter().map(|x| S::from_rational(&(x / &norm))).collect()
    }

    pub fn is_unit(&self) -> bool {
        self.levels.iter().all(|x| x == &self.levels[0])
    }

    /// The k-legal extension `α_1 w ∘ α_2 w ∘ ... ∘ α_k w`.
    pub fn extend(&self, alpha: &[BigRational]) -> Result<Self> {
        if alpha.is_empty() {
            return Err(Error::InvalidWeights("extension needs k >= 1 factors".into()));
        }
        if let Some(a) = alpha.iter().find(|a| !a.is_positive()) {
            return Err(Error::InvalidWeights(format!("extension factor {a} is not positive")));
        }
        let levels = alpha
            .iter()
            .flat_map(|a| self.levels.iter().map(move |x| a * x))
            .collect();
        Self::new(levels)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.levels.iter().map(f64::from_rational).collect()
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.levels.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    #[test]
    fn validation() {
        assert!(WeightVector::from_integers(&[]).is_err());
        assert!(WeightVector::from_integers(&[0, 0]).is_err());
        assert!(WeightVector::from_integers(&[1, -1]).is_err());
        assert!(WeightVector::from_integers(&[0, 3]).is_ok());
    }

    #[test]
    fn parse_grammar() {
        assert_eq!(WeightVector::parse("unit", Some(3)).unwrap(), WeightVector::unit(3).unwrap());
        assert_eq!(
            WeightVector::parse("2,4", None).unwrap(),
            WeightVector::from_integers(&[2, 4]).unwrap()
        );
        assert!(WeightVector::parse("2,4", Some(3)).is_err());
        assert!(WeightVector::parse("unit", None).is_err());
        let g = WeightVector::parse("geometric:0.5", Some(3)).unwrap();
        assert_eq!(g.levels(), &[ratio(1, 2), ratio(1, 4), ratio(1, 8)]);
        let g = WeightVector::parse("geometric:1/3", Some(2)).unwrap();
        assert_eq!(g.levels(), &[ratio(1, 3), ratio(1, 9)]);
        assert!(WeightVector::parse("geometric:0", Some(2)).is_err());
    }

    #[test]
    fn extension() {
        let w = WeightVector::from_integers(&[2, 4]).unwrap();
        let ext = w.extend(&[ratio(1, 1), ratio(3, 1)]).unwrap();
        assert_eq!(ext, WeightVector::from_integers(&[2, 4, 6, 12]).unwrap());
        let unit = WeightVector::unit(3).unwrap().extend(&[ratio(1, 1), ratio(1, 1)]).unwrap();
        assert_eq!(unit, WeightVector::unit(6).unwrap());
        assert!(w.extend(&[ratio(0, 1)]).is_err());
        assert!(w.extend(&[]).is_err());
    }

    #[test]
    fn geometric_is_extension_of_first_block() {
        let rho = ratio(1, 2);
        let (h, k) = (3, 3);
        let full = WeightVector::geometric(rho.clone(), k * h).unwrap();
        let first = WeightVector::geometric(rho.clone(), h).unwrap();
        let alpha: Vec<BigRational> = (0..k)
            .map(|i| num_traits::pow(rho.clone(), i * h))
            .collect();
        assert_eq!(first.extend(&alpha).unwrap(), full);
    }

    #[test]
    fn normalized_sums_to_one() {
        let w = WeightVector::from_integers(&[2, 4]).unwrap();
        let n: Vec<BigRational> = w.normalized();
        assert_eq!(n, vec![ratio(1, 3), ratio(2, 3)]);
    }
}
