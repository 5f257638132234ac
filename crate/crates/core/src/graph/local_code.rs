use std::fmt;

use crate::error::{Error, Result};

/// Longest explicit local code whose minimum distance we compute by
/// enumeration.
pub const MAX_EXPLICIT_BLOCK_LENGTH: usize = 20;

/// The code attached to a local-code node.
///
/// Bit `i` of a local word is the variable at position `i` of the check's
/// ordered neighbor list.
#[derive(Clone, PartialEq, Eq)]
pub enum LocalCode {
    /// Single parity check of whatever length the check degree is.
    Spc,
    Explicit(ExplicitCode),
}

/// A binary linear code given by the rows of a parity-check matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct ExplicitCode {
    block_length: usize,
    rows: Vec<u32>,
    min_distance: usize,
}

impl LocalCode {
    /// Builds an explicit code from parity-check rows written as bitstrings
    /// (`"11110000"`), one character per position.
    pub fn from_bitstrings<S: AsRef<str>>(rows: &[S]) -> Result<Self> {
        let mut parsed = Vec::with_capacity(rows.len());
        let mut block_length = None;
        for row in rows {
            let row = row.as_ref().trim();
            if let Some(n) = block_length {
                if row.len() != n {
                    return Err(Error::InvalidLocalCode(format!(
                        "row {row:?} has length {}, expected {n}",
                        row.len()
                    )));
                }
            }
            block_length = Some(row.len());
            let mut bits = Vec::with_capacity(row.len());
            for c in row.chars() {
                match c {
                    '0' => bits.push(0u8),
                    '1' => bits.push(1u8),
                    _ => {
                        return Err(Error::InvalidLocalCode(format!(
                            "row {row:?} contains {c:?}"
                        )))
                    }
                }
            }
            parsed.push(bits);
        }
        Self::from_rows(&parsed)
    }

    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let block_length = rows
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::InvalidLocalCode("no parity-check rows".into()))?;
        if block_length == 0 || block_length > MAX_EXPLICIT_BLOCK_LENGTH {
            return Err(Error::InvalidLocalCode(format!(
                "block length {block_length} outside 1..={MAX_EXPLICIT_BLOCK_LENGTH}"
            )));
        }
        let mut masks = Vec::with_capacity(rows.len());
        for row in rows {
            if row.len() != block_length {
                return Err(Error::InvalidLocalCode("ragged parity-check rows".into()));
            }
            let mut mask = 0u32;
            for (i, &b) in row.iter().enumerate() {
                match b {
                    0 => {}
                    1 => mask |= 1 << i,
                    _ => return Err(Error::InvalidLocalCode(format!("entry {b} is not a bit"))),
                }
            }
            masks.push(mask);
        }
        let min_distance = exhaustive_min_distance(block_length, &masks).ok_or_else(|| {
            Error::InvalidLocalCode("code has no nonzero codeword".into())
        })?;
        if min_distance < 2 {
            return Err(Error::InvalidLocalCode(format!(
                "minimum distance {min_distance} < 2"
            )));
        }
        Ok(LocalCode::Explicit(ExplicitCode {
            block_length,
            rows: masks,
            min_distance,
        }))
    }

    /// The [8,4,4] extended Hamming code.
    pub fn extended_hamming_8_4() -> Self {
        Self::from_bitstrings(&["11111111", "11110000", "11001100", "10101010"])
            .expect("extended Hamming code is valid")
    }

    /// Fixed block length, or `None` for SPC which adapts to the check degree.
    pub fn block_length(&self) -> Option<usize> {
        match self {
            LocalCode::Spc => None,
            LocalCode::Explicit(c) => Some(c.block_length),
        }
    }

    pub fn min_distance(&self) -> usize {
        match self {
            LocalCode::Spc => 2,
            LocalCode::Explicit(c) => c.min_distance,
        }
    }

    pub fn contains(&self, bits: &[u8]) -> bool {
        match self {
            LocalCode::Spc => bits.iter().fold(0u8, |acc, b| acc ^ (b & 1)) == 0,
            LocalCode::Explicit(c) => {
                let word = bits
                    .iter()
                    .enumerate()
                    .fold(0u32, |acc, (i, b)| acc | (u32::from(b & 1) << i));
                c.rows.iter().all(|r| (r & word).count_ones() % 2 == 0)
            }
        }
    }

    /// Parity-check rows for a check of the given degree.
    pub fn parity_rows(&self, degree: usize) -> Vec<Vec<u8>> {
        match self {
            LocalCode::Spc => vec![vec![1; degree]],
            LocalCode::Explicit(c) => c
                .rows
                .iter()
                .map(|r| (0..c.block_length).map(|i| ((r >> i) & 1) as u8).collect())
                .collect(),
        }
    }

    pub fn to_bitstrings(&self, degree: usize) -> Vec<String> {
        self.parity_rows(degree)
            .iter()
            .map(|r| r.iter().map(|&b| if b == 1 { '1' } else { '0' }).collect())
            .collect()
    }
}

impl fmt::Debug for LocalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LocalCode::Spc => write!(f, "Spc"),
            LocalCode::Explicit(c) => write!(
                f,
                "Explicit[n={}, rows={}, d={}]",
                c.block_length,
                c.rows.len(),
                c.min_distance
            ),
        }
    }
}

/// Minimum Hamming weight over nonzero words in the null space, by walking
/// all `2^n` words.
fn exhaustive_min_distance(n: usize, rows: &[u32]) -> Option<usize> {
    (1u32..(1u32 << n))
        .filter(|&x| rows.iter().all(|r| (r & x).count_ones() % 2 == 0))
        .map(|x| x.count_ones() as usize)
        .min()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spc_distance_is_two() {
        assert_eq!(LocalCode::Spc.min_distance(), 2);
        assert!(LocalCode::Spc.contains(&[1, 1, 0]));
        assert!(!LocalCode::Spc.contains(&[1, 0, 0]));
    }

    #[test]
    fn extended_hamming_distance_by_enumeration() {
        let code = LocalCode::extended_hamming_8_4();
        assert_eq!(code.min_distance(), 4);
        assert_eq!(code.block_length(), Some(8));
        // 2^4 codewords, exactly 14 of weight 4.
        let weight4 = (0u32..256)
            .filter(|&x| {
                let bits: Vec<u8> = (0..8).map(|i| ((x >> i) & 1) as u8).collect();
                code.contains(&bits)
            })
            .filter(|x| x.count_ones() == 4)
            .count();
        assert_eq!(weight4, 14);
    }

    #[test]
    fn rejects_distance_one() {
        // x = 10 is a codeword of H = [01].
        let err = LocalCode::from_bitstrings(&["01"]).unwrap_err();
        assert!(matches!(err, Error::InvalidLocalCode(_)));
    }

    #[test]
    fn rejects_trivial_code_and_bad_chars() {
        assert!(LocalCode::from_bitstrings(&["10", "01"]).is_err());
        assert!(LocalCode::from_bitstrings(&["1x1"]).is_err());
        assert!(LocalCode::from_bitstrings(&["111", "11"]).is_err());
    }

    #[test]
    fn repetition_code_distance() {
        // H rows 110, 011 define the repetition code {000, 111}.
        let c = LocalCode::from_bitstrings(&["110", "011"]).unwrap();
        assert_eq!(c.min_distance(), 3);
        assert_eq!(c.to_bitstrings(3), vec!["110", "011"]);
    }
}
