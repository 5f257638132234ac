//! Dense GF(2) linear algebra on packed rows.

fn pack(row: &[u8], words: usize) -> Vec<u64> {
    let mut packed = vec![0u64; words];
    for (i, &b) in row.iter().enumerate() {
        if b & 1 == 1 {
            packed[i / 64] |= 1 << (i % 64);
        }
    }
    packed
}

fn bit(row: &[u64], i: usize) -> bool {
    (row[i / 64] >> (i % 64)) & 1 == 1
}

/// Basis of `{x : H x = 0}` via reduced row echelon form.
pub(crate) fn null_space(rows: &[Vec<u8>], n: usize) -> Vec<Vec<u8>> {
    let words = n.div_ceil(64).max(1);
    let mut m: Vec<Vec<u64>> = rows.iter().map(|r| pack(r, words)).collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..n {
        let Some(p) = (rank..m.len()).find(|&r| bit(&m[r], col)) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && bit(row, col) {
                row.iter_mut().zip(&pivot).for_each(|(a, b)| *a ^= b);
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    let mut is_pivot = vec![false; n];
    pivots.iter().for_each(|&c| is_pivot[c] = true);
    (0..n)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut x = vec![0u8; n];
            x[free] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                if bit(&m[r], free) {
                    x[pc] = 1;
                }
            }
            x
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hamming_7_4_null_space() {
        let h = vec![
            vec![1, 0, 1, 0, 1, 0, 1],
            vec![0, 1, 1, 0, 0, 1, 1],
            vec![0, 0, 0, 1, 1, 1, 1],
        ];
        let basis = null_space(&h, 7);
        assert_eq!(basis.len(), 4);
        for x in &basis {
            for row in &h {
                let s: u8 = row.iter().zip(x).map(|(a, b)| a & b).sum();
                assert_eq!(s % 2, 0);
            }
        }
    }

    #[test]
    fn dependent_rows_and_wide_vectors() {
        let n = 130;
        let a: Vec<u8> = (0..n).map(|i| (i % 3 == 0) as u8).collect();
        let b: Vec<u8> = (0..n).map(|i| (i % 5 == 0) as u8).collect();
        let c: Vec<u8> = a.iter().zip(&b).map(|(x, y)| x ^ y).collect();
        assert_eq!(null_space(&[a, b, c], n).len(), n - 2);
    }
}
