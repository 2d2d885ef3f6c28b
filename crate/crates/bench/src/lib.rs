//! Deterministic fixtures for the kernel benchmarks.

use pwlrec_core::RealMatrix;

/// Well-conditioned `n×n` test matrix: a decaying diagonal plus a skew
/// coupling, scaled so `‖A·t‖` stays moderate for `t = 1`.
pub fn stable_matrix(n: usize) -> RealMatrix {
    let mut rows = vec![vec![0.0; n]; n];
    for (i, row) in rows.iter_mut().enumerate() {
        row[i] = -0.5 - 0.1 * i as f64;
        for (j, v) in row.iter_mut().enumerate() {
            if j > i {
                *v = 0.3 / (1 + j - i) as f64;
            } else if j < i {
                *v = -0.2 / (1 + i - j) as f64;
            }
        }
    }
    RealMatrix::from_rows(&rows).expect("finite")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_has_requested_shape() {
        assert_eq!(stable_matrix(5).shape(), (5, 5));
    }
}
