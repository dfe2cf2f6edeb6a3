//! Permanents of square complex matrices.
//!
//! `perm(M) = Σ_σ Π_i M[σ(i)][i]`, the determinant without the alternating
//! signs. [`permanent_fast`] uses Ryser's inclusion–exclusion formula with
//! column subsets visited in Gray-code order, so each step updates the row
//! sums by a single column: O(2^n · n). [`permanent_naive`] sums over all
//! permutations directly and is kept as the reference.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

/// Largest size accepted by [`permanent_naive`].
pub const NAIVE_LIMIT: usize = 10;
/// Largest size accepted by [`permanent_fast`].
pub const FAST_LIMIT: usize = 30;

fn check_square(m: &ComplexMatrix, limit: usize, what: &'static str) -> Result<usize> {
    if !m.is_square() {
        return Err(Error::InvalidDimension(format!(
            "permanent needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    if n == 0 {
        return Err(Error::InvalidDimension("permanent of a 0x0 matrix".into()));
    }
    if n > limit {
        return Err(Error::SizeLimit {
            what,
            size: n,
            limit,
        });
    }
    Ok(n)
}

/// Direct sum over all `n!` permutations. Limited to `n <= 10`.
pub fn permanent_naive(m: &ComplexMatrix) -> Result<Complex64> {
    let n = check_square(m, NAIVE_LIMIT, "naive permanent")?;

    // depth-first over columns, choosing an unused row for each
    fn walk(m: &ComplexMatrix, col: usize, used: u32, partial: Complex64) -> Complex64 {
        let n = m.rows();
        if col == n {
            return partial;
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for row in 0..n {
            if used & (1 << row) == 0 {
                acc += walk(m, col + 1, used | (1 << row), partial * m.get(row, col));
            }
        }
        acc
    }

    debug_assert!(n <= 32);
    Ok(walk(m, 0, 0, Complex64::new(1.0, 0.0)))
}

/// Ryser's formula with Gray-code subset enumeration.
///
/// `perm(M) = (-1)^n Σ_{S ⊆ cols} (-1)^|S| Π_rows Σ_{c ∈ S} M[r][c]`.
/// The visiting order is fixed, so results are bit-reproducible.
pub fn permanent_fast(m: &ComplexMatrix) -> Result<Complex64> {
    let n = check_square(m, FAST_LIMIT, "fast permanent")?;
    if n == 1 {
        return Ok(m.get(0, 0));
    }

    let cols: Vec<Vec<Complex64>> = (0..n)
        .map(|c| (0..n).map(|r| m.get(r, c)).collect())
        .collect();
    let mut row_sums = vec![Complex64::new(0.0, 0.0); n];
    let mut total = Complex64::new(0.0, 0.0);
    let mut gray: u64 = 0;

    for step in 1u64..(1u64 << n) {
        let flip = step.trailing_zeros() as usize;
        gray ^= 1 << flip;
        let col = &cols[flip];
        if gray & (1 << flip) != 0 {
            row_sums.iter_mut().zip(col).for_each(|(s, a)| *s += a);
        } else {
            row_sums.iter_mut().zip(col).for_each(|(s, a)| *s -= a);
        }
        let prod = row_sums.iter().fold(Complex64::new(1.0, 0.0), |p, s| p * s);
        if gray.count_ones() % 2 == 1 {
            total -= prod;
        } else {
            total += prod;
        }
    }

    Ok(if n % 2 == 1 { -total } else { total })
}
