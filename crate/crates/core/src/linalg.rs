//! Exact linear algebra over arbitrary-precision rationals.
//!
//! Deterministic by construction: pivots are chosen as the first nonzero
//! entry in fixed row/column order, so repeated runs produce identical
//! solutions and identical free-column choices.

use num_rational::BigRational;
use num_traits::Zero;

/// Solves `A x = b` exactly over the rationals.
///
/// Returns the unique solution supported on the pivot columns (all free
/// variables set to zero), or `None` when the system is inconsistent.
pub fn solve_exact(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let nrows = a.len();
    assert_eq!(nrows, b.len(), "matrix/rhs dimension mismatch");
    let ncols = a.first().map_or(0, Vec::len);

    // Augmented working copy.
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            assert_eq!(row.len(), ncols, "ragged matrix");
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();

    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut next_row = 0;
    for col in 0..ncols {
        let Some(pivot_row) = (next_row..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(next_row, pivot_row);
        let pivot = m[next_row][col].clone();
        for entry in m[next_row].iter_mut() {
            *entry /= pivot.clone();
        }
        for r in 0..nrows {
            if r != next_row && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in 0..=ncols {
                    let delta = &factor * &m[next_row][c];
                    m[r][c] -= delta;
                }
            }
        }
        pivot_cols.push(col);
        next_row += 1;
        if next_row == nrows {
            break;
        }
    }

    // Inconsistent iff a zero row has nonzero rhs.
    for r in next_row..nrows {
        if m[r][..ncols].iter().all(Zero::is_zero) && !m[r][ncols].is_zero() {
            return None;
        }
    }

    let mut x = vec![BigRational::zero(); ncols];
    for (row, &col) in pivot_cols.iter().enumerate() {
        x[col] = m[row][ncols].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn qi(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn solves_square_system() {
        // x + y = 3, x - y = 1  ->  x = 2, y = 1
        let a = vec![vec![qi(1), qi(1)], vec![qi(1), qi(-1)]];
        let b = vec![qi(3), qi(1)];
        let x = solve_exact(&a, &b).unwrap();
        assert_eq!(x, vec![qi(2), qi(1)]);
    }

    #[test]
    fn underdetermined_sets_free_vars_to_zero() {
        // x + y + z = 2 with pivot on the first column.
        let a = vec![vec![qi(1), qi(1), qi(1)]];
        let b = vec![qi(2)];
        let x = solve_exact(&a, &b).unwrap();
        assert_eq!(x, vec![qi(2), qi(0), qi(0)]);
    }

    #[test]
    fn detects_inconsistency() {
        // x + y = 1, 2x + 2y = 3
        let a = vec![vec![qi(1), qi(1)], vec![qi(2), qi(2)]];
        let b = vec![qi(1), qi(3)];
        assert!(solve_exact(&a, &b).is_none());
    }

    #[test]
    fn rational_arithmetic_is_exact() {
        // 3x = 1 -> x = 1/3
        let a = vec![vec![qi(3)]];
        let b = vec![BigRational::one()];
        let x = solve_exact(&a, &b).unwrap();
        assert_eq!(x, vec![q(1, 3)]);
    }

    #[test]
    fn zero_columns_are_skipped() {
        let a = vec![vec![qi(0), qi(2)], vec![qi(0), qi(0)]];
        let b = vec![qi(4), qi(0)];
        let x = solve_exact(&a, &b).unwrap();
        assert_eq!(x, vec![qi(0), qi(2)]);
    }
}
