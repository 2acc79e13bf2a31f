//! Exact rational linear algebra: reduced row echelon form and nullspaces.

use num_rational::BigRational;
use num_traits::{One, Zero};

/// Basis of {v : A v = 0} for a dense `rows × cols` matrix, one vector per free
/// column of the reduced row echelon form (free entry 1, pivots solved for).
pub fn nullspace(a: &[Vec<BigRational>], cols: usize) -> Vec<Vec<BigRational>> {
    let mut m: Vec<Vec<BigRational>> = a.to_vec();
    let rows = m.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = BigRational::one() / &m[r][c];
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (mij, mrj) in row[c..cols].iter_mut().zip(&pivot_row[c..cols]) {
                    *mij -= &f * mrj;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![BigRational::zero(); cols];
        v[free] = BigRational::one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -m[row][free].clone();
        }
        basis.push(v);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn rank_one() {
        let a = vec![vec![r(1), r(2), r(3)], vec![r(2), r(4), r(6)]];
        let ns = nullspace(&a, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for row in &a {
                let s: BigRational = row.iter().zip(v).map(|(x, y)| x * y).sum();
                assert!(s.is_zero());
            }
        }
    }

    #[test]
    fn empty_matrix_has_full_nullspace() {
        assert_eq!(nullspace(&[], 4).len(), 4);
    }

    #[test]
    fn full_rank_has_trivial_nullspace() {
        let a = vec![vec![r(0), r(1)], vec![r(3), r(1)]];
        assert!(nullspace(&a, 2).is_empty());
    }
}
