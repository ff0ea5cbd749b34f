//! Small dense exact linear algebra over `Q`.

use num_traits::{One, Zero};

use crate::Q;

pub type Matrix = Vec<Vec<Q>>;

pub fn to_q(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| Q::from_integer(x)).collect()
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Reduces `m` to reduced row echelon form in place and returns the pivot
/// columns.
pub fn rref(m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
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
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c];
                for j in 0..cols {
                    let delta = f * m[r][j];
                    m[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<Q>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// A basis of the row space of `rows` (nonzero rows of the RREF).
pub fn row_space_basis(rows: &[Vec<Q>]) -> Matrix {
    let mut m = rows.to_vec();
    let k = rref(&mut m).len();
    m.truncate(k);
    m
}

/// Coefficients `c` with `sum_i c[i] * vectors[i] == target`, if any.
/// When the vectors are dependent, free coefficients are set to zero.
pub fn solve_combination(vectors: &[Vec<Q>], target: &[Q]) -> Option<Vec<Q>> {
    let n = vectors.len();
    let dim = target.len();
    // Augmented system: columns are the vectors, last column the target.
    let mut m: Matrix = (0..dim)
        .map(|i| {
            let mut row: Vec<Q> = vectors.iter().map(|v| v[i]).collect();
            row.push(target[i]);
            row
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.contains(&n) {
        return None;
    }
    let mut c = vec![Q::zero(); n];
    for (row, &p) in pivots.iter().enumerate() {
        c[p] = m[row][n];
    }
    Some(c)
}

pub fn inverse(m: &[Vec<Q>]) -> Option<Matrix> {
    let n = m.len();
    let mut aug: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Orthogonal projector (standard dot product) onto the complement of the
/// span of `span` inside `Q^dim`.
pub fn complement_projector(span: &[Vec<Q>], dim: usize) -> Matrix {
    let basis = row_space_basis(span);
    let mut p: Matrix = (0..dim)
        .map(|i| (0..dim).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
        .collect();
    if basis.is_empty() {
        return p;
    }
    let gram: Matrix = basis
        .iter()
        .map(|a| basis.iter().map(|b| dot(a, b)).collect())
        .collect();
    let ginv = inverse(&gram).expect("row-space basis has invertible Gram matrix");
    // P = I - A^T G^{-1} A
    let k = basis.len();
    for i in 0..dim {
        for j in 0..dim {
            let mut s = Q::zero();
            for a in 0..k {
                for b in 0..k {
                    s += basis[a][i] * ginv[a][b] * basis[b][j];
                }
            }
            p[i][j] -= s;
        }
    }
    p
}

pub fn apply(m: &[Vec<Q>], v: &[Q]) -> Vec<Q> {
    m.iter().map(|row| dot(row, v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n, d)
    }

    #[test]
    fn solve_and_rank() {
        let v = vec![to_q(&[1, -1, 0]), to_q(&[0, 1, -1])];
        assert_eq!(rank(&v), 2);
        let c = solve_combination(&v, &to_q(&[2, -1, -1])).unwrap();
        assert_eq!(c, to_q(&[2, 1]));
        assert!(solve_combination(&v, &to_q(&[1, 1, 1])).is_none());
    }

    #[test]
    fn projector_onto_center_of_gl3() {
        let roots = vec![to_q(&[1, -1, 0]), to_q(&[0, 1, -1]), to_q(&[1, 0, -1])];
        let p = complement_projector(&roots, 3);
        assert_eq!(apply(&p, &to_q(&[3, 0, 0])), vec![q(1, 1); 3]);
        assert_eq!(apply(&p, &to_q(&[2, 1, 0])), vec![q(1, 1); 3]);
    }

    #[test]
    fn inverse_roundtrip() {
        let m = vec![to_q(&[2, -1]), to_q(&[-1, 2])];
        let inv = inverse(&m).unwrap();
        assert_eq!(inv, vec![vec![q(2, 3), q(1, 3)], vec![q(1, 3), q(2, 3)]]);
        assert!(inverse(&[to_q(&[1, 1]), to_q(&[2, 2])]).is_none());
    }
}
