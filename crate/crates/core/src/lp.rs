//! Exact feasibility linear programming (phase-I simplex, Bland's rule).

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use crate::Q;

type R = Ratio<i128>;

fn widen(q: &Q) -> R {
    R::new(i128::from(*q.numer()), i128::from(*q.denom()))
}

fn narrow(r: &R) -> Q {
    Q::new(
        i64::try_from(*r.numer()).expect("certificate numerator fits in i64"),
        i64::try_from(*r.denom()).expect("certificate denominator fits in i64"),
    )
}

/// Find `x >= 0` with `a x = b`, if one exists. `a` is given row-wise.
pub fn nonnegative_solution(a: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let m = a.len();
    assert_eq!(m, b.len(), "row count of a must match b");
    let n = a.first().map_or(0, Vec::len);
    let width = n + m + 1;
    let rhs = n + m;
    let mut t: Vec<Vec<R>> = (0..m)
        .map(|i| {
            let flip = b[i].is_negative();
            let sign = |x: R| if flip { -x } else { x };
            let mut row: Vec<R> = a[i].iter().map(|q| sign(widen(q))).collect();
            row.extend((0..m).map(|k| if k == i { R::one() } else { R::zero() }));
            row.push(sign(widen(&b[i])));
            row
        })
        .collect();
    let mut basis: Vec<usize> = (n..n + m).collect();
    let mut cost: Vec<R> = vec![R::zero(); width];
    for row in &t {
        for j in (0..n).chain(std::iter::once(rhs)) {
            cost[j] -= row[j];
        }
    }
    while let Some(enter) = (0..n + m).find(|&j| cost[j].is_negative()) {
        let leave = (0..m)
            .filter(|&i| t[i][enter].is_positive())
            .min_by(|&i, &k| {
                let ri = t[i][rhs] / t[i][enter];
                let rk = t[k][rhs] / t[k][enter];
                ri.cmp(&rk).then(basis[i].cmp(&basis[k]))
            });
        let Some(p) = leave else {
            // Unbounded direction cannot occur in phase I (objective >= 0).
            unreachable!("phase-I objective is bounded");
        };
        let piv = t[p][enter];
        for x in t[p].iter_mut() {
            *x /= piv;
        }
        let prow = t[p].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != p && !row[enter].is_zero() {
                let f = row[enter];
                for (x, y) in row.iter_mut().zip(&prow) {
                    *x -= f * y;
                }
            }
        }
        let f = cost[enter];
        for (x, y) in cost.iter_mut().zip(&prow) {
            *x -= f * y;
        }
        basis[p] = enter;
    }
    if !cost[rhs].is_zero() {
        return None;
    }
    let mut x = vec![Q::zero(); n];
    for (i, &j) in basis.iter().enumerate() {
        if j < n {
            x[j] = narrow(&t[i][rhs]);
        }
    }
    Some(x)
}

/// Coefficients `lambda >= 0`, summing to one, with `sum lambda_j p_j = target`.
pub fn convex_combination(points: &[Vec<Q>], target: &[Q]) -> Option<Vec<Q>> {
    if points.is_empty() {
        return None;
    }
    let d = target.len();
    let mut a: Vec<Vec<Q>> = (0..d).map(|k| points.iter().map(|p| p[k]).collect()).collect();
    a.push(vec![Q::one(); points.len()]);
    let mut b = target.to_vec();
    b.push(Q::one());
    nonnegative_solution(&a, &b)
}
