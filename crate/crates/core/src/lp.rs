//! Exact feasibility of `G y = x, y >= 0` by a phase-one simplex with Bland's rule.

use num_traits::{Signed, Zero};

use crate::linalg::Q;

/// Nonnegative `y` with `sum_k y_k gens[k] = x`, if one exists.
pub fn nonnegative_combination(x: &[Q], gens: &[Vec<Q>]) -> Option<Vec<Q>> {
    let m = x.len();
    let n = gens.len();
    // tableau rows: [gens columns | artificials | rhs]
    let width = n + m + 1;
    let mut t: Vec<Vec<Q>> = (0..m)
        .map(|i| {
            let flip = x[i].is_negative();
            let mut row = vec![Q::zero(); width];
            for k in 0..n {
                row[k] = if flip { -gens[k][i].clone() } else { gens[k][i].clone() };
            }
            row[n + i] = Q::from_integer(1.into());
            row[width - 1] = x[i].abs();
            row
        })
        .collect();
    let mut basis: Vec<usize> = (n..n + m).collect();
    // reduced costs of the phase-one objective sum of artificials
    loop {
        let mut cost: Vec<Q> = (0..width)
            .map(|k| if k >= n && k < n + m { Q::from_integer(1.into()) } else { Q::zero() })
            .collect();
        for (row, &b) in t.iter().zip(&basis) {
            if b >= n {
                for (c, v) in cost.iter_mut().zip(row) {
                    *c -= v;
                }
            }
        }
        for &b in &basis {
            cost[b] = Q::zero();
        }
        let Some(enter) = (0..n + m).find(|&k| cost[k].is_negative() && !basis.contains(&k)) else {
            break;
        };
        let mut leave: Option<(usize, Q)> = None;
        for (i, row) in t.iter().enumerate() {
            if row[enter].is_positive() {
                let ratio = &row[width - 1] / &row[enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let (li, _) = leave?;
        let piv = t[li][enter].clone();
        for v in t[li].iter_mut() {
            *v /= &piv;
        }
        let prow = t[li].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != li && !row[enter].is_zero() {
                let f = row[enter].clone();
                for (v, p) in row.iter_mut().zip(&prow) {
                    *v -= &f * p;
                }
            }
        }
        basis[li] = enter;
    }
    let infeasible = basis
        .iter()
        .enumerate()
        .any(|(i, &b)| b >= n && !t[i][width - 1].is_zero());
    if infeasible {
        return None;
    }
    let mut y = vec![Q::zero(); n];
    for (i, &b) in basis.iter().enumerate() {
        if b < n {
            y[b] = t[i][width - 1].clone();
        }
    }
    Some(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{q, qvec};

    #[test]
    fn feasible_and_infeasible() {
        let gens = vec![qvec(&[1, 0]), qvec(&[1, 1])];
        let y = nonnegative_combination(&qvec(&[3, 1]), &gens).unwrap();
        assert_eq!(y, vec![q(2), q(1)]);
        assert!(nonnegative_combination(&qvec(&[0, 1]), &gens).is_none());
        assert!(nonnegative_combination(&qvec(&[-1, 0]), &gens).is_none());
    }
}
