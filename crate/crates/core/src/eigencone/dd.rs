//! Double description for pointed cones `{x : A x >= 0}` with integer rows.

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::linalg::{self, Q};

#[derive(Clone)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn count(&self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }

    fn subset_of(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }
}

struct Ray {
    v: Vec<i64>,
    zeros: Bits,
}

fn eval(row: &[i64], v: &[i64]) -> i128 {
    row.iter().zip(v).map(|(&a, &b)| a as i128 * b as i128).sum()
}

fn normalize(v: Vec<i128>) -> Result<Vec<i64>> {
    let g = v.iter().fold(0i128, |g, &x| g.gcd(&x));
    let g = if g == 0 { 1 } else { g };
    v.into_iter()
        .map(|x| i64::try_from(x / g).map_err(|_| Error::Overflow("double description")))
        .collect()
}

/// Primitive integer generators of the extremal rays of `{x : rows . x >= 0}`, sorted.
pub fn extremal_rays(rows: &[Vec<i64>], dim: usize) -> Result<Vec<Vec<i64>>> {
    if rows.iter().any(|r| r.len() != dim) {
        return Err(Error::Invalid("inequality of the wrong length".into()));
    }
    let qrows: Vec<Vec<Q>> = rows.iter().map(|r| linalg::qvec(r)).collect();
    // greedy basis of the row space
    let mut chosen: Vec<usize> = Vec::new();
    let mut basis: Vec<Vec<Q>> = Vec::new();
    for (i, r) in qrows.iter().enumerate() {
        if chosen.len() == dim {
            break;
        }
        let mut trial = basis.clone();
        trial.push(r.clone());
        if linalg::rank(&trial) > basis.len() {
            basis.push(r.clone());
            chosen.push(i);
        }
    }
    if chosen.len() < dim {
        return Err(Error::Invalid(
            "cone is not pointed: inequalities do not have full rank".into(),
        ));
    }
    let inv = linalg::inverse(&basis).expect("independent rows");
    let m = rows.len();
    let mut rays: Vec<Ray> = (0..dim)
        .map(|k| {
            let col: Vec<Q> = inv.iter().map(|r| r[k].clone()).collect();
            let v = linalg::primitive_i64(&col).ok_or(Error::Overflow("double description"))?;
            let mut zeros = Bits::new(m);
            for (t, &i) in chosen.iter().enumerate() {
                if t != k {
                    zeros.set(i);
                }
            }
            Ok(Ray { v, zeros })
        })
        .collect::<Result<_>>()?;
    let mut done = vec![false; m];
    for &i in &chosen {
        done[i] = true;
    }
    for i in 0..m {
        if done[i] {
            continue;
        }
        done[i] = true;
        let row = &rows[i];
        let vals: Vec<i128> = rays.iter().map(|r| eval(row, &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&k| vals[k] > 0).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&k| vals[k] < 0).collect();
        if neg.is_empty() {
            for (k, r) in rays.iter_mut().enumerate() {
                if vals[k] == 0 {
                    r.zeros.set(i);
                }
            }
            continue;
        }
        let mut fresh: Vec<Ray> = Vec::new();
        for &p in &pos {
            for &n in &neg {
                let z = rays[p].zeros.and(&rays[n].zeros);
                if (z.count() as usize) + 2 < dim {
                    continue;
                }
                let blocked = rays
                    .iter()
                    .enumerate()
                    .any(|(k, r)| k != p && k != n && z.subset_of(&r.zeros));
                if blocked {
                    continue;
                }
                let (a, b) = (vals[p], -vals[n]);
                let mut comb = Vec::with_capacity(dim);
                for (x, y) in rays[p].v.iter().zip(&rays[n].v) {
                    let t = (b.checked_mul(*x as i128))
                        .and_then(|s| a.checked_mul(*y as i128).and_then(|u| s.checked_add(u)))
                        .ok_or(Error::Overflow("double description"))?;
                    comb.push(t);
                }
                let mut zeros = z;
                zeros.set(i);
                fresh.push(Ray {
                    v: normalize(comb)?,
                    zeros,
                });
            }
        }
        let mut kept: Vec<Ray> = Vec::with_capacity(rays.len() + fresh.len());
        for (k, mut r) in rays.into_iter().enumerate() {
            if vals[k] > 0 {
                kept.push(r);
            } else if vals[k] == 0 {
                r.zeros.set(i);
                kept.push(r);
            }
        }
        kept.extend(fresh);
        rays = kept;
    }
    let mut out: Vec<Vec<i64>> = rays.into_iter().map(|r| r.v).collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// Facet normals of the cone generated by `rays` (assumed full-dimensional).
pub fn facets_from_rays(rays: &[Vec<i64>], dim: usize) -> Result<Vec<Vec<i64>>> {
    extremal_rays(rays, dim)
}

/// Whether `row . x >= 0` is facet-defining for the cone spanned by `rays`.
pub fn is_facet(row: &[i64], rays: &[Vec<i64>], dim: usize) -> bool {
    let tight: Vec<Vec<i64>> = rays
        .iter()
        .filter(|r| eval(row, r) == 0)
        .cloned()
        .collect();
    linalg::rank_i64(&tight) + 1 == dim
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orthant() {
        let rows = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        let rays = extremal_rays(&rows, 3).unwrap();
        assert_eq!(rays, vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]);
    }

    #[test]
    fn square_pyramid() {
        // cone over a square: x3 +- x1 >= 0, x3 +- x2 >= 0
        let rows = vec![vec![1, 0, 1], vec![-1, 0, 1], vec![0, 1, 1], vec![0, -1, 1]];
        let rays = extremal_rays(&rows, 3).unwrap();
        assert_eq!(
            rays,
            vec![vec![-1, -1, 1], vec![-1, 1, 1], vec![1, -1, 1], vec![1, 1, 1]]
        );
        let back = facets_from_rays(&rays, 3).unwrap();
        let mut want = rows.clone();
        want.sort();
        assert_eq!(back, want);
    }

    #[test]
    fn redundant_rows_are_harmless() {
        let rows = vec![vec![1, 0], vec![0, 1], vec![1, 1], vec![2, 1]];
        assert_eq!(extremal_rays(&rows, 2).unwrap(), vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn lineality_is_reported() {
        let rows = vec![vec![1, 0, 0], vec![0, 1, 0]];
        assert!(extremal_rays(&rows, 3).is_err());
    }
}
