//! Small quantum cohomology of `G/B` in the codimension basis, one row `x -> sigma_x * sigma_v`
//! at a time, driven by the quantum Chevalley formula.

use std::collections::HashMap;
use std::sync::Arc;

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use parking_lot::RwLock;

use crate::error::{Error, Result};
use crate::linalg::{self, Q};
use crate::rootsys::{ElemId, RootSystem, WeylGroup};

/// Degrees in simple-coroot coordinates, eight bits per coordinate.
pub type Packed = u64;

const BITS: u32 = 8;

pub fn pack(d: &[i64]) -> Option<Packed> {
    let mut p: u64 = 0;
    for (k, &x) in d.iter().enumerate() {
        if !(0..256).contains(&x) {
            return None;
        }
        p |= (x as u64) << (BITS * k as u32);
    }
    Some(p)
}

pub fn unpack(p: Packed, n: usize) -> Vec<i64> {
    (0..n).map(|k| ((p >> (BITS * k as u32)) & 0xff) as i64).collect()
}

/// One term `coeff * q^deg * sigma_elem`.
pub type Term = (ElemId, Packed, i64);

#[derive(Default)]
struct Chevalley {
    classical: Vec<(ElemId, i64)>,
    quantum: Vec<(ElemId, Packed, i64)>,
}

/// `sigma_x = (1/den) * sum coeff * C(j, x')` with `C` the classical Chevalley part.
struct Recipe {
    den: i64,
    parts: Vec<(usize, ElemId, i64)>,
}

pub struct BorelEngine {
    pub rs: Arc<RootSystem>,
    pub weyl: Arc<WeylGroup>,
    chev: Vec<Vec<Chevalley>>,
    recipes: Vec<Recipe>,
    rows: RwLock<HashMap<ElemId, Arc<Vec<Vec<Term>>>>>,
}

impl BorelEngine {
    pub fn new(rs: Arc<RootSystem>) -> Result<Self> {
        let weyl = rs.weyl()?;
        let n = rs.rank;
        let order = weyl.order();
        let mut chev: Vec<Vec<Chevalley>> = (0..n)
            .map(|_| (0..order).map(|_| Chevalley::default()).collect())
            .collect();
        for w in weyl.elements() {
            let l = weyl.length(w) as i64;
            for k in 0..rs.n_positive() {
                let y = weyl.mul(w, weyl.reflection(k));
                let ly = weyl.length(y) as i64;
                let cor = &rs.coroots[k];
                let two_rho: i64 = 2 * cor.iter().sum::<i64>();
                let quantum = ly == l + 1 - two_rho;
                if ly != l + 1 && !quantum {
                    continue;
                }
                let deg = if quantum {
                    Some(pack(cor).ok_or(Error::Overflow("degree packing"))?)
                } else {
                    None
                };
                for j in 0..n {
                    let c = cor[j];
                    if c == 0 {
                        continue;
                    }
                    let entry = &mut chev[j][w as usize];
                    match deg {
                        None => entry.classical.push((y, c)),
                        Some(d) => entry.quantum.push((y, d, c)),
                    }
                }
            }
        }
        let recipes = build_recipes(&weyl, &chev, n)?;
        Ok(BorelEngine {
            rs,
            weyl,
            chev,
            recipes,
            rows: RwLock::new(HashMap::new()),
        })
    }

    pub fn rank(&self) -> usize {
        self.rs.rank
    }

    /// Classical and quantum Chevalley terms of `sigma_{s_j} * sigma_w`.
    pub fn chevalley(&self, j: usize, w: ElemId) -> (Vec<(ElemId, i64)>, Vec<Term>) {
        let c = &self.chev[j][w as usize];
        (c.classical.clone(), c.quantum.clone())
    }

    /// `sigma_x * sigma_v` for every `x`, indexed by `x`.
    pub fn row(&self, v: ElemId) -> Result<Arc<Vec<Vec<Term>>>> {
        if let Some(r) = self.rows.read().get(&v) {
            return Ok(r.clone());
        }
        let row = Arc::new(self.compute_row(v)?);
        self.rows.write().entry(v).or_insert_with(|| row.clone());
        Ok(row)
    }

    pub fn product(&self, u: ElemId, v: ElemId) -> Result<Vec<Term>> {
        Ok(self.row(v)?[u as usize].clone())
    }

    fn compute_row(&self, v: ElemId) -> Result<Vec<Vec<Term>>> {
        let order = self.weyl.order();
        let mut rows: Vec<Vec<Term>> = Vec::with_capacity(order);
        rows.push(vec![(v, 0, 1)]);
        for x in 1..order {
            let recipe = &self.recipes[x];
            let mut acc: HashMap<(ElemId, Packed), i128> = HashMap::new();
            for &(j, xp, a) in &recipe.parts {
                let a = a as i128;
                for &(z, e, c) in &rows[xp as usize] {
                    let ch = &self.chev[j][z as usize];
                    let f = a * c as i128;
                    for &(w, cc) in &ch.classical {
                        *acc.entry((w, e)).or_insert(0) += f * cc as i128;
                    }
                    for &(w, dq, cq) in &ch.quantum {
                        *acc.entry((w, e + dq)).or_insert(0) += f * cq as i128;
                    }
                }
                for &(y, dq, cq) in &self.chev[j][xp as usize].quantum {
                    let f = a * cq as i128;
                    for &(z, e, c) in &rows[y as usize] {
                        *acc.entry((z, e + dq)).or_insert(0) -= f * c as i128;
                    }
                }
            }
            let den = recipe.den as i128;
            let mut terms: Vec<Term> = Vec::with_capacity(acc.len());
            for ((w, e), c) in acc {
                if c == 0 {
                    continue;
                }
                if c % den != 0 {
                    return Err(Error::Inconsistent(format!(
                        "non-integral structure constant for {} * {}",
                        self.weyl.format(x as ElemId),
                        self.weyl.format(v)
                    )));
                }
                let c = i64::try_from(c / den).map_err(|_| Error::Overflow("G/B structure constants"))?;
                terms.push((w, e, c));
            }
            terms.sort_unstable();
            rows.push(terms);
        }
        Ok(rows)
    }
}

fn build_recipes(weyl: &WeylGroup, chev: &[Vec<Chevalley>], n: usize) -> Result<Vec<Recipe>> {
    let order = weyl.order();
    let max_len = weyl.length(weyl.w0());
    let mut levels: Vec<Vec<ElemId>> = vec![Vec::new(); max_len + 1];
    for w in weyl.elements() {
        levels[weyl.length(w)].push(w);
    }
    let mut recipes: Vec<Recipe> = (0..order)
        .map(|_| Recipe {
            den: 1,
            parts: Vec::new(),
        })
        .collect();
    for l in 1..=max_len {
        let level = &levels[l];
        let m = level.len();
        let pos: HashMap<ElemId, usize> = level.iter().enumerate().map(|(k, &w)| (w, k)).collect();
        let mut candidates: Vec<(usize, ElemId)> = Vec::new();
        for &x in level {
            for j in 0..n {
                if weyl.is_right_descent(x, j) {
                    candidates.push((j, weyl.rmul(x, j)));
                }
            }
        }
        for &xp in &levels[l - 1] {
            for j in 0..n {
                candidates.push((j, xp));
            }
        }
        let mut chosen: Vec<(usize, ElemId)> = Vec::new();
        let mut basis: Vec<Vec<Q>> = Vec::new();
        let mut echelon: Vec<(usize, Vec<Q>)> = Vec::new();
        for &(j, xp) in &candidates {
            if chosen.len() == m {
                break;
            }
            if chosen.contains(&(j, xp)) {
                continue;
            }
            let mut vec = vec![Q::zero(); m];
            for &(w, c) in &chev[j][xp as usize].classical {
                vec[pos[&w]] += linalg::q(c);
            }
            let mut red = vec.clone();
            for (p, row) in &echelon {
                if !red[*p].is_zero() {
                    let f = red[*p].clone() / &row[*p];
                    for k in 0..m {
                        let t = &row[k] * &f;
                        red[k] -= t;
                    }
                }
            }
            if let Some(p) = (0..m).find(|&k| !red[k].is_zero()) {
                echelon.push((p, red));
                chosen.push((j, xp));
                basis.push(vec);
            }
        }
        if chosen.len() < m {
            return Err(Error::Unresolved(format!(
                "Chevalley classes in codimension {l} do not span"
            )));
        }
        let inv = linalg::inverse(&basis).ok_or_else(|| {
            Error::Unresolved(format!("singular Chevalley system in codimension {l}"))
        })?;
        for (xi, &x) in level.iter().enumerate() {
            // sigma_x = sum_k inv[x][k] * basis[k]
            let row = &inv[xi];
            let mut den = num_bigint::BigInt::from(1);
            for c in row {
                den = den.lcm(c.denom());
            }
            let den_i = den.to_i64().ok_or(Error::Overflow("Chevalley recipe"))?;
            let mut parts = Vec::new();
            for (k, c) in row.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let a = (c * &den).to_integer().to_i64().ok_or(Error::Overflow("Chevalley recipe"))?;
                parts.push((chosen[k].0, chosen[k].1, a));
            }
            recipes[x as usize] = Recipe { den: den_i, parts };
        }
    }
    Ok(recipes)
}
