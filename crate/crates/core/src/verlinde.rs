//! Fusion-rule dimensions of conformal blocks on the pointed projective line.
//!
//! Tensor products come from Brauer-Klimyk over Freudenthal characters; the level-`l`
//! truncation applies the affine Weyl group at shifted level `l + h^vee` with signs.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::sync::{Arc, OnceLock};

use num_integer::Integer;
use num_traits::ToPrimitive;
use parking_lot::RwLock;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::linalg;
use crate::rootsys::RootSystem;

/// Dominant weights in fundamental-weight coordinates with their multiplicities.
pub type WeightTable = BTreeMap<Vec<i64>, i64>;

#[derive(Clone, Debug)]
pub struct FusionQuery {
    pub rs: Arc<RootSystem>,
    pub weights: Vec<Vec<i64>>,
    pub level: i64,
}

impl FusionQuery {
    pub fn new(rs: Arc<RootSystem>, weights: Vec<Vec<i64>>, level: i64) -> Result<Self> {
        if weights.is_empty() {
            return invalid("no weights given");
        }
        if level < 0 {
            return invalid("the level must be nonnegative");
        }
        for w in &weights {
            if w.len() != rs.rank {
                return invalid(format!("weight {w:?} has the wrong length"));
            }
            if w.iter().any(|&c| c < 0) {
                return invalid(format!("weight {w:?} is not dominant"));
            }
            if rs.pair_coroot_i(w, rs.theta_index()) > level {
                return invalid(format!("weight {w:?} is above level {level}"));
            }
        }
        Ok(FusionQuery { rs, weights, level })
    }

    /// Whether the weights sum into the root lattice.
    pub fn in_root_lattice(&self) -> bool {
        in_root_lattice(&self.rs, &self.weights)
    }
}

pub fn in_root_lattice(rs: &RootSystem, weights: &[Vec<i64>]) -> bool {
    let mut total = vec![0i64; rs.rank];
    for w in weights {
        for (t, c) in total.iter_mut().zip(w) {
            *t += c;
        }
    }
    rs.weight_to_root_coords_i(&total).iter().all(|c| c.is_integer())
}

struct Geometry {
    /// Invariant form on fundamental weights, scaled to integers.
    gram: Vec<Vec<i64>>,
    roots: Vec<Vec<i64>>,
    simple: Vec<Vec<i64>>,
    rho: Vec<i64>,
}

impl Geometry {
    fn new(rs: &RootSystem) -> Self {
        let g = rs.weight_gram();
        let den = g
            .iter()
            .flatten()
            .fold(1i64, |acc, x| acc.lcm(&x.denom().to_i64().unwrap_or(1)));
        let gram = g
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| linalg::to_i64(&(x * linalg::q(den))).expect("integral form"))
                    .collect()
            })
            .collect();
        Geometry {
            gram,
            roots: (0..rs.n_positive()).map(|k| rs.root_weight(k).to_vec()).collect(),
            simple: (0..rs.rank).map(|i| rs.simple_root_weight(i)).collect(),
            rho: vec![1; rs.rank],
        }
    }

    fn inner(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut s = 0;
        for (i, x) in a.iter().enumerate() {
            if *x != 0 {
                s += x * self.gram[i].iter().zip(b).map(|(g, y)| g * y).sum::<i64>();
            }
        }
        s
    }

    fn reflect(&self, x: &mut [i64], i: usize) {
        let c = x[i];
        for (v, a) in x.iter_mut().zip(&self.simple[i]) {
            *v -= c * a;
        }
    }

    fn dominant(&self, mut x: Vec<i64>) -> Vec<i64> {
        while let Some(i) = x.iter().position(|&c| c < 0) {
            self.reflect(&mut x, i);
        }
        x
    }
}

fn add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Dominant weight multiplicities of the irreducible representation of highest weight `lambda`.
pub fn dominant_character(rs: &RootSystem, lambda: &[i64]) -> Result<WeightTable> {
    if lambda.len() != rs.rank || lambda.iter().any(|&c| c < 0) {
        return invalid(format!("{lambda:?} is not a dominant weight"));
    }
    let geo = Geometry::new(rs);
    // dominant weights below lambda, by depth
    let mut layers: Vec<Vec<Vec<i64>>> = vec![vec![lambda.to_vec()]];
    let mut seen: HashSet<Vec<i64>> = HashSet::from([lambda.to_vec()]);
    loop {
        let mut next = Vec::new();
        for mu in layers.last().unwrap() {
            for a in &geo.roots {
                let nu = sub(mu, a);
                if nu.iter().all(|&c| c >= 0) && seen.insert(nu.clone()) {
                    next.push(nu);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        layers.push(next);
    }
    let mut all: Vec<Vec<i64>> = layers.into_iter().flatten().collect();
    let depth = |mu: &Vec<i64>| -> Vec<i64> {
        rs.weight_to_root_coords_i(&sub(lambda, mu))
            .iter()
            .map(|c| linalg::to_i64(c).expect("root lattice"))
            .collect()
    };
    all.sort_by_key(|mu| depth(mu).iter().sum::<i64>());
    let lr = add(lambda, &geo.rho);
    let top = geo.inner(&lr, &lr);
    let mut mult: HashMap<Vec<i64>, i64> = HashMap::new();
    mult.insert(lambda.to_vec(), 1);
    for mu in all.iter().skip(1) {
        let mr = add(mu, &geo.rho);
        let den = top - geo.inner(&mr, &mr);
        let mut num = 0i64;
        for a in &geo.roots {
            let mut nu = add(mu, a);
            loop {
                let m = mult.get(&geo.dominant(nu.clone())).copied().unwrap_or(0);
                if m == 0 {
                    break;
                }
                num += m * geo.inner(&nu, a);
                nu = add(&nu, a);
            }
        }
        num *= 2;
        if den <= 0 || num % den != 0 {
            return Err(Error::Inconsistent(format!(
                "Freudenthal recursion is not integral at {mu:?}"
            )));
        }
        let m = num / den;
        if m > 0 {
            mult.insert(mu.clone(), m);
        }
    }
    Ok(mult.into_iter().collect())
}

/// Every weight of the representation with its multiplicity.
pub fn character(rs: &RootSystem, lambda: &[i64]) -> Result<Arc<Vec<(Vec<i64>, i64)>>> {
    let key = (rs.label(), lambda.to_vec());
    if let Some(c) = characters().read().get(&key) {
        return Ok(c.clone());
    }
    let geo = Geometry::new(rs);
    let mut out = Vec::new();
    for (mu, m) in dominant_character(rs, lambda)? {
        let mut orbit: HashSet<Vec<i64>> = HashSet::from([mu.clone()]);
        let mut queue = VecDeque::from([mu]);
        while let Some(x) = queue.pop_front() {
            for i in 0..rs.rank {
                if x[i] != 0 {
                    let mut y = x.clone();
                    geo.reflect(&mut y, i);
                    if orbit.insert(y.clone()) {
                        queue.push_back(y);
                    }
                }
            }
        }
        let mut orbit: Vec<_> = orbit.into_iter().collect();
        orbit.sort();
        out.extend(orbit.into_iter().map(|x| (x, m)));
    }
    let c = Arc::new(out);
    characters().write().insert(key, c.clone());
    Ok(c)
}

type CharKey = (String, Vec<i64>);

fn characters() -> &'static RwLock<HashMap<CharKey, Arc<Vec<(Vec<i64>, i64)>>>> {
    static CACHE: OnceLock<RwLock<HashMap<CharKey, Arc<Vec<(Vec<i64>, i64)>>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Move `x` (a `rho`-shifted weight) into the dominant alcove at shifted level `k`.
/// `None` when `x` lies on a wall.
fn reflect_into_alcove(rs: &RootSystem, geo: &Geometry, mut x: Vec<i64>, k: Option<i64>) -> Option<(Vec<i64>, i64)> {
    let theta = rs.theta_weight();
    let t = rs.theta_index();
    let mut sign = 1;
    loop {
        if x.iter().any(|&c| c == 0) {
            return None;
        }
        if let Some(i) = x.iter().position(|&c| c < 0) {
            geo.reflect(&mut x, i);
            sign = -sign;
            continue;
        }
        let Some(k) = k else {
            return Some((x, sign));
        };
        let h = rs.pair_coroot_i(&x, t);
        if h == k {
            return None;
        }
        if h < k {
            return Some((x, sign));
        }
        for (v, a) in x.iter_mut().zip(&theta) {
            *v -= (h - k) * a;
        }
        sign = -sign;
    }
}

/// Decomposition of `V_a (x) V_b`, truncated to level `level` when given.
pub fn product(rs: &RootSystem, a: &[i64], b: &[i64], level: Option<i64>) -> Result<WeightTable> {
    let geo = Geometry::new(rs);
    let k = level.map(|l| l + rs.dual_coxeter);
    let (small, big) = if character(rs, a)?.len() <= character(rs, b)?.len() {
        (a, b)
    } else {
        (b, a)
    };
    let mut out = WeightTable::new();
    for (nu, m) in character(rs, small)?.iter() {
        let x = add(&add(big, nu), &geo.rho);
        if let Some((y, sign)) = reflect_into_alcove(rs, &geo, x, k) {
            *out.entry(sub(&y, &geo.rho)).or_insert(0) += sign * m;
        }
    }
    out.retain(|_, m| *m != 0);
    if out.values().any(|&m| m < 0) {
        return Err(Error::Inconsistent("negative fusion coefficient".into()));
    }
    Ok(out)
}

/// Iterated product of all weights, truncated at `level` when given.
pub fn multi_product(rs: &RootSystem, weights: &[Vec<i64>], level: Option<i64>) -> Result<WeightTable> {
    let mut acc = WeightTable::from([(vec![0; rs.rank], 1)]);
    for w in weights {
        let mut next = WeightTable::new();
        for (mu, m) in &acc {
            for (nu, c) in product(rs, mu, w, level)? {
                *next.entry(nu).or_insert(0) += m * c;
            }
        }
        acc = next;
    }
    Ok(acc)
}

/// Dimension of the space of conformal blocks.
pub fn fusion_dim(query: &FusionQuery) -> Result<u64> {
    invariant_dim(&query.rs, &query.weights, Some(query.level))
}

/// Dimension of the invariants in the tensor product, at finite level or classically.
pub fn invariant_dim(rs: &RootSystem, weights: &[Vec<i64>], level: Option<i64>) -> Result<u64> {
    let prod = multi_product(rs, weights, level)?;
    Ok(prod.get(&vec![0; rs.rank]).copied().unwrap_or(0) as u64)
}

/// `fusion_dim(n * weights, n * level)` for `n = 1..=max`.
#[derive(Clone, Debug, Serialize)]
pub struct ScanRow {
    pub multiple: i64,
    pub dim: u64,
}

pub fn scan(query: &FusionQuery, max: i64) -> Result<Vec<ScanRow>> {
    (1..=max)
        .map(|n| {
            let weights: Vec<Vec<i64>> =
                query.weights.iter().map(|w| w.iter().map(|c| c * n).collect()).collect();
            let q = FusionQuery::new(query.rs.clone(), weights, query.level * n)?;
            Ok(ScanRow { multiple: n, dim: fusion_dim(&q)? })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use linalg::{q, Q};

    fn rs(label: &str) -> Arc<RootSystem> {
        Arc::new(RootSystem::parse(label).unwrap())
    }

    fn weyl_dimension(rs: &RootSystem, lambda: &[i64]) -> Q {
        let lr: Vec<Q> = lambda.iter().map(|&c| q(c + 1)).collect();
        let rho = vec![q(1); rs.rank];
        (0..rs.n_positive())
            .map(|k| rs.pair_coroot(&lr, k) / rs.pair_coroot(&rho, k))
            .product()
    }

    #[test]
    fn characters_have_weyl_dimension() {
        for (label, lambda) in [
            ("A2", vec![2, 1]),
            ("B2", vec![1, 2]),
            ("C3", vec![0, 1, 1]),
            ("G2", vec![1, 1]),
            ("D4", vec![0, 2, 0, 0]),
            ("A3", vec![1, 0, 2]),
        ] {
            let r = rs(label);
            let total: i64 = character(&r, &lambda).unwrap().iter().map(|(_, m)| m).sum();
            assert_eq!(q(total), weyl_dimension(&r, &lambda), "{label} {lambda:?}");
        }
    }

    #[test]
    fn adjoint_zero_weight() {
        let r = rs("D4");
        let c = dominant_character(&r, &[0, 1, 0, 0]).unwrap();
        assert_eq!(c[&vec![0, 0, 0, 0]], 4);
    }

    #[test]
    fn su2_fusion_rules() {
        let r = rs("A1");
        for k in 0..6 {
            for a in 0..=k {
                for b in 0..=k {
                    let got = product(&r, &[a], &[b], Some(k)).unwrap();
                    for c in 0..=k {
                        let want = (a - b).abs() <= c && c <= (a + b).min(2 * k - a - b) && (a + b + c) % 2 == 0;
                        assert_eq!(got.get(&vec![c]).copied().unwrap_or(0), i64::from(want));
                    }
                }
            }
        }
    }

    #[test]
    fn level_one_rings() {
        let r = rs("D4");
        let p = product(&r, &[1, 0, 0, 0], &[0, 0, 1, 0], Some(1)).unwrap();
        assert_eq!(p, WeightTable::from([(vec![0, 0, 0, 1], 1)]));
        let p = product(&r, &[1, 0, 0, 0], &[1, 0, 0, 0], Some(1)).unwrap();
        assert_eq!(p, WeightTable::from([(vec![0, 0, 0, 0], 1)]));
        let g = rs("G2");
        let tau: Vec<i64> = (0..2)
            .map(|i| if g.pair_coroot_i(&[i64::from(i == 0), i64::from(i == 1)], g.theta_index()) == 1 { 1 } else { 0 })
            .collect();
        let p = product(&g, &tau, &tau, Some(1)).unwrap();
        assert_eq!(p, WeightTable::from([(vec![0, 0], 1), (tau.clone(), 1)]));
    }

    #[test]
    fn saturation_failure() {
        let r = rs("D4");
        let w = vec![0, 1, 0, 0];
        let q1 = FusionQuery::new(r.clone(), vec![w.clone(); 3], 2).unwrap();
        assert_eq!(fusion_dim(&q1).unwrap(), 0);
        let q2 = FusionQuery::new(r.clone(), vec![vec![0, 2, 0, 0]; 3], 4).unwrap();
        assert!(fusion_dim(&q2).unwrap() >= 1);
        assert!(q1.in_root_lattice());
        assert_eq!(invariant_dim(&r, &[w.clone(), w.clone(), w], None).unwrap(), 1);
    }

    #[test]
    fn vacuum_and_validation() {
        let r = rs("B3");
        for l in 0..4 {
            let qy = FusionQuery::new(r.clone(), vec![vec![0; 3]; 4], l).unwrap();
            assert_eq!(fusion_dim(&qy).unwrap(), 1);
        }
        assert!(FusionQuery::new(r.clone(), vec![vec![2, 0, 0]], 1).is_err());
        assert!(FusionQuery::new(r.clone(), vec![], 1).is_err());
        assert!(FusionQuery::new(r, vec![vec![-1, 0, 0]], 3).is_err());
    }

    #[test]
    fn large_level_is_classical() {
        let r = rs("A2");
        let ws = vec![vec![1, 1], vec![2, 0], vec![0, 2], vec![1, 1]];
        let total: i64 = ws.iter().map(|w| r.pair_coroot_i(w, r.theta_index())).sum();
        let classical = invariant_dim(&r, &ws, None).unwrap();
        assert_eq!(invariant_dim(&r, &ws, Some(total)).unwrap(), classical);
        assert!(invariant_dim(&r, &ws, Some(2)).unwrap() <= classical);
    }
}
