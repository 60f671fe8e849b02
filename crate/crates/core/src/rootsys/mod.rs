//! Root systems of the simple types, their Weyl groups and parabolic data.
//!
//! Weights are written in the basis of fundamental weights, coweights in the
//! basis of fundamental coweights, roots in the basis of simple roots and
//! coroots in the basis of simple coroots. Indices are 0-based internally and
//! 1-based whenever something is displayed.

mod levi;
mod parabolic;
mod weyl;

pub use levi::{component_type, InductionScalars, MuCandidates};
pub use parabolic::{Parabolic, ShiftCase, ThetaShift};
pub use weyl::{ElemId, WeylElement, WeylGroup};

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::linalg::{self, q, Q};

/// Largest Weyl group the tool is willing to enumerate.
pub const MAX_WEYL_ORDER: usize = 120_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum CartanType {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl CartanType {
    pub fn from_letter(c: char) -> Option<Self> {
        Some(match c.to_ascii_uppercase() {
            'A' => Self::A,
            'B' => Self::B,
            'C' => Self::C,
            'D' => Self::D,
            'E' => Self::E,
            'F' => Self::F,
            'G' => Self::G,
            _ => return None,
        })
    }

    pub fn letter(self) -> char {
        match self {
            Self::A => 'A',
            Self::B => 'B',
            Self::C => 'C',
            Self::D => 'D',
            Self::E => 'E',
            Self::F => 'F',
            Self::G => 'G',
        }
    }

    pub fn valid_rank(self, n: usize) -> bool {
        if n == 0 || n > 8 {
            return false;
        }
        match self {
            Self::A => true,
            Self::B | Self::C => n >= 2,
            Self::D => n >= 4,
            Self::E => (6..=8).contains(&n),
            Self::F => n == 4,
            Self::G => n == 2,
        }
    }
}

/// Cartan matrix with `a[i][j] = <alpha_i^vee, alpha_j>`, Bourbaki labelling.
pub fn cartan_matrix(t: CartanType, n: usize) -> Result<Vec<Vec<i64>>> {
    if !t.valid_rank(n) {
        return invalid(format!("no simple root system of type {}{}", t.letter(), n));
    }
    let mut a = vec![vec![0i64; n]; n];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    let mut link = |i: usize, j: usize| {
        a[i][j] = -1;
        a[j][i] = -1;
    };
    match t {
        CartanType::A | CartanType::B | CartanType::C => {
            for i in 0..n - 1 {
                link(i, i + 1);
            }
        }
        CartanType::D => {
            for i in 0..n - 2 {
                link(i, i + 1);
            }
            link(n - 3, n - 1);
        }
        CartanType::E => {
            link(0, 2);
            link(1, 3);
            for i in 2..n - 1 {
                link(i, i + 1);
            }
        }
        CartanType::F => {
            link(0, 1);
            link(1, 2);
            link(2, 3);
        }
        CartanType::G => link(0, 1),
    }
    match t {
        CartanType::B => a[n - 1][n - 2] = -2,
        CartanType::C => a[n - 2][n - 1] = -2,
        CartanType::F => a[2][1] = -2,
        CartanType::G => a[0][1] = -3,
        _ => {}
    }
    Ok(a)
}

pub struct RootSystem {
    pub kind: CartanType,
    pub rank: usize,
    pub cartan: Vec<Vec<i64>>,
    /// Positive roots in simple-root coordinates, sorted by height then lexicographically.
    pub positive_roots: Vec<Vec<i64>>,
    /// Coroots of the positive roots, in simple-coroot coordinates.
    pub coroots: Vec<Vec<i64>>,
    /// Invariant form on simple roots, normalised so that the highest root has square length 2.
    pub form: Vec<Vec<Q>>,
    pub theta: Vec<i64>,
    pub rho: Vec<i64>,
    pub dual_coxeter: i64,
    root_weights: Vec<Vec<i64>>,
    root_len2: Vec<Q>,
    cartan_inv: Vec<Vec<Q>>,
    root_index: HashMap<Vec<i64>, usize>,
    weight_index: HashMap<Vec<i64>, (usize, bool)>,
    theta_index: usize,
    weyl: OnceLock<std::result::Result<Arc<WeylGroup>, Error>>,
}

impl fmt::Debug for RootSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RootSystem({})", self.label())
    }
}

pub fn build_root_system(kind: CartanType, rank: usize) -> Result<RootSystem> {
    RootSystem::new(kind, rank)
}

impl RootSystem {
    pub fn new(kind: CartanType, rank: usize) -> Result<Self> {
        let cartan = cartan_matrix(kind, rank)?;
        Ok(Self::from_cartan(kind, cartan))
    }

    /// Parse labels such as `D4` or `G2`.
    pub fn parse(label: &str) -> Result<Self> {
        let (kind, rank) = parse_label(label)?;
        Self::new(kind, rank)
    }

    fn from_cartan(kind: CartanType, cartan: Vec<Vec<i64>>) -> Self {
        let n = cartan.len();
        // squared lengths of simple roots, up to a common scale
        let mut len: Vec<Option<Q>> = vec![None; n];
        len[0] = Some(Q::one());
        let mut stack = vec![0usize];
        while let Some(i) = stack.pop() {
            for j in 0..n {
                if cartan[i][j] != 0 && len[j].is_none() {
                    let li = len[i].clone().unwrap();
                    len[j] = Some(li * q(cartan[i][j]) / q(cartan[j][i]));
                    stack.push(j);
                }
            }
        }
        let len: Vec<Q> = len.into_iter().map(Option::unwrap).collect();
        let max = len.iter().max().unwrap().clone();
        let simple_len2: Vec<Q> = len.iter().map(|l| l * q(2) / &max).collect();
        let form: Vec<Vec<Q>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| q(cartan[i][j]) * &simple_len2[i] / q(2))
                    .collect()
            })
            .collect();

        let positive_roots = generate_roots(&cartan);
        let root_weights: Vec<Vec<i64>> = positive_roots
            .iter()
            .map(|c| root_to_weight(&cartan, c))
            .collect();
        let root_len2: Vec<Q> = positive_roots
            .iter()
            .map(|c| {
                let cq = linalg::qvec(c);
                let bc = linalg::mat_vec(&form, &cq);
                linalg::dot(&cq, &bc)
            })
            .collect();
        let coroots: Vec<Vec<i64>> = positive_roots
            .iter()
            .zip(&root_len2)
            .map(|(c, l)| {
                c.iter()
                    .enumerate()
                    .map(|(j, &cj)| {
                        let v = q(cj) * &simple_len2[j] / l;
                        linalg::to_i64(&v).expect("coroot coefficients are integral")
                    })
                    .collect()
            })
            .collect();
        let theta_index = positive_roots.len() - 1;
        let theta = positive_roots[theta_index].clone();
        let rho = vec![1i64; n];
        let dual_coxeter = 1 + coroots[theta_index].iter().sum::<i64>();
        let cq: Vec<Vec<Q>> = cartan.iter().map(|r| linalg::qvec(r)).collect();
        let cartan_inv = linalg::inverse(&cq).expect("Cartan matrix is invertible");
        let root_index = positive_roots
            .iter()
            .enumerate()
            .map(|(k, r)| (r.clone(), k))
            .collect();
        let mut weight_index = HashMap::new();
        for (k, w) in root_weights.iter().enumerate() {
            weight_index.insert(w.clone(), (k, true));
            weight_index.insert(w.iter().map(|x| -x).collect(), (k, false));
        }
        RootSystem {
            kind,
            rank: n,
            cartan,
            positive_roots,
            coroots,
            form,
            theta,
            rho,
            dual_coxeter,
            root_weights,
            root_len2,
            cartan_inv,
            root_index,
            weight_index,
            theta_index,
            weyl: OnceLock::new(),
        }
    }

    pub fn label(&self) -> String {
        format!("{}{}", self.kind.letter(), self.rank)
    }

    pub fn n_positive(&self) -> usize {
        self.positive_roots.len()
    }

    pub fn theta_index(&self) -> usize {
        self.theta_index
    }

    pub fn root_index(&self, root: &[i64]) -> Option<usize> {
        self.root_index.get(root).copied()
    }

    /// Index of the simple root `alpha_i` among the positive roots.
    pub fn simple_index(&self, i: usize) -> usize {
        let mut e = vec![0; self.rank];
        e[i] = 1;
        self.root_index[&e]
    }

    /// Identify a root given in weight coordinates: (positive-root index, is_positive).
    pub fn root_from_weight(&self, w: &[i64]) -> Option<(usize, bool)> {
        self.weight_index.get(w).copied()
    }

    pub fn root_weight(&self, k: usize) -> &[i64] {
        &self.root_weights[k]
    }

    pub fn simple_root_weight(&self, i: usize) -> Vec<i64> {
        (0..self.rank).map(|k| self.cartan[k][i]).collect()
    }

    pub fn root_len2(&self, k: usize) -> &Q {
        &self.root_len2[k]
    }

    pub fn simple_len2(&self, i: usize) -> &Q {
        &self.form[i][i]
    }

    pub fn height(&self, k: usize) -> i64 {
        self.positive_roots[k].iter().sum()
    }

    /// `<lambda, alpha_k^vee>` for a weight in fundamental-weight coordinates.
    pub fn pair_coroot(&self, lambda: &[Q], k: usize) -> Q {
        linalg::dot_qi(lambda, &self.coroots[k])
    }

    pub fn pair_coroot_i(&self, lambda: &[i64], k: usize) -> i64 {
        lambda.iter().zip(&self.coroots[k]).map(|(a, b)| a * b).sum()
    }

    /// Simple-root coordinates of a weight.
    pub fn weight_to_root_coords(&self, lambda: &[Q]) -> Vec<Q> {
        linalg::mat_vec(&self.cartan_inv, lambda)
    }

    pub fn weight_to_root_coords_i(&self, lambda: &[i64]) -> Vec<Q> {
        self.weight_to_root_coords(&linalg::qvec(lambda))
    }

    /// `lambda(x)` for a weight and a coweight in fundamental-coweight coordinates.
    pub fn pair_weight_coweight(&self, lambda: &[Q], x: &[Q]) -> Q {
        linalg::dot(&self.weight_to_root_coords(lambda), x)
    }

    /// Simple-coroot coordinates of a coweight.
    pub fn coweight_to_coroot_coords(&self, x: &[Q]) -> Vec<Q> {
        // alpha_j^vee = sum_k a[j][k] x_k, so x = A^T z
        let inv_t = linalg::transpose(&self.cartan_inv);
        linalg::mat_vec(&inv_t, x)
    }

    /// Fundamental-coweight coordinates of a coroot-lattice element.
    pub fn coroot_to_coweight(&self, z: &[i64]) -> Vec<i64> {
        (0..self.rank)
            .map(|k| (0..self.rank).map(|j| z[j] * self.cartan[j][k]).sum())
            .collect()
    }

    /// Invariant form on weights given in fundamental-weight coordinates.
    pub fn inner(&self, a: &[Q], b: &[Q]) -> Q {
        let ca = self.weight_to_root_coords(a);
        let cb = self.weight_to_root_coords(b);
        linalg::dot(&ca, &linalg::mat_vec(&self.form, &cb))
    }

    /// Gram matrix of the invariant form on fundamental weights.
    pub fn weight_gram(&self) -> Vec<Vec<Q>> {
        let n = self.rank;
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        // (omega_i, omega_j) = (A^{-1})_{ji} (alpha_j, alpha_j)/2
                        &self.cartan_inv[j][i] * self.simple_len2(j) / q(2)
                    })
                    .collect()
            })
            .collect()
    }

    pub fn cartan_inv(&self) -> &[Vec<Q>] {
        &self.cartan_inv
    }

    pub fn theta_weight(&self) -> Vec<i64> {
        self.root_weights[self.theta_index].clone()
    }

    pub fn theta_coroot(&self) -> &[i64] {
        &self.coroots[self.theta_index]
    }

    /// `lambda(theta^vee)`.
    pub fn level_of(&self, lambda: &[Q]) -> Q {
        self.pair_coroot(lambda, self.theta_index)
    }

    pub fn weyl(&self) -> Result<Arc<WeylGroup>> {
        self.weyl
            .get_or_init(|| WeylGroup::build(self).map(Arc::new))
            .clone()
    }

    /// The lowest-weight involution `lambda -> -w0 lambda` on fundamental-weight indices.
    pub fn dual_index(&self, i: usize) -> Result<usize> {
        let w = self.weyl()?;
        let mut e = vec![0i64; self.rank];
        e[i] = 1;
        let img = w.act_weight_i(w.w0(), &e);
        let neg: Vec<i64> = img.iter().map(|x| -x).collect();
        Ok(neg.iter().position(|&x| x == 1).unwrap())
    }

    pub fn zero_weight(&self) -> Vec<Q> {
        vec![Q::zero(); self.rank]
    }
}

pub fn parse_label(label: &str) -> Result<(CartanType, usize)> {
    let label = label.trim();
    let mut chars = label.chars();
    let Some(kind) = chars.next().and_then(CartanType::from_letter) else {
        return invalid(format!("unknown root system label '{label}'"));
    };
    let rank: usize = match chars.as_str().parse() {
        Ok(r) => r,
        Err(_) => return invalid(format!("missing or malformed rank in '{label}'")),
    };
    if !kind.valid_rank(rank) {
        return invalid(format!("no simple root system of type {label}"));
    }
    Ok((kind, rank))
}

fn root_to_weight(cartan: &[Vec<i64>], c: &[i64]) -> Vec<i64> {
    (0..cartan.len())
        .map(|i| (0..cartan.len()).map(|j| cartan[i][j] * c[j]).sum())
        .collect()
}

fn generate_roots(cartan: &[Vec<i64>]) -> Vec<Vec<i64>> {
    use std::collections::HashSet;
    let n = cartan.len();
    let mut all: HashSet<Vec<i64>> = HashSet::new();
    let mut layer: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let mut e = vec![0; n];
            e[i] = 1;
            e
        })
        .collect();
    let mut out = Vec::new();
    while !layer.is_empty() {
        layer.sort();
        layer.dedup();
        for r in &layer {
            all.insert(r.clone());
        }
        out.extend(layer.iter().cloned());
        let mut next = Vec::new();
        for r in &layer {
            for i in 0..n {
                // alpha_i-string through r: p steps down, q = p - <r, alpha_i^vee> steps up
                let mut p = 0;
                let mut down = r.clone();
                loop {
                    down[i] -= 1;
                    if all.contains(&down) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                let pair: i64 = (0..n).map(|j| cartan[i][j] * r[j]).sum();
                if p - pair > 0 {
                    let mut up = r.clone();
                    up[i] += 1;
                    next.push(up);
                }
            }
        }
        layer = next;
    }
    out.sort_by(|a, b| {
        let ha: i64 = a.iter().sum();
        let hb: i64 = b.iter().sum();
        ha.cmp(&hb).then_with(|| a.cmp(b))
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(label: &str) -> usize {
        RootSystem::parse(label).unwrap().n_positive()
    }

    #[test]
    fn positive_root_counts() {
        assert_eq!(count("A1"), 1);
        assert_eq!(count("A3"), 6);
        assert_eq!(count("B3"), 9);
        assert_eq!(count("C4"), 16);
        assert_eq!(count("D4"), 12);
        assert_eq!(count("G2"), 6);
        assert_eq!(count("F4"), 24);
        assert_eq!(count("E6"), 36);
        assert_eq!(count("E8"), 120);
    }

    #[test]
    fn highest_roots() {
        let d4 = RootSystem::parse("D4").unwrap();
        assert_eq!(d4.theta, vec![1, 2, 1, 1]);
        assert_eq!(d4.dual_coxeter, 6);
        let g2 = RootSystem::parse("G2").unwrap();
        assert_eq!(g2.theta, vec![3, 2]);
        assert_eq!(g2.dual_coxeter, 4);
        let a1 = RootSystem::parse("A1").unwrap();
        assert_eq!(a1.dual_coxeter, 2);
        let e8 = RootSystem::parse("E8").unwrap();
        assert_eq!(e8.dual_coxeter, 30);
        let f4 = RootSystem::parse("F4").unwrap();
        assert_eq!(f4.dual_coxeter, 9);
    }

    #[test]
    fn form_normalisation() {
        for label in ["A2", "B3", "C3", "D5", "E6", "F4", "G2"] {
            let rs = RootSystem::parse(label).unwrap();
            assert_eq!(*rs.root_len2(rs.theta_index()), q(2), "{label}");
            for k in 0..rs.n_positive() {
                let l = rs.root_len2(k).clone();
                let ok = l == q(2)
                    || (matches!(rs.kind, CartanType::B | CartanType::C | CartanType::F) && l == q(1))
                    || (rs.kind == CartanType::G && l == linalg::qr(2, 3));
                assert!(ok, "{label} root {k} has length {l}");
            }
        }
    }

    #[test]
    fn rejects_bad_labels() {
        assert!(RootSystem::parse("D3").is_err());
        assert!(RootSystem::parse("E9").is_err());
        assert!(RootSystem::parse("X2").is_err());
        assert!(RootSystem::parse("A9").is_err());
        assert!(RootSystem::parse("G").is_err());
    }

    #[test]
    fn fundamental_coweights_are_dual_to_simple_roots() {
        let rs = RootSystem::parse("B3").unwrap();
        for j in 0..3 {
            let mut x = vec![Q::zero(); 3];
            x[j] = Q::one();
            for i in 0..3 {
                let alpha = linalg::qvec(&rs.simple_root_weight(i));
                let v = rs.pair_weight_coweight(&alpha, &x);
                assert_eq!(v, if i == j { q(1) } else { q(0) });
            }
        }
    }
}
