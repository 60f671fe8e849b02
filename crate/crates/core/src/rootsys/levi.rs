use std::collections::HashSet;

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use super::parabolic::Parabolic;
use super::weyl::ElemId;
use super::{cartan_matrix, CartanType};
use crate::error::{invalid, Error, Result};
use crate::linalg::{self, q, Q};

/// The two alcove representatives of the data, simple-coroot coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MuCandidates {
    /// Reduction of `+alpha_i^vee`.
    pub plus: Vec<i64>,
    /// Reduction of `-alpha_i^vee`.
    pub minus: Vec<i64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct InductionScalars {
    /// Simple-coroot coordinates.
    pub mu: Vec<i64>,
    pub k0: i64,
    pub w_mu: ElemId,
    pub w0_mu: ElemId,
    /// One per Levi component, in the order of `levi_components`.
    pub dynkin_indices: Vec<i64>,
    /// `sum over non-Levi positive roots of alpha(mu) alpha`, fundamental-weight coordinates.
    pub nu: Vec<i64>,
    /// `nu` paired with the simple coroots of the Levi, in the order of `delta_p`.
    pub nu_restricted: Vec<i64>,
    pub n_l: usize,
}

impl Parabolic {
    /// `alpha(x)` for a positive root and a coroot-lattice element.
    pub fn root_on_coroot(&self, root: usize, x: &[i64]) -> i64 {
        self.rs
            .root_weight(root)
            .iter()
            .zip(x)
            .map(|(a, b)| a * b)
            .sum()
    }

    fn simple_on_coroot(&self, j: usize, x: &[i64]) -> i64 {
        (0..self.rs.rank).map(|k| x[k] * self.rs.cartan[k][j]).sum()
    }

    /// Reduce a coroot-lattice element into the closed fundamental alcove of the Levi,
    /// using finite and affine reflections of each Levi component.
    pub fn levi_alcove_reduce(&self, x: &[i64]) -> Vec<i64> {
        let rs = &self.rs;
        let mut x = x.to_vec();
        loop {
            if let Some(&j) = self
                .delta_p
                .iter()
                .find(|&&j| self.simple_on_coroot(j, &x) < 0)
            {
                let c = self.simple_on_coroot(j, &x);
                x[j] -= c;
                continue;
            }
            let mut changed = false;
            for comp in &self.levi_components {
                let t = self.root_on_coroot(comp.theta, &x);
                if t > 1 {
                    for (y, c) in x.iter_mut().zip(&rs.coroots[comp.theta]) {
                        *y -= (t - 1) * c;
                    }
                    changed = true;
                    break;
                }
            }
            if !changed {
                return x;
            }
        }
    }

    pub fn in_levi_alcove(&self, x: &[i64]) -> bool {
        self.delta_p.iter().all(|&j| self.simple_on_coroot(j, x) >= 0)
            && self
                .levi_components
                .iter()
                .all(|c| self.root_on_coroot(c.theta, x) <= 1)
    }

    /// Whether `mu` meets the three conditions: Levi roots take values in `[0,1]`,
    /// `omega_i(mu) = +-1` and all other `S_P` coefficients vanish.
    pub fn mu_conditions_hold(&self, i: usize, mu: &[i64]) -> bool {
        if !self.s_p.contains(&i) || mu[i].abs() != 1 {
            return false;
        }
        if self.s_p.iter().any(|&k| k != i && mu[k] != 0) {
            return false;
        }
        (0..self.rs.n_positive())
            .filter(|&k| self.in_levi(k))
            .all(|k| (0..=1).contains(&self.root_on_coroot(k, mu)))
    }

    pub fn mu_candidates(&self, i: usize) -> Result<MuCandidates> {
        if !self.s_p.contains(&i) {
            return invalid(format!("alpha_{} is a Levi root", i + 1));
        }
        let mut e = vec![0i64; self.rs.rank];
        e[i] = 1;
        let plus = self.levi_alcove_reduce(&e);
        e[i] = -1;
        let minus = self.levi_alcove_reduce(&e);
        Ok(MuCandidates { plus, minus })
    }

    /// `w0_L` applied to a coroot-lattice element.
    pub fn w0l_on_coroot(&self, x: &[i64]) -> Vec<i64> {
        self.weyl.act_coroot(self.w0_l, x)
    }

    /// `chi_w = rho - 2 rho_L + w^{-1} rho`.
    pub fn chi(&self, w: ElemId) -> Vec<i64> {
        let winv_rho = self.weyl.act_weight_i(self.weyl.inverse(w), &self.rs.rho);
        self.two_rho_nonlevi()
            .iter()
            .zip(&winv_rho)
            .map(|(a, b)| a - 1 + b)
            .collect()
    }

    /// `chi_e = 2 rho - 2 rho_L`.
    pub fn chi_e(&self) -> Vec<i64> {
        self.two_rho_nonlevi().to_vec()
    }

    /// Restriction of a weight to the derived Levi: its values on `alpha_j^vee`, `j` in `delta_p`.
    pub fn restrict_to_levi(&self, lambda: &[Q]) -> Vec<Q> {
        self.delta_p.iter().map(|&j| lambda[j].clone()).collect()
    }

    /// The unique weight restricting to `mu` on the derived Levi and vanishing on every `x_j`, `j` in `S_P`.
    pub fn ext(&self, mu: &[Q]) -> Vec<Q> {
        let rs = &self.rs;
        let n = rs.rank;
        let mut lambda = vec![Q::zero(); n];
        for (k, &j) in self.delta_p.iter().enumerate() {
            lambda[j] = mu[k].clone();
        }
        // root coordinate j of lambda is (A^{-1} lambda)_j; solve for the S_P entries
        let inv = rs.cartan_inv();
        let m: Vec<Vec<Q>> = self
            .s_p
            .iter()
            .map(|&r| self.s_p.iter().map(|&c| inv[r][c].clone()).collect())
            .collect();
        let rhs: Vec<Q> = self
            .s_p
            .iter()
            .map(|&r| -self.delta_p.iter().fold(Q::zero(), |acc, &c| acc + &inv[r][c] * &lambda[c]))
            .collect();
        let sol = linalg::solve(&m, &rhs).expect("principal minor of the inverse Cartan matrix");
        for (k, &i) in self.s_p.iter().enumerate() {
            lambda[i] = sol[k].clone();
        }
        lambda
    }

    /// Order of the finite group of classes of Levi weights whose extension is non-integral.
    pub fn ext_index(&self) -> usize {
        let m = self.delta_p.len();
        let gens: Vec<Vec<Q>> = (0..m)
            .map(|k| {
                let mut e = vec![Q::zero(); m];
                e[k] = Q::one();
                let lam = self.ext(&e);
                self.s_p.iter().map(|&i| frac(&lam[i])).collect()
            })
            .collect();
        let zero = vec![Q::zero(); self.s_p.len()];
        let mut seen: HashSet<Vec<Q>> = HashSet::new();
        seen.insert(zero.clone());
        let mut stack = vec![zero];
        while let Some(x) = stack.pop() {
            for g in &gens {
                let y: Vec<Q> = x.iter().zip(g).map(|(a, b)| frac(&(a + b))).collect();
                if seen.insert(y.clone()) {
                    stack.push(y);
                }
            }
        }
        seen.len()
    }

    /// Dynkin index of `g/p` for each Levi component, as `2 g^*/(theta_k,theta_k) - g_k^*`.
    pub fn dynkin_indices(&self) -> Vec<i64> {
        let rs = &self.rs;
        self.levi_components
            .iter()
            .map(|c| {
                let gk = 1 + rs.coroots[c.theta].iter().sum::<i64>();
                let v = q(2 * rs.dual_coxeter) / rs.root_len2(c.theta) - q(gk);
                linalg::to_i64(&v).expect("Dynkin index is integral")
            })
            .collect()
    }

    /// `1/2 sum over non-Levi positive roots of alpha(theta_k^vee)^2`.
    pub fn dynkin_indices_by_roots(&self) -> Vec<i64> {
        let rs = &self.rs;
        self.levi_components
            .iter()
            .map(|c| {
                let s: i64 = (0..rs.n_positive())
                    .filter(|&k| !self.in_levi(k))
                    .map(|k| {
                        let v = rs.pair_coroot_i(rs.root_weight(k), c.theta);
                        v * v
                    })
                    .sum();
                s / 2
            })
            .collect()
    }

    pub fn nu(&self, mu: &[i64]) -> Vec<i64> {
        let rs = &self.rs;
        let mut nu = vec![0i64; rs.rank];
        for k in 0..rs.n_positive() {
            if self.in_levi(k) {
                continue;
            }
            let c = self.root_on_coroot(k, mu);
            for (x, a) in nu.iter_mut().zip(rs.root_weight(k)) {
                *x += c * a;
            }
        }
        nu
    }

    /// Induction scalars for a maximal parabolic; `dual` selects the `+alpha_i^vee` candidate.
    pub fn induction_scalars(&self, dual: bool) -> Result<InductionScalars> {
        if !self.is_maximal() {
            return invalid("induction data needs a maximal parabolic");
        }
        let i = self.s_p[0];
        let cands = self.mu_candidates(i)?;
        let mu = if dual { cands.plus } else { cands.minus };
        let k0 = mu[i];
        let fixing: Vec<usize> = self
            .delta_p
            .iter()
            .copied()
            .filter(|&j| self.simple_on_coroot(j, &mu) == 0)
            .collect();
        let w0_mu = self.weyl.longest_in(&fixing);
        let w_mu = self.weyl.mul(w0_mu, self.w0_l);
        let dynkin_indices = self.dynkin_indices();
        if dynkin_indices != self.dynkin_indices_by_roots() {
            return Err(Error::Inconsistent("Dynkin index formulas disagree".into()));
        }
        let nu = self.nu(&mu);
        let nu_restricted = self.delta_p.iter().map(|&j| nu[j]).collect();
        Ok(InductionScalars {
            mu,
            k0,
            w_mu,
            w0_mu,
            dynkin_indices,
            nu,
            nu_restricted,
            n_l: self.ext_index(),
        })
    }

    /// Cartan type of a Levi component, with `perm[a]` the ambient index of standard node `a`.
    pub fn component_type(&self, k: usize) -> (CartanType, usize, Vec<usize>) {
        component_type(&self.rs.cartan, &self.levi_components[k].simple)
    }
}

fn frac(x: &Q) -> Q {
    let n = x.numer().mod_floor(x.denom());
    Q::new(n, x.denom().clone())
}

/// Identify the Cartan type of the sub-diagram on `nodes` of the given Cartan matrix.
pub fn component_type(cartan: &[Vec<i64>], nodes: &[usize]) -> (CartanType, usize, Vec<usize>) {
    use CartanType::*;
    let n = nodes.len();
    for t in [A, B, C, D, E, F, G] {
        if !t.valid_rank(n) {
            continue;
        }
        let std = cartan_matrix(t, n).unwrap();
        let mut perm = Vec::with_capacity(n);
        let mut used = vec![false; n];
        if search(&std, cartan, nodes, &mut perm, &mut used) {
            let perm = perm.iter().map(|&p| nodes[p]).collect();
            return (t, n, perm);
        }
    }
    unreachable!("connected sub-diagram of a Dynkin diagram is of finite type")
}

fn search(
    std: &[Vec<i64>],
    cartan: &[Vec<i64>],
    nodes: &[usize],
    perm: &mut Vec<usize>,
    used: &mut [bool],
) -> bool {
    let a = perm.len();
    if a == nodes.len() {
        return true;
    }
    for p in 0..nodes.len() {
        if used[p] {
            continue;
        }
        let ok = (0..a).all(|b| {
            std[a][b] == cartan[nodes[p]][nodes[perm[b]]]
                && std[b][a] == cartan[nodes[perm[b]]][nodes[p]]
        }) && std[a][a] == cartan[nodes[p]][nodes[p]];
        if ok {
            used[p] = true;
            perm.push(p);
            if search(std, cartan, nodes, perm, used) {
                return true;
            }
            perm.pop();
            used[p] = false;
        }
    }
    false
}
