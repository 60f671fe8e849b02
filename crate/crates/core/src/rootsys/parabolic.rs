use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::weyl::{ElemId, WeylGroup};
use super::RootSystem;
use crate::error::{invalid, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ShiftCase {
    Same,
    Up,
    Down,
}

#[derive(Clone, Debug)]
pub struct ThetaShift {
    pub case: ShiftCase,
    /// `overline{s_theta u}`.
    pub shifted: ElemId,
    /// Signed degree of the curve class of `u^{-1} theta` (zero in the `Same` case).
    pub degree_delta: Vec<i64>,
}

/// A simple component of the Levi subgroup.
#[derive(Clone, Debug)]
pub struct LeviComponent {
    pub simple: Vec<usize>,
    /// Positive roots of the component (indices into the ambient positive roots).
    pub roots: Vec<usize>,
    pub theta: usize,
}

/// Standard parabolic subgroup, given by the simple roots `S_P` not in its Levi.
pub struct Parabolic {
    pub rs: Arc<RootSystem>,
    pub weyl: Arc<WeylGroup>,
    pub s_p: Vec<usize>,
    pub delta_p: Vec<usize>,
    pub wp_reps: Vec<ElemId>,
    pub levi_components: Vec<LeviComponent>,
    pub w0_l: ElemId,
    /// Coweight with `alpha_k(x_P) = 1` exactly for `k` in `S_P`, fundamental-coweight coordinates.
    pub x_p: Vec<i64>,
    wp_pos: HashMap<ElemId, usize>,
    in_levi: Vec<bool>,
    /// `2 rho - 2 rho_L` in fundamental-weight coordinates.
    two_rho_nl: Vec<i64>,
    deg_q: Vec<i64>,
}

impl fmt::Debug for Parabolic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/P{}", self.rs.label(), self.label())
    }
}

impl Parabolic {
    pub fn new(rs: Arc<RootSystem>, s_p: &[usize]) -> Result<Self> {
        let n = rs.rank;
        let mut s: Vec<usize> = s_p.to_vec();
        s.sort_unstable();
        s.dedup();
        if s.is_empty() {
            return invalid("a parabolic needs at least one simple root outside its Levi");
        }
        if let Some(&bad) = s.iter().find(|&&i| i >= n) {
            return invalid(format!("simple root index {} out of range for {}", bad + 1, rs.label()));
        }
        let weyl = rs.weyl()?;
        let delta_p: Vec<usize> = (0..n).filter(|i| !s.contains(i)).collect();
        let wp_reps: Vec<ElemId> = weyl
            .elements()
            .filter(|&w| delta_p.iter().all(|&j| !weyl.is_right_descent(w, j)))
            .collect();
        let wp_pos = wp_reps.iter().enumerate().map(|(k, &w)| (w, k)).collect();
        let in_levi: Vec<bool> = rs
            .positive_roots
            .iter()
            .map(|r| s.iter().all(|&i| r[i] == 0))
            .collect();
        let mut comps: Vec<Vec<usize>> = Vec::new();
        let mut seen = vec![false; n];
        for &j in &delta_p {
            if seen[j] {
                continue;
            }
            let mut comp = vec![];
            let mut stack = vec![j];
            seen[j] = true;
            while let Some(a) = stack.pop() {
                comp.push(a);
                for &b in &delta_p {
                    if !seen[b] && rs.cartan[a][b] != 0 {
                        seen[b] = true;
                        stack.push(b);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps.sort();
        let levi_components = comps
            .into_iter()
            .map(|simple| {
                let roots: Vec<usize> = (0..rs.n_positive())
                    .filter(|&k| {
                        (0..n).all(|i| rs.positive_roots[k][i] == 0 || simple.contains(&i))
                    })
                    .collect();
                let theta = *roots.iter().max_by_key(|&&k| rs.height(k)).unwrap();
                LeviComponent {
                    simple,
                    roots,
                    theta,
                }
            })
            .collect();
        let w0_l = weyl.longest_in(&delta_p);
        let x_p: Vec<i64> = (0..n).map(|i| i64::from(s.contains(&i))).collect();
        let mut two_rho_nl = vec![0i64; n];
        for k in 0..rs.n_positive() {
            if !in_levi[k] {
                for (t, a) in two_rho_nl.iter_mut().zip(rs.root_weight(k)) {
                    *t += a;
                }
            }
        }
        let deg_q = s.iter().map(|&i| two_rho_nl[i]).collect();
        Ok(Parabolic {
            rs,
            weyl,
            s_p: s,
            delta_p,
            wp_reps,
            levi_components,
            w0_l,
            x_p,
            wp_pos,
            in_levi,
            two_rho_nl,
            deg_q,
        })
    }

    /// Parse a 1-based list such as `1` or `1,3`.
    pub fn parse(rs: Arc<RootSystem>, text: &str) -> Result<Self> {
        let mut s = Vec::new();
        for piece in text.split(|c: char| c == ',' || c.is_whitespace()) {
            if piece.is_empty() {
                continue;
            }
            let i: usize = piece
                .parse()
                .map_err(|_| Error::Invalid(format!("malformed parabolic '{text}'")))?;
            if i == 0 {
                return invalid("simple root indices are 1-based");
            }
            s.push(i - 1);
        }
        Self::new(rs, &s)
    }

    pub fn maximal(rs: Arc<RootSystem>, i: usize) -> Result<Self> {
        Self::new(rs, &[i])
    }

    pub fn is_maximal(&self) -> bool {
        self.s_p.len() == 1
    }

    /// 1-based label, e.g. `2` or `1,3`.
    pub fn label(&self) -> String {
        self.s_p
            .iter()
            .map(|i| (i + 1).to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn dim(&self) -> usize {
        self.in_levi.iter().filter(|&&b| !b).count()
    }

    pub fn in_levi(&self, root: usize) -> bool {
        self.in_levi[root]
    }

    pub fn contains(&self, w: ElemId) -> bool {
        self.wp_pos.contains_key(&w)
    }

    pub fn position(&self, w: ElemId) -> Option<usize> {
        self.wp_pos.get(&w).copied()
    }

    pub fn len(&self) -> usize {
        self.wp_reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.wp_reps.is_empty()
    }

    pub fn length(&self, w: ElemId) -> usize {
        self.weyl.length(w)
    }

    pub fn codim(&self, w: ElemId) -> usize {
        self.dim() - self.weyl.length(w)
    }

    pub fn minimal_rep(&self, w: ElemId) -> ElemId {
        let mut w = w;
        while let Some(&j) = self
            .delta_p
            .iter()
            .find(|&&j| self.weyl.is_right_descent(w, j))
        {
            w = self.weyl.rmul(w, j);
        }
        w
    }

    pub fn is_min_rep(&self, w: ElemId) -> bool {
        self.contains(w)
    }

    /// Index of the top class `overline{w0}`.
    pub fn top(&self) -> ElemId {
        *self.wp_reps.last().unwrap()
    }

    /// Poincare dual `w0 w w0_L` of a class of `W^P`.
    pub fn dual(&self, w: ElemId) -> ElemId {
        let g = &self.weyl;
        g.mul(g.mul(g.w0(), w), self.w0_l)
    }

    pub fn s_theta(&self) -> ElemId {
        self.weyl.reflection(self.rs.theta_index())
    }

    /// Covers `v -> s_beta v` with both ends in `W^P`.
    pub fn bruhat_covers_up(&self, v: ElemId) -> Vec<(usize, ElemId)> {
        self.weyl
            .bruhat_covers_up(&self.rs, v)
            .into_iter()
            .filter(|&(_, w)| self.contains(w))
            .collect()
    }

    /// Degree vector of the T-fixed curve through a root: `alpha^vee` coefficients on `S_P`.
    pub fn curve_degree(&self, root: usize) -> Result<Vec<i64>> {
        if self.in_levi[root] {
            return invalid("root lies in the Levi subalgebra; it has no curve class");
        }
        Ok(self.degree_of_coroot(&self.rs.coroots[root]))
    }

    pub fn degree_of_coroot(&self, coroot: &[i64]) -> Vec<i64> {
        self.s_p.iter().map(|&i| coroot[i]).collect()
    }

    /// `int_d c_1(T_{G/P})`.
    pub fn c1_integral(&self, d: &[i64]) -> i64 {
        d.iter().zip(&self.deg_q).map(|(a, b)| a * b).sum()
    }

    /// `int_{q_i} c_1` for each `i` in `S_P`.
    pub fn deg_q(&self) -> &[i64] {
        &self.deg_q
    }

    /// `2 rho - 2 rho_L` in fundamental-weight coordinates.
    pub fn two_rho_nonlevi(&self) -> &[i64] {
        &self.two_rho_nl
    }

    pub fn theta_shift(&self, u: ElemId) -> ThetaShift {
        let g = &self.weyl;
        let rs = &self.rs;
        let (beta, positive) = g.act_root(rs, g.inverse(u), rs.theta_index());
        let shifted = self.minimal_rep(g.mul(self.s_theta(), u));
        if self.in_levi[beta] {
            return ThetaShift {
                case: ShiftCase::Same,
                shifted,
                degree_delta: vec![0; self.s_p.len()],
            };
        }
        let d = self.degree_of_coroot(&rs.coroots[beta]);
        if positive {
            ThetaShift {
                case: ShiftCase::Up,
                shifted,
                degree_delta: d,
            }
        } else {
            ThetaShift {
                case: ShiftCase::Down,
                shifted,
                degree_delta: d.iter().map(|x| -x).collect(),
            }
        }
    }

    /// Parse a class of `W^P` from a Weyl word.
    pub fn parse_class(&self, text: &str) -> Result<ElemId> {
        let w = self.weyl.parse(text)?;
        if !self.contains(w) {
            return invalid(format!(
                "{} is not a minimal coset representative for P{}",
                text.trim(),
                self.label()
            ));
        }
        Ok(w)
    }

    /// Parse classes separated by `|`.
    pub fn parse_classes(&self, text: &str) -> Result<Vec<ElemId>> {
        let out: Vec<ElemId> = text
            .split('|')
            .map(|p| self.parse_class(p))
            .collect::<Result<_>>()?;
        Ok(out)
    }

    pub fn format(&self, w: ElemId) -> String {
        self.weyl.format(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn par(label: &str, s: &[usize]) -> Parabolic {
        let rs = Arc::new(RootSystem::parse(label).unwrap());
        Parabolic::new(rs, s).unwrap()
    }

    #[test]
    fn coset_counts() {
        let p = par("D4", &[0]);
        assert_eq!(p.len(), 8);
        assert_eq!(p.dim(), 6);
        let p = par("D4", &[1]);
        assert_eq!(p.len(), 192 / 8);
        let p = par("G2", &[1]);
        assert_eq!(p.len(), 6);
        let p = par("A3", &[0, 1, 2]);
        assert_eq!(p.len(), 24);
    }

    #[test]
    fn quadric_betti_numbers() {
        let p = par("D4", &[0]);
        let mut betti = vec![0; 7];
        for &w in &p.wp_reps {
            betti[p.codim(w)] += 1;
        }
        assert_eq!(betti, vec![1, 1, 1, 2, 1, 1, 1]);
    }

    #[test]
    fn min_reps_send_levi_roots_positive() {
        let p = par("B3", &[1]);
        for &w in &p.wp_reps {
            for &j in &p.delta_p {
                let k = p.rs.simple_index(j);
                assert!(p.weyl.act_root(&p.rs, w, k).1);
            }
        }
    }

    #[test]
    fn d4_theta_shift() {
        let p = par("D4", &[0]);
        let g = &p.weyl;
        let st = p.s_theta();
        assert_eq!(st, g.parse("s2 s1 s3 s4 s2 s4 s3 s1 s2").unwrap());
        assert_eq!(g.length(st), 9);
        let s1 = g.parse("s1").unwrap();
        let sh = p.theta_shift(s1);
        assert_eq!(sh.case, ShiftCase::Up);
        assert_eq!(sh.shifted, g.parse("s1 s2 s3 s4 s2 s1").unwrap());
        assert_eq!(sh.shifted, p.top());
        let e = p.theta_shift(0);
        assert_eq!(e.case, ShiftCase::Up);
        assert_eq!(e.degree_delta, vec![1]);
    }

    #[test]
    fn degrees_of_q() {
        assert_eq!(par("D4", &[0]).deg_q(), &[6]);
        assert_eq!(par("D4", &[1]).deg_q(), &[5]);
        assert_eq!(par("G2", &[1]).deg_q(), &[3]);
        assert_eq!(par("A1", &[0]).deg_q(), &[2]);
    }

    #[test]
    fn g2_words() {
        let rs = RootSystem::parse("G2").unwrap();
        let g = rs.weyl().unwrap();
        assert_eq!(
            g.reflection(rs.theta_index()),
            g.parse("s2 s1 s2 s1 s2").unwrap()
        );
    }
}
