use std::collections::HashMap;
use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use super::{RootSystem, MAX_WEYL_ORDER};
use crate::error::{invalid, Error, Result};
use crate::linalg::Q;

pub type ElemId = u32;

/// A Weyl group element with its lexicographically least reduced word (1-based letters).
#[derive(Clone, Debug, Serialize)]
pub struct WeylElement {
    pub word: Vec<usize>,
    pub length: usize,
    /// Matrix of the action on fundamental-weight coordinates (columns are images of the basis).
    pub action: Vec<Vec<i64>>,
}

impl PartialEq for WeylElement {
    fn eq(&self, other: &Self) -> bool {
        self.action == other.action
    }
}

impl Eq for WeylElement {}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_word(&self.word))
    }
}

pub fn format_word(word: &[usize]) -> String {
    if word.is_empty() {
        return "e".to_string();
    }
    word.iter()
        .map(|i| format!("s{i}"))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Parse `s4 s2 s1`, `s4s2s1` or `e` into 1-based letters.
pub fn parse_word(text: &str, rank: usize) -> Result<Vec<usize>> {
    let t = text.trim();
    if t.is_empty() {
        return invalid("empty Weyl word");
    }
    if t == "e" || t == "1" {
        return Ok(vec![]);
    }
    let mut out = Vec::new();
    for piece in t.split(|c: char| c == 's' || c.is_whitespace() || c == '*') {
        if piece.is_empty() {
            continue;
        }
        let i: usize = piece
            .parse()
            .map_err(|_| Error::Invalid(format!("malformed Weyl word '{t}'")))?;
        if i == 0 || i > rank {
            return invalid(format!("generator s{i} out of range in '{t}'"));
        }
        out.push(i);
    }
    if !t.starts_with('s') {
        return invalid(format!("malformed Weyl word '{t}'"));
    }
    Ok(out)
}

pub struct WeylGroup {
    rank: usize,
    /// Simple roots in weight coordinates.
    alpha: Vec<Vec<i64>>,
    cartan: Vec<Vec<i64>>,
    imgs: Vec<Vec<i32>>,
    words: Vec<Vec<u8>>,
    lens: Vec<u16>,
    index: HashMap<Vec<i32>, ElemId>,
    lmul: Vec<Vec<ElemId>>,
    rmul: Vec<Vec<ElemId>>,
    inv: Vec<ElemId>,
    reflections: Vec<ElemId>,
    w0: ElemId,
}

impl fmt::Debug for WeylGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeylGroup(order {})", self.order())
    }
}

impl WeylGroup {
    pub(super) fn build(rs: &RootSystem) -> Result<Self> {
        let n = rs.rank;
        let alpha: Vec<Vec<i64>> = (0..n).map(|i| rs.simple_root_weight(i)).collect();
        let reflect = |img: &[i32], i: usize| -> Vec<i32> {
            let c = img[i];
            img.iter()
                .zip(&alpha[i])
                .map(|(&x, &a)| x - c * a as i32)
                .collect()
        };
        let mut seen: HashMap<Vec<i32>, usize> = HashMap::new();
        let rho = vec![1i32; n];
        seen.insert(rho.clone(), 0);
        let mut imgs = vec![rho];
        let mut lens = vec![0u16];
        let mut frontier = vec![0usize];
        let mut l = 0u16;
        while !frontier.is_empty() {
            l += 1;
            let mut next = Vec::new();
            for &w in &frontier {
                for i in 0..n {
                    if imgs[w][i] > 0 {
                        let img = reflect(&imgs[w], i);
                        if !seen.contains_key(&img) {
                            if imgs.len() >= MAX_WEYL_ORDER {
                                return Err(Error::TooLarge(format!(
                                    "Weyl group of {} exceeds {} elements",
                                    rs.label(),
                                    MAX_WEYL_ORDER
                                )));
                            }
                            seen.insert(img.clone(), imgs.len());
                            next.push(imgs.len());
                            imgs.push(img);
                            lens.push(l);
                        }
                    }
                }
            }
            frontier = next;
        }
        // canonical words: smallest left descent first, then recurse
        let mut words: Vec<Vec<u8>> = vec![Vec::new(); imgs.len()];
        for w in 1..imgs.len() {
            let i0 = (0..n).find(|&i| imgs[w][i] < 0).unwrap();
            let shorter = seen[&reflect(&imgs[w], i0)];
            let mut word = vec![i0 as u8];
            word.extend_from_slice(&words[shorter]);
            words[w] = word;
        }
        let mut order: Vec<usize> = (0..imgs.len()).collect();
        order.sort_by(|&a, &b| lens[a].cmp(&lens[b]).then_with(|| words[a].cmp(&words[b])));
        let imgs: Vec<Vec<i32>> = order.iter().map(|&k| imgs[k].clone()).collect();
        let words: Vec<Vec<u8>> = order.iter().map(|&k| words[k].clone()).collect();
        let lens: Vec<u16> = order.iter().map(|&k| lens[k]).collect();
        let index: HashMap<Vec<i32>, ElemId> = imgs
            .iter()
            .enumerate()
            .map(|(k, img)| (img.clone(), k as ElemId))
            .collect();
        let lmul: Vec<Vec<ElemId>> = (0..n)
            .map(|i| imgs.iter().map(|img| index[&reflect(img, i)]).collect())
            .collect();
        let w0 = (imgs.len() - 1) as ElemId;
        let mut g = WeylGroup {
            rank: n,
            alpha,
            cartan: rs.cartan.clone(),
            imgs,
            words,
            lens,
            index,
            lmul,
            rmul: Vec::new(),
            inv: Vec::new(),
            reflections: Vec::new(),
            w0,
        };
        g.inv = (0..g.order())
            .map(|w| {
                let rev: Vec<usize> = g.words[w].iter().rev().map(|&i| i as usize).collect();
                g.from_letters(&rev)
            })
            .collect();
        g.rmul = (0..n)
            .map(|i| {
                (0..g.order())
                    .map(|w| g.inv[g.lmul[i][g.inv[w] as usize] as usize])
                    .collect()
            })
            .collect();
        g.reflections = (0..rs.n_positive())
            .map(|k| {
                let c = rs.pair_coroot_i(&rs.rho, k) as i32;
                let img: Vec<i32> = rs
                    .root_weight(k)
                    .iter()
                    .map(|&a| 1 - c * a as i32)
                    .collect();
                g.index[&img]
            })
            .collect();
        Ok(g)
    }

    pub fn order(&self) -> usize {
        self.imgs.len()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn identity(&self) -> ElemId {
        0
    }

    pub fn w0(&self) -> ElemId {
        self.w0
    }

    pub fn length(&self, w: ElemId) -> usize {
        self.lens[w as usize] as usize
    }

    /// Canonical reduced word, 0-based letters.
    pub fn word0(&self, w: ElemId) -> Vec<usize> {
        self.words[w as usize].iter().map(|&i| i as usize).collect()
    }

    /// Canonical reduced word, 1-based letters.
    pub fn word(&self, w: ElemId) -> Vec<usize> {
        self.words[w as usize].iter().map(|&i| i as usize + 1).collect()
    }

    pub fn format(&self, w: ElemId) -> String {
        format_word(&self.word(w))
    }

    /// `s_i w`.
    pub fn lmul(&self, i: usize, w: ElemId) -> ElemId {
        self.lmul[i][w as usize]
    }

    /// `w s_i`.
    pub fn rmul(&self, w: ElemId, i: usize) -> ElemId {
        self.rmul[i][w as usize]
    }

    pub fn inverse(&self, w: ElemId) -> ElemId {
        self.inv[w as usize]
    }

    pub fn reflection(&self, root: usize) -> ElemId {
        self.reflections[root]
    }

    pub fn mul(&self, u: ElemId, v: ElemId) -> ElemId {
        let mut w = v;
        for &i in self.words[u as usize].iter().rev() {
            w = self.lmul[i as usize][w as usize];
        }
        w
    }

    /// Element given by a product of 0-based letters (not necessarily reduced).
    pub fn from_letters(&self, letters: &[usize]) -> ElemId {
        let mut w = 0;
        for &i in letters.iter().rev() {
            w = self.lmul[i][w as usize];
        }
        w
    }

    /// Element given by 1-based letters, validated.
    pub fn from_word(&self, word: &[usize]) -> Result<ElemId> {
        if let Some(&bad) = word.iter().find(|&&i| i == 0 || i > self.rank) {
            return invalid(format!("generator s{bad} out of range"));
        }
        let zero: Vec<usize> = word.iter().map(|i| i - 1).collect();
        Ok(self.from_letters(&zero))
    }

    pub fn parse(&self, text: &str) -> Result<ElemId> {
        let word = parse_word(text, self.rank)?;
        self.from_word(&word)
    }

    pub fn is_left_descent(&self, w: ElemId, i: usize) -> bool {
        self.imgs[w as usize][i] < 0
    }

    pub fn is_right_descent(&self, w: ElemId, i: usize) -> bool {
        self.length(self.rmul(w, i)) < self.length(w)
    }

    pub fn rho_image(&self, w: ElemId) -> &[i32] {
        &self.imgs[w as usize]
    }

    pub fn act_weight_i(&self, w: ElemId, lambda: &[i64]) -> Vec<i64> {
        let mut v = lambda.to_vec();
        for &i in self.words[w as usize].iter().rev() {
            let c = v[i as usize];
            if c != 0 {
                for (x, a) in v.iter_mut().zip(&self.alpha[i as usize]) {
                    *x -= c * a;
                }
            }
        }
        v
    }

    pub fn act_weight(&self, w: ElemId, lambda: &[Q]) -> Vec<Q> {
        let mut v = lambda.to_vec();
        for &i in self.words[w as usize].iter().rev() {
            let c = v[i as usize].clone();
            if !c.is_zero() {
                for (x, &a) in v.iter_mut().zip(&self.alpha[i as usize]) {
                    *x -= &c * num_bigint::BigInt::from(a);
                }
            }
        }
        v
    }

    /// Action on coweights in fundamental-coweight coordinates.
    pub fn act_coweight(&self, w: ElemId, x: &[Q]) -> Vec<Q> {
        let mut v = x.to_vec();
        for &i in self.words[w as usize].iter().rev() {
            let c = v[i as usize].clone();
            if !c.is_zero() {
                for (k, y) in v.iter_mut().enumerate() {
                    *y -= &c * num_bigint::BigInt::from(self.cartan[i as usize][k]);
                }
            }
        }
        v
    }

    /// Action on the coroot lattice in simple-coroot coordinates.
    pub fn act_coroot(&self, w: ElemId, z: &[i64]) -> Vec<i64> {
        let mut v = z.to_vec();
        for &i in self.words[w as usize].iter().rev() {
            let i = i as usize;
            // alpha_i(z) = sum_j z_j a[j][i]
            let c: i64 = (0..self.rank).map(|j| v[j] * self.cartan[j][i]).sum();
            v[i] -= c;
        }
        v
    }

    pub fn element(&self, w: ElemId) -> WeylElement {
        let n = self.rank;
        let mut action = vec![vec![0i64; n]; n];
        for j in 0..n {
            let mut e = vec![0i64; n];
            e[j] = 1;
            let img = self.act_weight_i(w, &e);
            for i in 0..n {
                action[i][j] = img[i];
            }
        }
        WeylElement {
            word: self.word(w),
            length: self.length(w),
            action,
        }
    }

    /// Elements in canonical order (length, then word).
    pub fn elements(&self) -> impl Iterator<Item = ElemId> {
        0..self.order() as ElemId
    }

    /// Longest element of the parabolic subgroup generated by `gens`.
    pub fn longest_in(&self, gens: &[usize]) -> ElemId {
        let mut w = 0;
        loop {
            match gens.iter().find(|&&j| !self.is_left_descent(w, j)) {
                Some(&j) => w = self.lmul(j, w),
                None => return w,
            }
        }
    }

    /// Upward Bruhat covers `v -> s_beta v`, as (positive root index, element).
    pub fn bruhat_covers_up(&self, rs: &RootSystem, v: ElemId) -> Vec<(usize, ElemId)> {
        let l = self.length(v);
        (0..rs.n_positive())
            .filter_map(|k| {
                let w = self.mul(self.reflections[k], v);
                (self.length(w) == l + 1).then_some((k, w))
            })
            .collect()
    }

    /// Apply `w` to a positive root: (image root index, is_positive).
    pub fn act_root(&self, rs: &RootSystem, w: ElemId, root: usize) -> (usize, bool) {
        let img = self.act_weight_i(w, rs.root_weight(root));
        rs.root_from_weight(&img).expect("Weyl group permutes roots")
    }

    pub fn lookup_rho_image(&self, img: &[i32]) -> Option<ElemId> {
        self.index.get(img).copied()
    }
}
