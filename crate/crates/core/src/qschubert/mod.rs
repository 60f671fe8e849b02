//! Quantum Schubert calculus on `G/P`: products, Gromov-Witten numbers and the
//! deformed (Levi-movable) invariants.
//!
//! Public classes use the dimension labelling: `sigma_w` is the class of the
//! Schubert variety `X_w` of dimension `l(w)`. Internally products run in the
//! codimension labelling `tau_c = [X^c]`, related by `c = w0 w w0_L`.

mod borel;

pub use borel::{pack, unpack, BorelEngine, Packed};

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock};

use parking_lot::RwLock;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::linalg::{self, Q};
use crate::rootsys::{ElemId, Parabolic, RootSystem};

/// Curve degree: coefficients `a_i` on the simple roots in `S_P`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DegreeVector(pub Vec<i64>);

impl DegreeVector {
    pub fn zero(n: usize) -> Self {
        DegreeVector(vec![0; n])
    }

    pub fn is_effective(&self) -> bool {
        self.0.iter().all(|&a| a >= 0)
    }

    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let t = text.trim().trim_start_matches(['(', '[']).trim_end_matches([')', ']']);
        let v: Vec<i64> = t
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|p| !p.is_empty())
            .map(|p| {
                p.parse()
                    .map_err(|_| Error::Invalid(format!("malformed degree '{text}'")))
            })
            .collect::<Result<_>>()?;
        if v.len() != n {
            return invalid(format!("degree '{text}' needs {n} entries"));
        }
        Ok(DegreeVector(v))
    }
}

impl fmt::Display for DegreeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Linear combination of `q^d sigma_w`, dimension labels.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QClass {
    pub terms: BTreeMap<(ElemId, DegreeVector), i64>,
}

impl QClass {
    pub fn coefficient(&self, w: ElemId, d: &[i64]) -> i64 {
        self.terms
            .get(&(w, DegreeVector(d.to_vec())))
            .copied()
            .unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn classical_part(&self) -> QClass {
        QClass {
            terms: self
                .terms
                .iter()
                .filter(|((_, d), _)| d.0.iter().all(|&x| x == 0))
                .map(|(k, v)| (k.clone(), *v))
                .collect(),
        }
    }

    /// One line `q^{(d)} w : coeff` per term.
    pub fn render(&self, par: &Parabolic) -> String {
        let mut out = String::new();
        for ((w, d), c) in &self.terms {
            out.push_str(&format!("q^{{{}}} {} : {}\n", d, par.format(*w), c));
        }
        out
    }
}

/// Term `(class, degree, coefficient)` in codimension labels.
pub type PTerm = (ElemId, Packed, i64);

type Table = Vec<Vec<Vec<PTerm>>>;

fn engines() -> &'static RwLock<HashMap<String, Arc<BorelEngine>>> {
    static ENGINES: OnceLock<RwLock<HashMap<String, Arc<BorelEngine>>>> = OnceLock::new();
    ENGINES.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Shared `G/B` engine for a root system.
pub fn borel_engine(rs: &Arc<RootSystem>) -> Result<Arc<BorelEngine>> {
    let key = rs.label();
    if let Some(e) = engines().read().get(&key) {
        return Ok(e.clone());
    }
    let e = Arc::new(BorelEngine::new(rs.clone())?);
    Ok(engines().write().entry(key).or_insert(e).clone())
}

type QhKey = (String, Vec<usize>);

fn cohomologies() -> &'static RwLock<HashMap<QhKey, Arc<QuantumCohomology>>> {
    static QH: OnceLock<RwLock<HashMap<QhKey, Arc<QuantumCohomology>>>> = OnceLock::new();
    QH.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Shared quantum cohomology of `G/P`, `P` given by its 0-based `S_P`.
pub fn quantum_cohomology(rs: &Arc<RootSystem>, s_p: &[usize]) -> Result<Arc<QuantumCohomology>> {
    let mut s = s_p.to_vec();
    s.sort_unstable();
    s.dedup();
    let key = (rs.label(), s.clone());
    if let Some(q) = cohomologies().read().get(&key) {
        return Ok(q.clone());
    }
    let par = Arc::new(Parabolic::new(rs.clone(), &s)?);
    let q = Arc::new(QuantumCohomology::new(par)?);
    Ok(cohomologies().write().entry(key).or_insert(q).clone())
}

pub struct QuantumCohomology {
    pub par: Arc<Parabolic>,
    engine: Arc<BorelEngine>,
    lifts: RwLock<HashMap<Packed, (Packed, ElemId)>>,
    table: OnceLock<std::result::Result<Table, Error>>,
    gw_memo: RwLock<HashMap<(Vec<ElemId>, Vec<i64>), i64>>,
}

impl fmt::Debug for QuantumCohomology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QH*({:?})", self.par)
    }
}

impl QuantumCohomology {
    pub fn new(par: Arc<Parabolic>) -> Result<Self> {
        let engine = borel_engine(&par.rs)?;
        Ok(QuantumCohomology {
            par,
            engine,
            lifts: RwLock::new(HashMap::new()),
            table: OnceLock::new(),
            gw_memo: RwLock::new(HashMap::new()),
        })
    }

    pub fn engine(&self) -> &BorelEngine {
        &self.engine
    }

    fn np(&self) -> usize {
        self.par.s_p.len()
    }

    /// Minimal `G/B` lift of a `G/P` degree, with `omega_{P'} omega_P`.
    fn lift(&self, d: Packed) -> (Packed, ElemId) {
        if let Some(&v) = self.lifts.read().get(&d) {
            return v;
        }
        let par = &self.par;
        let n = par.rs.rank;
        let dv = unpack(d, self.np());
        let mut x = vec![0i64; n];
        for (k, &i) in par.s_p.iter().enumerate() {
            x[i] = -dv[k];
        }
        let red = par.levi_alcove_reduce(&x);
        let d_b: Vec<i64> = red.iter().map(|c| -c).collect();
        let fixed: Vec<usize> = par
            .delta_p
            .iter()
            .copied()
            .filter(|&j| (0..n).map(|k| d_b[k] * par.rs.cartan[k][j]).sum::<i64>() == 0)
            .collect();
        let w = par.weyl.mul(par.weyl.longest_in(&fixed), par.w0_l);
        let v = (pack(&d_b).unwrap_or(u64::MAX), w);
        self.lifts.write().insert(d, v);
        v
    }

    fn project(&self, e: Packed) -> Packed {
        let n = self.par.rs.rank;
        let full = unpack(e, n);
        let d: Vec<i64> = self.par.s_p.iter().map(|&i| full[i]).collect();
        pack(&d).unwrap()
    }

    fn table(&self) -> Result<&Table> {
        self.table
            .get_or_init(|| self.build_table())
            .as_ref()
            .map_err(Clone::clone)
    }

    fn build_table(&self) -> Result<Table> {
        let par = &self.par;
        let cols: Vec<Result<Vec<Vec<PTerm>>>> = par
            .wp_reps
            .par_iter()
            .map(|&b| {
                let row = self.engine.row(b)?;
                Ok(par
                    .wp_reps
                    .iter()
                    .map(|&a| self.to_parabolic(&row[a as usize]))
                    .collect())
            })
            .collect();
        let cols: Vec<Vec<Vec<PTerm>>> = cols.into_iter().collect::<Result<_>>()?;
        // cols[b][a] -> table[a][b]
        let m = par.len();
        let mut table: Table = vec![vec![Vec::new(); m]; m];
        for (b, col) in cols.into_iter().enumerate() {
            for (a, terms) in col.into_iter().enumerate() {
                table[a][b] = terms;
            }
        }
        Ok(table)
    }

    fn to_parabolic(&self, terms: &[borel::Term]) -> Vec<PTerm> {
        let mut out = Vec::new();
        for &(y, e, c) in terms {
            let d = self.project(e);
            let (d_b, omega) = self.lift(d);
            if e != d_b {
                continue;
            }
            let w = self.par.weyl.mul(y, omega);
            if self.par.contains(w) {
                out.push((w, d, c));
            }
        }
        out.sort_unstable();
        out
    }

    /// `tau_a * tau_b` in codimension labels.
    pub fn product_codim(&self, a: ElemId, b: ElemId) -> Result<&[PTerm]> {
        let par = &self.par;
        let (Some(i), Some(j)) = (par.position(a), par.position(b)) else {
            return invalid("classes must be minimal coset representatives");
        };
        Ok(&self.table()?[i][j])
    }

    /// Quantum Chevalley formula for `tau_{s_i} * tau_w` in codimension labels.
    pub fn chevalley_codim(&self, i: usize, w: ElemId) -> Vec<PTerm> {
        let par = &self.par;
        let rs = &par.rs;
        let g = &par.weyl;
        let mut out: Vec<PTerm> = Vec::new();
        let l = g.length(w) as i64;
        for k in 0..rs.n_positive() {
            if par.in_levi(k) {
                continue;
            }
            let c = rs.coroots[k][i];
            if c == 0 {
                continue;
            }
            let y = g.mul(w, g.reflection(k));
            if g.length(y) as i64 == l + 1 && par.contains(y) {
                out.push((y, 0, c));
                continue;
            }
            let d = par.curve_degree(k).expect("non-Levi root");
            let ybar = par.minimal_rep(y);
            if g.length(ybar) as i64 == l + 1 - par.c1_integral(&d) {
                out.push((ybar, pack(&d).expect("small degree"), c));
            }
        }
        out.sort_unstable();
        let mut merged: Vec<PTerm> = Vec::new();
        for t in out {
            match merged.last_mut() {
                Some(last) if last.0 == t.0 && last.1 == t.1 => last.2 += t.2,
                _ => merged.push(t),
            }
        }
        merged
    }

    fn to_qclass(&self, terms: &[PTerm]) -> QClass {
        let n = self.np();
        let mut out = QClass::default();
        for &(w, d, c) in terms {
            *out
                .terms
                .entry((self.par.dual(w), DegreeVector(unpack(d, n))))
                .or_insert(0) += c;
        }
        out.terms.retain(|_, c| *c != 0);
        out
    }

    fn check_class(&self, w: ElemId) -> Result<()> {
        if !self.par.contains(w) {
            return invalid(format!(
                "{} is not a minimal coset representative",
                self.par.format(w)
            ));
        }
        Ok(())
    }

    /// Small quantum product `sigma_u * sigma_v`.
    pub fn quantum_product(&self, u: ElemId, v: ElemId) -> Result<QClass> {
        self.check_class(u)?;
        self.check_class(v)?;
        let terms = self.product_codim(self.par.dual(u), self.par.dual(v))?;
        Ok(self.to_qclass(terms))
    }

    /// Cup product `sigma_u . sigma_v`.
    pub fn classical_product(&self, u: ElemId, v: ElemId) -> Result<QClass> {
        Ok(self.quantum_product(u, v)?.classical_part())
    }

    /// Product of the divisor class indexed by `alpha_i`, `i` in `S_P`, with `sigma_u`.
    pub fn quantum_chevalley(&self, i: usize, u: ElemId) -> Result<QClass> {
        self.check_class(u)?;
        if !self.par.s_p.contains(&i) {
            return invalid(format!("alpha_{} is a Levi root", i + 1));
        }
        Ok(self.to_qclass(&self.chevalley_codim(i, self.par.dual(u))))
    }

    /// Product of two classes, keeping only degrees bounded componentwise by `bound`.
    pub fn multiply(&self, a: &QClass, b: &QClass, bound: Option<&[i64]>) -> Result<QClass> {
        let n = self.np();
        let mut acc: BTreeMap<(ElemId, DegreeVector), i64> = BTreeMap::new();
        for ((u, d1), c1) in &a.terms {
            for ((v, d2), c2) in &b.terms {
                let base: Vec<i64> = d1.0.iter().zip(&d2.0).map(|(x, y)| x + y).collect();
                if let Some(bd) = bound {
                    if base.iter().zip(bd).any(|(x, y)| x > y) {
                        continue;
                    }
                }
                for &(w, e, c) in self.product_codim(self.par.dual(*u), self.par.dual(*v))? {
                    let d: Vec<i64> = unpack(e, n).iter().zip(&base).map(|(x, y)| x + y).collect();
                    if let Some(bd) = bound {
                        if d.iter().zip(bd).any(|(x, y)| x > y) {
                            continue;
                        }
                    }
                    let f = c1
                        .checked_mul(*c2)
                        .and_then(|x| x.checked_mul(c))
                        .ok_or(Error::Overflow("quantum product"))?;
                    let slot = acc.entry((self.par.dual(w), DegreeVector(d))).or_insert(0);
                    *slot = slot.checked_add(f).ok_or(Error::Overflow("quantum product"))?;
                }
            }
        }
        acc.retain(|_, c| *c != 0);
        Ok(QClass { terms: acc })
    }

    pub fn class(&self, w: ElemId) -> QClass {
        let mut out = QClass::default();
        out.terms.insert((w, DegreeVector::zero(self.np())), 1);
        out
    }

    /// `sum codim sigma_{u_i} - dim X - int_d c_1`.
    pub fn expected_dim_tag(&self, classes: &[ElemId], d: &[i64]) -> i64 {
        let par = &self.par;
        let codims: i64 = classes.iter().map(|&u| par.codim(u) as i64).sum();
        codims - par.dim() as i64 - par.c1_integral(d)
    }

    fn validate(&self, classes: &[ElemId], d: &[i64]) -> Result<()> {
        if classes.len() < 2 {
            return invalid("at least two classes are needed");
        }
        if d.len() != self.np() {
            return invalid(format!("degree needs {} entries", self.np()));
        }
        for &u in classes {
            self.check_class(u)?;
        }
        Ok(())
    }

    /// Genus-zero Gromov-Witten number `<sigma_{u_1}, ..., sigma_{u_s}>_d`.
    pub fn gw_invariant(&self, classes: &[ElemId], d: &[i64]) -> Result<i64> {
        self.validate(classes, d)?;
        if d.iter().any(|&a| a < 0) || self.expected_dim_tag(classes, d) != 0 {
            return Ok(0);
        }
        let mut key = classes.to_vec();
        key.sort_unstable();
        let mkey = (key, d.to_vec());
        if let Some(&v) = self.gw_memo.read().get(&mkey) {
            return Ok(v);
        }
        let par = &self.par;
        let s = classes.len();
        let v = if s == 2 {
            i64::from(d.iter().all(|&a| a == 0) && classes[1] == par.dual(classes[0]))
        } else if s == 3 {
            let target = pack(d).ok_or(Error::Overflow("degree packing"))?;
            self.product_codim(par.dual(classes[0]), par.dual(classes[1]))?
                .iter()
                .find(|t| t.0 == classes[2] && t.1 == target)
                .map_or(0, |t| t.2)
        } else {
            let mut acc = self.class(classes[0]);
            for &u in &classes[1..s - 1] {
                acc = self.multiply(&acc, &self.class(u), Some(d))?;
            }
            acc.coefficient(par.dual(classes[s - 1]), d)
        };
        self.gw_memo.write().insert(mkey, v);
        Ok(v)
    }

    /// The linear condition of Levi-movability, one value per `alpha_i` in `S_P`.
    pub fn levi_defects(&self, classes: &[ElemId], d: &[i64]) -> Vec<Q> {
        let par = &self.par;
        let rs = &par.rs;
        let mut chi: Vec<Q> = linalg::qvec(&par.chi_e());
        for &u in classes {
            for (x, c) in chi.iter_mut().zip(par.chi(u)) {
                *x -= linalg::q(c);
            }
        }
        let root_coords = rs.weight_to_root_coords(&chi);
        par.s_p
            .iter()
            .map(|&i| {
                let mut v = root_coords[i].clone();
                let mut extra = 0i64;
                for k in 0..rs.n_positive() {
                    if par.in_levi(k) {
                        continue;
                    }
                    let a_xi = rs.positive_roots[k][i];
                    if a_xi == 0 {
                        continue;
                    }
                    let a_d: i64 = par
                        .s_p
                        .iter()
                        .zip(d)
                        .map(|(&m, &dm)| dm * rs.root_weight(k)[m])
                        .sum();
                    extra += a_xi * a_d;
                }
                v += linalg::q(extra);
                v
            })
            .collect()
    }

    pub fn levi_condition(&self, classes: &[ElemId], d: &[i64]) -> bool {
        self.levi_defects(classes, d)
            .iter()
            .all(num_traits::Zero::is_zero)
    }

    pub fn levi_movable(&self, classes: &[ElemId], d: &[i64]) -> Result<bool> {
        self.validate(classes, d)?;
        if !self.levi_condition(classes, d) {
            return Ok(false);
        }
        Ok(self.gw_invariant(classes, d)? != 0)
    }

    pub fn deformed_invariant(&self, classes: &[ElemId], d: &[i64]) -> Result<i64> {
        self.validate(classes, d)?;
        if !self.levi_condition(classes, d) {
            return Ok(0);
        }
        self.gw_invariant(classes, d)
    }

    /// All effective degrees with `int_d c_1 = target`.
    pub fn degrees_with_c1(&self, target: i64) -> Vec<Vec<i64>> {
        let dq = self.par.deg_q().to_vec();
        let mut out = Vec::new();
        let mut cur = vec![0i64; dq.len()];
        fn rec(k: usize, left: i64, dq: &[i64], cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
            if k == dq.len() {
                if left == 0 {
                    out.push(cur.clone());
                }
                return;
            }
            let mut a = 0;
            while a * dq[k] <= left {
                cur[k] = a;
                rec(k + 1, left - a * dq[k], dq, cur, out);
                a += 1;
            }
            cur[k] = 0;
        }
        if target >= 0 {
            rec(0, target, &dq, &mut cur, &mut out);
        }
        out
    }
}
