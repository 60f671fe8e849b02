//! The multiplicative eigenvalue cone: regular facets from deformed invariants,
//! the full inequality list, extremal rays and membership.

pub mod dd;

use std::collections::HashSet;
use std::fmt;
use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use itertools::Itertools;
use num_traits::{Signed, Zero};
use parking_lot::RwLock;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::linalg::{self, q, Q};
use crate::notation;
use crate::qschubert::{quantum_cohomology, QuantumCohomology};
use crate::rootsys::{ElemId, Parabolic, RootSystem};

/// `s` weights and a level; coordinates of `Pic_Q` of parabolic bundles.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DivisorClass {
    pub weights: Vec<Vec<Q>>,
    pub level: Q,
}

impl DivisorClass {
    pub fn zero(s: usize, rank: usize) -> Self {
        DivisorClass {
            weights: vec![vec![Q::zero(); rank]; s],
            level: Q::zero(),
        }
    }

    pub fn from_ints(weights: &[Vec<i64>], level: i64) -> Self {
        DivisorClass {
            weights: weights.iter().map(|w| linalg::qvec(w)).collect(),
            level: q(level),
        }
    }

    pub fn s(&self) -> usize {
        self.weights.len()
    }

    pub fn rank(&self) -> usize {
        self.weights.first().map_or(0, Vec::len)
    }

    /// Coordinates `(lambda_1, ..., lambda_s, level)`.
    pub fn to_vector(&self) -> Vec<Q> {
        let mut v: Vec<Q> = self.weights.iter().flatten().cloned().collect();
        v.push(self.level.clone());
        v
    }

    pub fn from_vector(v: &[Q], s: usize, rank: usize) -> Self {
        DivisorClass {
            weights: (0..s).map(|i| v[i * rank..(i + 1) * rank].to_vec()).collect(),
            level: v[s * rank].clone(),
        }
    }

    pub fn from_ray(v: &[i64], s: usize, rank: usize) -> Self {
        Self::from_vector(&linalg::qvec(v), s, rank)
    }

    pub fn is_zero(&self) -> bool {
        self.level.is_zero() && self.weights.iter().all(|w| linalg::is_zero_vec(w))
    }

    pub fn add(&self, other: &DivisorClass) -> DivisorClass {
        let v: Vec<Q> = self
            .to_vector()
            .iter()
            .zip(other.to_vector())
            .map(|(a, b)| a + b)
            .collect();
        Self::from_vector(&v, self.s(), self.rank())
    }

    pub fn scale(&self, c: &Q) -> DivisorClass {
        let v: Vec<Q> = self.to_vector().iter().map(|a| a * c).collect();
        Self::from_vector(&v, self.s(), self.rank())
    }

    /// Primitive integral representative of the ray through a nonzero class.
    pub fn primitive(&self) -> Vec<i64> {
        linalg::primitive_i64(&self.to_vector()).expect("coordinates fit in i64")
    }

    pub fn primitive_class(&self) -> DivisorClass {
        if self.is_zero() {
            return self.clone();
        }
        Self::from_ray(&self.primitive(), self.s(), self.rank())
    }

    /// Whether the two nonzero classes span the same ray.
    pub fn same_ray(&self, other: &DivisorClass) -> bool {
        !self.is_zero() && !other.is_zero() && self.primitive() == other.primitive()
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .weights
            .iter()
            .map(|w| notation::format_weight(w))
            .chain(std::iter::once(notation::format_rational(&self.level)))
            .collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// `(P, u_1, ..., u_s, d)` with deformed invariant one.
#[derive(Clone)]
pub struct FaceDatum {
    pub par: Arc<Parabolic>,
    pub classes: Vec<ElemId>,
    pub degree: Vec<i64>,
}

impl fmt::Debug for FaceDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FaceDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cls: Vec<String> = self.classes.iter().map(|&w| self.par.format(w)).collect();
        let d: Vec<String> = self.degree.iter().map(|x| x.to_string()).collect();
        write!(f, "P{}: {} ; d = {}", self.par.label(), cls.join(" | "), d.join(","))
    }
}

impl FaceDatum {
    /// Validated face datum: the deformed invariant must be exactly one.
    pub fn new(qh: &QuantumCohomology, classes: Vec<ElemId>, degree: Vec<i64>) -> Result<Self> {
        if classes.len() < 3 {
            return invalid("a face needs at least three classes");
        }
        let v = qh.deformed_invariant(&classes, &degree)?;
        if v != 1 {
            return invalid(format!("deformed invariant is {v}, not 1"));
        }
        Ok(FaceDatum {
            par: qh.par.clone(),
            classes,
            degree,
        })
    }

    pub fn s(&self) -> usize {
        self.classes.len()
    }
}

/// Coroot coordinates of `u x_k`.
fn twisted_coweight(par: &Parabolic, u: ElemId, k: usize) -> Vec<Q> {
    let mut x = vec![Q::zero(); par.rs.rank];
    x[k] = q(1);
    let ux = par.weyl.act_coweight(u, &x);
    par.rs.coweight_to_coroot_coords(&ux)
}

/// `d_k l 2/(alpha_k, alpha_k) - sum_i lambda_i(u_i x_k)`, one functional per `k` in `S_P`.
pub fn facet_functionals(face: &FaceDatum) -> Vec<Vec<Q>> {
    let par = &face.par;
    let r = par.rs.rank;
    par.s_p
        .iter()
        .enumerate()
        .map(|(t, &k)| {
            let mut f = vec![Q::zero(); face.s() * r + 1];
            for (i, &u) in face.classes.iter().enumerate() {
                let z = twisted_coweight(par, u, k);
                for j in 0..r {
                    f[i * r + j] = -z[j].clone();
                }
            }
            f[face.s() * r] = q(face.degree[t] * 2) / par.rs.simple_len2(k);
            f
        })
        .collect()
}

/// The single functional of a face on a maximal parabolic.
pub fn facet_inequality(face: &FaceDatum) -> Result<Vec<Q>> {
    if !face.par.is_maximal() {
        return invalid("facets come from maximal parabolics; use facet_functionals for faces");
    }
    Ok(facet_functionals(face).remove(0))
}

pub fn evaluate(functional: &[Q], x: &DivisorClass) -> Q {
    linalg::dot(functional, &x.to_vector())
}

fn primitive_row(f: &[Q]) -> Vec<i64> {
    linalg::primitive_i64(f).expect("facet coefficients fit in i64")
}

/// All regular facets for `s` marked points, deterministic order.
pub fn enumerate_regular_facets(rs: &Arc<RootSystem>, s: usize) -> Result<Vec<FaceDatum>> {
    if s < 3 {
        return invalid("the number of marked points must be at least 3");
    }
    let mut out: Vec<FaceDatum> = Vec::new();
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    for i in 0..rs.rank {
        let qh = quantum_cohomology(rs, &[i])?;
        let par = qh.par.clone();
        let dim = par.dim() as i64;
        let m = par.len();
        let tuples: Vec<Vec<usize>> = (0..m).combinations_with_replacement(s).collect();
        let found: Vec<Result<Vec<(Vec<i64>, Vec<usize>)>>> = tuples
            .par_iter()
            .map(|t| {
                let cls: Vec<ElemId> = t.iter().map(|&k| par.wp_reps[k]).collect();
                let codims: i64 = cls.iter().map(|&u| par.codim(u) as i64).sum();
                let mut hits = Vec::new();
                for d in qh.degrees_with_c1(codims - dim) {
                    if qh.levi_condition(&cls, &d) && qh.gw_invariant(&cls, &d)? == 1 {
                        hits.push((d, t.clone()));
                    }
                }
                Ok(hits)
            })
            .collect();
        let mut hits: Vec<(Vec<i64>, Vec<usize>)> = Vec::new();
        for f in found {
            hits.extend(f?);
        }
        let mut expanded: Vec<(Vec<i64>, Vec<usize>)> = Vec::new();
        for (d, t) in hits {
            let perms: HashSet<Vec<usize>> = t.iter().copied().permutations(s).collect();
            for p in perms {
                expanded.push((d.clone(), p));
            }
        }
        expanded.sort();
        for (d, p) in expanded {
            let face = FaceDatum {
                par: par.clone(),
                classes: p.iter().map(|&k| par.wp_reps[k]).collect(),
                degree: d,
            };
            let row = primitive_row(&facet_functionals(&face)[0]);
            if seen.insert(row) {
                out.push(face);
            }
        }
    }
    Ok(out)
}

#[derive(Debug)]
pub struct RationalCone {
    pub ambient_dim: usize,
    pub inequalities: Vec<Vec<Q>>,
    rays: OnceLock<Vec<Vec<i64>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum MembershipStatus {
    Inside,
    OnBoundary,
    Outside,
}

#[derive(Clone, Debug, Serialize)]
pub struct Membership {
    pub status: MembershipStatus,
    pub tight: Vec<usize>,
    pub violated: Vec<usize>,
}

impl Membership {
    pub fn contains(&self) -> bool {
        self.status != MembershipStatus::Outside
    }
}

impl RationalCone {
    pub fn new(ambient_dim: usize, inequalities: Vec<Vec<Q>>) -> Self {
        RationalCone {
            ambient_dim,
            inequalities,
            rays: OnceLock::new(),
        }
    }

    pub fn integer_rows(&self) -> Vec<Vec<i64>> {
        self.inequalities.iter().map(|f| primitive_row(f)).collect()
    }

    /// Extremal rays, computed on first use.
    pub fn compute_rays(&self) -> Result<&[Vec<i64>]> {
        if let Some(r) = self.rays.get() {
            return Ok(r);
        }
        let r = dd::extremal_rays(&self.integer_rows(), self.ambient_dim)?;
        Ok(self.rays.get_or_init(|| r))
    }

    pub fn rays_if_computed(&self) -> Option<&[Vec<i64>]> {
        self.rays.get().map(Vec::as_slice)
    }

    /// Whether `x` (assumed in the cone) spans an extremal ray.
    pub fn is_extremal(&self, x: &[Q]) -> bool {
        if linalg::is_zero_vec(x) {
            return false;
        }
        let tight: Vec<Vec<Q>> = self
            .inequalities
            .iter()
            .filter(|f| linalg::dot(f, x).is_zero())
            .cloned()
            .collect();
        linalg::rank(&tight) + 1 == self.ambient_dim
    }

    pub fn membership_vec(&self, x: &[Q]) -> Membership {
        let mut tight = Vec::new();
        let mut violated = Vec::new();
        for (k, f) in self.inequalities.iter().enumerate() {
            let v = linalg::dot(f, x);
            if v.is_zero() {
                tight.push(k);
            } else if v.is_negative() {
                violated.push(k);
            }
        }
        let status = if !violated.is_empty() {
            MembershipStatus::Outside
        } else if !tight.is_empty() {
            MembershipStatus::OnBoundary
        } else {
            MembershipStatus::Inside
        };
        Membership {
            status,
            tight,
            violated,
        }
    }
}

/// Inequalities `lambda_i(alpha_j^vee) >= 0`, slot-major.
pub fn dominance_walls(rank: usize, s: usize) -> Vec<Vec<Q>> {
    let mut out = Vec::new();
    for i in 0..s {
        for j in 0..rank {
            let mut f = vec![Q::zero(); s * rank + 1];
            f[i * rank + j] = q(1);
            out.push(f);
        }
    }
    out
}

/// Inequalities `l - lambda_i(theta^vee) >= 0`.
pub fn alcove_walls(rs: &RootSystem, s: usize) -> Vec<Vec<Q>> {
    let r = rs.rank;
    let th = rs.theta_coroot();
    (0..s)
        .map(|i| {
            let mut f = vec![Q::zero(); s * r + 1];
            for j in 0..r {
                f[i * r + j] = q(-th[j]);
            }
            f[s * r] = q(1);
            f
        })
        .collect()
}

/// The cone with its facet data: dominance walls, alcove walls, then regular facets.
pub struct EigenCone {
    pub rs: Arc<RootSystem>,
    pub s: usize,
    pub facets: Vec<FaceDatum>,
    pub cone: RationalCone,
    pub n_dominance: usize,
    pub n_alcove: usize,
}

impl EigenCone {
    pub fn regular_rows(&self) -> &[Vec<Q>] {
        &self.cone.inequalities[self.n_dominance + self.n_alcove..]
    }

    pub fn rank(&self) -> usize {
        self.rs.rank
    }

    pub fn membership(&self, x: &DivisorClass) -> Result<Membership> {
        if x.s() != self.s || x.rank() != self.rs.rank {
            return invalid(format!(
                "expected {} weights with {} entries",
                self.s, self.rs.rank
            ));
        }
        Ok(self.cone.membership_vec(&x.to_vector()))
    }

    pub fn rays(&self) -> Result<Vec<DivisorClass>> {
        let (s, r) = (self.s, self.rs.rank);
        Ok(self
            .cone
            .compute_rays()?
            .iter()
            .map(|v| DivisorClass::from_ray(v, s, r))
            .collect())
    }

    /// Rays on no regular facet, with the shape check of each.
    pub fn non_regular_rays(&self) -> Result<Vec<NonRegularRay>> {
        Ok(classify_non_regular(&self.rs, &self.rays()?, self.regular_rows()))
    }
}

/// The rays among `rays` lying on none of the `regular` facets.
pub fn classify_non_regular(rs: &RootSystem, rays: &[DivisorClass], regular: &[Vec<Q>]) -> Vec<NonRegularRay> {
    let th = rs.theta_coroot().to_vec();
    rays.iter()
        .filter(|x| {
            let v = x.to_vector();
            regular.iter().all(|f| !linalg::dot(f, &v).is_zero())
        })
        .map(|x| {
            let shape_ok = x.weights.iter().all(|w| {
                let support = w.iter().filter(|c| !c.is_zero()).count();
                let lvl = linalg::dot_qi(w, &th);
                support == 1 && lvl == x.level
            });
            NonRegularRay {
                ray: x.clone(),
                shape_ok,
            }
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct NonRegularRay {
    pub ray: DivisorClass,
    /// Every slot is a multiple of one fundamental weight at level exactly `l`.
    pub shape_ok: bool,
}

pub fn full_cone(rs: &Arc<RootSystem>, s: usize) -> Result<EigenCone> {
    let facets = enumerate_regular_facets(rs, s)?;
    let mut ineqs = dominance_walls(rs.rank, s);
    let n_dominance = ineqs.len();
    ineqs.extend(alcove_walls(rs, s));
    let n_alcove = s;
    for f in &facets {
        ineqs.push(facet_functionals(f).remove(0));
    }
    Ok(EigenCone {
        rs: rs.clone(),
        s,
        facets,
        cone: RationalCone::new(s * rs.rank + 1, ineqs),
        n_dominance,
        n_alcove,
    })
}

fn cones() -> &'static RwLock<HashMap<(String, usize), Arc<EigenCone>>> {
    static CONES: OnceLock<RwLock<HashMap<(String, usize), Arc<EigenCone>>>> = OnceLock::new();
    CONES.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Shared copy of [`full_cone`], keyed by group and number of points.
pub fn eigen_cone(rs: &Arc<RootSystem>, s: usize) -> Result<Arc<EigenCone>> {
    let key = (rs.label(), s);
    if let Some(c) = cones().read().get(&key) {
        return Ok(c.clone());
    }
    let c = Arc::new(full_cone(rs, s)?);
    Ok(cones().write().entry(key).or_insert(c).clone())
}

/// Find nonnegative coefficients writing `x` as a combination of `gens`, if any.
pub fn decompose(x: &[Q], gens: &[Vec<Q>]) -> Option<Vec<Q>> {
    crate::lp::nonnegative_combination(x, gens)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(label: &str) -> Arc<RootSystem> {
        Arc::new(RootSystem::parse(label).unwrap())
    }

    #[test]
    fn a1_regular_facets() {
        let r = rs("A1");
        let facets = enumerate_regular_facets(&r, 3).unwrap();
        assert_eq!(facets.len(), 4);
    }

    #[test]
    fn g2_counts() {
        let r = rs("G2");
        let cone = full_cone(&r, 3).unwrap();
        assert_eq!(cone.facets.len(), 39);
        assert_eq!(cone.cone.inequalities.len(), 48);
    }

    #[test]
    fn d4_p1_facet_on_induced_class() {
        let r = rs("D4");
        let qh = quantum_cohomology(&r, &[0]).unwrap();
        let c = qh.par.parse_classes("s1 | s2 s1 | s4 s2 s1").unwrap();
        let face = FaceDatum::new(&qh, c, vec![1]).unwrap();
        let f = facet_inequality(&face).unwrap();
        let x = DivisorClass::from_ints(&[vec![0, 1, 0, 0], vec![0, 0, 1, 0], vec![0, 0, 1, 0]], 2);
        assert!(evaluate(&f, &x).is_zero());
        let vac = DivisorClass::from_ints(&[vec![0; 4], vec![0; 4], vec![0; 4]], 1);
        assert_eq!(evaluate(&f, &vac), q(1));
    }
}
