//! Extremal rays on a regular face: type I rays from divisor-class formulas and
//! type II rays induced from the cones of the Levi components.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_traits::{One, Zero};
use parking_lot::RwLock;
use serde::Serialize;

use crate::eigencone::{self, DivisorClass, EigenCone, FaceDatum};
use crate::error::{invalid, Error, Result};
use crate::linalg::{self, q, Q};
use crate::notation;
use crate::qschubert::{quantum_cohomology, QuantumCohomology};
use crate::rootsys::{CartanType, ElemId, InductionScalars, Parabolic, RootSystem, ShiftCase};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TypeOneCase {
    /// `v -> u_j` along the simple root `beta` (0-based).
    Cover { beta: usize },
    /// `v = overline{s_theta u_j}`, longer than `u_j`.
    Theta,
}

#[derive(Clone, Debug)]
pub struct TypeOneDatum {
    pub slot: usize,
    pub case: TypeOneCase,
    pub v: ElemId,
    pub d_prime: Vec<i64>,
}

impl TypeOneDatum {
    /// The modified tuple `(v_1, ..., v_s)`.
    pub fn classes(&self, face: &FaceDatum) -> Vec<ElemId> {
        let mut c = face.classes.clone();
        c[self.slot] = self.v;
        c
    }

    pub fn describe(&self, face: &FaceDatum) -> String {
        let par = &face.par;
        let u = face.classes[self.slot];
        match self.case {
            TypeOneCase::Cover { beta } => format!(
                "{} -a{}-> {}",
                par.format(self.v),
                beta + 1,
                par.format(u)
            ),
            TypeOneCase::Theta => {
                format!("{} < overline(s_theta {})", par.format(u), par.format(u))
            }
        }
    }
}

/// Type I data of a face: per slot, the covers by simple roots in increasing order, then the
/// `s_theta` shift when it lengthens.
pub fn type_one_data(face: &FaceDatum) -> Vec<TypeOneDatum> {
    let par = &face.par;
    let g = &par.weyl;
    let mut out = Vec::new();
    for (j, &u) in face.classes.iter().enumerate() {
        for b in 0..par.rs.rank {
            if g.is_left_descent(u, b) {
                let v = g.lmul(b, u);
                if par.contains(v) {
                    out.push(TypeOneDatum {
                        slot: j,
                        case: TypeOneCase::Cover { beta: b },
                        v,
                        d_prime: face.degree.clone(),
                    });
                }
            }
        }
        let shift = par.theta_shift(u);
        if shift.case == ShiftCase::Up {
            let d_prime = face
                .degree
                .iter()
                .zip(&shift.degree_delta)
                .map(|(a, b)| a - b)
                .collect();
            out.push(TypeOneDatum {
                slot: j,
                case: TypeOneCase::Theta,
                v: shift.shifted,
                d_prime,
            });
        }
    }
    out
}

/// Divisor class of `Omega(v_1, ..., v_s, d)` for data of relative dimension `-1`.
pub fn divisor_class(qh: &QuantumCohomology, vs: &[ElemId], d: &[i64]) -> Result<DivisorClass> {
    let par = &qh.par;
    let rs = &par.rs;
    let g = &par.weyl;
    if vs.len() < 2 {
        return invalid("at least two classes are needed");
    }
    for &v in vs {
        if !par.contains(v) {
            return invalid(format!("{} is not in W^P", g.format(v)));
        }
    }
    if qh.expected_dim_tag(vs, d) != 1 {
        return invalid("the data do not have relative dimension -1");
    }
    let top = par.minimal_rep(g.mul(par.s_theta(), g.w0()));
    let m = par.curve_degree(rs.theta_index())?;
    let dm: Vec<i64> = d.iter().zip(&m).map(|(a, b)| a + b).collect();
    let mut ext = vs.to_vec();
    ext.push(top);
    let level = qh.gw_invariant(&ext, &dm)?;
    let mut weights = Vec::with_capacity(vs.len());
    for i in 0..vs.len() {
        let mut w = vec![Q::zero(); rs.rank];
        for (b, c) in w.iter_mut().enumerate() {
            if g.is_left_descent(vs[i], b) {
                continue;
            }
            let up = g.lmul(b, vs[i]);
            if !par.contains(up) {
                continue;
            }
            let mut ws = vs.to_vec();
            ws[i] = up;
            *c = q(qh.gw_invariant(&ws, d)?);
        }
        weights.push(w);
    }
    Ok(DivisorClass {
        weights,
        level: q(level),
    })
}

/// Outcome of the consistency relation between the level and `lambda_i(theta^vee)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConsistencyCheck {
    pub slot: usize,
    /// `l(v') >= l(v)`, so the difference must vanish.
    pub first_branch: bool,
    pub expected: i64,
    pub actual: Q,
}

impl ConsistencyCheck {
    pub fn holds(&self) -> bool {
        self.actual == q(self.expected)
    }
}

/// For each slot, compare `l - lambda_i(theta^vee)` with the value predicted by the `s_theta` shift.
pub fn consistency_checks(
    qh: &QuantumCohomology,
    vs: &[ElemId],
    d: &[i64],
    class: &DivisorClass,
) -> Result<Vec<ConsistencyCheck>> {
    let par = &qh.par;
    let rs = &par.rs;
    let mut out = Vec::new();
    for i in 0..vs.len() {
        let shift = par.theta_shift(vs[i]);
        let actual = &class.level - rs.level_of(&class.weights[i]);
        let (first_branch, expected) = match shift.case {
            ShiftCase::Same | ShiftCase::Up => (true, 0),
            ShiftCase::Down => {
                let dm: Vec<i64> = d
                    .iter()
                    .zip(&shift.degree_delta)
                    .map(|(a, b)| a - b)
                    .collect();
                let mut ws = vs.to_vec();
                ws[i] = shift.shifted;
                (false, qh.gw_invariant(&ws, &dm)?)
            }
        };
        out.push(ConsistencyCheck {
            slot: i,
            first_branch,
            expected,
            actual,
        });
    }
    Ok(out)
}

/// A type I ray with the datum it comes from.
#[derive(Clone, Debug)]
pub struct TypeOneRay {
    pub datum: TypeOneDatum,
    pub class: DivisorClass,
}

/// A Levi-side class: one weight tuple on a simple component, in the component's standard
/// labelling, plus a multiple of the level generator `M_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeviRay {
    pub component: usize,
    pub weights: Vec<Vec<Q>>,
    pub level: Q,
}

/// Image of a Levi ray under induction.
#[derive(Clone, Debug)]
pub enum ImageKind {
    Zero,
    Extremal,
    /// Nonzero and not extremal, with nonnegative coefficients on rays of the cone.
    Decomposed(Vec<(Q, DivisorClass)>),
    NotExtremal,
    Outside,
}

#[derive(Clone, Debug)]
pub struct InducedRay {
    pub source: LeviRay,
    pub image: DivisorClass,
    pub kind: ImageKind,
    pub on_face: bool,
}

/// One simple factor of the derived Levi.
#[derive(Clone, Debug)]
pub struct LeviFactor {
    pub kind: CartanType,
    pub rank: usize,
    /// `nodes[a]` is the ambient (0-based) simple root of standard node `a`.
    pub nodes: Vec<usize>,
    pub dynkin_index: i64,
}

/// Everything attached to one regular facet.
pub struct FaceContext {
    pub face: FaceDatum,
    pub qh: Arc<QuantumCohomology>,
    pub scalars: InductionScalars,
    pub type_one: Vec<TypeOneRay>,
    pub factors: Vec<LeviFactor>,
    ramification: OnceLock<Vec<DivisorClass>>,
    ind_m: OnceLock<Vec<DivisorClass>>,
}

impl FaceContext {
    /// `dual` picks the coweight `mu` with `omega_P(mu) = +1`.
    pub fn new(face: FaceDatum, dual: bool) -> Result<Self> {
        let par = face.par.clone();
        if !par.is_maximal() {
            return invalid("induction is implemented for maximal parabolics");
        }
        let qh = quantum_cohomology(&par.rs, &par.s_p)?;
        if qh.deformed_invariant(&face.classes, &face.degree)? != 1 {
            return invalid("not a regular face: the deformed invariant is not 1");
        }
        let scalars = par.induction_scalars(dual)?;
        let mut type_one = Vec::new();
        for datum in type_one_data(&face) {
            let class = divisor_class(&qh, &datum.classes(&face), &datum.d_prime)?;
            type_one.push(TypeOneRay { datum, class });
        }
        let factors = (0..par.levi_components.len())
            .map(|k| {
                let (kind, rank, nodes) = par.component_type(k);
                LeviFactor {
                    kind,
                    rank,
                    nodes,
                    dynkin_index: scalars.dynkin_indices[k],
                }
            })
            .collect();
        Ok(FaceContext {
            face,
            qh,
            scalars,
            type_one,
            factors,
            ramification: OnceLock::new(),
            ind_m: OnceLock::new(),
        })
    }

    pub fn par(&self) -> &Arc<Parabolic> {
        &self.face.par
    }

    fn s(&self) -> usize {
        self.face.s()
    }

    fn rank(&self) -> usize {
        self.face.par.rs.rank
    }

    /// The equality of `Pic'` indexed by a type I datum, as a linear functional.
    pub fn pic_prime_functional(&self, datum: &TypeOneDatum) -> Vec<Q> {
        let (s, r) = (self.s(), self.rank());
        let mut f = vec![Q::zero(); s * r + 1];
        match datum.case {
            TypeOneCase::Cover { beta } => f[datum.slot * r + beta] = Q::one(),
            TypeOneCase::Theta => {
                let th = self.par().rs.theta_coroot();
                for b in 0..r {
                    f[datum.slot * r + b] = q(-th[b]);
                }
                f[s * r] = Q::one();
            }
        }
        f
    }

    /// Values of every `Pic'` functional on `x`.
    pub fn pic_prime_values(&self, x: &DivisorClass) -> Vec<Q> {
        let v = x.to_vector();
        self.type_one
            .iter()
            .map(|t| linalg::dot(&self.pic_prime_functional(&t.datum), &v))
            .collect()
    }

    /// Projection along the type I rays onto `Pic'`.
    pub fn p2(&self, x: &DivisorClass) -> DivisorClass {
        let mut out = x.clone();
        for (t, c) in self.type_one.iter().zip(self.pic_prime_values(x)) {
            if !c.is_zero() {
                out = out.add(&t.class.scale(&-c));
            }
        }
        out
    }

    /// Twist slot `i` by `u_i`, keep the level, then project with `p2`.
    pub fn pic_prime_project(&self, weights: &[Vec<Q>], level: &Q) -> DivisorClass {
        let g = &self.par().weyl;
        let twisted = DivisorClass {
            weights: weights
                .iter()
                .zip(&self.face.classes)
                .map(|(w, &u)| g.act_weight(u, w))
                .collect(),
            level: level.clone(),
        };
        self.p2(&twisted)
    }

    fn w_mu_power(&self, n: i64) -> ElemId {
        let g = &self.par().weyl;
        let base = if n >= 0 {
            self.scalars.w_mu
        } else {
            g.inverse(self.scalars.w_mu)
        };
        let mut w = g.identity();
        for _ in 0..n.unsigned_abs() {
            w = g.mul(base, w);
        }
        w
    }

    /// Number of applications of the degree-change pullback taking degree 0 to degree `d`.
    pub fn tau_power(&self) -> i64 {
        self.scalars.k0 * self.face.degree[0]
    }

    /// `ext` of a Levi tuple given on `delta_p` coordinates.
    pub fn ext(&self, levi: &[Vec<Q>]) -> Vec<Vec<Q>> {
        levi.iter().map(|m| self.par().ext(m)).collect()
    }

    /// The degree-change pullback applied `n` times to weights (no determinant factor).
    pub fn tau_weights(&self, weights: &[Vec<Q>], n: i64) -> Vec<Vec<Q>> {
        let g = &self.par().weyl;
        let mut out = weights.to_vec();
        out[0] = g.act_weight(self.w_mu_power(n), &out[0]);
        out
    }

    /// `Ind` of a Levi weight tuple on `delta_p` coordinates (no level part).
    pub fn ind_weights(&self, levi: &[Vec<Q>]) -> DivisorClass {
        let lifted = self.ext(levi);
        let shifted = self.tau_weights(&lifted, self.tau_power());
        self.pic_prime_project(&shifted, &Q::zero())
    }

    /// `(lambda; c D(V))` pulled back `n` times: slot 1 becomes `w_mu lambda_1 + c nu` per step.
    pub fn tau_with_determinant(&self, weights: &[Vec<Q>], c: &Q, n: i64) -> Vec<Vec<Q>> {
        let g = &self.par().weyl;
        let nu = linalg::qvec(&self.scalars.nu);
        let mut out = weights.to_vec();
        let winv = g.inverse(self.scalars.w_mu);
        for _ in 0..n.unsigned_abs() {
            out[0] = if n > 0 {
                let mut t = g.act_weight(self.scalars.w_mu, &out[0]);
                for (a, b) in t.iter_mut().zip(&nu) {
                    *a += c * b;
                }
                t
            } else {
                let t: Vec<Q> = out[0].iter().zip(&nu).map(|(a, b)| a - c * b).collect();
                g.act_weight(winv, &t)
            };
        }
        out
    }

    /// Ramification class shifted to degree zero and restricted to each Levi factor, as
    /// `(weights on the factor's standard nodes; level d_k)`.
    pub fn shifted_ramification(&self) -> &[DivisorClass] {
        self.ramification.get_or_init(|| {
            let par = self.par();
            let chis: Vec<Vec<Q>> = self
                .face
                .classes
                .iter()
                .map(|&u| linalg::qvec(&par.chi(u)))
                .collect();
            let shifted = self.tau_with_determinant(&chis, &Q::one(), -self.tau_power());
            self.factors
                .iter()
                .map(|f| DivisorClass {
                    weights: shifted
                        .iter()
                        .map(|w| f.nodes.iter().map(|&j| w[j].clone()).collect())
                        .collect(),
                    level: q(f.dynkin_index),
                })
                .collect()
        })
    }

    /// Embed weights given on a factor's standard nodes into `delta_p` coordinates.
    fn embed(&self, k: usize, weights: &[Vec<Q>]) -> Vec<Vec<Q>> {
        let par = self.par();
        let f = &self.factors[k];
        weights
            .iter()
            .map(|w| {
                let mut out = vec![Q::zero(); par.delta_p.len()];
                for (a, &node) in f.nodes.iter().enumerate() {
                    let pos = par.delta_p.iter().position(|&j| j == node).unwrap();
                    out[pos] = w[a].clone();
                }
                out
            })
            .collect()
    }

    /// `Ind(M_k)` for every factor.
    pub fn ind_level_generators(&self) -> &[DivisorClass] {
        self.ind_m.get_or_init(|| {
            self.shifted_ramification()
                .iter()
                .enumerate()
                .map(|(k, r)| {
                    let img = self.ind_weights(&self.embed(k, &r.weights));
                    img.scale(&(-Q::one() / q(self.factors[k].dynkin_index)))
                })
                .collect()
        })
    }

    /// `Ind` of a Levi ray.
    pub fn induce(&self, ray: &LeviRay) -> DivisorClass {
        let w = self.ind_weights(&self.embed(ray.component, &ray.weights));
        w.add(&self.ind_level_generators()[ray.component].scale(&ray.level))
    }

    /// Levi weights written in `delta_p` coordinates with their level, as a Levi ray on factor `k`.
    pub fn levi_ray_from_ambient(&self, k: usize, weights: &[Vec<Q>], level: Q) -> LeviRay {
        let f = &self.factors[k];
        let par = self.par();
        LeviRay {
            component: k,
            weights: weights
                .iter()
                .map(|w| {
                    f.nodes
                        .iter()
                        .map(|&node| {
                            let pos = par.delta_p.iter().position(|&j| j == node).unwrap();
                            w[pos].clone()
                        })
                        .collect()
                })
                .collect(),
            level,
        }
    }

    /// Extremal rays of the cone of factor `k`.
    pub fn levi_rays(&self, k: usize) -> Result<Vec<LeviRay>> {
        let f = &self.factors[k];
        let rays = levi_cone_rays(f.kind, f.rank, self.s())?;
        Ok(rays
            .iter()
            .map(|v| {
                let c = DivisorClass::from_ray(v, self.s(), f.rank);
                LeviRay {
                    component: k,
                    weights: c.weights,
                    level: c.level,
                }
            })
            .collect())
    }

    /// Images of every Levi ray, classified against the cone of `G`.
    pub fn type_two_candidates(&self) -> Result<Vec<InducedRay>> {
        let cone = eigencone::eigen_cone(&self.par().rs, self.s())?;
        let mut out = Vec::new();
        for k in 0..self.factors.len() {
            for ray in self.levi_rays(k)? {
                let image = self.induce(&ray);
                out.push(self.classify(&cone, ray, image)?);
            }
        }
        Ok(out)
    }

    fn classify(&self, cone: &EigenCone, source: LeviRay, image: DivisorClass) -> Result<InducedRay> {
        let f = eigencone::facet_inequality(&self.face)?;
        let on_face = eigencone::evaluate(&f, &image).is_zero();
        let x = image.to_vector();
        let kind = if image.is_zero() {
            ImageKind::Zero
        } else if !cone.cone.membership_vec(&x).contains() {
            ImageKind::Outside
        } else if cone.cone.is_extremal(&x) {
            ImageKind::Extremal
        } else {
            let (s, r) = (self.s(), self.rank());
            let gens: Vec<Vec<Q>> = cone
                .cone
                .compute_rays()?
                .iter()
                .map(|v| linalg::qvec(v))
                .filter(|v| linalg::dot(&f, v).is_zero())
                .collect();
            match eigencone::decompose(&x, &gens) {
                Some(c) => ImageKind::Decomposed(
                    c.into_iter()
                        .zip(&gens)
                        .filter(|(a, _)| !a.is_zero())
                        .map(|(a, g)| (a, DivisorClass::from_vector(g, s, r)))
                        .collect(),
                ),
                None => ImageKind::NotExtremal,
            }
        };
        Ok(InducedRay {
            source,
            image,
            kind,
            on_face,
        })
    }

    /// Format a Levi ray with ambient labels, e.g. `(ω4^L, ω3^L, 0) ⊗ M1`.
    pub fn format_levi_ray(&self, ray: &LeviRay) -> String {
        let f = &self.factors[ray.component];
        let parts: Vec<String> = ray
            .weights
            .iter()
            .map(|w| notation::format_levi_weight(w, &f.nodes))
            .collect();
        let m = if self.factors.len() > 1 {
            format!("M{}", ray.component + 1)
        } else {
            "M".to_string()
        };
        let lvl = if ray.level.is_one() {
            m
        } else if ray.level.is_zero() {
            String::new()
        } else {
            format!("{m}^{}", notation::format_rational(&ray.level))
        };
        if ray.weights.iter().all(|w| linalg::is_zero_vec(w)) {
            if lvl.is_empty() {
                "0".into()
            } else {
                lvl
            }
        } else if lvl.is_empty() {
            format!("({})", parts.join(", "))
        } else {
            format!("({}) ⊗ {lvl}", parts.join(", "))
        }
    }
}

impl fmt::Debug for FaceContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FaceContext({})", self.face)
    }
}

type LeviKey = (CartanType, usize, usize);

fn levi_cones() -> &'static RwLock<HashMap<LeviKey, Arc<Vec<Vec<i64>>>>> {
    static CACHE: OnceLock<RwLock<HashMap<LeviKey, Arc<Vec<Vec<i64>>>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Extremal rays of the cone of a simple group, computed once per `(type, rank, s)`.
pub fn levi_cone_rays(kind: CartanType, rank: usize, s: usize) -> Result<Arc<Vec<Vec<i64>>>> {
    let key = (kind, rank, s);
    if let Some(r) = levi_cones().read().get(&key) {
        return Ok(r.clone());
    }
    let rs = Arc::new(RootSystem::new(kind, rank)?);
    let cone = eigencone::eigen_cone(&rs, s)?;
    let rays = Arc::new(cone.cone.compute_rays()?.to_vec());
    Ok(levi_cones().write().entry(key).or_insert(rays).clone())
}

/// Check that a type I class violates only its own `Pic'` equality, with value one.
pub fn pic_prime_defect_pattern(ctx: &FaceContext) -> Vec<Vec<Q>> {
    ctx.type_one
        .iter()
        .map(|t| ctx.pic_prime_values(&t.class))
        .collect()
}

/// Whether the type I classes and `Pic'` cut along the face span the face hyperplane.
pub fn span_ranks(ctx: &FaceContext) -> Result<(usize, usize)> {
    let (s, r) = (ctx.s(), ctx.rank());
    let dim = s * r + 1;
    let mut rows: Vec<Vec<Q>> = ctx
        .type_one
        .iter()
        .map(|t| ctx.pic_prime_functional(&t.datum))
        .collect();
    rows.push(eigencone::facet_inequality(&ctx.face)?);
    let pic_face = dim - linalg::rank(&rows);
    let classes: Vec<Vec<Q>> = ctx.type_one.iter().map(|t| t.class.to_vector()).collect();
    let span = linalg::rank(&classes);
    if span != ctx.type_one.len() {
        return Err(Error::Inconsistent("type I classes are linearly dependent".into()));
    }
    Ok((span + pic_face, dim - 1))
}

/// Printable summary of everything computed on a face.
#[derive(Clone, Debug, Serialize)]
pub struct FaceReport {
    pub face: String,
    pub type_one: Vec<TypeOneRow>,
    pub mu: Vec<i64>,
    pub k0: i64,
    pub w_mu: String,
    pub dynkin_indices: Vec<i64>,
    pub nu_restricted: String,
    pub ramification: Vec<String>,
    pub ind_level_generators: Vec<String>,
    pub induced: Vec<InducedRow>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TypeOneRow {
    pub slot: usize,
    pub datum: String,
    pub degree: Vec<i64>,
    pub class: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct InducedRow {
    pub source: String,
    pub image: String,
    pub kind: String,
    pub on_face: bool,
    pub decomposition: Vec<String>,
}

impl FaceContext {
    pub fn report(&self) -> Result<FaceReport> {
        let par = self.par();
        let levi_nodes: Vec<usize> = par.delta_p.clone();
        let nu: Vec<Q> = self.scalars.nu_restricted.iter().map(|&c| q(c)).collect();
        let type_one = self
            .type_one
            .iter()
            .map(|t| TypeOneRow {
                slot: t.datum.slot + 1,
                datum: t.datum.describe(&self.face),
                degree: t.datum.d_prime.clone(),
                class: t.class.to_string(),
            })
            .collect();
        let ramification = self
            .shifted_ramification()
            .iter()
            .enumerate()
            .map(|(k, r)| {
                let ray = LeviRay {
                    component: k,
                    weights: r.weights.clone(),
                    level: r.level.clone(),
                };
                self.format_levi_ray(&ray)
            })
            .collect();
        let induced = self
            .type_two_candidates()?
            .into_iter()
            .map(|x| {
                let (kind, decomposition) = match &x.kind {
                    ImageKind::Zero => ("zero", vec![]),
                    ImageKind::Extremal => ("extremal", vec![]),
                    ImageKind::Decomposed(parts) => (
                        "decomposed",
                        parts
                            .iter()
                            .map(|(a, c)| format!("{} {c}", notation::format_rational(a)))
                            .collect(),
                    ),
                    ImageKind::NotExtremal => ("not extremal", vec![]),
                    ImageKind::Outside => ("outside", vec![]),
                };
                InducedRow {
                    source: self.format_levi_ray(&x.source),
                    image: x.image.to_string(),
                    kind: kind.to_string(),
                    on_face: x.on_face,
                    decomposition,
                }
            })
            .collect();
        Ok(FaceReport {
            face: self.face.to_string(),
            type_one,
            mu: self.scalars.mu.clone(),
            k0: self.scalars.k0,
            w_mu: par.format(self.scalars.w_mu),
            dynkin_indices: self.scalars.dynkin_indices.clone(),
            nu_restricted: notation::format_levi_weight(&nu, &levi_nodes),
            ramification,
            ind_level_generators: self.ind_level_generators().iter().map(|m| m.to_string()).collect(),
            induced,
        })
    }
}

impl fmt::Display for FaceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "face {}", self.face)?;
        writeln!(f, "type I rays")?;
        let w = self.type_one.iter().map(|t| t.datum.chars().count()).max().unwrap_or(0);
        for t in &self.type_one {
            let pad = w - t.datum.chars().count();
            writeln!(f, "  j={}  {}{}  {}", t.slot, t.datum, " ".repeat(pad), t.class)?;
        }
        let mu: Vec<String> = self.mu.iter().map(|x| x.to_string()).collect();
        let d: Vec<String> = self.dynkin_indices.iter().map(|x| x.to_string()).collect();
        writeln!(
            f,
            "mu = ({})  k0 = {}  w_mu = {}  d = ({})  nu|L' = {}",
            mu.join(","),
            self.k0,
            self.w_mu,
            d.join(","),
            self.nu_restricted
        )?;
        for (k, (r, m)) in self.ramification.iter().zip(&self.ind_level_generators).enumerate() {
            let name = if self.ramification.len() > 1 {
                format!("M{}", k + 1)
            } else {
                "M".to_string()
            };
            writeln!(f, "ramification {r}")?;
            writeln!(f, "Ind({name}) = {m}")?;
        }
        writeln!(f, "induced rays")?;
        let w = self.induced.iter().map(|t| t.source.chars().count()).max().unwrap_or(0);
        for x in &self.induced {
            let pad = w - x.source.chars().count();
            let face = if x.on_face { "" } else { "  off face" };
            writeln!(f, "  {}{}  ->  {}  [{}]{face}", x.source, " ".repeat(pad), x.image, x.kind)?;
            for part in &x.decomposition {
                writeln!(f, "      + {part}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(label: &str, i: usize, classes: &str, d: i64, dual: bool) -> FaceContext {
        let rs = Arc::new(RootSystem::parse(label).unwrap());
        let qh = quantum_cohomology(&rs, &[i]).unwrap();
        let c = qh.par.parse_classes(classes).unwrap();
        FaceContext::new(FaceDatum::new(&qh, c, vec![d]).unwrap(), dual).unwrap()
    }

    fn d4p1(dual: bool) -> FaceContext {
        ctx("D4", 0, "s1 | s2 s1 | s4 s2 s1", 1, dual)
    }

    fn d4p2(dual: bool) -> FaceContext {
        ctx("D4", 1, "s2 | s3 s1 s2 | s4 s3 s1 s2", 2, dual)
    }

    fn g2p2(dual: bool) -> FaceContext {
        ctx("G2", 1, "s1 s2 s1 s2 | s1 s2 | s2", 1, dual)
    }

    fn rendered(c: &FaceContext) -> Vec<String> {
        c.type_one.iter().map(|t| t.class.to_string()).collect()
    }

    #[test]
    fn d4_p1_type_one() {
        let c = d4p1(false);
        assert_eq!(
            rendered(&c),
            ["(ω1, ω4, ω3, 1)", "(0, ω3, ω3, 1)", "(ω2, ω2, 2ω3, 2)", "(ω2, ω3+ω4, ω3+ω4, 2)"]
        );
        let cases: Vec<_> = c.type_one.iter().map(|t| (t.datum.slot, t.datum.case)).collect();
        assert_eq!(
            cases,
            [
                (0, TypeOneCase::Cover { beta: 0 }),
                (0, TypeOneCase::Theta),
                (1, TypeOneCase::Cover { beta: 1 }),
                (2, TypeOneCase::Cover { beta: 3 }),
            ]
        );
        assert_eq!(c.type_one[1].datum.d_prime, vec![0]);
    }

    #[test]
    fn d4_p2_type_one() {
        let c = d4p2(false);
        assert_eq!(
            rendered(&c),
            [
                "(ω2, 2ω4, ω2, 2)",
                "(ω1+ω3+ω4, ω2+2ω4, 2ω2, 4)",
                "(ω1+ω4, ω1+ω4, ω2, 2)",
                "(ω3+ω4, ω3+ω4, ω2, 2)",
                "(ω1+ω3, ω4, ω2, 2)",
                "(ω3, ω4, ω1, 1)",
                "(ω1, ω4, ω3, 1)",
                "(ω1+ω3+ω4, ω2+ω4, ω2+ω4, 3)",
                "(ω4, ω4, 0, 1)",
            ]
        );
    }

    #[test]
    fn g2_p2_type_one() {
        let c = g2p2(false);
        assert_eq!(
            rendered(&c),
            [
                "(ω1, ω2, 2ω1, 2)",
                "(0, ω1, ω1, 1)",
                "(ω2, ω2, 3ω1, 3)",
                "(0, ω2, ω2, 2)",
                "(ω2, 2ω2, 3ω1, 4)",
            ]
        );
    }

    #[test]
    fn worked_divisor_class() {
        let c = d4p1(false);
        let g = &c.par().weyl;
        let vs = vec![
            g.parse("s1 s2 s3 s4 s2 s1").unwrap(),
            g.parse("s2 s1").unwrap(),
            g.parse("s4 s2 s1").unwrap(),
        ];
        assert_eq!(vs[0], c.par().top());
        let x = divisor_class(&c.qh, &vs, &[0]).unwrap();
        assert_eq!(x.to_string(), "(0, ω3, ω3, 1)");
        assert!(divisor_class(&c.qh, &vs, &[1]).is_err());
    }

    #[test]
    fn level_generators() {
        assert_eq!(d4p1(false).ind_level_generators()[0].to_string(), "(ω2, ω3, ω3, 2)");
        assert!(d4p2(false).ind_level_generators().iter().all(DivisorClass::is_zero));
        assert!(g2p2(false).ind_level_generators()[0].is_zero());
        let r = g2p2(false).shifted_ramification()[0].clone();
        assert_eq!(r.to_string(), "(7ω1, 4ω1, 3ω1, 10)");
    }

    #[test]
    fn d4_p1_inductions() {
        let c = d4p1(false);
        let ray = |w: [[i64; 3]; 3], l: i64| LeviRay {
            component: 0,
            weights: w.iter().map(|x| linalg::qvec(x)).collect(),
            level: q(l),
        };
        // standard A3 labelling of the Levi {2,3,4}
        let nodes = &c.factors[0].nodes;
        let std = |ambient: usize| nodes.iter().position(|&j| j == ambient).unwrap();
        let mut a = [[0i64; 3]; 3];
        a[0][std(3)] = 1;
        a[1][std(2)] = 1;
        assert_eq!(c.induce(&ray(a, 1)).to_string(), "(ω3, ω3, 0, 1)");
        let mut b = [[0i64; 3]; 3];
        b[1][std(3)] = 1;
        b[2][std(2)] = 1;
        assert!(c.induce(&ray(b, 1)).is_zero());
        let mut e = [[0i64; 3]; 3];
        e[0][std(2)] = 1;
        e[0][std(3)] = 1;
        e[1][std(1)] = 1;
        e[2][std(1)] = 1;
        let img = c.induce(&ray(e, 2));
        assert_eq!(img.to_string(), "(ω2+ω3+ω4, ω1+ω3+ω4, ω1+2ω3, 4)");
        let cone = eigencone::eigen_cone(&c.par().rs, 3).unwrap();
        assert!(!cone.cone.is_extremal(&img.to_vector()));
        let parts = [
            DivisorClass::from_ints(&[vec![0, 0, 1, 0], vec![0; 4], vec![0, 0, 1, 0]], 1),
            DivisorClass::from_ints(&[vec![0, 0, 0, 1], vec![1, 0, 0, 0], vec![0, 0, 1, 0]], 1),
            DivisorClass::from_ints(&[vec![0, 1, 0, 0], vec![0, 0, 1, 1], vec![1, 0, 0, 0]], 2),
        ];
        let mut sum = DivisorClass::zero(3, 4);
        for p in &parts {
            assert!(cone.membership(p).unwrap().contains());
            sum = sum.add(p);
        }
        assert_eq!(sum, img);
    }

    #[test]
    fn d4_p1_ramification_correction() {
        let c = d4p1(false);
        let r = &c.shifted_ramification()[0];
        let levi: Vec<Vec<Q>> = c.embed(0, &r.weights);
        let lifted = c.ext(&levi);
        let shifted = c.tau_weights(&lifted, c.tau_power());
        let total = c.pic_prime_project(&shifted, &Q::zero());
        assert_eq!(total.to_string(), "(-2ω2, -2ω3, -2ω3, -4)");
    }

    fn nonzero_images(c: &FaceContext) -> Vec<(String, String)> {
        let mut v: Vec<(String, String)> = c
            .type_two_candidates()
            .unwrap()
            .into_iter()
            .filter(|x| !x.image.is_zero())
            .map(|x| (c.format_levi_ray(&x.source), x.image.to_string()))
            .collect();
        v.sort();
        v
    }

    #[test]
    fn d4_p2_levi_table() {
        let c = d4p2(false);
        let all = c.type_two_candidates().unwrap();
        assert_eq!(all.len(), 12);
        assert!(all.iter().all(|x| x.on_face));
        assert_eq!(
            nonzero_images(&c),
            [
                ("(ω1^L, ω1^L, 0) ⊗ M1".to_string(), "(2ω1, ω2, ω2, 2)".to_string()),
                ("(ω3^L, ω3^L, 0) ⊗ M2".into(), "(2ω3, ω2, ω2, 2)".into()),
                ("(ω4^L, 0, ω4^L) ⊗ M3".into(), "(2ω4, ω2, ω2, 2)".into()),
            ]
        );
    }

    #[test]
    fn g2_p2_levi_table() {
        let c = g2p2(false);
        assert_eq!(c.type_two_candidates().unwrap().len(), 4);
        assert_eq!(
            nonzero_images(&c),
            [("(0, ω1^L, ω1^L) ⊗ M".to_string(), "(ω2, ω2, 2ω1, 2)".to_string())]
        );
    }

    #[test]
    fn dual_mu_gives_same_images() {
        for (a, b) in [(d4p1(false), d4p1(true)), (d4p2(false), d4p2(true)), (g2p2(false), g2p2(true))] {
            assert_eq!(a.scalars.k0, -b.scalars.k0);
            assert_eq!(a.ind_level_generators(), b.ind_level_generators());
            for k in 0..a.factors.len() {
                for ray in a.levi_rays(k).unwrap() {
                    assert_eq!(a.induce(&ray), b.induce(&ray));
                }
            }
        }
    }

    #[test]
    fn type_one_classes_violate_one_equality() {
        for c in [d4p1(false), d4p2(false), g2p2(false)] {
            let m = pic_prime_defect_pattern(&c);
            for (i, row) in m.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    assert_eq!(*v, q(i64::from(i == j)));
                }
            }
            for t in &c.type_one {
                let x = &t.class;
                match t.datum.case {
                    TypeOneCase::Cover { beta } => assert_eq!(x.weights[t.datum.slot][beta], q(1)),
                    TypeOneCase::Theta => assert_eq!(
                        c.par().rs.level_of(&x.weights[t.datum.slot]),
                        &x.level - q(1)
                    ),
                }
            }
        }
    }

    #[test]
    fn type_one_consistency_and_face() {
        for c in [d4p1(false), d4p2(false), g2p2(false)] {
            let f = eigencone::facet_inequality(&c.face).unwrap();
            let cone = eigencone::eigen_cone(&c.par().rs, 3).unwrap();
            for t in &c.type_one {
                let vs = t.datum.classes(&c.face);
                for chk in consistency_checks(&c.qh, &vs, &t.datum.d_prime, &t.class).unwrap() {
                    assert!(chk.holds(), "{chk:?}");
                }
                assert!(eigencone::evaluate(&f, &t.class).is_zero());
                assert!(cone.membership(&t.class).unwrap().contains());
                assert!(cone.cone.is_extremal(&t.class.to_vector()));
            }
            let (got, want) = span_ranks(&c).unwrap();
            assert_eq!(got, want);
        }
    }
}
