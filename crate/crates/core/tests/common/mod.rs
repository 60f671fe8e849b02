#![allow(dead_code)]

use std::sync::Arc;

use num_traits::Zero;
use qcone::eigencone::{self, dd, EigenCone};
use qcone::induction::{consistency_checks, pic_prime_defect_pattern, span_ranks, FaceContext, TypeOneCase};
use qcone::linalg::{q, Q};
use qcone::qschubert::{quantum_cohomology, QuantumCohomology};
use qcone::rootsys::{CartanType, ElemId, Parabolic, RootSystem};

pub type Check = Result<(), String>;

pub fn rs(label: &str) -> Arc<RootSystem> {
    Arc::new(RootSystem::parse(label).unwrap())
}

pub fn small_groups() -> Vec<Arc<RootSystem>> {
    let mut out = Vec::new();
    for (kind, ranks) in [
        (CartanType::A, 1..=4),
        (CartanType::B, 2..=4),
        (CartanType::C, 3..=4),
        (CartanType::D, 4..=4),
        (CartanType::G, 2..=2),
        (CartanType::F, 4..=4),
    ] {
        for n in ranks {
            out.push(Arc::new(RootSystem::new(kind, n).unwrap()));
        }
    }
    out
}

/// `sum_gamma gamma(alpha^vee) gamma(x_j) = 2 g* alpha(x_j) / (alpha, alpha)`.
pub fn bc_identity(r: &RootSystem) -> Check {
    let np = r.n_positive();
    for a in 0..np {
        for j in 0..r.rank {
            let lhs: i64 = (0..np)
                .map(|g| r.pair_coroot_i(r.root_weight(g), a) * r.positive_roots[g][j])
                .sum();
            let rhs = q(2 * r.dual_coxeter * r.positive_roots[a][j]) / r.root_len2(a);
            if q(lhs) != rhs {
                return Err(format!("{}: root {a}, coweight {j}: {lhs} != {rhs}", r.label()));
            }
        }
    }
    Ok(())
}

pub fn associative(qh: &QuantumCohomology, a: ElemId, b: ElemId, c: ElemId) -> Check {
    let (x, y, z) = (qh.class(a), qh.class(b), qh.class(c));
    let ab = qh.multiply(&x, &y, None).map_err(|e| e.to_string())?;
    let ba = qh.multiply(&y, &x, None).map_err(|e| e.to_string())?;
    if ab != ba {
        return Err(format!("not commutative at {a},{b}"));
    }
    let left = qh.multiply(&ab, &z, None).map_err(|e| e.to_string())?;
    let bc = qh.multiply(&y, &z, None).map_err(|e| e.to_string())?;
    let right = qh.multiply(&x, &bc, None).map_err(|e| e.to_string())?;
    if left != right {
        let p = &qh.par;
        return Err(format!(
            "not associative at {} | {} | {}",
            p.format(a),
            p.format(b),
            p.format(c)
        ));
    }
    Ok(())
}

pub fn all_triples_associative(qh: &QuantumCohomology) -> Check {
    let reps = qh.par.wp_reps.clone();
    for &a in &reps {
        for &b in &reps {
            for &c in &reps {
                associative(qh, a, b, c)?;
            }
        }
    }
    Ok(())
}

/// The degree-zero pairing against `w0 w w0_L` is the identity.
pub fn poincare_duality(qh: &QuantumCohomology) -> Check {
    let par = &qh.par;
    let point = par.wp_reps[0];
    let zero = vec![0; par.s_p.len()];
    for &u in &par.wp_reps {
        for &v in &par.wp_reps {
            let pr = qh.classical_product(u, par.dual(v)).map_err(|e| e.to_string())?;
            let want = i64::from(u == v);
            if pr.coefficient(point, &zero) != want {
                return Err(format!("P{}: <{}, dual {}>", par.label(), par.format(u), par.format(v)));
            }
        }
    }
    Ok(())
}

pub fn all_parabolics(r: &Arc<RootSystem>) -> Vec<Vec<usize>> {
    (1u32..(1 << r.rank))
        .map(|m| (0..r.rank).filter(|i| m & (1 << i) != 0).collect())
        .collect()
}

/// Exactly two coweights meet the conditions for each `(P, i)`, and they are the reductions of
/// `+-alpha_i^vee`.
pub fn mu_cardinality(r: &Arc<RootSystem>) -> Check {
    const BOX: i64 = 8;
    for s_p in all_parabolics(r) {
        let par = Parabolic::new(r.clone(), &s_p).map_err(|e| e.to_string())?;
        let levi = par.delta_p.clone();
        for &i in &s_p {
            let mut found = Vec::new();
            let m = levi.len() as u32;
            let side = (2 * BOX + 1) as usize;
            for sign in [-1i64, 1] {
                for code in 0..side.pow(m) {
                    let mut mu = vec![0i64; r.rank];
                    mu[i] = sign;
                    let mut c = code;
                    for &j in &levi {
                        mu[j] = (c % side) as i64 - BOX;
                        c /= side;
                    }
                    if par.mu_conditions_hold(i, &mu) {
                        found.push(mu);
                    }
                }
            }
            let cand = par.mu_candidates(i).map_err(|e| e.to_string())?;
            let mut want = vec![cand.minus.clone(), cand.plus.clone()];
            want.sort();
            found.sort();
            if found != want {
                return Err(format!("{} P{} i={}: {found:?} vs {want:?}", r.label(), par.label(), i + 1));
            }
            if par.w0l_on_coroot(&cand.plus).iter().map(|x| -x).collect::<Vec<_>>() != cand.minus {
                return Err(format!("{} P{}: candidates are not related by -w0_L", r.label(), par.label()));
            }
        }
    }
    Ok(())
}

/// rays -> facets -> rays on the cone of a group.
pub fn dd_round_trip(cone: &EigenCone) -> Check {
    let dim = cone.cone.ambient_dim;
    let rays = cone.cone.compute_rays().map_err(|e| e.to_string())?.to_vec();
    let facets = dd::facets_from_rays(&rays, dim).map_err(|e| e.to_string())?;
    let mut rows = cone.cone.integer_rows();
    rows.sort();
    rows.dedup();
    let irredundant: Vec<Vec<i64>> = rows
        .iter()
        .filter(|r| dd::is_facet(r, &rays, dim))
        .cloned()
        .collect();
    if facets != irredundant {
        return Err(format!("{} facets from rays, {} irredundant rows", facets.len(), irredundant.len()));
    }
    let back = dd::extremal_rays(&facets, dim).map_err(|e| e.to_string())?;
    if back != rays {
        return Err("rays differ after the round trip".into());
    }
    Ok(())
}

/// Per face: consistency relation, single `Pic'` violation with the right value, the span
/// decomposition, and that each class lies in the cone on the face.
pub struct TypeOneTally {
    pub classes: usize,
    pub first_branch: usize,
    pub second_branch: usize,
}

pub fn type_one_checks(cone: &EigenCone, faces: &[eigencone::FaceDatum]) -> Result<TypeOneTally, String> {
    let mut t = TypeOneTally {
        classes: 0,
        first_branch: 0,
        second_branch: 0,
    };
    for face in faces {
        let ctx = FaceContext::new(face.clone(), false).map_err(|e| format!("{face}: {e}"))?;
        let f = eigencone::facet_inequality(face).map_err(|e| e.to_string())?;
        let pattern = pic_prime_defect_pattern(&ctx);
        for (a, ray) in ctx.type_one.iter().enumerate() {
            t.classes += 1;
            let vs = ray.datum.classes(face);
            for chk in consistency_checks(&ctx.qh, &vs, &ray.datum.d_prime, &ray.class).map_err(|e| e.to_string())? {
                if !chk.holds() {
                    return Err(format!("{face}: consistency fails for {}: {chk:?}", ray.class));
                }
                if chk.first_branch {
                    t.first_branch += 1;
                } else {
                    t.second_branch += 1;
                }
            }
            for (b, v) in pattern[a].iter().enumerate() {
                let want = if a == b { q(1) } else { Q::zero() };
                if *v != want {
                    return Err(format!("{face}: Pic' pattern at ({a},{b}) is {v}"));
                }
            }
            let x = &ray.class;
            let j = ray.datum.slot;
            let ok = match ray.datum.case {
                TypeOneCase::Cover { beta } => x.weights[j][beta] == q(1),
                TypeOneCase::Theta => cone.rs.level_of(&x.weights[j]) == &x.level - q(1),
            };
            if !ok {
                return Err(format!("{face}: violated equality of {x} has the wrong value"));
            }
            if !eigencone::evaluate(&f, x).is_zero() {
                return Err(format!("{face}: {x} is off the face"));
            }
            if !cone.membership(x).map_err(|e| e.to_string())?.contains() {
                return Err(format!("{face}: {x} is outside the cone"));
            }
        }
        let (got, want) = span_ranks(&ctx).map_err(|e| e.to_string())?;
        if got != want {
            return Err(format!("{face}: span rank {got}, expected {want}"));
        }
    }
    Ok(t)
}

pub fn quantum_cohomology_of(label: &str, i: usize) -> Arc<QuantumCohomology> {
    quantum_cohomology(&rs(label), &[i]).unwrap()
}
