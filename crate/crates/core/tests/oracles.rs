//! Structure constants checked against independent constructions: divided differences on the
//! coinvariant algebra, the quantum Monk rule for flag varieties and the projective space ring.

use std::collections::HashMap;
use std::sync::Arc;

use num_traits::Zero;
use qcone::linalg::{q, Q};
use qcone::qschubert::quantum_cohomology;
use qcone::rootsys::{ElemId, RootSystem};

fn rs(label: &str) -> Arc<RootSystem> {
    Arc::new(RootSystem::parse(label).unwrap())
}

/// Points of the Cartan subalgebra in fundamental-coweight coordinates.
struct Bgg {
    rs: Arc<RootSystem>,
    order: usize,
}

impl Bgg {
    fn root_at(&self, k: usize, p: &[Q]) -> Q {
        self.rs.positive_roots[k]
            .iter()
            .zip(p)
            .map(|(&a, x)| q(a) * x)
            .sum()
    }

    fn simple_at(&self, i: usize, p: &[Q]) -> Q {
        p[i].clone()
    }

    fn reflect(&self, i: usize, p: &[Q]) -> Vec<Q> {
        let mut e = vec![0; self.rs.rank];
        e[i] = 1;
        let cor = self.rs.coroot_to_coweight(&e);
        let a = self.simple_at(i, p);
        p.iter().zip(&cor).map(|(x, &c)| x - &a * q(c)).collect()
    }

    fn top(&self, p: &[Q]) -> Q {
        let prod: Q = (0..self.rs.n_positive()).map(|k| self.root_at(k, p)).product();
        prod / q(self.order as i64)
    }

    /// `(d_{word[0]} ... d_{word[last]} f)(p)`.
    fn divided(&self, word: &[usize], f: &dyn Fn(&[Q]) -> Q, p: &[Q]) -> Q {
        match word.split_first() {
            None => f(p),
            Some((&i, rest)) => {
                let g = |x: &[Q]| self.divided(rest, f, x);
                (g(p) - g(&self.reflect(i, p))) / self.simple_at(i, p)
            }
        }
    }
}

/// Classical constants in codimension labels: `S_u S_v = sum c^w S_w`.
fn bgg_check(label: &str) {
    let r = rs(label);
    let g = r.weyl().unwrap();
    let qh = quantum_cohomology(&r, &(0..r.rank).collect::<Vec<_>>()).unwrap();
    let bgg = Bgg {
        rs: r.clone(),
        order: g.order(),
    };
    let n = g.length(g.w0());
    let points: [Vec<Q>; 2] = [
        (0..r.rank).map(|i| q([3, 7, 19, 41][i])).collect(),
        (0..r.rank).map(|i| q([5, 2, 11, 29][i])).collect(),
    ];
    let schubert = |u: ElemId, p: &[Q]| -> Q {
        let word = g.word0(g.mul(g.inverse(u), g.w0()));
        bgg.divided(&word, &|x| bgg.top(x), p)
    };
    let elems: Vec<ElemId> = g.elements().collect();
    for &u in &elems {
        for &v in &elems {
            let lw = g.length(u) + g.length(v);
            if lw > n {
                continue;
            }
            let prod = qh
                .classical_product(g.mul(g.w0(), u), g.mul(g.w0(), v))
                .unwrap();
            for &w in elems.iter().filter(|&&w| g.length(w) == lw) {
                let word = g.word0(w);
                let vals: Vec<Q> = points
                    .iter()
                    .map(|p| bgg.divided(&word, &|x| schubert(u, x) * schubert(v, x), p))
                    .collect();
                assert_eq!(vals[0], vals[1], "{label}: not a constant");
                let got = prod.coefficient(g.mul(g.w0(), w), &vec![0; r.rank]);
                assert_eq!(
                    q(got),
                    vals[0],
                    "{label}: {} . {} at {}",
                    g.format(u),
                    g.format(v),
                    g.format(w)
                );
            }
        }
    }
}

#[test]
fn bgg_a2() {
    bgg_check("A2");
}

#[test]
fn bgg_b2() {
    bgg_check("B2");
}

#[test]
fn bgg_g2() {
    bgg_check("G2");
}

#[test]
fn bgg_a3() {
    bgg_check("A3");
}

fn inversions(p: &[usize]) -> usize {
    (0..p.len())
        .flat_map(|i| (i + 1..p.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| p[i] > p[j])
        .count()
}

/// Quantum Monk rule on the full flag variety of `C^n`, codimension labels as permutations.
fn monk_check(n: usize) {
    let r = rs(&format!("A{}", n - 1));
    let g = r.weyl().unwrap();
    let qh = quantum_cohomology(&r, &(0..n - 1).collect::<Vec<_>>()).unwrap();
    let perm = |w: ElemId| -> Vec<usize> {
        let mut p: Vec<usize> = (0..n).collect();
        for &i in g.word0(w).iter() {
            // right multiplication by s_i swaps positions i, i+1
            p.swap(i, i + 1);
        }
        p
    };
    let index: HashMap<Vec<usize>, ElemId> = g.elements().map(|w| (perm(w), w)).collect();
    for w in g.elements() {
        assert_eq!(inversions(&perm(w)), g.length(w));
    }
    for w in g.elements() {
        let pw = perm(w);
        for rr in 0..n - 1 {
            let mut want: HashMap<(ElemId, Vec<i64>), i64> = HashMap::new();
            for a in 0..=rr {
                for b in rr + 1..n {
                    let mut t = pw.clone();
                    t.swap(a, b);
                    let lt = inversions(&t) as i64;
                    let lw = inversions(&pw) as i64;
                    let mut d = vec![0i64; n - 1];
                    if lt == lw + 1 {
                        *want.entry((index[&t], d)).or_default() += 1;
                    } else if lt == lw + 1 - 2 * (b - a) as i64 {
                        for x in d.iter_mut().take(b).skip(a) {
                            *x = 1;
                        }
                        *want.entry((index[&t], d)).or_default() += 1;
                    }
                }
            }
            let s = g.from_letters(&[rr]);
            let got = qh
                .quantum_product(g.mul(g.w0(), s), g.mul(g.w0(), w))
                .unwrap();
            let got: HashMap<(ElemId, Vec<i64>), i64> = got
                .terms
                .iter()
                .map(|((c, d), m)| ((g.mul(g.w0(), *c), d.0.clone()), *m))
                .collect();
            assert_eq!(got, want, "s{} * {}", rr + 1, g.format(w));
        }
    }
}

#[test]
fn quantum_monk_fl3() {
    monk_check(3);
}

#[test]
fn quantum_monk_fl4() {
    monk_check(4);
}

#[test]
fn projective_spaces() {
    for n in 1..=4usize {
        let r = rs(&format!("A{n}"));
        let qh = quantum_cohomology(&r, &[0]).unwrap();
        let par = &qh.par;
        let by_codim: HashMap<usize, ElemId> = par.wp_reps.iter().map(|&w| (par.codim(w), w)).collect();
        assert_eq!(by_codim.len(), n + 1);
        for a in 0..=n {
            for b in 0..=n {
                let prod = qh.quantum_product(by_codim[&a], by_codim[&b]).unwrap();
                let (k, c) = ((a + b) / (n + 1), (a + b) % (n + 1));
                assert_eq!(prod.terms.len(), 1, "h^{a} h^{b} in P^{n}");
                assert_eq!(prod.coefficient(by_codim[&c], &[k as i64]), 1);
            }
        }
    }
}

#[test]
fn top_class_integrates_to_one() {
    for label in ["A2", "B2", "G2"] {
        let r = rs(label);
        let g = r.weyl().unwrap();
        let bgg = Bgg {
            rs: r.clone(),
            order: g.order(),
        };
        let p: Vec<Q> = (0..r.rank).map(|i| q([3, 7][i])).collect();
        let v = bgg.divided(&g.word0(g.w0()), &|x| bgg.top(x), &p);
        assert_eq!(v, q(1));
        assert!(!bgg.top(&p).is_zero());
    }
}
