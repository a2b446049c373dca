//! Cones of weights: positivity of weights, contractability flags, fine
//! cocharacters and the contractive decomposition.
//!
//! Weights are points of Zʳ. A weight `α` is positive when some functional
//! that is non-negative on every weight is positive on `α`; equivalently
//! `α` lies outside the lineality space of the cone the weights generate.
//! Both characterizations are implemented over Q: the dual cone by double
//! description, and per-weight feasibility by Fourier–Motzkin elimination.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::exactlin::{dot, QMatrix, QVector, Subspace};
use crate::grading::{Grading, Weight};
use crate::rational::{lcm_denominators, Rational};
use crate::tori::{maximal_split_torus, weight_decomposition, CertificateLevel, TorusOptions};

fn to_q(w: &[i64]) -> QVector {
    w.iter().map(|&x| Rational::from_int(x)).collect()
}

/// Generators of a polyhedral cone: a basis of its lineality space and a set
/// of extreme rays modulo that space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeGenerators {
    pub lineality: Vec<QVector>,
    pub rays: Vec<QVector>,
}

/// Scales a nonzero rational vector to a primitive integer vector.
fn primitive(v: &[Rational]) -> QVector {
    let l = lcm_denominators(v.iter());
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &Rational::from_bigint(l.clone())).numer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return v.to_vec();
    }
    ints.into_iter().map(|x| Rational::from_bigint(x / &g)).collect()
}

/// Generators of `{f ∈ Qʳ : aᵢ·f ≥ 0 for all i}` by the double description
/// method with the combinatorial adjacency test.
pub fn dual_cone(r: usize, constraints: &[QVector]) -> ConeGenerators {
    let mut lineality: Vec<QVector> = (0..r)
        .map(|i| (0..r).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
        .collect();
    // Each ray carries the set of processed constraints it makes tight.
    let mut rays: Vec<(QVector, BTreeSet<usize>)> = Vec::new();
    for (idx, a) in constraints.iter().enumerate() {
        if let Some(p) = lineality.iter().position(|l| !dot(a, l).is_zero()) {
            let mut l0 = lineality.swap_remove(p);
            if dot(a, &l0).is_negative() {
                l0 = l0.iter().map(|x| -x).collect();
            }
            let a0 = dot(a, &l0);
            let project = |v: &QVector| -> QVector {
                let t = &dot(a, v) / &a0;
                v.iter().zip(&l0).map(|(x, y)| x - &(&t * y)).collect()
            };
            lineality = lineality.iter().map(project).collect();
            for (v, tight) in rays.iter_mut() {
                *v = project(v);
                tight.insert(idx);
            }
            let tight_new: BTreeSet<usize> = (0..idx).collect();
            rays.push((primitive(&l0), tight_new));
            continue;
        }
        let vals: Vec<Rational> = rays.iter().map(|(v, _)| dot(a, v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        let mut next: Vec<(QVector, BTreeSet<usize>)> = Vec::new();
        for i in 0..rays.len() {
            if !vals[i].is_negative() {
                let mut t = rays[i].1.clone();
                if vals[i].is_zero() {
                    t.insert(idx);
                }
                next.push((rays[i].0.clone(), t));
            }
        }
        for &p in &pos {
            for &n in &neg {
                let common: BTreeSet<usize> = rays[p].1.intersection(&rays[n].1).copied().collect();
                let adjacent = (0..rays.len())
                    .filter(|&t| t != p && t != n)
                    .all(|t| !common.is_subset(&rays[t].1));
                if !adjacent {
                    continue;
                }
                let v: QVector = rays[n].0.iter().zip(&rays[p].0).map(|(x, y)| &(&vals[p] * x) - &(&vals[n] * y)).collect();
                let mut t = common;
                t.insert(idx);
                next.push((primitive(&v), t));
            }
        }
        next.sort_by(|a, b| a.0.cmp(&b.0));
        next.dedup_by(|a, b| a.0 == b.0);
        rays = next;
    }
    let mut rays: Vec<QVector> = rays.into_iter().map(|(v, _)| v).collect();
    rays.sort();
    ConeGenerators { lineality: lineality.iter().map(|l| primitive(l)).collect(), rays }
}

/// For each weight, whether it lies outside the lineality space of the cone
/// generated by all weights, read off from the dual cone's rays.
pub fn positive_weights_lineality(r: usize, weights: &[Weight]) -> Vec<bool> {
    let qs: Vec<QVector> = weights.iter().map(|w| to_q(w)).collect();
    let dual = dual_cone(r, &qs);
    qs.iter().map(|w| dual.rays.iter().any(|f| dot(f, w).is_positive())).collect()
}

/// Lineality space `C ∩ −C` of the cone generated by the weights.
pub fn lineality_space(r: usize, weights: &[Weight]) -> Subspace {
    let qs: Vec<QVector> = weights.iter().map(|w| to_q(w)).collect();
    let dual = dual_cone(r, &qs);
    let rows: Vec<QVector> = dual.rays.clone();
    if rows.is_empty() {
        return Subspace::full(r);
    }
    let kernel = QMatrix::from_rows(rows).kernel();
    Subspace::from_vectors(r, kernel)
}

/// A point of `{x : aᵢ·x ≥ bᵢ}` found by Fourier–Motzkin elimination with
/// back-substitution, or `None` when the system is infeasible.
///
/// Derived rows carry the set of input rows they combine; after `j`
/// eliminations a row built from more than `j + 1` inputs is redundant
/// (Chernikov) and is dropped.
pub fn lp_feasible(n: usize, constraints: &[(QVector, Rational)]) -> Option<QVector> {
    // stages[k] holds the system over variables 0..n−k, before eliminating
    // variable n−k−1.
    let mut stages: Vec<Vec<Row>> = Vec::new();
    let rows = constraints
        .iter()
        .enumerate()
        .map(|(i, (a, b))| Row { a: a.clone(), b: b.clone(), hist: BTreeSet::from([i]) })
        .collect();
    let mut sys = normalize_system(rows);
    for (step, k) in (0..n).rev().enumerate() {
        stages.push(sys.clone());
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for row in sys {
            if row.a[k].is_positive() {
                pos.push(row);
            } else if row.a[k].is_negative() {
                neg.push(row);
            } else {
                rest.push(row);
            }
        }
        for p in &pos {
            for q in &neg {
                let hist: BTreeSet<usize> = p.hist.union(&q.hist).copied().collect();
                if hist.len() > step + 2 {
                    continue;
                }
                // Combine with positive multipliers so variable k cancels.
                let cp = -&q.a[k];
                let cn = p.a[k].clone();
                let a: QVector = p.a.iter().zip(&q.a).map(|(x, y)| &(&cp * x) + &(&cn * y)).collect();
                let b = &(&cp * &p.b) + &(&cn * &q.b);
                rest.push(Row { a, b, hist });
            }
        }
        sys = normalize_system(rest);
    }
    // Only constant constraints 0 ≥ b remain.
    if sys.iter().any(|row| row.b.is_positive()) {
        return None;
    }
    let mut x = vec![Rational::zero(); n];
    for k in 0..n {
        let stage = &stages[n - 1 - k];
        let (mut lo, mut hi): (Option<Rational>, Option<Rational>) = (None, None);
        for Row { a, b, .. } in stage {
            if a[k].is_zero() {
                continue;
            }
            // a_k x_k ≥ b − Σ_{j<k} a_j x_j (variables above k are absent).
            let rest: Rational = (0..k).map(|j| &a[j] * &x[j]).sum();
            let bound = &(b - &rest) / &a[k];
            if a[k].is_positive() {
                lo = Some(match lo {
                    Some(l) if l >= bound => l,
                    _ => bound,
                });
            } else {
                hi = Some(match hi {
                    Some(h) if h <= bound => h,
                    _ => bound,
                });
            }
        }
        x[k] = match (lo, hi) {
            (None, None) => Rational::zero(),
            (Some(l), None) => Rational::from(l.ceil()),
            (None, Some(h)) => Rational::from(h.floor()),
            (Some(l), Some(h)) => {
                let c = Rational::from(l.ceil());
                if c <= h {
                    c
                } else {
                    l
                }
            }
        };
    }
    Some(x)
}

#[derive(Clone)]
struct Row {
    a: QVector,
    b: Rational,
    hist: BTreeSet<usize>,
}

/// Scales each row so its leading nonzero coefficient has absolute value
/// one, drops trivially true rows and rows dominated in their direction.
fn normalize_system(rows: Vec<Row>) -> Vec<Row> {
    let mut out: Vec<Row> = Vec::new();
    for row in rows {
        match row.a.iter().find(|x| !x.is_zero()) {
            None => {
                if row.b.is_positive() {
                    out.push(row);
                }
            }
            Some(lead) => {
                let s = lead.abs().recip();
                let a = row.a.iter().map(|x| x * &s).collect();
                out.push(Row { a, b: &row.b * &s, hist: row.hist });
            }
        }
    }
    out.sort_by(|x, y| x.a.cmp(&y.a).then_with(|| y.b.cmp(&x.b)).then_with(|| x.hist.len().cmp(&y.hist.len())));
    // A row is dropped only when an earlier row in its direction is at least
    // as strong and built from a subset of its inputs, so the history rule
    // never loses a combination it would have kept.
    let mut kept: Vec<Row> = Vec::new();
    let mut group_start = 0;
    for row in out {
        if kept.get(group_start).is_some_and(|g| g.a != row.a) {
            group_start = kept.len();
        }
        let dominated = kept[group_start..].iter().any(|k| k.b >= row.b && k.hist.is_subset(&row.hist));
        if !dominated {
            kept.push(row);
        }
    }
    kept
}

/// Per-weight test: is `{f : f·w ≥ 0 for all weights w, f·α ≥ 1}` feasible?
/// Returns the witness functional when it is.
pub fn positivity_witness(r: usize, weights: &[Weight], alpha: &[i64]) -> Option<QVector> {
    let mut cons: Vec<(QVector, Rational)> = weights.iter().map(|w| (to_q(w), Rational::zero())).collect();
    cons.push((to_q(alpha), Rational::one()));
    lp_feasible(r, &cons)
}

pub fn positive_weights_lp(r: usize, weights: &[Weight]) -> Vec<bool> {
    weights.iter().map(|a| positivity_witness(r, weights, a).is_some()).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ConeFlags {
    pub contractable: bool,
    pub semicontractable: bool,
    pub flexible_split: bool,
    pub carnot_possible_by_weights: bool,
}

/// Principal weights: weights `α` with `g_α ⊄ g^(2)`.
pub fn principal_weights(gr: &Grading) -> Vec<Weight> {
    let derived = gr.algebra().derived();
    gr.components()
        .iter()
        .filter(|(_, s)| s.dim() > s.intersect(&derived).dim())
        .map(|(w, _)| w.clone())
        .collect()
}

/// Flags of a torus-induced grading whose weights span Zʳ.
pub fn cone_flags(gr: &Grading) -> ConeFlags {
    let r = gr.rank();
    let weights = gr.weights();
    let positive = positive_weights_lineality(r, &weights);
    let zero_is_weight = !gr.zero_component().is_zero();
    let all_positive = positive.iter().all(|&p| p);
    let principal = principal_weights(gr);
    // Is there f with f(p) = 1 for every principal weight p?
    let carnot_possible_by_weights = !principal.is_empty() && {
        let m = QMatrix::from_rows(principal.iter().map(|w| to_q(w)).collect());
        m.solve_affine(&vec![Rational::one(); principal.len()]).is_ok()
    };
    ConeFlags {
        contractable: gr.algebra().dim() == 0 || (!zero_is_weight && all_positive),
        semicontractable: positive.iter().any(|&p| p),
        flexible_split: !zero_is_weight,
        carnot_possible_by_weights: gr.algebra().dim() == 0 || carnot_possible_by_weights,
    }
}

/// A homomorphism `f: Zʳ → Z`, non-negative on every weight and positive on
/// every positive weight: the sum of one LP witness per positive weight,
/// cleared of denominators and divided by the gcd of its coordinates.
pub fn fine_cocharacter(gr: &Grading) -> Vec<i64> {
    let r = gr.rank();
    let weights = gr.weights();
    let mut f = vec![Rational::zero(); r];
    for a in &weights {
        if let Some(w) = positivity_witness(r, &weights, a) {
            for (x, y) in f.iter_mut().zip(&w) {
                *x += y;
            }
        }
    }
    if f.iter().all(Rational::is_zero) {
        return vec![0; r];
    }
    primitive(&f).iter().map(|x| x.to_i64().expect("small functional")).collect()
}

/// `g = g_[0] ⋉ g_[+]` for a torus-induced grading.
#[derive(Clone, Debug, Serialize)]
pub struct ContractiveDecomposition {
    pub zero_part: Subspace,
    pub plus_part: Subspace,
    pub uncontracted_dim: usize,
    pub contracted_dim: usize,
    /// A fine non-negative cocharacter; it vanishes exactly on `g_[0]`.
    pub witness: Vec<i64>,
}

pub fn contractive_decomposition(gr: &Grading) -> Result<ContractiveDecomposition> {
    let a = gr.algebra();
    let d = a.dim();
    let weights = gr.weights();
    let positive = positive_weights_lineality(gr.rank(), &weights);
    let (mut zero_part, mut plus_part) = (Subspace::zero(d), Subspace::zero(d));
    for (w, p) in weights.iter().zip(&positive) {
        let c = gr.component(w);
        if *p {
            plus_part = plus_part.sum(&c);
        } else {
            zero_part = zero_part.sum(&c);
        }
    }
    if !a.is_subalgebra(&zero_part) {
        return Err(Error::Invariant("g_[0] is not a subalgebra".into()));
    }
    if !a.is_ideal(&plus_part) {
        return Err(Error::Invariant("g_[+] is not an ideal".into()));
    }
    Ok(ContractiveDecomposition {
        uncontracted_dim: zero_part.dim(),
        contracted_dim: plus_part.dim(),
        zero_part,
        plus_part,
        witness: fine_cocharacter(gr),
    })
}

/// The Cartan grading of `a` from its computed maximal split torus.
pub fn cartan_grading(a: &Arc<Algebra>, opts: TorusOptions) -> (Grading, CertificateLevel) {
    let torus = maximal_split_torus(a, opts);
    (weight_decomposition(a.clone(), &torus), torus.certificate)
}

/// A fine grading in N: the Cartan grading pushed through a fine cocharacter,
/// so that `g₀ = g_[0]`.
pub fn fine_nonneg_grading(a: &Arc<Algebra>, opts: TorusOptions) -> Grading {
    let (gr, _) = cartan_grading(a, opts);
    gr.push_forward(&fine_cocharacter(&gr))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use proptest::prelude::*;

    fn w(xs: &[&[i64]]) -> Vec<Weight> {
        xs.iter().map(|x| x.to_vec()).collect()
    }

    #[test]
    fn dual_cone_of_the_positive_quadrant() {
        let c = dual_cone(2, &[to_q(&[1, 0]), to_q(&[0, 1])]);
        assert!(c.lineality.is_empty());
        assert_eq!(c.rays, vec![to_q(&[0, 1]), to_q(&[1, 0])]);
        let line = dual_cone(2, &[to_q(&[1, 0]), to_q(&[-1, 0])]);
        assert_eq!(line.lineality, vec![to_q(&[0, 1])]);
        assert!(line.rays.is_empty());
    }

    #[test]
    fn positivity_of_small_weight_sets() {
        assert_eq!(positive_weights_lineality(1, &w(&[&[1], &[2]])), vec![true, true]);
        assert_eq!(positive_weights_lineality(1, &w(&[&[-1], &[1]])), vec![false, false]);
        let mixed = w(&[&[1, 0], &[0, 1], &[1, 1], &[-1, 1]]);
        assert_eq!(positive_weights_lineality(2, &mixed), vec![true, true, true, true]);
        let half = w(&[&[1, 0], &[-1, 0], &[0, 1]]);
        assert_eq!(positive_weights_lineality(2, &half), vec![false, false, true]);
        assert_eq!(positive_weights_lp(2, &half), vec![false, false, true]);
        assert_eq!(lineality_space(2, &half), Subspace::coordinate(2, &[0]));
    }

    #[test]
    fn lp_witnesses_satisfy_the_constraints() {
        let cons = vec![(to_q(&[1, 1]), Rational::from_int(2)), (to_q(&[1, -1]), Rational::zero()), (to_q(&[-1, 0]), Rational::from_int(-5))];
        let x = lp_feasible(2, &cons).unwrap();
        assert!(cons.iter().all(|(a, b)| &dot(a, &x) >= b));
        let infeasible = vec![(to_q(&[1]), Rational::one()), (to_q(&[-1]), Rational::zero())];
        assert!(lp_feasible(1, &infeasible).is_none());
    }

    #[test]
    fn fine_cocharacter_of_mixed_weights() {
        // Brute force over small functionals confirms a strictly positive one exists.
        let ws = w(&[&[1, 0], &[0, 1], &[1, 1], &[-1, 1]]);
        let exists = (-3i64..=3).any(|a| (-3i64..=3).any(|b| ws.iter().all(|x| a * x[0] + b * x[1] > 0)));
        assert!(exists);
        let d = 4;
        let a = Arc::new(Algebra::abelian(d));
        let comps = ws.iter().enumerate().map(|(i, x)| (x.clone(), Subspace::coordinate(d, &[i]))).collect();
        let gr = Grading::new(a, 2, comps).unwrap();
        let f = fine_cocharacter(&gr);
        assert!(ws.iter().all(|x| f[0] * x[0] + f[1] * x[1] > 0));
        let flags = cone_flags(&gr);
        assert!(flags.contractable && flags.semicontractable && flags.flexible_split);
    }

    #[test]
    fn fixture_flags() {
        let h = Arc::new(catalog::heisenberg3());
        let (gr, _) = cartan_grading(&h, TorusOptions::default());
        let f = cone_flags(&gr);
        assert!(f.contractable && f.carnot_possible_by_weights);
        let fine = fine_nonneg_grading(&h, TorusOptions::default());
        assert!(fine.zero_component().is_zero());

        let g = Arc::new(catalog::g16());
        let (gr, _) = cartan_grading(&g, TorusOptions::default());
        let f = cone_flags(&gr);
        assert!(!f.contractable && !f.semicontractable && f.flexible_split);
        let dec = contractive_decomposition(&gr).unwrap();
        assert!(dec.zero_part.is_full());
        assert_eq!(fine_cocharacter(&gr), vec![0]);
        assert!(fine_nonneg_grading(&g, TorusOptions::default()).zero_component().is_full());

        let m = Arc::new(catalog::g7102());
        let (gr, _) = cartan_grading(&m, TorusOptions::default());
        let f = cone_flags(&gr);
        assert!(f.semicontractable && !f.contractable && !f.flexible_split);
        let dec = contractive_decomposition(&gr).unwrap();
        assert_eq!(dec.uncontracted_dim, 1);
        let fine = fine_nonneg_grading(&m, TorusOptions::default());
        assert_eq!(fine.zero_component().dim(), 1);
        // Z1 spans g₀.
        assert!(fine.zero_component().contains(&m.basis_vector(0)));
    }

    #[test]
    fn carnot_by_weights_agrees_with_the_carnot_test() {
        for a in [catalog::heisenberg3(), catalog::l55(), catalog::l56(), catalog::l57(), catalog::g7102(), catalog::assoc4()] {
            let a = Arc::new(a);
            let (gr, _) = cartan_grading(&a, TorusOptions::default());
            let by_weights = cone_flags(&gr).carnot_possible_by_weights;
            assert_eq!(by_weights, crate::carnot::carnot_test(&a).unwrap().is_carnot(), "{:?}", a.names());
        }
    }

    proptest! {
        #[test]
        fn lineality_and_lp_agree(ws in prop::collection::vec(prop::collection::vec(-3i64..=3, 3), 1..8)) {
            prop_assert_eq!(positive_weights_lineality(3, &ws), positive_weights_lp(3, &ws));
        }
    }
}
