//! Algebra gradings in Zʳ.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::Serialize;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::exactlin::{QMatrix, Subspace};
use crate::rational::Rational;

/// Weight in Zʳ.
pub type Weight = Vec<i64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GradingFlags {
    pub is_nonnegative: bool,
    pub is_positive: bool,
    pub is_invertible: bool,
    pub is_carnot_grading: bool,
}

/// A decomposition `g = ⊕ g_α` over weights `α ∈ Zʳ` with
/// `g_α·g_β ⊆ g_{α+β}`; zero components are never stored.
#[derive(Clone)]
pub struct Grading {
    algebra: Arc<Algebra>,
    rank: usize,
    components: BTreeMap<Weight, Subspace>,
    flags: OnceLock<GradingFlags>,
}

impl PartialEq for Grading {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank && self.components == other.components && self.algebra == other.algebra
    }
}

impl Grading {
    /// Checks the direct-sum and product axioms exactly.
    pub fn new(algebra: Arc<Algebra>, rank: usize, components: BTreeMap<Weight, Subspace>) -> Result<Grading> {
        let d = algebra.dim();
        let mut components = components;
        components.retain(|_, s| !s.is_zero());
        if components.keys().any(|w| w.len() != rank) {
            return Err(Error::BadGrading(format!("weights must have {rank} coordinates")));
        }
        if components.values().any(|s| s.ambient_dim() != d) {
            return Err(Error::BadGrading("component in the wrong ambient space".into()));
        }
        let total: usize = components.values().map(Subspace::dim).sum();
        let sum = components.values().fold(Subspace::zero(d), |acc, s| acc.sum(s));
        if total != d || !sum.is_full() {
            return Err(Error::BadGrading("components do not form a direct sum decomposition".into()));
        }
        let g = Grading { algebra, rank, components, flags: OnceLock::new() };
        if let Some((a, b)) = g.first_axiom_failure() {
            return Err(Error::BadGrading(format!("product of components {a:?} and {b:?} leaves the sum weight")));
        }
        Ok(g)
    }

    /// The grading with the single component `g₀ = g` in Z⁰.
    pub fn trivial(algebra: Arc<Algebra>) -> Grading {
        let d = algebra.dim();
        let mut components = BTreeMap::new();
        if d > 0 {
            components.insert(Vec::new(), Subspace::full(d));
        }
        Grading { algebra, rank: 0, components, flags: OnceLock::new() }
    }

    fn first_axiom_failure(&self) -> Option<(Weight, Weight)> {
        for (a, ua) in &self.components {
            for (b, ub) in &self.components {
                let prod = self.algebra.product_subspace(ua, ub);
                if prod.is_zero() {
                    continue;
                }
                let sum: Weight = a.iter().zip(b).map(|(x, y)| x + y).collect();
                let ok = self.components.get(&sum).is_some_and(|s| s.contains_subspace(&prod));
                if !ok {
                    return Some((a.clone(), b.clone()));
                }
            }
        }
        None
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn algebra_arc(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn components(&self) -> &BTreeMap<Weight, Subspace> {
        &self.components
    }

    pub fn weights(&self) -> Vec<Weight> {
        self.components.keys().cloned().collect()
    }

    pub fn component(&self, w: &[i64]) -> Subspace {
        self.components.get(w).cloned().unwrap_or_else(|| Subspace::zero(self.algebra.dim()))
    }

    /// `(weight, dim)` pairs in weight order.
    pub fn dims(&self) -> Vec<(Weight, usize)> {
        self.components.iter().map(|(w, s)| (w.clone(), s.dim())).collect()
    }

    pub fn zero_component(&self) -> Subspace {
        self.component(&vec![0; self.rank])
    }

    pub fn flags(&self) -> GradingFlags {
        *self.flags.get_or_init(|| {
            let scalar = self.rank == 1;
            let is_nonnegative = self.rank == 0 || (scalar && self.components.keys().all(|w| w[0] >= 0));
            let is_positive = self.algebra.dim() == 0 || (scalar && self.components.keys().all(|w| w[0] > 0));
            let is_invertible = self.zero_component().is_zero();
            let is_carnot_grading = is_positive && {
                let g1 = self.component(&[1]);
                self.algebra.generated_subalgebra(&g1).is_full()
            };
            GradingFlags { is_nonnegative, is_positive, is_invertible, is_carnot_grading }
        })
    }

    /// Image of the grading under the homomorphism `α ↦ f(α)` from Zʳ to Z.
    pub fn push_forward(&self, f: &[i64]) -> Grading {
        assert_eq!(f.len(), self.rank);
        let d = self.algebra.dim();
        let mut merged: BTreeMap<Weight, Subspace> = BTreeMap::new();
        for (w, s) in &self.components {
            let v: i64 = w.iter().zip(f).map(|(a, b)| a * b).sum();
            let e = merged.entry(vec![v]).or_insert_with(|| Subspace::zero(d));
            *e = e.sum(s);
        }
        Grading { algebra: self.algebra.clone(), rank: 1, components: merged, flags: OnceLock::new() }
    }

    /// Semisimple derivation acting by `f(α)` on `g_α`.
    pub fn derivation(&self, f: &[i64]) -> QMatrix {
        assert_eq!(f.len(), self.rank);
        let scalars: Vec<(Rational, &Subspace)> = self
            .components
            .iter()
            .map(|(w, s)| (Rational::from_int(w.iter().zip(f).map(|(a, b)| a * b).sum()), s))
            .collect();
        block_scalar(self.algebra.dim(), &scalars)
    }

    /// For rank-one gradings: the map acting by `t^n` on `g_n`.
    pub fn dilation(&self, t: &Rational) -> Result<QMatrix> {
        if self.rank != 1 {
            return Err(Error::BadGrading("dilations need a grading in Z".into()));
        }
        if self.components.keys().any(|w| w[0] < 0) {
            return Err(Error::NotNonnegativeGrading);
        }
        let scalars: Vec<(Rational, &Subspace)> =
            self.components.iter().map(|(w, s)| (t.pow(w[0] as i32), s)).collect();
        Ok(block_scalar(self.algebra.dim(), &scalars))
    }

    /// Basis adapted to the decomposition: component bases in weight order,
    /// as the columns of the returned matrix, with the weight of each column.
    pub fn adapted_basis(&self) -> (QMatrix, Vec<Weight>) {
        let mut cols = Vec::new();
        let mut ws = Vec::new();
        for (w, s) in &self.components {
            for v in s.basis() {
                cols.push(v.clone());
                ws.push(w.clone());
            }
        }
        (QMatrix::from_columns(&cols, self.algebra.dim()), ws)
    }

    /// The same grading transported along `P` to `algebra.base_change(P)`.
    pub fn transport(&self, changed: Arc<Algebra>, p_inverse: &QMatrix) -> Result<Grading> {
        let comps = self.components.iter().map(|(w, s)| (w.clone(), s.image(p_inverse))).collect();
        Grading::new(changed, self.rank, comps)
    }
}

/// Matrix acting by the scalar `λ` on each subspace of a direct sum decomposition.
pub fn block_scalar(d: usize, parts: &[(Rational, &Subspace)]) -> QMatrix {
    let mut cols = Vec::new();
    let mut images = Vec::new();
    for (lambda, s) in parts {
        for v in s.basis() {
            cols.push(v.clone());
            images.push(v.iter().map(|x| x * lambda).collect::<Vec<_>>());
        }
    }
    if d == 0 {
        return QMatrix::zeros(0, 0);
    }
    let p = QMatrix::from_columns(&cols, d);
    let img = QMatrix::from_columns(&images, d);
    img.mul(&p.inverse().expect("components form a basis"))
}

impl fmt::Debug for Grading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Grading(rank {}) {{", self.rank)?;
        for (w, s) in &self.components {
            write!(f, " {:?}: dim {};", w, s.dim())?;
        }
        write!(f, " }}")
    }
}
