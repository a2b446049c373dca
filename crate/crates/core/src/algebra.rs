//! Finite-dimensional algebras over Q given by structure constants.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::{QMatrix, QVector, Subspace};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgebraKind {
    Lie,
    General,
}

/// An algebra with basis `e₀ … e_{d−1}` and bilinear product
/// `eᵢ·eⱼ = Σₖ c[i][j][k] eₖ`.
#[derive(Clone, PartialEq, Eq)]
pub struct Algebra {
    dim: usize,
    names: Vec<String>,
    kind: AlgebraKind,
    /// Sparse product table indexed by `i·dim + j`.
    table: Vec<Vec<(usize, Rational)>>,
}

/// One failed axiom, with the basis indices that witness it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum Violation {
    Antisymmetry { i: usize, j: usize, k: usize },
    Jacobi { i: usize, j: usize, l: usize, k: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Antisymmetry { i, j, k } => {
                write!(f, "antisymmetry fails at (i, j, k) = ({}, {}, {})", i + 1, j + 1, k + 1)
            }
            Violation::Jacobi { i, j, l, k } => {
                write!(f, "Jacobi identity fails for basis triple ({}, {}, {}) in coordinate {}", i + 1, j + 1, l + 1, k + 1)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// `g = g⁽¹⁾ ⊇ g⁽²⁾ ⊇ …`, stopped at `{0}` or at the first repetition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowerSeries {
    pub terms: Vec<Subspace>,
    /// Nilpotency length, `None` when the series stabilizes above zero.
    pub class: Option<usize>,
}

impl LowerSeries {
    pub fn dims(&self) -> Vec<usize> {
        self.terms.iter().map(Subspace::dim).collect()
    }

    /// `g⁽ᵏ⁾` for `k ≥ 1`, extended past the stored terms.
    pub fn term(&self, k: usize) -> &Subspace {
        assert!(k >= 1);
        &self.terms[(k - 1).min(self.terms.len() - 1)]
    }
}

impl Algebra {
    /// Builds an algebra from 0-based sparse entries `(i, j, k, c)`.
    ///
    /// For Lie algebras, entries with `i < j` suffice: the table is
    /// completed antisymmetrically, and a given `(j, i)` entry is checked
    /// against the filled-in value by [`Algebra::validate`] only if it is
    /// inconsistent, in which case the explicit value wins.
    pub fn from_entries(
        kind: AlgebraKind,
        names: Vec<String>,
        entries: &[(usize, usize, usize, Rational)],
    ) -> Result<Algebra> {
        let d = names.len();
        let mut dense = vec![Rational::zero(); d * d * d];
        let mut given = vec![false; d * d * d];
        for (i, j, k, c) in entries {
            if *i >= d || *j >= d || *k >= d {
                return Err(Error::Validation(format!(
                    "entry ({}, {}, {}) out of range for dimension {d}",
                    i + 1,
                    j + 1,
                    k + 1
                )));
            }
            let at = (i * d + j) * d + k;
            dense[at] += c;
            given[at] = true;
        }
        if kind == AlgebraKind::Lie {
            for i in 0..d {
                for j in 0..d {
                    for k in 0..d {
                        let at = (i * d + j) * d + k;
                        let back = (j * d + i) * d + k;
                        if given[at] && !given[back] {
                            dense[back] = -&dense[at];
                        }
                    }
                }
            }
        }
        Ok(Self::from_dense(kind, names, &dense))
    }

    /// Builds an algebra from a dense tensor `c[(i·d + j)·d + k]`.
    pub fn from_dense(kind: AlgebraKind, names: Vec<String>, sc: &[Rational]) -> Algebra {
        let d = names.len();
        assert_eq!(sc.len(), d * d * d, "structure tensor has the wrong size");
        let table = (0..d * d)
            .map(|ij| (0..d).filter(|&k| !sc[ij * d + k].is_zero()).map(|k| (k, sc[ij * d + k].clone())).collect())
            .collect();
        Algebra { dim: d, names, kind, table }
    }

    pub fn default_names(d: usize) -> Vec<String> {
        (1..=d).map(|i| format!("X{i}")).collect()
    }

    pub fn abelian(d: usize) -> Algebra {
        Self::from_dense(AlgebraKind::Lie, Self::default_names(d), &vec![Rational::zero(); d * d * d])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn is_lie(&self) -> bool {
        self.kind == AlgebraKind::Lie
    }

    pub fn with_names(mut self, names: Vec<String>) -> Algebra {
        assert_eq!(names.len(), self.dim);
        self.names = names;
        self
    }

    pub fn sc(&self, i: usize, j: usize, k: usize) -> Rational {
        self.table[i * self.dim + j].iter().find(|e| e.0 == k).map_or_else(Rational::zero, |e| e.1.clone())
    }

    /// Nonzero coordinates of `eᵢ·eⱼ`.
    pub fn product_of_basis(&self, i: usize, j: usize) -> &[(usize, Rational)] {
        &self.table[i * self.dim + j]
    }

    /// Dense structure tensor `c[(i·d + j)·d + k]`.
    pub fn dense(&self) -> Vec<Rational> {
        let d = self.dim;
        let mut out = vec![Rational::zero(); d * d * d];
        for (ij, row) in self.table.iter().enumerate() {
            for (k, c) in row {
                out[ij * d + k] = c.clone();
            }
        }
        out
    }

    /// Nonzero entries `(i, j, k, c)`, 0-based, in lexicographic order.
    pub fn entries(&self) -> Vec<(usize, usize, usize, Rational)> {
        let d = self.dim;
        let mut out = Vec::new();
        for (ij, row) in self.table.iter().enumerate() {
            for (k, c) in row {
                out.push((ij / d, ij % d, *k, c.clone()));
            }
        }
        out
    }

    pub fn is_abelian(&self) -> bool {
        self.table.iter().all(Vec::is_empty)
    }

    pub fn multiply(&self, u: &[Rational], v: &[Rational]) -> QVector {
        let d = self.dim;
        let mut out = vec![Rational::zero(); d];
        for (i, a) in u.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in v.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a * b;
                for (k, c) in &self.table[i * d + j] {
                    out[*k] += &ab * c;
                }
            }
        }
        out
    }

    /// Matrix of `y ↦ x·y`.
    pub fn left_mult(&self, x: &[Rational]) -> QMatrix {
        let d = self.dim;
        let mut m = QMatrix::zeros(d, d);
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for j in 0..d {
                for (k, c) in &self.table[i * d + j] {
                    m[(*k, j)] += a * c;
                }
            }
        }
        m
    }

    /// Matrix of `y ↦ y·x`.
    pub fn right_mult(&self, x: &[Rational]) -> QMatrix {
        let d = self.dim;
        let mut m = QMatrix::zeros(d, d);
        for (j, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for i in 0..d {
                for (k, c) in &self.table[i * d + j] {
                    m[(*k, i)] += a * c;
                }
            }
        }
        m
    }

    pub fn basis_vector(&self, i: usize) -> QVector {
        let mut v = vec![Rational::zero(); self.dim];
        v[i] = Rational::one();
        v
    }

    /// Checks the Lie axioms; general algebras have none to check.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        if self.kind == AlgebraKind::Lie {
            let d = self.dim;
            for i in 0..d {
                for j in i..d {
                    for k in 0..d {
                        if self.sc(i, j, k) != -self.sc(j, i, k) {
                            violations.push(Violation::Antisymmetry { i, j, k });
                        }
                    }
                }
            }
            if violations.is_empty() {
                for i in 0..d {
                    for j in i + 1..d {
                        for l in j + 1..d {
                            let (ei, ej, el) = (self.basis_vector(i), self.basis_vector(j), self.basis_vector(l));
                            let a = self.multiply(&ei, &self.multiply(&ej, &el));
                            let b = self.multiply(&ej, &self.multiply(&el, &ei));
                            let c = self.multiply(&el, &self.multiply(&ei, &ej));
                            for k in 0..d {
                                if !(&(&a[k] + &b[k]) + &c[k]).is_zero() {
                                    violations.push(Violation::Jacobi { i, j, l, k });
                                }
                            }
                        }
                    }
                }
            }
        }
        ValidationReport { violations }
    }

    pub fn require_lie(&self) -> Result<()> {
        if !self.is_lie() {
            return Err(Error::NotLie);
        }
        let report = self.validate();
        match report.violations.first() {
            None => Ok(()),
            Some(v) => Err(Error::Validation(v.to_string())),
        }
    }

    /// Span of all products `u·w` with `u ∈ U`, `w ∈ W`.
    pub fn product_subspace(&self, u: &Subspace, w: &Subspace) -> Subspace {
        let mut vecs = Vec::new();
        for a in u.basis() {
            for b in w.basis() {
                vecs.push(self.multiply(a, b));
            }
        }
        Subspace::from_vectors(self.dim, vecs)
    }

    pub fn derived(&self) -> Subspace {
        let g = Subspace::full(self.dim);
        self.product_subspace(&g, &g)
    }

    pub fn lower_series(&self) -> LowerSeries {
        let mut terms = vec![Subspace::full(self.dim)];
        loop {
            let k = terms.len() + 1;
            let mut next = Subspace::zero(self.dim);
            for i in 1..k {
                let j = k - i;
                if i > j && self.is_lie() {
                    break;
                }
                next = next.sum(&self.product_subspace(&terms[i - 1], &terms[j - 1]));
            }
            let last = terms.last().unwrap();
            if next.is_zero() {
                let class = if last.is_zero() { 0 } else { terms.len() };
                if !last.is_zero() {
                    terms.push(next);
                }
                return LowerSeries { terms, class: Some(class) };
            }
            if &next == last {
                return LowerSeries { terms, class: None };
            }
            terms.push(next);
        }
    }

    pub fn is_nilpotent(&self) -> bool {
        self.lower_series().class.is_some()
    }

    /// Two-sided annihilator `{x : x·g = g·x = 0}`.
    pub fn center(&self) -> Subspace {
        let d = self.dim;
        let mut rows = Vec::new();
        for j in 0..d {
            let e = self.basis_vector(j);
            rows.extend(self.right_mult(&e).row_vectors());
            if !self.is_lie() {
                rows.extend(self.left_mult(&e).row_vectors());
            }
        }
        if rows.is_empty() {
            return Subspace::full(d);
        }
        QMatrix::from_rows(rows).null_space()
    }

    pub fn is_subalgebra(&self, u: &Subspace) -> bool {
        u.contains_subspace(&self.product_subspace(u, u))
    }

    pub fn is_ideal(&self, u: &Subspace) -> bool {
        let g = Subspace::full(self.dim);
        u.contains_subspace(&self.product_subspace(&g, u)) && u.contains_subspace(&self.product_subspace(u, &g))
    }

    /// Largest `W ⊆ U` that is a two-sided ideal and is stable under every
    /// operator in `ops`, by the descending fixpoint
    /// `W ← {w ∈ W : g·w, w·g, op(w) ⊆ W}`.
    pub fn largest_invariant_subideal(&self, u: &Subspace, ops: &[QMatrix]) -> Subspace {
        let mut maps: Vec<QMatrix> = Vec::with_capacity(2 * self.dim + ops.len());
        for j in 0..self.dim {
            let e = self.basis_vector(j);
            maps.push(self.left_mult(&e));
            if !self.is_lie() {
                maps.push(self.right_mult(&e));
            }
        }
        maps.extend(ops.iter().cloned());
        let mut w = u.clone();
        loop {
            if w.is_zero() {
                return w;
            }
            let mut next = w.clone();
            for m in &maps {
                next = next.intersect(&w.preimage(m));
            }
            if next == w {
                return w;
            }
            w = next;
        }
    }

    /// Smallest subalgebra containing `v`.
    pub fn generated_subalgebra(&self, v: &Subspace) -> Subspace {
        let mut s = v.clone();
        loop {
            let next = s.sum(&self.product_subspace(&s, &s));
            if next == s {
                return s;
            }
            s = next;
        }
    }

    /// The algebra in the basis given by the columns of `p`.
    pub fn base_change(&self, p: &QMatrix) -> Result<Algebra> {
        let d = self.dim;
        if p.rows() != d || p.cols() != d {
            return Err(Error::DimensionMismatch(format!("change of basis must be {d}x{d}")));
        }
        let pinv = p.inverse().ok_or(Error::SingularMatrix)?;
        let cols: Vec<QVector> = (0..d).map(|j| p.column(j)).collect();
        let mut dense = vec![Rational::zero(); d * d * d];
        for a in 0..d {
            for b in 0..d {
                let prod = pinv.mul_vec(&self.multiply(&cols[a], &cols[b]));
                for (k, c) in prod.into_iter().enumerate() {
                    dense[(a * d + b) * d + k] = c;
                }
            }
        }
        Ok(Self::from_dense(self.kind, self.names.clone(), &dense))
    }

    /// `self × other` with basis `e₀ … e_{d−1}, f₀ … f_{d'−1}`.
    pub fn direct_product(&self, other: &Algebra) -> Algebra {
        let (d1, d2) = (self.dim, other.dim);
        let d = d1 + d2;
        let mut entries = Vec::new();
        for (i, j, k, c) in self.entries() {
            entries.push((i, j, k, c));
        }
        for (i, j, k, c) in other.entries() {
            entries.push((i + d1, j + d1, k + d1, c));
        }
        let mut names = self.names.clone();
        for n in &other.names {
            names.push(if self.names.contains(n) { format!("{n}'") } else { n.clone() });
        }
        let kind = if self.is_lie() && other.is_lie() { AlgebraKind::Lie } else { AlgebraKind::General };
        let mut dense = vec![Rational::zero(); d * d * d];
        for (i, j, k, c) in entries {
            dense[(i * d + j) * d + k] = c;
        }
        Self::from_dense(kind, names, &dense)
    }

    /// Quotient by an ideal, in the basis of standard vectors complementing
    /// it; also returns the projection matrix `g → g/I`.
    pub fn quotient(&self, ideal: &Subspace) -> Result<(Algebra, QMatrix)> {
        if !self.is_ideal(ideal) {
            return Err(Error::Validation("quotient by a subspace that is not an ideal".into()));
        }
        let comp: Vec<usize> = (0..self.dim).filter(|c| !ideal.pivots().contains(c)).collect();
        let q = comp.len();
        // Coordinates modulo I: reduce by the RREF basis, then read the complement columns.
        let project = |v: &[Rational]| -> QVector {
            let mut w = v.to_vec();
            for (b, &p) in ideal.basis().iter().zip(ideal.pivots()) {
                let f = w[p].clone();
                if !f.is_zero() {
                    for (x, y) in w.iter_mut().zip(b) {
                        *x -= &f * y;
                    }
                }
            }
            comp.iter().map(|&c| w[c].clone()).collect()
        };
        let mut proj = QMatrix::zeros(q, self.dim);
        for j in 0..self.dim {
            for (i, x) in project(&self.basis_vector(j)).into_iter().enumerate() {
                proj[(i, j)] = x;
            }
        }
        let mut dense = vec![Rational::zero(); q * q * q];
        for (a, &ca) in comp.iter().enumerate() {
            for (b, &cb) in comp.iter().enumerate() {
                let prod = project(&self.multiply(&self.basis_vector(ca), &self.basis_vector(cb)));
                for (k, c) in prod.into_iter().enumerate() {
                    dense[(a * q + b) * q + k] = c;
                }
            }
        }
        let names = comp.iter().map(|&c| self.names[c].clone()).collect();
        Ok((Self::from_dense(self.kind, names, &dense), proj))
    }

    /// Whether `D(xy) = D(x)y + xD(y)` on all basis pairs.
    pub fn is_derivation(&self, m: &QMatrix) -> bool {
        let d = self.dim;
        let cols: Vec<QVector> = (0..d).map(|j| m.column(j)).collect();
        (0..d).all(|i| {
            (0..d).all(|j| {
                let lhs = m.mul_vec(&self.multiply(&self.basis_vector(i), &self.basis_vector(j)));
                let r1 = self.multiply(&cols[i], &self.basis_vector(j));
                let r2 = self.multiply(&self.basis_vector(i), &cols[j]);
                lhs.iter().zip(r1.iter().zip(&r2)).all(|(l, (a, b))| l == &(a + b))
            })
        })
    }

    /// Whether `s` is an invertible multiplicative map.
    pub fn is_automorphism(&self, s: &QMatrix) -> bool {
        let d = self.dim;
        if s.rows() != d || s.cols() != d || s.determinant().is_zero() {
            return false;
        }
        let cols: Vec<QVector> = (0..d).map(|j| s.column(j)).collect();
        (0..d).all(|i| {
            (0..d).all(|j| {
                s.mul_vec(&self.multiply(&self.basis_vector(i), &self.basis_vector(j)))
                    == self.multiply(&cols[i], &cols[j])
            })
        })
    }
}

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Algebra({:?}, dim {}) {{", self.kind, self.dim)?;
        for (i, j, k, c) in self.entries() {
            if self.is_lie() && i > j {
                continue;
            }
            write!(f, " {}·{} ∋ {}·{};", self.names[i], self.names[j], c, self.names[k])?;
        }
        write!(f, " }}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::rational::q;

    fn r(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn heisenberg_is_valid() {
        let h = catalog::heisenberg3();
        assert!(h.validate().is_ok());
        assert_eq!(h.sc(0, 1, 2), r(1));
        assert_eq!(h.sc(1, 0, 2), r(-1));
    }

    #[test]
    fn antisymmetry_violation_is_reported() {
        let names = Algebra::default_names(3);
        let a = Algebra::from_entries(AlgebraKind::Lie, names, &[(0, 1, 2, r(1)), (1, 0, 2, r(1))]).unwrap();
        let report = a.validate();
        assert_eq!(report.violations, vec![Violation::Antisymmetry { i: 0, j: 1, k: 2 }]);
    }

    #[test]
    fn out_of_range_entry_is_rejected() {
        let err = Algebra::from_entries(AlgebraKind::Lie, Algebra::default_names(2), &[(0, 1, 2, r(1))]);
        assert!(matches!(err, Err(Error::Validation(_))));
    }

    #[test]
    fn lower_series_examples() {
        let ab = Algebra::abelian(3);
        let s = ab.lower_series();
        assert_eq!((s.dims(), s.class), (vec![3, 0], Some(1)));
        let l55 = catalog::l55();
        assert_eq!(l55.product_subspace(&Subspace::full(5), &Subspace::full(5)), Subspace::coordinate(5, &[3, 4]));
        let s = l55.lower_series();
        assert_eq!((s.dims(), s.class), (vec![5, 2, 1, 0], Some(3)));
        let s = catalog::l56().lower_series();
        assert_eq!((s.dims(), s.class), (vec![5, 3, 2, 1, 0], Some(4)));
        let s = Algebra::abelian(0).lower_series();
        assert_eq!(s.class, Some(0));
    }

    #[test]
    fn non_nilpotent_series_stabilizes() {
        // [x, y] = y
        let a = Algebra::from_entries(AlgebraKind::Lie, Algebra::default_names(2), &[(0, 1, 1, r(1))]).unwrap();
        let s = a.lower_series();
        assert_eq!(s.class, None);
        assert_eq!(s.dims(), vec![2, 1]);
    }

    #[test]
    fn centers_and_products() {
        assert_eq!(catalog::l55().center(), Subspace::coordinate(5, &[4]));
        let p = catalog::heisenberg3().direct_product(&Algebra::abelian(1));
        assert_eq!(p.dim(), 4);
        assert_eq!(p.center().dim(), 2);
        let g = Subspace::full(5);
        assert_eq!(catalog::l55().largest_invariant_subideal(&g, &[]), g);
    }

    #[test]
    fn base_change_round_trip() {
        let h = catalog::l56();
        assert_eq!(h.base_change(&QMatrix::identity(5)).unwrap(), h);
        let p = QMatrix::from_rows(
            (0..5).map(|i| (0..5).map(|j| if j >= i { q((i + j) as i64 + 1, 2) } else { r(0) }).collect()).collect(),
        );
        let back = h.base_change(&p).unwrap().base_change(&p.inverse().unwrap()).unwrap();
        assert_eq!(back, h);
        assert_eq!(h.base_change(&QMatrix::zeros(5, 5)).unwrap_err(), Error::SingularMatrix);
    }

    #[test]
    fn quotient_by_center() {
        let (qa, proj) = catalog::heisenberg3().quotient(&Subspace::coordinate(3, &[2])).unwrap();
        assert!(qa.is_abelian());
        assert_eq!(proj.rows(), 2);
    }
}
