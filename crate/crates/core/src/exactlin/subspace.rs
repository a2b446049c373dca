use std::fmt;

use crate::exactlin::matrix::{dot, vec_is_zero, QMatrix, QVector};
use crate::rational::Rational;

/// A linear subspace of Qⁿ stored by its canonical RREF basis.
///
/// Two equal subspaces always have identical representations, so `Eq` and
/// `Hash` are structural.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<QVector>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Self::from_basis_unchecked(ambient, QMatrix::identity(ambient).row_vectors())
    }

    fn from_basis_unchecked(ambient: usize, basis: Vec<QVector>) -> Self {
        let pivots = basis.iter().map(|v| v.iter().position(|x| !x.is_zero()).unwrap()).collect();
        Subspace { ambient, basis, pivots }
    }

    /// Span of arbitrary vectors of length `ambient`.
    pub fn from_vectors(ambient: usize, vectors: Vec<QVector>) -> Self {
        assert!(vectors.iter().all(|v| v.len() == ambient), "vector length differs from ambient dimension");
        let vectors: Vec<QVector> = vectors.into_iter().filter(|v| !vec_is_zero(v)).collect();
        if vectors.is_empty() {
            return Self::zero(ambient);
        }
        let (r, pivots) = QMatrix::from_rows(vectors).rref();
        let basis = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
        Subspace { ambient, basis, pivots }
    }

    /// Span of the standard basis vectors with the given indices.
    pub fn coordinate(ambient: usize, indices: &[usize]) -> Self {
        let vecs = indices
            .iter()
            .map(|&i| {
                let mut v = vec![Rational::zero(); ambient];
                v[i] = Rational::one();
                v
            })
            .collect();
        Self::from_vectors(ambient, vecs)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient
    }

    pub fn basis(&self) -> &[QVector] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis_matrix(&self) -> QMatrix {
        if self.basis.is_empty() {
            return QMatrix::zeros(0, self.ambient);
        }
        QMatrix::from_rows(self.basis.clone())
    }

    /// Coordinates of `v` in the RREF basis, or `None` if `v ∉ self`.
    pub fn coordinates(&self, v: &[Rational]) -> Option<QVector> {
        let c: QVector = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut rest = v.to_vec();
        for (coef, b) in c.iter().zip(&self.basis) {
            if coef.is_zero() {
                continue;
            }
            for (x, y) in rest.iter_mut().zip(b) {
                if !y.is_zero() {
                    *x -= coef * y;
                }
            }
        }
        vec_is_zero(&rest).then_some(c)
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        assert_eq!(v.len(), self.ambient);
        self.coordinates(v).is_some()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.dim() <= self.dim() && other.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        if other.is_zero() || self.is_full() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        let mut vecs = self.basis.clone();
        vecs.extend(other.basis.iter().cloned());
        Self::from_vectors(self.ambient, vecs)
    }

    /// Linear forms vanishing on the subspace, as row vectors.
    pub fn annihilator(&self) -> Subspace {
        if self.is_zero() {
            return Self::full(self.ambient);
        }
        Subspace::from_vectors(self.ambient, self.basis_matrix().kernel())
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        if self.contains_subspace(other) {
            return other.clone();
        }
        if other.contains_subspace(self) {
            return self.clone();
        }
        self.annihilator().sum(&other.annihilator()).annihilator()
    }

    /// Image under a matrix acting on column vectors.
    pub fn image(&self, m: &QMatrix) -> Subspace {
        Subspace::from_vectors(m.rows(), self.basis.iter().map(|v| m.mul_vec(v)).collect())
    }

    /// `{x : m·x ∈ self}`.
    pub fn preimage(&self, m: &QMatrix) -> Subspace {
        let ann = self.annihilator();
        if ann.is_zero() {
            return Self::full(m.cols());
        }
        ann.basis_matrix().mul(m).null_space()
    }

    pub fn is_invariant(&self, m: &QMatrix) -> bool {
        self.basis.iter().all(|v| self.contains(&m.mul_vec(v)))
    }

    /// Standard basis vectors indexed by the non-pivot columns: a complement.
    pub fn standard_complement(&self) -> Subspace {
        let free: Vec<usize> = (0..self.ambient).filter(|c| !self.pivots.contains(c)).collect();
        Self::coordinate(self.ambient, &free)
    }

    /// Extends the RREF basis of `self` by vectors of `bigger` to a basis of
    /// `bigger`, returning only the added vectors.
    pub fn complement_in(&self, bigger: &Subspace) -> Vec<QVector> {
        let mut acc = self.clone();
        let mut added = Vec::new();
        for v in &bigger.basis {
            if !acc.contains(v) {
                acc = acc.sum(&Subspace::from_vectors(self.ambient, vec![v.clone()]));
                added.push(v.clone());
            }
        }
        added
    }

    /// Whether `f` vanishes on the subspace.
    pub fn is_annihilated_by(&self, f: &[Rational]) -> bool {
        self.basis.iter().all(|v| dot(f, v).is_zero())
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in Q^{}) [", self.dim(), self.ambient)?;
        for (i, v) in self.basis.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = v.iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl serde::Serialize for Subspace {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.basis.serialize(s)
    }
}
