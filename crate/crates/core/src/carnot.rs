//! Associated Carnot-graded algebras and the Carnot decision procedure.
//!
//! An algebra is Carnot exactly when it has a derivation inducing the
//! identity on `g/g^(2)`. Such a derivation is diagonalizable with
//! eigenvalues `1, …, c` and its eigenspaces form a Carnot grading, so the
//! decision reduces to one affine linear system over Q.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::exactlin::{Infeasibility, LinearSystem, QMatrix, QVector, Subspace};
use crate::grading::Grading;
use crate::rational::Rational;
use crate::tori::{leibniz_system, matrix_from_unknowns};

/// A derivation inducing the identity modulo `g^(2)` with its eigenspace grading.
#[derive(Clone, Debug)]
pub struct CarnotWitness {
    pub derivation: QMatrix,
    pub grading: Grading,
}

#[derive(Clone, Debug)]
pub enum CarnotOutcome {
    Carnot(CarnotWitness),
    /// The Leibniz and normalization equations are inconsistent; the
    /// certificate combines them into `0 = 1`.
    NotCarnot(Infeasibility),
}

impl CarnotOutcome {
    pub fn is_carnot(&self) -> bool {
        matches!(self, CarnotOutcome::Carnot(_))
    }

    pub fn witness(&self) -> Option<&CarnotWitness> {
        match self {
            CarnotOutcome::Carnot(w) => Some(w),
            CarnotOutcome::NotCarnot(_) => None,
        }
    }
}

/// The associated graded algebra `⊕ g^(i)/g^(i+1)` with its grading by `i`.
///
/// The basis is adapted to the lower series: for each `i`, vectors of the
/// RREF basis of `g^(i)` completing `g^(i+1)`. Standard basis vectors keep
/// their names.
pub fn car(a: &Algebra) -> Result<Grading> {
    let series = a.lower_series();
    let class = series.class.ok_or(Error::NotNilpotent)?;
    let d = a.dim();
    let mut cols: Vec<QVector> = Vec::new();
    let mut degree: Vec<i64> = Vec::new();
    for i in 0..class {
        for v in series.terms[i + 1].complement_in(&series.terms[i]) {
            cols.push(v);
            degree.push(i as i64 + 1);
        }
    }
    let p = QMatrix::from_columns(&cols, d);
    let p_inv = if d == 0 { QMatrix::zeros(0, 0) } else { p.inverse().ok_or(Error::SingularMatrix)? };
    let mut dense = vec![Rational::zero(); d * d * d];
    for x in 0..d {
        for y in 0..d {
            let target = degree[x] + degree[y];
            let coords = p_inv.mul_vec(&a.multiply(&cols[x], &cols[y]));
            for (k, c) in coords.into_iter().enumerate() {
                if degree[k] == target {
                    dense[(x * d + y) * d + k] = c;
                }
            }
        }
    }
    let names = cols.iter().enumerate().map(|(n, v)| unit_name(a, v).unwrap_or_else(|| format!("X{}", n + 1))).collect();
    let graded = Arc::new(Algebra::from_dense(a.kind(), names, &dense));
    let mut comps: BTreeMap<Vec<i64>, Vec<usize>> = BTreeMap::new();
    for (k, &deg) in degree.iter().enumerate() {
        comps.entry(vec![deg]).or_default().push(k);
    }
    let comps = comps.into_iter().map(|(w, idx)| (w, Subspace::coordinate(d, &idx))).collect();
    Grading::new(graded, 1, comps)
}

fn unit_name(a: &Algebra, v: &[Rational]) -> Option<String> {
    let mut nz = v.iter().enumerate().filter(|(_, x)| !x.is_zero());
    match (nz.next(), nz.next()) {
        (Some((i, x)), None) if x.is_one() => Some(a.names()[i].clone()),
        _ => None,
    }
}

/// Leibniz equations plus `f(D eᵢ − eᵢ) = 0` for every functional `f`
/// vanishing on `g^(2)`.
fn normalized_system(a: &Algebra) -> LinearSystem {
    let d = a.dim();
    let mut sys = leibniz_system(a);
    let ann = a.derived().annihilator();
    for f in ann.basis() {
        for i in 0..d {
            let eq: Vec<(usize, Rational)> =
                (0..d).filter(|&r| !f[r].is_zero()).map(|r| (r * d + i, f[r].clone())).collect();
            sys.push(eq, f[i].clone());
        }
    }
    sys
}

fn conclude(a: &Arc<Algebra>, sys: LinearSystem) -> Result<CarnotOutcome> {
    match sys.solve() {
        Err(cert) => Ok(CarnotOutcome::NotCarnot(cert)),
        Ok(sol) => {
            let derivation = matrix_from_unknowns(a.dim(), &sol.particular);
            let grading = eigenspace_grading(a, &derivation)?;
            Ok(CarnotOutcome::Carnot(CarnotWitness { derivation, grading }))
        }
    }
}

/// Grading by the eigenspaces `ker(D − i)`, `i = 1, …, c`.
fn eigenspace_grading(a: &Arc<Algebra>, derivation: &QMatrix) -> Result<Grading> {
    let class = a.lower_series().class.ok_or(Error::NotNilpotent)?;
    let comps: BTreeMap<Vec<i64>, Subspace> = (1..=class as i64)
        .map(|i| (vec![i], derivation.eigenspace(&Rational::from_int(i))))
        .collect();
    let g = Grading::new(a.clone(), 1, comps)
        .map_err(|e| Error::Invariant(format!("Carnot witness is not diagonalizable with eigenvalues 1..c: {e}")))?;
    if !g.flags().is_carnot_grading {
        return Err(Error::Invariant("Carnot witness grading is not generated in degree 1".into()));
    }
    Ok(g)
}

/// Decides whether `a` is Carnot.
pub fn carnot_test(a: &Arc<Algebra>) -> Result<CarnotOutcome> {
    if !a.is_nilpotent() {
        return Err(Error::NotNilpotent);
    }
    conclude(a, normalized_system(a))
}

/// Decides whether some Carnot grading has `g₁ = v`; `v` must complement `g^(2)`.
pub fn carnot_with_prescribed_v1(a: &Arc<Algebra>, v: &Subspace) -> Result<CarnotOutcome> {
    if !a.is_nilpotent() {
        return Err(Error::NotNilpotent);
    }
    let d = a.dim();
    let derived = a.derived();
    if v.ambient_dim() != d || v.dim() + derived.dim() != d || !v.sum(&derived).is_full() {
        return Err(Error::BadComplement);
    }
    let mut sys = leibniz_system(a);
    for b in v.basis() {
        for r in 0..d {
            let eq: Vec<(usize, Rational)> =
                (0..d).filter(|&c| !b[c].is_zero()).map(|c| (r * d + c, b[c].clone())).collect();
            sys.push(eq, b[r].clone());
        }
    }
    conclude(a, sys)
}

/// A Carnot grading whose components are stable under every matrix in `s`.
///
/// Adds `σD = Dσ` for each `σ ∈ s` to the Carnot system. Returns `None` when
/// `a` is Carnot but no commuting witness exists, which cannot happen when
/// `s` generates a finite group.
pub fn invariant_carnot(a: &Arc<Algebra>, s: &[QMatrix]) -> Result<Option<CarnotWitness>> {
    if !a.is_nilpotent() {
        return Err(Error::NotNilpotent);
    }
    if s.iter().any(|m| !a.is_automorphism(m)) {
        return Err(Error::NotAutomorphism);
    }
    let d = a.dim();
    let mut sys = normalized_system(a);
    for m in s {
        for r in 0..d {
            for c in 0..d {
                // (σD − Dσ)[r][c] = Σₖ σ[r][k] D[k][c] − D[r][k] σ[k][c].
                let mut eq = Vec::new();
                for k in 0..d {
                    if !m[(r, k)].is_zero() {
                        eq.push((k * d + c, m[(r, k)].clone()));
                    }
                    if !m[(k, c)].is_zero() {
                        eq.push((r * d + k, -m[(k, c)].clone()));
                    }
                }
                sys.push(eq, Rational::zero());
            }
        }
    }
    match conclude(a, sys)? {
        CarnotOutcome::Carnot(w) => Ok(Some(w)),
        CarnotOutcome::NotCarnot(_) => {
            if carnot_test(a)?.is_carnot() {
                Ok(None)
            } else {
                Err(Error::NotCarnot)
            }
        }
    }
}
