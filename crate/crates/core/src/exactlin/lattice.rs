use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactlin::matrix::{QMatrix, QVector};
use crate::rational::{lcm_denominators, Rational};

/// Row Hermite normal form: nonzero rows only, pivots strictly increasing and
/// positive, entries above each pivot reduced into `[0, pivot)`.
pub fn hnf(mut rows: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let ncols = rows.first().map_or(0, Vec::len);
    rows.retain(|r| r.iter().any(|x| !x.is_zero()));
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        // Bring the smallest nonzero |entry| of column c to row r.
        while let Some(best) =
            (r..rows.len()).filter(|&i| !rows[i][c].is_zero()).min_by(|&a, &b| rows[a][c].abs().cmp(&rows[b][c].abs()))
        {
            rows.swap(r, best);
            let mut done = true;
            for i in r + 1..rows.len() {
                if rows[i][c].is_zero() {
                    continue;
                }
                let f = rows[i][c].div_floor(&rows[r][c]);
                let pivot_row = rows[r].clone();
                for (x, p) in rows[i].iter_mut().zip(&pivot_row).skip(c) {
                    *x -= &f * p;
                }
                if !rows[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if rows[r][c].is_zero() {
            continue;
        }
        if rows[r][c].is_negative() {
            for x in rows[r].iter_mut() {
                *x = -&*x;
            }
        }
        let pivot_row = rows[r].clone();
        for row in rows.iter_mut().take(r) {
            let f = row[c].div_floor(&pivot_row[c]);
            if !f.is_zero() {
                for (x, p) in row.iter_mut().zip(&pivot_row).skip(c) {
                    *x -= &f * p;
                }
            }
        }
        r += 1;
    }
    rows.retain(|row| row.iter().any(|x| !x.is_zero()));
    rows
}

/// Z-basis (in HNF) of `{x ∈ Zᵐ : Σ xᵢ·rowsᵢ = 0}`.
pub fn integer_kernel(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let m = rows.len();
    let n = rows.first().map_or(0, Vec::len);
    let aug: Vec<Vec<BigInt>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut a = r.clone();
            a.extend((0..m).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
            a
        })
        .collect();
    let h = hnf(aug);
    let kernel: Vec<Vec<BigInt>> =
        h.into_iter().filter(|row| row[..n].iter().all(Zero::is_zero)).map(|row| row[n..].to_vec()).collect();
    hnf(kernel)
}

/// Finitely generated subgroup `(1/scale)·rowspan_Z(basis)` of Qⁿ with its
/// basis in Hermite normal form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ZLattice {
    ambient: usize,
    basis: Vec<Vec<BigInt>>,
    scale: BigInt,
}

impl ZLattice {
    pub fn from_generators(ambient: usize, gens: &[QVector]) -> Self {
        assert!(gens.iter().all(|g| g.len() == ambient), "generator length differs from ambient dimension");
        let scale = lcm_denominators(gens.iter().flatten());
        let rows = gens.iter().map(|g| g.iter().map(|x| x.numer() * (&scale / x.denom())).collect()).collect();
        Self::from_integer_rows(ambient, rows, scale)
    }

    fn from_integer_rows(ambient: usize, rows: Vec<Vec<BigInt>>, scale: BigInt) -> Self {
        let mut basis = if rows.is_empty() { Vec::new() } else { hnf(rows) };
        let g = basis.iter().flatten().fold(scale.clone(), |g, x| g.gcd(x));
        let scale = if g.is_one() || g.is_zero() {
            scale
        } else {
            for x in basis.iter_mut().flatten() {
                *x = &*x / &g;
            }
            &scale / &g
        };
        ZLattice { ambient, basis, scale }
    }

    /// Zⁿ.
    pub fn standard(ambient: usize) -> Self {
        Self::from_generators(ambient, &QMatrix::identity(ambient).row_vectors())
    }

    /// Lattice spanned by the columns of an invertible matrix.
    pub fn from_columns(m: &QMatrix) -> Self {
        Self::from_generators(m.rows(), &(0..m.cols()).map(|j| m.column(j)).collect::<Vec<_>>())
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient
    }

    pub fn integer_basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    pub fn denominator_scale(&self) -> &BigInt {
        &self.scale
    }

    pub fn basis(&self) -> Vec<QVector> {
        let s = Rational::from(&self.scale);
        self.basis.iter().map(|row| row.iter().map(|x| Rational::from(x) / &s).collect()).collect()
    }

    fn pivot_cols(&self) -> Vec<usize> {
        self.basis.iter().map(|r| r.iter().position(|x| !x.is_zero()).unwrap()).collect()
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        assert_eq!(v.len(), self.ambient);
        let mut w = Vec::with_capacity(v.len());
        for x in v {
            let y = x * &Rational::from(&self.scale);
            if !y.is_integer() {
                return false;
            }
            w.push(y.numer());
        }
        for (row, c) in self.basis.iter().zip(self.pivot_cols()) {
            if w[..c].iter().any(|x| !x.is_zero()) {
                return false;
            }
            let (f, rem) = w[c].div_rem(&row[c]);
            if !rem.is_zero() {
                return false;
            }
            if !f.is_zero() {
                for (x, p) in w.iter_mut().zip(row).skip(c) {
                    *x -= &f * p;
                }
            }
        }
        w.iter().all(Zero::is_zero)
    }

    pub fn contains_lattice(&self, other: &ZLattice) -> bool {
        other.basis().iter().all(|v| self.contains(v))
    }

    /// `[self : sub]` for a sublattice of the same rank.
    pub fn index_of(&self, sub: &ZLattice) -> Result<Rational> {
        if sub.rank() != self.rank() || !self.contains_lattice(sub) {
            return Err(Error::NotSublattice);
        }
        let prod = |l: &ZLattice| -> BigInt {
            l.basis.iter().zip(l.pivot_cols()).map(|(r, c)| r[c].clone()).product()
        };
        let k = self.rank() as i32;
        let ratio = Rational::from_big_ratio(prod(sub), prod(self));
        Ok(ratio * Rational::from_big_ratio(self.scale.clone(), sub.scale.clone()).pow(k))
    }

    /// Covolume of a full lattice, `|det|` of a basis.
    pub fn covolume(&self) -> Rational {
        assert!(self.is_full(), "covolume of a non-full lattice");
        let det: BigInt = self.basis.iter().enumerate().map(|(i, r)| r[i].clone()).product();
        Rational::from_big_ratio(det, self.scale.pow(self.ambient as u32))
    }

    pub fn sum(&self, other: &ZLattice) -> ZLattice {
        let mut gens = self.basis();
        gens.extend(other.basis());
        Self::from_generators(self.ambient, &gens)
    }

    pub fn intersect(&self, other: &ZLattice) -> ZLattice {
        assert_eq!(self.ambient, other.ambient);
        let s = self.scale.lcm(&other.scale);
        let lift = |l: &ZLattice| -> Vec<Vec<BigInt>> {
            let f = &s / &l.scale;
            l.basis.iter().map(|r| r.iter().map(|x| x * &f).collect()).collect()
        };
        let a = lift(self);
        let c = lift(other);
        if a.is_empty() || c.is_empty() {
            return Self::from_integer_rows(self.ambient, Vec::new(), BigInt::one());
        }
        let mut stacked = a.clone();
        stacked.extend(c.iter().map(|r| r.iter().map(|x| -x).collect::<Vec<_>>()));
        let rows: Vec<Vec<BigInt>> = integer_kernel(&stacked)
            .into_iter()
            .map(|x| {
                let mut v = vec![BigInt::zero(); self.ambient];
                for (xi, row) in x.iter().zip(&a) {
                    if !xi.is_zero() {
                        for (vj, rj) in v.iter_mut().zip(row) {
                            *vj += xi * rj;
                        }
                    }
                }
                v
            })
            .collect();
        Self::from_integer_rows(self.ambient, rows, s)
    }

    /// Image under a matrix acting on column vectors.
    pub fn image(&self, m: &QMatrix) -> ZLattice {
        let gens: Vec<QVector> = self.basis().iter().map(|v| m.mul_vec(v)).collect();
        Self::from_generators(m.rows(), &gens)
    }

    pub fn scaled(&self, t: &Rational) -> ZLattice {
        let gens: Vec<QVector> = self.basis().iter().map(|v| v.iter().map(|x| x * t).collect()).collect();
        Self::from_generators(self.ambient, &gens)
    }

    pub fn is_stable_under(&self, m: &QMatrix) -> bool {
        self.basis().iter().all(|v| self.contains(&m.mul_vec(v)))
    }
}

/// Iterates `L ← L + m·L` from `start`; returns the fixpoint, or `None` if it
/// is not reached within `cap` steps.
pub fn saturate_under(start: &ZLattice, m: &QMatrix, cap: usize) -> Option<ZLattice> {
    let mut l = start.clone();
    for _ in 0..cap {
        let next = l.sum(&l.image(m));
        if next == l {
            return Some(l);
        }
        l = next;
    }
    None
}

impl fmt::Debug for ZLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ZLattice(1/{} · [", self.scale)?;
        for (i, r) in self.basis.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "])")
    }
}

impl serde::Serialize for ZLattice {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.basis().serialize(s)
    }
}
