use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::exactlin::poly::QPoly;
use crate::exactlin::{AffineSolution, EchelonBuilder, Subspace};
use crate::rational::Rational;

pub type QVector = Vec<Rational>;

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).filter(|(x, y)| !x.is_zero() && !y.is_zero()).map(|(x, y)| x * y).sum()
}

pub fn vec_add(a: &[Rational], b: &[Rational]) -> QVector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[Rational], b: &[Rational]) -> QVector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_scale(a: &[Rational], s: &Rational) -> QVector {
    a.iter().map(|x| x * s).collect()
}

pub fn vec_is_zero(a: &[Rational]) -> bool {
    a.iter().all(Rational::is_zero)
}

/// Dense rational matrix, row-major. Matrices act on column vectors.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn scalar(n: usize, s: &Rational) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = s.clone();
        }
        m
    }

    pub fn diagonal(entries: &[Rational]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    pub fn from_rows(rows: Vec<QVector>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        QMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[QVector], nrows: usize) -> Self {
        let mut m = Self::zeros(nrows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| Rational::from_int(x)).collect()).collect())
    }

    pub fn from_flat(rows: usize, cols: usize, data: Vec<Rational>) -> Self {
        assert_eq!(data.len(), rows * cols);
        QMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> QVector {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row_vectors(&self) -> Vec<QVector> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn flat(&self) -> &[Rational] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        vec_is_zero(&self.data)
    }

    pub fn transpose(&self) -> QMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> QVector {
        assert_eq!(self.cols, v.len(), "matrix-vector shape");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[Rational]) -> QVector {
        assert_eq!(self.rows, v.len(), "vector-matrix shape");
        let mut out = vec![Rational::zero(); self.cols];
        for (i, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                let m = &self[(i, j)];
                if !m.is_zero() {
                    *o += x * m;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QMatrix { rows: self.rows, cols: self.cols, data: vec_add(&self.data, &other.data) }
    }

    pub fn sub(&self, other: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QMatrix { rows: self.rows, cols: self.cols, data: vec_sub(&self.data, &other.data) }
    }

    pub fn scale(&self, s: &Rational) -> QMatrix {
        QMatrix { rows: self.rows, cols: self.cols, data: vec_scale(&self.data, s) }
    }

    /// `self·other − other·self`.
    pub fn commutator(&self, other: &QMatrix) -> QMatrix {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).sum()
    }

    pub fn pow(&self, e: u32) -> QMatrix {
        assert!(self.is_square());
        let mut acc = Self::identity(self.rows);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Linear combination `Σ cᵢ·Mᵢ` of equally shaped matrices.
    pub fn combination(coeffs: &[Rational], mats: &[QMatrix]) -> QMatrix {
        assert_eq!(coeffs.len(), mats.len());
        let (r, c) = mats.first().map_or((0, 0), |m| (m.rows, m.cols));
        let mut out = Self::zeros(r, c);
        for (a, m) in coeffs.iter().zip(mats) {
            if a.is_zero() {
                continue;
            }
            for (o, x) in out.data.iter_mut().zip(&m.data) {
                if !x.is_zero() {
                    *o += a * x;
                }
            }
        }
        out
    }

    /// Canonical reduced row echelon form and its pivot columns.
    ///
    /// Pivots are chosen leftmost column first, topmost row first; zero rows
    /// are kept at the bottom so the shape is unchanged.
    pub fn rref(&self) -> (QMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].recip();
            for j in c..m.cols {
                let v = &m[(r, j)] * &inv;
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    if m[(r, j)].is_zero() {
                        continue;
                    }
                    let v = &m[(i, j)] - &(&f * &m[(r, j)]);
                    m[(i, j)] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Basis of `{x : self·x = 0}`, one vector per free column.
    pub fn kernel(&self) -> Vec<QVector> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for f in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![Rational::zero(); self.cols];
            v[f] = Rational::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -&r[(i, f)];
            }
            basis.push(v);
        }
        basis
    }

    /// One solution of `self·x = b` plus a basis of the homogeneous solutions.
    pub fn solve_affine(&self, b: &[Rational]) -> Result<AffineSolution> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!("rhs has {} entries, matrix has {} rows", b.len(), self.rows)));
        }
        let mut sys = EchelonBuilder::new(self.cols);
        for (i, bi) in b.iter().enumerate() {
            let coeffs = self.row(i).iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(j, x)| (j, x.clone())).collect();
            sys.push(coeffs, bi.clone());
        }
        sys.solve().map_err(|_| Error::Infeasible)
    }

    pub fn inverse(&self) -> Option<QMatrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = Rational::one();
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = r[(i, n + j)].clone();
            }
        }
        Some(inv)
    }

    pub fn determinant(&self) -> Rational {
        assert!(self.is_square());
        let mut m = self.clone();
        let n = self.rows;
        let mut det = Rational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Rational::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det *= &piv;
            let inv = piv.recip();
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = &m[(i, c)] * &inv;
                for j in c..n {
                    let v = &m[(i, j)] - &(&f * &m[(c, j)]);
                    m[(i, j)] = v;
                }
            }
        }
        det
    }

    /// Monic polynomial of least degree annihilating the matrix.
    ///
    /// Least common multiple of the annihilators of standard basis vectors,
    /// skipping any vector already inside the cyclic subspaces seen so far.
    pub fn minimal_polynomial(&self) -> QPoly {
        assert!(self.is_square(), "minimal polynomial of a non-square matrix");
        let n = self.rows;
        let mut result = QPoly::one();
        let mut covered = Subspace::zero(n);
        for j in 0..n {
            if covered.is_full() {
                break;
            }
            let mut e = vec![Rational::zero(); n];
            e[j] = Rational::one();
            if covered.contains(&e) {
                continue;
            }
            let (p, krylov) = self.vector_annihilator(e);
            covered = covered.sum(&Subspace::from_vectors(n, krylov));
            let g = result.gcd(&p);
            result = (&result * &p).div_exact(&g).expect("gcd divides the product").monic();
        }
        result
    }

    /// Monic annihilator of `v` together with the Krylov basis `v, Mv, …`.
    fn vector_annihilator(&self, v: QVector) -> (QPoly, Vec<QVector>) {
        // Reduced Krylov vectors with their pivots and their expressions in
        // the Krylov basis.
        let mut reduced: Vec<(usize, QVector, QVector)> = Vec::new();
        let mut krylov: Vec<QVector> = Vec::new();
        let mut w = v;
        loop {
            let k = krylov.len();
            let mut r = w.clone();
            let mut c = vec![Rational::zero(); k + 1];
            c[k] = Rational::one();
            for (piv, row, comb) in &reduced {
                if r[*piv].is_zero() {
                    continue;
                }
                let f = &r[*piv] / &row[*piv];
                for (x, y) in r.iter_mut().zip(row) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
                for (x, y) in c.iter_mut().zip(comb) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
            match r.iter().position(|x| !x.is_zero()) {
                None => return (QPoly::new(c), krylov),
                Some(piv) => {
                    let next = self.mul_vec(&w);
                    krylov.push(w);
                    reduced.push((piv, r, c));
                    w = next;
                }
            }
        }
    }

    pub fn is_nilpotent(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        self.pow(self.rows as u32).is_zero()
    }

    /// Semisimple part `S` of the additive Jordan–Chevalley decomposition
    /// `M = S + N` over Q.
    ///
    /// Newton iteration `S ← S − q(S)·q'(S)⁻¹` on the squarefree part `q` of
    /// the minimal polynomial; every iterate is a polynomial in `M`.
    pub fn semisimple_part(&self) -> QMatrix {
        self.semisimple_part_given(&self.minimal_polynomial())
    }

    /// [`QMatrix::semisimple_part`] with the minimal polynomial supplied.
    pub fn semisimple_part_given(&self, minpoly: &QPoly) -> QMatrix {
        let q = minpoly.squarefree_part();
        let dq = q.derivative();
        let mut s = self.clone();
        for _ in 0..64 {
            let qs = q.eval_matrix(&s);
            if qs.is_zero() {
                return s;
            }
            let dqs = dq.eval_matrix(&s);
            let inv = dqs.inverse().expect("q' is invertible at the iterates of a squarefree q");
            s = s.sub(&qs.mul(&inv));
        }
        unreachable!("Newton iteration for the semisimple part converges quadratically")
    }

    /// Eigenspace `ker(M − λI)`.
    pub fn eigenspace(&self, lambda: &Rational) -> Subspace {
        let shifted = self.sub(&Self::scalar(self.rows, lambda));
        Subspace::from_vectors(self.rows, shifted.kernel())
    }

    pub fn image(&self) -> Subspace {
        Subspace::from_vectors(self.rows, (0..self.cols).map(|j| self.column(j)).collect())
    }

    pub fn null_space(&self) -> Subspace {
        Subspace::from_vectors(self.cols, self.kernel())
    }

    /// Least common multiple of all entry denominators.
    pub fn denominator_lcm(&self) -> num_bigint::BigInt {
        crate::rational::lcm_denominators(&self.data)
    }
}

impl Index<(usize, usize)> for QMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl serde::Serialize for QMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.row_vectors().serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn r(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn rref_identity_and_zero() {
        let id = QMatrix::identity(3);
        assert_eq!(id.rref(), (id.clone(), vec![0, 1, 2]));
        let z = QMatrix::zeros(2, 3);
        assert_eq!(z.rref(), (z.clone(), vec![]));
    }

    #[test]
    fn rref_rank_one() {
        let m = QMatrix::from_i64(&[&[2, 4], &[1, 2]]);
        let (rr, piv) = m.rref();
        assert_eq!(rr, QMatrix::from_i64(&[&[1, 2], &[0, 0]]));
        assert_eq!(piv, vec![0]);
    }

    #[test]
    fn solve_affine_examples() {
        let id = QMatrix::identity(3);
        let v = vec![q(1, 2), r(-3), r(7)];
        let sol = id.solve_affine(&v).unwrap();
        assert_eq!(sol.particular, v);
        assert!(sol.kernel.is_empty());

        let zero = QMatrix::zeros(2, 2);
        assert_eq!(zero.solve_affine(&[r(1), r(0)]).unwrap_err(), Error::Infeasible);

        let a = QMatrix::from_i64(&[&[1, 1]]);
        let sol = a.solve_affine(&[r(2)]).unwrap();
        assert_eq!(sol.particular, vec![r(2), r(0)]);
        assert_eq!(sol.kernel.len(), 1);
        let k = Subspace::from_vectors(2, sol.kernel.clone());
        assert_eq!(k, Subspace::from_vectors(2, vec![vec![r(1), r(-1)]]));
    }

    #[test]
    fn minimal_polynomial_examples() {
        assert_eq!(QMatrix::identity(2).minimal_polynomial(), QPoly::from_ints(&[-1, 1]));
        let j2 = QMatrix::from_i64(&[&[0, 1], &[0, 0]]);
        assert_eq!(j2.minimal_polynomial(), QPoly::from_ints(&[0, 0, 1]));
        // companion of X² + (1/2)X + 1
        let p = QPoly::new(vec![r(1), q(1, 2), r(1)]);
        assert_eq!(p.companion().minimal_polynomial(), p);
    }

    #[test]
    fn semisimple_part_examples() {
        let d = QMatrix::diagonal(&[r(1), r(2), r(2)]);
        assert_eq!(d.semisimple_part(), d);
        let j2 = QMatrix::from_i64(&[&[0, 1], &[0, 0]]);
        assert!(j2.semisimple_part().is_zero());
        // [2] ⊕ J₂
        let m = QMatrix::from_i64(&[&[2, 0, 0], &[0, 0, 1], &[0, 0, 0]]);
        let s = m.semisimple_part();
        assert_eq!(s, QMatrix::diagonal(&[r(2), r(0), r(0)]));
        assert!(s.minimal_polynomial().is_squarefree());
        assert!(m.sub(&s).is_nilpotent());
    }

    #[test]
    fn semisimple_part_of_conjugated_jordan_block() {
        // P·([3] ⊕ J₂(1))·P⁻¹: the semisimple part is P·diag(3,1,1)·P⁻¹.
        let p = QMatrix::from_i64(&[&[1, 2, 0], &[0, 1, -1], &[1, 0, 3]]);
        let pinv = p.inverse().unwrap();
        let m = QMatrix::from_i64(&[&[3, 0, 0], &[0, 1, 1], &[0, 0, 1]]);
        let conj = p.mul(&m).mul(&pinv);
        let expected = p.mul(&QMatrix::diagonal(&[r(3), r(1), r(1)])).mul(&pinv);
        assert_eq!(conj.semisimple_part(), expected);
    }

    fn random_invertible(rng: &mut ChaCha8Rng, n: usize) -> QMatrix {
        loop {
            let rows = (0..n).map(|_| (0..n).map(|_| r(rng.gen_range(-3..=3))).collect()).collect();
            let m = QMatrix::from_rows(rows);
            if !m.determinant().is_zero() {
                return m;
            }
        }
    }

    proptest! {
        #[test]
        fn rref_is_row_space_invariant(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let rows = (0..3).map(|_| (0..4).map(|_| r(rng.gen_range(-2..=2))).collect()).collect();
            let m = QMatrix::from_rows(rows);
            let p = random_invertible(&mut rng, 3);
            let (a, pa) = m.rref();
            let (b, pb) = p.mul(&m).rref();
            prop_assert_eq!(&a, &b);
            prop_assert_eq!(pa, pb);
            prop_assert_eq!(a.rref().0, a);
        }

        #[test]
        fn semisimple_part_contract(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = rng.gen_range(2..=4);
            let rows = (0..n).map(|_| (0..n).map(|_| r(rng.gen_range(-2..=2))).collect()).collect();
            let m = QMatrix::from_rows(rows);
            let s = m.semisimple_part();
            prop_assert_eq!(s.mul(&m), m.mul(&s));
            prop_assert!(m.sub(&s).is_nilpotent());
            prop_assert!(s.minimal_polynomial().is_squarefree());
        }

        #[test]
        fn inverse_and_determinant(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = random_invertible(&mut rng, 4);
            let inv = m.inverse().unwrap();
            prop_assert_eq!(m.mul(&inv), QMatrix::identity(4));
            prop_assert_eq!(m.determinant() * inv.determinant(), Rational::one());
        }
    }
}
