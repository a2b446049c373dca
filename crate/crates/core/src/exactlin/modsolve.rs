//! Linear systems over Q solved modulo word-size primes.
//!
//! The reduced row echelon form is computed modulo a sequence of primes,
//! combined by the Chinese remainder theorem and lifted to Q by rational
//! reconstruction. A lifted answer is returned only after it has been
//! checked against every equation in exact arithmetic; when lifting does not
//! settle, the system is replayed through [`EchelonBuilder`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exactlin::echelon::{AffineSolution, EchelonBuilder, Infeasibility};
use crate::rational::{lcm_denominators, Rational};

type SparseRow = Vec<(usize, Rational)>;

const MAX_PRIMES: usize = 400;

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    a * b % p
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller–Rabin for `n < 3.2·10⁹` with bases 2, 3, 5, 7.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2, 3, 5, 7] {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'bases: for a in [2u64, 3, 5, 7] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Primes below 2³¹ in decreasing order.
fn primes() -> impl Iterator<Item = u64> {
    (1u64 << 30..1u64 << 31).rev().filter(|&n| is_prime(n))
}

fn residue(n: &BigInt, p: u64) -> u64 {
    let r = n.mod_floor(&BigInt::from(p));
    r.to_u64().expect("residue below p")
}

/// Symmetric rational reconstruction of `a mod m`.
fn reconstruct(a: &BigInt, m: &BigInt) -> Option<Rational> {
    let bound = (m / 2u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), a.clone());
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(Rational::from_big_ratio(r1, t1))
}

/// Equations `Σ coeffs = rhs` over Q, recorded for a single solve.
#[derive(Clone, Debug)]
pub struct LinearSystem {
    ncols: usize,
    equations: Vec<(SparseRow, Rational)>,
}

/// Integer multiple of an equation, with the right-hand side in column `ncols`.
struct IntRow {
    entries: Vec<(usize, BigInt)>,
}

/// Reduced echelon form modulo one prime over a subset of the rows.
struct ModEchelon {
    /// Pivot columns in increasing order; `ncols` marks inconsistency.
    pivots: Vec<usize>,
    /// Input rows that produced the pivots, in order of production.
    sources: Vec<usize>,
    /// Pivot rows sorted by pivot column, dense over `ncols + 1` columns.
    rows: Vec<Vec<u64>>,
}

fn echelon_mod(int_rows: &[IntRow], subset: &[usize], width: usize, p: u64) -> ModEchelon {
    let mut rows: Vec<(usize, Vec<u64>)> = Vec::new();
    let mut sources = Vec::new();
    for &s in subset {
        let mut r = vec![0u64; width];
        for (c, x) in &int_rows[s].entries {
            r[*c] = residue(x, p);
        }
        for (col, pr) in &rows {
            let f = r[*col];
            if f != 0 {
                let g = p - f;
                for (x, y) in r.iter_mut().zip(pr) {
                    if *y != 0 {
                        *x = (*x + g * y) % p;
                    }
                }
            }
        }
        let Some(col) = r.iter().position(|&x| x != 0) else { continue };
        let inv = inv_mod(r[col], p);
        for x in r.iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        for (_, pr) in rows.iter_mut() {
            let f = pr[col];
            if f != 0 {
                let g = p - f;
                for (x, y) in pr.iter_mut().zip(&r) {
                    if *y != 0 {
                        *x = (*x + g * y) % p;
                    }
                }
            }
        }
        rows.push((col, r));
        sources.push(s);
    }
    rows.sort_by_key(|(c, _)| *c);
    ModEchelon { pivots: rows.iter().map(|(c, _)| *c).collect(), sources, rows: rows.into_iter().map(|(_, r)| r).collect() }
}

impl LinearSystem {
    pub fn new(ncols: usize) -> Self {
        LinearSystem { ncols, equations: Vec::new() }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn num_equations(&self) -> usize {
        self.equations.len()
    }

    /// Adds the equation `Σ coeffs = rhs`; returns its index.
    pub fn push(&mut self, coeffs: Vec<(usize, Rational)>, rhs: Rational) -> usize {
        assert!(coeffs.iter().all(|(c, _)| *c < self.ncols), "column index out of range");
        self.equations.push((coeffs, rhs));
        self.equations.len() - 1
    }

    /// Same result as [`EchelonBuilder::solve`] on the same equations.
    pub fn solve(&self) -> Result<AffineSolution, Infeasibility> {
        if let Some(answer) = self.solve_modular(true) {
            return answer;
        }
        self.exact().solve()
    }

    fn exact(&self) -> EchelonBuilder {
        let mut b = EchelonBuilder::new(self.ncols);
        for (coeffs, rhs) in &self.equations {
            b.push(coeffs.clone(), rhs.clone());
        }
        b
    }

    pub fn verify_certificate(&self, cert: &Infeasibility) -> bool {
        self.exact_residual(cert).is_some_and(|(combo, rhs)| combo.iter().all(Rational::is_zero) && !rhs.is_zero())
    }

    fn exact_residual(&self, cert: &Infeasibility) -> Option<(Vec<Rational>, Rational)> {
        if cert.equations.len() != cert.multipliers.len() {
            return None;
        }
        let mut combo = vec![Rational::zero(); self.ncols];
        let mut rhs = Rational::zero();
        for (&e, y) in cert.equations.iter().zip(&cert.multipliers) {
            let (coeffs, b) = self.equations.get(e)?;
            for (c, x) in coeffs {
                combo[*c] += y * x;
            }
            rhs += y * b;
        }
        Some((combo, rhs))
    }

    fn int_rows(&self) -> Vec<IntRow> {
        self.equations
            .iter()
            .map(|(coeffs, rhs)| {
                let mut all: Vec<Rational> = coeffs.iter().map(|(_, x)| x.clone()).collect();
                all.push(rhs.clone());
                let l = lcm_denominators(&all);
                let scale = |x: &Rational| x.numer() * (&l / x.denom());
                let mut entries: Vec<(usize, BigInt)> = Vec::with_capacity(coeffs.len() + 1);
                for (c, x) in coeffs {
                    match entries.iter_mut().find(|(k, _)| k == c) {
                        Some((_, v)) => *v += scale(x),
                        None => entries.push((*c, scale(x))),
                    }
                }
                if !rhs.is_zero() {
                    entries.push((self.ncols, scale(rhs)));
                }
                entries.retain(|(_, v)| !v.is_zero());
                IntRow { entries }
            })
            .collect()
    }

    /// `None` when lifting did not settle; certificates are attempted only
    /// when `certify` is set, so a dual system never recurses.
    fn solve_modular(&self, certify: bool) -> Option<Result<AffineSolution, Infeasibility>> {
        let n = self.ncols;
        let width = n + 1;
        let int_rows = self.int_rows();
        let all: Vec<usize> = (0..int_rows.len()).collect();
        let mut primes = primes();
        let p0 = primes.next()?;
        let first = echelon_mod(&int_rows, &all, width, p0);
        if first.pivots.last() == Some(&n) {
            return if certify { self.certificate_modular(&first.sources) } else { None };
        }
        let pivots = first.pivots.clone();
        let subset = first.sources.clone();
        let is_pivot = {
            let mut v = vec![false; width];
            for &c in &pivots {
                v[c] = true;
            }
            v
        };
        let free: Vec<usize> = (0..width).filter(|&c| !is_pivot[c]).collect();
        // Residues of the pivot rows at the free columns, combined over primes.
        let mut modulus = BigInt::from(p0);
        let mut values: Vec<Vec<BigInt>> =
            first.rows.iter().map(|r| free.iter().map(|&c| BigInt::from(r[c])).collect()).collect();
        let mut last: Option<Vec<Vec<Rational>>> = None;
        for p in primes.take(MAX_PRIMES) {
            if let Some(lifted) = values
                .iter()
                .map(|row| row.iter().map(|a| reconstruct(a, &modulus)).collect::<Option<Vec<Rational>>>())
                .collect::<Option<Vec<Vec<Rational>>>>()
            {
                if last.as_ref() == Some(&lifted) {
                    if let Some(sol) = self.assemble_verified(&pivots, &free, &lifted) {
                        return Some(Ok(sol));
                    }
                }
                last = Some(lifted);
            }
            let e = echelon_mod(&int_rows, &subset, width, p);
            if e.pivots != pivots {
                continue;
            }
            let m_inv = inv_mod(residue(&modulus, p), p);
            for (row, er) in values.iter_mut().zip(&e.rows) {
                for (v, &c) in row.iter_mut().zip(&free) {
                    let t = mul_mod((er[c] + p - residue(v, p)) % p, m_inv, p);
                    *v += &modulus * t;
                }
            }
            modulus *= p;
        }
        None
    }

    /// The solution with the given pivot structure, if it satisfies every
    /// equation exactly.
    fn assemble_verified(&self, pivots: &[usize], free: &[usize], lifted: &[Vec<Rational>]) -> Option<AffineSolution> {
        let n = self.ncols;
        let mut particular = vec![Rational::zero(); n];
        let free_vars: Vec<usize> = free.iter().copied().filter(|&c| c < n).collect();
        let mut kernel: Vec<Vec<Rational>> = free_vars
            .iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); n];
                v[f] = Rational::one();
                v
            })
            .collect();
        for (row, &pc) in lifted.iter().zip(pivots) {
            for (x, &c) in row.iter().zip(free) {
                if c == n {
                    particular[pc] = x.clone();
                } else if !x.is_zero() {
                    let k = free_vars.binary_search(&c).expect("free column");
                    kernel[k][pc] = -x;
                }
            }
        }
        let dot = |coeffs: &SparseRow, v: &[Rational]| -> Rational {
            coeffs.iter().filter(|(c, _)| !v[*c].is_zero()).map(|(c, x)| x * &v[*c]).sum()
        };
        for (coeffs, rhs) in &self.equations {
            if &dot(coeffs, &particular) != rhs || kernel.iter().any(|k| !dot(coeffs, k).is_zero()) {
                return None;
            }
        }
        Some(AffineSolution { particular, kernel })
    }

    /// Farkas multipliers over the rows that were independent modulo the
    /// first prime, found as a consistent dual system and checked exactly.
    fn certificate_modular(&self, rows: &[usize]) -> Option<Result<AffineSolution, Infeasibility>> {
        let mut rows = rows.to_vec();
        rows.sort_unstable();
        let mut dual = LinearSystem::new(rows.len());
        let mut by_col: Vec<SparseRow> = vec![Vec::new(); self.ncols];
        for (k, &e) in rows.iter().enumerate() {
            for (c, x) in &self.equations[e].0 {
                by_col[*c].push((k, x.clone()));
            }
        }
        for row in by_col {
            if !row.is_empty() {
                dual.push(row, Rational::zero());
            }
        }
        let rhs_row = rows.iter().enumerate().map(|(k, &e)| (k, self.equations[e].1.clone())).collect();
        dual.push(rhs_row, Rational::one());
        let y = dual.solve_modular(false)?.ok()?.particular;
        let cert = Infeasibility { equations: rows, multipliers: y };
        self.verify_certificate(&cert).then_some(Err(cert))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use proptest::prelude::*;

    fn r(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn reconstruction_recovers_small_fractions() {
        let m = BigInt::from(2_147_483_647u64) * BigInt::from(2_147_483_629u64);
        for x in [q(3, 7), q(-22, 5), r(0), q(1, 1000)] {
            let a = (x.numer() * x.denom().modinv(&m).unwrap()).mod_floor(&m);
            assert_eq!(reconstruct(&a, &m), Some(x));
        }
    }

    #[test]
    fn primes_are_prime() {
        let ps: Vec<u64> = primes().take(3).collect();
        assert_eq!(ps, vec![2_147_483_647, 2_147_483_629, 2_147_483_587]);
    }

    #[test]
    fn large_fractions_need_several_primes() {
        let big = Rational::from_big_ratio(BigInt::from(10).pow(40) + 7, BigInt::from(3).pow(30));
        let mut s = LinearSystem::new(2);
        s.push(vec![(0, r(1)), (1, big.clone())], r(1));
        let sol = s.solve().unwrap();
        assert_eq!(sol.particular, vec![r(1), r(0)]);
        assert_eq!(sol.kernel, vec![vec![-big, r(1)]]);
    }

    #[test]
    fn inconsistent_system_has_verified_certificate() {
        let mut s = LinearSystem::new(2);
        s.push(vec![(0, r(1)), (1, r(2))], r(1));
        s.push(vec![(0, r(3))], r(0));
        s.push(vec![(0, r(2)), (1, r(4))], r(3));
        let cert = s.solve().unwrap_err();
        assert!(s.verify_certificate(&cert));
    }

    proptest! {
        #[test]
        fn agrees_with_exact_elimination(rows in prop::collection::vec(prop::collection::vec((-3i64..=3, 1i64..=4), 6), 1..9),
                                         rhs in prop::collection::vec(-3i64..=3, 9),
                                         homogeneous in any::<bool>()) {
            let mut s = LinearSystem::new(6);
            for (i, row) in rows.iter().enumerate() {
                let b = if homogeneous { r(0) } else { r(rhs[i]) };
                s.push(row.iter().enumerate().map(|(c, &(n, d))| (c, q(n, d))).collect(), b);
            }
            let exact = s.exact();
            match (s.solve(), exact.solve()) {
                (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
                (Err(cert), Err(_)) => prop_assert!(exact.verify_certificate(&cert)),
                (a, b) => prop_assert!(false, "routes disagree: {:?} vs {:?}", a, b),
            }
        }
    }
}
