//! Factorization of rational polynomials into irreducibles.
//!
//! Rational roots are split off exactly. The remaining factors are found by
//! recombining numerically approximated complex roots and confirming each
//! candidate by exact division; irreducibility of every factor is then
//! certified by factor-degree patterns modulo small primes.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::exactlin::QPoly;
use crate::rational::Rational;

/// Monic irreducible factors with multiplicities; `certified` is false when
/// some factor could not be proven irreducible within the prime budget.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub factors: Vec<(QPoly, usize)>,
    pub certified: bool,
}

/// Yun's squarefree decomposition: monic `(sᵢ, i)` with `p ∼ Π sᵢ^i`.
pub fn squarefree_decomposition(p: &QPoly) -> Vec<(QPoly, usize)> {
    let mut out = Vec::new();
    if p.degree().unwrap_or(0) == 0 {
        return out;
    }
    let p = p.monic();
    let dp = p.derivative();
    let a0 = p.gcd(&dp);
    let mut b = p.div_exact(&a0).expect("gcd divides");
    let mut c = dp.div_exact(&a0).expect("gcd divides");
    let mut d = &c - &b.derivative();
    let mut i = 1;
    while b.degree().unwrap_or(0) > 0 {
        let a = b.gcd(&d);
        b = b.div_exact(&a).expect("gcd divides");
        c = d.div_exact(&a).expect("gcd divides");
        d = &c - &b.derivative();
        if a.degree().unwrap_or(0) > 0 {
            out.push((a.monic(), i));
        }
        i += 1;
    }
    out
}

pub fn factor(p: &QPoly, prime_budget: usize) -> Factorization {
    let mut factors = Vec::new();
    let mut certified = true;
    for (s, mult) in squarefree_decomposition(p) {
        let mut rest = s;
        for r in rest.rational_roots() {
            let lin = QPoly::linear_root(&r);
            rest = rest.div_exact(&lin).expect("root divides");
            factors.push((lin, mult));
        }
        if rest.degree().unwrap_or(0) == 0 {
            continue;
        }
        for f in recombine(&rest) {
            // Without rational roots, degrees two and three are irreducible.
            certified &= f.degree().unwrap_or(0) <= 3 || certify_irreducible(&f, prime_budget);
            factors.push((f, mult));
        }
    }
    factors.sort_by(|a, b| a.0.degree().cmp(&b.0.degree()).then_with(|| a.0.coeffs().cmp(b.0.coeffs())));
    Factorization { factors, certified }
}

/// Aberth–Ehrlich simultaneous iteration on the coefficients (constant first).
pub fn complex_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    let monic: Vec<f64> = coeffs.iter().map(|c| c / lead).collect();
    let radius = 1.0 + monic[..n].iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let mut z: Vec<Complex64> =
        (0..n).map(|k| Complex64::from_polar(radius * 0.5, 0.4 + 2.0 * std::f64::consts::PI * k as f64 / n as f64)).collect();
    let eval = |x: Complex64| -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for c in monic.iter().rev() {
            dp = dp * x + p;
            p = p * x + c;
        }
        (p, dp)
    };
    for _ in 0..2000 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (p, dp) = eval(z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let s: Complex64 = (0..n).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
            let w = ratio / (1.0 - ratio * s);
            z[i] -= w;
            moved = moved.max(w.norm() / (1.0 + z[i].norm()));
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

/// Splits a squarefree polynomial without rational roots into factors whose
/// product is exact; each factor is the smallest divisor found among the
/// root subsets.
fn recombine(p: &QPoly) -> Vec<QPoly> {
    let ints = p.primitive_integer();
    let n = ints.len() - 1;
    let lead = ints[n].to_f64().unwrap_or(f64::INFINITY);
    let f64s: Vec<f64> = ints.iter().map(|c| c.to_f64().unwrap_or(f64::INFINITY)).collect();
    if f64s.iter().any(|c| !c.is_finite()) || n < 4 {
        // Degrees 2 and 3 without rational roots are irreducible.
        return vec![p.monic()];
    }
    let roots = complex_roots(&f64s);
    let mut remaining: Vec<usize> = (0..n).collect();
    let mut rest = p.monic();
    let mut out = Vec::new();
    let mut k = 2;
    while 2 * k <= remaining.len() {
        let mut found = None;
        for subset in Subsets::new(remaining.len(), k) {
            let chosen: Vec<Complex64> = subset.iter().map(|&i| roots[remaining[i]]).collect();
            if let Some(cand) = candidate(&chosen, lead) {
                if let Some(q) = rest.div_exact(&cand) {
                    found = Some((subset, cand, q));
                    break;
                }
            }
        }
        match found {
            Some((subset, cand, q)) => {
                out.push(cand);
                rest = q;
                let drop: Vec<usize> = subset.iter().map(|&i| remaining[i]).collect();
                remaining.retain(|i| !drop.contains(i));
            }
            None => k += 1,
        }
    }
    out.push(rest);
    out
}

/// Monic polynomial with the given roots when `lead` times it rounds to
/// integer coefficients.
fn candidate(roots: &[Complex64], lead: f64) -> Option<QPoly> {
    let mut c = vec![Complex64::new(1.0, 0.0)];
    for r in roots {
        let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
        for (i, x) in c.iter().enumerate() {
            next[i + 1] += x;
            next[i] -= x * r;
        }
        c = next;
    }
    let mut ints = Vec::with_capacity(c.len());
    for x in &c {
        let v = x * lead;
        let tol = 1e-6 * (1.0 + v.norm());
        if v.im.abs() > tol || (v.re - v.re.round()).abs() > tol || v.re.abs() > 9.0e15 {
            return None;
        }
        ints.push(Rational::from_int(v.re.round() as i64));
    }
    let q = QPoly::new(ints);
    (q.degree() == Some(roots.len())).then(|| q.monic())
}

struct Subsets {
    n: usize,
    idx: Vec<usize>,
    done: bool,
}

impl Subsets {
    fn new(n: usize, k: usize) -> Self {
        Subsets { n, idx: (0..k).collect(), done: k > n }
    }
}

impl Iterator for Subsets {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.idx.clone();
        let k = self.idx.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < self.n - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

/// Proves irreducibility of a squarefree polynomial over Q: the degrees of
/// its rational factors must be subset sums of the factor degrees modulo
/// every good prime, and it suffices that no proper degree survives.
pub fn certify_irreducible(p: &QPoly, prime_budget: usize) -> bool {
    let ints = p.primitive_integer();
    let n = ints.len() - 1;
    if n <= 1 {
        return n == 1;
    }
    let mut possible = vec![true; n + 1];
    let mut used = 0;
    for q in primes().take(200) {
        if used >= prime_budget {
            break;
        }
        let Some(pattern) = degree_pattern(&ints, q) else { continue };
        used += 1;
        let mut sums = vec![false; n + 1];
        sums[0] = true;
        for d in pattern {
            for s in (d..=n).rev() {
                sums[s] |= sums[s - d];
            }
        }
        for (pd, s) in possible.iter_mut().zip(&sums) {
            *pd &= *s;
        }
        if (1..n).all(|d| !possible[d]) {
            return true;
        }
    }
    false
}

fn primes() -> impl Iterator<Item = u64> {
    (2u64..).filter(|&k| (2..k).take_while(|d| d * d <= k).all(|d| k % d != 0))
}

type Fp = Vec<u64>;

fn fp_trim(mut a: Fp) -> Fp {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn fp_rem(a: &Fp, b: &Fp, q: u64) -> Fp {
    let mut r = a.clone();
    let db = b.len() - 1;
    let inv = fp_inv(b[db], q);
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1;
        let f = r[k] * inv % q;
        for i in 0..=db {
            let t = f * b[i] % q;
            r[k - db + i] = (r[k - db + i] + q - t) % q;
        }
        r = fp_trim(r);
    }
    r
}

fn fp_mulmod(a: &Fp, b: &Fp, m: &Fp, q: u64) -> Fp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut c = vec![0u64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            c[i + j] = (c[i + j] + x * y) % q;
        }
    }
    fp_rem(&fp_trim(c), m, q)
}

fn fp_inv(a: u64, q: u64) -> u64 {
    let mut r = 1u64;
    let (mut b, mut e) = (a % q, q - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % q;
        }
        b = b * b % q;
        e >>= 1;
    }
    r
}

fn fp_gcd(a: &Fp, b: &Fp, q: u64) -> Fp {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let r = fp_rem(&a, &b, q);
        a = b;
        b = r;
    }
    if let Some(&l) = a.last() {
        let inv = fp_inv(l, q);
        a.iter_mut().for_each(|x| *x = *x * inv % q);
    }
    a
}

fn fp_divexact(a: &Fp, b: &Fp, q: u64) -> Fp {
    let db = b.len() - 1;
    let inv = fp_inv(b[db], q);
    let mut r = a.clone();
    let mut quo = vec![0u64; a.len() - db];
    while r.len() > db {
        let k = r.len() - 1;
        let f = r[k] * inv % q;
        quo[k - db] = f;
        for i in 0..=db {
            let t = f * b[i] % q;
            r[k - db + i] = (r[k - db + i] + q - t) % q;
        }
        r = fp_trim(r);
    }
    quo
}

/// Degrees of the irreducible factors modulo `q`, or `None` when `q`
/// divides the leading coefficient or the reduction is not squarefree.
fn degree_pattern(ints: &[BigInt], q: u64) -> Option<Vec<usize>> {
    let qb = BigInt::from(q);
    let f: Fp = ints.iter().map(|c| c.mod_floor(&qb).to_u64().expect("reduced")).collect();
    let n = ints.len() - 1;
    if f[n] == 0 {
        return None;
    }
    let df: Fp = fp_trim((1..=n).map(|i| f[i] * (i as u64 % q) % q).collect());
    if df.is_empty() || fp_gcd(&f, &df, q).len() != 1 {
        return None;
    }
    let mut rest = f;
    let mut pattern = Vec::new();
    let x: Fp = vec![0, 1];
    let mut h = x.clone();
    let mut d = 0;
    while rest.len() > 1 {
        d += 1;
        if 2 * d > rest.len() - 1 {
            pattern.push(rest.len() - 1);
            break;
        }
        // h ← h^q mod rest.
        let mut base = fp_rem(&h, &rest, q);
        let mut acc: Fp = vec![1];
        let mut e = q;
        while e > 0 {
            if e & 1 == 1 {
                acc = fp_mulmod(&acc, &base, &rest, q);
            }
            base = fp_mulmod(&base, &base, &rest, q);
            e >>= 1;
        }
        h = acc;
        let mut diff = h.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + q - 1) % q;
        let g = fp_gcd(&rest, &fp_trim(diff), q);
        let deg = g.len() - 1;
        if deg > 0 {
            pattern.extend(std::iter::repeat_n(d, deg / d));
            rest = fp_divexact(&rest, &g, q);
            h = fp_rem(&h, &rest, q);
        }
    }
    Some(pattern)
}

/// Exact product of the factors with multiplicities.
pub fn expand(f: &Factorization) -> QPoly {
    f.factors.iter().fold(QPoly::one(), |acc, (p, m)| &acc * &p.pow(*m as u32))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> QPoly {
        QPoly::from_ints(c)
    }

    #[test]
    fn squarefree_decomposition_recovers_multiplicities() {
        // (x−1)²(x+2)³(x²+1)
        let p = &(&poly(&[-1, 1]).pow(2) * &poly(&[2, 1]).pow(3)) * &poly(&[1, 0, 1]);
        let sf = squarefree_decomposition(&p);
        assert_eq!(sf, vec![(poly(&[1, 0, 1]), 1), (poly(&[-1, 1]), 2), (poly(&[2, 1]), 3)]);
    }

    #[test]
    fn factors_products_of_quadratics() {
        // (x²−6x+4)(x²+x+1)(x²−2)·(x−3)
        let p = &(&(&poly(&[4, -6, 1]) * &poly(&[1, 1, 1])) * &poly(&[-2, 0, 1])) * &poly(&[-3, 1]);
        let f = factor(&p, 20);
        assert!(f.certified);
        assert_eq!(f.factors.len(), 4);
        assert_eq!(expand(&f), p.monic());
    }

    #[test]
    fn certifies_irreducible_quartic() {
        // x⁴ − 10x² + 1 is irreducible over Q but reducible modulo every prime.
        let p = poly(&[1, 0, -10, 0, 1]);
        let f = factor(&p, 30);
        assert_eq!(f.factors, vec![(p.clone(), 1)]);
        assert!(!f.certified);
        // x⁴ + x + 1 is irreducible modulo 2.
        let p = poly(&[1, 1, 0, 0, 1]);
        assert!(certify_irreducible(&p, 5));
        let f = factor(&p, 5);
        assert!(f.certified && f.factors.len() == 1);
    }

    #[test]
    fn rational_coefficients() {
        let p = QPoly::new(vec![Rational::one(), Rational::new(1, 2), Rational::one()]);
        let f = factor(&p, 10);
        assert_eq!(f.factors, vec![(p, 1)]);
    }

    #[test]
    fn aberth_roots_of_cyclotomic() {
        let roots = complex_roots(&[1.0, 1.0, 1.0, 1.0, 1.0]);
        for r in roots {
            assert!((r.norm() - 1.0).abs() < 1e-9);
            assert!((r.powu(5) - 1.0).norm() < 1e-9);
        }
    }
}
