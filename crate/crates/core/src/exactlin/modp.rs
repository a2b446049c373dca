//! Characteristic polynomials over a prime field, used as a fast necessary
//! condition for a rational matrix to have only rational eigenvalues.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::exactlin::matrix::QMatrix;
use crate::rational::Rational;

const PRIMES: [u64; 3] = [2_147_483_647, 2_147_483_629, 2_147_483_587];

fn mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, a, p);
        }
        a = mul(a, a, p);
        e >>= 1;
    }
    r
}

fn inv(a: u64, p: u64) -> u64 {
    pow(a, p - 2, p)
}

fn reduce_int(n: &BigInt, p: u64) -> u64 {
    let r = n % BigInt::from(p);
    let r = if r < BigInt::zero() { r + BigInt::from(p) } else { r };
    r.to_u64().expect("residue fits")
}

/// Image of `x` in F_p, or `None` when `p` divides the denominator.
fn reduce(x: &Rational, p: u64) -> Option<u64> {
    let d = reduce_int(&x.denom(), p);
    (d != 0).then(|| mul(reduce_int(&x.numer(), p), inv(d, p), p))
}

/// Polynomials over F_p, constant term first, without trailing zeros.
type Poly = Vec<u64>;

fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn rem(a: &[u64], b: &[u64], p: u64) -> Poly {
    let mut a = a.to_vec();
    let db = b.len() - 1;
    let lead_inv = inv(b[db], p);
    while a.len() > db {
        let top = a.len() - 1;
        let f = mul(a[top], lead_inv, p);
        if f != 0 {
            for (i, &c) in b.iter().enumerate() {
                let k = top - db + i;
                a[k] = (a[k] + p - mul(f, c, p)) % p;
            }
        }
        a.pop();
        a = trim(a);
    }
    trim(a)
}

fn div(a: &[u64], b: &[u64], p: u64) -> Poly {
    let mut a = a.to_vec();
    let db = b.len() - 1;
    let lead_inv = inv(b[db], p);
    let mut q = vec![0; a.len().saturating_sub(db)];
    while a.len() > db {
        let top = a.len() - 1;
        let f = mul(a[top], lead_inv, p);
        q[top - db] = f;
        for (i, &c) in b.iter().enumerate() {
            let k = top - db + i;
            a[k] = (a[k] + p - mul(f, c, p)) % p;
        }
        a.pop();
    }
    trim(q)
}

fn mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul(x, y, p)) % p;
        }
    }
    rem(&out, m, p)
}

fn monic(a: Poly, p: u64) -> Poly {
    let l = inv(*a.last().expect("nonzero"), p);
    a.into_iter().map(|c| mul(c, l, p)).collect()
}

fn gcd(mut a: Poly, mut b: Poly, p: u64) -> Poly {
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    monic(a, p)
}

/// Characteristic polynomial by reduction to Hessenberg form.
fn charpoly(mut h: Vec<Vec<u64>>, p: u64) -> Poly {
    let n = h.len();
    for c in 0..n.saturating_sub(2) {
        let Some(r) = (c + 1..n).find(|&r| h[r][c] != 0) else { continue };
        h.swap(r, c + 1);
        for row in h.iter_mut() {
            row.swap(r, c + 1);
        }
        let piv_inv = inv(h[c + 1][c], p);
        for i in c + 2..n {
            let f = mul(h[i][c], piv_inv, p);
            if f == 0 {
                continue;
            }
            let (top, bottom) = h.split_at_mut(i);
            for (x, &y) in bottom[0].iter_mut().zip(&top[c + 1]) {
                *x = (*x + p - mul(f, y, p)) % p;
            }
            for row in h.iter_mut() {
                row[c + 1] = (row[c + 1] + mul(f, row[i], p)) % p;
            }
        }
    }
    // P_m = (x − h_mm) P_{m−1} − Σ_{i<m} h_im (h_{i+1,i} ⋯ h_{m,m−1}) P_{i−1}, one-based.
    let mut polys: Vec<Poly> = vec![vec![1]];
    for m in 0..n {
        let prev = &polys[m];
        let mut next = vec![0; prev.len() + 1];
        for (k, &c) in prev.iter().enumerate() {
            next[k + 1] = (next[k + 1] + c) % p;
            next[k] = (next[k] + p - mul(h[m][m], c, p)) % p;
        }
        let mut t = 1;
        for i in (0..m).rev() {
            t = mul(t, h[i + 1][i], p);
            let f = mul(h[i][m], t, p);
            if f != 0 {
                for (k, &c) in polys[i].iter().enumerate() {
                    next[k] = (next[k] + p - mul(f, c, p)) % p;
                }
            }
        }
        polys.push(trim(next));
    }
    polys.pop().expect("n + 1 polynomials")
}

/// Whether every irreducible factor of the monic `q` over F_p is linear.
fn splits(mut q: Poly, p: u64) -> bool {
    while q.len() > 1 {
        // X^p mod q by repeated squaring.
        let mut xp: Poly = vec![1];
        let mut base = rem(&[0, 1], &q, p);
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                xp = mul_mod(&xp, &base, &q, p);
            }
            base = mul_mod(&base, &base, &q, p);
            e >>= 1;
        }
        if xp.len() < 2 {
            xp.resize(2, 0);
        }
        xp[1] = (xp[1] + p - 1) % p;
        let g = gcd(q.clone(), trim(xp), p);
        if g.len() == 1 {
            return false;
        }
        q = div(&q, &g, p);
    }
    true
}

/// True only when some eigenvalue of `m` is certainly irrational: the
/// characteristic polynomial fails to split modulo a prime not dividing any
/// denominator. A rational eigenvalue `u/v` has `v` dividing the entry
/// denominators, so its reduction is a root mod such a prime.
pub fn has_irrational_eigenvalue(m: &QMatrix) -> bool {
    let n = m.rows();
    for &p in &PRIMES {
        let rows: Option<Vec<Vec<u64>>> =
            (0..n).map(|i| (0..n).map(|j| reduce(&m[(i, j)], p)).collect()).collect();
        if let Some(rows) = rows {
            return !splits(charpoly(rows, p), p);
        }
    }
    false
}
