use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exactlin::matrix::QMatrix;
use crate::rational::{lcm_denominators, Rational};

/// Univariate polynomial over Q, coefficients from the constant term up.
///
/// Trailing zero coefficients are never stored, so the zero polynomial has
/// an empty coefficient list.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QPoly {
    coeffs: Vec<Rational>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Rational::is_zero) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Rational::from_int(c)).collect())
    }

    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// `X − a`.
    pub fn linear_root(a: &Rational) -> Self {
        Self::new(vec![-a, Rational::one()])
    }

    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(Rational::is_one)
    }

    pub fn monic(&self) -> QPoly {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        self.scale(&self.leading().recip())
    }

    pub fn scale(&self, s: &Rational) -> QPoly {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn derivative(&self) -> QPoly {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c * &Rational::from(k)).collect())
    }

    pub fn pow(&self, e: u32) -> QPoly {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &QPoly) -> (QPoly, QPoly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead_inv = d.leading().recip();
        let mut rem = self.coeffs.clone();
        let n = self.coeffs.len();
        if n <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); n - dd];
        for k in (dd..n).rev() {
            let c = &rem[k] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                if !dc.is_zero() {
                    let v = &rem[k - dd + j] - &(&c * dc);
                    rem[k - dd + j] = v;
                }
            }
            quot[k - dd] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    pub fn rem(&self, d: &QPoly) -> QPoly {
        self.div_rem(d).1
    }

    /// `self / d` when the division is exact.
    pub fn div_exact(&self, d: &QPoly) -> Option<QPoly> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, other: &QPoly) -> QPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Product of the distinct monic irreducible factors: `p / gcd(p, p')`.
    pub fn squarefree_part(&self) -> QPoly {
        if self.degree().unwrap_or(0) == 0 {
            return Self::one();
        }
        let g = self.gcd(&self.derivative());
        self.div_exact(&g).expect("gcd divides").monic()
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree() == Some(0)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = &acc * x + c;
        }
        acc
    }

    /// Horner evaluation at a square matrix.
    pub fn eval_matrix(&self, m: &QMatrix) -> QMatrix {
        let n = m.rows();
        let mut acc = QMatrix::zeros(n, n);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(m).add(&QMatrix::scalar(n, c));
        }
        acc
    }

    /// Companion matrix of the monic normalization: ones below the diagonal,
    /// last column `−c₀, …, −c_{n−1}`.
    pub fn companion(&self) -> QMatrix {
        let p = self.monic();
        let n = p.degree().expect("companion of the zero polynomial");
        let mut m = QMatrix::zeros(n, n);
        for i in 1..n {
            m[(i, i - 1)] = Rational::one();
        }
        for i in 0..n {
            m[(i, n - 1)] = -&p.coeffs[i];
        }
        m
    }

    pub fn has_integer_coefficients(&self) -> bool {
        self.coeffs.iter().all(Rational::is_integer)
    }

    /// Primitive integer polynomial with positive leading coefficient that
    /// is a rational multiple of `self`.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        let l = lcm_denominators(&self.coeffs);
        let mut ints: Vec<BigInt> = self.coeffs.iter().map(|c| c.numer() * (&l / c.denom())).collect();
        let content = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        if !content.is_zero() {
            for x in ints.iter_mut() {
                *x = &*x / &content;
            }
        }
        if ints.last().is_some_and(|x| x.is_negative()) {
            for x in ints.iter_mut() {
                *x = -&*x;
            }
        }
        ints
    }

    pub fn from_bigints(coeffs: &[BigInt]) -> Self {
        Self::new(coeffs.iter().map(Rational::from).collect())
    }

    /// Distinct rational roots in increasing order.
    ///
    /// Real roots of the primitive integer squarefree part are isolated with
    /// Descartes' rule of signs on dyadic intervals. An isolating interval is
    /// then bisected until it holds at most one fraction `k/a`, with `a` the
    /// leading coefficient, and that fraction is tested exactly.
    pub fn rational_roots(&self) -> Vec<Rational> {
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let mut p = self.squarefree_part();
        let mut roots = Vec::new();
        if p.coeff(0).is_zero() {
            roots.push(Rational::zero());
            p = p.div_exact(&Self::from_ints(&[0, 1])).expect("X divides");
        }
        if p.degree().unwrap_or(0) > 0 {
            let a = p.primitive_integer();
            roots.extend(positive_rational_roots(&a));
            let reflected: Vec<BigInt> =
                a.iter().enumerate().map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() }).collect();
            roots.extend(positive_rational_roots(&reflected).into_iter().map(|r| -r));
        }
        roots.sort();
        roots
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(Rational::to_f64).collect()
    }
}

/// Coefficients of `p(x + 1)`.
fn taylor_shift_one(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let n = v.len().saturating_sub(1);
    for i in 0..n {
        for j in (i..n).rev() {
            let next = v[j + 1].clone();
            v[j] += next;
        }
    }
    v
}

/// Sign changes of `(x + 1)ⁿ q(1/(x + 1))`, an upper bound for the number of
/// roots of `q` in `(0, 1)` that is exact when it is 0 or 1.
fn descartes_bound(q: &[BigInt]) -> usize {
    let reversed: Vec<BigInt> = q.iter().rev().cloned().collect();
    let mut last = 0;
    let mut count = 0;
    for c in taylor_shift_one(reversed) {
        let s = c.signum();
        if !s.is_zero() {
            let s = if s.is_positive() { 1 } else { -1 };
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// Quotient of `q` by `x − 1`, assuming `q(1) = 0`.
fn deflate_at_one(q: &[BigInt]) -> Vec<BigInt> {
    let n = q.len() - 1;
    let mut out = vec![BigInt::zero(); n];
    let mut acc = BigInt::zero();
    for i in (1..=n).rev() {
        acc += &q[i];
        out[i - 1] = acc.clone();
    }
    out
}

/// Positive rational roots of a squarefree integer polynomial with nonzero
/// constant term.
fn positive_rational_roots(a: &[BigInt]) -> Vec<Rational> {
    let n = a.len() - 1;
    let lead = a[n].abs();
    let max_lower: BigInt = a[..n].iter().map(|c| c.abs()).max().unwrap_or_default();
    // 2^k exceeds the Cauchy bound 1 + max|aᵢ|/|aₙ|.
    let mut k = (max_lower.bits() as usize).saturating_sub(lead.bits() as usize);
    while (&lead << k) <= &max_lower + &lead {
        k += 1;
    }
    let p = QPoly::from_bigints(a);
    let lead_q = Rational::from(&lead);
    let scale = |c: &BigInt, h: usize| Rational::from_big_ratio(c << k, BigInt::one() << h);
    // q(t) = p(2^k (c + t) / 2^h) up to a positive factor, t in (0, 1).
    let top: Vec<BigInt> = a.iter().enumerate().map(|(i, c)| c << (k * i)).collect();
    let mut stack: Vec<(Vec<BigInt>, BigInt, usize)> = vec![(top, BigInt::zero(), 0)];
    let mut out = Vec::new();
    while let Some((q, c, h)) = stack.pop() {
        match descartes_bound(&q) {
            0 => {}
            1 => {
                if let Some(r) = rational_root_in(&p, &lead_q, scale(&c, h), scale(&(&c + BigInt::one()), h)) {
                    out.push(r);
                }
            }
            _ => {
                let m = q.len() - 1;
                let mut left: Vec<BigInt> = q.iter().enumerate().map(|(i, x)| x << (m - i)).collect();
                let c2: BigInt = &c * 2;
                let mid_is_root = left.iter().sum::<BigInt>().is_zero();
                let mut right = taylor_shift_one(left.clone());
                if mid_is_root {
                    out.push(scale(&(&c2 + BigInt::one()), h + 1));
                    left = deflate_at_one(&left);
                    right.remove(0);
                }
                stack.push((left, c2.clone(), h + 1));
                stack.push((right, c2 + BigInt::one(), h + 1));
            }
        }
    }
    out
}

/// The rational root of `p` with denominator dividing `lead` inside the open
/// interval `(lo, hi)`, which isolates a simple root. The ends may be roots
/// already found, so the sign just right of `lo` comes from `p'` there.
fn rational_root_in(p: &QPoly, lead: &Rational, mut lo: Rational, mut hi: Rational) -> Option<Rational> {
    let s_lo = match p.eval(&lo).signum() {
        0 => p.derivative().eval(&lo).signum(),
        s => s,
    };
    loop {
        let first = (&lo * lead).floor() + 1;
        let last = (&hi * lead).ceil() - 1;
        if first > last {
            return None;
        }
        if first == last {
            let x = Rational::from(&first) / lead;
            return p.eval(&x).is_zero().then_some(x);
        }
        let mid = (&lo + &hi) / Rational::from_int(2);
        let s = p.eval(&mid).signum();
        if s == 0 {
            return Some(mid);
        }
        if s == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

impl Add for &QPoly {
    type Output = QPoly;
    fn add(self, o: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        QPoly::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }
}

impl Sub for &QPoly {
    type Output = QPoly;
    fn sub(self, o: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        QPoly::new((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }
}

impl Mul for &QPoly {
    type Output = QPoly;
    fn mul(self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        QPoly::new(out)
    }
}

impl Neg for QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        QPoly::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let show_coeff = k == 0 || !a.is_one();
            if show_coeff {
                if a.is_integer() || k == 0 {
                    write!(f, "{a}")?;
                } else {
                    write!(f, "({a})")?;
                }
            }
            match k {
                0 => {}
                1 => write!(f, "X")?,
                _ => write!(f, "X^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QPoly({self})")
    }
}

impl serde::Serialize for QPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
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
    fn division_and_gcd() {
        let a = QPoly::from_ints(&[-1, 0, 1]); // X² − 1
        let b = QPoly::from_ints(&[1, 1]); // X + 1
        assert_eq!(a.div_exact(&b), Some(QPoly::from_ints(&[-1, 1])));
        assert_eq!(a.gcd(&QPoly::from_ints(&[2, 2])), b);
        let (quo, rem) = QPoly::from_ints(&[1, 0, 0, 2]).div_rem(&QPoly::from_ints(&[0, 2]));
        assert_eq!(quo, QPoly::from_ints(&[0, 0, 1]));
        assert_eq!(rem, QPoly::from_ints(&[1]));
    }

    #[test]
    fn squarefree_part_removes_repeats() {
        let p = &QPoly::from_ints(&[-1, 1]).pow(3) * &QPoly::from_ints(&[2, 0, 1]);
        assert_eq!(p.squarefree_part(), &QPoly::from_ints(&[-1, 1]) * &QPoly::from_ints(&[2, 0, 1]));
        assert!(!p.is_squarefree());
    }

    #[test]
    fn rational_roots_examples() {
        // (2X − 1)(X + 3)(X² + 1) X
        let p = &(&(&QPoly::from_ints(&[-1, 2]) * &QPoly::from_ints(&[3, 1])) * &QPoly::from_ints(&[1, 0, 1]))
            * &QPoly::from_ints(&[0, 1]);
        assert_eq!(p.rational_roots(), vec![r(-3), r(0), q(1, 2)]);
        assert!(QPoly::from_ints(&[-2, 0, 1]).rational_roots().is_empty());
        assert!(QPoly::from_ints(&[4, -6, 1]).rational_roots().is_empty());
        assert_eq!(QPoly::new(vec![q(-2, 3), r(1)]).rational_roots(), vec![q(2, 3)]);
    }

    #[test]
    fn companion_and_display() {
        let p = QPoly::new(vec![r(1), q(1, 2), r(1)]);
        let c = p.companion();
        assert!(p.eval_matrix(&c).is_zero());
        assert_eq!(p.to_string(), "X^2 + (1/2)X + 1");
        assert_eq!(QPoly::from_ints(&[0, -1, 0, 3]).to_string(), "3X^3 - X");
    }

    proptest! {
        #[test]
        fn roots_of_products_of_linear_factors(roots in prop::collection::vec((-20i64..=20, 1i64..=6), 1..6),
                                               extra in 1i64..=5) {
            let mut p = QPoly::from_ints(&[extra, 0, 1]);
            let mut expected: Vec<Rational> = Vec::new();
            for (n, d) in &roots {
                let a = q(*n, *d);
                p = &p * &QPoly::linear_root(&a);
                expected.push(a);
            }
            expected.sort();
            expected.dedup();
            prop_assert_eq!(p.rational_roots(), expected);
        }

        #[test]
        fn div_rem_identity(a in prop::collection::vec(-5i64..=5, 0..7), b in prop::collection::vec(-5i64..=5, 1..5)) {
            let a = QPoly::from_ints(&a);
            let b = QPoly::from_ints(&b);
            prop_assume!(!b.is_zero());
            let (quo, rem) = a.div_rem(&b);
            prop_assert_eq!(&(&quo * &b) + &rem, a);
            prop_assert!(rem.degree().is_none_or(|d| d < b.degree().unwrap()));
        }
    }
}
