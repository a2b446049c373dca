//! Named algebras used as fixtures and examples.

use std::collections::BTreeMap;

use crate::algebra::{Algebra, AlgebraKind};
use crate::exactlin::{QMatrix, QVector, Subspace};
use crate::rational::Rational;

fn names(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

/// Lie algebra from 1-based brackets `[e_i, e_j] = c·e_k` with `i < j`.
fn lie(basis: Vec<String>, brackets: &[(usize, usize, usize, i64)]) -> Algebra {
    let entries: Vec<_> = brackets.iter().map(|&(i, j, k, c)| (i - 1, j - 1, k - 1, Rational::from_int(c))).collect();
    Algebra::from_entries(AlgebraKind::Lie, basis, &entries).expect("catalog entries are in range")
}

fn general(basis: Vec<String>, products: &[(usize, usize, usize, i64)]) -> Algebra {
    let entries: Vec<_> = products.iter().map(|&(i, j, k, c)| (i - 1, j - 1, k - 1, Rational::from_int(c))).collect();
    Algebra::from_entries(AlgebraKind::General, basis, &entries).expect("catalog entries are in range")
}

/// Heisenberg algebra: `[X1, X2] = X3`.
pub fn heisenberg3() -> Algebra {
    lie(Algebra::default_names(3), &[(1, 2, 3, 1)])
}

/// `[X1, X2] = X3`, `[X1, X3] = X4`, with `X5` central and not a bracket.
pub fn l53() -> Algebra {
    lie(Algebra::default_names(5), &[(1, 2, 3, 1), (1, 3, 4, 1)])
}

/// The algebra of [`l53`], used as the prescribed-complement example.
pub fn remdl5() -> Algebra {
    l53()
}

/// `[X1, X3] = X4`, `[X1, X4] = X5`, `[X2, X3] = X5`.
pub fn l55() -> Algebra {
    lie(Algebra::default_names(5), &[(1, 3, 4, 1), (1, 4, 5, 1), (2, 3, 5, 1)])
}

/// `[X1, Xi] = X(i+1)` for `i = 2, 3, 4` and `[X2, X3] = X5`.
pub fn l56() -> Algebra {
    lie(Algebra::default_names(5), &[(1, 2, 3, 1), (1, 3, 4, 1), (1, 4, 5, 1), (2, 3, 5, 1)])
}

/// `[X1, Xi] = X(i+1)` for `i = 2, 3, 4`.
pub fn l57() -> Algebra {
    lie(Algebra::default_names(5), &[(1, 2, 3, 1), (1, 3, 4, 1), (1, 4, 5, 1)])
}

/// Commutative associative algebra `x² = z`, `xz = zx = w`, `y² = w`.
pub fn assoc4() -> Algebra {
    general(names(&["x", "y", "z", "w"]), &[(1, 1, 3, 1), (1, 3, 4, 1), (3, 1, 4, 1), (2, 2, 4, 1)])
}

/// `x1² = x2`, `x1x2 = x3`, `x1x3 = x4`, `x2x1 = x4`: all derivations nilpotent.
pub fn nilder4() -> Algebra {
    general(names(&["x1", "x2", "x3", "x4"]), &[(1, 1, 2, 1), (1, 2, 3, 1), (1, 3, 4, 1), (2, 1, 4, 1)])
}

/// The twelve-dimensional bracket table with basis `x±1 … x±5, y±1`:
/// `[x_j, x_k] = x_{j+k}` for `jk > 0`, `|j| < |k|`, `|j + k| ≤ 5`, and
/// `[x_j, x_{−j−1}] = y_{−1}`, `[x_{−j}, x_{j+1}] = y_1` for `j = 1, 2`.
///
/// This table is not a Lie algebra: the Jacobi identity fails on
/// `(x1, x2, x−2)`, since `[x−2, [x1, x2]] = y1` and the other two terms
/// vanish. It is kept so the failure stays visible; [`g16`] is the valid
/// algebra with the intended torus properties.
pub fn g12_table() -> Algebra {
    // Positions: x1..x5 → 0..4, x-1..x-5 → 5..9, y1 → 10, y-1 → 11.
    let pos = |j: i64| -> usize {
        if j > 0 {
            (j - 1) as usize
        } else {
            (4 - j) as usize
        }
    };
    let mut entries = Vec::new();
    for j in -5i64..=5 {
        for k in -5i64..=5 {
            if j * k > 0 && j.abs() < k.abs() && (j + k).abs() <= 5 {
                entries.push((pos(j), pos(k), pos(j + k), Rational::one()));
            }
        }
    }
    for j in 1..=2 {
        entries.push((pos(j), pos(-j - 1), 11, Rational::one()));
        entries.push((pos(-j), pos(j + 1), 10, Rational::one()));
    }
    let basis = names(&["x1", "x2", "x3", "x4", "x5", "x-1", "x-2", "x-3", "x-4", "x-5", "y1", "y-1"]);
    Algebra::from_entries(AlgebraKind::Lie, basis, &entries).expect("in range")
}

/// Positive half of [`g16`]: generators `x1, x2, x3` and
/// `[x1, x_k] = x_{k+1}` for `3 ≤ k ≤ 6`, `[x2, x3] = x5`, `[x2, x4] = x6`,
/// `[x2, x5] = x7`, `[x3, x4] = x7`.
const G16_HALF: [(i64, i64, i64); 8] = [(1, 3, 4), (1, 4, 5), (1, 5, 6), (1, 6, 7), (2, 3, 5), (2, 4, 6), (2, 5, 7), (3, 4, 7)];

/// Sixteen-dimensional algebra with basis `x±1 … x±7, y±1`, graded by the
/// indices, whose only split torus of derivations is the index torus.
///
/// Each half `x1 … x7` and `x−1 … x−7` is a copy of the same positively
/// graded algebra (see `G16_HALF`), and the central elements are
/// `y1 = [x2, x−1] = [x3, x−2]` and `y−1 = [x−2, x1] = [x−3, x2]`. The two
/// ways of reaching each `y` force the scalings of the two halves to be
/// opposite.
pub fn g16() -> Algebra {
    let pos = |j: i64| -> usize {
        if j > 0 {
            (j - 1) as usize
        } else {
            (6 - j) as usize
        }
    };
    let (y1, ym1) = (14, 15);
    let mut entries = Vec::new();
    for (a, b, c) in G16_HALF {
        entries.push((pos(a), pos(b), pos(c), Rational::one()));
        entries.push((pos(-a), pos(-b), pos(-c), Rational::one()));
    }
    entries.push((pos(2), pos(-1), y1, Rational::one()));
    entries.push((pos(3), pos(-2), y1, Rational::one()));
    entries.push((pos(-2), pos(1), ym1, Rational::one()));
    entries.push((pos(-3), pos(2), ym1, Rational::one()));
    let mut basis: Vec<String> = (1..=7).map(|j| format!("x{j}")).collect();
    basis.extend((1..=7).map(|j| format!("x-{j}")));
    basis.extend(["y1".to_string(), "y-1".to_string()]);
    Algebra::from_entries(AlgebraKind::Lie, basis, &entries).expect("in range")
}

/// Rational form of a Lie algebra with an involutive automorphism `σ`
/// swapping basis vectors in pairs, twisted by `σ` and complex conjugation.
///
/// `pairs` lists `(u, σu)` index pairs covering the basis; the new basis is
/// `M = u + σu`, `N = i(u − σu)` for each pair, `M`s first. Over a field
/// containing `i` the result is isomorphic to the input.
pub fn twisted_form(a: &Algebra, pairs: &[(usize, usize)], m_names: &[&str], n_names: &[&str]) -> Algebra {
    let d = a.dim();
    let p = pairs.len();
    assert_eq!(2 * p, d);
    // Split a vector Σ αₖuₖ + βₖσuₖ into (α + β) and (α − β).
    let split = |v: &[Rational]| -> (Vec<Rational>, Vec<Rational>) {
        pairs.iter().map(|&(u, s)| (&v[u] + &v[s], &v[u] - &v[s])).unzip()
    };
    let mut entries = Vec::new();
    let mut push = |i: usize, j: usize, m_part: Vec<Rational>, n_part: Vec<Rational>| {
        for (k, c) in m_part.into_iter().enumerate() {
            if !c.is_zero() {
                entries.push((i, j, k, c));
            }
        }
        for (k, c) in n_part.into_iter().enumerate() {
            if !c.is_zero() {
                entries.push((i, j, p + k, c));
            }
        }
    };
    for (ia, &(ua, _)) in pairs.iter().enumerate() {
        for (ib, &(ub, sb)) in pairs.iter().enumerate() {
            let x = a.multiply(&a.basis_vector(ua), &a.basis_vector(ub));
            let w = a.multiply(&a.basis_vector(ua), &a.basis_vector(sb));
            let (xm, xn) = split(&x);
            let (wm, wn) = split(&w);
            // [M,M] = M(X) + M(W); [M,N] = N(X) − N(W); [N,M] = N(X) + N(W); [N,N] = −M(X) + M(W).
            push(ia, ib, xm.iter().zip(&wm).map(|(a, b)| a + b).collect(), vec![Rational::zero(); p]);
            push(ia, p + ib, vec![Rational::zero(); p], xn.iter().zip(&wn).map(|(a, b)| a - b).collect());
            push(p + ia, ib, vec![Rational::zero(); p], xn.iter().zip(&wn).map(|(a, b)| a + b).collect());
            push(p + ia, p + ib, xm.iter().zip(&wm).map(|(a, b)| b - a).collect(), vec![Rational::zero(); p]);
        }
    }
    let mut basis: Vec<String> = m_names.iter().map(|s| s.to_string()).collect();
    basis.extend(n_names.iter().map(|s| s.to_string()));
    Algebra::from_entries(AlgebraKind::General, basis, &entries)
        .map(|g| Algebra::from_dense(AlgebraKind::Lie, g.names().to_vec(), &g.dense()))
        .expect("in range")
}

/// The twisted rational form of [`g16`] with basis `M1 … M7, Y, N1 … N7, Z`,
/// where `Mj = xj + x−j`, `Nj = i(xj − x−j)`, `Y = y1 + y−1`, `Z = i(y1 − y−1)`.
pub fn h16() -> Algebra {
    let mut pairs: Vec<(usize, usize)> = (0..7).map(|j| (j, j + 7)).collect();
    pairs.push((14, 15));
    twisted_form(
        &g16(),
        &pairs,
        &["M1", "M2", "M3", "M4", "M5", "M6", "M7", "Y"],
        &["N1", "N2", "N3", "N4", "N5", "N6", "N7", "Z"],
    )
}

/// The rational form obtained from [`g12_table`] by the same twist; it
/// reproduces the `M, N, Y, Z` brackets and inherits the Jacobi failure.
pub fn h12_table() -> Algebra {
    let mut pairs: Vec<(usize, usize)> = (0..5).map(|j| (j, j + 5)).collect();
    pairs.push((10, 11));
    twisted_form(
        &g12_table(),
        &pairs,
        &["M1", "M2", "M3", "M4", "M5", "Y"],
        &["N1", "N2", "N3", "N4", "N5", "Z"],
    )
}

/// Seven-dimensional algebra with basis `Z1, A2, A3, A4, B5, B6, C7`.
pub fn g7102() -> Algebra {
    lie(
        names(&["Z1", "A2", "A3", "A4", "B5", "B6", "C7"]),
        &[(1, 2, 3, 1), (1, 3, 4, 1), (2, 3, 5, 1), (1, 5, 6, 1), (2, 4, 6, 1), (2, 5, 7, 1), (2, 6, 7, 1), (3, 5, 7, -1)],
    )
}

/// A seven-dimensional characteristically nilpotent Lie algebra:
/// `[X1, Xi] = X(i+1)` for `2 ≤ i ≤ 6`, `[X2, X3] = X5 + X6`, `[X2, X4] = X6 + X7`,
/// and `[X2, X5] = X7`.
pub fn charnil7() -> Algebra {
    lie(
        Algebra::default_names(7),
        &[
            (1, 2, 3, 1),
            (1, 3, 4, 1),
            (1, 4, 5, 1),
            (1, 5, 6, 1),
            (1, 6, 7, 1),
            (2, 3, 5, 1),
            (2, 3, 6, 1),
            (2, 4, 6, 1),
            (2, 4, 7, 1),
            (2, 5, 7, 1),
        ],
    )
}

/// Free nilpotent Lie algebra on `r` generators of class `c`.
///
/// Realized inside the free associative algebra truncated above degree `c`:
/// the basis is chosen degree by degree among right-normed brackets
/// `[x_a, b]`, and products are expressed back in that basis.
pub fn free_nilpotent(r: usize, c: usize) -> Algebra {
    assert!(r >= 1 && c >= 1);
    type Poly = BTreeMap<Vec<u8>, Rational>;
    let bracket = |u: &Poly, v: &Poly| -> Poly {
        let mut out = Poly::new();
        for (wu, a) in u {
            for (wv, b) in v {
                if wu.len() + wv.len() > c {
                    continue;
                }
                let ab = a * b;
                let mut uv = wu.clone();
                uv.extend(wv);
                *out.entry(uv).or_insert_with(Rational::zero) += &ab;
                let mut vu = wv.clone();
                vu.extend(wu);
                *out.entry(vu).or_insert_with(Rational::zero) -= &ab;
            }
        }
        out.retain(|_, x| !x.is_zero());
        out
    };
    // Words of each degree, for coordinates.
    let mut words_by_deg: Vec<Vec<Vec<u8>>> = vec![Vec::new(), (0..r as u8).map(|a| vec![a]).collect()];
    for d in 2..=c {
        let next = words_by_deg[d - 1].iter().flat_map(|w| (0..r as u8).map(move |a| [w.clone(), vec![a]].concat())).collect();
        words_by_deg.push(next);
    }
    let coords = |p: &Poly, d: usize| -> QVector {
        words_by_deg[d].iter().map(|w| p.get(w).cloned().unwrap_or_else(Rational::zero)).collect()
    };
    let gens: Vec<Poly> = (0..r as u8).map(|a| Poly::from([(vec![a], Rational::one())])).collect();
    let mut basis: Vec<(usize, Poly, String)> =
        gens.iter().enumerate().map(|(a, g)| (1, g.clone(), format!("x{}", a + 1))).collect();
    for (d, words) in words_by_deg.iter().enumerate().take(c + 1).skip(2) {
        let prev: Vec<(Poly, String)> =
            basis.iter().filter(|(deg, _, _)| *deg == d - 1).map(|(_, p, n)| (p.clone(), n.clone())).collect();
        let mut span = Subspace::zero(words.len());
        for (a, g) in gens.iter().enumerate() {
            for (b, bn) in &prev {
                let p = bracket(g, b);
                let v = coords(&p, d);
                if !span.contains(&v) {
                    span = span.sum(&Subspace::from_vectors(v.len(), vec![v]));
                    basis.push((d, p, format!("[x{},{}]", a + 1, bn)));
                }
            }
        }
    }
    let dim = basis.len();
    // Per degree: matrix whose columns are the basis elements' coordinates.
    let mut solvers: Vec<Option<(Vec<usize>, QMatrix)>> = vec![None];
    for (d, words) in words_by_deg.iter().enumerate().take(c + 1).skip(1) {
        let idx: Vec<usize> = (0..dim).filter(|&i| basis[i].0 == d).collect();
        let cols: Vec<QVector> = idx.iter().map(|&i| coords(&basis[i].1, d)).collect();
        let m = QMatrix::from_columns(&cols, words.len());
        solvers.push(Some((idx, m)));
    }
    let mut entries = Vec::new();
    for i in 0..dim {
        for j in i + 1..dim {
            let d = basis[i].0 + basis[j].0;
            if d > c {
                continue;
            }
            let p = bracket(&basis[i].1, &basis[j].1);
            if p.is_empty() {
                continue;
            }
            let (idx, m) = solvers[d].as_ref().unwrap();
            let sol = m.solve_affine(&coords(&p, d)).expect("brackets lie in the Lie span");
            for (t, x) in sol.particular.into_iter().enumerate() {
                if !x.is_zero() {
                    entries.push((i, j, idx[t], x));
                }
            }
        }
    }
    let names = basis.into_iter().map(|(_, _, n)| n).collect();
    Algebra::from_entries(AlgebraKind::Lie, names, &entries).expect("in range")
}

/// All named fixtures, in catalog order.
pub fn all() -> Vec<(&'static str, Algebra)> {
    vec![
        ("heisenberg3", heisenberg3()),
        ("l53", l53()),
        ("l55", l55()),
        ("l56", l56()),
        ("l57", l57()),
        ("remdl5", remdl5()),
        ("assoc4", assoc4()),
        ("nilder4", nilder4()),
        ("g16", g16()),
        ("h16", h16()),
        ("g7102", g7102()),
        ("charnil7", charnil7()),
        ("freenil23", free_nilpotent(2, 3)),
    ]
}

pub fn by_name(name: &str) -> Option<Algebra> {
    all().into_iter().find(|(n, _)| *n == name).map(|(_, a)| a)
}
