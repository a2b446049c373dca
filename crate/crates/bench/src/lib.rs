//! Benchmark fixtures shared by the criterion targets.

use std::sync::Arc;

use nilgrade::{catalog, Algebra, QMatrix, Rational};

/// A catalog algebra by name.
pub fn named(name: &str) -> Arc<Algebra> {
    Arc::new(catalog::by_name(name).unwrap_or_else(|| panic!("no catalog algebra {name}")))
}

/// `a` in a non-adapted basis: a fixed product of transvections and scalings,
/// so structure constants are dense but small.
pub fn sheared(a: &Algebra) -> Arc<Algebra> {
    let d = a.dim();
    let mut p = QMatrix::identity(d);
    for i in 0..d {
        p[(i, (i + 1) % d)] = Rational::new(1 + (i as i64 % 2), 2);
        if i % 3 == 0 {
            p[(i, i)] = Rational::from_int(2);
        }
    }
    Arc::new(a.base_change(&p).expect("invertible change of basis"))
}

/// `∏ (k x − j)` over `j ∈ [−n, n]` with `k = 1, 2, 3, …` cycling, which has
/// `2n + 1` rational roots.
pub fn many_root_poly(n: i64) -> nilgrade::QPoly {
    let mut p = nilgrade::QPoly::from_ints(&[1]);
    for (i, j) in (-n..=n).enumerate() {
        let k = 1 + i as i64 % 3;
        p = &p * &nilgrade::QPoly::from_ints(&[-j, k]);
    }
    p
}
