use crate::rational::Rational;

type SparseRow = Vec<(usize, Rational)>;

/// `a − f·b` for sorted sparse rows.
fn sub_multiple(a: &SparseRow, f: &Rational, b: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ca = a.get(i).map_or(usize::MAX, |e| e.0);
        let cb = b.get(j).map_or(usize::MAX, |e| e.0);
        if ca < cb {
            out.push(a[i].clone());
            i += 1;
        } else if cb < ca {
            out.push((cb, -(f * &b[j].1)));
            j += 1;
        } else {
            let v = &a[i].1 - &(f * &b[j].1);
            if !v.is_zero() {
                out.push((ca, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn normalize(mut coeffs: SparseRow) -> SparseRow {
    coeffs.retain(|(_, x)| !x.is_zero());
    coeffs.sort_by_key(|e| e.0);
    let mut merged: SparseRow = Vec::with_capacity(coeffs.len());
    for (c, x) in coeffs {
        match merged.last_mut() {
            Some((lc, lx)) if *lc == c => *lx += x,
            _ => merged.push((c, x)),
        }
    }
    merged.retain(|(_, x)| !x.is_zero());
    merged
}

#[derive(Clone, Debug)]
struct PivotRow {
    col: usize,
    coeffs: SparseRow,
    rhs: Rational,
}

/// Solution set `particular + span(kernel)` of an affine system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSolution {
    pub particular: Vec<Rational>,
    pub kernel: Vec<Vec<Rational>>,
}

/// A certificate that `A·x = b` has no solution: multipliers `y` on a set of
/// equations with `y·A = 0` and `y·b ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Infeasibility {
    pub equations: Vec<usize>,
    pub multipliers: Vec<Rational>,
}

/// Incremental sparse Gauss–Jordan elimination over Q.
///
/// Equations are pushed one at a time; the pivot rows are kept fully reduced
/// so a new equation is reduced in a single pass.
#[derive(Clone, Debug)]
pub struct EchelonBuilder {
    ncols: usize,
    pivots: Vec<PivotRow>,
    pivot_of_col: Vec<Option<usize>>,
    equations: Vec<(SparseRow, Rational)>,
    pivot_sources: Vec<usize>,
    inconsistent: Option<usize>,
}

impl EchelonBuilder {
    pub fn new(ncols: usize) -> Self {
        EchelonBuilder {
            ncols,
            pivots: Vec::new(),
            pivot_of_col: vec![None; ncols],
            equations: Vec::new(),
            pivot_sources: Vec::new(),
            inconsistent: None,
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn num_equations(&self) -> usize {
        self.equations.len()
    }

    pub fn is_consistent(&self) -> bool {
        self.inconsistent.is_none()
    }

    fn reduce(&self, coeffs: &SparseRow, rhs: &Rational) -> (SparseRow, Rational) {
        let mut row = coeffs.clone();
        let mut rhs = rhs.clone();
        let hits: Vec<(usize, Rational)> =
            coeffs.iter().filter_map(|(c, x)| self.pivot_of_col[*c].map(|p| (p, x.clone()))).collect();
        for (p, f) in hits {
            let pr = &self.pivots[p];
            row = sub_multiple(&row, &f, &pr.coeffs);
            rhs -= &f * &pr.rhs;
        }
        (row, rhs)
    }

    /// Adds the equation `Σ coeffs = rhs`; returns its index.
    ///
    /// Panics if a column index is out of range.
    pub fn push(&mut self, coeffs: Vec<(usize, Rational)>, rhs: Rational) -> usize {
        assert!(coeffs.iter().all(|(c, _)| *c < self.ncols), "column index out of range");
        let idx = self.equations.len();
        let coeffs = normalize(coeffs);
        if self.inconsistent.is_none() {
            let (row, r) = self.reduce(&coeffs, &rhs);
            if let Some((col, lead)) = row.first().cloned() {
                let inv = lead.recip();
                let row: SparseRow = row.into_iter().map(|(c, x)| (c, x * &inv)).collect();
                let r = r * &inv;
                for other in self.pivots.iter_mut() {
                    if let Ok(pos) = other.coeffs.binary_search_by_key(&col, |e| e.0) {
                        let f = other.coeffs[pos].1.clone();
                        other.coeffs = sub_multiple(&other.coeffs, &f, &row);
                        other.rhs -= &f * &r;
                    }
                }
                self.pivot_of_col[col] = Some(self.pivots.len());
                self.pivots.push(PivotRow { col, coeffs: row, rhs: r });
                self.pivot_sources.push(idx);
            } else if !r.is_zero() {
                self.inconsistent = Some(idx);
            }
        }
        self.equations.push((coeffs, rhs));
        idx
    }

    /// Whether the homogeneous row `coeffs` lies in the span of the pushed rows.
    pub fn row_in_span(&self, coeffs: &[(usize, Rational)]) -> bool {
        let (row, _) = self.reduce(&normalize(coeffs.to_vec()), &Rational::zero());
        row.is_empty()
    }

    pub fn solve(&self) -> Result<AffineSolution, Infeasibility> {
        if let Some(bad) = self.inconsistent {
            return Err(self.certificate(bad));
        }
        let mut particular = vec![Rational::zero(); self.ncols];
        for p in &self.pivots {
            particular[p.col] = p.rhs.clone();
        }
        let free: Vec<usize> = (0..self.ncols).filter(|&c| self.pivot_of_col[c].is_none()).collect();
        let mut slot = vec![usize::MAX; self.ncols];
        for (k, &f) in free.iter().enumerate() {
            slot[f] = k;
        }
        let mut kernel: Vec<Vec<Rational>> = free
            .iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.ncols];
                v[f] = Rational::one();
                v
            })
            .collect();
        for p in &self.pivots {
            for (c, x) in &p.coeffs {
                if *c != p.col {
                    kernel[slot[*c]][p.col] = -x;
                }
            }
        }
        Ok(AffineSolution { particular, kernel })
    }

    /// Multipliers over the pivot-producing equations plus the failing one,
    /// found by solving the transposed system `yᵀA = 0, yᵀb = 1`.
    fn certificate(&self, bad: usize) -> Infeasibility {
        let mut eqs = self.pivot_sources.clone();
        eqs.push(bad);
        let mut dual = EchelonBuilder::new(eqs.len());
        let mut by_col: Vec<SparseRow> = vec![Vec::new(); self.ncols];
        for (k, &e) in eqs.iter().enumerate() {
            for (c, x) in &self.equations[e].0 {
                by_col[*c].push((k, x.clone()));
            }
        }
        for row in by_col {
            if !row.is_empty() {
                dual.push(row, Rational::zero());
            }
        }
        let rhs_row = eqs.iter().enumerate().map(|(k, &e)| (k, self.equations[e].1.clone())).collect();
        dual.push(rhs_row, Rational::one());
        let y = dual.solve().expect("an inconsistent system has a Farkas certificate").particular;
        Infeasibility { equations: eqs, multipliers: y }
    }

    /// Checks a certificate against the stored equations.
    pub fn verify_certificate(&self, cert: &Infeasibility) -> bool {
        if cert.equations.len() != cert.multipliers.len() {
            return false;
        }
        let mut combo = vec![Rational::zero(); self.ncols];
        let mut rhs = Rational::zero();
        for (&e, y) in cert.equations.iter().zip(&cert.multipliers) {
            let Some((coeffs, b)) = self.equations.get(e) else {
                return false;
            };
            for (c, x) in coeffs {
                combo[*c] += y * x;
            }
            rhs += y * b;
        }
        combo.iter().all(Rational::is_zero) && !rhs.is_zero()
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
    fn underdetermined_system() {
        let mut b = EchelonBuilder::new(3);
        b.push(vec![(0, r(1)), (1, r(1))], r(2));
        b.push(vec![(1, r(1)), (2, r(-1))], r(0));
        let sol = b.solve().unwrap();
        assert_eq!(sol.kernel.len(), 1);
        assert_eq!(sol.particular, vec![r(2), r(0), r(0)]);
        assert_eq!(sol.kernel[0], vec![r(-1), r(1), r(1)]);
    }

    #[test]
    fn inconsistent_system_has_certificate() {
        let mut b = EchelonBuilder::new(2);
        b.push(vec![(0, r(1)), (1, r(2))], r(1));
        b.push(vec![(0, r(3))], r(0));
        b.push(vec![(0, r(2)), (1, r(4))], r(3));
        let cert = b.solve().unwrap_err();
        assert!(b.verify_certificate(&cert));
        assert_eq!(cert.equations, vec![0, 1, 2]);
    }

    #[test]
    fn duplicate_columns_are_merged() {
        let mut b = EchelonBuilder::new(1);
        b.push(vec![(0, q(1, 2)), (0, q(1, 2))], r(5));
        assert_eq!(b.solve().unwrap().particular, vec![r(5)]);
    }

    proptest! {
        #[test]
        fn solutions_satisfy_equations(rows in prop::collection::vec(prop::collection::vec(-3i64..=3, 5), 1..7),
                                       rhs in prop::collection::vec(-3i64..=3, 7)) {
            let mut b = EchelonBuilder::new(5);
            for (i, row) in rows.iter().enumerate() {
                b.push(row.iter().enumerate().map(|(c, &x)| (c, r(x))).collect(), r(rhs[i]));
            }
            let eval = |x: &[Rational], row: &[i64]| -> Rational {
                row.iter().zip(x).map(|(&a, v)| r(a) * v).sum()
            };
            match b.solve() {
                Ok(sol) => {
                    for (i, row) in rows.iter().enumerate() {
                        prop_assert_eq!(eval(&sol.particular, row), r(rhs[i]));
                        for k in &sol.kernel {
                            prop_assert!(eval(k, row).is_zero());
                        }
                    }
                    prop_assert_eq!(sol.kernel.len() + b.rank(), 5);
                }
                Err(cert) => prop_assert!(b.verify_certificate(&cert)),
            }
        }
    }
}
