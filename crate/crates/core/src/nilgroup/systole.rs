//! Guivarc'h quasi-lengths, exact systoles by box enumeration, and the
//! dilation experiment.

use std::cmp::Ordering;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use crate::cohopf::lattice_meet_subspace;
use crate::error::{Error, Result};
use crate::exactlin::{QMatrix, QVector, Subspace, ZLattice};
use crate::grading::Grading;
use crate::rational::Rational;

use super::dilation;

pub const DEFAULT_ENUM_BUDGET: u64 = 10_000_000;

/// A value `ℓ ≥ 0` stored exactly as `ℓ^power`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiLength {
    pub power: u32,
    pub raised: Rational,
}

impl QuasiLength {
    pub fn zero(power: u32) -> Self {
        QuasiLength { power, raised: Rational::zero() }
    }

    pub fn to_f64(&self) -> f64 {
        self.raised.to_f64().powf(1.0 / self.power as f64)
    }

    /// `t·ℓ`, as `t^power · ℓ^power`.
    pub fn scaled(&self, t: &Rational) -> QuasiLength {
        QuasiLength { power: self.power, raised: &self.raised * &t.pow(self.power as i32) }
    }
}

impl Ord for QuasiLength {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.power == other.power {
            return self.raised.cmp(&other.raised);
        }
        self.raised.pow(other.power as i32).cmp(&other.raised.pow(self.power as i32))
    }
}

impl PartialOrd for QuasiLength {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Serialize for QuasiLength {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("QuasiLength", 3)?;
        st.serialize_field("power", &self.power)?;
        st.serialize_field("raised", &self.raised)?;
        st.serialize_field("approx", &self.to_f64())?;
        st.end()
    }
}

/// Basis adapted to a positive grading in Z, with the degree of each column.
#[derive(Clone, Debug)]
pub struct GradedFrame {
    pub p: QMatrix,
    pub p_inv: QMatrix,
    pub degrees: Vec<u32>,
    /// Least common multiple of the degrees.
    pub power: u32,
}

impl GradedFrame {
    pub fn new(gr: &Grading) -> Result<GradedFrame> {
        if gr.rank() != 1 || gr.weights().iter().any(|w| w[0] <= 0) {
            return Err(Error::BadGrading("quasi-lengths need a positive grading in Z".into()));
        }
        let (p, ws) = gr.adapted_basis();
        let degrees: Vec<u32> = ws.iter().map(|w| w[0] as u32).collect();
        let power = degrees.iter().fold(1u32, |acc, &d| acc.lcm(&d));
        let p_inv = p.inverse().expect("adapted basis");
        Ok(GradedFrame { p, p_inv, degrees, power })
    }

    /// `ℓ` from sup-norms `mᵢ` of the degree-`i` blocks: `max mᵢ^{1/i}`.
    fn length_from_blocks(&self, coords: &[Rational]) -> QuasiLength {
        let mut best = Rational::zero();
        let max_deg = *self.degrees.iter().max().unwrap_or(&1);
        for i in 1..=max_deg {
            let m = coords
                .iter()
                .zip(&self.degrees)
                .filter(|(_, &d)| d == i)
                .map(|(x, _)| x.abs())
                .max()
                .unwrap_or_else(Rational::zero);
            let r = m.pow((self.power / i) as i32);
            if r > best {
                best = r;
            }
        }
        QuasiLength { power: self.power, raised: best }
    }
}

/// `ℓ(x) = max_i ‖x_i‖^{1/i}` with the sup-norm on each component.
pub fn guivarch_length(frame: &GradedFrame, x: &[Rational]) -> QuasiLength {
    frame.length_from_blocks(&frame.p_inv.mul_vec(x))
}

#[derive(Clone, Debug, Serialize)]
pub struct SystoleResult {
    /// `None` when the box holds no nonzero lattice point.
    pub length: Option<QuasiLength>,
    pub witness: Option<QVector>,
    pub visited: u64,
}

struct Enumerator<'a> {
    rows: Vec<Vec<i128>>,
    bounds: Vec<i128>,
    budget: u64,
    visited: &'a AtomicU64,
}

type Best<K> = Option<(K, Vec<i128>)>;

fn better<K: Ord>(a: Best<K>, b: Best<K>) -> Best<K> {
    match (a, b) {
        (None, b) => b,
        (a, None) => a,
        (Some(a), Some(b)) => {
            if (&b.0, &b.1) < (&a.0, &a.1) {
                Some(b)
            } else {
                Some(a)
            }
        }
    }
}

impl Enumerator<'_> {
    /// Ranges of `c` with `|acc + c·h| ≤ bound`.
    fn range(&self, level: usize, acc: &[i128]) -> (i128, i128) {
        let h = self.rows[level][level];
        let (b, s) = (self.bounds[level], acc[level]);
        (Integer::div_ceil(&(-b - s), &h), Integer::div_floor(&(b - s), &h))
    }

    fn descend<K: Ord + Send, F: Fn(&[i128]) -> K + Sync>(&self, level: usize, acc: Vec<i128>, key: &F) -> Result<Best<K>> {
        if self.visited.fetch_add(1, AtomicOrdering::Relaxed) >= self.budget {
            return Err(Error::BoxTooLarge { budget: self.budget });
        }
        let d = self.rows.len();
        if level == d {
            if acc.iter().all(|&x| x == 0) {
                return Ok(None);
            }
            return Ok(Some((key(&acc), acc)));
        }
        let (lo, hi) = self.range(level, &acc);
        let mut best = None;
        for c in lo..=hi {
            let next = self.step(level, &acc, c);
            best = better(best, self.descend(level + 1, next, key)?);
        }
        Ok(best)
    }

    fn step(&self, level: usize, acc: &[i128], c: i128) -> Vec<i128> {
        let mut next = acc.to_vec();
        for (x, h) in next.iter_mut().zip(&self.rows[level]).skip(level) {
            *x += c * h;
        }
        next
    }
}

/// Minimum of `key` over nonzero points `v` of a full lattice with
/// `|v_j| ≤ bounds_j`, visiting at most `budget` enumeration nodes. Keys
/// receive the integer numerators over the lattice's denominator scale.
pub fn minimize_in_box<K, F>(lattice: &ZLattice, bounds: &[Rational], budget: u64, key: F) -> Result<(Best<K>, u64)>
where
    K: Ord + Send,
    F: Fn(&[i128]) -> K + Sync,
{
    let d = lattice.ambient_dim();
    if !lattice.is_full() {
        return Err(Error::NotSublattice);
    }
    let scale = Rational::from(lattice.denominator_scale());
    let too_large = || Error::BoxTooLarge { budget };
    let rows: Vec<Vec<i128>> = lattice
        .integer_basis()
        .iter()
        .map(|r| r.iter().map(|x| x.to_i128().ok_or_else(too_large)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let bounds: Vec<i128> =
        bounds.iter().map(|b| (b * &scale).floor().to_i128().ok_or_else(too_large)).collect::<Result<_>>()?;
    let visited = AtomicU64::new(0);
    let en = Enumerator { rows, bounds, budget, visited: &visited };
    if d == 0 {
        return Ok((None, 0));
    }
    let zero = vec![0i128; d];
    let (lo, hi) = en.range(0, &zero);
    let results: Vec<Result<Best<K>>> =
        (lo..=hi).into_par_iter().map(|c| en.descend(1, en.step(0, &zero, c), &key)).collect();
    let mut best = None;
    for r in results {
        best = better(best, r?);
    }
    Ok((best, visited.load(AtomicOrdering::Relaxed)))
}

/// Shortest nonzero point of `Λ` in the box `ℓ ≤ radius`.
pub fn systole_estimate(frame: &GradedFrame, lattice: &ZLattice, radius: &Rational, budget: u64) -> Result<SystoleResult> {
    let adapted = lattice.image(&frame.p_inv);
    let scale = Rational::from(adapted.denominator_scale());
    let bounds: Vec<Rational> = frame.degrees.iter().map(|&i| radius.pow(i as i32)).collect();
    let key = |v: &[i128]| {
        let coords: Vec<Rational> = v.iter().map(|&x| Rational::from(BigInt::from(x)) / &scale).collect();
        frame.length_from_blocks(&coords)
    };
    let (best, visited) = minimize_in_box(&adapted, &bounds, budget, key)?;
    Ok(match best {
        None => SystoleResult { length: None, witness: None, visited },
        Some((len, v)) => {
            let coords: Vec<Rational> = v.iter().map(|&x| Rational::from(BigInt::from(x)) / &scale).collect();
            SystoleResult { length: Some(len), witness: Some(frame.p.mul_vec(&coords)), visited }
        }
    })
}

/// The systole, doubling the radius from 1 until the box is nonempty.
pub fn systole(frame: &GradedFrame, lattice: &ZLattice, budget: u64) -> Result<SystoleResult> {
    let mut radius = Rational::one();
    let mut spent = 0u64;
    loop {
        let r = systole_estimate(frame, lattice, &radius, budget.saturating_sub(spent))?;
        spent += r.visited;
        if r.length.is_some() {
            return Ok(SystoleResult { visited: spent, ..r });
        }
        radius = &radius * &Rational::from_int(2);
    }
}

/// `min_g ‖g_{i(g)}‖^{1/i(g)}` over nonzero lattice points, where `i(g)` is
/// the lowest degree in which `g` has a nonzero component. Since the
/// projection to that degree is conjugation invariant, this bounds the
/// normal systole from below.
pub fn normal_systole_lower_bound(frame: &GradedFrame, lattice: &ZLattice, budget: u64) -> Result<QuasiLength> {
    let adapted = lattice.image(&frame.p_inv);
    let d = adapted.ambient_dim();
    let mut degs: Vec<u32> = frame.degrees.clone();
    degs.dedup();
    let mut best: Option<QuasiLength> = None;
    let mut spent = 0u64;
    for &i in &degs {
        let upper: Vec<usize> = (0..d).filter(|&j| frame.degrees[j] >= i).collect();
        let block: Vec<usize> = (0..d).filter(|&j| frame.degrees[j] == i).collect();
        let meet = lattice_meet_subspace(&adapted, &Subspace::coordinate(d, &upper));
        let proj: Vec<QVector> = meet.basis().iter().map(|v| block.iter().map(|&j| v[j].clone()).collect()).collect();
        let l = ZLattice::from_generators(block.len(), &proj);
        let scale = Rational::from(l.denominator_scale());
        let mut radius = Rational::one();
        let norm = loop {
            let bounds = vec![radius.clone(); block.len()];
            let (found, visited) =
                minimize_in_box(&l, &bounds, budget.saturating_sub(spent), |v| v.iter().map(|x| x.abs()).max().unwrap_or(0))?;
            spent += visited;
            if let Some((m, _)) = found {
                break Rational::from(BigInt::from(m)) / &scale;
            }
            radius = &radius * &Rational::from_int(2);
        };
        let q = QuasiLength { power: frame.power, raised: norm.pow((frame.power / i) as i32) };
        best = Some(match best {
            Some(b) if b <= q => b,
            _ => q,
        });
    }
    Ok(best.unwrap_or_else(|| QuasiLength::zero(frame.power)))
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentRow {
    pub m: i64,
    /// `covol(δ(m)Λ) / covol(Λ)`; an index when `δ(m)Λ ⊆ Λ`.
    pub index: Rational,
    pub contained: bool,
    pub systole: QuasiLength,
    pub normal_systole_lower_bound: QuasiLength,
    pub covolume: Rational,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentTable {
    pub rows: Vec<ExperimentRow>,
    /// Least-squares slope of `log(index)` against `log(systole)`.
    pub slope: f64,
    pub note: &'static str,
}

pub fn systolic_experiment(gr: &Grading, lattice: &ZLattice, ms: &[i64], budget: u64) -> Result<ExperimentTable> {
    let frame = GradedFrame::new(gr)?;
    let base_covol = lattice.covolume();
    let rows: Vec<ExperimentRow> = ms
        .par_iter()
        .map(|&m| {
            let dm = dilation(gr, &Rational::from_int(m))?;
            let img = lattice.image(&dm);
            let covolume = img.covolume();
            let sys = systole(&frame, &img, budget)?;
            Ok(ExperimentRow {
                m,
                index: &covolume / &base_covol,
                contained: lattice.contains_lattice(&img),
                systole: sys.length.expect("a full lattice has nonzero points"),
                normal_systole_lower_bound: normal_systole_lower_bound(&frame, &img, budget)?,
                covolume,
            })
        })
        .collect::<Result<_>>()?;
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.systole.to_f64().ln(), r.index.to_f64().ln())).collect();
    Ok(ExperimentTable {
        slope: fit_slope(&pts),
        rows,
        note: "systoles use the Guivarc'h quasi-length, which is quasi-isometric to the word metric",
    })
}

pub fn fit_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carnot::carnot_test;
    use crate::catalog;
    use crate::algebra::Algebra;
    use std::sync::Arc;

    fn carnot_frame(a: Algebra) -> (Grading, GradedFrame) {
        let a = Arc::new(a);
        let gr = carnot_test(&a).unwrap().witness().unwrap().grading.clone();
        let f = GradedFrame::new(&gr).unwrap();
        (gr, f)
    }

    fn v(xs: &[i64]) -> QVector {
        xs.iter().map(|&x| Rational::from_int(x)).collect()
    }

    #[test]
    fn quasi_lengths() {
        let (_, f) = carnot_frame(catalog::heisenberg3());
        assert_eq!(guivarch_length(&f, &v(&[0, 0, 0])), QuasiLength::zero(2));
        let l = guivarch_length(&f, &v(&[0, 0, 9]));
        assert_eq!(l.raised, Rational::from_int(9));
        assert!((l.to_f64() - 3.0).abs() < 1e-12);
        assert!(guivarch_length(&f, &v(&[2, 0, 3])) > guivarch_length(&f, &v(&[0, 1, 3])));
    }

    #[test]
    fn systole_of_standard_lattices() {
        let (gr, f) = carnot_frame(catalog::heisenberg3());
        let s = systole(&f, &ZLattice::standard(3), DEFAULT_ENUM_BUDGET).unwrap();
        assert_eq!(s.length.unwrap().raised, Rational::one());
        // Scaling identity ℓ(δ(m)h) = m·ℓ(h).
        for m in [2, 3, 5] {
            let dm = dilation(&gr, &Rational::from_int(m)).unwrap();
            let img = ZLattice::standard(3).image(&dm);
            let sm = systole(&f, &img, DEFAULT_ENUM_BUDGET).unwrap();
            assert_eq!(sm.length.unwrap(), QuasiLength { power: 2, raised: Rational::one() }.scaled(&Rational::from_int(m)));
        }
        // A lattice whose shortest vector lives in the center.
        let l = ZLattice::from_generators(3, &[v(&[5, 0, 0]), v(&[0, 5, 0]), v(&[0, 0, 4])]);
        let s = systole(&f, &l, DEFAULT_ENUM_BUDGET).unwrap();
        assert_eq!(s.length.unwrap().raised, Rational::from_int(4));
        assert_eq!(s.witness.unwrap(), v(&[0, 0, -4]));
    }

    #[test]
    fn empty_box_and_budget() {
        let (_, f) = carnot_frame(catalog::heisenberg3());
        let l = ZLattice::from_generators(3, &[v(&[5, 0, 0]), v(&[0, 5, 0]), v(&[0, 0, 30])]);
        let r = systole_estimate(&f, &l, &Rational::from_int(2), DEFAULT_ENUM_BUDGET).unwrap();
        assert!(r.length.is_none());
        assert!(matches!(
            systole_estimate(&f, &ZLattice::standard(3), &Rational::from_int(40), 1000),
            Err(Error::BoxTooLarge { budget: 1000 })
        ));
    }

    #[test]
    fn experiment_slopes() {
        let (gr, _) = carnot_frame(catalog::heisenberg3());
        let ms: Vec<i64> = (2..=6).collect();
        let t = systolic_experiment(&gr, &ZLattice::standard(3), &ms, DEFAULT_ENUM_BUDGET).unwrap();
        assert!((t.slope - 4.0).abs() < 1e-9);
        assert!(t.rows.iter().all(|r| r.contained));
        let (gr, _) = carnot_frame(Algebra::abelian(3));
        let t = systolic_experiment(&gr, &ZLattice::standard(3), &ms, DEFAULT_ENUM_BUDGET).unwrap();
        assert!((t.slope - 3.0).abs() < 1e-9);
    }

    #[test]
    fn normal_lower_bound_is_below_systole() {
        let (_, f) = carnot_frame(catalog::heisenberg3());
        let l = ZLattice::from_generators(3, &[v(&[3, 0, 0]), v(&[0, 3, 0]), v(&[1, 1, 4])]);
        let lb = normal_systole_lower_bound(&f, &l, DEFAULT_ENUM_BUDGET).unwrap();
        let s = systole(&f, &l, DEFAULT_ENUM_BUDGET).unwrap().length.unwrap();
        assert!(lb <= s);
    }
}
