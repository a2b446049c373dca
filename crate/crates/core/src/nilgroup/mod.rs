//! Simply connected nilpotent groups in logarithmic coordinates: BCH
//! multiplication, dilations, lattice subgroups and the endomorphisms
//! `δ(m)` that stabilize them.

pub mod bch;
pub mod systole;

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::Serialize;

fn ser_big<S: serde::Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

use crate::algebra::Algebra;
use crate::cohopf::lattice_meet_subspace;
use crate::error::{Error, Result};
use crate::exactlin::{vec_add, vec_scale, QMatrix, QVector, Subspace, ZLattice};
use crate::grading::Grading;
use crate::rational::{lcm_denominators, Rational};

pub use bch::BchTable;
pub use systole::{
    guivarch_length, systole_estimate, systolic_experiment, ExperimentRow, ExperimentTable, GradedFrame, QuasiLength,
    SystoleResult,
};

pub const DEFAULT_CLASS_CAP: usize = 10;

/// Logarithmic coordinates of a group element.
pub type GroupElement = QVector;

/// The simply connected group of a nilpotent Lie algebra over Q, with the
/// group law given by the BCH series.
#[derive(Clone, Debug)]
pub struct NilGroup {
    algebra: Arc<Algebra>,
    class: usize,
    table: Arc<BchTable>,
}

impl NilGroup {
    pub fn new(algebra: Arc<Algebra>, class_cap: usize) -> Result<NilGroup> {
        algebra.require_lie()?;
        let class = algebra.lower_series().class.ok_or(Error::NotNilpotent)?;
        if class > class_cap {
            return Err(Error::ClassTooLarge { class, cap: class_cap });
        }
        let table = bch::table(class.max(1));
        Ok(NilGroup { algebra, class, table })
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn class(&self) -> usize {
        self.class
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn identity(&self) -> GroupElement {
        vec![Rational::zero(); self.dim()]
    }

    pub fn inverse(&self, x: &[Rational]) -> GroupElement {
        x.iter().map(|c| -c).collect()
    }

    /// `x^{*m} = m·x` in logarithmic coordinates.
    pub fn power(&self, x: &[Rational], m: i64) -> GroupElement {
        vec_scale(x, &Rational::from_int(m))
    }

    /// `log(exp x · exp y)`.
    pub fn mul(&self, x: &[Rational], y: &[Rational]) -> GroupElement {
        let letters = [x.to_vec(), y.to_vec()];
        // Right-normed brackets share suffixes; evaluate each suffix once.
        let mut memo: std::collections::HashMap<&[u8], QVector> = std::collections::HashMap::new();
        let mut out = self.identity();
        for (w, c) in &self.table.terms {
            let v = self.eval_word(w, &letters, &mut memo);
            for (o, vi) in out.iter_mut().zip(&v) {
                if !vi.is_zero() {
                    *o += &(c * vi);
                }
            }
        }
        out
    }

    fn eval_word<'w>(
        &self,
        w: &'w [u8],
        letters: &[QVector; 2],
        memo: &mut std::collections::HashMap<&'w [u8], QVector>,
    ) -> QVector {
        if let Some(v) = memo.get(w) {
            return v.clone();
        }
        let v = if w.len() == 1 {
            letters[w[0] as usize].clone()
        } else {
            let tail = self.eval_word(&w[1..], letters, memo);
            if tail.iter().all(Rational::is_zero) {
                tail
            } else {
                self.algebra.multiply(&letters[w[0] as usize], &tail)
            }
        };
        memo.insert(w, v.clone());
        v
    }

    pub fn commutator(&self, x: &[Rational], y: &[Rational]) -> GroupElement {
        let xy = self.mul(x, y);
        let xiyi = self.mul(&self.inverse(x), &self.inverse(y));
        self.mul(&xy, &xiyi)
    }
}

/// `Σ i·dim(g^(i)/g^(i+1))`.
pub fn growth_degree(a: &Algebra) -> Result<usize> {
    let series = a.lower_series();
    if series.class.is_none() {
        return Err(Error::NotNilpotent);
    }
    let dims = series.dims();
    Ok(dims.windows(2).enumerate().map(|(i, w)| (i + 1) * (w[0] - w[1])).sum::<usize>()
        + dims.last().map_or(0, |&last| dims.len() * last))
}

/// `Σ n·dim g_n` for a grading in Z.
pub fn homogeneous_dimension(gr: &Grading) -> Result<i64> {
    if gr.rank() != 1 {
        return Err(Error::BadGrading("expected a grading in Z".into()));
    }
    Ok(gr.dims().iter().map(|(w, d)| w[0] * *d as i64).sum())
}

/// `δ(t)`, acting by `tⁿ` on `g_n`, checked to be an automorphism.
pub fn dilation(gr: &Grading, t: &Rational) -> Result<QMatrix> {
    let m = gr.dilation(t)?;
    if !t.is_zero() && !gr.algebra().is_automorphism(&m) {
        return Err(Error::Invariant("dilation is not an automorphism".into()));
    }
    Ok(m)
}

/// A full additive lattice in logarithmic coordinates, with closure under
/// the group law checked on ordered pairs of basis vectors.
#[derive(Clone, Debug, Serialize)]
pub struct LatticeSubgroup {
    pub log_lattice: ZLattice,
    pub verified: bool,
}

impl LatticeSubgroup {
    pub fn new(g: &NilGroup, log_lattice: ZLattice) -> LatticeSubgroup {
        let basis = log_lattice.basis();
        let verified = log_lattice.is_full()
            && basis.iter().all(|x| basis.iter().all(|y| log_lattice.contains(&g.mul(x, y))));
        LatticeSubgroup { log_lattice, verified }
    }

    pub fn image(&self, g: &NilGroup, m: &QMatrix) -> LatticeSubgroup {
        LatticeSubgroup::new(g, self.log_lattice.image(m))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DefendoCheck {
    #[serde(serialize_with = "ser_big")]
    pub m: BigInt,
    pub stabilizes: bool,
    /// `[Λ : δ(m)Λ]`.
    pub index: Rational,
    /// `m^{Σ n dim g_n}`.
    pub expected_index: Rational,
}

#[derive(Clone, Debug, Serialize)]
pub struct DefendoCertificate {
    /// Common denominator of the BCH coefficients up to the class.
    #[serde(serialize_with = "ser_big")]
    pub s: BigInt,
    /// Least `k` with `k·Λ ⊆ Zᵈ` in the adapted basis.
    #[serde(serialize_with = "ser_big")]
    pub k: BigInt,
    /// Least `k′` with `k′·Zᵈ ⊆ Λ` in the adapted basis.
    #[serde(serialize_with = "ser_big")]
    pub k_prime: BigInt,
    #[serde(serialize_with = "ser_big")]
    pub k0: BigInt,
    pub homogeneous_dimension: i64,
    pub checks: Vec<DefendoCheck>,
}

impl DefendoCertificate {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.stabilizes && c.index == c.expected_index)
    }
}

/// `k₀ = s·kᵈ·k′` such that `δ(m)` stabilizes `Λ` for all `m ∈ k₀N + 1`,
/// certified by exact membership at `m = k₀+1` and `m = 2k₀+1`.
pub fn defendo_modulus(g: &NilGroup, gr: &Grading, lattice: &LatticeSubgroup) -> Result<DefendoCertificate> {
    if gr.rank() != 1 || gr.weights().iter().any(|w| w[0] < 0) {
        return Err(Error::NotNonnegativeGrading);
    }
    if !lattice.verified {
        return Err(Error::Validation("lattice closure under the group law is not verified".into()));
    }
    let d = g.dim();
    let s = lcm_denominators(g.table.terms.iter().map(|(_, c)| c));
    let (p, _) = gr.adapted_basis();
    let p_inv = p.inverse().expect("adapted basis");
    let adapted = lattice.log_lattice.image(&p_inv);
    let k = lcm_denominators(adapted.basis().iter().flatten());
    let mut k_prime = BigInt::one();
    for i in 0..d {
        let line = lattice_meet_subspace(&adapted, &Subspace::coordinate(d, &[i]));
        let t = line.basis()[0][i].abs();
        k_prime = k_prime.lcm(&t.numer());
    }
    let k0 = &s * k.pow(d as u32) * &k_prime;
    let hd = homogeneous_dimension(gr)?;
    let mut checks = Vec::new();
    for m in [&k0 + 1, &k0 * 2 + 1] {
        let mq = Rational::from(&m);
        let dm = dilation(gr, &mq)?;
        let image = lattice.log_lattice.image(&dm);
        let stabilizes = lattice.log_lattice.contains_lattice(&image);
        let index = if stabilizes { lattice.log_lattice.index_of(&image)? } else { Rational::zero() };
        checks.push(DefendoCheck { m, stabilizes, index, expected_index: mq.pow(hd as i32) });
    }
    Ok(DefendoCertificate { s, k, k_prime, k0, homogeneous_dimension: hd, checks })
}

/// Lattices `Λ′_n = g₁(nZ) ⊕ [g,g](n^c Z)` in a basis adapted to a
/// complement `g₁` of `[g,g]`, scaled so that structure constants are
/// divisible by `c!`.
#[derive(Clone, Debug, Serialize)]
pub struct UppersysLattice {
    pub n: u64,
    /// `c·dim[g,g] + dim(g/[g,g])`.
    pub exponent_d: usize,
    pub lattice: LatticeSubgroup,
    /// `[Λ′₁ : Λ′_n]`.
    pub index: Rational,
}

/// The scaled adapted basis, as columns.
pub fn uppersys_basis(g: &NilGroup) -> QMatrix {
    let a = g.algebra();
    let d = a.dim();
    let derived = a.derived();
    let mut cols = derived.complement_in(&Subspace::full(d));
    cols.extend(derived.basis().iter().cloned());
    let p = QMatrix::from_columns(&cols, d);
    let changed = a.base_change(&p).expect("basis");
    let denom = lcm_denominators(changed.dense().iter());
    let c_fact: BigInt = (1..=g.class().max(1) as u64).map(BigInt::from).product();
    p.scale(&Rational::from(denom * c_fact))
}

pub fn uppersys_family(g: &NilGroup, n: u64) -> Result<UppersysLattice> {
    let a = g.algebra();
    let d = a.dim();
    let c = g.class().max(1);
    let k = a.derived().dim();
    let p = uppersys_basis(g);
    let nq = Rational::from(n as i64);
    let scales: Vec<Rational> = (0..d).map(|j| if j < d - k { nq.clone() } else { nq.pow(c as i32) }).collect();
    let gens: Vec<QVector> = (0..d).map(|j| vec_scale(&p.column(j), &scales[j])).collect();
    let base = ZLattice::from_generators(d, &(0..d).map(|j| p.column(j)).collect::<Vec<_>>());
    let lat = ZLattice::from_generators(d, &gens);
    let index = base.index_of(&lat)?;
    Ok(UppersysLattice { n, exponent_d: c * k + (d - k), lattice: LatticeSubgroup::new(g, lat), index })
}

/// `x + y` for group elements in an abelian group; kept for symmetry in tests.
pub fn abelian_mul(x: &[Rational], y: &[Rational]) -> GroupElement {
    vec_add(x, y)
}
