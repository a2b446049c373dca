//! Radicals `cni`, `cni⁺`, the cohopfian classification of lattices, and
//! the analysis of single automorphisms: lattice criteria and the absolute
//! grading.

pub mod factor;

use std::cmp::Ordering;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::Serialize;

use crate::algebra::Algebra;
use crate::cone::{cartan_grading, cone_flags, contractive_decomposition, ConeFlags};
use crate::error::{Error, Result};
use crate::exactlin::{integer_kernel, QMatrix, QPoly, QVector, Subspace, ZLattice};
use crate::rational::{lcm_denominators, Rational};
use crate::tori::{derivations, CertificateLevel, TorusOptions};

pub use factor::{factor, Factorization};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub cohopfian: bool,
    pub non_cohopfian: bool,
    pub dis_cohopfian: bool,
    pub weakly_dis_cohopfian: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CohopfReport {
    pub semicontractable: bool,
    pub contractable: bool,
    pub essentially_contractable: bool,
    pub uncontracted_dim: usize,
    /// Smallest Hirsch length of `⋂ φⁿ(Γ)` over injective endomorphisms `φ`.
    pub min_hirsch_length: usize,
    pub cni_plus: Subspace,
    pub cni: Subspace,
    /// `cni` is exact when the torus is proven maximal; otherwise it is an
    /// upper bound, as anisotropic semisimple derivations may be missed.
    pub cni_exact: bool,
    pub classification: Classification,
    pub torus_rank: usize,
    pub cone: ConeFlags,
    pub certificate: CertificateLevel,
}

/// Largest ideal inside `g_[0]` invariant under all derivations.
pub fn cni_plus(a: &Arc<Algebra>, opts: TorusOptions) -> Result<Subspace> {
    let (gr, _) = cartan_grading(a, opts);
    let dec = contractive_decomposition(&gr)?;
    Ok(a.largest_invariant_subideal(&dec.zero_part, &derivations(a).basis))
}

/// Largest ideal inside the zero weight space of the computed torus that is
/// invariant under all derivations.
pub fn cni(a: &Arc<Algebra>, opts: TorusOptions) -> Result<Subspace> {
    a.require_lie()?;
    let (gr, _) = cartan_grading(a, opts);
    Ok(a.largest_invariant_subideal(&gr.zero_component(), &derivations(a).basis))
}

pub fn classify(a: &Arc<Algebra>, opts: TorusOptions) -> Result<CohopfReport> {
    a.require_lie()?;
    if !a.is_nilpotent() {
        return Err(Error::NotNilpotent);
    }
    let (gr, certificate) = cartan_grading(a, opts);
    let cone = cone_flags(&gr);
    let dec = contractive_decomposition(&gr)?;
    let der = derivations(a).basis;
    let cni_plus = a.largest_invariant_subideal(&dec.zero_part, &der);
    let cni = a.largest_invariant_subideal(&gr.zero_component(), &der);
    if !cni_plus.contains_subspace(&cni) {
        return Err(Error::Invariant("cni is not contained in cni⁺".into()));
    }
    let classification = Classification {
        cohopfian: !cone.semicontractable,
        non_cohopfian: cone.semicontractable,
        dis_cohopfian: cone.contractable,
        weakly_dis_cohopfian: cni_plus.is_zero(),
    };
    Ok(CohopfReport {
        semicontractable: cone.semicontractable,
        contractable: cone.contractable,
        essentially_contractable: cni_plus.is_zero(),
        uncontracted_dim: dec.uncontracted_dim,
        min_hirsch_length: dec.uncontracted_dim,
        cni_plus,
        cni,
        cni_exact: certificate == CertificateLevel::ProvenMaximal,
        classification,
        torus_rank: gr.rank(),
        cone,
        certificate,
    })
}

fn require_invertible(xi: &QMatrix) -> Result<()> {
    if !xi.is_square() || xi.determinant().is_zero() {
        return Err(Error::SingularMatrix);
    }
    Ok(())
}

/// Whether `ξ·L ⊆ L` for some lattice `L`: the minimal polynomial has
/// integer coefficients.
pub fn stabilizes_some_lattice(xi: &QMatrix) -> Result<bool> {
    require_invertible(xi)?;
    Ok(xi.minimal_polynomial().has_integer_coefficients())
}

/// Whether `ξ·L = L` for some lattice `L`: in addition the constant term of
/// the minimal polynomial is `±1`.
pub fn preserves_some_lattice(xi: &QMatrix) -> Result<bool> {
    require_invertible(xi)?;
    let p = xi.minimal_polynomial();
    Ok(p.has_integer_coefficients() && p.coeff(0).abs().is_one())
}

/// The modulus `|N|^{1/degree}` attached to an irreducible factor, where
/// `N` is its constant term up to sign.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbsoluteWeight {
    pub norm: Rational,
    pub degree: usize,
}

impl AbsoluteWeight {
    /// Exact comparison of moduli by raising both to a common power.
    pub fn cmp_modulus(&self, other: &AbsoluteWeight) -> Ordering {
        self.norm.pow(other.degree as i32).cmp(&other.norm.pow(self.degree as i32))
    }

    pub fn is_distal(&self) -> bool {
        self.norm.is_one()
    }

    /// Approximate real weight `log|N| / degree`, for display.
    pub fn log_modulus(&self) -> f64 {
        let (n, d) = (self.norm.numer(), self.norm.denom());
        (big_ln(&n) - big_ln(&d)) / self.degree as f64
    }
}

fn big_ln(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits < 1000 {
        return num_traits::ToPrimitive::to_f64(x).unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 60;
    let top: BigInt = x >> shift;
    num_traits::ToPrimitive::to_f64(&top).unwrap_or(1.0).ln() + shift as f64 * std::f64::consts::LN_2
}

impl Serialize for AbsoluteWeight {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("AbsoluteWeight", 3)?;
        st.serialize_field("norm", &self.norm)?;
        st.serialize_field("degree", &self.degree)?;
        st.serialize_field("log_modulus", &self.log_modulus())?;
        st.end()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AbsoluteComponent {
    pub weight: AbsoluteWeight,
    /// Irreducible factors of the minimal polynomial in this component.
    pub factors: Vec<QPoly>,
    pub subspace: Subspace,
}

/// Decomposition of `Qᵈ` by the moduli of the split characters of `ξ`.
///
/// The maximal split torus in the Zariski closure of `⟨ξ⟩` acts by a scalar
/// on the generalized eigenspace of each irreducible factor `p` of the
/// minimal polynomial, with modulus `|p(0)|^{1/deg p}`. Components group
/// these eigenspaces by modulus, in increasing order.
#[derive(Clone, Debug, Serialize)]
pub struct AbsoluteGrading {
    pub xi: QMatrix,
    pub components: Vec<AbsoluteComponent>,
    /// The distal part `V₀♯`.
    pub zero_part: Subspace,
    /// False when some factor of the minimal polynomial could not be
    /// certified irreducible, so components might be merged wrongly.
    pub exact: bool,
}

impl AbsoluteGrading {
    pub fn has_negative_weights(&self) -> bool {
        self.components.iter().any(|c| c.weight.norm < Rational::one())
    }
}

pub fn absolute_grading(xi: &QMatrix, prime_budget: usize) -> Result<AbsoluteGrading> {
    require_invertible(xi)?;
    let d = xi.rows();
    let fac = factor(&xi.minimal_polynomial(), prime_budget);
    let mut components: Vec<AbsoluteComponent> = Vec::new();
    for (p, mult) in &fac.factors {
        let weight = AbsoluteWeight { norm: p.coeff(0).abs(), degree: p.degree().expect("nonconstant") };
        let block = p.pow(*mult as u32).eval_matrix(xi).null_space();
        match components.iter_mut().find(|c| c.weight.cmp_modulus(&weight) == Ordering::Equal) {
            Some(c) => {
                c.factors.push(p.clone());
                c.subspace = c.subspace.sum(&block);
            }
            None => components.push(AbsoluteComponent { weight, factors: vec![p.clone()], subspace: block }),
        }
    }
    components.sort_by(|a, b| a.weight.cmp_modulus(&b.weight));
    let zero_part = components
        .iter()
        .find(|c| c.weight.is_distal())
        .map(|c| c.subspace.clone())
        .unwrap_or_else(|| Subspace::zero(d));
    let total: usize = components.iter().map(|c| c.subspace.dim()).sum();
    if total != d {
        return Err(Error::Invariant("generalized eigenspaces do not span".into()));
    }
    Ok(AbsoluteGrading { xi: xi.clone(), components, zero_part, exact: fac.certified })
}

/// `Λ ∩ S` for a subspace `S`.
pub fn lattice_meet_subspace(lattice: &ZLattice, s: &Subspace) -> ZLattice {
    let n = lattice.ambient_dim();
    let ann = s.annihilator();
    if ann.is_zero() {
        return lattice.clone();
    }
    let basis = lattice.basis();
    let f = ann.basis_matrix();
    let images: Vec<QVector> = basis.iter().map(|b| f.mul_vec(b)).collect();
    let l = lcm_denominators(images.iter().flatten());
    let rows: Vec<Vec<BigInt>> =
        images.iter().map(|v| v.iter().map(|x| (x * &Rational::from(&l)).numer()).collect()).collect();
    let gens: Vec<QVector> = integer_kernel(&rows)
        .iter()
        .map(|c| {
            let mut v = vec![Rational::zero(); n];
            for (ci, b) in c.iter().zip(&basis) {
                let ci = Rational::from(ci);
                for (vj, bj) in v.iter_mut().zip(b) {
                    *vj += &ci * bj;
                }
            }
            v
        })
        .collect();
    ZLattice::from_generators(n, &gens)
}

/// `⋂_{n≥0} ξⁿ(Λ)`, which equals `Λ ∩ V₀♯`.
pub fn intersection_lattice(xi: &QMatrix, lattice: &ZLattice, prime_budget: usize) -> Result<ZLattice> {
    require_invertible(xi)?;
    if !lattice.is_stable_under(xi) {
        return Err(Error::DoesNotStabilize);
    }
    let ag = absolute_grading(xi, prime_budget)?;
    if !ag.exact {
        return Err(Error::PrecisionExhausted);
    }
    Ok(lattice_meet_subspace(lattice, &ag.zero_part))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn m(rows: &[&[i64]]) -> QMatrix {
        QMatrix::from_i64(rows)
    }

    #[test]
    fn classification_of_fixtures() {
        let opts = TorusOptions::default();
        let h = Arc::new(catalog::heisenberg3());
        let r = classify(&h, opts).unwrap();
        assert!(r.classification.dis_cohopfian && r.classification.weakly_dis_cohopfian && r.classification.non_cohopfian);
        assert_eq!(r.min_hirsch_length, 0);
        assert!(r.cni.is_zero() && r.cni_plus.is_zero());

        let g = Arc::new(catalog::g7102());
        let r = classify(&g, opts).unwrap();
        let c = r.classification;
        assert!(c.weakly_dis_cohopfian && !c.dis_cohopfian && c.non_cohopfian && !c.cohopfian);
        assert_eq!(r.min_hirsch_length, 1);
        assert!(r.cni_plus.is_zero());

        let g16 = Arc::new(catalog::g16());
        let r = classify(&g16, opts).unwrap();
        assert!(r.classification.cohopfian && !r.semicontractable);
        assert!(r.cni_plus.is_full());
        assert!(r.cni.is_zero());
        assert_eq!(r.torus_rank, 1);

        let h16 = Arc::new(catalog::h16());
        let r = classify(&h16, opts).unwrap();
        assert!(r.classification.cohopfian);
        assert_eq!(r.torus_rank, 0);
        assert!(!r.cone.flexible_split);
    }

    #[test]
    fn cni_of_product_with_abelian_factor() {
        let g = catalog::charnil7();
        let prod = Arc::new(g.direct_product(&Algebra::abelian(1)));
        let derived_g = g.derived();
        let expected = Subspace::from_vectors(8, derived_g.basis().iter().map(|v| {
            let mut w = v.clone();
            w.push(Rational::zero());
            w
        }).collect());
        assert_eq!(cni(&prod, TorusOptions::default()).unwrap(), expected);
        assert_eq!(cni_plus(&prod, TorusOptions::default()).unwrap(), expected);
    }

    #[test]
    fn classify_rejects_bad_input() {
        let a = Arc::new(catalog::assoc4());
        assert!(matches!(classify(&a, TorusOptions::default()), Err(Error::NotLie)));
    }

    #[test]
    fn lattice_criteria() {
        assert!(stabilizes_some_lattice(&m(&[&[2, 1], &[1, 1]])).unwrap());
        assert!(preserves_some_lattice(&m(&[&[2, 1], &[1, 1]])).unwrap());
        assert!(!preserves_some_lattice(&m(&[&[2, 0], &[0, 1]])).unwrap());
        let comp = QPoly::new(vec![Rational::one(), Rational::new(1, 2), Rational::one()]).companion();
        assert!(!stabilizes_some_lattice(&comp).unwrap());
        let half = QMatrix::from_rows(vec![
            vec![Rational::zero(), Rational::from_int(-1)],
            vec![Rational::one(), Rational::new(5, 2)],
        ]);
        assert!(!stabilizes_some_lattice(&half).unwrap());
        assert!(matches!(stabilizes_some_lattice(&m(&[&[1, 1], &[1, 1]])), Err(Error::SingularMatrix)));
    }

    #[test]
    fn absolute_grading_examples() {
        let ag = absolute_grading(&m(&[&[1, 0], &[0, 2]]), 20).unwrap();
        assert_eq!(ag.zero_part, Subspace::coordinate(2, &[0]));
        let z2 = ZLattice::standard(2);
        let meet = intersection_lattice(&m(&[&[1, 0], &[0, 2]]), &z2, 20).unwrap();
        assert_eq!(meet, ZLattice::from_generators(2, &[vec![Rational::one(), Rational::zero()]]));

        let xi = m(&[&[4, 2], &[2, 2]]);
        let ag = absolute_grading(&xi, 20).unwrap();
        assert!(ag.zero_part.is_zero());
        assert_eq!(ag.components.len(), 1);
        assert!(!ag.has_negative_weights());
        assert_eq!(intersection_lattice(&xi, &z2, 20).unwrap().rank(), 0);

        let id = QMatrix::identity(3);
        assert!(absolute_grading(&id, 20).unwrap().zero_part.is_full());
        assert_eq!(intersection_lattice(&id, &ZLattice::standard(3), 20).unwrap(), ZLattice::standard(3));

        assert!(matches!(intersection_lattice(&m(&[&[1, 0], &[0, 2]]).scale(&Rational::new(1, 2)), &z2, 20), Err(Error::DoesNotStabilize)));
    }

    #[test]
    fn absolute_grading_orders_components_by_modulus() {
        // Blocks: rotation of order 4 (distal), x² − 6x + 4 (modulus 2), 3.
        let xi = m(&[
            &[0, -1, 0, 0, 0],
            &[1, 0, 0, 0, 0],
            &[0, 0, 0, -4, 0],
            &[0, 0, 1, 6, 0],
            &[0, 0, 0, 0, 3],
        ]);
        let ag = absolute_grading(&xi, 20).unwrap();
        assert!(ag.exact);
        let dims: Vec<usize> = ag.components.iter().map(|c| c.subspace.dim()).collect();
        assert_eq!(dims, vec![2, 2, 1]);
        assert_eq!(ag.zero_part, Subspace::coordinate(5, &[0, 1]));
        assert!((ag.components[1].weight.log_modulus() - 2f64.ln()).abs() < 1e-12);
        let meet = intersection_lattice(&xi, &ZLattice::standard(5), 20).unwrap();
        assert_eq!(meet, lattice_meet_subspace(&ZLattice::standard(5), &Subspace::coordinate(5, &[0, 1])));
        // The distal part is preserved, and lies in every image.
        assert_eq!(meet.image(&xi), meet);
        let mut img = ZLattice::standard(5);
        for _ in 0..6 {
            img = img.image(&xi);
            assert!(img.contains_lattice(&meet));
        }
    }
}
