//! Derivations, maximal split tori of derivations and weight decompositions.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::Algebra;
use crate::exactlin::{has_irrational_eigenvalue, EchelonBuilder, LinearSystem, QMatrix, Subspace, ZLattice};
use crate::grading::{Grading, Weight};
use crate::rational::Rational;

/// Unknown index of the matrix entry `D[r][c]`.
fn var(d: usize, r: usize, c: usize) -> usize {
    r * d + c
}

/// Leibniz equations `D(eᵢeⱼ) = D(eᵢ)eⱼ + eᵢD(eⱼ)` over the `d²` entries of
/// `D`, one per basis pair and output coordinate.
pub fn leibniz_system(a: &Algebra) -> LinearSystem {
    let d = a.dim();
    let mut sys = LinearSystem::new(d * d);
    for i in 0..d {
        let j_start = if a.is_lie() { i + 1 } else { 0 };
        for j in j_start..d {
            for l in 0..d {
                let mut eq: Vec<(usize, Rational)> = Vec::new();
                for (k, c) in a.product_of_basis(i, j) {
                    eq.push((var(d, l, *k), c.clone()));
                }
                for m in 0..d {
                    for (k, c) in a.product_of_basis(m, j) {
                        if *k == l {
                            eq.push((var(d, m, i), -c));
                        }
                    }
                    for (k, c) in a.product_of_basis(i, m) {
                        if *k == l {
                            eq.push((var(d, m, j), -c));
                        }
                    }
                }
                if !eq.is_empty() {
                    sys.push(eq, Rational::zero());
                }
            }
        }
    }
    sys
}

pub fn matrix_from_unknowns(d: usize, x: &[Rational]) -> QMatrix {
    QMatrix::from_flat(d, d, x.to_vec())
}

/// Basis of the derivation algebra `Der(g)`.
#[derive(Clone, Debug)]
pub struct DerivationSpace {
    pub dim_algebra: usize,
    pub basis: Vec<QMatrix>,
}

impl DerivationSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn combination(&self, coeffs: &[Rational]) -> QMatrix {
        QMatrix::combination(coeffs, &self.basis)
    }

    /// Whether the commutator of any two basis elements lies in the span.
    pub fn is_closed_under_commutator(&self) -> bool {
        let span = Subspace::from_vectors(
            self.dim_algebra * self.dim_algebra,
            self.basis.iter().map(|m| m.flat().to_vec()).collect(),
        );
        self.basis
            .iter()
            .enumerate()
            .all(|(i, x)| self.basis[i + 1..].iter().all(|y| span.contains(x.commutator(y).flat())))
    }
}

pub fn derivations(a: &Algebra) -> DerivationSpace {
    let d = a.dim();
    let sol = leibniz_system(a).solve().expect("the homogeneous Leibniz system is consistent");
    DerivationSpace { dim_algebra: d, basis: sol.kernel.iter().map(|x| matrix_from_unknowns(d, x)).collect() }
}

/// Basis of the centralizer of `family` inside the span of `space`.
pub fn centralizer(space: &[QMatrix], family: &[QMatrix]) -> Vec<QMatrix> {
    if family.is_empty() {
        return space.to_vec();
    }
    let mut sys = EchelonBuilder::new(space.len());
    for t in family {
        let comms: Vec<QMatrix> = space.iter().map(|x| x.commutator(t)).collect();
        let n = t.rows() * t.cols();
        for e in 0..n {
            let eq: Vec<(usize, Rational)> = comms
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.flat()[e].is_zero())
                .map(|(k, c)| (k, c.flat()[e].clone()))
                .collect();
            if !eq.is_empty() {
                sys.push(eq, Rational::zero());
            }
        }
    }
    let sol = sys.solve().expect("homogeneous");
    sol.kernel.iter().map(|x| QMatrix::combination(x, space)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING-KEBAB-CASE")]
pub enum CertificateLevel {
    /// The centralizer of the torus is the torus plus nilpotent derivations.
    ProvenMaximal,
    /// No seeded candidate extends the torus, but maximality is not certified.
    HeuristicMaximal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TorusOptions {
    pub seed: u64,
    /// Random candidates drawn per extension round.
    pub draws: usize,
}

impl Default for TorusOptions {
    fn default() -> Self {
        TorusOptions { seed: 0, draws: 8 }
    }
}

/// Commuting Q-diagonalizable derivations with their joint eigenspaces.
///
/// Generators are normalized so that the weights are integer vectors whose
/// Z-span is all of Zʳ.
#[derive(Clone, Debug)]
pub struct SplitTorus {
    pub generators: Vec<QMatrix>,
    pub weights: Vec<Weight>,
    pub weight_spaces: Vec<Subspace>,
    pub certificate: CertificateLevel,
}

impl SplitTorus {
    pub fn rank(&self) -> usize {
        self.generators.len()
    }
}

/// Whether a semisimple matrix has only rational eigenvalues.
pub fn is_split(s: &QMatrix) -> bool {
    let p = s.minimal_polynomial();
    p.rational_roots().len() == p.degree().unwrap_or(0)
}

/// Semisimple part when it is Q-split (zero for nilpotent input), decided
/// from the minimal polynomial before any Newton iteration.
fn split_semisimple_part(x: &QMatrix) -> Option<QMatrix> {
    if has_irrational_eigenvalue(x) {
        return None;
    }
    let p = x.minimal_polynomial();
    let q = p.squarefree_part();
    if q.degree() == Some(1) && q.coeff(0).is_zero() {
        return Some(QMatrix::zeros(x.rows(), x.cols()));
    }
    if q.rational_roots().len() != q.degree().unwrap_or(0) {
        return None;
    }
    Some(x.semisimple_part_given(&p))
}

/// Joint eigenbasis of a commuting split family: `p` has the joint
/// eigenspaces as consecutive column blocks.
struct EigenFrame {
    p: QMatrix,
    pinv: QMatrix,
    blocks: Vec<std::ops::Range<usize>>,
}

impl EigenFrame {
    fn new(d: usize, family: &[QMatrix]) -> Self {
        let mut cols = Vec::with_capacity(d);
        let mut blocks = Vec::new();
        for (_, space) in joint_eigenspaces(d, family) {
            let start = cols.len();
            cols.extend(space.basis().iter().cloned());
            blocks.push(start..cols.len());
        }
        let p = QMatrix::from_columns(&cols, d);
        let pinv = p.inverse().expect("joint eigenspaces of a split family span the space");
        EigenFrame { p, pinv, blocks }
    }

    /// Split semisimple part of `x`, which must commute with the family, block
    /// by block in the eigenbasis.
    fn split_semisimple_part(&self, x: &QMatrix) -> Option<QMatrix> {
        let y = self.pinv.mul(x).mul(&self.p);
        let d = x.rows();
        let mut s = QMatrix::zeros(d, d);
        for r in &self.blocks {
            let n = r.len();
            let block = QMatrix::from_flat(
                n,
                n,
                r.clone().flat_map(|i| r.clone().map(move |j| (i, j))).map(|(i, j)| y[(i, j)].clone()).collect(),
            );
            let sb = split_semisimple_part(&block)?;
            for (a, i) in r.clone().enumerate() {
                for (b, j) in r.clone().enumerate() {
                    s[(i, j)] = sb[(a, b)].clone();
                }
            }
        }
        Some(self.p.mul(&s).mul(&self.pinv))
    }
}

fn in_span(family: &[QMatrix], x: &QMatrix) -> bool {
    if family.is_empty() {
        return x.is_zero();
    }
    let n = x.rows() * x.cols();
    Subspace::from_vectors(n, family.iter().map(|m| m.flat().to_vec()).collect()).contains(x.flat())
}

/// Whether the matrices generate a nilpotent associative algebra, by
/// iterating `V ← Σ Nᵢ·V` from the whole space.
fn generate_nilpotent_algebra(mats: &[QMatrix], d: usize) -> bool {
    let mut v = Subspace::full(d);
    for _ in 0..=d {
        if v.is_zero() {
            return true;
        }
        v = mats.iter().fold(Subspace::zero(d), |acc, m| acc.sum(&v.image(m)));
    }
    v.is_zero()
}

/// A maximal Q-split torus of `Der(g)`, found greedily inside successive
/// centralizers from semisimple parts of basis elements and of seeded
/// random integer combinations.
pub fn maximal_split_torus(a: &Algebra, opts: TorusOptions) -> SplitTorus {
    let d = a.dim();
    let der = derivations(a);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut family: Vec<QMatrix> = Vec::new();
    let cent = loop {
        let cent = centralizer(&der.basis, &family);
        let frame = EigenFrame::new(d, &family);
        let mut extended = false;
        let mut candidates: Vec<QMatrix> = cent.clone();
        for _ in 0..opts.draws {
            if cent.is_empty() {
                break;
            }
            let coeffs: Vec<Rational> = cent.iter().map(|_| Rational::from_int(rng.gen_range(-3..=3))).collect();
            candidates.push(QMatrix::combination(&coeffs, &cent));
        }
        for x in candidates {
            match frame.split_semisimple_part(&x) {
                Some(s) if !s.is_zero() && !in_span(&family, &s) => {
                    family.push(s);
                    extended = true;
                    break;
                }
                _ => {}
            }
        }
        if !extended {
            break cent;
        }
    };
    let frame = EigenFrame::new(d, &family);
    let parts: Option<Vec<QMatrix>> = cent
        .iter()
        .map(|x| frame.split_semisimple_part(x).filter(|s| s.is_zero() || in_span(&family, s)))
        .collect();
    let proven = parts.is_some_and(|parts| {
        let nil_parts: Vec<QMatrix> = cent.iter().zip(&parts).map(|(x, s)| x.sub(s)).collect();
        generate_nilpotent_algebra(&nil_parts, d)
    });
    let certificate = if proven {
        CertificateLevel::ProvenMaximal
    } else {
        CertificateLevel::HeuristicMaximal
    };
    torus_from_family(d, family, certificate)
}

/// Joint eigenspaces of commuting Q-diagonalizable matrices, keyed by the
/// vector of eigenvalues.
pub fn joint_eigenspaces(d: usize, family: &[QMatrix]) -> Vec<(Vec<Rational>, Subspace)> {
    let mut parts: Vec<(Vec<Rational>, Subspace)> = vec![(Vec::new(), Subspace::full(d))];
    for t in family {
        let spaces: Vec<(Rational, Subspace)> =
            t.minimal_polynomial().rational_roots().into_iter().map(|l| {
                let e = t.eigenspace(&l);
                (l, e)
            }).collect();
        let mut next = Vec::new();
        for (w, u) in &parts {
            for (l, e) in &spaces {
                let i = u.intersect(e);
                if !i.is_zero() {
                    let mut w2 = w.clone();
                    w2.push(l.clone());
                    next.push((w2, i));
                }
            }
        }
        parts = next;
    }
    parts
}

fn torus_from_family(d: usize, family: Vec<QMatrix>, certificate: CertificateLevel) -> SplitTorus {
    let r = family.len();
    if d == 0 {
        return SplitTorus { generators: family, weights: Vec::new(), weight_spaces: Vec::new(), certificate };
    }
    let parts = joint_eigenspaces(d, &family);
    if r == 0 {
        return SplitTorus {
            generators: Vec::new(),
            weights: vec![Vec::new()],
            weight_spaces: vec![Subspace::full(d)],
            certificate,
        };
    }
    // Z-basis of the weight lattice in Hermite form; coordinates c = w·B⁻¹.
    let lattice = ZLattice::from_generators(r, &parts.iter().map(|(w, _)| w.clone()).collect::<Vec<_>>());
    assert!(lattice.is_full(), "weights of independent generators span the dual space");
    let b = QMatrix::from_rows(lattice.basis());
    let binv = b.inverse().expect("full lattice basis");
    let mut coords: Vec<Vec<Rational>> = parts.iter().map(|(w, _)| binv.vec_mul(w)).collect();
    let mut gens: Vec<QMatrix> = (0..r)
        .map(|k| {
            let col: Vec<Rational> = (0..r).map(|i| binv[(i, k)].clone()).collect();
            QMatrix::combination(&col, &family)
        })
        .collect();
    // Sign of each coordinate: dimension-weighted sum non-negative; on a tie,
    // the component with the smallest leading column gets a non-negative value.
    for k in 0..r {
        let total: Rational = coords.iter().zip(&parts).map(|(c, (_, s))| &c[k] * &Rational::from(s.dim())).sum();
        let flip = if total.is_zero() {
            let first = (0..parts.len())
                .filter(|&i| !coords[i][k].is_zero())
                .min_by_key(|&i| parts[i].1.pivots()[0]);
            first.is_some_and(|i| coords[i][k].is_negative())
        } else {
            total.is_negative()
        };
        if flip {
            for c in coords.iter_mut() {
                c[k] = -&c[k];
            }
            gens[k] = gens[k].scale(&Rational::from_int(-1));
        }
    }
    let mut entries: Vec<(Weight, Subspace)> = coords
        .into_iter()
        .zip(parts)
        .map(|(c, (_, s))| (c.iter().map(|x| x.to_i64().expect("integer weight coordinates")).collect(), s))
        .collect();
    entries.sort_by(|a, b| a.0.cmp(&b.0));
    let (weights, weight_spaces) = entries.into_iter().unzip();
    SplitTorus { generators: gens, weights, weight_spaces, certificate }
}

/// The grading of `a` by the weights of a split torus of its derivations.
pub fn weight_decomposition(a: Arc<Algebra>, torus: &SplitTorus) -> Grading {
    let comps: BTreeMap<Weight, Subspace> =
        torus.weights.iter().cloned().zip(torus.weight_spaces.iter().cloned()).collect();
    Grading::new(a, torus.rank(), comps).expect("torus weight spaces form an algebra grading")
}

/// Torus generated by the given commuting Q-diagonalizable derivations.
pub fn torus_from_generators(d: usize, family: Vec<QMatrix>) -> SplitTorus {
    torus_from_family(d, family, CertificateLevel::HeuristicMaximal)
}
