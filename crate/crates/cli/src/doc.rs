//! Report documents: one serializable result type per command, built from
//! the library pipelines.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use nilgrade::carnot::CarnotOutcome;
use nilgrade::cohopf::{absolute_grading, intersection_lattice, preserves_some_lattice, stabilizes_some_lattice};
use nilgrade::cohopf::AbsoluteGrading;
use nilgrade::cone::{cartan_grading, fine_nonneg_grading};
use nilgrade::nilgroup::{
    defendo_modulus, growth_degree, homogeneous_dimension, systolic_experiment, uppersys_family, ExperimentTable,
    DEFAULT_CLASS_CAP,
};
use nilgrade::tori::maximal_split_torus;
use nilgrade::{
    carnot_test, classify, cone_flags, contractive_decomposition, parse_algebra_file, Algebra, AlgebraKind,
    CertificateLevel, Classification, ConeFlags, DefendoCertificate, Error, Grading, NilGroup, QMatrix, Rational,
    Result, Subspace, TorusOptions, ValidationReport, Violation, Weight, ZLattice,
};
use serde::Serialize;
use sha2::{Digest, Sha256};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug)]
pub struct Settings {
    pub seed: u64,
    pub precision_budget: usize,
    pub enum_budget: u64,
    pub class_cap: usize,
    pub timings: bool,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            seed: 0,
            precision_budget: 64,
            enum_budget: nilgrade::nilgroup::systole::DEFAULT_ENUM_BUDGET,
            class_cap: DEFAULT_CLASS_CAP,
            timings: false,
        }
    }
}

impl Settings {
    fn torus(&self) -> TorusOptions {
        TorusOptions { seed: self.seed, ..TorusOptions::default() }
    }
}

/// Wall-clock durations of named stages, reported only on request.
#[derive(Default)]
pub struct Timings(BTreeMap<&'static str, f64>);

impl Timings {
    pub fn time<T>(&mut self, stage: &'static str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        *self.0.entry(stage).or_default() += start.elapsed().as_secs_f64() * 1000.0;
        out
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct InputInfo {
    pub sha256: String,
    pub dim: usize,
    pub kind: AlgebraKind,
    pub basis: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct Document<T: Serialize> {
    pub schema_version: u32,
    pub tool: String,
    pub command: &'static str,
    pub seed: u64,
    pub input: InputInfo,
    pub result: T,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<&'static str, f64>>,
}

#[derive(Debug, Serialize)]
pub struct ErrorInfo {
    pub kind: &'static str,
    pub exit_code: i32,
    pub message: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub violations: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct ErrorDocument {
    pub schema_version: u32,
    pub tool: String,
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<InputInfo>,
    pub error: ErrorInfo,
}

pub fn tool() -> String {
    format!("nilgrade {}", env!("CARGO_PKG_VERSION"))
}

/// A failure with the input summary when the file got that far.
#[derive(Debug)]
pub struct Failure {
    pub error: Error,
    pub input: Option<InputInfo>,
    pub violations: Vec<Violation>,
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        Failure { error, input: None, violations: Vec::new() }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BoxTooLarge { .. } | Error::PrecisionExhausted => 3,
        Error::Invariant(_) => 4,
        _ => 2,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Parse(_) => "parse",
        Error::Validation(_) => "validation",
        Error::BoxTooLarge { .. } | Error::PrecisionExhausted => "budget",
        Error::Invariant(_) => "invariant",
        _ => "precondition",
    }
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        exit_code(&self.error)
    }

    pub fn info(&self) -> ErrorInfo {
        ErrorInfo {
            kind: error_kind(&self.error),
            exit_code: self.exit_code(),
            message: self.error.to_string(),
            violations: self.violations.iter().map(ToString::to_string).collect(),
        }
    }

    pub fn document(&self, command: &'static str) -> ErrorDocument {
        ErrorDocument {
            schema_version: SCHEMA_VERSION,
            tool: tool(),
            command,
            input: self.input.clone(),
            error: self.info(),
        }
    }
}

/// `path`, or `path.json` when only the latter exists.
pub fn resolve(path: &Path) -> PathBuf {
    if !path.exists() && path.extension().is_none() {
        let with_ext = path.with_extension("json");
        if with_ext.exists() {
            return with_ext;
        }
    }
    path.to_path_buf()
}

/// A parsed and validated input file.
pub struct Loaded {
    pub algebra: Arc<Algebra>,
    pub info: InputInfo,
}

pub fn load(path: &Path) -> std::result::Result<Loaded, Failure> {
    let path = resolve(path);
    let bytes = std::fs::read(&path).map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| Error::Parse(format!("{} is not UTF-8", path.display())))?;
    let a = parse_algebra_file(&text)?.to_unvalidated_algebra()?;
    let info = InputInfo {
        sha256: hex::encode(Sha256::digest(&bytes)),
        dim: a.dim(),
        kind: a.kind(),
        basis: a.names().to_vec(),
    };
    let report = a.validate();
    if !report.is_ok() {
        let first = report.violations[0].to_string();
        return Err(Failure {
            error: Error::Validation(format!("{first} ({} violation(s))", report.violations.len())),
            input: Some(info),
            violations: report.violations,
        });
    }
    Ok(Loaded { algebra: Arc::new(a), info })
}

pub fn document<T: Serialize>(command: &'static str, s: &Settings, info: InputInfo, result: T, t: Timings) -> Document<T> {
    Document {
        schema_version: SCHEMA_VERSION,
        tool: tool(),
        command,
        seed: s.seed,
        input: info,
        result,
        timings_ms: s.timings.then_some(t.0),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ComponentDoc {
    pub weight: Weight,
    pub dim: usize,
    pub basis: Subspace,
}

pub fn components(gr: &Grading) -> Vec<ComponentDoc> {
    gr.components().iter().map(|(w, s)| ComponentDoc { weight: w.clone(), dim: s.dim(), basis: s.clone() }).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct WeightDim {
    pub weight: Weight,
    pub dim: usize,
}

fn weight_dims(gr: &Grading) -> Vec<WeightDim> {
    gr.dims().into_iter().map(|(weight, dim)| WeightDim { weight, dim }).collect()
}

/// The most specific classification label.
pub fn label(c: &Classification) -> &'static str {
    if c.dis_cohopfian {
        "dis-cohopfian"
    } else if c.weakly_dis_cohopfian {
        "weakly-dis-cohopfian"
    } else if c.non_cohopfian {
        "non-cohopfian"
    } else {
        "cohopfian"
    }
}

// ---------------------------------------------------------------- report

#[derive(Debug, Serialize)]
pub struct CarnotSummary {
    pub carnot: bool,
    /// Degrees and dimensions of the Carnot grading.
    pub degrees: Option<Vec<WeightDim>>,
}

#[derive(Debug, Serialize)]
pub struct TorusSummary {
    pub rank: usize,
    pub certificate: CertificateLevel,
    pub weights: Vec<WeightDim>,
}

#[derive(Debug, Serialize)]
pub struct ContractiveSummary {
    pub uncontracted_dim: usize,
    pub contracted_dim: usize,
    pub witness: Vec<i64>,
}

#[derive(Debug, Serialize)]
pub struct RadicalSummary {
    pub cni_dim: usize,
    pub cni_plus_dim: usize,
    pub cni_exact: bool,
}

#[derive(Debug, Serialize)]
pub struct ClassificationSummary {
    pub label: &'static str,
    #[serde(flatten)]
    pub flags: Classification,
    pub min_hirsch_length: usize,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub validation: ValidationReport,
    pub nilpotent: bool,
    pub lower_series: Vec<usize>,
    pub class: Option<usize>,
    pub center_dim: usize,
    pub growth_degree: Option<usize>,
    pub carnot: Option<CarnotSummary>,
    pub torus: TorusSummary,
    pub cone: ConeFlags,
    pub contractive: ContractiveSummary,
    pub radicals: Option<RadicalSummary>,
    pub classification: Option<ClassificationSummary>,
}

pub fn report(a: &Arc<Algebra>, s: &Settings, t: &mut Timings) -> Result<Report> {
    let series = t.time("lower_series", || a.lower_series());
    let nilpotent = series.class.is_some();
    let carnot = if nilpotent {
        let outcome = t.time("carnot", || carnot_test(a))?;
        Some(CarnotSummary { carnot: outcome.is_carnot(), degrees: outcome.witness().map(|w| weight_dims(&w.grading)) })
    } else {
        None
    };
    let (gr, certificate) = t.time("torus", || cartan_grading(a, s.torus()));
    let cone = t.time("cone", || cone_flags(&gr));
    let dec = t.time("contractive", || contractive_decomposition(&gr))?;
    let (radicals, classification) = if a.is_lie() && nilpotent {
        let r = t.time("cohopf", || classify(a, s.torus()))?;
        (
            Some(RadicalSummary { cni_dim: r.cni.dim(), cni_plus_dim: r.cni_plus.dim(), cni_exact: r.cni_exact }),
            Some(ClassificationSummary {
                label: label(&r.classification),
                flags: r.classification,
                min_hirsch_length: r.min_hirsch_length,
            }),
        )
    } else {
        (None, None)
    };
    Ok(Report {
        validation: a.validate(),
        nilpotent,
        lower_series: series.dims(),
        class: series.class,
        center_dim: a.center().dim(),
        growth_degree: if nilpotent { Some(growth_degree(a)?) } else { None },
        carnot,
        torus: TorusSummary { rank: gr.rank(), certificate, weights: weight_dims(&gr) },
        cone,
        contractive: ContractiveSummary {
            uncontracted_dim: dec.uncontracted_dim,
            contracted_dim: dec.contracted_dim,
            witness: dec.witness,
        },
        radicals,
        classification,
    })
}

// ---------------------------------------------------------------- carnot

#[derive(Debug, Serialize)]
pub struct CarnotResult {
    pub carnot: bool,
    pub lower_series: Vec<usize>,
    /// Components `g_i` of the Carnot grading.
    pub grading: Option<Vec<ComponentDoc>>,
    /// A derivation acting by `i` on `g_i`.
    pub derivation: Option<QMatrix>,
    /// Number of equations combined by the infeasibility certificate.
    pub certificate_equations: Option<usize>,
}

pub fn carnot(a: &Arc<Algebra>, t: &mut Timings) -> Result<CarnotResult> {
    let outcome = t.time("carnot", || carnot_test(a))?;
    let lower_series = a.lower_series().dims();
    Ok(match outcome {
        CarnotOutcome::Carnot(w) => CarnotResult {
            carnot: true,
            lower_series,
            grading: Some(components(&w.grading)),
            derivation: Some(w.derivation),
            certificate_equations: None,
        },
        CarnotOutcome::NotCarnot(cert) => CarnotResult {
            carnot: false,
            lower_series,
            grading: None,
            derivation: None,
            certificate_equations: Some(cert.equations.len()),
        },
    })
}

// ---------------------------------------------------------------- torus

#[derive(Debug, Serialize)]
pub struct TorusResult {
    pub rank: usize,
    pub certificate: CertificateLevel,
    pub generators: Vec<QMatrix>,
    pub components: Vec<ComponentDoc>,
    pub cone: ConeFlags,
}

pub fn torus(a: &Arc<Algebra>, s: &Settings, t: &mut Timings) -> Result<TorusResult> {
    let torus = t.time("torus", || maximal_split_torus(a, s.torus()));
    let gr = nilgrade::tori::weight_decomposition(a.clone(), &torus);
    Ok(TorusResult {
        rank: torus.rank(),
        certificate: torus.certificate,
        generators: torus.generators.clone(),
        components: components(&gr),
        cone: cone_flags(&gr),
    })
}

// ---------------------------------------------------------------- cohopf

#[derive(Debug, Serialize)]
pub struct AutomorphismResult {
    pub matrix: QMatrix,
    pub is_automorphism: bool,
    pub stabilizes_some_lattice: bool,
    pub preserves_some_lattice: bool,
    pub absolute_grading: AbsoluteGrading,
    /// `⋂ ξⁿ(Zᵈ)` when `ξ` stabilizes the standard lattice.
    pub intersection_with_standard_lattice: Option<ZLattice>,
}

#[derive(Debug, Serialize)]
pub struct CohopfResult {
    pub label: &'static str,
    pub report: nilgrade::CohopfReport,
    pub automorphism: Option<AutomorphismResult>,
}

/// Square matrix file: a JSON array of rows of rational strings.
pub fn read_matrix(path: &Path) -> Result<QMatrix> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    let rows: Vec<Vec<Rational>> = serde_json::from_str(&text)
        .map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::Validation(format!("matrix must be square with {n} columns in every row")));
    }
    Ok(QMatrix::from_rows(rows))
}

pub fn cohopf(a: &Arc<Algebra>, xi: Option<QMatrix>, s: &Settings, t: &mut Timings) -> Result<CohopfResult> {
    let report = t.time("classify", || classify(a, s.torus()))?;
    let automorphism = match xi {
        None => None,
        Some(xi) => {
            if xi.rows() != a.dim() {
                return Err(Error::DimensionMismatch(format!(
                    "matrix is {0}x{0} but the algebra has dimension {1}",
                    xi.rows(),
                    a.dim()
                )));
            }
            let ag = t.time("absolute_grading", || absolute_grading(&xi, s.precision_budget))?;
            let standard = ZLattice::standard(a.dim());
            let intersection = if standard.is_stable_under(&xi) {
                Some(t.time("intersection", || intersection_lattice(&xi, &standard, s.precision_budget))?)
            } else {
                None
            };
            Some(AutomorphismResult {
                is_automorphism: a.is_automorphism(&xi),
                stabilizes_some_lattice: stabilizes_some_lattice(&xi)?,
                preserves_some_lattice: preserves_some_lattice(&xi)?,
                absolute_grading: ag,
                intersection_with_standard_lattice: intersection,
                matrix: xi,
            })
        }
    };
    Ok(CohopfResult { label: label(&report.classification), report, automorphism })
}

// ---------------------------------------------------------------- growth

#[derive(Debug, Serialize)]
pub struct GrowthResult {
    pub lower_series: Vec<usize>,
    pub class: usize,
    /// Polynomial growth degree `Σ i·dim(g^(i)/g^(i+1))`.
    pub growth_degree: usize,
    pub carnot: bool,
    /// `Σ n dim g_n` for the Carnot grading, or for the fine non-negative
    /// grading when the algebra is not Carnot.
    pub homogeneous_dimension: i64,
    pub grading: &'static str,
    /// Exponent `D = c·dim[g,g] + dim(g/[g,g])` of the systolic upper bound.
    pub uppersys_exponent: usize,
}

/// The grading used by `defendo` and `systole`: the Carnot grading when it
/// exists, otherwise the fine non-negative grading.
fn working_grading(a: &Arc<Algebra>, s: &Settings, t: &mut Timings) -> Result<(Grading, &'static str)> {
    let outcome = t.time("carnot", || carnot_test(a))?;
    Ok(match outcome.witness() {
        Some(w) => (w.grading.clone(), "carnot"),
        None => (t.time("fine_grading", || fine_nonneg_grading(a, s.torus())), "fine-nonnegative"),
    })
}

pub fn growth(a: &Arc<Algebra>, s: &Settings, t: &mut Timings) -> Result<GrowthResult> {
    let g = NilGroup::new(a.clone(), s.class_cap)?;
    let (gr, kind) = working_grading(a, s, t)?;
    let family = uppersys_family(&g, 1)?;
    Ok(GrowthResult {
        lower_series: a.lower_series().dims(),
        class: g.class(),
        growth_degree: growth_degree(a)?,
        carnot: kind == "carnot",
        homogeneous_dimension: homogeneous_dimension(&gr)?,
        grading: kind,
        uppersys_exponent: family.exponent_d,
    })
}

// ---------------------------------------------------------------- defendo

#[derive(Debug, Serialize)]
pub struct DefendoResult {
    pub grading: &'static str,
    pub degrees: Vec<WeightDim>,
    pub lattice: ZLattice,
    pub lattice_verified: bool,
    pub growth_degree: usize,
    pub certificate: DefendoCertificate,
    pub passed: bool,
}

pub fn defendo(a: &Arc<Algebra>, s: &Settings, t: &mut Timings) -> Result<DefendoResult> {
    let g = NilGroup::new(a.clone(), s.class_cap)?;
    let (gr, kind) = working_grading(a, s, t)?;
    let lattice = t.time("lattice", || uppersys_family(&g, 1))?.lattice;
    let certificate = t.time("defendo", || defendo_modulus(&g, &gr, &lattice))?;
    Ok(DefendoResult {
        grading: kind,
        degrees: weight_dims(&gr),
        lattice_verified: lattice.verified,
        lattice: lattice.log_lattice,
        growth_degree: growth_degree(a)?,
        passed: certificate.passed(),
        certificate,
    })
}

// ---------------------------------------------------------------- systole

#[derive(Debug, Serialize)]
pub struct SystoleResult {
    pub grading: &'static str,
    pub degrees: Vec<WeightDim>,
    pub lattice: ZLattice,
    pub growth_degree: usize,
    pub experiment: ExperimentTable,
}

pub fn systole(a: &Arc<Algebra>, ms: &[i64], s: &Settings, t: &mut Timings) -> Result<SystoleResult> {
    let g = NilGroup::new(a.clone(), s.class_cap)?;
    let (gr, kind) = working_grading(a, s, t)?;
    if gr.weights().iter().any(|w| w.first().is_none_or(|&x| x <= 0)) {
        return Err(Error::BadGrading(
            "systoles need a positive grading; the algebra is neither Carnot nor contractable".into(),
        ));
    }
    let lattice = t.time("lattice", || uppersys_family(&g, 1))?.lattice.log_lattice;
    let experiment = t.time("experiment", || systolic_experiment(&gr, &lattice, ms, s.enum_budget))?;
    Ok(SystoleResult { grading: kind, degrees: weight_dims(&gr), lattice, growth_degree: growth_degree(a)?, experiment })
}

// ---------------------------------------------------------------- batch

#[derive(Debug, Serialize)]
pub struct BatchEntry {
    pub file: String,
    pub exit_code: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<InputInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<Report>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorInfo>,
}

#[derive(Debug, Serialize)]
pub struct BatchDocument {
    pub schema_version: u32,
    pub tool: String,
    pub command: &'static str,
    pub seed: u64,
    pub files: Vec<BatchEntry>,
}

/// Algebra files of a directory in name order, skipping expected reports.
pub fn batch_inputs(dir: &Path) -> Result<Vec<PathBuf>> {
    let entries = std::fs::read_dir(dir).map_err(|e| Error::Parse(format!("cannot read {}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            let name = p.file_name().and_then(|n| n.to_str()).unwrap_or("");
            name.ends_with(".json") && !name.ends_with(".expected.json")
        })
        .collect();
    files.sort();
    Ok(files)
}

pub fn batch_entry(path: &Path, s: &Settings) -> BatchEntry {
    let file = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let outcome = load(path).and_then(|l| {
        let mut t = Timings::default();
        report(&l.algebra, s, &mut t).map(|r| (l.info.clone(), r)).map_err(|e| Failure {
            error: e,
            input: Some(l.info),
            violations: Vec::new(),
        })
    });
    match outcome {
        Ok((info, r)) => BatchEntry { file, exit_code: 0, input: Some(info), report: Some(r), error: None },
        Err(f) => BatchEntry { file, exit_code: f.exit_code(), input: f.input.clone(), report: None, error: Some(f.info()) },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_by_error_class() {
        assert_eq!(exit_code(&Error::Parse("x".into())), 2);
        assert_eq!(exit_code(&Error::NotNilpotent), 2);
        assert_eq!(exit_code(&Error::ClassTooLarge { class: 12, cap: 10 }), 2);
        assert_eq!(exit_code(&Error::BoxTooLarge { budget: 5 }), 3);
        assert_eq!(exit_code(&Error::PrecisionExhausted), 3);
        assert_eq!(exit_code(&Error::Invariant("x".into())), 4);
    }

    #[test]
    fn labels_prefer_the_strongest_property() {
        let c = |dis: bool, weak: bool, non: bool| Classification {
            cohopfian: !non,
            non_cohopfian: non,
            dis_cohopfian: dis,
            weakly_dis_cohopfian: weak,
        };
        assert_eq!(label(&c(true, true, true)), "dis-cohopfian");
        assert_eq!(label(&c(false, true, true)), "weakly-dis-cohopfian");
        assert_eq!(label(&c(false, false, true)), "non-cohopfian");
        assert_eq!(label(&c(false, false, false)), "cohopfian");
    }

    #[test]
    fn report_of_the_abelian_plane() {
        let a = Arc::new(Algebra::abelian(2));
        let r = report(&a, &Settings::default(), &mut Timings::default()).unwrap();
        assert_eq!(r.class, Some(1));
        assert_eq!(r.growth_degree, Some(2));
        assert_eq!(r.torus.rank, 2);
        assert!(r.carnot.unwrap().carnot);
        assert_eq!(r.classification.unwrap().label, "dis-cohopfian");
    }
}
