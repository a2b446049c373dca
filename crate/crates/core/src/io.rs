//! JSON algebra files.
//!
//! ```json
//! { "dim": 3, "kind": "lie", "basis": ["X", "Y", "Z"],
//!   "entries": [[1, 2, 3, "1"]] }
//! ```
//!
//! Entries are `[i, j, k, c]` with 1-based indices, meaning `eᵢ·eⱼ` has
//! coefficient `c` on `e_k`. Omitted entries are zero. For `kind = "lie"`
//! entries with `i < j` suffice; an entry with `i > j` is read as the
//! negated `(j, i)` entry.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, AlgebraKind};
use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub dim: usize,
    pub kind: AlgebraKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<String>>,
    #[serde(default)]
    pub entries: Vec<(usize, usize, usize, String)>,
}

impl AlgebraFile {
    pub fn from_algebra(a: &Algebra) -> AlgebraFile {
        let entries = a
            .entries()
            .into_iter()
            .filter(|(i, j, _, _)| !a.is_lie() || i < j)
            .map(|(i, j, k, c)| (i + 1, j + 1, k + 1, c.to_string()))
            .collect();
        AlgebraFile { dim: a.dim(), kind: a.kind(), basis: Some(a.names().to_vec()), entries }
    }

    /// Builds the algebra and checks the Lie axioms when `kind = "lie"`.
    pub fn to_algebra(&self) -> Result<Algebra> {
        let a = self.to_unvalidated_algebra()?;
        if let Some(v) = a.validate().violations.first() {
            return Err(Error::Validation(v.to_string()));
        }
        Ok(a)
    }

    /// Builds the algebra after the per-entry checks only; the Jacobi
    /// identity is left to [`Algebra::validate`].
    pub fn to_unvalidated_algebra(&self) -> Result<Algebra> {
        let d = self.dim;
        let names = match &self.basis {
            Some(b) if b.len() != d => {
                return Err(Error::Validation(format!("basis has {} names but dim is {d}", b.len())));
            }
            Some(b) => b.clone(),
            None => Algebra::default_names(d),
        };
        let lie = self.kind == AlgebraKind::Lie;
        let mut table: BTreeMap<(usize, usize, usize), (Rational, usize)> = BTreeMap::new();
        for (n, (i, j, k, c)) in self.entries.iter().enumerate() {
            let n = n + 1;
            if [*i, *j, *k].iter().any(|&x| x == 0 || x > d) {
                return Err(Error::Validation(format!(
                    "entry {n}: index ({i}, {j}, {k}) out of range 1..={d}"
                )));
            }
            let c: Rational =
                c.parse().map_err(|_| Error::Validation(format!("entry {n}: invalid rational {c:?}")))?;
            let (i, j, k) = (i - 1, j - 1, k - 1);
            let (key, c) = if lie && i > j { ((j, i, k), -c) } else { ((i, j, k), c) };
            if lie && i == j && !c.is_zero() {
                return Err(Error::Validation(format!(
                    "entry {n}: [e{0}, e{0}] must vanish in a Lie algebra",
                    i + 1
                )));
            }
            if let Some((prev, m)) = table.get(&key) {
                if *prev != c {
                    return Err(Error::Validation(format!("entry {n} conflicts with entry {m}")));
                }
                continue;
            }
            table.insert(key, (c, n));
        }
        let entries: Vec<_> = table.into_iter().map(|((i, j, k), (c, _))| (i, j, k, c)).collect();
        Algebra::from_entries(self.kind, names, &entries)
    }
}

pub fn parse_algebra_file(text: &str) -> Result<AlgebraFile> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))
}

pub fn parse_algebra(text: &str) -> Result<Algebra> {
    parse_algebra_file(text)?.to_algebra()
}

pub fn read_algebra(path: &Path) -> Result<Algebra> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    parse_algebra(&text)
}

pub fn write_algebra(a: &Algebra) -> String {
    let file = AlgebraFile::from_algebra(a);
    let mut out = String::from("{\n");
    out += &format!("  \"dim\": {},\n", file.dim);
    out += &format!("  \"kind\": {},\n", serde_json::to_string(&file.kind).expect("kind"));
    out += &format!("  \"basis\": {},\n", serde_json::to_string(&file.basis).expect("names"));
    out += "  \"entries\": [";
    for (n, (i, j, k, c)) in file.entries.iter().enumerate() {
        out += if n == 0 { "\n" } else { ",\n" };
        out += &format!("    [{i}, {j}, {k}, {}]", serde_json::to_string(c).expect("string"));
    }
    out += if file.entries.is_empty() { "]\n}\n" } else { "\n  ]\n}\n" };
    out
}
