//! Text formats for groupoids, homomorphisms and state problems, plus the
//! structured report emitted by the command-line tool.
//!
//! All formats are TOML. A groupoid file:
//!
//! ```toml
//! elements = ["e", "g"]
//! units = ["e"]
//! range = { e = "e", g = "e" }
//! source = { e = "e", g = "e" }
//! compose = [["e", "e", "e"], ["e", "g", "g"], ["g", "e", "g"], ["g", "g", "e"]]
//!
//! [cocycle]
//! order = 2
//! entries = [["g", "g", 1]]
//! ```

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::algebra::TwistedAlgebra;
use crate::cocycle::{build_cocycle_named, Cocycle, CocycleError};
use crate::groupoid::{build_groupoid, FiniteGroupoid, GroupoidError, GroupoidSpec};
use crate::linalg::CMatrix;
use crate::rep::{MatrixAlgebra, RepError, StarHom};

/// Version of the JSON report layout.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
    #[error(transparent)]
    Cocycle(#[from] CocycleError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error("{0}")]
    Invalid(String),
}

fn read(path: &Path) -> Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.display().to_string(),
        source,
    })
}

/// 1-based line and column of a byte offset.
fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rfind('\n').map_or(before.chars().count(), |i| before[i + 1..].chars().count()) + 1;
    (line, column)
}

fn from_toml<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, IoError> {
    toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map_or((1, 1), |s| line_col(text, s.start));
        IoError::Parse {
            line,
            column,
            message: e.message().to_string(),
        }
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupoidFile {
    pub elements: Vec<String>,
    pub units: Vec<String>,
    pub range: BTreeMap<String, String>,
    pub source: BTreeMap<String, String>,
    pub compose: Vec<(String, String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cocycle: Option<CocycleSection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CocycleSection {
    pub order: u32,
    #[serde(default)]
    pub entries: Vec<(String, String, u32)>,
}

impl GroupoidFile {
    /// Canonical description: arrow order, every composable pair, nonzero
    /// cocycle entries only.
    pub fn from_parts(g: &FiniteGroupoid, cocycle: Option<&Cocycle>) -> Self {
        let spec = g.to_spec();
        GroupoidFile {
            elements: spec.elements,
            units: spec.units,
            range: spec.range,
            source: spec.source,
            compose: spec.compose,
            cocycle: cocycle.map(|c| CocycleSection {
                order: c.order(),
                entries: c
                    .entries()
                    .into_iter()
                    .map(|(a, b, k)| (g.name(a).to_string(), g.name(b).to_string(), k))
                    .collect(),
            }),
        }
    }

    pub fn build(&self) -> Result<(Arc<FiniteGroupoid>, Option<Cocycle>), IoError> {
        let spec = GroupoidSpec {
            elements: self.elements.clone(),
            units: self.units.clone(),
            range: self.range.clone(),
            source: self.source.clone(),
            compose: self.compose.clone(),
        };
        let g = Arc::new(build_groupoid(&spec)?);
        let cocycle = match &self.cocycle {
            None => None,
            Some(sec) => {
                let entries: Vec<(&str, &str, u32)> =
                    sec.entries.iter().map(|(a, b, k)| (a.as_str(), b.as_str(), *k)).collect();
                Some(build_cocycle_named(g.clone(), sec.order, &entries)?)
            }
        };
        Ok((g, cocycle))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("groupoid files always serialize")
    }
}

pub fn parse_groupoid_str(text: &str) -> Result<(Arc<FiniteGroupoid>, Option<Cocycle>), IoError> {
    from_toml::<GroupoidFile>(text)?.build()
}

pub fn parse_groupoid_file(path: impl AsRef<Path>) -> Result<(Arc<FiniteGroupoid>, Option<Cocycle>), IoError> {
    parse_groupoid_str(&read(path.as_ref())?)
}

/// Twisted algebra of a parsed file (trivial cocycle when none is given).
pub fn algebra_of(g: Arc<FiniteGroupoid>, cocycle: Option<Cocycle>) -> Arc<TwistedAlgebra> {
    TwistedAlgebra::new(cocycle.unwrap_or_else(|| Cocycle::trivial(g)))
}

pub fn serialize_groupoid(g: &FiniteGroupoid, cocycle: Option<&Cocycle>) -> String {
    GroupoidFile::from_parts(g, cocycle).to_toml()
}

/// Row-major complex matrix, each entry an `[re, im]` pair.
pub type MatrixRows = Vec<Vec<[f64; 2]>>;

fn matrix_from_rows(rows: &MatrixRows, dim: usize, what: &str) -> Result<CMatrix, IoError> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(IoError::Invalid(format!("{what}: expected a {dim}×{dim} matrix")));
    }
    Ok(CMatrix::from_fn(dim, dim, |i, j| Complex64::new(rows[i][j][0], rows[i][j][1])))
}

pub fn matrix_to_rows(m: &CMatrix) -> MatrixRows {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re + 0.0, m[(i, j)].im + 0.0]).collect())
        .collect()
}

/// Sidecar listing `Ψ(δ_γ)` for every arrow.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomFile {
    pub dim: usize,
    pub images: BTreeMap<String, MatrixRows>,
}

impl HomFile {
    pub fn from_hom(h: &StarHom) -> Self {
        let g = h.algebra().groupoid();
        HomFile {
            dim: h.dim(),
            images: g
                .arrows()
                .map(|a| (g.name(a).to_string(), matrix_to_rows(&h.images()[a.0])))
                .collect(),
        }
    }

    /// Unvalidated homomorphism on `alg`.
    pub fn build(&self, alg: &Arc<TwistedAlgebra>) -> Result<StarHom, IoError> {
        let g = alg.groupoid();
        for name in self.images.keys() {
            if g.arrow(name).is_none() {
                return Err(IoError::Invalid(format!("image given for unknown element `{name}`")));
            }
        }
        let images = g
            .arrows()
            .map(|a| {
                let name = g.name(a);
                let rows = self
                    .images
                    .get(name)
                    .ok_or_else(|| IoError::Invalid(format!("no image given for `{name}`")))?;
                matrix_from_rows(rows, self.dim, &format!("image of `{name}`"))
            })
            .collect::<Result<Vec<_>, IoError>>()?;
        Ok(StarHom::unvalidated(alg.clone(), self.dim, images)?)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("hom files always serialize")
    }
}

pub fn parse_hom_str(text: &str, alg: &Arc<TwistedAlgebra>) -> Result<StarHom, IoError> {
    from_toml::<HomFile>(text)?.build(alg)
}

pub fn parse_hom_file(path: impl AsRef<Path>, alg: &Arc<TwistedAlgebra>) -> Result<StarHom, IoError> {
    parse_hom_str(&read(path.as_ref())?, alg)
}

/// A state-extension problem: `A ⊇ B` inside `M_dim` and a state on `B`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StatesFile {
    pub dim: usize,
    /// Spanning set of `A`; all of `M_dim` when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebra_basis: Option<Vec<MatrixRows>>,
    pub subalgebra_basis: Vec<MatrixRows>,
    /// Riesz matrix of the state: `φ(b) = tr(ρ† b)`.
    pub state: MatrixRows,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub candidates: Vec<MatrixRows>,
    /// Elements tested for membership in the unitary peak set.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub probe_elements: Vec<MatrixRows>,
}

pub struct StateProblem {
    pub algebra: MatrixAlgebra,
    pub subalgebra: MatrixAlgebra,
    pub riesz: CMatrix,
    pub candidates: Vec<CMatrix>,
    pub probe_elements: Vec<CMatrix>,
}

impl StatesFile {
    pub fn build(&self) -> Result<StateProblem, IoError> {
        let n = self.dim;
        if n == 0 {
            return Err(IoError::Invalid("dim must be positive".into()));
        }
        let many = |list: &[MatrixRows], what: &str| {
            list.iter()
                .enumerate()
                .map(|(i, r)| matrix_from_rows(r, n, &format!("{what}[{i}]")))
                .collect::<Result<Vec<_>, IoError>>()
        };
        let algebra = match &self.algebra_basis {
            None => MatrixAlgebra::full(n),
            Some(list) => MatrixAlgebra::from_spanning(n, many(list, "algebra_basis")?),
        };
        Ok(StateProblem {
            algebra,
            subalgebra: MatrixAlgebra::from_spanning(n, many(&self.subalgebra_basis, "subalgebra_basis")?),
            riesz: matrix_from_rows(&self.state, n, "state")?,
            candidates: many(&self.candidates, "candidates")?,
            probe_elements: many(&self.probe_elements, "probe_elements")?,
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("states files always serialize")
    }
}

pub fn parse_states_str(text: &str) -> Result<StateProblem, IoError> {
    from_toml::<StatesFile>(text)?.build()
}

pub fn parse_states_file(path: impl AsRef<Path>) -> Result<StateProblem, IoError> {
    parse_states_str(&read(path.as_ref())?)
}

/// Hex SHA-256 of the concatenated inputs (each length-prefixed).
pub fn digest(inputs: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    for input in inputs {
        h.update((input.len() as u64).to_le_bytes());
        h.update(input);
    }
    hex::encode(h.finalize())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

/// Outcome of one command: what was computed and which checks held.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub input_digest: String,
    pub seed: u64,
    pub tolerance: f64,
    pub findings: serde_json::Map<String, serde_json::Value>,
    pub assertions: Vec<Assertion>,
}

impl Report {
    pub fn new(command: &str, inputs: &[&[u8]], seed: u64, tolerance: f64) -> Self {
        Report {
            schema: SCHEMA_VERSION,
            command: command.to_string(),
            input_digest: digest(inputs),
            seed,
            tolerance,
            findings: serde_json::Map::new(),
            assertions: Vec::new(),
        }
    }

    pub fn finding(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        let v = serde_json::to_value(value).expect("findings are plain data");
        self.findings.insert(key.to_string(), v);
        self
    }

    pub fn check(&mut self, name: &str, passed: bool, detail: Option<String>) -> &mut Self {
        self.assertions.push(Assertion {
            name: name.to_string(),
            passed,
            detail,
        });
        self
    }

    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Assertion> {
        self.assertions.iter().filter(|a| !a.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// One line of `key: value` findings (booleans as yes/no), then one line
    /// per failed assertion.
    pub fn to_text(&self) -> String {
        let fmt = |v: &serde_json::Value| match v {
            serde_json::Value::Bool(true) => "yes".to_string(),
            serde_json::Value::Bool(false) => "no".to_string(),
            serde_json::Value::Null => "n/a".to_string(),
            serde_json::Value::String(s) => s.clone(),
            other => other.to_string().replace(',', ", "),
        };
        let mut out = self
            .findings
            .iter()
            .map(|(k, v)| format!("{k}: {}", fmt(v)))
            .collect::<Vec<_>>()
            .join(", ");
        for a in self.failures() {
            out.push_str(&format!("\nFAILED {}", a.name));
            if let Some(d) = &a.detail {
                out.push_str(&format!(": {d}"));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn round_trip_every_fixture() {
        for name in fixtures::NAMES {
            let sigma = fixtures::by_name(name).unwrap();
            let (g, c) = (sigma.groupoid().clone(), (!sigma.is_trivial()).then_some(sigma));
            let text = serialize_groupoid(&g, c.as_ref());
            let (g2, c2) = parse_groupoid_str(&text).unwrap();
            assert_eq!(*g2, *g, "{name}");
            assert_eq!(c2.as_ref().map(|c| c.entries()), c.as_ref().map(|c| c.entries()), "{name}");
            assert_eq!(serialize_groupoid(&g2, c2.as_ref()), text, "{name}");
        }
    }

    #[test]
    fn unknown_key_reports_position() {
        let text = "elements = [\"u\"]\nunits = [\"u\"]\nrange = { u = \"u\" }\nsource = { u = \"u\" }\ncompose = [[\"u\", \"u\", \"u\"]]\ncolour = 3\n";
        match parse_groupoid_str(text) {
            Err(IoError::Parse { line, message, .. }) => {
                assert_eq!(line, 6);
                assert!(message.contains("colour"), "{message}");
            }
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn missing_composite_is_named() {
        let text = "elements = [\"e\", \"g\"]\nunits = [\"e\"]\nrange = { e = \"e\", g = \"e\" }\nsource = { e = \"e\", g = \"e\" }\ncompose = [[\"e\", \"e\", \"e\"], [\"e\", \"g\", \"g\"], [\"g\", \"e\", \"g\"]]\n";
        match parse_groupoid_str(text) {
            Err(IoError::Groupoid(GroupoidError::MissingComposite(a, b))) => assert_eq!((a.as_str(), b.as_str()), ("g", "g")),
            other => panic!("expected MissingComposite, got {other:?}"),
        }
    }

    #[test]
    fn line_col_counts_from_one() {
        assert_eq!(line_col("ab\ncd", 0), (1, 1));
        assert_eq!(line_col("ab\ncd", 4), (2, 2));
    }

    #[test]
    fn report_text_and_digest() {
        let mut r = Report::new("simplicity", &[b"x"], 7, 1e-8);
        r.finding("simple", true).finding("blocks", vec![2, 2]);
        r.check("consistent", true, None);
        assert_eq!(r.to_text(), "simple: yes, blocks: [2, 2]");
        assert!(r.passed());
        assert_eq!(r.input_digest.len(), 64);
        assert_ne!(digest(&[b"ab", b"c"]), digest(&[b"a", b"bc"]));
        assert!(r.to_json().contains("\"schema\": 1"));
    }
}
