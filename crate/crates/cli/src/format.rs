//! Canonical JSON artifacts and CSV summaries.
//!
//! Every artifact is one compact JSON object followed by a newline. The first
//! two fields are `kind` and `version` (always `"1"`); the remaining fields
//! come in the order of the record structs below. Determinants, primes and the
//! embedding integers are decimal strings, index sets are strictly increasing
//! arrays, and the optional `provenance` object records the command and seed.

use discrepancy_core::bounds::{CheckReport, LowerBoundCert};
use discrepancy_core::det::DetSearchOutcome;
use discrepancy_core::embedding::EmbeddingWitness;
use discrepancy_core::exact::{ExactResult, Witness};
use discrepancy_core::heuristics::HeuristicOutcome;
use discrepancy_core::{BitSet, Coloring, DiscrepancyReport, NamedSet, SetSystem, SignMatrix};
use num_bigint::{BigInt, BigUint};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

pub const VERSION: &str = "1";

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid field in {kind}: {message}")]
    Field { kind: String, message: String },
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("{0}")]
    Unsupported(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Provenance {
    pub command: String,
    pub seed: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Artifact {
    SetSystem(SetSystem),
    SignMatrix(SignMatrix),
    Coloring(Coloring),
    Embedding(EmbeddingWitness),
    Certificate(LowerBoundCert),
    Check(CheckReport),
    Discrepancy(DiscrepancyReport),
    Exact(ExactResult),
    Heuristic { method: String, outcome: HeuristicOutcome },
    DetSearch(DetSearchOutcome),
}

impl Artifact {
    pub fn kind(&self) -> &'static str {
        match self {
            Artifact::SetSystem(_) => "set_system",
            Artifact::SignMatrix(_) => "sign_matrix",
            Artifact::Coloring(_) => "coloring",
            Artifact::Embedding(_) => "embedding_witness",
            Artifact::Certificate(_) => "lower_bound_cert",
            Artifact::Check(_) => "check_report",
            Artifact::Discrepancy(_) => "discrepancy_report",
            Artifact::Exact(_) => "exact_result",
            Artifact::Heuristic { .. } => "heuristic_outcome",
            Artifact::DetSearch(_) => "det_search",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub artifact: Artifact,
    pub provenance: Option<Provenance>,
}

impl Document {
    pub fn new(artifact: Artifact, provenance: Option<Provenance>) -> Self {
        Document { artifact, provenance }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SetRecord {
    name: String,
    members: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SetSystemRecord {
    kind: String,
    version: String,
    ground: Vec<String>,
    sets: Vec<SetRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    provenance: Option<Provenance>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SignMatrixRecord {
    kind: String,
    version: String,
    rows: usize,
    cols: usize,
    entries: Vec<Vec<i8>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    row_labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    col_labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    provenance: Option<Provenance>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ColoringRecord {
    kind: String,
    version: String,
    n: usize,
    values: Vec<i8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    provenance: Option<Provenance>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EmbeddingRecord {
    kind: String,
    version: String,
    d: usize,
    primes: Vec<String>,
    /// By point index.
    b: Vec<String>,
    /// By base-3 pattern index.
    a: Vec<String>,
    n: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    provenance: Option<Provenance>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CertRecord {
    kind: String,
    version: String,
    det: String,
    k: usize,
    bound: f64,
    row_subset: Vec<usize>,
    col_subset: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    provenance: Option<Provenance>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CheckRecord {
    kind: String,
    version: String,
    name: String,
    passed: bool,
    trials: u64,
    detail: String,
    notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    provenance: Option<Provenance>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DiscrepancyRecord {
    kind: String,
    version: String,
    value: u64,
    argmax_row: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    per_row: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    provenance: Option<Provenance>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExactRecord {
    kind: String,
    version: String,
    value: u64,
    cols: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coloring: Option<Vec<i8>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    subset: Option<Vec<usize>>,
    nodes_explored: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    provenance: Option<Provenance>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HeuristicRecord {
    kind: String,
    version: String,
    method: String,
    achieved: u64,
    guarantee: Option<u64>,
    iterations: u64,
    coloring: Vec<i8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    provenance: Option<Provenance>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DetSearchRecord {
    kind: String,
    version: String,
    columns: Vec<usize>,
    det: String,
    root: f64,
    threshold: f64,
    met_threshold: bool,
    work: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    provenance: Option<Provenance>,
}

fn strings<T: ToString>(xs: &[T]) -> Vec<String> {
    xs.iter().map(ToString::to_string).collect()
}

fn write<T: Serialize>(record: &T) -> String {
    let mut s = serde_json::to_string(record).expect("records serialize");
    s.push('\n');
    s
}

pub fn to_json(doc: &Document) -> String {
    let kind = doc.artifact.kind().to_string();
    let version = VERSION.to_string();
    let provenance = doc.provenance.clone();
    match &doc.artifact {
        Artifact::SetSystem(s) => write(&SetSystemRecord {
            kind,
            version,
            ground: s.ground().to_vec(),
            sets: s
                .sets()
                .iter()
                .map(|set| SetRecord {
                    name: set.name.clone(),
                    members: set.members.ones().collect(),
                })
                .collect(),
            provenance,
        }),
        Artifact::SignMatrix(m) => write(&SignMatrixRecord {
            kind,
            version,
            rows: m.rows(),
            cols: m.cols(),
            entries: m.to_rows(),
            row_labels: m.row_labels().map(<[String]>::to_vec),
            col_labels: m.col_labels().map(<[String]>::to_vec),
            provenance,
        }),
        Artifact::Coloring(c) => write(&ColoringRecord {
            kind,
            version,
            n: c.len(),
            values: c.values().to_vec(),
            provenance,
        }),
        Artifact::Embedding(w) => write(&EmbeddingRecord {
            kind,
            version,
            d: w.dim(),
            primes: strings(w.primes()),
            b: strings(w.b_values()),
            a: strings(w.a_values()),
            n: w.n().to_string(),
            provenance,
        }),
        Artifact::Certificate(c) => write(&CertRecord {
            kind,
            version,
            det: c.det.to_string(),
            k: c.k,
            bound: c.bound,
            row_subset: c.row_subset.clone(),
            col_subset: c.col_subset.clone(),
            provenance,
        }),
        Artifact::Check(r) => write(&CheckRecord {
            kind,
            version,
            name: r.name.clone(),
            passed: r.passed,
            trials: r.trials,
            detail: r.detail.clone(),
            notes: r.notes.clone(),
            provenance,
        }),
        Artifact::Discrepancy(r) => write(&DiscrepancyRecord {
            kind,
            version,
            value: r.value,
            argmax_row: r.argmax_row,
            per_row: r.per_row.clone(),
            provenance,
        }),
        Artifact::Exact(r) => {
            let (cols, coloring, subset) = match &r.witness {
                Witness::Coloring(c) => (c.len(), Some(c.values().to_vec()), None),
                Witness::Subset(s) => (s.len(), None, Some(s.ones().collect())),
            };
            write(&ExactRecord {
                kind,
                version,
                value: r.value,
                cols,
                coloring,
                subset,
                nodes_explored: r.nodes_explored,
                provenance,
            })
        }
        Artifact::Heuristic { method, outcome } => write(&HeuristicRecord {
            kind,
            version,
            method: method.clone(),
            achieved: outcome.achieved,
            guarantee: outcome.guarantee,
            iterations: outcome.iterations,
            coloring: outcome.coloring.values().to_vec(),
            provenance,
        }),
        Artifact::DetSearch(o) => write(&DetSearchRecord {
            kind,
            version,
            columns: o.columns.clone(),
            det: o.det.to_string(),
            root: o.root,
            threshold: o.threshold,
            met_threshold: o.met_threshold,
            work: o.work,
            provenance,
        }),
    }
}

fn invariant(message: impl Into<String>) -> FormatError {
    FormatError::Invariant(message.into())
}

fn record<T: DeserializeOwned>(kind: &str, value: serde_json::Value) -> Result<T, FormatError> {
    serde_json::from_value(value).map_err(|e| FormatError::Field {
        kind: kind.to_string(),
        message: e.to_string(),
    })
}

fn sorted_indices(what: &str, idx: &[usize], bound: usize) -> Result<(), FormatError> {
    if idx.windows(2).any(|w| w[0] >= w[1]) {
        return Err(invariant(format!("{what} must be strictly increasing")));
    }
    if let Some(&i) = idx.iter().find(|&&i| i >= bound) {
        return Err(invariant(format!("{what} index {i} out of range {bound}")));
    }
    Ok(())
}

fn signs(what: &str, values: Vec<i8>) -> Result<Coloring, FormatError> {
    if let Some(p) = values.iter().position(|&x| x != 1 && x != -1) {
        return Err(invariant(format!(
            "{what} entries must be +1 or -1 (entry {p} is {})",
            values[p]
        )));
    }
    Coloring::new(values).map_err(|e| invariant(e.to_string()))
}

fn big_uint(what: &str, s: &str) -> Result<BigUint, FormatError> {
    s.parse().map_err(|_| invariant(format!("{what} must be a decimal integer, got {s:?}")))
}

fn check_version(kind: &str, version: &str) -> Result<(), FormatError> {
    if version != VERSION {
        return Err(FormatError::Field {
            kind: kind.to_string(),
            message: format!("unsupported version {version:?}"),
        });
    }
    Ok(())
}

/// Parses and validates one artifact.
pub fn from_json(text: &str) -> Result<Document, FormatError> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| FormatError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let kind = value
        .get("kind")
        .and_then(|k| k.as_str())
        .ok_or_else(|| FormatError::Field {
            kind: "artifact".into(),
            message: "missing string field `kind`".into(),
        })?
        .to_string();
    let kind = kind.as_str();
    let (artifact, version, provenance) = match kind {
        "set_system" => {
            let r: SetSystemRecord = record(kind, value)?;
            let n = r.ground.len();
            let mut sets = Vec::with_capacity(r.sets.len());
            for s in r.sets {
                sorted_indices(&format!("members of set {:?}", s.name), &s.members, n)?;
                let members = BitSet::from_indices(n, s.members).expect("indices checked");
                sets.push(NamedSet { name: s.name, members });
            }
            let system = SetSystem::new(r.ground, sets).map_err(|e| invariant(e.to_string()))?;
            (Artifact::SetSystem(system), r.version, r.provenance)
        }
        "sign_matrix" => {
            let r: SignMatrixRecord = record(kind, value)?;
            if r.entries.len() != r.rows {
                return Err(invariant(format!("expected {} rows, found {}", r.rows, r.entries.len())));
            }
            if let Some(i) = r.entries.iter().position(|row| row.len() != r.cols) {
                return Err(invariant(format!("ragged matrix: row {i} does not have {} entries", r.cols)));
            }
            let entries: Vec<i8> = r.entries.into_iter().flatten().collect();
            if entries.iter().any(|x| !(-1..=1).contains(x)) {
                return Err(invariant("matrix entries must lie in {-1, 0, 1}"));
            }
            let m = SignMatrix::new(r.rows, r.cols, entries)
                .and_then(|m| m.with_labels(r.row_labels, r.col_labels))
                .map_err(|e| invariant(e.to_string()))?;
            (Artifact::SignMatrix(m), r.version, r.provenance)
        }
        "coloring" => {
            let r: ColoringRecord = record(kind, value)?;
            if r.values.len() != r.n {
                return Err(invariant(format!("expected {} values, found {}", r.n, r.values.len())));
            }
            (Artifact::Coloring(signs("coloring", r.values)?), r.version, r.provenance)
        }
        "embedding_witness" => {
            let r: EmbeddingRecord = record(kind, value)?;
            let primes = r
                .primes
                .iter()
                .map(|p| p.parse::<u64>().map_err(|_| invariant(format!("prime {p:?} is not a 64-bit integer"))))
                .collect::<Result<Vec<_>, _>>()?;
            let b = r.b.iter().map(|x| big_uint("b", x)).collect::<Result<Vec<_>, _>>()?;
            let a = r.a.iter().map(|x| big_uint("a", x)).collect::<Result<Vec<_>, _>>()?;
            let n = big_uint("n", &r.n)?;
            let w = EmbeddingWitness::from_parts(r.d, primes, b, a, n).map_err(|e| invariant(e.to_string()))?;
            (Artifact::Embedding(w), r.version, r.provenance)
        }
        "lower_bound_cert" => {
            let r: CertRecord = record(kind, value)?;
            let det: BigInt = r
                .det
                .parse()
                .map_err(|_| invariant(format!("det must be a decimal integer, got {:?}", r.det)))?;
            if r.k == 0 || r.row_subset.len() != r.k || r.col_subset.len() != r.k {
                return Err(invariant("row and column subsets must both have k > 0 entries"));
            }
            sorted_indices("row_subset", &r.row_subset, usize::MAX)?;
            sorted_indices("col_subset", &r.col_subset, usize::MAX)?;
            if !r.bound.is_finite() || r.bound < 0.0 {
                return Err(invariant("bound must be a nonnegative number"));
            }
            let cert = LowerBoundCert {
                k: r.k,
                row_subset: r.row_subset,
                col_subset: r.col_subset,
                det,
                bound: r.bound,
            };
            (Artifact::Certificate(cert), r.version, r.provenance)
        }
        "check_report" => {
            let r: CheckRecord = record(kind, value)?;
            let report = CheckReport {
                name: r.name,
                passed: r.passed,
                detail: r.detail,
                trials: r.trials,
                notes: r.notes,
            };
            (Artifact::Check(report), r.version, r.provenance)
        }
        "discrepancy_report" => {
            let r: DiscrepancyRecord = record(kind, value)?;
            let report = DiscrepancyReport {
                value: r.value,
                argmax_row: r.argmax_row,
                per_row: r.per_row,
            };
            (Artifact::Discrepancy(report), r.version, r.provenance)
        }
        "exact_result" => {
            let r: ExactRecord = record(kind, value)?;
            let witness = match (r.coloring, r.subset) {
                (Some(c), None) => {
                    if c.len() != r.cols {
                        return Err(invariant("coloring length must equal cols"));
                    }
                    Witness::Coloring(signs("coloring", c)?)
                }
                (None, Some(s)) => {
                    sorted_indices("subset", &s, r.cols)?;
                    Witness::Subset(BitSet::from_indices(r.cols, s).expect("indices checked"))
                }
                _ => return Err(invariant("exactly one of coloring and subset must be present")),
            };
            let result = ExactResult {
                value: r.value,
                witness,
                nodes_explored: r.nodes_explored,
            };
            (Artifact::Exact(result), r.version, r.provenance)
        }
        "heuristic_outcome" => {
            let r: HeuristicRecord = record(kind, value)?;
            let outcome = HeuristicOutcome {
                coloring: signs("coloring", r.coloring)?,
                achieved: r.achieved,
                guarantee: r.guarantee,
                iterations: r.iterations,
            };
            (Artifact::Heuristic { method: r.method, outcome }, r.version, r.provenance)
        }
        "det_search" => {
            let r: DetSearchRecord = record(kind, value)?;
            sorted_indices("columns", &r.columns, usize::MAX)?;
            let det: BigInt = r
                .det
                .parse()
                .map_err(|_| invariant(format!("det must be a decimal integer, got {:?}", r.det)))?;
            let outcome = DetSearchOutcome {
                columns: r.columns,
                det,
                root: r.root,
                threshold: r.threshold,
                met_threshold: r.met_threshold,
                work: r.work,
            };
            (Artifact::DetSearch(outcome), r.version, r.provenance)
        }
        other => {
            return Err(FormatError::Field {
                kind: "artifact".into(),
                message: format!("unknown kind {other:?}"),
            })
        }
    };
    check_version(kind, &version)?;
    Ok(Document { artifact, provenance })
}

fn csv_of(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map_or_else(String::new, |v| v.to_string())
}

/// One header line and one data line for report-like artifacts.
pub fn to_csv(doc: &Document) -> Result<String, FormatError> {
    let out = match &doc.artifact {
        Artifact::Check(r) => csv_of(
            &["name", "passed", "trials", "detail", "notes"],
            &[vec![
                r.name.clone(),
                r.passed.to_string(),
                r.trials.to_string(),
                r.detail.clone(),
                r.notes.join(" | "),
            ]],
        ),
        Artifact::Discrepancy(r) => csv_of(
            &["value", "argmax_row", "per_row"],
            &[vec![
                r.value.to_string(),
                opt(r.argmax_row),
                r.per_row
                    .as_ref()
                    .map(|p| p.iter().map(u64::to_string).collect::<Vec<_>>().join(" "))
                    .unwrap_or_default(),
            ]],
        ),
        Artifact::Exact(r) => {
            let witness = match &r.witness {
                Witness::Coloring(c) => c.values().iter().map(i8::to_string).collect::<Vec<_>>().join(" "),
                Witness::Subset(s) => s.ones().map(|i| i.to_string()).collect::<Vec<_>>().join(" "),
            };
            csv_of(
                &["value", "nodes_explored", "witness"],
                &[vec![r.value.to_string(), r.nodes_explored.to_string(), witness]],
            )
        }
        Artifact::Heuristic { method, outcome } => csv_of(
            &["method", "achieved", "guarantee", "iterations"],
            &[vec![
                method.clone(),
                outcome.achieved.to_string(),
                opt(outcome.guarantee),
                outcome.iterations.to_string(),
            ]],
        ),
        Artifact::Certificate(c) => csv_of(
            &["k", "det", "bound"],
            &[vec![c.k.to_string(), c.det.to_string(), c.bound.to_string()]],
        ),
        Artifact::DetSearch(o) => csv_of(
            &["det", "root", "threshold", "met_threshold", "work"],
            &[vec![
                o.det.to_string(),
                o.root.to_string(),
                o.threshold.to_string(),
                o.met_threshold.to_string(),
                o.work.to_string(),
            ]],
        ),
        other => {
            return Err(FormatError::Unsupported(format!(
                "csv output is not available for {}",
                other.kind()
            )))
        }
    };
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use discrepancy_core::bounds::{detlb_certificate, CertStrategy};
    use discrepancy_core::embedding::gen_embedding;
    use discrepancy_core::generators::{gen_subcubes, gen_sylvester};

    fn doc(a: Artifact) -> Document {
        Document::new(a, None)
    }

    #[test]
    fn embedding_d2_fields() {
        let s = to_json(&doc(Artifact::Embedding(gen_embedding(2).unwrap())));
        assert!(s.contains(r#""primes":["2","3","5","7"]"#), "{s}");
        assert!(s.contains(r#""n":"21""#), "{s}");
        assert!(s.contains(r#""b":["10","14","15","21"]"#), "{s}");
        assert!(s.starts_with(r#"{"kind":"embedding_witness","version":"1","#));
    }

    #[test]
    fn sylvester_certificate_fields() {
        let h = gen_sylvester(2).unwrap();
        let cert = detlb_certificate(&h, 4, CertStrategy::Exhaustive, 0).unwrap();
        let s = to_json(&doc(Artifact::Certificate(cert)));
        assert!(s.contains(r#""det":"16","k":4,"bound":1.0"#), "{s}");
    }

    #[test]
    fn round_trips() {
        let system = gen_subcubes(2).unwrap();
        for a in [
            Artifact::SetSystem(system.clone()),
            Artifact::SignMatrix(system.to_matrix()),
            Artifact::Coloring(Coloring::new(vec![1, -1, -1]).unwrap()),
            Artifact::Embedding(gen_embedding(3).unwrap()),
        ] {
            let d = Document::new(
                a,
                Some(Provenance {
                    command: "gen".into(),
                    seed: "18446744073709551615".into(),
                }),
            );
            let s = to_json(&d);
            let back = from_json(&s).unwrap();
            assert_eq!(back, d);
            assert_eq!(to_json(&back), s);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let bad_coloring = r#"{"kind":"coloring","version":"1","n":2,"values":[1,0]}"#;
        assert!(matches!(from_json(bad_coloring), Err(FormatError::Invariant(_))));
        let truncated = r#"{"kind":"coloring","version":"1","n":2,"val"#;
        assert!(matches!(from_json(truncated), Err(FormatError::Parse { .. })));
        let ragged = r#"{"kind":"sign_matrix","version":"1","rows":2,"cols":2,"entries":[[1,1],[1]]}"#;
        assert!(matches!(from_json(ragged), Err(FormatError::Invariant(_))));
        let unsorted = r#"{"kind":"set_system","version":"1","ground":["a","b"],"sets":[{"name":"s","members":[1,0]}]}"#;
        assert!(matches!(from_json(unsorted), Err(FormatError::Invariant(_))));
        let unknown = r#"{"kind":"coloring","version":"1","n":1,"values":[1],"extra":0}"#;
        assert!(matches!(from_json(unknown), Err(FormatError::Field { .. })));
        let version = r#"{"kind":"coloring","version":"2","n":1,"values":[1]}"#;
        assert!(matches!(from_json(version), Err(FormatError::Field { .. })));
    }

    #[test]
    fn csv_only_for_reports() {
        let c = doc(Artifact::Coloring(Coloring::all_ones(2)));
        assert!(to_csv(&c).is_err());
        let r = doc(Artifact::Discrepancy(DiscrepancyReport {
            value: 2,
            argmax_row: Some(5),
            per_row: None,
        }));
        assert_eq!(to_csv(&r).unwrap(), "value,argmax_row,per_row\n2,5,\n");
    }
}
