//! Plane files in, result reports out.
//!
//! Two plane formats are read and written: whitespace text (one line of
//! the plane per row) and JSON (`{name, order, base, lines}`). The label
//! base is always declared, never guessed. Reports come as text in the
//! classic fixed layout, with 1-based labels, or as JSON.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::design::{DesignError, ProjectivePlane};
use crate::isomorph::Certificate;
use crate::orbit_search::CampaignReport;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("format error at row {row}: {message}")]
    Format { row: usize, message: String },
    #[error("label {label} is impossible with base {base} for {v} points; check the declared label base")]
    Base { label: usize, base: u8, v: usize },
    #[error("declared label base {declared} disagrees with the file's base {file}")]
    BaseMismatch { declared: u8, file: u8 },
    #[error("text plane files need an explicit label base")]
    MissingBase,
    #[error("label base must be 0 or 1, got {0}")]
    InvalidBase(u8),
    #[error(transparent)]
    Plane(#[from] DesignError),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> ReportError + '_ {
    move |source| ReportError::Io { path: path.to_path_buf(), source }
}

/// Serde adapter writing big integers as decimal strings.
pub mod decimal {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(n: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&n.to_str_radix(10))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        BigUint::parse_bytes(s.as_bytes(), 10)
            .filter(|_| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit()))
            .ok_or_else(|| serde::de::Error::custom(format!("not a decimal integer: {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlaneFormat {
    Text,
    Json,
}

impl PlaneFormat {
    /// JSON for `.json` paths, text otherwise.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => PlaneFormat::Json,
            _ => PlaneFormat::Text,
        }
    }
}

/// A parsed plane and its name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaneFile {
    pub name: String,
    pub base: u8,
    pub plane: ProjectivePlane,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonPlane {
    name: String,
    order: usize,
    base: u8,
    lines: Vec<Vec<usize>>,
}

fn check_base(base: u8) -> Result<u8, ReportError> {
    if base > 1 {
        return Err(ReportError::InvalidBase(base));
    }
    Ok(base)
}

/// Incidence lists as read from a file, normalized to 0-based labels but
/// not yet checked against the plane axioms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawPlane {
    pub name: String,
    pub base: u8,
    pub order: usize,
    pub lines: Vec<Vec<usize>>,
}

impl RawPlane {
    pub fn into_plane(self) -> Result<PlaneFile, ReportError> {
        let plane = ProjectivePlane::new(self.order, self.lines)?;
        Ok(PlaneFile { name: self.name, base: self.base, plane })
    }
}

/// Reads incidence lists. Text input needs `base`; JSON carries its own,
/// which must agree with `base` when both are given. `name` is used for
/// text input, which has no name field.
pub fn parse_incidence(input: &str, format: PlaneFormat, base: Option<u8>, name: &str) -> Result<RawPlane, ReportError> {
    match format {
        PlaneFormat::Text => {
            let base = check_base(base.ok_or(ReportError::MissingBase)?)?;
            let mut rows = Vec::new();
            for (i, line) in input.lines().enumerate() {
                if line.trim().is_empty() {
                    continue;
                }
                let row: Result<Vec<usize>, _> = line.split_whitespace().map(str::parse::<usize>).collect();
                let row = row.map_err(|e| ReportError::Format { row: i + 1, message: e.to_string() })?;
                rows.push(row);
            }
            let (order, lines) = normalize_rows(rows, None, base)?;
            Ok(RawPlane { name: name.to_string(), base, order, lines })
        }
        PlaneFormat::Json => {
            let file: JsonPlane = serde_json::from_str(input)?;
            let file_base = check_base(file.base)?;
            if let Some(declared) = base {
                if declared != file_base {
                    return Err(ReportError::BaseMismatch { declared, file: file_base });
                }
            }
            let (order, lines) = normalize_rows(file.lines, Some(file.order), file_base)?;
            Ok(RawPlane { name: file.name, base: file_base, order, lines })
        }
    }
}

/// [`parse_incidence`] followed by the plane axioms.
pub fn parse_plane(input: &str, format: PlaneFormat, base: Option<u8>, name: &str) -> Result<PlaneFile, ReportError> {
    parse_incidence(input, format, base, name)?.into_plane()
}

/// Reads a plane file, taking the format from the extension and the name
/// from the file stem for text files.
pub fn read_plane(path: &Path, base: Option<u8>) -> Result<PlaneFile, ReportError> {
    read_incidence(path, base)?.into_plane()
}

pub fn read_incidence(path: &Path, base: Option<u8>) -> Result<RawPlane, ReportError> {
    let input = fs::read_to_string(path).map_err(io_err(path))?;
    let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("plane");
    parse_incidence(&input, PlaneFormat::from_path(path), base, name)
}

fn normalize_rows(
    rows: Vec<Vec<usize>>,
    declared_order: Option<usize>,
    base: u8,
) -> Result<(usize, Vec<Vec<usize>>), ReportError> {
    let Some(first) = rows.first() else {
        return Err(ReportError::Format { row: 0, message: "no lines".into() });
    };
    let k = first.len();
    if k < 3 {
        return Err(ReportError::Format { row: 1, message: format!("a line needs at least 3 points, found {k}") });
    }
    let order = k - 1;
    if let Some(d) = declared_order {
        if d != order {
            return Err(ReportError::Format { row: 1, message: format!("declared order {d} but lines have {k} points") });
        }
    }
    let v = order * order + order + 1;
    if let Some(i) = rows.iter().position(|r| r.len() != k) {
        return Err(ReportError::Format {
            row: i + 1,
            message: format!("expected {k} labels, found {}", rows[i].len()),
        });
    }
    if rows.len() != v {
        return Err(ReportError::Format {
            row: rows.len().min(v) + 1,
            message: format!("expected {v} lines for order {order}, found {}", rows.len()),
        });
    }
    let b = base as usize;
    let mut lines = Vec::with_capacity(v);
    for (i, row) in rows.into_iter().enumerate() {
        let mut line = Vec::with_capacity(k);
        for label in row {
            if label < b || label >= v + b {
                // an off-by-one label points at the wrong base
                if label == v + b || (label + 1 == b) {
                    return Err(ReportError::Base { label, base, v });
                }
                return Err(ReportError::Format {
                    row: i + 1,
                    message: format!("label {label} outside {b}..{}", v + b),
                });
            }
            line.push(label - b);
        }
        lines.push(line);
    }
    Ok((order, lines))
}

/// Whitespace text: one line of the plane per row.
pub fn plane_to_text(plane: &ProjectivePlane, base: u8) -> String {
    let mut out = String::new();
    for line in plane.lines() {
        let row: Vec<String> = line.iter().map(|&p| (p as usize + base as usize).to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn plane_to_json(plane: &ProjectivePlane, name: &str, base: u8) -> String {
    let file = JsonPlane {
        name: name.to_string(),
        order: plane.order(),
        base,
        lines: plane.lines().iter().map(|l| l.iter().map(|&p| p as usize + base as usize).collect()).collect(),
    };
    let mut s = serde_json::to_string(&file).expect("plane serializes");
    s.push('\n');
    s
}

/// Where a record came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    /// Label of the subgroup whose orbits first produced the unital.
    pub family: String,
    pub family_index: usize,
    pub seed: u64,
    /// The producing family stopped on its budget.
    pub budget_hit: bool,
}

/// One unital found in one plane.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitalRecord {
    pub plane: String,
    #[serde(with = "decimal")]
    pub plane_group_order: BigUint,
    pub plane_orbit_count: usize,
    /// Automorphism group of the induced design.
    #[serde(with = "decimal")]
    pub unital_group_order: BigUint,
    pub unital_orbit_count: usize,
    /// Largest first.
    pub unital_orbit_sizes: Vec<usize>,
    /// Collineations of the plane fixing the unital setwise. A subgroup of
    /// the design group, acting faithfully on the unital.
    #[serde(with = "decimal")]
    pub stabilizer_order: BigUint,
    /// 0-based point labels, ascending.
    pub members: Vec<u32>,
    pub certificate: Certificate,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Text,
    Json,
}

/// Renders a plane's results. Text output always uses 1-based labels.
pub fn emit_report(report: &CampaignReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
        ReportFormat::Text => text_report(report),
    }
}

fn text_report(report: &CampaignReport) -> String {
    let mut out = String::new();
    let q = (1..).find(|q| q * q >= report.plane_order).unwrap_or(0);
    let _ = writeln!(out, "{}", report.plane);
    let _ = writeln!(out, "ORDER OF THE PLANE AUTOMORPHISM GROUP{:>16}", report.plane_group_order);
    let _ = writeln!(out, "NUMBER OF THE ORBITS OF THE PLANE AUTOMORPHISM GTOUP={:>7}", report.plane_orbit_count);
    for r in &report.records {
        let total: usize = r.unital_orbit_sizes.iter().sum();
        assert_eq!(total, r.members.len(), "orbit sizes must partition the unital");
        assert_eq!(total, q * q * q + 1, "a unital has q^3+1 points");
        let _ = writeln!(out, "ORDER OF THE UNITAL AUTOMORPHISM GROUP={:>13}", r.unital_group_order);
        let _ = writeln!(out, "NUMBER OF THE ORBITS OF THE UNITAL AUTOMORPHISM GROUP ={:>7}", r.unital_orbit_count);
        out.push_str("SIZES OF THE ORBITS OF THE UNITAL AUTOMORPHISM GROUP=");
        for (i, s) in r.unital_orbit_sizes.iter().enumerate() {
            let _ = write!(out, "{:>3}-{:>3}", i + 1, s);
        }
        out.push('\n');
        out.push_str("UNITAL=\n");
        for row in r.members.chunks(16) {
            for &p in row {
                let _ = write!(out, "{:>4}", p + 1);
            }
            out.push('\n');
        }
    }
    out
}

/// One record in the certificate index.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IndexEntry {
    pub plane: String,
    /// Position in the plane's record list.
    pub record: usize,
}

/// Certificate digest to every stored record with that certificate.
pub type CertificateIndex = BTreeMap<String, Vec<IndexEntry>>;

pub const INDEX_FILE: &str = "certificates.index.json";
const RESULTS_SUFFIX: &str = ".unitals.json";

pub fn results_path(dir: &Path, plane: &str) -> PathBuf {
    dir.join(format!("{plane}{RESULTS_SUFFIX}"))
}

/// Writes `<plane>.unitals.json` and updates the certificate index. Each
/// file is written to a temporary name and renamed into place.
pub fn store_results(report: &CampaignReport, dir: &Path) -> Result<Vec<PathBuf>, ReportError> {
    if !dir.is_dir() {
        return Err(ReportError::Io {
            path: dir.to_path_buf(),
            source: std::io::Error::new(std::io::ErrorKind::NotFound, "results directory does not exist"),
        });
    }
    let results = results_path(dir, &report.plane);
    let index_path = dir.join(INDEX_FILE);
    let mut index = load_index(dir)?;
    for entries in index.values_mut() {
        entries.retain(|e| e.plane != report.plane);
    }
    for (i, r) in report.records.iter().enumerate() {
        index.entry(r.certificate.digest()).or_default().push(IndexEntry { plane: report.plane.clone(), record: i });
    }
    index.retain(|_, e| !e.is_empty());
    for entries in index.values_mut() {
        entries.sort();
    }
    let index_json = serde_json::to_string_pretty(&index)? + "\n";

    write_atomic(&results, emit_report(report, ReportFormat::Json).as_bytes())?;
    write_atomic(&index_path, index_json.as_bytes())?;
    Ok(vec![results, index_path])
}

pub fn load_index(dir: &Path) -> Result<CertificateIndex, ReportError> {
    let path = dir.join(INDEX_FILE);
    match fs::read_to_string(&path) {
        Ok(s) => Ok(serde_json::from_str(&s)?),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(CertificateIndex::new()),
        Err(e) => Err(ReportError::Io { path, source: e }),
    }
}

/// Every `*.unitals.json` report in `dir`, sorted by file name.
pub fn load_results(dir: &Path) -> Result<Vec<CampaignReport>, ReportError> {
    let mut paths = Vec::new();
    for entry in fs::read_dir(dir).map_err(io_err(dir))? {
        let path = entry.map_err(io_err(dir))?.path();
        if path.file_name().and_then(|n| n.to_str()).is_some_and(|n| n.ends_with(RESULTS_SUFFIX)) {
            paths.push(path);
        }
    }
    paths.sort();
    paths
        .iter()
        .map(|p| {
            let s = fs::read_to_string(p).map_err(io_err(p))?;
            Ok(serde_json::from_str(&s)?)
        })
        .collect()
}

/// A certificate class: records of isomorphic unitals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsomorphismClass {
    pub certificate: Certificate,
    pub members: Vec<IndexEntry>,
}

/// Groups stored records by full certificate.
pub fn classify(reports: &[CampaignReport]) -> Vec<IsomorphismClass> {
    let mut classes: BTreeMap<&Certificate, Vec<IndexEntry>> = BTreeMap::new();
    for report in reports {
        for (i, r) in report.records.iter().enumerate() {
            classes.entry(&r.certificate).or_default().push(IndexEntry { plane: report.plane.clone(), record: i });
        }
    }
    classes.into_iter().map(|(c, members)| IsomorphismClass { certificate: c.clone(), members }).collect()
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), ReportError> {
    let dir = path.parent().unwrap_or(Path::new("."));
    let file_name = path.file_name().and_then(|n| n.to_str()).unwrap_or("out");
    let tmp = dir.join(format!(".{file_name}.tmp"));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    result.map_err(|source| {
        let _ = fs::remove_file(&tmp);
        ReportError::Io { path: path.to_path_buf(), source }
    })
}
