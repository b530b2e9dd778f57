//! Subcommands of the `unitals` binary.
//!
//! [`run`] parses arguments, executes one subcommand and returns the exit
//! code: 0 on success, 1 on a domain failure (not a plane, not a unital),
//! 2 on a usage, format or I/O error.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use unitals::autgroup::{plane_automorphism_group, point_orbits};
use unitals::design::{intersection_profile, is_unital, validate_plane, PointSet};
use unitals::geometry::{desarguesian_plane, hermitian_unital, GeometryError};
use unitals::orbit_search::{run_campaign, SearchConfig, SearchError};
use unitals::report::{
    classify, emit_report, load_results, plane_to_json, plane_to_text, read_incidence, read_plane, store_results,
    ReportError, ReportFormat,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "unitals", version, about = "Find, verify and classify unitals in projective planes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a plane file against the projective plane axioms
    Validate(PlaneArg),
    /// Collineation group order and point orbits of a plane
    Aut(AutArgs),
    /// Search a plane for unitals
    Find(FindArgs),
    /// Check whether a list of points is a unital of a plane
    Verify(VerifyArgs),
    /// Group stored unitals of several planes into isomorphism classes
    Classify(ClassifyArgs),
    /// Write a desarguesian plane or a hermitian unital
    Gen(GenArgs),
}

#[derive(Args, Debug)]
pub struct PlaneArg {
    /// Plane file: text rows of labels, or JSON when the name ends in .json
    pub plane: PathBuf,
    /// Label base of the input (0 or 1); required for text files
    #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1))]
    pub base: Option<u8>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

impl From<Format> for ReportFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Text => ReportFormat::Text,
            Format::Json => ReportFormat::Json,
        }
    }
}

#[derive(Args, Debug)]
pub struct AutArgs {
    #[command(flatten)]
    pub input: PlaneArg,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct FindArgs {
    #[command(flatten)]
    pub input: PlaneArg,
    /// TOML file with search settings; flags override it
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Unital parameter, checked against the plane order
    #[arg(long)]
    pub q: Option<usize>,
    /// Cyclic subgroup orders to sample, e.g. 2,3,5
    #[arg(long, value_delimiter = ',')]
    pub orders: Option<Vec<u64>>,
    /// Random elements drawn per subgroup order
    #[arg(long)]
    pub samples: Option<usize>,
    /// Node budget per subgroup
    #[arg(long)]
    pub nodes: Option<u64>,
    /// Time budget in seconds for the whole search
    #[arg(long)]
    pub time: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Directory for <plane>.unitals.json and the certificate index
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub input: PlaneArg,
    /// Whitespace-separated point labels
    pub labels: PathBuf,
    /// Label base of the label file; defaults to the plane's
    #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1))]
    pub labels_base: Option<u8>,
    #[arg(long)]
    pub q: Option<usize>,
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    /// Directory written by `find --out`
    pub dir: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    /// PG(2, N)
    Plane,
    /// PG(2, N^2), the plane hosting hermitian unitals with q = N
    Host,
    /// Labels of the hermitian unital with q = N in PG(2, N^2)
    Hermitian,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(value_enum)]
    pub kind: GenKind,
    pub n: u32,
    /// Label base of the output
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=1))]
    pub base: u8,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Output file instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Report(#[from] ReportError),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    File { path: PathBuf, source: io::Error },
    #[error("output: {0}")]
    Output(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Report(ReportError::Plane(_)) => EXIT_DOMAIN,
            _ => EXIT_USAGE,
        }
    }
}

/// Parses `args` (program name first) and runs the subcommand.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    match command {
        Command::Validate(a) => cmd_validate(&a, out),
        Command::Aut(a) => cmd_aut(&a, out),
        Command::Find(a) => cmd_find(&a, out, err),
        Command::Verify(a) => cmd_verify(&a, out),
        Command::Classify(a) => cmd_classify(&a, out),
        Command::Gen(a) => cmd_gen(&a, out),
    }
}

fn cmd_validate(a: &PlaneArg, out: &mut dyn Write) -> Result<i32, CliError> {
    let raw = read_incidence(&a.plane, a.base)?;
    let report = validate_plane(&raw.lines, raw.order).map_err(ReportError::from)?;
    if report.is_ok() {
        let v = raw.lines.len();
        writeln!(out, "{}: valid projective plane of order {} ({v} points, {v} lines)", raw.name, raw.order)?;
        return Ok(EXIT_OK);
    }
    writeln!(out, "{}: not a projective plane of order {}", raw.name, raw.order)?;
    for violation in &report.violations {
        writeln!(out, "  {violation}")?;
    }
    Ok(EXIT_DOMAIN)
}

fn cmd_aut(a: &AutArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let file = read_plane(&a.input.plane, a.input.base)?;
    let v = file.plane.num_points();
    let group = plane_automorphism_group(&file.plane);
    let orbits = point_orbits(&group, v);
    match a.format {
        Format::Text => {
            writeln!(out, "{}", file.name)?;
            writeln!(out, "order of the plane automorphism group: {}", group.order())?;
            writeln!(out, "number of point orbits: {}", orbits.num_orbits())?;
            writeln!(out, "point orbit sizes: {}", join(&orbits.sizes()))?;
        }
        Format::Json => {
            let value = json!({
                "plane": file.name,
                "order": file.plane.order(),
                "group_order": group.order().to_string(),
                "orbit_count": orbits.num_orbits(),
                "orbit_sizes": orbits.sizes(),
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&value).expect("json value"))?;
        }
    }
    Ok(EXIT_OK)
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

/// Search settings from the config file, then the flags.
pub fn search_config(a: &FindArgs) -> Result<SearchConfig, CliError> {
    let mut cfg = match &a.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|source| CliError::File { path: path.clone(), source })?;
            toml::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
        }
        None => SearchConfig::default(),
    };
    if a.q.is_some() {
        cfg.q = a.q;
    }
    if let Some(orders) = &a.orders {
        cfg.orders = orders.clone();
    }
    if let Some(s) = a.samples {
        cfg.samples_per_order = s;
    }
    if let Some(n) = a.nodes {
        cfg.node_budget = n;
    }
    if let Some(t) = a.time {
        cfg.time_budget_secs = t;
    }
    if let Some(s) = a.seed {
        cfg.seed = s;
    }
    if let Some(t) = a.threads {
        cfg.threads = t;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn cmd_find(a: &FindArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let cfg = search_config(a)?;
    let file = read_plane(&a.input.plane, a.input.base)?;
    let report = run_campaign(&file.plane, &file.name, &cfg)?;
    if let Some(dir) = &a.out {
        for path in store_results(&report, dir)? {
            writeln!(err, "wrote {}", path.display())?;
        }
    }
    let hit = report.families.iter().filter(|f| f.budget_hit).count();
    writeln!(
        err,
        "{} unital(s) up to isomorphism from {} subgroup(s)",
        report.records.len(),
        report.families.len()
    )?;
    if report.budget_hit {
        writeln!(
            err,
            "budget exhausted in {hit} of {} subgroup searches; missing unitals are not ruled out",
            report.families.len()
        )?;
    }
    out.write_all(emit_report(&report, a.format.into()).as_bytes())?;
    Ok(EXIT_OK)
}

/// Labels from a whitespace-separated file, normalized to 0-based. A
/// leading `UNITAL=` token is skipped so report blocks can be pasted.
pub fn read_labels(path: &Path, base: u8, v: usize) -> Result<Vec<usize>, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::File { path: path.to_path_buf(), source })?;
    let mut labels = Vec::new();
    for token in text.split_whitespace().filter(|t| *t != "UNITAL=") {
        let label: usize =
            token.parse().map_err(|_| CliError::Usage(format!("{}: bad label {token:?}", path.display())))?;
        let b = base as usize;
        if label < b || label >= v + b {
            return Err(CliError::Usage(format!(
                "{}: label {label} outside {b}..{} for base {base}",
                path.display(),
                v + b
            )));
        }
        labels.push(label - b);
    }
    Ok(labels)
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let file = read_plane(&a.input.plane, a.input.base)?;
    let plane = &file.plane;
    let v = plane.num_points();
    let q = match a.q {
        Some(q) => q,
        None => plane
            .unital_q()
            .ok_or_else(|| CliError::Usage(format!("plane order {} is not a square; pass --q", plane.order())))?,
    };
    let labels = read_labels(&a.labels, a.labels_base.unwrap_or(file.base), v)?;
    let set = PointSet::new(labels.iter().copied(), v).expect("labels checked against v");
    let unital = is_unital(plane, &set, q).map_err(ReportError::from)?;
    let expected = q * q * q + 1;
    writeln!(out, "points: {} (a unital has {expected})", set.len())?;
    if set.len() != labels.len() {
        writeln!(out, "duplicate labels: {}", labels.len() - set.len())?;
    }
    writeln!(out, "line intersection sizes:")?;
    for (size, count) in intersection_profile(plane, &set).map_err(ReportError::from)? {
        writeln!(out, "  {size:>3}: {count} lines")?;
    }
    let ok = unital && set.len() == labels.len();
    writeln!(out, "{}", if ok { "unital" } else { "not a unital" })?;
    Ok(if ok { EXIT_OK } else { EXIT_DOMAIN })
}

fn cmd_classify(a: &ClassifyArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let reports = load_results(&a.dir)?;
    let classes = classify(&reports);
    let records: usize = reports.iter().map(|r| r.records.len()).sum();
    writeln!(out, "planes: {}, unitals: {records}, isomorphism classes: {}", reports.len(), classes.len())?;
    let mut shared = 0;
    for (i, class) in classes.iter().enumerate() {
        let mut planes: Vec<&str> = class.members.iter().map(|m| m.plane.as_str()).collect();
        planes.dedup();
        if planes.len() > 1 {
            shared += 1;
        }
        let members: Vec<String> = class.members.iter().map(|m| format!("{}#{}", m.plane, m.record + 1)).collect();
        writeln!(out, "{:>4}  {}  {}", i + 1, &class.certificate.digest()[..16], members.join(" "))?;
    }
    writeln!(out, "classes spanning more than one plane: {shared}")?;
    Ok(EXIT_OK)
}

fn cmd_gen(a: &GenArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let text = match a.kind {
        GenKind::Plane | GenKind::Host => {
            let order = if a.kind == GenKind::Host {
                a.n.checked_mul(a.n).ok_or_else(|| CliError::Usage("order overflow".into()))?
            } else {
                a.n
            };
            let plane = desarguesian_plane(order)?;
            match a.format {
                Format::Text => plane_to_text(&plane, a.base),
                Format::Json => plane_to_json(&plane, &format!("PG2_{order}"), a.base),
            }
        }
        GenKind::Hermitian => {
            let set = hermitian_unital(a.n as usize)?;
            let labels: Vec<usize> = set.iter().map(|p| p + a.base as usize).collect();
            match a.format {
                Format::Text => labels.chunks(16).map(|row| join(row) + "\n").collect(),
                Format::Json => {
                    let value = json!({ "q": a.n, "base": a.base, "members": labels });
                    serde_json::to_string(&value).expect("json value") + "\n"
                }
            }
        }
    };
    match &a.out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::File { path: path.clone(), source })?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(EXIT_OK)
}
