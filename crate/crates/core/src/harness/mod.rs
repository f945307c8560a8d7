//! Jobs, reports and the commands behind the command-line tool.

pub mod suite;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::clique::CliqueError;
use crate::field::FieldError;
use crate::formulas::{self, FormulaError};
use crate::group::cache;
use crate::group::{
    build_extraspecial, build_linear, build_named, build_suzuki, ExtraspecialForm, GroupError,
    GroupFamily, GroupTable, LinearKind, NamedGroup,
};
use crate::ncgraph::{GraphError, NcGraph};
use crate::structure::{
    self, Analysis, Method, MethodChoice, MethodOutcome, OmegaCertificate, OmegaOptions, PartOmega,
    StructureError,
};

pub use suite::{cmd_verify_suite, RowOutcome, RowStatus, SuiteOptions, SuiteSummary};

/// Version of the JSON report layout.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid job: {0}")]
    Invalid(String),
    #[error("budget exhausted: {0}")]
    Budget(String),
    #[error("inconsistency: {0}")]
    Inconsistency(String),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("{0}")]
    Failed(String),
}

impl HarnessError {
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Invalid(_) => 2,
            HarnessError::Budget(_) => 3,
            HarnessError::Inconsistency(_) => 4,
            HarnessError::Io(_) | HarnessError::Failed(_) => 1,
        }
    }
}

impl From<GroupError> for HarnessError {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::OrderMismatch { .. } | GroupError::ClosureExceeded { .. } => {
                HarnessError::Inconsistency(e.to_string())
            }
            _ => HarnessError::Invalid(e.to_string()),
        }
    }
}

impl From<GraphError> for HarnessError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::Io(io) => HarnessError::Io(io),
            other => HarnessError::Invalid(other.to_string()),
        }
    }
}

impl From<CliqueError> for HarnessError {
    fn from(e: CliqueError) -> Self {
        match e {
            CliqueError::TooLarge(_) => HarnessError::Invalid(e.to_string()),
            other => HarnessError::Failed(other.to_string()),
        }
    }
}

impl From<FieldError> for HarnessError {
    fn from(e: FieldError) -> Self {
        HarnessError::Invalid(e.to_string())
    }
}

impl From<FormulaError> for HarnessError {
    fn from(e: FormulaError) -> Self {
        HarnessError::Invalid(e.to_string())
    }
}

impl From<StructureError> for HarnessError {
    fn from(e: StructureError) -> Self {
        match e {
            StructureError::Group(g) => g.into(),
            StructureError::Graph(g) => g.into(),
            StructureError::Budget { .. } => HarnessError::Budget(e.to_string()),
            StructureError::Inconsistency(_) | StructureError::CertificateInvalid(_) => {
                HarnessError::Inconsistency(e.to_string())
            }
            StructureError::Abelian
            | StructureError::NotAc
            | StructureError::HypothesesFailed(_)
            | StructureError::NoCertificate(_)
            | StructureError::NoMethod(_) => HarnessError::Invalid(e.to_string()),
            other => HarnessError::Failed(other.to_string()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    Psl2,
    Pgl2,
    Sl2,
    Gl2,
    Psl3,
    Suzuki,
    Extraspecial,
    Named,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum JobMethod {
    #[default]
    Auto,
    Formula,
    Ac,
    Cover,
    #[serde(alias = "lemma20")]
    Partition,
    Solver,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct JobSpec {
    pub family: FamilyKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub form: Option<ExtraspecialForm>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub method: JobMethod,
    /// Seconds.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time_limit: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub node_limit: Option<u64>,
    pub allow_big_memory: bool,
    #[serde(skip)]
    pub cache_dir: Option<PathBuf>,
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

impl JobSpec {
    pub fn new(family: FamilyKind) -> Self {
        JobSpec {
            family,
            q: None,
            m: None,
            p: None,
            n: None,
            form: None,
            name: None,
            method: JobMethod::Auto,
            time_limit: None,
            node_limit: None,
            allow_big_memory: false,
            cache_dir: None,
            out: None,
        }
    }

    fn need<T: Copy>(v: Option<T>, flag: &str, family: FamilyKind) -> Result<T, HarnessError> {
        v.ok_or_else(|| HarnessError::Invalid(format!("--{flag} is required for {family:?}")))
    }

    /// Checks limits and resolves the parameters into a group family.
    pub fn group_family(&self) -> Result<GroupFamily, HarnessError> {
        if self.time_limit.is_some_and(|t| !(t > 0.0 && t.is_finite())) {
            return Err(HarnessError::Invalid("time limit must be positive".into()));
        }
        if self.node_limit == Some(0) {
            return Err(HarnessError::Invalid("node limit must be positive".into()));
        }
        let f = self.family;
        let linear = |kind, n| -> Result<GroupFamily, HarnessError> {
            Ok(GroupFamily::Linear {
                kind,
                n,
                q: Self::need(self.q, "q", f)?,
            })
        };
        match f {
            FamilyKind::Psl2 => linear(LinearKind::Psl, 2),
            FamilyKind::Pgl2 => linear(LinearKind::Pgl, 2),
            FamilyKind::Sl2 => linear(LinearKind::Sl, 2),
            FamilyKind::Gl2 => linear(LinearKind::Gl, 2),
            FamilyKind::Psl3 => linear(LinearKind::Psl, 3),
            FamilyKind::Suzuki => Ok(GroupFamily::Suzuki {
                m: Self::need(self.m, "m", f)?,
            }),
            FamilyKind::Extraspecial => Ok(GroupFamily::Extraspecial {
                p: Self::need(self.p, "p", f)?,
                n: Self::need(self.n, "n", f)?,
                form: self.form.unwrap_or(ExtraspecialForm::Plus),
            }),
            FamilyKind::Named => {
                let name = self
                    .name
                    .as_deref()
                    .ok_or_else(|| HarnessError::Invalid("--name is required for named".into()))?;
                Ok(GroupFamily::Named {
                    group: parse_named(name)?,
                })
            }
        }
    }

    fn omega_options(&self) -> OmegaOptions {
        let mut o = OmegaOptions::default();
        if let Some(t) = self.time_limit {
            o.solve.time_limit = Some(Duration::from_secs_f64(t));
        }
        if let Some(n) = self.node_limit {
            o.solve.node_limit = n;
        }
        o.allow_big_memory = self.allow_big_memory;
        o.method = match self.method {
            JobMethod::Auto | JobMethod::Formula => MethodChoice::Auto,
            JobMethod::Ac => MethodChoice::Ac,
            JobMethod::Cover => MethodChoice::Cover,
            JobMethod::Partition => MethodChoice::Partition,
            JobMethod::Solver => MethodChoice::Solver,
        };
        o
    }
}

/// Parses `symmetric-4`, `alternating-5`, `dihedral-6` or `quaternion8`.
pub fn parse_named(name: &str) -> Result<NamedGroup, HarnessError> {
    let bad = || HarnessError::Invalid(format!("unknown named group `{name}`"));
    if name == "quaternion8" || name == "q8" {
        return Ok(NamedGroup::Quaternion8);
    }
    let (kind, k) = name.rsplit_once('-').ok_or_else(bad)?;
    let k: u32 = k.parse().map_err(|_| bad())?;
    match kind {
        "symmetric" => Ok(NamedGroup::Symmetric(k)),
        "alternating" => Ok(NamedGroup::Alternating(k)),
        "dihedral" => Ok(NamedGroup::Dihedral(k)),
        _ => Err(bad()),
    }
}

/// Builds a group table, going through the on-disk cache when a directory
/// is given. Unreadable or stale cache files are rebuilt and overwritten.
pub fn build_group(
    family: &GroupFamily,
    allow_big_memory: bool,
    cache_dir: Option<&Path>,
) -> Result<GroupTable, HarnessError> {
    let path = cache_dir.map(|d| cache::cache_path(d, family));
    if let Some(p) = &path {
        if let Ok(g) = cache::load(p) {
            if g.family() == *family {
                return Ok(g);
            }
        }
    }
    let g = match *family {
        GroupFamily::Linear { kind, n, q } => build_linear(kind, n, q)?,
        GroupFamily::Suzuki { m } => build_suzuki(m, allow_big_memory)?,
        GroupFamily::Extraspecial { p, n, form } => build_extraspecial(p, n, form)?,
        GroupFamily::Named { group } => build_named(group)?,
    };
    if let Some(p) = &path {
        cache::save(p, &g).map_err(|e| HarnessError::Failed(format!("writing cache: {e}")))?;
    }
    Ok(g)
}

/// Closed-form value or range for `ω`, with where it comes from.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Expectation {
    pub lower: usize,
    pub upper: usize,
    pub source: String,
}

fn to_usize(x: num_bigint::BigUint) -> Result<usize, HarnessError> {
    x.to_usize()
        .ok_or_else(|| HarnessError::Invalid("closed form exceeds machine range".into()))
}

/// Closed-form expectation for a family, when one is known.
pub fn closed_form(family: &GroupFamily) -> Result<Option<Expectation>, HarnessError> {
    let exact = |v: usize, s: &str| {
        Some(Expectation {
            lower: v,
            upper: v,
            source: s.into(),
        })
    };
    Ok(match *family {
        GroupFamily::Linear { kind, n: 2, q } => {
            let q = q as u64;
            match kind {
                LinearKind::Psl => exact(to_usize(formulas::omega_psl2(q)?)?, "PSL(2,q) cases"),
                LinearKind::Sl if q.is_multiple_of(2) => exact(
                    to_usize(formulas::omega_psl2(q)?)?,
                    "SL(2,q) = PSL(2,q) in characteristic 2",
                ),
                LinearKind::Pgl => exact(to_usize(formulas::omega_pgl2(q)?)?, "PGL(2,q) cases"),
                LinearKind::Gl if q.is_multiple_of(2) => exact(
                    to_usize(formulas::omega_psl2(q)?)?,
                    "GL(2,q) = Z x PSL(2,q) in characteristic 2",
                ),
                LinearKind::Sl | LinearKind::Gl => None,
            }
        }
        GroupFamily::Linear { .. } => None,
        GroupFamily::Suzuki { m } => exact(
            to_usize(formulas::omega_suzuki(m)?.total)?,
            "Suzuki formula",
        ),
        GroupFamily::Extraspecial { p: 2, n, .. } => exact(
            to_usize(formulas::extraspecial_omega_even(n)?)?,
            "extra-special 2-group, 2m+1",
        ),
        GroupFamily::Extraspecial { p, n, .. } if n >= 1 => {
            let (lo, hi) = formulas::extraspecial_bounds_odd(p as u64, n - 1)?;
            Some(Expectation {
                lower: to_usize(lo)?,
                upper: to_usize(hi)?,
                source: "extra-special odd bounds".into(),
            })
        }
        GroupFamily::Extraspecial { .. } => None,
        GroupFamily::Named { group } => match group {
            NamedGroup::Symmetric(3) => exact(4, "S3 = PGL(2,2)"),
            NamedGroup::Symmetric(4) => exact(10, "S4 = PGL(2,3)"),
            NamedGroup::Symmetric(5) => exact(31, "S5 = PGL(2,5)"),
            NamedGroup::Alternating(4) => exact(5, "A4 = PSL(2,3)"),
            NamedGroup::Alternating(5) => exact(21, "A5 = PSL(2,4)"),
            NamedGroup::Quaternion8 => exact(3, "extra-special 2-group, 2m+1"),
            _ => None,
        },
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SylowInfo {
    pub p: u64,
    pub p_part: u64,
    pub count: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupInfo {
    pub family: String,
    pub order: usize,
    pub center_size: usize,
    /// Sorted distinct element orders.
    pub order_profile: Vec<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub is_ac: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sylow: Option<Vec<SylowInfo>>,
}

impl GroupInfo {
    fn basic(g: &GroupTable) -> Self {
        GroupInfo {
            family: g.family().to_string(),
            order: g.order(),
            center_size: g.center().count(),
            order_profile: g.order_profile(),
            is_ac: None,
            sylow: None,
        }
    }
}

/// An exact value matches when it lies in the range; a lower bound matches
/// when it does not exceed the upper end.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FormulaCheck {
    pub expected: Expectation,
    pub matched: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportStatus {
    Exact,
    LowerBound,
    ClosedForm,
    Info,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub job: JobSpec,
    pub status: ReportStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<OmegaCertificate>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub outcomes: Vec<MethodOutcome>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partition_parts: Option<Vec<PartOmega>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub formula: Option<FormulaCheck>,
    pub elapsed_ms: u64,
}

impl Report {
    fn new(command: &str, job: &JobSpec, status: ReportStatus) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            command: command.into(),
            job: job.clone(),
            status,
            group: None,
            omega: None,
            certificate: None,
            outcomes: Vec::new(),
            partition_parts: None,
            formula: None,
            elapsed_ms: 0,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Writes the report to the job's output path, or to `fallback`.
    pub fn emit(&self, fallback: &mut impl Write) -> io::Result<()> {
        match &self.job.out {
            Some(p) => write_atomic(p, self.to_json().as_bytes()),
            None => writeln!(fallback, "{}", self.to_json()),
        }
    }
}

fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Order, center, element orders, Sylow counts and the AC flag.
pub fn cmd_group_info(job: &JobSpec) -> Result<Report, HarnessError> {
    let start = Instant::now();
    let family = job.group_family()?;
    let g = build_group(&family, job.allow_big_memory, job.cache_dir.as_deref())?;
    let mut info = GroupInfo::basic(&g);
    let mut sylow = Vec::new();
    for p in prime_factors(g.order() as u64) {
        let mut pp = 1;
        while (g.order() as u64).is_multiple_of(pp * p) {
            pp *= p;
        }
        sylow.push(SylowInfo {
            p,
            p_part: pp,
            count: g.sylow_count(p)?,
        });
    }
    info.sylow = Some(sylow);
    info.is_ac = Some(g.center().count() == g.order() || Analysis::new(&g).is_ac_group());
    let mut r = Report::new("group", job, ReportStatus::Info);
    r.group = Some(info);
    r.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(r)
}

/// Clique number with certificates and a closed-form cross-check.
///
/// A report whose status is [`ReportStatus::LowerBound`] means the solver
/// ran out of budget. A formula check with `matched == false` means an exact
/// value fell outside the closed form.
pub fn cmd_omega(job: &JobSpec) -> Result<Report, HarnessError> {
    let start = Instant::now();
    let family = job.group_family()?;
    let expected = closed_form(&family)?;
    if job.method == JobMethod::Formula {
        let e = expected.ok_or_else(|| {
            HarnessError::Invalid(format!("no closed form is known for {family}"))
        })?;
        let mut r = Report::new("omega", job, ReportStatus::ClosedForm);
        if e.lower == e.upper {
            r.omega = Some(e.lower);
        }
        r.formula = Some(FormulaCheck {
            expected: e,
            matched: true,
        });
        r.elapsed_ms = start.elapsed().as_millis() as u64;
        return Ok(r);
    }
    let g = build_group(&family, job.allow_big_memory, job.cache_dir.as_deref())?;
    let opts = job.omega_options();
    let out = structure::omega(&g, &opts)?;
    let cert = out.certificate;
    let status = if cert.exact {
        ReportStatus::Exact
    } else {
        ReportStatus::LowerBound
    };
    let mut r = Report::new("omega", job, status);
    r.group = Some(GroupInfo::basic(&g));
    r.omega = cert.exact.then_some(cert.omega);
    r.formula = expected.map(|e| FormulaCheck {
        matched: cert.omega <= e.upper && (!cert.exact || e.lower <= cert.omega),
        expected: e,
    });
    r.certificate = Some(cert);
    r.outcomes = out.outcomes;
    r.partition_parts = out.partition_parts;
    r.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(r)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExportSummary {
    pub vertices: usize,
    pub edges: usize,
    pub collapsed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
}

/// DIMACS export of the non-commuting graph, optionally center-collapsed.
/// Writes to the job's output path, or to `fallback` when there is none.
pub fn cmd_export_graph(
    job: &JobSpec,
    collapse: bool,
    fallback: &mut impl Write,
) -> Result<ExportSummary, HarnessError> {
    let family = job.group_family()?;
    let g = build_group(&family, job.allow_big_memory, job.cache_dir.as_deref())?;
    let mut graph = NcGraph::build(&g, job.allow_big_memory)?;
    if collapse {
        graph = graph.collapse_by_center(&g)?;
    }
    let mut buf = Vec::new();
    graph.write_dimacs(&mut buf)?;
    match &job.out {
        Some(p) => write_atomic(p, &buf)?,
        None => fallback.write_all(&buf)?,
    }
    Ok(ExportSummary {
        vertices: graph.vertices().len(),
        edges: graph.graph().edge_count(),
        collapsed: collapse,
        path: job.out.clone(),
    })
}

/// Methods that reached the certificate's value exactly.
pub fn agreeing(report: &Report) -> Vec<Method> {
    let Some(c) = &report.certificate else {
        return Vec::new();
    };
    report
        .outcomes
        .iter()
        .filter(|o| o.exact && o.omega == Some(c.omega))
        .map(|o| o.method)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn job(family: FamilyKind) -> JobSpec {
        JobSpec::new(family)
    }

    #[test]
    fn psl27_report() {
        let mut j = job(FamilyKind::Psl2);
        j.q = Some(7);
        let r = cmd_omega(&j).unwrap();
        assert_eq!(r.omega, Some(57));
        assert!(r.formula.as_ref().unwrap().matched);
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["schema_version"], SCHEMA_VERSION);
        assert_eq!(v["job"]["family"], "psl2");
    }

    #[test]
    fn invalid_jobs() {
        let e = cmd_omega(&job(FamilyKind::Psl2)).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        let mut j = job(FamilyKind::Psl2);
        j.q = Some(6);
        assert_eq!(cmd_omega(&j).unwrap_err().exit_code(), 2);
        j.q = Some(7);
        j.node_limit = Some(0);
        assert_eq!(cmd_omega(&j).unwrap_err().exit_code(), 2);
        let mut j = job(FamilyKind::Named);
        j.name = Some("cyclic-3".into());
        assert_eq!(cmd_omega(&j).unwrap_err().exit_code(), 2);
        let mut j = job(FamilyKind::Suzuki);
        j.m = Some(1);
        let mut sink = Vec::new();
        let e = cmd_export_graph(&j, false, &mut sink).unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn formula_method_needs_no_group() {
        let mut j = job(FamilyKind::Suzuki);
        j.m = Some(2);
        j.method = JobMethod::Formula;
        let r = cmd_omega(&j).unwrap();
        assert_eq!(r.status, ReportStatus::ClosedForm);
        assert!(r.omega.unwrap() > 4551);
    }

    #[test]
    fn solver_budget_is_reported() {
        let mut j = job(FamilyKind::Psl2);
        j.q = Some(7);
        j.method = JobMethod::Solver;
        j.node_limit = Some(1);
        let r = cmd_omega(&j).unwrap();
        assert_eq!(r.status, ReportStatus::LowerBound);
        assert_eq!(r.omega, None);
    }

    #[test]
    fn group_info_sylow() {
        let mut j = job(FamilyKind::Psl2);
        j.q = Some(7);
        let r = cmd_group_info(&j).unwrap();
        let info = r.group.unwrap();
        assert_eq!(info.is_ac, Some(false));
        let counts: Vec<(u64, u64)> = info.sylow.unwrap().iter().map(|s| (s.p, s.count)).collect();
        assert_eq!(counts, [(2, 21), (3, 28), (7, 8)]);
    }

    #[test]
    fn named_parsing() {
        assert_eq!(
            parse_named("symmetric-4").unwrap(),
            NamedGroup::Symmetric(4)
        );
        assert_eq!(parse_named("q8").unwrap(), NamedGroup::Quaternion8);
        assert!(parse_named("symmetric").is_err());
    }
}
