//! The verification suite: one row per acceptance check.

use std::collections::HashMap;
use std::fmt::{self, Debug};
use std::path::PathBuf;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{build_group, HarnessError};
use crate::clique::{brute_force_omega, max_clique_exact, SolveOptions, Status};
use crate::field::{prime_power, FieldSpec, FieldTables};
use crate::formulas;
use crate::group::{ExtraspecialForm, GroupFamily, GroupTable, LinearKind, NamedGroup, Subset};
use crate::ncgraph::{read_dimacs, write_dimacs_body, BitGraph, NcGraph};
use crate::structure::{self, Analysis, CoverOutcome, Method, OmegaOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RowStatus {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for RowStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RowStatus::Pass => "PASS",
            RowStatus::Fail => "FAIL",
            RowStatus::Skipped => "SKIP",
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckLine {
    pub label: String,
    pub expected: String,
    pub actual: String,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RowOutcome {
    pub id: String,
    pub title: String,
    pub mandatory: bool,
    pub status: RowStatus,
    pub checks: Vec<CheckLine>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub elapsed_ms: u64,
}

impl RowOutcome {
    /// One line: status, id, title, elapsed time and failing checks.
    pub fn summary_line(&self) -> String {
        let mut s = format!(
            "{} {:<4} {} ({} checks, {} ms)",
            self.status,
            self.id,
            self.title,
            self.checks.len(),
            self.elapsed_ms
        );
        if let Some(e) = &self.error {
            s.push_str(&format!(" error: {e}"));
        }
        s
    }

    /// `-expected / +actual` lines for every failing check.
    pub fn diff(&self) -> Vec<String> {
        self.checks
            .iter()
            .filter(|c| !c.ok)
            .flat_map(|c| {
                [
                    format!("  {}:", c.label),
                    format!("-   {}", c.expected),
                    format!("+   {}", c.actual),
                ]
            })
            .collect()
    }
}

/// Accumulates comparisons for one row.
pub struct Checker {
    mutate: bool,
    lines: Vec<CheckLine>,
}

impl Checker {
    fn new(mutate: bool) -> Self {
        Checker {
            mutate,
            lines: Vec::new(),
        }
    }

    fn push(&mut self, label: impl Into<String>, expected: String, actual: String, ok: bool) {
        self.lines.push(CheckLine {
            label: label.into(),
            expected,
            actual,
            ok,
        });
    }

    /// Integer equality. Under mutation the expected value is shifted by one.
    pub fn num(&mut self, label: impl Into<String>, expected: u64, actual: u64) {
        let expected = if self.mutate { expected + 1 } else { expected };
        self.push(
            label,
            expected.to_string(),
            actual.to_string(),
            expected == actual,
        );
    }

    pub fn eq<T: PartialEq + Debug>(&mut self, label: impl Into<String>, expected: T, actual: T) {
        let ok = expected == actual;
        self.push(label, format!("{expected:?}"), format!("{actual:?}"), ok);
    }

    pub fn truth(&mut self, label: impl Into<String>, ok: bool, detail: impl Into<String>) {
        self.push(label, "true".into(), detail.into(), ok);
    }

    pub fn within(&mut self, label: impl Into<String>, elapsed: Duration, limit: Duration) {
        self.push(
            label,
            format!("< {} s", limit.as_secs()),
            format!("{:.3} s", elapsed.as_secs_f64()),
            elapsed < limit,
        );
    }

    pub fn all_ok(&self) -> bool {
        self.lines.iter().all(|l| l.ok)
    }
}

type RowFn = fn(&SuiteContext, &mut Checker) -> Result<(), HarnessError>;

pub struct RowDef {
    pub id: &'static str,
    pub title: &'static str,
    pub mandatory: bool,
    run: RowFn,
}

/// All rows in execution order.
pub fn rows() -> Vec<RowDef> {
    let row = |id, title, mandatory, run: RowFn| RowDef {
        id,
        title,
        mandatory,
        run,
    };
    vec![
        row("1", "PSL(2,q) for q in 7, 8, 9, 11", true, row1),
        row("2", "A5 as PSL(2,4) and PSL(2,5)", true, row2),
        row("3", "PGL(2,q) for q in 2, 3, 5, 7", true, row3),
        row("4", "PSL(3,3) centralizers and clique number", true, row4),
        row("5", "Sz(8) partition and clique number", true, row5),
        row("6", "extra-special groups", true, row6),
        row(
            "6x",
            "extra-special 3^(1+6) by branch and bound",
            false,
            row6x,
        ),
        row("7", "Sylow counts", true, row7),
        row("8a", "PSL(2,q) singleton extension, q <= 9", true, row8a),
        row("8b", "PGL(2,q) singleton extension, q <= 9", true, row8b),
        row("8c", "Sz(8) singleton extension, 100 samples", true, row8c),
        row("8d", "PSL(3,3) non-extendable witness", true, row8d),
        row("9", "central extensions SL(2,5) and SL(2,7)", true, row9),
        row("10", "property suites", true, row10),
    ]
}

type GroupSlot = Arc<Mutex<Option<Arc<GroupTable>>>>;

/// Shared state for a suite run: group tables are built once per family.
pub struct SuiteContext {
    cache_dir: Option<PathBuf>,
    mutate: Option<String>,
    deadline: Option<Instant>,
    groups: Mutex<HashMap<GroupFamily, GroupSlot>>,
}

impl SuiteContext {
    pub fn new(cache_dir: Option<PathBuf>) -> Self {
        SuiteContext {
            cache_dir,
            mutate: None,
            deadline: None,
            groups: Mutex::new(HashMap::new()),
        }
    }

    pub fn group(&self, family: GroupFamily) -> Result<Arc<GroupTable>, HarnessError> {
        let cell = self
            .groups
            .lock()
            .expect("group map poisoned")
            .entry(family)
            .or_default()
            .clone();
        let mut slot = cell.lock().expect("group slot poisoned");
        if let Some(g) = slot.as_ref() {
            return Ok(g.clone());
        }
        let g = Arc::new(build_group(&family, false, self.cache_dir.as_deref())?);
        *slot = Some(g.clone());
        Ok(g)
    }

    fn remaining(&self) -> Option<Duration> {
        self.deadline
            .map(|d| d.saturating_duration_since(Instant::now()))
    }

    /// Runs one row by id.
    pub fn run_row(&self, id: &str) -> Result<RowOutcome, HarnessError> {
        let def = rows()
            .into_iter()
            .find(|r| r.id == id)
            .ok_or_else(|| HarnessError::Invalid(format!("no suite row `{id}`")))?;
        Ok(self.run_def(&def))
    }

    fn run_def(&self, def: &RowDef) -> RowOutcome {
        let mut out = RowOutcome {
            id: def.id.into(),
            title: def.title.into(),
            mandatory: def.mandatory,
            status: RowStatus::Skipped,
            checks: Vec::new(),
            error: None,
            elapsed_ms: 0,
        };
        if self.remaining() == Some(Duration::ZERO) {
            out.error = Some("suite budget exhausted".into());
            if def.mandatory {
                out.status = RowStatus::Fail;
            }
            return out;
        }
        let start = Instant::now();
        let mut c = Checker::new(self.mutate.as_deref() == Some(def.id));
        let result = (def.run)(self, &mut c);
        out.elapsed_ms = start.elapsed().as_millis() as u64;
        out.status = match &result {
            Ok(()) if c.all_ok() => RowStatus::Pass,
            Err(HarnessError::Budget(_)) if !def.mandatory && c.all_ok() => RowStatus::Skipped,
            _ => RowStatus::Fail,
        };
        out.error = result.err().map(|e| e.to_string());
        out.checks = c.lines;
        out
    }
}

#[derive(Clone, Debug, Default)]
pub struct SuiteOptions {
    /// Wall-clock budget for the whole suite.
    pub budget: Option<Duration>,
    pub cache_dir: Option<PathBuf>,
    /// Row id whose integer expectations are shifted to force a failure.
    pub mutate: Option<String>,
    /// Restrict to these row ids; empty means all.
    pub only: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub rows: Vec<RowOutcome>,
    pub passed: bool,
}

/// Runs the suite, calling `progress` after each row.
pub fn cmd_verify_suite(
    opts: &SuiteOptions,
    mut progress: impl FnMut(&RowOutcome),
) -> Result<SuiteSummary, HarnessError> {
    let all = rows();
    if let Some(bad) = opts.only.iter().find(|id| !all.iter().any(|r| r.id == *id)) {
        return Err(HarnessError::Invalid(format!("no suite row `{bad}`")));
    }
    if let Some(m) = &opts.mutate {
        if !all.iter().any(|r| r.id == m) {
            return Err(HarnessError::Invalid(format!("no suite row `{m}`")));
        }
    }
    let mut ctx = SuiteContext::new(opts.cache_dir.clone());
    ctx.mutate = opts.mutate.clone();
    ctx.deadline = opts.budget.map(|b| Instant::now() + b);
    let mut rows_out = Vec::new();
    for def in all
        .iter()
        .filter(|r| opts.only.is_empty() || opts.only.iter().any(|id| id == r.id))
    {
        let out = ctx.run_def(def);
        progress(&out);
        rows_out.push(out);
    }
    let passed = rows_out.iter().all(|r| r.status != RowStatus::Fail);
    Ok(SuiteSummary {
        rows: rows_out,
        passed,
    })
}

fn psl2(q: u32) -> GroupFamily {
    GroupFamily::Linear {
        kind: LinearKind::Psl,
        n: 2,
        q,
    }
}

fn linear(kind: LinearKind, n: u32, q: u32) -> GroupFamily {
    GroupFamily::Linear { kind, n, q }
}

fn es(p: u32, n: u32, form: ExtraspecialForm) -> GroupFamily {
    GroupFamily::Extraspecial { p, n, form }
}

fn named(group: NamedGroup) -> GroupFamily {
    GroupFamily::Named { group }
}

const SZ8: GroupFamily = GroupFamily::Suzuki { m: 1 };

fn auto(g: &GroupTable) -> Result<structure::OmegaReport, HarnessError> {
    Ok(structure::omega(g, &OmegaOptions::default())?)
}

/// Pairwise non-commutation checked directly on the group table.
fn is_noncommuting_set(g: &GroupTable, xs: &[usize]) -> bool {
    xs.iter()
        .enumerate()
        .all(|(i, &a)| xs[i + 1..].iter().all(|&b| !g.commutes(a, b)))
}

fn row1(ctx: &SuiteContext, c: &mut Checker) -> Result<(), HarnessError> {
    for q in [7u32, 8, 9, 11] {
        let t = Instant::now();
        let g = ctx.group(psl2(q))?;
        let r = auto(&g)?;
        let q64 = q as u64;
        c.num(
            format!("omega PSL(2,{q})"),
            q64 * q64 + q64 + 1,
            r.certificate.omega as u64,
        );
        let agree = r.agreeing_methods();
        c.truth(
            format!("PSL(2,{q}) certified by class counting"),
            agree.contains(&Method::AcCount) || agree.contains(&Method::CoverCertificate),
            format!("{agree:?}"),
        );
        c.truth(
            format!("PSL(2,{q}) witness clique"),
            r.certificate.witness_clique.len() == r.certificate.omega
                && is_noncommuting_set(&g, &r.certificate.witness_clique),
            format!("{} witnesses", r.certificate.witness_clique.len()),
        );
        c.within(
            format!("PSL(2,{q}) time"),
            t.elapsed(),
            Duration::from_secs(30),
        );
    }
    Ok(())
}

fn row2(ctx: &SuiteContext, c: &mut Checker) -> Result<(), HarnessError> {
    let t = Instant::now();
    for fam in [psl2(4), psl2(5), named(NamedGroup::Alternating(5))] {
        let g = ctx.group(fam)?;
        c.num(format!("order {fam}"), 60, g.order() as u64);
        let r = auto(&g)?;
        c.num(format!("omega {fam}"), 21, r.certificate.omega as u64);
        let agree = r.agreeing_methods();
        c.truth(
            format!("{fam} methods agree"),
            agree.len() >= 2 && r.outcomes.iter().all(|o| !o.exact || o.omega == Some(21)),
            format!("{agree:?}"),
        );
    }
    c.within("total time", t.elapsed(), Duration::from_secs(10));
    Ok(())
}

fn row3(ctx: &SuiteContext, c: &mut Checker) -> Result<(), HarnessError> {
    let t = Instant::now();
    for (q, want) in [(2u32, 4u64), (3, 10), (5, 31), (7, 57)] {
        let g = ctx.group(linear(LinearKind::Pgl, 2, q))?;
        let r = auto(&g)?;
        c.num(
            format!("omega PGL(2,{q})"),
            want,
            r.certificate.omega as u64,
        );
    }
    let g = ctx.group(linear(LinearKind::Pgl, 2, 7))?;
    let a = Analysis::new(&g);
    match a.cover_certificate_omega()? {
        CoverOutcome::Certified(cert) => {
            c.num(
                "PGL(2,7) cover classes",
                57,
                cert.upper_bound_classes as u64,
            );
            c.num("PGL(2,7) witnesses", 57, cert.witness_clique.len() as u64);
            c.truth(
                "PGL(2,7) witnesses pairwise non-commuting",
                is_noncommuting_set(&g, &cert.witness_clique),
                "checked on the group table",
            );
        }
        CoverOutcome::Gap(gap) => c.truth("PGL(2,7) cover certified", false, format!("{gap:?}")),
    }
    c.within("total time", t.elapsed(), Duration::from_secs(120));
    Ok(())
}

fn row4(ctx: &SuiteContext, c: &mut Checker) -> Result<(), HarnessError> {
    let t = Instant::now();
    let g = ctx.group(linear(LinearKind::Psl, 3, 3))?;
    c.num("order", 5616, g.order() as u64);
    let a = Analysis::new(&g);
    let counts: HashMap<usize, usize> = a.centralizer_order_counts().into_iter().collect();
    for (order, want) in [(6usize, 468u64), (8, 351), (9, 104), (13, 144)] {
        c.num(
            format!("centralizers of order {order}"),
            want,
            counts.get(&order).copied().unwrap_or(0) as u64,
        );
    }
    let r = auto(&g)?;
    c.num("omega", 1067, r.certificate.omega as u64);
    c.eq("method", Method::CoverCertificate, r.certificate.method);
    c.truth(
        "witness clique",
        r.certificate.witness_clique.len() == 1067
            && is_noncommuting_set(&g, &r.certificate.witness_clique),
        format!("{} witnesses", r.certificate.witness_clique.len()),
    );
    c.within("time", t.elapsed(), Duration::from_secs(600));
    Ok(())
}

fn row5(ctx: &SuiteContext, c: &mut Checker) -> Result<(), HarnessError> {
    let t = Instant::now();
    let g = ctx.group(SZ8)?;
    c.num("order", 29120, g.order() as u64);
    let a = Analysis::new(&g);
    let dec = a.partition_decompose()?;
    c.truth(
        "decomposition hypotheses",
        dec.flags.all(),
        format!("{:?}", dec.flags),
    );
    let mut by_order: HashMap<usize, u64> = HashMap::new();
    for p in &dec.parts {
        *by_order.entry(p.count()).or_default() += 1;
    }
    let expected = formulas::suzuki_partition_counts(1)?;
    for part in &expected.parts {
        let order = part.order.to_usize().unwrap_or(usize::MAX);
        c.num(
            format!("parts {} of order {order}", part.name),
            part.count.to_u64().unwrap_or(u64::MAX),
            by_order.get(&order).copied().unwrap_or(0),
        );
    }
    let (cert, parts) = a.partition_omega(&OmegaOptions::default().solve)?;
    let f_omegas: Vec<usize> = parts
        .iter()
        .filter(|p| p.order == 64)
        .map(|p| p.omega)
        .collect();
    c.truth(
        "omega of every order-64 part is 7",
        !f_omegas.is_empty() && f_omegas.iter().all(|&w| w == 7),
        format!(
            "{:?}",
            f_omegas.iter().collect::<std::collections::BTreeSet<_>>()
        ),
    );
    let formula = formulas::omega_suzuki(1)?
        .total
        .to_u64()
        .unwrap_or(u64::MAX);
    c.num("closed form", 4551, formula);
    c.num("decomposition omega", formula, cert.omega as u64);
    match a.cover_certificate_omega()? {
        CoverOutcome::Certified(cover) => {
            c.num("cover omega", cert.omega as u64, cover.omega as u64)
        }
        CoverOutcome::Gap(gap) => c.truth("cover certified", false, format!("{gap:?}")),
    }
    c.within("time", t.elapsed(), Duration::from_secs(1800));
    Ok(())
}

fn row6(ctx: &SuiteContext, c: &mut Checker) -> Result<(), HarnessError> {
    let t = Instant::now();
    for (n, want) in [(1u32, 3u64), (2, 5), (3, 7)] {
        for form in [ExtraspecialForm::Plus, ExtraspecialForm::Minus] {
            let g = ctx.group(es(2, n, form))?;
            let r = auto(&g)?;
            c.num(
                format!("omega 2^(1+{}) {form:?}", 2 * n),
                want,
                r.certificate.omega as u64,
            );
        }
    }
    for (p, want) in [(3u32, 4u64), (5, 6)] {
        let g = ctx.group(es(p, 1, ExtraspecialForm::Plus))?;
        let r = auto(&g)?;
        c.num(format!("omega {p}^(1+2)"), want, r.certificate.omega as u64);
    }
    let g = ctx.group(es(3, 2, ExtraspecialForm::Plus))?;
    let graph = NcGraph::build(&g, false)?.collapse_by_center(&g)?;
    c.num(
        "collapsed vertices of 3^(1+4)",
        80,
        graph.vertices().len() as u64,
    );
    let res = max_clique_exact(graph.graph(), &SolveOptions::default())?;
    c.eq("branch and bound status", Status::Exact, res.status);
    c.num("omega 3^(1+4)", 4, res.size as u64);
    let (lo, hi) = formulas::extraspecial_bounds_odd(3, 1)?;
    c.eq(
        "bounds for 3^(1+4)",
        (4u64, 4u64),
        (lo.to_u64().unwrap_or(0), hi.to_u64().unwrap_or(0)),
    );
    c.within("total time", t.elapsed(), Duration::from_secs(300));
    Ok(())
}

fn row6x(ctx: &SuiteContext, c: &mut Checker) -> Result<(), HarnessError> {
    let g = ctx.group(es(3, 3, ExtraspecialForm::Plus))?;
    let (lo, hi) = formulas::extraspecial_bounds_odd(3, 2)?;
    let (lo, hi) = (lo.to_usize().unwrap_or(0), hi.to_usize().unwrap_or(0));
    c.eq("bounds for 3^(1+6)", (7, 10), (lo, hi));
    let limit = ctx
        .remaining()
        .unwrap_or(Duration::MAX)
        .min(Duration::from_secs(60));
    let opts = SolveOptions {
        time_limit: Some(limit),
        node_limit: 20_000_000,
        ..Default::default()
    };
    let cert = Analysis::new(&g).solver_omega(&opts, true, false)?;
    c.truth(
        "clique found within bounds",
        cert.omega <= hi,
        format!("{} (exact: {})", cert.omega, cert.exact),
    );
    if cert.exact {
        c.truth(
            "omega 3^(1+6) in range",
            (lo..=hi).contains(&cert.omega),
            cert.omega.to_string(),
        );
        Ok(())
    } else {
        Err(HarnessError::Budget(format!(
            "solver stopped at lower bound {}; bounds {lo}..={hi}",
            cert.omega
        )))
    }
}

fn row7(ctx: &SuiteContext, c: &mut Checker) -> Result<(), HarnessError> {
    let t = Instant::now();
    let g = ctx.group(linear(LinearKind::Psl, 3, 3))?;
    let nu13 = g.sylow_count(13)?;
    c.num("nu_13(PSL(3,3))", 144, nu13);
    c.num("nu_13 cyclic count", nu13, g.sylow_count_cyclic(13)?);
    let order13 = g.orders().iter().filter(|&&o| o == 13).count() as u64;
    c.num("elements of order 13 / 12", nu13, order13 / 12);
    c.truth("nu_13 > 57", nu13 > 57, nu13.to_string());
    let sz = ctx.group(SZ8)?;
    c.num("nu_2(Sz(8))", 65, sz.sylow_count(2)?);
    c.within("time", t.elapsed(), Duration::from_secs(60));
    Ok(())
}

fn extension_rows(
    ctx: &SuiteContext,
    c: &mut Checker,
    kind: LinearKind,
) -> Result<(), HarnessError> {
    for q in [2u32, 3, 4, 5, 7, 8, 9] {
        let g = ctx.group(linear(kind, 2, q))?;
        let r = auto(&g)?;
        let a = Analysis::new(&g);
        let elements = a.noncentral_elements();
        let rep = a.singleton_extension_check(
            r.certificate.omega,
            &elements,
            &OmegaOptions::default().solve,
        )?;
        let fails: Vec<_> = rep.failures().collect();
        let detail = match fails.first() {
            None => format!("{} singletons extend", elements.len()),
            Some(e) => format!(
                "{} of {} fail; element {} lies in {:?} classes, largest clique through it {} < {}",
                fails.len(),
                elements.len(),
                e.element,
                e.classes_containing,
                e.max_clique_through,
                rep.omega
            ),
        };
        c.truth(
            format!("{} singletons extend", g.family()),
            fails.is_empty(),
            detail,
        );
    }
    Ok(())
}

fn row8a(ctx: &SuiteContext, c: &mut Checker) -> Result<(), HarnessError> {
    extension_rows(ctx, c, LinearKind::Psl)
}

fn row8b(ctx: &SuiteContext, c: &mut Checker) -> Result<(), HarnessError> {
    extension_rows(ctx, c, LinearKind::Pgl)
}

fn row8c(ctx: &SuiteContext, c: &mut Checker) -> Result<(), HarnessError> {
    let g = ctx.group(SZ8)?;
    let a = Analysis::new(&g);
    let sample = a.sample_noncentral(100, 0);
    c.num("sample size", 100, sample.len() as u64);
    let rep = a.singleton_extension_check(4551, &sample, &OmegaOptions::default().solve)?;
    let fails: Vec<_> = rep.failures().collect();
    let orders: std::collections::BTreeSet<u32> =
        fails.iter().map(|e| g.element_order(e.element)).collect();
    c.truth(
        "sampled singletons extend",
        fails.is_empty(),
        match fails.first() {
            None => "100 of 100 extend".into(),
            Some(e) => format!(
                "{} of 100 fail (element orders {orders:?}); element {} lies in {:?} classes, largest clique through it {} < 4551",
                fails.len(),
                e.element,
                e.classes_containing,
                e.max_clique_through
            ),
        },
    );
    Ok(())
}

fn row8d(ctx: &SuiteContext, c: &mut Checker) -> Result<(), HarnessError> {
    let g = ctx.group(linear(LinearKind::Psl, 3, 3))?;
    let a = Analysis::new(&g);
    match a.non_extendable_witness()? {
        Some(w) => {
            c.num("omega", 1067, w.omega as u64);
            c.truth(
                "counting bound at most 1066",
                w.bound <= 1066,
                format!(
                    "element {} in {} classes, bound {}",
                    w.element, w.classes_containing, w.bound
                ),
            );
            c.truth(
                "witness is non-central",
                !g.is_central(w.element),
                w.element.to_string(),
            );
        }
        None => c.truth("non-extendable witness found", false, "none"),
    }
    Ok(())
}

fn row9(ctx: &SuiteContext, c: &mut Checker) -> Result<(), HarnessError> {
    let t = Instant::now();
    for (q, want) in [(5u32, 21u64), (7, 57)] {
        let g = ctx.group(linear(LinearKind::Sl, 2, q))?;
        c.num(format!("center of SL(2,{q})"), 2, g.center().count() as u64);
        let graph = NcGraph::build(&g, false)?.collapse_by_center(&g)?;
        c.num(
            format!("collapsed vertices SL(2,{q})"),
            (g.order() / 2 - 1) as u64,
            graph.vertices().len() as u64,
        );
        let res = max_clique_exact(graph.graph(), &SolveOptions::default())?;
        c.eq(
            format!("SL(2,{q}) solver status"),
            Status::Exact,
            res.status,
        );
        c.num(format!("omega SL(2,{q}) collapsed"), want, res.size as u64);
        let r = auto(&g)?;
        c.num(
            format!("omega SL(2,{q}) certified"),
            want,
            r.certificate.omega as u64,
        );
        let quotient = auto(&*ctx.group(psl2(q))?)?;
        c.num(
            format!("omega PSL(2,{q}) quotient"),
            res.size as u64,
            quotient.certificate.omega as u64,
        );
    }
    c.within("total time", t.elapsed(), Duration::from_secs(120));
    Ok(())
}

/// Groups of order at most 24 used for the brute-force comparison.
fn tiny_groups() -> Vec<GroupFamily> {
    let mut v = vec![
        named(NamedGroup::Symmetric(3)),
        named(NamedGroup::Quaternion8),
        named(NamedGroup::Alternating(4)),
        named(NamedGroup::Symmetric(4)),
        linear(LinearKind::Sl, 2, 3),
        linear(LinearKind::Gl, 2, 2),
        linear(LinearKind::Pgl, 2, 3),
        es(2, 1, ExtraspecialForm::Plus),
        es(2, 1, ExtraspecialForm::Minus),
    ];
    v.extend((3..=12).map(|k| named(NamedGroup::Dihedral(k))));
    v
}

/// Every buildable non-abelian group of order at most 400 in the suite set.
fn small_groups() -> Vec<GroupFamily> {
    let mut v = tiny_groups();
    for q in [2u32, 3, 4, 5, 7] {
        for kind in [
            LinearKind::Psl,
            LinearKind::Pgl,
            LinearKind::Sl,
            LinearKind::Gl,
        ] {
            let order = match kind {
                LinearKind::Gl => (q * q - 1) * (q * q - q),
                _ => q * (q * q - 1),
            };
            if order <= 400 {
                v.push(linear(kind, 2, q));
            }
        }
    }
    v.extend([
        named(NamedGroup::Alternating(5)),
        named(NamedGroup::Symmetric(5)),
        es(2, 2, ExtraspecialForm::Plus),
        es(2, 2, ExtraspecialForm::Minus),
        es(3, 1, ExtraspecialForm::Plus),
        es(3, 1, ExtraspecialForm::Minus),
        es(5, 1, ExtraspecialForm::Plus),
        es(3, 2, ExtraspecialForm::Plus),
    ]);
    v.sort_by_key(|f| f.slug());
    v.dedup();
    v
}

fn solve_omega(graph: &BitGraph) -> Result<usize, HarnessError> {
    let res = max_clique_exact(graph, &SolveOptions::default())?;
    if res.status != Status::Exact {
        return Err(HarnessError::Budget("solver did not finish".into()));
    }
    Ok(res.size)
}

fn subgroup_omega(g: &GroupTable, h: &Subset) -> Result<usize, HarnessError> {
    solve_omega(NcGraph::of_subgroup(g, h, false)?.graph())
}

fn row10(ctx: &SuiteContext, c: &mut Checker) -> Result<(), HarnessError> {
    // Solver against brute force on group graphs.
    for fam in tiny_groups() {
        let g = ctx.group(fam)?;
        let graph = NcGraph::build(&g, false)?;
        let exact = solve_omega(graph.graph())?;
        let brute = brute_force_omega(graph.graph())?;
        c.num(
            format!("solver = brute force on {fam}"),
            brute as u64,
            exact as u64,
        );
    }
    // Solver against brute force on random graphs.
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut mismatches = 0;
    for _ in 0..200 {
        let n = rng.gen_range(1..=20);
        let density: f64 = rng.gen_range(0.1..0.9);
        let mut graph = BitGraph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(density) {
                    graph.add_edge(u, v);
                }
            }
        }
        if solve_omega(&graph)? != brute_force_omega(&graph)? {
            mismatches += 1;
        }
    }
    c.num("random graph mismatches", 0, mismatches);

    // Monotonicity on subgroup chains.
    let s5 = ctx.group(named(NamedGroup::Symmetric(5)))?;
    let a5 = s5.derived_subgroup();
    let mut v4 = s5.sylow_subgroup(2)?;
    v4.intersect_with(&a5);
    c.num("|Sylow 2 of S5 in A5|", 4, v4.count() as u64);
    let mut a4 = s5.normalizer(&v4);
    a4.intersect_with(&a5);
    c.num("|A4|", 12, a4.count() as u64);
    c.num("|A5|", 60, a5.count() as u64);
    let chain = [a4, a5, s5.full_subset()];
    let mut prev = 0;
    for (i, h) in chain.iter().enumerate() {
        c.truth(
            format!("S5 chain member {i} is a subgroup"),
            s5.is_subgroup(h),
            h.count().to_string(),
        );
        if i > 0 {
            c.truth(
                format!("S5 chain containment {i}"),
                chain[i - 1].is_subset(h),
                "",
            );
        }
        let w = subgroup_omega(&s5, h)?;
        c.truth(
            format!("omega monotone at |H| = {}", h.count()),
            w >= prev,
            format!("{prev} <= {w}"),
        );
        prev = w;
    }
    c.num("omega(S5)", 31, prev as u64);
    let e2 = ctx.group(es(2, 2, ExtraspecialForm::Plus))?;
    let gens = e2.generators();
    let d8 = e2.closure(&gens[..2]);
    c.num("|<e0, e1>| in 2^(1+4)", 8, d8.count() as u64);
    c.truth("<e0, e1> is non-abelian", !e2.is_abelian_subgroup(&d8), "");
    let (wd, wg) = (
        subgroup_omega(&e2, &d8)?,
        subgroup_omega(&e2, &e2.full_subset())?,
    );
    c.truth(
        "omega(D8) <= omega(2^(1+4))",
        wd <= wg,
        format!("{wd} <= {wg}"),
    );

    // Field axioms.
    for q in 2u64..=81 {
        if let Some((p, n)) = prime_power(q) {
            let tables = FieldTables::new(&FieldSpec::new(p, n)?)?;
            let r = tables.check_axioms();
            c.truth(
                format!("field axioms GF({q})"),
                r.is_ok(),
                r.err().unwrap_or_default(),
            );
        }
    }

    // DIMACS round trip.
    for fam in [
        psl2(7),
        es(3, 2, ExtraspecialForm::Plus),
        named(NamedGroup::Symmetric(4)),
    ] {
        let g = ctx.group(fam)?;
        let graph = NcGraph::build(&g, false)?.collapse_by_center(&g)?;
        let mut first = Vec::new();
        graph.write_dimacs(&mut first)?;
        let back = NcGraph::read_dimacs(first.as_slice())?;
        let mut second = Vec::new();
        back.write_dimacs(&mut second)?;
        c.truth(
            format!("DIMACS bytes stable for {fam}"),
            first == second,
            format!("{} bytes", first.len()),
        );
        c.truth(
            format!("DIMACS graph preserved for {fam}"),
            back.graph() == graph.graph(),
            "",
        );
        let mut body = Vec::new();
        write_dimacs_body(graph.graph(), &mut body)?;
        let plain = read_dimacs(body.as_slice())?;
        c.truth(
            format!("DIMACS body round trip for {fam}"),
            &plain == graph.graph(),
            "",
        );
    }

    // Method agreement and collapse invariance.
    for fam in small_groups() {
        let g = ctx.group(fam)?;
        let r = match structure::omega(&g, &OmegaOptions::default()) {
            Ok(r) => r,
            Err(e) => {
                c.truth(format!("methods agree on {fam}"), false, e.to_string());
                continue;
            }
        };
        let agree = r.agreeing_methods();
        c.truth(
            format!("methods agree on {fam}"),
            r.certificate.exact && agree.contains(&Method::BranchBound),
            format!("omega {} by {agree:?}", r.certificate.omega),
        );
        if g.order() <= 200 {
            let full = solve_omega(NcGraph::build(&g, false)?.graph())?;
            c.num(
                format!("collapse preserves omega on {fam}"),
                r.certificate.omega as u64,
                full as u64,
            );
        }
    }
    Ok(())
}
