//! Rendering and verification suites behind the `qck` binary.

use std::fmt;

use qcluster_core::mutate::run_schedule;
use qcluster_core::qgroup::check_relations;
use qcluster_core::qtorus::{Monomial, Seed};
use qcluster_core::quiver::{build_dn, build_triangle, build_zn, figure_label, half_dehn_schedule, MutationSchedule};
use qcluster_core::rmatrix::{
    dilog_identities, equivalent_mod_commuting_swaps, gen_rfact1, gen_rfact2, gen_rfactor_triangular, pent_lemma_instances,
    phi_args_from_twist, sequence_length, verify_lemk, verify_pent_lemma_instance, FactorSequence, DILOG_IDENTITIES,
};
use qcluster_core::Error;
use serde_json::{json, Value};

/// Failures that are not check results.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(Error),
    Io(std::io::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{}", e),
            CliError::Io(e) => write!(f, "{}", e),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Labels {
    Figure,
    Internal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuiverKind {
    Triangle,
    Dn,
    Zn,
}

/// A quiver ready for export, with the labels already chosen.
pub struct Export {
    pub name: String,
    pub kind: QuiverKind,
    pub size: usize,
    pub seed: Seed,
    pub labels: Vec<String>,
}

fn figure_labels_allowed(kind: QuiverKind, size: usize) -> Result<(), CliError> {
    if kind != QuiverKind::Triangle && size > 2 {
        return Err(CliError::Usage(format!("no figure numbering for rank {} (only n <= 2)", size)));
    }
    Ok(())
}

fn vertex_labels(seed: &Seed, labels: Labels) -> Vec<String> {
    (0..seed.len())
        .map(|v| match labels {
            Labels::Figure => figure_label(v),
            Labels::Internal => seed.label(v).to_string(),
        })
        .collect()
}

pub fn build_quiver(kind: QuiverKind, size: usize, labels: Labels) -> Result<Export, CliError> {
    if labels == Labels::Figure {
        figure_labels_allowed(kind, size)?;
    }
    let (seed, name) = match kind {
        QuiverKind::Triangle => {
            if size == 0 {
                return Err(CliError::Usage("triangle needs m >= 1".into()));
            }
            (build_triangle(size)?.seed, format!("triangle{}", size))
        }
        QuiverKind::Dn => {
            if size == 0 {
                return Err(CliError::Usage("dn needs n >= 1".into()));
            }
            (build_dn(size)?.seed, format!("D{}", size))
        }
        QuiverKind::Zn => {
            if size == 0 {
                return Err(CliError::Usage("zn needs n >= 1".into()));
            }
            (build_zn(size)?.seed, format!("Z{}", size))
        }
    };
    let labels = vertex_labels(&seed, labels);
    Ok(Export { name, kind, size, seed, labels })
}

fn eps_value(w2: i64) -> Value {
    if w2 % 2 == 0 {
        json!(w2 / 2)
    } else {
        json!(w2 as f64 / 2.0)
    }
}

pub fn quiver_json(q: &Export) -> Value {
    let kind = match q.kind {
        QuiverKind::Triangle => "triangle",
        QuiverKind::Dn => "dn",
        QuiverKind::Zn => "zn",
    };
    let size_key = if q.kind == QuiverKind::Triangle { "m" } else { "n" };
    let vertices: Vec<Value> = (0..q.seed.len()).map(|v| json!({"id": v, "label": q.labels[v], "frozen": q.seed.is_frozen(v)})).collect();
    let arrows: Vec<Value> = q.seed.arrows().into_iter().map(|(i, j, w)| json!({"from": i, "to": j, "weight": eps_value(w)})).collect();
    json!({
        "kind": kind,
        size_key: q.size,
        "vertex_count": q.seed.len(),
        "frozen_count": q.seed.frozen().iter().filter(|&&f| f).count(),
        "vertices": vertices,
        "arrows": arrows,
    })
}

/// Graphviz export: frozen vertices are boxes, half-weight arrows dashed.
pub fn quiver_dot(q: &Export) -> String {
    let mut out = format!("digraph {} {{\n", q.name);
    for v in 0..q.seed.len() {
        let shape = if q.seed.is_frozen(v) { "box" } else { "circle" };
        out += &format!("  {} [label=\"{}\", shape={}];\n", v, q.labels[v].replace('"', "\\\""), shape);
    }
    for (i, j, w) in q.seed.arrows() {
        match w {
            2 => out += &format!("  {} -> {};\n", i, j),
            1 => out += &format!("  {} -> {} [style=dashed];\n", i, j),
            _ => out += &format!("  {} -> {} [label=\"{}\"];\n", i, j, w as f64 / 2.0),
        }
    }
    out += "}\n";
    out
}

fn monomial_json(m: &Monomial) -> (Value, Value) {
    (json!(m.exp), json!(m.coef.to_string()))
}

pub fn schedule_json(n: usize, labels: Labels) -> Result<Value, CliError> {
    if n == 0 {
        return Err(CliError::Usage("schedule needs n >= 1".into()));
    }
    if labels == Labels::Figure {
        figure_labels_allowed(QuiverKind::Zn, n)?;
    }
    let z = build_zn(n)?;
    let (sched, _) = half_dehn_schedule(&z)?;
    let run = run_schedule(&z.seed, &sched.steps)?;
    let names = vertex_labels(&z.seed, labels);
    let MutationSchedule { steps, flips } = &sched;
    let flips: Vec<Value> = flips.iter().map(|f| json!({"size": f.iter().map(|s| s.len()).sum::<usize>(), "steps": f})).collect();
    let args: Vec<Value> = run
        .args
        .iter()
        .zip(steps)
        .enumerate()
        .map(|(pos, (a, &v))| {
            let (e, c) = monomial_json(a);
            json!({"pos": pos, "vertex": v, "vertex_label": names[v], "arg_exp": e, "arg_coef": c})
        })
        .collect();
    Ok(json!({
        "n": n,
        "length": steps.len(),
        "flips": flips,
        "sequence": steps,
        "phi_args": args,
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Which {
    Rfact1,
    Rfact2,
    Phi,
    Triangular,
}

pub fn factor_sequence(n: usize, which: Which) -> Result<FactorSequence, CliError> {
    if n == 0 {
        return Err(CliError::Usage("factors needs n >= 1".into()));
    }
    Ok(match which {
        Which::Rfact1 => gen_rfact1(n)?,
        Which::Rfact2 => gen_rfact2(n)?,
        Which::Phi => phi_args_from_twist(n)?,
        Which::Triangular => gen_rfactor_triangular(n)?.expand()?,
    })
}

pub fn factors_json(s: &FactorSequence) -> Value {
    let items: Vec<Value> = s
        .factors
        .iter()
        .enumerate()
        .map(|(pos, f)| {
            let (e, c) = monomial_json(&f.arg);
            json!({"pos": pos, "arg_exp": e, "arg_coef": c, "label": f.label})
        })
        .collect();
    Value::Array(items)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Embedding,
    LemK,
    RSequences,
    Pentagon,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Embedding => "embedding",
            Suite::LemK => "lemK",
            Suite::RSequences => "rsequences",
            Suite::Pentagon => "pentagon",
            Suite::All => "all",
        }
    }

    fn parts(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![Suite::Embedding, Suite::LemK, Suite::RSequences, Suite::Pentagon],
            s => vec![s],
        }
    }

    /// Largest rank allowed when `QCK_MAX_N` is unset.
    pub fn default_max_n(self) -> usize {
        match self {
            Suite::LemK => 2,
            _ => 3,
        }
    }
}

/// Rejects ranks outside `1..=max`, with `max` from the override or the
/// per-suite default.
pub fn check_bounds(suite: Suite, n: usize, max_override: Option<usize>) -> Result<(), CliError> {
    if n == 0 {
        return Err(CliError::Usage("n must be >= 1".into()));
    }
    for s in suite.parts() {
        let max = max_override.unwrap_or(s.default_max_n());
        if n > max {
            return Err(CliError::Usage(format!("{}: n = {} exceeds the configured maximum {}", s.name(), n, max)));
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Error => "error",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: Option<String>,
    pub elapsed_ms: u128,
}

fn timed<F: FnOnce() -> Result<bool, Error>>(name: String, f: F) -> Check {
    let t = std::time::Instant::now();
    let (status, detail) = match f() {
        Ok(true) => (Status::Pass, None),
        Ok(false) => (Status::Fail, None),
        Err(e) => (Status::Error, Some(e.to_string())),
    };
    Check { name, status, detail, elapsed_ms: t.elapsed().as_millis() }
}

/// Truncation degrees when none is given: dilogarithm identities, lemma.
pub const DEFAULT_TRUNCATION: (i64, i64) = (6, 4);

/// Runs the suite, calling `emit` after every check in a fixed order.
pub fn run_suite<E: FnMut(Check)>(suite: Suite, n: usize, truncate: Option<i64>, mut emit: E) {
    for part in suite.parts() {
        let p = part.name();
        match part {
            Suite::Embedding => match check_relations(n) {
                Ok(rep) => {
                    for r in rep {
                        emit(timed(format!("{}: {}", p, r.name), || Ok(r.holds)));
                    }
                }
                Err(e) => emit(timed(format!("{}: relations", p), || Err(e))),
            },
            Suite::LemK => emit(timed(format!("{}: Cartan flip equals twist", p), || verify_lemk(n))),
            Suite::RSequences => {
                emit(timed(format!("{}: sequence lengths", p), || {
                    let len = sequence_length(n);
                    Ok(gen_rfact1(n)?.len() == len && gen_rfact2(n)?.len() == len && phi_args_from_twist(n)?.len() == len)
                }));
                emit(timed(format!("{}: rfact1 ~ rfact2", p), || equivalent_mod_commuting_swaps(&gen_rfact1(n)?, &gen_rfact2(n)?)));
                emit(timed(format!("{}: rfact1 ~ phi", p), || equivalent_mod_commuting_swaps(&gen_rfact1(n)?, &phi_args_from_twist(n)?)));
                emit(timed(format!("{}: rfact2 ~ phi", p), || equivalent_mod_commuting_swaps(&gen_rfact2(n)?, &phi_args_from_twist(n)?)));
                emit(timed(format!("{}: triangular = rfact1", p), || {
                    Ok(gen_rfactor_triangular(n)?.expand()?.args() == gen_rfact1(n)?.args())
                }));
            }
            Suite::Pentagon => {
                let d_id = truncate.unwrap_or(DEFAULT_TRUNCATION.0);
                let d_lem = truncate.unwrap_or(DEFAULT_TRUNCATION.1);
                match dilog_identities(d_id) {
                    Ok(checks) => {
                        for name in DILOG_IDENTITIES {
                            let holds = checks.iter().any(|c| c.name == name && c.holds);
                            emit(timed(format!("{}: {} (D={})", p, name, d_id), || Ok(holds)));
                        }
                    }
                    Err(e) => emit(timed(format!("{}: dilogarithm identities", p), || Err(e))),
                }
                for (i, j, s) in pent_lemma_instances(n) {
                    emit(timed(format!("{}: lemma ({},{},{}) (D={})", p, i, j, s, d_lem), || {
                        verify_pent_lemma_instance(n, i, j, s, d_lem)
                    }));
                }
            }
            Suite::All => unreachable!(),
        }
    }
}

/// The JSON report. Timings are left out unless asked for, so repeated runs
/// produce identical bytes.
pub fn report_json(command: &str, n: usize, checks: &[Check], artifacts: &[String], timings: bool) -> Value {
    let items: Vec<Value> = checks
        .iter()
        .map(|c| {
            let mut v = json!({"name": c.name, "status": c.status.as_str()});
            if let Some(d) = &c.detail {
                v["detail"] = json!(d);
            }
            if timings {
                v["elapsed_ms"] = json!(c.elapsed_ms as u64);
            }
            v
        })
        .collect();
    json!({
        "command": command,
        "n": n,
        "passed": checks.iter().all(|c| c.status == Status::Pass),
        "checks": items,
        "artifacts": artifacts,
    })
}
