//! Input files, jobs and reports for the `versal-kit` binary.
//!
//! An input file is line oriented. Blank lines and lines starting with `#`
//! are ignored.
//!
//! ```text
//! vars: x, y              # first line
//! field: Q                # second line; or `Fp 32003`
//! x^3 + y^2               # one equation per line
//! base: t                 # optional: parameters of a family
//! family: x^3 + y^2 + t*x # one per equation, in the same order
//! order: 2                # optional: truncate the base at t-degree 2
//! relations: t^2 - ...    # optional: further base relations, comma separated
//! source: [x; y]          # `ext` only: one relation per row
//! target: free 1          # `ext` only
//! ```
//!
//! Polynomials use the grammar of [`parse_poly`]: `+ - * / ^`, parentheses,
//! integer and rational constants, and juxtaposition as multiplication.
//! A matrix `[a, b; c, d]` presents the cokernel of the relations
//! `(a, b)` and `(c, d)` on two generators.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::deformation::{ArtinianAlgebra, DeformationError};
use crate::module_ext::{ext_dimension, Dim, PresentedModule};
use crate::poly::{monomials_of_degree, parse_poly, Field, FieldElem, MonomialOrder, Poly, Ring};
use crate::singularity::{Singularity, SingularityError};
use crate::versal::{
    kodaira_spencer, lift_to_next_order, miniversal, verify_versality_order, DeformationFamily,
    KodairaSpencerMatrix, VersalError,
};

/// Order used by `lift` and `verify` when none is given.
pub const DEFAULT_ORDER: u32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Invariants,
    Miniversal,
    Ks,
    Lift,
    Verify,
    Ext,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Invariants => "invariants",
            Command::Miniversal => "miniversal",
            Command::Ks => "ks",
            Command::Lift => "lift",
            Command::Verify => "verify",
            Command::Ext => "ext",
        }
    }
}

#[derive(Debug, Clone)]
pub struct JobSpec {
    pub command: Command,
    /// `Q` or `Fp:<prime>`; overrides the `field:` line of the input.
    pub field_spec: Option<String>,
    pub input_path: PathBuf,
    /// Recognized keys: `order`.
    pub options: BTreeMap<String, String>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Usage(String),
    /// The input is well formed but mathematically unsuitable.
    #[error("{0}")]
    Rejected(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Rejected(_) => 1,
            _ => 2,
        }
    }
}

impl From<SingularityError> for CliError {
    fn from(e: SingularityError) -> Self {
        match e {
            SingularityError::Poly(p) => CliError::Usage(p.to_string()),
            other => CliError::Rejected(other.to_string()),
        }
    }
}

impl From<DeformationError> for CliError {
    fn from(e: DeformationError) -> Self {
        match e {
            DeformationError::Singularity(s) => s.into(),
            other => CliError::Rejected(other.to_string()),
        }
    }
}

impl From<VersalError> for CliError {
    fn from(e: VersalError) -> Self {
        match e {
            VersalError::Singularity(s) => s.into(),
            VersalError::Deformation(d) => d.into(),
            other => CliError::Rejected(other.to_string()),
        }
    }
}

/// A parsed line with its 1-based line number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Located {
    pub line: usize,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseSpec {
    pub params: Vec<String>,
    pub family: Vec<Located>,
    pub order: Option<u32>,
    pub relations: Vec<Located>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputSpec {
    pub vars: Vec<String>,
    pub field: Field,
    pub equations: Vec<Located>,
    pub base: Option<BaseSpec>,
    pub source: Option<Located>,
    pub target: Option<Located>,
}

pub fn parse_field(s: &str) -> Result<Field, String> {
    let s = s.trim();
    if s == "Q" || s == "QQ" {
        return Ok(Field::Rational);
    }
    let rest = s
        .strip_prefix("Fp")
        .or_else(|| s.strip_prefix("GF"))
        .ok_or_else(|| format!("unknown field '{s}', expected Q or Fp <p>"))?;
    let p: u64 = rest
        .trim_start_matches([':', ' '])
        .trim()
        .parse()
        .map_err(|_| format!("bad characteristic in '{s}'"))?;
    Field::prime(p).map_err(|e| e.to_string())
}

fn split_list(s: &str) -> Vec<String> {
    s.split(',').map(|v| v.trim().to_string()).filter(|v| !v.is_empty()).collect()
}

/// Parses the text of an input file.
pub fn parse_input_text(text: &str) -> Result<InputSpec, CliError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let err = |line: usize, msg: &str| CliError::Parse { line, msg: msg.to_string() };
    let (l1, first) = lines.next().ok_or_else(|| err(1, "empty input"))?;
    let vars = first
        .strip_prefix("vars:")
        .map(split_list)
        .ok_or_else(|| err(l1, "expected 'vars: x, y, ...'"))?;
    if vars.is_empty() {
        return Err(err(l1, "no variables declared"));
    }
    let (l2, second) = lines.next().ok_or_else(|| err(l1 + 1, "expected 'field: Q | Fp <p>'"))?;
    let field = second
        .strip_prefix("field:")
        .ok_or_else(|| err(l2, "expected 'field: Q | Fp <p>'"))
        .and_then(|f| parse_field(f).map_err(|m| err(l2, &m)))?;
    let mut spec = InputSpec {
        vars,
        field,
        equations: Vec::new(),
        base: None,
        source: None,
        target: None,
    };
    let mut params = None;
    let mut family = Vec::new();
    let mut order = None;
    let mut relations = Vec::new();
    for (n, line) in lines {
        let located = |s: &str| Located {
            line: n,
            text: s.trim().to_string(),
        };
        let Some((key, value)) = line.split_once(':') else {
            spec.equations.push(located(line));
            continue;
        };
        match key.trim() {
            "base" => params = Some(split_list(value)),
            "family" => family.push(located(value)),
            "order" => {
                order = Some(value.trim().parse().map_err(|_| err(n, "order must be a non-negative integer"))?)
            }
            "relations" => relations.extend(split_list(value).iter().map(|r| located(r))),
            "source" => spec.source = Some(located(value)),
            "target" => spec.target = Some(located(value)),
            "vars" | "field" => return Err(err(n, "declared twice")),
            other => return Err(err(n, &format!("unknown key '{other}'"))),
        }
    }
    if let Some(params) = params {
        spec.base = Some(BaseSpec {
            params,
            family,
            order,
            relations,
        });
    } else if !family.is_empty() || order.is_some() || !relations.is_empty() {
        return Err(err(1, "'family', 'order' and 'relations' need a 'base:' line"));
    }
    Ok(spec)
}

pub fn parse_input(path: &Path) -> Result<InputSpec, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_input_text(&text)
}

fn parse_at(ring: &std::sync::Arc<Ring>, l: &Located) -> Result<Poly, CliError> {
    parse_poly(ring, &l.text).map_err(|e| CliError::Parse {
        line: l.line,
        msg: e.to_string(),
    })
}

fn parse_module(ring: &std::sync::Arc<Ring>, l: &Located) -> Result<PresentedModule, CliError> {
    let bad = |msg: &str| CliError::Parse {
        line: l.line,
        msg: msg.to_string(),
    };
    let t = l.text.trim();
    if let Some(r) = t.strip_prefix("free") {
        let r: usize = r.trim().parse().map_err(|_| bad("expected 'free <rank>'"))?;
        return Ok(PresentedModule::free(ring, r));
    }
    let inner = t
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| bad("expected a matrix '[a, b; c, d]' or 'free <rank>'"))?;
    let mut rows = Vec::new();
    for row in inner.split(';') {
        let mut v = Vec::new();
        for entry in row.split(',') {
            v.push(parse_poly(ring, entry.trim()).map_err(|e| bad(&e.to_string()))?);
        }
        rows.push(v);
    }
    let rank = rows[0].len();
    if rows.iter().any(|r| r.len() != rank) {
        return Err(bad("rows of different lengths"));
    }
    Ok(PresentedModule::new(ring, rank, rows))
}

/// A structured report; `timings` holds wall-clock milliseconds per stage
/// and is the only non-deterministic part.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub input: Value,
    pub invariants: Option<BTreeMap<String, Value>>,
    pub family: Option<Vec<String>>,
    pub ks_matrix: Option<Vec<Vec<String>>>,
    pub certificates: BTreeMap<String, Value>,
    pub timings: BTreeMap<String, f64>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Report, serde_json::Error> {
        serde_json::from_str(s)
    }

    /// The JSON document with the timings removed.
    pub fn without_timings(&self) -> Report {
        Report {
            timings: BTreeMap::new(),
            ..self.clone()
        }
    }
}

fn render(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => format!("[{}]", items.iter().map(render).collect::<Vec<_>>().join(", ")),
        Value::Object(map) => format!(
            "{{{}}}",
            map.iter()
                .map(|(k, v)| format!("{k}: {}", render(v)))
                .collect::<Vec<_>>()
                .join(", ")
        ),
        other => other.to_string(),
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "command: {}", self.command)?;
        if let Value::Object(map) = &self.input {
            for (k, v) in map {
                writeln!(f, "  {k}: {}", render(v))?;
            }
        }
        if let Some(inv) = &self.invariants {
            writeln!(f, "invariants:")?;
            for (k, v) in inv {
                writeln!(f, "  {k} = {}", render(v))?;
            }
        }
        if let Some(fam) = &self.family {
            writeln!(f, "family:")?;
            for m in fam {
                writeln!(f, "  {m}")?;
            }
        }
        if let Some(ks) = &self.ks_matrix {
            writeln!(f, "ks_matrix:")?;
            for row in ks {
                writeln!(f, "  [{}]", row.join(", "))?;
            }
        }
        if !self.certificates.is_empty() {
            writeln!(f, "certificates:")?;
            for (k, v) in &self.certificates {
                writeln!(f, "  {k}: {}", render(v))?;
            }
        }
        for (k, v) in &self.timings {
            writeln!(f, "time {k}: {v:.3} ms")?;
        }
        Ok(())
    }
}

fn dim_value(d: Dim) -> Value {
    match d {
        Dim::Finite(n) => json!(n),
        Dim::Infinite => json!("infinite"),
    }
}

fn elem(e: &FieldElem) -> String {
    e.to_string()
}

fn ks_value(ks: &KodairaSpencerMatrix) -> Vec<Vec<String>> {
    ks.entries.iter().map(|r| r.iter().map(elem).collect()).collect()
}

fn poly_strings(v: &[Poly]) -> Value {
    json!(v.iter().map(|p| p.to_string()).collect::<Vec<_>>())
}

struct Timer {
    start: Instant,
    timings: BTreeMap<String, f64>,
}

impl Timer {
    fn new() -> Self {
        Timer {
            start: Instant::now(),
            timings: BTreeMap::new(),
        }
    }

    fn lap(&mut self, stage: &str) {
        let ms = self.start.elapsed().as_secs_f64() * 1000.0;
        self.timings.insert(stage.to_string(), (ms * 1000.0).round() / 1000.0);
        self.start = Instant::now();
    }
}

struct Context {
    spec: InputSpec,
    ring: std::sync::Arc<Ring>,
    order: u32,
}

impl Context {
    fn singularity(&self) -> Result<Singularity, CliError> {
        if self.spec.equations.is_empty() {
            return Err(CliError::Parse {
                line: 3,
                msg: "no equations given".into(),
            });
        }
        let eqs = self
            .spec
            .equations
            .iter()
            .map(|l| parse_at(&self.ring, l))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Singularity::new(eqs)?)
    }

    /// The family of the `base:` block, if any.
    fn family(&self, s: &Singularity) -> Result<Option<DeformationFamily>, CliError> {
        let Some(base) = &self.spec.base else { return Ok(None) };
        let t_ring = Ring::new(base.params.clone(), self.spec.field, MonomialOrder::Degrevlex)
            .map_err(|e| CliError::Usage(e.to_string()))?;
        let full = self
            .ring
            .extend(&base.params)
            .map_err(|e| CliError::Usage(e.to_string()))?
            .with_order(MonomialOrder::Degrevlex);
        if base.family.len() != s.codimension() {
            return Err(CliError::Usage(format!(
                "{} family lines for {} equations",
                base.family.len(),
                s.codimension()
            )));
        }
        let members = base.family.iter().map(|l| parse_at(&full, l)).collect::<Result<Vec<_>, _>>()?;
        if base.order.is_none() && base.relations.is_empty() {
            return Ok(Some(DeformationFamily::formal(s, &t_ring, members)?));
        }
        let mut rels = base.relations.iter().map(|l| parse_at(&t_ring, l)).collect::<Result<Vec<_>, _>>()?;
        if let Some(k) = base.order {
            rels.extend(
                monomials_of_degree(t_ring.nvars(), k + 1)
                    .into_iter()
                    .map(|m| Poly::monomial(&t_ring, m, t_ring.field().one())),
            );
        }
        let algebra = ArtinianAlgebra::new(&t_ring, rels)?;
        let lifting = crate::deformation::EmbeddedLifting::new(s, &algebra, members)?;
        Ok(Some(DeformationFamily::from_lifting(&lifting)))
    }

    fn echo(&self, command: Command) -> Value {
        let mut m = serde_json::Map::new();
        m.insert("vars".into(), json!(self.spec.vars));
        m.insert("field".into(), json!(self.spec.field.to_string()));
        m.insert(
            "equations".into(),
            json!(self.spec.equations.iter().map(|l| l.text.clone()).collect::<Vec<_>>()),
        );
        m.insert("ordering".into(), json!("negdegrevlex"));
        m.insert("order".into(), json!(self.order));
        if let Some(b) = &self.spec.base {
            m.insert(
                "base".into(),
                json!({
                    "params": b.params,
                    "family": b.family.iter().map(|l| l.text.clone()).collect::<Vec<_>>(),
                    "order": b.order,
                    "relations": b.relations.iter().map(|l| l.text.clone()).collect::<Vec<_>>(),
                }),
            );
        }
        if command == Command::Ext {
            m.insert("source".into(), json!(self.spec.source.as_ref().map(|l| l.text.clone())));
            m.insert("target".into(), json!(self.spec.target.as_ref().map(|l| l.text.clone())));
        }
        Value::Object(m)
    }
}

pub fn run(job: &JobSpec) -> Result<Report, CliError> {
    let spec = parse_input(&job.input_path)?;
    run_spec(job, spec)
}

/// Runs a job on an already parsed input.
pub fn run_spec(job: &JobSpec, mut spec: InputSpec) -> Result<Report, CliError> {
    if let Some(f) = &job.field_spec {
        spec.field = parse_field(f).map_err(CliError::Usage)?;
    }
    let order = match job.options.get("order") {
        Some(o) => o.parse().map_err(|_| CliError::Usage(format!("bad order '{o}'")))?,
        None => DEFAULT_ORDER,
    };
    let ring = Ring::new(spec.vars.clone(), spec.field, MonomialOrder::Degrevlex)
        .map_err(|e| CliError::Parse { line: 1, msg: e.to_string() })?;
    let ctx = Context { spec, ring, order };
    let mut timer = Timer::new();
    let mut report = Report {
        command: job.command.name().to_string(),
        input: ctx.echo(job.command),
        invariants: None,
        family: None,
        ks_matrix: None,
        certificates: BTreeMap::new(),
        timings: BTreeMap::new(),
    };
    match job.command {
        Command::Invariants => {
            let s = ctx.singularity()?;
            invariants(&s, &mut report, &mut timer)?;
        }
        Command::Miniversal => {
            let s = ctx.singularity()?;
            check_icis(&s)?;
            timer.lap("certify");
            let v = miniversal(&s)?;
            timer.lap("miniversal");
            let mut inv = BTreeMap::new();
            inv.insert("tjurina".to_string(), json!(v.tau));
            report.invariants = Some(inv);
            report.family = Some(v.family_strings());
            report.ks_matrix = Some(ks_value(&v.ks));
            report.certificates.insert("ks_identity".into(), json!(v.ks.is_identity()));
            report.certificates.insert("base_relations".into(), json!(Vec::<String>::new()));
            report.certificates.insert("parameters".into(), json!(v.family.parameters()));
        }
        Command::Ks => {
            let s = ctx.singularity()?;
            check_icis(&s)?;
            timer.lap("certify");
            let (family, source) = match ctx.family(&s)? {
                Some(f) => (f, "input"),
                None => (miniversal(&s)?.family, "miniversal"),
            };
            let ks = kodaira_spencer(&family)?;
            timer.lap("kodaira_spencer");
            report.family = Some(family.members().iter().map(|p| p.to_string()).collect());
            report.ks_matrix = Some(ks_value(&ks));
            report.certificates.insert("family_source".into(), json!(source));
            report.certificates.insert("ks_identity".into(), json!(ks.is_identity()));
        }
        Command::Lift => {
            let s = ctx.singularity()?;
            check_icis(&s)?;
            timer.lap("certify");
            let family = match ctx.family(&s)? {
                Some(f) => f,
                None => miniversal(&s)?.family,
            };
            let mut steps = Vec::new();
            let mut last = None;
            for n in 1..=ctx.order {
                let lift = lift_to_next_order(&family, n)?;
                steps.push(json!({
                    "order": n,
                    "flat_before_correction": lift.certificate.flat,
                    "relations_checked": lift.certificate.syzygies.len(),
                    "corrections_zero": lift.corrections.iter().flatten().all(|p| p.is_zero()),
                }));
                last = Some(lift);
            }
            timer.lap("lift");
            if let Some(l) = last {
                report.family = Some(l.lifting.equations().iter().map(|p| p.to_string()).collect());
            }
            report.certificates.insert("steps".into(), json!(steps));
        }
        Command::Verify => {
            let s = ctx.singularity()?;
            check_icis(&s)?;
            timer.lap("certify");
            let trial = match ctx.family(&s)? {
                Some(f) => f,
                None => miniversal(&s)?.family,
            };
            let cert = verify_versality_order(&s, ctx.order, &trial)?;
            timer.lap("verify");
            report.family = Some(trial.members().iter().map(|p| p.to_string()).collect());
            report.certificates.insert("verified".into(), json!(cert.verified));
            report.certificates.insert("phi".into(), poly_strings(&cert.phi));
            report.certificates.insert(
                "steps".into(),
                json!(cert
                    .steps
                    .iter()
                    .map(|st| json!({
                        "order": st.order,
                        "e_class_vanishes": st.e_class_vanishes,
                        "coordinates": st.coordinates.iter().map(|r| r.iter().map(elem).collect::<Vec<_>>()).collect::<Vec<_>>(),
                    }))
                    .collect::<Vec<_>>()),
            );
            if !cert.verified {
                return Err(CliError::Rejected("versality transport did not close up".into()));
            }
        }
        Command::Ext => {
            let missing = |k: &str| CliError::Usage(format!("'ext' needs a '{k}:' line"));
            let src = parse_module(&ctx.ring, ctx.spec.source.as_ref().ok_or_else(|| missing("source"))?)?;
            let tgt = parse_module(&ctx.ring, ctx.spec.target.as_ref().ok_or_else(|| missing("target"))?)?;
            let mut inv = BTreeMap::new();
            for (i, name) in ["hom", "ext1", "ext2"].iter().enumerate() {
                inv.insert(name.to_string(), dim_value(ext_dimension(&src, &tgt, i)));
            }
            timer.lap("ext");
            report.invariants = Some(inv);
            report.certificates.insert("resolution_length".into(), json!(3));
        }
    }
    report.timings = timer.timings;
    Ok(report)
}

fn check_icis(s: &Singularity) -> Result<(), CliError> {
    if !s.certify_regular() {
        return Err(SingularityError::NotRegularSequence.into());
    }
    if !s.certify_isolated()? {
        return Err(SingularityError::NonIsolated.into());
    }
    Ok(())
}

fn invariants(s: &Singularity, report: &mut Report, timer: &mut Timer) -> Result<(), CliError> {
    check_icis(s)?;
    timer.lap("certify");
    let mut inv = BTreeMap::new();
    inv.insert("codimension".to_string(), json!(s.codimension()));
    inv.insert("dimension".to_string(), json!(s.ring().nvars() - s.codimension()));
    if s.is_hypersurface() {
        inv.insert("milnor".to_string(), json!(s.milnor_algebra()?.1));
    }
    let t1 = s.t1()?;
    inv.insert("tjurina".to_string(), dim_value(t1.dimension));
    inv.insert("t1".to_string(), dim_value(t1.dimension));
    let t0 = s.tangent_module(0)?;
    inv.insert("t0".to_string(), dim_value(t0.dimension));
    inv.insert("t2".to_string(), dim_value(s.tangent_module(2)?.dimension));
    timer.lap("invariants");
    report.invariants = Some(inv);
    report.certificates.insert("regular_sequence".into(), json!(true));
    report.certificates.insert("isolated".into(), json!(true));
    report.certificates.insert(
        "t1_basis".into(),
        json!(t1
            .basis
            .iter()
            .flatten()
            .map(|v| v.iter().map(|p| p.to_string()).collect::<Vec<_>>())
            .collect::<Vec<_>>()),
    );
    if let Some(w) = &t0.witness {
        report.certificates.insert("t0_witness".into(), poly_strings(w));
    }
    Ok(())
}
