//! Command-line front end.
//!
//! Every result is one record carrying the tool version, seed, caps and caveats. Exit code 0
//! means success, 2 means at least one verdict was undecided, 1 means an error.

use std::io::Write;
use std::path::{Path as FsPath, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::bound_quiver::{parse_algebra, BoundQuiverAlgebra};
use crate::decomp::{
    generic_decomposition_from_samples, generic_decomposition_sampled, is_generic_root_sampled, predict_rational_invariants,
};
use crate::error::{Error, Result};
use crate::exactalg::{GroebnerCaps, Rat, RatMatrix};
use crate::forms::{classify_q, euler_data, relation_counts, tits_form, weight_from_dimvec, WeightKind};
use crate::rep::io::load_rep_with;
use crate::rep::Representation;
use crate::sampling::{random_representation, rng_from_seed};
use crate::semi_invariants::{check_symmetric_factorization, classify_moduli_tame, hilbert_series};
use crate::stability::{jh_filtration_ss, king_test, moduli_dimension, theta_stable_decomposition, StabilityStatus};
use crate::tilting::{is_well_positioned, transport_module, PositionCase, TiltingContext, WellPositionedVerdict};

pub const TOOL: &str = "quiver-moduli";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Text,
    JsonLines,
}

#[derive(Parser, Debug)]
#[command(name = TOOL, version, about = "Forms, stability, semi-invariants and tilting for bound quiver algebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Common {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Seed for every sampled quantity.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Number of random samples per query.
    #[arg(long, global = true, default_value_t = 5)]
    pub samples: usize,
    /// Largest total dimension scanned by bounded searches.
    #[arg(long, global = true, default_value_t = 4)]
    pub bound: usize,
    /// Largest polynomial degree enumerated for semi-invariants.
    #[arg(long, global = true, default_value_t = crate::semi_invariants::DEFAULT_DEGREE_CAP)]
    pub degree_cap: u32,
    /// Largest Gröbner basis size before a system is reported undecided.
    #[arg(long, global = true, default_value_t = 5000)]
    pub groebner_max_basis: usize,
    /// Largest S-polynomial degree before a system is reported undecided.
    #[arg(long, global = true, default_value_t = 30)]
    pub groebner_max_degree: u32,
}

impl Common {
    fn caps(&self) -> GroebnerCaps {
        GroebnerCaps { max_basis: self.groebner_max_basis, max_degree: self.groebner_max_degree }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Euler form, Tits form and weights from dimension vectors.
    Forms(FormsArgs),
    /// King test, Jordan–Hölder factors, θ-stable decomposition and moduli dimension.
    Stability(StabilityArgs),
    /// Semi-invariant dimensions and symmetric-product factorization.
    Si(SiArgs),
    /// Tilting module check, End algebra, well-positioned weights and transport.
    Tilt(TiltArgs),
    /// Sampled generic decomposition and rational invariant predictions.
    Decomp(DecompArgs),
}

#[derive(Args, Debug)]
pub struct FormsArgs {
    #[arg(long)]
    pub algebra: PathBuf,
    /// Dimension vector for the Tits form.
    #[arg(long, value_delimiter = ',')]
    pub d: Option<Vec<usize>>,
    /// Dimension vector `d0` for a weight built from the Euler form.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub weight_d0: Option<Vec<i64>>,
    /// left, right or difference.
    #[arg(long, default_value = "difference")]
    pub weight_kind: String,
    /// Longest resolution computed for the Euler form.
    #[arg(long, default_value_t = crate::forms::DEFAULT_GLOBAL_DIM_BOUND)]
    pub l_max: usize,
}

#[derive(Args, Debug)]
pub struct StabilityArgs {
    #[arg(long)]
    pub algebra: PathBuf,
    /// Representation files to test.
    #[arg(long)]
    pub rep: Vec<PathBuf>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub theta: Vec<i64>,
    /// Dimension vector for a sampled θ-stable decomposition and moduli dimension.
    #[arg(long, value_delimiter = ',')]
    pub d: Option<Vec<usize>>,
}

#[derive(Args, Debug)]
pub struct SiArgs {
    #[arg(long)]
    pub algebra: PathBuf,
    #[arg(long, value_delimiter = ',')]
    pub d: Vec<usize>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub theta: Vec<i64>,
    #[arg(long, default_value_t = 3)]
    pub mmax: u32,
    /// Factor `dims:multiplicity`, e.g. `1,1:2`; repeat for several factors.
    #[arg(long)]
    pub part: Vec<String>,
    /// Assert that the algebra is tame and predict the shape of the moduli space from the parts.
    #[arg(long)]
    pub assume_tame: bool,
}

#[derive(Args, Debug)]
pub struct TiltArgs {
    #[arg(long)]
    pub algebra: PathBuf,
    /// Indecomposable summands of T in the order fixing the vertices of B.
    #[arg(long)]
    pub summand: Vec<PathBuf>,
    /// T as a single module, split by Krull–Schmidt.
    #[arg(long)]
    pub module: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub theta: Option<Vec<i64>>,
    /// Modules to transport to B.
    #[arg(long)]
    pub transport: Vec<PathBuf>,
    /// Case (1 or 2) used when the bounded check is undecided.
    #[arg(long)]
    pub case: Option<u8>,
    /// Writes the presentation of B to this file.
    #[arg(long)]
    pub write_b: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct DecompArgs {
    #[arg(long)]
    pub algebra: PathBuf,
    #[arg(long, value_delimiter = ',')]
    pub d: Vec<usize>,
    /// Caller-supplied sample modules, used instead of random sampling.
    #[arg(long)]
    pub rep: Vec<PathBuf>,
    /// Assert that the algebra is tame quasi-tilted and predict rational invariants.
    #[arg(long)]
    pub assume_tame: bool,
}

struct Emitter<'a> {
    out: &'a mut dyn Write,
    common: Common,
    command: &'static str,
    undecided: bool,
}

impl Emitter<'_> {
    fn header(&self, kind: &str) -> Map<String, Value> {
        let mut m = Map::new();
        m.insert("tool".into(), json!(TOOL));
        m.insert("version".into(), json!(VERSION));
        m.insert("command".into(), json!(self.command));
        m.insert("kind".into(), json!(kind));
        m.insert("seed".into(), json!(self.common.seed));
        m.insert(
            "caps".into(),
            json!({
                "samples": self.common.samples,
                "bound": self.common.bound,
                "degree_cap": self.common.degree_cap,
                "groebner_max_basis": self.common.groebner_max_basis,
                "groebner_max_degree": self.common.groebner_max_degree,
            }),
        );
        m
    }

    fn emit(&mut self, kind: &str, result: Value, caveats: Vec<String>) -> Result<()> {
        let mut rec = self.header(kind);
        rec.insert("result".into(), result);
        rec.insert("caveats".into(), json!(caveats));
        self.write(Value::Object(rec))
    }

    fn write(&mut self, rec: Value) -> Result<()> {
        match self.common.format {
            Format::JsonLines => writeln!(self.out, "{rec}")?,
            Format::Text => {
                let kind = rec.get("kind").and_then(Value::as_str).unwrap_or("record").to_string();
                writeln!(self.out, "== {kind} ==")?;
                let mut lines = Vec::new();
                flatten("", &rec, &mut lines);
                for (k, v) in lines {
                    if k != "kind" {
                        writeln!(self.out, "{k}: {v}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

fn scalar_text(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Null => Some("none".into()),
        Value::Bool(_) | Value::Number(_) => Some(v.to_string()),
        Value::Array(items) if items.iter().all(|x| !x.is_object() && !x.is_array()) => {
            Some(format!("[{}]", items.iter().map(|x| scalar_text(x).unwrap_or_default()).collect::<Vec<_>>().join(", ")))
        }
        Value::Array(items)
            if items.iter().all(|x| x.as_array().is_some_and(|r| r.iter().all(|y| !y.is_object() && !y.is_array()))) =>
        {
            Some(format!("[{}]", items.iter().map(|x| scalar_text(x).unwrap_or_default()).collect::<Vec<_>>().join(", ")))
        }
        _ => None,
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    if let Some(s) = scalar_text(v) {
        out.push((prefix.to_string(), s));
        return;
    }
    let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                flatten(&join(k), x, out);
            }
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                flatten(&join(&i.to_string()), x, out);
            }
        }
        _ => unreachable!("scalars handled above"),
    }
}

fn matrix_json(m: &RatMatrix) -> Value {
    json!((0..m.rows()).map(|r| m.row(r).iter().map(Rat::to_string).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn rep_json(m: &Representation) -> Value {
    let q = m.algebra().quiver();
    let maps: Map<String, Value> =
        q.arrows().iter().enumerate().map(|(a, arrow)| (arrow.name.clone(), matrix_json(m.map(a)))).collect();
    json!({ "dims": m.dims(), "maps": maps })
}

fn load_algebra(path: &FsPath) -> Result<Arc<BoundQuiverAlgebra>> {
    Ok(Arc::new(parse_algebra(&std::fs::read_to_string(path)?)?))
}

fn parse_part(s: &str) -> Result<(Vec<usize>, usize)> {
    let (dims, mult) = s.split_once(':').unwrap_or((s, "1"));
    let bad = || Error::InvalidInput(format!("invalid part '{s}', expected dims:multiplicity"));
    let dims =
        dims.split(',').map(|x| x.trim().parse::<usize>()).collect::<std::result::Result<Vec<_>, _>>().map_err(|_| bad())?;
    let mult = mult.trim().parse::<usize>().map_err(|_| bad())?;
    Ok((dims, mult))
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable report")
}

fn run_forms(e: &mut Emitter, a: &FormsArgs) -> Result<()> {
    let alg = load_algebra(&a.algebra)?;
    let euler = euler_data(&alg, a.l_max)?;
    e.emit(
        "euler_form",
        json!({
            "vertices": alg.quiver().vertices(),
            "matrix": euler.matrix,
            "global_dimension": euler.global_dimension,
            "relation_counts": relation_counts(&alg),
        }),
        Vec::new(),
    )?;
    if let Some(d) = &a.d {
        let t = tits_form(&alg, d)?;
        let class = classify_q(&alg, d)?;
        e.emit(
            "tits_form",
            json!({
                "d": d,
                "q": t.value,
                "class": class.as_str(),
                "triangular_formula": t.triangular_formula,
                "consistent": t.consistent(),
            }),
            Vec::new(),
        )?;
    }
    if let Some(d0) = &a.weight_d0 {
        if d0.len() != alg.vertex_count() {
            return Err(Error::DimensionMismatch(format!("d0 has {} entries", d0.len())));
        }
        let kind: WeightKind = a.weight_kind.parse()?;
        let theta = weight_from_dimvec(&euler, d0, kind);
        e.emit("weight", json!({ "d0": d0, "kind": a.weight_kind, "theta": theta }), Vec::new())?;
    }
    Ok(())
}

fn status_value(s: StabilityStatus) -> Value {
    json!(s.as_str())
}

fn run_stability(e: &mut Emitter, a: &StabilityArgs) -> Result<()> {
    let alg = load_algebra(&a.algebra)?;
    let caps = e.common.caps();
    for path in &a.rep {
        let m = load_rep_with(path, alg.clone())?;
        let v = king_test(&m, &a.theta, caps)?;
        if v.status == StabilityStatus::Undecided {
            e.undecided = true;
        }
        e.emit(
            "king_test",
            json!({
                "rep": path.display().to_string(),
                "dims": m.dims(),
                "theta": a.theta,
                "status": status_value(v.status),
                "witness": v.witness,
            }),
            v.notes.clone(),
        )?;
        if v.status.is_semistable() {
            let jh = jh_filtration_ss(&m, &a.theta, caps)?;
            if !jh.exact {
                e.undecided = true;
            }
            let factors: Vec<Value> =
                jh.factors.iter().map(|f| json!({ "dims": f.dims, "module": f.module.as_ref().map(rep_json) })).collect();
            let multiset: Vec<Value> = jh.multiset().into_iter().map(|(d, k)| json!({ "dims": d, "multiplicity": k })).collect();
            e.emit(
                "jordan_holder",
                json!({ "rep": path.display().to_string(), "factors": factors, "multiset": multiset, "exact": jh.exact }),
                jh.notes.clone(),
            )?;
        }
    }
    if let Some(d) = &a.d {
        let mut rng = rng_from_seed(e.common.seed);
        let samples = (0..e.common.samples).map(|_| random_representation(&alg, d, &mut rng)).collect::<Result<Vec<_>>>()?;
        let dec = theta_stable_decomposition(&samples, &a.theta, caps)?;
        if !dec.exact {
            e.undecided = true;
        }
        let mut caveats = dec.caveats.clone();
        caveats.push("θ-well-behavedness is assumed, not decided".into());
        e.emit("theta_stable_decomposition", json!({ "d": d, "theta": a.theta, "report": to_value(&dec) }), caveats)?;
        let md = moduli_dimension(&alg, d, &a.theta, &samples, caps)?;
        if !md.exact {
            e.undecided = true;
        }
        e.emit("moduli_dimension", json!({ "d": d, "theta": a.theta, "report": to_value(&md) }), md.caveats.clone())?;
    }
    Ok(())
}

fn run_si(e: &mut Emitter, a: &SiArgs) -> Result<()> {
    let alg = load_algebra(&a.algebra)?;
    let r = hilbert_series(&alg, &a.d, &a.theta, a.mmax, e.common.degree_cap)?;
    e.emit("hilbert_series", json!({ "d": r.d, "theta": r.theta, "m_max": a.mmax, "dims": r.dims }), r.caveats.clone())?;
    if !a.part.is_empty() {
        let parts = a.part.iter().map(|s| parse_part(s)).collect::<Result<Vec<_>>>()?;
        let f = check_symmetric_factorization(&alg, &a.theta, &parts, a.mmax, e.common.degree_cap, e.common.seed)?;
        let parts_json: Vec<Value> = parts.iter().map(|(d, m)| json!({ "dims": d, "multiplicity": m })).collect();
        e.emit("symmetric_factorization", json!({ "parts": parts_json, "report": to_value(&f) }), f.caveats.clone())?;
        if a.assume_tame {
            let p = classify_moduli_tame(&alg, &a.d, &parts)?;
            e.emit("moduli_prediction", to_value(&p), p.notes.clone())?;
        }
    }
    Ok(())
}

fn run_tilt(e: &mut Emitter, a: &TiltArgs) -> Result<()> {
    let alg = load_algebra(&a.algebra)?;
    let ctx = match (&a.module, a.summand.is_empty()) {
        (Some(path), true) => TiltingContext::from_module(&load_rep_with(path, alg.clone())?)?,
        (None, false) => {
            let summands = a.summand.iter().map(|p| load_rep_with(p, alg.clone())).collect::<Result<Vec<_>>>()?;
            TiltingContext::new(summands)?
        }
        _ => return Err(Error::InvalidInput("give either --module or one or more --summand".into())),
    };
    e.emit(
        "tilting_module",
        json!({
            "check": to_value(&ctx.check),
            "summands": ctx.summands.iter().map(rep_json).collect::<Vec<_>>(),
            "b_algebra": ctx.b.to_text(),
            "b_dimension": ctx.b.dim(),
            "u": ctx.u,
        }),
        ctx.check.notes.clone(),
    )?;
    if let Some(path) = &a.write_b {
        std::fs::write(path, ctx.b.to_text())?;
    }
    let Some(theta) = &a.theta else {
        if !a.transport.is_empty() {
            return Err(Error::InvalidInput("--transport needs --theta".into()));
        }
        return Ok(());
    };
    let wp = is_well_positioned(&ctx, theta, e.common.bound, e.common.samples, e.common.seed)?;
    let mut caveats = wp.notes.clone();
    caveats.push(format!("positive verdicts are verified for total dimension at most {}", wp.bound));
    if wp.verdict == WellPositionedVerdict::Undecided {
        e.undecided = true;
    }
    e.emit("well_positioned", json!({ "theta": theta, "report": to_value(&wp) }), caveats)?;
    if a.transport.is_empty() {
        return Ok(());
    }
    let case = match (wp.verdict, a.case) {
        (WellPositionedVerdict::Case1, None | Some(1)) => PositionCase::Case1,
        (WellPositionedVerdict::Case2, None | Some(2)) => PositionCase::Case2,
        (WellPositionedVerdict::Undecided, Some(1)) => PositionCase::Case1,
        (WellPositionedVerdict::Undecided, Some(2)) => PositionCase::Case2,
        (v, c) => {
            return Err(Error::NotApplicable(format!(
                "transport refused: bounded check gave {v:?}{}",
                c.map(|c| format!(", requested case {c}")).unwrap_or_default()
            )))
        }
    };
    for path in &a.transport {
        let m = load_rep_with(path, alg.clone())?;
        let r = transport_module(&ctx, &m, theta, case)?;
        if r.target_status == StabilityStatus::Undecided {
            e.undecided = true;
        }
        e.emit(
            "transport",
            json!({
                "rep": path.display().to_string(),
                "functor": to_value(&r.functor),
                "theta_prime": r.theta_prime,
                "source_status": status_value(r.source_status),
                "target_status": status_value(r.target_status),
                "expected_dims": r.expected_dims,
                "image": rep_json(&r.module),
                "mapped_factor_dims": r.mapped_factor_dims,
                "image_factor_dims": r.image_factor_dims,
            }),
            Vec::new(),
        )?;
    }
    Ok(())
}

fn run_decomp(e: &mut Emitter, a: &DecompArgs) -> Result<()> {
    let alg = load_algebra(&a.algebra)?;
    let dec = if a.rep.is_empty() {
        generic_decomposition_sampled(&alg, &a.d, e.common.samples, e.common.seed)?
    } else {
        let samples = a.rep.iter().map(|p| load_rep_with(p, alg.clone())).collect::<Result<Vec<_>>>()?;
        generic_decomposition_from_samples(&alg, &a.d, &samples)?
    };
    let root =
        if a.rep.is_empty() { Some(is_generic_root_sampled(&alg, &a.d, e.common.samples, e.common.seed)?.verdict) } else { None };
    e.emit(
        "generic_decomposition",
        json!({ "report": to_value(&dec), "generic_root": root.map(|r| to_value(&r)) }),
        dec.caveats.clone(),
    )?;
    if a.assume_tame {
        let p = predict_rational_invariants(&dec)?;
        e.emit("rational_invariants", to_value(&p), p.notes.clone())?;
    }
    Ok(())
}

fn module_of(cmd: &Command) -> &'static str {
    match cmd {
        Command::Forms(_) => "forms",
        Command::Stability(_) => "stability",
        Command::Si(_) => "semi_invariants",
        Command::Tilt(_) => "tilting",
        Command::Decomp(_) => "decomp",
    }
}

/// Parses `args` (including the program name), runs the command and writes all records to `out`.
/// Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(err) => {
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = write!(out, "{err}");
            return code;
        }
    };
    let command = module_of(&cli.command);
    let mut e = Emitter { out, common: cli.common.clone(), command, undecided: false };
    let res = if cli.common.samples == 0 || cli.common.bound == 0 || cli.common.degree_cap == 0 {
        Err(Error::InvalidInput("samples, bound and degree cap must be positive".into()))
    } else {
        match &cli.command {
            Command::Forms(a) => run_forms(&mut e, a),
            Command::Stability(a) => run_stability(&mut e, a),
            Command::Si(a) => run_si(&mut e, a),
            Command::Tilt(a) => run_tilt(&mut e, a),
            Command::Decomp(a) => run_decomp(&mut e, a),
        }
    };
    match res {
        Ok(()) if e.undecided => 2,
        Ok(()) => 0,
        Err(err) => {
            let mut rec = e.header("error");
            rec.insert("error".into(), json!(err.kind()));
            rec.insert("module".into(), json!(command));
            rec.insert("message".into(), json!(err.to_string()));
            let _ = e.write(Value::Object(rec));
            1
        }
    }
}
