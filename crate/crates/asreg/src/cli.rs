//! The `asreg` command line.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails with a
//! witness, 2 on input errors, 3 when a result is inconclusive at the caps.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use asreg_core::algebra::Algebra;
use asreg_core::constructions::{
    auslander_algebra, idempotent_truncation, kronecker_swap, quadratic_dual, skew_group_cyclic, trivial_extension,
};
use asreg_core::growth::{classify_growth, Growth};
use asreg_core::linalg::{sv_add, Mat, SVec};
use asreg_core::presentation::{Mode, Presentation};
use asreg_core::regularity::{certify_as_regular, d_tr_permutation, Certificate, SideReport, TrOutcome, Verdict};
use asreg_core::repr::{Representation, SimpleSet};
use asreg_core::resolution::{Caps, Completeness, Resolution};
use asreg_core::sca::{frobenius_test, presentation_from_sca, Extracted, Sca};
use asreg_core::yoneda::yoneda_algebra;
use asreg_core::Error;

use crate::format::{self, ParseError};
use crate::report::{Report, Status};

#[derive(Parser, Debug)]
#[command(name = "asreg", version, about = "Resolutions, transposes and regularity certificates for quiver algebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct CapArgs {
    /// Homological cap.
    #[arg(long, default_value_t = 8)]
    pub homcap: usize,
    /// Internal-degree cap.
    #[arg(long, default_value_t = 12)]
    pub degcap: i32,
}

impl CapArgs {
    fn caps(&self) -> Caps {
        Caps { homcap: self.homcap, degcap: self.degcap }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Minimal projective resolution of a module.
    Resolve {
        file: PathBuf,
        /// `simple:v[@d]`, `projective:v[@d]`, `loewy:v:k` or `rep:<file>`.
        #[arg(long)]
        module: Option<String>,
        #[command(flatten)]
        caps: CapArgs,
    },
    /// Regularity certificate for both sides.
    Certify {
        file: PathBuf,
        #[command(flatten)]
        caps: CapArgs,
    },
    /// Yoneda algebra of a sum of simples.
    Yoneda {
        file: PathBuf,
        /// Comma-separated vertices, each optionally `v@d`.
        #[arg(long)]
        simples: String,
        /// Highest homological degree.
        #[arg(long, default_value_t = 4)]
        cap: usize,
        /// Also test whether the result is Frobenius.
        #[arg(long)]
        frobenius: bool,
    },
    /// Build a new algebra and write it next to `--out`.
    Construct {
        #[command(subcommand)]
        kind: Construct,
    },
    /// Hilbert function and growth.
    Hilbert {
        file: PathBuf,
        #[arg(long, default_value_t = 8)]
        upto: u32,
        #[arg(long)]
        classify: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ModeArg {
    Finite,
    Graded,
}

#[derive(Subcommand, Debug)]
pub enum Construct {
    /// Trivial extension of a finite-dimensional presentation.
    TrivialExt {
        file: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Skew group algebra for a cyclic action on a structure-constant file.
    Skew {
        file: PathBuf,
        /// `swap` exchanges the vertices of a Kronecker trivial extension.
        #[arg(long, conflicts_with = "action_file")]
        action: Option<String>,
        /// Lines `i : c*j …` giving the image of basis element `i`.
        #[arg(long)]
        action_file: Option<PathBuf>,
        #[arg(long)]
        order: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Corner algebra `eAe`.
    Truncate {
        file: PathBuf,
        /// `+`-separated idempotent names.
        #[arg(long)]
        idempotent: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Quadratic dual of a quadratic presentation.
    Dual {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Graded)]
        mode: ModeArg,
        /// Degree cap when the output is graded.
        #[arg(long, default_value_t = 12)]
        degcap: u32,
        #[arg(long)]
        out: PathBuf,
    },
    /// Auslander-type algebra `End(⊕ M_i)^op` of a list of modules.
    Auslander {
        file: PathBuf,
        /// `name=spec`, repeated; specs as for `resolve --module`.
        #[arg(long = "module", required = true)]
        modules: Vec<String>,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Why a command stopped early.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Core(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::ShallowResolution(_) | Error::BeyondCap { .. }) => 3,
            _ => 2,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

struct Ctx {
    report: Report,
}

impl Ctx {
    fn read(&mut self, path: &Path) -> CliResult<String> {
        let bytes =
            std::fs::read(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
        let text = String::from_utf8(bytes.clone())
            .map_err(|_| CliError::Input(format!("{}: not valid UTF-8", path.display())))?;
        self.report.inputs.push(bytes);
        Ok(text)
    }

    fn presentation(&mut self, path: &Path) -> CliResult<Presentation> {
        let text = self.read(path)?;
        format::parse_presentation(&text).map_err(|source| CliError::Parse { path: path.display().to_string(), source })
    }

    fn algebra(&mut self, path: &Path) -> CliResult<Algebra> {
        let p = self.presentation(path)?;
        Ok(Algebra::new(&p)?)
    }

    fn sca(&mut self, path: &Path) -> CliResult<Sca> {
        let text = self.read(path)?;
        format::parse_sca(&text).map_err(|source| CliError::Parse { path: path.display().to_string(), source })
    }

    fn write(&mut self, path: &Path, text: &str) -> CliResult<()> {
        std::fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source })
    }
}

/// Runs the command line, writing the report to `out` and diagnostics to
/// `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = write!(err, "{e}");
            return code;
        }
    };
    let echo: Vec<String> = argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let name = echo.first().cloned().unwrap_or_default();
    let mut ctx = Ctx { report: Report::new(&name, &echo[1.min(echo.len())..]) };
    let start = Instant::now();
    let outcome = match &cli.command {
        Command::Resolve { file, module, caps } => resolve(&mut ctx, file, module.as_deref(), caps.caps()),
        Command::Certify { file, caps } => certify(&mut ctx, file, caps.caps()),
        Command::Yoneda { file, simples, cap, frobenius } => yoneda(&mut ctx, file, simples, *cap, *frobenius),
        Command::Construct { kind } => construct(&mut ctx, kind),
        Command::Hilbert { file, upto, classify } => hilbert(&mut ctx, file, *upto, *classify),
    };
    match outcome {
        Ok(()) => {
            let r = &ctx.report;
            let _ = out.write_all(r.render(start.elapsed()).as_bytes());
            for line in &r.summary {
                let _ = writeln!(err, "{line}");
            }
            r.status.exit_code()
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn parse_vertex_degree(alg: &Algebra, s: &str) -> CliResult<(u32, i32)> {
    let (v, d) = match s.split_once('@') {
        Some((v, d)) => (v, d.parse::<i32>().map_err(|_| CliError::Input(format!("bad degree in `{s}`")))?),
        None => (s, 0),
    };
    Ok((alg.quiver().vertex(v)?, d))
}

fn module_from_spec(ctx: &mut Ctx, alg: &Algebra, spec: &str) -> CliResult<Representation> {
    let bad = || CliError::Input(format!("bad module spec `{spec}`"));
    let (kind, rest) = spec.split_once(':').ok_or_else(bad)?;
    Ok(match kind {
        "simple" => {
            let (v, d) = parse_vertex_degree(alg, rest)?;
            Representation::simple(alg, v, d)?
        }
        "projective" => {
            let (v, d) = parse_vertex_degree(alg, rest)?;
            Representation::projective(alg, v, d)?
        }
        "loewy" => {
            let (v, k) = rest.rsplit_once(':').ok_or_else(bad)?;
            let k: usize = k.parse().map_err(|_| bad())?;
            let (v, d) = parse_vertex_degree(alg, v)?;
            Representation::projective(alg, v, d)?.loewy_quotient(k)
        }
        "rep" => {
            let path = Path::new(rest);
            let text = ctx.read(path)?;
            format::parse_representation(alg, &text)
                .map_err(|source| CliError::Parse { path: rest.to_string(), source })?
        }
        _ => return Err(bad()),
    })
}

fn block_label(alg: &Algebra, (v, d): (u32, i32)) -> String {
    let name = alg.quiver().vertex_name(v);
    if alg.is_graded() {
        format!("{name}@{d}")
    } else {
        name.to_string()
    }
}

fn dims_value(alg: &Algebra, dims: &BTreeMap<(u32, i32), usize>) -> Value {
    let m: serde_json::Map<String, Value> = dims.iter().map(|(b, n)| (block_label(alg, *b), json!(n))).collect();
    Value::Object(m)
}

fn completeness_value(c: &Completeness) -> Value {
    match c {
        Completeness::Exact => json!({ "kind": "exact" }),
        Completeness::ExactWithinCap { degree } => json!({ "kind": "exact_within_cap", "degree": degree }),
        Completeness::Truncated { homcap, degree } => json!({ "kind": "truncated", "homcap": homcap, "degree": degree }),
    }
}

fn betti_value(alg: &Algebra, r: &Resolution) -> Value {
    let stages: Vec<Value> = r
        .betti()
        .iter()
        .map(|gens| {
            let mut counts: BTreeMap<(u32, i32), usize> = BTreeMap::new();
            for g in gens {
                *counts.entry(*g).or_insert(0) += 1;
            }
            dims_value(alg, &counts)
        })
        .collect();
    Value::Array(stages)
}

fn resolve(ctx: &mut Ctx, file: &Path, module: Option<&str>, caps: Caps) -> CliResult<()> {
    ctx.report.caps = Some((caps.homcap, caps.degcap));
    let alg = ctx.algebra(file)?;
    let m = match module {
        Some(spec) => module_from_spec(ctx, &alg, spec)?,
        None => Representation::simple(&alg, 0, 0)?,
    };
    let r = Resolution::compute(&m, &caps)?;
    let pd = r.projective_dimension();
    if alg.is_graded() {
        let low = m.degree_range().map_or(0, |x| x.0);
        let linear = r.betti().iter().enumerate().all(|(i, g)| g.iter().all(|&(_, d)| d == low + i as i32));
        ctx.report.set("linear", linear);
    }
    ctx.report.set("module_dims", dims_value(&alg, m.dims()));
    ctx.report.set("betti", betti_value(&alg, &r));
    ctx.report.set("completeness", completeness_value(r.completeness()));
    ctx.report.set("projective_dimension", pd.label());
    ctx.report.set("length", json!(r.length()));
    ctx.report.set("minimal", r.is_minimal());
    ctx.report.set("complex", r.is_complex());
    ctx.report.set("notes", json!(r.notes()));
    ctx.report.note(format!("pd = {}", pd.label()));
    ctx.report.status = if !r.is_minimal() || !r.is_complex() {
        Status::Fail
    } else if r.completeness().is_complete() {
        Status::Pass
    } else {
        Status::Inconclusive
    };
    Ok(())
}

fn side_value(alg: &Algebra, side: &SideReport) -> Value {
    let q = alg.quiver();
    let simples: Vec<Value> = side
        .simples
        .iter()
        .map(|rec| {
            let transpose = match &rec.transpose {
                TrOutcome::Simple { vertex, degree } => json!({ "kind": "simple", "vertex": q.vertex_name(*vertex), "degree": degree }),
                TrOutcome::NonSimple(dims) => json!({ "kind": "not_simple", "layers": dims }),
                TrOutcome::NotApplicable => json!({ "kind": "not_applicable" }),
            };
            json!({
                "vertex": q.vertex_name(rec.vertex),
                "pd": rec.pd.label(),
                "ext_lambda_below_n": rec.ext_vanishing.iter().map(|(i, d)| json!([i, d])).collect::<Vec<_>>(),
                "transpose": transpose,
                "socle_of_transpose": rec.socle_vertices.iter().map(|v| q.vertex_name(*v)).collect::<Vec<_>>(),
                "contains_hn_simple": rec.contains_hn_simple,
                "periodicity": rec.periodicity.map(|(j, k)| json!([j, k])),
            })
        })
        .collect();
    json!({ "global_dimension": side.gldim.label(), "simples": simples })
}

fn certificate_value(alg: &Algebra, c: &Certificate) -> Value {
    let witness = match &c.verdict {
        Verdict::NotRegular(w) | Verdict::Inconclusive(w) => Some(w.clone()),
        _ => None,
    };
    json!({
        "verdict": c.verdict.label(),
        "n": c.n,
        "graded": c.graded,
        "witness": witness,
        "left": side_value(alg, &c.sides[0]),
        "right": side_value(alg, &c.sides[1]),
        "both_sides_checked": c.both_sides_checked,
        "notes": c.notes,
    })
}

fn certify(ctx: &mut Ctx, file: &Path, caps: Caps) -> CliResult<()> {
    ctx.report.caps = Some((caps.homcap, caps.degcap));
    let alg = ctx.algebra(file)?;
    let c = certify_as_regular(&alg, &caps)?;
    ctx.report.set("certificate", certificate_value(&alg, &c));
    if let Ok(p) = d_tr_permutation(&c) {
        let q = alg.quiver();
        let map: Vec<Value> = p
            .map
            .iter()
            .map(|((v, d), (w, e))| json!({ "from": q.vertex_name(*v), "from_degree": d, "to": q.vertex_name(*w), "to_degree": e }))
            .collect();
        let cycles: Vec<Vec<&str>> = p.cycles.iter().map(|c| c.iter().map(|v| q.vertex_name(*v)).collect()).collect();
        ctx.report.set("d_tr_permutation", json!({ "map": map, "cycles": cycles }));
    }
    let mut line = c.verdict.label().to_string();
    if let Some(n) = c.n {
        line.push_str(&format!(", n={n}"));
    }
    ctx.report.note(line);
    ctx.report.status = match c.verdict {
        Verdict::Regular { .. } | Verdict::Semisimple => Status::Pass,
        Verdict::NotRegular(_) => Status::Fail,
        Verdict::Inconclusive(_) => Status::Inconclusive,
    };
    Ok(())
}

fn extracted_value(e: &CliResult<Extracted>) -> Value {
    match e {
        Ok(x) => json!({ "presentation": format::write_presentation(&x.presentation) }),
        Err(err) => json!({ "error": err.to_string() }),
    }
}

fn yoneda(ctx: &mut Ctx, file: &Path, simples: &str, cap: usize, frobenius: bool) -> CliResult<()> {
    let alg = ctx.algebra(file)?;
    let caps = Caps::default();
    ctx.report.caps = Some((caps.homcap.max(cap + 1), caps.degcap));
    let mut t = Vec::new();
    for s in simples.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        t.push(parse_vertex_degree(&alg, s)?);
    }
    let t = SimpleSet::new(t)?;
    let y = yoneda_algebra(&alg, &t, cap, &caps)?;
    let dims = y.graded_dims();
    ctx.report.set("graded_dims", json!(dims));
    ctx.report.set("total_dim", y.sca.dim());
    ctx.report.set("certified", y.total_dim_certified);
    ctx.report.set("basis", json!(y.sca.labels()));
    ctx.report.set("extracted", extracted_value(&presentation_from_sca(&y.sca, None).map_err(CliError::from)));
    ctx.report.note(format!("graded dims {dims:?}"));
    let mut status = if y.total_dim_certified { Status::Pass } else { Status::Inconclusive };
    if frobenius {
        if y.total_dim_certified {
            let f = frobenius_test(&y.sca)?;
            ctx.report.set("frobenius", frobenius_value(&y.sca, &f));
            ctx.report.note(format!("frobenius = {}", f.frobenius));
            if !f.frobenius {
                status = Status::Fail;
            }
        } else {
            ctx.report.set("frobenius", json!({ "skipped": "the algebra is truncated at the cap" }));
        }
    }
    ctx.report.status = status;
    Ok(())
}

fn frobenius_value(a: &Sca, f: &asreg_core::sca::FrobeniusReport) -> Value {
    let names = a.vertex_names();
    json!({
        "selfinjective": f.selfinjective,
        "frobenius": f.frobenius,
        "nakayama": f.nakayama.as_ref().map(|v| v.iter().map(|i| names[*i as usize].clone()).collect::<Vec<_>>()),
        "non_projective_injectives": f.non_projective_injectives.iter().map(|i| names[*i as usize].clone()).collect::<Vec<_>>(),
    })
}

fn sca_summary(a: &Sca) -> Value {
    json!({
        "dim": a.dim(),
        "graded_dims": a.graded_dims(),
        "vertices": a.vertex_names(),
        "center_dim": a.center_dim(),
    })
}

fn with_ext(path: &Path, ext: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

/// Writes `<out>.sca` and, when the algebra is basic, `<out>.pres`.
fn emit_sca(ctx: &mut Ctx, a: &Sca, extracted: CliResult<Extracted>, out: &Path) -> CliResult<()> {
    let sca_path = with_ext(out, "sca");
    ctx.write(&sca_path, &format::write_sca(a))?;
    ctx.report.set("algebra", sca_summary(a));
    let mut files = vec![sca_path.display().to_string()];
    if let Ok(x) = &extracted {
        let p = with_ext(out, "pres");
        ctx.write(&p, &format::write_presentation(&x.presentation))?;
        files.push(p.display().to_string());
    }
    ctx.report.set("extracted", extracted_value(&extracted));
    ctx.report.set("written", json!(files));
    Ok(())
}

fn read_action(ctx: &mut Ctx, a: &Sca, path: &Path) -> CliResult<Mat> {
    let text = ctx.read(path)?;
    let k = *a.field();
    let n = a.dim();
    let mut cols: Vec<Option<SVec>> = vec![None; n];
    for (no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |m: String| CliError::Parse {
            path: path.display().to_string(),
            source: ParseError { line: no + 1, column: 1, message: m },
        };
        let (i, rest) = line.split_once(':').ok_or_else(|| bad("expected `i : c*j …`".into()))?;
        let i: usize = i.trim().parse().map_err(|_| bad(format!("bad index `{}`", i.trim())))?;
        if i >= n {
            return Err(bad(format!("index {i} out of range")));
        }
        let mut v: SVec = Vec::new();
        for w in rest.split_whitespace() {
            let (c, j) = w.split_once('*').ok_or_else(|| bad(format!("expected `c*j`, found `{w}`")))?;
            let c = format::parse_scalar(&k, c).ok_or_else(|| bad(format!("bad coefficient `{c}`")))?;
            let j: u32 = j.parse().map_err(|_| bad(format!("bad index `{j}`")))?;
            v = sv_add(&k, &v, &[(j, c)]);
        }
        cols[i] = Some(v);
    }
    let cols = cols
        .into_iter()
        .enumerate()
        .map(|(i, c)| c.ok_or_else(|| CliError::Input(format!("{}: no image for basis element {i}", path.display()))))
        .collect::<CliResult<Vec<_>>>()?;
    Ok(Mat::from_cols(n, cols))
}

fn construct(ctx: &mut Ctx, kind: &Construct) -> CliResult<()> {
    match kind {
        Construct::TrivialExt { file, out } => {
            let alg = ctx.algebra(file)?;
            let t = trivial_extension(&alg)?;
            let x = presentation_from_sca(&t, None).map_err(CliError::from);
            emit_sca(ctx, &t, x, out)?;
        }
        Construct::Skew { file, action, action_file, order, out } => {
            let a = ctx.sca(file)?;
            let g = match (action.as_deref(), action_file) {
                (Some("swap"), None) => kronecker_swap(&a)?,
                (Some(other), None) => return Err(CliError::Input(format!("unknown action `{other}`"))),
                (None, Some(p)) => read_action(ctx, &a, p)?,
                _ => return Err(CliError::Input("give either --action or --action-file".into())),
            };
            let s = skew_group_cyclic(&a, &g, *order)?;
            let zero = s.degree_zero_part()?;
            ctx.report.set(
                "degree_zero",
                json!({ "dim": zero.dim(), "center_dim": zero.center_dim(), "simple_matrix_size": zero.split_simple_size()? }),
            );
            let x = presentation_from_sca(&s, None).map_err(CliError::from);
            emit_sca(ctx, &s, x, out)?;
        }
        Construct::Truncate { file, idempotent, out } => {
            let a = ctx.sca(file)?;
            let k = *a.field();
            let mut e: SVec = Vec::new();
            for name in idempotent.split('+').map(str::trim) {
                let i = a
                    .vertex_names()
                    .iter()
                    .position(|v| v == name)
                    .ok_or_else(|| CliError::Input(format!("no idempotent named `{name}`")))?;
                e = sv_add(&k, &e, &a.idempotents()[i]);
            }
            let c = idempotent_truncation(&a, &e)?;
            let x = presentation_from_sca(&c, None).map_err(CliError::from);
            emit_sca(ctx, &c, x, out)?;
        }
        Construct::Dual { file, mode, degcap, out } => {
            let p = ctx.presentation(file)?;
            let mode = match mode {
                ModeArg::Finite => Mode::Finite,
                ModeArg::Graded => Mode::Graded { cap: *degcap },
            };
            let d = quadratic_dual(&p, mode)?;
            let path = with_ext(out, "pres");
            ctx.write(&path, &format::write_presentation(&d))?;
            ctx.report.set("presentation", format::write_presentation(&d));
            ctx.report.set("written", json!([path.display().to_string()]));
        }
        Construct::Auslander { file, modules, out } => {
            let alg = ctx.algebra(file)?;
            let mut list = Vec::new();
            for m in modules {
                let (name, spec) =
                    m.split_once('=').ok_or_else(|| CliError::Input(format!("expected `name=spec`, found `{m}`")))?;
                list.push((name.to_string(), module_from_spec(ctx, &alg, spec)?));
            }
            let (a, x) = auslander_algebra(&alg, &list)?;
            ctx.report.set("frobenius", frobenius_value(&a, &frobenius_test(&a)?));
            emit_sca(ctx, &a, Ok(x), out)?;
        }
    }
    Ok(())
}

fn hilbert(ctx: &mut Ctx, file: &Path, upto: u32, classify: bool) -> CliResult<()> {
    let alg = ctx.algebra(file)?;
    let h = alg.hilbert(upto)?;
    ctx.report.set("hilbert", json!(h));
    ctx.report.set("finite_dimensional", alg.table().finite_dimensional().as_str());
    ctx.report.note(format!("H = {h:?}"));
    if classify {
        let g = classify_growth(&h)?;
        ctx.report.set("growth", g.label());
        ctx.report.set("growth_method", format!("heuristic over degrees 0..={upto}"));
        ctx.report.note(format!("growth (heuristic): {}", g.label()));
        if g == Growth::Inconclusive {
            ctx.report.status = Status::Inconclusive;
        }
    }
    Ok(())
}
