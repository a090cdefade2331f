//! Command-line front end.
//!
//! Every command prints human-readable text by default and one JSON record
//! per line with `--machine`. Exit codes: 0 on success, 2 for input errors
//! (unreadable or invalid spec, parse failures, off-variety points), 3 when a
//! quotient enumeration would exceed the size ceiling.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::cache::{rational_points, PointCache, CACHE_DIR_ENV};
use crate::coset::{Character, CosetEngine, CosetUnion};
use crate::error::{Error, Result};
use crate::fg::{Coords, Decomposition, GammaSpec, SampleGrid, DEFAULT_AUDIT_BOUND};
use crate::formula::{self, Evaluator, TriBool};
use crate::group::{Backend, Point};
use crate::ml::{self, MlDecomposition, MlPair, Suggestion, Verdict};
use crate::num::{parse_rational, Rational};
use crate::specfile::{GroupSpecFile, OutputMode, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CEILING: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "mlcoset",
    version,
    about = "Exact computations in finitely generated subgroups of elliptic curves and the circle",
    after_help = "Spec files are JSON, e.g. {\"backend\":{\"kind\":\"curve\",\"a\":\"0\",\"b\":\"-2\"},\"generators\":[[\"3\",\"5\"]],\"rank\":1}"
)]
pub struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Group spec file (JSON)
    #[arg(long, global = true, value_name = "PATH")]
    spec: Option<PathBuf>,
    /// Coefficient bound B for searches in Γ
    #[arg(long, global = true, default_value_t = 16)]
    bound: u64,
    /// Naive height bound for point enumeration
    #[arg(long, global = true, default_value_t = 100)]
    height: u64,
    /// Number of histogram bins
    #[arg(long, global = true, default_value_t = 10)]
    bins: usize,
    /// Emit one JSON record per line
    #[arg(long, global = true)]
    machine: bool,
    /// Directory for the point-enumeration cache
    #[arg(long, global = true, value_name = "PATH", env = CACHE_DIR_ENV)]
    cache_dir: Option<PathBuf>,
    /// Ignore the point-enumeration cache
    #[arg(long, global = true)]
    no_cache: bool,
    /// Largest quotient enumeration allowed
    #[arg(long, global = true, default_value_t = 1_000_000)]
    ceiling: u64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Discriminant, real components, torsion and generator audit
    CurveInfo,
    /// Rational points of bounded naive height
    Points,
    /// Group law and decomposition in Γ
    #[command(subcommand)]
    Point(PointCmd),
    /// Sets D_{k,e} and unions of cosets of (lΓ)^n
    #[command(subcommand)]
    Coset(CosetCmd),
    /// Polynomial equations on Γ^n and their coset decompositions
    #[command(subcommand)]
    Ml(MlCmd),
    /// Evaluate a formula with exists-gamma blocks
    Eval(EvalArgs),
    /// Histogram of x-coordinates of points of Γ
    Density(DensityArgs),
    /// Bounded evidence for the density, quotient and purity axioms
    Axioms(AxiomsArgs),
}

#[derive(Debug, Subcommand)]
enum PointCmd {
    /// P + Q
    Add { p: String, q: String },
    /// k·P
    Mul {
        #[arg(allow_negative_numbers = true)]
        k: i64,
        p: String,
    },
    /// Coordinates of P in Γ within the coefficient box
    Decompose { p: String },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SetOp {
    Union,
    Intersect,
    Difference,
    Complement,
}

#[derive(Debug, Subcommand)]
enum CosetCmd {
    /// D_{k,e} = χ_k^{-1}(eΓ) ∩ Γ^n
    Dke {
        /// Character, e.g. 1,-1
        #[arg(long, allow_hyphen_values = true)]
        k: String,
        #[arg(long)]
        e: u64,
    },
    /// Boolean combination of sets D_{k,e}, each given as K:E (e.g. 1,-1:3)
    Combine {
        #[arg(long, value_enum)]
        op: SetOp,
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: Option<String>,
    },
    /// Whether a tuple of points lies in D_{k,e}
    Member {
        #[arg(long, allow_hyphen_values = true)]
        k: String,
        #[arg(long)]
        e: u64,
        #[arg(required = true)]
        points: Vec<String>,
    },
    /// Image of g + ker χ_k modulo lΓ
    Kernel {
        #[arg(long, allow_hyphen_values = true)]
        k: String,
        #[arg(long)]
        modulus: u64,
        /// Base tuple, points separated by ';', each F1,F2,..[|T1,..]
        #[arg(long, allow_hyphen_values = true)]
        base: Option<String>,
    },
}

#[derive(Debug, Args)]
struct MlArgs {
    /// Polynomial in x1..x(2n), S-expression syntax
    #[arg(long, allow_hyphen_values = true)]
    poly: String,
    /// Number of points in a tuple
    #[arg(long, default_value_t = 1)]
    n: usize,
}

#[derive(Debug, Subcommand)]
enum MlCmd {
    /// All tuples of the coefficient box on which p vanishes
    Solve(MlArgs),
    /// Check a claimed decomposition over the coefficient box
    Verify {
        #[command(flatten)]
        args: MlArgs,
        /// Pair K or K@BASE (BASE as for `coset kernel --base`); repeatable
        #[arg(long = "pair", allow_hyphen_values = true)]
        pairs: Vec<String>,
        /// Decomposition as JSON: {"pairs":[{"base":[{"free":[0],"tors":[]}],"k":[1]}]}
        #[arg(long)]
        decomposition: Option<String>,
    },
    /// Search for a decomposition that verifies
    Suggest(MlArgs),
}

#[derive(Debug, Args)]
struct EvalArgs {
    /// Formula text
    #[arg(long, conflicts_with = "formula_file")]
    formula: Option<String>,
    /// File holding the formula
    #[arg(long, value_name = "PATH")]
    formula_file: Option<PathBuf>,
    /// Values for x1,x2,..; comma separated; repeat for several queries
    #[arg(long = "at", allow_hyphen_values = true)]
    at: Vec<String>,
}

#[derive(Debug, Args)]
struct DensityArgs {
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    lo: String,
    #[arg(long, default_value = "10", allow_hyphen_values = true)]
    hi: String,
    /// Restrict to D_{k,e} given as K:E (arity 1)
    #[arg(long, allow_hyphen_values = true)]
    coset: Option<String>,
}

#[derive(Debug, Args)]
struct AxiomsArgs {
    #[arg(long, default_value_t = 3)]
    n_max: u64,
    #[arg(long, default_value = "-2", allow_hyphen_values = true)]
    lo: String,
    #[arg(long, default_value = "10", allow_hyphen_values = true)]
    hi: String,
}

/// Output of one command in both renderings.
#[derive(Debug, Default)]
struct Output {
    lines: Vec<String>,
    records: Vec<Value>,
}

impl Output {
    fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    fn record(&mut self, v: Value) {
        self.records.push(v);
    }
}

struct Context {
    config: RunConfig,
    spec: Option<PathBuf>,
    cache: Option<PointCache>,
    bins: usize,
}

impl Context {
    fn spec_file(&self) -> Result<GroupSpecFile> {
        let path = self
            .spec
            .as_ref()
            .ok_or_else(|| Error::Input("--spec is required".into()))?;
        GroupSpecFile::read(path)
    }

    fn gamma(&self) -> Result<GammaSpec> {
        self.spec_file()?.to_gamma()
    }

    fn engine<'g>(&self, gamma: &'g GammaSpec) -> CosetEngine<'g> {
        CosetEngine::with_ceiling(gamma, self.config.ceiling)
    }
}

/// Parses arguments and runs one command, writing to `out` and `err`.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    return EXIT_OK;
                }
                _ => EXIT_INPUT,
            };
            let _ = write!(err, "{}", e.render());
            return code;
        }
    };
    let g = &cli.global;
    let config = RunConfig {
        coeff_bound: g.bound,
        height_bound: g.height,
        ceiling: g.ceiling,
        output: if g.machine {
            OutputMode::Machine
        } else {
            OutputMode::Human
        },
    };
    let ctx = Context {
        spec: g.spec.clone(),
        cache: if g.no_cache {
            None
        } else {
            g.cache_dir.clone().map(PointCache::new)
        },
        bins: g.bins,
        config,
    };
    let result = ctx
        .config
        .validate()
        .and_then(|_| dispatch(&ctx, &cli.command));
    match result {
        Ok(o) => {
            match ctx.config.output {
                OutputMode::Human => {
                    for l in &o.lines {
                        let _ = writeln!(out, "{l}");
                    }
                }
                OutputMode::Machine => {
                    for r in &o.records {
                        let _ = writeln!(out, "{r}");
                    }
                }
            }
            EXIT_OK
        }
        Err(e) => {
            let code = match e {
                Error::Ceiling { .. } => EXIT_CEILING,
                _ => EXIT_INPUT,
            };
            match ctx.config.output {
                OutputMode::Human => {
                    let _ = writeln!(err, "error: {e}");
                }
                OutputMode::Machine => {
                    let _ = writeln!(err, "{}", error_record(&e));
                }
            }
            code
        }
    }
}

fn error_record(e: &Error) -> Value {
    let mut v = json!({ "error": e.to_string() });
    if let Error::Ceiling { attempted, ceiling } = e {
        v["attempted"] = json!(attempted.to_string());
        v["ceiling"] = json!(ceiling);
    }
    v
}

/// Entry point for the binary.
pub fn main() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

fn dispatch(ctx: &Context, cmd: &Command) -> Result<Output> {
    match cmd {
        Command::CurveInfo => curve_info(ctx),
        Command::Points => points(ctx),
        Command::Point(c) => point(ctx, c),
        Command::Coset(c) => coset(ctx, c),
        Command::Ml(c) => ml_cmd(ctx, c),
        Command::Eval(a) => eval(ctx, a),
        Command::Density(a) => density(ctx, a),
        Command::Axioms(a) => axioms(ctx, a),
    }
}

fn describe_backend(b: &Backend) -> String {
    match b {
        Backend::Curve { a, b } => format!("curve y^2 = x^3 + ({a})x + ({b})"),
        Backend::Circle => "circle x^2 + y^2 = 1".to_string(),
    }
}

fn points_json(ps: &[Point]) -> Value {
    json!(ps.iter().map(Point::to_string).collect::<Vec<_>>())
}

fn coords_json(cs: &[Coords]) -> Value {
    serde_json::to_value(cs).expect("coords serialize")
}

fn curve_info(ctx: &Context) -> Result<Output> {
    let spec = ctx.spec_file()?;
    let backend = spec.backend()?;
    let gamma = spec.to_gamma()?;
    let torsion = backend.torsion_subgroup();
    let components = backend.real_components();
    let term = backend.discriminant_term();
    let disc = term
        .as_ref()
        .map(|t| Rational::from_integer((-16).into()) * t);
    let mut o = Output::default();
    o.line(format!("backend: {}", describe_backend(&backend)));
    if let Some(label) = &spec.label {
        o.line(format!("label: {label}"));
    }
    if let (Some(d), Some(t)) = (&disc, &term) {
        o.line(format!("discriminant: {d} (4a^3+27b^2 = {t})"));
    }
    o.line(format!(
        "components: {components}, torsion: {}",
        torsion.describe()
    ));
    let gens: Vec<String> = gamma
        .free_generators()
        .iter()
        .map(Point::to_string)
        .collect();
    let tgens: Vec<String> = gamma
        .torsion()
        .generators
        .iter()
        .map(Point::to_string)
        .collect();
    o.line(format!(
        "gamma: rank {}, torsion {}, free generators [{}], torsion generators [{}]",
        gamma.rank(),
        gamma.torsion().describe(),
        gens.join(", "),
        tgens.join(", ")
    ));
    o.line(format!(
        "audit: free generators independent modulo torsion for coefficients up to {DEFAULT_AUDIT_BOUND}"
    ));
    o.record(json!({
        "command": "curve-info",
        "backend": backend.fingerprint(),
        "label": spec.label,
        "discriminant": disc.map(|d| d.to_string()),
        "discriminant_term": term.map(|t| t.to_string()),
        "components": components,
        "torsion": torsion.describe(),
        "torsion_order": torsion.order(),
        "torsion_points": points_json(&backend.torsion_points().into_iter().collect::<Vec<_>>()),
        "rank": gamma.rank(),
        "gamma_torsion": gamma.torsion().describe(),
        "free_generators": gens,
        "torsion_generators": tgens,
        "audit_bound": DEFAULT_AUDIT_BOUND,
        "audit": "independent",
    }));
    Ok(o)
}

fn points(ctx: &Context) -> Result<Output> {
    let backend = ctx.spec_file()?.backend()?;
    let h = ctx.config.height_bound;
    let pts = rational_points(ctx.cache.as_ref(), &backend, h);
    let mut o = Output::default();
    o.line(format!("rational points of height <= {h}: {}", pts.len()));
    for p in &pts {
        o.line(format!("  {p}"));
    }
    o.record(json!({
        "command": "points",
        "height": h,
        "count": pts.len(),
        "points": points_json(&pts),
    }));
    Ok(o)
}

fn parse_point(backend: &Backend, s: &str) -> Result<Point> {
    let p = backend.normalize(s.parse::<Point>()?);
    backend.check_point(&p)?;
    Ok(p)
}

fn point(ctx: &Context, cmd: &PointCmd) -> Result<Output> {
    let mut o = Output::default();
    match cmd {
        PointCmd::Add { p, q } => {
            let backend = ctx.spec_file()?.backend()?;
            let r = backend.add(&parse_point(&backend, p)?, &parse_point(&backend, q)?)?;
            o.line(r.to_string());
            o.record(json!({"command": "point-add", "result": r.to_string()}));
        }
        PointCmd::Mul { k, p } => {
            let backend = ctx.spec_file()?.backend()?;
            let r = backend.scalar_mul(*k, &parse_point(&backend, p)?)?;
            o.line(r.to_string());
            o.record(json!({"command": "point-mul", "k": k, "result": r.to_string()}));
        }
        PointCmd::Decompose { p } => {
            let gamma = ctx.gamma()?;
            let pt = parse_point(gamma.backend(), p)?;
            let bound = ctx.config.coeff_bound;
            let d = gamma.decompose(&pt, bound)?;
            o.line(d.to_string());
            let mut rec =
                json!({"command": "point-decompose", "point": pt.to_string(), "bound": bound});
            match &d {
                Decomposition::Found(c) => {
                    rec["found"] = json!(true);
                    rec["coords"] = json!(c);
                }
                Decomposition::Undecided { .. } => rec["found"] = json!(false),
            }
            o.record(rec);
        }
    }
    Ok(o)
}

/// `K:E` as used by `coset combine` and `density --coset`.
fn parse_dke_operand(s: &str) -> Result<(Character, u64)> {
    let (k, e) = s
        .rsplit_once(':')
        .ok_or_else(|| Error::Input(format!("expected K:E, got {s:?}")))?;
    let e: u64 = e
        .trim()
        .parse()
        .map_err(|_| Error::Input(format!("bad modulus in {s:?}")))?;
    Ok((k.parse()?, e))
}

/// `F1,F2,..[|T1,..]` per point, points separated by `;`.
fn parse_base(gamma: &GammaSpec, s: &str) -> Result<Vec<Coords>> {
    s.split(';')
        .map(|pt| {
            let (f, t) = pt.split_once('|').unwrap_or((pt, ""));
            let ints = |x: &str| -> Result<Vec<i64>> {
                x.split(',')
                    .map(str::trim)
                    .filter(|v| !v.is_empty())
                    .map(|v| {
                        v.parse()
                            .map_err(|_| Error::Input(format!("bad coefficient {v:?}")))
                    })
                    .collect()
            };
            let free = ints(f)?;
            let tors = ints(t)?
                .into_iter()
                .map(|v| u64::try_from(v).map_err(|_| Error::Input(format!("bad residue {v}"))))
                .collect::<Result<Vec<_>>>()?;
            let c = Coords { free, tors };
            gamma.check_coords(&c)?;
            Ok(c)
        })
        .collect()
}

fn union_record(command: &str, u: &CosetUnion) -> Value {
    let residues: Vec<Vec<Vec<u64>>> = u
        .tuples()
        .map(|t| t.iter().map(|r| r.to_vec()).collect())
        .collect();
    json!({
        "command": command,
        "n": u.arity(),
        "modulus": u.modulus(),
        "quotient": u.quotient().describe(),
        "size": u.len(),
        "residues": residues,
        "coarsened": u.coarsened(),
        "text": u.to_string(),
    })
}

fn coset(ctx: &Context, cmd: &CosetCmd) -> Result<Output> {
    let gamma = ctx.gamma()?;
    let eng = ctx.engine(&gamma);
    let mut o = Output::default();
    match cmd {
        CosetCmd::Dke { k, e } => {
            let u = eng.dke(&k.parse()?, *e)?;
            o.line(u.to_string());
            o.record(union_record("coset-dke", &u));
        }
        CosetCmd::Combine { op, a, b } => {
            let (ka, ea) = parse_dke_operand(a)?;
            let ua = eng.dke(&ka, ea)?;
            let u = match (op, b) {
                (SetOp::Complement, None) => eng.complement(&ua)?,
                (SetOp::Complement, Some(_)) => {
                    return Err(Error::Input("complement takes one operand".into()))
                }
                (_, None) => return Err(Error::Input("this operation takes two operands".into())),
                (op, Some(b)) => {
                    let (kb, eb) = parse_dke_operand(b)?;
                    let ub = eng.dke(&kb, eb)?;
                    match op {
                        SetOp::Union => eng.union(&ua, &ub)?,
                        SetOp::Intersect => eng.intersect(&ua, &ub)?,
                        _ => eng.difference(&ua, &ub)?,
                    }
                }
            };
            o.line(u.to_string());
            o.record(union_record("coset-combine", &u));
        }
        CosetCmd::Member { k, e, points } => {
            let u = eng.dke(&k.parse()?, *e)?;
            let tuple = points
                .iter()
                .map(|p| parse_point(gamma.backend(), p))
                .collect::<Result<Vec<_>>>()?;
            let m = eng.member(&u, &tuple, ctx.config.coeff_bound)?;
            o.line(m.to_string());
            o.record(json!({
                "command": "coset-member",
                "points": points_json(&tuple),
                "result": m.to_string(),
                "bound": ctx.config.coeff_bound,
            }));
        }
        CosetCmd::Kernel { k, modulus, base } => {
            let k: Character = k.parse()?;
            let base = match base {
                Some(s) => parse_base(&gamma, s)?,
                None => vec![gamma.zero_coords(); k.arity()],
            };
            let u = eng.from_kernel_cosets(&[(base, k)], *modulus)?;
            o.line(u.to_string());
            if u.coarsened() {
                o.line("note: the kernel has infinite index; this is its image modulo the quotient, a coarsening");
            }
            o.record(union_record("coset-kernel", &u));
        }
    }
    Ok(o)
}

fn decomposition_from_args(
    gamma: &GammaSpec,
    n: usize,
    pairs: &[String],
    json_text: &Option<String>,
) -> Result<MlDecomposition> {
    let mut d = match json_text {
        Some(t) => MlDecomposition::from_json(t)?,
        None => MlDecomposition::default(),
    };
    for p in pairs {
        let (k, base) = match p.split_once('@') {
            Some((k, b)) => (k.parse::<Character>()?, parse_base(gamma, b)?),
            None => (p.parse::<Character>()?, vec![gamma.zero_coords(); n]),
        };
        d.pairs.push(MlPair { base, k });
    }
    Ok(d)
}

fn tuple_line(t: &ml::Tuple) -> String {
    let cs: Vec<String> = t.coords.iter().map(Coords::to_string).collect();
    format!("{t}  [{}]", cs.join("; "))
}

fn tuple_json(t: &ml::Tuple) -> Value {
    json!({"points": points_json(&t.points), "coords": coords_json(&t.coords)})
}

fn verdict_json(v: &Verdict) -> Value {
    match v {
        Verdict::Verified { bound } => json!({"verdict": "verified", "bound": bound}),
        Verdict::Counterexample { tuple, direction } => json!({
            "verdict": "counterexample",
            "direction": direction.to_string(),
            "tuple": tuple_json(tuple),
        }),
        Verdict::Inconclusive { reason } => json!({"verdict": "inconclusive", "reason": reason}),
    }
}

fn ml_cmd(ctx: &Context, cmd: &MlCmd) -> Result<Output> {
    let gamma = ctx.gamma()?;
    let bound = ctx.config.coeff_bound;
    let args = match cmd {
        MlCmd::Solve(a) | MlCmd::Suggest(a) | MlCmd::Verify { args: a, .. } => a,
    };
    let p = formula::parse_poly_text(&args.poly, 2 * args.n)?;
    let mut o = Output::default();
    match cmd {
        MlCmd::Solve(_) => {
            let s = ml::solutions_bounded(&gamma, &p, args.n, bound)?;
            o.line(format!("solutions(bound={bound}): {}", s.tuples.len()));
            for t in &s.tuples {
                o.line(format!("  {}", tuple_line(t)));
            }
            o.line(format!(
                "skipped: {} (identity in a slot whose coordinates p uses)",
                s.skipped.len()
            ));
            o.record(json!({
                "command": "ml-solve",
                "poly": p.to_sexpr(),
                "n": args.n,
                "bound": bound,
                "solutions": s.tuples.iter().map(tuple_json).collect::<Vec<_>>(),
                "skipped": s.skipped.len(),
            }));
        }
        MlCmd::Verify {
            pairs,
            decomposition,
            ..
        } => {
            let d = decomposition_from_args(&gamma, args.n, pairs, decomposition)?;
            let v = ml::verify_decomposition(&gamma, &p, args.n, &d, bound)?;
            o.line(v.to_string());
            let mut rec = verdict_json(&v);
            rec["command"] = json!("ml-verify");
            rec["decomposition"] = serde_json::to_value(&d).expect("decomposition serializes");
            o.record(rec);
        }
        MlCmd::Suggest(_) => {
            let s = ml::suggest_decomposition(&gamma, &p, args.n, bound)?;
            match &s {
                Suggestion::Found {
                    decomposition,
                    verdict,
                } => {
                    if decomposition.pairs.is_empty() {
                        o.line("decomposition: empty");
                    }
                    for pair in &decomposition.pairs {
                        let base: Vec<String> = pair.base.iter().map(Coords::to_string).collect();
                        o.line(format!("coset: base [{}] k={}", base.join("; "), pair.k));
                    }
                    o.line(verdict.to_string());
                    let mut rec = verdict_json(verdict);
                    rec["command"] = json!("ml-suggest");
                    rec["decomposition"] =
                        serde_json::to_value(decomposition).expect("decomposition serializes");
                    o.record(rec);
                }
                Suggestion::Inconclusive {
                    reason,
                    unexplained,
                } => {
                    o.line(format!("inconclusive: {reason}"));
                    for t in unexplained {
                        o.line(format!("  {}", tuple_line(t)));
                    }
                    o.record(json!({
                        "command": "ml-suggest",
                        "verdict": "inconclusive",
                        "reason": reason,
                        "unexplained": unexplained.iter().map(tuple_json).collect::<Vec<_>>(),
                    }));
                }
            }
        }
    }
    Ok(o)
}

fn parse_assignment(s: &str) -> Result<Vec<Rational>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(parse_rational).collect()
}

fn eval(ctx: &Context, a: &EvalArgs) -> Result<Output> {
    let gamma = ctx.gamma()?;
    let text = match (&a.formula, &a.formula_file) {
        (Some(t), _) => t.clone(),
        (None, Some(path)) => std::fs::read_to_string(path)
            .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?,
        (None, None) => return Err(Error::Input("give --formula or --formula-file".into())),
    };
    let f = formula::parse(&text)?;
    let queries: Vec<String> = if a.at.is_empty() {
        vec![String::new()]
    } else {
        a.at.clone()
    };
    let evaluator = Evaluator::new(&gamma, ctx.config.coeff_bound);
    let mut o = Output::default();
    for q in &queries {
        let x = parse_assignment(q)?;
        let t = evaluator.eval_formula(&f, &x)?;
        o.line(t.to_string());
        let mut rec = json!({
            "command": "eval",
            "formula": f.to_string(),
            "x": x.iter().map(Rational::to_string).collect::<Vec<_>>(),
            "result": t.label(),
            "bound": ctx.config.coeff_bound,
        });
        if let TriBool::True { witnesses } = &t {
            rec["witnesses"] = json!(witnesses
                .iter()
                .map(
                    |w| json!({"points": points_json(&w.points), "coords": coords_json(&w.coords)})
                )
                .collect::<Vec<_>>());
        }
        o.record(rec);
    }
    Ok(o)
}

fn density(ctx: &Context, a: &DensityArgs) -> Result<Output> {
    let gamma = ctx.gamma()?;
    let lo = parse_rational(&a.lo)?;
    let hi = parse_rational(&a.hi)?;
    let (h, b) = (ctx.config.height_bound, ctx.config.coeff_bound);
    let hist = match &a.coset {
        Some(s) => {
            let (k, e) = parse_dke_operand(s)?;
            let eng = ctx.engine(&gamma);
            let u = eng.dke(&k, e)?;
            eng.density_sample(&u, &lo, &hi, h, ctx.bins, b)?
        }
        None => gamma.projection_density(&lo, &hi, h, ctx.bins, b)?,
    };
    let mut o = Output::default();
    o.line(format!(
        "x-projection histogram on [{lo}, {hi}], height <= {h}, coefficient bound {b}"
    ));
    for (i, c) in hist.counts.iter().enumerate() {
        let close = if i + 1 == hist.counts.len() { "]" } else { ")" };
        o.line(format!(
            "[{}, {}{close}: {c}",
            hist.edges[i],
            hist.edges[i + 1]
        ));
        o.record(json!({
            "command": "density",
            "bin": i,
            "lo": hist.edges[i],
            "hi": hist.edges[i + 1],
            "count": c,
        }));
    }
    o.line(format!("total: {}", hist.total()));
    Ok(o)
}

fn axioms(ctx: &Context, a: &AxiomsArgs) -> Result<Output> {
    let gamma = ctx.gamma()?;
    let grid = SampleGrid {
        lo: parse_rational(&a.lo)?,
        hi: parse_rational(&a.hi)?,
        bins: ctx.bins,
    };
    let h = ctx.config.height_bound;
    let pts = rational_points(ctx.cache.as_ref(), gamma.backend(), h);
    let report = gamma.check_axioms_with_points(a.n_max, h, &pts, &grid, ctx.config.coeff_bound)?;
    let d = &report.density;
    let mut o = Output::default();
    o.line(format!(
        "density (bounded evidence): {} of {} cells of the identity component hit, coverage {}",
        d.cells_hit, d.cells_in_component, d.coverage
    ));
    if d.finite_group {
        o.line("density flag: gamma is finite, so it is not dense");
    } else if d.low_coverage {
        o.line("density flag: low coverage at these bounds");
    }
    for row in &report.rows {
        o.line(format!(
            "n={}: |gamma/{}gamma| = {} ({}); purity (bounded evidence): {} checked, {} violations",
            row.n,
            row.n,
            row.quotient_size,
            row.quotient,
            row.purity_checked,
            row.purity_violations.len()
        ));
        for v in &row.purity_violations {
            o.line(format!(
                "  violation: {}*{} has coordinates {} in gamma but {} is not in gamma within the box",
                v.n, v.point, v.multiple_coords, v.point
            ));
        }
    }
    o.line(format!("mordell-lang conditions: {}", report.ml_conditions));
    let mut rec = serde_json::to_value(&report).expect("report serializes");
    rec["command"] = json!("axioms");
    rec["height"] = json!(h);
    rec["bound"] = json!(ctx.config.coeff_bound);
    o.record(rec);
    Ok(o)
}
