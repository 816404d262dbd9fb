mod eval;
mod parse;
mod render;

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use eops::algebra::{EElement, Ring};
use eops::cache::MemoCache;
use eops::checks::{CheckContext, CheckError, Registry};
use eops::dl::{self, DlOp, Formal, QSide};
use eops::free::{FreeAlgebra, FreeGen, Presentation};
use eops::oracle::coinvariant_dims;
use eops::semiring::display_mono;
use eops::sharp::SharpOptions;
use eops::{Linear, Prime, Scalar};
use serde_json::{json, Value as Json};
use thiserror::Error;

use eval::{sphere_presentation, Env, EvalError, Value};
use parse::{parse, Expr, ParseError};
use render::{tensor_terms, tensor_text, Output};

/// Largest `--max-degree` accepted without `--allow-high-degree`.
const DEGREE_CAP: u32 = 64;

#[derive(Parser, Debug)]
#[command(name = "eops", version, about = "E-operations, Dyer-Lashof operations and the homology of symmetric groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// The prime; there is no default.
    #[arg(long)]
    p: u32,
    /// Degree bound for inputs, intermediate results and enumerations.
    #[arg(long, default_value_t = 16)]
    max_degree: u32,
    /// Permit --max-degree above 64.
    #[arg(long)]
    allow_high_degree: bool,
    /// Permit ♯-products at p >= 5 (input degree capped at 8).
    #[arg(long)]
    allow_large_primes: bool,
    /// Print one JSON object instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum RingArg {
    #[value(name = "E")]
    E,
    #[value(name = "Ehat")]
    Ehat,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate an expression and print its normal form.
    Reduce {
        #[command(flatten)]
        common: Common,
        expr: String,
    },
    /// The ∘-product of two expressions.
    Circ {
        #[command(flatten)]
        common: Common,
        left: String,
        right: String,
    },
    /// The ·-product of two expressions.
    Dot {
        #[command(flatten)]
        common: Common,
        left: String,
        right: String,
    },
    /// The ♯-product of two semiring expressions.
    Sharp {
        #[command(flatten)]
        common: Common,
        left: String,
        right: String,
    },
    /// The coproduct.
    Psi {
        #[command(flatten)]
        common: Common,
        expr: String,
    },
    /// The counit.
    Counit {
        #[command(flatten)]
        common: Common,
        expr: String,
    },
    /// The dual Steenrod operation P^k_*.
    Steenrod {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        k: u32,
        expr: String,
    },
    /// The homology Bockstein (Sq^1_* at p = 2).
    Bockstein {
        #[command(flatten)]
        common: Common,
        expr: String,
    },
    /// Apply a Dyer-Lashof word such as "Q3 bQ1" (rightmost letter first), computed through E-operations.
    DlToE {
        #[command(flatten)]
        common: Common,
        word: String,
        /// The element acted on; defaults to the unit [1].
        #[arg(long, default_value = "[1]")]
        on: String,
        /// Print the formal E-expansion of the leftmost letter instead of its value.
        #[arg(long)]
        formal: bool,
    },
    /// Expand E_J as a formal sum of Dyer-Lashof operations on E_{tail J}.
    EToDl {
        #[command(flatten)]
        common: Common,
        expr: String,
    },
    /// List the allowable basis of a ring in one length.
    Basis {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "E")]
        ring: RingArg,
        #[arg(long)]
        length: usize,
    },
    /// Poincaré series of the homology of a free E-infinity space.
    FreeHomology {
        #[command(flatten)]
        common: Common,
        /// A presentation in JSON.
        #[arg(long, conflicts_with = "spheres")]
        input: Option<PathBuf>,
        /// A wedge of spheres, e.g. "1,2".
        #[arg(long, value_delimiter = ',')]
        spheres: Option<Vec<u32>>,
        /// Report H_*(QZ) instead.
        #[arg(long)]
        qz: bool,
        /// Also list the polynomial generators.
        #[arg(long)]
        generators: bool,
    },
    /// Independent oracles.
    Oracle {
        #[command(subcommand)]
        which: OracleCommand,
    },
    /// Run a named verification; exit status 2 on failure.
    Verify {
        #[command(flatten)]
        common: Common,
        name: Option<String>,
        /// List the available checks.
        #[arg(long)]
        list: bool,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

#[derive(Subcommand, Debug)]
enum OracleCommand {
    /// Dimensions of the GL_n-coinvariants of H_*(V_n).
    Coinvariants {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n: usize,
        /// One "degree dimension" row per line.
        #[arg(long)]
        table: bool,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot parse {text:?}: {source}\n  {text}\n  {caret}^")]
    Parse { text: String, caret: String, source: Box<ParseError> },
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("{0}")]
    Compute(String),
}

impl From<CheckError> for CliError {
    fn from(e: CheckError) -> Self {
        CliError::Usage(e.to_string())
    }
}

/// How a successful run ends.
#[derive(Debug, PartialEq, Eq)]
enum Status {
    Ok,
    VerificationFailed,
}

struct Session {
    common: Common,
    p: Prime,
}

impl Session {
    fn new(common: &Common) -> Result<Self, CliError> {
        let p = Prime::new(common.p).map_err(|e| CliError::Usage(format!("--p: {e}")))?;
        if common.max_degree > DEGREE_CAP && !common.allow_high_degree {
            return Err(CliError::Usage(format!(
                "--max-degree {} is above {DEGREE_CAP}; pass --allow-high-degree to proceed",
                common.max_degree
            )));
        }
        Ok(Session { common: common.clone(), p })
    }

    fn parse(&self, text: &str) -> Result<Expr, CliError> {
        parse(text, self.p).map_err(|source| CliError::Parse {
            text: text.to_string(),
            caret: " ".repeat(text[..source.offset.min(text.len())].chars().count()),
            source: Box::new(source),
        })
    }

    /// Parses all inputs and builds one environment covering every `z[d]` they mention.
    fn env_for(&self, texts: &[&str]) -> Result<(Env, Vec<Expr>), CliError> {
        let exprs = texts.iter().map(|t| self.parse(t)).collect::<Result<Vec<_>, _>>()?;
        let dims: Vec<u32> =
            exprs.iter().flat_map(|e| e.classes()).collect::<std::collections::BTreeSet<_>>().into_iter().collect();
        let options = SharpOptions { allow_large_primes: self.common.allow_large_primes, ..SharpOptions::default() };
        let env = Env::new(self.p, self.common.max_degree, options, MemoCache::from_env()).with_spheres(&dims)?;
        Ok((env, exprs))
    }

    fn eval_all(&self, texts: &[&str]) -> Result<(Env, Vec<Value>), CliError> {
        let (env, exprs) = self.env_for(texts)?;
        let values = exprs.iter().map(|e| env.eval(e)).collect::<Result<Vec<_>, _>>()?;
        Ok((env, values))
    }
}

fn combine(
    session: &Session,
    left: &str,
    right: &str,
    op: fn(Box<Expr>, Box<Expr>) -> Expr,
) -> Result<Output, CliError> {
    let (env, mut exprs) = session.env_for(&[left, right])?;
    let b = exprs.pop().expect("two inputs");
    let a = exprs.pop().expect("two inputs");
    let value = env.eval(&op(Box::new(a), Box::new(b)))?;
    let out = Output::element(&env, &value);
    env.persist();
    Ok(out)
}

fn reduce(session: &Session, expr: &str) -> Result<Output, CliError> {
    let (env, values) = session.eval_all(&[expr])?;
    let out = Output::element(&env, &values[0]);
    env.persist();
    Ok(out)
}

fn psi(session: &Session, expr: &str) -> Result<Output, CliError> {
    let (env, values) = session.eval_all(&[expr])?;
    let p = env.p;
    let (kind, terms) = match &values[0] {
        Value::E(x) => {
            let t = env.algebra.coproduct(x).map_err(EvalError::from)?;
            ("operations", tensor_terms(t.terms(), |k| k.to_string(), |k| k.degree(p)))
        }
        Value::Free(x) => {
            let f = env.free.as_ref().expect("free value");
            let t = f.coproduct(x).map_err(EvalError::from)?;
            ("free", tensor_terms(&t, |m| Output::free_mono_text(&env, m), |m| m.degree(p)))
        }
        v => {
            let x = env.to_semiring(v)?;
            let t = env.semiring.psi(&x).map_err(EvalError::from)?;
            ("semiring", tensor_terms(&t, display_mono, |m| m.degree(p)))
        }
    };
    env.persist();
    Ok(Output { text: tensor_text(&terms), json: json!({ "p": p.value(), "kind": kind, "terms": terms }) })
}

fn counit(session: &Session, expr: &str) -> Result<Output, CliError> {
    let (env, values) = session.eval_all(&[expr])?;
    let c: Scalar = match &values[0] {
        Value::Scalar(c) => *c,
        Value::E(x) => env.algebra.counit(x),
        Value::Free(x) => env.free.as_ref().expect("free value").counit(x),
        v => env.semiring.counit(&env.to_semiring(v)?),
    };
    Ok(Output::element(&env, &Value::Scalar(c)))
}

fn steenrod_or_bockstein(session: &Session, expr: &str, k: Option<u32>) -> Result<Output, CliError> {
    let (env, values) = session.eval_all(&[expr])?;
    // the mod-2 Bockstein is Sq^1; the library's β only covers odd primes
    let k = if k.is_none() && !env.p.is_odd() { Some(1) } else { k };
    let zero_unless_identity = |c: Scalar| if k == Some(0) { c } else { Scalar::ZERO };
    let out = match &values[0] {
        Value::Scalar(c) => Value::Scalar(zero_unless_identity(*c)),
        Value::E(x) => Value::E(
            match k {
                Some(k) => env.algebra.steenrod(k, x),
                None => env.algebra.bockstein(x),
            }
            .map_err(EvalError::from)?,
        ),
        Value::Free(x) => {
            let f = env.free.as_ref().expect("free value");
            Value::Free(
                match k {
                    Some(k) => f.steenrod(k, x),
                    None => f.bockstein(x),
                }
                .map_err(EvalError::from)?,
            )
        }
        v => {
            let x = env.to_semiring(v)?;
            Value::Semi(
                match k {
                    Some(k) => env.semiring.steenrod(k, &x),
                    None => env.semiring.bockstein(&x),
                }
                .map_err(EvalError::from)?,
            )
        }
    };
    env.persist();
    Ok(Output::element(&env, &out))
}

/// Letters `Q<n>`, `Q_<n>`, `bQ<n>` or `bQ_<n>` separated by spaces.
fn parse_dl_word(word: &str, p: Prime) -> Result<Vec<DlOp>, CliError> {
    let mut out = Vec::new();
    for letter in word.split_whitespace() {
        let (bockstein, rest) = match letter.strip_prefix('b') {
            Some(rest) => (1, rest),
            None => (0, letter),
        };
        let digits = rest.strip_prefix('Q').map(|r| r.strip_prefix('_').unwrap_or(r));
        let index = digits
            .and_then(|d| d.parse::<u32>().ok())
            .ok_or_else(|| CliError::Usage(format!("bad Dyer-Lashof letter {letter:?}; expected Q<n> or bQ<n>")))?;
        if bockstein == 1 && !p.is_odd() {
            return Err(CliError::Usage(format!("{letter}: Bockstein letters need an odd prime")));
        }
        out.push(DlOp::new(bockstein, index));
    }
    if out.is_empty() {
        return Err(CliError::Usage("empty Dyer-Lashof word".into()));
    }
    Ok(out)
}

fn formal_text<O: Ord + Copy + std::fmt::Display, X: Linear>(
    terms: &Formal<O, X>,
    show: impl Fn(&X) -> String,
) -> (String, Vec<Json>) {
    let mut parts = Vec::new();
    let mut json_terms = Vec::new();
    for (op, x) in terms.iter() {
        let operand = show(x);
        parts.push(format!("{op}({operand})"));
        json_terms.push(json!({ "op": op.to_string(), "operand": operand }));
    }
    let text = if parts.is_empty() { "0".to_string() } else { parts.join(" + ") };
    (text, json_terms)
}

fn dl_to_e(session: &Session, word: &str, on: &str, formal: bool) -> Result<Output, CliError> {
    let ops = parse_dl_word(word, session.p)?;
    let (env, values) = session.eval_all(&[on])?;
    let compute = |e: dl::DlError| CliError::Compute(e.to_string());
    let mut x = values.into_iter().next().expect("one value");
    if let Value::Scalar(_) | Value::Bracket(1) = x {
        x = Value::E(env.algebra.unit(Ring::E).scaled(match x {
            Value::Scalar(c) => c,
            _ => Scalar::ONE,
        }));
    }
    let (last, rest) = ops.split_first().expect("nonempty word");
    for op in rest.iter().rev() {
        x = apply_q(&env, *op, &x).map_err(compute)?;
    }
    let out = if formal {
        let (text, terms) = match &x {
            Value::E(y) => formal_text(
                &dl::formal_q_to_e(env.algebra.as_ref(), &Formal::single(*last, y.clone())).map_err(compute)?,
                |v| v.to_string(),
            ),
            Value::Free(y) => {
                let f = env.free.as_ref().expect("free value");
                let e = dl::formal_q_to_e(f, &Formal::single(*last, y.clone())).map_err(compute)?;
                formal_text(&e, |v| render::element(&env, &Value::Free(v.clone())).0)
            }
            v => {
                let y = env.to_semiring(v)?;
                let e = dl::formal_q_to_e(env.semiring.as_ref(), &Formal::single(*last, y)).map_err(compute)?;
                formal_text(&e, |v| render::element(&env, &Value::Semi(v.clone())).0)
            }
        };
        Output { text, json: json!({ "p": env.p.value(), "kind": "formal-e", "terms": terms }) }
    } else {
        x = apply_q(&env, *last, &x).map_err(compute)?;
        Output::element(&env, &x)
    };
    env.persist();
    Ok(out)
}

fn apply_q(env: &Env, op: DlOp, x: &Value) -> Result<Value, dl::DlError> {
    Ok(match x {
        Value::E(y) => Value::E(dl::q_from_e(env.algebra.as_ref(), op, y)?),
        Value::Free(y) => Value::Free(dl::q_from_e(env.free.as_ref().expect("free value"), op, y)?),
        v => {
            let y = env.to_semiring(v).map_err(|e| dl::DlError::Module(e.to_string()))?;
            Value::Semi(dl::q_from_e(env.semiring.as_ref(), op, &y)?)
        }
    })
}

fn e_to_dl(session: &Session, expr: &str) -> Result<Output, CliError> {
    let (env, values) = session.eval_all(&[expr])?;
    let p = env.p;
    let Value::E(x) = &values[0] else {
        return Err(CliError::Usage(format!(
            "e-to-dl takes an element of the operations, not a {} value",
            values[0].kind()
        )));
    };
    let mut total: QSide<EElement> = Formal::zero();
    for (key, c) in x.terms().iter() {
        let Some(first) = key.first() else {
            return Err(CliError::Usage("the unit [1] is not an E-operation applied to anything".into()));
        };
        let tail = EElement::monomial(p, Ring::E, key.tail());
        let q = dl::formal_e_to_q(env.algebra.as_ref(), &Formal::single(first, tail))
            .map_err(|e| CliError::Compute(e.to_string()))?;
        total.add_formal(&q, c);
    }
    let (text, terms) = formal_text(&total, |v| v.to_string());
    env.persist();
    Ok(Output { text, json: json!({ "p": p.value(), "kind": "formal-q", "terms": terms }) })
}

fn basis(session: &Session, ring: RingArg, length: usize) -> Result<Output, CliError> {
    let env = Env::new(session.p, session.common.max_degree, SharpOptions::default(), None);
    let ring = match ring {
        RingArg::E => Ring::E,
        RingArg::Ehat => Ring::Ehat,
    };
    let keys = if length == 0 {
        vec![eops::Sequence::empty()]
    } else {
        env.algebra.basis(ring, length, session.common.max_degree)
    };
    let p = session.p;
    let mut text = String::new();
    let mut elements = Vec::new();
    for k in &keys {
        let _ = writeln!(text, "{}\t{}", k.degree(p), k);
        elements.push(
            json!({ "sequence": k.to_string(), "degree": k.degree(p), "bockstein_degree": k.bockstein_degree() }),
        );
    }
    Ok(Output {
        text: text.trim_end().to_string(),
        json: json!({ "p": p.value(), "ring": format!("{ring:?}"), "length": length, "max_degree": session.common.max_degree, "elements": elements }),
    })
}

fn generator_symbol(g: &FreeGen, pres: &Presentation) -> String {
    if g.sequence().is_empty() {
        pres.name(g.class()).to_string()
    } else {
        format!("({} o {})", g.sequence(), pres.name(g.class()))
    }
}

fn dims_text(dims: &[Option<u64>]) -> (String, Vec<Json>) {
    let mut text = String::from("degree\tdimension\n");
    let mut json_dims = Vec::new();
    for (d, v) in dims.iter().enumerate() {
        let _ = writeln!(text, "{d}\t{}", v.map_or("inf".to_string(), |n| n.to_string()));
        json_dims.push(v.map_or(Json::Null, |n| json!(n)));
    }
    (text, json_dims)
}

fn free_homology(
    session: &Session,
    input: Option<&PathBuf>,
    spheres: Option<&[u32]>,
    qz: bool,
    with_gens: bool,
) -> Result<Output, CliError> {
    let p = session.p;
    let max = session.common.max_degree;
    let pres = match (input, spheres) {
        (Some(path), _) => {
            let text =
                std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            let pres =
                Presentation::from_json(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            if pres.p() != p {
                return Err(CliError::Usage(format!("presentation is at p={}, but --p is {}", pres.p(), p)));
            }
            pres
        }
        (None, Some(dims)) => {
            let distinct: BTreeSet<_> = dims.iter().collect();
            // distinct spheres get the `z[d]` names that expressions use
            if distinct.len() == dims.len() {
                sphere_presentation(p, dims)
            } else {
                Presentation::wedge_of_spheres(p, dims)
            }
        }
        (None, None) => return Err(CliError::Usage("free-homology needs --input or --spheres".into())),
    };
    let env = Env::new(p, max, SharpOptions::default(), MemoCache::from_env());
    let f = FreeAlgebra::new(pres, env.algebra.clone()).map_err(EvalError::from)?;
    let (laurent, dims, gens) = if qz {
        let (k, dims) = f.qz_poincare(max);
        (Some(k), dims, f.qz_generators(max))
    } else {
        (None, f.poincare_series(max), f.generators(max))
    };
    let (mut text, json_dims) = dims_text(&dims);
    if let Some(k) = laurent {
        text = format!("laurent variables: {k}\n{text}");
    }
    let mut json_gens = Vec::new();
    if with_gens {
        text.push_str("generators:\n");
        for g in &gens {
            let shape = g.shape(p);
            let symbol = generator_symbol(g, f.presentation());
            let _ = writeln!(text, "{}\t{}\t{}", shape.degree, shape.weight, symbol);
            json_gens.push(json!({ "degree": shape.degree, "weight": shape.weight, "symbol": symbol }));
        }
    }
    env.persist();
    let mut json = json!({ "p": p.value(), "max_degree": max, "dims": json_dims });
    if let Some(k) = laurent {
        json["laurent_variables"] = json!(k);
    }
    if with_gens {
        json["generators"] = Json::Array(json_gens);
    }
    Ok(Output { text: text.trim_end().to_string(), json })
}

fn coinvariants(session: &Session, n: usize, table: bool, jobs: usize) -> Result<Output, CliError> {
    if n == 0 || n > 3 {
        return Err(CliError::Usage(format!("--n must be 1, 2 or 3, not {n}")));
    }
    let max = session.common.max_degree;
    let dims = coinvariant_dims(n, max, session.p, jobs);
    let text = if table {
        let mut t = String::from("degree\tdimension");
        for (d, v) in dims.iter().enumerate() {
            let _ = write!(t, "\n{d}\t{v}");
        }
        t
    } else {
        dims.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(" ")
    };
    Ok(Output { text, json: json!({ "p": session.p.value(), "n": n, "max_degree": max, "dims": dims }) })
}

fn verify(session: &Session, name: Option<&str>, list: bool, jobs: usize) -> Result<(Output, Status), CliError> {
    let registry = Registry::standard();
    if list || name.is_none() {
        let mut text = String::new();
        let mut entries = Vec::new();
        for c in registry.iter() {
            let _ = writeln!(text, "{}\t{}", c.name(), c.summary());
            entries.push(json!({ "name": c.name(), "summary": c.summary() }));
        }
        return Ok((Output { text: text.trim_end().to_string(), json: json!({ "checks": entries }) }, Status::Ok));
    }
    let env = Env::new(session.p, session.common.max_degree, SharpOptions::default(), MemoCache::from_env());
    let ctx = CheckContext {
        p: session.p,
        max_degree: session.common.max_degree,
        jobs: jobs.max(1),
        algebra: env.algebra.clone(),
    };
    let report = registry.run(name.expect("checked above"), &ctx)?;
    env.persist();
    let status = if report.passed() { Status::Ok } else { Status::VerificationFailed };
    let mut json = serde_json::to_value(&report).expect("reports serialize");
    json["passed"] = json!(report.passed());
    Ok((Output { text: report.to_string(), json }, status))
}

fn run(cli: Cli) -> Result<(Output, bool, Status), CliError> {
    let single = |common: &Common, out: Result<Output, CliError>| out.map(|o| (o, common.json, Status::Ok));
    match &cli.command {
        Command::Reduce { common, expr } => single(common, reduce(&Session::new(common)?, expr)),
        Command::Circ { common, left, right } => {
            single(common, combine(&Session::new(common)?, left, right, Expr::Circ))
        }
        Command::Dot { common, left, right } => single(common, combine(&Session::new(common)?, left, right, Expr::Dot)),
        Command::Sharp { common, left, right } => {
            single(common, combine(&Session::new(common)?, left, right, Expr::Sharp))
        }
        Command::Psi { common, expr } => single(common, psi(&Session::new(common)?, expr)),
        Command::Counit { common, expr } => single(common, counit(&Session::new(common)?, expr)),
        Command::Steenrod { common, k, expr } => {
            single(common, steenrod_or_bockstein(&Session::new(common)?, expr, Some(*k)))
        }
        Command::Bockstein { common, expr } => {
            single(common, steenrod_or_bockstein(&Session::new(common)?, expr, None))
        }
        Command::DlToE { common, word, on, formal } => {
            single(common, dl_to_e(&Session::new(common)?, word, on, *formal))
        }
        Command::EToDl { common, expr } => single(common, e_to_dl(&Session::new(common)?, expr)),
        Command::Basis { common, ring, length } => single(common, basis(&Session::new(common)?, *ring, *length)),
        Command::FreeHomology { common, input, spheres, qz, generators } => {
            single(common, free_homology(&Session::new(common)?, input.as_ref(), spheres.as_deref(), *qz, *generators))
        }
        Command::Oracle { which: OracleCommand::Coinvariants { common, n, table, jobs } } => {
            single(common, coinvariants(&Session::new(common)?, *n, *table, *jobs))
        }
        Command::Verify { common, name, list, jobs } => {
            let (out, status) = verify(&Session::new(common)?, name.as_deref(), *list, *jobs)?;
            Ok((out, common.json, status))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok((out, as_json, status)) => {
            if as_json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("json values serialize"));
            } else {
                println!("{}", out.text);
            }
            match status {
                Status::Ok => ExitCode::SUCCESS,
                Status::VerificationFailed => ExitCode::from(2),
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
