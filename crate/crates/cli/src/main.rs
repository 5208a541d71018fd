//! `kmult`: command-line front end.
//!
//! Exit codes: 0 yes/feasible/verified, 1 no/infeasible or a domain error,
//! 2 usage, 3 internal invariant violation.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::json;

use kmult::batch::evaluate_corpus;
use kmult::drawing::{drawing_arrows, rows_cols, Drawing, EdgeClass};
use kmult::gen::{gen_random, gen_uca};
use kmult::io::{parse_model, serialize_model};
use kmult::labeling::{make_labels, query_labels, Distance};
use kmult::oracle::verify_k_multiplicative;
use kmult::solver::{solve_fixed, SolveOutcome};
use kmult::syngraph::{build_syn_literal, build_syn_star};
use kmult::*;

/// Writes to stdout; a closed pipe ends the process quietly.
fn write_out(s: &str) {
    let mut so = io::stdout().lock();
    if so.write_all(s.as_bytes()).and_then(|_| so.flush()).is_err() {
        std::process::exit(0);
    }
}

macro_rules! out {
    ($($t:tt)*) => { write_out(&format!($($t)*)) };
}

macro_rules! outln {
    ($($t:tt)*) => { write_out(&format!("{}\n", format_args!($($t)*))) };
}

#[derive(Parser)]
#[command(name = "kmult", version, about = "k-multiplicative proper circular-arc models")]
struct Cli {
    /// Print JSON on stdout.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct ModelArg {
    /// Model file in the `pca v1` format; `-` or nothing reads stdin.
    model: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse and validate a model.
    Validate(ModelArg),
    /// Size, omega, class, rows and columns.
    Info(ModelArg),
    /// The synthetic graph S^k as JSON.
    Syn {
        #[arg(long)]
        k: usize,
        /// S^k_* instead of S^k.
        #[arg(long)]
        star: bool,
        /// The drawing graph: every short nose removed.
        #[arg(long, conflicts_with = "star")]
        literal: bool,
        #[command(flatten)]
        m: ModelArg,
    },
    /// Straight-line drawing of S^k in `--copies` copies, as TSV or DOT.
    Draw {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        copies: usize,
        #[arg(long)]
        dot: bool,
        #[command(flatten)]
        m: ModelArg,
    },
    /// Solve S^k for fixed (c, ell).
    Solve {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        c: i128,
        #[arg(long)]
        ell: i128,
        #[command(flatten)]
        m: ModelArg,
    },
    /// Decide k-multiplicativity; prints a certificate on No.
    Decide {
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        m: ModelArg,
    },
    /// Check a negative certificate.
    Authenticate {
        #[arg(long)]
        k: usize,
        model: PathBuf,
        cert: PathBuf,
    },
    /// Build a k-multiplicative uniform model equivalent to the input.
    Construct {
        #[arg(long)]
        k: usize,
        /// Also write the parameter sidecar to this file.
        #[arg(long)]
        sidecar: Option<PathBuf>,
        #[command(flatten)]
        m: ModelArg,
    },
    /// Verify a candidate against a model, or run a random corpus.
    Verify {
        #[arg(long)]
        k: Option<usize>,
        /// Decide and certify every k on a seeded random corpus.
        #[arg(long)]
        corpus: bool,
        /// Corpus size.
        #[arg(long, default_value_t = 100)]
        count: usize,
        /// Largest model size in the corpus.
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        sequential: bool,
        candidate: Option<PathBuf>,
        model: Option<PathBuf>,
    },
    /// Distance labels of a uniform model, constructed first if needed.
    Label {
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        m: ModelArg,
    },
    /// Distance class between two arcs from a label file.
    Query {
        labels: PathBuf,
        #[arg(long)]
        c: i128,
        #[arg(long)]
        ell: i128,
        #[arg(long)]
        k: usize,
        a: usize,
        b: usize,
    },
    /// The power M^k with its epsilon ends.
    Power {
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        m: ModelArg,
    },
    /// The multiple k×U of a uniform model.
    Multiply {
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        m: ModelArg,
    },
    /// Loop unrolling: `--lambda` copies around a longer circle.
    Unroll {
        #[arg(long)]
        lambda: usize,
        #[command(flatten)]
        m: ModelArg,
    },
    /// Seeded random model.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// With an external arc (otherwise a PIG model).
        #[arg(long)]
        spca: bool,
        /// A uniform model instead.
        #[arg(long, conflicts_with = "spca")]
        uca: bool,
    },
}

enum Fail {
    Domain(Error),
    Internal(String),
    Io(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        if e.is_internal() {
            Fail::Internal(e.to_string())
        } else {
            Fail::Domain(e)
        }
    }
}

type Out = std::result::Result<u8, Fail>;

fn read_source(p: Option<&Path>) -> std::result::Result<String, Fail> {
    let mut s = String::new();
    match p {
        None => io::stdin().read_to_string(&mut s).map(|_| s),
        Some(p) if p == Path::new("-") => io::stdin().read_to_string(&mut s).map(|_| s),
        Some(p) => fs::read_to_string(p),
    }
    .map_err(|e| Fail::Io(format!("{}: {e}", p.map_or("stdin".into(), |p| p.display().to_string()))))
}

fn load(p: Option<&Path>) -> std::result::Result<PcaModel, Fail> {
    Ok(parse_model(&read_source(p)?)?)
}

fn emit(json: bool, value: serde_json::Value, text: impl FnOnce() -> String) {
    if json {
        outln!("{value}");
    } else {
        out!("{}", text());
    }
}

fn dist_str(d: Distance) -> String {
    match d {
        Distance::Zero => "zero".into(),
        Distance::Within(i) => i.to_string(),
        Distance::MoreThanK => "more-than-k".into(),
    }
}

#[derive(Serialize, Deserialize)]
struct CertFile {
    g_hollow: Vec<ArcId>,
    g_nose: Vec<ArcId>,
}

fn info(m: &PcaModel, json: bool) -> Out {
    let cl = m.classify();
    let geom = if cl.is_connected { rows_cols(m).ok() } else { None };
    let (rows, cols) = geom.as_ref().map_or((None, None), |g| (Some(g.rows), Some(g.cols)));
    let v = json!({
        "n": m.len(), "omega": m.omega(), "circle": if m.is_pig() { json!("pig") } else { json!(m.circle()) },
        "pig": cl.is_pig, "spca": cl.is_spca, "connected": cl.is_connected,
        "saturated": cl.is_saturated, "rows": rows, "cols": cols,
    });
    let opt = |x: Option<usize>| x.map_or("-".to_string(), |x| x.to_string());
    emit(json, v, || {
        format!(
            "n\t{}\nomega\t{}\nclass\t{}\nconnected\t{}\nsaturated\t{}\nrows\t{}\ncols\t{}\n",
            m.len(),
            m.omega(),
            if cl.is_pig { "PIG" } else { "SPCA" },
            cl.is_connected,
            cl.is_saturated,
            opt(rows),
            opt(cols)
        )
    });
    Ok(0)
}

fn syn(m: &PcaModel, k: usize, star: bool, literal: bool) -> Out {
    let g = if star {
        build_syn_star(m, k)?
    } else if literal {
        build_syn_literal(m, k)?
    } else {
        build_syn(m, k)?
    };
    let edges: Vec<_> = g
        .edges
        .iter()
        .map(|e| {
            json!({
                "from": e.from, "to": e.to,
                "kind": if e.is_nose() { "nose" } else { "hollow" },
                "order": e.order(), "bal": e.bal(), "ext": e.ext(),
            })
        })
        .collect();
    let geom = rows_cols(m).ok();
    outln!(
        "{}",
        json!({
            "k": k, "edges": edges,
            "rows": geom.as_ref().map(|g| &g.row),
            "cols": geom.as_ref().map(|g| &g.col0),
        })
    );
    Ok(0)
}

fn kind_str(kind: EdgeKind) -> String {
    match kind {
        EdgeKind::Hollow => "hollow".into(),
        EdgeKind::Nose(i) => format!("nose{i}"),
    }
}

fn dot(d: &Drawing, copies: usize) -> String {
    let mut s = String::from("digraph S {\n  node [shape=point];\n");
    let n = d.geom.row.len();
    for c in 0..copies.max(1) + 1 {
        for a in 0..n {
            let (x, y) = d.geom.pos(a, c);
            s.push_str(&format!("  \"{a}.{c}\" [label=\"A{a}\", pos=\"{x},{}!\"];\n", -y));
        }
    }
    for seg in &d.segments {
        let from = (0..n).find(|&a| d.geom.pos(a, seg.copy) == (seg.x1, seg.y1));
        let to_copy = seg.copy + usize::from(seg.class == EdgeClass::Backward);
        let to = (0..n).find(|&a| d.geom.pos(a, to_copy) == (seg.x2, seg.y2));
        if let (Some(f), Some(t)) = (from, to) {
            let style = if seg.kind == EdgeKind::Hollow { "dashed" } else { "solid" };
            s.push_str(&format!(
                "  \"{f}.{}\" -> \"{t}.{to_copy}\" [style={style}, label=\"{}\"];\n",
                seg.copy,
                kind_str(seg.kind)
            ));
        }
    }
    s.push_str("}\n");
    s
}

fn draw(m: &PcaModel, k: usize, copies: usize, as_dot: bool, json: bool) -> Out {
    let d = drawing_arrows(m, k, copies)?;
    if as_dot {
        out!("{}", dot(&d, copies));
    } else if json {
        outln!("{}", serde_json::to_string(&d).map_err(|e| Fail::Internal(e.to_string()))?);
    } else {
        for s in &d.segments {
            outln!("{}\t{}\t{}\t{}\t{}", s.x1, s.y1, s.x2, s.y2, kind_str(s.kind));
        }
    }
    if !d.crossings.is_empty() {
        return Err(Fail::Internal(format!("drawing has {} crossings", d.crossings.len())));
    }
    Ok(0)
}

fn solve(m: &PcaModel, k: usize, c: i128, ell: i128, json: bool) -> Out {
    match solve_fixed(m, k, c, ell)? {
        SolveOutcome::Feasible { model, dist, parity_warning } => {
            if parity_warning {
                eprintln!("warning: c or ell is odd");
            }
            emit(json, json!({ "feasible": true, "starts": dist, "model": serialize_model(&model) }), || {
                serialize_model(&model)
            });
            Ok(0)
        }
        SolveOutcome::Infeasible { cert, parity_warning } => {
            if parity_warning {
                eprintln!("warning: c or ell is odd");
            }
            let constraints: Vec<_> = cert
                .constraints
                .iter()
                .map(|c| json!({ "from": c.edge.from, "to": c.edge.to, "weight": c.weight, "text": c.text }))
                .collect();
            outln!("{}", json!({ "cycle": cert.cycle, "weight": cert.weight, "constraints": constraints }));
            Ok(1)
        }
    }
}

fn decide_cmd(m: &PcaModel, k: usize) -> Out {
    match decide(m, k)? {
        Decision::Yes { connectified } => {
            outln!("{}", json!({ "answer": "yes", "connectified": connectified }));
            Ok(0)
        }
        Decision::No { cert, .. } => {
            outln!("{}", json!({ "g_hollow": cert.g_hollow, "g_nose": cert.g_nose }));
            Ok(1)
        }
    }
}

fn authenticate(model: &Path, cert: &Path, k: usize) -> Out {
    let m = load(Some(model))?;
    let text = read_source(Some(cert))?;
    let c: CertFile = serde_json::from_str(&text).map_err(|e| Fail::Io(format!("{}: {e}", cert.display())))?;
    let cert = NegCert { k, g_hollow: c.g_hollow, g_nose: c.g_nose };
    match kmult::decide::authenticate_negative_reason(&m, &cert) {
        Ok(()) => {
            outln!("{}", json!({ "authentic": true }));
            Ok(0)
        }
        Err(reason) => {
            outln!("{}", json!({ "authentic": false, "reason": reason }));
            Ok(1)
        }
    }
}

fn construct_cmd(m: &PcaModel, k: usize, sidecar: Option<&Path>, json: bool) -> Out {
    let out = match construct(m, k) {
        Err(Error::NotMultiplicative) => {
            let Decision::No { cert, .. } = decide(m, k)? else {
                return Err(Fail::Internal("construction refused a yes-instance".into()));
            };
            outln!("{}", json!({ "g_hollow": cert.g_hollow, "g_nose": cert.g_nose }));
            return Ok(1);
        }
        r => r?,
    };
    let side = serde_json::to_string(&out.sidecar()).map_err(|e| Fail::Internal(e.to_string()))?;
    if let Some(p) = sidecar {
        fs::write(p, format!("{side}\n")).map_err(|e| Fail::Io(format!("{}: {e}", p.display())))?;
    }
    emit(json, json!({ "model": serialize_model(&out.model), "sidecar": out.sidecar() }), || {
        serialize_model(&out.model)
    });
    Ok(0)
}

fn verify_pair(cand: &Path, model: &Path, k: usize) -> Out {
    let u = load(Some(cand))?;
    let m = load(Some(model))?;
    m.check_k(k)?;
    match verify_k_multiplicative(&u, &m, k) {
        Ok(()) => {
            outln!("{}", json!({ "verified": true, "k": k }));
            Ok(0)
        }
        Err(f) => {
            outln!("{}", json!({ "verified": false, "k": k, "i": f.i, "reason": f.reason }));
            Ok(1)
        }
    }
}

fn verify_corpus(count: usize, n: usize, seed: u64, parallel: bool) -> Out {
    let n = n.max(1);
    let models = (0..count as u64)
        .map(|i| gen_random(1 + (i as usize) % n, i % 3 != 0, seed.wrapping_add(i)))
        .collect::<kmult::Result<Vec<_>>>()?;
    let reports = evaluate_corpus(&models, parallel);
    let (mut yes, mut no, mut bad) = (0, 0, Vec::new());
    for r in reports {
        let r = r?;
        if !r.certified {
            bad.push(json!({ "n": r.n, "k": r.k, "yes": r.yes, "detail": r.detail }));
        } else if r.yes {
            yes += 1;
        } else {
            no += 1;
        }
    }
    outln!("{}", json!({ "models": models.len(), "yes": yes, "no": no, "failures": bad }));
    Ok(if bad.is_empty() { 0 } else { 3 })
}

fn label(m: &PcaModel, k: usize, json: bool) -> Out {
    let u = if m.uniform_length().is_some() && verify_k_multiplicative(m, m, k).is_ok() {
        m.clone()
    } else {
        construct(m, k)?.model
    };
    let ls = make_labels(&u, k)?;
    emit(json, serde_json::to_value(&ls).map_err(|e| Fail::Internal(e.to_string()))?, || {
        let mut s = format!("# c={} ell={} k={}\n", ls.c, ls.ell, ls.k);
        for (i, x) in ls.labels.iter().enumerate() {
            s.push_str(&format!("{i}\t{x}\n"));
        }
        s
    });
    Ok(0)
}

fn read_labels(p: &Path) -> std::result::Result<Vec<i128>, Fail> {
    let text = read_source(Some(p))?;
    let mut out = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = || Fail::Domain(Error::Syntax { line: no + 1, col: 1, msg: "expected `id<TAB>s`".into() });
        let mut it = line.split_whitespace();
        let id: usize = it.next().and_then(|x| x.parse().ok()).ok_or_else(bad)?;
        let s: i128 = it.next().and_then(|x| x.parse().ok()).ok_or_else(bad)?;
        if id != out.len() || it.next().is_some() {
            return Err(bad());
        }
        out.push(s);
    }
    Ok(out)
}

fn query(p: &Path, c: i128, ell: i128, k: usize, a: usize, b: usize, json: bool) -> Out {
    let labels = read_labels(p)?;
    let get = |i: usize| {
        labels.get(i).copied().ok_or_else(|| Fail::Domain(Error::InvalidParams(format!("no arc {i}"))))
    };
    if c < 1 {
        return Err(Fail::Domain(Error::InvalidParams("c must be positive".into())));
    }
    let d = query_labels(get(a)?, get(b)?, c, ell, k);
    emit(json, json!({ "a": a, "b": b, "distance": dist_str(d) }), || format!("{}\n", dist_str(d)));
    Ok(0)
}

fn power_cmd(m: &PcaModel, k: usize, json: bool) -> Out {
    let p = power(m, k)?;
    emit(json, serde_json::to_value(&p).map_err(|e| Fail::Internal(e.to_string()))?, || {
        let mut s = format!("# power {k}\ncircle {}\n", p.circle);
        for (st, e) in &p.arcs {
            s.push_str(&format!("arc {st} {}+{}eps\n", e.base, e.eps));
        }
        s
    });
    Ok(0)
}

fn run(cli: Cli) -> Out {
    let json = cli.json;
    match cli.cmd {
        Cmd::Validate(a) => {
            let m = load(a.model.as_deref())?;
            emit(json, json!({ "valid": true, "n": m.len() }), || "ok\n".into());
            Ok(0)
        }
        Cmd::Info(a) => info(&load(a.model.as_deref())?, json),
        Cmd::Syn { k, star, literal, m } => syn(&load(m.model.as_deref())?, k, star, literal),
        Cmd::Draw { k, copies, dot, m } => draw(&load(m.model.as_deref())?, k, copies, dot, json),
        Cmd::Solve { k, c, ell, m } => solve(&load(m.model.as_deref())?, k, c, ell, json),
        Cmd::Decide { k, m } => decide_cmd(&load(m.model.as_deref())?, k),
        Cmd::Authenticate { k, model, cert } => authenticate(&model, &cert, k),
        Cmd::Construct { k, sidecar, m } => construct_cmd(&load(m.model.as_deref())?, k, sidecar.as_deref(), json),
        Cmd::Verify { corpus: true, count, n, seed, sequential, .. } => verify_corpus(count, n, seed, !sequential),
        Cmd::Verify { k, candidate: Some(u), model: Some(m), .. } => {
            let k = k.ok_or_else(|| Fail::Io("verify needs --k".into()))?;
            verify_pair(&u, &m, k)
        }
        Cmd::Verify { .. } => Err(Fail::Io("verify needs --corpus or <candidate> <model>".into())),
        Cmd::Label { k, m } => label(&load(m.model.as_deref())?, k, json),
        Cmd::Query { labels, c, ell, k, a, b } => query(&labels, c, ell, k, a, b, json),
        Cmd::Power { k, m } => power_cmd(&load(m.model.as_deref())?, k, json),
        Cmd::Multiply { k, m } => {
            let out = load(m.model.as_deref())?.multiply(k)?;
            out!("{}", serialize_model(&out));
            Ok(0)
        }
        Cmd::Unroll { lambda, m } => {
            let (u, map) = load(m.model.as_deref())?.unroll(lambda)?;
            emit(json, json!({ "model": serialize_model(&u), "origin": map }), || serialize_model(&u));
            Ok(0)
        }
        Cmd::Gen { n, seed, spca, uca } => {
            let m = if uca { gen_uca(n.max(1), seed) } else { gen_random(n, spca, seed)? };
            out!("{}", serialize_model(&m));
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(c) => c,
        Err(Fail::Domain(e)) => {
            outln!("{}", json!({ "error": e.to_string() }));
            1
        }
        Err(Fail::Io(msg)) => {
            eprintln!("kmult: {msg}");
            2
        }
        Err(Fail::Internal(msg)) => {
            eprintln!("kmult: internal error: {msg}");
            outln!("{}", json!({ "error": msg, "internal": true }));
            3
        }
    };
    ExitCode::from(code)
}
