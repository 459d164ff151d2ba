//! `edgeham`: command-line front end.
//!
//! Exit codes: 0 yes/valid, 1 no/invalid, 2 probably-no, 3 error, 64 usage error.

use std::fmt;
use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use edgeham_core::cert::{check_des, validate_edge_sequence, EdgeSeq, Mode};
use edgeham_core::cw::{decide_ehc_cw, decide_ehp_cw, CwExpr};
use edgeham_core::generate::{generate_family, FamilySpec, Instance};
use edgeham_core::graph::{Graph, Hypergraph};
use edgeham_core::hyper::{decide_hyper_ehp, HyperSolveConfig};
use edgeham_core::io;
use edgeham_core::kernel::{kernelize, lift_certificate, two_approx_vc};
use edgeham_core::oracle::{solve_edge_ham_exact, DEFAULT_EDGE_HAM_CAP};
use edgeham_core::transforms::{decide_via_transform, ehc_to_ehp_gadget, ehp_to_ehc_gadget};
use edgeham_core::tw::{check_td, des_dp, make_nice, min_fill_decomposition, TreeDecomposition};
use edgeham_core::{Answer, Certificate, SolveResult};

const EXIT_ERROR: u8 = 3;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "edgeham", version, about = "Edge Hamiltonian path and cycle solvers")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide whether the input has an edge-Hamiltonian path or cycle.
    Solve(SolveArgs),
    /// Shrink a graph with a known vertex cover.
    Kernelize(KernelizeArgs),
    /// Turn a path of a kernel into a path of the original graph.
    Lift(LiftArgs),
    /// Attach a path/cycle conversion gadget.
    Reduce(ReduceArgs),
    /// Print a generated instance.
    Gen(GenArgs),
    /// Check a witness against an instance.
    Check(CheckArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Problem {
    Path,
    Cycle,
}

impl From<Problem> for Mode {
    fn from(p: Problem) -> Mode {
        match p {
            Problem::Path => Mode::Path,
            Problem::Cycle => Mode::Cycle,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Auto,
    Oracle,
    Vc,
    Tw,
    Cw,
    Hyper,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.to_possible_value().expect("no skipped variants").get_name())
    }
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long, value_enum, default_value = "cycle")]
    problem: Problem,
    #[arg(long, value_enum, default_value = "auto")]
    method: Method,
    /// Graph (`p edge`) or hypergraph (`p hyp`) file; `-` for stdin.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Tree decomposition for `--method tw`.
    #[arg(long)]
    td: Option<PathBuf>,
    /// Clique-width expression for `--method cw`.
    #[arg(long)]
    cwe: Option<PathBuf>,
    /// 1-based hitting set (or vertex cover for `--method vc`).
    #[arg(long, value_delimiter = ',')]
    hitting_set: Option<Vec<usize>>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.01)]
    delta: f64,
    #[arg(long, default_value_t = 1_000_000)]
    max_rounds: u64,
    /// Print the certificate after the verdict.
    #[arg(long)]
    certificate: bool,
}

#[derive(Args)]
struct KernelizeArgs {
    #[arg(long)]
    input: PathBuf,
    /// 1-based vertex cover; a 2-approximation is used when omitted.
    #[arg(long, value_delimiter = ',')]
    cover: Option<Vec<usize>>,
    #[arg(long)]
    output: PathBuf,
    #[arg(long)]
    trace: PathBuf,
}

#[derive(Args)]
struct LiftArgs {
    #[arg(long)]
    trace: PathBuf,
    /// Edge ids of a path in the kernel.
    #[arg(long)]
    kernel_cert: PathBuf,
}

#[derive(Args)]
struct ReduceArgs {
    /// Variant of the produced instance.
    #[arg(long, value_enum)]
    to: Problem,
    #[arg(long)]
    input: PathBuf,
    /// 1-based anchor vertices: two for `--to cycle`, one for `--to path`.
    #[arg(long, value_delimiter = ',')]
    at: Option<Vec<usize>>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    /// e.g. `cycle 6`, `gnm 10 14`, `vc_bounded 12 3 18`, `hyper_hs 9 2 14 4`.
    #[arg(long)]
    family: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckKind {
    Path,
    Cycle,
    Des,
    Td,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long, value_enum)]
    kind: CheckKind,
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    witness: PathBuf,
}

/// Bad flag combination, reported with exit code 64.
#[derive(Debug)]
struct Usage(String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if e.is::<Usage>() { EXIT_USAGE } else { EXIT_ERROR })
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.cmd {
        Cmd::Solve(a) => solve(a),
        Cmd::Kernelize(a) => kernelize_cmd(a),
        Cmd::Lift(a) => lift(a),
        Cmd::Reduce(a) => reduce(a),
        Cmd::Gen(a) => gen(a),
        Cmd::Check(a) => check(a),
    }
}

fn read(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn oracle_cap() -> Result<usize> {
    match std::env::var("EDGEHAM_ORACLE_CAP") {
        Ok(v) => v.trim().parse().map_err(|_| usage(format!("EDGEHAM_ORACLE_CAP must be an integer, got `{v}`"))),
        Err(_) => Ok(DEFAULT_EDGE_HAM_CAP),
    }
}

fn is_hypergraph_text(text: &str) -> bool {
    text.lines()
        .map(str::split_whitespace)
        .filter_map(|mut w| {
            let first = w.next()?;
            (first != "c").then(|| (first, w.next()))
        })
        .next()
        .is_some_and(|(p, kind)| p == "p" && kind == Some("hyp"))
}

fn zero_based(ids: &[usize], n: usize, what: &str) -> Result<Vec<usize>> {
    ids.iter()
        .map(|&v| {
            if v == 0 || v > n {
                Err(usage(format!("{what}: vertex {v} outside 1..={n}")))
            } else {
                Ok(v - 1)
            }
        })
        .collect()
}

enum Input {
    Graph(Graph),
    Hyper(Hypergraph),
}

impl Input {
    fn m(&self) -> usize {
        match self {
            Input::Graph(g) => g.m(),
            Input::Hyper(h) => h.m(),
        }
    }

    fn n(&self) -> usize {
        match self {
            Input::Graph(g) => g.n(),
            Input::Hyper(h) => h.n(),
        }
    }
}

struct Verdict {
    answer: Answer,
    certificate: Option<(String, String)>,
    notes: Vec<String>,
}

impl Verdict {
    fn from_result(r: SolveResult) -> Self {
        let answer = r.answer();
        let certificate = r.into_certificate().map(|c| match c {
            Certificate::Edges(s) => (mode_name(s.mode).to_string(), io::serialize_edge_seq(&s)),
            Certificate::Des(d) => ("des".to_string(), io::serialize_des(&d)),
        });
        Verdict {
            answer,
            certificate,
            notes: Vec::new(),
        }
    }

    fn bool(yes: bool) -> Self {
        Verdict {
            answer: if yes { Answer::Yes } else { Answer::No },
            certificate: None,
            notes: Vec::new(),
        }
    }
}

fn mode_name(m: Mode) -> &'static str {
    match m {
        Mode::Path => "path",
        Mode::Cycle => "cycle",
    }
}

fn solve(a: SolveArgs) -> Result<u8> {
    let mode = Mode::from(a.problem);
    let cap = oracle_cap()?;
    let cwe = a.cwe.as_deref().map(|p| -> Result<CwExpr> { Ok(io::parse_cwe(&read(p)?)?) }).transpose()?;
    let input = match (&a.input, &cwe) {
        (Some(p), _) => {
            let text = read(p)?;
            if is_hypergraph_text(&text) {
                Input::Hyper(io::parse_hypergraph(&text)?)
            } else {
                Input::Graph(io::parse_graph(&text)?)
            }
        }
        (None, Some(e)) => Input::Graph(e.eval()?.graph),
        (None, None) => return Err(usage("--input is required (or --cwe for --method cw)")),
    };
    let method = match a.method {
        Method::Auto if input.m() <= cap => Method::Oracle,
        Method::Auto if cwe.is_some() => Method::Cw,
        Method::Auto => match input {
            Input::Graph(_) => Method::Tw,
            Input::Hyper(_) if a.hitting_set.is_some() => Method::Hyper,
            Input::Hyper(_) => return Err(usage("hypergraph above the oracle cap needs --hitting-set")),
        },
        m => m,
    };
    let graph = |what: &str| match &input {
        Input::Graph(g) => Ok(g),
        Input::Hyper(_) => Err(usage(format!("--method {what} needs a graph, not a hypergraph"))),
    };

    let verdict = match method {
        Method::Oracle => {
            let r = match &input {
                Input::Graph(g) => solve_edge_ham_exact(g, mode, cap)?,
                Input::Hyper(h) => solve_edge_ham_exact(h, mode, cap)?,
            };
            Verdict::from_result(r)
        }
        Method::Vc => {
            let g = graph("vc")?;
            let cover = match &a.hitting_set {
                Some(ids) => zero_based(ids, g.n(), "--hitting-set")?,
                None => two_approx_vc(g),
            };
            solve_vc(g, &cover, mode, cap)?
        }
        Method::Tw => {
            let g = graph("tw")?;
            let td = match &a.td {
                Some(p) => io::parse_td(&read(p)?, g)?,
                None => min_fill_decomposition(g),
            };
            solve_tw(g, &td, mode)?
        }
        Method::Cw => {
            let e = cwe.as_ref().ok_or_else(|| usage("--method cw needs --cwe"))?;
            let evaluated = e.eval()?.graph;
            if let Input::Graph(g) = &input {
                if (g.n(), g.m()) != (evaluated.n(), evaluated.m()) {
                    bail!(
                        "the expression has {} vertices and {} edges, the input {} and {}",
                        evaluated.n(),
                        evaluated.m(),
                        g.n(),
                        g.m()
                    );
                }
            }
            match mode {
                Mode::Cycle => {
                    let (yes, report) = decide_ehc_cw(e)?;
                    let mut v = Verdict::bool(yes);
                    v.notes = report.to_text().lines().map(String::from).collect();
                    v
                }
                Mode::Path => Verdict::bool(decide_ehp_cw(e)?),
            }
        }
        Method::Hyper => {
            let ids = a.hitting_set.as_ref().ok_or_else(|| usage("--method hyper needs --hitting-set"))?;
            if mode == Mode::Cycle {
                return Err(usage("--method hyper decides paths only; use --problem path"));
            }
            let h = match &input {
                Input::Graph(g) => g.to_hypergraph(),
                Input::Hyper(h) => h.clone(),
            };
            let cfg = HyperSolveConfig {
                delta: a.delta,
                max_rounds: a.max_rounds,
                seed: a.seed,
                oracle_cap: cap,
                ..HyperSolveConfig::default()
            };
            let hs = zero_based(ids, h.n(), "--hitting-set")?;
            Verdict::from_result(decide_hyper_ehp(&h, &hs, &cfg)?)
        }
        Method::Auto => unreachable!("resolved above"),
    };

    let (word, code) = match verdict.answer {
        Answer::Yes => ("yes", 0),
        Answer::No => ("no", 1),
        Answer::ProbablyNo => ("probably-no", 2),
    };
    println!(
        "{word} problem={} method={method} n={} m={}",
        mode_name(mode),
        input.n(),
        input.m()
    );
    for note in &verdict.notes {
        println!("c {note}");
    }
    if a.certificate {
        if let Some((kind, body)) = &verdict.certificate {
            println!("certificate {kind}");
            print!("{body}");
        }
    }
    Ok(code)
}

fn solve_vc(g: &Graph, cover: &[usize], mode: Mode, cap: usize) -> Result<Verdict> {
    let path_via_kernel = |h: &Graph, cover: &[usize]| -> Result<Option<EdgeSeq>> {
        let trace = kernelize(h, cover)?;
        let r = solve_edge_ham_exact(&trace.kernel, Mode::Path, cap)?;
        match r.edge_seq() {
            Some(s) => Ok(Some(lift_certificate(&trace, s)?)),
            None => Ok(None),
        }
    };
    match mode {
        Mode::Path => {
            let cert = path_via_kernel(g, cover)?;
            let mut v = Verdict::bool(cert.is_some());
            v.certificate = cert.map(|s| ("path".to_string(), io::serialize_edge_seq(&s)));
            Ok(v)
        }
        Mode::Cycle => {
            // The pendant gadget's inner vertices extend the cover.
            let n = g.n();
            let yes = decide_via_transform(g, Mode::Cycle, |h| -> Result<bool> {
                let extended: Vec<usize> = cover.iter().copied().chain([n, n + 2]).collect();
                Ok(path_via_kernel(h, &extended)?.is_some())
            })?;
            Ok(Verdict::bool(yes))
        }
    }
}

fn solve_tw(g: &Graph, td: &TreeDecomposition, mode: Mode) -> Result<Verdict> {
    match mode {
        Mode::Cycle => {
            if g.m() < 3 {
                return Ok(Verdict::bool(edgeham_core::tw::decide_ehc_tw(g, td)?));
            }
            let r = des_dp(g, &make_nice(g, td)?)?;
            Ok(Verdict::from_result(r))
        }
        Mode::Path => {
            if g.m() == 0 {
                return Ok(Verdict::bool(true));
            }
            for u in 0..g.n() {
                for v in u + 1..g.n() {
                    let (h, trace) = ehp_to_ehc_gadget(g, u, v)?;
                    if edgeham_core::tw::decide_ehc_tw(&h, &trace.extend_td(td))? {
                        return Ok(Verdict::bool(true));
                    }
                }
            }
            Ok(Verdict::bool(false))
        }
    }
}

fn kernelize_cmd(a: KernelizeArgs) -> Result<u8> {
    let g = io::parse_graph(&read(&a.input)?)?;
    let cover = match &a.cover {
        Some(ids) => zero_based(ids, g.n(), "--cover")?,
        None => two_approx_vc(&g),
    };
    if !g.is_vertex_cover(&cover) {
        return Err(usage("--cover is not a vertex cover"));
    }
    let trace = kernelize(&g, &cover)?;
    write_out(Some(&a.output), &io::serialize_graph(&trace.kernel))?;
    write_out(Some(&a.trace), &io::serialize_trace(&trace))?;
    println!(
        "kernel k={} m={} -> {} bound={}",
        trace.k(),
        g.m(),
        trace.kernel.m(),
        trace.edge_bound()
    );
    Ok(0)
}

fn lift(a: LiftArgs) -> Result<u8> {
    let trace = io::parse_trace(&read(&a.trace)?)?;
    let s = io::parse_edge_seq(&read(&a.kernel_cert)?, trace.kernel.m(), Mode::Path)?;
    if !validate_edge_sequence(&trace.kernel, &s).unwrap_or(false) {
        println!("invalid kernel certificate");
        return Ok(1);
    }
    let lifted = lift_certificate(&trace, &s)?;
    let ok = validate_edge_sequence(&trace.original, &lifted).unwrap_or(false);
    println!("{}", if ok { "valid" } else { "invalid" });
    print!("{}", io::serialize_edge_seq(&lifted));
    Ok(if ok { 0 } else { 1 })
}

fn reduce(a: ReduceArgs) -> Result<u8> {
    let g = io::parse_graph(&read(&a.input)?)?;
    let at = zero_based(a.at.as_deref().unwrap_or(&[1, 2][..]), g.n(), "--at")?;
    let h = match (a.to, at.as_slice()) {
        (Problem::Cycle, [u, v]) => ehp_to_ehc_gadget(&g, *u, *v)?.0,
        (Problem::Path, [u, ..]) if a.at.as_ref().is_none_or(|x| x.len() == 1) => ehc_to_ehp_gadget(&g, *u)?.0,
        (Problem::Cycle, _) => return Err(usage("--to cycle needs --at u,v")),
        (Problem::Path, _) => return Err(usage("--to path needs --at u")),
    };
    write_out(a.output.as_deref(), &io::serialize_graph(&h))?;
    Ok(0)
}

fn gen(a: GenArgs) -> Result<u8> {
    let spec = FamilySpec::parse(&a.family, Some(a.seed)).map_err(|e| usage(e.to_string()))?;
    let out = generate_family(spec)?;
    let planted: Vec<String> = out.planted.iter().map(|v| (v + 1).to_string()).collect();
    let mut text = format!("c {spec}\nc planted {}\n", planted.join(","));
    text += &match &out.instance {
        Instance::Graph(g) => io::serialize_graph(g),
        Instance::Hypergraph(h) => io::serialize_hypergraph(h),
    };
    write_out(a.output.as_deref(), &text)?;
    Ok(0)
}

fn check(a: CheckArgs) -> Result<u8> {
    let text = read(&a.input)?;
    let witness = read(&a.witness)?;
    let verdict: Result<(), String> = match a.kind {
        CheckKind::Path | CheckKind::Cycle => {
            let mode = if matches!(a.kind, CheckKind::Path) { Mode::Path } else { Mode::Cycle };
            let result = if is_hypergraph_text(&text) {
                let h = io::parse_hypergraph(&text)?;
                validate_edge_sequence(&h, &io::parse_edge_seq(&witness, h.m(), mode)?)
            } else {
                let g = io::parse_graph(&text)?;
                validate_edge_sequence(&g, &io::parse_edge_seq(&witness, g.m(), mode)?)
            };
            match result {
                Ok(true) => Ok(()),
                Ok(false) => Err("consecutive edges do not share a vertex".into()),
                Err(e) => Err(e.to_string()),
            }
        }
        CheckKind::Des => {
            let g = io::parse_graph(&text)?;
            check_des(&g, &io::parse_des(&witness, &g)?).map_err(|e| e.to_string())
        }
        CheckKind::Td => {
            let g = io::parse_graph(&text)?;
            let td = io::parse_td_unchecked(&witness)?;
            check_td(&g, &td).map_err(|e| e.to_string())
        }
    };
    match verdict {
        Ok(()) => {
            println!("valid");
            Ok(0)
        }
        Err(why) => {
            println!("invalid: {why}");
            Ok(1)
        }
    }
}
