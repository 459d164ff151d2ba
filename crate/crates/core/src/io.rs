//! Text formats. Files use 1-based vertex and edge ids; everything in memory
//! is 0-based. Lines starting with `c` are comments.
//!
//! ```text
//! p edge <n> <m>          e <u> <v>              graphs
//! p hyp <n> <m>           h <v1> <v2> ...        hypergraphs
//! s td <bags> <w+1> <n>   b <i> <v...>, <i> <j>  tree decompositions
//! k <budget>              (join 1 2 (union (intro 1) (intro 2)))
//! ```
//!
//! Witnesses are whitespace-separated edge ids: an ordering for paths and
//! cycles, an edge set for dominating Eulerian subgraphs (`v <u>` for the
//! single-vertex case).

use thiserror::Error;

use crate::cert::{DesSolution, EdgeSeq, Mode};
use crate::cw::{CwError, CwExpr, CwOp};
use crate::graph::{Graph, GraphError, Hypergraph};
use crate::kernel::KernelTrace;
use crate::tw::{check_td, TdError, TreeDecomposition};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("line {line}: {msg}")]
    SyntaxError { line: usize, msg: String },
    #[error("{what}: header says {expected}, found {found}")]
    CountMismatch { what: &'static str, expected: usize, found: usize },
    #[error("line {line}: duplicate edge {{{u}, {v}}}")]
    DuplicateEdge { line: usize, u: usize, v: usize },
    #[error("line {line}: vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { line: usize, vertex: usize, n: usize },
    #[error("missing header")]
    MissingHeader,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Td(#[from] TdError),
    #[error(transparent)]
    Cw(#[from] CwError),
    #[error("trace: {0}")]
    Json(#[from] serde_json::Error),
}

fn syntax(line: usize, msg: impl Into<String>) -> IoError {
    IoError::SyntaxError { line, msg: msg.into() }
}

/// Non-comment, non-blank lines with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let words: Vec<&str> = l.split_whitespace().collect();
        match words.first() {
            None => None,
            Some(&"c") => None,
            Some(_) => Some((i + 1, words)),
        }
    })
}

fn num(line: usize, w: &str) -> Result<usize, IoError> {
    w.parse::<usize>().map_err(|_| syntax(line, format!("expected a non-negative integer, got `{w}`")))
}

fn vertex(line: usize, w: &str, n: usize) -> Result<usize, IoError> {
    let v = num(line, w)?;
    if v == 0 || v > n {
        return Err(IoError::VertexOutOfRange { line, vertex: v, n });
    }
    Ok(v - 1)
}

fn header<'a>(
    lines: &mut impl Iterator<Item = (usize, Vec<&'a str>)>,
    tag: &[&str],
    arity: usize,
) -> Result<(usize, Vec<usize>), IoError> {
    let (line, words) = lines.next().ok_or(IoError::MissingHeader)?;
    if words.len() != tag.len() + arity || words[..tag.len()] != *tag {
        return Err(syntax(line, format!("expected header `{} ...`", tag.join(" "))));
    }
    let nums = words[tag.len()..].iter().map(|w| num(line, w)).collect::<Result<_, _>>()?;
    Ok((line, nums))
}

pub fn parse_graph(text: &str) -> Result<Graph, IoError> {
    let mut lines = content_lines(text);
    let (_, h) = header(&mut lines, &["p", "edge"], 2)?;
    let (n, m) = (h[0], h[1]);
    let mut edges = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (line, words) in lines {
        if words[0] != "e" || words.len() != 3 {
            return Err(syntax(line, "expected `e <u> <v>`"));
        }
        let (u, v) = (vertex(line, words[1], n)?, vertex(line, words[2], n)?);
        if u == v {
            return Err(syntax(line, format!("self-loop on vertex {}", u + 1)));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(IoError::DuplicateEdge { line, u: u + 1, v: v + 1 });
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(IoError::CountMismatch {
            what: "edges",
            expected: m,
            found: edges.len(),
        });
    }
    Ok(Graph::new(n, edges)?)
}

pub fn serialize_graph(g: &Graph) -> String {
    let mut out = format!("p edge {} {}\n", g.n(), g.m());
    for &(u, v) in g.edges() {
        out += &format!("e {} {}\n", u + 1, v + 1);
    }
    out
}

pub fn parse_hypergraph(text: &str) -> Result<Hypergraph, IoError> {
    let mut lines = content_lines(text);
    let (_, h) = header(&mut lines, &["p", "hyp"], 2)?;
    let (n, m) = (h[0], h[1]);
    let mut edges = Vec::new();
    for (line, words) in lines {
        if words[0] != "h" || words.len() < 2 {
            return Err(syntax(line, "expected `h <v1> <v2> ...`"));
        }
        let e: Vec<usize> = words[1..].iter().map(|w| vertex(line, w, n)).collect::<Result<_, _>>()?;
        let mut sorted = e.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != e.len() {
            return Err(syntax(line, "repeated vertex in hyperedge"));
        }
        edges.push(e);
    }
    if edges.len() != m {
        return Err(IoError::CountMismatch {
            what: "hyperedges",
            expected: m,
            found: edges.len(),
        });
    }
    Ok(Hypergraph::new(n, edges)?)
}

pub fn serialize_hypergraph(h: &Hypergraph) -> String {
    let mut out = format!("p hyp {} {}\n", h.n(), h.m());
    for e in h.edges() {
        out += "h";
        for v in e {
            out += &format!(" {}", v + 1);
        }
        out += "\n";
    }
    out
}

/// Parses a decomposition and checks it against `g`.
pub fn parse_td(text: &str, g: &Graph) -> Result<TreeDecomposition, IoError> {
    let td = parse_td_unchecked(text)?;
    if td.bags.iter().flatten().any(|&v| v >= g.n()) {
        return Err(IoError::CountMismatch {
            what: "td vertex count",
            expected: g.n(),
            found: td.bags.iter().flatten().max().map_or(0, |v| v + 1),
        });
    }
    check_td(g, &td)?;
    Ok(td)
}

/// Syntax and header counts only.
pub fn parse_td_unchecked(text: &str) -> Result<TreeDecomposition, IoError> {
    let mut lines = content_lines(text);
    let (_, h) = header(&mut lines, &["s", "td"], 3)?;
    let (count, width1, n) = (h[0], h[1], h[2]);
    let mut bags: Vec<Option<Vec<usize>>> = vec![None; count];
    let mut tree = Vec::new();
    for (line, words) in lines {
        if words[0] == "b" {
            if words.len() < 2 {
                return Err(syntax(line, "expected `b <i> <v...>`"));
            }
            let i = num(line, words[1])?;
            if i == 0 || i > count {
                return Err(syntax(line, format!("bag id {i} outside 1..={count}")));
            }
            if bags[i - 1].is_some() {
                return Err(syntax(line, format!("bag {i} given twice")));
            }
            bags[i - 1] = Some(words[2..].iter().map(|w| vertex(line, w, n)).collect::<Result<_, _>>()?);
        } else {
            if words.len() != 2 {
                return Err(syntax(line, "expected `b ...` or a tree edge `<i> <j>`"));
            }
            let (i, j) = (num(line, words[0])?, num(line, words[1])?);
            if i == 0 || j == 0 || i > count || j > count {
                return Err(syntax(line, format!("tree edge ({i}, {j}) outside 1..={count}")));
            }
            tree.push((i - 1, j - 1));
        }
    }
    let bags: Vec<Vec<usize>> = bags
        .into_iter()
        .enumerate()
        .map(|(i, b)| b.ok_or(IoError::CountMismatch { what: "bags", expected: count, found: i }))
        .collect::<Result<_, _>>()?;
    let td = TreeDecomposition::new(bags, tree);
    let actual = td.bags.iter().map(Vec::len).max().unwrap_or(0);
    if actual != width1 {
        return Err(IoError::CountMismatch {
            what: "largest bag",
            expected: width1,
            found: actual,
        });
    }
    Ok(td)
}

pub fn serialize_td(td: &TreeDecomposition, n: usize) -> String {
    let width1 = td.bags.iter().map(Vec::len).max().unwrap_or(0);
    let mut out = format!("s td {} {} {}\n", td.bags.len(), width1, n);
    for (i, b) in td.bags.iter().enumerate() {
        out += &format!("b {}", i + 1);
        for v in b {
            out += &format!(" {}", v + 1);
        }
        out += "\n";
    }
    for &(i, j) in &td.tree_edges {
        out += &format!("{} {}\n", i + 1, j + 1);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Open(usize),
    Close(usize),
    Word(usize, String),
}

fn tokenize(lines: &[&str], first_line: usize) -> Vec<Token> {
    let mut out = Vec::new();
    for (i, l) in lines.iter().enumerate() {
        let line = first_line + i;
        if l.split_whitespace().next() == Some("c") {
            continue;
        }
        let mut word = String::new();
        for ch in l.chars() {
            if ch == '(' || ch == ')' || ch.is_whitespace() {
                if !word.is_empty() {
                    out.push(Token::Word(line, std::mem::take(&mut word)));
                }
                match ch {
                    '(' => out.push(Token::Open(line)),
                    ')' => out.push(Token::Close(line)),
                    _ => {}
                }
            } else {
                word.push(ch);
            }
        }
        if !word.is_empty() {
            out.push(Token::Word(line, word));
        }
    }
    out
}

/// Parses `k <budget>` followed by one s-expression.
pub fn parse_cwe(text: &str) -> Result<CwExpr, IoError> {
    let all: Vec<&str> = text.lines().collect();
    let mut line = 0;
    let k = loop {
        let head = all.get(line).ok_or(IoError::MissingHeader)?;
        line += 1;
        let words: Vec<&str> = head.split_whitespace().collect();
        match words.as_slice() {
            [] => continue,
            ["c", ..] => continue,
            ["k", b] => break num(line, b)?,
            _ => return Err(syntax(line, "expected header `k <budget>`")),
        }
    };
    let tokens = tokenize(&all[line..], line + 1);
    let mut expr = CwExpr {
        k,
        nodes: Vec::new(),
        root: 0,
    };
    // Each frame is an open list: its operator word, numeric arguments and child nodes.
    struct Frame {
        line: usize,
        words: Vec<(usize, String)>,
        kids: Vec<usize>,
    }
    let mut stack: Vec<Frame> = Vec::new();
    let mut root = None;
    let end_line = |t: Option<&Token>| match t {
        Some(Token::Open(l) | Token::Close(l) | Token::Word(l, _)) => *l,
        None => line,
    };
    for tok in &tokens {
        match tok {
            Token::Open(l) => {
                if root.is_some() {
                    return Err(syntax(*l, "trailing input after the expression"));
                }
                stack.push(Frame {
                    line: *l,
                    words: Vec::new(),
                    kids: Vec::new(),
                });
            }
            Token::Word(l, w) => match stack.last_mut() {
                Some(f) if f.kids.is_empty() => f.words.push((*l, w.clone())),
                Some(_) => return Err(syntax(*l, format!("unexpected `{w}` after a subexpression"))),
                None => return Err(syntax(*l, format!("unexpected `{w}` outside an expression"))),
            },
            Token::Close(l) => {
                let f = stack.pop().ok_or_else(|| syntax(*l, "unbalanced `)`"))?;
                let op = build_op(&f.words, &f.kids, f.line)?;
                let id = expr.push(op);
                match stack.last_mut() {
                    Some(parent) => parent.kids.push(id),
                    None => root = Some(id),
                }
            }
        }
    }
    if !stack.is_empty() {
        return Err(syntax(end_line(tokens.last()), "unbalanced `(`"));
    }
    expr.root = root.ok_or_else(|| syntax(line, "missing expression"))?;
    expr.validate()?;
    Ok(expr)
}

fn build_op(words: &[(usize, String)], kids: &[usize], line: usize) -> Result<CwOp, IoError> {
    let Some((_, name)) = words.first() else {
        return Err(syntax(line, "empty list"));
    };
    let args: Vec<usize> = words[1..].iter().map(|(l, w)| num(*l, w)).collect::<Result<_, _>>()?;
    let bad = || syntax(line, format!("wrong arguments for `{name}`"));
    Ok(match (name.as_str(), args.as_slice(), kids) {
        ("intro", [l], []) => CwOp::Intro(*l),
        ("union", [], [a, b]) => CwOp::Union(*a, *b),
        ("rename", [i, j], [c]) => CwOp::Rename {
            from: *i,
            to: *j,
            child: *c,
        },
        ("join", [i, j], [c]) => CwOp::Join { a: *i, b: *j, child: *c },
        ("intro" | "union" | "rename" | "join", ..) => return Err(bad()),
        _ => return Err(syntax(line, format!("unknown operator `{name}`"))),
    })
}

/// Writes `k <budget>` and the expression, one node per line, indented.
pub fn serialize_cwe(e: &CwExpr) -> String {
    let mut out = format!("k {}\n", e.k);
    // (node, depth, closing?)
    let mut stack = vec![(e.root, 0usize, false)];
    while let Some((x, depth, closing)) = stack.pop() {
        if closing {
            out += ")";
            continue;
        }
        if !out.ends_with('\n') {
            out += "\n";
        }
        out += &"  ".repeat(depth);
        match e.nodes[x] {
            CwOp::Intro(l) => {
                out += &format!("(intro {l})");
                continue;
            }
            CwOp::Union(..) => out += "(union",
            CwOp::Rename { from, to, .. } => out += &format!("(rename {from} {to}"),
            CwOp::Join { a, b, .. } => out += &format!("(join {a} {b}"),
        }
        stack.push((x, depth, true));
        for c in e.nodes[x].children().into_iter().rev() {
            stack.push((c, depth + 1, false));
        }
    }
    out += "\n";
    out
}

fn witness_ids(text: &str, m: usize) -> Result<Vec<usize>, IoError> {
    let mut out = Vec::new();
    for (line, words) in content_lines(text) {
        for w in words {
            let id = num(line, w)?;
            if id == 0 || id > m {
                return Err(syntax(line, format!("edge id {id} outside 1..={m}")));
            }
            out.push(id - 1);
        }
    }
    Ok(out)
}

/// Edge ordering witness; whether it is a permutation is left to the validator.
pub fn parse_edge_seq(text: &str, m: usize, mode: Mode) -> Result<EdgeSeq, IoError> {
    Ok(EdgeSeq {
        order: witness_ids(text, m)?,
        mode,
    })
}

pub fn serialize_edge_seq(s: &EdgeSeq) -> String {
    ids_line(&s.order)
}

fn ids_line(ids: &[usize]) -> String {
    let mut out = ids.iter().map(|e| (e + 1).to_string()).collect::<Vec<_>>().join(" ");
    out += "\n";
    out
}

pub fn parse_des(text: &str, g: &Graph) -> Result<DesSolution, IoError> {
    let lines: Vec<(usize, Vec<&str>)> = content_lines(text).collect();
    if let [(line, words)] = lines.as_slice() {
        if words[0] == "v" {
            if words.len() != 2 {
                return Err(syntax(*line, "expected `v <u>`"));
            }
            return Ok(DesSolution::single_vertex(vertex(*line, words[1], g.n())?));
        }
    }
    let ids = witness_ids(text, g.m())?;
    let mut sorted = ids.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != ids.len() {
        return Err(syntax(0, "edge listed twice"));
    }
    Ok(DesSolution::from_edges(g, ids))
}

pub fn serialize_des(d: &DesSolution) -> String {
    if d.e0.is_empty() {
        let v = d.v0.iter().next().copied().unwrap_or(0);
        return format!("v {}\n", v + 1);
    }
    ids_line(&d.e0.iter().copied().collect::<Vec<_>>())
}

pub fn parse_trace(text: &str) -> Result<KernelTrace, IoError> {
    Ok(serde_json::from_str(text)?)
}

pub fn serialize_trace(t: &KernelTrace) -> String {
    serde_json::to_string_pretty(t).expect("traces serialize") + "\n"
}
