//! The diff-friendly text format for temporal cliques.
//!
//! Line 1 is `tg 1 <n> <m> <simple|multi>`, followed by `m` lines of
//! `u v l1[,l2,...]` with 0-indexed vertices. Blank lines are ignored.

use std::fmt;

use tcspan::core::{
    build_simple_clique, EdgeId, Label, MultiLabelClique, SimpleClique, TemporalInstance,
};

/// A parse or validation failure, pointing at the offending line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormatError {
    pub line: usize,
    pub msg: String,
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.msg)
    }
}

impl std::error::Error for FormatError {}

fn fail<T>(line: usize, msg: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError { line, msg: msg.into() })
}

/// Either flavor of instance a file can hold.
#[derive(Debug, Clone)]
pub enum ParsedInstance {
    Simple(SimpleClique),
    Multi(MultiLabelClique),
}

impl ParsedInstance {
    pub fn n(&self) -> usize {
        match self {
            ParsedInstance::Simple(c) => c.n(),
            ParsedInstance::Multi(m) => m.n(),
        }
    }

    pub fn content_hash(&self) -> u64 {
        match self {
            ParsedInstance::Simple(c) => c.content_hash(),
            ParsedInstance::Multi(m) => m.content_hash(),
        }
    }
}

pub fn parse_instance(text: &str) -> Result<ParsedInstance, FormatError> {
    let mut lines = text.lines().enumerate();
    let Some((_, header)) = lines.next() else {
        return fail(1, "empty file; expected header `tg 1 <n> <m> <simple|multi>`");
    };
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 5 || toks[0] != "tg" {
        return fail(1, "header must be `tg 1 <n> <m> <simple|multi>`");
    }
    if toks[1] != "1" {
        return fail(1, format!("unsupported format version {:?}", toks[1]));
    }
    let n: usize = match toks[2].parse() {
        Ok(n) => n,
        Err(_) => return fail(1, format!("bad vertex count {:?}", toks[2])),
    };
    if n < 2 {
        return fail(1, format!("an instance needs at least two vertices, got {n}"));
    }
    let m: usize = match toks[3].parse() {
        Ok(m) => m,
        Err(_) => return fail(1, format!("bad edge count {:?}", toks[3])),
    };
    let multi = match toks[4] {
        "simple" => false,
        "multi" => true,
        other => return fail(1, format!("expected `simple` or `multi`, got {other:?}")),
    };

    let mut entries: Vec<(EdgeId, Vec<Label>)> = Vec::with_capacity(m);
    for (i, raw) in lines {
        let lineno = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let t: Vec<&str> = line.split_whitespace().collect();
        if t.len() != 3 {
            return fail(lineno, "expected `u v l1[,l2,...]`");
        }
        let u: usize = match t[0].parse() {
            Ok(u) => u,
            Err(_) => return fail(lineno, format!("bad vertex {:?}", t[0])),
        };
        let v: usize = match t[1].parse() {
            Ok(v) => v,
            Err(_) => return fail(lineno, format!("bad vertex {:?}", t[1])),
        };
        if u == v {
            return fail(lineno, format!("self-loop at vertex {u}"));
        }
        if u >= n || v >= n {
            return fail(lineno, format!("vertex out of range 0..{n}"));
        }
        let mut labels = Vec::new();
        for part in t[2].split(',') {
            let l: Label = match part.parse() {
                Ok(l) => l,
                Err(_) => return fail(lineno, format!("bad label {part:?}")),
            };
            if l == Label::MIN {
                return fail(lineno, format!("label {l} is reserved"));
            }
            labels.push(l);
        }
        if !multi && labels.len() != 1 {
            return fail(lineno, "simple instances carry exactly one label per edge");
        }
        entries.push((EdgeId::new(u, v), labels));
    }
    if entries.len() != m {
        return fail(1, format!("header announces {m} edges but the body has {}", entries.len()));
    }

    if multi {
        match MultiLabelClique::new(n, &entries) {
            Ok(mc) => Ok(ParsedInstance::Multi(mc)),
            Err(e) => fail(1, e.to_string()),
        }
    } else {
        let simple: Vec<(EdgeId, Label)> =
            entries.into_iter().map(|(e, ls)| (e, ls[0])).collect();
        match build_simple_clique(n, &simple) {
            Ok(c) => Ok(ParsedInstance::Simple(c)),
            Err(e) => fail(1, e.to_string()),
        }
    }
}

pub fn write_simple(c: &SimpleClique) -> String {
    let mut out = format!("tg 1 {} {} simple\n", c.n(), c.edge_count());
    for (e, l) in c.labeled_edges() {
        out.push_str(&format!("{} {} {}\n", e.u(), e.v(), l));
    }
    out
}

pub fn write_multi(m: &MultiLabelClique) -> String {
    let count = m.edges().count();
    let mut out = format!("tg 1 {} {} multi\n", m.n(), count);
    for e in m.edges() {
        let labels: Vec<String> = m.labels(e).iter().map(|l| l.to_string()).collect();
        out.push_str(&format!("{} {} {}\n", e.u(), e.v(), labels.join(",")));
    }
    out
}
