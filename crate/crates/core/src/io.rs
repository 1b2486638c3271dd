//! On-disk formats: canonical JSON documents, plain edge lists, colourings.
//!
//! Canonical documents look like
//!
//! ```text
//! {
//!   "kind": "linear-hypergraph",
//!   "n": 48,
//!   "k": 3,
//!   "offset": 1,
//!   "edges": [
//!     [0, 1, 44],
//!     ...
//!   ]
//! }
//! ```
//!
//! with edges sorted and each edge sorted, so writing is a function of the
//! object alone. Edge lists start with a header `p <kind> <n> <k> [offset]`
//! and carry one whitespace-separated tuple per line; `#` starts a comment.
//! Colourings list `u v c` per host edge followed by `colours <r> mode <m>`.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::Deserialize;

use crate::arrowing::ArrowMode;
use crate::colouring::EdgeColouring;
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, OrderedGraph};
use crate::hypergraph::{Hypergraph, LinearHypergraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Graph,
    OrderedGraph,
    LinearHypergraph,
    Hypergraph,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Graph => "graph",
            Kind::OrderedGraph => "ordered-graph",
            Kind::LinearHypergraph => "linear-hypergraph",
            Kind::Hypergraph => "hypergraph",
        }
    }

    fn is_graph(self) -> bool {
        matches!(self, Kind::Graph | Kind::OrderedGraph)
    }
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "graph" => Ok(Kind::Graph),
            "ordered-graph" => Ok(Kind::OrderedGraph),
            "linear-hypergraph" => Ok(Kind::LinearHypergraph),
            "hypergraph" => Ok(Kind::Hypergraph),
            other => Err(Error::invalid(format!("unknown kind {other:?}"))),
        }
    }
}

/// Anything the formats can hold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Object {
    Graph(Graph),
    OrderedGraph(OrderedGraph),
    Hypergraph {
        hypergraph: Hypergraph,
        linear: bool,
        /// Label of stored vertex 0, for constructions numbered from 1.
        offset: Option<usize>,
    },
}

impl Object {
    pub fn kind(&self) -> Kind {
        match self {
            Object::Graph(_) => Kind::Graph,
            Object::OrderedGraph(_) => Kind::OrderedGraph,
            Object::Hypergraph { linear: true, .. } => Kind::LinearHypergraph,
            Object::Hypergraph { linear: false, .. } => Kind::Hypergraph,
        }
    }

    pub fn linear(h: LinearHypergraph, offset: Option<usize>) -> Self {
        Object::Hypergraph {
            hypergraph: h.into_inner(),
            linear: true,
            offset,
        }
    }

    fn parts(&self) -> (usize, usize, Vec<Vec<usize>>, Option<usize>) {
        match self {
            Object::Graph(g) => (g.vertex_count(), 2, graph_tuples(g), None),
            Object::OrderedGraph(g) => (g.vertex_count(), 2, graph_tuples(g), None),
            Object::Hypergraph { hypergraph, offset, .. } => (
                hypergraph.vertex_count(),
                hypergraph.uniformity(),
                hypergraph.edges().to_vec(),
                *offset,
            ),
        }
    }

    /// The graph inside, for graph kinds.
    pub fn as_graph(&self) -> Option<&Graph> {
        match self {
            Object::Graph(g) => Some(g),
            Object::OrderedGraph(g) => Some(g.graph()),
            Object::Hypergraph { .. } => None,
        }
    }

    pub fn as_hypergraph(&self) -> Option<&Hypergraph> {
        match self {
            Object::Hypergraph { hypergraph, .. } => Some(hypergraph),
            _ => None,
        }
    }
}

fn graph_tuples(g: &Graph) -> Vec<Vec<usize>> {
    g.edges().iter().map(|e| vec![e.lo(), e.hi()]).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    EdgeList,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "edge-list" | "edgelist" => Ok(Format::EdgeList),
            other => Err(Error::invalid(format!("unknown format {other:?}"))),
        }
    }
}

pub fn write_object(obj: &Object, format: Format) -> String {
    match format {
        Format::Json => write_json(obj),
        Format::EdgeList => write_edge_list(obj),
    }
}

/// Reads either format, telling them apart by the first non-blank byte.
pub fn read_object(text: &str) -> Result<Object> {
    if text.trim_start().starts_with('{') {
        read_json(text)
    } else {
        read_edge_list(text)
    }
}

fn join(t: &[usize], sep: &str) -> String {
    t.iter().map(usize::to_string).collect::<Vec<_>>().join(sep)
}

fn write_json(obj: &Object) -> String {
    let (n, k, edges, offset) = obj.parts();
    let mut s = String::new();
    let _ = writeln!(s, "{{\n  \"kind\": \"{}\",\n  \"n\": {n},", obj.kind().name());
    if !obj.kind().is_graph() {
        let _ = writeln!(s, "  \"k\": {k},");
    }
    if let Some(o) = offset {
        let _ = writeln!(s, "  \"offset\": {o},");
    }
    if edges.is_empty() {
        s.push_str("  \"edges\": []\n}\n");
        return s;
    }
    s.push_str("  \"edges\": [\n");
    for (i, e) in edges.iter().enumerate() {
        let comma = if i + 1 < edges.len() { "," } else { "" };
        let _ = writeln!(s, "    [{}]{comma}", join(e, ", "));
    }
    s.push_str("  ]\n}\n");
    s
}

fn write_edge_list(obj: &Object) -> String {
    let (n, k, edges, offset) = obj.parts();
    let mut s = format!("p {} {n} {k}", obj.kind().name());
    if let Some(o) = offset {
        let _ = write!(s, " {o}");
    }
    s.push('\n');
    for e in &edges {
        s.push_str(&join(e, " "));
        s.push('\n');
    }
    s
}

fn token_at(text: &str, offset: usize) -> String {
    let bytes = text.as_bytes();
    let delim = |b: u8| b.is_ascii_whitespace() || b",:[]{}".contains(&b);
    let mut start = offset.min(bytes.len());
    while start > 0 && !delim(bytes[start - 1]) {
        start -= 1;
    }
    let mut end = offset.min(bytes.len());
    while end < bytes.len() && !delim(bytes[end]) {
        end += 1;
    }
    if start == end && end < bytes.len() {
        end += 1;
    }
    String::from_utf8_lossy(&bytes[start..end]).into_owned()
}

fn parse_error(text: &str, offset: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        message: message.into(),
        token: token_at(text, offset),
        offset,
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonDoc {
    kind: String,
    n: usize,
    k: Option<usize>,
    offset: Option<usize>,
    edges: Vec<Vec<usize>>,
}

/// Byte offsets of the inner arrays of the `"edges"` field.
fn edge_offsets(text: &str) -> Vec<usize> {
    let Some(key) = text.find("\"edges\"") else {
        return Vec::new();
    };
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut depth = 0;
    for (i, &b) in bytes.iter().enumerate().skip(key) {
        match b {
            b'[' => {
                depth += 1;
                if depth == 2 {
                    out.push(i);
                }
            }
            b']' => {
                depth -= 1;
                if depth == 0 {
                    break;
                }
            }
            _ => {}
        }
    }
    out
}

fn read_json(text: &str) -> Result<Object> {
    let doc: JsonDoc = serde_json::from_str(text).map_err(|e| {
        let line_start: usize = text.split_inclusive('\n').take(e.line().saturating_sub(1)).map(str::len).sum();
        let offset = (line_start + e.column().saturating_sub(1)).min(text.len());
        parse_error(text, offset, e.to_string())
    })?;
    let kind_at = text.find("\"kind\"").unwrap_or(0);
    let kind: Kind = doc
        .kind
        .parse()
        .map_err(|_| parse_error(text, text[kind_at..].find(&doc.kind).map_or(kind_at, |p| kind_at + p), "unknown kind"))?;
    let k = match (kind.is_graph(), doc.k) {
        (true, None) | (true, Some(2)) => 2,
        (true, Some(_)) => return Err(parse_error(text, text.find("\"k\"").unwrap_or(0), "graphs have k = 2")),
        (false, Some(k)) => k,
        (false, None) => return Err(parse_error(text, kind_at, "hypergraphs need a \"k\" field")),
    };
    if doc.offset.is_some() && kind.is_graph() {
        return Err(parse_error(text, text.find("\"offset\"").unwrap_or(0), "offsets apply to hypergraphs only"));
    }
    let offsets = edge_offsets(text);
    let at = |i: usize| offsets.get(i).copied().unwrap_or(0);
    build(kind, doc.n, k, doc.offset, doc.edges.into_iter().enumerate().map(|(i, e)| (at(i), e)), text)
}

fn build(
    kind: Kind,
    n: usize,
    k: usize,
    offset: Option<usize>,
    edges: impl Iterator<Item = (usize, Vec<usize>)>,
    text: &str,
) -> Result<Object> {
    let mut seen = BTreeSet::new();
    let mut list = Vec::new();
    for (at, mut e) in edges {
        if e.len() != k {
            return Err(parse_error(text, at, format!("edge has {} vertices, expected {k}", e.len())));
        }
        if let Some(&v) = e.iter().find(|&&v| v >= n) {
            return Err(parse_error(text, at, format!("vertex {v} outside 0..{n}")));
        }
        e.sort_unstable();
        if e.windows(2).any(|w| w[0] == w[1]) {
            return Err(parse_error(text, at, "edge repeats a vertex"));
        }
        if !seen.insert(e.clone()) {
            return Err(parse_error(text, at, "repeated edge"));
        }
        list.push(e);
    }
    Ok(match kind {
        Kind::Graph => Object::Graph(Graph::new(n, list.iter().map(|e| Edge::new(e[0], e[1])))?),
        Kind::OrderedGraph => Object::OrderedGraph(OrderedGraph::new(Graph::new(n, list.iter().map(|e| Edge::new(e[0], e[1])))?)),
        Kind::Hypergraph => Object::Hypergraph {
            hypergraph: Hypergraph::new(n, k, list)?,
            linear: false,
            offset,
        },
        Kind::LinearHypergraph => {
            let h = LinearHypergraph::new(n, k, list).map_err(|e| parse_error(text, 0, e.to_string()))?;
            Object::linear(h, offset)
        }
    })
}

/// Content lines with the byte offset where each starts; comments removed.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut start = 0;
    text.split_inclusive('\n').filter_map(move |raw| {
        let at = start;
        start += raw.len();
        let line = raw.split('#').next().unwrap_or("");
        (!line.trim().is_empty()).then_some((at, line))
    })
}

/// Whitespace-separated tokens with their byte offsets.
fn tokens(at: usize, line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut pos = 0;
    for tok in line.split_whitespace() {
        let rel = line[pos..].find(tok).expect("token comes from the line") + pos;
        out.push((at + rel, tok));
        pos = rel + tok.len();
    }
    out
}

fn number(text: &str, (at, tok): (usize, &str)) -> Result<usize> {
    tok.parse().map_err(|_| parse_error(text, at, "expected a non-negative integer"))
}

fn read_edge_list(text: &str) -> Result<Object> {
    let mut lines = content_lines(text);
    let (hat, header) = lines.next().ok_or_else(|| parse_error(text, 0, "missing header line"))?;
    let head = tokens(hat, header);
    if head[0].1 != "p" {
        return Err(parse_error(text, head[0].0, "header must start with p"));
    }
    if head.len() < 4 || head.len() > 5 {
        return Err(parse_error(text, hat, "header must read p <kind> <n> <k> [offset]"));
    }
    let kind: Kind = head[1].1.parse().map_err(|_| parse_error(text, head[1].0, "unknown kind"))?;
    let n = number(text, head[2])?;
    let k = number(text, head[3])?;
    if kind.is_graph() && k != 2 {
        return Err(parse_error(text, head[3].0, "graphs have k = 2"));
    }
    let offset = head.get(4).map(|&t| number(text, t)).transpose()?;
    if offset.is_some() && kind.is_graph() {
        return Err(parse_error(text, head[4].0, "offsets apply to hypergraphs only"));
    }
    let mut edges = Vec::new();
    for (at, line) in lines {
        let toks = tokens(at, line);
        let e = toks.iter().map(|&t| number(text, t)).collect::<Result<Vec<_>>>()?;
        edges.push((toks[0].0, e));
    }
    build(kind, n, k, offset, edges.into_iter(), text)
}

pub fn write_colouring(c: &EdgeColouring, mode: ArrowMode) -> String {
    let mut s = String::new();
    for (e, col) in c.host().edges().iter().zip(c.colours()) {
        let _ = writeln!(s, "{} {} {col}", e.lo(), e.hi());
    }
    let _ = writeln!(s, "colours {} mode {mode}", c.colour_count());
    s
}

/// Reads a colouring of `host`; every host edge must appear exactly once.
pub fn read_colouring(text: &str, host: &Graph) -> Result<(EdgeColouring, ArrowMode)> {
    let mut colour_of = vec![usize::MAX; host.edge_count()];
    let mut trailer = None;
    for (at, line) in content_lines(text) {
        let toks = tokens(at, line);
        if trailer.is_some() {
            return Err(parse_error(text, toks[0].0, "content after the trailer"));
        }
        if toks[0].1 == "colours" {
            if toks.len() != 4 || toks[2].1 != "mode" {
                return Err(parse_error(text, toks[0].0, "trailer must read colours <r> mode <mode>"));
            }
            let r = number(text, toks[1])?;
            let mode: ArrowMode = toks[3].1.parse().map_err(|_| parse_error(text, toks[3].0, "unknown mode"))?;
            trailer = Some((r, mode));
            continue;
        }
        if toks.len() != 3 {
            return Err(parse_error(text, toks[0].0, "expected u v colour"));
        }
        let (u, v, c) = (number(text, toks[0])?, number(text, toks[1])?, number(text, toks[2])?);
        let i = (u != v)
            .then(|| host.edge_index(Edge::new(u, v)))
            .flatten()
            .ok_or_else(|| parse_error(text, toks[0].0, format!("{u} {v} is not a host edge")))?;
        if colour_of[i] != usize::MAX {
            return Err(parse_error(text, toks[0].0, "edge coloured twice"));
        }
        colour_of[i] = c;
    }
    let (r, mode) = trailer.ok_or_else(|| parse_error(text, text.len(), "missing trailer colours <r> mode <mode>"))?;
    if let Some(i) = colour_of.iter().position(|&c| c == usize::MAX) {
        return Err(Error::invalid(format!("edge {} is not coloured", host.edges()[i])));
    }
    if let Some(i) = colour_of.iter().position(|&c| c >= r) {
        return Err(Error::invalid(format!("edge {} uses colour {} of only {r}", host.edges()[i], colour_of[i])));
    }
    Ok((EdgeColouring::new(host.clone(), colour_of, r)?, mode))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::sum_hypergraph;
    use proptest::prelude::*;

    fn offset_of(err: Error) -> (usize, String) {
        match err {
            Error::Parse { offset, token, .. } => (offset, token),
            other => panic!("not a parse error: {other}"),
        }
    }

    #[test]
    fn json_layout() {
        let g = Object::Graph(Graph::path(3));
        assert_eq!(
            write_object(&g, Format::Json),
            "{\n  \"kind\": \"graph\",\n  \"n\": 3,\n  \"edges\": [\n    [0, 1],\n    [1, 2]\n  ]\n}\n"
        );
        assert_eq!(write_object(&g, Format::EdgeList), "p graph 3 2\n0 1\n1 2\n");
        let e = Object::Graph(Graph::empty(2));
        assert_eq!(read_object(&write_object(&e, Format::Json)).unwrap(), e);
    }

    #[test]
    fn sum_hypergraph_round_trips() {
        let s = sum_hypergraph(48).unwrap();
        let obj = Object::linear(s.hypergraph, Some(1));
        for f in [Format::Json, Format::EdgeList] {
            let text = write_object(&obj, f);
            let back = read_object(&text).unwrap();
            assert_eq!(back, obj);
            assert_eq!(write_object(&back, f), text);
        }
    }

    #[test]
    fn diagnostics_name_token_and_offset() {
        let text = "p graph 3 2\n0 1\n1 x\n";
        assert_eq!(offset_of(read_object(text).unwrap_err()), (18, "x".into()));
        let text = "p graph 3 2\n0 1\n1 7\n";
        assert_eq!(offset_of(read_object(text).unwrap_err()), (16, "1".into()));
        let text = "p snark 3 2\n";
        assert_eq!(offset_of(read_object(text).unwrap_err()), (2, "snark".into()));
        let text = "{\n  \"kind\": \"graph\",\n  \"n\": 3,\n  \"edges\": [[0, 1], [1, 1]]\n}\n";
        let (at, _) = offset_of(read_object(text).unwrap_err());
        assert_eq!(&text[at..at + 6], "[1, 1]");
        let text = "{\"kind\": \"graph\", \"n\": 3, \"edges\": [[0, 1]], \"colour\": 2}";
        let (at, tok) = offset_of(read_object(text).unwrap_err());
        assert!(at > 40, "{at} {tok}");
        let text = "p linear-hypergraph 4 3\n0 1 2\n0 1 3\n";
        assert!(matches!(read_object(text).unwrap_err(), Error::Parse { .. }));
    }

    #[test]
    fn colourings() {
        let g = Graph::complete(3);
        let c = EdgeColouring::new(g.clone(), vec![0, 1, 0], 2).unwrap();
        let text = write_colouring(&c, ArrowMode::Nni);
        assert_eq!(text, "0 1 0\n0 2 1\n1 2 0\ncolours 2 mode nni\n");
        assert_eq!(read_colouring(&text, &g).unwrap(), (c, ArrowMode::Nni));
        assert!(read_colouring("0 1 0\n0 2 1\ncolours 2 mode nni\n", &g).is_err());
        let err = read_colouring("0 1 0\n0 3 1\n1 2 0\ncolours 2 mode nni\n", &g).unwrap_err();
        assert_eq!(offset_of(err), (6, "0".into()));
        assert!(read_colouring("0 1 0\n0 2 1\n1 2 0\n", &g).is_err());
    }

    proptest! {
        #[test]
        fn graphs_round_trip(n in 0usize..12, mask in any::<u64>(), ordered in any::<bool>()) {
            let edges: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
            let chosen = edges.iter().enumerate().filter(|(i, _)| mask >> (i % 64) & 1 == 1).map(|(_, &e)| e);
            let g = Graph::new(n, chosen).unwrap();
            let obj = if ordered { Object::OrderedGraph(OrderedGraph::new(g)) } else { Object::Graph(g) };
            for f in [Format::Json, Format::EdgeList] {
                let text = write_object(&obj, f);
                prop_assert_eq!(read_object(&text).unwrap(), obj.clone());
            }
        }
    }
}
