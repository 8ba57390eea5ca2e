//! The text format for bicolored trivalent ribbon graphs.
//!
//! One statement per line, `#` starts a comment:
//!
//! ```text
//! vertex <name> <+|-> : <h1> <h2> <h3>    # cyclic order as listed
//! edge <hA> - <hB>
//! ```
//!
//! Every half-edge name must appear in exactly one vertex line and exactly
//! one edge line. Parsing then rendering then parsing yields an identical
//! graph.

use std::collections::HashMap;
use std::fmt::Write as _;

use turaev::ribbon::{RibbonGraph, Vertex, Violation};
use turaev::ring::Sign;

/// Where a token sits in the source: 1-based line and column.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DocError {
    Syntax { line: usize, col: usize, message: String },
    Semantic { message: String },
}

impl std::fmt::Display for DocError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DocError::Syntax { line, col, message } => {
                write!(f, "syntax error at line {line}, column {col}: {message}")
            }
            DocError::Semantic { message } => write!(f, "semantic error: {message}"),
        }
    }
}

impl std::error::Error for DocError {}

/// A parsed graph file: the source, the graph, and where each name was
/// declared (for error messages that point back into the file).
#[derive(Clone, Debug)]
pub struct GraphDocument {
    pub source: String,
    pub graph: RibbonGraph,
    pub half_edge_spans: HashMap<String, Span>,
    pub vertex_spans: HashMap<String, Span>,
}

/// Tokens of one line with their 1-based starting columns.
fn tokens(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut col = 0;
    for piece in text.split_inclusive(char::is_whitespace) {
        let token = piece.trim_end_matches(char::is_whitespace);
        if !token.is_empty() {
            out.push((col + 1, token));
        }
        col += piece.chars().count();
    }
    out
}

pub fn parse_graph(text: &str) -> Result<GraphDocument, DocError> {
    let mut vertex_rows: Vec<(String, Sign, Vec<String>, Span)> = Vec::new();
    let mut edge_rows: Vec<(String, Span, String, Span)> = Vec::new();
    let mut vertex_spans: HashMap<String, Span> = HashMap::new();
    let mut half_edge_spans: HashMap<String, Span> = HashMap::new();

    for (idx, raw) in text.lines().enumerate() {
        let number = idx + 1;
        let content = match raw.find('#') {
            Some(cut) => &raw[..cut],
            None => raw,
        };
        let tokens = tokens(content);
        if tokens.is_empty() {
            continue;
        }
        let syntax = |col: usize, message: String| DocError::Syntax {
            line: number,
            col,
            message,
        };
        let (kw_col, keyword) = tokens[0];
        match keyword {
            "vertex" => {
                let (name_col, name) = *tokens
                    .get(1)
                    .ok_or_else(|| syntax(content.len() + 1, "expected a vertex name".into()))?;
                let (sign_col, sign_tok) = *tokens
                    .get(2)
                    .ok_or_else(|| syntax(content.len() + 1, "expected + or -".into()))?;
                let sign = match sign_tok {
                    "+" => Sign::Plus,
                    "-" => Sign::Minus,
                    other => {
                        return Err(syntax(sign_col, format!("expected + or -, found {other:?}")))
                    }
                };
                let (colon_col, colon) = *tokens
                    .get(3)
                    .ok_or_else(|| syntax(content.len() + 1, "expected ':'".into()))?;
                if colon != ":" {
                    return Err(syntax(colon_col, format!("expected ':', found {colon:?}")));
                }
                let span = Span { line: number, col: name_col };
                if let Some(first) = vertex_spans.get(name) {
                    return Err(DocError::Semantic {
                        message: format!(
                            "vertex {name} declared twice (line {} and line {number})",
                            first.line
                        ),
                    });
                }
                vertex_spans.insert(name.to_string(), span);
                let mut halves = Vec::new();
                for &(col, h) in &tokens[4..] {
                    if let Some(first) = half_edge_spans.get(h) {
                        return Err(DocError::Semantic {
                            message: format!(
                                "half-edge {h} listed twice (line {} and line {number})",
                                first.line
                            ),
                        });
                    }
                    half_edge_spans.insert(h.to_string(), Span { line: number, col });
                    halves.push(h.to_string());
                }
                vertex_rows.push((name.to_string(), sign, halves, span));
            }
            "edge" => {
                let (a_col, a) = *tokens
                    .get(1)
                    .ok_or_else(|| syntax(content.len() + 1, "expected a half-edge name".into()))?;
                let (dash_col, dash) = *tokens
                    .get(2)
                    .ok_or_else(|| syntax(content.len() + 1, "expected '-'".into()))?;
                if dash != "-" {
                    return Err(syntax(dash_col, format!("expected '-', found {dash:?}")));
                }
                let (b_col, b) = *tokens
                    .get(3)
                    .ok_or_else(|| syntax(content.len() + 1, "expected a half-edge name".into()))?;
                if let Some(&(col, extra)) = tokens.get(4) {
                    return Err(syntax(col, format!("unexpected trailing token {extra:?}")));
                }
                edge_rows.push((
                    a.to_string(),
                    Span { line: number, col: a_col },
                    b.to_string(),
                    Span { line: number, col: b_col },
                ));
            }
            other => {
                return Err(syntax(
                    kw_col,
                    format!("expected 'vertex' or 'edge', found {other:?}"),
                ));
            }
        }
    }

    // assign ids in order of appearance in vertex lines
    let mut id_of: HashMap<&str, usize> = HashMap::new();
    let mut names_in_order: Vec<String> = Vec::new();
    for (_, _, halves, _) in &vertex_rows {
        for h in halves {
            id_of.insert(h.as_str(), names_in_order.len());
            names_in_order.push(h.clone());
        }
    }

    let total = names_in_order.len();
    let mut pairing: Vec<Option<usize>> = vec![None; total];
    for (a, a_span, b, _) in &edge_rows {
        let &ia = id_of.get(a.as_str()).ok_or_else(|| DocError::Semantic {
            message: format!(
                "edge line {} names half-edge {a}, which no vertex declares",
                a_span.line
            ),
        })?;
        let &ib = id_of.get(b.as_str()).ok_or_else(|| DocError::Semantic {
            message: format!(
                "edge line {} names half-edge {b}, which no vertex declares",
                a_span.line
            ),
        })?;
        for (h, name) in [(ia, a), (ib, b)] {
            if pairing[h].is_some() {
                return Err(DocError::Semantic {
                    message: format!(
                        "half-edge {name} paired twice (second time at line {})",
                        a_span.line
                    ),
                });
            }
            // an edge from a half-edge to itself fills the slot once and the
            // involution check below reports it
            if ia == ib {
                break;
            }
        }
        pairing[ia] = Some(ib);
        pairing[ib] = Some(ia);
    }
    for (h, slot) in pairing.iter().enumerate() {
        if slot.is_none() {
            let name = &names_in_order[h];
            let declared = half_edge_spans[name.as_str()];
            return Err(DocError::Semantic {
                message: format!(
                    "half-edge {name} (declared at line {}, column {}) appears in no edge line",
                    declared.line, declared.col
                ),
            });
        }
    }

    // trivalence first: it has a dedicated message
    for (name, _, halves, span) in &vertex_rows {
        if halves.len() != 3 {
            return Err(DocError::Semantic {
                message: format!(
                    "trivalent required: vertex {name} (line {}) has {} half-edges",
                    span.line,
                    halves.len()
                ),
            });
        }
    }

    let vertices: Vec<Vertex> = vertex_rows
        .iter()
        .map(|(_, sign, halves, _)| Vertex {
            color: *sign,
            half_edges: halves.iter().map(|h| id_of[h.as_str()]).collect(),
        })
        .collect();
    let vertex_names: Vec<String> = vertex_rows.iter().map(|(n, ..)| n.clone()).collect();
    let graph = RibbonGraph::new(
        vertices,
        pairing.into_iter().map(|p| p.expect("checked above")).collect(),
    )
    .with_names(vertex_names, names_in_order);

    let violations = graph.validate();
    if !violations.is_empty() {
        let message = violations
            .iter()
            .map(render_violation)
            .collect::<Vec<_>>()
            .join("; ");
        return Err(DocError::Semantic { message });
    }

    Ok(GraphDocument {
        source: text.to_string(),
        graph,
        half_edge_spans,
        vertex_spans,
    })
}

fn render_violation(v: &Violation) -> String {
    match v {
        Violation::NotTrivalent { vertex, valence } => {
            format!("trivalent required: vertex index {vertex} has valence {valence}")
        }
        other => other.to_string(),
    }
}

/// Canonical rendering; `parse_graph(render(g))` reproduces `g` exactly.
pub fn render(g: &RibbonGraph) -> String {
    let mut out = String::new();
    for (v, vertex) in g.vertices().iter().enumerate() {
        let sign = match vertex.color {
            Sign::Plus => "+",
            Sign::Minus => "-",
        };
        let halves: Vec<&str> = vertex.half_edges.iter().map(|&h| g.half_edge_name(h)).collect();
        writeln!(out, "vertex {} {} : {}", g.vertex_name(v), sign, halves.join(" ")).unwrap();
    }
    for (a, b) in g.edges() {
        writeln!(out, "edge {} - {}", g.half_edge_name(a), g.half_edge_name(b)).unwrap();
    }
    out
}

/// Resolve `--cut` input: either a half-edge name or `nameA-nameB`.
pub fn resolve_cut(g: &RibbonGraph, spec: &str) -> Result<(usize, usize), String> {
    let by_name = |name: &str| -> Option<usize> {
        (0..g.half_edge_count()).find(|&h| g.half_edge_name(h) == name)
    };
    if let Some(h) = by_name(spec) {
        let p = g.pairing(h);
        return Ok((h.min(p), h.max(p)));
    }
    if let Some((a, b)) = spec.split_once('-') {
        let ha = by_name(a.trim())
            .ok_or_else(|| format!("unknown half-edge {:?}", a.trim()))?;
        let hb = by_name(b.trim())
            .ok_or_else(|| format!("unknown half-edge {:?}", b.trim()))?;
        if g.pairing(ha) != hb {
            return Err(format!("{spec:?} is not an edge of the graph"));
        }
        return Ok((ha.min(hb), ha.max(hb)));
    }
    Err(format!("unknown half-edge {spec:?}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    const THETA: &str = "vertex v1 + : a b c\nvertex v2 + : d e f\nedge a - d\nedge b - f\nedge c - e\n";

    #[test]
    fn theta_document_parses() {
        let doc = parse_graph(THETA).unwrap();
        assert_eq!(doc.graph.vertex_count(), 2);
        assert_eq!(doc.graph.edges().len(), 3);
        assert_eq!(doc.graph.invariants().face_count, 3);
        assert_eq!(doc.half_edge_spans["d"], Span { line: 2, col: 15 });
    }

    #[test]
    fn parse_render_parse_is_the_identity() {
        let doc = parse_graph(THETA).unwrap();
        let rendered = render(&doc.graph);
        let again = parse_graph(&rendered).unwrap();
        assert_eq!(again.graph, doc.graph);
        // and rendering is idempotent text-wise
        assert_eq!(render(&again.graph), rendered);
    }

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let text = format!("# theta graph\n\n{THETA}# trailing\n");
        let doc = parse_graph(&text).unwrap();
        assert_eq!(doc.graph.vertex_count(), 2);
        let inline = "vertex v1 + : a b c # rotation\nvertex v2 + : d e f\nedge a - d\nedge b - f\nedge c - e\n";
        assert_eq!(parse_graph(inline).unwrap().graph, doc.graph);
    }

    #[test]
    fn syntax_errors_carry_line_and_column() {
        let err = parse_graph("vertex v1 + : a b c\nvertex v2 * : d e f\n").unwrap_err();
        assert_eq!(
            err,
            DocError::Syntax {
                line: 2,
                col: 11,
                message: "expected + or -, found \"*\"".into()
            }
        );
        let err = parse_graph("vertx v1 + : a b c\n").unwrap_err();
        assert!(matches!(err, DocError::Syntax { line: 1, col: 1, .. }));
        let err = parse_graph("vertex v1 + : a b c\nedge a = b\n").unwrap_err();
        assert!(matches!(err, DocError::Syntax { line: 2, col: 8, .. }));
    }

    #[test]
    fn double_pairing_is_a_semantic_error() {
        let text = "vertex v1 + : a b c\nvertex v2 + : d e f\nedge a - d\nedge a - e\nedge b - f\nedge c - e\n";
        let err = parse_graph(text).unwrap_err();
        match err {
            DocError::Semantic { message } => assert!(message.contains("paired twice"), "{message}"),
            other => panic!("expected semantic error, got {other:?}"),
        }
    }

    #[test]
    fn two_half_edge_vertices_demand_trivalence() {
        let text = "vertex v1 + : a b\nvertex v2 + : c d\nedge a - c\nedge b - d\n";
        let err = parse_graph(text).unwrap_err();
        match err {
            DocError::Semantic { message } => {
                assert!(message.contains("trivalent required"), "{message}")
            }
            other => panic!("expected semantic error, got {other:?}"),
        }
    }

    #[test]
    fn unpaired_and_unknown_half_edges_are_reported() {
        let err = parse_graph("vertex v1 + : a b c\nedge a - b\n").unwrap_err();
        match err {
            DocError::Semantic { message } => {
                assert!(message.contains("appears in no edge line"), "{message}")
            }
            other => panic!("expected semantic error, got {other:?}"),
        }
        let err = parse_graph("vertex v1 + : a b c\nedge a - z\n").unwrap_err();
        match err {
            DocError::Semantic { message } => {
                assert!(message.contains("no vertex declares"), "{message}")
            }
            other => panic!("expected semantic error, got {other:?}"),
        }
    }

    #[test]
    fn fixture_graphs_render_to_their_files() {
        // files whose half-edge ids appear in ascending order: the parsed
        // graph is structurally identical to the library fixture
        let identity_fixtures = [
            ("theta.graph", turaev::samples::theta()),
            ("prism.graph", turaev::samples::prism()),
            ("sphere8.graph", turaev::samples::sphere8()),
        ];
        for (file, graph) in identity_fixtures {
            let path = format!("{}/fixtures/{file}", env!("CARGO_MANIFEST_DIR"));
            let text = std::fs::read_to_string(&path).unwrap();
            let doc = parse_graph(&text).unwrap();
            assert_eq!(doc.graph, graph, "{file} drifted from the library fixture");
            assert_eq!(render(&graph), text, "{file} is not in canonical form");
        }
        // the mirror file lists rotations in reversed name order, so parsing
        // relabels ids; the byte-level golden still pins it to the library
        let mirror = turaev::samples::prism().mirror_recolored();
        let path = format!("{}/fixtures/prism_mirror.graph", env!("CARGO_MANIFEST_DIR"));
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(render(&mirror), text, "prism_mirror.graph is not in canonical form");
        let doc = parse_graph(&text).unwrap();
        assert_eq!(doc.graph.invariants(), mirror.invariants());
        // relabeled ids still describe the same Legendrian
        let a = turaev::mesh::legendrian_turaev_torsion(&doc.graph).unwrap();
        let b = turaev::mesh::legendrian_turaev_torsion(&mirror).unwrap();
        assert!(a.tau.same_class(&b.tau));
        // and one more pass through the renderer is a fixed point
        let normalized = render(&doc.graph);
        let again = parse_graph(&normalized).unwrap();
        assert_eq!(again.graph, doc.graph);
        assert_eq!(render(&again.graph), normalized);
    }

    #[test]
    fn cut_specs_resolve_by_half_edge_or_pair() {
        let g = turaev::samples::sphere8();
        assert_eq!(resolve_cut(&g, "h19").unwrap(), (19, 23));
        assert_eq!(resolve_cut(&g, "h23").unwrap(), (19, 23));
        assert_eq!(resolve_cut(&g, "h19-h23").unwrap(), (19, 23));
        assert_eq!(resolve_cut(&g, "h23 - h19").unwrap(), (19, 23));
        assert!(resolve_cut(&g, "h19-h22").is_err());
        assert!(resolve_cut(&g, "nope").is_err());
    }
}
