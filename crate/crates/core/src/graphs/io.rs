//! Edge-list text format and CSV export of ball statistics.
//!
//! ```text
//! n m root
//! u v [label orient]
//! ```
//!
//! Vertices are 0-based. `orient` is `+` for an edge read along its
//! generator and `-` against it.

use std::fmt::Write as _;

use super::{Edge, EdgeLabel, LocalStatistics, RootedGraph};
use crate::error::{Error, Result};

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

pub fn parse_edge_list(text: &str) -> Result<RootedGraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
    let head: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| parse_err(hl, format!("bad integer {t:?}"))))
        .collect::<Result<_>>()?;
    let [n, m, root] = head[..] else {
        return Err(parse_err(hl, "header must be `n m root`"));
    };
    let mut edges = Vec::with_capacity(m);
    for (ln, line) in lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        let int = |t: &str| t.parse::<usize>().map_err(|_| parse_err(ln, format!("bad integer {t:?}")));
        let label = match toks.len() {
            2 => None,
            4 => {
                let inverse = match toks[3] {
                    "+" => false,
                    "-" => true,
                    o => return Err(parse_err(ln, format!("orientation must be + or -, got {o:?}"))),
                };
                Some(EdgeLabel { generator: int(toks[2])?, inverse })
            }
            _ => return Err(parse_err(ln, "edge line must be `u v` or `u v label orient`")),
        };
        edges.push(Edge { u: int(toks[0])?, v: int(toks[1])?, label });
    }
    if edges.len() != m {
        return Err(parse_err(hl, format!("header announces {m} edges, found {}", edges.len())));
    }
    RootedGraph::new(n, edges, root)
}

pub fn write_edge_list(g: &RootedGraph) -> String {
    let mut out = format!("{} {} {}\n", g.vertex_count(), g.edge_count(), g.root());
    for e in g.edges() {
        match e.label {
            Some(l) => {
                let o = if l.inverse { '-' } else { '+' };
                writeln!(out, "{} {} {} {}", e.u, e.v, l.generator, o).expect("string write");
            }
            None => writeln!(out, "{} {}", e.u, e.v).expect("string write"),
        }
    }
    out
}

/// CSV with columns `certificate_hex,frequency`, sorted by certificate.
pub fn write_statistics_csv(stats: &LocalStatistics) -> String {
    let mut out = String::from("certificate_hex,frequency\n");
    for (cert, f) in &stats.distribution {
        let hex: String = cert.iter().map(|b| format!("{b:02x}")).collect();
        writeln!(out, "{hex},{f:.17e}").expect("string write");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::ball_statistics;

    #[test]
    fn edge_list_round_trip_with_labels() {
        let text = "3 3 1\n0 1 0 +\n1 2 1 -\n2 2\n";
        let g = parse_edge_list(text).unwrap();
        assert_eq!(g.root(), 1);
        assert_eq!(g.degree(2), 3);
        assert_eq!(write_edge_list(&g), text);
    }

    #[test]
    fn edge_list_errors() {
        assert!(matches!(parse_edge_list("2 1 0\n0 5\n"), Err(Error::InvalidVertex { vertex: 5, .. })));
        assert!(matches!(parse_edge_list("2 2 0\n0 1\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_edge_list("2 1 0\n0 1 3 x\n"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn statistics_csv_has_header_and_rows() {
        let csv = write_statistics_csv(&ball_statistics(&RootedGraph::path(4), 1));
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], "certificate_hex,frequency");
        assert_eq!(lines.len(), 3);
    }
}
