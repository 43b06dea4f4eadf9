//! graph6 records and plain edge-list text.
//!
//! graph6 packs the upper triangle column by column (`x(0,1), x(0,2),
//! x(1,2), x(0,3), ...`) into 6-bit groups, each stored as `value + 63`.
//! The vertex count is one byte for `n <= 62`, otherwise `~` plus three
//! bytes; the eight-byte form only encodes sizes above [`MAX_VERTICES`].

use super::{Graph, GraphError, MAX_VERTICES};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Graph6Error {
    #[error("empty graph6 record")]
    Empty,
    #[error("malformed graph6 size header")]
    BadHeader,
    #[error("byte {byte:#04x} at offset {offset} is outside the printable range 63..=126")]
    ByteOutOfRange { offset: usize, byte: u8 },
    #[error("truncated body: expected {expected} bytes, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error("trailing garbage: expected {expected} body bytes, found {found}")]
    TrailingBytes { expected: usize, found: usize },
    #[error("non-zero padding bits in the last body byte")]
    NonZeroPadding,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Parses one graph6 record. Surrounding whitespace (including the line
/// terminator) is ignored; header directives such as `>>graph6<<` are not.
pub fn parse_graph6(line: &str) -> Result<Graph, Graph6Error> {
    let bytes = line.trim().as_bytes();
    if bytes.is_empty() {
        return Err(Graph6Error::Empty);
    }
    if let Some((offset, &byte)) = bytes.iter().enumerate().find(|(_, b)| !(63..=126).contains(*b)) {
        return Err(Graph6Error::ByteOutOfRange { offset, byte });
    }
    let (n, body) = decode_size(bytes)?;
    if n == 0 {
        return Err(GraphError::NoVertices.into());
    }
    if n > MAX_VERTICES {
        return Err(GraphError::TooManyVertices { n }.into());
    }
    let nbits = n * (n - 1) / 2;
    let expected = nbits.div_ceil(6);
    if body.len() < expected {
        return Err(Graph6Error::Truncated { expected, found: body.len() });
    }
    if body.len() > expected {
        return Err(Graph6Error::TrailingBytes { expected, found: body.len() });
    }
    let pad = expected * 6 - nbits;
    if pad > 0 && (body[expected - 1] - 63) & ((1u8 << pad) - 1) != 0 {
        return Err(Graph6Error::NonZeroPadding);
    }

    let mut g = Graph::empty(n)?;
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            let chunk = body[k / 6] - 63;
            if (chunk >> (5 - k % 6)) & 1 == 1 {
                g.set_edge(i, j, true);
            }
            k += 1;
        }
    }
    Ok(g)
}

fn decode_size(bytes: &[u8]) -> Result<(usize, &[u8]), Graph6Error> {
    let sixes = |bs: &[u8]| bs.iter().fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize);
    if bytes[0] != 126 {
        return Ok(((bytes[0] - 63) as usize, &bytes[1..]));
    }
    if bytes.len() >= 2 && bytes[1] == 126 {
        if bytes.len() < 8 {
            return Err(Graph6Error::BadHeader);
        }
        return Ok((sixes(&bytes[2..8]), &bytes[8..]));
    }
    if bytes.len() < 4 {
        return Err(Graph6Error::BadHeader);
    }
    Ok((sixes(&bytes[1..4]), &bytes[1 + 3..]))
}

pub fn to_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out = Vec::with_capacity(4 + (n * n.saturating_sub(1) / 2).div_ceil(6));
    if n <= 62 {
        out.push(n as u8 + 63);
    } else {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 0x3f) as u8 + 63);
        }
    }
    let mut chunk = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            chunk = (chunk << 1) | g.has_edge(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push(chunk + 63);
                chunk = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((chunk << (6 - filled)) + 63);
    }
    String::from_utf8(out).expect("graph6 bytes are ASCII")
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EdgeListError {
    #[error("missing \"n m\" header line")]
    MissingHeader,
    #[error("line {line}: expected \"n m\"")]
    BadHeader { line: usize },
    #[error("line {line}: expected two vertex indices")]
    BadEdge { line: usize },
    #[error("header declares {expected} edges but {found} were listed")]
    CountMismatch { expected: usize, found: usize },
    #[error("line {line}: {source}")]
    Graph { line: usize, source: GraphError },
}

/// Parses `n m` followed by `m` lines `u v` (0-indexed). Blank lines are skipped.
pub fn parse_edge_list(text: &str) -> Result<Graph, EdgeListError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines.next().ok_or(EdgeListError::MissingHeader)?;
    let (n, m) = parse_pair(header).ok_or(EdgeListError::BadHeader { line: hline })?;
    let mut g = Graph::empty(n).map_err(|source| EdgeListError::Graph { line: hline, source })?;
    let mut found = 0;
    for (line, body) in lines {
        let (u, v) = parse_pair(body).ok_or(EdgeListError::BadEdge { line })?;
        g = add_checked(g, u, v).map_err(|source| EdgeListError::Graph { line, source })?;
        found += 1;
    }
    if found != m {
        return Err(EdgeListError::CountMismatch { expected: m, found });
    }
    Ok(g)
}

fn add_checked(mut g: Graph, u: usize, v: usize) -> Result<Graph, GraphError> {
    let n = g.n();
    for x in [u, v] {
        if x >= n {
            return Err(GraphError::VertexOutOfRange { vertex: x, n });
        }
    }
    if u == v {
        return Err(GraphError::SelfLoop(u));
    }
    g.set_edge(u, v, true);
    Ok(g)
}

fn parse_pair(s: &str) -> Option<(usize, usize)> {
    let mut it = s.split_whitespace();
    let a = it.next()?.parse().ok()?;
    let b = it.next()?.parse().ok()?;
    it.next().is_none().then_some((a, b))
}

pub fn to_edge_list(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.m());
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_records() {
        let star = parse_graph6("D?{").unwrap();
        assert_eq!(star, Graph::from_edge_list(5, &[(0, 4), (1, 4), (2, 4), (3, 4)]).unwrap());
        assert_eq!(to_graph6(&star), "D?{");
        assert_eq!(to_graph6(&Graph::empty(5).unwrap()), "D??");
        let g = Graph::from_edge_list(5, &[(0, 2), (0, 4), (1, 3), (3, 4)]).unwrap();
        assert_eq!(to_graph6(&g), "DQc");
        assert_eq!(to_graph6(&Graph::complete(5).unwrap()), "D~{");
        assert_eq!(to_graph6(&Graph::empty(1).unwrap()), "@");
    }

    #[test]
    fn long_header_round_trip() {
        let g = Graph::cycle(100).unwrap();
        let s = to_graph6(&g);
        assert!(s.starts_with("~?@c"));
        assert_eq!(parse_graph6(&s).unwrap(), g);
    }

    #[test]
    fn rejects_malformed() {
        assert_eq!(parse_graph6(""), Err(Graph6Error::Empty));
        assert_eq!(parse_graph6("  \n"), Err(Graph6Error::Empty));
        assert_eq!(parse_graph6("D?"), Err(Graph6Error::Truncated { expected: 2, found: 1 }));
        assert_eq!(parse_graph6("D?{?"), Err(Graph6Error::TrailingBytes { expected: 2, found: 3 }));
        assert_eq!(parse_graph6("D? {"), Err(Graph6Error::ByteOutOfRange { offset: 2, byte: b' ' }));
        assert!(matches!(parse_graph6(">>graph6<<D?{"), Err(Graph6Error::ByteOutOfRange { offset: 0, .. })));
        assert_eq!(parse_graph6("~?"), Err(Graph6Error::BadHeader));
        assert_eq!(parse_graph6("D?~"), Err(Graph6Error::NonZeroPadding));
        assert!(matches!(parse_graph6("?"), Err(Graph6Error::Graph(GraphError::NoVertices))));
        assert!(matches!(parse_graph6("~?a?"), Err(Graph6Error::Graph(GraphError::TooManyVertices { .. }))));
    }

    #[test]
    fn edge_list_text() {
        let g = parse_edge_list("3 3\n0 1\n1 2\n\n0 2\n").unwrap();
        assert_eq!(g, Graph::complete(3).unwrap());
        assert_eq!(parse_edge_list(&to_edge_list(&g)).unwrap(), g);
        assert_eq!(parse_edge_list(""), Err(EdgeListError::MissingHeader));
        assert_eq!(parse_edge_list("3\n"), Err(EdgeListError::BadHeader { line: 1 }));
        assert_eq!(parse_edge_list("3 1\n0 x\n"), Err(EdgeListError::BadEdge { line: 2 }));
        assert_eq!(parse_edge_list("3 2\n0 1\n"), Err(EdgeListError::CountMismatch { expected: 2, found: 1 }));
        assert!(matches!(
            parse_edge_list("3 1\n0 3\n"),
            Err(EdgeListError::Graph { line: 2, source: GraphError::VertexOutOfRange { .. } })
        ));
    }
}
