//! graph6 format: compact printable encoding of undirected simple graphs.
//!
//! A graph6 line is a vertex-count prefix followed by the upper triangle of
//! the adjacency matrix, read column by column (`x_{0,1}, x_{0,2}, x_{1,2},
//! x_{0,3}, …`), packed big-endian into 6-bit groups and shifted into the
//! printable range by adding 63. The count prefix uses 1 byte for `n <= 62`,
//! `'~'` plus 3 bytes for `n <= 258047`, and `"~~"` plus 6 bytes above that.
//! Writers emit the canonical minimal prefix and zero padding bits.

use crate::graph::Graph;
use thiserror::Error;

/// Optional header some tools prepend to graph6 streams.
pub const HEADER: &str = ">>graph6<<";

/// Largest vertex count accepted by the parser.
pub const MAX_VERTICES: u64 = 1 << 18;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Graph6Error {
    #[error("empty graph6 string")]
    Empty,
    #[error("byte 0x{byte:02x} at position {pos} is outside the graph6 range 0x3f..=0x7e")]
    InvalidByte { pos: usize, byte: u8 },
    #[error("malformed vertex-count prefix")]
    BadPrefix,
    #[error("vertex count {n} is not below the supported limit {max}")]
    TooLarge { n: u64, max: u64 },
    #[error("expected {expected} adjacency bytes after the prefix, found {found}")]
    WrongLength { expected: usize, found: usize },
    #[error("padding bits after the adjacency data are not zero")]
    NonzeroPadding,
}

/// Parses one graph6 line. Leading/trailing ASCII whitespace and the
/// optional `>>graph6<<` header are tolerated.
pub fn parse_graph6(line: &str) -> Result<Graph, Graph6Error> {
    let s = line.trim();
    let s = s.strip_prefix(HEADER).unwrap_or(s);
    let bytes = s.as_bytes();
    if bytes.is_empty() {
        return Err(Graph6Error::Empty);
    }
    if let Some(pos) = bytes.iter().position(|b| !(63..=126).contains(b)) {
        return Err(Graph6Error::InvalidByte {
            pos,
            byte: bytes[pos],
        });
    }
    let (n, prefix_len) = decode_count(bytes)?;
    if n >= MAX_VERTICES {
        return Err(Graph6Error::TooLarge {
            n,
            max: MAX_VERTICES,
        });
    }
    let n = n as usize;
    let nbits = n * n.saturating_sub(1) / 2;
    let expected = nbits.div_ceil(6);
    let body = &bytes[prefix_len..];
    if body.len() != expected {
        return Err(Graph6Error::WrongLength {
            expected,
            found: body.len(),
        });
    }
    let bit_at = |idx: usize| (body[idx / 6] - 63) >> (5 - idx % 6) & 1 == 1;
    let mut g = Graph::new(n);
    let mut idx = 0;
    for j in 1..n {
        for i in 0..j {
            if bit_at(idx) {
                g.add_edge(i, j);
            }
            idx += 1;
        }
    }
    for pad in idx..expected * 6 {
        if bit_at(pad) {
            return Err(Graph6Error::NonzeroPadding);
        }
    }
    Ok(g)
}

fn decode_count(bytes: &[u8]) -> Result<(u64, usize), Graph6Error> {
    if bytes[0] != 126 {
        return Ok(((bytes[0] - 63) as u64, 1));
    }
    if bytes.len() >= 2 && bytes[1] != 126 {
        if bytes.len() < 4 {
            return Err(Graph6Error::BadPrefix);
        }
        let n = bytes[1..4]
            .iter()
            .fold(0u64, |acc, &b| acc << 6 | (b - 63) as u64);
        return Ok((n, 4));
    }
    if bytes.len() < 8 {
        return Err(Graph6Error::BadPrefix);
    }
    let n = bytes[2..8]
        .iter()
        .fold(0u64, |acc, &b| acc << 6 | (b - 63) as u64);
    Ok((n, 8))
}

/// Encodes a graph in canonical graph6 form (minimal count prefix, zero
/// padding).
pub fn write_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out: Vec<u8> = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        for shift in [12u32, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    } else {
        out.push(126);
        out.push(126);
        for shift in [30u32, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    }
    let mut acc = 0u8;
    let mut used = 0u32;
    for j in 1..n {
        for i in 0..j {
            acc = acc << 1 | g.has_edge(i, j) as u8;
            used += 1;
            if used == 6 {
                out.push(acc + 63);
                acc = 0;
                used = 0;
            }
        }
    }
    if used > 0 {
        out.push((acc << (6 - used)) + 63);
    }
    String::from_utf8(out).expect("graph6 bytes are printable ASCII")
}
