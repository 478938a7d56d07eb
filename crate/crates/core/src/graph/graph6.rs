//! The graph6 byte format (as used by nauty's `geng`/`showg`).

use super::{Graph, GraphError};

const HEADER: &str = ">>graph6<<";

fn parse_err(msg: impl Into<String>) -> GraphError {
    GraphError::Parse {
        line: 1,
        msg: msg.into(),
    }
}

fn encode_order(n: usize, out: &mut String) {
    let push6 = |out: &mut String, bits: usize, groups: u32| {
        for k in (0..groups).rev() {
            out.push((((bits >> (6 * k)) & 0x3f) as u8 + 63) as char);
        }
    };
    if n <= 62 {
        out.push((n as u8 + 63) as char);
    } else if n <= 258_047 {
        out.push('~');
        push6(out, n, 3);
    } else {
        out.push_str("~~");
        push6(out, n, 6);
    }
}

pub fn to_graph6(g: &Graph) -> String {
    let n = g.order();
    let mut out = String::new();
    encode_order(n, &mut out);
    let mut acc = 0u8;
    let mut used = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | g.has_edge(i, j) as u8;
            used += 1;
            if used == 6 {
                out.push((acc + 63) as char);
                acc = 0;
                used = 0;
            }
        }
    }
    if used > 0 {
        out.push(((acc << (6 - used)) + 63) as char);
    }
    out
}

pub fn from_graph6(text: &str) -> Result<Graph, GraphError> {
    let s = text.trim();
    let s = s.strip_prefix(HEADER).unwrap_or(s);
    let bytes = s.as_bytes();
    if let Some(&b) = bytes.iter().find(|&&b| !(63..=126).contains(&b)) {
        return Err(parse_err(format!("byte {b:#x} outside graph6 range")));
    }
    let data = |i: usize| -> Result<usize, GraphError> {
        bytes
            .get(i)
            .map(|&b| (b - 63) as usize)
            .ok_or_else(|| parse_err("truncated graph6 string"))
    };
    let (n, mut pos) = match bytes.first() {
        None => return Err(parse_err("empty graph6 string")),
        Some(126) if bytes.get(1) == Some(&126) => {
            let mut n = 0;
            for i in 2..8 {
                n = (n << 6) | data(i)?;
            }
            (n, 8)
        }
        Some(126) => {
            let mut n = 0;
            for i in 1..4 {
                n = (n << 6) | data(i)?;
            }
            (n, 4)
        }
        Some(&b) => ((b - 63) as usize, 1),
    };
    let total_bits = n * n.saturating_sub(1) / 2;
    let expected = pos + total_bits.div_ceil(6);
    if bytes.len() != expected {
        return Err(parse_err(format!(
            "expected {expected} bytes for order {n}, found {}",
            bytes.len()
        )));
    }
    let mut edges = Vec::new();
    let mut bit = 0;
    let mut cur = 0;
    for j in 1..n {
        for i in 0..j {
            if bit == 0 {
                cur = data(pos)?;
                pos += 1;
            }
            if (cur >> (5 - bit)) & 1 == 1 {
                edges.push((i, j));
            }
            bit = (bit + 1) % 6;
        }
    }
    Graph::from_edges(n, &edges)
}
