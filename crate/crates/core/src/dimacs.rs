//! Text graph format: `p edge <n> <m>` then `e <u> <v> [<w>]` per edge,
//! vertices 1-based, weight defaulting to 0, `c` lines are comments. Edge
//! ids follow line order.

use crate::error::{Error, Result};
use crate::graph::{Graph, WeightVector};

fn err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Tokens of a line with their 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s + 1, &line[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn number<T: std::str::FromStr>(line: usize, (col, tok): (usize, &str), what: &str) -> Result<T> {
    tok.parse()
        .map_err(|_| err(line, col, format!("expected {what}, found `{tok}`")))
}

pub fn parse(text: &str) -> Result<(Graph, WeightVector)> {
    let mut header: Option<(usize, usize)> = None;
    let mut pairs = Vec::new();
    let mut weights = Vec::new();
    let mut last = 0;
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        last = ln;
        let toks = tokens(raw);
        let Some(&(col, kind)) = toks.first() else {
            continue;
        };
        match kind {
            "c" => {}
            "p" => {
                if header.is_some() {
                    return Err(err(ln, col, "second problem line"));
                }
                if toks.len() != 4 {
                    return Err(err(ln, col, "expected `p edge <n> <m>`"));
                }
                if toks[1].1 != "edge" {
                    return Err(err(ln, toks[1].0, format!("expected `edge`, found `{}`", toks[1].1)));
                }
                header = Some((number(ln, toks[2], "vertex count")?, number(ln, toks[3], "edge count")?));
            }
            "e" => {
                let Some((n, _)) = header else {
                    return Err(err(ln, col, "edge before the problem line"));
                };
                if !(3..=4).contains(&toks.len()) {
                    return Err(err(ln, col, "expected `e <u> <v> [<w>]`"));
                }
                let mut ends = [0usize; 2];
                for k in 0..2 {
                    let v: usize = number(ln, toks[k + 1], "vertex")?;
                    if v == 0 || v > n {
                        return Err(err(ln, toks[k + 1].0, format!("vertex {v} outside 1..={n}")));
                    }
                    ends[k] = v - 1;
                }
                if ends[0] == ends[1] {
                    return Err(err(ln, toks[2].0, "loop edge"));
                }
                let w = match toks.get(3) {
                    Some(&t) => number(ln, t, "integer weight")?,
                    None => 0,
                };
                pairs.push((ends[0], ends[1]));
                weights.push(w);
            }
            other => return Err(err(ln, col, format!("unknown line type `{other}`"))),
        }
    }
    let (n, m) = header.ok_or_else(|| err(last.max(1), 1, "missing problem line"))?;
    if m != pairs.len() {
        return Err(err(last.max(1), 1, format!("header announces {m} edges, found {}", pairs.len())));
    }
    let graph = Graph::new(n, &pairs)?;
    Ok((graph, WeightVector::new(weights)))
}

/// Writes every edge with its weight, in id order.
pub fn serialize(graph: &Graph, w: &WeightVector) -> String {
    let mut out = format!("p edge {} {}\n", graph.vertex_count(), graph.edge_count());
    for e in graph.edges() {
        out.push_str(&format!("e {} {} {}\n", e.u + 1, e.v + 1, w.get(e.id)));
    }
    out
}
