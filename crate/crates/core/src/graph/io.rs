//! Plain-text edge list: a header line `n <count>` followed by one `i j` line
//! per edge (`i < j`, ascending).

use super::Graph;
use crate::error::{Error, Result};

pub fn write_graph(g: &Graph) -> String {
    let mut out = format!("n {}\n", g.n());
    for (i, j) in g.edges() {
        out.push_str(&format!("{i} {j}\n"));
    }
    out
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "empty input".into() })?;
    let n = header
        .trim()
        .strip_prefix('n')
        .and_then(|r| r.trim().parse::<usize>().ok())
        .ok_or(Error::Parse { line: 1, msg: format!("bad header {header:?}") })?;
    let mut g = Graph::empty(n);
    for (idx, line) in lines {
        let line_no = idx + 1;
        let err = |msg: String| Error::Parse { line: line_no, msg };
        let mut it = line.split_whitespace().map(str::parse::<usize>);
        let (i, j) = match (it.next(), it.next(), it.next()) {
            (Some(Ok(i)), Some(Ok(j)), None) => (i, j),
            _ => return Err(err(format!("expected 'i j', got {line:?}"))),
        };
        if i >= n || j >= n || i == j {
            return Err(err(format!("pair ({i},{j}) invalid for n={n}")));
        }
        if g.has_edge(i, j) {
            return Err(err(format!("duplicate pair ({i},{j})")));
        }
        g.set(i, j, true);
    }
    Ok(g)
}
