//! Text formats: elections (.soc), graphs (edge lists), and matchings.
//!
//! Election files hold `#` comment lines, a candidate-count line, then one
//! line per vote group `count: c1,c2,...,cm`. Graph files hold an optional
//! vertex-count line followed by one `u v` edge per line, 0-based. Matching
//! files hold one `left right` pair per line. All errors carry the line
//! (and where it makes sense, column) of the offending token.

use std::fmt;

use subelections::hard::Graph;
use subelections::{Election, Vote};

#[derive(Debug)]
pub struct ParseError {
    pub line: usize,
    pub column: Option<usize>,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, column: Option<usize>, message: impl Into<String>) -> Self {
        ParseError { line, column, message: message.into() }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.column {
            Some(col) => write!(f, "line {}, column {}: {}", self.line, col, self.message),
            None => write!(f, "line {}: {}", self.line, self.message),
        }
    }
}

impl std::error::Error for ParseError {}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        })
}

pub fn parse_election(text: &str) -> Result<Election, ParseError> {
    let mut lines = content_lines(text);
    let (line_no, header) = lines
        .next()
        .ok_or_else(|| ParseError::new(1, None, "empty election file"))?;
    let m: usize = header.trim().parse().map_err(|_| {
        ParseError::new(line_no, Some(1), format!("expected candidate count, got {header:?}"))
    })?;
    if m == 0 {
        return Err(ParseError::new(line_no, Some(1), "candidate count must be at least 1"));
    }

    let mut rankings: Vec<Vec<usize>> = Vec::new();
    for (line_no, line) in lines {
        let (count_str, rest) = line.split_once(':').ok_or_else(|| {
            ParseError::new(line_no, None, "expected a vote group `count: c1,c2,...`")
        })?;
        let count: usize = count_str.trim().parse().map_err(|_| {
            ParseError::new(line_no, Some(1), format!("bad vote count {:?}", count_str.trim()))
        })?;
        if count == 0 {
            return Err(ParseError::new(line_no, Some(1), "vote count must be at least 1"));
        }
        let mut ranking = Vec::with_capacity(m);
        let mut seen = vec![false; m];
        let mut col = count_str.len() + 2; // 1-based column where `rest` starts
        for part in rest.split(',') {
            let token = part.trim();
            let token_col = col + (part.len() - part.trim_start().len());
            let c: usize = token.parse().map_err(|_| {
                ParseError::new(line_no, Some(token_col), format!("bad candidate token {token:?}"))
            })?;
            if c >= m {
                return Err(ParseError::new(
                    line_no,
                    Some(token_col),
                    format!("candidate {c} out of range for {m} candidates"),
                ));
            }
            if seen[c] {
                return Err(ParseError::new(
                    line_no,
                    Some(token_col),
                    format!("repeated candidate {c}"),
                ));
            }
            seen[c] = true;
            ranking.push(c);
            col += part.len() + 1;
        }
        if ranking.len() != m {
            return Err(ParseError::new(
                line_no,
                None,
                format!("vote ranks {} of {m} candidates", ranking.len()),
            ));
        }
        for _ in 0..count {
            rankings.push(ranking.clone());
        }
    }
    if rankings.is_empty() {
        return Err(ParseError::new(line_no, None, "election has no votes"));
    }
    Election::new(m, rankings)
        .map_err(|e| ParseError::new(line_no, None, format!("invalid election: {e}")))
}

/// Serializes with consecutive identical votes collapsed into one group, so
/// parse(write(e)) == e.
pub fn write_election(e: &Election) -> String {
    let mut out = format!("{}\n", e.num_candidates());
    let mut votes = e.votes().iter();
    let mut current: &Vote = votes.next().expect("elections have at least one vote");
    let mut count = 1usize;
    let flush = |count: usize, vote: &Vote, out: &mut String| {
        out.push_str(&format!("{count}: "));
        let rendered: Vec<String> = vote.ranking().iter().map(|c| c.to_string()).collect();
        out.push_str(&rendered.join(","));
        out.push('\n');
    };
    for v in votes {
        if v == current {
            count += 1;
        } else {
            flush(count, current, &mut out);
            current = v;
            count = 1;
        }
    }
    flush(count, current, &mut out);
    out
}

pub fn parse_graph(text: &str) -> Result<Graph, ParseError> {
    let mut declared: Option<usize> = None;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut max_vertex: Option<usize> = None;
    for (line_no, line) in content_lines(text) {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens.as_slice() {
            [count] => {
                if declared.is_some() || !edges.is_empty() {
                    return Err(ParseError::new(
                        line_no,
                        None,
                        "vertex count must appear once, before any edge",
                    ));
                }
                let n: usize = count.parse().map_err(|_| {
                    ParseError::new(line_no, Some(1), format!("bad vertex count {count:?}"))
                })?;
                declared = Some(n);
            }
            [a, b] => {
                let u: usize = a.parse().map_err(|_| {
                    ParseError::new(line_no, Some(1), format!("bad vertex {a:?}"))
                })?;
                let v: usize = b.parse().map_err(|_| {
                    ParseError::new(line_no, None, format!("bad vertex {b:?}"))
                })?;
                if u == v {
                    return Err(ParseError::new(line_no, None, format!("self-loop at {u}")));
                }
                if let Some(n) = declared {
                    if u >= n || v >= n {
                        return Err(ParseError::new(
                            line_no,
                            None,
                            format!("edge {u} {v} exceeds declared vertex count {n}"),
                        ));
                    }
                }
                max_vertex = Some(max_vertex.unwrap_or(0).max(u).max(v));
                edges.push((u, v));
            }
            _ => {
                return Err(ParseError::new(
                    line_no,
                    None,
                    "expected a vertex count or an edge `u v`",
                ));
            }
        }
    }
    let n = match (declared, max_vertex) {
        (Some(n), _) => n,
        (None, Some(mv)) => mv + 1,
        (None, None) => return Err(ParseError::new(1, None, "empty graph file")),
    };
    Graph::from_edges(n, &edges)
        .map_err(|e| ParseError::new(1, None, format!("invalid graph: {e}")))
}

pub fn parse_matching(text: &str) -> Result<Vec<(usize, usize)>, ParseError> {
    let mut pairs = Vec::new();
    for (line_no, line) in content_lines(text) {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let [a, b] = tokens.as_slice() else {
            return Err(ParseError::new(line_no, None, "expected a pair `left right`"));
        };
        let l: usize = a.parse().map_err(|_| {
            ParseError::new(line_no, Some(1), format!("bad index {a:?}"))
        })?;
        let r: usize = b.parse().map_err(|_| {
            ParseError::new(line_no, None, format!("bad index {b:?}"))
        })?;
        pairs.push((l, r));
    }
    Ok(pairs)
}

pub fn write_matching(pairs: &[(usize, usize)]) -> String {
    let mut out = String::new();
    for &(l, r) in pairs {
        out.push_str(&format!("{l} {r}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn election_round_trip() {
        let text = "# a comment\n3\n2: 0,1,2\n1: 2,1,0\n";
        let e = parse_election(text).unwrap();
        assert_eq!(e.num_candidates(), 3);
        assert_eq!(e.num_voters(), 3);
        assert_eq!(e.vote(0).ranking(), &[0, 1, 2]);
        assert_eq!(e.vote(1).ranking(), &[0, 1, 2]);
        assert_eq!(e.vote(2).ranking(), &[2, 1, 0]);
        let written = write_election(&e);
        assert_eq!(written, "3\n2: 0,1,2\n1: 2,1,0\n");
        assert_eq!(parse_election(&written).unwrap(), e);
    }

    #[test]
    fn election_errors_carry_positions() {
        let err = parse_election("").unwrap_err();
        assert_eq!(err.line, 1);
        let err = parse_election("3\n1: 0,0,2\n").unwrap_err();
        assert_eq!(err.line, 2);
        assert_eq!(err.column, Some(6));
        assert!(err.message.contains("repeated candidate 0"));
        let err = parse_election("3\n1: 0,1\n").unwrap_err();
        assert!(err.message.contains("ranks 2 of 3"));
        let err = parse_election("3\n1: 0,1,5\n").unwrap_err();
        assert!(err.message.contains("out of range"));
        let err = parse_election("x\n").unwrap_err();
        assert!(err.message.contains("candidate count"));
        let err = parse_election("3\n").unwrap_err();
        assert!(err.message.contains("no votes"));
        let err = parse_election("3\n0: 0,1,2\n").unwrap_err();
        assert!(err.message.contains("at least 1"));
    }

    #[test]
    fn graph_parsing_and_errors() {
        let g = parse_graph("4\n0 1\n2 3\n").unwrap();
        assert_eq!(g.num_vertices(), 4);
        assert_eq!(g.edges(), vec![(0, 1), (2, 3)]);

        // Without a count line the vertex set is inferred.
        let g = parse_graph("0 1\n1 2\n").unwrap();
        assert_eq!(g.num_vertices(), 3);

        assert!(parse_graph("").is_err());
        assert!(parse_graph("3\n1 1\n").unwrap_err().message.contains("self-loop"));
        assert!(parse_graph("2\n0 5\n").unwrap_err().message.contains("exceeds"));
        assert!(parse_graph("0 1\n3\n").unwrap_err().message.contains("before any edge"));
        assert!(parse_graph("0 1 2\n").is_err());
    }

    #[test]
    fn matching_round_trip() {
        let pairs = parse_matching("# map\n0 2\n1 0\n").unwrap();
        assert_eq!(pairs, vec![(0, 2), (1, 0)]);
        assert_eq!(write_matching(&pairs), "0 2\n1 0\n");
        assert!(parse_matching("0\n").is_err());
        assert!(parse_matching("0 x\n").is_err());
    }
}
