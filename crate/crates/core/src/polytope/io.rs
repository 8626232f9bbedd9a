//! Plain-text polytope format.
//!
//! ```text
//! # comment
//! n v
//! x_1 ... x_n      (v lines)
//! ```

use std::fmt::Write;

use num_bigint::BigInt;

use super::LatticePolytope;
use crate::error::{Error, Result};
use crate::lattice::LatticeVector;

/// Non-empty, comment-stripped lines with their 1-based line numbers.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

fn parse_count(tok: &str, line: usize, what: &str) -> Result<usize> {
    tok.parse().map_err(|_| Error::Parse {
        line,
        message: format!("expected {what}, found {tok:?}"),
    })
}

pub fn parse_polytope(text: &str) -> Result<LatticePolytope> {
    let mut lines = content_lines(text);
    let last_line = text.lines().count().max(1);
    let Some((hl, header)) = lines.next() else {
        return Err(Error::Parse {
            line: 1,
            message: "empty input: expected header `n v`".into(),
        });
    };
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 2 {
        return Err(Error::Parse {
            line: hl,
            message: "header must be `n v`".into(),
        });
    }
    let n = parse_count(toks[0], hl, "dimension")?;
    let v = parse_count(toks[1], hl, "vertex count")?;
    if n == 0 || v == 0 {
        return Err(Error::Parse {
            line: hl,
            message: "dimension and vertex count must be positive".into(),
        });
    }
    let mut points = Vec::with_capacity(v);
    for _ in 0..v {
        let Some((ln, line)) = lines.next() else {
            return Err(Error::Parse {
                line: last_line,
                message: format!("expected {v} vertex lines, found {}", points.len()),
            });
        };
        let coords: Vec<BigInt> = line
            .split_whitespace()
            .map(|t| {
                t.parse::<BigInt>().map_err(|_| Error::Parse {
                    line: ln,
                    message: format!("not an integer: {t:?}"),
                })
            })
            .collect::<Result<_>>()?;
        if coords.len() != n {
            return Err(Error::Parse {
                line: ln,
                message: format!("expected {n} coordinates, found {}", coords.len()),
            });
        }
        points.push(LatticeVector::new(coords));
    }
    if let Some((ln, _)) = lines.next() {
        return Err(Error::Parse {
            line: ln,
            message: "unexpected content after the vertex list".into(),
        });
    }
    LatticePolytope::from_vertices(&points)
}

pub fn format_polytope(p: &LatticePolytope) -> String {
    let mut out = String::new();
    writeln!(out, "{} {}", p.dim(), p.vertices().len()).unwrap();
    for v in p.vertices() {
        let row: Vec<String> = v.coords().iter().map(|c| c.to_string()).collect();
        writeln!(out, "{}", row.join(" ")).unwrap();
    }
    out
}
