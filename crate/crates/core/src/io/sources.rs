use std::collections::HashMap;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::hardness::{BipartiteGraph, X3CInstance};
use crate::prediction::{parse_rational, TurnoutModel};

use super::{err, is_token, key_value, lines, token_list, ParseError};

fn positions(names: &[String]) -> HashMap<&str, usize> {
    names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect()
}

fn resolve(no: usize, token: &str, index: &HashMap<&str, usize>, side: &str) -> std::result::Result<usize, ParseError> {
    index
        .get(token)
        .copied()
        .map_or_else(|| err(no, format!("`{token}` is not a {side} vertex")), Ok)
}

/// Graph file: `left = x1, x2`, `right = y1, y2`, one `edge = x1 y1` per line.
pub fn parse_graph(text: &str) -> Result<BipartiteGraph> {
    let mut left = None;
    let mut right = None;
    let mut edges = Vec::new();
    for (no, line) in lines(text) {
        let Some((key, value)) = key_value(line) else {
            return Err(ParseError { line: no, message: format!("expected `key = value`, found `{line}`") }.into());
        };
        match key.as_str() {
            "left" => left = Some(token_list(no, value)?),
            "right" => right = Some(token_list(no, value)?),
            "edge" => edges.push((no, value)),
            _ => return Err(ParseError { line: no, message: format!("unknown key `{key}`") }.into()),
        }
    }
    let (Some(left), Some(right)) = (left, right) else {
        return Err(ParseError { line: 1, message: "graph needs both `left` and `right`".into() }.into());
    };
    let (li, ri) = (positions(&left), positions(&right));
    let mut pairs = Vec::with_capacity(edges.len());
    for (no, value) in edges {
        let ends: Vec<&str> = value.split_whitespace().collect();
        let [x, y] = ends[..] else {
            return Err(ParseError { line: no, message: format!("edge needs two endpoints, found `{value}`") }.into());
        };
        pairs.push((resolve(no, x, &li, "left")?, resolve(no, y, &ri, "right")?));
    }
    BipartiteGraph::new(left, right, pairs)
}

pub fn serialize_graph(g: &BipartiteGraph) -> String {
    let mut out = format!("left = {}\nright = {}\n", g.left().join(", "), g.right().join(", "));
    for &(x, y) in g.edges() {
        out.push_str(&format!("edge = {} {}\n", g.left()[x], g.right()[y]));
    }
    out
}

/// `b1..b9` expands to `b1, ..., b9`; anything else is a comma list.
fn ground_list(no: usize, value: &str) -> std::result::Result<Vec<String>, ParseError> {
    if let Some((lo, hi)) = value.split_once("..") {
        let split = |s: &str| {
            let s = s.trim();
            let digits = s.len() - s.trim_start_matches(|c: char| !c.is_ascii_digit()).len();
            let (prefix, num) = s.split_at(digits);
            num.parse::<usize>().ok().map(|n| (prefix.to_string(), n))
        };
        return match (split(lo), split(hi)) {
            (Some((p, a)), Some((q, b))) if p == q && a <= b && (p.is_empty() || is_token(&p)) => {
                Ok((a..=b).map(|i| format!("{p}{i}")).collect())
            }
            _ => err(no, format!("bad range `{value}`")),
        };
    }
    token_list(no, value)
}

/// X3C file: `ground = b1..b9` (or a comma list) and one `set = b1 b2 b3`
/// per line.
pub fn parse_x3c(text: &str) -> Result<X3CInstance> {
    let mut ground = None;
    let mut sets = Vec::new();
    for (no, line) in lines(text) {
        let Some((key, value)) = key_value(line) else {
            return Err(ParseError { line: no, message: format!("expected `key = value`, found `{line}`") }.into());
        };
        match key.as_str() {
            "ground" => ground = Some(ground_list(no, value)?),
            "set" => sets.push((no, value)),
            _ => return Err(ParseError { line: no, message: format!("unknown key `{key}`") }.into()),
        }
    }
    let Some(ground) = ground else {
        return Err(ParseError { line: 1, message: "missing `ground = ...`".into() }.into());
    };
    let index = positions(&ground);
    let mut family = Vec::with_capacity(sets.len());
    for (no, value) in sets {
        let members = value
            .split_whitespace()
            .map(|t| resolve(no, t, &index, "ground"))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let Ok(set) = <[usize; 3]>::try_from(members) else {
            return Err(ParseError { line: no, message: format!("a set needs exactly three elements, found `{value}`") }.into());
        };
        family.push(set);
    }
    X3CInstance::new(ground, family)
}

pub fn serialize_x3c(x: &X3CInstance) -> String {
    let g = x.ground();
    let mut out = format!("ground = {}\n", g.join(", "));
    for s in x.family() {
        out.push_str(&format!("set = {} {} {}\n", g[s[0]], g[s[1]], g[s[2]]));
    }
    out
}

/// Turnout table: `P(0), P(1), ...` as rationals separated by commas,
/// whitespace or newlines.
pub fn parse_turnout_table(text: &str) -> Result<TurnoutModel> {
    let mut table: Vec<BigRational> = Vec::new();
    for (no, line) in lines(text) {
        for tok in line.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
            let p = parse_rational(tok).map_err(|e| match e {
                Error::InvalidTurnout(m) => Error::Parse(ParseError { line: no, message: m }),
                e => e,
            })?;
            table.push(p);
        }
    }
    TurnoutModel::table(table)
}
