use std::collections::HashMap;
use std::fmt::Write;

use crate::ballot::{Ballot, BallotKind};
use crate::candidates::{CandidateId, CandidateSet};
use crate::election::Election;
use crate::error::{Error, Result};
use crate::single_peaked::SocietalAxis;

use super::{key_value, lines, token_list, ParseError};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Election,
    Registered,
    UnregisteredVoters,
    UnregisteredCandidates,
}

struct Header {
    candidates: Option<(usize, Vec<String>)>,
    unregistered: Option<Vec<(usize, Vec<String>)>>,
    axis: Option<(usize, String)>,
    kind: Option<(usize, BallotKind)>,
}

/// Parses the election file format:
///
/// ```text
/// [election]
/// candidates = p, a, b
/// axis = a < p < b
/// ballot_type = ordinal
/// [registered]
/// 2: p > a > b
/// [unregistered_voters]
/// 1: a > p > b
/// [unregistered_candidates]
/// candidates = x
/// ```
///
/// Approval ballots are written `{p, a}`. A missing `count:` prefix means 1.
/// A present but empty `[unregistered_voters]` section declares an empty pool.
pub fn parse_election(text: &str) -> Result<Election> {
    let mut section = Section::Election;
    let mut header = Header { candidates: None, unregistered: None, axis: None, kind: None };
    let mut registered: Vec<(usize, &str)> = Vec::new();
    let mut pool: Option<Vec<(usize, &str)>> = None;
    for (no, line) in lines(text) {
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            section = match name.trim().to_ascii_lowercase().as_str() {
                "election" => Section::Election,
                "registered" => Section::Registered,
                "unregistered_voters" => {
                    pool.get_or_insert_with(Vec::new);
                    Section::UnregisteredVoters
                }
                "unregistered_candidates" => {
                    header.unregistered.get_or_insert_with(Vec::new);
                    Section::UnregisteredCandidates
                }
                other => return Err(ParseError { line: no, message: format!("unknown section [{other}]") }.into()),
            };
            continue;
        }
        match section {
            Section::Election => parse_header_line(no, line, &mut header)?,
            Section::Registered => registered.push((no, line)),
            Section::UnregisteredVoters => pool.get_or_insert_with(Vec::new).push((no, line)),
            Section::UnregisteredCandidates => {
                let list = key_value(line).filter(|(k, _)| k == "candidates").map_or(line, |(_, v)| v);
                let names = token_list(no, list)?;
                header.unregistered.get_or_insert_with(Vec::new).push((no, names));
            }
        }
    }
    build(header, registered, pool)
}

fn parse_header_line(no: usize, line: &str, header: &mut Header) -> Result<()> {
    let Some((key, value)) = key_value(line) else {
        return Err(ParseError { line: no, message: format!("expected `key = value`, found `{line}`") }.into());
    };
    match key.as_str() {
        "candidates" => header.candidates = Some((no, token_list(no, value)?)),
        "axis" => header.axis = Some((no, value.to_string())),
        "ballot_type" => {
            let kind = match value.to_ascii_lowercase().as_str() {
                "ordinal" => BallotKind::Ordinal,
                "approval" => BallotKind::Approval,
                _ => return Err(ParseError { line: no, message: format!("unknown ballot_type `{value}`") }.into()),
            };
            header.kind = Some((no, kind));
        }
        _ => return Err(ParseError { line: no, message: format!("unknown key `{key}`") }.into()),
    }
    Ok(())
}

fn build(header: Header, registered: Vec<(usize, &str)>, pool: Option<Vec<(usize, &str)>>) -> Result<Election> {
    let Some((cand_line, candidates)) = header.candidates else {
        return Err(ParseError { line: 1, message: "missing `candidates = ...`".into() }.into());
    };
    let kind = header.kind.map_or(BallotKind::Ordinal, |(_, k)| k);
    let mut names = candidates.clone();
    let mut index: HashMap<String, usize> = HashMap::new();
    for (i, name) in names.iter().enumerate() {
        if index.insert(name.clone(), i).is_some() {
            return Err(ParseError { line: cand_line, message: format!("duplicate candidate `{name}`") }.into());
        }
    }
    let unregistered = header.unregistered.map(|groups| {
        groups
            .into_iter()
            .flat_map(|(no, g)| g.into_iter().map(move |n| (no, n)))
            .collect::<Vec<_>>()
    });
    for (no, name) in unregistered.iter().flatten() {
        if index.insert(name.clone(), names.len()).is_some() {
            return Err(ParseError { line: *no, message: format!("duplicate candidate `{name}`") }.into());
        }
        names.push(name.clone());
    }
    let n = names.len();
    let axis = match header.axis {
        Some((no, text)) => Some(parse_axis(no, &text, &index, n)?),
        None => None,
    };
    let ballots = |rows: Vec<(usize, &str)>| -> Result<Vec<Ballot>> {
        let mut out = Vec::new();
        for (no, row) in rows {
            let (count, ballot) = parse_ballot(no, row, kind, &index, &names)?;
            out.extend(std::iter::repeat_n(ballot, count));
        }
        Ok(out)
    };
    let c = CandidateSet::from_ids(n, (0..candidates.len()).map(CandidateId));
    let a = unregistered.map(|_| CandidateSet::from_ids(n, (candidates.len()..n).map(CandidateId)));
    let registered = ballots(registered)?;
    let pool = pool.map(ballots).transpose()?;
    Election::from_parts(names, kind, c, a, registered, pool, axis)
}

fn lookup(no: usize, token: &str, index: &HashMap<String, usize>) -> Result<CandidateId> {
    index
        .get(token)
        .map(|&i| CandidateId(i))
        .ok_or_else(|| ParseError { line: no, message: format!("unknown candidate `{token}`") }.into())
}

fn parse_axis(no: usize, text: &str, index: &HashMap<String, usize>, n: usize) -> Result<SocietalAxis> {
    let order = text
        .split('<')
        .map(|t| lookup(no, t.trim(), index))
        .collect::<Result<Vec<_>>>()?;
    let mut seen = vec![false; n];
    for &c in &order {
        if std::mem::replace(&mut seen[c.0], true) {
            return Err(ParseError { line: no, message: "axis lists a candidate twice".into() }.into());
        }
    }
    if let Some(missing) = seen.iter().position(|s| !s) {
        let name = index.iter().find(|(_, &i)| i == missing).map(|(k, _)| k.as_str()).unwrap_or("?");
        return Err(ParseError { line: no, message: format!("axis does not cover the universe: `{name}` is missing") }.into());
    }
    SocietalAxis::new(order, n)
}

fn parse_ballot(
    no: usize,
    row: &str,
    kind: BallotKind,
    index: &HashMap<String, usize>,
    names: &[String],
) -> Result<(usize, Ballot)> {
    let fail = |m: String| -> Error { ParseError { line: no, message: m }.into() };
    let (count, body) = match row.split_once(':') {
        Some((c, b)) => (c.trim().parse::<usize>().map_err(|_| fail(format!("bad multiplicity `{}`", c.trim())))?, b.trim()),
        None => (1, row),
    };
    let n = names.len();
    if let Some(inner) = body.strip_prefix('{') {
        let inner = inner.strip_suffix('}').ok_or_else(|| fail("unterminated `{`".into()))?;
        if kind != BallotKind::Approval {
            return Err(fail("approval ballot in an ordinal election".into()));
        }
        let mut set = CandidateSet::empty(n);
        for t in inner.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let c = lookup(no, t, index)?;
            if set.contains(c) {
                return Err(fail(format!("`{t}` approved twice")));
            }
            set.insert(c);
        }
        return Ok((count, Ballot::approval(set)));
    }
    if kind != BallotKind::Ordinal {
        return Err(fail("ranking in an approval election".into()));
    }
    let ranking = body.split('>').map(|t| lookup(no, t.trim(), index)).collect::<Result<Vec<_>>>()?;
    let mut seen = vec![false; n];
    for &c in &ranking {
        if std::mem::replace(&mut seen[c.0], true) {
            return Err(fail(format!("`{}` ranked twice", names[c.0])));
        }
    }
    if let Some(missing) = seen.iter().position(|s| !s) {
        return Err(fail(format!("incomplete ranking: `{}` is missing", names[missing])));
    }
    Ok((count, Ballot::ordinal(ranking)))
}

/// Approval sets are listed in the order candidates are written, registered
/// ones first, so that re-parsing reproduces the same text.
fn write_ballot(out: &mut String, e: &Election, rank: &[usize], count: usize, b: &Ballot) {
    let names: Vec<&str> = match b {
        Ballot::Ordinal(o) => o.ranking().iter().map(|&c| e.name(c)).collect(),
        Ballot::Approval(a) => {
            let mut ids: Vec<CandidateId> = a.approved().iter().collect();
            ids.sort_by_key(|c| rank[c.0]);
            ids.into_iter().map(|c| e.name(c)).collect()
        }
    };
    match b {
        Ballot::Ordinal(_) => writeln!(out, "{count}: {}", names.join(" > ")),
        Ballot::Approval(_) => writeln!(out, "{count}: {{{}}}", names.join(", ")),
    }
    .expect("writing to a String");
}

fn write_ballots(out: &mut String, e: &Election, rank: &[usize], ballots: &[Ballot]) {
    for run in ballots.chunk_by(|a, b| a == b) {
        write_ballot(out, e, rank, run.len(), &run[0]);
    }
}

/// Canonical text form. Identical consecutive ballots share one line.
///
/// Fails when a universe member is neither registered nor unregistered,
/// since the format cannot express it.
pub fn serialize_election(e: &Election) -> Result<String> {
    let relevant = e.relevant_candidates();
    if let Some(c) = (0..e.universe_len()).map(CandidateId).find(|&c| !relevant.contains(c)) {
        return Err(Error::InvalidElection(format!("`{}` is neither registered nor unregistered", e.name(c))));
    }
    let mut rank = vec![0; e.universe_len()];
    let written = e.candidates().iter().chain(e.unregistered_candidates().into_iter().flat_map(|a| a.iter()));
    for (i, c) in written.enumerate() {
        rank[c.0] = i;
    }
    let mut out = String::from("[election]\n");
    let list = |set: &CandidateSet| set.iter().map(|c| e.name(c)).collect::<Vec<_>>().join(", ");
    writeln!(out, "candidates = {}", list(e.candidates())).expect("writing to a String");
    if let Some(axis) = e.axis() {
        let order: Vec<&str> = axis.order().iter().map(|&c| e.name(c)).collect();
        writeln!(out, "axis = {}", order.join(" < ")).expect("writing to a String");
    }
    let kind = match e.kind() {
        BallotKind::Ordinal => "ordinal",
        BallotKind::Approval => "approval",
    };
    writeln!(out, "ballot_type = {kind}").expect("writing to a String");
    out.push_str("\n[registered]\n");
    write_ballots(&mut out, e, &rank, e.registered());
    if let Some(pool) = e.unregistered_voters() {
        out.push_str("\n[unregistered_voters]\n");
        write_ballots(&mut out, e, &rank, pool);
    }
    if let Some(a) = e.unregistered_candidates() {
        out.push_str("\n[unregistered_candidates]\n");
        writeln!(out, "candidates = {}", list(a)).expect("writing to a String");
    }
    Ok(out)
}
