use std::collections::HashSet;

use crate::ballot::{Ballot, BallotKind};
use crate::candidates::{CandidateId, CandidateSet};
use crate::control::{Action, ControlInstance, Mode, Problem};
use crate::election::Election;
use crate::error::{Error, Result};
use crate::rules::Rule;

use super::sources::{BipartiteGraph, X3CInstance};
use super::{Relationship, ReductionArtifact, Source, Target};

/// Names in the order their ids are assigned, kept unique.
struct Names {
    list: Vec<String>,
    used: HashSet<String>,
}

impl Names {
    fn new() -> Self {
        Names { list: Vec::new(), used: HashSet::new() }
    }

    fn add(&mut self, base: &str) -> usize {
        let mut name = base.to_string();
        while self.used.contains(&name) {
            name.push('_');
        }
        self.used.insert(name.clone());
        self.list.push(name);
        self.list.len() - 1
    }

    fn len(&self) -> usize {
        self.list.len()
    }
}

/// `first`, then every other candidate by id.
fn ranked(first: &[usize], m: usize) -> Ballot {
    let rest = (0..m).filter(|c| !first.contains(c));
    Ballot::ordinal(first.iter().copied().chain(rest).map(CandidateId).collect())
}

/// Every other candidate by descending id, then `last`.
fn ranked_last(last: &[usize], m: usize) -> Ballot {
    let rest = (0..m).rev().filter(|c| !last.contains(c));
    Ballot::ordinal(rest.chain(last.iter().copied()).map(CandidateId).collect())
}

fn election(names: Names, registered: Vec<Ballot>, pool: Option<Vec<Ballot>>) -> Result<Election> {
    let m = names.len();
    Election::from_parts(names.list, BallotKind::Ordinal, CandidateSet::full(m), None, registered, pool, None)
}

fn instance(e: Election, rule: Rule, action: Action, p: usize, budget: usize) -> Result<ControlInstance> {
    ControlInstance::new(e, rule, Problem::new(action, Mode::Constructive), CandidateId(p), budget)
}

fn vertices(names: &mut Names, g: &BipartiteGraph) -> (Vec<usize>, Vec<usize>) {
    let xs = g.left().iter().map(|x| names.add(x)).collect();
    let ys = g.right().iter().map(|y| names.add(y)).collect();
    (xs, ys)
}

/// Exact covers correspond one-to-one to Condorcet `#CCAV` solutions.
pub fn x3c_to_condorcet_ccav(src: &X3CInstance) -> Result<ReductionArtifact> {
    let k = src.k();
    if k < 3 {
        return Err(Error::ReductionPrecondition(format!("needs |B| >= 9, got {}", src.ground().len())));
    }
    let mut names = Names::new();
    let b: Vec<usize> = src.ground().iter().map(|x| names.add(x)).collect();
    let p = names.add("p");
    let m = names.len();
    let mut order = b.clone();
    order.push(p);
    let registered = vec![ranked(&order, m); k - 3];
    let pool = src
        .family()
        .iter()
        .map(|s| ranked(&[b[s[0]], b[s[1]], b[s[2]], p], m))
        .collect();
    let e = election(names, registered, Some(pool))?;
    Ok(ReductionArtifact {
        target: Target::CondorcetCcav,
        source: Source::X3C(src.clone()),
        relationship: Relationship::Parsimonious,
        instances: vec![instance(e, Rule::Condorcet, Action::AddVoters, p, k)?],
        blocker_count: 0,
    })
}

/// Perfect matchings are the difference of two 2-Approval `#CCAV` counts
/// with budgets `n` and `n − 1`.
pub fn matching_to_2approval_ccav(g: &BipartiteGraph) -> Result<ReductionArtifact> {
    let n = g.n();
    if n == 0 {
        return Err(Error::ReductionPrecondition("graph has no vertices".into()));
    }
    let mut names = Names::new();
    let p = names.add("p");
    let b1 = names.add("b1");
    let b2 = names.add("b2");
    let (xs, ys) = vertices(&mut names, g);
    let m = names.len();
    let registered = vec![ranked(&[p, b1], m), ranked(&[p, b2], m)];
    let pool = g.edges().iter().map(|&(x, y)| ranked(&[xs[x], ys[y]], m)).collect();
    let e = election(names, registered, Some(pool))?;
    let i = instance(e, Rule::KApproval(2), Action::AddVoters, p, n)?;
    let i_prime = i.with_budget(n - 1);
    Ok(ReductionArtifact {
        target: Target::TwoApprovalCcav,
        source: Source::Graph(g.clone()),
        relationship: Relationship::DifferenceOfTwo,
        instances: vec![i, i_prime],
        blocker_count: 0,
    })
}

/// Perfect matchings correspond one-to-one to 2-Approval `#CCDV` solutions.
///
/// Every vertex and `p` start with `D` points and every dummy with one, so
/// deleting `n` voters must take one point from each of the `2n` vertices.
/// `D` is at least 2 even when the graph's maximum degree is smaller, which
/// keeps the dummies strictly below `p`.
pub fn matching_to_2approval_ccdv(g: &BipartiteGraph) -> Result<ReductionArtifact> {
    let n = g.n();
    if n == 0 {
        return Err(Error::ReductionPrecondition("graph has no vertices".into()));
    }
    let d = g.max_degree().max(2);
    let deficits: Vec<usize> = (0..n)
        .map(|x| d - g.left_degree(x))
        .chain((0..n).map(|y| d - g.right_degree(y)))
        .collect();
    let t: usize = deficits.iter().sum();
    let mut names = Names::new();
    let p = names.add("p");
    let (xs, ys) = vertices(&mut names, g);
    let dummies: Vec<usize> = (1..=t + d).map(|i| names.add(&format!("b{i}"))).collect();
    let m = names.len();
    let mut registered: Vec<Ballot> = g.edges().iter().map(|&(x, y)| ranked(&[xs[x], ys[y]], m)).collect();
    let mut next = dummies.iter();
    for (v, &deficit) in xs.iter().chain(&ys).zip(&deficits) {
        for _ in 0..deficit {
            registered.push(ranked(&[*v, *next.next().expect("T + D dummies")], m));
        }
    }
    for _ in 0..d {
        registered.push(ranked(&[p, *next.next().expect("T + D dummies")], m));
    }
    let e = election(names, registered, None)?;
    Ok(ReductionArtifact {
        target: Target::TwoApprovalCcdv,
        source: Source::Graph(g.clone()),
        relationship: Relationship::Parsimonious,
        instances: vec![instance(e, Rule::KApproval(2), Action::DeleteVoters, p, n)?],
        blocker_count: 0,
    })
}

/// Base offset of the 3-Approval registered scores. The target profile
/// gives vertices `n − 2` points, so for `n = 1` every score is raised by one.
pub fn three_approval_offset(n: usize) -> usize {
    2usize.saturating_sub(n)
}

/// Perfect matchings correspond one-to-one to 3-Approval `#CCAV` solutions.
///
/// Registered scores are `p: a`, `d: a + n − 1`, every vertex `a + n − 2`
/// with `a` from [`three_approval_offset`]. Each registered voter approves
/// one target and two dummies used nowhere else.
pub fn matching_to_3approval_ccav(g: &BipartiteGraph) -> Result<ReductionArtifact> {
    let n = g.n();
    if n == 0 {
        return Err(Error::ReductionPrecondition("graph has no vertices".into()));
    }
    let a = three_approval_offset(n);
    let mut names = Names::new();
    let p = names.add("p");
    let d = names.add("d");
    let (xs, ys) = vertices(&mut names, g);
    let mut targets = vec![p; a];
    targets.extend(std::iter::repeat_n(d, a + n - 1));
    for &v in xs.iter().chain(&ys) {
        targets.extend(std::iter::repeat_n(v, a + n - 2));
    }
    let pairs: Vec<(usize, usize)> = (0..targets.len())
        .map(|i| (names.add(&format!("z{}", 2 * i + 1)), names.add(&format!("z{}", 2 * i + 2))))
        .collect();
    let m = names.len();
    let registered = targets
        .iter()
        .zip(&pairs)
        .map(|(&t, &(z1, z2))| ranked(&[t, z1, z2], m))
        .collect();
    let pool = g.edges().iter().map(|&(x, y)| ranked(&[p, xs[x], ys[y]], m)).collect();
    let e = election(names, registered, Some(pool))?;
    Ok(ReductionArtifact {
        target: Target::ThreeApprovalCcav,
        source: Source::Graph(g.clone()),
        relationship: Relationship::Parsimonious,
        instances: vec![instance(e, Rule::KApproval(3), Action::AddVoters, p, n)?],
        blocker_count: 0,
    })
}

/// Size of the guard cycle `S` in the Maximin construction.
///
/// Two guards would cancel each other's double pairs, so at least three
/// are used.
pub fn maximin_guard_count(n: usize) -> usize {
    (n + 1).max(3)
}

/// Maximin `#CCDC` instances `I(0..=n)` whose exact-size counts determine
/// the matching profile of `g`.
pub fn matching_to_maximin_ccdc(g: &BipartiteGraph) -> Result<ReductionArtifact> {
    let n = g.n();
    if n == 0 {
        return Err(Error::ReductionPrecondition("graph has no vertices".into()));
    }
    let adjacent = g.adjacent_edge_pairs();
    let mut names = Names::new();
    let p = names.add("p");
    let s: Vec<usize> = (0..maximin_guard_count(n)).map(|i| names.add(&format!("s{i}"))).collect();
    let e: Vec<usize> = (1..=g.edges().len()).map(|i| names.add(&format!("e{i}"))).collect();
    let mut blockers = Vec::new();
    for &(i, j) in &adjacent {
        for l in 0..=n {
            blockers.push((i, j, names.add(&format!("q{}_{}_{l}", i + 1, j + 1))));
        }
    }
    let m = names.len();
    let mut voters = Vec::new();
    let mut pair = |a: usize, b: usize, times: usize| {
        for _ in 0..times {
            voters.push(ranked(&[a, b], m));
            voters.push(ranked_last(&[a, b], m));
        }
    };
    for &si in &s {
        pair(si, p, 1);
    }
    for (i, &si) in s.iter().enumerate() {
        pair(si, s[(i + 1) % s.len()], 2);
    }
    for &si in &s {
        for &et in &e {
            pair(si, et, 2);
        }
    }
    for &(i, j, b) in &blockers {
        pair(e[i], b, 2);
        pair(e[j], b, 2);
    }
    let el = election(names, voters, None)?;
    let base = instance(el, Rule::Maximin, Action::DeleteCandidates, p, 0)?;
    Ok(ReductionArtifact {
        target: Target::MaximinCcdc,
        source: Source::Graph(g.clone()),
        relationship: Relationship::TuringProfile,
        instances: (0..=n).map(|k| base.with_budget(k)).collect(),
        blocker_count: blockers.len(),
    })
}
