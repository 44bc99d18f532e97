use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::ballot::{Ballot, BallotKind};
use crate::candidates::{CandidateId, CandidateSet};
use crate::election::Election;
use crate::error::{Error, Result};

/// Voting rules. All of them are evaluated in the unique-winner model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    Plurality,
    KApproval(usize),
    Approval,
    Condorcet,
    Maximin,
}

impl Rule {
    /// `k` for k-Approval (Plurality is 1-Approval).
    pub fn approval_width(self) -> Option<usize> {
        match self {
            Rule::Plurality => Some(1),
            Rule::KApproval(k) => Some(k),
            _ => None,
        }
    }

    pub fn ballot_kind(self) -> BallotKind {
        match self {
            Rule::Approval => BallotKind::Approval,
            _ => BallotKind::Ordinal,
        }
    }

    pub fn is_pairwise(self) -> bool {
        matches!(self, Rule::Condorcet | Rule::Maximin)
    }

    pub fn check_compatible(self, kind: BallotKind) -> Result<()> {
        if let Rule::KApproval(0) = self {
            return Err(Error::InvalidInstance("k-Approval needs k >= 1".into()));
        }
        if self.ballot_kind() != kind {
            return Err(Error::IncompatibleRule {
                rule: self.to_string(),
                kind: kind.to_string(),
            });
        }
        Ok(())
    }

    /// Plurality and 1-Approval are the same rule.
    pub fn normalized(self) -> Rule {
        match self {
            Rule::KApproval(1) => Rule::Plurality,
            r => r,
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Plurality => f.write_str("plurality"),
            Rule::KApproval(k) => write!(f, "k-approval:{k}"),
            Rule::Approval => f.write_str("approval"),
            Rule::Condorcet => f.write_str("condorcet"),
            Rule::Maximin => f.write_str("maximin"),
        }
    }
}

impl FromStr for Rule {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "plurality" => Ok(Rule::Plurality),
            "approval" => Ok(Rule::Approval),
            "condorcet" => Ok(Rule::Condorcet),
            "maximin" => Ok(Rule::Maximin),
            other => {
                let k = other
                    .strip_prefix("k-approval:")
                    .ok_or_else(|| format!("unknown rule {s:?}"))?;
                match k.parse::<usize>() {
                    Ok(k) if k >= 1 => Ok(Rule::KApproval(k)),
                    _ => Err(format!("k-approval needs a positive k, got {k:?}")),
                }
            }
        }
    }
}

/// `n_of(c, d)`: how many voters rank `c` above `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedMajorityGraph {
    size: usize,
    counts: Vec<u64>,
}

impl WeightedMajorityGraph {
    pub fn zero(size: usize) -> Self {
        WeightedMajorityGraph { size, counts: vec![0; size * size] }
    }

    pub fn n_of(&self, c: CandidateId, d: CandidateId) -> u64 {
        self.counts[c.0 * self.size + d.0]
    }

    pub(crate) fn add_ranking(&mut self, ranking: impl Iterator<Item = CandidateId>) {
        let ranked: Vec<CandidateId> = ranking.collect();
        for (i, &c) in ranked.iter().enumerate() {
            for &d in &ranked[i + 1..] {
                self.counts[c.0 * self.size + d.0] += 1;
            }
        }
    }
}

/// Weighted majority graph of `voters` restricted to `active`.
pub fn majority_graph(
    election: &Election,
    active: &CandidateSet,
    voters: &[&Ballot],
) -> Result<WeightedMajorityGraph> {
    if election.kind() != BallotKind::Ordinal {
        return Err(Error::OrdinalProfileRequired);
    }
    let mut graph = WeightedMajorityGraph::zero(election.universe_len());
    for ballot in voters {
        let b = ballot.as_ordinal().ok_or(Error::OrdinalProfileRequired)?;
        graph.add_ranking(b.restricted(active));
    }
    Ok(graph)
}

/// Scores of the active candidates under a score-based rule.
pub fn scores(
    election: &Election,
    rule: Rule,
    active: &CandidateSet,
    voters: &[&Ballot],
) -> Result<BTreeMap<CandidateId, u64>> {
    rule.check_compatible(election.kind())?;
    let mut out: BTreeMap<CandidateId, u64> = active.iter().map(|c| (c, 0)).collect();
    match rule {
        Rule::Plurality | Rule::KApproval(_) => {
            let k = rule.approval_width().unwrap_or(1);
            for ballot in voters {
                let b = ballot.as_ordinal().ok_or(Error::OrdinalProfileRequired)?;
                for c in b.top(k, active) {
                    *out.get_mut(&c).expect("active candidate") += 1;
                }
            }
        }
        Rule::Approval => {
            for ballot in voters {
                let b = ballot.as_approval().ok_or(Error::OrdinalProfileRequired)?;
                for c in b.approved().iter().filter(|&c| active.contains(c)) {
                    *out.get_mut(&c).expect("active candidate") += 1;
                }
            }
        }
        Rule::Maximin => {
            let graph = majority_graph(election, active, voters)?;
            let ids: Vec<CandidateId> = active.iter().collect();
            for (&c, score) in out.iter_mut() {
                *score = ids
                    .iter()
                    .filter(|&&d| d != c)
                    .map(|&d| graph.n_of(c, d))
                    .min()
                    .unwrap_or(voters.len() as u64);
            }
        }
        Rule::Condorcet => return Err(Error::NotAScoringRule(rule.to_string())),
    }
    Ok(out)
}

/// The unique winner of `(active, voters)`, if there is one.
pub fn unique_winner(
    election: &Election,
    rule: Rule,
    active: &CandidateSet,
    voters: &[&Ballot],
) -> Result<Option<CandidateId>> {
    rule.check_compatible(election.kind())?;
    let ids: Vec<CandidateId> = active.iter().collect();
    if ids.len() <= 1 {
        return Ok(ids.first().copied());
    }
    match rule {
        Rule::Condorcet => {
            let graph = majority_graph(election, active, voters)?;
            Ok(condorcet_winner(&ids, |c, d| graph.n_of(c, d)))
        }
        Rule::Maximin => {
            let graph = majority_graph(election, active, voters)?;
            Ok(maximin_winner(&ids, |c, d| graph.n_of(c, d)))
        }
        _ => Ok(sole_maximizer(scores(election, rule, active, voters)?)),
    }
}

/// The strict maximizer, or `None` when the top score is shared.
pub(crate) fn sole_maximizer<T: Copy>(scored: impl IntoIterator<Item = (T, u64)>) -> Option<T> {
    let mut best: Option<(T, u64)> = None;
    let mut tied = false;
    for (c, s) in scored {
        match best {
            Some((_, b)) if s < b => {}
            Some((_, b)) if s == b => tied = true,
            _ => {
                best = Some((c, s));
                tied = false;
            }
        }
    }
    if tied {
        None
    } else {
        best.map(|(c, _)| c)
    }
}

pub(crate) fn condorcet_winner<T: Copy + PartialEq>(
    active: &[T],
    n_of: impl Fn(T, T) -> u64,
) -> Option<T> {
    active.iter().copied().find(|&c| {
        active
            .iter()
            .all(|&d| d == c || n_of(c, d) > n_of(d, c))
    })
}

pub(crate) fn maximin_winner<T: Copy + PartialEq>(
    active: &[T],
    n_of: impl Fn(T, T) -> u64,
) -> Option<T> {
    sole_maximizer(active.iter().map(|&c| {
        let score = active
            .iter()
            .filter(|&&d| d != c)
            .map(|&d| n_of(c, d))
            .min()
            .unwrap_or(u64::MAX);
        (c, score)
    }))
}
