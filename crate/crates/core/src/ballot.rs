use std::fmt;

use crate::candidates::{CandidateId, CandidateSet};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BallotKind {
    Ordinal,
    Approval,
}

impl fmt::Display for BallotKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BallotKind::Ordinal => "ordinal",
            BallotKind::Approval => "approval",
        })
    }
}

/// A strict ranking, most preferred first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrdinalBallot {
    ranking: Vec<CandidateId>,
}

impl OrdinalBallot {
    pub fn new(ranking: Vec<CandidateId>) -> Self {
        OrdinalBallot { ranking }
    }

    pub fn ranking(&self) -> &[CandidateId] {
        &self.ranking
    }

    /// Ranking restricted to `active`, relative order preserved.
    pub fn restricted<'a>(
        &'a self,
        active: &'a CandidateSet,
    ) -> impl Iterator<Item = CandidateId> + 'a {
        self.ranking.iter().copied().filter(|&c| active.contains(c))
    }

    /// The `k` most preferred members of `active`, or all of them if fewer.
    pub fn top<'a>(
        &'a self,
        k: usize,
        active: &'a CandidateSet,
    ) -> impl Iterator<Item = CandidateId> + 'a {
        self.restricted(active).take(k)
    }

    pub fn first(&self, active: &CandidateSet) -> Option<CandidateId> {
        self.restricted(active).next()
    }

    pub fn prefers(&self, a: CandidateId, b: CandidateId) -> bool {
        for &c in &self.ranking {
            if c == a {
                return true;
            }
            if c == b {
                return false;
            }
        }
        false
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ApprovalBallot {
    approved: CandidateSet,
}

impl ApprovalBallot {
    pub fn new(approved: CandidateSet) -> Self {
        ApprovalBallot { approved }
    }

    pub fn approved(&self) -> &CandidateSet {
        &self.approved
    }

    pub fn approves(&self, c: CandidateId) -> bool {
        self.approved.contains(c)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Ballot {
    Ordinal(OrdinalBallot),
    Approval(ApprovalBallot),
}

impl Ballot {
    pub fn ordinal(ranking: Vec<CandidateId>) -> Self {
        Ballot::Ordinal(OrdinalBallot::new(ranking))
    }

    pub fn approval(approved: CandidateSet) -> Self {
        Ballot::Approval(ApprovalBallot::new(approved))
    }

    pub fn kind(&self) -> BallotKind {
        match self {
            Ballot::Ordinal(_) => BallotKind::Ordinal,
            Ballot::Approval(_) => BallotKind::Approval,
        }
    }

    pub fn as_ordinal(&self) -> Option<&OrdinalBallot> {
        match self {
            Ballot::Ordinal(b) => Some(b),
            Ballot::Approval(_) => None,
        }
    }

    pub fn as_approval(&self) -> Option<&ApprovalBallot> {
        match self {
            Ballot::Approval(b) => Some(b),
            Ballot::Ordinal(_) => None,
        }
    }
}

/// Projects a ballot onto the active candidates: ordinal ballots keep their
/// relative order, approval ballots are intersected.
pub fn restrict_ballot(ballot: &Ballot, active: &CandidateSet) -> Result<Ballot> {
    if active.is_empty() {
        return Err(Error::EmptyCandidateSet);
    }
    Ok(match ballot {
        Ballot::Ordinal(b) => {
            if !active.iter().all(|c| b.ranking.contains(&c)) {
                return Err(Error::UniverseMismatch);
            }
            Ballot::ordinal(b.restricted(active).collect())
        }
        Ballot::Approval(b) => Ballot::approval(b.approved.intersection(active)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(v: &[usize]) -> Vec<CandidateId> {
        v.iter().map(|&i| CandidateId(i)).collect()
    }

    fn set(v: &[usize]) -> CandidateSet {
        CandidateSet::from_ids(3, ids(v))
    }

    // p = 0, a = 1, b = 2
    #[test]
    fn ordinal_projection_keeps_order() {
        let b = Ballot::ordinal(ids(&[0, 1, 2]));
        assert_eq!(restrict_ballot(&b, &set(&[0, 2])).unwrap(), Ballot::ordinal(ids(&[0, 2])));
        assert_eq!(restrict_ballot(&b, &set(&[0, 1, 2])).unwrap(), b);
    }

    #[test]
    fn approval_projection_intersects() {
        let b = Ballot::approval(set(&[0, 1]));
        assert_eq!(restrict_ballot(&b, &set(&[1, 2])).unwrap(), Ballot::approval(set(&[1])));
    }

    #[test]
    fn empty_active_set_is_rejected() {
        let b = Ballot::ordinal(ids(&[0, 1, 2]));
        assert!(matches!(restrict_ballot(&b, &set(&[])), Err(Error::EmptyCandidateSet)));
    }

    #[test]
    fn projection_is_idempotent_and_composes() {
        let b = Ballot::ordinal(ids(&[2, 0, 1]));
        let once = restrict_ballot(&b, &set(&[0, 1])).unwrap();
        assert_eq!(restrict_ballot(&once, &set(&[0, 1])).unwrap(), once);
        let twice = restrict_ballot(&once, &set(&[1])).unwrap();
        assert_eq!(twice, restrict_ballot(&b, &set(&[1])).unwrap());
    }
}
