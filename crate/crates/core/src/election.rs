use std::collections::HashMap;

use crate::ballot::{Ballot, BallotKind};
use crate::candidates::{CandidateId, CandidateSet};
use crate::error::{Error, Result};
use crate::single_peaked::SocietalAxis;

/// An election over a universe of named candidates.
///
/// The universe is every declared name. Registered candidates (`C`) and the
/// optional pool of unregistered candidates (`A`) are disjoint subsets of it;
/// derived elections may leave some universe members outside both, in which
/// case those candidates never take part. Ordinal ballots rank the whole
/// universe and are projected onto whatever set is active.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Election {
    names: Vec<String>,
    index: HashMap<String, usize>,
    kind: BallotKind,
    candidates: CandidateSet,
    unregistered_candidates: Option<CandidateSet>,
    registered: Vec<Ballot>,
    unregistered_voters: Option<Vec<Ballot>>,
    axis: Option<SocietalAxis>,
}

pub(crate) fn is_token(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Election {
    pub fn builder(kind: BallotKind) -> ElectionBuilder {
        ElectionBuilder::new(kind)
    }

    pub fn from_parts(
        names: Vec<String>,
        kind: BallotKind,
        candidates: CandidateSet,
        unregistered_candidates: Option<CandidateSet>,
        registered: Vec<Ballot>,
        unregistered_voters: Option<Vec<Ballot>>,
        axis: Option<SocietalAxis>,
    ) -> Result<Self> {
        let n = names.len();
        let mut index = HashMap::with_capacity(n);
        for (i, name) in names.iter().enumerate() {
            if !is_token(name) {
                return Err(Error::InvalidElection(format!("invalid candidate token {name:?}")));
            }
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::InvalidElection(format!("duplicate candidate {name}")));
            }
        }
        if candidates.universe() != n {
            return Err(Error::InvalidElection("candidate set over wrong universe".into()));
        }
        if candidates.is_empty() {
            return Err(Error::EmptyCandidateSet);
        }
        if let Some(extra) = &unregistered_candidates {
            if extra.universe() != n {
                return Err(Error::InvalidElection("unregistered set over wrong universe".into()));
            }
            if !extra.intersection(&candidates).is_empty() {
                return Err(Error::InvalidElection(
                    "a candidate is both registered and unregistered".into(),
                ));
            }
        }
        let election = Election {
            names,
            index,
            kind,
            candidates,
            unregistered_candidates,
            registered,
            unregistered_voters,
            axis,
        };
        for ballot in election.all_ballots() {
            election.check_ballot(ballot)?;
        }
        if let Some(axis) = &election.axis {
            if axis.universe() != n || axis.order().len() != n {
                return Err(Error::InvalidElection("axis does not cover the universe".into()));
            }
        }
        Ok(election)
    }

    fn check_ballot(&self, ballot: &Ballot) -> Result<()> {
        let n = self.names.len();
        match ballot {
            Ballot::Ordinal(b) => {
                if self.kind != BallotKind::Ordinal {
                    return Err(Error::InvalidElection("ordinal ballot in approval election".into()));
                }
                let mut seen = vec![false; n];
                for &c in b.ranking() {
                    if c.0 >= n || std::mem::replace(&mut seen[c.0], true) {
                        return Err(Error::InvalidElection("ranking is not a permutation".into()));
                    }
                }
                if b.ranking().len() != n {
                    return Err(Error::InvalidElection("incomplete ranking".into()));
                }
            }
            Ballot::Approval(b) => {
                if self.kind != BallotKind::Approval {
                    return Err(Error::InvalidElection("approval ballot in ordinal election".into()));
                }
                if b.approved().universe() != n {
                    return Err(Error::InvalidElection("approval ballot over wrong universe".into()));
                }
            }
        }
        Ok(())
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, c: CandidateId) -> &str {
        &self.names[c.0]
    }

    pub fn id(&self, name: &str) -> Option<CandidateId> {
        self.index.get(name).map(|&i| CandidateId(i))
    }

    pub fn universe_len(&self) -> usize {
        self.names.len()
    }

    pub fn kind(&self) -> BallotKind {
        self.kind
    }

    pub fn candidates(&self) -> &CandidateSet {
        &self.candidates
    }

    pub fn unregistered_candidates(&self) -> Option<&CandidateSet> {
        self.unregistered_candidates.as_ref()
    }

    pub fn registered(&self) -> &[Ballot] {
        &self.registered
    }

    pub fn unregistered_voters(&self) -> Option<&[Ballot]> {
        self.unregistered_voters.as_deref()
    }

    pub fn axis(&self) -> Option<&SocietalAxis> {
        self.axis.as_ref()
    }

    /// `C ∪ A`.
    pub fn relevant_candidates(&self) -> CandidateSet {
        match &self.unregistered_candidates {
            Some(a) => self.candidates.union(a),
            None => self.candidates.clone(),
        }
    }

    pub fn all_ballots(&self) -> impl Iterator<Item = &Ballot> {
        self.registered
            .iter()
            .chain(self.unregistered_voters.iter().flatten())
    }

    pub fn with_registered(&self, registered: Vec<Ballot>) -> Result<Election> {
        Election::from_parts(
            self.names.clone(),
            self.kind,
            self.candidates.clone(),
            self.unregistered_candidates.clone(),
            registered,
            self.unregistered_voters.clone(),
            self.axis.clone(),
        )
    }

    pub fn with_unregistered_voters(&self, pool: Option<Vec<Ballot>>) -> Result<Election> {
        Election::from_parts(
            self.names.clone(),
            self.kind,
            self.candidates.clone(),
            self.unregistered_candidates.clone(),
            self.registered.clone(),
            pool,
            self.axis.clone(),
        )
    }

    pub fn with_candidates(
        &self,
        candidates: CandidateSet,
        unregistered: Option<CandidateSet>,
    ) -> Result<Election> {
        Election::from_parts(
            self.names.clone(),
            self.kind,
            candidates,
            unregistered,
            self.registered.clone(),
            self.unregistered_voters.clone(),
            self.axis.clone(),
        )
    }

    pub fn with_axis(&self, axis: Option<SocietalAxis>) -> Result<Election> {
        Election::from_parts(
            self.names.clone(),
            self.kind,
            self.candidates.clone(),
            self.unregistered_candidates.clone(),
            self.registered.clone(),
            self.unregistered_voters.clone(),
            axis,
        )
    }
}

/// Name-based construction, mostly for tests and generators.
///
/// Ballots are given as token lists: a full ranking for ordinal elections,
/// the approved set for approval elections.
#[derive(Debug, Clone)]
pub struct ElectionBuilder {
    kind: BallotKind,
    candidates: Vec<String>,
    unregistered_candidates: Option<Vec<String>>,
    registered: Vec<Vec<String>>,
    unregistered_voters: Option<Vec<Vec<String>>>,
    axis: Option<Vec<String>>,
}

fn owned<S: AsRef<str>>(tokens: &[S]) -> Vec<String> {
    tokens.iter().map(|s| s.as_ref().to_string()).collect()
}

impl ElectionBuilder {
    pub fn new(kind: BallotKind) -> Self {
        ElectionBuilder {
            kind,
            candidates: Vec::new(),
            unregistered_candidates: None,
            registered: Vec::new(),
            unregistered_voters: None,
            axis: None,
        }
    }

    pub fn candidates<S: AsRef<str>>(mut self, names: &[S]) -> Self {
        self.candidates = owned(names);
        self
    }

    pub fn unregistered_candidates<S: AsRef<str>>(mut self, names: &[S]) -> Self {
        self.unregistered_candidates = Some(owned(names));
        self
    }

    pub fn vote<S: AsRef<str>>(self, ballot: &[S]) -> Self {
        self.votes(1, ballot)
    }

    pub fn votes<S: AsRef<str>>(mut self, count: usize, ballot: &[S]) -> Self {
        let b = owned(ballot);
        self.registered.extend(std::iter::repeat_n(b, count));
        self
    }

    /// Declares an (initially empty) unregistered voter pool.
    pub fn voter_pool(mut self) -> Self {
        self.unregistered_voters.get_or_insert_with(Vec::new);
        self
    }

    pub fn unregistered_vote<S: AsRef<str>>(self, ballot: &[S]) -> Self {
        self.unregistered_votes(1, ballot)
    }

    pub fn unregistered_votes<S: AsRef<str>>(mut self, count: usize, ballot: &[S]) -> Self {
        let b = owned(ballot);
        self.unregistered_voters
            .get_or_insert_with(Vec::new)
            .extend(std::iter::repeat_n(b, count));
        self
    }

    pub fn axis<S: AsRef<str>>(mut self, order: &[S]) -> Self {
        self.axis = Some(owned(order));
        self
    }

    pub fn build(self) -> Result<Election> {
        let mut names = self.candidates.clone();
        names.extend(self.unregistered_candidates.iter().flatten().cloned());
        let n = names.len();
        let lookup: HashMap<&str, usize> =
            names.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let resolve = |tok: &String| -> Result<CandidateId> {
            lookup
                .get(tok.as_str())
                .map(|&i| CandidateId(i))
                .ok_or_else(|| Error::InvalidElection(format!("unknown candidate {tok}")))
        };
        let make_ballot = |tokens: &Vec<String>| -> Result<Ballot> {
            let ids = tokens.iter().map(resolve).collect::<Result<Vec<_>>>()?;
            Ok(match self.kind {
                BallotKind::Ordinal => Ballot::ordinal(ids),
                BallotKind::Approval => Ballot::approval(CandidateSet::from_ids(n, ids)),
            })
        };
        let candidates = CandidateSet::from_ids(n, (0..self.candidates.len()).map(CandidateId));
        let unregistered = self.unregistered_candidates.as_ref().map(|a| {
            CandidateSet::from_ids(
                n,
                (self.candidates.len()..self.candidates.len() + a.len()).map(CandidateId),
            )
        });
        let registered = self.registered.iter().map(make_ballot).collect::<Result<Vec<_>>>()?;
        let pool = self
            .unregistered_voters
            .as_ref()
            .map(|w| w.iter().map(make_ballot).collect::<Result<Vec<_>>>())
            .transpose()?;
        let axis = self
            .axis
            .as_ref()
            .map(|order| {
                let ids = order.iter().map(resolve).collect::<Result<Vec<_>>>()?;
                SocietalAxis::new(ids, n)
            })
            .transpose()?;
        Election::from_parts(names, self.kind, candidates, unregistered, registered, pool, axis)
    }
}
