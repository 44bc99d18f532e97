//! Single-peakedness with respect to a given societal axis.
//!
//! The axis is always supplied by the caller; nothing here tries to find one.

use crate::ballot::{Ballot, OrdinalBallot};
use crate::candidates::{CandidateId, CandidateSet};
use crate::election::Election;
use crate::error::{Error, Result};

/// A strict left-to-right order over the candidate universe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SocietalAxis {
    order: Vec<CandidateId>,
    position: Vec<usize>,
}

impl SocietalAxis {
    /// `order` must be a permutation of `0..universe`.
    pub fn new(order: Vec<CandidateId>, universe: usize) -> Result<Self> {
        let mut position = vec![usize::MAX; universe];
        for (i, &c) in order.iter().enumerate() {
            if c.0 >= universe || position[c.0] != usize::MAX {
                return Err(Error::InvalidElection("axis is not a permutation".into()));
            }
            position[c.0] = i;
        }
        if order.len() != universe {
            return Err(Error::InvalidElection("axis does not cover the universe".into()));
        }
        Ok(SocietalAxis { order, position })
    }

    pub fn order(&self) -> &[CandidateId] {
        &self.order
    }

    pub fn universe(&self) -> usize {
        self.position.len()
    }

    pub fn position(&self, c: CandidateId) -> usize {
        self.position[c.0]
    }

    /// The axis order restricted to `subset`.
    pub fn restricted(&self, subset: &CandidateSet) -> Vec<CandidateId> {
        self.order.iter().copied().filter(|&c| subset.contains(c)).collect()
    }
}

/// Every prefix of the ranking must occupy a contiguous stretch of the axis.
fn prefixes_are_intervals(ranking: impl Iterator<Item = usize>) -> bool {
    let mut span: Option<(usize, usize)> = None;
    for pos in ranking {
        span = match span {
            None => Some((pos, pos)),
            Some((lo, hi)) if pos + 1 == lo => Some((pos, hi)),
            Some((lo, hi)) if pos == hi + 1 => Some((lo, pos)),
            Some(_) => return false,
        };
    }
    true
}

pub fn is_single_peaked_wrt(ballot: &OrdinalBallot, axis: &SocietalAxis) -> Result<bool> {
    if ballot.ranking().len() != axis.universe()
        || ballot.ranking().iter().any(|c| c.0 >= axis.universe())
    {
        return Err(Error::UniverseMismatch);
    }
    Ok(prefixes_are_intervals(
        ballot.ranking().iter().map(|&c| axis.position(c)),
    ))
}

/// Single-peakedness of the ballot projected onto `subset`, against the axis
/// projected onto the same subset.
pub fn is_single_peaked_on(ballot: &OrdinalBallot, axis: &SocietalAxis, subset: &CandidateSet) -> bool {
    let mut local = vec![usize::MAX; axis.universe()];
    for (i, c) in axis.restricted(subset).into_iter().enumerate() {
        local[c.0] = i;
    }
    prefixes_are_intervals(ballot.restricted(subset).map(|c| local[c.0]))
}

/// Checks every registered and unregistered ballot against the election's axis.
pub fn verify_profile(election: &Election) -> Result<bool> {
    let axis = election.axis().ok_or(Error::AxisRequired)?;
    for ballot in election.all_ballots() {
        let b = ballot.as_ordinal().ok_or(Error::OrdinalProfileRequired)?;
        if !is_single_peaked_wrt(b, axis)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks `ballots` projected onto `subset`.
pub fn verify_ballots_on<'a>(
    ballots: impl IntoIterator<Item = &'a Ballot>,
    axis: &SocietalAxis,
    subset: &CandidateSet,
) -> Result<bool> {
    for ballot in ballots {
        let b = ballot.as_ordinal().ok_or(Error::OrdinalProfileRequired)?;
        if !is_single_peaked_on(b, axis, subset) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ballot::BallotKind;
    use itertools::Itertools;

    fn ballot(ids: &[usize]) -> OrdinalBallot {
        OrdinalBallot::new(ids.iter().map(|&i| CandidateId(i)).collect())
    }

    fn axis(ids: &[usize]) -> SocietalAxis {
        SocietalAxis::new(ids.iter().map(|&i| CandidateId(i)).collect(), ids.len()).unwrap()
    }

    // a = 0, p = 1, b = 2; axis a < p < b
    #[test]
    fn valley_is_rejected() {
        assert!(!is_single_peaked_wrt(&ballot(&[0, 2, 1]), &axis(&[0, 1, 2])).unwrap());
        assert!(is_single_peaked_wrt(&ballot(&[1, 2, 0]), &axis(&[0, 1, 2])).unwrap());
    }

    #[test]
    fn two_candidates_are_always_single_peaked() {
        assert!(is_single_peaked_wrt(&ballot(&[1, 0]), &axis(&[0, 1])).unwrap());
        assert!(is_single_peaked_wrt(&ballot(&[0, 1]), &axis(&[0, 1])).unwrap());
    }

    #[test]
    fn mismatched_universe_is_an_error() {
        assert!(matches!(
            is_single_peaked_wrt(&ballot(&[0, 1]), &axis(&[0, 1, 2])),
            Err(Error::UniverseMismatch)
        ));
    }

    fn by_triples(b: &OrdinalBallot, ax: &SocietalAxis) -> bool {
        let rank = |c: CandidateId| b.ranking().iter().position(|&d| d == c).unwrap();
        let order = ax.order();
        for (i, j, k) in (0..order.len()).tuple_combinations() {
            let (a, m, c) = (order[i], order[j], order[k]);
            // a L m L c, check both orientations.
            if rank(a) < rank(m) && rank(m) > rank(c) {
                return false;
            }
        }
        true
    }

    #[test]
    fn interval_check_matches_triple_definition() {
        for m in 1..=6 {
            let ax = axis(&(0..m).collect::<Vec<_>>());
            for perm in (0..m).permutations(m) {
                let b = ballot(&perm);
                assert_eq!(is_single_peaked_wrt(&b, &ax).unwrap(), by_triples(&b, &ax), "{perm:?}");
            }
        }
    }

    #[test]
    fn profile_verification() {
        let sp = Election::builder(BallotKind::Ordinal)
            .candidates(&["a", "p", "b"])
            .vote(&["p", "b", "a"])
            .vote(&["a", "p", "b"])
            .axis(&["a", "p", "b"])
            .build()
            .unwrap();
        assert!(verify_profile(&sp).unwrap());
        let not_sp = sp.with_registered(vec![crate::ballot::Ballot::Ordinal(ballot(&[0, 2, 1]))]).unwrap();
        assert!(!verify_profile(&not_sp).unwrap());
        let empty = sp.with_registered(vec![]).unwrap();
        assert!(verify_profile(&empty).unwrap());
        let no_axis = sp.with_axis(None).unwrap();
        assert!(matches!(verify_profile(&no_axis), Err(Error::AxisRequired)));
    }
}
