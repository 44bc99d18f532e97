use crate::ballot::Ballot;
use crate::candidates::{CandidateId, CandidateSet};
use crate::control::{Action, ControlInstance, Mode};
use crate::count::{binomial, Count};
use crate::error::{Error, Result};
use crate::rules::Rule;
use crate::single_peaked::{verify_ballots_on, SocietalAxis};

#[derive(Clone, Copy, Default, Debug, PartialEq, Eq)]
struct Sides {
    left: usize,
    right: usize,
    at: usize,
}

fn sides<'a>(
    axis: &SocietalAxis,
    active: &CandidateSet,
    p: CandidateId,
    voters: impl IntoIterator<Item = &'a Ballot>,
) -> Sides {
    let mut s = Sides::default();
    for b in voters {
        let peak = b.as_ordinal().and_then(|o| o.first(active)).expect("ordinal ballot");
        match axis.position(peak).cmp(&axis.position(p)) {
            std::cmp::Ordering::Less => s.left += 1,
            std::cmp::Ordering::Greater => s.right += 1,
            std::cmp::Ordering::Equal => s.at += 1,
        }
    }
    s
}

/// Median-voter test: on a single-peaked profile over `active`, `p` is the
/// Condorcet winner iff strictly fewer than half of the voters peak on
/// either side of it.
pub fn median_voter_condition(
    axis: &SocietalAxis,
    active: &CandidateSet,
    p: CandidateId,
    voters: &[&Ballot],
) -> bool {
    if active.len() == 1 {
        return true;
    }
    let s = sides(axis, active, p, voters.iter().copied());
    let n = voters.len();
    2 * s.left < n && 2 * s.right < n
}

/// Condorcet, adding voters, constructive, single-peaked profile.
pub fn count_condorcet_sp_ccav(inst: &ControlInstance) -> Result<Count> {
    if inst.rule() != Rule::Condorcet || inst.action() != Action::AddVoters || inst.mode() != Mode::Constructive {
        return Err(Error::WrongCell { algorithm: "condorcet-sp-av", cell: inst.cell() });
    }
    let e = inst.election();
    let axis = e.axis().ok_or(Error::AxisRequired)?;
    let c = e.candidates();
    if !verify_ballots_on(e.all_ballots(), axis, c)? {
        return Err(Error::NotSinglePeaked);
    }
    if c.len() == 1 {
        return Ok(inst.total_actions());
    }
    let p = inst.designated();
    let v = sides(axis, c, p, e.registered());
    let w = sides(axis, c, p, e.unregistered_voters().unwrap_or(&[]));
    let n = e.registered().len();
    let k = inst.effective_budget();

    let mut total = Count::default();
    for la in 0..=w.left.min(k) {
        for lb in 0..=w.right.min(k - la) {
            let cab = binomial(w.left, la) * binomial(w.right, lb);
            for lm in 0..=w.at.min(k - la - lb) {
                let size = n + la + lb + lm;
                if 2 * (v.left + la) < size && 2 * (v.right + lb) < size {
                    total += &cab * binomial(w.at, lm);
                }
            }
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ballot::BallotKind;
    use crate::control::Problem;
    use crate::election::Election;
    use crate::oracle::count_by_enumeration;

    fn inst(e: Election, k: usize) -> ControlInstance {
        let p = e.id("p").unwrap();
        ControlInstance::new(e, Rule::Condorcet, Problem::new(Action::AddVoters, Mode::Constructive), p, k).unwrap()
    }

    #[test]
    fn both_additions_needed() {
        let e = Election::builder(BallotKind::Ordinal)
            .candidates(&["a", "p", "b"])
            .axis(&["a", "p", "b"])
            .vote(&["a", "p", "b"])
            .unregistered_votes(2, &["p", "a", "b"])
            .build()
            .unwrap();
        let i = inst(e, 2);
        assert_eq!(count_condorcet_sp_ccav(&i).unwrap(), Count::from(1u32));
        assert_eq!(count_by_enumeration(&i).unwrap(), Count::from(1u32));
    }

    #[test]
    fn status_quo_winner() {
        let e = Election::builder(BallotKind::Ordinal)
            .candidates(&["a", "p", "b"])
            .axis(&["a", "p", "b"])
            .vote(&["p", "a", "b"])
            .voter_pool()
            .build()
            .unwrap();
        assert_eq!(count_condorcet_sp_ccav(&inst(e, 0)).unwrap(), Count::from(1u32));
    }

    #[test]
    fn same_side_additions_never_help() {
        let e = Election::builder(BallotKind::Ordinal)
            .candidates(&["a", "p", "b"])
            .axis(&["a", "p", "b"])
            .vote(&["a", "p", "b"])
            .unregistered_votes(3, &["a", "p", "b"])
            .build()
            .unwrap();
        assert_eq!(count_condorcet_sp_ccav(&inst(e, 3)).unwrap(), Count::from(0u32));
    }

    #[test]
    fn requires_single_peaked_profile() {
        let e = Election::builder(BallotKind::Ordinal)
            .candidates(&["a", "p", "b"])
            .axis(&["a", "p", "b"])
            .vote(&["a", "b", "p"])
            .voter_pool()
            .build()
            .unwrap();
        assert!(matches!(count_condorcet_sp_ccav(&inst(e, 0)), Err(Error::NotSinglePeaked)));
    }
}
