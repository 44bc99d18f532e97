use crate::ballot::Ballot;
use crate::candidates::CandidateId;
use crate::control::{Action, ControlInstance, Mode};
use crate::count::{binomial, Count};
use crate::error::{Error, Result};
use crate::rules::Rule;

fn top_choice(b: &Ballot, inst: &ControlInstance) -> CandidateId {
    b.as_ordinal()
        .and_then(|o| o.first(inst.election().candidates()))
        .expect("ordinal ballot over nonempty candidates")
}

/// Plurality, adding voters, constructive.
///
/// For each number `j` of added voters whose top choice is `p`, every rival
/// `c` may receive at most `score(p) + j − score(c) − 1` added voters. The
/// rival choices are combined by a truncated polynomial product over the
/// remaining budget.
pub fn count_plurality_ccav(inst: &ControlInstance) -> Result<Count> {
    if inst.rule().normalized() != Rule::Plurality
        || inst.action() != Action::AddVoters
        || inst.mode() != Mode::Constructive
    {
        return Err(Error::WrongCell { algorithm: "plurality-av-dp", cell: inst.cell() });
    }
    let e = inst.election();
    let p = inst.designated();
    let rivals: Vec<CandidateId> = e.candidates().iter().filter(|&c| c != p).collect();
    let slot = |c: CandidateId| rivals.binary_search(&c).ok();

    let mut score = vec![0i64; rivals.len()];
    let mut score_p = 0i64;
    for b in e.registered() {
        match slot(top_choice(b, inst)) {
            Some(i) => score[i] += 1,
            None => score_p += 1,
        }
    }
    let mut pool = vec![0usize; rivals.len()];
    let mut pool_p = 0usize;
    for b in e.unregistered_voters().unwrap_or(&[]) {
        match slot(top_choice(b, inst)) {
            Some(i) => pool[i] += 1,
            None => pool_p += 1,
        }
    }

    let k = inst.effective_budget();
    let mut total = Count::default();
    for j in 0..=k.min(pool_p) {
        let room = k - j;
        let mut poly = vec![Count::default(); room + 1];
        poly[0] = Count::from(1u32);
        let mut feasible = true;
        for (i, &s) in score.iter().enumerate() {
            let limit = j as i64 + score_p - s - 1;
            if limit < 0 {
                feasible = false;
                break;
            }
            let limit = (limit as usize).min(pool[i]).min(room);
            let mut next = vec![Count::default(); room + 1];
            for (d, coeff) in poly.iter().enumerate() {
                if coeff == &Count::default() {
                    continue;
                }
                for t in 0..=limit.min(room - d) {
                    next[d + t] += coeff * binomial(pool[i], t);
                }
            }
            poly = next;
        }
        if feasible {
            total += binomial(pool_p, j) * poly.into_iter().sum::<Count>();
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

    fn inst(e: Election, k: usize) -> ControlInstance {
        let p = e.id("p").unwrap();
        ControlInstance::new(e, Rule::Plurality, Problem::new(Action::AddVoters, Mode::Constructive), p, k).unwrap()
    }

    #[test]
    fn two_supporters_needed() {
        let e = Election::builder(BallotKind::Ordinal)
            .candidates(&["p", "c1"])
            .vote(&["c1", "p"])
            .unregistered_votes(2, &["p", "c1"])
            .build()
            .unwrap();
        assert_eq!(count_plurality_ccav(&inst(e, 2)).unwrap(), Count::from(1u32));
    }

    #[test]
    fn empty_pool_reflects_status_quo() {
        let winning = Election::builder(BallotKind::Ordinal)
            .candidates(&["p", "a"])
            .vote(&["p", "a"])
            .voter_pool()
            .build()
            .unwrap();
        assert_eq!(count_plurality_ccav(&inst(winning, 3)).unwrap(), Count::from(1u32));
        let losing = Election::builder(BallotKind::Ordinal)
            .candidates(&["p", "a"])
            .vote(&["a", "p"])
            .voter_pool()
            .build()
            .unwrap();
        assert_eq!(count_plurality_ccav(&inst(losing, 3)).unwrap(), Count::from(0u32));
    }

    #[test]
    fn rejects_other_cells() {
        let e = Election::builder(BallotKind::Ordinal)
            .candidates(&["p", "a"])
            .vote(&["a", "p"])
            .build()
            .unwrap();
        let p = e.id("p").unwrap();
        let i = ControlInstance::new(e, Rule::Plurality, Problem::new(Action::DeleteVoters, Mode::Constructive), p, 1)
            .unwrap();
        assert!(matches!(count_plurality_ccav(&i), Err(Error::WrongCell { .. })));
    }
}
