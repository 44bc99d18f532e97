use std::collections::HashMap;

use num_traits::Zero;

use crate::candidates::CandidateId;
use crate::control::{Action, ControlInstance, Mode};
use crate::count::Count;
use crate::error::{Error, Result};
use crate::single_peaked::verify_ballots_on;

/// Identifies a voter: registered (`V`) or in the pool (`W`), by index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct VoterRef {
    pub registered: bool,
    pub index: usize,
}

#[derive(Clone, Copy, Debug)]
struct Voter {
    lo: usize,
    hi: usize,
    pooled: bool,
    has_p: bool,
}

const OPEN: i32 = i32::MAX;

struct Dp<'a> {
    order: &'a [Voter],
    k: usize,
    p: usize,
    z0: i32,
    budget: usize,
    /// For each position, whether some registered voter precedes it.
    registered_before: Vec<bool>,
    memo: HashMap<(usize, i32, Vec<i32>), Vec<Count>>,
}

impl Dp<'_> {
    fn initial_caps(&self, v: usize) -> Vec<i32> {
        let lo = self.order[v].lo;
        (lo..lo + self.k).map(|q| if q == self.p { OPEN } else { self.z0 - 1 }).collect()
    }

    /// Subsets of pooled voters before `v` (sized by index) that, together
    /// with every registered voter before `v` and `v` itself, give `p`
    /// exactly `z` points and every other candidate at most its cap.
    fn f(&mut self, v: usize, z: i32, caps: Vec<i32>) -> Vec<Count> {
        let key = (v, z, caps);
        if let Some(r) = self.memo.get(&key) {
            return r.clone();
        }
        let (_, _, caps) = &key;
        let voter = self.order[v];
        let mut out = vec![Count::zero(); self.budget + 1];
        let z = z - i32::from(voter.has_p);
        let rest: Vec<i32> = caps.iter().map(|&c| if c == OPEN { OPEN } else { c - 1 }).collect();
        if z >= 0 && rest.iter().all(|&c| c >= 0) {
            if !self.registered_before[v] && z == 0 {
                out[0] += 1u32;
            }
            for w in (0..v).rev() {
                let pred = self.order[w];
                let caps_w: Vec<i32> = (pred.lo..=pred.hi)
                    .map(|q| {
                        if q == self.p {
                            OPEN
                        } else if q >= voter.lo {
                            rest[q - voter.lo]
                        } else {
                            self.z0 - 1
                        }
                    })
                    .collect();
                let shift = usize::from(pred.pooled);
                let sub = self.f(w, z, caps_w);
                for (t, c) in sub.into_iter().enumerate() {
                    if t + shift <= self.budget {
                        out[t + shift] += c;
                    }
                }
                if !pred.pooled {
                    break;
                }
            }
        }
        self.memo.insert(key.clone(), out.clone());
        out
    }
}

/// k-Approval, adding voters, constructive, single-peaked profile, with
/// registered voters ordered before pooled ones among equal blocks.
pub fn count_kapproval_sp_ccav(inst: &ControlInstance) -> Result<Count> {
    count_kapproval_sp_ccav_with_order(inst, |v| (u64::from(!v.registered) << 32) | v.index as u64)
}

/// As [`count_kapproval_sp_ccav`], breaking ties between voters with the
/// same top-`k` block by ascending `key`.
///
/// With more than `k` candidates every top-`k` set is an axis interval.
/// Voters are processed by the right end of their interval; a candidate
/// left of the current interval is never approved again, so the state is
/// `p`'s remaining score and the remaining caps on the current interval.
pub fn count_kapproval_sp_ccav_with_order<K: Ord>(
    inst: &ControlInstance,
    key: impl Fn(VoterRef) -> K,
) -> Result<Count> {
    let k = match inst.rule().approval_width() {
        Some(k) if inst.action() == Action::AddVoters && inst.mode() == Mode::Constructive => k,
        _ => return Err(Error::WrongCell { algorithm: "kapproval-sp-av-dp", cell: inst.cell() }),
    };
    let e = inst.election();
    let axis = e.axis().ok_or(Error::AxisRequired)?;
    let c = e.candidates();
    if !verify_ballots_on(e.all_ballots(), axis, c)? {
        return Err(Error::NotSinglePeaked);
    }
    let m = c.len();
    if m == 1 {
        return Ok(inst.total_actions());
    }
    if m <= k {
        return Ok(Count::zero());
    }
    let line: Vec<CandidateId> = axis.restricted(c);
    let mut pos = vec![usize::MAX; e.universe_len()];
    for (i, x) in line.iter().enumerate() {
        pos[x.index()] = i;
    }
    let p = pos[inst.designated().index()];

    let pool = e.unregistered_voters().unwrap_or(&[]);
    let mut keyed = Vec::new();
    for (registered, ballots) in [(true, e.registered()), (false, pool)] {
        for (index, b) in ballots.iter().enumerate() {
            let top: Vec<usize> = b.as_ordinal().expect("ordinal").top(k, c).map(|x| pos[x.index()]).collect();
            let lo = *top.iter().min().expect("k >= 1");
            let hi = *top.iter().max().expect("k >= 1");
            debug_assert_eq!(hi - lo + 1, k);
            let voter = Voter { lo, hi, pooled: !registered, has_p: top.contains(&p) };
            keyed.push((hi, key(VoterRef { registered, index }), voter));
        }
    }
    keyed.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    let order: Vec<Voter> = keyed.into_iter().map(|(_, _, v)| v).collect();

    let mut registered_before = Vec::with_capacity(order.len());
    let mut seen = false;
    for v in &order {
        registered_before.push(seen);
        seen |= !v.pooled;
    }
    let last_registered = order.iter().rposition(|v| !v.pooled);
    let budget = inst.effective_budget();

    let mut total = Count::zero();
    for z0 in 1..=order.len() as i32 {
        let mut dp = Dp { order: &order, k, p, z0, budget, registered_before: registered_before.clone(), memo: HashMap::new() };
        let start = match last_registered {
            Some(l) => {
                let caps = dp.initial_caps(l);
                total += dp.f(l, z0, caps).into_iter().sum::<Count>();
                l + 1
            }
            None => 0,
        };
        if budget == 0 {
            continue;
        }
        for w in start..order.len() {
            let caps = dp.initial_caps(w);
            total += dp.f(w, z0, caps).into_iter().take(budget).sum::<Count>();
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
    use crate::rules::Rule;

    fn inst(e: Election, k: usize, budget: usize) -> ControlInstance {
        let p = e.id("p").unwrap();
        ControlInstance::new(e, Rule::KApproval(k), Problem::new(Action::AddVoters, Mode::Constructive), p, budget)
            .unwrap()
    }

    #[test]
    fn breaking_a_tie_with_one_voter() {
        let e = Election::builder(BallotKind::Ordinal)
            .candidates(&["a", "p", "b", "c"])
            .axis(&["a", "p", "b", "c"])
            .vote(&["a", "p", "b", "c"])
            .unregistered_vote(&["b", "p", "a", "c"])
            .build()
            .unwrap();
        let i = inst(e, 2, 1);
        assert_eq!(count_kapproval_sp_ccav(&i).unwrap(), Count::from(1u32));
        assert_eq!(count_by_enumeration(&i).unwrap(), Count::from(1u32));
    }

    #[test]
    fn empty_pool_and_zero_budget() {
        let winning = Election::builder(BallotKind::Ordinal)
            .candidates(&["a", "p", "b"])
            .axis(&["a", "p", "b"])
            .vote(&["p", "a", "b"])
            .voter_pool()
            .build()
            .unwrap();
        assert_eq!(count_kapproval_sp_ccav(&inst(winning, 1, 2)).unwrap(), Count::from(1u32));
        let losing = Election::builder(BallotKind::Ordinal)
            .candidates(&["a", "p", "b"])
            .axis(&["a", "p", "b"])
            .vote(&["a", "p", "b"])
            .unregistered_vote(&["p", "a", "b"])
            .build()
            .unwrap();
        assert_eq!(count_kapproval_sp_ccav(&inst(losing, 1, 0)).unwrap(), Count::from(0u32));
    }

    #[test]
    fn order_of_equal_blocks_is_irrelevant() {
        let e = Election::builder(BallotKind::Ordinal)
            .candidates(&["a", "p", "b", "c"])
            .axis(&["a", "p", "b", "c"])
            .votes(2, &["a", "p", "b", "c"])
            .vote(&["b", "c", "p", "a"])
            .unregistered_votes(2, &["p", "a", "b", "c"])
            .unregistered_vote(&["a", "p", "b", "c"])
            .unregistered_vote(&["c", "b", "p", "a"])
            .build()
            .unwrap();
        for budget in 0..5 {
            let i = inst(e.clone(), 2, budget);
            let want = count_by_enumeration(&i).unwrap();
            assert_eq!(count_kapproval_sp_ccav(&i).unwrap(), want);
            assert_eq!(count_kapproval_sp_ccav_with_order(&i, |v| (v.registered, usize::MAX - v.index)).unwrap(), want);
        }
    }
}
