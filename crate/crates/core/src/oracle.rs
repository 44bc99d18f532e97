use itertools::Itertools;

use crate::ballot::Ballot;
use crate::candidates::{CandidateId, CandidateSet};
use crate::control::{Action, ControlInstance};
use crate::count::{binomial, Count};
use crate::error::{Error, Result};
use crate::rules::{condorcet_winner, maximin_winner, sole_maximizer, unique_winner, Rule};

pub const DEFAULT_CAP: u128 = 1 << 24;

/// Exhaustive counter over action subsets, ordered by size then
/// lexicographically over pool indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Oracle {
    cap: u128,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle { cap: DEFAULT_CAP }
    }
}

impl Oracle {
    pub fn new(cap: u128) -> Self {
        Oracle { cap }
    }

    pub fn cap(&self) -> u128 {
        self.cap
    }

    fn check_cap(&self, pool: usize, sizes: impl Iterator<Item = usize>) -> Result<()> {
        let total: Count = sizes.map(|i| binomial(pool, i)).sum();
        if total > Count::from(self.cap) {
            return Err(Error::OracleCapExceeded { subsets: total.to_string(), cap: self.cap });
        }
        Ok(())
    }

    /// Whether enumerating `inst` stays within the cap.
    pub fn fits(&self, inst: &ControlInstance) -> bool {
        self.check_cap(inst.pool_size(), 0..=inst.effective_budget()).is_ok()
    }

    pub fn count(&self, inst: &ControlInstance) -> Result<Count> {
        Ok(self.counts_by_size(inst)?.into_iter().sum())
    }

    /// Counts of successful subsets of each size `0..=min(budget, pool)`.
    pub fn counts_by_size(&self, inst: &ControlInstance) -> Result<Vec<Count>> {
        let pool = inst.pool_size();
        let top = inst.effective_budget();
        self.check_cap(pool, 0..=top)?;
        let eval = Evaluator::new(inst);
        Ok((0..=top).map(|i| Count::from(eval.count_size(inst, i))).collect())
    }

    /// Successful subsets of size exactly `i`, regardless of the budget.
    pub fn count_exact_size(&self, inst: &ControlInstance, i: usize) -> Result<Count> {
        let pool = inst.pool_size();
        if i > pool {
            return Ok(Count::default());
        }
        self.check_cap(pool, std::iter::once(i))?;
        Ok(Count::from(Evaluator::new(inst).count_size(inst, i)))
    }
}

pub fn count_by_enumeration(inst: &ControlInstance) -> Result<Count> {
    Oracle::default().count(inst)
}

pub fn count_exact_size(inst: &ControlInstance, i: usize) -> Result<Count> {
    Oracle::default().count_exact_size(inst, i)
}

/// Active candidates and voters after applying the pool members `subset`.
pub fn apply_action<'a>(
    inst: &'a ControlInstance,
    subset: &[usize],
) -> (CandidateSet, Vec<&'a Ballot>) {
    let e = inst.election();
    let registered = e.registered();
    match inst.action() {
        Action::AddVoters => {
            let pool = e.unregistered_voters().unwrap_or(&[]);
            let voters = registered.iter().chain(subset.iter().map(|&i| &pool[i])).collect();
            (e.candidates().clone(), voters)
        }
        Action::DeleteVoters => {
            let voters = registered
                .iter()
                .enumerate()
                .filter(|(i, _)| !subset.contains(i))
                .map(|(_, b)| b)
                .collect();
            (e.candidates().clone(), voters)
        }
        Action::AddCandidates | Action::DeleteCandidates => {
            let pool = inst.candidate_pool();
            let mut active = e.candidates().clone();
            for &i in subset {
                if inst.action() == Action::AddCandidates {
                    active.insert(pool[i]);
                } else {
                    active.remove(pool[i]);
                }
            }
            (active, registered.iter().collect())
        }
    }
}

/// Unique winner after the action, via the reference rule implementations.
pub fn outcome(inst: &ControlInstance, subset: &[usize]) -> Result<Option<CandidateId>> {
    let (active, voters) = apply_action(inst, subset);
    unique_winner(inst.election(), inst.rule(), &active, &voters)
}

/// Precomputed per-ballot contributions so each subset costs a few vector
/// additions instead of re-tallying the whole profile.
enum Evaluator {
    VoterScores { ids: Vec<CandidateId>, base: Vec<i64>, deltas: Vec<Vec<i64>>, sign: i64 },
    VoterPairwise { ids: Vec<CandidateId>, base: Vec<i64>, deltas: Vec<Vec<i64>>, sign: i64, maximin: bool },
    CandApproval { scores: Vec<u64> },
    CandTopK { k: usize, rankings: Vec<Vec<CandidateId>> },
    CandPairwise { n: Vec<Vec<u64>>, maximin: bool },
}

impl Evaluator {
    fn new(inst: &ControlInstance) -> Self {
        let e = inst.election();
        let rule = inst.rule().normalized();
        if inst.action().is_voter_control() {
            let c: Vec<CandidateId> = e.candidates().iter().collect();
            let m = c.len();
            let (base_ballots, pool, sign): (&[Ballot], &[Ballot], i64) = match inst.action() {
                Action::AddVoters => (e.registered(), e.unregistered_voters().unwrap_or(&[]), 1),
                _ => (e.registered(), e.registered(), -1),
            };
            if rule.is_pairwise() {
                let vec_of = |b: &Ballot| -> Vec<i64> {
                    let o = b.as_ordinal().expect("ordinal ballot");
                    let pos: Vec<usize> = {
                        let mut pos = vec![0; m];
                        for (r, x) in o.restricted(e.candidates()).enumerate() {
                            pos[c.binary_search(&x).expect("active")] = r;
                        }
                        pos
                    };
                    let mut v = vec![0; m * m];
                    for i in 0..m {
                        for j in 0..m {
                            if i != j && pos[i] < pos[j] {
                                v[i * m + j] = 1;
                            }
                        }
                    }
                    v
                };
                let base = sum_vecs(m * m, base_ballots.iter().map(vec_of));
                let deltas = pool.iter().map(vec_of).collect();
                Evaluator::VoterPairwise { ids: c, base, deltas, sign, maximin: rule == Rule::Maximin }
            } else {
                let vec_of = |b: &Ballot| -> Vec<i64> {
                    let mut v = vec![0; m];
                    match rule.approval_width() {
                        Some(k) => {
                            for x in b.as_ordinal().expect("ordinal ballot").top(k, e.candidates()) {
                                v[c.binary_search(&x).expect("active")] = 1;
                            }
                        }
                        None => {
                            let a = b.as_approval().expect("approval ballot");
                            for (i, &x) in c.iter().enumerate() {
                                v[i] = a.approves(x) as i64;
                            }
                        }
                    }
                    v
                };
                let base = sum_vecs(m, base_ballots.iter().map(vec_of));
                let deltas = pool.iter().map(vec_of).collect();
                Evaluator::VoterScores { ids: c, base, deltas, sign }
            }
        } else {
            let u = e.universe_len();
            let voters = e.registered();
            match rule {
                Rule::Approval => {
                    let mut scores = vec![0; u];
                    for b in voters {
                        for x in b.as_approval().expect("approval ballot").approved().iter() {
                            scores[x.index()] += 1;
                        }
                    }
                    Evaluator::CandApproval { scores }
                }
                Rule::Plurality | Rule::KApproval(_) => Evaluator::CandTopK {
                    k: rule.approval_width().unwrap_or(1),
                    rankings: voters
                        .iter()
                        .map(|b| b.as_ordinal().expect("ordinal ballot").ranking().to_vec())
                        .collect(),
                },
                _ => {
                    let mut n = vec![vec![0u64; u]; u];
                    for b in voters {
                        let r = b.as_ordinal().expect("ordinal ballot").ranking();
                        for (i, &x) in r.iter().enumerate() {
                            for &y in &r[i + 1..] {
                                n[x.index()][y.index()] += 1;
                            }
                        }
                    }
                    Evaluator::CandPairwise { n, maximin: rule == Rule::Maximin }
                }
            }
        }
    }

    fn count_size(&self, inst: &ControlInstance, size: usize) -> u64 {
        let pool = inst.pool_size();
        let mut hits = 0;
        match self {
            Evaluator::VoterScores { ids, base, deltas, sign } => {
                let mut cur = base.clone();
                for subset in (0..pool).combinations(size) {
                    cur.copy_from_slice(base);
                    for &i in &subset {
                        for (a, d) in cur.iter_mut().zip(&deltas[i]) {
                            *a += sign * d;
                        }
                    }
                    let winner = sole_maximizer(cur.iter().enumerate().map(|(i, &s)| (i, s as u64)));
                    let winner = if cur.len() == 1 { Some(0) } else { winner };
                    hits += inst.goal_met(winner.map(|w| ids[w])) as u64;
                }
            }
            Evaluator::VoterPairwise { ids, base, deltas, sign, maximin } => {
                let m = ids.len();
                let idx: Vec<usize> = (0..m).collect();
                let mut cur = base.clone();
                for subset in (0..pool).combinations(size) {
                    cur.copy_from_slice(base);
                    for &i in &subset {
                        for (a, d) in cur.iter_mut().zip(&deltas[i]) {
                            *a += sign * d;
                        }
                    }
                    let n_of = |a: usize, b: usize| cur[a * m + b] as u64;
                    let winner = if m == 1 {
                        Some(0)
                    } else if *maximin {
                        maximin_winner(&idx, n_of)
                    } else {
                        condorcet_winner(&idx, n_of)
                    };
                    hits += inst.goal_met(winner.map(|w| ids[w])) as u64;
                }
            }
            Evaluator::CandApproval { scores } => {
                let cand = inst.candidate_pool();
                for subset in (0..pool).combinations(size) {
                    let active = active_ids(inst, &cand, &subset);
                    let winner = if active.len() == 1 {
                        Some(active[0])
                    } else {
                        sole_maximizer(active.iter().map(|&c| (c, scores[c.index()])))
                    };
                    hits += inst.goal_met(winner) as u64;
                }
            }
            Evaluator::CandTopK { k, rankings } => {
                let cand = inst.candidate_pool();
                let u = inst.election().universe_len();
                let mut tally = vec![0u64; u];
                let mut member = vec![false; u];
                for subset in (0..pool).combinations(size) {
                    let active = active_ids(inst, &cand, &subset);
                    for &c in &active {
                        member[c.index()] = true;
                        tally[c.index()] = 0;
                    }
                    for r in rankings {
                        r.iter().filter(|c| member[c.index()]).take(*k).for_each(|c| tally[c.index()] += 1);
                    }
                    let winner = if active.len() == 1 {
                        Some(active[0])
                    } else {
                        sole_maximizer(active.iter().map(|&c| (c, tally[c.index()])))
                    };
                    for &c in &active {
                        member[c.index()] = false;
                    }
                    hits += inst.goal_met(winner) as u64;
                }
            }
            Evaluator::CandPairwise { n, maximin } => {
                let cand = inst.candidate_pool();
                for subset in (0..pool).combinations(size) {
                    let active = active_ids(inst, &cand, &subset);
                    let n_of = |a: CandidateId, b: CandidateId| n[a.index()][b.index()];
                    let winner = if active.len() == 1 {
                        Some(active[0])
                    } else if *maximin {
                        maximin_winner(&active, n_of)
                    } else {
                        condorcet_winner(&active, n_of)
                    };
                    hits += inst.goal_met(winner) as u64;
                }
            }
        }
        hits
    }
}

fn active_ids(inst: &ControlInstance, pool: &[CandidateId], subset: &[usize]) -> Vec<CandidateId> {
    let mut active = inst.election().candidates().clone();
    for &i in subset {
        if inst.action() == Action::AddCandidates {
            active.insert(pool[i]);
        } else {
            active.remove(pool[i]);
        }
    }
    active.iter().collect()
}

fn sum_vecs(len: usize, vecs: impl Iterator<Item = Vec<i64>>) -> Vec<i64> {
    let mut acc = vec![0; len];
    for v in vecs {
        for (a, x) in acc.iter_mut().zip(v) {
            *a += x;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ballot::BallotKind;
    use crate::control::{Mode, Problem};
    use crate::election::Election;

    fn plurality_ccav() -> ControlInstance {
        let e = Election::builder(BallotKind::Ordinal)
            .candidates(&["p", "c1"])
            .vote(&["c1", "p"])
            .unregistered_votes(2, &["p", "c1"])
            .build()
            .unwrap();
        let p = e.id("p").unwrap();
        ControlInstance::new(e, Rule::Plurality, Problem::new(Action::AddVoters, Mode::Constructive), p, 2)
            .unwrap()
    }

    fn brute(inst: &ControlInstance) -> u64 {
        let pool = inst.pool_size();
        (0..1u32 << pool)
            .filter(|m| m.count_ones() as usize <= inst.budget())
            .filter(|m| {
                let subset: Vec<usize> = (0..pool).filter(|i| m >> i & 1 == 1).collect();
                inst.goal_met(outcome(inst, &subset).unwrap())
            })
            .count() as u64
    }

    #[test]
    fn plurality_example_counts_one() {
        let inst = plurality_ccav();
        assert_eq!(brute(&inst), 1);
        assert_eq!(count_by_enumeration(&inst).unwrap(), Count::from(1u32));
        assert_eq!(count_exact_size(&inst, 2).unwrap(), Count::from(1u32));
        assert_eq!(count_exact_size(&inst, 1).unwrap(), Count::from(0u32));
        assert_eq!(count_exact_size(&inst, 3).unwrap(), Count::from(0u32));
        let destructive = inst.with_mode(Mode::Destructive);
        assert_eq!(count_by_enumeration(&destructive).unwrap(), Count::from(3u32));
    }

    #[test]
    fn zero_budget_reflects_status_quo() {
        let inst = plurality_ccav().with_budget(0);
        assert_eq!(count_by_enumeration(&inst).unwrap(), Count::from(0u32));
        let d = inst.with_mode(Mode::Destructive);
        assert_eq!(count_by_enumeration(&d).unwrap(), Count::from(1u32));
    }

    #[test]
    fn approval_ccac_is_zero_when_p_does_not_win() {
        let e = Election::builder(BallotKind::Approval)
            .candidates(&["p", "a"])
            .unregistered_candidates(&["x", "y"])
            .vote(&["a"])
            .vote(&["a", "p", "x"])
            .build()
            .unwrap();
        let p = e.id("p").unwrap();
        let inst =
            ControlInstance::new(e, Rule::Approval, Problem::new(Action::AddCandidates, Mode::Constructive), p, 2)
                .unwrap();
        assert_eq!(brute(&inst), 0);
        assert_eq!(count_by_enumeration(&inst).unwrap(), Count::from(0u32));
    }

    #[test]
    fn candidate_deletion_excludes_designated() {
        let e = Election::builder(BallotKind::Ordinal)
            .candidates(&["p", "a", "b"])
            .vote(&["a", "p", "b"])
            .vote(&["b", "p", "a"])
            .vote(&["p", "a", "b"])
            .build()
            .unwrap();
        let p = e.id("p").unwrap();
        for rule in [Rule::Plurality, Rule::KApproval(2), Rule::Condorcet, Rule::Maximin] {
            for mode in [Mode::Constructive, Mode::Destructive] {
                let inst = ControlInstance::new(
                    e.clone(),
                    rule,
                    Problem::new(Action::DeleteCandidates, mode),
                    p,
                    2,
                )
                .unwrap();
                assert_eq!(inst.pool_size(), 2);
                assert_eq!(count_by_enumeration(&inst).unwrap(), Count::from(brute(&inst)), "{rule} {mode:?}");
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        let inst = plurality_ccav();
        let err = Oracle::new(3).count(&inst).unwrap_err();
        assert!(err.is_oracle_cap());
        assert!(err.to_string().contains("instance too large for oracle"));
    }
}
