use std::collections::HashMap;

use num_traits::Zero;

use crate::candidates::CandidateId;
use crate::control::{Action, ControlInstance, Mode};
use crate::count::Count;
use crate::error::{Error, Result};
use crate::single_peaked::verify_ballots_on;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Slot {
    Fixed,
    Optional,
    Removed,
}

/// The padded axis: `2k` dummies, the real candidates of `C ∪ A` in axis
/// order, `2k` more dummies. Dummies are ranked below every real candidate,
/// left block innermost first, then the right block innermost first, which
/// keeps every ballot single-peaked.
struct Padded {
    k: usize,
    p: usize,
    slots: Vec<Slot>,
    /// `ranks[v][e]`: position of element `e` in voter `v`'s ballot.
    ranks: Vec<Vec<usize>>,
}

impl Padded {
    fn new(inst: &ControlInstance, k: usize) -> Self {
        let e = inst.election();
        let relevant = e.relevant_candidates();
        let axis = e.axis().expect("axis checked");
        let real: Vec<CandidateId> = axis.restricted(&relevant);
        let r = real.len();
        let pad = 2 * k;
        let n = r + 2 * pad;
        let mut slots = vec![Slot::Fixed; n];
        let mut p = 0;
        for (i, &c) in real.iter().enumerate() {
            if !e.candidates().contains(c) {
                slots[pad + i] = Slot::Optional;
            }
            if c == inst.designated() {
                p = pad + i;
            }
        }
        let mut element = vec![usize::MAX; e.universe_len()];
        for (i, &c) in real.iter().enumerate() {
            element[c.index()] = pad + i;
        }
        let ranks = e
            .registered()
            .iter()
            .map(|b| {
                let mut rank = vec![0; n];
                for (pos, c) in b.as_ordinal().expect("ordinal").restricted(&relevant).enumerate() {
                    rank[element[c.index()]] = pos;
                }
                for i in 0..pad {
                    rank[pad - 1 - i] = r + i;
                    rank[pad + r + i] = r + pad + i;
                }
                rank
            })
            .collect();
        Padded { k, p, slots, ranks }
    }

    fn len(&self) -> usize {
        self.slots.len()
    }

    /// Score of `window[k]` given its `k` active neighbours on each side.
    fn score(&self, window: &[usize]) -> usize {
        let mid = window[self.k];
        self.ranks
            .iter()
            .filter(|rank| window.iter().filter(|&&x| rank[x] < rank[mid]).count() < self.k)
            .count()
    }

    /// Elements that can directly precede (`left`) or follow `at` in an
    /// active chain under `slots`.
    fn neighbours(slots: &[Slot], at: usize, left: bool) -> Vec<usize> {
        let mut out = Vec::new();
        let mut walk: Box<dyn Iterator<Item = usize>> =
            if left { Box::new((0..at).rev()) } else { Box::new(at + 1..slots.len()) };
        for x in walk.by_ref() {
            match slots[x] {
                Slot::Removed => continue,
                Slot::Optional => out.push(x),
                Slot::Fixed => {
                    out.push(x);
                    break;
                }
            }
        }
        out
    }

    /// All chains of `k` active elements leaving `p` to one side, listed
    /// outward from `p`.
    fn chains(&self, left: bool) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for _ in 0..self.k {
            let mut next = Vec::new();
            for chain in &out {
                let at = *chain.last().unwrap_or(&self.p);
                for x in Self::neighbours(&self.slots, at, left) {
                    let mut c = chain.clone();
                    c.push(x);
                    next.push(c);
                }
            }
            out = next;
        }
        out
    }
}

struct Walk<'a> {
    padded: &'a Padded,
    slots: Vec<Slot>,
    rho: usize,
    budget: usize,
    memo: HashMap<Vec<usize>, Vec<Count>>,
    scores: &'a mut HashMap<Vec<usize>, usize>,
}

impl Walk<'_> {
    /// Ways to complete the chain to the left of the window `z`, indexed by
    /// the number of optional candidates used.
    fn f(&mut self, z: &[usize]) -> Vec<Count> {
        if let Some(v) = self.memo.get(z) {
            return v.clone();
        }
        let k = self.padded.k;
        let mut out = vec![Count::zero(); self.budget + 1];
        if z[0] == 0 {
            out[0] = Count::from(1u32);
        } else {
            for x in Padded::neighbours(&self.slots, z[0], true) {
                let mut window = Vec::with_capacity(2 * k + 1);
                window.push(x);
                window.extend_from_slice(z);
                let mid = window[k];
                if mid != self.padded.p {
                    let padded = self.padded;
                    let s = *self.scores.entry(window.clone()).or_insert_with(|| padded.score(&window));
                    if s >= self.rho {
                        continue;
                    }
                }
                let shift = usize::from(self.slots[x] == Slot::Optional);
                let sub = self.f(&window[..2 * k]);
                for (t, c) in sub.into_iter().enumerate() {
                    if t + shift <= self.budget {
                        out[t + shift] += c;
                    }
                }
            }
        }
        self.memo.insert(z.to_vec(), out.clone());
        out
    }
}

/// k-Approval, adding candidates, constructive, single-peaked profile.
///
/// Each candidate's score is fixed by its `k` nearest active neighbours on
/// either side. The count fixes `p`'s neighbourhood, hence its score, and
/// then walks the active chain from right to left over windows of `2k`
/// elements, checking every completed neighbourhood against that score.
pub fn count_kapproval_sp_ccac(inst: &ControlInstance) -> Result<Count> {
    let k = match inst.rule().approval_width() {
        Some(k) if inst.action() == Action::AddCandidates && inst.mode() == Mode::Constructive => k,
        _ => return Err(Error::WrongCell { algorithm: "kapproval-sp-ac-dp", cell: inst.cell() }),
    };
    let e = inst.election();
    let axis = e.axis().ok_or(Error::AxisRequired)?;
    if !verify_ballots_on(e.registered(), axis, &e.relevant_candidates())? {
        return Err(Error::NotSinglePeaked);
    }
    let padded = Padded::new(inst, k);
    let budget = inst.effective_budget();
    let n = padded.len();
    let right_block: Vec<usize> = (n - 2 * k..n).collect();
    let mut scores = HashMap::new();
    let mut total = Count::zero();

    let lefts = padded.chains(true);
    let rights = padded.chains(false);
    for yl in &lefts {
        for yr in &rights {
            let lo = *yl.last().expect("k >= 1");
            let hi = *yr.last().expect("k >= 1");
            let mut slots = padded.slots.clone();
            let mut used = 0;
            for x in lo..=hi {
                if slots[x] == Slot::Optional {
                    if yl.contains(&x) || yr.contains(&x) {
                        slots[x] = Slot::Fixed;
                        used += 1;
                    } else {
                        slots[x] = Slot::Removed;
                    }
                }
            }
            if used > budget {
                continue;
            }
            let window: Vec<usize> = yl.iter().rev().copied().chain([padded.p]).chain(yr.iter().copied()).collect();
            let rho = padded.score(&window);
            if rho == 0 {
                continue;
            }
            let mut walk = Walk { padded: &padded, slots, rho, budget: budget - used, memo: HashMap::new(), scores: &mut scores };
            total += walk.f(&right_block).into_iter().sum::<Count>();
        }
    }

    // With C = {p} and nothing added, p runs alone and wins; the padded
    // election agrees only when its dummies score nothing.
    if e.candidates().len() == 1 && !(k == 1 && !e.registered().is_empty()) {
        total += 1u32;
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
        ControlInstance::new(e, Rule::KApproval(k), Problem::new(Action::AddCandidates, Mode::Constructive), p, budget)
            .unwrap()
    }

    #[test]
    fn adding_a_spoiler_on_the_axis() {
        // x splits a's support
        let e = Election::builder(BallotKind::Ordinal)
            .candidates(&["p", "a"])
            .unregistered_candidates(&["x"])
            .axis(&["x", "a", "p"])
            .vote(&["x", "a", "p"])
            .vote(&["a", "x", "p"])
            .vote(&["p", "a", "x"])
            .build()
            .unwrap();
        for budget in 0..2 {
            let i = inst(e.clone(), 1, budget);
            assert_eq!(count_kapproval_sp_ccac(&i).unwrap(), count_by_enumeration(&i).unwrap());
        }
        let i = inst(e, 1, 1);
        assert_eq!(count_kapproval_sp_ccac(&i).unwrap(), Count::from(0u32));
    }

    #[test]
    fn no_pool_reflects_status_quo() {
        let e = Election::builder(BallotKind::Ordinal)
            .candidates(&["a", "p", "b", "c"])
            .unregistered_candidates::<&str>(&[])
            .axis(&["a", "p", "b", "c"])
            .vote(&["p", "a", "b", "c"])
            .vote(&["b", "p", "c", "a"])
            .build()
            .unwrap();
        let i = inst(e, 2, 3);
        assert_eq!(count_kapproval_sp_ccac(&i).unwrap(), Count::from(1u32));
        assert_eq!(count_by_enumeration(&i).unwrap(), Count::from(1u32));
    }

    #[test]
    fn lone_designated_candidate() {
        for votes in 0..2 {
            let mut b = Election::builder(BallotKind::Ordinal)
                .candidates(&["p"])
                .unregistered_candidates(&["x", "y"])
                .axis(&["x", "p", "y"]);
            for _ in 0..votes {
                b = b.vote(&["p", "x", "y"]);
            }
            let e = b.build().unwrap();
            for k in 1..3 {
                for budget in 0..3 {
                    let i = inst(e.clone(), k, budget);
                    assert_eq!(count_kapproval_sp_ccac(&i).unwrap(), count_by_enumeration(&i).unwrap());
                }
            }
        }
    }
}
