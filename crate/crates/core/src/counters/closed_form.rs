use crate::candidates::CandidateId;
use crate::control::{Action, ControlInstance, Mode};
use crate::count::{binomial, Count};
use crate::election::Election;
use crate::error::{Error, Result};
use crate::rules::Rule;

/// Approval and pairwise tallies do not depend on which other candidates
/// take part, so candidate control reduces to counting over fixed relations.
fn weakly_beats(e: &Election, rule: Rule, c: CandidateId, p: CandidateId) -> bool {
    let voters = e.registered();
    match rule {
        Rule::Approval => {
            let score = |x| voters.iter().filter(|b| b.as_approval().is_some_and(|a| a.approves(x))).count();
            score(c) >= score(p)
        }
        _ => {
            let over = |x, y| voters.iter().filter(|b| b.as_ordinal().is_some_and(|o| o.prefers(x, y))).count();
            over(p, c) <= over(c, p)
        }
    }
}

fn check(inst: &ControlInstance, action: Action, mode: Mode, name: &'static str) -> Result<()> {
    let ok_rule = matches!(inst.rule(), Rule::Approval | Rule::Condorcet);
    if !ok_rule || inst.action() != action || inst.mode() != mode {
        return Err(Error::WrongCell { algorithm: name, cell: inst.cell() });
    }
    Ok(())
}

/// Constructive deletion of candidates: every rival that `p` fails to beat
/// must go, the rest are free.
pub fn count_approval_or_condorcet_ccdc(inst: &ControlInstance) -> Result<Count> {
    check(inst, Action::DeleteCandidates, Mode::Constructive, "ccdc-closed")?;
    let e = inst.election();
    let p = inst.designated();
    let rivals = inst.candidate_pool();
    let k0 = rivals.iter().filter(|&&c| weakly_beats(e, inst.rule(), c, p)).count();
    let k = inst.effective_budget();
    if k0 > k {
        return Ok(Count::default());
    }
    Ok((0..=k - k0).map(|i| binomial(rivals.len() - k0, i)).sum())
}

/// Destructive addition of candidates: if `p` already fails every action
/// works, otherwise an action works iff it adds someone `p` does not beat.
pub fn count_approval_or_condorcet_dcac(inst: &ControlInstance) -> Result<Count> {
    check(inst, Action::AddCandidates, Mode::Destructive, "dcac-closed")?;
    let e = inst.election();
    let p = inst.designated();
    let k = inst.effective_budget();
    let pool = inst.candidate_pool();
    let p_wins = e
        .candidates()
        .iter()
        .filter(|&c| c != p)
        .all(|c| !weakly_beats(e, inst.rule(), c, p));
    if !p_wins {
        return Ok(inst.total_actions());
    }
    let a0 = pool.iter().filter(|&&a| weakly_beats(e, inst.rule(), a, p)).count();
    let rest = pool.len() - a0;
    let mut total = Count::default();
    for j in 1..=k {
        for i in 1..=a0.min(j) {
            total += binomial(a0, i) * binomial(rest, j - i);
        }
    }
    Ok(total)
}
