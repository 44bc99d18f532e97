use crate::candidates::CandidateSet;
use crate::control::{Action, ControlInstance, Problem};
use crate::count::Count;
use crate::error::{Error, Result};

use super::{AlgorithmTag, CountResult};

pub fn total_actions(inst: &ControlInstance) -> Count {
    inst.total_actions()
}

/// Answer `inst` from a counter for the opposite mode of the same instance.
pub fn complement_mode<F>(inst: &ControlInstance, counter: F) -> Result<CountResult>
where
    F: FnOnce(&ControlInstance) -> Result<CountResult>,
{
    let opposite = counter(&inst.with_mode(inst.mode().opposite()))?;
    let total = inst.total_actions();
    if opposite.count > total {
        return Err(Error::InconsistentProfile(format!(
            "opposite-mode count {} exceeds {} admissible actions",
            opposite.count, total
        )));
    }
    let count = total - &opposite.count;
    Ok(opposite.wrapped(AlgorithmTag::Complement, count))
}

/// Answer a deletion instance by counting the kept part as an addition.
///
/// Deleting at most `k` of `n` pool members is keeping at least `n − k`, so
/// the answer is a difference of two cumulative addition counts over an
/// election where the whole pool starts unregistered.
pub fn delete_via_add<F>(inst: &ControlInstance, mut add_counter: F) -> Result<CountResult>
where
    F: FnMut(&ControlInstance) -> Result<CountResult>,
{
    let (base, n) = match inst.action() {
        Action::DeleteVoters => {
            let e = inst.election();
            let e = e
                .with_registered(Vec::new())?
                .with_unregistered_voters(Some(e.registered().to_vec()))?;
            let n = e.unregistered_voters().map_or(0, <[_]>::len);
            (ControlInstance::new(e, inst.rule(), Problem::new(Action::AddVoters, inst.mode()), inst.designated(), n)?, n)
        }
        Action::DeleteCandidates => {
            let e = inst.election();
            let p = inst.designated();
            let only_p = CandidateSet::from_ids(e.universe_len(), [p]);
            let rivals = e.candidates().difference(&only_p);
            let n = rivals.len();
            let e = e.with_candidates(only_p, Some(rivals))?;
            (ControlInstance::new(e, inst.rule(), Problem::new(Action::AddCandidates, inst.mode()), p, n)?, n)
        }
        _ => {
            return Err(Error::WrongCell { algorithm: "delete-via-add", cell: inst.cell() });
        }
    };
    let k = inst.budget();
    let full = add_counter(&base)?;
    let count = if k < n {
        let below = add_counter(&base.with_budget(n - k - 1))?;
        if below.count > full.count {
            return Err(Error::InconsistentProfile("cumulative counts decreased".into()));
        }
        &full.count - below.count
    } else {
        full.count.clone()
    };
    Ok(full.wrapped(AlgorithmTag::AddCombinator, count))
}
