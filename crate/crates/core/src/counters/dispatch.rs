use std::str::FromStr;

use crate::ballot::BallotKind;
use crate::control::{Action, ControlInstance, Mode};
use crate::count::Count;
use crate::error::{Error, Result};
use crate::oracle::Oracle;
use crate::rules::Rule;
use crate::single_peaked::{verify_ballots_on, SocietalAxis};

use super::{
    complement_mode, count_approval_or_condorcet_ccdc, count_approval_or_condorcet_dcac,
    count_condorcet_sp_ccav, count_kapproval_sp_ccac, count_kapproval_sp_ccav, count_plurality_ccav,
    delete_via_add, AlgorithmTag, CountResult,
};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strategy {
    #[default]
    Auto,
    ForceOracle,
    ForceDp,
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "auto" => Ok(Strategy::Auto),
            "oracle" | "force-oracle" => Ok(Strategy::ForceOracle),
            "dp" | "force-dp" => Ok(Strategy::ForceDp),
            _ => Err(format!("unknown algorithm strategy {s:?}")),
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Dispatcher {
    pub strategy: Strategy,
    pub oracle: Oracle,
}

/// Whether the ballots that matter for `inst` are single-peaked on its axis.
fn single_peaked(inst: &ControlInstance) -> bool {
    let e = inst.election();
    let Some(axis) = e.axis() else { return false };
    if e.kind() != BallotKind::Ordinal {
        return false;
    }
    let ok = if inst.action().is_voter_control() {
        verify_ballots_on(e.all_ballots(), axis, e.candidates())
    } else {
        verify_ballots_on(e.registered(), axis, &e.relevant_candidates())
    };
    ok.unwrap_or(false)
}

/// Cells immune to control: acting never changes whether the goal holds, so
/// the count is nonzero only through the status quo.
fn immune(rule: Rule, inst: &ControlInstance) -> bool {
    matches!(rule, Rule::Approval | Rule::Condorcet)
        && matches!(
            (inst.action(), inst.mode()),
            (Action::AddCandidates, Mode::Constructive) | (Action::DeleteCandidates, Mode::Destructive)
        )
}

impl Dispatcher {
    pub fn new(strategy: Strategy) -> Self {
        Dispatcher { strategy, oracle: Oracle::default() }
    }

    pub fn with_oracle(strategy: Strategy, oracle: Oracle) -> Self {
        Dispatcher { strategy, oracle }
    }

    pub fn count(&self, inst: &ControlInstance) -> Result<CountResult> {
        let mut result = self.route(
            inst,
            |d, x| d.oracle.count(x).map(|c| CountResult::new(c, AlgorithmTag::Oracle)),
            |d, x| d.poly(x),
        )?;
        result.literal_immune = self.is_immune(inst);
        Ok(result)
    }

    /// Successful actions of size exactly `i`, ignoring the budget.
    pub fn count_exact_size(&self, inst: &ControlInstance, i: usize) -> Result<CountResult> {
        let mut result = self.route(
            inst,
            |d, x| d.oracle.count_exact_size(x, i).map(|c| CountResult::new(c, AlgorithmTag::Oracle)),
            |d, x| {
                let upper = d.poly(&x.with_budget(i))?;
                Some(upper.and_then(|mut upper| {
                    if i > 0 {
                        let lower = d.poly(&x.with_budget(i - 1)).expect("same cell")?;
                        upper.count -= lower.count;
                    }
                    Ok(upper)
                }))
            },
        )?;
        result.literal_immune = self.is_immune(inst);
        Ok(result)
    }

    fn route(
        &self,
        inst: &ControlInstance,
        oracle: impl Fn(&Self, &ControlInstance) -> Result<CountResult>,
        poly: impl Fn(&Self, &ControlInstance) -> Option<Result<CountResult>>,
    ) -> Result<CountResult> {
        match self.strategy {
            Strategy::ForceOracle => oracle(self, inst),
            Strategy::ForceDp => {
                poly(self, inst).unwrap_or_else(|| Err(Error::NoPolynomialRoute(inst.cell())))
            }
            Strategy::Auto => match poly(self, inst) {
                Some(r) => r,
                None => oracle(self, inst).map_err(|e| match e {
                    Error::OracleCapExceeded { subsets, cap } => Error::HardCell { cell: inst.cell(), subsets, cap },
                    e => e,
                }),
            },
        }
    }

    fn is_immune(&self, inst: &ControlInstance) -> bool {
        let rule = inst.rule().normalized();
        immune(rule, inst) || (rule == Rule::Maximin && single_peaked(inst) && immune(Rule::Condorcet, inst))
    }

    /// Whether a polynomial route exists for `inst`.
    pub fn has_polynomial_route(&self, inst: &ControlInstance) -> bool {
        self.plan(inst).is_some()
    }

    /// The route the dispatcher would take, outermost first.
    pub fn plan(&self, inst: &ControlInstance) -> Option<Vec<AlgorithmTag>> {
        use AlgorithmTag::*;
        let rule = inst.rule().normalized();
        let (action, mode) = (inst.action(), inst.mode());
        if rule == Rule::Maximin && single_peaked(inst) {
            let mapped = inst.with_rule(Rule::Condorcet).ok()?;
            let mut inner = self.plan(&mapped)?;
            inner.insert(0, CondorcetConsistentSpMap);
            return Some(inner);
        }
        let closed = match rule {
            Rule::Approval => Some((ApprovalCcdcClosed, ApprovalDcac)),
            Rule::Condorcet => Some((CondorcetCcdcClosed, CondorcetDcac)),
            _ => None,
        };
        if let Some((ccdc, dcac)) = closed {
            match (action, mode) {
                (Action::DeleteCandidates, Mode::Constructive) => return Some(vec![ccdc]),
                (Action::AddCandidates, Mode::Destructive) => return Some(vec![dcac]),
                (Action::AddCandidates, Mode::Constructive) => return Some(vec![Complement, dcac]),
                (Action::DeleteCandidates, Mode::Destructive) => return Some(vec![Complement, ccdc]),
                _ => {}
            }
        }
        if mode == Mode::Constructive {
            match (rule, action) {
                (Rule::Plurality, Action::AddVoters) => return Some(vec![PluralityAvDp]),
                (Rule::Plurality | Rule::KApproval(_), Action::AddCandidates) if single_peaked(inst) => {
                    return Some(vec![KApprovalSpAcDp])
                }
                (Rule::KApproval(_), Action::AddVoters) if single_peaked(inst) => return Some(vec![KApprovalSpAvDp]),
                (Rule::Condorcet, Action::AddVoters) if single_peaked(inst) => return Some(vec![CondorcetSpAv]),
                _ => {}
            }
        }
        if matches!(action, Action::DeleteVoters | Action::DeleteCandidates) {
            let add = delete_via_add(inst, |j| {
                self.plan(j)
                    .map(|route| CountResult { count: Count::default(), algorithm: route[0], route, literal_immune: false })
                    .ok_or(Error::NoPolynomialRoute(j.cell()))
            });
            if let Ok(r) = add {
                return Some(r.route);
            }
        }
        if mode == Mode::Destructive {
            let mut inner = self.plan(&inst.with_mode(Mode::Constructive))?;
            inner.insert(0, Complement);
            return Some(inner);
        }
        None
    }

    /// Evaluates the polynomial route for `inst`, if there is one.
    fn poly(&self, inst: &ControlInstance) -> Option<Result<CountResult>> {
        let route = self.plan(inst)?;
        Some(self.execute(inst, &route))
    }

    fn execute(&self, inst: &ControlInstance, route: &[AlgorithmTag]) -> Result<CountResult> {
        use AlgorithmTag::*;
        let (head, rest) = route.split_first().expect("nonempty route");
        let leaf = |count: Result<Count>| count.map(|c| CountResult::new(c, *head));
        match head {
            CondorcetConsistentSpMap => {
                let inner = self.execute(&inst.with_rule(Rule::Condorcet)?, rest)?;
                let count = inner.count.clone();
                Ok(inner.wrapped(CondorcetConsistentSpMap, count))
            }
            Complement => complement_mode(inst, |opp| self.execute(opp, rest)),
            AddCombinator => delete_via_add(inst, |j| self.execute(j, rest)),
            PluralityAvDp => leaf(count_plurality_ccav(inst)),
            KApprovalSpAcDp => leaf(count_kapproval_sp_ccac(inst)),
            KApprovalSpAvDp => leaf(count_kapproval_sp_ccav(inst)),
            CondorcetSpAv => leaf(count_condorcet_sp_ccav(inst)),
            ApprovalCcdcClosed | CondorcetCcdcClosed => leaf(count_approval_or_condorcet_ccdc(inst)),
            ApprovalDcac | CondorcetDcac => leaf(count_approval_or_condorcet_dcac(inst)),
            Oracle => leaf(self.oracle.count(inst)),
        }
    }
}

/// Count `inst`, optionally supplying the axis to use for single-peaked routes.
pub fn dispatch(inst: &ControlInstance, sp_hint: Option<&SocietalAxis>, strategy: Strategy) -> Result<CountResult> {
    let d = Dispatcher::new(strategy);
    match sp_hint {
        Some(axis) => {
            let e = inst.election().with_axis(Some(axis.clone()))?;
            d.count(&ControlInstance::new(e, inst.rule(), inst.problem(), inst.designated(), inst.budget())?)
        }
        None => d.count(inst),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ballot::BallotKind;
    use crate::election::Election;

    fn instance(e: Election, rule: Rule, problem: &str, k: usize) -> ControlInstance {
        let p = e.id("p").unwrap();
        ControlInstance::new(e, rule, problem.parse().unwrap(), p, k).unwrap()
    }

    fn two_candidates() -> Election {
        Election::builder(BallotKind::Ordinal)
            .candidates(&["p", "c1"])
            .vote(&["c1", "p"])
            .unregistered_votes(2, &["p", "c1"])
            .build()
            .unwrap()
    }

    #[test]
    fn plurality_adding_voters_uses_its_dp() {
        let r = Dispatcher::default().count(&instance(two_candidates(), Rule::Plurality, "ccav", 2)).unwrap();
        assert_eq!(r.algorithm, AlgorithmTag::PluralityAvDp);
        assert_eq!(r.count, Count::from(1u32));
        let d = Dispatcher::default().count(&instance(two_candidates(), Rule::Plurality, "dcav", 2)).unwrap();
        assert_eq!(d.route, vec![AlgorithmTag::Complement, AlgorithmTag::PluralityAvDp]);
        assert_eq!(d.count, Count::from(3u32));
    }

    #[test]
    fn two_approval_deleting_voters_falls_back_to_oracle() {
        let e = Election::builder(BallotKind::Ordinal)
            .candidates(&["p", "a", "b"])
            .vote(&["a", "b", "p"])
            .vote(&["p", "a", "b"])
            .build()
            .unwrap();
        let r = Dispatcher::default().count(&instance(e.clone(), Rule::KApproval(2), "ccdv", 1)).unwrap();
        assert_eq!(r.algorithm, AlgorithmTag::Oracle);
        let forced = Dispatcher::new(Strategy::ForceDp).count(&instance(e, Rule::KApproval(2), "ccdv", 1));
        assert!(matches!(forced, Err(Error::NoPolynomialRoute(_))));
    }

    #[test]
    fn plurality_deleting_voters_goes_through_addition() {
        let e = Election::builder(BallotKind::Ordinal)
            .candidates(&["p", "a"])
            .vote(&["a", "p"])
            .votes(2, &["p", "a"])
            .build()
            .unwrap();
        let inst = instance(e, Rule::Plurality, "ccdv", 1);
        let r = Dispatcher::default().count(&inst).unwrap();
        assert_eq!(r.route, vec![AlgorithmTag::AddCombinator, AlgorithmTag::PluralityAvDp]);
        assert_eq!(r.count, Count::from(2u32));
        assert_eq!(Dispatcher::new(Strategy::ForceOracle).count(&inst).unwrap().count, Count::from(2u32));
    }

    #[test]
    fn single_peaked_maximin_maps_to_condorcet() {
        let e = Election::builder(BallotKind::Ordinal)
            .candidates(&["a", "p", "b"])
            .axis(&["a", "p", "b"])
            .vote(&["a", "p", "b"])
            .unregistered_votes(2, &["p", "a", "b"])
            .build()
            .unwrap();
        let r = Dispatcher::default().count(&instance(e, Rule::Maximin, "ccav", 2)).unwrap();
        assert_eq!(r.route, vec![AlgorithmTag::CondorcetConsistentSpMap, AlgorithmTag::CondorcetSpAv]);
        assert_eq!(r.count, Count::from(1u32));
    }

    #[test]
    fn immune_cells_are_flagged() {
        let e = Election::builder(BallotKind::Approval)
            .candidates(&["p", "a"])
            .unregistered_candidates(&["x"])
            .vote(&["p"])
            .build()
            .unwrap();
        let r = Dispatcher::default().count(&instance(e, Rule::Approval, "ccac", 1)).unwrap();
        assert!(r.literal_immune);
        assert_eq!(r.count, Count::from(2u32));
        assert_eq!(r.route, vec![AlgorithmTag::Complement, AlgorithmTag::ApprovalDcac]);
    }

    #[test]
    fn oracle_cap_names_the_cell() {
        let e = Election::builder(BallotKind::Ordinal)
            .candidates(&["p", "a", "b"])
            .vote(&["a", "b", "p"])
            .votes(20, &["p", "a", "b"])
            .build()
            .unwrap();
        let inst = instance(e, Rule::KApproval(2), "ccdv", 20);
        let d = Dispatcher::with_oracle(Strategy::Auto, Oracle::new(1000));
        let err = d.count(&inst).unwrap_err();
        assert!(matches!(err, Error::HardCell { .. }));
        assert!(err.to_string().contains("2-approval") || err.to_string().contains("CCDV"), "{err}");
    }

    #[test]
    fn exact_sizes_add_up() {
        let inst = instance(two_candidates(), Rule::Plurality, "ccav", 2);
        let d = Dispatcher::default();
        let sizes: Vec<Count> = (0..=3).map(|i| d.count_exact_size(&inst, i).unwrap().count).collect();
        assert_eq!(sizes, vec![0u32, 0, 1, 0].into_iter().map(Count::from).collect::<Vec<_>>());
    }
}
