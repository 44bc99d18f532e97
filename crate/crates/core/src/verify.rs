//! Seeded random instances and the self-check suites run by `ctlcount verify`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ballot::{Ballot, BallotKind};
use crate::candidates::{CandidateId, CandidateSet};
use crate::control::{Action, ControlInstance, Mode, Problem};
use crate::count::Count;
use crate::counters::{
    complement_mode, count_approval_or_condorcet_ccdc, count_approval_or_condorcet_dcac, count_condorcet_sp_ccav,
    count_kapproval_sp_ccac, count_kapproval_sp_ccav, count_plurality_ccav, delete_via_add, AlgorithmTag,
    CountResult, Dispatcher, Strategy,
};
use crate::election::Election;
use crate::error::Result;
use crate::oracle::Oracle;
use crate::rules::Rule;
use crate::single_peaked::SocietalAxis;

/// Reproducible generator for trial `trial` of stream `stream`.
pub fn trial_rng(seed: u64, stream: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ trial.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    rng.set_stream(stream);
    rng
}

/// A ballot single-peaked on `axis`: a random peak, then a random
/// interleaving of the two sides moving outward.
pub fn sp_ranking<R: Rng>(rng: &mut R, axis: &[CandidateId]) -> Vec<CandidateId> {
    if axis.is_empty() {
        return Vec::new();
    }
    let peak = rng.random_range(0..axis.len());
    let mut out = vec![axis[peak]];
    let (mut l, mut r) = (peak, peak + 1);
    while l > 0 || r < axis.len() {
        let go_left = if l == 0 {
            false
        } else if r == axis.len() {
            true
        } else {
            rng.random_bool(0.5)
        };
        if go_left {
            l -= 1;
            out.push(axis[l]);
        } else {
            out.push(axis[r]);
            r += 1;
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ElectionShape {
    pub kind: BallotKind,
    pub single_peaked: bool,
    /// Upper bound on `|C ∪ A|`.
    pub max_candidates: usize,
    /// Upper bound on `|V| + |W|`.
    pub max_voters: usize,
}

/// A random election with both pools present and a random designated
/// candidate. Candidates are named `c0, c1, …`; when `single_peaked` is set,
/// a random axis is attached and every ballot is single-peaked on it.
pub fn random_election<R: Rng>(rng: &mut R, shape: ElectionShape) -> (Election, CandidateId) {
    let t = rng.random_range(1..=shape.max_candidates.max(1));
    let names: Vec<String> = (0..t).map(|i| format!("c{i}")).collect();
    let p = CandidateId(rng.random_range(0..t));
    let mut c = CandidateSet::empty(t);
    let mut a = CandidateSet::empty(t);
    for i in 0..t {
        let id = CandidateId(i);
        if id == p || rng.random_bool(0.5) {
            c.insert(id);
        } else {
            a.insert(id);
        }
    }
    let mut axis: Vec<CandidateId> = (0..t).map(CandidateId).collect();
    axis.shuffle(rng);
    let n = rng.random_range(0..=shape.max_voters);
    let mut registered = Vec::new();
    let mut pool = Vec::new();
    for _ in 0..n {
        let ballot = match shape.kind {
            BallotKind::Ordinal if shape.single_peaked => Ballot::ordinal(sp_ranking(rng, &axis)),
            BallotKind::Ordinal => {
                let mut r = axis.clone();
                r.shuffle(rng);
                Ballot::ordinal(r)
            }
            BallotKind::Approval => {
                Ballot::approval(CandidateSet::from_ids(t, (0..t).map(CandidateId).filter(|_| rng.random_bool(0.5))))
            }
        };
        if rng.random_bool(0.5) {
            registered.push(ballot);
        } else {
            pool.push(ballot);
        }
    }
    let axis = shape
        .single_peaked
        .then(|| SocietalAxis::new(axis, t).expect("permutation"));
    let e = Election::from_parts(names, shape.kind, c, Some(a), registered, Some(pool), axis)
        .expect("generated election is valid");
    (e, p)
}

/// A counter under test, paired with the cell and profile class it serves.
#[derive(Clone, Copy)]
pub struct CounterCase {
    pub name: &'static str,
    pub tag: AlgorithmTag,
    pub rule: Rule,
    pub problem: Problem,
    pub single_peaked: bool,
    pub run: fn(&ControlInstance) -> Result<Count>,
}

impl CounterCase {
    pub fn kind(&self) -> BallotKind {
        self.rule.ballot_kind()
    }
}

fn leaf(tag: AlgorithmTag, f: fn(&ControlInstance) -> Result<Count>) -> impl Fn(&ControlInstance) -> Result<CountResult> {
    move |i| f(i).map(|c| CountResult::new(c, tag))
}

fn prob(s: &str) -> Problem {
    s.parse().expect("problem code")
}

macro_rules! case {
    ($name:expr, $tag:expr, $rule:expr, $problem:expr, $sp:expr, $run:expr) => {
        CounterCase { name: $name, tag: $tag, rule: $rule, problem: prob($problem), single_peaked: $sp, run: $run }
    };
}

/// Every polynomial counter and both combinators, each on its own cell.
pub fn counter_cases() -> Vec<CounterCase> {
    use AlgorithmTag::*;
    vec![
        case!("plurality-av-dp", PluralityAvDp, Rule::Plurality, "ccav", false, count_plurality_ccav),
        case!("kapproval-sp-ac-dp (k=1)", KApprovalSpAcDp, Rule::KApproval(1), "ccac", true, count_kapproval_sp_ccac),
        case!("kapproval-sp-ac-dp (k=2)", KApprovalSpAcDp, Rule::KApproval(2), "ccac", true, count_kapproval_sp_ccac),
        case!("kapproval-sp-av-dp (k=1)", KApprovalSpAvDp, Rule::KApproval(1), "ccav", true, count_kapproval_sp_ccav),
        case!("kapproval-sp-av-dp (k=2)", KApprovalSpAvDp, Rule::KApproval(2), "ccav", true, count_kapproval_sp_ccav),
        case!("condorcet-sp-av", CondorcetSpAv, Rule::Condorcet, "ccav", true, count_condorcet_sp_ccav),
        case!("approval-ccdc-closed", ApprovalCcdcClosed, Rule::Approval, "ccdc", false, count_approval_or_condorcet_ccdc),
        case!("condorcet-ccdc-closed", CondorcetCcdcClosed, Rule::Condorcet, "ccdc", false, count_approval_or_condorcet_ccdc),
        case!("approval-dcac", ApprovalDcac, Rule::Approval, "dcac", false, count_approval_or_condorcet_dcac),
        case!("condorcet-dcac", CondorcetDcac, Rule::Condorcet, "dcac", false, count_approval_or_condorcet_dcac),
        case!("complement (plurality-av-dp)", Complement, Rule::Plurality, "dcav", false, |i| {
            complement_mode(i, leaf(PluralityAvDp, count_plurality_ccav)).map(|r| r.count)
        }),
        case!("complement (kapproval-sp-ac-dp)", Complement, Rule::KApproval(2), "dcac", true, |i| {
            complement_mode(i, leaf(KApprovalSpAcDp, count_kapproval_sp_ccac)).map(|r| r.count)
        }),
        case!("complement (kapproval-sp-av-dp)", Complement, Rule::KApproval(2), "dcav", true, |i| {
            complement_mode(i, leaf(KApprovalSpAvDp, count_kapproval_sp_ccav)).map(|r| r.count)
        }),
        case!("complement (condorcet-sp-av)", Complement, Rule::Condorcet, "dcav", true, |i| {
            complement_mode(i, leaf(CondorcetSpAv, count_condorcet_sp_ccav)).map(|r| r.count)
        }),
        case!("complement (approval-ccdc-closed)", Complement, Rule::Approval, "dcdc", false, |i| {
            complement_mode(i, leaf(ApprovalCcdcClosed, count_approval_or_condorcet_ccdc)).map(|r| r.count)
        }),
        case!("complement (condorcet-dcac)", Complement, Rule::Condorcet, "ccac", false, |i| {
            complement_mode(i, leaf(CondorcetDcac, count_approval_or_condorcet_dcac)).map(|r| r.count)
        }),
        case!("delete-via-add (plurality-av-dp)", AddCombinator, Rule::Plurality, "ccdv", false, |i| {
            delete_via_add(i, leaf(PluralityAvDp, count_plurality_ccav)).map(|r| r.count)
        }),
        case!("delete-via-add (kapproval-sp-ac-dp, k=1)", AddCombinator, Rule::KApproval(1), "ccdc", true, |i| {
            delete_via_add(i, leaf(KApprovalSpAcDp, count_kapproval_sp_ccac)).map(|r| r.count)
        }),
        case!("delete-via-add (kapproval-sp-ac-dp, k=2)", AddCombinator, Rule::KApproval(2), "ccdc", true, |i| {
            delete_via_add(i, leaf(KApprovalSpAcDp, count_kapproval_sp_ccac)).map(|r| r.count)
        }),
        case!("delete-via-add (kapproval-sp-av-dp)", AddCombinator, Rule::KApproval(2), "ccdv", true, |i| {
            delete_via_add(i, leaf(KApprovalSpAvDp, count_kapproval_sp_ccav)).map(|r| r.count)
        }),
        case!("delete-via-add (condorcet-sp-av)", AddCombinator, Rule::Condorcet, "ccdv", true, |i| {
            delete_via_add(i, leaf(CondorcetSpAv, count_condorcet_sp_ccav)).map(|r| r.count)
        }),
        case!("condorcet-consistent-sp-map (maximin)", CondorcetConsistentSpMap, Rule::Maximin, "ccav", true, |i| {
            Dispatcher::new(Strategy::ForceDp).count(i).map(|r| r.count)
        }),
        case!("condorcet-consistent-sp-map (maximin, dcdc)", CondorcetConsistentSpMap, Rule::Maximin, "dcdc", true, |i| {
            Dispatcher::new(Strategy::ForceDp).count(i).map(|r| r.count)
        }),
    ]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyConfig {
    pub seed: u64,
    pub trials: usize,
    pub max_candidates: usize,
    pub max_voters: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { seed: 0, trials: 500, max_candidates: 7, max_voters: 8 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub seed: u64,
    pub trial: usize,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: String,
    pub instances: usize,
    pub comparisons: usize,
    /// Comparisons whose count was strictly between zero and the number of
    /// admissible actions.
    pub nontrivial: usize,
    pub failures: Vec<Failure>,
}

impl CheckOutcome {
    fn new(name: impl Into<String>) -> Self {
        CheckOutcome { name: name.into(), instances: 0, comparisons: 0, nontrivial: 0, failures: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn note(&mut self, count: &Count, total: &Count) {
        if *count != Count::default() && count < total {
            self.nontrivial += 1;
        }
    }
}

fn instance(e: &Election, p: CandidateId, rule: Rule, problem: Problem, budget: usize) -> ControlInstance {
    ControlInstance::new(e.clone(), rule, problem, p, budget).expect("generated instance is valid")
}

fn full_budget(e: &Election, p: CandidateId, rule: Rule, problem: Problem) -> ControlInstance {
    let base = instance(e, p, rule, problem, 0);
    let pool = base.pool_size();
    base.with_budget(pool)
}

/// Exact equality with enumeration for one counter, over every budget.
pub fn check_counter(case: &CounterCase, cfg: &VerifyConfig, stream: u64) -> CheckOutcome {
    let mut out = CheckOutcome::new(format!("oracle-equivalence: {}", case.name));
    let oracle = Oracle::default();
    let shape = ElectionShape {
        kind: case.kind(),
        single_peaked: case.single_peaked,
        max_candidates: cfg.max_candidates,
        max_voters: cfg.max_voters,
    };
    for trial in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, stream, trial as u64);
        let (e, p) = random_election(&mut rng, shape);
        let full = full_budget(&e, p, case.rule, case.problem);
        out.instances += 1;
        let sizes = match oracle.counts_by_size(&full) {
            Ok(s) => s,
            Err(err) => {
                out.failures.push(Failure { seed: cfg.seed, trial, detail: format!("oracle failed: {err}") });
                continue;
            }
        };
        let mut cumulative = Count::default();
        for (budget, size) in sizes.iter().enumerate() {
            cumulative += size;
            out.comparisons += 1;
            out.note(&cumulative, &full.with_budget(budget).total_actions());
            match (case.run)(&full.with_budget(budget)) {
                Ok(c) if c == cumulative => {}
                Ok(c) => out.failures.push(Failure {
                    seed: cfg.seed,
                    trial,
                    detail: format!("budget {budget}: counter {c}, enumeration {cumulative}"),
                }),
                Err(err) => out.failures.push(Failure { seed: cfg.seed, trial, detail: format!("budget {budget}: {err}") }),
            }
        }
    }
    out
}

/// Constructive plus destructive equals the number of admissible actions,
/// for all eight cells and every budget. Each cell is checked twice, pairing
/// the dispatcher on one side with enumeration on the other.
pub fn check_complement_identity(rule: Rule, single_peaked: bool, cfg: &VerifyConfig, stream: u64) -> CheckOutcome {
    let mut out = CheckOutcome::new(format!("complement identity: {rule}{}", if single_peaked { " (sp)" } else { "" }));
    let d = Dispatcher::default();
    let oracle = Oracle::default();
    let shape = ElectionShape { kind: rule.ballot_kind(), single_peaked, max_candidates: cfg.max_candidates, max_voters: cfg.max_voters };
    for trial in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, stream, trial as u64);
        let (e, p) = random_election(&mut rng, shape);
        out.instances += 1;
        for action in Action::ALL {
            let cc = full_budget(&e, p, rule, Problem::new(action, Mode::Constructive));
            for budget in 0..=cc.pool_size() {
                let cc = cc.with_budget(budget);
                let dc = cc.with_mode(Mode::Destructive);
                let total = cc.total_actions();
                let pairs = [
                    (d.count(&cc).map(|r| r.count), oracle.count(&dc)),
                    (oracle.count(&cc), d.count(&dc).map(|r| r.count)),
                ];
                for pair in pairs {
                    out.comparisons += 1;
                    match pair {
                        (Ok(a), Ok(b)) if a.clone() + &b == total => out.note(&a, &total),
                        (Ok(a), Ok(b)) => out.failures.push(Failure {
                            seed: cfg.seed,
                            trial,
                            detail: format!("{} budget {budget}: {a} + {b} != {total}", cc.cell()),
                        }),
                        (Err(err), _) | (_, Err(err)) => {
                            out.failures.push(Failure { seed: cfg.seed, trial, detail: format!("{}: {err}", cc.cell()) })
                        }
                    }
                }
            }
        }
    }
    out
}

/// Deletion counts obtained through the addition combinator (with whatever
/// add-side counter the dispatcher picks) equal direct enumeration.
pub fn check_delete_via_add(rule: Rule, single_peaked: bool, cfg: &VerifyConfig, stream: u64) -> CheckOutcome {
    let mut out = CheckOutcome::new(format!("delete-via-add identity: {rule}{}", if single_peaked { " (sp)" } else { "" }));
    let d = Dispatcher::default();
    let oracle = Oracle::default();
    let shape = ElectionShape { kind: rule.ballot_kind(), single_peaked, max_candidates: cfg.max_candidates, max_voters: cfg.max_voters };
    for trial in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, stream, trial as u64);
        let (e, p) = random_election(&mut rng, shape);
        out.instances += 1;
        for action in [Action::DeleteVoters, Action::DeleteCandidates] {
            for mode in [Mode::Constructive, Mode::Destructive] {
                let full = full_budget(&e, p, rule, Problem::new(action, mode));
                for budget in 0..=full.pool_size() {
                    let inst = full.with_budget(budget);
                    out.comparisons += 1;
                    let via = delete_via_add(&inst, |j| d.count(j));
                    let direct = oracle.count(&inst);
                    match (via, direct) {
                        (Ok(a), Ok(b)) if a.count == b => out.note(&b, &inst.total_actions()),
                        (Ok(a), Ok(b)) => out.failures.push(Failure {
                            seed: cfg.seed,
                            trial,
                            detail: format!("{} budget {budget}: combinator {}, enumeration {b}", inst.cell(), a.count),
                        }),
                        (Err(err), _) | (_, Err(err)) => {
                            out.failures.push(Failure { seed: cfg.seed, trial, detail: format!("{}: {err}", inst.cell()) })
                        }
                    }
                }
            }
        }
    }
    out
}

/// Exact-size counts from the dispatcher sum to the cumulative count.
pub fn check_exact_size_decomposition(rule: Rule, single_peaked: bool, cfg: &VerifyConfig, stream: u64) -> CheckOutcome {
    let mut out = CheckOutcome::new(format!("exact-size decomposition: {rule}{}", if single_peaked { " (sp)" } else { "" }));
    let d = Dispatcher::default();
    let shape = ElectionShape { kind: rule.ballot_kind(), single_peaked, max_candidates: cfg.max_candidates, max_voters: cfg.max_voters };
    for trial in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, stream, trial as u64);
        let (e, p) = random_election(&mut rng, shape);
        out.instances += 1;
        for problem in Problem::all() {
            let full = full_budget(&e, p, rule, problem);
            out.comparisons += 1;
            let parts: Result<Vec<CountResult>> = (0..=full.pool_size()).map(|i| d.count_exact_size(&full, i)).collect();
            match (parts, d.count(&full)) {
                (Ok(parts), Ok(whole)) if parts.iter().map(|r| &r.count).sum::<Count>() == whole.count => {
                    out.note(&whole.count, &full.total_actions())
                }
                (Ok(_), Ok(whole)) => out.failures.push(Failure {
                    seed: cfg.seed,
                    trial,
                    detail: format!("{}: sizes do not sum to {}", full.cell(), whole.count),
                }),
                (Err(err), _) | (_, Err(err)) => {
                    out.failures.push(Failure { seed: cfg.seed, trial, detail: format!("{}: {err}", full.cell()) })
                }
            }
        }
    }
    out
}

/// Rules paired with the profile classes the identity suites cover.
pub fn identity_rule_classes() -> Vec<(Rule, bool)> {
    vec![
        (Rule::Plurality, false),
        (Rule::KApproval(2), false),
        (Rule::Approval, false),
        (Rule::Condorcet, false),
        (Rule::Maximin, false),
        (Rule::KApproval(1), true),
        (Rule::KApproval(2), true),
        (Rule::Condorcet, true),
        (Rule::Maximin, true),
    ]
}

/// Everything `ctlcount verify` runs.
pub fn run_all(cfg: &VerifyConfig) -> Vec<CheckOutcome> {
    let mut out = Vec::new();
    let mut stream = 0;
    for case in counter_cases() {
        out.push(check_counter(&case, cfg, stream));
        stream += 1;
    }
    for (rule, sp) in identity_rule_classes() {
        out.push(check_complement_identity(rule, sp, cfg, stream));
        out.push(check_delete_via_add(rule, sp, cfg, stream));
        out.push(check_exact_size_decomposition(rule, sp, cfg, stream));
        stream += 1;
    }
    out
}
