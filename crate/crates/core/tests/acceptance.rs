//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

use std::collections::{BTreeSet, HashMap};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use ctlcount::ballot::{Ballot, BallotKind};
use ctlcount::candidates::{CandidateId, CandidateSet};
use ctlcount::control::{Action, ControlInstance, Mode, Problem};
use ctlcount::counters::{
    count_kapproval_sp_ccav, count_kapproval_sp_ccav_with_order, median_voter_condition, Dispatcher, Strategy,
    VoterRef,
};
use ctlcount::election::Election;
use ctlcount::hardness::{
    all_bipartite_graphs, certify, generate, BipartiteGraph, Source, Target, X3CInstance,
};
use ctlcount::oracle::Oracle;
use ctlcount::prediction::{binomial_table, exhaustive_probability, full_report, victory_probability, TurnoutModel, Uncertain};
use ctlcount::rules::{majority_graph, Rule};
use ctlcount::single_peaked::SocietalAxis;
use ctlcount::verify::{
    check_complement_identity, check_counter, check_delete_via_add, counter_cases, random_election, sp_ranking,
    trial_rng, CheckOutcome, ElectionShape, VerifyConfig,
};

const SEED: u64 = 20_240_611;
const TRIALS: usize = 600;

struct Verdict {
    passed: bool,
    summary: String,
}

fn verdict(passed: bool, summary: String) -> Verdict {
    Verdict { passed, summary }
}

fn config() -> VerifyConfig {
    VerifyConfig { seed: SEED, trials: TRIALS, max_candidates: 7, max_voters: 8 }
}

fn fold(outcomes: &[CheckOutcome]) -> (bool, usize, usize, String) {
    let comparisons = outcomes.iter().map(|o| o.comparisons).sum();
    let instances = outcomes.iter().map(|o| o.instances).sum();
    let first = outcomes
        .iter()
        .find_map(|o| o.failures.first().map(|f| format!("; first failure in {} (seed {}, trial {}): {}", o.name, f.seed, f.trial, f.detail)))
        .unwrap_or_default();
    (outcomes.iter().all(CheckOutcome::passed), instances, comparisons, first)
}

fn oracle_equivalence() -> Verdict {
    let start = Instant::now();
    let cfg = config();
    let outcomes: Vec<CheckOutcome> = counter_cases()
        .iter()
        .enumerate()
        .map(|(stream, case)| check_counter(case, &cfg, stream as u64))
        .collect();
    let elapsed = start.elapsed();
    let (ok, instances, comparisons, first) = fold(&outcomes);
    let per_counter = outcomes.iter().map(|o| o.instances).min().unwrap_or(0);
    let mismatches: usize = outcomes.iter().map(|o| o.failures.len()).sum();
    let ok = ok && per_counter >= 500 && elapsed < Duration::from_secs(300);
    verdict(
        ok,
        format!(
            "{} counters, {instances} instances (>= {per_counter} each), {comparisons} budget comparisons, {mismatches} mismatches, {:.1}s{first}",
            outcomes.len(),
            elapsed.as_secs_f64()
        ),
    )
}

/// The (rule, profile class, stream) of every counter in criterion 1, so the
/// identity checks replay exactly the same instances.
fn criterion_one_streams() -> Vec<(Rule, bool, u64)> {
    counter_cases()
        .iter()
        .enumerate()
        .map(|(stream, case)| (case.rule, case.single_peaked, stream as u64))
        .collect()
}

fn complement_identity() -> Verdict {
    let cfg = config();
    let outcomes: Vec<CheckOutcome> = criterion_one_streams()
        .into_iter()
        .map(|(rule, sp, stream)| check_complement_identity(rule, sp, &cfg, stream))
        .collect();
    let (ok, instances, comparisons, first) = fold(&outcomes);
    verdict(ok, format!("{instances} instances, all eight cells, {comparisons} budget checks{first}"))
}

fn delete_via_add_identity() -> Verdict {
    let cfg = config();
    let outcomes: Vec<CheckOutcome> = criterion_one_streams()
        .into_iter()
        .map(|(rule, sp, stream)| check_delete_via_add(rule, sp, &cfg, stream))
        .collect();
    let (ok, instances, comparisons, first) = fold(&outcomes);
    verdict(ok, format!("{instances} instances, {comparisons} DV/DC comparisons{first}"))
}

/// Random 3-sets over `size` elements, half of them with a planted cover.
fn x3c_corpus(size: usize, count: usize, stream: u64) -> Vec<X3CInstance> {
    let mut out = Vec::new();
    for trial in 0..count {
        let mut rng = trial_rng(SEED, stream, trial as u64);
        let sets = rng.random_range(1..=8);
        let mut family: Vec<[usize; 3]> = Vec::new();
        if rng.random_bool(0.5) {
            let mut perm: Vec<usize> = (0..size).collect();
            perm.shuffle(&mut rng);
            family.extend(perm.chunks(3).map(|c| [c[0], c[1], c[2]]));
        }
        let target = sets.max(family.len());
        while family.len() < target {
            let mut s: Vec<usize> = (0..size).collect();
            s.shuffle(&mut rng);
            let mut t = [s[0], s[1], s[2]];
            t.sort_unstable();
            if !family.iter().any(|f| {
                let mut g = *f;
                g.sort_unstable();
                g == t
            }) {
                family.push(t);
            }
        }
        family.shuffle(&mut rng);
        out.push(X3CInstance::numbered(size, family).expect("valid X3C instance"));
    }
    out
}

fn graph_family(max_n: usize) -> Vec<BipartiteGraph> {
    let mut graphs: Vec<BipartiteGraph> = (1..=max_n).flat_map(all_bipartite_graphs).collect();
    graphs.push(BipartiteGraph::complete(2));
    graphs
}

fn certify_all(target: Target, sources: impl IntoIterator<Item = Source>) -> (usize, usize, usize, Option<String>) {
    let oracle = Oracle::default();
    let (mut total, mut passed, mut positive) = (0, 0, 0);
    let mut first = None;
    for src in sources {
        total += 1;
        let result = generate(target, &src).and_then(|a| certify(&a, &oracle));
        match result {
            Ok(c) if c.passed => {
                passed += 1;
                if c.expected.last().is_some_and(|x| !x.is_zero()) {
                    positive += 1;
                }
            }
            Ok(c) => {
                first.get_or_insert(format!("{target}: {}", c.detail));
            }
            Err(e) => {
                first.get_or_insert(format!("{target}: {e}"));
            }
        }
    }
    (total, passed, positive, first)
}

fn parsimony() -> Verdict {
    let mut lines = Vec::new();
    let mut ok = true;
    let mut x3c = x3c_corpus(9, 300, 100);
    x3c.extend(x3c_corpus(12, 300, 101));
    let (t, p, pos, first) = certify_all(Target::CondorcetCcav, x3c.into_iter().map(Source::X3C));
    ok &= t == p;
    lines.push(format!("x3c->condorcet-ccav {p}/{t} ({pos} with covers)"));
    let mut failure = first;
    for target in [Target::TwoApprovalCcdv, Target::ThreeApprovalCcav] {
        let (t, p, pos, first) = certify_all(target, graph_family(3).into_iter().map(Source::Graph));
        ok &= t == p;
        lines.push(format!("{target} {p}/{t} ({pos} with perfect matchings)"));
        failure = failure.or(first);
    }
    verdict(ok, format!("{}{}", lines.join(", "), failure.map(|f| format!("; {f}")).unwrap_or_default()))
}

fn difference_law() -> Verdict {
    let (t, p, pos, first) = certify_all(Target::TwoApprovalCcav, graph_family(3).into_iter().map(Source::Graph));
    verdict(
        t == p,
        format!("2approval-ccav #I - #I' = #PM on {p}/{t} graphs ({pos} with perfect matchings){}", first.map(|f| format!("; {f}")).unwrap_or_default()),
    )
}

fn maximin_round_trip() -> Verdict {
    let graphs: Vec<BipartiteGraph> = graph_family(2).into_iter().filter(|g| g.edges().len() <= 4).collect();
    let (t, p, _, first) = certify_all(Target::MaximinCcdc, graphs.into_iter().map(Source::Graph));
    let k22 = generate(Target::MaximinCcdc, &Source::Graph(BipartiteGraph::complete(2)))
        .and_then(|a| certify(&a, &Oracle::default()));
    let g: Vec<String> = k22.as_ref().map(|c| c.observed.iter().map(|x| x.to_string()).collect()).unwrap_or_default();
    let k22_ok = g == ["1", "4", "2"];
    verdict(
        t == p && k22_ok,
        format!("{p}/{t} graphs recovered, K22 g = ({}){}", g.join(","), first.map(|f| format!("; {f}")).unwrap_or_default()),
    )
}

fn sp_profile<R: Rng>(rng: &mut R, m: usize, n: usize) -> (Vec<CandidateId>, Vec<Ballot>) {
    let mut axis: Vec<CandidateId> = (0..m).map(CandidateId).collect();
    axis.shuffle(rng);
    let ballots = (0..n).map(|_| Ballot::ordinal(sp_ranking(rng, &axis))).collect();
    (axis, ballots)
}

fn condorcet_winners(e: &Election, voters: &[&Ballot]) -> Vec<CandidateId> {
    let all = e.candidates().clone();
    let g = majority_graph(e, &all, voters).expect("ordinal profile");
    all.iter()
        .filter(|&c| all.iter().all(|d| d == c || g.n_of(c, d) > g.n_of(d, c)))
        .collect()
}

fn sp_election(axis: Vec<CandidateId>, registered: Vec<Ballot>, pool: Vec<Ballot>) -> Election {
    let m = axis.len();
    let names = (0..m).map(|i| format!("c{i}")).collect();
    let axis = SocietalAxis::new(axis, m).expect("permutation");
    Election::from_parts(names, BallotKind::Ordinal, CandidateSet::full(m), None, registered, Some(pool), Some(axis))
        .expect("valid election")
}

fn median_voter_law() -> Verdict {
    let mut unique = 0;
    for trial in 0..1000u64 {
        let mut rng = trial_rng(SEED, 200, trial);
        let m = rng.random_range(1..=7);
        let n = 2 * rng.random_range(0..=4) + 1;
        let (axis, ballots) = sp_profile(&mut rng, m, n);
        let e = sp_election(axis, ballots, Vec::new());
        let voters: Vec<&Ballot> = e.registered().iter().collect();
        if condorcet_winners(&e, &voters).len() == 1 {
            unique += 1;
        }
    }
    let (mut agree, mut winners) = (0, 0);
    for trial in 0..1000u64 {
        let mut rng = trial_rng(SEED, 201, trial);
        let m = rng.random_range(1..=7);
        let n = rng.random_range(1..=9);
        let (axis, ballots) = sp_profile(&mut rng, m, n);
        let split = rng.random_range(0..=n);
        let (registered, pool) = ballots.split_at(split);
        let e = sp_election(axis, registered.to_vec(), pool.to_vec());
        let p = CandidateId(rng.random_range(0..m));
        let chosen: Vec<&Ballot> = e
            .registered()
            .iter()
            .chain(e.unregistered_voters().unwrap_or(&[]).iter().filter(|_| rng.random_bool(0.5)))
            .collect();
        let delta = median_voter_condition(e.axis().expect("axis"), e.candidates(), p, &chosen);
        let is_winner = if m == 1 { true } else { condorcet_winners(&e, &chosen) == [p] };
        winners += usize::from(is_winner);
        agree += usize::from(delta == is_winner);
    }
    verdict(
        unique == 1000 && agree == 1000,
        format!("unique Condorcet winner on {unique}/1000 odd profiles; delta agrees on {agree}/1000 probes ({winners} with p winning)"),
    )
}

fn random_rational<R: Rng>(rng: &mut R) -> BigRational {
    let den = rng.random_range(1..=8i64);
    BigRational::new(rng.random_range(0..=den).into(), den.into())
}

fn random_table<R: Rng>(rng: &mut R, pool: usize) -> TurnoutModel {
    let weights: Vec<i64> = (0..=pool).map(|_| rng.random_range(0..=5)).collect();
    let total: i64 = weights.iter().sum();
    let table = if total == 0 {
        (0..=pool).map(|i| if i == 0 { BigRational::one() } else { BigRational::zero() }).collect()
    } else {
        weights.iter().map(|&w| BigRational::new(w.into(), total.into())).collect()
    };
    TurnoutModel::table(table).expect("normalized")
}

fn prediction_exactness() -> Verdict {
    let rules = [
        (Rule::Plurality, false),
        (Rule::KApproval(2), false),
        (Rule::Approval, false),
        (Rule::Condorcet, false),
        (Rule::Maximin, false),
        (Rule::KApproval(2), true),
        (Rule::Condorcet, true),
    ];
    let d = Dispatcher::new(Strategy::Auto);
    let (mut checks, mut bad, mut over_one) = (0, 0, 0);
    let mut first = None;
    for trial in 0..200u64 {
        let mut rng = trial_rng(SEED, 300, trial);
        let (rule, sp) = rules[rng.random_range(0..rules.len())];
        let shape = ElectionShape { kind: rule.ballot_kind(), single_peaked: sp, max_candidates: 7, max_voters: 6 };
        let (e, _) = random_election(&mut rng, shape);
        let uncertain = if rng.random_bool(0.5) { Uncertain::Voters } else { Uncertain::Candidates };
        let pool = match uncertain {
            Uncertain::Voters => e.unregistered_voters().map_or(0, <[Ballot]>::len),
            Uncertain::Candidates => e.unregistered_candidates().map_or(0, CandidateSet::len),
        };
        let models = [binomial_table(pool, random_rational(&mut rng)).expect("q in [0,1]"), random_table(&mut rng, pool)];
        for model in &models {
            let report = match full_report(&e, rule, model, uncertain, &d) {
                Ok(r) => r,
                Err(err) => {
                    bad += 1;
                    first.get_or_insert(format!("trial {trial}: {err}"));
                    continue;
                }
            };
            if report.total() > BigRational::one() {
                over_one += 1;
            }
            for (c, p) in &report.probabilities {
                checks += 1;
                let expected = exhaustive_probability(&e, rule, *c, model, uncertain).expect("enumerable");
                if *p != expected {
                    bad += 1;
                    first.get_or_insert(format!("trial {trial} {rule} {uncertain}: {p} vs {expected}"));
                }
            }
        }
    }
    let example = Election::builder(BallotKind::Ordinal)
        .candidates(&["p", "c1"])
        .vote(&["c1", "p"])
        .unregistered_votes(2, &["p", "c1"])
        .build()
        .expect("valid");
    let half = BigRational::new(1.into(), 2.into());
    let quarter = victory_probability(
        &example,
        Rule::Plurality,
        example.id("p").expect("p"),
        &binomial_table(2, half).expect("valid"),
        Uncertain::Voters,
        &d,
    )
    .map(|q| q.to_string())
    .unwrap_or_else(|e| e.to_string());
    verdict(
        bad == 0 && over_one == 0 && quarter == "1/4",
        format!(
            "{checks} exact comparisons over 200 instances x 2 models, {bad} mismatches, {over_one} reports above 1, worked example {quarter}{}",
            first.map(|f| format!("; {f}")).unwrap_or_default()
        ),
    )
}

fn tie_break_independence() -> Verdict {
    let (mut stable, mut tied) = (0, 0);
    let mut first = None;
    for trial in 0..100u64 {
        let mut rng = trial_rng(SEED, 400, trial);
        let k = rng.random_range(1..=2);
        let shape = ElectionShape { kind: BallotKind::Ordinal, single_peaked: true, max_candidates: 7, max_voters: 8 };
        let (e, p) = random_election(&mut rng, shape);
        let base = ControlInstance::new(e, Rule::KApproval(k), Problem::new(Action::AddVoters, Mode::Constructive), p, 0)
            .expect("valid instance");
        let inst = base.with_budget(rng.random_range(0..=base.pool_size()));
        let reference = count_kapproval_sp_ccav(&inst);
        let truth = Oracle::default().count(&inst);
        let e = inst.election();
        let voters: Vec<VoterRef> = (0..e.registered().len())
            .map(|index| VoterRef { registered: true, index })
            .chain((0..e.unregistered_voters().map_or(0, <[Ballot]>::len)).map(|index| VoterRef { registered: false, index }))
            .collect();
        let blocks: BTreeSet<Vec<CandidateId>> = e
            .all_ballots()
            .map(|b| {
                let mut top: Vec<CandidateId> = b.as_ordinal().expect("ordinal").top(k, e.candidates()).collect();
                top.sort();
                top
            })
            .collect();
        tied += usize::from(blocks.len() < voters.len());
        let mut same = matches!((&reference, &truth), (Ok(a), Ok(b)) if a == b);
        for _ in 0..10 {
            let mut keys: Vec<u64> = (0..voters.len() as u64).collect();
            keys.shuffle(&mut rng);
            let order: HashMap<VoterRef, u64> = voters.iter().copied().zip(keys).collect();
            let recount = count_kapproval_sp_ccav_with_order(&inst, |v| order[&v]);
            if recount.as_ref().ok() != reference.as_ref().ok() || recount.is_err() {
                same = false;
            }
        }
        if same {
            stable += 1;
        } else {
            first.get_or_insert(format!("trial {trial}: reference {reference:?}, oracle {truth:?}"));
        }
    }
    verdict(
        stable == 100,
        format!("{stable}/100 SP instances identical under 10 voter-order permutations ({tied} with tied blocks){}", first.map(|f| format!("; {f}")).unwrap_or_default()),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict); 9] = [
        ("oracle equivalence of polynomial counters", oracle_equivalence),
        ("complement identity on all eight cells", complement_identity),
        ("delete-via-add identity", delete_via_add_identity),
        ("parsimonious reductions", parsimony),
        ("difference-of-two reduction", difference_law),
        ("maximin matching-profile round trip", maximin_round_trip),
        ("median-voter law", median_voter_law),
        ("prediction exactness", prediction_exactness),
        ("tie-break independence", tie_break_independence),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = run();
        if !v.passed {
            failed += 1;
        }
        println!(
            "{} criterion {}: {name}: {} [{:.1}s]",
            if v.passed { "PASS" } else { "FAIL" },
            i + 1,
            v.summary,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
