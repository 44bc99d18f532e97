//! Enumeration versus the polynomial counters on instances just large
//! enough for the gap to show.

use std::hint::black_box;

use criterion::{BenchmarkId, Criterion};

use ctlcount::ballot::{Ballot, BallotKind};
use ctlcount::candidates::{CandidateId, CandidateSet};
use ctlcount::control::{ControlInstance, Problem};
use ctlcount::counters::{Dispatcher, Strategy};
use ctlcount::election::Election;
use ctlcount::oracle::Oracle;
use ctlcount::prediction::{binomial_table, full_report, Uncertain};
use ctlcount::rules::Rule;
use ctlcount::single_peaked::SocietalAxis;
use ctlcount::verify::{sp_ranking, trial_rng};

/// `registered + pool` single-peaked voters over `m` candidates on the
/// axis `c0 < c1 < ...`, with the last `unregistered` candidates in `A`.
pub fn sp_election(m: usize, unregistered: usize, registered: usize, pool: usize, seed: u64) -> Election {
    let axis: Vec<CandidateId> = (0..m).map(CandidateId).collect();
    let mut rng = trial_rng(seed, 0, 0);
    let mut ballot = || Ballot::ordinal(sp_ranking(&mut rng, &axis));
    let v: Vec<Ballot> = (0..registered).map(|_| ballot()).collect();
    let w: Vec<Ballot> = (0..pool).map(|_| ballot()).collect();
    let c = CandidateSet::from_ids(m, (0..m - unregistered).map(CandidateId));
    let a = CandidateSet::from_ids(m, (m - unregistered..m).map(CandidateId));
    Election::from_parts(
        (0..m).map(|i| format!("c{i}")).collect(),
        BallotKind::Ordinal,
        c,
        Some(a),
        v,
        Some(w),
        Some(SocietalAxis::new(axis.clone(), m).expect("identity axis")),
    )
    .expect("valid election")
}

pub fn instance(e: &Election, rule: Rule, problem: &str, budget: usize) -> ControlInstance {
    let problem: Problem = problem.parse().expect("known problem");
    let p = e.candidates().iter().nth(1).unwrap_or(CandidateId(0));
    ControlInstance::new(e.clone(), rule, problem, p, budget).expect("valid instance")
}

fn compare(c: &mut Criterion, name: &str, inst: &ControlInstance) {
    let mut group = c.benchmark_group(name);
    let dp = Dispatcher::new(Strategy::ForceDp);
    let oracle = Oracle::default();
    group.bench_function(BenchmarkId::new("dp", inst.budget()), |b| b.iter(|| dp.count(black_box(inst)).expect("route")));
    group.bench_function(BenchmarkId::new("oracle", inst.budget()), |b| {
        b.iter(|| oracle.count(black_box(inst)).expect("within cap"))
    });
    group.finish();
}

pub fn benchmarks(c: &mut Criterion) {
    let voters = sp_election(5, 0, 4, 16, 1);
    compare(c, "plurality-ccav", &instance(&voters, Rule::Plurality, "ccav", 8));
    compare(c, "kapproval2-sp-ccav", &instance(&voters, Rule::KApproval(2), "ccav", 8));
    compare(c, "condorcet-sp-ccav", &instance(&voters, Rule::Condorcet, "ccav", 8));
    compare(c, "plurality-ccdv", &instance(&sp_election(5, 0, 16, 0, 2), Rule::Plurality, "ccdv", 8));
    let cands = sp_election(14, 11, 9, 0, 3);
    compare(c, "kapproval2-sp-ccac", &instance(&cands, Rule::KApproval(2), "ccac", 6));

    let small = sp_election(4, 0, 3, 10, 4);
    let model = binomial_table(10, "1/3".parse().expect("rational")).expect("q in range");
    let d = Dispatcher::new(Strategy::Auto);
    c.bench_function("predict-plurality-voters", |b| {
        b.iter(|| full_report(black_box(&small), Rule::Plurality, &model, Uncertain::Voters, &d).expect("report"))
    });
}
