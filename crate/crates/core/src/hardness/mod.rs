//! Reductions from `#X3C` and `#PerfectMatching` into control counting,
//! with a checker that compares both sides on small sources.

mod reductions;
mod sources;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Signed;

use crate::candidates::CandidateId;
use crate::control::ControlInstance;
use crate::count::{binomial, Count};
use crate::error::{Error, Result};
use crate::oracle::Oracle;
use crate::rules::{scores, Rule};

pub use reductions::*;
pub use sources::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Target {
    CondorcetCcav,
    TwoApprovalCcav,
    TwoApprovalCcdv,
    ThreeApprovalCcav,
    MaximinCcdc,
}

impl Target {
    pub const ALL: [Target; 5] = [
        Target::CondorcetCcav,
        Target::TwoApprovalCcav,
        Target::TwoApprovalCcdv,
        Target::ThreeApprovalCcav,
        Target::MaximinCcdc,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Target::CondorcetCcav => "condorcet-ccav",
            Target::TwoApprovalCcav => "2approval-ccav",
            Target::TwoApprovalCcdv => "2approval-ccdv",
            Target::ThreeApprovalCcav => "3approval-ccav",
            Target::MaximinCcdc => "maximin-ccdc",
        }
    }

    pub fn rule(self) -> Rule {
        match self {
            Target::CondorcetCcav => Rule::Condorcet,
            Target::TwoApprovalCcav | Target::TwoApprovalCcdv => Rule::KApproval(2),
            Target::ThreeApprovalCcav => Rule::KApproval(3),
            Target::MaximinCcdc => Rule::Maximin,
        }
    }

    pub fn takes_x3c(self) -> bool {
        self == Target::CondorcetCcav
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Target::ALL
            .into_iter()
            .find(|t| t.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidInstance(format!("unknown reduction target `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Source {
    X3C(X3CInstance),
    Graph(BipartiteGraph),
}

/// How target counts determine the source count.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relationship {
    /// One instance, equal counts.
    Parsimonious,
    /// `#I − #I'` over two instances.
    DifferenceOfTwo,
    /// Instances `I(0..=n)`; successive differences give the matching profile
    /// through [`recover_matching_profile`].
    TuringProfile,
}

impl Relationship {
    pub fn as_str(self) -> &'static str {
        match self {
            Relationship::Parsimonious => "parsimonious",
            Relationship::DifferenceOfTwo => "difference-of-two",
            Relationship::TuringProfile => "turing-profile",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ReductionArtifact {
    pub target: Target,
    pub source: Source,
    pub relationship: Relationship,
    pub instances: Vec<ControlInstance>,
    /// `|B|` for the Maximin construction, 0 elsewhere.
    pub blocker_count: usize,
}

/// Builds the `target` reduction from `source`.
pub fn generate(target: Target, source: &Source) -> Result<ReductionArtifact> {
    match (target, source) {
        (Target::CondorcetCcav, Source::X3C(x)) => x3c_to_condorcet_ccav(x),
        (Target::TwoApprovalCcav, Source::Graph(g)) => matching_to_2approval_ccav(g),
        (Target::TwoApprovalCcdv, Source::Graph(g)) => matching_to_2approval_ccdv(g),
        (Target::ThreeApprovalCcav, Source::Graph(g)) => matching_to_3approval_ccav(g),
        (Target::MaximinCcdc, Source::Graph(g)) => matching_to_maximin_ccdc(g),
        _ => Err(Error::ReductionPrecondition(format!(
            "{target} takes {} input",
            if target.takes_x3c() { "an X3C" } else { "a bipartite graph" }
        ))),
    }
}

/// Inverts `f(k) = Σ_j C(b, j)·g(k − j)` with `g(0) = 1`.
///
/// `f(0)` must be 1, since `p` wins the untouched election exactly when the
/// graph has the empty matching.
pub fn recover_matching_profile(f: &[Count], blocker_count: usize) -> Result<Vec<Count>> {
    match f.first() {
        Some(f0) if *f0 == Count::from(1u8) => {}
        Some(f0) => return Err(Error::InconsistentProfile(format!("f(0) = {f0}, expected 1"))),
        None => return Err(Error::InconsistentProfile("empty profile".into())),
    }
    let mut g: Vec<Count> = vec![Count::from(1u8)];
    for k in 1..f.len() {
        let mut v = BigInt::from(f[k].clone());
        for j in 1..=k {
            v -= BigInt::from(binomial(blocker_count, j) * &g[k - j]);
        }
        if v.is_negative() {
            return Err(Error::InconsistentProfile(format!("g({k}) would be {v}")));
        }
        g.push(v.to_biguint().expect("non-negative"));
    }
    Ok(g)
}

/// The forward map `g ↦ f`.
pub fn profile_to_differences(g: &[Count], blocker_count: usize) -> Vec<Count> {
    (0..g.len())
        .map(|k| (0..=k).map(|j| binomial(blocker_count, j) * &g[k - j]).sum())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub target: Target,
    pub relationship: Relationship,
    pub expected: Vec<Count>,
    pub observed: Vec<Count>,
    pub passed: bool,
    pub detail: String,
}

/// Counts the source directly, the target instances with `oracle`, and
/// compares them.
pub fn certify(artifact: &ReductionArtifact, oracle: &Oracle) -> Result<Certificate> {
    let mut cert = Certificate {
        target: artifact.target,
        relationship: artifact.relationship,
        expected: Vec::new(),
        observed: Vec::new(),
        passed: false,
        detail: String::new(),
    };
    if let Err(e) = check_construction(artifact) {
        cert.detail = e.to_string();
        return Ok(cert);
    }
    let counts = artifact
        .instances
        .iter()
        .map(|i| oracle.count(i))
        .collect::<Result<Vec<_>>>()?;
    match (&artifact.source, artifact.relationship) {
        (Source::X3C(x), _) => {
            cert.expected = vec![count_x3c(x)?];
            cert.observed = counts;
        }
        (Source::Graph(g), Relationship::Parsimonious) => {
            cert.expected = vec![count_perfect_matchings(g)?];
            cert.observed = counts;
        }
        (Source::Graph(g), Relationship::DifferenceOfTwo) => {
            cert.expected = vec![count_perfect_matchings(g)?];
            let diff = BigInt::from(counts[0].clone()) - BigInt::from(counts[1].clone());
            match diff.to_biguint() {
                Some(d) => cert.observed = vec![d],
                None => {
                    cert.detail = format!("#I - #I' = {diff} is negative");
                    return Ok(cert);
                }
            }
        }
        (Source::Graph(g), Relationship::TuringProfile) => {
            cert.expected = count_matchings_by_size(g)?;
            let f: Vec<Count> = (0..counts.len())
                .map(|k| if k == 0 { counts[0].clone() } else { &counts[k] - &counts[k - 1] })
                .collect();
            match recover_matching_profile(&f, artifact.blocker_count) {
                Ok(g) => cert.observed = g,
                Err(e) => {
                    cert.detail = e.to_string();
                    return Ok(cert);
                }
            }
        }
    }
    cert.passed = cert.expected == cert.observed;
    cert.detail = if cert.passed {
        "counts agree".into()
    } else {
        format!("expected {}, observed {}", join(&cert.expected), join(&cert.observed))
    };
    Ok(cert)
}

fn join(v: &[Count]) -> String {
    v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
}

fn fail(msg: String) -> Error {
    Error::ReductionPrecondition(msg)
}

/// Checks the registered-score layout each construction relies on.
pub fn check_construction(artifact: &ReductionArtifact) -> Result<()> {
    let inst = artifact.instances.first().ok_or_else(|| fail("no instances".into()))?;
    let e = inst.election();
    let p = inst.designated();
    let voters: Vec<_> = e.registered().iter().collect();
    let name = |c: CandidateId| e.name(c);
    match (artifact.target, &artifact.source) {
        (Target::CondorcetCcav, Source::X3C(x)) => {
            if x.k() < 3 || voters.len() != x.k() - 3 {
                return Err(fail(format!("needs k >= 3 and k - 3 registered voters, k = {}", x.k())));
            }
        }
        (Target::TwoApprovalCcav, _) => {
            let s = scores(e, inst.rule(), e.candidates(), &voters)?;
            for (c, v) in s {
                let want = if c == p { 2 } else if name(c) == "b1" || name(c) == "b2" { 1 } else { 0 };
                if v != want {
                    return Err(fail(format!("{} scores {v}, expected {want}", name(c))));
                }
            }
        }
        (Target::TwoApprovalCcdv, Source::Graph(g)) => {
            let d = g.max_degree().max(2) as u64;
            let s = scores(e, inst.rule(), e.candidates(), &voters)?;
            for (c, v) in s {
                let want = if c.0 <= 2 * g.n() { d } else { 1 };
                if v != want {
                    return Err(fail(format!("{} scores {v}, expected {want}", name(c))));
                }
            }
        }
        (Target::ThreeApprovalCcav, Source::Graph(g)) => {
            let n = g.n();
            let a = three_approval_offset(n);
            let s = scores(e, inst.rule(), e.candidates(), &voters)?;
            for (c, v) in s {
                let want = match c.0 {
                    0 => a,
                    1 => a + n - 1,
                    i if i < 2 + 2 * n => a + n - 2,
                    _ => 1,
                } as u64;
                if v != want {
                    return Err(fail(format!("{} scores {v}, expected {want}", name(c))));
                }
            }
        }
        (Target::MaximinCcdc, Source::Graph(g)) => {
            if artifact.instances.len() != g.n() + 1 {
                return Err(fail("expected one instance per budget 0..=n".into()));
            }
            let t = (voters.len() / 2) as u64;
            let s = scores(e, Rule::Maximin, e.candidates(), &voters)?;
            for (c, v) in s {
                let want = if c == p { t - 1 } else { t - 2 };
                if v != want {
                    return Err(fail(format!("{} has Maximin score {v}, expected {want}", name(c))));
                }
            }
        }
        (target, _) => return Err(fail(format!("{target} built from the wrong source"))),
    }
    Ok(())
}
