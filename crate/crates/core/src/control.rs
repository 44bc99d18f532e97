use std::fmt;
use std::str::FromStr;

use crate::ballot::Ballot;
use crate::candidates::{CandidateId, CandidateSet};
use crate::count::{total_actions, Count};
use crate::election::Election;
use crate::error::{Error, Result};
use crate::rules::Rule;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Action {
    AddVoters,
    DeleteVoters,
    AddCandidates,
    DeleteCandidates,
}

impl Action {
    pub const ALL: [Action; 4] = [
        Action::AddVoters,
        Action::DeleteVoters,
        Action::AddCandidates,
        Action::DeleteCandidates,
    ];

    pub fn code(self) -> &'static str {
        match self {
            Action::AddVoters => "av",
            Action::DeleteVoters => "dv",
            Action::AddCandidates => "ac",
            Action::DeleteCandidates => "dc",
        }
    }

    pub fn is_voter_control(self) -> bool {
        matches!(self, Action::AddVoters | Action::DeleteVoters)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Constructive,
    Destructive,
}

impl Mode {
    pub fn opposite(self) -> Mode {
        match self {
            Mode::Constructive => Mode::Destructive,
            Mode::Destructive => Mode::Constructive,
        }
    }
}

/// One of the eight cells `{cc,dc} × {av,dv,ac,dc}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Problem {
    pub action: Action,
    pub mode: Mode,
}

impl Problem {
    pub fn new(action: Action, mode: Mode) -> Self {
        Problem { action, mode }
    }

    pub fn all() -> impl Iterator<Item = Problem> {
        [Mode::Constructive, Mode::Destructive]
            .into_iter()
            .flat_map(|mode| Action::ALL.into_iter().map(move |action| Problem { action, mode }))
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.mode {
            Mode::Constructive => "cc",
            Mode::Destructive => "dc",
        };
        write!(f, "{prefix}{}", self.action.code())
    }
}

impl FromStr for Problem {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let s = s.to_ascii_lowercase();
        let (mode, rest) = if let Some(rest) = s.strip_prefix("cc") {
            (Mode::Constructive, rest)
        } else if let Some(rest) = s.strip_prefix("dc") {
            (Mode::Destructive, rest)
        } else {
            return Err(format!("unknown problem {s:?}"));
        };
        let action = Action::ALL
            .into_iter()
            .find(|a| a.code() == rest)
            .ok_or_else(|| format!("unknown problem {s:?}"))?;
        Ok(Problem { action, mode })
    }
}

/// A counting control question: how many admissible action sets of size at
/// most `budget` make `designated` the unique winner (constructive) or keep it
/// from being the unique winner (destructive).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ControlInstance {
    election: Election,
    rule: Rule,
    problem: Problem,
    designated: CandidateId,
    budget: usize,
}

impl ControlInstance {
    pub fn new(
        election: Election,
        rule: Rule,
        problem: Problem,
        designated: CandidateId,
        budget: usize,
    ) -> Result<Self> {
        rule.check_compatible(election.kind())?;
        if !election.candidates().contains(designated) {
            return Err(Error::InvalidInstance(format!(
                "designated candidate {} is not registered",
                designated
            )));
        }
        match problem.action {
            Action::AddVoters if election.unregistered_voters().is_none() => {
                return Err(Error::MissingPool("unregistered voter"))
            }
            Action::AddCandidates if election.unregistered_candidates().is_none() => {
                return Err(Error::MissingPool("unregistered candidate"))
            }
            _ => {}
        }
        Ok(ControlInstance { election, rule, problem, designated, budget })
    }

    pub fn election(&self) -> &Election {
        &self.election
    }

    pub fn rule(&self) -> Rule {
        self.rule
    }

    pub fn problem(&self) -> Problem {
        self.problem
    }

    pub fn action(&self) -> Action {
        self.problem.action
    }

    pub fn mode(&self) -> Mode {
        self.problem.mode
    }

    pub fn designated(&self) -> CandidateId {
        self.designated
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn pool_size(&self) -> usize {
        match self.problem.action {
            Action::AddVoters => self.election.unregistered_voters().map_or(0, <[Ballot]>::len),
            Action::DeleteVoters => self.election.registered().len(),
            Action::AddCandidates => self.election.unregistered_candidates().map_or(0, CandidateSet::len),
            Action::DeleteCandidates => self.election.candidates().len() - 1,
        }
    }

    /// Budgets beyond the pool size admit nothing new.
    pub fn effective_budget(&self) -> usize {
        self.budget.min(self.pool_size())
    }

    /// Candidates that may be deleted (`C − {p}`) or added (`A`), in id order.
    pub fn candidate_pool(&self) -> Vec<CandidateId> {
        match self.problem.action {
            Action::AddCandidates => self
                .election
                .unregistered_candidates()
                .map(|a| a.iter().collect())
                .unwrap_or_default(),
            Action::DeleteCandidates => self
                .election
                .candidates()
                .iter()
                .filter(|&c| c != self.designated)
                .collect(),
            _ => Vec::new(),
        }
    }

    pub fn total_actions(&self) -> Count {
        total_actions(self.pool_size(), self.budget)
    }

    pub fn with_budget(&self, budget: usize) -> Self {
        ControlInstance { budget, ..self.clone() }
    }

    pub fn with_mode(&self, mode: Mode) -> Self {
        ControlInstance {
            problem: Problem::new(self.problem.action, mode),
            ..self.clone()
        }
    }

    pub fn with_rule(&self, rule: Rule) -> Result<Self> {
        rule.check_compatible(self.election.kind())?;
        Ok(ControlInstance { rule, ..self.clone() })
    }

    pub fn with_problem(&self, problem: Problem) -> Result<Self> {
        ControlInstance::new(self.election.clone(), self.rule, problem, self.designated, self.budget)
    }

    /// Whether `winner` satisfies this instance's goal.
    pub fn goal_met(&self, winner: Option<CandidateId>) -> bool {
        let wins = winner == Some(self.designated);
        match self.problem.mode {
            Mode::Constructive => wins,
            Mode::Destructive => !wins,
        }
    }

    pub fn cell(&self) -> String {
        format!("{}-#{}", self.rule, self.problem.to_string().to_ascii_uppercase())
    }
}
