//! Polynomial-time counters, the two reduction combinators and the
//! dispatcher that picks a route per cell.

use std::fmt;

use serde::Serialize;

use crate::count::Count;

mod closed_form;
mod combinators;
mod condorcet_sp;
mod dispatch;
mod kapproval_candidates;
mod kapproval_voters;
mod plurality;

pub use closed_form::{count_approval_or_condorcet_ccdc, count_approval_or_condorcet_dcac};
pub use combinators::{complement_mode, delete_via_add, total_actions};
pub use condorcet_sp::{count_condorcet_sp_ccav, median_voter_condition};
pub use dispatch::{dispatch, Dispatcher, Strategy};
pub use kapproval_candidates::count_kapproval_sp_ccac;
pub use kapproval_voters::{count_kapproval_sp_ccav, count_kapproval_sp_ccav_with_order, VoterRef};
pub use plurality::count_plurality_ccav;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(into = "&'static str")]
pub enum AlgorithmTag {
    Oracle,
    Complement,
    AddCombinator,
    PluralityAvDp,
    KApprovalSpAcDp,
    KApprovalSpAvDp,
    CondorcetSpAv,
    ApprovalCcdcClosed,
    CondorcetCcdcClosed,
    ApprovalDcac,
    CondorcetDcac,
    CondorcetConsistentSpMap,
}

impl AlgorithmTag {
    pub const ALL: [AlgorithmTag; 12] = [
        AlgorithmTag::Oracle,
        AlgorithmTag::Complement,
        AlgorithmTag::AddCombinator,
        AlgorithmTag::PluralityAvDp,
        AlgorithmTag::KApprovalSpAcDp,
        AlgorithmTag::KApprovalSpAvDp,
        AlgorithmTag::CondorcetSpAv,
        AlgorithmTag::ApprovalCcdcClosed,
        AlgorithmTag::CondorcetCcdcClosed,
        AlgorithmTag::ApprovalDcac,
        AlgorithmTag::CondorcetDcac,
        AlgorithmTag::CondorcetConsistentSpMap,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AlgorithmTag::Oracle => "oracle",
            AlgorithmTag::Complement => "thm1-complement",
            AlgorithmTag::AddCombinator => "thm2-add-combinator",
            AlgorithmTag::PluralityAvDp => "plurality-av-dp",
            AlgorithmTag::KApprovalSpAcDp => "kapproval-sp-ac-dp",
            AlgorithmTag::KApprovalSpAvDp => "kapproval-sp-av-dp",
            AlgorithmTag::CondorcetSpAv => "condorcet-sp-av",
            AlgorithmTag::ApprovalCcdcClosed => "approval-ccdc-closed",
            AlgorithmTag::CondorcetCcdcClosed => "condorcet-ccdc-closed",
            AlgorithmTag::ApprovalDcac => "approval-dcac",
            AlgorithmTag::CondorcetDcac => "condorcet-dcac",
            AlgorithmTag::CondorcetConsistentSpMap => "condorcet-consistent-sp-map",
        }
    }
}

impl From<AlgorithmTag> for &'static str {
    fn from(t: AlgorithmTag) -> Self {
        t.as_str()
    }
}

impl fmt::Display for AlgorithmTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A count together with how it was obtained.
///
/// `route` lists every algorithm involved, outermost first; `algorithm` is
/// its head. `literal_immune` marks cells where the control goal cannot be
/// reached by acting, so any nonzero count comes from the empty action alone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountResult {
    pub count: Count,
    pub algorithm: AlgorithmTag,
    pub route: Vec<AlgorithmTag>,
    pub literal_immune: bool,
}

impl CountResult {
    pub fn new(count: Count, algorithm: AlgorithmTag) -> Self {
        CountResult { count, algorithm, route: vec![algorithm], literal_immune: false }
    }

    pub(crate) fn wrapped(mut self, outer: AlgorithmTag, count: Count) -> Self {
        self.route.insert(0, outer);
        self.algorithm = outer;
        self.count = count;
        self
    }
}
