pub mod ballot;
pub mod candidates;
pub mod control;
pub mod count;
pub mod election;
pub mod error;
pub mod io;
pub mod oracle;
pub mod rules;
pub mod single_peaked;
pub mod counters;
pub mod hardness;
pub mod prediction;
pub mod verify;
