//! Independent-cascade diffusion in its live-edge form, spread estimation,
//! and hop accounting for influence messages under an agent assignment.

mod ledger;
mod overhead;
mod pool;
mod trial;

pub use ledger::{BroadcastCost, OverheadLedger};
pub use overhead::{trial_overhead, EdgeCosts};
pub use pool::{unit_hash, TrialPool};
pub use trial::{
    estimate_spread, ic_trial, write_trial_csv, Activation, Cascade, Spread, TrialOutcome,
};

pub(crate) use overhead::checked;
