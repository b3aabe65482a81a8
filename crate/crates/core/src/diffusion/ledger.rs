use std::io::Write;
use std::iter::Sum;
use std::ops::{Add, AddAssign};

use serde::Serialize;

/// Message cost counters, in hops (unicasts) or transmissions (broadcasts).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct OverheadLedger {
    /// Influence messages between agents during cascades.
    pub influence_hops: u64,
    /// Activated nodes reporting back to the candidate.
    pub return_hops: u64,
    /// Network-wide announcements.
    pub broadcast_tx: u64,
    /// Agent selection's own protocol traffic.
    pub control_hops: u64,
}

impl OverheadLedger {
    pub fn total(&self) -> u64 {
        self.influence_hops + self.return_hops + self.broadcast_tx + self.control_hops
    }

    /// The agent-dependent part: influence plus return hops.
    pub fn message_hops(&self) -> u64 {
        self.influence_hops + self.return_hops
    }

    pub fn rows(&self) -> [(&'static str, u64); 5] {
        [
            ("influence_hops", self.influence_hops),
            ("return_hops", self.return_hops),
            ("broadcast_tx", self.broadcast_tx),
            ("control_hops", self.control_hops),
            ("total", self.total()),
        ]
    }

    /// `counter,value`, one row per counter plus the total.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "counter,value")?;
        for (name, value) in self.rows() {
            writeln!(w, "{name},{value}")?;
        }
        Ok(())
    }
}

impl Add for OverheadLedger {
    type Output = OverheadLedger;

    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

impl AddAssign for OverheadLedger {
    fn add_assign(&mut self, rhs: Self) {
        self.influence_hops += rhs.influence_hops;
        self.return_hops += rhs.return_hops;
        self.broadcast_tx += rhs.broadcast_tx;
        self.control_hops += rhs.control_hops;
    }
}

impl Sum for OverheadLedger {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(OverheadLedger::default(), Add::add)
    }
}

/// Price of one network-wide broadcast.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum BroadcastCost {
    /// `n - 1` transmissions: a flood along a spanning tree.
    #[default]
    Flood,
    Fixed(u64),
}

impl BroadcastCost {
    pub fn transmissions(self, n: usize) -> u64 {
        match self {
            BroadcastCost::Flood => n.saturating_sub(1) as u64,
            BroadcastCost::Fixed(c) => c,
        }
    }
}

impl std::str::FromStr for BroadcastCost {
    type Err = crate::Error;

    /// `flood` or a fixed transmission count.
    fn from_str(s: &str) -> crate::Result<Self> {
        match s.trim() {
            "flood" => Ok(BroadcastCost::Flood),
            x => x
                .parse()
                .map(BroadcastCost::Fixed)
                .map_err(|_| crate::Error::domain(format!("bad broadcast cost `{x}`"))),
        }
    }
}
