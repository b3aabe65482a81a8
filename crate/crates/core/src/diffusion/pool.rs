use serde::Serialize;

use crate::graph::NodeId;

#[inline]
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Uniform draw in `[0, 1)` keyed by `(seed, trial, u, v)`. Pure: no stream
/// state, so the value does not depend on evaluation order or thread.
#[inline]
pub fn unit_hash(seed: u64, trial: u64, u: NodeId, v: NodeId) -> f64 {
    let h = mix(mix(mix(seed) ^ trial) ^ ((u.0 as u64) << 32 | v.0 as u64));
    (h >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// A fixed set of live-edge realizations: trial `t` keeps edge `(u, v)` iff
/// its coin is below `p(u, v)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TrialPool {
    pub base_seed: u64,
    pub trials: u32,
}

impl TrialPool {
    pub fn new(base_seed: u64, trials: u32) -> Self {
        TrialPool { base_seed, trials }
    }

    #[inline]
    pub fn coin(&self, trial: u32, u: NodeId, v: NodeId) -> f64 {
        unit_hash(self.base_seed, trial as u64, u, v)
    }

    #[inline]
    pub fn is_live(&self, trial: u32, u: NodeId, v: NodeId, p: f64) -> bool {
        self.coin(trial, u, v) < p
    }

    /// An unrelated pool of the same size, for independent re-sampling.
    pub fn fork(&self, key: u64) -> TrialPool {
        TrialPool {
            base_seed: mix(self.base_seed ^ mix(key ^ 0x666f_726b)),
            trials: self.trials,
        }
    }
}
