//! Seeded Monte-Carlo estimation of secrecy outage.
//!
//! Trials are cut into fixed blocks of [`BLOCK_SIZE`]. Block `b` draws from
//! ChaCha8 seeded with the user seed on stream `b`, so the outcome does not
//! depend on how many threads process the blocks. Counts are integers and are
//! reduced in block order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::model::{
    capacity_main, sample_channels_into, secrecy_capacity, ChannelDraw, EavesdropperMode, Scheme,
    SystemConfig,
};
use crate::{Error, Result};

pub const BLOCK_SIZE: u64 = 4096;

/// Two-sided 95% standard normal quantile.
pub const WILSON_Z: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageEstimate {
    pub p_hat: f64,
    pub trials: u64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub seed: u64,
}

impl OutageEstimate {
    pub fn half_width(&self) -> f64 {
        0.5 * (self.ci_high - self.ci_low)
    }

    /// Whether `value` lies within `k` half-widths of the estimate.
    pub fn agrees_with(&self, value: f64, k: f64) -> bool {
        (self.p_hat - value).abs() <= k * self.half_width()
    }
}

/// 95% Wilson score interval for a proportion `p_hat` observed over `n`
/// trials.
pub fn wilson_interval(p_hat: f64, n: u64) -> (f64, f64) {
    let n = n as f64;
    let z2 = WILSON_Z * WILSON_Z;
    let denom = 1.0 + z2 / n;
    let center = (p_hat + z2 / (2.0 * n)) / denom;
    let half = WILSON_Z * (p_hat * (1.0 - p_hat) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = (center - half).max(0.0);
    let hi = (center + half).min(1.0);
    (lo.min(p_hat), hi.max(p_hat))
}

fn argmax(values: impl Iterator<Item = Result<f64>>) -> Result<usize> {
    let mut best = 0;
    let mut best_value = f64::NEG_INFINITY;
    for (i, v) in values.enumerate() {
        let v = v?;
        if v > best_value {
            best = i;
            best_value = v;
        }
    }
    Ok(best)
}

/// User scheduled on this draw. Ties go to the lowest index.
pub fn select_user(
    scheme: Scheme,
    draw: &ChannelDraw,
    cfg: &SystemConfig,
    mode: EavesdropperMode,
    slot: u64,
) -> Result<usize> {
    let m = cfg.num_users();
    match scheme {
        Scheme::RoundRobin => Ok((slot % m as u64) as usize),
        Scheme::Optimal => argmax((0..m).map(|i| secrecy_capacity(i, draw, cfg, mode))),
        Scheme::Suboptimal => argmax(draw.g_main.iter().map(|g| Ok(*g))),
    }
}

/// Outage counts of one (scheme, mode) pair, per user for round-robin.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Tally {
    outages: Vec<u64>,
    trials: Vec<u64>,
}

impl Tally {
    fn new(slots: usize) -> Self {
        Self {
            outages: vec![0; slots],
            trials: vec![0; slots],
        }
    }

    fn merge(&mut self, other: &Tally) {
        for (a, b) in self.outages.iter_mut().zip(&other.outages) {
            *a += b;
        }
        for (a, b) in self.trials.iter_mut().zip(&other.trials) {
            *a += b;
        }
    }
}

fn run_block(
    cfg: &SystemConfig,
    pairs: &[(Scheme, EavesdropperMode)],
    seed: u64,
    block: u64,
    total: u64,
) -> Result<Vec<Tally>> {
    let m = cfg.num_users();
    let rs = cfg.secrecy_rate();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    let start = block * BLOCK_SIZE;
    let end = (start + BLOCK_SIZE).min(total);
    let mut tallies: Vec<Tally> = pairs
        .iter()
        .map(|(s, _)| Tally::new(if *s == Scheme::RoundRobin { m } else { 1 }))
        .collect();
    let mut draw = ChannelDraw::zeros(m, cfg.num_eves());
    for slot in start..end {
        sample_channels_into(cfg, &mut rng, &mut draw);
        for ((scheme, mode), tally) in pairs.iter().zip(tallies.iter_mut()) {
            let user = select_user(*scheme, &draw, cfg, *mode, slot)?;
            let outage = secrecy_capacity(user, &draw, cfg, *mode)? < rs;
            let bucket = if *scheme == Scheme::RoundRobin {
                user
            } else {
                0
            };
            tally.trials[bucket] += 1;
            tally.outages[bucket] += u64::from(outage);
        }
    }
    Ok(tallies)
}

fn finish(tally: &Tally, trials: u64, seed: u64) -> OutageEstimate {
    let mut sum = 0.0;
    let mut strata = 0usize;
    for (k, n) in tally.outages.iter().zip(&tally.trials) {
        if *n > 0 {
            sum += *k as f64 / *n as f64;
            strata += 1;
        }
    }
    let p_hat = sum / strata as f64;
    let (ci_low, ci_high) = wilson_interval(p_hat, trials);
    OutageEstimate {
        p_hat,
        trials,
        ci_low,
        ci_high,
        seed,
    }
}

/// Estimates several (scheme, mode) pairs on one shared stream of draws.
///
/// Each returned estimate is identical to what [`estimate_outage`] gives for
/// that pair alone with the same trials and seed.
pub fn estimate_outage_joint(
    cfg: &SystemConfig,
    pairs: &[(Scheme, EavesdropperMode)],
    trials: u64,
    seed: u64,
) -> Result<Vec<OutageEstimate>> {
    if trials == 0 {
        return Err(Error::config("trials", "must be at least 1"));
    }
    let blocks = trials.div_ceil(BLOCK_SIZE);
    let per_block: Vec<Vec<Tally>> = (0..blocks)
        .into_par_iter()
        .map(|b| run_block(cfg, pairs, seed, b, trials))
        .collect::<Result<_>>()?;
    let mut totals: Vec<Tally> = pairs
        .iter()
        .map(|(s, _)| {
            Tally::new(if *s == Scheme::RoundRobin {
                cfg.num_users()
            } else {
                1
            })
        })
        .collect();
    for block in &per_block {
        for (t, b) in totals.iter_mut().zip(block) {
            t.merge(b);
        }
    }
    Ok(totals.iter().map(|t| finish(t, trials, seed)).collect())
}

/// Outage frequency with a 95% Wilson interval.
pub fn estimate_outage(
    scheme: Scheme,
    mode: EavesdropperMode,
    cfg: &SystemConfig,
    trials: u64,
    seed: u64,
) -> Result<OutageEstimate> {
    Ok(estimate_outage_joint(cfg, &[(scheme, mode)], trials, seed)?[0])
}

/// Secrecy capacity of the user each scheme schedules on one draw.
pub fn scheduled_secrecy_capacity(
    scheme: Scheme,
    draw: &ChannelDraw,
    cfg: &SystemConfig,
    mode: EavesdropperMode,
    slot: u64,
) -> Result<f64> {
    let user = select_user(scheme, draw, cfg, mode, slot)?;
    secrecy_capacity(user, draw, cfg, mode)
}

/// Main-channel capacity of the user each scheme schedules on one draw.
pub fn scheduled_main_capacity(
    scheme: Scheme,
    draw: &ChannelDraw,
    cfg: &SystemConfig,
    mode: EavesdropperMode,
    slot: u64,
) -> Result<f64> {
    let user = select_user(scheme, draw, cfg, mode, slot)?;
    capacity_main(user, draw, cfg)
}
