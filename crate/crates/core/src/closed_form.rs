//! Exact secrecy outage probabilities.
//!
//! All expressions are inclusion-exclusion sums over subsets of eavesdroppers
//! (and, for the suboptimal scheme, over subsets of competing users). They are
//! accumulated with compensated summation and clamped to `[0, 1]` at the end.

use crate::model::{EavesdropperMode, Scheme, SystemConfig};
use crate::numeric::{parity_sign, subset_sums, CompensatedSum, SUBSET_CAP};
use crate::{Error, Result};

/// Largest `2^N * 2^(M-1)` product enumerated per user by the suboptimal
/// uncoordinated form.
pub const JOINT_TERM_CAP: usize = 1 << 26;

/// Residue outside `[0, 1]` that is silently clamped.
pub const CLAMP_TOLERANCE: f64 = 1e-9;

/// Relative band around the `(B.11)` switching condition inside which the
/// limit form is used.
pub const BRANCH_TOLERANCE: f64 = 1e-9;

/// A probability in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct OutageProbability {
    value: f64,
}

impl OutageProbability {
    /// Clamps floating-point residue; anything further than
    /// [`CLAMP_TOLERANCE`] outside `[0, 1]` is reported as precision loss.
    pub fn from_raw(raw: f64) -> Result<Self> {
        if raw.is_nan() {
            return Err(Error::PrecisionLoss {
                deviation: f64::NAN,
            });
        }
        let deviation = if raw < 0.0 {
            -raw
        } else if raw > 1.0 {
            raw - 1.0
        } else {
            0.0
        };
        if deviation > CLAMP_TOLERANCE {
            return Err(Error::PrecisionLoss { deviation });
        }
        Ok(Self {
            value: raw.clamp(0.0, 1.0),
        })
    }

    pub fn value(self) -> f64 {
        self.value
    }
}

impl From<OutageProbability> for f64 {
    fn from(p: OutageProbability) -> f64 {
        p.value
    }
}

/// `2^R_s` and `2^R_s - 1`, the latter without cancellation for small rates.
fn rate_terms(cfg: &SystemConfig) -> (f64, f64) {
    let x = cfg.secrecy_rate() * std::f64::consts::LN_2;
    (x.exp(), x.exp_m1())
}

fn check_user(i: usize, cfg: &SystemConfig) -> Result<()> {
    if i < cfg.num_users() {
        Ok(())
    } else {
        Err(Error::config(
            "user",
            format!("index {i} out of range for {} users", cfg.num_users()),
        ))
    }
}

fn check_cap(what: &'static str, count: usize) -> Result<()> {
    if count > SUBSET_CAP {
        Err(Error::CapacityExceeded {
            what,
            count,
            cap: SUBSET_CAP,
        })
    } else {
        Ok(())
    }
}

fn check_coordinated(cfg: &SystemConfig) -> Result<()> {
    match cfg.coordinated_iid_violation() {
        Some(reason) => Err(Error::ModelAssumption(reason)),
        None => Ok(()),
    }
}

/// `N_ej / sigma_iej^2` for every eavesdropper of user `i`.
fn eve_weights(i: usize, cfg: &SystemConfig) -> Vec<f64> {
    cfg.gain_eve()[i]
        .iter()
        .zip(cfg.noise_eve())
        .map(|(g, n)| n / g)
        .collect()
}

/// `1/sigma_kb^2` summed over every subset of the users other than `i`,
/// in mask order over the remaining indices.
fn competitor_sums(i: usize, cfg: &SystemConfig) -> Result<Vec<f64>> {
    let inv: Vec<f64> = cfg
        .gain_main()
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != i)
        .map(|(_, g)| 1.0 / g)
        .collect();
    subset_sums(&inv)
}

fn raw_user_uncoordinated(i: usize, cfg: &SystemConfig) -> Result<f64> {
    check_user(i, cfg)?;
    check_cap("eavesdropper", cfg.num_eves())?;
    let (a, am1) = rate_terms(cfg);
    let nb = cfg.noise_cbs();
    let big_i = cfg.interference_limit();
    let sb = cfg.gain_main()[i];
    let sp = cfg.gain_primary()[i];
    let sums = subset_sums(&eve_weights(i, cfg))?;
    let q = sp * am1 * nb;
    let base = a * nb / sb;
    let mut num = CompensatedSum::new();
    num.add(q);
    for (mask, s) in sums.iter().enumerate().skip(1) {
        num.add(-parity_sign(mask) * a * nb * big_i / (base + s));
    }
    Ok(num.value() / (sb * big_i + q))
}

fn raw_user_coordinated(i: usize, cfg: &SystemConfig) -> Result<f64> {
    check_user(i, cfg)?;
    check_coordinated(cfg)?;
    let (a, am1) = rate_terms(cfg);
    let nb = cfg.noise_cbs();
    let ne = cfg.noise_eve()[0];
    let big_i = cfg.interference_limit();
    let sb = cfg.gain_main()[i];
    let sp = cfg.gain_primary()[i];
    let se = cfg.gain_eve()[i][0];
    let n = cfg.num_eves() as f64;
    let connect = sb * big_i / (sb * big_i + sp * am1 * nb);
    // (1 + x)^(-N) through ln_1p keeps precision when x is tiny
    let x = a * se * nb / (sb * ne);
    let leak = (-n * x.ln_1p()).exp();
    Ok(1.0 - connect * leak)
}

/// Outage of user `i` against independent eavesdroppers.
pub fn outage_user_uncoordinated(i: usize, cfg: &SystemConfig) -> Result<OutageProbability> {
    OutageProbability::from_raw(raw_user_uncoordinated(i, cfg)?)
}

/// Outage of user `i` against MRC-combining eavesdroppers with identical
/// statistics.
pub fn outage_user_coordinated(i: usize, cfg: &SystemConfig) -> Result<OutageProbability> {
    OutageProbability::from_raw(raw_user_coordinated(i, cfg)?)
}

// A single eavesdropper has nothing to combine, so both modes share one
// expression and compare equal bit for bit.
fn effective_mode(cfg: &SystemConfig, mode: EavesdropperMode) -> EavesdropperMode {
    if cfg.num_eves() == 1 {
        EavesdropperMode::Uncoordinated
    } else {
        mode
    }
}

pub fn outage_user(
    i: usize,
    cfg: &SystemConfig,
    mode: EavesdropperMode,
) -> Result<OutageProbability> {
    match effective_mode(cfg, mode) {
        EavesdropperMode::Uncoordinated => outage_user_uncoordinated(i, cfg),
        EavesdropperMode::Coordinated => outage_user_coordinated(i, cfg),
    }
}

fn per_user(cfg: &SystemConfig, mode: EavesdropperMode) -> Result<Vec<f64>> {
    (0..cfg.num_users())
        .map(|i| outage_user(i, cfg, mode).map(f64::from))
        .collect()
}

/// Mean of the per-user outages.
pub fn outage_round_robin(cfg: &SystemConfig, mode: EavesdropperMode) -> Result<OutageProbability> {
    let users = per_user(cfg, mode)?;
    let total: CompensatedSum = users.iter().copied().collect();
    OutageProbability::from_raw(total.value() / users.len() as f64)
}

/// Product of the per-user outages.
pub fn outage_optimal(cfg: &SystemConfig, mode: EavesdropperMode) -> Result<OutageProbability> {
    let users = per_user(cfg, mode)?;
    OutageProbability::from_raw(users.iter().product())
}

/// Whether the eavesdropper subset `mask` of user `i` sits on the switching
/// condition where the regular suboptimal expression turns into `0/0`.
pub fn on_degenerate_branch(i: usize, mask: usize, cfg: &SystemConfig) -> bool {
    let (a, am1) = rate_terms(cfg);
    let weights = eve_weights(i, cfg);
    let s: f64 = (0..weights.len())
        .filter(|j| mask >> j & 1 == 1)
        .map(|j| weights[j])
        .sum();
    let v = s * am1 / (a * cfg.interference_limit());
    (cfg.gain_primary()[i] * v - 1.0).abs() <= BRANCH_TOLERANCE
}

fn raw_suboptimal_uncoordinated(cfg: &SystemConfig) -> Result<f64> {
    let m = cfg.num_users();
    let n = cfg.num_eves();
    check_cap("eavesdropper", n)?;
    check_cap("user", m)?;
    let per_user_terms = (1usize << n).saturating_mul(1usize << (m - 1));
    if per_user_terms > JOINT_TERM_CAP {
        return Err(Error::CapacityExceeded {
            what: "joint subset term",
            count: per_user_terms,
            cap: JOINT_TERM_CAP,
        });
    }
    let (a, am1) = rate_terms(cfg);
    let nb = cfg.noise_cbs();
    let big_i = cfg.interference_limit();
    let mut total = CompensatedSum::new();
    for i in 0..m {
        let sb = cfg.gain_main()[i];
        let sp = cfg.gain_primary()[i];
        let q = sp * am1 * nb;
        let b: Vec<f64> = competitor_sums(i, cfg)?
            .into_iter()
            .map(|c| 1.0 / sb + c)
            .collect();
        let eve = subset_sums(&eve_weights(i, cfg))?;

        for (mm, &bm) in b.iter().enumerate() {
            total.add(parity_sign(mm) * q / (sb * bm * q + sb * big_i));
        }

        for (mask, &s) in eve.iter().enumerate().skip(1) {
            let u = s / (a * nb);
            let v = s * am1 / (a * big_i);
            let den = 1.0 - sp * v;
            let limit = (sp * v - 1.0).abs() <= BRANCH_TOLERANCE;
            let mut inner = CompensatedSum::new();
            for (mm, &bm) in b.iter().enumerate() {
                let beta = bm + u;
                let t = if limit {
                    big_i / (sb * beta * (bm * q + big_i))
                } else {
                    (1.0 / (sb * beta) - q / (sb * bm * q + sb * big_i)) / den
                };
                inner.add(parity_sign(mm) * t);
            }
            total.add(-parity_sign(mask) * inner.value());
        }
    }
    Ok(total.value())
}

/// Suboptimal (strongest main channel) scheduling against independent
/// eavesdroppers.
pub fn outage_suboptimal_uncoordinated(cfg: &SystemConfig) -> Result<OutageProbability> {
    OutageProbability::from_raw(raw_suboptimal_uncoordinated(cfg)?)
}

fn raw_suboptimal_coordinated(cfg: &SystemConfig) -> Result<f64> {
    let m = cfg.num_users();
    check_cap("user", m)?;
    check_coordinated(cfg)?;
    let (a, am1) = rate_terms(cfg);
    let nb = cfg.noise_cbs();
    let ne = cfg.noise_eve()[0];
    let big_i = cfg.interference_limit();
    let n = cfg.num_eves() as f64;
    let mut total = CompensatedSum::new();
    for i in 0..m {
        let sb = cfg.gain_main()[i];
        let sp = cfg.gain_primary()[i];
        let se = cfg.gain_eve()[i][0];
        for (mm, c) in competitor_sums(i, cfg)?.into_iter().enumerate() {
            let sg = parity_sign(mm);
            let bm = 1.0 / sb + c;
            // 1/D with D = B + I / ((2^Rs - 1) N_b sigma_ip^2), finite at Rs = 0
            let inv_d = am1 * nb * sp / (am1 * nb * sp * bm + big_i);
            let cc = 1.0 / se + bm * a * nb / ne;
            let g1 = (-n * (se * cc).ln()).exp();
            let r2 = am1 * ne * sp / (se * (cc * am1 * ne * sp + a * big_i));
            let g2 = r2.powf(n);
            let p1 = sg * inv_d / sb * (g1 - g2);
            let p2 = sg / sb * ((1.0 - g1) / bm - (1.0 - g2) * inv_d);
            let p3 = sg * inv_d / sb;
            total.add(p1);
            total.add(p2);
            total.add(p3);
        }
    }
    Ok(total.value())
}

/// Suboptimal scheduling against MRC-combining eavesdroppers with identical
/// statistics.
pub fn outage_suboptimal_coordinated(cfg: &SystemConfig) -> Result<OutageProbability> {
    OutageProbability::from_raw(raw_suboptimal_coordinated(cfg)?)
}

pub fn outage_suboptimal(cfg: &SystemConfig, mode: EavesdropperMode) -> Result<OutageProbability> {
    match effective_mode(cfg, mode) {
        EavesdropperMode::Uncoordinated => outage_suboptimal_uncoordinated(cfg),
        EavesdropperMode::Coordinated => outage_suboptimal_coordinated(cfg),
    }
}

/// Closed-form outage for any scheme and mode.
pub fn outage(
    scheme: Scheme,
    mode: EavesdropperMode,
    cfg: &SystemConfig,
) -> Result<OutageProbability> {
    match scheme {
        Scheme::RoundRobin => outage_round_robin(cfg, mode),
        Scheme::Optimal => outage_optimal(cfg, mode),
        Scheme::Suboptimal => outage_suboptimal(cfg, mode),
    }
}
