//! Network parameterization, Rayleigh fading draws and per-realization
//! capacities.
//!
//! Every user transmits at `P_i = I / |h_ip|^2`, so all capacities depend on
//! the fading power gains and on the ratios `I / N_b` and `I / N_ej` only.

use rand::distr::Open01;
use rand::Rng;

use crate::numeric::pow2;
use crate::{Error, Result};

/// Eavesdropper behaviour.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EavesdropperMode {
    /// Each eavesdropper decodes on its own; the wiretap rate is the best one.
    Uncoordinated,
    /// The eavesdroppers combine their signals with maximal ratio combining.
    Coordinated,
}

impl EavesdropperMode {
    pub const ALL: [EavesdropperMode; 2] = [Self::Uncoordinated, Self::Coordinated];

    pub fn name(self) -> &'static str {
        match self {
            Self::Uncoordinated => "uncoordinated",
            Self::Coordinated => "coordinated",
        }
    }
}

/// User scheduling scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    /// Users take turns regardless of channel state.
    RoundRobin,
    /// The user with the largest instantaneous secrecy capacity transmits.
    Optimal,
    /// The user with the strongest main channel transmits.
    Suboptimal,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Self::RoundRobin, Self::Optimal, Self::Suboptimal];

    pub fn name(self) -> &'static str {
        match self {
            Self::RoundRobin => "round_robin",
            Self::Optimal => "optimal",
            Self::Suboptimal => "suboptimal",
        }
    }
}

/// Full parameterization of the network in linear units.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    num_users: usize,
    num_eves: usize,
    /// Average power gain of each user's link to the base station.
    gain_main: Vec<f64>,
    /// Average power gain of each user's link to the primary receiver.
    gain_primary: Vec<f64>,
    /// `gain_eve[i][j]`: average power gain from user `i` to eavesdropper `j`.
    gain_eve: Vec<Vec<f64>>,
    noise_cbs: f64,
    noise_eve: Vec<f64>,
    interference_limit: f64,
    secrecy_rate: f64,
}

fn check_positive(field: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::config(
            field,
            format!("must be finite and > 0, got {v}"),
        ))
    }
}

fn check_all_positive(field: &'static str, vs: &[f64]) -> Result<()> {
    for (idx, &v) in vs.iter().enumerate() {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::config(
                field,
                format!("entry {idx} must be finite and > 0, got {v}"),
            ));
        }
    }
    Ok(())
}

impl SystemConfig {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        gain_main: Vec<f64>,
        gain_primary: Vec<f64>,
        gain_eve: Vec<Vec<f64>>,
        noise_cbs: f64,
        noise_eve: Vec<f64>,
        interference_limit: f64,
        secrecy_rate: f64,
    ) -> Result<Self> {
        let num_users = gain_main.len();
        let num_eves = noise_eve.len();
        if num_users == 0 {
            return Err(Error::config("gain_main", "needs at least one user"));
        }
        if num_eves == 0 {
            return Err(Error::config(
                "noise_eve",
                "needs at least one eavesdropper",
            ));
        }
        if gain_primary.len() != num_users {
            return Err(Error::config(
                "gain_primary",
                format!("has {} entries for {num_users} users", gain_primary.len()),
            ));
        }
        if gain_eve.len() != num_users {
            return Err(Error::config(
                "gain_eve",
                format!("has {} rows for {num_users} users", gain_eve.len()),
            ));
        }
        for row in &gain_eve {
            if row.len() != num_eves {
                return Err(Error::config(
                    "gain_eve",
                    format!("row has {} entries for {num_eves} eavesdroppers", row.len()),
                ));
            }
            check_all_positive("gain_eve", row)?;
        }
        check_all_positive("gain_main", &gain_main)?;
        check_all_positive("gain_primary", &gain_primary)?;
        check_all_positive("noise_eve", &noise_eve)?;
        check_positive("noise_cbs", noise_cbs)?;
        check_positive("interference_limit", interference_limit)?;
        if !(secrecy_rate.is_finite() && secrecy_rate >= 0.0) {
            return Err(Error::config(
                "secrecy_rate",
                format!("must be finite and >= 0, got {secrecy_rate}"),
            ));
        }
        Ok(Self {
            num_users,
            num_eves,
            gain_main,
            gain_primary,
            gain_eve,
            noise_cbs,
            noise_eve,
            interference_limit,
            secrecy_rate,
        })
    }

    /// `M` identical users facing `N` identical eavesdroppers.
    pub fn symmetric(
        num_users: usize,
        num_eves: usize,
        gain_main: f64,
        gain_primary: f64,
        gain_eve: f64,
        noise: f64,
        interference_limit: f64,
        secrecy_rate: f64,
    ) -> Result<Self> {
        Self::new(
            vec![gain_main; num_users],
            vec![gain_primary; num_users],
            vec![vec![gain_eve; num_eves]; num_users],
            noise,
            vec![noise; num_eves],
            interference_limit,
            secrecy_rate,
        )
    }

    pub fn num_users(&self) -> usize {
        self.num_users
    }

    pub fn num_eves(&self) -> usize {
        self.num_eves
    }

    pub fn gain_main(&self) -> &[f64] {
        &self.gain_main
    }

    pub fn gain_primary(&self) -> &[f64] {
        &self.gain_primary
    }

    pub fn gain_eve(&self) -> &[Vec<f64>] {
        &self.gain_eve
    }

    pub fn noise_cbs(&self) -> f64 {
        self.noise_cbs
    }

    pub fn noise_eve(&self) -> &[f64] {
        &self.noise_eve
    }

    pub fn interference_limit(&self) -> f64 {
        self.interference_limit
    }

    pub fn secrecy_rate(&self) -> f64 {
        self.secrecy_rate
    }

    /// `2^R_s`.
    pub fn rate_factor(&self) -> f64 {
        pow2(self.secrecy_rate)
    }

    pub fn with_interference_limit(&self, interference_limit: f64) -> Result<Self> {
        check_positive("interference_limit", interference_limit)?;
        Ok(Self {
            interference_limit,
            ..self.clone()
        })
    }

    pub fn with_secrecy_rate(&self, secrecy_rate: f64) -> Result<Self> {
        let mut next = self.clone();
        next.secrecy_rate = secrecy_rate;
        Self::new(
            next.gain_main,
            next.gain_primary,
            next.gain_eve,
            next.noise_cbs,
            next.noise_eve,
            next.interference_limit,
            next.secrecy_rate,
        )
    }

    /// Multiplies `I` and every noise variance by `c`.
    pub fn scaled_power(&self, c: f64) -> Result<Self> {
        check_positive("scale", c)?;
        Self::new(
            self.gain_main.clone(),
            self.gain_primary.clone(),
            self.gain_eve.clone(),
            self.noise_cbs * c,
            self.noise_eve.iter().map(|n| n * c).collect(),
            self.interference_limit * c,
            self.secrecy_rate,
        )
    }

    /// Whether user `i` meets the coordinated closed-form assumptions: equal
    /// eavesdropper gains across `j` and equal eavesdropper noise.
    pub fn coordinated_iid_violation(&self) -> Option<String> {
        const TOL: f64 = 1e-12;
        let close = |a: f64, b: f64| (a - b).abs() <= TOL * a.abs().max(b.abs());
        let n0 = self.noise_eve[0];
        if let Some(j) = self.noise_eve.iter().position(|&n| !close(n, n0)) {
            return Some(format!(
                "eavesdropper noise variances differ (N_e0 = {n0}, N_e{j} = {})",
                self.noise_eve[j]
            ));
        }
        for (i, row) in self.gain_eve.iter().enumerate() {
            if let Some(j) = row.iter().position(|&g| !close(g, row[0])) {
                return Some(format!(
                    "user {i} has unequal eavesdropper gains ({} vs {})",
                    row[0], row[j]
                ));
            }
        }
        None
    }
}

/// Relative parameterization by the main-to-eavesdropper ratio (MER).
///
/// Absolute gains follow from `gain_main[i] = theta_main[i] * sigma_m` and
/// `gain_eve[i][j] = theta_eve[i][j] * sigma_m / mer`.
#[derive(Debug, Clone, PartialEq)]
pub struct MerParameterization {
    pub theta_main: Vec<f64>,
    pub theta_eve: Vec<Vec<f64>>,
    pub mer: f64,
    pub ref_gain_main: f64,
}

impl MerParameterization {
    pub fn new(theta_main: Vec<f64>, theta_eve: Vec<Vec<f64>>, mer: f64) -> Result<Self> {
        let p = Self {
            theta_main,
            theta_eve,
            mer,
            ref_gain_main: 1.0,
        };
        p.validate()?;
        Ok(p)
    }

    /// All relative gains equal to one.
    pub fn uniform(num_users: usize, num_eves: usize, mer: f64) -> Result<Self> {
        Self::new(
            vec![1.0; num_users],
            vec![vec![1.0; num_eves]; num_users],
            mer,
        )
    }

    pub fn validate(&self) -> Result<()> {
        if self.theta_main.is_empty() {
            return Err(Error::config("theta_main", "needs at least one user"));
        }
        check_all_positive("theta_main", &self.theta_main)?;
        if self.theta_eve.len() != self.theta_main.len() {
            return Err(Error::config(
                "theta_eve",
                format!(
                    "has {} rows for {} users",
                    self.theta_eve.len(),
                    self.theta_main.len()
                ),
            ));
        }
        let n = self.theta_eve[0].len();
        if n == 0 {
            return Err(Error::config(
                "theta_eve",
                "needs at least one eavesdropper",
            ));
        }
        for row in &self.theta_eve {
            if row.len() != n {
                return Err(Error::config("theta_eve", "rows have unequal lengths"));
            }
            check_all_positive("theta_eve", row)?;
        }
        check_positive("mer", self.mer)?;
        check_positive("ref_gain_main", self.ref_gain_main)
    }

    pub fn num_users(&self) -> usize {
        self.theta_main.len()
    }

    pub fn num_eves(&self) -> usize {
        self.theta_eve[0].len()
    }

    pub fn with_mer(&self, mer: f64) -> Result<Self> {
        let p = Self {
            mer,
            ..self.clone()
        };
        p.validate()?;
        Ok(p)
    }

    /// Reference eavesdropper gain `sigma_e = sigma_m / mer`.
    pub fn ref_gain_eve(&self) -> f64 {
        self.ref_gain_main / self.mer
    }

    pub fn gain_main(&self) -> Vec<f64> {
        self.theta_main
            .iter()
            .map(|t| t * self.ref_gain_main)
            .collect()
    }

    pub fn gain_eve(&self) -> Vec<Vec<f64>> {
        let sigma_e = self.ref_gain_eve();
        self.theta_eve
            .iter()
            .map(|row| row.iter().map(|t| t * sigma_e).collect())
            .collect()
    }

    pub fn to_system_config(
        &self,
        gain_primary: Vec<f64>,
        noise_cbs: f64,
        noise_eve: Vec<f64>,
        interference_limit: f64,
        secrecy_rate: f64,
    ) -> Result<SystemConfig> {
        self.validate()?;
        SystemConfig::new(
            self.gain_main(),
            gain_primary,
            self.gain_eve(),
            noise_cbs,
            noise_eve,
            interference_limit,
            secrecy_rate,
        )
    }

    /// Inverse of [`to_system_config`](Self::to_system_config) for a chosen
    /// reference main gain and MER.
    pub fn from_system_config(cfg: &SystemConfig, ref_gain_main: f64, mer: f64) -> Result<Self> {
        check_positive("ref_gain_main", ref_gain_main)?;
        check_positive("mer", mer)?;
        let sigma_e = ref_gain_main / mer;
        let p = Self {
            theta_main: cfg.gain_main.iter().map(|g| g / ref_gain_main).collect(),
            theta_eve: cfg
                .gain_eve
                .iter()
                .map(|row| row.iter().map(|g| g / sigma_e).collect())
                .collect(),
            mer,
            ref_gain_main,
        };
        p.validate()?;
        Ok(p)
    }
}

/// One realization of every fading power gain.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelDraw {
    pub g_main: Vec<f64>,
    pub g_primary: Vec<f64>,
    pub g_eve: Vec<Vec<f64>>,
}

impl ChannelDraw {
    pub fn zeros(num_users: usize, num_eves: usize) -> Self {
        Self {
            g_main: vec![0.0; num_users],
            g_primary: vec![0.0; num_users],
            g_eve: vec![vec![0.0; num_eves]; num_users],
        }
    }
}

/// Exponential variate with the given mean by inverse transform of an open
/// uniform `u`: `-mean * ln(1 - u)`.
#[inline]
pub fn exponential<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> f64 {
    let u: f64 = rng.sample(Open01);
    -mean * (-u).ln_1p()
}

/// Draws a fresh realization: main gains, then primary gains, then the
/// eavesdropper matrix row by row.
pub fn sample_channels<R: Rng + ?Sized>(cfg: &SystemConfig, rng: &mut R) -> ChannelDraw {
    let mut draw = ChannelDraw::zeros(cfg.num_users, cfg.num_eves);
    sample_channels_into(cfg, rng, &mut draw);
    draw
}

/// In-place variant of [`sample_channels`] consuming the same stream.
pub fn sample_channels_into<R: Rng + ?Sized>(
    cfg: &SystemConfig,
    rng: &mut R,
    draw: &mut ChannelDraw,
) {
    for (g, &mean) in draw.g_main.iter_mut().zip(&cfg.gain_main) {
        *g = exponential(mean, rng);
    }
    for (g, &mean) in draw.g_primary.iter_mut().zip(&cfg.gain_primary) {
        *g = exponential(mean, rng);
    }
    for (row, means) in draw.g_eve.iter_mut().zip(&cfg.gain_eve) {
        for (g, &mean) in row.iter_mut().zip(means) {
            *g = exponential(mean, rng);
        }
    }
}

fn primary_gain(draw: &ChannelDraw, i: usize) -> Result<f64> {
    let gp = draw.g_primary[i];
    if gp > 0.0 {
        Ok(gp)
    } else {
        Err(Error::DegenerateDraw { user: i })
    }
}

/// `log2(1 + I g_main / (g_primary N_b))`.
pub fn capacity_main(i: usize, draw: &ChannelDraw, cfg: &SystemConfig) -> Result<f64> {
    let gp = primary_gain(draw, i)?;
    let snr = cfg.interference_limit * draw.g_main[i] / (gp * cfg.noise_cbs);
    Ok(snr.ln_1p() / std::f64::consts::LN_2)
}

/// Wiretap capacity of user `i`: the best single eavesdropper when
/// uncoordinated, the MRC-combined SNR when coordinated.
pub fn capacity_wiretap(
    i: usize,
    draw: &ChannelDraw,
    cfg: &SystemConfig,
    mode: EavesdropperMode,
) -> Result<f64> {
    let gp = primary_gain(draw, i)?;
    let power = cfg.interference_limit / gp;
    let gains = &draw.g_eve[i];
    let snr = match mode {
        EavesdropperMode::Uncoordinated => {
            gains
                .iter()
                .zip(&cfg.noise_eve)
                .map(|(g, n)| g / n)
                .fold(0.0, f64::max)
                * power
        }
        EavesdropperMode::Coordinated => {
            let total: f64 = gains.iter().sum();
            if total == 0.0 {
                0.0
            } else {
                let weighted: f64 = gains.iter().zip(&cfg.noise_eve).map(|(g, n)| g * n).sum();
                power * total * (total / weighted)
            }
        }
    };
    Ok(snr.ln_1p() / std::f64::consts::LN_2)
}

/// Main capacity minus wiretap capacity; negative when the eavesdroppers
/// out-hear the base station.
pub fn secrecy_capacity(
    i: usize,
    draw: &ChannelDraw,
    cfg: &SystemConfig,
    mode: EavesdropperMode,
) -> Result<f64> {
    Ok(capacity_main(i, draw, cfg)? - capacity_wiretap(i, draw, cfg, mode)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn unit_cfg(n: usize, i: f64) -> SystemConfig {
        SystemConfig::symmetric(1, n, 1.0, 1.0, 1.0, 1.0, i, 1.0).unwrap()
    }

    fn one_user_draw(gm: f64, gp: f64, ge: Vec<f64>) -> ChannelDraw {
        ChannelDraw {
            g_main: vec![gm],
            g_primary: vec![gp],
            g_eve: vec![ge],
        }
    }

    #[test]
    fn main_capacity_examples() {
        let cfg = unit_cfg(1, 1.0);
        let d = one_user_draw(0.7, 0.7, vec![0.1]);
        assert!((capacity_main(0, &d, &cfg).unwrap() - 1.0).abs() < 1e-15);

        let d = one_user_draw(0.0, 0.7, vec![0.1]);
        assert_eq!(capacity_main(0, &d, &cfg).unwrap(), 0.0);

        let cfg = unit_cfg(1, 10.0);
        let d = one_user_draw(3.0, 2.0, vec![0.1]);
        assert!((capacity_main(0, &d, &cfg).unwrap() - 4.0).abs() < 1e-14);
    }

    #[test]
    fn zero_primary_gain_is_an_error() {
        let cfg = unit_cfg(1, 1.0);
        let d = one_user_draw(1.0, 0.0, vec![0.1]);
        assert_eq!(
            capacity_main(0, &d, &cfg),
            Err(Error::DegenerateDraw { user: 0 })
        );
        assert!(capacity_wiretap(0, &d, &cfg, EavesdropperMode::Coordinated).is_err());
        assert!(secrecy_capacity(0, &d, &cfg, EavesdropperMode::Uncoordinated).is_err());
    }

    #[test]
    fn single_eavesdropper_modes_agree() {
        let cfg = unit_cfg(1, 3.0);
        let d = one_user_draw(0.4, 1.3, vec![0.9]);
        let expected = (1.0 + 3.0 * 0.9 / 1.3f64).log2();
        for mode in EavesdropperMode::ALL {
            assert!((capacity_wiretap(0, &d, &cfg, mode).unwrap() - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn silent_eavesdroppers_give_zero_wiretap_rate() {
        let cfg = unit_cfg(3, 3.0);
        let d = one_user_draw(0.4, 1.3, vec![0.0; 3]);
        for mode in EavesdropperMode::ALL {
            assert_eq!(capacity_wiretap(0, &d, &cfg, mode).unwrap(), 0.0);
            assert_eq!(
                secrecy_capacity(0, &d, &cfg, mode).unwrap(),
                capacity_main(0, &d, &cfg).unwrap()
            );
        }
    }

    #[test]
    fn equal_sinr_gives_zero_secrecy_capacity() {
        let cfg = SystemConfig::new(
            vec![1.0],
            vec![1.0],
            vec![vec![1.0, 1.0]],
            2.0,
            vec![4.0, 1.0],
            5.0,
            1.0,
        )
        .unwrap();
        // g_e1 / N_e1 = 0.3 = g_main / N_b
        let d = one_user_draw(0.6, 0.8, vec![0.2, 0.3]);
        let c = secrecy_capacity(0, &d, &cfg, EavesdropperMode::Uncoordinated).unwrap();
        assert!(c.abs() < 1e-15);
    }

    #[test]
    fn secrecy_capacity_matches_direct_formula() {
        let cfg = SystemConfig::new(
            vec![1.0, 2.0],
            vec![0.5, 1.5],
            vec![vec![0.3, 0.7, 0.2], vec![1.1, 0.4, 0.9]],
            1.3,
            vec![0.8, 1.2, 2.0],
            7.0,
            0.5,
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..200 {
            let d = sample_channels(&cfg, &mut rng);
            for i in 0..2 {
                let p = 7.0 / d.g_primary[i];
                let cb = (1.0 + p * d.g_main[i] / 1.3).log2();
                let ce_u = (0..3)
                    .map(|j| (1.0 + p * d.g_eve[i][j] / cfg.noise_eve()[j]).log2())
                    .fold(f64::MIN, f64::max);
                let s: f64 = d.g_eve[i].iter().sum();
                let w: f64 = (0..3).map(|j| d.g_eve[i][j] * cfg.noise_eve()[j]).sum();
                let ce_c = (1.0 + p * s * s / w).log2();
                let got_u = secrecy_capacity(i, &d, &cfg, EavesdropperMode::Uncoordinated).unwrap();
                let got_c = secrecy_capacity(i, &d, &cfg, EavesdropperMode::Coordinated).unwrap();
                assert!((got_u - (cb - ce_u)).abs() < 1e-12);
                assert!((got_c - (cb - ce_c)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn sampler_is_deterministic() {
        let cfg = SystemConfig::symmetric(3, 2, 1.0, 2.0, 0.5, 1.0, 10.0, 1.0).unwrap();
        let a = sample_channels(&cfg, &mut ChaCha8Rng::seed_from_u64(77));
        let b = sample_channels(&cfg, &mut ChaCha8Rng::seed_from_u64(77));
        assert_eq!(a, b);
        assert!(a.g_eve.iter().flatten().all(|g| g.to_bits() == g.to_bits()));
    }

    #[test]
    fn sampler_means_match_configuration() {
        let mut gain_main = vec![1.0; 2];
        gain_main[0] = 4.0;
        let cfg = SystemConfig::new(
            gain_main,
            vec![1.0; 2],
            vec![vec![1.0; 2]; 2],
            1.0,
            vec![1.0; 2],
            1.0,
            1.0,
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let trials = 1_000_000;
        let mut draw = ChannelDraw::zeros(2, 2);
        let mut sum_main0 = 0.0;
        let mut sum_unit = 0.0;
        let mut min_seen = f64::INFINITY;
        for _ in 0..trials {
            sample_channels_into(&cfg, &mut rng, &mut draw);
            sum_main0 += draw.g_main[0];
            sum_unit += draw.g_primary[1];
            min_seen = min_seen
                .min(draw.g_main[1])
                .min(draw.g_primary[0])
                .min(draw.g_eve[1][1]);
        }
        let n = trials as f64;
        // Exponential with mean mu has standard deviation mu.
        assert!((sum_main0 / n - 4.0).abs() < 3.0 * 4.0 / n.sqrt());
        assert!((sum_unit / n - 1.0).abs() < 0.01);
        assert!(min_seen > 0.0);
    }

    #[test]
    fn mer_round_trip() {
        let mer = MerParameterization {
            theta_main: vec![1.0, 0.5, 2.0],
            theta_eve: vec![vec![1.0, 0.3], vec![0.7, 2.0], vec![1.5, 1.0]],
            mer: 10f64.powf(1.3),
            ref_gain_main: 2.5,
        };
        let cfg = mer
            .to_system_config(vec![1.0; 3], 1.0, vec![1.0; 2], 10.0, 1.0)
            .unwrap();
        assert_eq!(cfg.gain_main()[1], 1.25);
        let back = MerParameterization::from_system_config(&cfg, 2.5, mer.mer).unwrap();
        for (a, b) in back
            .theta_eve
            .iter()
            .flatten()
            .zip(mer.theta_eve.iter().flatten())
        {
            assert!((a - b).abs() <= 1e-15 * b);
        }
        assert_eq!(back.theta_main, mer.theta_main);
    }

    #[test]
    fn rejects_invalid_configs() {
        let bad_gain = SystemConfig::new(
            vec![1.0, -1.0],
            vec![1.0; 2],
            vec![vec![1.0]; 2],
            1.0,
            vec![1.0],
            1.0,
            1.0,
        );
        assert!(matches!(
            bad_gain,
            Err(Error::InvalidConfig {
                field: "gain_main",
                ..
            })
        ));
        let bad_shape = SystemConfig::new(
            vec![1.0; 2],
            vec![1.0; 2],
            vec![vec![1.0, 1.0], vec![1.0]],
            1.0,
            vec![1.0; 2],
            1.0,
            1.0,
        );
        assert!(matches!(
            bad_shape,
            Err(Error::InvalidConfig {
                field: "gain_eve",
                ..
            })
        ));
        assert!(SystemConfig::symmetric(0, 1, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0).is_err());
        assert!(SystemConfig::symmetric(1, 1, 1.0, 1.0, 1.0, 1.0, 1.0, -0.5).is_err());
    }

    fn arb_draw_and_cfg() -> impl Strategy<Value = (SystemConfig, ChannelDraw)> {
        (1usize..4, 1usize..5).prop_flat_map(|(m, n)| {
            (
                prop::collection::vec(0.01f64..10.0, m),
                prop::collection::vec(0.01f64..10.0, m),
                prop::collection::vec(prop::collection::vec(0.0f64..10.0, n), m),
                0.1f64..10.0,
                prop::collection::vec(0.1f64..10.0, n),
                0.1f64..100.0,
            )
                .prop_map(move |(gm, gp, ge, nb, ne, i)| {
                    let cfg = SystemConfig::new(
                        vec![1.0; m],
                        vec![1.0; m],
                        vec![vec![1.0; n]; m],
                        nb,
                        ne,
                        i,
                        1.0,
                    )
                    .unwrap();
                    (
                        cfg,
                        ChannelDraw {
                            g_main: gm,
                            g_primary: gp,
                            g_eve: ge,
                        },
                    )
                })
        })
    }

    proptest! {
        #[test]
        fn capacities_are_scale_invariant((cfg, draw) in arb_draw_and_cfg(), c in 0.01f64..100.0) {
            let scaled = cfg.scaled_power(c).unwrap();
            for i in 0..cfg.num_users() {
                let a = capacity_main(i, &draw, &cfg).unwrap();
                let b = capacity_main(i, &draw, &scaled).unwrap();
                prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
                for mode in EavesdropperMode::ALL {
                    let a = capacity_wiretap(i, &draw, &cfg, mode).unwrap();
                    let b = capacity_wiretap(i, &draw, &scaled, mode).unwrap();
                    prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
                }
            }
        }

        #[test]
        fn mrc_dominates_best_single_eavesdropper_with_equal_noise(
            (cfg, draw) in arb_draw_and_cfg(), noise in 0.1f64..10.0,
        ) {
            let n = cfg.num_eves();
            let cfg = SystemConfig::new(
                cfg.gain_main().to_vec(), cfg.gain_primary().to_vec(), cfg.gain_eve().to_vec(),
                cfg.noise_cbs(), vec![noise; n], cfg.interference_limit(), 1.0,
            ).unwrap();
            for i in 0..cfg.num_users() {
                let u = capacity_wiretap(i, &draw, &cfg, EavesdropperMode::Uncoordinated).unwrap();
                let c = capacity_wiretap(i, &draw, &cfg, EavesdropperMode::Coordinated).unwrap();
                prop_assert!(c >= u - 1e-12);
                let sum: f64 = draw.g_eve[i].iter().sum();
                let direct = (1.0 + cfg.interference_limit() * sum / (draw.g_primary[i] * noise)).log2();
                prop_assert!((c - direct).abs() <= 1e-12 * direct.max(1.0));
            }
        }
    }
}
