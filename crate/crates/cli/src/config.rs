//! TOML sweep configurations.
//!
//! ```toml
//! [sweep]
//! axis = "gamma_I_db"
//! grid = { start = 0, stop = 20, step = 2 }
//! schemes = ["round_robin", "optimal", "suboptimal"]
//! modes = ["uncoordinated", "coordinated"]
//! mc_trials = 1000000
//! seed = 42
//!
//! [system]
//! num_users = 8
//! num_eves = 4
//! secrecy_rate = 1.0
//! mer_db = 10
//! ```
//!
//! Gains and noise variances accept a scalar (broadcast) or a list; the
//! eavesdropper gain matrix also accepts a single per-eavesdropper row.
//! Decibel keys are converted to linear units here and nowhere else.

use serde::Deserialize;

use secrecy_core::asymptotics::FloorParams;
use secrecy_core::{EavesdropperMode, MerParameterization, Scheme, SystemConfig};

use crate::error::{CliError, CliResult};

pub const DEFAULT_TRIALS: u64 = 1_000_000;
pub const DEFAULT_SEED: u64 = 42;

/// Swept parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    GammaIDb,
    SecrecyRate,
    NumEves,
    NumUsers,
    MerDb,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::GammaIDb => "gamma_I_db",
            Axis::SecrecyRate => "secrecy_rate",
            Axis::NumEves => "num_eves",
            Axis::NumUsers => "num_users",
            Axis::MerDb => "mer_db",
        }
    }

    fn parse(s: &str) -> CliResult<Self> {
        Ok(match s {
            "gamma_I_db" | "gamma_i_db" => Axis::GammaIDb,
            "secrecy_rate" => Axis::SecrecyRate,
            "num_eves" => Axis::NumEves,
            "num_users" => Axis::NumUsers,
            "mer_db" => Axis::MerDb,
            other => {
                return Err(CliError::Config(format!(
                    "`sweep.axis`: unknown axis `{other}`, expected one of gamma_I_db, \
                     secrecy_rate, num_eves, num_users, mer_db"
                )))
            }
        })
    }

    fn is_count(self) -> bool {
        matches!(self, Axis::NumEves | Axis::NumUsers)
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn scheme_from_name(s: &str) -> CliResult<Scheme> {
    Scheme::ALL
        .into_iter()
        .find(|x| x.name() == s)
        .ok_or_else(|| {
            CliError::Config(format!(
                "`sweep.schemes`: unknown scheme `{s}`, expected round_robin, optimal or suboptimal"
            ))
        })
}

pub fn mode_from_name(s: &str) -> CliResult<EavesdropperMode> {
    EavesdropperMode::ALL
        .into_iter()
        .find(|x| x.name() == s)
        .ok_or_else(|| {
            CliError::Config(format!(
                "`sweep.modes`: unknown mode `{s}`, expected uncoordinated or coordinated"
            ))
        })
}

/// A value given once for everyone or once per entity.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum PerEntity {
    Scalar(f64),
    List(Vec<f64>),
}

impl PerEntity {
    fn resolve(&self, field: &str, len: usize) -> CliResult<Vec<f64>> {
        match self {
            PerEntity::Scalar(v) => Ok(vec![*v; len]),
            PerEntity::List(vs) if vs.len() == len => Ok(vs.clone()),
            PerEntity::List(vs) => Err(CliError::Config(format!(
                "`{field}` has {} entries but {len} are needed",
                vs.len()
            ))),
        }
    }
}

/// Eavesdropper gains: one value, one row shared by all users, or a full
/// users-by-eavesdroppers matrix.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum PerLink {
    Scalar(f64),
    Row(Vec<f64>),
    Matrix(Vec<Vec<f64>>),
}

impl PerLink {
    fn resolve(&self, field: &str, m: usize, n: usize) -> CliResult<Vec<Vec<f64>>> {
        match self {
            PerLink::Scalar(v) => Ok(vec![vec![*v; n]; m]),
            PerLink::Row(r) if r.len() == n => Ok(vec![r.clone(); m]),
            PerLink::Row(r) => Err(CliError::Config(format!(
                "`{field}` row has {} entries but there are {n} eavesdroppers",
                r.len()
            ))),
            PerLink::Matrix(rows) => {
                if rows.len() != m || rows.iter().any(|r| r.len() != n) {
                    return Err(CliError::Config(format!(
                        "`{field}` must be a {m}x{n} matrix"
                    )));
                }
                Ok(rows.clone())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
enum RawGrid {
    List(Vec<f64>),
    Range { start: f64, stop: f64, step: f64 },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    axis: String,
    grid: RawGrid,
    schemes: Option<Vec<String>>,
    modes: Option<Vec<String>>,
    mc_trials: Option<u64>,
    seed: Option<u64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSystem {
    num_users: usize,
    num_eves: usize,
    secrecy_rate: f64,
    #[serde(rename = "gamma_I_db", alias = "gamma_i_db")]
    gamma_i_db: Option<f64>,
    interference_limit: Option<f64>,
    mer_db: Option<f64>,
    mer: Option<f64>,
    theta_main: Option<PerEntity>,
    theta_eve: Option<PerLink>,
    ref_gain_main: Option<f64>,
    gain_main: Option<PerEntity>,
    gain_eve: Option<PerLink>,
    gain_primary: Option<PerEntity>,
    noise_cbs: Option<f64>,
    noise_eve: Option<PerEntity>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    sweep: Option<RawSweep>,
    system: RawSystem,
}

/// How user-to-receiver gains are specified.
#[derive(Debug, Clone, PartialEq)]
pub enum GainSpec {
    /// Relative gains scaled by a reference main gain and the MER.
    Relative {
        theta_main: PerEntity,
        theta_eve: PerLink,
        ref_gain_main: f64,
        mer: Option<f64>,
    },
    /// Absolute average gains.
    Absolute {
        gain_main: PerEntity,
        gain_eve: PerLink,
    },
}

/// System parameters before the swept axis is substituted.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemTemplate {
    pub num_users: usize,
    pub num_eves: usize,
    pub secrecy_rate: f64,
    /// Linear `I`; absent only when the sweep supplies it.
    pub interference_limit: Option<f64>,
    pub gains: GainSpec,
    pub gain_primary: PerEntity,
    pub noise_cbs: f64,
    pub noise_eve: PerEntity,
}

impl SystemTemplate {
    /// All-unit gains and noise, the setting of every built-in figure.
    pub fn unit(
        num_users: usize,
        num_eves: usize,
        secrecy_rate: f64,
        gamma_i_db: f64,
        mer_db: f64,
    ) -> Self {
        Self {
            num_users,
            num_eves,
            secrecy_rate,
            interference_limit: Some(db_to_linear(gamma_i_db)),
            gains: GainSpec::Relative {
                theta_main: PerEntity::Scalar(1.0),
                theta_eve: PerLink::Scalar(1.0),
                ref_gain_main: 1.0,
                mer: Some(db_to_linear(mer_db)),
            },
            gain_primary: PerEntity::Scalar(1.0),
            noise_cbs: 1.0,
            noise_eve: PerEntity::Scalar(1.0),
        }
    }
}

/// The system at one grid point, in both parameterizations.
#[derive(Debug, Clone, PartialEq)]
pub struct GridPoint {
    pub system: SystemConfig,
    pub floor: FloorParams,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub axis: Axis,
    pub grid: Vec<f64>,
    pub schemes: Vec<Scheme>,
    pub modes: Vec<EavesdropperMode>,
    pub base: SystemTemplate,
    /// Monte-Carlo trials per grid point; 0 disables simulation.
    pub mc_trials: u64,
    pub seed: u64,
}

impl SweepSpec {
    /// Resolves the system at axis value `v`.
    pub fn point(&self, v: f64) -> CliResult<GridPoint> {
        let t = &self.base;
        let mut m = t.num_users;
        let mut n = t.num_eves;
        let mut rs = t.secrecy_rate;
        let mut interference = t.interference_limit;
        let mut mer_override = None;
        match self.axis {
            Axis::GammaIDb => interference = Some(db_to_linear(v) * t.noise_cbs),
            Axis::SecrecyRate => rs = v,
            Axis::NumEves => n = v as usize,
            Axis::NumUsers => m = v as usize,
            Axis::MerDb => mer_override = Some(db_to_linear(v)),
        }
        let interference = interference.ok_or_else(|| {
            CliError::Config(
                "`system.gamma_I_db` or `system.interference_limit` is required".into(),
            )
        })?;
        let gain_primary = t.gain_primary.resolve("system.gain_primary", m)?;
        let noise_eve = t.noise_eve.resolve("system.noise_eve", n)?;
        let mer = match &t.gains {
            GainSpec::Relative {
                theta_main,
                theta_eve,
                ref_gain_main,
                mer,
            } => {
                let lambda = mer_override.or(*mer).ok_or_else(|| {
                    CliError::Config("`system.mer_db` or `system.mer` is required".into())
                })?;
                let mut p = MerParameterization::new(
                    theta_main.resolve("system.theta_main", m)?,
                    theta_eve.resolve("system.theta_eve", m, n)?,
                    lambda,
                )?;
                p.ref_gain_main = *ref_gain_main;
                p.validate()?;
                p
            }
            GainSpec::Absolute {
                gain_main,
                gain_eve,
            } => {
                if mer_override.is_some() {
                    return Err(CliError::Config(
                        "the mer_db axis needs relative gains (theta_main/theta_eve)".into(),
                    ));
                }
                let cfg = SystemConfig::new(
                    gain_main.resolve("system.gain_main", m)?,
                    gain_primary.clone(),
                    gain_eve.resolve("system.gain_eve", m, n)?,
                    t.noise_cbs,
                    noise_eve.clone(),
                    interference,
                    rs,
                )?;
                MerParameterization::from_system_config(&cfg, 1.0, 1.0)?
            }
        };
        let floor = FloorParams::new(mer, t.noise_cbs, noise_eve, rs)?;
        let system = floor.to_system_config(gain_primary, interference)?;
        Ok(GridPoint { system, floor })
    }

    /// Checks the grid and that every point yields a valid system.
    pub fn validate(&self) -> CliResult<()> {
        if self.grid.is_empty() {
            return Err(CliError::Config("`sweep.grid` must not be empty".into()));
        }
        if self.grid.iter().any(|v| !v.is_finite()) {
            return Err(CliError::Config(
                "`sweep.grid` values must be finite".into(),
            ));
        }
        if self.grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(CliError::Config(
                "`sweep.grid` must be strictly increasing".into(),
            ));
        }
        if self.axis.is_count() && self.grid.iter().any(|v| *v < 1.0 || v.fract() != 0.0) {
            return Err(CliError::Config(format!(
                "`sweep.grid` values for axis {} must be positive integers",
                self.axis.name()
            )));
        }
        if self.schemes.is_empty() || self.modes.is_empty() {
            return Err(CliError::Config(
                "`sweep.schemes` and `sweep.modes` must not be empty".into(),
            ));
        }
        for v in &self.grid {
            self.point(*v)?;
        }
        Ok(())
    }
}

fn expand_grid(raw: RawGrid) -> CliResult<Vec<f64>> {
    match raw {
        RawGrid::List(v) => Ok(v),
        RawGrid::Range { start, stop, step } => {
            if !(step > 0.0 && step.is_finite() && start.is_finite() && stop.is_finite()) {
                return Err(CliError::Config(
                    "`sweep.grid` range needs finite start/stop and step > 0".into(),
                ));
            }
            let count = ((stop - start) / step + 1e-9).floor();
            if !(0.0..=1e6).contains(&count) {
                return Err(CliError::Config(
                    "`sweep.grid` range is empty or too long".into(),
                ));
            }
            Ok((0..=count as usize)
                .map(|k| start + k as f64 * step)
                .collect())
        }
    }
}

fn exclusive<T>(a: Option<T>, b: Option<T>, names: &str) -> CliResult<Option<(T, bool)>> {
    match (a, b) {
        (Some(_), Some(_)) => Err(CliError::Config(format!("give only one of {names}"))),
        (Some(x), None) => Ok(Some((x, true))),
        (None, Some(y)) => Ok(Some((y, false))),
        (None, None) => Ok(None),
    }
}

/// Parses and validates a TOML configuration document.
pub fn parse_config(text: &str) -> CliResult<SweepSpec> {
    let raw: RawConfig =
        toml::from_str(text).map_err(|e| CliError::Config(format!("configuration: {e}")))?;
    let s = raw.system;
    let interference = exclusive(
        s.gamma_i_db,
        s.interference_limit,
        "`gamma_I_db` and `interference_limit`",
    )?;
    let noise_cbs = s.noise_cbs.unwrap_or(1.0);
    let interference_limit = interference.map(|(v, is_db)| {
        if is_db {
            db_to_linear(v) * noise_cbs
        } else {
            v
        }
    });
    let mer = exclusive(s.mer_db, s.mer, "`mer_db` and `mer`")?.map(|(v, is_db)| {
        if is_db {
            db_to_linear(v)
        } else {
            v
        }
    });
    let relative = s.theta_main.is_some() || s.theta_eve.is_some() || s.ref_gain_main.is_some();
    let absolute = s.gain_main.is_some() || s.gain_eve.is_some();
    let gains =
        match (relative, absolute) {
            (true, true) => return Err(CliError::Config(
                "relative gains (theta_*) and absolute gains (gain_main/gain_eve) are exclusive"
                    .into(),
            )),
            (_, true) => {
                if mer.is_some() {
                    return Err(CliError::Config(
                        "`mer`/`mer_db` only apply to relative gains".into(),
                    ));
                }
                GainSpec::Absolute {
                    gain_main: s.gain_main.unwrap_or(PerEntity::Scalar(1.0)),
                    gain_eve: s.gain_eve.unwrap_or(PerLink::Scalar(1.0)),
                }
            }
            _ => GainSpec::Relative {
                theta_main: s.theta_main.unwrap_or(PerEntity::Scalar(1.0)),
                theta_eve: s.theta_eve.unwrap_or(PerLink::Scalar(1.0)),
                ref_gain_main: s.ref_gain_main.unwrap_or(1.0),
                mer,
            },
        };
    let base = SystemTemplate {
        num_users: s.num_users,
        num_eves: s.num_eves,
        secrecy_rate: s.secrecy_rate,
        interference_limit,
        gains,
        gain_primary: s.gain_primary.unwrap_or(PerEntity::Scalar(1.0)),
        noise_cbs,
        noise_eve: s.noise_eve.unwrap_or(PerEntity::Scalar(1.0)),
    };
    let spec = match raw.sweep {
        Some(sw) => {
            let mut schemes = match sw.schemes {
                Some(names) => names
                    .iter()
                    .map(|n| scheme_from_name(n))
                    .collect::<CliResult<Vec<_>>>()?,
                None => Scheme::ALL.to_vec(),
            };
            schemes.sort();
            schemes.dedup();
            let mut modes = match sw.modes {
                Some(names) => names
                    .iter()
                    .map(|n| mode_from_name(n))
                    .collect::<CliResult<Vec<_>>>()?,
                None => EavesdropperMode::ALL.to_vec(),
            };
            modes.sort();
            modes.dedup();
            SweepSpec {
                axis: Axis::parse(&sw.axis)?,
                grid: expand_grid(sw.grid)?,
                schemes,
                modes,
                base,
                mc_trials: sw.mc_trials.unwrap_or(DEFAULT_TRIALS),
                seed: sw.seed.unwrap_or(DEFAULT_SEED),
            }
        }
        None => {
            // a single point at the configured system
            let gamma_db = base
                .interference_limit
                .map(|i| 10.0 * (i / base.noise_cbs).log10())
                .ok_or_else(|| {
                    CliError::Config(
                        "`system.gamma_I_db` or `system.interference_limit` is required".into(),
                    )
                })?;
            SweepSpec {
                axis: Axis::GammaIDb,
                grid: vec![gamma_db],
                schemes: Scheme::ALL.to_vec(),
                modes: EavesdropperMode::ALL.to_vec(),
                base,
                mc_trials: DEFAULT_TRIALS,
                seed: DEFAULT_SEED,
            }
        }
    };
    spec.validate()?;
    Ok(spec)
}
