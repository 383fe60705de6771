//! Outage floors as the interference limit grows without bound, and the
//! secrecy diversity orders read off their decay against the MER.
//!
//! Floors only depend on the relative gains, the MER, the noise variances and
//! the secrecy rate; the primary-link gains drop out in the limit. Values are
//! carried alongside their natural logarithm so that very deep floors remain
//! usable for slope estimation.

use crate::model::{EavesdropperMode, MerParameterization, Scheme, SystemConfig};
use crate::numeric::{log_sum_exp, parity_sign, subset_sums, CompensatedSum, SUBSET_CAP};
use crate::quadrature::{integrate, QuadratureSpec};
use crate::{Error, Result};

/// MER above which the suboptimal floor switches from quadrature to the
/// high-MER series.
pub const HIGH_MER_THRESHOLD: f64 = 1e6;

/// Default MER grid for diversity estimation.
pub const DEFAULT_MER_GRID: [f64; 2] = [1e6, 1e8];

/// Floors below this value are treated as underflow by the slope estimator.
pub const UNDERFLOW_LIMIT: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundKind {
    Exact,
    LowerBound,
    UpperBound,
}

impl BoundKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Exact => "exact",
            Self::LowerBound => "lower",
            Self::UpperBound => "upper",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FloorResult {
    pub value: f64,
    pub ln_value: f64,
    pub bound_kind: BoundKind,
}

impl FloorResult {
    fn from_ln(ln_value: f64, bound_kind: BoundKind) -> Self {
        Self {
            value: ln_value.exp().min(1.0),
            ln_value,
            bound_kind,
        }
    }
}

/// An exact floor, or the lower/upper pair available for coordinated
/// eavesdroppers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Floor {
    Exact(FloorResult),
    Bounds {
        lower: FloorResult,
        upper: FloorResult,
    },
}

impl Floor {
    pub fn results(&self) -> Vec<FloorResult> {
        match *self {
            Floor::Exact(r) => vec![r],
            Floor::Bounds { lower, upper } => vec![lower, upper],
        }
    }

    pub fn lower(&self) -> f64 {
        match self {
            Floor::Exact(r) => r.value,
            Floor::Bounds { lower, .. } => lower.value,
        }
    }

    pub fn upper(&self) -> f64 {
        match self {
            Floor::Exact(r) => r.value,
            Floor::Bounds { upper, .. } => upper.value,
        }
    }
}

/// Everything a floor depends on.
#[derive(Debug, Clone, PartialEq)]
pub struct FloorParams {
    pub mer: MerParameterization,
    pub noise_cbs: f64,
    pub noise_eve: Vec<f64>,
    pub secrecy_rate: f64,
}

impl FloorParams {
    pub fn new(
        mer: MerParameterization,
        noise_cbs: f64,
        noise_eve: Vec<f64>,
        secrecy_rate: f64,
    ) -> Result<Self> {
        let p = Self {
            mer,
            noise_cbs,
            noise_eve,
            secrecy_rate,
        };
        p.validate()?;
        Ok(p)
    }

    /// Unit relative gains and unit noise at the given MER.
    pub fn uniform(num_users: usize, num_eves: usize, mer: f64, secrecy_rate: f64) -> Result<Self> {
        Self::new(
            MerParameterization::uniform(num_users, num_eves, mer)?,
            1.0,
            vec![1.0; num_eves],
            secrecy_rate,
        )
    }

    pub fn validate(&self) -> Result<()> {
        self.mer.validate()?;
        if self.noise_eve.len() != self.mer.num_eves() {
            return Err(Error::config(
                "noise_eve",
                format!(
                    "has {} entries for {} eavesdroppers",
                    self.noise_eve.len(),
                    self.mer.num_eves()
                ),
            ));
        }
        if !(self.noise_cbs > 0.0 && self.noise_cbs.is_finite()) {
            return Err(Error::config("noise_cbs", "must be finite and > 0"));
        }
        if self.noise_eve.iter().any(|n| !(*n > 0.0 && n.is_finite())) {
            return Err(Error::config("noise_eve", "entries must be finite and > 0"));
        }
        if !(self.secrecy_rate >= 0.0 && self.secrecy_rate.is_finite()) {
            return Err(Error::config("secrecy_rate", "must be finite and >= 0"));
        }
        Ok(())
    }

    pub fn with_mer(&self, mer: f64) -> Result<Self> {
        Ok(Self {
            mer: self.mer.with_mer(mer)?,
            ..self.clone()
        })
    }

    /// Finite-`I` system with these parameters.
    pub fn to_system_config(
        &self,
        gain_primary: Vec<f64>,
        interference_limit: f64,
    ) -> Result<SystemConfig> {
        self.mer.to_system_config(
            gain_primary,
            self.noise_cbs,
            self.noise_eve.clone(),
            interference_limit,
            self.secrecy_rate,
        )
    }

    fn num_users(&self) -> usize {
        self.mer.num_users()
    }

    fn num_eves(&self) -> usize {
        self.mer.num_eves()
    }

    fn rate_factor(&self) -> f64 {
        crate::numeric::pow2(self.secrecy_rate)
    }

    /// Noise vector standing in for the eavesdroppers under each bound kind.
    fn effective_noise(&self, kind: BoundKind) -> Vec<f64> {
        let n = self.num_eves();
        match kind {
            BoundKind::Exact => self.noise_eve.clone(),
            BoundKind::LowerBound => {
                let max = self.noise_eve.iter().copied().fold(f64::MIN, f64::max);
                vec![max; n]
            }
            BoundKind::UpperBound => {
                let min = self.noise_eve.iter().copied().fold(f64::MAX, f64::min);
                vec![min / n as f64; n]
            }
        }
    }
}

fn check_eves(params: &FloorParams) -> Result<()> {
    params.validate()?;
    if params.num_eves() > SUBSET_CAP {
        return Err(Error::CapacityExceeded {
            what: "eavesdropper",
            count: params.num_eves(),
            cap: SUBSET_CAP,
        });
    }
    Ok(())
}

/// Natural log of the large-`I` outage of user `i` against independent
/// eavesdroppers with noise `noise`.
fn ln_user_floor(params: &FloorParams, i: usize, noise: &[f64]) -> Result<f64> {
    let a = params.rate_factor();
    let nb = params.noise_cbs;
    let lambda = params.mer.mer;
    let theta_b = params.mer.theta_main[i];
    let weights: Vec<f64> = params.mer.theta_eve[i]
        .iter()
        .zip(noise)
        .map(|(t, n)| theta_b * n / t)
        .collect();
    let sums = subset_sums(&weights)?;
    // bracket * (1 / lambda) with the bracket tending to a constant
    let bracket: CompensatedSum = sums
        .iter()
        .enumerate()
        .skip(1)
        .map(|(mask, s)| -parity_sign(mask) * a * nb / (a * nb / lambda + s))
        .collect();
    let b = bracket.value();
    if !(b > 0.0) {
        return Err(Error::PrecisionLoss { deviation: -b });
    }
    Ok(b.ln() - lambda.ln())
}

fn ln_user_floors(params: &FloorParams, kind: BoundKind) -> Result<Vec<f64>> {
    check_eves(params)?;
    let noise = params.effective_noise(kind);
    (0..params.num_users())
        .map(|i| ln_user_floor(params, i, &noise))
        .collect()
}

fn by_mode(
    params: &FloorParams,
    mode: EavesdropperMode,
    f: impl Fn(&FloorParams, BoundKind) -> Result<f64>,
) -> Result<Floor> {
    Ok(match mode {
        EavesdropperMode::Uncoordinated => Floor::Exact(FloorResult::from_ln(
            f(params, BoundKind::Exact)?,
            BoundKind::Exact,
        )),
        EavesdropperMode::Coordinated => Floor::Bounds {
            lower: FloorResult::from_ln(f(params, BoundKind::LowerBound)?, BoundKind::LowerBound),
            upper: FloorResult::from_ln(f(params, BoundKind::UpperBound)?, BoundKind::UpperBound),
        },
    })
}

/// Per-user floor (or bound) of user `i`.
pub fn floor_user(params: &FloorParams, i: usize, kind: BoundKind) -> Result<FloorResult> {
    check_eves(params)?;
    if i >= params.num_users() {
        return Err(Error::config("user", format!("index {i} out of range")));
    }
    let ln = ln_user_floor(params, i, &params.effective_noise(kind))?;
    Ok(FloorResult::from_ln(ln, kind))
}

/// Round-robin floor: the mean of the per-user floors.
pub fn floor_round_robin(params: &FloorParams, mode: EavesdropperMode) -> Result<Floor> {
    by_mode(params, mode, |p, kind| {
        let logs = ln_user_floors(p, kind)?;
        Ok(log_sum_exp(&logs) - (logs.len() as f64).ln())
    })
}

/// Optimal-scheduling floor: the product of the per-user floors.
pub fn floor_optimal(params: &FloorParams, mode: EavesdropperMode) -> Result<Floor> {
    by_mode(params, mode, |p, kind| {
        let logs: CompensatedSum = ln_user_floors(p, kind)?.into_iter().collect();
        Ok(logs.value())
    })
}

fn check_users(params: &FloorParams) -> Result<()> {
    if params.num_users() > SUBSET_CAP {
        return Err(Error::CapacityExceeded {
            what: "user",
            count: params.num_users(),
            cap: SUBSET_CAP,
        });
    }
    Ok(())
}

/// High-MER series for the suboptimal floor, in natural log. Replaces every
/// competitor's `1 - exp(-x / sigma_kb)` by `x / sigma_kb`.
pub fn ln_floor_suboptimal_series(params: &FloorParams, kind: BoundKind) -> Result<f64> {
    check_eves(params)?;
    check_users(params)?;
    let m = params.num_users();
    let a = params.rate_factor();
    let nb = params.noise_cbs;
    let lambda = params.mer.mer;
    let noise = params.effective_noise(kind);
    let theta_b = &params.mer.theta_main;
    let ln_gamma_m: f64 = (1..m).map(|k| (k as f64).ln()).sum();
    let ln_prod_theta: f64 = theta_b.iter().map(|t| t.ln()).sum();
    let mut bracket = CompensatedSum::new();
    for i in 0..m {
        let weights: Vec<f64> = params.mer.theta_eve[i]
            .iter()
            .zip(&noise)
            .map(|(t, n)| n / (t * a * nb))
            .collect();
        let sums = subset_sums(&weights)?;
        for (mask, s) in sums.iter().enumerate().skip(1) {
            let base = 1.0 / (theta_b[i] * lambda) + s;
            bracket.add(-parity_sign(mask) * (-(m as f64) * base.ln()).exp());
        }
    }
    let b = bracket.value();
    if !(b > 0.0) {
        return Err(Error::PrecisionLoss { deviation: -b });
    }
    Ok(ln_gamma_m - ln_prod_theta + b.ln() - m as f64 * lambda.ln())
}

fn floor_quadrature_spec() -> QuadratureSpec {
    QuadratureSpec {
        abs_tol: f64::MIN_POSITIVE,
        rel_tol: 1e-11,
        max_subdivisions: 4000,
        truncation_radius: 50.0,
    }
}

/// Exact large-`I` suboptimal floor in natural log, by 1-D quadrature over
/// the scheduled user's main gain.
pub fn ln_floor_suboptimal_exact(params: &FloorParams, kind: BoundKind) -> Result<f64> {
    check_eves(params)?;
    check_users(params)?;
    let spec = floor_quadrature_spec();
    let m = params.num_users();
    let a = params.rate_factor();
    let nb = params.noise_cbs;
    let noise = params.effective_noise(kind);
    let gain_main = params.mer.gain_main();
    let gain_eve = params.mer.gain_eve();
    let mut logs = Vec::with_capacity(m);
    for i in 0..m {
        let sb = gain_main[i];
        let rates: Vec<f64> = gain_eve[i]
            .iter()
            .zip(&noise)
            .map(|(g, n)| n / (g * a * nb))
            .collect();
        let competitors: Vec<f64> = (0..m).filter(|&k| k != i).map(|k| gain_main[k]).collect();
        let c_min = rates.iter().copied().fold(f64::INFINITY, f64::min);
        let scale = 1.0 / (1.0 / sb + c_min);
        let integrand = |x: f64| {
            let log_all: f64 = rates.iter().map(|c| (-(-c * x).exp()).ln_1p()).sum();
            let intercepted = -log_all.exp_m1();
            let ahead: f64 = competitors.iter().map(|s| -(-x / s).exp_m1()).product();
            intercepted * ahead * (-x / sb).exp() / sb
        };
        let mut pts = vec![0.0, scale, 5.0 * scale, spec.truncation_radius * scale];
        for s in &competitors {
            if *s < pts[3] && *s > 0.0 {
                pts.push(*s);
            }
        }
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        let r = integrate(integrand, &pts, &spec)?;
        if !(r.value > 0.0) {
            return Err(Error::FloorUnderflow {
                mer: params.mer.mer,
                ln_value: f64::NEG_INFINITY,
            });
        }
        logs.push(r.value.ln());
    }
    Ok(log_sum_exp(&logs))
}

/// Suboptimal floor: quadrature below [`HIGH_MER_THRESHOLD`], the high-MER
/// series from there on.
pub fn floor_suboptimal(params: &FloorParams, mode: EavesdropperMode) -> Result<Floor> {
    by_mode(params, mode, |p, kind| {
        if p.mer.mer >= HIGH_MER_THRESHOLD {
            ln_floor_suboptimal_series(p, kind)
        } else {
            ln_floor_suboptimal_exact(p, kind)
        }
    })
}

pub fn floor(scheme: Scheme, mode: EavesdropperMode, params: &FloorParams) -> Result<Floor> {
    match scheme {
        Scheme::RoundRobin => floor_round_robin(params, mode),
        Scheme::Optimal => floor_optimal(params, mode),
        Scheme::Suboptimal => floor_suboptimal(params, mode),
    }
}

/// Negative log-log slope of one floor curve over the two largest MER values.
#[derive(Debug, Clone, PartialEq)]
pub struct DiversityEstimate {
    pub bound_kind: BoundKind,
    pub slope: f64,
    pub mer_grid: Vec<f64>,
}

fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.len() < 2 {
        return Err(Error::InvalidGrid("need at least two MER values".into()));
    }
    if grid.iter().any(|g| !(g.is_finite() && *g > 0.0)) {
        return Err(Error::InvalidGrid(
            "MER values must be finite and > 0".into(),
        ));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid(
            "MER values must be strictly increasing".into(),
        ));
    }
    if grid[grid.len() - 1] < HIGH_MER_THRESHOLD {
        return Err(Error::InvalidGrid(format!(
            "largest MER must be at least {HIGH_MER_THRESHOLD:e}"
        )));
    }
    Ok(())
}

/// One estimate per floor curve: a single exact slope for independent
/// eavesdroppers, the lower- and upper-bound slopes for coordinated ones.
pub fn estimate_diversity_order(
    scheme: Scheme,
    mode: EavesdropperMode,
    params: &FloorParams,
    mer_grid: &[f64],
) -> Result<Vec<DiversityEstimate>> {
    validate_grid(mer_grid)?;
    let l1 = mer_grid[mer_grid.len() - 2];
    let l2 = mer_grid[mer_grid.len() - 1];
    let f1 = floor(scheme, mode, &params.with_mer(l1)?)?.results();
    let f2 = floor(scheme, mode, &params.with_mer(l2)?)?.results();
    let ln_limit = UNDERFLOW_LIMIT.ln();
    let mut out = Vec::with_capacity(f1.len());
    for (r1, r2) in f1.iter().zip(&f2) {
        for (r, mer) in [(r1, l1), (r2, l2)] {
            if r.ln_value < ln_limit {
                return Err(Error::FloorUnderflow {
                    mer,
                    ln_value: r.ln_value,
                });
            }
        }
        out.push(DiversityEstimate {
            bound_kind: r1.bound_kind,
            slope: -(r2.ln_value - r1.ln_value) / (l2.ln() - l1.ln()),
            mer_grid: mer_grid.to_vec(),
        });
    }
    Ok(out)
}

/// Mean of `x / sigma_kb` under the unnormalized weight
/// `exp(-x / sigma_ib - sum_j N_j x / (sigma_iej 2^Rs N_b)) / sigma_ib`
/// restricted to the eavesdropper subset `mask`, by quadrature.
pub fn competitor_ratio_mean(params: &FloorParams, i: usize, k: usize, mask: usize) -> Result<f64> {
    params.validate()?;
    let m = params.num_users();
    if i >= m || k >= m {
        return Err(Error::config("user", "index out of range"));
    }
    if mask == 0 || mask >= 1 << params.num_eves() {
        return Err(Error::config("subset", format!("mask {mask} out of range")));
    }
    let a = params.rate_factor();
    let gain_main = params.mer.gain_main();
    let gain_eve = params.mer.gain_eve();
    let sb = gain_main[i];
    let rate: f64 = (0..params.num_eves())
        .filter(|j| mask >> j & 1 == 1)
        .map(|j| params.noise_eve[j] / (gain_eve[i][j] * a * params.noise_cbs))
        .sum::<f64>()
        + 1.0 / sb;
    let spec = floor_quadrature_spec();
    let scale = 1.0 / rate;
    let r = integrate(
        |x| x / gain_main[k] * (-rate * x).exp() / sb,
        &[0.0, scale, 5.0 * scale, spec.truncation_radius * scale],
        &spec,
    )?;
    Ok(r.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_form;
    use approx::assert_relative_eq;

    fn fig2(mer_db: f64) -> FloorParams {
        FloorParams::uniform(8, 4, 10f64.powf(mer_db / 10.0), 1.0).unwrap()
    }

    #[test]
    fn exact_floors_match_closed_forms_at_large_interference() {
        let p = fig2(10.0);
        let cfg = p.to_system_config(vec![1.0; 8], 1e6).unwrap();
        let mode = EavesdropperMode::Uncoordinated;
        for scheme in Scheme::ALL {
            let f = floor(scheme, mode, &p).unwrap().lower();
            let c = closed_form::outage(scheme, mode, &cfg).unwrap().value();
            assert_relative_eq!(c, f, max_relative = 0.01);
        }
    }

    #[test]
    fn single_user_series_matches_user_floor() {
        let p = FloorParams::uniform(1, 2, 1e6, 1.0).unwrap();
        let series = ln_floor_suboptimal_series(&p, BoundKind::Exact).unwrap();
        let user = floor_user(&p, 0, BoundKind::Exact).unwrap();
        assert_relative_eq!(series.exp(), user.value, max_relative = 0.01);
    }

    #[test]
    fn series_tracks_quadrature_at_high_mer() {
        let p = FloorParams::uniform(3, 2, 1e6, 1.0).unwrap();
        let series = ln_floor_suboptimal_series(&p, BoundKind::Exact).unwrap();
        let exact = ln_floor_suboptimal_exact(&p, BoundKind::Exact).unwrap();
        assert!((series - exact).abs() < 1e-3, "{series} {exact}");
    }

    #[test]
    fn fig2_suboptimal_series_within_five_percent_at_40db() {
        let p = fig2(40.0);
        let series = ln_floor_suboptimal_series(&p, BoundKind::Exact)
            .unwrap()
            .exp();
        let exact = ln_floor_suboptimal_exact(&p, BoundKind::Exact)
            .unwrap()
            .exp();
        assert!((series / exact - 1.0).abs() < 0.05);
    }

    #[test]
    fn floors_vanish_with_mer() {
        let p = FloorParams::uniform(2, 2, 1e12, 1.0).unwrap();
        for scheme in Scheme::ALL {
            assert!(
                floor(scheme, EavesdropperMode::Uncoordinated, &p)
                    .unwrap()
                    .upper()
                    < 1e-11
            );
        }
    }

    #[test]
    fn coordinated_single_eavesdropper_bounds_collapse() {
        let p = FloorParams::uniform(3, 1, 20.0, 1.0).unwrap();
        for scheme in Scheme::ALL {
            let u = floor(scheme, EavesdropperMode::Uncoordinated, &p).unwrap();
            let Floor::Bounds { lower, upper } =
                floor(scheme, EavesdropperMode::Coordinated, &p).unwrap()
            else {
                panic!("expected bounds");
            };
            assert_relative_eq!(lower.value, u.lower(), max_relative = 1e-12);
            assert_relative_eq!(upper.value, u.lower(), max_relative = 1e-12);
        }
    }

    #[test]
    fn optimal_floor_is_product_of_user_floors() {
        let mer = MerParameterization::new(
            vec![1.0, 0.5, 2.0],
            vec![vec![1.0, 0.3], vec![0.7, 2.0], vec![1.5, 1.0]],
            30.0,
        )
        .unwrap();
        let p = FloorParams::new(mer, 1.0, vec![1.0, 2.0], 0.7).unwrap();
        let product: f64 = (0..3)
            .map(|i| floor_user(&p, i, BoundKind::Exact).unwrap().value)
            .product();
        let f = floor_optimal(&p, EavesdropperMode::Uncoordinated).unwrap();
        assert_relative_eq!(f.lower(), product, max_relative = 1e-12);
    }

    #[test]
    fn diversity_orders() {
        for (m, n) in [(1, 1), (2, 3), (4, 2), (8, 4)] {
            let p = FloorParams::uniform(m, n, 1.0, 1.0).unwrap();
            for mode in EavesdropperMode::ALL {
                for scheme in Scheme::ALL {
                    let expected = if scheme == Scheme::RoundRobin {
                        1.0
                    } else {
                        m as f64
                    };
                    let est =
                        estimate_diversity_order(scheme, mode, &p, &DEFAULT_MER_GRID).unwrap();
                    assert_eq!(
                        est.len(),
                        if mode == EavesdropperMode::Coordinated {
                            2
                        } else {
                            1
                        }
                    );
                    for e in est {
                        assert!(
                            (e.slope - expected).abs() < 0.05,
                            "{scheme:?} {mode:?} {e:?}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn grid_validation() {
        let p = FloorParams::uniform(2, 1, 1.0, 1.0).unwrap();
        let est = |g: &[f64]| {
            estimate_diversity_order(Scheme::Optimal, EavesdropperMode::Uncoordinated, &p, g)
        };
        assert!(matches!(est(&[1e6]), Err(Error::InvalidGrid(_))));
        assert!(matches!(est(&[1e8, 1e6]), Err(Error::InvalidGrid(_))));
        assert!(matches!(est(&[1e2, 1e4]), Err(Error::InvalidGrid(_))));
        let deep = FloorParams::uniform(20, 1, 1.0, 1.0).unwrap();
        let r = estimate_diversity_order(
            Scheme::Optimal,
            EavesdropperMode::Uncoordinated,
            &deep,
            &[1e6, 1e20],
        );
        assert!(matches!(r, Err(Error::FloorUnderflow { .. })));
    }

    #[test]
    fn competitor_ratio_mean_decays_quadratically() {
        let mer =
            MerParameterization::new(vec![1.0, 1.0], vec![vec![0.1, 0.1], vec![0.1, 0.1]], 1e2)
                .unwrap();
        let p = FloorParams::new(mer, 1.0, vec![1.0, 1.0], 0.0).unwrap();
        let lo = competitor_ratio_mean(&p, 0, 1, 0b11).unwrap();
        let hi = competitor_ratio_mean(&p.with_mer(1e4).unwrap(), 0, 1, 0b11).unwrap();
        assert!((hi / lo / 1e-4 - 1.0).abs() < 0.01, "{}", hi / lo);
    }
}
