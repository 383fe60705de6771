//! Brute-force numerical evaluation of the outage integrals.
//!
//! Nothing here shares code with [`crate::closed_form`]: each probability is
//! written directly as an expectation over the fading gains and integrated
//! adaptively. Slow by design; meant for certifying small configurations.

use crate::model::SystemConfig;
use crate::quadrature::{integrate, integrate_fallible, Integral, QuadratureSpec};
use crate::{Error, Result};

/// Largest eavesdropper count accepted by the single-user oracle.
pub const MAX_EVES_USER: usize = 6;
/// Limits of the suboptimal uncoordinated oracle.
pub const MAX_USERS_UNCOORDINATED: usize = 4;
pub const MAX_EVES_UNCOORDINATED: usize = 4;
/// Limits of the suboptimal coordinated oracle.
pub const MAX_USERS_COORDINATED: usize = 3;
pub const MAX_EVES_COORDINATED: usize = 4;

fn check_limit(what: &'static str, count: usize, cap: usize) -> Result<()> {
    if count > cap {
        Err(Error::CapacityExceeded { what, count, cap })
    } else {
        Ok(())
    }
}

/// `1 - e^{-t}` for `t >= 0`.
#[inline]
fn one_minus_exp(t: f64) -> f64 {
    -(-t).exp_m1()
}

/// `1 - prod_j (1 - e^{-c_j})`, accurate when the product is close to one.
fn miss_any(rates: impl Iterator<Item = f64>) -> f64 {
    let mut log_all = 0.0;
    for c in rates {
        if c <= 0.0 {
            return 1.0;
        }
        log_all += (-(-c).exp()).ln_1p();
    }
    -log_all.exp_m1()
}

/// Probability that every competitor's main gain is below `x`.
fn beats_competitors(x: f64, competitors: &[f64]) -> f64 {
    competitors.iter().map(|s| one_minus_exp(x / s)).product()
}

fn sorted_points(lo: f64, hi: f64, inner: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let mut pts = vec![lo];
    pts.extend(inner.into_iter().filter(|p| *p > lo && *p < hi));
    pts.push(hi);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

struct Rate {
    a: f64,
    am1: f64,
}

impl Rate {
    fn new(cfg: &SystemConfig) -> Self {
        let x = cfg.secrecy_rate() * std::f64::consts::LN_2;
        Self {
            a: x.exp(),
            am1: x.exp_m1(),
        }
    }
}

/// Outage of user `i` against independent eavesdroppers, as one minus the
/// probability that the main-channel margin exceeds every eavesdropper SNR.
pub fn quad_outage_user_uncoordinated(
    i: usize,
    cfg: &SystemConfig,
    spec: &QuadratureSpec,
) -> Result<Integral> {
    spec.validate()?;
    check_limit("eavesdropper", cfg.num_eves(), MAX_EVES_USER)?;
    if i >= cfg.num_users() {
        return Err(Error::config("user", format!("index {i} out of range")));
    }
    let Rate { a, am1 } = Rate::new(cfg);
    let nb = cfg.noise_cbs();
    let big_i = cfg.interference_limit();
    let sb = cfg.gain_main()[i];
    let sp = cfg.gain_primary()[i];
    let ne = cfg.noise_eve();
    let se = &cfg.gain_eve()[i];
    // margin density: scale * exp(-x / mean) on x > 0
    let mean = sb / (a * nb);
    let scale = a * nb * big_i / (sb * big_i + sp * am1 * nb);
    let upper = spec.truncation_radius * mean;
    let eve_scales: Vec<f64> = se.iter().zip(ne).map(|(s, n)| s / n).collect();
    let pts = sorted_points(
        0.0,
        upper,
        eve_scales
            .iter()
            .flat_map(|s| [*s, 10.0 * s])
            .chain([mean, 5.0 * mean]),
    );
    let f = |x: f64| {
        let all_below: f64 = eve_scales.iter().map(|s| one_minus_exp(x / s)).product();
        all_below * (-x / mean).exp()
    };
    let r = integrate(f, &pts, spec)?;
    Ok(Integral {
        value: 1.0 - scale * r.value,
        error: scale * r.error,
    })
}

/// Outage of user `i` against MRC-combining eavesdroppers.
pub fn quad_outage_user_coordinated(
    i: usize,
    cfg: &SystemConfig,
    spec: &QuadratureSpec,
) -> Result<Integral> {
    spec.validate()?;
    check_limit("eavesdropper", cfg.num_eves(), MAX_EVES_COORDINATED)?;
    if let Some(reason) = cfg.coordinated_iid_violation() {
        return Err(Error::ModelAssumption(reason));
    }
    if i >= cfg.num_users() {
        return Err(Error::config("user", format!("index {i} out of range")));
    }
    coordinated_user_term(i, cfg, &[], spec)
}

/// Classification of a point `(x, y, z)` = (main gain, primary gain, summed
/// eavesdropper gain) of the coordinated suboptimal outage integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoordinatedRegion {
    /// Main channel supports the rate, eavesdroppers beat the margin while
    /// the combined eavesdropper gain is below the main-channel threshold.
    Theta11,
    /// Main channel supports the rate and the eavesdroppers exceed the
    /// main-channel threshold outright.
    Theta12,
    /// The main channel alone cannot support the rate.
    Theta2,
}

/// Outage regions of the coordinated suboptimal integral for given
/// `(I, N_b, N_e, R_s)`.
#[derive(Debug, Clone, Copy)]
pub struct CoordinatedRegions {
    a: f64,
    am1: f64,
    nb: f64,
    ne: f64,
    big_i: f64,
}

impl CoordinatedRegions {
    pub fn new(cfg: &SystemConfig) -> Self {
        let Rate { a, am1 } = Rate::new(cfg);
        Self {
            a,
            am1,
            nb: cfg.noise_cbs(),
            ne: cfg.noise_eve()[0],
            big_i: cfg.interference_limit(),
        }
    }

    /// The whole outage set: `z > N_e x / (2^Rs N_b) - (2^Rs - 1) N_e y / (2^Rs I)`.
    pub fn in_outage(&self, x: f64, y: f64, z: f64) -> bool {
        z > self.ne * x / (self.a * self.nb) - self.am1 * self.ne * y / (self.a * self.big_i)
    }

    pub fn in_theta11(&self, x: f64, y: f64, z: f64) -> bool {
        let cut = self.big_i * x / (self.am1 * self.nb);
        cut > y
            && y > cut - self.a * self.big_i * z / (self.am1 * self.ne)
            && self.ne * x / (self.a * self.nb) - z > 0.0
    }

    pub fn in_theta12(&self, x: f64, y: f64, z: f64) -> bool {
        self.big_i * x / (self.am1 * self.nb) > y
            && y > 0.0
            && self.ne * x / (self.a * self.nb) - z < 0.0
    }

    pub fn in_theta2(&self, x: f64, y: f64, z: f64) -> bool {
        self.big_i * x / self.nb - self.am1 * y < 0.0 && z > 0.0
    }

    /// The unique region containing the point, if it lies in the outage set.
    pub fn classify(&self, x: f64, y: f64, z: f64) -> Option<CoordinatedRegion> {
        if self.in_theta2(x, y, z) {
            Some(CoordinatedRegion::Theta2)
        } else if self.in_theta11(x, y, z) {
            Some(CoordinatedRegion::Theta11)
        } else if self.in_theta12(x, y, z) {
            Some(CoordinatedRegion::Theta12)
        } else {
            None
        }
    }
}

/// Integral over `(x, z)` of the outage probability of user `i` conditioned
/// on its main gain `x` and summed eavesdropper gain `z`, weighted by the
/// probability that `x` beats every competitor. The primary gain is
/// integrated analytically.
fn coordinated_user_term(
    i: usize,
    cfg: &SystemConfig,
    competitors: &[f64],
    spec: &QuadratureSpec,
) -> Result<Integral> {
    let Rate { a, am1 } = Rate::new(cfg);
    let nb = cfg.noise_cbs();
    let ne = cfg.noise_eve()[0];
    let big_i = cfg.interference_limit();
    let sb = cfg.gain_main()[i];
    let sp = cfg.gain_primary()[i];
    let se = cfg.gain_eve()[i][0];
    let n = cfg.num_eves();
    let nf = n as f64;
    let fact: f64 = (1..n).map(|k| k as f64).product();
    let gamma_pdf = |z: f64| (z / se).powi(n as i32 - 1) * (-z / se).exp() / (se * fact);
    // Pr(outage | x, z): the primary gain exceeds the level that closes the
    // secrecy margin
    let p_outage = |x: f64, z: f64| {
        let gap = ne * x / (a * nb) - z;
        if gap <= 0.0 {
            1.0
        } else if am1 == 0.0 {
            0.0
        } else {
            (-(a * big_i * gap / (am1 * ne)) / sp).exp()
        }
    };
    let z_mean = nf * se;
    let z_upper = spec.truncation_radius * z_mean;
    let x_upper = spec.truncation_radius * sb;
    let inner_spec = spec.nested();
    let outer = |x: f64| -> Result<f64> {
        let weight = beats_competitors(x, competitors) * (-x / sb).exp() / sb;
        if weight == 0.0 {
            return Ok(0.0);
        }
        let z_star = ne * x / (a * nb);
        let pts = sorted_points(0.0, z_upper, [z_star, z_mean]);
        let r = integrate(|z| gamma_pdf(z) * p_outage(x, z), &pts, &inner_spec)?;
        Ok(weight * r.value)
    };
    let mut scales: Vec<f64> = vec![sb, 5.0 * sb];
    scales.extend(competitors.iter().copied());
    let pts = sorted_points(0.0, x_upper, scales);
    integrate_fallible(outer, &pts, spec)
}

/// Suboptimal scheduling against MRC-combining eavesdroppers, summed over
/// the scheduled user.
pub fn quad_outage_suboptimal_coordinated(
    cfg: &SystemConfig,
    spec: &QuadratureSpec,
) -> Result<Integral> {
    spec.validate()?;
    check_limit("user", cfg.num_users(), MAX_USERS_COORDINATED)?;
    check_limit("eavesdropper", cfg.num_eves(), MAX_EVES_COORDINATED)?;
    if let Some(reason) = cfg.coordinated_iid_violation() {
        return Err(Error::ModelAssumption(reason));
    }
    let mut total = Integral {
        value: 0.0,
        error: 0.0,
    };
    for i in 0..cfg.num_users() {
        let competitors = others(cfg, i);
        let r = coordinated_user_term(i, cfg, &competitors, spec)?;
        total.value += r.value;
        total.error += r.error;
    }
    Ok(total)
}

fn others(cfg: &SystemConfig, i: usize) -> Vec<f64> {
    cfg.gain_main()
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != i)
        .map(|(_, g)| *g)
        .collect()
}

/// Suboptimal scheduling against independent eavesdroppers: a 2-D
/// integral over the scheduled user's main gain `x` and primary gain `y`.
pub fn quad_outage_suboptimal_uncoordinated(
    cfg: &SystemConfig,
    spec: &QuadratureSpec,
) -> Result<Integral> {
    spec.validate()?;
    check_limit("user", cfg.num_users(), MAX_USERS_UNCOORDINATED)?;
    check_limit("eavesdropper", cfg.num_eves(), MAX_EVES_UNCOORDINATED)?;
    let Rate { a, am1 } = Rate::new(cfg);
    let nb = cfg.noise_cbs();
    let big_i = cfg.interference_limit();
    let inner_spec = spec.nested();
    let mut total = Integral {
        value: 0.0,
        error: 0.0,
    };
    for i in 0..cfg.num_users() {
        let sb = cfg.gain_main()[i];
        let sp = cfg.gain_primary()[i];
        let se = &cfg.gain_eve()[i];
        let ne = cfg.noise_eve();
        let competitors = others(cfg, i);
        let y_upper = spec.truncation_radius * sp;
        // y below this level leaves the main channel able to carry R_s
        let y_cut = |x: f64| {
            if am1 == 0.0 {
                f64::INFINITY
            } else {
                big_i * x / (am1 * nb)
            }
        };
        // eavesdropper j intercepts when its gain exceeds rate_j(x, y)
        let eve_rates = |x: f64, y: f64| {
            let margin = x / nb - am1 * y / big_i;
            se.iter()
                .zip(ne)
                .map(move |(s, n)| n * margin / (s * a))
                .collect::<Vec<_>>()
        };
        let outer = |x: f64| -> Result<f64> {
            let weight = beats_competitors(x, &competitors) * (-x / sb).exp() / sb;
            if weight == 0.0 {
                return Ok(0.0);
            }
            let cut = y_cut(x);
            let y_hi = cut.min(y_upper);
            let omega = if y_hi > 0.0 {
                let pts = sorted_points(0.0, y_hi, [sp, 5.0 * sp]);
                integrate(
                    |y| miss_any(eve_rates(x, y).into_iter()) * (-y / sp).exp() / sp,
                    &pts,
                    &inner_spec,
                )?
                .value
            } else {
                0.0
            };
            let phi = if cut.is_infinite() {
                0.0
            } else {
                (-cut / sp).exp()
            };
            Ok(weight * (omega + phi))
        };
        let x_upper = spec.truncation_radius * sb;
        let mut scales = vec![sb, 5.0 * sb];
        scales.extend(competitors.iter().copied());
        if am1 > 0.0 {
            // kink where the y range reaches its truncation
            scales.push(y_upper * am1 * nb / big_i);
        }
        let pts = sorted_points(0.0, x_upper, scales);
        let r = integrate_fallible(outer, &pts, spec)?;
        total.value += r.value;
        total.error += r.error;
    }
    Ok(total)
}
