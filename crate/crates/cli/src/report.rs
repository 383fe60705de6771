//! Floor tables, diversity tables and the oracle certification battery.

use secrecy_core::asymptotics::{self, estimate_diversity_order, FloorParams, DEFAULT_MER_GRID};
use secrecy_core::quadrature::QuadratureSpec;
use secrecy_core::{closed_form, oracle, SystemConfig};

use crate::config::{db_to_linear, Axis, SweepSpec};
use crate::error::{CliError, CliResult};

/// MER values (dB) used by the floor table when the sweep is not over MER.
pub const DEFAULT_FLOOR_GRID_DB: [f64; 7] = [0.0, 10.0, 20.0, 30.0, 40.0, 50.0, 60.0];

fn base_params(spec: &SweepSpec) -> CliResult<FloorParams> {
    Ok(spec.point(spec.grid[0])?.floor)
}

/// Floor (or bound pair) for every scheme, mode and MER value, one row per
/// bound: `mer_db,scheme,mode,bound,floor`.
pub fn floor_csv(spec: &SweepSpec) -> CliResult<String> {
    let grid_db: Vec<f64> = match spec.axis {
        Axis::MerDb => spec.grid.clone(),
        _ => DEFAULT_FLOOR_GRID_DB.to_vec(),
    };
    let base = base_params(spec)?;
    let mut out = String::from("mer_db,scheme,mode,bound,floor\n");
    for db in grid_db {
        let params = base.with_mer(db_to_linear(db))?;
        for scheme in &spec.schemes {
            for mode in &spec.modes {
                let f = asymptotics::floor(*scheme, *mode, &params)?;
                for r in f.results() {
                    out.push_str(&format!(
                        "{db},{},{},{},{:.11e}\n",
                        scheme.name(),
                        mode.name(),
                        r.bound_kind.name(),
                        r.value
                    ));
                }
            }
        }
    }
    Ok(out)
}

/// Diversity-order estimates: `scheme,mode,bound,slope`.
pub fn diversity_csv(spec: &SweepSpec) -> CliResult<String> {
    let params = base_params(spec)?;
    let mut out = String::from("scheme,mode,bound,slope\n");
    for scheme in &spec.schemes {
        for mode in &spec.modes {
            for est in estimate_diversity_order(*scheme, *mode, &params, &DEFAULT_MER_GRID)? {
                out.push_str(&format!(
                    "{},{},{},{:.11e}\n",
                    scheme.name(),
                    mode.name(),
                    est.bound_kind.name(),
                    est.slope
                ));
            }
        }
    }
    Ok(out)
}

pub const CERTIFY_TOLERANCE: f64 = 1e-6;

/// Largest relative error seen for one closed form.
#[derive(Debug, Clone, PartialEq)]
pub struct CertifyEntry {
    pub formula: &'static str,
    pub max_rel_error: f64,
    pub cases: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertifyReport {
    pub entries: Vec<CertifyEntry>,
    pub tolerance: f64,
}

impl CertifyReport {
    pub fn passed(&self) -> bool {
        self.entries
            .iter()
            .all(|e| e.max_rel_error < self.tolerance)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("formula,cases,max_rel_error\n");
        for e in &self.entries {
            out.push_str(&format!(
                "{},{},{:.11e}\n",
                e.formula, e.cases, e.max_rel_error
            ));
        }
        out
    }
}

// deterministic values in [lo, hi) without pulling in an RNG
fn spread(seed: u64, k: u64, lo: f64, hi: f64) -> f64 {
    let u = crate::sweep::point_seed(seed, k as usize) >> 11;
    lo + (hi - lo) * (u as f64 / (1u64 << 53) as f64)
}

/// Heterogeneous gains and noise for every user and eavesdropper.
pub fn battery_uncoordinated(m: usize, n: usize, seed: u64) -> SystemConfig {
    let mut k = 0;
    let mut next = |lo, hi| {
        k += 1;
        spread(seed, k, lo, hi)
    };
    let gb = (0..m).map(|_| next(0.3, 3.0)).collect();
    let gp = (0..m).map(|_| next(0.3, 3.0)).collect();
    let ge = (0..m)
        .map(|_| (0..n).map(|_| next(0.05, 1.5)).collect())
        .collect();
    let ne = (0..n).map(|_| next(0.5, 2.0)).collect();
    SystemConfig::new(
        gb,
        gp,
        ge,
        next(0.5, 2.0),
        ne,
        next(2.0, 50.0),
        next(0.2, 2.0),
    )
    .expect("battery parameters are in range")
}

/// Heterogeneous users whose eavesdroppers are statistically identical.
pub fn battery_coordinated(m: usize, n: usize, seed: u64) -> SystemConfig {
    let mut k = 0;
    let mut next = |lo, hi| {
        k += 1;
        spread(seed, k, lo, hi)
    };
    let gb = (0..m).map(|_| next(0.3, 3.0)).collect();
    let gp = (0..m).map(|_| next(0.3, 3.0)).collect();
    let ge = (0..m).map(|_| vec![next(0.05, 1.5); n]).collect();
    let ne = next(0.5, 2.0);
    SystemConfig::new(
        gb,
        gp,
        ge,
        next(0.5, 2.0),
        vec![ne; n],
        next(2.0, 50.0),
        next(0.2, 2.0),
    )
    .expect("battery parameters are in range")
}

fn rel_err(closed: f64, reference: f64) -> f64 {
    (closed - reference).abs() / reference.abs()
}

/// Compares every closed form against its quadrature oracle over
/// M, N in 1..=3.
pub fn certify(quad: &QuadratureSpec) -> CliResult<CertifyReport> {
    let mut user_unc = CertifyEntry {
        formula: "user_uncoordinated",
        max_rel_error: 0.0,
        cases: 0,
    };
    let mut user_coo = CertifyEntry {
        formula: "user_coordinated",
        max_rel_error: 0.0,
        cases: 0,
    };
    let mut sub_unc = CertifyEntry {
        formula: "suboptimal_uncoordinated",
        max_rel_error: 0.0,
        cases: 0,
    };
    let mut sub_coo = CertifyEntry {
        formula: "suboptimal_coordinated",
        max_rel_error: 0.0,
        cases: 0,
    };
    let record = |e: &mut CertifyEntry, c: f64, q: f64| {
        e.max_rel_error = e.max_rel_error.max(rel_err(c, q));
        e.cases += 1;
    };
    for m in 1..=3 {
        for n in 1..=3 {
            let seed = 10 * m as u64 + n as u64;
            let cfg = battery_uncoordinated(m, n, seed);
            for i in 0..m {
                let q = oracle::quad_outage_user_uncoordinated(i, &cfg, quad)?.value;
                let c = closed_form::outage_user_uncoordinated(i, &cfg)?.value();
                record(&mut user_unc, c, q);
            }
            let q = oracle::quad_outage_suboptimal_uncoordinated(&cfg, quad)?.value;
            let c = closed_form::outage_suboptimal_uncoordinated(&cfg)?.value();
            record(&mut sub_unc, c, q);

            let cfg = battery_coordinated(m, n, 1000 + seed);
            for i in 0..m {
                let q = oracle::quad_outage_user_coordinated(i, &cfg, quad)?.value;
                let c = closed_form::outage_user_coordinated(i, &cfg)?.value();
                record(&mut user_coo, c, q);
            }
            let q = oracle::quad_outage_suboptimal_coordinated(&cfg, quad)?.value;
            let c = closed_form::outage_suboptimal_coordinated(&cfg)?.value();
            record(&mut sub_coo, c, q);
        }
    }
    Ok(CertifyReport {
        entries: vec![user_unc, user_coo, sub_unc, sub_coo],
        tolerance: CERTIFY_TOLERANCE,
    })
}

impl CertifyReport {
    /// Error naming every formula over tolerance, if any.
    pub fn check(&self) -> CliResult<()> {
        let failing: Vec<&str> = self
            .entries
            .iter()
            .filter(|e| e.max_rel_error >= self.tolerance)
            .map(|e| e.formula)
            .collect();
        if failing.is_empty() {
            Ok(())
        } else {
            Err(CliError::Certification(format!(
                "{} above relative error {:e}",
                failing.join(", "),
                self.tolerance
            )))
        }
    }
}
