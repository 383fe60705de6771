//! Grid evaluation and CSV emission.

use rayon::prelude::*;

use secrecy_core::asymptotics::{self, Floor};
use secrecy_core::closed_form;
use secrecy_core::montecarlo::{estimate_outage_joint, OutageEstimate};
use secrecy_core::{EavesdropperMode, Error, Scheme};

use crate::config::SweepSpec;
use crate::error::CliResult;

pub const CSV_HEADER: &str = "axis,scheme,mode,analytic,floor_or_bounds";
pub const CSV_MC_HEADER: &str = ",mc_p_hat,mc_ci_low,mc_ci_high";

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub axis: f64,
    pub scheme: Scheme,
    pub mode: EavesdropperMode,
    /// Closed-form outage; `None` when its preconditions fail.
    pub analytic: Option<f64>,
    pub floor: Option<Floor>,
    pub mc: Option<OutageEstimate>,
}

/// Seed for grid point `index`, independent of evaluation order.
pub fn point_seed(seed: u64, index: usize) -> u64 {
    let mut z = seed
        ^ (index as u64)
            .wrapping_add(1)
            .wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn unavailable(e: &Error) -> bool {
    matches!(
        e,
        Error::ModelAssumption(_) | Error::CapacityExceeded { .. }
    )
}

fn evaluate_point(spec: &SweepSpec, index: usize) -> CliResult<Vec<Row>> {
    let v = spec.grid[index];
    let point = spec.point(v)?;
    let pairs: Vec<(Scheme, EavesdropperMode)> = spec
        .schemes
        .iter()
        .flat_map(|s| spec.modes.iter().map(move |m| (*s, *m)))
        .collect();

    let mc = if spec.mc_trials > 0 {
        Some(estimate_outage_joint(
            &point.system,
            &pairs,
            spec.mc_trials,
            point_seed(spec.seed, index),
        )?)
    } else {
        None
    };

    let mut rows = Vec::with_capacity(pairs.len());
    for (k, (scheme, mode)) in pairs.iter().enumerate() {
        let analytic = match closed_form::outage(*scheme, *mode, &point.system) {
            Ok(p) => Some(p.value()),
            Err(e) if unavailable(&e) && mc.is_some() => None,
            Err(e) => return Err(e.into()),
        };
        let floor = match asymptotics::floor(*scheme, *mode, &point.floor) {
            Ok(f) => Some(f),
            Err(e) if unavailable(&e) => None,
            Err(e) => return Err(e.into()),
        };
        rows.push(Row {
            axis: v,
            scheme: *scheme,
            mode: *mode,
            analytic,
            floor,
            mc: mc.as_ref().map(|est| est[k]),
        });
    }
    Ok(rows)
}

/// Evaluates every (grid point, scheme, mode) triple, sorted by axis value,
/// then scheme, then mode.
pub fn run_sweep(spec: &SweepSpec) -> CliResult<Vec<Row>> {
    spec.validate()?;
    let per_point: Vec<CliResult<Vec<Row>>> = (0..spec.grid.len())
        .into_par_iter()
        .map(|i| evaluate_point(spec, i))
        .collect();
    let mut rows = Vec::new();
    for r in per_point {
        rows.extend(r?);
    }
    Ok(rows)
}

fn real(x: f64) -> String {
    format!("{x:.11e}")
}

fn floor_cell(f: &Floor) -> String {
    match f {
        Floor::Exact(r) => real(r.value),
        Floor::Bounds { lower, upper } => format!("{};{}", real(lower.value), real(upper.value)),
    }
}

/// Renders rows as CSV; the Monte-Carlo columns appear only with `with_mc`.
pub fn to_csv(rows: &[Row], with_mc: bool) -> String {
    let mut out = String::from(CSV_HEADER);
    if with_mc {
        out.push_str(CSV_MC_HEADER);
    }
    out.push('\n');
    for r in rows {
        let cells = [
            format!("{}", r.axis),
            r.scheme.name().to_string(),
            r.mode.name().to_string(),
            r.analytic.map(real).unwrap_or_default(),
            r.floor.as_ref().map(floor_cell).unwrap_or_default(),
        ];
        out.push_str(&cells.join(","));
        if with_mc {
            match &r.mc {
                Some(e) => {
                    for x in [e.p_hat, e.ci_low, e.ci_high] {
                        out.push(',');
                        out.push_str(&real(x));
                    }
                }
                None => out.push_str(",,,"),
            }
        }
        out.push('\n');
    }
    out
}

/// Runs a sweep and renders it.
pub fn sweep_csv(spec: &SweepSpec) -> CliResult<String> {
    let rows = run_sweep(spec)?;
    Ok(to_csv(&rows, spec.mc_trials > 0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_seeds_are_distinct() {
        let seeds: std::collections::BTreeSet<u64> = (0..1000).map(|i| point_seed(42, i)).collect();
        assert_eq!(seeds.len(), 1000);
        assert_ne!(point_seed(1, 0), point_seed(2, 0));
    }

    #[test]
    fn reals_have_twelve_digits() {
        assert_eq!(real(0.1), "1.00000000000e-1");
        assert_eq!(real(1.0 / 3.0), "3.33333333333e-1");
    }
}
