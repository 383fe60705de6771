//! Built-in sweeps for the four reference figures.
//!
//! All use unit gains and noise. Grids are chosen to cover the plotted
//! ranges.

use secrecy_core::{EavesdropperMode, Scheme};

use crate::config::{Axis, SweepSpec, SystemTemplate, DEFAULT_SEED, DEFAULT_TRIALS};
use crate::error::{CliError, CliResult};

pub const FIGURES: [u32; 4] = [2, 3, 4, 5];

fn steps(start: f64, step: f64, count: usize) -> Vec<f64> {
    (0..count).map(|k| start + k as f64 * step).collect()
}

/// Sweep for figure `n` with default trials and seed.
pub fn figure_spec(n: u32) -> CliResult<SweepSpec> {
    let (axis, grid, base) = match n {
        // outage against the interference limit
        2 => (
            Axis::GammaIDb,
            steps(0.0, 2.0, 11),
            SystemTemplate::unit(8, 4, 1.0, 10.0, 10.0),
        ),
        // against the secrecy rate
        3 => (
            Axis::SecrecyRate,
            steps(0.0, 0.25, 13),
            SystemTemplate::unit(8, 4, 1.0, 10.0, 10.0),
        ),
        // against the number of eavesdroppers
        4 => (
            Axis::NumEves,
            steps(1.0, 1.0, 8),
            SystemTemplate::unit(8, 4, 1.0, 10.0, 10.0),
        ),
        // against the number of users
        5 => (
            Axis::NumUsers,
            steps(1.0, 1.0, 8),
            SystemTemplate::unit(8, 2, 0.2, 10.0, -3.0),
        ),
        _ => {
            return Err(CliError::Config(format!(
                "unknown figure {n}, expected 2, 3, 4 or 5"
            )))
        }
    };
    Ok(SweepSpec {
        axis,
        grid,
        schemes: Scheme::ALL.to_vec(),
        modes: EavesdropperMode::ALL.to_vec(),
        base,
        mc_trials: DEFAULT_TRIALS,
        seed: DEFAULT_SEED,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn figures_validate() {
        for n in FIGURES {
            figure_spec(n).unwrap().validate().unwrap();
        }
        assert!(figure_spec(6).is_err());
    }

    #[test]
    fn figure_two_parameters() {
        let spec = figure_spec(2).unwrap();
        assert_eq!(spec.grid.first(), Some(&0.0));
        assert_eq!(spec.grid.last(), Some(&20.0));
        let p = spec.point(10.0).unwrap();
        assert_eq!(p.system.num_users(), 8);
        assert_eq!(p.system.num_eves(), 4);
        assert_eq!(p.system.secrecy_rate(), 1.0);
        assert!((p.system.interference_limit() - 10.0).abs() < 1e-12);
        assert!((p.system.gain_main()[0] / p.system.gain_eve()[0][0] - 10.0).abs() < 1e-12);
    }

    #[test]
    fn figure_three_reaches_three() {
        let spec = figure_spec(3).unwrap();
        assert_eq!(spec.grid.last(), Some(&3.0));
    }
}
