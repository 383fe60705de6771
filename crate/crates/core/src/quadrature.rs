//! Globally adaptive 15-point Gauss-Kronrod quadrature.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::{Error, Result};

/// Tolerances and limits of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// Infinite ranges are cut at this many channel means.
    pub truncation_radius: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-14,
            rel_tol: 1e-10,
            max_subdivisions: 2000,
            truncation_radius: 50.0,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(Error::config("abs_tol", "must be finite and > 0"));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(Error::config("rel_tol", "must be finite and > 0"));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::config("max_subdivisions", "must be positive"));
        }
        if !(self.truncation_radius.is_finite() && self.truncation_radius > 0.0) {
            return Err(Error::config("truncation_radius", "must be finite and > 0"));
        }
        // e^{-r} bounds the discarded exponential tail mass
        if -self.truncation_radius >= (self.rel_tol / 10.0).ln() {
            return Err(Error::config(
                "truncation_radius",
                format!(
                    "tail mass e^-{} is not below rel_tol/10 = {:e}",
                    self.truncation_radius,
                    self.rel_tol / 10.0
                ),
            ));
        }
        Ok(())
    }

    /// Same spec with tighter tolerances, for integrals nested inside another.
    pub fn nested(&self) -> Self {
        Self {
            abs_tol: self.abs_tol / 10.0,
            rel_tol: self.rel_tol / 10.0,
            ..*self
        }
    }
}

/// Value and error estimate of an integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    /// Error level that subdivision cannot reduce.
    roundoff: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<F>(f: &mut F, a: f64, b: f64) -> Result<Segment>
where
    F: FnMut(f64) -> Result<f64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center)?;
    let mut res_g = fc * WG[3];
    let mut res_k = fc * WGK[7];
    let mut res_abs = fc.abs() * WGK[7];
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx)?;
        let f2 = f(center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let scale = half.abs();
    let value = res_k * half;
    res_abs *= scale;
    res_asc *= scale;
    let mut error = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    let roundoff = 50.0 * f64::EPSILON * res_abs;
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(roundoff);
    }
    if !value.is_finite() {
        return Err(Error::NonConvergence {
            achieved: f64::INFINITY,
            requested: 0.0,
        });
    }
    Ok(Segment {
        a,
        b,
        value,
        error,
        roundoff,
    })
}

/// Integrates a fallible integrand over the panels delimited by `points`.
///
/// Subdivision continues until the summed error estimate falls below
/// `max(abs_tol, rel_tol * |value|)`; an exhausted subdivision budget is a
/// [`Error::NonConvergence`].
pub fn integrate_fallible<F>(mut f: F, points: &[f64], spec: &QuadratureSpec) -> Result<Integral>
where
    F: FnMut(f64) -> Result<f64>,
{
    if points.len() < 2 {
        return Err(Error::config("points", "need at least two breakpoints"));
    }
    let mut heap = BinaryHeap::new();
    for w in points.windows(2) {
        if w[1] > w[0] {
            heap.push(kronrod(&mut f, w[0], w[1])?);
        }
    }
    let totals = |heap: &BinaryHeap<Segment>| {
        let mut v = crate::numeric::CompensatedSum::new();
        let mut e = 0.0;
        let mut r = 0.0;
        for s in heap.iter() {
            v.add(s.value);
            e += s.error;
            r += s.roundoff;
        }
        (v.value(), e, r)
    };
    let (mut value, mut error, mut roundoff) = totals(&heap);
    let mut splits = 0;
    loop {
        let target = spec.abs_tol.max(spec.rel_tol * value.abs());
        // every segment at its rounding floor: nothing left to refine
        if error <= target || error <= roundoff {
            return Ok(Integral { value, error });
        }
        if splits >= spec.max_subdivisions {
            return Err(Error::NonConvergence {
                achieved: error,
                requested: target,
            });
        }
        let Some(worst) = heap.pop() else {
            return Ok(Integral { value, error });
        };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval exhausted at machine resolution
            return Err(Error::NonConvergence {
                achieved: error,
                requested: target,
            });
        }
        heap.push(kronrod(&mut f, worst.a, mid)?);
        heap.push(kronrod(&mut f, mid, worst.b)?);
        splits += 1;
        (value, error, roundoff) = totals(&heap);
    }
}

/// Infallible-integrand convenience wrapper around [`integrate_fallible`].
pub fn integrate<F>(mut f: F, points: &[f64], spec: &QuadratureSpec) -> Result<Integral>
where
    F: FnMut(f64) -> f64,
{
    integrate_fallible(|x| Ok(f(x)), points, spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate(
            |x| x * x * x - 2.0 * x,
            &[0.0, 2.0],
            &QuadratureSpec::default(),
        )
        .unwrap();
        assert!((r.value - 0.0).abs() < 1e-14);
    }

    #[test]
    fn exponential_tail() {
        let spec = QuadratureSpec::default();
        let r = integrate(
            |x| (-x).exp(),
            &[0.0, 1.0, 10.0, spec.truncation_radius],
            &spec,
        )
        .unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
        assert!(r.error < 1e-9);
    }

    #[test]
    fn endpoint_singularity_converges() {
        let spec = QuadratureSpec::default();
        let r = integrate(|x| 1.0 / x.sqrt(), &[0.0, 1.0], &spec).unwrap();
        assert!((r.value - 2.0).abs() < 1e-9);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let spec = QuadratureSpec {
            max_subdivisions: 3,
            ..Default::default()
        };
        let r = integrate(|x| (50.0 * x).sin().abs(), &[0.0, 10.0], &spec);
        assert!(matches!(r, Err(Error::NonConvergence { .. })));
    }

    #[test]
    fn spec_validation() {
        assert!(QuadratureSpec::default().validate().is_ok());
        let short = QuadratureSpec {
            truncation_radius: 5.0,
            ..Default::default()
        };
        assert!(short.validate().is_err());
        let bad = QuadratureSpec {
            rel_tol: 0.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn integrand_errors_propagate() {
        let r = integrate_fallible(
            |x| {
                if x > 0.5 {
                    Err(Error::InvalidGrid("x".into()))
                } else {
                    Ok(x)
                }
            },
            &[0.0, 1.0],
            &QuadratureSpec::default(),
        );
        assert!(matches!(r, Err(Error::InvalidGrid(_))));
    }
}
