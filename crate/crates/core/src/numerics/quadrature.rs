use serde::{Deserialize, Serialize};

use super::{Complex, PathSpec};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_subdivisions: 2000,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::OutOfRange(
                "quadrature tolerances must be > 0".into(),
            ));
        }
        if self.max_subdivisions < 1 {
            return Err(Error::OutOfRange("max_subdivisions must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: Complex,
    pub error_estimate: f64,
    pub evaluations: usize,
}

// Kronrod 21-point abscissae on [-1, 1] (positive half, descending). Odd indices are
// the 10-point Gauss abscissae.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

#[derive(Debug, Clone, Copy)]
struct Interval {
    segment: usize,
    a: f64,
    b: f64,
    value: Complex,
    error: f64,
    magnitude: f64,
}

/// Gauss–Kronrod 10/21 on the parameter interval `[a, b]` of one segment.
fn gk21<F>(g: &F, a: f64, b: f64) -> (Complex, f64, f64)
where
    F: Fn(f64) -> Complex,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = g(center);
    let mut kronrod = f_center * WGK[10];
    let mut gauss = Complex::new(0.0, 0.0);
    let mut magnitude = f_center.norm() * WGK[10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = g(center - dx);
        let f2 = g(center + dx);
        kronrod += (f1 + f2) * WGK[j];
        magnitude += (f1.norm() + f2.norm()) * WGK[j];
        if j % 2 == 1 {
            gauss += (f1 + f2) * WG[j / 2];
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).norm();
    (value, error, magnitude * half.abs())
}

/// Adaptive integral of `f(z) dz` along `path`.
///
/// All segments share one pool of subintervals; the interval with the largest local
/// error is bisected until the summed error drops below
/// `max(abs_tol, rel_tol·|value|)`. Non-finite integrand values are replaced by 0 on
/// segments that touch a removable endpoint (the integrand underflows there).
pub fn integrate_path<F>(f: F, path: &PathSpec, cfg: &QuadratureConfig) -> Result<QuadratureResult>
where
    F: Fn(Complex) -> Complex,
{
    cfg.validate()?;
    let segments = path.segments();
    if segments.is_empty() {
        return Ok(QuadratureResult {
            value: Complex::new(0.0, 0.0),
            error_estimate: 0.0,
            evaluations: 0,
        });
    }
    let last = segments.len() - 1;
    let mut evaluations = 0usize;
    let mut non_finite = false;

    let mut eval_interval = |segment: usize, a: f64, b: f64| -> Interval {
        let seg = segments[segment];
        let removable =
            (segment == 0 && path.removable_start()) || (segment == last && path.removable_end());
        let g = |t: f64| {
            let v = f(seg.point(t)) * seg.derivative(t);
            if v.re.is_finite() && v.im.is_finite() {
                v
            } else if removable {
                Complex::new(0.0, 0.0)
            } else {
                Complex::new(f64::NAN, f64::NAN)
            }
        };
        let (value, error, magnitude) = gk21(&g, a, b);
        evaluations += 21;
        Interval {
            segment,
            a,
            b,
            value,
            error,
            magnitude,
        }
    };

    let mut pool: Vec<Interval> = (0..segments.len())
        .map(|s| eval_interval(s, 0.0, 1.0))
        .collect();

    loop {
        let value: Complex = pool.iter().map(|iv| iv.value).sum();
        let error: f64 = pool.iter().map(|iv| iv.error).sum();
        let magnitude: f64 = pool.iter().map(|iv| iv.magnitude).sum();
        if !(value.re.is_finite() && value.im.is_finite() && error.is_finite()) {
            non_finite = true;
        }
        if non_finite {
            return Err(Error::NonFinite);
        }
        let tolerance = cfg.abs_tol.max(cfg.rel_tol * value.norm());
        // below this level bisection only reshuffles rounding error
        let roundoff = 50.0 * f64::EPSILON * magnitude;
        if error <= tolerance || error <= roundoff {
            return Ok(QuadratureResult {
                value,
                error_estimate: error,
                evaluations,
            });
        }
        if pool.len() >= cfg.max_subdivisions {
            return Err(Error::NonConvergence {
                error_estimate: error,
                tolerance,
            });
        }
        // ties resolve to the lowest index, so the refinement order is deterministic
        let (worst, _) =
            pool.iter()
                .enumerate()
                .fold((0usize, f64::NEG_INFINITY), |acc, (i, iv)| {
                    if iv.error > acc.1 {
                        (i, iv.error)
                    } else {
                        acc
                    }
                });
        let iv = pool[worst];
        let mid = 0.5 * (iv.a + iv.b);
        if mid <= iv.a || mid >= iv.b {
            return Err(Error::NonConvergence {
                error_estimate: error,
                tolerance,
            });
        }
        pool[worst] = eval_interval(iv.segment, iv.a, mid);
        pool.push(eval_interval(iv.segment, mid, iv.b));
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::numerics::Segment;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn upper_semicircle_of_inverse() {
        let path = PathSpec::new(vec![Segment::Arc {
            center: c(0.0, 0.0),
            radius: 1.0,
            start_angle: 0.0,
            end_angle: PI,
        }])
        .unwrap();
        let r = integrate_path(|z| 1.0 / z, &path, &QuadratureConfig::default()).unwrap();
        assert!((r.value - c(0.0, PI)).norm() < 1e-13, "{}", r.value);
    }

    #[test]
    fn polynomial_on_unit_segment() {
        let path = PathSpec::with_removable(
            vec![Segment::Line {
                from: c(0.0, 0.0),
                to: c(1.0, 0.0),
            }],
            true,
            false,
        )
        .unwrap();
        let r = integrate_path(|z| z, &path, &QuadratureConfig::default()).unwrap();
        assert!((r.value - c(0.5, 0.0)).norm() < 1e-15);
        assert!(r.error_estimate >= 0.0);
    }

    #[test]
    fn empty_path_is_zero() {
        let r = integrate_path(|z| z, &PathSpec::empty(), &QuadratureConfig::default()).unwrap();
        assert_eq!(r.value, c(0.0, 0.0));
    }

    #[test]
    fn non_convergence_is_reported() {
        let path = PathSpec::new(vec![Segment::Line {
            from: c(1e-9, 1.0),
            to: c(1e-9, -1.0),
        }]);
        // path passes 1e-9 from the pole of 1/z², hopeless with 2 subdivisions
        let cfg = QuadratureConfig {
            max_subdivisions: 2,
            ..Default::default()
        };
        let r = integrate_path(|z| 1.0 / (z * z), &path.unwrap(), &cfg);
        assert!(matches!(r, Err(Error::NonConvergence { .. })));
    }

    #[test]
    fn invalid_config_rejected() {
        let path = PathSpec::new(vec![Segment::Line {
            from: c(1.0, 0.0),
            to: c(2.0, 0.0),
        }])
        .unwrap();
        let cfg = QuadratureConfig {
            abs_tol: 0.0,
            ..Default::default()
        };
        assert!(integrate_path(|z| z, &path, &cfg).is_err());
    }

    #[test]
    fn deterministic() {
        let path = PathSpec::new(vec![Segment::Arc {
            center: c(0.0, 0.0),
            radius: 0.3,
            start_angle: 0.1,
            end_angle: 2.9,
        }])
        .unwrap();
        let f = |z: Complex| (1.0 / (2.0 * z * z)).exp() / z;
        let a = integrate_path(f, &path, &QuadratureConfig::default()).unwrap();
        let b = integrate_path(f, &path, &QuadratureConfig::default()).unwrap();
        assert_eq!(a.value, b.value);
        assert_eq!(a.evaluations, b.evaluations);
    }
}
