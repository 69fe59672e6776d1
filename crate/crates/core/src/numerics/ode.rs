use std::f64::consts::PI;

use super::{Complex, PathSpec, QuadratureConfig, Segment};
use crate::foliation::FoliationParameter;
use crate::{Error, Result};

// Dormand–Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
// fifth-order weights minus embedded fourth-order weights
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

const MAX_STEPS: usize = 2_000_000;

/// Continue the leaf through `(x0, y0)` of the foliation `x³y′ = y − x²/(iπ) − αx³/(i√(2π))`
/// along `path`, returning `y` over the path's end point.
pub fn ode_transport(
    alpha: &FoliationParameter,
    start: (Complex, Complex),
    path: &PathSpec,
    cfg: &QuadratureConfig,
) -> Result<Complex> {
    let a = alpha.value();
    let k1 = Complex::new(0.0, -1.0 / PI); // 1/(iπ)
    let k2 = a * Complex::new(0.0, -1.0 / (2.0 * PI).sqrt()); // α/(i√(2π))
    let rhs = move |x: Complex, y: Complex| (y - k1 * x * x - k2 * x * x * x) / (x * x * x);
    ode_transport_with(rhs, start, path, cfg)
}

/// Integrate `dy/dx = rhs(x, y)` along `path` with an adaptive Dormand–Prince pair.
pub fn ode_transport_with<F>(
    rhs: F,
    start: (Complex, Complex),
    path: &PathSpec,
    cfg: &QuadratureConfig,
) -> Result<Complex>
where
    F: Fn(Complex, Complex) -> Complex,
{
    cfg.validate()?;
    let (x0, mut y) = start;
    let Some(p0) = path.start() else {
        return Ok(y);
    };
    if (p0 - x0).norm() > 1e-12 * (1.0 + x0.norm()) {
        return Err(Error::InvalidPath(format!(
            "path starts at {p0}, leaf point is over {x0}"
        )));
    }
    for (index, seg) in path.segments().iter().enumerate() {
        y = transport_segment(&rhs, seg, y, cfg).map_err(|e| match e {
            Error::StepFailure { at } => Error::StepFailure {
                at: index as f64 + at,
            },
            other => other,
        })?;
    }
    Ok(y)
}

fn transport_segment<F>(
    rhs: &F,
    seg: &Segment,
    y0: Complex,
    cfg: &QuadratureConfig,
) -> Result<Complex>
where
    F: Fn(Complex, Complex) -> Complex,
{
    if seg.length() == 0.0 {
        return Ok(y0);
    }
    let g = |t: f64, y: Complex| rhs(seg.point(t), y) * seg.derivative(t);
    let mut t = 0.0_f64;
    let mut y = y0;
    let mut h = 1e-3_f64;
    let mut k = [Complex::new(0.0, 0.0); 7];
    k[0] = g(t, y);
    for _ in 0..MAX_STEPS {
        if t >= 1.0 {
            return Ok(y);
        }
        h = h.min(1.0 - t);
        for s in 1..7 {
            let mut acc = y;
            for (j, kj) in k.iter().enumerate().take(s) {
                acc += *kj * (h * A[s][j]);
            }
            k[s] = g(t + C[s] * h, acc);
        }
        let mut y_new = y;
        for (j, kj) in k.iter().enumerate().take(6) {
            y_new += *kj * (h * A[6][j]);
        }
        let mut err = Complex::new(0.0, 0.0);
        for (j, kj) in k.iter().enumerate() {
            err += *kj * (h * E[j]);
        }
        let scale = cfg.abs_tol + cfg.rel_tol * y.norm().max(y_new.norm());
        let ratio = err.norm() / scale;
        if !ratio.is_finite() {
            h *= 0.2;
        } else if ratio <= 1.0 {
            t = if 1.0 - t <= h { 1.0 } else { t + h };
            y = y_new;
            // FSAL: the last stage is f at the accepted point
            k[0] = k[6];
            let factor = if ratio == 0.0 {
                5.0
            } else {
                (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0)
            };
            h *= factor;
        } else {
            h *= (0.9 * ratio.powf(-0.2)).clamp(0.1, 1.0);
        }
        if h < 1e-14 {
            return Err(Error::StepFailure { at: t });
        }
    }
    Err(Error::StepFailure { at: t })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn empty_path_is_identity() {
        let alpha = FoliationParameter::new(c(0.0, 0.0)).unwrap();
        let y = ode_transport(
            &alpha,
            (c(0.3, 0.2), c(1.5, -2.0)),
            &PathSpec::empty(),
            &QuadratureConfig::default(),
        )
        .unwrap();
        assert_eq!(y, c(1.5, -2.0));
    }

    #[test]
    fn exponential_along_line() {
        // y' = y on [0, 1]
        let path = PathSpec::with_removable(
            vec![Segment::Line {
                from: c(0.0, 0.0),
                to: c(1.0, 0.0),
            }],
            true,
            false,
        )
        .unwrap();
        let y = ode_transport_with(
            |_, y| y,
            (c(0.0, 0.0), c(1.0, 0.0)),
            &path,
            &QuadratureConfig::default(),
        )
        .unwrap();
        assert!((y - c(std::f64::consts::E, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn mismatched_start_rejected() {
        let path = PathSpec::new(vec![Segment::Line {
            from: c(1.0, 0.0),
            to: c(2.0, 0.0),
        }])
        .unwrap();
        let r = ode_transport_with(
            |_, y| y,
            (c(0.5, 0.0), c(1.0, 0.0)),
            &path,
            &QuadratureConfig::default(),
        );
        assert!(matches!(r, Err(Error::InvalidPath(_))));
    }

    #[test]
    fn grazing_singularity_fails() {
        // y' = y/x³ next to x = 0 with a tight tolerance blows up the step control
        let path = PathSpec::new(vec![Segment::Line {
            from: c(1e-3, 1.0),
            to: c(1e-3, -1.0),
        }])
        .unwrap();
        let cfg = QuadratureConfig {
            abs_tol: 1e-14,
            rel_tol: 1e-14,
            max_subdivisions: 1,
        };
        let r = ode_transport_with(
            |x, y| y / (x * x * x),
            (c(1e-3, 1.0), c(1.0, 0.0)),
            &path,
            &cfg,
        );
        assert!(r.is_err());
    }
}
