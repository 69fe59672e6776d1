use super::{base_path, inv_i_sqrt_2pi, sector_contains, FoliationParameter, SectorTag, INV_I_PI};
use crate::numerics::{integrate_path, Complex, PathSpec, QuadratureConfig, Segment};
use crate::{Error, Result};

/// Exponents below this are treated as an underflowed `exp`.
const UNDERFLOW_EXPONENT: f64 = -700.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeafConfig {
    pub r_min: f64,
    pub r_max: f64,
    /// Largest `Re(1/(2x²))` allowed in a direct `exp`.
    pub exponent_cap: f64,
    /// Truncation level of the ray integral at infinity.
    pub ray_cutoff: f64,
    pub quad: QuadratureConfig,
}

impl Default for LeafConfig {
    fn default() -> Self {
        LeafConfig {
            r_min: 0.2,
            r_max: 1.5,
            exponent_cap: 40.0,
            ray_cutoff: 40.0,
            quad: QuadratureConfig::default(),
        }
    }
}

/// Evaluates and inverts the sectorial general solutions `y±_{α,c}`.
///
/// Everything goes through the separatrix offset
/// `S(x) = −y±_{α,0}(x) = ∫_{±0i}^x h(z)·exp(1/(2z²) − 1/(2x²)) dz/z`,
/// with `h(z) = 1/(iπ) + αz/(i√(2π))`, so that
/// `y = c·exp(−1/(2x²)) − S(x)` and `c = (y + S(x))·exp(1/(2x²))`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LeafSolver {
    pub config: LeafConfig,
}

impl LeafSolver {
    pub fn new(config: LeafConfig) -> Self {
        LeafSolver { config }
    }

    fn check_annulus(&self, x: Complex) -> Result<()> {
        let radius = x.norm();
        let LeafConfig { r_min, r_max, .. } = self.config;
        if radius < r_min || radius > r_max {
            return Err(Error::OutsideAnnulus {
                radius,
                r_min,
                r_max,
            });
        }
        Ok(())
    }

    fn check_sector(tag: SectorTag, x: Complex) -> Result<()> {
        if sector_contains(tag, x)? {
            Ok(())
        } else {
            Err(Error::OutsideSector)
        }
    }

    /// `exp(1/(2x²))`, refusing exponents above the cap.
    pub fn stokes_factor(&self, x: Complex) -> Result<Complex> {
        let e = 1.0 / (2.0 * x * x);
        if e.re > self.config.exponent_cap {
            return Err(Error::Overflow {
                exponent: e.re,
                cap: self.config.exponent_cap,
            });
        }
        Ok(e.exp())
    }

    /// `exp(−1/(2x²))`, refusing exponents above the cap.
    pub fn decay_factor(&self, x: Complex) -> Result<Complex> {
        let e = -1.0 / (2.0 * x * x);
        if e.re > self.config.exponent_cap {
            return Err(Error::Overflow {
                exponent: e.re,
                cap: self.config.exponent_cap,
            });
        }
        Ok(e.exp())
    }

    /// `S(x)` by quadrature along the canonical sector path (annulus only).
    pub fn offset_by_path(
        &self,
        alpha: &FoliationParameter,
        tag: SectorTag,
        x: Complex,
    ) -> Result<Complex> {
        self.check_annulus(x)?;
        let path = base_path(tag, x)?;
        let k2 = alpha.value() * inv_i_sqrt_2pi();
        let shift = 1.0 / (2.0 * x * x);
        let integrand = |z: Complex| {
            let exponent = 1.0 / (2.0 * z * z) - shift;
            if exponent.re < UNDERFLOW_EXPONENT {
                return Complex::new(0.0, 0.0);
            }
            (INV_I_PI + k2 * z) * exponent.exp() / z
        };
        Ok(integrate_path(integrand, &path, &self.config.quad)?.value)
    }

    /// `S(1/s)` through the substitution `z = 1/w`:
    /// `S(1/s) = ∫_s^{∓i∞} (1/(iπ) + α/(i√(2π)·z))·exp((z² − s²)/2) dz/z`,
    /// integrated along the vertical ray from `s`, where `∓` is `−` on `V⁺`.
    /// Valid for `0 < |s| ≤ 1`.
    pub fn offset_by_ray(
        &self,
        alpha: &FoliationParameter,
        tag: SectorTag,
        s: Complex,
    ) -> Result<Complex> {
        if s.norm() == 0.0 {
            return Err(Error::ZeroInput);
        }
        if s.norm() > 1.0 {
            return Err(Error::OutOfRange(format!(
                "ray representation needs |s| <= 1, got {}",
                s.norm()
            )));
        }
        Self::check_sector(tag, 1.0 / s)?;
        // ray direction: −i on V⁺, +i on V⁻
        let direction = Complex::new(0.0, -tag.sign());
        // Re((z² − s²)/2) = σ·t·Im(s) − t²/2 with σ = −sign; stop below −cutoff
        let b = (tag.sign() * s.im).abs();
        let length = b + (b * b + 2.0 * self.config.ray_cutoff).sqrt();
        let path = PathSpec::new(vec![Segment::Line {
            from: s,
            to: s + direction * length,
        }])?;
        let k2 = alpha.value() * inv_i_sqrt_2pi();
        let s2 = s * s;
        let integrand = |z: Complex| {
            let exponent = 0.5 * (z * z - s2);
            if exponent.re < UNDERFLOW_EXPONENT {
                return Complex::new(0.0, 0.0);
            }
            (INV_I_PI + k2 / z) * exponent.exp() / z
        };
        Ok(integrate_path(integrand, &path, &self.config.quad)?.value)
    }

    /// `S(x)` for any `|x| ≥ r_min`: by path quadrature inside the annulus, by the
    /// ray integral beyond `r_max`.
    pub fn offset(
        &self,
        alpha: &FoliationParameter,
        tag: SectorTag,
        x: Complex,
    ) -> Result<Complex> {
        let radius = x.norm();
        if radius > self.config.r_max {
            Self::check_sector(tag, x)?;
            return self.offset_by_ray(alpha, tag, 1.0 / x);
        }
        self.offset_by_path(alpha, tag, x)
    }

    /// `y^tag_{α,c}(x)`.
    pub fn value(
        &self,
        alpha: &FoliationParameter,
        tag: SectorTag,
        c: Complex,
        x: Complex,
    ) -> Result<Complex> {
        self.check_annulus(x)?;
        Self::check_sector(tag, x)?;
        let s = self.offset_by_path(alpha, tag, x)?;
        crate::numerics::ensure_finite(c * self.decay_factor(x)? - s)
    }

    /// The leaf coordinate `c^tag(x, y)` with `y^tag_{α,c}(x) = y`.
    pub fn invert(
        &self,
        alpha: &FoliationParameter,
        tag: SectorTag,
        x: Complex,
        y: Complex,
    ) -> Result<Complex> {
        self.check_annulus(x)?;
        Self::check_sector(tag, x)?;
        let factor = self.stokes_factor(x)?;
        let s = self.offset_by_path(alpha, tag, x)?;
        crate::numerics::ensure_finite((y + s) * factor)
    }
}

/// [`LeafSolver::value`] with the default configuration.
pub fn leaf_value(
    alpha: &FoliationParameter,
    tag: SectorTag,
    c: Complex,
    x: Complex,
) -> Result<Complex> {
    LeafSolver::default().value(alpha, tag, c, x)
}

/// [`LeafSolver::invert`] with the default configuration.
pub fn leaf_invert(
    alpha: &FoliationParameter,
    tag: SectorTag,
    x: Complex,
    y: Complex,
) -> Result<Complex> {
    LeafSolver::default().invert(alpha, tag, x, y)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn alpha(re: f64, im: f64) -> FoliationParameter {
        FoliationParameter::new(c(re, im)).unwrap()
    }

    #[test]
    fn unit_leaf_shift_is_e_squared() {
        for a in [alpha(0.0, 0.0), alpha(0.05, 0.02)] {
            let x = c(0.0, 0.5);
            let d = leaf_value(&a, SectorTag::Plus, c(1.0, 0.0), x).unwrap()
                - leaf_value(&a, SectorTag::Plus, c(0.0, 0.0), x).unwrap();
            assert!((d - c(7.389_056_098_930_65, 0.0)).norm() < 1e-12, "{d}");
        }
    }

    #[test]
    fn round_trip() {
        let a = alpha(0.05, 0.0);
        let x = c(0.0, 0.9);
        let cc = c(1.0, 1.0);
        let y = leaf_value(&a, SectorTag::Plus, cc, x).unwrap();
        assert!((leaf_invert(&a, SectorTag::Plus, x, y).unwrap() - cc).norm() < 1e-9);
    }

    #[test]
    fn saddle_side_inversion_bound() {
        let a = alpha(0.05, 0.0);
        let x = Complex::from_polar(0.3, 0.9 * PI);
        let y = c(0.2, 0.0);
        let solver = LeafSolver::default();
        let cc = solver.invert(&a, SectorTag::Plus, x, y).unwrap();
        let e = solver.stokes_factor(x).unwrap();
        let i_alpha = solver.offset_by_path(&a, SectorTag::Plus, x).unwrap() * e;
        assert!(cc.norm() <= y.norm() * e.norm() + i_alpha.norm() + 1e-12);
        assert!((solver.value(&a, SectorTag::Plus, cc, x).unwrap() - y).norm() < 1e-10);
    }

    #[test]
    fn annulus_and_sector_errors() {
        let a = alpha(0.0, 0.0);
        assert!(matches!(
            leaf_value(&a, SectorTag::Plus, c(0.0, 0.0), c(0.0, 0.1)),
            Err(Error::OutsideAnnulus { .. })
        ));
        assert!(matches!(
            leaf_value(&a, SectorTag::Plus, c(0.0, 0.0), c(0.0, 2.0)),
            Err(Error::OutsideAnnulus { .. })
        ));
        assert_eq!(
            leaf_value(&a, SectorTag::Plus, c(0.0, 0.0), c(0.0, -0.5)),
            Err(Error::OutsideSector)
        );
    }

    #[test]
    fn exponent_cap_triggers_overflow() {
        let solver = LeafSolver::new(LeafConfig {
            exponent_cap: 5.0,
            ..Default::default()
        });
        // Re(1/(2x²)) = 12.5 at x = 0.2
        let r = solver.invert(&alpha(0.0, 0.0), SectorTag::Plus, c(0.2, 0.0), c(1.0, 0.0));
        assert!(matches!(r, Err(Error::Overflow { .. })));
    }

    #[test]
    fn ray_matches_path_at_moderate_radius() {
        let solver = LeafSolver::default();
        for (a, tag, x) in [
            (alpha(0.0, 0.0), SectorTag::Plus, c(1.2, 0.0)),
            (
                alpha(0.05, 0.02),
                SectorTag::Plus,
                Complex::from_polar(1.2, 2.0),
            ),
            (
                alpha(0.05, 0.02),
                SectorTag::Minus,
                Complex::from_polar(1.3, -0.4),
            ),
        ] {
            let by_path = solver.offset_by_path(&a, tag, x).unwrap();
            let by_ray = solver.offset_by_ray(&a, tag, 1.0 / x).unwrap();
            assert!((by_path - by_ray).norm() < 1e-9, "{by_path} vs {by_ray}");
        }
    }
}
