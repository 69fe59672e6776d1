//! The ambient homeomorphism `φ = (X, Y)` conjugating `F_α` to `F_0` on `ℂ²`.
//!
//! On each sector the leaf coordinate `c` of `(x, y)` is pushed through `ψ±`, and the
//! base variable is bent only near the four directions `cos(2 arg x) = 0`:
//!
//! ```text
//! f±(x, c) = χ₁(arg x)·c/ψ±(c) + χ₂(arg x)
//! f̂±(x, c) = f±(x, c)·ξ₁(|x|) + ξ₂(|x|)              (= 1 for |x| ≥ 1)
//! X± = x·(1 − 2x²·log f̂±)^{−1/2}
//! Y± = y_{0,0}(X±) + f̂±·ψ±(c)·exp(−1/(2x²))
//! ```
//!
//! Since `exp(−1/(2X²)) = f̂·exp(−1/(2x²))`, the image lies on the leaf `ψ±(c)` of `F_0`.

use std::f64::consts::PI;

use crate::foliation::{angle_between, FoliationParameter, LeafConfig, LeafSolver, SectorTag};
use crate::numerics::{ensure_finite, Complex, QuadratureConfig};
use crate::transverse::TransverseMap;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffConfig {
    /// `χ₂ = 1` wherever `|cos 2θ| > delta`.
    pub delta: f64,
    /// `ξ₁ = 1` on `[0, r]`, falling linearly to 0 at 1.
    pub r: f64,
}

impl Default for CutoffConfig {
    fn default() -> Self {
        CutoffConfig { delta: 0.2, r: 0.5 }
    }
}

impl CutoffConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::OutOfRange(format!(
                "delta must lie in (0, 1), got {}",
                self.delta
            )));
        }
        if !(self.r > 0.0 && self.r < 1.0) {
            return Err(Error::OutOfRange(format!(
                "r must lie in (0, 1), got {}",
                self.r
            )));
        }
        Ok(())
    }

    /// Half-width of the support of `χ₁` around each `π/4 + kπ/2`.
    pub fn chi_half_width(&self) -> f64 {
        self.delta.asin() / 2.0
    }
}

/// Angular partition of unity `(χ₁, χ₂)`: `χ₁` peaks at `π/4 + kπ/2` and is supported
/// where `|cos 2θ| ≤ δ`.
pub fn chi_pair(cfg: &CutoffConfig, theta: f64) -> (f64, f64) {
    let quarter = PI / 2.0;
    let m = (theta - PI / 4.0).rem_euclid(quarter);
    let d = m.min(quarter - m);
    let chi1 = (1.0 - d / cfg.chi_half_width()).max(0.0);
    (chi1, 1.0 - chi1)
}

/// Radial partition of unity `(ξ₁, ξ₂)` with breakpoints `{0, r, 1}`.
pub fn xi_pair(cfg: &CutoffConfig, radius: f64) -> (f64, f64) {
    let xi1 = if radius <= cfg.r {
        1.0
    } else if radius >= 1.0 {
        0.0
    } else {
        (1.0 - radius) / (1.0 - cfg.r)
    };
    (xi1, 1.0 - xi1)
}

/// `V⁺` when `arg x` is at least as close to `π/2` as to `−π/2`, else `V⁻`.
pub fn sector_select(x: Complex) -> Result<SectorTag> {
    if x.norm() == 0.0 {
        return Err(Error::ZeroInput);
    }
    let theta = x.arg();
    let to_plus = angle_between(PI / 2.0, theta).abs();
    let to_minus = angle_between(-PI / 2.0, theta).abs();
    Ok(if to_plus <= to_minus {
        SectorTag::Plus
    } else {
        SectorTag::Minus
    })
}

/// Intermediate quantities of one sectorial evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorEvaluation {
    pub tag: SectorTag,
    /// Leaf coordinate `c^tag(x, y)` for `F_α`.
    pub c: Complex,
    pub f_hat: Complex,
    pub x_image: Complex,
    pub y_image: Complex,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConjugacyMap {
    alpha: FoliationParameter,
    plus: TransverseMap,
    minus: TransverseMap,
    cutoffs: CutoffConfig,
    leaves: LeafSolver,
}

impl ConjugacyMap {
    pub fn new(alpha: FoliationParameter) -> Result<Self> {
        Self::with_config(alpha, CutoffConfig::default(), LeafConfig::default())
    }

    pub fn with_config(
        alpha: FoliationParameter,
        cutoffs: CutoffConfig,
        leaves: LeafConfig,
    ) -> Result<Self> {
        alpha.check_conjugacy_regime()?;
        cutoffs.validate()?;
        leaves.quad.validate()?;
        Ok(ConjugacyMap {
            alpha,
            plus: TransverseMap::new(alpha.value(), SectorTag::Plus)?,
            minus: TransverseMap::new(alpha.value(), SectorTag::Minus)?,
            cutoffs,
            leaves: LeafSolver::new(leaves),
        })
    }

    pub fn with_quadrature(alpha: FoliationParameter, quad: QuadratureConfig) -> Result<Self> {
        Self::with_config(
            alpha,
            CutoffConfig::default(),
            LeafConfig {
                quad,
                ..LeafConfig::default()
            },
        )
    }

    pub fn alpha(&self) -> &FoliationParameter {
        &self.alpha
    }

    pub fn cutoffs(&self) -> &CutoffConfig {
        &self.cutoffs
    }

    pub fn leaves(&self) -> &LeafSolver {
        &self.leaves
    }

    pub fn transverse(&self, tag: SectorTag) -> &TransverseMap {
        match tag {
            SectorTag::Plus => &self.plus,
            SectorTag::Minus => &self.minus,
        }
    }

    /// `f^tag(x, c) − 1 = −χ₁(arg x)·(ψ(c) − c)/ψ(c)`; exactly 0 where `ψ(c) = c`.
    fn f_sector_minus_one(&self, tag: SectorTag, x: Complex, c: Complex) -> Result<Complex> {
        if x.norm() == 0.0 {
            return Err(Error::ZeroInput);
        }
        let (chi1, _) = chi_pair(&self.cutoffs, x.arg());
        let psi = self.transverse(tag);
        let displacement = psi.displacement(c);
        if chi1 == 0.0 || displacement == Complex::new(0.0, 0.0) {
            return Ok(Complex::new(0.0, 0.0));
        }
        Ok(-(displacement / psi.apply(c)) * chi1)
    }

    pub fn f_sector(&self, tag: SectorTag, x: Complex, c: Complex) -> Result<Complex> {
        Ok(1.0 + self.f_sector_minus_one(tag, x, c)?)
    }

    fn f_hat_minus_one(&self, tag: SectorTag, x: Complex, c: Complex) -> Result<Complex> {
        let (xi1, _) = xi_pair(&self.cutoffs, x.norm());
        if xi1 == 0.0 {
            if x.norm() == 0.0 {
                return Err(Error::ZeroInput);
            }
            return Ok(Complex::new(0.0, 0.0));
        }
        Ok(self.f_sector_minus_one(tag, x, c)? * xi1)
    }

    pub fn f_hat(&self, tag: SectorTag, x: Complex, c: Complex) -> Result<Complex> {
        Ok(1.0 + self.f_hat_minus_one(tag, x, c)?)
    }

    /// `X = x·(1 − 2x²·log f̂)^{−1/2}` on principal branches.
    pub fn x_map(&self, tag: SectorTag, x: Complex, c: Complex) -> Result<Complex> {
        let w = self.f_hat_minus_one(tag, x, c)?;
        if w == Complex::new(0.0, 0.0) {
            return Ok(x);
        }
        let log_f = (1.0 + w).ln();
        let radicand = 1.0 - 2.0 * x * x * log_f;
        if radicand.re <= 0.0 {
            return Err(Error::BranchViolation {
                re: radicand.re,
                im: radicand.im,
            });
        }
        ensure_finite(x / radicand.sqrt())
    }

    /// `φ^tag(x, y)` together with the intermediate data.
    ///
    /// `Y` is assembled as
    /// `y + [y_{0,0}(X) − y_{α,0}(x)] + (f̂ − 1)·(y − y_{α,0}(x)) + f̂·(ψ(c) − c)·exp(−1/(2x²))`,
    /// which equals `y_{0,0}(X) + f̂·ψ(c)·exp(−1/(2x²))` and is the identity at `α = 0`.
    pub fn evaluate_in_sector(
        &self,
        tag: SectorTag,
        x: Complex,
        y: Complex,
    ) -> Result<SectorEvaluation> {
        let radius = x.norm();
        if radius == 0.0 {
            return Err(Error::ZeroInput);
        }
        let r_min = self.leaves.config.r_min;
        if radius < r_min {
            return Err(Error::AnnulusGap { radius, r_min });
        }
        if !crate::foliation::sector_contains(tag, x)? {
            return Err(Error::OutsideSector);
        }
        let zero = FoliationParameter::zero();
        let offset_alpha = self.leaves.offset(&self.alpha, tag, x)?;
        // y − y_{α,0}(x) = c·exp(−1/(2x²))
        let on_leaf = y + offset_alpha;
        let c = ensure_finite(on_leaf * self.leaves.stokes_factor(x)?)?;
        let w = self.f_hat_minus_one(tag, x, c)?;
        let f_hat = 1.0 + w;
        let x_image = self.x_map(tag, x, c)?;
        let offset_zero = if x_image == x && self.alpha.value() == Complex::new(0.0, 0.0) {
            offset_alpha
        } else {
            self.leaves.offset(&zero, tag, x_image)?
        };
        let displacement = self.transverse(tag).displacement(c);
        let mut y_image = y + (offset_alpha - offset_zero);
        if w != Complex::new(0.0, 0.0) {
            y_image += w * on_leaf;
        }
        if displacement != Complex::new(0.0, 0.0) {
            y_image += f_hat * displacement * self.leaves.decay_factor(x)?;
        }
        Ok(SectorEvaluation {
            tag,
            c,
            f_hat,
            x_image,
            y_image: ensure_finite(y_image)?,
        })
    }

    /// `Y^tag(x, y)`.
    pub fn y_map(&self, tag: SectorTag, x: Complex, y: Complex) -> Result<Complex> {
        Ok(self.evaluate_in_sector(tag, x, y)?.y_image)
    }

    /// `φ` evaluated with a forced sector.
    pub fn phi_in_sector(
        &self,
        tag: SectorTag,
        x: Complex,
        y: Complex,
    ) -> Result<(Complex, Complex)> {
        if x.norm() == 0.0 {
            return Ok((x, y));
        }
        let e = self.evaluate_in_sector(tag, x, y)?;
        Ok((e.x_image, e.y_image))
    }

    /// `φ(x, y)`: identity on `{x = 0}`, sectorial formula with `sector_select(x)` elsewhere.
    /// Points with `0 < |x| < r_min` are refused with [`Error::AnnulusGap`].
    pub fn phi(&self, x: Complex, y: Complex) -> Result<(Complex, Complex)> {
        if x.norm() == 0.0 {
            return Ok((x, y));
        }
        self.phi_in_sector(sector_select(x)?, x, y)
    }
}
