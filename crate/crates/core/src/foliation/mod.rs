//! The family `F_α` given by `x³y′ = y − x²/(iπ) − αx³/(i√(2π))`.
//!
//! Leaves are parametrised sector by sector. On `V±` the leaf with coordinate `c` is
//! `y±_{α,c}(x) = exp(−1/(2x²))·(c − ∫_{±0i}^x (1/(iπ) + αz/(i√(2π)))·exp(1/(2z²)) dz/z)`.

mod leaf;
mod series;
mod stokes;

use std::f64::consts::PI;

pub use leaf::{leaf_invert, leaf_value, LeafConfig, LeafSolver};
pub use series::{formal_series_coefficients, series_residual};
pub use stokes::{hankel_closed_form, hankel_numeric, stokes_estimate, HalfPlane};

use crate::numerics::{Complex, PathSpec, Segment};
use crate::{Error, Result};

/// `1/(iπ)`, the coefficient of the `x²` source term.
pub(crate) const INV_I_PI: Complex = Complex::new(0.0, -1.0 / PI);

/// `1/(i√(2π))` times `α` gives the coefficient of the `x³` source term.
pub(crate) fn inv_i_sqrt_2pi() -> Complex {
    Complex::new(0.0, -1.0 / (2.0 * PI).sqrt())
}

/// Normalised parameter `α`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FoliationParameter(Complex);

impl FoliationParameter {
    pub fn new(alpha: Complex) -> Result<Self> {
        if alpha.re.is_finite() && alpha.im.is_finite() {
            Ok(FoliationParameter(alpha))
        } else {
            Err(Error::NonFinite)
        }
    }

    pub fn zero() -> Self {
        FoliationParameter(Complex::new(0.0, 0.0))
    }

    pub fn value(&self) -> Complex {
        self.0
    }

    /// The conjugacy map is only built for `|α| < 1/10`.
    pub fn check_conjugacy_regime(&self) -> Result<()> {
        let modulus = self.0.norm();
        if modulus < 0.1 {
            Ok(())
        } else {
            Err(Error::AlphaTooLarge { modulus })
        }
    }
}

/// Map the original equation `x³y′ = y + x² + αx³` to the normalised one:
/// `(y, α) ↦ (−iπ·y, √(2/π)·α)`.
pub fn convert_from_original(
    alpha_orig: Complex,
    y_orig: Option<Complex>,
) -> (Complex, Option<Complex>) {
    let alpha = alpha_orig * (2.0 / PI).sqrt();
    let y = y_orig.map(|y| y * Complex::new(0.0, -PI));
    (alpha, y)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SectorTag {
    Plus,
    Minus,
}

impl SectorTag {
    pub fn sign(self) -> f64 {
        match self {
            SectorTag::Plus => 1.0,
            SectorTag::Minus => -1.0,
        }
    }

    /// Bisecting direction `±π/2` of the sector.
    pub fn center_angle(self) -> f64 {
        self.sign() * PI / 2.0
    }

    pub fn other(self) -> SectorTag {
        match self {
            SectorTag::Plus => SectorTag::Minus,
            SectorTag::Minus => SectorTag::Plus,
        }
    }
}

/// Signed angle in `(−π, π]` from `from` to `to`.
pub(crate) fn angle_between(from: f64, to: f64) -> f64 {
    let d = (to - from + PI).rem_euclid(2.0 * PI) - PI;
    if d == -PI {
        PI
    } else {
        d
    }
}

/// `|arg x ∓ π/2| < 3π/4` with the angular distance taken mod 2π.
pub fn sector_contains(tag: SectorTag, x: Complex) -> Result<bool> {
    if x.norm() == 0.0 {
        return Err(Error::ZeroInput);
    }
    Ok(angle_between(tag.center_angle(), x.arg()).abs() < 0.75 * PI)
}

/// Canonical path from `±0i` to `x`: along the imaginary axis up to `±i|x|`, then
/// along the circle `|z| = |x|` inside the sector. The origin end is removable.
pub fn base_path(tag: SectorTag, x: Complex) -> Result<PathSpec> {
    if !sector_contains(tag, x)? {
        return Err(Error::OutsideSector);
    }
    let radius = x.norm();
    let center = tag.center_angle();
    let corner = Complex::new(0.0, tag.sign() * radius);
    let mut segments = vec![Segment::Line {
        from: Complex::new(0.0, 0.0),
        to: corner,
    }];
    let sweep = angle_between(center, x.arg());
    if sweep != 0.0 {
        segments.push(Segment::Arc {
            center: Complex::new(0.0, 0.0),
            radius,
            start_angle: center,
            end_angle: center + sweep,
        });
    }
    PathSpec::with_removable(segments, true, false)
}

/// Germ `φ_j` of a Martinet–Ramis modulus, stored by its Taylor coefficients
/// (`c¹, c², …`). Empty means identically zero.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FormalGerm(pub Vec<Complex>);

impl FormalGerm {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.norm() == 0.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MartinetRamisModulus {
    pub mu: Complex,
    pub tau0: Complex,
    pub tau1: Complex,
    pub phi0: FormalGerm,
    pub phi1: FormalGerm,
}

impl MartinetRamisModulus {
    /// Equivalence `M ~ M̃`: same `μ`, and `τ_j = λ·τ̃_{j+k}`, `φ_j(c) = φ̃_{j+k}(λc)`
    /// for one `λ ≠ 0` and one shift `k ∈ ℤ/2`.
    ///
    /// Note that `(x, y) ↦ (−x, y)` conjugates `F_α` to `F_{−α}`, which shows up here
    /// as the `k = 1` case.
    pub fn is_equivalent(&self, other: &MartinetRamisModulus, tol: f64) -> bool {
        if (self.mu - other.mu).norm() > tol {
            return false;
        }
        let ours = [(self.tau0, &self.phi0), (self.tau1, &self.phi1)];
        let theirs = [(other.tau0, &other.phi0), (other.tau1, &other.phi1)];
        (0..2).any(|k| {
            let pair = |j: usize| (ours[j], theirs[(j + k) % 2]);
            // λ from the first non-zero τ̃
            let lambda = (0..2).find_map(|j| {
                let ((t, _), (tt, _)) = pair(j);
                (tt.norm() > tol).then(|| t / tt)
            });
            let lambda = match lambda {
                Some(l) if l.norm() > tol => l,
                Some(_) => return false,
                None => Complex::new(1.0, 0.0),
            };
            (0..2).all(|j| {
                let ((t, phi), (tt, phi_t)) = pair(j);
                let germ_ok = phi.0.len().max(phi_t.0.len()) == 0
                    || (0..phi.0.len().max(phi_t.0.len())).all(|n| {
                        let a = phi.0.get(n).copied().unwrap_or_default();
                        let b =
                            phi_t.0.get(n).copied().unwrap_or_default() * lambda.powi(n as i32 + 1);
                        (a - b).norm() <= tol
                    });
                (t - lambda * tt).norm() <= tol && germ_ok
            })
        })
    }
}

/// `(μ, τ₀, τ₁, φ₀, φ₁) = (0, 1+α, 1−α, 0, 0)`.
pub fn modulus(alpha: &FoliationParameter) -> MartinetRamisModulus {
    let a = alpha.value();
    MartinetRamisModulus {
        mu: Complex::new(0.0, 0.0),
        tau0: 1.0 + a,
        tau1: 1.0 - a,
        phi0: FormalGerm::default(),
        phi1: FormalGerm::default(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionKind {
    Node,
    Saddle,
    Neutral,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionClass {
    pub kind: RegionKind,
    pub epsilon: f64,
}

pub const DEFAULT_REGION_EPSILON: f64 = 0.05;

/// Node part `Re(x⁻²) > ε`, saddle part `Re(x⁻²) < −ε`.
pub fn classify_region(x: Complex, epsilon: f64) -> Result<RegionClass> {
    if x.norm() == 0.0 {
        return Err(Error::ZeroInput);
    }
    let r = (1.0 / (x * x)).re;
    let kind = if r > epsilon {
        RegionKind::Node
    } else if r < -epsilon {
        RegionKind::Saddle
    } else {
        RegionKind::Neutral
    };
    Ok(RegionClass { kind, epsilon })
}
