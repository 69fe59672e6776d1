use std::f64::consts::PI;

use super::{sector_contains, FoliationParameter, LeafSolver, SectorTag};
use crate::numerics::{
    gamma_half_integer, integrate_path, Complex, PathSpec, QuadratureConfig, Segment,
};
use crate::{Error, Result};

/// Connected component of `V⁺ ∩ V⁻` on which a Stokes translation is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HalfPlane {
    /// `Re x < 0`: `y⁻_{α,c} = y⁺_{α,c+τ₁}` with `τ₁ = 1 − α`.
    ReNeg,
    /// `Re x > 0`: `y⁺_{α,c} = y⁻_{α,c+τ₀}` with `τ₀ = 1 + α`.
    RePos,
}

impl HalfPlane {
    /// The Stokes constant this half-plane carries.
    pub fn expected(self, alpha: &FoliationParameter) -> Complex {
        match self {
            HalfPlane::ReNeg => 1.0 - alpha.value(),
            HalfPlane::RePos => 1.0 + alpha.value(),
        }
    }

    fn contains(self, x: Complex) -> bool {
        match self {
            HalfPlane::ReNeg => x.re < 0.0,
            HalfPlane::RePos => x.re > 0.0,
        }
    }
}

/// Translation between the two sectorial leaf coordinates over `x`:
/// `(y⁻_{α,c} − y⁺_{α,c})·exp(1/(2x²))` on `Re x < 0` and
/// `(y⁺_{α,c} − y⁻_{α,c})·exp(1/(2x²))` on `Re x > 0`.
pub fn stokes_estimate(
    solver: &LeafSolver,
    alpha: &FoliationParameter,
    half_plane: HalfPlane,
    x: Complex,
    c: Complex,
) -> Result<Complex> {
    if !half_plane.contains(x) {
        return Err(Error::WrongHalfPlane);
    }
    if !(sector_contains(SectorTag::Plus, x)? && sector_contains(SectorTag::Minus, x)?) {
        return Err(Error::OutsideSector);
    }
    let plus = solver.value(alpha, SectorTag::Plus, c, x)?;
    let minus = solver.value(alpha, SectorTag::Minus, c, x)?;
    let factor = solver.stokes_factor(x)?;
    Ok(match half_plane {
        HalfPlane::ReNeg => (minus - plus) * factor,
        HalfPlane::RePos => (plus - minus) * factor,
    })
}

fn check_hankel_args(a: u32, j: u32) -> Result<()> {
    if !(1..=4).contains(&a) || j > 1 {
        return Err(Error::OutOfRange(format!(
            "hankel expects a in 1..=4 and j in {{0,1}}, got a={a}, j={j}"
        )));
    }
    Ok(())
}

/// `−(2iπ/Γ(a/2))·(1/2)^{a/2}·(−1)^{aj}`.
pub fn hankel_closed_form(a: u32, j: u32) -> Result<Complex> {
    check_hankel_args(a, j)?;
    let sign = if (a * j).is_multiple_of(2) { 1.0 } else { -1.0 };
    let magnitude = 2.0 * PI / gamma_half_integer(a)? * 0.5_f64.powf(a as f64 / 2.0);
    Ok(Complex::new(0.0, -sign * magnitude))
}

/// `∮ z^a·exp(1/(2z²)) dz/z³` over the unit circle centred at `(−1)^j`, starting and
/// ending at the origin, run clockwise.
pub fn hankel_numeric(a: u32, j: u32, cfg: &QuadratureConfig) -> Result<Complex> {
    check_hankel_args(a, j)?;
    let center = if j == 0 { 1.0 } else { -1.0 };
    // angle of the origin seen from the centre
    let start = if j == 0 { PI } else { 0.0 };
    let path = PathSpec::with_removable(
        vec![Segment::Arc {
            center: Complex::new(center, 0.0),
            radius: 1.0,
            start_angle: start,
            end_angle: start - 2.0 * PI,
        }],
        true,
        true,
    )?;
    let power = a as i32 - 3;
    let integrand = |z: Complex| {
        let exponent = 1.0 / (2.0 * z * z);
        if exponent.re < -700.0 {
            return Complex::new(0.0, 0.0);
        }
        z.powi(power) * exponent.exp()
    };
    Ok(integrate_path(integrand, &path, cfg)?.value)
}
