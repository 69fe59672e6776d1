//! The charts `(x,y) = [x:y:1]`, `(s,t) = [1:t:s]`, `(u,v) = [u:1:v]` of `CP²`, and `φ`
//! written in the last two.

use serde::{Deserialize, Serialize};

use crate::conjugacy::{sector_select, ConjugacyMap};
use crate::foliation::{FoliationParameter, LeafSolver, SectorTag};
use crate::numerics::{ensure_finite, Complex};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Chart {
    XY,
    ST,
    UV,
}

impl std::str::FromStr for Chart {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "xy" => Ok(Chart::XY),
            "st" => Ok(Chart::ST),
            "uv" => Ok(Chart::UV),
            other => Err(Error::ChartUndefined(format!("unknown chart '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectivePoint {
    pub chart: Chart,
    pub coords: (Complex, Complex),
}

impl ProjectivePoint {
    pub fn new(chart: Chart, a: Complex, b: Complex) -> Self {
        ProjectivePoint {
            chart,
            coords: (a, b),
        }
    }

    /// A representative of the homogeneous coordinates `[X₀ : X₁ : X₂]`.
    pub fn homogeneous(&self) -> [Complex; 3] {
        let one = Complex::new(1.0, 0.0);
        let (a, b) = self.coords;
        match self.chart {
            Chart::XY => [a, b, one],
            Chart::ST => [one, b, a],
            Chart::UV => [a, one, b],
        }
    }
}

/// Re-express `p` in the `target` chart (`y = tx`, `1 = sx`, `x = uy`, `1 = vy`, `v = us`, `1 = ut`).
pub fn chart_transition(p: &ProjectivePoint, target: Chart) -> Result<ProjectivePoint> {
    if p.chart == target {
        return Ok(*p);
    }
    let [h0, h1, h2] = p.homogeneous();
    let zero = Complex::new(0.0, 0.0);
    let (den, a, b, name) = match target {
        Chart::XY => (h2, h0, h1, "xy"),
        Chart::ST => (h0, h2, h1, "st"),
        Chart::UV => (h1, h0, h2, "uv"),
    };
    if den == zero {
        return Err(Error::ChartUndefined(format!(
            "point {:?} has no {name} coordinates",
            p.coords
        )));
    }
    Ok(ProjectivePoint::new(
        target,
        ensure_finite(a / den)?,
        ensure_finite(b / den)?,
    ))
}

/// `[0:0:1]`, `[0:1:0]` and `[1:0:0]`, each in the chart where it is the origin.
pub fn singularity_inventory() -> Vec<ProjectivePoint> {
    let zero = Complex::new(0.0, 0.0);
    vec![
        ProjectivePoint::new(Chart::XY, zero, zero),
        ProjectivePoint::new(Chart::UV, zero, zero),
        ProjectivePoint::new(Chart::ST, zero, zero),
    ]
}

/// `y^tag_{α,0}(1/s)` from the integral along the vertical ray out of `s`.
pub fn weak_separatrix_at_infinity(
    solver: &LeafSolver,
    alpha: &FoliationParameter,
    tag: SectorTag,
    s: Complex,
) -> Result<Complex> {
    Ok(-solver.offset_by_ray(alpha, tag, s)?)
}

/// `φ̃(s, t) = (s, s·(y_{0,0}(1/s) + ψ(c̃)·exp(−s²/2)))` for `|s| ≤ 1`, with
/// `φ̃(0, t) := (0, t)`.
pub fn phi_st(map: &ConjugacyMap, s: Complex, t: Complex) -> Result<(Complex, Complex)> {
    if s.norm() == 0.0 {
        return Ok((s, t));
    }
    if s.norm() > 1.0 {
        return Err(Error::ChartUndefined(format!(
            "|s| = {} > 1 belongs to the xy chart",
            s.norm()
        )));
    }
    let x = 1.0 / s;
    let tag = sector_select(x)?;
    let leaves = map.leaves();
    let zero = FoliationParameter::zero();
    let offset_alpha = leaves.offset_by_ray(map.alpha(), tag, s)?;
    let offset_zero = if map.alpha().value() == Complex::new(0.0, 0.0) {
        offset_alpha
    } else {
        leaves.offset_by_ray(&zero, tag, s)?
    };
    let half_s2 = 0.5 * s * s;
    let c_tilde = ensure_finite((t / s + offset_alpha) * half_s2.exp())?;
    let displacement = map.transverse(tag).displacement(c_tilde);
    let mut correction = offset_alpha - offset_zero;
    if displacement != Complex::new(0.0, 0.0) {
        correction += displacement * (-half_s2).exp();
    }
    Ok((s, ensure_finite(t + s * correction)?))
}

/// Which bound governs `φ̂` near `[0:1:0]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UvRegion {
    /// `|u/v| > 1`: `f = 1` and the base point is untouched.
    Outer,
    /// `|u/v| ≤ 1`: the bent region.
    Inner,
}

pub fn uv_region(u: Complex, v: Complex) -> Result<UvRegion> {
    if v.norm() == 0.0 {
        return Err(Error::ChartUndefined("v = 0".into()));
    }
    Ok(if (u / v).norm() > 1.0 {
        UvRegion::Outer
    } else {
        UvRegion::Inner
    })
}

/// `φ̂(u, v) = (Û, V̂)` with `V̂ = 1/Y(u/v, 1/v)` and `Û = V̂·X(u/v, 1/v)`;
/// `φ̂(0, 0) := (0, 0)`.
pub fn phi_uv(map: &ConjugacyMap, u: Complex, v: Complex) -> Result<(Complex, Complex)> {
    let zero = Complex::new(0.0, 0.0);
    if u == zero && v == zero {
        return Ok((zero, zero));
    }
    if v == zero {
        return Err(Error::ChartUndefined(
            "v = 0 lies on the line at infinity; use the st chart".into(),
        ));
    }
    let (x_image, y_image) = map.phi(u / v, 1.0 / v)?;
    if y_image == zero {
        return Err(Error::ChartUndefined("image has Y = 0".into()));
    }
    let v_hat = 1.0 / y_image;
    Ok((ensure_finite(v_hat * x_image)?, ensure_finite(v_hat)?))
}

/// `sup_t |φ̃(s, t) − (0, t)|` (Euclidean norm on `ℂ²`) for each `s`.
pub fn line_at_infinity_probe(
    map: &ConjugacyMap,
    s_values: &[Complex],
    t_grid: &[Complex],
) -> Result<Vec<f64>> {
    s_values
        .iter()
        .map(|&s| {
            t_grid.iter().try_fold(0.0_f64, |acc, &t| {
                let (s_img, t_img) = phi_st(map, s, t)?;
                Ok(acc.max((s_img.norm_sqr() + (t_img - t).norm_sqr()).sqrt()))
            })
        })
        .collect()
}

/// `|Û| + |V̂|` along the ray `v = τ·direction`, `u = ratio·v`.
pub fn uv_origin_probe(
    map: &ConjugacyMap,
    direction: Complex,
    ratio: Complex,
    taus: &[f64],
) -> Result<Vec<f64>> {
    taus.iter()
        .map(|&tau| {
            let v = direction * tau;
            let (u_hat, v_hat) = phi_uv(map, ratio * v, v)?;
            Ok(u_hat.norm() + v_hat.norm())
        })
        .collect()
}
