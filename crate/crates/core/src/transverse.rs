//! Transverse homeomorphisms `ψ±` of the sectorial leaf spaces.
//!
//! `ψ⁺(c) = c + α·g(Re c)` and `ψ⁻(c) = c − α + α·g(1 + Re(c − α))`, where `g` is a
//! 2-periodic trapezoid of ramp width `η = (1 − |Re α|)/3`. They solve
//!
//! ```text
//! ψ⁺(c + 1 − α) = ψ⁻(c) + 1
//! ψ⁻(c + 1 + α) = ψ⁺(c) + 1
//! ψ±(0) = 0,   ψ±(c)/c → 1 as c → 0, ∞
//! ```

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::foliation::SectorTag;
use crate::numerics::Complex;
use crate::{Error, Result};

/// `η = (1 − |Re α|)/3`, defined for `|α| < 1/10`.
pub fn eta_of(alpha: Complex) -> Result<f64> {
    let modulus = alpha.norm();
    if modulus.is_nan() || modulus >= 0.1 {
        return Err(Error::AlphaTooLarge { modulus });
    }
    Ok((1.0 - alpha.re.abs()) / 3.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BumpProfile {
    eta: f64,
}

impl BumpProfile {
    pub fn new(eta: f64) -> Result<Self> {
        if eta > 0.0 && eta <= 1.0 / 3.0 {
            Ok(BumpProfile { eta })
        } else {
            Err(Error::OutOfRange(format!(
                "eta must lie in (0, 1/3], got {eta}"
            )))
        }
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// Breakpoints of one period `[0, 2)`.
    pub fn breakpoints(&self) -> [f64; 5] {
        let e = self.eta;
        [0.0, e, 2.0 * e, 2.0 - 2.0 * e, 2.0 - e]
    }

    /// `g(t)`: 0 on `[0, η]`, rising on `[η, 2η]`, 1 on `[2η, 2 − 2η]`, falling on
    /// `[2 − 2η, 2 − η]`, 0 on `[2 − η, 2]`; extended 2-periodically.
    pub fn g(&self, t: f64) -> f64 {
        let e = self.eta;
        let t = t.rem_euclid(2.0);
        if t <= e || t >= 2.0 - e {
            0.0
        } else if t < 2.0 * e {
            (t - e) / e
        } else if t <= 2.0 - 2.0 * e {
            1.0
        } else {
            (2.0 - e - t) / e
        }
    }
}

/// `bump_g` as a free function.
pub fn bump_g(profile: &BumpProfile, t: f64) -> f64 {
    profile.g(t)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransverseMap {
    alpha: Complex,
    side: SectorTag,
    profile: BumpProfile,
}

impl TransverseMap {
    pub fn new(alpha: Complex, side: SectorTag) -> Result<Self> {
        let profile = BumpProfile::new(eta_of(alpha)?)?;
        Ok(TransverseMap {
            alpha,
            side,
            profile,
        })
    }

    pub fn alpha(&self) -> Complex {
        self.alpha
    }

    pub fn side(&self) -> SectorTag {
        self.side
    }

    pub fn profile(&self) -> &BumpProfile {
        &self.profile
    }

    /// Real profile `k` with `ψ(c) − c = α·k(Re c)`.
    fn weight(&self, u: f64) -> f64 {
        match self.side {
            SectorTag::Plus => self.profile.g(u),
            SectorTag::Minus => self.profile.g(1.0 + u - self.alpha.re) - 1.0,
        }
    }

    /// Breakpoints of `k`, shifted so that one period starts at `origin`.
    fn weight_breakpoints(&self) -> impl Iterator<Item = f64> + '_ {
        let shift = match self.side {
            SectorTag::Plus => 0.0,
            SectorTag::Minus => self.alpha.re - 1.0,
        };
        self.profile
            .breakpoints()
            .into_iter()
            .map(move |b| b + shift)
    }

    /// `ψ(c) − c`; its modulus never exceeds `|α|`.
    pub fn displacement(&self, c: Complex) -> Complex {
        self.alpha * self.weight(c.re)
    }

    pub fn apply(&self, c: Complex) -> Complex {
        c + self.displacement(c)
    }

    /// Exact inverse: solve the strictly increasing piecewise-linear equation
    /// `Re w = u + Re(α)·k(u)`, then `Im c = Im w − Im(α)·k(u)`.
    pub fn invert(&self, w: Complex) -> Complex {
        let a = self.alpha.re;
        let forward = |u: f64| u + a * self.weight(u);
        let target = w.re;
        // |Re(α)·k| < 1/10, so the preimage lies in this window
        let (lo, hi) = (target - 0.11, target + 0.11);
        let mut knots = vec![lo, hi];
        let first_period = ((lo - 2.0) / 2.0).floor() as i64;
        let last_period = ((hi + 2.0) / 2.0).ceil() as i64;
        for p in first_period..=last_period {
            for b in self.weight_breakpoints() {
                let k = b + 2.0 * p as f64;
                if k > lo && k < hi {
                    knots.push(k);
                }
            }
        }
        knots.sort_by(|x, y| x.partial_cmp(y).expect("finite knots"));
        let mut u = target;
        for pair in knots.windows(2) {
            let (ul, ur) = (pair[0], pair[1]);
            let (fl, fr) = (forward(ul), forward(ur));
            if fl <= target && target <= fr {
                u = if fr == fl {
                    ul
                } else {
                    ul + (target - fl) * (ur - ul) / (fr - fl)
                };
                break;
            }
        }
        Complex::new(u, w.im - self.alpha.im * self.weight(u))
    }
}

pub fn psi_apply(map: &TransverseMap, c: Complex) -> Complex {
    map.apply(c)
}

pub fn psi_invert(map: &TransverseMap, w: Complex) -> Complex {
    map.invert(w)
}

/// Deviations found by [`check_system`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SystemReport {
    /// `max |ψ⁺(c + 1 − α) − ψ⁻(c) − 1|`
    pub first_relation: f64,
    /// `max |ψ⁻(c + 1 + α) − ψ⁺(c) − 1|`
    pub second_relation: f64,
    /// `|ψ⁺(0)| + |ψ⁻(0)|`
    pub fixed_point: f64,
    /// `max |ψ±(c)/c − 1|` over probes with `|c| ∈ {10³, 10⁶}`
    pub limit_infinity: f64,
    /// `max |ψ±(c)/c − 1|` over probes with `|c| = 10⁻³`
    pub limit_zero: f64,
}

impl SystemReport {
    pub fn max_identity_deviation(&self) -> f64 {
        self.first_relation
            .max(self.second_relation)
            .max(self.fixed_point)
    }
}

/// Evaluate the four conditions of the transverse system on seeded random `c` in `[−3, 3]²`.
pub fn check_system(alpha: Complex, n_samples: usize, seed: u64) -> Result<SystemReport> {
    let plus = TransverseMap::new(alpha, SectorTag::Plus)?;
    let minus = TransverseMap::new(alpha, SectorTag::Minus)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SystemReport {
        first_relation: 0.0,
        second_relation: 0.0,
        fixed_point: plus.apply(Complex::new(0.0, 0.0)).norm()
            + minus.apply(Complex::new(0.0, 0.0)).norm(),
        limit_infinity: 0.0,
        limit_zero: 0.0,
    };
    for _ in 0..n_samples {
        let c = Complex::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let d1 = (plus.apply(c + 1.0 - alpha) - (minus.apply(c) + 1.0)).norm();
        let d2 = (minus.apply(c + 1.0 + alpha) - (plus.apply(c) + 1.0)).norm();
        report.first_relation = report.first_relation.max(d1);
        report.second_relation = report.second_relation.max(d2);

        let theta = rng.gen_range(0.0..std::f64::consts::TAU);
        for map in [&plus, &minus] {
            for radius in [1e3, 1e6] {
                let probe = Complex::from_polar(radius, theta);
                report.limit_infinity = report
                    .limit_infinity
                    .max((map.apply(probe) / probe - 1.0).norm());
            }
            let probe = Complex::from_polar(1e-3, theta);
            report.limit_zero = report
                .limit_zero
                .max((map.apply(probe) / probe - 1.0).norm());
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn eta_values() {
        assert_eq!(eta_of(c(0.0, 0.0)).unwrap(), 1.0 / 3.0);
        assert!((eta_of(c(0.09, 0.0)).unwrap() - 0.91 / 3.0).abs() < 1e-15);
        assert_eq!(eta_of(c(0.0, 0.05)).unwrap(), 1.0 / 3.0);
        assert!(matches!(
            eta_of(c(0.1, 0.0)),
            Err(Error::AlphaTooLarge { .. })
        ));
    }

    #[test]
    fn bump_values() {
        let p = BumpProfile::new(0.3).unwrap();
        assert_eq!(p.g(1.0), 1.0);
        assert!((p.g(1.5 * 0.3) - 0.5).abs() < 1e-15);
        assert_eq!(p.g(-0.15), 0.0);
        assert_eq!(p.g(2.0 - 0.15), 0.0);
        assert_eq!(p.g(0.0), 0.0);
        assert!(BumpProfile::new(0.4).is_err());
        assert!(BumpProfile::new(0.0).is_err());
    }

    #[test]
    fn fixed_points_and_unit() {
        let a = c(0.05, 0.03);
        let plus = TransverseMap::new(a, SectorTag::Plus).unwrap();
        let minus = TransverseMap::new(a, SectorTag::Minus).unwrap();
        assert_eq!(plus.apply(c(0.0, 0.0)), c(0.0, 0.0));
        assert_eq!(minus.apply(c(0.0, 0.0)), c(0.0, 0.0));
        assert_eq!(plus.apply(c(1.0, 0.0)), c(1.0, 0.0) + a);
        assert_eq!(plus.invert(c(0.0, 0.0)), c(0.0, 0.0));
        assert!((plus.invert(c(1.0, 0.0) + a) - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn alpha_zero_is_identity() {
        let r = check_system(c(0.0, 0.0), 200, 7).unwrap();
        assert_eq!(r.max_identity_deviation(), 0.0);
        assert_eq!(r.limit_infinity, 0.0);
        assert_eq!(r.limit_zero, 0.0);
    }

    #[test]
    fn system_holds() {
        let r = check_system(c(0.05, 0.0), 1000, 42).unwrap();
        assert!(r.max_identity_deviation() <= 1e-13, "{r:?}");
        assert!(r.limit_infinity <= 1e-4);
        assert_eq!(r.limit_zero, 0.0);
    }
}
