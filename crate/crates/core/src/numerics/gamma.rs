use crate::{Error, Result};

/// `Γ(a/2)` for `a ∈ {1, 2, 3, 4}`.
pub fn gamma_half_integer(a: u32) -> Result<f64> {
    let sqrt_pi = std::f64::consts::PI.sqrt();
    match a {
        1 => Ok(sqrt_pi),
        2 => Ok(1.0),
        3 => Ok(0.5 * sqrt_pi),
        4 => Ok(1.0),
        _ => Err(Error::OutOfRange(format!(
            "gamma_half_integer expects a in 1..=4, got {a}"
        ))),
    }
}
