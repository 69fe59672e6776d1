//! Complex arithmetic services: adaptive quadrature along paths, a complex ODE
//! transport oracle and the half-integer Γ values used by the Hankel identity.

mod gamma;
mod ode;
mod path;
mod quadrature;

pub use gamma::gamma_half_integer;
pub use ode::{ode_transport, ode_transport_with};
pub use path::{PathSpec, Segment};
pub use quadrature::{integrate_path, QuadratureConfig, QuadratureResult};

pub type Complex = num_complex::Complex64;

/// `i` as a constant.
pub const I: Complex = Complex::new(0.0, 1.0);

pub(crate) fn ensure_finite(z: Complex) -> crate::Result<Complex> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(crate::Error::NonFinite)
    }
}
