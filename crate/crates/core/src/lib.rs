//! Explicit topological conjugacy between the saddle-node foliations
//! `x³y′ = y − x²/(iπ) − αx³/(i√(2π))` of the complex projective plane.
//!
//! The crate is organised bottom-up:
//!
//! * [`numerics`]: path quadrature, complex ODE transport and the few Γ values needed.
//! * [`foliation`]: sectors, sectorial leaves `y±_{α,c}`, their inversion, Stokes
//!   constants, the Hankel identity and the divergent formal series.
//! * [`transverse`]: the piecewise-affine transverse homeomorphisms `ψ±`.
//! * [`conjugacy`]: the ambient homeomorphism `φ = (X, Y)` on `ℂ²`.
//! * [`projective`]: the three affine charts of `CP²` and `φ` written in them.
//! * [`verify`]: seeded verification suites producing JSON-serialisable reports.

pub mod conjugacy;
pub mod error;
pub mod foliation;
pub mod numerics;
pub mod projective;
pub mod transverse;
pub mod verify;

pub use error::{Error, Result};
pub use numerics::Complex;
