//! Traveling waves and graphical anisotropic curvature flow in the band
//! `[-1, 1] x R`.
//!
//! A curve `y = u(x, t)` moves with normal velocity `V = A(n) H + B(n)`, which
//! for graphs reads
//!
//! ```text
//! u_t = a(u_x) u_xx / (1 + u_x^2) + b(u_x) sqrt(1 + u_x^2),   u_x(+-1, t) = +-u(+-1, t).
//! ```
//!
//! * [`coefficients`]: the anisotropy pair `a(p) > 0 > b(p)`.
//! * [`traveling_wave`]: cup-like waves `phi(x) + c t`, their speeds and profiles.
//! * [`pde`]: the evolution problem on a grid.
//! * [`verification`]: quantitative checks of the wave and flow estimates.
//! * [`io`]: CSV and JSON artifacts.

pub mod coefficients;
pub mod error;
pub mod io;
pub mod linalg;
pub mod pde;
pub mod quadrature;
pub mod roots;
pub mod traveling_wave;
pub mod verification;

pub use coefficients::{CoefficientPair, Extrema, Requirements};
pub use error::{Error, Result};
pub use traveling_wave::{Profile, WaveSolution};
