//! The evolution problem
//!
//! ```text
//! u_t = a(u_x) u_xx / (1 + u_x^2) + b(u_x) sqrt(1 + u_x^2)   on (-1, 1),
//! u_x(+-1, t) = +-u(+-1, t).
//! ```

mod datum;
mod evolve;
mod grid;
mod scheme;
mod state;

pub use datum::{lift, make_rho, odd_bump, FunctionDatum, InitialDatum, RhoDatum, DEFAULT_COMPAT_TOL};
pub use evolve::{evolve, EvolveControls, EvolveTrace, Horizon, Series, TraceOrigin, TIME_EPS};
pub use grid::{Grid, GridKind, MIN_INTERVALS};
pub use scheme::{
    explicit_dt_limit, interior_rhs, rhs, rhs_nodes, step, theta_residual, Scheme, DEFAULT_CFL,
};
pub use state::{boundary_residual, theta_of, GridState};

impl InitialDatum {
    pub fn origin(&self) -> TraceOrigin {
        match self {
            InitialDatum::Rho(r) => TraceOrigin::Rho { p: r.p, m1: r.m1 },
            InitialDatum::Function(f) => TraceOrigin::Function { name: f.name.clone() },
            InitialDatum::Tabulated(_) => TraceOrigin::Tabulated,
        }
    }
}
