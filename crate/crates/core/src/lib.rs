//! Time evolution of the incompatibility of qubit measurement pairs under
//! open-system noise, together with the concurrence of a maximally entangled
//! probe state evolved by the same local channel.
//!
//! Binary qubit measurements are represented by Minkowski four-vectors
//! ([`bloch`]), joint measurability is decided by the quadratic criterion in
//! [`compat`], and the noise-robustness incompatibility monotone is computed
//! by bracketed bisection. The dynamical maps (dephasing with a two-Gaussian
//! frequency distribution, amplitude damping with Lorentzian and
//! photonic-band-gap reservoirs, static depolarizing noise) live in
//! [`channels`]; the PBG propagator needs the error function at complex
//! argument ([`specfun`]). [`entangle`] scores the evolved Bell probe state,
//! and [`scenario`] sweeps time grids, detects sudden-death/revival events
//! and emits CSV/JSON tables.

pub mod bloch;
pub mod channels;
pub mod compat;
pub mod entangle;
pub mod scenario;
pub mod specfun;

mod error;

pub use bloch::{FourVector, MeasurementPair};
pub use channels::ChannelSnapshot;
pub use error::Error;
pub use scenario::{ScenarioConfig, TimeSeriesRecord, TransitionEvent};

/// Absolute slack applied to all cone-membership and positivity
/// inequalities, so that boundary objects (sharp effects, the zero effect)
/// survive floating-point rounding.
pub const TOL_GEOM: f64 = 1e-12;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
