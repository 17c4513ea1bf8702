//! Unidirectional two-state quantum walk: exact evolution, closed-form and
//! Fourier-domain solutions, the real kernel Λ, observables, and large-time
//! asymptotics.
//!
//! Sites are n = 0..=t; the walker either stays or moves one site right each
//! step. The bidirectional picture uses m = 2n − t.

pub mod asymptotics;
pub mod error;
pub mod evolution;
pub mod fft;
pub mod lambda;
pub mod model;
pub mod observables;
pub mod quadrature;
pub mod spectral;

pub use num_complex::Complex64;

pub use asymptotics::{
    allowed_interval, asymptotic_state, default_guard, interior_sites, rho_bar, rho_bounds, saddle,
    stationary_density, AsymptoticProfile, SaddleData, StationaryDensity,
};
pub use error::{Result, WalkError};
pub use evolution::{evolve, pmf, step, Evolution};
pub use lambda::{lambda_table_recursive, lambda_value, pmf_via_lambda, state_via_lambda, LambdaTable};
pub use model::{
    bidirectional_site, make_coin, make_initial_state, to_bidirectional, CoinMatrix, CoinParameters,
    WalkerState,
};
pub use observables::{
    approximate_symmetry_eta, classify_symmetry, continuity_residual, ehrenfest_increment,
    position_mean, probability_current, probability_current_local, Method, PmfSeries,
    SymmetryFamily, SymmetryVerdict,
};
pub use spectral::{
    closed_form_state, eigenvalues, forward_transform, inverse_transform, inverse_transform_with,
    spectral_evolve,
    spectral_state, SpectralSlice, TransformSize,
};
