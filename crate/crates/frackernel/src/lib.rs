//! Heat kernels of space- and time-fractional evolution equations.
//!
//! The crate evaluates the transition densities of subordinated and
//! inverse-subordinated profile-form kernels by adaptive quadrature against
//! the one-sided stable law, provides every closed-form asymptotic constant
//! of the far/near-field and large/small-time regimes, and ships Monte Carlo
//! samplers that serve as independent statistical oracles.
//!
//! Modules
//! * [`special`] — Gamma-family functions and the duplication/reflection
//!   identity checks.
//! * [`stable`] — the β-stable subordinator law: density, CDF, moments,
//!   asymptotic forms and correction functions.
//! * [`kernels`] — profile-form base kernels (Gauss, Cauchy, symmetric
//!   2γ-stable) and stable-process moments.
//! * [`transform`] — quadrature for the subordinated kernel p^S and the
//!   inverse-subordinated kernel p^{S^{-1}}.
//! * [`asymptotics`] — the closed-form asymptotic evaluators and the
//!   Laplace-method / I(B) approximations.
//! * [`montecarlo`] — reproducible samplers and Kolmogorov–Smirnov
//!   comparison utilities.
//! * [`cli`] — the `frackernel` command-line surface.

pub mod asymptotics;
pub mod cli;
pub mod error;
pub mod kernels;
pub mod montecarlo;
mod quad;
pub mod special;
pub mod stable;
pub mod transform;

pub use error::{Error, Result};
pub use kernels::{as_profile, BaseKernel, EvalPoint, Profile, ProfileKernel};
pub use stable::{Moment, StableLaw};
pub use transform::{
    inverse_subordinated_density, subordinated_density, KernelValue, QuadConfig, TailPolicy,
    TimeChangeMode,
};
