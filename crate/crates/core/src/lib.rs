//! Forward and inverse scattering for `-Y'' + Q(x) Y = rho^2 Y` with a Hermitian
//! matrix potential on the whole line.
//!
//! The pipeline is `forward::full_forward` (potential to scattering data),
//! `glm::invert` (scattering data to potential), with `conditions` checking
//! and connecting the data, `solitons` building reflectionless potentials and
//! `kdv` evolving them in time.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod conditions;
pub mod domain;
pub mod error;
pub mod forward;
pub mod glm;
pub mod kdv;
pub mod par;
pub mod potentials;
pub mod solitons;

pub use domain::{
    BoundState, ComplexMatrix, Direction, JostAsymptotics, RhoGrid, SampledPotential, ScatteringData, Side, SpaceGrid,
    UGrid,
};
pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use par::Exec;
