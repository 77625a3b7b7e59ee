//! Grids, sampled potentials, scattering data and the small dense linear
//! algebra shared by every stage.

pub mod contour;
pub mod data;
mod grids;
pub mod linalg;
mod potential;
pub mod quad;

pub use data::{BoundState, ScatteringData};
pub use grids::{RhoGrid, SpaceGrid, UGrid};
pub(crate) use potential::trapezoid as potential_trapezoid;
pub use potential::{JostAsymptotics, SampledPotential};

use crate::error::Result;
use num_complex::Complex64;

pub type ComplexMatrix = nalgebra::DMatrix<Complex64>;

/// Relative cutoff for pseudo-inverses and numerical rank.
pub const PINV_CUTOFF: f64 = 1e-10;
/// Inputs with `|A - A*| <= HERMITIAN_TOL * (1 + |A|)` are symmetrized silently.
pub const HERMITIAN_TOL: f64 = 1e-8;

/// Which half-line the scattering data describe: right data come from the
/// solution normalized at `+inf`, left data from `-inf`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
        }
    }
}

/// Normalization end of a Jost solution: `Plus` behaves like `exp(i rho x)` at
/// `+inf`, `Minus` like `exp(-i rho x)` at `-inf`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Plus,
    Minus,
}

/// A matrix-valued function of a complex spectral parameter, such as `D(rho)`.
pub trait MatrixFunction: Sync {
    fn dim(&self) -> usize;
    fn eval(&self, rho: Complex64) -> Result<ComplexMatrix>;
}

pub struct FnMatrix<F> {
    pub m: usize,
    pub f: F,
}

impl<F> MatrixFunction for FnMatrix<F>
where
    F: Fn(Complex64) -> Result<ComplexMatrix> + Sync,
{
    fn dim(&self) -> usize {
        self.m
    }
    fn eval(&self, rho: Complex64) -> Result<ComplexMatrix> {
        (self.f)(rho)
    }
}
