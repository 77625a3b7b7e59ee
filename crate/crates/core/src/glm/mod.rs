//! Scattering data to potential: Fourier kernel, Nystrom solution of the
//! Gelfand-Levitan-Marchenko equations on both half-lines, recovery and
//! stitching.

pub mod invert;
pub mod kernel;
pub mod nystrom;
pub mod recover;

pub use invert::{half_line, invert, kernel_for, HalfLine, Inversion, InversionOptions};
pub use kernel::{assemble_m, fourier_kernel, GlmKernel};
pub use nystrom::{glm_sweep, solve_glm_nystrom, KernelRow, NystromRow, SweepResult, TransformKernel};
pub use recover::{derivative, recover_potential, RecoveredHalf};
