//! Admissibility of scattering data (Condition A on each side, Condition B
//! tying the sides through `D(rho)`), the left/right connection and the
//! scalar `D(rho)` formula.

pub mod condition_a;
pub mod condition_b;
pub mod connect;
mod report;
pub mod scalar_d;

pub use condition_a::{check_condition_a, r_integrability, ConditionOptions};
pub use condition_b::{check_condition_b, ConditionBOptions};
pub use connect::{connect_left_from_right, connect_with, residues_of_inverse};
pub use report::{CheckItem, ConditionKind, ConditionReport};
pub use scalar_d::{scalar_d, ScalarD};

use crate::domain::{MatrixFunction, ScatteringData};
use crate::error::{Error, Result};
use crate::par::Exec;
use crate::solitons::reflectionless_witness;

/// `S+` at or below this is treated as identically zero.
pub const REFLECTIONLESS_TOL: f64 = 1e-14;

/// A `D(rho)` determined by right data alone: the projector chain for
/// reflectionless data of any size, the scalar formula when `m = 1`.
pub fn d_from_right(right: &ScatteringData) -> Result<Box<dyn MatrixFunction>> {
    if right.max_s_norm() <= REFLECTIONLESS_TOL {
        if right.bound_states.is_empty() {
            return Ok(Box::new(crate::domain::FnMatrix {
                m: right.dim(),
                f: {
                    let m = right.dim();
                    move |_| Ok(crate::domain::linalg::identity(m))
                },
            }));
        }
        return Ok(Box::new(reflectionless_witness(&right.bound_states)?));
    }
    if right.dim() == 1 {
        return Ok(Box::new(scalar_d(right)?));
    }
    Err(Error::Underdetermined("left data for matrix data with reflection need D(rho) from the forward problem".into()))
}

/// Left data connected to right data through `d_from_right`.
pub fn derive_left(right: &ScatteringData) -> Result<ScatteringData> {
    let d = d_from_right(right)?;
    connect_with(right, d.as_ref(), Exec::Parallel)
}
