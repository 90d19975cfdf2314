//! Identity checkers and the sweeps that drive them.

mod identities;
mod report;
mod sweep;

pub use identities::{rounding_slack, Verifier};
pub(crate) use report::json_number as report_number;
pub use report::{fmt_sig17, ParamValue, Params, Side, TableEntry, VerifyReport};
pub use sweep::{default_z_grid, run_sweep, Identity, SweepConfig, Q_GRID};

use num_complex::Complex64;

use crate::error::Result;
use crate::qarith::QParam;

pub fn verify_sum_formula(total: u32, depth: u32, qp: &QParam) -> Result<VerifyReport> {
    Verifier::new().sum_formula(total, depth, qp)
}

pub fn verify_gf_identity(depth: u32, z: Complex64, qp: &QParam) -> Result<VerifyReport> {
    Verifier::new().gf_identity(depth, z, qp)
}

pub fn verify_ab_representations(
    m: u64,
    x: Complex64,
    n_max: u32,
    qp: &QParam,
) -> Result<[VerifyReport; 2]> {
    Verifier::new().ab_representations(m, x, n_max, qp)
}

pub fn verify_euler_reduction(m: u32, qp: &QParam) -> Result<VerifyReport> {
    Verifier::new().euler_reduction(m, qp)
}

pub fn verify_drin(qp: &QParam, cap: usize) -> Result<VerifyReport> {
    Verifier::new().drin(qp, cap)
}

pub fn verify_height_relation(qp: &QParam, cap: usize) -> Result<VerifyReport> {
    Verifier::new().height_relation(qp, cap)
}

pub fn verify_phi_diagonal(qp: &QParam, max_weight: u32) -> Result<VerifyReport> {
    Verifier::new().phi_diagonal(qp, max_weight)
}
