//! Realignment (CCNR) and correlation-matrix (de Vicente) criteria.

use super::{fmt_list, upper_bound, CriterionId, CriterionVerdict};
use crate::error::Result;
use crate::linalg::{realign, singular_values};
use crate::states::{fano_decompose, require_qubits, DensityMatrix};

/// ‖R(ρ)‖₁ ≤ 1 for separable ρ.
pub fn ccnr(rho: &DensityMatrix, tol: f64) -> CriterionVerdict {
    let r = realign(rho.matrix(), rho.dims()).expect("shape checked at construction");
    let sv = singular_values(&r);
    let norm: f64 = sv.iter().sum();
    let details = format!("singular_values={}", fmt_list(&sv));
    upper_bound(CriterionId::Ccnr, norm, 1.0, false, tol, details)
}

/// ‖τ‖₁ ≤ √(4(dA−1)(dB−1)/(dA·dB)) for separable ρ (two qubits: ≤ 1).
pub fn correlation_matrix(rho: &DensityMatrix, tol: f64) -> Result<CriterionVerdict> {
    require_qubits(rho.dims(), "the correlation matrix is implemented for two qubits")?;
    let fano = fano_decompose(rho)?;
    let sv = singular_values(&fano.tau_matrix());
    let norm: f64 = sv.iter().sum();
    let (da, db) = (rho.dims().da() as f64, rho.dims().db() as f64);
    let threshold = (4.0 * (da - 1.0) * (db - 1.0) / (da * db)).sqrt();
    let details = format!("tau_singular_values={}", fmt_list(&sv));
    Ok(upper_bound(
        CriterionId::CorrelationMatrix,
        norm,
        threshold,
        false,
        tol,
        details,
    ))
}
