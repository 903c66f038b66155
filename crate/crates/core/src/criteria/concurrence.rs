//! Wootters concurrence of a two-qubit density matrix.

use super::{fmt_list, upper_bound, CriterionId, CriterionVerdict};
use crate::error::Result;
use crate::linalg::{kron, singular_values, sqrt_psd};
use crate::pauli;
use crate::states::{require_qubits, DensityMatrix};

/// C(ρ) = max{0, λ₁ − λ₂ − λ₃ − λ₄}, λ the decreasing eigenvalues of
/// R = √(√ρ ρ̃ √ρ), ρ̃ = (σy⊗σy)ρ*(σy⊗σy).
///
/// Since R² = (√ρ√ρ̃)(√ρ√ρ̃)†, the λᵢ are the singular values of √ρ√ρ̃,
/// which avoids taking square roots of round-off sized eigenvalues.
pub fn concurrence_mixed(rho: &DensityMatrix, tol: f64) -> Result<CriterionVerdict> {
    require_qubits(rho.dims(), "concurrence is defined for two qubits")?;
    let yy = kron(&pauli::sigma_y(), &pauli::sigma_y());
    let sqrt_rho = sqrt_psd(rho.matrix())?;
    let sqrt_tilde = &(&yy * &sqrt_rho.conj()) * &yy;
    let lambdas = singular_values(&(&sqrt_rho * &sqrt_tilde));
    let c = (lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0);
    let details = format!("lambdas={}", fmt_list(&lambdas));
    Ok(upper_bound(CriterionId::Concurrence, c, 0.0, true, tol, details))
}
