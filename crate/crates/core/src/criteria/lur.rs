//! Local uncertainty relations.

use super::{lower_bound, CriterionId, CriterionVerdict, Dichotomic};
use crate::error::{Error, Result};
use crate::linalg::{kron, CMat};
use crate::pauli;
use crate::states::{require_qubits, DensityMatrix};

/// Lower bound on Σ Δ²(σᵢ) over single-qubit states: 3 − |r|² ≥ 2.
const PAULI_VARIANCE_BOUND: f64 = 2.0;

fn joint_variance(rho: &DensityMatrix, a: &Dichotomic, b: &Dichotomic) -> f64 {
    let m = &kron(a.matrix(), &CMat::identity(2)) + &kron(&CMat::identity(2), b.matrix());
    let mean = rho.expectation(&m);
    rho.expectation(&(&m * &m)) - mean * mean
}

/// Σₖ Δ²(Aₖ⊗I + I⊗Bₖ) against the separable bound C_A + C_B.
pub fn lur(
    rho: &DensityMatrix,
    obs_a: &[Dichotomic],
    obs_b: &[Dichotomic],
    c_a: f64,
    c_b: f64,
    tol: f64,
) -> Result<CriterionVerdict> {
    require_qubits(rho.dims(), "LUR observables are qubit observables")?;
    if obs_a.len() != obs_b.len() {
        return Err(Error::LengthMismatch(obs_a.len(), obs_b.len()));
    }
    for (name, value) in [("c_a", c_a), ("c_b", c_b)] {
        if value.is_nan() || value <= 0.0 {
            return Err(Error::OutOfRange { name, value });
        }
    }
    let stat: f64 = obs_a
        .iter()
        .zip(obs_b)
        .map(|(a, b)| joint_variance(rho, a, b))
        .sum();
    Ok(lower_bound(
        CriterionId::Lur,
        stat,
        c_a + c_b,
        false,
        tol,
        format!("terms={}", obs_a.len()),
    ))
}

/// Per axis, picks the sign of Bₖ that gives the smaller joint variance.
///
/// The terms are independent, so the per-axis choice is the optimum over
/// all 2ⁿ sign patterns.
pub fn lur_sign_flips(
    rho: &DensityMatrix,
    obs_a: &[Dichotomic],
    obs_b: &[Dichotomic],
) -> Vec<Dichotomic> {
    obs_a
        .iter()
        .zip(obs_b)
        .map(|(a, b)| {
            let flipped = b.negated();
            if joint_variance(rho, a, &flipped) < joint_variance(rho, a, b) {
                flipped
            } else {
                b.clone()
            }
        })
        .collect()
}

/// LUR with (σx, σy, σz) on both sides, C_A = C_B = 2, after sign flips on B.
pub fn lur_default(rho: &DensityMatrix, tol: f64) -> Result<CriterionVerdict> {
    require_qubits(rho.dims(), "LUR observables are qubit observables")?;
    let paulis: Vec<Dichotomic> = pauli::sigmas()
        .into_iter()
        .map(|s| Dichotomic::new(s).expect("Pauli matrices are dichotomic"))
        .collect();
    let obs_b = lur_sign_flips(rho, &paulis, &paulis);
    let mut v = lur(
        rho,
        &paulis,
        &obs_b,
        PAULI_VARIANCE_BOUND,
        PAULI_VARIANCE_BOUND,
        tol,
    )?;
    let signs: Vec<&str> = obs_b
        .iter()
        .zip(&paulis)
        .map(|(b, p)| if b == p { "+" } else { "-" })
        .collect();
    v.details = format!("b_signs={}", signs.concat());
    Ok(v)
}
