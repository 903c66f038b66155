//! Criteria that need the state vector: Schmidt rank, entropy of
//! entanglement and the pure-state concurrence.

use super::{fmt_list, upper_bound, CriterionId, CriterionVerdict, Verdict};
use crate::error::Result;
use crate::linalg::{kron, C64};
use crate::pauli;
use crate::states::{require_qubits, schmidt, PureState};

/// Separable iff exactly one Schmidt coefficient is non-zero.
pub fn schmidt_rank_criterion(psi: &PureState) -> CriterionVerdict {
    let data = schmidt(psi);
    let verdict = if data.rank > 1 {
        Verdict::Entangled
    } else {
        Verdict::Separable
    };
    CriterionVerdict {
        criterion: CriterionId::SchmidtRank,
        statistic: data.rank as f64,
        threshold: 1.0,
        verdict,
        details: format!("coefficients={}", fmt_list(&data.coefficients)),
    }
}

/// S = −Σ λᵢ² ln λᵢ² over the Schmidt coefficients (natural log).
pub fn entanglement_entropy(psi: &PureState, tol: f64) -> CriterionVerdict {
    let data = schmidt(psi);
    let entropy: f64 = data
        .coefficients
        .iter()
        .map(|l| l * l)
        .filter(|&w| w > 0.0)
        .map(|w| -w * w.ln())
        .sum();
    let entropy = entropy.max(0.0);
    let details = format!(
        "bits={:.12} max={:.12}",
        entropy / std::f64::consts::LN_2,
        (data.coefficients.len() as f64).ln()
    );
    upper_bound(CriterionId::Entropy, entropy, 0.0, true, tol, details)
}

/// C = 2|αη − βγ| for ψ = α|00⟩ + β|01⟩ + γ|10⟩ + η|11⟩.
pub fn concurrence_pure(psi: &PureState, tol: f64) -> Result<CriterionVerdict> {
    require_qubits(psi.dims(), "concurrence is defined for two qubits")?;
    let [alpha, beta, gamma, eta]: [C64; 4] =
        psi.amplitudes().try_into().expect("two-qubit amplitudes");
    let c = 2.0 * (alpha * eta - beta * gamma).norm();
    let flip = spin_flip_overlap(psi);
    let details = format!("spin_flip_overlap={flip:.12}");
    Ok(upper_bound(CriterionId::ConcurrencePure, c, 0.0, true, tol, details))
}

/// |⟨ψ|ψ̃⟩| with ψ̃ = (σy⊗σy)ψ*.
fn spin_flip_overlap(psi: &PureState) -> f64 {
    let yy = kron(&pauli::sigma_y(), &pauli::sigma_y());
    let conj: Vec<C64> = psi.amplitudes().iter().map(|z| z.conj()).collect();
    let flipped = yy.apply(&conj);
    psi.amplitudes()
        .iter()
        .zip(&flipped)
        .map(|(a, b)| a.conj() * b)
        .sum::<C64>()
        .norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::TOL;
    use crate::linalg::BipartiteDims;
    use crate::states::{self, random_pure};

    fn skewed() -> PureState {
        PureState::qubits([0.9f64.sqrt(), 0.0, 0.0, 0.1f64.sqrt()]).unwrap()
    }

    #[test]
    fn schmidt_rank_examples() {
        let v = schmidt_rank_criterion(&states::bell_psi_plus());
        assert_eq!((v.statistic, v.verdict), (2.0, Verdict::Entangled));
        let v = schmidt_rank_criterion(&states::plus_plus());
        assert_eq!((v.statistic, v.verdict), (1.0, Verdict::Separable));
        let v = schmidt_rank_criterion(&states::basis_state(0, 0));
        assert_eq!((v.statistic, v.verdict), (1.0, Verdict::Separable));
    }

    #[test]
    fn entropy_examples() {
        let v = entanglement_entropy(&states::bell_phi_plus(), TOL);
        assert!((v.statistic - 2f64.ln()).abs() < 1e-12);
        assert_eq!(v.verdict, Verdict::Entangled);

        let v = entanglement_entropy(&states::plus_plus(), TOL);
        assert!(v.statistic.abs() < 1e-12);
        assert_eq!(v.verdict, Verdict::Separable);

        let expected = -0.9 * 0.9f64.ln() - 0.1 * 0.1f64.ln();
        let v = entanglement_entropy(&skewed(), TOL);
        assert!((v.statistic - expected).abs() < 1e-12);
        assert_eq!(v.verdict, Verdict::Entangled);
    }

    #[test]
    fn entropy_is_bounded_by_log_of_smaller_dimension() {
        let dims = BipartiteDims::new(2, 3).unwrap();
        for seed in 0..50 {
            let v = entanglement_entropy(&random_pure(dims, seed), TOL);
            assert!(v.statistic <= 2f64.ln() + 1e-12);
        }
    }

    #[test]
    fn concurrence_pure_examples() {
        let v = concurrence_pure(&states::bell_phi_plus(), TOL).unwrap();
        assert!((v.statistic - 1.0).abs() < 1e-12);
        assert_eq!(v.verdict, Verdict::Entangled);

        let v = concurrence_pure(&states::basis_state(0, 0), TOL).unwrap();
        assert_eq!(v.statistic, 0.0);
        assert_eq!(v.verdict, Verdict::Separable);

        let v = concurrence_pure(&skewed(), TOL).unwrap();
        assert!((v.statistic - 0.6).abs() < 1e-12);
    }

    #[test]
    fn concurrence_pure_equals_spin_flip_overlap() {
        for seed in 0..200 {
            let psi = random_pure(BipartiteDims::QUBITS, seed);
            let c = concurrence_pure(&psi, TOL).unwrap().statistic;
            assert!((c - spin_flip_overlap(&psi)).abs() < 1e-12);
        }
    }

    #[test]
    fn concurrence_pure_rejects_qutrits() {
        let psi = random_pure(BipartiteDims::new(2, 3).unwrap(), 0);
        assert!(concurrence_pure(&psi, TOL).is_err());
    }
}
