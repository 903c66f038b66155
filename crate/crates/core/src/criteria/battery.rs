//! Dispatch by [`CriterionId`] over a mixed or pure input.

use super::{
    ccnr, chsh_observables_for_phi_plus, chsh_optimize, chsh_value, concurrence_mixed,
    concurrence_pure, correlation_matrix, entanglement_entropy, esic, lur_default, majorization,
    map_criterion, ppt, reduction, reduction_choi, schmidt_rank_criterion, sic_povm,
    swap_operator, witness_eval, CriterionId, CriterionVerdict, DEFAULT_CHSH_RESTARTS, TOL,
};
use crate::error::{Error, Result};
use crate::linalg::{BipartiteDims, Subsystem};
use crate::states::{DensityMatrix, PureState};

/// A state handed to the battery.
#[derive(Debug, Clone)]
pub enum StateInput {
    Mixed(DensityMatrix),
    Pure(PureState),
}

impl StateInput {
    pub fn dims(&self) -> BipartiteDims {
        match self {
            StateInput::Mixed(rho) => rho.dims(),
            StateInput::Pure(psi) => psi.dims(),
        }
    }

    pub fn density(&self) -> DensityMatrix {
        match self {
            StateInput::Mixed(rho) => rho.clone(),
            StateInput::Pure(psi) => psi.to_density(),
        }
    }
}

/// Shared knobs for battery evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BatteryConfig {
    pub tol: f64,
    pub seed: u64,
    pub chsh_restarts: usize,
}

impl Default for BatteryConfig {
    fn default() -> Self {
        Self {
            tol: TOL,
            seed: 0,
            chsh_restarts: DEFAULT_CHSH_RESTARTS,
        }
    }
}

/// Every criterion that can run on this kind of input, in report order.
///
/// `chsh` with fixed settings is left out; it is available on request.
pub fn applicable_criteria(input: &StateInput) -> Vec<CriterionId> {
    let dims = input.dims();
    let sic_ok = |d: usize| d == 2 || d == 3;
    let mut out = vec![
        CriterionId::Ppt,
        CriterionId::Reduction,
        CriterionId::Majorization,
        CriterionId::Ccnr,
    ];
    if dims.is_qubits() {
        out.extend([
            CriterionId::Concurrence,
            CriterionId::CorrelationMatrix,
            CriterionId::ChshOptimize,
            CriterionId::Lur,
        ]);
    }
    if sic_ok(dims.da()) && sic_ok(dims.db()) {
        out.push(CriterionId::Esic);
    }
    if dims.da() == dims.db() {
        out.push(CriterionId::Witness);
    }
    out.push(CriterionId::PositiveMap);
    if let StateInput::Pure(_) = input {
        out.push(CriterionId::SchmidtRank);
        out.push(CriterionId::Entropy);
        if dims.is_qubits() {
            out.push(CriterionId::ConcurrencePure);
        }
    }
    out
}

/// True when `id` decides separability on this input, so a
/// non-Entangled verdict is a Separable certificate.
pub fn is_exact(id: CriterionId, input: &StateInput) -> bool {
    let dims = input.dims();
    match id {
        CriterionId::Ppt | CriterionId::Reduction => dims.ppt_is_exact(),
        CriterionId::Concurrence => dims.is_qubits(),
        CriterionId::SchmidtRank | CriterionId::Entropy => matches!(input, StateInput::Pure(_)),
        CriterionId::ConcurrencePure => {
            dims.is_qubits() && matches!(input, StateInput::Pure(_))
        }
        _ => false,
    }
}

/// Runs one criterion with its builtin settings.
///
/// `witness` uses the swap operator, `positive_map` applies the reduction
/// map to subsystem B, `lur` uses the Pauli triples with sign flips, and
/// `esic` uses the d = 2 / d = 3 SIC-POVMs.
pub fn evaluate(
    id: CriterionId,
    input: &StateInput,
    config: &BatteryConfig,
) -> Result<CriterionVerdict> {
    let tol = config.tol;
    if id.pure_only() {
        let StateInput::Pure(psi) = input else {
            return Err(Error::NotApplicable {
                criterion: id.name(),
                reason: "needs a pure-state input",
            });
        };
        return match id {
            CriterionId::SchmidtRank => Ok(schmidt_rank_criterion(psi)),
            CriterionId::Entropy => Ok(entanglement_entropy(psi, tol)),
            CriterionId::ConcurrencePure => concurrence_pure(psi, tol),
            _ => unreachable!(),
        };
    }
    let rho = match input {
        StateInput::Mixed(rho) => std::borrow::Cow::Borrowed(rho),
        StateInput::Pure(psi) => std::borrow::Cow::Owned(psi.to_density()),
    };
    let rho = rho.as_ref();
    match id {
        CriterionId::Ppt => Ok(ppt(rho, tol)),
        CriterionId::Reduction => Ok(reduction(rho, tol)),
        CriterionId::Concurrence => concurrence_mixed(rho, tol),
        CriterionId::Majorization => Ok(majorization(rho, tol)),
        CriterionId::Ccnr => Ok(ccnr(rho, tol)),
        CriterionId::CorrelationMatrix => correlation_matrix(rho, tol),
        CriterionId::Esic => {
            let dims = rho.dims();
            esic(rho, &sic_povm(dims.da())?, &sic_povm(dims.db())?, tol)
        }
        CriterionId::Chsh => {
            let [a, a2, b, b2] = chsh_observables_for_phi_plus();
            chsh_value(rho, &a, &a2, &b, &b2, tol)
        }
        CriterionId::ChshOptimize => {
            Ok(chsh_optimize(rho, config.chsh_restarts, config.seed, tol)?.verdict)
        }
        CriterionId::Lur => lur_default(rho, tol),
        CriterionId::Witness => {
            let dims = rho.dims();
            if dims.da() != dims.db() {
                return Err(Error::NotApplicable {
                    criterion: id.name(),
                    reason: "the swap witness needs equal local dimensions",
                });
            }
            witness_eval(rho, &swap_operator(dims.da()), tol)
        }
        CriterionId::PositiveMap => {
            map_criterion(rho, &reduction_choi(rho.dims().db()), Subsystem::B, tol)
        }
        CriterionId::SchmidtRank | CriterionId::Entropy | CriterionId::ConcurrencePure => {
            unreachable!("handled above")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::Verdict;
    use crate::states::{self, werner};

    #[test]
    fn pure_only_criteria_reject_mixed_inputs() {
        let input = StateInput::Mixed(werner(0.5).unwrap());
        assert!(matches!(
            evaluate(CriterionId::SchmidtRank, &input, &BatteryConfig::default()),
            Err(Error::NotApplicable { .. })
        ));
    }

    #[test]
    fn applicable_lists_by_input_kind() {
        let mixed = StateInput::Mixed(werner(0.5).unwrap());
        let list = applicable_criteria(&mixed);
        assert!(list.contains(&CriterionId::Concurrence));
        assert!(!list.contains(&CriterionId::SchmidtRank));

        let pure = StateInput::Pure(states::bell_phi_plus());
        let list = applicable_criteria(&pure);
        assert!(list.contains(&CriterionId::SchmidtRank));
        assert!(list.contains(&CriterionId::ConcurrencePure));

        let qutrit = StateInput::Mixed(DensityMatrix::maximally_mixed(
            BipartiteDims::new(2, 3).unwrap(),
        ));
        let list = applicable_criteria(&qutrit);
        assert!(list.contains(&CriterionId::Esic));
        assert!(!list.contains(&CriterionId::Concurrence));
        assert!(!list.contains(&CriterionId::Witness));
    }

    #[test]
    fn every_applicable_criterion_evaluates() {
        let config = BatteryConfig::default();
        for input in [
            StateInput::Mixed(werner(0.8).unwrap()),
            StateInput::Pure(states::bell_phi_plus()),
            StateInput::Mixed(DensityMatrix::maximally_mixed(
                BipartiteDims::new(2, 3).unwrap(),
            )),
            StateInput::Mixed(DensityMatrix::maximally_mixed(
                BipartiteDims::new(3, 3).unwrap(),
            )),
        ] {
            for id in applicable_criteria(&input) {
                let v = evaluate(id, &input, &config).unwrap();
                assert_eq!(v.criterion, id);
            }
        }
    }

    #[test]
    fn exactness_follows_dimensions_and_input_kind() {
        let qubits = StateInput::Mixed(werner(0.5).unwrap());
        assert!(is_exact(CriterionId::Ppt, &qubits));
        assert!(is_exact(CriterionId::Concurrence, &qubits));
        assert!(!is_exact(CriterionId::Ccnr, &qubits));
        assert!(!is_exact(CriterionId::SchmidtRank, &qubits));
        let qutrits = StateInput::Mixed(DensityMatrix::maximally_mixed(
            BipartiteDims::new(3, 3).unwrap(),
        ));
        assert!(!is_exact(CriterionId::Ppt, &qutrits));
        assert!(is_exact(
            CriterionId::SchmidtRank,
            &StateInput::Pure(states::bell_phi_plus())
        ));
    }

    #[test]
    fn exact_criteria_certify_only_when_exact() {
        let config = BatteryConfig::default();
        for input in [
            StateInput::Mixed(werner(0.1).unwrap()),
            StateInput::Pure(states::plus_plus()),
            StateInput::Mixed(DensityMatrix::maximally_mixed(
                BipartiteDims::new(3, 3).unwrap(),
            )),
        ] {
            for id in applicable_criteria(&input) {
                let v = evaluate(id, &input, &config).unwrap();
                if v.verdict == Verdict::Separable {
                    assert!(is_exact(id, &input), "{id}");
                }
            }
        }
    }

    #[test]
    fn werner_high_p_is_flagged_by_all_exact_criteria() {
        let input = StateInput::Mixed(werner(0.9).unwrap());
        let config = BatteryConfig::default();
        for id in [
            CriterionId::Ppt,
            CriterionId::Reduction,
            CriterionId::Concurrence,
        ] {
            assert_eq!(
                evaluate(id, &input, &config).unwrap().verdict,
                Verdict::Entangled
            );
        }
    }
}
