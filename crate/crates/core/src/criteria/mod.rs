//! Separability criteria. Every criterion returns a [`CriterionVerdict`].
//!
//! Verdict taxonomy: `Entangled` is reported only when the statistic violates
//! its separable bound by more than the tolerance. `Separable` is reported
//! only by criteria that are necessary and sufficient for the given input
//! (PPT and reduction at 2×2 / 2×3, concurrence at 2×2, Schmidt rank and
//! entropy for pure states). Everything else that does not violate its bound
//! is `Inconclusive`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

mod battery;
mod bell;
mod concurrence;
mod lur;
mod positivity;
mod pure;
mod realignment;
mod sic;
mod spectral;

pub use battery::{applicable_criteria, evaluate, is_exact, BatteryConfig, StateInput};
pub use bell::{
    chsh_observables_for_phi_plus, chsh_optimize, chsh_value, ChshOptimum, Dichotomic,
    DEFAULT_CHSH_RESTARTS,
};
pub use concurrence::concurrence_mixed;
pub use lur::{lur, lur_default, lur_sign_flips};
pub use positivity::{
    apply_map, identity_choi, map_criterion, ppt, reduction, reduction_choi, swap_operator, transpose_choi,
    witness_eval,
};
pub use pure::{concurrence_pure, entanglement_entropy, schmidt_rank_criterion};
pub use realignment::{ccnr, correlation_matrix};
pub use sic::{esic, sic_povm, SicPovm};
pub use spectral::majorization;

/// Shared threshold tolerance.
pub const TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    Entangled,
    Separable,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Entangled => "Entangled",
            Verdict::Separable => "Separable",
            Verdict::Inconclusive => "Inconclusive",
        })
    }
}

/// Criterion identifiers. The string names are what the CLI and reports use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CriterionId {
    Chsh,
    ChshOptimize,
    SchmidtRank,
    Entropy,
    Ppt,
    Reduction,
    ConcurrencePure,
    Concurrence,
    Majorization,
    Ccnr,
    CorrelationMatrix,
    Esic,
    Lur,
    Witness,
    PositiveMap,
}

impl CriterionId {
    pub const ALL: [CriterionId; 15] = [
        CriterionId::Ppt,
        CriterionId::Reduction,
        CriterionId::Concurrence,
        CriterionId::Majorization,
        CriterionId::Ccnr,
        CriterionId::CorrelationMatrix,
        CriterionId::Esic,
        CriterionId::ChshOptimize,
        CriterionId::Chsh,
        CriterionId::Lur,
        CriterionId::Witness,
        CriterionId::PositiveMap,
        CriterionId::SchmidtRank,
        CriterionId::Entropy,
        CriterionId::ConcurrencePure,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CriterionId::Chsh => "chsh",
            CriterionId::ChshOptimize => "chsh_optimize",
            CriterionId::SchmidtRank => "schmidt_rank",
            CriterionId::Entropy => "entropy",
            CriterionId::Ppt => "ppt",
            CriterionId::Reduction => "reduction",
            CriterionId::ConcurrencePure => "concurrence_pure",
            CriterionId::Concurrence => "concurrence",
            CriterionId::Majorization => "majorization",
            CriterionId::Ccnr => "ccnr",
            CriterionId::CorrelationMatrix => "correlation_matrix",
            CriterionId::Esic => "esic",
            CriterionId::Lur => "lur",
            CriterionId::Witness => "witness",
            CriterionId::PositiveMap => "positive_map",
        }
    }

    /// Criteria defined only on state vectors.
    pub fn pure_only(self) -> bool {
        matches!(
            self,
            CriterionId::SchmidtRank | CriterionId::Entropy | CriterionId::ConcurrencePure
        )
    }
}

impl fmt::Display for CriterionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CriterionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        CriterionId::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::UnknownCriterion(s.to_string()))
    }
}

/// Uniform result of a criterion evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionVerdict {
    pub criterion: CriterionId,
    pub statistic: f64,
    pub threshold: f64,
    pub verdict: Verdict,
    /// Free-form diagnostics.
    pub details: String,
}

impl CriterionVerdict {
    pub fn is_entangled(&self) -> bool {
        self.verdict == Verdict::Entangled
    }
}

/// Separable states satisfy `statistic ≥ threshold`.
fn lower_bound(
    criterion: CriterionId,
    statistic: f64,
    threshold: f64,
    exact: bool,
    tol: f64,
    details: String,
) -> CriterionVerdict {
    let verdict = if statistic < threshold - tol {
        Verdict::Entangled
    } else if exact {
        Verdict::Separable
    } else {
        Verdict::Inconclusive
    };
    CriterionVerdict {
        criterion,
        statistic,
        threshold,
        verdict,
        details,
    }
}

/// Separable states satisfy `statistic ≤ threshold`.
fn upper_bound(
    criterion: CriterionId,
    statistic: f64,
    threshold: f64,
    exact: bool,
    tol: f64,
    details: String,
) -> CriterionVerdict {
    let verdict = if statistic > threshold + tol {
        Verdict::Entangled
    } else if exact {
        Verdict::Separable
    } else {
        Verdict::Inconclusive
    };
    CriterionVerdict {
        criterion,
        statistic,
        threshold,
        verdict,
        details,
    }
}

fn fmt_list(values: &[f64]) -> String {
    let parts: Vec<String> = values.iter().map(|v| format!("{v:.6e}")).collect();
    format!("[{}]", parts.join(", "))
}
