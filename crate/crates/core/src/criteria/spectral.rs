use super::{upper_bound, CriterionId, CriterionVerdict};
use crate::linalg::{eigvals_hermitian, Subsystem};
use crate::states::DensityMatrix;

/// Largest amount by which a prefix sum of `global` exceeds the matching
/// prefix sum of `local` (zero-padded). Non-positive means `global ≺ local`.
fn majorization_excess(global: &[f64], local: &[f64]) -> f64 {
    let mut g_sum = 0.0;
    let mut l_sum = 0.0;
    let mut worst = f64::NEG_INFINITY;
    for (k, g) in global.iter().enumerate() {
        g_sum += g;
        l_sum += local.get(k).copied().unwrap_or(0.0);
        worst = worst.max(g_sum - l_sum);
    }
    worst
}

fn descending(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// Separable states satisfy λ(ρ)↓ ≺ λ(ρ_A)↓ and λ(ρ)↓ ≺ λ(ρ_B)↓.
///
/// The statistic is the largest prefix-sum excess over both reductions;
/// it is compared against 0. Necessary only, so never `Separable`.
pub fn majorization(rho: &DensityMatrix, tol: f64) -> CriterionVerdict {
    let global = descending(rho.spectrum());
    let spec_a = descending(eigvals_hermitian(&rho.reduced(Subsystem::A)).expect("Hermitian"));
    let spec_b = descending(eigvals_hermitian(&rho.reduced(Subsystem::B)).expect("Hermitian"));
    let excess_a = majorization_excess(&global, &spec_a);
    let excess_b = majorization_excess(&global, &spec_b);
    let details = format!("excess_A={excess_a:.12e} excess_B={excess_b:.12e}");
    upper_bound(
        CriterionId::Majorization,
        excess_a.max(excess_b),
        0.0,
        false,
        tol,
        details,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::{Verdict, TOL};
    use crate::states::{self, werner};

    #[test]
    fn excess_counts_padding() {
        assert_eq!(majorization_excess(&[0.5, 0.5, 0.0, 0.0], &[1.0, 0.0]), 0.0);
        assert!((majorization_excess(&[0.7, 0.3, 0.0, 0.0], &[0.6, 0.4]) - 0.1).abs() < 1e-15);
    }

    #[test]
    fn werner_holds_up_to_one_third() {
        for p in [0.0, 0.1, 0.2, 0.3, 0.333] {
            let v = majorization(&werner(p).unwrap(), TOL);
            assert_eq!(v.verdict, Verdict::Inconclusive, "p={p}");
        }
    }

    #[test]
    fn werner_fails_above_one_third() {
        for p in [0.334, 0.5, 0.9, 1.0] {
            let v = majorization(&werner(p).unwrap(), TOL);
            assert_eq!(v.verdict, Verdict::Entangled, "p={p}");
            assert!((v.statistic - (3.0 * p - 1.0) / 4.0).abs() < 1e-12);
        }
    }

    #[test]
    fn pure_product_holds_with_equality() {
        let v = majorization(&states::plus_plus().to_density(), TOL);
        assert_eq!(v.verdict, Verdict::Inconclusive);
        assert!(v.statistic.abs() < 1e-12);
    }
}
