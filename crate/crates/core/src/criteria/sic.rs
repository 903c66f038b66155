//! SIC-POVMs for d ∈ {2, 3} and the ESIC correlation criterion.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use super::{fmt_list, upper_bound, CriterionId, CriterionVerdict};
use crate::error::{Error, Result};
use crate::linalg::{kron, singular_values, CMat, C64};
use crate::pauli;
use crate::states::DensityMatrix;

/// d² subnormalised rank-one projectors Πₖ = |ψₖ⟩⟨ψₖ|/d.
#[derive(Debug, Clone)]
pub struct SicPovm {
    d: usize,
    projectors: Vec<CMat>,
}

impl SicPovm {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn projectors(&self) -> &[CMat] {
        &self.projectors
    }

    /// Eₖ = √(d(d+1)/2)·Πₖ, normalised so Σₖ Tr(Eₖρ)² = 1 on pure states.
    pub fn normalized_elements(&self) -> Vec<CMat> {
        let d = self.d as f64;
        let s = (d * (d + 1.0) / 2.0).sqrt();
        self.projectors.iter().map(|p| p.scale(s)).collect()
    }
}

/// SIC-POVM in dimension 2 (tetrahedron) or 3 (Hesse configuration).
pub fn sic_povm(d: usize) -> Result<SicPovm> {
    let projectors = match d {
        2 => {
            let s = 1.0 / 3f64.sqrt();
            [[s, s, s], [s, -s, -s], [-s, s, -s], [-s, -s, s]]
                .into_iter()
                .map(|n| (&CMat::identity(2) + &pauli::dot(n)).scale(0.25))
                .collect()
        }
        3 => {
            // Weyl–Heisenberg orbit of (0, 1, −1)/√2.
            let fiducial = [0.0, FRAC_1_SQRT_2, -FRAC_1_SQRT_2].map(|x| C64::new(x, 0.0));
            let omega = C64::from_polar(1.0, 2.0 * PI / 3.0);
            let mut out = Vec::with_capacity(9);
            for a in 0..3 {
                for b in 0..3 {
                    // (XᵃZᵇψ)ⱼ = ω^{b(j−a)} ψ_{j−a}
                    let v: Vec<C64> = (0..3)
                        .map(|j| {
                            let src = (j + 3 - a) % 3;
                            omega.powu((b * src) as u32) * fiducial[src]
                        })
                        .collect();
                    out.push(CMat::outer(&v, &v).scale(1.0 / 3.0));
                }
            }
            out
        }
        _ => {
            return Err(Error::UnsupportedDims {
                da: d,
                db: d,
                reason: "SIC-POVMs are built for d = 2 and d = 3",
            })
        }
    };
    Ok(SicPovm { d, projectors })
}

/// ‖P‖₁ ≤ 1 for separable ρ, where Pₖₗ = Tr(Eₖᴬ⊗Eₗᴮ ρ).
pub fn esic(
    rho: &DensityMatrix,
    sic_a: &SicPovm,
    sic_b: &SicPovm,
    tol: f64,
) -> Result<CriterionVerdict> {
    let dims = rho.dims();
    if sic_a.d != dims.da() || sic_b.d != dims.db() {
        return Err(Error::DimensionMismatch(format!(
            "SIC dimensions {}, {} for a {dims} state",
            sic_a.d, sic_b.d
        )));
    }
    let ea = sic_a.normalized_elements();
    let eb = sic_b.normalized_elements();
    let mut p = CMat::zeros(ea.len(), eb.len());
    for (k, a) in ea.iter().enumerate() {
        for (l, b) in eb.iter().enumerate() {
            p[(k, l)] = C64::new(rho.expectation(&kron(a, b)), 0.0);
        }
    }
    let sv = singular_values(&p);
    let norm: f64 = sv.iter().sum();
    let details = format!("singular_values={}", fmt_list(&sv));
    Ok(upper_bound(CriterionId::Esic, norm, 1.0, false, tol, details))
}
