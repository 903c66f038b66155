//! Positivity-based tests: PPT, reduction, general positive maps applied
//! through their Choi matrix, and entanglement witnesses.

use super::{fmt_list, lower_bound, CriterionId, CriterionVerdict};
use crate::error::{Error, Result};
use crate::linalg::{
    eigvals_hermitian, kron, partial_transpose, BipartiteDims, CMat, Subsystem, ONE, TOL_HERM,
};
use crate::states::DensityMatrix;

/// Minimum eigenvalue of ρ^{T_A}. Exact at 2×2 and 2×3.
pub fn ppt(rho: &DensityMatrix, tol: f64) -> CriterionVerdict {
    let pt = partial_transpose(rho.matrix(), rho.dims(), Subsystem::A)
        .expect("shape checked at construction");
    let eig = eigvals_hermitian(&pt).expect("partial transpose of a Hermitian matrix");
    let details = format!("eigenvalues={}", fmt_list(&eig));
    lower_bound(
        CriterionId::Ppt,
        eig[0],
        0.0,
        rho.dims().ppt_is_exact(),
        tol,
        details,
    )
}

/// Minimum eigenvalue over ρ_A⊗I − ρ and I⊗ρ_B − ρ. Exact at 2×2 and 2×3.
pub fn reduction(rho: &DensityMatrix, tol: f64) -> CriterionVerdict {
    let dims = rho.dims();
    let rho_a = rho.reduced(Subsystem::A);
    let rho_b = rho.reduced(Subsystem::B);
    let op_a = &kron(&rho_a, &CMat::identity(dims.db())) - rho.matrix();
    let op_b = &kron(&CMat::identity(dims.da()), &rho_b) - rho.matrix();
    let min_a = eigvals_hermitian(&op_a).expect("Hermitian")[0];
    let min_b = eigvals_hermitian(&op_b).expect("Hermitian")[0];
    let details = format!("min_eig_A={min_a:.12e} min_eig_B={min_b:.12e}");
    lower_bound(
        CriterionId::Reduction,
        min_a.min(min_b),
        0.0,
        dims.ppt_is_exact(),
        tol,
        details,
    )
}

/// Choi matrix Σᵢⱼ Eᵢⱼ ⊗ Λ(Eᵢⱼ) of the transpose map on C^d.
pub fn transpose_choi(d: usize) -> CMat {
    swap_operator(d)
}

/// Choi matrix of the reduction map Λ(X) = I·Tr X − X on C^d.
pub fn reduction_choi(d: usize) -> CMat {
    &CMat::identity(d * d) - &identity_choi(d)
}

/// Choi matrix of the identity map on C^d (the unnormalised |Ω⟩⟨Ω|).
pub fn identity_choi(d: usize) -> CMat {
    let mut c = CMat::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            c[(i * d + i, j * d + j)] = ONE;
        }
    }
    c
}

/// Swap V|φ⟩|ψ⟩ = |ψ⟩|φ⟩ on C^d ⊗ C^d.
pub fn swap_operator(d: usize) -> CMat {
    let mut v = CMat::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            v[(i * d + j, j * d + i)] = ONE;
        }
    }
    v
}

/// Applies Λ (given by its Choi matrix Σᵢⱼ Eᵢⱼ⊗Λ(Eᵢⱼ)) to one factor of ρ.
///
/// Returns the image and its bipartite dims. Λ may change the dimension:
/// the output dimension is `choi.rows() / d_in`.
pub fn apply_map(
    rho: &DensityMatrix,
    choi: &CMat,
    side: Subsystem,
) -> Result<(CMat, BipartiteDims)> {
    let dims = rho.dims();
    let d_in = dims.dim(side);
    if !choi.is_square() || !choi.rows().is_multiple_of(d_in) || choi.rows() < d_in {
        return Err(Error::DimensionMismatch(format!(
            "Choi matrix {}x{} does not act on a {d_in}-dimensional factor",
            choi.rows(),
            choi.cols()
        )));
    }
    let d_out = choi.rows() / d_in;
    // Λ(E_kl) is the (k, l) block of the Choi matrix.
    let block = |k: usize, l: usize, r: usize, c: usize| choi[(k * d_out + r, l * d_out + c)];
    let (da, db) = (dims.da(), dims.db());
    let m = rho.matrix();
    match side {
        Subsystem::B => {
            let out_dims = BipartiteDims::new(da, d_out)?;
            let mut out = CMat::zeros(da * d_out, da * d_out);
            for i in 0..da {
                for j in 0..da {
                    for k in 0..db {
                        for l in 0..db {
                            let w = m[(i * db + k, j * db + l)];
                            if w.norm_sqr() == 0.0 {
                                continue;
                            }
                            for r in 0..d_out {
                                for c in 0..d_out {
                                    out[(i * d_out + r, j * d_out + c)] += w * block(k, l, r, c);
                                }
                            }
                        }
                    }
                }
            }
            Ok((out, out_dims))
        }
        Subsystem::A => {
            let out_dims = BipartiteDims::new(d_out, db)?;
            let mut out = CMat::zeros(d_out * db, d_out * db);
            for i in 0..da {
                for j in 0..da {
                    for k in 0..db {
                        for l in 0..db {
                            let w = m[(i * db + k, j * db + l)];
                            if w.norm_sqr() == 0.0 {
                                continue;
                            }
                            for r in 0..d_out {
                                for c in 0..d_out {
                                    out[(r * db + k, c * db + l)] += w * block(i, j, r, c);
                                }
                            }
                        }
                    }
                }
            }
            Ok((out, out_dims))
        }
    }
}

/// Minimum eigenvalue of (Λ⊗I)ρ or (I⊗Λ)ρ for a positive map Λ.
pub fn map_criterion(
    rho: &DensityMatrix,
    choi: &CMat,
    side: Subsystem,
    tol: f64,
) -> Result<CriterionVerdict> {
    let (image, _) = apply_map(rho, choi, side)?;
    let scale = choi.max_abs().max(1.0);
    let deviation = image.hermitian_deviation();
    if deviation > TOL_HERM * scale {
        return Err(Error::NotHermitian { deviation });
    }
    let image = (&image + &image.adjoint()).scale(0.5);
    let eig = eigvals_hermitian(&image)?;
    let details = format!("side={side:?} eigenvalues={}", fmt_list(&eig));
    Ok(lower_bound(
        CriterionId::PositiveMap,
        eig[0],
        0.0,
        false,
        tol,
        details,
    ))
}

/// Tr(Wρ) for a Hermitian witness W; negative values certify entanglement.
pub fn witness_eval(rho: &DensityMatrix, w: &CMat, tol: f64) -> Result<CriterionVerdict> {
    rho.dims().check_square(w)?;
    let deviation = w.hermitian_deviation();
    if deviation > TOL_HERM {
        return Err(Error::NotHermitian { deviation });
    }
    let value = rho.expectation(w);
    Ok(lower_bound(
        CriterionId::Witness,
        value,
        0.0,
        false,
        tol,
        String::new(),
    ))
}
