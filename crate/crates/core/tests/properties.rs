//! Property-based checks of the invariants shared across modules.

use proptest::prelude::*;
use separability::criteria::{
    ccnr, chsh_value, esic, majorization, map_criterion, ppt, reduction, reduction_choi,
    sic_povm, transpose_choi, Dichotomic, TOL,
};
use separability::decomposition::{liqiao_verify, LiQiaoCandidate};
use separability::linalg::{
    eigvals_hermitian, kron, partial_trace, partial_transpose, realign, sqrt_psd, trace_norm,
    BipartiteDims, CMat, Subsystem, C64,
};
use separability::states::{
    fano_compose, fano_decompose, mixture, random_mixed, random_pure, random_separable, schmidt,
    validate_density, werner, DensityMatrix,
};

fn dims_strategy() -> impl Strategy<Value = BipartiteDims> {
    prop_oneof![Just((2, 2)), Just((2, 3)), Just((3, 2)), Just((3, 3))]
        .prop_map(|(a, b)| BipartiteDims::new(a, b).unwrap())
}

/// Complex n×n matrix with entries in the unit square.
fn matrix(n: usize) -> impl Strategy<Value = CMat> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), n * n).prop_map(move |v| {
        CMat::from_row_major(n, n, v.into_iter().map(|(r, i)| C64::new(r, i)).collect()).unwrap()
    })
}

fn dims_and_matrix() -> impl Strategy<Value = (BipartiteDims, CMat)> {
    dims_strategy().prop_flat_map(|d| (Just(d), matrix(d.total())))
}

fn hermitian(m: &CMat) -> CMat {
    (m + &m.adjoint()).scale(0.5)
}

/// Gram–Schmidt on the columns of `m`.
fn unitary_from(m: &CMat) -> CMat {
    let n = m.rows();
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v: Vec<C64> = (0..n).map(|i| m[(i, j)]).collect();
        for u in &cols {
            let overlap: C64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(u) {
                *x -= overlap * y;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols.push(v.into_iter().map(|z| z / norm).collect());
    }
    let mut u = CMat::zeros(n, n);
    for (j, col) in cols.iter().enumerate() {
        for (i, z) in col.iter().enumerate() {
            u[(i, j)] = *z;
        }
    }
    u
}

fn qubit_state(seed: u64) -> DensityMatrix {
    random_mixed(BipartiteDims::QUBITS, 1 + seed as usize % 4, seed).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn partial_transpose_is_an_involution((dims, m) in dims_and_matrix()) {
        for side in [Subsystem::A, Subsystem::B] {
            let pt = partial_transpose(&m, dims, side).unwrap();
            let back = partial_transpose(&pt, dims, side).unwrap();
            prop_assert_eq!(&back, &m);
            prop_assert!((pt.trace() - m.trace()).norm() < 1e-12);
            let h = hermitian(&m);
            prop_assert!(partial_transpose(&h, dims, side).unwrap().hermitian_deviation() < 1e-15);
        }
    }

    #[test]
    fn partial_trace_preserves_trace((dims, m) in dims_and_matrix()) {
        for keep in [Subsystem::A, Subsystem::B] {
            let reduced = partial_trace(&m, dims, keep).unwrap();
            prop_assert!((reduced.trace() - m.trace()).norm() < 1e-12);
        }
    }

    #[test]
    fn eigenvalues_sum_to_trace(m in matrix(6)) {
        let h = hermitian(&m);
        let sum: f64 = eigvals_hermitian(&h).unwrap().iter().sum();
        prop_assert!((sum - h.trace().re).abs() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn trace_norm_is_unitarily_invariant(m in matrix(4), u in matrix(4), v in matrix(4)) {
        let (u, v) = (unitary_from(&u), unitary_from(&v));
        let rotated = &(&u * &m) * &v.adjoint();
        prop_assert!((trace_norm(&rotated) - trace_norm(&m)).abs() < 1e-9);
    }

    #[test]
    fn realigned_product_norm_factorises(
        a in matrix(2), b in matrix(3), swap in any::<bool>()
    ) {
        let (a, b) = if swap { (b, a) } else { (a, b) };
        let dims = BipartiteDims::new(a.rows(), b.rows()).unwrap();
        let r = realign(&kron(&a, &b), dims).unwrap();
        let want = a.frobenius_norm() * b.frobenius_norm();
        prop_assert!((trace_norm(&r) - want).abs() < 1e-9);
    }

    #[test]
    fn sqrt_psd_squares_back(g in matrix(4)) {
        let h = &g * &g.adjoint();
        let h = hermitian(&h);
        let s = sqrt_psd(&h).unwrap();
        let err = (&(&s * &s) - &h).frobenius_norm();
        prop_assert!(err <= 1e-9 * h.frobenius_norm().max(1.0));
    }

    #[test]
    fn validation_tracks_each_invariant(seed in any::<u64>(), eps in 1e-7..1e-3f64) {
        let dims = BipartiteDims::QUBITS;
        let rho = random_mixed(dims, 4, seed).unwrap().into_matrix();
        let mut skew = CMat::zeros(4, 4);
        skew[(0, 1)] = C64::new(eps, 0.0);
        prop_assert!(validate_density(&rho + &skew, dims).is_err());
        prop_assert!(validate_density(rho.scale(1.0 + eps), dims).is_err());

        // Pushing along a pure-state direction past the smallest eigenvalue
        // breaks positivity while keeping trace and Hermiticity.
        let min = eigvals_hermitian(&rho).unwrap()[0];
        let psi = random_pure(dims, seed ^ 1).to_density().into_matrix();
        let t = (min + eps) * 4.0;
        let pushed = &rho - &(&psi.scale(t) - &CMat::identity(4).scale(t / 4.0));
        let pushed_min = eigvals_hermitian(&pushed).unwrap()[0];
        let verdict = validate_density(pushed, dims);
        prop_assert_eq!(verdict.is_ok(), pushed_min >= -1e-9);

        let mut nudge = CMat::zeros(4, 4);
        nudge[(1, 2)] = C64::new(1e-13, 1e-13);
        nudge[(2, 1)] = C64::new(1e-13, -1e-13);
        prop_assert!(validate_density(&rho + &nudge, dims).is_ok());
    }

    #[test]
    fn schmidt_reconstructs(seed in any::<u64>(), dims in dims_strategy()) {
        let psi = random_pure(dims, seed);
        let s = schmidt(&psi);
        let back = s.reconstruct();
        let err = back
            .iter()
            .zip(psi.amplitudes())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        prop_assert!(err <= 1e-9);
        let total: f64 = s.coefficients.iter().map(|l| l * l).sum();
        prop_assert!((total - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn fano_round_trip(seed in any::<u64>()) {
        let rho = qubit_state(seed);
        let back = fano_compose(&fano_decompose(&rho).unwrap()).unwrap();
        prop_assert!((&back.into_matrix() - rho.matrix()).max_abs() <= 1e-9);
    }

    #[test]
    fn mixtures_pass_ppt(seed in any::<u64>(), terms in 1usize..10, dims in dims_strategy()) {
        let rho = random_separable(dims, terms, seed).unwrap();
        let v = ppt(&rho, TOL);
        prop_assert!(!v.is_entangled());
        if dims.ppt_is_exact() {
            prop_assert_eq!(v.verdict, separability::criteria::Verdict::Separable);
        }
    }

    #[test]
    fn majorization_implies_reduction(seed in any::<u64>()) {
        let rho = qubit_state(seed);
        if majorization(&rho, TOL).is_entangled() {
            prop_assert!(reduction(&rho, TOL).is_entangled());
        }
    }

    #[test]
    fn choi_maps_reproduce_ppt_and_reduction(seed in any::<u64>()) {
        let rho = qubit_state(seed);
        let via_t = map_criterion(&rho, &transpose_choi(2), Subsystem::A, TOL).unwrap();
        prop_assert!((via_t.statistic - ppt(&rho, TOL).statistic).abs() <= 1e-9);
        let via_r_a = map_criterion(&rho, &reduction_choi(2), Subsystem::A, TOL).unwrap();
        let via_r_b = map_criterion(&rho, &reduction_choi(2), Subsystem::B, TOL).unwrap();
        let direct = reduction(&rho, TOL).statistic;
        prop_assert!((via_r_a.statistic.min(via_r_b.statistic) - direct).abs() <= 1e-9);
    }

    #[test]
    fn chsh_is_linear_in_the_state(s1 in any::<u64>(), s2 in any::<u64>(), w in 0.01..0.99f64) {
        let (r1, r2) = (qubit_state(s1), qubit_state(s2));
        let mixed = DensityMatrix::new(
            &r1.matrix().scale(w) + &r2.matrix().scale(1.0 - w),
            BipartiteDims::QUBITS,
        )
        .unwrap();
        let obs: Vec<Dichotomic> = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.6, 0.8], [0.0, 0.0, 1.0]]
            .into_iter()
            .map(Dichotomic::spin)
            .collect();
        let value = |rho: &DensityMatrix| {
            chsh_value(rho, &obs[0], &obs[1], &obs[2], &obs[3], TOL).unwrap().statistic
        };
        prop_assert!((value(&mixed) - (w * value(&r1) + (1.0 - w) * value(&r2))).abs() < 1e-12);
    }

    #[test]
    fn near_certificates_recompose_closely(
        seed in any::<u64>(),
        terms in 1usize..6,
        jitter in prop::collection::vec(-1e-7..1e-7f64, 36),
    ) {
        let rho = random_separable(BipartiteDims::QUBITS, terms, seed).unwrap();
        // Move every term inward a little, then jitter it.
        let (_, parts) = separability::states::random_separable_terms(
            BipartiteDims::QUBITS, terms, seed,
        ).unwrap();
        let shrink = |m: &CMat, off: usize| {
            let v = separability::states::qubit_bloch_vector(m);
            [0, 1, 2].map(|j| v[j] * (1.0 - 1e-6) + jitter[(off + j) % 36])
        };
        let cand = LiQiaoCandidate::new(
            parts.iter().map(|t| t.0).collect(),
            parts.iter().enumerate().map(|(i, t)| shrink(&t.1, 6 * i)).collect(),
            parts.iter().enumerate().map(|(i, t)| shrink(&t.2, 6 * i + 3)).collect(),
        ).unwrap();
        let res = liqiao_verify(&cand, &rho).unwrap();
        if res.certifies() {
            let back = cand.compose().unwrap().into_matrix();
            prop_assert!((&back - rho.matrix()).max_abs() <= 2e-6);
        }
    }
}

#[test]
fn werner_spectrum_closed_form() {
    for k in 0..=100 {
        let p = k as f64 / 100.0;
        let spec = werner(p).unwrap().spectrum();
        let mut want = [(1.0 - p) / 4.0, (1.0 - p) / 4.0, (1.0 - p) / 4.0, (1.0 + 3.0 * p) / 4.0];
        want.sort_by(f64::total_cmp);
        for (got, want) in spec.iter().zip(want) {
            assert!((got - want).abs() < 1e-12, "p={p}");
        }
    }
}

#[test]
fn ccnr_detections_are_also_esic_detections_on_werner() {
    let sic = sic_povm(2).unwrap();
    for k in 0..=1000 {
        let rho = werner(k as f64 / 1000.0).unwrap();
        if ccnr(&rho, TOL).is_entangled() {
            assert!(esic(&rho, &sic, &sic, TOL).unwrap().is_entangled(), "k={k}");
        }
    }
}

#[test]
fn majorization_implies_reduction_on_werner_grid() {
    for k in 0..=1000 {
        let rho = werner(k as f64 / 1000.0).unwrap();
        if majorization(&rho, TOL).is_entangled() {
            assert!(reduction(&rho, TOL).is_entangled(), "k={k}");
        }
    }
}

#[test]
fn mixture_of_explicit_terms_is_ppt_separable() {
    let up = CMat::from_real(2, 2, &[1.0, 0.0, 0.0, 0.0]);
    let down = CMat::from_real(2, 2, &[0.0, 0.0, 0.0, 1.0]);
    let rho = mixture(&[(0.5, up.clone(), down.clone()), (0.5, down, up)]).unwrap();
    assert_eq!(ppt(&rho, TOL).verdict, separability::criteria::Verdict::Separable);
}
