//! Validated bipartite states, the two-qubit Bloch–Fano form, builtin
//! families and seeded random generators.

use std::f64::consts::FRAC_1_SQRT_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    self, eigvals_hermitian, kron, partial_trace, BipartiteDims, CMat, Subsystem, C64, TOL_HERM,
    TOL_PSD,
};
use crate::pauli;

/// Trace and norm tolerance for state validation.
pub const TOL_NORM: f64 = 1e-9;
/// Schmidt coefficients above this count towards the rank.
pub const RANK_TOL: f64 = 1e-9;

/// Hermitian, unit-trace, positive semi-definite operator on C^dA ⊗ C^dB.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dims: BipartiteDims,
    mat: CMat,
}

impl DensityMatrix {
    /// Validates `mat` and wraps it. See [`validate_density`].
    pub fn new(mat: CMat, dims: BipartiteDims) -> Result<Self> {
        dims.check_square(&mat)?;
        let deviation = mat.hermitian_deviation();
        if deviation > TOL_HERM {
            return Err(Error::NotHermitian { deviation });
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > TOL_NORM || tr.im.abs() > TOL_NORM {
            return Err(Error::BadTrace { trace: tr.re });
        }
        let min = eigvals_hermitian(&mat)?[0];
        if min < -TOL_PSD {
            return Err(Error::NotPsd { min_eigenvalue: min });
        }
        Ok(Self { dims, mat })
    }

    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    pub fn into_matrix(self) -> CMat {
        self.mat
    }

    /// Reduced state of one factor.
    pub fn reduced(&self, keep: Subsystem) -> CMat {
        partial_trace(&self.mat, self.dims, keep).expect("shape checked at construction")
    }

    /// Tr(ρ·op).
    pub fn expectation(&self, op: &CMat) -> f64 {
        self.mat.trace_product(op).re
    }

    /// Eigenvalues, ascending.
    pub fn spectrum(&self) -> Vec<f64> {
        eigvals_hermitian(&self.mat).expect("Hermitian by construction")
    }

    /// Product state ρA⊗ρB (each validated as a single-system state).
    pub fn product(rho_a: &CMat, rho_b: &CMat) -> Result<Self> {
        let dims = BipartiteDims::new(rho_a.rows(), rho_b.rows())?;
        Self::new(kron(rho_a, rho_b), dims)
    }

    /// Maximally mixed state I/(dA·dB).
    pub fn maximally_mixed(dims: BipartiteDims) -> Self {
        let n = dims.total();
        Self {
            dims,
            mat: CMat::identity(n).scale(1.0 / n as f64),
        }
    }
}

/// Returns a [`DensityMatrix`] iff `m` is Hermitian, unit trace and PSD.
pub fn validate_density(m: CMat, dims: BipartiteDims) -> Result<DensityMatrix> {
    DensityMatrix::new(m, dims)
}

/// Unit vector on C^dA ⊗ C^dB, index i·dB + k.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    dims: BipartiteDims,
    amps: Vec<C64>,
}

impl PureState {
    pub fn new(amps: Vec<C64>, dims: BipartiteDims) -> Result<Self> {
        if amps.len() != dims.total() {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for dims {dims}",
                amps.len()
            )));
        }
        if let Some(idx) = amps.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite(idx));
        }
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > TOL_NORM {
            return Err(Error::BadNorm { norm });
        }
        Ok(Self { dims, amps })
    }

    /// Real amplitudes, two qubits.
    pub fn qubits(amps: [f64; 4]) -> Result<Self> {
        Self::new(
            amps.iter().map(|&x| C64::new(x, 0.0)).collect(),
            BipartiteDims::QUBITS,
        )
    }

    /// |a⟩⊗|b⟩ of two normalised local vectors.
    pub fn product(a: &[C64], b: &[C64]) -> Result<Self> {
        let dims = BipartiteDims::new(a.len(), b.len())?;
        let amps = a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect();
        Self::new(amps, dims)
    }

    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    /// |ψ⟩⟨ψ|.
    pub fn to_density(&self) -> DensityMatrix {
        pure_to_density(self)
    }
}

pub fn pure_to_density(psi: &PureState) -> DensityMatrix {
    DensityMatrix {
        dims: psi.dims,
        mat: CMat::outer(&psi.amps, &psi.amps),
    }
}

/// Schmidt decomposition ψ = Σ λᵢ |uᵢ⟩⊗|vᵢ⟩.
#[derive(Debug, Clone)]
pub struct SchmidtData {
    /// min(dA, dB) coefficients, descending.
    pub coefficients: Vec<f64>,
    pub vectors_a: Vec<Vec<C64>>,
    pub vectors_b: Vec<Vec<C64>>,
    /// Number of coefficients above [`RANK_TOL`].
    pub rank: usize,
}

impl SchmidtData {
    /// Σ λᵢ |uᵢ⟩⊗|vᵢ⟩ as a flat amplitude vector.
    pub fn reconstruct(&self) -> Vec<C64> {
        let da = self.vectors_a.first().map_or(0, Vec::len);
        let db = self.vectors_b.first().map_or(0, Vec::len);
        let mut out = vec![C64::new(0.0, 0.0); da * db];
        for ((lam, u), v) in self.coefficients.iter().zip(&self.vectors_a).zip(&self.vectors_b) {
            for i in 0..da {
                for k in 0..db {
                    out[i * db + k] += u[i] * v[k] * *lam;
                }
            }
        }
        out
    }
}

pub fn schmidt(psi: &PureState) -> SchmidtData {
    let (da, db) = (psi.dims.da(), psi.dims.db());
    let m = CMat::from_row_major(da, db, psi.amps.clone()).expect("validated amplitudes");
    // M = U S V†  ⇒  ψ = Σ sₙ |uₙ⟩ ⊗ |conj(vₙ)⟩
    let (u, s, v) = linalg::svd(&m);
    let k = s.len();
    let vectors_a = (0..k).map(|n| (0..da).map(|i| u[(i, n)]).collect()).collect();
    let vectors_b = (0..k)
        .map(|n| (0..db).map(|j| v[(j, n)].conj()).collect())
        .collect();
    let rank = s.iter().filter(|&&x| x > RANK_TOL).count();
    SchmidtData {
        coefficients: s,
        vectors_a,
        vectors_b,
        rank,
    }
}

/// Two-qubit Bloch–Fano form:
/// ρ = ¼(I⊗I + Σ rᵢ σᵢ⊗I + Σ sⱼ I⊗σⱼ + Σ τᵢⱼ σᵢ⊗σⱼ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FanoForm {
    pub r: [f64; 3],
    pub s: [f64; 3],
    pub tau: [[f64; 3]; 3],
}

impl FanoForm {
    pub fn tau_matrix(&self) -> CMat {
        let flat: Vec<f64> = self.tau.iter().flatten().copied().collect();
        CMat::from_real(3, 3, &flat)
    }
}

pub(crate) fn require_qubits(dims: BipartiteDims, reason: &'static str) -> Result<()> {
    if dims.is_qubits() {
        Ok(())
    } else {
        Err(Error::UnsupportedDims {
            da: dims.da(),
            db: dims.db(),
            reason,
        })
    }
}

pub fn fano_decompose(rho: &DensityMatrix) -> Result<FanoForm> {
    require_qubits(rho.dims, "the Fano form is implemented for two qubits")?;
    let sig = pauli::sigmas();
    let id = pauli::identity();
    let mut f = FanoForm {
        r: [0.0; 3],
        s: [0.0; 3],
        tau: [[0.0; 3]; 3],
    };
    for i in 0..3 {
        f.r[i] = rho.expectation(&kron(&sig[i], &id));
        f.s[i] = rho.expectation(&kron(&id, &sig[i]));
        for j in 0..3 {
            f.tau[i][j] = rho.expectation(&kron(&sig[i], &sig[j]));
        }
    }
    Ok(f)
}

/// Inverse of [`fano_decompose`]; fails validation for unphysical forms.
pub fn fano_compose(f: &FanoForm) -> Result<DensityMatrix> {
    let sig = pauli::sigmas();
    let id = pauli::identity();
    let mut m = CMat::identity(4);
    for i in 0..3 {
        m = &m + &kron(&sig[i], &id).scale(f.r[i]);
        m = &m + &kron(&id, &sig[i]).scale(f.s[i]);
        for j in 0..3 {
            m = &m + &kron(&sig[i], &sig[j]).scale(f.tau[i][j]);
        }
    }
    DensityMatrix::new(m.scale(0.25), BipartiteDims::QUBITS)
}

/// (|00⟩ + |11⟩)/√2.
pub fn bell_phi_plus() -> PureState {
    PureState::qubits([FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2]).expect("normalised")
}

/// (|01⟩ + |10⟩)/√2, the Bell state used by the Werner and ρ_p families.
pub fn bell_psi_plus() -> PureState {
    PureState::qubits([0.0, FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0]).expect("normalised")
}

/// Singlet (|01⟩ − |10⟩)/√2.
pub fn singlet() -> PureState {
    PureState::qubits([0.0, FRAC_1_SQRT_2, -FRAC_1_SQRT_2, 0.0]).expect("normalised")
}

/// Computational basis state |ij⟩ of two qubits.
pub fn basis_state(i: usize, j: usize) -> PureState {
    let mut amps = [0.0; 4];
    amps[2 * i + j] = 1.0;
    PureState::qubits(amps).expect("normalised")
}

/// |++⟩.
pub fn plus_plus() -> PureState {
    PureState::qubits([0.5; 4]).expect("normalised")
}

fn check_unit_interval(name: &'static str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::OutOfRange { name, value: p })
    }
}

/// Werner state p|ψ⁺⟩⟨ψ⁺| + (1−p)/4·I with |ψ⁺⟩ = (|01⟩+|10⟩)/√2.
pub fn werner(p: f64) -> Result<DensityMatrix> {
    check_unit_interval("p", p)?;
    let q = (1.0 - p) / 4.0;
    let d = (1.0 + p) / 4.0;
    let o = p / 2.0;
    let mat = CMat::from_real(
        4,
        4,
        &[
            q, 0., 0., 0., //
            0., d, o, 0., //
            0., o, d, 0., //
            0., 0., 0., q,
        ],
    );
    DensityMatrix::new(mat, BipartiteDims::QUBITS)
}

/// ρ_p = p|00⟩⟨00| + (1−p)|ψ⁺⟩⟨ψ⁺|.
pub fn rho_p_family(p: f64) -> Result<DensityMatrix> {
    check_unit_interval("p", p)?;
    let h = (1.0 - p) / 2.0;
    let mat = CMat::from_real(
        4,
        4,
        &[
            p, 0., 0., 0., //
            0., h, h, 0., //
            0., h, h, 0., //
            0., 0., 0., 0.,
        ],
    );
    DensityMatrix::new(mat, BipartiteDims::QUBITS)
}

/// Bell-diagonal state with correlation matrix diag(t) and zero Bloch vectors.
pub fn bell_diagonal(t: [f64; 3]) -> Result<DensityMatrix> {
    fano_compose(&FanoForm {
        r: [0.0; 3],
        s: [0.0; 3],
        tau: [[t[0], 0.0, 0.0], [0.0, t[1], 0.0], [0.0, 0.0, t[2]]],
    })
}

/// cos θ|00⟩ + sin θ|11⟩ for θ ∈ [0, π/4].
pub fn pure_schmidt_angle(theta: f64) -> Result<PureState> {
    if !(0.0..=std::f64::consts::FRAC_PI_4 + 1e-15).contains(&theta) {
        return Err(Error::OutOfRange {
            name: "theta",
            value: theta,
        });
    }
    PureState::qubits([theta.cos(), 0.0, 0.0, theta.sin()])
}

/// Weight and local factors of one product term.
pub type ProductTerm = (f64, CMat, CMat);

/// Σ wᵢ ρA,ᵢ⊗ρB,ᵢ. Weights must be positive and sum to 1.
pub fn mixture(terms: &[ProductTerm]) -> Result<DensityMatrix> {
    let (_, a0, b0) = terms
        .first()
        .ok_or_else(|| Error::BadWeights("no terms".into()))?;
    let dims = BipartiteDims::new(a0.rows(), b0.rows())?;
    let mut total = 0.0;
    let mut mat = CMat::zeros(dims.total(), dims.total());
    for (w, a, b) in terms {
        if w.is_nan() || *w <= 0.0 {
            return Err(Error::BadWeights(format!("weight {w} is not positive")));
        }
        if a.rows() != dims.da() || b.rows() != dims.db() || !a.is_square() || !b.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "term of shape {}x{} ⊗ {}x{} in a {dims} mixture",
                a.rows(),
                a.cols(),
                b.rows(),
                b.cols()
            )));
        }
        total += w;
        mat = &mat + &kron(a, b).scale(*w);
    }
    if (total - 1.0).abs() > TOL_NORM {
        return Err(Error::BadWeights(format!("weights sum to {total}")));
    }
    DensityMatrix::new(mat, dims)
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian_vector(rng: &mut impl Rng, n: usize) -> Vec<C64> {
    (0..n)
        .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect()
}

fn normalise(v: &mut [C64]) {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in v.iter_mut() {
        *z /= norm;
    }
}

fn haar_vector(rng: &mut impl Rng, n: usize) -> Vec<C64> {
    let mut v = gaussian_vector(rng, n);
    normalise(&mut v);
    v
}

/// Haar-random pure state.
pub fn random_pure(dims: BipartiteDims, seed: u64) -> PureState {
    let amps = haar_vector(&mut rng(seed), dims.total());
    PureState::new(amps, dims).expect("normalised Gaussian vector")
}

/// ρ = GG†/Tr(GG†) with G a (dA·dB)×rank complex Gaussian matrix.
pub fn random_mixed(dims: BipartiteDims, rank: usize, seed: u64) -> Result<DensityMatrix> {
    let n = dims.total();
    if rank == 0 || rank > n {
        return Err(Error::OutOfRange {
            name: "rank",
            value: rank as f64,
        });
    }
    let mut rng = rng(seed);
    let g = CMat::from_row_major(n, rank, gaussian_vector(&mut rng, n * rank))?;
    let ggt = &g * &g.adjoint();
    let tr = ggt.trace().re;
    let mat = ggt.scale(1.0 / tr);
    // GG† is exactly Hermitian up to rounding; symmetrise before validating.
    let mat = (&mat + &mat.adjoint()).scale(0.5);
    DensityMatrix::new(mat, dims)
}

/// Mixture of `terms` Haar-random product pure states with Dirichlet(1) weights.
pub fn random_separable(dims: BipartiteDims, terms: usize, seed: u64) -> Result<DensityMatrix> {
    Ok(random_separable_terms(dims, terms, seed)?.0)
}

/// Same as [`random_separable`], also returning the generating terms.
pub fn random_separable_terms(
    dims: BipartiteDims,
    terms: usize,
    seed: u64,
) -> Result<(DensityMatrix, Vec<ProductTerm>)> {
    if terms == 0 {
        return Err(Error::OutOfRange {
            name: "terms",
            value: 0.0,
        });
    }
    let mut rng = rng(seed);
    let raw: Vec<f64> = (0..terms).map(|_| rng.sample::<f64, _>(Exp1) + 1e-12).collect();
    let total: f64 = raw.iter().sum();
    let mut parts = Vec::with_capacity(terms);
    for w in raw {
        let a = haar_vector(&mut rng, dims.da());
        let b = haar_vector(&mut rng, dims.db());
        parts.push((w / total, CMat::outer(&a, &a), CMat::outer(&b, &b)));
    }
    let rho = mixture(&parts)?;
    Ok((rho, parts))
}

/// Local Bloch vector of a single-qubit state.
pub fn qubit_bloch_vector(rho: &CMat) -> [f64; 3] {
    let sig = pauli::sigmas();
    [0, 1, 2].map(|i| rho.trace_product(&sig[i]).re)
}
